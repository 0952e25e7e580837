//! 2-satisfiability via strongly connected components of the implication graph.

use std::ops::Not;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lit {
    var: usize,
    positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TwoSat {
    num_vars: usize,
    graph: Vec<Vec<usize>>,
}

impl TwoSat {
    pub fn new(num_vars: usize) -> Self {
        TwoSat {
            num_vars,
            graph: vec![Vec::new(); 2 * num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// `a ∨ b`.
    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        self.graph[(!a).node()].push(b.node());
        self.graph[(!b).node()].push(a.node());
    }

    /// `a ⇒ b`.
    pub fn add_implication(&mut self, a: Lit, b: Lit) {
        self.add_clause(!a, b);
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.add_clause(a, a);
    }

    /// A satisfying assignment, or `None` when some variable shares a
    /// component with its negation.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let comp = tarjan(&self.graph);
        (0..self.num_vars)
            .map(|v| {
                let (t, f) = (comp[2 * v], comp[2 * v + 1]);
                // Tarjan numbers components in reverse topological order.
                (t != f).then_some(t < f)
            })
            .collect()
    }
}

fn tarjan(graph: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = graph.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let (mut next, mut components) = (0, 0);
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, 0));
        while let Some(&(v, edge)) = calls.last() {
            if edge < graph[v].len() {
                calls.last_mut().expect("frame").1 += 1;
                let w = graph[v][edge];
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = components;
                        if w == v {
                            break;
                        }
                    }
                    components += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_cases() {
        let mut s = TwoSat::new(2);
        s.add_implication(Lit::pos(0), Lit::pos(1));
        s.add_unit(Lit::pos(0));
        assert_eq!(s.solve(), Some(vec![true, true]));
        s.add_unit(Lit::neg(1));
        assert_eq!(s.solve(), None);
        assert_eq!(TwoSat::new(0).solve(), Some(vec![]));
    }

    proptest! {
        #[test]
        fn matches_exhaustive(
            vars in 1usize..7,
            raw in proptest::collection::vec((0usize..7, any::<bool>(), 0usize..7, any::<bool>()), 0..14),
        ) {
            let clauses: Vec<(Lit, Lit)> = raw
                .iter()
                .map(|&(a, pa, b, pb)| {
                    let lit = |v: usize, p: bool| if p { Lit::pos(v % vars) } else { Lit::neg(v % vars) };
                    (lit(a, pa), lit(b, pb))
                })
                .collect();
            let mut s = TwoSat::new(vars);
            for &(a, b) in &clauses {
                s.add_clause(a, b);
            }
            let holds = |x: &[bool], l: Lit| x[l.var] == l.positive;
            let exhaustive = (0u32..1 << vars).any(|bits| {
                let x: Vec<bool> = (0..vars).map(|v| bits >> v & 1 == 1).collect();
                clauses.iter().all(|&(a, b)| holds(&x, a) || holds(&x, b))
            });
            let found = s.solve();
            if let Some(x) = &found {
                prop_assert!(clauses.iter().all(|&(a, b)| holds(x, a) || holds(x, b)));
            }
            prop_assert_eq!(found.is_some(), exhaustive);
        }
    }
}
