//! Bounded-variable revised simplex with an explicit basis inverse.
//!
//! Columns `0..n` are the structural variables, `n..n + rows` one artificial
//! per row. Phase 1 maximizes `-Σ artificials`; phase 2 fixes every
//! artificial to `[0, 0]` and maximizes the real objective. Entering
//! columns are priced by Dantzig's rule; after a run of degenerate steps the
//! choice falls back to Bland's rule (lowest eligible index, ties in the
//! ratio test to the lowest basic index) until progress resumes, which rules
//! out cycling.

use num_integer::Integer;

use super::{LpProblem, LpSolution, LpStatus};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Tableau {
    rows: usize,
    structural: usize,
    columns: Vec<Vec<(usize, Rational)>>,
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
    cost: Vec<Rational>,
    value: Vec<Rational>,
    state: Vec<State>,
    head: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    duals: Vec<Rational>,
    pivots: usize,
    degenerate_run: usize,
    /// Column entries as integers, when every coefficient is integral.
    int_columns: Option<Vec<Vec<(usize, i128)>>>,
    /// `(C, C·cost)` for the least common cost denominator `C`.
    scaled_cost: Option<(i128, Vec<i128>)>,
}

/// Consecutive zero-length steps tolerated before switching to Bland's rule.
/// Bland's rule stays in force until the objective strictly improves, so no
/// basis sequence can repeat.
const DEGENERATE_LIMIT: usize = 50;

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl Tableau {
    fn new(problem: &LpProblem) -> Self {
        let n = problem.num_vars();
        let rows = problem.constraints().len();
        let mut columns: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n + rows];
        for (r, c) in problem.constraints().iter().enumerate() {
            for (j, a) in &c.terms {
                columns[*j].push((r, a.clone()));
            }
        }
        let mut lower: Vec<Rational> = problem.bounds().iter().map(|b| b.lower.clone()).collect();
        let mut upper: Vec<Option<Rational>> =
            problem.bounds().iter().map(|b| b.upper.clone()).collect();
        let mut value = lower.clone();
        let mut state = vec![State::AtLower; n];
        let mut head = Vec::with_capacity(rows);
        let mut binv = vec![vec![Rational::zero(); rows]; rows];
        for (r, c) in problem.constraints().iter().enumerate() {
            let residual = &c.rhs - &c.evaluate(&value[..n]);
            let sign = if residual.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            };
            columns[n + r].push((r, sign.clone()));
            binv[r][r] = sign;
            lower.push(Rational::zero());
            upper.push(None);
            value.push(residual.abs());
            state.push(State::Basic(r));
            head.push(n + r);
        }
        let mut t = Tableau {
            rows,
            structural: n,
            columns,
            lower,
            upper,
            cost: Vec::new(),
            value,
            state,
            head,
            binv,
            duals: Vec::new(),
            pivots: 0,
            degenerate_run: 0,
            int_columns: None,
            scaled_cost: None,
        };
        t.int_columns = t
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, a)| match a.as_small() {
                        Some((v, 1)) => Some((*r, v as i128)),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect();
        let mut phase1 = vec![Rational::zero(); n];
        phase1.extend(std::iter::repeat_n(-Rational::one(), rows));
        t.set_cost(phase1);
        t
    }

    fn set_cost(&mut self, cost: Vec<Rational>) {
        self.duals = (0..self.rows)
            .map(|s| {
                (0..self.rows)
                    .filter(|&r| !self.binv[r][s].is_zero())
                    .map(|r| &cost[self.head[r]] * &self.binv[r][s])
                    .sum()
            })
            .collect();
        self.scaled_cost = scale_to_integers(&cost);
        self.cost = cost;
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.upper[j].as_ref() == Some(&self.lower[j])
    }

    fn reduced_cost(&self, j: usize) -> Rational {
        let priced: Rational = self.columns[j]
            .iter()
            .filter(|(r, _)| !self.duals[*r].is_zero())
            .map(|(r, a)| &self.duals[*r] * a)
            .sum();
        &self.cost[j] - &priced
    }

    /// `B⁻¹ a_j`.
    fn ftran(&self, j: usize) -> Vec<Rational> {
        let mut alpha = vec![Rational::zero(); self.rows];
        for (s, a) in &self.columns[j] {
            for (r, slot) in alpha.iter_mut().enumerate() {
                let b = &self.binv[r][*s];
                if !b.is_zero() {
                    *slot += b * a;
                }
            }
        }
        alpha
    }

    /// Nonbasic column whose move improves the objective, with direction
    /// `+1` (raise from lower) or `-1` (lower from upper). Dantzig's rule
    /// (largest `|d_j|`, lowest index on ties) unless `bland`, which takes
    /// the lowest eligible index.
    fn choose_entering(&self, bland: bool) -> Option<(usize, i32, Rational)> {
        if let Some(choice) = self.choose_entering_scaled(bland) {
            return choice.map(|(j, dir)| (j, dir, self.reduced_cost(j)));
        }
        let mut best: Option<(usize, i32, Rational)> = None;
        for j in 0..self.columns.len() {
            let st = self.state[j];
            if matches!(st, State::Basic(_)) || self.is_fixed(j) {
                continue;
            }
            let d = self.reduced_cost(j);
            let dir = match st {
                State::AtLower if d.is_positive() => 1,
                State::AtUpper if d.is_negative() => -1,
                _ => continue,
            };
            if bland {
                return Some((j, dir, d));
            }
            if best.as_ref().is_none_or(|(_, _, b)| d.abs() > b.abs()) {
                best = Some((j, dir, d));
            }
        }
        best
    }

    /// The same choice as the exact pricing pass, computed on `C·D·d_j`
    /// in `i128` where `D` is the least common dual denominator. `None` if
    /// the data is not integral after scaling or some product overflows.
    #[allow(clippy::type_complexity)]
    fn choose_entering_scaled(&self, bland: bool) -> Option<Option<(usize, i32)>> {
        let columns = self.int_columns.as_ref()?;
        let (c_scale, cost) = self.scaled_cost.as_ref()?;
        let (d_scale, duals) = scale_to_integers(&self.duals)?;
        let mut best: Option<(usize, i32, i128)> = None;
        for j in 0..self.columns.len() {
            let st = self.state[j];
            if matches!(st, State::Basic(_)) || self.is_fixed(j) {
                continue;
            }
            let mut priced: i128 = 0;
            for &(r, a) in &columns[j] {
                priced = priced.checked_add(duals[r].checked_mul(a)?)?;
            }
            let d = cost[j]
                .checked_mul(d_scale)?
                .checked_sub(priced.checked_mul(*c_scale)?)?;
            let dir = match st {
                State::AtLower if d > 0 => 1,
                State::AtUpper if d < 0 => -1,
                _ => continue,
            };
            if bland {
                return Some(Some((j, dir)));
            }
            if best.is_none_or(|(_, _, b)| d.unsigned_abs() > b.unsigned_abs()) {
                best = Some((j, dir, d));
            }
        }
        Some(best.map(|(j, dir, _)| (j, dir)))
    }

    fn step(&mut self) -> Step {
        let bland = self.degenerate_run >= DEGENERATE_LIMIT;
        let Some((q, dir, d)) = self.choose_entering(bland) else {
            return Step::Optimal;
        };
        let alpha = self.ftran(q);

        // Ratio test. `None` in `leave` means the entering variable flips bounds.
        let mut best: Option<Rational> = self.upper[q].as_ref().map(|u| u - &self.lower[q]);
        let mut leave: Option<usize> = None;
        for (r, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let b = self.head[r];
            // Rate of change of the basic variable per unit step.
            let rate = if dir > 0 { -a } else { a.clone() };
            let limit = if rate.is_negative() {
                (&self.value[b] - &self.lower[b]) / (-&rate)
            } else {
                match &self.upper[b] {
                    Some(u) => (u - &self.value[b]) / &rate,
                    None => continue,
                }
            };
            let better = match &best {
                None => true,
                Some(t) => match limit.cmp(t) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => leave.is_some_and(|p| b < self.head[p]),
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                best = Some(limit);
                leave = Some(r);
            }
        }
        let Some(t) = best else {
            return Step::Unbounded;
        };

        if t.is_zero() {
            self.degenerate_run += 1;
        } else {
            self.degenerate_run = 0;
            let signed_t = if dir > 0 { t.clone() } else { -&t };
            self.value[q] += &signed_t;
            for (r, a) in alpha.iter().enumerate() {
                if !a.is_zero() {
                    let b = self.head[r];
                    self.value[b] -= a * &signed_t;
                }
            }
        }

        match leave {
            None => {
                self.state[q] = if dir > 0 {
                    State::AtUpper
                } else {
                    State::AtLower
                };
                self.value[q] = if dir > 0 {
                    self.upper[q]
                        .clone()
                        .expect("flip requires a finite upper bound")
                } else {
                    self.lower[q].clone()
                };
            }
            Some(p) => {
                let b = self.head[p];
                let rate_negative = (dir > 0) == alpha[p].is_positive();
                if rate_negative {
                    self.state[b] = State::AtLower;
                    self.value[b] = self.lower[b].clone();
                } else {
                    self.state[b] = State::AtUpper;
                    self.value[b] = self.upper[b].clone().expect("bounded leaving variable");
                }
                self.pivot(p, q, &alpha, &d);
            }
        }
        Step::Moved
    }

    /// Makes column `q` basic in row `p`, updating `B⁻¹` and the duals.
    fn pivot(&mut self, p: usize, q: usize, alpha: &[Rational], reduced: &Rational) {
        let inv = alpha[p].recip();
        let pivot_row: Vec<Rational> = self.binv[p].iter().map(|v| v * &inv).collect();
        for (r, a) in alpha.iter().enumerate() {
            if r == p || a.is_zero() {
                continue;
            }
            let row = &mut self.binv[r];
            for (slot, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *slot -= a * pv;
                }
            }
        }
        if !reduced.is_zero() {
            for (y, pv) in self.duals.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *y += reduced * pv;
                }
            }
        }
        self.binv[p] = pivot_row;
        self.head[p] = q;
        self.state[q] = State::Basic(p);
        self.pivots += 1;
    }

    fn run(&mut self) -> LpStatus {
        loop {
            match self.step() {
                Step::Optimal => return LpStatus::Optimal,
                Step::Unbounded => return LpStatus::Unbounded,
                Step::Moved => {}
            }
        }
    }

    /// Pivots zero-valued artificials out of the basis where some structural
    /// column can replace them; the rest belong to redundant rows.
    fn expel_artificials(&mut self) {
        for p in 0..self.rows {
            if self.head[p] < self.structural {
                continue;
            }
            let replacement = (0..self.structural).find_map(|j| {
                if matches!(self.state[j], State::Basic(_)) {
                    return None;
                }
                let entry: Rational = self.columns[j]
                    .iter()
                    .map(|(s, a)| &self.binv[p][*s] * a)
                    .sum();
                (!entry.is_zero()).then_some(j)
            });
            if let Some(j) = replacement {
                let alpha = self.ftran(j);
                let b = self.head[p];
                self.state[b] = State::AtLower;
                self.pivot(p, j, &alpha, &Rational::zero());
            }
        }
        for a in self.structural..self.columns.len() {
            self.upper[a] = Some(Rational::zero());
        }
    }
}

/// `(D, D·values)` with `D` the least common denominator, if it all fits.
fn scale_to_integers(values: &[Rational]) -> Option<(i128, Vec<i128>)> {
    let mut lcm: i128 = 1;
    for v in values {
        let (_, den) = v.as_small()?;
        let den = den as i128;
        lcm = (lcm / lcm.gcd(&den)).checked_mul(den)?;
    }
    let scaled = values
        .iter()
        .map(|v| {
            let (num, den) = v.as_small()?;
            (num as i128).checked_mul(lcm / den as i128)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((lcm, scaled))
}

/// Maximizes `problem` exactly and returns a basic optimal solution.
///
/// Infeasibility and unboundedness are reported through
/// [`LpSolution::status`]. Identical inputs yield identical outputs.
pub fn solve(problem: &LpProblem) -> LpSolution {
    let mut t = Tableau::new(problem);
    let n = t.structural;
    let failed = |status, pivots| LpSolution {
        status,
        point: Vec::new(),
        objective_value: Rational::zero(),
        basic: Vec::new(),
        at_upper: Vec::new(),
        pivots,
    };

    t.run();
    if t.value[n..].iter().any(|v| !v.is_zero()) {
        return failed(LpStatus::Infeasible, t.pivots);
    }
    t.expel_artificials();
    let mut cost = problem.objective().to_vec();
    cost.extend(std::iter::repeat_n(Rational::zero(), t.rows));
    t.set_cost(cost);
    if t.run() == LpStatus::Unbounded {
        return failed(LpStatus::Unbounded, t.pivots);
    }

    let point = t.value[..n].to_vec();
    let mut basic: Vec<usize> = t.head.iter().copied().filter(|&j| j < n).collect();
    basic.sort_unstable();
    let at_upper = (0..n).filter(|&j| t.state[j] == State::AtUpper).collect();
    LpSolution {
        status: LpStatus::Optimal,
        objective_value: problem.objective_value(&point),
        point,
        basic,
        at_upper,
        pivots: t.pivots,
    }
}
