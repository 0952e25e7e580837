//! Consecutive-ones recognition.
//!
//! Sets that pairwise overlap (intersect without nesting) are grouped into
//! overlap components. Inside a component the admissible arrangements are
//! unique up to reversal and are built by incremental partition refinement:
//! each set added in BFS order either splits the current block sequence at
//! its ends or extends it at one end. Unions of distinct components are
//! laminar and a smaller union always sits inside a single block of its
//! parent, so the final order nests child layouts inside parent blocks.

use crate::ApprovalMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Reorder columns so every row's ones are contiguous (candidate interval).
    Columns,
    /// Reorder rows so every column's ones are contiguous (voter interval).
    Rows,
}

/// A permutation of the chosen axis (0-based, listed first to last) under
/// which the ones are consecutive, or `None` when no such order exists.
pub fn consecutive_ones_order(matrix: &ApprovalMatrix, axis: Axis) -> Option<Vec<usize>> {
    let (ground, sets): (usize, Vec<Vec<usize>>) = match axis {
        Axis::Columns => (
            matrix.num_candidates(),
            (0..matrix.num_voters())
                .map(|i| matrix.approvals(i).to_vec())
                .collect(),
        ),
        Axis::Rows => (
            matrix.num_voters(),
            (0..matrix.num_candidates())
                .map(|c| matrix.supporters(c).to_vec())
                .collect(),
        ),
    };
    let order = order_for_sets(ground, &sets)?;
    assert!(
        is_consecutive_order(&order, &sets),
        "consecutive-ones order failed verification"
    );
    Some(order)
}

/// `order` is a permutation of `0..order.len()` and every set occupies a
/// contiguous stretch of it.
pub fn is_consecutive_order(order: &[usize], sets: &[Vec<usize>]) -> bool {
    let mut position = vec![usize::MAX; order.len()];
    for (p, &e) in order.iter().enumerate() {
        if e >= order.len() || position[e] != usize::MAX {
            return false;
        }
        position[e] = p;
    }
    sets.iter().all(|s| {
        if s.is_empty() {
            return true;
        }
        let (lo, hi) = s.iter().fold((usize::MAX, 0), |(lo, hi), &e| {
            (lo.min(position[e]), hi.max(position[e]))
        });
        hi - lo + 1 == s.len()
    })
}

struct Component {
    union: Vec<bool>,
    size: usize,
    blocks: Vec<Vec<usize>>,
    single: bool,
}

/// Consecutive arrangement of `0..ground` for the given family of subsets.
pub fn order_for_sets(ground: usize, sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut family: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .filter(|s| s.len() >= 2 && s.len() < ground)
        .collect();
    family.sort();
    family.dedup();

    let member: Vec<Vec<bool>> = family
        .iter()
        .map(|s| {
            let mut bits = vec![false; ground];
            for &e in s {
                bits[e] = true;
            }
            bits
        })
        .collect();
    let overlaps = |a: usize, b: usize| {
        let common = family[a].iter().filter(|&&e| member[b][e]).count();
        common > 0 && common < family[a].len() && common < family[b].len()
    };

    let f = family.len();
    let mut seen = vec![false; f];
    let mut components = Vec::new();
    for start in 0..f {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut bfs = vec![start];
        let mut head = 0;
        while head < bfs.len() {
            let s = bfs[head];
            head += 1;
            for t in 0..f {
                if !seen[t] && overlaps(s, t) {
                    seen[t] = true;
                    bfs.push(t);
                }
            }
        }
        let blocks = refine(ground, bfs.iter().map(|&s| (&family[s], &member[s])))?;
        let mut union = vec![false; ground];
        for &s in &bfs {
            for &e in &family[s] {
                union[e] = true;
            }
        }
        components.push(Component {
            size: union.iter().filter(|&&b| b).count(),
            union,
            blocks,
            single: bfs.len() == 1,
        });
    }

    // A lone set equal to another component's union adds nothing.
    let redundant: Vec<bool> = (0..components.len())
        .map(|c| {
            components[c].single
                && (0..components.len()).any(|d| {
                    d != c && !components[d].single && components[d].union == components[c].union
                })
        })
        .collect();
    let mut comps: Vec<Component> = components
        .into_iter()
        .zip(redundant)
        .filter(|(_, r)| !r)
        .map(|(c, _)| c)
        .collect();
    comps.sort_by(|a, b| b.size.cmp(&a.size));

    // parent[c] = the smallest strictly larger union containing comps[c].
    let contains = |outer: &Component, inner: &Component| {
        inner.union.iter().zip(&outer.union).all(|(&i, &o)| !i || o)
    };
    let mut parent = vec![None; comps.len()];
    for c in 0..comps.len() {
        for p in (0..c).rev() {
            if comps[p].size > comps[c].size && contains(&comps[p], &comps[c]) {
                parent[c] = Some(p);
                break;
            }
        }
    }
    // Block of the parent hosting each child.
    let mut children: Vec<Vec<Vec<usize>>> = comps
        .iter()
        .map(|c| vec![Vec::new(); c.blocks.len()])
        .collect();
    let mut roots = Vec::new();
    for c in 0..comps.len() {
        match parent[c] {
            None => roots.push(c),
            Some(p) => {
                let probe = comps[c]
                    .union
                    .iter()
                    .position(|&b| b)
                    .expect("nonempty union");
                let block = comps[p].blocks.iter().position(|b| b.contains(&probe))?;
                let host: &Vec<usize> = &comps[p].blocks[block];
                let inside = comps[c]
                    .union
                    .iter()
                    .enumerate()
                    .all(|(e, &b)| !b || host.contains(&e));
                if !inside {
                    return None;
                }
                children[p][block].push(c);
            }
        }
    }

    fn layout(c: usize, comps: &[Component], children: &[Vec<Vec<usize>>], out: &mut Vec<usize>) {
        for (b, block) in comps[c].blocks.iter().enumerate() {
            arrange(block, &children[c][b], comps, children, out);
        }
    }

    /// Lays out `elements`, keeping each listed child component contiguous.
    fn arrange(
        elements: &[usize],
        kids: &[usize],
        comps: &[Component],
        children: &[Vec<Vec<usize>>],
        out: &mut Vec<usize>,
    ) {
        let mut units: Vec<Vec<usize>> = kids
            .iter()
            .map(|&k| {
                let mut sub = Vec::new();
                layout(k, comps, children, &mut sub);
                sub
            })
            .collect();
        for &e in elements {
            if !kids.iter().any(|&k| comps[k].union[e]) {
                units.push(vec![e]);
            }
        }
        units.sort_by_key(|u| *u.iter().min().expect("nonempty unit"));
        out.extend(units.into_iter().flatten());
    }

    let everything: Vec<usize> = (0..ground).collect();
    let mut order = Vec::with_capacity(ground);
    arrange(&everything, &roots, &comps, &children, &mut order);
    Some(order)
}

/// Block sequence for one overlap component, sets given in an order where
/// each set overlaps an earlier one.
fn refine<'a>(
    ground: usize,
    mut sets: impl Iterator<Item = (&'a Vec<usize>, &'a Vec<bool>)>,
) -> Option<Vec<Vec<usize>>> {
    let (first, _) = sets.next()?;
    let mut blocks = vec![first.clone()];
    let mut placed = vec![false; ground];
    for &e in first {
        placed[e] = true;
    }
    for (set, member) in sets {
        let outside: Vec<usize> = set.iter().copied().filter(|&e| !placed[e]).collect();
        let touched: Vec<usize> = (0..blocks.len())
            .filter(|&b| blocks[b].iter().any(|&e| member[e]))
            .collect();
        let (&a, &b) = (touched.first()?, touched.last()?);
        if touched.len() != b - a + 1 {
            return None;
        }
        let full = |idx: usize| blocks[idx].iter().all(|&e| member[e]);
        if (a + 1..b).any(|idx| !full(idx)) {
            return None;
        }
        let last = blocks.len() - 1;
        let split = |block: &Vec<usize>| -> (Vec<usize>, Vec<usize>) {
            block.iter().partition(|&&e| member[e])
        };
        if outside.is_empty() {
            if a == b {
                // Nested in a single block: cannot overlap any placed set.
                return None;
            }
            let (b_in, b_out) = split(&blocks[b]);
            let (a_in, a_out) = split(&blocks[a]);
            let mut next = Vec::with_capacity(blocks.len() + 2);
            next.extend(blocks[..a].iter().cloned());
            next.push(a_out);
            next.push(a_in);
            next.extend(blocks[a + 1..b].iter().cloned());
            next.push(b_in);
            next.push(b_out);
            next.extend(blocks[b + 1..].iter().cloned());
            next.retain(|blk| !blk.is_empty());
            blocks = next;
        } else {
            let right_ok = b == last && (a == b || full(b));
            let left_ok = a == 0 && (a == b || full(a));
            if right_ok {
                let (a_in, a_out) = split(&blocks[a]);
                let mut next: Vec<Vec<usize>> = blocks[..a].to_vec();
                next.push(a_out);
                next.push(a_in);
                next.extend(blocks[a + 1..].iter().cloned());
                next.push(outside.clone());
                next.retain(|blk| !blk.is_empty());
                blocks = next;
            } else if left_ok {
                let (b_in, b_out) = split(&blocks[b]);
                let mut next = vec![outside.clone()];
                next.extend(blocks[..b].iter().cloned());
                next.push(b_in);
                next.push(b_out);
                next.extend(blocks[b + 1..].iter().cloned());
                next.retain(|blk| !blk.is_empty());
                blocks = next;
            } else {
                return None;
            }
            for e in outside {
                placed[e] = true;
            }
        }
    }
    Some(blocks)
}
