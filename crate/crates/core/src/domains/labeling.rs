use std::collections::BTreeMap;

use itertools::Itertools;

use super::lc::positions;
use super::twosat::{Lit, TwoSat};
use super::{DomainError, BRUTE_FORCE_LIMIT};
use crate::ApprovalMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    L,
    R,
}

/// Labels for every zero of a matrix under fixed row and column orders.
/// Keys are original `(voter, candidate)` indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrLabeling {
    row_order: Vec<usize>,
    col_order: Vec<usize>,
    labels: BTreeMap<(usize, usize), Label>,
}

impl LrLabeling {
    pub fn row_order(&self) -> &[usize] {
        &self.row_order
    }

    pub fn col_order(&self) -> &[usize] {
        &self.col_order
    }

    pub fn labels(&self) -> &BTreeMap<(usize, usize), Label> {
        &self.labels
    }

    pub fn get(&self, voter: usize, candidate: usize) -> Option<Label> {
        self.labels.get(&(voter, candidate)).copied()
    }

    /// Every zero is labeled, each L sees only L-labeled zeros to its right
    /// and each R only R-labeled zeros below.
    pub fn satisfies_conditions(&self, matrix: &ApprovalMatrix) -> bool {
        let (ro, co) = (&self.row_order, &self.col_order);
        for (pr, &i) in ro.iter().enumerate() {
            for (pc, &c) in co.iter().enumerate() {
                if matrix.approves(i, c) {
                    if self.labels.contains_key(&(i, c)) {
                        return false;
                    }
                    continue;
                }
                let ok = match self.get(i, c) {
                    None => false,
                    Some(Label::L) => co[pc + 1..]
                        .iter()
                        .all(|&d| self.get(i, d) == Some(Label::L)),
                    Some(Label::R) => ro[pr + 1..]
                        .iter()
                        .all(|&j| self.get(j, c) == Some(Label::R)),
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

fn check_orders(
    matrix: &ApprovalMatrix,
    row_order: &[usize],
    col_order: &[usize],
) -> Result<(), DomainError> {
    let is_perm = |order: &[usize], len: usize| {
        order.len() == len && order.iter().copied().sorted().eq(0..len)
    };
    if !is_perm(row_order, matrix.num_voters()) {
        return Err(DomainError::InvalidOrder(format!(
            "row order {row_order:?}"
        )));
    }
    if !is_perm(col_order, matrix.num_candidates()) {
        return Err(DomainError::InvalidOrder(format!(
            "column order {col_order:?}"
        )));
    }
    Ok(())
}

/// Decides whether the zeros can be labeled L/R under the given orders
/// (each listed first to last). Encoded as 2-SAT with one variable per zero,
/// true meaning L: a zero left of a 1 is R, a zero above a 1 is L, an L
/// propagates rightwards through zeros and an R propagates downwards.
pub fn lr_labeling_feasible(
    matrix: &ApprovalMatrix,
    row_order: &[usize],
    col_order: &[usize],
) -> Result<Option<LrLabeling>, DomainError> {
    check_orders(matrix, row_order, col_order)?;
    let (n, m) = (matrix.num_voters(), matrix.num_candidates());
    let mut var = vec![vec![usize::MAX; m]; n];
    let mut zeros = Vec::new();
    for pr in 0..n {
        for pc in 0..m {
            if !matrix.approves(row_order[pr], col_order[pc]) {
                var[pr][pc] = zeros.len();
                zeros.push((row_order[pr], col_order[pc]));
            }
        }
    }
    let mut sat = TwoSat::new(zeros.len());
    for pr in 0..n {
        let mut one_right = false;
        let mut next_zero: Option<usize> = None;
        for pc in (0..m).rev() {
            let z = var[pr][pc];
            if z == usize::MAX {
                one_right = true;
                continue;
            }
            if one_right {
                sat.add_unit(Lit::neg(z));
            }
            if let Some(z2) = next_zero {
                sat.add_implication(Lit::pos(z), Lit::pos(z2));
            }
            next_zero = Some(z);
        }
    }
    for pc in 0..m {
        let mut one_below = false;
        let mut next_zero: Option<usize> = None;
        for pr in (0..n).rev() {
            let z = var[pr][pc];
            if z == usize::MAX {
                one_below = true;
                continue;
            }
            if one_below {
                sat.add_unit(Lit::pos(z));
            }
            if let Some(z2) = next_zero {
                sat.add_implication(Lit::neg(z), Lit::neg(z2));
            }
            next_zero = Some(z);
        }
    }
    let Some(assignment) = sat.solve() else {
        return Ok(None);
    };
    let labeling = LrLabeling {
        row_order: row_order.to_vec(),
        col_order: col_order.to_vec(),
        labels: zeros
            .into_iter()
            .zip(assignment)
            .map(|(z, l)| (z, if l { Label::L } else { Label::R }))
            .collect(),
    };
    assert!(
        labeling.satisfies_conditions(matrix),
        "2-SAT labeling failed re-check"
    );
    Ok(Some(labeling))
}

/// Exhaustive refutation of voter/candidate interval membership for
/// matrices up to 7x7: true when no pair of orders admits an L/R labeling.
/// A false answer is inconclusive.
///
/// Before building the 2-SAT instance, each order pair is screened with
/// row bitmasks of zeros forced to R (a 1 to the right) and forced to L
/// (a 1 below); any overlap is an immediate contradiction.
pub fn refute_vci_small(matrix: &ApprovalMatrix) -> Result<bool, DomainError> {
    let (n, m) = (matrix.num_voters(), matrix.num_candidates());
    if n > BRUTE_FORCE_LIMIT || m > BRUTE_FORCE_LIMIT {
        return Err(DomainError::TooLarge {
            rows: n,
            cols: m,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let zero_mask: Vec<u8> = (0..n)
        .map(|i| {
            (0..m)
                .filter(|&c| !matrix.approves(i, c))
                .fold(0u8, |acc, c| acc | 1 << c)
        })
        .collect();

    let col_orders: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let forced_r: Vec<Vec<u8>> = col_orders
        .iter()
        .map(|co| {
            let kappa = positions(co);
            (0..n)
                .map(|i| {
                    let last = matrix.approvals(i).iter().map(|&c| kappa[c]).max();
                    (0..m)
                        .filter(|&c| last.is_some_and(|r| kappa[c] < r))
                        .fold(0u8, |acc, c| acc | 1 << c)
                        & zero_mask[i]
                })
                .collect()
        })
        .collect();

    for row_order in (0..n).permutations(n) {
        let rho = positions(&row_order);
        let latest: Vec<Option<usize>> = (0..m)
            .map(|c| matrix.supporters(c).iter().map(|&i| rho[i]).max())
            .collect();
        let forced_l: Vec<u8> = (0..n)
            .map(|i| {
                (0..m)
                    .filter(|&c| latest[c].is_some_and(|u| rho[i] < u))
                    .fold(0u8, |acc, c| acc | 1 << c)
                    & zero_mask[i]
            })
            .collect();
        for (co, fr) in col_orders.iter().zip(&forced_r) {
            if (0..n).any(|i| fr[i] & forced_l[i] != 0) {
                continue;
            }
            if lr_labeling_feasible(matrix, &row_order, co)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{fixtures, generate, intervals_to_matrix, vci_to_lc_order, IntervalMode};
    use proptest::prelude::*;
    use rand::SeedableRng;

    /// Switch submatrices force their two zeros apart.
    fn switches_are_split(matrix: &ApprovalMatrix, labeling: &LrLabeling) -> bool {
        let (n, m) = (matrix.num_voters(), matrix.num_candidates());
        for i in 0..n {
            for j in 0..n {
                for a in 0..m {
                    for b in 0..m {
                        let switch = matrix.approves(i, a)
                            && !matrix.approves(i, b)
                            && !matrix.approves(j, a)
                            && matrix.approves(j, b);
                        if switch && labeling.get(i, b) == labeling.get(j, a) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn brute_labeling_exists(a: &ApprovalMatrix, ro: &[usize], co: &[usize]) -> bool {
        let zeros: Vec<(usize, usize)> = (0..a.num_voters())
            .flat_map(|i| (0..a.num_candidates()).map(move |c| (i, c)))
            .filter(|&(i, c)| !a.approves(i, c))
            .collect();
        (0u64..1 << zeros.len()).any(|bits| {
            let labeling = LrLabeling {
                row_order: ro.to_vec(),
                col_order: co.to_vec(),
                labels: zeros
                    .iter()
                    .enumerate()
                    .map(|(k, &z)| {
                        (
                            z,
                            if bits >> k & 1 == 1 {
                                Label::L
                            } else {
                                Label::R
                            },
                        )
                    })
                    .collect(),
            };
            labeling.satisfies_conditions(a)
        })
    }

    #[test]
    fn switch_matrix() {
        let a = ApprovalMatrix::from_rows(&[vec![true, false], vec![false, true]]);
        let lab = lr_labeling_feasible(&a, &[0, 1], &[0, 1]).unwrap().unwrap();
        assert_eq!(lab.get(0, 1), Some(Label::L));
        assert_eq!(lab.get(1, 0), Some(Label::R));
        assert!(switches_are_split(&a, &lab));
    }

    #[test]
    fn all_ones() {
        let a = ApprovalMatrix::from_rows(&vec![vec![true; 3]; 2]);
        let lab = lr_labeling_feasible(&a, &[1, 0], &[2, 0, 1])
            .unwrap()
            .unwrap();
        assert!(lab.labels().is_empty());
    }

    #[test]
    fn fixture_identity_is_infeasible() {
        let (a, w) = fixtures::lc_not_vci();
        assert_eq!(
            lr_labeling_feasible(&a, w.voter_order(), w.candidate_order()).unwrap(),
            None
        );
    }

    #[test]
    fn fixture_is_refuted() {
        let (a, _) = fixtures::lc_not_vci();
        assert!(refute_vci_small(&a).unwrap());
    }

    #[test]
    fn small_refutations() {
        assert!(!refute_vci_small(&fixtures::example1_matrix()).unwrap());
        assert!(!refute_vci_small(&ApprovalMatrix::from_rows(&[vec![true]])).unwrap());
        assert!(!refute_vci_small(&ApprovalMatrix::from_rows(&[vec![false]])).unwrap());
        let big = ApprovalMatrix::from_rows(&vec![vec![true; 2]; 8]);
        assert!(matches!(
            refute_vci_small(&big),
            Err(DomainError::TooLarge { .. })
        ));
    }

    #[test]
    fn rejects_bad_orders() {
        let a = fixtures::example1_matrix();
        assert!(lr_labeling_feasible(&a, &[0, 1], &[0, 1, 2, 3]).is_err());
        assert!(lr_labeling_feasible(&a, &[0, 1, 1], &[0, 1, 2, 3]).is_err());
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = ApprovalMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), n)
                .prop_map(|rows| ApprovalMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn two_sat_matches_enumeration(a in arb_matrix(4), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut ro: Vec<usize> = (0..a.num_voters()).collect();
            let mut co: Vec<usize> = (0..a.num_candidates()).collect();
            ro.shuffle(&mut rng);
            co.shuffle(&mut rng);
            let found = lr_labeling_feasible(&a, &ro, &co).unwrap();
            if let Some(lab) = &found {
                prop_assert!(lab.satisfies_conditions(&a));
                prop_assert!(switches_are_split(&a, lab));
            }
            prop_assert_eq!(found.is_some(), brute_labeling_exists(&a, &ro, &co));
        }

        #[test]
        fn pruned_refutation_matches_unpruned(a in arb_matrix(4)) {
            let (n, m) = (a.num_voters(), a.num_candidates());
            let unpruned = !(0..n).permutations(n).any(|ro| {
                (0..m)
                    .permutations(m)
                    .any(|co| lr_labeling_feasible(&a, &ro, &co).unwrap().is_some())
            });
            prop_assert_eq!(refute_vci_small(&a).unwrap(), unpruned);
        }

        #[test]
        fn vci_matrices_are_not_refuted(seed in any::<u64>(), n in 1usize..6, m in 1usize..6) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = generate::random_vci_matrix(&mut rng, n, m, 8);
            prop_assert!(!refute_vci_small(&a).unwrap());
        }

        #[test]
        fn intersection_models_are_labelable(seed in any::<u64>(), n in 1usize..7, m in 1usize..7) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let model = generate::random_interval_model(&mut rng, IntervalMode::Intersection, n, m, 8);
            let a = intervals_to_matrix(&model);
            let w = vci_to_lc_order(&model).unwrap();
            let lab = lr_labeling_feasible(&a, w.voter_order(), w.candidate_order()).unwrap();
            prop_assert!(lab.is_some());
        }
    }
}
