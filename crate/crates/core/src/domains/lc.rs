use std::cmp::Reverse;
use std::collections::BinaryHeap;

use itertools::Itertools;

use super::{DomainError, BRUTE_FORCE_LIMIT};
use crate::ApprovalMatrix;

/// Separate voter and candidate orders, each listed first to last with
/// 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrderWitness {
    voter_order: Vec<usize>,
    candidate_order: Vec<usize>,
}

fn check_permutation(order: &[usize], what: &str) -> Result<(), DomainError> {
    let mut seen = vec![false; order.len()];
    for &e in order {
        if e >= order.len() || seen[e] {
            return Err(DomainError::InvalidOrder(format!(
                "{what} order {order:?} is not a permutation of 0..{}",
                order.len()
            )));
        }
        seen[e] = true;
    }
    Ok(())
}

pub(crate) fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (p, &e) in order.iter().enumerate() {
        pos[e] = p;
    }
    pos
}

impl LinearOrderWitness {
    pub fn new(voter_order: Vec<usize>, candidate_order: Vec<usize>) -> Result<Self, DomainError> {
        check_permutation(&voter_order, "voter")?;
        check_permutation(&candidate_order, "candidate")?;
        Ok(LinearOrderWitness {
            voter_order,
            candidate_order,
        })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        LinearOrderWitness {
            voter_order: (0..n).collect(),
            candidate_order: (0..m).collect(),
        }
    }

    pub fn voter_order(&self) -> &[usize] {
        &self.voter_order
    }

    pub fn candidate_order(&self) -> &[usize] {
        &self.candidate_order
    }

    /// ρ, 0-based.
    pub fn voter_positions(&self) -> Vec<usize> {
        positions(&self.voter_order)
    }

    /// κ, 0-based.
    pub fn candidate_positions(&self) -> Vec<usize> {
        positions(&self.candidate_order)
    }

    pub fn fits(&self, matrix: &ApprovalMatrix) -> bool {
        self.voter_order.len() == matrix.num_voters()
            && self.candidate_order.len() == matrix.num_candidates()
    }
}

/// For voters i before j and candidates a before b, `A[i][b] = A[j][a] = 1`
/// forces `A[i][a] = 1`.
///
/// A zero at (i, a) is violated exactly when i approves something after a
/// and someone after i approves a, so one pass over the latest approved
/// candidate per voter and latest supporter per candidate suffices.
pub fn check_lc_order(matrix: &ApprovalMatrix, witness: &LinearOrderWitness) -> bool {
    if !witness.fits(matrix) {
        return false;
    }
    let rho = witness.voter_positions();
    let kappa = witness.candidate_positions();
    let (n, m) = (matrix.num_voters(), matrix.num_candidates());
    let latest_approved: Vec<Option<usize>> = (0..n)
        .map(|i| matrix.approvals(i).iter().map(|&c| kappa[c]).max())
        .collect();
    let latest_supporter: Vec<Option<usize>> = (0..m)
        .map(|c| matrix.supporters(c).iter().map(|&i| rho[i]).max())
        .collect();
    for i in 0..n {
        let Some(r) = latest_approved[i] else {
            continue;
        };
        for a in 0..m {
            if matrix.approves(i, a) || kappa[a] >= r {
                continue;
            }
            if latest_supporter[a].is_some_and(|u| rho[i] < u) {
                return false;
            }
        }
    }
    true
}

/// Direct quadruple check; reference for [`check_lc_order`].
pub fn check_lc_order_naive(matrix: &ApprovalMatrix, witness: &LinearOrderWitness) -> bool {
    if !witness.fits(matrix) {
        return false;
    }
    let (vo, co) = (witness.voter_order(), witness.candidate_order());
    let (n, m) = (vo.len(), co.len());
    for pi in 0..n {
        for pj in pi + 1..n {
            for pa in 0..m {
                for pb in pa + 1..m {
                    let (i, j, a, b) = (vo[pi], vo[pj], co[pa], co[pb]);
                    if matrix.approves(i, b) && matrix.approves(j, a) && !matrix.approves(i, a) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Exhaustive LC recognition for matrices up to 7x7.
///
/// Voter orders are tried lexicographically. For a fixed voter order the
/// forbidden candidate precedences are pairwise, so a valid candidate order
/// is a topological order of the implied digraph; the smallest one is taken.
pub fn find_lc_order_bruteforce(
    matrix: &ApprovalMatrix,
) -> Result<Option<LinearOrderWitness>, DomainError> {
    let (n, m) = (matrix.num_voters(), matrix.num_candidates());
    if n > BRUTE_FORCE_LIMIT || m > BRUTE_FORCE_LIMIT {
        return Err(DomainError::TooLarge {
            rows: n,
            cols: m,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    for voter_order in (0..n).permutations(n) {
        let rho = positions(&voter_order);
        // succ[b] holds a when b must precede a.
        let mut succ = vec![Vec::new(); m];
        let mut indegree = vec![0usize; m];
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                // Placing a before b is forbidden.
                let forbidden = (0..n).any(|i| {
                    !matrix.approves(i, a)
                        && matrix.approves(i, b)
                        && matrix.supporters(a).iter().any(|&j| rho[j] > rho[i])
                });
                if forbidden {
                    succ[b].push(a);
                    indegree[a] += 1;
                }
            }
        }
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..m).filter(|&c| indegree[c] == 0).map(Reverse).collect();
        let mut candidate_order = Vec::with_capacity(m);
        while let Some(Reverse(c)) = heap.pop() {
            candidate_order.push(c);
            for &a in &succ[c] {
                indegree[a] -= 1;
                if indegree[a] == 0 {
                    heap.push(Reverse(a));
                }
            }
        }
        if candidate_order.len() == m {
            let witness = LinearOrderWitness {
                voter_order,
                candidate_order,
            };
            debug_assert!(check_lc_order(matrix, &witness));
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::fixtures;
    use proptest::prelude::*;

    #[test]
    fn fixture_identity_is_lc() {
        let (a, w) = fixtures::lc_not_vci();
        assert!(check_lc_order(&a, &w));
        assert!(check_lc_order_naive(&a, &w));
    }

    #[test]
    fn example1_falsifying_order() {
        // Candidates c1, c3, c2, c4: v1 approves c2 after c3, v2 comes later
        // and approves c3, but v1 does not.
        let a = fixtures::example1_matrix();
        let w = LinearOrderWitness::new(vec![0, 1, 2], vec![0, 2, 1, 3]).unwrap();
        assert!(!check_lc_order_naive(&a, &w));
        assert!(!check_lc_order(&a, &w));
        assert!(check_lc_order(&a, &LinearOrderWitness::identity(3, 4)));
    }

    #[test]
    fn one_by_one() {
        for v in [true, false] {
            let a = ApprovalMatrix::from_rows(&[vec![v]]);
            assert!(check_lc_order(&a, &LinearOrderWitness::identity(1, 1)));
        }
    }

    #[test]
    fn bruteforce_examples() {
        let a = fixtures::example1_matrix();
        let w = find_lc_order_bruteforce(&a).unwrap().unwrap();
        assert!(check_lc_order_naive(&a, &w));
        let (fx, id) = fixtures::lc_not_vci();
        assert_eq!(find_lc_order_bruteforce(&fx).unwrap(), Some(id));
        let switch = ApprovalMatrix::from_rows(&[vec![true, false], vec![false, true]]);
        let w = find_lc_order_bruteforce(&switch).unwrap().unwrap();
        assert!(check_lc_order_naive(&switch, &w));
        let big = ApprovalMatrix::from_rows(&vec![vec![true; 8]; 2]);
        assert!(matches!(
            find_lc_order_bruteforce(&big),
            Err(DomainError::TooLarge { .. })
        ));
    }

    #[test]
    fn non_lc_matrix_is_rejected() {
        // Three pairwise-crossing "switch" patterns: the 3x3 identity-free
        // complement-of-matching has no consistent order.
        let a = ApprovalMatrix::from_rows(&[
            vec![true, true, false],
            vec![false, true, true],
            vec![true, false, true],
        ]);
        let exhaustive = (0..3usize).permutations(3).any(|vo| {
            (0..3usize).permutations(3).any(|co| {
                check_lc_order_naive(&a, &LinearOrderWitness::new(vo.clone(), co).unwrap())
            })
        });
        assert_eq!(find_lc_order_bruteforce(&a).unwrap().is_some(), exhaustive);
    }

    #[test]
    fn rejects_bad_permutations() {
        assert!(LinearOrderWitness::new(vec![0, 0], vec![0]).is_err());
        assert!(LinearOrderWitness::new(vec![1], vec![0]).is_err());
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = ApprovalMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), n)
                .prop_map(|rows| ApprovalMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn fast_check_matches_naive(a in arb_matrix(6), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut vo: Vec<usize> = (0..a.num_voters()).collect();
            let mut co: Vec<usize> = (0..a.num_candidates()).collect();
            vo.shuffle(&mut rng);
            co.shuffle(&mut rng);
            let w = LinearOrderWitness::new(vo, co).unwrap();
            prop_assert_eq!(check_lc_order(&a, &w), check_lc_order_naive(&a, &w));
        }

        #[test]
        fn bruteforce_matches_exhaustive(a in arb_matrix(4)) {
            let (n, m) = (a.num_voters(), a.num_candidates());
            let exhaustive = (0..n).permutations(n).any(|vo| {
                (0..m).permutations(m).any(|co| {
                    check_lc_order_naive(&a, &LinearOrderWitness::new(vo.clone(), co).unwrap())
                })
            });
            let found = find_lc_order_bruteforce(&a).unwrap();
            if let Some(w) = &found {
                prop_assert!(check_lc_order_naive(&a, w));
            }
            prop_assert_eq!(found.is_some(), exhaustive);
        }
    }
}
