//! Exact winner determination: LP relaxation, domination shifting and the
//! residual re-solve, plus the single-vertex shortcut for strictly
//! decreasing weights.

use std::fmt;

use crate::domains::{consecutive_ones_order, dominates, Axis};
use crate::ratlp::{self, LpStatus};
use crate::thiele_lp::{build_lp, fractional_objective, ThieleLpError};
use crate::{score_committee, ApprovalMatrix, Committee, Election, Rational, WeightSystem};

/// Why the input was shown to lie outside the supported domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationCertificate {
    /// The residual LP returned a basic optimum with these fractional
    /// candidates (original indices).
    FractionalResidualVertex(Vec<usize>),
    /// The domination-free residual matrix has no consecutive-ones column order.
    ResidualNotConsecutiveOnes,
    /// The full LP vertex has these fractional candidates.
    FractionalVertex(Vec<usize>),
}

impl fmt::Display for ViolationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |c: &[usize]| {
            c.iter()
                .map(|j| (j + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Self::FractionalResidualVertex(c) => {
                write!(
                    f,
                    "fractional residual vertex on candidates {{{}}}",
                    one_based(c)
                )
            }
            Self::ResidualNotConsecutiveOnes => write!(f, "failed CI check on the residual matrix"),
            Self::FractionalVertex(c) => {
                write!(f, "fractional LP vertex on candidates {{{}}}", one_based(c))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Weights(#[from] ThieleLpError),
    #[error("weights must be strictly decreasing and positive for extreme-point mode")]
    WeightsNotStrictlyDecreasingPositive,
    #[error("domain violation: {0}")]
    DomainViolation(ViolationCertificate),
    #[error("candidate {recipient} can still absorb weight from candidate {donor}")]
    NotShifted { recipient: usize, donor: usize },
    #[error("expected {expected} candidate values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("LP solver reported {0:?}")]
    Lp(LpStatus),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftStep {
    pub recipient: usize,
    pub donor: usize,
    pub amount: Rational,
}

/// Moves mass from dominated to dominating candidates until no candidate
/// `j` with `x_j < 1` dominates a candidate `j'` with `x_j' > 0`.
///
/// Each step picks the pair maximizing `|N_j \ N_j'|`, ties to the smallest
/// recipient and then the smallest donor, and moves `min(1 - x_j, x_j')`.
pub fn dominance_shift(election: &Election, x: &[Rational]) -> (Vec<Rational>, Vec<ShiftStep>) {
    let matrix = election.matrix();
    let m = matrix.num_candidates();
    assert_eq!(x.len(), m, "x must have one entry per candidate");
    let pairs = domination_pairs(matrix);
    let mut x = x.to_vec();
    let mut steps = Vec::new();
    let one = Rational::one();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for &(gain, j, jp) in &pairs {
            if x[j] < one && x[jp].is_positive() {
                best = Some((gain, j, jp));
                break;
            }
        }
        let Some((_, j, jp)) = best else { break };
        let amount = (&one - &x[j]).min(x[jp].clone());
        x[j] += &amount;
        x[jp] -= &amount;
        steps.push(ShiftStep {
            recipient: j,
            donor: jp,
            amount,
        });
    }
    (x, steps)
}

/// `(|N_j \ N_j'|, j, j')` for every domination, best first.
fn domination_pairs(matrix: &ApprovalMatrix) -> Vec<(usize, usize, usize)> {
    let m = matrix.num_candidates();
    let mut pairs = Vec::new();
    for j in 0..m {
        for jp in 0..m {
            if j != jp && dominates(matrix, j, jp) {
                let gain = matrix.supporters(j).len() - matrix.supporters(jp).len();
                pairs.push((gain, j, jp));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs
}

/// The instance left after fixing integral candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualInstance {
    pub excluded: Vec<usize>,
    pub fixed: Vec<usize>,
    /// Fractional candidates, ascending; column `p` of the residual matrix is
    /// candidate `fractional[p]`.
    pub fractional: Vec<usize>,
    pub k_prime: usize,
    /// Per voter, the number of approved fixed candidates.
    pub ell: Vec<usize>,
    /// Per voter, `w'_l = w_{l + ell_i}` for `l < k'`.
    pub residual_weights: Vec<Vec<Rational>>,
}

impl ResidualInstance {
    pub fn is_trivial(&self) -> bool {
        self.k_prime == 0 || self.fractional.is_empty()
    }

    pub fn residual_matrix(&self, election: &Election) -> Option<ApprovalMatrix> {
        (!self.fractional.is_empty()).then(|| election.matrix().select_columns(&self.fractional))
    }

    /// The residual election and weights; `None` when trivial.
    pub fn residual_election(&self, election: &Election) -> Option<(Election, WeightSystem)> {
        if self.is_trivial() {
            return None;
        }
        let e = Election::new(self.residual_matrix(election)?, self.k_prime).ok()?;
        let w = WeightSystem::new(self.residual_weights.clone(), self.k_prime).ok()?;
        Some((e, w))
    }
}

pub fn build_residual(
    election: &Election,
    weights: &WeightSystem,
    x: &[Rational],
) -> Result<ResidualInstance, SolverError> {
    let matrix = election.matrix();
    let m = matrix.num_candidates();
    if x.len() != m {
        return Err(SolverError::WrongLength {
            expected: m,
            got: x.len(),
        });
    }
    if let Some(&(_, recipient, donor)) = domination_pairs(matrix)
        .iter()
        .find(|&&(_, j, jp)| x[j] < Rational::one() && x[jp].is_positive())
    {
        return Err(SolverError::NotShifted { recipient, donor });
    }
    let excluded: Vec<usize> = (0..m).filter(|&j| x[j].is_zero()).collect();
    let fixed: Vec<usize> = (0..m).filter(|&j| x[j].is_one()).collect();
    let fractional: Vec<usize> = (0..m)
        .filter(|&j| !x[j].is_zero() && !x[j].is_one())
        .collect();
    let k_prime = election.committee_size() - fixed.len();
    let ell: Vec<usize> = (0..matrix.num_voters())
        .map(|i| {
            matrix
                .approvals(i)
                .iter()
                .filter(|&&j| x[j].is_one())
                .count()
        })
        .collect();
    let residual_weights = ell
        .iter()
        .enumerate()
        .map(|(i, &l)| weights.voter(i)[l..l + k_prime].to_vec())
        .collect();
    Ok(ResidualInstance {
        excluded,
        fixed,
        fractional,
        k_prime,
        ell,
        residual_weights,
    })
}

/// Auditable record of one [`solve_thiele`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveTrace {
    /// Optimal vertex of the full relaxation (x block then y block).
    pub lp_point: Vec<Rational>,
    pub lp_objective: Rational,
    pub shift_steps: Vec<ShiftStep>,
    /// Relaxation objective before the first shift and after each step.
    pub step_objectives: Vec<Rational>,
    pub shifted_x: Vec<Rational>,
    pub residual: ResidualInstance,
    /// Residual x values, aligned with `residual.fractional`.
    pub residual_point: Vec<Rational>,
    pub residual_objective: Rational,
    /// Score of the fixed candidates alone.
    pub fixed_score: Rational,
    pub final_committee: Committee,
    pub final_score: Rational,
}

impl SolveTrace {
    /// `f(x) = f(W1) + f'(x') = f(W1 ∪ W')`, with the shifted point scoring
    /// the same as the LP optimum.
    pub fn decomposition_holds(&self) -> bool {
        let shifted = self.step_objectives.last().unwrap_or(&self.lp_objective);
        self.lp_objective == *shifted
            && self.lp_objective == &self.fixed_score + &self.residual_objective
            && self.lp_objective == self.final_score
    }

    /// No shift step lowered the relaxation objective.
    pub fn shifts_monotone(&self) -> bool {
        self.step_objectives.windows(2).all(|p| p[0] <= p[1])
    }
}

fn fractional_indices(values: &[Rational], map: impl Fn(usize) -> usize) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero() && !v.is_one())
        .map(|(p, _)| map(p))
        .collect()
}

/// Optimal committee for non-increasing nonnegative weights on voter/candidate
/// interval and linearly consistent profiles.
///
/// With `validate_domain`, the residual matrix must additionally pass the
/// consecutive-ones test. A fractional residual vertex is always reported.
pub fn solve_thiele(
    election: &Election,
    weights: &WeightSystem,
    validate_domain: bool,
) -> Result<(Committee, Rational, SolveTrace), SolverError> {
    let lp = build_lp(election, weights)?;
    let solution = ratlp::solve(&lp.problem);
    if !solution.is_optimal() {
        return Err(SolverError::Lp(solution.status));
    }
    let m = election.num_candidates();
    let x_lp = &solution.point[..m];
    let (shifted_x, shift_steps) = dominance_shift(election, x_lp);

    let mut step_objectives = Vec::with_capacity(shift_steps.len() + 1);
    let mut x = x_lp.to_vec();
    step_objectives.push(fractional_objective(election, weights, &x)?);
    for step in &shift_steps {
        x[step.recipient] += &step.amount;
        x[step.donor] -= &step.amount;
        step_objectives.push(fractional_objective(election, weights, &x)?);
    }

    let residual = build_residual(election, weights, &shifted_x)?;
    if validate_domain {
        if let Some(a) = residual.residual_matrix(election) {
            if consecutive_ones_order(&a, Axis::Columns).is_none() {
                return Err(SolverError::DomainViolation(
                    ViolationCertificate::ResidualNotConsecutiveOnes,
                ));
            }
        }
    }

    let mut members = residual.fixed.clone();
    let (residual_point, residual_objective) = match residual.residual_election(election) {
        None => (Vec::new(), Rational::zero()),
        Some((sub_election, sub_weights)) => {
            let sub_lp = build_lp(&sub_election, &sub_weights)?;
            let sub = ratlp::solve(&sub_lp.problem);
            if !sub.is_optimal() {
                return Err(SolverError::Lp(sub.status));
            }
            let point = sub.point[..residual.fractional.len()].to_vec();
            let bad = fractional_indices(&point, |p| residual.fractional[p]);
            if !bad.is_empty() {
                return Err(SolverError::DomainViolation(
                    ViolationCertificate::FractionalResidualVertex(bad),
                ));
            }
            members.extend(
                point
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.is_one())
                    .map(|(p, _)| residual.fractional[p]),
            );
            (point, sub.objective_value)
        }
    };

    let fixed_score = score_committee(
        election,
        weights,
        &Committee::new(residual.fixed.iter().copied()),
    );
    let committee = Committee::new(members);
    let score = score_committee(election, weights, &committee);
    let trace = SolveTrace {
        lp_point: solution.point,
        lp_objective: solution.objective_value,
        shift_steps,
        step_objectives,
        shifted_x,
        residual,
        residual_point,
        residual_objective,
        fixed_score,
        final_committee: committee.clone(),
        final_score: score.clone(),
    };
    Ok((committee, score, trace))
}

/// Reads the committee directly off one optimal vertex of the full
/// relaxation; requires strictly decreasing positive weights.
pub fn solve_extreme_point(
    election: &Election,
    weights: &WeightSystem,
) -> Result<(Committee, Rational), SolverError> {
    if !weights.is_strictly_decreasing_positive() {
        return Err(SolverError::WeightsNotStrictlyDecreasingPositive);
    }
    let lp = build_lp(election, weights)?;
    let solution = ratlp::solve(&lp.problem);
    if !solution.is_optimal() {
        return Err(SolverError::Lp(solution.status));
    }
    let m = election.num_candidates();
    let x = &solution.point[..m];
    let bad = fractional_indices(x, |p| p);
    if !bad.is_empty() {
        return Err(SolverError::DomainViolation(
            ViolationCertificate::FractionalVertex(bad),
        ));
    }
    let committee: Committee = (0..m).filter(|&j| x[j].is_one()).collect();
    let score = score_committee(election, weights, &committee);
    Ok((committee, score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{fixtures, generate, is_domination_free};
    use crate::{build_election, make_rule_weights, Rule, WeightSpec};
    use itertools::Itertools;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn example1() -> Election {
        build_election(vec![vec![0, 1], vec![0, 2], vec![0, 3]], 4, 2).unwrap()
    }

    fn rule(e: &Election, rule: Rule) -> WeightSystem {
        make_rule_weights(&WeightSpec::Rule(rule), e).unwrap()
    }

    fn optimum(e: &Election, w: &WeightSystem) -> Rational {
        (0..e.num_candidates())
            .combinations(e.committee_size())
            .map(|c| score_committee(e, w, &Committee::new(c)))
            .max()
            .unwrap()
    }

    #[test]
    fn example1_pav_and_cc() {
        let e = example1();
        let (c, s, t) = solve_thiele(&e, &rule(&e, Rule::Pav), true).unwrap();
        assert_eq!(s, r(7, 2));
        assert!(c.contains(0) && c.len() == 2);
        assert!(t.decomposition_holds());
        let (c, s, _) = solve_thiele(&e, &rule(&e, Rule::Cc), false).unwrap();
        assert_eq!(s, r(3, 1));
        assert!(c.contains(0));
    }

    #[test]
    fn zero_weights_still_integral() {
        let f = fixtures::example2();
        let (c, s, t) = solve_thiele(&f.election, &f.weights, false).unwrap();
        assert_eq!(c.len(), 2);
        assert!(s.is_zero());
        assert!(t.decomposition_holds());
    }

    #[test]
    fn shift_example() {
        let e = example1();
        let (x, steps) = dominance_shift(&e, &[r(1, 2), r(1, 2), r(1, 2), r(1, 2)]);
        assert_eq!(x, vec![r(1, 1), r(0, 1), r(1, 2), r(1, 2)]);
        assert_eq!(
            steps,
            vec![ShiftStep {
                recipient: 0,
                donor: 1,
                amount: r(1, 2)
            }]
        );
        let (x, steps) = dominance_shift(&e, &[r(0, 1), r(1, 1), r(1, 1), r(0, 1)]);
        assert_eq!(x, vec![r(1, 1), r(0, 1), r(1, 1), r(0, 1)]);
        assert_eq!(steps.len(), 1);
    }

    #[test]
    fn no_dominations_no_shift() {
        let e = build_election(vec![vec![0], vec![1]], 2, 1).unwrap();
        let x = vec![r(1, 3), r(2, 3)];
        assert_eq!(dominance_shift(&e, &x), (x, vec![]));
    }

    #[test]
    fn residual_example() {
        let e = example1();
        let x = [r(1, 1), r(0, 1), r(1, 2), r(1, 2)];
        let res = build_residual(&e, &rule(&e, Rule::Pav), &x).unwrap();
        assert_eq!(res.fixed, vec![0]);
        assert_eq!(res.excluded, vec![1]);
        assert_eq!(res.fractional, vec![2, 3]);
        assert_eq!(res.k_prime, 1);
        assert_eq!(res.ell, vec![1, 1, 1]);
        assert_eq!(res.residual_weights, vec![vec![r(1, 2)]; 3]);
        let unshifted = build_residual(
            &e,
            &rule(&e, Rule::Pav),
            &[r(1, 2), r(1, 2), r(1, 2), r(1, 2)],
        );
        assert_eq!(
            unshifted,
            Err(SolverError::NotShifted {
                recipient: 0,
                donor: 1
            })
        );
    }

    #[test]
    fn residual_edge_cases() {
        let e = example1();
        let res = build_residual(
            &e,
            &rule(&e, Rule::Pav),
            &[r(1, 1), r(1, 1), r(0, 1), r(0, 1)],
        )
        .unwrap();
        assert!(res.fractional.is_empty() && res.k_prime == 0 && res.is_trivial());
        let twins = build_election(vec![vec![0, 1]], 2, 1).unwrap();
        let res = build_residual(&twins, &rule(&twins, Rule::Pav), &[r(1, 2), r(1, 2)]).unwrap();
        assert!(res.fixed.is_empty());
        assert_eq!(res.fractional, vec![0, 1]);
        assert_eq!(res.k_prime, 1);
    }

    #[test]
    fn extreme_point_mode() {
        let e = example1();
        let (_, s) = solve_extreme_point(&e, &rule(&e, Rule::Pav)).unwrap();
        assert_eq!(s, r(7, 2));
        assert_eq!(
            solve_extreme_point(&e, &rule(&e, Rule::Cc)),
            Err(SolverError::WeightsNotStrictlyDecreasingPositive)
        );
    }

    #[test]
    fn non_lc_input_is_caught_or_optimal() {
        // The complement of a 3-cycle is neither interval nor LC.
        let e = build_election(vec![vec![0, 1], vec![1, 2], vec![0, 2]], 3, 1).unwrap();
        for rl in [Rule::Av, Rule::Cc, Rule::Pav] {
            let w = rule(&e, rl);
            match solve_thiele(&e, &w, false) {
                Ok((_, s, _)) => assert_eq!(s, optimum(&e, &w)),
                Err(SolverError::DomainViolation(_)) => {}
                Err(other) => panic!("{other}"),
            }
        }
    }

    #[test]
    fn bad_weights_rejected() {
        let e = example1();
        let w = WeightSystem::new(vec![vec![r(1, 1), r(2, 1)]; 3], 2).unwrap();
        assert!(matches!(
            solve_thiele(&e, &w, false),
            Err(SolverError::Weights(ThieleLpError::WeightsNotNonIncreasing))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn matches_brute_force(seed in any::<u64>(), n in 1usize..6, m in 1usize..6, kind in 0usize..4, lc in any::<bool>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = if lc {
                generate::random_lc_matrix(&mut rng, n, m).0
            } else {
                generate::random_vci_matrix(&mut rng, n, m, 8)
            };
            for k in 1..=m {
                let e = Election::new(a.clone(), k).unwrap();
                let w = match kind {
                    0 => rule(&e, Rule::Av),
                    1 => rule(&e, Rule::Cc),
                    2 => rule(&e, Rule::Pav),
                    _ => generate::random_weights(&mut rng, n, k, 4, false),
                };
                let (c, s, t) = solve_thiele(&e, &w, true).unwrap();
                prop_assert_eq!(c.len(), k);
                prop_assert_eq!(&s, &optimum(&e, &w));
                prop_assert!(t.decomposition_holds());
                prop_assert!(t.shifts_monotone());
                prop_assert!(t.shift_steps.len() <= m * m);
                if w.is_strictly_positive() {
                    prop_assert!(t.shift_steps.is_empty());
                }
                if let Some(ra) = t.residual.residual_matrix(&e) {
                    prop_assert!(is_domination_free(&ra));
                }
            }
        }
    }
}
