//! The linear relaxation of the Thiele integer program.
//!
//! Variable layout: `x_1..x_m` first, then `y^1_1..y^1_k`, `y^2_1..`, voter
//! major. Rows: `Σ_j x_j = k`, then one row per voter
//! `Σ_{j ∈ C_i} x_j − Σ_ℓ y^i_ℓ = 0`. Every variable lives in `[0, 1]`.

use crate::ratlp::LpProblem;
use crate::{Election, Rational, WeightSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThieleLpError {
    #[error("weight vectors must be non-increasing")]
    WeightsNotNonIncreasing,
    #[error("weight vectors must be nonnegative")]
    WeightsNegative,
    #[error("expected {expected} weight vectors, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("voter {voter} has representation {value}, above the committee size")]
    RepresentationOverflow { voter: usize, value: Rational },
    #[error("expected {expected} candidate values, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// The relaxation together with its variable layout.
#[derive(Debug, Clone)]
pub struct ThieleLp {
    pub problem: LpProblem,
    num_voters: usize,
    num_candidates: usize,
    k: usize,
}

impl ThieleLp {
    pub fn x_index(&self, candidate: usize) -> usize {
        candidate
    }

    pub fn y_index(&self, voter: usize, level: usize) -> usize {
        self.num_candidates + voter * self.k + level
    }

    pub fn num_vars(&self) -> usize {
        self.num_candidates + self.num_voters * self.k
    }

    /// Splits an LP point into its `x` and `y` blocks.
    pub fn split(&self, point: &[Rational]) -> FractionalSolution {
        let x = point[..self.num_candidates].to_vec();
        let y = point[self.num_candidates..]
            .chunks(self.k)
            .map(|c| c.to_vec())
            .collect();
        FractionalSolution { x, y }
    }

    pub fn join(&self, solution: &FractionalSolution) -> Vec<Rational> {
        solution
            .x
            .iter()
            .chain(solution.y.iter().flatten())
            .cloned()
            .collect()
    }
}

/// A point of the relaxation: candidate selections `x` and per-voter levels `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    pub x: Vec<Rational>,
    pub y: Vec<Vec<Rational>>,
}

fn check_weights(election: &Election, weights: &WeightSystem) -> Result<(), ThieleLpError> {
    if weights.len() != election.num_voters() {
        return Err(ThieleLpError::WeightCountMismatch {
            expected: election.num_voters(),
            got: weights.len(),
        });
    }
    if !weights.is_non_increasing() {
        return Err(ThieleLpError::WeightsNotNonIncreasing);
    }
    if !weights.is_nonnegative() {
        return Err(ThieleLpError::WeightsNegative);
    }
    Ok(())
}

pub fn build_lp(election: &Election, weights: &WeightSystem) -> Result<ThieleLp, ThieleLpError> {
    check_weights(election, weights)?;
    let matrix = election.matrix();
    let (n, m, k) = (
        election.num_voters(),
        election.num_candidates(),
        election.committee_size(),
    );
    let y_index = |i: usize, l: usize| m + i * k + l;
    let mut problem = LpProblem::new(m + n * k);
    problem
        .add_constraint((0..m).map(|j| (j, Rational::one())), Rational::from(k))
        .expect("indices in range");
    for i in 0..n {
        let approved = matrix.approvals(i).iter().map(|&j| (j, Rational::one()));
        let levels = (0..k).map(|l| (y_index(i, l), -Rational::one()));
        problem
            .add_constraint(approved.chain(levels), Rational::zero())
            .expect("indices in range");
        for (l, w) in weights.voter(i).iter().enumerate() {
            problem
                .set_objective(y_index(i, l), w.clone())
                .expect("index in range");
        }
    }
    Ok(ThieleLp {
        problem,
        num_voters: n,
        num_candidates: m,
        k,
    })
}

/// `r_i(x) = Σ_{j ∈ C_i} x_j` for every voter.
pub fn representation_values(election: &Election, x: &[Rational]) -> Vec<Rational> {
    (0..election.num_voters())
        .map(|i| election.matrix().approvals(i).iter().map(|&j| &x[j]).sum())
        .collect()
}

/// The objective-maximizing `y` for a given `x`: each voter fills levels in
/// order, `1` up to `⌊r_i⌋`, then the fractional remainder, then zeros.
pub fn canonicalize_y(
    election: &Election,
    x: &[Rational],
) -> Result<Vec<Vec<Rational>>, ThieleLpError> {
    let m = election.num_candidates();
    if x.len() != m {
        return Err(ThieleLpError::WrongLength {
            expected: m,
            got: x.len(),
        });
    }
    let k = election.committee_size();
    representation_values(election, x)
        .into_iter()
        .enumerate()
        .map(|(voter, r)| {
            if r > Rational::from(k) {
                return Err(ThieleLpError::RepresentationOverflow { voter, value: r });
            }
            let whole = r.floor();
            let full = whole.to_i64().expect("small integer") as usize;
            let frac = &r - &whole;
            Ok((0..k)
                .map(|l| {
                    if l < full {
                        Rational::one()
                    } else if l == full {
                        frac.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect())
        })
        .collect()
}

/// Objective of `x` in the relaxation, evaluated with the canonical `y`.
pub fn fractional_objective(
    election: &Election,
    weights: &WeightSystem,
    x: &[Rational],
) -> Result<Rational, ThieleLpError> {
    let y = canonicalize_y(election, x)?;
    Ok(y_objective(weights, &y))
}

/// `Σ_i Σ_ℓ w^i_ℓ y^i_ℓ`.
pub fn y_objective(weights: &WeightSystem, y: &[Vec<Rational>]) -> Rational {
    y.iter()
        .enumerate()
        .flat_map(|(i, row)| weights.voter(i).iter().zip(row).map(|(w, v)| w * v))
        .sum()
}
