use super::lc::LinearOrderWitness;
use super::{check_lc_order, DomainError};
use crate::{ApprovalMatrix, Rational};

/// Closed interval `[left, right]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub left: Rational,
    pub right: Rational,
}

impl Interval {
    pub fn new(left: impl Into<Rational>, right: impl Into<Rational>) -> Self {
        Interval {
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.left <= self.right
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.left <= other.right && other.left <= self.right
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalMode {
    /// Voter approves candidate when the intervals meet.
    Intersection,
    /// Voter approves candidate when the candidate interval lies inside the voter's.
    Containment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalModel {
    mode: IntervalMode,
    voters: Vec<Interval>,
    candidates: Vec<Interval>,
}

impl IntervalModel {
    pub fn new(
        mode: IntervalMode,
        voters: Vec<Interval>,
        candidates: Vec<Interval>,
    ) -> Result<Self, DomainError> {
        if voters.is_empty() || candidates.is_empty() {
            return Err(DomainError::EmptyModel);
        }
        for (index, iv) in voters.iter().chain(&candidates).enumerate() {
            if !iv.is_valid() {
                return Err(DomainError::InvalidInterval {
                    index,
                    left: iv.left.to_string(),
                    right: iv.right.to_string(),
                });
            }
        }
        Ok(IntervalModel {
            mode,
            voters,
            candidates,
        })
    }

    pub fn mode(&self) -> IntervalMode {
        self.mode
    }

    pub fn voters(&self) -> &[Interval] {
        &self.voters
    }

    pub fn candidates(&self) -> &[Interval] {
        &self.candidates
    }

    fn expect_mode(&self, expected: IntervalMode) -> Result<(), DomainError> {
        if self.mode == expected {
            Ok(())
        } else {
            Err(DomainError::WrongMode {
                expected,
                found: self.mode,
            })
        }
    }
}

pub fn intervals_to_matrix(model: &IntervalModel) -> ApprovalMatrix {
    let rows: Vec<Vec<bool>> = model
        .voters
        .iter()
        .map(|v| {
            model
                .candidates
                .iter()
                .map(|c| match model.mode {
                    IntervalMode::Intersection => v.intersects(c),
                    IntervalMode::Containment => v.contains(c),
                })
                .collect()
        })
        .collect();
    ApprovalMatrix::from_rows(&rows)
}

fn sorted_by<F: Fn(&Interval) -> &Rational>(intervals: &[Interval], key: F) -> Vec<usize> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by(|&a, &b| key(&intervals[a]).cmp(key(&intervals[b])).then(a.cmp(&b)));
    order
}

/// Orders voters and candidates by left endpoint, ties by index.
pub fn vci_to_lc_order(model: &IntervalModel) -> Result<LinearOrderWitness, DomainError> {
    model.expect_mode(IntervalMode::Intersection)?;
    LinearOrderWitness::new(
        sorted_by(&model.voters, |iv| &iv.left),
        sorted_by(&model.candidates, |iv| &iv.left),
    )
}

/// Voters by left endpoint, candidates by right endpoint, ties by index.
pub fn vcci_intervals_to_lc_order(
    model: &IntervalModel,
) -> Result<LinearOrderWitness, DomainError> {
    model.expect_mode(IntervalMode::Containment)?;
    LinearOrderWitness::new(
        sorted_by(&model.voters, |iv| &iv.left),
        sorted_by(&model.candidates, |iv| &iv.right),
    )
}

/// Containment model from an LC witness, with 1-based positions ρ, κ:
/// voter i gets `[ρ(i), n + r(i)]` and candidate c gets `[u(c), n + κ(c)]`,
/// where r(i) is the latest candidate i approves and u(c) the latest
/// supporter of c.
pub fn lc_order_to_vcci_intervals(
    matrix: &ApprovalMatrix,
    witness: &LinearOrderWitness,
) -> Result<IntervalModel, DomainError> {
    if !check_lc_order(matrix, witness) {
        return Err(DomainError::NotLcWitness);
    }
    let n = matrix.num_voters();
    let rho = witness.voter_positions();
    let kappa = witness.candidate_positions();
    let voters = (0..n)
        .map(|i| {
            let r = matrix
                .approvals(i)
                .iter()
                .map(|&c| kappa[c] + 1)
                .max()
                .ok_or(DomainError::EmptyRow(i))?;
            Ok(Interval::new(rho[i] + 1, n + r))
        })
        .collect::<Result<Vec<_>, DomainError>>()?;
    let candidates = (0..matrix.num_candidates())
        .map(|c| {
            let u = matrix
                .supporters(c)
                .iter()
                .map(|&i| rho[i] + 1)
                .max()
                .ok_or(DomainError::EmptyColumn(c))?;
            Ok(Interval::new(u, n + kappa[c] + 1))
        })
        .collect::<Result<Vec<_>, DomainError>>()?;
    IntervalModel::new(IntervalMode::Containment, voters, candidates)
}
