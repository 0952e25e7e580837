//! Approval elections, weight systems and Thiele scoring.
//!
//! Voters and candidates are 0-based inside the library. File formats and
//! user-facing output translate to 1-based indices.

use std::collections::BTreeSet;
use std::fmt;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElectionError {
    #[error("voter {voter} approves candidate {candidate}, but there are only {num_candidates} candidates")]
    IndexOutOfRange {
        voter: usize,
        candidate: usize,
        num_candidates: usize,
    },
    #[error("committee size {k} is outside 1..={m}")]
    InvalidCommitteeSize { k: usize, m: usize },
    #[error("an election needs at least one voter and one candidate")]
    Empty,
    #[error("voter {voter} has a weight vector of length {len}, expected {expected}")]
    LengthMismatch {
        voter: usize,
        len: usize,
        expected: usize,
    },
    #[error("expected weight vectors for {expected} voters, got {got}")]
    VoterCountMismatch { expected: usize, got: usize },
}

/// A 0-1 approval matrix with both row (ballot) and column (supporter) views.
#[derive(Clone, PartialEq, Eq)]
pub struct ApprovalMatrix {
    num_voters: usize,
    num_candidates: usize,
    approvals: Vec<Vec<usize>>,
    supporters: Vec<Vec<usize>>,
    dense: Vec<bool>,
}

impl ApprovalMatrix {
    /// Builds a matrix from per-voter ballots (0-based candidate indices).
    /// Duplicate approvals are collapsed.
    pub fn new(num_candidates: usize, ballots: Vec<Vec<usize>>) -> Result<Self, ElectionError> {
        let num_voters = ballots.len();
        if num_voters == 0 || num_candidates == 0 {
            return Err(ElectionError::Empty);
        }
        let mut dense = vec![false; num_voters * num_candidates];
        for (i, ballot) in ballots.iter().enumerate() {
            for &c in ballot {
                if c >= num_candidates {
                    return Err(ElectionError::IndexOutOfRange {
                        voter: i,
                        candidate: c,
                        num_candidates,
                    });
                }
                dense[i * num_candidates + c] = true;
            }
        }
        Ok(Self::from_dense(num_voters, num_candidates, dense))
    }

    /// Builds a matrix from boolean rows. Panics on ragged or empty input.
    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        assert!(!rows.is_empty() && !rows[0].is_empty(), "empty matrix");
        let m = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == m), "ragged matrix");
        let dense = rows.iter().flatten().copied().collect();
        Self::from_dense(rows.len(), m, dense)
    }

    fn from_dense(n: usize, m: usize, dense: Vec<bool>) -> Self {
        let mut approvals = vec![Vec::new(); n];
        let mut supporters = vec![Vec::new(); m];
        for i in 0..n {
            for c in 0..m {
                if dense[i * m + c] {
                    approvals[i].push(c);
                    supporters[c].push(i);
                }
            }
        }
        ApprovalMatrix {
            num_voters: n,
            num_candidates: m,
            approvals,
            supporters,
            dense,
        }
    }

    pub fn num_voters(&self) -> usize {
        self.num_voters
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    /// `C_i`, sorted.
    pub fn approvals(&self, voter: usize) -> &[usize] {
        &self.approvals[voter]
    }

    /// `N_j`, sorted.
    pub fn supporters(&self, candidate: usize) -> &[usize] {
        &self.supporters[candidate]
    }

    pub fn ballots(&self) -> &[Vec<usize>] {
        &self.approvals
    }

    pub fn approves(&self, voter: usize, candidate: usize) -> bool {
        self.dense[voter * self.num_candidates + candidate]
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.dense
            .chunks(self.num_candidates)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn transpose(&self) -> ApprovalMatrix {
        ApprovalMatrix::new(self.num_voters, self.supporters.clone())
            .expect("transpose of a valid matrix is valid")
    }

    /// The submatrix on the given columns, in the given order; all rows are kept.
    pub fn select_columns(&self, columns: &[usize]) -> ApprovalMatrix {
        let rows: Vec<Vec<bool>> = (0..self.num_voters)
            .map(|i| columns.iter().map(|&c| self.approves(i, c)).collect())
            .collect();
        ApprovalMatrix::from_rows(&rows)
    }

    /// Rows and columns rearranged so that row `p` is voter `row_order[p]` and
    /// column `q` is candidate `col_order[q]`.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> ApprovalMatrix {
        let rows: Vec<Vec<bool>> = row_order
            .iter()
            .map(|&i| col_order.iter().map(|&c| self.approves(i, c)).collect())
            .collect();
        ApprovalMatrix::from_rows(&rows)
    }
}

impl fmt::Debug for ApprovalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ApprovalMatrix {}x{}",
            self.num_voters, self.num_candidates
        )?;
        for row in self.dense.chunks(self.num_candidates) {
            let line: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// An approval election `(A, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    matrix: ApprovalMatrix,
    k: usize,
}

impl Election {
    pub fn new(matrix: ApprovalMatrix, k: usize) -> Result<Self, ElectionError> {
        let m = matrix.num_candidates();
        if k < 1 || k > m {
            return Err(ElectionError::InvalidCommitteeSize { k, m });
        }
        Ok(Election { matrix, k })
    }

    pub fn matrix(&self) -> &ApprovalMatrix {
        &self.matrix
    }

    pub fn committee_size(&self) -> usize {
        self.k
    }

    pub fn num_voters(&self) -> usize {
        self.matrix.num_voters()
    }

    pub fn num_candidates(&self) -> usize {
        self.matrix.num_candidates()
    }
}

/// Builds an election from 0-based ballots.
pub fn build_election(
    ballots: Vec<Vec<usize>>,
    num_candidates: usize,
    k: usize,
) -> Result<Election, ElectionError> {
    Election::new(ApprovalMatrix::new(num_candidates, ballots)?, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Av,
    Cc,
    Pav,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Av => "av",
            Rule::Cc => "cc",
            Rule::Pav => "pav",
        }
    }

    pub fn vector(self, k: usize) -> Vec<Rational> {
        (1..=k)
            .map(|l| match self {
                Rule::Av => Rational::one(),
                Rule::Cc if l == 1 => Rational::one(),
                Rule::Cc => Rational::zero(),
                Rule::Pav => Rational::new(1, l as i64),
            })
            .collect()
    }
}

impl std::str::FromStr for Rule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "av" => Ok(Rule::Av),
            "cc" => Ok(Rule::Cc),
            "pav" => Ok(Rule::Pav),
            other => Err(format!("unknown rule `{other}`")),
        }
    }
}

/// Which weights to attach to an election.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSpec {
    Rule(Rule),
    Explicit(Vec<Vec<Rational>>),
}

/// Personalized weight vectors `w^i`, one per voter, each of length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    vectors: Vec<Vec<Rational>>,
    non_increasing: bool,
    nonnegative: bool,
    strictly_decreasing_positive: bool,
}

impl WeightSystem {
    /// Validates that every vector has length `k` and computes the shape flags.
    pub fn new(vectors: Vec<Vec<Rational>>, k: usize) -> Result<Self, ElectionError> {
        if let Some((voter, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != k) {
            return Err(ElectionError::LengthMismatch {
                voter,
                len: v.len(),
                expected: k,
            });
        }
        let non_increasing = vectors.iter().all(|v| v.windows(2).all(|p| p[0] >= p[1]));
        let nonnegative = vectors.iter().all(|v| v.iter().all(|w| !w.is_negative()));
        let strictly_decreasing_positive = vectors
            .iter()
            .all(|v| v.windows(2).all(|p| p[0] > p[1]) && v.last().is_none_or(|w| w.is_positive()));
        Ok(WeightSystem {
            vectors,
            non_increasing,
            nonnegative,
            strictly_decreasing_positive,
        })
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn voter(&self, i: usize) -> &[Rational] {
        &self.vectors[i]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.non_increasing
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn is_strictly_decreasing_positive(&self) -> bool {
        self.strictly_decreasing_positive
    }

    /// Every entry of every vector is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.vectors
            .iter()
            .all(|v| v.iter().all(|w| w.is_positive()))
    }
}

/// Weight vectors for a classical rule, or validated explicit vectors.
pub fn make_rule_weights(
    spec: &WeightSpec,
    election: &Election,
) -> Result<WeightSystem, ElectionError> {
    let n = election.num_voters();
    let k = election.committee_size();
    match spec {
        WeightSpec::Rule(rule) => WeightSystem::new(vec![rule.vector(k); n], k),
        WeightSpec::Explicit(vectors) => {
            if vectors.len() != n {
                return Err(ElectionError::VoterCountMismatch {
                    expected: n,
                    got: vectors.len(),
                });
            }
            WeightSystem::new(vectors.clone(), k)
        }
    }
}

/// A set of selected candidates (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Committee(BTreeSet<usize>);

impl Committee {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        Committee(members.into_iter().collect())
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.contains(&c)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|c| c + 1).collect()
    }

    /// 0/1 indicator vector over `m` candidates.
    pub fn indicator(&self, m: usize) -> Vec<Rational> {
        (0..m)
            .map(|c| {
                if self.contains(c) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }
}

impl FromIterator<usize> for Committee {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Committee::new(iter)
    }
}

/// Thiele score `Σ_i Σ_{ℓ ≤ |W ∩ C_i|} w^i_ℓ`.
///
/// Panics if some voter approves more members of `committee` than its weight
/// vector has entries, which cannot happen when `|committee| ≤ k`.
pub fn score_committee(
    election: &Election,
    weights: &WeightSystem,
    committee: &Committee,
) -> Rational {
    let matrix = election.matrix();
    (0..matrix.num_voters())
        .map(|i| {
            let hits = matrix
                .approvals(i)
                .iter()
                .filter(|c| committee.contains(**c))
                .count();
            weights.voter(i)[..hits].iter().sum::<Rational>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example1() -> Election {
        build_election(vec![vec![0, 1], vec![0, 2], vec![0, 3]], 4, 2).unwrap()
    }

    #[test]
    fn example1_supporters() {
        let e = example1();
        assert_eq!(e.matrix().supporters(0), &[0, 1, 2]);
        assert_eq!(e.matrix().supporters(1), &[0]);
        assert_eq!(e.matrix().supporters(2), &[1]);
        assert_eq!(e.matrix().supporters(3), &[2]);
    }

    #[test]
    fn singleton_and_empty_ballot() {
        let e = build_election(vec![vec![0]], 1, 1).unwrap();
        assert_eq!(e.matrix().supporters(0), &[0]);
        let e = build_election(vec![vec![], vec![0]], 1, 1).unwrap();
        assert_eq!(e.matrix().supporters(0), &[1]);
        assert!(e.matrix().approvals(0).is_empty());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            build_election(vec![vec![4]], 4, 1),
            Err(ElectionError::IndexOutOfRange {
                voter: 0,
                candidate: 4,
                num_candidates: 4
            })
        );
        assert_eq!(
            build_election(vec![vec![0]], 2, 0),
            Err(ElectionError::InvalidCommitteeSize { k: 0, m: 2 })
        );
        assert_eq!(
            build_election(vec![vec![0]], 2, 3),
            Err(ElectionError::InvalidCommitteeSize { k: 3, m: 2 })
        );
    }

    #[test]
    fn rule_vectors() {
        let e = build_election(vec![vec![0]], 3, 3).unwrap();
        let w = make_rule_weights(&WeightSpec::Rule(Rule::Pav), &e).unwrap();
        assert_eq!(
            w.voter(0),
            &[Rational::one(), Rational::new(1, 2), Rational::new(1, 3)]
        );
        assert!(w.is_strictly_decreasing_positive());
        let e2 = example1();
        let cc = make_rule_weights(&WeightSpec::Rule(Rule::Cc), &e2).unwrap();
        assert_eq!(cc.voter(2), &[Rational::one(), Rational::zero()]);
        assert!(!cc.is_strictly_decreasing_positive());
    }

    #[test]
    fn explicit_zero_weights() {
        let e = example1();
        let zero = vec![vec![Rational::zero(); 2]; 3];
        let w = make_rule_weights(&WeightSpec::Explicit(zero), &e).unwrap();
        assert!(w.is_nonnegative() && w.is_non_increasing());
        assert!(!w.is_strictly_decreasing_positive());
        let short = vec![vec![Rational::zero(); 1]; 3];
        assert!(matches!(
            make_rule_weights(&WeightSpec::Explicit(short), &e),
            Err(ElectionError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn example1_scores() {
        let e = example1();
        let pav = make_rule_weights(&WeightSpec::Rule(Rule::Pav), &e).unwrap();
        let av = make_rule_weights(&WeightSpec::Rule(Rule::Av), &e).unwrap();
        let w = Committee::new([0, 1]);
        assert_eq!(score_committee(&e, &pav, &w), Rational::new(7, 2));
        assert_eq!(score_committee(&e, &av, &w), Rational::from_integer(4));
        assert_eq!(
            score_committee(&e, &pav, &Committee::default()),
            Rational::zero()
        );
    }

    fn arb_matrix() -> impl Strategy<Value = ApprovalMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), n)
                .prop_map(|rows| ApprovalMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn views_are_consistent(a in arb_matrix()) {
            for i in 0..a.num_voters() {
                for j in 0..a.num_candidates() {
                    prop_assert_eq!(a.approvals(i).contains(&j), a.supporters(j).contains(&i));
                    prop_assert_eq!(a.approves(i, j), a.approvals(i).contains(&j));
                }
            }
        }

        #[test]
        fn av_score_counts_supporters(a in arb_matrix(), mask in any::<u8>()) {
            let m = a.num_candidates();
            let e = Election::new(a, m).unwrap();
            let av = make_rule_weights(&WeightSpec::Rule(Rule::Av), &e).unwrap();
            let w: Committee = (0..m).filter(|c| mask >> c & 1 == 1).collect();
            let expected: usize = w.members().iter().map(|&c| e.matrix().supporters(c).len()).sum();
            prop_assert_eq!(score_committee(&e, &av, &w), Rational::from(expected));
        }

        #[test]
        fn score_is_monotone(a in arb_matrix(), mask in any::<u8>(), extra in any::<u8>()) {
            let m = a.num_candidates();
            let e = Election::new(a, m).unwrap();
            let pav = make_rule_weights(&WeightSpec::Rule(Rule::Pav), &e).unwrap();
            let small: Committee = (0..m).filter(|c| mask >> c & 1 == 1).collect();
            let large: Committee = (0..m).filter(|c| (mask | extra) >> c & 1 == 1).collect();
            prop_assert!(score_committee(&e, &pav, &small) <= score_committee(&e, &pav, &large));
        }
    }
}
