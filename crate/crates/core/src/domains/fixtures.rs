//! Small named instances used throughout the tests and by the CLI.

use super::LinearOrderWitness;
use crate::{ApprovalMatrix, Election, Rational, Rule, WeightSystem};

/// An election with weights and a fractional LP point `(x, y)`.
#[derive(Debug, Clone)]
pub struct LpFixture {
    pub election: Election,
    pub weights: WeightSystem,
    pub x: Vec<Rational>,
    pub y: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct Fixtures {
    pub example1: ApprovalMatrix,
    pub example2: LpFixture,
    pub cc_extension: LpFixture,
    pub lc_not_vci: (ApprovalMatrix, LinearOrderWitness),
}

fn parse_rows(rows: &[&str]) -> ApprovalMatrix {
    let rows: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| r.bytes().map(|b| b == b'1').collect())
        .collect();
    ApprovalMatrix::from_rows(&rows)
}

/// Candidate 1 is approved by all three voters, each other candidate by
/// exactly one.
pub fn example1_matrix() -> ApprovalMatrix {
    parse_rows(&["1100", "1010", "1001"])
}

/// The running matrix with k = 2, zero weights and the all-halves point.
pub fn example2() -> LpFixture {
    let election = Election::new(example1_matrix(), 2).expect("valid fixture");
    let weights = WeightSystem::new(vec![vec![Rational::zero(); 2]; 3], 2).expect("valid fixture");
    let half = Rational::new(1, 2);
    LpFixture {
        election,
        weights,
        x: vec![half; 4],
        y: vec![vec![Rational::one(), Rational::zero()]; 3],
    }
}

/// The running matrix plus a fifth candidate approved by everyone, k = 3, CC weights.
pub fn cc_extension() -> LpFixture {
    let matrix = parse_rows(&["11001", "10101", "10011"]);
    let election = Election::new(matrix, 3).expect("valid fixture");
    let weights = WeightSystem::new(vec![Rule::Cc.vector(3); 3], 3).expect("valid fixture");
    let half = Rational::new(1, 2);
    LpFixture {
        election,
        weights,
        x: vec![
            half.clone(),
            half.clone(),
            half.clone(),
            half,
            Rational::one(),
        ],
        y: vec![vec![Rational::one(), Rational::one(), Rational::zero()]; 3],
    }
}

/// Linearly consistent under the identity orders but not a voter/candidate
/// interval matrix.
pub fn lc_not_vci() -> (ApprovalMatrix, LinearOrderWitness) {
    let matrix = parse_rows(&[
        "1110000", "1111100", "1111110", "0111111", "0111101", "0011000", "0001101",
    ]);
    (matrix, LinearOrderWitness::identity(7, 7))
}

pub fn fixtures() -> Fixtures {
    Fixtures {
        example1: example1_matrix(),
        example2: example2(),
        cc_extension: cc_extension(),
        lc_not_vci: lc_not_vci(),
    }
}
