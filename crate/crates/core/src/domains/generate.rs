//! Random instances for property tests, benchmarks and the CLI generator.

use rand::seq::SliceRandom;
use rand::Rng;

use super::lc::positions;
use super::LinearOrderWitness;
use super::{
    intervals_to_matrix, vcci_intervals_to_lc_order, Interval, IntervalMode, IntervalModel,
};
use crate::{ApprovalMatrix, Rational, WeightSystem};

/// Integer endpoints in `0..=span`.
pub fn random_interval_model<R: Rng>(
    rng: &mut R,
    mode: IntervalMode,
    n: usize,
    m: usize,
    span: i64,
) -> IntervalModel {
    let mut draw = |min_len: i64, max_len: i64| {
        let len = rng.gen_range(min_len..=max_len);
        let left = rng.gen_range(0..=span - len);
        Interval::new(left, left + len)
    };
    let (voter_len, candidate_len) = match mode {
        IntervalMode::Intersection => ((0, span / 2), (0, span / 2)),
        // Long voters and short candidates keep most rows and columns nonempty.
        IntervalMode::Containment => ((span / 3, span), (0, span / 3)),
    };
    let voters = (0..n).map(|_| draw(voter_len.0, voter_len.1)).collect();
    let candidates = (0..m)
        .map(|_| draw(candidate_len.0, candidate_len.1))
        .collect();
    IntervalModel::new(mode, voters, candidates).expect("generated intervals are valid")
}

/// Rows and columns shuffled together with the witness that tracks them.
pub fn shuffle_with_witness<R: Rng>(
    rng: &mut R,
    matrix: &ApprovalMatrix,
    witness: &LinearOrderWitness,
) -> (ApprovalMatrix, LinearOrderWitness) {
    let mut rows: Vec<usize> = (0..matrix.num_voters()).collect();
    let mut cols: Vec<usize> = (0..matrix.num_candidates()).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let (row_at, col_at) = (positions(&rows), positions(&cols));
    let witness = LinearOrderWitness::new(
        witness.voter_order().iter().map(|&i| row_at[i]).collect(),
        witness
            .candidate_order()
            .iter()
            .map(|&c| col_at[c])
            .collect(),
    )
    .expect("relabelled permutation");
    (matrix.permuted(&rows, &cols), witness)
}

/// An LC matrix of exactly `n x m` with no empty row or column, together
/// with a witness, under shuffled labels. Falls back to the all-ones matrix
/// if sampling keeps producing empty lines.
pub fn random_lc_matrix<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> (ApprovalMatrix, LinearOrderWitness) {
    for _ in 0..10_000 {
        let span = 2 * (n + m) as i64;
        let model = random_interval_model(rng, IntervalMode::Containment, n, m, span);
        let a = intervals_to_matrix(&model);
        let full_rows = (0..n).all(|i| !a.approvals(i).is_empty());
        let full_cols = (0..m).all(|c| !a.supporters(c).is_empty());
        if full_rows && full_cols {
            let w = vcci_intervals_to_lc_order(&model).expect("containment mode");
            return shuffle_with_witness(rng, &a, &w);
        }
    }
    let a = ApprovalMatrix::from_rows(&vec![vec![true; m]; n]);
    (a, LinearOrderWitness::identity(n, m))
}

/// A matrix from a random intersection model under shuffled labels.
pub fn random_vci_matrix<R: Rng>(rng: &mut R, n: usize, m: usize, span: i64) -> ApprovalMatrix {
    let model = random_interval_model(rng, IntervalMode::Intersection, n, m, span);
    let w = super::vci_to_lc_order(&model).expect("intersection mode");
    shuffle_with_witness(rng, &intervals_to_matrix(&model), &w).0
}

/// Independent Bernoulli entries.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, m: usize, density: f64) -> ApprovalMatrix {
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_bool(density)).collect())
        .collect();
    ApprovalMatrix::from_rows(&rows)
}

/// Per-voter non-increasing weights `p/den` with `p` in `0..=den`; when
/// `strict`, strictly decreasing and positive instead.
pub fn random_weights<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    den: i64,
    strict: bool,
) -> WeightSystem {
    let vectors = (0..n)
        .map(|_| {
            let mut v: Vec<i64> = if strict {
                let mut pool: Vec<i64> = (1..=den.max(k as i64)).collect();
                pool.shuffle(rng);
                pool.truncate(k);
                pool
            } else {
                (0..k).map(|_| rng.gen_range(0..=den)).collect()
            };
            v.sort_unstable_by(|a, b| b.cmp(a));
            let den = den.max(k as i64);
            v.into_iter().map(|p| Rational::new(p, den)).collect()
        })
        .collect();
    WeightSystem::new(vectors, k).expect("generated weights have length k")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::check_lc_order;
    use rand::SeedableRng;

    #[test]
    fn lc_generator_yields_witnesses() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..6 {
            for m in 1..6 {
                let (a, w) = random_lc_matrix(&mut rng, n, m);
                assert_eq!((a.num_voters(), a.num_candidates()), (n, m));
                assert!(check_lc_order(&a, &w));
            }
        }
    }

    #[test]
    fn weight_generator_shapes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let w = random_weights(&mut rng, 4, 3, 5, false);
        assert!(w.is_non_increasing() && w.is_nonnegative());
        let s = random_weights(&mut rng, 4, 3, 5, true);
        assert!(s.is_strictly_decreasing_positive());
    }
}
