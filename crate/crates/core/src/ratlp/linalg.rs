use crate::Rational;

/// Row-reduces `m` in place and returns the rank.
fn eliminate(m: &mut [Vec<Rational>]) -> (usize, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut swaps_odd = false;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            swaps_odd = !swaps_odd;
        }
        let inv = m[rank][col].recip();
        for r in rank + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..cols {
                if m[rank][c].is_zero() {
                    continue;
                }
                let delta = &factor * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (rank, swaps_odd)
}

/// Rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    eliminate(&mut m).0
}

/// Determinant of a square rational matrix. Panics if the matrix is not square.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix is not square");
    let mut m = rows.to_vec();
    let (rank, odd) = eliminate(&mut m);
    if rank < n {
        return Rational::zero();
    }
    let det: Rational = m
        .iter()
        .enumerate()
        .fold(Rational::one(), |acc, (i, row)| acc * &row[i]);
    if odd {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(
            determinant(&mat(&[&[0, 1], &[1, 0]])),
            Rational::from_integer(-1)
        );
        assert_eq!(determinant(&mat(&[&[2, 3], &[4, 6]])), Rational::zero());
        assert_eq!(
            determinant(&mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])),
            Rational::from_integer(6)
        );
    }

    #[test]
    fn rank_of_rectangular() {
        assert_eq!(rank(&mat(&[&[1, 1, 0], &[2, 2, 0]])), 1);
        assert_eq!(rank(&mat(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
        assert_eq!(rank(&[]), 0);
    }
}
