use crate::ApprovalMatrix;

/// `N_b ⊊ N_a`.
pub fn dominates(matrix: &ApprovalMatrix, a: usize, b: usize) -> bool {
    let (na, nb) = (matrix.supporters(a), matrix.supporters(b));
    nb.len() < na.len() && nb.iter().all(|&i| matrix.approves(i, a))
}

/// Every ordered pair `(dominator, dominated)`, ascending.
pub fn find_dominations(matrix: &ApprovalMatrix) -> Vec<(usize, usize)> {
    let m = matrix.num_candidates();
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if a != b && dominates(matrix, a, b) {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

pub fn is_domination_free(matrix: &ApprovalMatrix) -> bool {
    let m = matrix.num_candidates();
    (0..m).all(|a| (0..m).all(|b| a == b || !dominates(matrix, a, b)))
}

/// Candidates dominated by no other candidate, ascending.
pub fn undominated_candidates(matrix: &ApprovalMatrix) -> Vec<usize> {
    let m = matrix.num_candidates();
    (0..m)
        .filter(|&b| (0..m).all(|a| a == b || !dominates(matrix, a, b)))
        .collect()
}

/// Deletes every dominated column; returns the submatrix and the original
/// indices of the surviving columns.
pub fn remove_dominated_columns(matrix: &ApprovalMatrix) -> (ApprovalMatrix, Vec<usize>) {
    let kept = undominated_candidates(matrix);
    (matrix.select_columns(&kept), kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::fixtures;

    #[test]
    fn example1_dominations() {
        let a = fixtures::example1_matrix();
        assert_eq!(find_dominations(&a), vec![(0, 1), (0, 2), (0, 3)]);
        assert!(!is_domination_free(&a));
        let (reduced, kept) = remove_dominated_columns(&a);
        assert_eq!(kept, vec![0]);
        assert_eq!(reduced.num_candidates(), 1);
    }

    #[test]
    fn identity_and_duplicates_are_free() {
        let id = ApprovalMatrix::from_rows(&[
            vec![true, false, false],
            vec![false, true, false],
            vec![false, false, true],
        ]);
        assert!(find_dominations(&id).is_empty());
        let twins = ApprovalMatrix::from_rows(&[vec![true, true], vec![false, false]]);
        assert!(find_dominations(&twins).is_empty());
        assert!(is_domination_free(&twins));
    }

    #[test]
    fn unapproved_candidate_is_dominated() {
        let a = ApprovalMatrix::from_rows(&[vec![true, false]]);
        assert_eq!(find_dominations(&a), vec![(0, 1)]);
    }
}
