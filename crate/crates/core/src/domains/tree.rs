use std::collections::BTreeSet;

use super::DomainError;
use crate::ApprovalMatrix;

/// Voters and candidates as vertex sets of a tree on `0..num_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeModel {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    voter_subtrees: Vec<BTreeSet<usize>>,
    candidate_subtrees: Vec<BTreeSet<usize>>,
}

impl TreeModel {
    /// Checks that the edges form a spanning tree and that every vertex set
    /// lies in range; subtree connectivity is checked by
    /// [`tree_model_to_matrix`].
    pub fn new(
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
        voter_subtrees: Vec<BTreeSet<usize>>,
        candidate_subtrees: Vec<BTreeSet<usize>>,
    ) -> Result<Self, DomainError> {
        if num_vertices == 0 {
            return Err(DomainError::InvalidTree("no vertices".into()));
        }
        if edges.len() + 1 != num_vertices {
            return Err(DomainError::InvalidTree(format!(
                "{} edges on {num_vertices} vertices",
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(u, v) in &edges {
            if u >= num_vertices || v >= num_vertices || u == v {
                return Err(DomainError::InvalidTree(format!("bad edge ({u}, {v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let all: BTreeSet<usize> = (0..num_vertices).collect();
        if !connected(&adjacency, &all) {
            return Err(DomainError::InvalidTree(
                "edges do not connect all vertices".into(),
            ));
        }
        if voter_subtrees.is_empty() || candidate_subtrees.is_empty() {
            return Err(DomainError::EmptyModel);
        }
        for set in voter_subtrees.iter().chain(&candidate_subtrees) {
            if let Some(&v) = set.iter().find(|&&v| v >= num_vertices) {
                return Err(DomainError::InvalidTree(format!("vertex {v} out of range")));
            }
        }
        Ok(TreeModel {
            num_vertices,
            edges,
            adjacency,
            voter_subtrees,
            candidate_subtrees,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn voter_subtrees(&self) -> &[BTreeSet<usize>] {
        &self.voter_subtrees
    }

    pub fn candidate_subtrees(&self) -> &[BTreeSet<usize>] {
        &self.candidate_subtrees
    }

    pub fn validate_subtrees(&self) -> Result<(), DomainError> {
        let named = self
            .voter_subtrees
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("voter {i}"), s))
            .chain(
                self.candidate_subtrees
                    .iter()
                    .enumerate()
                    .map(|(c, s)| (format!("candidate {c}"), s)),
            );
        for (name, set) in named {
            if set.is_empty() {
                return Err(DomainError::EmptySubtree(name));
            }
            if !connected(&self.adjacency, set) {
                return Err(DomainError::DisconnectedSubtree(name));
            }
        }
        Ok(())
    }
}

fn connected(adjacency: &[Vec<usize>], set: &BTreeSet<usize>) -> bool {
    let Some(&start) = set.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in &adjacency[u] {
            if set.contains(&v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen.len() == set.len()
}

/// Voter approves candidate when their subtrees share a vertex.
pub fn tree_model_to_matrix(model: &TreeModel) -> Result<ApprovalMatrix, DomainError> {
    model.validate_subtrees()?;
    let rows: Vec<Vec<bool>> = model
        .voter_subtrees
        .iter()
        .map(|v| {
            model
                .candidate_subtrees
                .iter()
                .map(|c| !v.is_disjoint(c))
                .collect()
        })
        .collect();
    Ok(ApprovalMatrix::from_rows(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    // Centre 0, leaves 1 and 2.
    fn star(voters: &[&[usize]], candidates: &[&[usize]]) -> Result<TreeModel, DomainError> {
        TreeModel::new(
            3,
            vec![(0, 1), (0, 2)],
            voters.iter().map(|v| set(v)).collect(),
            candidates.iter().map(|c| set(c)).collect(),
        )
    }

    #[test]
    fn star_examples() {
        let m = star(&[&[2, 0]], &[&[1]]).unwrap();
        assert!(!tree_model_to_matrix(&m).unwrap().approves(0, 0));
        let m = star(&[&[1, 0]], &[&[1]]).unwrap();
        assert!(tree_model_to_matrix(&m).unwrap().approves(0, 0));
    }

    #[test]
    fn disconnected_and_empty_subtrees() {
        let m = star(&[&[1, 2]], &[&[1]]).unwrap();
        assert_eq!(
            tree_model_to_matrix(&m),
            Err(DomainError::DisconnectedSubtree("voter 0".into()))
        );
        let m = star(&[&[1]], &[&[]]).unwrap();
        assert_eq!(
            tree_model_to_matrix(&m),
            Err(DomainError::EmptySubtree("candidate 0".into()))
        );
    }

    #[test]
    fn invalid_trees() {
        let cycle = TreeModel::new(
            3,
            vec![(0, 1), (1, 2), (2, 0)],
            vec![set(&[0])],
            vec![set(&[0])],
        );
        assert!(matches!(cycle, Err(DomainError::InvalidTree(_))));
        let forest = TreeModel::new(
            4,
            vec![(0, 1), (2, 3), (0, 1)],
            vec![set(&[0])],
            vec![set(&[0])],
        );
        assert!(matches!(forest, Err(DomainError::InvalidTree(_))));
        let range = TreeModel::new(2, vec![(0, 1)], vec![set(&[5])], vec![set(&[0])]);
        assert!(matches!(range, Err(DomainError::InvalidTree(_))));
        assert!(TreeModel::new(1, vec![], vec![set(&[0])], vec![set(&[0])]).is_ok());
    }
}
