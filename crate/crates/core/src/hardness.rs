//! Set-cover gadgets on star-shaped tree representations, and brute-force
//! oracles for committees and set cover.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::domains::{tree_model_to_matrix, DomainError, TreeModel};
use crate::{score_committee, Committee, Election, Rational, Rule, WeightSystem};

/// Default cap on the number of committees [`brute_force_committee`] enumerates.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;
/// Largest number of subsets [`brute_force_set_cover`] accepts.
pub const SET_COVER_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HardnessError {
    #[error(
        "element {element} of subset {subset} is outside the universe of size {universe_size}"
    )]
    ElementOutOfRange {
        subset: usize,
        element: usize,
        universe_size: usize,
    },
    #[error("budget {budget} exceeds the number of subsets {subsets}")]
    BudgetTooLarge { budget: usize, subsets: usize },
    #[error("instance too large: {what} is {size}, limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u64,
        limit: u64,
    },
    #[error("the subsets do not cover the universe")]
    NoCover,
    #[error("gadget would have no {0}")]
    EmptyGadget(&'static str),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Universe `0..universe_size`, subsets of it, and a budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe_size: usize,
    subsets: Vec<BTreeSet<usize>>,
    budget: usize,
}

impl SetCoverInstance {
    pub fn new(
        universe_size: usize,
        subsets: Vec<BTreeSet<usize>>,
        budget: usize,
    ) -> Result<Self, HardnessError> {
        for (subset, s) in subsets.iter().enumerate() {
            if let Some(&element) = s.iter().find(|&&e| e >= universe_size) {
                return Err(HardnessError::ElementOutOfRange {
                    subset,
                    element,
                    universe_size,
                });
            }
        }
        if budget > subsets.len() {
            return Err(HardnessError::BudgetTooLarge {
                budget,
                subsets: subsets.len(),
            });
        }
        Ok(SetCoverInstance {
            universe_size,
            subsets,
            budget,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn subsets(&self) -> &[BTreeSet<usize>] {
        &self.subsets
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn with_budget(&self, budget: usize) -> Result<Self, HardnessError> {
        Self::new(self.universe_size, self.subsets.clone(), budget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Candidates are single leaves, voters are substars through the centre.
    LeafCandidates,
    /// Voters are single leaves, candidates are substars through the centre.
    LeafVoters,
    /// Every vertex, centre included, hosts a candidate; each leaf also
    /// carries a block of dummy voters.
    AllVertexCandidates,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetOutput {
    pub tree_model: TreeModel,
    pub election: Election,
    pub weights: WeightSystem,
    pub target_score: Rational,
    /// Dummy voters per leaf; only for [`Variant::AllVertexCandidates`].
    pub dummy_multiplier: Option<usize>,
}

/// Builds the gadget election, with `L = n` dummy voters per leaf in the
/// all-vertex variant.
pub fn set_cover_to_tr_election(
    instance: &SetCoverInstance,
    variant: Variant,
) -> Result<GadgetOutput, HardnessError> {
    set_cover_to_tr_election_with(instance, variant, instance.universe_size)
}

/// The star has centre 0 and leaf `j + 1` for subset `j` (or element `j`
/// in the leaf-voter variant).
pub fn set_cover_to_tr_election_with(
    instance: &SetCoverInstance,
    variant: Variant,
    dummy_multiplier: usize,
) -> Result<GadgetOutput, HardnessError> {
    let (n, m, k) = (
        instance.universe_size,
        instance.subsets.len(),
        instance.budget,
    );
    if m == 0 {
        return Err(HardnessError::EmptyGadget("candidates"));
    }
    if k == 0 {
        return Err(HardnessError::EmptyGadget("committee seats"));
    }
    let containing = |i: usize| -> BTreeSet<usize> {
        (0..m)
            .filter(|&j| instance.subsets[j].contains(&i))
            .map(|j| j + 1)
            .collect()
    };
    let star = |leaves: usize| (1..=leaves).map(|v| (0, v)).collect::<Vec<_>>();
    let with_centre = |mut s: BTreeSet<usize>| {
        s.insert(0);
        s
    };
    let (tree_model, target_score, l) = match variant {
        Variant::LeafCandidates => {
            if n == 0 {
                return Err(HardnessError::EmptyGadget("voters"));
            }
            let voters = (0..n).map(|i| with_centre(containing(i))).collect();
            let candidates = (1..=m).map(|v| BTreeSet::from([v])).collect();
            (
                TreeModel::new(m + 1, star(m), voters, candidates)?,
                Rational::from(n),
                None,
            )
        }
        Variant::LeafVoters => {
            if n == 0 {
                return Err(HardnessError::EmptyGadget("voters"));
            }
            let voters = (1..=n).map(|v| BTreeSet::from([v])).collect();
            let candidates = instance
                .subsets
                .iter()
                .map(|s| with_centre(s.iter().map(|&i| i + 1).collect()))
                .collect();
            (
                TreeModel::new(n + 1, star(n), voters, candidates)?,
                Rational::from(n),
                None,
            )
        }
        Variant::AllVertexCandidates => {
            let l = dummy_multiplier;
            let mut voters: Vec<BTreeSet<usize>> =
                (0..n).map(|i| with_centre(containing(i))).collect();
            for v in 1..=m {
                voters.extend(std::iter::repeat_n(BTreeSet::from([v]), l));
            }
            if voters.is_empty() {
                return Err(HardnessError::EmptyGadget("voters"));
            }
            let candidates = (0..=m).map(|v| BTreeSet::from([v])).collect();
            let tau = Rational::from(n + k * l);
            (
                TreeModel::new(m + 1, star(m), voters, candidates)?,
                tau,
                Some(l),
            )
        }
    };
    let matrix = tree_model_to_matrix(&tree_model)?;
    let num_candidates = matrix.num_candidates();
    let election = Election::new(matrix, k).map_err(|_| HardnessError::BudgetTooLarge {
        budget: k,
        subsets: num_candidates,
    })?;
    let weights = WeightSystem::new(vec![Rule::Cc.vector(k); election.num_voters()], k)
        .expect("rule vectors have length k");
    Ok(GadgetOutput {
        tree_model,
        election,
        weights,
        target_score,
        dummy_multiplier: l,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitteeOptimum {
    pub optimum: Rational,
    /// Every optimal committee, in lexicographic order.
    pub maximizers: Vec<Committee>,
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u64, |acc, i| {
        acc.saturating_mul((n - i) as u64) / (i as u64 + 1)
    })
}

pub fn brute_force_committee(
    election: &Election,
    weights: &WeightSystem,
) -> Result<CommitteeOptimum, HardnessError> {
    brute_force_committee_capped(election, weights, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates all size-k committees when there are at most `cap` of them.
pub fn brute_force_committee_capped(
    election: &Election,
    weights: &WeightSystem,
    cap: u64,
) -> Result<CommitteeOptimum, HardnessError> {
    let (m, k) = (election.num_candidates(), election.committee_size());
    let count = binomial(m, k);
    if count > cap {
        return Err(HardnessError::TooLarge {
            what: "number of committees",
            size: count,
            limit: cap,
        });
    }
    let mut optimum: Option<Rational> = None;
    let mut maximizers = Vec::new();
    for members in (0..m).combinations(k) {
        let committee = Committee::new(members);
        let score = score_committee(election, weights, &committee);
        match optimum.as_ref().map(|best| score.cmp(best)) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => maximizers.push(committee),
            _ => {
                optimum = Some(score);
                maximizers = vec![committee];
            }
        }
    }
    Ok(CommitteeOptimum {
        optimum: optimum.expect("k <= m gives a committee"),
        maximizers,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetCoverResult {
    pub min_size: usize,
    pub exists_within_budget: bool,
}

pub fn brute_force_set_cover(instance: &SetCoverInstance) -> Result<SetCoverResult, HardnessError> {
    let m = instance.subsets.len();
    if m > SET_COVER_LIMIT {
        return Err(HardnessError::TooLarge {
            what: "number of subsets",
            size: m as u64,
            limit: SET_COVER_LIMIT as u64,
        });
    }
    let words = instance.universe_size.div_ceil(64);
    let masks: Vec<Vec<u64>> = instance
        .subsets
        .iter()
        .map(|s| {
            let mut w = vec![0u64; words];
            for &e in s {
                w[e / 64] |= 1 << (e % 64);
            }
            w
        })
        .collect();
    let full: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (instance.universe_size - 64 * w).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    for size in 0..=m {
        let covered = (0..m).combinations(size).any(|choice| {
            let mut union = vec![0u64; words];
            for j in choice {
                for (u, s) in union.iter_mut().zip(&masks[j]) {
                    *u |= s;
                }
            }
            union == full
        });
        if covered {
            return Ok(SetCoverResult {
                min_size: size,
                exists_within_budget: size <= instance.budget,
            });
        }
    }
    Err(HardnessError::NoCover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::fixtures;
    use crate::{make_rule_weights, WeightSpec};
    use proptest::prelude::*;

    fn sets(raw: &[&[usize]]) -> Vec<BTreeSet<usize>> {
        raw.iter().map(|s| s.iter().copied().collect()).collect()
    }

    fn small() -> SetCoverInstance {
        SetCoverInstance::new(2, sets(&[&[0], &[1], &[0, 1]]), 1).unwrap()
    }

    #[test]
    fn leaf_candidate_gadget() {
        let g = set_cover_to_tr_election(&small(), Variant::LeafCandidates).unwrap();
        let a = g.election.matrix();
        assert_eq!((a.num_voters(), a.num_candidates()), (2, 3));
        assert_eq!(a.approvals(0), &[0, 2]);
        assert_eq!(a.approvals(1), &[1, 2]);
        assert_eq!(g.target_score, Rational::from(2i64));
        assert_eq!(tree_model_to_matrix(&g.tree_model).unwrap(), *a);
    }

    #[test]
    fn leaf_voter_gadget() {
        let g = set_cover_to_tr_election(&small(), Variant::LeafVoters).unwrap();
        let a = g.election.matrix();
        assert_eq!(a.num_candidates(), 3);
        assert_eq!(a.supporters(0), &[0]);
        assert_eq!(a.supporters(1), &[1]);
        assert_eq!(a.supporters(2), &[0, 1]);
        assert_eq!(g.target_score, Rational::from(2i64));
    }

    #[test]
    fn all_vertex_gadget() {
        let g = set_cover_to_tr_election(&small(), Variant::AllVertexCandidates).unwrap();
        assert_eq!(g.election.num_voters(), 8);
        assert_eq!(g.election.num_candidates(), 4);
        assert_eq!(g.target_score, Rational::from(4i64));
        assert_eq!(g.dummy_multiplier, Some(2));
    }

    #[test]
    fn committee_oracle_examples() {
        let a = fixtures::example1_matrix();
        let e = Election::new(a, 2).unwrap();
        let pav = make_rule_weights(&WeightSpec::Rule(Rule::Pav), &e).unwrap();
        let r = brute_force_committee(&e, &pav).unwrap();
        assert_eq!(r.optimum, Rational::new(7, 2));
        assert_eq!(
            r.maximizers,
            vec![
                Committee::new([0, 1]),
                Committee::new([0, 2]),
                Committee::new([0, 3])
            ]
        );
        let cc = make_rule_weights(&WeightSpec::Rule(Rule::Cc), &e).unwrap();
        let r = brute_force_committee(&e, &cc).unwrap();
        assert_eq!(r.optimum, Rational::from(3i64));
        assert!(r.maximizers.iter().all(|c| c.contains(0)));
        assert_eq!(r.maximizers.len(), 3);
        let zero = fixtures::example2();
        let r = brute_force_committee(&zero.election, &zero.weights).unwrap();
        assert!(r.optimum.is_zero());
        assert_eq!(r.maximizers.len(), 6);
        let full = Election::new(fixtures::example1_matrix(), 4).unwrap();
        let w = make_rule_weights(&WeightSpec::Rule(Rule::Av), &full).unwrap();
        assert_eq!(
            brute_force_committee(&full, &w).unwrap().maximizers.len(),
            1
        );
        assert!(matches!(
            brute_force_committee_capped(&e, &pav, 5),
            Err(HardnessError::TooLarge { .. })
        ));
    }

    #[test]
    fn set_cover_oracle_examples() {
        assert_eq!(brute_force_set_cover(&small()).unwrap().min_size, 1);
        let two = SetCoverInstance::new(3, sets(&[&[0, 1], &[1, 2]]), 1).unwrap();
        assert_eq!(
            brute_force_set_cover(&two).unwrap(),
            SetCoverResult {
                min_size: 2,
                exists_within_budget: false
            }
        );
        let none = SetCoverInstance::new(2, sets(&[&[0]]), 1).unwrap();
        assert_eq!(brute_force_set_cover(&none), Err(HardnessError::NoCover));
        let wide = SetCoverInstance::new(70, vec![(0..70).collect()], 1).unwrap();
        assert_eq!(brute_force_set_cover(&wide).unwrap().min_size, 1);
        let many = SetCoverInstance::new(1, vec![BTreeSet::new(); 21], 0).unwrap();
        assert!(matches!(
            brute_force_set_cover(&many),
            Err(HardnessError::TooLarge { .. })
        ));
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            SetCoverInstance::new(2, sets(&[&[2]]), 1),
            Err(HardnessError::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            SetCoverInstance::new(2, sets(&[&[1]]), 2),
            Err(HardnessError::BudgetTooLarge { .. })
        ));
        let empty = SetCoverInstance::new(2, vec![], 0).unwrap();
        assert!(set_cover_to_tr_election(&empty, Variant::LeafCandidates).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = SetCoverInstance> {
        (1usize..5, 1usize..5).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(proptest::collection::btree_set(0..n, 0..=n), m),
                1..=m,
            )
                .prop_map(move |(subsets, k)| SetCoverInstance::new(n, subsets, k).unwrap())
        })
    }

    proptest! {
        #[test]
        fn gadgets_decide_set_cover(instance in arb_instance()) {
            let cover = brute_force_set_cover(&instance);
            let exists = matches!(cover, Ok(SetCoverResult { exists_within_budget: true, .. }));
            for variant in [Variant::LeafCandidates, Variant::LeafVoters, Variant::AllVertexCandidates] {
                let g = set_cover_to_tr_election(&instance, variant).unwrap();
                prop_assert_eq!(tree_model_to_matrix(&g.tree_model).unwrap(), g.election.matrix().clone());
                let best = brute_force_committee(&g.election, &g.weights).unwrap();
                prop_assert_eq!(best.optimum == g.target_score, exists);
                prop_assert!(best.optimum <= g.target_score);
            }
        }
    }
}
