//! JSON documents read and written by the CLI.
//!
//! Every document carries a `schema` tag, indices are 1-based and rationals
//! travel as `"p/q"` or `"p"` strings. Unknown fields are rejected.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiele_core::domains::{Interval, IntervalMode, IntervalModel, LinearOrderWitness, TreeModel};
use thiele_core::hardness::SetCoverInstance;
use thiele_core::{ApprovalMatrix, Election, Rational, Rule, WeightSpec};

use crate::CliError;

pub const ELECTION: &str = "election/1";
pub const MATRIX: &str = "matrix/1";
pub const WEIGHTS: &str = "weights/1";
pub const INTERVALS: &str = "intervals/1";
pub const TREE: &str = "tree/1";
pub const SETCOVER: &str = "setcover/1";
pub const ORDER: &str = "order/1";

fn expect_schema(found: &str, expected: &str) -> Result<(), CliError> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::malformed(format!(
            "expected schema `{expected}`, found `{found}`"
        )))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.parse()
        .map_err(|_| CliError::malformed(format!("`{s}` is not a rational of the form p or p/q")))
}

fn parse_vectors(vectors: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, CliError> {
    vectors
        .iter()
        .map(|v| v.iter().map(|s| parse_rational(s)).collect())
        .collect()
}

fn format_vectors(vectors: &[Vec<Rational>]) -> Vec<Vec<String>> {
    vectors
        .iter()
        .map(|v| v.iter().map(Rational::to_string).collect())
        .collect()
}

fn to_zero_based(index: usize, bound: usize, what: &str) -> Result<usize, CliError> {
    if index == 0 || index > bound {
        return Err(CliError::malformed(format!(
            "{what} index {index} is outside 1..={bound}"
        )));
    }
    Ok(index - 1)
}

fn ballots_from(approvals: &[Vec<usize>], n: usize, m: usize) -> Result<ApprovalMatrix, CliError> {
    if approvals.len() != n {
        return Err(CliError::malformed(format!(
            "num_voters is {n} but {} approval lists are given",
            approvals.len()
        )));
    }
    let ballots = approvals
        .iter()
        .map(|b| {
            b.iter()
                .map(|&c| to_zero_based(c, m, "candidate"))
                .collect()
        })
        .collect::<Result<Vec<Vec<usize>>, _>>()?;
    ApprovalMatrix::new(m, ballots).map_err(|e| CliError::malformed(e.to_string()))
}

fn approvals_of(matrix: &ApprovalMatrix) -> Vec<Vec<usize>> {
    matrix
        .ballots()
        .iter()
        .map(|b| b.iter().map(|c| c + 1).collect())
        .collect()
}

/// `{"rule": "pav"}` or `{"rule": "explicit", "vectors": [["1", "1/2"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsField {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<String>>>,
}

impl WeightsField {
    pub fn rule(rule: Rule) -> Self {
        WeightsField {
            rule: rule.name().to_string(),
            vectors: None,
        }
    }

    pub fn explicit(vectors: &[Vec<Rational>]) -> Self {
        WeightsField {
            rule: "explicit".into(),
            vectors: Some(format_vectors(vectors)),
        }
    }

    pub fn to_spec(&self) -> Result<WeightSpec, CliError> {
        match (self.rule.as_str(), &self.vectors) {
            ("explicit", Some(v)) => Ok(WeightSpec::Explicit(parse_vectors(v)?)),
            ("explicit", None) => Err(CliError::malformed("explicit weights need `vectors`")),
            (_, Some(_)) => Err(CliError::malformed(
                "`vectors` is only allowed with rule `explicit`",
            )),
            (name, None) => name
                .parse()
                .map(WeightSpec::Rule)
                .map_err(CliError::malformed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionFile {
    pub schema: String,
    pub num_voters: usize,
    pub num_candidates: usize,
    pub committee_size: usize,
    pub approvals: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsField>,
}

impl ElectionFile {
    pub fn from_election(election: &Election, weights: Option<WeightsField>) -> Self {
        ElectionFile {
            schema: ELECTION.into(),
            num_voters: election.num_voters(),
            num_candidates: election.num_candidates(),
            committee_size: election.committee_size(),
            approvals: approvals_of(election.matrix()),
            weights,
        }
    }

    pub fn matrix(&self) -> Result<ApprovalMatrix, CliError> {
        expect_schema(&self.schema, ELECTION)?;
        ballots_from(&self.approvals, self.num_voters, self.num_candidates)
    }

    pub fn election(&self) -> Result<Election, CliError> {
        Election::new(self.matrix()?, self.committee_size)
            .map_err(|e| CliError::malformed(e.to_string()))
    }

    pub fn weight_spec(&self) -> Result<Option<WeightSpec>, CliError> {
        self.weights.as_ref().map(WeightsField::to_spec).transpose()
    }
}

/// A bare approval matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub schema: String,
    pub num_voters: usize,
    pub num_candidates: usize,
    pub approvals: Vec<Vec<usize>>,
}

impl MatrixFile {
    pub fn from_matrix(matrix: &ApprovalMatrix) -> Self {
        MatrixFile {
            schema: MATRIX.into(),
            num_voters: matrix.num_voters(),
            num_candidates: matrix.num_candidates(),
            approvals: approvals_of(matrix),
        }
    }

    pub fn matrix(&self) -> Result<ApprovalMatrix, CliError> {
        expect_schema(&self.schema, MATRIX)?;
        ballots_from(&self.approvals, self.num_voters, self.num_candidates)
    }
}

/// Explicit per-voter weight vectors, for `--weights-file`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub schema: String,
    pub vectors: Vec<Vec<String>>,
}

impl WeightsFile {
    pub fn vectors(&self) -> Result<Vec<Vec<Rational>>, CliError> {
        expect_schema(&self.schema, WEIGHTS)?;
        parse_vectors(&self.vectors)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeField {
    Intersection,
    Containment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalsFile {
    pub schema: String,
    pub mode: ModeField,
    pub voters: Vec<[String; 2]>,
    pub candidates: Vec<[String; 2]>,
}

impl IntervalsFile {
    pub fn from_model(model: &IntervalModel) -> Self {
        let pairs = |ivs: &[Interval]| {
            ivs.iter()
                .map(|iv| [iv.left.to_string(), iv.right.to_string()])
                .collect()
        };
        IntervalsFile {
            schema: INTERVALS.into(),
            mode: match model.mode() {
                IntervalMode::Intersection => ModeField::Intersection,
                IntervalMode::Containment => ModeField::Containment,
            },
            voters: pairs(model.voters()),
            candidates: pairs(model.candidates()),
        }
    }

    pub fn model(&self) -> Result<IntervalModel, CliError> {
        expect_schema(&self.schema, INTERVALS)?;
        let parse = |pairs: &[[String; 2]]| {
            pairs
                .iter()
                .map(|[l, r]| Ok(Interval::new(parse_rational(l)?, parse_rational(r)?)))
                .collect::<Result<Vec<_>, CliError>>()
        };
        let mode = match self.mode {
            ModeField::Intersection => IntervalMode::Intersection,
            ModeField::Containment => IntervalMode::Containment,
        };
        IntervalModel::new(mode, parse(&self.voters)?, parse(&self.candidates)?)
            .map_err(|e| CliError::malformed(e.to_string()))
    }
}

/// Vertices are `1..=vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub schema: String,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub voter_subtrees: Vec<Vec<usize>>,
    pub candidate_subtrees: Vec<Vec<usize>>,
}

impl TreeFile {
    pub fn from_model(model: &TreeModel) -> Self {
        let sets = |s: &[BTreeSet<usize>]| {
            s.iter()
                .map(|t| t.iter().map(|v| v + 1).collect())
                .collect()
        };
        TreeFile {
            schema: TREE.into(),
            vertices: model.num_vertices(),
            edges: model.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
            voter_subtrees: sets(model.voter_subtrees()),
            candidate_subtrees: sets(model.candidate_subtrees()),
        }
    }

    pub fn model(&self) -> Result<TreeModel, CliError> {
        expect_schema(&self.schema, TREE)?;
        let nv = self.vertices;
        let sets = |s: &[Vec<usize>]| {
            s.iter()
                .map(|t| t.iter().map(|&v| to_zero_based(v, nv, "vertex")).collect())
                .collect::<Result<Vec<BTreeSet<usize>>, _>>()
        };
        let edges = self
            .edges
            .iter()
            .map(|&[u, v]| {
                Ok((
                    to_zero_based(u, nv, "vertex")?,
                    to_zero_based(v, nv, "vertex")?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        TreeModel::new(
            nv,
            edges,
            sets(&self.voter_subtrees)?,
            sets(&self.candidate_subtrees)?,
        )
        .map_err(|e| CliError::malformed(e.to_string()))
    }
}

/// Universe `1..=universe_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetCoverFile {
    pub schema: String,
    pub universe_size: usize,
    pub subsets: Vec<Vec<usize>>,
    pub budget: usize,
}

impl SetCoverFile {
    pub fn instance(&self) -> Result<SetCoverInstance, CliError> {
        expect_schema(&self.schema, SETCOVER)?;
        let n = self.universe_size;
        let subsets = self
            .subsets
            .iter()
            .map(|s| s.iter().map(|&e| to_zero_based(e, n, "element")).collect())
            .collect::<Result<Vec<BTreeSet<usize>>, _>>()?;
        SetCoverInstance::new(n, subsets, self.budget)
            .map_err(|e| CliError::malformed(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderFile {
    pub schema: String,
    pub voter_order: Vec<usize>,
    pub candidate_order: Vec<usize>,
}

impl OrderFile {
    pub fn from_witness(w: &LinearOrderWitness) -> Self {
        OrderFile {
            schema: ORDER.into(),
            voter_order: w.voter_order().iter().map(|v| v + 1).collect(),
            candidate_order: w.candidate_order().iter().map(|c| c + 1).collect(),
        }
    }

    pub fn witness(&self) -> Result<LinearOrderWitness, CliError> {
        expect_schema(&self.schema, ORDER)?;
        let shift = |s: &[usize], what: &str| {
            s.iter()
                .map(|&i| to_zero_based(i, s.len(), what))
                .collect::<Result<Vec<_>, _>>()
        };
        LinearOrderWitness::new(
            shift(&self.voter_order, "voter")?,
            shift(&self.candidate_order, "candidate")?,
        )
        .map_err(|e| CliError::malformed(e.to_string()))
    }
}

/// Reads an approval matrix from either an election or a matrix document.
pub fn matrix_from_value(value: serde_json::Value) -> Result<ApprovalMatrix, CliError> {
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(ELECTION) => from_value::<ElectionFile>(value)?.matrix(),
        Some(MATRIX) => from_value::<MatrixFile>(value)?.matrix(),
        Some(other) => Err(CliError::malformed(format!(
            "expected schema `{ELECTION}` or `{MATRIX}`, found `{other}`"
        ))),
        None => Err(CliError::malformed("missing `schema` field")),
    }
}

pub fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roundtrip<T: Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(
        doc: &T,
    ) {
        let text = serde_json::to_string(doc).unwrap();
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, doc);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"schema":"order/1","voter_order":[1],"candidate_order":[1],"extra":0}"#;
        assert!(serde_json::from_str::<OrderFile>(text).is_err());
        let text = r#"{"rule":"pav","colour":"red"}"#;
        assert!(serde_json::from_str::<WeightsField>(text).is_err());
    }

    #[test]
    fn wrong_schema_tag() {
        let doc = OrderFile {
            schema: "order/2".into(),
            voter_order: vec![1],
            candidate_order: vec![1],
        };
        assert_eq!(doc.witness().unwrap_err().code, crate::EXIT_MALFORMED);
    }

    #[test]
    fn zero_index_is_malformed() {
        let doc = ElectionFile {
            schema: ELECTION.into(),
            num_voters: 1,
            num_candidates: 2,
            committee_size: 1,
            approvals: vec![vec![0]],
            weights: None,
        };
        assert!(doc.election().is_err());
    }

    #[test]
    fn weights_field_forms() {
        assert_eq!(
            WeightsField::rule(Rule::Pav).to_spec().unwrap(),
            WeightSpec::Rule(Rule::Pav)
        );
        let explicit = WeightsField::explicit(&[vec![Rational::one(), Rational::new(1, 2)]]);
        assert_eq!(
            explicit.vectors.as_ref().unwrap()[0],
            vec!["1".to_string(), "1/2".to_string()]
        );
        assert!(WeightsField {
            rule: "explicit".into(),
            vectors: None
        }
        .to_spec()
        .is_err());
        assert!(WeightsField {
            rule: "borda".into(),
            vectors: None
        }
        .to_spec()
        .is_err());
    }

    fn ballots() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(n, m)| {
            (
                Just(m),
                prop::collection::vec(prop::collection::btree_set(1..=m, 0..=m), n),
            )
                .prop_map(|(m, b)| (m, b.into_iter().map(|s| s.into_iter().collect()).collect()))
        })
    }

    proptest! {
        #[test]
        fn election_roundtrip((m, approvals) in ballots(), k in 1usize..6, pav in any::<bool>()) {
            let k = k.min(m);
            let doc = ElectionFile {
                schema: ELECTION.into(),
                num_voters: approvals.len(),
                num_candidates: m,
                committee_size: k,
                approvals,
                weights: Some(if pav {
                    WeightsField::rule(Rule::Pav)
                } else {
                    WeightsField::explicit(&[vec![Rational::new(3, 7); k]])
                }),
            };
            roundtrip(&doc);
            let election = doc.election().unwrap();
            prop_assert_eq!(ElectionFile::from_election(&election, doc.weights.clone()), doc);
        }

        #[test]
        fn matrix_roundtrip((m, approvals) in ballots()) {
            let doc = MatrixFile { schema: MATRIX.into(), num_voters: approvals.len(), num_candidates: m, approvals };
            roundtrip(&doc);
            prop_assert_eq!(MatrixFile::from_matrix(&doc.matrix().unwrap()), doc);
        }

        #[test]
        fn intervals_roundtrip(ends in prop::collection::vec((-20i64..20, 0i64..10, 1i64..4), 2..8), split in 1usize..7) {
            let split = split.min(ends.len() - 1);
            let pairs: Vec<[String; 2]> = ends
                .iter()
                .map(|&(l, len, d)| [Rational::new(l, d).to_string(), Rational::new(l + len, d).to_string()])
                .collect();
            let doc = IntervalsFile {
                schema: INTERVALS.into(),
                mode: ModeField::Containment,
                voters: pairs[..split].to_vec(),
                candidates: pairs[split..].to_vec(),
            };
            roundtrip(&doc);
            prop_assert_eq!(IntervalsFile::from_model(&doc.model().unwrap()), doc);
        }

        #[test]
        fn order_roundtrip(v in Just((1..=5).collect::<Vec<usize>>()).prop_shuffle(),
                           c in Just((1..=4).collect::<Vec<usize>>()).prop_shuffle()) {
            let doc = OrderFile { schema: ORDER.into(), voter_order: v, candidate_order: c };
            roundtrip(&doc);
            prop_assert_eq!(OrderFile::from_witness(&doc.witness().unwrap()), doc);
        }

        #[test]
        fn tree_roundtrip(parents in prop::collection::vec(any::<prop::sample::Index>(), 0..6)) {
            // Vertex v + 2 hangs off an earlier vertex, so the edges form a tree.
            let edges: Vec<[usize; 2]> =
                parents.iter().enumerate().map(|(v, p)| [p.index(v + 1) + 1, v + 2]).collect();
            let nv = parents.len() + 1;
            let doc = TreeFile {
                schema: TREE.into(),
                vertices: nv,
                edges,
                voter_subtrees: vec![vec![1], (1..=nv).collect()],
                candidate_subtrees: vec![vec![nv]],
            };
            roundtrip(&doc);
            prop_assert_eq!(TreeFile::from_model(&doc.model().unwrap()), doc);
        }
    }
}
