//! Subcommand implementations. Each takes parsed arguments and returns the
//! JSON document to print.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Value};
use thiele_core::domains::{
    check_lc_order, consecutive_ones_order, find_dominations, intervals_to_matrix,
    lc_order_to_vcci_intervals, tree_model_to_matrix, vcci_intervals_to_lc_order, vci_to_lc_order,
    Axis, DomainError, IntervalMode,
};
use thiele_core::hardness::{
    brute_force_committee, brute_force_set_cover, set_cover_to_tr_election_with, HardnessError,
    Variant,
};
use thiele_core::solver::{solve_extreme_point, solve_thiele, SolveTrace, SolverError};
use thiele_core::{make_rule_weights, Election, Rational, Rule, WeightSpec, WeightSystem};

use crate::schema::{
    from_value, matrix_from_value, ElectionFile, IntervalsFile, MatrixFile, OrderFile,
    SetCoverFile, TreeFile, WeightsField, WeightsFile,
};
use crate::{CliError, EXIT_DOMAIN, EXIT_INTERNAL, EXIT_TOO_LARGE, EXIT_UNSUPPORTED, EXIT_WEIGHTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Av,
    Cc,
    Pav,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Rule {
        match r {
            RuleArg::Av => Rule::Av,
            RuleArg::Cc => Rule::Cc,
            RuleArg::Pav => Rule::Pav,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Algorithm,
    ExtremePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Ci,
    Vi,
    DominationFree,
    LcOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertFrom {
    IntervalsIntersection,
    IntervalsContainment,
    Tree,
    LcOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertTo {
    Matrix,
    LcOrder,
    VcciIntervals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    LeafCandidates,
    LeafVoters,
    AllVertex,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::LeafCandidates => Variant::LeafCandidates,
            VariantArg::LeafVoters => Variant::LeafVoters,
            VariantArg::AllVertex => Variant::AllVertexCandidates,
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))
}

fn read_doc<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    from_value(read_json(path)?)
}

fn to_json<T: serde::Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("schema types serialize")
}

fn one_based(indices: impl IntoIterator<Item = usize>) -> Vec<usize> {
    indices.into_iter().map(|i| i + 1).collect()
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(Rational::to_string).collect()
}

fn domain_error(e: DomainError) -> CliError {
    match e {
        DomainError::TooLarge { .. } => CliError::new(EXIT_TOO_LARGE, e.to_string()),
        DomainError::NotLcWitness | DomainError::EmptyRow(_) | DomainError::EmptyColumn(_) => {
            CliError::new(EXIT_DOMAIN, e.to_string())
        }
        _ => CliError::malformed(e.to_string()),
    }
}

fn hardness_error(e: HardnessError) -> CliError {
    match e {
        HardnessError::TooLarge { .. } => CliError::new(EXIT_TOO_LARGE, e.to_string()),
        HardnessError::Domain(d) => domain_error(d),
        _ => CliError::malformed(e.to_string()),
    }
}

fn solver_error(e: SolverError) -> CliError {
    match e {
        SolverError::DomainViolation(_) => CliError::new(EXIT_DOMAIN, e.to_string()),
        SolverError::WeightsNotStrictlyDecreasingPositive | SolverError::Weights(_) => {
            CliError::new(EXIT_WEIGHTS, e.to_string())
        }
        _ => CliError::new(EXIT_INTERNAL, e.to_string()),
    }
}

/// Election and weights, with flags taking precedence over the file.
pub fn load_election(
    input: &Path,
    rule: Option<RuleArg>,
    weights_file: Option<&Path>,
) -> Result<(Election, WeightSystem), CliError> {
    let doc: ElectionFile = read_doc(input)?;
    let election = doc.election()?;
    let spec = match (rule, weights_file) {
        (Some(_), Some(_)) => {
            return Err(CliError::malformed(
                "--rule and --weights-file are exclusive",
            ))
        }
        (Some(r), None) => WeightSpec::Rule(r.into()),
        (None, Some(path)) => WeightSpec::Explicit(read_doc::<WeightsFile>(path)?.vectors()?),
        (None, None) => doc.weight_spec()?.ok_or_else(|| {
            CliError::malformed("no weights: pass --rule, --weights-file or set `weights`")
        })?,
    };
    let weights =
        make_rule_weights(&spec, &election).map_err(|e| CliError::malformed(e.to_string()))?;
    Ok((election, weights))
}

fn trace_json(trace: &SolveTrace, m: usize) -> Value {
    let r = &trace.residual;
    json!({
        "lp_x": strings(&trace.lp_point[..m]),
        "lp_objective": trace.lp_objective.to_string(),
        "shift_steps": trace.shift_steps.iter().map(|s| json!({
            "recipient": s.recipient + 1,
            "donor": s.donor + 1,
            "amount": s.amount.to_string(),
        })).collect::<Vec<_>>(),
        "step_objectives": strings(&trace.step_objectives),
        "shifted_x": strings(&trace.shifted_x),
        "fixed": one_based(r.fixed.iter().copied()),
        "excluded": one_based(r.excluded.iter().copied()),
        "fractional": one_based(r.fractional.iter().copied()),
        "k_prime": r.k_prime,
        "residual_x": strings(&trace.residual_point),
        "residual_objective": trace.residual_objective.to_string(),
        "fixed_score": trace.fixed_score.to_string(),
    })
}

pub fn solve(
    election: &Election,
    weights: &WeightSystem,
    mode: SolveMode,
    validate_domain: bool,
    with_trace: bool,
) -> Result<Value, CliError> {
    let (committee, score, trace) = match mode {
        SolveMode::Algorithm => {
            let (c, s, t) =
                solve_thiele(election, weights, validate_domain).map_err(solver_error)?;
            (c, s, Some(t))
        }
        SolveMode::ExtremePoint => {
            let (c, s) = solve_extreme_point(election, weights).map_err(solver_error)?;
            (c, s, None)
        }
    };
    let mut out = json!({
        "committee": committee.one_based(),
        "score": score.to_string(),
        "mode": match mode {
            SolveMode::Algorithm => "algorithm",
            SolveMode::ExtremePoint => "extreme-point",
        },
    });
    if with_trace {
        out["trace"] = trace.map_or(Value::Null, |t| trace_json(&t, election.num_candidates()));
    }
    Ok(out)
}

pub fn check(
    input: &Path,
    property: Property,
    order_file: Option<&Path>,
) -> Result<Value, CliError> {
    let matrix = matrix_from_value(read_json(input)?)?;
    let name = match property {
        Property::Ci => "ci",
        Property::Vi => "vi",
        Property::DominationFree => "domination-free",
        Property::LcOrder => "lc-order",
    };
    let (holds, witness) = match property {
        Property::Ci | Property::Vi => {
            let axis = if property == Property::Ci {
                Axis::Columns
            } else {
                Axis::Rows
            };
            match consecutive_ones_order(&matrix, axis) {
                Some(order) => (true, json!(one_based(order))),
                None => (false, Value::Null),
            }
        }
        Property::DominationFree => {
            let pairs = find_dominations(&matrix);
            let list: Vec<[usize; 2]> = pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
            (
                pairs.is_empty(),
                if pairs.is_empty() {
                    Value::Null
                } else {
                    json!(list)
                },
            )
        }
        Property::LcOrder => {
            let path = order_file
                .ok_or_else(|| CliError::malformed("--property lc-order needs --order-file"))?;
            let witness = read_doc::<OrderFile>(path)?.witness()?;
            if !witness.fits(&matrix) {
                return Err(CliError::malformed(
                    "order file does not match the matrix dimensions",
                ));
            }
            (check_lc_order(&matrix, &witness), Value::Null)
        }
    };
    let mut out = json!({ "property": name, "holds": holds });
    if !witness.is_null() {
        out["witness"] = witness;
    }
    Ok(out)
}

pub fn convert(
    input: &Path,
    from: ConvertFrom,
    to: ConvertTo,
    order_file: Option<&Path>,
) -> Result<Value, CliError> {
    let intervals = |expected: IntervalMode| -> Result<_, CliError> {
        let model = read_doc::<IntervalsFile>(input)?.model()?;
        if model.mode() != expected {
            return Err(CliError::malformed(format!(
                "interval file has mode {:?}, but --from expects {expected:?}",
                model.mode()
            )));
        }
        Ok(model)
    };
    match (from, to) {
        (ConvertFrom::IntervalsIntersection, ConvertTo::Matrix) => {
            Ok(to_json(&MatrixFile::from_matrix(&intervals_to_matrix(
                &intervals(IntervalMode::Intersection)?,
            ))))
        }
        (ConvertFrom::IntervalsContainment, ConvertTo::Matrix) => Ok(to_json(
            &MatrixFile::from_matrix(&intervals_to_matrix(&intervals(IntervalMode::Containment)?)),
        )),
        (ConvertFrom::Tree, ConvertTo::Matrix) => {
            let model = read_doc::<TreeFile>(input)?.model()?;
            let matrix = tree_model_to_matrix(&model).map_err(domain_error)?;
            Ok(to_json(&MatrixFile::from_matrix(&matrix)))
        }
        (ConvertFrom::IntervalsIntersection, ConvertTo::LcOrder) => {
            let w =
                vci_to_lc_order(&intervals(IntervalMode::Intersection)?).map_err(domain_error)?;
            Ok(to_json(&OrderFile::from_witness(&w)))
        }
        (ConvertFrom::IntervalsContainment, ConvertTo::LcOrder) => {
            let w = vcci_intervals_to_lc_order(&intervals(IntervalMode::Containment)?)
                .map_err(domain_error)?;
            Ok(to_json(&OrderFile::from_witness(&w)))
        }
        (ConvertFrom::LcOrder, ConvertTo::VcciIntervals) => {
            let matrix = matrix_from_value(read_json(input)?)?;
            let path = order_file
                .ok_or_else(|| CliError::malformed("--from lc-order needs --order-file"))?;
            let witness = read_doc::<OrderFile>(path)?.witness()?;
            if !witness.fits(&matrix) {
                return Err(CliError::malformed(
                    "order file does not match the matrix dimensions",
                ));
            }
            let model = lc_order_to_vcci_intervals(&matrix, &witness).map_err(domain_error)?;
            Ok(to_json(&IntervalsFile::from_model(&model)))
        }
        (from, to) => Err(CliError::new(
            EXIT_UNSUPPORTED,
            format!("conversion from {from:?} to {to:?} is not supported"),
        )),
    }
}

pub fn gen(
    set_cover: &Path,
    variant: VariantArg,
    dummy_multiplier: Option<usize>,
    out_dir: &Path,
) -> Result<Value, CliError> {
    let instance = read_doc::<SetCoverFile>(set_cover)?.instance()?;
    let l = dummy_multiplier.unwrap_or(instance.universe_size());
    let variant_name = variant
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    match set_cover_to_tr_election_with(&instance, variant.into(), l) {
        Ok(gadget) => {
            fs::create_dir_all(out_dir).map_err(|e| {
                CliError::new(
                    EXIT_INTERNAL,
                    format!("cannot create {}: {e}", out_dir.display()),
                )
            })?;
            let tree_path = out_dir.join("tree.json");
            let election_path = out_dir.join("election.json");
            let election_doc =
                ElectionFile::from_election(&gadget.election, Some(WeightsField::rule(Rule::Cc)));
            write_json(
                &tree_path,
                &to_json(&TreeFile::from_model(&gadget.tree_model)),
            )?;
            write_json(&election_path, &to_json(&election_doc))?;
            Ok(json!({
                "variant": variant_name,
                "target_score": gadget.target_score.to_string(),
                "dummy_multiplier": gadget.dummy_multiplier,
                "tree": tree_path,
                "election": election_path,
            }))
        }
        // No candidates or no seats: nothing to write, but the answer is known.
        Err(HardnessError::EmptyGadget(_)) => {
            let cover_exists = match brute_force_set_cover(&instance) {
                Ok(r) => r.exists_within_budget,
                Err(HardnessError::NoCover) => false,
                Err(e) => return Err(hardness_error(e)),
            };
            let tau = match Variant::from(variant) {
                Variant::AllVertexCandidates => instance.universe_size() + instance.budget() * l,
                _ => instance.universe_size(),
            };
            Ok(json!({
                "variant": variant_name,
                "target_score": tau.to_string(),
                "dummy_multiplier": (variant == VariantArg::AllVertex).then_some(l),
                "tree": Value::Null,
                "election": Value::Null,
                "cover_exists": cover_exists,
            }))
        }
        Err(e) => Err(hardness_error(e)),
    }
}

pub fn oracle(election: &Election, weights: &WeightSystem) -> Result<Value, CliError> {
    let best = brute_force_committee(election, weights).map_err(hardness_error)?;
    Ok(json!({
        "optimum": best.optimum.to_string(),
        "maximizers": best.maximizers.iter().map(|c| c.one_based()).collect::<Vec<_>>(),
    }))
}

pub fn write_json(path: &PathBuf, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    fs::write(path, text + "\n").map_err(|e| {
        CliError::new(
            EXIT_INTERNAL,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}
