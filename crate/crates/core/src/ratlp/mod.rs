//! Exact linear programming over the rationals.
//!
//! Problems are stated in equality-plus-box form:
//!
//! ```text
//! maximize    c·x
//! subject to  a_r·x = b_r      for every row r
//!             l_j ≤ x_j ≤ u_j  for every variable j (u_j may be +∞)
//! ```
//!
//! [`solve`] runs a bounded-variable simplex method with Bland's rule and
//! returns a basic optimal solution, i.e. a vertex of the feasible polytope.

mod linalg;
mod simplex;

pub use linalg::{determinant, rank};
pub use simplex::solve;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("constraint has {len} coefficients, expected {num_vars}")]
    DimensionMismatch { len: usize, num_vars: usize },
    #[error("lower bound {lower} exceeds upper bound {upper} on variable {index}")]
    InvalidBounds {
        index: usize,
        lower: Rational,
        upper: Rational,
    },
}

/// Closed interval `[lower, upper]`; `upper == None` means unbounded above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Rational,
    pub upper: Option<Rational>,
}

impl Bounds {
    pub fn unit() -> Self {
        Bounds {
            lower: Rational::zero(),
            upper: Some(Rational::one()),
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        *v >= self.lower && self.upper.as_ref().is_none_or(|u| v <= u)
    }

    fn is_tight(&self, v: &Rational) -> bool {
        *v == self.lower || self.upper.as_ref() == Some(v)
    }
}

/// One equality row, stored sparsely. Terms have distinct indices and
/// nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.terms.iter().map(|(j, a)| a * &point[*j]).sum()
    }

    pub fn dense(&self, num_vars: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); num_vars];
        for (j, a) in &self.terms {
            row[*j] = a.clone();
        }
        row
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    bounds: Vec<Bounds>,
}

impl LpProblem {
    /// A problem with zero objective, no rows and every variable in `[0, 1]`.
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            bounds: vec![Bounds::unit(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn set_objective(&mut self, index: usize, coeff: Rational) -> Result<(), LpError> {
        self.check_index(index)?;
        self.objective[index] = coeff;
        Ok(())
    }

    pub fn set_bounds(
        &mut self,
        index: usize,
        lower: Rational,
        upper: Option<Rational>,
    ) -> Result<(), LpError> {
        self.check_index(index)?;
        if let Some(u) = &upper {
            if lower > *u {
                return Err(LpError::InvalidBounds {
                    index,
                    lower,
                    upper: u.clone(),
                });
            }
        }
        self.bounds[index] = Bounds { lower, upper };
        Ok(())
    }

    /// Adds `Σ coeff·x_index = rhs`. Repeated indices are summed.
    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        rhs: Rational,
    ) -> Result<(), LpError> {
        let mut merged: std::collections::BTreeMap<usize, Rational> = Default::default();
        for (j, a) in terms {
            self.check_index(j)?;
            *merged.entry(j).or_default() += a;
        }
        let terms = merged.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        self.constraints.push(Constraint { terms, rhs });
        Ok(())
    }

    pub fn add_dense_constraint(
        &mut self,
        coeffs: &[Rational],
        rhs: Rational,
    ) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                len: coeffs.len(),
                num_vars: self.num_vars,
            });
        }
        self.add_constraint(coeffs.iter().cloned().enumerate(), rhs)
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    fn check_index(&self, index: usize) -> Result<(), LpError> {
        if index >= self.num_vars {
            return Err(LpError::VariableOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// The optimal vertex; empty unless `status == Optimal`.
    pub point: Vec<Rational>,
    pub objective_value: Rational,
    /// Basic structural variables, ascending. Every other variable sits at a bound.
    pub basic: Vec<usize>,
    /// Nonbasic variables resting at their upper bound, ascending.
    pub at_upper: Vec<usize>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// All rows hold exactly and every coordinate respects its bounds.
pub fn check_feasible(problem: &LpProblem, point: &[Rational]) -> bool {
    point.len() == problem.num_vars
        && problem.bounds.iter().zip(point).all(|(b, v)| b.contains(v))
        && problem
            .constraints
            .iter()
            .all(|c| c.evaluate(point) == c.rhs)
}

/// `point` is feasible and its active constraints (all rows plus every tight
/// bound) have rank `num_vars`.
///
/// Tight bounds pin their coordinates, so the rank condition reduces to the
/// rows restricted to the non-tight coordinates having full column rank.
pub fn verify_vertex(problem: &LpProblem, point: &[Rational]) -> bool {
    if !check_feasible(problem, point) {
        return false;
    }
    let free: Vec<usize> = (0..problem.num_vars)
        .filter(|&j| !problem.bounds[j].is_tight(&point[j]))
        .collect();
    if free.is_empty() {
        return true;
    }
    if free.len() > problem.constraints.len() {
        return false;
    }
    let position: std::collections::HashMap<usize, usize> =
        free.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let rows: Vec<Vec<Rational>> = problem
        .constraints
        .iter()
        .map(|c| {
            let mut row = vec![Rational::zero(); free.len()];
            for (j, a) in &c.terms {
                if let Some(&p) = position.get(j) {
                    row[p] = a.clone();
                }
            }
            row
        })
        .collect();
    rank(&rows) == free.len()
}
