//! Exact rational linear programming.
//!
//! [`solve_lp`] runs a two-phase dense-tableau simplex with Bland's rule and
//! returns primal and dual vectors (or an infeasibility/unboundedness ray).
//! [`check_solution`] re-verifies any returned answer from scratch using only
//! the program data, and `solve_lp` refuses to return something that fails it.
//!
//! Sign conventions for the dual of `min c·x` subject to rows `a_i·x (≤|=|≥) b_i`
//! and bounds `l ≤ x ≤ u`: `y_i ≤ 0` on `≤` rows, `y_i ≥ 0` on `≥` rows, free on
//! equalities. With reduced costs `d = c − Aᵀy`, the dual objective is
//! `b·y + Σ_{d_j>0} d_j l_j + Σ_{d_j<0} d_j u_j`, which is finite only when the
//! bound on the needed side exists.

mod simplex;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, QVec};
use crate::rational::Rational;

pub use simplex::solve_lp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub coeffs: QVec,
    pub relation: Relation,
    #[serde(with = "crate::rational::serde_rational")]
    pub rhs: Rational,
}

/// `minimize objective·x` subject to `constraints` and per-variable bounds.
/// Variables without bounds are free.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: QVec,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// A program over `num_vars` free variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![None; num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: QVec, relation: Relation, rhs: Rational) -> usize {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn set_lower(&mut self, var: usize, value: Rational) {
        self.lower[var] = Some(value);
    }

    pub fn set_upper(&mut self, var: usize, value: Rational) {
        self.upper[var] = Some(value);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::input("bound vectors must match the number of variables"));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::dims(&format!("constraint {i}"), n, c.coeffs.len()));
            }
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    // still well-formed; reported as infeasible by the solver
                    log::debug!("variable {j} has empty bound interval");
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output.
///
/// * `Optimal`: `primal` and `dual` are an exactly verified optimal pair.
/// * `Infeasible`: `dual` is a Farkas ray (dual-feasible signs, zero objective
///   reduced costs, positive dual value); `primal` is empty.
/// * `Unbounded`: `primal` is feasible and `ray` is an improving direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub primal: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub dual: QVec,
    #[serde(with = "crate::rational::serde_rational")]
    pub objective_value: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<RayVec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayVec(#[serde(with = "crate::rational::serde_rational_vec")] pub QVec);

fn row_holds(c: &Constraint, x: &[Rational]) -> bool {
    let lhs = dot(&c.coeffs, x);
    match c.relation {
        Relation::Le => lhs <= c.rhs,
        Relation::Eq => lhs == c.rhs,
        Relation::Ge => lhs >= c.rhs,
    }
}

fn primal_feasible(p: &LinearProgram, x: &[Rational]) -> bool {
    x.len() == p.num_vars()
        && p.constraints.iter().all(|c| row_holds(c, x))
        && (0..p.num_vars()).all(|j| {
            p.lower[j].as_ref().is_none_or(|l| &x[j] >= l)
                && p.upper[j].as_ref().is_none_or(|u| &x[j] <= u)
        })
}

fn dual_signs_ok(p: &LinearProgram, y: &[Rational]) -> bool {
    y.len() == p.constraints.len()
        && p.constraints.iter().zip(y).all(|(c, yi)| match c.relation {
            Relation::Le => !yi.is_positive(),
            Relation::Ge => !yi.is_negative(),
            Relation::Eq => true,
        })
}

/// `b·y + Σ bound terms` for reduced costs `d`, or `None` if some reduced cost
/// points at a missing bound.
fn dual_value(p: &LinearProgram, y: &[Rational], d: &[Rational]) -> Option<Rational> {
    let mut value = p
        .constraints
        .iter()
        .zip(y)
        .fold(Rational::zero(), |acc, (c, yi)| acc + &c.rhs * yi);
    for (j, dj) in d.iter().enumerate() {
        if dj.is_positive() {
            value += dj * p.lower[j].as_ref()?;
        } else if dj.is_negative() {
            value += dj * p.upper[j].as_ref()?;
        }
    }
    Some(value)
}

/// `objective − Aᵀy` (or `−Aᵀy` when `with_objective` is false).
fn reduced_costs(p: &LinearProgram, y: &[Rational], with_objective: bool) -> QVec {
    let mut d: QVec = if with_objective {
        p.objective.clone()
    } else {
        vec![Rational::zero(); p.num_vars()]
    };
    for (c, yi) in p.constraints.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (dj, a) in d.iter_mut().zip(&c.coeffs) {
            if !a.is_zero() {
                *dj -= a * yi;
            }
        }
    }
    d
}

/// Independently re-verifies a solution against the program using only exact
/// arithmetic on the program data.
pub fn check_solution(p: &LinearProgram, s: &LpSolution) -> bool {
    if p.validate().is_err() {
        return false;
    }
    match s.status {
        LpStatus::Optimal => {
            if !primal_feasible(p, &s.primal) || !dual_signs_ok(p, &s.dual) {
                return false;
            }
            let d = reduced_costs(p, &s.dual, true);
            let primal_value = dot(&p.objective, &s.primal);
            match dual_value(p, &s.dual, &d) {
                Some(dv) => dv == primal_value && primal_value == s.objective_value,
                None => false,
            }
        }
        LpStatus::Infeasible => {
            if !dual_signs_ok(p, &s.dual) {
                return false;
            }
            let d = reduced_costs(p, &s.dual, false);
            matches!(dual_value(p, &s.dual, &d), Some(v) if v.is_positive())
        }
        LpStatus::Unbounded => {
            let Some(RayVec(r)) = &s.ray else { return false };
            if !primal_feasible(p, &s.primal) || r.len() != p.num_vars() {
                return false;
            }
            if !dot(&p.objective, r).is_negative() {
                return false;
            }
            let rows_ok = p.constraints.iter().all(|c| {
                let a = dot(&c.coeffs, r);
                match c.relation {
                    Relation::Le => !a.is_positive(),
                    Relation::Eq => a.is_zero(),
                    Relation::Ge => !a.is_negative(),
                }
            });
            let bounds_ok = (0..p.num_vars()).all(|j| {
                (p.lower[j].is_none() || !r[j].is_negative())
                    && (p.upper[j].is_none() || !r[j].is_positive())
            });
            rows_ok && bounds_ok
        }
    }
}

#[cfg(test)]
mod tests;
