//! Polyhedral Lyapunov functions `V(x) = ‖W x‖` for `x ↦ F x`.
//!
//! `V` decreases by the factor `‖F‖` induced on `span(W)`. A matrix `Q` with
//! `Q W = W F` and `‖Q‖ < 1` exists exactly when some extension of that
//! induced map has norm below one, so the smallest such `‖Q‖` is a
//! minimal-norm extension value.

use num::One;

use super::{min_norm_extension_with, ExtensionProblem, ExtensionResult};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::rational::Rational;
use crate::spaces::{subspace_operator_norm_with, Caps, PolyhedralSpace, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovInstance {
    pub w: Mat,
    pub f: Mat,
    pub norm: PolyhedralSpace,
}

impl LyapunovInstance {
    pub fn new(w: Mat, f: Mat, norm: PolyhedralSpace) -> Result<Self> {
        let inst = LyapunovInstance { w, f, norm };
        inst.subspace()?;
        if inst.f.rows() != inst.w.cols() || inst.f.cols() != inst.w.cols() {
            return Err(Error::input(format!("F must be {0}x{0}", inst.w.cols())));
        }
        Ok(inst)
    }

    fn subspace(&self) -> Result<Subspace> {
        if self.w.rows() != self.norm.dim() {
            return Err(Error::dims("rows of W", self.norm.dim(), self.w.rows()));
        }
        Subspace::new(self.norm.clone(), self.w.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovReport {
    pub q: Mat,
    pub q_norm: Rational,
    pub decays: bool,
    pub induced_norm: Rational,
}

/// Smallest `‖Q‖` with `Q W = W F`, the induced decay factor of `‖W x‖`, and
/// the full extension result behind `Q`.
pub fn lyapunov_certificate(inst: &LyapunovInstance, caps: &Caps) -> Result<(LyapunovReport, ExtensionResult)> {
    let y = inst.subspace()?;
    let problem = ExtensionProblem::new(inst.norm.clone(), y.clone(), inst.f.clone())?;
    let result = min_norm_extension_with(&problem, caps)?;
    let q = result.extension.clone();
    if q.mul(&inst.w)? != inst.w.mul(&inst.f)? {
        return Err(Error::internal("Q W differs from W F"));
    }
    let induced_norm = subspace_operator_norm_with(&y, &inst.f, &inst.norm, caps)?;
    if result.value < induced_norm {
        return Err(Error::internal("extension norm below the induced norm"));
    }
    let report = LyapunovReport {
        q,
        decays: result.value < Rational::one(),
        q_norm: result.value.clone(),
        induced_norm,
    };
    Ok((report, result))
}
