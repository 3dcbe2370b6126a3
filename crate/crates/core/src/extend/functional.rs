//! Norm-preserving extension of functionals, and the row-by-row extension
//! of operators into `ℓ∞ᴺ` built from it.

use num::{One, Zero};

use super::{norming_certificate, ExtensionProblem, ExtensionResult};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::matrix::{is_zero_vec, Mat, QVec};
use crate::rational::Rational;
use crate::spaces::{operator_norm_with, subspace_dual_norm, Caps, NormRep, PolyhedralSpace, Subspace};

/// Extends `f` (given on the subspace basis) to a functional `F` on the
/// ambient space with `F b_j = f_j` and the same dual norm.
///
/// The extension minimises the ambient dual norm by linear programming; the
/// optimum is compared against the subspace dual norm computed from the
/// subspace ball vertices, and a mismatch is reported as an internal error.
pub fn extend_functional(y: &Subspace, f: &[Rational]) -> Result<QVec> {
    let d = y.dim();
    if f.len() != d {
        return Err(Error::dims("functional on the subspace", d, f.len()));
    }
    let space = y.ambient();
    let n = space.dim();
    if is_zero_vec(f) {
        return Ok(vec![Rational::zero(); n]);
    }
    let b = y.basis();
    let (lp, embed): (LinearProgram, Box<dyn Fn(&[Rational]) -> QVec>) = match space.norm_rep() {
        // variables F (n), w (n): min Σw, ±F_i ≤ w_i
        NormRep::Linf => {
            let mut lp = LinearProgram::new(2 * n);
            for i in 0..n {
                lp.objective[n + i] = Rational::one();
                lp.set_lower(n + i, Rational::zero());
                for s in [1, -1] {
                    let mut row = vec![Rational::zero(); 2 * n];
                    row[i] = Rational::from_integer(s.into());
                    row[n + i] = -Rational::one();
                    lp.add(row, Relation::Le, Rational::zero());
                }
            }
            add_restrictions(&mut lp, b, f, |i| vec![(i, Rational::one())]);
            (lp, Box::new(move |x: &[Rational]| x[..n].to_vec()))
        }
        // variables F (n), s: min s, ±F_i ≤ s
        NormRep::L1 => {
            let mut lp = LinearProgram::new(n + 1);
            lp.objective[n] = Rational::one();
            for i in 0..n {
                for s in [1, -1] {
                    let mut row = vec![Rational::zero(); n + 1];
                    row[i] = Rational::from_integer(s.into());
                    row[n] = -Rational::one();
                    lp.add(row, Relation::Le, Rational::zero());
                }
            }
            add_restrictions(&mut lp, b, f, |i| vec![(i, Rational::one())]);
            (lp, Box::new(move |x: &[Rational]| x[..n].to_vec()))
        }
        // F = Uᵀλ; variables λ (m), w (m): min Σw, ±λ_r ≤ w_r
        NormRep::MaxAbs(u) => {
            let m = u.rows();
            let mut lp = LinearProgram::new(2 * m);
            for r in 0..m {
                lp.objective[m + r] = Rational::one();
                lp.set_lower(m + r, Rational::zero());
                for s in [1, -1] {
                    let mut row = vec![Rational::zero(); 2 * m];
                    row[r] = Rational::from_integer(s.into());
                    row[m + r] = -Rational::one();
                    lp.add(row, Relation::Le, Rational::zero());
                }
            }
            let uu = u.clone();
            add_restrictions(&mut lp, b, f, |i| (0..m).map(|r| (r, uu[(r, i)].clone())).collect());
            let ut = u.transpose();
            (lp, Box::new(move |x: &[Rational]| ut.mul_vec(&x[..m]).expect("dimensions agree")))
        }
    };
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::internal(format!("functional extension program reported {:?}", sol.status)));
    }
    let big_f = embed(&sol.primal);
    let target = subspace_dual_norm(y, f)?;
    if sol.objective_value != target {
        return Err(Error::internal(format!(
            "extended functional has dual norm {} but the subspace norm is {}",
            sol.objective_value, target
        )));
    }
    check_restriction(b, &big_f, f)?;
    let dn = space.dual_norm(&big_f)?;
    if dn != target {
        return Err(Error::internal(format!("extension dual norm {dn} differs from {target}")));
    }
    Ok(big_f)
}

/// Adds `F·b_j = f_j`, where ambient coordinate `i` of `F` is the linear
/// combination `terms(i)` of program variables.
fn add_restrictions(
    lp: &mut LinearProgram,
    b: &Mat,
    f: &[Rational],
    terms: impl Fn(usize) -> Vec<(usize, Rational)>,
) {
    let nvars = lp.num_vars();
    for (j, fj) in f.iter().enumerate() {
        let mut row = vec![Rational::zero(); nvars];
        for i in 0..b.rows() {
            if b[(i, j)].is_zero() {
                continue;
            }
            for (var, c) in terms(i) {
                row[var] += &b[(i, j)] * c;
            }
        }
        lp.add(row, Relation::Eq, fj.clone());
    }
}

fn check_restriction(b: &Mat, big_f: &[Rational], f: &[Rational]) -> Result<()> {
    let restricted = b.transpose().mul_vec(big_f)?;
    if restricted != f {
        return Err(Error::internal("extended functional does not restrict to f"));
    }
    Ok(())
}

/// Extends `T: Y → ℓ∞ᴺ` row by row: row `i` is a norm-preserving extension
/// of `δᵢ ∘ T`. The result has `‖S‖ = ‖T‖`.
pub fn coordinatewise_linf_extension(y: &Subspace, t: &Mat) -> Result<ExtensionResult> {
    coordinatewise_with(y, t, &Caps::default())
}

fn coordinatewise_with(y: &Subspace, t: &Mat, caps: &Caps) -> Result<ExtensionResult> {
    let space = y.ambient().clone();
    if !space.is_linf() {
        return Err(Error::input(format!("coordinatewise extension needs an linf ambient, got {}", space.label())));
    }
    let p = ExtensionProblem::new(space.clone(), y.clone(), t.clone())?;
    let images = p.images();
    let rows = (0..images.rows())
        .map(|i| extend_functional(y, images.row(i)))
        .collect::<Result<Vec<_>>>()?;
    let s = Mat::from_rows(rows)?;
    if !p.is_extended_by(&s) {
        return Err(Error::internal("coordinatewise extension does not extend T"));
    }
    let t_norm = p.t_norm(caps)?;
    // ‖S‖ on ℓ∞ is the largest row ℓ₁ norm; cross-check the vertex formula
    let value = operator_norm_with(&space, &space, &s, caps)?;
    let row_max = (0..s.rows())
        .map(|i| PolyhedralSpace::linf(space.dim()).dual_norm(s.row(i)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or_else(Rational::zero);
    if value != row_max || value != t_norm {
        return Err(Error::internal(format!(
            "coordinatewise extension has norm {value} (row bound {row_max}), expected {t_norm}"
        )));
    }
    let certificate = if t_norm.is_zero() {
        super::LowerBoundCertificate { items: Vec::new(), bound: Rational::zero() }
    } else {
        norming_certificate(&p, caps)?
    };
    Ok(ExtensionResult { extension: s, value, t_norm, certificate })
}

/// The coordinatewise construction for a finitely supported subspace of
/// `c₀`, truncated to `ℓ∞ᴺ`.
///
/// `basis` may have more than `n` rows as long as the rows past `n` are zero.
/// Coordinates outside the joint support vanish on `Y`, so the matching rows
/// of the extension are zero and `S` maps into the truncated copy of `c₀`.
pub fn c0_finite_demo(basis: &Mat, t: &Mat, n: usize) -> Result<ExtensionResult> {
    if n == 0 {
        return Err(Error::input("truncation dimension must be positive"));
    }
    if let Some(i) = (n..basis.rows()).find(|&i| !is_zero_vec(basis.row(i))) {
        return Err(Error::input(format!("basis is supported at coordinate {} beyond N = {n}", i + 1)));
    }
    let rows: Vec<QVec> = (0..n)
        .map(|i| if i < basis.rows() { basis.row(i).to_vec() } else { vec![Rational::zero(); basis.cols()] })
        .collect();
    let b = Mat::from_rows(rows)?;
    let y = Subspace::new(PolyhedralSpace::linf(n), b.clone())?;
    let support: Vec<usize> = (0..n).filter(|&i| !is_zero_vec(b.row(i))).collect();
    for i in (0..n).filter(|i| !support.contains(i)) {
        let delta = subspace_dual_norm(&y, b.row(i))?;
        if !delta.is_zero() {
            return Err(Error::internal(format!("coordinate {} vanishes on Y but has norm {delta}", i + 1)));
        }
    }
    let result = coordinatewise_linf_extension(&y, t)?;
    // only an operator into Y keeps the range inside the support
    if t.rows() == y.dim() {
        for i in (0..n).filter(|i| !support.contains(i)) {
            if !is_zero_vec(result.extension.row(i)) {
                return Err(Error::internal(format!("row {} outside the support is nonzero", i + 1)));
            }
        }
    }
    Ok(result)
}
