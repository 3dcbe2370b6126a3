//! Minimal-norm extension of an operator from a subspace to the whole space.
//!
//! Every extension `S` of `T: Y → X` is fixed on `Y` and free on a complement.
//! With `M = [B | C]` (subspace basis, then greedily chosen coordinate
//! vectors) and unknown complement images `Z`, `S = [T B | Z] M⁻¹`, so `S v`
//! is affine in `Z` for each ball vertex `v`. Minimising `t` subject to
//! `‖S v‖ ≤ t` over the (half) vertex set is a linear program whose dual
//! multipliers, grouped by vertex, form a [`LowerBoundCertificate`]: weighted
//! norming functionals whose combination no longer depends on `Z`.

mod functional;
mod hilbert;
mod lyapunov;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::matrix::{dot, rank, unit, vec_scale, Mat, QVec};
use crate::rational::Rational;
use crate::spaces::{operator_norm_with, subspace_operator_norm_with, Caps, NormRep, PolyhedralSpace, Subspace};

pub use functional::{c0_finite_demo, coordinatewise_linf_extension, extend_functional};
pub use hilbert::{hilbert_extension, spectral_norm};
pub use lyapunov::{lyapunov_certificate, LyapunovInstance, LyapunovReport};

/// `T` on `Y ⊂ X`, to be extended to all of `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionProblem {
    space: PolyhedralSpace,
    subspace: Subspace,
    op: Mat,
    images: Mat,
}

impl ExtensionProblem {
    /// `op` is `d×d` in the subspace basis (so `T: Y → Y`), or `n×d` holding
    /// the ambient images of the basis vectors (`T: Y → X`).
    pub fn new(space: PolyhedralSpace, subspace: Subspace, op: Mat) -> Result<Self> {
        if subspace.ambient() != &space {
            return Err(Error::input("subspace does not live in the given space"));
        }
        let images = subspace.images(&op, space.dim())?;
        Ok(ExtensionProblem { space, subspace, op, images })
    }

    pub fn space(&self) -> &PolyhedralSpace {
        &self.space
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn op(&self) -> &Mat {
        &self.op
    }

    /// Ambient images `T b_j` of the basis vectors, as columns.
    pub fn images(&self) -> &Mat {
        &self.images
    }

    /// Whether `s` agrees with `T` on `Y`.
    pub fn is_extended_by(&self, s: &Mat) -> bool {
        s.mul(self.subspace.basis()).map(|sb| sb == self.images).unwrap_or(false)
    }

    pub fn t_norm(&self, caps: &Caps) -> Result<Rational> {
        subspace_operator_norm_with(&self.subspace, &self.op, &self.space, caps)
    }
}

/// One weighted inequality `t ≥ ‖S v‖ ≥ functional·(S v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateItem {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub vertex: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub functional: QVec,
    #[serde(with = "crate::rational::serde_rational")]
    pub weight: Rational,
}

/// Weighted (vertex, functional) pairs whose sum is the same for every
/// extension, forcing `‖S‖ ≥ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub items: Vec<CertificateItem>,
    #[serde(with = "crate::rational::serde_rational")]
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionResult {
    pub extension: Mat,
    pub value: Rational,
    pub t_norm: Rational,
    pub certificate: LowerBoundCertificate,
}

impl ExtensionResult {
    /// `value / ‖T‖`; `None` for the zero operator.
    pub fn ratio(&self) -> Option<Rational> {
        (!self.t_norm.is_zero()).then(|| &self.value / &self.t_norm)
    }
}

/// The affine dependence of `S v` on the free complement images.
struct Parametrization {
    n: usize,
    /// Number of complement directions `k = n − d`.
    k: usize,
    m_inv: Mat,
    d: usize,
    images: Mat,
}

impl Parametrization {
    fn new(p: &ExtensionProblem) -> Result<Self> {
        let b = p.subspace.basis();
        let n = b.rows();
        let d = b.cols();
        let mut full = b.clone();
        let mut r = d;
        for i in 0..n {
            if r == n {
                break;
            }
            let candidate = full.hstack(&Mat::from_cols(vec![unit(n, i)])?)?;
            if rank(&candidate) > r {
                full = candidate;
                r += 1;
            }
        }
        Ok(Parametrization { n, k: n - d, m_inv: full.inverse()?, d, images: p.images.clone() })
    }

    /// `(T B a_Y, a_C)` for `v = B a_Y + C a_C`.
    fn split(&self, v: &[Rational]) -> Result<(QVec, QVec)> {
        let a = self.m_inv.mul_vec(v)?;
        let fixed = self.images.mul_vec(&a[..self.d])?;
        Ok((fixed, a[self.d..].to_vec()))
    }

    fn unknown(&self, i: usize, j: usize) -> usize {
        i * self.k + j
    }

    fn num_unknowns(&self) -> usize {
        self.n * self.k
    }

    fn assemble(&self, z: &[Rational]) -> Result<Mat> {
        let mut cols = self.images.to_cols();
        for j in 0..self.k {
            cols.push((0..self.n).map(|i| z[self.unknown(i, j)].clone()).collect());
        }
        Mat::from_cols(cols)?.mul(&self.m_inv)
    }
}

/// Row bookkeeping for certificate extraction: row `r` reads
/// `η·(S v_k) − (aux) − τ t ≤ 0`.
struct RowTag {
    vertex: usize,
    eta: Option<QVec>,
    tau: Rational,
}

pub fn min_norm_extension(p: &ExtensionProblem) -> Result<ExtensionResult> {
    min_norm_extension_with(p, &Caps::default())
}

/// Solves `min { ‖S‖ : S|_Y = T }` exactly and returns a witness, the optimum,
/// and a certificate that re-verifies to the same optimum.
pub fn min_norm_extension_with(p: &ExtensionProblem, caps: &Caps) -> Result<ExtensionResult> {
    let space = &p.space;
    let n = space.dim();
    let param = Parametrization::new(p)?;
    let t_norm = p.t_norm(caps)?;
    let vertices: Vec<QVec> = space.ball_vertices_with(caps)?.half().cloned().collect();

    let splits: Vec<(QVec, QVec)> = vertices.iter().map(|v| param.split(v)).collect::<Result<_>>()?;

    // Variables: t, the unknowns Z, and for ℓ₁ one w per vertex coordinate
    // bounding |(S v)_i|. All are free and measured from the point Z = 0,
    // t = t₀ = max ‖T B a_Y‖, w_i = |fixed_i|, where every row holds, so the
    // simplex starts feasible. Translation leaves the duals unchanged.
    let nz = param.num_unknowns();
    let aux_per_vertex = if space.is_l1() { n } else { 0 };
    let nvars = 1 + nz + aux_per_vertex * vertices.len();
    let mut lp = LinearProgram::new(nvars);
    lp.objective[0] = Rational::one();
    let t0 = splits.iter().map(|(fixed, _)| space.norm_unchecked(fixed)).max().unwrap_or_else(Rational::zero);

    let mut tags = Vec::new();
    // η·(S v) + Σ coef·w − τ t ≤ 0, i.e. after translation
    // η·(Z a_C) + Σ coef·w' − τ t' ≤ −η·fixed − Σ coef·offset + τ t₀
    let mut push_row = |lp: &mut LinearProgram, k: usize, eta: Option<&QVec>, aux: &[(usize, i64, Rational)], tau: i64| {
        let (fixed, a_c) = &splits[k];
        let mut row = vec![Rational::zero(); nvars];
        let mut rhs = Rational::from_integer(tau.into()) * &t0;
        if let Some(eta) = eta {
            for i in 0..n {
                if eta[i].is_zero() {
                    continue;
                }
                for (j, aj) in a_c.iter().enumerate() {
                    if !aj.is_zero() {
                        row[1 + param.unknown(i, j)] += &eta[i] * aj;
                    }
                }
            }
            rhs -= dot(eta, fixed);
        }
        for (col, coef, offset) in aux {
            let c = Rational::from_integer((*coef).into());
            rhs -= &c * offset;
            row[*col] = c;
        }
        row[0] = Rational::from_integer((-tau).into());
        lp.add(row, Relation::Le, rhs);
        tags.push(RowTag { vertex: k, eta: eta.cloned(), tau: Rational::from_integer(tau.into()) });
    };

    for k in 0..vertices.len() {
        match space.norm_rep() {
            NormRep::Linf => {
                for i in 0..n {
                    for s in [1, -1] {
                        let eta = vec_scale(&unit(n, i), &Rational::from_integer(s.into()));
                        push_row(&mut lp, k, Some(&eta), &[], 1);
                    }
                }
            }
            NormRep::MaxAbs(u) => {
                for r in 0..u.rows() {
                    for s in [1, -1] {
                        let eta = vec_scale(u.row(r), &Rational::from_integer(s.into()));
                        push_row(&mut lp, k, Some(&eta), &[], 1);
                    }
                }
            }
            NormRep::L1 => {
                let aux0 = 1 + nz + k * n;
                let offsets: Vec<Rational> = splits[k].0.iter().map(Signed::abs).collect();
                for i in 0..n {
                    for s in [1, -1] {
                        let eta = vec_scale(&unit(n, i), &Rational::from_integer(s.into()));
                        push_row(&mut lp, k, Some(&eta), &[(aux0 + i, -1, offsets[i].clone())], 0);
                    }
                }
                // Σ w − t ≤ 0
                let sum: Vec<(usize, i64, Rational)> = (0..n).map(|i| (aux0 + i, 1, offsets[i].clone())).collect();
                push_row(&mut lp, k, None, &sum, 1);
            }
        }
    }

    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::internal(format!("extension program reported {:?}", sol.status)));
    }
    let value = &sol.objective_value + &t0;
    let extension = param.assemble(&sol.primal[1..1 + nz])?;
    if !p.is_extended_by(&extension) {
        return Err(Error::internal("LP witness does not extend T"));
    }
    let achieved = operator_norm_with(space, space, &extension, caps)?;
    if achieved != value {
        return Err(Error::internal(format!(
            "LP witness has norm {} but the program reported {}",
            achieved, value
        )));
    }

    // Group multipliers λ = −y ≥ 0 by vertex.
    let mut weights = vec![Rational::zero(); vertices.len()];
    let mut combos = vec![vec![Rational::zero(); n]; vertices.len()];
    for (tag, y) in tags.iter().zip(&sol.dual) {
        let lambda = -y;
        if lambda.is_zero() {
            continue;
        }
        weights[tag.vertex] += &lambda * &tag.tau;
        if let Some(eta) = &tag.eta {
            for (c, e) in combos[tag.vertex].iter_mut().zip(eta) {
                *c += &lambda * e;
            }
        }
    }
    let mut items = Vec::new();
    for (k, w) in weights.into_iter().enumerate() {
        if w.is_positive() {
            let functional = vec_scale(&combos[k], &(Rational::one() / &w));
            items.push(CertificateItem { vertex: vertices[k].clone(), functional, weight: w });
        }
    }
    normalise_weights(&mut items);
    let mut certificate = LowerBoundCertificate { items, bound: Rational::zero() };
    certificate.bound = verify_certificate(&certificate, p)?;
    if certificate.bound != value {
        return Err(Error::internal(format!(
            "dual certificate proves {} but the optimum is {}",
            certificate.bound, value
        )));
    }
    log::debug!(
        "min_norm_extension on {}: value {} with {} certificate items",
        space.label(),
        value,
        certificate.items.len()
    );
    Ok(ExtensionResult { extension, value, t_norm, certificate })
}

/// Rescales weights to coprime integers; the implied bound is unchanged.
fn normalise_weights(items: &mut [CertificateItem]) {
    if items.is_empty() {
        return;
    }
    let l = items.iter().fold(BigInt::one(), |acc, it| acc.lcm(it.weight.denom()));
    let scaled: Vec<BigInt> = items.iter().map(|it| it.weight.numer() * (&l / it.weight.denom())).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    for (it, s) in items.iter_mut().zip(scaled) {
        it.weight = Rational::from_integer(s / &g);
    }
}

/// Re-derives the bound a certificate proves for `p`, using only exact
/// arithmetic: every vertex must lie in the unit ball, every functional must
/// have dual norm at most one, and the weighted functionals must cancel every
/// free unknown of the extension.
pub fn verify_certificate(c: &LowerBoundCertificate, p: &ExtensionProblem) -> Result<Rational> {
    let space = &p.space;
    let n = space.dim();
    let param = Parametrization::new(p)?;
    let mut constant = Rational::zero();
    let mut coeffs = vec![Rational::zero(); param.num_unknowns()];
    let mut total = Rational::zero();
    for (idx, item) in c.items.iter().enumerate() {
        if item.vertex.len() != n || item.functional.len() != n {
            return Err(Error::input(format!("certificate item {idx} has the wrong dimension")));
        }
        if item.weight.is_negative() {
            return Err(Error::input(format!("certificate item {idx} has a negative weight")));
        }
        if space.norm(&item.vertex)? > Rational::one() {
            return Err(Error::input(format!("certificate item {idx}: vertex lies outside the unit ball")));
        }
        let dn = space.dual_norm(&item.functional)?;
        if dn > Rational::one() {
            return Err(Error::DualNormViolation { item: idx, dual_norm: crate::rational::format_rational(&dn) });
        }
        if item.weight.is_zero() {
            continue;
        }
        let (fixed, a_c) = param.split(&item.vertex)?;
        constant += &item.weight * dot(&item.functional, &fixed);
        for i in 0..n {
            let gi = &item.functional[i];
            if gi.is_zero() {
                continue;
            }
            for (j, aj) in a_c.iter().enumerate() {
                if !aj.is_zero() {
                    coeffs[param.unknown(i, j)] += &item.weight * gi * aj;
                }
            }
        }
        total += &item.weight;
    }
    if let Some((index, coef)) = coeffs.iter().enumerate().find(|(_, x)| !x.is_zero()) {
        return Err(Error::CancellationFailure { index, coefficient: crate::rational::format_rational(coef) });
    }
    if total.is_zero() {
        return Err(Error::input("certificate has no positive weight"));
    }
    Ok(constant / total)
}

/// Certificate for the trivial bound `‖S‖ ≥ ‖T‖`: a subspace ball vertex where
/// `T` attains its norm, paired with a functional norming its image.
pub fn norming_certificate(p: &ExtensionProblem, caps: &Caps) -> Result<LowerBoundCertificate> {
    let space = &p.space;
    let verts = p.subspace.ball_vertices_with(caps)?;
    let mut best: Option<(QVec, QVec, Rational)> = None;
    for v in verts.half() {
        let img = p.images.mul_vec(&p.subspace.coords(v)?)?;
        let nv = space.norm(&img)?;
        if best.as_ref().is_none_or(|b| nv > b.2) {
            best = Some((v.clone(), img, nv));
        }
    }
    let (vertex, img, bound) = best.ok_or_else(|| Error::internal("subspace ball has no vertices"))?;
    let functional = norming_functional(space, &img);
    let certificate = LowerBoundCertificate {
        items: vec![CertificateItem { vertex, functional, weight: Rational::one() }],
        bound,
    };
    let verified = verify_certificate(&certificate, p)?;
    if verified != certificate.bound {
        return Err(Error::internal("norming certificate does not reproduce ‖T‖"));
    }
    Ok(certificate)
}

/// A functional `g` with dual norm ≤ 1 and `g·y = ‖y‖`.
pub fn norming_functional(space: &PolyhedralSpace, y: &[Rational]) -> QVec {
    let n = space.dim();
    match space.norm_rep() {
        NormRep::L1 => y.iter().map(|v| Rational::from_integer(v.signum().to_integer())).collect(),
        NormRep::Linf => {
            let mut g = vec![Rational::zero(); n];
            if let Some((i, v)) = y.iter().enumerate().max_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(b.0.cmp(&a.0))) {
                if !v.is_zero() {
                    g[i] = Rational::from_integer(v.signum().to_integer());
                }
            }
            g
        }
        NormRep::MaxAbs(u) => {
            let mut best = (Rational::zero(), vec![Rational::zero(); n]);
            for r in 0..u.rows() {
                let val = dot(u.row(r), y);
                if val.abs() > best.0 {
                    let s = Rational::from_integer(val.signum().to_integer());
                    best = (val.abs(), vec_scale(u.row(r), &s));
                }
            }
            best.1
        }
    }
}

#[cfg(test)]
mod tests;
