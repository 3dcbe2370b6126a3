//! Searching for operators that cannot be extended without a norm increase,
//! plus the supporting facts: the isometric embedding of `ℓ₁ⁿ` into
//! `ℓ∞^{2ⁿ⁻¹}`, zero-padding of problems into larger `ℓ₁` spaces, and the
//! Banach–Mazur stability estimate for `ℓₚ⁴` near `ℓ₁⁴`.
//!
//! Every ratio reported here is `min ‖S‖ / ‖T‖` for one concrete `T`, so the
//! best ratio of a search is a lower bound on the extension constant of the
//! space, never an upper bound.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extend::{
    min_norm_extension_with, CertificateItem, ExtensionProblem, LowerBoundCertificate,
};
use crate::matrix::{QVec, Mat};
use crate::rational::{rat, Rational};
use crate::spaces::{subspace_operator_norm_with, Caps, PolyhedralSpace, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Grid,
    Random,
    Fixed,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// Every `d×d` matrix with entries in `{−½, 0, ½}`, row-major
    /// lexicographic order with `−½ < 0 < ½`.
    Grid,
    /// Seeded matrices with entries `p/q`, `|p| ≤ 2`, `q ∈ {1, 2}`.
    Random,
    /// The given matrices, in order.
    Fixed(Vec<Mat>),
}

impl Strategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Strategy::Grid => StrategyKind::Grid,
            Strategy::Random => StrategyKind::Random,
            Strategy::Fixed(_) => StrategyKind::Fixed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub space: String,
    pub subspace_basis: Mat,
    /// Largest `min ‖S‖ / ‖T‖` found; zero if nothing was evaluated.
    pub best_ratio: Rational,
    pub witness: Option<Mat>,
    pub candidates_evaluated: usize,
    pub strategy: StrategyKind,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub caps: Caps,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { caps: Caps::default(), parallel: true }
    }
}

/// `min ‖S‖ / ‖T‖` over extensions `S` of `T` (`d×d` in the basis of `y`).
pub fn evaluate_candidate(space: &PolyhedralSpace, y: &Subspace, t: &Mat) -> Result<Rational> {
    evaluate_candidate_with(space, y, t, &Caps::default())
}

pub fn evaluate_candidate_with(space: &PolyhedralSpace, y: &Subspace, t: &Mat, caps: &Caps) -> Result<Rational> {
    let p = ExtensionProblem::new(space.clone(), y.clone(), t.clone())?;
    let res = min_norm_extension_with(&p, caps)?;
    res.ratio().ok_or_else(|| Error::input("candidate operator is zero"))
}

pub fn se_lower_bound_search(
    space: &PolyhedralSpace,
    y: &Subspace,
    strategy: &Strategy,
    budget: usize,
    seed: u64,
) -> Result<SearchReport> {
    se_lower_bound_search_with(space, y, strategy, budget, seed, &SearchOptions::default())
}

/// Evaluates up to `budget` nonzero candidates (zero operators are skipped and
/// do not count) and keeps the largest ratio, ties going to the earliest
/// candidate. The result does not depend on `opts.parallel`.
pub fn se_lower_bound_search_with(
    space: &PolyhedralSpace,
    y: &Subspace,
    strategy: &Strategy,
    budget: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    if budget == 0 {
        return Err(Error::input("search budget must be positive"));
    }
    if y.ambient() != space {
        return Err(Error::input("subspace does not live in the given space"));
    }
    // fail on caps before generating candidates
    y.ball_vertices_with(&opts.caps)?;
    space.ball_vertices_with(&opts.caps)?;

    let d = y.dim();
    let nonzero = |t: &Mat| -> Result<bool> {
        Ok(!t.is_zero() && !subspace_operator_norm_with(y, t, space, &opts.caps)?.is_zero())
    };
    let mut candidates = Vec::new();
    match strategy {
        Strategy::Grid => {
            let entries = [rat(-1, 2), Rational::zero(), rat(1, 2)];
            let cells = d * d;
            let total = 3u128.checked_pow(cells as u32).unwrap_or(u128::MAX);
            let mut index = 0u128;
            while candidates.len() < budget && index < total {
                let mut digits = vec![Rational::zero(); cells];
                let mut r = index;
                for cell in (0..cells).rev() {
                    digits[cell] = entries[(r % 3) as usize].clone();
                    r /= 3;
                }
                let t = Mat::from_row_major(d, d, digits)?;
                if nonzero(&t)? {
                    candidates.push(t);
                }
                index += 1;
            }
        }
        Strategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut attempts = 0usize;
            while candidates.len() < budget {
                attempts += 1;
                if attempts > budget.saturating_mul(100) {
                    return Err(Error::internal("random strategy keeps drawing zero operators"));
                }
                let data = (0..d * d).map(|_| rat(rng.gen_range(-2..=2), rng.gen_range(1..=2))).collect();
                let t = Mat::from_row_major(d, d, data)?;
                if nonzero(&t)? {
                    candidates.push(t);
                }
            }
        }
        Strategy::Fixed(list) => {
            for t in list {
                if t.rows() != d || t.cols() != d {
                    return Err(Error::input(format!("fixed candidate must be {d}x{d}")));
                }
                if candidates.len() < budget && nonzero(t)? {
                    candidates.push(t.clone());
                }
            }
        }
    }

    let eval = |t: &Mat| evaluate_candidate_with(space, y, t, &opts.caps);
    let ratios: Vec<Rational> = if opts.parallel {
        candidates.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        candidates.iter().map(eval).collect::<Result<_>>()?
    };
    let mut best: Option<(usize, &Rational)> = None;
    for (i, r) in ratios.iter().enumerate() {
        if best.is_none_or(|(_, b)| r > b) {
            best = Some((i, r));
        }
    }
    log::info!("searched {} candidates on {}", candidates.len(), space.label());
    Ok(SearchReport {
        space: space.label(),
        subspace_basis: y.basis().clone(),
        best_ratio: best.map(|(_, r)| r.clone()).unwrap_or_else(Rational::zero),
        witness: best.map(|(i, _)| candidates[i].clone()),
        candidates_evaluated: candidates.len(),
        strategy: strategy.kind(),
        seed,
    })
}

/// The `2ⁿ⁻¹ × n` matrix with rows `(ε₁, …, ε_{n−1}, 1)`; row `k` has
/// `εᵢ = −1` exactly where bit `n−2−i` of `k` is set, so the rows run from
/// `(1, …, 1)` to `(−1, …, −1, 1)`. `x ↦ E x` is an isometry `ℓ₁ⁿ → ℓ∞`.
pub fn l1_to_linf_embedding(n: usize) -> Result<Mat> {
    if !(2..=12).contains(&n) {
        return Err(Error::input(format!("embedding dimension {n} outside 2..=12")));
    }
    let rows = (0..1usize << (n - 1))
        .map(|k| {
            let mut row: QVec = (0..n - 1)
                .map(|i| if k >> (n - 2 - i) & 1 == 1 { -Rational::one() } else { Rational::one() })
                .collect();
            row.push(Rational::one());
            row
        })
        .collect();
    Mat::from_rows(rows)
}

/// The same problem inside `ℓ₁ᴺ`, through `x ↦ (x, 0)`.
pub fn heredity_lift(p: &ExtensionProblem, target: usize) -> Result<ExtensionProblem> {
    let n = p.space().dim();
    if !p.space().is_l1() {
        return Err(Error::input("lifting is defined for l1 spaces"));
    }
    if target < n {
        return Err(Error::input(format!("cannot lift l1:{n} into l1:{target}")));
    }
    let basis = p.subspace().basis();
    let space = PolyhedralSpace::l1(target);
    let y = Subspace::new(space.clone(), basis.pad(target, basis.cols()))?;
    let op = p.op();
    let op = if op.rows() == basis.cols() { op.clone() } else { op.pad(target, op.cols()) };
    ExtensionProblem::new(space, y, op)
}

/// Zero-pads every vertex and functional of a certificate to dimension `target`.
pub fn lift_certificate(c: &LowerBoundCertificate, target: usize) -> LowerBoundCertificate {
    let pad = |v: &QVec| {
        let mut out = v.clone();
        out.resize(target.max(v.len()), Rational::zero());
        out
    };
    LowerBoundCertificate {
        items: c
            .items
            .iter()
            .map(|it| CertificateItem { vertex: pad(&it.vertex), functional: pad(&it.functional), weight: it.weight.clone() })
            .collect(),
        bound: c.bound.clone(),
    }
}

/// Banach–Mazur distance `d(ℓ₁⁴, ℓₚ⁴) = 4^{1−1/p}` for `1 ≤ p ≤ 2`.
pub fn bm_l1_lp(p: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::input(format!("p = {p} outside [1, 2]")));
    }
    Ok(4f64.powf(1.0 - 1.0 / p))
}

/// The `p` at which `bm_l1_lp(p)² = 5/4`: `1 / (1 − log₄(√5/2))`.
pub fn particr4_threshold() -> f64 {
    1.0 / (1.0 - (5f64.sqrt() / 2.0).ln() / 4f64.ln())
}

/// `se(X) ≤ se(Y)·d(X, Y)²`.
pub fn stability_bound(se_known: f64, d: f64) -> Result<f64> {
    if !(se_known >= 1.0 && d >= 1.0) || !se_known.is_finite() || !d.is_finite() {
        return Err(Error::input(format!("need se >= 1 and d >= 1, got se = {se_known}, d = {d}")));
    }
    Ok(se_known * d * d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityFacts {
    pub d: f64,
    pub bound: f64,
}

pub fn stability_facts(se_known: f64, d: f64) -> Result<StabilityFacts> {
    Ok(StabilityFacts { d, bound: stability_bound(se_known, d)? })
}
