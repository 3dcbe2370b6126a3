//! Explicit norm-one extensions for hyperplanes of `ℓ₁³`.
//!
//! With `p` a coordinate whose unit vector is not in `Y = ker f`, every other
//! coordinate `k` gives `b_k = r_k e_p − e_k ∈ Y`. An extension is fixed by
//! `w = S e_p`, since then `S e_k = r_k w − T b_k`. The case analysis below
//! picks `w` so that `‖S e_k‖ = |r_k| ‖w − T b_k / r_k‖ ≤ 1` for each `k`:
//! a point within prescribed ℓ₁ distances of three centres, found through a
//! coordinatewise median.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extend::{norming_certificate, ExtensionProblem, ExtensionResult};
use crate::matrix::{unit, vec_scale, vec_sub, Mat, QVec};
use crate::rational::Rational;
use crate::spaces::{operator_norm_with, Caps, PolyhedralSpace, Subspace};

/// Pivot and ratios for a hyperplane `ker f` of `ℝ³`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneParams {
    /// First coordinate (0-based) where `f` is nonzero.
    pub pivot: usize,
    /// `f_k / f_pivot` for the two remaining coordinates, ascending.
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub r: QVec,
    /// Coordinates in processing order: pivot first, then the other two.
    pub permutation: [usize; 3],
}

impl HyperplaneParams {
    /// `b_k = r_k e_p − e_k` as the columns of a `3×2` matrix.
    pub fn basis(&self) -> Mat {
        let cols = (0..2)
            .map(|k| {
                let mut b = vec_scale(&unit(3, self.pivot), &self.r[k]);
                b[self.permutation[k + 1]] = -Rational::one();
                b
            })
            .collect();
        Mat::from_cols(cols).expect("two columns of length three")
    }
}

pub fn hyperplane_params(f: &[Rational]) -> Result<HyperplaneParams> {
    if f.len() != 3 {
        return Err(Error::dims("hyperplane functional", 3, f.len()));
    }
    let pivot = f.iter().position(|x| !x.is_zero()).ok_or_else(|| Error::input("functional is zero"))?;
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let r = others.iter().map(|&k| &f[k] / &f[pivot]).collect();
    Ok(HyperplaneParams { pivot, r, permutation: [pivot, others[0], others[1]] })
}

/// Coordinatewise: `0` where `αᵢ` lies between `βᵢ` and `γᵢ`, otherwise the
/// signed distance from `αᵢ` to the nearer of the two.
pub fn median_z(alpha: &[Rational], beta: &[Rational], gamma: &[Rational]) -> QVec {
    alpha
        .iter()
        .zip(beta.iter().zip(gamma))
        .map(|(a, (b, c))| {
            if !((a - b) * (a - c)).is_positive() {
                Rational::zero()
            } else if a > b && a > c {
                a - b.max(c)
            } else {
                a - b.min(c)
            }
        })
        .collect()
}

/// The three-centre construction, recorded for auditing. All fields are
/// after relabelling: slot `i` (`alpha`, `beta`, `gamma` for `i = 0, 1, 2`,
/// and entry `i` of `mu`, `s`) holds the role `relabel[i]`, where role 0 is
/// the first non-pivot coordinate, role 1 the second and role 2 the pivot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct R3Trace {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub alpha: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub beta: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub gamma: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub mu: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub s: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub z: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub u: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub v: QVec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub w: QVec,
    pub relabel: [usize; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum R3Case {
    ZeroOperator,
    /// `Y` contains both non-pivot unit vectors.
    BothRatiosZero,
    /// Exactly one ratio vanishes.
    OneRatioZero,
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct R3Outcome {
    pub result: ExtensionResult,
    pub params: HyperplaneParams,
    pub case: R3Case,
    pub trace: Option<R3Trace>,
}

fn l1(x: &[Rational]) -> Rational {
    x.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::internal(format!("ℓ₁³ construction: {what}")))
    }
}

/// Norm-preserving extension of `T: Y → Y` (`2×2` in the basis of
/// [`HyperplaneParams::basis`], or `3×2` ambient images) to all of `ℓ₁³`.
pub fn r3_extend(f: &[Rational], t: &Mat) -> Result<ExtensionResult> {
    Ok(r3_extend_traced(f, t)?.result)
}

pub fn r3_extend_traced(f: &[Rational], t: &Mat) -> Result<R3Outcome> {
    let params = hyperplane_params(f)?;
    let x = PolyhedralSpace::l1(3);
    let y = Subspace::new(x.clone(), params.basis())?;
    let problem = ExtensionProblem::new(x.clone(), y, t.clone())?;
    let caps = Caps::default();
    let t_norm = problem.t_norm(&caps)?;
    if t_norm.is_zero() {
        let certificate = crate::extend::LowerBoundCertificate { items: Vec::new(), bound: Rational::zero() };
        let result = ExtensionResult { extension: Mat::zeros(3, 3), value: t_norm.clone(), t_norm, certificate };
        return Ok(R3Outcome { result, params, case: R3Case::ZeroOperator, trace: None });
    }
    // work with T / ‖T‖
    let inv = Rational::one() / &t_norm;
    let tb: Vec<QVec> = problem.images().to_cols().iter().map(|c| vec_scale(c, &inv)).collect();
    let r = &params.r;

    let (w, case, trace) = match (r[0].is_zero(), r[1].is_zero()) {
        (true, true) => (vec![Rational::zero(); 3], R3Case::BothRatiosZero, None),
        (zero0, zero1) if zero0 != zero1 => {
            let k = if zero0 { 1 } else { 0 };
            let beta = vec_scale(&tb[k], &(Rational::one() / &r[k]));
            let a = r[k].abs();
            let w = vec_scale(&beta, &(&a / (Rational::one() + &a)));
            (w, R3Case::OneRatioZero, None)
        }
        _ => {
            let alpha = vec_scale(&tb[0], &(Rational::one() / &r[0]));
            let beta = vec_scale(&tb[1], &(Rational::one() / &r[1]));
            let trace = three_centres(alpha, beta, r)?;
            (trace.w.clone(), R3Case::Generic, Some(trace))
        }
    };

    // S e_p = w, S e_k = r_k w − T b_k, then undo the scaling
    let mut cols = vec![QVec::new(); 3];
    cols[params.pivot] = w.clone();
    for k in 0..2 {
        let col = vec_sub(&vec_scale(&w, &r[k]), &tb[k]);
        ensure(l1(&col) <= Rational::one(), "an image of a unit vector exceeds norm one")?;
        cols[params.permutation[k + 1]] = col;
    }
    ensure(l1(&w) <= Rational::one(), "the pivot image exceeds norm one")?;
    let extension = Mat::from_cols(cols)?.scale(&t_norm);

    ensure(problem.is_extended_by(&extension), "the result does not extend T")?;
    let value = operator_norm_with(&x, &x, &extension, &caps)?;
    ensure(value == t_norm, "the extension norm differs from ‖T‖")?;
    let certificate = norming_certificate(&problem, &caps)?;
    let result = ExtensionResult { extension, value, t_norm, certificate };
    Ok(R3Outcome { result, params, case, trace })
}

/// The generic case: centres `α`, `β`, `γ = 0` with radii `1/|r₂|`,
/// `1/|r₃|`, `1`; returns a point within each radius of its centre.
fn three_centres(alpha: QVec, beta: QVec, r: &[Rational]) -> Result<R3Trace> {
    let gamma = vec![Rational::zero(); 3];
    let centres = [alpha, beta, gamma];
    let mu = [Rational::one() / r[0].abs(), Rational::one() / r[1].abs(), Rational::one()];
    let d01 = l1(&vec_sub(&centres[0], &centres[1]));
    let d02 = l1(&vec_sub(&centres[0], &centres[2]));
    let d12 = l1(&vec_sub(&centres[1], &centres[2]));
    // slack s_i belongs to the pair not involving role i
    let s = [&mu[1] + &mu[2] - &d12, &mu[0] + &mu[2] - &d02, &mu[0] + &mu[1] - &d01];
    ensure(s.iter().all(|x| !x.is_negative()), "a slack is negative, so ‖T‖ > 1")?;

    let mut relabel = [0usize, 1, 2];
    relabel.sort_by(|&i, &j| s[j].cmp(&s[i]));
    let [a, b, c] = relabel.map(|i| centres[i].clone());
    let [m2, m3, m4] = relabel.map(|i| mu[i].clone());
    let [s2, s3, s4] = relabel.map(|i| s[i].clone());
    ensure(s2 >= s3 && s3 >= s4, "relabelling did not sort the slacks")?;

    let ab = l1(&vec_sub(&a, &b));
    let ac = l1(&vec_sub(&a, &c));
    let bc = l1(&vec_sub(&b, &c));
    ensure(ab == &m2 + &m3 - &s4, "‖α−β‖ = μ₂+μ₃−s₄")?;
    ensure(ac == &m2 + &m4 - &s3, "‖α−γ‖ = μ₂+μ₄−s₃")?;
    ensure(bc == &m3 + &m4 - &s2, "‖β−γ‖ = μ₃+μ₄−s₂")?;

    let z = median_z(&a, &b, &c);
    let u = vec_sub(&vec_sub(&a, &b), &z);
    let v = vec_sub(&vec_sub(&a, &c), &z);
    let half = Rational::new(1.into(), 2.into());
    let (nz, nu, nv) = (l1(&z), l1(&u), l1(&v));
    ensure(nz == &half * (&ab + &ac - &bc), "‖z‖ = ½(‖α−β‖+‖α−γ‖−‖β−γ‖)")?;
    ensure(nu == &half * (&ab + &bc - &ac), "‖u‖ = ½(‖α−β‖+‖β−γ‖−‖α−γ‖)")?;
    ensure(nv == &half * (&ac + &bc - &ab), "‖v‖ = ½(‖α−γ‖+‖β−γ‖−‖α−β‖)")?;
    ensure(nz == &m2 + &half * (&s2 - &s3 - &s4), "‖z‖ = μ₂+½(s₂−s₃−s₄)")?;
    ensure(nu == &m3 + &half * (&s3 - &s2 - &s4), "‖u‖ = μ₃+½(s₃−s₂−s₄)")?;
    ensure(nv == &m4 + &half * (&s4 - &s2 - &s3), "‖v‖ = μ₄+½(s₄−s₂−s₃)")?;

    let w = if nz.is_zero() {
        a.clone()
    } else {
        let step = (&m2 / &nz).min(Rational::one());
        vec_sub(&a, &vec_scale(&z, &step))
    };
    ensure(l1(&vec_sub(&w, &a)) <= m2, "‖w−α‖ ≤ μ₂")?;
    ensure(l1(&vec_sub(&w, &b)) <= m3, "‖w−β‖ ≤ μ₃")?;
    ensure(l1(&vec_sub(&w, &c)) <= m4, "‖w−γ‖ ≤ μ₄")?;

    Ok(R3Trace {
        alpha: a,
        beta: b,
        gamma: c,
        mu: vec![m2, m3, m4],
        s: vec![s2, s3, s4],
        z,
        u,
        v,
        w,
        relabel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::min_norm_extension;
    use crate::rational::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> QVec {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn params_examples() {
        let p = hyperplane_params(&v(&[1, 1, 1])).unwrap();
        assert_eq!((p.pivot, p.r.clone()), (0, v(&[1, 1])));
        let p = hyperplane_params(&v(&[0, 0, 1])).unwrap();
        assert_eq!((p.pivot, p.r.clone(), p.permutation), (2, v(&[0, 0]), [2, 0, 1]));
        let p = hyperplane_params(&v(&[2, -1, 0])).unwrap();
        assert_eq!(p.r, vec![rat(-1, 2), int(0)]);
        assert!(hyperplane_params(&v(&[0, 0, 0])).is_err());
        // every basis vector lies in ker f
        let f = v(&[3, 0, -2]);
        let b = hyperplane_params(&f).unwrap().basis();
        for col in b.to_cols() {
            assert!(crate::matrix::dot(&f, &col).is_zero());
        }
    }

    #[test]
    fn median_examples() {
        assert_eq!(median_z(&v(&[1, -1, 0]), &v(&[1, 0, -1]), &v(&[0, 0, 0])), v(&[0, -1, 0]));
        let a = v(&[3, -2, 5]);
        assert_eq!(median_z(&a, &a, &a), v(&[0, 0, 0]));
        assert_eq!(median_z(&v(&[2, 0, 0]), &v(&[0, 0, 0]), &v(&[0, 0, 0])), v(&[2, 0, 0]));
    }

    #[test]
    fn identity_on_sum_zero_plane() {
        let out = r3_extend_traced(&v(&[1, 1, 1]), &Mat::identity(2)).unwrap();
        let trace = out.trace.unwrap();
        assert_eq!(trace.alpha, v(&[1, -1, 0]));
        assert_eq!(trace.beta, v(&[1, 0, -1]));
        assert_eq!(trace.s, v(&[0, 0, 0]));
        assert_eq!(trace.mu, v(&[1, 1, 1]));
        assert_eq!(trace.z, v(&[0, -1, 0]));
        assert_eq!(trace.w, v(&[1, 0, 0]));
        assert_eq!(out.result.extension, Mat::identity(3));
        assert_eq!(out.result.value, int(1));
    }

    #[test]
    fn coordinate_plane_is_trivial_case() {
        let t = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        let out = r3_extend_traced(&v(&[1, 0, 0]), &t).unwrap();
        assert_eq!(out.case, R3Case::BothRatiosZero);
        assert_eq!(out.result.extension.col(0), v(&[0, 0, 0]));
        assert_eq!(out.result.value, int(1));
    }

    #[test]
    fn one_ratio_zero_both_orientations() {
        let t = Mat::from_i64(&[&[1, -1], &[2, 1]]);
        for f in [v(&[2, 0, 1]), v(&[2, 1, 0])] {
            let out = r3_extend_traced(&f, &t).unwrap();
            assert_eq!(out.case, R3Case::OneRatioZero);
            assert_eq!(out.result.value, out.result.t_norm);
        }
    }

    #[test]
    fn zero_operator_and_errors() {
        let out = r3_extend(&v(&[1, 2, 3]), &Mat::zeros(2, 2)).unwrap();
        assert!(out.extension.is_zero());
        assert!(r3_extend(&v(&[0, 0, 0]), &Mat::identity(2)).is_err());
    }

    fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
        rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
    }

    #[test]
    fn random_instances_match_lp_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let f: QVec = (0..3).map(|_| rat(rng.gen_range(-3..=3), 1)).collect();
            if f.iter().all(Zero::is_zero) {
                continue;
            }
            let t = Mat::from_row_major(2, 2, (0..4).map(|_| random_rational(&mut rng)).collect()).unwrap();
            let out = r3_extend_traced(&f, &t).unwrap();
            let p = out.params.clone();
            let x = PolyhedralSpace::l1(3);
            let problem = ExtensionProblem::new(x.clone(), Subspace::new(x, p.basis()).unwrap(), t).unwrap();
            let lp = min_norm_extension(&problem).unwrap();
            assert_eq!(lp.value, out.result.value);
            assert_eq!(lp.value, lp.t_norm);
        }
    }
}
