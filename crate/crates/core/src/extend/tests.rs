use super::*;
use crate::instances::{mt4, mt5, mt6};
use crate::matrix::{vec_neg, vec_sub};
use crate::rational::{int, rat};
use crate::spaces::{subspace_dual_norm, subspace_operator_norm};
use proptest::prelude::*;

fn v(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| int(x)).collect()
}

fn r4_problem() -> ExtensionProblem {
    let x = PolyhedralSpace::l1(4);
    ExtensionProblem::new(x.clone(), Subspace::sum_zero(x).unwrap(), mt4()).unwrap()
}

/// The four inequalities bounding `‖S e_k‖` from below on the ℓ₁⁴ instance.
fn hand_certificate() -> LowerBoundCertificate {
    let items = [
        (0, [1, -1, 1, 1]),
        (1, [-1, 1, 1, -1]),
        (2, [-1, 1, -1, 1]),
        (3, [1, -1, -1, -1]),
    ]
    .into_iter()
    .map(|(k, g)| CertificateItem { vertex: unit(4, k), functional: v(&g), weight: int(1) })
    .collect();
    LowerBoundCertificate { items, bound: rat(5, 4) }
}

#[test]
fn hand_certificate_proves_five_quarters() {
    assert_eq!(verify_certificate(&hand_certificate(), &r4_problem()).unwrap(), rat(5, 4));
}

#[test]
fn tampered_certificates_are_rejected() {
    let p = r4_problem();
    let mut c = hand_certificate();
    c.items[1].functional = vec_neg(&c.items[1].functional);
    assert!(matches!(verify_certificate(&c, &p), Err(Error::CancellationFailure { .. })));

    let mut c = hand_certificate();
    c.items[0].functional[0] = int(2);
    assert!(matches!(verify_certificate(&c, &p), Err(Error::DualNormViolation { item: 0, .. })));

    let mut c = hand_certificate();
    c.items.pop();
    assert!(matches!(verify_certificate(&c, &p), Err(Error::CancellationFailure { .. })));
}

/// `min over a grid of z = S e₁` of `max_k ‖S e_k‖₁`, with `S e_k = z − T u_k`.
fn grid_upper_bound() -> Rational {
    let img = r4_problem().images().clone();
    let steps: Vec<Rational> = (-4..=4).map(|k| rat(k, 4)).collect();
    let mut best: Option<Rational> = None;
    let mut z = vec![Rational::zero(); 4];
    let total = steps.len().pow(4);
    for idx in 0..total {
        let mut r = idx;
        for zi in z.iter_mut() {
            *zi = steps[r % steps.len()].clone();
            r /= steps.len();
        }
        let mut worst = PolyhedralSpace::l1(4).norm(&z).unwrap();
        for k in 0..3 {
            let n = PolyhedralSpace::l1(4).norm(&vec_sub(&z, &img.col(k))).unwrap();
            worst = worst.max(n);
        }
        if best.as_ref().is_none_or(|b| &worst < b) {
            best = Some(worst);
        }
    }
    best.unwrap()
}

#[test]
fn r4_instance_optimum() {
    let p = r4_problem();
    let res = min_norm_extension(&p).unwrap();
    assert_eq!(res.t_norm, int(1));
    assert!(res.value >= rat(5, 4));
    assert!(p.is_extended_by(&res.extension));
    let x = PolyhedralSpace::l1(4);
    assert_eq!(crate::spaces::operator_norm(&x, &x, &res.extension).unwrap(), res.value);
    assert_eq!(verify_certificate(&res.certificate, &p).unwrap(), res.value);
    assert!(res.value <= grid_upper_bound());
    assert_eq!(res.value, rat(5, 4));
}

#[test]
fn r5_and_r6_bounds() {
    for (op, n, bound) in [(mt5(), 5, rat(4, 3)), (mt6(), 6, rat(3, 2))] {
        let x = PolyhedralSpace::l1(n);
        let p = ExtensionProblem::new(x.clone(), Subspace::sum_zero(x).unwrap(), op).unwrap();
        let res = min_norm_extension(&p).unwrap();
        assert_eq!(res.t_norm, int(1));
        assert!(res.value >= bound, "n = {n}: {}", res.value);
        assert_eq!(verify_certificate(&res.certificate, &p).unwrap(), res.value);
    }
}

#[test]
fn full_space_returns_t() {
    let x = PolyhedralSpace::l1(3);
    let t = Mat::from_i64(&[&[1, 2, 0], &[0, -1, 1], &[3, 0, 1]]);
    let p = ExtensionProblem::new(x.clone(), Subspace::full(x.clone()), t.clone()).unwrap();
    let res = min_norm_extension(&p).unwrap();
    assert_eq!(res.extension, t);
    assert_eq!(res.value, int(4));
    assert_eq!(res.value, res.t_norm);

    // one item: e₂ with a functional of dual norm one
    let c = LowerBoundCertificate {
        items: vec![CertificateItem { vertex: unit(3, 1), functional: v(&[1, -1, 0]), weight: int(1) }],
        bound: int(3),
    };
    assert_eq!(verify_certificate(&c, &p).unwrap(), int(3));
}

#[test]
fn zero_operator() {
    let x = PolyhedralSpace::linf(3);
    let y = Subspace::kernel_of(x.clone(), &v(&[1, 1, 1])).unwrap();
    let p = ExtensionProblem::new(x, y, Mat::zeros(2, 2)).unwrap();
    let res = min_norm_extension(&p).unwrap();
    assert!(res.extension.is_zero());
    assert_eq!(res.value, int(0));
    assert_eq!(res.ratio(), None);
}

#[test]
fn max_abs_ambient() {
    let hex = PolyhedralSpace::max_abs(Mat::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])).unwrap();
    let y = Subspace::new(hex.clone(), Mat::from_i64(&[&[1, 0], &[0, 1], &[1, -1]])).unwrap();
    let p = ExtensionProblem::new(hex, y, Mat::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
    let res = min_norm_extension(&p).unwrap();
    assert!(res.value >= res.t_norm);
    assert_eq!(verify_certificate(&res.certificate, &p).unwrap(), res.value);
}

#[test]
fn norming_certificate_gives_t_norm() {
    let p = r4_problem();
    let c = norming_certificate(&p, &Caps::default()).unwrap();
    assert_eq!(c.bound, int(1));
    assert_eq!(verify_certificate(&c, &p).unwrap(), int(1));
}

#[test]
fn extend_functional_examples() {
    let y = Subspace::new(PolyhedralSpace::linf(2), Mat::from_i64(&[&[1], &[1]])).unwrap();
    let f = extend_functional(&y, &v(&[1])).unwrap();
    assert_eq!(&f[0] + &f[1], int(1));
    assert_eq!(f[0].abs() + f[1].abs(), int(1));
    assert_eq!(extend_functional(&y, &v(&[0])).unwrap(), v(&[0, 0]));
    assert!(extend_functional(&y, &v(&[1, 2])).is_err());
}

#[test]
fn coordinatewise_examples() {
    let x = PolyhedralSpace::linf(3);
    let t = Mat::from_i64(&[&[1, 1, 0], &[0, -1, 2], &[1, 0, 0]]);
    let res = coordinatewise_linf_extension(&Subspace::full(x.clone()), &t).unwrap();
    assert_eq!(res.extension, t);

    let x4 = PolyhedralSpace::linf(4);
    let y = Subspace::new(x4.clone(), Mat::from_i64(&[&[1, 0], &[1, 1], &[0, 1], &[2, -1]])).unwrap();
    let res = coordinatewise_linf_extension(&y, &Mat::identity(2)).unwrap();
    assert_eq!(res.value, int(1));
    let p = ExtensionProblem::new(x4, y, Mat::identity(2)).unwrap();
    assert_eq!(min_norm_extension(&p).unwrap().value, int(1));

    let l1 = Subspace::full(PolyhedralSpace::l1(2));
    assert!(coordinatewise_linf_extension(&l1, &Mat::identity(2)).is_err());
}

#[test]
fn c0_examples() {
    let b = Mat::from_i64(&[&[1], &[-1]]);
    let res = c0_finite_demo(&b, &Mat::identity(1), 5).unwrap();
    assert_eq!(res.value, int(1));
    for i in 2..5 {
        assert!(res.extension.row(i).iter().all(Zero::is_zero));
    }
    let res = c0_finite_demo(&b, &Mat::zeros(1, 1), 5).unwrap();
    assert!(res.extension.is_zero());

    let b = Mat::from_i64(&[&[1, 0], &[1, 1], &[0, 2]]);
    let t = Mat::from_i64(&[&[1, -2], &[3, 1]]);
    let res = c0_finite_demo(&b, &t, 8).unwrap();
    for i in 3..8 {
        assert!(res.extension.row(i).iter().all(Zero::is_zero));
    }

    let wide = Mat::from_i64(&[&[1], &[0], &[1]]);
    assert!(matches!(c0_finite_demo(&wide, &Mat::identity(1), 2), Err(Error::Input(_))));
}

#[test]
fn hilbert_examples() {
    let s = hilbert_extension(&Mat::from_i64(&[&[1], &[0]]), &Mat::from_i64(&[&[2]]), 2).unwrap();
    assert_eq!(s, Mat::from_i64(&[&[2, 0], &[0, 0]]));
    let t = Mat::from_i64(&[&[1, 2], &[3, 4]]);
    assert_eq!(hilbert_extension(&Mat::identity(2), &t, 2).unwrap(), t);
    assert!(hilbert_extension(&Mat::from_i64(&[&[1, 2], &[2, 4]]), &t, 2).is_err());
}

#[test]
fn lyapunov_examples() {
    let f = Mat::from_i64(&[&[1, 1], &[0, 1]]).scale(&rat(1, 3));
    let inst = LyapunovInstance::new(Mat::identity(2), f.clone(), PolyhedralSpace::linf(2)).unwrap();
    let (rep, _) = lyapunov_certificate(&inst, &Caps::default()).unwrap();
    assert_eq!(rep.q, f);
    assert_eq!(rep.q_norm, rat(2, 3));
    assert!(rep.decays);

    let y = Subspace::sum_zero(PolyhedralSpace::l1(4)).unwrap();
    let inst = LyapunovInstance::new(y.basis().clone(), mt4(), PolyhedralSpace::l1(4)).unwrap();
    let (rep, _) = lyapunov_certificate(&inst, &Caps::default()).unwrap();
    assert_eq!(rep.induced_norm, int(1));
    assert!(rep.q_norm >= rat(5, 4));
    assert!(!rep.decays);

    let bad = LyapunovInstance::new(Mat::from_i64(&[&[1, 2], &[2, 4]]), Mat::identity(2), PolyhedralSpace::l1(2));
    assert!(bad.is_err());
}

fn small() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=2).prop_map(|(p, q)| rat(p, q))
}

fn mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(small(), rows * cols).prop_map(move |d| Mat::from_row_major(rows, cols, d).unwrap())
}

fn to_na(m: &Mat) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| crate::rational::to_f64(&m[(i, j)]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linf_extensions_preserve_norm(b in mat(3, 2), t in mat(2, 2)) {
        prop_assume!(rank(&b) == 2);
        let x = PolyhedralSpace::linf(3);
        let y = Subspace::new(x.clone(), b).unwrap();
        let p = ExtensionProblem::new(x, y.clone(), t.clone()).unwrap();
        let res = min_norm_extension(&p).unwrap();
        prop_assert_eq!(&res.value, &res.t_norm);
        let cw = coordinatewise_linf_extension(&y, &t).unwrap();
        prop_assert_eq!(&cw.value, &res.t_norm);
    }

    #[test]
    fn l1_3_hyperplanes_extend_isometrically(f in proptest::collection::vec(-3i64..=3, 3), t in mat(2, 2)) {
        prop_assume!(f.iter().any(|&x| x != 0));
        let x = PolyhedralSpace::l1(3);
        let y = Subspace::kernel_of(x.clone(), &v(&f)).unwrap();
        let p = ExtensionProblem::new(x, y, t).unwrap();
        let res = min_norm_extension(&p).unwrap();
        prop_assert_eq!(&res.value, &res.t_norm);
        prop_assert_eq!(verify_certificate(&res.certificate, &p).unwrap(), res.value);
    }

    #[test]
    fn l1_4_extensions_are_certified(b in mat(4, 2), t in mat(2, 2)) {
        prop_assume!(rank(&b) == 2);
        let x = PolyhedralSpace::l1(4);
        let y = Subspace::new(x.clone(), b).unwrap();
        let p = ExtensionProblem::new(x, y, t).unwrap();
        let res = min_norm_extension(&p).unwrap();
        prop_assert!(res.value >= res.t_norm);
        prop_assert_eq!(verify_certificate(&res.certificate, &p).unwrap(), res.value.clone());
        for item in &res.certificate.items {
            prop_assert!(item.weight > Rational::zero());
        }
    }

    #[test]
    fn functional_extension_is_norm_preserving(b in mat(5, 2), f in proptest::collection::vec(small(), 2)) {
        prop_assume!(rank(&b) == 2);
        let y = Subspace::new(PolyhedralSpace::linf(5), b.clone()).unwrap();
        let big = extend_functional(&y, &f).unwrap();
        prop_assert_eq!(b.transpose().mul_vec(&big).unwrap(), f.clone());
        prop_assert_eq!(PolyhedralSpace::linf(5).dual_norm(&big).unwrap(), subspace_dual_norm(&y, &f).unwrap());
    }

    #[test]
    fn functional_extension_in_l1_and_max_abs(b in mat(3, 2), f in proptest::collection::vec(small(), 2), u in mat(4, 3)) {
        prop_assume!(rank(&b) == 2 && rank(&u) == 3);
        for x in [PolyhedralSpace::l1(3), PolyhedralSpace::max_abs(u.clone()).unwrap()] {
            let y = Subspace::new(x.clone(), b.clone()).unwrap();
            let big = extend_functional(&y, &f).unwrap();
            prop_assert_eq!(x.dual_norm(&big).unwrap(), subspace_dual_norm(&y, &f).unwrap());
        }
    }

    #[test]
    fn hilbert_norms_match_svd(b in mat(4, 2), t in mat(2, 2)) {
        prop_assume!(rank(&b) == 2);
        let s = hilbert_extension(&b, &t, 4).unwrap();
        let sv = to_na(&s).singular_values().max();
        prop_assert!((spectral_norm(&(0..4).map(|i| s.row(i).iter().map(crate::rational::to_f64).collect()).collect::<Vec<_>>()) - sv).abs() < 1e-9);
        // ‖T‖₂ on Y: ‖B T G^{-1/2}‖ via ‖S‖ = ‖S restricted to Y‖
        let q = to_na(&b).qr().q();
        let sq = to_na(&s) * &q;
        prop_assert!((sq.singular_values().max() - sv).abs() < 1e-9);
    }

    #[test]
    fn lyapunov_gap_is_nonnegative(w in mat(3, 2), f in mat(2, 2)) {
        prop_assume!(rank(&w) == 2);
        let inst = LyapunovInstance::new(w.clone(), f.clone(), PolyhedralSpace::l1(3)).unwrap();
        let (rep, _) = lyapunov_certificate(&inst, &Caps::default()).unwrap();
        prop_assert!(rep.q_norm >= rep.induced_norm);
        prop_assert_eq!(rep.q.mul(&w).unwrap(), w.mul(&f).unwrap());
        let y = Subspace::new(PolyhedralSpace::l1(3), w).unwrap();
        prop_assert_eq!(rep.induced_norm, subspace_operator_norm(&y, &f, &PolyhedralSpace::l1(3)).unwrap());
    }
}

#[test]
fn full_rank_subspace_with_skew_basis() {
    // square operators are read in basis coordinates, so T ↦ B T B⁻¹ is the
    // only extension and its norm must equal ‖T‖
    let b = Mat::from_i64(&[&[1, 0, 2], &[-1, 0, -1], &[0, 1, 2]]);
    let t = Mat::from_i64(&[&[-3, 3, 4], &[2, 2, -3], &[0, 3, 6]]).scale(&rat(1, 2));
    let y = Subspace::new(PolyhedralSpace::linf(3), b.clone()).unwrap();
    let res = coordinatewise_linf_extension(&y, &t).unwrap();
    assert_eq!(res.extension, b.mul(&t).unwrap().mul(&b.inverse().unwrap()).unwrap());
    assert_eq!(res.value, int(14));
    assert_eq!(res.t_norm, int(14));
}
