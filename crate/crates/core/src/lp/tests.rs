use super::*;
use crate::matrix::{solve_linear, Mat};
use crate::rational::{int, rat};
use proptest::prelude::*;

fn row(xs: &[Rational]) -> QVec {
    xs.to_vec()
}

/// Brute-force optimum over all basic solutions: every choice of `n` tight
/// constraints (rows or finite bounds) is solved and kept if feasible.
/// Valid for feasible programs whose feasible set is a polytope.
fn brute_force_min(p: &LinearProgram) -> Option<Rational> {
    let n = p.num_vars();
    let mut hyperplanes: Vec<(QVec, Rational)> = p.constraints.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    for j in 0..n {
        for b in [&p.lower[j], &p.upper[j]].into_iter().flatten() {
            hyperplanes.push((crate::matrix::unit(n, j), b.clone()));
        }
    }
    let mut best: Option<Rational> = None;
    let k = hyperplanes.len();
    let mut idx: Vec<usize> = (0..n).collect();
    if k < n {
        return None;
    }
    loop {
        let a = Mat::from_rows(idx.iter().map(|&i| hyperplanes[i].0.clone()).collect()).unwrap();
        if crate::matrix::rank(&a) == n {
            let b: QVec = idx.iter().map(|&i| hyperplanes[i].1.clone()).collect();
            if let Some(x) = solve_linear(&a, &b).unwrap() {
                if primal_feasible(p, &x) {
                    let v = dot(&p.objective, &x);
                    if best.as_ref().is_none_or(|b| &v < b) {
                        best = Some(v);
                    }
                }
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] != i + k - n {
                break;
            }
            if i == 0 && idx[0] == k - n {
                return best;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[test]
fn minimize_x_subject_to_x_ge_3() {
    let mut p = LinearProgram::new(1);
    p.objective = vec![int(1)];
    p.add(vec![int(1)], Relation::Ge, int(3));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.objective_value, int(3));
    assert_eq!(s.dual, vec![int(1)]);
    assert!(check_solution(&p, &s));
}

#[test]
fn infeasible_with_certificate() {
    let mut p = LinearProgram::new(1);
    p.add(vec![int(1)], Relation::Le, int(-1));
    p.add(vec![int(1)], Relation::Ge, int(0));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Infeasible);
    assert!(check_solution(&p, &s));
}

#[test]
fn infeasible_through_bounds() {
    let mut p = LinearProgram::new(2);
    p.set_lower(0, int(0));
    p.set_upper(0, int(1));
    p.set_lower(1, int(0));
    p.set_upper(1, int(1));
    p.add(vec![int(1), int(1)], Relation::Ge, int(3));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Infeasible);
    assert!(check_solution(&p, &s));
}

#[test]
fn unbounded_with_ray() {
    let mut p = LinearProgram::new(2);
    p.objective = vec![int(-1), int(0)];
    p.add(vec![int(1), int(-1)], Relation::Le, int(2));
    p.set_lower(1, int(0));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Unbounded);
    assert!(check_solution(&p, &s));
}

#[test]
fn hand_built_optimal_pair_checks() {
    let mut p = LinearProgram::new(1);
    p.objective = vec![int(1)];
    p.add(vec![int(1)], Relation::Ge, int(3));
    let s = LpSolution {
        status: LpStatus::Optimal,
        primal: vec![int(3)],
        dual: vec![int(1)],
        objective_value: int(3),
        ray: None,
    };
    assert!(check_solution(&p, &s));
    let wrong_dual = LpSolution { dual: vec![rat(1, 2)], ..s.clone() };
    assert!(!check_solution(&p, &wrong_dual));
}

#[test]
fn perturbed_primal_fails_check() {
    let mut p = LinearProgram::new(2);
    p.objective = vec![int(1), int(1)];
    p.add(vec![int(1), int(2)], Relation::Ge, int(4));
    p.add(vec![int(3), int(1)], Relation::Ge, int(6));
    let s = solve_lp(&p).unwrap();
    assert!(check_solution(&p, &s));
    for j in 0..2 {
        for eps in [rat(1, 1_000_000), rat(-1, 1_000_000)] {
            let mut bad = s.clone();
            bad.primal[j] += &eps;
            assert!(!check_solution(&p, &bad));
        }
    }
}

#[test]
fn beale_cycling_example_terminates() {
    // Classic degenerate instance on which Dantzig's rule cycles.
    let mut p = LinearProgram::new(4);
    p.objective = vec![rat(-3, 4), int(20), rat(-1, 2), int(6)];
    p.add(row(&[rat(1, 4), int(-8), int(-1), int(9)]), Relation::Le, int(0));
    p.add(row(&[rat(1, 2), int(-12), rat(-1, 2), int(3)]), Relation::Le, int(0));
    p.add(row(&[int(0), int(0), int(1), int(0)]), Relation::Le, int(1));
    for j in 0..4 {
        p.set_lower(j, int(0));
    }
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(Some(s.objective_value.clone()), brute_force_min(&p));
    assert_eq!(s.objective_value, rat(-5, 4));
}

#[test]
fn hoffman_style_degenerate_equalities() {
    // Redundant equality rows and a degenerate vertex.
    let mut p = LinearProgram::new(3);
    p.objective = vec![int(1), int(-1), int(0)];
    p.add(row(&[int(1), int(1), int(1)]), Relation::Eq, int(1));
    p.add(row(&[int(2), int(2), int(2)]), Relation::Eq, int(2));
    p.add(row(&[int(1), int(-1), int(0)]), Relation::Ge, int(-1));
    for j in 0..3 {
        p.set_lower(j, int(0));
    }
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.objective_value, int(-1));
}

#[test]
fn deterministic_across_runs() {
    let mut p = LinearProgram::new(3);
    p.objective = vec![int(1), int(1), int(1)];
    p.add(row(&[int(1), int(1), int(0)]), Relation::Ge, int(1));
    p.add(row(&[int(0), int(1), int(1)]), Relation::Ge, int(1));
    p.add(row(&[int(1), int(0), int(1)]), Relation::Ge, int(1));
    let a = solve_lp(&p).unwrap();
    let b = solve_lp(&p).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.objective_value, rat(3, 2));
}

#[test]
fn malformed_program_rejected() {
    let mut p = LinearProgram::new(2);
    p.add(vec![int(1)], Relation::Le, int(1));
    assert!(matches!(solve_lp(&p), Err(crate::error::Error::Input(_))));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_boxed_programs_match_brute_force(
        obj in proptest::collection::vec(small_rational(), 3),
        rows in proptest::collection::vec((proptest::collection::vec(small_rational(), 3), 0u8..3, small_rational()), 0..4),
    ) {
        let mut p = LinearProgram::new(3);
        p.objective = obj;
        for j in 0..3 {
            p.set_lower(j, int(-2));
            p.set_upper(j, int(2));
        }
        for (coeffs, rel, rhs) in rows {
            let rel = match rel { 0 => Relation::Le, 1 => Relation::Eq, _ => Relation::Ge };
            p.add(coeffs, rel, rhs);
        }
        let s = solve_lp(&p).unwrap();
        prop_assert!(check_solution(&p, &s));
        match s.status {
            LpStatus::Optimal => prop_assert_eq!(Some(s.objective_value.clone()), brute_force_min(&p)),
            LpStatus::Infeasible => prop_assert_eq!(None, brute_force_min(&p)),
            LpStatus::Unbounded => prop_assert!(false, "boxed program cannot be unbounded"),
        }
    }

    #[test]
    fn free_variable_programs_verify(
        obj in proptest::collection::vec(small_rational(), 2),
        rows in proptest::collection::vec((proptest::collection::vec(small_rational(), 2), 0u8..3, small_rational()), 1..5),
    ) {
        let mut p = LinearProgram::new(2);
        p.objective = obj;
        for (coeffs, rel, rhs) in rows {
            let rel = match rel { 0 => Relation::Le, 1 => Relation::Eq, _ => Relation::Ge };
            p.add(coeffs, rel, rhs);
        }
        let s = solve_lp(&p).unwrap();
        prop_assert!(check_solution(&p, &s));
    }
}

#[test]
fn large_entries_fall_back_to_big_rationals() {
    // coefficients beyond 64 bits skip the small tableau entirely
    let big = Rational::new(num::BigInt::from(10).pow(30), num::BigInt::from(7));
    let mut p = LinearProgram::new(2);
    p.objective = vec![int(-1), int(-1)];
    p.add(vec![big.clone(), int(1)], Relation::Le, big.clone() * int(3));
    p.add(vec![int(1), big.clone()], Relation::Le, big.clone());
    p.set_lower(0, int(0));
    p.set_lower(1, int(0));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s, simplex::solve_big(&p).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_and_big_tableaux_agree(
        obj in proptest::collection::vec(small_rational(), 4),
        rows in proptest::collection::vec((proptest::collection::vec(small_rational(), 4), 0u8..3, small_rational()), 1..6),
    ) {
        let mut p = LinearProgram::new(4);
        p.objective = obj;
        p.set_lower(0, int(-1));
        p.set_upper(1, int(3));
        for (coeffs, rel, rhs) in rows {
            let rel = match rel { 0 => Relation::Le, 1 => Relation::Eq, _ => Relation::Ge };
            p.add(coeffs, rel, rhs);
        }
        prop_assert_eq!(solve_lp(&p).unwrap(), simplex::solve_big(&p).unwrap());
    }
}
