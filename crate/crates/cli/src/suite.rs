//! The verification suite behind `verify-paper`: every reproducible claim
//! about the counterexamples, the `ℓ₁³` construction, embeddings, lifts,
//! functional extensions and the numeric Banach–Mazur facts, rerun from
//! scratch.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use selfext_core::extend::{
    coordinatewise_linf_extension, extend_functional, lyapunov_certificate, min_norm_extension_with, LyapunovInstance,
};
use selfext_core::instances::counterexamples;
use selfext_core::matrix::{rank, unit};
use selfext_core::r3::r3_extend_traced;
use selfext_core::rational::{format_rational, int, rat};
use selfext_core::se::{
    bm_l1_lp, heredity_lift, l1_to_linf_embedding, lift_certificate, particr4_threshold, se_lower_bound_search_with,
    stability_bound, SearchOptions, Strategy,
};
use selfext_core::spaces::{subspace_dual_norm, subspace_operator_norm_with};
use selfext_core::{
    verify_certificate, Caps, CertificateItem, ExtensionProblem, LowerBoundCertificate, Mat, PolyhedralSpace, QVec,
    Rational, Subspace,
};

use crate::report::{Check, Status, VerificationReport};

#[derive(Clone, Debug)]
pub struct SuiteSettings {
    pub seed: u64,
    pub parallel: bool,
    pub caps: Caps,
    pub grid_budget: usize,
    pub r3_instances: usize,
    pub functional_instances: usize,
    pub operator_instances: usize,
    pub embedding_vectors: usize,
    /// Replacement operators for the shipped counterexamples, by name
    /// (`r4`, `r5`, `r6`).
    pub overrides: BTreeMap<String, Mat>,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        SuiteSettings {
            seed: 0,
            parallel: false,
            caps: Caps::default(),
            grid_budget: 3usize.pow(9),
            r3_instances: 1000,
            functional_instances: 500,
            operator_instances: 200,
            embedding_vectors: 1000,
            overrides: BTreeMap::new(),
        }
    }
}

/// What a check found and whether that matches the claim.
struct Found {
    computed: String,
    pass: bool,
}

type CheckFn = Box<dyn Fn(&SuiteSettings) -> Result<Found, String> + Send + Sync>;

struct CheckDef {
    name: String,
    claimed: String,
    reference: String,
    limit: Option<Duration>,
    run: CheckFn,
}

fn def(
    name: impl Into<String>,
    claimed: impl Into<String>,
    reference: impl Into<String>,
    run: impl Fn(&SuiteSettings) -> Result<Found, String> + Send + Sync + 'static,
) -> CheckDef {
    CheckDef { name: name.into(), claimed: claimed.into(), reference: reference.into(), limit: None, run: Box::new(run) }
}

impl CheckDef {
    fn within(mut self, limit: Duration) -> Self {
        self.limit = Some(limit);
        self
    }

    fn execute(&self, settings: &SuiteSettings) -> Check {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| (self.run)(settings))).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "check panicked".into());
            Err(msg)
        });
        let elapsed = start.elapsed();
        let (mut computed, mut pass) = match outcome {
            Ok(found) => (found.computed, found.pass),
            Err(e) => (format!("error: {e}"), false),
        };
        if let Some(limit) = self.limit {
            if elapsed > limit {
                computed = format!("{computed}; took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs());
                pass = false;
            }
        }
        log::info!("{} {}: {computed}", if pass { "pass" } else { "FAIL" }, self.name);
        Check {
            name: self.name.clone(),
            status: if pass { Status::Pass } else { Status::Fail },
            claimed: self.claimed.clone(),
            computed,
            reference: self.reference.clone(),
            runtime_ms: elapsed.as_millis() as u64,
        }
    }
}

fn q(x: &Rational) -> String {
    format_rational(x)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn sum_zero_problem(n: usize, op: Mat) -> Result<ExtensionProblem, String> {
    let x = PolyhedralSpace::l1(n);
    let y = Subspace::sum_zero(x.clone()).map_err(err)?;
    ExtensionProblem::new(x, y, op).map_err(err)
}

/// The operator of a shipped counterexample, or its override.
fn counterexample_op(settings: &SuiteSettings, name: &str) -> Mat {
    settings.overrides.get(name).cloned().unwrap_or_else(|| {
        counterexamples().into_iter().find(|c| c.name == name).expect("shipped counterexample").op
    })
}

fn counterexample_checks() -> Vec<CheckDef> {
    let mut defs = Vec::new();
    for ce in counterexamples() {
        let (name, dim, bound) = (ce.name, ce.dim, ce.bound.clone());
        defs.push(def(
            format!("{name}_operator_norm"),
            "= 1",
            format!("the operator on the sum-zero hyperplane of l1:{dim} has norm 1"),
            move |s| {
                let p = sum_zero_problem(dim, counterexample_op(s, name))?;
                let t = p.t_norm(&s.caps).map_err(err)?;
                Ok(Found { pass: t == int(1), computed: q(&t) })
            },
        ));
        let claim = ce.claim;
        let limit = if dim == 4 { Duration::from_secs(1) } else { Duration::from_secs(30) };
        defs.push(
            def(format!("{name}_lower_bound"), format!("≥ {}", q(&bound)), claim, move |s| {
                let p = sum_zero_problem(dim, counterexample_op(s, name))?;
                let res = min_norm_extension_with(&p, &s.caps).map_err(err)?;
                Ok(Found { pass: res.value >= bound, computed: q(&res.value) })
            })
            .within(limit),
        );
    }
    defs.push(def(
        "r4_hand_certificate",
        "= 5/4",
        "four vertex/functional pairs with unit weights force every extension on l1:4 to norm >= 5/4",
        |s| {
            let p = sum_zero_problem(4, counterexample_op(s, "r4"))?;
            let items = [[1, -1, 1, 1], [-1, 1, 1, -1], [-1, 1, -1, 1], [1, -1, -1, -1]]
                .iter()
                .enumerate()
                .map(|(k, g)| CertificateItem {
                    vertex: unit(4, k),
                    functional: g.iter().map(|&x| int(x)).collect(),
                    weight: int(1),
                })
                .collect();
            let cert = LowerBoundCertificate { items, bound: rat(5, 4) };
            let b = verify_certificate(&cert, &p).map_err(err)?;
            Ok(Found { pass: b == rat(5, 4), computed: q(&b) })
        },
    ));
    for n in [5, 6] {
        defs.push(def(
            format!("heredity_lift_l1_{n}"),
            "≥ 5/4, padded certificate re-verifies",
            format!("the l1:4 obstruction survives the isometric copy inside l1:{n}"),
            move |s| {
                let p = sum_zero_problem(4, counterexample_op(s, "r4"))?;
                let base = min_norm_extension_with(&p, &s.caps).map_err(err)?;
                let lifted = heredity_lift(&p, n).map_err(err)?;
                let res = min_norm_extension_with(&lifted, &s.caps).map_err(err)?;
                let cert = verify_certificate(&lift_certificate(&base.certificate, n), &lifted).map_err(err)?;
                Ok(Found {
                    pass: res.value >= rat(5, 4) && cert == base.value,
                    computed: format!("{}; certificate {}", q(&res.value), q(&cert)),
                })
            },
        ));
    }
    defs
}

fn random_plane(rng: &mut ChaCha8Rng) -> QVec {
    loop {
        let f: QVec = (0..3).map(|_| int(rng.gen_range(-4..=4))).collect();
        if !f.iter().all(Zero::is_zero) {
            return f;
        }
    }
}

fn l1_norm(x: &[Rational]) -> Rational {
    x.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
}

fn r3_check() -> CheckDef {
    def(
        "r3_self_extension",
        "‖S‖ = ‖T‖ = LP optimum on every instance",
        "every operator on a plane of l1:3 extends to the whole space with the same norm",
        |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0x5133);
            let x = PolyhedralSpace::l1(3);
            let mut generic = 0;
            for k in 0..s.r3_instances {
                let f = random_plane(&mut rng);
                let t = Mat::from_row_major(2, 2, (0..4).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect())
                    .map_err(err)?;
                let out = r3_extend_traced(&f, &t).map_err(|e| format!("instance {k}: {e}"))?;
                if out.trace.is_some() {
                    generic += 1;
                }
                let y = Subspace::new(x.clone(), out.params.basis()).map_err(err)?;
                let p = ExtensionProblem::new(x.clone(), y, t).map_err(err)?;
                let lp = min_norm_extension_with(&p, &s.caps).map_err(err)?;
                let r = &out.result;
                if !p.is_extended_by(&r.extension) || r.value != r.t_norm || lp.value != r.t_norm {
                    return Ok(Found {
                        pass: false,
                        computed: format!("instance {k}: ‖S‖ = {}, ‖T‖ = {}, LP {}", q(&r.value), q(&r.t_norm), q(&lp.value)),
                    });
                }
            }
            Ok(Found { pass: true, computed: format!("{} of {} ({generic} with traces)", s.r3_instances, s.r3_instances) })
        },
    )
    .within(Duration::from_secs(120))
}

fn structure_checks() -> Vec<CheckDef> {
    vec![
        def(
            "sum_zero_vertices",
            "12 points ½(e_j − e_i)",
            "the unit ball of the sum-zero hyperplane of l1:4 has exactly the extreme points (e_j - e_i)/2",
            |s| {
                let y = Subspace::sum_zero(PolyhedralSpace::l1(4)).map_err(err)?;
                let v = y.ball_vertices_with(&s.caps).map_err(err)?;
                let mut all = true;
                for i in 0..4 {
                    for j in 0..4 {
                        if i != j {
                            let mut p = vec![Rational::zero(); 4];
                            p[j] = rat(1, 2);
                            p[i] = rat(-1, 2);
                            all &= v.contains(&p);
                        }
                    }
                }
                Ok(Found { pass: all && v.len() == 12, computed: format!("{} points, all expected: {all}", v.len()) })
            },
        ),
        def(
            "l1_linf_embedding",
            "‖x‖₁ = ‖Ex‖∞, rank n, for n = 2..5",
            "l1:n is isometric to a subspace of linf:2^(n-1)",
            |s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0xe3b);
                for n in 2..=5 {
                    let e = l1_to_linf_embedding(n).map_err(err)?;
                    if rank(&e) != n {
                        return Ok(Found { pass: false, computed: format!("n = {n}: rank {}", rank(&e)) });
                    }
                    let linf = PolyhedralSpace::linf(e.rows());
                    for _ in 0..s.embedding_vectors {
                        let x: QVec = (0..n).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=9))).collect();
                        let image = linf.norm(&e.mul_vec(&x).map_err(err)?).map_err(err)?;
                        if image != l1_norm(&x) {
                            return Ok(Found { pass: false, computed: format!("n = {n}: norms differ") });
                        }
                    }
                }
                Ok(Found { pass: true, computed: format!("4 dimensions × {} vectors", s.embedding_vectors) })
            },
        ),
    ]
}

fn random_linf_subspace(rng: &mut ChaCha8Rng) -> Result<Subspace, String> {
    loop {
        let n = rng.gen_range(2..=8);
        let d = rng.gen_range(1..=n.min(3));
        let b = Mat::from_row_major(n, d, (0..n * d).map(|_| int(rng.gen_range(-2..=2))).collect()).map_err(err)?;
        if rank(&b) == d {
            return Subspace::new(PolyhedralSpace::linf(n), b).map_err(err);
        }
    }
}

fn linf_checks() -> Vec<CheckDef> {
    vec![
        def(
            "functional_extension",
            "‖F‖ = ‖f‖ on every instance",
            "functionals on subspaces of linf:N extend with the same norm",
            |s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0xf7);
                for k in 0..s.functional_instances {
                    let y = random_linf_subspace(&mut rng)?;
                    let f: QVec = (0..y.dim()).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
                    let big = extend_functional(&y, &f).map_err(|e| format!("instance {k}: {e}"))?;
                    let expected = subspace_dual_norm(&y, &f).map_err(err)?;
                    let restricts = y.basis().transpose().mul_vec(&big).map_err(err)? == f;
                    if !restricts || l1_norm(&big) != expected {
                        return Ok(Found {
                            pass: false,
                            computed: format!("instance {k}: ‖F‖ = {}, ‖f‖ = {}", q(&l1_norm(&big)), q(&expected)),
                        });
                    }
                }
                Ok(Found { pass: true, computed: format!("{} instances", s.functional_instances) })
            },
        ),
        def(
            "coordinatewise_extension",
            "‖S‖ = ‖T‖ on every instance",
            "operators into linf:N extend row by row with the same norm",
            |s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0xc0);
                for k in 0..s.operator_instances {
                    let y = random_linf_subspace(&mut rng)?;
                    let d = y.dim();
                    let t = Mat::from_row_major(
                        d,
                        d,
                        (0..d * d).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect(),
                    )
                    .map_err(err)?;
                    let res = coordinatewise_linf_extension(&y, &t).map_err(|e| format!("instance {k}: {e}"))?;
                    let t_norm = subspace_operator_norm_with(&y, &t, y.ambient(), &s.caps).map_err(err)?;
                    if res.value != t_norm {
                        return Ok(Found {
                            pass: false,
                            computed: format!("instance {k}: ‖S‖ = {}, ‖T‖ = {}", q(&res.value), q(&t_norm)),
                        });
                    }
                }
                Ok(Found { pass: true, computed: format!("{} instances", s.operator_instances) })
            },
        ),
    ]
}

fn float_checks() -> Vec<CheckDef> {
    let target = 5f64.sqrt() / 2.0;
    vec![
        def("bm_threshold", "in (1.087, 1.088)", "the p at which d(l1:4, lp:4)^2 = 5/4", |_| {
            let p = particr4_threshold();
            Ok(Found { pass: p > 1.087 && p < 1.088, computed: format!("{p:.9}") })
        }),
        def("bm_distance", "√5/2 within 1e-9", "d(l1:4, lp:4) = 4^(1-1/p) at the threshold", move |_| {
            let d = bm_l1_lp(particr4_threshold()).map_err(err)?;
            Ok(Found { pass: (d - target).abs() < 1e-9, computed: format!("{d:.12}") })
        }),
        def("stability_bound", "5/4 within 1e-9", "se(X) <= se(Y) d(X, Y)^2", move |_| {
            let b = stability_bound(1.0, target).map_err(err)?;
            Ok(Found { pass: (b - 1.25).abs() < 1e-9, computed: format!("{b:.12}") })
        }),
    ]
}

fn lyapunov_checks() -> Vec<CheckDef> {
    vec![
        def(
            "lyapunov_gap",
            "induced norm 1, ‖Q‖ ≥ 5/4",
            "V(x) = ||Wx|| contracts weakly while no Q with QW = WF has norm below 5/4",
            |s| {
                let x = PolyhedralSpace::l1(4);
                let w = Subspace::sum_zero(x.clone()).map_err(err)?.basis().clone();
                let inst = LyapunovInstance::new(w, counterexample_op(s, "r4"), x).map_err(err)?;
                let (rep, _) = lyapunov_certificate(&inst, &s.caps).map_err(err)?;
                Ok(Found {
                    pass: rep.induced_norm == int(1) && rep.q_norm >= rat(5, 4),
                    computed: format!("induced {}, ‖Q‖ = {}", q(&rep.induced_norm), q(&rep.q_norm)),
                })
            },
        ),
        def("lyapunov_decay", "decays = true", "with W = I and ||F|| < 1 the norm itself is a Lyapunov function", |s| {
            let f = Mat::from_i64(&[&[1, -1, 0], &[0, 1, 1], &[1, 0, -1]]).scale(&rat(1, 3));
            let inst = LyapunovInstance::new(Mat::identity(3), f, PolyhedralSpace::l1(3)).map_err(err)?;
            let (rep, _) = lyapunov_certificate(&inst, &s.caps).map_err(err)?;
            Ok(Found {
                pass: rep.decays && rep.induced_norm < int(1),
                computed: format!("decays = {}, ‖Q‖ = {}", rep.decays, q(&rep.q_norm)),
            })
        }),
    ]
}

fn search_checks() -> Vec<CheckDef> {
    vec![
        def(
            "grid_search_l1_3",
            "best ratio = 1",
            "no operator on a plane of l1:3 needs a larger extension",
            |s| {
                let x = PolyhedralSpace::l1(3);
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0x93);
                let opts = SearchOptions { caps: s.caps.clone(), parallel: false };
                let mut ratios = Vec::new();
                for _ in 0..3 {
                    let y = Subspace::kernel_of(x.clone(), &random_plane(&mut rng)).map_err(err)?;
                    let r = se_lower_bound_search_with(&x, &y, &Strategy::Grid, 81, s.seed, &opts).map_err(err)?;
                    ratios.push(r.best_ratio);
                }
                let pass = ratios.iter().all(|r| *r == int(1));
                Ok(Found { pass, computed: ratios.iter().map(q).collect::<Vec<_>>().join(", ") })
            },
        ),
        def(
            "grid_search_l1_4",
            "best ratio ≥ 5/4",
            "the {-1/2, 0, 1/2} grid on the sum-zero hyperplane of l1:4 contains an obstruction of size 5/4",
            |s| {
                let x = PolyhedralSpace::l1(4);
                let y = Subspace::sum_zero(x.clone()).map_err(err)?;
                let opts = SearchOptions { caps: s.caps.clone(), parallel: true };
                let r = se_lower_bound_search_with(&x, &y, &Strategy::Grid, s.grid_budget, s.seed, &opts).map_err(err)?;
                Ok(Found {
                    pass: r.best_ratio >= rat(5, 4),
                    computed: format!("{} over {} candidates", q(&r.best_ratio), r.candidates_evaluated),
                })
            },
        ),
    ]
}

fn all_checks() -> Vec<CheckDef> {
    let mut defs = counterexample_checks();
    defs.push(r3_check());
    defs.extend(structure_checks());
    defs.extend(linf_checks());
    defs.extend(float_checks());
    defs.extend(lyapunov_checks());
    defs.extend(search_checks());
    defs
}

pub fn check_names() -> Vec<String> {
    let mut names: Vec<String> = all_checks().into_iter().map(|d| d.name).collect();
    names.sort();
    names
}

pub fn run_suite(settings: &SuiteSettings) -> VerificationReport {
    let defs = all_checks();
    let checks: Vec<Check> = if settings.parallel {
        defs.par_iter().map(|d| d.execute(settings)).collect()
    } else {
        defs.iter().map(|d| d.execute(settings)).collect()
    };
    VerificationReport::new(settings.seed, checks)
}
