//! One function per subcommand.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};

use selfext_core::extend::{extend_functional, lyapunov_certificate, min_norm_extension_with, LyapunovInstance};
use selfext_core::instances::by_name;
use selfext_core::json as cj;
use selfext_core::lp::{solve_lp, LpStatus};
use selfext_core::r3::r3_extend_traced;
use selfext_core::rational::{format_rational, parse_rational};
use selfext_core::se::{l1_to_linf_embedding, se_lower_bound_search_with, SearchOptions, Strategy};
use selfext_core::spaces::{subspace_dual_norm, subspace_operator_norm_with};
use selfext_core::{ExtensionProblem, Mat, PolyhedralSpace, QVec, Subspace};

use crate::args::{Cli, Command, LpCommand, ProblemArgs, StrategyArg};
use crate::config::Config;
use crate::output::{self, Summary};
use crate::suite::{run_suite, SuiteSettings};
use crate::{CliError, Output};

type CliResult<T> = Result<T, CliError>;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise")
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{} is not valid JSON: {e}", path.display())))
}

/// A shipped operator name or a JSON file holding a matrix or `{"op": …}`.
pub fn load_matrix(arg: &str) -> CliResult<Mat> {
    if let Some(ce) = by_name(arg) {
        return Ok(ce.op);
    }
    let doc = read_json(Path::new(arg))?;
    cj::check_schema(&doc)?;
    let m = doc.get("op").unwrap_or(&doc);
    Ok(cj::mat_from_json(m)?)
}

/// A comma-separated list, a JSON array of rational strings, or a `.json` file
/// holding one.
pub fn parse_vector(s: &str) -> CliResult<QVec> {
    let json = if s.ends_with(".json") {
        Some(read_json(Path::new(s))?)
    } else if s.trim_start().starts_with('[') {
        Some(serde_json::from_str(s).map_err(|e| CliError::Input(format!("bad vector: {e}")))?)
    } else {
        None
    };
    if let Some(v) = json {
        let items: Vec<String> =
            serde_json::from_value(v).map_err(|e| CliError::Input(format!("bad vector: {e}")))?;
        return items.iter().map(|t| parse_rational(t).map_err(CliError::from)).collect();
    }
    s.split(',').map(|t| parse_rational(t).map_err(CliError::from)).collect()
}

pub fn parse_space(arg: &str) -> CliResult<PolyhedralSpace> {
    if arg.ends_with(".json") {
        return Ok(cj::space_from_json(&read_json(Path::new(arg))?)?);
    }
    Ok(cj::parse_space_label(arg)?)
}

pub fn parse_subspace(arg: &str, space: &PolyhedralSpace) -> CliResult<Subspace> {
    if let Some(f) = arg.strip_prefix("kernel:") {
        return Ok(Subspace::kernel_of(space.clone(), &parse_vector(f)?)?);
    }
    if arg.ends_with(".json") {
        return Ok(cj::subspace_from_json(&read_json(Path::new(arg))?, space)?);
    }
    Ok(cj::subspace_by_name(arg, space)?)
}

fn build_problem(args: &ProblemArgs) -> CliResult<ExtensionProblem> {
    let doc = args.problem.as_deref().map(read_json).transpose()?;
    if let Some(d) = &doc {
        cj::check_schema(d)?;
    }
    let part = |key: &str| doc.as_ref().and_then(|d| d.get(key).cloned());
    let space = match (&args.space, part("space")) {
        (Some(s), _) => parse_space(s)?,
        (None, Some(v)) => cj::space_from_json(&v)?,
        (None, None) => return Err(CliError::Input("missing --space".into())),
    };
    let subspace = match (&args.subspace, part("subspace")) {
        (Some(s), _) => parse_subspace(s, &space)?,
        (None, Some(v)) => cj::subspace_from_json(&v, &space)?,
        (None, None) => Subspace::full(space.clone()),
    };
    let op = match (&args.op, part("op")) {
        (Some(s), _) => load_matrix(s)?,
        (None, Some(v)) => cj::mat_from_json(&v)?,
        (None, None) => return Err(CliError::Input("missing --op".into())),
    };
    Ok(ExtensionProblem::new(space, subspace, op)?)
}

fn load_config(cli: &Cli) -> CliResult<Config> {
    cli.config.as_deref().map(Config::load).transpose().map(Option::unwrap_or_default)
}

pub fn dispatch(cli: &Cli) -> CliResult<Output> {
    let config = load_config(cli)?;
    match &cli.command {
        Command::VerifyPaper { seed, overrides, parallel } => verify(&config, *seed, overrides, *parallel),
        Command::Opnorm { problem } => opnorm(&config, problem),
        Command::Extend { problem } => extend(&config, problem),
        Command::R3Extend { hyperplane, op, trace } => r3(hyperplane, op, *trace),
        Command::Lyapunov { input, norm, w, f } => lyapunov(&config, input.as_deref(), norm, w, f),
        Command::SeSearch { space, subspace, strategy, budget, seed, candidates, sequential } => search(
            &config,
            space,
            subspace,
            *strategy,
            *budget,
            *seed,
            candidates.as_deref(),
            *sequential,
        ),
        Command::Embed { from } => embed(from),
        Command::ExtendFunctional { space, subspace, functional } => extend_functional_cmd(space, subspace, functional),
        Command::Lp { command: LpCommand::Solve { input } } => lp(input),
    }
}

pub fn suite_settings(config: &Config, seed: Option<u64>, overrides: &[String], parallel: bool) -> CliResult<SuiteSettings> {
    let mut s = SuiteSettings { caps: config.caps(), ..SuiteSettings::default() };
    let b = &config.budgets;
    s.seed = seed.or(config.seed).unwrap_or(s.seed);
    s.parallel = parallel || config.parallel.unwrap_or(false);
    s.grid_budget = b.grid.unwrap_or(s.grid_budget);
    s.r3_instances = b.r3_instances.unwrap_or(s.r3_instances);
    s.functional_instances = b.functional_instances.unwrap_or(s.functional_instances);
    s.operator_instances = b.operator_instances.unwrap_or(s.operator_instances);
    s.embedding_vectors = b.embedding_vectors.unwrap_or(s.embedding_vectors);
    let mut map = BTreeMap::new();
    for o in overrides {
        let (name, file) = o
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("override {o:?} should look like r4=FILE")))?;
        let ce = by_name(name).ok_or_else(|| CliError::Input(format!("no shipped operator named {name:?}")))?;
        map.insert(ce.name.to_string(), load_matrix(file)?);
    }
    s.overrides = map;
    Ok(s)
}

fn verify(config: &Config, seed: Option<u64>, overrides: &[String], parallel: bool) -> CliResult<Output> {
    let settings = suite_settings(config, seed, overrides, parallel)?;
    let report = run_suite(&settings);
    Ok(Output { json: report.to_json(), human: report.table(), failed: !report.passed() })
}

fn opnorm(config: &Config, args: &ProblemArgs) -> CliResult<Output> {
    let p = build_problem(args)?;
    let norm = subspace_operator_norm_with(p.subspace(), p.op(), p.space(), &config.caps())?;
    let json = json!({
        "schema": cj::SCHEMA,
        "space": cj::space_to_json(p.space()),
        "norm": format_rational(&norm),
    });
    let human = Summary::new().row("space", p.space().label()).row("norm", output::rational(&norm)).render();
    Ok(Output { json: pretty(&json), human, failed: false })
}

fn certificate_lines(r: &selfext_core::ExtensionResult) -> String {
    let mut s = String::new();
    for it in &r.certificate.items {
        s.push_str(&format!(
            "  weight {}  vertex {}  functional {}\n",
            format_rational(&it.weight),
            output::vector(&it.vertex),
            output::vector(&it.functional)
        ));
    }
    s
}

fn extend(config: &Config, args: &ProblemArgs) -> CliResult<Output> {
    let p = build_problem(args)?;
    let r = min_norm_extension_with(&p, &config.caps())?;
    let mut h = Summary::new();
    h.row("space", p.space().label()).row("‖T‖", output::rational(&r.t_norm)).row("min ‖S‖", output::rational(&r.value));
    if let Some(ratio) = r.ratio() {
        h.row("ratio", output::rational(&ratio));
    }
    h.row("extension S", output::matrix(&r.extension));
    h.row("certificate bound", output::rational(&r.certificate.bound));
    h.row("certificate items", certificate_lines(&r));
    Ok(Output { json: pretty(&cj::result_to_json(&r)), human: h.render(), failed: false })
}

fn r3(hyperplane: &str, op: &str, trace: bool) -> CliResult<Output> {
    let f = parse_vector(hyperplane)?;
    let t = load_matrix(op)?;
    let out = r3_extend_traced(&f, &t)?;
    let mut h = Summary::new();
    h.row("case", format!("{:?}", out.case))
        .row("plane basis", output::matrix(&out.params.basis()))
        .row("‖T‖", output::rational(&out.result.t_norm))
        .row("‖S‖", output::rational(&out.result.value))
        .row("extension S", output::matrix(&out.result.extension));
    if trace {
        match &out.trace {
            Some(tr) => {
                let lines = [
                    ("alpha", &tr.alpha),
                    ("beta", &tr.beta),
                    ("gamma", &tr.gamma),
                    ("mu", &tr.mu),
                    ("s", &tr.s),
                    ("z", &tr.z),
                    ("u", &tr.u),
                    ("v", &tr.v),
                    ("w", &tr.w),
                ]
                .iter()
                .map(|(k, v)| format!("  {k:<5} {}\n", output::vector(v)))
                .collect::<String>();
                h.row("trace (T scaled to norm 1)", lines);
            }
            None => {
                h.row("trace", "none (degenerate case)");
            }
        }
    }
    Ok(Output { json: pretty(&cj::r3_outcome_to_json(&out, trace)), human: h.render(), failed: false })
}

fn lyapunov(
    config: &Config,
    input: Option<&Path>,
    norm: &Option<String>,
    w: &Option<String>,
    f: &Option<String>,
) -> CliResult<Output> {
    let inst = match input {
        Some(path) => cj::lyapunov_from_json(&read_json(path)?)?,
        None => {
            let missing = |flag: &str| CliError::Input(format!("give --input or all of --norm, --w, --f (missing {flag})"));
            let space = parse_space(norm.as_deref().ok_or_else(|| missing("--norm"))?)?;
            let w = match w.as_deref().ok_or_else(|| missing("--w"))? {
                "sum-zero" => Subspace::sum_zero(space.clone())?.basis().clone(),
                arg => load_matrix(arg)?,
            };
            let f = load_matrix(f.as_deref().ok_or_else(|| missing("--f"))?)?;
            LyapunovInstance::new(w, f, space)?
        }
    };
    let (rep, full) = lyapunov_certificate(&inst, &config.caps())?;
    let human = Summary::new()
        .row("decay rate of ‖Wx‖", output::rational(&rep.induced_norm))
        .row("smallest ‖Q‖", output::rational(&rep.q_norm))
        .row("contractive Q exists", rep.decays.to_string())
        .row("Q", output::matrix(&rep.q))
        .render();
    Ok(Output { json: pretty(&cj::lyapunov_report_to_json(&rep, &full)), human, failed: false })
}

#[allow(clippy::too_many_arguments)]
fn search(
    config: &Config,
    space: &str,
    subspace: &str,
    strategy: StrategyArg,
    budget: Option<usize>,
    seed: Option<u64>,
    candidates: Option<&Path>,
    sequential: bool,
) -> CliResult<Output> {
    let x = parse_space(space)?;
    let y = parse_subspace(subspace, &x)?;
    let strategy = match (strategy, candidates) {
        (StrategyArg::Grid, None) => Strategy::Grid,
        (StrategyArg::Random, None) => Strategy::Random,
        (StrategyArg::Fixed, Some(path)) => {
            let doc = read_json(path)?;
            let list = doc.get("candidates").unwrap_or(&doc);
            let mats = list
                .as_array()
                .ok_or_else(|| CliError::Input("candidates must be a list of matrices".into()))?
                .iter()
                .map(|m| cj::mat_from_json(m).map_err(CliError::from))
                .collect::<CliResult<Vec<_>>>()?;
            Strategy::Fixed(mats)
        }
        (StrategyArg::Fixed, None) => return Err(CliError::Input("--strategy fixed needs --candidates".into())),
        (_, Some(_)) => return Err(CliError::Input("--candidates only applies to --strategy fixed".into())),
    };
    let budget = budget.or(config.budgets.search).unwrap_or(1000);
    let seed = seed.or(config.seed).unwrap_or(0);
    let opts = SearchOptions { caps: config.caps(), parallel: !sequential };
    let r = se_lower_bound_search_with(&x, &y, &strategy, budget, seed, &opts)?;
    let mut h = Summary::new();
    h.row("space", r.space.clone())
        .row("strategy", format!("{:?}", r.strategy).to_lowercase())
        .row("candidates evaluated", r.candidates_evaluated.to_string())
        .row("best ratio", output::rational(&r.best_ratio));
    if let Some(w) = &r.witness {
        h.row("witness", output::matrix(w));
    }
    Ok(Output { json: pretty(&cj::search_report_to_json(&r)), human: h.render(), failed: false })
}

fn embed(from: &str) -> CliResult<Output> {
    let space = cj::parse_space_label(from)?;
    if !space.is_l1() {
        return Err(CliError::Input(format!("embed needs an l1 space, got {}", space.label())));
    }
    let e = l1_to_linf_embedding(space.dim())?;
    let json = json!({
        "schema": cj::SCHEMA,
        "from": space.label(),
        "to": PolyhedralSpace::linf(e.rows()).label(),
        "matrix": cj::mat_to_json(&e),
    });
    let human = Summary::new()
        .row("from", space.label())
        .row("to", PolyhedralSpace::linf(e.rows()).label())
        .row("matrix", output::matrix(&e))
        .render();
    Ok(Output { json: pretty(&json), human, failed: false })
}

fn extend_functional_cmd(space: &str, subspace: &str, f: &str) -> CliResult<Output> {
    let x = parse_space(space)?;
    let y = parse_subspace(subspace, &x)?;
    let f = parse_vector(f)?;
    let big = extend_functional(&y, &f)?;
    let norm = subspace_dual_norm(&y, &f)?;
    let big_norm = x.dual_norm(&big)?;
    let json = json!({
        "schema": cj::SCHEMA,
        "extension": cj::vec_to_json(&big),
        "norm": format_rational(&big_norm),
        "subspace_norm": format_rational(&norm),
    });
    let human = Summary::new()
        .row("extension F", output::vector(&big))
        .row("‖F‖", output::rational(&big_norm))
        .row("‖f‖ on Y", output::rational(&norm))
        .render();
    Ok(Output { json: pretty(&json), human, failed: big_norm != norm })
}

fn lp(input: &Path) -> CliResult<Output> {
    let program = cj::lp_from_json(&read_json(input)?)?;
    let sol = solve_lp(&program)?;
    let mut h = Summary::new();
    h.row("status", format!("{:?}", sol.status).to_lowercase());
    if sol.status == LpStatus::Optimal {
        h.row("objective", output::rational(&sol.objective_value))
            .row("x", output::vector(&sol.primal))
            .row("duals", output::vector(&sol.dual));
    }
    if let Some(ray) = &sol.ray {
        h.row("x", output::vector(&sol.primal)).row("improving ray", output::vector(&ray.0));
    }
    if sol.status == LpStatus::Infeasible {
        h.row("Farkas multipliers", output::vector(&sol.dual));
    }
    Ok(Output { json: pretty(&cj::lp_solution_to_json(&sol)), human: h.render(), failed: false })
}
