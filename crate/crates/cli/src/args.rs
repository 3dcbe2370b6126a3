//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "selfext", version, about = "Exact minimal-norm extensions of operators on polyhedral normed spaces")]
pub struct Cli {
    /// Write the JSON result here (`-` for standard output) instead of printing a table.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// TOML file overriding caps, budgets and seeds; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Where an operator, subspace or space comes from. Matrices are JSON files
/// (a list of columns, or an object with an `"op"` field) or the names of the
/// shipped instances `mt4`, `mt5`, `mt6`.
#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// `l1:N`, `linf:N`, or a JSON space file.
    #[arg(long)]
    pub space: Option<String>,

    /// `sum-zero`, `full`, `kernel:a,b,c`, or a JSON file with a basis.
    #[arg(long)]
    pub subspace: Option<String>,

    /// Operator on the subspace: a JSON matrix file or a shipped name.
    #[arg(long)]
    pub op: Option<String>,

    /// A complete problem document (space, subspace, op); other flags override its parts.
    #[arg(long, value_name = "FILE")]
    pub problem: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rerun every verification check and report pass/fail per check.
    VerifyPaper {
        #[arg(long)]
        seed: Option<u64>,
        /// Replace a shipped operator, e.g. `r4=tampered.json`.
        #[arg(long = "override", value_name = "NAME=FILE")]
        overrides: Vec<String>,
        /// Run independent checks concurrently.
        #[arg(long)]
        parallel: bool,
    },
    /// Operator norm of T on the subspace (or of a full matrix on the space).
    Opnorm {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Minimal-norm extension with its lower-bound certificate.
    Extend {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Norm-preserving extension from a plane of l1:3.
    R3Extend {
        /// The plane's functional: `1,2,-1`, a JSON array, or a `.json` file.
        #[arg(long, visible_alias = "functional", allow_hyphen_values = true)]
        hyperplane: String,
        /// 2×2 operator in the plane's basis, or 3×2 ambient images.
        #[arg(long)]
        op: String,
        /// Include the three-centre construction.
        #[arg(long)]
        trace: bool,
    },
    /// Smallest ‖Q‖ with QW = WF versus the decay rate of ‖Wx‖.
    Lyapunov {
        /// JSON document with `W`, `F` and `norm`.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long)]
        norm: Option<String>,
        /// Matrix file, or `sum-zero` for the sum-zero basis of the norm's space.
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        f: Option<String>,
    },
    /// Search for operators whose extensions must be larger than they are.
    SeSearch {
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "sum-zero")]
        subspace: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Grid)]
        strategy: StrategyArg,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON list of matrices for the fixed strategy.
        #[arg(long, value_name = "FILE")]
        candidates: Option<PathBuf>,
        /// Evaluate candidates on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// The isometric embedding of l1:N into linf:2^(N-1).
    Embed {
        #[arg(long)]
        from: String,
    },
    /// Norm-preserving extension of a functional given on the subspace basis.
    ExtendFunctional {
        #[arg(long)]
        space: String,
        #[arg(long)]
        subspace: String,
        /// Values on the basis vectors, e.g. `1,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        functional: String,
    },
    /// Linear programs.
    Lp {
        #[command(subcommand)]
        command: LpCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum LpCommand {
    /// Solve a JSON linear program exactly.
    Solve {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Grid,
    Random,
    Fixed,
}
