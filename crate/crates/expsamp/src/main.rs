//! `expsamp` — exponential-sampling reconstruction toolkit.
//!
//! All behavior lives in [`expsamp::cli`]; this binary only parses
//! arguments and forwards them.

use std::path::PathBuf;

use clap::Parser;

use expsamp::cli::{self, RawArgs};

/// Kantorovich exponential-sampling operators: benchmark tables, figure
/// profiles, invariant checks, saturation rates, and kernel moments.
#[derive(Debug, Parser)]
#[command(name = "expsamp", version, about)]
struct Args {
    /// One of: check, apply, table, figure, rate, moments.
    command: String,

    /// Kernel spec: `bspline:<order>` or `fejer:<alpha>:<c>`
    /// (alpha accepts `pi` and `2pi`).
    #[arg(long)]
    kernel: Option<String>,

    /// Signal spec: `f1`, `f2`, `log`, `const:<v>`, or inline JSON pieces.
    #[arg(long)]
    signal: Option<String>,

    /// Comma-separated rates (samples per log unit), e.g. `5,40,70`.
    #[arg(long)]
    w: Option<String>,

    /// Comma-separated evaluation points, e.g. `1.1,1.8,2.9,3.8`.
    #[arg(long)]
    x: Option<String>,

    /// Canned configuration: table1, table2, figure1, figure2.
    #[arg(long)]
    preset: Option<String>,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv or json (check and rate always emit json).
    #[arg(long)]
    format: Option<String>,

    /// Series truncation: `exact`, `terms:<K>`, or `tol:<T>`.
    #[arg(long)]
    truncation: Option<String>,

    /// Gauss-Legendre order for cell averages of non-polynomial pieces.
    #[arg(long)]
    quad: Option<usize>,
}

fn main() {
    let args = Args::parse();
    let raw = RawArgs {
        command: args.command,
        kernel: args.kernel,
        signal: args.signal,
        w: args.w,
        x: args.x,
        preset: args.preset,
        out: args.out,
        format: args.format,
        truncation: args.truncation,
        quad: args.quad,
    };
    std::process::exit(cli::run(&raw));
}
