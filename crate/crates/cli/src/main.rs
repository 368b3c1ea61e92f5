//! `prelie`: trees, characters, homology tables, series and the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prelie_core::homology::{
    homology_table, row_homology, Caps, HomologyOptions, RankMethod, RowHomology,
};
use prelie_core::rational::fmt_q;
use prelie_core::series::{self, Poly2, Series2, SeriesJson};
use prelie_core::smodule::{self, Generator};
use prelie_core::symfunc::{schur_decompose, Partition, SymF};
use prelie_core::trees::{for_each_tree, Label, MAX_ENUM_LABELS};
use prelie_core::verify::{run_verify, Profile, VerifyOptions, VerifyReport};
use prelie_core::Q;

const TREE_LIST_CAP: usize = 6;

#[derive(Parser, Debug)]
#[command(
    name = "prelie",
    version,
    about = "Exact computations around the pre-Lie operad"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest n for `verify`.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Degree for `char` and `series`, largest degree for `verify`.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Size profile for `verify`.
    #[arg(long, global = true, value_enum)]
    profile: Option<ProfileArg>,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Lift the default size caps.
    #[arg(long, global = true)]
    unsafe_max: bool,
    /// Include elapsed milliseconds in the verify report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TreeAction {
    Count,
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Basis {
    P,
    Schur,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Modular,
    FractionFree,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesKind {
    /// n^{n-1} x^n/n!
    Fw,
    /// (n-1)^{n-1} x^n/n!
    Fx,
    /// e^{(s-t) f_W}
    Bicomplex,
    /// e^{(s-1) f_W}
    Euler,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count or list the rooted trees on {1..n}.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(value_enum)]
        action: TreeAction,
    },
    /// A cycle index (zw, zx, zwhat, zlambdaw) in degree `--degree`.
    Char {
        which: String,
        #[arg(long, value_enum, default_value = "p")]
        basis: Basis,
    },
    /// Homology of the rows of the bicomplex on n labels.
    Homology {
        #[arg(long)]
        n: usize,
        /// Only the row with this p.
        #[arg(long, conflicts_with = "table")]
        row: Option<usize>,
        /// Every row (the default).
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value = "modular")]
        method: Method,
    },
    /// Exponential generating series, one `n: <coefficient>` line per degree.
    Series {
        #[arg(value_enum, default_value = "fw")]
        kind: SeriesKind,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, hide = true)]
        tamper: bool,
    },
}

/// A failure that should exit with code 1 after printing the output.
struct Failed;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((text, failed)) => {
            print!("{text}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if failed.is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<(String, Option<Failed>)> {
    match &cli.command {
        Command::Trees { n, action } => Ok((cmd_trees(cli, *n, *action)?, None)),
        Command::Char { which, basis } => Ok((cmd_char(cli, which, *basis)?, None)),
        Command::Homology { n, row, method, .. } => {
            Ok((cmd_homology(cli, *n, *row, *method)?, None))
        }
        Command::Series { kind } => Ok((cmd_series(cli, *kind)?, None)),
        Command::Verify { tamper } => cmd_verify(cli, *tamper),
    }
}

fn to_json(v: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_trees(cli: &Cli, n: usize, action: TreeAction) -> anyhow::Result<String> {
    let cap = match action {
        TreeAction::Count => MAX_ENUM_LABELS,
        TreeAction::List => TREE_LIST_CAP,
    };
    if n == 0 {
        bail!("n must be at least 1");
    }
    if n > cap && !(cli.unsafe_max && n <= MAX_ENUM_LABELS) {
        bail!("n = {n} exceeds the cap {cap} for `trees {action:?}`");
    }
    let labels: Vec<Label> = (1..=n as u32).map(|l| l as Label).collect();
    match action {
        TreeAction::Count => {
            let mut count = 0u64;
            for_each_tree(&labels, |_| count += 1)?;
            if cli.json {
                to_json(&json!({ "n": n, "count": count }))
            } else {
                Ok(format!("{count}\n"))
            }
        }
        TreeAction::List => {
            let mut trees = Vec::new();
            for_each_tree(&labels, |t| trees.push(t.to_string()))?;
            if cli.json {
                to_json(&json!({ "n": n, "trees": trees }))
            } else {
                Ok(trees.iter().map(|t| format!("{t}\n")).collect())
            }
        }
    }
}

fn generator_name(g: Generator) -> &'static str {
    match g {
        Generator::Zw => "zw",
        Generator::Zx => "zx",
        Generator::Zwhat => "zwhat",
        Generator::ZlambdaW => "zlambdaw",
    }
}

fn schur_json(dec: &std::collections::BTreeMap<Partition, Q>) -> Value {
    Value::Array(
        dec.iter()
            .map(|(mu, m)| json!({ "partition": mu.parts(), "multiplicity": fmt_q(m) }))
            .collect(),
    )
}

fn schur_text(dec: &std::collections::BTreeMap<Partition, Q>) -> String {
    let parts: Vec<String> = dec
        .iter()
        .map(|(mu, m)| format!("{}*s{mu}", fmt_q(m)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn cmd_char(cli: &Cli, which: &str, basis: Basis) -> anyhow::Result<String> {
    let g: Generator = which.parse()?;
    let d = cli.degree.context("`char` needs --degree")?;
    let name = generator_name(g);
    // Z_{Λ∘W} carries the parameter t: one symmetric function per power of t
    let pieces: Vec<(Option<usize>, SymF)> = match g {
        Generator::Zw => vec![(None, smodule::zw(d)?.component(d))],
        Generator::Zx => vec![(None, smodule::zx_formula(d)?.component(d))],
        Generator::Zwhat => vec![(None, smodule::zwhat(d)?.component(d))],
        Generator::ZlambdaW => {
            let f = smodule::zlambda_w(d)?;
            (0..=f.max_t_power())
                .map(|j| (Some(j), f.t_coefficient(j).component(d)))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        }
    };
    let mut json_pieces = Vec::new();
    let mut text = String::new();
    for (tp, f) in &pieces {
        let (value, line) = match basis {
            Basis::P => (json!(f.to_json().terms), f.to_string()),
            Basis::Schur => {
                let dec = schur_decompose(f, d)?;
                (schur_json(&dec), schur_text(&dec))
            }
        };
        match tp {
            Some(j) => {
                json_pieces.push(json!({ "t_power": j, "terms": value }));
                writeln!(text, "t^{j}: {line}")?;
            }
            None => {
                json_pieces.push(json!({ "terms": value }));
                writeln!(text, "{line}")?;
            }
        }
    }
    if pieces.is_empty() {
        text.push_str("0\n");
    }
    if cli.json {
        let basis = match basis {
            Basis::P => "p",
            Basis::Schur => "schur",
        };
        to_json(&json!({
            "generator": name,
            "degree": d,
            "basis": basis,
            "components": json_pieces,
        }))
    } else {
        Ok(text)
    }
}

fn row_json(row: &RowHomology) -> Value {
    json!({
        "p": row.p,
        "dims_by_q": row.dims_by_q,
        "concentrated_at": row.concentrated_at(),
    })
}

fn row_text(row: &RowHomology) -> String {
    let dims: Vec<String> = row.dims_by_q.iter().map(usize::to_string).collect();
    let conc = match row.concentrated_at() {
        Some(q) => format!("concentrated at q={q}"),
        None if row.dims_by_q.iter().all(|&h| h == 0) => "zero".into(),
        None => "not concentrated".into(),
    };
    format!("p={}: [{}] {conc}\n", row.p, dims.join(", "))
}

fn cmd_homology(cli: &Cli, n: usize, row: Option<usize>, method: Method) -> anyhow::Result<String> {
    let opts = HomologyOptions {
        method: match method {
            Method::Modular => RankMethod::Modular,
            Method::FractionFree => RankMethod::FractionFree,
        },
        caps: if cli.unsafe_max {
            Caps::unlimited()
        } else {
            Caps::default()
        },
    };
    if n == 0 {
        bail!("n must be at least 1");
    }
    let rows = match row {
        Some(p) => {
            if p > n {
                bail!("row p = {p} exceeds n = {n}");
            }
            vec![row_homology(n, p, &opts)?]
        }
        None => homology_table(n, &opts)?.rows,
    };
    if cli.json {
        to_json(&json!({ "n": n, "rows": rows.iter().map(row_json).collect::<Vec<_>>() }))
    } else {
        let mut text = format!("n={n}\n");
        for r in &rows {
            text.push_str(&row_text(r));
        }
        Ok(text)
    }
}

fn cmd_series(cli: &Cli, kind: SeriesKind) -> anyhow::Result<String> {
    let d = cli.degree.unwrap_or(8);
    let s: Series2 = match kind {
        SeriesKind::Fw => series::f_w(d)?,
        SeriesKind::Fx => series::f_x(d)?,
        SeriesKind::Bicomplex | SeriesKind::Euler => {
            if d > series::SYMBOLIC_CAP && !cli.unsafe_max {
                bail!(
                    "degree {d} exceeds the cap {} for symbolic series",
                    series::SYMBOLIC_CAP
                );
            }
            let c = match kind {
                SeriesKind::Bicomplex => Poly2::s().sub(&Poly2::t()),
                _ => Poly2::s().sub(&Poly2::one()),
            };
            series::exp_series(&series::f_w(d)?.scaled(&c))?
        }
    };
    if cli.json {
        to_json(&SeriesJson::from(&s))
    } else {
        Ok(s.to_string())
    }
}

fn verify_text(r: &VerifyReport) -> String {
    let mut text = format!(
        "suite {} profile {} max_n {} max_degree {}\n",
        r.suite_version, r.profile, r.max_n, r.max_degree
    );
    for c in &r.checks {
        let status = if c.status == prelie_core::report::Status::Ok {
            "ok  "
        } else {
            "FAIL"
        };
        let _ = write!(text, "{status} {}", c.name);
        if let Some(ms) = c.elapsed_ms {
            let _ = write!(text, " ({ms} ms)");
        }
        text.push('\n');
    }
    match &r.first_failure {
        None => text.push_str("all checks passed\n"),
        Some(name) => {
            let _ = writeln!(text, "first failure: {name}");
            if let Some(c) = r.check(name) {
                let _ = writeln!(
                    text,
                    "{}",
                    serde_json::to_string(&c.details).unwrap_or_default()
                );
            }
        }
    }
    text
}

fn cmd_verify(cli: &Cli, tamper: bool) -> anyhow::Result<(String, Option<Failed>)> {
    let opts = VerifyOptions {
        profile: match cli.profile {
            Some(ProfileArg::Full) => Profile::Full,
            _ => Profile::Quick,
        },
        max_n: cli.max_n,
        max_degree: cli.degree,
        unsafe_max: cli.unsafe_max,
        timings: cli.timings,
        tamper,
    };
    let report = run_verify(&opts)?;
    let failed = (!report.passed()).then_some(Failed);
    let text = if cli.json {
        to_json(&report)?
    } else {
        verify_text(&report)
    };
    Ok((text, failed))
}
