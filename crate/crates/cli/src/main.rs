//! `confcap`: capacity-region bounds for the two-user interference channel
//! with conferencing transmitters.
//!
//! Exit status: 0 on success, 1 when a mathematical check fails, 2 on usage
//! errors, malformed input or I/O failures.

mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use confcap::gaussian::{
    check_gaussian_claims, inner_region, outer_region, per_bound_gap_check, ClaimsReport,
    GaussianParams, CLAIM_EPS, CONTAINMENT_EPS,
};
use confcap::harness::{gap_budget, run_sweep, SweepConfig, SweepMode, RECIPROCITY_TAU};
use confcap::ldc::{
    capacity_region, check_ldc_claims, rank_independence_check, scheme_search, scheme_verify,
    verify_lemmas_1_2, LdcParams, Relation,
};
use confcap::polytope::{eliminate, per_user_gap, HalfspaceSystem, Region2D};
use confcap::reciprocity::{bound_budgets, bound_order, reciprocity_gap};
use confcap::{Rational, Scalar};

use input::{list, read_json};

#[derive(Parser)]
#[command(name = "confcap", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Plot-ready CSV; `vertices` is accepted as an alias.
    #[value(alias = "vertices")]
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact capacity region of a deterministic channel.
    LdcRegion {
        #[command(flatten)]
        ldc: LdcInput,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check that the projected scheme region equals the capacity region and
    /// that the level identities hold.
    LdcVerify {
        #[command(flatten)]
        ldc: LdcInput,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Random search for a one-shot linear scheme achieving a rate pair.
    LdcSchemeSearch {
        #[command(flatten)]
        ldc: LdcInput,
        /// Target rates `r1,r2` in levels.
        #[arg(long, value_parser = list::<usize, 2>)]
        rates: [usize; 2],
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Outer region of a Gaussian channel.
    GaussOuter {
        #[command(flatten)]
        channel: GaussInput,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Inner (achievable) region of a Gaussian channel.
    GaussInner {
        #[command(flatten)]
        channel: GaussInput,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Per-user gap between the outer and inner regions, checked against
    /// log₂ 90.
    GaussGap {
        #[command(flatten)]
        channel: GaussInput,
        /// Allowed excess over log₂ 90.
        #[arg(long, default_value_t = CONTAINMENT_EPS)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Power-domain claims and per-bound gap budgets.
    GaussClaims {
        #[command(flatten)]
        channel: GaussInput,
        /// Allowed negative slack on each claim.
        #[arg(long, default_value_t = CLAIM_EPS)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Project a linear system (or re-reduce a region) given as JSON.
    Fme {
        /// Inline JSON.
        #[arg(long, conflicts_with = "file")]
        json: Option<String>,
        /// JSON file, `-` for stdin.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Variables to keep; projecting onto two gives a region.
        #[arg(long, value_delimiter = ',', default_value = "R1,R2")]
        keep: Vec<String>,
        /// Read region input in exact arithmetic.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare the outer regions of a channel and its reciprocal.
    Reciprocity {
        #[command(flatten)]
        channel: GaussInput,
        /// Allowed excess over the 4/3-bit gap.
        #[arg(long, default_value_t = CONTAINMENT_EPS)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Seeded random sweep. JSON output is the summary; CSV output is one row
    /// per sample.
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepModeArg::Gaussian)]
        mode: SweepModeArg,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write per-sample CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Direct-link power range `lo,hi` in dB.
        #[arg(long, value_parser = list::<f64, 2>, default_value = "0,60")]
        snr_db: [f64; 2],
        /// Cross-link power range `lo,hi` in dB.
        #[arg(long, value_parser = list::<f64, 2>, default_value = "0,60")]
        inr_db: [f64; 2],
        /// Largest conferencing capacity in bits.
        #[arg(long, default_value_t = 10.0)]
        cb_max: f64,
        /// Largest deterministic level.
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        /// Largest deterministic conferencing capacity.
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        /// Claim tolerance.
        #[arg(long, default_value_t = CLAIM_EPS)]
        tol: f64,
        /// Tolerance on gaps and containment.
        #[arg(long, default_value_t = CONTAINMENT_EPS)]
        gap_tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepModeArg {
    Ldc,
    Gaussian,
    Reciprocity,
}

impl From<SweepModeArg> for SweepMode {
    fn from(m: SweepModeArg) -> Self {
        match m {
            SweepModeArg::Ldc => SweepMode::Ldc,
            SweepModeArg::Gaussian => SweepMode::Gaussian,
            SweepModeArg::Reciprocity => SweepMode::Reciprocity,
        }
    }
}

#[derive(Args)]
struct LdcInput {
    /// Levels `n11,n12,n21,n22`.
    #[arg(long, value_parser = list::<u32, 4>, required_unless_present_any = ["json", "file"])]
    n: Option<[u32; 4]>,
    /// Conferencing capacities `k12,k21`; zero when omitted.
    #[arg(long, value_parser = list::<u32, 2>)]
    k: Option<[u32; 2]>,
    /// Inline JSON `{"n": [..], "k": [..]}`.
    #[arg(long, conflicts_with_all = ["n", "k", "file"])]
    json: Option<String>,
    /// JSON file, `-` for stdin.
    #[arg(long, conflicts_with_all = ["n", "k"])]
    file: Option<PathBuf>,
}

impl LdcInput {
    fn params(&self) -> Result<LdcParams> {
        if let Some(n) = self.n {
            return Ok(LdcParams::new(n, self.k.unwrap_or([0, 0])));
        }
        let v = read_json(self.json.as_deref(), self.file.as_deref())?;
        serde_json::from_value(v).context(
            "deterministic channel must look like {\"n\": [4 levels], \"k\": [2 capacities]}",
        )
    }
}

#[derive(Args)]
struct GaussInput {
    /// Inline JSON: `{"h": [[re, im] x4], "cb": [cb12, cb21]}` or
    /// `{"snr_db": .., "inr_db": .., "phase": .., "cb": ..}`.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    json: Option<String>,
    /// JSON file, `-` for stdin.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl GaussInput {
    fn params(&self) -> Result<GaussianParams> {
        let v = read_json(self.json.as_deref(), self.file.as_deref())?;
        Ok(GaussianParams::from_json(&v)?)
    }
}

/// What a subcommand produced.
struct Report {
    json: Value,
    csv: Option<String>,
    passed: bool,
}

impl Report {
    fn ok(json: Value, csv: String) -> Self {
        Report {
            json,
            csv: Some(csv),
            passed: true,
        }
    }
}

fn csv_table<R: serde::Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn region_report<S: Scalar>(r: &Region2D<S>) -> Report {
    Report::ok(r.to_json(), r.vertices_csv())
}

fn claim_rows<'a>(
    group: &'a str,
    r: &'a ClaimsReport,
) -> impl Iterator<Item = (&'a str, &'a str, f64, f64, f64, bool)> + 'a {
    r.entries
        .iter()
        .map(move |e| (group, e.name.as_str(), e.lhs, e.rhs, e.slack, e.pass))
}

fn ldc_verify(p: &LdcParams) -> Result<Report> {
    let projection = verify_lemmas_1_2(p);
    let claims = check_ldc_claims(p);
    let (independent, levels, rank) = rank_independence_check(p);
    let passed = projection && claims.all_hold() && independent;
    for c in claims.violations() {
        eprintln!("claim violated: {} ({} vs {})", c.name, c.lhs, c.rhs);
    }
    if !projection {
        eprintln!("projected scheme region differs from the capacity region");
    }
    if !independent {
        eprintln!("stacked cooperative levels have rank {rank}, expected {levels}");
    }
    let json = json!({
        "params": p,
        "full_rank": p.full_rank(),
        "projection_matches": projection,
        "claims": claims.checks,
        "rank_independence": {"holds": independent, "levels": levels, "rank": rank},
        "pass": passed,
    });
    let mut rows: Vec<[String; 5]> = claims
        .checks
        .iter()
        .map(|c| {
            let rel = match c.relation {
                Relation::Eq => "eq",
                Relation::Ge => "ge",
            };
            [
                c.name.clone(),
                c.lhs.to_string(),
                c.rhs.to_string(),
                rel.into(),
                c.holds.to_string(),
            ]
        })
        .collect();
    rows.push([
        "rank independence".into(),
        levels.to_string(),
        rank.to_string(),
        "eq".into(),
        independent.to_string(),
    ]);
    rows.push([
        "projection matches".into(),
        String::new(),
        String::new(),
        "eq".into(),
        projection.to_string(),
    ]);
    let csv = format!("check,lhs,rhs,relation,holds\n{}", csv_table(rows)?);
    Ok(Report {
        json,
        csv: Some(csv),
        passed,
    })
}

fn ldc_scheme_search(
    p: &LdcParams,
    [r1, r2]: [usize; 2],
    trials: u64,
    seed: u64,
) -> Result<Report> {
    let found = scheme_search(p, r1, r2, trials, seed)?;
    let verified = match &found {
        Some(s) => scheme_verify(p, s, r1, r2)?,
        None => false,
    };
    if found.is_none() {
        eprintln!("no scheme for ({r1}, {r2}) within {trials} trials");
    }
    let json = json!({
        "params": p,
        "rates": [r1, r2],
        "trials": trials,
        "seed": seed,
        "found": found.is_some(),
        "verified": verified,
        "scheme": found.as_ref().map(|s| s.to_json()),
    });
    let csv = format!(
        "r1,r2,trials,seed,found,verified\n{r1},{r2},{trials},{seed},{},{verified}\n",
        found.is_some()
    );
    Ok(Report {
        json,
        csv: Some(csv),
        passed: found.is_none() || verified,
    })
}

fn gauss_gap(p: &GaussianParams, tol: f64) -> Result<Report> {
    let gap = per_user_gap(&outer_region(p), &inner_region(p));
    let budget = gap_budget();
    let passed = gap.converged && gap.tau <= budget + tol;
    if !passed {
        eprintln!("per-user gap {} exceeds log2 90 = {budget}", gap.tau);
    }
    let mut json = gap.to_json();
    json["budget"] = json!(budget);
    json["pass"] = json!(passed);
    let csv = csv_table([(
        gap.tau,
        gap.witness.0,
        gap.witness.1,
        gap.converged,
        budget,
        passed,
    )])?;
    Ok(Report {
        json,
        csv: Some(format!(
            "tau,witness_r1,witness_r2,converged,budget,pass\n{csv}"
        )),
        passed,
    })
}

fn gauss_claims(p: &GaussianParams, tol: f64) -> Result<Report> {
    let claims = check_gaussian_claims(p, tol);
    let budgets = per_bound_gap_check(p);
    for e in claims.failures().chain(budgets.failures()) {
        eprintln!("failed: {} (slack {:e})", e.name, e.slack);
    }
    let passed = claims.all_pass() && budgets.all_pass();
    let csv = csv_table(claim_rows("claim", &claims).chain(claim_rows("budget", &budgets)))?;
    Ok(Report {
        json: json!({"claims": claims.entries, "budgets": budgets.entries, "pass": passed}),
        csv: Some(format!("group,name,lhs,rhs,slack,pass\n{csv}")),
        passed,
    })
}

fn reciprocity(p: &GaussianParams, tol: f64) -> Result<Report> {
    let rep = reciprocity_gap(p);
    let budgets = bound_budgets(p);
    let order = bound_order(p);
    let reverse_ok = rep.reverse.gap.converged && rep.reverse.gap.tau <= RECIPROCITY_TAU + tol;
    let passed = reverse_ok && budgets.all_pass();
    if !reverse_ok {
        eprintln!("reverse gap {} exceeds 4/3", rep.reverse.gap.tau);
    }
    if rep.forward.gap.tau > tol {
        eprintln!(
            "finding: forward gap {} (binding {})",
            rep.forward.gap.tau,
            rep.forward.binding.join(";")
        );
    }
    for e in order.failures() {
        eprintln!("finding: {} fails by {:e}", e.name, -e.slack);
    }
    for e in budgets.failures() {
        eprintln!("failed: {} (slack {:e})", e.name, e.slack);
    }
    let mut json = rep.to_json();
    json["tau_budget"] = json!(RECIPROCITY_TAU);
    json["bound_budgets"] = json!(budgets.entries);
    json["bound_order"] = json!(order.entries);
    json["pass"] = json!(passed);
    let dir = |name: &'static str, d: &confcap::reciprocity::DirectedGap| {
        (
            name,
            d.gap.tau,
            d.gap.witness.0,
            d.gap.witness.1,
            d.gap.converged,
            d.binding.join(";"),
        )
    };
    let csv = csv_table([dir("forward", &rep.forward), dir("reverse", &rep.reverse)])?;
    Ok(Report {
        json,
        csv: Some(format!(
            "direction,tau,witness_r1,witness_r2,converged,binding\n{csv}"
        )),
        passed,
    })
}

fn fme_report<S: Scalar>(v: &Value, keep: &[String]) -> Result<Report> {
    if v.get("variables").is_none() {
        let r = Region2D::<S>::from_json(v, S::default_eps())?;
        return Ok(region_report(&r));
    }
    let sys = HalfspaceSystem::<S>::from_json(v)?;
    let keep_idx = keep
        .iter()
        .map(|k| sys.var_index(k))
        .collect::<Result<Vec<_>, _>>()?;
    let drop: Vec<&str> = sys
        .variables()
        .iter()
        .enumerate()
        .filter(|(i, _)| !keep_idx.contains(i))
        .map(|(_, v)| v.as_str())
        .collect();
    let (projected, stats) = eliminate(&sys, &drop)?;
    eprintln!(
        "eliminated {} variables ({} by substitution), peak {} rows, {} rows left",
        drop.len(),
        stats.substituted,
        stats.peak_rows,
        stats.final_rows
    );
    if let [a, b] = keep {
        let region = Region2D::from_system(&projected, [a, b])?;
        let mut rep = region_report(&region);
        rep.json["stats"] = serde_json::to_value(&stats)?;
        return Ok(rep);
    }
    let vars = projected.variables().to_vec();
    let mut csv = vars.join(",");
    csv.push_str(",rhs\n");
    for r in projected.rows() {
        let cells: Vec<String> = r
            .coeffs
            .iter()
            .chain([&r.rhs])
            .map(|x| x.to_string())
            .collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    Ok(Report::ok(projected.to_json(), csv))
}

fn sweep(cfg: SweepConfig, out: Option<PathBuf>, format: Format) -> Result<Report> {
    let outcome = run_sweep(&cfg)?;
    if let Some(path) = &out {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        outcome.write_csv(BufWriter::new(f))?;
    }
    let s = &outcome.summary;
    let worst = s.worst_gap.as_ref().map_or(String::from("-"), |w| {
        format!("{} at sample {}", w.value, w.index)
    });
    eprintln!(
        "{} samples, {} failures, {} findings, worst gap {worst}, {:.2}s",
        s.count,
        s.failures.len(),
        s.findings.len(),
        s.elapsed_s
    );
    let csv = match format {
        Format::Csv => Some(outcome.csv_string()?),
        Format::Json => None,
    };
    Ok(Report {
        json: serde_json::to_value(s)?,
        csv,
        passed: s.passed(),
    })
}

fn run(cmd: Command) -> Result<(Report, Format)> {
    Ok(match cmd {
        Command::LdcRegion { ldc, format } => {
            (region_report(&capacity_region(&ldc.params()?)), format)
        }
        Command::LdcVerify { ldc, format } => (ldc_verify(&ldc.params()?)?, format),
        Command::LdcSchemeSearch {
            ldc,
            rates,
            trials,
            seed,
            format,
        } => (
            ldc_scheme_search(&ldc.params()?, rates, trials, seed)?,
            format,
        ),
        Command::GaussOuter { channel, format } => {
            (region_report(&outer_region(&channel.params()?)), format)
        }
        Command::GaussInner { channel, format } => {
            (region_report(&inner_region(&channel.params()?)), format)
        }
        Command::GaussGap {
            channel,
            tol,
            format,
        } => (gauss_gap(&channel.params()?, check_tol(tol)?)?, format),
        Command::GaussClaims {
            channel,
            tol,
            format,
        } => (gauss_claims(&channel.params()?, check_tol(tol)?)?, format),
        Command::Fme {
            json,
            file,
            keep,
            exact,
            format,
        } => {
            let v = read_json(json.as_deref(), file.as_deref())?;
            let exact = exact || v.get("mode").and_then(Value::as_str) == Some("exact");
            let rep = if exact {
                fme_report::<Rational>(&v, &keep)?
            } else {
                fme_report::<f64>(&v, &keep)?
            };
            (rep, format)
        }
        Command::Reciprocity {
            channel,
            tol,
            format,
        } => (reciprocity(&channel.params()?, check_tol(tol)?)?, format),
        Command::Sweep {
            mode,
            count,
            seed,
            out,
            snr_db,
            inr_db,
            cb_max,
            n_max,
            k_max,
            tol,
            gap_tol,
            format,
        } => {
            let cfg = SweepConfig {
                snr_db,
                inr_db,
                cb_max,
                n_max,
                k_max,
                claim_tol: tol,
                containment_tol: gap_tol,
                ..SweepConfig::new(mode.into(), count, seed)
            };
            (sweep(cfg, out, format)?, format)
        }
    })
}

fn check_tol(tol: f64) -> Result<f64> {
    if !(tol >= 0.0 && tol.is_finite()) {
        bail!("--tol must be a finite nonnegative number");
    }
    Ok(tol)
}

fn emit(rep: &Report, format: Format) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match (format, &rep.csv) {
        (Format::Csv, Some(csv)) => out.write_all(csv.as_bytes())?,
        _ => {
            serde_json::to_writer_pretty(&mut out, &rep.json)?;
            writeln!(out)?;
        }
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (rep, format) = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&rep, format) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(2);
        }
    }
    if rep.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
