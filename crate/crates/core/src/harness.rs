//! Seeded random sweeps over channel parameters.
//!
//! Sample `i` draws from a ChaCha8 stream keyed by `(seed, i)`, so results do
//! not depend on how samples are scheduled across threads.

use std::f64::consts::TAU;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::gaussian::{
    check_gaussian_claims, inner_region, outer_region, per_bound_gap_check, ClaimsReport,
    GaussianParams,
};
use crate::ldc::{check_ldc_claims, rank_independence_check, verify_lemmas_1_2, LdcParams};
use crate::polytope::per_user_gap;
use crate::reciprocity::{bound_budgets, bound_order, reciprocity_gap};

/// `log₂ 90`, the per-user gap certified between the Gaussian bounds.
pub fn gap_budget() -> f64 {
    90f64.log2()
}

/// Per-user gap between the two outer regions of reciprocal channels.
pub const RECIPROCITY_TAU: f64 = 4.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Ldc,
    Gaussian,
    Reciprocity,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Ldc => "ldc",
            SweepMode::Gaussian => "gaussian",
            SweepMode::Reciprocity => "reciprocity",
        })
    }
}

impl FromStr for SweepMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ldc" => Ok(SweepMode::Ldc),
            "gaussian" => Ok(SweepMode::Gaussian),
            "reciprocity" => Ok(SweepMode::Reciprocity),
            _ => Err(HarnessError::Config(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error("writing sample {index}: {source}")]
    Write { index: usize, source: csv::Error },
    #[error("flushing output: {0}")]
    Flush(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub count: usize,
    pub seed: u64,
    /// Direct-link power range in dB.
    pub snr_db: [f64; 2],
    /// Cross-link power range in dB.
    pub inr_db: [f64; 2],
    /// Largest conferencing capacity in bits.
    pub cb_max: f64,
    /// Largest deterministic level.
    pub n_max: u32,
    /// Largest deterministic conferencing capacity.
    pub k_max: u32,
    pub claim_tol: f64,
    pub containment_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: SweepMode::Gaussian,
            count: 1000,
            seed: 0,
            snr_db: [0.0, 60.0],
            inr_db: [0.0, 60.0],
            cb_max: 10.0,
            n_max: 6,
            k_max: 3,
            claim_tol: crate::gaussian::CLAIM_EPS,
            containment_tol: crate::gaussian::CONTAINMENT_EPS,
        }
    }
}

impl SweepConfig {
    pub fn new(mode: SweepMode, count: usize, seed: u64) -> Self {
        SweepConfig {
            mode,
            count,
            seed,
            ..SweepConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.count == 0 {
            return bad("count must be at least 1");
        }
        for (name, [lo, hi]) in [("snr_db", self.snr_db), ("inr_db", self.inr_db)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(HarnessError::Config(format!(
                    "{name} range [{lo}, {hi}] is empty or not finite"
                )));
            }
        }
        if !(self.cb_max.is_finite() && self.cb_max >= 0.0) {
            return bad("cb_max must be a finite nonnegative number");
        }
        if self.n_max > 60 || self.k_max > 60 {
            return bad("deterministic levels are limited to 60");
        }
        if !(self.claim_tol >= 0.0 && self.containment_tol >= 0.0) {
            return bad("tolerances must be nonnegative");
        }
        Ok(())
    }
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn uniform<R: Rng>(rng: &mut R, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Gains uniform in dB with uniform phases; `cb + 1` log-uniform on
/// `[1, cb_max + 1]`.
pub fn gaussian_sample(cfg: &SweepConfig, index: usize) -> GaussianParams {
    let mut rng = sample_rng(cfg.seed, index);
    let mut gain = |range: [f64; 2]| {
        let amp = 10f64.powf(uniform(&mut rng, range) / 20.0);
        let phase = uniform(&mut rng, [0.0, TAU]);
        Complex64::from_polar(amp, phase)
    };
    let h = [
        gain(cfg.snr_db),
        gain(cfg.inr_db),
        gain(cfg.inr_db),
        gain(cfg.snr_db),
    ];
    let top = (cfg.cb_max + 1.0).log2();
    let mut cb = || (2f64.powf(uniform(&mut rng, [0.0, top])) - 1.0).max(0.0);
    let cb = [cb(), cb()];
    GaussianParams::new(h, cb)
}

pub fn ldc_sample(cfg: &SweepConfig, index: usize) -> LdcParams {
    let mut rng = sample_rng(cfg.seed, index);
    let mut n = || rng.gen_range(0..=cfg.n_max);
    let levels = [n(), n(), n(), n()];
    let mut k = || rng.gen_range(0..=cfg.k_max);
    let caps = [k(), k()];
    LdcParams::new(levels, caps)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LdcRecord {
    pub index: usize,
    pub n11: u32,
    pub n12: u32,
    pub n21: u32,
    pub n22: u32,
    pub k12: u32,
    pub k21: u32,
    pub full_rank: bool,
    pub projection_matches: bool,
    pub claims_hold: bool,
    pub rank_independent: bool,
    pub pass: bool,
}

#[derive(Serialize)]
struct Index {
    index: usize,
}

/// Channel columns shared by the Gaussian and reciprocity schemas.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelColumns {
    pub h11_re: f64,
    pub h11_im: f64,
    pub h12_re: f64,
    pub h12_im: f64,
    pub h21_re: f64,
    pub h21_im: f64,
    pub h22_re: f64,
    pub h22_im: f64,
    pub cb12: f64,
    pub cb21: f64,
}

impl ChannelColumns {
    fn of(p: &GaussianParams) -> Self {
        ChannelColumns {
            h11_re: p.h11.re,
            h11_im: p.h11.im,
            h12_re: p.h12.re,
            h12_im: p.h12.im,
            h21_re: p.h21.re,
            h21_im: p.h21.im,
            h22_re: p.h22.re,
            h22_im: p.h22.im,
            cb12: p.cb12,
            cb21: p.cb21,
        }
    }

    pub fn params(&self) -> GaussianParams {
        let c = Complex64::new;
        GaussianParams::new(
            [
                c(self.h11_re, self.h11_im),
                c(self.h12_re, self.h12_im),
                c(self.h21_re, self.h21_im),
                c(self.h22_re, self.h22_im),
            ],
            [self.cb12, self.cb21],
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianRecord {
    #[serde(skip)]
    pub index: usize,
    #[serde(skip)]
    pub channel: ChannelColumns,
    pub tau: f64,
    pub converged: bool,
    pub inner_in_outer: bool,
    pub claim_min_slack: f64,
    pub claim_min_name: String,
    pub budget_min_slack: f64,
    pub budget_min_name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReciprocityRecord {
    #[serde(skip)]
    pub index: usize,
    #[serde(skip)]
    pub channel: ChannelColumns,
    pub forward_tau: f64,
    pub forward_binding: String,
    pub reverse_tau: f64,
    pub reverse_binding: String,
    pub dominance_min_slack: f64,
    pub dominance_min_name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SampleRecord {
    Ldc(LdcRecord),
    Gaussian(GaussianRecord),
    Reciprocity(ReciprocityRecord),
}

impl SampleRecord {
    pub fn index(&self) -> usize {
        match self {
            SampleRecord::Ldc(r) => r.index,
            SampleRecord::Gaussian(r) => r.index,
            SampleRecord::Reciprocity(r) => r.index,
        }
    }

    pub fn pass(&self) -> bool {
        match self {
            SampleRecord::Ldc(r) => r.pass,
            SampleRecord::Gaussian(r) => r.pass,
            SampleRecord::Reciprocity(r) => r.pass,
        }
    }
}

/// A sample singled out in the summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Flagged {
    pub index: usize,
    pub value: f64,
    pub what: String,
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub mode: SweepMode,
    pub seed: u64,
    pub count: usize,
    pub config: SweepConfig,
    /// Largest per-user gap and the sample attaining it.
    pub worst_gap: Option<Flagged>,
    /// Smallest claim or budget slack and the sample attaining it.
    pub min_slack: Option<Flagged>,
    pub failures: Vec<Flagged>,
    /// Observations outside the pass criteria, e.g. a nonzero forward
    /// reciprocity gap.
    pub findings: Vec<Flagged>,
    pub elapsed_s: f64,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub summary: SweepSummary,
    pub records: Vec<SampleRecord>,
}

impl SweepOutcome {
    /// One header row, then one row per sample in index order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            let res = match r {
                SampleRecord::Ldc(x) => w.serialize(x),
                SampleRecord::Gaussian(x) => w.serialize((Index { index: x.index }, &x.channel, x)),
                SampleRecord::Reciprocity(x) => {
                    w.serialize((Index { index: x.index }, &x.channel, x))
                }
            };
            res.map_err(|source| HarnessError::Write {
                index: r.index(),
                source,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String, HarnessError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

fn tightest(r: &ClaimsReport) -> (f64, String) {
    r.tightest().map_or((f64::INFINITY, String::new()), |e| {
        (e.slack, e.name.clone())
    })
}

fn failure_names(r: &ClaimsReport) -> Vec<String> {
    r.failures().map(|e| e.name.clone()).collect()
}

/// Per-sample verdict: the record, the reasons it failed, and findings.
type Evaluated = (SampleRecord, Vec<String>, Vec<(f64, String)>);

pub fn evaluate_ldc(index: usize, p: &LdcParams) -> (LdcRecord, Vec<String>) {
    let projection_matches = verify_lemmas_1_2(p);
    let claims = check_ldc_claims(p);
    let (rank_independent, _, _) = rank_independence_check(p);
    let mut why = Vec::new();
    if !projection_matches {
        why.push("projected scheme region differs from the capacity region".to_string());
    }
    why.extend(claims.violations().map(|c| c.name.clone()));
    if !rank_independent {
        why.push("cooperative levels are not independent".to_string());
    }
    let rec = LdcRecord {
        index,
        n11: p.n11,
        n12: p.n12,
        n21: p.n21,
        n22: p.n22,
        k12: p.k12,
        k21: p.k21,
        full_rank: p.full_rank(),
        projection_matches,
        claims_hold: claims.all_hold(),
        rank_independent,
        pass: why.is_empty(),
    };
    (rec, why)
}

pub fn evaluate_gaussian(
    index: usize,
    p: &GaussianParams,
    cfg: &SweepConfig,
) -> (GaussianRecord, Vec<String>) {
    let outer = outer_region(p);
    let inner = inner_region(p);
    let gap = per_user_gap(&outer, &inner);
    let inner_in_outer = inner.is_subset_of(&outer, &cfg.containment_tol);
    let claims = check_gaussian_claims(p, cfg.claim_tol);
    let budgets = per_bound_gap_check(p);
    let mut why = Vec::new();
    if !gap.converged {
        why.push("gap did not converge".to_string());
    } else if gap.tau > gap_budget() + cfg.containment_tol {
        why.push(format!("per-user gap {} exceeds log 90", gap.tau));
    }
    if !inner_in_outer {
        why.push("inner region not inside outer region".to_string());
    }
    why.extend(failure_names(&claims));
    why.extend(failure_names(&budgets));
    let (claim_min_slack, claim_min_name) = tightest(&claims);
    let (budget_min_slack, budget_min_name) = tightest(&budgets);
    let rec = GaussianRecord {
        index,
        channel: ChannelColumns::of(p),
        tau: gap.tau,
        converged: gap.converged,
        inner_in_outer,
        claim_min_slack,
        claim_min_name,
        budget_min_slack,
        budget_min_name,
        pass: why.is_empty(),
    };
    (rec, why)
}

pub fn evaluate_reciprocity(
    index: usize,
    p: &GaussianParams,
    cfg: &SweepConfig,
) -> (ReciprocityRecord, Vec<String>, Option<String>) {
    let rep = reciprocity_gap(p);
    let dom = bound_budgets(p);
    let mut why = Vec::new();
    if !rep.reverse.gap.converged {
        why.push("reverse gap did not converge".to_string());
    } else if rep.reverse.gap.tau > RECIPROCITY_TAU + cfg.containment_tol {
        why.push(format!("reverse gap {} exceeds 4/3", rep.reverse.gap.tau));
    }
    why.extend(failure_names(&dom));
    let mut notes = Vec::new();
    if !rep.forward.gap.converged || rep.forward.gap.tau > cfg.containment_tol {
        notes.push(format!(
            "forward gap {} (binding: {})",
            rep.forward.gap.tau,
            rep.forward.binding.join(";")
        ));
    }
    notes.extend(
        bound_order(p)
            .failures()
            .map(|e| format!("{} fails by {:.3e}", e.name, -e.slack)),
    );
    let finding = (!notes.is_empty()).then(|| notes.join("; "));
    let (dominance_min_slack, dominance_min_name) = tightest(&dom);
    let rec = ReciprocityRecord {
        index,
        channel: ChannelColumns::of(p),
        forward_tau: rep.forward.gap.tau,
        forward_binding: rep.forward.binding.join(";"),
        reverse_tau: rep.reverse.gap.tau,
        reverse_binding: rep.reverse.binding.join(";"),
        dominance_min_slack,
        dominance_min_name,
        pass: why.is_empty(),
    };
    (rec, why, finding)
}

fn evaluate(cfg: &SweepConfig, index: usize) -> Evaluated {
    match cfg.mode {
        SweepMode::Ldc => {
            let (r, why) = evaluate_ldc(index, &ldc_sample(cfg, index));
            (SampleRecord::Ldc(r), why, Vec::new())
        }
        SweepMode::Gaussian => {
            let (r, why) = evaluate_gaussian(index, &gaussian_sample(cfg, index), cfg);
            (SampleRecord::Gaussian(r), why, Vec::new())
        }
        SweepMode::Reciprocity => {
            let (r, why, finding) = evaluate_reciprocity(index, &gaussian_sample(cfg, index), cfg);
            let f = finding.map(|s| (r.forward_tau, s)).into_iter().collect();
            (SampleRecord::Reciprocity(r), why, f)
        }
    }
}

fn params_json(cfg: &SweepConfig, index: usize) -> Value {
    match cfg.mode {
        SweepMode::Ldc => serde_json::to_value(ldc_sample(cfg, index)).expect("plain integers"),
        _ => gaussian_sample(cfg, index).to_json(),
    }
}

/// Runs every sample in parallel and merges the results by index.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let results: Vec<Evaluated> = (0..cfg.count)
        .into_par_iter()
        .map(|i| evaluate(cfg, i))
        .collect();

    let flag = |index: usize, value: f64, what: String| Flagged {
        index,
        value,
        what,
        params: params_json(cfg, index),
    };
    let mut worst: Option<(f64, usize)> = None;
    let mut min_slack: Option<(f64, usize, String)> = None;
    let mut failures = Vec::new();
    let mut findings = Vec::new();
    for (rec, why, found) in &results {
        let i = rec.index();
        let (gap, slack) = match rec {
            SampleRecord::Ldc(_) => (None, None),
            SampleRecord::Gaussian(r) => {
                let s = if r.claim_min_slack <= r.budget_min_slack {
                    (r.claim_min_slack, r.claim_min_name.clone())
                } else {
                    (r.budget_min_slack, r.budget_min_name.clone())
                };
                (Some(r.tau), Some(s))
            }
            SampleRecord::Reciprocity(r) => (
                Some(r.reverse_tau),
                Some((r.dominance_min_slack, r.dominance_min_name.clone())),
            ),
        };
        if let Some(g) = gap {
            if worst.is_none_or(|(w, _)| g > w) {
                worst = Some((g, i));
            }
        }
        if let Some((s, name)) = slack {
            if min_slack.as_ref().is_none_or(|(m, _, _)| s < *m) {
                min_slack = Some((s, i, name));
            }
        }
        if !why.is_empty() {
            failures.push(flag(i, gap.unwrap_or(f64::NAN), why.join("; ")));
        }
        for (v, what) in found {
            findings.push(flag(i, *v, what.clone()));
        }
    }
    let gap_label = match cfg.mode {
        SweepMode::Reciprocity => "reverse per-user gap",
        _ => "per-user gap",
    };
    let summary = SweepSummary {
        mode: cfg.mode,
        seed: cfg.seed,
        count: cfg.count,
        config: cfg.clone(),
        worst_gap: worst.map(|(v, i)| flag(i, v, gap_label.to_string())),
        min_slack: min_slack.map(|(v, i, name)| flag(i, v, name)),
        failures,
        findings,
        elapsed_s: start.elapsed().as_secs_f64(),
    };
    let records = results.into_iter().map(|(r, _, _)| r).collect();
    Ok(SweepOutcome { summary, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_depend_only_on_seed_and_index() {
        let cfg = SweepConfig::new(SweepMode::Gaussian, 10, 42);
        assert_eq!(gaussian_sample(&cfg, 3), gaussian_sample(&cfg, 3));
        assert_ne!(gaussian_sample(&cfg, 3), gaussian_sample(&cfg, 4));
        let p = gaussian_sample(&cfg, 0);
        for g in [p.snr1(), p.snr2(), p.inr1(), p.inr2()] {
            assert!((1.0..=1e6).contains(&g));
        }
        assert!(p.cb12 >= 0.0 && p.cb12 <= 10.0);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(SweepConfig::new(SweepMode::Ldc, 0, 1).validate().is_err());
        let mut c = SweepConfig::default();
        c.snr_db = [10.0, 0.0];
        assert!(c.validate().is_err());
        assert!("nope".parse::<SweepMode>().is_err());
    }

    #[test]
    fn ldc_samples_in_range() {
        let cfg = SweepConfig::new(SweepMode::Ldc, 1, 9);
        for i in 0..50 {
            let p = ldc_sample(&cfg, i);
            assert!(p.q() <= 6 && p.k12 <= 3 && p.k21 <= 3);
        }
    }
}
