use serde::Serialize;

use crate::gaussian::bounds::{coherent, inner_terms, lg, outer_sum3, outer_sum4, outer_terms};
use crate::gaussian::{inner_quantities, GaussianParams};

/// Default tolerance on claim slacks.
pub const CLAIM_EPS: f64 = 1e-9;

/// Tolerance on the overlap/determinant identity, relative to the size of
/// its terms.
const IDENTITY_EPS: f64 = 1e-10;

/// Extra room granted to each gap budget.
const BUDGET_EPS: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimEntry {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// How far the inequality `lhs ≥ rhs` holds. Power-domain entries are
    /// divided by `max(1, |rhs|)`.
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimsReport {
    pub entries: Vec<ClaimEntry>,
}

impl ClaimsReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    /// The entry with the least slack.
    pub fn tightest(&self) -> Option<&ClaimEntry> {
        self.entries
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
    }

    pub fn get(&self, name: &str) -> Option<&ClaimEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

struct Builder {
    entries: Vec<ClaimEntry>,
    tol: f64,
}

impl Builder {
    fn push(&mut self, name: String, lhs: f64, rhs: f64, slack: f64, tol: f64) {
        let pass = slack >= -tol;
        self.entries.push(ClaimEntry {
            name,
            lhs,
            rhs,
            slack,
            tol,
            pass,
        });
    }

    /// `lhs ≥ rhs` in bits.
    fn bits(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) {
        self.push(name.into(), lhs, rhs, lhs - rhs, self.tol);
    }

    /// `lhs ≥ rhs` between powers.
    fn power(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) {
        self.push(
            name.into(),
            lhs,
            rhs,
            (lhs - rhs) / rhs.abs().max(1.0),
            self.tol,
        );
    }
}

/// Evaluates the inequalities the achievability argument relies on, for
/// both users, with slack tolerance `tol`.
pub fn check_gaussian_claims(p: &GaussianParams, tol: f64) -> ClaimsReport {
    let d = inner_quantities(p);
    let sc = &d.scheme;
    let mut b = Builder {
        entries: Vec::new(),
        tol,
    };
    let (l5, l9) = (5f64.log2(), 9f64.log2());
    let views = [*p, p.swapped()];
    for i in 0..2 {
        let (a, o) = (&d.user[i], &d.user[1 - i]);
        let (x, y) = (i + 1, 2 - i);
        let q = &views[i];
        let (s1, s2, i1, i2) = (q.snr1(), q.snr2(), q.inr1(), q.inr2());
        let det2 = q.det().norm_sqr();

        b.bits(
            format!("claim6: p{x}+t{y} >= n{x} - log(9/4)"),
            a.p + o.t,
            a.n - (2.25f64).log2(),
        );
        b.bits(
            format!("claim6: p{x}+s{y} >= n{x} - log(9/4)"),
            a.p + o.s,
            a.n - (2.25f64).log2(),
        );
        b.bits(
            format!("claim6: g{x}+t{y} >= n{x} - log9"),
            a.g + o.t,
            a.n - l9,
        );
        b.bits(
            format!("claim6: g{x}+s{y} >= n{x} - log9"),
            a.g + o.s,
            a.n - l9,
        );
        b.bits(format!("claim7: s{x} >= t{x} - log5"), a.s, a.t - l5);
        b.bits(format!("claim8: g{x} >= p{x} - log5"), a.g, a.p - l5);
        b.bits(
            format!("claim9: s{x}+t{y} >= p{y}+m{x} - log18"),
            a.s + o.t,
            o.p + a.m - 18f64.log2(),
        );
        b.bits(
            format!("claim9: l{x}+t{x} >= p{x}+m{x} - log12"),
            a.l + a.t,
            a.p + a.m - 12f64.log2(),
        );
        b.bits(
            format!("ineq1: user {x}"),
            lg(1.0 + s1 + i1 + s2 + i2 + det2),
            lg(1.0 + s1 / (1.0 + i2)) + lg(1.0 + s2 + i2),
        );
        b.power(
            format!("cor_ineq1: K{x}|o >= SNR{x}/(4(1+INR{y}))"),
            sc.k_cond[i],
            s1 / (4.0 * (1.0 + i2)),
        );
        b.power(
            format!("private: SNR{x}/(1+INR{y}) >= 4 SNR{x}p/5"),
            s1 / (1.0 + i2),
            0.8 * a.snr_p,
        );
        b.power(format!("sigma{x}^2 <= 1/4"), 0.25, sc.sigma2[i]);
        b.power(format!("Q{x}h <= 1/2"), 0.5, sc.q_h[i]);
        b.power(format!("INR{y} Q{x}p <= 1"), 1.0, i2 * sc.q_p[i]);
        let split = s1 / 4.0;
        b.push(
            format!("split: SNR{x}c+SNR{x}p = SNR{x}/4"),
            a.snr_c + a.snr_p,
            split,
            -(a.snr_c + a.snr_p - split).abs() / split.max(1.0),
            tol,
        );
    }
    let (s1, s2, i1, i2) = (p.snr1(), p.snr2(), p.inr1(), p.inr2());
    let det2 = p.det().norm_sqr();
    b.power(
        "ineq2: 2|det|^2 + 4 SNR1 SNR2 >= SNR1 SNR2 + INR1 INR2",
        2.0 * det2 + 4.0 * s1 * s2,
        s1 * s2 + i1 * i2,
    );
    b.power(
        "ineq2: 2|det|^2 + 4 INR1 INR2 >= SNR1 SNR2 + INR1 INR2",
        2.0 * det2 + 4.0 * i1 * i2,
        s1 * s2 + i1 * i2,
    );
    let scale = ((s1 + i1) * (s2 + i2)).max(1.0);
    let (lhs, rhs) = (p.cross_sqr(), (s1 + i1) * (s2 + i2) - det2);
    b.push(
        "overlap identity".into(),
        lhs,
        rhs,
        -(lhs - rhs).abs() / scale,
        IDENTITY_EPS,
    );
    ClaimsReport { entries: b.entries }
}

/// Differences between matched outer and inner bounds against their
/// budgets. `lhs` is the difference, `rhs` the budget.
pub fn per_bound_gap_check(p: &GaussianParams) -> ClaimsReport {
    let t = inner_terms(p);
    let o = [outer_terms(p), outer_terms(&p.swapped())];
    let (l3, l5, l10) = (3f64.log2(), 5f64.log2(), 10f64.log2());
    let mut b = Builder {
        entries: Vec::new(),
        tol: 0.0,
    };
    let mut gap = |name: String, outer: f64, inner: f64, budget: f64| {
        let g = outer - inner;
        b.push(name, g, budget, budget - g, BUDGET_EPS);
    };
    let r_budget = 4.0 * l3;
    let sum_budget = 4.0 * l3 + 2.0 + 2.0 * l5;
    let slope_budget = 6.0 * l3 + l5 + 1.0;
    let clip = |x: f64| x.max(0.0);
    let (c12, c21) = (p.cb12, p.cb21);
    for i in 0..2 {
        let x = i + 1;
        let (s, inr) = if i == 0 {
            (p.snr1(), p.inr1())
        } else {
            (p.snr2(), p.inr2())
        };
        let (slope, half) = if i == 0 {
            ("SlopeTwo", "2R1+R2")
        } else {
            ("SlopeHalf", "R1+2R2")
        };
        let ci = [c12, c21][i];
        gap(
            format!("R{x} coherent vs m{x}"),
            coherent(s, inr),
            t.r_m[i],
            2.0 * l3 + 1.0,
        );
        gap(
            format!("R{x} cooperative vs n{x}"),
            lg(1.0 + s) + ci,
            t.r_n[i],
            4.0 * l3,
        );
        gap(
            format!("R{x}"),
            o[i].r_coop.min(o[i].r_coherent),
            clip(t.r_m[i].min(t.r_n[i])),
            r_budget,
        );
        gap(
            format!("Sum{x} vs p{x}+m"),
            o[i].sum_z,
            t.sum_pm[i],
            5.0 * l3 - 1.0 + l10 / 2.0,
        );
        gap(
            format!("{slope}1 vs pmt ({half})"),
            o[i].slope_a,
            t.slope_pmt[i],
            6.0 * l3 + l5,
        );
        gap(
            format!("{slope}2 vs pms/plm ({half})"),
            o[i].slope_b,
            t.slope_pms[i].min(t.slope_plm[i]),
            slope_budget,
        );
        gap(
            half.to_string(),
            o[i].slope_a.min(o[i].slope_b),
            clip(t.slope_pmt[i]).min(clip(t.slope_pms[i].min(t.slope_plm[i]))),
            slope_budget,
        );
    }
    gap("Sum3 vs t1+t2".into(), outer_sum3(p), t.sum_t, sum_budget);
    gap(
        "Sum4 vs g+m".into(),
        outer_sum4(p),
        t.sum_gm[0].min(t.sum_gm[1]),
        4.0 * l3 + 1.0,
    );
    let outer_sum = o[0]
        .sum_z
        .min(o[1].sum_z)
        .min(outer_sum3(p))
        .min(outer_sum4(p));
    let inner_sum = clip(t.sum_t)
        .min(clip(t.sum_pm[0].min(t.sum_pm[1])))
        .min(clip(t.sum_gm[0].min(t.sum_gm[1])));
    gap("R1+R2".into(), outer_sum, inner_sum, sum_budget);
    ClaimsReport { entries: b.entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_corollary_is_tight() {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let r = check_gaussian_claims(
            &GaussianParams::new([one, zero, zero, one], [0.0, 0.0]),
            CLAIM_EPS,
        );
        let c = r.get("cor_ineq1: K1|o >= SNR1/(4(1+INR2))").unwrap();
        assert_eq!((c.lhs, c.rhs, c.slack), (0.25, 0.25, 0.0));
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn zero_channel_passes() {
        let z = Complex64::new(0.0, 0.0);
        let p = GaussianParams::new([z; 4], [0.0, 0.0]);
        assert!(check_gaussian_claims(&p, CLAIM_EPS).all_pass());
        let g = per_bound_gap_check(&p);
        assert!(g.all_pass());
        for e in g.entries.iter().filter(|e| !e.name.contains(" vs ")) {
            assert_eq!(e.lhs, 0.0, "{}", e.name);
        }
    }
}
