use serde::Serialize;

use crate::gf2::BitMatrix;
use crate::ldc::{derived_quantities, LdcParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LdcClaimCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub relation: Relation,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LdcClaimsReport {
    pub params: LdcParams,
    pub full_rank: bool,
    pub checks: Vec<LdcClaimCheck>,
}

impl LdcClaimsReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &LdcClaimCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Evaluates the level identities used to discard bounds after projection:
/// Claims 2–4 when `n11 + n22 ≠ n12 + n21`, Claim 5 otherwise.
pub fn check_ldc_claims(p: &LdcParams) -> LdcClaimsReport {
    let d = derived_quantities(p);
    let [u1, u2] = d.user;
    let (n11, n12, n21, n22) = (p.n11 as i64, p.n12 as i64, p.n21 as i64, p.n22 as i64);
    let mut checks = Vec::new();
    let mut add = |name: &str, lhs: i64, rhs: i64, relation: Relation| {
        let holds = match relation {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        };
        checks.push(LdcClaimCheck {
            name: name.to_string(),
            lhs,
            rhs,
            relation,
            holds,
        });
    };
    if d.full_rank {
        add("claim2: p1+t2 >= n11", u1.p + u2.t, n11, Relation::Ge);
        add("claim2: p2+t1 >= n22", u2.p + u1.t, n22, Relation::Ge);
        add("claim2: g1 >= p1", u1.g, u1.p, Relation::Ge);
        add("claim2: g2 >= p2", u2.g, u2.p, Relation::Ge);
        add("claim2: s1 >= t1", u1.s, u1.t, Relation::Ge);
        add("claim2: s2 >= t2", u2.s, u2.t, Relation::Ge);
        add(
            "claim3: s1+t2 >= p2+m1",
            u1.s + u2.t,
            u2.p + u1.m,
            Relation::Ge,
        );
        add(
            "claim3: s2+t1 >= p1+m2",
            u2.s + u1.t,
            u1.p + u2.m,
            Relation::Ge,
        );
        add(
            "claim3: l1+t1 >= p1+m1",
            u1.l + u1.t,
            u1.p + u1.m,
            Relation::Ge,
        );
        add(
            "claim3: l2+t2 >= p2+m2",
            u2.l + u2.t,
            u2.p + u2.m,
            Relation::Ge,
        );
        let top = (n11 + n22).max(n12 + n21);
        add(
            "claim4: g1+m2 = max(n11+n22, n12+n21)",
            u1.g + u2.m,
            top,
            Relation::Eq,
        );
        add(
            "claim4: g2+m1 = max(n11+n22, n12+n21)",
            u2.g + u1.m,
            top,
            Relation::Eq,
        );
        add(
            "claim4: s2+m1 = l1+m2",
            u2.s + u1.m,
            u1.l + u2.m,
            Relation::Eq,
        );
        add(
            "claim4: s1+m2 = l2+m1",
            u1.s + u2.m,
            u2.l + u1.m,
            Relation::Eq,
        );
    } else {
        let top = n11.max(n12).max(n21).max(n22);
        add("claim5: p1+m2 = max n", u1.p + u2.m, top, Relation::Eq);
        add("claim5: p2+m1 = max n", u2.p + u1.m, top, Relation::Eq);
        add(
            "claim5: p1+t2 = p2+n11",
            u1.p + u2.t,
            u2.p + n11,
            Relation::Eq,
        );
        add(
            "claim5: p2+t1 = p1+n22",
            u2.p + u1.t,
            u1.p + n22,
            Relation::Eq,
        );
    }
    LdcClaimsReport {
        params: *p,
        full_rank: d.full_rank,
        checks,
    }
}

/// Transfer map `[S^{q-n_i1} | S^{q-n_i2}]` from both transmit vectors to
/// receiver `i` (0 or 1).
pub(crate) fn receiver_map(p: &LdcParams, i: usize) -> BitMatrix {
    let q = p.q() as usize;
    let (a, b) = if i == 0 {
        (p.n11, p.n12)
    } else {
        (p.n21, p.n22)
    };
    BitMatrix::down_shift(q, a as usize).hcat(&BitMatrix::down_shift(q, b as usize))
}

/// Whether the `g1` lowest levels at receiver 1 and the `g2` lowest levels at
/// receiver 2 are linearly independent functions of the transmit vectors.
/// Returns the check together with `(g1 + g2, rank)`.
pub fn rank_independence_check(p: &LdcParams) -> (bool, usize, usize) {
    let d = derived_quantities(p);
    let g1 = d.user[0].g as usize;
    let g2 = d.user[1].g as usize;
    if p.q() == 0 {
        return (g1 + g2 == 0, g1 + g2, 0);
    }
    let stacked = receiver_map(p, 0)
        .tail(g1)
        .vcat(&receiver_map(p, 1).tail(g2));
    let rank = stacked.rank();
    (rank == g1 + g2, g1 + g2, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_claims() {
        let r = check_ldc_claims(&LdcParams::new([2, 3, 1, 3], [1, 2]));
        assert!(r.all_hold(), "{:?}", r.violations().collect::<Vec<_>>());
        let c = r
            .checks
            .iter()
            .find(|c| c.name.starts_with("claim4: g1+m2"))
            .unwrap();
        assert_eq!((c.lhs, c.rhs), (5, 5));
        let c = r
            .checks
            .iter()
            .find(|c| c.name.starts_with("claim4: s2+m1"))
            .unwrap();
        assert_eq!((c.lhs, c.rhs), (5, 5));
    }

    #[test]
    fn symmetric_rank_deficient() {
        let r = check_ldc_claims(&LdcParams::new([2, 2, 2, 2], [0, 0]));
        assert!(!r.full_rank);
        assert!(r.all_hold());
        assert_eq!(r.checks[0].lhs, 2);
    }

    #[test]
    fn independence_examples() {
        assert_eq!(
            rank_independence_check(&LdcParams::new([2, 3, 1, 3], [1, 2])),
            (true, 4, 4)
        );
        assert_eq!(
            rank_independence_check(&LdcParams::new([2, 2, 2, 2], [1, 1])),
            (true, 0, 0)
        );
    }
}
