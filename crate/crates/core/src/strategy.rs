//! Rate-splitting constraint family shared by the deterministic and Gaussian
//! models.
//!
//! Each user's rate is split into a cooperative common part (`o`), a
//! cooperative private part (`h`, with auxiliary rate `Rt*h`), a
//! noncooperative common part (`c`) and a noncooperative private part (`p`).
//! Both models impose the same sixteen rows at each receiver and differ only
//! in the right-hand sides.

use crate::polytope::{HalfspaceSystem, PolytopeError};
use crate::scalar::Scalar;

pub const VARIABLES: [&str; 13] = [
    "R1", "R2", "R1o", "R2o", "Ro", "R1h", "R2h", "Rt1h", "Rt2h", "R1c", "R2c", "R1p", "R2p",
];

/// Split-rate variables seen from one receiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// Shared cooperative common rate `Ro`.
    Ro,
    /// Own auxiliary cooperative private rate.
    OwnTildeH,
    OwnC,
    OwnP,
    /// The other user's noncooperative common rate.
    OtherC,
}

/// Which single-user quantity bounds a receiver row in the reduced
/// (Table-style) form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    P,
    G,
    T,
    N,
    S,
    L,
    M,
}

pub struct RxRow {
    pub label: &'static str,
    pub parts: &'static [Part],
    pub quantity: Quantity,
}

use Part::*;

/// The sixteen receiver rows, written for receiver 1.
pub const RX_ROWS: [RxRow; 16] = [
    RxRow {
        label: "p",
        parts: &[OwnP],
        quantity: Quantity::P,
    },
    RxRow {
        label: "h",
        parts: &[OwnTildeH],
        quantity: Quantity::G,
    },
    RxRow {
        label: "hp",
        parts: &[OwnTildeH, OwnP],
        quantity: Quantity::G,
    },
    RxRow {
        label: "xp",
        parts: &[OtherC, OwnP],
        quantity: Quantity::T,
    },
    RxRow {
        label: "cp",
        parts: &[OwnC, OwnP],
        quantity: Quantity::N,
    },
    RxRow {
        label: "xh",
        parts: &[OtherC, OwnTildeH],
        quantity: Quantity::S,
    },
    RxRow {
        label: "xhp",
        parts: &[OtherC, OwnTildeH, OwnP],
        quantity: Quantity::S,
    },
    RxRow {
        label: "chp",
        parts: &[OwnC, OwnTildeH, OwnP],
        quantity: Quantity::L,
    },
    RxRow {
        label: "cxp",
        parts: &[OwnC, OtherC, OwnP],
        quantity: Quantity::M,
    },
    RxRow {
        label: "cxhp",
        parts: &[OwnC, OtherC, OwnTildeH, OwnP],
        quantity: Quantity::M,
    },
    RxRow {
        label: "oh",
        parts: &[Ro, OwnTildeH],
        quantity: Quantity::M,
    },
    RxRow {
        label: "ohp",
        parts: &[Ro, OwnTildeH, OwnP],
        quantity: Quantity::M,
    },
    RxRow {
        label: "oxh",
        parts: &[Ro, OtherC, OwnTildeH],
        quantity: Quantity::M,
    },
    RxRow {
        label: "oxhp",
        parts: &[Ro, OtherC, OwnTildeH, OwnP],
        quantity: Quantity::M,
    },
    RxRow {
        label: "ochp",
        parts: &[Ro, OwnC, OwnTildeH, OwnP],
        quantity: Quantity::M,
    },
    RxRow {
        label: "ocxhp",
        parts: &[Ro, OwnC, OtherC, OwnTildeH, OwnP],
        quantity: Quantity::M,
    },
];

fn var_name(user: usize, part: Part) -> &'static str {
    let other = 1 - user;
    match part {
        Ro => "Ro",
        OwnTildeH => ["Rt1h", "Rt2h"][user],
        OwnC => ["R1c", "R2c"][user],
        OwnP => ["R1p", "R2p"][user],
        OtherC => ["R1c", "R2c"][other],
    }
}

/// Builds the full split-rate system. `rhs(user, row)` gives the bound for
/// `RX_ROWS[row]` at receiver `user` (0 or 1); `k` are the conferencing
/// capacities `[k12, k21]`.
pub fn build_system<S: Scalar>(
    rhs: impl Fn(usize, usize) -> S,
    k: [S; 2],
) -> Result<HalfspaceSystem<S>, PolytopeError> {
    build_system_with_eps(rhs, k, S::default_eps())
}

pub fn build_system_with_eps<S: Scalar>(
    rhs: impl Fn(usize, usize) -> S,
    k: [S; 2],
    eps: S,
) -> Result<HalfspaceSystem<S>, PolytopeError> {
    let mut sys = HalfspaceSystem::new(&VARIABLES)?.all_nonneg().with_eps(eps);
    let one = S::one;
    for user in 0..2 {
        for (i, row) in RX_ROWS.iter().enumerate() {
            let terms: Vec<(&str, S)> = row
                .parts
                .iter()
                .map(|&p| (var_name(user, p), one()))
                .collect();
            sys.add_le(
                &format!("rx{}:{}", user + 1, row.label),
                &terms,
                rhs(user, i),
            )?;
        }
    }
    sys.add_le("tx:1h", &[("R1h", one()), ("Rt1h", -one())], S::zero())?;
    sys.add_le("tx:2h", &[("R2h", one()), ("Rt2h", -one())], S::zero())?;
    sys.add_eq(
        "tx:o",
        &[("Ro", one()), ("R1o", -one()), ("R2o", -one())],
        S::zero(),
    )?;
    let [k12, k21] = k;
    sys.add_le("tx:k12", &[("R1o", one()), ("R1h", one())], k12)?;
    sys.add_le("tx:k21", &[("R2o", one()), ("R2h", one())], k21)?;
    sys.add_ge(
        "tx:hh",
        &[
            ("Rt1h", one()),
            ("Rt2h", one()),
            ("R1h", -one()),
            ("R2h", -one()),
        ],
        S::zero(),
    )?;
    sys.add_eq(
        "def:R1",
        &[
            ("R1", one()),
            ("R1o", -one()),
            ("R1h", -one()),
            ("R1c", -one()),
            ("R1p", -one()),
        ],
        S::zero(),
    )?;
    sys.add_eq(
        "def:R2",
        &[
            ("R2", one()),
            ("R2o", -one()),
            ("R2h", -one()),
            ("R2c", -one()),
            ("R2p", -one()),
        ],
        S::zero(),
    )?;
    Ok(sys)
}
