use num_traits::Zero;

use crate::ldc::{derived_quantities, LdcParams};
use crate::polytope::{project_to_rates, Bound, HalfspaceSystem, Region2D};
use crate::scalar::Scalar;
use crate::strategy::{build_system, Quantity, RX_ROWS};
use crate::Rational;

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// The capacity bounds as `(name, a1, a2, rhs)`, before any reduction.
pub fn theorem1_bounds(p: &LdcParams) -> Vec<(&'static str, i64, i64, i64)> {
    let (n11, n12, n21, n22) = (p.n11 as i64, p.n12 as i64, p.n21 as i64, p.n22 as i64);
    let (k12, k21) = (p.k12 as i64, p.k21 as i64);
    let sum4 = if p.full_rank() {
        (n11 + n22).max(n12 + n21)
    } else {
        n11.max(n12).max(n21).max(n22)
    };
    vec![
        ("R1", 1, 0, n11.max(n12).min(n11 + k12)),
        ("R2", 0, 1, n22.max(n21).min(n22 + k21)),
        ("Sum1", 1, 1, pos(n11 - n21) + n22.max(n21) + k12),
        ("Sum2", 1, 1, pos(n22 - n12) + n11.max(n12) + k21),
        (
            "Sum3",
            1,
            1,
            n12.max(pos(n11 - n21)) + n21.max(pos(n22 - n12)) + k12 + k21,
        ),
        ("Sum4", 1, 1, sum4),
        (
            "SlopeTwo1",
            2,
            1,
            n11.max(n12) + n21.max(pos(n22 - n12)) + pos(n11 - n21) + k12 + k21,
        ),
        (
            "SlopeHalf1",
            1,
            2,
            n22.max(n21) + n12.max(pos(n11 - n21)) + pos(n22 - n12) + k21 + k12,
        ),
        (
            "SlopeTwo2",
            2,
            1,
            n21 + (n11 + pos(n22 - n21)).max(n12) + pos(n11 - n21) + k12,
        ),
        (
            "SlopeHalf2",
            1,
            2,
            n12 + (n22 + pos(n11 - n12)).max(n21) + pos(n22 - n12) + k21,
        ),
    ]
}

/// Exact capacity region, reduced to the bounds that touch it.
pub fn capacity_region(p: &LdcParams) -> Region2D<Rational> {
    let bounds = theorem1_bounds(p)
        .into_iter()
        .map(|(name, a1, a2, b)| {
            Bound::named(name, Rational::int(a1), Rational::int(a2), Rational::int(b))
        })
        .collect();
    Region2D::new(bounds, Rational::zero())
}

/// Split-rate system of the level-allocation scheme before projection.
///
/// When `n11 + n22 = n12 + n21` the rows bounded by `g`, `s` and `l` use
/// `p`, `t` and `n_ii` instead.
pub fn pre_fme_system(p: &LdcParams) -> HalfspaceSystem<Rational> {
    let d = derived_quantities(p);
    let fr = d.full_rank;
    let rhs = |user: usize, row: usize| {
        let u = &d.user[user];
        let v = match RX_ROWS[row].quantity {
            Quantity::P => u.p,
            Quantity::G => {
                if fr {
                    u.g
                } else {
                    u.p
                }
            }
            Quantity::T => u.t,
            Quantity::N => u.n,
            Quantity::S => {
                if fr {
                    u.s
                } else {
                    u.t
                }
            }
            Quantity::L => {
                if fr {
                    u.l
                } else {
                    u.n
                }
            }
            Quantity::M => u.m,
        };
        Rational::int(v)
    };
    build_system(
        rhs,
        [Rational::int(p.k12 as i64), Rational::int(p.k21 as i64)],
    )
    .expect("fixed variable list")
}

/// Whether projecting the scheme's split-rate system reproduces the
/// capacity region exactly.
pub fn verify_lemmas_1_2(p: &LdcParams) -> bool {
    match project_to_rates(&pre_fme_system(p), ["R1", "R2"]) {
        Ok(r) => r.same_set(&capacity_region(p)),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter()
            .map(|&(x, y)| (Rational::int(x), Rational::int(y)))
            .collect()
    }

    #[test]
    fn example_bound_values() {
        let b: Vec<i64> = theorem1_bounds(&LdcParams::new([2, 3, 1, 3], [1, 2]))
            .iter()
            .map(|x| x.3)
            .collect();
        assert_eq!(b, vec![3, 3, 5, 5, 7, 5, 8, 9, 7, 8]);
    }

    #[test]
    fn zero_channel_is_origin() {
        let r = capacity_region(&LdcParams::new([0; 4], [0, 0]));
        assert_eq!(r.vertices(), pts(&[(0, 0)]).as_slice());
    }

    #[test]
    fn pre_fme_row_count() {
        let s = pre_fme_system(&LdcParams::new([2, 3, 1, 3], [1, 2]));
        assert_eq!(s.rows().len(), 43);
        assert_eq!(s.variables().len(), 13);
    }
}
