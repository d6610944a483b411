use num_complex::Complex64;
use serde::Serialize;

use crate::gaussian::GaussianParams;

/// Power split and cooperative beamforming of the achievable scheme.
///
/// Arrays are indexed by user. Each transmitter spends `1/4` on the shared
/// common signal, `1/4` on its own common and private signals, and at most
/// `1/2` on the beamformed cooperative private signal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianScheme {
    pub q_o: f64,
    pub q_p: [f64; 2],
    pub q_c: [f64; 2],
    /// Variance of the zero-forcing stream of each user.
    pub theta_z: [f64; 2],
    /// Variance of the matched-filter stream of each user.
    pub theta_m: [f64; 2],
    pub v_z: [[Complex64; 2]; 2],
    pub v_m: [[Complex64; 2]; 2],
    /// Residual cooperative interference at each receiver.
    pub sigma2: [f64; 2],
    /// Variance of user `i`'s cooperative signal at receiver `i` given the
    /// shared common signal.
    pub k_cond: [f64; 2],
    pub k_u: [f64; 2],
    /// Cooperative private power at each transmitter.
    pub q_h: [f64; 2],
}

/// Received powers and single-user rates at one receiver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UserQuantities {
    pub snr_p: f64,
    pub snr_c: f64,
    pub inr_p: f64,
    pub inr_c: f64,
    pub p: f64,
    pub g: f64,
    pub t: f64,
    /// Single-user analogue of the direct-link level.
    pub n: f64,
    pub s: f64,
    pub l: f64,
    pub m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianDerived {
    pub scheme: GaussianScheme,
    pub user: [UserQuantities; 2],
}

/// `a / b`, or zero when `b` is zero.
fn div0(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

fn private_power(inr: f64) -> f64 {
    if inr <= 4.0 {
        0.25
    } else {
        1.0 / inr
    }
}

pub fn scheme_config(p: &GaussianParams) -> GaussianScheme {
    let (s1, s2, i1, i2) = (p.snr1(), p.snr2(), p.inr1(), p.inr2());
    let (a1, a2) = (s1 + i1, s2 + i2);
    let q_p = [private_power(i2), private_power(i1)];
    let theta_z = [0.25 / (1.0 + a2), 0.25 / (1.0 + a1)];
    let theta_m = [div0(0.25, a1 * (1.0 + a2)), div0(0.25, a2 * (1.0 + a1))];
    let det2 = p.det().norm_sqr();
    let cross2 = p.cross_sqr();
    // Receiver 1 sees the other user's matched-filter stream through the
    // row overlap; zero-forcing streams are nulled exactly.
    let sigma2 = [cross2 * theta_m[1], cross2 * theta_m[0]];
    let k_cond = [
        (det2 + a1) / (4.0 * (1.0 + a2)),
        (det2 + a2) / (4.0 * (1.0 + a1)),
    ];
    let q_h = [
        theta_z[0] * s2 + theta_z[1] * i1 + theta_m[0] * s1 + theta_m[1] * i2,
        theta_z[0] * i2 + theta_z[1] * s1 + theta_m[0] * i1 + theta_m[1] * s2,
    ];
    GaussianScheme {
        q_o: 0.25,
        q_p,
        q_c: [0.25 - q_p[0], 0.25 - q_p[1]],
        theta_z,
        theta_m,
        v_z: [[p.h22, -p.h21], [-p.h12, p.h11]],
        v_m: [[p.h11.conj(), p.h12.conj()], [p.h21.conj(), p.h22.conj()]],
        sigma2,
        k_cond,
        k_u: [a1 / 4.0 + k_cond[0], a2 / 4.0 + k_cond[1]],
        q_h,
    }
}

fn user_quantities(p: &GaussianParams, sc: &GaussianScheme, i: usize) -> UserQuantities {
    let o = 1 - i;
    let (snr, inr) = if i == 0 {
        (p.snr1(), p.inr1())
    } else {
        (p.snr2(), p.inr2())
    };
    let snr_p = snr * sc.q_p[i];
    let snr_c = snr * sc.q_c[i];
    let inr_p = inr * sc.q_p[o];
    let inr_c = inr * sc.q_c[o];
    let d = 1.0 + sc.sigma2[i] + inr_p;
    let k = sc.k_cond[i];
    let rate = |num: f64| (1.0 + num / d).log2();
    UserQuantities {
        snr_p,
        snr_c,
        inr_p,
        inr_c,
        p: rate(snr_p),
        g: rate(k),
        t: rate(inr_c + snr_p),
        n: rate(snr / 4.0),
        s: rate(k + inr_c),
        l: rate(k + snr / 4.0),
        m: rate(snr / 4.0 + inr_c),
    }
}

pub fn inner_quantities(p: &GaussianParams) -> GaussianDerived {
    let scheme = scheme_config(p);
    let user = [
        user_quantities(p, &scheme, 0),
        user_quantities(p, &scheme, 1),
    ];
    GaussianDerived { scheme, user }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> GaussianParams {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        GaussianParams::new([one, zero, zero, one], [0.0, 0.0])
    }

    #[test]
    fn identity_channel() {
        let sc = scheme_config(&identity());
        assert_eq!(sc.k_cond, [0.25, 0.25]);
        assert_eq!(sc.sigma2, [0.0, 0.0]);
        assert_eq!(sc.q_p, [0.25, 0.25]);
        assert_eq!(sc.q_c, [0.0, 0.0]);
        let d = inner_quantities(&identity());
        assert!((d.user[0].p - 1.25f64.log2()).abs() < 1e-15);
        assert_eq!(d.user[0].inr_p, 0.0);
    }

    #[test]
    fn zero_channel() {
        let z = Complex64::new(0.0, 0.0);
        let d = inner_quantities(&GaussianParams::new([z; 4], [1.0, 1.0]));
        for u in d.user {
            assert_eq!([u.p, u.g, u.t, u.n, u.s, u.l, u.m], [0.0; 7]);
        }
    }

    #[test]
    fn strong_interference_split() {
        let p = GaussianParams::from_db([30.0, 20.0], [10.0, 40.0], [0.3, -1.0], [1.0, 0.0]);
        let sc = scheme_config(&p);
        assert!((sc.q_p[0] - 1.0 / p.inr2()).abs() < 1e-15);
        assert!((sc.q_p[0] + sc.q_c[0] - 0.25).abs() < 1e-15);
        assert!(sc.q_h.iter().all(|&q| q <= 0.5));
    }
}
