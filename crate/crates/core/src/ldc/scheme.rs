use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::gf2::BitMatrix;
use crate::ldc::claims::receiver_map;
use crate::ldc::{LdcError, LdcParams};

pub const MAX_SEARCH_Q: u32 = 6;
pub const MAX_SEARCH_K: u32 = 3;

/// One-shot linear conferencing code.
///
/// Transmitter 1 forwards `F12·m1` to transmitter 2 and sends
/// `x1 = A1·m1 ⊕ B1·F21·m2`; transmitter 2 mirrors this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdcScheme {
    /// `k12 × R1`
    pub f12: BitMatrix,
    /// `k21 × R2`
    pub f21: BitMatrix,
    /// `q × R1`
    pub a1: BitMatrix,
    /// `q × k21`
    pub b1: BitMatrix,
    /// `q × R2`
    pub a2: BitMatrix,
    /// `q × k12`
    pub b2: BitMatrix,
}

impl LdcScheme {
    pub fn zeros(p: &LdcParams, r1: usize, r2: usize) -> Self {
        let q = p.q() as usize;
        let (k12, k21) = (p.k12 as usize, p.k21 as usize);
        LdcScheme {
            f12: BitMatrix::zeros(k12, r1),
            f21: BitMatrix::zeros(k21, r2),
            a1: BitMatrix::zeros(q, r1),
            b1: BitMatrix::zeros(q, k21),
            a2: BitMatrix::zeros(q, r2),
            b2: BitMatrix::zeros(q, k12),
        }
    }

    fn random<R: rand::Rng>(p: &LdcParams, r1: usize, r2: usize, rng: &mut R) -> Self {
        let q = p.q() as usize;
        let (k12, k21) = (p.k12 as usize, p.k21 as usize);
        LdcScheme {
            f12: BitMatrix::random(k12, r1, rng),
            f21: BitMatrix::random(k21, r2, rng),
            a1: BitMatrix::random(q, r1, rng),
            b1: BitMatrix::random(q, k21, rng),
            a2: BitMatrix::random(q, r2, rng),
            b2: BitMatrix::random(q, k12, rng),
        }
    }

    fn check_shapes(&self, p: &LdcParams, r1: usize, r2: usize) -> Result<(), LdcError> {
        let q = p.q() as usize;
        let (k12, k21) = (p.k12 as usize, p.k21 as usize);
        let want = [
            ("F12", &self.f12, (k12, r1)),
            ("F21", &self.f21, (k21, r2)),
            ("A1", &self.a1, (q, r1)),
            ("B1", &self.b1, (q, k21)),
            ("A2", &self.a2, (q, r2)),
            ("B2", &self.b2, (q, k12)),
        ];
        for (name, m, expected) in want {
            if m.shape() != expected {
                return Err(LdcError::Shape {
                    name,
                    expected,
                    got: m.shape(),
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "F12": self.f12.to_hex_rows(),
            "F21": self.f21.to_hex_rows(),
            "A1": self.a1.to_hex_rows(),
            "B1": self.b1.to_hex_rows(),
            "A2": self.a2.to_hex_rows(),
            "B2": self.b2.to_hex_rows(),
        })
    }
}

fn check_len(x: &[bool], q: usize) -> Result<(), LdcError> {
    if x.len() != q {
        return Err(LdcError::Length {
            expected: q,
            got: x.len(),
        });
    }
    Ok(())
}

/// Received level vectors, most significant level first.
pub fn channel_output(
    p: &LdcParams,
    x1: &[bool],
    x2: &[bool],
) -> Result<(Vec<bool>, Vec<bool>), LdcError> {
    let q = p.q() as usize;
    check_len(x1, q)?;
    check_len(x2, q)?;
    if q == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let x: Vec<bool> = x1.iter().chain(x2).copied().collect();
    Ok((receiver_map(p, 0).apply(&x), receiver_map(p, 1).apply(&x)))
}

/// Whether `rank [own | other] = R_own + rank other`, i.e. the own message
/// can be read off while the other is nulled.
fn decodable(own: &BitMatrix, other: &BitMatrix, r_own: usize) -> bool {
    own.hcat(other).rank() == r_own + other.rank()
}

/// Whether both receivers can recover their messages from one channel use.
pub fn scheme_verify(p: &LdcParams, s: &LdcScheme, r1: usize, r2: usize) -> Result<bool, LdcError> {
    s.check_shapes(p, r1, r2)?;
    let q = p.q() as usize;
    if q == 0 {
        return Ok(r1 == 0 && r2 == 0);
    }
    let sh = |n: u32| BitMatrix::down_shift(q, n as usize);
    let (s11, s12, s21, s22) = (sh(p.n11), sh(p.n12), sh(p.n21), sh(p.n22));
    // Effective transmit maps for each message.
    let x1_m1 = &s.a1;
    let x1_m2 = s.b1.mul(&s.f21);
    let x2_m1 = s.b2.mul(&s.f12);
    let x2_m2 = &s.a2;
    let y1_m1 = s11.mul(x1_m1).xor(&s12.mul(&x2_m1));
    let y1_m2 = s11.mul(&x1_m2).xor(&s12.mul(x2_m2));
    let y2_m1 = s21.mul(x1_m1).xor(&s22.mul(&x2_m1));
    let y2_m2 = s21.mul(&x1_m2).xor(&s22.mul(x2_m2));
    Ok(decodable(&y1_m1, &y1_m2, r1) && decodable(&y2_m2, &y2_m1, r2))
}

/// Seeded random search for a verifying scheme, at most `budget` trials.
pub fn scheme_search(
    p: &LdcParams,
    r1: usize,
    r2: usize,
    budget: u64,
    seed: u64,
) -> Result<Option<LdcScheme>, LdcError> {
    if p.q() > MAX_SEARCH_Q || p.k12 > MAX_SEARCH_K || p.k21 > MAX_SEARCH_K {
        return Err(LdcError::Guard(format!(
            "need q <= {MAX_SEARCH_Q} and k <= {MAX_SEARCH_K}, got q = {}, k = ({}, {})",
            p.q(),
            p.k12,
            p.k21
        )));
    }
    // A receiver sees at most q independent levels.
    let q = p.q() as usize;
    if r1 > q || r2 > q {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let s = LdcScheme::random(p, r1, r2, &mut rng);
        if scheme_verify(p, &s, r1, r2)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}
