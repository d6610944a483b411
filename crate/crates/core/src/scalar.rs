use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde_json::Value;

/// Number type the polyhedral engine is generic over.
///
/// `BigRational` never rounds; `f64` compares with a tolerance carried by the
/// owning system or region.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    const EXACT: bool;

    /// Comparison tolerance used when none is supplied.
    fn default_eps() -> Self;

    fn ratio(num: i64, den: i64) -> Self;

    /// Lossy view as a double, for reporting.
    fn approx(&self) -> f64;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Option<Self>;

    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every scalar")
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn default_eps() -> Self {
        1e-9
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn approx(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn default_eps() -> Self {
        BigRational::zero()
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Integers become JSON numbers when they fit in an `i64`; everything
    /// else is written as a `"p/q"` string.
    fn to_json(&self) -> Value {
        if self.is_integer() {
            if let Some(i) = self.numer().to_i64() {
                return Value::from(i);
            }
        }
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(BigRational::from_integer(BigInt::from(i)))
                } else {
                    n.as_f64().and_then(BigRational::from_float)
                }
            }
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        }
    }
}

pub(crate) fn smax<S: Scalar>(a: S, b: S) -> S {
    if a >= b {
        a
    } else {
        b
    }
}

/// `a <= b` up to `eps`.
pub(crate) fn le_eps<S: Scalar>(a: &S, b: &S, eps: &S) -> bool {
    *a <= b.clone() + eps.clone()
}

/// `|a - b| <= eps`.
pub(crate) fn eq_eps<S: Scalar>(a: &S, b: &S, eps: &S) -> bool {
    (a.clone() - b.clone()).abs() <= *eps
}
