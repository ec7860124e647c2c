//! Exact rational scalars and small helpers around them.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

/// A column vector of rationals.
pub type QVector = Vec<Rational>;

/// Integer literal as a rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics when `d == 0`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p/q` or `p` (optional leading sign, surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(b) => b.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn to_f64(x: &Rational) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // very large numerators or denominators: go through a scaled division
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Least common multiple of the denominators of a sequence.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(xs: I) -> BigInt {
    use num::Integer;
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Vector helpers.
pub mod vecops {
    use super::*;

    pub fn zeros(n: usize) -> QVector {
        vec![Rational::zero(); n]
    }

    pub fn unit(n: usize, i: usize) -> QVector {
        let mut v = zeros(n);
        v[i] = Rational::one();
        v
    }

    pub fn is_zero(v: &[Rational]) -> bool {
        v.iter().all(|x| x.is_zero())
    }

    pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                s += x * y;
            }
        }
        s
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> QVector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> QVector {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(a: &[Rational], s: &Rational) -> QVector {
        a.iter().map(|x| x * s).collect()
    }

    /// `a += s * b`
    pub fn axpy(a: &mut [Rational], s: &Rational, b: &[Rational]) {
        if s.is_zero() {
            return;
        }
        for (x, y) in a.iter_mut().zip(b) {
            if !y.is_zero() {
                *x += s * y;
            }
        }
    }

    pub fn from_i64(xs: &[i64]) -> QVector {
        xs.iter().map(|&x| q(x)).collect()
    }
}

/// Serde adapters: rationals as strings, vectors and matrices as nested arrays of strings.
pub mod serde_q {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_rational(&v).map_err(D::Error::custom)
    }

    /// Accepts `"p/q"`, `"p"` or a JSON integer.
    pub fn value_to_rational(v: &serde_json::Value) -> std::result::Result<Rational, String> {
        match v {
            serde_json::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(q(i))
                } else {
                    Err(format!("non-integer JSON number {n}; write rationals as strings"))
                }
            }
            other => Err(format!("expected rational, found {other}")),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(x: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(x.len()))?;
            for e in x {
                seq.serialize_element(&fmt_rational(e))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<QVector, D::Error> {
            let v = Vec::<serde_json::Value>::deserialize(d)?;
            v.iter()
                .map(|e| value_to_rational(e).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod vecvec {
        use super::*;

        #[derive(serde::Serialize, serde::Deserialize)]
        struct W(#[serde(with = "super::vec")] QVector);

        pub fn serialize<S: Serializer>(x: &[QVector], s: S) -> std::result::Result<S::Ok, S::Error> {
            let w: Vec<W> = x.iter().map(|v| W(v.clone())).collect();
            serde::Serialize::serialize(&w, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<QVector>, D::Error> {
            let w = Vec::<W>::deserialize(d)?;
            Ok(w.into_iter().map(|W(v)| v).collect())
        }
    }
}
