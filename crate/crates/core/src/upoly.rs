//! Univariate polynomials over ℚ (coefficients stored lowest degree first).

use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::matrix::QMatrix;
use crate::rational::{common_denominator, fmt_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{}*t^{k}", fmt_rational(c)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn one() -> Self {
        UPoly { coeffs: vec![Rational::one()] }
    }

    /// `t − a`
    pub fn linear(a: &Rational) -> Self {
        UPoly::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &QMatrix::scalar(n, c);
        }
        acc
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// Polynomial division with remainder.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::new(vec![]), self.clone());
        }
        let mut quo = vec![Rational::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * dc;
                }
            }
            quo[k] = c;
        }
        (UPoly::new(quo), UPoly::new(r))
    }

    /// Distinct rational roots with multiplicities, ascending.
    pub fn rational_roots(&self) -> Vec<(Rational, usize)> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let mut p = self.clone();
        // zero root
        let mut m0 = 0;
        while p.coeffs.first().is_some_and(|c| c.is_zero()) {
            p.coeffs.remove(0);
            m0 += 1;
        }
        if m0 > 0 {
            out.push((Rational::zero(), m0));
        }
        if p.degree().unwrap_or(0) == 0 {
            return out;
        }
        // integer primitive form
        let den = common_denominator(&p.coeffs);
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut cands = Vec::new();
        let dp = divisors(&a0);
        let dq = divisors(&an);
        if dp.is_empty() || dq.is_empty() {
            return out;
        }
        for num in &dp {
            for den in &dq {
                if num.gcd(den).is_one() {
                    let r = Rational::new(num.clone(), den.clone());
                    cands.push(-r.clone());
                    cands.push(r);
                }
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            let lin = UPoly::linear(&r);
            let mut m = 0;
            loop {
                let (quo, rem) = p.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                p = quo;
                m += 1;
            }
            if m > 0 {
                out.push((r, m));
            }
            if p.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Removes all rational linear factors, returning the remaining cofactor.
    pub fn strip_rational_roots(&self) -> UPoly {
        let mut p = self.clone();
        for (r, m) in self.rational_roots() {
            for _ in 0..m {
                p = p.div_rem(&UPoly::linear(&r)).0;
            }
        }
        p
    }
}

/// Positive divisors of |n| (trial division; coefficients here are small).
/// Returns an empty list when n is too large to enumerate.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    use num::ToPrimitive;
    let Some(v) = n.to_u64() else { return vec![] };
    if v == 0 {
        return vec![];
    }
    if v > 1_000_000_000_000 {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            small.push(BigInt::from(i));
            if i != v / i {
                large.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
