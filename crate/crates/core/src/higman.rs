//! Higman linearization: decouple products one letter at a time until every
//! entry is affine, keeping the determinant.

use num::{One, Zero};

use crate::cpoly::CPoly;
use crate::decompose::det_generic;
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::ncpoly::{NCPoly, Word};
use crate::rational::Rational;
use crate::tuple::{MatrixTuple, MonicPencil};

/// Splits `e = ℓ + Σ_j u_j x_j` where `ℓ` is affine and `u_j` collects the
/// prefixes of the nonlinear terms ending in `x_j`.
fn peel(e: &NCPoly) -> (NCPoly, Vec<NCPoly>) {
    let g = e.g();
    let mut lin = NCPoly::zero(g);
    let mut u = vec![NCPoly::zero(g); g];
    for (w, c) in e.terms() {
        if w.len() <= 1 {
            lin.add_term(w.clone(), c.clone());
        } else {
            let last = *w.letters().last().unwrap();
            u[last].add_term(w.truncate_right(1), c.clone());
        }
    }
    (lin, u)
}

/// Monic pencil `L` with `det L(X) = det f(X)` for all `X`.
pub fn higman_linearize(f: &NCPoly) -> Result<MonicPencil> {
    let c = f.constant_term();
    if c.is_zero() {
        return Err(Error::not_regular());
    }
    if !c.is_one() {
        return Err(Error::pre("expected constant term 1"));
    }
    let g = f.g();
    let mut m: Vec<Vec<NCPoly>> = vec![vec![f.clone()]];
    // entries still to be checked, in creation order
    let mut queue = vec![(0usize, 0usize)];
    let mut head = 0;
    while head < queue.len() {
        let (r, s) = queue[head];
        head += 1;
        if m[r][s].degree().unwrap_or(0) <= 1 {
            continue;
        }
        let (lin, u) = peel(&m[r][s]);
        m[r][s] = lin;
        for (j, uj) in u.into_iter().enumerate() {
            if uj.is_zero() {
                continue;
            }
            let k = m.len();
            for row in m.iter_mut() {
                row.push(NCPoly::zero(g));
            }
            m.push(vec![NCPoly::zero(g); k + 1]);
            m[r][k] = uj;
            m[k][s] = -&NCPoly::var(g, j);
            m[k][k] = NCPoly::one(g);
            queue.push((r, k));
        }
    }
    let d = m.len();
    let mut mats = vec![QMatrix::zeros(d, d); g];
    for (r, row) in m.iter().enumerate() {
        for (s, e) in row.iter().enumerate() {
            let expect = if r == s { Rational::one() } else { Rational::zero() };
            if e.constant_term() != expect {
                return Err(Error::Internal("linearization produced a non-monic constant part".into()));
            }
            for (j, mat) in mats.iter_mut().enumerate() {
                let coef = e.coeff(&Word::letter(j));
                if !coef.is_zero() {
                    mat.set(r, s, -coef);
                }
            }
        }
    }
    MonicPencil::new(MatrixTuple::with_size(d, mats)?)
}

/// `det f(𝕏⁽ⁿ⁾)` through the linearization.
pub fn det_generic_poly(f: &NCPoly, n: usize, cap: usize) -> Result<CPoly> {
    let c = f.constant_term();
    if c.is_zero() {
        return Err(Error::not_regular());
    }
    let l = higman_linearize(&f.scalar_mul(&c.recip()))?;
    let p = det_generic(&l, n, cap)?;
    let mut scale = Rational::one();
    for _ in 0..n {
        scale *= &c;
    }
    Ok(p.scale(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qmat;

    fn pts() -> Vec<Vec<QMatrix>> {
        vec![
            vec![qmat(&[&[2]]), qmat(&[&[-3]])],
            vec![qmat(&[&[1, 2], &[0, -1]]), qmat(&[&[0, 1], &[3, 1]])],
            vec![qmat(&[&[1, 0, 2], &[0, 1, 1], &[-1, 0, 0]]), qmat(&[&[0, 1, 0], &[2, 0, 1], &[1, 1, 1]])],
        ]
    }

    #[test]
    fn one_plus_x1x2() {
        let l = higman_linearize(&NCPoly::parse("1 + x1*x2").unwrap()).unwrap();
        assert_eq!(l.d(), 2);
        assert_eq!(l.coeffs().get(0), &qmat(&[&[0, -1], &[0, 0]]));
        assert_eq!(l.coeffs().get(1), &qmat(&[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn linear_input() {
        let l = higman_linearize(&NCPoly::parse("1 + x1").unwrap()).unwrap();
        assert_eq!(l.d(), 1);
        assert_eq!(l.coeffs().get(0), &qmat(&[&[-1]]));
    }

    #[test]
    fn determinant_preserved() {
        for s in ["1 + x2*x1", "1 + x1 + x2 + x1^2*x2", "1 - 2*x1*x2*x1 + 1/3*x2^3 + x1*x2"] {
            let f = NCPoly::parse_with_g(s, 2).unwrap();
            let l = higman_linearize(&f).unwrap();
            for xs in pts() {
                assert_eq!(l.eval(&xs).unwrap().det(), f.eval(&xs).unwrap().det(), "{s}");
            }
        }
        assert!(higman_linearize(&NCPoly::parse("x1").unwrap()).is_err());
    }

    #[test]
    fn generic_det_of_poly() {
        let f = NCPoly::parse("2 + x1*x2").unwrap();
        let p = det_generic_poly(&f, 1, 12).unwrap();
        assert_eq!(p.eval(&[crate::rational::q(3), crate::rational::q(5)]).unwrap(), crate::rational::q(17));
    }
}
