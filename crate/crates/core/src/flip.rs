//! Flip-poly pencils `I − Σ (N_j − b_j cᵀ) x_j` with `N` jointly nilpotent.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::is_jointly_nilpotent;
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::ncpoly::NCPoly;
use crate::rational::{serde_q, QVector, Rational};
use crate::realization::{realization_to_poly, Realization};
use crate::tuple::{MatrixTuple, MonicPencil};

/// `L = I − Σ (N_j − b_j cᵀ) x_j` together with `f = 1 + cᵀ(I − Σ N_j x_j)⁻¹ Σ b_j x_j`;
/// `det f(X) = det L(X)` at every point.
pub fn flip_poly_construct(n: &MatrixTuple, b: &[QVector], c: &[Rational]) -> Result<(MonicPencil, NCPoly)> {
    if !is_jointly_nilpotent(n) {
        return Err(Error::pre("N must be jointly nilpotent"));
    }
    let r = Realization::new(Rational::from_integer(1.into()), c.to_vec(), n.clone(), b.to_vec())?;
    let f = realization_to_poly(&r)?;
    let mats = n.mats().iter().zip(b).map(|(m, bj)| m - &QMatrix::outer(bj, c)).collect();
    let l = MonicPencil::new(MatrixTuple::with_size(n.n(), mats)?)?;
    Ok((l, f))
}

/// A coefficient with a nonzero rational eigenvalue of geometric multiplicity
/// at least two; such a pencil is not flip-poly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipObstruction {
    /// 1-based coefficient index.
    pub coefficient: usize,
    #[serde(with = "serde_q")]
    pub eigenvalue: Rational,
    pub geometric_multiplicity: usize,
}

pub fn flip_poly_obstruction(l: &MonicPencil) -> Option<FlipObstruction> {
    let d = l.d();
    for (j, a) in l.coeffs().mats().iter().enumerate() {
        for (lam, _) in a.char_poly().rational_roots() {
            if lam.is_zero() {
                continue;
            }
            let dim = (a - &QMatrix::scalar(d, &lam)).kernel().dim();
            if dim >= 2 {
                return Some(FlipObstruction { coefficient: j + 1, eigenvalue: lam, geometric_multiplicity: dim });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qmat;
    use crate::rational::{q, qf};

    #[test]
    fn scalar_case() {
        let (l, f) = flip_poly_construct(&MatrixTuple::new(vec![qmat(&[&[0]])]).unwrap(), &[vec![q(1)]], &[q(1)])
            .unwrap();
        assert_eq!(f, NCPoly::parse("1 + x1").unwrap());
        assert_eq!(l.coeffs().get(0), &qmat(&[&[-1]]));
    }

    #[test]
    fn two_factor_data() {
        let n = MatrixTuple::new(vec![
            qmat(&[&[0, -1, 1], &[0, 0, 0], &[0, 0, 0]]),
            QMatrix::from_rows(vec![
                vec![q(0), q(0), qf(-1, 2)],
                vec![q(0), q(0), qf(1, 2)],
                vec![q(0), q(0), q(0)],
            ]),
        ])
        .unwrap();
        let b = vec![vec![qf(-3, 2), qf(3, 2), q(1)], vec![qf(-1, 2), qf(1, 2), q(0)]];
        let c = vec![q(-1), q(0), q(0)];
        let (l, f) = flip_poly_construct(&n, &b, &c).unwrap();
        assert_eq!(
            f,
            NCPoly::parse("1 + 3/2*x1 + 1/2*x2 + 1/2*x1^2 + 1/2*x1*x2 + 1/2*x2*x1 + 1/2*x1*x2*x1").unwrap()
        );
        assert_eq!(l.coeffs().get(0).get(0, 0), &qf(-3, 2));
        assert!(flip_poly_obstruction(&l).is_none());
        let xs = vec![qmat(&[&[1, 2], &[0, 1]]), qmat(&[&[3, 0], &[1, -1]])];
        assert_eq!(l.eval(&xs).unwrap().det(), f.eval(&xs).unwrap().det());
    }

    #[test]
    fn degenerate_and_rejected() {
        let n = MatrixTuple::new(vec![qmat(&[&[0, 1], &[0, 0]])]).unwrap();
        let (l, f) = flip_poly_construct(&n, &[vec![q(1), q(1)]], &[q(0), q(0)]).unwrap();
        assert_eq!(f, NCPoly::one(1));
        assert!(is_jointly_nilpotent(l.coeffs()));
        let bad = MatrixTuple::new(vec![qmat(&[&[1]])]).unwrap();
        assert!(flip_poly_construct(&bad, &[vec![q(1)]], &[q(1)]).is_err());
    }

    #[test]
    fn obstruction() {
        let l = MonicPencil::from_mats(vec![
            QMatrix::diag(&[q(1), q(1), q(-1)]),
            qmat(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
        ])
        .unwrap();
        let o = flip_poly_obstruction(&l).unwrap();
        assert_eq!((o.coefficient, o.eigenvalue, o.geometric_multiplicity), (1, q(1), 2));
        let nil = MonicPencil::from_mats(vec![qmat(&[&[0, 1], &[0, 0]])]).unwrap();
        assert!(flip_poly_obstruction(&nil).is_none());
    }
}
