//! Invariant subspaces of a non-degenerate rank-one perturbation `B_j = A_j + b_j cᵀ`
//! of a jointly nilpotent tuple, and their complements invariant under `A`.

use num::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{irreducible_invariant_subspace_with, is_jointly_nilpotent, rng_from_seed};
use crate::error::{Error, Result};
use crate::factor::split;
use crate::matrix::{serde_mat, QMatrix};
use crate::ncpoly::NCPoly;
use crate::rational::{serde_q, vecops, QVector, Rational};
use crate::realization::{krylov, realization_to_poly, realize_product, similarity_between, Realization};
use crate::subspace::Subspace;
use crate::tuple::MatrixTuple;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PerturbationJson", into = "PerturbationJson")]
pub struct PerturbationData {
    a: MatrixTuple,
    b: Vec<QVector>,
    c: QVector,
}

#[derive(Serialize, Deserialize)]
struct PerturbationJson {
    d: usize,
    g: usize,
    #[serde(rename = "A", with = "serde_mat::list")]
    a: Vec<QMatrix>,
    #[serde(with = "serde_q::vecvec")]
    b: Vec<QVector>,
    #[serde(with = "serde_q::vec")]
    c: QVector,
}

impl TryFrom<PerturbationJson> for PerturbationData {
    type Error = Error;
    fn try_from(j: PerturbationJson) -> Result<Self> {
        if j.a.len() != j.g {
            return Err(Error::dim(format!("g = {} but {} matrices in A", j.g, j.a.len())));
        }
        PerturbationData::new(MatrixTuple::with_size(j.d, j.a)?, j.b, j.c)
    }
}

impl From<PerturbationData> for PerturbationJson {
    fn from(p: PerturbationData) -> Self {
        PerturbationJson { d: p.a.n(), g: p.a.g(), a: p.a.into_mats(), b: p.b, c: p.c }
    }
}

impl PerturbationData {
    pub fn new(a: MatrixTuple, b: Vec<QVector>, c: QVector) -> Result<Self> {
        let d = a.n();
        if b.len() != a.g() || b.iter().any(|v| v.len() != d) || c.len() != d {
            return Err(Error::dim("b and c must match the tuple size"));
        }
        if !is_jointly_nilpotent(&a) {
            return Err(Error::pre("A must be jointly nilpotent"));
        }
        Ok(PerturbationData { a, b, c })
    }

    pub fn a(&self) -> &MatrixTuple {
        &self.a
    }

    pub fn b(&self) -> &[QVector] {
        &self.b
    }

    pub fn c(&self) -> &QVector {
        &self.c
    }

    pub fn d(&self) -> usize {
        self.a.n()
    }

    /// `B_j = A_j + b_j cᵀ`.
    pub fn perturbed(&self) -> MatrixTuple {
        self.a.map_indexed(|j, m| m + &QMatrix::outer(&self.b[j], &self.c))
    }

    /// `(1, c, B, b)`, a realization of `f⁻¹`.
    pub fn realization(&self) -> Realization {
        Realization::new(Rational::one(), self.c.clone(), self.perturbed(), self.b.clone()).unwrap()
    }

    /// `f = 1 − cᵀ(I − Σ A_j x_j)⁻¹ Σ b_j x_j`.
    pub fn polynomial(&self) -> NCPoly {
        let neg_c = self.c.iter().map(|x| -x).collect();
        let r = Realization::new(Rational::one(), neg_c, self.a.clone(), self.b.clone()).unwrap();
        realization_to_poly(&r).expect("A is jointly nilpotent")
    }
}

/// Controllability of `(A, b)` and observability of `(A, c)`.
pub fn check_nondegenerate(p: &PerturbationData) -> bool {
    let d = p.d();
    krylov(&p.a, &p.b).basis.dim() == d && krylov(&p.a.transpose(), std::slice::from_ref(&p.c)).basis.dim() == d
}

/// `S^×` invariant under every `A_j` with `S ∔ S^× = ℚᵈ`.
pub fn complementary_invariant(p: &PerturbationData, s: &Subspace, seed: u64) -> Result<Subspace> {
    complementary_invariant_with(p, s, &mut rng_from_seed(seed))
}

pub fn complementary_invariant_with<R: Rng>(p: &PerturbationData, s: &Subspace, rng: &mut R) -> Result<Subspace> {
    let d = p.d();
    if s.ambient_dim() != d {
        return Err(Error::dim("subspace lives in the wrong dimension"));
    }
    if s.is_zero() || s.is_full() {
        return Err(Error::pre("S must be proper and nonzero"));
    }
    if !check_nondegenerate(p) {
        return Err(Error::pre("the perturbation is degenerate (not controllable or not observable)"));
    }
    let r0 = p.realization();
    if !r0.a().mats().iter().all(|m| s.is_invariant_under(m)) {
        return Err(Error::pre("S is not invariant under B"));
    }

    // peel a chain of irreducible steps of S, one atom at a time
    let mut cur_r = r0.clone();
    let mut cur_f = p.polynomial();
    let mut cur_s = s.clone();
    let mut blocks: Vec<Realization> = Vec::new();
    let mut embed = QMatrix::identity(d);
    while !cur_s.is_zero() {
        let inner = irreducible_invariant_subspace_with(&cur_r.a().restrict(&cur_s), rng)?;
        let vs: Vec<QVector> = inner.basis_vectors().iter().map(|v| cur_s.vector(v)).collect();
        let s1 = Subspace::from_vectors(cur_r.d(), &vs);
        let sp = split(&cur_f, &cur_r, &s1)?;
        let t = s1.basis().hstack(&sp.complement);
        let t_inv = t.inverse().ok_or_else(|| Error::Internal("split complement is not complementary".into()))?;
        let k = s1.dim();
        let projected: Vec<QVector> =
            cur_s.basis_vectors().iter().map(|v| t_inv.mul_vec(v)[k..].to_vec()).collect();
        embed = &embed * &sp.complement;
        blocks.push(sp.r1);
        cur_s = Subspace::from_vectors(sp.r2.d(), &projected);
        cur_r = sp.r2;
        cur_f = sp.f2;
    }

    // the product realization of the chain is similar to the original one;
    // its last block spans the complement
    let mut prod = blocks[0].clone();
    for b in &blocks[1..] {
        prod = realize_product(&prod, b)?;
    }
    prod = realize_product(&prod, &cur_r)?;
    let t = similarity_between(&prod, &r0)?;
    let e = cur_r.d();
    let last: Vec<QVector> = (d - e..d).map(|i| t.mul_vec(&vecops::unit(d, i))).collect();
    let sx = Subspace::from_vectors(d, &last);
    if sx != Subspace::column_span(&embed) {
        return Err(Error::Internal("chain similarity disagrees with the split complements".into()));
    }
    if !p.a.mats().iter().all(|m| sx.is_invariant_under(m)) || !s.is_complementary(&sx)? {
        return Err(Error::Internal("complement failed verification".into()));
    }
    Ok(sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qmat;
    use crate::rational::{q, qf};
    use crate::subspace::span_i64;

    pub(crate) fn two_factor() -> PerturbationData {
        let a = MatrixTuple::new(vec![
            qmat(&[&[0, -1, 1], &[0, 0, 0], &[0, 0, 0]]),
            QMatrix::from_rows(vec![
                vec![q(0), q(0), qf(-1, 2)],
                vec![q(0), q(0), qf(1, 2)],
                vec![q(0), q(0), q(0)],
            ]),
        ])
        .unwrap();
        let b = vec![vec![qf(-3, 2), qf(3, 2), q(1)], vec![qf(-1, 2), qf(1, 2), q(0)]];
        PerturbationData::new(a, b, vec![q(1), q(0), q(0)]).unwrap()
    }

    #[test]
    fn two_factor_complements() {
        let p = two_factor();
        assert!(check_nondegenerate(&p));
        assert_eq!(
            p.polynomial(),
            NCPoly::parse("1 + 3/2*x1 + 1/2*x2 + 1/2*x1^2 + 1/2*x1*x2 + 1/2*x2*x1 + 1/2*x1*x2*x1").unwrap()
        );
        let line = Subspace::from_vectors(3, &[vec![q(-1), qf(3, 2), q(1)]]);
        let plane = span_i64(3, &[&[1, 0, 1], &[-1, 1, 0]]);
        for seed in 0..3 {
            assert_eq!(complementary_invariant(&p, &line, seed).unwrap(), span_i64(3, &[&[1, 0, 0], &[0, 1, 0]]));
            assert_eq!(complementary_invariant(&p, &plane, seed).unwrap(), span_i64(3, &[&[1, 0, 0]]));
        }
    }

    #[test]
    fn two_dimensional_example() {
        let a = MatrixTuple::new(vec![qmat(&[&[0, 1], &[0, 0]])]).unwrap();
        let p = PerturbationData::new(a, vec![vec![q(0), q(1)]], vec![q(1), q(0)]).unwrap();
        assert!(check_nondegenerate(&p));
        // B = [[0,1],[1,0]]: eigenlines span{(1,1)} and span{(1,−1)}
        for v in [[1, 1], [1, -1]] {
            let s = span_i64(2, &[&v]);
            let sx = complementary_invariant(&p, &s, 0).unwrap();
            // the only A-invariant line is span{e1}
            assert_eq!(sx, span_i64(2, &[&[1, 0]]));
        }
    }

    #[test]
    fn degenerate_rejected() {
        let a = MatrixTuple::new(vec![qmat(&[&[0]])]).unwrap();
        let p = PerturbationData::new(a.clone(), vec![vec![q(0)]], vec![q(1)]).unwrap();
        assert!(!check_nondegenerate(&p));
        let p = PerturbationData::new(a, vec![vec![q(1)]], vec![q(1)]).unwrap();
        assert!(check_nondegenerate(&p));
    }
}
