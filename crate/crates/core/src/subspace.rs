//! Subspaces of ℚⁿ in canonical reduced column echelon form, plus an
//! incremental echelon basis used by span and closure computations.

use num::Zero;

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{vecops, QVector, Rational};

/// Reduced echelon basis built one vector at a time.
///
/// Basis vectors are kept fully reduced: each has a leading 1 at its pivot
/// index and every other basis vector is zero there. Coordinates of a vector
/// in the span are therefore just its entries at the pivots.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    len: usize,
    vecs: Vec<QVector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis { len, vecs: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.vecs.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> &[QVector] {
        &self.vecs
    }

    /// Reduces `v` against the basis in place; returns true if it becomes zero.
    pub fn reduce(&self, v: &mut QVector) -> bool {
        for (b, &p) in self.vecs.iter().zip(&self.pivots) {
            let f = v[p].clone();
            if !f.is_zero() {
                vecops::axpy(v, &-f, b);
            }
        }
        vecops::is_zero(v)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w)
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut w = v.to_vec();
        if self.reduce(&mut w) {
            return false;
        }
        let p = w.iter().position(|x| !x.is_zero()).unwrap();
        let inv = w[p].recip();
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for b in self.vecs.iter_mut() {
            let f = b[p].clone();
            if !f.is_zero() {
                vecops::axpy(b, &-f, &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.vecs.insert(at, w);
        true
    }

    /// Coordinates of a vector known to lie in the span.
    pub fn coords(&self, v: &[Rational]) -> QVector {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn into_subspace(self) -> Subspace {
        let basis = QMatrix::from_cols(self.len, &self.vecs);
        Subspace { ambient: self.len, basis }
    }
}

/// A subspace of ℚⁿ. The basis columns are in reduced column echelon form,
/// so two subspaces are equal exactly when their basis matrices are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: QMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: QMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: QMatrix::identity(n) }
    }

    pub fn from_vectors(n: usize, vs: &[QVector]) -> Self {
        let mut e = EchelonBasis::new(n);
        for v in vs {
            e.insert(v);
        }
        e.into_subspace()
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &QMatrix) -> Self {
        Self::from_vectors(m.rows(), &m.to_cols())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis as columns of an `ambient × dim` matrix.
    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<QVector> {
        self.basis.to_cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn echelon(&self) -> EchelonBasis {
        let mut e = EchelonBasis::new(self.ambient);
        for v in self.basis_vectors() {
            e.insert(&v);
        }
        e
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        let e = self.echelon();
        o.basis_vectors().iter().all(|v| e.contains(v))
    }

    fn check(&self, o: &Subspace) -> Result<()> {
        if self.ambient != o.ambient {
            return Err(Error::dim(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, o.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        let mut vs = self.basis_vectors();
        vs.extend(o.basis_vectors());
        Ok(Self::from_vectors(self.ambient, &vs))
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        // solve S a = T b: kernel of [S | -T], then image S a
        let m = self.basis.hstack(&-&o.basis);
        let vs: Vec<QVector> = m
            .kernel_vectors()
            .into_iter()
            .map(|k| self.basis.mul_vec(&k[..self.dim()]))
            .collect();
        Ok(Self::from_vectors(self.ambient, &vs))
    }

    pub fn is_complementary(&self, o: &Subspace) -> Result<bool> {
        self.check(o)?;
        Ok(self.dim() + o.dim() == self.ambient && self.sum(o)?.dim() == self.ambient)
    }

    /// Basis of the ambient space whose first columns are the basis of `self`.
    pub fn extend_to_basis(&self) -> QMatrix {
        self.basis.hstack(&self.complement_basis())
    }

    /// Standard unit vectors completing `self` to a basis, as columns.
    pub fn complement_basis(&self) -> QMatrix {
        let pivots = self.echelon().pivots().to_vec();
        let extra: Vec<QVector> = (0..self.ambient)
            .filter(|i| !pivots.contains(i))
            .map(|i| vecops::unit(self.ambient, i))
            .collect();
        QMatrix::from_cols(self.ambient, &extra)
    }

    /// Image `M S`.
    pub fn map(&self, m: &QMatrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::dim(format!(
                "map of {}x{} applied in dimension {}",
                m.rows(),
                m.cols(),
                self.ambient
            )));
        }
        let vs: Vec<QVector> = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Ok(Self::from_vectors(m.rows(), &vs))
    }

    /// True when `M S ⊆ S`.
    pub fn is_invariant_under(&self, m: &QMatrix) -> bool {
        let e = self.echelon();
        self.basis_vectors().iter().all(|v| e.contains(&m.mul_vec(v)))
    }

    /// Annihilator `{w : wᵀ v = 0 for all v ∈ S}`.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        self.basis.transpose().kernel()
    }

    /// Matrix of `m` restricted to this invariant subspace, in the stored basis.
    pub fn restrict(&self, m: &QMatrix) -> QMatrix {
        let e = self.echelon();
        let cols: Vec<QVector> = self
            .basis_vectors()
            .iter()
            .map(|v| e.coords(&m.mul_vec(v)))
            .collect();
        QMatrix::from_cols(self.dim(), &cols)
    }

    /// Coordinates of a vector lying in the subspace.
    pub fn coords(&self, v: &[Rational]) -> QVector {
        self.echelon().coords(v)
    }

    /// Vector with the given coordinates.
    pub fn vector(&self, coords: &[Rational]) -> QVector {
        self.basis.mul_vec(coords)
    }
}

/// Convenience: span of integer vectors.
pub fn span_i64(n: usize, vs: &[&[i64]]) -> Subspace {
    let vs: Vec<QVector> = vs.iter().map(|v| vecops::from_i64(v)).collect();
    Subspace::from_vectors(n, &vs)
}
