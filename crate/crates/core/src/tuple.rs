//! Matrix tuples and monic linear pencils `L = I − Σ A_j x_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{serde_mat, QMatrix};
use crate::ncpoly::Word;
use crate::rational::Rational;

/// A tuple of `g` square matrices of common size `n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "TupleJson", into = "TupleJson")]
pub struct MatrixTuple {
    n: usize,
    mats: Vec<QMatrix>,
}

#[derive(Serialize, Deserialize)]
struct TupleJson {
    n: usize,
    g: usize,
    #[serde(with = "serde_mat::list")]
    matrices: Vec<QMatrix>,
}

impl TryFrom<TupleJson> for MatrixTuple {
    type Error = Error;
    fn try_from(j: TupleJson) -> Result<Self> {
        if j.matrices.len() != j.g {
            return Err(Error::dim(format!("g = {} but {} matrices given", j.g, j.matrices.len())));
        }
        MatrixTuple::with_size(j.n, j.matrices)
    }
}

impl From<MatrixTuple> for TupleJson {
    fn from(t: MatrixTuple) -> Self {
        TupleJson { n: t.n, g: t.mats.len(), matrices: t.mats }
    }
}

impl MatrixTuple {
    /// Builds a tuple, checking that all matrices are square of equal size.
    pub fn new(mats: Vec<QMatrix>) -> Result<Self> {
        let n = mats.first().map(|m| m.rows()).ok_or_else(|| Error::dim("empty tuple needs an explicit size"))?;
        Self::with_size(n, mats)
    }

    pub fn with_size(n: usize, mats: Vec<QMatrix>) -> Result<Self> {
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::dim(format!("all matrices must be {n}x{n}")));
        }
        Ok(MatrixTuple { n, mats })
    }

    pub fn zeros(n: usize, g: usize) -> Self {
        MatrixTuple { n, mats: vec![QMatrix::zeros(n, n); g] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[QMatrix] {
        &self.mats
    }

    pub fn get(&self, j: usize) -> &QMatrix {
        &self.mats[j]
    }

    pub fn into_mats(self) -> Vec<QMatrix> {
        self.mats
    }

    pub fn map<F: Fn(&QMatrix) -> QMatrix>(&self, f: F) -> MatrixTuple {
        let mats: Vec<QMatrix> = self.mats.iter().map(f).collect();
        let n = mats.first().map_or(self.n, |m| m.rows());
        MatrixTuple { n, mats }
    }

    /// `(T A_j T⁻¹)_j`
    pub fn map_indexed<F: Fn(usize, &QMatrix) -> QMatrix>(&self, f: F) -> MatrixTuple {
        MatrixTuple { n: self.n, mats: self.mats.iter().enumerate().map(|(j, m)| f(j, m)).collect() }
    }

    pub fn conjugate(&self, t: &QMatrix, t_inv: &QMatrix) -> MatrixTuple {
        self.map(|a| &(t * a) * t_inv)
    }

    pub fn transpose(&self) -> MatrixTuple {
        self.map(|a| a.transpose())
    }

    /// `w(A) = A_{w₁}⋯A_{w_ℓ}`; the empty word gives the identity.
    pub fn word_eval(&self, w: &Word) -> Result<QMatrix> {
        let mut acc = QMatrix::identity(self.n);
        for &j in w.letters() {
            if j >= self.g() {
                return Err(Error::dim(format!("letter x{} outside 1..{}", j + 1, self.g())));
            }
            acc = &acc * &self.mats[j];
        }
        Ok(acc)
    }

    /// Σ A_j ⊗ X_j
    pub fn kron_sum(&self, xs: &[QMatrix]) -> Result<QMatrix> {
        if xs.len() != self.g() {
            return Err(Error::dim(format!("expected {} matrices, got {}", self.g(), xs.len())));
        }
        let m = xs.first().map_or(1, |x| x.rows());
        if xs.iter().any(|x| x.rows() != m || x.cols() != m) {
            return Err(Error::dim("evaluation point must be square matrices of equal size"));
        }
        let mut acc = QMatrix::zeros(self.n * m, self.n * m);
        for (a, x) in self.mats.iter().zip(xs) {
            acc = &acc + &a.kron(x);
        }
        Ok(acc)
    }

    pub fn direct_sum(&self, o: &MatrixTuple) -> Result<MatrixTuple> {
        if self.g() != o.g() {
            return Err(Error::VariableCount(self.g(), o.g()));
        }
        Ok(MatrixTuple {
            n: self.n + o.n,
            mats: self.mats.iter().zip(&o.mats).map(|(a, b)| a.direct_sum(b)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// Restriction of each matrix to an invariant subspace (in its stored basis).
    pub fn restrict(&self, s: &crate::subspace::Subspace) -> MatrixTuple {
        MatrixTuple { n: s.dim(), mats: self.mats.iter().map(|m| s.restrict(m)).collect() }
    }
}

/// Monic linear pencil `L = I_d − Σ_j A_j x_j` of size `d ≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "PencilJson", into = "PencilJson")]
pub struct MonicPencil {
    coeffs: MatrixTuple,
}

#[derive(Serialize, Deserialize)]
struct PencilJson {
    d: usize,
    g: usize,
    #[serde(with = "serde_mat::list")]
    coeffs: Vec<QMatrix>,
}

impl TryFrom<PencilJson> for MonicPencil {
    type Error = Error;
    fn try_from(j: PencilJson) -> Result<Self> {
        if j.coeffs.len() != j.g {
            return Err(Error::dim(format!("g = {} but {} coefficients given", j.g, j.coeffs.len())));
        }
        MonicPencil::new(MatrixTuple::with_size(j.d, j.coeffs)?)
    }
}

impl From<MonicPencil> for PencilJson {
    fn from(p: MonicPencil) -> Self {
        PencilJson { d: p.d(), g: p.g(), coeffs: p.coeffs.mats }
    }
}

impl MonicPencil {
    pub fn new(coeffs: MatrixTuple) -> Result<Self> {
        if coeffs.n() == 0 {
            return Err(Error::pre("a monic pencil has size d >= 1"));
        }
        Ok(MonicPencil { coeffs })
    }

    pub fn from_mats(mats: Vec<QMatrix>) -> Result<Self> {
        Self::new(MatrixTuple::new(mats)?)
    }

    /// `I_d` with all coefficients zero.
    pub fn identity(d: usize, g: usize) -> Self {
        MonicPencil { coeffs: MatrixTuple::zeros(d.max(1), g) }
    }

    pub fn d(&self) -> usize {
        self.coeffs.n()
    }

    pub fn g(&self) -> usize {
        self.coeffs.g()
    }

    pub fn coeffs(&self) -> &MatrixTuple {
        &self.coeffs
    }

    /// `L(X) = I − Σ A_j ⊗ X_j`.
    pub fn eval(&self, xs: &[QMatrix]) -> Result<QMatrix> {
        let s = self.coeffs.kron_sum(xs)?;
        Ok(&QMatrix::identity(s.rows()) - &s)
    }

    /// `L` at a scalar point ξ ∈ ℚ^g.
    pub fn eval_scalar(&self, xi: &[Rational]) -> Result<QMatrix> {
        let xs: Vec<QMatrix> = xi.iter().map(|x| QMatrix::scalar(1, x)).collect();
        self.eval(&xs)
    }

    pub fn direct_sum(&self, o: &MonicPencil) -> Result<MonicPencil> {
        Ok(MonicPencil { coeffs: self.coeffs.direct_sum(&o.coeffs)? })
    }

    pub fn conjugate(&self, t: &QMatrix, t_inv: &QMatrix) -> MonicPencil {
        MonicPencil { coeffs: self.coeffs.conjugate(t, t_inv) }
    }

    /// Lexicographic key (size first, then coefficient entries) for canonical ordering.
    pub fn sort_key(&self) -> (usize, Vec<Rational>) {
        let mut v = Vec::new();
        for m in self.coeffs.mats() {
            v.extend(m.lex_key());
        }
        (self.d(), v)
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.is_zero()
    }
}
