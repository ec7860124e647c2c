//! Dense matrices over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, fmt_rational, q, QVector, Rational};
use crate::subspace::Subspace;
use crate::upoly::UPoly;

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", fmt_rational(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        QMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_cols(rows: usize, cols: &[QVector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for i in 0..rows {
                m.data[i * cols.len() + j] = v[i].clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        Self::diag(&vec![s.clone(); n])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> QVector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_cols(&self) -> Vec<QVector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::dim(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out[i] += a * x;
                }
            }
        }
        out
    }

    /// `vᵀ M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Rational]) -> QVector {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out[j] += a * x;
                }
            }
        }
        out
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &[Rational], v: &[Rational]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                m.data[i * v.len() + j] = a * b;
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Contiguous block `[r0, r0+h) x [c0, c0+w)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let rows: Vec<usize> = (r0..r0 + h).collect();
        let cols: Vec<usize> = (c0..c0 + w).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &QMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, o);
        m
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut m = Self::zeros(self.rows + o.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, o);
        m
    }

    /// Block diagonal `self ⊕ o`.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, o);
        m
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Reduced row echelon form, pivot columns and rank.
    pub fn rref(&self) -> (QMatrix, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let t = m.get(r, j);
                    if !t.is_zero() {
                        let v = m.get(i, j) - &f * t;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        (m, pivots, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().2
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Right null space in canonical form.
    pub fn kernel(&self) -> Subspace {
        Subspace::from_vectors(self.cols, &self.kernel_vectors())
    }

    /// A basis of the right null space (one vector per free column, free entry 1).
    pub fn kernel_vectors(&self) -> Vec<QVector> {
        let (r, pivots, _) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free).clone();
            }
            out.push(v);
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination on the integer matrix
    /// obtained by clearing row denominators.
    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "det of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::one();
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let den = common_denominator(row);
            m.push(row.iter().map(|x| x.numer() * (&den / x.denom())).collect());
            scale *= den;
        }
        let d = bareiss_det(m);
        Rational::new(d, scale)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&QMatrix::identity(n));
        let (r, pivots, _) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Solves `M X = B`, returning one solution if the system is consistent.
    pub fn solve(&self, b: &QMatrix) -> Option<QMatrix> {
        assert_eq!(self.rows, b.rows);
        let n = self.cols;
        let aug = self.hstack(b);
        let (r, pivots, _) = aug.rref();
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = QMatrix::zeros(n, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(row, n + j).clone());
            }
        }
        Some(x)
    }

    /// Solves `M x = v` for a vector.
    pub fn solve_vec(&self, v: &[Rational]) -> Option<QVector> {
        let b = QMatrix::from_cols(self.rows, &[v.to_vec()]);
        self.solve(&b).map(|x| x.col(0))
    }

    /// Kronecker product: `(A⊗B)[(i·p+k),(j·q+l)] = A[i,j]·B[k,l]`.
    pub fn kron(&self, b: &QMatrix) -> QMatrix {
        let (p, qq) = (b.rows, b.cols);
        let mut out = QMatrix::zeros(self.rows * p, self.cols * qq);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..p {
                    for l in 0..qq {
                        let v = b.get(k, l);
                        if !v.is_zero() {
                            out.set(i * p + k, j * qq + l, a * v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Characteristic polynomial `det(tI − M)`, computed with the division-free
    /// Berkowitz recurrence on the denominator-cleared integer matrix.
    pub fn char_poly(&self) -> UPoly {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return UPoly::one();
        }
        // M = N / D with N integral; det(tI − M) = D^{-n} det((Dt)I − N)
        let den = common_denominator(&self.data);
        let nmat: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = self.get(i, j);
                        x.numer() * (&den / x.denom())
                    })
                    .collect()
            })
            .collect();
        let c = berkowitz(&nmat); // highest degree first, c[0] = 1
        // coefficient of t^k in p_N(Dt) is c[n-k] D^k; divide by D^n
        let mut coeffs = vec![Rational::zero(); n + 1];
        let mut dpow = BigInt::one();
        let dn = num::pow(den.clone(), n);
        for k in 0..=n {
            coeffs[k] = Rational::new(&c[n - k] * &dpow, dn.clone());
            dpow *= &den;
        }
        UPoly::new(coeffs)
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut e: usize) -> QMatrix {
        let mut base = self.clone();
        let mut acc = QMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Lexicographic key used for canonical sorting.
    pub fn lex_key(&self) -> Vec<Rational> {
        self.data.clone()
    }
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Berkowitz: coefficients of det(tI − M), highest degree first, over the integers.
fn berkowitz(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut c: Vec<BigInt> = vec![BigInt::one(), -m[0][0].clone()];
    for r in 1..n {
        // leading r×r block A, row R = m[r][0..r], column S = m[0..r][r], a = m[r][r]
        let mut t: Vec<BigInt> = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-m[r][r].clone());
        let mut s: Vec<BigInt> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let rs: BigInt = (0..r).map(|j| &m[r][j] * &s[j]).sum();
            t.push(-rs);
            let next: Vec<BigInt> = (0..r)
                .map(|i| (0..r).map(|j| &m[i][j] * &s[j]).sum())
                .collect();
            s = next;
        }
        // new c = T c with T lower-triangular Toeplitz of size (r+2)×(r+1)
        let mut nc = vec![BigInt::zero(); r + 2];
        for (i, slot) in nc.iter_mut().enumerate() {
            for j in 0..=r.min(i) {
                if i - j < t.len() {
                    *slot += &t[i - j] * &c[j];
                }
            }
        }
        c = nc;
    }
    c
}

impl<'a> Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        self.try_mul(o).expect("matrix shapes must compose")
    }
}

impl<'a> Add<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        self.try_add(o).expect("matrix shapes must agree")
    }
}

impl<'a> Sub<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        self.try_sub(o).expect("matrix shapes must agree")
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.scale(&-Rational::one())
    }
}

/// Shorthand used in tests and examples: `qmat(&[&[1, 0], &[0, 1]])`.
pub fn qmat(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_i64(rows)
}

/// Serde adapter writing a matrix as an array of arrays of rational strings.
pub mod serde_mat {
    use super::*;
    use crate::rational::serde_q;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "serde_q::vec")] QVector);

    pub fn serialize<S: Serializer>(m: &QMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Row> = m.to_rows().into_iter().map(Row).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<QMatrix, D::Error> {
        let rows = Vec::<Row>::deserialize(d)?;
        let rows: Vec<QVector> = rows.into_iter().map(|Row(r)| r).collect();
        let c = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != c) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(QMatrix::from_rows(rows))
    }

    pub mod list {
        use super::*;

        #[derive(Serialize, Deserialize)]
        struct M(#[serde(with = "super")] QMatrix);

        pub fn serialize<S: Serializer>(ms: &[QMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
            let w: Vec<M> = ms.iter().cloned().map(M).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<QMatrix>, D::Error> {
            Ok(Vec::<M>::deserialize(d)?.into_iter().map(|M(m)| m).collect())
        }
    }
}
