//! Symbolic determinants of pencils at generic matrices, block upper
//! triangular forms and similarity of pencils.

use std::sync::Arc;

use num::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{irreducible_invariant_subspace_with, is_irreducible_tuple, quotient, rng_from_seed};
use crate::cpoly::{det_cpoly, CPoly};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{q, QVector, Rational};
use crate::subspace::Subspace;
use crate::tuple::{MatrixTuple, MonicPencil};

/// Default bound on `n·d` for symbolic determinants.
pub const DEFAULT_SIZE_CAP: usize = 12;

/// Names of the generic-matrix entries, `x{j}[{i},{k}]`, 1-based, indexed
/// `j·n² + i·n + k`.
pub fn generic_variable_names(g: usize, n: usize) -> Arc<Vec<String>> {
    let mut names = Vec::with_capacity(g * n * n);
    for j in 0..g {
        for i in 0..n {
            for k in 0..n {
                names.push(format!("x{}[{},{}]", j + 1, i + 1, k + 1));
            }
        }
    }
    Arc::new(names)
}

/// Point of the coordinate ring corresponding to a concrete tuple.
pub fn generic_point(xs: &[QMatrix]) -> Vec<Rational> {
    xs.iter().flat_map(|x| x.entries().iter().cloned()).collect()
}

/// det L(𝕏⁽ⁿ⁾) as a polynomial in the `g·n²` entries of the generic matrices.
pub fn det_generic(l: &MonicPencil, n: usize, cap: usize) -> Result<CPoly> {
    let d = l.d();
    let g = l.g();
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if n * d > cap {
        return Err(Error::SizeCap { size: n * d, cap });
    }
    let vars = generic_variable_names(g, n);
    let xi: Vec<CPoly> = (0..g * n * n).map(|i| CPoly::var_in(vars.clone(), i)).collect();
    let size = n * d;
    let mut m = vec![vec![CPoly::zero_in(vars.clone()); size]; size];
    for a in 0..d {
        for i in 0..n {
            for b in 0..d {
                for k in 0..n {
                    let mut e = if a == b && i == k {
                        CPoly::constant_in(vars.clone(), Rational::one())
                    } else {
                        CPoly::zero_in(vars.clone())
                    };
                    for j in 0..g {
                        let c = l.coeffs().get(j).get(a, b);
                        if !c.is_zero() {
                            e = e.try_sub(&xi[j * n * n + i * n + k].scale(c))?;
                        }
                    }
                    m[a * n + i][b * n + k] = e;
                }
            }
        }
    }
    det_cpoly(&m)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeGrowth {
    pub degrees: Vec<(usize, usize)>,
    /// `deg/n` when it is an integer independent of `n`.
    pub d_l: Option<usize>,
    pub note: String,
}

pub fn degree_growth(l: &MonicPencil, ns: &[usize], cap: usize) -> Result<DegreeGrowth> {
    let mut degrees = Vec::new();
    for &n in ns {
        let p = det_generic(l, n, cap)?;
        degrees.push((n, p.degree().unwrap_or(0)));
    }
    let d_l = match degrees.first() {
        Some(&(n0, k0)) if k0 % n0 == 0 => {
            let r = k0 / n0;
            degrees.iter().all(|&(n, k)| k == r * n).then_some(r)
        }
        _ => None,
    };
    let d = l.d();
    let note = format!(
        "linear growth is guaranteed for n >= {}; smaller n only suggest d_L",
        (d * d).saturating_sub(1).max(1)
    );
    Ok(DegreeGrowth { degrees, d_l, note })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Identity,
    Irreducible,
    /// Left over after the search stopped with `NeedsExtension`.
    Unresolved,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilDecomposition {
    #[serde(with = "crate::matrix::serde_mat")]
    pub t: QMatrix,
    pub blocks: Vec<(MonicPencil, BlockKind)>,
    pub block_sizes: Vec<usize>,
    pub complete: bool,
    pub seed: u64,
}

impl PencilDecomposition {
    /// `T·L·T⁻¹` coefficientwise.
    pub fn transformed(&self, l: &MonicPencil) -> MonicPencil {
        let t_inv = self.t.inverse().expect("T is invertible");
        l.conjugate(&self.t, &t_inv)
    }
}

fn kind_of(block: &MatrixTuple) -> BlockKind {
    if block.is_zero() {
        BlockKind::Identity
    } else if is_irreducible_tuple(block) {
        BlockKind::Irreducible
    } else {
        BlockKind::Unresolved
    }
}

/// Flag of invariant subspaces with irreducible (or zero) steps, giving a
/// block upper triangular form `T·L·T⁻¹`.
pub fn block_triangularize(l: &MonicPencil, seed: u64) -> PencilDecomposition {
    let mut rng = rng_from_seed(seed);
    block_triangularize_with(l, &mut rng, seed)
}

pub fn block_triangularize_with<R: Rng>(l: &MonicPencil, rng: &mut R, seed: u64) -> PencilDecomposition {
    let a = l.coeffs();
    let d = l.d();
    let mut cols: Vec<QVector> = Vec::with_capacity(d);
    let mut sizes = Vec::new();
    let mut complete = true;
    let mut flag = Subspace::zero(d);
    while flag.dim() < d {
        let (quo, p) = quotient(a, &flag);
        let k = flag.dim();
        let lift = |v: &QVector| -> QVector {
            let mut full = vec![Rational::zero(); d];
            full[k..].clone_from_slice(v);
            p.mul_vec(&full)
        };
        let step = match irreducible_invariant_subspace_with(&quo, rng) {
            Ok(s) => s,
            Err(_) => {
                complete = false;
                Subspace::full(quo.n())
            }
        };
        let new: Vec<QVector> = step.basis_vectors().iter().map(lift).collect();
        sizes.push(new.len());
        cols.extend(new.iter().cloned());
        let mut all = flag.basis_vectors();
        all.extend(new);
        flag = Subspace::from_vectors(d, &all);
        if !complete {
            break;
        }
    }
    let p = QMatrix::from_cols(d, &cols);
    let t = p.inverse().expect("flag basis is invertible");
    let conj = a.conjugate(&t, &p);
    let mut blocks = Vec::new();
    let mut off = 0;
    for (idx, &s) in sizes.iter().enumerate() {
        let block = conj.map(|m| m.block(off, off, s, s));
        let mut kind = kind_of(&block);
        if !complete && idx + 1 == sizes.len() {
            kind = if block.is_zero() { BlockKind::Identity } else { BlockKind::Unresolved };
        }
        blocks.push((MonicPencil::new(block).unwrap(), kind));
        off += s;
    }
    PencilDecomposition { t, blocks, block_sizes: sizes, complete, seed }
}

/// Pairwise non-similar irreducible diagonal blocks, sorted by size and then
/// lexicographically by coefficients.
pub fn fl_minimal_blocks(l: &MonicPencil, seed: u64) -> Result<Vec<MonicPencil>> {
    let dec = block_triangularize(l, seed);
    if !dec.complete {
        return Err(Error::NeedsExtension(
            "the pencil has a diagonal block that is reducible only over an extension of Q".into(),
        ));
    }
    let mut out: Vec<MonicPencil> = Vec::new();
    for (b, kind) in dec.blocks {
        if kind != BlockKind::Irreducible {
            continue;
        }
        if out.iter().all(|o| pencil_similar(o, &b).is_none()) {
            out.push(b);
        }
    }
    out.sort_by_key(|x| x.sort_key());
    Ok(out)
}

const WITNESS_GRID_LIMIT: usize = 4096;

/// Invertible `P` with `P·A⁽¹⁾_j = A⁽²⁾_j·P` for all `j`, if one exists.
pub fn pencil_similar(l1: &MonicPencil, l2: &MonicPencil) -> Option<QMatrix> {
    if l1.d() != l2.d() || l1.g() != l2.g() {
        return None;
    }
    let d = l1.d();
    let dd = d * d;
    let mut sys = QMatrix::zeros(l1.g() * dd, dd);
    for j in 0..l1.g() {
        let a1 = l1.coeffs().get(j);
        let a2 = l2.coeffs().get(j);
        for r in 0..d {
            for c in 0..d {
                let row = j * dd + r * d + c;
                // (P A1)[r][c] = Σ_k P[r][k] A1[k][c]
                for k in 0..d {
                    let x = a1.get(k, c);
                    if !x.is_zero() {
                        *sys.get_mut(row, r * d + k) += x;
                    }
                    // (A2 P)[r][c] = Σ_k A2[r][k] P[k][c]
                    let y = a2.get(r, k);
                    if !y.is_zero() {
                        *sys.get_mut(row, k * d + c) -= y;
                    }
                }
            }
        }
    }
    let sols: Vec<QMatrix> = if l1.g() == 0 {
        (0..dd).map(|i| unit_matrix(d, i)).collect()
    } else {
        sys.kernel_vectors()
            .into_iter()
            .map(|v| QMatrix::new(d, d, v))
            .collect()
    };
    if sols.is_empty() {
        return None;
    }
    let combine = |t: &[i64]| -> QMatrix {
        let mut acc = QMatrix::zeros(d, d);
        for (c, s) in t.iter().zip(&sols) {
            if *c != 0 {
                acc = &acc + &s.scale(&q(*c));
            }
        }
        acc
    };
    let m = sols.len();
    let kmax = d.max(m + 1) as i64;
    let mut tried = 0usize;
    for k in 1..=kmax {
        // points of {0..k}^m with max coordinate k
        let mut t = vec![0i64; m];
        loop {
            if t.contains(&k) {
                let p = combine(&t);
                if !p.det().is_zero() {
                    return Some(p);
                }
                tried += 1;
                if tried >= WITNESS_GRID_LIMIT {
                    break;
                }
            }
            let mut i = 0;
            while i < m {
                t[i] += 1;
                if t[i] <= k {
                    break;
                }
                t[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        if tried >= WITNESS_GRID_LIMIT {
            break;
        }
    }
    // large solution spaces: a fixed pseudo-random sample
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let r = d as i64 + 1;
    for _ in 0..64 {
        let t: Vec<i64> = (0..m).map(|_| rng.random_range(-r..=r)).collect();
        let p = combine(&t);
        if !p.det().is_zero() {
            return Some(p);
        }
    }
    None
}

fn unit_matrix(d: usize, idx: usize) -> QMatrix {
    let mut m = QMatrix::zeros(d, d);
    m.set(idx / d, idx % d, Rational::one());
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qmat;
    use crate::rational::qf;

    fn square_difference() -> MonicPencil {
        MonicPencil::from_mats(vec![
            qmat(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 0]]),
            qmat(&[&[0, 0, 1], &[0, 0, 1], &[0, 1, 0]]),
        ])
        .unwrap()
    }

    fn two_factor() -> MonicPencil {
        MonicPencil::from_mats(vec![
            QMatrix::from_rows(vec![
                vec![qf(-3, 2), q(-1), q(1)],
                vec![qf(3, 2), q(0), q(0)],
                vec![q(1), q(0), q(0)],
            ]),
            QMatrix::from_rows(vec![
                vec![qf(-1, 2), q(0), qf(-1, 2)],
                vec![qf(1, 2), q(0), qf(1, 2)],
                vec![q(0), q(0), q(0)],
            ]),
        ])
        .unwrap()
    }

    #[test]
    fn det_generic_scalar_split() {
        let p = det_generic(&square_difference(), 1, DEFAULT_SIZE_CAP).unwrap();
        // (1−ξ₁+ξ₂)(1−ξ₁−ξ₂) = 1 − 2ξ₁ + ξ₁² − ξ₂²
        for (a, b) in [(0, 0), (1, 2), (-3, 5), (7, -1)] {
            let v = p.eval(&[q(a), q(b)]).unwrap();
            assert_eq!(v, q((1 - a + b) * (1 - a - b)));
        }
        assert_eq!(p.num_terms(), 4);
    }

    #[test]
    fn det_generic_degrees() {
        let g = degree_growth(&square_difference(), &[1, 2], DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(g.degrees, vec![(1, 2), (2, 4)]);
        assert_eq!(g.d_l, Some(2));
        let id = MonicPencil::identity(1, 2);
        assert_eq!(det_generic(&id, 3, 12).unwrap().to_string(), "1");
        let one_minus = MonicPencil::from_mats(vec![qmat(&[&[1]])]).unwrap();
        assert_eq!(det_generic(&one_minus, 2, 12).unwrap().degree(), Some(2));
        assert!(matches!(det_generic(&square_difference(), 5, 12), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn det_generic_matches_numeric() {
        let l = two_factor();
        let p = det_generic(&l, 2, 12).unwrap();
        let xs = vec![qmat(&[&[1, -1], &[2, 0]]), qmat(&[&[0, 3], &[1, 1]])];
        let v = p.eval(&generic_point(&xs)).unwrap();
        assert_eq!(v, l.eval(&xs).unwrap().det());
    }

    #[test]
    fn triangularize_two_factor() {
        let l = two_factor();
        for seed in 0..4 {
            let dec = block_triangularize(&l, seed);
            assert!(dec.complete);
            let tl = dec.transformed(&l);
            let mut sizes = dec.block_sizes.clone();
            sizes.sort();
            assert_eq!(sizes, vec![1, 2]);
            let k = dec.block_sizes[0];
            for m in tl.coeffs().mats() {
                for r in k..3 {
                    for c in 0..k {
                        assert!(m.get(r, c).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_blocks() {
        let l = square_difference();
        let ll = l.direct_sum(&l).unwrap();
        assert_eq!(fl_minimal_blocks(&ll, 1).unwrap().len(), 1);
        assert!(fl_minimal_blocks(&MonicPencil::identity(3, 2), 0).unwrap().is_empty());
        let dec = block_triangularize(&ll, 0);
        assert_eq!(dec.block_sizes, vec![3, 3]);
    }

    #[test]
    fn similar_self_and_conjugate() {
        let l = square_difference();
        let p = pencil_similar(&l, &l).unwrap();
        assert!(!p.det().is_zero());
        let s = qmat(&[&[1, 2, 0], &[0, 1, 0], &[1, 0, 1]]);
        let l2 = l.conjugate(&s, &s.inverse().unwrap());
        let p = pencil_similar(&l, &l2).unwrap();
        for j in 0..2 {
            assert_eq!(&p * l.coeffs().get(j), l2.coeffs().get(j) * &p);
        }
        let other = MonicPencil::from_mats(vec![QMatrix::zeros(3, 3), QMatrix::identity(3)]).unwrap();
        assert!(pencil_similar(&l, &other).is_none());
    }
}
