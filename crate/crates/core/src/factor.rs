//! Factorization of noncommutative polynomials into atoms, free-locus
//! comparison and stable association of atoms.

use num::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{irreducible_invariant_subspace_with, is_irreducible_tuple, is_jointly_nilpotent, rng_from_seed};
use crate::decompose::{fl_minimal_blocks, pencil_similar};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::ncpoly::{NCPoly, Word};
use crate::rational::{serde_q, vecops, QVector, Rational};
use crate::realization::{invert_realization, realization_to_poly, realize_inverse_of_poly, Realization};
use crate::subspace::Subspace;
use crate::tuple::{MatrixTuple, MonicPencil};

/// One step of the factorization loop.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SplitCertificate {
    /// Size of the realization that was split.
    pub state_dim: usize,
    /// Irreducible invariant subspace of the coefficients, in that realization's state coordinates.
    #[serde(with = "serde_q::vecvec")]
    pub subspace: Vec<QVector>,
    /// Complement invariant under the nilpotent part.
    #[serde(with = "serde_q::vecvec")]
    pub complement: Vec<QVector>,
    /// The atom peeled off on the right.
    pub atom: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    /// Left to right: `f = unit · factors[0] ⋯ factors[m−1]`.
    pub factors: Vec<NCPoly>,
    pub seed: u64,
    pub certificates: Vec<SplitCertificate>,
    /// False when the search stopped with `NeedsExtension`; the first factor is then unresolved.
    pub complete: bool,
}

#[derive(Serialize, Deserialize)]
struct FactorizationJson {
    #[serde(with = "serde_q")]
    unit: Rational,
    factors: Vec<String>,
    seed: u64,
    certificates: Vec<SplitCertificate>,
    complete: bool,
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactorizationJson {
            unit: self.unit.clone(),
            factors: self.factors.iter().map(|f| f.to_string()).collect(),
            seed: self.seed,
            certificates: self.certificates.clone(),
            complete: self.complete,
        }
        .serialize(s)
    }
}

impl Factorization {
    pub fn product(&self) -> NCPoly {
        let g = self.factors.first().map(|f| f.g()).unwrap_or(0);
        let mut acc = NCPoly::constant(g, self.unit.clone());
        for f in &self.factors {
            acc = &acc * f;
        }
        acc
    }
}

/// Result of splitting a minimal realization of `f⁻¹` along an irreducible
/// invariant subspace: `f = f2·f1` with `f1` the atom belonging to `S`.
pub(crate) struct Split {
    pub f1: NCPoly,
    pub f2: NCPoly,
    /// `(1, c₁, B₁₁, β)`, a minimal realization of `f1⁻¹` in the basis of `S`.
    pub r1: Realization,
    /// Minimal realization of `f2⁻¹` in the basis of the complement.
    pub r2: Realization,
    /// Basis of the complement (columns), invariant under `B − b cᵀ`.
    pub complement: QMatrix,
}

/// Affine solution set `v₀ + span(K)`.
struct Affine {
    v0: QVector,
    dirs: Vec<QVector>,
}

fn solve_affine(rows: &[(QVector, Rational)], k: usize) -> Option<Affine> {
    if rows.is_empty() {
        return Some(Affine { v0: vec![Rational::zero(); k], dirs: crate::matrix::QMatrix::identity(k).to_cols() });
    }
    let m = QMatrix::from_rows(rows.iter().map(|(r, _)| r.clone()).collect());
    let rhs: QVector = rows.iter().map(|(_, c)| c.clone()).collect();
    let v0 = m.solve_vec(&rhs)?;
    Some(Affine { v0, dirs: m.kernel_vectors() })
}

impl Affine {
    /// Value of a linear form if it is constant on the solution set.
    fn fixed(&self, row: &[Rational]) -> Option<Rational> {
        self.dirs
            .iter()
            .all(|d| vecops::dot(row, d).is_zero())
            .then(|| vecops::dot(row, &self.v0))
    }
}

/// Linear equations from `tr w(B − (Bv)c₁ᵀ) = 0` for all words of length `m`,
/// keeping those that become linear once the forms already fixed by `sol` are
/// substituted.
fn trace_equations(b11: &MatrixTuple, c1: &[Rational], m: usize, sol: &Affine) -> Vec<(QVector, Rational)> {
    let g = b11.g();
    let k = b11.n();
    let mut out = Vec::new();
    let total = g.pow(m as u32);
    for code in 0..total {
        let mut letters = Vec::with_capacity(m);
        let mut x = code;
        for _ in 0..m {
            letters.push(x % g);
            x /= g;
        }
        let mut row = vec![Rational::zero(); k];
        let mut constant = Rational::zero();
        let mut linear = true;
        for mask in 0u32..(1 << m) {
            let pos: Vec<usize> = (0..m).filter(|p| mask >> p & 1 == 1).collect();
            if pos.is_empty() {
                let mut p = QMatrix::identity(k);
                for &l in &letters {
                    p = &p * b11.get(l);
                }
                constant += p.trace();
                continue;
            }
            let q = pos.len();
            let sign = if q.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
            let mut known = sign;
            let mut free: Option<QVector> = None;
            let mut ok = true;
            for a in 0..q {
                let start = pos[a];
                let next = pos[(a + 1) % q];
                // c₁ᵀ · B(start+1 .. next−1, cyclically) · B_{next} · v
                let mut r = c1.to_vec();
                let mut p = (start + 1) % m;
                while p != next {
                    r = b11.get(letters[p]).vec_mul(&r);
                    p = (p + 1) % m;
                }
                r = b11.get(letters[next]).vec_mul(&r);
                match sol.fixed(&r) {
                    Some(val) => known *= val,
                    None if free.is_none() => free = Some(r),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                linear = false;
                break;
            }
            match free {
                None => constant += known,
                Some(r) => vecops::axpy(&mut row, &known, &r),
            }
        }
        if linear && !vecops::is_zero(&row) {
            out.push((row, -constant));
        }
    }
    out
}

fn tuple_from(n: usize, mats: Vec<QMatrix>) -> MatrixTuple {
    MatrixTuple::with_size(n, mats).expect("block shapes agree")
}

/// Splits `f` (with `r` a minimal realization of `f⁻¹`) along the invariant
/// subspace `s` of `r.a()`.
pub(crate) fn split(f: &NCPoly, r: &Realization, s: &Subspace) -> Result<Split> {
    let d = r.d();
    let k = s.dim();
    let g = r.g();
    if k == 0 || k == d {
        return Err(Error::pre("split needs a proper nonzero invariant subspace"));
    }
    let e = d - k;
    let sb = s.basis().clone();
    let t0 = s.extend_to_basis();
    let t0_inv = t0.inverse().expect("extended basis is invertible");
    let bt = r.a().conjugate(&t0_inv, &t0);
    let b11 = tuple_from(k, bt.mats().iter().map(|m| m.block(0, 0, k, k)).collect());
    let b12: Vec<QMatrix> = bt.mats().iter().map(|m| m.block(0, k, k, e)).collect();
    let b22 = tuple_from(e, bt.mats().iter().map(|m| m.block(k, k, e, e)).collect());
    if bt.mats().iter().any(|m| !m.block(k, 0, e, k).is_zero()) {
        return Err(Error::pre("subspace is not invariant under the realization"));
    }
    let bc: Vec<QVector> = r.b().iter().map(|v| t0_inv.mul_vec(v)).collect();
    let b1: Vec<QVector> = bc.iter().map(|v| v[..k].to_vec()).collect();
    let b2: Vec<QVector> = bc.iter().map(|v| v[k..].to_vec()).collect();
    let cc = t0.vec_mul(r.c());
    let c1 = cc[..k].to_vec();
    let c2 = cc[k..].to_vec();

    // equations for v with c₁ᵀv = 1 and β_j = B₁₁_j v
    let mut rows: Vec<(QVector, Rational)> = vec![(c1.clone(), Rational::one())];
    for j in 0..g {
        rows.push((b11.get(j).vec_mul(&c1), b11.get(j).trace()));
    }
    // the left factor has lower degree than f: its top coefficients vanish
    let deg = f.degree().unwrap_or(0);
    if deg >= 1 {
        let nmat: Vec<QMatrix> = (0..g).map(|j| r.a().get(j) - &QMatrix::outer(&r.b()[j], r.c())).collect();
        let mut frontier: Vec<(Vec<usize>, QVector)> = vec![(vec![], r.c().clone())];
        for _ in 0..deg - 1 {
            let mut next = Vec::new();
            for (w, row) in &frontier {
                for (i, n) in nmat.iter().enumerate() {
                    let nr = n.vec_mul(row);
                    if !vecops::is_zero(&nr) {
                        let mut w2 = w.clone();
                        w2.push(i);
                        next.push((w2, nr));
                    }
                }
            }
            frontier = next;
        }
        for (w, row) in &frontier {
            let p = sb.vec_mul(row);
            for j in 0..g {
                let mut word = w.clone();
                word.push(j);
                let coef = f.coeff(&Word(word));
                let lhs = b11.get(j).vec_mul(&p);
                if !vecops::is_zero(&lhs) || !coef.is_zero() {
                    rows.push((lhs, -coef));
                }
            }
        }
    }
    let mut sol = solve_affine(&rows, k).ok_or_else(|| Error::Internal("split equations are inconsistent".into()))?;
    let mut len = 2;
    while !sol.dirs.is_empty() && len <= 6 && g.pow(len as u32) <= 4096 {
        rows.extend(trace_equations(&b11, &c1, len, &sol));
        sol = solve_affine(&rows, k).ok_or_else(|| Error::Internal("split equations are inconsistent".into()))?;
        len += 1;
    }
    let v = sol.v0.clone();
    let beta: Vec<QVector> = (0..g).map(|j| b11.get(j).mul_vec(&v)).collect();
    let m11 = tuple_from(k, (0..g).map(|j| b11.get(j) - &QMatrix::outer(&beta[j], &c1)).collect());
    if !is_jointly_nilpotent(&m11) {
        return Err(Error::Internal("could not determine the atomic factor of the split".into()));
    }

    // complement S^× = span(S X + C): linear in X once β is known
    let nx = k * e;
    let idx = |r: usize, c: usize| r * e + c;
    let mut lhs_rows: Vec<QVector> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for j in 0..g {
        let bj11 = b11.get(j);
        let bj22 = b22.get(j);
        for rr in 0..k {
            for cc_ in 0..e {
                let mut row = vec![Rational::zero(); nx];
                for t in 0..k {
                    let x = bj11.get(rr, t);
                    if !x.is_zero() {
                        row[idx(t, cc_)] += x;
                    }
                    let y = &beta[j][rr] * &c1[t];
                    if !y.is_zero() {
                        row[idx(t, cc_)] -= y;
                    }
                }
                for t in 0..e {
                    let x = bj22.get(t, cc_);
                    if !x.is_zero() {
                        row[idx(rr, t)] -= x;
                    }
                }
                lhs_rows.push(row);
                rhs.push(&beta[j][rr] * &c2[cc_] - b12[j].get(rr, cc_));
            }
        }
        for rr in 0..k {
            let mut row = vec![Rational::zero(); nx];
            for t in 0..e {
                row[idx(rr, t)] = b2[j][t].clone();
            }
            lhs_rows.push(row);
            rhs.push(&b1[j][rr] - &beta[j][rr]);
        }
    }
    let sys = QMatrix::from_rows(lhs_rows);
    let xv = sys
        .solve_vec(&rhs)
        .ok_or_else(|| Error::Internal("no complement compatible with the split".into()))?;
    let x = QMatrix::new(k, e, xv);
    let cmat = t0.block(0, k, d, e);
    let complement = &(&sb * &x) + &cmat;
    let c2p = vecops::add(&c2, &x.transpose().mul_vec(&c1));

    let r1 = Realization::new(Rational::one(), c1, b11, beta)?;
    let r2 = Realization::new(Rational::one(), c2p, b22, b2)?;
    let f1 = realization_to_poly(&invert_realization(&r1)?)?;
    let f2 = realization_to_poly(&invert_realization(&r2)?)?;
    if &f2 * &f1 != *f {
        return Err(Error::Internal("split factors do not multiply back to the input".into()));
    }
    Ok(Split { f1, f2, r1, r2, complement })
}

fn normalize(f: &NCPoly) -> Result<(Rational, NCPoly)> {
    let c = f.constant_term();
    if c.is_zero() {
        return Err(Error::not_regular());
    }
    let g = f.scalar_mul(&c.recip());
    Ok((c, g))
}

/// Factorization into atoms, peeling atoms off the right.
pub fn factor(f: &NCPoly, seed: u64) -> Result<Factorization> {
    factor_with(f, &mut rng_from_seed(seed), seed)
}

pub fn factor_with<R: Rng>(f: &NCPoly, rng: &mut R, seed: u64) -> Result<Factorization> {
    let (unit, mut cur) = normalize(f)?;
    let mut peeled = Vec::new();
    let mut certificates = Vec::new();
    let mut complete = true;
    if cur.degree().unwrap_or(0) > 0 {
        let mut r = realize_inverse_of_poly(&cur)?;
        loop {
            if is_irreducible_tuple(r.a()) {
                peeled.push(cur);
                break;
            }
            let s = match irreducible_invariant_subspace_with(r.a(), rng) {
                Ok(s) => s,
                Err(Error::NeedsExtension(_)) => {
                    complete = false;
                    peeled.push(cur);
                    break;
                }
                Err(e) => return Err(e),
            };
            let sp = split(&cur, &r, &s)?;
            certificates.push(SplitCertificate {
                state_dim: r.d(),
                subspace: s.basis_vectors(),
                complement: sp.complement.to_cols(),
                atom: sp.f1.to_string(),
            });
            peeled.push(sp.f1);
            cur = sp.f2;
            r = sp.r2;
        }
    }
    peeled.reverse();
    let out = Factorization { unit, factors: peeled, seed, certificates, complete };
    if out.product() != *f && !(out.factors.is_empty() && f.degree().unwrap_or(0) == 0) {
        return Err(Error::Internal("factorization does not multiply back to the input".into()));
    }
    Ok(out)
}

/// Minimal pencil of `f⁻¹` after normalizing `f(0)` to 1; `None` for constants.
pub fn minimal_pencil(f: &NCPoly) -> Result<Option<MonicPencil>> {
    let (_, g) = normalize(f)?;
    Ok(realize_inverse_of_poly(&g)?.pencil())
}

pub fn is_atom(f: &NCPoly) -> Result<bool> {
    Ok(match minimal_pencil(f)? {
        None => false,
        Some(l) => is_irreducible_tuple(l.coeffs()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocusComparison {
    Equal,
    NotEqual { witness: Option<MatrixTuple> },
}

fn blocks_of(f: &NCPoly, seed: u64) -> Result<Vec<MonicPencil>> {
    match minimal_pencil(f)? {
        None => Ok(Vec::new()),
        Some(l) => fl_minimal_blocks(&l, seed),
    }
}

fn covered(a: &[MonicPencil], b: &[MonicPencil]) -> bool {
    a.iter().all(|x| b.iter().any(|y| pencil_similar(x, y).is_some()))
}

/// `fl(f₁) ⊆ fl(f₂)`.
pub fn locus_subset(f1: &NCPoly, f2: &NCPoly, seed: u64) -> Result<bool> {
    Ok(covered(&blocks_of(f1, seed)?, &blocks_of(f2, seed)?))
}

pub fn locus_equal(f1: &NCPoly, f2: &NCPoly, seed: u64) -> Result<LocusComparison> {
    let b1 = blocks_of(f1, seed)?;
    let b2 = blocks_of(f2, seed)?;
    if b1.len() == b2.len() && covered(&b1, &b2) && covered(&b2, &b1) {
        return Ok(LocusComparison::Equal);
    }
    Ok(LocusComparison::NotEqual { witness: locus_witness(f1, f2, seed) })
}

/// Random integer tuples of sizes 1..3 with entries in [−2, 2] on which exactly
/// one of the two polynomials is singular.
pub fn locus_witness(f1: &NCPoly, f2: &NCPoly, seed: u64) -> Option<MatrixTuple> {
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let g = f1.g().max(f2.g());
    for i in 0..200 {
        let n = 1 + i % 3;
        let xs: Vec<QMatrix> = (0..g)
            .map(|_| {
                let data = (0..n * n).map(|_| Rational::from_integer(rng.random_range(-2..=2).into())).collect();
                QMatrix::new(n, n, data)
            })
            .collect();
        let s1 = f1.with_g(g).ok()?.eval(&xs).ok()?.det().is_zero();
        let s2 = f2.with_g(g).ok()?.eval(&xs).ok()?.det().is_zero();
        if s1 != s2 {
            return MatrixTuple::with_size(n, xs).ok();
        }
    }
    None
}

/// Similarity of the minimal pencils of two atoms, certifying stable association.
pub fn stably_associated_atoms(f1: &NCPoly, f2: &NCPoly) -> Result<Option<QMatrix>> {
    let l1 = minimal_pencil(f1)?;
    let l2 = minimal_pencil(f2)?;
    match (l1, l2) {
        (Some(l1), Some(l2)) => {
            if !is_irreducible_tuple(l1.coeffs()) || !is_irreducible_tuple(l2.coeffs()) {
                return Err(Error::pre("both polynomials must be atoms"));
            }
            Ok(pencil_similar(&l1, &l2))
        }
        _ => Err(Error::pre("constants are not atoms")),
    }
}

/// Size thresholds beyond which irreducibility of the generic determinant
/// certifies an atom: `n₁` for polynomials of degree `δ`, `n₂` for pencils of size `d`.
pub fn conv_thresholds(delta: usize, d: usize) -> Result<(usize, usize)> {
    if delta < 2 || d < 2 {
        return Err(Error::pre("thresholds need degree > 1 and size > 1"));
    }
    let n1 = delta.div_ceil(2);
    let n2 = if d == 2 {
        1
    } else {
        // smallest m with m ≥ (d−1)·sqrt(2(d−1)²/(d−2) + 1/4) + (d−1)/2 − 2, exactly
        let dm1 = Rational::from_integer((d as i64 - 1).into());
        let inner = Rational::from_integer(2.into()) * &dm1 * &dm1 / Rational::from_integer((d as i64 - 2).into())
            + Rational::new(1.into(), 4.into());
        let target = &dm1 * &dm1 * inner;
        let shift = &dm1 / Rational::from_integer(2.into()) - Rational::from_integer(2.into());
        let mut m: i64 = 0;
        loop {
            let lhs = Rational::from_integer(m.into()) - &shift;
            if !lhs.is_negative() && &lhs * &lhs >= target {
                break;
            }
            m += 1;
        }
        m.max(1) as usize
    };
    Ok((n1, n2))
}
