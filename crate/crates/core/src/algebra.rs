//! The unital algebra generated by a matrix tuple: spans, Burnside test,
//! joint nilpotency and invariant subspaces over ℚ.

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{q, QVector, Rational};
use crate::subspace::{EchelonBasis, Subspace};
use crate::tuple::{MatrixTuple, MonicPencil};

/// Default number of random algebra elements tried before giving up.
pub const MAX_TRIALS: usize = 64;

/// Seeded generator used by every randomized routine.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn flatten(m: &QMatrix) -> QVector {
    m.entries().to_vec()
}

/// Basis of the unital algebra generated by the tuple, found breadth-first:
/// start from `I`, multiply each new element on the left by every generator.
pub fn algebra_span(a: &MatrixTuple) -> Vec<QMatrix> {
    let n = a.n();
    let mut ech = EchelonBasis::new(n * n);
    let mut basis = Vec::new();
    let id = QMatrix::identity(n);
    if n == 0 {
        return basis;
    }
    ech.insert(&flatten(&id));
    basis.push(id);
    let mut frontier = 0;
    while frontier < basis.len() && basis.len() < n * n {
        let m = basis[frontier].clone();
        frontier += 1;
        for gen in a.mats() {
            let p = gen * &m;
            if ech.insert(&flatten(&p)) {
                basis.push(p);
            }
        }
    }
    basis
}

pub fn algebra_dim(a: &MatrixTuple) -> usize {
    algebra_span(a).len()
}

/// Burnside: the coefficients generate the full matrix algebra.
pub fn is_irreducible_pencil(l: &MonicPencil) -> bool {
    is_irreducible_tuple(l.coeffs())
}

pub fn is_irreducible_tuple(a: &MatrixTuple) -> bool {
    let n = a.n();
    n > 0 && algebra_dim(a) == n * n
}

/// ∩_j ker A_j
pub fn common_kernel(a: &MatrixTuple) -> Subspace {
    let n = a.n();
    if a.g() == 0 {
        return Subspace::full(n);
    }
    let mut stacked = a.get(0).clone();
    for m in &a.mats()[1..] {
        stacked = stacked.vstack(m);
    }
    stacked.kernel()
}

/// Quotient action on `ℚⁿ / S`: returns the induced tuple together with the
/// basis `[S | C]` used, where the columns of `C` represent the quotient.
pub fn quotient(a: &MatrixTuple, s: &Subspace) -> (MatrixTuple, QMatrix) {
    let p = s.extend_to_basis();
    let p_inv = p.inverse().expect("extended basis is invertible");
    let k = s.dim();
    let n = a.n();
    let mats = a
        .mats()
        .iter()
        .map(|m| (&(&p_inv * m) * &p).block(k, k, n - k, n - k))
        .collect();
    (MatrixTuple::with_size(n - k, mats).unwrap(), p)
}

/// Recursive common-kernel test.
pub fn is_jointly_nilpotent(a: &MatrixTuple) -> bool {
    let mut cur = a.clone();
    loop {
        if cur.n() == 0 {
            return true;
        }
        let k = common_kernel(&cur);
        if k.is_zero() {
            return false;
        }
        if k.is_full() {
            return true;
        }
        cur = quotient(&cur, &k).0;
    }
}

/// Basis `P` with every `P⁻¹ A_j P` strictly upper triangular, built from the
/// iterated common kernels; `None` if the tuple is not jointly nilpotent.
pub fn nilpotent_flag_basis(a: &MatrixTuple) -> Option<QMatrix> {
    let n = a.n();
    let mut cols: Vec<QVector> = Vec::with_capacity(n);
    while cols.len() < n {
        let flag = Subspace::from_vectors(n, &cols);
        let (quo, p) = quotient(a, &flag);
        let k = common_kernel(&quo);
        if k.is_zero() {
            return None;
        }
        let off = cols.len();
        for v in k.basis_vectors() {
            let mut full = vec![Rational::zero(); n];
            full[off..].clone_from_slice(&v);
            cols.push(p.mul_vec(&full));
        }
    }
    Some(QMatrix::from_cols(n, &cols))
}

/// Smallest subspace containing the given vectors and invariant under the tuple.
pub fn spin(a: &MatrixTuple, seeds: &[QVector]) -> Subspace {
    let n = a.n();
    let mut ech = EchelonBasis::new(n);
    let mut queue: Vec<QVector> = Vec::new();
    for v in seeds {
        if ech.insert(v) {
            queue.push(v.clone());
        }
    }
    let mut i = 0;
    while i < queue.len() && ech.dim() < n {
        let v = queue[i].clone();
        i += 1;
        for m in a.mats() {
            let w = m.mul_vec(&v);
            if ech.insert(&w) {
                queue.push(w);
            }
        }
    }
    ech.into_subspace()
}

/// Outcome of the invariant-subspace search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantSearch {
    /// The tuple generates the full matrix algebra.
    Irreducible,
    /// A proper nonzero invariant subspace.
    Subspace(Subspace),
    /// Reducible over the algebraic closure but no rational subspace was found.
    NeedsExtension,
}

fn random_vector<R: Rng>(rng: &mut R, n: usize) -> QVector {
    loop {
        let v: QVector = (0..n).map(|_| q(rng.random_range(-3..=3))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn random_in_span<R: Rng>(rng: &mut R, basis: &[QVector], n: usize) -> QVector {
    if basis.is_empty() {
        return vec![Rational::zero(); n];
    }
    loop {
        let mut v = vec![Rational::zero(); n];
        for b in basis {
            let c = q(rng.random_range(-3..=3));
            crate::rational::vecops::axpy(&mut v, &c, b);
        }
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn random_element<R: Rng>(rng: &mut R, basis: &[QMatrix]) -> QMatrix {
    let n = basis[0].rows();
    let mut acc = QMatrix::zeros(n, n);
    for b in basis {
        let c = q(rng.random_range(-3..=3));
        if !c.is_zero() {
            acc = &acc + &b.scale(&c);
        }
    }
    acc
}

fn proper(s: &Subspace) -> bool {
    !s.is_zero() && !s.is_full()
}

/// Centre of the algebra spanned by `basis` (commutant of the generators inside it).
fn center(a: &MatrixTuple, basis: &[QMatrix]) -> Vec<QMatrix> {
    let n = a.n();
    let m = basis.len();
    // columns: vec(M_i A_j − A_j M_i) stacked over j
    let mut cols: Vec<QVector> = Vec::with_capacity(m);
    for b in basis {
        let mut col = Vec::with_capacity(a.g() * n * n);
        for gen in a.mats() {
            let c = &(b * gen) - &(gen * b);
            col.extend(c.entries().iter().cloned());
        }
        cols.push(col);
    }
    if cols[0].is_empty() {
        return basis.to_vec();
    }
    let sys = QMatrix::from_cols(cols[0].len(), &cols);
    sys.kernel_vectors()
        .into_iter()
        .map(|k| {
            let mut acc = QMatrix::zeros(n, n);
            for (c, b) in k.iter().zip(basis) {
                if !c.is_zero() {
                    acc = &acc + &b.scale(c);
                }
            }
            acc
        })
        .collect()
}

/// Jacobson radical of the algebra via the trace form (characteristic 0).
fn radical(basis: &[QMatrix]) -> Vec<QMatrix> {
    let m = basis.len();
    let n = basis[0].rows();
    let mut gram = QMatrix::zeros(m, m);
    for i in 0..m {
        for k in i..m {
            let mut t = Rational::zero();
            for r in 0..n {
                for c in 0..n {
                    let x = basis[i].get(r, c);
                    let y = basis[k].get(c, r);
                    if !x.is_zero() && !y.is_zero() {
                        t += x * y;
                    }
                }
            }
            gram.set(i, k, t.clone());
            gram.set(k, i, t);
        }
    }
    gram.kernel_vectors()
        .into_iter()
        .map(|k| {
            let mut acc = QMatrix::zeros(n, n);
            for (c, b) in k.iter().zip(basis) {
                if !c.is_zero() {
                    acc = &acc + &b.scale(c);
                }
            }
            acc
        })
        .collect()
}

/// Candidate subspaces from a single algebra element: eigenspaces for rational
/// eigenvalues, generalized eigenspaces, and the kernel of the cofactor that
/// carries the irrational part of the spectrum.
fn element_candidates(r: &QMatrix) -> Vec<Subspace> {
    let n = r.rows();
    let p = r.char_poly();
    let roots = p.rational_roots();
    let mut out = Vec::new();
    for (lam, mult) in &roots {
        let shifted = r - &QMatrix::scalar(n, lam);
        out.push(shifted.kernel());
        if *mult > 1 {
            out.push(shifted.pow(*mult).kernel());
        }
    }
    if !roots.is_empty() {
        let h = p.strip_rational_roots();
        if h.degree().unwrap_or(0) > 0 {
            out.push(h.eval_matrix(r).kernel());
        }
    }
    out.retain(proper);
    out
}

/// Seeded search for a proper nonzero invariant subspace over ℚ.
pub fn find_invariant_subspace(a: &MatrixTuple, seed: u64) -> InvariantSearch {
    find_invariant_subspace_with(a, &mut rng_from_seed(seed), MAX_TRIALS)
}

pub fn find_invariant_subspace_with<R: Rng>(a: &MatrixTuple, rng: &mut R, max_trials: usize) -> InvariantSearch {
    let n = a.n();
    if n <= 1 {
        return InvariantSearch::Irreducible;
    }
    let basis = algebra_span(a);
    if basis.len() == n * n {
        return InvariantSearch::Irreducible;
    }
    // a common kernel vector spans an invariant line
    let k = common_kernel(a);
    if !k.is_zero() {
        let v = random_in_span(rng, &k.basis_vectors(), n);
        return InvariantSearch::Subspace(Subspace::from_vectors(n, &[v]));
    }
    let at = a.transpose();
    let kt = common_kernel(&at);
    if !kt.is_zero() {
        let w = random_in_span(rng, &kt.basis_vectors(), n);
        return InvariantSearch::Subspace(Subspace::from_vectors(n, &[w]).annihilator());
    }

    let mut structural: Option<Vec<Subspace>> = None;
    let mut centre: Option<Vec<QMatrix>> = None;
    for _ in 0..max_trials {
        // cyclic submodules and their duals
        let u = random_vector(rng, n);
        let s = spin(a, &[u]);
        if proper(&s) {
            return InvariantSearch::Subspace(s);
        }
        let w = random_vector(rng, n);
        let s = spin(&at, &[w]);
        if proper(&s) {
            return InvariantSearch::Subspace(s.annihilator());
        }
        // radical image and annihilator
        let structural = structural.get_or_insert_with(|| {
            let rad = radical(&basis);
            let mut out = Vec::new();
            if !rad.is_empty() {
                let mut img = Vec::new();
                for r in &rad {
                    img.extend(r.to_cols());
                }
                out.push(Subspace::from_vectors(n, &img));
                let stacked = rad.iter().skip(1).fold(rad[0].clone(), |acc, r| acc.vstack(r));
                out.push(stacked.kernel());
            }
            out.retain(proper);
            out
        });
        if !structural.is_empty() {
            let mut c = structural.clone();
            c.shuffle(rng);
            return InvariantSearch::Subspace(c.swap_remove(0));
        }
        // eigenspaces of a random central element are invariant
        let centre = centre.get_or_insert_with(|| center(a, &basis));
        if centre.len() > 1 {
            let z = random_element(rng, centre);
            let mut cands = element_candidates(&z);
            cands.retain(|s| a.mats().iter().all(|m| s.is_invariant_under(m)));
            if !cands.is_empty() {
                cands.shuffle(rng);
                return InvariantSearch::Subspace(cands.swap_remove(0));
            }
        }
        // spin vectors out of spectral subspaces of a random element
        let r = random_element(rng, &basis);
        let mut cands: Vec<(bool, Subspace)> = element_candidates(&r).into_iter().map(|s| (false, s)).collect();
        cands.extend(element_candidates(&r.transpose()).into_iter().map(|s| (true, s)));
        cands.shuffle(rng);
        for (dual, cand) in cands {
            let v = random_in_span(rng, &cand.basis_vectors(), n);
            if dual {
                let s = spin(&at, &[v]);
                if proper(&s) {
                    return InvariantSearch::Subspace(s.annihilator());
                }
            } else {
                let s = spin(a, &[v]);
                if proper(&s) {
                    return InvariantSearch::Subspace(s);
                }
            }
        }
    }
    InvariantSearch::NeedsExtension
}

/// A minimal nonzero invariant subspace whose restricted tuple is absolutely
/// irreducible. For an irreducible tuple this is the whole space.
pub fn irreducible_invariant_subspace(a: &MatrixTuple, seed: u64) -> Result<Subspace> {
    irreducible_invariant_subspace_with(a, &mut rng_from_seed(seed))
}

pub fn irreducible_invariant_subspace_with<R: Rng>(a: &MatrixTuple, rng: &mut R) -> Result<Subspace> {
    let n = a.n();
    let mut cur = Subspace::full(n);
    loop {
        let restricted = a.restrict(&cur);
        match find_invariant_subspace_with(&restricted, rng, MAX_TRIALS) {
            InvariantSearch::Irreducible => return Ok(cur),
            InvariantSearch::Subspace(inner) => {
                let vs: Vec<QVector> = inner.basis_vectors().iter().map(|c| cur.vector(c)).collect();
                cur = Subspace::from_vectors(n, &vs);
            }
            InvariantSearch::NeedsExtension => {
                return Err(Error::NeedsExtension(format!(
                    "a {}-dimensional invariant subspace has no rational refinement; its restriction is \
                     reducible only over an extension of Q",
                    cur.dim()
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qmat;
    use crate::rational::{qf, vecops};
    use crate::subspace::span_i64;

    pub(crate) fn square_difference() -> MatrixTuple {
        MatrixTuple::new(vec![
            qmat(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 0]]),
            qmat(&[&[0, 0, 1], &[0, 0, 1], &[0, 1, 0]]),
        ])
        .unwrap()
    }

    pub(crate) fn two_factor() -> MatrixTuple {
        MatrixTuple::new(vec![
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
    fn span_examples() {
        assert_eq!(algebra_dim(&MatrixTuple::new(vec![qmat(&[&[0]])]).unwrap()), 1);
        assert_eq!(algebra_dim(&square_difference()), 9);
        let su = MatrixTuple::new(vec![
            qmat(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]),
            qmat(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]),
        ])
        .unwrap();
        assert_eq!(algebra_dim(&su), 4);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible_pencil(&MonicPencil::identity(1, 2)));
        assert!(is_irreducible_pencil(&MonicPencil::new(square_difference()).unwrap()));
        let l = MonicPencil::new(square_difference()).unwrap();
        assert!(!is_irreducible_pencil(&l.direct_sum(&l).unwrap()));
    }

    #[test]
    fn nilpotency_examples() {
        let t = MatrixTuple::new(vec![qmat(&[&[0, 1], &[0, 0]]), qmat(&[&[0, 2], &[0, 0]])]).unwrap();
        assert!(is_jointly_nilpotent(&t));
        let t = MatrixTuple::new(vec![qmat(&[&[0, 1], &[0, 0]]), qmat(&[&[0, 0], &[1, 0]])]).unwrap();
        assert!(!is_jointly_nilpotent(&t));
        assert!(is_jointly_nilpotent(&MatrixTuple::zeros(0, 2)));
    }

    #[test]
    fn invariant_subspace_examples() {
        assert_eq!(find_invariant_subspace(&square_difference(), 0), InvariantSearch::Irreducible);
        let v = vec![q(-1), qf(3, 2), q(1)];
        let plane = span_i64(3, &[&[1, 0, 1], &[-1, 1, 0]]);
        let line = Subspace::from_vectors(3, std::slice::from_ref(&v));
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..16 {
            match find_invariant_subspace(&two_factor(), seed) {
                InvariantSearch::Subspace(s) => {
                    assert!(two_factor().mats().iter().all(|m| s.is_invariant_under(m)));
                    seen.insert(s.dim());
                    if s.dim() == 1 {
                        assert_eq!(s, line);
                    } else {
                        assert_eq!(s, plane);
                    }
                }
                other => panic!("{other:?}"),
            }
        }
        assert_eq!(seen.len(), 2, "both subspaces reachable by seed");
        let su = MatrixTuple::new(vec![
            qmat(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]),
            qmat(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]),
        ])
        .unwrap();
        assert_eq!(
            find_invariant_subspace(&su, 3),
            InvariantSearch::Subspace(Subspace::from_vectors(3, &[vecops::unit(3, 0)]))
        );
    }

    #[test]
    fn flag_basis_triangularizes() {
        let t = MatrixTuple::new(vec![
            qmat(&[&[0, 0, 0], &[1, 0, 0], &[2, 3, 0]]),
            qmat(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]),
        ])
        .unwrap();
        let p = nilpotent_flag_basis(&t).unwrap();
        let pi = p.inverse().unwrap();
        for m in t.conjugate(&pi, &p).mats() {
            for r in 0..3 {
                for c in 0..=r {
                    assert!(m.get(r, c).is_zero());
                }
            }
        }
        assert!(nilpotent_flag_basis(&MatrixTuple::new(vec![qmat(&[&[1]])]).unwrap()).is_none());
    }

    #[test]
    fn not_absolutely_irreducible_needs_extension() {
        // rotation by 90 degrees: irreducible over Q, splits over Q(i)
        let t = MatrixTuple::new(vec![qmat(&[&[0, -1], &[1, 0]])]).unwrap();
        assert_eq!(find_invariant_subspace(&t, 0), InvariantSearch::NeedsExtension);
        assert!(matches!(irreducible_invariant_subspace(&t, 0), Err(Error::NeedsExtension(_))));
    }
}
