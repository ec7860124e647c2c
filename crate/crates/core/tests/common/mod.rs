//! Random instance generators shared by the property and acceptance suites.
#![allow(dead_code)]

use freeloci::rational::Rational;
use freeloci::{
    is_atom, is_jointly_nilpotent, minimal_pencil, pencil_similar, realize_inverse_of_poly, MatrixTuple,
    MonicPencil, NCPoly, PerturbationData, QMatrix, Word,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p ∈ [−3, 3]`, `q ∈ {1, 2, 3}`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.random_range(-3i64..=3).into(), rng.random_range(1i64..=3).into())
}

fn words(g: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out.iter().flat_map(|w| (0..g).map(move |j| w.concat(&Word::letter(j)))).collect();
    }
    out
}

/// Dense random polynomial with `f(0) = 1` and exact degree `deg`.
pub fn random_poly<R: Rng>(rng: &mut R, g: usize, deg: usize) -> NCPoly {
    loop {
        let mut f = NCPoly::one(g);
        for k in 1..=deg {
            for w in words(g, k) {
                if k < deg && rng.random_bool(0.3) {
                    continue;
                }
                f.add_term(w, small_rational(rng));
            }
        }
        if f.degree() == Some(deg) {
            return f;
        }
    }
}

pub fn random_atom<R: Rng>(rng: &mut R, g: usize, deg: usize) -> NCPoly {
    loop {
        let f = random_poly(rng, g, deg);
        if is_atom(&f).unwrap() {
            return f;
        }
    }
}

/// Product of 1–3 atoms in `g ∈ {2, 3}` variables, total degree at most 4.
pub fn random_atom_product<R: Rng>(rng: &mut R) -> (NCPoly, Vec<NCPoly>) {
    let g = rng.random_range(2..=3);
    let k = rng.random_range(1..=3);
    let mut degrees = vec![1; k];
    let mut budget = 4 - k;
    while budget > 0 && rng.random_bool(0.5) {
        let i = rng.random_range(0..k);
        if degrees[i] < 2 {
            degrees[i] += 1;
        }
        budget -= 1;
    }
    let atoms: Vec<NCPoly> = degrees.iter().map(|&d| random_atom(rng, g, d)).collect();
    let mut f = NCPoly::one(g);
    for a in &atoms {
        f = f.try_mul(a).unwrap();
    }
    (f, atoms)
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> QMatrix {
    let data = (0..n * n).map(|_| Rational::from_integer(rng.random_range(lo..=hi).into())).collect();
    QMatrix::new(n, n, data)
}

pub fn random_tuple<R: Rng>(rng: &mut R, g: usize, n: usize) -> Vec<QMatrix> {
    (0..g).map(|_| random_int_matrix(rng, n, -2, 2)).collect()
}

pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> (QMatrix, QMatrix) {
    loop {
        let t = random_int_matrix(rng, n, -2, 2);
        if let Some(ti) = t.inverse() {
            return (t, ti);
        }
    }
}

/// Whether the two lists can be matched one-to-one by pencil similarity.
pub fn similar_matching(a: &[MonicPencil], b: &[MonicPencil]) -> bool {
    fn go(a: &[MonicPencil], b: &[MonicPencil], used: &mut Vec<bool>) -> bool {
        let Some((first, rest)) = a.split_first() else { return true };
        for j in 0..b.len() {
            if !used[j] && first.d() == b[j].d() && pencil_similar(first, &b[j]).is_some() {
                used[j] = true;
                if go(rest, b, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    a.len() == b.len() && go(a, b, &mut vec![false; b.len()])
}

pub fn atom_pencils(fs: &[NCPoly]) -> Vec<MonicPencil> {
    fs.iter().filter_map(|f| minimal_pencil(f).unwrap()).collect()
}

/// Perturbation data `(A, b, c)` of the minimal realization of `f⁻¹`,
/// optionally conjugated by a random basis change.
pub fn perturbation_of<R: Rng>(rng: &mut R, f: &NCPoly, scramble: bool) -> PerturbationData {
    let r = realize_inverse_of_poly(f).unwrap();
    let c = r.c().clone();
    let a = r.a().map_indexed(|j, m| m - &QMatrix::outer(&r.b()[j], &c));
    assert!(is_jointly_nilpotent(&a));
    if !scramble {
        return PerturbationData::new(a, r.b().to_vec(), c).unwrap();
    }
    let d = a.n();
    let (t, ti) = random_invertible(rng, d);
    let a = a.conjugate(&t, &ti);
    let b = r.b().iter().map(|v| t.mul_vec(v)).collect();
    let c = ti.transpose().mul_vec(&c);
    PerturbationData::new(a, b, c).unwrap()
}

pub fn shuffled<T: Clone, R: Rng>(rng: &mut R, xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.shuffle(rng);
    v
}

pub fn tuple(n: usize, xs: Vec<QMatrix>) -> MatrixTuple {
    MatrixTuple::with_size(n, xs).unwrap()
}
