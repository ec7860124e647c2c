//! Fixed inputs shared by the benchmarks.

use freeloci::{invert_realization, realization, MonicPencil, NCPoly, QMatrix, Realization};

pub const TWO_FACTOR: &str = "1 + 3/2*x1 + 1/2*x2 + 1/2*x1^2 + 1/2*x1*x2 + 1/2*x2*x1 + 1/2*x1*x2*x1";

pub fn two_factor() -> NCPoly {
    NCPoly::parse(TWO_FACTOR).expect("valid polynomial")
}

/// Pencil whose free locus is that of `(1 − x1)² − x2²`.
pub fn square_difference() -> MonicPencil {
    MonicPencil::from_mats(vec![
        QMatrix::from_i64(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 0]]),
        QMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 1], &[0, 1, 0]]),
    ])
    .expect("square coefficients")
}

/// Non-minimal realization of `f⁻¹` built term by term.
pub fn redundant_inverse(f: &NCPoly) -> Realization {
    let r = realization::realize_poly_by_terms(f).expect("f(0) != 0");
    invert_realization(&r).expect("invertible constant term")
}

/// Product of `k` shifted copies of the atom `1 + x1·x2 + c·x2`.
pub fn atom_chain(k: usize) -> NCPoly {
    let mut acc = NCPoly::one(2);
    for i in 0..k {
        let a = NCPoly::parse(&format!("1 + x1*x2 + {}*x2 - x1", i + 1)).expect("valid polynomial");
        acc = acc.try_mul(&a).expect("same variables");
    }
    acc
}
