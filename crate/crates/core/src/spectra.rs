//! Floating-point evaluation of pencils: positivity domain, boundary rays,
//! kernel dimensions and Jacobi-formula gradients.

use nalgebra::{Complex, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::tuple::MonicPencil;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Relative singular-value threshold for kernel dimensions.
pub const RANK_TOL: f64 = 1e-8;
/// Eigenvalues within this (scaled) distance of 0 count towards the algebraic multiplicity.
pub const ZERO_CLUSTER_TOL: f64 = 1e-7;
/// Slack for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-9;
/// A gradient component above this marks a smooth point.
pub const GRADIENT_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const BISECTION_STEPS: usize = 80;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    pub rank: f64,
    pub zero_cluster: f64,
    pub psd: f64,
    pub gradient: f64,
}

pub const TOLERANCES: Tolerances =
    Tolerances { rank: RANK_TOL, zero_cluster: ZERO_CLUSTER_TOL, psd: PSD_TOL, gradient: GRADIENT_TOL };

/// Monic pencil with complex coefficients, `I − Σ A_j x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPencil {
    d: usize,
    coeffs: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct HPencilJson {
    d: usize,
    g: usize,
    /// `coeffs[j][row][col] = [re, im]`
    coeffs: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn matrix_to_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    let m = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::dim("ragged matrix"));
    }
    Ok(CMatrix::from_fn(n, m, |r, c| C64::new(rows[r][c][0], rows[r][c][1])))
}

impl Serialize for HPencil {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HPencilJson { d: self.d, g: self.coeffs.len(), coeffs: self.coeffs.iter().map(matrix_to_json).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPencil {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HPencilJson::deserialize(d)?;
        if j.coeffs.len() != j.g {
            return Err(serde::de::Error::custom("g does not match the number of coefficients"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|m| matrix_from_json(m))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        HPencil::new(j.d, coeffs).map_err(serde::de::Error::custom)
    }
}

fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).iter().all(|z| z.norm() <= tol * (1.0 + m.norm()))
}

impl HPencil {
    /// Any square complex coefficients; hermitian checks happen where needed.
    pub fn new(d: usize, coeffs: Vec<CMatrix>) -> Result<Self> {
        if d == 0 {
            return Err(Error::dim("pencil size must be at least 1"));
        }
        if coeffs.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::dim(format!("coefficients must be {d}x{d}")));
        }
        Ok(HPencil { d, coeffs })
    }

    pub fn from_monic(l: &MonicPencil) -> Self {
        let d = l.d();
        let coeffs = l
            .coeffs()
            .mats()
            .iter()
            .map(|m| CMatrix::from_fn(d, d, |r, c| C64::new(to_f64(m.get(r, c)), 0.0)))
            .collect();
        HPencil { d, coeffs }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn g(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn is_hermitian(&self) -> bool {
        self.coeffs.iter().all(|m| is_hermitian(m, HERMITIAN_TOL))
    }

    pub fn direct_sum(&self, o: &HPencil) -> Result<HPencil> {
        if self.g() != o.g() {
            return Err(Error::VariableCount(self.g(), o.g()));
        }
        let d = self.d + o.d;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| {
                let mut m = CMatrix::zeros(d, d);
                m.view_mut((0, 0), (self.d, self.d)).copy_from(a);
                m.view_mut((self.d, self.d), (o.d, o.d)).copy_from(b);
                m
            })
            .collect();
        HPencil::new(d, coeffs)
    }

    fn check_point(&self, xs: &[CMatrix]) -> Result<usize> {
        if xs.len() != self.g() {
            return Err(Error::dim(format!("expected {} matrices, got {}", self.g(), xs.len())));
        }
        let n = xs.first().map(|x| x.nrows()).unwrap_or(1);
        if xs.iter().any(|x| x.nrows() != n || x.ncols() != n) {
            return Err(Error::dim("point must consist of square matrices of equal size"));
        }
        Ok(n)
    }

    /// `Σ A_j ⊗ X_j`.
    pub fn kron_sum(&self, xs: &[CMatrix]) -> Result<CMatrix> {
        let n = self.check_point(xs)?;
        let mut m = CMatrix::zeros(self.d * n, self.d * n);
        for (a, x) in self.coeffs.iter().zip(xs) {
            m += a.kronecker(x);
        }
        Ok(m)
    }

    /// `L(X) = I − Σ A_j ⊗ X_j`.
    pub fn eval(&self, xs: &[CMatrix]) -> Result<CMatrix> {
        let m = self.kron_sum(xs)?;
        Ok(CMatrix::identity(m.nrows(), m.ncols()) - m)
    }
}

pub fn is_hermitian_tuple(xs: &[CMatrix]) -> bool {
    xs.iter().all(|x| is_hermitian(x, HERMITIAN_TOL))
}

fn min_eigenvalue(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// `L(X) ⪰ 0` for hermitian `L` and `X`.
pub fn psd_membership(l: &HPencil, xs: &[CMatrix]) -> Result<bool> {
    if !l.is_hermitian() || !is_hermitian_tuple(xs) {
        return Err(Error::pre("positivity needs hermitian coefficients and a hermitian point"));
    }
    let m = l.eval(xs)?;
    let scale = 1.0 + m.norm();
    Ok(min_eigenvalue(&m) >= -PSD_TOL * scale)
}

/// Adjugate from an SVD, stable at singular matrices:
/// `adj M = det(U)·det(V*)·V·diag(Π_{k≠i} σ_k)·U*`.
pub fn adjugate(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v requested");
    let s = &svd.singular_values;
    let mut prod_except = DVector::<C64>::zeros(n);
    for i in 0..n {
        let mut p = 1.0;
        for k in 0..n {
            if k != i {
                p *= s[k];
            }
        }
        prod_except[i] = C64::new(p, 0.0);
    }
    let phase = u.determinant() * v_t.determinant();
    let v = v_t.adjoint();
    let u_h = u.adjoint();
    v * CMatrix::from_diagonal(&prod_except) * u_h * phase
}

/// `∂ det L(X) / ∂(X_j)_{ıȷ} = −tr(adj L(X) (A_j ⊗ E_{ıȷ}))`, indexed `j·n² + ı·n + ȷ`.
pub fn jacobi_gradient(l: &HPencil, xs: &[CMatrix]) -> Result<Vec<C64>> {
    let n = l.check_point(xs)?;
    let adj = adjugate(&l.eval(xs)?);
    let d = l.d();
    let mut grad = Vec::with_capacity(l.g() * n * n);
    for a_j in &l.coeffs {
        for i in 0..n {
            for k in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..d {
                    for b in 0..d {
                        let c = a_j[(a, b)];
                        if c != C64::new(0.0, 0.0) {
                            acc += adj[(b * n + k, a * n + i)] * c;
                        }
                    }
                }
                grad.push(-acc);
            }
        }
    }
    Ok(grad)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PointClass {
    pub det_value: f64,
    pub det_imag: f64,
    pub kernel_dim: usize,
    pub alg_multiplicity: usize,
    pub in_domain: bool,
    pub on_boundary: bool,
    pub gradient_norm: f64,
    /// Some gradient component exceeds the tolerance.
    pub smooth: bool,
    pub tolerances: Tolerances,
}

/// Singular values below `RANK_TOL · max(σ_max, 1)`.
pub fn kernel_dim(m: &CMatrix) -> usize {
    let s = m.clone().singular_values();
    let max = s.iter().cloned().fold(1.0, f64::max);
    s.iter().filter(|&&x| x <= RANK_TOL * max).count()
}

/// Eigenvalues clustered at 0, or the stable kernel dimension of `Mᵏ`
/// (clustering alone misses longer Jordan chains, whose eigenvalues scatter
/// like `ε^{1/k}`).
fn alg_multiplicity(m: &CMatrix) -> usize {
    let scale = 1.0 + m.norm();
    let clustered = match m.clone().schur().eigenvalues() {
        Some(ev) => ev.iter().filter(|z| z.norm() <= ZERO_CLUSTER_TOL * scale).count(),
        None => 0,
    };
    let mut power = m.clone();
    let mut dim = kernel_dim(&power);
    while dim > 0 && dim < m.nrows() {
        power = &power * m;
        let next = kernel_dim(&power);
        if next == dim {
            break;
        }
        dim = next;
    }
    clustered.max(dim)
}

/// Kernel dimension, algebraic multiplicity of 0, and smoothness via Jacobi's formula.
pub fn classify_point(l: &HPencil, xs: &[CMatrix]) -> Result<PointClass> {
    let m = l.eval(xs)?;
    let det = m.determinant();
    let kd = kernel_dim(&m);
    let am = alg_multiplicity(&m).max(kd);
    let grad = jacobi_gradient(l, xs)?;
    let gradient_norm = grad.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let smooth = grad.iter().any(|z| z.norm() > GRADIENT_TOL);
    let in_domain = l.is_hermitian() && is_hermitian_tuple(xs) && {
        let scale = 1.0 + m.norm();
        min_eigenvalue(&m) >= -PSD_TOL * scale
    };
    Ok(PointClass {
        det_value: det.re,
        det_imag: det.im,
        kernel_dim: kd,
        alg_multiplicity: am,
        in_domain,
        on_boundary: in_domain && kd > 0,
        gradient_norm,
        smooth,
        tolerances: TOLERANCES,
    })
}

/// Gaussian hermitian matrix: real normal diagonal, complex normal off-diagonal.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let x: f64 = StandardNormal.sample(rng);
        m[(i, i)] = C64::new(x, 0.0);
        for j in i + 1..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            let z = C64::new(re, im) / std::f64::consts::SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random hermitian pencil with real symmetric integer coefficients in [−3, 3].
pub fn random_integer_symmetric_pencil(d: usize, g: usize, seed: u64) -> MonicPencil {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = (0..g)
        .map(|_| {
            let mut m = crate::matrix::QMatrix::zeros(d, d);
            for i in 0..d {
                for j in i..d {
                    let v = crate::rational::q(rng.random_range(-3..=3));
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            m
        })
        .collect();
    MonicPencil::from_mats(mats).expect("square coefficients")
}

fn ray_rng(seed: u64, ray: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ray as u64);
    rng
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub ray: usize,
    pub t: f64,
    #[serde(skip)]
    pub point: Vec<CMatrix>,
    pub class: PointClass,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundarySample {
    pub n: usize,
    pub rays: usize,
    pub seed: u64,
    pub points: Vec<BoundaryPoint>,
    /// No ray reached the boundary.
    pub empty: bool,
}

/// Shoots `count` random hermitian rays from 0 and bisects for the first `t`
/// where `L(tX₀)` becomes singular.
pub fn boundary_sample(l: &HPencil, n: usize, count: usize, seed: u64) -> Result<BoundarySample> {
    if !l.is_hermitian() {
        return Err(Error::pre("boundary sampling needs a hermitian pencil"));
    }
    let mut points = Vec::new();
    for ray in 0..count {
        let mut rng = ray_rng(seed, ray);
        let dir: Vec<CMatrix> = (0..l.g()).map(|_| random_hermitian(&mut rng, n)).collect();
        let m = l.kron_sum(&dir)?;
        let mh = (&m + m.adjoint()).scale(0.5);
        let lmax = mh.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if lmax <= 1e-12 {
            continue;
        }
        // λ_min(I − tM) is decreasing in t; positive at 0, negative at 2/λ_max
        let (mut lo, mut hi) = (0.0, 2.0 / lmax);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let val = min_eigenvalue(&(CMatrix::identity(m.nrows(), m.ncols()) - m.scale(mid)));
            if val > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        let point: Vec<CMatrix> = dir.iter().map(|x| x.scale(t)).collect();
        let class = classify_point(l, &point)?;
        points.push(BoundaryPoint { ray, t, point, class });
    }
    let empty = points.is_empty();
    Ok(BoundarySample { n, rays: count, seed, points, empty })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub hits: usize,
    pub kernel_dim_one: usize,
    pub fraction: f64,
    pub tolerances: Tolerances,
}

/// Fraction of boundary hits with a one-dimensional kernel.
pub fn smooth_density_experiment(l: &HPencil, n: usize, samples: usize, seed: u64) -> Result<DensityReport> {
    let s = boundary_sample(l, n, samples, seed)?;
    let hits = s.points.len();
    let one = s.points.iter().filter(|p| p.class.kernel_dim == 1).count();
    Ok(DensityReport {
        n,
        samples,
        seed,
        hits,
        kernel_dim_one: one,
        fraction: if hits == 0 { 0.0 } else { one as f64 / hits as f64 },
        tolerances: TOLERANCES,
    })
}

fn block_diag(x: &CMatrix, y: &CMatrix) -> CMatrix {
    let (p, q) = (x.nrows(), y.nrows());
    let mut m = CMatrix::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(x);
    m.view_mut((p, p), (q, q)).copy_from(y);
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectSumReport {
    pub x: PointClass,
    pub y: PointClass,
    pub sum: PointClass,
    pub y_on_locus: bool,
    /// Singular when `Y` is on the locus; otherwise smooth exactly when `X` is.
    pub expected_smooth: bool,
    pub consistent: bool,
}

pub fn direct_sum_smoothness(l: &HPencil, xs: &[CMatrix], ys: &[CMatrix]) -> Result<DirectSumReport> {
    let cx = classify_point(l, xs)?;
    if cx.kernel_dim == 0 {
        return Err(Error::pre("X is not on the free locus"));
    }
    let cy = classify_point(l, ys)?;
    let sum: Vec<CMatrix> = xs.iter().zip(ys).map(|(x, y)| block_diag(x, y)).collect();
    let cs = classify_point(l, &sum)?;
    let y_on = cy.kernel_dim > 0;
    let expected_smooth = !y_on && cx.smooth;
    Ok(DirectSumReport { consistent: cs.smooth == expected_smooth, x: cx, y: cy, sum: cs, y_on_locus: y_on, expected_smooth })
}

/// `π(v)`: the `d×n` reshaping of a kernel vector of `L(X)`, returned by columns.
pub fn hair_vectors(v: &DVector<C64>, d: usize, n: usize) -> Vec<DVector<C64>> {
    (0..n).map(|i| DVector::from_fn(d, |a, _| v[a * n + i])).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HairReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub points_used: usize,
    pub dimension: usize,
}

/// Numerical rank of the hair vectors collected at boundary points with a
/// one-dimensional kernel.
pub fn hair_span_estimate(l: &HPencil, n: usize, samples: usize, seed: u64) -> Result<HairReport> {
    let s = boundary_sample(l, n, samples, seed)?;
    let d = l.d();
    let mut cols: Vec<DVector<C64>> = Vec::new();
    let mut used = 0;
    for p in s.points.iter().filter(|p| p.class.kernel_dim == 1) {
        let m = l.eval(&p.point)?;
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("v requested");
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &x)| if x < acc.1 { (i, x) } else { acc });
        let v: DVector<C64> = v_t.row(idx).adjoint();
        cols.extend(hair_vectors(&v, d, n));
        used += 1;
    }
    let dimension = if cols.is_empty() {
        0
    } else {
        let m = CMatrix::from_columns(&cols);
        let sv = m.singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        sv.iter().filter(|&&x| x > 1e-6 * max).count()
    };
    Ok(HairReport { n, samples, seed, points_used: used, dimension })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qmat;

    fn real(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_fn(rows.len(), rows[0].len(), |r, c| C64::new(rows[r][c], 0.0))
    }

    fn scalar_pencil() -> HPencil {
        HPencil::new(1, vec![real(&[&[1.0]])]).unwrap()
    }

    fn square_difference() -> HPencil {
        HPencil::from_monic(
            &MonicPencil::from_mats(vec![
                qmat(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 0]]),
                qmat(&[&[0, 0, 1], &[0, 0, 1], &[0, 1, 0]]),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn membership() {
        let l = scalar_pencil();
        assert!(psd_membership(&l, &[real(&[&[0.0]])]).unwrap());
        assert!(!psd_membership(&l, &[real(&[&[2.0]])]).unwrap());
        assert!(psd_membership(&l, &[real(&[&[1.0]])]).unwrap());
        let c = classify_point(&l, &[real(&[&[1.0]])]).unwrap();
        assert!(c.on_boundary);
    }

    #[test]
    fn singular_and_smooth_points() {
        let l = square_difference();
        let x = vec![real(&[&[1.0, 0.0], &[0.0, 1.0]]), real(&[&[0.0, 0.0], &[-1.0, -1.0]])];
        let y = vec![real(&[&[2.0, 0.5], &[0.0, 1.0]]), real(&[&[0.0, 0.0], &[2.0, 1.0]])];
        let cx = classify_point(&l, &x).unwrap();
        assert_eq!(cx.kernel_dim, 1);
        assert!(!cx.smooth, "{cx:?}");
        let cy = classify_point(&l, &y).unwrap();
        assert_eq!(cy.kernel_dim, 1);
        assert!(cy.smooth);
        assert!(cy.alg_multiplicity >= 2, "{cy:?}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let l = square_difference();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<CMatrix> = (0..2).map(|_| random_hermitian(&mut rng, 2)).collect();
        let grad = jacobi_gradient(&l, &xs).unwrap();
        let h = 1e-6;
        for j in 0..2 {
            for i in 0..2 {
                for k in 0..2 {
                    let mut p = xs.clone();
                    let mut m = xs.clone();
                    p[j][(i, k)] += C64::new(h, 0.0);
                    m[j][(i, k)] -= C64::new(h, 0.0);
                    let fd = (l.eval(&p).unwrap().determinant() - l.eval(&m).unwrap().determinant()) / (2.0 * h);
                    let g = grad[j * 4 + i * 2 + k];
                    assert!((fd - g).norm() <= 1e-4 * (1.0 + g.norm()), "{fd} vs {g}");
                }
            }
        }
    }

    #[test]
    fn boundary_rays() {
        let s = boundary_sample(&scalar_pencil(), 1, 20, 3).unwrap();
        assert!(!s.empty);
        for p in &s.points {
            assert_eq!(p.class.kernel_dim, 1);
            assert!((p.point[0][(0, 0)].re - 1.0).abs() < 1e-9);
        }
        let nil = HPencil::new(2, vec![real(&[&[0.0, 0.0], &[0.0, 0.0]])]).unwrap();
        assert!(boundary_sample(&nil, 2, 10, 0).unwrap().empty);
    }

    #[test]
    fn density_examples() {
        let l = scalar_pencil();
        assert_eq!(smooth_density_experiment(&l, 1, 30, 1).unwrap().fraction, 1.0);
        let dup = l.direct_sum(&l).unwrap();
        assert_eq!(smooth_density_experiment(&dup, 1, 30, 1).unwrap().fraction, 0.0);
    }

    #[test]
    fn direct_sums() {
        let l = square_difference();
        let x = vec![real(&[&[1.0, 0.0], &[0.0, 1.0]]), real(&[&[0.0, 0.0], &[-1.0, -1.0]])];
        let y0 = vec![CMatrix::zeros(1, 1), CMatrix::zeros(1, 1)];
        let r = direct_sum_smoothness(&l, &x, &y0).unwrap();
        assert!(!r.sum.smooth && r.consistent);
        let r = direct_sum_smoothness(&l, &x, &x).unwrap();
        assert!(r.y_on_locus && !r.sum.smooth);
    }

    #[test]
    fn hair() {
        assert_eq!(hair_span_estimate(&scalar_pencil(), 2, 20, 0).unwrap().dimension, 1);
        let l = HPencil::from_monic(&random_integer_symmetric_pencil(2, 2, 11));
        assert_eq!(hair_span_estimate(&l, 2, 40, 0).unwrap().dimension, 2);
    }

    #[test]
    fn json_roundtrip() {
        let l = square_difference();
        let s = serde_json::to_string(&l).unwrap();
        let back: HPencil = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }
}
