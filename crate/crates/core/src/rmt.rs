//! Gaussian random-matrix ensembles (GUE and Altland–Zirnbauer classes C and
//! D) and a dense Hermitian eigensolver.
//!
//! Class C matrices have the form `H = A ⊗ 1 + Σ_i S_i ⊗ σ_i` with `A`
//! imaginary antisymmetric and each `S_i` real symmetric, stored spin-major
//! (index `spin · N + orbital`). They satisfy `σ₂ H* σ₂ = −H`, so eigenvalues
//! come in ± pairs. Class D matrices are `H = A` alone.
//!
//! Each matrix is drawn from a ChaCha stream selected by `(seed,
//! sample_index)`, with entries consumed in a fixed order, so a sample is
//! bit-identical no matter how samples are distributed over threads.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Tolerance (relative to the largest entry) for accepting a matrix as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
const QL_MAX_ITERATIONS: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RmtError {
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e} (relative {relative:.3e})")]
    NotHermitian { asymmetry: f64, relative: f64 },
    #[error("matrix data has length {len}, expected {expected}")]
    Shape { len: usize, expected: usize },
    #[error("QL iteration did not converge for eigenvalue {0}")]
    NoConvergence(usize),
    #[error("ensemble spec is invalid: {0}")]
    InvalidSpec(&'static str),
    #[error("expected a {expected} ensemble, got {got}")]
    WrongClass { expected: EnsembleClass, got: EnsembleClass },
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Wraps row-major data, checking the Hermitian property.
    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self, RmtError> {
        if data.len() != n * n {
            return Err(RmtError::Shape {
                len: data.len(),
                expected: n * n,
            });
        }
        let m = HermitianMatrix { n, data };
        m.check_hermitian()?;
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = HermitianMatrix::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)`; callers keep the matrix Hermitian.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Sets `(i, j)` to `v` and `(j, i)` to its conjugate.
    pub fn set_pair(&mut self, i: usize, j: usize, v: Complex64) {
        self.set(i, j, v);
        self.set(j, i, v.conj());
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |H_ij − conj(H_ji)|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<(), RmtError> {
        let asymmetry = self.max_asymmetry();
        let scale = self.max_abs();
        let relative = if scale > 0.0 { asymmetry / scale } else { 0.0 };
        if relative > HERMITIAN_TOLERANCE {
            return Err(RmtError::NotHermitian { asymmetry, relative });
        }
        Ok(())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }
}

/// Householder reduction to real symmetric tridiagonal form. Returns the
/// diagonal, the sub-diagonal (length n, last entry 0) and, if requested, the
/// data needed to map tridiagonal eigenvectors back.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    reflectors: Vec<(usize, Vec<Complex64>)>,
    phases: Vec<Complex64>,
}

fn tridiagonalize(m: &HermitianMatrix, keep_reflectors: bool) -> Tridiagonal {
    let n = m.n;
    let mut a = m.data.clone();
    let mut reflectors = Vec::new();
    let mut sub = vec![Complex64::new(0.0, 0.0); n];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let len = n - start;
        let norm = (start..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[start * n + k];
        if norm == 0.0 || (len == 1) {
            sub[k] = x0;
            continue;
        }
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let vk = &mut v[..len];
        for (t, i) in (start..n).enumerate() {
            vk[t] = a[i * n + k];
        }
        vk[0] -= alpha;
        let vnorm = vk.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            sub[k] = x0;
            continue;
        }
        for z in vk.iter_mut() {
            *z /= vnorm;
        }
        // p = B v, B the trailing block
        let pk = &mut p[..len];
        for (ti, i) in (start..n).enumerate() {
            let row = &a[i * n + start..i * n + n];
            pk[ti] = row.iter().zip(vk.iter()).map(|(b, x)| b * x).sum();
        }
        let kappa: Complex64 = vk.iter().zip(pk.iter()).map(|(x, y)| x.conj() * y).sum();
        for (pi, vi) in pk.iter_mut().zip(vk.iter()) {
            *pi -= vi * kappa.re;
        }
        // B ← B − 2 v q* − 2 q v*
        for (ti, i) in (start..n).enumerate() {
            let vi2 = vk[ti] * 2.0;
            let qi2 = pk[ti] * 2.0;
            let row = &mut a[i * n + start..i * n + n];
            for (tj, b) in row.iter_mut().enumerate() {
                *b -= vi2 * pk[tj].conj() + qi2 * vk[tj].conj();
            }
        }
        sub[k] = alpha;
        if keep_reflectors {
            reflectors.push((start, vk.to_vec()));
        }
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut off = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let e = sub[i];
        off[i] = e.norm();
        phases[i + 1] = if off[i] > 0.0 { phases[i] * e / off[i] } else { phases[i] };
    }
    Tridiagonal {
        diag,
        off,
        reflectors,
        phases,
    }
}

/// Implicitly shifted QL on a real symmetric tridiagonal matrix. `off[i]`
/// couples `i` and `i + 1`. Rotations are accumulated into `z` (row-major
/// n×n, columns are eigenvectors) when given.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<(), RmtError> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > QL_MAX_ITERATIONS {
                return Err(RmtError::NoConvergence(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full spectrum of a Hermitian matrix, ascending.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>, RmtError> {
    m.check_hermitian()?;
    let t = tridiagonalize(m, false);
    let (mut d, mut e) = (t.diag, t.off);
    tridiagonal_ql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues (ascending) with unit eigenvectors.
pub fn eigh(m: &HermitianMatrix) -> Result<(Vec<f64>, Vec<Vec<Complex64>>), RmtError> {
    m.check_hermitian()?;
    let n = m.n;
    let t = tridiagonalize(m, true);
    let (mut d, mut e) = (t.diag, t.off);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let vectors = order
        .iter()
        .map(|&col| {
            let mut x: Vec<Complex64> = (0..n).map(|i| t.phases[i] * z[i * n + col]).collect();
            for (start, v) in t.reflectors.iter().rev() {
                let dot: Complex64 = v.iter().zip(&x[*start..]).map(|(a, b)| a.conj() * b).sum();
                for (xi, vi) in x[*start..].iter_mut().zip(v) {
                    *xi -= vi * dot * 2.0;
                }
            }
            x
        })
        .collect();
    let values = order.iter().map(|&i| d[i]).collect();
    Ok((values, vectors))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnsembleClass {
    Gue,
    C,
    D,
}

impl fmt::Display for EnsembleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleClass::Gue => "GUE",
            EnsembleClass::C => "C",
            EnsembleClass::D => "D",
        })
    }
}

impl FromStr for EnsembleClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "GUE" => Ok(EnsembleClass::Gue),
            "C" => Ok(EnsembleClass::C),
            "D" => Ok(EnsembleClass::D),
            _ => Err(format!("unknown ensemble class {s:?} (expected GUE, C or D)")),
        }
    }
}

/// Ensemble parameters. Class C matrices are `2N × 2N`; GUE and class D are
/// `N × N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub class: EnsembleClass,
    pub base_dim: usize,
    pub variance: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(class: EnsembleClass, base_dim: usize, variance: f64, seed: u64) -> Result<Self, RmtError> {
        let spec = EnsembleSpec {
            class,
            base_dim,
            variance,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), RmtError> {
        if self.base_dim < 1 {
            return Err(RmtError::InvalidSpec("base dimension must be >= 1"));
        }
        if !(self.variance > 0.0 && self.variance.is_finite()) {
            return Err(RmtError::InvalidSpec("variance must be positive"));
        }
        Ok(())
    }

    /// Size of the sampled matrices.
    pub fn matrix_dim(&self) -> usize {
        match self.class {
            EnsembleClass::C => 2 * self.base_dim,
            _ => self.base_dim,
        }
    }
}

/// One sorted spectrum drawn from an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    pub eigenvalues: Vec<f64>,
    pub spec: EnsembleSpec,
    pub sample_index: u64,
}

impl SpectrumSample {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max_k |λ_k + λ_{n−1−k}|` relative to the spectral radius.
    pub fn pairing_residual(&self) -> f64 {
        pairing_residual(&self.eigenvalues)
    }
}

pub fn pairing_residual(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let radius = sorted.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if radius == 0.0 {
        return 0.0;
    }
    (0..n)
        .map(|k| (sorted[k] + sorted[n - 1 - k]).abs())
        .fold(0.0, f64::max)
        / radius
}

/// Deterministic Gaussian stream for one sample.
struct EntryStream {
    rng: ChaCha8Rng,
    scale: f64,
}

impl EntryStream {
    fn new(spec: &EnsembleSpec, sample_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(sample_index);
        EntryStream {
            rng,
            scale: spec.variance.sqrt(),
        }
    }

    fn next(&mut self) -> f64 {
        let x: f64 = StandardNormal.sample(&mut self.rng);
        x * self.scale
    }
}

fn gue_matrix(spec: &EnsembleSpec, sample_index: u64) -> HermitianMatrix {
    let n = spec.base_dim;
    let mut stream = EntryStream::new(spec, sample_index);
    let mut m = HermitianMatrix::zeros(n);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        m.set(i, i, Complex64::new(stream.next(), 0.0));
        for j in i + 1..n {
            let re = stream.next() * half;
            let im = stream.next() * half;
            m.set_pair(i, j, Complex64::new(re, im));
        }
    }
    m
}

/// `A_jk = i K_jk` with K real antisymmetric, upper triangle drawn row by row.
fn imaginary_antisymmetric(n: usize, stream: &mut EntryStream) -> Vec<f64> {
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let x = stream.next();
            k[i * n + j] = x;
            k[j * n + i] = -x;
        }
    }
    k
}

fn real_symmetric(n: usize, stream: &mut EntryStream) -> Vec<f64> {
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x = stream.next();
            s[i * n + j] = x;
            s[j * n + i] = x;
        }
    }
    s
}

fn class_c_matrix(spec: &EnsembleSpec, sample_index: u64) -> HermitianMatrix {
    let n = spec.base_dim;
    let mut stream = EntryStream::new(spec, sample_index);
    let k = imaginary_antisymmetric(n, &mut stream);
    let s1 = real_symmetric(n, &mut stream);
    let s2 = real_symmetric(n, &mut stream);
    let s3 = real_symmetric(n, &mut stream);
    let mut h = HermitianMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let idx = i * n + j;
            let a = Complex64::new(0.0, k[idx]);
            h.set(i, j, a + s3[idx]);
            h.set(n + i, n + j, a - s3[idx]);
            h.set(i, n + j, Complex64::new(s1[idx], -s2[idx]));
            h.set(n + i, j, Complex64::new(s1[idx], s2[idx]));
        }
    }
    h
}

fn class_d_matrix(spec: &EnsembleSpec, sample_index: u64) -> HermitianMatrix {
    let n = spec.base_dim;
    let mut stream = EntryStream::new(spec, sample_index);
    let k = imaginary_antisymmetric(n, &mut stream);
    HermitianMatrix {
        n,
        data: k.into_iter().map(|x| Complex64::new(0.0, x)).collect(),
    }
}

/// The matrix for `(spec, sample_index)`; bit-identical across calls.
pub fn ensemble_matrix(spec: &EnsembleSpec, sample_index: u64) -> Result<HermitianMatrix, RmtError> {
    spec.validate()?;
    Ok(match spec.class {
        EnsembleClass::Gue => gue_matrix(spec, sample_index),
        EnsembleClass::C => class_c_matrix(spec, sample_index),
        EnsembleClass::D => class_d_matrix(spec, sample_index),
    })
}

/// `max |σ₂ H* σ₂ + H|` over entries, for a spin-major `2N × 2N` matrix.
pub fn particle_hole_residual_c(h: &HermitianMatrix) -> f64 {
    let n = h.dim() / 2;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            // σ₂ X* σ₂ = [[X₁₁*, −X₁₀*], [−X₀₁*, X₀₀*]] blockwise
            let pairs = [
                (h.get(n + i, n + j).conj(), h.get(i, j)),
                (-h.get(n + i, j).conj(), h.get(i, n + j)),
                (-h.get(i, n + j).conj(), h.get(n + i, j)),
                (h.get(i, j).conj(), h.get(n + i, n + j)),
            ];
            for (conjugated, original) in pairs {
                worst = worst.max((conjugated + original).norm());
            }
        }
    }
    worst
}

/// `max |H* + H|` over entries; zero for imaginary antisymmetric matrices.
pub fn particle_hole_residual_d(h: &HermitianMatrix) -> f64 {
    h.data.iter().map(|z| (z.conj() + z).norm()).fold(0.0, f64::max)
}

fn expect_class(spec: &EnsembleSpec, class: EnsembleClass) -> Result<(), RmtError> {
    if spec.class != class {
        return Err(RmtError::WrongClass {
            expected: class,
            got: spec.class,
        });
    }
    Ok(())
}

/// Draws and diagonalises sample `sample_index` of any ensemble.
pub fn sample(spec: &EnsembleSpec, sample_index: u64) -> Result<SpectrumSample, RmtError> {
    let m = ensemble_matrix(spec, sample_index)?;
    Ok(SpectrumSample {
        eigenvalues: eigenvalues(&m)?,
        spec: *spec,
        sample_index,
    })
}

pub fn sample_gue(spec: &EnsembleSpec, sample_index: u64) -> Result<SpectrumSample, RmtError> {
    expect_class(spec, EnsembleClass::Gue)?;
    sample(spec, sample_index)
}

pub fn sample_class_c(spec: &EnsembleSpec, sample_index: u64) -> Result<SpectrumSample, RmtError> {
    expect_class(spec, EnsembleClass::C)?;
    sample(spec, sample_index)
}

pub fn sample_class_d(spec: &EnsembleSpec, sample_index: u64) -> Result<SpectrumSample, RmtError> {
    expect_class(spec, EnsembleClass::D)?;
    sample(spec, sample_index)
}

/// Samples `0..count` in parallel, returned in index order.
pub fn sample_many(spec: &EnsembleSpec, count: u64) -> Result<Vec<SpectrumSample>, RmtError> {
    (0..count).into_par_iter().map(|i| sample(spec, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_spectra() {
        let mut id = HermitianMatrix::zeros(3);
        for i in 0..3 {
            id.set(i, i, c(1.0, 0.0));
        }
        assert_eq!(eigenvalues(&id).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = HermitianMatrix::from_real_diagonal(&[5.0, -2.0, 0.0]);
        assert_eq!(eigenvalues(&d).unwrap(), vec![-2.0, 0.0, 5.0]);
        assert!(eigenvalues(&HermitianMatrix::zeros(0)).unwrap().is_empty());
        let one = HermitianMatrix::from_real_diagonal(&[3.5]);
        assert_eq!(eigenvalues(&one).unwrap(), vec![3.5]);
    }

    #[test]
    fn two_by_two_complex() {
        // [[1, i], [−i, 1]] has eigenvalues 0 and 2
        let m = HermitianMatrix::from_rows(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]).unwrap();
        let ev = eigenvalues(&m).unwrap();
        assert!((ev[0]).abs() < 1e-15 && (ev[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = HermitianMatrix::from_rows(2, vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, RmtError::NotHermitian { asymmetry, .. } if (asymmetry - 2.0).abs() < 1e-15));
        let mut m = HermitianMatrix::zeros(2);
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, 1.0));
        assert!(eigenvalues(&m).is_err());
    }

    #[test]
    fn eigenvector_residuals() {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, 40, 1.0, 3).unwrap();
        let m = ensemble_matrix(&spec, 0).unwrap();
        let (values, vectors) = eigh(&m).unwrap();
        let norm = m.norm();
        for (lambda, v) in values.iter().zip(&vectors) {
            let hv = m.mul_vec(v);
            let res: f64 = hv.iter().zip(v).map(|(a, b)| (a - b * lambda).norm_sqr()).sum::<f64>().sqrt();
            assert!(res < 1e-8 * norm);
            let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((vn - 1.0).abs() < 1e-12);
        }
        assert_eq!(values, eigenvalues(&m).unwrap());
    }

    #[test]
    fn gue_single_entry_mean() {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, 1, 1.0, 11).unwrap();
        let samples = sample_many(&spec, 10_000).unwrap();
        let mean = samples.iter().map(|s| s.eigenvalues[0]).sum::<f64>() / 10_000.0;
        assert!(mean.abs() < 3.0 / 100.0);
    }

    #[test]
    fn gue_trace_is_preserved() {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, 2, 1.0, 5).unwrap();
        for i in 0..50 {
            let m = ensemble_matrix(&spec, i).unwrap();
            let ev = eigenvalues(&m).unwrap();
            assert!((ev.iter().sum::<f64>() - m.trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn class_c_n1_is_pauli_vector() {
        let spec = EnsembleSpec::new(EnsembleClass::C, 1, 1.0, 2).unwrap();
        let m = ensemble_matrix(&spec, 0).unwrap();
        let (s1, s3) = (m.get(0, 1).re, m.get(0, 0).re);
        let s2 = -m.get(0, 1).im;
        assert_eq!(m.get(0, 0), -m.get(1, 1));
        let mag = (s1 * s1 + s2 * s2 + s3 * s3).sqrt();
        let ev = eigenvalues(&m).unwrap();
        assert!((ev[0] + mag).abs() < 1e-14 && (ev[1] - mag).abs() < 1e-14);
    }

    #[test]
    fn class_c_structure() {
        let spec = EnsembleSpec::new(EnsembleClass::C, 50, 1.0, 9).unwrap();
        let m = ensemble_matrix(&spec, 0).unwrap();
        assert_eq!(m.dim(), 100);
        assert_eq!(particle_hole_residual_c(&m), 0.0);
        let s = sample_class_c(&spec, 0).unwrap();
        assert!(s.pairing_residual() < 1e-10);
    }

    #[test]
    fn class_d_small_cases() {
        let spec = EnsembleSpec::new(EnsembleClass::D, 2, 1.0, 4).unwrap();
        let m = ensemble_matrix(&spec, 0).unwrap();
        let a = m.get(0, 1).im;
        let ev = eigenvalues(&m).unwrap();
        assert!((ev[0] + a.abs()).abs() < 1e-15 && (ev[1] - a.abs()).abs() < 1e-15);
        assert_eq!(particle_hole_residual_d(&m), 0.0);
        let spec = EnsembleSpec::new(EnsembleClass::D, 3, 1.0, 4).unwrap();
        for i in 0..20 {
            let ev = sample_class_d(&spec, i).unwrap().eigenvalues;
            assert_eq!(ev.iter().filter(|x| x.abs() < 1e-10).count(), 1);
        }
    }

    #[test]
    fn wrong_class_is_rejected() {
        let spec = EnsembleSpec::new(EnsembleClass::D, 3, 1.0, 4).unwrap();
        assert!(matches!(sample_gue(&spec, 0), Err(RmtError::WrongClass { .. })));
        assert!(EnsembleSpec::new(EnsembleClass::D, 0, 1.0, 4).is_err());
        assert!(EnsembleSpec::new(EnsembleClass::D, 3, 0.0, 4).is_err());
    }

    #[test]
    fn class_parsing() {
        assert_eq!("gue".parse::<EnsembleClass>(), Ok(EnsembleClass::Gue));
        assert_eq!("C".parse::<EnsembleClass>(), Ok(EnsembleClass::C));
        assert!("AI".parse::<EnsembleClass>().is_err());
        assert_eq!(EnsembleClass::D.to_string(), "D");
    }

    /// Characteristic polynomial coefficients (monic, highest first) by
    /// Faddeev–LeVerrier.
    fn char_poly(m: &HermitianMatrix) -> Vec<f64> {
        let n = m.dim();
        let mut coeffs = vec![1.0];
        let mut mk = vec![c(0.0, 0.0); n * n];
        let mut am = vec![c(0.0, 0.0); n * n];
        for k in 1..=n {
            let prev = *coeffs.last().unwrap();
            // M_k = A M_{k−1} + c_{n−k+1} I
            let mut next = am.clone();
            for i in 0..n {
                next[i * n + i] += prev;
            }
            mk.copy_from_slice(&next);
            for i in 0..n {
                for j in 0..n {
                    am[i * n + j] = (0..n).map(|l| m.get(i, l) * mk[l * n + j]).sum();
                }
            }
            let tr: f64 = (0..n).map(|i| am[i * n + i].re).sum();
            coeffs.push(-tr / k as f64);
        }
        coeffs
    }

    fn poly_roots_by_bisection(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        let eval = |x: f64| coeffs.iter().fold(0.0, |acc, &c| acc * x + c);
        let steps = 200_000;
        let h = (hi - lo) / steps as f64;
        let mut roots = Vec::new();
        let mut a = lo;
        let mut fa = eval(a);
        for i in 1..=steps {
            let b = lo + h * i as f64;
            let fb = eval(b);
            if fa == 0.0 {
                roots.push(a);
            } else if fa * fb < 0.0 {
                let (mut x0, mut x1, mut f0) = (a, b, fa);
                for _ in 0..200 {
                    let mid = 0.5 * (x0 + x1);
                    let fm = eval(mid);
                    if fm * f0 <= 0.0 {
                        x1 = mid;
                    } else {
                        x0 = mid;
                        f0 = fm;
                    }
                }
                roots.push(0.5 * (x0 + x1));
            }
            a = b;
            fa = fb;
        }
        roots
    }

    #[test]
    fn matches_characteristic_polynomial_oracle() {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, 8, 1.0, 21).unwrap();
        for idx in 0..3 {
            let m = ensemble_matrix(&spec, idx).unwrap();
            let coeffs = char_poly(&m);
            let bound = m.norm() + 1.0;
            let oracle = poly_roots_by_bisection(&coeffs, -bound, bound);
            let ev = eigenvalues(&m).unwrap();
            assert_eq!(oracle.len(), 8);
            for (a, b) in ev.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn semicircle_density() {
        // edge of the GUE spectrum sits at 2σ√N
        let n = 200;
        let spec = EnsembleSpec::new(EnsembleClass::Gue, n, 1.0, 17).unwrap();
        let samples = sample_many(&spec, 500).unwrap();
        let radius = 2.0 * (n as f64).sqrt();
        let bins = 40;
        let width = 2.0 / bins as f64;
        let mut hist = vec![0usize; bins];
        let mut total = 0usize;
        for s in &samples {
            for &x in &s.eigenvalues {
                let u = x / radius;
                total += 1;
                let b = ((u + 1.0) / width).floor();
                if b >= 0.0 && (b as usize) < bins {
                    hist[b as usize] += 1;
                }
            }
        }
        let cdf = |u: f64| 0.5 + (u * (1.0 - u * u).sqrt() + u.asin()) / std::f64::consts::PI;
        let worst = (0..bins)
            .map(|b| {
                let lo = -1.0 + width * b as f64;
                let expect = (cdf(lo + width) - cdf(lo)) / width;
                let got = hist[b] as f64 / (total as f64 * width);
                (got - expect).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 0.05, "sup deviation {worst}");
    }

    #[test]
    fn samples_are_seed_deterministic() {
        let spec = EnsembleSpec::new(EnsembleClass::C, 10, 0.7, 99).unwrap();
        let parallel = sample_many(&spec, 16).unwrap();
        for s in &parallel {
            assert_eq!(ensemble_matrix(&spec, s.sample_index).unwrap(), ensemble_matrix(&spec, s.sample_index).unwrap());
            assert_eq!(s, &sample(&spec, s.sample_index).unwrap());
        }
        assert_ne!(parallel[0].eigenvalues, parallel[1].eigenvalues);
        let other_seed = EnsembleSpec { seed: 100, ..spec };
        assert_ne!(sample(&other_seed, 0).unwrap().eigenvalues, parallel[0].eigenvalues);
    }
}
