//! Unfolding, spacing and pair statistics, near-zero densities and low zeros
//! of the quadratic-character family.

use crate::arith::{real_primitive_characters, ArithError, Character};
use crate::lfunc::{self, LfuncError};
use crate::rmt::SpectrumSample;
use crate::zeros::{self, ZeroList, ZerosError};
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

pub const MIN_UNFOLD_ZEROS: usize = 10;
pub const MIN_KS_SPACINGS: usize = 50;
pub const MIN_PAIR_POINTS: usize = 500;
pub const DEFAULT_BULK_WINDOW: f64 = 0.6;
pub const UNFOLD_DEGREE: usize = 5;
pub const PAIR_BIN_WIDTH: f64 = 0.1;
/// Near-zero bins are this fraction of the mean level spacing at zero.
pub const NEAR_ZERO_BIN_FRACTION: f64 = 0.25;
/// Bulk reference window for near-zero densities, as fractions of the mean
/// spectral radius.
pub const BULK_WINDOW: (f64, f64) = (0.05, 0.15);
const FAMILY_SCAN_STEP: f64 = 0.02;
const FAMILY_REFINEMENT: f64 = 10.0;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("sequence is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("bulk window fraction {0} must lie in (0, 1]")]
    InvalidWindow(f64),
    #[error("degenerate unfolding fit: {0}")]
    DegenerateFit(&'static str),
    #[error("bin width must be positive, got {0}")]
    InvalidBinWidth(f64),
    #[error("empty sample set")]
    NoSamples,
    #[error("modulus {modulus} has no real even primitive character")]
    NoEvenCharacter { modulus: u64 },
    #[error("lowest zero for modulus {modulus} could not be certified")]
    Uncertified { modulus: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Lfunc(#[from] LfuncError),
    #[error(transparent)]
    Zeros(#[from] ZerosError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceSource {
    Zeros,
    LZeros,
    Ensemble,
    Synthetic,
}

/// Increasing sequence rescaled to unit mean spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedSequence {
    values: Vec<f64>,
    source: SequenceSource,
    window: (f64, f64),
}

impl UnfoldedSequence {
    /// Rescales `values` about the first point so that the mean spacing is 1.
    /// `window` records the original range the values came from.
    pub fn new(values: Vec<f64>, source: SequenceSource, window: (f64, f64)) -> Result<Self, SpectraError> {
        if values.len() < 2 {
            return Err(SpectraError::TooFew { needed: 2, got: values.len() });
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(SpectraError::NotIncreasing(i + 1));
        }
        let first = values[0];
        let mean = (values[values.len() - 1] - first) / (values.len() - 1) as f64;
        let values = values.into_iter().map(|x| first + (x - first) / mean).collect();
        Ok(UnfoldedSequence { values, source, window })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> SequenceSource {
        self.source
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacings(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn mean_spacing(&self) -> f64 {
        (self.values[self.len() - 1] - self.values[0]) / (self.len() - 1) as f64
    }
}

/// `x_k = N̄(γ_k)`, then renormalised to unit mean spacing.
pub fn unfold_zeros(zeros: &ZeroList) -> Result<UnfoldedSequence, SpectraError> {
    unfold_ordinates(zeros.gammas(), SequenceSource::Zeros, |g| lfunc::smooth_count(g).exact)
}

/// Unfolds L-function zero ordinates with the family density
/// `(E/2π) log(dE/2πe)`.
pub fn unfold_l_zeros(gammas: &[f64], modulus: u64) -> Result<UnfoldedSequence, SpectraError> {
    let d = modulus as f64;
    unfold_ordinates(gammas, SequenceSource::LZeros, |g| g / (2.0 * PI) * (d * g / (2.0 * PI * std::f64::consts::E)).ln())
}

fn unfold_ordinates<F: Fn(f64) -> f64>(gammas: &[f64], source: SequenceSource, smooth: F) -> Result<UnfoldedSequence, SpectraError> {
    if gammas.len() < MIN_UNFOLD_ZEROS {
        return Err(SpectraError::TooFew {
            needed: MIN_UNFOLD_ZEROS,
            got: gammas.len(),
        });
    }
    let window = (gammas[0], gammas[gammas.len() - 1]);
    UnfoldedSequence::new(gammas.iter().map(|&g| smooth(g)).collect(), source, window)
}

/// Least-squares polynomial coefficients (lowest first) via modified
/// Gram–Schmidt QR on the Vandermonde matrix.
fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>, SpectraError> {
    let m = x.len();
    let n = degree + 1;
    if m < n + 1 {
        return Err(SpectraError::DegenerateFit("fewer points than coefficients"));
    }
    let mut q: Vec<Vec<f64>> = (0..n).map(|j| x.iter().map(|&xi| xi.powi(j as i32)).collect()).collect();
    let mut r = vec![vec![0.0; n]; n];
    for j in 0..n {
        for i in 0..j {
            let dot: f64 = q[i].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            r[i][j] = dot;
            let qi = q[i].clone();
            for (a, b) in q[j].iter_mut().zip(&qi) {
                *a -= dot * b;
            }
        }
        let norm = q[j].iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm < 1e-12 * (m as f64).sqrt() {
            return Err(SpectraError::DegenerateFit("rank-deficient design matrix"));
        }
        r[j][j] = norm;
        for a in q[j].iter_mut() {
            *a /= norm;
        }
    }
    let qty: Vec<f64> = q.iter().map(|col| col.iter().zip(y).map(|(a, b)| a * b).sum()).collect();
    let mut coeffs = vec![0.0; n];
    for j in (0..n).rev() {
        let tail: f64 = (j + 1..n).map(|k| r[j][k] * coeffs[k]).sum();
        coeffs[j] = (qty[j] - tail) / r[j][j];
    }
    Ok(coeffs)
}

fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Unfolds the central `bulk_window` fraction of a spectrum by a degree-5
/// least-squares fit of the staircase over that window.
pub fn unfold_ensemble(sample: &SpectrumSample, bulk_window: f64) -> Result<UnfoldedSequence, SpectraError> {
    unfold_spectrum(&sample.eigenvalues, bulk_window, SequenceSource::Ensemble)
}

/// As [`unfold_ensemble`] for a bare sorted spectrum.
pub fn unfold_spectrum(sorted: &[f64], bulk_window: f64, source: SequenceSource) -> Result<UnfoldedSequence, SpectraError> {
    if !(bulk_window > 0.0 && bulk_window <= 1.0) {
        return Err(SpectraError::InvalidWindow(bulk_window));
    }
    let n = sorted.len();
    let drop = ((1.0 - bulk_window) * n as f64 / 2.0).floor() as usize;
    let kept = &sorted[drop..n - drop];
    if kept.len() < UNFOLD_DEGREE + 2 {
        return Err(SpectraError::TooFew {
            needed: UNFOLD_DEGREE + 2,
            got: kept.len(),
        });
    }
    let (lo, hi) = (kept[0], kept[kept.len() - 1]);
    if hi <= lo {
        return Err(SpectraError::DegenerateFit("window has zero width"));
    }
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let x: Vec<f64> = kept.iter().map(|&v| (v - center) / half).collect();
    let y: Vec<f64> = (0..kept.len()).map(|i| i as f64 + 0.5).collect();
    let coeffs = polyfit(&x, &y, UNFOLD_DEGREE)?;
    let unfolded: Vec<f64> = x.iter().map(|&t| polyval(&coeffs, t)).collect();
    if unfolded.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpectraError::DegenerateFit("fitted staircase is not increasing"));
    }
    UnfoldedSequence::new(unfolded, source, (lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingReference {
    GueSurmise,
    Poisson,
}

impl SpacingReference {
    pub fn pdf(self, s: f64) -> f64 {
        match self {
            SpacingReference::GueSurmise => gue_surmise_pdf(s),
            SpacingReference::Poisson => {
                if s < 0.0 {
                    0.0
                } else {
                    (-s).exp()
                }
            }
        }
    }

    pub fn cdf(self, s: f64) -> f64 {
        match self {
            SpacingReference::GueSurmise => gue_surmise_cdf(s),
            SpacingReference::Poisson => {
                if s <= 0.0 {
                    0.0
                } else {
                    -(-s).exp_m1()
                }
            }
        }
    }
}

/// `(32/π²) s² exp(−4s²/π)`.
pub fn gue_surmise_pdf(s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp()
}

pub fn gue_surmise_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    libm::erf(2.0 * s / PI.sqrt()) - 4.0 * s / PI * (-4.0 * s * s / PI).exp()
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `data` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> f64 {
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// KS distance of the nearest-neighbour spacings against `reference`.
pub fn spacing_ks(seq: &UnfoldedSequence, reference: SpacingReference) -> Result<f64, SpectraError> {
    spacing_ks_pooled(std::slice::from_ref(seq), reference)
}

/// KS distance of spacings pooled over several sequences.
pub fn spacing_ks_pooled(seqs: &[UnfoldedSequence], reference: SpacingReference) -> Result<f64, SpectraError> {
    let spacings: Vec<f64> = seqs.iter().flat_map(|s| s.spacings()).collect();
    if spacings.len() < MIN_KS_SPACINGS {
        return Err(SpectraError::TooFew {
            needed: MIN_KS_SPACINGS,
            got: spacings.len(),
        });
    }
    Ok(ks_distance(&spacings, |s| reference.cdf(s)))
}

/// `1 − (sin πx / πx)²`.
pub fn gue_pair_correlation(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let t = PI * x;
    1.0 - (t.sin() / t).powi(2)
}

/// Average of [`gue_pair_correlation`] over `[lo, hi]` (Simpson, 64 panels).
pub fn gue_pair_correlation_bin(lo: f64, hi: f64) -> f64 {
    let panels = 64;
    let h = (hi - lo) / panels as f64;
    let mut acc = gue_pair_correlation(lo) + gue_pair_correlation(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * gue_pair_correlation(lo + h * i as f64);
    }
    acc * h / 3.0 / (hi - lo)
}

/// Bin `[x − w/2, x + w/2)` clipped to non-negative separations.
fn pair_bin(x: f64, width: f64) -> (f64, f64) {
    ((x - 0.5 * width).max(0.0), x + 0.5 * width)
}

/// Binned pair-correlation estimate at each grid point, pooled over
/// sequences. Separations are counted on both sides of each centre; centres
/// closer than the largest bin edge to either end are discarded.
pub fn pair_correlation_pooled(seqs: &[UnfoldedSequence], x_grid: &[f64], width: f64) -> Result<Vec<f64>, SpectraError> {
    if !(width > 0.0) {
        return Err(SpectraError::InvalidBinWidth(width));
    }
    let total: usize = seqs.iter().map(|s| s.len()).sum();
    if total < MIN_PAIR_POINTS {
        return Err(SpectraError::TooFew {
            needed: MIN_PAIR_POINTS,
            got: total,
        });
    }
    let reach = x_grid.iter().map(|&x| pair_bin(x, width).1).fold(0.0, f64::max);
    let bins: Vec<(f64, f64)> = x_grid.iter().map(|&x| pair_bin(x, width)).collect();
    let mut counts = vec![0u64; bins.len()];
    let mut centres = 0u64;
    for seq in seqs {
        let v = seq.values();
        let (first, last) = (v[0], v[v.len() - 1]);
        for (i, &xi) in v.iter().enumerate() {
            if xi - reach < first || xi + reach > last {
                continue;
            }
            centres += 1;
            let neighbours = v[i + 1..]
                .iter()
                .take_while(|&&xj| xj - xi < reach)
                .chain(v[..i].iter().rev().take_while(|&&xj| xi - xj < reach));
            for &xj in neighbours {
                let d = (xj - xi).abs();
                for (c, &(lo, hi)) in counts.iter_mut().zip(&bins) {
                    if d >= lo && d < hi {
                        *c += 1;
                    }
                }
            }
        }
    }
    if centres == 0 {
        return Err(SpectraError::TooFew { needed: 1, got: 0 });
    }
    Ok(counts
        .iter()
        .zip(&bins)
        .map(|(&c, &(lo, hi))| c as f64 / (centres as f64 * 2.0 * (hi - lo)))
        .collect())
}

pub fn pair_correlation(seq: &UnfoldedSequence, x_grid: &[f64], width: f64) -> Result<Vec<f64>, SpectraError> {
    pair_correlation_pooled(std::slice::from_ref(seq), x_grid, width)
}

/// Bin centres `w/2, 3w/2, …` covering `[0, x_max]`.
pub fn pair_grid(x_max: f64, width: f64) -> Vec<f64> {
    let bins = (x_max / width).round() as usize;
    (0..bins).map(|i| (i as f64 + 0.5) * width).collect()
}

/// Largest difference between the binned estimate on `[0, x_max]` and the
/// bin-averaged GUE curve.
pub fn pair_correlation_deviation(seqs: &[UnfoldedSequence], x_max: f64, width: f64) -> Result<f64, SpectraError> {
    let grid = pair_grid(x_max, width);
    let estimate = pair_correlation_pooled(seqs, &grid, width)?;
    Ok(grid
        .iter()
        .zip(&estimate)
        .map(|(&x, &r)| {
            let (lo, hi) = pair_bin(x, width);
            (r - gue_pair_correlation_bin(lo, hi)).abs()
        })
        .fold(0.0, f64::max))
}

/// Near-zero and bulk densities of positive eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearZeroDensity {
    pub near_zero: f64,
    pub bulk: f64,
    pub bin_width: f64,
}

impl NearZeroDensity {
    pub fn ratio(&self) -> f64 {
        self.near_zero / self.bulk
    }
}

fn mean_radius(samples: &[SpectrumSample]) -> f64 {
    samples.iter().map(|s| s.spectral_radius()).sum::<f64>() / samples.len() as f64
}

/// Density per sample of positive eigenvalues in `[lo, hi)`.
fn positive_density(samples: &[SpectrumSample], lo: f64, hi: f64) -> f64 {
    let count: usize = samples
        .iter()
        .map(|s| s.eigenvalues.iter().filter(|&&x| x >= lo && x < hi).count())
        .sum();
    count as f64 / (samples.len() as f64 * (hi - lo))
}

/// Bulk density of positive eigenvalues, taken over `BULK_WINDOW` of the
/// mean spectral radius.
pub fn bulk_density(samples: &[SpectrumSample]) -> Result<f64, SpectraError> {
    if samples.is_empty() {
        return Err(SpectraError::NoSamples);
    }
    let r = mean_radius(samples);
    Ok(positive_density(samples, BULK_WINDOW.0 * r, BULK_WINDOW.1 * r))
}

/// A quarter of the mean level spacing at zero, `1 / (4 ρ_bulk)`.
pub fn default_near_zero_bin(samples: &[SpectrumSample]) -> Result<f64, SpectraError> {
    let rho = bulk_density(samples)?;
    if rho <= 0.0 {
        return Err(SpectraError::InvalidBinWidth(f64::INFINITY));
    }
    Ok(NEAR_ZERO_BIN_FRACTION / rho)
}

/// Density of positive eigenvalues in `[0, bin_width)` against the bulk
/// density, both per unit eigenvalue and per sample.
pub fn near_zero_density(samples: &[SpectrumSample], bin_width: f64) -> Result<NearZeroDensity, SpectraError> {
    if samples.is_empty() {
        return Err(SpectraError::NoSamples);
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(SpectraError::InvalidBinWidth(bin_width));
    }
    Ok(NearZeroDensity {
        near_zero: positive_density(samples, 0.0, bin_width),
        bulk: bulk_density(samples)?,
        bin_width,
    })
}

/// Lowest zero of one family member.
#[derive(Debug, Clone, PartialEq)]
pub struct LowZero {
    pub modulus: u64,
    /// `None` when `(0, E_window)` holds no zero.
    pub ordinate: Option<f64>,
}

impl LowZero {
    /// Ordinate times the conductor density `log(d) / 2π`.
    pub fn scaled(&self) -> Option<f64> {
        self.ordinate.map(|g| g * family_scale(self.modulus))
    }
}

pub fn family_scale(modulus: u64) -> f64 {
    (modulus as f64).ln() / (2.0 * PI)
}

fn even_character(modulus: u64) -> Result<Character, SpectraError> {
    real_primitive_characters(modulus)?
        .into_iter()
        .find(|c| c.is_even())
        .ok_or(SpectraError::NoEvenCharacter { modulus })
}

/// Lowest zero in `(0, window)` from sign changes of the rotated L-function,
/// confirmed by the argument-principle count just above it.
fn lowest_zero(chi: &Character, window: f64) -> Result<Option<f64>, SpectraError> {
    let modulus = chi.modulus();
    let f = |e: f64| lfunc::l_hardy_z(e, chi);
    let mut step = FAMILY_SCAN_STEP;
    for _ in 0..3 {
        let roots = zeros::sign_change_roots(&f, 0.0, window, |_| step, zeros::ROOT_TOLERANCE)?;
        let Some(&first) = roots.first() else {
            // no sign change: accept only if the count agrees
            let mut probe = window;
            for _ in 0..32 {
                match zeros::count_l_via_argument(probe, chi) {
                    Ok(n) if n.round() == 0.0 => return Ok(None),
                    Ok(_) => break,
                    Err(ZerosError::TooCloseToZero { .. }) | Err(ZerosError::NonIntegralCount { .. }) => probe -= 1e-4,
                    Err(e) => return Err(e.into()),
                }
            }
            step /= FAMILY_REFINEMENT;
            continue;
        };
        let next = roots.get(1).copied().unwrap_or(window);
        let probe = first + (0.5 * (next - first)).min(step);
        match zeros::count_l_via_argument(probe, chi) {
            Ok(n) if n.round() == 1.0 => return Ok(Some(first)),
            Ok(_) | Err(ZerosError::TooCloseToZero { .. }) | Err(ZerosError::NonIntegralCount { .. }) => {}
            Err(e) => return Err(e.into()),
        }
        step /= FAMILY_REFINEMENT;
    }
    Err(SpectraError::Uncertified { modulus })
}

/// Lowest zero ordinate of `L(s, χ_d)` in `(0, E_window)` for each modulus,
/// using its real even primitive character. Computed in parallel, returned
/// in input order.
pub fn family_low_zeros(moduli: &[u64], e_window: f64) -> Result<Vec<LowZero>, SpectraError> {
    moduli
        .par_iter()
        .map(|&d| {
            let chi = even_character(d)?;
            Ok(LowZero {
                modulus: d,
                ordinate: lowest_zero(&chi, e_window)?,
            })
        })
        .collect()
}

/// Moduli `p ≤ limit` with `p ≡ 1 (mod 4)` prime: exactly the odd primes
/// whose quadratic character is even.
pub fn even_quadratic_prime_moduli(limit: u64) -> Vec<u64> {
    (5..=limit).filter(|&p| p % 4 == 1 && crate::arith::is_prime(p)).collect()
}

/// Histogram of `values` on `bins` equal bins spanning `[0, upper)`, as
/// densities (count per unit length, normalised by the total count). Values
/// outside the range are counted in the total but not binned.
pub fn density_histogram(values: &[f64], bins: usize, upper: f64) -> Vec<f64> {
    if values.is_empty() || bins == 0 || !(upper > 0.0) {
        return vec![0.0; bins];
    }
    let width = upper / bins as f64;
    let mut hist = vec![0usize; bins];
    for &v in values {
        if v >= 0.0 && v < upper {
            hist[((v / width) as usize).min(bins - 1)] += 1;
        }
    }
    hist.iter().map(|&c| c as f64 / (values.len() as f64 * width)).collect()
}

/// Ten-bin density of scaled lowest zeros over `[0, 2 m)`, `m` their mean.
pub fn family_decile_density(scaled: &[f64]) -> Vec<f64> {
    if scaled.is_empty() {
        return vec![0.0; 10];
    }
    let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
    density_histogram(scaled, 10, 2.0 * mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::{EnsembleClass, EnsembleSpec};
    use crate::zeros::ZeroSource;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(values: Vec<f64>) -> SpectrumSample {
        SpectrumSample {
            eigenvalues: values,
            spec: EnsembleSpec::new(EnsembleClass::D, 1, 1.0, 0).unwrap(),
            sample_index: 0,
        }
    }

    fn inverse_cdf(reference: SpacingReference, u: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 20.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if reference.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn draws(reference: SpacingReference, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| inverse_cdf(reference, rng.random::<f64>())).collect()
    }

    #[test]
    fn surmise_normalisation() {
        // Simpson on [0, 8]; the tail beyond is below 1e-30
        let panels = 4000;
        let h = 8.0 / panels as f64;
        let (mut mass, mut mean) = (0.0, 0.0);
        for i in 0..=panels {
            let s = h * i as f64;
            let w = if i == 0 || i == panels { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            mass += w * gue_surmise_pdf(s);
            mean += w * s * gue_surmise_pdf(s);
        }
        assert!((mass * h / 3.0 - 1.0).abs() < 1e-10);
        assert!((mean * h / 3.0 - 1.0).abs() < 1e-10);
        assert_eq!(gue_surmise_pdf(0.0), 0.0);
        assert!((gue_surmise_cdf(8.0) - 1.0).abs() < 1e-15);
        // CDF derivative matches the density
        for s in [0.3, 1.0, 1.7] {
            let d = (gue_surmise_cdf(s + 1e-6) - gue_surmise_cdf(s - 1e-6)) / 2e-6;
            assert!((d - gue_surmise_pdf(s)).abs() < 1e-8);
        }
    }

    #[test]
    fn ks_against_own_draws() {
        for reference in [SpacingReference::GueSurmise, SpacingReference::Poisson] {
            let big = draws(reference, 1_000_000, 1);
            assert!(ks_distance(&big, |s| reference.cdf(s)) < 0.005);
            let small = ks_distance(&draws(reference, 1_000, 2), |s| reference.cdf(s));
            let large = ks_distance(&draws(reference, 100_000, 3), |s| reference.cdf(s));
            assert!(large < small, "{large} !< {small}");
        }
    }

    #[test]
    fn uniform_spectrum_unfolds_exactly() {
        let values: Vec<f64> = (0..400).map(|i| -3.0 + 0.37 * i as f64).collect();
        let seq = unfold_spectrum(&values, 0.6, SequenceSource::Synthetic).unwrap();
        for s in seq.spacings() {
            assert!((s - 1.0).abs() < 1e-9);
        }
        // unfolding an already unfolded uniform sequence is the identity
        let again = unfold_spectrum(seq.values(), 1.0, SequenceSource::Synthetic).unwrap();
        for (a, b) in again.values().iter().zip(seq.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn poisson_spectrum_unfolds_to_exponential_spacings() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut x = 0.0;
        let values: Vec<f64> = (0..10_000)
            .map(|_| {
                x -= (1.0 - rng.random::<f64>()).ln();
                x
            })
            .collect();
        let seq = unfold_spectrum(&values, 1.0, SequenceSource::Synthetic).unwrap();
        assert!(spacing_ks(&seq, SpacingReference::Poisson).unwrap() < 0.05);
        assert!(spacing_ks(&seq, SpacingReference::GueSurmise).unwrap() > 0.1);
    }

    #[test]
    fn gue_spacings_and_pair_correlation() {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, 200, 1.0, 8).unwrap();
        let seqs: Vec<UnfoldedSequence> = crate::rmt::sample_many(&spec, 100)
            .unwrap()
            .iter()
            .map(|s| unfold_ensemble(s, DEFAULT_BULK_WINDOW).unwrap())
            .collect();
        assert!(spacing_ks_pooled(&seqs, SpacingReference::GueSurmise).unwrap() < 0.05);
        let grid = pair_grid(4.0, PAIR_BIN_WIDTH);
        let r2 = pair_correlation_pooled(&seqs, &grid, PAIR_BIN_WIDTH).unwrap();
        assert!(r2[0] < 0.2);
        for (x, r) in grid.iter().zip(&r2) {
            if *x >= 3.0 {
                assert!((r - 1.0).abs() < 0.1, "R2({x}) = {r}");
            }
        }
    }

    #[test]
    fn scale_invariance() {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, 120, 1.0, 2).unwrap();
        let s = crate::rmt::sample(&spec, 0).unwrap();
        let scaled: Vec<f64> = s.eigenvalues.iter().map(|x| x * 7.3).collect();
        let a = unfold_spectrum(&s.eigenvalues, 0.6, SequenceSource::Ensemble).unwrap();
        let b = unfold_spectrum(&scaled, 0.6, SequenceSource::Ensemble).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-9);
        }
        let ka = spacing_ks(&a, SpacingReference::GueSurmise).unwrap();
        let kb = spacing_ks(&b, SpacingReference::GueSurmise).unwrap();
        assert!((ka - kb).abs() < 1e-9);
    }

    #[test]
    fn unfolding_errors() {
        assert!(matches!(
            unfold_spectrum(&[1.0, 2.0, 3.0], 0.6, SequenceSource::Synthetic),
            Err(SpectraError::TooFew { .. })
        ));
        assert!(matches!(
            unfold_spectrum(&[1.0; 50], 0.6, SequenceSource::Synthetic),
            Err(SpectraError::DegenerateFit(_))
        ));
        assert!(unfold_spectrum(&[1.0; 50], 0.0, SequenceSource::Synthetic).is_err());
        assert!(matches!(
            UnfoldedSequence::new(vec![0.0, 1.0, 1.0], SequenceSource::Synthetic, (0.0, 1.0)),
            Err(SpectraError::NotIncreasing(2))
        ));
        let few = ZeroList::new(vec![14.0, 21.0], ZeroSource::Ingested, 1e-6).unwrap();
        assert!(matches!(unfold_zeros(&few), Err(SpectraError::TooFew { .. })));
    }

    #[test]
    fn zero_unfolding() {
        let zeros = zeros::find_zeros(240.0).unwrap();
        let hundred = zeros.truncated(100);
        let seq = unfold_zeros(&hundred).unwrap();
        assert!((seq.mean_spacing() - 1.0).abs() < 1e-6);
        assert_eq!(seq.window(), (hundred.gammas()[0], hundred.gammas()[99]));
        // neighbouring points differ by the gap times the local density
        let g = hundred.gammas();
        let raw_scale = (lfunc::smooth_count(g[99]).exact - lfunc::smooth_count(g[0]).exact) / 99.0;
        for k in [10, 50, 90] {
            let density = (0.5 * (g[k] + g[k + 1]) / (2.0 * PI)).ln() / (2.0 * PI);
            let expect = (g[k + 1] - g[k]) * density / raw_scale;
            let got = seq.values()[k + 1] - seq.values()[k];
            assert!((got - expect).abs() < 1e-3 * expect, "k = {k}");
        }
    }

    #[test]
    fn near_zero_hard_gap() {
        let mut values: Vec<f64> = (1..=200).map(|i| 0.5 + 0.01 * i as f64).collect();
        values.extend(values.clone().iter().map(|x| -x));
        values.sort_by(f64::total_cmp);
        let samples = vec![synthetic(values)];
        for bin in [0.1, 0.3, 0.5] {
            assert_eq!(near_zero_density(&samples, bin).unwrap().near_zero, 0.0);
        }
        assert!(near_zero_density(&samples, 0.6).unwrap().near_zero > 0.0);
        assert!(matches!(near_zero_density(&[], 0.1), Err(SpectraError::NoSamples)));
        assert!(near_zero_density(&samples, 0.0).is_err());
    }

    #[test]
    fn family_basics() {
        assert!(family_low_zeros(&[], 10.0).unwrap().is_empty());
        let five = family_low_zeros(&[5], 10.0).unwrap();
        let g = five[0].ordinate.expect("zero below 10");
        assert!(g > 0.0 && g < 10.0);
        let chi = even_character(5).unwrap();
        assert!(lfunc::l_hardy_z(g, &chi).unwrap().abs() < 1e-7);
        assert_eq!(family_low_zeros(&[5], 1.0).unwrap()[0].ordinate, None);
        assert!(matches!(family_low_zeros(&[7], 10.0), Err(SpectraError::NoEvenCharacter { modulus: 7 })));
        assert_eq!(even_quadratic_prime_moduli(30), vec![5, 13, 17, 29]);
    }

    #[test]
    fn histogram_is_a_density() {
        let h = density_histogram(&[0.1, 0.2, 0.9, 0.95], 2, 1.0);
        assert_eq!(h, vec![1.0, 1.0]);
        assert_eq!(density_histogram(&[0.1, 5.0], 2, 1.0), vec![1.0, 0.0]);
        assert_eq!(density_histogram(&[], 3, 1.0), vec![0.0; 3]);
        let d = family_decile_density(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(d[5], 5.0);
    }
}
