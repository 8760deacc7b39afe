//! Periodic-orbit sums for the oscillatory part of the zero count.
//!
//! Four forms are evaluated side by side:
//!
//! * the prime expansion `−(1/π) Σ_p Σ_r sin(rE log p) / (r p^{r/2})`,
//! * the generic semiclassical sum `(1/πħ) Σ_po Σ_r sin(rS/ħ − rμ) / (r |det(M^r − I)|^{1/2})`,
//! * the class-C sum `(1/π) Σ_po Σ_r (−1)^r sin(rEτ) / (r |det(M^r − I)|)`,
//!   where self-dual orbits pick up `(−i)^{2 N_A r}` from Andreev reflections
//!   and lose the square root on the stability determinant,
//! * the class-C sum over orbits labelled `(p, k)` with `τ = 2^k log p` and
//!   `|det(M^r − I)| = exp(rτ/2)`.
//!
//! On the critical line the prime expansion does not converge; every function
//! here works with explicitly truncated sums. Summation order is fixed
//! (orbit list order, then r ascending) and compensated, so regrouped sums
//! can be compared at the 1e-12 level.

use crate::arith::{self, ArithError, PrimeTable};
use crate::lfunc;
use crate::numeric::CompensatedSum;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Gaussian width used for staircase smoothing unless the caller asks
/// otherwise; below the mean zero gap near E = 100.
pub const DEFAULT_SMOOTHING_WIDTH: f64 = 0.2;
/// Target tail for [`doubling_identity_check`].
pub const IDENTITY_TAIL_TARGET: f64 = 1e-12;
/// Iteration budget for [`doubling_identity_check`].
pub const IDENTITY_MAX_TERMS: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("orbit {index} has nonpositive stability {value} at repetition {repetition}")]
    NonPositiveStability { index: usize, repetition: u64, value: f64 },
    #[error("invalid truncation: {0}")]
    InvalidTruncation(&'static str),
    #[error("index set is not closed under n = 2^k r <= n_max")]
    OpenIndexSet,
    #[error("tail bound (scale {scale}, ratio {ratio}) cannot reach 1e-12 within {IDENTITY_MAX_TERMS} terms")]
    TailBoundUnachievable { scale: f64, ratio: f64 },
    #[error("energy grid must be strictly increasing (violated at index {0})")]
    NonIncreasingGrid(usize),
    #[error("smoothing width must be finite and nonnegative, got {0}")]
    InvalidWidth(f64),
}

/// `(p, k)` label of an ansatz orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitLabel {
    pub prime: u64,
    pub doubling: u32,
}

/// `r ↦ |det(M^r − I)|`.
#[derive(Clone)]
pub enum Stability {
    /// `exp(r τ / 2)`, the ansatz family.
    HalfPeriod,
    /// `exp(r · rate)`.
    Exponential { rate: f64 },
    Custom(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stability::HalfPeriod => write!(f, "HalfPeriod"),
            Stability::Exponential { rate } => write!(f, "Exponential {{ rate: {rate} }}"),
            Stability::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// One primitive periodic orbit.
#[derive(Debug, Clone)]
pub struct OrbitTerm {
    pub label: OrbitLabel,
    /// Period τ (ħ = 1); also the slope of the action `S(E) = τE + offset`.
    pub period: f64,
    pub action_offset: f64,
    pub maslov: f64,
    pub stability: Stability,
    /// Number of Andreev reflections N_A; only its parity matters.
    pub andreev_reflections: u32,
}

impl OrbitTerm {
    /// Orbit with `S = τE`, μ = 0, no Andreev reflections and stability
    /// `exp(r τ / 2)`.
    pub fn new(label: OrbitLabel, period: f64) -> Self {
        OrbitTerm {
            label,
            period,
            action_offset: 0.0,
            maslov: 0.0,
            stability: Stability::HalfPeriod,
            andreev_reflections: 0,
        }
    }

    /// The `(p, k)` ansatz orbit: `τ = 2^k log p`, stability `exp(rτ/2)`, one
    /// Andreev reflection.
    pub fn ansatz(prime: u64, doubling: u32) -> Self {
        let period = (prime as f64).ln() * 2f64.powi(doubling as i32);
        OrbitTerm {
            andreev_reflections: 1,
            ..OrbitTerm::new(OrbitLabel { prime, doubling }, period)
        }
    }

    pub fn with_maslov(mut self, maslov: f64) -> Self {
        self.maslov = maslov;
        self
    }

    pub fn with_stability(mut self, stability: Stability) -> Self {
        self.stability = stability;
        self
    }

    pub fn with_action_offset(mut self, offset: f64) -> Self {
        self.action_offset = offset;
        self
    }

    pub fn with_andreev_reflections(mut self, n: u32) -> Self {
        self.andreev_reflections = n;
        self
    }

    pub fn action(&self, energy: f64) -> f64 {
        self.period * energy + self.action_offset
    }

    pub fn stability_at(&self, repetition: u64) -> f64 {
        let r = repetition as f64;
        match &self.stability {
            Stability::HalfPeriod => (r * self.period / 2.0).exp(),
            Stability::Exponential { rate } => (r * rate).exp(),
            Stability::Custom(f) => f(repetition),
        }
    }

    /// `(−i)^{2 N_A r} = (−1)^{N_A r}`.
    pub fn andreev_sign(&self, repetition: u64) -> f64 {
        if (self.andreev_reflections as u64 * repetition) % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    fn checked_stability(&self, index: usize, repetition: u64) -> Result<f64, OrbitError> {
        let value = self.stability_at(repetition);
        if value > 0.0 {
            Ok(value)
        } else {
            Err(OrbitError::NonPositiveStability { index, repetition, value })
        }
    }
}

/// Cutoffs for the orbit sums. With `closed` set, `(k, r)` pairs are kept
/// iff `2^k r <= rep_cutoff`, which makes the doubling regrouping exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    pub prime_cutoff: u64,
    pub k_cutoff: u32,
    pub rep_cutoff: u64,
    pub closed: bool,
}

impl TruncationSpec {
    /// Independent cutoffs `p <= P`, `k <= K`, `r <= R`.
    pub fn open(prime_cutoff: u64, k_cutoff: u32, rep_cutoff: u64) -> Self {
        TruncationSpec {
            prime_cutoff,
            k_cutoff,
            rep_cutoff,
            closed: false,
        }
    }

    /// `p <= P` and `2^k r <= n_max`.
    pub fn closed(prime_cutoff: u64, n_max: u64) -> Self {
        TruncationSpec {
            prime_cutoff,
            k_cutoff: if n_max == 0 { 0 } else { n_max.ilog2() },
            rep_cutoff: n_max,
            closed: true,
        }
    }

    pub fn validate(&self) -> Result<(), OrbitError> {
        if self.prime_cutoff < 1 {
            return Err(OrbitError::InvalidTruncation("prime cutoff must be >= 1"));
        }
        if self.rep_cutoff < 1 {
            return Err(OrbitError::InvalidTruncation("repetition cutoff must be >= 1"));
        }
        if self.closed && self.k_cutoff < self.rep_cutoff.ilog2() {
            return Err(OrbitError::InvalidTruncation("closed truncation needs 2^K reaching n_max"));
        }
        Ok(())
    }

    /// Largest r kept for doubling index k.
    pub fn max_repetition(&self, doubling: u32) -> u64 {
        if self.closed {
            self.rep_cutoff >> doubling.min(63)
        } else {
            self.rep_cutoff
        }
    }
}

/// How many repetitions each orbit contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repetitions {
    /// `r <= R` for every orbit.
    Uniform(u64),
    /// `2^k r <= n_max`, using each orbit's doubling index.
    Closed { n_max: u64 },
}

impl Repetitions {
    fn max_for(&self, orbit: &OrbitTerm) -> u64 {
        match *self {
            Repetitions::Uniform(r) => r,
            Repetitions::Closed { n_max } => n_max >> orbit.label.doubling.min(63),
        }
    }
}

impl From<&TruncationSpec> for Repetitions {
    fn from(t: &TruncationSpec) -> Self {
        if t.closed {
            Repetitions::Closed { n_max: t.rep_cutoff }
        } else {
            Repetitions::Uniform(t.rep_cutoff)
        }
    }
}

/// Truncated prime expansion using a precomputed prime table, `p <= P`,
/// `r <= R`, summed p-ascending then r-ascending.
pub fn nosc_prime_sum_with(primes: &PrimeTable, energy: f64, prime_cutoff: u64, rep_cutoff: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    for &p in &primes.primes()[..primes.count_le(prime_cutoff)] {
        let log_p = (p as f64).ln();
        for r in 1..=rep_cutoff {
            let rf = r as f64;
            acc.add((rf * energy * log_p).sin() / (rf * (rf * log_p / 2.0).exp()));
        }
    }
    -acc.value() / PI
}

/// `−(1/π) Σ_{p<=P} Σ_{r<=R} sin(rE log p) / (r p^{r/2})`.
pub fn nosc_prime_sum(energy: f64, trunc: &TruncationSpec) -> Result<f64, OrbitError> {
    trunc.validate()?;
    let primes = arith::sieve_primes(trunc.prime_cutoff)?;
    Ok(nosc_prime_sum_with(&primes, energy, trunc.prime_cutoff, trunc.rep_cutoff))
}

/// Generic semiclassical orbit sum with ħ = 1.
pub fn gutzwiller_sum(orbits: &[OrbitTerm], energy: f64, rep_cutoff: u64) -> Result<f64, OrbitError> {
    gutzwiller_sum_hbar(orbits, energy, rep_cutoff, 1.0)
}

/// `(1/πħ) Σ_po Σ_{r<=R} sin(r S(E)/ħ − r μ) / (r |det(M^r − I)|^{1/2})`.
pub fn gutzwiller_sum_hbar(orbits: &[OrbitTerm], energy: f64, rep_cutoff: u64, hbar: f64) -> Result<f64, OrbitError> {
    let mut acc = CompensatedSum::new();
    for (index, orbit) in orbits.iter().enumerate() {
        let phase = orbit.action(energy) / hbar - orbit.maslov;
        for r in 1..=rep_cutoff {
            let stab = orbit.checked_stability(index, r)?;
            let rf = r as f64;
            acc.add((rf * phase).sin() / (rf * stab.sqrt()));
        }
    }
    Ok(acc.value() / (PI * hbar))
}

/// `(1/π) Σ_po Σ_r (−1)^{N_A r} sin(r E τ) / (r |det(M^r − I)|)`, with the
/// determinant not square-rooted.
pub fn class_c_sum(orbits: &[OrbitTerm], energy: f64, reps: Repetitions) -> Result<f64, OrbitError> {
    let mut acc = CompensatedSum::new();
    for (index, orbit) in orbits.iter().enumerate() {
        for r in 1..=reps.max_for(orbit) {
            let stab = orbit.checked_stability(index, r)?;
            let rf = r as f64;
            acc.add(orbit.andreev_sign(r) * (rf * energy * orbit.period).sin() / (rf * stab));
        }
    }
    Ok(acc.value() / PI)
}

/// Ansatz orbits for all `p <= P`, `0 <= k <= K`, ordered by p then k.
pub fn ansatz_orbits(trunc: &TruncationSpec) -> Result<Vec<OrbitTerm>, OrbitError> {
    trunc.validate()?;
    let primes = arith::sieve_primes(trunc.prime_cutoff)?;
    Ok(primes
        .primes()
        .iter()
        .flat_map(|&p| (0..=trunc.k_cutoff).map(move |k| OrbitTerm::ansatz(p, k)))
        .collect())
}

/// Bound `|f(n)| <= scale · ratio^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricTail {
    pub scale: f64,
    pub ratio: f64,
}

/// Both sides of the doubling identity and the truncation used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Sums run over `n = 2^k r <= terms` (lhs) and `r <= terms` (rhs).
    pub terms: u64,
    /// Certified bound on the neglected tail of either side.
    pub tail_bound: f64,
}

/// Evaluates `Σ_{k>=0} Σ_{r>=1} (−1)^r f(2^k r)/r` and `−Σ_{r>=1} f(r)/r`,
/// each truncated so that the neglected tail is below 1e-12.
///
/// For `n > N` the preimages `(k, r)` of `n` carry weights `Σ 2^k/n < 2`, so
/// both tails are bounded by `2 c q^{N+1} / (1 − q)`.
pub fn doubling_identity_check<F>(f: F, bound: GeometricTail) -> Result<IdentityCheck, OrbitError>
where
    F: Fn(u64) -> f64,
{
    let GeometricTail { scale, ratio } = bound;
    let unachievable = OrbitError::TailBoundUnachievable { scale, ratio };
    if !(scale >= 0.0 && scale.is_finite() && (0.0..1.0).contains(&ratio)) {
        return Err(unachievable);
    }
    let tail = |n: u64| 2.0 * scale * ratio.powf(n as f64 + 1.0) / (1.0 - ratio);
    let mut terms = 1u64;
    while tail(terms) > IDENTITY_TAIL_TARGET {
        terms += 1;
        if terms > IDENTITY_MAX_TERMS {
            return Err(unachievable);
        }
    }
    let mut lhs = CompensatedSum::new();
    let mut k = 0u32;
    while (1u64 << k) <= terms {
        let step = 1u64 << k;
        for r in 1..=terms / step {
            let sign = if r % 2 == 1 { -1.0 } else { 1.0 };
            lhs.add(sign * f(step * r) / r as f64);
        }
        k += 1;
    }
    let rhs: CompensatedSum = (1..=terms).map(|r| -f(r) / r as f64).collect();
    Ok(IdentityCheck {
        lhs: lhs.value(),
        rhs: rhs.value(),
        terms,
        tail_bound: tail(terms),
    })
}

/// `n · Σ_{2^k r = n} (−1)^r / r`, computed exactly. The doubling identity is
/// the statement that this is −1 for every n.
pub fn doubling_coefficient_numerator(n: u64) -> i64 {
    assert!(n >= 1);
    let mut total = 0i64;
    let mut step = 1u64;
    while step <= n && n.is_multiple_of(step) {
        let r = n / step;
        let sign = if r % 2 == 1 { -1 } else { 1 };
        total += sign * step as i64;
        step <<= 1;
    }
    total
}

/// The ansatz class-C sum and the prime-form sum over the same closed index
/// set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    /// `(1/π) Σ_p Σ_k Σ_r (−1)^r/r · sin(2^k r E log p) / exp(2^k r log p / 2)`.
    pub ansatz_form: f64,
    /// `(1/π) Σ_p Σ_n c_n sin(n E log p) / p^{n/2}`, with `c_n` rebuilt from
    /// the `(k, r)` preimages of n.
    pub prime_form: f64,
}

/// Evaluates both sides of the rearrangement over
/// `{(p, k, r) : p <= P, 2^k r <= n_max}` and `{(p, n) : p <= P, n <= n_max}`.
pub fn equivalence_check(energy: f64, trunc: &TruncationSpec) -> Result<Equivalence, OrbitError> {
    if !trunc.closed {
        return Err(OrbitError::OpenIndexSet);
    }
    trunc.validate()?;
    let primes = arith::sieve_primes(trunc.prime_cutoff)?;
    let n_max = trunc.rep_cutoff;
    let mut ansatz = CompensatedSum::new();
    let mut prime_form = CompensatedSum::new();
    for &p in primes.primes() {
        let log_p = (p as f64).ln();
        for k in 0..=trunc.k_cutoff {
            let step = 1u64 << k;
            for r in 1..=trunc.max_repetition(k) {
                let n = (step * r) as f64;
                let sign = if r % 2 == 1 { -1.0 } else { 1.0 };
                ansatz.add(sign / r as f64 * (n * energy * log_p).sin() / (n * log_p / 2.0).exp());
            }
        }
        for n in 1..=n_max {
            let c = doubling_coefficient_numerator(n) as f64 / n as f64;
            let nf = n as f64;
            prime_form.add(c * (nf * energy * log_p).sin() / (nf * log_p / 2.0).exp());
        }
    }
    Ok(Equivalence {
        ansatz_form: ansatz.value() / PI,
        prime_form: prime_form.value() / PI,
    })
}

/// Bound on `|Σ|` over ansatz terms with `2^k r > n_max`:
/// `(2/π) Σ_p p^{−(n_max+1)/2} / (1 − p^{−1/2})`.
pub fn closed_tail_bound(primes: &[u64], n_max: u64) -> f64 {
    primes
        .iter()
        .map(|&p| {
            let q = (p as f64).powf(-0.5);
            2.0 * q.powf(n_max as f64 + 1.0) / (1.0 - q)
        })
        .sum::<f64>()
        / PI
}

/// Outcome of scanning constant Maslov phases against the prime-sum signs.
#[derive(Debug, Clone, PartialEq)]
pub struct SignClashReport {
    pub mu_grid: usize,
    /// Phases whose r = 1 term matches the prime-sum sign at every energy.
    pub first_repetition_matches: Vec<f64>,
    /// Phases whose r = 2 term matches at every energy.
    pub second_repetition_matches: Vec<f64>,
    /// Phases matching both; the clash means this is empty.
    pub both_match: Vec<f64>,
    /// For each phase, an energy where at least one of the two signs differs.
    pub witnesses: Vec<(f64, Option<f64>)>,
}

impl SignClashReport {
    pub fn every_phase_has_witness(&self) -> bool {
        self.witnesses.iter().all(|(_, w)| w.is_some())
    }
}

/// For a single orbit with `S = τE`, compares the signs of the r = 1, 2
/// terms of the generic semiclassical sum, `sin(r(S − μ))`, with those of the
/// prime sum, `−sin(rS)`, for μ on a uniform grid over [0, 2π).
pub fn sign_clash_scan(period: f64, energies: &[f64], mu_points: usize) -> SignClashReport {
    let mut report = SignClashReport {
        mu_grid: mu_points,
        first_repetition_matches: Vec::new(),
        second_repetition_matches: Vec::new(),
        both_match: Vec::new(),
        witnesses: Vec::with_capacity(mu_points),
    };
    for i in 0..mu_points {
        let mu = 2.0 * PI * i as f64 / mu_points as f64;
        let mut witness = None;
        let mut first_ok = true;
        let mut second_ok = true;
        for &e in energies {
            let s = period * e;
            let m1 = (s - mu).sin().signum() == (-s.sin()).signum();
            let m2 = (2.0 * (s - mu)).sin().signum() == (-(2.0 * s).sin()).signum();
            first_ok &= m1;
            second_ok &= m2;
            if witness.is_none() && !(m1 && m2) {
                witness = Some(e);
            }
        }
        if first_ok {
            report.first_repetition_matches.push(mu);
        }
        if second_ok {
            report.second_repetition_matches.push(mu);
        }
        if first_ok && second_ok {
            report.both_match.push(mu);
        }
        report.witnesses.push((mu, witness));
    }
    report
}

/// `N̄(E) + truncated prime sum` on each grid point, Gaussian-smoothed over
/// the grid when `smoothing_width > 0`.
pub fn reconstruct_staircase(grid: &[f64], trunc: &TruncationSpec, smoothing_width: f64) -> Result<Vec<f64>, OrbitError> {
    trunc.validate()?;
    if !(smoothing_width >= 0.0 && smoothing_width.is_finite()) {
        return Err(OrbitError::InvalidWidth(smoothing_width));
    }
    if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(OrbitError::NonIncreasingGrid(i + 1));
    }
    let primes = arith::sieve_primes(trunc.prime_cutoff)?;
    let raw: Vec<f64> = grid
        .par_iter()
        .map(|&e| {
            lfunc::smooth_count(e).exact + nosc_prime_sum_with(&primes, e, trunc.prime_cutoff, trunc.rep_cutoff)
        })
        .collect();
    if smoothing_width == 0.0 {
        return Ok(raw);
    }
    Ok(gaussian_smooth(grid, &raw, smoothing_width))
}

/// Normalised Gaussian average over grid points within five widths.
pub fn gaussian_smooth(grid: &[f64], values: &[f64], width: f64) -> Vec<f64> {
    let reach = 5.0 * width;
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let lo = grid.partition_point(|&x| x < grid[i] - reach);
            let hi = grid.partition_point(|&x| x <= grid[i] + reach);
            let mut num = CompensatedSum::new();
            let mut den = CompensatedSum::new();
            for j in lo..hi {
                let u = (grid[j] - grid[i]) / width;
                let w = (-0.5 * u * u).exp();
                num.add(w * values[j]);
                den.add(w);
            }
            num.value() / den.value()
        })
        .collect()
}
