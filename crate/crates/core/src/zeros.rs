//! Nontrivial zeros on the critical line, the zero-counting staircase and
//! its split into smooth and oscillatory parts.
//!
//! Zeros are bracketed by sign changes of Hardy's Z function and refined by
//! bisection. Completeness is certified chunk by chunk: the number of sign
//! changes between two boundaries must equal the difference of the
//! argument-principle counts there.

use crate::arith::Character;
use crate::lfunc::{self, LfuncError, MAX_HEIGHT};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Bisection stops once the bracket is narrower than this.
pub const ROOT_TOLERANCE: f64 = 1e-9;
/// Grid step below E = 100.
pub const BASE_SCAN_STEP: f64 = 0.05;
/// Evaluations closer than this to a zero are refused by the counting routines.
pub const MIN_ZERO_DISTANCE: f64 = 1e-6;
const CHUNK_LENGTH: f64 = 10.0;
const REFINEMENT_FACTOR: f64 = 10.0;

#[derive(Debug, Error)]
pub enum ZerosError {
    #[error(transparent)]
    Lfunc(#[from] LfuncError),
    #[error("height {0} is outside (0, 1e4]")]
    HeightOutOfRange(f64),
    #[error("height {height} is within {distance:.3e} of a zero")]
    TooCloseToZero { height: f64, distance: f64 },
    #[error("argument-principle count {value} at height {height} is not integral")]
    NonIntegralCount { height: f64, value: f64 },
    #[error("certification failed on ({lo}, {hi}): {found} sign changes, {expected} zeros by the argument principle")]
    CertificationFailed { lo: f64, hi: f64, found: usize, expected: i64 },
    #[error("line {line}: cannot parse {content:?} as a zero ordinate")]
    Malformed { line: usize, content: String },
    #[error("line {line}: ordinate {value} is not positive")]
    NotPositive { line: usize, value: f64 },
    #[error("line {line}: ordinate {value} does not exceed the previous one")]
    NotMonotone { line: usize, value: f64 },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroSource {
    Computed,
    Ingested,
}

/// Ordered positive ordinates γ_k of zeros `1/2 + iγ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroList {
    gammas: Vec<f64>,
    source: ZeroSource,
    tolerance: f64,
}

impl ZeroList {
    /// Validates strict monotonicity and positivity.
    pub fn new(gammas: Vec<f64>, source: ZeroSource, tolerance: f64) -> Result<Self, ZerosError> {
        for (i, &g) in gammas.iter().enumerate() {
            if !(g > 0.0) || !g.is_finite() {
                return Err(ZerosError::NotPositive { line: i + 1, value: g });
            }
            if i > 0 && g <= gammas[i - 1] {
                return Err(ZerosError::NotMonotone { line: i + 1, value: g });
            }
        }
        Ok(ZeroList { gammas, source, tolerance })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// The staircase N(E): number of listed γ < E.
    pub fn count_below(&self, height: f64) -> usize {
        self.gammas.partition_point(|&g| g < height)
    }

    /// First `n` zeros.
    pub fn truncated(&self, n: usize) -> ZeroList {
        ZeroList {
            gammas: self.gammas[..n.min(self.len())].to_vec(),
            ..*self
        }
    }

    /// Zeros below `height`.
    pub fn below(&self, height: f64) -> ZeroList {
        self.truncated(self.count_below(height))
    }

    /// Rounds every ordinate to the 12 decimals used on disk.
    pub fn rounded_to_cache_precision(&self) -> ZeroList {
        ZeroList {
            gammas: self.gammas.iter().map(|g| format!("{g:.12}").parse().unwrap()).collect(),
            ..*self
        }
    }
}

/// `N(E) = N̄(E) + N_osc(E)` at one height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountDecomposition {
    pub height: f64,
    pub n_exact: i64,
    pub n_smooth: f64,
    pub n_osc: f64,
}

fn check_height(height: f64) -> Result<(), ZerosError> {
    if height > 0.0 && height <= MAX_HEIGHT {
        Ok(())
    } else {
        Err(ZerosError::HeightOutOfRange(height))
    }
}

/// Distance to the nearest zero estimated from one Newton step on Z.
fn newton_distance<F>(f: F, height: f64) -> Result<f64, LfuncError>
where
    F: Fn(f64) -> Result<f64, LfuncError>,
{
    let h = 1e-5;
    let z = f(height)?;
    let dz = (f(height + h)? - f(height - h)?) / (2.0 * h);
    Ok(if dz == 0.0 { f64::INFINITY } else { (z / dz).abs() })
}

fn integral_count(height: f64, value: f64) -> Result<f64, ZerosError> {
    if (value - value.round()).abs() > MIN_ZERO_DISTANCE {
        return Err(ZerosError::NonIntegralCount { height, value });
    }
    Ok(value)
}

/// Number of zeros with `0 < γ < E` from the argument principle:
/// `(θ(E) + arg ζ(1/2 + iE))/π + 1`, with the argument continuously
/// transported from Re s = 2.
pub fn count_via_argument(height: f64) -> Result<f64, ZerosError> {
    check_height(height)?;
    let distance = newton_distance(lfunc::hardy_z, height)?;
    if distance < MIN_ZERO_DISTANCE {
        return Err(ZerosError::TooCloseToZero { height, distance });
    }
    let value = (lfunc::theta(height) + lfunc::arg_zeta_on_line(height)?) / PI + 1.0;
    integral_count(height, value)
}

/// Argument-principle count of zeros of `L(s, χ)` with `0 < γ < E`, for a
/// real even primitive character: `(θ_χ(E) + arg L(1/2 + iE, χ))/π`.
pub fn count_l_via_argument(height: f64, chi: &Character) -> Result<f64, ZerosError> {
    if !(height > 0.0 && height <= lfunc::MAX_L_HEIGHT) {
        return Err(ZerosError::HeightOutOfRange(height));
    }
    let distance = newton_distance(|e| lfunc::l_hardy_z(e, chi), height)?;
    if distance < MIN_ZERO_DISTANCE {
        return Err(ZerosError::TooCloseToZero { height, distance });
    }
    let value = (lfunc::l_theta(height, chi) + lfunc::arg_l_on_line(height, chi)?) / PI;
    integral_count(height, value)
}

/// Exact split of the counting function at `E`.
pub fn decompose(height: f64) -> Result<CountDecomposition, ZerosError> {
    check_height(height)?;
    let distance = newton_distance(lfunc::hardy_z, height)?;
    if distance < MIN_ZERO_DISTANCE {
        return Err(ZerosError::TooCloseToZero { height, distance });
    }
    let n_smooth = lfunc::theta(height) / PI + 1.0;
    let n_osc = lfunc::arg_zeta_on_line(height)? / PI;
    let total = integral_count(height, n_smooth + n_osc)?;
    Ok(CountDecomposition {
        height,
        n_exact: total.round() as i64,
        n_smooth,
        n_osc,
    })
}

/// Mean spacing of zeros at height E, `2π / log(E/2π)`.
pub fn mean_zero_gap(height: f64) -> f64 {
    let ratio = height / (2.0 * PI);
    if ratio <= std::f64::consts::E {
        f64::INFINITY
    } else {
        2.0 * PI / ratio.ln()
    }
}

/// Scan step: 0.05 up to E = 100, then shrinking with the mean gap.
pub fn scan_step(height: f64) -> f64 {
    let reference = mean_zero_gap(100.0);
    BASE_SCAN_STEP * (mean_zero_gap(height.max(100.0)) / reference).min(1.0)
}

/// Bisection on a sign change of `f` in `[lo, hi]`.
pub fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> Result<f64, LfuncError>
where
    F: Fn(f64) -> Result<f64, LfuncError>,
{
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Roots of `f` on `(lo, hi)` found from sign changes on a grid whose step at
/// height x is `step(x)`, each refined to `tol`.
pub fn sign_change_roots<F, S>(f: &F, lo: f64, hi: f64, step: S, tol: f64) -> Result<Vec<f64>, LfuncError>
where
    F: Fn(f64) -> Result<f64, LfuncError>,
    S: Fn(f64) -> f64,
{
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0)?;
    while x0 < hi {
        let x1 = (x0 + step(x0)).min(hi);
        let f1 = f(x1)?;
        if f0 != 0.0 && f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(f, x0, x1, f0, tol)?);
        } else if f1 == 0.0 && x1 < hi {
            roots.push(x1);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}

/// Moves a chunk boundary off any nearby zero so the count there is defined.
fn settle_boundary(mut height: f64) -> Result<(f64, i64), ZerosError> {
    for _ in 0..32 {
        match count_via_argument(height) {
            Ok(v) => return Ok((height, v.round() as i64)),
            Err(ZerosError::TooCloseToZero { .. }) | Err(ZerosError::NonIntegralCount { .. }) => height += 1e-4,
            Err(e) => return Err(e),
        }
    }
    Err(ZerosError::TooCloseToZero { height, distance: 0.0 })
}

fn scan_chunk(lo: f64, hi: f64, expected: i64) -> Result<Vec<f64>, ZerosError> {
    let z = |e: f64| lfunc::hardy_z(e);
    let roots = sign_change_roots(&z, lo, hi, scan_step, ROOT_TOLERANCE)?;
    if roots.len() as i64 == expected {
        return Ok(roots);
    }
    let fine = sign_change_roots(&z, lo, hi, |e| scan_step(e) / REFINEMENT_FACTOR, ROOT_TOLERANCE)?;
    if fine.len() as i64 == expected {
        return Ok(fine);
    }
    Err(ZerosError::CertificationFailed {
        lo,
        hi,
        found: fine.len(),
        expected,
    })
}

/// All zeros with `0 < γ < E_max`, certified complete against the
/// argument principle.
pub fn find_zeros(e_max: f64) -> Result<ZeroList, ZerosError> {
    check_height(e_max)?;
    let mut raw = vec![0.0];
    let mut b = CHUNK_LENGTH;
    while b < e_max {
        raw.push(b);
        b += CHUNK_LENGTH;
    }
    raw.push(e_max);
    let settled: Vec<(f64, i64)> = raw[1..]
        .par_iter()
        .map(|&b| settle_boundary(b))
        .collect::<Result<_, _>>()?;
    let mut bounds = vec![(0.0, 0i64)];
    bounds.extend(settled);
    let chunks: Vec<Vec<f64>> = bounds
        .par_windows(2)
        .map(|w| {
            let ((lo, n_lo), (hi, n_hi)) = (w[0], w[1]);
            // Z(0) = ζ(1/2) ≠ 0, so the scan may start at the origin
            scan_chunk(lo.max(1e-9), hi, n_hi - n_lo)
        })
        .collect::<Result<_, _>>()?;
    let mut gammas: Vec<f64> = chunks.into_iter().flatten().filter(|&g| g < e_max).collect();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    ZeroList::new(gammas, ZeroSource::Computed, ROOT_TOLERANCE)
}

/// Parses a zero table: one decimal ordinate per line, or `k,gamma` rows with
/// an optional `k,gamma` header. Blank lines are ignored.
pub fn parse_zero_table(text: &str) -> Result<ZeroList, ZerosError> {
    let mut gammas: Vec<f64> = Vec::new();
    let mut max_decimals = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || (line == 1 && trimmed.eq_ignore_ascii_case("k,gamma")) {
            continue;
        }
        let field = match trimmed.split_once(',') {
            Some((k, g)) if k.trim().parse::<u64>().is_ok() => g.trim(),
            Some(_) => {
                return Err(ZerosError::Malformed {
                    line,
                    content: trimmed.to_string(),
                })
            }
            None => trimmed,
        };
        let value: f64 = field.parse().map_err(|_| ZerosError::Malformed {
            line,
            content: trimmed.to_string(),
        })?;
        if !(value > 0.0) || !value.is_finite() {
            return Err(ZerosError::NotPositive { line, value });
        }
        if gammas.last().is_some_and(|&prev| value <= prev) {
            return Err(ZerosError::NotMonotone { line, value });
        }
        max_decimals = max_decimals.max(field.split_once('.').map_or(0, |(_, frac)| frac.len()));
        gammas.push(value);
    }
    let tolerance = 0.5 * 10f64.powi(-(max_decimals as i32));
    Ok(ZeroList {
        gammas,
        source: ZeroSource::Ingested,
        tolerance,
    })
}

/// Reads a zero table from disk; see [`parse_zero_table`].
pub fn ingest_zero_table(path: &Path) -> Result<ZeroList, ZerosError> {
    let text = fs::read_to_string(path).map_err(|source| ZerosError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_zero_table(&text)
}

/// Cache format: header `k,gamma`, 1-based index, 12 decimals, LF endings.
pub fn format_zero_table(zeros: &ZeroList) -> String {
    let mut out = String::from("k,gamma\n");
    for (k, g) in zeros.gammas().iter().enumerate() {
        out.push_str(&format!("{},{:.12}\n", k + 1, g));
    }
    out
}

/// Writes the cache format atomically (temporary file in the target
/// directory, then rename).
pub fn write_zero_table(path: &Path, zeros: &ZeroList) -> Result<(), ZerosError> {
    let io_err = |source| ZerosError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(format_zero_table(zeros).as_bytes()).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Directory of persisted zero lists, one file per certified height.
#[derive(Debug, Clone)]
pub struct ZeroCache {
    dir: PathBuf,
}

impl ZeroCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ZeroCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, e_max: f64) -> PathBuf {
        self.dir.join(format!("zeros-{e_max:.6}.csv"))
    }

    /// A cached list certified to at least `e_max`, restricted to γ < e_max.
    pub fn lookup(&self, e_max: f64) -> Option<ZeroList> {
        let entries = fs::read_dir(&self.dir).ok()?;
        let mut best: Option<(f64, PathBuf)> = None;
        for entry in entries.flatten() {
            let name = entry.file_name();
            let name = name.to_string_lossy();
            let Some(height) = name
                .strip_prefix("zeros-")
                .and_then(|r| r.strip_suffix(".csv"))
                .and_then(|h| h.parse::<f64>().ok())
            else {
                continue;
            };
            if height >= e_max && best.as_ref().is_none_or(|(h, _)| height < *h) {
                best = Some((height, entry.path()));
            }
        }
        let (_, path) = best?;
        let list = ingest_zero_table(&path).ok()?;
        Some(ZeroList {
            source: ZeroSource::Computed,
            tolerance: ROOT_TOLERANCE,
            ..list.below(e_max)
        })
    }

    /// Cached zeros if available, otherwise computes and persists them.
    pub fn load_or_compute(&self, e_max: f64) -> Result<ZeroList, ZerosError> {
        if let Some(list) = self.lookup(e_max) {
            return Ok(list);
        }
        let list = find_zeros(e_max)?;
        fs::create_dir_all(&self.dir).map_err(|source| ZerosError::Io {
            path: self.dir.clone(),
            source,
        })?;
        write_zero_table(&self.path_for(e_max), &list)?;
        Ok(list.rounded_to_cache_precision())
    }
}
