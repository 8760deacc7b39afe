//! Parameter validation and execution of each subcommand.

use crate::args::*;
use crate::error::{compute, usage, CliError};
use crate::output::{Emitter, Table};
use rayon::prelude::*;
use rsl_core::arith::{self, gcd, log_integral, prime_count_progression, totient};
use rsl_core::lfunc;
use rsl_core::orbits::{self, GeometricTail, Repetitions, TruncationSpec};
use rsl_core::rmt::{self, EnsembleClass, EnsembleSpec, SpectrumSample};
use rsl_core::spectra::{self, SpacingReference, UnfoldedSequence};
use rsl_core::zeros::{self, ZeroCache, ZeroList};
use std::path::Path;

pub const CACHE_ENV: &str = "RSL_CACHE_DIR";
const MAX_PROGRESSION_X: f64 = 1e8;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

fn check_grid(g: &GridArgs, max: f64) -> Result<(), CliError> {
    check(g.points >= 1, || "--points must be at least 1".into())?;
    check(g.emin > 0.0 && g.emin.is_finite(), || format!("--emin must be positive, got {}", g.emin))?;
    check(g.emax <= max, || format!("--emax must be at most {max}, got {}", g.emax))?;
    check(g.points == 1 || g.emax > g.emin, || format!("--emax ({}) must exceed --emin ({})", g.emax, g.emin))
}

fn check_ensemble(e: &EnsembleArgs) -> Result<EnsembleSpec, CliError> {
    check(e.n >= 1, || "--n must be at least 1".into())?;
    check(e.samples >= 1, || "--samples must be at least 1".into())?;
    check(e.variance > 0.0 && e.variance.is_finite(), || format!("--variance must be positive, got {}", e.variance))?;
    EnsembleSpec::new(e.class, e.n, e.variance, 0).map_err(|err| usage(err.to_string()))
}

/// Rejects invalid parameters before any computation starts.
pub fn validate(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Zeros(a) => check(a.emax > 0.0 && a.emax <= lfunc::MAX_HEIGHT, || {
            format!("--emax must lie in (0, {}], got {}", lfunc::MAX_HEIGHT, a.emax)
        }),
        Command::Count(a) => check_grid(&a.grid, lfunc::MAX_HEIGHT),
        Command::Orbitsum(a) => {
            check_grid(&a.grid, f64::INFINITY)?;
            check(a.primes >= 2, || format!("--primes must be at least 2, got {}", a.primes))?;
            check(a.primes <= arith::SIEVE_CEILING, || format!("--primes exceeds the sieve ceiling {}", arith::SIEVE_CEILING))?;
            check(a.reps >= 1, || "--reps must be at least 1".into())?;
            check(a.nmax.is_none_or(|n| n >= 1), || "--nmax must be at least 1".into())?;
            check(a.width >= 0.0 && a.width.is_finite(), || format!("--width must be non-negative, got {}", a.width))
        }
        Command::Identity(a) => {
            check(!a.x.is_empty(), || "--x needs at least one value".into())?;
            for &x in &a.x {
                check(x.abs() < 1.0, || format!("--x values must satisfy |x| < 1, got {x}"))?;
            }
            Ok(())
        }
        Command::Equiv(a) => {
            check(!a.energies.is_empty() && !a.primes.is_empty() && !a.nmax.is_empty(), || {
                "--energies, --primes and --nmax need at least one value each".into()
            })?;
            for &e in &a.energies {
                check(e.is_finite(), || format!("--energies contains {e}"))?;
            }
            for &p in &a.primes {
                check((1..=arith::SIEVE_CEILING).contains(&p), || format!("--primes value {p} out of range"))?;
            }
            for &n in &a.nmax {
                check(n >= 1, || "--nmax values must be at least 1".into())?;
            }
            Ok(())
        }
        Command::Rmt(a) => check_ensemble(&a.ensemble).map(|_| ()),
        Command::Stats(a) => {
            check(a.pair_max > 0.0 && a.pair_width > 0.0 && a.pair_width <= a.pair_max, || {
                format!("need 0 < --pair-width <= --pair-max, got {} and {}", a.pair_width, a.pair_max)
            })?;
            check(a.bin.is_none_or(|b| b > 0.0 && b.is_finite()), || "--bin must be positive".into())?;
            check(a.window > 0.0 && a.window <= 1.0, || format!("--window must lie in (0, 1], got {}", a.window))?;
            match a.source {
                StatsSource::Zeros => {
                    check(a.emax > 0.0 && a.emax <= lfunc::MAX_HEIGHT, || {
                        format!("--emax must lie in (0, {}], got {}", lfunc::MAX_HEIGHT, a.emax)
                    })?;
                    check(a.count.is_none_or(|c| c >= spectra::MIN_UNFOLD_ZEROS), || {
                        format!("--count must be at least {}", spectra::MIN_UNFOLD_ZEROS)
                    })
                }
                StatsSource::Ensemble => check_ensemble(&a.ensemble).map(|_| ()),
            }
        }
        Command::Family(a) => {
            check(a.window > 0.0 && a.window <= lfunc::MAX_L_HEIGHT, || {
                format!("--window must lie in (0, {}], got {}", lfunc::MAX_L_HEIGHT, a.window)
            })?;
            for d in family_moduli(a) {
                let chars = arith::real_primitive_characters(d).map_err(|e| usage(format!("--moduli: {e}")))?;
                check(chars.iter().any(|c| c.is_even()), || {
                    format!("--moduli: {d} has no real even primitive character")
                })?;
            }
            Ok(())
        }
        Command::Progression(a) => {
            check(a.modulus >= 2, || format!("--modulus must be at least 2, got {}", a.modulus))?;
            for &x in &a.x {
                check((0.0..=MAX_PROGRESSION_X).contains(&x), || format!("--x values must lie in [0, {MAX_PROGRESSION_X}], got {x}"))?;
            }
            Ok(())
        }
        Command::Ingest(_) => Ok(()),
    }
}

pub fn run(cmd: &Command, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    match cmd {
        Command::Zeros(a) => zeros_cmd(a, out),
        Command::Count(a) => count_cmd(a, out),
        Command::Orbitsum(a) => orbitsum_cmd(a, out),
        Command::Identity(a) => identity_cmd(a, out),
        Command::Equiv(a) => equiv_cmd(a, out),
        Command::Rmt(a) => rmt_cmd(a, out),
        Command::Stats(a) => stats_cmd(a, out),
        Command::Family(a) => family_cmd(a, out),
        Command::Progression(a) => progression_cmd(a, out),
        Command::Ingest(a) => ingest_cmd(a, out),
    }
}

fn zero_table(zl: &ZeroList) -> Table {
    let mut t = Table::new(&["k", "gamma"]);
    for (k, &g) in zl.gammas().iter().enumerate() {
        t.push(vec![(k + 1).into(), g.into()]);
    }
    t
}

/// Zero tables keep the 12-decimal cache format in CSV so they re-ingest
/// exactly.
fn emit_zeros(zl: &ZeroList, out: &mut Emitter) -> Result<(), CliError> {
    match out.format {
        Format::Csv => {
            let path = out.primary.clone();
            out.write_text(path.clone(), &zeros::format_zero_table(zl))?;
            out.plot_stub(&path)
        }
        Format::Json => out.primary_table(&zero_table(&zl.rounded_to_cache_precision())),
    }
}

fn load_zeros(emax: f64) -> Result<ZeroList, CliError> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => ZeroCache::new(dir).load_or_compute(emax),
        _ => zeros::find_zeros(emax),
    }
    .map_err(compute)
}

fn zeros_cmd(a: &ZerosArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let zl = load_zeros(a.emax)?;
    emit_zeros(&zl, out)?;
    Ok(vec![format!("{} zeros with 0 < gamma < {}", zl.len(), a.emax)])
}

fn count_cmd(a: &CountArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let grid = a.grid.grid();
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&e| zeros::decompose(e).map_err(|err| compute(format!("count at E = {e}: {err}"))))
        .collect::<Result<_, _>>()?;
    let mut t = Table::new(&["E", "n_exact", "n_smooth", "n_osc"]);
    for d in &rows {
        t.push(vec![d.height.into(), d.n_exact.into(), d.n_smooth.into(), d.n_osc.into()]);
    }
    out.primary_table(&t)?;
    let last = rows.last().expect("non-empty grid");
    Ok(vec![format!("{} grid points; N({}) = {}", rows.len(), last.height, last.n_exact)])
}

fn orbitsum_cmd(a: &OrbitsumArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let trunc = match a.nmax {
        Some(n) => TruncationSpec::closed(a.primes, n),
        None => TruncationSpec::open(a.primes, a.kmax, a.reps),
    };
    trunc.validate().map_err(|e| usage(e.to_string()))?;
    let grid = a.grid.grid();
    let orbit_list = orbits::ansatz_orbits(&trunc).map_err(compute)?;
    let reps = Repetitions::from(&trunc);
    let reconstructed = orbits::reconstruct_staircase(&grid, &trunc, a.width).map_err(compute)?;
    let rows: Vec<[f64; 4]> = grid
        .par_iter()
        .map(|&e| {
            let prime = orbits::nosc_prime_sum(e, &trunc)?;
            let gutz = orbits::gutzwiller_sum(&orbit_list, e, trunc.rep_cutoff)?;
            let class_c = orbits::class_c_sum(&orbit_list, e, reps)?;
            Ok([lfunc::smooth_count(e).exact, prime, gutz, class_c])
        })
        .collect::<Result<_, orbits::OrbitError>>()
        .map_err(compute)?;
    let mut t = Table::new(&["E", "n_smooth", "nosc_prime", "gutzwiller", "class_c", "reconstructed"]);
    for ((&e, r), &rec) in grid.iter().zip(&rows).zip(&reconstructed) {
        t.push(vec![e.into(), r[0].into(), r[1].into(), r[2].into(), r[3].into(), rec.into()]);
    }
    out.primary_table(&t)?;
    Ok(vec![format!(
        "{} grid points, {} ansatz orbits, truncation {}",
        grid.len(),
        orbit_list.len(),
        match a.nmax {
            Some(n) => format!("closed 2^k r <= {n}"),
            None => format!("open K = {}, R = {}", a.kmax, a.reps),
        }
    )])
}

fn identity_cmd(a: &IdentityArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let mut t = Table::new(&["x", "lhs", "rhs", "log_1_minus_x", "difference", "terms", "tail_bound"]);
    let mut lines = Vec::new();
    for &x in &a.x {
        let c = orbits::doubling_identity_check(|n| x.powi(n as i32), GeometricTail { scale: 1.0, ratio: x.abs() })
            .map_err(|e| compute(format!("identity at x = {x}: {e}")))?;
        let exact = (1.0 - x).ln();
        t.push(vec![
            x.into(),
            c.lhs.into(),
            c.rhs.into(),
            exact.into(),
            (c.lhs - c.rhs).into(),
            c.terms.into(),
            c.tail_bound.into(),
        ]);
        lines.push(format!("x = {x}: lhs = {:.12} rhs = {:.12} log(1-x) = {exact:.12}", c.lhs, c.rhs));
    }
    out.primary_table(&t)?;
    Ok(lines)
}

fn equiv_cmd(a: &EquivArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let mut t = Table::new(&["E", "P", "n_max", "ansatz_form", "prime_form", "difference"]);
    let mut worst: f64 = 0.0;
    for &p in &a.primes {
        for &n in &a.nmax {
            let trunc = TruncationSpec::closed(p, n);
            for &e in &a.energies {
                let eq = orbits::equivalence_check(e, &trunc).map_err(|err| compute(format!("E = {e}, P = {p}, n_max = {n}: {err}")))?;
                let diff = eq.ansatz_form - eq.prime_form;
                worst = worst.max(diff.abs());
                t.push(vec![e.into(), p.into(), n.into(), eq.ansatz_form.into(), eq.prime_form.into(), diff.into()]);
            }
        }
    }
    out.primary_table(&t)?;
    Ok(vec![format!("{} cases, max |difference| = {worst:.3e}", t.rows.len())])
}

fn spectrum_table(samples: &[SpectrumSample]) -> Table {
    let mut t = Table::new(&["sample", "index", "eigenvalue"]);
    for s in samples {
        for (i, &x) in s.eigenvalues.iter().enumerate() {
            t.push(vec![s.sample_index.into(), i.into(), x.into()]);
        }
    }
    t
}

fn sample_ensemble(e: &EnsembleArgs, seed: u64) -> Result<(EnsembleSpec, Vec<SpectrumSample>), CliError> {
    let spec = EnsembleSpec::new(e.class, e.n, e.variance, seed).map_err(|err| usage(err.to_string()))?;
    let samples = rmt::sample_many(&spec, e.samples).map_err(compute)?;
    Ok((spec, samples))
}

fn rmt_cmd(a: &RmtArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let (spec, samples) = sample_ensemble(&a.ensemble, a.seed)?;
    out.primary_table(&spectrum_table(&samples))?;
    let mut lines = vec![format!(
        "{} sample(s) of class {} at dimension {}",
        samples.len(),
        spec.class,
        spec.matrix_dim()
    )];
    if spec.class != EnsembleClass::Gue {
        let worst = samples.iter().map(|s| s.pairing_residual()).fold(0.0, f64::max);
        lines.push(format!("max pairing residual {worst:.3e}"));
    }
    Ok(lines)
}

/// Reads `sample,index,eigenvalue` rows written by `rmt`.
fn read_spectra(path: &Path, spec: EnsembleSpec) -> Result<Vec<SpectrumSample>, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| compute(format!("{}: {e}", path.display())))?;
    let mut samples: Vec<SpectrumSample> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| compute(format!("{}:{line}: {e}", path.display())))?;
        let bad = || compute(format!("{}:{line}: expected sample,index,eigenvalue", path.display()));
        let sample: u64 = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let value: f64 = rec.get(2).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        match samples.last_mut() {
            Some(s) if s.sample_index == sample => s.eigenvalues.push(value),
            _ => samples.push(SpectrumSample {
                eigenvalues: vec![value],
                spec,
                sample_index: sample,
            }),
        }
    }
    for s in &mut samples {
        s.eigenvalues.sort_by(f64::total_cmp);
    }
    Ok(samples)
}

fn stats_cmd(a: &StatsArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let mut summary = Table::new(&["statistic", "value"]);
    let seqs: Vec<UnfoldedSequence>;
    let mut lines = Vec::new();
    match a.source {
        StatsSource::Zeros => {
            let mut zl = match &a.input {
                Some(p) => zeros::ingest_zero_table(p).map_err(compute)?,
                None => load_zeros(a.emax)?,
            };
            if let Some(c) = a.count {
                if zl.len() < c {
                    return Err(compute(format!("only {} zeros available, --count asks for {c}", zl.len())));
                }
                zl = zl.truncated(c);
            }
            seqs = vec![spectra::unfold_zeros(&zl).map_err(compute)?];
            summary.push(vec!["zeros".into(), zl.len().into()]);
        }
        StatsSource::Ensemble => {
            let (spec, samples) = match &a.input {
                Some(p) => {
                    let spec = EnsembleSpec::new(a.ensemble.class, a.ensemble.n, a.ensemble.variance, a.seed)
                        .map_err(|e| usage(e.to_string()))?;
                    (spec, read_spectra(p, spec)?)
                }
                None => sample_ensemble(&a.ensemble, a.seed)?,
            };
            if spec.class != EnsembleClass::Gue {
                let bin = match a.bin {
                    Some(b) => b,
                    None => spectra::default_near_zero_bin(&samples).map_err(compute)?,
                };
                let d = spectra::near_zero_density(&samples, bin).map_err(compute)?;
                summary.push(vec!["near_zero_bin".into(), d.bin_width.into()]);
                summary.push(vec!["near_zero_density".into(), d.near_zero.into()]);
                summary.push(vec!["bulk_density".into(), d.bulk.into()]);
                summary.push(vec!["near_zero_ratio".into(), d.ratio().into()]);
                lines.push(format!("near-zero/bulk density ratio {:.4}", d.ratio()));
            }
            seqs = samples
                .iter()
                .map(|s| spectra::unfold_ensemble(s, a.window))
                .collect::<Result<_, _>>()
                .map_err(compute)?;
            summary.push(vec!["samples".into(), samples.len().into()]);
        }
    }
    let spacings: Vec<f64> = seqs.iter().flat_map(|s| s.spacings()).collect();
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    let variance = spacings.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / spacings.len() as f64;
    let ks_gue = spectra::spacing_ks_pooled(&seqs, SpacingReference::GueSurmise).map_err(compute)?;
    let ks_poisson = spectra::spacing_ks_pooled(&seqs, SpacingReference::Poisson).map_err(compute)?;
    summary.push(vec!["spacings".into(), spacings.len().into()]);
    summary.push(vec!["spacing_variance".into(), variance.into()]);
    summary.push(vec!["ks_gue_surmise".into(), ks_gue.into()]);
    summary.push(vec!["ks_poisson".into(), ks_poisson.into()]);
    lines.push(format!("KS vs GUE surmise {ks_gue:.4}, vs Poisson {ks_poisson:.4}"));

    let grid = spectra::pair_grid(a.pair_max, a.pair_width);
    let pair = match spectra::pair_correlation_pooled(&seqs, &grid, a.pair_width) {
        Ok(r) => Some(r),
        Err(spectra::SpectraError::TooFew { needed, got }) => {
            lines.push(format!("pair correlation skipped: {got} points, need {needed}"));
            None
        }
        Err(e) => return Err(compute(e)),
    };
    if let Some(r2) = pair {
        let mut t = Table::new(&["x", "r2", "gue"]);
        let mut worst: f64 = 0.0;
        for (&x, &r) in grid.iter().zip(&r2) {
            let lo = (x - 0.5 * a.pair_width).max(0.0);
            let reference = spectra::gue_pair_correlation_bin(lo, x + 0.5 * a.pair_width);
            worst = worst.max((r - reference).abs());
            t.push(vec![x.into(), r.into(), reference.into()]);
        }
        summary.push(vec!["pair_sup_deviation".into(), worst.into()]);
        lines.push(format!("pair-correlation sup deviation {worst:.4}"));
        out.primary_table(&summary)?;
        out.extra_table("pair", &t)?;
    } else {
        out.primary_table(&summary)?;
    }
    Ok(lines)
}

fn family_moduli(a: &FamilyArgs) -> Vec<u64> {
    a.moduli
        .clone()
        .unwrap_or_else(|| spectra::even_quadratic_prime_moduli(a.max_modulus))
}

fn family_cmd(a: &FamilyArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let moduli = family_moduli(a);
    let low = spectra::family_low_zeros(&moduli, a.window).map_err(compute)?;
    let mut t = Table::new(&["modulus", "gamma", "scaled"]);
    let mut missing = Vec::new();
    for z in &low {
        if z.ordinate.is_none() {
            missing.push(z.modulus.to_string());
        }
        t.push(vec![z.modulus.into(), z.ordinate.into(), z.scaled().into()]);
    }
    out.primary_table(&t)?;
    let scaled: Vec<f64> = low.iter().filter_map(|z| z.scaled()).collect();
    let mut lines = vec![format!("{} moduli, {} with a zero below {}", low.len(), scaled.len(), a.window)];
    if !missing.is_empty() {
        lines.push(format!("no zero in (0, {}) for modulus {}", a.window, missing.join(", ")));
    }
    if !scaled.is_empty() {
        let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
        let density = spectra::family_decile_density(&scaled);
        let width = 2.0 * mean / density.len() as f64;
        let mut d = Table::new(&["bin_lo", "bin_hi", "density"]);
        for (i, &v) in density.iter().enumerate() {
            d.push(vec![(width * i as f64).into(), (width * (i + 1) as f64).into(), v.into()]);
        }
        out.extra_table("deciles", &d)?;
        lines.push(format!("decile densities {density:.3?}"));
    }
    Ok(lines)
}

fn progression_cmd(a: &ProgressionArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let d = a.modulus;
    let phi = totient(d).map_err(|e| usage(e.to_string()))? as f64;
    let residues: Vec<u64> = (1..d).filter(|&r| gcd(r, d) == 1).collect();
    let mut t = Table::new(&["x", "a", "count", "li_over_phi", "relative_deviation"]);
    for &x in &a.x {
        let li = if x > 1.0 { Some(log_integral(x).map_err(compute)? / phi) } else { None };
        for &r in &residues {
            let n = prime_count_progression(r, d, x).map_err(compute)?;
            let rel = li.map(|l| (n as f64 - l) / l);
            t.push(vec![x.into(), r.into(), n.into(), li.into(), rel.into()]);
        }
    }
    out.primary_table(&t)?;
    Ok(vec![format!("{} residues mod {d} at {} bounds", residues.len(), a.x.len())])
}

fn ingest_cmd(a: &IngestArgs, out: &mut Emitter) -> Result<Vec<String>, CliError> {
    let zl = zeros::ingest_zero_table(&a.input).map_err(compute)?;
    emit_zeros(&zl, out)?;
    Ok(vec![format!("ingested {} zeros from {}", zl.len(), a.input.display())])
}
