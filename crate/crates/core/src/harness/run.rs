use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::report::{finite, Check, Comparison, Estimate, Metadata, PlotTable, Report, Row, Summary};
use crate::ensembles::{
    sample_beta_tridiagonal, sample_goe, sample_gue_embedded, sample_shell_counted, sample_wigner,
    EnsembleSpec, EntryDistribution, ShellMode, ShellSpec,
};
use crate::error::{Error, Result};
use crate::laws::{
    classical_location, edge_measure_density, semicircle_cdf, semicircle_quantile, sinc_pi, std_normal_cdf,
    ReferenceCdf,
};
use crate::oracles::chi_shell_probability;
use crate::seed::{rng_from_seed, stream_seed};
use crate::spectra::{eigenvalues, tridiagonal_eigenvalues, Spectrum};
use crate::stats::{
    default_trace_power, edge_histogram, edge_measure_cdf, gap_indices, interval_probability,
    ks_one_sample, ks_two_sample, mean_estimate, normalize_bulk, pair_correlation, pearson,
    rescale_edge, trace_moment, ProportionEstimate,
};

/// Largest tolerated fraction of failed replicates.
pub const MAX_FAILED_FRACTION: f64 = 0.001;
/// Tolerance on the relative trace and Frobenius residuals of every spectrum.
pub const INVARIANT_TOL: f64 = 1e-10;

/// A spectrum together with its conservation residuals against the source
/// matrix.
#[derive(Debug, Clone)]
pub struct SampledSpectrum {
    pub spectrum: Spectrum,
    pub trace_residual: f64,
    pub frobenius_residual: f64,
}

/// Draws one matrix from `spec` and returns its spectrum. GUE spectra are
/// deduplicated to `n` values.
pub fn sample_spectrum(spec: EnsembleSpec, n: usize, seed: u64) -> Result<SampledSpectrum> {
    let (spectrum, (dt, df)) = match spec {
        EnsembleSpec::Wigner(d) => {
            let m = sample_wigner(n, d, seed)?;
            let s = eigenvalues(&m)?;
            let r = s.invariant_residuals(m.trace(), m.frobenius_sq());
            (s, r)
        }
        EnsembleSpec::Goe => {
            let m = sample_goe(n, seed)?;
            let s = eigenvalues(&m)?;
            let r = s.invariant_residuals(m.trace(), m.frobenius_sq());
            (s, r)
        }
        EnsembleSpec::Gue => {
            let m = sample_gue_embedded(n, seed)?;
            let s = eigenvalues(&m)?;
            let r = s.invariant_residuals(m.trace(), m.frobenius_sq());
            (s.deduplicate_pairs(), r)
        }
        EnsembleSpec::Tridiagonal { beta } => {
            let t = sample_beta_tridiagonal(n, beta, seed)?;
            let s = tridiagonal_eigenvalues(&t)?;
            let r = s.invariant_residuals(t.trace(), t.frobenius_sq());
            (s, r)
        }
    };
    Ok(SampledSpectrum { spectrum, trace_residual: dt, frobenius_residual: df })
}

/// Output of one replicate: its row values plus anything the reduction
/// needs beyond scalars.
struct Replicate {
    values: Vec<f64>,
    keep: Vec<f64>,
    spectrum: Option<Spectrum>,
}

impl Replicate {
    fn scalars(values: Vec<f64>) -> Self {
        Replicate { values, keep: Vec::new(), spectrum: None }
    }
}

struct Replicates {
    rows: Vec<Row>,
    outputs: Vec<Option<Replicate>>,
    failed: usize,
}

impl Replicates {
    fn ok(&self) -> impl Iterator<Item = &Replicate> {
        self.outputs.iter().flatten()
    }

    fn column(&self, idx: usize) -> Vec<f64> {
        self.ok().map(|r| r.values[idx]).filter(|x| x.is_finite()).collect()
    }

    fn max_of(&self, idx: usize) -> f64 {
        self.ok().map(|r| r.values[idx]).fold(0.0, f64::max)
    }
}

fn run_replicates<F>(cfg: &ExperimentConfig, width: usize, job: F) -> Result<Replicates>
where
    F: Fn(u64) -> Result<Replicate> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", cfg.workers)))?;
    let results: Vec<Result<Replicate>> =
        pool.install(|| (0..cfg.reps as u64).into_par_iter().map(&job).collect());
    let mut rows = Vec::with_capacity(cfg.reps);
    let mut outputs = Vec::with_capacity(cfg.reps);
    let mut failed = 0;
    for (r, res) in results.into_iter().enumerate() {
        let seed = stream_seed(cfg.seed, r as u64, 0);
        match res {
            Ok(rep) => {
                rows.push(Row {
                    replicate: r as u64,
                    seed,
                    values: rep.values.iter().map(|&x| finite(x)).collect(),
                    error: None,
                });
                outputs.push(Some(rep));
            }
            Err(e) => {
                failed += 1;
                rows.push(Row { replicate: r as u64, seed, values: vec![None; width], error: Some(e.to_string()) });
                outputs.push(None);
            }
        }
    }
    if failed as f64 > MAX_FAILED_FRACTION * cfg.reps as f64 {
        let first = rows.iter().find_map(|r| r.error.clone()).unwrap_or_default();
        return Err(Error::Numeric(format!(
            "{failed} of {} replicates failed (limit {:.1}%); first error: {first}",
            cfg.reps,
            100.0 * MAX_FAILED_FRACTION
        )));
    }
    Ok(Replicates { rows, outputs, failed })
}

struct Outcome {
    columns: Vec<String>,
    reps: Replicates,
    estimates: Vec<Estimate>,
    checks: Vec<Check>,
    plot: PlotTable,
}

fn est(name: &str, value: f64) -> Estimate {
    Estimate { name: name.into(), value: finite(value), std_error: None }
}

fn est_se(name: &str, value: f64, se: f64) -> Estimate {
    Estimate { name: name.into(), value: finite(value), std_error: finite(se) }
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn plot(columns: &[&str], rows: Vec<Vec<f64>>) -> PlotTable {
    PlotTable {
        columns: cols(columns),
        rows: rows.into_iter().map(|r| r.into_iter().map(finite).collect()).collect(),
    }
}

/// ECDF of a sorted sample at `x` (fraction of values `<= x`).
fn ecdf(sorted: &[f64], x: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn invariant_estimates(reps: &Replicates, tr: usize, fr: usize) -> (Vec<Estimate>, Check) {
    let (t, f) = (reps.max_of(tr), reps.max_of(fr));
    (
        vec![est("max_trace_residual", t), est("max_frobenius_residual", f)],
        Check::new("spectrum_invariants", t.max(f), Comparison::AtMost, INVARIANT_TOL),
    )
}

fn median_index(n: usize) -> usize {
    n.div_ceil(2)
}

/// Runs one experiment. Replicate `r` draws from seeds
/// `stream_seed(seed, r, s)`, so the report depends only on the
/// configuration, never on the number of workers.
pub fn run_experiment(config: ExperimentConfig) -> Result<Report> {
    let cfg = config.validate()?;
    if let EnsembleSpec::Wigner(d) = cfg.dist {
        d.validate()?;
    }
    let out = match cfg.kind {
        ExperimentKind::Semicircle => semicircle(&cfg)?,
        ExperimentKind::BulkClt => bulk_clt(&cfg)?,
        ExperimentKind::Universality => universality(&cfg)?,
        ExperimentKind::EdgeTw => edge_tw(&cfg)?,
        ExperimentKind::EdgeMeasure => edge_measure_exp(&cfg)?,
        ExperimentKind::TraceMoment => trace_moment_exp(&cfg)?,
        ExperimentKind::PairCorrelation => pair_correlation_exp(&cfg)?,
        ExperimentKind::GapCorrelation => gap_correlation_exp(&cfg)?,
        ExperimentKind::PropShell => prop_shell(&cfg)?,
        ExperimentKind::PropVolumeRatio => prop_volume_ratio(&cfg)?,
        ExperimentKind::TwTable => tw_table(&cfg)?,
    };
    let passed = out.checks.iter().all(|c| c.passed);
    let mut warnings = cfg.dist.warnings();
    if let Ok(r) = cfg.param("ref") {
        if let Ok(spec) = r.parse::<EnsembleSpec>() {
            warnings.extend(spec.warnings());
        }
    }
    Ok(Report {
        metadata: Metadata {
            artifact: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            kind: cfg.kind.to_string(),
            n: cfg.n,
            reps: if cfg.kind == ExperimentKind::TwTable { out.reps.rows.len() } else { cfg.reps },
            dist: cfg.dist.to_string(),
            seed: cfg.seed,
            params: cfg.params.clone(),
            warnings,
        },
        columns: out.columns,
        summary: Summary {
            estimates: out.estimates,
            checks: out.checks,
            failed_replicates: out.reps.failed,
            passed,
        },
        rows: out.reps.rows,
        plot: out.plot,
    })
}

fn semicircle(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.param_f64("tol")?;
    let grid = cfg.param_grid("grid")?;
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    let columns = cols(&["ks_d", "lambda_min", "lambda_max", "trace_residual", "frobenius_residual"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let s = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        let ks = ks_one_sample(s.spectrum.values(), ReferenceCdf::Semicircle)?;
        Ok(Replicate {
            values: vec![ks.d, s.spectrum.min(), s.spectrum.max(), s.trace_residual, s.frobenius_residual],
            keep: s.spectrum.into_values(),
            spectrum: None,
        })
    })?;
    let pooled: Vec<f64> = reps.ok().flat_map(|r| r.keep.iter().copied()).collect();
    let ks = ks_one_sample(&pooled, ReferenceCdf::Semicircle)?;
    let (mut estimates, inv) = invariant_estimates(&reps, 3, 4);
    estimates.insert(0, est("pooled_ks_d", ks.d));
    estimates.insert(1, est("pooled_ks_p", ks.p_value));
    estimates.insert(2, est("pooled_count", pooled.len() as f64));
    let pooled = sorted(pooled);
    let rows = grid.iter().map(|&t| vec![t, ecdf(&pooled, t), semicircle_cdf(t)]).collect();
    Ok(Outcome {
        columns,
        reps,
        estimates,
        checks: vec![Check::new("pooled_ks_d", ks.d, Comparison::LessThan, tol), inv],
        plot: plot(&["t", "ecdf", "semicircle_cdf"], rows),
    })
}

fn bulk_clt(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.param_f64("tol")?;
    let k = cfg.param_usize("k")?;
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    // fail fast on an edge index before sampling
    crate::laws::bulk_sigma(k, n)?;
    let columns = cols(&["normalized", "lambda_k", "trace_residual", "frobenius_residual"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let s = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        let z = normalize_bulk(&s.spectrum, k, n)?;
        Ok(Replicate::scalars(vec![z, s.spectrum.values()[k - 1], s.trace_residual, s.frobenius_residual]))
    })?;
    let z = reps.column(0);
    let ks = ks_one_sample(&z, ReferenceCdf::StdNormal)?;
    let m = mean_estimate(&z)?;
    let sd = m.std_error * (m.count as f64).sqrt();
    // diagnostic only: centering at G^{-1}((k - 1/2)/n) instead of G^{-1}(k/n)
    let sigma = crate::laws::bulk_sigma(k, n)?;
    let shift = (classical_location(k, n)? - semicircle_quantile((k as f64 - 0.5) / n as f64)?) / sigma;
    let shifted: Vec<f64> = z.iter().map(|x| x + shift).collect();
    let ks_mid = ks_one_sample(&shifted, ReferenceCdf::StdNormal)?;
    let (mut estimates, inv) = invariant_estimates(&reps, 2, 3);
    estimates.splice(
        0..0,
        [
            est("ks_d", ks.d),
            est("ks_p", ks.p_value),
            est_se("mean_normalized", m.mean, m.std_error),
            est("sd_normalized", sd),
            est("ks_d_half_index_centering", ks_mid.d),
        ],
    );
    let zs = sorted(z);
    let rows = (0..=160)
        .map(|i| {
            let x = -4.0 + 0.05 * i as f64;
            vec![x, ecdf(&zs, x), std_normal_cdf(x)]
        })
        .collect();
    Ok(Outcome {
        columns,
        reps,
        estimates,
        checks: vec![Check::new("ks_d", ks.d, Comparison::LessThan, tol), inv],
        plot: plot(&["x", "ecdf", "normal_cdf"], rows),
    })
}

fn parse_ref(cfg: &ExperimentConfig) -> Result<Option<EnsembleSpec>> {
    match cfg.param("ref")? {
        "none" => Ok(None),
        s => Ok(Some(s.parse()?)),
    }
}

fn universality(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (b, c) = (cfg.param_f64("b")?, cfg.param_f64("c")?);
    let p_min = cfg.param_f64("p_min")?;
    let se_mult = cfg.param_f64("se_mult")?;
    let k = match cfg.param("k")? {
        "median" => median_index(cfg.n),
        _ => cfg.param_usize("k")?,
    };
    let reference = parse_ref(cfg)?
        .ok_or_else(|| Error::Config("universality needs a reference ensemble in 'ref'".into()))?;
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    if k == 0 || k > n {
        return Err(Error::Config(format!("eigenvalue index k={k} outside 1..={n}")));
    }
    let columns = cols(&["lambda_k", "lambda_k_ref", "trace_residual", "frobenius_residual"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let a = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        let e = sample_spectrum(reference, n, stream_seed(seed, r, 1))?;
        Ok(Replicate::scalars(vec![
            a.spectrum.values()[k - 1],
            e.spectrum.values()[k - 1],
            a.trace_residual.max(e.trace_residual),
            a.frobenius_residual.max(e.frobenius_residual),
        ]))
    })?;
    let (xa, xb) = (reps.column(0), reps.column(1));
    let ks = ks_two_sample(&xa, &xb)?;
    let pa = interval_probability(&xa, b, c, n)?;
    let pb = interval_probability(&xb, b, c, n)?;
    let se = pa.combined_se(&pb);
    let diff = (pa.p - pb.p).abs();
    let (mut estimates, inv) = invariant_estimates(&reps, 2, 3);
    estimates.splice(
        0..0,
        [
            est("k", k as f64),
            est("ks_two_sample_d", ks.d),
            est("ks_two_sample_p", ks.p_value),
            est_se("interval_probability", pa.p, pa.std_error),
            est_se("interval_probability_ref", pb.p, pb.std_error),
            est_se("interval_probability_diff", diff, se),
        ],
    );
    let (sa, sb) = (sorted(xa), sorted(xb));
    let lo = sa[0].min(sb[0]);
    let hi = sa[sa.len() - 1].max(sb[sb.len() - 1]);
    let rows = (0..=200)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / 200.0;
            vec![x, ecdf(&sa, x), ecdf(&sb, x)]
        })
        .collect();
    Ok(Outcome {
        columns,
        reps,
        estimates,
        checks: vec![
            Check::new("ks_two_sample_p", ks.p_value, Comparison::GreaterThan, p_min),
            Check::new("interval_probability_diff_over_se", diff - se_mult * se, Comparison::AtMost, 0.0),
            inv,
        ],
        plot: plot(&["x", "ecdf", "ecdf_ref"], rows),
    })
}

fn edge_tw(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.param_f64("tol")?;
    let p_min = cfg.param_f64("p_min")?;
    let reference = parse_ref(cfg)?;
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    ReferenceCdf::TracyWidom2.prepare()?;
    let columns = cols(&["rescaled_edge", "rescaled_edge_ref", "trace_residual", "frobenius_residual"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let a = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        let (x_ref, tr, fr) = match reference {
            Some(spec) => {
                let e = sample_spectrum(spec, n, stream_seed(seed, r, 1))?;
                (rescale_edge(&e.spectrum, n), e.trace_residual, e.frobenius_residual)
            }
            None => (f64::NAN, 0.0, 0.0),
        };
        Ok(Replicate::scalars(vec![
            rescale_edge(&a.spectrum, n),
            x_ref,
            a.trace_residual.max(tr),
            a.frobenius_residual.max(fr),
        ]))
    })?;
    let x = reps.column(0);
    let ks = ks_one_sample(&x, ReferenceCdf::TracyWidom2)?;
    let m = mean_estimate(&x)?;
    let (mut estimates, inv) = invariant_estimates(&reps, 2, 3);
    let mut checks = vec![Check::new("ks_d_tw2", ks.d, Comparison::LessThan, tol)];
    let mut head = vec![est("ks_d_tw2", ks.d), est("ks_p_tw2", ks.p_value), est_se("mean_rescaled", m.mean, m.std_error)];
    let xr = reps.column(1);
    if reference.is_some() {
        let two = ks_two_sample(&x, &xr)?;
        let mr = mean_estimate(&xr)?;
        head.push(est("ks_two_sample_d", two.d));
        head.push(est("ks_two_sample_p", two.p_value));
        head.push(est_se("mean_rescaled_ref", mr.mean, mr.std_error));
        checks.push(Check::new("ks_two_sample_p", two.p_value, Comparison::GreaterThan, p_min));
    }
    checks.push(inv);
    estimates.splice(0..0, head);
    let (xs, xrs) = (sorted(x), sorted(xr));
    let mut rows = Vec::new();
    for i in 0..=200 {
        let t = -6.0 + 0.05 * i as f64;
        rows.push(vec![t, ecdf(&xs, t), ReferenceCdf::TracyWidom2.eval(t)?, ecdf(&xrs, t)]);
    }
    Ok(Outcome { columns, reps, estimates, checks, plot: plot(&["x", "ecdf", "tw2_cdf", "ecdf_ref"], rows) })
}

fn edge_measure_exp(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.param_f64("tol")?;
    let window = cfg.param_f64("window")?;
    let bins = cfg.param_usize("bins")?;
    let expo = cfg.param_f64("rn_exponent")?;
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    let r_n = (n as f64).powf(-expo);
    let columns = cols(&["points_in_window", "trace_residual", "frobenius_residual"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let s = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        let m = crate::stats::edge_measure(&s.spectrum, r_n, window)?;
        Ok(Replicate {
            values: vec![m.points.len() as f64, s.trace_residual, s.frobenius_residual],
            keep: Vec::new(),
            spectrum: Some(s.spectrum),
        })
    })?;
    let spectra: Vec<Spectrum> = reps.ok().filter_map(|r| r.spectrum.clone()).collect();
    let hist = edge_histogram(&spectra, r_n, window, bins)?;
    let l1 = hist.l1_error(edge_measure_cdf);
    let (mut estimates, inv) = invariant_estimates(&reps, 1, 2);
    estimates.splice(0..0, [est("r_n", r_n), est("l1_error", l1)]);
    let rows = hist
        .edges
        .windows(2)
        .zip(&hist.density)
        .map(|(w, &d)| {
            let c = 0.5 * (w[0] + w[1]);
            vec![c, d, edge_measure_density(c), (edge_measure_cdf(w[1]) - edge_measure_cdf(w[0])) / (w[1] - w[0])]
        })
        .collect();
    Ok(Outcome {
        columns,
        reps,
        estimates,
        checks: vec![Check::new("l1_error", l1, Comparison::LessThan, tol), inv],
        plot: plot(&["theta", "density", "reference_density", "reference_bin_mean"], rows),
    })
}

/// `2^{3/2} / sqrt(pi)`.
pub fn trace_moment_limit() -> f64 {
    2f64.powf(1.5) / std::f64::consts::PI.sqrt()
}

fn trace_moment_exp(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.param_f64("tol")?;
    let p = match cfg.param("p")? {
        "auto" => default_trace_power(cfg.n),
        _ => cfg.param_usize("p")? as u32,
    };
    if p < 2 || p % 2 == 1 {
        return Err(Error::Config(format!("trace power p must be even and >= 2, got {p}")));
    }
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    let columns = cols(&["statistic", "trace_residual", "frobenius_residual"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let s = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        Ok(Replicate::scalars(vec![trace_moment(&s.spectrum, p)?, s.trace_residual, s.frobenius_residual]))
    })?;
    let m = mean_estimate(&reps.column(0))?;
    let target = trace_moment_limit();
    let rel = (m.mean / target - 1.0).abs();
    let (mut estimates, inv) = invariant_estimates(&reps, 1, 2);
    estimates.splice(
        0..0,
        [est("p", p as f64), est_se("mean_statistic", m.mean, m.std_error), est("target", target), est("relative_error", rel)],
    );
    let rows = reps.rows.iter().map(|r| vec![r.replicate as f64, r.values[0].unwrap_or(f64::NAN), target]).collect();
    Ok(Outcome {
        columns,
        reps,
        estimates,
        checks: vec![Check::new("relative_error", rel, Comparison::LessThan, tol), inv],
        plot: plot(&["replicate", "statistic", "target"], rows),
    })
}

fn pair_correlation_exp(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.param_f64("tol")?;
    let w = cfg.param_f64("half_width")?;
    let bins = cfg.param_usize("bins")?;
    let y_max = cfg.param_f64("y_max")?;
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    let columns = cols(&["points_in_window", "trace_residual", "frobenius_residual"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let s = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        let count = crate::stats::counting_statistic(&s.spectrum, -w, w)?;
        Ok(Replicate {
            values: vec![count as f64, s.trace_residual, s.frobenius_residual],
            keep: Vec::new(),
            spectrum: Some(s.spectrum),
        })
    })?;
    let spectra: Vec<Spectrum> = reps.ok().filter_map(|r| r.spectrum.clone()).collect();
    let r2 = pair_correlation(&spectra, w, bins, y_max)?;
    let reference = |y: f64| 1.0 - sinc_pi(y) * sinc_pi(y);
    let (mut estimates, inv) = invariant_estimates(&reps, 1, 2);
    let mut checks = Vec::new();
    if dist.beta() == 2 {
        let dev = r2.max_deviation(reference);
        estimates.insert(0, est("max_deviation_sine_kernel", dev));
        checks.push(Check::new("max_deviation_sine_kernel", dev, Comparison::LessThan, tol));
    }
    estimates.insert(0, est("flagged_bins", r2.flagged.iter().filter(|&&f| f).count() as f64));
    checks.push(inv);
    let se = r2.std_errors();
    let rows = (0..bins)
        .map(|i| {
            let y = r2.bin_centers[i];
            let flag = if r2.flagged[i] { 1.0 } else { 0.0 };
            vec![y, r2.values[i], se[i], reference(y), flag]
        })
        .collect();
    Ok(Outcome { columns, reps, estimates, checks, plot: plot(&["y", "r2", "std_error", "sine_kernel_r2", "flagged"], rows) })
}

fn gap_correlation_exp(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.param_f64("tol")?;
    let target = cfg.param_f64("target_theta")?;
    let mut thetas = cfg.param_list("theta")?;
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    let (n, dist, seed) = (cfg.n, cfg.dist, cfg.seed);
    let pairs = thetas.iter().map(|&t| gap_indices(n, t)).collect::<Result<Vec<_>>>()?;
    for &(k1, k2) in &pairs {
        crate::laws::bulk_sigma(k1, n)?;
        crate::laws::bulk_sigma(k2, n)?;
    }
    let mut names = Vec::new();
    for &(k1, k2) in &pairs {
        names.push(format!("z_{k1}"));
        names.push(format!("z_{k2}"));
    }
    names.push("trace_residual".into());
    names.push("frobenius_residual".into());
    let width = names.len();
    let reps = run_replicates(cfg, width, |r| {
        let s = sample_spectrum(dist, n, stream_seed(seed, r, 0))?;
        let mut v = Vec::with_capacity(width);
        for &(k1, k2) in &pairs {
            v.push(normalize_bulk(&s.spectrum, k1, n)?);
            v.push(normalize_bulk(&s.spectrum, k2, n)?);
        }
        v.push(s.trace_residual);
        v.push(s.frobenius_residual);
        Ok(Replicate::scalars(v))
    })?;
    let mut corrs = Vec::new();
    let mut estimates = Vec::new();
    for (i, (&t, &(k1, k2))) in thetas.iter().zip(&pairs).enumerate() {
        let rows: Vec<(f64, f64)> = reps.ok().map(|r| (r.values[2 * i], r.values[2 * i + 1])).collect();
        let (a, b): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
        let c = pearson(&a, &b)?;
        corrs.push(c);
        estimates.push(est(&format!("correlation_theta_{t}_k{k1}_k{k2}"), c));
    }
    let mut checks = Vec::new();
    if let Some(i) = thetas.iter().position(|&t| (t - target).abs() < 1e-12) {
        let dev = (corrs[i] - (1.0 - target)).abs();
        estimates.push(est("deviation_at_target", dev));
        checks.push(Check::new("deviation_at_target", dev, Comparison::LessThan, tol));
    }
    if corrs.len() > 1 {
        checks.push(Check::flag("strictly_decreasing", corrs.windows(2).all(|w| w[1] < w[0])));
    }
    let (inv_est, inv) = invariant_estimates(&reps, width - 2, width - 1);
    estimates.extend(inv_est);
    checks.push(inv);
    let rows = thetas.iter().zip(&corrs).map(|(&t, &c)| vec![t, c, 1.0 - t]).collect();
    Ok(Outcome { columns: names, reps, estimates, checks, plot: plot(&["theta", "correlation", "prediction"], rows) })
}

fn require_gaussian(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.dist != EnsembleSpec::Wigner(EntryDistribution::Gaussian) {
        return Err(Error::Config(format!("{} is defined for gaussian entries, got {}", cfg.kind, cfg.dist)));
    }
    Ok(())
}

fn shell_of(cfg: &ExperimentConfig) -> Result<ShellSpec> {
    let shell = ShellSpec::new(cfg.param_f64("m2")?, cfg.param_f64("m1")?);
    shell.bounds(cfg.n)?;
    Ok(shell)
}

fn prop_shell(cfg: &ExperimentConfig) -> Result<Outcome> {
    require_gaussian(cfg)?;
    let shell = shell_of(cfg)?;
    let se_mult = cfg.param_f64("se_mult")?;
    let (lo, hi) = shell.bounds(cfg.n)?;
    let d = ShellSpec::dimension(cfg.n);
    let seed = cfg.seed;
    let columns = cols(&["sum_sq", "inside"]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let mut rng = rng_from_seed(stream_seed(seed, r, 0));
        let s: f64 = (0..d).map(|_| EntryDistribution::Gaussian.sample(&mut rng).powi(2)).sum();
        Ok(Replicate::scalars(vec![s, if (lo..=hi).contains(&s) { 1.0 } else { 0.0 }]))
    })?;
    let inside = reps.column(1);
    let hits = inside.iter().filter(|&&x| x == 1.0).count();
    let rate = ProportionEstimate::from_counts(hits, inside.len());
    let oracle = chi_shell_probability(cfg.n, shell)?;
    let se = (oracle * (1.0 - oracle) / inside.len() as f64).sqrt();
    let dev = (rate.p - oracle).abs();
    let estimates = vec![
        est_se("acceptance_rate", rate.p, rate.std_error),
        est("chi_shell_probability", oracle),
        est_se("deviation", dev, se),
    ];
    Ok(Outcome {
        columns,
        reps,
        estimates,
        checks: vec![Check::new("deviation_minus_bound", dev - se_mult * se, Comparison::AtMost, 0.0)],
        plot: plot(&["shell_lower", "shell_upper", "acceptance_rate", "chi_shell_probability", "std_error"], vec![vec![lo, hi, rate.p, oracle, se]]),
    })
}

fn prop_volume_ratio(cfg: &ExperimentConfig) -> Result<Outcome> {
    require_gaussian(cfg)?;
    let shell = shell_of(cfg)?;
    let se_mult = cfg.param_f64("se_mult")?;
    let (a, b) = (cfg.param_f64("a")?, cfg.param_f64("b")?);
    if !(a < b) {
        return Err(Error::Config(format!("interval needs a < b, got [{a}, {b}]")));
    }
    let (n, seed) = (cfg.n, cfg.seed);
    let mid = median_index(n) - 1;
    let columns = cols(&[
        "median_uniform",
        "median_gaussian",
        "in_uniform",
        "in_gaussian",
        "attempts_gaussian",
        "radius_uniform",
        "radius_gaussian",
        "trace_residual",
        "frobenius_residual",
    ]);
    let reps = run_replicates(cfg, columns.len(), |r| {
        let u = sample_shell_counted(n, shell, ShellMode::UniformVolume, stream_seed(seed, r, 0))?;
        let g = sample_shell_counted(n, shell, ShellMode::GaussianConditioned, stream_seed(seed, r, 1))?;
        let su = eigenvalues(&u.matrix)?;
        let sg = eigenvalues(&g.matrix)?;
        let (tu, fu) = su.invariant_residuals(u.matrix.trace(), u.matrix.frobenius_sq());
        let (tg, fg) = sg.invariant_residuals(g.matrix.trace(), g.matrix.frobenius_sq());
        let (mu, mg) = (su.values()[mid], sg.values()[mid]);
        let inside = |x: f64| if (a..=b).contains(&x) { 1.0 } else { 0.0 };
        Ok(Replicate::scalars(vec![
            mu,
            mg,
            inside(mu),
            inside(mg),
            g.attempts as f64,
            u.matrix.raw_sum_of_squares().sqrt(),
            g.matrix.raw_sum_of_squares().sqrt(),
            tu.max(tg),
            fu.max(fg),
        ]))
    })?;
    let count = |idx: usize| {
        let v = reps.column(idx);
        ProportionEstimate::from_counts(v.iter().filter(|&&x| x == 1.0).count(), v.len())
    };
    let (pu, pg) = (count(2), count(3));
    let se = pu.combined_se(&pg);
    let diff = (pu.p - pg.p).abs();
    let attempts: f64 = reps.column(4).iter().sum();
    let oracle = chi_shell_probability(n, shell)?;
    // eigenvalues are 1-homogeneous in the raw entries and both measures are
    // rotation invariant, so median / radius has one law under either
    let scaled = |m: usize, r: usize| -> Vec<f64> { reps.ok().map(|x| x.values[m] / x.values[r]).collect() };
    let ks = ks_two_sample(&scaled(0, 5), &scaled(1, 6))?;
    let mean_radius = |i: usize| mean_estimate(&reps.column(i));
    let (ru, rg) = (mean_radius(5)?, mean_radius(6)?);
    let (mut estimates, inv) = invariant_estimates(&reps, 7, 8);
    estimates.splice(
        0..0,
        [
            est_se("probability_uniform", pu.p, pu.std_error),
            est_se("probability_gaussian", pg.p, pg.std_error),
            est_se("difference", diff, se),
            est("acceptance_rate_gaussian", reps.rows.len() as f64 / attempts),
            est("chi_shell_probability", oracle),
            est_se("mean_radius_uniform", ru.mean, ru.std_error),
            est_se("mean_radius_gaussian", rg.mean, rg.std_error),
            est("ks_p_median_over_radius", ks.p_value),
        ],
    );
    Ok(Outcome {
        columns,
        reps,
        estimates,
        checks: vec![Check::new("difference_minus_bound", diff - se_mult * se, Comparison::AtMost, 0.0), inv],
        plot: plot(&["measure", "probability", "std_error"], vec![vec![0.0, pu.p, pu.std_error], vec![1.0, pg.p, pg.std_error]]),
    })
}

fn tw_table(cfg: &ExperimentConfig) -> Result<Outcome> {
    let grid = cfg.param_grid("grid")?;
    let values = grid.iter().map(|&x| ReferenceCdf::TracyWidom2.eval(x)).collect::<Result<Vec<_>>>()?;
    let rows = grid
        .iter()
        .zip(&values)
        .enumerate()
        .map(|(i, (&x, &f))| Row { replicate: i as u64, seed: cfg.seed, values: vec![finite(x), finite(f)], error: None })
        .collect();
    let outputs = grid.iter().zip(&values).map(|(&x, &f)| Some(Replicate::scalars(vec![x, f]))).collect();
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    Ok(Outcome {
        columns: cols(&["x", "F2"]),
        reps: Replicates { rows, outputs, failed: 0 },
        estimates: vec![est("points", grid.len() as f64)],
        checks: vec![Check::flag("monotone", monotone)],
        plot: plot(&["x", "F2"], grid.iter().zip(&values).map(|(&x, &f)| vec![x, f]).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_report_is_deterministic_across_workers() {
        let base = ExperimentConfig::new(ExperimentKind::Semicircle, 60, 8)
            .with_dist("rademacher".parse().unwrap())
            .with_seed(5);
        let a = run_experiment(base.clone().with_workers(1)).unwrap().to_json().unwrap();
        let b = run_experiment(base.with_workers(3)).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn row_count_matches_reps() {
        let cfg = ExperimentConfig::new(ExperimentKind::TraceMoment, 30, 7);
        let r = run_experiment(cfg).unwrap();
        assert_eq!(r.rows.len(), 7);
        assert_eq!(r.to_csv().lines().count(), 8);
    }

    #[test]
    fn every_kind_runs_at_small_scale() {
        let cfgs = vec![
            ExperimentConfig::new(ExperimentKind::Semicircle, 20, 3),
            ExperimentConfig::new(ExperimentKind::BulkClt, 20, 5).with_param("k", 10),
            ExperimentConfig::new(ExperimentKind::Universality, 20, 5)
                .with_dist("rademacher".parse().unwrap())
                .with_param("b", -1)
                .with_param("c", 1),
            ExperimentConfig::new(ExperimentKind::EdgeTw, 20, 5).with_param("ref", "tridiag:2"),
            ExperimentConfig::new(ExperimentKind::EdgeMeasure, 50, 3).with_param("rn_exponent", 0.55),
            ExperimentConfig::new(ExperimentKind::TraceMoment, 20, 3),
            ExperimentConfig::new(ExperimentKind::PairCorrelation, 60, 50).with_param("y_max", 2),
            ExperimentConfig::new(ExperimentKind::GapCorrelation, 100, 5).with_param("theta", "0.25,0.5"),
            ExperimentConfig::new(ExperimentKind::PropShell, 20, 50).with_param("m1", 1).with_param("m2", 1),
            ExperimentConfig::new(ExperimentKind::PropVolumeRatio, 8, 5).with_param("m1", 0.5).with_param("m2", 0.5),
            ExperimentConfig::new(ExperimentKind::TwTable, 0, 0),
        ];
        for cfg in cfgs {
            let kind = cfg.kind;
            let r = run_experiment(cfg).unwrap_or_else(|e| panic!("{kind}: {e}"));
            assert_eq!(r.metadata.kind, kind.to_string());
            assert!(!r.summary.checks.is_empty(), "{kind}");
            assert!(!r.plot.rows.is_empty(), "{kind}");
            let json = r.to_json().unwrap();
            assert_eq!(Report::from_json(&json).unwrap().to_json().unwrap(), json, "{kind}");
        }
    }

    #[test]
    fn tw_table_rows_follow_grid() {
        let cfg = ExperimentConfig::new(ExperimentKind::TwTable, 0, 0).with_param("grid", "-2:2:0.5");
        let r = run_experiment(cfg).unwrap();
        assert_eq!(r.rows.len(), 9);
        assert!(r.summary.passed);
    }

    #[test]
    fn invalid_shell_is_a_config_error() {
        let cfg = ExperimentConfig::new(ExperimentKind::PropVolumeRatio, 20, 5).with_param("m1", 3).with_param("m2", 3);
        assert!(matches!(run_experiment(cfg), Err(Error::Config(_))));
    }

    #[test]
    fn gue_sampling_deduplicates() {
        let s = sample_spectrum(EnsembleSpec::Gue, 7, 3).unwrap();
        assert_eq!(s.spectrum.dim(), 7);
        assert!(s.trace_residual < 1e-12 && s.frobenius_residual < 1e-12);
    }
}
