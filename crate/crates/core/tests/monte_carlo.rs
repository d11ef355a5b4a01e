//! Monte Carlo checks of sampler and estimator contracts at desk scale.

use rmtlab::ensembles::{sample_goe, sample_gue_embedded, sample_shell_counted, EnsembleSpec, ShellMode, ShellSpec};
use rmtlab::harness::sample_spectrum;
use rmtlab::laws::{bulk_sigma, classical_location, edge_center_scale, expected_count, ReferenceCdf};
use rmtlab::oracles::{chi_shell_probability, smalln_event_probability, EigenEvent};
use rmtlab::seed::{replicate_seed, stream_seed};
use rmtlab::spectra::eigenvalues;
use rmtlab::stats::{counting_statistic, interval_probability, ks_one_sample, ks_one_sample_with, ks_two_sample, mean_estimate};
use rmtlab::Error;

fn spectra(spec: EnsembleSpec, n: usize, reps: u64, seed: u64) -> Vec<Vec<f64>> {
    (0..reps)
        .map(|r| sample_spectrum(spec, n, replicate_seed(seed, r)).unwrap().spectrum.into_values())
        .collect()
}

#[test]
fn gue_deduplicated_spectra_follow_semicircle() {
    let pooled: Vec<f64> = spectra(EnsembleSpec::Gue, 200, 100, 1).concat();
    assert_eq!(pooled.len(), 200 * 100);
    let ks = ks_one_sample(&pooled, ReferenceCdf::Semicircle).unwrap();
    assert!(ks.d < 0.05, "{}", ks.d);
}

#[test]
fn gue_embedding_spectrum_pairs_up() {
    let m = sample_gue_embedded(3, 4).unwrap();
    let s = eigenvalues(&m).unwrap();
    assert_eq!(s.dim(), 6);
    for pair in s.values().chunks(2) {
        assert!((pair[0] - pair[1]).abs() < 1e-10, "{pair:?}");
    }
}

#[test]
fn tridiagonal_beta1_matches_dense_goe() {
    let tri = spectra(EnsembleSpec::Tridiagonal { beta: 1 }, 300, 200, 2).concat();
    let dense = spectra(EnsembleSpec::Goe, 300, 200, 3).concat();
    let ks = ks_two_sample(&tri, &dense).unwrap();
    assert!(ks.p_value > 0.01, "p = {}", ks.p_value);
}

#[test]
fn tridiagonal_beta2_matches_dense_gue_at_the_edge() {
    // the statistic the edge and bulk experiments consume
    let tri: Vec<f64> = spectra(EnsembleSpec::Tridiagonal { beta: 2 }, 100, 1000, 4).iter().map(|s| s[99]).collect();
    let dense: Vec<f64> = spectra(EnsembleSpec::Gue, 100, 1000, 5).iter().map(|s| s[99]).collect();
    let ks = ks_two_sample(&tri, &dense).unwrap();
    assert!(ks.p_value > 0.01, "p = {}", ks.p_value);
    let tri: Vec<f64> = spectra(EnsembleSpec::Tridiagonal { beta: 2 }, 100, 1000, 6).iter().map(|s| s[49]).collect();
    let dense: Vec<f64> = spectra(EnsembleSpec::Gue, 100, 1000, 7).iter().map(|s| s[49]).collect();
    let ks = ks_two_sample(&tri, &dense).unwrap();
    assert!(ks.p_value > 0.01, "p = {}", ks.p_value);
}

#[test]
fn center_eigenvalue_spread_matches_bulk_sigma() {
    // GUE n = 1000 via the tridiagonal model, which has the same eigenvalue law
    let (n, k) = (1000, 500);
    let x: Vec<f64> = spectra(EnsembleSpec::Tridiagonal { beta: 2 }, n, 2000, 8).iter().map(|s| s[k - 1]).collect();
    let m = mean_estimate(&x).unwrap();
    let sd = m.std_error * (m.count as f64).sqrt();
    let sigma = bulk_sigma(k, n).unwrap();
    assert!((sd / sigma - 1.0).abs() < 0.15, "sd {sd} vs sigma {sigma}: ratio {}", sd / sigma);
}

#[test]
fn near_edge_eigenvalue_is_gaussian_after_edge_scaling() {
    let (n, k) = (1000, 30);
    let (center, scale) = edge_center_scale(k, n).unwrap();
    let z: Vec<f64> = spectra(EnsembleSpec::Tridiagonal { beta: 2 }, n, 2000, 9)
        .iter()
        .map(|s| (s[n - k - 1] - center) / scale)
        .collect();
    let ks = ks_one_sample(&z, ReferenceCdf::StdNormal).unwrap();
    assert!(ks.d < 0.08, "{}", ks.d);
}

#[test]
fn independent_goe_center_samples_agree() {
    let n = 50;
    let k = n / 2;
    let draw = |stream: u64| -> Vec<f64> {
        (0..10_000)
            .map(|r| eigenvalues(&sample_goe(n, stream_seed(10, r, stream)).unwrap()).unwrap().values()[k - 1])
            .collect()
    };
    let ks = ks_two_sample(&draw(0), &draw(1)).unwrap();
    assert!(ks.p_value > 0.01, "p = {}", ks.p_value);
}

#[test]
fn mean_count_matches_expected_count() {
    let n = 1000;
    let counts: Vec<f64> = (0..500)
        .map(|r| {
            let s = sample_spectrum(EnsembleSpec::Goe, n, replicate_seed(11, r)).unwrap().spectrum;
            counting_statistic(&s, -0.1, 0.1).unwrap() as f64
        })
        .collect();
    let mean = mean_estimate(&counts).unwrap().mean;
    let expected = expected_count(-0.1, 0.1, n).unwrap();
    assert!((mean / expected - 1.0).abs() < 0.02, "{mean} vs {expected}");
}

#[test]
fn median_interval_probability_is_universal() {
    let n = 500;
    let k = n / 2;
    let rad: Vec<f64> = spectra("rademacher".parse().unwrap(), n, 300, 12).iter().map(|s| s[k - 1]).collect();
    let goe: Vec<f64> = spectra(EnsembleSpec::Goe, n, 300, 13).iter().map(|s| s[k - 1]).collect();
    let a = interval_probability(&rad, -1.0, 1.0, n).unwrap();
    let b = interval_probability(&goe, -1.0, 1.0, n).unwrap();
    assert!((a.p - b.p).abs() <= 3.0 * a.combined_se(&b), "{} vs {}", a.p, b.p);
}

#[test]
fn two_by_two_goe_max_matches_quadrature() {
    let event = EigenEvent { k: 2, lower: 0.0, upper: 0.5 };
    let p = smalln_event_probability(2, 1, event).unwrap();
    let reps = 1_000_000u64;
    let hits = (0..reps)
        .filter(|&r| {
            let l = eigenvalues(&sample_goe(2, replicate_seed(14, r)).unwrap()).unwrap().values()[1];
            (0.0..=0.5).contains(&l)
        })
        .count();
    let est = hits as f64 / reps as f64;
    let se = (p * (1.0 - p) / reps as f64).sqrt();
    assert!((est - p).abs() < 3.0 * se, "{est} vs {p} (se {se})");
}

#[test]
fn small_n_oracle_agrees_with_sampling_for_three_by_three() {
    let event = EigenEvent { k: 2, lower: -0.1, upper: 0.3 };
    let p = smalln_event_probability(3, 1, event).unwrap();
    let reps = 200_000u64;
    let hits = (0..reps)
        .filter(|&r| {
            let l = eigenvalues(&sample_goe(3, replicate_seed(15, r)).unwrap()).unwrap().values()[1];
            (-0.1..=0.3).contains(&l)
        })
        .count();
    let est = hits as f64 / reps as f64;
    let se = (p * (1.0 - p) / reps as f64).sqrt();
    assert!((est - p).abs() < 3.0 * se, "{est} vs {p} (se {se})");
}

#[test]
fn shell_with_m3_is_invalid_at_n20() {
    // n(n+1)/8 - 3n = -7.5 < 0
    let shell = ShellSpec::symmetric(3.0);
    assert!(matches!(shell.bounds(20), Err(Error::Config(_))));
    assert!(sample_shell_counted(20, shell, ShellMode::GaussianConditioned, 1).is_err());
    assert!(chi_shell_probability(20, shell).is_err());
}

#[test]
fn gaussian_conditioned_acceptance_matches_chi_oracle() {
    for (n, m) in [(20, 0.25), (30, 0.5)] {
        let shell = ShellSpec::symmetric(m);
        let p = chi_shell_probability(n, shell).unwrap();
        let (mut draws, mut attempts) = (0u64, 0u64);
        let mut r = 0;
        while attempts < 100_000 {
            attempts += sample_shell_counted(n, shell, ShellMode::GaussianConditioned, replicate_seed(16, r)).unwrap().attempts;
            draws += 1;
            r += 1;
        }
        let rate = draws as f64 / attempts as f64;
        let se = (p * (1.0 - p) / attempts as f64).sqrt();
        assert!((rate - p).abs() <= 3.0 * se, "n={n} M={m}: {rate} vs {p} (se {se})");
    }
}

#[test]
fn median_over_radius_has_one_law_under_both_shell_measures() {
    let (n, reps) = (20, 4000u64);
    let shell = ShellSpec::symmetric(1.0);
    let draw = |mode: ShellMode, stream: u64| -> Vec<f64> {
        (0..reps)
            .map(|r| {
                let m = sample_shell_counted(n, shell, mode, stream_seed(17, r, stream)).unwrap().matrix;
                eigenvalues(&m).unwrap().values()[n / 2 - 1] / m.raw_sum_of_squares().sqrt()
            })
            .collect()
    };
    let ks = ks_two_sample(&draw(ShellMode::UniformVolume, 0), &draw(ShellMode::GaussianConditioned, 1)).unwrap();
    assert!(ks.p_value > 0.01, "p = {}", ks.p_value);
}

#[test]
fn classical_locations_track_sample_medians() {
    let n = 200;
    let draws = spectra("uniform".parse().unwrap(), n, 200, 18);
    for k in [20, 100, 180] {
        let mut x: Vec<f64> = draws.iter().map(|s| s[k - 1]).collect();
        x.sort_by(f64::total_cmp);
        let median = x[x.len() / 2];
        // classical locations sit half an index above the sample median, 1/(2 n rho)
        assert!((median - classical_location(k, n).unwrap()).abs() < 1e-2, "k={k}");
    }
    // sanity on the generic KS entry point
    let pooled = draws.concat();
    let ks = ks_one_sample_with(&pooled, |t| Ok(rmtlab::laws::semicircle_cdf(t))).unwrap();
    assert!(ks.d < 0.01);
}
