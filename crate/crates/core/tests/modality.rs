use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unimodal::modality::{count_modes_derivative, count_modes_profile, DEFAULT_SCAN_GRID};
use unimodal::thresholds::random_atomic_measure;
use unimodal::{critical_time, is_unimodal, level_crossings, ConvolvedDensity, DensityProfile, ProbabilityMeasure, ProcessKind};

const CLASSICAL: [ProcessKind; 3] = [ProcessKind::ClassicalGaussian, ProcessKind::Cauchy, ProcessKind::LevyHalf];

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn classical_fixtures(seed: u64, count: usize) -> Vec<(ProbabilityMeasure, ProcessKind, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mu = random_atomic_measure(&mut rng);
            let kind = CLASSICAL[rng.gen_range(0..3)];
            let t = rng.gen_range((0.05f64).ln()..(1.0f64).ln()).exp();
            (mu, kind, t)
        })
        .collect()
}

/// Dense tabulation of a classical density over its default scan window.
fn dense_profile(cd: &ConvolvedDensity<'_>, n: usize) -> DensityProfile {
    DensityProfile::sample(cd, cd.default_window(), n).unwrap()
}

#[test]
fn derivative_and_profile_scans_agree() {
    let mut multimodal = 0;
    for (mu, kind, t) in classical_fixtures(21, 30) {
        let cd = ConvolvedDensity::new(&mu, kind, t).unwrap();
        let by_sign = count_modes_derivative(&cd, None, DEFAULT_SCAN_GRID).unwrap();
        let by_table = count_modes_profile(&dense_profile(&cd, 200_001)).unwrap();
        assert_eq!(
            by_sign.mode_count, by_table.mode_count,
            "{kind:?} t = {t} {mu:?}: {:?} vs {:?}",
            by_sign.mode_locations, by_table.mode_locations
        );
        if by_sign.mode_count > 1 {
            multimodal += 1;
        }
    }
    // the fixture set must exercise both verdicts
    assert!(multimodal > 0 && multimodal < 30, "{multimodal} multimodal fixtures");
}

/// Ten levels: nine spread over (0, peak) and one halfway between the
/// deepest valley and the lower of its neighbouring peaks.
fn sampled_levels(profile: &DensityProfile, modes: &[f64]) -> Vec<f64> {
    let value = |x: f64| {
        let i = profile.xs.partition_point(|v| *v < x).min(profile.len() - 1);
        profile.ps[i]
    };
    let peak = profile.peak().unwrap().1;
    let mut levels: Vec<f64> = (1..=9).map(|k| peak * k as f64 / 10.0).collect();
    if modes.len() >= 2 {
        let (m0, m1) = (modes[0], modes[1]);
        let lower = value(m0).min(value(m1));
        let valley = profile
            .xs
            .iter()
            .zip(&profile.ps)
            .filter(|(x, _)| **x > m0 && **x < m1)
            .map(|(_, p)| *p)
            .fold(lower, f64::min);
        levels.push(0.5 * (valley + lower));
    } else {
        levels.push(0.95 * peak);
    }
    levels
}

#[test]
fn level_crossings_follow_the_verdict() {
    let mut fixtures: Vec<(ProbabilityMeasure, ProcessKind, f64)> = classical_fixtures(22, 12);
    let bern = ProbabilityMeasure::bernoulli(1.0);
    for &t in &[0.5, 2.0, 8.0] {
        fixtures.push((bern.clone(), ProcessKind::FreeSemicircle, t));
    }
    for (mu, kind, t) in fixtures {
        let report = is_unimodal(&mu, kind, t).unwrap();
        let profile = if kind.is_free() {
            unimodal::free_density_profile(&mu, t, 4096).unwrap()
        } else {
            dense_profile(&ConvolvedDensity::new(&mu, kind, t).unwrap(), 40_001)
        };
        let counts: Vec<usize> = sampled_levels(&profile, &report.mode_locations)
            .into_iter()
            .map(|a| level_crossings(&mu, kind, t, a).unwrap())
            .collect();
        if report.unimodal {
            assert!(counts.iter().all(|&c| c <= 2), "{kind:?} t = {t}: {counts:?}");
        }
        if report.mode_count >= 2 {
            assert!(counts.iter().any(|&c| c >= 3), "{kind:?} t = {t}: {counts:?}");
        }
    }
}

#[test]
fn symmetric_unimodal_laws_stay_unimodal() {
    let laws = [
        ProbabilityMeasure::uniform(-1.0, 1.0).unwrap(),
        ProbabilityMeasure::triangle(-1.0, 0.0, 1.0).unwrap(),
    ];
    for mu in &laws {
        for t in log_grid(0.01, 100.0, 20) {
            let r = is_unimodal(mu, ProcessKind::FreeSemicircle, t).unwrap();
            assert!(r.unimodal, "{mu:?} t = {t}: {r:?}");
        }
    }
}

/// A centre-heavy three-atom law is symmetric but not unimodal, so nothing
/// forces unimodality at small t: the atoms stay separated until the gaps
/// of U_t close, and the law becomes unimodal only later.
#[test]
fn three_atom_law_is_unimodal_only_for_large_t() {
    let mu = ProbabilityMeasure::atomic(vec![-1.0, 0.0, 1.0], vec![0.2, 0.6, 0.2]).unwrap();
    let verdicts: Vec<(f64, bool, usize)> = log_grid(0.01, 100.0, 20)
        .into_iter()
        .map(|t| {
            let r = is_unimodal(&mu, ProcessKind::FreeSemicircle, t).unwrap();
            (t, r.unimodal, r.support_components)
        })
        .collect();
    assert_eq!(verdicts[0].2, 3);
    assert!(!verdicts[0].1);
    let first_true = verdicts.iter().position(|v| v.1).expect("unimodal at t = 100");
    assert!(verdicts[first_true..].iter().all(|v| v.1), "{verdicts:?}");

    // gaps close when X(u) = 0.2/(1+u)² + 0.6/u² + 0.2/(1−u)² at its minimum
    // over (0, 1) equals 1/t; the oracle is a golden-section minimum
    let x = |u: f64| 0.2 / (1.0 + u).powi(2) + 0.6 / (u * u) + 0.2 / (1.0 - u).powi(2);
    let (mut a, mut b) = (1e-3, 1.0 - 1e-3);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-12 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if x(c) < x(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let t_join = 1.0 / x(0.5 * (a + b));
    for v in &verdicts {
        let comps = if v.0 < t_join { 3 } else { 1 };
        assert_eq!(v.2, comps, "t = {}", v.0);
    }
}

#[test]
fn doubling_the_grid_keeps_mode_counts() {
    let golden = [
        (ProbabilityMeasure::bernoulli(1.0), ProcessKind::ClassicalGaussian, 0.5),
        (ProbabilityMeasure::bernoulli(1.0), ProcessKind::ClassicalGaussian, 2.0),
        (ProbabilityMeasure::bernoulli(1.0), ProcessKind::Cauchy, 1.0),
        (ProbabilityMeasure::bernoulli(1.0), ProcessKind::Cauchy, 3.0),
        (ProbabilityMeasure::bernoulli(1.0), ProcessKind::LevyHalf, 0.5),
        (ProbabilityMeasure::bernoulli(1.0), ProcessKind::LevyHalf, 2.0),
        (
            ProbabilityMeasure::atomic(vec![0.0, 0.1, 3.0], vec![0.01, 0.9, 0.09]).unwrap(),
            ProcessKind::ClassicalGaussian,
            0.3,
        ),
        (ProbabilityMeasure::triangle(-1.0, 0.3, 1.0).unwrap(), ProcessKind::Cauchy, 0.2),
    ];
    for (mu, kind, t) in &golden {
        let cd = ConvolvedDensity::new(mu, *kind, *t).unwrap();
        let mut counts = Vec::new();
        for grid in [1024, 2048, 4096, 8192] {
            counts.push(count_modes_derivative(&cd, None, grid).unwrap().mode_count);
        }
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "{kind:?} t = {t}: {counts:?}");
    }
    let bern = ProbabilityMeasure::bernoulli(1.0);
    for &t in &[0.25, 1.0, 3.0, 4.0, 7.0] {
        let counts: Vec<usize> = [1024, 2048, 4096, 8192]
            .into_iter()
            .map(|n| {
                let p = unimodal::free_density_profile(&bern, t, n).unwrap();
                count_modes_profile(&p).unwrap().mode_count
            })
            .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "free t = {t}: {counts:?}");
    }
}

#[test]
fn bernoulli_sweeps_match_known_critical_times() {
    let bern = ProbabilityMeasure::bernoulli(1.0);
    let cases: [(ProcessKind, Vec<f64>, Vec<bool>); 3] = [
        (
            ProcessKind::FreeSemicircle,
            vec![0.25, 1.0, 2.0, 3.0, 4.0, 7.0],
            vec![false, false, false, false, true, true],
        ),
        (
            ProcessKind::ClassicalGaussian,
            vec![0.25, 0.5, 0.75, 1.0, 2.0, 4.0],
            vec![false, false, false, true, true, true],
        ),
        (
            ProcessKind::Cauchy,
            vec![0.25, 0.5, 1.0, 2f64.sqrt(), 3f64.sqrt(), 3.0],
            vec![false, false, false, false, true, true],
        ),
    ];
    for (kind, ts, want) in cases {
        let got: Vec<bool> = ts.iter().map(|&t| is_unimodal(&bern, kind, t).unwrap().unimodal).collect();
        assert_eq!(got, want, "{kind:?}");
    }
}

#[test]
fn critical_times_scale_with_the_dilation() {
    // t*(bernoulli(c)) = c² t*(bernoulli(1)) for the Gaussian and free
    // processes, and c t* for the Cauchy process
    for (kind, power) in [
        (ProcessKind::ClassicalGaussian, 2),
        (ProcessKind::Cauchy, 1),
        (ProcessKind::FreeSemicircle, 2),
    ] {
        let base = critical_time(&ProbabilityMeasure::bernoulli(1.0), kind, (0.1, 16.0), 1e-4)
            .unwrap()
            .t_star;
        for c in [0.5f64, 2.0] {
            let scaled = critical_time(&ProbabilityMeasure::bernoulli(c), kind, (0.01, 80.0), 1e-4)
                .unwrap()
                .t_star;
            let want = c.powi(power) * base;
            assert!((scaled - want).abs() < 1e-2 * want, "{kind:?} c = {c}: {scaled} vs {want}");
        }
    }
}
