use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unimodal::thresholds::random_atomic_measure;
use unimodal::{kernel, ConvolvedDensity, ProbabilityMeasure, ProcessKind};

const CLASSICAL: [ProcessKind; 3] = [ProcessKind::ClassicalGaussian, ProcessKind::Cauchy, ProcessKind::LevyHalf];

fn eval(cd: &ConvolvedDensity<'_>, x: f64, order: u8) -> f64 {
    if order == 0 {
        cd.density(x).unwrap()
    } else {
        cd.density_derivative(x, order).unwrap()
    }
}

fn random_fixtures(seed: u64, count: usize) -> Vec<(ProbabilityMeasure, ProcessKind, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mu = match i % 3 {
                0 => random_atomic_measure(&mut rng),
                1 => {
                    let l = rng.gen_range(-2.0..0.0);
                    ProbabilityMeasure::uniform(l, l + rng.gen_range(0.2..2.0)).unwrap()
                }
                _ => {
                    let l = rng.gen_range(-1.0..0.0);
                    let r = l + rng.gen_range(0.5..2.0);
                    ProbabilityMeasure::triangle(l, l + (r - l) * rng.gen::<f64>(), r).unwrap()
                }
            };
            let kind = CLASSICAL[rng.gen_range(0..3)];
            let t = (rng.gen_range((0.2f64).ln()..(5.0f64).ln())).exp();
            (mu, kind, t)
        })
        .collect()
}

#[test]
fn densities_integrate_to_one() {
    let mut worst = 0.0f64;
    for (mu, kind, t) in random_fixtures(11, 30) {
        let cd = ConvolvedDensity::new(&mu, kind, t).unwrap();
        let mass = cd.window_mass().unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "{kind:?} t = {t} {mu:?}: mass {mass}");
        worst = worst.max((mass - 1.0).abs());
    }
    println!("worst normalization error {worst:.3e}");
}

#[test]
fn derivatives_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (mu, kind, t) in random_fixtures(13, 30) {
        let cd = ConvolvedDensity::new(&mu, kind, t).unwrap();
        let (lo, hi) = mu.hull();
        let spread = 3.0 * kind.scale(t);
        let (a, b) = match kind {
            ProcessKind::LevyHalf => (lo, hi + 4.0 * t * t),
            _ => (lo - spread, hi + spread),
        };
        for _ in 0..50 {
            let x = rng.gen_range(a..b);
            let h = 1e-5 * x.abs().max(1.0);
            for order in [1u8, 2] {
                // central differences at h and h/2, Richardson-combined so the
                // oracle's own O(h²) error stays below the tolerance near the
                // steep Lévy onset
                let central = |h: f64| (eval(&cd, x + h, order - 1) - eval(&cd, x - h, order - 1)) / (2.0 * h);
                let fd = (4.0 * central(0.5 * h) - central(h)) / 3.0;
                let exact = eval(&cd, x, order);
                assert!(
                    (fd - exact).abs() < 1e-5,
                    "{kind:?} t = {t} x = {x} order {order}: {exact} vs {fd}"
                );
            }
        }
    }
}

#[test]
fn symmetric_inputs_give_symmetric_densities() {
    let fixtures = [
        ProbabilityMeasure::bernoulli(1.0),
        ProbabilityMeasure::bernoulli(0.3),
        ProbabilityMeasure::uniform(-1.0, 1.0).unwrap(),
        ProbabilityMeasure::uniform(-2.5, 2.5).unwrap(),
    ];
    for mu in &fixtures {
        for kind in [ProcessKind::ClassicalGaussian, ProcessKind::Cauchy] {
            for &t in &[0.1, 1.0, 3.0] {
                let cd = ConvolvedDensity::new(mu, kind, t).unwrap();
                for i in 0..=40 {
                    let x = 0.1 * i as f64;
                    let (p, q) = (cd.density(x).unwrap(), cd.density(-x).unwrap());
                    assert!((p - q).abs() < 1e-12, "{kind:?} t = {t} x = {x}: {p} vs {q}");
                }
            }
        }
    }
}

#[test]
fn point_mass_reproduces_the_kernel() {
    let mu = ProbabilityMeasure::point_mass(0.0);
    for kind in CLASSICAL {
        let cd = ConvolvedDensity::new(&mu, kind, 0.7).unwrap();
        for i in -20..=20 {
            let x = 0.25 * i as f64;
            for order in 0..=2u8 {
                let want = kernel(kind, 0.7, x, order).unwrap();
                assert_eq!(eval(&cd, x, order), want);
            }
        }
    }
}

#[test]
fn levy_density_vanishes_left_of_the_support() {
    let mu = ProbabilityMeasure::bernoulli(1.0);
    let cd = ConvolvedDensity::new(&mu, ProcessKind::LevyHalf, 1.0).unwrap();
    for i in 0..50 {
        assert_eq!(cd.density(-1.0 - 0.1 * i as f64).unwrap(), 0.0);
    }
    assert!(cd.density(0.0).unwrap() > 0.0);
}

#[test]
fn uniform_gaussian_matches_error_function_oracle() {
    // (Φ((x+1)/√t) − Φ((x−1)/√t))/2, with Φ from a fine Simpson rule
    let simpson_phi = |z: f64| {
        let n = 20_000;
        let a = -12.0f64;
        let h = (z - a) / n as f64;
        let f = |s: f64| (-s * s / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = f(a) + f(z);
        for i in 1..n {
            acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let mu = ProbabilityMeasure::uniform(-1.0, 1.0).unwrap();
    let t = 0.5f64;
    let cd = ConvolvedDensity::new(&mu, ProcessKind::ClassicalGaussian, t).unwrap();
    for &x in &[-2.0, -1.0, -0.3, 0.0, 0.8, 1.7] {
        let s = t.sqrt();
        let want = 0.5 * (simpson_phi((x + 1.0) / s) - simpson_phi((x - 1.0) / s));
        let got = cd.density(x).unwrap();
        assert!((got - want).abs() < 1e-10, "x = {x}: {got} vs {want}");
    }
}
