use serde_json::{json, Map, Value};
use unimodal::counterexamples::{strong_unimodality_witness_search, witness_for_spec, Construction, FreeWeight};
use unimodal::modality::{count_modes_derivative, count_modes_profile, ModalityReport};
use unimodal::thresholds::{bound_for, verify_at_times, verify_threshold_with_eps};
use unimodal::{
    parse_measure, BianeState, ConvolvedDensity, CounterexampleSpec, DensityProfile, MeasureDocument, ProbabilityMeasure,
    ProcessKind, Theorem,
};

use crate::inline::{numbers, pair, parse_inline};
use crate::output::{emit, float, to_value, Csv, Report};
use crate::{
    CliError, CounterexampleArgs, CriticalTimeArgs, DensityArgs, MeasureSource, ModesArgs, SweepArgs, ThresholdArgs,
    Weight, WitnessSearchArgs,
};

const COUNTEREXAMPLE_TIMES: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

fn load(source: &MeasureSource) -> Result<ProbabilityMeasure, CliError> {
    match (&source.measure, &source.measure_file) {
        (Some(inline), _) => parse_inline(inline),
        (None, Some(path)) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
            Ok(parse_measure(&bytes)?)
        }
        (None, None) => Err(CliError::usage("one of --measure or --measure-file is required")),
    }
}

fn measure_value(mu: &ProbabilityMeasure) -> Value {
    to_value(MeasureDocument::from(mu))
}

fn check_time(t: f64) -> Result<(), CliError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!("--t must be a positive number, got {t}")))
    }
}

/// Positive, strictly increasing times.
fn time_list(s: &str) -> Result<Vec<f64>, CliError> {
    let ts = numbers(s)?;
    for &t in &ts {
        check_time(t)?;
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::usage(format!("--t-list `{s}` must be strictly increasing")));
    }
    Ok(ts)
}

fn classical_window(window: &Option<String>) -> Result<Option<(f64, f64)>, CliError> {
    window.as_deref().map(|w| pair(w, "--window")).transpose()
}

fn no_window_for_free(window: &Option<String>) -> Result<(), CliError> {
    if window.is_some() {
        return Err(CliError::usage(
            "--window applies to classical processes; free profiles cover the whole support",
        ));
    }
    Ok(())
}

/// Modality verdict with an explicit grid: derivative scan for classical
/// kernels, ψ-profile scan for the free process.
fn modality(
    mu: &ProbabilityMeasure,
    process: ProcessKind,
    t: f64,
    grid: usize,
    window: Option<(f64, f64)>,
) -> Result<ModalityReport, CliError> {
    if process.is_free() {
        let profile = BianeState::new(mu, t)?.profile(grid)?;
        Ok(count_modes_profile(&profile)?)
    } else {
        let cd = ConvolvedDensity::new(mu, process, t)?;
        Ok(count_modes_derivative(&cd, window, grid)?)
    }
}

pub fn density(args: DensityArgs) -> Result<(), CliError> {
    let mu = load(&args.source)?;
    let process: ProcessKind = args.process.into();
    check_time(args.t)?;
    let profile = if process.is_free() {
        no_window_for_free(&args.window)?;
        unimodal::free_density_profile(&mu, args.t, args.grid)?
    } else {
        let cd = ConvolvedDensity::new(&mu, process, args.t)?;
        let window = classical_window(&args.window)?.unwrap_or_else(|| cd.default_window());
        DensityProfile::sample(&cd, window, args.grid)?
    };
    let mut csv = Csv::new(
        &[
            ("command", "density".into()),
            ("process", process.name().into()),
            ("t", float(args.t)),
            ("measure", mu.to_json()),
            ("points", profile.len().to_string()),
        ],
        &["x", "p"],
    );
    for (x, p) in profile.xs.iter().zip(&profile.ps) {
        csv.row(&[float(*x), float(*p)]);
    }
    emit(args.out.as_deref(), &csv.into_string())
}

pub fn modes(args: ModesArgs) -> Result<(), CliError> {
    let mu = load(&args.source)?;
    let process: ProcessKind = args.process.into();
    check_time(args.t)?;
    let window = if process.is_free() {
        no_window_for_free(&args.window)?;
        None
    } else {
        classical_window(&args.window)?
    };
    let report = modality(&mu, process, args.t, args.grid, window)?;
    let mut inputs = Map::new();
    inputs.insert("measure".into(), measure_value(&mu));
    inputs.insert("process".into(), json!(process.name()));
    inputs.insert("t".into(), json!(args.t));
    inputs.insert("grid".into(), json!(args.grid));
    inputs.insert("window".into(), json!(window));
    let out = Report::new("modes", inputs, report);
    emit(args.out.as_deref(), &out.render())
}

pub fn critical_time(args: CriticalTimeArgs) -> Result<(), CliError> {
    let mu = load(&args.source)?;
    let process: ProcessKind = args.process.into();
    let bracket = pair(&args.bracket, "--bracket")?;
    let result = unimodal::critical_time(&mu, process, bracket, args.tol)?;
    let mut inputs = Map::new();
    inputs.insert("measure".into(), measure_value(&mu));
    inputs.insert("process".into(), json!(process.name()));
    inputs.insert("bracket".into(), json!(bracket));
    inputs.insert("tol".into(), json!(args.tol));
    let out = Report::new("critical-time", inputs, &result)
        .note("scan_points", result.scan_grid.len())
        .note("verdict", if process.is_free() { "profile_scan" } else { "derivative_scan" });
    emit(args.out.as_deref(), &out.render())
}

pub fn threshold(args: ThresholdArgs) -> Result<(), CliError> {
    let mu = load(&args.source)?;
    let theorem = Theorem::from_name(&args.theorem).ok_or_else(|| {
        CliError::usage(format!(
            "unknown theorem `{}`; expected free_4D2, classical_gaussian_tail, cauchy_third_moment or levy_diameter",
            args.theorem
        ))
    })?;
    if let Some(p) = args.process {
        let p: ProcessKind = p.into();
        if p != theorem.process() {
            return Err(CliError::usage(format!(
                "theorem {} concerns the {} process, not {}",
                theorem.name(),
                theorem.process().name(),
                p.name()
            )));
        }
    }
    let report = match &args.t_list {
        Some(list) => {
            let times = time_list(list)?;
            let (bound, inputs) = bound_for(&mu, theorem, args.eps)?;
            verify_at_times(&mu, theorem, bound, inputs, &times)?
        }
        None => verify_threshold_with_eps(&mu, theorem, args.n, args.eps)?,
    };
    let mut inputs = Map::new();
    inputs.insert("measure".into(), measure_value(&mu));
    inputs.insert("theorem".into(), json!(theorem.name()));
    inputs.insert("process".into(), json!(theorem.process().name()));
    inputs.insert("eps".into(), json!(args.eps));
    match &args.t_list {
        Some(_) => inputs.insert("t_list".into(), json!(report.verified_at.iter().map(|v| v.0).collect::<Vec<_>>())),
        None => inputs.insert("n".into(), json!(args.n)),
    };
    let out = Report::new("threshold", inputs, &report);
    emit(args.out.as_deref(), &out.render())
}

fn counterexample_spec(args: &CounterexampleArgs) -> Result<CounterexampleSpec, CliError> {
    let mut spec = CounterexampleSpec::default_for(args.process.into());
    if let Some(a) = args.a {
        spec.a = a;
    }
    if let Some(n) = args.n {
        spec.n_atoms = n;
    }
    let misplaced = |flag: &str| {
        Err(CliError::usage(format!(
            "{flag} does not apply to the {} construction",
            spec.process().name()
        )))
    };
    spec.construction = match spec.construction {
        Construction::Free { f } => {
            if args.delta.is_some() {
                return misplaced("--delta");
            }
            if args.r.is_some() {
                return misplaced("--r");
            }
            let f = match args.f {
                Some(Weight::One) => FreeWeight::One,
                Some(Weight::ExpSquare) => FreeWeight::ExpSquare,
                None => f,
            };
            Construction::Free { f }
        }
        Construction::Classical { delta } => {
            if args.r.is_some() {
                return misplaced("--r");
            }
            if args.f.is_some() {
                return misplaced("--f");
            }
            Construction::Classical {
                delta: args.delta.unwrap_or(delta),
            }
        }
        Construction::Cauchy { r } => {
            if args.delta.is_some() {
                return misplaced("--delta");
            }
            if args.f.is_some() {
                return misplaced("--f");
            }
            Construction::Cauchy { r: args.r.unwrap_or(r) }
        }
        Construction::Levy => {
            if args.delta.is_some() {
                return misplaced("--delta");
            }
            if args.r.is_some() {
                return misplaced("--r");
            }
            if args.f.is_some() {
                return misplaced("--f");
            }
            Construction::Levy
        }
    };
    Ok(spec)
}

pub fn counterexample(args: CounterexampleArgs) -> Result<(), CliError> {
    let spec = counterexample_spec(&args)?;
    let times = match (args.t, &args.t_list) {
        (Some(t), _) => {
            check_time(t)?;
            vec![t]
        }
        (None, Some(list)) => time_list(list)?,
        (None, None) => COUNTEREXAMPLE_TIMES.to_vec(),
    };
    let mu: ProbabilityMeasure = spec.build()?.into();
    if let Some(path) = &args.emit_measure {
        let mut doc = mu.to_json();
        doc.push('\n');
        std::fs::write(path, doc).map_err(|e| CliError::io(path.display().to_string(), e))?;
    }
    let mut witnesses = Vec::with_capacity(times.len());
    let mut missing = None;
    for &t in &times {
        match witness_for_spec(&spec, t) {
            Ok(w) => witnesses.push(json!({ "t": t, "witness": w })),
            Err(unimodal::Error::NoWitness { t }) => {
                missing.get_or_insert(t);
                witnesses.push(json!({ "t": t, "witness": null }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut inputs = Map::new();
    inputs.insert("process".into(), json!(spec.process().name()));
    inputs.insert("spec".into(), to_value(spec));
    inputs.insert("t_list".into(), json!(times));
    let result = json!({ "measure": measure_value(&mu), "witnesses": witnesses });
    let out = Report::new("counterexample", inputs, result).note(
        "scope",
        "witnesses hold only at the listed times; every finite truncation is unimodal for large t",
    );
    emit(args.out.as_deref(), &out.render())?;
    match missing {
        Some(t) => Err(unimodal::Error::NoWitness { t }.into()),
        None => Ok(()),
    }
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let mu = load(&args.source)?;
    let process: ProcessKind = args.process.into();
    let times = time_list(&args.t_list)?;
    let mut csv = Csv::new(
        &[
            ("command", "sweep".into()),
            ("process", process.name().into()),
            ("measure", mu.to_json()),
            ("grid", args.grid.to_string()),
        ],
        &["t", "mode_count", "support_components", "unimodal", "mode_locations"],
    );
    for &t in &times {
        let r = modality(&mu, process, t, args.grid, None)?;
        let locations: Vec<String> = r.mode_locations.iter().map(|x| float(*x)).collect();
        csv.row(&[
            float(t),
            r.mode_count.to_string(),
            r.support_components.to_string(),
            r.unimodal.to_string(),
            locations.join(";"),
        ]);
    }
    emit(args.out.as_deref(), &csv.into_string())
}

pub fn witness_search(args: WitnessSearchArgs) -> Result<(), CliError> {
    let scales = numbers(&args.scales)?;
    if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(CliError::usage("--scales must be positive numbers"));
    }
    let times = numbers(&args.t_list)?;
    for &t in &times {
        check_time(t)?;
    }
    let found = strong_unimodality_witness_search(&scales, &times)?;
    let mut inputs = Map::new();
    inputs.insert("scales".into(), json!(scales));
    inputs.insert("t_list".into(), json!(times));
    let out = Report::new("witness-search", inputs, &found);
    emit(args.out.as_deref(), &out.render())?;
    match found {
        Some(_) => Ok(()),
        None => Err(unimodal::Error::NoWitness {
            t: times.last().copied().unwrap_or(f64::NAN),
        }
        .into()),
    }
}
