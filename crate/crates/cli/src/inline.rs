//! Inline measure syntax: `family:param[,param...]`.
//!
//! `bernoulli:a`, `point_mass:a`, `uniform:l,r`, `triangle:l,m,r`,
//! `semicircle:t` and `atomic:x@w,x@w,...`.

use unimodal::{AtomicMeasure, Family, ProbabilityMeasure};

use crate::CliError;

pub fn parse_inline(spec: &str) -> Result<ProbabilityMeasure, CliError> {
    let (family, params) = spec
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("measure `{spec}` is not of the form family:params")))?;
    let family = family.trim().to_ascii_lowercase().replace('-', "_");
    if family == "atomic" {
        return parse_atomic(params);
    }
    let values = numbers(params)?;
    let want = |n: usize| {
        if values.len() == n {
            Ok(())
        } else {
            Err(CliError::usage(format!(
                "family `{family}` takes {n} parameter(s), got {}",
                values.len()
            )))
        }
    };
    let fam = match family.as_str() {
        "bernoulli" => {
            want(1)?;
            Family::Bernoulli { a: values[0] }
        }
        "point_mass" | "point" | "delta" => {
            want(1)?;
            Family::PointMass { a: values[0] }
        }
        "uniform" => {
            want(2)?;
            Family::Uniform { l: values[0], r: values[1] }
        }
        "triangle" => {
            want(3)?;
            Family::Triangle {
                l: values[0],
                m: values[1],
                r: values[2],
            }
        }
        "semicircle" => {
            want(1)?;
            Family::Semicircle { t: values[0] }
        }
        other => return Err(CliError::usage(format!("unknown measure family `{other}`"))),
    };
    Ok(ProbabilityMeasure::named(fam)?)
}

fn parse_atomic(params: &str) -> Result<ProbabilityMeasure, CliError> {
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for item in params.split(',') {
        let (x, w) = item
            .split_once('@')
            .ok_or_else(|| CliError::usage(format!("atomic entry `{item}` is not of the form x@w")))?;
        atoms.push(number(x)?);
        weights.push(number(w)?);
    }
    Ok(AtomicMeasure::new(atoms, weights)?.into())
}

fn number(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::usage(format!("`{s}` is not a number")))
}

/// Comma-separated list of numbers.
pub fn numbers(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(number).collect()
}

/// Exactly two comma-separated numbers `lo,hi` with lo < hi.
pub fn pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    match numbers(s)?.as_slice() {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        [_, _] => Err(CliError::usage(format!("{what} `{s}` needs lo < hi"))),
        _ => Err(CliError::usage(format!("{what} `{s}` must be two numbers lo,hi"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        assert_eq!(parse_inline("bernoulli:1").unwrap(), ProbabilityMeasure::bernoulli(1.0));
        assert_eq!(parse_inline("point_mass:0").unwrap(), ProbabilityMeasure::point_mass(0.0));
        assert_eq!(parse_inline("point-mass:0").unwrap(), ProbabilityMeasure::point_mass(0.0));
        assert_eq!(parse_inline("uniform:-1,1").unwrap(), ProbabilityMeasure::uniform(-1.0, 1.0).unwrap());
        assert_eq!(
            parse_inline("triangle:-1,0,1").unwrap(),
            ProbabilityMeasure::triangle(-1.0, 0.0, 1.0).unwrap()
        );
        assert_eq!(parse_inline("semicircle:1").unwrap(), ProbabilityMeasure::semicircle(1.0).unwrap());
        assert_eq!(
            parse_inline("atomic:0@0.5, 1@0.5").unwrap(),
            ProbabilityMeasure::atomic(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap()
        );
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["bernoulli", "bernoulli:1,2", "uniform:1,-1", "atomic:0@0.9", "atomic:0,1", "gamma:1", "bernoulli:x"] {
            assert!(parse_inline(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn pairs_need_order() {
        assert_eq!(pair("-1,1", "window").unwrap(), (-1.0, 1.0));
        assert!(pair("1,-1", "window").is_err());
        assert!(pair("1", "window").is_err());
    }
}
