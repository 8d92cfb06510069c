//! Input files: `{"schema_version": 1, "polynomial": [...], "units": [[...]],
//! "theta": [[re, im], ...], "options": {...}}`.

use num_bigint::BigInt;
use serde_json::{Map, Value};

use otc_core::characters::CertifyMode;
use otc_core::exactmath::{parse_rational, Rational};
use otc_core::{OtcError, Result};

pub const SCHEMA_VERSION: u64 = 1;

/// Deliberate corruption applied before the consistency suite, for testing
/// that violations are caught.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultInjection {
    /// `rho_1 += 1`, with Betti numbers recomputed from the corrupted spectrum.
    RhoShift,
    /// `b_1 += 1`.
    BettiShift,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct InputOptions {
    pub precision_bits: Option<u64>,
    pub certify_mode: Option<CertifyMode>,
    pub tolerance: Option<f64>,
    pub enumeration_cap: Option<usize>,
    pub inject_fault: Option<FaultInjection>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InputSpec {
    pub polynomial: Vec<BigInt>,
    pub units: Vec<Vec<Rational>>,
    pub theta: Option<Vec<(Rational, Rational)>>,
    pub options: InputOptions,
}

fn field_err(path: &str, msg: impl std::fmt::Display) -> OtcError {
    OtcError::Parse(format!("{path}: {msg}"))
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, known: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(field_err(path, format!("unknown key \"{k}\""))),
        None => Ok(()),
    }
}

fn parse_integer(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| field_err(path, format!("expected an integer, got {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| field_err(path, format!("invalid integer \"{s}\""))),
        other => Err(field_err(path, format!("expected an integer, got {other}"))),
    }
}

fn parse_rational_value(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| field_err(path, e)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        other => Err(field_err(
            path,
            format!("expected a rational string such as \"1/2\", got {other}"),
        )),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| field_err(path, format!("expected an array, got {v}")))
}

fn positive_integer(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .filter(|&x| x > 0)
        .ok_or_else(|| field_err(path, format!("expected a positive integer, got {v}")))
}

/// Parses and checks the shape of an input document. Mathematical
/// validation happens later.
pub fn parse_input(text: &str) -> Result<InputSpec> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        OtcError::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| field_err("$", "expected a JSON object"))?;
    reject_unknown(obj, "$", &["schema_version", "polynomial", "units", "theta", "options"])?;

    match obj.get("schema_version") {
        None => return Err(field_err("schema_version", "missing")),
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(field_err(
                "schema_version",
                format!("unsupported version {v}, expected {SCHEMA_VERSION}"),
            ))
        }
    }

    let poly_v = obj
        .get("polynomial")
        .ok_or_else(|| field_err("polynomial", "missing"))?;
    let polynomial = array(poly_v, "polynomial")?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_integer(c, &format!("polynomial[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    if polynomial.is_empty() {
        return Err(field_err("polynomial", "empty coefficient list"));
    }

    let units_v = obj.get("units").ok_or_else(|| field_err("units", "missing"))?;
    let units = array(units_v, "units")?
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let path = format!("units[{j}]");
            array(u, &path)?
                .iter()
                .enumerate()
                .map(|(i, c)| parse_rational_value(c, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let theta = match obj.get("theta") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            array(v, "theta")?
                .iter()
                .enumerate()
                .map(|(k, pair)| {
                    let path = format!("theta[{k}]");
                    let p = array(pair, &path)?;
                    if p.len() != 2 {
                        return Err(field_err(&path, "expected a [re, im] pair"));
                    }
                    Ok((
                        parse_rational_value(&p[0], &format!("{path}[0]"))?,
                        parse_rational_value(&p[1], &format!("{path}[1]"))?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };

    let mut options = InputOptions::default();
    if let Some(v) = obj.get("options") {
        let o = v
            .as_object()
            .ok_or_else(|| field_err("options", "expected an object"))?;
        reject_unknown(
            o,
            "options",
            &["precision_bits", "certify_mode", "tolerance", "enumeration_cap", "inject_fault"],
        )?;
        if let Some(v) = o.get("precision_bits") {
            options.precision_bits = Some(positive_integer(v, "options.precision_bits")?);
        }
        if let Some(v) = o.get("certify_mode") {
            options.certify_mode = Some(match v.as_str() {
                Some("exact") => CertifyMode::Exact,
                Some("numeric") => CertifyMode::Numeric,
                _ => {
                    return Err(field_err(
                        "options.certify_mode",
                        format!("expected \"exact\" or \"numeric\", got {v}"),
                    ))
                }
            });
        }
        if let Some(v) = o.get("tolerance") {
            let t = v
                .as_f64()
                .filter(|t| *t > 0.0 && t.is_finite())
                .ok_or_else(|| field_err("options.tolerance", format!("expected a positive number, got {v}")))?;
            options.tolerance = Some(t);
        }
        if let Some(v) = o.get("enumeration_cap") {
            options.enumeration_cap = Some(positive_integer(v, "options.enumeration_cap")? as usize);
        }
        if let Some(v) = o.get("inject_fault") {
            options.inject_fault = Some(match v.as_str() {
                Some("rho_shift") => FaultInjection::RhoShift,
                Some("betti_shift") => FaultInjection::BettiShift,
                _ => {
                    return Err(field_err(
                        "options.inject_fault",
                        format!("expected \"rho_shift\" or \"betti_shift\", got {v}"),
                    ))
                }
            });
        }
    }

    Ok(InputSpec {
        polynomial,
        units,
        theta,
        options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_document() {
        let spec = parse_input(
            r#"{"schema_version": 1, "polynomial": [-2, 0, 0, 1],
                "units": [["-1", "1", "0"]], "theta": [["1", "0"]],
                "options": {"precision_bits": 256, "certify_mode": "numeric"}}"#,
        )
        .unwrap();
        assert_eq!(spec.polynomial.len(), 4);
        assert_eq!(spec.units[0][0], Rational::from_integer((-1).into()));
        assert_eq!(spec.theta.unwrap().len(), 1);
        assert_eq!(spec.options.precision_bits, Some(256));
        assert_eq!(spec.options.certify_mode, Some(CertifyMode::Numeric));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = parse_input(r#"{"schema_version": 1, "polynomial": [1], "units": [["1/x"]]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("units[0][0]"), "{e}");
        let e = parse_input(r#"{"schema_version": 2, "polynomial": [1], "units": []}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("schema_version"), "{e}");
        let e = parse_input("{\n\"schema_version\": 1,\n\"polynomial\": [1,]\n}")
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 3"), "{e}");
        let e = parse_input(r#"{"schema_version": 1, "polynomial": [1], "units": [], "extra": 0}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("extra"), "{e}");
    }
}
