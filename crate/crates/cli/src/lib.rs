//! Batch pipeline behind the `otc` binary: input parsing, the full
//! computation and the JSON report.

pub mod input;

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use otc_core::characters::oracle::{compare, oracle_spectrum, OracleComparison, OracleResult};
use otc_core::characters::{
    enumerate_spectrum, CertifyMode, Parallelism, SpectrumConfig, TrivialitySpectrum,
};
use otc_core::cohomology::{
    betti_numbers, chern_vanishing_range, consistency_suite, is_lck_admissible, lee_class,
    twisted_betti, BettiVector, ConsistencyInput, ConsistencyReport, LckReport, LckStatus,
    ThetaClass, TwistedPair,
};
use otc_core::embeddings::{build_field, NumberField};
use otc_core::exactmath::{format_rational, RationalPolynomial};
use otc_core::units::{validate_subgroup, AlgebraicNumber, UnitSubgroup, DEFAULT_RANK_TOLERANCE};
use otc_core::Result;

pub use input::{parse_input, FaultInjection, InputOptions, InputSpec, SCHEMA_VERSION};

/// Significant digits of decimal strings in reports.
const DIGITS: usize = 30;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Clone, Debug, Default)]
pub struct RunFlags {
    pub precision: Option<u64>,
    pub certify: Option<CertifyMode>,
    pub paranoid: bool,
    pub theta_from_input: bool,
    pub quiet: bool,
    pub timing: bool,
}

#[derive(Clone, Debug)]
pub struct TwistedEntry {
    pub label: &'static str,
    pub theta: ThetaClass,
    pub betti: BettiVector,
    pub spectrum: TrivialitySpectrum,
}

#[derive(Clone, Debug)]
pub struct Computation {
    pub field: NumberField,
    pub subgroup: UnitSubgroup,
    pub config: SpectrumConfig,
    pub spectrum: TrivialitySpectrum,
    pub betti: BettiVector,
    pub twisted: Vec<TwistedEntry>,
    pub lck: LckReport,
    pub chern_vanishing: usize,
    pub consistency: ConsistencyReport,
    pub fault: Option<FaultInjection>,
    pub timing_ms: Vec<(&'static str, u128)>,
}

impl Computation {
    pub fn has_undecided(&self) -> bool {
        self.spectrum.has_undecided()
            || self.twisted.iter().any(|t| t.spectrum.has_undecided())
            || self.lck.status == LckStatus::Undecided
    }

    pub fn exit_code(&self) -> i32 {
        if !self.consistency.passed {
            EXIT_ERROR
        } else if self.has_undecided() {
            EXIT_UNDECIDED
        } else {
            EXIT_OK
        }
    }

    pub fn twisted(&self, label: &str) -> Option<&TwistedEntry> {
        self.twisted.iter().find(|t| t.label == label)
    }
}

pub fn spectrum_config(spec: &InputSpec, flags: &RunFlags) -> SpectrumConfig {
    let defaults = SpectrumConfig::default();
    SpectrumConfig {
        precision: flags
            .precision
            .or(spec.options.precision_bits)
            .unwrap_or(defaults.precision),
        certify: flags
            .certify
            .or(spec.options.certify_mode)
            .unwrap_or(defaults.certify),
        screen_tolerance: spec.options.tolerance.unwrap_or(defaults.screen_tolerance),
        enumeration_cap: spec.options.enumeration_cap.unwrap_or(defaults.enumeration_cap),
        paranoid: flags.paranoid,
        parallelism: Parallelism::default(),
        ..defaults
    }
}

/// Field and validated subgroup from an input document.
pub fn field_and_subgroup(spec: &InputSpec, precision: u64) -> Result<(NumberField, UnitSubgroup)> {
    let f = RationalPolynomial::from_bigints(&spec.polynomial);
    let field = build_field(&f, precision)?;
    if let Some(theta) = &spec.theta {
        ThetaClass::Rational(theta.clone()).check_length(field.s())?;
    }
    let gens: Vec<AlgebraicNumber> = spec.units.iter().cloned().map(AlgebraicNumber::new).collect();
    let subgroup = validate_subgroup(&field, &gens, DEFAULT_RANK_TOLERANCE)?;
    Ok((field, subgroup))
}

/// The full pipeline: field, subgroup, spectrum, Betti numbers, twisted
/// Betti numbers, LCK data and the consistency suite.
pub fn compute(spec: &InputSpec, flags: &RunFlags) -> Result<Computation> {
    let config = spectrum_config(spec, flags);
    let mut timing = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timing: &mut Vec<(&'static str, u128)>| {
        timing.push((name, clock.elapsed().as_millis()));
        clock = Instant::now();
    };

    let (field, subgroup) = field_and_subgroup(spec, config.precision)?;
    lap("field_and_subgroup", &mut timing);
    let (s, t, n) = (field.s(), field.t(), field.degree());

    let mut spectrum = enumerate_spectrum(&field, &subgroup, &config)?;
    let mut betti = betti_numbers(&spectrum, s);
    lap("spectrum", &mut timing);

    let mut thetas: Vec<(&'static str, ThetaClass)> = vec![
        ("zero", ThetaClass::zero(s)),
        ("lee", lee_class(&field)),
        ("lee_negated", lee_class(&field).neg()),
    ];
    if flags.theta_from_input {
        if let Some(theta) = &spec.theta {
            let th = ThetaClass::Rational(theta.clone());
            thetas.push(("input_negated", th.neg()));
            thetas.insert(3, ("input", th));
        }
    }
    let mut twisted = Vec::with_capacity(thetas.len());
    for (label, theta) in thetas {
        let (b, sp) = twisted_betti(&field, &subgroup, &theta, &config)?;
        twisted.push(TwistedEntry {
            label,
            theta,
            betti: b,
            spectrum: sp,
        });
    }
    lap("twisted", &mut timing);

    let mut lck = is_lck_admissible(&field, &subgroup, &config)?;
    let chern_vanishing = chern_vanishing_range(&spectrum, n);
    lck.chern_vanishing = chern_vanishing;
    lap("lck", &mut timing);

    match spec.options.inject_fault {
        Some(FaultInjection::RhoShift) => {
            let mut rho = spectrum.rho.clone();
            rho[1] += 1;
            spectrum = spectrum.with_rho(rho);
            betti = BettiVector {
                values: betti_numbers(&spectrum, s).values,
                generators: None,
            };
        }
        Some(FaultInjection::BettiShift) => betti.values[1] += 1,
        None => {}
    }

    let find = |label: &str| twisted.iter().find(|e| e.label == label);
    let mut pairs = Vec::new();
    for (plus, minus) in [("lee", "lee_negated"), ("input", "input_negated")] {
        if let (Some(p), Some(m)) = (find(plus), find(minus)) {
            pairs.push(TwistedPair {
                plus: p.betti.clone(),
                minus: m.betti.clone(),
            });
        }
    }
    let lee = find("lee").expect("always computed");
    let consistency = consistency_suite(&ConsistencyInput {
        s,
        t,
        spectrum: &spectrum,
        betti: &betti,
        twisted_zero: find("zero").map(|e| &e.betti),
        twisted_pairs: pairs,
        lck: Some(&lck),
        lee: Some((&lee.betti, &lee.spectrum)),
    });
    lap("consistency", &mut timing);

    Ok(Computation {
        field,
        subgroup,
        config,
        spectrum,
        betti,
        twisted,
        lck,
        chern_vanishing,
        consistency,
        fault: spec.options.inject_fault,
        timing_ms: timing,
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// Recursively rebuilds objects with keys in sorted order.
pub fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, sort_keys(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

fn theta_strings(theta: &ThetaClass, field: &NumberField, subgroup: &UnitSubgroup) -> Value {
    match theta.exact_strings() {
        Some(s) => to_value(&s),
        None => match theta.coefficient_balls(field, subgroup) {
            Ok(balls) => Value::Array(
                balls
                    .iter()
                    .map(|b| to_value(&b.to_decimal_pair(DIGITS)))
                    .collect(),
            ),
            Err(e) => Value::String(e.to_string()),
        },
    }
}

fn spectrum_value(sp: &TrivialitySpectrum) -> Value {
    json!({
        "values": sp.rho,
        "trivial_sets": sp.trivial_sets,
        "verdicts": sp.verdicts,
        "screen_rejected": sp.screen_rejected,
        "undecided": sp.undecided,
    })
}

pub fn report(c: &Computation, flags: &RunFlags) -> Value {
    let f = &c.field;
    let embeddings: Vec<[String; 2]> = f.roots().iter().map(|r| r.to_decimal_pair(DIGITS)).collect();
    let (det_mid, det_rad) = c.subgroup.log_det().to_decimal(DIGITS);
    let status = if !c.consistency.passed {
        "inconsistent"
    } else if c.has_undecided() {
        "undecided"
    } else {
        "ok"
    };
    let twisted: Vec<Value> = c
        .twisted
        .iter()
        .map(|e| {
            json!({
                "label": e.label,
                "theta": theta_strings(&e.theta, f, &c.subgroup),
                "betti": e.betti.values,
                "rho": e.spectrum.rho,
                "trivial_sets": e.spectrum.trivial_sets,
                "undecided": e.spectrum.undecided,
            })
        })
        .collect();
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "status": status,
        "field": {
            "polynomial": f.defining_poly().coeffs().iter().map(format_rational).collect::<Vec<_>>(),
            "signature": {"n": f.degree(), "s": f.s(), "t": f.t(), "m": f.m()},
            "irreducibility": f.irreducibility(),
            "embeddings": embeddings,
            "warnings": f.warnings(),
        },
        "admissibility": {
            "validated": c.subgroup.validated(),
            "rank": c.subgroup.rank(),
            "generators": c.subgroup.generators().iter().map(AlgebraicNumber::to_strings).collect::<Vec<_>>(),
            "log_det": [det_mid, det_rad],
        },
        "rho": spectrum_value(&c.spectrum),
        "betti": c.betti,
        "twisted": twisted,
        "lck": c.lck,
        "chern_vanishing": c.chern_vanishing,
        "consistency": c.consistency,
    });
    let obj = out.as_object_mut().expect("object");
    if let Some(fault) = c.fault {
        obj.insert("injected_fault".into(), Value::String(format!("{fault:?}")));
    }
    if !flags.quiet {
        let twisted_tel: Map<String, Value> = c
            .twisted
            .iter()
            .map(|e| (e.label.to_string(), to_value(&e.spectrum.telemetry)))
            .collect();
        obj.insert(
            "telemetry".into(),
            json!({
                "precision_bits": c.config.precision,
                "field_precision_bits": f.precision_bits(),
                "certify_mode": c.config.certify,
                "cert_bits": c.config.cert_bits,
                "max_bits": c.config.max_bits,
                "exact_cap": c.config.exact_cap,
                "paranoid": c.config.paranoid,
                "spectrum": c.spectrum.telemetry,
                "twisted": twisted_tel,
            }),
        );
    }
    if flags.timing {
        let t: Map<String, Value> = c
            .timing_ms
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        obj.insert("timing_ms".into(), Value::Object(t));
    }
    sort_keys(out)
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub subsets: u64,
    pub oracle: OracleResult,
    pub pipeline_rho: Vec<usize>,
    pub comparison: OracleComparison,
}

/// Brute-force ball evaluation of every subset compared with the pipeline.
pub fn run_oracle(spec: &InputSpec, flags: &RunFlags, bits: u64) -> Result<OracleReport> {
    let config = spectrum_config(spec, flags);
    let (field, subgroup) = field_and_subgroup(spec, config.precision)?;
    let oracle = oracle_spectrum(&field, &subgroup, bits, config.parallelism)?;
    let spectrum = enumerate_spectrum(&field, &subgroup, &config)?;
    let comparison = compare(&spectrum, &oracle);
    Ok(OracleReport {
        n: field.degree(),
        subsets: 1 << field.degree(),
        oracle,
        pipeline_rho: spectrum.rho,
        comparison,
    })
}

pub fn oracle_value(r: &OracleReport) -> Value {
    sort_keys(to_value(r))
}
