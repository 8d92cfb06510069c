//! Betti numbers, twisted Betti numbers, LCK admissibility and the
//! consistency identities tying them together.

pub mod theta;

use serde::Serialize;

use crate::characters::certify::{self, NumericOutcome, RelationOutcome};
use crate::characters::{
    enumerate_spectrum, enumerate_twisted, IndexSet, SpectrumConfig, TrivialitySpectrum,
};
use crate::embeddings::{embedding_values, BallComplex, NumberField, RealBall};
use crate::error::{OtcError, Result};
use crate::exactmath::k_subsets;
use crate::exactmath::rational::binomial;
use crate::units::UnitSubgroup;

pub use theta::{lee_class, lee_class_for, ThetaClass};

/// Generator lists are dropped above this many basis elements.
pub const GENERATOR_LIST_LIMIT: u64 = 4096;

/// Basis element `d ln v_K ∧ e_I`: `forms` picks the real directions `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiGenerator {
    pub forms: IndexSet,
    pub index_set: IndexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub values: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<BettiGenerator>>>,
}

impl BettiVector {
    fn from_values(values: Vec<u64>) -> Self {
        Self {
            values,
            generators: None,
        }
    }
}

/// `b_l = sum_{p+q=l} C(s,p) rho_q`, with generators from the trivial sets.
pub fn betti_numbers(spectrum: &TrivialitySpectrum, s: usize) -> BettiVector {
    let n = spectrum.rho.len() - 1;
    let mut values = vec![0u64; s + n + 1];
    for (q, &r) in spectrum.rho.iter().enumerate() {
        for p in 0..=s {
            values[p + q] += binomial(s, p) * r as u64;
        }
    }
    let total: u64 = values.iter().sum();
    let generators = (total <= GENERATOR_LIST_LIMIT).then(|| {
        let mut gens = vec![Vec::new(); s + n + 1];
        for (q, sets) in spectrum.trivial_sets.iter().enumerate() {
            for p in 0..=s {
                for k in k_subsets(s, p) {
                    let forms = IndexSet::from_mask(k.iter().fold(0, |m, i| m | 1 << i), s);
                    for set in sets {
                        gens[p + q].push(BettiGenerator {
                            forms: forms.clone(),
                            index_set: set.clone(),
                        });
                    }
                }
            }
        }
        gens
    });
    BettiVector { values, generators }
}

/// Twisted Betti numbers with the spectrum they come from.
pub fn twisted_betti(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    theta: &ThetaClass,
    config: &SpectrumConfig,
) -> Result<(BettiVector, TrivialitySpectrum)> {
    theta.check_length(field.s())?;
    let spectrum = if theta.is_zero() {
        enumerate_spectrum(field, subgroup, config)?
    } else {
        enumerate_twisted(field, subgroup, theta, config)?
    };
    Ok((betti_numbers(&spectrum, field.s()), spectrum))
}

/// `b_l = b_{2m-l} = C(s,l)` for `l <= s`, zero strictly between `s` and `n`.
pub fn lck_betti_shortcut(s: usize, t: usize) -> BettiVector {
    let len = 2 * (s + t) + 1;
    let mut values = vec![0u64; len];
    for l in 0..=s {
        values[l] = binomial(s, l);
        values[len - 1 - l] = binomial(s, l);
    }
    BettiVector::from_values(values)
}

/// `t C(s, l-2)`.
pub fn lee_twisted_shortcut(s: usize, t: usize) -> BettiVector {
    let len = 2 * (s + t) + 1;
    let values = (0..len)
        .map(|l| if l < 2 || l - 2 > s { 0 } else { t as u64 * binomial(s, l - 2) })
        .collect();
    BettiVector::from_values(values)
}

/// `floor((n-1)/2)` when no `sigma_I` with `0 < |I| < n` is trivial, else 0.
pub fn chern_vanishing_range(spectrum: &TrivialitySpectrum, n: usize) -> usize {
    let clear = (1..n).all(|q| spectrum.rho.get(q).copied().unwrap_or(0) == 0);
    if clear && n >= 1 {
        (n - 1) / 2
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LckStatus {
    Admissible,
    NotAdmissible,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LckMethod {
    /// `t = 1`: the equality follows from norm one.
    NormOne,
    BallSeparation,
    Exact,
    Numeric,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LckGeneratorCheck {
    pub generator: usize,
    pub method: LckMethod,
    pub bits: u64,
    /// `r(u) = |sigma_{s+1}(u)|` as `[midpoint, radius]`.
    pub r_value: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LckReport {
    pub admissible: bool,
    pub status: LckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_generator: Option<usize>,
    pub checks: Vec<LckGeneratorCheck>,
    /// The only possible Lee class; present only when admissible.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_theta")]
    pub lee_class: Option<ThetaClass>,
    pub chern_vanishing: usize,
}

fn serialize_theta<S: serde::Serializer>(
    theta: &Option<ThetaClass>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    theta.as_ref().and_then(ThetaClass::exact_strings).serialize(s)
}

/// Precision at which separated balls reject the equalities.
const LCK_SEPARATION_BITS: u64 = 256;

/// Checks `|sigma_{s+1}(u)|^2 = ... = |sigma_{s+t}(u)|^2` for every
/// generator; with norm one this forces the remaining equality.
pub fn is_lck_admissible(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    config: &SpectrumConfig,
) -> Result<LckReport> {
    let (s, t) = (field.s(), field.t());
    let mut checks = Vec::new();
    let mut status = LckStatus::Admissible;
    let mut failing = None;
    for (j, u) in subgroup.generators().iter().enumerate() {
        let abs_sq = |bits: u64| -> Result<Vec<RealBall>> {
            let f = field.at_precision(bits)?;
            let vals = embedding_values(&f, u)?;
            Ok((0..t).map(|k| vals[s + k].abs_sq()).collect())
        };
        let r_at = |bits: u64| -> Result<[String; 2]> {
            let r = abs_sq(bits)?[0].sqrt().expect("nonnegative");
            let (mid, rad) = r.to_decimal(20);
            Ok([mid, rad])
        };
        if t == 1 {
            checks.push(LckGeneratorCheck {
                generator: j + 1,
                method: LckMethod::NormOne,
                bits: config.precision,
                r_value: r_at(config.precision)?,
            });
            continue;
        }
        let mut decided: Option<(LckMethod, bool, u64)> = None;
        let mut bits = config.precision.min(LCK_SEPARATION_BITS);
        loop {
            let a = abs_sq(bits)?;
            if a[1..].iter().any(|b| !b.overlaps(&a[0])) {
                decided = Some((LckMethod::BallSeparation, false, bits));
                break;
            }
            if bits >= LCK_SEPARATION_BITS {
                break;
            }
            bits = (2 * bits).min(LCK_SEPARATION_BITS);
        }
        if decided.is_none() {
            decided = Some(lck_relation(field, subgroup, j, config)?);
        }
        let (method, ok, bits) = decided.expect("set above");
        let r_value = r_at(bits.max(config.precision))?;
        checks.push(LckGeneratorCheck {
            generator: j + 1,
            method,
            bits,
            r_value,
        });
        if method == LckMethod::Undecided {
            if status == LckStatus::Admissible {
                status = LckStatus::Undecided;
            }
        } else if !ok {
            status = LckStatus::NotAdmissible;
            failing = Some(j + 1);
            break;
        }
    }
    let admissible = status == LckStatus::Admissible;
    Ok(LckReport {
        admissible,
        status,
        failing_generator: failing,
        checks,
        lee_class: admissible.then(|| lee_class(field)),
        chern_vanishing: 0,
    })
}

/// Exact route through `Λ^2 M ⊗ Λ^2 M^-1`, falling back to numeric
/// escalation when the tensor is too large or the balls stay ambiguous.
fn lck_relation(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    j: usize,
    config: &SpectrumConfig,
) -> Result<(LckMethod, bool, u64)> {
    let (s, t, n) = (field.s(), field.t(), field.degree());
    let u = &subgroup.generators()[j];
    let pair = |k: usize| vec![s + k, s + t + k];
    let factors = [(1, 2), (-1, 2)];
    if config.certify == crate::characters::CertifyMode::Exact {
        let out = certify::solve_relation(
            field,
            u,
            &subgroup.matrices()[j],
            &factors,
            config.precision,
            config.max_bits,
            config.exact_cap,
        )?;
        if let RelationOutcome::Solved { solutions, bits, .. } = out {
            let pos = certify::subset_positions(n, 2);
            let c2 = binomial(n, 2) as usize;
            let first = pos[&pair(0)];
            let ok = (1..t).all(|k| solutions[first * c2 + pos[&pair(k)]]);
            return Ok((LckMethod::Exact, ok, bits));
        }
    }
    let mut used = config.precision;
    for k in 1..t {
        let out = certify::decide_numeric(config.precision, config.max_bits, config.cert_bits, |bits| {
            let f = field.at_precision(bits)?;
            let vals = embedding_values(&f, u)?;
            let a = BallComplex::from_real(&vals[s].abs_sq());
            let b = BallComplex::from_real(&vals[s + k].abs_sq());
            Ok(a.div(&b).unwrap_or_else(|| certify::indeterminate(bits)))
        })?;
        match out {
            NumericOutcome::Rejected { bits } => return Ok((LckMethod::BallSeparation, false, bits)),
            NumericOutcome::Undecided { bits } => return Ok((LckMethod::Undecided, false, bits)),
            NumericOutcome::Accepted { bits } => used = used.max(bits),
        }
    }
    Ok((LckMethod::Numeric, true, used))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl ConsistencyReport {
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).collect()
    }

    /// Error naming the first violated identity.
    pub fn into_result(self) -> Result<Self> {
        match self.failures().first() {
            None => Ok(self),
            Some(c) => Err(OtcError::Consistency(format!(
                "{}: {}",
                c.name,
                c.detail.clone().unwrap_or_default()
            ))),
        }
    }
}

/// A twisted computation for `theta` and `-theta`.
#[derive(Clone, Debug)]
pub struct TwistedPair {
    pub plus: BettiVector,
    pub minus: BettiVector,
}

/// Everything the identities are checked against.
#[derive(Clone, Debug)]
pub struct ConsistencyInput<'a> {
    pub s: usize,
    pub t: usize,
    pub spectrum: &'a TrivialitySpectrum,
    pub betti: &'a BettiVector,
    pub twisted_zero: Option<&'a BettiVector>,
    pub twisted_pairs: Vec<TwistedPair>,
    pub lck: Option<&'a LckReport>,
    /// Lee-twisted Betti vector and spectrum.
    pub lee: Option<(&'a BettiVector, &'a TrivialitySpectrum)>,
}

fn check(name: &'static str, failure: Option<String>) -> CheckResult {
    CheckResult {
        name,
        status: if failure.is_some() {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        },
        detail: failure,
    }
}

fn skipped(name: &'static str, why: &str) -> CheckResult {
    CheckResult {
        name,
        status: CheckStatus::Skipped,
        detail: Some(why.to_string()),
    }
}

fn palindrome_failure(v: &[u64]) -> Option<String> {
    let len = v.len();
    (0..len)
        .find(|&l| v[l] != v[len - 1 - l])
        .map(|l| format!("b_{l} = {} but b_{} = {}", v[l], len - 1 - l, v[len - 1 - l]))
}

pub fn consistency_suite(input: &ConsistencyInput) -> ConsistencyReport {
    let (s, t) = (input.s, input.t);
    let n = s + 2 * t;
    let b = &input.betti.values;
    let rho = &input.spectrum.rho;
    let mut checks = Vec::new();

    checks.push(check("poincare_symmetry", palindrome_failure(b)));

    let euler: i128 = b
        .iter()
        .enumerate()
        .map(|(l, &x)| if l % 2 == 0 { x as i128 } else { -(x as i128) })
        .sum();
    checks.push(check(
        "euler_characteristic",
        (euler != 0).then(|| format!("alternating sum is {euler}")),
    ));

    checks.push(check(
        "binomial_lower_bound",
        (0..=s.min(b.len() - 1))
            .find(|&l| b[l] < binomial(s, l))
            .map(|l| format!("b_{l} = {} < C({s},{l}) = {}", b[l], binomial(s, l))),
    ));

    let total_b: u64 = b.iter().sum();
    let total_rho: u64 = rho.iter().map(|&r| r as u64).sum();
    checks.push(check(
        "binomial_convolution",
        (total_b != (1u64 << s) * total_rho)
            .then(|| format!("sum b = {total_b} but 2^s sum rho = {}", (1u64 << s) * total_rho)),
    ));

    checks.push(check(
        "rho_symmetry",
        (0..=n)
            .find(|&q| rho.get(q) != rho.get(n - q))
            .map(|q| format!("rho_{q} = {:?} but rho_{} = {:?}", rho.get(q), n - q, rho.get(n - q))),
    ));

    let mut conj_failure = None;
    'outer: for sets in &input.spectrum.trivial_sets {
        for set in sets {
            let c = set.conjugate(s, t);
            if !input.spectrum.is_trivial(&c) {
                conj_failure = Some(format!("{set} is trivial but its conjugate {c} is not"));
                break 'outer;
            }
            let k = set.complement(n);
            if !input.spectrum.is_trivial(&k) {
                conj_failure = Some(format!("{set} is trivial but its complement {k} is not"));
                break 'outer;
            }
        }
    }
    checks.push(check("conjugation_symmetry", conj_failure));

    checks.push(match input.twisted_zero {
        None => skipped("twisted_zero_equals_de_rham", "not computed"),
        Some(tz) => check(
            "twisted_zero_equals_de_rham",
            (tz.values != *b).then(|| format!("{:?} != {:?}", tz.values, b)),
        ),
    });

    if input.twisted_pairs.is_empty() {
        checks.push(skipped("twisted_duality", "not computed"));
    } else {
        let failure = input.twisted_pairs.iter().find_map(|p| {
            let len = p.plus.values.len();
            (0..len)
                .find(|&l| p.plus.values[l] != p.minus.values[len - 1 - l])
                .map(|l| {
                    format!(
                        "b^theta_{l} = {} but b^-theta_{} = {}",
                        p.plus.values[l],
                        len - 1 - l,
                        p.minus.values[len - 1 - l]
                    )
                })
        });
        checks.push(check("twisted_duality", failure));
    }

    let lck_names = ["lck_betti_shortcut", "lee_twisted_shortcut", "lee_trivial_pairs"];
    match input.lck {
        Some(r) if r.admissible => {
            let short = lck_betti_shortcut(s, t);
            checks.push(check(
                lck_names[0],
                (short.values != *b).then(|| format!("{:?} != shortcut {:?}", b, short.values)),
            ));
            match input.lee {
                None => {
                    checks.push(skipped(lck_names[1], "Lee twist not computed"));
                    checks.push(skipped(lck_names[2], "Lee twist not computed"));
                }
                Some((lee_b, lee_sp)) => {
                    let short = lee_twisted_shortcut(s, t);
                    checks.push(check(
                        lck_names[1],
                        (short.values != lee_b.values)
                            .then(|| format!("{:?} != shortcut {:?}", lee_b.values, short.values)),
                    ));
                    let expected: Vec<IndexSet> = (1..=t)
                        .map(|j| IndexSet::new(vec![s + j, s + t + j], n).expect("valid pair"))
                        .collect();
                    let got = lee_sp.trivial_sets.get(2).cloned().unwrap_or_default();
                    checks.push(check(
                        lck_names[2],
                        (got != expected).then(|| {
                            let fmt = |v: &[IndexSet]| {
                                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                            };
                            format!("q=2 trivial sets [{}] != [{}]", fmt(&got), fmt(&expected))
                        }),
                    ));
                }
            }
        }
        _ => {
            for name in lck_names {
                checks.push(skipped(name, "not LCK-admissible"));
            }
        }
    }

    ConsistencyReport {
        passed: checks.iter().all(|c| c.status != CheckStatus::Fail),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortcuts() {
        assert_eq!(lck_betti_shortcut(1, 1).values, vec![1, 1, 0, 1, 1]);
        assert_eq!(lck_betti_shortcut(2, 1).values, vec![1, 2, 1, 0, 1, 2, 1]);
        assert_eq!(lck_betti_shortcut(1, 2).values, vec![1, 1, 0, 0, 0, 1, 1]);
        assert_eq!(lee_twisted_shortcut(1, 1).values, vec![0, 0, 1, 1, 0]);
        assert_eq!(lee_twisted_shortcut(2, 3).values, vec![0, 0, 3, 6, 3, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lee_twisted_shortcut(3, 1).values, vec![0, 0, 1, 3, 3, 1, 0, 0, 0]);
    }

    #[test]
    fn lee_class_coefficients() {
        use crate::exactmath::{ratio, rat};
        assert_eq!(lee_class_for(1, 1).real_rational().unwrap(), vec![rat(1)]);
        assert_eq!(lee_class_for(2, 3).real_rational().unwrap(), vec![ratio(1, 3); 2]);
        assert_eq!(lee_class_for(3, 1).real_rational().unwrap(), vec![rat(1); 3]);
    }
}
