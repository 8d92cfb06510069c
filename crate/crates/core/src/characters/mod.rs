//! Characters `sigma_I` of the unit subgroup and the spectrum of trivial
//! ones: a fixed-point screen over all `2^n` subsets, then exact or numeric
//! certification of the survivors.

pub mod certify;
pub mod oracle;
pub mod par;
pub mod screen;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::cohomology::ThetaClass;
use crate::embeddings::{embedding_values, BallComplex, NumberField};
use crate::error::{OtcError, Result};
use crate::exactmath::rational::binomial;
use crate::units::{AlgebraicNumber, UnitSubgroup};

use certify::{FactorSpec, NumericOutcome, RelationOutcome};
pub use par::Parallelism;
pub use screen::ScreenTables;

/// Strictly increasing 1-based embedding indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(OtcError::InvalidInput(format!(
                    "index set {indices:?} is not strictly increasing"
                )));
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(OtcError::IndexOutOfRange { index: bad, n });
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self { indices: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self {
            indices: (1..=n).collect(),
        }
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        Self {
            indices: (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect(),
        }
    }

    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn complement(&self, n: usize) -> Self {
        Self::from_mask(!self.mask() & low_mask(n), n)
    }

    /// Swaps `s + j` and `s + t + j` for every pair.
    pub fn conjugate(&self, s: usize, t: usize) -> Self {
        let mut out: Vec<usize> = self
            .indices
            .iter()
            .map(|&i| {
                if i <= s {
                    i
                } else if i <= s + t {
                    i + t
                } else {
                    i - t
                }
            })
            .collect();
        out.sort_unstable();
        Self { indices: out }
    }

    fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i - 1).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(s)
    }
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn conjugate_mask(mask: u64, s: usize, t: usize) -> u64 {
    let keep = low_mask(s);
    let a = (mask >> s) & low_mask(t);
    let b = (mask >> (s + t)) & low_mask(t);
    (mask & keep) | (b << s) | (a << (s + t))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyMode {
    #[default]
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    ScreenRejected,
    ExactCertified,
    ExactRejected,
    NumericCertified { bits: u64 },
    NumericRejected { bits: u64 },
    Undecided { bits: u64 },
}

impl Certificate {
    pub fn is_undecided(&self) -> bool {
        matches!(self, Self::Undecided { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialityVerdict {
    pub index_set: IndexSet,
    pub trivial: bool,
    pub certificate: Certificate,
    /// 1-based generator that rejected the set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_generator: Option<usize>,
    /// Exact certification was skipped because the tensor exceeded the cap.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub exact_fallback: bool,
}

#[derive(Clone, Debug)]
pub struct SpectrumConfig {
    /// Starting precision of certification, in bits.
    pub precision: u64,
    pub certify: CertifyMode,
    /// Numeric acceptance needs a ball radius below `2^-cert_bits`.
    pub cert_bits: u64,
    /// Escalation stops here and the verdict becomes undecided.
    pub max_bits: u64,
    pub screen_tolerance: f64,
    /// Largest tensor dimension handled exactly.
    pub exact_cap: usize,
    /// Largest degree `n` enumerated.
    pub enumeration_cap: usize,
    pub parallelism: Parallelism,
    /// Re-verify mirrored index sets instead of copying their verdicts.
    pub paranoid: bool,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            precision: 128,
            certify: CertifyMode::Exact,
            cert_bits: 64,
            max_bits: 1 << 14,
            screen_tolerance: 2f64.powi(-30),
            exact_cap: 3003,
            enumeration_cap: 24,
            parallelism: Parallelism::default(),
            paranoid: false,
        }
    }
}

/// How one generator's relations at one degree were settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificationJob {
    pub generator: usize,
    pub degree: usize,
    pub path: &'static str,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    pub bits: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpectrumTelemetry {
    pub subsets: u64,
    pub screen_survivors: usize,
    pub jobs: Vec<CertificationJob>,
    pub mirrored_verdicts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paranoid_rechecks: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialitySpectrum {
    pub n: usize,
    pub rho: Vec<usize>,
    pub trivial_sets: Vec<Vec<IndexSet>>,
    /// Verdicts for every screen survivor, by degree then lexicographically.
    pub verdicts: Vec<TrivialityVerdict>,
    pub screen_rejected: u64,
    pub undecided: Vec<IndexSet>,
    pub telemetry: SpectrumTelemetry,
}

impl TrivialitySpectrum {
    pub fn is_trivial(&self, set: &IndexSet) -> bool {
        self.trivial_sets
            .get(set.len())
            .is_some_and(|v| v.binary_search(set).is_ok())
    }

    pub fn has_undecided(&self) -> bool {
        !self.undecided.is_empty()
    }

    /// Spectrum with `rho` replaced, keeping everything else; used only to
    /// exercise the consistency checks.
    pub fn with_rho(&self, rho: Vec<usize>) -> Self {
        Self {
            rho,
            ..self.clone()
        }
    }
}

/// `sigma_I(u)`: product of embedding balls, exactly 1 for the empty set.
pub fn sigma_value(field: &NumberField, u: &AlgebraicNumber, set: &IndexSet) -> Result<BallComplex> {
    let prec = field.precision_bits();
    if set.is_empty() {
        return Ok(BallComplex::one(prec));
    }
    let vals = embedding_values(field, u)?;
    Ok(product(&vals, set.mask()))
}

fn product(vals: &[BallComplex], mask: u64) -> BallComplex {
    let prec = vals[0].precision_bits();
    vals.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(BallComplex::one(prec), |acc, (_, v)| acc.mul(v))
}

/// Screen for a single index set.
pub fn screen_trivial(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    set: &IndexSet,
    tolerance: f64,
) -> Result<bool> {
    let tables = ScreenTables::new(field, subgroup, None, tolerance)?;
    Ok(tables.screen_mask(set.mask()).is_ok())
}

/// The twisted (or untwisted) triviality condition
/// `exp(sum_k a_k ln sigma_k(u)) sigma_I(u) = 1` for every generator.
struct Condition<'a> {
    field: &'a NumberField,
    subgroup: &'a UnitSubgroup,
    theta: Option<&'a ThetaClass>,
    booster: Option<Booster>,
}

/// Integer form of a real rational class: groups of embeddings sharing a
/// numerator `c` and the common denominator `d`.
#[derive(Clone, Debug)]
struct Booster {
    groups: Vec<(i64, Vec<usize>)>,
    d: i64,
}

impl Booster {
    fn factors(&self, q: usize) -> Vec<FactorSpec> {
        let mut f: Vec<FactorSpec> = self.groups.iter().map(|(c, g)| (*c, g.len())).collect();
        f.push((self.d, q));
        f
    }

    /// Tuple position of `(groups..., I)`.
    fn tuple_index(&self, n: usize, set: &IndexSet) -> usize {
        let mut idx = 0usize;
        for (_, g) in &self.groups {
            let pos = certify::subset_positions(n, g.len())[g];
            idx = idx * binomial(n, g.len()) as usize + pos;
        }
        let pos = certify::subset_positions(n, set.len())[&set.zero_based()];
        idx * binomial(n, set.len()) as usize + pos
    }
}

impl<'a> Condition<'a> {
    fn new(field: &'a NumberField, subgroup: &'a UnitSubgroup, theta: Option<&'a ThetaClass>) -> Self {
        let theta = theta.filter(|t| !t.is_zero());
        let booster = match theta {
            None => Some(Booster {
                groups: Vec::new(),
                d: 1,
            }),
            Some(th) => th.integer_form().map(|(c, d)| {
                let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
                for (k, &ck) in c.iter().enumerate() {
                    if ck != 0 {
                        groups.entry(ck).or_default().push(k);
                    }
                }
                Booster {
                    groups: groups.into_iter().collect(),
                    d,
                }
            }),
        };
        Self {
            field,
            subgroup,
            theta,
            booster,
        }
    }

    fn n(&self) -> usize {
        self.field.degree()
    }

    /// Index-set involutions that preserve triviality, as mask maps.
    fn symmetries(&self) -> Vec<Box<dyn Fn(u64) -> u64 + Sync + '_>> {
        let (s, t, n) = (self.field.s(), self.field.t(), self.n());
        let mut out: Vec<Box<dyn Fn(u64) -> u64 + Sync>> = Vec::new();
        let real = self.theta.is_none_or(|th| th.is_real());
        if real {
            out.push(Box::new(move |m| conjugate_mask(m, s, t)));
        }
        if self.theta.is_none() {
            out.push(Box::new(move |m| !m & low_mask(n)));
            out.push(Box::new(move |m| conjugate_mask(!m & low_mask(n), s, t)));
        }
        out
    }

    /// `exp(alpha_j) sigma_I(u_j)` at `bits` of precision.
    fn value(&self, j: usize, mask: u64, bits: u64) -> Result<BallComplex> {
        let f = self.field.at_precision(bits)?;
        let vals = embedding_values(&f, &self.subgroup.generators()[j])?;
        let v = product(&vals, mask);
        match self.theta {
            None => Ok(v),
            Some(th) => {
                let off = th.offsets(&f, self.subgroup)?;
                Ok(off[j].exp().mul(&v))
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Decision {
    Accept { exact: bool, bits: u64, fallback: bool },
    Reject { exact: bool, bits: u64, fallback: bool },
    Undecided { bits: u64, fallback: bool },
}

fn combine(set: IndexSet, per_generator: Vec<Decision>) -> TrivialityVerdict {
    let mut undecided: Option<(u64, bool)> = None;
    let mut all_exact = true;
    let mut max_bits = 0;
    let mut any_fallback = false;
    for (j, d) in per_generator.into_iter().enumerate() {
        match d {
            Decision::Reject { exact, bits, fallback } => {
                return TrivialityVerdict {
                    index_set: set,
                    trivial: false,
                    certificate: if exact {
                        Certificate::ExactRejected
                    } else {
                        Certificate::NumericRejected { bits }
                    },
                    witness_generator: Some(j + 1),
                    exact_fallback: fallback,
                };
            }
            Decision::Undecided { bits, fallback } => {
                if undecided.is_none() {
                    undecided = Some((bits, fallback));
                }
            }
            Decision::Accept { exact, bits, fallback } => {
                all_exact &= exact;
                max_bits = max_bits.max(bits);
                any_fallback |= fallback;
            }
        }
    }
    if let Some((bits, fallback)) = undecided {
        return TrivialityVerdict {
            index_set: set,
            trivial: false,
            certificate: Certificate::Undecided { bits },
            witness_generator: None,
            exact_fallback: fallback,
        };
    }
    TrivialityVerdict {
        index_set: set,
        trivial: true,
        certificate: if all_exact {
            Certificate::ExactCertified
        } else {
            Certificate::NumericCertified { bits: max_bits }
        },
        witness_generator: None,
        exact_fallback: any_fallback,
    }
}

type JobKey = (usize, usize);

fn run_jobs(
    cond: &Condition,
    degrees: &[usize],
    config: &SpectrumConfig,
) -> Result<(HashMap<JobKey, RelationOutcome>, Vec<CertificationJob>)> {
    let mut outcomes = HashMap::new();
    let mut telemetry = Vec::new();
    let booster = match (&cond.booster, config.certify) {
        (Some(b), CertifyMode::Exact) => b,
        _ => return Ok((outcomes, telemetry)),
    };
    let r = cond.subgroup.rank();
    let keys: Vec<JobKey> = (0..r)
        .flat_map(|j| degrees.iter().map(move |&q| (j, q)))
        .collect();
    let results = par::map(config.parallelism, &keys, |&(j, q)| {
        certify::solve_relation(
            cond.field,
            &cond.subgroup.generators()[j],
            &cond.subgroup.matrices()[j],
            &booster.factors(q),
            config.precision,
            config.max_bits,
            config.exact_cap,
        )
    });
    for (key, res) in keys.into_iter().zip(results) {
        let res = res?;
        let dimension = certify::tensor_dimension(cond.n(), &booster.factors(key.1));
        let (path, multiplicity, bits) = match &res {
            RelationOutcome::Solved {
                multiplicity, bits, ..
            } => ("exact", Some(*multiplicity), *bits),
            RelationOutcome::Undecided { multiplicity, bits } => {
                ("exact_undecided", Some(*multiplicity), *bits)
            }
            RelationOutcome::TooLarge { .. } => ("numeric_fallback", None, 0),
        };
        telemetry.push(CertificationJob {
            generator: key.0 + 1,
            degree: key.1,
            path,
            dimension,
            multiplicity,
            bits,
        });
        outcomes.insert(key, res);
    }
    Ok((outcomes, telemetry))
}

fn numeric_decision(cond: &Condition, j: usize, mask: u64, config: &SpectrumConfig, fallback: bool) -> Result<Decision> {
    let out = certify::decide_numeric(config.precision, config.max_bits, config.cert_bits, |bits| {
        cond.value(j, mask, bits)
    })?;
    Ok(match out {
        NumericOutcome::Accepted { bits } => Decision::Accept {
            exact: false,
            bits,
            fallback,
        },
        NumericOutcome::Rejected { bits } => Decision::Reject {
            exact: false,
            bits,
            fallback,
        },
        NumericOutcome::Undecided { bits } => Decision::Undecided { bits, fallback },
    })
}

fn decide_set(
    cond: &Condition,
    set: &IndexSet,
    jobs: &HashMap<JobKey, RelationOutcome>,
    config: &SpectrumConfig,
) -> Result<TrivialityVerdict> {
    let mask = set.mask();
    let q = set.len();
    let mut per = Vec::with_capacity(cond.subgroup.rank());
    for j in 0..cond.subgroup.rank() {
        let d = match (jobs.get(&(j, q)), &cond.booster) {
            (Some(RelationOutcome::Solved { solutions, bits, .. }), Some(b)) => {
                if !solutions[b.tuple_index(cond.n(), set)] {
                    Decision::Reject {
                        exact: true,
                        bits: *bits,
                        fallback: false,
                    }
                } else {
                    let start = (*bits).max(config.precision);
                    match certify::decide_root_of_unity(b.d, start, config.max_bits, |bits| {
                        cond.value(j, mask, bits)
                    })? {
                        NumericOutcome::Accepted { bits } => Decision::Accept {
                            exact: true,
                            bits,
                            fallback: false,
                        },
                        NumericOutcome::Rejected { bits } => Decision::Reject {
                            exact: true,
                            bits,
                            fallback: false,
                        },
                        NumericOutcome::Undecided { bits } => Decision::Undecided {
                            bits,
                            fallback: false,
                        },
                    }
                }
            }
            (Some(RelationOutcome::Undecided { bits, .. }), _) => {
                // a rejection by ball exclusion is still rigorous
                let v = cond.value(j, mask, *bits)?;
                if v.contains_one() {
                    Decision::Undecided {
                        bits: *bits,
                        fallback: false,
                    }
                } else {
                    Decision::Reject {
                        exact: false,
                        bits: *bits,
                        fallback: false,
                    }
                }
            }
            (Some(RelationOutcome::TooLarge { .. }), _) => numeric_decision(cond, j, mask, config, true)?,
            _ => numeric_decision(cond, j, mask, config, false)?,
        };
        let stop = matches!(d, Decision::Reject { .. });
        per.push(d);
        if stop {
            break;
        }
    }
    Ok(combine(set.clone(), per))
}

/// Verdict for one index set that passed the screen.
pub fn certify_trivial(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    set: &IndexSet,
    config: &SpectrumConfig,
) -> Result<TrivialityVerdict> {
    let cond = Condition::new(field, subgroup, None);
    let (jobs, _) = run_jobs(&cond, &[set.len()], config)?;
    decide_set(&cond, set, &jobs, config)
}

/// Full spectrum of trivial characters.
pub fn enumerate_spectrum(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    config: &SpectrumConfig,
) -> Result<TrivialitySpectrum> {
    enumerate_condition(field, subgroup, None, config)
}

/// Spectrum of index sets with `rho^theta ⊗ sigma_I` trivial.
pub fn enumerate_twisted(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    theta: &ThetaClass,
    config: &SpectrumConfig,
) -> Result<TrivialitySpectrum> {
    theta.check_length(field.s())?;
    enumerate_condition(field, subgroup, Some(theta), config)
}

fn enumerate_condition(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    theta: Option<&ThetaClass>,
    config: &SpectrumConfig,
) -> Result<TrivialitySpectrum> {
    let n = field.degree();
    if n > config.enumeration_cap || n > 63 {
        return Err(OtcError::EnumerationCap {
            n,
            cap: config.enumeration_cap.min(63),
        });
    }
    let cond = Condition::new(field, subgroup, theta);
    let tables = ScreenTables::new(field, subgroup, cond.theta, config.screen_tolerance)?;
    let survivors = tables.survivors(config.parallelism);
    let mut degrees: Vec<usize> = survivors.iter().map(|m| m.count_ones() as usize).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let (jobs, job_telemetry) = run_jobs(&cond, &degrees, config)?;

    // orbit representatives under the condition's symmetries
    let survivor_set: std::collections::HashSet<u64> = survivors.iter().copied().collect();
    let syms = cond.symmetries();
    let mut rep_of: HashMap<u64, u64> = HashMap::new();
    for &m in &survivors {
        let mut rep = m;
        for g in &syms {
            let image = g(m);
            if survivor_set.contains(&image) {
                rep = rep.min(image);
            }
        }
        rep_of.insert(m, rep);
    }
    let to_decide: Vec<u64> = if config.paranoid {
        survivors.clone()
    } else {
        survivors.iter().copied().filter(|m| rep_of[m] == *m).collect()
    };
    let decided = par::map(config.parallelism, &to_decide, |&m| {
        decide_set(&cond, &IndexSet::from_mask(m, n), &jobs, config)
    });
    let mut by_mask: HashMap<u64, TrivialityVerdict> = HashMap::new();
    for (m, v) in to_decide.iter().zip(decided) {
        by_mask.insert(*m, v?);
    }
    let mut mirrored = 0;
    let mut verdicts = Vec::with_capacity(survivors.len());
    for &m in &survivors {
        let rep = rep_of[&m];
        let v = if let Some(v) = by_mask.get(&m) {
            if config.paranoid && rep != m && by_mask[&rep].trivial != v.trivial {
                return Err(OtcError::Consistency(format!(
                    "mirror verdicts disagree for {} and {}",
                    IndexSet::from_mask(m, n),
                    IndexSet::from_mask(rep, n)
                )));
            }
            v.clone()
        } else {
            mirrored += 1;
            TrivialityVerdict {
                index_set: IndexSet::from_mask(m, n),
                ..by_mask[&rep].clone()
            }
        };
        verdicts.push(v);
    }
    verdicts.sort_by(|a, b| {
        (a.index_set.len(), &a.index_set).cmp(&(b.index_set.len(), &b.index_set))
    });
    let mut trivial_sets = vec![Vec::new(); n + 1];
    let mut undecided = Vec::new();
    for v in &verdicts {
        if v.trivial {
            trivial_sets[v.index_set.len()].push(v.index_set.clone());
        } else if v.certificate.is_undecided() {
            undecided.push(v.index_set.clone());
        }
    }
    let rho = trivial_sets.iter().map(Vec::len).collect();
    let total = 1u64 << n;
    Ok(TrivialitySpectrum {
        n,
        rho,
        trivial_sets,
        screen_rejected: total - survivors.len() as u64,
        undecided,
        telemetry: SpectrumTelemetry {
            subsets: total,
            screen_survivors: survivors.len(),
            jobs: job_telemetry,
            mirrored_verdicts: mirrored,
            paranoid_rechecks: config.paranoid.then_some(survivors.len()),
        },
        verdicts,
    })
}
