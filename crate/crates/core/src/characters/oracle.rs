//! Brute-force reference: every subset evaluated directly with balls at a
//! fixed precision, no screen and no exact algebra.

use serde::Serialize;

use crate::embeddings::{embedding_values, BallComplex, Dyadic, NumberField};
use crate::error::{OtcError, Result};
use crate::units::UnitSubgroup;

use super::par::{self, Parallelism};
use super::{IndexSet, TrivialitySpectrum};

/// Largest degree the oracle accepts.
pub const ORACLE_MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub bits: u64,
    pub rho: Vec<usize>,
    pub trivial_sets: Vec<Vec<IndexSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub agree: bool,
    pub only_in_spectrum: Vec<IndexSet>,
    pub only_in_oracle: Vec<IndexSet>,
}

/// A subset counts as trivial when every generator's value lies within
/// `2^(-bits/2)` of 1.
pub fn oracle_spectrum(
    field: &NumberField,
    subgroup: &UnitSubgroup,
    bits: u64,
    mode: Parallelism,
) -> Result<OracleResult> {
    let n = field.degree();
    if n > ORACLE_MAX_DEGREE {
        return Err(OtcError::OracleTooLarge(n));
    }
    let f = field.at_precision(bits)?;
    let values: Vec<Vec<BallComplex>> = subgroup
        .generators()
        .iter()
        .map(|u| embedding_values(&f, u))
        .collect::<Result<_>>()?;
    let threshold = Dyadic::pow2(-((bits / 2) as i64));
    let masks: Vec<u64> = (0..1u64 << n).collect();
    let hits = par::map(mode, &masks, |&mask| {
        values.iter().all(|vals| {
            let v = vals
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(BallComplex::one(bits), |acc, (_, x)| acc.mul(x));
            v.dist_upper(&Dyadic::one(), &Dyadic::zero()) < threshold
        })
    });
    let mut trivial_sets = vec![Vec::new(); n + 1];
    for (mask, hit) in masks.into_iter().zip(hits) {
        if hit {
            let set = IndexSet::from_mask(mask, n);
            trivial_sets[set.len()].push(set);
        }
    }
    for v in &mut trivial_sets {
        v.sort();
    }
    Ok(OracleResult {
        bits,
        rho: trivial_sets.iter().map(Vec::len).collect(),
        trivial_sets,
    })
}

pub fn compare(spectrum: &TrivialitySpectrum, oracle: &OracleResult) -> OracleComparison {
    let flatten = |v: &[Vec<IndexSet>]| -> Vec<IndexSet> { v.iter().flatten().cloned().collect() };
    let a = flatten(&spectrum.trivial_sets);
    let b = flatten(&oracle.trivial_sets);
    let only_in_spectrum: Vec<IndexSet> = a.iter().filter(|x| !b.contains(x)).cloned().collect();
    let only_in_oracle: Vec<IndexSet> = b.iter().filter(|x| !a.contains(x)).cloned().collect();
    OracleComparison {
        agree: only_in_spectrum.is_empty() && only_in_oracle.is_empty() && spectrum.rho == oracle.rho,
        only_in_spectrum,
        only_in_oracle,
    }
}
