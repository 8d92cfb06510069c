#![allow(dead_code)]

use otc_core::embeddings::{build_field, NumberField, RealBall};
use otc_core::exactmath::{parse_rational, Rational, RationalPolynomial};
use otc_core::units::{validate_subgroup, AlgebraicNumber, UnitSubgroup};

pub fn field(coeffs: &[i64]) -> NumberField {
    build_field(&RationalPolynomial::from_integers(coeffs), 128).unwrap()
}

pub fn setup(coeffs: &[i64], unit: &[i64]) -> (NumberField, UnitSubgroup) {
    let f = field(coeffs);
    let g = validate_subgroup(&f, &[AlgebraicNumber::from_integers(unit)], 1e-9).unwrap();
    (f, g)
}

pub fn cubic2() -> (NumberField, UnitSubgroup) {
    setup(&[-2, 0, 0, 1], &[-1, 1, 0])
}

pub fn quintic2() -> (NumberField, UnitSubgroup) {
    setup(&[-2, 0, 0, 0, 0, 1], &[-1, 1, 0, 0, 0])
}

pub fn plastic() -> (NumberField, UnitSubgroup) {
    setup(&[-1, -1, 0, 1], &[0, 1, 0])
}

pub fn septic2() -> (NumberField, UnitSubgroup) {
    setup(&[-2, 0, 0, 0, 0, 0, 0, 1], &[-1, 1, 0, 0, 0, 0, 0])
}

pub fn corpus() -> Vec<(&'static str, NumberField, UnitSubgroup)> {
    let mut out = Vec::new();
    for (name, (f, g)) in [
        ("cubic2", cubic2()),
        ("quintic2", quintic2()),
        ("plastic", plastic()),
        ("septic2", septic2()),
    ] {
        out.push((name, f, g));
    }
    out
}

/// `|mid - value| <= rad + 10^-digits`, for a decimal reference value.
pub fn ball_matches(b: &RealBall, decimal: &str, digits: u32) -> bool {
    let x = parse_rational(decimal).unwrap();
    let slack = Rational::new(1.into(), num_bigint::BigInt::from(10).pow(digits));
    let diff = b.mid().to_rational() - x;
    let diff = if diff < Rational::from_integer(0.into()) { -diff } else { diff };
    diff <= b.rad().to_rational() + slack
}
