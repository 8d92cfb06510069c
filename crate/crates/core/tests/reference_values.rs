//! Values checked against independent references: decimal expansions from
//! a separate multiprecision package, hand expansions, and the statements
//! of the worked examples and closed forms.

mod common;

use common::{ball_matches, corpus, cubic2, plastic, quintic2};
use otc_core::characters::oracle::{compare, oracle_spectrum};
use otc_core::characters::{
    certify_trivial, enumerate_spectrum, screen_trivial, sigma_value, Certificate, IndexSet,
    Parallelism, SpectrumConfig,
};
use otc_core::cohomology::{
    betti_numbers, chern_vanishing_range, is_lck_admissible, lee_class, lee_class_for,
    lck_betti_shortcut, lee_twisted_shortcut, twisted_betti, LckMethod, ThetaClass,
};
use otc_core::embeddings::{embedding_values, eval_embedding, refine};
use otc_core::exactmath::{rat, ratio, resultant, sturm_count, RationalMatrix, RationalPolynomial};
use otc_core::units::{multiplication_matrix, norm, AlgebraicNumber};

const CBRT2: &str = "1.2599210498948731647672106072782283505702514647015";
const PLASTIC: &str = "1.3247179572447460259609088544780973407344040569017";
const INV_CBRT2_MINUS_1: &str = "3.8473221018630726395189162465505366109617447926014";
const LN_CBRT2_MINUS_1: &str = "-1.3473773483293841009181878914456530462830622733207";
// |sigma_2(u)|^2 and |sigma_3(u)|^2 for u = 2^(1/5) - 1
const QUINTIC_ABS2: [&str; 2] = [
    "4.1781408919791895181533516098127887575968988217881",
    "1.6095732845636340073932792794244190979138900936965",
];

#[test]
fn resultants_by_hand() {
    let f = RationalPolynomial::from_integers(&[-2, 0, 0, 1]);
    let g = RationalPolynomial::from_integers(&[-1, 1]);
    // 3x3 Sylvester expansion: (-1)^3 f(1) = 1, and f(1) = -1 the other way
    assert_eq!(resultant(&f, &g).unwrap(), rat(1));
    assert_eq!(resultant(&g, &f).unwrap(), rat(-1));
    let a = RationalPolynomial::from_integers(&[1, 0, 1]);
    let b = RationalPolynomial::from_integers(&[-1, 0, 1]);
    assert_eq!(resultant(&a, &b).unwrap(), rat(4));
}

#[test]
fn sturm_and_companion() {
    let f = RationalPolynomial::from_integers(&[-1, -1, 0, 1]);
    assert_eq!(sturm_count(&f, &rat(1), &rat(2)).unwrap(), 1);
    assert_eq!(sturm_count(&f, &rat(-2), &rat(2)).unwrap(), 1);
    let c = RationalMatrix::from_integer_rows(&[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]);
    assert_eq!(c.det_fraction_free().unwrap(), rat(2));
}

#[test]
fn signatures() {
    let (f, _) = cubic2();
    assert_eq!((f.degree(), f.s(), f.t()), (3, 1, 1));
    let (f, _) = quintic2();
    assert_eq!((f.degree(), f.s(), f.t()), (5, 1, 2));
    let (f, _) = plastic();
    assert_eq!((f.degree(), f.s(), f.t()), (3, 1, 1));
}

#[test]
fn real_roots_match_decimal_expansions() {
    let (f, _) = cubic2();
    let f = refine(&f, 64).unwrap();
    let alpha = AlgebraicNumber::from_integers(&[0, 1, 0]);
    let v = eval_embedding(&f, &alpha, 1).unwrap();
    assert!(ball_matches(&v.re_ball(), CBRT2, 45));
    assert!(!v.re_ball().contains(&otc_core::embeddings::Dyadic::from_rational(
        &ratio(126, 100),
        64,
        otc_core::embeddings::Round::Nearest
    )));
    let u = AlgebraicNumber::from_integers(&[-1, 1, 0]);
    let v = eval_embedding(&f, &u, 1).unwrap();
    assert!(ball_matches(&v.re_ball(), "0.2599210498948731647672106072782283505702514647015", 45));
    let (p, _) = plastic();
    let v = eval_embedding(&p, &alpha, 1).unwrap();
    assert!(ball_matches(&v.re_ball(), PLASTIC, 35));
}

#[test]
fn complex_embeddings_match_reference() {
    let (f, g) = quintic2();
    let vals = embedding_values(&f, &g.generators()[0]).unwrap();
    assert!(ball_matches(&vals[1].abs_sq(), QUINTIC_ABS2[0], 35));
    assert!(ball_matches(&vals[2].abs_sq(), QUINTIC_ABS2[1], 35));
    assert_eq!(vals[3], vals[1].conj());
}

#[test]
fn norms_and_multiplication_matrices() {
    let (f, _) = cubic2();
    let u = AlgebraicNumber::from_integers(&[-1, 1, 0]);
    assert_eq!(norm(&f, &u).unwrap(), rat(1));
    assert_eq!(multiplication_matrix(&f, &u).unwrap().det_fraction_free().unwrap(), rat(1));
    let (p, _) = plastic();
    let a = AlgebraicNumber::from_integers(&[0, 1, 0]);
    assert_eq!(norm(&p, &a).unwrap(), rat(1));
    let fp = RationalPolynomial::from_integers(&[-1, -1, 0, 1]);
    assert_eq!(resultant(&fp, &a.as_polynomial()).unwrap(), rat(1));
}

#[test]
fn log_matrix_entry() {
    let (_, g) = cubic2();
    assert!(ball_matches(&g.log_matrix()[0][0], LN_CBRT2_MINUS_1, 30));
}

#[test]
fn sigma_examples() {
    let (f, g) = cubic2();
    let u = &g.generators()[0];
    assert!(sigma_value(&f, u, &IndexSet::full(3)).unwrap().contains_one());
    let v = sigma_value(&f, u, &IndexSet::new(vec![2, 3], 3).unwrap()).unwrap();
    assert!(!v.contains_one());
    assert!(ball_matches(&v.re_ball(), INV_CBRT2_MINUS_1, 30));
    let tol = 2f64.powi(-30);
    assert!(screen_trivial(&f, &g, &IndexSet::full(3), tol).unwrap());
    assert!(!screen_trivial(&f, &g, &IndexSet::new(vec![1], 3).unwrap(), tol).unwrap());
    // the exact route needs det(Λ^2 M_u - Id) != 0
    let m = multiplication_matrix(&f, u).unwrap();
    let d = m.exterior_power(2).unwrap().sub_identity().unwrap().det_fraction_free().unwrap();
    assert_ne!(d, rat(0));
    let v = certify_trivial(&f, &g, &IndexSet::new(vec![2, 3], 3).unwrap(), &SpectrumConfig::default()).unwrap();
    assert_eq!(v.certificate, Certificate::ExactRejected);
}

#[test]
fn example_spectra_and_betti_numbers() {
    let cfg = SpectrumConfig::default();
    let (f, g) = cubic2();
    let sp = enumerate_spectrum(&f, &g, &cfg).unwrap();
    assert_eq!(sp.rho, vec![1, 0, 0, 1]);
    assert_eq!(betti_numbers(&sp, 1).values, vec![1, 1, 0, 1, 1]);
    assert_eq!(chern_vanishing_range(&sp, 3), 1);
    let (f, g) = quintic2();
    let sp = enumerate_spectrum(&f, &g, &cfg).unwrap();
    assert_eq!(sp.rho, vec![1, 0, 0, 0, 0, 1]);
    assert_eq!(betti_numbers(&sp, 1).values, vec![1, 1, 0, 0, 0, 1, 1]);
    assert_eq!(chern_vanishing_range(&sp, 5), 2);
    let mut with_pair = sp.clone();
    with_pair.rho = vec![1, 0, 1, 1, 0, 1];
    assert_eq!(chern_vanishing_range(&with_pair, 5), 0);
}

#[test]
fn hypothetical_betti_convolution() {
    let (f, g) = cubic2();
    let mut sp = enumerate_spectrum(&f, &g, &SpectrumConfig::default()).unwrap();
    sp.rho = vec![1, 0, 0, 0, 1];
    assert_eq!(betti_numbers(&sp, 2).values, vec![1, 2, 1, 0, 1, 2, 1]);
}

#[test]
fn lee_twist_of_the_cubic() {
    let (f, g) = cubic2();
    let (b, sp) = twisted_betti(&f, &g, &lee_class(&f), &SpectrumConfig::default()).unwrap();
    assert_eq!(b.values, vec![0, 0, 1, 1, 0]);
    assert_eq!(sp.trivial_sets[2], vec![IndexSet::new(vec![2, 3], 3).unwrap()]);
    let (b, _) = twisted_betti(&f, &g, &ThetaClass::zero(1), &SpectrumConfig::default()).unwrap();
    assert_eq!(b.values, vec![1, 1, 0, 1, 1]);
}

#[test]
fn integral_twist_is_cohomologically_trivial() {
    let (f, g) = cubic2();
    let cfg = SpectrumConfig::default();
    let de_rham = betti_numbers(&enumerate_spectrum(&f, &g, &cfg).unwrap(), 1);
    let (b, sp) = twisted_betti(&f, &g, &ThetaClass::IntegralTwist(vec![1]), &cfg).unwrap();
    assert_eq!(b.values, de_rham.values);
    assert!(!sp.has_undecided());
    // the coefficient is 2 pi i / ln(u)
    let a = ThetaClass::IntegralTwist(vec![1]).coefficient_balls(&f, &g).unwrap();
    let expected = 2.0 * std::f64::consts::PI / -1.347_377_348_329_384;
    assert!((a[0].mid_im().to_f64() - expected).abs() < 1e-12);
}

#[test]
fn lck_discrimination() {
    let cfg = SpectrumConfig::default();
    let (f, g) = cubic2();
    let r = is_lck_admissible(&f, &g, &cfg).unwrap();
    assert!(r.admissible);
    assert_eq!(r.checks[0].method, LckMethod::NormOne);
    assert_eq!(r.lee_class, Some(lee_class_for(1, 1)));
    let (f, g) = quintic2();
    let r = is_lck_admissible(&f, &g, &cfg).unwrap();
    assert!(!r.admissible);
    assert_eq!(r.failing_generator, Some(1));
    assert_eq!(r.checks[0].method, LckMethod::BallSeparation);
    assert!(r.checks[0].bits <= 256);
    assert!(r.lee_class.is_none());
    let (f, g) = plastic();
    assert!(is_lck_admissible(&f, &g, &cfg).unwrap().admissible);
}

#[test]
fn closed_form_shortcuts() {
    assert_eq!(lck_betti_shortcut(1, 1).values, vec![1, 1, 0, 1, 1]);
    assert_eq!(lck_betti_shortcut(1, 2).values, vec![1, 1, 0, 0, 0, 1, 1]);
    assert_eq!(lee_twisted_shortcut(1, 1).values, vec![0, 0, 1, 1, 0]);
    assert_eq!(lee_class_for(1, 1).real_rational().unwrap(), vec![rat(1)]);
}

#[test]
fn oracle_agrees_on_corpus() {
    let cfg = SpectrumConfig::default();
    for (name, f, g) in corpus() {
        let sp = enumerate_spectrum(&f, &g, &cfg).unwrap();
        let o = oracle_spectrum(&f, &g, 512, Parallelism::default()).unwrap();
        let c = compare(&sp, &o);
        assert!(c.agree, "{name}: {c:?}");
    }
}

#[test]
fn oracle_refuses_large_degree() {
    let (f, g) = common::setup(&[-2, 0, 0, 0, 0, 0, 0, 0, 0, 1], &[-1, 1, 0, 0, 0, 0, 0, 0, 0]);
    assert!(oracle_spectrum(&f, &g, 256, Parallelism::Sequential).is_err());
}
