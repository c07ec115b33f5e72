use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use bitroot::coeffstream::{approx_f, make_scaled, tau_bound};
use bitroot::dyadic::{scale_pow2, Dyadic, Rational};
use bitroot::rootbound::compute_gamma;
use bitroot::{CoefficientOracle, RealConst};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn real_const() -> impl Strategy<Value = RealConst> {
    prop_oneof![
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| RealConst::ratio(n, d)),
        (1i64..1000, 1i64..100).prop_map(|(n, d)| RealConst::sqrt(q(n, d))),
        (-50i64..50).prop_map(|k| RealConst::Pi.scaled(&q(k, 7))),
        ((1i64..100), (-20i64..20)).prop_map(|(a, b)| RealConst::sqrt(q(a, 1)).add(RealConst::int(b))),
        ((1i64..100), (1i64..20)).prop_map(|(a, b)| RealConst::sqrt(q(a, 1)).mul(RealConst::sqrt(q(b, 3)))),
    ]
}

proptest! {
    #[test]
    fn refinement_consistency(c in real_const(), rho in 0i64..80, extra in 1i64..80) {
        let o = CoefficientOracle::from_consts(vec![c]);
        let a = o.query(0, rho).to_rational();
        let b = o.query(0, rho + extra).to_rational();
        let bound = scale_pow2(&Rational::one(), -rho) + scale_pow2(&Rational::one(), -rho - extra);
        prop_assert!((a - b).abs() <= bound);
    }

    #[test]
    fn truncation_magnitude(c in real_const(), rho in 0i64..80) {
        // a ρ-binary approximation never exceeds the value in magnitude by
        // more than the tolerance and lies on the 2^-ρ grid
        let o = CoefficientOracle::from_consts(vec![c]);
        let a = o.query(0, rho);
        prop_assert!(a.is_zero() || a.exponent() >= -rho);
    }

    #[test]
    fn approx_f_error_contract(
        cs in prop::collection::vec((-500i64..500, 1i64..64), 3..8),
        rho in 2i64..60,
    ) {
        let mut rs: Vec<Rational> = cs.iter().map(|&(n, d)| q(n, d)).collect();
        if rs.last().unwrap().numer().abs() < BigInt::from(1) {
            *rs.last_mut().unwrap() = q(1, 1);
        }
        let o = CoefficientOracle::from_rationals(&rs);
        let tau = tau_bound(&o).unwrap();
        let gamma = compute_gamma(&o, tau);
        let f = approx_f(&o, gamma, tau, rho).unwrap();
        let lead = rs.last().unwrap().clone();
        let n = rs.len() - 1;
        let tol = scale_pow2(&Rational::one(), -rho);
        for (i, a) in rs.iter().enumerate() {
            let exact = scale_pow2(&(a / &lead), (gamma + 1) * i as i64);
            let got = f.coeff(i).to_rational();
            prop_assert!((got - exact).abs() <= tol, "coefficient {i}");
        }
        prop_assert_eq!(f.coeff(n), Dyadic::pow2(n as i64 * (gamma + 1)));
    }
}

#[test]
fn sqrt_two_matches_running_example() {
    let o = CoefficientOracle::from_consts(vec![RealConst::sqrt(q(2, 1))]);
    let a = o.query(0, 10).to_rational() * q(16, 1);
    assert!((a - q(11585, 512)).abs() <= scale_pow2(&q(16, 1), -10));
}

#[test]
fn scaled_problem_has_roots_in_half_disc() {
    // x^2 - 2^20: roots ±1024, Γ = 11, f roots ±1/4
    let o = CoefficientOracle::from_integers(&[-(1 << 20), 0, 1]);
    let tau = tau_bound(&o).unwrap();
    let gamma = compute_gamma(&o, tau);
    let p = make_scaled(o, gamma, tau);
    let f = p.approx(40).unwrap();
    let root = q(1, 4);
    assert_eq!(f.eval_rational(&root), Rational::from_integer(0.into()));
}

fn example_f() -> CoefficientOracle {
    let mut cs = vec![q(0, 1); 11];
    cs[10] = q(12256, 65589);
    cs[2] = q(-2, 1);
    cs[1] = q(1, 243);
    cs[0] = q(-9, 16);
    CoefficientOracle::from_rationals(&cs)
}

fn within(p: &bitroot::DyadicPoly, exact: &[Rational], rho: i64) -> bool {
    let tol = scale_pow2(&Rational::one(), -rho);
    exact
        .iter()
        .enumerate()
        .all(|(i, c)| (p.coeff(i).to_rational() - c).abs() <= tol)
}

#[test]
fn binary_approximations_of_example_polynomial() {
    use bitroot::coeffstream::approx_big_f;
    let o = example_f();
    let exact: Vec<Rational> = (0..=10).map(|i| o.query(i, 200).to_rational()).collect();
    let p6 = approx_big_f(&o, 6);
    assert_eq!(p6.coeff(10), Dyadic::new(11.into(), -6));
    assert_eq!(p6.coeff(2), Dyadic::from_int(-2));
    assert!(p6.coeff(1).is_zero());
    assert_eq!(p6.coeff(0), Dyadic::new((-9).into(), -4));
    // the truncating oracle picks -1/2 at two bits; -3/4 is an equally
    // valid member of the approximation set
    let p2 = approx_big_f(&o, 2);
    assert!(p2.coeff(10).is_zero());
    assert!(within(&p2, &exact, 2));
    let mut alt = p2.coeffs();
    alt[0] = Dyadic::new((-3).into(), -2);
    let alt = bitroot::DyadicPoly::from_dyadics(&alt);
    assert!(within(&alt, &exact, 2));
}

#[test]
fn scaled_examples() {
    let a = approx_f(&CoefficientOracle::from_integers(&[-4, 0, 1]), 2, 2, 8).unwrap();
    let b = approx_f(&CoefficientOracle::from_integers(&[-8, 0, 2]), 2, 3, 8).unwrap();
    assert_eq!(a, bitroot::DyadicPoly::from_i64(&[-4, 0, 64]));
    assert_eq!(a, b);
}
