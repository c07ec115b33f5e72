use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use bitroot::dyadic::{scale_pow2, Dyadic, Rational};
use bitroot::polyops::{
    extend_plus, reverse_shift, scale_half, shift_half_scale_half, shift_neg_half, sign_var,
    t_test_value, taylor_shift_1,
};
use bitroot::{CoefficientOracle, DyadicPoly, RationalPoly, RealConst};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn max_abs(p: &RationalPoly) -> Rational {
    p.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
}

fn dyadic_poly(max_len: usize) -> impl Strategy<Value = DyadicPoly> {
    (prop::collection::vec(-100_000i64..100_000, 2..max_len), -12i64..4)
        .prop_map(|(cs, e)| DyadicPoly::from_parts(cs.into_iter().map(BigInt::from).collect(), e))
}

fn rational_poly(max_len: usize) -> impl Strategy<Value = RationalPoly> {
    prop::collection::vec((-50i64..50, 1i64..20), 2..max_len)
        .prop_map(|cs| RationalPoly::new(cs.into_iter().map(|(n, d)| q(n, d)).collect()))
}

/// Perturbation with every coefficient in `[-2^-k, 2^-k]`.
fn perturbation(len: usize) -> impl Strategy<Value = (DyadicPoly, i64)> {
    (prop::collection::vec(-1024i64..=1024, len), 0i64..20).prop_map(|(cs, k)| {
        (
            DyadicPoly::from_parts(cs.into_iter().map(BigInt::from).collect(), -10 - k),
            k,
        )
    })
}

fn add(a: &DyadicPoly, b: &DyadicPoly) -> DyadicPoly {
    let n = a.len().max(b.len());
    let cs: Vec<Dyadic> = (0..n)
        .map(|i| {
            let x = if i < a.len() { a.coeff(i) } else { Dyadic::zero() };
            let y = if i < b.len() { b.coeff(i) } else { Dyadic::zero() };
            &x + &y
        })
        .collect();
    DyadicPoly::from_dyadics(&cs)
}

fn inflation(
    g: &DyadicPoly,
    h: &DyadicPoly,
    k: i64,
    t: impl Fn(&DyadicPoly) -> RationalPoly,
) -> Rational {
    let diff = t(&add(g, h)).sub(&t(g));
    max_abs(&diff) / scale_pow2(&Rational::one(), -k)
}

/// Descartes count of `p` on `(a, b)`.
fn var_on(p: &RationalPoly, a: &Rational, b: &Rational) -> usize {
    let n = p.degree().unwrap_or(0);
    let local = p.taylor_shift(a).scale_arg(&(b - a));
    sign_var(&reverse_shift(&local, n).coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn perturbation_growth(
        (g, (h, k)) in dyadic_poly(9).prop_flat_map(|g| {
            let len = g.len();
            (Just(g), perturbation(len))
        })
    ) {
        let n = g.len() - 1;
        let two_n = Rational::from_integer(BigInt::one() << n);
        prop_assert!(inflation(&g, &h, k, |p| shift_half_scale_half(p).to_rational_poly()) <= q(2, 1));
        prop_assert!(inflation(&g, &h, k, |p| extend_plus(p, n.max(2))) <= q(4, 1));
        prop_assert!(inflation(&g, &h, k, |p| taylor_shift_1(p).to_rational_poly()) <= two_n);
        prop_assert!(inflation(&g, &h, k, |p| shift_neg_half(p).to_rational_poly()) <= two_n);
        prop_assert!(inflation(&g, &h, k, |p| scale_half(p).to_rational_poly()) <= q(1, 1));
    }
}

proptest! {
    #[test]
    fn variation_subadditive(
        cs in prop::collection::vec(-40i64..40, 3..9),
        mut cuts in prop::collection::vec((-64i64..64, 1i64..16), 4),
    ) {
        let mut cs = cs;
        if *cs.last().unwrap() == 0 {
            *cs.last_mut().unwrap() = 1;
        }
        let p = RationalPoly::from_i64(&cs);
        let mut pts: Vec<Rational> = cuts.drain(..).map(|(n, d)| q(n, d)).collect();
        pts.sort();
        pts.dedup();
        prop_assume!(pts.len() == 4);
        let (a, b, c, d) = (&pts[0], &pts[1], &pts[2], &pts[3]);
        prop_assert!(var_on(&p, a, b) + var_on(&p, c, d) <= var_on(&p, a, d));
        prop_assert!(var_on(&p, a, b) + var_on(&p, b, d) <= var_on(&p, a, d));
    }

    #[test]
    fn transforms_match_composition(p in dyadic_poly(10)) {
        let r = p.to_rational_poly();
        let n = p.len() - 1;
        prop_assert_eq!(
            shift_half_scale_half(&p).to_rational_poly(),
            r.scale_arg(&q(1, 2)).taylor_shift(&q(1, 1))
        );
        prop_assert_eq!(scale_half(&p).to_rational_poly(), r.scale_arg(&q(1, 2)));
        prop_assert_eq!(taylor_shift_1(&p).to_rational_poly(), r.taylor_shift(&q(1, 1)));
        prop_assert_eq!(shift_neg_half(&p).to_rational_poly(), r.taylor_shift(&q(-1, 2)));
        let nn = n.max(2) as i64;
        prop_assert_eq!(
            extend_plus(&p, n.max(2)),
            r.taylor_shift(&q(-1, 4 * nn)).scale_arg(&(q(1, 1) + q(1, 2 * nn)))
        );
        // (1+x)^n p(1/(1+x)) at a few points
        let rev = reverse_shift(&r, n);
        for x in [q(1, 3), q(2, 1), q(-1, 2), q(7, 5)] {
            let y = q(1, 1) + &x;
            let expect = r.eval(&(q(1, 1) / &y)) * num_traits::pow(y, n);
            prop_assert_eq!(rev.eval(&x), expect);
        }
    }

    #[test]
    fn t_test_affine_invariance(
        g in rational_poly(8),
        (mn, md) in (-20i64..20, 1i64..8),
        (ln, ld) in (1i64..20, 1i64..8),
        (rn, rd) in (1i64..20, 1i64..8),
        kn in 2i64..8,
    ) {
        let m = q(mn, md);
        let lambda = q(ln, ld);
        let r = q(rn, rd);
        let k = q(kn, 2);
        let local = g.taylor_shift(&m).scale_arg(&lambda);
        prop_assert_eq!(
            t_test_value(&local, &Rational::zero(), &(&r / &lambda), &k),
            t_test_value(&g, &m, &r, &k)
        );
    }
}

fn ball_poly(cs: &[RealConst], bits: i64) -> RationalPoly {
    let o = CoefficientOracle::from_consts(cs.to_vec());
    RationalPoly::new((0..cs.len()).map(|i| o.query(i, bits).to_rational()).collect())
}

fn dist(a: &RationalPoly, b: &RationalPoly) -> Rational {
    max_abs(&a.sub(b))
}

#[test]
fn running_example_children() {
    // f = 16 sqrt(2) x^2 - 8x + pi/8 on I0 = (-1/2, 1/2)
    let f = ball_poly(
        &[
            RealConst::Pi.scaled(&q(1, 8)),
            RealConst::int(-8),
            RealConst::sqrt(q(2, 1)).scaled(&q(16, 1)),
        ],
        300,
    );
    let slack = scale_pow2(&Rational::one(), -200);
    let f_i0 = f.taylor_shift(&q(-1, 2));
    let approx = DyadicPoly::from_dyadics(&[
        Dyadic::from_parts(5145, -9),
        Dyadic::from_parts(-31363, -10),
        Dyadic::from_parts(11585, -9),
    ]);
    assert!(dist(&approx.to_rational_poly(), &f_i0) <= scale_pow2(&q(1, 1), -10));

    let right = shift_half_scale_half(&approx).round(9);
    let left = scale_half(&approx).round(9);
    let f_right = f.scale_arg(&q(1, 2));
    let f_left = f.taylor_shift(&q(-1, 2)).scale_arg(&q(1, 2));
    let tol8 = scale_pow2(&q(1, 1), -8) + &slack;
    assert!(dist(&right.to_rational_poly(), &f_right) <= tol8);
    assert!(dist(&left.to_rational_poly(), &f_left) <= tol8);

    let at_quarter = DyadicPoly::from_dyadics(&[
        Dyadic::from_parts(-25, -7),
        Dyadic::from_parts(53, -6),
        Dyadic::from_parts(181, -7),
    ]);
    assert_eq!(at_quarter.eval(&Dyadic::zero()), Dyadic::from_parts(-25, -7));
    let f_q = f.taylor_shift(&q(1, 4)).scale_arg(&q(1, 4));
    assert!(dist(&at_quarter.to_rational_poly(), &f_q) <= scale_pow2(&q(1, 1), -6) + slack);
}

#[test]
fn quarter_interval_signs() {
    let g = RationalPoly::new(vec![q(-1583, 8192), q(3393, 4096), q(11585, 8192)]);
    assert_eq!(sign_var(&g.coeffs), 1);
}
