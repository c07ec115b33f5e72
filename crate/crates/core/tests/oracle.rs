use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use bitroot::coeffstream::make_scaled;
use bitroot::dyadic::{floor_log2, scale_pow2, Rational};
use bitroot::isolator::{dcm_rho, DcmOutcome};
use bitroot::oracle::{
    dcm_exact, random_squarefree, real_roots, scaled_exact, separation_report, vca_exact, RootDisc,
};
use bitroot::polyops::t_test_value;
use bitroot::{CoefficientOracle, RationalPoly};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn int(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

/// Closed hull of an isolating interval, either open `(a, b)` or a point.
fn holds(iv: &(Rational, Rational), root: &(Rational, Rational)) -> bool {
    if iv.0 == iv.1 {
        root.0 <= iv.0 && iv.0 <= root.1
    } else {
        iv.0 < root.0 && root.1 < iv.1
    }
}

#[test]
fn exact_methods_agree_with_sturm() {
    for s in 0..200u64 {
        let p = random_squarefree(2 + (s % 9) as usize, 1 + (s % 10) as u32, 20_000 + s);
        let (f, _, _) = scaled_exact(&p);
        let roots = real_roots(&f, 80);
        let vca = vca_exact(&f).intervals;
        let dcm = dcm_exact(&f).intervals;
        assert_eq!(vca.len(), roots.len(), "#{s}");
        assert_eq!(dcm.len(), roots.len(), "#{s}");
        for (k, r) in roots.iter().enumerate() {
            assert!(holds(&vca[k], r), "#{s}: vca interval {k}");
            assert!(holds(&dcm[k], r), "#{s}: dcm interval {k}");
        }
    }
}

fn sq(x: &Rational) -> Rational {
    x * x
}

/// `disc` lies inside the disc of radius `bound` around `c`.
fn inside(c: &RootDisc, bound: &Rational, disc: &RootDisc) -> bool {
    let slack = bound - &c.radius - &disc.radius;
    if !slack.is_positive() {
        return false;
    }
    let d2 = sq(&(&c.center_re - &disc.center_re)) + sq(&(&c.center_im - &disc.center_im));
    d2 <= sq(&slack)
}

#[test]
fn perturbed_roots_stay_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for s in 0..4u64 {
        let p = random_squarefree(2 + s as usize, 3, 30_000 + s);
        let (f, _, _) = scaled_exact(&p);
        let n = f.degree().unwrap();
        let rep = separation_report(&f, 24).unwrap();
        let t = int(64 * n * n);
        // a power of two below μ keeps the perturbed coefficients small
        let mu = scale_pow2(&Rational::one(), floor_log2(&rep.mu.0));
        let trials: Vec<RationalPoly> = (0..100)
            .map(|_| {
                let coeffs = f
                    .coeffs
                    .iter()
                    .map(|c| c + &mu * q(rng.gen_range(-1024..=1024), 1024))
                    .collect();
                RationalPoly::new(coeffs)
            })
            .collect();
        trials.par_iter().enumerate().for_each(|(trial, g)| {
            let gr = separation_report(g, 24).unwrap();
            let mut used = vec![false; n];
            for d in &gr.discs {
                let hits: Vec<usize> = (0..n)
                    .filter(|&i| inside(&rep.discs[i], &(&rep.sigma[i].0 / (&t * int(n))), d))
                    .collect();
                assert_eq!(hits.len(), 1, "#{s} trial {trial}");
                assert!(!used[hits[0]], "#{s} trial {trial}: two roots near one");
                used[hits[0]] = true;
            }
        });
    }
}

#[test]
fn small_discs_pass_a_disc_test() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let k = q(3, 2);
    for s in 0..20u64 {
        let p = random_squarefree(2 + (s % 7) as usize, 1 + (s % 8) as u32, 40_000 + s);
        let (f, _, _) = scaled_exact(&p);
        let n = f.degree().unwrap();
        let rep = separation_report(&f, 8).unwrap();
        let r = &rep.sigma_f.0 / int(4 * n * n);
        let df = f.derivative();
        for _ in 0..50 {
            let m = q(rng.gen_range(-4096..=4096), 8192);
            let holds = t_test_value(&f, &m, &r, &k).is_positive()
                || t_test_value(&df, &m, &r, &k).is_positive();
            assert!(holds, "#{s}: m = {m}, r = {r}");
        }
    }
}

#[test]
fn enough_precision_records_every_root() {
    for s in 0..6u64 {
        let p = random_squarefree(2 + (s % 4) as usize, 2 + (s % 3) as u32, 50_000 + s);
        let (f, gamma, tau) = scaled_exact(&p);
        let rep = separation_report(&f, 8).unwrap();
        let pb = make_scaled(CoefficientOracle::from_rational_poly(&p), gamma, tau);
        let DcmOutcome::Isolated(run) = dcm_rho(&pb, rep.rho_f_max.1).unwrap() else {
            panic!("#{s}: insufficient precision at {}", rep.rho_f_max.1);
        };
        assert_eq!(run.records.len(), real_roots(&f, 8).len());
        let floor = scale_pow2(&Rational::one(), -rep.rho_f.1);
        assert!(run.records.iter().all(|r| r.bound > floor), "#{s}");
    }
}

#[test]
fn report_on_known_roots() {
    // (x - 1/4)(x + 1/8)(x^2 + 1/16)
    let p = RationalPoly::linear_root(&q(1, 4))
        .mul(&RationalPoly::linear_root(&q(-1, 8)))
        .mul(&RationalPoly::new(vec![q(1, 16), Rational::zero(), Rational::one()]));
    let rep = separation_report(&p, 16).unwrap();
    assert_eq!(rep.real_discs().count(), 2);
    let (lo, hi) = rep.discs[0].real_interval();
    assert!(lo <= q(-1, 8) && q(-1, 8) <= hi);
    // closest pair: -1/8 and ±i/4 at distance sqrt(5)/8
    let s2 = sq(&rep.sigma_f.0) * q(64, 5);
    let s2_hi = sq(&rep.sigma_f.1) * q(64, 5);
    assert!(s2 <= q(1, 1) && q(1, 1) <= s2_hi);
}
