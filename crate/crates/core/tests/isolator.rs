use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use bitroot::coeffstream::{make_scaled, ScaledProblem};
use bitroot::dyadic::{scale_pow2, Rational};
use bitroot::isolator::{
    certify_rho, dcm_rho, isolate_scaled, region_of_uncertainty, CertifyMode, CertifyOutcome,
    DcmOutcome, IsolatingRecord, Phase, TraceEvent,
};
use bitroot::oracle::{dcm_exact, random_squarefree, real_roots, scaled_exact, sturm_count};
use bitroot::{r_isolate_with, CoefficientOracle, Error, IsolatorConfig, RationalPoly, Tracer};

fn problem(p: &RationalPoly) -> (RationalPoly, ScaledProblem) {
    let (f, gamma, tau) = scaled_exact(p);
    (f, make_scaled(CoefficientOracle::from_rational_poly(p), gamma, tau))
}

fn poly() -> impl Strategy<Value = RationalPoly> {
    (2usize..9, 1u32..10, any::<u64>()).prop_map(|(n, tau, seed)| random_squarefree(n, tau, seed))
}

fn root_free(f: &RationalPoly, records: &[IsolatingRecord]) -> bool {
    region_of_uncertainty(records).pieces.iter().all(|p| {
        !f.eval(&p.lo).is_zero()
            && !f.eval(&p.hi).is_zero()
            && (p.lo == p.hi || sturm_count(f, &p.lo, &p.hi) == Ok(0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn output_isolates_every_root(p in poly()) {
        let mut tr = Tracer::on();
        let res = r_isolate_with(&CoefficientOracle::from_rational_poly(&p), &IsolatorConfig::default(), &mut tr).unwrap();
        let roots = real_roots(&p, 40);
        prop_assert_eq!(res.intervals.len(), roots.len());
        for w in res.intervals.windows(2) {
            prop_assert!(w[0].hi_dyadic <= w[1].lo_dyadic);
            prop_assert!(w[0].hi <= w[1].lo);
        }
        for (lo, hi) in &roots {
            let hits = res.intervals.iter().filter(|iv| iv.contains(lo) && iv.contains(hi)).count();
            prop_assert_eq!(hits, 1);
        }
        for iv in &res.intervals {
            prop_assert_eq!(sturm_count(&p, &iv.lo_dyadic.to_rational(), &iv.hi_dyadic.to_rational()), Ok(1));
            let sl = p.eval(&iv.lo_dyadic.to_rational()).signum();
            let sr = p.eval(&iv.hi_dyadic.to_rational()).signum();
            prop_assert_eq!(sl, Rational::from_integer(iv.sign_left.into()));
            prop_assert_eq!(sr, Rational::from_integer(iv.sign_right.into()));
        }

        for ev in tr.take() {
            let h = 2 * ev.depth as i64;
            prop_assert!(ev.rho - h <= ev.rho_i && ev.rho_i <= ev.rho, "{:?}", ev);
        }

        let attempts = &res.stats.attempts;
        for w in attempts.windows(2) {
            prop_assert_eq!(w[1].rho, 2 * w[0].rho);
        }
        let ratio = (res.final_rho / 16) as f64;
        prop_assert!(res.stats.restarts as f64 <= ratio.log2());
        prop_assert_eq!(res.stats.restarts + 1, attempts.len());
    }

    #[test]
    fn records_are_sound_and_disjoint(p in poly(), rho in 4i64..96) {
        let (f, pb) = problem(&p);
        let out = dcm_rho(&pb, rho).unwrap();
        let run = out.run();
        for w in run.records.windows(2) {
            prop_assert!(w[0].hi <= w[1].lo);
        }
        for r in &run.records {
            let fl = f.eval(&r.lo);
            let fr = f.eval(&r.hi);
            prop_assert_eq!(fl.signum(), Rational::from_integer(r.sign_left.into()));
            prop_assert_eq!(fr.signum(), Rational::from_integer(r.sign_right.into()));
            prop_assert!(fl.abs() >= r.bound && fr.abs() >= r.bound);
            prop_assert!(r.bound.is_positive());
            prop_assert_eq!(sturm_count(&f, &r.lo, &r.hi), Ok(1));
        }
        if let DcmOutcome::Isolated(run) = &out {
            for mode in [CertifyMode::Seeded, CertifyMode::FullTree] {
                if let CertifyOutcome::Certified(_) = certify_rho(&pb, rho, &run.records, mode).unwrap() {
                    prop_assert!(root_free(&f, &run.records));
                }
            }
        }
    }

    #[test]
    fn bisections_follow_exact_tree(p in poly(), rho in 4i64..80) {
        let (f, pb) = problem(&p);
        let exact = dcm_exact(&f);
        let out = dcm_rho(&pb, rho).unwrap();
        for node in &out.run().bisected {
            prop_assert!(exact.trace.bisected.contains(node), "{:?}", node);
        }
    }

    #[test]
    fn certify_modes_agree(p in poly()) {
        let o = CoefficientOracle::from_rational_poly(&p);
        let mut seeded = IsolatorConfig::default();
        seeded.certify_mode = CertifyMode::Seeded;
        let mut full = seeded.clone();
        full.certify_mode = CertifyMode::FullTree;
        let a = r_isolate_with(&o, &seeded, &mut Tracer::off()).unwrap();
        let b = r_isolate_with(&o, &full, &mut Tracer::off()).unwrap();
        prop_assert_eq!(a.intervals.len(), b.intervals.len());
        for (x, y) in a.intervals.iter().zip(&b.intervals) {
            let same_root = x.lo < y.hi && y.lo < x.hi;
            prop_assert!(same_root);
        }
    }
}

#[test]
fn trace_round_trips_through_json() {
    let o = CoefficientOracle::from_integers(&[6, -7, 0, 1]);
    let mut tr = Tracer::on();
    r_isolate_with(&o, &IsolatorConfig::default(), &mut tr).unwrap();
    let events = tr.take();
    assert!(events.iter().any(|e| e.phase == Phase::Dcm));
    assert!(events.iter().any(|e| e.phase == Phase::Certify));
    let text = serde_json::to_string(&events).unwrap();
    let back: Vec<TraceEvent> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, events);
}

#[test]
fn withheld_record_blocks_certification() {
    let p = RationalPoly::from_i64(&[6, -7, 0, 1]);
    let (_, pb) = problem(&p);
    let res = isolate_scaled(&pb, &IsolatorConfig::default(), &mut Tracer::off()).unwrap();
    assert_eq!(res.records.len(), 3);
    for k in 0..3 {
        let mut recs = res.records.clone();
        recs.remove(k);
        for mode in [CertifyMode::Seeded, CertifyMode::FullTree] {
            let out = certify_rho(&pb, res.final_rho, &recs, mode).unwrap();
            assert!(matches!(out, CertifyOutcome::InsufficientPrecision(_)));
        }
    }
}

#[test]
fn rejects_bad_configuration() {
    let o = CoefficientOracle::from_integers(&[-2, 0, 1]);
    let cfg = IsolatorConfig {
        initial_precision: 1,
        ..IsolatorConfig::default()
    };
    assert_eq!(r_isolate_with(&o, &cfg, &mut Tracer::off()).unwrap_err(), Error::InvalidPrecision(1));
    let double = CoefficientOracle::from_integers(&[1, -2, 1]);
    let cfg = IsolatorConfig {
        max_precision: 256,
        ..IsolatorConfig::default()
    };
    assert!(matches!(
        r_isolate_with(&double, &cfg, &mut Tracer::off()),
        Err(Error::PrecisionCapExceeded { cap: 256, .. })
    ));
}

#[test]
fn interval_width_tracks_root_separation() {
    // roots 1/3 and 1/3 + 2^-20 plus a far root at -5
    let third = Rational::new(1.into(), 3.into());
    let eps = scale_pow2(&Rational::one(), -20);
    let p = RationalPoly::linear_root(&third)
        .mul(&RationalPoly::linear_root(&(&third + &eps)))
        .mul(&RationalPoly::linear_root(&Rational::from_integer((-5).into())));
    let res = r_isolate_with(&CoefficientOracle::from_rational_poly(&p), &IsolatorConfig::default(), &mut Tracer::off()).unwrap();
    assert_eq!(res.intervals.len(), 3);
    let w = &res.intervals[1].hi - &res.intervals[1].lo;
    assert!(w < &eps * Rational::from_integer(12.into()));
}
