//! Bitstream coefficients: real numbers that can only be queried for dyadic
//! approximations of a requested absolute accuracy.
//!
//! A query at precision `ρ` returns a ρ-binary approximation `Ã` with
//! `|A - Ã| < 2^-ρ`. Rational inputs are truncated toward zero so that repeated
//! queries are reproducible bit for bit.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{ceil_log2, rational_round, rational_round_nearest, scale_pow2, Dyadic, Rational};
use crate::polyops::DyadicPoly;
use crate::Error;

/// Anything that can produce certified dyadic approximations of a fixed real.
pub trait CoefficientSource: Send + Sync + fmt::Debug {
    /// A ρ-binary approximation of the value.
    fn approximate(&self, rho: i64) -> Dyadic;
}

/// Closed-form real constants built from rationals, square roots and π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealConst {
    Rational(Rational),
    /// Square root of a non-negative rational.
    Sqrt(Rational),
    Pi,
    Sum(Vec<RealConst>),
    Product(Vec<RealConst>),
}

impl RealConst {
    pub fn int(v: i64) -> Self {
        RealConst::Rational(Rational::from_integer(v.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        RealConst::Rational(Rational::new(n.into(), d.into()))
    }

    pub fn sqrt(q: Rational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        RealConst::Sqrt(q)
    }

    /// `c * self`, folding rational factors.
    pub fn scaled(self, c: &Rational) -> Self {
        RealConst::Product(vec![RealConst::Rational(c.clone()), self]).simplify()
    }

    pub fn add(self, o: RealConst) -> Self {
        RealConst::Sum(vec![self, o]).simplify()
    }

    pub fn mul(self, o: RealConst) -> Self {
        RealConst::Product(vec![self, o]).simplify()
    }

    pub fn neg(self) -> Self {
        self.scaled(&-Rational::one())
    }

    /// The exact value if it is rational by construction.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealConst::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Flatten nested sums and products and fold rational parts.
    pub fn simplify(self) -> Self {
        match self {
            RealConst::Sqrt(q) => {
                if let Some(r) = rational_sqrt(&q) {
                    RealConst::Rational(r)
                } else {
                    RealConst::Sqrt(q)
                }
            }
            RealConst::Sum(ts) => {
                let mut acc = Rational::zero();
                let mut rest = Vec::new();
                for t in ts.into_iter().map(RealConst::simplify) {
                    match t {
                        RealConst::Rational(q) => acc += q,
                        RealConst::Sum(inner) => rest.extend(inner),
                        other => rest.push(other),
                    }
                }
                if rest.is_empty() {
                    return RealConst::Rational(acc);
                }
                if !acc.is_zero() {
                    rest.push(RealConst::Rational(acc));
                }
                if rest.len() == 1 {
                    rest.pop().unwrap()
                } else {
                    RealConst::Sum(rest)
                }
            }
            RealConst::Product(fs) => {
                let mut acc = Rational::one();
                let mut rest = Vec::new();
                for f in fs.into_iter().map(RealConst::simplify) {
                    match f {
                        RealConst::Rational(q) => acc *= q,
                        RealConst::Product(inner) => {
                            for g in inner {
                                match g {
                                    RealConst::Rational(q) => acc *= q,
                                    other => rest.push(other),
                                }
                            }
                        }
                        other => rest.push(other),
                    }
                }
                if acc.is_zero() || rest.is_empty() {
                    return RealConst::Rational(acc);
                }
                if !acc.is_one() {
                    rest.insert(0, RealConst::Rational(acc));
                }
                if rest.len() == 1 {
                    rest.pop().unwrap()
                } else {
                    RealConst::Product(rest)
                }
            }
            other => other,
        }
    }

    /// A dyadic `v` with `|v - self| <= 2^-p`; its exponent may be below `-p`.
    fn ball(&self, p: i64) -> Dyadic {
        match self {
            RealConst::Rational(q) => rational_round(q, p),
            RealConst::Sqrt(q) => {
                // floor(sqrt(q * 4^p)) / 2^p
                let s = scale_pow2(q, 2 * p).floor().to_integer();
                Dyadic::new(s.sqrt(), -p)
            }
            RealConst::Pi => pi_ball(p),
            RealConst::Sum(ts) => {
                let extra = crate::dyadic::ceil_log2_u64(ts.len() as u64);
                ts.iter()
                    .fold(Dyadic::zero(), |acc, t| &acc + &t.ball(p + extra))
            }
            RealConst::Product(fs) => {
                match fs.as_slice() {
                    [] => Dyadic::one(),
                    [a] => a.ball(p),
                    [a, rest @ ..] => {
                        let b = RealConst::Product(rest.to_vec());
                        product_ball(a, &b, p)
                    }
                }
            }
        }
    }

    /// `ceil(log2(|self| + 1))`, an upper bound on the magnitude in bits.
    fn magnitude_bits(&self) -> i64 {
        let v = self.ball(0).abs();
        // |self| <= |v| + 1
        let bound = (&v + &Dyadic::from_int(2)).to_rational();
        ceil_log2(&bound)
    }
}

fn product_ball(a: &RealConst, b: &RealConst, p: i64) -> Dyadic {
    // |ab - a'b'| <= |a||b - b'| + |b'||a - a'|, with |b'| <= |b| + 1.
    let ma = a.magnitude_bits();
    let mb = b.magnitude_bits();
    let av = a.ball((p + 2 + mb).max(0));
    let bv = b.ball((p + 1 + ma).max(0));
    &av * &bv
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// `atan(1/x) * 2^w` as a truncated integer sum, error below `terms + 1` units.
fn arctan_inv_scaled(x: u64, w: usize) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << w) / &x;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    let mut sign = -1;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if sign < 0 {
            sum -= term;
        } else {
            sum += term;
        }
        sign = -sign;
        k += 1;
    }
    sum
}

/// π with absolute error at most `2^-p`.
fn pi_ball(p: i64) -> Dyadic {
    let p = p.max(0);
    let guard = 8 + crate::dyadic::ceil_log2_u64(p as u64 + 2);
    let w = (p + guard) as usize;
    // Machin: π = 16 atan(1/5) - 4 atan(1/239)
    let v = BigInt::from(16) * arctan_inv_scaled(5, w) - BigInt::from(4) * arctan_inv_scaled(239, w);
    // Truncation costs a few units of 2^-w per series term, well below 2^(guard - 2).
    Dyadic::new(v, -(w as i64)).round_nearest(p + 1)
}

impl CoefficientSource for RealConst {
    fn approximate(&self, rho: i64) -> Dyadic {
        if let RealConst::Rational(q) = self {
            return rational_round(q, rho);
        }
        // |v - A| <= 2^(-rho-2); rounding to nearest adds at most 2^(-rho-1).
        self.ball(rho + 2).round_nearest(rho)
    }
}

/// Coefficient oracle for `F = sum A_i x^i`: one source per coefficient,
/// constant term first.
#[derive(Clone)]
pub struct CoefficientOracle {
    sources: Vec<Arc<dyn CoefficientSource>>,
    bits: Arc<AtomicU64>,
}

impl fmt::Debug for CoefficientOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientOracle")
            .field("sources", &self.sources)
            .finish()
    }
}

impl CoefficientOracle {
    pub fn from_sources(sources: Vec<Arc<dyn CoefficientSource>>) -> Self {
        assert!(!sources.is_empty(), "oracle needs at least one coefficient");
        CoefficientOracle {
            sources,
            bits: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn from_consts(cs: Vec<RealConst>) -> Self {
        Self::from_sources(
            cs.into_iter()
                .map(|c| Arc::new(c.simplify()) as Arc<dyn CoefficientSource>)
                .collect(),
        )
    }

    pub fn from_integers(cs: &[i64]) -> Self {
        Self::from_consts(cs.iter().map(|&c| RealConst::int(c)).collect())
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Self::from_consts(cs.iter().cloned().map(RealConst::Rational).collect())
    }

    pub fn from_rational_poly(p: &crate::polyops::RationalPoly) -> Self {
        Self::from_rationals(&p.clone().trim().coeffs)
    }

    /// Nominal degree `n`.
    pub fn degree(&self) -> usize {
        self.sources.len() - 1
    }

    /// ρ-binary approximation of `A_i`.
    pub fn query(&self, i: usize, rho: i64) -> Dyadic {
        self.bits.fetch_add(rho.max(0) as u64, AtomicOrdering::Relaxed);
        self.sources[i].approximate(rho)
    }

    /// Sum of the precisions of all queries so far.
    pub fn bits_requested(&self) -> u64 {
        self.bits.load(AtomicOrdering::Relaxed)
    }
}

/// Coefficientwise `c1 * o1 + c2 * o2` as a new oracle over closed-form
/// constants. Both inputs must be built from [`RealConst`] values.
pub fn linear_combination(c1: &Rational, o1: &[RealConst], c2: &Rational, o2: &[RealConst]) -> Vec<RealConst> {
    let n = o1.len().max(o2.len());
    let zero = RealConst::int(0);
    (0..n)
        .map(|i| {
            let a = o1.get(i).unwrap_or(&zero).clone().scaled(c1);
            let b = o2.get(i).unwrap_or(&zero).clone().scaled(c2);
            a.add(b)
        })
        .collect()
}

pub fn oracle_sqrt(q: Rational) -> RealConst {
    RealConst::sqrt(q).simplify()
}

pub fn oracle_pi() -> RealConst {
    RealConst::Pi
}

/// ρ-binary approximation of `F`.
pub fn approx_big_f(oracle: &CoefficientOracle, rho: i64) -> DyadicPoly {
    let cs: Vec<Dyadic> = (0..=oracle.degree()).map(|i| oracle.query(i, rho)).collect();
    DyadicPoly::from_dyadics(&cs)
}

/// Upper bound `τ̂` on the coefficient size, from approximations at 8 bits.
pub fn tau_bound(oracle: &CoefficientOracle) -> Result<i64, Error> {
    let n = oracle.degree();
    let eps = Dyadic::pow2(-8);
    let lead = oracle.query(n, 8).abs();
    let den = &lead - &eps;
    if !den.is_positive() {
        return Err(Error::LeadingCoefficientTooSmall);
    }
    let max_rest = (0..n)
        .map(|i| oracle.query(i, 8).abs())
        .max()
        .unwrap_or_else(Dyadic::zero);
    let ratio = (&max_rest + &eps).to_rational() / den.to_rational();
    Ok((ceil_log2(&ratio) + 1).max(1))
}

/// `f(x) = F(2^(Γ+1) x) / A_n` behind its approximation interface.
#[derive(Clone, Debug)]
pub struct ScaledProblem {
    pub oracle: CoefficientOracle,
    pub n: usize,
    pub gamma: i64,
    pub tau_hat: i64,
}

impl ScaledProblem {
    /// ρ-binary approximation of `f`; the leading coefficient is exactly
    /// `2^(n(Γ+1))`.
    pub fn approx(&self, rho: i64) -> Result<DyadicPoly, Error> {
        approx_f(&self.oracle, self.gamma, self.tau_hat, rho)
    }
}

pub fn make_scaled(oracle: CoefficientOracle, gamma: i64, tau_hat: i64) -> ScaledProblem {
    let n = oracle.degree();
    ScaledProblem {
        oracle,
        n,
        gamma,
        tau_hat,
    }
}

/// ρ-binary approximation of `f(x) = F(2^(Γ+1) x) / A_n`.
pub fn approx_f(oracle: &CoefficientOracle, gamma: i64, tau_hat: i64, rho: i64) -> Result<DyadicPoly, Error> {
    let n = oracle.degree() as i64;
    let g1 = gamma + 1;
    // Each scaled ratio is off by < 2^-(rho+1); rounding to the nearest point
    // of the 2^-rho grid adds at most 2^-(rho+1).
    let p = (n * g1).max(0) + rho + tau_hat + 2;
    let lead = oracle.query(n as usize, p);
    if lead.abs() <= Dyadic::pow2(-p) {
        return Err(Error::LeadingCoefficientTooSmall);
    }
    let lq = lead.to_rational();
    let mut cs = Vec::with_capacity(n as usize + 1);
    for i in 0..n as usize {
        let a = oracle.query(i, p).to_rational();
        let v = scale_pow2(&(a / &lq), g1 * i as i64);
        cs.push(rational_round_nearest(&v, rho));
    }
    cs.push(Dyadic::pow2(n * g1));
    Ok(DyadicPoly::from_dyadics(&cs))
}
