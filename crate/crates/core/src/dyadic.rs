//! Exact dyadic numbers `m * 2^e` and the rounding conventions used throughout.
//!
//! A *ρ-binary approximation* of a real `x` is a dyadic `x̃` with exponent at least
//! `-ρ` and `|x - x̃| < 2^-ρ`. [`dyadic_round`] produces one by truncating toward
//! zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// `m * 2^e` in canonical form: `m` odd, or `m == 0` with `e == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> tz,
                exponent: exponent + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// Mantissa scaled to the grid `2^e`. Requires `e <= self.exponent()` unless zero.
    pub fn mantissa_at(&self, e: i64) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        debug_assert!(e <= self.exponent);
        &self.mantissa << ((self.exponent - e) as usize)
    }

    pub fn to_rational(&self) -> Rational {
        to_rational_parts(&self.mantissa, self.exponent)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep 64 leading bits so huge mantissas do not overflow.
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 64).max(0);
        let m = (&self.mantissa >> drop as usize).to_f64().unwrap_or(f64::NAN);
        let e = self.exponent + drop;
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn floor_log2_abs(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mantissa.bits() as i64 - 1 + self.exponent)
        }
    }

    /// Largest multiple of `2^-rho` that is `<= self`.
    pub fn floor_to(&self, rho: i64) -> Self {
        if self.is_zero() || self.exponent >= -rho {
            return self.clone();
        }
        let shift = (-rho - self.exponent) as usize;
        Dyadic::new(self.mantissa.div_floor(&(BigInt::one() << shift)), -rho)
    }

    /// Smallest multiple of `2^-rho` that is `>= self`.
    pub fn ceil_to(&self, rho: i64) -> Self {
        -((-self).floor_to(rho))
    }

    /// Nearest multiple of `2^-rho` (ties away from zero).
    pub fn round_nearest(&self, rho: i64) -> Self {
        if self.is_zero() || self.exponent >= -rho {
            return self.clone();
        }
        let half = Dyadic::pow2(-rho - 1);
        let a = (&self.abs() + &half).floor_to(rho);
        if self.is_negative() {
            -a
        } else {
            a
        }
    }

    /// Exact `a * 2^e` for machine integers, used mostly in tests and examples.
    pub fn from_parts(mantissa: i64, exponent: i64) -> Self {
        Dyadic::new(BigInt::from(mantissa), exponent)
    }
}

pub(crate) fn to_rational_parts(m: &BigInt, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(m << (e as usize))
    } else {
        Rational::new(m.clone(), BigInt::one() << ((-e) as usize))
    }
}

/// Truncate toward zero onto the grid `2^-rho`; the result is a ρ-binary
/// approximation of `x`.
pub fn dyadic_round(x: &Dyadic, rho: i64) -> Dyadic {
    if x.is_zero() || x.exponent >= -rho {
        return x.clone();
    }
    let shift = (-rho - x.exponent) as usize;
    let m = x.mantissa.abs() >> shift;
    let m = if x.is_negative() { -m } else { m };
    Dyadic::new(m, -rho)
}

/// Truncate a rational toward zero onto the grid `2^-rho`.
pub fn rational_round(q: &Rational, rho: i64) -> Dyadic {
    let scaled = scale_pow2(q, rho);
    // BigRational::trunc rounds toward zero.
    Dyadic::new(scaled.trunc().to_integer(), -rho)
}

/// Nearest point of the grid `2^-rho` (ties upward).
pub fn rational_round_nearest(q: &Rational, rho: i64) -> Dyadic {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    Dyadic::new((scale_pow2(q, rho) + half).floor().to_integer(), -rho)
}

/// Floor of `q` onto the grid `2^-rho`.
pub fn rational_floor(q: &Rational, rho: i64) -> Dyadic {
    Dyadic::new(scale_pow2(q, rho).floor().to_integer(), -rho)
}

/// Ceiling of `q` onto the grid `2^-rho`.
pub fn rational_ceil(q: &Rational, rho: i64) -> Dyadic {
    Dyadic::new(scale_pow2(q, rho).ceil().to_integer(), -rho)
}

/// `q * 2^k`.
pub fn scale_pow2(q: &Rational, k: i64) -> Rational {
    if k >= 0 {
        Rational::new(q.numer() << (k as usize), q.denom().clone())
    } else {
        Rational::new(q.numer().clone(), q.denom() << ((-k) as usize))
    }
}

/// Smallest integer `k` with `2^k >= q`, for `q > 0`.
pub fn ceil_log2(q: &Rational) -> i64 {
    assert!(q.is_positive(), "ceil_log2 of non-positive value");
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    // 2^(nb-1-db) < q < 2^(nb-db+1)
    let mut k = nb - db - 1;
    while scale_pow2(&Rational::one(), k) < *q {
        k += 1;
    }
    k
}

/// Largest integer `k` with `2^k <= q`, for `q > 0`.
pub fn floor_log2(q: &Rational) -> i64 {
    assert!(q.is_positive(), "floor_log2 of non-positive value");
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mut k = nb - db + 1;
    while scale_pow2(&Rational::one(), k) > *q {
        k -= 1;
    }
    k
}

/// Smallest `k >= 0` with `2^k >= n`.
pub fn ceil_log2_u64(n: u64) -> i64 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as i64
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let e = self.exponent.min(other.exponent);
        self.mantissa_at(e).cmp(&other.mantissa_at(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        Dyadic::new(self.mantissa_at(e) + rhs.mantissa_at(e), e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.to_rational();
        if q.is_integer() {
            write!(f, "{}", q.numer())
        } else {
            write!(f, "{}/{}", q.numer(), q.denom())
        }
    }
}

/// Wire form of a dyadic: decimal mantissa string plus exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicRepr {
    pub mant: String,
    pub exp: i64,
}

impl From<&Dyadic> for DyadicRepr {
    fn from(d: &Dyadic) -> Self {
        DyadicRepr {
            mant: d.mantissa.to_string(),
            exp: d.exponent,
        }
    }
}

impl TryFrom<&DyadicRepr> for Dyadic {
    type Error = num_bigint::ParseBigIntError;
    fn try_from(r: &DyadicRepr) -> Result<Self, Self::Error> {
        Ok(Dyadic::new(r.mant.parse()?, r.exp))
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        DyadicInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DyadicInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// `[c - 2^-rho, c + 2^-rho]`, the enclosure of a value approximated by `c`.
    pub fn ball(c: &Dyadic, rho: i64) -> Self {
        let r = Dyadic::pow2(-rho);
        DyadicInterval {
            lo: c - &r,
            hi: c + &r,
        }
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    /// `{|v| : v in self}`.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            DyadicInterval {
                lo: -&self.hi,
                hi: -&self.lo,
            }
        } else {
            DyadicInterval {
                lo: Dyadic::zero(),
                hi: self.lo.abs().max(self.hi.clone()),
            }
        }
    }

    pub fn neg(&self) -> Self {
        DyadicInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    fn add(&self, o: &Self) -> Self {
        DyadicInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn mul_point(&self, x: &Dyadic) -> Self {
        let (a, b) = (&self.lo * x, &self.hi * x);
        if a <= b {
            DyadicInterval { lo: a, hi: b }
        } else {
            DyadicInterval { lo: b, hi: a }
        }
    }

    fn outward(&self, rho: i64) -> Self {
        DyadicInterval {
            lo: self.lo.floor_to(rho),
            hi: self.hi.ceil_to(rho),
        }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }
}

/// Horner evaluation of a polynomial with interval coefficients (constant term
/// first) at a dyadic point. Every intermediate result is rounded outward to the
/// grid `2^-rho`, so the returned interval encloses the exact value set.
pub fn interval_eval_poly(coeffs: &[DyadicInterval], x: &Dyadic, rho: i64) -> DyadicInterval {
    let mut it = coeffs.iter().rev();
    let mut acc = match it.next() {
        Some(c) => c.outward(rho),
        None => return DyadicInterval::point(Dyadic::zero()),
    };
    for c in it {
        acc = acc.mul_point(x).outward(rho).add(c).outward(rho);
    }
    acc
}
