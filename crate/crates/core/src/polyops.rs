//! Polynomial transforms on dyadic and rational coefficient vectors.
//!
//! Coefficients are stored constant term first. [`DyadicPoly`] keeps one shared
//! exponent so that Taylor shifts run on plain big integers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{scale_pow2, to_rational_parts, Dyadic, Rational};

/// Polynomial `sum_i coeffs[i] * 2^exp * x^i`.
///
/// The nominal length is kept even when leading coefficients vanish, since the
/// transforms depend on the nominal degree.
#[derive(Clone)]
pub struct DyadicPoly {
    coeffs: Vec<BigInt>,
    exp: i64,
}

impl DyadicPoly {
    pub fn from_parts(coeffs: Vec<BigInt>, exp: i64) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        DyadicPoly { coeffs, exp }
    }

    pub fn from_dyadics(cs: &[Dyadic]) -> Self {
        let exp = cs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.exponent())
            .min()
            .unwrap_or(0);
        DyadicPoly::from_parts(cs.iter().map(|c| c.mantissa_at(exp)).collect(), exp)
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        DyadicPoly::from_parts(cs.iter().map(|&c| BigInt::from(c)).collect(), 0)
    }

    /// Number of stored coefficients (nominal degree plus one).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the highest nonzero coefficient.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> Dyadic {
        Dyadic::new(self.coeffs[i].clone(), self.exp)
    }

    pub fn coeffs(&self) -> Vec<Dyadic> {
        (0..self.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn raw(&self) -> (&[BigInt], i64) {
        (&self.coeffs, self.exp)
    }

    pub fn to_rational_poly(&self) -> RationalPoly {
        RationalPoly::new(
            self.coeffs
                .iter()
                .map(|c| to_rational_parts(c, self.exp))
                .collect(),
        )
    }

    /// Drop common trailing zero bits into the exponent.
    pub fn normalize(mut self) -> Self {
        let tz = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.trailing_zeros().unwrap_or(0))
            .min();
        match tz {
            None => self.exp = 0,
            Some(0) => {}
            Some(t) => {
                for c in self.coeffs.iter_mut() {
                    *c >>= t;
                }
                self.exp += t as i64;
            }
        }
        self
    }

    /// ρ-binary rounding of every coefficient (truncation toward zero).
    pub fn round(&self, rho: i64) -> Self {
        if self.exp >= -rho {
            return self.clone();
        }
        let shift = (-rho - self.exp) as usize;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_negative() {
                    -((-c) >> shift)
                } else {
                    c >> shift
                }
            })
            .collect();
        DyadicPoly { coeffs, exp: -rho }.normalize()
    }

    /// `p + c * x^k`; the nominal length grows if needed.
    pub fn add_monomial(&self, k: usize, c: &Dyadic) -> Self {
        let mut cs = self.coeffs();
        if cs.len() <= k {
            cs.resize(k + 1, Dyadic::zero());
        }
        cs[k] = &cs[k] + c;
        DyadicPoly::from_dyadics(&cs)
    }

    pub fn derivative(&self) -> Self {
        if self.len() == 1 {
            return DyadicPoly::from_parts(vec![BigInt::zero()], 0);
        }
        let coeffs = (1..self.len())
            .map(|i| &self.coeffs[i] * BigInt::from(i))
            .collect();
        DyadicPoly::from_parts(coeffs, self.exp)
    }

    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Dyadic::new(c.clone(), self.exp);
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.to_rational_poly().eval(x)
    }

    /// Value at 1.
    pub fn sum(&self) -> Dyadic {
        Dyadic::new(self.coeffs.iter().sum(), self.exp)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> Dyadic {
        Dyadic::new(
            self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default(),
            self.exp,
        )
    }
}

impl PartialEq for DyadicPoly {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.coeffs() == other.coeffs()
    }
}

impl Eq for DyadicPoly {}

impl fmt::Debug for DyadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs().iter()).finish()
    }
}

/// `num / den` with `den > 0`; used where a transform introduces a
/// non-dyadic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPoly {
    pub num: DyadicPoly,
    pub den: BigInt,
}

impl ScaledPoly {
    pub fn to_rational_poly(&self) -> RationalPoly {
        let d = Rational::from_integer(self.den.clone());
        RationalPoly::new(
            self.num
                .to_rational_poly()
                .coeffs
                .into_iter()
                .map(|c| c / &d)
                .collect(),
        )
    }
}

pub(crate) fn taylor_shift_unit(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

pub(crate) fn taylor_shift_neg_unit(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = c[j + 1].clone();
            c[j] -= t;
        }
    }
}

/// `p(x + 1)`.
pub fn taylor_shift_1(p: &DyadicPoly) -> DyadicPoly {
    let mut c = p.coeffs.clone();
    taylor_shift_unit(&mut c);
    DyadicPoly::from_parts(c, p.exp)
}

/// `p(x - 1)`.
pub fn taylor_shift_neg1(p: &DyadicPoly) -> DyadicPoly {
    let mut c = p.coeffs.clone();
    taylor_shift_neg_unit(&mut c);
    DyadicPoly::from_parts(c, p.exp)
}

/// `p(x / 2)`.
pub fn scale_half(p: &DyadicPoly) -> DyadicPoly {
    let n = p.nominal_degree();
    let c = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c << (n - i))
        .collect();
    DyadicPoly::from_parts(c, p.exp - n as i64)
}

/// `p(2x)`.
pub fn scale_two(p: &DyadicPoly) -> DyadicPoly {
    let c = p.coeffs.iter().enumerate().map(|(i, c)| c << i).collect();
    DyadicPoly::from_parts(c, p.exp)
}

/// `p((1 + x) / 2)`.
pub fn shift_half_scale_half(p: &DyadicPoly) -> DyadicPoly {
    taylor_shift_1(&scale_half(p))
}

/// `p(x - 1/2)`.
pub fn shift_neg_half(p: &DyadicPoly) -> DyadicPoly {
    scale_two(&taylor_shift_neg1(&scale_half(p)))
}

/// `(1 + x)^n * p(1 / (1 + x))`, padding `p` to `n + 1` coefficients.
pub fn reverse_shift_dyadic(p: &DyadicPoly, n: usize) -> DyadicPoly {
    assert!(p.len() <= n + 1, "degree exceeds reversal length");
    let mut c = p.coeffs.clone();
    c.resize(n + 1, BigInt::zero());
    c.reverse();
    taylor_shift_unit(&mut c);
    DyadicPoly::from_parts(c, p.exp)
}

/// [`extend_plus`] with the common denominator `(4n)^n` kept separate.
pub fn extend_plus_scaled(p: &DyadicPoly, n: usize) -> ScaledPoly {
    assert!(p.len() <= n + 1, "degree exceeds n");
    let four_n = BigInt::from(4 * n as u64);
    let d = p.len() - 1;
    // u(y) = (4n)^n p(y / (4n)); then u(-1 + (4n + 2) x).
    let mut pw = Vec::with_capacity(n + 1);
    pw.push(BigInt::one());
    for k in 1..=n {
        let next = &pw[k - 1] * &four_n;
        pw.push(next);
    }
    let mut c: Vec<BigInt> = (0..=d).map(|k| &p.coeffs[k] * &pw[n - k]).collect();
    taylor_shift_neg_unit(&mut c);
    let m = BigInt::from(4 * n as u64 + 2);
    let mut mk = BigInt::one();
    for ck in c.iter_mut() {
        *ck *= &mk;
        mk *= &m;
    }
    c.resize(p.len(), BigInt::zero());
    ScaledPoly {
        num: DyadicPoly::from_parts(c, p.exp),
        den: pw[n].clone(),
    }
}

/// `p(-1/(4n) + (1 + 1/(2n)) x)`: the interval map `I -> I⁺`.
pub fn extend_plus(p: &DyadicPoly, n: usize) -> RationalPoly {
    extend_plus_scaled(p, n).to_rational_poly()
}

/// `(1 + x)^n * p(1 / (1 + x))` for a rational polynomial.
pub fn reverse_shift(p: &RationalPoly, n: usize) -> RationalPoly {
    assert!(p.coeffs.len() <= n + 1, "degree exceeds reversal length");
    let mut c = p.coeffs.clone();
    c.resize(n + 1, Rational::zero());
    c.reverse();
    RationalPoly::new(c).taylor_shift(&Rational::one())
}

/// Number of sign changes, ignoring zeros.
pub fn sign_var<T: Signed>(coeffs: &[T]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for c in coeffs {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Outcome of the ε-threshold sign test on a coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    /// Every coefficient exceeds `-ε`.
    AllAboveNegEps,
    /// Every coefficient is below `ε`.
    AllBelowPosEps,
    Mixed,
}

/// Classify `p` against the threshold `eps > 0`. When both one-sided
/// conditions hold the first one is reported.
pub fn threshold_sign_class(p: &RationalPoly, eps: &Rational) -> SignClass {
    let neg = -eps.clone();
    if p.coeffs.iter().all(|c| *c > neg) {
        SignClass::AllAboveNegEps
    } else if p.coeffs.iter().all(|c| c < eps) {
        SignClass::AllBelowPosEps
    } else {
        SignClass::Mixed
    }
}

/// Dyadic-grid variant of [`threshold_sign_class`] on `num / den`.
pub fn threshold_sign_class_scaled(p: &ScaledPoly, eps: &Dyadic) -> SignClass {
    // c / den > -eps  <=>  c > -eps * den
    let t = eps * &Dyadic::from_int(p.den.clone());
    classify_dyadics(&p.num, &t)
}

pub(crate) fn classify_dyadics(p: &DyadicPoly, t: &Dyadic) -> SignClass {
    let nt = -t;
    let cs = p.coeffs();
    if cs.iter().all(|c| *c > nt) {
        SignClass::AllAboveNegEps
    } else if cs.iter().all(|c| c < t) {
        SignClass::AllBelowPosEps
    } else {
        SignClass::Mixed
    }
}

/// `|p(m)| - K * sum_{k>=1} |p^(k)(m) / k!| r^k`.
pub fn t_test_value(p: &RationalPoly, m: &Rational, r: &Rational, k: &Rational) -> Rational {
    let s = p.taylor_shift(m);
    let mut tail = Rational::zero();
    let mut rk = Rational::one();
    for c in s.coeffs.iter().skip(1) {
        rk *= r;
        tail += c.abs() * &rk;
    }
    s.coeffs[0].abs() - k * tail
}

/// Exact `t_{3/2}(0, 2^r_log2)` for a dyadic polynomial.
pub(crate) fn t_test_at_zero(p: &DyadicPoly, r_log2: i64) -> Dyadic {
    let mut tail = Dyadic::zero();
    for k in 1..p.len() {
        tail = &tail + &p.coeff(k).abs().shl(r_log2 * k as i64);
    }
    // |c0| - 3/2 * tail
    &p.coeff(0).abs() - &(&tail * &Dyadic::from_parts(3, -1))
}

/// Dense polynomial with rational coefficients, constant term first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    pub coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        RationalPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        RationalPoly::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(cs: &[BigInt]) -> Self {
        RationalPoly::new(cs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn zero() -> Self {
        RationalPoly::new(vec![])
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        RationalPoly::new(vec![-r.clone(), Rational::one()])
    }

    /// Strip vanishing leading coefficients.
    pub fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Degree of the trimmed polynomial; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Rational {
        self.degree()
            .map(|d| self.coeffs[d].clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        RationalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// `p(x + m)`.
    pub fn taylor_shift(&self, m: &Rational) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if m.is_zero() {
            return self.clone();
        }
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * m;
                c[j] += t;
            }
        }
        RationalPoly::new(c)
    }

    /// `p(s * x)`.
    pub fn scale_arg(&self, s: &Rational) -> Self {
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pw);
            pw *= s;
        }
        RationalPoly::new(out)
    }

    /// `p(2^k x)`.
    pub fn scale_arg_pow2(&self, k: i64) -> Self {
        RationalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| scale_pow2(c, k * i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        RationalPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rational::zero();
        RationalPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }

    /// Quotient and remainder of Euclidean division by a nonzero `d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.coeffs[dd].clone();
        let mut r = self.clone().trim();
        let mut q = vec![Rational::zero(); r.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let f = &r.coeffs[rd] / &lc;
            for i in 0..=dd {
                let t = &f * &d.coeffs[i];
                r.coeffs[rd - dd + i] -= t;
            }
            q[rd - dd] = f;
            r = r.trim();
        }
        (RationalPoly::new(q).trim(), r)
    }

    pub fn monic(&self) -> Self {
        let lc = self.leading();
        self.scale(&(Rational::one() / lc))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.coeffs.iter().map(|c| c.to_string()))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn rp(cs: &[(i64, i64)]) -> RationalPoly {
        RationalPoly::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn shift_half_scale_half_linear() {
        // x -> (1 + x) / 2
        let p = DyadicPoly::from_i64(&[0, 1]);
        assert_eq!(
            shift_half_scale_half(&p).to_rational_poly(),
            rp(&[(1, 2), (1, 2)])
        );
    }

    #[test]
    fn shift_half_scale_half_quadratic() {
        // (2x - 1)^2 at (1 + x)/2 gives x^2
        let p = DyadicPoly::from_i64(&[1, -4, 4]);
        assert_eq!(shift_half_scale_half(&p).to_rational_poly(), rp(&[(0, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn scale_half_example() {
        let p = DyadicPoly::from_i64(&[0, 0, 4]);
        assert_eq!(scale_half(&p).to_rational_poly(), rp(&[(0, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn taylor_shift_examples() {
        let p = DyadicPoly::from_i64(&[0, 0, 1]);
        assert_eq!(taylor_shift_1(&p), DyadicPoly::from_i64(&[1, 2, 1]));
        let p = DyadicPoly::from_i64(&[0, 0, 0, 1]);
        assert_eq!(taylor_shift_1(&p), DyadicPoly::from_i64(&[1, 3, 3, 1]));
        assert_eq!(taylor_shift_neg1(&taylor_shift_1(&p)), p);
    }

    #[test]
    fn shift_neg_half_example() {
        // x at x - 1/2
        let p = DyadicPoly::from_i64(&[0, 1]);
        assert_eq!(shift_neg_half(&p).to_rational_poly(), rp(&[(-1, 2), (1, 1)]));
    }

    #[test]
    fn extend_plus_examples() {
        // n = 1: -1/4 + 3/2 x
        let p = DyadicPoly::from_i64(&[0, 1]);
        assert_eq!(extend_plus(&p, 1), rp(&[(-1, 4), (3, 2)]));
        // n = 2, p = 1: constant
        let p = DyadicPoly::from_i64(&[1, 0, 0]);
        assert_eq!(extend_plus(&p, 2), rp(&[(1, 1), (0, 1), (0, 1)]));
        // n = 2, p = x^2: (-1/8 + 5/4 x)^2
        let p = DyadicPoly::from_i64(&[0, 0, 1]);
        assert_eq!(extend_plus(&p, 2), rp(&[(1, 64), (-5, 16), (25, 16)]));
    }

    #[test]
    fn reverse_shift_examples() {
        // x - 1/2 with n = 1: 1/2 - x/2
        assert_eq!(reverse_shift(&rp(&[(-1, 2), (1, 1)]), 1), rp(&[(1, 2), (-1, 2)]));
        // x^2 - 1/4 with n = 2: 3/4 - x/2 - x^2/4
        assert_eq!(
            reverse_shift(&rp(&[(-1, 4), (0, 1), (1, 1)]), 2),
            rp(&[(3, 4), (-1, 2), (-1, 4)])
        );
        // padding: constant 1 with n = 2 gives (1 + x)^2
        assert_eq!(reverse_shift(&rp(&[(1, 1)]), 2), rp(&[(1, 1), (2, 1), (1, 1)]));
        let d = reverse_shift_dyadic(&DyadicPoly::from_i64(&[1]), 2);
        assert_eq!(d, DyadicPoly::from_i64(&[1, 2, 1]));
    }

    #[test]
    fn sign_var_examples() {
        assert_eq!(sign_var(&[q(1, 1), q(-1, 1), q(1, 1)]), 2);
        assert_eq!(sign_var(&[q(1, 1), q(0, 1), q(-1, 1)]), 1);
        assert_eq!(sign_var(&[q(0, 1), q(0, 1)]), 0);
        // g(1/4 + x/4) for the introductory example polynomial
        assert_eq!(sign_var(&[q(-1583, 8192), q(3393, 4096), q(11585, 8192)]), 1);
    }

    #[test]
    fn fig1_quarter_shift_coefficients() {
        // g = 11585/512 x^2 - 8x + 201/512; g(1/4 + x/4)
        let g = rp(&[(201, 512), (-8, 1), (11585, 512)]);
        let h = g.taylor_shift(&q(1, 4)).scale_arg(&q(1, 4));
        assert_eq!(h, rp(&[(-1583, 8192), (3393, 4096), (11585, 8192)]));
    }

    #[test]
    fn threshold_examples() {
        let eps = q(1, 4);
        assert_eq!(
            threshold_sign_class(&rp(&[(1, 1), (-1, 8), (2, 1)]), &eps),
            SignClass::AllAboveNegEps
        );
        assert_eq!(
            threshold_sign_class(&rp(&[(-1, 1), (1, 8), (-2, 1)]), &eps),
            SignClass::AllBelowPosEps
        );
        assert_eq!(
            threshold_sign_class(&rp(&[(1, 1), (-1, 1)]), &eps),
            SignClass::Mixed
        );
        // both one-sided conditions: the first wins
        assert_eq!(
            threshold_sign_class(&rp(&[(1, 8), (-1, 8)]), &eps),
            SignClass::AllAboveNegEps
        );
    }

    #[test]
    fn t_test_examples() {
        // p = 1 + x/8 at 0 with r = 1, K = 3/2: 1 - 3/16
        let p = rp(&[(1, 1), (1, 8)]);
        assert_eq!(t_test_value(&p, &q(0, 1), &q(1, 1), &q(3, 2)), q(13, 16));
        let p = rp(&[(0, 1), (1, 1)]);
        assert_eq!(t_test_value(&p, &q(0, 1), &q(1, 1), &q(3, 2)), q(-3, 2));
        assert_eq!(
            t_test_at_zero(&DyadicPoly::from_i64(&[8, 1]), 1).to_rational(),
            q(5, 1)
        );
    }

    #[test]
    fn eval_example() {
        let p = rp(&[(-25, 128), (53, 64), (181, 128)]);
        assert_eq!(p.eval(&q(0, 1)), q(-25, 128));
    }

    #[test]
    fn round_and_derivative() {
        let p = DyadicPoly::from_dyadics(&[Dyadic::from_parts(-11, -5), Dyadic::from_parts(3, 0)]);
        let r = p.round(2);
        assert_eq!(r.coeff(0), Dyadic::from_parts(-1, -2));
        assert_eq!(r.coeff(1), Dyadic::from_int(3));
        assert_eq!(p.derivative(), DyadicPoly::from_i64(&[3]));
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = rp(&[(1, 1), (2, 1), (3, 1), (4, 1)]);
        let b = rp(&[(1, 2), (1, 1)]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq.mul(&b).add(&r).trim(), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }
}
