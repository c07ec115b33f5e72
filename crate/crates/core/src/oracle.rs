//! Exact reference algorithms for rational inputs: Sturm sequences, exact
//! Descartes subdivision (plain and modified), certified complex root
//! enclosures with the separation quantities derived from them, and
//! instance generators.
//!
//! Everything here is slow and exact. It exists to check the isolator, not to
//! compete with it.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffstream::{tau_bound, CoefficientOracle};
use crate::dyadic::{ceil_log2, scale_pow2, Rational};
use crate::isolator::NodeInterval;
pub use crate::polyops::RationalPoly;
use crate::polyops::{reverse_shift, sign_var, t_test_value};
use crate::rootbound::compute_gamma;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("interval endpoint {0} is a root")]
    EndpointIsRoot(Rational),
    #[error("empty interval")]
    EmptyInterval,
    #[error("root refinement exceeded {0} bits")]
    RefinementBudgetExceeded(u64),
    #[error("polynomial must have degree at least 2")]
    DegreeTooSmall,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Integer coefficients with content 1 and the sign of `p` preserved.
pub fn primitive_part(p: &RationalPoly) -> Vec<BigInt> {
    let p = p.clone().trim();
    let l = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn prim(p: &RationalPoly) -> RationalPoly {
    RationalPoly::from_bigints(&primitive_part(p))
}

/// Monic gcd.
pub fn poly_gcd(a: &RationalPoly, b: &RationalPoly) -> RationalPoly {
    let mut a = prim(a);
    let mut b = prim(b);
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = prim(&r);
    }
    if a.is_zero() {
        a
    } else {
        a.monic()
    }
}

pub fn is_square_free(p: &RationalPoly) -> bool {
    poly_gcd(p, &p.derivative()).degree() == Some(0)
}

/// Sturm sequence with positive rescaling of every member.
#[derive(Clone, Debug)]
pub struct SturmChain {
    pub polys: Vec<RationalPoly>,
}

fn sign_of(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl SturmChain {
    pub fn new(p: &RationalPoly) -> Self {
        let p0 = prim(p);
        let mut polys = vec![p0.clone()];
        let d = prim(&p0.derivative());
        if d.is_zero() {
            return SturmChain { polys };
        }
        polys.push(d);
        loop {
            let k = polys.len();
            let (_, r) = polys[k - 2].div_rem(&polys[k - 1]);
            if r.is_zero() {
                break;
            }
            polys.push(prim(&r.scale(&-Rational::one())));
        }
        SturmChain { polys }
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        let s: Vec<Rational> = self.polys.iter().map(|p| p.eval(x)).collect();
        sign_var(&s)
    }

    fn variations_at_infinity(&self, negative: bool) -> usize {
        let s: Vec<BigInt> = self
            .polys
            .iter()
            .map(|p| {
                let d = p.degree().unwrap_or(0);
                let lc = p.leading().numer().signum();
                if negative && d % 2 == 1 {
                    -lc
                } else {
                    lc
                }
            })
            .collect();
        sign_var(&s)
    }

    /// Distinct real roots of `p`.
    pub fn total(&self) -> usize {
        self.variations_at_infinity(true) - self.variations_at_infinity(false)
    }
}

/// Number of distinct real roots in the open interval `(a, b)`.
pub fn sturm_count(p: &RationalPoly, a: &Rational, b: &Rational) -> Result<usize, OracleError> {
    if a >= b {
        return Err(OracleError::EmptyInterval);
    }
    for x in [a, b] {
        if p.eval(x).is_zero() {
            return Err(OracleError::EndpointIsRoot(x.clone()));
        }
    }
    let c = SturmChain::new(p);
    Ok(c.variations_at(a) - c.variations_at(b))
}

/// Number of distinct real roots.
pub fn real_root_count(p: &RationalPoly) -> usize {
    SturmChain::new(p).total()
}

/// `2^k` strictly above every root modulus.
pub fn cauchy_bound_pow2(p: &RationalPoly) -> Rational {
    let p = p.clone().trim();
    let lc = p.leading().abs();
    let m = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| c.abs() / &lc)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    scale_pow2(&Rational::one(), ceil_log2(&(m + Rational::one())) + 1)
}

/// Isolating intervals `(lo, hi)` for all real roots, sorted, with
/// `p(lo), p(hi) != 0`.
pub fn sturm_isolate(p: &RationalPoly) -> Vec<(Rational, Rational)> {
    let chain = SturmChain::new(p);
    let b = cauchy_bound_pow2(p);
    let a = -b.clone();
    let va = chain.variations_at(&a);
    let vb = chain.variations_at(&b);
    let mut out = Vec::new();
    let mut stack = vec![(a, b, va, vb)];
    while let Some((lo, hi, vl, vh)) = stack.pop() {
        let c = vl - vh;
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push((lo, hi));
            continue;
        }
        let w = &hi - &lo;
        let m = [q(1, 2), q(3, 8), q(5, 8), q(7, 16)]
            .iter()
            .map(|t| &lo + &w * t)
            .find(|m| !p.eval(m).is_zero())
            .expect("finitely many roots");
        let vm = chain.variations_at(&m);
        stack.push((m.clone(), hi, vm, vh));
        stack.push((lo, m, vl, vm));
    }
    out.sort();
    out
}

/// Shrink an isolating interval of a simple root below width `2^-bits`.
pub fn refine_root(p: &RationalPoly, lo: &Rational, hi: &Rational, bits: i64) -> (Rational, Rational) {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let sl = sign_of(&p.eval(&lo));
    let target = scale_pow2(&Rational::one(), -bits);
    while &hi - &lo > target {
        let m = (&lo + &hi) / Rational::from_integer(2.into());
        let sm = sign_of(&p.eval(&m));
        if sm == 0 {
            return (m.clone(), m);
        }
        if sm == sl {
            lo = m;
        } else {
            hi = m;
        }
    }
    (lo, hi)
}

/// Sturm-based isolation refined to width `2^-bits`; closed intervals,
/// possibly degenerate when a root was hit exactly.
pub fn real_roots(p: &RationalPoly, bits: i64) -> Vec<(Rational, Rational)> {
    sturm_isolate(p)
        .iter()
        .map(|(lo, hi)| refine_root(p, lo, hi, bits))
        .collect()
}

/// Recursion tree of an exact subdivision run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactTrace {
    pub tree_size: u64,
    pub tree_depth: u32,
    /// Bisected nodes in processing order.
    pub bisected: Vec<NodeInterval>,
}

impl ExactTrace {
    fn visit(&mut self, node: &NodeInterval) {
        self.tree_size += 1;
        self.tree_depth = self.tree_depth.max(node.depth);
    }
}

#[derive(Clone, Debug)]
pub struct ExactIsolation {
    /// Sorted; open intervals, or closed points `(m, m)` for roots hit exactly.
    pub intervals: Vec<(Rational, Rational)>,
    pub trace: ExactTrace,
}

fn nominal_degree(p: &RationalPoly) -> usize {
    p.coeffs.len().saturating_sub(1)
}

fn var_rev(fi: &RationalPoly, n: usize) -> usize {
    sign_var(&reverse_shift(fi, n).coeffs)
}

/// Descartes bisection on `(-1/2, 1/2)` with exact arithmetic.
pub fn vca_exact(p: &RationalPoly) -> ExactIsolation {
    let p = p.clone().trim();
    let n = nominal_degree(&p);
    let half = q(1, 2);
    let mut out = Vec::new();
    let mut trace = ExactTrace::default();
    let mut stack = vec![(NodeInterval::root(), p.taylor_shift(&-half.clone()))];
    while let Some((node, fi)) = stack.pop() {
        trace.visit(&node);
        match var_rev(&fi, n) {
            0 => {}
            1 => out.push((node.lo().to_rational(), node.hi().to_rational())),
            _ => {
                if fi.eval(&half).is_zero() {
                    let m = (node.lo().to_rational() + node.hi().to_rational()) * &half;
                    out.push((m.clone(), m));
                }
                trace.bisected.push(node.clone());
                let fl = fi.scale_arg(&half);
                let fr = fl.taylor_shift(&Rational::one());
                stack.push((node.right(), fr));
                stack.push((node.left(), fl));
            }
        }
    }
    out.sort();
    ExactIsolation { intervals: out, trace }
}

/// Modified Descartes method in exact arithmetic; records the extended
/// intervals `I⁺`.
pub fn dcm_exact(p: &RationalPoly) -> ExactIsolation {
    let p = p.clone().trim();
    let n = nominal_degree(&p);
    let nq = Rational::from_integer(n.into());
    let shift = -(Rational::one() / (&nq * Rational::from_integer(4.into())));
    let stretch = Rational::one() + Rational::one() / (&nq * Rational::from_integer(2.into()));
    let half = q(1, 2);
    let two = Rational::from_integer(2.into());
    let k = q(3, 2);
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    let mut trace = ExactTrace::default();
    let mut stack = vec![(NodeInterval::root(), p.taylor_shift(&-half.clone()))];
    while let Some((node, fi)) = stack.pop() {
        trace.visit(&node);
        let fplus = fi.taylor_shift(&shift).scale_arg(&stretch);
        if var_rev(&fplus, n) == 0 {
            continue;
        }
        let t = t_test_value(&fi.derivative(), &Rational::zero(), &two, &k);
        if t.is_positive() {
            let s = fplus.eval(&Rational::zero()) * fplus.eval(&Rational::one());
            let (c, d) = node.plus(n);
            if s.is_negative() && !out.iter().any(|(a, b)| *a < d && c < *b) {
                out.push((c, d));
            }
        } else {
            trace.bisected.push(node.clone());
            let fl = fi.scale_arg(&half);
            let fr = fl.taylor_shift(&Rational::one());
            stack.push((node.right(), fr));
            stack.push((node.left(), fl));
        }
    }
    out.sort();
    ExactIsolation { intervals: out, trace }
}

/// `(f, Γ, τ̂)` with `f(x) = F(2^(Γ+1) x) / A_n` computed exactly, using the
/// same `Γ` and `τ̂` as the isolator.
pub fn scaled_exact(big_f: &RationalPoly) -> (RationalPoly, i64, i64) {
    let o = CoefficientOracle::from_rational_poly(big_f);
    let tau = tau_bound(&o).expect("nonzero leading coefficient");
    let gamma = compute_gamma(&o, tau);
    let f = big_f
        .clone()
        .trim()
        .scale_arg_pow2(gamma + 1)
        .scale(&(Rational::one() / big_f.leading()));
    (f, gamma, tau)
}

/// `x^n - 2 (a x - 1)^2`.
pub fn mignotte(n: usize, a: i64) -> RationalPoly {
    assert!(n >= 4 && n % 2 == 0, "mignotte needs an even degree >= 4");
    let a = BigInt::from(a);
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    c[2] -= BigInt::from(2) * &a * &a;
    c[1] += BigInt::from(4) * &a;
    c[0] -= BigInt::from(2);
    RationalPoly::from_bigints(&c)
}

/// Square-free integer polynomial of degree `n` with coefficients in
/// `(-2^tau, 2^tau)`, reproducible from `seed`.
pub fn random_squarefree(n: usize, tau: u32, seed: u64) -> RationalPoly {
    assert!(n >= 1 && (1..63).contains(&tau));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = (1i64 << tau) - 1;
    loop {
        let mut c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-m..=m)).collect();
        while c[n] == 0 {
            c[n] = rng.gen_range(-m..=m);
        }
        let p = RationalPoly::from_i64(&c);
        if is_square_free(&p) {
            return p;
        }
    }
}

type GInt = Complex<BigInt>;

/// Certified disc `|z - center| <= radius` holding exactly one root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDisc {
    pub center_re: Rational,
    pub center_im: Rational,
    pub radius: Rational,
    pub is_real: bool,
}

impl RootDisc {
    /// Real interval `[c - r, c + r]` of a real disc.
    pub fn real_interval(&self) -> (Rational, Rational) {
        (&self.center_re - &self.radius, &self.center_re + &self.radius)
    }
}

/// Certified bounds for the separation quantities of a square-free `f`.
#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub degree: usize,
    /// Real roots first (increasing), then the complex ones.
    pub discs: Vec<RootDisc>,
    /// `σ(z_i, f)` bounds, aligned with `discs`.
    pub sigma: Vec<(Rational, Rational)>,
    /// `σ(z_i, f) |f'(z_i)|` bounds.
    pub sigma_deriv: Vec<(Rational, Rational)>,
    pub sigma_f: (Rational, Rational),
    /// `Σ_f = -Σ log2 σ_i`.
    pub sigma_sum: (f64, f64),
    pub max_modulus: (Rational, Rational),
    /// `log2` of the largest root modulus.
    pub gamma_f: (f64, f64),
    /// `μ(f, 64 n^2)`.
    pub mu: (Rational, Rational),
    pub rho_f: (i64, i64),
    pub rho_f_max: (i64, i64),
    /// Fixed-point precision at which the enclosures were certified.
    pub working_bits: u64,
}

impl SeparationReport {
    /// `μ(f, t)` bounds.
    pub fn mu_at(&self, t: &Rational) -> (Rational, Rational) {
        let n = Rational::from_integer(self.degree.into());
        let den = t * Rational::from_integer(8.into()) * &n * &n;
        let lo = self.sigma_deriv.iter().map(|b| b.0.clone()).min().unwrap();
        let hi = self.sigma_deriv.iter().map(|b| b.1.clone()).min().unwrap();
        (lo / &den, hi / den)
    }

    pub fn real_discs(&self) -> impl Iterator<Item = (usize, &RootDisc)> {
        self.discs.iter().enumerate().filter(|(_, d)| d.is_real)
    }

    /// Index of the real disc whose center lies in `(lo, hi)`.
    pub fn real_disc_in(&self, lo: &Rational, hi: &Rational) -> Option<usize> {
        self.real_discs()
            .find(|(_, d)| *lo < d.center_re && d.center_re < *hi)
            .map(|(i, _)| i)
    }
}

pub fn log2_rational(x: &Rational) -> f64 {
    if !x.is_positive() {
        return f64::NEG_INFINITY;
    }
    fn lg(b: &BigInt) -> f64 {
        let bits = b.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (b >> shift as usize).to_f64().unwrap();
        top.log2() + shift as f64
    }
    lg(x.numer()) - lg(x.denom())
}

/// Bounds `lo <= sqrt(x) <= hi` on the grid `2^-s`.
fn sqrt_bounds(x: &Rational, s: u64) -> (Rational, Rational) {
    let scaled = scale_pow2(x, 2 * s as i64);
    let fl = scaled.floor().to_integer();
    let lo = fl.sqrt();
    let hi = scaled.ceil().to_integer().sqrt() + 1;
    let d = BigInt::one() << s as usize;
    (Rational::new(lo, d.clone()), Rational::new(hi, d))
}

fn norm2(z: &GInt) -> BigInt {
    &z.re * &z.re + &z.im * &z.im
}

fn shr(z: &GInt, p: u64) -> GInt {
    GInt::new(&z.re >> p as usize, &z.im >> p as usize)
}

/// Aberth iteration in double precision; rough starting points only.
fn aberth_f64(p: &RationalPoly) -> Vec<Complex<f64>> {
    let c: Vec<f64> = p.monic().to_f64();
    let n = c.len() - 1;
    let r = (0..n)
        .map(|i| c[i].abs().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| Complex::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..800 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (mut v, mut d) = (Complex::new(c[n], 0.0), Complex::new(0.0, 0.0));
            for k in (0..n).rev() {
                d = d * z[i] + v;
                v = v * z[i] + c[k];
            }
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex<f64> = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Layout of the approximations: `real` entries are kept on the real axis,
/// `upper[k]` and its conjugate form a pair.
struct Layout {
    real: usize,
    pairs: usize,
}

fn to_fixed(x: f64, p: u64) -> BigInt {
    BigInt::from_f64(x * 2f64.powi(64)).unwrap_or_default() << (p - 64) as usize
}

/// Full root vector: real ones, then upper half, then conjugates.
fn expand(z: &[GInt], l: &Layout) -> Vec<GInt> {
    let mut all = z.to_vec();
    for k in 0..l.pairs {
        all.push(z[l.real + k].conj());
    }
    all
}

/// One Durand-Kerner step in fixed point with scale `2^p`; returns the
/// largest correction in the same scale, or `None` on a vanishing product.
fn dk_step(q: &[BigInt], z: &mut [GInt], l: &Layout, p: u64) -> Option<BigInt> {
    let n = q.len() - 1;
    let all = expand(z, l);
    let mut max = BigInt::zero();
    let mut w = Vec::with_capacity(z.len());
    for (i, zi) in z.iter().enumerate() {
        let mut v = GInt::new(&q[n] << p as usize, BigInt::zero());
        for k in (0..n).rev() {
            v = shr(&(&v * zi), p) + GInt::new(&q[k] << p as usize, BigInt::zero());
        }
        let mut d = GInt::new(&q[n] << p as usize, BigInt::zero());
        for (j, zj) in all.iter().enumerate() {
            if j != i {
                d = shr(&(&d * (zi - zj)), p);
            }
        }
        let den = norm2(&d);
        if den.is_zero() {
            return None;
        }
        let num = &v * d.conj();
        let mut wi = GInt::new((&num.re << p as usize) / &den, (&num.im << p as usize) / &den);
        if i < l.real {
            wi.im = BigInt::zero();
        }
        max = max.max(wi.re.abs().max(wi.im.abs()));
        w.push(wi);
    }
    for (zi, wi) in z.iter_mut().zip(w) {
        *zi -= wi;
    }
    Some(max)
}

struct Certified {
    centers: Vec<(Rational, Rational)>,
    radii: Vec<Rational>,
    dist: Vec<Vec<(Rational, Rational)>>,
}

/// Gershgorin discs of the Weierstrass matrix, evaluated exactly.
fn certify_discs(q: &[BigInt], z: &[GInt], p: u64) -> Option<Certified> {
    let n = q.len() - 1;
    let s = 2 * p + 64;
    let scale = BigInt::one() << p as usize;
    let mut centers: Vec<(BigInt, BigInt, BigInt)> = Vec::with_capacity(n);
    let mut radii = Vec::with_capacity(n);
    for (i, zi) in z.iter().enumerate() {
        let mut v = GInt::new(q[n].clone(), BigInt::zero());
        let mut pw = BigInt::one();
        for k in (0..n).rev() {
            pw <<= p as usize;
            v = &v * zi + GInt::new(&q[k] * &pw, BigInt::zero());
        }
        let mut d = GInt::new(q[n].clone(), BigInt::zero());
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                d = &d * (zi - zj);
            }
        }
        let dn = norm2(&d);
        if dn.is_zero() {
            return None;
        }
        // c = z - v conj(d) / (|d|^2 2^p), all over |d|^2 2^p
        let den = &dn * &scale;
        let vd = &v * d.conj();
        centers.push((&zi.re * &dn - &vd.re, &zi.im * &dn - &vd.im, den.clone()));
        let w2 = Rational::new(norm2(&v), &dn * &scale * &scale);
        let r = sqrt_bounds(&w2, s).1 * Rational::from_integer((n - 1).into());
        radii.push(r);
    }
    let mut dist = vec![vec![(Rational::zero(), Rational::zero()); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&centers[i], &centers[j]);
            let re = &a.0 * &b.2 - &b.0 * &a.2;
            let im = &a.1 * &b.2 - &b.1 * &a.2;
            let dd = &a.2 * &b.2;
            let d2 = Rational::new(&re * &re + &im * &im, &dd * &dd);
            let bounds = sqrt_bounds(&d2, s);
            if bounds.0 <= &radii[i] + &radii[j] {
                return None;
            }
            dist[i][j] = bounds.clone();
            dist[j][i] = bounds;
        }
    }
    Some(Certified {
        centers: centers
            .into_iter()
            .map(|(re, im, d)| (Rational::new(re, d.clone()), Rational::new(im, d)))
            .collect(),
        radii,
        dist,
    })
}

/// Certified root enclosures refined until every radius is below
/// `2^-bits σ_i`, with the separation quantities derived from them.
pub fn separation_report(p: &RationalPoly, bits: u32) -> Result<SeparationReport, OracleError> {
    let p = p.clone().trim();
    let n = p.degree().unwrap_or(0);
    if n < 2 {
        return Err(OracleError::DegreeTooSmall);
    }
    let qi = primitive_part(&p);
    let m = real_root_count(&p);
    let approx = aberth_f64(&p);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| approx[a].im.abs().partial_cmp(&approx[b].im.abs()).unwrap());
    let layout = Layout {
        real: m,
        pairs: (n - m) / 2,
    };
    let mut uppers: Vec<Complex<f64>> = order[m..].iter().map(|&i| approx[i]).collect();
    uppers.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap());
    for u in uppers.iter_mut() {
        u.im = u.im.max(1e-12);
    }
    let mut start: Vec<Complex<f64>> = order[..m].iter().map(|&i| Complex::new(approx[i].re, 0.0)).collect();
    start.extend(uppers.into_iter().take(layout.pairs));

    let mut prec: u64 = 64;
    let mut z: Vec<GInt> = start
        .iter()
        .map(|c| GInt::new(to_fixed(c.re, prec), to_fixed(c.im, prec)))
        .collect();
    const BUDGET: u64 = 1 << 15;
    loop {
        let mut last: Option<BigInt> = None;
        for _ in 0..200 {
            match dk_step(&qi, &mut z, &layout, prec) {
                None => break,
                Some(w) => {
                    let stalled = last.as_ref().is_some_and(|l| w >= *l);
                    let small = w.bits() < 8;
                    last = Some(w);
                    if small || stalled {
                        break;
                    }
                }
            }
        }
        let full = expand(&z, &layout);
        if let Some(cert) = certify_discs(&qi, &full, prec) {
            let real_ok = (m..n).all(|i| cert.centers[i].1.abs() > cert.radii[i]);
            if real_ok {
                let rep = build_report(&p, n, m, cert, prec);
                let fine = rep
                    .discs
                    .iter()
                    .zip(&rep.sigma)
                    .all(|(d, s)| scale_pow2(&d.radius, bits as i64) <= s.0);
                if fine {
                    return Ok(rep);
                }
            }
        }
        if prec >= BUDGET {
            return Err(OracleError::RefinementBudgetExceeded(prec));
        }
        for zi in z.iter_mut() {
            zi.re <<= prec as usize;
            zi.im <<= prec as usize;
        }
        prec *= 2;
    }
}

fn build_report(p: &RationalPoly, n: usize, m: usize, cert: Certified, prec: u64) -> SeparationReport {
    let an = p.leading().abs();
    let mut sigma = Vec::with_capacity(n);
    let mut sigma_deriv = Vec::with_capacity(n);
    for i in 0..n {
        let mut s_lo: Option<Rational> = None;
        let mut s_hi: Option<Rational> = None;
        let mut d_lo = an.clone();
        let mut d_hi = an.clone();
        for j in (0..n).filter(|&j| j != i) {
            let rr = &cert.radii[i] + &cert.radii[j];
            let lo = &cert.dist[i][j].0 - &rr;
            let hi = &cert.dist[i][j].1 + &rr;
            d_lo *= &lo;
            d_hi *= &hi;
            s_lo = Some(s_lo.map_or(lo.clone(), |s| s.min(lo)));
            s_hi = Some(s_hi.map_or(hi.clone(), |s| s.min(hi)));
        }
        let (s_lo, s_hi) = (s_lo.unwrap(), s_hi.unwrap());
        sigma_deriv.push((&s_lo * d_lo, &s_hi * d_hi));
        sigma.push((s_lo, s_hi));
    }
    let mut discs: Vec<RootDisc> = (0..n)
        .map(|i| RootDisc {
            center_re: cert.centers[i].0.clone(),
            center_im: cert.centers[i].1.clone(),
            radius: cert.radii[i].clone(),
            is_real: i < m,
        })
        .collect();
    // Sort real roots by position; keep the remaining order.
    let mut idx: Vec<usize> = (0..n).collect();
    idx[..m].sort_by(|&a, &b| discs[a].center_re.cmp(&discs[b].center_re));
    discs = idx.iter().map(|&i| discs[i].clone()).collect();
    let sigma: Vec<_> = idx.iter().map(|&i| sigma[i].clone()).collect();
    let sigma_deriv: Vec<_> = idx.iter().map(|&i| sigma_deriv[i].clone()).collect();

    let sigma_f = (
        sigma.iter().map(|s| s.0.clone()).min().unwrap(),
        sigma.iter().map(|s| s.1.clone()).min().unwrap(),
    );
    let sigma_sum = (
        -sigma.iter().map(|s| log2_rational(&s.1)).sum::<f64>(),
        -sigma.iter().map(|s| log2_rational(&s.0)).sum::<f64>(),
    );
    let s = 2 * prec + 64;
    let mods: Vec<(Rational, Rational)> = discs
        .iter()
        .map(|d| {
            let b = sqrt_bounds(&(&d.center_re * &d.center_re + &d.center_im * &d.center_im), s);
            let lo = &b.0 - &d.radius;
            (if lo.is_negative() { Rational::zero() } else { lo }, b.1 + &d.radius)
        })
        .collect();
    let max_modulus = (
        mods.iter().map(|m| m.0.clone()).max().unwrap(),
        mods.iter().map(|m| m.1.clone()).max().unwrap(),
    );
    let gamma_f = (log2_rational(&max_modulus.0), log2_rational(&max_modulus.1));
    let mut rep = SeparationReport {
        degree: n,
        discs,
        sigma,
        sigma_deriv,
        sigma_f,
        sigma_sum,
        max_modulus,
        gamma_f,
        mu: (Rational::zero(), Rational::zero()),
        rho_f: (0, 0),
        rho_f_max: (0, 0),
        working_bits: prec,
    };
    let t = Rational::from_integer((64 * n * n).into());
    rep.mu = rep.mu_at(&t);
    let rho_of = |mu: &Rational| if mu.is_positive() { ceil_log2(&(Rational::one() / mu)) } else { i64::MAX / 4 };
    rep.rho_f = (rho_of(&rep.mu.1), rho_of(&rep.mu.0));
    let cube = |s: &Rational| s * s * s;
    let inv_log = |s: &Rational| if s.is_positive() { ceil_log2(&(Rational::one() / cube(s))) } else { i64::MAX / 4 };
    let sixteen_n = 16 * n as i64;
    rep.rho_f_max = (
        rep.rho_f.0 + inv_log(&rep.sigma_f.1) + sixteen_n,
        rep.rho_f.1 + inv_log(&rep.sigma_f.0) + sixteen_n,
    );
    rep
}
