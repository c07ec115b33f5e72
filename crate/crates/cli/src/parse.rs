//! Polynomial expressions over `x` with closed-form real coefficients.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := number | 'x' | 'pi' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Division is accepted only by a rational constant, and `sqrt` only of a
//! non-negative rational constant.

use std::fmt;

use bitroot::coeffstream::oracle_sqrt;
use bitroot::dyadic::{floor_log2, scale_pow2, Dyadic};
use bitroot::{CoefficientOracle, Rational, RealConst};
use num_traits::{One, Signed, Zero};

const MAX_EXPONENT: u64 = 4096;

/// Bits tried before a leading coefficient is declared zero.
const ZERO_TEST_BITS: i64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Column of the offending character, counting from 1.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parsed polynomial, constant coefficient first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    pub coeffs: Vec<RealConst>,
}

impl PolySpec {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact coefficients when every one of them is rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    /// Oracle for `2^k F` with the smallest `k >= 0` making the leading
    /// coefficient at least 1 in magnitude. The roots are those of `F`.
    pub fn oracle(&self) -> CoefficientOracle {
        let k = self.normalizing_shift();
        let scale = scale_pow2(&Rational::one(), k);
        CoefficientOracle::from_consts(self.coeffs.iter().map(|c| c.clone().scaled(&scale)).collect())
    }

    fn normalizing_shift(&self) -> i64 {
        let lead = CoefficientOracle::from_consts(vec![self.coeffs[self.degree()].clone()]);
        let lower = leading_lower_bound(&lead).expect("checked when parsing");
        (-floor_log2(&lower)).max(0)
    }
}

/// Positive lower bound on `|A|`, or `None` if `A` looks like zero.
fn leading_lower_bound(o: &CoefficientOracle) -> Option<Rational> {
    let mut rho = 16;
    while rho <= ZERO_TEST_BITS {
        let a = o.query(0, rho).abs();
        let eps = Dyadic::pow2(-rho);
        if a > eps {
            return Some((&a - &eps).to_rational());
        }
        rho *= 2;
    }
    None
}

pub fn parse_poly(text: &str) -> Result<PolySpec, ParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        len: text.chars().count(),
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos < p.len {
        return Err(p.error("expected an operator"));
    }
    let coeffs = expr.coeffs;
    let end = p.len + 1;
    if coeffs.len() < 3 {
        return Err(ParseError {
            column: end,
            message: format!("degree {} is below 2", coeffs.len().saturating_sub(1)),
        });
    }
    let spec = PolySpec { coeffs };
    let lead = CoefficientOracle::from_consts(vec![spec.coeffs[spec.degree()].clone()]);
    if leading_lower_bound(&lead).is_none() {
        return Err(ParseError {
            column: end,
            message: "leading coefficient is zero".into(),
        });
    }
    Ok(spec)
}

/// Coefficient list with no trailing rational zeros.
#[derive(Clone, Debug)]
struct Poly {
    coeffs: Vec<RealConst>,
}

fn is_zero(c: &RealConst) -> bool {
    c.as_rational().is_some_and(|q| q.is_zero())
}

impl Poly {
    fn constant(c: RealConst) -> Self {
        Poly { coeffs: vec![c] }.trim()
    }

    fn x() -> Self {
        Poly {
            coeffs: vec![RealConst::int(0), RealConst::int(1)],
        }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(is_zero) {
            self.coeffs.pop();
        }
        self
    }

    fn as_constant(&self) -> Option<RealConst> {
        match self.coeffs.len() {
            0 => Some(RealConst::int(0)),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        self.as_constant().and_then(|c| c.as_rational().cloned())
    }

    fn add(self, o: Poly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = RealConst::int(0);
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero).clone();
                let b = o.coeffs.get(i).unwrap_or(&zero).clone();
                a.add(b)
            })
            .collect();
        Poly { coeffs }.trim()
    }

    fn scale(self, q: &Rational) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| c.scaled(q)).collect(),
        }
        .trim()
    }

    fn mul(&self, o: &Poly) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Poly { coeffs: vec![] };
        }
        let mut out = vec![RealConst::int(0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if is_zero(b) {
                    continue;
                }
                let t = a.clone().mul(b.clone());
                out[i + j] = std::mem::replace(&mut out[i + j], RealConst::int(0)).add(t);
            }
        }
        Poly { coeffs: out }.trim()
    }

    fn pow(&self, k: u64) -> Self {
        let mut acc = Poly::constant(RealConst::int(1));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            column: pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.add(self.term()?.scale(&-Rational::one()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = acc.mul(&rhs);
            } else if self.eat('/') {
                self.skip_ws();
                let at = self.pos;
                let rhs = self.unary()?;
                let d = rhs
                    .as_rational()
                    .ok_or_else(|| self.error_at(at, "division only by a rational constant"))?;
                if d.is_zero() {
                    return Err(self.error_at(at, "division by zero"));
                }
                acc = acc.scale(&d.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.scale(&-Rational::one()));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error_at(at, "expected a non-negative integer exponent"));
        }
        let k: u64 = digits
            .parse()
            .ok()
            .filter(|&k| k <= MAX_EXPONENT)
            .ok_or_else(|| self.error_at(at, format!("exponent above {MAX_EXPONENT}")))?;
        Ok(base.pow(k))
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(c) = self.peek().filter(char::is_ascii_alphanumeric) {
                    name.push(c);
                    self.pos += 1;
                }
                match name.as_str() {
                    "x" => Ok(Poly::x()),
                    "pi" => Ok(Poly::constant(RealConst::Pi)),
                    "sqrt" => {
                        self.expect('(')?;
                        self.skip_ws();
                        let arg_at = self.pos;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        match arg.as_rational() {
                            Some(q) if !q.is_negative() => Ok(Poly::constant(oracle_sqrt(q))),
                            _ => Err(self.error_at(arg_at, "sqrt needs a non-negative rational constant")),
                        }
                    }
                    _ => Err(self.error_at(at, format!("unknown name '{name}'"))),
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Poly, ParseError> {
        let at = self.pos;
        let int = self.digits();
        let mut frac = String::new();
        if self.peek() == Some('.') {
            self.pos += 1;
            frac = self.digits();
        }
        if int.is_empty() && frac.is_empty() {
            return Err(self.error_at(at, "malformed number"));
        }
        let all = format!("{int}{frac}");
        let num: num_bigint::BigInt = all.parse().map_err(|_| self.error_at(at, "malformed number"))?;
        let den = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
        Ok(Poly::constant(RealConst::Rational(Rational::new(num, den))))
    }
}
