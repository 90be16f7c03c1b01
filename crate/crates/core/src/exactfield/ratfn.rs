//! Rational functions over [`CycNum`] in one chart variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use super::{CycNum, Poly};
use crate::error::{Error, ParseError, Result};

/// Chart variable of a rational function or operator, together with the
/// derivation used on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Variable x1, derivation d/dx1.
    X1,
    /// Variable w with w² = x1, derivation δ = (1/(2w))·d/dw (i.e. d/dx1).
    W,
    /// Local variable of an affine substitution, derivation d/du.
    U,
    /// Inverted variable t = 1/x at infinity, derivation d/dt.
    T,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::X1 => "x1",
            Chart::W => "w",
            Chart::U => "u",
            Chart::T => "t",
        }
    }

    pub fn from_name(s: &str) -> Option<Chart> {
        match s {
            "x1" => Some(Chart::X1),
            "w" => Some(Chart::W),
            "u" => Some(Chart::U),
            "t" => Some(Chart::T),
            _ => None,
        }
    }

    /// True when the derivation is the plain derivative in the chart variable.
    pub fn is_plain(self) -> bool {
        !matches!(self, Chart::W)
    }

    /// Apply the chart derivation.
    pub fn derive(self, f: &RatFn) -> RatFn {
        let d = f.derivative();
        match self {
            Chart::W => {
                // (1/(2w))·d/dw
                let two_w = RatFn::from_poly(Poly::monomial(CycNum::from_int(2), 1));
                d.div(&two_w).expect("2w is nonzero")
            }
            _ => d,
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Canonical rational function: gcd(num, den) = 1, den monic, zero is 0/1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl Default for RatFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let lc = d.leading().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFn { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(CycNum::one())
    }

    pub fn constant(c: CycNum) -> Self {
        RatFn {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(CycNum::from_int(n))
    }

    /// The chart variable itself.
    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value, if this is a constant function.
    pub fn as_constant(&self) -> Option<CycNum> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        Self::reduce(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFn) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Plain derivative d/dvar (quotient rule).
    pub fn derivative(&self) -> Self {
        if self.num.is_constant() && self.den.is_one() {
            return Self::zero();
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(n, &self.den * &self.den)
    }

    pub fn eval(&self, x: &CycNum) -> Result<CycNum> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::SingularEvaluation(format!("pole at {}", x.pretty())));
        }
        self.num.eval(x).checked_div(&d)
    }

    pub fn eval_complex(&self, x: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(x);
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularEvaluation(format!("pole at {x}")));
        }
        Ok(self.num.eval_complex(x) / d)
    }

    /// f(a·u + b) as a function of u.
    pub fn compose_affine(&self, a: &CycNum, b: &CycNum) -> Self {
        Self::reduce(self.num.compose_affine(a, b), self.den.compose_affine(a, b))
    }

    /// f(1/t) as a function of t.
    pub fn compose_inverse(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let m = dn.max(dd);
        Self::reduce(self.num.reverse(m), self.den.reverse(m))
    }

    /// Substitute var ↦ var² (x1 ↦ w²).
    pub fn inflate2(&self) -> Self {
        Self::reduce(self.num.inflate2(), self.den.inflate2())
    }

    /// Inverse of [`RatFn::inflate2`]; `None` unless f is even in the variable.
    pub fn deflate2(&self) -> Option<Self> {
        Some(Self::reduce(self.num.deflate2()?, self.den.deflate2()?))
    }

    /// True iff f(−v) = f(v).
    pub fn is_even(&self) -> bool {
        self.deflate2().is_some()
    }

    /// Laurent data at var = 0: (valuation, leading coefficient).
    pub fn laurent_leading_at_zero(&self) -> Option<(i64, CycNum)> {
        let vn = self.num.valuation()?;
        let vd = self.den.valuation().expect("nonzero denominator");
        let c = self.num.coeffs()[vn]
            .checked_div(&self.den.coeffs()[vd])
            .expect("nonzero");
        Some((vn as i64 - vd as i64, c))
    }

    pub fn galois(&self, k: u32) -> Self {
        Self::reduce(self.num.galois(k), self.den.galois(k))
    }

    /// Canonical text: `<num> ÷ <den>`, each polynomial as `[c0; c1; …]`.
    pub fn to_text(&self) -> String {
        format!("{} ÷ {}", self.num.to_text(), self.den.to_text())
    }

    pub fn pretty(&self, x: &str) -> String {
        if self.den.is_one() {
            self.num.pretty(x)
        } else {
            format!("({}) / ({})", self.num.pretty(x), self.den.pretty(x))
        }
    }
}

fn parse_poly(s: &str, col0: usize) -> std::result::Result<Poly, ParseError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(1, col0 + lead, "polynomial must be enclosed in [ ]"))?;
    if inner.trim().is_empty() {
        return Ok(Poly::zero());
    }
    let mut coeffs = Vec::new();
    let mut col = col0 + lead + 1;
    for part in inner.split(';') {
        let c: CycNum = part
            .trim()
            .parse()
            .map_err(|e: ParseError| ParseError::new(1, col + e.column - 1, e.message))?;
        coeffs.push(c);
        col += part.chars().count() + 1;
    }
    Ok(Poly::from_coeffs(coeffs))
}

impl FromStr for RatFn {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let (n, d) = s
            .split_once('÷')
            .ok_or_else(|| ParseError::new(1, 1, "expected `num ÷ den`"))?;
        let num = parse_poly(n, 1)?;
        let den = parse_poly(d, n.chars().count() + 2)?;
        if den.is_zero() {
            return Err(ParseError::new(1, n.chars().count() + 2, "zero denominator"));
        }
        Ok(RatFn::reduce(num, den))
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFn::reduce(&self.num + &o.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &o.den);
        let a = self.den.exact_div(&g).expect("gcd divides");
        let b = o.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&o.num * &a);
        RatFn::reduce(num, &(&a * &b) * &g)
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, o: &RatFn) -> RatFn {
        self + &(-o)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        // cross-cancel before multiplying to keep degrees down
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = o.den.exact_div(&g1).expect("gcd divides");
        let n2 = o.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        RatFn::reduce(&n1 * &n2, &d1 * &d2)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, o: RatFn) -> RatFn {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
