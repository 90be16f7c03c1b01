//! Dense univariate polynomials over [`CycNum`].
//!
//! Coefficients are stored in ascending degree order; the vector is empty for
//! the zero polynomial and the last entry is nonzero otherwise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::CycNum;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<CycNum>,
}

impl Poly {
    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(CycNum::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycNum::one())
    }

    pub fn constant(c: CycNum) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate of the chart.
    pub fn var() -> Self {
        Self::monomial(CycNum::one(), 1)
    }

    pub fn monomial(c: CycNum, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![CycNum::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<CycNum>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&k| CycNum::from_int(k)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[CycNum]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| &acc * &Self::from_coeffs(vec![-r, CycNum::one()]))
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CycNum {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycNum> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Multiply by var^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![CycNum::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &CycNum::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        self.coeffs.iter().rev().fold(CycNum::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex())
    }

    /// Coefficients under the principal embedding.
    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(CycNum::to_complex).collect()
    }

    /// Apply the field automorphism ζ ↦ ζ^k coefficientwise.
    pub fn galois(&self, k: u32) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.galois(k)).collect())
    }

    /// p(q(x)) by Horner's scheme.
    pub fn compose(&self, q: &Poly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    /// p(a·x + b).
    pub fn compose_affine(&self, a: &CycNum, b: &CycNum) -> Self {
        self.compose(&Self::from_coeffs(vec![b.clone(), a.clone()]))
    }

    /// var^deg · p(1/var) with deg ≥ degree(p).
    pub fn reverse(&self, deg: usize) -> Self {
        let mut c = vec![CycNum::zero(); deg + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            c[deg - k] = a.clone();
        }
        Self::from_coeffs(c)
    }

    /// Substitute var ↦ var² (used to move between the x1 and w charts).
    pub fn inflate2(&self) -> Self {
        let mut c = vec![CycNum::zero(); 2 * self.coeffs.len()];
        for (k, a) in self.coeffs.iter().enumerate() {
            c[2 * k] = a.clone();
        }
        Self::from_coeffs(c)
    }

    /// Inverse of [`Poly::inflate2`]; `None` if some odd coefficient is nonzero.
    pub fn deflate2(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![CycNum::zero(); r.len() - dd];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = &r[r.len() - 1] * &lead_inv;
            if !f.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate().take(dd) {
                    r[k + j] -= &(&f * c);
                }
            }
            q[k] = f;
            r.pop();
        }
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.divrem(&y).expect("nonzero divisor");
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Self::zero();
        }
        let g = Self::gcd(a, b);
        (a * &b.exact_div(&g).expect("gcd divides")).monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return Self::one();
        }
        let g = Self::gcd(self, &self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Multiplicity of `root` as a zero of `self` (0 if not a root).
    pub fn root_multiplicity(&self, root: &CycNum) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::from_coeffs(vec![-root, CycNum::one()]);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.divrem(&lin).expect("linear divisor");
            if !r.is_zero() {
                return m;
            }
            m += 1;
            p = q;
        }
    }

    /// Canonical text form: `[c0; c1; …]` with each coefficient in the
    /// `CycNum` text format.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        format!("[{}]", body.join("; "))
    }

    /// Human form in the variable `x`, highest degree first, coefficients in
    /// the radical basis.
    pub fn pretty(&self, x: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mut text = c.pretty();
            // a lone negative atom is folded into the separator
            let negative = !text.contains(' ') && text.starts_with('−');
            if negative {
                text = text.trim_start_matches('−').to_string();
            }
            let coef = if text.contains(' ') { format!("({text})") } else { text };
            let term = match k {
                0 => coef,
                _ => {
                    let mono = if k == 1 { x.to_string() } else { format!("{x}^{k}") };
                    if coef == "1" {
                        mono
                    } else {
                        format!("{coef}·{mono}")
                    }
                }
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push('−'),
                (true, false) => {}
                (false, true) => out.push_str(" − "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({})", c.pretty()),
                1 => format!("({})·x", c.pretty()),
                _ => format!("({})·x^{k}", c.pretty()),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut c = long.coeffs.clone();
        for (k, a) in short.coeffs.iter().enumerate() {
            c[k] += a;
        }
        Poly::from_coeffs(c)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![CycNum::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(c)
    }
}
