//! Local analysis at a point: indicial data and exact formal series checks.

use std::fmt;

use num_complex::Complex64;

use super::DiffOp;
use crate::error::{Error, Result};
use crate::exactfield::roots::{numeric_roots, roots_in_field};
use crate::exactfield::{CycNum, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(CycNum),
    Infinity,
}

impl Point {
    pub fn zero() -> Self {
        Point::Finite(CycNum::zero())
    }

    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            Point::Finite(a) => Some(a.to_complex()),
            Point::Infinity => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(a) => write!(f, "{}", a.pretty()),
            Point::Infinity => write!(f, "∞"),
        }
    }
}

/// Operator in the local variable s (s = x − a, or t = 1/x at ∞) with its
/// coefficients multiplied through to polynomials.
fn local_polys(l: &DiffOp, at: &Point) -> Result<Vec<Poly>> {
    if !l.chart().is_plain() {
        return Err(Error::UnsupportedChart(format!(
            "local analysis needs a plain derivation, got chart {}",
            l.chart()
        )));
    }
    let local = match at {
        Point::Finite(a) => l.affine_subst(&CycNum::one(), &-a, l.chart())?,
        Point::Infinity => l.invert()?,
    };
    let den = local
        .coeffs()
        .iter()
        .fold(Poly::one(), |acc, c| Poly::lcm(&acc, c.den()));
    Ok(local
        .coeffs()
        .iter()
        .map(|c| {
            let (q, r) = (&den * c.num()).divrem(c.den()).expect("nonzero denominator");
            debug_assert!(r.is_zero());
            q
        })
        .collect())
}

/// ρ(ρ − 1)…(ρ − k + 1) as a polynomial in ρ.
pub fn falling_factorial(k: usize) -> Poly {
    (0..k).fold(Poly::one(), |acc, j| {
        &acc * &Poly::from_coeffs(vec![CycNum::from_int(-(j as i64)), CycNum::one()])
    })
}

fn falling_value(x: &CycNum, k: usize) -> CycNum {
    let mut acc = CycNum::one();
    for j in 0..k {
        acc = &acc * &(x - &CycNum::from_int(j as i64));
    }
    acc
}

/// min(l − k) over nonzero p_{k,l}.
fn shift(polys: &[Poly]) -> i64 {
    polys
        .iter()
        .enumerate()
        .filter_map(|(k, p)| p.valuation().map(|v| v as i64 - k as i64))
        .min()
        .expect("nonzero operator")
}

#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Exact(CycNum),
    Numeric(Complex64),
}

impl Exponent {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Exponent::Exact(c) => c.to_complex(),
            Exponent::Numeric(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&CycNum> {
        match self {
            Exponent::Exact(c) => Some(c),
            Exponent::Numeric(_) => None,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact(c) => write!(f, "{}", c.pretty()),
            Exponent::Numeric(z) => write!(f, "≈{:.12}{:+.12}i", z.re, z.im),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndicialData {
    pub point: Point,
    /// Indicial polynomial in ρ; at ∞ the local solutions behave like x^{−ρ}.
    pub poly: Poly,
    /// With multiplicity, exact roots first.
    pub exponents: Vec<Exponent>,
    /// Fuchs criterion: the indicial polynomial has full degree.
    pub regular: bool,
}

impl IndicialData {
    pub fn exact_exponents(&self) -> Vec<CycNum> {
        self.exponents.iter().filter_map(|e| e.exact().cloned()).collect()
    }

    pub fn contains(&self, rho: &CycNum) -> bool {
        self.exponents.iter().any(|e| e.exact() == Some(rho))
    }

    /// Sum of the exponents (exact when all are exact).
    pub fn exponent_sum(&self) -> Complex64 {
        self.exponents.iter().map(|e| e.to_complex()).sum()
    }
}

pub fn indicial_data(l: &DiffOp, at: &Point) -> Result<IndicialData> {
    let n = l.order().ok_or(Error::DivisionByZero)?;
    let polys = local_polys(l, at)?;
    let sigma = shift(&polys);
    let mut ind = Poly::zero();
    for (k, p) in polys.iter().enumerate() {
        let l_idx = sigma + k as i64;
        if l_idx >= 0 {
            let c = p.coeff(l_idx as usize);
            if !c.is_zero() {
                ind = &ind + &falling_factorial(k).scale(&c);
            }
        }
    }
    let regular = ind.degree() == Some(n);
    let mut exponents = Vec::new();
    let mut rest = ind.clone();
    for (r, m) in roots_in_field(&ind) {
        for _ in 0..m {
            exponents.push(Exponent::Exact(r.clone()));
            rest = rest
                .exact_div(&Poly::from_coeffs(vec![-&r, CycNum::one()]))
                .expect("root divides");
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        exponents.extend(numeric_roots(&rest).into_iter().map(Exponent::Numeric));
    }
    Ok(IndicialData {
        point: at.clone(),
        poly: ind.monic(),
        exponents,
        regular,
    })
}

/// x^ρ·(c0 + c1·s + …) in the local variable at `point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    pub point: Point,
    pub rho: CycNum,
    pub coeffs: Vec<CycNum>,
}

impl FormalSeries {
    pub fn new(point: Point, rho: CycNum, coeffs: Vec<CycNum>) -> Result<Self> {
        match coeffs.first() {
            Some(c) if !c.is_zero() => Ok(FormalSeries { point, rho, coeffs }),
            _ => Err(Error::InvalidArgument("series needs c0 ≠ 0".into())),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Residual coefficients r_0..r_N of L applied to the series, where r_m is the
/// coefficient of s^{ρ + σ + m} after clearing denominators. Every returned
/// term is exact: it only involves c_0..c_m.
pub fn series_check(l: &DiffOp, s: &FormalSeries) -> Result<Vec<CycNum>> {
    let polys = local_polys(l, &s.point)?;
    let sigma = shift(&polys);
    let big_n = s.order();
    let mut res = vec![CycNum::zero(); big_n + 1];
    let rho_j: Vec<CycNum> = (0..=big_n).map(|j| &s.rho + &CycNum::from_int(j as i64)).collect();
    for (k, p) in polys.iter().enumerate() {
        let ff: Vec<CycNum> = rho_j.iter().map(|x| falling_value(x, k)).collect();
        for (l_idx, pkl) in p.coeffs().iter().enumerate() {
            if pkl.is_zero() {
                continue;
            }
            let off = l_idx as i64 - k as i64 - sigma;
            for (m, slot) in res.iter_mut().enumerate() {
                let j = m as i64 - off;
                if j < 0 {
                    continue;
                }
                let j = j as usize;
                if s.coeffs[j].is_zero() {
                    continue;
                }
                *slot = &*slot + &(&(pkl * &s.coeffs[j]) * &ff[j]);
            }
        }
    }
    Ok(res)
}

/// First index with a nonzero residual, if any.
pub fn first_nonzero(res: &[CycNum]) -> Option<usize> {
    res.iter().position(|c| !c.is_zero())
}
