//! Exact elements of the cyclotomic field Q(ζ), ζ = exp(iπ/12).
//!
//! Elements are stored on the power basis (1, ζ, …, ζ⁷) of
//! Q[t]/(t⁸ − t⁴ + 1). All constants the pipeline needs (i, √2, √3, √i,
//! i√3) live here exactly.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};

/// Degree of the field over Q.
pub const DEGREE: usize = 8;

/// Exponents k with gcd(k, 24) = 1; the embeddings send ζ to exp(iπk/12).
pub const UNITS_MOD_24: [u32; 8] = [1, 5, 7, 11, 13, 17, 19, 23];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    c: [BigRational; DEGREE],
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum {
            c: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// `num / den` as a rational element. Panics on `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut z = Self::zero();
        z.c[0] = q;
        z
    }

    pub fn from_coeffs(c: [BigRational; DEGREE]) -> Self {
        CycNum { c }
    }

    pub fn coeffs(&self) -> &[BigRational; DEGREE] {
        &self.c
    }

    /// ζ^k for any integer k (ζ has order 24).
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(24) as usize;
        // ζ^12 = −1
        let (k, sign) = if k >= 12 { (k - 12, -1) } else { (k, 1) };
        let mut z = Self::zero();
        if k < DEGREE {
            z.c[k] = rat(sign);
        } else {
            // ζ^k = ζ^(k−4) − ζ^(k−8) for 8 ≤ k ≤ 11
            z.c[k - 4] = rat(sign);
            z.c[k - 8] = rat(-sign);
        }
        z
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// i = ζ⁶
    pub fn i() -> Self {
        Self::zeta_pow(6)
    }

    /// √2 = ζ³ − ζ⁵ + ζ
    pub fn sqrt2() -> Self {
        &(&Self::zeta_pow(3) - &Self::zeta_pow(5)) + &Self::zeta_pow(1)
    }

    /// i√3 = 2ζ⁴ − 1
    pub fn i_sqrt3() -> Self {
        &(&Self::zeta_pow(4) * &Self::from_int(2)) - &Self::one()
    }

    /// √3 = −i·(i√3)
    pub fn sqrt3() -> Self {
        -(&Self::i() * &Self::i_sqrt3())
    }

    /// √6 = √2·√3
    pub fn sqrt6() -> Self {
        &Self::sqrt2() * &Self::sqrt3()
    }

    /// √i = ζ³ (principal branch)
    pub fn sqrt_i() -> Self {
        Self::zeta_pow(3)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// True iff the element lies in Q (coordinates 1..7 vanish).
    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.c[0])
    }

    /// True iff the element is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.c[0].is_integer()
    }

    /// True iff the element is a half-odd-integer (n + 1/2).
    pub fn is_half_odd_integer(&self) -> bool {
        match self.as_rational() {
            Some(q) => {
                let twice = q * rat(2);
                twice.is_integer() && !q.is_integer()
            }
            None => false,
        }
    }

    /// Real under the principal embedding, i.e. fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Field automorphism ζ ↦ ζ^k, k a unit mod 24.
    pub fn galois(&self, k: u32) -> Self {
        debug_assert!(UNITS_MOD_24.contains(&(k % 24)));
        let mut out = Self::zero();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let mut term = Self::zeta_pow(j as i64 * k as i64);
            term.scale_mut(cj);
            out += &term;
        }
        out
    }

    /// Complex conjugation (ζ ↦ ζ⁻¹).
    pub fn conj(&self) -> Self {
        self.galois(23)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut z = self.clone();
        z.scale_mut(q);
        z
    }

    fn scale_mut(&mut self, q: &BigRational) {
        for c in self.c.iter_mut() {
            *c = &*c * q;
        }
    }

    /// Value under the embedding ζ ↦ exp(iπk/12).
    pub fn embed(&self, k: u32) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 / 12.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for c in &self.c {
            acc += pow * c.to_f64().unwrap_or(f64::NAN);
            pow *= z;
        }
        acc
    }

    /// Principal embedding ζ = exp(iπ/12).
    pub fn to_complex(&self) -> Complex64 {
        self.embed(1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        // Norm tower through Gal = ⟨σ5⟩ × ⟨σ7⟩ × ⟨σ13⟩: each product is fixed
        // by one more generator, the last one is rational.
        let (a, d) = self.integral();
        let s5 = int_galois(&a, 5);
        let b = int_mul(&a, &s5);
        let s7 = int_galois(&b, 7);
        let c = int_mul(&b, &s7);
        let s13 = int_galois(&c, 13);
        let n = int_mul(&c, &s13);
        debug_assert!(n[1..].iter().all(Zero::is_zero));
        let cof = int_mul(&int_mul(&s5, &s7), &s13);
        let norm = n[0].clone();
        Ok(CycNum {
            c: std::array::from_fn(|k| BigRational::new(&cof[k] * &d, norm.clone())),
        })
    }

    /// Integer coefficients and the common denominator: self = a / d.
    fn integral(&self) -> (IntVec, BigInt) {
        let d = self.c.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let a = std::array::from_fn(|k| &d / self.c[k].denom() * self.c[k].numer());
        (a, d)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
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

    /// Coordinates on the radical basis 1, i, √2, i√2, √3, i√3, √6, i√6.
    pub fn radical_coords(&self) -> [BigRational; DEGREE] {
        let m = radical_inverse();
        std::array::from_fn(|r| (0..DEGREE).fold(BigRational::zero(), |acc, k| acc + &m[r][k] * &self.c[k]))
    }

    /// Human-readable rendering on the radical basis, e.g. `5/2 − (1/2)i√3`.
    /// The output is accepted by `parse_constant`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let r = self.radical_coords();
        let mut s = String::new();
        for (k, c) in r.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('−');
                }
            } else {
                s.push_str(if neg { " − " } else { " + " });
            }
            let label = RADICAL_LABELS[k];
            if k == 0 {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(label);
            } else if mag.is_integer() {
                s.push_str(&format!("{mag}{label}"));
            } else {
                s.push_str(&format!("({mag}){label}"));
            }
        }
        s
    }
}

const RADICAL_LABELS: [&str; DEGREE] = ["1", "i", "√2", "i√2", "√3", "i√3", "√6", "i√6"];

fn radical_basis() -> [CycNum; DEGREE] {
    let i = CycNum::i();
    let b = [CycNum::one(), CycNum::sqrt2(), CycNum::sqrt3(), CycNum::sqrt6()];
    [
        b[0].clone(),
        i.clone(),
        b[1].clone(),
        &i * &b[1],
        b[2].clone(),
        &i * &b[2],
        b[3].clone(),
        &i * &b[3],
    ]
}

/// Inverse of the matrix whose columns are the radical basis in power-basis
/// coordinates.
fn radical_inverse() -> &'static [[BigRational; DEGREE]; DEGREE] {
    static INV: std::sync::OnceLock<[[BigRational; DEGREE]; DEGREE]> = std::sync::OnceLock::new();
    INV.get_or_init(|| {
        let basis = radical_basis();
        let mut a: Vec<Vec<BigRational>> = (0..DEGREE)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..DEGREE).map(|c| basis[c].c[r].clone()).collect();
                row.extend((0..DEGREE).map(|c| {
                    if c == r {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..DEGREE {
            let p = (col..DEGREE)
                .find(|&r| !a[r][col].is_zero())
                .expect("basis is independent");
            a.swap(col, p);
            let inv = BigRational::one() / &a[col][col];
            for v in a[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..DEGREE {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for k in 0..2 * DEGREE {
                        let d = &f * &a[col][k];
                        a[r][k] = &a[r][k] - d;
                    }
                }
            }
        }
        std::array::from_fn(|r| std::array::from_fn(|c| a[r][DEGREE + c].clone()))
    })
}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}

/// Canonical text: `a0/b0,…,a7/b7`, every coordinate written as a reduced
/// fraction with positive denominator.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.c.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}/{}", c.numer(), c.denom())?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({})", self.pretty())
    }
}

pub(crate) fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    let parse_int = |t: &str| -> std::result::Result<BigInt, String> {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid integer `{t}`"));
        }
        t.parse::<BigInt>().map_err(|e| format!("invalid integer `{t}`: {e}"))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

impl FromStr for CycNum {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != DEGREE {
            return Err(ParseError::new(
                1,
                1,
                format!("expected {DEGREE} comma-separated rationals, found {}", parts.len()),
            ));
        }
        let mut z = CycNum::zero();
        let mut col = 1;
        for (k, p) in parts.iter().enumerate() {
            z.c[k] = parse_rational(p).map_err(|m| ParseError::new(1, col, m))?;
            col += p.chars().count() + 1;
        }
        Ok(z)
    }
}

// ---- arithmetic ----

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        CycNum {
            c: std::array::from_fn(|k| &self.c[k] + &o.c[k]),
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        CycNum {
            c: std::array::from_fn(|k| &self.c[k] - &o.c[k]),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        if self.is_rational() {
            return o.scale(&self.c[0]);
        }
        if o.is_rational() {
            return self.scale(&o.c[0]);
        }
        let (a, da) = self.integral();
        let (b, db) = o.integral();
        let p = int_mul(&a, &b);
        let den = da * db;
        CycNum {
            c: std::array::from_fn(|k| BigRational::new(p[k].clone(), den.clone())),
        }
    }
}

type IntVec = [BigInt; DEGREE];

/// Product in Z[t]/(t⁸ − t⁴ + 1).
fn int_mul(a: &IntVec, b: &IntVec) -> IntVec {
    let mut prod: Vec<BigInt> = vec![BigInt::zero(); 2 * DEGREE - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    // t^k = t^(k−4) − t^(k−8)
    for k in (DEGREE..2 * DEGREE - 1).rev() {
        let top = std::mem::take(&mut prod[k]);
        if top.is_zero() {
            continue;
        }
        prod[k - 4] += &top;
        prod[k - 8] -= &top;
    }
    let mut it = prod.into_iter();
    std::array::from_fn(|_| it.next().unwrap())
}

/// ζ ↦ ζ^k on integer coefficients.
fn int_galois(a: &IntVec, k: u32) -> IntVec {
    let mut out: IntVec = std::array::from_fn(|_| BigInt::zero());
    for (j, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let e = (j * k as usize) % 24;
        let (e, x) = if e >= 12 { (e - 12, -x) } else { (e, x.clone()) };
        if e < DEGREE {
            out[e] += x;
        } else {
            out[e - 4] += &x;
            out[e - 8] -= x;
        }
    }
    out
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            c: std::array::from_fn(|k| -&self.c[k]),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: &CycNum) -> CycNum {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, o: &CycNum) {
        for k in 0..DEGREE {
            self.c[k] += &o.c[k];
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, o: &CycNum) {
        for k in 0..DEGREE {
            self.c[k] -= &o.c[k];
        }
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, o: &CycNum) {
        *self = &*self * o;
    }
}

// ---- dense polynomials over Q; extended Euclid serves as the inversion oracle ----

#[cfg(test)]
#[derive(Clone, Debug)]
struct QPoly {
    coeffs: Vec<BigRational>,
}

#[cfg(test)]
impl QPoly {
    fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    fn modulus() -> Self {
        let mut c = vec![BigRational::zero(); 9];
        c[0] = rat(1);
        c[4] = rat(-1);
        c[8] = rat(1);
        QPoly { coeffs: c }
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        QPoly::from_coeffs(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) - o.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly { coeffs: vec![] };
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(c)
    }

    fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = &r[r.len() - 1] * &lead_inv;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (QPoly::from_coeffs(q), QPoly::from_coeffs(r))
    }

    /// Returns (g, s) with s·a ≡ g (mod m).
    fn ext_gcd_left(a: &QPoly, m: &QPoly) -> (QPoly, QPoly) {
        let (mut r0, mut r1) = (a.clone(), m.clone());
        let (mut s0, mut s1) = (QPoly::from_coeffs(vec![rat(1)]), QPoly::from_coeffs(vec![]));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        (r0, s0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&CycNum::i() * &CycNum::i(), CycNum::from_int(-1));
    }

    #[test]
    fn radicals_square_correctly() {
        let sqrt2 = CycNum::sqrt2();
        assert_eq!(&sqrt2 * &sqrt2, CycNum::from_int(2));
        let is3 = CycNum::i_sqrt3();
        assert_eq!(&is3 * &is3, CycNum::from_int(-3));
        let s3 = CycNum::sqrt3();
        assert_eq!(&s3 * &s3, CycNum::from_int(3));
        let si = CycNum::sqrt_i();
        assert_eq!(&si * &si, CycNum::i());
    }

    #[test]
    fn principal_embedding_values() {
        assert!((CycNum::sqrt2().to_complex() - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((CycNum::i_sqrt3().to_complex() - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-14);
        assert!((CycNum::sqrt3().to_complex() - Complex64::new(3f64.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inverse_matches_extended_euclid() {
        let z = CycNum::zeta();
        let samples = [
            &(&z.pow(3) - &z.pow(5)) + &z,
            &(&z.pow(7) * &CycNum::frac(-5, 3)) + &CycNum::frac(2, 7),
            &CycNum::sqrt_i() + &CycNum::i_sqrt3(),
            &(&z * &CycNum::frac(3, 4)) - &z.pow(6),
        ];
        for a in samples {
            let (g, s) = QPoly::ext_gcd_left(&QPoly::from_coeffs(a.c.to_vec()), &QPoly::modulus());
            assert_eq!(g.degree(), Some(0));
            let ginv = g.coeffs[0].recip();
            let mut want = CycNum::zero();
            for (k, c) in s.coeffs.iter().enumerate() {
                want.c[k] = c * &ginv;
            }
            assert_eq!(a.inv().unwrap(), want);
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(CycNum::zero().inv(), Err(Error::DivisionByZero)));
        assert!(CycNum::one().checked_div(&CycNum::zero()).is_err());
    }

    #[test]
    fn zeta_has_order_24() {
        assert_eq!(CycNum::zeta().pow(24), CycNum::one());
        assert_eq!(CycNum::zeta().pow(12), CycNum::from_int(-1));
        assert_eq!(CycNum::zeta_pow(-1), CycNum::zeta().inv().unwrap());
    }

    #[test]
    fn conjugation_and_reality() {
        assert_eq!(CycNum::i().conj(), -CycNum::i());
        assert!(CycNum::sqrt2().is_real());
        assert!(CycNum::sqrt3().is_real());
        assert!(!CycNum::i_sqrt3().is_real());
    }

    #[test]
    fn integrality_is_coordinatewise() {
        assert!(CycNum::from_int(-2).is_integer());
        assert!(!CycNum::frac(1, 2).is_integer());
        assert!(CycNum::frac(-3, 2).is_half_odd_integer());
        assert!(!CycNum::i().is_rational());
    }

    #[test]
    fn text_round_trip() {
        let z = &CycNum::frac(-5, 3) + &CycNum::i_sqrt3();
        let s = z.to_string();
        assert_eq!(s, "-8/3,0/1,0/1,0/1,2/1,0/1,0/1,0/1");
        let back: CycNum = s.parse().unwrap();
        assert_eq!(back, z);
        assert_eq!(back.to_string(), s);
    }

    #[test]
    fn malformed_text_is_rejected() {
        assert!("1,2,3".parse::<CycNum>().is_err());
        assert!("1/0,0,0,0,0,0,0,0".parse::<CycNum>().is_err());
        assert!("a,0,0,0,0,0,0,0".parse::<CycNum>().is_err());
        let e = "0,0,x,0,0,0,0,0".parse::<CycNum>().unwrap_err();
        assert_eq!(e.column, 5);
    }
}
