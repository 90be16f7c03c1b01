//! Gauss hypergeometric operator, its series, and a search for a
//! hypergeometric right factor from local exponents.

use std::fmt;

use super::series::{indicial_data, FormalSeries, Point};
use super::DiffOp;
use crate::error::Result;
use crate::exactfield::{Chart, CycNum, RatFn};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGParams {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
}

impl HGParams {
    pub fn new(a: CycNum, b: CycNum, c: CycNum) -> Self {
        HGParams { a, b, c }
    }

    /// (5/2 − i√3/2, 1/2 + i√3/2, 1 + i√3) as printed.
    pub fn printed_gamma() -> Self {
        let h = CycNum::i_sqrt3().scale(&half());
        HGParams {
            a: &CycNum::frac(5, 2) - &h,
            b: &CycNum::frac(1, 2) + &h,
            c: &CycNum::one() + &CycNum::i_sqrt3(),
        }
    }

    /// (5/2 − i√3/2, 1/2 − i√3/2, 1 − i√3): the factor actually present.
    pub fn corrected_gamma() -> Self {
        let h = CycNum::i_sqrt3().scale(&half());
        HGParams {
            a: &CycNum::frac(5, 2) - &h,
            b: &CycNum::frac(1, 2) - &h,
            c: &CycNum::one() - &CycNum::i_sqrt3(),
        }
    }

    /// u(1 − u)D² + (c − (a + b + 1)u)D − ab on the u chart.
    pub fn operator(&self) -> DiffOp {
        let u = RatFn::var();
        let a2 = &u * &(&RatFn::one() - &u);
        let s = &(&self.a + &self.b) + &CycNum::one();
        let a1 = &RatFn::constant(self.c.clone()) - &u.scale(&s);
        let a0 = RatFn::constant(-&(&self.a * &self.b));
        DiffOp::new(Chart::U, vec![a0, a1, a2])
    }

    /// 2F1(a, b; c; u) to order n: c_{k+1} = c_k(a + k)(b + k)/((c + k)(1 + k)).
    pub fn series(&self, n: usize) -> Result<FormalSeries> {
        let mut coeffs = vec![CycNum::one()];
        for k in 0..n {
            let kk = CycNum::from_int(k as i64);
            let num = &(&self.a + &kk) * &(&self.b + &kk);
            let den = (&self.c + &kk).scale(&num_rational::BigRational::from_integer((k as i64 + 1).into()));
            let next = &(&coeffs[k] * &num) * &den.inv()?;
            coeffs.push(next);
        }
        FormalSeries::new(Point::zero(), CycNum::zero(), coeffs)
    }
}

fn half() -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), 2.into())
}

impl fmt::Display for HGParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a.pretty(), self.b.pretty(), self.c.pretty())
    }
}

/// Candidate factors HG(a, b, c) of an operator on the u chart whose local
/// exponents contain {0, 1 − c} at 0, {0, c − a − b} at 1 and {a, b} at ∞,
/// kept only when right division is exact. Parameters are ordered with
/// Re a ≥ Re b.
pub fn find_hg_factors(l: &DiffOp) -> Result<Vec<HGParams>> {
    let e0 = indicial_data(l, &Point::zero())?.exact_exponents();
    let e1 = indicial_data(l, &Point::Finite(CycNum::one()))?.exact_exponents();
    let einf = indicial_data(l, &Point::Infinity)?.exact_exponents();
    let zero = CycNum::zero();
    let mut out: Vec<HGParams> = Vec::new();
    for r0 in &e0 {
        if !has_pair(&e0, &zero, r0) {
            continue;
        }
        let c = &CycNum::one() - r0;
        for (ia, a) in einf.iter().enumerate() {
            for (ib, b) in einf.iter().enumerate() {
                if ia == ib {
                    continue;
                }
                let (ca, cb) = (a.to_complex(), b.to_complex());
                if ca.re < cb.re || (ca.re == cb.re && ca.im < cb.im) {
                    continue;
                }
                let d = &(&c - a) - b;
                if !has_pair(&e1, &zero, &d) {
                    continue;
                }
                let p = HGParams::new(a.clone(), b.clone(), c.clone());
                if out.contains(&p) {
                    continue;
                }
                let (_, rem) = l.right_divide(&p.operator())?;
                if rem.is_zero() {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// `list` contains x and y as distinct members of the multiset.
fn has_pair(list: &[CycNum], x: &CycNum, y: &CycNum) -> bool {
    let nx = list.iter().filter(|r| *r == x).count();
    if x == y {
        nx >= 2
    } else {
        nx >= 1 && list.contains(y)
    }
}
