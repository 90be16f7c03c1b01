//! Scalar linear differential operators over K(x): Ore algebra, gauge
//! twists, changes of variable, cyclic-vector reduction and local analysis.

mod cyclic;
mod diffop;
mod hypergeom;
mod series;

use crate::error::{Error, Result};
use crate::exactfield::{Chart, CycNum, RatFn};

pub use cyclic::{cyclic_forms, cyclic_reduce};
pub use diffop::DiffOp;
pub use hypergeom::{find_hg_factors, HGParams};
pub use series::{
    falling_factorial, first_nonzero, indicial_data, series_check, Exponent, FormalSeries, IndicialData, Point,
};

/// True when y with y′/y = r0 is annihilated by L.
pub fn annihilates(l: &DiffOp, r0: &RatFn) -> Result<bool> {
    Ok(l.twist(r0)?.coeff(0).is_zero())
}

/// Order reduction by a known solution y0 with y0′/y0 = r0: returns the
/// operator annihilating (X/y0)′ for every solution X of L.
pub fn reduce_order(l: &DiffOp, r0: &RatFn) -> Result<DiffOp> {
    let t = l.twist(r0)?;
    let a0 = t.coeff(0);
    if !a0.is_zero() {
        return Err(Error::NotASolution(format!(
            "twisted operator keeps a0 = {}",
            a0.to_text()
        )));
    }
    Ok(DiffOp::new(l.chart(), t.coeffs()[1..].to_vec()))
}

fn x() -> RatFn {
    RatFn::var()
}

fn c(v: CycNum) -> RatFn {
    RatFn::constant(v)
}

fn i() -> RatFn {
    c(CycNum::i())
}

/// The order-4 operator as printed, on the x1 chart. With `typo_fixed`, the
/// last denominator 4(x1 − 1)³x1⁴ is read as 4(x1 − i)³x1⁴.
pub fn hyp_operator(typo_fixed: bool) -> DiffOp {
    let x = x();
    let i = i();
    let n = |k: i64| RatFn::from_int(k);
    let xi = &x - &i;
    let a3 = (&(&(&i * &n(3)) - &(&x * &n(5))) * &n(2))
        .div(&(&x * &(&i - &x)))
        .expect("nonzero");
    let a2 = (&(&i - &(&x * &n(3))) * &(&(&i * &n(23)) - &(&x * &n(29))))
        .div(&(&(&xi.pow(2) * &x.pow(2)) * &n(4)))
        .expect("nonzero");
    let a1 = -&(&(&i - &(&x * &n(3))) * &(&(&x * &n(7)) + &i))
        .div(&(&(&xi.pow(2) * &x.pow(3)) * &n(4)))
        .expect("nonzero");
    let pole = if typo_fixed { xi } else { &x - &n(1) };
    let a0 = (&(&x * &n(3)) + &i)
        .div(&(&(&pole.pow(3) * &x.pow(4)) * &n(4)))
        .expect("nonzero");
    DiffOp::new(Chart::X1, vec![a0, a1, a2, a3, RatFn::one()])
}

/// y0′/y0 for y0 = (i − x1)/√x1: 1/(x1 − i) − 1/(2x1).
pub fn y0_log_derivative() -> RatFn {
    let x = x();
    let a = (&x - &i()).inv().expect("nonzero");
    let b = x.scale(&CycNum::from_int(2)).inv().expect("nonzero");
    &a - &b
}

/// f′/f for f = √x1·(1 + i·x1)^{−3/2 − i√3/2}.
pub fn factor_twist() -> RatFn {
    let x = x();
    let e = &CycNum::frac(-3, 2) - &CycNum::i_sqrt3().scale(&num_rational::BigRational::new(1.into(), 2.into()));
    let one_ix = &RatFn::one() + &(&i() * &x);
    let first = x.scale(&CycNum::from_int(2)).inv().expect("nonzero");
    let second = c(&e * &CycNum::i()).div(&one_ix).expect("nonzero");
    &first + &second
}

/// Reduce by y0, twist by the prefactor, then pass to u = 1 + i·x1.
pub fn to_hypergeometric_chart(l4: &DiffOp) -> Result<DiffOp> {
    let l3 = reduce_order(l4, &y0_log_derivative())?;
    let tw = l3.twist(&factor_twist())?;
    tw.affine_subst(&CycNum::i(), &CycNum::one(), Chart::U)?.monic()
}
