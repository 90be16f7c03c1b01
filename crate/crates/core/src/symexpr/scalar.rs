use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactfield::{CycNum, RatFn};

/// Values an [`Expr`](super::Expr) can be evaluated into.
pub trait Scalar: Clone {
    fn from_cyc(c: &CycNum) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// Caller has checked `o` is nonzero; implementations may still fail.
    fn div(&self, o: &Self) -> Result<Self>;

    fn powi(&self, e: i32) -> Result<Self> {
        let one = Self::from_cyc(&CycNum::one());
        let base = if e < 0 {
            if self.is_zero() {
                return Err(Error::SingularEvaluation("zero to a negative power".into()));
            }
            one.div(self)?
        } else {
            self.clone()
        };
        let mut acc = one;
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl Scalar for CycNum {
    fn from_cyc(c: &CycNum) -> Self {
        c.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.checked_div(o)
    }
}

impl Scalar for Complex64 {
    fn from_cyc(c: &CycNum) -> Self {
        c.to_complex()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self / o)
    }
    fn powi(&self, e: i32) -> Result<Self> {
        if e < 0 && Scalar::is_zero(self) {
            return Err(Error::SingularEvaluation("zero to a negative power".into()));
        }
        Ok(Complex64::powi(self, e))
    }
}

impl Scalar for RatFn {
    fn from_cyc(c: &CycNum) -> Self {
        RatFn::constant(c.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        RatFn::div(self, o)
    }
    fn powi(&self, e: i32) -> Result<Self> {
        RatFn::powi(self, e)
    }
}
