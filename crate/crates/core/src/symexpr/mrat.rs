//! Sparse multivariate polynomials and unreduced fractions over K, used as an
//! exact normal form for zero testing.

use std::collections::BTreeMap;

use super::{Scalar, Sym, NSYM};
use crate::error::{Error, Result};
use crate::exactfield::CycNum;

type Mono = [u16; NSYM];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, CycNum>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CycNum) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; NSYM], c);
        }
        MPoly { terms }
    }

    pub fn var(s: Sym) -> Self {
        let mut m = [0; NSYM];
        m[s.index()] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(m, CycNum::one());
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<CycNum> {
        match self.terms.len() {
            0 => Some(CycNum::zero()),
            1 => self.terms.get(&[0; NSYM]).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let e = terms.entry(*m).or_insert_with(CycNum::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        MPoly { terms }
    }

    pub fn scale(&self, k: &CycNum) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut terms: BTreeMap<Mono, CycNum> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let mut m = *ma;
                for k in 0..NSYM {
                    m[k] += mb[k];
                }
                let e = terms.entry(m).or_insert_with(CycNum::zero);
                *e += &(ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }
}

/// num/den with no gcd reduction; equality is cross-multiplication.
#[derive(Clone, Debug)]
pub struct MRat {
    num: MPoly,
    den: MPoly,
}

impl MRat {
    pub fn var(s: Sym) -> Self {
        MRat {
            num: MPoly::var(s),
            den: MPoly::constant(CycNum::one()),
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn sub(&self, o: &MRat) -> MRat {
        self.add(&o.mul(&MRat::from_cyc(&CycNum::from_int(-1))))
    }

    /// Exact equality of the represented functions.
    pub fn equals(&self, o: &MRat) -> bool {
        self.sub(o).is_zero()
    }
}

impl Scalar for MRat {
    fn from_cyc(c: &CycNum) -> Self {
        MRat {
            num: MPoly::constant(c.clone()),
            den: MPoly::constant(CycNum::one()),
        }
    }

    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return MRat {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            };
        }
        if let Some(c) = o.den.as_constant() {
            let k = c.inv().expect("nonzero denominator");
            return MRat {
                num: self.num.add(&o.num.scale(&k).mul(&self.den)),
                den: self.den.clone(),
            };
        }
        if let Some(c) = self.den.as_constant() {
            let k = c.inv().expect("nonzero denominator");
            return MRat {
                num: o.num.add(&self.num.scale(&k).mul(&o.den)),
                den: o.den.clone(),
            };
        }
        MRat {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return MRat::from_cyc(&CycNum::zero());
        }
        MRat {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.num.is_zero() {
            return Ok(self.clone());
        }
        Ok(MRat {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_detected() {
        // x/(x·y) − 1/y = 0
        let x = MRat::var(Sym::X1);
        let y = MRat::var(Sym::X2);
        let a = x.div(&x.mul(&y)).unwrap();
        let b = MRat::from_cyc(&CycNum::one()).div(&y).unwrap();
        assert!(a.equals(&b));
        assert!(!a.equals(&x));
    }
}
