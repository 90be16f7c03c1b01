//! Probabilistic identity testing by exact evaluation at random points of K.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Expr, Sym};
use crate::error::Error;
use crate::exactfield::CycNum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub agreed: usize,
    pub singular: usize,
    /// First point index at which the two sides differ.
    pub mismatch: Option<usize>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn small_cyc(rng: &mut impl Rng) -> CycNum {
    let mut z = CycNum::zero();
    // two or three sparse ζ-monomials with small rational weights
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(0..8);
        let n = rng.gen_range(-5..=5);
        let d = rng.gen_range(1..=4);
        z += &(&CycNum::frac(n, d) * &CycNum::zeta_pow(k));
    }
    if z.is_zero() {
        CycNum::one()
    } else {
        z
    }
}

fn pythagorean(rng: &mut impl Rng) -> (CycNum, CycNum, CycNum) {
    let a = small_cyc(rng);
    let m: i64 = rng.gen_range(1..=6);
    let n: i64 = rng.gen_range(1..=6);
    let x = &a * &CycNum::from_int(m * m - n * n);
    let y = &a * &CycNum::from_int(2 * m * n);
    let mut r = &a * &CycNum::from_int(m * m + n * n);
    if rng.gen_bool(0.5) {
        r = -r;
    }
    (x, y, r)
}

/// Random point of K¹² with r1² = x1² + x2² and r2² = p3² + p4².
pub fn random_point(rng: &mut impl Rng) -> BTreeMap<Sym, CycNum> {
    let mut pt = BTreeMap::new();
    let (x1, x2, r1) = pythagorean(rng);
    let (p3, p4, r2) = pythagorean(rng);
    pt.insert(Sym::X1, x1);
    pt.insert(Sym::X2, x2);
    pt.insert(Sym::R1, r1);
    pt.insert(Sym::P3, p3);
    pt.insert(Sym::P4, p4);
    pt.insert(Sym::R2, r2);
    for s in [Sym::X3, Sym::X4, Sym::P1, Sym::P2, Sym::U1, Sym::U2] {
        pt.insert(s, small_cyc(rng));
    }
    pt
}

/// Compare `a` and `b` at `points` random points (seeded) of the constrained
/// variety. Points where either side is singular are skipped and counted.
pub fn identical(a: &Expr, b: &Expr, points: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = IdentityReport {
        agreed: 0,
        singular: 0,
        mismatch: None,
    };
    let mut k = 0;
    // bound the attempts so a side that is singular everywhere terminates
    while rep.agreed < points && k < points * 10 {
        let pt = random_point(&mut rng);
        let va = a.eval_at(&pt);
        let vb = b.eval_at(&pt);
        match (va, vb) {
            (Ok(x), Ok(y)) => {
                if x != y {
                    rep.mismatch = Some(k);
                    return rep;
                }
                rep.agreed += 1;
            }
            (Err(Error::SingularEvaluation(_)), _)
            | (_, Err(Error::SingularEvaluation(_)))
            | (Err(Error::DivisionByZero), _)
            | (_, Err(Error::DivisionByZero)) => rep.singular += 1,
            _ => {
                rep.mismatch = Some(k);
                return rep;
            }
        }
        k += 1;
    }
    if rep.agreed < points {
        rep.mismatch = Some(k);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::super::v;
    use super::*;

    #[test]
    fn points_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_point(&mut rng);
            let lhs = &p[&Sym::R1] * &p[&Sym::R1];
            let rhs = &(&p[&Sym::X1] * &p[&Sym::X1]) + &(&p[&Sym::X2] * &p[&Sym::X2]);
            assert_eq!(lhs, rhs);
            let lhs = &p[&Sym::R2] * &p[&Sym::R2];
            let rhs = &(&p[&Sym::P3] * &p[&Sym::P3]) + &(&p[&Sym::P4] * &p[&Sym::P4]);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn radical_identity_holds_only_on_variety() {
        // r1² − x1² − x2² vanishes on the variety though not as a free expression
        let e = v(Sym::R1).powi(2) - v(Sym::X1).powi(2) - v(Sym::X2).powi(2);
        assert!(identical(&e, &Expr::zero(), 12, 1).holds());
        assert!(!e.is_identically_zero().unwrap());
        assert!(!identical(&v(Sym::X1), &v(Sym::X2), 12, 1).holds());
    }
}
