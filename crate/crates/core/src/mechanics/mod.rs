//! Minimum-time Kepler problem: Hamiltonians, the collision line S, its first
//! integral, explicit collision branches and real extremal integration.

mod branch;
mod extremal;

use std::collections::BTreeMap;

use crate::error::Result;
use crate::symexpr::{v, Expr, Sym};

pub use branch::{c_constraint_residual, solve_collision_ansatz, AnsatzSolution, CollisionBranch};
pub use extremal::{
    h_real, integrate_extremal, kepler_energy, pmp_field_real, write_csv, ExtremalOptions, ExtremalRun, RealState,
    Sample, SingularEvent, CSV_HEADER,
};

/// Canonical pairs of the full phase space.
pub const FULL_PAIRS: [(Sym, Sym); 4] = [
    (Sym::X1, Sym::P1),
    (Sym::X2, Sym::P2),
    (Sym::X3, Sym::P3),
    (Sym::X4, Sym::P4),
];

/// Darboux pairs on S.
pub const S_PAIRS: [(Sym, Sym); 2] = [(Sym::X1, Sym::P1), (Sym::X3, Sym::P3)];

#[derive(Clone, Debug)]
pub struct HamiltonianFixture {
    pub pseudo_h: Expr,
    pub maximized_h: Expr,
    pub restricted_h: Expr,
}

impl HamiltonianFixture {
    pub fn new() -> Self {
        HamiltonianFixture {
            pseudo_h: pseudo_h(),
            maximized_h: maximized_h(),
            restricted_h: restricted_h(),
        }
    }
}

impl Default for HamiltonianFixture {
    fn default() -> Self {
        Self::new()
    }
}

fn drift() -> Expr {
    let grav = (v(Sym::P3) * v(Sym::X1) + v(Sym::P4) * v(Sym::X2)) / v(Sym::R1).powi(3);
    v(Sym::P1) * v(Sym::X3) + v(Sym::P2) * v(Sym::X4) - grav
}

/// H(x, p, u) with control symbols u1, u2.
pub fn pseudo_h() -> Expr {
    drift() + v(Sym::P3) * v(Sym::U1) + v(Sym::P4) * v(Sym::U2)
}

/// H(x, p, r) = p1x3 + p2x4 − (p3x1 + p4x2)/r1³ + r2.
pub fn maximized_h() -> Expr {
    drift() + v(Sym::R2)
}

/// H on S in the coordinates (x1, x3, p1, p3).
pub fn restricted_h() -> Expr {
    v(Sym::P1) * v(Sym::X3) - v(Sym::P3) / v(Sym::X1).powi(2) - v(Sym::P3)
}

/// x2 = x4 = p2 = p4 = 0, r1 = x1, r2 = −p3.
pub fn restriction_to_s() -> BTreeMap<Sym, Expr> {
    let mut m = BTreeMap::new();
    for s in [Sym::X2, Sym::X4, Sym::P2, Sym::P4] {
        m.insert(s, Expr::zero());
    }
    m.insert(Sym::R1, v(Sym::X1));
    m.insert(Sym::R2, -v(Sym::P3));
    m
}

/// C = x3²/2 + x1 − 1/x1.
pub fn first_integral_c() -> Expr {
    v(Sym::X3).powi(2) / Expr::int(2) + v(Sym::X1) - Expr::one() / v(Sym::X1)
}

/// Hamiltonian vector field ẋ = ∂H/∂p, ṗ = −∂H/∂x, ordered as all x then all p.
pub fn hamiltonian_field(h: &Expr, pairs: &[(Sym, Sym)]) -> Result<Vec<Expr>> {
    let mut xs = Vec::new();
    let mut ps = Vec::new();
    for &(q, p) in pairs {
        xs.push(h.differentiate(p)?);
        ps.push(-h.differentiate(q)?);
    }
    xs.extend(ps);
    Ok(xs)
}

/// (ẋ1, ẋ3, ṗ1, ṗ3) on S, derived from the restricted Hamiltonian.
pub fn restricted_field() -> Result<[Expr; 4]> {
    let f = hamiltonian_field(&restricted_h(), &S_PAIRS)?;
    Ok([f[0].clone(), f[1].clone(), f[2].clone(), f[3].clone()])
}

/// The field on S in its displayed form (x3, −1 − 1/x1², −2p3/x1³, −p1).
pub fn restricted_field_displayed() -> [Expr; 4] {
    [
        v(Sym::X3),
        -Expr::one() - Expr::one() / v(Sym::X1).powi(2),
        -(Expr::int(2) * v(Sym::P3)) / v(Sym::X1).powi(3),
        -v(Sym::P1),
    ]
}

/// Canonical bracket Σ ∂f/∂q ∂g/∂p − ∂f/∂p ∂g/∂q over `pairs`.
pub fn poisson_bracket(f: &Expr, g: &Expr, pairs: &[(Sym, Sym)]) -> Result<Expr> {
    let mut terms = Vec::new();
    for &(q, p) in pairs {
        terms.push(f.differentiate(q)? * g.differentiate(p)?);
        terms.push(-(f.differentiate(p)? * g.differentiate(q)?));
    }
    Ok(Expr::sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::identical;

    #[test]
    fn restriction_of_maximized_h() {
        let r = maximized_h().substitute(&restriction_to_s());
        assert!((r - restricted_h()).is_identically_zero().unwrap());
    }

    #[test]
    fn field_matches_display() {
        let f = restricted_field().unwrap();
        let d = restricted_field_displayed();
        for k in 0..4 {
            assert!(
                (f[k].clone() - d[k].clone()).is_identically_zero().unwrap(),
                "component {k}"
            );
        }
    }

    #[test]
    fn brackets() {
        let one = poisson_bracket(&v(Sym::X1), &v(Sym::P1), &S_PAIRS).unwrap();
        assert!((one - Expr::one()).is_identically_zero().unwrap());
        let c = first_integral_c();
        let hc = poisson_bracket(&restricted_h(), &c, &S_PAIRS).unwrap();
        assert!(hc.is_identically_zero().unwrap());
        assert!(poisson_bracket(&c, &c, &S_PAIRS)
            .unwrap()
            .is_identically_zero()
            .unwrap());
    }

    #[test]
    fn dh_dp1_is_x3() {
        let d = maximized_h().differentiate(Sym::P1).unwrap();
        assert!((d - v(Sym::X3)).is_identically_zero().unwrap());
    }

    #[test]
    fn maximized_h_is_pseudo_h_at_optimal_control() {
        let mut m = BTreeMap::new();
        m.insert(Sym::U1, v(Sym::P3) / v(Sym::R2));
        m.insert(Sym::U2, v(Sym::P4) / v(Sym::R2));
        let h = pseudo_h().substitute(&m);
        assert!(identical(&h, &maximized_h(), 12, 3).holds());
    }
}
