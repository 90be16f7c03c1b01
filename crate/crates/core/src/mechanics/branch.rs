//! Explicit solutions on S of the form
//! x1 = w², x3 = α(w² − i)/w, p3 = β(w² − i)/w, p1 = γ0(w⁴ + 1)/w⁴
//! with w² = x1, solved exactly over K.

use std::collections::BTreeMap;

use super::{first_integral_c, restricted_field, restricted_h};
use crate::error::{Error, Result};
use crate::exactfield::roots::sqrt_in_field;
use crate::exactfield::{Chart, CycNum, RatFn};
use crate::symexpr::{Expr, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionBranch {
    pub alpha: CycNum,
    pub beta: CycNum,
    pub gamma0: CycNum,
}

/// Intermediate data of the ansatz solve, kept for reporting.
#[derive(Clone, Debug)]
pub struct AnsatzSolution {
    /// α² forced by C = 2i.
    pub alpha_sq_from_c: CycNum,
    /// α² forced by the ẋ3 equation.
    pub alpha_sq_from_field: CycNum,
    /// γ0 = κ·α·β from the ṗ3 equation.
    pub kappa: CycNum,
    pub branches: Vec<CollisionBranch>,
}

fn w() -> RatFn {
    RatFn::var()
}

/// (w² − i)/w
fn shape_x() -> RatFn {
    let w2 = w().pow(2);
    (&w2 - &RatFn::constant(CycNum::i())).div(&w()).expect("w nonzero")
}

/// (w⁴ + 1)/w⁴
fn shape_p1() -> RatFn {
    let w4 = w().pow(4);
    (&w4 + &RatFn::one()).div(&w4).expect("w nonzero")
}

fn c_value() -> CycNum {
    &CycNum::i() * &CycNum::from_int(2)
}

fn eval_on(e: &Expr, vals: &BTreeMap<Sym, RatFn>) -> Result<RatFn> {
    e.eval_at(vals)
}

fn x1_w() -> RatFn {
    w().pow(2)
}

impl CollisionBranch {
    /// The printed determination (√2, 1, −1/√2).
    pub fn printed() -> Self {
        let s2 = CycNum::sqrt2();
        CollisionBranch {
            alpha: s2.clone(),
            beta: CycNum::one(),
            gamma0: -&s2.inv().expect("nonzero"),
        }
    }

    pub fn x1(&self) -> RatFn {
        x1_w()
    }

    pub fn x3(&self) -> RatFn {
        shape_x().scale(&self.alpha)
    }

    pub fn p3(&self) -> RatFn {
        shape_x().scale(&self.beta)
    }

    pub fn p1(&self) -> RatFn {
        shape_p1().scale(&self.gamma0)
    }

    /// Values of every symbol along the branch (x2 = x4 = p2 = p4 = 0,
    /// r1 = x1, r2 = −p3), as functions of w.
    pub fn point(&self) -> BTreeMap<Sym, RatFn> {
        let mut m = BTreeMap::new();
        m.insert(Sym::X1, self.x1());
        m.insert(Sym::X3, self.x3());
        m.insert(Sym::P1, self.p1());
        m.insert(Sym::P3, self.p3());
        for s in [Sym::X2, Sym::X4, Sym::P2, Sym::P4] {
            m.insert(s, RatFn::zero());
        }
        m.insert(Sym::R1, self.x1());
        m.insert(Sym::R2, -&self.p3());
        m
    }

    /// Residuals x3·δX − F(X) of the S field in x1-time, for (x1, x3, p1, p3).
    pub fn residuals(&self) -> Result<[RatFn; 4]> {
        let f = restricted_field()?;
        let pt = self.point();
        let comps = [self.x1(), self.x3(), self.p1(), self.p3()];
        let x3 = self.x3();
        let mut out: [RatFn; 4] = Default::default();
        for k in 0..4 {
            let lhs = &x3 * &Chart::W.derive(&comps[k]);
            out[k] = &lhs - &eval_on(&f[k], &pt)?;
        }
        Ok(out)
    }

    pub fn c_along(&self) -> Result<RatFn> {
        eval_on(&first_integral_c(), &self.point())
    }

    pub fn h_along(&self) -> Result<RatFn> {
        eval_on(&restricted_h(), &self.point())
    }

    /// All CollisionBranch invariants: zero residuals, C ≡ 2i, H constant.
    pub fn check(&self) -> Result<()> {
        for (k, r) in self.residuals()?.iter().enumerate() {
            if !r.is_zero() {
                return Err(Error::NotASolution(format!("field residual {k} = {r:?}")));
            }
        }
        let c = self.c_along()?;
        if c.as_constant() != Some(c_value()) {
            return Err(Error::NotASolution(format!("C along branch = {c:?}")));
        }
        let h = self.h_along()?;
        if h.as_constant().is_none() {
            return Err(Error::NotASolution(format!("H along branch = {h:?}")));
        }
        Ok(())
    }

    /// True when x3 = √2·p3 along the branch.
    pub fn has_sqrt2_gauge(&self) -> bool {
        self.alpha == &CycNum::sqrt2() * &self.beta
    }
}

fn constant_ratio(num: &RatFn, den: &RatFn, what: &str) -> Result<CycNum> {
    let q = num.div(den)?;
    q.as_constant()
        .ok_or_else(|| Error::NoBranches(format!("{what} is not constant: {q:?}")))
}

/// Solve for all (α, β, γ0) over K; β is a free scale fixed by the gauge
/// x3 = √2·p3.
pub fn solve_collision_ansatz() -> Result<AnsatzSolution> {
    let f = restricted_field()?;
    let sx = shape_x();
    let sg = shape_p1();
    let x1 = x1_w();
    let d = |r: &RatFn| Chart::W.derive(r);

    // C = 2i: x3² = 2(C − x1 + 1/x1), so α² = 2(C − x1 + 1/x1)/sx²
    let rhs = &(&RatFn::constant(c_value()) - &x1) + &x1.inv()?;
    let alpha_sq_from_c = constant_ratio(&rhs.scale(&CycNum::from_int(2)), &sx.pow(2), "x3²/shape²")?;

    // ẋ3 = F3(x1): α²·sx·δsx = F3
    let mut pt: BTreeMap<Sym, RatFn> = BTreeMap::new();
    pt.insert(Sym::X1, x1.clone());
    let f3 = eval_on(&f[1], &pt)?;
    let alpha_sq_from_field = constant_ratio(&f3, &(&sx * &d(&sx)), "ẋ3 balance")?;
    if alpha_sq_from_c != alpha_sq_from_field {
        return Err(Error::NoBranches(format!(
            "C forces α² = {}, field forces α² = {}",
            alpha_sq_from_c.pretty(),
            alpha_sq_from_field.pretty()
        )));
    }
    let alpha_sq = alpha_sq_from_c.clone();

    // ẋ1 = x3: α·sx·δ(x1) = α·sx, shape-independent check
    pt.insert(Sym::X3, sx.clone());
    if &sx * &d(&x1) != eval_on(&f[0], &pt)? {
        return Err(Error::NoBranches("ẋ1 equation fails".into()));
    }

    // ṗ3 = −p1 with p1 = γ0·sg: αβ·sx·δsx = γ0·F(sg), so γ0 = κ·α·β
    pt.insert(Sym::P1, sg.clone());
    let fp3 = eval_on(&f[3], &pt)?;
    let kappa = constant_ratio(&(&sx * &d(&sx)), &fp3, "ṗ3 balance")?;

    // ṗ1 = F(p3) linear in p3: α·γ0·sx·δsg = β·F(sx) ⇒ α²κ·sx·δsg = F(sx)
    pt.insert(Sym::P3, sx.clone());
    let fp1 = eval_on(&f[2], &pt)?;
    let lhs = (&sx * &d(&sg)).scale(&(&alpha_sq * &kappa));
    if lhs != fp1 {
        return Err(Error::NoBranches(format!(
            "ṗ1 equation inconsistent: {lhs:?} vs {fp1:?}"
        )));
    }

    let alpha = sqrt_in_field(&alpha_sq)
        .ok_or_else(|| Error::NoBranches(format!("α² = {} has no square root in K", alpha_sq.pretty())))?;
    let inv_sqrt2 = CycNum::sqrt2().inv()?;
    let mut branches = Vec::new();
    for a in [alpha.clone(), -&alpha] {
        let beta = &a * &inv_sqrt2;
        let gamma0 = &(&kappa * &a) * &beta;
        let b = CollisionBranch { alpha: a, beta, gamma0 };
        b.check()?;
        branches.push(b);
    }
    branches.sort_by(|x, y| {
        let (p, q) = (x.alpha.to_complex(), y.alpha.to_complex());
        q.im.total_cmp(&p.im).then(q.re.total_cmp(&p.re))
    });
    Ok(AnsatzSolution {
        alpha_sq_from_c,
        alpha_sq_from_field,
        kappa,
        branches,
    })
}

/// The polynomial identity x3² = −2(x1 − i)²/x1 written in w.
pub fn c_constraint_residual(alpha_sq: &CycNum) -> Result<RatFn> {
    let x1 = x1_w();
    let lhs = shape_x().pow(2).scale(alpha_sq);
    let xi = &x1 - &RatFn::constant(CycNum::i());
    let rhs = (&xi * &xi).scale(&CycNum::from_int(-2)).div(&x1)?;
    Ok(&lhs - &rhs)
}
