//! Expression DAG over the phase variables with radical-aware differentiation.
//!
//! r1 and r2 are ordinary symbols tied to the phase variables by
//! r1² = x1² + x2² and r2² = p3² + p4²; their gradients are registered rules,
//! so every partial of a rational expression in (x, p, r) stays rational.

mod identity;
mod mrat;
mod scalar;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::CycNum;

pub use identity::{identical, random_point, IdentityReport};
pub use mrat::{MPoly, MRat};
pub use scalar::Scalar;

/// Symbols that may appear in an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    X1,
    X2,
    X3,
    X4,
    P1,
    P2,
    P3,
    P4,
    R1,
    R2,
    U1,
    U2,
}

pub const NSYM: usize = 12;

impl Sym {
    pub const ALL: [Sym; NSYM] = [
        Sym::X1,
        Sym::X2,
        Sym::X3,
        Sym::X4,
        Sym::P1,
        Sym::P2,
        Sym::P3,
        Sym::P4,
        Sym::R1,
        Sym::R2,
        Sym::U1,
        Sym::U2,
    ];

    /// Canonical phase coordinates (x1..x4, p1..p4).
    pub const PHASE: [Sym; 8] = [Sym::X1, Sym::X2, Sym::X3, Sym::X4, Sym::P1, Sym::P2, Sym::P3, Sym::P4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Sym::X1 => "x1",
            Sym::X2 => "x2",
            Sym::X3 => "x3",
            Sym::X4 => "x4",
            Sym::P1 => "p1",
            Sym::P2 => "p2",
            Sym::P3 => "p3",
            Sym::P4 => "p4",
            Sym::R1 => "r1",
            Sym::R2 => "r2",
            Sym::U1 => "u1",
            Sym::U2 => "u2",
        }
    }

    pub fn is_radical(self) -> bool {
        matches!(self, Sym::R1 | Sym::R2)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Node {
    Const(CycNum),
    Var(Sym),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    Pow(Expr, i32),
}

/// Immutable, shareable expression node.
#[derive(Clone, PartialEq, Eq)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn wrap(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn constant(c: CycNum) -> Self {
        Self::wrap(Node::Const(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(CycNum::from_int(n))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn var(s: Sym) -> Self {
        Self::wrap(Node::Var(s))
    }

    pub fn as_constant(&self) -> Option<&CycNum> {
        match &*self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn sum(terms: Vec<Expr>) -> Self {
        let mut flat = Vec::new();
        let mut c = CycNum::zero();
        for t in terms {
            match &*t.0 {
                Node::Const(k) => c += k,
                Node::Add(inner) => {
                    for u in inner {
                        match &*u.0 {
                            Node::Const(k) => c += k,
                            _ => flat.push(u.clone()),
                        }
                    }
                }
                _ => flat.push(t),
            }
        }
        if !c.is_zero() {
            flat.push(Expr::constant(c));
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().expect("one term"),
            _ => Self::wrap(Node::Add(flat)),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Self {
        let mut flat = Vec::new();
        let mut c = CycNum::one();
        for t in factors {
            match &*t.0 {
                Node::Const(k) => c *= k,
                Node::Mul(inner) => {
                    for u in inner {
                        match &*u.0 {
                            Node::Const(k) => c *= k,
                            _ => flat.push(u.clone()),
                        }
                    }
                }
                _ => flat.push(t),
            }
        }
        if c.is_zero() {
            return Expr::zero();
        }
        if !c.is_one() {
            flat.insert(0, Expr::constant(c));
        }
        match flat.len() {
            0 => Expr::one(),
            1 => flat.pop().expect("one factor"),
            _ => Self::wrap(Node::Mul(flat)),
        }
    }

    pub fn quotient(a: Expr, b: Expr) -> Self {
        if a.is_zero() {
            return Expr::zero();
        }
        if b.is_one() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_constant(), b.as_constant()) {
            if let Ok(q) = x.checked_div(y) {
                return Expr::constant(q);
            }
        }
        Self::wrap(Node::Div(a, b))
    }

    pub fn powi(&self, e: i32) -> Self {
        match e {
            0 => Expr::one(),
            1 => self.clone(),
            _ => {
                if let Some(c) = self.as_constant() {
                    if let Ok(v) = c.powi(e) {
                        return Expr::constant(v);
                    }
                }
                Self::wrap(Node::Pow(self.clone(), e))
            }
        }
    }

    /// Partial derivative with respect to a phase or control symbol.
    ///
    /// r1 and r2 follow ∂r1/∂x1 = x1/r1, ∂r1/∂x2 = x2/r1, ∂r2/∂p3 = p3/r2,
    /// ∂r2/∂p4 = p4/r2. Differentiating with respect to r1 or r2 directly is
    /// an error.
    pub fn differentiate(&self, v: Sym) -> Result<Expr> {
        if v.is_radical() {
            return Err(Error::InvalidArgument(format!(
                "cannot differentiate with respect to radical {v}"
            )));
        }
        Ok(self.diff(v))
    }

    fn diff(&self, v: Sym) -> Expr {
        match &*self.0 {
            Node::Const(_) => Expr::zero(),
            Node::Var(s) => {
                if *s == v {
                    return Expr::one();
                }
                match (s, v) {
                    (Sym::R1, Sym::X1 | Sym::X2) | (Sym::R2, Sym::P3 | Sym::P4) => {
                        Expr::quotient(Expr::var(v), self.clone())
                    }
                    _ => Expr::zero(),
                }
            }
            Node::Add(ts) => Expr::sum(ts.iter().map(|t| t.diff(v)).collect()),
            Node::Mul(fs) => {
                let mut terms = Vec::new();
                for k in 0..fs.len() {
                    let d = fs[k].diff(v);
                    if d.is_zero() {
                        continue;
                    }
                    let mut p: Vec<Expr> = Vec::with_capacity(fs.len());
                    for (j, f) in fs.iter().enumerate() {
                        p.push(if j == k { d.clone() } else { f.clone() });
                    }
                    terms.push(Expr::product(p));
                }
                Expr::sum(terms)
            }
            Node::Div(a, b) => {
                let da = a.diff(v);
                let db = b.diff(v);
                let first = Expr::quotient(da, b.clone());
                if db.is_zero() {
                    return first;
                }
                let second = Expr::quotient(Expr::product(vec![a.clone(), db]), b.powi(2));
                Expr::sum(vec![first, -second])
            }
            Node::Pow(b, e) => {
                let db = b.diff(v);
                if db.is_zero() {
                    return Expr::zero();
                }
                Expr::product(vec![Expr::int(*e as i64), b.powi(e - 1), db])
            }
        }
    }

    /// Evaluate with values supplied by `env`; unassigned symbols are an error.
    pub fn eval<T: Scalar>(&self, env: &dyn Fn(Sym) -> Option<T>) -> Result<T> {
        match &*self.0 {
            Node::Const(c) => Ok(T::from_cyc(c)),
            Node::Var(s) => env(*s).ok_or_else(|| Error::InvalidArgument(format!("no value for {s}"))),
            Node::Add(ts) => {
                let mut acc = ts[0].eval(env)?;
                for t in &ts[1..] {
                    acc = acc.add(&t.eval(env)?);
                }
                Ok(acc)
            }
            Node::Mul(fs) => {
                let mut acc = fs[0].eval(env)?;
                for f in &fs[1..] {
                    acc = acc.mul(&f.eval(env)?);
                }
                Ok(acc)
            }
            Node::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(Error::SingularEvaluation(format!("denominator {b:?} vanishes")));
                }
                a.eval(env)?.div(&d)
            }
            Node::Pow(b, e) => b.eval(env)?.powi(*e),
        }
    }

    /// Evaluate at an assignment map.
    pub fn eval_at<T: Scalar>(&self, point: &BTreeMap<Sym, T>) -> Result<T> {
        self.eval(&|s| point.get(&s).cloned())
    }

    /// Replace symbols by expressions.
    pub fn substitute(&self, map: &BTreeMap<Sym, Expr>) -> Expr {
        match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::Var(s) => map.get(s).cloned().unwrap_or_else(|| self.clone()),
            Node::Add(ts) => Expr::sum(ts.iter().map(|t| t.substitute(map)).collect()),
            Node::Mul(fs) => Expr::product(fs.iter().map(|t| t.substitute(map)).collect()),
            Node::Div(a, b) => Expr::quotient(a.substitute(map), b.substitute(map)),
            Node::Pow(b, e) => b.substitute(map).powi(*e),
        }
    }

    /// Symbols occurring in the expression.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut seen = [false; NSYM];
        self.collect_syms(&mut seen);
        Sym::ALL.iter().copied().filter(|s| seen[s.index()]).collect()
    }

    fn collect_syms(&self, seen: &mut [bool; NSYM]) {
        match &*self.0 {
            Node::Const(_) => {}
            Node::Var(s) => seen[s.index()] = true,
            Node::Add(ts) | Node::Mul(ts) => ts.iter().for_each(|t| t.collect_syms(seen)),
            Node::Div(a, b) => {
                a.collect_syms(seen);
                b.collect_syms(seen);
            }
            Node::Pow(b, _) => b.collect_syms(seen),
        }
    }

    /// Exact normal form as a multivariate rational function.
    pub fn to_mrat(&self) -> Result<MRat> {
        self.eval(&|s| Some(MRat::var(s)))
    }

    /// Exact zero test through [`MRat`] (r1, r2 treated as independent symbols).
    pub fn is_identically_zero(&self) -> Result<bool> {
        Ok(self.to_mrat()?.is_zero())
    }

    /// Number of distinct nodes reachable from the root.
    pub fn node_count(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        self.count(&mut seen);
        seen.len()
    }

    fn count(&self, seen: &mut std::collections::HashSet<*const Node>) {
        if !seen.insert(Arc::as_ptr(&self.0)) {
            return;
        }
        match &*self.0 {
            Node::Add(ts) | Node::Mul(ts) => ts.iter().for_each(|t| t.count(seen)),
            Node::Div(a, b) => {
                a.count(seen);
                b.count(seen);
            }
            Node::Pow(b, _) => b.count(seen),
            _ => {}
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => {
                let s = c.pretty();
                if c.is_rational() && !s.contains('/') {
                    write!(f, "{s}")
                } else {
                    write!(f, "({s})")
                }
            }
            Node::Var(s) => write!(f, "{s}"),
            Node::Add(ts) => {
                write!(f, "(")?;
                for (k, t) in ts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Node::Mul(fs) => {
                for (k, t) in fs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Node::Div(a, b) => write!(f, "{a}/({b})"),
            Node::Pow(b, e) => write!(f, "{b}^{e}"),
        }
    }
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        Expr::sum(vec![self.clone(), o.clone()])
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        Expr::sum(vec![self.clone(), -o])
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        Expr::product(vec![self.clone(), o.clone()])
    }
}

impl<'a> Div<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn div(self, o: &Expr) -> Expr {
        Expr::quotient(self.clone(), o.clone())
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product(vec![Expr::int(-1), self.clone()])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Shorthand for a symbol.
pub fn v(s: Sym) -> Expr {
    Expr::var(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn radical_rule() {
        let r2 = v(Sym::R2);
        let d = r2.differentiate(Sym::P3).unwrap();
        let expected = v(Sym::P3) / v(Sym::R2);
        assert!((d - expected).is_identically_zero().unwrap());
        assert!(r2.differentiate(Sym::X1).unwrap().is_zero());
        assert!(r2.differentiate(Sym::R2).is_err());
    }

    #[test]
    fn evaluation_and_singularity() {
        let e = v(Sym::P1) * v(Sym::X3) - v(Sym::P3) / v(Sym::X1).powi(2);
        let mut pt = BTreeMap::new();
        pt.insert(Sym::P1, CycNum::from_int(2));
        pt.insert(Sym::X3, CycNum::from_int(3));
        pt.insert(Sym::P3, CycNum::from_int(4));
        pt.insert(Sym::X1, CycNum::from_int(2));
        assert_eq!(e.eval_at(&pt).unwrap(), CycNum::from_int(5));
        pt.insert(Sym::X1, CycNum::zero());
        assert!(matches!(e.eval_at(&pt), Err(Error::SingularEvaluation(_))));
        let mut cpt = BTreeMap::new();
        cpt.insert(Sym::X1, Complex64::new(0.0, 1.0));
        let sq = v(Sym::X1).powi(2);
        assert!((sq.eval_at(&cpt).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn substitution_restricts() {
        let e = v(Sym::X2) * v(Sym::P4) + v(Sym::R1);
        let mut m = BTreeMap::new();
        m.insert(Sym::X2, Expr::zero());
        m.insert(Sym::R1, v(Sym::X1));
        let r = e.substitute(&m);
        assert_eq!(r.symbols(), vec![Sym::X1]);
    }

    #[test]
    fn product_rule_and_powers() {
        let x = v(Sym::X1);
        let e = &x.powi(3) * &(Expr::one() / x.clone());
        let d = e.differentiate(Sym::X1).unwrap();
        let expected = Expr::int(2) * x;
        assert!((d - expected).is_identically_zero().unwrap());
    }
}
