use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;

use kni_core::classify::{fuchs_test, kimura_classify};
use kni_core::exactfield::{Chart, CycNum, Poly, RatFn};
use kni_core::opalgebra::{cyclic_reduce, reduce_order, DiffOp, HGParams};
use kni_core::symexpr::{Expr, Sym};
use kni_core::variational::VarSystem;

fn small_cyc() -> impl Strategy<Value = CycNum> {
    (-4i64..=4, 1i64..=3, 0i64..24, -3i64..=3)
        .prop_map(|(n, d, k, r)| &(&CycNum::frac(n, d) * &CycNum::zeta_pow(k)) + &CycNum::from_int(r))
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_cyc(), 1..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn small_ratfn() -> impl Strategy<Value = RatFn> {
    (small_poly(2), small_poly(1))
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn coefficient() -> impl Strategy<Value = RatFn> {
    (small_poly(1), small_poly(1))
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn small_op(max_order: usize) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(coefficient(), 1..=max_order + 1).prop_map(|c| DiffOp::new(Chart::X1, c))
}

fn small_rational() -> impl Strategy<Value = CycNum> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| CycNum::frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leibniz(f in small_ratfn(), g in small_ratfn()) {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ore_product_acts_as_composition(a in small_op(1), b in small_op(1), f in small_ratfn()) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.apply(&f), a.apply(&b.apply(&f)));
        // D·g = g·D + g′
        let g = b.coeff(0);
        let dg = DiffOp::d(Chart::X1).mul(&DiffOp::scalar(Chart::X1, g.clone())).unwrap();
        prop_assert_eq!(dg, DiffOp::new(Chart::X1, vec![g.derivative(), g]));
    }

    #[test]
    fn ore_associativity(a in small_op(1), b in small_op(1), c in small_op(1)) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn chart_changes_commute_with_application(l in small_op(2), f in small_ratfn(), a in small_cyc(), b in small_cyc()) {
        let lf = l.apply(&f);
        let w = l.x1_to_w().unwrap();
        prop_assert_eq!(w.apply(&f.inflate2()), lf.inflate2());
        prop_assert_eq!(w.w_to_x1().unwrap(), l.clone());
        prop_assume!(!a.is_zero());
        // u = a·x + b, so x = (u − b)/a
        let ai = a.inv().unwrap();
        let bi = -&(&b * &ai);
        let u = l.affine_subst(&a, &b, Chart::U).unwrap();
        prop_assert_eq!(u.apply(&f.compose_affine(&ai, &bi)), lf.compose_affine(&ai, &bi));
        let t = l.invert().unwrap();
        prop_assert_eq!(t.apply(&f.compose_inverse()), lf.compose_inverse());
    }

    #[test]
    fn reduce_order_recovers_cofactor(m in small_op(2), r0 in coefficient()) {
        let right = DiffOp::new(Chart::X1, vec![-&r0, RatFn::one()]);
        let l = m.mul(&right).unwrap();
        prop_assert_eq!(reduce_order(&l, &r0).unwrap(), m.twist(&r0).unwrap());
    }

    #[test]
    fn kimura_is_invariant_under_kummer_moves(a in small_rational(), b in small_rational(), c in small_rational()) {
        let tag = kimura_classify(&HGParams::new(a.clone(), b.clone(), c.clone())).tag;
        let swap = HGParams::new(b.clone(), a.clone(), c.clone());
        let euler = HGParams::new(&c - &a, &c - &b, c.clone());
        let pfaff = HGParams::new(a.clone(), &c - &b, c.clone());
        for p in [swap, euler, pfaff] {
            prop_assert_eq!(&kimura_classify(&p).tag, &tag, "{}", p);
        }
    }

    #[test]
    fn fuchs_exponents_of_hypergeometric(a in small_rational(), b in small_rational(), cn in -11i64..=11, cd in 2i64..=6) {
        prop_assume!(cn % cd != 0);
        let c = CycNum::frac(cn, cd);
        let p = HGParams::new(a.clone(), b.clone(), c.clone());
        let reports = fuchs_test(&p.operator()).unwrap();
        prop_assert!(reports.iter().all(|r| r.regular));
        let one = CycNum::one();
        let mut saw_zero = false;
        for r in &reports {
            let want = match r.point.to_string().as_str() {
                "0" => { saw_zero = true; vec![CycNum::zero(), &one - &c] }
                "1" => vec![CycNum::zero(), &(&c - &a) - &b],
                "∞" => vec![a.clone(), b.clone()],
                other => { prop_assert!(false, "unexpected singularity {}", other); unreachable!() }
            };
            let mut got: Vec<CycNum> = r.exponents.iter().map(|e| e.exact().cloned().unwrap()).collect();
            for w in &want {
                let k = got.iter().position(|g| g == w);
                prop_assert!(k.is_some(), "{} missing at {}", w, r.point);
                got.remove(k.unwrap());
            }
        }
        prop_assert!(saw_zero);
    }

    #[test]
    fn cyclic_reduce_constant_system(m in prop::collection::vec(-3i64..=3, 9)) {
        let entries: Vec<RatFn> = m.iter().map(|&v| RatFn::from_int(v)).collect();
        let names = vec!["y1".to_string(), "y2".to_string(), "y3".to_string()];
        let sys = VarSystem::new(3, entries, names, Chart::X1).unwrap();
        let l = cyclic_reduce(&sys, 0).unwrap().monic().unwrap();
        if l.order() != Some(3) {
            // e1 is not cyclic: the forms e1·A^j must satisfy q, with q read off L
            let mut row: Vec<CycNum> = vec![CycNum::one(), CycNum::zero(), CycNum::zero()];
            let mut acc = vec![CycNum::zero(); 3];
            for c in l.coeffs() {
                let c = c.as_constant().unwrap();
                for (a, r) in acc.iter_mut().zip(&row) {
                    *a += &(&c * r);
                }
                row = (0..3)
                    .map(|j| (0..3).fold(CycNum::zero(), |s, i| &s + &(&row[i] * &CycNum::from_int(m[3 * i + j]))))
                    .collect();
            }
            prop_assert!(acc.iter().all(CycNum::is_zero));
            return Ok(());
        }
        let e = |r: usize, c: usize| m[3 * r + c];
        let tr = e(0, 0) + e(1, 1) + e(2, 2);
        let minors = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0) + e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0)
            + e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1);
        let det = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        let want: Vec<RatFn> = [-det, minors, -tr, 1].iter().map(|&v| RatFn::from_int(v)).collect();
        prop_assert_eq!(l.coeffs(), &want[..]);
    }
}

#[derive(Clone, Debug)]
enum Tree {
    Var(Sym),
    Int(i64),
    Sum(Box<Tree>, Box<Tree>),
    Prod(Box<Tree>, Box<Tree>),
    Quot(Box<Tree>, Box<Tree>),
    Pow(Box<Tree>, i32),
}

impl Tree {
    fn expr(&self) -> Expr {
        match self {
            Tree::Var(s) => Expr::var(*s),
            Tree::Int(n) => Expr::int(*n),
            Tree::Sum(a, b) => Expr::sum(vec![a.expr(), b.expr()]),
            Tree::Prod(a, b) => Expr::product(vec![a.expr(), b.expr()]),
            Tree::Quot(a, b) => Expr::quotient(a.expr(), b.expr()),
            Tree::Pow(a, e) => a.expr().powi(*e),
        }
    }
}

const VARS: [Sym; 3] = [Sym::X1, Sym::X3, Sym::P3];

fn tree() -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![
        (0usize..3).prop_map(|k| Tree::Var(VARS[k])),
        (-3i64..=3).prop_map(Tree::Int),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Sum(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Prod(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Quot(Box::new(a), Box::new(b))),
            (inner, -2i32..=3).prop_map(|(a, e)| Tree::Pow(Box::new(a), e)),
        ]
    })
}

fn eval(e: &Expr, pt: &BTreeMap<Sym, Complex64>) -> Option<Complex64> {
    e.eval_at(pt).ok().filter(|z| z.is_finite() && z.norm() < 1e6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partials_match_central_differences(t in tree(), k in 0usize..3, re in prop::array::uniform3(0.5f64..2.0), im in prop::array::uniform3(-0.5f64..0.5)) {
        let e = t.expr();
        let v = VARS[k];
        let de = e.differentiate(v);
        prop_assume!(de.is_ok());
        let de = de.unwrap();
        let pt: BTreeMap<Sym, Complex64> = VARS.iter().enumerate().map(|(j, &s)| (s, Complex64::new(re[j], im[j]))).collect();
        let h = 1e-5;
        let mut plus = pt.clone();
        let mut minus = pt.clone();
        *plus.get_mut(&v).unwrap() += h;
        *minus.get_mut(&v).unwrap() -= h;
        let (Some(fp), Some(fm), Some(d), Some(f0)) = (eval(&e, &plus), eval(&e, &minus), eval(&de, &pt), eval(&e, &pt)) else {
            return Ok(());
        };
        let fd = (fp - fm) / (2.0 * h);
        let scale = 1.0 + f0.norm() + d.norm();
        prop_assert!((fd - d).norm() <= 1e-4 * scale, "{:?}: symbolic {} vs difference {}", t, d, fd);
    }
}
