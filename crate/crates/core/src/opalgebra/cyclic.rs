//! Cyclic-vector reduction of a first-order system to a scalar operator.

use super::DiffOp;
use crate::error::{Error, Result};
use crate::exactfield::RatFn;
use crate::variational::VarSystem;

/// Linear forms L0 = e_k, L_{j+1} = L_j·A + δ(L_j), so that δ^j X_k = L_j·X.
pub fn cyclic_forms(sys: &VarSystem, k: usize, count: usize) -> Result<Vec<Vec<RatFn>>> {
    let n = sys.n;
    if k >= n {
        return Err(Error::InvalidArgument(format!(
            "coordinate {k} out of range for n = {n}"
        )));
    }
    let mut cur = vec![RatFn::zero(); n];
    cur[k] = RatFn::one();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut next: Vec<RatFn> = cur.iter().map(|e| sys.chart.derive(e)).collect();
        for (r, lr) in cur.iter().enumerate() {
            if lr.is_zero() {
                continue;
            }
            for (c, slot) in next.iter_mut().enumerate() {
                let a = sys.get(r, c);
                if !a.is_zero() {
                    *slot = &*slot + &(lr * a);
                }
            }
        }
        out.push(std::mem::replace(&mut cur, next));
    }
    Ok(out)
}

struct Pivot {
    row: Vec<RatFn>,
    col: usize,
    /// row = Σ comb[i]·L_i
    comb: Vec<RatFn>,
}

/// Monic scalar operator annihilating coordinate `k` of every solution of
/// δX = A·X. The order is the first j at which L_j depends on L_0..L_{j−1};
/// it may be smaller than n.
pub fn cyclic_reduce(sys: &VarSystem, k: usize) -> Result<DiffOp> {
    let n = sys.n;
    let forms = cyclic_forms(sys, k, n + 1)?;
    let mut pivots: Vec<Pivot> = Vec::new();
    for (j, form) in forms.into_iter().enumerate() {
        let mut v = form;
        let mut comb = vec![RatFn::zero(); j + 1];
        comb[j] = RatFn::one();
        for p in &pivots {
            if v[p.col].is_zero() {
                continue;
            }
            let f = v[p.col].div(&p.row[p.col])?;
            for (x, y) in v.iter_mut().zip(&p.row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            for (x, y) in comb.iter_mut().zip(&p.comb) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        match v.iter().position(|e| !e.is_zero()) {
            None => return Ok(DiffOp::new(sys.chart, comb)),
            Some(col) => pivots.push(Pivot { row: v, col, comb }),
        }
    }
    Err(Error::InvalidArgument("no dependency among n + 1 forms".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Chart, CycNum};

    fn sys(n: usize, entries: Vec<RatFn>) -> VarSystem {
        VarSystem::new(n, entries, (1..=n).map(|k| format!("y{k}")).collect(), Chart::X1).unwrap()
    }

    #[test]
    fn diagonal() {
        let x = RatFn::var();
        let s = sys(
            2,
            vec![
                x.inv().unwrap(),
                RatFn::zero(),
                RatFn::zero(),
                x.inv().unwrap().scale(&CycNum::from_int(2)),
            ],
        );
        let l = cyclic_reduce(&s, 0).unwrap();
        assert_eq!(l, DiffOp::new(Chart::X1, vec![-&x.inv().unwrap(), RatFn::one()]));
    }

    #[test]
    fn normal_block_gives_hyp_variant() {
        use crate::mechanics::solve_collision_ansatz;
        use crate::opalgebra::hyp_operator;
        use crate::variational::{displayed_a3, extract_normal_block, x1_time_block_system};
        let b = solve_collision_ansatz().unwrap().branches[0].clone();
        let a3 = extract_normal_block(&x1_time_block_system(&b).unwrap()).unwrap();
        let l = cyclic_reduce(&a3, 3).unwrap();
        assert!(l.is_even());
        assert_eq!(l.w_to_x1().unwrap(), hyp_operator(true));
        let fixture = displayed_a3(&b.p3()).unwrap();
        let lf = cyclic_reduce(&fixture, 0).unwrap();
        assert_eq!(lf.w_to_x1().unwrap(), hyp_operator(true));
    }

    #[test]
    fn companion_round_trip() {
        // y'' = x·y
        let x = RatFn::var();
        let s = sys(2, vec![RatFn::zero(), RatFn::one(), x.clone(), RatFn::zero()]);
        let l = cyclic_reduce(&s, 0).unwrap();
        assert_eq!(l, DiffOp::new(Chart::X1, vec![-&x, RatFn::zero(), RatFn::one()]));
    }
}
