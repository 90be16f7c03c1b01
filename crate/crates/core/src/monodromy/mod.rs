//! Numeric monodromy by analytic continuation of a fundamental matrix along
//! polyline loops, and group-level tests on the resulting matrices.

mod group;
mod loops;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactfield::roots::{numeric_roots, roots_in_field};
use crate::exactfield::{Poly, RatFn};
use crate::ode::{Dopri5, Stats, Tolerances};
use crate::opalgebra::{DiffOp, HGParams};
use crate::variational::VarSystem;

pub use group::{char_poly, commutator_defect, group_tests, GroupTests, ABELIAN_TOL};
pub use loops::{loop_set, square_loop, Loop, LoopSet, CLEARANCE};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Debug)]
struct CRat {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

fn abs_horner(c: &[Complex64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

impl CRat {
    fn from_ratfn(f: &RatFn) -> Self {
        CRat {
            num: f.num().to_complex_coeffs(),
            den: f.den().to_complex_coeffs(),
        }
    }

    fn eval(&self, x: Complex64) -> Option<Complex64> {
        let d = horner(&self.den, x);
        if d.norm() <= 1e-13 * abs_horner(&self.den, x.norm()) {
            return None;
        }
        Some(horner(&self.num, x) / d)
    }
}

/// δY = A(x)·Y with A rational, evaluated in double precision.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub n: usize,
    entries: Vec<Option<CRat>>,
    pub singularities: Vec<Complex64>,
}

fn singular_points(p: &Poly) -> Vec<Complex64> {
    let exact = roots_in_field(p);
    let found: usize = exact.iter().map(|(_, m)| m).sum();
    if Some(found) == p.degree() {
        exact.iter().map(|(r, _)| r.to_complex()).collect()
    } else {
        let mut pts: Vec<Complex64> = Vec::new();
        for z in numeric_roots(&p.squarefree_part()) {
            if pts.iter().all(|q| (q - z).norm() > 1e-9) {
                pts.push(z);
            }
        }
        pts
    }
}

impl LinearSystem {
    fn build(n: usize, entries: Vec<RatFn>) -> Self {
        let den = entries.iter().fold(Poly::one(), |acc, e| Poly::lcm(&acc, e.den()));
        LinearSystem {
            n,
            entries: entries
                .iter()
                .map(|e| (!e.is_zero()).then(|| CRat::from_ratfn(e)))
                .collect(),
            singularities: singular_points(&den),
        }
    }

    /// Companion form of the monic operator: y_k′ = y_{k+1}, y_{n−1}′ = −Σ a_k y_k.
    pub fn companion(l: &DiffOp) -> Result<Self> {
        if !l.chart().is_plain() {
            return Err(Error::UnsupportedChart(format!(
                "companion system on chart {}",
                l.chart()
            )));
        }
        let m = l.monic()?;
        let n = m.order().ok_or(Error::DivisionByZero)?;
        if n == 0 {
            return Err(Error::InvalidArgument(
                "order-0 operator has no companion system".into(),
            ));
        }
        let mut e = vec![RatFn::zero(); n * n];
        for k in 0..n - 1 {
            e[k * n + k + 1] = RatFn::one();
        }
        for k in 0..n {
            e[(n - 1) * n + k] = -&m.coeff(k);
        }
        Ok(Self::build(n, e))
    }

    pub fn from_varsystem(s: &VarSystem) -> Result<Self> {
        if !s.chart.is_plain() {
            return Err(Error::UnsupportedChart(format!("system on chart {}", s.chart)));
        }
        let e = (0..s.n * s.n).map(|k| s.get(k / s.n, k % s.n).clone()).collect();
        Ok(Self::build(s.n, e))
    }

    pub fn eval(&self, x: Complex64) -> Result<CMatrix> {
        let n = self.n;
        let mut m = CMatrix::zeros(n, n);
        for (k, e) in self.entries.iter().enumerate() {
            if let Some(e) = e {
                m[(k / n, k % n)] = e
                    .eval(x)
                    .ok_or_else(|| Error::SingularEvaluation(format!("coefficient pole at {x}")))?;
            }
        }
        Ok(m)
    }
}

pub fn companion_system(l: &DiffOp) -> Result<LinearSystem> {
    LinearSystem::companion(l)
}

#[derive(Clone, Debug)]
pub struct MonodromyMatrix {
    pub matrix: CMatrix,
    /// ‖Y − Y_refined‖_F / ‖Y_refined‖_F between the run and its re-run.
    pub residual: f64,
    pub loop_tag: String,
    pub stats: Stats,
}

impl MonodromyMatrix {
    pub fn det(&self) -> Complex64 {
        self.matrix.determinant()
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        eigenvalues(&self.matrix)
    }

    /// Row-major rows with 17 significant digits.
    pub fn rows_text(&self) -> Vec<String> {
        format_rows(&self.matrix)
    }
}

pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    nalgebra::Schur::new(m.clone())
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default()
}

pub fn format_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

pub fn format_rows(m: &CMatrix) -> Vec<String> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| format_complex(m[(r, c)]))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// Transport of the fundamental matrix from the identity along the polyline.
fn transport(sys: &LinearSystem, lp: &Loop, tol: Tolerances) -> Result<(CMatrix, Stats)> {
    let n = sys.n;
    let mut y: Vec<Complex64> = CMatrix::identity(n, n).as_slice().to_vec();
    let mut stats = Stats::default();
    for w in lp.vertices.windows(2) {
        let (z0, z1) = (w[0], w[1]);
        let len = (z1 - z0).norm();
        if len == 0.0 {
            continue;
        }
        let dir = (z1 - z0) / len;
        let mut f = |t: f64, yv: &[Complex64], dy: &mut [Complex64]| -> Result<()> {
            let a = sys.eval(z0 + dir * t)? * dir;
            let ym = nalgebra::DMatrixView::from_slice(yv, n, n);
            let prod = a * ym;
            dy.copy_from_slice(prod.as_slice());
            Ok(())
        };
        let mut rk = Dopri5::new(0.0, y, tol);
        rk.advance_to(len, &mut f, &mut |_, _| true)?;
        stats.accepted += rk.stats.accepted;
        stats.rejected += rk.stats.rejected;
        stats.evaluations += rk.stats.evaluations;
        stats.largest_step = stats.largest_step.max(rk.stats.largest_step);
        y = rk.y;
    }
    Ok((CMatrix::from_column_slice(n, n, &y), stats))
}

/// Integrator tolerance relative to the requested transport tolerance.
const INNER_FACTOR: f64 = 1e-2;

/// Continue the identity along `lp`; a second run with half the largest step
/// and a 32× tighter tolerance supplies the residual estimate.
pub fn continue_along(sys: &LinearSystem, lp: &Loop, tol: f64) -> Result<MonodromyMatrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    lp.check(&sys.singularities, CLEARANCE)?;
    let inner = tol * INNER_FACTOR;
    let (m1, s1) = transport(sys, lp, Tolerances::new(inner))?;
    let refined = Tolerances::new(inner / 32.0).with_h_max(s1.largest_step / 2.0);
    let (m2, _) = transport(sys, lp, refined)?;
    let residual = (&m1 - &m2).norm() / m2.norm().max(f64::MIN_POSITIVE);
    if residual > tol {
        return Err(Error::ResidualAboveTolerance { residual, tol });
    }
    Ok(MonodromyMatrix {
        matrix: m2,
        residual,
        loop_tag: lp.tag.clone(),
        stats: s1,
    })
}

/// All loops concurrently; results keep the input order.
pub fn continue_all(sys: &LinearSystem, loops: &[Loop], tol: f64) -> Vec<Result<MonodromyMatrix>> {
    loops.par_iter().map(|lp| continue_along(sys, lp, tol)).collect()
}

/// Transport along `loops[0]`, then `loops[1]`, …: the product M_last⋯M_first.
pub fn path_product(mats: &[CMatrix]) -> Option<CMatrix> {
    let n = mats.first()?.nrows();
    Some(mats.iter().fold(CMatrix::identity(n, n), |acc, m| m * acc))
}

/// Coefficients c_0..c_n of Π(λ − r), c_n = 1.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, a) in p.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        p = next;
    }
    p
}

/// Largest coefficient-wise relative gap between det(λ − M) and
/// Π(λ − e^{2πiρ}) over the local exponents ρ. Compares spectra without
/// splitting near-degenerate eigenvalues.
pub fn local_spectrum_gap(m: &CMatrix, exponents: &[Complex64]) -> f64 {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let target: Vec<Complex64> = exponents.iter().map(|e| (two_pi_i * e).exp()).collect();
    char_poly(m)
        .iter()
        .zip(poly_from_roots(&target))
        .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
        .fold(0.0, f64::max)
}

/// Local monodromy eigenvalues of HG(a, b, c): {1, e^{−2πic}} at 0,
/// {1, e^{2πi(c−a−b)}} at 1, {e^{2πia}, e^{2πib}} at ∞.
pub fn hg_local_eigenvalues(p: &HGParams) -> [[Complex64; 2]; 3] {
    let e = |z: Complex64| (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * z).exp();
    let (a, b, c) = (p.a.to_complex(), p.b.to_complex(), p.c.to_complex());
    let one = Complex64::new(1.0, 0.0);
    [[one, e(-c)], [one, e(c - a - b)], [e(a), e(b)]]
}
