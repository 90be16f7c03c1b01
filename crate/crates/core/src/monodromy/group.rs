//! Commutator defects and common invariant lines of a set of matrices.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{eigenvalues, CMatrix};

/// Defects below this count as commuting.
pub const ABELIAN_TOL: f64 = 1e-6;

/// Relative residual accepted for a common eigenvector.
const EIGVEC_TOL: f64 = 1e-6;

/// ‖AB − BA‖_F / (‖A‖_F‖B‖_F)
pub fn commutator_defect(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm() / (a.norm() * b.norm())
}

/// Coefficients c_0..c_n of det(λI − M), c_n = 1 (Faddeev–LeVerrier).
pub fn char_poly(m: &CMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut mk = CMatrix::zeros(n, n);
    let id = CMatrix::identity(n, n);
    for k in 1..=n {
        mk = m * (&mk + &id * c[n - k + 1]);
        c[n - k] = -mk.trace() / k as f64;
    }
    c
}

#[derive(Clone, Debug)]
pub struct GroupTests {
    /// (i, j, defect) for every pair i < j.
    pub defects: Vec<(usize, usize, f64)>,
    pub max_defect: f64,
    pub abelian: bool,
    /// A vector spanning a line invariant under every matrix, if one was found.
    pub common_eigenvector: Option<Vec<Complex64>>,
}

fn eigen_residual(m: &CMatrix, v: &nalgebra::DVector<Complex64>) -> f64 {
    let mv = m * v;
    let lambda = v.dotc(&mv) / v.dotc(v);
    (mv - v * lambda).norm() / (m.norm() * v.norm())
}

/// Every common eigenvector is an eigenvector of a generic combination
/// Σ t_k M_k; those are tested against each matrix.
fn common_eigenvector(mats: &[CMatrix]) -> Option<Vec<Complex64>> {
    let n = mats[0].nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6e69);
    let mut comb = CMatrix::zeros(n, n);
    for m in mats {
        let t = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        comb += m * (t / m.norm());
    }
    for lambda in eigenvalues(&comb) {
        let shifted = &comb - CMatrix::identity(n, n) * lambda;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t?;
        let k = (0..n).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))?;
        let v: nalgebra::DVector<Complex64> = vt.row(k).adjoint();
        if mats.iter().all(|m| eigen_residual(m, &v) < EIGVEC_TOL) {
            return Some(v.iter().copied().collect());
        }
    }
    None
}

pub fn group_tests(mats: &[CMatrix]) -> GroupTests {
    let mut defects = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            defects.push((i, j, commutator_defect(&mats[i], &mats[j])));
        }
    }
    let max_defect = defects.iter().map(|d| d.2).fold(0.0, f64::max);
    GroupTests {
        abelian: defects.iter().all(|d| d.2 < ABELIAN_TOL),
        max_defect,
        defects,
        common_eigenvector: if mats.is_empty() {
            None
        } else {
            common_eigenvector(mats)
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn diagonal_pair_commutes() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0), c(3.0)]));
        let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-1.0), c(5.0)]));
        let g = group_tests(&[a, b]);
        assert!(g.abelian);
        assert!(g.max_defect < 1e-15);
        assert!(g.common_eigenvector.is_some());
    }

    #[test]
    fn rotation_and_shear() {
        let r = CMatrix::from_row_slice(2, 2, &[c(0.0), c(-1.0), c(1.0), c(0.0)]);
        let s = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        let g = group_tests(&[r, s]);
        assert!(!g.abelian);
        assert!(g.max_defect > 0.1);
        assert!(g.common_eigenvector.is_none());
    }

    #[test]
    fn shared_line_detected() {
        // upper triangular: e1 is invariant under both
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(3.0)]);
        let b = CMatrix::from_row_slice(2, 2, &[c(4.0), c(-1.0), c(0.0), c(0.5)]);
        let g = group_tests(&[a, b]);
        assert!(!g.abelian);
        let v = g.common_eigenvector.unwrap();
        assert!(v[1].norm() < 1e-9);
    }

    #[test]
    fn char_poly_of_companion() {
        // companion of λ² − 3λ + 2
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-2.0), c(3.0)]);
        let p = char_poly(&m);
        assert!((p[0] - c(2.0)).norm() < 1e-14 && (p[1] - c(-3.0)).norm() < 1e-14);
    }
}
