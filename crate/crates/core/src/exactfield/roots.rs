//! Roots of polynomials over K that lie in K, and numeric roots otherwise.
//!
//! A root r ∈ K is pinned down by its four embeddings σ_k(r), k ∈ {1, 5, 7, 11};
//! the other four are complex conjugates. Candidates come from numeric roots of
//! the conjugated polynomials, are lifted to coordinates by inverting the
//! embedding matrix, rounded to rationals and then checked exactly.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::cycnum::DEGREE;
use super::{CycNum, Poly};

const HALF_EMBEDDINGS: [u32; 4] = [1, 5, 7, 11];
const MAX_DEN: i64 = 1 << 20;

/// Numeric roots of a complex polynomial given by ascending coefficients
/// (Aberth iteration, then Newton polish).
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let eval = |z: Complex64| {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    // Cauchy bound for the starting circle
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, th)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::zero();
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    s += (z[k] - zj).inv();
                }
            }
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    z
}

/// Numeric roots of a polynomial over K under the standard embedding.
pub fn numeric_roots(p: &Poly) -> Vec<Complex64> {
    complex_roots(&p.to_complex_coeffs())
}

fn embedding_inverse() -> DMatrix<f64> {
    // real system: rows Re σ_k(ζ^j), Im σ_k(ζ^j) for k in HALF_EMBEDDINGS
    let mut m = DMatrix::<f64>::zeros(DEGREE, DEGREE);
    for (r, &k) in HALF_EMBEDDINGS.iter().enumerate() {
        for j in 0..DEGREE {
            let z = CycNum::zeta_pow(j as i64).embed(k);
            m[(2 * r, j)] = z.re;
            m[(2 * r + 1, j)] = z.im;
        }
    }
    m.try_inverse().expect("embedding matrix is invertible")
}

/// Best rational approximation with denominator ≤ `max_den` (continued fractions).
pub fn rational_approx(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-12 * (1.0 + x.abs()) {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

fn lift(values: &[Complex64], inv: &DMatrix<f64>) -> Option<CycNum> {
    let mut rhs = DVector::<f64>::zeros(DEGREE);
    for (r, v) in values.iter().enumerate() {
        rhs[2 * r] = v.re;
        rhs[2 * r + 1] = v.im;
    }
    let sol = inv * rhs;
    let mut coeffs: [BigRational; DEGREE] = Default::default();
    for j in 0..DEGREE {
        let x = sol[j];
        coeffs[j] = if x.abs() < 1e-9 {
            BigRational::zero()
        } else {
            rational_approx(x, MAX_DEN)?
        };
        let back = coeffs[j].to_f64().unwrap_or(f64::NAN);
        if (back - x).abs() > 1e-6 * (1.0 + x.abs()) {
            return None;
        }
    }
    Some(CycNum::from_coeffs(coeffs))
}

/// All roots of `p` lying in K, with multiplicities, sorted by embedded value.
///
/// Exact: every returned root satisfies p(r) = 0 in K. Roots with huge
/// rational coordinates (denominators beyond 2^20) are missed.
pub fn roots_in_field(p: &Poly) -> Vec<(CycNum, usize)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let mut found: Vec<CycNum> = Vec::new();
    let mut rest = sf.clone();
    // pull out rational-looking and linear factors cheaply first
    if rest.coeff(0).is_zero() {
        found.push(CycNum::zero());
        rest = rest.exact_div(&Poly::var()).expect("x divides");
    }
    let inv = embedding_inverse();
    loop {
        let d = rest.degree().unwrap_or(0);
        if d == 0 {
            break;
        }
        if d == 1 {
            let r = -&rest.coeff(0).checked_div(&rest.coeff(1)).expect("nonzero");
            found.push(r);
            break;
        }
        let per: Vec<Vec<Complex64>> = HALF_EMBEDDINGS
            .iter()
            .map(|&k| complex_roots(&rest.galois(k).to_complex_coeffs()))
            .collect();
        let mut hit = None;
        'search: for a in &per[0] {
            for b in &per[1] {
                for c in &per[2] {
                    for e in &per[3] {
                        if let Some(r) = lift(&[*a, *b, *c, *e], &inv) {
                            if rest.eval(&r).is_zero() {
                                hit = Some(r);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        match hit {
            Some(r) => {
                let lin = Poly::from_coeffs(vec![-&r, CycNum::one()]);
                rest = rest.exact_div(&lin).expect("root divides");
                found.push(r);
            }
            None => break,
        }
    }
    let mut out: Vec<(CycNum, usize)> = found
        .into_iter()
        .map(|r| {
            let m = p.root_multiplicity(&r);
            (r, m)
        })
        .collect();
    out.sort_by(|x, y| {
        let (a, b) = (x.0.to_complex(), y.0.to_complex());
        a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
    });
    out
}

/// Square roots of `a` in K, if any (either sign).
pub fn sqrt_in_field(a: &CycNum) -> Option<CycNum> {
    if a.is_zero() {
        return Some(CycNum::zero());
    }
    let p = Poly::from_coeffs(vec![-a, CycNum::zero(), CycNum::one()]);
    roots_in_field(&p).into_iter().next().map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_minus_two() {
        let r = sqrt_in_field(&CycNum::from_int(-2)).unwrap();
        assert_eq!(&r * &r, CycNum::from_int(-2));
    }

    #[test]
    fn sqrt_of_i() {
        let r = sqrt_in_field(&CycNum::i()).unwrap();
        assert_eq!(&r * &r, CycNum::i());
    }

    #[test]
    fn no_sqrt_of_five() {
        assert!(sqrt_in_field(&CycNum::from_int(5)).is_none());
    }

    #[test]
    fn roots_with_multiplicity() {
        // x²(x − i)³(x² − x + 1)
        let i = CycNum::i();
        let mut p = Poly::from_roots(&[CycNum::zero(), CycNum::zero(), i.clone(), i.clone(), i.clone()]);
        p = &p * &Poly::from_ints(&[1, -1, 1]);
        let r = roots_in_field(&p);
        assert_eq!(r.len(), 4);
        let total: usize = r.iter().map(|x| x.1).sum();
        assert_eq!(total, 7);
        for (x, _) in &r {
            assert!(p.eval(x).is_zero());
        }
        assert!(r.iter().any(|(x, m)| *x == i && *m == 3));
    }

    #[test]
    fn half_plus_i_sqrt3_over_two() {
        // roots of x² − x + 1 are 1/2 ± i√3/2
        let r = roots_in_field(&Poly::from_ints(&[1, -1, 1]));
        let half = CycNum::frac(1, 2);
        let h = CycNum::i_sqrt3().scale(&BigRational::new(1.into(), 2.into()));
        assert!(r.iter().any(|(x, _)| *x == &half + &h));
        assert!(r.iter().any(|(x, _)| *x == &half - &h));
    }

    #[test]
    fn irrational_roots_are_skipped() {
        // x² − 5 has no roots in K
        assert!(roots_in_field(&Poly::from_ints(&[-5, 0, 1])).is_empty());
        let n = numeric_roots(&Poly::from_ints(&[-5, 0, 1]));
        assert_eq!(n.len(), 2);
        assert!(n.iter().any(|z| (z.re - 5f64.sqrt()).abs() < 1e-12));
    }

    #[test]
    fn continued_fractions() {
        let q = rational_approx(0.375, 1000).unwrap();
        assert_eq!(q, BigRational::new(3.into(), 8.into()));
        let q = rational_approx(-7.0 / 3.0, 1000).unwrap();
        assert_eq!(q, BigRational::new((-7).into(), 3.into()));
    }
}
