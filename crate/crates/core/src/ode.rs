//! Adaptive Dormand–Prince 5(4) integration for real or complex systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type an integrated state is made of.
pub trait OdeValue: Copy + Send + Sync {
    fn zero() -> Self;
    fn axpy(self, h: f64, k: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn abs(self) -> f64;
}

impl OdeValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn axpy(self, h: f64, k: Self) -> Self {
        self + h * k
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
}

impl OdeValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn axpy(self, h: f64, k: Self) -> Self {
        self + k * h
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn abs(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Tolerances {
    pub fn new(tol: f64) -> Self {
        Tolerances {
            rtol: tol,
            atol: tol,
            h_max: f64::INFINITY,
            h_min: 1e-14,
            max_steps: 2_000_000,
        }
    }

    pub fn with_h_max(mut self, h: f64) -> Self {
        self.h_max = h;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    pub largest_step: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrator state carried across calls so an output grid can be produced by
/// repeated [`Dopri5::advance_to`].
pub struct Dopri5<V: OdeValue> {
    pub t: f64,
    pub y: Vec<V>,
    h: f64,
    tol: Tolerances,
    pub stats: Stats,
    k: [Vec<V>; 7],
    fsal_valid: bool,
}

impl<V: OdeValue> Dopri5<V> {
    pub fn new(t0: f64, y0: Vec<V>, tol: Tolerances) -> Self {
        let n = y0.len();
        let z = vec![V::zero(); n];
        Dopri5 {
            t: t0,
            y: y0,
            h: 0.0,
            tol,
            stats: Stats::default(),
            k: [z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z],
            fsal_valid: false,
        }
    }

    fn stage(&self, y: &mut [V], h: f64, coeffs: &[(usize, f64)]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut v = self.y[i];
            for &(s, a) in coeffs {
                v = v.axpy(h * a, self.k[s][i]);
            }
            *yi = v;
        }
    }

    /// Integrate to `t_end`. `stop` is consulted after every accepted step and
    /// may end the run early (returns `Ok(false)` in that case).
    pub fn advance_to<F, S>(&mut self, t_end: f64, f: &mut F, stop: &mut S) -> Result<bool>
    where
        F: FnMut(f64, &[V], &mut [V]) -> Result<()>,
        S: FnMut(f64, &[V]) -> bool,
    {
        let n = self.y.len();
        let dir = if t_end >= self.t { 1.0 } else { -1.0 };
        if (t_end - self.t).abs() == 0.0 {
            return Ok(true);
        }
        if !self.fsal_valid {
            let (t, y) = (self.t, self.y.clone());
            f(t, &y, &mut self.k[0])?;
            self.stats.evaluations += 1;
            self.fsal_valid = true;
        }
        if self.h == 0.0 {
            let scale: f64 = self
                .y
                .iter()
                .zip(&self.k[0])
                .map(|(y, k)| k.abs() / (self.tol.atol + self.tol.rtol * y.abs()))
                .fold(0.0, f64::max);
            let guess = if scale > 0.0 { 0.01 / scale } else { 1e-3 };
            self.h = guess
                .min(self.tol.h_max)
                .min((t_end - self.t).abs())
                .max(self.tol.h_min);
        }
        let mut ytmp = vec![V::zero(); n];
        let mut ynew = vec![V::zero(); n];
        loop {
            let remaining = (t_end - self.t).abs();
            if remaining <= 1e-15 * (1.0 + t_end.abs()) {
                self.t = t_end;
                return Ok(true);
            }
            if self.stats.accepted + self.stats.rejected >= self.tol.max_steps {
                return Err(Error::StepUnderflow(format!("step budget exhausted at t = {}", self.t)));
            }
            let mut h = self.h.min(self.tol.h_max).min(remaining);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let hs = dir * h;
            let t = self.t;
            self.stage(&mut ytmp, hs, &[(0, A21)]);
            f(t + C2 * hs, &ytmp, &mut self.k[1])?;
            self.stage(&mut ytmp, hs, &[(0, A31), (1, A32)]);
            f(t + C3 * hs, &ytmp, &mut self.k[2])?;
            self.stage(&mut ytmp, hs, &[(0, A41), (1, A42), (2, A43)]);
            f(t + C4 * hs, &ytmp, &mut self.k[3])?;
            self.stage(&mut ytmp, hs, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
            f(t + C5 * hs, &ytmp, &mut self.k[4])?;
            self.stage(&mut ytmp, hs, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
            f(t + hs, &ytmp, &mut self.k[5])?;
            self.stage(&mut ynew, hs, &[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)]);
            f(t + hs, &ynew, &mut self.k[6])?;
            self.stats.evaluations += 6;

            let mut err = 0.0f64;
            for i in 0..n {
                let mut e = V::zero();
                for (s, c) in [(0, E1), (2, E3), (3, E4), (4, E5), (5, E6), (6, E7)] {
                    e = e.axpy(hs * c, self.k[s][i]);
                }
                let sc = self.tol.atol + self.tol.rtol * self.y[i].abs().max(ynew[i].abs());
                err = err.max(e.abs() / sc);
            }
            if !err.is_finite() {
                err = 1e10;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                self.t = if last { t_end } else { t + hs };
                std::mem::swap(&mut self.y, &mut ynew);
                self.k.swap(0, 6);
                self.stats.accepted += 1;
                self.stats.largest_step = self.stats.largest_step.max(h);
                if !last || fac < 1.0 {
                    self.h = h * fac;
                }
                if !stop(self.t, &self.y) {
                    return Ok(false);
                }
                if last {
                    return Ok(true);
                }
            } else {
                self.stats.rejected += 1;
                self.h = h * fac.min(1.0);
                if self.h < self.tol.h_min {
                    return Err(Error::StepUnderflow(format!("h = {:.3e} at t = {}", self.h, self.t)));
                }
            }
        }
    }
}

/// One-shot integration from t0 to t1.
pub fn integrate<V, F>(f: &mut F, t0: f64, y0: Vec<V>, t1: f64, tol: Tolerances) -> Result<(Vec<V>, Stats)>
where
    V: OdeValue,
    F: FnMut(f64, &[V], &mut [V]) -> Result<()>,
{
    let mut s = Dopri5::new(t0, y0, tol);
    s.advance_to(t1, f, &mut |_, _| true)?;
    Ok((s.y, s.stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut f = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = -y[0];
            Ok(())
        };
        let (y, _) = integrate(&mut f, 0.0, vec![1.0], 3.0, Tolerances::new(1e-12)).unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn complex_rotation_full_turn() {
        let mut f = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = Complex64::new(0.0, 1.0) * y[0];
            Ok(())
        };
        let tau = 2.0 * std::f64::consts::PI;
        let (y, _) = integrate(&mut f, 0.0, vec![Complex64::new(1.0, 0.0)], tau, Tolerances::new(1e-12)).unwrap();
        assert!((y[0] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn stop_predicate_halts() {
        let mut f = |_t: f64, _y: &[f64], dy: &mut [f64]| {
            dy[0] = 1.0;
            Ok(())
        };
        let mut s = Dopri5::new(0.0, vec![0.0], Tolerances::new(1e-10).with_h_max(0.1));
        let done = s.advance_to(10.0, &mut f, &mut |_, y| y[0] < 1.0).unwrap();
        assert!(!done);
        assert!(s.y[0] >= 1.0 && s.y[0] < 1.2);
    }

    #[test]
    fn backward_integration() {
        let mut f = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[0];
            Ok(())
        };
        let (y, _) = integrate(&mut f, 1.0, vec![1.0], 0.0, Tolerances::new(1e-12)).unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-11);
    }
}
