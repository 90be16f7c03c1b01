//! Real extremals of the maximized Hamiltonian.

use std::io::Write;

use crate::error::{Error, Result};
use crate::ode::{Dopri5, Stats, Tolerances};

pub const CSV_HEADER: &str = "t,x1,x2,x3,x4,p1,p2,p3,p4,H,pv_norm";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealState {
    pub t: f64,
    /// (x1, x2, x3, x4, p1, p2, p3, p4)
    pub y: [f64; 8],
}

impl RealState {
    pub fn new(t: f64, y: [f64; 8]) -> Self {
        RealState { t, y }
    }

    pub fn pv_norm(&self) -> f64 {
        self.y[6].hypot(self.y[7])
    }
}

/// Field of H = p1x3 + p2x4 − (p3x1 + p4x2)/r³ + ‖(p3, p4)‖ with the
/// maximizing control u = (p3, p4)/‖(p3, p4)‖. With `thrust` off the last term
/// and the control are dropped (free Kepler motion plus its adjoint).
pub fn pmp_field_real(s: &RealState, eps_switch: f64, thrust: bool) -> Result<[f64; 8]> {
    let [x1, x2, x3, x4, p1, p2, p3, p4] = s.y;
    let r2 = x1 * x1 + x2 * x2;
    let r = r2.sqrt();
    if r == 0.0 {
        return Err(Error::SingularEvaluation(format!("collision at t = {}", s.t)));
    }
    let r3 = r2 * r;
    let r5 = r3 * r2;
    let (u1, u2) = if thrust {
        let rho = p3.hypot(p4);
        if rho <= eps_switch {
            return Err(Error::SingularControl { t: s.t, norm: rho });
        }
        (p3 / rho, p4 / rho)
    } else {
        (0.0, 0.0)
    };
    let px = p3 * x1 + p4 * x2;
    Ok([
        x3,
        x4,
        -x1 / r3 + u1,
        -x2 / r3 + u2,
        p3 / r3 - 3.0 * px * x1 / r5,
        p4 / r3 - 3.0 * px * x2 / r5,
        -p1,
        -p2,
    ])
}

/// Numeric value of the maximized (or drift-only) Hamiltonian.
pub fn h_real(y: &[f64; 8], thrust: bool) -> f64 {
    let [x1, x2, x3, x4, p1, p2, p3, p4] = *y;
    let r = x1.hypot(x2);
    let mut h = p1 * x3 + p2 * x4 - (p3 * x1 + p4 * x2) / (r * r * r);
    if thrust {
        h += p3.hypot(p4);
    }
    h
}

/// Keplerian energy (x3² + x4²)/2 − 1/r.
pub fn kepler_energy(y: &[f64; 8]) -> f64 {
    0.5 * (y[2] * y[2] + y[3] * y[3]) - 1.0 / y[0].hypot(y[1])
}

fn collision_c(y: &[f64; 8]) -> f64 {
    0.5 * y[2] * y[2] + y[0] - 1.0 / y[0]
}

#[derive(Clone, Debug)]
pub struct ExtremalOptions {
    pub tol: f64,
    pub eps_switch: f64,
    pub thrust: bool,
    /// Spacing of the output grid.
    pub output_dt: f64,
    /// Stop once |x1| drops below this value (collision approach).
    pub x1_floor: Option<f64>,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        ExtremalOptions {
            tol: 1e-12,
            eps_switch: 1e-12,
            thrust: true,
            output_dt: 0.1,
            x1_floor: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub y: [f64; 8],
    pub h: f64,
    pub pv_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularEvent {
    pub t: f64,
    pub norm: f64,
}

#[derive(Clone, Debug)]
pub struct ExtremalRun {
    pub samples: Vec<Sample>,
    pub max_h_drift: f64,
    pub max_energy_drift: f64,
    /// Drift of x3²/2 + x1 − 1/x1, meaningful on the collision line.
    pub max_c_drift: f64,
    pub events: Vec<SingularEvent>,
    pub stopped_early: bool,
    pub t_end: f64,
    pub stats: Stats,
}

/// Integrate an extremal from `s0` to `t_f`, sampling on a regular grid and
/// tracking invariant drifts at every accepted step.
pub fn integrate_extremal(s0: &RealState, t_f: f64, opts: &ExtremalOptions) -> Result<ExtremalRun> {
    pmp_field_real(s0, opts.eps_switch, opts.thrust)?;
    if !(opts.tol > 0.0) || !(opts.output_dt > 0.0) {
        return Err(Error::InvalidArgument("tol and output_dt must be positive".into()));
    }
    let thrust = opts.thrust;
    let h0 = h_real(&s0.y, thrust);
    let e0 = kepler_energy(&s0.y);
    let c0 = collision_c(&s0.y);
    let mut rk = Dopri5::new(s0.t, s0.y.to_vec(), Tolerances::new(opts.tol));
    let eps = opts.eps_switch;
    let mut field = |t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let st = RealState::new(t, y.try_into().expect("8 components"));
        dy.copy_from_slice(&pmp_field_real(&st, eps, thrust)?);
        Ok(())
    };
    let mut run = ExtremalRun {
        samples: Vec::new(),
        max_h_drift: 0.0,
        max_energy_drift: 0.0,
        max_c_drift: 0.0,
        events: Vec::new(),
        stopped_early: false,
        t_end: s0.t,
        stats: Stats::default(),
    };
    let push = |run: &mut ExtremalRun, t: f64, y: &[f64]| {
        let y: [f64; 8] = y.try_into().expect("8 components");
        run.samples.push(Sample {
            t,
            y,
            h: h_real(&y, thrust),
            pv_norm: y[6].hypot(y[7]),
        });
    };
    push(&mut run, s0.t, &s0.y);
    let floor = opts.x1_floor;
    let mut drifts = (0.0f64, 0.0f64, 0.0f64);
    let n = ((t_f - s0.t) / opts.output_dt).ceil().max(1.0) as usize;
    for k in 1..=n {
        let target = (s0.t + k as f64 * opts.output_dt).min(t_f);
        let mut stop = |_t: f64, y: &[f64]| {
            let y8: [f64; 8] = y.try_into().expect("8 components");
            drifts.0 = drifts.0.max((h_real(&y8, thrust) - h0).abs());
            drifts.1 = drifts.1.max((kepler_energy(&y8) - e0).abs());
            drifts.2 = drifts.2.max((collision_c(&y8) - c0).abs());
            floor.map_or(true, |f| y[0].abs() >= f)
        };
        match rk.advance_to(target, &mut field, &mut stop) {
            Ok(true) => push(&mut run, rk.t, &rk.y),
            Ok(false) => {
                push(&mut run, rk.t, &rk.y);
                run.stopped_early = true;
                break;
            }
            Err(Error::SingularControl { t, norm }) => {
                run.events.push(SingularEvent { t, norm });
                run.stopped_early = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    run.max_h_drift = drifts.0;
    run.max_energy_drift = drifts.1;
    run.max_c_drift = drifts.2;
    run.t_end = rk.t;
    run.stats = rk.stats;
    Ok(run)
}

/// Trajectory CSV with 17 significant digits.
pub fn write_csv(samples: &[Sample], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in samples {
        let mut row = vec![format!("{:.16e}", s.t)];
        row.extend(s.y.iter().map(|v| format!("{v:.16e}")));
        row.push(format!("{:.16e}", s.h));
        row.push(format!("{:.16e}", s.pv_norm));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circular() -> RealState {
        RealState::new(0.0, [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])
    }

    #[test]
    fn circular_orbit_field() {
        let f = pmp_field_real(&circular(), 1e-12, true).unwrap();
        // u = (0, 1): ẋ3 = −1 + 0, ẋ4 = 0 + 1
        assert_eq!(f[2], -1.0);
        assert_eq!(f[3], 1.0);
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1], 1.0);
    }

    #[test]
    fn control_is_scale_free() {
        let mut a = circular();
        a.y[6] = 0.6;
        a.y[7] = 0.8;
        let mut b = a;
        b.y[6] *= 7.5;
        b.y[7] *= 7.5;
        let fa = pmp_field_real(&a, 1e-12, true).unwrap();
        let fb = pmp_field_real(&b, 1e-12, true).unwrap();
        assert!((fa[2] - fb[2]).abs() < 1e-15 && (fa[3] - fb[3]).abs() < 1e-15);
    }

    #[test]
    fn switching_point_rejected() {
        let mut s = circular();
        s.y[6] = 0.0;
        s.y[7] = 0.0;
        assert!(matches!(
            pmp_field_real(&s, 1e-12, true),
            Err(Error::SingularControl { .. })
        ));
        assert!(pmp_field_real(&s, 1e-12, false).is_ok());
    }

    #[test]
    fn csv_shape() {
        let run = integrate_extremal(
            &circular(),
            0.5,
            &ExtremalOptions {
                output_dt: 0.25,
                ..Default::default()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&run.samples, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1].split(',').count(), 11);
    }
}
