//! Closed polylines based at a regular point.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum distance from a singularity, as a fraction of its distance to the
/// nearest other singularity (or to the base when it is alone).
pub const CLEARANCE: f64 = 0.3;

/// Half-size of generator squares relative to the same distance.
const SQUARE_FRACTION: f64 = 0.4;

#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub base: Complex64,
    /// Starts and ends at `base`.
    pub vertices: Vec<Complex64>,
    pub tag: String,
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / l2;
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

impl Loop {
    pub fn check(&self, singularities: &[Complex64], factor: f64) -> Result<()> {
        if self.vertices.first() != Some(&self.base) || self.vertices.last() != Some(&self.base) {
            return Err(Error::InvalidArgument(format!(
                "loop {} is not closed at its base",
                self.tag
            )));
        }
        for (j, &s) in singularities.iter().enumerate() {
            let d = singularities
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &o)| (o - s).norm())
                .fold((self.base - s).norm(), f64::min);
            let need = factor * d;
            for w in self.vertices.windows(2) {
                let got = segment_distance(s, w[0], w[1]);
                if got < need {
                    return Err(Error::ClearanceViolation(format!(
                        "loop {}: segment {} → {} passes {got:.3e} from singularity {s} (needs {need:.3e})",
                        self.tag, w[0], w[1]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Winding number around `p` (0 when `p` is on the polyline).
    pub fn winding_number(&self, p: Complex64) -> i64 {
        let total: f64 = self.vertices.windows(2).map(|w| ((w[1] - p) / (w[0] - p)).arg()).sum();
        (total / (2.0 * std::f64::consts::PI)).round() as i64
    }
}

/// Spoke from `base` to the square of half-size `half` around `center`, once
/// counterclockwise around it, and back. Works with `base` inside or outside.
pub fn square_loop(base: Complex64, center: Complex64, half: f64, tag: &str) -> Result<Loop> {
    let d = base - center;
    if d.norm() == 0.0 || !(half > 0.0) {
        return Err(Error::InvalidArgument("degenerate square loop".into()));
    }
    let u = d / d.norm();
    let entry = center + u * (half / u.re.abs().max(u.im.abs()));
    let two_pi = 2.0 * std::f64::consts::PI;
    let quarter = std::f64::consts::FRAC_PI_4;
    let angle = |z: Complex64| {
        let mut a = (z - center).arg();
        if a < -quarter {
            a += two_pi;
        }
        a
    };
    let theta = angle(entry);
    let mut corners: Vec<(f64, Complex64)> = [(1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)]
        .iter()
        .map(|&(x, y)| {
            let z = center + Complex64::new(x, y) * half;
            let mut a = angle(z);
            if a <= theta + 1e-12 {
                a += two_pi;
            }
            (a, z)
        })
        .collect();
    corners.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut v = vec![base, entry];
    v.extend(corners.iter().map(|c| c.1).filter(|&z| (z - entry).norm() > 1e-14));
    v.extend([entry, base]);
    Ok(Loop {
        base,
        vertices: v,
        tag: tag.to_string(),
    })
}

#[derive(Clone, Debug)]
pub struct LoopSet {
    /// One counterclockwise loop per finite singularity, in path order.
    pub generators: Vec<Loop>,
    /// Index into the input singularity list for each generator.
    pub order: Vec<usize>,
    /// Counterclockwise loop around every finite singularity; its transport
    /// equals the path-ordered product of the generators.
    pub composite: Loop,
}

/// Generators ordered by the angle of their spoke, measured from the
/// direction toward the centroid.
pub fn loop_set(singularities: &[Complex64], base: Complex64, labels: &[String]) -> Result<LoopSet> {
    if singularities.is_empty() {
        return Err(Error::InvalidArgument("no singularities".into()));
    }
    let n = singularities.len() as f64;
    let centroid: Complex64 = singularities.iter().sum::<Complex64>() / n;
    let inward = if (centroid - base).norm() > 0.0 {
        centroid - base
    } else {
        Complex64::new(-1.0, 0.0)
    };
    let mut order: Vec<usize> = (0..singularities.len()).collect();
    let key = |k: usize| ((singularities[k] - base) / inward).arg();
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    let mut generators = Vec::new();
    for &j in &order {
        let s = singularities[j];
        let d = singularities
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &o)| (o - s).norm())
            .fold((base - s).norm(), f64::min);
        let tag = labels.get(j).cloned().unwrap_or_else(|| format!("{s}"));
        let lp = square_loop(base, s, SQUARE_FRACTION * d, &tag)?;
        lp.check(singularities, CLEARANCE)?;
        generators.push(lp);
    }
    let spread = singularities
        .iter()
        .map(|s| (s - centroid).norm())
        .fold((base - centroid).norm(), f64::max);
    let composite = square_loop(base, centroid, 3.0 * spread.max(1e-3), "composite")?;
    composite.check(singularities, CLEARANCE)?;
    Ok(LoopSet {
        generators,
        order,
        composite,
    })
}
