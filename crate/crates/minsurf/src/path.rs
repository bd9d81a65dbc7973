//! Integration paths: polylines in the complex parameter plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// An ordered polyline of waypoints. At least two waypoints, consecutive
/// waypoints distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    points: Vec<Complex64>,
}

impl Path {
    pub fn polyline(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPath(format!(
                "need at least 2 waypoints, got {}",
                points.len()
            )));
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidPath(format!(
                    "consecutive waypoints coincide at {}",
                    w[0]
                )));
            }
        }
        Ok(Path { points })
    }

    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        Path::polyline(vec![a, b])
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn start(&self) -> Complex64 {
        self.points[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.points.last().expect("path has waypoints")
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Smallest distance from any declared singularity to the polyline.
    pub fn clearance(&self, singularities: &[Complex64]) -> f64 {
        let mut best = f64::INFINITY;
        for &s in singularities {
            for (a, b) in self.segments() {
                best = best.min(point_segment_distance(s, a, b));
            }
        }
        best
    }

    /// Default policy: the straight segment from `a` to `b`; if that passes
    /// within `DETOUR_THRESHOLD` of a declared singularity, a two-segment
    /// polyline detours around the closest approach.
    pub fn default_between(a: Complex64, b: Complex64, singularities: &[Complex64]) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidPath(
                "degenerate path: endpoints coincide".to_string(),
            ));
        }
        let straight = Path::segment(a, b)?;
        let mut offender: Option<Complex64> = None;
        for &s in singularities {
            if point_segment_distance(s, a, b) < DETOUR_THRESHOLD {
                offender = Some(s);
                break;
            }
        }
        let s = match offender {
            None => return Ok(straight),
            Some(s) => s,
        };
        // Perpendicular offset at the closest approach, on the side of the
        // segment away from the singularity (or an arbitrary side if it sits
        // exactly on the line).
        let dir = (b - a) / (b - a).norm();
        let t = ((s - a) * dir.conj()).re.clamp(0.0, (b - a).norm());
        let foot = a + dir * t;
        let normal = Complex64::new(-dir.im, dir.re);
        let side = ((s - foot) * normal.conj()).re;
        let offset = (0.05 * (b - a).norm()).max(10.0 * DETOUR_THRESHOLD);
        let mid = if side > 0.0 {
            foot - normal * offset
        } else {
            foot + normal * offset
        };
        Path::polyline(vec![a, mid, b])
    }

    /// A radial leg followed by a polyline arc at radius `|b|`: stays inside
    /// an annulus around the origin and never crosses the slit if `a` and `b`
    /// avoid it. Used for integrands whose antiderivative has a branch point
    /// at the origin.
    pub fn radial_then_arc(a: Complex64, b: Complex64, max_step_deg: f64) -> Result<Self> {
        let (ra, rb) = (a.norm(), b.norm());
        if ra == 0.0 || rb == 0.0 {
            return Err(Error::InvalidPath(
                "radial/arc path endpoints must avoid the origin".to_string(),
            ));
        }
        let mut pts = vec![a];
        let corner = a * (rb / ra);
        if (corner - a).norm() > 1e-300 {
            pts.push(corner);
        }
        let th0 = corner.arg();
        let th1 = b.arg();
        let sweep = th1 - th0;
        let steps = ((sweep.abs() / max_step_deg.to_radians()).ceil() as usize).max(1);
        for k in 1..=steps {
            let th = th0 + sweep * (k as f64) / (steps as f64);
            let p = Complex64::from_polar(rb, th);
            if p != *pts.last().expect("nonempty") {
                pts.push(p);
            }
        }
        if pts.len() < 2 {
            // a and b coincide up to rounding; nudge through the midpoint.
            pts.push(b);
        }
        Path::polyline(pts)
    }
}

/// Paths closer than this to a declared singularity trigger the detour.
pub const DETOUR_THRESHOLD: f64 = 1e-3;

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}
