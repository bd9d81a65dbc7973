//! Domain descriptors in the parameter plane (or the (x,y) plane for graph
//! patches) and the grids sampled over them.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DomainDescriptor {
    /// Axis-aligned rectangle, sampled uniformly in both directions.
    Rectangle { x0: f64, x1: f64, y0: f64, y1: f64 },
    /// Disk of the given radius about the origin, sampled in polar
    /// coordinates with uniform radii (the center itself is never a node).
    Disk { radius: f64 },
    /// Annulus about the origin, sampled in (log r, theta). The angular
    /// range is an open interval: nodes sit at half-offset positions so the
    /// slit endpoints are never sampled.
    Annulus {
        r_min: f64,
        r_max: f64,
        theta_min: f64,
        theta_max: f64,
    },
}

impl DomainDescriptor {
    pub fn annulus(r_min: f64, r_max: f64) -> Result<Self> {
        Self::annulus_sector(r_min, r_max, -std::f64::consts::PI, std::f64::consts::PI)
    }

    pub fn annulus_sector(r_min: f64, r_max: f64, theta_min: f64, theta_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && theta_max > theta_min) {
            return Err(Error::InvalidData(format!(
                "invalid annulus: r in [{r_min}, {r_max}], theta in [{theta_min}, {theta_max}]"
            )));
        }
        Ok(DomainDescriptor::Annulus {
            r_min,
            r_max,
            theta_min,
            theta_max,
        })
    }

    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) {
            return Err(Error::InvalidData(format!(
                "invalid rectangle: [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(DomainDescriptor::Rectangle { x0, x1, y0, y1 })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::InvalidData(format!("invalid disk radius {radius}")));
        }
        Ok(DomainDescriptor::Disk { radius })
    }

    /// Membership test with a small tolerance for boundary rounding.
    pub fn contains(&self, z: Complex64) -> bool {
        const EPS: f64 = 1e-9;
        match self {
            DomainDescriptor::Rectangle { x0, x1, y0, y1 } => {
                z.re >= x0 - EPS && z.re <= x1 + EPS && z.im >= y0 - EPS && z.im <= y1 + EPS
            }
            DomainDescriptor::Disk { radius } => z.norm() <= radius + EPS,
            DomainDescriptor::Annulus {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => {
                let r = z.norm();
                let th = z.arg();
                r >= r_min - EPS
                    && r <= r_max + EPS
                    && th >= theta_min - EPS
                    && th <= theta_max + EPS
            }
        }
    }

    /// Shrink the domain so that a stencil of the given radius around every
    /// grid node stays inside the original domain.
    pub fn inset(&self, margin: f64) -> Result<DomainDescriptor> {
        match *self {
            DomainDescriptor::Rectangle { x0, x1, y0, y1 } => {
                DomainDescriptor::rectangle(x0 + margin, x1 - margin, y0 + margin, y1 - margin)
            }
            DomainDescriptor::Disk { radius } => DomainDescriptor::disk(radius - margin),
            DomainDescriptor::Annulus {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => {
                let dth = margin / r_min;
                DomainDescriptor::annulus_sector(
                    r_min + margin,
                    r_max - margin,
                    theta_min + dth,
                    theta_max - dth,
                )
            }
        }
    }

    /// Sample an n1 x n2 grid (row index i over the first direction, column
    /// index j over the second), row-major.
    pub fn grid(&self, n1: usize, n2: usize) -> Result<GridSpec> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidData(format!(
                "grid resolution must be at least 2x2, got {n1}x{n2}"
            )));
        }
        let mut points = Vec::with_capacity(n1 * n2);
        match *self {
            DomainDescriptor::Rectangle { x0, x1, y0, y1 } => {
                for i in 0..n1 {
                    let x = x0 + (x1 - x0) * (i as f64) / ((n1 - 1) as f64);
                    for j in 0..n2 {
                        let y = y0 + (y1 - y0) * (j as f64) / ((n2 - 1) as f64);
                        points.push(Complex64::new(x, y));
                    }
                }
            }
            DomainDescriptor::Disk { radius } => {
                for i in 0..n1 {
                    let r = radius * ((i + 1) as f64) / (n1 as f64);
                    for j in 0..n2 {
                        let th = -std::f64::consts::PI
                            + 2.0 * std::f64::consts::PI * ((j as f64) + 0.5) / (n2 as f64);
                        points.push(Complex64::from_polar(r, th));
                    }
                }
            }
            DomainDescriptor::Annulus {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => {
                let l0 = r_min.ln();
                let l1 = r_max.ln();
                for i in 0..n1 {
                    let r = (l0 + (l1 - l0) * (i as f64) / ((n1 - 1) as f64)).exp();
                    for j in 0..n2 {
                        let th =
                            theta_min + (theta_max - theta_min) * ((j as f64) + 0.5) / (n2 as f64);
                        points.push(Complex64::from_polar(r, th));
                    }
                }
            }
        }
        Ok(GridSpec {
            points,
            n1,
            n2,
            desc: self.describe(n1, n2),
        })
    }

    fn describe(&self, n1: usize, n2: usize) -> String {
        match self {
            DomainDescriptor::Rectangle { x0, x1, y0, y1 } => {
                format!("rectangle [{x0}, {x1}] x [{y0}, {y1}], {n1}x{n2}")
            }
            DomainDescriptor::Disk { radius } => format!("disk r <= {radius}, {n1}x{n2}"),
            DomainDescriptor::Annulus {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => format!(
                "annulus {r_min} <= r <= {r_max}, theta in ({theta_min:.6}, {theta_max:.6}), {n1}x{n2}"
            ),
        }
    }
}

/// A sampled parameter grid, row-major: index = i * n2 + j.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub points: Vec<Complex64>,
    pub n1: usize,
    pub n2: usize,
    pub desc: String,
}

impl GridSpec {
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.points[i * self.n2 + j]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    /// Grid node nearest to `z`.
    pub fn nearest(&self, z: Complex64) -> (usize, usize) {
        let mut best = (0usize, 0usize);
        let mut best_d = f64::INFINITY;
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let d = (self.at(i, j) - z).norm();
                if d < best_d {
                    best_d = d;
                    best = (i, j);
                }
            }
        }
        best
    }
}
