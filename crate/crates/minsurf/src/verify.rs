//! Numerical verification battery: residuals for every identity the
//! toolkit relies on, reported in a uniform, serializable form.

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::GridSpec;
use crate::error::{Error, Result};
use crate::hodograph::GraphPatch;
use crate::weierstrass::{cross, dot, norm3, SurfaceMap, SurfaceSample, WeForm};

/// Location and magnitude of the worst residual in a grid sweep.
#[derive(Debug, Clone, Serialize)]
pub struct WorstOffender {
    pub location: [f64; 2],
    pub value: f64,
}

/// Outcome of one verification sweep. `pass` holds exactly when
/// `max_abs <= tolerance * scale`.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub grid: String,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub worst: Option<WorstOffender>,
}

impl ResidualReport {
    /// Reduce per-point residuals in the order given (fixed row-major order
    /// for grids, so reports are deterministic).
    pub fn from_values(
        name: &str,
        grid: &str,
        values: &[(Complex64, f64)],
        scale: f64,
        tolerance: f64,
    ) -> Self {
        let mut max_abs = 0.0f64;
        let mut sum = 0.0f64;
        let mut worst = None;
        for &(loc, v) in values {
            let a = v.abs();
            sum += a;
            if a > max_abs {
                max_abs = a;
                worst = Some(WorstOffender {
                    location: [loc.re, loc.im],
                    value: v,
                });
            }
        }
        let mean_abs = if values.is_empty() {
            0.0
        } else {
            sum / values.len() as f64
        };
        ResidualReport {
            name: name.to_string(),
            grid: grid.to_string(),
            max_abs,
            mean_abs,
            scale,
            tolerance,
            pass: max_abs <= tolerance * scale,
            worst,
        }
    }
}

/// Residual of the minimal surface equation
/// `(1 + phi_y^2) phi_xx - 2 phi_x phi_y phi_xy + (1 + phi_x^2) phi_yy`
/// from the patch's symbolic partials. Zero on exact minimal graphs.
pub fn minimal_eq_residual(patch: &GraphPatch, x: f64, y: f64) -> Result<f64> {
    let (px, py) = patch.gradient(x, y)?;
    let (pxx, pxy, pyy) = patch.hessian(x, y)?;
    Ok((1.0 + py * py) * pxx - 2.0 * px * py * pxy + (1.0 + px * px) * pyy)
}

/// Finite-difference variant for graphs only available as point samplers
/// (re-graphed surfaces). Steps are relative: `h = h0 (1 + |x| + |y|)`.
pub fn minimal_eq_residual_fd<F>(phi: F, x: f64, y: f64, h0: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let h = h0 * (1.0 + x.abs() + y.abs());
    let f00 = phi(x, y)?;
    let fpx = phi(x + h, y)?;
    let fmx = phi(x - h, y)?;
    let fpy = phi(x, y + h)?;
    let fmy = phi(x, y - h)?;
    let fpp = phi(x + h, y + h)?;
    let fpm = phi(x + h, y - h)?;
    let fmp = phi(x - h, y + h)?;
    let fmm = phi(x - h, y - h)?;

    let px = (fpx - fmx) / (2.0 * h);
    let py = (fpy - fmy) / (2.0 * h);
    let pxx = (fpx - 2.0 * f00 + fmx) / (h * h);
    let pyy = (fpy - 2.0 * f00 + fmy) / (h * h);
    let pxy = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    Ok((1.0 + py * py) * pxx - 2.0 * px * py * pxy + (1.0 + px * px) * pyy)
}

/// Isothermal check: max over the grid of `max(|E - G|, |F|) / E`.
pub fn isothermal_residuals<S>(sampler: S, grid: &GridSpec, tolerance: f64) -> Result<ResidualReport>
where
    S: Fn(Complex64) -> Result<SurfaceSample>,
{
    let mut values = Vec::with_capacity(grid.points.len());
    for &p in &grid.points {
        let s = sampler(p)?;
        let (xu, xv) = s.d1.ok_or(Error::MissingDerivatives)?;
        let e = dot(xu, xu);
        let f = dot(xu, xv);
        let g = dot(xv, xv);
        if e <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateMetric(p));
        }
        values.push((p, (e - g).abs().max(f.abs()) / e));
    }
    Ok(ResidualReport::from_values(
        "isothermal",
        &grid.desc,
        &values,
        1.0,
        tolerance,
    ))
}

/// Harmonicity check: 5-point Laplacian of the position components with the
/// given absolute step, normalized by `max |X|` over the grid.
pub fn harmonic_residual<S>(
    sampler: S,
    grid: &GridSpec,
    step: f64,
    tolerance: f64,
) -> Result<ResidualReport>
where
    S: Fn(Complex64) -> Result<SurfaceSample>,
{
    let h = step;
    let mut values = Vec::with_capacity(grid.points.len());
    let mut scale = 0.0f64;
    for &p in &grid.points {
        let x0 = sampler(p)?.position;
        let xp = sampler(p + Complex64::new(h, 0.0))?.position;
        let xm = sampler(p - Complex64::new(h, 0.0))?.position;
        let yp = sampler(p + Complex64::new(0.0, h))?.position;
        let ym = sampler(p - Complex64::new(0.0, h))?.position;
        let mut worst = 0.0f64;
        for k in 0..3 {
            let lap = (xp[k] + xm[k] + yp[k] + ym[k] - 4.0 * x0[k]) / (h * h);
            worst = worst.max(lap.abs());
            scale = scale.max(x0[k].abs());
        }
        values.push((p, worst));
    }
    let scale = scale.max(f64::MIN_POSITIVE);
    Ok(ResidualReport::from_values(
        "harmonic",
        &grid.desc,
        &values,
        scale,
        tolerance,
    ))
}

fn fundamental_forms_from(
    s: &SurfaceSample,
) -> Result<((f64, f64, f64), (f64, f64, f64), [f64; 3])> {
    let (xu, xv) = s.d1.ok_or(Error::MissingDerivatives)?;
    let (xuu, xuv, xvv) = s.d2.ok_or(Error::MissingDerivatives)?;
    let e = dot(xu, xu);
    let f = dot(xu, xv);
    let g = dot(xv, xv);
    let n_raw = cross(xu, xv);
    let n_len = norm3(n_raw);
    if n_len <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateMetric(s.parameter));
    }
    let n = [n_raw[0] / n_len, n_raw[1] / n_len, n_raw[2] / n_len];
    let l = dot(xuu, n);
    let m = dot(xuv, n);
    let nn = dot(xvv, n);
    Ok(((e, f, g), (l, m, nn), n))
}

/// Fill missing derivative fields by central differences of the sampler's
/// positions with the given absolute step.
fn sample_with_fd_derivatives<S>(sampler: &S, at: Complex64, h: f64) -> Result<SurfaceSample>
where
    S: Fn(Complex64) -> Result<SurfaceSample>,
{
    let center = sampler(at)?;
    if center.d1.is_some() && center.d2.is_some() {
        return Ok(center);
    }
    let xp = sampler(at + Complex64::new(h, 0.0))?.position;
    let xm = sampler(at - Complex64::new(h, 0.0))?.position;
    let yp = sampler(at + Complex64::new(0.0, h))?.position;
    let ym = sampler(at - Complex64::new(0.0, h))?.position;
    let pp = sampler(at + Complex64::new(h, h))?.position;
    let pm = sampler(at + Complex64::new(h, -h))?.position;
    let mp = sampler(at + Complex64::new(-h, h))?.position;
    let mm = sampler(at + Complex64::new(-h, -h))?.position;
    let x0 = center.position;

    let mut xu = [0.0; 3];
    let mut xv = [0.0; 3];
    let mut xuu = [0.0; 3];
    let mut xuv = [0.0; 3];
    let mut xvv = [0.0; 3];
    for k in 0..3 {
        xu[k] = (xp[k] - xm[k]) / (2.0 * h);
        xv[k] = (yp[k] - ym[k]) / (2.0 * h);
        xuu[k] = (xp[k] - 2.0 * x0[k] + xm[k]) / (h * h);
        xvv[k] = (yp[k] - 2.0 * x0[k] + ym[k]) / (h * h);
        xuv[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
    }
    Ok(SurfaceSample {
        parameter: at,
        position: x0,
        d1: Some((xu, xv)),
        d2: Some((xuu, xuv, xvv)),
    })
}

/// Signed mean curvature `H = (E N - 2 F M + G L) / (2 (EG - F^2))` under
/// the fixed orientation `normal = X_{z1} x X_{z2}`. Derivative fields are
/// taken from the sample when present, otherwise by central differences
/// with the given absolute step.
pub fn mean_curvature<S>(sampler: S, at: Complex64, step: f64) -> Result<f64>
where
    S: Fn(Complex64) -> Result<SurfaceSample>,
{
    let s = sample_with_fd_derivatives(&sampler, at, step)?;
    let ((e, f, g), (l, m, nn), _) = fundamental_forms_from(&s)?;
    let det = e * g - f * f;
    if det.abs() <= f64::MIN_POSITIVE * (e + g).powi(2).max(1.0) || det <= 0.0 {
        return Err(Error::DegenerateMetric(at));
    }
    Ok((e * nn - 2.0 * f * m + g * l) / (2.0 * det))
}

/// Gaussian curvature two ways: the closed formula
/// `K = -4 |R(w)|^-2 (1 + |w|^2)^-4` against the fundamental-forms value
/// built from analytic first derivatives and finite-differenced second
/// derivatives (relative step `step`).
pub fn curvature_consistency(map: &SurfaceMap, w: Complex64, step: f64) -> Result<(f64, f64)> {
    let r = match &map.data.form {
        WeForm::R { r } => r,
        WeForm::Fg { .. } => {
            return Err(Error::InvalidData(
                "curvature_consistency requires R-form data".to_string(),
            ))
        }
    };
    let closed = crate::weierstrass::gaussian_curvature_r(r, w)?;

    let h = step * (1.0 + w.norm());
    let (xu, xv) = map.first_derivatives(w)?;
    let (xu_p, _) = map.first_derivatives(w + Complex64::new(h, 0.0))?;
    let (xu_m, _) = map.first_derivatives(w - Complex64::new(h, 0.0))?;
    let (xu_ip, xv_ip) = map.first_derivatives(w + Complex64::new(0.0, h))?;
    let (xu_im, xv_im) = map.first_derivatives(w - Complex64::new(0.0, h))?;

    let mut xuu = [0.0; 3];
    let mut xuv = [0.0; 3];
    let mut xvv = [0.0; 3];
    for k in 0..3 {
        xuu[k] = (xu_p[k] - xu_m[k]) / (2.0 * h);
        xuv[k] = (xu_ip[k] - xu_im[k]) / (2.0 * h);
        xvv[k] = (xv_ip[k] - xv_im[k]) / (2.0 * h);
    }

    let e = dot(xu, xu);
    let f = dot(xu, xv);
    let g = dot(xv, xv);
    let n_raw = cross(xu, xv);
    let n_len = norm3(n_raw);
    if n_len <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateMetric(w));
    }
    let n = [n_raw[0] / n_len, n_raw[1] / n_len, n_raw[2] / n_len];
    let l = dot(xuu, n);
    let m = dot(xuv, n);
    let nn = dot(xvv, n);
    let det = e * g - f * f;
    if det <= 0.0 {
        return Err(Error::DegenerateMetric(w));
    }
    let numeric = (l * nn - m * m) / det;
    Ok((closed, numeric))
}

/// Locally express an immersed surface as a graph `phi(x, y)` by Newton
/// inversion of `(z1, z2) -> (x, y)`, telescoping the position integrals
/// along the Newton trajectory. The seed parameter anchors the sheet.
pub struct Regraph<'a> {
    map: &'a SurfaceMap,
    state: std::cell::RefCell<(Complex64, [f64; 3])>,
}

impl<'a> Regraph<'a> {
    pub fn new(map: &'a SurfaceMap, seed: Complex64) -> Result<Self> {
        let x = map.position(seed, None)?;
        Ok(Regraph {
            map,
            state: std::cell::RefCell::new((seed, x)),
        })
    }

    /// The (x, y) position of the current sheet anchor.
    pub fn anchor_xy(&self) -> (f64, f64) {
        let st = self.state.borrow();
        (st.1[0], st.1[1])
    }

    /// Height of the surface over (x, y), staying on the seeded sheet.
    pub fn phi_at(&self, x: f64, y: f64) -> Result<f64> {
        let (mut zeta, mut pos) = *self.state.borrow();
        let tol = 2e-14 * (1.0 + x.abs() + y.abs());
        for _ in 0..50 {
            let rx = pos[0] - x;
            let ry = pos[1] - y;
            if (rx * rx + ry * ry).sqrt() <= tol {
                *self.state.borrow_mut() = (zeta, pos);
                return Ok(pos[2]);
            }
            let (xu, xv) = self.map.first_derivatives(zeta)?;
            // Solve the 2x2 system J d = -r for the parameter update.
            let (a, b, c, d) = (xu[0], xv[0], xu[1], xv[1]);
            let det = a * d - b * c;
            if det.abs() <= f64::MIN_POSITIVE {
                return Err(Error::DegenerateMetric(zeta));
            }
            let d1 = (-rx * d + ry * b) / det;
            let d2 = (rx * c - ry * a) / det;
            let next = zeta + Complex64::new(d1, d2);
            pos = self.map.offset_position(pos, zeta, next, 1e-13)?;
            zeta = next;
        }
        Err(Error::RootSearch(Complex64::new(x, y)))
    }
}
