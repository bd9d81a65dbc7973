//! Hodographic coordinates on a minimal graph.
//!
//! Starting from a graph `z = phi(x,y)` with symbolic partials, this module
//! computes the Wirtinger data `u = phi_zbar`, `v = phi_z = conj(u)`, the
//! conformal coordinate `zeta` with `u = zeta / (1 - |zeta|^2)`, the
//! recovered Weierstrass function `R = F'` on the zeta image, and the
//! rho-system representation `rho = F(zeta)` with its surface integrals.
//!
//! The transformation interchanges dependent and independent variables:
//! writing the Jacobian of `(z, zbar) -> (zeta, eta)` with `eta = conj(zeta)`
//! and inverting it pointwise gives `zbar_zeta = F'(zeta)` and
//! `phi_zeta = u zbar_zeta + v z_zeta = zeta F'(zeta)` exactly, with no
//! stencil truncation. The inversion degenerates exactly at umbilics, where
//! `u_zbar v_z - u_z v_zbar = 0`; those points are flagged, not silently
//! extrapolated.

use num_complex::Complex64;

use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::expr::{parse_expression_vars, Expr};
use crate::path::Path;
use crate::quad;
use crate::weierstrass::SurfaceSample;

/// Relative threshold for flagging the hodograph inversion as degenerate.
pub const UMBILIC_THRESHOLD: f64 = 1e-12;

/// A graph patch `z = phi(x,y)` with symbolic first and second partials.
#[derive(Debug, Clone)]
pub struct GraphPatch {
    pub phi: Expr,
    pub phi_x: Expr,
    pub phi_y: Expr,
    pub phi_xx: Expr,
    pub phi_xy: Expr,
    pub phi_yy: Expr,
    pub domain: DomainDescriptor,
}

impl GraphPatch {
    pub fn new(phi: Expr, domain: DomainDescriptor) -> Self {
        let phi_x = phi.differentiate("x");
        let phi_y = phi.differentiate("y");
        let phi_xx = phi_x.differentiate("x");
        let phi_xy = phi_x.differentiate("y");
        let phi_yy = phi_y.differentiate("y");
        GraphPatch {
            phi,
            phi_x,
            phi_y,
            phi_xx,
            phi_xy,
            phi_yy,
            domain,
        }
    }

    /// Parse `phi` over the variables (x, y).
    pub fn from_text(phi_text: &str, domain: DomainDescriptor) -> Result<Self> {
        let phi = parse_expression_vars(phi_text, &["x", "y"])?;
        Ok(GraphPatch::new(phi, domain))
    }

    pub fn phi_at(&self, x: f64, y: f64) -> Result<f64> {
        self.phi.eval_real(&[("x", x), ("y", y)])
    }

    pub fn gradient(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let b = [("x", x), ("y", y)];
        Ok((self.phi_x.eval_real(&b)?, self.phi_y.eval_real(&b)?))
    }

    pub fn hessian(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        let b = [("x", x), ("y", y)];
        Ok((
            self.phi_xx.eval_real(&b)?,
            self.phi_xy.eval_real(&b)?,
            self.phi_yy.eval_real(&b)?,
        ))
    }
}

/// One grid point of the hodograph pipeline.
#[derive(Debug, Clone)]
pub struct HodographFrame {
    pub x: f64,
    pub y: f64,
    pub z: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    pub zeta: Complex64,
    pub rho: Option<Complex64>,
    pub degenerate: bool,
}

/// Wirtinger derivatives of the graph: `u = (phi_x + i phi_y)/2` and
/// `v = (phi_x - i phi_y)/2`. Both are built from the same two real partial
/// values, so `v = conj(u)` holds bitwise.
pub fn wirtinger_uv(patch: &GraphPatch, x: f64, y: f64) -> Result<(Complex64, Complex64)> {
    let (px, py) = patch.gradient(x, y)?;
    let u = Complex64::new(px / 2.0, py / 2.0);
    let v = Complex64::new(px / 2.0, -py / 2.0);
    Ok((u, v))
}

/// The conformal coordinate from `u`, in the form that stays finite at
/// `u = 0`: with `v = conj(u)` the quotient `(sqrt(1+4uv)-1)/(2v)` equals
/// `2u / (1 + sqrt(1 + 4|u|^2))`.
pub fn zeta_from_u(u: Complex64) -> Complex64 {
    let a2 = u.norm_sqr();
    if a2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let a = a2.sqrt();
    if a < 1e-8 {
        // 2u/(1+sqrt(1+4a^2)) = u (1 - a^2 + O(a^4)); below 1e-8 the
        // correction is under one ulp.
        return u;
    }
    // Divide through by 2a: |zeta| = 1/(t + sqrt(1+t^2)) with t = 1/(2a),
    // stable for every finite magnitude.
    let t = 1.0 / (2.0 * a);
    let mag = 1.0 / (t + (1.0 + t * t).sqrt());
    (u / a) * mag
}

/// The inverse transformation `u = zeta / (1 - |zeta|^2)`.
pub fn u_from_zeta(zeta: Complex64) -> Result<Complex64> {
    let d = 1.0 - zeta.norm_sqr();
    if d == 0.0 {
        return Err(Error::UnitCircle(zeta));
    }
    Ok(zeta / d)
}

/// `|u_zbar v_z - u_z v_zbar|` from the symbolic second partials; zero
/// exactly where the Gaussian curvature vanishes and the hodograph
/// inversion breaks down.
pub fn umbilic_indicator(patch: &GraphPatch, x: f64, y: f64) -> Result<f64> {
    let d = second_order(patch, x, y)?;
    Ok((d.u_zbar.norm_sqr() - d.u_z * d.u_z).abs())
}

struct SecondOrder {
    /// `u_z = v_zbar = (phi_xx + phi_yy)/4`, real.
    u_z: f64,
    /// `u_zbar = (phi_xx - phi_yy)/4 + i phi_xy / 2`; `v_z = conj(u_zbar)`.
    u_zbar: Complex64,
}

fn second_order(patch: &GraphPatch, x: f64, y: f64) -> Result<SecondOrder> {
    let (pxx, pxy, pyy) = patch.hessian(x, y)?;
    Ok(SecondOrder {
        u_z: (pxx + pyy) / 4.0,
        u_zbar: Complex64::new((pxx - pyy) / 4.0, pxy / 2.0),
    })
}

/// Build the hodograph frame at one point, flagging degeneracy.
fn frame_at(patch: &GraphPatch, x: f64, y: f64) -> Result<HodographFrame> {
    let (u, v) = wirtinger_uv(patch, x, y)?;
    let zeta = zeta_from_u(u);
    let d = second_order(patch, x, y)?;
    let indicator = (d.u_zbar.norm_sqr() - d.u_z * d.u_z).abs();
    let scale = d.u_zbar.norm_sqr() + d.u_z * d.u_z;
    let degenerate = indicator <= UMBILIC_THRESHOLD * scale;
    Ok(HodographFrame {
        x,
        y,
        z: Complex64::new(x, y),
        u,
        v,
        zeta,
        rho: None,
        degenerate,
    })
}

/// Conformal coordinates over a grid of (x,y) points: every frame carries
/// (z, u, v, zeta) and the per-point degeneracy flag.
pub fn conformal_coordinates(patch: &GraphPatch, grid: &[(f64, f64)]) -> Result<Vec<HodographFrame>> {
    grid.iter()
        .map(|&(x, y)| {
            if !patch.domain.contains(Complex64::new(x, y)) {
                return Err(Error::OutOfDomain(Complex64::new(x, y)));
            }
            frame_at(patch, x, y)
        })
        .collect()
}

/// Recover `R = F'` on the zeta image of the frames.
///
/// The hodograph Jacobian `(z,zbar) -> (zeta,eta)` is assembled from the
/// symbolic second partials and the closed-form partials of the algebraic
/// map `zeta(u, v)` (`zeta_u = 1/s`, `zeta_v = -zeta^2/s` with
/// `s = sqrt(1+4uv)`), then inverted pointwise:
/// `zbar_zeta = -conj(zeta_zbar)/det` and
/// `R = phi_zeta / zeta = (u zbar_zeta + v z_zeta)/zeta`.
///
/// Degenerate frames and frames with `zeta = 0` violate the precondition
/// and are reported as errors.
pub fn recover_r(
    patch: &GraphPatch,
    frames: &[HodographFrame],
) -> Result<Vec<(Complex64, Complex64)>> {
    frames
        .iter()
        .map(|fr| {
            if fr.degenerate {
                return Err(Error::Degenerate {
                    at: fr.z,
                    indicator: 0.0,
                });
            }
            if fr.zeta.norm() == 0.0 {
                return Err(Error::Degenerate {
                    at: fr.z,
                    indicator: 0.0,
                });
            }
            let d = second_order(patch, fr.x, fr.y)?;
            let u_z = Complex64::new(d.u_z, 0.0);
            let u_zbar = d.u_zbar;
            let v_z = u_zbar.conj();
            let v_zbar = u_z;
            let s = (1.0 + 4.0 * fr.u.norm_sqr()).sqrt();
            let z2 = fr.zeta * fr.zeta;
            let zeta_z = (u_z - z2 * v_z) / s;
            let zeta_zbar = (u_zbar - z2 * v_zbar) / s;
            let det = zeta_z.norm_sqr() - zeta_zbar.norm_sqr();
            if det.abs() <= f64::MIN_POSITIVE {
                return Err(Error::Degenerate {
                    at: fr.z,
                    indicator: det.abs(),
                });
            }
            let zbar_zeta = -zeta_zbar.conj() / det;
            let z_zeta = zeta_z.conj() / det;
            let phi_zeta = fr.u * zbar_zeta + fr.v * z_zeta;
            Ok((fr.zeta, phi_zeta / fr.zeta))
        })
        .collect()
}

/// Stencil-based estimate of `R = F'`: a moving-least-squares quadratic fit
/// of phi against (zeta1, zeta2) over the `k` nearest frames in the zeta
/// plane; `phi_zeta` is read off the linear term, then divided by zeta.
///
/// Works from scattered frames alone (no symbolic partials); its accuracy is
/// the fit's truncation order, so on coarse grids expect a few digits, not
/// machine precision.
pub fn recover_r_mls(
    patch: &GraphPatch,
    frames: &[HodographFrame],
    k: usize,
) -> Result<Vec<(Complex64, Complex64)>> {
    if frames.len() < k + 1 {
        return Err(Error::InsufficientNeighbors {
            need: k + 1,
            have: frames.len(),
        });
    }
    let phis: Vec<f64> = frames
        .iter()
        .map(|fr| patch.phi_at(fr.x, fr.y))
        .collect::<Result<_>>()?;

    frames
        .iter()
        .enumerate()
        .map(|(idx, fr)| {
            if fr.degenerate || fr.zeta.norm() == 0.0 {
                return Err(Error::Degenerate {
                    at: fr.z,
                    indicator: 0.0,
                });
            }
            let phi_zeta = mls_phi_zeta(frames, &phis, idx, k)?;
            Ok((fr.zeta, phi_zeta / fr.zeta))
        })
        .collect()
}

fn mls_phi_zeta(
    frames: &[HodographFrame],
    phis: &[f64],
    idx: usize,
    k: usize,
) -> Result<Complex64> {
    let center = frames[idx].zeta;
    // k nearest neighbors in the zeta plane, excluding the center itself.
    let mut order: Vec<usize> = (0..frames.len()).filter(|&j| j != idx).collect();
    order.sort_by(|&a, &b| {
        let da = (frames[a].zeta - center).norm();
        let db = (frames[b].zeta - center).norm();
        da.partial_cmp(&db).expect("finite distances")
    });
    let neighbors = &order[..k];
    let dmax = (frames[neighbors[k - 1]].zeta - center).norm();
    if dmax == 0.0 {
        return Err(Error::DegenerateStencil(center));
    }

    // Weighted least squares for phi(center + d) - phi(center)
    //   ~ c1 d1 + c2 d2 + c3 d1^2 + c4 d1 d2 + c5 d2^2
    // in coordinates scaled by dmax.
    let mut ata = [[0.0f64; 5]; 5];
    let mut atb = [0.0f64; 5];
    for &j in neighbors {
        let d = (frames[j].zeta - center) / dmax;
        let (d1, d2) = (d.re, d.im);
        let row = [d1, d2, d1 * d1, d1 * d2, d2 * d2];
        let w = {
            let q = d.norm();
            let t = (1.0 - q * q).max(0.0);
            (t * t).max(1e-6)
        };
        let rhs = phis[j] - phis[idx];
        for a in 0..5 {
            for b in 0..5 {
                ata[a][b] += w * row[a] * row[b];
            }
            atb[a] += w * row[a] * rhs;
        }
    }
    let coeff = solve5(ata, atb).ok_or(Error::DegenerateStencil(center))?;
    // Undo the dmax scaling on the linear terms.
    let p1 = coeff[0] / dmax;
    let p2 = coeff[1] / dmax;
    Ok(Complex64::new(p1 / 2.0, -p2 / 2.0))
}

fn solve5(mut a: [[f64; 5]; 5], mut b: [f64; 5]) -> Option<[f64; 5]> {
    let n = 5;
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = 1.0 / a[col][col];
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r][col] * inv;
            for c2 in col..n {
                a[r][c2] -= factor * a[col][c2];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = [0.0; 5];
    for kk in 0..n {
        x[kk] = b[kk] / a[kk][kk];
    }
    Some(x)
}

/// Residual of the linearized system `zeta^2 zbar_zeta + z_zeta` for a test
/// field given as two expressions in the independent pair (zeta, eta); the
/// partial with respect to zeta holds eta fixed, and eta is bound to
/// conj(zeta) at evaluation.
pub fn linear_system_residual(
    z_field: &Expr,
    zbar_field: &Expr,
    zeta: Complex64,
) -> Result<Complex64> {
    let z_zeta = z_field.differentiate("zeta");
    let zbar_zeta = zbar_field.differentiate("zeta");
    let bind = [("zeta", zeta), ("eta", zeta.conj())];
    let a = zbar_zeta.eval(&bind)?;
    let b = z_zeta.eval(&bind)?;
    Ok(zeta * zeta * a + b)
}

/// The hodographic coordinates `rho = F(zeta)`, `sigma = conj(rho)`.
/// Fails where `F'(zeta) = 0`, where the local inverse does not exist.
pub fn rho_from_zeta(f: &Expr, zeta: Complex64) -> Result<(Complex64, Complex64)> {
    let var = f.single_var().unwrap_or("w").to_string();
    let fprime = f.differentiate(&var);
    let slope = fprime.eval1(&var, zeta)?;
    if slope.norm() == 0.0 {
        return Err(Error::Degenerate {
            at: zeta,
            indicator: 0.0,
        });
    }
    let rho = f.eval1(&var, zeta)?;
    Ok((rho, rho.conj()))
}

/// Surface point from the rho system:
///
/// ```text
/// x   = x0 + Re(rho - rho0) - Re I2
/// y   = y0 - Im(rho - rho0) - Im I2
/// phi = phi0 + 2 Re I1
/// ```
///
/// with `I1 = int Finv drho`, `I2 = int Finv^2 drho` from `rho0` to `rho`;
/// the sigma-side integrals are the conjugates of the rho-side ones, so the
/// output is exactly real. When `f` is supplied the claimed inverse is
/// verified: `|F(Finv(rho)) - rho| <= 1e-8 (1 + |rho|)`.
///
/// The sample's derivative fields use `zeta = Finv(rho)`: the rho-system
/// integrands are `(1 - zeta^2, i (1 + zeta^2), 2 zeta)`.
pub fn surface_from_rho(
    finv: &Expr,
    f: Option<&Expr>,
    rho: Complex64,
    rho0: Complex64,
    base: [f64; 3],
    path: Option<&Path>,
    tol: f64,
) -> Result<SurfaceSample> {
    let var = finv.single_var().unwrap_or("r").to_string();

    if let Some(fwd) = f {
        let fwd_var = fwd.single_var().unwrap_or("w").to_string();
        let zeta = finv.eval1(&var, rho)?;
        let back = fwd.eval1(&fwd_var, zeta)?;
        let gap = (back - rho).norm();
        if gap > 1e-8 * (1.0 + rho.norm()) {
            return Err(Error::InverseMismatch { at: rho, gap });
        }
    }

    let (i1, i2);
    if rho == rho0 {
        i1 = Complex64::new(0.0, 0.0);
        i2 = Complex64::new(0.0, 0.0);
    } else {
        let owned;
        let path = match path {
            Some(p) => {
                let scale = 1.0 + p.length();
                if (p.start() - rho0).norm() > 1e-9 * scale
                    || (p.end() - rho).norm() > 1e-9 * scale
                {
                    return Err(Error::InvalidPath(format!(
                        "path must run from rho0 = {rho0} to rho = {rho}"
                    )));
                }
                p
            }
            None => {
                owned = Path::default_between(rho0, rho, &[])?;
                &owned
            }
        };
        let (v1, _) = quad::integrate_fn_along(|p| finv.eval1(&var, p), path, tol)?;
        let (v2, _) = quad::integrate_fn_along(
            |p| {
                let z = finv.eval1(&var, p)?;
                Ok(z * z)
            },
            path,
            tol,
        )?;
        i1 = v1;
        i2 = v2;
    }

    let x = base[0] + (rho - rho0).re - i2.re;
    let y = base[1] - (rho - rho0).im - i2.im;
    let phi = base[2] + 2.0 * i1.re;

    // Analytic derivatives in (rho1, rho2) from the holomorphic integrands
    // px' = 1 - zeta^2, py' = 1 + zeta^2 (entering y with a minus sign), and
    // phi' = 2 zeta, where zeta = Finv(rho).
    let zeta = finv.eval1(&var, rho)?;
    let phi_line = [
        Complex64::new(1.0, 0.0) - zeta * zeta,
        Complex64::new(0.0, 1.0) * (Complex64::new(1.0, 0.0) + zeta * zeta),
        2.0 * zeta,
    ];
    let d1 = crate::weierstrass::derivs_from_holomorphic(phi_line);

    let dzeta = finv.differentiate(&var).eval1(&var, rho)?;
    let dphi_line = [
        -2.0 * zeta * dzeta,
        Complex64::new(0.0, 1.0) * (2.0 * zeta * dzeta),
        2.0 * dzeta,
    ];
    let d11 = [dphi_line[0].re, dphi_line[1].re, dphi_line[2].re];
    let d12 = [-dphi_line[0].im, -dphi_line[1].im, -dphi_line[2].im];
    let d22 = [-dphi_line[0].re, -dphi_line[1].re, -dphi_line[2].re];

    Ok(SurfaceSample {
        parameter: rho,
        position: [x, y, phi],
        d1: Some(d1),
        d2: Some((d11, d12, d22)),
    })
}

/// Unit normal from the stereographic datum `phi_rho`:
/// `N = (2 Re phi_rho, 2 Im phi_rho, |phi_rho|^2 - 1) / (1 + |phi_rho|^2)`.
pub fn normal_from_phi_rho(phi_rho: Complex64) -> [f64; 3] {
    let m2 = phi_rho.norm_sqr();
    let d = 1.0 + m2;
    [2.0 * phi_rho.re / d, 2.0 * phi_rho.im / d, (m2 - 1.0) / d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn helicoid_patch() -> GraphPatch {
        GraphPatch::from_text(
            "atan(y/x)",
            DomainDescriptor::rectangle(0.1, 5.0, -5.0, 5.0).unwrap(),
        )
        .unwrap()
    }

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn wirtinger_flat_graph() {
        let plane =
            GraphPatch::from_text("0", DomainDescriptor::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap())
                .unwrap();
        let (u, v) = wirtinger_uv(&plane, 0.3, -0.4).unwrap();
        assert_eq!(u, c(0.0, 0.0));
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn wirtinger_helicoid_closed_form() {
        // u = i/(2 zbar): at z = 1, u = i/2; at z = 2, u = i/4.
        let patch = helicoid_patch();
        let (u, v) = wirtinger_uv(&patch, 1.0, 0.0).unwrap();
        assert!((u - c(0.0, 0.5)).norm() < 1e-15);
        assert!((v - c(0.0, -0.5)).norm() < 1e-15);

        let (u, _) = wirtinger_uv(&patch, 2.0, 0.0).unwrap();
        assert!((u - c(0.0, 0.25)).norm() < 1e-15);
    }

    #[test]
    fn conjugacy_is_bitwise() {
        let patch = helicoid_patch();
        for k in 0..50 {
            let x = 0.2 + 0.09 * (k as f64);
            let y = -2.0 + 0.083 * (k as f64);
            let (u, v) = wirtinger_uv(&patch, x, y).unwrap();
            assert_eq!(v.re.to_bits(), u.conj().re.to_bits());
            assert_eq!(v.im.to_bits(), u.conj().im.to_bits());
        }
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_from_u(c(0.0, 0.0)), c(0.0, 0.0));

        // u = i/2 -> zeta = i (sqrt(2) - 1).
        let z = zeta_from_u(c(0.0, 0.5));
        assert!((z - c(0.0, SQRT2 - 1.0)).norm() < 1e-15, "{z}");

        // u = 2/3 -> zeta = 1/2 (inverse of u = zeta/(1-|zeta|^2)).
        let z = zeta_from_u(c(2.0 / 3.0, 0.0));
        assert!((z - c(0.5, 0.0)).norm() < 1e-15, "{z}");
    }

    #[test]
    fn zeta_agrees_with_paper_quotient_form() {
        // (sqrt(1+4uv) - 1)/(2v) wherever v != 0.
        for k in 0..100 {
            let u = Complex64::from_polar(0.01 + 0.1 * (k as f64), 0.37 * (k as f64));
            let v = u.conj();
            let s = (1.0 + 4.0 * (u * v).re).sqrt();
            let quotient = (s - 1.0) / (2.0 * v);
            let stable = zeta_from_u(u);
            assert!((stable - quotient).norm() <= 1e-12 * (1.0 + quotient.norm()));
        }
    }

    #[test]
    fn u_from_zeta_examples() {
        assert_eq!(u_from_zeta(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        // |zeta|^2 = 3 - 2 sqrt(2) gives 1 - |zeta|^2 = 2(sqrt(2)-1) and
        // u = zeta/(2(sqrt2 - 1)) = i/2.
        let u = u_from_zeta(c(0.0, SQRT2 - 1.0)).unwrap();
        assert!((u - c(0.0, 0.5)).norm() < 1e-15);
        let u = u_from_zeta(c(0.5, 0.0)).unwrap();
        assert!((u - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            u_from_zeta(c(1.0, 0.0)),
            Err(Error::UnitCircle(_))
        ));
    }

    #[test]
    fn round_trip_ten_thousand() {
        // u -> zeta -> u to 1e-12 relative, and |zeta| < 1 throughout.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rand01 = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..10_000 {
            let mag = 10.0 * rand01();
            let ang = 2.0 * std::f64::consts::PI * rand01();
            let u = Complex64::from_polar(mag, ang);
            let z = zeta_from_u(u);
            assert!(z.norm() < 1.0);
            let back = u_from_zeta(z).unwrap();
            assert!((back - u).norm() <= 1e-12 * (1.0 + u.norm()), "{u} -> {z} -> {back}");
        }
    }

    #[test]
    fn conformal_coordinates_helicoid_points() {
        let patch = helicoid_patch();
        let frames = conformal_coordinates(&patch, &[(1.0, 0.0), (2.4, 0.0)]).unwrap();
        // (1,0): u = i/2 -> zeta = i(sqrt2 - 1) ~ 0.41421356i.
        assert!((frames[0].zeta - c(0.0, 0.41421356237309515)).norm() < 1e-12);
        assert!(!frames[0].degenerate);
        // (x,y) = (1/(2r) - r/2, 0) with r = 0.2 gives x = 2.4 and zeta = 0.2i.
        assert!((frames[1].zeta - c(0.0, 0.2)).norm() < 1e-12, "{}", frames[1].zeta);
    }

    #[test]
    fn plane_is_degenerate_everywhere() {
        let plane = GraphPatch::from_text(
            "1 + 2*x - 3*y",
            DomainDescriptor::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        let frames =
            conformal_coordinates(&plane, &[(0.0, 0.0), (0.5, -0.5), (0.9, 0.9)]).unwrap();
        for fr in &frames {
            assert!(fr.degenerate);
        }
        // And recover_r refuses the precondition violation.
        assert!(recover_r(&plane, &frames).is_err());
    }

    #[test]
    fn umbilic_indicator_examples() {
        let plane = GraphPatch::from_text(
            "3*x - 2*y + 1",
            DomainDescriptor::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(umbilic_indicator(&plane, 0.2, 0.3).unwrap(), 0.0);

        // Helicoid: u_zbar v_z - u_z v_zbar = 1/(4|z|^4).
        let patch = helicoid_patch();
        assert!((umbilic_indicator(&patch, 1.0, 0.0).unwrap() - 0.25).abs() < 1e-14);
        assert!((umbilic_indicator(&patch, 2.0, 0.0).unwrap() - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn recover_r_exact_on_helicoid() {
        let patch = helicoid_patch();
        // Points on and off the axis, including the spec's zeta = 0.2i.
        let pts = [(1.0, 0.0), (2.4, 0.0), (1.3, 0.8), (0.9, -1.4)];
        let frames = conformal_coordinates(&patch, &pts).unwrap();
        let recovered = recover_r(&patch, &frames).unwrap();
        for (zeta, rhat) in recovered {
            let expected = c(0.0, -0.5) / (zeta * zeta);
            assert!(
                (rhat - expected).norm() <= 1e-12 * expected.norm(),
                "zeta {zeta}: {rhat} vs {expected}"
            );
        }
        // At zeta = i(sqrt2 - 1): R = i(3 + 2 sqrt2)/2 ~ 2.91421i.
        let r0 = recover_r(&patch, &frames[..1]).unwrap()[0].1;
        assert!((r0 - c(0.0, (3.0 + 2.0 * SQRT2) / 2.0)).norm() < 1e-12);
        // At zeta = 0.2i: -i/(2 (0.2i)^2) = 12.5i.
        let r1 = recover_r(&patch, &frames[1..2]).unwrap()[0].1;
        assert!((r1 - c(0.0, 12.5)).norm() < 1e-11, "{r1}");
    }

    #[test]
    fn recover_r_mls_on_fine_local_grid() {
        // The quadratic-fit route reaches ~1e-6 relative only on fine
        // stencils; sample a tight 5x5 patch of frames around (1, 0).
        let patch = helicoid_patch();
        let mut pts = Vec::new();
        let h = 5e-4;
        for i in -2i32..=2 {
            for j in -2i32..=2 {
                pts.push((1.0 + h * (i as f64), h * (j as f64)));
            }
        }
        let frames = conformal_coordinates(&patch, &pts).unwrap();
        let recovered = recover_r_mls(&patch, &frames, 12).unwrap();
        let center = &recovered[12];
        let expected = c(0.0, -0.5) / (center.0 * center.0);
        let rel = (center.1 - expected).norm() / expected.norm();
        assert!(rel < 1e-6, "rel err {rel}");
    }

    #[test]
    fn linear_system_residual_cases() {
        // Helicoid closed forms zbar = (i/2)(1/zeta - eta), z = (-i/2)(1/eta - zeta):
        // residual vanishes identically.
        let z = parse_expression_vars("-i/2 * (1/eta - zeta)", &["zeta", "eta"]).unwrap();
        let zb = parse_expression_vars("i/2 * (1/zeta - eta)", &["zeta", "eta"]).unwrap();
        for &p in &[c(0.3, 0.1), c(0.0, 0.41421356), c(-0.2, 0.5)] {
            let r = linear_system_residual(&z, &zb, p).unwrap();
            assert!(r.norm() < 1e-14, "at {p}: {r}");
        }

        // Test field z = zeta, zbar = eta: residual = 1.
        let z = parse_expression_vars("zeta", &["zeta", "eta"]).unwrap();
        let zb = parse_expression_vars("eta", &["zeta", "eta"]).unwrap();
        let r = linear_system_residual(&z, &zb, c(0.7, -0.3)).unwrap();
        assert!((r - c(1.0, 0.0)).norm() < 1e-15);

        // Constant fields: residual = 0.
        let z = parse_expression_vars("2 + 3*i", &["zeta", "eta"]).unwrap();
        let zb = parse_expression_vars("2 - 3*i", &["zeta", "eta"]).unwrap();
        let r = linear_system_residual(&z, &zb, c(0.4, 0.2)).unwrap();
        assert_eq!(r, c(0.0, 0.0));
    }

    #[test]
    fn rho_from_zeta_examples() {
        // F = i/(2 zeta): at zeta = i(sqrt2-1), rho = (sqrt2+1)/2, real.
        let f = parse_expression("i/(2*w)", "w").unwrap();
        let (rho, sigma) = rho_from_zeta(&f, c(0.0, SQRT2 - 1.0)).unwrap();
        assert!((rho - c((SQRT2 + 1.0) / 2.0, 0.0)).norm() < 1e-14, "{rho}");
        assert_eq!(sigma, rho.conj());

        let (rho, _) = rho_from_zeta(&f, c(0.0, 0.2)).unwrap();
        assert!((rho - c(2.5, 0.0)).norm() < 1e-14);

        // Identity map.
        let ident = parse_expression("w", "w").unwrap();
        let (rho, _) = rho_from_zeta(&ident, c(0.3, 0.4)).unwrap();
        assert_eq!(rho, c(0.3, 0.4));

        // F'(zeta) = 0 is flagged.
        let f2 = parse_expression("w^2", "w").unwrap();
        assert!(matches!(
            rho_from_zeta(&f2, c(0.0, 0.0)),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn surface_from_rho_helicoid() {
        let finv = parse_expression("i/(2*r)", "r").unwrap();
        let f = parse_expression("i/(2*w)", "w").unwrap();
        let rho0 = c((SQRT2 + 1.0) / 2.0, 0.0);
        let base = [1.0, 0.0, 0.0];

        // Empty path.
        let s = surface_from_rho(&finv, Some(&f), rho0, rho0, base, None, 1e-12).unwrap();
        assert_eq!(s.position, base);

        // rho = 2.5 corresponds to zeta = 0.2i and must land on (2.4, 0, 0).
        let s =
            surface_from_rho(&finv, Some(&f), c(2.5, 0.0), rho0, base, None, 1e-12).unwrap();
        assert!((s.position[0] - 2.4).abs() < 1e-9, "{:?}", s.position);
        assert!(s.position[1].abs() < 1e-9);
        assert!(s.position[2].abs() < 1e-9);
    }

    #[test]
    fn surface_from_rho_verifies_inverse() {
        // Claim Finv = r as the inverse of F = i/(2 w): mismatch must be caught.
        let finv = parse_expression("r", "r").unwrap();
        let f = parse_expression("i/(2*w)", "w").unwrap();
        let r = surface_from_rho(
            &finv,
            Some(&f),
            c(2.0, 0.0),
            c(1.0, 0.0),
            [0.0; 3],
            None,
            1e-10,
        );
        assert!(matches!(r, Err(Error::InverseMismatch { .. })));
    }

    #[test]
    fn normal_examples() {
        let n = normal_from_phi_rho(c(0.0, 0.0));
        assert_eq!(n, [0.0, 0.0, -1.0]);

        let n = normal_from_phi_rho(c(1.0, 0.0));
        assert_eq!(n, [1.0, 0.0, 0.0]);

        let n = normal_from_phi_rho(c(0.0, 1.0));
        assert_eq!(n, [0.0, 1.0, 0.0]);

        // |N| = 1 to 1e-14 for generic arguments.
        for k in 0..50 {
            let p = Complex64::from_polar(0.05 + 0.3 * (k as f64), 0.7 * (k as f64));
            let n = normal_from_phi_rho(p);
            let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            assert!((norm - 1.0).abs() < 1e-14);
            assert_eq!(n[2] < 0.0, p.norm() < 1.0);
        }
    }
}
