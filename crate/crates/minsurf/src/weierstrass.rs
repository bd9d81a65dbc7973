//! The Weierstrass-Enneper representation in (f,g)-form and R-form.
//!
//! In R-form the surface is
//!
//! ```text
//! x(z) = x0 + Re int (1 - w^2) R(w) dw
//! y(z) = y0 + Re int i (1 + w^2) R(w) dw
//! phi(z) = phi0 + Re int 2 w R(w) dw
//! ```
//!
//! with all integrals taken from the base parameter along a path inside the
//! declared domain. In (f,g)-form the integrand triple is
//! `Phi = ((1-g^2) f, i (1+g^2) f, 2 f g)`.
//!
//! For a holomorphic component integral `h`, the real coordinate `Re h`
//! has analytic parameter derivatives `d(Re h)/dz1 = Re h'` and
//! `d(Re h)/dz2 = -Im h'`, so first and second derivatives of samples come
//! from the integrand triple and its symbolic derivative, with no finite
//! differencing.

use num_complex::Complex64;

use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::path::Path;
use crate::quad;

/// One evaluated surface point: parameter, position, optional first and
/// second parameter derivatives.
#[derive(Debug, Clone)]
pub struct SurfaceSample {
    pub parameter: Complex64,
    pub position: [f64; 3],
    /// (X_{z1}, X_{z2}) when requested.
    pub d1: Option<([f64; 3], [f64; 3])>,
    /// (X_{z1 z1}, X_{z1 z2}, X_{z2 z2}) when requested.
    pub d2: Option<([f64; 3], [f64; 3], [f64; 3])>,
}

#[derive(Debug, Clone)]
pub enum WeForm {
    /// f analytic, g meromorphic on the domain.
    Fg { f: Expr, g: Expr },
    /// R = F', the reduced form away from umbilics.
    R { r: Expr },
}

/// Weierstrass data plus the bookkeeping the toolkit needs: base parameter
/// and base point, declared singularities, and the parameter domain.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub form: WeForm,
    pub base_param: Complex64,
    pub base_point: [f64; 3],
    pub singularities: Vec<Complex64>,
    pub domain: DomainDescriptor,
    /// F with F' = R, when known (catalog surfaces); enables the rho system.
    pub rho_map: Option<Expr>,
    /// F^{-1}, when known.
    pub rho_inverse: Option<Expr>,
    pub name: Option<String>,
}

impl WeierstrassData {
    pub fn new_r(
        r: Expr,
        base_param: Complex64,
        base_point: [f64; 3],
        singularities: Vec<Complex64>,
        domain: DomainDescriptor,
    ) -> Result<Self> {
        let data = WeierstrassData {
            form: WeForm::R { r },
            base_param,
            base_point,
            singularities,
            domain,
            rho_map: None,
            rho_inverse: None,
            name: None,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn new_fg(
        f: Expr,
        g: Expr,
        base_param: Complex64,
        base_point: [f64; 3],
        singularities: Vec<Complex64>,
        domain: DomainDescriptor,
    ) -> Result<Self> {
        let data = WeierstrassData {
            form: WeForm::Fg { f, g },
            base_param,
            base_point,
            singularities,
            domain,
            rho_map: None,
            rho_inverse: None,
            name: None,
        };
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        if !self.domain.contains(self.base_param) {
            return Err(Error::InvalidData(format!(
                "base parameter {} outside the declared domain",
                self.base_param
            )));
        }
        if self
            .singularities
            .iter()
            .any(|s| (s - self.base_param).norm() < 1e-12)
        {
            return Err(Error::InvalidData(
                "base parameter coincides with a declared singularity".to_string(),
            ));
        }
        if let WeForm::R { r } = &self.form {
            // R must be finite at the base parameter.
            let var = expr_var(r);
            r.eval1(&var, self.base_param).map_err(|_| {
                Error::InvalidData(format!(
                    "R not evaluable at the base parameter {}",
                    self.base_param
                ))
            })?;
        }
        Ok(())
    }

    /// The variable name the expressions are written in.
    pub fn var(&self) -> String {
        match &self.form {
            WeForm::R { r } => expr_var(r),
            WeForm::Fg { f, g } => {
                let v = f.single_var().map(str::to_string);
                v.or_else(|| g.single_var().map(str::to_string))
                    .unwrap_or_else(|| "w".to_string())
            }
        }
    }

    /// The integrand triple Phi as expressions in [`Self::var`].
    pub fn integrands(&self) -> [Expr; 3] {
        match &self.form {
            WeForm::R { r } => {
                let w = Expr::var(&expr_var(r));
                [
                    expr::mul(expr::one_minus_sq(w.clone()), r.clone()),
                    expr::mul(expr::i_times_one_plus_sq(w.clone()), r.clone()),
                    expr::mul(expr::two_times(w), r.clone()),
                ]
            }
            WeForm::Fg { f, g } => [
                expr::mul(expr::one_minus_sq(g.clone()), f.clone()),
                expr::mul(expr::i_times_one_plus_sq(g.clone()), f.clone()),
                expr::mul(expr::two_times(g.clone()), f.clone()),
            ],
        }
    }

    /// Default integration path from the base parameter. On annulus domains
    /// the default is a radial leg plus a polyline arc, which stays inside
    /// the annulus, keeps clear of the central singularity, and never
    /// crosses the slit (so antiderivatives with a branch point at the
    /// origin stay on the principal branch). Elsewhere: the straight
    /// segment, with a two-leg detour near declared singularities.
    pub fn default_path(&self, to: Complex64) -> Result<Path> {
        match self.domain {
            DomainDescriptor::Annulus { .. } => Path::radial_then_arc(self.base_param, to, 10.0),
            _ => Path::default_between(self.base_param, to, &self.singularities),
        }
    }
}

fn expr_var(e: &Expr) -> String {
    e.single_var().unwrap_or("w").to_string()
}

/// The triple `Phi = ((1-g^2) f, i (1+g^2) f, 2 f g)` evaluated at tau.
/// Satisfies `Phi1^2 + Phi2^2 + Phi3^2 = 0` up to rounding.
pub fn phi_triple(f: &Expr, g: &Expr, tau: Complex64) -> Result<[Complex64; 3]> {
    let fv = eval_single(f, tau)?;
    let gv = eval_single(g, tau)?;
    let i = Complex64::new(0.0, 1.0);
    Ok([
        (1.0 - gv * gv) * fv,
        i * (1.0 + gv * gv) * fv,
        2.0 * fv * gv,
    ])
}

fn eval_single(e: &Expr, at: Complex64) -> Result<Complex64> {
    let var = expr_var(e);
    e.eval1(&var, at)
}

/// Immersion in (f,g)-form: `X = X0 + Re int Phi` along `path` (which must
/// run base -> tau). `path: None` selects the default policy.
pub fn immerse_fg(
    data: &WeierstrassData,
    tau: Complex64,
    path: Option<&Path>,
    tol: f64,
) -> Result<SurfaceSample> {
    if !matches!(data.form, WeForm::Fg { .. }) {
        return Err(Error::InvalidData(
            "immerse_fg requires (f,g)-form data".to_string(),
        ));
    }
    SurfaceMap::new(data.clone(), tol)?.sample(tau, path, false)
}

/// Immersion in R-form via the three contour integrals.
pub fn immerse_r(
    data: &WeierstrassData,
    zeta: Complex64,
    path: Option<&Path>,
    tol: f64,
) -> Result<SurfaceSample> {
    if !matches!(data.form, WeForm::R { .. }) {
        return Err(Error::InvalidData(
            "immerse_r requires R-form data".to_string(),
        ));
    }
    SurfaceMap::new(data.clone(), tol)?.sample(zeta, path, false)
}

/// Closed-form Gaussian curvature `K = -4 |R(w)|^-2 (1 + |w|^2)^-4`.
/// Strictly negative and finite wherever R is finite and nonzero.
pub fn gaussian_curvature_r(r: &Expr, w: Complex64) -> Result<f64> {
    let rv = eval_single(r, w)?;
    if rv.norm() == 0.0 {
        return Err(Error::CurvatureSingular(w));
    }
    let denom = rv.norm_sqr() * (1.0 + w.norm_sqr()).powi(4);
    let k = -4.0 / denom;
    if !k.is_finite() {
        return Err(Error::CurvatureSingular(w));
    }
    Ok(k)
}

/// First fundamental form coefficients (E, F, G) from a sample's first
/// derivatives.
pub fn first_fundamental_form(sample: &SurfaceSample) -> Result<(f64, f64, f64)> {
    let (xu, xv) = sample.d1.ok_or(Error::MissingDerivatives)?;
    Ok((dot(xu, xu), dot(xu, xv), dot(xv, xv)))
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// A realized immersion: the integrand triple and its derivative, ready for
/// repeated sampling. Telescoped evaluation (`offset_position`) lets grid
/// walks reuse already-integrated prefixes.
pub struct SurfaceMap {
    pub data: WeierstrassData,
    integrands: [Expr; 3],
    integrand_derivs: [Expr; 3],
    var: String,
    pub tol: f64,
}

impl SurfaceMap {
    pub fn new(data: WeierstrassData, tol: f64) -> Result<Self> {
        if tol <= 0.0 {
            return Err(Error::InvalidData(format!(
                "integration tolerance must be positive, got {tol}"
            )));
        }
        let var = data.var();
        let integrands = data.integrands();
        let integrand_derivs = [
            integrands[0].differentiate(&var),
            integrands[1].differentiate(&var),
            integrands[2].differentiate(&var),
        ];
        Ok(SurfaceMap {
            data,
            integrands,
            integrand_derivs,
            var,
            tol,
        })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Integrand triple at a parameter value.
    pub fn phi_at(&self, p: Complex64) -> Result<[Complex64; 3]> {
        Ok([
            self.integrands[0].eval1(&self.var, p)?,
            self.integrands[1].eval1(&self.var, p)?,
            self.integrands[2].eval1(&self.var, p)?,
        ])
    }

    /// Derivative of the integrand triple at a parameter value.
    pub fn phi_deriv_at(&self, p: Complex64) -> Result<[Complex64; 3]> {
        Ok([
            self.integrand_derivs[0].eval1(&self.var, p)?,
            self.integrand_derivs[1].eval1(&self.var, p)?,
            self.integrand_derivs[2].eval1(&self.var, p)?,
        ])
    }

    /// Position by integrating from the base parameter along `path`
    /// (default policy when `None`).
    pub fn position(&self, p: Complex64, path: Option<&Path>) -> Result<[f64; 3]> {
        if p == self.data.base_param {
            return Ok(self.data.base_point);
        }
        let owned;
        let path = match path {
            Some(path) => {
                let d_start = (path.start() - self.data.base_param).norm();
                let d_end = (path.end() - p).norm();
                let scale = 1.0 + path.length();
                if d_start > 1e-9 * scale || d_end > 1e-9 * scale {
                    return Err(Error::InvalidPath(format!(
                        "path must run from the base parameter {} to {}",
                        self.data.base_param, p
                    )));
                }
                path
            }
            None => {
                owned = self.data.default_path(p)?;
                &owned
            }
        };
        let mut x = self.data.base_point;
        for (k, item) in x.iter_mut().enumerate() {
            let v = quad::integrate_along(&self.integrands[k], &self.var, path, self.tol)?;
            *item += v.re;
        }
        Ok(x)
    }

    /// Extend a known position at `from` to the adjacent parameter `to` by
    /// integrating only the connecting segment.
    pub fn offset_position(
        &self,
        from_value: [f64; 3],
        from: Complex64,
        to: Complex64,
        tol: f64,
    ) -> Result<[f64; 3]> {
        if from == to {
            return Ok(from_value);
        }
        let seg = Path::default_between(from, to, &self.data.singularities)?;
        let mut x = from_value;
        for (k, item) in x.iter_mut().enumerate() {
            let v = quad::integrate_along(&self.integrands[k], &self.var, &seg, tol)?;
            *item += v.re;
        }
        Ok(x)
    }

    /// Analytic first derivatives (X_{z1}, X_{z2}) from the integrand triple.
    pub fn first_derivatives(&self, p: Complex64) -> Result<([f64; 3], [f64; 3])> {
        let phi = self.phi_at(p)?;
        Ok(derivs_from_holomorphic(phi))
    }

    /// Analytic second derivatives from the integrand derivative triple.
    pub fn second_derivatives(&self, p: Complex64) -> Result<([f64; 3], [f64; 3], [f64; 3])> {
        let dphi = self.phi_deriv_at(p)?;
        let d11 = [dphi[0].re, dphi[1].re, dphi[2].re];
        let d12 = [-dphi[0].im, -dphi[1].im, -dphi[2].im];
        let d22 = [-dphi[0].re, -dphi[1].re, -dphi[2].re];
        Ok((d11, d12, d22))
    }

    /// Full sample, optionally with analytic derivative fields.
    pub fn sample(&self, p: Complex64, path: Option<&Path>, derivatives: bool) -> Result<SurfaceSample> {
        let position = self.position(p, path)?;
        let (d1, d2) = if derivatives {
            (
                Some(self.first_derivatives(p)?),
                Some(self.second_derivatives(p)?),
            )
        } else {
            (None, None)
        };
        Ok(SurfaceSample {
            parameter: p,
            position,
            d1,
            d2,
        })
    }

    /// A sampler closure with analytic derivatives and domain checking,
    /// suitable for the verification battery.
    pub fn sampler(&self) -> impl Fn(Complex64) -> Result<SurfaceSample> + Sync + '_ {
        move |p: Complex64| {
            if !self.data.domain.contains(p) {
                return Err(Error::OutOfDomain(p));
            }
            self.sample(p, None, true)
        }
    }

    /// Like [`Self::sampler`], but positions telescope from the previous
    /// query when it is nearby, so sequential grid sweeps pay one short
    /// segment integral per point instead of a full base path. Falls back
    /// to a fresh base path for long hops and for chords that would cross
    /// the slit of an annulus domain.
    pub fn cached_sampler(&self) -> impl Fn(Complex64) -> Result<SurfaceSample> + '_ {
        let cache: std::cell::RefCell<Option<(Complex64, [f64; 3])>> =
            std::cell::RefCell::new(None);
        move |p: Complex64| {
            if !self.data.domain.contains(p) {
                return Err(Error::OutOfDomain(p));
            }
            let cached = *cache.borrow();
            let position = match cached {
                Some((q, xq)) if self.offset_ok(q, p) => {
                    self.offset_position(xq, q, p, self.tol * 0.1)?
                }
                _ => self.position(p, None)?,
            };
            *cache.borrow_mut() = Some((p, position));
            Ok(SurfaceSample {
                parameter: p,
                position,
                d1: Some(self.first_derivatives(p)?),
                d2: Some(self.second_derivatives(p)?),
            })
        }
    }

    fn offset_ok(&self, from: Complex64, to: Complex64) -> bool {
        if from == to {
            return true;
        }
        let short = (to - from).norm() <= 0.5 * from.norm().min(to.norm()).max(1e-6);
        if !short {
            return false;
        }
        if matches!(self.data.domain, DomainDescriptor::Annulus { .. }) {
            // A chord crossing the negative real axis would continue the
            // integrand's antiderivative onto the wrong branch.
            if chord_crosses_negative_axis(from, to) {
                return false;
            }
        }
        true
    }
}

fn chord_crosses_negative_axis(a: Complex64, b: Complex64) -> bool {
    if a.im == 0.0 || b.im == 0.0 {
        return a.re < 0.0 || b.re < 0.0;
    }
    if (a.im > 0.0) == (b.im > 0.0) {
        return false;
    }
    let t = a.im / (a.im - b.im);
    let x = a.re + t * (b.re - a.re);
    x <= 0.0
}

/// For holomorphic component integrals with integrand triple `phi`,
/// `X_{z1} = Re phi` and `X_{z2} = -Im phi` componentwise.
pub fn derivs_from_holomorphic(phi: [Complex64; 3]) -> ([f64; 3], [f64; 3]) {
    (
        [phi[0].re, phi[1].re, phi[2].re],
        [-phi[0].im, -phi[1].im, -phi[2].im],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn enneper_fg() -> WeierstrassData {
        WeierstrassData::new_fg(
            parse_expression("1", "t").unwrap(),
            parse_expression("t", "t").unwrap(),
            c(0.0, 0.0),
            [0.0; 3],
            vec![],
            DomainDescriptor::disk(1.5).unwrap(),
        )
        .unwrap()
    }

    fn helicoid_r() -> WeierstrassData {
        WeierstrassData::new_r(
            parse_expression("-i/(2*w^2)", "w").unwrap(),
            c(0.0, std::f64::consts::SQRT_2 - 1.0),
            [1.0, 0.0, 0.0],
            vec![c(0.0, 0.0)],
            DomainDescriptor::annulus(0.05, 0.95).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn phi_triple_substitutions() {
        let one = parse_expression("1", "t").unwrap();
        let zero = parse_expression("0", "t").unwrap();
        let t = parse_expression("t", "t").unwrap();

        let p = phi_triple(&one, &zero, c(0.0, 0.0)).unwrap();
        assert!((p[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((p[1] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((p[2] - c(0.0, 0.0)).norm() < 1e-15);

        let p = phi_triple(&one, &one, c(0.3, 0.7)).unwrap();
        assert!((p[0] - c(0.0, 0.0)).norm() < 1e-15);
        assert!((p[1] - c(0.0, 2.0)).norm() < 1e-15);
        assert!((p[2] - c(2.0, 0.0)).norm() < 1e-15);

        let p = phi_triple(&one, &t, c(0.0, 1.0)).unwrap();
        assert!((p[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((p[1] - c(0.0, 0.0)).norm() < 1e-15);
        assert!((p[2] - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn null_identity_on_catalog_corpus() {
        // |Phi1^2 + Phi2^2 + Phi3^2| <= 1e-12 * |Phi|^2 over 1000 samples
        // drawn from the catalog (f,g) pairs.
        let pairs = [
            ("1", "t"),           // Enneper
            ("-i/(2*t^2)", "t"),  // helicoid (w = g(t) = t)
            ("1/(2*t^2)", "t"),   // catenoid
        ];
        let mut count = 0;
        for (ftxt, gtxt) in pairs {
            let f = parse_expression(ftxt, "t").unwrap();
            let g = parse_expression(gtxt, "t").unwrap();
            for k in 0..334 {
                let r = 0.2 + 0.7 * ((k % 31) as f64) / 31.0;
                let th = -3.0 + 6.0 * ((k % 97) as f64) / 97.0;
                let tau = Complex64::from_polar(r, th);
                let p = phi_triple(&f, &g, tau).unwrap();
                let null = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                let scale = p[0].norm_sqr() + p[1].norm_sqr() + p[2].norm_sqr();
                assert!(null.norm() <= 1e-12 * scale, "{ftxt},{gtxt} at {tau}");
                count += 1;
            }
        }
        assert!(count >= 1000);
    }

    #[test]
    fn enneper_base_point() {
        let data = enneper_fg();
        let s = immerse_fg(&data, c(0.0, 0.0), None, 1e-10).unwrap();
        assert_eq!(s.position, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn enneper_at_one_and_i() {
        // Antiderivative (t - t^3/3, i(t + t^3/3), t^2).
        let data = enneper_fg();
        let s = immerse_fg(&data, c(1.0, 0.0), None, 1e-12).unwrap();
        let expect = [2.0 / 3.0, 0.0, 1.0];
        for k in 0..3 {
            assert!((s.position[k] - expect[k]).abs() < 1e-10, "{:?}", s.position);
        }
        let s = immerse_fg(&data, c(0.0, 1.0), None, 1e-12).unwrap();
        let expect = [0.0, -2.0 / 3.0, -1.0];
        for k in 0..3 {
            assert!((s.position[k] - expect[k]).abs() < 1e-10, "{:?}", s.position);
        }
    }

    #[test]
    fn helicoid_base_and_imaginary_axis_point() {
        let data = helicoid_r();
        let s = immerse_r(&data, data.base_param, None, 1e-10).unwrap();
        assert_eq!(s.position, [1.0, 0.0, 0.0]);

        // zeta = 0.2i: closed form gives (1/(2*0.2) - 0.2/2, 0, 0) = (2.4, 0, 0).
        let s = immerse_r(&data, c(0.0, 0.2), None, 1e-12).unwrap();
        assert!((s.position[0] - 2.4).abs() < 1e-10, "{:?}", s.position);
        assert!(s.position[1].abs() < 1e-10);
        assert!(s.position[2].abs() < 1e-10);
    }

    #[test]
    fn helicoid_general_point_matches_closed_form() {
        // zeta = 0.3 + 0.1i; closed forms x = (1/r - r) sin(th)/2,
        // y = -(1/r - r) cos(th)/2, phi = th - pi/2.
        let data = helicoid_r();
        let z = c(0.3, 0.1);
        let s = immerse_r(&data, z, None, 1e-12).unwrap();
        let (r, th) = (z.norm(), z.arg());
        let expect = [
            (1.0 / r - r) * th.sin() / 2.0,
            -(1.0 / r - r) * th.cos() / 2.0,
            th - std::f64::consts::FRAC_PI_2,
        ];
        for k in 0..3 {
            assert!(
                (s.position[k] - expect[k]).abs() < 1e-9,
                "{:?} vs {:?}",
                s.position,
                expect
            );
        }
        // Sanity against the hand-computed values for this point.
        assert!((s.position[0] - 0.45).abs() < 1e-9);
        assert!((s.position[1] + 1.35).abs() < 1e-9);
    }

    #[test]
    fn fg_r_consistency_for_enneper() {
        // g(t) = t makes R = f directly; both forms must agree.
        let fg = enneper_fg();
        let r = WeierstrassData::new_r(
            parse_expression("1", "w").unwrap(),
            c(0.0, 0.0),
            [0.0; 3],
            vec![],
            DomainDescriptor::disk(1.5).unwrap(),
        )
        .unwrap();
        for &p in &[c(0.5, 0.2), c(-0.4, 0.8), c(1.0, -0.3)] {
            let a = immerse_fg(&fg, p, None, 1e-11).unwrap();
            let b = immerse_r(&r, p, None, 1e-11).unwrap();
            for k in 0..3 {
                assert!((a.position[k] - b.position[k]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gaussian_curvature_examples() {
        let one = parse_expression("1", "w").unwrap();
        assert!((gaussian_curvature_r(&one, c(0.0, 0.0)).unwrap() + 4.0).abs() < 1e-15);
        assert!((gaussian_curvature_r(&one, c(1.0, 0.0)).unwrap() + 0.25).abs() < 1e-15);

        // Helicoid at zeta0: oracle is the graph curvature -(1+x^2+y^2)^-2
        // at (x,y) = (1,0), i.e. -1/4.
        let r = parse_expression("-i/(2*w^2)", "w").unwrap();
        let z0 = c(0.0, std::f64::consts::SQRT_2 - 1.0);
        assert!((gaussian_curvature_r(&r, z0).unwrap() + 0.25).abs() < 1e-13);
    }

    #[test]
    fn gaussian_curvature_zero_r_is_singular() {
        let r = parse_expression("w", "w").unwrap();
        assert!(matches!(
            gaussian_curvature_r(&r, c(0.0, 0.0)),
            Err(Error::CurvatureSingular(_))
        ));
    }

    #[test]
    fn fundamental_form_plane_and_stretch() {
        let plane = SurfaceSample {
            parameter: c(0.0, 0.0),
            position: [0.0; 3],
            d1: Some(([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])),
            d2: None,
        };
        assert_eq!(first_fundamental_form(&plane).unwrap(), (1.0, 0.0, 1.0));

        let stretched = SurfaceSample {
            parameter: c(0.0, 0.0),
            position: [0.0; 3],
            d1: Some(([1.0, 0.0, 0.0], [0.0, 2.0, 0.0])),
            d2: None,
        };
        assert_eq!(first_fundamental_form(&stretched).unwrap(), (1.0, 0.0, 4.0));

        let bare = SurfaceSample {
            parameter: c(0.0, 0.0),
            position: [0.0; 3],
            d1: None,
            d2: None,
        };
        assert!(matches!(
            first_fundamental_form(&bare),
            Err(Error::MissingDerivatives)
        ));
    }

    #[test]
    fn helicoid_sample_is_conformal() {
        // E = G, F = 0 within 1e-8 E at the base parameter; derivatives are
        // checked against central differences of the immersion.
        let data = helicoid_r();
        let map = SurfaceMap::new(data.clone(), 1e-12).unwrap();
        let p = data.base_param;
        let s = map.sample(p, None, true).unwrap();
        let (e, f, g) = first_fundamental_form(&s).unwrap();
        assert!((e - g).abs() <= 1e-8 * e);
        assert!(f.abs() <= 1e-8 * e);

        // FD cross-check of the analytic first derivatives.
        let h = 1e-6;
        let xp = map.position(p + c(h, 0.0), None).unwrap();
        let xm = map.position(p - c(h, 0.0), None).unwrap();
        let (d1, _) = s.d1.unwrap();
        for k in 0..3 {
            let fd = (xp[k] - xm[k]) / (2.0 * h);
            assert!((fd - d1[k]).abs() < 1e-6 * (1.0 + d1[k].abs()));
        }
    }

    #[test]
    fn base_point_outside_domain_rejected() {
        let r = parse_expression("1", "w").unwrap();
        let bad = WeierstrassData::new_r(
            r,
            c(10.0, 0.0),
            [0.0; 3],
            vec![],
            DomainDescriptor::disk(1.5).unwrap(),
        );
        assert!(bad.is_err());
    }
}
