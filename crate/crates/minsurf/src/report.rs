//! The verification report: every residual sweep for a configured surface,
//! serialized as JSON with a fixed key order.

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog;
use crate::config::{RunConfig, SurfaceSource};
use crate::domain::GridSpec;
use crate::error::{Error, Result};
use crate::expr::parse_expression;
use crate::hodograph::{self, GraphPatch};
use crate::verify::{self, ResidualReport};
use crate::weierstrass::{SurfaceMap, WeierstrassData};

#[derive(Debug, Clone, Serialize)]
pub struct HodographReport {
    pub points: usize,
    pub degenerate_points: usize,
    /// max |v - conj(u)| over the frames; exactly zero by construction.
    pub max_conjugacy_gap: f64,
    /// max relative |u_from_zeta(zeta_from_u(u)) - u|.
    pub max_roundtrip_error: f64,
    /// Largest |zeta| seen; must stay below 1.
    pub max_zeta_modulus: f64,
    /// max relative error of the recovered R against the configured
    /// reference, over non-degenerate frames; absent without a reference.
    pub reference_max_rel_err: Option<f64>,
    pub reference_tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub surface: String,
    pub config_hash: String,
    pub grid: String,
    pub checks: Vec<ResidualReport>,
    pub hodograph: Option<HodographReport>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// Resolve the configured surface into Weierstrass data (with base/domain
/// overrides applied), or `None` when the source is a graph.
pub fn resolve_weierstrass(cfg: &RunConfig) -> Result<Option<WeierstrassData>> {
    let mut data = match &cfg.source {
        SurfaceSource::Catalog(name) => catalog::catalog_lookup(name)?,
        SurfaceSource::InlineR(text) => {
            let r = parse_expression_any(text)?;
            let domain = cfg.domain.clone().ok_or_else(|| {
                Error::Config("inline R surface needs a [domain] section".to_string())
            })?;
            WeierstrassData::new_r(
                r,
                cfg.base_param.unwrap_or(Complex64::new(0.0, 0.0)),
                cfg.base_point.unwrap_or([0.0; 3]),
                vec![],
                domain,
            )?
        }
        SurfaceSource::InlineFg { f, g } => {
            let fe = parse_expression_any(f)?;
            let ge = parse_expression_any(g)?;
            let domain = cfg.domain.clone().ok_or_else(|| {
                Error::Config("inline (f,g) surface needs a [domain] section".to_string())
            })?;
            WeierstrassData::new_fg(
                fe,
                ge,
                cfg.base_param.unwrap_or(Complex64::new(0.0, 0.0)),
                cfg.base_point.unwrap_or([0.0; 3]),
                vec![],
                domain,
            )?
        }
        SurfaceSource::Graph(_) => return Ok(None),
    };
    if matches!(cfg.source, SurfaceSource::Catalog(_)) {
        if let Some(p) = cfg.base_param {
            data.base_param = p;
        }
        if let Some(x) = cfg.base_point {
            data.base_point = x;
        }
    }
    Ok(Some(data))
}

fn parse_expression_any(text: &str) -> Result<crate::expr::Expr> {
    // Accept any single-letter variable the user wrote; try the common ones.
    for var in ["w", "z", "t", "s"] {
        if let Ok(e) = parse_expression(text, var) {
            return Ok(e);
        }
    }
    parse_expression(text, "w")
}

pub fn surface_label(cfg: &RunConfig) -> String {
    match &cfg.source {
        SurfaceSource::Catalog(name) => name.clone(),
        SurfaceSource::InlineR(r) => format!("inline R = {r}"),
        SurfaceSource::InlineFg { f, g } => format!("inline f = {f}, g = {g}"),
        SurfaceSource::Graph(phi) => format!("graph phi = {phi}"),
    }
}

/// Run the full battery for the configured surface and assemble the report.
pub fn run_verification_report(cfg: &RunConfig) -> Result<Report> {
    match resolve_weierstrass(cfg)? {
        Some(data) => weierstrass_report(cfg, data),
        None => graph_report(cfg),
    }
}

fn weierstrass_report(cfg: &RunConfig, data: WeierstrassData) -> Result<Report> {
    let t = &cfg.tolerances;
    let map = SurfaceMap::new(data, t.integration)?;
    let verify_domain = match &cfg.domain {
        Some(d) => d.clone(),
        None => catalog::default_verify_domain(&map.data)?,
    };
    let grid = verify_domain.grid(cfg.n1, cfg.n2)?;
    let mut checks = Vec::new();

    // Conformality of the parametrization (analytic derivatives).
    checks.push(verify::isothermal_residuals(
        map.cached_sampler(),
        &grid,
        t.isothermal,
    )?);

    // Harmonicity: 5-point Laplacian on a grid inset by the stencil step.
    let inner = verify_domain.inset(t.harmonic_step)?.grid(cfg.n1, cfg.n2)?;
    checks.push(verify::harmonic_residual(
        map.cached_sampler(),
        &inner,
        t.harmonic_step,
        t.harmonic,
    )?);

    // Mean curvature magnitude over the grid.
    let curvature_sampler = map.cached_sampler();
    let mut h_values = Vec::with_capacity(grid.points.len());
    for &p in &grid.points {
        let h = verify::mean_curvature(&curvature_sampler, p, t.curvature_step)?;
        h_values.push((p, h.abs()));
    }
    checks.push(ResidualReport::from_values(
        "mean_curvature",
        &grid.desc,
        &h_values,
        1.0,
        t.mean_curvature,
    ));

    // Closed-form vs fundamental-forms Gaussian curvature, plus negativity,
    // on a deterministic subsample of up to 100 grid nodes (R-form only).
    if matches!(map.data.form, crate::weierstrass::WeForm::R { .. }) {
        let stride = (grid.points.len() / 100).max(1);
        let mut gap_values = Vec::new();
        let mut sign_values = Vec::new();
        for &p in grid.points.iter().step_by(stride) {
            let (closed, numeric) = verify::curvature_consistency(&map, p, t.curvature_step)?;
            gap_values.push((p, (closed - numeric).abs() / closed.abs()));
            let sign_ok = closed < 0.0 && numeric < 0.0;
            sign_values.push((p, if sign_ok { 0.0 } else { 1.0 }));
        }
        checks.push(ResidualReport::from_values(
            "curvature_consistency",
            &grid.desc,
            &gap_values,
            1.0,
            t.curvature_gap,
        ));
        checks.push(ResidualReport::from_values(
            "curvature_negativity",
            &grid.desc,
            &sign_values,
            1.0,
            0.5,
        ));
    }

    // Null identity of the integrand triple.
    let mut null_values = Vec::with_capacity(grid.points.len());
    for &p in &grid.points {
        let phi = map.phi_at(p)?;
        let null = phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2];
        let scale = phi[0].norm_sqr() + phi[1].norm_sqr() + phi[2].norm_sqr();
        null_values.push((p, null.norm() / scale.max(f64::MIN_POSITIVE)));
    }
    checks.push(ResidualReport::from_values(
        "null_identity",
        &grid.desc,
        &null_values,
        1.0,
        1e-12,
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        surface: surface_label(cfg),
        config_hash: cfg.config_hash.clone(),
        grid: grid.desc,
        checks,
        hodograph: None,
        pass,
    })
}

fn graph_report(cfg: &RunConfig) -> Result<Report> {
    let phi_text = match &cfg.source {
        SurfaceSource::Graph(p) => p,
        _ => unreachable!("graph_report called for non-graph source"),
    };
    let t = &cfg.tolerances;
    let domain = cfg.domain.clone().ok_or_else(|| {
        Error::Config("graph surface needs a [domain] section".to_string())
    })?;
    let patch = GraphPatch::from_text(phi_text, domain.clone())?;
    let grid = domain.grid(cfg.n1, cfg.n2)?;
    let xy: Vec<(f64, f64)> = grid.points.iter().map(|p| (p.re, p.im)).collect();

    // Minimality of the graph (analytic partials).
    let mut values = Vec::with_capacity(xy.len());
    for &(x, y) in &xy {
        let r = verify::minimal_eq_residual(&patch, x, y)?;
        values.push((Complex64::new(x, y), r));
    }
    let checks = vec![ResidualReport::from_values(
        "minimal_equation",
        &grid.desc,
        &values,
        1.0,
        t.minimality,
    )];

    // Hodograph stage.
    let frames = hodograph::conformal_coordinates(&patch, &xy)?;
    let degenerate = frames.iter().filter(|f| f.degenerate).count();
    let mut max_conj = 0.0f64;
    let mut max_round = 0.0f64;
    let mut max_zeta = 0.0f64;
    for fr in &frames {
        max_conj = max_conj.max((fr.v - fr.u.conj()).norm());
        max_zeta = max_zeta.max(fr.zeta.norm());
        if !fr.degenerate {
            if let Ok(back) = hodograph::u_from_zeta(fr.zeta) {
                max_round = max_round.max((back - fr.u).norm() / (1.0 + fr.u.norm()));
            }
        }
    }

    let mut reference_max_rel_err = None;
    if let Some(ref_text) = &cfg.reference_r {
        let reference = parse_expression_any(ref_text)?;
        let var = reference.single_var().unwrap_or("w").to_string();
        let live: Vec<_> = frames
            .iter()
            .filter(|f| !f.degenerate && f.zeta.norm() > 0.0)
            .cloned()
            .collect();
        let recovered = hodograph::recover_r(&patch, &live)?;
        let mut worst = 0.0f64;
        for (zeta, rhat) in recovered {
            let expected = reference.eval1(&var, zeta)?;
            if expected.norm() == 0.0 {
                continue;
            }
            worst = worst.max((rhat - expected).norm() / expected.norm());
        }
        reference_max_rel_err = Some(worst);
    }

    let hodo_pass = max_conj == 0.0
        && max_round <= 1e-12
        && max_zeta < 1.0
        && reference_max_rel_err.map_or(true, |e| e <= t.hodograph_reference);
    let hodo = HodographReport {
        points: frames.len(),
        degenerate_points: degenerate,
        max_conjugacy_gap: max_conj,
        max_roundtrip_error: max_round,
        max_zeta_modulus: max_zeta,
        reference_max_rel_err,
        reference_tolerance: t.hodograph_reference,
        pass: hodo_pass,
    };

    let pass = checks.iter().all(|c| c.pass) && hodo.pass;
    Ok(Report {
        surface: surface_label(cfg),
        config_hash: cfg.config_hash.clone(),
        grid: grid.desc,
        checks,
        hodograph: Some(hodo),
        pass,
    })
}

/// Hodograph frame rows for CSV export: x, y, u, zeta, and the recovered R
/// (NaN where the recovery is undefined).
pub struct FrameRow {
    pub x: f64,
    pub y: f64,
    pub u: Complex64,
    pub zeta: Complex64,
    pub rhat: Option<Complex64>,
}

/// The `hodograph` pipeline: frames plus recovered R over a grid.
pub fn hodograph_frames(
    patch: &GraphPatch,
    grid: &GridSpec,
) -> Result<Vec<FrameRow>> {
    let xy: Vec<(f64, f64)> = grid.points.iter().map(|p| (p.re, p.im)).collect();
    let frames = hodograph::conformal_coordinates(patch, &xy)?;
    let mut rows = Vec::with_capacity(frames.len());
    for fr in &frames {
        let rhat = if fr.degenerate || fr.zeta.norm() == 0.0 {
            None
        } else {
            let rec = hodograph::recover_r(patch, std::slice::from_ref(fr))?;
            Some(rec[0].1)
        };
        rows.push(FrameRow {
            x: fr.x,
            y: fr.y,
            u: fr.u,
            zeta: fr.zeta,
            rhat,
        });
    }
    Ok(rows)
}

/// CSV for frame rows: `x,y,u_re,u_im,zeta_re,zeta_im,Rhat_re,Rhat_im`.
pub fn frames_to_csv(rows: &[FrameRow]) -> String {
    use crate::mesh::fmt17;
    let mut out = String::from("x,y,u_re,u_im,zeta_re,zeta_im,Rhat_re,Rhat_im\n");
    for r in rows {
        let (rr, ri) = match r.rhat {
            Some(v) => (fmt17(v.re), fmt17(v.im)),
            None => ("nan".to_string(), "nan".to_string()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt17(r.x),
            fmt17(r.y),
            fmt17(r.u.re),
            fmt17(r.u.im),
            fmt17(r.zeta.re),
            fmt17(r.zeta.im),
            rr,
            ri
        ));
    }
    out
}

pub use crate::domain::GridSpec as ReportGrid;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helicoid_catalog_run_passes() {
        let mut cfg = RunConfig::catalog("helicoid");
        cfg.n1 = 12;
        cfg.n2 = 12;
        let report = run_verification_report(&cfg).unwrap();
        assert!(report.pass, "{}", report.to_json());
        assert!(report.checks.iter().any(|c| c.name == "isothermal"));
        assert!(report.checks.iter().any(|c| c.name == "harmonic"));
    }

    #[test]
    fn paraboloid_graph_fails_minimality() {
        let cfg = RunConfig::from_toml(
            r#"
[surface]
phi = "x^2 + y^2"

[domain]
kind = "rectangle"
x0 = -1.0
x1 = 1.0
y0 = -1.0
y1 = 1.0

[grid]
n1 = 5
n2 = 5
"#,
        )
        .unwrap();
        let report = run_verification_report(&cfg).unwrap();
        assert!(!report.pass);
        let min = report
            .checks
            .iter()
            .find(|c| c.name == "minimal_equation")
            .unwrap();
        assert!(!min.pass);
        // Residual 4 at the origin appears somewhere on the grid.
        assert!(min.max_abs >= 4.0);
    }

    #[test]
    fn plane_graph_passes_but_degenerate() {
        let cfg = RunConfig::from_toml(
            r#"
[surface]
phi = "1 + 2*x - 3*y"

[domain]
kind = "rectangle"
x0 = -1.0
x1 = 1.0
y0 = -1.0
y1 = 1.0

[grid]
n1 = 4
n2 = 4
"#,
        )
        .unwrap();
        let report = run_verification_report(&cfg).unwrap();
        assert!(report.pass, "{}", report.to_json());
        let h = report.hodograph.unwrap();
        assert_eq!(h.degenerate_points, h.points);
    }

    #[test]
    fn helicoid_graph_with_reference_r() {
        let cfg = RunConfig::from_toml(
            r#"
[surface]
phi = "atan(y/x)"
reference_r = "-i/(2*w^2)"

[domain]
kind = "annulus"
r_min = 0.5
r_max = 3.0

[grid]
n1 = 8
n2 = 8
"#,
        )
        .unwrap();
        let report = run_verification_report(&cfg).unwrap();
        assert!(report.pass, "{}", report.to_json());
        let h = report.hodograph.unwrap();
        let err = h.reference_max_rel_err.unwrap();
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn report_json_is_deterministic() {
        let mut cfg = RunConfig::catalog("enneper");
        cfg.n1 = 6;
        cfg.n2 = 6;
        let a = run_verification_report(&cfg).unwrap().to_json();
        let b = run_verification_report(&cfg).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"surface\""));
    }
}
