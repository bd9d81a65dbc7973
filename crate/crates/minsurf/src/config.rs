//! Run configuration: TOML sections `[surface]`, `[domain]`, `[grid]`,
//! `[base]`, `[tolerances]`, `[output]`.

use num_complex::Complex64;
use serde::Deserialize;

use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    surface: RawSurface,
    domain: Option<RawDomain>,
    grid: Option<RawGrid>,
    base: Option<RawBase>,
    tolerances: Option<RawTolerances>,
    output: Option<RawOutput>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    name: Option<String>,
    r: Option<String>,
    f: Option<String>,
    g: Option<String>,
    phi: Option<String>,
    /// Optional reference R(zeta) the hodograph recovery is compared against.
    reference_r: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    kind: String,
    x0: Option<f64>,
    x1: Option<f64>,
    y0: Option<f64>,
    y1: Option<f64>,
    radius: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    theta_min: Option<f64>,
    theta_max: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n1: usize,
    n2: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBase {
    /// Base parameter as [re, im].
    param: Option<[f64; 2]>,
    /// Base point as [x0, y0, phi0].
    point: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    integration: Option<f64>,
    isothermal: Option<f64>,
    harmonic: Option<f64>,
    harmonic_step: Option<f64>,
    mean_curvature: Option<f64>,
    curvature_gap: Option<f64>,
    curvature_step: Option<f64>,
    minimality: Option<f64>,
    hodograph_reference: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    mesh: Option<String>,
    csv: Option<String>,
    report: Option<String>,
}

/// Where the surface comes from.
#[derive(Debug, Clone)]
pub enum SurfaceSource {
    Catalog(String),
    InlineR(String),
    InlineFg { f: String, g: String },
    Graph(String),
}

/// Verification tolerances, pinned to their defaults unless overridden.
#[derive(Debug, Clone)]
pub struct Tolerances {
    pub integration: f64,
    pub isothermal: f64,
    pub harmonic: f64,
    pub harmonic_step: f64,
    pub mean_curvature: f64,
    pub curvature_gap: f64,
    pub curvature_step: f64,
    pub minimality: f64,
    pub hodograph_reference: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            integration: 1e-12,
            isothermal: 1e-8,
            harmonic: 1e-4,
            harmonic_step: 1e-3,
            mean_curvature: 1e-6,
            curvature_gap: 1e-4,
            curvature_step: 1e-4,
            minimality: 1e-10,
            hodograph_reference: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: SurfaceSource,
    pub reference_r: Option<String>,
    pub domain: Option<DomainDescriptor>,
    pub n1: usize,
    pub n2: usize,
    pub base_param: Option<Complex64>,
    pub base_point: Option<[f64; 3]>,
    pub tolerances: Tolerances,
    pub mesh_out: Option<String>,
    pub csv_out: Option<String>,
    pub report_out: Option<String>,
    pub config_hash: String,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("TOML parse: {e}")))?;
        let hash = fnv1a64(text.as_bytes());
        Self::from_raw(raw, format!("{hash:016x}"))
    }

    pub fn from_file(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("reading {path}: {e}")))?;
        Self::from_toml(&text)
    }

    /// Config for a bare catalog run (no file).
    pub fn catalog(name: &str) -> Self {
        RunConfig {
            source: SurfaceSource::Catalog(name.to_string()),
            reference_r: None,
            domain: None,
            n1: 32,
            n2: 32,
            base_param: None,
            base_point: None,
            tolerances: Tolerances::default(),
            mesh_out: None,
            csv_out: None,
            report_out: None,
            config_hash: format!("{:016x}", fnv1a64(name.as_bytes())),
        }
    }

    fn from_raw(raw: RawConfig, config_hash: String) -> Result<Self> {
        let s = &raw.surface;
        let declared = [
            s.name.is_some(),
            s.r.is_some(),
            s.f.is_some() || s.g.is_some(),
            s.phi.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if declared != 1 {
            return Err(Error::Config(
                "[surface] must declare exactly one of: name, r, f+g, phi".to_string(),
            ));
        }
        let source = if let Some(name) = &s.name {
            SurfaceSource::Catalog(name.clone())
        } else if let Some(r) = &s.r {
            SurfaceSource::InlineR(r.clone())
        } else if let Some(phi) = &s.phi {
            SurfaceSource::Graph(phi.clone())
        } else {
            let f = s
                .f
                .clone()
                .ok_or_else(|| Error::Config("inline (f,g) needs both f and g".to_string()))?;
            let g = s
                .g
                .clone()
                .ok_or_else(|| Error::Config("inline (f,g) needs both f and g".to_string()))?;
            SurfaceSource::InlineFg { f, g }
        };

        let domain = raw.domain.map(parse_domain).transpose()?;
        let (n1, n2) = match &raw.grid {
            Some(g) => (g.n1, g.n2),
            None => (32, 32),
        };
        if n1 < 2 || n2 < 2 {
            return Err(Error::Config(format!(
                "grid resolution must be at least 2 in each direction, got {n1}x{n2}"
            )));
        }

        let t = raw.tolerances.unwrap_or_default();
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            integration: t.integration.unwrap_or(defaults.integration),
            isothermal: t.isothermal.unwrap_or(defaults.isothermal),
            harmonic: t.harmonic.unwrap_or(defaults.harmonic),
            harmonic_step: t.harmonic_step.unwrap_or(defaults.harmonic_step),
            mean_curvature: t.mean_curvature.unwrap_or(defaults.mean_curvature),
            curvature_gap: t.curvature_gap.unwrap_or(defaults.curvature_gap),
            curvature_step: t.curvature_step.unwrap_or(defaults.curvature_step),
            minimality: t.minimality.unwrap_or(defaults.minimality),
            hodograph_reference: t.hodograph_reference.unwrap_or(defaults.hodograph_reference),
        };
        for (name, v) in [
            ("integration", tolerances.integration),
            ("isothermal", tolerances.isothermal),
            ("harmonic", tolerances.harmonic),
            ("harmonic_step", tolerances.harmonic_step),
            ("mean_curvature", tolerances.mean_curvature),
            ("curvature_gap", tolerances.curvature_gap),
            ("curvature_step", tolerances.curvature_step),
            ("minimality", tolerances.minimality),
            ("hodograph_reference", tolerances.hodograph_reference),
        ] {
            if v <= 0.0 {
                return Err(Error::Config(format!("tolerance {name} must be positive")));
            }
        }

        let output = raw.output.unwrap_or_default();
        Ok(RunConfig {
            source,
            reference_r: s.reference_r.clone(),
            domain,
            n1,
            n2,
            base_param: raw.base.as_ref().and_then(|b| b.param).map(|p| Complex64::new(p[0], p[1])),
            base_point: raw.base.as_ref().and_then(|b| b.point),
            tolerances,
            mesh_out: output.mesh,
            csv_out: output.csv,
            report_out: output.report,
            config_hash,
        })
    }
}

fn parse_domain(d: RawDomain) -> Result<DomainDescriptor> {
    match d.kind.as_str() {
        "rectangle" => {
            let (x0, x1, y0, y1) = match (d.x0, d.x1, d.y0, d.y1) {
                (Some(a), Some(b), Some(c), Some(e)) => (a, b, c, e),
                _ => {
                    return Err(Error::Config(
                        "rectangle domain needs x0, x1, y0, y1".to_string(),
                    ))
                }
            };
            DomainDescriptor::rectangle(x0, x1, y0, y1)
        }
        "disk" => {
            let radius = d
                .radius
                .ok_or_else(|| Error::Config("disk domain needs radius".to_string()))?;
            DomainDescriptor::disk(radius)
        }
        "annulus" => {
            let (r0, r1) = match (d.r_min, d.r_max) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Config(
                        "annulus domain needs r_min and r_max".to_string(),
                    ))
                }
            };
            match (d.theta_min, d.theta_max) {
                (Some(t0), Some(t1)) => DomainDescriptor::annulus_sector(r0, r1, t0, t1),
                (None, None) => DomainDescriptor::annulus(r0, r1),
                _ => Err(Error::Config(
                    "annulus sector needs both theta_min and theta_max".to_string(),
                )),
            }
        }
        other => Err(Error::Config(format!(
            "unknown domain kind `{other}` (rectangle | disk | annulus)"
        ))),
    }
}

/// Stable 64-bit FNV-1a, used for config provenance hashes.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
