//! Catalog of classical surfaces with fully populated Weierstrass data.

use num_complex::Complex64;

use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::expr::parse_expression;
use crate::weierstrass::WeierstrassData;

pub const CATALOG_NAMES: [&str; 3] = ["helicoid", "enneper", "catenoid"];

/// Look up a catalog surface by name. Each entry carries R, the base
/// parameter and base point matched to the classical closed forms, the
/// declared singularities, a default domain that avoids them, and the
/// rho-system maps F and F^{-1}.
pub fn catalog_lookup(name: &str) -> Result<WeierstrassData> {
    match name {
        "helicoid" => {
            // R(w) = -i/(2 w^2); base at zeta0 = i(sqrt2 - 1), the image of
            // (x, y) = (1, 0), where X = (1, 0, 0). F = i/(2 zeta).
            let mut data = WeierstrassData::new_r(
                parse_expression("-i/(2*w^2)", "w")?,
                Complex64::new(0.0, std::f64::consts::SQRT_2 - 1.0),
                [1.0, 0.0, 0.0],
                vec![Complex64::new(0.0, 0.0)],
                DomainDescriptor::annulus(0.05, 0.95)?,
            )?;
            data.rho_map = Some(parse_expression("i/(2*w)", "w")?);
            data.rho_inverse = Some(parse_expression("i/(2*r)", "r")?);
            data.name = Some("helicoid".to_string());
            Ok(data)
        }
        "enneper" => {
            // R = 1 on the disk |zeta| <= 1.5, base at the origin.
            let mut data = WeierstrassData::new_r(
                parse_expression("1", "w")?,
                Complex64::new(0.0, 0.0),
                [0.0, 0.0, 0.0],
                vec![],
                DomainDescriptor::disk(1.5)?,
            )?;
            data.rho_map = Some(parse_expression("w", "w")?);
            data.rho_inverse = Some(parse_expression("r", "r")?);
            data.name = Some("enneper".to_string());
            Ok(data)
        }
        "catenoid" => {
            // Conjugate family of the helicoid: R(w) = 1/(2 w^2). Base at
            // zeta0 = 1/2 with the classical position (-5/4, 0, ln(1/2)):
            // x + iy = -(1/zeta + zeta) e^{i theta}/2-type closed forms give
            // radius cosh(phi) about the axis.
            let base = [-1.25, 0.0, (0.5f64).ln()];
            let mut data = WeierstrassData::new_r(
                parse_expression("1/(2*w^2)", "w")?,
                Complex64::new(0.5, 0.0),
                base,
                vec![Complex64::new(0.0, 0.0)],
                DomainDescriptor::annulus(0.05, 0.95)?,
            )?;
            data.rho_map = Some(parse_expression("-1/(2*w)", "w")?);
            data.rho_inverse = Some(parse_expression("-1/(2*r)", "r")?);
            data.name = Some("catenoid".to_string());
            Ok(data)
        }
        other => Err(Error::UnknownSurface {
            name: other.to_string(),
            available: CATALOG_NAMES.join(", "),
        }),
    }
}

/// Default grid domain for the verification battery. The generation domains
/// reach radius 0.05, where finite-difference Laplacian stencils of the
/// 1/zeta-type components are hopeless; verification defaults stay on an
/// annulus where truncation sits comfortably under the tolerances.
pub fn default_verify_domain(data: &WeierstrassData) -> Result<DomainDescriptor> {
    match data.name.as_deref() {
        Some("helicoid") | Some("catenoid") => DomainDescriptor::annulus(0.55, 0.95),
        Some("enneper") => Ok(data.domain.clone()),
        _ => Ok(data.domain.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weierstrass::immerse_r;

    #[test]
    fn unknown_name_lists_available() {
        match catalog_lookup("torus") {
            Err(Error::UnknownSurface { available, .. }) => {
                assert!(available.contains("helicoid"));
                assert!(available.contains("enneper"));
                assert!(available.contains("catenoid"));
            }
            other => panic!("expected unknown-surface error, got {other:?}"),
        }
    }

    #[test]
    fn helicoid_entry_matches_standard_result() {
        let data = catalog_lookup("helicoid").unwrap();
        assert_eq!(data.singularities, vec![Complex64::new(0.0, 0.0)]);
        let s = immerse_r(&data, data.base_param, None, 1e-10).unwrap();
        assert_eq!(s.position, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn enneper_entry_disk_domain() {
        let data = catalog_lookup("enneper").unwrap();
        assert!(data.domain.contains(Complex64::new(1.4, 0.0)));
        assert!(!data.domain.contains(Complex64::new(1.6, 0.0)));
        let s = immerse_r(&data, Complex64::new(1.0, 0.0), None, 1e-12).unwrap();
        assert!((s.position[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!((s.position[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn catenoid_is_surface_of_revolution() {
        // x^2 + y^2 = cosh^2(phi) on the catenoid closed forms.
        let data = catalog_lookup("catenoid").unwrap();
        for &z in &[
            Complex64::new(0.3, 0.2),
            Complex64::new(0.0, 0.6),
            Complex64::new(-0.5, 0.4),
        ] {
            let s = immerse_r(&data, z, None, 1e-12).unwrap();
            let r2 = s.position[0] * s.position[0] + s.position[1] * s.position[1];
            let expected = s.position[2].cosh().powi(2);
            assert!((r2 - expected).abs() < 1e-8, "{:?}", s.position);
        }
    }

    #[test]
    fn rho_maps_are_inverse_pairs() {
        for name in CATALOG_NAMES {
            let data = catalog_lookup(name).unwrap();
            let f = data.rho_map.as_ref().unwrap();
            let finv = data.rho_inverse.as_ref().unwrap();
            let fv = f.single_var().unwrap().to_string();
            let iv = finv.single_var().unwrap_or("r").to_string();
            let zeta = data.base_param;
            let rho = f.eval1(&fv, zeta).unwrap();
            let back = finv.eval1(&iv, rho).unwrap();
            assert!((back - zeta).norm() < 1e-12, "{name}");
        }
    }
}
