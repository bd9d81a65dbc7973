//! Adaptive contour integration of complex-valued integrands over polylines.
//!
//! Each straight segment is handled by a 7/15 Gauss-Kronrod pair with
//! recursive bisection; the per-integral evaluation budget is capped at
//! [`EVAL_BUDGET`]. The requested absolute tolerance is split across the
//! polyline segments in proportion to their length.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::path::Path;

/// Maximum integrand evaluations per integral.
pub const EVAL_BUDGET: usize = 100_000;

// 15-point Kronrod abscissae on [0,1] of the G7-K15 pair, with the Gauss-7
// and Kronrod-15 weights (same tables as QUADPACK's QK15, rescaled nowhere:
// the affine map to each segment happens at call time).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

struct Qk15Out {
    kronrod: Complex64,
    err: f64,
    resabs: f64,
}

/// One G7-K15 pass over the straight segment [a, b] in the complex plane.
fn qk15_segment<F>(f: &mut F, a: Complex64, b: Complex64) -> Result<Qk15Out>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let half_len = half.norm();

    let f_center = f(center)?;
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = f_center.norm() * WGK[7];
    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let v1 = f(center - abscissa)?;
        let v2 = f(center + abscissa)?;
        fv1[j] = v1;
        fv2[j] = v2;
        let sum = v1 + v2;
        if j % 2 != 0 {
            res_gauss += sum * WG[j / 2];
        }
        res_kronrod += sum * WGK[j];
        res_abs += (v1.norm() + v2.norm()) * WGK[j];
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = (f_center - mean).norm() * WGK[7];
    for j in 0..7 {
        res_asc += ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * WGK[j];
    }

    let raw_err = (res_kronrod - res_gauss).norm() * half_len;
    res_abs *= half_len;
    res_asc *= half_len;

    // QUADPACK-style error rescaling.
    let mut err = raw_err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Qk15Out {
        kronrod: res_kronrod * half,
        err,
        resabs: res_abs,
    })
}

fn adaptive_segment<F>(
    f: &mut F,
    a: Complex64,
    b: Complex64,
    tol: f64,
    evals: &mut usize,
    total_tol: f64,
) -> Result<(Complex64, f64)>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if *evals + 15 > EVAL_BUDGET {
        return Err(Error::QuadratureBudget {
            achieved: f64::INFINITY,
            tol: total_tol,
            evals: *evals,
        });
    }
    *evals += 15;
    let out = qk15_segment(f, a, b)?;
    let floor = 50.0 * f64::EPSILON * out.resabs;
    if out.err <= tol.max(floor) {
        return Ok((out.kronrod, out.err));
    }
    let mid = 0.5 * (a + b);
    if mid == a || mid == b {
        // Interval exhausted at machine resolution.
        return Ok((out.kronrod, out.err));
    }
    let (v1, e1) = adaptive_segment(f, a, mid, 0.5 * tol, evals, total_tol)?;
    let (v2, e2) = adaptive_segment(f, mid, b, 0.5 * tol, evals, total_tol)?;
    Ok((v1 + v2, e1 + e2))
}

/// Integrate a closure along a polyline with estimated absolute error at
/// most `tol`. Returns the value and the error estimate.
pub fn integrate_fn_along<F>(mut f: F, path: &Path, tol: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if tol <= 0.0 {
        return Err(Error::InvalidData(format!(
            "integration tolerance must be positive, got {tol}"
        )));
    }
    let total_len = path.length();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0usize;
    for (a, b) in path.segments() {
        let seg_tol = tol * (b - a).norm() / total_len;
        let (v, e) = adaptive_segment(&mut f, a, b, seg_tol, &mut evals, tol)?;
        value += v;
        err += e;
    }
    if err > tol && err > 1e-13 * (1.0 + value.norm()) {
        return Err(Error::QuadratureBudget {
            achieved: err,
            tol,
            evals,
        });
    }
    Ok((value, err))
}

/// Integrate an expression of one complex variable along a polyline.
///
/// The caller guarantees the integrand is holomorphic near the path; the
/// result is then independent of homotopic deformations of the polyline.
pub fn integrate_along(e: &Expr, var: &str, path: &Path, tol: f64) -> Result<Complex64> {
    let (value, _) = integrate_fn_along(|z| e.eval1(var, z), path, tol)?;
    Ok(value)
}
