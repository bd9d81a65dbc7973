//! minsurf: a minimal-surface toolkit.
//!
//! Generates surfaces from Weierstrass-Enneper data by contour integration,
//! recovers conformal/hodographic coordinates and Weierstrass data from a
//! graph `phi(x, y)`, and numerically verifies the identities the pipeline
//! rests on (minimality, conformality, harmonicity, curvature formulas,
//! the null identity, and the rho-system equivalences).
//!
//! The crate splits into:
//!
//! - [`expr`]: symbolic complex expressions (parse, evaluate, differentiate,
//!   print) over one or two variables;
//! - [`quad`] and [`path`]: adaptive Gauss-Kronrod contour integration over
//!   polylines;
//! - [`weierstrass`]: the representation in (f,g)- and R-form, curvature,
//!   fundamental forms;
//! - [`hodograph`]: Wirtinger data, the conformal coordinate, recovery of
//!   R = F', and the rho-system surface integrals;
//! - [`verify`]: residual sweeps for every identity;
//! - [`catalog`], [`mesh`], [`config`], [`report`]: classical surfaces,
//!   mesh sampling/export, run configuration, and the JSON report driver
//!   behind the `minsurf` binary.

pub mod catalog;
pub mod config;
pub mod domain;
pub mod error;
pub mod expr;
pub mod hodograph;
pub mod mesh;
pub mod path;
pub mod quad;
pub mod report;
pub mod threads;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
pub use expr::{parse_expression, parse_expression_vars, Expr};
pub use num_complex::Complex64;
