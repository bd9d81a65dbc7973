//! Command-line driver.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage/config error,
//! 3 numerical failure. `MINSURF_THREADS` caps worker parallelism.

use clap::{Args, Parser, Subcommand};

use minsurf::config::RunConfig;
use minsurf::domain::DomainDescriptor;
use minsurf::error::{Error, Result};
use minsurf::hodograph::GraphPatch;
use minsurf::mesh::{export_csv, export_obj, sample_mesh, Provenance};
use minsurf::report::{self, frames_to_csv, run_verification_report};
use minsurf::weierstrass::SurfaceMap;

#[derive(Parser)]
#[command(
    name = "minsurf",
    about = "Minimal-surface toolkit: Weierstrass-Enneper generation, hodographic coordinates, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a surface into a mesh and export it.
    Generate(GenerateArgs),
    /// Run the verification battery and write a JSON report.
    Verify(VerifyArgs),
    /// Hodograph pipeline for a graph phi(x,y): frames and recovered R.
    Hodograph(HodographArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Catalog surface name, or @path/to/run.toml for a config file.
    #[arg(long)]
    surface: String,
    /// Output OBJ path.
    #[arg(long)]
    out: String,
    /// Optional CSV sample export path.
    #[arg(long)]
    csv: Option<String>,
    /// Grid resolution N1xN2 (overrides the config).
    #[arg(long)]
    res: Option<String>,
    /// Integration tolerance override.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: String,
    /// Report output path (JSON); also honored from [output] report.
    #[arg(long)]
    report: Option<String>,
    /// Integration tolerance override.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct HodographArgs {
    /// The graph expression phi(x, y).
    #[arg(long)]
    phi: String,
    /// Domain: `x0,x1,y0,y1` (rectangle) or `annulus:r0,r1[,th0,th1]`.
    #[arg(long)]
    domain: String,
    /// Grid resolution N1xN2.
    #[arg(long, default_value = "64x64")]
    res: String,
    /// Output CSV path (columns x,y,u_re,u_im,zeta_re,zeta_im,Rhat_re,Rhat_im).
    #[arg(long)]
    out: String,
    /// Unused for the exact recovery; accepted for interface uniformity.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Verify(args) => verify(args),
        Command::Hodograph(args) => hodograph(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn parse_res(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(['x', 'X']).collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!(
            "resolution must look like 32x32, got `{text}`"
        )));
    }
    let n1 = parts[0]
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("bad resolution `{text}`")))?;
    let n2 = parts[1]
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("bad resolution `{text}`")))?;
    if n1 < 2 || n2 < 2 {
        return Err(Error::Config(format!(
            "resolution must be at least 2x2, got `{text}`"
        )));
    }
    Ok((n1, n2))
}

fn parse_cli_domain(text: &str) -> Result<DomainDescriptor> {
    if let Some(rest) = text.strip_prefix("annulus:") {
        let nums: Vec<f64> = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad domain number `{t}`")))
            })
            .collect::<Result<_>>()?;
        return match nums.as_slice() {
            [r0, r1] => DomainDescriptor::annulus(*r0, *r1),
            [r0, r1, t0, t1] => DomainDescriptor::annulus_sector(*r0, *r1, *t0, *t1),
            _ => Err(Error::Config(
                "annulus domain takes r0,r1 or r0,r1,th0,th1".to_string(),
            )),
        };
    }
    let nums: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad domain number `{t}`")))
        })
        .collect::<Result<_>>()?;
    match nums.as_slice() {
        [x0, x1, y0, y1] => DomainDescriptor::rectangle(*x0, *x1, *y0, *y1),
        _ => Err(Error::Config(
            "domain takes x0,x1,y0,y1 or annulus:r0,r1".to_string(),
        )),
    }
}

fn load_config(surface: &str) -> Result<RunConfig> {
    if let Some(path) = surface.strip_prefix('@') {
        RunConfig::from_file(path)
    } else {
        Ok(RunConfig::catalog(surface))
    }
}

fn generate(args: GenerateArgs) -> Result<i32> {
    let mut cfg = load_config(&args.surface)?;
    if let Some(res) = &args.res {
        let (n1, n2) = parse_res(res)?;
        cfg.n1 = n1;
        cfg.n2 = n2;
    }
    if let Some(tol) = args.tol {
        if tol <= 0.0 {
            return Err(Error::Config("--tol must be positive".to_string()));
        }
        cfg.tolerances.integration = tol;
    }
    let data = report::resolve_weierstrass(&cfg)?.ok_or_else(|| {
        Error::Config("generate needs Weierstrass data, not a graph; use `hodograph`".to_string())
    })?;
    let domain = cfg.domain.clone().unwrap_or_else(|| data.domain.clone());
    let grid = domain.grid(cfg.n1, cfg.n2)?;
    let map = SurfaceMap::new(data, cfg.tolerances.integration)?;
    let mesh = sample_mesh(
        &map,
        &grid,
        Provenance {
            surface: report::surface_label(&cfg),
            config_hash: cfg.config_hash.clone(),
        },
    )?;
    std::fs::write(&args.out, export_obj(&mesh))?;
    if let Some(csv_path) = args.csv.as_deref().or(cfg.csv_out.as_deref()) {
        std::fs::write(csv_path, export_csv(&mesh))?;
    }
    println!(
        "wrote {} ({} vertices, {} faces)",
        args.out,
        mesh.vertices.len(),
        mesh.faces.len()
    );
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let mut cfg = RunConfig::from_file(&args.config)?;
    if let Some(tol) = args.tol {
        if tol <= 0.0 {
            return Err(Error::Config("--tol must be positive".to_string()));
        }
        cfg.tolerances.integration = tol;
    }
    let report = run_verification_report(&cfg)?;
    let json = report.to_json();
    if let Some(path) = args.report.as_deref().or(cfg.report_out.as_deref()) {
        std::fs::write(path, &json)?;
    } else {
        println!("{json}");
    }
    for check in &report.checks {
        eprintln!(
            "{}: {} (max {:.3e}, tol {:.1e} x scale {:.3e})",
            check.name,
            if check.pass { "pass" } else { "FAIL" },
            check.max_abs,
            check.tolerance,
            check.scale
        );
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn hodograph(args: HodographArgs) -> Result<i32> {
    let domain = parse_cli_domain(&args.domain)?;
    let (n1, n2) = parse_res(&args.res)?;
    let patch = GraphPatch::from_text(&args.phi, domain.clone())?;
    let grid = domain.grid(n1, n2)?;
    let rows = report::hodograph_frames(&patch, &grid)?;
    std::fs::write(&args.out, frames_to_csv(&rows))?;
    let degenerate = rows.iter().filter(|r| r.rhat.is_none()).count();
    println!(
        "wrote {} ({} frames, {} degenerate)",
        args.out,
        rows.len(),
        degenerate
    );
    Ok(0)
}
