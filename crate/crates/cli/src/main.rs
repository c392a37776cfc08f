use clap::{Parser, Subcommand};
use lpasa_cli::{
    cmd_asp, cmd_cube_example, cmd_duality, cmd_floating, cmd_rounded_example, cmd_suite,
    cmd_surface, parse_p_list, parse_schedule, OutputFormat, RunConfig, EXIT_CONFIG,
};
use std::path::PathBuf;

/// L_p affine surface areas, floating/surface body limits, and affine
/// isoperimetric inequality checks for convex bodies.
#[derive(Parser)]
#[command(name = "lpasa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Body specification file (JSON)
    #[arg(long, global = true)]
    body: Option<PathBuf>,

    /// Comma-separated exponent list, e.g. "0,1,2,inf"
    #[arg(long, global = true, allow_hyphen_values = true)]
    p: Option<String>,

    /// Quadrature grid: circle:N, sphere3:NTHETAxNPHI, or mc:N
    #[arg(long, global = true)]
    grid: Option<String>,

    /// Parameter schedule GEOM:start:ratio:count
    #[arg(long, global = true)]
    schedule: Option<String>,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Seed for Monte Carlo grids and body ensembles
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Inverse-Santalo constant used by the p < -n isoperimetric bound
    #[arg(long = "santalo-c", global = true, default_value_t = 0.25)]
    santalo_c: f64,

    /// Accept divergent as_p values instead of exiting with code 3
    #[arg(long, global = true, default_value_t = false)]
    allow_divergent: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate as_p(K) for a list of exponents
    Asp,
    /// Check the duality formula as_p(K) = as_{n^2/p}(K polar)
    Duality,
    /// Run the floating-body polar-volume limit
    Floating,
    /// Run the surface-body polar-volume limit with an f_p weight
    Surface,
    /// Run the full inequality suite over a seeded body ensemble
    Suite,
    /// Closed-form cube counterexample table
    CubeExample,
    /// Bound checks for the rounded intersection body K(R, eps)
    RoundedExample,
}

fn main() {
    let cli = Cli::parse();
    let p_list = match cli.p.as_deref().map(parse_p_list).transpose() {
        Ok(list) => list.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_CONFIG);
        }
    };
    let schedule = match cli.schedule.as_deref().map(parse_schedule).transpose() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_CONFIG);
        }
    };
    let format: OutputFormat = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_CONFIG);
        }
    };
    let config = RunConfig {
        body_spec_path: cli.body,
        p_list,
        grid_spec: cli.grid,
        schedule,
        output_path: cli.out,
        output_format: format,
        seed: cli.seed,
        santalo_constant: cli.santalo_c,
        allow_divergent: cli.allow_divergent,
    };
    let code = match cli.command {
        Command::Asp => cmd_asp(&config),
        Command::Duality => cmd_duality(&config),
        Command::Floating => cmd_floating(&config),
        Command::Surface => cmd_surface(&config),
        Command::Suite => cmd_suite(&config),
        Command::CubeExample => cmd_cube_example(&config),
        Command::RoundedExample => cmd_rounded_example(&config),
    };
    std::process::exit(code);
}
