use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod svg;

use rabi_core::verify::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "rabi", version, about = "Quantum Rabi model spectra, exceptional loci and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Mode frequency ω
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,

    /// Coupling g
    #[arg(long, global = true, default_value_t = 0.5, allow_negative_numbers = true)]
    pub g: f64,

    /// Level splitting Δ
    #[arg(long, global = true, default_value_t = 0.5, allow_negative_numbers = true)]
    pub delta: f64,

    /// Number of levels
    #[arg(long, global = true, default_value_t = 8)]
    pub levels: usize,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file (directory for `figure`); stdout if omitted
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Coarser grids and fewer random instances
    #[arg(long, global = true)]
    pub quick: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    All,
    Juddian,
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest levels: zeros of G± plus exceptional levels at x = nω
    Spectrum,
    /// G+ and G− sampled along x
    Gscan {
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Sample spacing (default ω/200)
        #[arg(long)]
        step: Option<f64>,
    },
    /// Exceptional loci in the (Δ, g) plane as SVG panels and a polyline CSV
    Figure {
        /// Levels to draw, comma separated (0..=6)
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        n: Vec<usize>,
        /// Grid cells per axis
        #[arg(long)]
        cells: Option<usize>,
    },
    /// One exceptional level's loci
    Locus {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        delta_max: Option<f64>,
        #[arg(long)]
        g_min: Option<f64>,
        #[arg(long)]
        g_max: Option<f64>,
    },
    /// Levels from diagonalization in a truncated Fock basis
    Oracle {
        #[arg(long, default_value_t = rabi_core::oracle::DEFAULT_M_MAX)]
        m_max: usize,
    },
    /// Run the verification campaign; exit 1 if any check fails
    Verify {
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match cli.command {
        Command::Spectrum => commands::spectrum(c),
        Command::Gscan { x_min, x_max, step } => commands::gscan(c, x_min, x_max, step),
        Command::Figure { n, cells } => commands::figure(c, &n, cells),
        Command::Locus {
            n,
            family,
            cells,
            delta_max,
            g_min,
            g_max,
        } => commands::locus(c, n, family, cells, (delta_max, g_min, g_max)),
        Command::Oracle { m_max } => commands::oracle(c, m_max),
        Command::Verify { inject_fault } => commands::verify(c, inject_fault),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
