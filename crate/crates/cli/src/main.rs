//! Command-line front end: exact single-symbol evaluation, screen solving
//! with CSV/pixmap/SVG output, caustic/ridge data files, and the numerical
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure (or I/O failure),
//! 2 argument/parse error, 3 selection-rule violation in strict mode.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use threej_cli::{commands, formats};
use threej_core::HalfInt;

fn parse_half_int(s: &str) -> Result<HalfInt, String> {
    s.parse::<HalfInt>().map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "threej",
    version,
    about = "Wigner 3j symbols on square screens: exact values, orthonormal screen solves, heatmaps and caustic overlays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum FileFormat {
    Csv,
    Pgm,
    Ppm,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum OverlayChoice {
    Caustic,
    Ridge,
    Both,
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ColormapChoice {
    Grayscale,
    Viridis,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum MethodChoice {
    /// Tridiagonal eigensolve of the screen recurrences (default).
    Eigen,
    /// Two-sided three-term recursion, the verification-mode alternative.
    Recursion,
}

#[derive(Args)]
struct RenderArgs {
    /// Smallest |U| resolved by the log color scale.
    #[arg(long, default_value_t = 1e-10)]
    floor: f64,
    /// Largest |U| on the log color scale.
    #[arg(long, default_value_t = 1.0)]
    ceiling: f64,
    /// Curves drawn on SVG output.
    #[arg(long, value_enum, default_value_t = OverlayChoice::Both)]
    overlay: OverlayChoice,
    /// Color map for P6/SVG output.
    #[arg(long, value_enum, default_value_t = ColormapChoice::Grayscale)]
    colormap: ColormapChoice,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one 3j symbol exactly: sign, rational square and binary64 value.
    Eval {
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        a: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        b: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        x: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        alpha: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        beta: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        gamma: HalfInt,
        /// Fail (exit 3) instead of printing 0 when selection rules reject the symbol.
        #[arg(long)]
        strict: bool,
    },
    /// Solve the (a, b, sigma) screen and write CSV / pixmap / SVG files.
    Screen {
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        a: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        b: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        sigma: HalfInt,
        /// Output formats (comma separated).
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [FileFormat::Csv, FileFormat::Pgm])]
        format: Vec<FileFormat>,
        #[command(flatten)]
        render: RenderArgs,
        /// Solver backing the screen values.
        #[arg(long, value_enum, default_value_t = MethodChoice::Eigen)]
        method: MethodChoice,
        /// Append lossless doubled-integer coordinate columns to the CSV.
        #[arg(long)]
        doubled_ints: bool,
        /// Directory receiving the output files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Sample caustic and ridge curves for J1, J2 over a list of sigmas.
    Caustics {
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        j1: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        j2: HalfInt,
        /// "all" or a comma-separated list of half-integer sigmas.
        #[arg(long, default_value = "all")]
        sigma: String,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [FileFormat::Csv])]
        format: Vec<FileFormat>,
        /// Caustic sampling density along J3.
        #[arg(long, default_value_t = 16)]
        samples_per_unit: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the verification suites up to the given momentum bounds.
    Verify {
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        max_a: HalfInt,
        #[arg(value_parser = parse_half_int, allow_hyphen_values = true)]
        max_b: HalfInt,
        /// Tolerance for the oracle-equivalence and orthogonality suites.
        #[arg(default_value_t = 1e-12)]
        tolerance: f64,
        /// Negative control: corrupt the delta-coefficient sign; the
        /// annihilation suite must then fail.
        #[arg(long, hide = true)]
        corrupt_p: bool,
    },
}

fn main() {
    // die quietly on closed pipes instead of panicking mid-write
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Eval {
            a,
            b,
            x,
            alpha,
            beta,
            gamma,
            strict,
        } => commands::eval(a, b, x, alpha, beta, gamma, strict),
        Command::Screen {
            a,
            b,
            sigma,
            format,
            render,
            method,
            doubled_ints,
            out_dir,
        } => commands::screen(commands::ScreenOptions {
            a,
            b,
            sigma,
            formats: format.iter().map(|f| (*f).into()).collect(),
            render: render.into(),
            method: match method {
                MethodChoice::Eigen => threej_core::SolveMethod::Eigen,
                MethodChoice::Recursion => threej_core::SolveMethod::Recursion,
            },
            doubled_ints,
            out_dir,
        }),
        Command::Caustics {
            j1,
            j2,
            sigma,
            format,
            samples_per_unit,
            out_dir,
        } => commands::caustics(commands::CausticsOptions {
            j1,
            j2,
            sigma_list: sigma,
            formats: format.iter().map(|f| (*f).into()).collect(),
            samples_per_unit,
            out_dir,
        }),
        Command::Verify {
            max_a,
            max_b,
            tolerance,
            corrupt_p,
        } => commands::verify(max_a, max_b, tolerance, corrupt_p),
    };
    std::process::exit(code);
}

impl From<FileFormat> for commands::OutputFormat {
    fn from(f: FileFormat) -> Self {
        match f {
            FileFormat::Csv => commands::OutputFormat::Csv,
            FileFormat::Pgm => commands::OutputFormat::Pgm,
            FileFormat::Ppm => commands::OutputFormat::Ppm,
            FileFormat::Svg => commands::OutputFormat::Svg,
        }
    }
}

impl From<RenderArgs> for formats::RenderConfig {
    fn from(r: RenderArgs) -> Self {
        formats::RenderConfig {
            floor: r.floor,
            ceiling: r.ceiling,
            colormap: match r.colormap {
                ColormapChoice::Grayscale => formats::Colormap::Grayscale,
                ColormapChoice::Viridis => formats::Colormap::Viridis,
            },
            overlay: match r.overlay {
                OverlayChoice::Both => formats::OverlayFlags {
                    caustic: true,
                    ridge: true,
                },
                OverlayChoice::Caustic => formats::OverlayFlags {
                    caustic: true,
                    ridge: false,
                },
                OverlayChoice::Ridge => formats::OverlayFlags {
                    caustic: false,
                    ridge: true,
                },
                OverlayChoice::None => formats::OverlayFlags {
                    caustic: false,
                    ridge: false,
                },
            },
        }
    }
}
