//! Implementations of the four subcommands.

use std::fs;
use std::path::PathBuf;

use threej_core::exact::ExactValue;
use threej_core::half_integer::HalfInt;
use threej_core::recurrence::{solve_screen_with, SolveMethod};
use threej_core::semiclassics::{caustic_curve, GeomSpec};
use threej_core::symmetry::canonicalize_spec;
use threej_core::verify::{run_all, VerifyConfig};
use threej_core::{exact_3j, ArgsError, ScreenSpec, ThreeJArgs};

use crate::formats::{
    write_caustics_csv, write_caustics_svg, write_pgm, write_ppm, write_screen_csv,
    write_screen_svg, GridData, RenderConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_STRICT: i32 = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Csv,
    Pgm,
    Ppm,
    Svg,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Pgm => "pgm",
            OutputFormat::Ppm => "ppm",
            OutputFormat::Svg => "svg",
        }
    }
}

/// Renders an exact value the way `eval` prints it: `0`, `1`, `-1`, or
/// `{sign}sqrt(p/q)`.
fn format_exact(value: &ExactValue) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let sign = if value.sign() > 0 { "+" } else { "-" };
    let square = value.square();
    if square.is_integer() && square.numer().to_string() == "1" {
        return format!("{}1", if value.sign() > 0 { "" } else { "-" });
    }
    let ratio = if square.is_integer() {
        square.numer().to_string()
    } else {
        format!("{}/{}", square.numer(), square.denom())
    };
    format!("{sign}sqrt({ratio})")
}

pub fn eval(
    a: HalfInt,
    b: HalfInt,
    x: HalfInt,
    alpha: HalfInt,
    beta: HalfInt,
    gamma: HalfInt,
    strict: bool,
) -> i32 {
    for j in [a, b, x] {
        if j.is_negative() {
            eprintln!("error: momentum {j} is negative");
            return EXIT_PARSE;
        }
    }
    let args = match ThreeJArgs::new(a, b, x, alpha, beta, gamma) {
        Ok(args) => args,
        Err(err @ (ArgsError::ProjectionSum(_) | ArgsError::ParityMismatch { .. })) => {
            if strict {
                eprintln!("error: {err}");
                return EXIT_STRICT;
            }
            println!("0 (selection rules not satisfied: {err})");
            return EXIT_OK;
        }
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_PARSE;
        }
    };
    if !args.selection_rules() {
        if strict {
            eprintln!(
                "error: selection rules not satisfied for ({a} {b} {x}; {alpha} {beta} {gamma})"
            );
            return EXIT_STRICT;
        }
        println!("0 (selection rules not satisfied)");
        return EXIT_OK;
    }
    let value = exact_3j(&args);
    let exact = format_exact(&value);
    if value.is_zero() || exact == "1" || exact == "-1" {
        println!("{exact}");
    } else {
        println!("{exact} \u{2248} {}", value.to_f64());
    }
    EXIT_OK
}

pub struct ScreenOptions {
    pub a: HalfInt,
    pub b: HalfInt,
    pub sigma: HalfInt,
    pub formats: Vec<OutputFormat>,
    pub render: RenderConfig,
    pub method: SolveMethod,
    pub doubled_ints: bool,
    pub out_dir: PathBuf,
}

fn screen_stem(spec: &ScreenSpec) -> String {
    format!(
        "screen_a{}_b{}_s{}",
        spec.a().to_decimal_string(),
        spec.b().to_decimal_string(),
        spec.sigma().to_decimal_string()
    )
}

pub fn screen(options: ScreenOptions) -> i32 {
    if let Err(err) = options.render.validate() {
        eprintln!("error: {err}");
        return EXIT_PARSE;
    }
    let (spec, transform) = match canonicalize_spec(options.a, options.b, options.sigma) {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_PARSE;
        }
    };
    let requested = (options.a, options.b, options.sigma);
    if (spec.a(), spec.b(), spec.sigma()) != requested {
        println!(
            "canonicalized ({}, {}, {}) -> ({}, {}, {}); transform: {}",
            requested.0,
            requested.1,
            requested.2,
            spec.a(),
            spec.b(),
            spec.sigma(),
            transform
        );
    }
    println!(
        "screen ({}, {}, {}): {}x{} grid, x in [{}, {}], delta in [{}, {}]",
        spec.a(),
        spec.b(),
        spec.sigma(),
        spec.side(),
        spec.side(),
        spec.x_min(),
        spec.x_max(),
        spec.delta_min(),
        spec.delta_max()
    );

    let u = match solve_screen_with(&spec, options.method) {
        Ok(u) => u,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_VERIFY_FAILED;
        }
    };
    let grid = GridData::from(&u);
    let geom = GeomSpec::from_momenta(spec.a(), spec.b(), spec.sigma())
        .expect("screen momenta are nonnegative");

    if let Err(err) = fs::create_dir_all(&options.out_dir) {
        eprintln!("error: cannot create {}: {err}", options.out_dir.display());
        return EXIT_VERIFY_FAILED;
    }
    let stem = screen_stem(&spec);
    for format in &options.formats {
        let path = options
            .out_dir
            .join(format!("{stem}.{}", format.extension()));
        let bytes = match format {
            OutputFormat::Csv => write_screen_csv(&grid, options.doubled_ints).into_bytes(),
            OutputFormat::Pgm => match write_pgm(&grid, &options.render) {
                Ok(bytes) => bytes,
                Err(err) => {
                    eprintln!("error: {err}");
                    return EXIT_PARSE;
                }
            },
            OutputFormat::Ppm => match write_ppm(&grid, &options.render) {
                Ok(bytes) => bytes,
                Err(err) => {
                    eprintln!("error: {err}");
                    return EXIT_PARSE;
                }
            },
            OutputFormat::Svg => match write_screen_svg(&grid, &geom, &options.render) {
                Ok(svg) => svg.into_bytes(),
                Err(err) => {
                    eprintln!("error: {err}");
                    return EXIT_PARSE;
                }
            },
        };
        if let Err(err) = fs::write(&path, bytes) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return EXIT_VERIFY_FAILED;
        }
        println!("wrote {}", path.display());
    }
    EXIT_OK
}

pub struct CausticsOptions {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub sigma_list: String,
    pub formats: Vec<OutputFormat>,
    pub samples_per_unit: usize,
    pub out_dir: PathBuf,
}

pub fn caustics(options: CausticsOptions) -> i32 {
    let base = match GeomSpec::from_j(options.j1, options.j2, HalfInt::ZERO) {
        Ok(geom) => geom,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_PARSE;
        }
    };
    let sigmas: Vec<HalfInt> = if options.sigma_list.trim() == "all" {
        base.allowed_sigmas()
    } else {
        let mut parsed = Vec::new();
        for token in options.sigma_list.split(',') {
            match token.trim().parse::<HalfInt>() {
                Ok(sigma) => parsed.push(sigma),
                Err(err) => {
                    eprintln!("error: {err}");
                    return EXIT_PARSE;
                }
            }
        }
        for sigma in &parsed {
            if !base.allowed_sigmas().contains(sigma) {
                eprintln!(
                    "error: sigma = {sigma} has no real caustic for J1 = {}, J2 = {} (need |sigma| <= (J1+J2)/2)",
                    options.j1, options.j2
                );
                return EXIT_PARSE;
            }
        }
        parsed
    };

    if let Err(err) = fs::create_dir_all(&options.out_dir) {
        eprintln!("error: cannot create {}: {err}", options.out_dir.display());
        return EXIT_VERIFY_FAILED;
    }

    for sigma in sigmas {
        let geom = base.with_sigma(sigma);
        let curve = caustic_curve(&geom, options.samples_per_unit.max(1));
        let mut note = String::new();
        if curve.cusp {
            if let Some(pinch) = curve.cusp_point() {
                let corner = if pinch.delta_plus > 0.0 {
                    "upper"
                } else {
                    "lower"
                };
                note = format!(
                    "; cusp at (J3 = {}, delta = {}) [{} edge]",
                    pinch.j3, pinch.delta_plus, corner
                );
            }
        }
        println!(
            "sigma = {sigma}: {} samples over J3 in [{}, {}]{note}",
            curve.samples.len(),
            curve.samples.first().map(|s| s.j3).unwrap_or(f64::NAN),
            curve.samples.last().map(|s| s.j3).unwrap_or(f64::NAN),
        );
        let stem = format!(
            "caustics_j1{}_j2{}_s{}",
            options.j1.to_decimal_string(),
            options.j2.to_decimal_string(),
            sigma.to_decimal_string()
        );
        for format in &options.formats {
            let path = options
                .out_dir
                .join(format!("{stem}.{}", format.extension()));
            let bytes = match format {
                OutputFormat::Csv => write_caustics_csv(&curve, &geom).into_bytes(),
                OutputFormat::Svg => write_caustics_svg(&curve, &geom).into_bytes(),
                other => {
                    eprintln!("error: caustics output supports csv and svg, not {other:?}");
                    return EXIT_PARSE;
                }
            };
            if let Err(err) = fs::write(&path, bytes) {
                eprintln!("error: cannot write {}: {err}", path.display());
                return EXIT_VERIFY_FAILED;
            }
            println!("wrote {}", path.display());
        }
    }
    EXIT_OK
}

pub fn verify(max_a: HalfInt, max_b: HalfInt, tolerance: f64, corrupt_p: bool) -> i32 {
    if (max_a + max_b).twice() > 128 {
        eprintln!("error: verify bounds are capped at a+b <= 64 to keep the exact oracle fast");
        return EXIT_PARSE;
    }
    if max_a.is_negative() || max_b.is_negative() || tolerance <= 0.0 || tolerance.is_nan() {
        eprintln!("error: bounds must be nonnegative and the tolerance positive");
        return EXIT_PARSE;
    }
    let config = VerifyConfig {
        max_a,
        max_b,
        tolerance,
        corrupt_delta_p: corrupt_p,
    };
    let reports = match run_all(&config) {
        Ok(reports) => reports,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_VERIFY_FAILED;
        }
    };
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed() { "PASS" } else { "FAIL" };
        all_passed &= report.passed();
        println!(
            "{status} {:<18} cases {:>6}  max error {:.3e}  tolerance {:.1e}  failures {}",
            report.name, report.cases, report.max_error, report.tolerance, report.failures
        );
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn exact_formatting() {
        let args = ThreeJArgs::from_twice(2, 2, 4, 0, 0, 0).unwrap();
        assert_eq!(format_exact(&exact_3j(&args)), "+sqrt(2/15)");

        let args = ThreeJArgs::from_twice(0, 0, 0, 0, 0, 0).unwrap();
        assert_eq!(format_exact(&exact_3j(&args)), "1");

        let args = ThreeJArgs::from_twice(2, 2, 2, 0, 0, 0).unwrap();
        assert_eq!(format_exact(&exact_3j(&args)), "0");

        let args = ThreeJArgs::from_twice(2, 2, 0, 0, 0, 0).unwrap();
        assert_eq!(format_exact(&exact_3j(&args)), "-sqrt(1/3)");

        let whole = ExactValue::new(-1, BigRational::from_integer(4.into()));
        assert_eq!(format_exact(&whole), "-sqrt(4)");
    }
}
