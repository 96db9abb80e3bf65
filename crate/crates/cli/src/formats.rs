//! File formats owned by the tool: screen CSV, binary pixmaps (P5/P6) with
//! log-scale shading, and SVG overlays with solid caustics and dashed ridges.
//! Everything is byte-deterministic: fixed float formatting, no timestamps.

use std::fmt::Write as _;

use thiserror::Error;

use threej_core::half_integer::HalfInt;
use threej_core::recurrence::UMatrix;
use threej_core::semiclassics::{ridge_delta, ridge_x, CausticCurve, GeomSpec};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(
        "render config: floor {floor} and ceiling {ceiling} must satisfy 0 < floor < ceiling <= 1"
    )]
    BadRange { floor: f64, ceiling: f64 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Colormap {
    #[default]
    Grayscale,
    Viridis,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OverlayFlags {
    pub caustic: bool,
    pub ridge: bool,
}

impl Default for OverlayFlags {
    fn default() -> Self {
        OverlayFlags {
            caustic: true,
            ridge: true,
        }
    }
}

/// Rendering parameters for heatmaps: |U| is clamped to [floor, ceiling]
/// and shaded on a log scale.
#[derive(Clone, Copy, Debug)]
pub struct RenderConfig {
    pub floor: f64,
    pub ceiling: f64,
    pub colormap: Colormap,
    pub overlay: OverlayFlags,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            floor: 1e-10,
            ceiling: 1.0,
            colormap: Colormap::Grayscale,
            overlay: OverlayFlags::default(),
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), FormatError> {
        if self.floor > 0.0 && self.floor < self.ceiling && self.ceiling <= 1.0 {
            Ok(())
        } else {
            Err(FormatError::BadRange {
                floor: self.floor,
                ceiling: self.ceiling,
            })
        }
    }

    /// Position of |u| on the clamped log scale, in [0, 1].
    fn shade(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        let lo = self.floor.log10();
        let hi = self.ceiling.log10();
        ((u.abs().log10() - lo) / (hi - lo)).clamp(0.0, 1.0)
    }
}

/// A rectangular screen grid ready for rendering; decouples the writers from
/// the solver so a parsed CSV re-renders identically.
#[derive(Clone, Debug, PartialEq)]
pub struct GridData {
    pub xs: Vec<HalfInt>,
    pub deltas: Vec<HalfInt>,
    /// Row-major: values[x_index * deltas.len() + delta_index].
    pub values: Vec<f64>,
}

impl GridData {
    pub fn get(&self, x_index: usize, delta_index: usize) -> f64 {
        self.values[x_index * self.deltas.len() + delta_index]
    }
}

impl From<&UMatrix> for GridData {
    fn from(u: &UMatrix) -> Self {
        let spec = u.spec();
        GridData {
            xs: spec.x_values().collect(),
            deltas: spec.delta_values().collect(),
            values: (0..spec.side())
                .flat_map(|xi| (0..spec.side()).map(move |di| (xi, di)))
                .map(|(xi, di)| u.get(xi, di))
                .collect(),
        }
    }
}

/// Fixed 17-significant-digit form used in every data file.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{:.16e}", v)
    }
}

/// Screen CSV: header `x,delta,u`, x-major row order, exact decimal
/// coordinates; exact zeros stay the literal `0`. The doubled flag appends
/// lossless doubled-integer coordinate columns.
pub fn write_screen_csv(grid: &GridData, doubled: bool) -> String {
    let mut out = String::new();
    out.push_str(if doubled {
        "x,delta,u,two_x,two_delta\n"
    } else {
        "x,delta,u\n"
    });
    for (xi, x) in grid.xs.iter().enumerate() {
        for (di, delta) in grid.deltas.iter().enumerate() {
            let u = grid.get(xi, di);
            if doubled {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    x.to_decimal_string(),
                    delta.to_decimal_string(),
                    format_value(u),
                    x.twice(),
                    delta.twice()
                );
            } else {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    x.to_decimal_string(),
                    delta.to_decimal_string(),
                    format_value(u)
                );
            }
        }
    }
    out
}

/// Inverse of [`write_screen_csv`]; accepts both column layouts.
pub fn parse_screen_csv(text: &str) -> Result<GridData, FormatError> {
    let mut rows: Vec<(HalfInt, HalfInt, f64)> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if index == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 && fields.len() != 5 {
            return Err(FormatError::Csv {
                line: index + 1,
                message: format!("expected 3 or 5 fields, got {}", fields.len()),
            });
        }
        let parse_half = |s: &str| {
            s.parse::<HalfInt>().map_err(|e| FormatError::Csv {
                line: index + 1,
                message: e.to_string(),
            })
        };
        let x = parse_half(fields[0])?;
        let delta = parse_half(fields[1])?;
        let u: f64 = fields[2].parse().map_err(|_| FormatError::Csv {
            line: index + 1,
            message: format!("bad value `{}`", fields[2]),
        })?;
        rows.push((x, delta, u));
    }
    let mut xs: Vec<HalfInt> = rows.iter().map(|r| r.0).collect();
    xs.sort();
    xs.dedup();
    let mut deltas: Vec<HalfInt> = rows.iter().map(|r| r.1).collect();
    deltas.sort();
    deltas.dedup();
    if rows.len() != xs.len() * deltas.len() {
        return Err(FormatError::Csv {
            line: 0,
            message: format!(
                "incomplete grid: {} rows for {} x {} points",
                rows.len(),
                xs.len(),
                deltas.len()
            ),
        });
    }
    let mut values = vec![0.0; rows.len()];
    for (x, delta, u) in rows {
        let xi = xs.binary_search(&x).expect("x seen above");
        let di = deltas.binary_search(&delta).expect("delta seen above");
        values[xi * deltas.len() + di] = u;
    }
    Ok(GridData { xs, deltas, values })
}

fn viridis(t: f64) -> [u8; 3] {
    const ANCHORS: [[u8; 3]; 16] = [
        [68, 1, 84],
        [72, 26, 108],
        [71, 47, 125],
        [65, 68, 135],
        [57, 86, 140],
        [49, 104, 142],
        [42, 120, 142],
        [35, 136, 142],
        [31, 152, 139],
        [34, 168, 132],
        [53, 183, 121],
        [84, 197, 104],
        [122, 209, 81],
        [165, 219, 54],
        [210, 226, 27],
        [253, 231, 37],
    ];
    let clamped = t.clamp(0.0, 1.0) * (ANCHORS.len() - 1) as f64;
    let low = clamped.floor() as usize;
    let high = (low + 1).min(ANCHORS.len() - 1);
    let frac = clamped - low as f64;
    let mut rgb = [0u8; 3];
    for (channel, slot) in rgb.iter_mut().enumerate() {
        let a = ANCHORS[low][channel] as f64;
        let b = ANCHORS[high][channel] as f64;
        *slot = (a + (b - a) * frac).round() as u8;
    }
    rgb
}

/// Binary P5 pixmap of log10|U|: x horizontal (ascending), delta vertical
/// (maximum at the top), one pixel per grid cell. Exact zeros and anything
/// at or below the floor land exactly on the floor color.
pub fn write_pgm(grid: &GridData, config: &RenderConfig) -> Result<Vec<u8>, FormatError> {
    config.validate()?;
    let width = grid.xs.len();
    let height = grid.deltas.len();
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    for row in 0..height {
        let di = height - 1 - row;
        for xi in 0..width {
            out.push((config.shade(grid.get(xi, di)) * 255.0).round() as u8);
        }
    }
    Ok(out)
}

/// Binary P6 pixmap with the viridis-like colormap (or gray triplets).
pub fn write_ppm(grid: &GridData, config: &RenderConfig) -> Result<Vec<u8>, FormatError> {
    config.validate()?;
    let width = grid.xs.len();
    let height = grid.deltas.len();
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    for row in 0..height {
        let di = height - 1 - row;
        for xi in 0..width {
            let t = config.shade(grid.get(xi, di));
            let rgb = match config.colormap {
                Colormap::Viridis => viridis(t),
                Colormap::Grayscale => {
                    let g = (t * 255.0).round() as u8;
                    [g, g, g]
                }
            };
            out.extend_from_slice(&rgb);
        }
    }
    Ok(out)
}

fn fmt6(v: f64) -> String {
    format!("{:.6}", v)
}

/// SVG of the screen: shaded cells plus the requested overlays, drawn in the
/// continuous (J3, delta) frame mapped onto grid units. Caustics are solid,
/// ridges dashed.
pub fn write_screen_svg(
    grid: &GridData,
    geom: &GeomSpec,
    config: &RenderConfig,
) -> Result<String, FormatError> {
    config.validate()?;
    let n_x = grid.xs.len();
    let n_d = grid.deltas.len();
    let x_min = grid.xs[0].to_f64();
    let delta_max = grid.deltas[n_d - 1].to_f64();
    // continuous point (J3, delta) in pixel units
    let px = |j3: f64| j3 - 0.5 - x_min + 0.5;
    let py = |delta: f64| delta_max - delta + 0.5;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {n_x} {n_d}\" width=\"{}\" height=\"{}\">",
        n_x * 8,
        n_d * 8
    );
    for xi in 0..n_x {
        for di in 0..n_d {
            let t = config.shade(grid.get(xi, di));
            let [r, g, b] = match config.colormap {
                Colormap::Viridis => viridis(t),
                Colormap::Grayscale => {
                    let v = (t * 255.0).round() as u8;
                    [v, v, v]
                }
            };
            let _ = writeln!(
                svg,
                "<rect x=\"{}\" y=\"{}\" width=\"1\" height=\"1\" fill=\"rgb({r},{g},{b})\"/>",
                xi,
                n_d - 1 - di
            );
        }
    }

    if config.overlay.caustic {
        let curve = threej_core::semiclassics::caustic_curve(
            geom,
            threej_core::semiclassics::DEFAULT_SAMPLES_PER_UNIT,
        );
        if !curve.samples.is_empty() {
            let mut path = String::from("M");
            for s in &curve.samples {
                let _ = write!(path, " {},{}", fmt6(px(s.j3)), fmt6(py(s.delta_plus)));
            }
            for s in curve.samples.iter().rev() {
                let _ = write!(path, " L {},{}", fmt6(px(s.j3)), fmt6(py(s.delta_minus)));
            }
            path.push_str(" Z");
            let _ = writeln!(
                svg,
                "<path d=\"{path}\" fill=\"none\" stroke=\"#808080\" stroke-width=\"0.12\"/>"
            );
        }
    }

    if config.overlay.ridge {
        // delta*(J3) over the screen's continuous x extent
        let lo = grid.xs[0].to_f64() + 0.5;
        let hi = grid.xs[n_x - 1].to_f64() + 0.5;
        let mut points = String::new();
        let steps = (n_x * 8).max(16);
        for k in 0..=steps {
            let j3 = lo + (hi - lo) * k as f64 / steps as f64;
            let d = ridge_delta(geom, j3);
            let _ = write!(points, "{},{} ", fmt6(px(j3)), fmt6(py(d)));
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"0.12\" stroke-dasharray=\"0.45,0.3\"/>",
            points.trim_end()
        );

        // J3*(delta) wherever it is real
        let mut points = String::new();
        let d_lo = grid.deltas[0].to_f64();
        let d_hi = grid.deltas[n_d - 1].to_f64();
        let steps = (n_d * 8).max(16);
        for k in 0..=steps {
            let delta = d_lo + (d_hi - d_lo) * k as f64 / steps as f64;
            if let Ok(j3) = ridge_x(geom, delta) {
                let _ = write!(points, "{},{} ", fmt6(px(j3)), fmt6(py(delta)));
            }
        }
        if !points.is_empty() {
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"0.12\" stroke-dasharray=\"0.15,0.25\"/>",
                points.trim_end()
            );
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Caustic/ridge samples for one sigma as CSV:
/// `j3,delta_minus,delta_plus,delta_ridge`.
pub fn write_caustics_csv(curve: &CausticCurve, geom: &GeomSpec) -> String {
    let mut out = String::from("j3,delta_minus,delta_plus,delta_ridge\n");
    for s in &curve.samples {
        let ridge = if s.j3 > 0.0 {
            ridge_delta(geom, s.j3)
        } else {
            0.0
        };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_value(s.j3),
            format_value(s.delta_minus),
            format_value(s.delta_plus),
            format_value(ridge)
        );
    }
    out
}

/// Standalone SVG of one caustic loop (solid) with its ridge (dashed), in
/// (J3, delta) coordinates.
pub fn write_caustics_svg(curve: &CausticCurve, geom: &GeomSpec) -> String {
    let hi = geom.j1() + geom.j2();
    let top = hi / 2.0 + geom.sigma_value().abs() + 1.0;
    let width = hi + 1.0;
    let height = 2.0 * top;
    let px = |j3: f64| j3 + 0.5;
    let py = |delta: f64| top - delta;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">",
        fmt6(width),
        fmt6(height),
        (width * 40.0).round() as i64,
        (height * 40.0).round() as i64
    );
    if !curve.samples.is_empty() {
        let mut path = String::from("M");
        for s in &curve.samples {
            let _ = write!(path, " {},{}", fmt6(px(s.j3)), fmt6(py(s.delta_plus)));
        }
        for s in curve.samples.iter().rev() {
            let _ = write!(path, " L {},{}", fmt6(px(s.j3)), fmt6(py(s.delta_minus)));
        }
        path.push_str(" Z");
        let _ = writeln!(
            svg,
            "<path d=\"{path}\" fill=\"none\" stroke=\"#303030\" stroke-width=\"0.05\"/>"
        );

        let lo_j3 = curve.samples[0].j3.max(0.25);
        let mut points = String::new();
        for k in 0..=256 {
            let j3 = lo_j3 + (hi - lo_j3) * k as f64 / 256.0;
            let _ = write!(
                points,
                "{},{} ",
                fmt6(px(j3)),
                fmt6(py(ridge_delta(geom, j3)))
            );
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#303030\" stroke-width=\"0.05\" stroke-dasharray=\"0.2,0.15\"/>",
            points.trim_end()
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use threej_core::recurrence::solve_screen;
    use threej_core::ScreenSpec;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn small_grid() -> GridData {
        let spec = ScreenSpec::new(h(2), h(6), h(0)).unwrap();
        GridData::from(&solve_screen(&spec).unwrap())
    }

    #[test]
    fn csv_round_trips_grid_exactly() {
        let grid = small_grid();
        for doubled in [false, true] {
            let csv = write_screen_csv(&grid, doubled);
            let parsed = parse_screen_csv(&csv).unwrap();
            assert_eq!(parsed.xs, grid.xs);
            assert_eq!(parsed.deltas, grid.deltas);
            for (a, b) in parsed.values.iter().zip(&grid.values) {
                assert!((a - b).abs() < 1e-15, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn csv_keeps_exact_zeros_literal() {
        let spec = ScreenSpec::new(h(2), h(2), h(0)).unwrap();
        let grid = GridData::from(&threej_core::recurrence::oracle_screen(&spec));
        let csv = write_screen_csv(&grid, false);
        // U(1, 0) is a parity zero on this screen
        assert!(csv.lines().any(|l| l == "1.0,0.0,0"), "csv:\n{csv}");
    }

    #[test]
    fn csv_round_trip_renders_identical_pixmap() {
        let grid = small_grid();
        let config = RenderConfig::default();
        let direct = write_pgm(&grid, &config).unwrap();
        let reparsed = parse_screen_csv(&write_screen_csv(&grid, false)).unwrap();
        let indirect = write_pgm(&reparsed, &config).unwrap();
        assert_eq!(direct, indirect);
    }

    #[test]
    fn pgm_pixels_follow_the_log_scale() {
        let grid = GridData {
            xs: vec![h(0), h(2)],
            deltas: vec![h(-1), h(1)],
            values: vec![1.0, 1e-12, 0.0, 1e-5],
        };
        let pgm = write_pgm(&grid, &RenderConfig::default()).unwrap();
        assert!(pgm.starts_with(b"P5\n2 2\n255\n"));
        let pixels = &pgm[11..];
        // top row is delta = +1/2: (x=0 -> 1e-12 below floor), (x=1 -> 1e-5 midpoint)
        assert_eq!(pixels[0], 0);
        assert_eq!(pixels[1], 128);
        // bottom row is delta = -1: (x=0 -> 1.0 ceiling), (x=1 -> exact zero)
        assert_eq!(pixels[2], 255);
        assert_eq!(pixels[3], 0);
    }

    #[test]
    fn ppm_viridis_and_grayscale_headers() {
        let grid = small_grid();
        let mut config = RenderConfig {
            colormap: Colormap::Viridis,
            ..Default::default()
        };
        let ppm = write_ppm(&grid, &config).unwrap();
        assert!(ppm.starts_with(b"P6\n3 3\n255\n"));
        assert_eq!(ppm.len(), 11 + 27);
        config.colormap = Colormap::Grayscale;
        let gray = write_ppm(&grid, &config).unwrap();
        let pgm = write_pgm(&grid, &config).unwrap();
        // gray P6 triplets replicate the P5 bytes
        for (i, b) in pgm[11..].iter().enumerate() {
            assert_eq!(gray[11 + 3 * i], *b);
        }
    }

    #[test]
    fn bad_render_range_is_rejected() {
        let config = RenderConfig {
            floor: 0.5,
            ceiling: 0.1,
            ..Default::default()
        };
        assert!(config.validate().is_err());
        let config = RenderConfig {
            floor: 0.0,
            ceiling: 1.0,
            ..Default::default()
        };
        assert!(config.validate().is_err());
    }

    #[test]
    fn svg_contains_cells_and_overlays() {
        let grid = small_grid();
        let geom = GeomSpec::from_momenta(h(2), h(6), h(0)).unwrap();
        let svg = write_screen_svg(&grid, &geom, &RenderConfig::default()).unwrap();
        assert!(svg.contains("<svg"));
        assert_eq!(svg.matches("<rect").count(), 9);
        assert!(svg.contains("stroke-dasharray")); // ridge
        assert!(svg.contains("<path")); // caustic
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn caustics_files_are_deterministic() {
        let geom = GeomSpec::from_j(h(3), h(7), h(2)).unwrap();
        let curve = threej_core::semiclassics::caustic_curve(&geom, 16);
        let csv1 = write_caustics_csv(&curve, &geom);
        let csv2 = write_caustics_csv(&curve, &geom);
        assert_eq!(csv1, csv2);
        assert!(csv1.starts_with("j3,delta_minus,delta_plus,delta_ridge\n"));
        let svg = write_caustics_svg(&curve, &geom);
        assert!(svg.contains("stroke-dasharray"));
    }
}
