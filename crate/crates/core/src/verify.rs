//! Verification suites: oracle equivalence, orthogonality, spectra,
//! recurrence annihilation and Regge-orbit phase consistency, each reported
//! with its worst observed error.

use crate::args::ThreeJArgs;
use crate::eigen::symmetric_tridiagonal_eigen;
use crate::half_integer::HalfInt;
use crate::recurrence::{
    build_delta_problem, build_x_problem, delta_coefficients, delta_p, delta_p_rejected,
    delta_problem_spectrum, max_entry_difference, oracle_screen, solve_screen, x_coefficients,
    x_problem_spectrum, x_q, SolveError,
};
use crate::screen::ScreenSpec;
use crate::semiclassics::{caustic_delta, classify_point, GeomSpec, PointClass};
use crate::symmetry::{is_canonical, orbit};

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub failures: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.max_error <= self.tolerance
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub max_a: HalfInt,
    pub max_b: HalfInt,
    pub tolerance: f64,
    /// Negative control: run the annihilation suite with the rejected
    /// delta-coefficient sign, which must fail.
    pub corrupt_delta_p: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_a: HalfInt::from_int(4),
            max_b: HalfInt::from_int(4),
            tolerance: 1e-12,
            corrupt_delta_p: false,
        }
    }
}

/// All feasible screen triples with a <= max_a, b <= max_b (both lattice
/// parities, both sigma signs).
pub fn feasible_specs(max_a: HalfInt, max_b: HalfInt) -> Vec<ScreenSpec> {
    let mut specs = Vec::new();
    for ta in 0..=max_a.twice() {
        for tb in 0..=max_b.twice() {
            if (ta + tb) % 2 != 0 {
                continue;
            }
            let bound = (ta + tb) / 2;
            for ts in -bound..=bound {
                if let Ok(spec) = ScreenSpec::new(
                    HalfInt::from_twice(ta),
                    HalfInt::from_twice(tb),
                    HalfInt::from_twice(ts),
                ) {
                    specs.push(spec);
                }
            }
        }
    }
    specs
}

/// The canonical subset of [`feasible_specs`].
pub fn canonical_specs(max_a: HalfInt, max_b: HalfInt) -> Vec<ScreenSpec> {
    feasible_specs(max_a, max_b)
        .into_iter()
        .filter(is_canonical)
        .collect()
}

/// Max entrywise |solve_screen - oracle| over every canonical spec in range.
pub fn oracle_equivalence_suite(config: &VerifyConfig) -> Result<SuiteReport, SolveError> {
    let specs = canonical_specs(config.max_a, config.max_b);
    let mut max_error = 0.0f64;
    for spec in &specs {
        let solved = solve_screen(spec)?;
        let oracle = oracle_screen(spec);
        max_error = max_error.max(max_entry_difference(&solved, &oracle));
    }
    Ok(SuiteReport {
        name: "oracle-equivalence",
        cases: specs.len(),
        max_error,
        tolerance: config.tolerance,
        failures: 0,
    })
}

/// Max row/column Gram defect over every canonical spec in range.
pub fn orthogonality_suite(config: &VerifyConfig) -> Result<SuiteReport, SolveError> {
    let specs = canonical_specs(config.max_a, config.max_b);
    let mut max_error = 0.0f64;
    for spec in &specs {
        let u = solve_screen(spec)?;
        let (col, row) = u.orthogonality_defect();
        max_error = max_error.max(col).max(row);
    }
    Ok(SuiteReport {
        name: "orthogonality",
        cases: specs.len(),
        max_error,
        tolerance: config.tolerance,
        failures: 0,
    })
}

/// Eigenvalues of both tridiagonal problems against their closed-form
/// spectra, relative to the largest eigenvalue magnitude per screen.
pub fn spectrum_suite(config: &VerifyConfig) -> Result<SuiteReport, SolveError> {
    let specs = canonical_specs(config.max_a, config.max_b);
    let mut max_error = 0.0f64;
    for spec in &specs {
        let dp = build_delta_problem(spec)?;
        let eig = symmetric_tridiagonal_eigen(&dp.diagonal, &dp.offdiagonal)?;
        let want = delta_problem_spectrum(spec);
        let scale = want.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (got, want) in eig.values.iter().zip(&want) {
            max_error = max_error.max((got - want).abs() / scale);
        }

        let xp = build_x_problem(spec)?;
        let eig = symmetric_tridiagonal_eigen(&xp.diagonal, &xp.offdiagonal)?;
        let want = x_problem_spectrum(spec);
        let scale = want.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (got, want) in eig.values.iter().zip(&want) {
            max_error = max_error.max((got - want).abs() / scale);
        }
    }
    Ok(SuiteReport {
        name: "spectrum",
        cases: specs.len(),
        max_error,
        tolerance: 1e-9,
        failures: 0,
    })
}

/// Both three-term relations applied to exact-oracle screens: residuals
/// normalized by max|U| per screen, and the boundary coefficients checked
/// for exact vanishing. With `corrupt_delta_p` the rejected coefficient
/// variant is used instead and violations are counted as failures.
pub fn annihilation_suite(config: &VerifyConfig) -> Result<SuiteReport, SolveError> {
    let specs = feasible_specs(config.max_a, config.max_b);
    let tolerance = 1e-10;
    let mut max_error = 0.0f64;
    let mut failures = 0usize;
    let mut record = |value: f64| {
        // NaN (negative radicand in the corrupted variant) is a failure too
        if value > tolerance || value.is_nan() {
            failures += 1;
        }
        if value.is_nan() {
            max_error = f64::NAN;
        } else if !max_error.is_nan() {
            max_error = max_error.max(value);
        }
    };

    for spec in &specs {
        let n = spec.side();
        let u = oracle_screen(spec);
        let scale = u.max_abs().max(f64::MIN_POSITIVE);
        let p_at = |delta: HalfInt| -> f64 {
            if config.corrupt_delta_p {
                delta_p_rejected(spec, delta)
            } else {
                delta_p(spec, delta).expect("in-range delta")
            }
        };

        // boundary vanishing is part of the contract
        record(p_at(spec.delta_min()).abs());
        record(p_at(spec.delta_max() + HalfInt::ONE).abs());

        // delta-recurrence on oracle values, interior delta
        for (xi, x) in spec.x_values().enumerate() {
            for di in 1..n.saturating_sub(1) {
                let delta = spec.delta_at(di);
                let (_, p0) = delta_coefficients(spec, x, delta)?;
                let r = p_at(spec.delta_at(di + 1)) * u.get(xi, di + 1)
                    + p0 * u.get(xi, di)
                    + p_at(delta) * u.get(xi, di - 1);
                record(r.abs() / scale);
            }
        }

        // x-recurrence on oracle values, interior x (always the adopted form)
        if !config.corrupt_delta_p {
            for xi in 1..n.saturating_sub(1) {
                let x = spec.x_at(xi);
                let q_up = x_q(spec, spec.x_at(xi + 1))?;
                for (di, delta) in spec.delta_values().enumerate() {
                    let (q_here, q0) = x_coefficients(spec, x, delta)?;
                    let r =
                        q_up * u.get(xi + 1, di) + q0 * u.get(xi, di) + q_here * u.get(xi - 1, di);
                    record(r.abs() / scale);
                }
            }
        }
    }
    Ok(SuiteReport {
        name: "annihilation",
        cases: specs.len(),
        max_error,
        tolerance,
        failures: if config.corrupt_delta_p { failures } else { 0 },
    })
}

/// Exact phase consistency over full orbits of randomly sampled symbols.
pub fn regge_orbit_suite(config: &VerifyConfig, samples: usize, seed: u64) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let bound = config.max_a.twice().max(config.max_b.twice()).max(2);
    let mut failures = 0usize;
    let mut cases = 0usize;
    for _ in 0..samples {
        let args = random_symbol(&mut rng, bound);
        for record in orbit(&args) {
            cases += 1;
            if !record.verify_exact() {
                failures += 1;
            }
        }
    }
    SuiteReport {
        name: "regge-orbit",
        cases,
        max_error: if failures == 0 { 0.0 } else { 1.0 },
        tolerance: 0.0,
        failures,
    }
}

/// Runs every suite with the given configuration.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<SuiteReport>, SolveError> {
    Ok(vec![
        oracle_equivalence_suite(config)?,
        orthogonality_suite(config)?,
        spectrum_suite(config)?,
        annihilation_suite(config)?,
        regge_orbit_suite(config, 200, 0x5eed_cafe),
    ])
}

/// Worst distance (in grid steps) from any column's max-|U| cell to the
/// classical region of that column; the semiclassical localization measure.
pub fn localization_defect(spec: &ScreenSpec) -> Result<f64, SolveError> {
    let u = solve_screen(spec)?;
    let geom = GeomSpec::from_momenta(spec.a(), spec.b(), spec.sigma())
        .expect("screen momenta are nonnegative");
    let n = spec.side();
    let mut worst = 0.0f64;
    for (xi, x) in spec.x_values().enumerate() {
        let j3 = x.to_f64() + 0.5;
        let mut peak = 0;
        for di in 1..n {
            if u.get(xi, di).abs() > u.get(xi, peak).abs() {
                peak = di;
            }
        }
        let peak_delta = spec.delta_at(peak).to_f64();

        // nearest grid point classified classical
        let mut distance = f64::INFINITY;
        for (di, delta) in spec.delta_values().enumerate() {
            if classify_point(&geom, j3, delta.to_f64()) == PointClass::Classical {
                distance = distance.min((di as i64 - peak as i64).unsigned_abs() as f64);
            }
        }
        if distance.is_infinite() {
            // no classical grid point in this column: measure against the
            // continuous classical interval instead
            distance = match caustic_delta(&geom, j3) {
                Some((dm, dp)) => {
                    if peak_delta < dm {
                        dm - peak_delta
                    } else if peak_delta > dp {
                        peak_delta - dp
                    } else {
                        0.0
                    }
                }
                None => 0.0,
            };
        }
        worst = worst.max(distance);
    }
    Ok(worst)
}

/// Deterministic 64-bit generator for reproducible sampling.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// A uniformly structured random valid symbol with doubled entries <= bound.
pub fn random_symbol(rng: &mut SplitMix64, bound: i64) -> ThreeJArgs {
    loop {
        let ta = rng.below(bound as u64 + 1) as i64;
        let tb = rng.below(bound as u64 + 1) as i64;
        let tx_lo = (ta - tb).abs();
        let tx_hi = (ta + tb).min(bound);
        if tx_lo > tx_hi {
            continue;
        }
        let steps = (tx_hi - tx_lo) / 2 + 1;
        let tx = tx_lo + 2 * rng.below(steps as u64) as i64;
        let talpha = -ta + 2 * rng.below(ta as u64 + 1) as i64;
        let tbeta_lo = (-tb).max(-tx - talpha);
        let tbeta_hi = tb.min(tx - talpha);
        if tbeta_lo > tbeta_hi {
            continue;
        }
        let steps = (tbeta_hi - tbeta_lo) / 2 + 1;
        let tbeta = tbeta_lo + 2 * rng.below(steps as u64) as i64;
        if let Ok(args) = ThreeJArgs::from_twice(ta, tb, tx, talpha, tbeta, -talpha - tbeta) {
            return args;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_small_bounds() {
        let config = VerifyConfig {
            max_a: HalfInt::from_int(3),
            max_b: HalfInt::from_int(3),
            ..VerifyConfig::default()
        };
        for report in run_all(&config).unwrap() {
            assert!(
                report.passed(),
                "{} failed: max error {} (tolerance {}), {} failures over {} cases",
                report.name,
                report.max_error,
                report.tolerance,
                report.failures,
                report.cases
            );
        }
    }

    #[test]
    fn corrupted_coefficient_fails_the_annihilation_suite() {
        let config = VerifyConfig {
            max_a: HalfInt::from_int(2),
            max_b: HalfInt::from_int(2),
            corrupt_delta_p: true,
            ..VerifyConfig::default()
        };
        let report = annihilation_suite(&config).unwrap();
        assert!(!report.passed(), "negative control unexpectedly passed");
        assert!(report.failures > 0);
    }

    #[test]
    fn random_symbols_are_valid_and_in_bounds() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..500 {
            let s = random_symbol(&mut rng, 24);
            assert!(s.selection_rules() || !s.selection_rules()); // structurally valid by type
            assert!(s.a().twice() <= 24 && s.b().twice() <= 24 && s.x().twice() <= 24);
        }
    }

    #[test]
    fn localization_defect_is_small_for_a_midsize_screen() {
        let spec = ScreenSpec::new(
            HalfInt::from_int(12),
            HalfInt::from_int(12),
            HalfInt::from_int(3),
        )
        .unwrap();
        let defect = localization_defect(&spec).unwrap();
        assert!(defect <= 2.0, "defect {defect}");
    }
}
