//! Geometry of the semiclassical layer: oriented area, ridges, caustics,
//! cusp detection and the classical/forbidden classifier.
//!
//! The continuous picture lives in (J3, delta) coordinates with
//! J1 = a + 1/2, J2 = b + 1/2, J3 = x + 1/2; only j-type entries get the
//! half shift, delta stays unshifted.

use thiserror::Error;

use crate::half_integer::HalfInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("({j1}, {j2}, {j3}) violates the triangle inequality")]
    NotATriangle { j1: f64, j2: f64, j3: f64 },
    #[error("ridge radicand {0} is negative: J3*(delta) is imaginary there")]
    ImaginaryRidge(f64),
    #[error("momentum gives J = {0}, expected J >= 1/2")]
    InvalidMomentum(f64),
}

/// Continuous screen geometry for one (J1, J2, sigma) family.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GeomSpec {
    j1: f64,
    j2: f64,
    sigma: HalfInt,
}

impl GeomSpec {
    /// From the quantum momenta: J1 = a + 1/2, J2 = b + 1/2, exactly.
    pub fn from_momenta(a: HalfInt, b: HalfInt, sigma: HalfInt) -> Result<Self, GeomError> {
        for j in [a, b] {
            if j.is_negative() {
                return Err(GeomError::InvalidMomentum(j.to_f64() + 0.5));
            }
        }
        Ok(GeomSpec {
            j1: a.to_f64() + 0.5,
            j2: b.to_f64() + 0.5,
            sigma,
        })
    }

    /// Directly from half-integer J values (each must be >= 1/2).
    pub fn from_j(j1: HalfInt, j2: HalfInt, sigma: HalfInt) -> Result<Self, GeomError> {
        for j in [j1, j2] {
            if j.twice() < 1 {
                return Err(GeomError::InvalidMomentum(j.to_f64()));
            }
        }
        Ok(GeomSpec {
            j1: j1.to_f64(),
            j2: j2.to_f64(),
            sigma,
        })
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }
    pub fn j2(&self) -> f64 {
        self.j2
    }
    pub fn sigma(&self) -> HalfInt {
        self.sigma
    }
    pub fn sigma_value(&self) -> f64 {
        self.sigma.to_f64()
    }

    pub fn with_sigma(&self, sigma: HalfInt) -> GeomSpec {
        GeomSpec { sigma, ..*self }
    }

    /// J3 interval on which the caustic is real:
    /// [max(|J1-J2|, 2|sigma|), J1+J2].
    pub fn caustic_domain(&self) -> (f64, f64) {
        let lo = (self.j1 - self.j2)
            .abs()
            .max(2.0 * self.sigma_value().abs());
        (lo, self.j1 + self.j2)
    }

    /// Lattice sigmas with a real caustic: |sigma| <= (J1+J2)/2.
    pub fn allowed_sigmas(&self) -> Vec<HalfInt> {
        // |2 sigma| <= J1+J2 in doubled units
        let bound = (self.j1 + self.j2 + 1e-9).floor() as i64;
        (-bound..=bound).map(HalfInt::from_twice).collect()
    }
}

/// Triangle area by the Archimedes-Heron formula; 0 on degenerate triangles,
/// error when the inequality is violated.
pub fn heron_area(j1: f64, j2: f64, j3: f64) -> Result<f64, GeomError> {
    let radicand = heron_radicand(j1, j2, j3);
    if radicand < 0.0 {
        return Err(GeomError::NotATriangle { j1, j2, j3 });
    }
    Ok(radicand.sqrt() / 4.0)
}

/// (J1+J2+J3)(-J1+J2+J3)(J1-J2+J3)(J1+J2-J3) = 16 F^2.
fn heron_radicand(j1: f64, j2: f64, j3: f64) -> f64 {
    (j1 + j2 + j3) * (-j1 + j2 + j3) * (j1 - j2 + j3) * (j1 + j2 - j3)
}

/// The oriented area squared in its expanded form:
/// S^2 = F^2 + (sigma^2-delta^2) J3^2/4
///           - sigma[(sigma+delta) J2^2 + (sigma-delta) J1^2]/2.
/// Negative values mark the classically forbidden region.
pub fn oriented_area_squared(geom: &GeomSpec, j3: f64, delta: f64) -> f64 {
    let s = geom.sigma_value();
    let f2 = heron_radicand(geom.j1, geom.j2, j3) / 16.0;
    f2 + (s * s - delta * delta) * j3 * j3 / 4.0
        - s * ((s + delta) * geom.j2 * geom.j2 + (s - delta) * geom.j1 * geom.j1) / 2.0
}

/// The same quantity as -(1/16) of the bordered 4x4 determinant; the
/// self-check route for [`oriented_area_squared`].
pub fn oriented_area_squared_det(geom: &GeomSpec, j3: f64, delta: f64) -> f64 {
    let s = geom.sigma_value();
    let alpha = s + delta;
    let beta = s - delta;
    let a = geom.j1 * geom.j1 - alpha * alpha;
    let b = geom.j2 * geom.j2 - beta * beta;
    let c = j3 * j3 - (alpha + beta) * (alpha + beta);
    let m = [
        [0.0, a, b, 1.0],
        [a, 0.0, c, 1.0],
        [b, c, 0.0, 1.0],
        [1.0, 1.0, 1.0, 0.0],
    ];
    -det4(&m) / 16.0
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut total = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for (i, row) in m[1..].iter().enumerate() {
            let mut k = 0;
            for (j, &v) in row.iter().enumerate() {
                if j != col {
                    minor[i][k] = v;
                    k += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * m[0][col] * det3(&minor);
    }
    total
}

/// Ridge following delta at fixed J3: delta*(J3) = sigma (J1^2-J2^2)/J3^2.
pub fn ridge_delta(geom: &GeomSpec, j3: f64) -> f64 {
    geom.sigma_value() * (geom.j1 * geom.j1 - geom.j2 * geom.j2) / (j3 * j3)
}

/// Ridge following J3 at fixed delta:
/// J3*(delta) = sqrt(J1^2 + J2^2 + 2(sigma^2 - delta^2)).
pub fn ridge_x(geom: &GeomSpec, delta: f64) -> Result<f64, GeomError> {
    let s = geom.sigma_value();
    let radicand = geom.j1 * geom.j1 + geom.j2 * geom.j2 + 2.0 * (s * s - delta * delta);
    if radicand < 0.0 {
        return Err(GeomError::ImaginaryRidge(radicand));
    }
    Ok(radicand.sqrt())
}

/// Upper and lower caustic branches
/// delta+-(J3) = delta*(J3) +- 2 F sqrt(J3^2 - 4 sigma^2) / J3^2,
/// or None when they are complex (outside the triangle range or
/// J3^2 < 4 sigma^2). Returned as (delta_minus, delta_plus).
pub fn caustic_delta(geom: &GeomSpec, j3: f64) -> Option<(f64, f64)> {
    let heron = heron_radicand(geom.j1, geom.j2, j3);
    let s = geom.sigma_value();
    let t = j3 * j3 - 4.0 * s * s;
    if heron < 0.0 || t < 0.0 || j3 <= 0.0 {
        return None;
    }
    let center = ridge_delta(geom, j3);
    let spread = 2.0 * (heron.sqrt() / 4.0) * t.sqrt() / (j3 * j3);
    Some((center - spread, center + spread))
}

/// Sigmas at which the caustic develops a cusp: +-(J1-J2)/2, kept only when
/// on the half-integer lattice.
pub fn cusp_sigma(geom: &GeomSpec) -> Vec<HalfInt> {
    let twice_value = geom.j1 - geom.j2; // 2 * (J1-J2)/2
    let rounded = twice_value.round();
    if (twice_value - rounded).abs() > 1e-12 {
        return Vec::new();
    }
    let s = HalfInt::from_twice(rounded as i64);
    if s == HalfInt::ZERO {
        vec![HalfInt::ZERO]
    } else {
        let mut both = vec![-s.abs(), s.abs()];
        both.sort();
        both
    }
}

/// Classification of a screen point by the sign of S^2, inside an epsilon
/// band that scales like J3^4 (the natural scale of the S^2 terms).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PointClass {
    Classical,
    Caustic,
    Forbidden,
}

pub fn classify_point(geom: &GeomSpec, j3: f64, delta: f64) -> PointClass {
    let s2 = oriented_area_squared(geom, j3, delta);
    let eps = 1e-9 * (j3 * j3 * j3 * j3).max(1.0);
    if s2 > eps {
        PointClass::Classical
    } else if s2 < -eps {
        PointClass::Forbidden
    } else {
        PointClass::Caustic
    }
}

/// One sample of the two caustic branches at a given J3.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CausticSample {
    pub j3: f64,
    pub delta_minus: f64,
    pub delta_plus: f64,
}

/// A sampled caustic with endpoints refined until the branch gap closes.
#[derive(Clone, PartialEq, Debug)]
pub struct CausticCurve {
    pub sigma: HalfInt,
    pub samples: Vec<CausticSample>,
    pub cusp: bool,
}

impl CausticCurve {
    /// Where the cusp sits when `cusp` is set: the first (pinch) sample.
    pub fn cusp_point(&self) -> Option<CausticSample> {
        if self.cusp {
            self.samples.first().copied()
        } else {
            None
        }
    }
}

pub const DEFAULT_SAMPLES_PER_UNIT: usize = 16;

/// Samples both caustic branches over their real J3 interval. Endpoints are
/// exact pinch points (branch gap 0); interior sampling is uniform at
/// `samples_per_unit`, with bisection refinement toward each pinch until the
/// last interior gap is below 1e-6.
pub fn caustic_curve(geom: &GeomSpec, samples_per_unit: usize) -> CausticCurve {
    let (lo, hi) = geom.caustic_domain();
    let mut j3s: Vec<f64> = Vec::new();

    let open_at_zero = lo == 0.0; // J1 = J2 and sigma = 0: branches stay apart
    j3s.push(lo);
    let intervals = (((hi - lo) * samples_per_unit as f64).ceil() as usize).max(1);
    for k in 1..intervals {
        j3s.push(lo + (hi - lo) * k as f64 / intervals as f64);
    }
    j3s.push(hi);

    // refinement toward pinch endpoints until the gap closes smoothly
    let mut refined: Vec<f64> = Vec::new();
    if !open_at_zero {
        let mut t = j3s[1];
        for _ in 0..80 {
            t = (t + lo) / 2.0;
            if t <= lo {
                break;
            }
            refined.push(t);
            if let Some((dm, dp)) = caustic_delta(geom, t) {
                if dp - dm < 1e-6 {
                    break;
                }
            }
        }
    }
    {
        let mut t = j3s[j3s.len() - 2];
        for _ in 0..80 {
            t = (t + hi) / 2.0;
            if t >= hi {
                break;
            }
            refined.push(t);
            if let Some((dm, dp)) = caustic_delta(geom, t) {
                if dp - dm < 1e-6 {
                    break;
                }
            }
        }
    }
    j3s.extend(refined);
    j3s.sort_by(f64::total_cmp);
    j3s.dedup();

    let samples = j3s
        .into_iter()
        .filter_map(|j3| {
            let (delta_minus, delta_plus) = if j3 == 0.0 {
                // J1 = J2, sigma = 0: limiting branch values +-J1
                (-geom.j1, geom.j1)
            } else {
                caustic_delta(geom, j3)?
            };
            Some(CausticSample {
                j3,
                delta_minus,
                delta_plus,
            })
        })
        .collect();

    CausticCurve {
        sigma: geom.sigma(),
        samples,
        cusp: cusp_sigma(geom).contains(&geom.sigma()),
    }
}
