//! Square screens: the (a, b, sigma) families of 3j symbols laid out over
//! the invariant coordinates x (abscissa) and delta (ordinate).

use thiserror::Error;

use crate::args::ThreeJArgs;
use crate::half_integer::{max, min, HalfInt};

/// One screen family (a, b, sigma) with its derived x and delta ranges.
///
/// The x-count always equals the delta-count (the four candidate range
/// lengths {2a+1, 2b+1, a+b+2s+1, a+b-2s+1} are shared by both axes), so a
/// screen is square; after canonicalization its side is 2a+1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ScreenSpec {
    a: HalfInt,
    b: HalfInt,
    sigma: HalfInt,
    x_min: HalfInt,
    x_max: HalfInt,
    delta_min: HalfInt,
    delta_max: HalfInt,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScreenError {
    #[error("momentum {0} is negative")]
    NegativeMomentum(HalfInt),
    #[error("a+b = {0} is not an integer, so no screen exists in this column order")]
    OffLattice(HalfInt),
    #[error("empty screen: |sigma| = {sigma} exceeds (a+b)/2 = {limit}")]
    Infeasible { sigma: HalfInt, limit: HalfInt },
    #[error("point (x={x}, delta={delta}) lies outside the screen grid")]
    OutOfScreen { x: HalfInt, delta: HalfInt },
}

impl ScreenSpec {
    pub fn new(a: HalfInt, b: HalfInt, sigma: HalfInt) -> Result<Self, ScreenError> {
        for j in [a, b] {
            if j.is_negative() {
                return Err(ScreenError::NegativeMomentum(j));
            }
        }
        if !(a + b).is_integer() {
            return Err(ScreenError::OffLattice(a + b));
        }
        let delta_min = max(-a - sigma, -b + sigma);
        let delta_max = min(a - sigma, b + sigma);
        if delta_min > delta_max {
            return Err(ScreenError::Infeasible {
                sigma,
                limit: (a + b).try_half().expect("a+b integral"),
            });
        }
        let two_abs_sigma = sigma.abs() + sigma.abs();
        let x_min = max((a - b).abs(), two_abs_sigma);
        let x_max = a + b;
        debug_assert_eq!(x_max - x_min, delta_max - delta_min, "screens are square");
        Ok(ScreenSpec {
            a,
            b,
            sigma,
            x_min,
            x_max,
            delta_min,
            delta_max,
        })
    }

    pub fn a(&self) -> HalfInt {
        self.a
    }
    pub fn b(&self) -> HalfInt {
        self.b
    }
    pub fn sigma(&self) -> HalfInt {
        self.sigma
    }
    pub fn x_min(&self) -> HalfInt {
        self.x_min
    }
    pub fn x_max(&self) -> HalfInt {
        self.x_max
    }
    pub fn delta_min(&self) -> HalfInt {
        self.delta_min
    }
    pub fn delta_max(&self) -> HalfInt {
        self.delta_max
    }

    /// Number of grid points along each axis.
    pub fn side(&self) -> usize {
        ((self.x_max.twice() - self.x_min.twice()) / 2 + 1) as usize
    }

    pub fn x_values(&self) -> impl Iterator<Item = HalfInt> {
        self.x_min.range_to(self.x_max)
    }

    pub fn delta_values(&self) -> impl Iterator<Item = HalfInt> {
        self.delta_min.range_to(self.delta_max)
    }

    pub fn x_index(&self, x: HalfInt) -> Option<usize> {
        let offset = x.twice() - self.x_min.twice();
        (offset >= 0 && offset % 2 == 0 && x <= self.x_max).then_some((offset / 2) as usize)
    }

    pub fn delta_index(&self, delta: HalfInt) -> Option<usize> {
        let offset = delta.twice() - self.delta_min.twice();
        (offset >= 0 && offset % 2 == 0 && delta <= self.delta_max).then_some((offset / 2) as usize)
    }

    pub fn x_at(&self, index: usize) -> HalfInt {
        HalfInt::from_twice(self.x_min.twice() + 2 * index as i64)
    }

    pub fn delta_at(&self, index: usize) -> HalfInt {
        HalfInt::from_twice(self.delta_min.twice() + 2 * index as i64)
    }

    /// The symbol sitting at grid point (x, delta):
    /// (a, b, x; sigma+delta, sigma-delta, -2sigma).
    pub fn args_at(&self, x: HalfInt, delta: HalfInt) -> Result<ThreeJArgs, ScreenError> {
        if self.x_index(x).is_none() || self.delta_index(delta).is_none() {
            return Err(ScreenError::OutOfScreen { x, delta });
        }
        let alpha = self.sigma + delta;
        let beta = self.sigma - delta;
        Ok(
            ThreeJArgs::new(self.a, self.b, x, alpha, beta, -(alpha + beta))
                .expect("screen grid points are structurally valid"),
        )
    }

    /// The four candidate range lengths, in doubled units minus... as counts.
    /// Shared between the x and delta axes; their minimum is the side.
    pub fn range_candidates(&self) -> [i64; 4] {
        let ta = self.a.twice();
        let tb = self.b.twice();
        let ts = self.sigma.twice();
        [
            ta + 1,
            tb + 1,
            (ta + tb) / 2 + ts + 1,
            (ta + tb) / 2 - ts + 1,
        ]
    }

    /// Lattice sigmas with a nonempty screen for this (a, b): |sigma| <= (a+b)/2.
    pub fn feasible_sigmas(a: HalfInt, b: HalfInt) -> Vec<HalfInt> {
        let bound = (a + b).twice() / 2;
        (-bound..=bound).map(HalfInt::from_twice).collect()
    }
}

/// Change of variables from projections to screen coordinates:
/// sigma = (alpha+beta)/2, delta = (alpha-beta)/2.
pub fn sigma_delta(alpha: HalfInt, beta: HalfInt) -> Result<(HalfInt, HalfInt), ScreenError> {
    let sum = alpha + beta;
    if sum.twice() % 2 != 0 {
        return Err(ScreenError::OffLattice(sum));
    }
    let sigma = sum.try_half().expect("checked even");
    let delta = (alpha - beta).try_half().expect("same parity as the sum");
    Ok((sigma, delta))
}

/// Inverse of [`sigma_delta`]: alpha = sigma+delta, beta = sigma-delta.
pub fn projections_from(sigma: HalfInt, delta: HalfInt) -> (HalfInt, HalfInt) {
    (sigma + delta, sigma - delta)
}
