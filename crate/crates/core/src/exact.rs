//! Exact 3j values as signed square roots of rationals.
//!
//! This is the independent oracle for everything the recurrence engine
//! produces: a single-sum factorial formula evaluated in big-integer
//! arithmetic, so that squares of 3j values are exact rationals.

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::args::ThreeJArgs;
use crate::half_integer::HalfInt;

static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// n! as a big integer, from a process-wide cache grown on demand.
pub fn factorial(n: u64) -> BigUint {
    {
        let cache = FACTORIALS.read().unwrap();
        if let Some(value) = cache.get(n as usize) {
            return value.clone();
        }
    }
    let mut cache = FACTORIALS.write().unwrap();
    if cache.is_empty() {
        cache.push(BigUint::one());
    }
    while cache.len() <= n as usize {
        let next = cache.last().unwrap() * BigUint::from(cache.len());
        cache.push(next);
    }
    cache[n as usize].clone()
}

/// A value of the form sign * sqrt(square) with `square` an exact rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactValue {
    sign: i8,
    square: BigRational,
}

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue {
            sign: 0,
            square: BigRational::zero(),
        }
    }

    /// Normalizes so that sign = 0 exactly when the square is zero.
    pub fn new(sign: i8, square: BigRational) -> Self {
        assert!(
            !square.is_negative(),
            "square of an exact value must be nonnegative"
        );
        if square.is_zero() {
            ExactValue::zero()
        } else {
            assert!(sign == 1 || sign == -1, "nonzero value needs sign +-1");
            ExactValue { sign, square }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn square(&self) -> &BigRational {
        &self.square
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Flips the sign when `odd` is true.
    pub fn with_phase(mut self, odd: bool) -> Self {
        if odd {
            self.sign = -self.sign;
        }
        self
    }

    /// Multiplies the represented value by sqrt(factor), `factor` integral.
    pub fn scale_square_by(mut self, factor: u64) -> Self {
        if factor == 0 {
            return ExactValue::zero();
        }
        self.square *= BigRational::from_integer(BigInt::from(factor));
        self
    }

    /// Nearest binary64 value, accurate to a couple of ulp even when the
    /// square itself is far outside the binary64 exponent range.
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * sqrt_rational_to_f64(&self.square)
    }
}

/// sqrt(p/q) as binary64 without materializing p/q in floating point.
fn sqrt_rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    // Rescale by an even power of two so the quotient has ~128 significant
    // bits, then take the root and undo half the shift.
    let mut shift: i64 = 128 + q.bits() as i64 - p.bits() as i64;
    if shift % 2 != 0 {
        shift += 1;
    }
    let scaled: BigUint = if shift >= 0 {
        (p << shift as u64) / q
    } else {
        p / (q << (-shift) as u64)
    };
    let root = scaled
        .to_f64()
        .expect("128-bit integer fits binary64 range")
        .sqrt();
    ldexp(root, -(shift / 2) as i32)
}

fn ldexp(x: f64, mut e: i32) -> f64 {
    let mut v = x;
    while e > 900 {
        v *= 2f64.powi(900);
        e -= 900;
    }
    while e < -900 {
        v *= 2f64.powi(-900);
        e += 900;
    }
    v * 2f64.powi(e)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("selection rules violated for ({0:?})")]
pub struct SelectionRuleViolation(pub ThreeJArgs);

/// Exact 3j symbol by the single-sum factorial formula.
///
/// Arguments failing the selection rules map to the zero value, matching the
/// usual convention; see [`exact_3j_strict`] for the checked variant.
pub fn exact_3j(args: &ThreeJArgs) -> ExactValue {
    if !args.selection_rules() {
        return ExactValue::zero();
    }

    let ta = args.a().twice();
    let tb = args.b().twice();
    let tx = args.x().twice();
    let talpha = args.alpha().twice();
    let tbeta = args.beta().twice();
    let tgamma = args.gamma().twice();

    // All combinations below are even in doubled units once the structural
    // invariants hold, so integer halving is exact.
    let half = |t: i64| -> i64 {
        debug_assert!(t % 2 == 0, "parity violation in factorial argument");
        t / 2
    };

    let t1 = half(ta + tb - tx);
    let t2 = half(ta - tb + tx);
    let t3 = half(-ta + tb + tx);
    let perim1 = half(ta + tb + tx) + 1;

    let jpm1 = half(ta + talpha);
    let jmm1 = half(ta - talpha);
    let jpm2 = half(tb + tbeta);
    let jmm2 = half(tb - tbeta);
    let jpm3 = half(tx + tgamma);
    let jmm3 = half(tx - tgamma);

    let kmin = 0.max(half(tb - tx - talpha)).max(half(ta - tx + tbeta));
    let kmax = t1.min(jmm1).min(jpm2);
    debug_assert!(kmin <= kmax, "selection rules guarantee a nonempty sum");

    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let mut denom = factorial(k as u64);
        denom *= factorial((t1 - k) as u64);
        denom *= factorial((jmm1 - k) as u64);
        denom *= factorial((jpm2 - k) as u64);
        denom *= factorial((half(tx - tb + talpha) + k) as u64);
        denom *= factorial((half(tx - ta - tbeta) + k) as u64);
        let term = BigRational::new(BigInt::one(), BigInt::from(denom));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return ExactValue::zero();
    }

    let triangle = BigRational::new(
        BigInt::from(factorial(t1 as u64) * factorial(t2 as u64) * factorial(t3 as u64)),
        BigInt::from(factorial(perim1 as u64)),
    );
    let mut projections = factorial(jpm1 as u64);
    projections *= factorial(jmm1 as u64);
    projections *= factorial(jpm2 as u64);
    projections *= factorial(jmm2 as u64);
    projections *= factorial(jpm3 as u64);
    projections *= factorial(jmm3 as u64);

    let square = triangle * BigRational::from_integer(BigInt::from(projections)) * (&sum * &sum);

    let phase_exponent = half(ta - tb - tgamma);
    let mut sign: i8 = if sum.is_positive() { 1 } else { -1 };
    if phase_exponent.rem_euclid(2) == 1 {
        sign = -sign;
    }
    ExactValue::new(sign, square)
}

/// As [`exact_3j`], but reports selection-rule violations instead of mapping
/// them to zero.
pub fn exact_3j_strict(args: &ThreeJArgs) -> Result<ExactValue, SelectionRuleViolation> {
    if args.selection_rules() {
        Ok(exact_3j(args))
    } else {
        Err(SelectionRuleViolation(*args))
    }
}

/// Clebsch-Gordan coefficient <a alpha, b beta | x -gamma> from the 3j value.
pub fn cg_from_3j(args: &ThreeJArgs) -> ExactValue {
    let exponent2 = args.a().twice() - args.b().twice() - args.gamma().twice();
    assert!(exponent2 % 2 == 0, "a-b-gamma must be an integer");
    let odd = (exponent2 / 2).rem_euclid(2) == 1;
    exact_3j(args)
        .scale_square_by((args.x().twice() + 1) as u64)
        .with_phase(odd)
}

/// U(x, delta) = sqrt(2x+1) * 3j, the orthonormal screen entry, exactly.
pub fn exact_u(args: &ThreeJArgs) -> ExactValue {
    exact_3j(args).scale_square_by((args.x().twice() + 1) as u64)
}

/// Range of x allowed by the triangle and projection constraints for fixed
/// (a, b, alpha, beta), in unit steps.
pub fn x_range(a: HalfInt, b: HalfInt, alpha: HalfInt, beta: HalfInt) -> (HalfInt, HalfInt) {
    let lo = crate::half_integer::max((a - b).abs(), (alpha + beta).abs());
    (lo, a + b)
}
