//! Permutational, sign-flip, Regge and mirror symmetries of the 3j symbol,
//! orbit enumeration with phases, and canonicalization onto the screen
//! convention (the smallest of the four conjugate momenta becomes `a`).

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::args::ThreeJArgs;
use crate::exact::exact_3j;
use crate::half_integer::HalfInt;
use crate::screen::{sigma_delta, ScreenError, ScreenSpec};

/// Parity of a phase exponent: value(source) = (-1)^e * value(target).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Phase {
    odd: bool,
}

impl Phase {
    pub const EVEN: Phase = Phase { odd: false };
    pub const ODD: Phase = Phase { odd: true };

    /// Reduces an integer-valued exponent; panics when `e` is half-odd,
    /// which the structural invariants rule out.
    pub fn from_exponent(e: HalfInt) -> Phase {
        let n = e.as_integer().expect("phase exponent must be an integer");
        Phase {
            odd: n.rem_euclid(2) == 1,
        }
    }

    pub fn compose(self, other: Phase) -> Phase {
        Phase {
            odd: self.odd != other.odd,
        }
    }

    pub fn is_odd(self) -> bool {
        self.odd
    }

    /// Exponent reduced modulo 2.
    pub fn exponent(self) -> u8 {
        self.odd as u8
    }

    pub fn sign(self) -> i8 {
        if self.odd {
            -1
        } else {
            1
        }
    }

    pub fn sign_f64(self) -> f64 {
        if self.odd {
            -1.0
        } else {
            1.0
        }
    }
}

/// A symmetry relation value(source) = (-1)^phase * value(target).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymmetryRecord {
    pub source: ThreeJArgs,
    pub target: ThreeJArgs,
    pub phase: Phase,
}

impl SymmetryRecord {
    pub fn identity(args: ThreeJArgs) -> Self {
        SymmetryRecord {
            source: args,
            target: args,
            phase: Phase::EVEN,
        }
    }

    /// Chains `self` with a record rooted at `self.target`.
    pub fn then(self, next: SymmetryRecord) -> SymmetryRecord {
        debug_assert_eq!(self.target, next.source);
        SymmetryRecord {
            source: self.source,
            target: next.target,
            phase: self.phase.compose(next.phase),
        }
    }

    /// Exact check of the phase relation against the oracle.
    pub fn verify_exact(&self) -> bool {
        let s = exact_3j(&self.source);
        let t = exact_3j(&self.target);
        s.square() == t.square() && s.sign() == self.phase.sign() * t.sign()
    }
}

/// Which two columns of the symbol to exchange.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ColumnPair {
    AB,
    AX,
    BX,
}

/// Exchange of one column pair; odd permutation, phase (-1)^(a+b+x).
pub fn exchange_columns(args: &ThreeJArgs, which: ColumnPair) -> SymmetryRecord {
    let (a, b, x) = (args.a(), args.b(), args.x());
    let (al, be, ga) = (args.alpha(), args.beta(), args.gamma());
    let (ta, tb, tx, tal, tbe, tga) = match which {
        ColumnPair::AB => (b, a, x, be, al, ga),
        ColumnPair::AX => (x, b, a, ga, be, al),
        ColumnPair::BX => (a, x, b, al, ga, be),
    };
    let target = ThreeJArgs::new(ta, tb, tx, tal, tbe, tga)
        .expect("column exchange preserves structural validity");
    SymmetryRecord {
        source: *args,
        target,
        phase: Phase::from_exponent(a + b + x),
    }
}

/// Sign flip of all projections; phase (-1)^(a+b+x). In screen coordinates
/// this maps (sigma, delta) to (-sigma, -delta).
pub fn negate_projections(args: &ThreeJArgs) -> SymmetryRecord {
    let target = ThreeJArgs::new(
        args.a(),
        args.b(),
        args.x(),
        -args.alpha(),
        -args.beta(),
        -args.gamma(),
    )
    .expect("projection negation preserves structural validity");
    SymmetryRecord {
        source: *args,
        target,
        phase: Phase::from_exponent(args.a() + args.b() + args.x()),
    }
}

/// The Regge symmetry that keeps x and delta fixed:
/// (a, b) -> ((a+b)/2 +- sigma), sigma -> (a-b)/2, gamma -> b-a. An exact
/// equality (even phase) and an involution.
pub fn regge_transform(args: &ThreeJArgs) -> SymmetryRecord {
    let half = |v: HalfInt| {
        v.try_half()
            .expect("parity guaranteed by structural invariants")
    };
    let (a, b) = (args.a(), args.b());
    let (al, be) = (args.alpha(), args.beta());
    let ta = half(a + b + al + be);
    let tb = half(a + b - al - be);
    let tal = half(a - b + al - be);
    let tbe = half(a - b - al + be);
    let target = ThreeJArgs::new(ta, tb, args.x(), tal, tbe, b - a)
        .expect("Regge conjugate is structurally valid");
    SymmetryRecord {
        source: *args,
        target,
        phase: Phase::EVEN,
    }
}

/// A formal symbol whose x entry may be negative (mirror continuation).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FormalSymbol {
    pub a: HalfInt,
    pub b: HalfInt,
    pub x: HalfInt,
    pub alpha: HalfInt,
    pub beta: HalfInt,
    pub gamma: HalfInt,
}

impl From<ThreeJArgs> for FormalSymbol {
    fn from(args: ThreeJArgs) -> Self {
        FormalSymbol {
            a: args.a(),
            b: args.b(),
            x: args.x(),
            alpha: args.alpha(),
            beta: args.beta(),
            gamma: args.gamma(),
        }
    }
}

impl FormalSymbol {
    pub fn is_physical(&self) -> bool {
        !self.a.is_negative() && !self.b.is_negative() && !self.x.is_negative()
    }
}

/// value(source) = (-1)^phase * value(target), target possibly non-physical.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MirrorRecord {
    pub source: ThreeJArgs,
    pub target: FormalSymbol,
    pub phase: Phase,
}

/// The substitution x -> -x-1 with phase (-1)^(b-x-a).
///
/// The exponent is always taken with the physical member of the pair
/// {x, -x-1}, which makes the relation symmetric: applying the map twice
/// returns the source with total phase +1.
pub fn mirror_transform(args: &ThreeJArgs) -> MirrorRecord {
    let target = FormalSymbol {
        x: -args.x() - HalfInt::ONE,
        ..FormalSymbol::from(*args)
    };
    MirrorRecord {
        source: *args,
        target,
        phase: Phase::from_exponent(args.b() - args.x() - args.a()),
    }
}

/// x -> -x-1 on a formal symbol; returns the image and the phase of the step.
pub fn mirror_formal(sym: &FormalSymbol) -> (FormalSymbol, Phase) {
    let image = FormalSymbol {
        x: -sym.x - HalfInt::ONE,
        ..*sym
    };
    let physical_x = crate::half_integer::max(sym.x, image.x);
    (image, Phase::from_exponent(sym.b - physical_x - sym.a))
}

/// Closure of the source under column exchanges, projection negation and the
/// Regge transform. Every record satisfies the phase relation exactly; the
/// size always divides 72. Mirror images are excluded; see
/// [`orbit_with_mirror`].
pub fn orbit(args: &ThreeJArgs) -> Vec<SymmetryRecord> {
    let mut visited: HashMap<[i64; 6], SymmetryRecord> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = SymmetryRecord::identity(*args);
    visited.insert(args.key(), start);
    queue.push_back(start);

    while let Some(record) = queue.pop_front() {
        let neighbors = [
            exchange_columns(&record.target, ColumnPair::AB),
            exchange_columns(&record.target, ColumnPair::AX),
            exchange_columns(&record.target, ColumnPair::BX),
            negate_projections(&record.target),
            regge_transform(&record.target),
        ];
        for step in neighbors {
            let chained = record.then(step);
            if let std::collections::hash_map::Entry::Vacant(slot) =
                visited.entry(chained.target.key())
            {
                slot.insert(chained);
                queue.push_back(chained);
            }
        }
    }

    let mut members: Vec<SymmetryRecord> = visited.into_values().collect();
    members.sort_by_key(|r| r.target.key());
    members
}

/// The orbit plus the mirror image of every member.
pub fn orbit_with_mirror(args: &ThreeJArgs) -> (Vec<SymmetryRecord>, Vec<MirrorRecord>) {
    let members = orbit(args);
    let mirrors = members
        .iter()
        .map(|record| {
            let step = mirror_transform(&record.target);
            MirrorRecord {
                source: record.source,
                target: step.target,
                phase: record.phase.compose(step.phase),
            }
        })
        .collect();
    (members, mirrors)
}

/// How one screen maps onto its canonical conjugate: x is invariant, delta
/// may flip, and each (a+b+x)-phase-carrying generator used contributes one
/// factor (-1)^(a+b+x).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ScreenTransform {
    pub delta_flip: bool,
    pub phase_per_x: bool,
}

impl ScreenTransform {
    pub fn is_identity(&self) -> bool {
        !self.delta_flip && !self.phase_per_x
    }

    pub fn map_delta(&self, delta: HalfInt) -> HalfInt {
        if self.delta_flip {
            -delta
        } else {
            delta
        }
    }

    /// Phase of the relation at abscissa x on a screen with the given a+b.
    pub fn phase_at(&self, a_plus_b: HalfInt, x: HalfInt) -> Phase {
        if self.phase_per_x {
            Phase::from_exponent(a_plus_b + x)
        } else {
            Phase::EVEN
        }
    }
}

impl fmt::Display for ScreenTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "identity");
        }
        let delta = if self.delta_flip {
            "delta -> -delta"
        } else {
            "delta -> delta"
        };
        let phase = if self.phase_per_x {
            ", phase (-1)^(a+b+x)"
        } else {
            ""
        };
        write!(f, "{delta}{phase}")
    }
}

/// Canonicalizes a screen triple: among the conjugates reachable by column
/// exchange, projection negation and the Regge transform, picks the one with
/// minimal a, then minimal b, then sigma >= 0.
pub fn canonicalize_spec(
    a: HalfInt,
    b: HalfInt,
    sigma: HalfInt,
) -> Result<(ScreenSpec, ScreenTransform), ScreenError> {
    // Validates feasibility up front so the conjugate search runs on a real screen.
    ScreenSpec::new(a, b, sigma)?;

    #[derive(Clone, Copy)]
    struct State {
        a: HalfInt,
        b: HalfInt,
        sigma: HalfInt,
        transform: ScreenTransform,
    }

    let start = State {
        a,
        b,
        sigma,
        transform: ScreenTransform::default(),
    };
    let mut visited: HashMap<[i64; 3], State> = HashMap::new();
    let mut queue = VecDeque::new();
    visited.insert([a.twice(), b.twice(), sigma.twice()], start);
    queue.push_back(start);

    while let Some(state) = queue.pop_front() {
        let half_sum = (state.a + state.b)
            .try_half()
            .expect("a+b integral on screens");
        let half_diff = (state.a - state.b).try_half().expect("same parity");
        let next_states = [
            // column exchange a <-> b: delta flips, one phase factor
            State {
                a: state.b,
                b: state.a,
                sigma: state.sigma,
                transform: ScreenTransform {
                    delta_flip: !state.transform.delta_flip,
                    phase_per_x: !state.transform.phase_per_x,
                },
            },
            // projection negation: sigma and delta flip, one phase factor
            State {
                a: state.a,
                b: state.b,
                sigma: -state.sigma,
                transform: ScreenTransform {
                    delta_flip: !state.transform.delta_flip,
                    phase_per_x: !state.transform.phase_per_x,
                },
            },
            // Regge conjugation: x and delta invariant, no phase
            State {
                a: half_sum + state.sigma,
                b: half_sum - state.sigma,
                sigma: half_diff,
                transform: state.transform,
            },
        ];
        for next in next_states {
            let key = [next.a.twice(), next.b.twice(), next.sigma.twice()];
            visited.entry(key).or_insert_with(|| {
                queue.push_back(next);
                next
            });
        }
    }

    let winner = visited
        .values()
        .min_by_key(|s| (s.a, s.b, s.sigma.is_negative()))
        .expect("closure contains at least the start state");
    let spec = ScreenSpec::new(winner.a, winner.b, winner.sigma)
        .expect("conjugates of a feasible screen are feasible");
    Ok((spec, winner.transform))
}

/// True when the triple already satisfies the canonical convention.
pub fn is_canonical(spec: &ScreenSpec) -> bool {
    match canonicalize_spec(spec.a(), spec.b(), spec.sigma()) {
        Ok((canonical, _)) => canonical == *spec,
        Err(_) => false,
    }
}

/// Canonicalizes a full symbol: returns the canonical screen together with
/// the record mapping the symbol onto its grid position there.
pub fn canonicalize_args(args: &ThreeJArgs) -> Result<(ScreenSpec, SymmetryRecord), ScreenError> {
    let (sigma, delta) = sigma_delta(args.alpha(), args.beta())?;
    let (spec, transform) = canonicalize_spec(args.a(), args.b(), sigma)?;
    let target = spec.args_at(args.x(), transform.map_delta(delta))?;
    let phase = transform.phase_at(args.a() + args.b(), args.x());
    Ok((
        spec,
        SymmetryRecord {
            source: *args,
            target,
            phase,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_3j;
    use proptest::prelude::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn args(t: [i64; 6]) -> ThreeJArgs {
        ThreeJArgs::from_twice(t[0], t[1], t[2], t[3], t[4], t[5]).unwrap()
    }

    #[test]
    fn column_exchange_swaps_and_phases() {
        let src = args([2, 6, 4, 2, -2, 0]);
        let rec = exchange_columns(&src, ColumnPair::AB);
        assert_eq!(rec.target, args([6, 2, 4, -2, 2, 0]));
        assert!(rec.phase.is_odd() == ((1 + 3 + 2) % 2 == 1));
        assert!(rec.verify_exact());
    }

    #[test]
    fn cyclic_permutation_has_even_phase() {
        let src = args([2, 6, 4, 2, -2, 0]);
        // (a,b,x) -> (b,x,a) by two exchanges
        let first = exchange_columns(&src, ColumnPair::AB);
        let second = exchange_columns(&first.target, ColumnPair::BX);
        let cyclic = first.then(second);
        assert!(!cyclic.phase.is_odd());
        assert!(cyclic.verify_exact());
    }

    #[test]
    fn swapped_equal_columns_reproduce_oracle_value() {
        let src = args([2, 2, 4, 0, 0, 0]);
        let rec = exchange_columns(&src, ColumnPair::AB);
        assert_eq!(rec.target, src);
        assert!(!rec.phase.is_odd()); // (-1)^4
        assert!(rec.verify_exact());
    }

    #[test]
    fn negation_self_maps() {
        // (1,3,2;0,0,0): phase (-1)^6 = +1
        let rec = negate_projections(&args([2, 6, 4, 0, 0, 0]));
        assert_eq!(rec.source, rec.target);
        assert!(!rec.phase.is_odd());

        // (1,1,1;0,0,0): phase (-1)^3 = -1 forces a zero value
        let rec = negate_projections(&args([2, 2, 2, 0, 0, 0]));
        assert_eq!(rec.source, rec.target);
        assert!(rec.phase.is_odd());
        assert!(exact_3j(&rec.source).is_zero());
        assert!(rec.verify_exact());
    }

    #[test]
    fn negation_flips_screen_coordinates() {
        // (sigma, delta) = (1/2, 1/2) -> (-1/2, -1/2)
        let src = args([2, 2, 2, 2, 0, -2]);
        let (s, d) = sigma_delta(src.alpha(), src.beta()).unwrap();
        assert_eq!((s.twice(), d.twice()), (1, 1));
        let rec = negate_projections(&src);
        let (s, d) = sigma_delta(rec.target.alpha(), rec.target.beta()).unwrap();
        assert_eq!((s.twice(), d.twice()), (-1, -1));
    }

    #[test]
    fn regge_matches_direct_substitution() {
        // (2,2,x;1+delta,1-delta,-2) -> (3,1,x;delta,-delta,0) at delta=0, x=2
        let rec = regge_transform(&args([4, 4, 4, 2, 2, -4]));
        assert_eq!(rec.target, args([6, 2, 4, 0, 0, 0]));
        assert!(!rec.phase.is_odd());
        assert!(rec.verify_exact());

        // value check from both oracle sides
        let lhs = exact_3j(&args([4, 4, 4, 2, 2, -4]));
        let rhs = exact_3j(&args([6, 2, 4, 0, 0, 0]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn regge_is_an_involution() {
        for t in [[2, 6, 4, 0, 0, 0], [4, 4, 4, 2, 2, -4], [5, 3, 2, -3, 3, 0]] {
            let src = args(t);
            let rec = regge_transform(&src).then(regge_transform(&regge_transform(&src).target));
            assert_eq!(rec.target, src);
            assert!(!rec.phase.is_odd());
        }
    }

    #[test]
    fn mirror_examples() {
        // (1,3,2;0,0,0) -> x' = -3, exponent b-x-a = 0
        let rec = mirror_transform(&args([2, 6, 4, 0, 0, 0]));
        assert_eq!(rec.target.x.twice(), -6);
        assert!(!rec.phase.is_odd());
        assert!(!rec.target.is_physical());

        // (1/2,1/2,1;...): exponent 1/2-1-1/2 = -1 -> phase -1
        let rec = mirror_transform(&args([1, 1, 2, 1, -1, 0]));
        assert_eq!(rec.target.x.twice(), -4);
        assert!(rec.phase.is_odd());
    }

    #[test]
    fn mirror_twice_is_identity_with_even_total_phase() {
        for t in [[2, 6, 4, 0, 0, 0], [1, 1, 2, 1, -1, 0], [4, 4, 4, 2, 2, -4]] {
            let src = args(t);
            let first = mirror_transform(&src);
            let (back, second_phase) = mirror_formal(&first.target);
            assert_eq!(back, FormalSymbol::from(src));
            assert!(!first.phase.compose(second_phase).is_odd());
        }
    }

    #[test]
    fn orbit_of_trivial_symbol_is_a_fixed_point() {
        let members = orbit(&args([0, 0, 0, 0, 0, 0]));
        assert_eq!(members.len(), 1);
    }

    #[test]
    fn orbit_of_generic_symbol_has_72_members_all_phase_consistent() {
        // (1, 5/2, 7/2; 0, -1/2, 1/2) has a trivial stabilizer
        let members = orbit(&args([2, 5, 7, 0, -1, 1]));
        assert_eq!(members.len(), 72);
        for record in &members {
            assert!(record.verify_exact(), "record {record:?}");
        }
    }

    #[test]
    fn orbit_contains_the_companion_regge_symmetry() {
        // the companion Regge identity keeps a and mixes (b, x) with the
        // projections; by direct substitution:
        // (a, (b+x-beta-gamma)/2, (b+x+beta+gamma)/2;
        //  b-x, (x-b+beta-gamma)/2, (x-b-beta+gamma)/2)
        let src = args([2, 5, 7, 0, -1, 1]);
        let half = |v: HalfInt| v.try_half().unwrap();
        let (b, x) = (src.b(), src.x());
        let (be, ga) = (src.beta(), src.gamma());
        let image = ThreeJArgs::new(
            src.a(),
            half(b + x - be - ga),
            half(b + x + be + ga),
            b - x,
            half(x - b + be - ga),
            half(x - b - be + ga),
        )
        .unwrap();

        let members = orbit(&src);
        let found = members
            .iter()
            .find(|r| r.target == image)
            .expect("closure must reproduce the companion Regge symmetry");
        assert!(found.verify_exact());
        // the companion identity is an exact equality
        assert_eq!(exact_3j(&src), exact_3j(&image));
        assert!(!found.phase.is_odd());
    }

    #[test]
    fn orbit_with_mirror_appends_formal_images() {
        let (members, mirrors) = orbit_with_mirror(&args([2, 6, 4, 0, 0, 0]));
        assert_eq!(members.len(), mirrors.len());
        assert!(mirrors.iter().all(|m| !m.target.is_physical()));
    }

    #[test]
    fn canonicalize_spec_examples() {
        // (1,3,0) is already canonical, 3x3 screen
        let (spec, t) = canonicalize_spec(h(2), h(6), h(0)).unwrap();
        assert_eq!((spec.a(), spec.b(), spec.sigma()), (h(2), h(6), h(0)));
        assert!(t.is_identity());
        assert_eq!(spec.side(), 3);

        // (2,2,1) canonicalizes to (1,3,0)
        let (spec, _) = canonicalize_spec(h(4), h(4), h(2)).unwrap();
        assert_eq!((spec.a(), spec.b(), spec.sigma()), (h(2), h(6), h(0)));

        // (3,1,1): minimum of {3, 1, 3, 1} is 1
        let (spec, _) = canonicalize_spec(h(6), h(2), h(2)).unwrap();
        assert_eq!(spec.a(), h(2));
        assert_eq!(spec.side(), 3);
    }

    #[test]
    fn canonical_sigma_is_nonnegative() {
        let (spec, _) = canonicalize_spec(h(2), h(6), h(-2)).unwrap();
        assert!(!spec.sigma().is_negative());
        assert_eq!((spec.a(), spec.b(), spec.sigma()), (h(2), h(6), h(2)));
    }

    #[test]
    fn canonicalize_args_lands_on_the_canonical_grid() {
        let src = args([4, 4, 4, 2, 2, -4]); // (2,2,x;1+delta,...) family at delta=0
        let (spec, record) = canonicalize_args(&src).unwrap();
        assert_eq!((spec.a(), spec.b(), spec.sigma()), (h(2), h(6), h(0)));
        assert_eq!(record.target.x(), src.x());
        assert!(record.verify_exact());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for (ta, tb, ts) in [(4, 4, 2), (2, 6, -2), (6, 2, 2), (5, 7, 3), (0, 8, 4)] {
            let (spec, _) = canonicalize_spec(h(ta), h(tb), h(ts)).unwrap();
            let (again, transform) = canonicalize_spec(spec.a(), spec.b(), spec.sigma()).unwrap();
            assert_eq!(spec, again);
            assert!(transform.is_identity());
            assert!(is_canonical(&spec));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Orbit sizes divide 72 and every record is exactly phase-consistent.
        #[test]
        fn orbit_divides_72_and_is_consistent(
            ta in 0i64..5, tb in 0i64..5, kx in 0i64..5, ka in 0i64..11, kb in 0i64..11,
        ) {
            let tx_lo = (ta - tb).abs();
            let tx = tx_lo + 2 * (kx % (((ta + tb - tx_lo) / 2) + 1));
            let talpha = -ta + 2 * (ka % (ta + 1));
            let tbeta_lo = (-tb).max(-tx - talpha);
            let tbeta_hi = tb.min(tx - talpha);
            prop_assume!(tbeta_lo <= tbeta_hi);
            let span = (tbeta_hi - tbeta_lo) / 2 + 1;
            let tbeta = tbeta_lo + 2 * (kb % span);
            let src = ThreeJArgs::from_twice(ta, tb, tx, talpha, tbeta, -talpha - tbeta).unwrap();

            let members = orbit(&src);
            prop_assert_eq!(72 % members.len(), 0);
            for record in &members {
                prop_assert!(record.verify_exact());
            }
        }

        /// Canonical screens have side 2a+1 and x/delta ranges of equal length.
        #[test]
        fn canonical_screen_is_2a_plus_1(ta in 0i64..30, tb in 0i64..30, ts in -30i64..30) {
            prop_assume!((ta + tb) % 2 == 0);
            prop_assume!(ts.abs() <= (ta + tb) / 2);
            let (spec, _) = canonicalize_spec(h(ta), h(tb), h(ts)).unwrap();
            prop_assert_eq!(spec.side() as i64, spec.a().twice() + 1);
            prop_assert!(spec.a() <= spec.b());
        }
    }
}
