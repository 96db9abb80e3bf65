//! Exact and numerical Wigner 3j symbols on square Regge screens.

pub mod args;
pub mod eigen;
pub mod exact;
pub mod half_integer;
pub mod recurrence;
pub mod screen;
pub mod symmetry;

pub use args::{is_triangle, ArgsError, ThreeJArgs};
pub use exact::{cg_from_3j, exact_3j, exact_3j_strict, exact_u, ExactValue};
pub use half_integer::HalfInt;
pub use recurrence::{
    apply_sign_convention, build_delta_problem, build_x_problem, delta_coefficients, oracle_screen,
    solve_screen, solve_screen_with, u_value, x_coefficients, SolveError, SolveMethod, Tridiag,
    UMatrix,
};
pub use screen::{sigma_delta, ScreenError, ScreenSpec};
pub use symmetry::{
    canonicalize_args, canonicalize_spec, exchange_columns, is_canonical, mirror_transform,
    negate_projections, orbit, orbit_with_mirror, regge_transform, ColumnPair, Phase,
    SymmetryRecord,
};

pub mod semiclassics;

pub mod verify;
