//! Exact-arithmetic wall-crossing calculus for tilt stability on a
//! smooth cubic threefold.
//!
//! The crate mechanizes the numerical side of a wall-crossing case
//! analysis: Chern-character lattice arithmetic and Euler pairings
//! ([`lattice`]), the geometry of numerical walls in the `(α, β)` plane
//! ([`tilt`]), the rank-2 lattice of the Kuznetsov component
//! ([`kuznetsov`]), and bounded exhaustive searches for candidate
//! destabilizers ([`wallfinder`]) — all over exact rationals and
//! quadratic irrationals ([`exactnum`]), never floating point.
//!
//! A narrative guide with worked examples lives in the `book/` directory
//! of the repository; its code snippets are compiled as doc-tests.

pub mod exactnum;
pub mod kuznetsov;
pub mod lattice;
pub mod tilt;
pub mod wallfinder;

pub use exactnum::{parse_rational, rat, ratio, QuadraticValue, Rational};
pub use lattice::{chi1, chi2, curve_characters, nu, ChernCharacter, TruncatedCharacter, Variety};
pub use tilt::{
    beta_pm, central_charge, li_admissible, numerical_wall, region_v_contains, slope_cmp,
    wall_alpha_sq_at, zero_slope_locus, HalfPlanePoint, LiVerdict, WallLocus,
};
pub use kuznetsov::{
    expected_dim, from_chern, ku_numeric_membership, pairing_matrix, serre_apply, serre_orbit,
    to_chern, KuClass,
};
pub use wallfinder::{
    derived_bound_report, oplus_exclusion, scan_region_left, scan_vertical, CandidatePair,
    FilterSet, ScanBounds, ScanReport,
};
