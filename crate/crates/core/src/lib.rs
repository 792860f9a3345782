//! Index engine for torus fixed-point localization data.
//!
//! The input is the fixed-point data of a torus action: per-component
//! tangent Chern roots, weighted normal lines, an optional graded auxiliary
//! bundle, orientation signs, and intersection numbers. The crate assembles
//! each component's localized integrand, integrates it exactly, and
//! averages the contributions over the torus. Individual contributions are meromorphic
//! and may diverge on their own; the sum is a Laurent polynomial, and the
//! exact engine certifies that cancellation by polynomial division. The
//! numeric engine extracts the same constant coefficient by trapezoidal
//! quadrature on chamber-shifted contours and is finite per component.
//!
//! Modules:
//! * [`algebra`]: Laurent polynomials and rational functions over exact
//!   rationals.
//! * [`series`]: truncated polynomial algebra in nilpotent Chern-root
//!   symbols.
//! * [`characteristic`]: genus factors, spinor/signature normal factors,
//!   equivariant Chern characters.
//! * [`localization`]: fixed-point data model, integrand assembly,
//!   built-in datasets, JSON format.
//! * [`averaging`]: the exact and numeric averaging engines, chambers,
//!   renormalized classes.
//! * [`selftest`]: the regression checks behind `selftest` and the
//!   acceptance suite.

pub mod algebra;
pub mod averaging;
pub mod characteristic;
pub mod localization;
pub mod report;
pub mod selftest;
pub mod series;

pub use algebra::{LaurentPoly, LaurentRational};
pub use averaging::{
    average_exact, average_numeric_fn, average_numeric_rational, ball_average, chamber_validate,
    compute_index, default_chamber, default_nodes, renormalized_class, Chamber, Engine, ExecMode,
    RunOptions,
};
pub use characteristic::{OperatorKind, Weight};
pub use localization::{builtin_dataset, builtin_names, Dataset, FixedComponent};
pub use report::IndexReport;
