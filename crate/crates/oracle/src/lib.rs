//! Numerical critical-point oracle for real polynomials.

pub mod critical;
pub mod error;
pub mod family;
pub mod fixture;
mod parse;
pub mod poly;
pub mod versal;

pub use critical::{
    critical_points, ind_of_report, local_multiplicity, CriticalOptions, CriticalPoint, CriticalReport,
};
pub use error::OracleError;
pub use family::{family_scan, j_residual, solve_j_equation, Family, ScanReport, ScanSample};
pub use fixture::{
    builtin_family, builtin_fixture, check_fixture, family_names, fixture_check, fixture_names, load_fixture_dir,
    Fixture, FixtureOutcome,
};
pub use parse::parse_constant;
pub use poly::{Derivatives, Monomial, Polynomial};
pub use versal::{lambda_count, normal_form, t_translate, versal_polynomial};
