//! Check orchestration and reports.

pub mod conjecture;
pub mod report;
pub mod run;

pub use conjecture::{
    conjecture_lhs, conjecture_rhs, verify_conjecture_numeric, verify_conjecture_poly_forms,
    verify_prop_even,
};
pub use report::{
    CheckName, CheckResult, PrimeReport, Status, Totals, VerificationReport, Witness,
    WitnessValue, SCHEMA_VERSION,
};
pub use run::{run_all, run_prime, Config, DIGIT_ORACLE_NMAX, RATIONAL_RECHECK_NMAX};
