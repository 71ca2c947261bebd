//! Exact arithmetic for the Artin-Hasse exponential at a prime p, the
//! divided-Bernoulli polynomials over F_p, and a harness that checks the
//! identities and congruences relating them.

pub mod artin_hasse;
pub mod error;
pub mod exact;
pub mod fp;
pub mod gamma;
pub mod verifier;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use artin_hasse::{compute_table, AHTable};
pub use error::{Error, Result};
pub use fp::{Fp2Elem, FpElem, FpPoly, PrimeField};
pub use verifier::{run_all, CheckName, CheckResult, Config, Status, VerificationReport};
