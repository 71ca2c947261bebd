//! Result records shared by every check, and the aggregated report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

/// Stable identifiers of every check, in registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    URecursion,
    PIntegrality,
    DigitOracle,
    ModPRecursion,
    PropEvenSum,
    SkRelation,
    ClosedForms,
    ConjectureKOdd,
    ConjecturePolyForms,
    LemmaPound0,
    FeqGamma,
    FeqGammaSym,
    GammaParity,
    GammaReconstruction,
    GranvillePol,
    Nielsen,
    Faulhaber,
    PolylogSpecialValues,
    NumericSums,
    CorollarySixth,
    CorollaryEighth,
    ZagierIdentity,
    Wolstenholme,
    Lehmer,
}

impl CheckName {
    pub const ALL: [CheckName; 24] = [
        CheckName::URecursion,
        CheckName::PIntegrality,
        CheckName::DigitOracle,
        CheckName::ModPRecursion,
        CheckName::PropEvenSum,
        CheckName::SkRelation,
        CheckName::ClosedForms,
        CheckName::ConjectureKOdd,
        CheckName::ConjecturePolyForms,
        CheckName::LemmaPound0,
        CheckName::FeqGamma,
        CheckName::FeqGammaSym,
        CheckName::GammaParity,
        CheckName::GammaReconstruction,
        CheckName::GranvillePol,
        CheckName::Nielsen,
        CheckName::Faulhaber,
        CheckName::PolylogSpecialValues,
        CheckName::NumericSums,
        CheckName::CorollarySixth,
        CheckName::CorollaryEighth,
        CheckName::ZagierIdentity,
        CheckName::Wolstenholme,
        CheckName::Lehmer,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::URecursion => "u-recursion",
            CheckName::PIntegrality => "p-integrality",
            CheckName::DigitOracle => "digit-oracle",
            CheckName::ModPRecursion => "mod-p-recursion",
            CheckName::PropEvenSum => "prop-even-sum",
            CheckName::SkRelation => "sk-relation",
            CheckName::ClosedForms => "closed-forms",
            CheckName::ConjectureKOdd => "conjecture-k-odd",
            CheckName::ConjecturePolyForms => "conjecture-poly-forms",
            CheckName::LemmaPound0 => "lemma-pound0",
            CheckName::FeqGamma => "feq-gamma",
            CheckName::FeqGammaSym => "feq-gamma-sym",
            CheckName::GammaParity => "gamma-parity",
            CheckName::GammaReconstruction => "gamma-reconstruction",
            CheckName::GranvillePol => "granville-pol",
            CheckName::Nielsen => "nielsen",
            CheckName::Faulhaber => "faulhaber",
            CheckName::PolylogSpecialValues => "polylog-special-values",
            CheckName::NumericSums => "numeric-sums",
            CheckName::CorollarySixth => "corollary-sixth",
            CheckName::CorollaryEighth => "corollary-eighth",
            CheckName::ZagierIdentity => "zagier-identity",
            CheckName::Wolstenholme => "wolstenholme",
            CheckName::Lehmer => "lehmer",
        }
    }

    /// Whether the check reads the Artin-Hasse coefficient table.
    pub fn needs_table(self) -> bool {
        matches!(
            self,
            CheckName::URecursion
                | CheckName::PIntegrality
                | CheckName::DigitOracle
                | CheckName::ModPRecursion
                | CheckName::PropEvenSum
                | CheckName::SkRelation
                | CheckName::ClosedForms
                | CheckName::ConjectureKOdd
                | CheckName::ConjecturePolyForms
        )
    }

    pub fn valid_names() -> String {
        Self::ALL.map(|c| c.as_str()).join(", ")
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown check '{s}'; valid checks: {}",
                    Self::valid_names()
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A concrete instance contradicting the conjecture: a finding, not a bug.
    RefutedInstance,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::RefutedInstance => "refuted-instance",
            Status::Skipped => "skipped",
        }
    }
}

/// A witness side: a residue in [0, p), or free text for rationals and
/// extension-field values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Residue(u64),
    Text(String),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Residue(r) => write!(f, "{r}"),
            WitnessValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<u64> for WitnessValue {
    fn from(r: u64) -> Self {
        WitnessValue::Residue(r)
    }
}

impl From<crate::fp::FpElem> for WitnessValue {
    fn from(x: crate::fp::FpElem) -> Self {
        WitnessValue::Residue(x.value())
    }
}

impl From<String> for WitnessValue {
    fn from(s: String) -> Self {
        WitnessValue::Text(s)
    }
}

impl From<&str> for WitnessValue {
    fn from(s: &str) -> Self {
        WitnessValue::Text(s.to_owned())
    }
}

/// The first violating instance of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// What was being checked when the mismatch occurred (e.g. `form`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub what: Option<String>,
    /// Indices locating the instance (`k`, `x`, `degree`, ...).
    pub at: BTreeMap<String, i64>,
    pub lhs: WitnessValue,
    pub rhs: WitnessValue,
}

impl Witness {
    pub fn new(lhs: impl Into<WitnessValue>, rhs: impl Into<WitnessValue>) -> Self {
        Witness {
            what: None,
            at: BTreeMap::new(),
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }

    pub fn at(mut self, key: &str, value: i64) -> Self {
        self.at.insert(key.to_owned(), value);
        self
    }

    pub fn what(mut self, what: impl Into<String>) -> Self {
        self.what = Some(what.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: CheckName,
    pub prime: u64,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub witness: Option<Witness>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Values recorded without an asserted expectation.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, Value>,
}

impl CheckResult {
    pub fn new(name: CheckName, prime: u64) -> Self {
        CheckResult {
            name,
            prime,
            params: BTreeMap::new(),
            status: Status::Pass,
            witness: None,
            elapsed_ms: 0,
            note: None,
            observations: BTreeMap::new(),
        }
    }

    pub fn skipped(name: CheckName, prime: u64, reason: impl Into<String>) -> Self {
        CheckResult {
            status: Status::Skipped,
            note: Some(reason.into()),
            ..CheckResult::new(name, prime)
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_owned(), value.into());
    }

    pub fn observe(&mut self, key: &str, value: impl Into<Value>) {
        self.observations.insert(key.to_owned(), value.into());
    }

    /// Marks the check failed unless an earlier violation was recorded.
    pub fn fail(&mut self, witness: Witness) {
        self.violate(Status::Fail, witness);
    }

    pub fn refute(&mut self, witness: Witness) {
        self.violate(Status::RefutedInstance, witness);
    }

    fn violate(&mut self, status: Status, witness: Witness) {
        if self.witness.is_none() {
            self.status = status;
            self.witness = Some(witness);
        }
    }

    /// Compares two values and records the first mismatch.
    pub fn expect_eq<T>(&mut self, lhs: T, rhs: T, witness: impl FnOnce(T, T) -> Witness) -> bool
    where
        T: PartialEq,
    {
        if lhs == rhs {
            true
        } else {
            self.fail(witness(lhs, rhs));
            false
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Structural invariant: violations always carry a witness.
    pub fn is_well_formed(&self) -> bool {
        match self.status {
            Status::Fail | Status::RefutedInstance => self.witness.is_some(),
            Status::Pass | Status::Skipped => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    #[serde(rename = "refuted-instance")]
    pub refuted_instance: usize,
    pub skipped: usize,
}

impl Totals {
    pub fn add(&mut self, status: Status) {
        match status {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::RefutedInstance => self.refuted_instance += 1,
            Status::Skipped => self.skipped += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.refuted_instance + self.skipped
    }

    /// 0 when everything passed or was skipped, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.fail + self.refuted_instance > 0 {
            1
        } else {
            0
        }
    }
}

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub config_echo: Value,
    pub primes: Vec<PrimeReport>,
    pub totals: Totals,
}

impl VerificationReport {
    /// Sorts primes ascending and checks by registry order, then recounts.
    pub fn assemble(config_echo: Value, mut primes: Vec<PrimeReport>) -> Self {
        primes.sort_by_key(|r| r.p);
        let mut totals = Totals::default();
        for r in &mut primes {
            r.checks.sort_by_key(|c| c.name);
            for c in &r.checks {
                totals.add(c.status);
            }
        }
        VerificationReport {
            schema_version: SCHEMA_VERSION.to_owned(),
            config_echo,
            primes,
            totals,
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.primes.iter().flat_map(|r| r.checks.iter())
    }

    pub fn find(&self, p: u64, name: CheckName) -> Option<&CheckResult> {
        self.primes
            .iter()
            .find(|r| r.p == p)?
            .checks
            .iter()
            .find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        self.totals.exit_code()
    }

    /// Zeroes every timing field so two runs can be compared byte for byte.
    pub fn without_timings(mut self) -> Self {
        for r in &mut self.primes {
            for c in &mut r.checks {
                c.elapsed_ms = 0;
            }
        }
        self
    }
}
