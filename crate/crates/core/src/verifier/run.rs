//! Per-prime sweep over the check registry.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artin_hasse::{
    compute_table_until, verify_closed_forms, verify_digit_oracle, verify_mod_p_recursion,
    verify_p_integrality, verify_sk_relation, verify_u_recursion, compute_sk, AHTable,
};
use crate::error::{Error, Result};
use crate::exact::{primes_between, verify_lehmer, verify_wolstenholme, verify_zagier_identity};
use crate::gamma::{
    verify_corollary_eighth, verify_corollary_sixth, verify_faulhaber_check, verify_feq_gamma,
    verify_feq_gamma_sym, verify_gamma_parity, verify_gamma_reconstruction, verify_granville_pol,
    verify_lemma_pound0, verify_nielsen, verify_numeric_sums, verify_polylog_special_values,
};
use crate::verifier::conjecture::{
    verify_conjecture_numeric, verify_conjecture_poly_forms, verify_prop_even,
};
use crate::verifier::report::{CheckName, CheckResult, PrimeReport, VerificationReport, Witness};

/// Largest index the digit-formula oracle is compared at.
pub const DIGIT_ORACLE_NMAX: usize = 60;

/// Largest index the rational recursion and reduced denominators are
/// rechecked at; beyond it the gcds dominate the sweep.
pub const RATIONAL_RECHECK_NMAX: usize = 1000;

/// Sweep configuration. `None` depth fields select the per-prime defaults
/// described on [`Config::even_sum_kmax`], [`Config::table_depth`] and
/// [`Config::x_range`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub pmin: u64,
    pub pmax: u64,
    pub checks: Vec<CheckName>,
    /// Table depth N; overrides the derived default.
    pub max_n: Option<usize>,
    /// Even-sum range; clamped to p^2 - 2.
    pub kmax: Option<usize>,
    pub xmin: Option<i64>,
    pub xmax: Option<i64>,
    pub seed: u64,
    /// Worker threads; 1 runs primes serially.
    pub parallel: usize,
    /// Table-based checks are skipped above this prime.
    pub table_pmax: u64,
    pub budget_ms: Option<u64>,
    pub zagier_kmax: u64,
    pub lemma_trials: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            pmin: 3,
            pmax: 31,
            checks: CheckName::ALL.to_vec(),
            max_n: None,
            kmax: None,
            xmin: None,
            xmax: None,
            seed: 0,
            parallel: 1,
            table_pmax: 31,
            budget_ms: None,
            zagier_kmax: 200,
            lemma_trials: 20,
        }
    }
}

impl Config {
    /// Full range k < p^2 - 1 for p <= 7, otherwise at most 200.
    pub fn even_sum_kmax(&self, p: u64) -> usize {
        let full = (p * p - 2) as usize;
        let default = if p <= 7 { full } else { full.min(200) };
        self.kmax.unwrap_or(default).min(full)
    }

    /// Deep enough for every selected table check at p.
    pub fn table_depth(&self, p: u64) -> usize {
        if let Some(n) = self.max_n {
            return n;
        }
        let pu = p as usize;
        let mut need = 0;
        for &c in &self.checks {
            let n = match c {
                CheckName::PropEvenSum | CheckName::SkRelation => {
                    let k = self.even_sum_kmax(p);
                    // reach s_{p^2-1} as well where the full range is run
                    if k == pu * pu - 2 {
                        (pu * pu - 1) * pu
                    } else {
                        k * pu
                    }
                }
                CheckName::ConjectureKOdd | CheckName::ConjecturePolyForms => (pu - 1) * pu,
                CheckName::ClosedForms => 7 * pu,
                CheckName::DigitOracle => DIGIT_ORACLE_NMAX,
                CheckName::URecursion | CheckName::PIntegrality | CheckName::ModPRecursion => pu,
                _ => 0,
            };
            need = need.max(n);
        }
        need
    }

    /// [-3p^2, 3p^2] with p capped at 31 unless overridden.
    pub fn x_range(&self, p: u64) -> (i64, i64) {
        let c = p.min(31) as i64;
        (self.xmin.unwrap_or(-3 * c * c), self.xmax.unwrap_or(3 * c * c))
    }

    fn validate(&self) -> Result<()> {
        if self.pmin < 3 || self.pmin > self.pmax {
            return Err(Error::InvalidArgument(format!(
                "need 3 <= pmin <= pmax, got pmin={} pmax={}",
                self.pmin, self.pmax
            )));
        }
        if self.parallel == 0 {
            return Err(Error::InvalidArgument("parallel must be at least 1".into()));
        }
        if let (Some(a), Some(b)) = (self.xmin, self.xmax) {
            if a > b {
                return Err(Error::InvalidArgument(format!("xmin {a} exceeds xmax {b}")));
            }
        }
        Ok(())
    }

    fn selected(&self) -> Vec<CheckName> {
        CheckName::ALL
            .iter()
            .copied()
            .filter(|c| self.checks.contains(c))
            .collect()
    }
}

fn run_table_check(name: CheckName, table: &AHTable, config: &Config) -> Result<CheckResult> {
    let p = table.p();
    match name {
        CheckName::URecursion => verify_u_recursion(table, RATIONAL_RECHECK_NMAX),
        CheckName::PIntegrality => Ok(verify_p_integrality(table, RATIONAL_RECHECK_NMAX)),
        CheckName::DigitOracle => Ok(verify_digit_oracle(table, DIGIT_ORACLE_NMAX)),
        CheckName::ModPRecursion => Ok(verify_mod_p_recursion(table)),
        CheckName::PropEvenSum => verify_prop_even(table, config.even_sum_kmax(p)),
        CheckName::SkRelation => {
            Ok(verify_sk_relation(&compute_sk(table, config.even_sum_kmax(p))?))
        }
        CheckName::ClosedForms => verify_closed_forms(table),
        CheckName::ConjectureKOdd => verify_conjecture_numeric(table),
        CheckName::ConjecturePolyForms => verify_conjecture_poly_forms(table),
        other => unreachable!("{other} does not use the table"),
    }
}

fn run_plain_check(name: CheckName, p: u64, config: &Config) -> Result<CheckResult> {
    match name {
        CheckName::LemmaPound0 => verify_lemma_pound0(p, config.lemma_trials, config.seed),
        CheckName::FeqGamma => verify_feq_gamma(p),
        CheckName::FeqGammaSym => verify_feq_gamma_sym(p),
        CheckName::GammaParity => verify_gamma_parity(p),
        CheckName::GammaReconstruction => verify_gamma_reconstruction(p),
        CheckName::GranvillePol => verify_granville_pol(p),
        CheckName::Nielsen => {
            let (a, b) = config.x_range(p);
            verify_nielsen(p, a, b)
        }
        CheckName::Faulhaber => verify_faulhaber_check(p),
        CheckName::PolylogSpecialValues => verify_polylog_special_values(p),
        CheckName::NumericSums => verify_numeric_sums(p),
        CheckName::CorollarySixth => verify_corollary_sixth(p),
        CheckName::CorollaryEighth => verify_corollary_eighth(p),
        CheckName::ZagierIdentity => verify_zagier_identity(config.zagier_kmax).map(|mut r| {
            r.prime = p;
            r
        }),
        CheckName::Wolstenholme => verify_wolstenholme(p),
        CheckName::Lehmer => verify_lehmer(p),
        other => unreachable!("{other} needs the table"),
    }
}

/// Folds an error into the result: integrality violations are failures,
/// everything else is reported as skipped with the reason.
fn settle(name: CheckName, p: u64, outcome: Result<CheckResult>) -> CheckResult {
    match outcome {
        Ok(r) => r,
        Err(Error::NotPIntegral { value, .. }) if name == CheckName::PIntegrality => {
            let mut r = CheckResult::new(name, p);
            r.fail(Witness::new(value, "p-integral"));
            r
        }
        Err(e) => CheckResult::skipped(name, p, e.to_string()),
    }
}

fn timed(name: CheckName, p: u64, budget: Option<u64>, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    let start = Instant::now();
    let mut r = settle(name, p, f());
    let ms = start.elapsed().as_millis() as u64;
    r.elapsed_ms = ms;
    if let Some(b) = budget {
        if ms > b && r.passed() {
            let mut s = CheckResult::skipped(name, p, format!("exceeded budget of {b} ms"));
            s.elapsed_ms = ms;
            return s;
        }
    }
    r
}

/// Runs every selected check at one prime.
pub fn run_prime(p: u64, config: &Config) -> PrimeReport {
    let selected = config.selected();
    let table_checks: Vec<CheckName> = selected.iter().copied().filter(|c| c.needs_table()).collect();
    let mut checks = Vec::with_capacity(selected.len());

    if !table_checks.is_empty() {
        if p > config.table_pmax {
            for &c in &table_checks {
                checks.push(CheckResult::skipped(
                    c,
                    p,
                    format!("p above table cap {}", config.table_pmax),
                ));
            }
        } else {
            let depth = config.table_depth(p);
            let start = Instant::now();
            let deadline = config
                .budget_ms
                .map(|b| (start + std::time::Duration::from_millis(b), b));
            match compute_table_until(p, depth, deadline) {
                Ok(table) => {
                    for &c in &table_checks {
                        let mut r = timed(c, p, config.budget_ms, || run_table_check(c, &table, config));
                        r.set_param("table_n", depth);
                        checks.push(r);
                    }
                }
                Err(e) => {
                    for &c in &table_checks {
                        checks.push(settle(c, p, Err(e.clone())));
                    }
                }
            }
        }
    }
    for c in selected.into_iter().filter(|c| !c.needs_table()) {
        checks.push(timed(c, p, config.budget_ms, || run_plain_check(c, p, config)));
    }
    PrimeReport { p, checks }
}

/// Runs the configured sweep over all primes in [pmin, pmax].
pub fn run_all(config: &Config) -> Result<VerificationReport> {
    config.validate()?;
    let echo = serde_json::to_value(config)
        .map_err(|e| Error::ArithmeticFault(format!("config echo: {e}")))?;
    let primes = primes_between(config.pmin, config.pmax);
    let reports = if config.parallel == 1 {
        primes.iter().map(|&p| run_prime(p, config)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallel)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| primes.par_iter().map(|&p| run_prime(p, config)).collect())
    };
    Ok(VerificationReport::assemble(echo, reports))
}
