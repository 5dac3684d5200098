use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, DEFAULT_CAP};

use super::table::OutputFormat;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const MIN_TOLERANCE: f64 = 1e-12;
pub const MAX_TOLERANCE: f64 = 1e-4;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CRITERIA_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub qs: Vec<u32>,
    pub tolerance: f64,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub verbosity: u8,
    /// Overrides the number of random Hecke functions per character.
    pub samples: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            qs: vec![3, 5, 7],
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            format: OutputFormat::Csv,
            out: None,
            verbosity: 0,
            samples: None,
        }
    }
}

impl RunConfig {
    /// Rejects anything that would fail later, before any computation runs.
    pub fn validate(&self) -> Result<()> {
        if self.qs.is_empty() {
            return Err(Error::Config("at least one q is required".into()));
        }
        for &q in &self.qs {
            FieldCtx::check_modulus(q, DEFAULT_CAP).map_err(|e| Error::Config(format!("q = {q}: {e}")))?;
        }
        let t = self.tolerance;
        if !(MIN_TOLERANCE..=MAX_TOLERANCE).contains(&t) {
            return Err(Error::Config(format!(
                "tolerance {t:e} outside [{MIN_TOLERANCE:e}, {MAX_TOLERANCE:e}]"
            )));
        }
        if self.samples == Some(0) {
            return Err(Error::Config("samples must be positive".into()));
        }
        Ok(())
    }

    /// Sorted, deduplicated q list.
    pub fn normalized_qs(&self) -> Vec<u32> {
        let mut qs = self.qs.clone();
        qs.sort_unstable();
        qs.dedup();
        qs
    }
}

/// Exit code for an error that aborted a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Io { .. }
        | Error::NonPrime(_)
        | Error::EvenCharacteristic
        | Error::CapExceeded { .. }
        | Error::NotAConstituent { .. }
        | Error::NotCuspidal { .. }
        | Error::SingularParameter { .. }
        | Error::UnsupportedInterpretation(_)
        | Error::ZeroElement
        | Error::DomainMismatch { .. }
        | Error::ContextMismatch { .. } => exit::CONFIG,
        Error::ValidationFailed { .. }
        | Error::NotBiEquivariant { .. }
        | Error::NonIntegralMultiplicity { .. }
        | Error::NegativeResidual { .. }
        | Error::ZeroFunction
        | Error::DegenerateChannel { .. } => exit::INTERNAL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(f: impl FnOnce(&mut RunConfig)) -> RunConfig {
        let mut c = RunConfig::default();
        f(&mut c);
        c
    }

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::default().tolerance, 1e-8);
    }

    #[test]
    fn bad_moduli_are_config_errors() {
        for q in [4, 2, 9, 37] {
            let err = with(|c| c.qs = vec![3, q]).validate().unwrap_err();
            assert!(matches!(err, Error::Config(_)), "{q}");
            assert_eq!(exit_code(&err), exit::CONFIG);
        }
    }

    #[test]
    fn tolerance_window() {
        assert!(with(|c| c.tolerance = 1e-20).validate().is_err());
        assert!(with(|c| c.tolerance = 1e-3).validate().is_err());
        assert!(with(|c| c.tolerance = f64::NAN).validate().is_err());
        with(|c| c.tolerance = 1e-12).validate().unwrap();
        with(|c| c.tolerance = 1e-4).validate().unwrap();
    }

    #[test]
    fn qs_are_normalized() {
        assert_eq!(with(|c| c.qs = vec![7, 3, 7]).normalized_qs(), vec![3, 7]);
    }
}
