//! Exit statuses and the mapping from library errors onto them.

use multipole_core::harmonic::HarmonicError;
use multipole_core::multipole::MultipoleError;
use multipole_core::operator::OperatorError;
use multipole_core::oracle::OracleError;
use multipole_core::spinstate::SpinError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    CheckFailed = 1,
    Parse = 2,
    RankCap = 3,
    NotTraceless = 4,
    Pairing = 5,
    OrderAboveBand = 6,
    ZeroState = 7,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        CliError { status, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError::new(Status::Parse, message)
    }
}

fn harmonic_status(e: &HarmonicError) -> Status {
    match e {
        HarmonicError::NotTraceless(_) => Status::NotTraceless,
        HarmonicError::RankTooLarge(_) | HarmonicError::BandLimitTooHigh(_) => Status::RankCap,
        _ => Status::CheckFailed,
    }
}

fn spin_status(e: &SpinError) -> Status {
    match e {
        SpinError::ZeroState => Status::ZeroState,
        SpinError::SpinTooLarge(_) => Status::RankCap,
        SpinError::OrderAboveBand { .. } => Status::OrderAboveBand,
        SpinError::WrongLength { .. } | SpinError::ZeroDirection => Status::Parse,
        SpinError::Harmonic(h) => harmonic_status(h),
        _ => Status::CheckFailed,
    }
}

fn multipole_status(e: &MultipoleError) -> Status {
    match e {
        MultipoleError::NotTraceless(_) => Status::NotTraceless,
        MultipoleError::OrderTooLarge(_) => Status::RankCap,
        MultipoleError::PairingFailure(_) => Status::Pairing,
        MultipoleError::Harmonic(h) => harmonic_status(h),
        _ => Status::CheckFailed,
    }
}

fn oracle_status(e: &OracleError) -> Status {
    match e {
        OracleError::RankTooLarge(_) => Status::RankCap,
        OracleError::Spin(s) => spin_status(s),
        _ => Status::CheckFailed,
    }
}

impl From<HarmonicError> for CliError {
    fn from(e: HarmonicError) -> Self {
        CliError::new(harmonic_status(&e), e.to_string())
    }
}

impl From<SpinError> for CliError {
    fn from(e: SpinError) -> Self {
        CliError::new(spin_status(&e), e.to_string())
    }
}

impl From<MultipoleError> for CliError {
    fn from(e: MultipoleError) -> Self {
        CliError::new(multipole_status(&e), e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::new(oracle_status(&e), e.to_string())
    }
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        let status = match &e {
            OperatorError::NotTraceless(_) => Status::NotTraceless,
            OperatorError::RankTooLarge(_) => Status::RankCap,
            OperatorError::OrderAboveBand { .. } => Status::OrderAboveBand,
            OperatorError::ComplexComponent | OperatorError::KindMismatch { .. } | OperatorError::ClassicalTarget => {
                Status::Parse
            }
            OperatorError::Harmonic(h) => harmonic_status(h),
            OperatorError::Multipole(m) => multipole_status(m),
            OperatorError::Spin(s) => spin_status(s),
            OperatorError::Oracle(o) => oracle_status(o),
        };
        CliError::new(status, e.to_string())
    }
}
