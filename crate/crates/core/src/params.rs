//! Physical parameters of the coupled system
//!
//! `H = -∂²ₓ/2m - ∂²_y/2M + mω²x²/2 + MΩ²y²/2 + c·x·y` with ħ = 1 and the
//! coupling expressed through the dimensionless `δ = c / (√(mM)·ω·Ω)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },
    #[error("coupling |delta| must be < 1, got {0}")]
    CouplingOutOfRange(f64),
    #[error("frequencies must satisfy Omega < omega, got Omega={big_omega}, omega={omega}")]
    FrequencyOrderViolation { omega: f64, big_omega: f64 },
    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },
}

impl ParamsError {
    pub fn name(&self) -> &'static str {
        match self {
            ParamsError::NonPositiveParameter { .. } => "NonPositiveParameter",
            ParamsError::NonFiniteParameter { .. } => "NonFiniteParameter",
            ParamsError::CouplingOutOfRange(_) => "CouplingOutOfRange",
            ParamsError::FrequencyOrderViolation { .. } => "FrequencyOrderViolation",
            ParamsError::ConfigSyntax { .. } => "ConfigSyntax",
        }
    }
}

/// Unvalidated parameter record, as read from flags or a config file.
///
/// The default is the setting used for most published datasets:
/// `m = M = ω = 1`, `Ω = 0.2`, `δ = 0.6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    pub m: f64,
    pub big_m: f64,
    pub omega: f64,
    pub big_omega: f64,
    pub delta: f64,
}

impl Default for RawParams {
    fn default() -> Self {
        RawParams { m: 1.0, big_m: 1.0, omega: 1.0, big_omega: 0.2, delta: 0.6 }
    }
}

impl RawParams {
    /// Overrides fields from `key = value` lines. Keys: `m`, `M`, `omega`,
    /// `Omega`, `delta`. Blank lines and `#` comments are ignored.
    pub fn apply_config(&mut self, text: &str) -> Result<(), ParamsError> {
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ParamsError::ConfigSyntax {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| ParamsError::ConfigSyntax {
                line: line_no,
                message: format!("`{}` is not a number", value.trim()),
            })?;
            match key {
                "m" => self.m = value,
                "M" => self.big_m = value,
                "omega" => self.omega = value,
                "Omega" => self.big_omega = value,
                "delta" => self.delta = value,
                other => {
                    return Err(ParamsError::ConfigSyntax {
                        line: line_no,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        Ok(())
    }

    pub fn from_config(text: &str) -> Result<Self, ParamsError> {
        let mut raw = RawParams::default();
        raw.apply_config(text)?;
        Ok(raw)
    }

    pub fn validate(self) -> Result<SystemParams, ParamsError> {
        SystemParams::new(self.m, self.big_m, self.omega, self.big_omega, self.delta)
    }
}

/// Validated parameters. Immutable after construction.
///
/// Invariants: all of `m`, `M`, `ω`, `Ω` positive and finite, `Ω < ω`,
/// `|δ| < 1`. Negative `δ` is allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    m: f64,
    big_m: f64,
    omega: f64,
    big_omega: f64,
    delta: f64,
    omega_bar: f64,
}

impl SystemParams {
    pub fn new(m: f64, big_m: f64, omega: f64, big_omega: f64, delta: f64) -> Result<Self, ParamsError> {
        for (name, value) in [("m", m), ("M", big_m), ("omega", omega), ("Omega", big_omega), ("delta", delta)] {
            if !value.is_finite() {
                return Err(ParamsError::NonFiniteParameter { name, value });
            }
        }
        for (name, value) in [("m", m), ("M", big_m), ("omega", omega), ("Omega", big_omega)] {
            if value <= 0.0 {
                return Err(ParamsError::NonPositiveParameter { name, value });
            }
        }
        if delta.abs() >= 1.0 {
            return Err(ParamsError::CouplingOutOfRange(delta));
        }
        if big_omega >= omega {
            return Err(ParamsError::FrequencyOrderViolation { omega, big_omega });
        }
        Ok(SystemParams { m, big_m, omega, big_omega, delta, omega_bar: big_omega / omega })
    }

    /// Unit masses and `ω = 1`, parameterised by `Ω̄` and `δ`.
    pub fn reduced(omega_bar: f64, delta: f64) -> Result<Self, ParamsError> {
        SystemParams::new(1.0, 1.0, 1.0, omega_bar, delta)
    }

    /// Same masses and frequencies, different coupling.
    pub fn with_delta(&self, delta: f64) -> Result<Self, ParamsError> {
        SystemParams::new(self.m, self.big_m, self.omega, self.big_omega, delta)
    }

    /// Mass of the `x` oscillator.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Mass of the `y` oscillator.
    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    /// Frequency of the `x` (fast) oscillator.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Frequency of the `y` (slow) oscillator.
    pub fn big_omega(&self) -> f64 {
        self.big_omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `Ω̄ = Ω/ω`, always in `(0, 1)`.
    pub fn omega_bar(&self) -> f64 {
        self.omega_bar
    }

    /// Bilinear coupling constant `c = δ·√(mM)·ω·Ω`.
    pub fn coupling(&self) -> f64 {
        self.delta * (self.m * self.big_m).sqrt() * self.omega * self.big_omega
    }

    pub fn raw(&self) -> RawParams {
        RawParams { m: self.m, big_m: self.big_m, omega: self.omega, big_omega: self.big_omega, delta: self.delta }
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} M={} omega={} Omega={} delta={}",
            self.m, self.big_m, self.omega, self.big_omega, self.delta
        )
    }
}

/// Quantum numbers of a product state: `n` for the fast `x` channel, `l` for
/// the slow `y` channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateIndex {
    pub n: usize,
    pub l: usize,
}

impl StateIndex {
    pub fn new(n: usize, l: usize) -> Self {
        StateIndex { n, l }
    }
}

impl fmt::Display for StateIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, l={})", self.n, self.l)
    }
}
