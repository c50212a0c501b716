//! `--state` descriptions.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use sre_purity::oracle::{haar_random, psi_theta};
use sre_purity::rng::stream_rng;
use sre_purity::StateVector;

use crate::error::{CliError, CliResult};

/// Largest norm deviation accepted from a state file before renormalizing.
pub const FILE_NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    /// `theta:<radians>`: `(|0⟩ + e^{iθ}|1⟩)/√2`.
    Theta(f64),
    /// `haar:<n>:<seed>`.
    Haar { n: usize, seed: u64 },
    /// `stab:<n>`: `|0…0⟩`.
    Stab(usize),
    /// `file:<path>`: JSON array of `[re, im]` pairs.
    File(PathBuf),
}

fn parse_num<T: FromStr>(s: &str, what: &str, whole: &str) -> CliResult<T> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("invalid {what} '{s}' in state '{whole}'")))
}

impl FromStr for StateSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| CliError::Parse(format!("state '{s}' must look like kind:args")))?;
        match kind {
            "theta" => {
                let theta: f64 = parse_num(rest, "angle", s)?;
                if !theta.is_finite() {
                    return Err(CliError::Parse(format!("angle in '{s}' is not finite")));
                }
                Ok(StateSpec::Theta(theta))
            }
            "haar" => {
                let (n, seed) = rest.split_once(':').ok_or_else(|| {
                    CliError::Parse(format!("expected haar:<n>:<seed>, got '{s}'"))
                })?;
                Ok(StateSpec::Haar {
                    n: parse_num(n, "qubit count", s)?,
                    seed: parse_num(seed, "seed", s)?,
                })
            }
            "stab" => Ok(StateSpec::Stab(parse_num(rest, "qubit count", s)?)),
            "file" if !rest.is_empty() => Ok(StateSpec::File(PathBuf::from(rest))),
            _ => Err(CliError::Parse(format!(
                "unknown state '{s}'; use theta:<r>, haar:<n>:<seed>, stab:<n> or file:<path>"
            ))),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Theta(t) => write!(f, "theta:{t}"),
            StateSpec::Haar { n, seed } => write!(f, "haar:{n}:{seed}"),
            StateSpec::Stab(n) => write!(f, "stab:{n}"),
            StateSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl StateSpec {
    pub fn resolve(&self) -> CliResult<StateVector> {
        match self {
            StateSpec::Theta(t) => Ok(psi_theta(*t)),
            StateSpec::Haar { n, seed } => {
                if *n == 0 {
                    return Err(CliError::Parse(
                        "haar state needs at least one qubit".into(),
                    ));
                }
                Ok(haar_random(*n, &mut stream_rng(*seed, 0))?)
            }
            StateSpec::Stab(n) => {
                if *n == 0 {
                    return Err(CliError::Parse(
                        "stab state needs at least one qubit".into(),
                    ));
                }
                Ok(StateVector::zero(*n)?)
            }
            StateSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                parse_amplitudes(&text)
            }
        }
    }
}

/// Parses `[[re, im], ...]`, length `2^n`, norm within [`FILE_NORM_TOL`].
pub fn parse_amplitudes(text: &str) -> CliResult<StateVector> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| {
        CliError::Parse(format!(
            "state file is not a JSON array of [re, im] pairs: {e}"
        ))
    })?;
    let len = pairs.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(CliError::Parse(format!(
            "state file has {len} amplitudes; need a power of two, at least 2"
        )));
    }
    let amps: Vec<Complex64> = pairs
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > FILE_NORM_TOL {
        return Err(CliError::Parse(format!(
            "state file amplitudes have norm² {norm}, not 1 within {FILE_NORM_TOL}"
        )));
    }
    Ok(StateVector::normalized(amps)?)
}
