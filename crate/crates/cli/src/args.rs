use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::fail::CliError;

#[derive(Debug, Parser)]
#[command(name = "entloc", version, about = "Measurement-induced entanglement localization: sweeps, protocol runs, checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate closed-form curves over a parameter grid and write CSV.
    Sweep(Params),
    /// Run the three protocol stages at one parameter point.
    Stage(Params),
    /// Compare the Fock-space model with the stage simulator and formulas.
    OracleCheck(Params),
    /// Simulate tomography counts and reconstruct the state.
    Tomo(Params),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Ind,
    Dis,
    Partial,
    Polarizing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Ind,
    Dis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum OutcomeArg {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputArg {
    Singlet,
    Experimental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceArg {
    Auto,
    OnA,
    OnB,
    None,
}

/// Every option is optional so that a `--config` file can supply it.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// JSON file with any of these options; command-line flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Photon regime of the polarization-dependent coupling.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Intensity transmissivity of the coupler.
    #[arg(long = "T", id = "T")]
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// Amplitude transmission for V.
    #[arg(long)]
    pub tv: Option<f64>,
    /// Amplitude transmission for H.
    #[arg(long)]
    pub th: Option<f64>,
    /// Indistinguishability of the environmental photon.
    #[arg(long)]
    pub p: Option<f64>,
    /// Filter strength.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum)]
    pub outcome: Option<OutcomeArg>,
    #[arg(long, value_enum)]
    pub input: Option<InputArg>,
    #[arg(long, value_enum)]
    pub balance: Option<BalanceArg>,
    /// Explicit attenuator transmissions `a_h,a_v,b_h,b_v`; overrides `--eps`.
    #[arg(long)]
    pub gains: Option<String>,
    /// Grid axis `name=start:stop:step`, repeatable; the first axis varies slowest.
    #[arg(long)]
    pub grid: Option<Vec<String>>,
    /// Comma-separated curve names to keep, e.g. `C_I,C_III`.
    #[arg(long)]
    pub outputs: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of CSV or text.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub json: Option<bool>,
    /// Random seed; falls back to ENTLOC_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// State for `tomo`: singlet, experimental, werner=F, or stage1/stage2/stage3
    /// of the protocol run selected by the other options.
    #[arg(long)]
    pub state: Option<String>,
    /// Signal coincidence rate per basis pair, in counts per second.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Measurement time per setting, in seconds.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Accidental coincidence rate per setting, in counts per second.
    #[arg(long)]
    pub accidentals: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Write the simulated counts to this CSV file.
    #[arg(long)]
    pub counts_out: Option<PathBuf>,
    /// Analyze counts from this CSV file instead of simulating.
    #[arg(long)]
    pub counts_in: Option<PathBuf>,
}

impl Params {
    /// Overlays the flags given on the command line onto the config file, if any.
    pub fn resolve(self) -> Result<Params, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let mut base = read_config(&path)?;
        let flags = serde_json::to_value(&self).map_err(|e| CliError::Usage(e.to_string()))?;
        if let (Value::Object(base), Value::Object(flags)) = (&mut base, flags) {
            for (k, v) in flags {
                if !v.is_null() {
                    base.insert(k, v);
                }
            }
        }
        serde_json::from_value(base).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn json(&self) -> bool {
        self.json.unwrap_or(false)
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("ENTLOC_SEED") {
            Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("ENTLOC_SEED={v} is not an unsigned integer"))),
            Err(_) => Ok(0),
        }
    }
}

fn read_config(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    if !v.is_object() {
        return Err(CliError::Usage(format!("config {}: expected a JSON object", path.display())));
    }
    Ok(v)
}
