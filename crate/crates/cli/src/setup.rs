use std::io::Write;
use std::path::Path;

use entloc_core::{
    Balance, Coupling, CouplingConfig, ExplicitGains, FilterConfig, InputState, Outcome, Regime,
};

use crate::args::{BalanceArg, InputArg, KindArg, OutcomeArg, Params, RegimeArg};
use crate::fail::CliError;

fn need(v: Option<f64>, flag: &str, regime: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for regime {regime}")))
}

pub fn regime_arg(p: &Params) -> Result<RegimeArg, CliError> {
    p.regime.ok_or_else(|| CliError::Usage("--regime is required".into()))
}

/// Indistinguishability used by the polarizing regime: `--p` wins over `--kind`.
fn polarizing_p(p: &Params) -> f64 {
    p.p.unwrap_or(match p.kind {
        Some(KindArg::Dis) => 0.0,
        _ => 1.0,
    })
}

pub fn coupling(p: &Params) -> Result<CouplingConfig, CliError> {
    let input = match p.input.unwrap_or(InputArg::Singlet) {
        InputArg::Singlet => InputState::Singlet,
        InputArg::Experimental => InputState::Experimental,
    };
    let (regime, coupling) = match regime_arg(p)? {
        RegimeArg::Ind => (Regime::Indistinguishable, Coupling::Isotropic { t: need(p.t, "T", "ind")? }),
        RegimeArg::Dis => (Regime::Distinguishable, Coupling::Isotropic { t: need(p.t, "T", "dis")? }),
        RegimeArg::Partial => (
            Regime::Partial { p: need(p.p, "p", "partial")? },
            Coupling::Isotropic { t: need(p.t, "T", "partial")? },
        ),
        RegimeArg::Polarizing => {
            let tv = need(p.tv, "tv", "polarizing")?;
            let th = need(p.th, "th", "polarizing")?;
            let regime = match polarizing_p(p) {
                1.0 => Regime::Indistinguishable,
                0.0 => Regime::Distinguishable,
                x => Regime::Partial { p: x },
            };
            (regime, Coupling::Polarizing { tv, th })
        }
    };
    Ok(CouplingConfig::new(regime, coupling, input)?)
}

pub fn outcome(p: &Params) -> Outcome {
    match p.outcome {
        Some(OutcomeArg::V) => Outcome::V,
        Some(OutcomeArg::H) => Outcome::H,
        // the polarizing analysis conditions on a V click by default
        None if p.regime == Some(RegimeArg::Polarizing) => Outcome::V,
        None => Outcome::H,
    }
}

pub fn filter(p: &Params) -> Result<FilterConfig, CliError> {
    let mut f = FilterConfig::new(p.eps.unwrap_or(1.0))?;
    f = f.with_balance(match p.balance.unwrap_or(BalanceArg::Auto) {
        BalanceArg::Auto => Balance::Auto,
        BalanceArg::OnA => Balance::OnA,
        BalanceArg::OnB => Balance::OnB,
        BalanceArg::None => Balance::None,
    });
    if let Some(g) = &p.gains {
        let v: Vec<f64> = g
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("--gains {g}: expected four numbers")))?;
        let [a_h, a_v, b_h, b_v] = v[..] else {
            return Err(CliError::Usage(format!("--gains {g}: expected four numbers")));
        };
        f = f.with_gains(ExplicitGains { a_h, a_v, b_h, b_v });
    }
    f.validate()?;
    Ok(f)
}

/// Writes to `--out` if given, otherwise to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes())?;
            s.flush()?;
            Ok(())
        }
    }
}
