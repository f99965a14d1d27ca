use std::fs::File;

use entloc_core::pipeline::run_protocol_for;
use entloc_core::tomolab::{analyze, read_csv, simulate_counts, standard_settings, write_csv, CountRecord, Uncertainties};
use entloc_core::{metrics, DensityMatrix, Ket, MetricReport};
use serde::Serialize;

use crate::args::Params;
use crate::fail::CliError;
use crate::setup::{coupling, emit, filter, outcome};

#[derive(Serialize)]
struct TomoReport {
    seed: u64,
    trials: usize,
    rho_hat: DensityMatrix,
    metrics: MetricReport,
    uncertainties: Option<Uncertainties>,
    truth: Option<DensityMatrix>,
    fidelity_to_truth: Option<f64>,
}

fn truth(p: &Params) -> Result<DensityMatrix, CliError> {
    let spec = p.state.as_deref().unwrap_or("singlet");
    let stage = |k: usize| -> Result<DensityMatrix, CliError> {
        let st = run_protocol_for(&coupling(p)?, outcome(p), &filter(p)?)?;
        Ok(st[k].rho.clone())
    };
    match spec {
        "singlet" => Ok(DensityMatrix::from_ket(&Ket::singlet())?),
        "experimental" => Ok(DensityMatrix::from_ket(&Ket::psi_in())?),
        "stage1" => stage(0),
        "stage2" => stage(1),
        "stage3" => stage(2),
        s => match s.strip_prefix("werner=").map(str::parse::<f64>) {
            Some(Ok(f)) => Ok(DensityMatrix::werner(f)?),
            _ => Err(CliError::Usage(format!("unknown state `{s}`"))),
        },
    }
}

fn positive(v: f64, flag: &str) -> Result<f64, CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{flag} must be a non-negative number")))
    }
}

pub fn run(p: &Params) -> Result<(), CliError> {
    let settings = standard_settings();
    let seed = p.seed()?;
    let trials = p.trials.unwrap_or(200);
    let (records, truth): (Vec<CountRecord>, Option<DensityMatrix>) = match &p.counts_in {
        Some(path) => {
            let file = File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            (read_csv(file)?, None)
        }
        None => {
            let rho = truth(p)?;
            let rate = positive(p.rate.unwrap_or(2000.0), "rate")?;
            let duration = positive(p.duration.unwrap_or(1.0), "duration")?;
            let acc = positive(p.accidentals.unwrap_or(0.0), "accidentals")?;
            let rec = simulate_counts(&rho, &settings, rate, duration, acc, seed)?;
            (rec, Some(rho))
        }
    };
    if let Some(path) = &p.counts_out {
        let file = File::create(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        write_csv(file, &records)?;
    }
    // resampling draws from the next seed so it is independent of the simulated counts
    let res = analyze(&records, &settings, trials, seed.wrapping_add(1))?;
    let fidelity_to_truth = match &truth {
        Some(t) => Some(metrics::fidelity(&res.rho_hat, t)?),
        None => None,
    };
    let report = TomoReport {
        seed,
        trials,
        rho_hat: res.rho_hat,
        metrics: res.metrics,
        uncertainties: res.uncertainties,
        truth,
        fidelity_to_truth,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    emit(p.out.as_deref(), &text)
}
