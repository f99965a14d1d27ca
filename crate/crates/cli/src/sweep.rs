use entloc_core::formulas::{catalog, ScalarCurve};

use crate::args::{KindArg, Params, RegimeArg};
use crate::fail::CliError;
use crate::grid::{self, Axis};
use crate::num::sig12;
use crate::setup::{emit, regime_arg};

fn prefix(p: &Params) -> Result<&'static str, CliError> {
    Ok(match regime_arg(p)? {
        RegimeArg::Ind => "ind.",
        RegimeArg::Dis => "dis.",
        RegimeArg::Partial => "partial.",
        RegimeArg::Polarizing => match p.kind {
            Some(KindArg::Dis) => "polarizing.dis.",
            _ => "polarizing.ind.",
        },
    })
}

/// Parameters fixed by flags, minus those that are gridded.
fn fixed(p: &Params, axes: &[Axis]) -> Vec<(&'static str, f64)> {
    let flags = [("T", p.t), ("tv", p.tv), ("th", p.th), ("p", p.p), ("eps", p.eps)];
    flags
        .into_iter()
        .filter_map(|(n, v)| v.map(|v| (n, v)))
        .filter(|(n, _)| !axes.iter().any(|a| a.name == *n))
        .collect()
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn table(p: &Params) -> Result<Table, CliError> {
    let pre = prefix(p)?;
    let axes = grid::parse_grid(p.grid.as_deref().unwrap_or(&[]))?;
    let fixed = fixed(p, &axes);
    for (n, v) in &fixed {
        if !(0.0..=1.0).contains(v) {
            return Err(CliError::Usage(format!("--{n} {v} is outside [0, 1]")));
        }
    }
    let known = |name: &str| axes.iter().any(|a| a.name == name) || fixed.iter().any(|(n, _)| *n == name);

    let family: Vec<ScalarCurve> = catalog().into_iter().filter(|c| c.name.starts_with(pre)).collect();
    let curves: Vec<ScalarCurve> = match &p.outputs {
        Some(list) => list
            .split(',')
            .map(|o| {
                let o = o.trim();
                let c = family
                    .iter()
                    .find(|c| &c.name[pre.len()..] == o)
                    .cloned()
                    .ok_or_else(|| CliError::Usage(format!("no output {o} for this regime")))?;
                match c.inputs.iter().find(|i| !known(i)) {
                    Some(i) => Err(CliError::Usage(format!("output {o} needs {i}"))),
                    None => Ok(c),
                }
            })
            .collect::<Result<_, _>>()?,
        None => family.into_iter().filter(|c| c.inputs.iter().all(|i| known(i))).collect(),
    };
    if curves.is_empty() {
        return Err(CliError::Usage("no curve can be evaluated with the given parameters".into()));
    }

    let mut header: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    header.extend(fixed.iter().map(|(n, _)| n.to_string()));
    header.extend(curves.iter().map(|c| c.name[pre.len()..].to_string()));

    let points = grid::points(&axes);
    let eval_row = |pt: &Vec<f64>| -> Result<Vec<f64>, CliError> {
        let lookup = |name: &str| {
            axes.iter()
                .position(|a| a.name == name)
                .map(|i| pt[i])
                .or_else(|| fixed.iter().find(|(n, _)| *n == name).map(|(_, v)| *v))
        };
        let mut row = pt.clone();
        row.extend(fixed.iter().map(|(_, v)| *v));
        for c in &curves {
            match c.eval_with(lookup) {
                Ok(v) => row.push(v),
                // curves are undefined at isolated points such as total reflection
                Err(e) if e.is_degenerate() => row.push(f64::NAN),
                Err(e) => return Err(e.into()),
            }
        }
        Ok(row)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(p.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = pool.install(|| {
        use rayon::prelude::*;
        points.par_iter().map(eval_row).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(Table { header, rows })
}

pub fn render_csv(t: &Table) -> String {
    let mut s = t.header.join(",");
    s.push('\n');
    for r in &t.rows {
        s.push_str(&r.iter().map(|x| sig12(*x)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

pub fn render_json(t: &Table) -> String {
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = t
        .rows
        .iter()
        .map(|r| {
            t.header
                .iter()
                .zip(r)
                .map(|(h, x)| (h.clone(), serde_json::Number::from_f64(*x).map_or(serde_json::Value::Null, Into::into)))
                .collect()
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn run(p: &Params) -> Result<(), CliError> {
    let t = table(p)?;
    let text = if p.json() { render_json(&t) } else { render_csv(&t) };
    emit(p.out.as_deref(), &text)
}
