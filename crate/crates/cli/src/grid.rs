use crate::fail::CliError;

pub const AXES: [&str; 5] = ["T", "tv", "th", "p", "eps"];
const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Parses `name=start:stop:step`; `stop` is included when it lies on the grid.
pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = |why: &str| CliError::Usage(format!("grid `{spec}`: {why}"));
    let (name, range) = spec.split_once('=').ok_or_else(|| bad("expected name=start:stop:step"))?;
    let name = name.trim();
    if !AXES.contains(&name) {
        return Err(bad(&format!("unknown axis, expected one of {}", AXES.join(", "))));
    }
    let parts: Vec<f64> = range
        .split(':')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("bounds must be numbers"))?;
    let [start, stop, step] = parts[..] else {
        return Err(bad("expected three numbers"));
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(bad("bounds must be finite"));
    }
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    if stop < start {
        return Err(bad("stop is below start"));
    }
    if start < 0.0 || stop > 1.0 {
        return Err(bad("values must lie in [0, 1]"));
    }
    let span = (stop - start) / step;
    if span > MAX_POINTS as f64 {
        return Err(bad("too many points"));
    }
    let n = (span + 1e-9).floor() as usize + 1;
    let values = (0..n).map(|k| (start + k as f64 * step).min(stop)).collect();
    Ok(Axis { name: name.to_string(), values })
}

pub fn parse_grid(specs: &[String]) -> Result<Vec<Axis>, CliError> {
    let axes: Vec<Axis> = specs.iter().map(|s| parse_axis(s)).collect::<Result<_, _>>()?;
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(CliError::Usage(format!("grid axis {} given twice", a.name)));
        }
    }
    let total = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.values.len()));
    match total {
        Some(n) if n <= MAX_POINTS => Ok(axes),
        _ => Err(CliError::Usage("grid has too many points".into())),
    }
}

/// All grid points, the first axis varying slowest.
pub fn points(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for a in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                a.values.iter().map(move |&v| {
                    let mut row = prefix.clone();
                    row.push(v);
                    row
                })
            })
            .collect();
    }
    out
}
