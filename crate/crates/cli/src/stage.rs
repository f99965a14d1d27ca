use std::fmt::Write;

use entloc_core::pipeline::run_protocol_for;
use entloc_core::{CouplingConfig, FilterConfig, Outcome, StageResult};
use serde::Serialize;

use crate::args::Params;
use crate::fail::CliError;
use crate::num::sig12;
use crate::setup::{coupling, emit, filter, outcome};

#[derive(Serialize)]
struct StageReport<'a> {
    coupling: &'a CouplingConfig,
    filter: &'a FilterConfig,
    outcome: Outcome,
    stages: &'a [StageResult],
}

fn render_text(cfg: &CouplingConfig, f: &FilterConfig, o: Outcome, stages: &[StageResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "coupling {:?}, regime {:?}, input {:?}", cfg.coupling, cfg.regime, cfg.input);
    let _ = writeln!(s, "outcome {o:?}, eps {}, balance {:?}", sig12(f.eps), f.balance);
    if let Some(g) = f.explicit_gains {
        let _ = writeln!(s, "gains A_H {} A_V {} B_H {} B_V {}", sig12(g.a_h), sig12(g.a_v), sig12(g.b_h), sig12(g.b_v));
    }
    for st in stages {
        let m = &st.metrics;
        let _ = writeln!(s, "\nstage {:?}", st.stage);
        let _ = writeln!(s, "  P_stage       {}", sig12(st.success_probability));
        let _ = writeln!(s, "  P_cumulative  {}", sig12(st.cumulative_probability));
        let _ = writeln!(s, "  concurrence   {}", sig12(m.concurrence));
        let _ = writeln!(s, "  bell_max      {}", sig12(m.bell_max));
        let _ = writeln!(s, "  linear_entropy {}", sig12(m.linear_entropy));
        let _ = writeln!(s, "  purity        {}", sig12(m.purity));
        let _ = writeln!(s, "  rho (HH, HV, VH, VV):");
        for i in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|j| {
                    let z = st.rho.get(i, j);
                    format!("{:>9.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            let _ = writeln!(s, "    {}", row.join("  "));
        }
    }
    s
}

pub fn run(p: &Params) -> Result<(), CliError> {
    let cfg = coupling(p)?;
    let f = filter(p)?;
    let o = outcome(p);
    let stages = run_protocol_for(&cfg, o, &f)?;
    let text = if p.json() {
        let report = StageReport { coupling: &cfg, filter: &f, outcome: o, stages: &stages };
        let mut t = serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))?;
        t.push('\n');
        t
    } else {
        render_text(&cfg, &f, o, &stages)
    };
    emit(p.out.as_deref(), &text)
}
