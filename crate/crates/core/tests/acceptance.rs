//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

mod common;

use std::time::Instant;

use entloc_core::fockoracle::{oracle_hom_scan, oracle_stage_states, OracleConfig};
use entloc_core::formulas::{self, PhotonRegime};
use entloc_core::metrics;
use entloc_core::pipeline::{self, filter_plan, Balance, CouplingConfig, ExplicitGains, FilterConfig, Regime};
use entloc_core::qstate::{apply_filter, apply_kraus, c, CMatrix, DensityMatrix};
use entloc_core::tomolab::{
    expected_counts, monte_carlo_uncertainty, reconstruct, reconstruct_raw, simulate_counts, standard_settings,
    subtract_accidentals,
};
use entloc_core::{InputState, Ket, Outcome};

const SQRT2: f64 = std::f64::consts::SQRT_2;

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, ok: bool, detail: impl AsRef<str>) {
        println!("[{}] {id:>2} {name}: {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
        if !ok {
            self.failed.push(id);
        }
    }
}

fn note(text: impl AsRef<str>) {
    println!("          {}", text.as_ref());
}

fn regime(p: f64) -> Regime {
    if p == 0.0 {
        Regime::Distinguishable
    } else if p == 1.0 {
        Regime::Indistinguishable
    } else {
        Regime::Partial { p }
    }
}

fn t_grid() -> Vec<f64> {
    (1..=19).map(|k| k as f64 * 0.05).collect()
}

const P_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.85, 1.0];

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn state(&mut self) -> DensityMatrix {
        let g = CMatrix::from_fn(4, 4, |_, _| c(2.0 * self.next() - 1.0, 2.0 * self.next() - 1.0));
        let m = &g * g.adjoint();
        let tr = m.trace();
        DensityMatrix::new(m / tr).unwrap()
    }

    fn unitary(&mut self) -> CMatrix {
        let mut a = [0.0; 4];
        for x in a.iter_mut() {
            *x = 6.3 * self.next();
        }
        let e = |x: f64| c(x.cos(), x.sin());
        CMatrix::from_row_slice(
            2,
            2,
            &[e(a[0] + a[1]) * a[3].cos(), e(a[0] + a[2]) * a[3].sin(), -e(a[0] - a[2]) * a[3].sin(), e(a[0] - a[1]) * a[3].cos()],
        )
    }
}

fn oracle_deviation(cfg: &CouplingConfig, oc: &OracleConfig) -> f64 {
    let orc = oracle_stage_states(oc).unwrap();
    let one = pipeline::stage_mix(cfg).unwrap();
    let mut worst = one.rho.max_abs_diff(&orc.rho_i).max((one.cumulative_probability - orc.p_i).abs());
    for o in [Outcome::H, Outcome::V] {
        let two = pipeline::stage_measure(cfg, o).unwrap();
        let (rho, p) = orc.stage_two(o);
        worst = worst
            .max(two.rho.max_abs_diff(rho))
            .max((two.cumulative_probability - p).abs())
            .max((two.success_probability - p / orc.p_i).abs());
    }
    worst
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut points = 0;
    for &t in &t_grid() {
        for &p in &P_GRID {
            let cfg = CouplingConfig::isotropic(regime(p), t).unwrap();
            worst = worst.max(oracle_deviation(&cfg, &OracleConfig::isotropic(t, p).unwrap()));
            points += 2;
        }
    }
    let amps: Vec<f64> = (0..=13).map(|k| 0.3 + k as f64 * 0.05).collect();
    for &tv in &amps {
        for &th in &amps {
            for &p in &P_GRID {
                let cfg = CouplingConfig::polarizing(regime(p), tv, th).unwrap();
                worst = worst.max(oracle_deviation(&cfg, &OracleConfig::new(tv, th, p).unwrap()));
                points += 2;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    r.line(
        1,
        "oracle equivalence",
        worst < 1e-10 && secs < 60.0,
        format!("max deviation {worst:.2e} over {points} (grid point, outcome) pairs in {secs:.1} s (limits 1e-10, 60 s)"),
    );
}

fn bisect(mut lo: f64, mut hi: f64, above: impl Fn(f64) -> bool) -> f64 {
    // `above(hi)` holds and `above(lo)` does not
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn stage_one_metrics(reg: Regime, t: f64) -> metrics::MetricReport {
    pipeline::stage_mix(&CouplingConfig::isotropic(reg, t).unwrap()).unwrap().metrics
}

fn criterion_2(r: &mut Report) {
    let ind_c = bisect(0.3, 0.9, |t| stage_one_metrics(Regime::Indistinguishable, t).concurrence > 1e-12);
    let dis_c = bisect(0.2, 0.9, |t| stage_one_metrics(Regime::Distinguishable, t).concurrence > 1e-12);
    let ind_b = bisect(0.55, 0.95, |t| stage_one_metrics(Regime::Indistinguishable, t).bell_max > 2.0);
    let dis_b = bisect(0.45, 0.95, |t| stage_one_metrics(Regime::Distinguishable, t).bell_max > 2.0);
    let checks = [
        (ind_c, 1.0 / 3f64.sqrt(), 1e-6),
        (dis_c, SQRT2 - 1.0, 1e-6),
        (ind_b, 0.68, 0.005),
        (dis_b, 0.608, 0.005),
    ];
    let ok = checks.iter().all(|(x, want, tol)| (x - want).abs() <= *tol);
    r.line(
        2,
        "threshold reproduction",
        ok,
        format!(
            "C_I,ind=0 at {ind_c:.9} (1/√3), C_I,dis=0 at {dis_c:.9} (√2−1), B_I,ind=2 at {ind_b:.6}, B_I,dis=2 at {dis_b:.6}"
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let cfg = CouplingConfig::isotropic(Regime::Distinguishable, 0.4).unwrap().with_input(InputState::Experimental);
    let gains = ExplicitGains { a_h: 1.0, a_v: 0.33, b_h: 1.0, b_v: 1.0 };
    let f = FilterConfig::new(1.0).unwrap().with_gains(gains);
    let st = pipeline::run_protocol(&cfg, &f).unwrap();
    let c_max = formulas::distinguishable_suite(0.4, 1.0).unwrap().c_iii_limit;

    let got = [
        ("S_I", st[0].metrics.linear_entropy),
        ("C_II", st[1].metrics.concurrence),
        ("P_II", st[1].cumulative_probability),
        ("S_II", st[1].metrics.linear_entropy),
        ("C_III", st[2].metrics.concurrence),
        ("P_III", st[2].success_probability),
        ("P_total", st[2].cumulative_probability),
        ("C_max", c_max),
    ];
    let quoted = [0.90, 0.32, 0.27, 0.74, 0.42, 0.43, 0.12, 0.55];
    let purity1 = (2.0 * 0.36f64.powi(2) + 2.0 * 0.68f64.powi(2) + 2.0 * 0.32f64.powi(2)) / 2.08f64.powi(2);
    let purity2 = (0.16f64.powi(2) + 0.52f64.powi(2) + 0.36f64.powi(2) + 2.0 * 0.16f64.powi(2)) / 1.04f64.powi(2);
    let kept = 0.16 + 0.33 * (0.52 + 0.36);
    let exact = [
        4.0 / 3.0 * (1.0 - purity1),
        0.16 / 0.52,
        0.26,
        4.0 / 3.0 * (1.0 - purity2),
        2.0 * 0.16 * 0.33f64.sqrt() / kept,
        kept / 1.04,
        kept / 4.0,
        (0.16f64 / 0.52).sqrt(),
    ];
    let loose = got.iter().zip(quoted).all(|((_, g), p)| (g - p).abs() <= 0.05);
    let tight = got.iter().zip(exact).map(|((_, g), e)| (g - e).abs()).fold(0.0, f64::max);
    let list: Vec<String> = got.iter().zip(quoted).map(|((n, g), p)| format!("{n}={g:.4}({p})")).collect();
    r.line(
        3,
        "quoted point T=0.40, p=0",
        loose && tight < 1e-12,
        format!("{}; exact-target deviation {tight:.1e}", list.join(" ")),
    );
}

fn criterion_4(r: &mut Report) {
    let (t, p) = (0.3, 0.85);
    let (rr, d) = (1.0 - t, 1.0 - 2.0 * (1.0 + p) * t * (1.0 - t));
    let cfg = CouplingConfig::isotropic(Regime::Partial { p }, t).unwrap();
    let two = pipeline::stage_measure(&cfg, Outcome::H).unwrap();
    let (c_ii, p_ii) = (two.metrics.concurrence, two.cumulative_probability);
    let v_formula = formulas::hom_visibility(p, t).unwrap();
    let v_oracle = oracle_hom_scan(&OracleConfig::isotropic(t, p).unwrap()).unwrap();

    // back-solve ε from the quoted C_III = 0.47
    let target = 0.47;
    let eps = (2.0 * t * t * (t - p * rr).abs() / (d.sqrt() * target) - 2.0 * t * t) / (rr * rr);
    let f = FilterConfig::new(eps).unwrap();
    let orc = oracle_stage_states(&OracleConfig::isotropic(t, p).unwrap()).unwrap();
    let (rho2, p2) = orc.stage_two(Outcome::H);
    let plan = filter_plan(&cfg, Outcome::H, &f, rho2.get(1, 1).re, rho2.get(2, 2).re).unwrap();
    let (mut rho3, mut q) = (rho2.clone(), 1.0);
    for fl in &plan.filters {
        let (next, s) = apply_filter(&rho3, fl).unwrap();
        rho3 = next;
        q *= s;
    }
    let c_iii_oracle = metrics::concurrence(&rho3).unwrap();
    let product = p2 * q;

    let gains = ExplicitGains { a_h: 1.0, a_v: 0.12, b_h: 1.0, b_v: 0.30 };
    let st = pipeline::run_protocol(&cfg, &FilterConfig::new(1.0).unwrap().with_gains(gains)).unwrap();

    let checks = [
        (c_ii - 0.22).abs() <= 0.005,
        (p_ii - 0.20).abs() <= 0.005,
        (v_formula - 0.615).abs() <= 0.005 && (v_oracle - v_formula).abs() < 1e-12,
        (c_iii_oracle - target).abs() <= 0.02,
        (product - 0.09).abs() <= 0.01,
    ];
    r.line(
        4,
        "quoted point T=0.3, p=0.85",
        checks.iter().all(|x| *x),
        format!(
            "C_II={c_ii:.4} P_II={p_ii:.4} V={v_formula:.4} (oracle {v_oracle:.4}) eps={eps:.5} C_III(oracle)={c_iii_oracle:.4} \
             P_II·P_III={product:.4} (target 0.09±0.01)"
        ),
    );
    if !checks[4] {
        note(format!(
            "P_II·P_III cannot reach 0.09: ε-filter gives {product:.4}; the quoted attenuations A_A^V=0.12, A_B^V=0.30 give \
             C_III={:.4}, P_III={:.4}, P_II·P_III={:.4}",
            st[2].metrics.concurrence, st[2].success_probability, st[2].cumulative_probability
        ));
    }
}

fn criterion_5(r: &mut Report) {
    let eps = 1e-4;
    let f = FilterConfig::new(eps).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for &t in &[0.2, 0.3, 0.7, 0.9] {
        let cfg = CouplingConfig::isotropic(Regime::Indistinguishable, t).unwrap();
        let st = pipeline::run_protocol(&cfg, &f).unwrap();
        let (cc, bb) = (st[2].metrics.concurrence, st[2].metrics.bell_max);
        ok &= cc > 0.999 && (bb - 2.0 * SQRT2).abs() <= 1e-3;
        parts.push(format!("T={t}: C={cc:.6} B={bb:.6}"));
    }
    // at T = 1/2 the balancing filter would have to block the whole state;
    // without it the measured state is already separable
    let half = CouplingConfig::isotropic(Regime::Indistinguishable, 0.5).unwrap();
    let balanced = match pipeline::run_protocol(&half, &f) {
        Ok(st) => Some(st[2].metrics.concurrence),
        Err(e) if e.is_degenerate() => None,
        Err(e) => panic!("{e}"),
    };
    let unbalanced = pipeline::run_protocol(&half, &f.with_balance(Balance::None)).unwrap()[2].metrics.concurrence;
    let formula = formulas::indistinguishable_suite(0.5, eps).unwrap().c_iii;
    ok &= unbalanced < 0.01 && formula < 0.01 && balanced.is_none_or(|x| x < 0.01);
    let shown = balanced.map_or("degenerate".to_string(), |x| format!("{x:.2e}"));
    parts.push(format!("T=0.5: C={unbalanced:.2e} unbalanced, {shown} balanced, closed form {formula}"));
    r.line(5, "asymptotic filtration", ok, parts.join("; "));
}

fn criterion_6(r: &mut Report) {
    let mut jump = 0.0f64;
    let mut lim = 0.0f64;
    for &t in &t_grid() {
        for &p in &P_GRID {
            let s = formulas::partial_suite(p, t, 1.0).unwrap();
            if s.singular {
                continue;
            }
            for edge in [s.eps_window.0, s.eps_window.1] {
                if edge > 0.0 && edge.is_finite() {
                    jump = jump.max((formulas::bell_iii_coherent(p, t, edge) - formulas::bell_iii_population(p, t, edge)).abs());
                }
            }
            let small = formulas::partial_suite(p, t, 1e-13).unwrap();
            lim = lim.max((small.b_iii - s.b_iii_limit).abs());
        }
    }
    // B_III(p) from the pipeline at small ε should follow the limit curve
    let mut mismatched = 0;
    let mut compared = 0;
    for &t in &t_grid() {
        let ps: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
        let data: Vec<Option<f64>> = ps
            .iter()
            .map(|&p| {
                let cfg = CouplingConfig::isotropic(Regime::Partial { p }, t).unwrap();
                pipeline::run_protocol(&cfg, &FilterConfig::new(1e-10).unwrap()).ok().map(|st| st[2].metrics.bell_max)
            })
            .collect();
        let limit: Vec<f64> = ps.iter().map(|&p| formulas::partial_suite(p, t, 1.0).unwrap().b_iii_limit).collect();
        for k in 1..ps.len() {
            let dl = limit[k] - limit[k - 1];
            if let (Some(a), Some(b)) = (data[k - 1], data[k]) {
                if dl.abs() > 1e-6 {
                    compared += 1;
                    if (b - a).signum() != dl.signum() {
                        mismatched += 1;
                    }
                }
            }
        }
    }
    r.line(
        6,
        "Bell-branch correctness",
        jump < 1e-9 && lim < 1e-9 && mismatched == 0,
        format!(
            "max jump at window edge {jump:.1e}, max |B_III(ε→0) − limit| {lim:.1e}, monotonicity agrees on {}/{compared} p-steps",
            compared - mismatched
        ),
    );
}

fn criterion_7(r: &mut Report) {
    let mut worst = 0.0f64;
    for &t in &t_grid() {
        for &p in &P_GRID {
            let cfg = CouplingConfig::isotropic(regime(p), t).unwrap();
            let one = pipeline::stage_mix(&cfg).unwrap().metrics.bell_max;
            for o in [Outcome::H, Outcome::V] {
                worst = worst.max((one - pipeline::stage_measure(&cfg, o).unwrap().metrics.bell_max).abs());
            }
        }
    }
    r.line(7, "stage-II Bell invariance", worst < 1e-10, format!("max |B_I − B_II| {worst:.1e} over ind, dis and partial regimes"));
    let mut off = 0;
    let mut total = 0;
    let mut largest = 0.0f64;
    let amps: Vec<f64> = (0..=13).map(|k| 0.3 + k as f64 * 0.05).collect();
    for &tv in &amps {
        for &th in &amps {
            let cfg = CouplingConfig::polarizing(Regime::Indistinguishable, tv, th).unwrap();
            let one = pipeline::stage_mix(&cfg).unwrap().metrics.bell_max;
            let two = pipeline::stage_measure(&cfg, Outcome::V).unwrap().metrics.bell_max;
            total += 1;
            if (one - two).abs() > 1e-10 {
                off += 1;
                largest = largest.max((one - two).abs());
            }
        }
    }
    note(format!(
        "polarization-dependent coupling breaks the equality at {off}/{total} (t_v, t_h) points, largest gap {largest:.3}"
    ));
}

fn criterion_8(r: &mut Report) {
    let mut rng = Lcg(42);
    let mut lu = 0.0f64;
    for _ in 0..200 {
        let rho = rng.state();
        let u = rng.unitary().kronecker(&rng.unitary());
        let moved = DensityMatrix::new(apply_kraus(rho.matrix(), &u)).unwrap();
        lu = lu.max((metrics::concurrence(&rho).unwrap() - metrics::concurrence(&moved).unwrap()).abs());
    }
    let mut werner = 0.0f64;
    for k in 0..=1000 {
        let f = k as f64 / 1000.0;
        let w = DensityMatrix::werner(f).unwrap();
        werner = werner.max((metrics::concurrence(&w).unwrap() - (2.0 * f - 1.0).max(0.0)).abs());
    }
    let mut states: Vec<DensityMatrix> = vec![DensityMatrix::from_ket(&Ket::singlet()).unwrap(), DensityMatrix::werner(0.8).unwrap()];
    for &(t, p) in &[(0.4, 0.0), (0.75, 1.0), (0.3, 0.85)] {
        let cfg = CouplingConfig::isotropic(Regime::Partial { p }, t).unwrap();
        states.extend(pipeline::run_protocol(&cfg, &FilterConfig::new(0.1).unwrap()).unwrap().into_iter().map(|s| s.rho));
    }
    for _ in 0..4 {
        states.push(rng.state());
    }
    let horodecki = states
        .iter()
        .map(|s| (metrics::bell_max(s).unwrap() - common::chsh_search(s)).abs())
        .fold(0.0, f64::max);
    let s_dis = stage_one_metrics(Regime::Distinguishable, 0.4).linear_entropy;
    r.line(
        8,
        "metric correctness",
        lu < 1e-10 && werner < 1e-12 && horodecki < 1e-6 && (s_dis - 0.90).abs() <= 0.01,
        format!(
            "LU invariance {lu:.1e}, Werner {werner:.1e}, Horodecki vs angle search {horodecki:.1e} on {} states, S_I,dis(0.4)={s_dis:.4}",
            states.len()
        ),
    );
}

fn criterion_9(r: &mut Report) {
    let set = standard_settings();
    let psi = DensityMatrix::from_ket(&Ket::psi_in()).unwrap();
    let mut rng = Lcg(7);
    let mut round = 0.0f64;
    for rho in [psi.clone(), DensityMatrix::werner(0.7).unwrap(), rng.state(), rng.state()] {
        let raw = reconstruct_raw(&expected_counts(&rho, &set, 1000.0, 1.0, 0.0).unwrap(), &set).unwrap();
        round = round.max(entloc_core::qstate::max_abs_diff(&raw, rho.matrix()));
    }
    let fids: Vec<f64> = (0..5)
        .map(|seed| {
            let rec = simulate_counts(&psi, &set, 8000.0, 5.0, 0.0, seed).unwrap();
            metrics::fidelity(&reconstruct(&rec, &set).unwrap().rho_hat, &psi).unwrap()
        })
        .collect();
    let fid_min = fids.iter().cloned().fold(1.0, f64::min);
    let w = DensityMatrix::werner(0.9).unwrap();
    let sd = |n: f64| monte_carlo_uncertainty(&expected_counts(&w, &set, n, 1.0, 0.0).unwrap(), &set, 400, 9).unwrap().concurrence;
    let ratio = sd(1000.0) / sd(100_000.0) / 10.0;
    let singlet = DensityMatrix::from_ket(&Ket::singlet()).unwrap();
    let gains: Vec<(f64, f64)> = (0..5)
        .map(|seed| {
            let rec = simulate_counts(&singlet, &set, 2000.0, 5.0, 150.0, seed).unwrap();
            (
                reconstruct(&rec, &set).unwrap().metrics.concurrence,
                reconstruct(&subtract_accidentals(&rec), &set).unwrap().metrics.concurrence,
            )
        })
        .collect();
    let raised = gains.iter().all(|(a, b)| b > a);
    r.line(
        9,
        "tomography chain",
        round < 1e-10 && fid_min > 0.995 && (1.0 / 1.5..=1.5).contains(&ratio) && raised,
        format!(
            "round trip {round:.1e}, min fidelity at 8000/s×5 s {fid_min:.5}, σ_C(1e3)/σ_C(1e5)/10 = {ratio:.3}, \
             subtraction C {:.3}→{:.3} (seed 0, all 5 raised: {raised})",
            gains[0].0, gains[0].1
        ),
    );
}

fn criterion_10(r: &mut Report) {
    let mut worst = 0.0f64;
    for &t in &t_grid() {
        let a = t.sqrt();
        for &eps in &[1.0, 0.2, 1e-3] {
            let pi = formulas::polarizing_suite(a, a, eps, PhotonRegime::Ind).unwrap();
            let si = formulas::indistinguishable_suite(t, eps).unwrap();
            let pd = formulas::polarizing_suite(a, a, eps, PhotonRegime::Dis).unwrap();
            let sd = formulas::distinguishable_suite(t, eps).unwrap();
            for (x, y) in [
                (pi.c_i, si.c_i),
                (pi.p_i, si.p_i),
                (pi.c_ii, si.c_ii),
                (pi.p_ii, si.p_ii),
                (pi.c_iii, si.c_iii),
                (pi.p_iii, si.p_iii),
                (pi.c_iii_limit, si.c_iii_limit),
                (pd.c_i, sd.c_i),
                (pd.p_i, sd.p_i),
                (pd.c_ii, sd.c_ii),
                (pd.p_ii, sd.p_ii),
                (pd.c_iii, sd.c_iii),
                (pd.p_iii, sd.p_iii),
                (pd.c_iii_limit, sd.c_iii_limit),
            ] {
                worst = worst.max((x - y).abs());
            }
        }
    }
    let dead = [(0.0, 0.6), (0.5f64.sqrt(), 0.6), (0.8, 0.0)]
        .iter()
        .map(|&(tv, th)| formulas::polarizing_suite(tv, th, 1.0, PhotonRegime::Ind).unwrap().c_ii)
        .fold(0.0, f64::max);
    let alive = formulas::polarizing_suite(0.8, 0.6, 1.0, PhotonRegime::Ind).unwrap().c_ii;
    r.line(
        10,
        "appendix reduction identity",
        worst < 1e-12 && dead < 1e-12 && alive > 0.0,
        format!("max |polarizing(√T,√T) − isotropic| {worst:.1e}; ind C_II at t_v²∈{{0,1/2}}, t_h=0: {dead:.1e} (elsewhere {alive:.3})"),
    );
}

fn main() {
    let mut r = Report { failed: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    criterion_10(&mut r);
    if r.failed.is_empty() {
        println!("all 10 criteria pass");
    } else {
        println!("failing criteria: {:?}", r.failed);
        std::process::exit(1);
    }
}
