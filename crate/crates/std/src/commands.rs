//! One function per command, each producing CSV tables.

use levyruin_core::decompose::{JumpClass, JumpDecomposition};
use levyruin_core::firstpassage::{GridConfig, Mode, RiskModel};
use levyruin_core::montecarlo::{
    asymptotic_rows, cause_fractions, censoring_bias, gpd_tail, horizon_warnings, ruin_fraction, tail_index,
    Proportion, SimConfig,
};
use levyruin_core::rwalk::{increment_class_df, IncrementClass, RwQuintuple};

use crate::config::{Command, ExperimentConfig};
use crate::error::{in_module, CliError, Result};
use crate::output::Table;
use crate::parallel;
use crate::row;

/// Tables and warnings produced by one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    match cfg.command {
        Command::Decompose => decompose(cfg),
        Command::Ruin => ruin(cfg),
        Command::Cause => cause(cfg),
        Command::Triple => triple(cfg),
        Command::Quintuple => quintuple(cfg),
        Command::Rwalk => rwalk(cfg),
        Command::Simulate => simulate(cfg),
        Command::Asymptotics => asymptotics(cfg),
        Command::Validate => validate(cfg),
    }
}

fn single(table: Table) -> Result<RunOutput> {
    Ok(RunOutput {
        tables: vec![table],
        warnings: Vec::new(),
    })
}

fn sorted_barriers(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let b = &cfg.params.barriers;
    if b.is_empty() {
        return Err(CliError::Config("params.barriers is empty".into()));
    }
    if b.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(CliError::Config(
            "params.barriers must be finite and nonnegative".into(),
        ));
    }
    Ok(b.clone())
}

fn decompose(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let dec = cfg.decomposition()?;
    let m = in_module("decompose");
    let mut tails = Table::new(
        "decompose.csv",
        &[
            "z",
            "tail_p1",
            "tail_p1_err",
            "tail_p2",
            "tail_p2_err",
            "tail_p3",
            "tail_p3_err",
            "tail_sum",
            "tail_sum_err",
        ],
    );
    for &z in &cfg.params.z {
        let mut r = row![z];
        for k in JumpClass::ALL {
            let e = dec.tail_pk(k, z).map_err(&m)?;
            r.extend(row![e.value, e.error]);
        }
        let s = dec.tail_sum(z).map_err(&m)?;
        r.extend(row![s.value, s.error]);
        tails.push(r);
    }
    let mut summary = Table::new(
        "decompose_summary.csv",
        &["class", "intensity", "intensity_err", "mean", "mean_err", "closed_form"],
    );
    for k in JumpClass::ALL {
        let mean = dec.mean_pk(k).map_err(&m)?;
        summary.push(row![
            k.index(),
            dec.intensity(k),
            0.0,
            mean.value,
            mean.error,
            dec.uses_closed_form()
        ]);
    }
    Ok(RunOutput {
        tables: vec![tails, summary],
        warnings: Vec::new(),
    })
}

fn drift_model(cfg: &ExperimentConfig) -> Result<RiskModel> {
    let model = cfg.risk_model()?;
    if model.mode() != Mode::NegativeDrift {
        return Err(CliError::Config(format!(
            "command `{}` needs a positive drift; use `triple` for c = 0",
            cfg.command.name()
        )));
    }
    Ok(model)
}

fn ruin(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let model = drift_model(cfg)?;
    let barriers = sorted_barriers(cfg)?;
    let m = in_module("firstpassage");
    let x_max = barriers.iter().cloned().fold(0.0, f64::max);
    let table = if x_max > 0.0 {
        Some(model.passage_table(x_max).map_err(&m)?)
    } else {
        None
    };
    let mut out = Table::new("ruin.csv", &["x", "ruin_prob", "ruin_prob_err"]);
    for &x in &barriers {
        let e = match &table {
            Some(t) => t.ruin_prob(x),
            None => model.ruin_prob(x),
        }
        .map_err(&m)?;
        out.push(row![x, e.value, e.error]);
    }
    single(out)
}

fn cause(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let model = drift_model(cfg)?;
    let barriers = sorted_barriers(cfg)?;
    let m = in_module("firstpassage");
    let x_max = barriers.iter().cloned().fold(0.0, f64::max);
    let table = if x_max > 0.0 {
        Some(model.passage_table(x_max).map_err(&m)?)
    } else {
        None
    };
    let mut out = Table::new(
        "cause.csv",
        &[
            "x",
            "cause1",
            "cause1_err",
            "cause2",
            "cause2_err",
            "cause3",
            "cause3_err",
            "ruin_prob",
            "ruin_prob_err",
        ],
    );
    for &x in &barriers {
        let mut r = row![x];
        for k in JumpClass::ALL {
            let e = match &table {
                Some(t) => t.cause_prob(x, k),
                None => model.cause_prob(x, k),
            }
            .map_err(&m)?;
            r.extend(row![e.value, e.error]);
        }
        let e = match &table {
            Some(t) => t.ruin_prob(x),
            None => model.ruin_prob(x),
        }
        .map_err(&m)?;
        r.extend(row![e.value, e.error]);
        out.push(r);
    }
    single(out)
}

/// The same model on a lattice with half the cells, for error estimates.
fn coarse(model: &RiskModel) -> Result<RiskModel> {
    let g = *model.grid();
    model
        .clone()
        .with_grid(GridConfig {
            cells: g.cells / 2,
            ..g
        })
        .map_err(in_module("firstpassage"))
}

fn triple(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let model = cfg.risk_model()?;
    if model.mode() != Mode::CompoundPoisson {
        return Err(CliError::Config("command `triple` needs drift = 0".into()));
    }
    let half = coarse(&model)?;
    let m = in_module("firstpassage");
    let p = &cfg.params;
    let mut causes = Table::new("triple_cause.csv", &["x", "k", "prob", "prob_err"]);
    let mut times = Table::new("triple_time.csv", &["x", "t", "cdf", "cdf_err"]);
    let mut unders = Table::new("triple_undershoot.csv", &["x", "k", "v", "cdf", "cdf_err"]);
    let mut overs = Table::new("triple_overshoot.csv", &["x", "k", "u", "tail", "tail_err"]);
    for x in sorted_barriers(cfg)? {
        let fine = model.triple_law(x).map_err(&m)?;
        let rough = half.triple_law(x).map_err(&m)?;
        let rem = fine.series_remainder();
        for &t in &p.times {
            let (a, b) = (fine.time_cdf(t), rough.time_cdf(t));
            times.push(row![x, t, a, (a - b).abs() + rem]);
        }
        for k in JumpClass::ALL {
            let (a, b) = (fine.cause_prob(k), rough.cause_prob(k));
            causes.push(row![x, k.index(), a, (a - b).abs() + rem]);
            for &v in &p.v {
                let (a, b) = (fine.undershoot_cdf(v, k), rough.undershoot_cdf(v, k));
                unders.push(row![x, k.index(), v, a, (a - b).abs() + rem]);
            }
            for &u in &p.u {
                let a = fine.overshoot_tail(u, k).map_err(&m)?;
                let b = rough.overshoot_tail(u, k).map_err(&m)?;
                overs.push(row![x, k.index(), u, a, (a - b).abs() + rem]);
            }
        }
    }
    Ok(RunOutput {
        tables: vec![causes, times, unders, overs],
        warnings: Vec::new(),
    })
}

/// Consecutive edges, plus an open last bin.
fn bins(edges: &[f64], name: &str) -> Result<Vec<(f64, f64)>> {
    if edges.is_empty()
        || edges
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        || edges[0].is_nan()
        || edges[0] < 0.0
    {
        return Err(CliError::Config(format!(
            "params.{name} must be increasing and nonnegative to serve as bin edges"
        )));
    }
    let mut out: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let last = *edges.last().expect("nonempty");
    if last.is_finite() {
        out.push((last, f64::INFINITY));
    }
    Ok(out)
}

fn quintuple(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let model = drift_model(cfg)?;
    let half = coarse(&model)?;
    let m = in_module("firstpassage");
    let ub = bins(&cfg.params.u, "u")?;
    let vb = bins(&cfg.params.v, "v")?;
    let mut out = Table::new(
        "quintuple_rect.csv",
        &["x", "k", "u0", "u1", "v0", "v1", "prob", "prob_err"],
    );
    for x in sorted_barriers(cfg)? {
        let fine = model.space_law(x).map_err(&m)?;
        let rough = half.space_law(x).map_err(&m)?;
        for k in JumpClass::ALL {
            for &u in &ub {
                for &v in &vb {
                    let a = fine.rect_prob(k, u, v).map_err(&m)?;
                    let b = rough.rect_prob(k, u, v).map_err(&m)?;
                    out.push(row![x, k.index(), u.0, u.1, v.0, v.1, a, (a - b).abs()]);
                }
            }
        }
    }
    single(out)
}

fn class_name(c: IncrementClass) -> &'static str {
    match c {
        IncrementClass::BothUp => "P3",
        IncrementClass::UpDown => "P4",
        IncrementClass::DownUp => "P5",
    }
}

fn rwalk(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let rw = cfg
        .rwalk
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [rwalk] table".into()))?;
    let model = rw.build()?;
    let m = in_module("rwalk");
    let mut classes = Table::new("rwalk_classes.csv", &["class", "mass", "mass_err"]);
    for c in IncrementClass::ALL {
        classes.push(row![class_name(c), model.class_mass(c), 0.0]);
    }
    classes.push(row!["negative", model.negative_mass(), 0.0]);
    let mut tables = vec![classes];
    // Atoms at zero are supported by the simulator only.
    let continuous = model.f1.zero_atom == 0.0 && model.f2.zero_atom == 0.0;
    if continuous {
        let mut dfs = Table::new("rwalk_class_cdf.csv", &["class", "z", "cdf", "cdf_err"]);
        let z: Vec<f64> = cfg.params.z.iter().copied().filter(|z| *z > 0.0).collect();
        for c in IncrementClass::ALL {
            let df = increment_class_df(&model, c, &z).map_err(&m)?;
            for (z, e) in df.grid.iter().zip(&df.values) {
                dfs.push(row![class_name(c), *z, e.value, e.error]);
            }
        }
        tables.push(dfs);
    }
    if continuous && model.f1.positive_support() && model.f2.positive_support() {
        let fine = RwQuintuple::new(model, rw.x, rw.cells, rw.tol).map_err(&m)?;
        let rough = RwQuintuple::new(model, rw.x, (rw.cells / 2).max(4), rw.tol).map_err(&m)?;
        let rem = fine.remainder();
        let mut joint = Table::new("rwalk_joint.csv", &["j", "v", "prob", "prob_err"]);
        for j in 0..=rw.max_j {
            for &v in &cfg.params.v {
                let (a, b) = (fine.joint_cdf(j, v), rough.joint_cdf(j, v));
                joint.push(row![j, v, a, (a - b).abs() + rem]);
            }
        }
        let mut over = Table::new("rwalk_overshoot.csv", &["u", "cdf", "cdf_err"]);
        for &u in &cfg.params.u {
            let a = fine.overshoot_cdf(u).map_err(&m)?;
            let b = rough.overshoot_cdf(u).map_err(&m)?;
            over.push(row![u, a, (a - b).abs() + rem]);
        }
        tables.push(joint);
        tables.push(over);
    }
    if rw.paths > 0 {
        let recs = parallel::simulate_walks(&model, rw.x, rw.paths, cfg.params.seed, rw.max_steps);
        let n = recs.len() as u64;
        let mut sim = Table::new("rwalk_sim.csv", &["j", "v", "estimate", "se"]);
        for j in 0..=rw.max_j as u64 {
            for &v in &cfg.params.v {
                let hits = recs.iter().filter(|r| !r.censored && r.j == j && r.v <= v).count() as u64;
                let p = Proportion::from_counts(hits, n);
                sim.push(row![j, v, p.estimate, p.se]);
            }
        }
        tables.push(sim);
    }
    Ok(RunOutput {
        tables,
        warnings: Vec::new(),
    })
}

fn sim_config(cfg: &ExperimentConfig, barrier: f64) -> Result<SimConfig> {
    let p = &cfg.params;
    let mut s = SimConfig::new(p.seed, p.n_paths, barrier);
    s.horizon = p.horizon;
    s.validate().map_err(in_module("montecarlo"))?;
    Ok(s)
}

fn simulate(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let model = cfg.risk_model()?;
    let sim = sim_config(cfg, cfg.params.barrier)?;
    let m = in_module("montecarlo");
    let recs = parallel::simulate(&model, &sim).map_err(&m)?;
    let mut records = Table::new(
        "records.csv",
        &["path", "tau", "g_prev", "u", "v", "y", "k", "censored"],
    );
    for (i, r) in recs.iter().enumerate() {
        records.push(row![i, r.tau, r.g_prev, r.u, r.v, r.y, r.k, r.censored]);
    }
    let mut summary = Table::new("summary.csv", &["quantity", "estimate", "se"]);
    let ruin = ruin_fraction(&recs);
    summary.push(row!["ruin", ruin.estimate, ruin.se]);
    for (k, p) in cause_fractions(&recs).iter().enumerate() {
        summary.push(row![format!("cause{}", k + 1), p.estimate, p.se]);
    }
    let cens = Proportion::from_counts(recs.iter().filter(|r| r.censored).count() as u64, recs.len() as u64);
    summary.push(row!["censored", cens.estimate, cens.se]);
    let bias = censoring_bias(&model, &recs).map_err(&m)?;
    summary.push(row!["censoring_bias", bias.value, bias.error]);
    let mut warnings = horizon_warnings(&model, &sim, &recs);
    if bias.value > ruin.se {
        warnings.push(format!(
            "censoring bias {:.3e} exceeds the standard error {:.3e} of the ruin estimate",
            bias.value, ruin.se
        ));
    }
    Ok(RunOutput {
        tables: vec![records, summary],
        warnings,
    })
}

fn asymptotics(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let model = drift_model(cfg)?;
    let m = in_module("montecarlo");
    let barriers = sorted_barriers(cfg)?;
    tail_index(model.decomposition()).map_err(&m)?;
    let sim = sim_config(cfg, barriers[0])?;
    let recs = parallel::simulate_multi(&model, &sim, &barriers).map_err(&m)?;
    let rows = asymptotic_rows(&model, &barriers, &recs).map_err(&m)?;
    let mut table = Table::new(
        "asymptotics.csv",
        &[
            "x",
            "paths",
            "ruined",
            "censored",
            "ruin",
            "ruin_se",
            "cause1",
            "cause1_se",
            "cause2",
            "cause2_se",
            "cause3",
            "cause3_se",
            "scale",
            "scale_err",
            "alpha",
            "gpd_sup_distance",
            "low_confidence",
        ],
    );
    let mut ecdf = Table::new("asymptotics_ecdf.csv", &["x", "w", "ecdf", "gpd_cdf"]);
    let mut warnings = Vec::new();
    for r in &rows {
        let mut line = row![r.barrier, r.paths, r.ruined, r.censored, r.ruin.estimate, r.ruin.se];
        for c in &r.cause {
            line.extend(row![c.estimate, c.se]);
        }
        line.extend(row![
            r.scale.value,
            r.scale.error,
            r.alpha,
            r.sup_distance,
            r.low_confidence
        ]);
        table.push(line);
        if r.low_confidence {
            warnings.push(format!("barrier {}: only {} ruin events", r.barrier, r.ruined));
        }
        let n = r.scaled_overshoot.len() as f64;
        for (i, &w) in r.scaled_overshoot.iter().enumerate() {
            ecdf.push(row![r.barrier, w, (i as f64 + 1.0) / n, 1.0 - gpd_tail(w, r.alpha)]);
        }
    }
    Ok(RunOutput {
        tables: vec![table, ecdf],
        warnings,
    })
}

fn validate(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = Table::new("validate.csv", &["check", "value", "err"]);
    if cfg.model.is_some() {
        let model = cfg.risk_model()?;
        let dec: &JumpDecomposition = model.decomposition();
        out.push(row!["drift", model.drift(), 0.0]);
        out.push(row!["mean_sum", dec.mean_sum(), 0.0]);
        if model.mode() == Mode::NegativeDrift {
            out.push(row!["rho", model.rho().map_err(in_module("firstpassage"))?, 0.0]);
        }
    }
    if let Some(rw) = &cfg.rwalk {
        let m = rw.build()?;
        out.push(row!["rwalk_negative_mass", m.negative_mass(), 0.0]);
    }
    single(out)
}
