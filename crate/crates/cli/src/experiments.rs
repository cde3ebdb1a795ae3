//! Dispatch from a configuration to library operations. Every number written
//! to a bundle comes straight from one library call; this layer only formats.

use serde_json::json;
use torus_ap::averages::{birkhoff_average, multiple_ergodic_average, multiple_recurrence_frequency, AverageSeries, Observable};
use torus_ap::cubes::{cube_point, hkm_degeneracy_residual, FaceElement};
use torus_ap::relations::{
    certify_ap, certify_ind_ap, certify_proximal, certify_rp, detect_ap, detect_ind_ap, detect_proximal, detect_rp,
    probe_transitivity, weyl_ap1_orbit_check, RelationQuery, RelationVerdict, Status,
};
use torus_ap::{FixedAngle, System, SystemSpec, TorusPoint};

use crate::bundle::{ReportBundle, Table};
use crate::cache::OrbitCache;
use crate::config::*;
use crate::error::{CliError, CliResult};

/// Fills `bundle` with the records and tables of the experiment.
pub(crate) fn execute(cfg: &ExperimentConfig, bundle: &mut ReportBundle) -> CliResult<()> {
    let system = cfg.system.as_ref().map(|d| d.build::<f64>()).transpose()?;
    match &cfg.params {
        Params::Relation(p) => relation_scan(require(system)?, p, cfg.seed, bundle),
        Params::Counterexample(p) => counterexample(system.as_ref(), p, bundle),
        Params::Cube(p) => cube_residual(require(system)?, p, bundle),
        Params::Average(p) => averages(require(system)?, p, cfg, bundle),
        Params::Motion(p) => motion_scan(require(system)?, p, bundle),
        Params::Transitivity(p) => transitivity(require(system)?, p, bundle),
    }
}

fn require(system: Option<System>) -> CliResult<System> {
    system.ok_or_else(|| CliError::Config("missing [system] table".into()))
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Witnessed => "witnessed",
        Status::RefutedAtBudget => "refuted-at-budget",
    }
}

fn verdict_line(v: &RelationVerdict) -> String {
    format!(
        "{} residual={} times={}",
        status_name(v.status),
        num(v.residual),
        v.best_times.as_deref().map_or(String::from("-"), join)
    )
}

fn relation_scan(sys: System, p: &RelationParams, seed: u64, bundle: &mut ReportBundle) -> CliResult<()> {
    let mut table = Table::new(
        "relations",
        &["index", "relation", "d", "delta", "n_max", "status", "residual", "times", "certified"],
    );
    let relation = serde_json::to_value(p.relation).expect("enum serializes");
    let relation = relation.as_str().expect("unit variant");
    for (i, pair) in p.pairs.iter().enumerate() {
        let q = RelationQuery::new(point(&pair.x)?, point(&pair.y)?, p.d, p.delta, p.n_max, p.ball_grid)?
            .with_restarts(p.restarts, seed.wrapping_add(i as u64));
        let v = match p.relation {
            RelationKind::Proximal => detect_proximal(&sys, &q)?,
            RelationKind::Ap => detect_ap(&sys, &q)?,
            RelationKind::Rp => detect_rp(&sys, &q)?,
            RelationKind::IndAp => detect_ind_ap(&sys, &q, p.sample_grid)?,
        };
        let certified = match &v.witness {
            None => None,
            Some(w) => Some(match p.relation {
                RelationKind::Proximal => certify_proximal(&sys, &q, w)?,
                RelationKind::Ap => certify_ap(&sys, &q, w)?,
                RelationKind::Rp => certify_rp(&sys, &q, w)?,
                RelationKind::IndAp => certify_ind_ap(&sys, &q, w)?,
            }),
        };
        table.push(vec![
            i.to_string(),
            relation.to_string(),
            p.d.to_string(),
            num(p.delta),
            p.n_max.to_string(),
            status_name(v.status).to_string(),
            num(v.residual),
            v.best_times.as_deref().map_or(String::new(), join),
            certified.map_or(String::new(), |c| c.to_string()),
        ]);
        bundle.summary.push(format!("{relation} #{i}: {}", verdict_line(&v)));
        bundle.record(json!({ "index": i, "relation": relation, "query": q, "verdict": v, "certified": certified }));
    }
    bundle.tables.push(table);
    Ok(())
}

fn counterexample(system: Option<&System>, p: &CounterexampleParams, bundle: &mut ReportBundle) -> CliResult<()> {
    let alpha = match (&p.alpha, system) {
        (Some(a), _) => a.angle()?,
        (None, Some(sys)) => sys.alpha(),
        (None, None) => FixedAngle::GOLDEN,
    };
    let mut table = Table::new("counterexample", &["y", "epsilon", "n_max", "status", "residual", "n"]);
    for spec in &p.y {
        let y = spec.angle()?;
        let v = weyl_ap1_orbit_check(alpha, y, p.epsilon, p.n_max)?;
        let n = v.best_times.as_deref().map_or(String::new(), join);
        table.push(vec![
            num(y.to_f64()),
            num(p.epsilon),
            p.n_max.to_string(),
            status_name(v.status).to_string(),
            num(v.residual),
            n,
        ]);
        bundle.summary.push(format!("counterexample y={}: {}", y.to_hex(), verdict_line(&v)));
        bundle.record(json!({
            "alpha": alpha, "y": y, "epsilon": p.epsilon, "n_max": p.n_max, "verdict": v,
        }));
    }
    bundle.tables.push(table);
    Ok(())
}

fn coordinate_header(prefix: &str, dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("{prefix}{i}")).collect()
}

fn cube_residual(sys: System, p: &CubeParams, bundle: &mut ReportBundle) -> CliResult<()> {
    let (x, y) = (point(&p.x)?, point(&p.y)?);
    let mut table = Table::new("residuals", &["budget", "residual", "z", "nvec"]).series();
    for &budget in &p.budgets {
        let r = hkm_degeneracy_residual(&sys, p.d, &x, &y, budget, p.z_grid)?;
        let z: Vec<String> = r.z.to_f64s().iter().map(|v| num(*v)).collect();
        table.push(vec![budget.to_string(), num(r.residual), z.join(";"), join(&r.nvec)]);
        bundle.summary.push(format!("cube d={} budget={budget}: residual={}", p.d, num(r.residual)));
        bundle.record(json!({ "d": p.d, "x": x, "y": y, "budget": budget, "z_grid": p.z_grid, "result": r }));
    }
    bundle.tables.push(table);
    for (i, s) in p.samples.iter().enumerate() {
        let base = point(&s.x)?;
        let cp = cube_point(&sys, &base, &FaceElement::new(s.nvec.clone()))?;
        let mut header = vec!["eps".to_string()];
        header.extend(coordinate_header("x", base.dim()));
        let mut t = Table {
            name: format!("cube_{i}"),
            header,
            rows: Vec::new(),
            series: false,
        };
        for row in cp.csv_rows() {
            t.push(row);
        }
        bundle.record(json!({ "sample": i, "x": base, "nvec": s.nvec, "cube": cp }));
        bundle.tables.push(t);
    }
    Ok(())
}

fn series_table(name: &str, s: &AverageSeries<f64>) -> Table {
    let mut t = Table::new(name, &["N", "value"]).series();
    for c in &s.checkpoints {
        t.push(vec![c.n.to_string(), num(c.value)]);
    }
    t
}

fn missing(field: &str, mode: AverageMode) -> CliError {
    CliError::Config(format!("[params].{field} is required for mode {mode:?}"))
}

fn averages(sys: System, p: &AverageParams, cfg: &ExperimentConfig, bundle: &mut ReportBundle) -> CliResult<()> {
    let x = p.x.as_ref().map(point).transpose()?;
    let n_list = p.n_list.as_deref();
    let series = match p.mode {
        AverageMode::Birkhoff => {
            let [f] = p.observables.as_slice() else {
                return Err(CliError::Config("birkhoff mode takes exactly one observable".into()));
            };
            let x = x.as_ref().ok_or_else(|| missing("x", p.mode))?;
            birkhoff_average(&sys, f, x, n_list.ok_or_else(|| missing("n_list", p.mode))?)?
        }
        AverageMode::Multiple => {
            let x = x.as_ref().ok_or_else(|| missing("x", p.mode))?;
            multiple_ergodic_average(&sys, &p.observables, x, n_list.ok_or_else(|| missing("n_list", p.mode))?)?
        }
        AverageMode::Recurrence => {
            let set = Observable::indicator(p.set.as_ref().ok_or_else(|| missing("set", p.mode))?.build()?);
            multiple_recurrence_frequency(
                &sys,
                &set,
                p.k.ok_or_else(|| missing("k", p.mode))?,
                p.n_max.ok_or_else(|| missing("n_max", p.mode))?,
                p.grid.ok_or_else(|| missing("grid", p.mode))?,
            )?
        }
        AverageMode::CircleExtension => {
            let SystemSpec::CocycleSkew { cocycle } = &sys else {
                return Err(CliError::Config("circle-extension needs a cocycle system".into()));
            };
            let w = x.as_ref().ok_or_else(|| missing("x", p.mode))?;
            cocycle.circle_extension_average(n_list.ok_or_else(|| missing("n_list", p.mode))?, w)?
        }
    };
    bundle.summary.push(format!(
        "average {:?}: final={} oscillation={}",
        p.mode,
        num(series.final_value),
        num(series.oscillation)
    ));
    bundle.record(json!({
        "mode": p.mode,
        "final": series.final_value,
        "oscillation": series.oscillation,
        "checkpoints": series.checkpoints,
    }));
    bundle.tables.push(series_table("average", &series));

    if let Some(count) = p.orbit_points {
        let x = x.as_ref().ok_or_else(|| missing("x", p.mode))?;
        let end = i64::try_from(count).map_err(|_| CliError::Config("orbit_points too large".into()))?;
        let orbit = match &cfg.cache {
            Some(dir) => OrbitCache::new(dir)?.orbit(&sys, x, 0, end)?,
            None => sys.orbit_segment(x, 0, end, 1)?,
        };
        bundle.tables.push(orbit_table(&orbit));
    }
    Ok(())
}

fn orbit_table(orbit: &[TorusPoint]) -> Table {
    let dim = orbit.first().map_or(1, TorusPoint::dim);
    let mut header = vec!["n".to_string()];
    header.extend(coordinate_header("x", dim));
    header.extend(coordinate_header("raw", dim));
    let mut t = Table {
        name: "orbit".into(),
        header,
        rows: Vec::new(),
        series: false,
    };
    for (n, p) in orbit.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend(p.to_f64s().iter().map(|v| num(*v)));
        row.extend(p.coords().iter().map(|c| c.to_hex()));
        t.push(row);
    }
    t
}

fn motion_scan(sys: System, p: &MotionParams, bundle: &mut ReportBundle) -> CliResult<()> {
    let SystemSpec::CocycleSkew { cocycle } = &sys else {
        return Err(CliError::Config("motion-scan needs a cocycle system".into()));
    };
    let report = cocycle.unbounded_motion_scan(p.grid, p.n_max, p.threshold)?;
    let mut t = Table::new("deviation", &torus_ap::Report::CSV_HEADER).series();
    for row in report.csv_rows() {
        t.push(row.to_vec());
    }
    let x_at = |i: usize| report.rows[i].x;
    bundle.summary.push(format!(
        "motion: global max {} at x={}, evidence={}, min sup {} at x={}, max inf {} at x={}",
        num(report.global_max),
        num(x_at(report.global_max_at)),
        report.evidence.is_some(),
        num(report.min_sup),
        num(x_at(report.min_sup_at)),
        num(report.max_inf),
        num(x_at(report.max_inf_at)),
    ));
    bundle.record(json!({
        "grid": p.grid,
        "n_max": report.n_max,
        "threshold": report.threshold,
        "global_max": report.global_max,
        "global_max_x": x_at(report.global_max_at),
        "evidence_x": report.evidence.map(x_at),
        "min_sup": report.min_sup,
        "min_sup_x": x_at(report.min_sup_at),
        "max_inf": report.max_inf,
        "max_inf_x": x_at(report.max_inf_at),
    }));
    bundle.tables.push(t);
    Ok(())
}

fn transitivity(sys: System, p: &TransitivityParams, bundle: &mut ReportBundle) -> CliResult<()> {
    let mut t = Table::new(
        "transitivity",
        &["index", "ab", "bc", "ac", "ab_residual", "bc_residual", "ac_residual", "candidate"],
    );
    for (i, triple) in p.triples.iter().enumerate() {
        let pts = [point(&triple[0])?, point(&triple[1])?, point(&triple[2])?];
        let template = RelationQuery::new(pts[0], pts[0], p.d, p.delta, p.n_max, p.ball_grid)?;
        let probe = probe_transitivity(&sys, pts, &template)?;
        let candidate = probe.is_counterexample_candidate();
        t.push(vec![
            i.to_string(),
            status_name(probe.ab.status).into(),
            status_name(probe.bc.status).into(),
            status_name(probe.ac.status).into(),
            num(probe.ab.residual),
            num(probe.bc.residual),
            num(probe.ac.residual),
            candidate.to_string(),
        ]);
        bundle.summary.push(format!(
            "transitivity #{i}: ab={} bc={} ac={} candidate={candidate}",
            status_name(probe.ab.status),
            status_name(probe.bc.status),
            status_name(probe.ac.status)
        ));
        bundle.record(json!({ "index": i, "points": pts, "probe": probe, "candidate": candidate }));
    }
    bundle.tables.push(t);
    Ok(())
}
