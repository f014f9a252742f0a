use std::f64::consts::TAU;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{
    parse_value, parse_values, trig_coeff, ConfigError, ExperimentConfig, MapKind, SchemeName,
};
use crate::approx::{
    commutator_schedule, flow_schedule, power_schedule, run_schedule, sum_schedule,
    ConvergenceReport, Rung, Schedule, SharedHamiltonian,
};
use crate::billiard::{
    perline_derivative, symplectic_defect, DeltaMap, Identity, PhaseMap, ReflectionMap,
};
use crate::curve::Curve;
use crate::hamflow::{ham_field, FlowOptions, Hamiltonian, PerlineHamiltonian};
use crate::liecirc::{
    bracket, closure_span, from_json, gglob_membership, to_json, CoeffFn, GradedElement, Ring,
    Window,
};
use crate::phase::PhasePoint;
use crate::polyker::image_rank_check;

/// Result of one command: exit code plus what to write.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub csv: Option<String>,
}

impl Outcome {
    fn new(pass: bool, json: Value, csv: Option<String>) -> Self {
        Self {
            code: if pass { 0 } else { 1 },
            json,
            csv,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn embed(cfg: &ExperimentConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn write_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

#[derive(Debug, Serialize)]
struct PerlineRow {
    s: f64,
    theta: f64,
    ds: Option<f64>,
    dw: Option<f64>,
    field_s: Option<f64>,
    field_w: Option<f64>,
    deviation: Option<f64>,
    flags: String,
}

pub fn verify_perline(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let mut cfg = cfg.clone();
    cfg.grid = cfg.grid.with_defaults((16, 16), ("1/6", "5/6"));
    let curve = cfg.curve.build()?;
    let profile = cfg.profile()?;
    let tol = cfg.tol("perline", &cfg.tolerance.perline)?;
    let margin = cfg.tol("margin", &cfg.tolerance.margin)?;
    let schedule = parse_values("perline.eps_schedule", &cfg.perline.eps_schedule)?;
    if schedule.len() < 2
        || schedule.iter().any(|&h| !(h > 0.0))
        || schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(invalid(
            "perline.eps_schedule needs at least two positive, strictly decreasing steps",
        ));
    }
    let points = cfg.grid.points(&curve, cfg.seed)?;
    let h = PerlineHamiltonian::new(curve.clone(), profile.clone());
    let rows: Vec<PerlineRow> = points
        .par_iter()
        .map(|&p| {
            let mut row = PerlineRow {
                s: p.s,
                theta: p.theta,
                ds: None,
                dw: None,
                field_s: None,
                field_w: None,
                deviation: None,
                flags: String::new(),
            };
            if !p.is_transversal(margin) {
                row.flags = "near tangency".into();
                return row;
            }
            match perline_derivative(&curve, &profile, p, &schedule) {
                Ok(est) => {
                    let (fs, fw) = ham_field(&h, p);
                    row.ds = Some(est.ds);
                    row.dw = Some(est.dw);
                    row.field_s = Some(fs);
                    row.field_w = Some(fw);
                    row.deviation = Some((est.ds - fs).hypot(est.dw - fw));
                }
                Err(e) => row.flags = e.to_string(),
            }
            row
        })
        .collect();
    let devs: Vec<f64> = rows.iter().filter_map(|r| r.deviation).collect();
    let max = devs.iter().copied().fold(0.0, f64::max);
    let mean = if devs.is_empty() { 0.0 } else { devs.iter().sum::<f64>() / devs.len() as f64 };
    let pass = !devs.is_empty() && max <= tol && devs.iter().all(|d| d.is_finite());
    let json = json!({
        "command": "verify-perline",
        "pass": pass,
        "tolerance": tol,
        "max_deviation": max,
        "mean_deviation": mean,
        "evaluated": devs.len(),
        "excluded": rows.len() - devs.len(),
        "rows": rows,
        "config": embed(&cfg),
    });
    Ok(Outcome::new(pass, json, None))
}

#[derive(Debug, Serialize)]
struct SymplecticRow {
    s: f64,
    theta: f64,
    out_s: Option<f64>,
    out_theta: Option<f64>,
    defect: Option<f64>,
    flags: String,
}

pub fn verify_symplectic(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let mut cfg = cfg.clone();
    cfg.grid = cfg.grid.with_defaults((16, 16), ("1/6", "5/6"));
    let curve = cfg.curve.build()?;
    let tol = cfg.tol("symplectic", &cfg.tolerance.symplectic)?;
    let margin = cfg.tol("margin", &cfg.tolerance.margin)?;
    let points = cfg.grid.points(&curve, cfg.seed)?;
    let map: Box<dyn PhaseMap> = match cfg.symplectic.map {
        MapKind::Reflect => Box::new(ReflectionMap::forward(curve.clone())),
        MapKind::Inverse => Box::new(ReflectionMap::inverse(curve.clone())),
        MapKind::Identity => Box::new(Identity),
        MapKind::Delta => {
            let eps = parse_value("symplectic.eps", &cfg.symplectic.eps)?;
            Box::new(
                DeltaMap::new(curve.clone(), cfg.profile()?, eps)
                    .map_err(|e| invalid(format!("symplectic map: {e}")))?,
            )
        }
    };
    let (valid, tangent): (Vec<PhasePoint>, Vec<PhasePoint>) =
        points.iter().partition(|p| p.is_transversal(margin));
    let report = symplectic_defect(&curve, map.as_ref(), &valid);
    let mut rows: Vec<SymplecticRow> = report
        .rows
        .iter()
        .map(|r| SymplecticRow {
            s: r.s,
            theta: r.theta,
            out_s: r.out_s,
            out_theta: r.out_theta,
            defect: r.defect,
            flags: r.flags.clone(),
        })
        .collect();
    rows.extend(tangent.iter().map(|p| SymplecticRow {
        s: p.s,
        theta: p.theta,
        out_s: None,
        out_theta: None,
        defect: None,
        flags: "near tangency".into(),
    }));
    let pass = report.evaluated > 0 && report.max_defect <= tol;
    let json = json!({
        "command": "verify-symplectic",
        "pass": pass,
        "tolerance": tol,
        "max_defect": report.max_defect,
        "mean_defect": report.mean_defect,
        "evaluated": report.evaluated,
        "failures": report.excluded + tangent.len(),
        "config": embed(&cfg),
    });
    Ok(Outcome::new(pass, json, Some(write_csv(&rows))))
}

fn parse_element(field: &str, v: &toml::Value, ring: Ring) -> Result<GradedElement, ConfigError> {
    let as_json: Value = match v {
        toml::Value::String(s) => {
            serde_json::from_str(s).map_err(|e| invalid(format!("{field}: malformed JSON: {e}")))?
        }
        other => serde_json::to_value(other).map_err(|e| invalid(format!("{field}: {e}")))?,
    };
    from_json(&as_json, ring).map_err(|e| invalid(format!("{field}: {e}")))
}

fn default_generators(ring: Ring) -> Vec<GradedElement> {
    let coeffs = match ring {
        Ring::CircleTrig => vec![
            CoeffFn::one(ring),
            CoeffFn::cos(1),
            CoeffFn::sin(1),
            CoeffFn::cos(2),
            CoeffFn::sin(2),
        ],
        Ring::IntervalPoly => (0..=2).map(CoeffFn::monomial).collect(),
    };
    coeffs.into_iter().map(|c| GradedElement::term(0, c)).collect()
}

pub fn lie(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let mut cfg = cfg.clone();
    let ring = cfg.lie.ring.ring();
    let generators = match &cfg.lie.generators {
        Some(gs) => gs
            .iter()
            .enumerate()
            .map(|(i, g)| parse_element(&format!("lie.generators[{i}]"), g, ring))
            .collect::<Result<Vec<_>, _>>()?,
        None => default_generators(ring),
    };
    let window = Window::new(cfg.lie.window[0], cfg.lie.window[1]);
    let cap = cfg.lie.cap.map_or(window.doubled(), |[d, o]| Window::new(d, o));
    cfg.lie.cap = Some([cap.max_degree, cap.max_order]);
    if cap.max_degree < window.max_degree || cap.max_order < window.max_order {
        return Err(invalid("lie.cap must contain lie.window"));
    }

    let span = closure_span(&generators, cfg.lie.depth, window, cap)
        .map_err(|e| invalid(format!("lie: {e}")))?;

    let mut table = Vec::new();
    for (i, a) in generators.iter().enumerate() {
        for (j, b) in generators.iter().enumerate().skip(i + 1) {
            let c = bracket(a, b).map_err(|e| invalid(format!("lie: {e}")))?;
            table.push(json!({ "i": i, "j": j, "bracket": to_json(&c) }));
        }
    }

    let requested = match &cfg.lie.bracket {
        Some(pair) if pair.len() == 2 => {
            let a = parse_element("lie.bracket[0]", &pair[0], ring)?;
            let b = parse_element("lie.bracket[1]", &pair[1], ring)?;
            let c = bracket(&a, &b).map_err(|e| invalid(format!("lie.bracket: {e}")))?;
            json!({ "a": to_json(&a), "b": to_json(&b), "bracket": to_json(&c) })
        }
        Some(_) => return Err(invalid("lie.bracket needs exactly two elements")),
        None => Value::Null,
    };

    let mut violations = 0;
    let mut membership = Vec::new();
    if ring == Ring::CircleTrig {
        for e in span.produced.iter().chain(&span.basis) {
            let r = gglob_membership(e).map_err(|e| invalid(format!("lie: {e}")))?;
            if !r.member {
                violations += 1;
            }
        }
        for (i, v) in cfg.lie.membership.iter().enumerate() {
            let e = parse_element(&format!("lie.membership[{i}]"), v, ring)?;
            let r = gglob_membership(&e).map_err(|e| invalid(format!("lie.membership: {e}")))?;
            membership.push(json!({ "element": to_json(&e), "report": r }));
        }
    } else if !cfg.lie.membership.is_empty() {
        return Err(invalid("lie.membership applies to the circle ring only"));
    }

    let pass = violations == 0;
    let json = json!({
        "command": "lie",
        "pass": pass,
        "ring": ring,
        "generators": generators.iter().map(to_json).collect::<Vec<_>>(),
        "bracket_table": table,
        "bracket": requested,
        "closure": {
            "dimension": span.dimension,
            "total_rank": span.total_rank,
            "saturated": span.saturated,
            "dropped": span.dropped,
            "levels": span.levels,
            "basis": span.basis.iter().map(to_json).collect::<Vec<_>>(),
            "produced": span.produced.len(),
            "membership_violations": violations,
        },
        "membership": membership,
        "config": embed(&cfg),
    });
    Ok(Outcome::new(pass, json, None))
}

#[derive(Debug, Serialize)]
struct PolykerRow {
    #[serde(rename = "N")]
    n: usize,
    k: u32,
    kernel_size: usize,
    kernel_rank: usize,
    image_rank: usize,
    dim_p: usize,
    dim_p0: usize,
    pass: bool,
}

pub fn polyker(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    if let Some(&n) = cfg.polyker.n.iter().find(|&&n| n < 2) {
        return Err(invalid(format!("polyker.n: the kernel lemma needs N ≥ 2, got {n}")));
    }
    if cfg.polyker.k.contains(&0) {
        return Err(invalid("polyker.k: degrees start at 1"));
    }
    if cfg.polyker.n.is_empty() || cfg.polyker.k.is_empty() {
        return Err(invalid("polyker: empty N or k list"));
    }
    let pairs: Vec<(usize, u32)> = cfg
        .polyker
        .n
        .iter()
        .flat_map(|&n| cfg.polyker.k.iter().map(move |&k| (n, k)))
        .collect();
    let rows: Vec<PolykerRow> = pairs
        .par_iter()
        .map(|&(n, k)| {
            let r = image_rank_check(n, k).expect("arguments validated");
            PolykerRow {
                n,
                k,
                kernel_size: r.kernel_size,
                kernel_rank: r.kernel_rank,
                image_rank: r.image_rank,
                dim_p: r.dim_p,
                dim_p0: r.dim_p0,
                pass: r.pass,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    let json = json!({
        "command": "polyker",
        "pass": pass,
        "rows": rows.len(),
        "failing": rows.iter().filter(|r| !r.pass).map(|r| [r.n, r.k as usize]).collect::<Vec<_>>(),
        "config": embed(cfg),
    });
    Ok(Outcome::new(pass, json, Some(write_csv(&rows))))
}

fn lambda0(field: &str, coeffs: &[String]) -> Result<GradedElement, ConfigError> {
    let f = trig_coeff(field, coeffs)?;
    Ok(GradedElement::term(0, f.scale(&crate::rational::q(-2))))
}

fn shared(e: &GradedElement) -> SharedHamiltonian {
    Arc::new(Hamiltonian::from_element(e))
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn approximate(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let mut cfg = cfg.clone();
    cfg.grid = cfg.grid.with_defaults((8, 8), ("1/3", "2/3"));
    let curve = cfg.curve.build()?;
    let grid = cfg.grid.points(&curve, cfg.seed)?;
    let t = parse_value("approximate.t", &cfg.approximate.t)?;
    if !(t > 0.0) {
        return Err(invalid("approximate.t must be positive"));
    }
    let flow_options = FlowOptions {
        tol: cfg.tol("flow", &cfg.tolerance.flow)?,
        ..FlowOptions::default()
    };
    let slope_band = (
        parse_value("tolerance.slope_min", &cfg.tolerance.slope_min)?,
        parse_value("tolerance.slope_max", &cfg.tolerance.slope_max)?,
    );
    let with_opts = |mut s: Schedule| {
        s.flow_options = flow_options;
        s
    };
    let rung = |parameter: f64, s: Schedule, reference: &Schedule| -> Rung {
        match run_schedule(&with_opts(s), reference, &grid) {
            Ok(e) => Rung {
                parameter,
                sup_error: e.sup,
                mean_error: e.mean,
                excluded: e.excluded,
            },
            Err(_) => Rung {
                parameter,
                sup_error: f64::NAN,
                mean_error: f64::NAN,
                excluded: grid.len(),
            },
        }
    };

    let scheme = cfg.approximate.scheme.clone();
    let report = match scheme {
        SchemeName::Power => {
            let ladder = parse_values("approximate.eps_ladder", &cfg.approximate.eps_ladder)?;
            if ladder.len() < 3 || ladder.iter().any(|&e| !(e > 0.0)) {
                return Err(invalid("approximate.eps_ladder needs at least three positive steps"));
            }
            let profile = cfg.profile()?;
            let h: SharedHamiltonian = Arc::new(PerlineHamiltonian::new(curve.clone(), profile.clone()));
            let reference = with_opts(flow_schedule(&curve, h, t));
            let mut rungs = Vec::new();
            for &eps in &ladder {
                let s = power_schedule(&curve, &profile, t, eps)
                    .map_err(|e| invalid(format!("approximate: {e}")))?;
                rungs.push(rung(eps, s, &reference));
            }
            ConvergenceReport::from_rungs(rungs, |eps| eps)
        }
        SchemeName::Sum | SchemeName::Commutator => {
            require_two_pi(&curve)?;
            let is_sum = scheme == SchemeName::Sum;
            let ladder = cfg.approximate.n_ladder.clone().unwrap_or(if is_sum {
                vec![8, 16, 32]
            } else {
                vec![4, 8, 16, 32]
            });
            if ladder.len() < 3 || ladder.contains(&0) {
                return Err(invalid("approximate.n_ladder needs at least three positive N"));
            }
            cfg.approximate.n_ladder = Some(ladder.clone());
            let (dv, dw) = if is_sum {
                (strings(&["1"]), strings(&["0", "1"]))
            } else {
                (strings(&["0", "0", "1"]), strings(&["0", "1"]))
            };
            let vc = cfg.approximate.v.get_or_insert(dv).clone();
            let wc = cfg.approximate.w.get_or_insert(dw).clone();
            let v = lambda0("approximate.v", &vc)?;
            let w = lambda0("approximate.w", &wc)?;
            let target = if is_sum {
                v.add(&w)
            } else {
                bracket(&v, &w)
            }
            .map_err(|e| invalid(format!("approximate: {e}")))?;
            let reference = with_opts(flow_schedule(&curve, shared(&target), t));
            let mut rungs = Vec::new();
            for &n in &ladder {
                let s = if is_sum {
                    sum_schedule(&curve, shared(&v), shared(&w), t, n)
                } else {
                    commutator_schedule(&curve, shared(&v), shared(&w), t, n)
                }
                .map_err(|e| invalid(format!("approximate: {e}")))?;
                rungs.push(rung(n as f64, s, &reference));
            }
            ConvergenceReport::from_rungs(rungs, |n| 1.0 / n)
        }
    };

    let evaluated = report.rungs.iter().all(|r| r.sup_error.is_finite());
    let slope_in_band = report
        .slope
        .is_some_and(|f| slope_band.0 <= f.slope && f.slope <= slope_band.1);
    let pass = evaluated
        && match scheme {
            SchemeName::Commutator => report.monotone,
            _ => slope_in_band,
        };
    let ratio = match (report.rungs.first(), report.rungs.last()) {
        (Some(a), Some(b)) => b.sup_error / a.sup_error,
        _ => f64::NAN,
    };
    let json = json!({
        "command": "approximate",
        "scheme": scheme,
        "pass": pass,
        "t": t,
        "grid_points": grid.len(),
        "rungs": report.rungs,
        "slope": report.slope,
        "slope_band": [slope_band.0, slope_band.1],
        "monotone": report.monotone,
        "final_over_first": ratio,
        "config": embed(&cfg),
    });
    Ok(Outcome::new(pass, json, None))
}

fn require_two_pi(curve: &Curve) -> Result<(), ConfigError> {
    match curve.length() {
        Some(len) if (len - TAU).abs() < 1e-9 => Ok(()),
        _ => Err(invalid(
            "sum and commutator schemes use trigonometric Hamiltonians and need a closed curve of length 2π",
        )),
    }
}
