//! The six subcommands. Each returns its report text and whether every
//! check passed; writing the text out is left to the caller.

use std::fmt;

use flutelab::dynamics::{thinness_profile_cells, UnitTangent};
use flutelab::flute::{
    build_twisted_delta, build_untwisted, check_nested, check_schottky_isometric, check_untwisted,
    construct_untwisted, h_determinant_exact, ConstructionTrace, FluteError, GroupTruncation,
    Provenance, Schedule, SchottkyReport, TwistedDeltaParams, UntwistedFluteParams,
};
use flutelab::orbits::{
    busemann_along_words, power_tower_target, tu_scan, tu_scan_power_towers, Cluster, ScanConfig,
};
use flutelab::plane::busemann;
use flutelab::{BoundaryPoint, Geodesic, PlanePoint};
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, SurfaceKind};
use crate::json::{num, nums, to_report_string};
use crate::svg::{geodesic, Primitive, Style, SvgScene};

#[derive(Debug, Clone, PartialEq)]
pub enum CommandError {
    /// Input that parses but cannot be used; exit code 1.
    Invalid(String),
    /// The surface fails its own construction checks; exit code 2.
    Construction(String),
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Invalid(m) | CommandError::Construction(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<FluteError> for CommandError {
    fn from(e: FluteError) -> Self {
        match e {
            FluteError::SchottkyViolation { .. } => CommandError::Construction(e.to_string()),
            other => CommandError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub pass: bool,
    pub warnings: Vec<String>,
}

fn json_report(value: Value, pass: bool, warnings: Vec<String>) -> Report {
    Report {
        text: to_report_string(&value),
        pass,
        warnings,
    }
}

/// The common orthogonal of the untwisted family.
fn unit_geodesic() -> Geodesic {
    Geodesic::between(-1.0, 1.0).expect("distinct endpoints")
}

fn point(p: &PlanePoint) -> Value {
    json!([num(p.x()), num(p.y())])
}

fn big(v: &num_bigint::BigInt) -> Value {
    v.to_u64()
        .map_or_else(|| Value::String(v.to_string()), Value::from)
}

fn surface_json(cfg: &ExperimentConfig) -> Value {
    let s = &cfg.surface;
    let mut m = Map::new();
    m.insert("kind".into(), s.kind.name().into());
    m.insert("N".into(), s.count.into());
    match s.kind {
        SurfaceKind::TwistedDelta => {
            m.insert("delta".into(), num(s.delta.expect("validated")));
        }
        SurfaceKind::Untwisted => {
            let schedule = match s.schedule {
                Schedule::Separated {
                    xi1,
                    ratio,
                    growth,
                    eps_base,
                } => json!({
                    "name": "separated",
                    "xi1": num(xi1),
                    "ratio": num(ratio),
                    "growth": num(growth),
                    "epsBase": num(eps_base),
                }),
                Schedule::Geometric { xi_base, eps_base } => json!({
                    "name": "geometric",
                    "xiBase": num(xi_base),
                    "epsBase": num(eps_base),
                }),
            };
            m.insert("schedule".into(), schedule);
        }
    }
    Value::Object(m)
}

fn untwisted_trace(cfg: &ExperimentConfig) -> Result<ConstructionTrace, CommandError> {
    let params = UntwistedFluteParams::from_schedule(&cfg.surface.schedule, cfg.surface.count)?;
    Ok(construct_untwisted(&params))
}

fn twisted_params(cfg: &ExperimentConfig) -> Result<TwistedDeltaParams, CommandError> {
    Ok(TwistedDeltaParams::new(
        cfg.surface.delta.expect("validated"),
        cfg.surface.count,
    )?)
}

/// The truncation, refusing untwisted parameters whose circles overlap.
pub fn build_group(cfg: &ExperimentConfig) -> Result<GroupTruncation, CommandError> {
    match cfg.surface.kind {
        SurfaceKind::Untwisted => {
            let params = UntwistedFluteParams::from_schedule(&cfg.surface.schedule, cfg.surface.count)?;
            Ok(build_untwisted(&params)?)
        }
        SurfaceKind::TwistedDelta => Ok(build_twisted_delta(&twisted_params(cfg)?)),
    }
}

/// Pairwise margins of the `2N` bisector circles of the construction.
fn trace_margins(trace: &ConstructionTrace) -> (Vec<Value>, f64) {
    let circles = trace.circles();
    let mut out = Vec::new();
    let mut min = f64::INFINITY;
    for i in 0..circles.len() {
        for j in (i + 1)..circles.len() {
            let m = circles[i].2.separation(&circles[j].2);
            min = min.min(m);
            out.push(json!({"first": circles[i].0, "second": circles[j].0, "margin": num(m)}));
        }
    }
    (out, min)
}

fn schottky_json(r: &SchottkyReport) -> Value {
    json!({
        "family": "isometric",
        "minMargin": num(r.min_margin),
        "pass": r.pass,
        "margins": r.margins.iter().map(|m| json!({
            "first": m.first, "second": m.second, "margin": num(m.margin)
        })).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

fn translation_length(g: &flutelab::MoebiusTransform) -> Value {
    g.translation_length().map_or(Value::Null, num)
}

pub fn cmd_build(cfg: &ExperimentConfig) -> Result<Report, CommandError> {
    let mut warnings = Vec::new();
    if cfg.surface.count == 0 {
        warnings.push("empty surface: N = 0".to_string());
    }
    let mut root = Map::new();
    root.insert("command".into(), "build".into());
    root.insert("surface".into(), surface_json(cfg));
    let pass = match cfg.surface.kind {
        SurfaceKind::Untwisted => {
            let trace = untwisted_trace(cfg)?;
            let generators: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "n": s.n,
                        "xi": num(s.xi),
                        "eps": num(s.eps),
                        "p": point(&s.p),
                        "X": num(s.x),
                        "R": num(s.r),
                        "Xp": num(s.xp),
                        "K": num(s.k),
                        "alpha": num(s.alpha()),
                        "trace": num(s.trace),
                        "translationLength": translation_length(&s.f),
                    })
                })
                .collect();
            let (margins, min) = trace_margins(&trace);
            let pass = margins.is_empty() || min > 0.0;
            root.insert("generators".into(), Value::Array(generators));
            root.insert(
                "schottky".into(),
                json!({
                    "family": "dirichlet",
                    "basepoint": [num(0.0), num(1.0)],
                    "minMargin": num(min),
                    "pass": pass,
                    "margins": margins,
                }),
            );
            root.insert("traceThreshold".into(), trace.trace_threshold().into());
            pass
        }
        SurfaceKind::TwistedDelta => {
            let g = build_twisted_delta(&twisted_params(cfg)?);
            let Provenance::TwistedDelta { p, .. } = &g.provenance else {
                unreachable!("built from the delta family")
            };
            let generators: Vec<Value> = p
                .iter()
                .zip(&g.generators)
                .enumerate()
                .map(|(i, (pn, m))| {
                    json!({
                        "n": i + 1,
                        "p": big(pn),
                        "trace": num(m.trace()),
                        "translationLength": translation_length(m),
                    })
                })
                .collect();
            let report = check_schottky_isometric(&g);
            root.insert("p".into(), Value::Array(p.iter().map(big).collect()));
            root.insert("generators".into(), Value::Array(generators));
            root.insert("schottky".into(), schottky_json(&report));
            report.pass
        }
    };
    root.insert("pass".into(), pass.into());
    root.insert("warnings".into(), json!(warnings));
    Ok(json_report(Value::Object(root), pass, warnings))
}

struct Check {
    name: &'static str,
    expected: bool,
    observed: bool,
    residual: Option<f64>,
    detail: String,
}

impl Check {
    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "expected": self.expected,
            "observed": self.observed,
            "pass": self.expected == self.observed,
            "residual": self.residual.map_or(Value::Null, num),
            "detail": self.detail,
        })
    }
}

fn untwisted_checks(trace: &ConstructionTrace) -> Result<Vec<Check>, CommandError> {
    let g = GroupTruncation::custom(trace.steps.iter().map(|s| s.f).collect());
    let mut checks = Vec::new();
    let (_, min) = trace_margins(trace);
    let schottky = trace.steps.len() < 2 && min == f64::INFINITY || min > 0.0;
    checks.push(Check {
        name: "schottky",
        expected: true,
        observed: schottky,
        residual: min.is_finite().then_some(min),
        detail: "2N bisector circles pairwise disjoint; residual is the smallest margin".into(),
    });
    let nested = check_nested(&g);
    checks.push(Check {
        name: "nested",
        expected: true,
        observed: nested.pass,
        residual: None,
        detail: format!("{} crossing axis pairs", nested.crossing.len()),
    });
    let det = trace
        .steps
        .iter()
        .map(|s| (s.mp[0] * s.mp[3] - s.mp[1] * s.mp[2] - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "determinant",
        expected: true,
        observed: det < 1e-9,
        residual: Some(det),
        detail: "max |det - 1| of the unimodular matrices".into(),
    });
    let threshold = trace.trace_threshold();
    checks.push(Check {
        name: "traceBound",
        expected: true,
        observed: trace.steps.is_empty() || threshold.is_some(),
        residual: None,
        detail: match threshold {
            Some(n0) => format!("|trace| >= 5 from n = {n0} on"),
            None if trace.steps.is_empty() => "vacuous".into(),
            None => "no index from which |trace| >= 5".into(),
        },
    });
    let u = check_untwisted(&g, &unit_geodesic())?;
    checks.push(Check {
        name: "untwisted",
        expected: true,
        observed: u.pass,
        residual: Some(u.max_residual),
        detail: "axes orthogonal to (-1, 1): max |b + c|".into(),
    });
    let mut gap = 0.0f64;
    let mut depth = 0.0f64;
    for s in &trace.steps {
        let img = s.f.invert().apply(&PlanePoint::I);
        gap = gap
            .max((img.x() - s.p.x()).abs() / s.p.x().abs().max(1.0))
            .max((img.y() - s.p.y()).abs() / s.p.y());
        depth = depth.max((busemann(BoundaryPoint::Infinity, &s.p, &PlanePoint::I) - s.eps).abs());
    }
    checks.push(Check {
        name: "inverseImageOfI",
        expected: true,
        observed: gap < 1e-12,
        residual: Some(gap),
        detail: "f_n^-1(i) = p_n, max relative coordinate gap".into(),
    });
    checks.push(Check {
        name: "busemannDepth",
        expected: true,
        observed: depth < 1e-12,
        residual: Some(depth),
        detail: "B(p_n, i) = eps_n".into(),
    });
    Ok(checks)
}

fn twisted_checks(params: &TwistedDeltaParams) -> Result<Vec<Check>, CommandError> {
    let g = build_twisted_delta(params);
    let Provenance::TwistedDelta { p, .. } = &g.provenance else {
        unreachable!("built from the delta family")
    };
    let mut checks = Vec::new();
    let schottky = check_schottky_isometric(&g);
    checks.push(Check {
        name: "schottky",
        expected: true,
        observed: schottky.pass,
        residual: schottky.min_margin.is_finite().then_some(schottky.min_margin),
        detail: "isometric circles pairwise disjoint; residual is the smallest margin".into(),
    });
    let nested = check_nested(&g);
    checks.push(Check {
        name: "nested",
        expected: true,
        observed: nested.pass,
        residual: None,
        detail: format!("{} crossing axis pairs", nested.crossing.len()),
    });
    let exact = p
        .iter()
        .all(|pn| h_determinant_exact(pn, params.delta()).is_one());
    checks.push(Check {
        name: "determinant",
        expected: true,
        observed: exact,
        residual: Some(if exact { 0.0 } else { 1.0 }),
        detail: "ad - bc = 1 in exact rational arithmetic".into(),
    });
    let traces: Vec<f64> = g.generators.iter().map(|m| m.trace().abs()).collect();
    let n0 = traces.iter().rposition(|t| *t < 5.0).map_or(1, |i| i + 2);
    let bounded = n0 <= traces.len() || traces.is_empty();
    checks.push(Check {
        name: "traceBound",
        expected: true,
        observed: bounded,
        residual: None,
        detail: if traces.is_empty() {
            "vacuous".into()
        } else if bounded {
            format!("|trace| >= 5 from n = {n0} on")
        } else {
            "no index from which |trace| >= 5".into()
        },
    });
    let u = check_untwisted(&g, &unit_geodesic())?;
    checks.push(Check {
        name: "untwisted",
        expected: g.is_empty(),
        observed: u.pass,
        residual: Some(u.max_residual),
        detail: "the delta family is twisted, so (-1, 1) is not a common orthogonal".into(),
    });
    Ok(checks)
}

pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<Report, CommandError> {
    let mut warnings = Vec::new();
    if cfg.surface.count == 0 {
        warnings.push("empty surface: N = 0, every check is vacuous".to_string());
    }
    let checks = match cfg.surface.kind {
        SurfaceKind::Untwisted => untwisted_checks(&untwisted_trace(cfg)?)?,
        SurfaceKind::TwistedDelta => twisted_checks(&twisted_params(cfg)?)?,
    };
    let pass = checks.iter().all(|c| c.expected == c.observed);
    let value = json!({
        "command": "verify",
        "surface": surface_json(cfg),
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        "pass": pass,
        "warnings": warnings,
    });
    Ok(json_report(value, pass, warnings))
}

pub fn cmd_limits(cfg: &ExperimentConfig) -> Result<Report, CommandError> {
    let Some(delta) = cfg.surface.delta else {
        return Err(CommandError::Invalid(
            "limits needs kind = twisted-delta with delta > 1".into(),
        ));
    };
    let l = &cfg.limits;
    let mut rows = Vec::new();
    let mut pass = true;
    for k in l.k_min..=l.k_max {
        let r = busemann_along_words(delta, k, 1..=l.n_max, l.tolerance)
            .map_err(|e| CommandError::Invalid(e.to_string()))?;
        let ok = !r.non_convergent && r.error < l.tolerance;
        pass &= ok;
        rows.push(json!({
            "k": k,
            "target": num(r.target),
            "tail": num(r.tail),
            "error": num(r.error),
            "oscillation": num(r.oscillation),
            "nonConvergent": r.non_convergent,
            "pass": ok,
            "values": nums(&r.values),
        }));
    }
    let value = json!({
        "command": "limits",
        "delta": num(delta),
        "nMax": l.n_max,
        "tolerance": num(l.tolerance),
        "rows": rows,
        "pass": pass,
    });
    Ok(json_report(value, pass, Vec::new()))
}

fn cluster_json(c: &Cluster) -> Value {
    json!({
        "t": num(c.t),
        "spread": num(c.spread),
        "witnessCount": c.witness_count,
        "settled": c.settled,
        "settledFamily": c.settled_family,
        "witnessWords": c.witnesses.iter().map(|w| w.word.clone()).collect::<Vec<_>>(),
        "diagnostics": {
            "case": c.diagnostics.case,
            "residuals": nums(&c.diagnostics.residuals),
            "coeffTails": c.diagnostics.coeff_tails.iter().map(|t| nums(t)).collect::<Vec<_>>(),
        },
    })
}

pub fn cmd_scan(cfg: &ExperimentConfig) -> Result<Report, CommandError> {
    let g = build_group(cfg)?;
    let config = ScanConfig {
        word_radius: cfg.scan.word_radius,
        windows: cfg.scan.boundary_window.clone(),
        cluster_epsilon: cfg.scan.cluster_epsilon,
        min_witnesses: cfg.scan.min_witnesses,
        ..ScanConfig::default()
    };
    let report = tu_scan(&UnitTangent::vertical_at_i(), &g, &config);
    let stable: Vec<Value> = report
        .candidates
        .iter()
        .filter(|c| c.stable)
        .map(|c| cluster_json(&c.cluster))
        .collect();
    // Power-tower letters are not group words, so the δ family gets a
    // second scan over them alongside the word-ball one.
    let towers = match cfg.surface.delta {
        Some(delta) => {
            let r = tu_scan_power_towers(delta, cfg.limits.n_max, cfg.limits.k_max, &config)
                .map_err(|e| CommandError::Invalid(e.to_string()))?;
            json!({
                "nMax": cfg.limits.n_max,
                "kMax": cfg.limits.k_max,
                "targets": (0..=cfg.limits.k_max).map(|k| num(power_tower_target(delta, k))).collect::<Vec<_>>(),
                "candidates": r.candidates.iter().filter(|c| c.stable).map(|c| cluster_json(&c.cluster)).collect::<Vec<_>>(),
                "stableNonzero": r.stable_nonzero().iter().map(|c| num(c.cluster.t)).collect::<Vec<_>>(),
            })
        }
        None => Value::Null,
    };
    let value = json!({
        "command": "scan",
        "surface": surface_json(cfg),
        "vector": {"base": [num(0.0), num(1.0)], "forward": "infinity"},
        "config": {
            "wordRadius": config.word_radius,
            "boundaryWindow": nums(&config.windows),
            "clusterEpsilon": num(config.cluster_epsilon),
            "minWitnesses": config.min_witnesses,
        },
        "wordsExamined": report.words_examined,
        "windows": report.windows.iter().map(|w| json!({
            "window": num(w.window),
            "boundaryTolerance": num(w.boundary_tolerance),
            "passing": w.passing,
            "clusters": w.clusters.len(),
            "settled": w.clusters.iter().filter(|c| c.settled).count(),
        })).collect::<Vec<_>>(),
        "candidates": stable,
        "stableNonzero": report.stable_nonzero().iter().map(|c| num(c.cluster.t)).collect::<Vec<_>>(),
        "unstableClusters": report.candidates.iter().filter(|c| !c.stable).count(),
        "additivityNotes": report.additivity_notes,
        "powerTowers": towers,
        "caveat": report.caveat,
    });
    Ok(json_report(value, true, Vec::new()))
}

pub fn cmd_profile(cfg: &ExperimentConfig) -> Result<Report, CommandError> {
    let g = build_group(cfg)?;
    let p = &cfg.profile;
    let profile = thinness_profile_cells(
        &UnitTangent::vertical_at_i(),
        &g,
        p.t_max,
        p.steps,
        p.word_radius,
        p.cells,
    );
    let value = json!({
        "command": "profile",
        "surface": surface_json(cfg),
        "vector": {"base": [num(0.0), num(1.0)], "forward": "infinity"},
        "times": nums(&profile.times),
        "inj": nums(&profile.inj),
        "wordRadius": profile.word_radius,
        "genCount": profile.gen_count,
        "cellMinima": nums(&profile.cell_minima),
        "runningMinTail": nums(&profile.running_min_tail),
        "liminfProxy": num(profile.liminf_proxy),
        "tailIncreasing": profile.tail_strictly_increasing(),
        "caveat": "injectivity radii are upper bounds over words of the stated radius; \
liminfProxy is the minimum over the last cell of the grid",
    });
    Ok(json_report(value, true, Vec::new()))
}

/// Horocycle `Im z = 1` moved by `m`, as a circle tangent to the real axis.
fn horocycle_image(m: &flutelab::MoebiusTransform) -> Option<Primitive> {
    let [a, _, c, _] = m.normalized();
    if c == 0.0 {
        return None;
    }
    let r = 0.5 / (c * c);
    Some(Primitive::Circle {
        cx: a / c,
        cy: r,
        r,
        style: Style::Horocycle,
    })
}

pub fn cmd_render(cfg: &ExperimentConfig) -> Result<Report, CommandError> {
    let mut prims = Vec::new();
    let generators: Vec<flutelab::MoebiusTransform> = match cfg.surface.kind {
        SurfaceKind::Untwisted => {
            let trace = untwisted_trace(cfg)?;
            for (name, _, c) in trace.circles() {
                prims.push(Primitive::Semicircle {
                    center: c.center(),
                    radius: c.radius(),
                    style: Style::Boundary,
                });
                prims.push(Primitive::Label {
                    x: c.center(),
                    y: c.radius(),
                    text: name,
                });
            }
            trace.steps.iter().map(|s| s.f).collect()
        }
        SurfaceKind::TwistedDelta => {
            let g = build_twisted_delta(&twisted_params(cfg)?);
            let report = check_schottky_isometric(&g);
            for (name, c) in &report.circles {
                prims.push(Primitive::Semicircle {
                    center: c.center(),
                    radius: c.radius(),
                    style: Style::Boundary,
                });
                prims.push(Primitive::Label {
                    x: c.center(),
                    y: c.radius(),
                    text: name.clone(),
                });
            }
            g.generators
        }
    };
    for m in &generators {
        if let Ok(axis) = m.axis() {
            prims.push(geodesic(&axis, Style::Axis));
        }
    }
    prims.push(geodesic(&unit_geodesic(), Style::Orthogonal));
    prims.push(Primitive::VerticalRay {
        x: 0.0,
        y0: 1.0,
        style: Style::Ray,
    });
    prims.push(Primitive::HorizontalLine {
        y: 1.0,
        style: Style::Horocycle,
    });
    if let Some(h) = generators.first().and_then(horocycle_image) {
        prims.push(h);
    }
    prims.push(Primitive::Point { x: 0.0, y: 1.0 });
    prims.push(Primitive::Label {
        x: 0.0,
        y: 1.0,
        text: "i".into(),
    });
    Ok(Report {
        text: SvgScene::new(prims).render(),
        pass: true,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::load(text, "t", &[]).unwrap()
    }

    fn parse(r: &Report) -> Value {
        serde_json::from_str(&r.text).unwrap()
    }

    const TWISTED: &str = "[surface]\nkind = twisted-delta\nN = 6\ndelta = 3\n";

    #[test]
    fn build_reports_the_delta_sequence() {
        let r = cmd_build(&cfg(TWISTED)).unwrap();
        assert_eq!(parse(&r)["p"], json!([2, 5, 11, 23, 47, 95]));
    }

    #[test]
    fn default_untwisted_build_passes_with_increasing_traces() {
        let r = cmd_build(&cfg("")).unwrap();
        assert!(r.pass);
        let v = parse(&r);
        assert!(v["schottky"]["minMargin"].as_f64().unwrap() > 0.0);
        let traces: Vec<f64> = v["generators"]
            .as_array()
            .unwrap()
            .iter()
            .map(|g| g["trace"].as_f64().unwrap().abs())
            .collect();
        assert_eq!(traces.len(), 8);
        assert!(traces.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn literal_geometric_schedule_fails_build() {
        let r = cmd_build(&cfg("[surface]\nschedule = geometric\n")).unwrap();
        assert!(!r.pass);
        assert!(matches!(
            build_group(&cfg("[surface]\nschedule = geometric\n")),
            Err(CommandError::Construction(_))
        ));
    }

    #[test]
    fn verify_untwisted_and_twisted() {
        let r = cmd_verify(&cfg("")).unwrap();
        assert!(r.pass, "{}", r.text);
        let v = parse(&r);
        let untwisted = &v["checks"].as_array().unwrap()[4];
        assert_eq!(untwisted["name"], "untwisted");
        assert!(untwisted["residual"].as_f64().unwrap() < 1e-9);

        let r = cmd_verify(&cfg(TWISTED)).unwrap();
        let v = parse(&r);
        let u = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == "untwisted")
            .unwrap()
            .clone();
        assert_eq!(u["observed"], false);
        assert_eq!(u["pass"], true);
    }

    #[test]
    fn empty_surface_is_a_vacuous_pass() {
        let r = cmd_verify(&cfg("[surface]\nN = 0\n")).unwrap();
        assert!(r.pass, "{}", r.text);
        assert_eq!(r.warnings.len(), 1);
        let r = cmd_verify(&cfg("[surface]\nkind = twisted-delta\ndelta = 3\nN = 0\n")).unwrap();
        assert!(r.pass, "{}", r.text);
    }

    #[test]
    fn limits_rows_meet_the_tolerance() {
        let r = cmd_limits(&cfg(TWISTED)).unwrap();
        assert!(r.pass, "{}", r.text);
        let v = parse(&r);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        let t0 = rows[0]["target"].as_f64().unwrap();
        assert!((t0 - 9f64.ln()).abs() < 1e-15);
        assert!(matches!(cmd_limits(&cfg("")), Err(CommandError::Invalid(_))));
    }

    #[test]
    fn profile_tail_increases_on_default_surface() {
        let r = cmd_profile(&cfg("[profile]\nsteps = 60\nwordRadius = 2\ntMax = 30\n")).unwrap();
        let v = parse(&r);
        assert_eq!(v["times"].as_array().unwrap().len(), 60);
        assert_eq!(v["tailIncreasing"], true, "{}", r.text);
    }

    #[test]
    fn tower_scan_finds_the_first_targets() {
        let r = cmd_scan(&cfg("[surface]\nkind = twisted-delta\nN = 3\ndelta = 3\n[scan]\nwordRadius = 2\n")).unwrap();
        let v = parse(&r);
        let found: Vec<f64> = v["powerTowers"]["stableNonzero"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t.as_f64().unwrap())
            .collect();
        for k in 0..=3 {
            let target = power_tower_target(3.0, k);
            assert!(found.iter().any(|t| (t - target).abs() < 1e-2), "t_{k} = {target} not in {found:?}");
        }
        assert_eq!(parse(&cmd_scan(&cfg("[scan]\nwordRadius = 2\n")).unwrap())["powerTowers"], Value::Null);
    }

    #[test]
    fn render_is_deterministic() {
        let c = cfg(TWISTED);
        assert_eq!(cmd_render(&c).unwrap().text, cmd_render(&c).unwrap().text);
    }
}
