//! Experiment configuration: flat `key = value` lines under `[section]`
//! headers. See `docs/config.md` for the grammar.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use flutelab::flute::Schedule;

/// Where a piece of configuration text came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Position {
    pub source: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.source, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub position: Position,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.position, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn error(position: &Position, message: impl Into<String>) -> ConfigError {
    ConfigError {
        position: position.clone(),
        message: message.into(),
    }
}

/// A value with the position of its first character.
#[derive(Debug, Clone, PartialEq)]
pub struct RawValue {
    pub text: String,
    pub position: Position,
}

/// Parsed but untyped document, keyed by `(section, key)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub entries: BTreeMap<(String, String), RawValue>,
}

const SECTIONS: [(&str, &[&str]); 5] = [
    (
        "surface",
        &["kind", "N", "delta", "schedule", "xi1", "ratio", "growth", "xiBase", "epsBase"],
    ),
    ("scan", &["wordRadius", "boundaryWindow", "clusterEpsilon", "minWitnesses"]),
    ("profile", &["tMax", "steps", "wordRadius", "cells"]),
    ("limits", &["kMin", "kMax", "nMax", "tolerance"]),
    ("output", &["jsonPath", "svgPath"]),
];

fn known_keys(section: &str) -> Option<&'static [&'static str]> {
    SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k)
}

fn column_of(line: &str, part: &str) -> usize {
    // `part` is a subslice of `line`.
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

impl RawConfig {
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        let mut section: Option<String> = None;
        for (idx, line) in text.lines().enumerate() {
            let at = |part: &str| Position {
                source: source.to_string(),
                line: idx + 1,
                column: column_of(line, part),
            };
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') || body.starts_with(';') {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return Err(error(&at(body), "section header is missing ']'"));
                };
                let name = name.trim();
                if known_keys(name).is_none() {
                    return Err(error(&at(body), format!("unknown section [{name}]")));
                }
                section = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(error(&at(body), "expected `key = value`"));
            };
            let Some(current) = section.as_deref() else {
                return Err(error(&at(body), "key outside of any [section]"));
            };
            let key = key.trim();
            let value = value.trim();
            raw.insert(current, key, value, at(key), at(value_anchor(line, value)))?;
        }
        Ok(raw)
    }

    fn insert(
        &mut self,
        section: &str,
        key: &str,
        value: &str,
        key_at: Position,
        value_at: Position,
    ) -> Result<(), ConfigError> {
        let keys = known_keys(section)
            .ok_or_else(|| error(&key_at, format!("unknown section [{section}]")))?;
        if !keys.contains(&key) {
            return Err(error(
                &key_at,
                format!("unknown key `{key}` in [{section}]; expected one of {}", keys.join(", ")),
            ));
        }
        if value.is_empty() {
            return Err(error(&value_at, format!("`{key}` has no value")));
        }
        let slot = (section.to_string(), key.to_string());
        if let Some(prev) = self.entries.get(&slot) {
            // A later override replaces an earlier one; within a file a
            // repeated key is a mistake.
            if prev.position.source == key_at.source && key_at.source != "--set" {
                return Err(error(
                    &key_at,
                    format!("duplicate key `{key}` in [{section}] (first at {})", prev.position),
                ));
            }
        }
        self.entries.insert(
            slot,
            RawValue {
                text: value.to_string(),
                position: value_at,
            },
        );
        Ok(())
    }

    /// Applies one `section.key=value` override; `index` numbers overrides
    /// from 1 in error positions.
    pub fn set(&mut self, assignment: &str, index: usize) -> Result<(), ConfigError> {
        let at = |part: &str| Position {
            source: "--set".to_string(),
            line: index,
            column: column_of(assignment, part),
        };
        let Some((path, value)) = assignment.split_once('=') else {
            return Err(error(&at(assignment), "expected `section.key=value`"));
        };
        let Some((section, key)) = path.split_once('.') else {
            return Err(error(&at(path), "expected `section.key` before '='"));
        };
        let (section, key, value) = (section.trim(), key.trim(), value.trim());
        if known_keys(section).is_none() {
            return Err(error(&at(section), format!("unknown section [{section}]")));
        }
        let value_at = at(value_anchor(assignment, value));
        self.insert(section, key, value, at(key), value_at)
    }

    fn get(&self, section: &str, key: &str) -> Option<&RawValue> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }
}

/// Anchor for value positions; empty values point one past the '='.
fn value_anchor<'a>(line: &'a str, value: &'a str) -> &'a str {
    if value.is_empty() {
        let eq = line.find('=').map_or(line.len(), |i| i + 1);
        &line[eq..]
    } else {
        value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Untwisted,
    TwistedDelta,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Untwisted => "untwisted",
            SurfaceKind::TwistedDelta => "twisted-delta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub count: usize,
    /// Present exactly when `kind` is twisted-delta.
    pub delta: Option<f64>,
    /// Used by the untwisted kind.
    pub schedule: Schedule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSection {
    pub word_radius: usize,
    pub boundary_window: Vec<f64>,
    pub cluster_epsilon: f64,
    pub min_witnesses: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSection {
    pub t_max: f64,
    pub steps: usize,
    pub word_radius: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitsSection {
    pub k_min: usize,
    pub k_max: usize,
    pub n_max: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputSection {
    pub json_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub surface: SurfaceSpec,
    pub scan: ScanSection,
    pub profile: ProfileSection,
    pub limits: LimitsSection,
    pub output: OutputSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            surface: SurfaceSpec {
                kind: SurfaceKind::Untwisted,
                count: 8,
                delta: None,
                schedule: Schedule::default(),
            },
            scan: ScanSection {
                word_radius: 4,
                boundary_window: vec![1e2, 1e3, 1e4],
                cluster_epsilon: 0.05,
                min_witnesses: 3,
            },
            profile: ProfileSection {
                t_max: 40.0,
                steps: 200,
                word_radius: 3,
                cells: 4,
            },
            limits: LimitsSection {
                k_min: 0,
                k_max: 3,
                n_max: 20,
                tolerance: 1e-2,
            },
            output: OutputSection::default(),
        }
    }
}

fn parse_real(v: &RawValue, key: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .text
        .parse()
        .map_err(|_| error(&v.position, format!("`{key}` must be a number, got `{}`", v.text)))?;
    if !x.is_finite() {
        return Err(error(&v.position, format!("`{key}` must be finite")));
    }
    Ok(x)
}

fn positive_real(v: &RawValue, key: &str) -> Result<f64, ConfigError> {
    let x = parse_real(v, key)?;
    if x <= 0.0 {
        return Err(error(&v.position, format!("`{key}` must be positive, got {}", v.text)));
    }
    Ok(x)
}

fn count(v: &RawValue, key: &str) -> Result<usize, ConfigError> {
    v.text.parse().map_err(|_| {
        error(
            &v.position,
            format!("`{key}` must be a nonnegative integer, got `{}`", v.text),
        )
    })
}

fn positive_count(v: &RawValue, key: &str) -> Result<usize, ConfigError> {
    let n = count(v, key)?;
    if n == 0 {
        return Err(error(&v.position, format!("`{key}` must be positive")));
    }
    Ok(n)
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let get = |s: &str, k: &str| raw.get(s, k);

        let kind_value = get("surface", "kind");
        if let Some(v) = kind_value {
            cfg.surface.kind = match v.text.as_str() {
                "untwisted" => SurfaceKind::Untwisted,
                "twisted-delta" => SurfaceKind::TwistedDelta,
                other => {
                    return Err(error(
                        &v.position,
                        format!("unknown kind `{other}`; expected untwisted or twisted-delta"),
                    ))
                }
            };
        }
        if let Some(v) = get("surface", "N") {
            cfg.surface.count = count(v, "N")?;
        }
        let schedule_keys = ["schedule", "xi1", "ratio", "growth", "xiBase", "epsBase"];
        match cfg.surface.kind {
            SurfaceKind::TwistedDelta => {
                for k in schedule_keys {
                    if let Some(v) = get("surface", k) {
                        return Err(error(&v.position, format!("`{k}` applies only to kind = untwisted")));
                    }
                }
                let Some(v) = get("surface", "delta") else {
                    let at = kind_value.map(|v| v.position.clone()).unwrap_or(Position {
                        source: "config".into(),
                        line: 0,
                        column: 0,
                    });
                    return Err(error(&at, "kind = twisted-delta needs `delta` (delta > 1)"));
                };
                let delta = parse_real(v, "delta")?;
                if delta <= 1.0 {
                    return Err(error(&v.position, format!("delta > 1 required, got {}", v.text)));
                }
                cfg.surface.delta = Some(delta);
            }
            SurfaceKind::Untwisted => {
                if let Some(v) = get("surface", "delta") {
                    return Err(error(&v.position, "`delta` applies only to kind = twisted-delta"));
                }
                cfg.surface.schedule = schedule(raw)?;
            }
        }

        if let Some(v) = get("scan", "wordRadius") {
            cfg.scan.word_radius = positive_count(v, "wordRadius")?;
        }
        if let Some(v) = get("scan", "boundaryWindow") {
            let windows: Result<Vec<f64>, ConfigError> = v
                .text
                .split(',')
                .map(|part| {
                    positive_real(
                        &RawValue {
                            text: part.trim().to_string(),
                            position: v.position.clone(),
                        },
                        "boundaryWindow",
                    )
                })
                .collect();
            cfg.scan.boundary_window = windows?;
        }
        if let Some(v) = get("scan", "clusterEpsilon") {
            cfg.scan.cluster_epsilon = positive_real(v, "clusterEpsilon")?;
        }
        if let Some(v) = get("scan", "minWitnesses") {
            cfg.scan.min_witnesses = positive_count(v, "minWitnesses")?;
        }

        if let Some(v) = get("profile", "tMax") {
            cfg.profile.t_max = positive_real(v, "tMax")?;
        }
        if let Some(v) = get("profile", "steps") {
            cfg.profile.steps = count(v, "steps")?;
            if cfg.profile.steps < 2 {
                return Err(error(&v.position, "`steps` must be at least 2"));
            }
        }
        if let Some(v) = get("profile", "wordRadius") {
            cfg.profile.word_radius = positive_count(v, "wordRadius")?;
        }
        if let Some(v) = get("profile", "cells") {
            cfg.profile.cells = positive_count(v, "cells")?;
        }
        if cfg.profile.cells > cfg.profile.steps {
            let at = get("profile", "cells")
                .or(get("profile", "steps"))
                .map(|v| v.position.clone())
                .expect("defaults are consistent");
            return Err(error(&at, "`cells` must not exceed `steps`"));
        }

        if let Some(v) = get("limits", "kMin") {
            cfg.limits.k_min = count(v, "kMin")?;
        }
        if let Some(v) = get("limits", "kMax") {
            cfg.limits.k_max = count(v, "kMax")?;
        }
        if cfg.limits.k_min > cfg.limits.k_max {
            let at = get("limits", "kMin")
                .or(get("limits", "kMax"))
                .map(|v| v.position.clone())
                .expect("defaults are consistent");
            return Err(error(&at, "`kMin` must not exceed `kMax`"));
        }
        if let Some(v) = get("limits", "nMax") {
            cfg.limits.n_max = positive_count(v, "nMax")?;
        }
        if let Some(v) = get("limits", "tolerance") {
            cfg.limits.tolerance = positive_real(v, "tolerance")?;
        }

        cfg.output.json_path = get("output", "jsonPath").map(|v| PathBuf::from(&v.text));
        cfg.output.svg_path = get("output", "svgPath").map(|v| PathBuf::from(&v.text));
        Ok(cfg)
    }

    /// Parses a document and then applies overrides in order.
    pub fn load(text: &str, source: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::parse(text, source)?;
        for (i, o) in overrides.iter().enumerate() {
            raw.set(o, i + 1)?;
        }
        ExperimentConfig::from_raw(&raw)
    }
}

fn schedule(raw: &RawConfig) -> Result<Schedule, ConfigError> {
    let get = |k: &str| raw.get("surface", k);
    let name = get("schedule").map_or("separated", |v| v.text.as_str());
    match name {
        "separated" => {
            if let Some(v) = get("xiBase") {
                return Err(error(&v.position, "`xiBase` applies only to schedule = geometric"));
            }
            let Schedule::Separated {
                mut xi1,
                mut ratio,
                mut growth,
                mut eps_base,
            } = Schedule::default()
            else {
                unreachable!("the default schedule is separated")
            };
            if let Some(v) = get("xi1") {
                xi1 = positive_real(v, "xi1")?;
            }
            if let Some(v) = get("ratio") {
                ratio = positive_real(v, "ratio")?;
            }
            if let Some(v) = get("growth") {
                growth = positive_real(v, "growth")?;
            }
            if let Some(v) = get("epsBase") {
                eps_base = base_above_one(v, "epsBase")?;
            }
            Ok(Schedule::Separated {
                xi1,
                ratio,
                growth,
                eps_base,
            })
        }
        "geometric" => {
            for k in ["xi1", "ratio", "growth"] {
                if let Some(v) = get(k) {
                    return Err(error(&v.position, format!("`{k}` applies only to schedule = separated")));
                }
            }
            let xi_base = get("xiBase").map_or(Ok(4.0), |v| base_above_one(v, "xiBase"))?;
            let eps_base = get("epsBase").map_or(Ok(4.0), |v| base_above_one(v, "epsBase"))?;
            Ok(Schedule::Geometric { xi_base, eps_base })
        }
        other => Err(error(
            &get("schedule").expect("named schedule").position,
            format!("unknown schedule `{other}`; expected separated or geometric"),
        )),
    }
}

fn base_above_one(v: &RawValue, key: &str) -> Result<f64, ConfigError> {
    let x = parse_real(v, key)?;
    if x <= 1.0 {
        return Err(error(&v.position, format!("`{key}` > 1 required, got {}", v.text)));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::load(text, "test.ini", &[])
    }

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(load("").unwrap(), ExperimentConfig::default());
        assert_eq!(load("# only a comment\n\n; another\n").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn twisted_surface_and_sections() {
        let cfg = load(
            "[surface]\nkind = twisted-delta\nN = 6\ndelta = 3\n\n[scan]\nboundaryWindow = 10, 100\n\n[output]\njsonPath = out/report.json\n",
        )
        .unwrap();
        assert_eq!(cfg.surface.kind, SurfaceKind::TwistedDelta);
        assert_eq!(cfg.surface.count, 6);
        assert_eq!(cfg.surface.delta, Some(3.0));
        assert_eq!(cfg.scan.boundary_window, vec![10.0, 100.0]);
        assert_eq!(cfg.output.json_path, Some(PathBuf::from("out/report.json")));
    }

    #[test]
    fn small_delta_cites_the_bound_with_position() {
        let e = load("[surface]\nkind = twisted-delta\ndelta = 0.5\n").unwrap_err();
        assert!(e.message.contains("delta > 1"), "{e}");
        assert_eq!((e.position.line, e.position.column), (3, 9));
        assert_eq!(e.to_string(), "test.ini:3:9: delta > 1 required, got 0.5");
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        let e = load("[surface]\n  colour = red\n").unwrap_err();
        assert_eq!((e.position.line, e.position.column), (2, 3));
        assert!(e.message.contains("unknown key `colour`"));
        let e = load("[plot]\n").unwrap_err();
        assert!(e.message.contains("unknown section"));
        let e = load("N = 3\n").unwrap_err();
        assert!(e.message.contains("outside"));
    }

    #[test]
    fn malformed_lines() {
        assert!(load("[surface\n").unwrap_err().message.contains("']'"));
        assert!(load("[surface]\nN 3\n").unwrap_err().message.contains("key = value"));
        assert!(load("[surface]\nN =\n").unwrap_err().message.contains("no value"));
        assert!(load("[surface]\nN = -1\n").unwrap_err().message.contains("nonnegative"));
        assert!(load("[surface]\nN = 2\nN = 3\n").unwrap_err().message.contains("duplicate"));
        assert!(load("[profile]\nsteps = 1\n").is_err());
        assert!(load("[profile]\ntMax = 0\n").unwrap_err().message.contains("positive"));
        assert!(load("[scan]\nboundaryWindow = 10, x\n").is_err());
    }

    #[test]
    fn keys_must_match_the_kind() {
        let e = load("[surface]\ndelta = 3\n").unwrap_err();
        assert!(e.message.contains("twisted-delta"));
        let e = load("[surface]\nkind = twisted-delta\ndelta = 3\nratio = 2\n").unwrap_err();
        assert!(e.message.contains("untwisted"));
        let e = load("[surface]\nkind = twisted-delta\n").unwrap_err();
        assert!(e.message.contains("delta > 1"));
        let e = load("[surface]\nkind = flat\n").unwrap_err();
        assert!(e.message.contains("unknown kind"));
    }

    #[test]
    fn geometric_schedule() {
        let cfg = load("[surface]\nschedule = geometric\nxiBase = 3\n").unwrap();
        assert_eq!(
            cfg.surface.schedule,
            Schedule::Geometric {
                xi_base: 3.0,
                eps_base: 4.0
            }
        );
        assert!(load("[surface]\nschedule = geometric\nratio = 3\n").is_err());
        assert!(load("[surface]\nepsBase = 1\n").unwrap_err().message.contains("> 1"));
    }

    #[test]
    fn overrides_replace_file_values() {
        let text = "[surface]\nkind = twisted-delta\ndelta = 3\n";
        let cfg = ExperimentConfig::load(text, "f", &["surface.delta=5".into(), "surface.N=2".into()]).unwrap();
        assert_eq!(cfg.surface.delta, Some(5.0));
        assert_eq!(cfg.surface.count, 2);
        let e = ExperimentConfig::load(text, "f", &["surface.N=1".into(), "surface.delta=0.5".into()])
            .unwrap_err();
        assert_eq!(e.position.source, "--set");
        assert_eq!((e.position.line, e.position.column), (2, 15));
        let e = ExperimentConfig::load(text, "f", &["delta=3".into()]).unwrap_err();
        assert!(e.message.contains("section.key"));
        let e = ExperimentConfig::load(text, "f", &["surface.bogus=3".into()]).unwrap_err();
        assert!(e.message.contains("unknown key"));
    }
}
