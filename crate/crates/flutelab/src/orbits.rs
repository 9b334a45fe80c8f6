//! Horocycle orbit-closure tests along sequences of group elements, the
//! scan for candidate times `t` with `g_t u` in the closure of `h_R u`, and
//! finite-truncation limit-point diagnostics.
//!
//! Everything here looks at finitely many words, so a detected limit is a
//! trend at the chosen depth, never a proof.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::dynamics::UnitTangent;
use crate::flute::{delta_sequence, h_generator, GroupTruncation, Provenance};
use crate::moebius::MoebiusTransform;
use crate::plane::{intersection_angle, BoundaryPoint, Geodesic, PlanePoint};
use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("boundary images do not approach the target: last chordal distance {distance:.3e} exceeds {tolerance:.3e}")]
    ConditionOneFailed { distance: f64, tolerance: f64 },
    #[error("axis endpoints must satisfy 0 < y < x (got y = {y}, x = {x})")]
    InvalidAxis { y: f64, x: f64 },
    #[error("foot endpoint {beta} coincides with x/2")]
    DegenerateFoot { beta: f64 },
    #[error("foot geodesic does not meet the axis")]
    MissesAxis,
}

/// A family of words in the letters `h_p` of the δ-family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordSchema {
    /// `h_(p_n) h_(p_n^2) h_(p_n^4) … h_(p_n^(2^k))`.
    PowerTower { n: usize, k: usize },
    /// `h_(p_n)`.
    SingleGenerator { n: usize },
    /// A word whose label `n` stands for `h_(p_n)`.
    Custom(Word),
}

impl fmt::Display for WordSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSchema::PowerTower { n, k } => write!(f, "tower(n={n},k={k})"),
            WordSchema::SingleGenerator { n } => write!(f, "h(p{n})"),
            WordSchema::Custom(w) => write!(f, "{w}"),
        }
    }
}

fn check_delta(delta: f64) -> Result<(), OrbitError> {
    if delta.is_finite() && delta > 1.0 {
        Ok(())
    } else {
        Err(OrbitError::InvalidParams(format!(
            "delta must satisfy delta > 1 (got {delta})"
        )))
    }
}

fn letter(p: &BigInt, delta: f64) -> MoebiusTransform {
    h_generator(p.to_f64().expect("finite"), delta)
}

/// Matrix of a schema instance, multiplied left to right.
pub fn word_matrix(schema: &WordSchema, delta: f64) -> Result<MoebiusTransform, OrbitError> {
    check_delta(delta)?;
    let needed = match schema {
        WordSchema::PowerTower { n, .. } | WordSchema::SingleGenerator { n } => *n,
        WordSchema::Custom(w) => w.letters().iter().map(|l| l.label).max().unwrap_or(0),
    };
    let has_zero = match schema {
        WordSchema::PowerTower { n, .. } | WordSchema::SingleGenerator { n } => *n == 0,
        WordSchema::Custom(w) => w.letters().iter().any(|l| l.label == 0),
    };
    if has_zero {
        return Err(OrbitError::InvalidParams("letter indices start at 1".into()));
    }
    let p = delta_sequence(delta, needed);
    Ok(match schema {
        WordSchema::SingleGenerator { n } => letter(&p[n - 1], delta),
        WordSchema::PowerTower { n, k } => {
            let mut acc = MoebiusTransform::IDENTITY;
            let mut q = p[n - 1].clone();
            for _ in 0..=*k {
                acc = acc.compose(&letter(&q, delta));
                q = &q * &q;
            }
            acc
        }
        WordSchema::Custom(w) => w.evaluate(|label| letter(&p[label - 1], delta)),
    })
}

/// Values of `B_∞(γ_n⁻¹ i, i)` along power towers of fixed height.
#[derive(Debug, Clone, PartialEq)]
pub struct BusemannLimit {
    pub delta: f64,
    pub k: usize,
    pub ns: Vec<usize>,
    pub values: Vec<f64>,
    /// Last computed value, used as the limit estimate.
    pub tail: f64,
    /// `2 log(δ (δ+1)^k)`.
    pub target: f64,
    pub error: f64,
    /// Spread of the last three values.
    pub oscillation: f64,
    pub non_convergent: bool,
}

/// `2 log(δ (δ+1)^k)`.
pub fn power_tower_target(delta: f64, k: usize) -> f64 {
    2.0 * (delta.ln() + k as f64 * (delta + 1.0).ln())
}

pub fn busemann_along_words(
    delta: f64,
    k: usize,
    ns: std::ops::RangeInclusive<usize>,
    tolerance: f64,
) -> Result<BusemannLimit, OrbitError> {
    check_delta(delta)?;
    let ns: Vec<usize> = ns.collect();
    if ns.is_empty() || ns[0] == 0 {
        return Err(OrbitError::InvalidParams("n range must be nonempty and start at 1 or later".into()));
    }
    let p = delta_sequence(delta, *ns.last().unwrap());
    let values: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let mut acc = MoebiusTransform::IDENTITY;
            let mut q = p[n - 1].clone();
            for _ in 0..=k {
                acc = acc.compose(&letter(&q, delta));
                q = &q * &q;
            }
            acc.busemann_inverse_i()
        })
        .collect();
    let tail = *values.last().unwrap();
    let target = power_tower_target(delta, k);
    let last3 = &values[values.len().saturating_sub(3)..];
    let oscillation = last3.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - last3.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(BusemannLimit {
        delta,
        k,
        ns,
        tail,
        target,
        error: (tail - target).abs(),
        oscillation,
        non_convergent: oscillation > tolerance,
        values,
    })
}

/// Isometry taking `u` to the vertical vector at `i`.
pub fn normalizing_chart(u: &UnitTangent) -> MoebiusTransform {
    let to_infinity = match u.forward {
        BoundaryPoint::Infinity => MoebiusTransform::IDENTITY,
        _ => MoebiusTransform::sending_to_zero_infinity(u.backward(), u.forward)
            .expect("distinct endpoints"),
    };
    let w = to_infinity.apply(&u.base);
    let recenter = MoebiusTransform::new(1.0, -w.x(), 0.0, w.y()).expect("positive height");
    recenter.compose(&to_infinity)
}

fn conjugate(chart: &MoebiusTransform, g: &MoebiusTransform) -> MoebiusTransform {
    chart.compose(g).compose(&chart.invert())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceTolerances {
    /// Chordal distance on the boundary circle.
    pub boundary: f64,
    pub value: f64,
}

impl Default for SequenceTolerances {
    fn default() -> Self {
        SequenceTolerances {
            boundary: 1e-3,
            value: 1e-3,
        }
    }
}

/// Boundary and Busemann trends of a sequence, in the chart where the
/// vector is vertical at `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTrend {
    /// Chordal distance from `γ_n(∞)` to `α(∞)`.
    pub boundary_distances: Vec<f64>,
    /// `B_∞(γ_n⁻¹ i, α⁻¹ i)`.
    pub values: Vec<f64>,
    /// Elements are pairwise distinct and nontrivial.
    pub distinct: bool,
}

fn sequence_trend(
    u: &UnitTangent,
    alpha: &MoebiusTransform,
    seq: &[MoebiusTransform],
) -> SequenceTrend {
    let chart = normalizing_chart(u);
    let alpha = conjugate(&chart, alpha);
    let seq: Vec<MoebiusTransform> = seq.iter().map(|g| conjugate(&chart, g)).collect();
    let target = alpha.apply_boundary(BoundaryPoint::Infinity);
    let b_alpha = alpha.busemann_inverse_i();
    let boundary_distances = seq
        .iter()
        .map(|g| g.apply_boundary(BoundaryPoint::Infinity).chordal_distance(&target))
        .collect();
    let values = seq.iter().map(|g| g.busemann_inverse_i() - b_alpha).collect();
    let tol = 1e-12;
    let nontrivial = seq
        .iter()
        .all(|g| !g.approx_eq(&MoebiusTransform::IDENTITY, tol));
    let pairwise = (0..seq.len()).all(|i| (i + 1..seq.len()).all(|j| !seq[i].approx_eq(&seq[j], tol)));
    SequenceTrend {
        boundary_distances,
        values,
        distinct: nontrivial && pairwise && seq.len() >= 2,
    }
}

fn tail_converges(values: &[f64], tol: f64) -> (f64, f64) {
    let last3 = &values[values.len().saturating_sub(3)..];
    let spread = last3.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - last3.iter().copied().fold(f64::INFINITY, f64::min);
    let _ = tol;
    (*values.last().unwrap_or(&f64::NAN), spread)
}

fn condition_one(distances: &[f64], tol: f64) -> bool {
    match distances.last() {
        Some(&d) => d < tol,
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunvReport {
    pub trend: SequenceTrend,
    pub t_estimate: f64,
    /// Spread of the last three values.
    pub spread: f64,
    pub converged: bool,
    /// The sequence repeats elements or contains the identity.
    pub degenerate: bool,
}

impl TunvReport {
    /// Whether the data support `t` as the limit.
    pub fn accepts(&self, t: f64, tol: &SequenceTolerances) -> bool {
        self.converged && !self.degenerate && (self.t_estimate - t).abs() < tol.value
    }
}

/// Checks `γ_n(u(∞)) → α(u(∞))` and estimates `lim B(γ_n⁻¹ i, α⁻¹ i)`,
/// which is the time `t` with `g_t u` in the horocycle orbit closure when
/// both limits exist.
pub fn tunv_test(
    u: &UnitTangent,
    alpha: &MoebiusTransform,
    seq: &[MoebiusTransform],
    tol: &SequenceTolerances,
) -> Result<TunvReport, OrbitError> {
    let trend = sequence_trend(u, alpha, seq);
    if !condition_one(&trend.boundary_distances, tol.boundary) {
        return Err(OrbitError::ConditionOneFailed {
            distance: trend.boundary_distances.last().copied().unwrap_or(f64::NAN),
            tolerance: tol.boundary,
        });
    }
    let (t_estimate, spread) = tail_converges(&trend.values, tol.value);
    Ok(TunvReport {
        t_estimate,
        spread,
        converged: spread < tol.value,
        degenerate: !trend.distinct,
        trend,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceReport {
    pub trend: SequenceTrend,
    pub condition_one: bool,
    pub condition_two: bool,
    pub pass: bool,
}

/// Recurrence of the horocycle orbit along `seq`: `γ_n(u(∞)) → u(∞)` and
/// `B(γ_n⁻¹ i, i) → 0`, with pairwise distinct nontrivial elements.
pub fn recurrence_test(
    u: &UnitTangent,
    seq: &[MoebiusTransform],
    tol: &SequenceTolerances,
) -> RecurrenceReport {
    let trend = sequence_trend(u, &MoebiusTransform::IDENTITY, seq);
    let condition_one = condition_one(&trend.boundary_distances, tol.boundary);
    let (last, spread) = tail_converges(&trend.values, tol.value);
    let condition_two = spread < tol.value && last.abs() < tol.value;
    RecurrenceReport {
        pass: condition_one && condition_two && trend.distinct,
        condition_one,
        condition_two,
        trend,
    }
}

/// Parameters of a candidate-time scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub word_radius: usize,
    /// `|γ(∞)|` thresholds, swept in order.
    pub windows: Vec<f64>,
    pub cluster_epsilon: f64,
    pub min_witnesses: usize,
    /// Radius of the ball of `α` elements; 0 means `α` is the identity.
    pub alpha_radius: usize,
    /// Half-width `a` of the common orthogonal `(-a, a)` used by the
    /// coefficient diagnostics.
    pub orthogonal_half_width: f64,
    /// Witnesses kept per cluster in the report (deepest first).
    pub witnesses_kept: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            word_radius: 4,
            windows: vec![1e2, 1e3, 1e4],
            cluster_epsilon: 0.05,
            min_witnesses: 3,
            alpha_radius: 0,
            orthogonal_half_width: 1.0,
            witnesses_kept: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub word: String,
    /// Depth index: the lead generator label, or `n` for a power tower.
    pub level: usize,
    /// The word with labels shifted by the level, so that words sharing a
    /// shape form one family across levels.
    pub shape: String,
    pub t: f64,
    pub boundary: BoundaryPoint,
    /// Unimodular coefficients `(a, b, c, d)`; may overflow to infinity for
    /// long words.
    pub coefficients: [f64; 4],
}

/// Which of the three coefficient-limit patterns the deepest witnesses of a
/// cluster sit closest to.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseDiagnostics {
    /// 1, 2 or 3.
    pub case: usize,
    /// Residuals of the patterns `b, c → 0, ad → 1`; `b → -a²c,
    /// ad → 1 + a²c²`; `b → -a²c, d → 0` (with `a` the orthogonal
    /// half-width), evaluated on the deepest witness.
    pub residuals: [f64; 3],
    pub coeff_tails: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub t: f64,
    pub spread: f64,
    pub witness_count: usize,
    pub witnesses: Vec<Witness>,
    /// A shape family settles inside this cluster at its deepest levels.
    pub settled: bool,
    pub settled_family: Option<String>,
    pub diagnostics: CaseDiagnostics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowScan {
    pub window: f64,
    /// Chordal distance to ∞ equivalent to the window.
    pub boundary_tolerance: f64,
    pub passing: usize,
    pub clusters: Vec<Cluster>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub cluster: Cluster,
    /// Settled at every window of the sweep.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub words_examined: usize,
    pub windows: Vec<WindowScan>,
    /// Clusters at the widest window, with stability across the sweep.
    pub candidates: Vec<Candidate>,
    pub additivity_notes: Vec<String>,
    pub caveat: String,
}

impl ScanReport {
    pub fn stable_nonzero(&self) -> Vec<&Candidate> {
        self.candidates
            .iter()
            .filter(|c| c.stable && c.cluster.t.abs() > self.config.cluster_epsilon)
            .collect()
    }
}

const CAVEAT: &str = "finite-truncation evidence: candidates come from words up to the stated \
radius and depth; the list is neither complete nor certified";

struct Entry {
    word: String,
    level: usize,
    shape: String,
    t: f64,
    boundary: BoundaryPoint,
    m: MoebiusTransform,
}

fn shape_of(w: &Word) -> (usize, String) {
    let lead = w.lead().unwrap_or(0);
    let parts: Vec<String> = w
        .letters()
        .iter()
        .map(|l| format!("({},{})", l.label as i64 - lead as i64, l.exponent))
        .collect();
    (lead, parts.join(""))
}

/// Scans words of the ball for limits `B_∞(γ⁻¹ i, α⁻¹ i)` along sequences
/// with `γ(∞)` far out, for the vector `u`.
pub fn tu_scan(u: &UnitTangent, g: &GroupTruncation, config: &ScanConfig) -> ScanReport {
    let chart = normalizing_chart(u);
    let conj = GroupTruncation {
        generators: g.generators.iter().map(|m| conjugate(&chart, m)).collect(),
        labels: g.labels.clone(),
        provenance: Provenance::Custom,
    };
    let ball = conj.ball(config.word_radius);
    let alphas: Vec<(Word, MoebiusTransform)> = if config.alpha_radius == 0 {
        vec![(Word::identity(), MoebiusTransform::IDENTITY)]
    } else {
        conj.ball(config.alpha_radius).elements
    };
    let mut entries = Vec::new();
    for (aw, am) in &alphas {
        let target = am.apply_boundary(BoundaryPoint::Infinity);
        let b_alpha = am.busemann_inverse_i();
        for (w, m) in ball.elements.iter().skip(1) {
            let (level, mut shape) = shape_of(w);
            let mut word = w.to_string();
            if !aw.is_identity() {
                shape = format!("{shape}|{aw}");
                word = format!("{word} | alpha {aw}");
            }
            entries.push((
                Entry {
                    word,
                    level,
                    shape,
                    t: m.busemann_inverse_i() - b_alpha,
                    boundary: m.apply_boundary(BoundaryPoint::Infinity),
                    m: *m,
                },
                target,
            ));
        }
    }
    let words_examined = entries.len();
    let sweep = config
        .windows
        .iter()
        .map(|&window| {
            let threshold = 2.0 / window.hypot(1.0);
            let passing: Vec<&Entry> = entries
                .iter()
                .filter(|(e, target)| e.boundary.chordal_distance(target) < threshold)
                .map(|(e, _)| e)
                .collect();
            scan_window(window, threshold, &passing, config)
        })
        .collect();
    finish(config, words_examined, sweep)
}

/// The scan on the δ-family with `u` vertical at `i`, restricted to power
/// towers `n ≤ n_max`, `k ≤ k_max`; level is `n` and shape is `k`.
pub fn tu_scan_power_towers(
    delta: f64,
    n_max: usize,
    k_max: usize,
    config: &ScanConfig,
) -> Result<ScanReport, OrbitError> {
    check_delta(delta)?;
    let p = delta_sequence(delta, n_max);
    let mut entries = Vec::new();
    for k in 0..=k_max {
        for n in 1..=n_max {
            let mut m = MoebiusTransform::IDENTITY;
            let mut q = p[n - 1].clone();
            for _ in 0..=k {
                m = m.compose(&letter(&q, delta));
                q = &q * &q;
            }
            entries.push(Entry {
                word: WordSchema::PowerTower { n, k }.to_string(),
                level: n,
                shape: format!("k={k}"),
                t: m.busemann_inverse_i(),
                boundary: m.apply_boundary(BoundaryPoint::Infinity),
                m,
            });
        }
    }
    let words_examined = entries.len();
    let sweep = config
        .windows
        .iter()
        .map(|&window| {
            let threshold = 2.0 / window.hypot(1.0);
            let passing: Vec<&Entry> = entries
                .iter()
                .filter(|e| e.boundary.chordal_distance(&BoundaryPoint::Infinity) < threshold)
                .collect();
            scan_window(window, threshold, &passing, config)
        })
        .collect();
    Ok(finish(config, words_examined, sweep))
}

fn finish(config: &ScanConfig, words_examined: usize, sweep: Vec<WindowScan>) -> ScanReport {
    let eps = config.cluster_epsilon;
    let candidates: Vec<Candidate> = sweep
        .first()
        .map(|widest| {
            widest
                .clusters
                .iter()
                .map(|c| Candidate {
                    stable: c.settled
                        && sweep.iter().all(|ws| {
                            ws.clusters
                                .iter()
                                .any(|o| o.settled && (o.t - c.t).abs() <= eps)
                        }),
                    cluster: c.clone(),
                })
                .collect()
        })
        .unwrap_or_default();
    let additivity_notes = additivity(&candidates, eps);
    ScanReport {
        config: config.clone(),
        words_examined,
        windows: sweep,
        candidates,
        additivity_notes,
        caveat: CAVEAT.to_string(),
    }
}

/// Candidate times should be closed under sums; flags sums in range that
/// have no nearby cluster. Reported only.
fn additivity(candidates: &[Candidate], eps: f64) -> Vec<String> {
    let ts: Vec<f64> = candidates
        .iter()
        .filter(|c| c.stable && c.cluster.t.abs() > eps)
        .map(|c| c.cluster.t)
        .collect();
    let Some(max) = ts.iter().copied().reduce(f64::max) else {
        return Vec::new();
    };
    let mut notes = Vec::new();
    for (i, &a) in ts.iter().enumerate() {
        for &b in &ts[i..] {
            let s = a + b;
            if s > max + eps {
                continue;
            }
            if !ts.iter().any(|&t| (t - s).abs() <= eps) {
                notes.push(format!(
                    "sum {a:.6} + {b:.6} = {s:.6} has no stable cluster within {eps}"
                ));
            }
        }
    }
    notes
}

fn scan_window(window: f64, threshold: f64, passing: &[&Entry], config: &ScanConfig) -> WindowScan {
    let eps = config.cluster_epsilon;
    let mut order: Vec<usize> = (0..passing.len()).collect();
    order.sort_by(|&i, &j| {
        passing[i]
            .t
            .total_cmp(&passing[j].t)
            .then_with(|| passing[i].word.cmp(&passing[j].word))
    });
    // Shape families over everything that passes the window.
    let mut families: BTreeMap<&str, Vec<&Entry>> = BTreeMap::new();
    for e in passing {
        families.entry(e.shape.as_str()).or_default().push(e);
    }
    for f in families.values_mut() {
        f.sort_by_key(|e| e.level);
    }
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=order.len() {
        let split = k == order.len() || passing[order[k]].t - passing[order[k - 1]].t > eps;
        if !split {
            continue;
        }
        let members: Vec<&Entry> = order[start..k].iter().map(|&i| passing[i]).collect();
        start = k;
        if members.len() < config.min_witnesses {
            continue;
        }
        clusters.push(build_cluster(&members, &families, config));
    }
    WindowScan {
        window,
        boundary_tolerance: threshold,
        passing: passing.len(),
        clusters,
    }
}

/// A family settles at value `v` when its three deepest levels are
/// consecutive, lie within `eps` of the deepest value, and the step sizes
/// do not grow.
fn settles(family: &[&Entry], eps: f64) -> Option<f64> {
    if family.len() < 3 {
        return None;
    }
    let tail = &family[family.len() - 3..];
    if tail[1].level != tail[0].level + 1 || tail[2].level != tail[1].level + 1 {
        return None;
    }
    let deepest = tail[2].t;
    if tail.iter().any(|e| (e.t - deepest).abs() > eps) {
        return None;
    }
    let d1 = (tail[1].t - tail[0].t).abs();
    let d2 = (tail[2].t - tail[1].t).abs();
    (d2 <= d1).then_some(deepest)
}

fn build_cluster(
    members: &[&Entry],
    families: &BTreeMap<&str, Vec<&Entry>>,
    config: &ScanConfig,
) -> Cluster {
    let eps = config.cluster_epsilon;
    let lo = members.first().unwrap().t;
    let hi = members.last().unwrap().t;
    let mut shapes: Vec<&str> = members.iter().map(|e| e.shape.as_str()).collect();
    shapes.sort_unstable();
    shapes.dedup();
    let mut settled = None;
    for s in shapes {
        let family = &families[s];
        let deepest_inside = members
            .iter()
            .any(|m| std::ptr::eq(*m, *family.last().unwrap()));
        if !deepest_inside {
            continue;
        }
        if let Some(v) = settles(family, eps) {
            settled = Some((s.to_string(), v));
            break;
        }
    }
    let mut by_depth: Vec<&Entry> = members.to_vec();
    by_depth.sort_by(|a, b| b.level.cmp(&a.level).then_with(|| a.word.cmp(&b.word)));
    let t = match &settled {
        Some((_, v)) => *v,
        None => by_depth[0].t,
    };
    let witnesses: Vec<Witness> = by_depth
        .iter()
        .take(config.witnesses_kept)
        .map(|e| Witness {
            word: e.word.clone(),
            level: e.level,
            shape: e.shape.clone(),
            t: e.t,
            boundary: e.boundary,
            coefficients: e.m.normalized(),
        })
        .collect();
    let coeff_tails: Vec<[f64; 4]> = witnesses.iter().take(3).map(|w| w.coefficients).collect();
    let residuals = case_residuals(coeff_tails[0], config.orthogonal_half_width);
    let case = 1 + (0..3)
        .min_by(|&i, &j| residuals[i].total_cmp(&residuals[j]))
        .unwrap();
    Cluster {
        t,
        spread: hi - lo,
        witness_count: members.len(),
        witnesses,
        settled: settled.is_some(),
        settled_family: settled.map(|(s, _)| s),
        diagnostics: CaseDiagnostics {
            case,
            residuals,
            coeff_tails,
        },
    }
}

/// Residuals of the three coefficient patterns for the common orthogonal
/// `(-a, a)`.
pub fn case_residuals(m: [f64; 4], half_width: f64) -> [f64; 3] {
    let [a, b, c, d] = m;
    let a2 = half_width * half_width;
    [
        b.abs() + c.abs() + (a * d - 1.0).abs(),
        (b + a2 * c).abs() + (a * d - 1.0 - a2 * c * c).abs(),
        (b + a2 * c).abs() + d.abs(),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootAngle {
    pub beta: f64,
    /// Angle with `(0, ∞)` from `[β; 0; ∞; x/2] = (1 + cos θ)/2`.
    pub theta: f64,
    pub foot: Geodesic,
    /// `|angle(foot, axis) - π/2|`.
    pub orthogonality_residual: f64,
}

/// The geodesic through `x/2` orthogonal to the axis `(y, x)`, which ends
/// at `β = -x²/(2y) + 3x/2`, and its angle with the imaginary axis.
pub fn orthogonal_foot_angle(y: f64, x: f64) -> Result<FootAngle, OrbitError> {
    if !(y.is_finite() && x.is_finite() && 0.0 < y && y < x) {
        return Err(OrbitError::InvalidAxis { y, x });
    }
    let half = x / 2.0;
    let beta = -x * x / (2.0 * y) + 1.5 * x;
    if (beta - half).abs() <= 1e-12 * x {
        return Err(OrbitError::DegenerateFoot { beta });
    }
    let foot = Geodesic::between(beta, half).map_err(|_| OrbitError::DegenerateFoot { beta })?;
    let axis = Geodesic::between(y, x).expect("y < x");
    let angle = intersection_angle(&foot, &axis).map_err(|_| OrbitError::MissesAxis)?;
    // [β; 0; ∞; x/2] reduces to (0 - x/2)/(β - x/2).
    let ratio = half / (half - beta);
    let theta = (2.0 * ratio - 1.0).clamp(-1.0, 1.0).acos();
    Ok(FootAngle {
        beta,
        theta,
        foot,
        orthogonality_residual: (angle - std::f64::consts::FRAC_PI_2).abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripCensus {
    pub lower: f64,
    pub upper: f64,
    /// Orbit points `γ i` with `Im` in `(lower, upper)`, by word radius.
    pub count_by_radius: Vec<usize>,
    /// Largest `|Re γ i|` among them, by word radius.
    pub max_abs_re_by_radius: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitPointReport {
    pub word_radius: usize,
    /// `sup Im(γ i)` over words of length `≤ r`, for `r = 0..=radius`.
    pub sup_im_by_radius: Vec<f64>,
    pub strips: Vec<StripCensus>,
    pub caveat: String,
}

impl LimitPointReport {
    pub fn sup_im(&self) -> f64 {
        *self.sup_im_by_radius.last().unwrap()
    }
}

pub const DEFAULT_STRIPS: [(f64, f64); 3] = [(0.5, 2.0), (0.05, 0.5), (0.005, 0.05)];

/// Orbit of `i` over the word ball: bounded heights are evidence that ∞ is
/// not horocyclic, and growing `|Re|` inside a strip is evidence of orbit
/// points escaping at bounded height.
pub fn limit_point_diagnostic(
    g: &GroupTruncation,
    radius: usize,
    strips: &[(f64, f64)],
) -> LimitPointReport {
    let ball = g.ball(radius);
    let mut sup_im = vec![f64::NEG_INFINITY; radius + 1];
    let mut census: Vec<StripCensus> = strips
        .iter()
        .map(|&(lower, upper)| StripCensus {
            lower,
            upper,
            count_by_radius: vec![0; radius + 1],
            max_abs_re_by_radius: vec![0.0; radius + 1],
        })
        .collect();
    for (w, m) in &ball.elements {
        let z = m.apply(&PlanePoint::I);
        let len = w.len();
        for r in len..=radius {
            sup_im[r] = sup_im[r].max(z.y());
            for s in census.iter_mut() {
                if s.lower < z.y() && z.y() < s.upper {
                    s.count_by_radius[r] += 1;
                    s.max_abs_re_by_radius[r] = s.max_abs_re_by_radius[r].max(z.x().abs());
                }
            }
        }
    }
    LimitPointReport {
        word_radius: radius,
        sup_im_by_radius: sup_im,
        strips: census,
        caveat: "evidence at the stated word radius, not a classification of limit points".into(),
    }
}
