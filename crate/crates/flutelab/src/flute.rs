//! The two explicit flute groups: the untwisted family built from rays
//! `(ξ_n, ε_n)` and the twisted δ-family, plus Schottky, nesting,
//! untwistedness and fundamental-domain checks on a truncation.

use std::f64::consts::FRAC_PI_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::moebius::{bisector_halfplane, Classification, MoebiusError, MoebiusTransform, Side};
use crate::plane::{intersection_angle, BoundaryPoint, EuclideanCircle, Geodesic, PlanePoint};
use crate::words::WordBall;

/// Default tolerance for geometric predicates.
pub const GEOMETRIC_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FluteError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(
        "circles {first} and {second} overlap (margin {margin:e}); \
         generators {n} (xi = {xi_n:e}, eps = {eps_n:e}) and {k} (xi = {xi_k:e}, eps = {eps_k:e})"
    )]
    SchottkyViolation {
        n: usize,
        k: usize,
        first: String,
        second: String,
        margin: f64,
        xi_n: f64,
        eps_n: f64,
        xi_k: f64,
        eps_k: f64,
    },
    #[error("generator {label} has its axis on the candidate orthogonal")]
    DegenerateAxis { label: usize },
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// Parameter schedules for the untwisted family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// `ξ_n = xi_base^n`, `ε_n = eps_base^(-n)`.
    Geometric { xi_base: f64, eps_base: f64 },
    /// `ε_n = eps_base^(-n)`, `ξ_1 = xi1` and
    /// `ξ_(n+1) = ratio · n^growth · ξ_n / ε_n`.
    ///
    /// The factor `ξ_n / ε_n` is about the size of the n-th bisector circle,
    /// so `ratio ≳ 16` keeps the circles apart; `growth > 0` makes the gap
    /// between consecutive circles grow without bound.
    Separated {
        xi1: f64,
        ratio: f64,
        growth: f64,
        eps_base: f64,
    },
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Separated {
            xi1: 4.0,
            ratio: 16.0,
            growth: 1.0,
            eps_base: 2.0,
        }
    }
}

impl Schedule {
    pub fn sequences(&self, count: usize) -> (Vec<f64>, Vec<f64>) {
        match *self {
            Schedule::Geometric { xi_base, eps_base } => (1..=count)
                .map(|n| (xi_base.powi(n as i32), eps_base.powi(-(n as i32))))
                .unzip(),
            Schedule::Separated {
                xi1,
                ratio,
                growth,
                eps_base,
            } => {
                let eps: Vec<f64> = (1..=count).map(|n| eps_base.powi(-(n as i32))).collect();
                let mut xi = Vec::with_capacity(count);
                for n in 1..=count {
                    let next = if n == 1 {
                        xi1
                    } else {
                        let prev = xi[n - 2];
                        ratio * ((n - 1) as f64).powf(growth) * prev / eps[n - 2]
                    };
                    xi.push(next);
                }
                (xi, eps)
            }
        }
    }
}

/// Rays `ξ_1 < ξ_2 < …` and depths `ε_1 > ε_2 > … > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UntwistedFluteParams {
    xi: Vec<f64>,
    eps: Vec<f64>,
}

impl UntwistedFluteParams {
    pub fn new(xi: Vec<f64>, eps: Vec<f64>) -> Result<Self, FluteError> {
        let bad = |m: &str| Err(FluteError::InvalidParams(m.to_string()));
        if xi.len() != eps.len() {
            return bad("xi and eps must have the same length");
        }
        if xi.iter().chain(eps.iter()).any(|v| !(v.is_finite() && *v > 0.0)) {
            return bad("xi and eps must be finite and positive");
        }
        if xi.windows(2).any(|w| w[1] <= w[0]) {
            return bad("xi must be strictly increasing");
        }
        if eps.windows(2).any(|w| w[1] >= w[0]) {
            return bad("eps must be strictly decreasing");
        }
        Ok(UntwistedFluteParams { xi, eps })
    }

    pub fn from_schedule(schedule: &Schedule, count: usize) -> Result<Self, FluteError> {
        let (xi, eps) = schedule.sequences(count);
        UntwistedFluteParams::new(xi, eps)
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }
}

/// Everything computed for one generator of the untwisted family.
#[derive(Debug, Clone, PartialEq)]
pub struct UntwistedStep {
    pub n: usize,
    pub xi: f64,
    pub eps: f64,
    /// The point on the ray from `i` to `ξ_n` at height `e^(-ε_n)`.
    pub p: PlanePoint,
    pub y: f64,
    pub i_n: f64,
    /// `X_n`, center of `C_n`.
    pub x: f64,
    /// `R_n`, radius of `C_n`.
    pub r: f64,
    /// `R_n² - X_n²`, kept separately because it is large and negative.
    pub d: f64,
    /// Bisector of `[i, p_n]`.
    pub c: EuclideanCircle,
    /// Reflection of `C_n` in the unit semicircle.
    pub cp: EuclideanCircle,
    pub xp: f64,
    pub k: f64,
    pub f: MoebiusTransform,
    /// Unimodular matrix of `f_n`.
    pub mp: [f64; 4],
    /// Trace of `mp`, equal to `(1 + R² - X²)/R`.
    pub trace: f64,
}

impl UntwistedStep {
    /// Left endpoint `X_n - R_n` of `C_n`.
    pub fn alpha(&self) -> f64 {
        self.c.endpoints().0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionTrace {
    pub steps: Vec<UntwistedStep>,
}

impl ConstructionTrace {
    /// Smallest index from which every normalized trace has absolute value
    /// at least 5, if any.
    pub fn trace_threshold(&self) -> Option<usize> {
        let mut first = None;
        for s in self.steps.iter().rev() {
            if s.trace.abs() >= 5.0 {
                first = Some(s.n);
            } else {
                break;
            }
        }
        first
    }

    /// The `2N` circles `C_1, C'_1, …` with their names.
    pub fn circles(&self) -> Vec<(String, usize, EuclideanCircle)> {
        self.steps
            .iter()
            .flat_map(|s| {
                [
                    (format!("C{}", s.n), s.n, s.c),
                    (format!("C'{}", s.n), s.n, s.cp),
                ]
            })
            .collect()
    }
}

fn untwisted_step(n: usize, xi: f64, eps: f64) -> UntwistedStep {
    let i_n = (-eps).exp();
    let one_minus_i = -(-eps).exp_m1();
    // Ray from i to ξ: center (ξ - 1/ξ)/2, radius (ξ + 1/ξ)/2; take the
    // crossing with Im z = I on the ξ side.
    let center = 0.5 * (xi - 1.0 / xi);
    let radius = 0.5 * (xi + 1.0 / xi);
    let y = center + ((radius - i_n) * (radius + i_n)).sqrt();
    let x = y / one_minus_i;
    // R² = I (1 + X²) and R² - X² = I - X Y, both free of cancellation.
    let r = (i_n * x.mul_add(x, 1.0)).sqrt();
    let d = i_n - x * y;
    let c = EuclideanCircle::new(x, r).expect("positive radius");
    let xp = -x / d;
    let k = r / d.abs();
    let cp = EuclideanCircle::new(xp, k).expect("positive radius");
    let f = MoebiusTransform::from_unimodular(1.0 / r, -x / r, x / r, d / r);
    let mp = [1.0 / r, -x / r, x / r, d / r];
    UntwistedStep {
        n,
        xi,
        eps,
        p: PlanePoint::new(y, i_n).expect("positive height"),
        y,
        i_n,
        x,
        r,
        d,
        c,
        cp,
        xp,
        k,
        f,
        mp,
        trace: (1.0 + d) / r,
    }
}

/// Runs the untwisted construction without checking Schottky position.
pub fn construct_untwisted(params: &UntwistedFluteParams) -> ConstructionTrace {
    ConstructionTrace {
        steps: params
            .xi
            .iter()
            .zip(params.eps.iter())
            .enumerate()
            .map(|(k, (&xi, &eps))| untwisted_step(k + 1, xi, eps))
            .collect(),
    }
}

/// Pairwise margins `|c1 - c2| - (r1 + r2)` of the `2N` circles, in index
/// order.
fn trace_margins(trace: &ConstructionTrace) -> Vec<PairMargin> {
    let circles = trace.circles();
    let mut out = Vec::new();
    for i in 0..circles.len() {
        for j in (i + 1)..circles.len() {
            out.push(PairMargin {
                first: circles[i].0.clone(),
                second: circles[j].0.clone(),
                first_label: circles[i].1,
                second_label: circles[j].1,
                margin: circles[i].2.separation(&circles[j].2),
            });
        }
    }
    out
}

/// Builds the untwisted truncation and refuses parameters whose circles
/// overlap.
pub fn build_untwisted(params: &UntwistedFluteParams) -> Result<GroupTruncation, FluteError> {
    let trace = construct_untwisted(params);
    if let Some(bad) = trace_margins(&trace).into_iter().find(|m| m.margin <= 0.0) {
        let (n, k) = (bad.first_label, bad.second_label);
        return Err(FluteError::SchottkyViolation {
            n,
            k,
            first: bad.first,
            second: bad.second,
            margin: bad.margin,
            xi_n: params.xi[n - 1],
            eps_n: params.eps[n - 1],
            xi_k: params.xi[k - 1],
            eps_k: params.eps[k - 1],
        });
    }
    Ok(GroupTruncation::from_trace(trace))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistedDeltaParams {
    delta: f64,
    count: usize,
}

impl TwistedDeltaParams {
    pub fn new(delta: f64, count: usize) -> Result<Self, FluteError> {
        if !(delta.is_finite() && delta > 1.0) {
            return Err(FluteError::InvalidParams(format!(
                "delta must satisfy delta > 1 (got {delta})"
            )));
        }
        Ok(TwistedDeltaParams { delta, count })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

fn exact(delta: f64) -> BigRational {
    BigRational::from_float(delta).expect("finite delta")
}

/// The integer sequence `p_1 = 1 + ⌊(δ-1)/2⌋`,
/// `p_(n+1) = 1 + ⌊(δ+1) p_n / (δ-1)⌋`, evaluated exactly with `δ` taken as
/// the exact rational value of the float.
pub fn delta_sequence(delta: f64, count: usize) -> Vec<BigInt> {
    let d = exact(delta);
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut p = BigInt::one() + ((&d - &one) / &two).floor().to_integer();
    let growth = (&d + &one) / (&d - &one);
    for _ in 0..count {
        out.push(p.clone());
        let next = (&growth * BigRational::from_integer(p.clone())).floor().to_integer();
        p = BigInt::one() + next;
    }
    out
}

/// Exact coefficients `(a, b, c, d)` of `h_p`.
pub fn h_coefficients_exact(p: &BigInt, delta: &BigRational) -> [BigRational; 4] {
    let pr = BigRational::from_integer(p.clone());
    let q = &pr * &pr + BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    [
        delta + &two * &pr / &q,
        &pr + &q * delta,
        BigRational::one() / &pr,
        &q / &pr,
    ]
}

/// Exact determinant of the δ-family generator at index `p`.
pub fn h_determinant_exact(p: &BigInt, delta: f64) -> BigRational {
    let [a, b, c, d] = h_coefficients_exact(p, &exact(delta));
    a * d - b * c
}

/// `h_p` with `a = δ + 2p/(p²+1)`, `b = p + (p²+1)δ`, `c = 1/p`,
/// `d = (p²+1)/p`. The entries are stored divided by `p` so that the
/// power-of-`p` letters used in long words stay in range.
pub fn h_generator(p: f64, delta: f64) -> MoebiusTransform {
    let inv = 1.0 / p;
    let s = p + inv;
    MoebiusTransform::from_scaled(
        (delta + 2.0 / s) * inv,
        1.0 + delta * s,
        inv * inv,
        1.0 + inv * inv,
        p.ln(),
    )
}

pub fn build_twisted_delta(params: &TwistedDeltaParams) -> GroupTruncation {
    let p = delta_sequence(params.delta, params.count);
    let generators = p
        .iter()
        .map(|pn| h_generator(pn.to_f64().expect("representable"), params.delta))
        .collect();
    GroupTruncation {
        generators,
        labels: (1..=params.count).collect(),
        provenance: Provenance::TwistedDelta {
            delta: params.delta,
            p,
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Untwisted(ConstructionTrace),
    TwistedDelta { delta: f64, p: Vec<BigInt> },
    Custom,
}

/// The first `N` generators of a flute group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupTruncation {
    pub generators: Vec<MoebiusTransform>,
    pub labels: Vec<usize>,
    pub provenance: Provenance,
}

impl GroupTruncation {
    pub fn custom(generators: Vec<MoebiusTransform>) -> Self {
        let labels = (1..=generators.len()).collect();
        GroupTruncation {
            generators,
            labels,
            provenance: Provenance::Custom,
        }
    }

    fn from_trace(trace: ConstructionTrace) -> Self {
        GroupTruncation {
            generators: trace.steps.iter().map(|s| s.f).collect(),
            labels: trace.steps.iter().map(|s| s.n).collect(),
            provenance: Provenance::Untwisted(trace),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn trace(&self) -> Option<&ConstructionTrace> {
        match &self.provenance {
            Provenance::Untwisted(t) => Some(t),
            _ => None,
        }
    }

    pub fn generator(&self, label: usize) -> Option<&MoebiusTransform> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .map(|k| &self.generators[k])
    }

    /// The first `count` generators.
    pub fn truncated(&self, count: usize) -> GroupTruncation {
        let count = count.min(self.len());
        let provenance = match &self.provenance {
            Provenance::Untwisted(t) => Provenance::Untwisted(ConstructionTrace {
                steps: t.steps[..count].to_vec(),
            }),
            Provenance::TwistedDelta { delta, p } => Provenance::TwistedDelta {
                delta: *delta,
                p: p[..count].to_vec(),
            },
            Provenance::Custom => Provenance::Custom,
        };
        GroupTruncation {
            generators: self.generators[..count].to_vec(),
            labels: self.labels[..count].to_vec(),
            provenance,
        }
    }

    pub fn ball(&self, radius: usize) -> WordBall {
        WordBall::new(&self.generators, &self.labels, radius)
    }
}

/// Which circles a Schottky report compares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleFamily {
    /// Bisectors of `[p, g p]` and `[p, g⁻¹ p]` for a basepoint `p`.
    Dirichlet(PlanePoint),
    /// Isometric circles `|cz + d| = 1` of `g` and `g⁻¹`.
    Isometric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairMargin {
    pub first: String,
    pub second: String,
    pub first_label: usize,
    pub second_label: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchottkyReport {
    pub family: CircleFamily,
    pub circles: Vec<(String, EuclideanCircle)>,
    /// Every pair, in index order.
    pub margins: Vec<PairMargin>,
    pub min_margin: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

fn margins_report(
    family: CircleFamily,
    circles: Vec<(String, usize, EuclideanCircle)>,
    mut notes: Vec<String>,
) -> SchottkyReport {
    let mut margins = Vec::new();
    for i in 0..circles.len() {
        for j in (i + 1)..circles.len() {
            margins.push(PairMargin {
                first: circles[i].0.clone(),
                second: circles[j].0.clone(),
                first_label: circles[i].1,
                second_label: circles[j].1,
                margin: circles[i].2.separation(&circles[j].2),
            });
        }
    }
    let min_margin = margins.iter().map(|m| m.margin).fold(f64::INFINITY, f64::min);
    if circles.len() < 2 {
        notes.push("fewer than two circles; nothing to compare".to_string());
    }
    let pass = notes.iter().all(|n| !n.starts_with("unsupported"))
        && margins.iter().all(|m| m.margin > 0.0);
    SchottkyReport {
        family,
        circles: circles.into_iter().map(|(n, _, c)| (n, c)).collect(),
        margins,
        min_margin,
        pass,
        notes,
    }
}

/// Ping-pong check with Dirichlet bisectors at `basepoint`: for generator
/// `n`, `C_n` bounds the half-plane of `g_n⁻¹` and `C'_n` that of `g_n`.
/// The pairing is verified through external disjointness of all `2N`
/// circles.
pub fn check_schottky(g: &GroupTruncation, basepoint: &PlanePoint) -> SchottkyReport {
    let mut circles = Vec::new();
    let mut notes = Vec::new();
    for (label, m) in g.labels.iter().zip(g.generators.iter()) {
        for (name, t) in [(format!("C{label}"), m.invert()), (format!("C'{label}"), *m)] {
            match bisector_halfplane(basepoint, &t) {
                Ok(b) => match b.circle() {
                    Some(c) if c.separation_from_point(basepoint) > 0.0 => {
                        circles.push((name, *label, c))
                    }
                    Some(_) => notes.push(format!("unsupported: basepoint inside {name}")),
                    None => notes.push(format!("unsupported: {name} is a vertical line")),
                },
                Err(e) => notes.push(format!("unsupported: {name}: {e}")),
            }
        }
    }
    margins_report(CircleFamily::Dirichlet(*basepoint), circles, notes)
}

/// Ping-pong check with isometric circles.
pub fn check_schottky_isometric(g: &GroupTruncation) -> SchottkyReport {
    let mut circles = Vec::new();
    let mut notes = Vec::new();
    for (label, m) in g.labels.iter().zip(g.generators.iter()) {
        let ([a, _, c, d], ls) = m.raw();
        if c == 0.0 {
            notes.push(format!("unsupported: generator {label} fixes infinity"));
            continue;
        }
        let radius = (-ls).exp() / c.abs();
        circles.push((
            format!("I{label}"),
            *label,
            EuclideanCircle::new(-d / c, radius).expect("positive radius"),
        ));
        circles.push((
            format!("I'{label}"),
            *label,
            EuclideanCircle::new(a / c, radius).expect("positive radius"),
        ));
    }
    margins_report(CircleFamily::Isometric, circles, notes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestingReport {
    pub axes: Vec<(usize, Geodesic)>,
    /// Pairs of labels whose axes cross.
    pub crossing: Vec<(usize, usize)>,
    pub all_hyperbolic: bool,
    pub pass: bool,
}

/// Checks that generator axes are pairwise nested or disjoint.
pub fn check_nested(g: &GroupTruncation) -> NestingReport {
    let mut axes = Vec::new();
    let mut all_hyperbolic = true;
    for (label, m) in g.labels.iter().zip(g.generators.iter()) {
        if m.classify() != Classification::Hyperbolic {
            all_hyperbolic = false;
            continue;
        }
        if let Ok(axis) = m.axis() {
            axes.push((*label, axis));
        }
    }
    let mut crossing = Vec::new();
    for i in 0..axes.len() {
        for j in (i + 1)..axes.len() {
            if axes[i].1.interlaces(&axes[j].1) {
                crossing.push((axes[i].0, axes[j].0));
            }
        }
    }
    let pass = all_hyperbolic && crossing.is_empty();
    NestingReport {
        axes,
        crossing,
        all_hyperbolic,
        pass,
    }
}

/// The coefficient relation tested for a candidate common orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrthogonalCase {
    /// `(0, ∞)`: `a = d`.
    Imaginary,
    /// `(α, β)` finite: `(a - d)(α + β) + 2b = 2αβc`.
    Finite { alpha: f64, beta: f64 },
    /// `(α, ∞)`: `a - d = 2αc`; the α-free form `a - d = 2c` is reported
    /// alongside.
    HalfLine { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct UntwistedEntry {
    pub label: usize,
    pub residual: f64,
    /// Residual of `a - d = 2c` (half-line case only).
    pub alpha_free_residual: Option<f64>,
    /// `|angle - π/2|` between the axis and the orthogonal, when they cross.
    pub angle_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UntwistedReport {
    pub case: OrthogonalCase,
    pub entries: Vec<UntwistedEntry>,
    pub max_residual: f64,
    pub pass: bool,
    /// Pass flag for the α-free relation in the half-line case.
    pub alpha_free_pass: Option<bool>,
}

/// Tests whether `orthogonal` is a common orthogonal of every generator
/// axis through the coefficient relations, cross-checked by angles.
pub fn check_untwisted(
    g: &GroupTruncation,
    orthogonal: &Geodesic,
) -> Result<UntwistedReport, FluteError> {
    let case = match (orthogonal.e1(), orthogonal.e2()) {
        (BoundaryPoint::Finite(0.0), BoundaryPoint::Infinity) => OrthogonalCase::Imaginary,
        (BoundaryPoint::Finite(alpha), BoundaryPoint::Infinity) => OrthogonalCase::HalfLine { alpha },
        (BoundaryPoint::Finite(alpha), BoundaryPoint::Finite(beta)) => {
            OrthogonalCase::Finite { alpha, beta }
        }
        _ => unreachable!("canonical geodesics have a finite first endpoint"),
    };
    let mut entries = Vec::new();
    for (label, m) in g.labels.iter().zip(g.generators.iter()) {
        if let Ok(axis) = m.axis() {
            if axis == *orthogonal {
                return Err(FluteError::DegenerateAxis { label: *label });
            }
        }
        let [a, b, c, d] = m.normalized();
        let (residual, alpha_free_residual) = match case {
            OrthogonalCase::Imaginary => ((a - d).abs(), None),
            OrthogonalCase::Finite { alpha, beta } => (
                ((a - d) * (alpha + beta) + 2.0 * b - 2.0 * alpha * beta * c).abs(),
                None,
            ),
            OrthogonalCase::HalfLine { alpha } => (
                (a - d - 2.0 * alpha * c).abs(),
                Some((a - d - 2.0 * c).abs()),
            ),
        };
        let angle_residual = m
            .axis()
            .ok()
            .and_then(|axis| intersection_angle(&axis, orthogonal).ok())
            .map(|t| (t - FRAC_PI_2).abs());
        entries.push(UntwistedEntry {
            label: *label,
            residual,
            alpha_free_residual,
            angle_residual,
        });
    }
    let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
    let pass = entries.iter().all(|e| {
        e.residual < GEOMETRIC_TOL && e.angle_residual.is_some_and(|r| r < GEOMETRIC_TOL)
    });
    let alpha_free_pass = matches!(case, OrthogonalCase::HalfLine { .. }).then(|| {
        entries
            .iter()
            .all(|e| e.alpha_free_residual.is_some_and(|r| r < GEOMETRIC_TOL))
    });
    Ok(UntwistedReport {
        case,
        entries,
        max_residual,
        pass,
        alpha_free_pass,
    })
}

/// Membership in the Dirichlet domain of the truncation at `basepoint`.
pub fn fundamental_domain_contains(
    z: &PlanePoint,
    g: &GroupTruncation,
    basepoint: &PlanePoint,
) -> Side {
    let mut on_boundary = false;
    for m in &g.generators {
        for t in [*m, m.invert()] {
            let Ok(b) = bisector_halfplane(basepoint, &t) else {
                continue;
            };
            match b.side(z, GEOMETRIC_TOL) {
                Side::Outside => return Side::Outside,
                Side::Boundary => on_boundary = true,
                Side::Inside => {}
            }
        }
    }
    if on_boundary {
        Side::Boundary
    } else {
        Side::Inside
    }
}
