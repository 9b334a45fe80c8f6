//! Upper half-plane primitives: points, boundary points, geodesics,
//! horocycles, cross-ratios and the Busemann cocycle.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlaneError {
    #[error("point is not in the upper half-plane (x = {x}, y = {y})")]
    NotInHalfPlane { x: f64, y: f64 },
    #[error("boundary point is not a finite real or infinity")]
    NonFiniteBoundary,
    #[error("geodesic endpoints coincide")]
    CoincidentEndpoints,
    #[error("circle radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("cross-ratio needs four distinct points")]
    DegenerateInput,
    #[error("geodesics do not intersect in the half-plane")]
    NotIntersecting,
    #[error("geodesics interlace, so they are not disjoint")]
    Interlaced,
    #[error("geodesics share an endpoint")]
    SharedEndpoint,
    #[error("angle {0} is outside [0, pi)")]
    AngleOutOfRange(f64),
    #[error("a polygon needs at least three vertices, got {0}")]
    TooFewVertices(usize),
    #[error("angle sum leaves no positive area ({area})")]
    NotHyperbolic { area: f64 },
    #[error("ordering does not list the endpoints of both geodesics")]
    BadOrdering,
}

/// A point of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    x: f64,
    y: f64,
}

impl PlanePoint {
    /// The point `i`.
    pub const I: PlanePoint = PlanePoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self, PlaneError> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(PlanePoint { x, y })
        } else {
            Err(PlaneError::NotInHalfPlane { x, y })
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.x, self.y)
    }
}

/// A point of R ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(x: f64) -> Result<Self, PlaneError> {
        if x.is_finite() {
            Ok(BoundaryPoint::Finite(x))
        } else {
            Err(PlaneError::NonFiniteBoundary)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            BoundaryPoint::Finite(x) => Some(x),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Chordal distance on the circle R ∪ {∞} (stereographic, diameter 2).
    pub fn chordal_distance(&self, other: &BoundaryPoint) -> f64 {
        match (*self, *other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => 2.0 / x.hypot(1.0),
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => {
                2.0 * (x - y).abs() / (x.hypot(1.0) * y.hypot(1.0))
            }
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// A Euclidean circle centered on the real axis, i.e. a geodesic (or a
/// bisector) drawn as a semicircle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanCircle {
    center: f64,
    radius: f64,
}

impl EuclideanCircle {
    pub fn new(center: f64, radius: f64) -> Result<Self, PlaneError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(PlaneError::NonPositiveRadius(radius));
        }
        if !center.is_finite() {
            return Err(PlaneError::NonFiniteBoundary);
        }
        Ok(EuclideanCircle { center, radius })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    pub fn geodesic(&self) -> Geodesic {
        let (lo, hi) = self.endpoints();
        Geodesic {
            e1: BoundaryPoint::Finite(lo),
            e2: BoundaryPoint::Finite(hi),
        }
    }

    /// Positive when `z` lies outside the closed disc.
    pub fn separation_from_point(&self, z: &PlanePoint) -> f64 {
        (z.x - self.center).hypot(z.y) - self.radius
    }

    /// Margin of external disjointness: `|c1 - c2| - (r1 + r2)`.
    pub fn separation(&self, other: &EuclideanCircle) -> f64 {
        (self.center - other.center).abs() - (self.radius + other.radius)
    }
}

/// An unoriented geodesic, stored with `e1 < e2` or with `e2 = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    e1: BoundaryPoint,
    e2: BoundaryPoint,
}

impl Geodesic {
    pub fn new(p: BoundaryPoint, q: BoundaryPoint) -> Result<Self, PlaneError> {
        use BoundaryPoint::*;
        match (p, q) {
            (Infinity, Infinity) => Err(PlaneError::CoincidentEndpoints),
            (Finite(x), Infinity) | (Infinity, Finite(x)) => {
                if !x.is_finite() {
                    return Err(PlaneError::NonFiniteBoundary);
                }
                Ok(Geodesic { e1: Finite(x), e2: Infinity })
            }
            (Finite(x), Finite(y)) => {
                if !x.is_finite() || !y.is_finite() {
                    return Err(PlaneError::NonFiniteBoundary);
                }
                if x == y {
                    return Err(PlaneError::CoincidentEndpoints);
                }
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                Ok(Geodesic { e1: Finite(lo), e2: Finite(hi) })
            }
        }
    }

    /// Geodesic with two finite endpoints.
    pub fn between(x: f64, y: f64) -> Result<Self, PlaneError> {
        Geodesic::new(BoundaryPoint::Finite(x), BoundaryPoint::Finite(y))
    }

    /// The vertical geodesic `(x, ∞)`.
    pub fn vertical(x: f64) -> Result<Self, PlaneError> {
        Geodesic::new(BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
    }

    pub fn e1(&self) -> BoundaryPoint {
        self.e1
    }

    pub fn e2(&self) -> BoundaryPoint {
        self.e2
    }

    pub fn endpoints(&self) -> [BoundaryPoint; 2] {
        [self.e1, self.e2]
    }

    pub fn has_endpoint(&self, p: BoundaryPoint) -> bool {
        self.e1 == p || self.e2 == p
    }

    /// `Some(x)` when the geodesic is the vertical line `Re z = x`.
    pub fn vertical_x(&self) -> Option<f64> {
        match (self.e1, self.e2) {
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity) => Some(x),
            _ => None,
        }
    }

    pub fn as_circle(&self) -> Option<EuclideanCircle> {
        match (self.e1, self.e2) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => Some(EuclideanCircle {
                center: 0.5 * (a + b),
                radius: 0.5 * (b - a),
            }),
            _ => None,
        }
    }

    /// Hyperbolic distance from `z` to this geodesic.
    pub fn distance_to(&self, z: &PlanePoint) -> f64 {
        match self.vertical_x() {
            Some(x0) => ((z.x - x0) / z.y).abs().asinh(),
            None => {
                let (p, q) = (self.e1.value().unwrap(), self.e2.value().unwrap());
                // |z-c|^2 - r^2 written through the endpoints, which stay
                // exact even when the radius is huge.
                let gap = (z.x - p).mul_add(z.x - q, z.y * z.y);
                (gap.abs() / ((q - p).abs() * z.y)).asinh()
            }
        }
    }

    /// Whether the endpoints of `self` and `other` separate each other on
    /// the boundary circle.
    pub fn interlaces(&self, other: &Geodesic) -> bool {
        match cross_ratio(self.e1, self.e2, other.e1, other.e2) {
            Ok(v) => v < 0.0,
            Err(_) => false,
        }
    }

    /// The cyclic ordering `(a; c; b; d)` of the four endpoints, with
    /// `(a, b)` the endpoints of `self`, when the geodesics cross.
    pub fn cyclic_order_with(&self, other: &Geodesic) -> Option<[BoundaryPoint; 4]> {
        if !self.interlaces(other) {
            return None;
        }
        let a = self.e1;
        let b = self.e2;
        // `self.e1` is finite; `c` is the endpoint of `other` on the arc
        // running from `a` upward to `b`.
        let av = a.value()?;
        let inside = |p: BoundaryPoint| match (p, b) {
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(bv)) => x > av && x < bv,
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity) => x > av,
            (BoundaryPoint::Infinity, _) => false,
        };
        let (c, d) = if inside(other.e1) {
            (other.e1, other.e2)
        } else {
            (other.e2, other.e1)
        };
        Some([a, c, b, d])
    }
}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e1, self.e2)
    }
}

/// A horocycle: the level set `{z : B_base(z, i) = level}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horocycle {
    pub base: BoundaryPoint,
    pub level: f64,
}

impl Horocycle {
    /// The horocycle based at `base` passing through `z`.
    pub fn through(base: BoundaryPoint, z: &PlanePoint) -> Self {
        Horocycle {
            base,
            level: busemann(base, z, &PlanePoint::I),
        }
    }

    /// Euclidean diameter of the horocycle (finite base), or its height
    /// (base ∞).
    pub fn euclidean_size(&self) -> f64 {
        match self.base {
            BoundaryPoint::Infinity => (-self.level).exp(),
            BoundaryPoint::Finite(xi) => (1.0 + xi * xi) * self.level.exp(),
        }
    }

    /// A point of the horocycle. For base ∞ the parameter is the real part;
    /// for a finite base it is the angle from the top of the circle, in
    /// `(-π, π)`.
    pub fn point_at(&self, param: f64) -> PlanePoint {
        let size = self.euclidean_size();
        match self.base {
            BoundaryPoint::Infinity => PlanePoint { x: param, y: size },
            BoundaryPoint::Finite(xi) => {
                let rho = 0.5 * size;
                PlanePoint {
                    x: xi + rho * param.sin(),
                    y: rho * (1.0 + param.cos()),
                }
            }
        }
    }

    pub fn contains(&self, z: &PlanePoint, tol: f64) -> bool {
        (busemann(self.base, z, &PlanePoint::I) - self.level).abs() <= tol
    }
}

/// Hyperbolic distance.
pub fn dist(z: &PlanePoint, w: &PlanePoint) -> f64 {
    let chord = (z.x - w.x).hypot(z.y - w.y);
    2.0 * (chord / (2.0 * (z.y * w.y).sqrt())).asinh()
}

/// The difference `p - q` when both are finite; `None` marks a factor
/// containing ∞, which cancels against its partner.
fn finite_diff(p: BoundaryPoint, q: BoundaryPoint) -> Option<f64> {
    match (p, q) {
        (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => Some(x - y),
        _ => None,
    }
}

/// `[a; b; c; d] = (a - c)(b - d) / ((a - d)(b - c))`.
pub fn cross_ratio(
    a: BoundaryPoint,
    b: BoundaryPoint,
    c: BoundaryPoint,
    d: BoundaryPoint,
) -> Result<f64, PlaneError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i] == pts[j] {
                return Err(PlaneError::DegenerateInput);
            }
        }
    }
    let num = [finite_diff(a, c), finite_diff(b, d)];
    let den = [finite_diff(a, d), finite_diff(b, c)];
    let prod = |fs: [Option<f64>; 2]| fs.iter().flatten().product::<f64>();
    Ok(prod(num) / prod(den))
}

/// Angle in `[0, π]` between two crossing geodesics, from the cyclic
/// ordering `(a; c; b; d)` where `(a, b)` spans `g1` and `(c, d)` spans `g2`:
/// `[a, c, d, b] = (cos β + 1) / 2`.
pub fn angle_between(
    g1: &Geodesic,
    g2: &Geodesic,
    ordering: [BoundaryPoint; 4],
) -> Result<f64, PlaneError> {
    let [a, c, b, d] = ordering;
    let spans = |g: &Geodesic, p: BoundaryPoint, q: BoundaryPoint| {
        g.has_endpoint(p) && g.has_endpoint(q) && p != q
    };
    if g1 == g2 || !g1.interlaces(g2) {
        return Err(PlaneError::NotIntersecting);
    }
    if !spans(g1, a, b) || !spans(g2, c, d) {
        return Err(PlaneError::BadOrdering);
    }
    let cr = cross_ratio(a, c, d, b)?;
    Ok((2.0 * cr - 1.0).clamp(-1.0, 1.0).acos())
}

/// Angle between crossing geodesics with the ordering worked out from the
/// endpoints.
pub fn intersection_angle(g1: &Geodesic, g2: &Geodesic) -> Result<f64, PlaneError> {
    let ordering = g1.cyclic_order_with(g2).ok_or(PlaneError::NotIntersecting)?;
    angle_between(g1, g2, ordering)
}

/// The cross-ratio conventions relating disjoint geodesics to the length
/// of their common perpendicular. Two are the forms as commonly printed,
/// two are the ones that survive a numerical check (see the quadrature
/// oracle in the acceptance suite).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerpendicularFormula {
    /// `[a,c,d,b] = ½ cosh²(d/2)`
    HalfCoshSquaredHalf,
    /// `[a,c,d,b] = cosh²(d/2)`
    CoshSquaredHalf,
    /// `[a,b,c,d] = tanh²(d)`
    TanhSquaredFull,
    /// `[a,b,c,d] = tanh²(d/2)`
    TanhSquaredHalf,
}

impl PerpendicularFormula {
    pub const ALL: [PerpendicularFormula; 4] = [
        PerpendicularFormula::HalfCoshSquaredHalf,
        PerpendicularFormula::CoshSquaredHalf,
        PerpendicularFormula::TanhSquaredFull,
        PerpendicularFormula::TanhSquaredHalf,
    ];

    /// Distance implied by this convention for the ordered quadruple.
    pub fn distance(self, quad: &OrderedPair) -> f64 {
        match self {
            PerpendicularFormula::HalfCoshSquaredHalf => {
                2.0 * (2.0 * quad.cosh_form).sqrt().acosh()
            }
            PerpendicularFormula::CoshSquaredHalf => 2.0 * quad.cosh_form.sqrt().acosh(),
            PerpendicularFormula::TanhSquaredFull => quad.tanh_form.sqrt().atanh(),
            PerpendicularFormula::TanhSquaredHalf => 2.0 * quad.tanh_form.sqrt().atanh(),
        }
    }
}

/// Endpoints of two disjoint geodesics labelled so that the cyclic order
/// is `(a, c, d, b)`, with both cross-ratios used by the distance formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderedPair {
    pub points: [BoundaryPoint; 4],
    /// `[a, c, d, b]`, in `(1, ∞)`.
    pub cosh_form: f64,
    /// `[a, b, c, d]`, in `(0, 1)`.
    pub tanh_form: f64,
}

impl OrderedPair {
    pub fn new(g1: &Geodesic, g2: &Geodesic) -> Result<Self, PlaneError> {
        for p in g2.endpoints() {
            if g1.has_endpoint(p) {
                return Err(PlaneError::SharedEndpoint);
            }
        }
        let (a, b) = (g1.e1, g1.e2);
        let (mut c, mut d) = (g2.e1, g2.e2);
        let mut t = cross_ratio(a, b, c, d)?;
        if t < 0.0 {
            return Err(PlaneError::Interlaced);
        }
        if t > 1.0 {
            std::mem::swap(&mut c, &mut d);
            t = cross_ratio(a, b, c, d)?;
        }
        let cosh_form = cross_ratio(a, c, d, b)?;
        Ok(OrderedPair {
            points: [a, b, c, d],
            cosh_form,
            tanh_form: t,
        })
    }
}

/// Length of the common perpendicular of two disjoint geodesics.
///
/// Calibrated against direct quadrature: `[a,c,d,b] = cosh²(d/2)` and
/// `[a,b,c,d] = tanh²(d/2)`. The forms with a leading ½ or with `tanh²(d)`
/// miss the oracle by O(1) on every sampled pair. The tanh form is used for
/// short perpendiculars and the cosh form for long ones, where each is
/// well conditioned.
pub fn dist_between_geodesics(g1: &Geodesic, g2: &Geodesic) -> Result<f64, PlaneError> {
    let pair = OrderedPair::new(g1, g2)?;
    let formula = if pair.tanh_form < 0.5 {
        PerpendicularFormula::TanhSquaredHalf
    } else {
        PerpendicularFormula::CoshSquaredHalf
    };
    Ok(formula.distance(&pair))
}

/// Busemann cocycle `B_ξ(z, w)`, the limit of `d(z, p) - d(w, p)` as `p`
/// tends to `ξ`. With this sign `B_∞(z, w) = log(Im w / Im z)`.
pub fn busemann(xi: BoundaryPoint, z: &PlanePoint, w: &PlanePoint) -> f64 {
    match xi {
        BoundaryPoint::Infinity => w.y.ln() - z.y.ln(),
        BoundaryPoint::Finite(x) => {
            let pz = ((z.x - x).powi(2) + z.y * z.y) / z.y;
            let pw = ((w.x - x).powi(2) + w.y * w.y) / w.y;
            pz.ln() - pw.ln()
        }
    }
}

/// Area of a hyperbolic polygon from its interior angles.
pub fn polygon_area(angles: &[f64]) -> Result<f64, PlaneError> {
    if angles.len() < 3 {
        return Err(PlaneError::TooFewVertices(angles.len()));
    }
    if let Some(&bad) = angles.iter().find(|a| !(**a >= 0.0 && **a < PI)) {
        return Err(PlaneError::AngleOutOfRange(bad));
    }
    let area = PI * (angles.len() as f64 - 2.0) - angles.iter().sum::<f64>();
    if area > 0.0 {
        Ok(area)
    } else {
        Err(PlaneError::NotHyperbolic { area })
    }
}

/// The geodesic through `z` with `xi` as an endpoint. The endpoint `xi` is
/// stored exactly.
pub fn geodesic_through(z: &PlanePoint, xi: BoundaryPoint) -> Geodesic {
    match xi {
        BoundaryPoint::Infinity => Geodesic {
            e1: BoundaryPoint::Finite(z.x),
            e2: BoundaryPoint::Infinity,
        },
        BoundaryPoint::Finite(x) => {
            if x == z.x {
                return Geodesic {
                    e1: BoundaryPoint::Finite(x),
                    e2: BoundaryPoint::Infinity,
                };
            }
            // Center solves |z - c| = |xi - c|.
            let dx = x - z.x;
            let c = 0.5 * (x + z.x) - 0.5 * z.y * z.y / dx;
            let other = 2.0 * c - x;
            Geodesic::between(x, other).expect("distinct endpoints")
        }
    }
}

/// The intersection point of two crossing geodesics.
pub fn geodesic_intersection(g1: &Geodesic, g2: &Geodesic) -> Result<PlanePoint, PlaneError> {
    if g1 == g2 || !g1.interlaces(g2) {
        return Err(PlaneError::NotIntersecting);
    }
    let on_circle = |x0: f64, c: &EuclideanCircle| {
        let dx = x0 - c.center;
        let y2 = (c.radius - dx) * (c.radius + dx);
        PlanePoint::new(x0, y2.sqrt()).map_err(|_| PlaneError::NotIntersecting)
    };
    match (g1.vertical_x(), g2.vertical_x()) {
        (Some(_), Some(_)) => Err(PlaneError::NotIntersecting),
        (Some(x0), None) => on_circle(x0, &g2.as_circle().expect("finite")),
        (None, Some(x0)) => on_circle(x0, &g1.as_circle().expect("finite")),
        (None, None) => {
            let c1 = g1.as_circle().expect("finite");
            let c2 = g2.as_circle().expect("finite");
            let gap = c2.center - c1.center;
            if gap == 0.0 {
                return Err(PlaneError::NotIntersecting);
            }
            let x0 = 0.5 * (c1.center + c2.center)
                + 0.5 * (c1.radius - c2.radius) * (c1.radius + c2.radius) / gap;
            // Evaluate height from the circle whose center is farther from
            // x0; that keeps the difference of squares well conditioned.
            let c = if (x0 - c1.center).abs() < (x0 - c2.center).abs() {
                c1
            } else {
                c2
            };
            on_circle(x0, &c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y).unwrap()
    }

    fn f(x: f64) -> BoundaryPoint {
        BoundaryPoint::Finite(x)
    }

    const INF: BoundaryPoint = BoundaryPoint::Infinity;

    #[test]
    fn rejects_points_off_the_half_plane() {
        assert!(PlanePoint::new(0.0, 0.0).is_err());
        assert!(PlanePoint::new(1.0, -2.0).is_err());
        assert!(PlanePoint::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn vertical_distance_is_log_ratio() {
        let i = PlanePoint::I;
        assert!((dist(&i, &p(0.0, std::f64::consts::E)) - 1.0).abs() < 1e-15);
        assert_eq!(dist(&i, &i), 0.0);
    }

    #[test]
    fn cross_ratio_examples() {
        let v = cross_ratio(f(0.0), f(2.0), f(1.0), f(3.0)).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-15);
        let v = cross_ratio(f(-1.0), f(0.0), INF, f(1.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert_eq!(
            cross_ratio(f(1.0), f(1.0), f(2.0), f(3.0)),
            Err(PlaneError::DegenerateInput)
        );
    }

    #[test]
    fn right_angles() {
        let a = Geodesic::between(-1.0, 1.0).unwrap();
        let b = Geodesic::vertical(0.0).unwrap();
        let ang = intersection_angle(&a, &b).unwrap();
        assert!((ang - PI / 2.0).abs() < 1e-12);
        assert_eq!(intersection_angle(&a, &a), Err(PlaneError::NotIntersecting));
        let axis = Geodesic::between(1.0, 4.0).unwrap();
        let foot = Geodesic::between(-2.0, 2.0).unwrap();
        assert!((intersection_angle(&axis, &foot).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn angle_is_ordering_checked() {
        let a = Geodesic::between(-1.0, 1.0).unwrap();
        let b = Geodesic::vertical(0.0).unwrap();
        let bad = [f(-1.0), f(0.0), f(2.0), INF];
        assert_eq!(angle_between(&a, &b, bad), Err(PlaneError::BadOrdering));
    }

    #[test]
    fn concentric_semicircles() {
        let r = std::f64::consts::E;
        let g1 = Geodesic::between(-1.0, 1.0).unwrap();
        let g2 = Geodesic::between(-r, r).unwrap();
        assert!((dist_between_geodesics(&g1, &g2).unwrap() - 1.0).abs() < 1e-14);
        let pair = OrderedPair::new(&g1, &g2).unwrap();
        let expect = ((r - 1.0) / (r + 1.0)).powi(2);
        assert!((pair.tanh_form - expect).abs() < 1e-15);
        assert_eq!(
            dist_between_geodesics(&g1, &g1),
            Err(PlaneError::SharedEndpoint)
        );
        let crossing = Geodesic::between(0.0, 2.0).unwrap();
        assert_eq!(
            dist_between_geodesics(&g1, &crossing),
            Err(PlaneError::Interlaced)
        );
    }

    #[test]
    fn busemann_examples() {
        let v = busemann(INF, &p(0.0, 2.0), &PlanePoint::I);
        assert!((v + 2f64.ln()).abs() < 1e-15);
        // Finite base agrees with the limit of distance differences.
        let (z, w) = (p(0.3, 0.7), p(-1.2, 2.5));
        let xi = 0.8;
        let far = p(xi, 1e-7);
        let approx = dist(&z, &far) - dist(&w, &far);
        assert!((busemann(f(xi), &z, &w) - approx).abs() < 1e-6);
    }

    #[test]
    fn areas() {
        assert_eq!(polygon_area(&[0.0, 0.0, 0.0]).unwrap(), PI);
        let pent = polygon_area(&[PI / 2.0; 5]).unwrap();
        assert!((pent - PI / 2.0).abs() < 1e-15);
        assert!(matches!(
            polygon_area(&[PI / 2.0; 4]),
            Err(PlaneError::NotHyperbolic { .. })
        ));
        assert!(polygon_area(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn geodesics_through_points() {
        assert_eq!(
            geodesic_through(&PlanePoint::I, INF),
            Geodesic::vertical(0.0).unwrap()
        );
        assert_eq!(
            geodesic_through(&p(0.0, 2.0), f(0.0)),
            Geodesic::vertical(0.0).unwrap()
        );
        let xi = 3.0;
        let g = geodesic_through(&PlanePoint::I, f(xi));
        let c = g.as_circle().unwrap();
        assert!((c.center() - (xi * xi - 1.0) / (2.0 * xi)).abs() < 1e-15);
        assert!(g.has_endpoint(f(xi)));
        assert!(g.distance_to(&PlanePoint::I) < 1e-12);
    }

    #[test]
    fn intersections() {
        let a = Geodesic::between(-1.0, 1.0).unwrap();
        let b = Geodesic::vertical(0.0).unwrap();
        let z = geodesic_intersection(&a, &b).unwrap();
        assert!(dist(&z, &PlanePoint::I) < 1e-15);
        let foot = Geodesic::between(-2.0, 2.0).unwrap();
        let axis = Geodesic::between(1.0, 4.0).unwrap();
        let q = geodesic_intersection(&foot, &axis).unwrap();
        assert!(foot.distance_to(&q) < 1e-12 && axis.distance_to(&q) < 1e-12);
        let v2 = Geodesic::vertical(3.0).unwrap();
        assert_eq!(
            geodesic_intersection(&b, &v2),
            Err(PlaneError::NotIntersecting)
        );
    }

    #[test]
    fn horocycle_points_are_members() {
        for base in [INF, f(0.0), f(-2.5)] {
            let h = Horocycle::through(base, &p(0.4, 1.3));
            for k in -5..=5 {
                let z = h.point_at(0.5 * k as f64);
                assert!(h.contains(&z, 1e-12), "{base:?} {k}");
            }
        }
    }

    #[test]
    fn chordal_metric() {
        assert_eq!(INF.chordal_distance(&INF), 0.0);
        assert!((f(0.0).chordal_distance(&INF) - 2.0).abs() < 1e-15);
        assert!(f(1e8).chordal_distance(&INF) < 1e-7);
    }
}
