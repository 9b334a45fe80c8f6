//! Geodesic and horocycle flows on the unit tangent bundle of the
//! half-plane, and word-ball estimates of quotient distance and
//! injectivity radius.

use crate::flute::GroupTruncation;
use crate::moebius::MoebiusTransform;
use crate::plane::{busemann, dist, geodesic_through, BoundaryPoint, PlanePoint};
use crate::words::WordBall;

/// Exponent sign in `g_t ∘ h_s = h_(s·e^(σt)) ∘ g_t` for the flows below.
/// Fixed by evaluating both sides at `u = (i, ∞)`, `s = 1`, `t = log 2`
/// (see the calibration test).
pub const QUASI_COMMUTATION_SIGN: f64 = -1.0;

/// A unit tangent vector, described by its base point and the endpoint its
/// geodesic runs toward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitTangent {
    pub base: PlanePoint,
    pub forward: BoundaryPoint,
}

impl UnitTangent {
    pub fn new(base: PlanePoint, forward: BoundaryPoint) -> Self {
        UnitTangent { base, forward }
    }

    /// The vector at `i` pointing up, toward ∞.
    pub fn vertical_at_i() -> Self {
        UnitTangent::new(PlanePoint::I, BoundaryPoint::Infinity)
    }

    /// The endpoint the geodesic comes from.
    pub fn backward(&self) -> BoundaryPoint {
        let g = geodesic_through(&self.base, self.forward);
        if g.e1() == self.forward {
            g.e2()
        } else {
            g.e1()
        }
    }

    /// An isometry taking the geodesic to `(0, ∞)` with `forward ↦ ∞`.
    fn chart(&self) -> MoebiusTransform {
        MoebiusTransform::sending_to_zero_infinity(self.backward(), self.forward)
            .expect("distinct endpoints")
    }

    /// Busemann level `B_forward(base, i)` of the horocycle through the base.
    pub fn level(&self) -> f64 {
        busemann(self.forward, &self.base, &PlanePoint::I)
    }

    pub fn transform(&self, m: &MoebiusTransform) -> Self {
        UnitTangent::new(m.apply(&self.base), m.apply_boundary(self.forward))
    }

    /// Distance between base points plus chordal distance between forward
    /// endpoints.
    pub fn distance(&self, other: &UnitTangent) -> f64 {
        dist(&self.base, &other.base) + self.forward.chordal_distance(&other.forward)
    }
}

/// Moves the base a signed distance `t` along its geodesic.
pub fn geodesic_flow(u: &UnitTangent, t: f64) -> UnitTangent {
    let m = u.chart();
    let w = m.apply(&u.base);
    let s = t.exp();
    let moved = PlanePoint::new(w.x() * s, w.y() * s).expect("positive height");
    UnitTangent::new(m.invert().apply(&moved), u.forward)
}

/// Moves the base signed arclength `s` along the horocycle centered at the
/// forward endpoint. Positive `s` moves to the right of the direction of
/// travel, i.e. in `+x` for vectors pointing at ∞.
pub fn horocycle_flow(u: &UnitTangent, s: f64) -> UnitTangent {
    let m = u.chart();
    let w = m.apply(&u.base);
    let moved = PlanePoint::new(w.x() + s * w.y(), w.y()).expect("positive height");
    UnitTangent::new(m.invert().apply(&moved), u.forward)
}

/// Upper bound on the quotient distance from `z` to the orbit of `w`,
/// minimizing over the ball of the given radius.
pub fn quotient_distance(z: &PlanePoint, w: &PlanePoint, g: &GroupTruncation, radius: usize) -> f64 {
    quotient_distance_in(&g.ball(radius), z, w)
}

pub fn quotient_distance_in(ball: &WordBall, z: &PlanePoint, w: &PlanePoint) -> f64 {
    ball.min_over(true, |m| dist(z, &m.apply(w)))
}

/// Upper bound on `inf_(γ ≠ id) d(x, γx)` over the ball of the given
/// radius (no factor ½).
pub fn injectivity_radius(x: &PlanePoint, g: &GroupTruncation, radius: usize) -> f64 {
    injectivity_radius_in(&g.ball(radius), x)
}

pub fn injectivity_radius_in(ball: &WordBall, x: &PlanePoint) -> f64 {
    ball.min_over(false, |m| dist(x, &m.apply(x)))
}

/// Injectivity radius sampled along a geodesic ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayProfile {
    pub times: Vec<f64>,
    pub inj: Vec<f64>,
    pub word_radius: usize,
    pub gen_count: usize,
    /// Minimum of `inj` over each of the equal cells the grid is cut into.
    pub cell_minima: Vec<f64>,
    /// `running_min_tail[c]` is the minimum over cells `c..`, a
    /// finite-grid stand-in for the lim inf.
    pub running_min_tail: Vec<f64>,
    /// Minimum over the last cell.
    pub liminf_proxy: f64,
}

impl RayProfile {
    pub fn tail_strictly_increasing(&self) -> bool {
        self.running_min_tail.windows(2).all(|w| w[1] > w[0])
    }
}

fn grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| t_max * k as f64 / (steps - 1) as f64)
        .collect()
}

/// Profile with the grid cut into quartiles.
pub fn thinness_profile(
    u: &UnitTangent,
    g: &GroupTruncation,
    t_max: f64,
    steps: usize,
    radius: usize,
) -> RayProfile {
    thinness_profile_cells(u, g, t_max, steps, radius, 4)
}

pub fn thinness_profile_cells(
    u: &UnitTangent,
    g: &GroupTruncation,
    t_max: f64,
    steps: usize,
    radius: usize,
    cells: usize,
) -> RayProfile {
    assert!(steps >= 2 && t_max > 0.0 && cells >= 1 && cells <= steps);
    let ball = g.ball(radius);
    let times = grid(t_max, steps);
    let inj: Vec<f64> = times
        .iter()
        .map(|&t| injectivity_radius_in(&ball, &geodesic_flow(u, t).base))
        .collect();
    let cell_minima: Vec<f64> = (0..cells)
        .map(|c| {
            let lo = c * steps / cells;
            let hi = (c + 1) * steps / cells;
            inj[lo..hi].iter().copied().fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut running_min_tail = cell_minima.clone();
    for c in (0..cells.saturating_sub(1)).rev() {
        running_min_tail[c] = running_min_tail[c].min(running_min_tail[c + 1]);
    }
    RayProfile {
        times,
        inj,
        word_radius: radius,
        gen_count: g.len(),
        liminf_proxy: *cell_minima.last().expect("at least one cell"),
        cell_minima,
        running_min_tail,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiMinReport {
    /// Smallest `C` with `d(u(0), u(t)) ≥ t - C` on the grid, using the
    /// word-ball upper bound for the quotient distance.
    pub constant: f64,
    pub times: Vec<f64>,
    pub deficits: Vec<f64>,
    /// Least-squares slope of the deficit over the second half of the grid.
    pub late_slope: f64,
    /// Set when the deficit keeps growing with `t`, i.e. the ray is not
    /// witnessed as quasi-minimizing.
    pub growing: bool,
}

pub fn quasi_minimizing_constant(
    u: &UnitTangent,
    g: &GroupTruncation,
    t_max: f64,
    steps: usize,
    radius: usize,
) -> QuasiMinReport {
    assert!(steps >= 2 && t_max > 0.0);
    let ball = g.ball(radius);
    let times = grid(t_max, steps);
    let deficits: Vec<f64> = times
        .iter()
        .map(|&t| t - quotient_distance_in(&ball, &u.base, &geodesic_flow(u, t).base))
        .collect();
    let constant = deficits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let half = steps / 2;
    let late_slope = slope(&times[half..], &deficits[half..]);
    QuasiMinReport {
        constant,
        times,
        deficits,
        late_slope,
        growing: late_slope > 0.5,
    }
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return 0.0;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flute::{build_untwisted, Schedule, UntwistedFluteParams};

    fn p(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn vertical_flows() {
        let u = UnitTangent::vertical_at_i();
        let v = geodesic_flow(&u, 1.5);
        assert!(dist(&v.base, &p(0.0, 1.5f64.exp())) < 1e-15);
        let h = horocycle_flow(&u, 2.0);
        assert!(dist(&h.base, &p(2.0, 1.0)) < 1e-15);
        assert!(h.level().abs() < 1e-15);
    }

    #[test]
    fn quasi_commutation_sign_calibration() {
        let u = UnitTangent::vertical_at_i();
        let (s, t) = (1.0, 2f64.ln());
        let lhs = geodesic_flow(&horocycle_flow(&u, s), t);
        let minus = horocycle_flow(&geodesic_flow(&u, t), s * (-t).exp());
        let plus = horocycle_flow(&geodesic_flow(&u, t), s * t.exp());
        assert!(lhs.distance(&minus) < 1e-14);
        assert!(lhs.distance(&plus) > 0.1);
        assert_eq!(QUASI_COMMUTATION_SIGN, -1.0);
    }

    #[test]
    fn flows_on_a_tilted_vector() {
        let u = UnitTangent::new(p(0.4, 0.9), BoundaryPoint::Finite(-2.0));
        let back = u.backward();
        let g = geodesic_through(&u.base, u.forward);
        assert!(g.has_endpoint(back));
        let v = geodesic_flow(&u, 0.8);
        assert!((dist(&u.base, &v.base) - 0.8).abs() < 1e-12);
        assert!(g.distance_to(&v.base) < 1e-12);
        let w = geodesic_flow(&v, -0.8);
        assert!(w.distance(&u) < 1e-12);
        let h = horocycle_flow(&u, 1.3);
        assert!((h.level() - u.level()).abs() < 1e-12);
    }

    #[test]
    fn cyclic_injectivity_radius() {
        let e = std::f64::consts::E;
        let g = GroupTruncation::custom(vec![MoebiusTransform::dilation(e * e)]);
        let r = injectivity_radius(&PlanePoint::I, &g, 3);
        assert!((r - 2.0).abs() < 1e-14);
        let profile = thinness_profile(&UnitTangent::new(PlanePoint::I, BoundaryPoint::Finite(0.0)), &g, 3.0, 20, 2);
        assert!(profile.inj.iter().all(|v| (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn quotient_distance_examples() {
        let params = UntwistedFluteParams::from_schedule(&Schedule::default(), 4).unwrap();
        let g = build_untwisted(&params).unwrap();
        let p1 = g.trace().unwrap().steps[0].p;
        let i = PlanePoint::I;
        assert_eq!(quotient_distance(&i, &p1, &g, 0), dist(&i, &p1));
        assert!(quotient_distance(&i, &p1, &g, 1) < 1e-9);
    }

    #[test]
    fn trivial_group_is_minimizing() {
        let g = GroupTruncation::custom(vec![]);
        let r = quasi_minimizing_constant(&UnitTangent::vertical_at_i(), &g, 5.0, 11, 3);
        assert!(r.constant.abs() < 1e-12);
        assert!(!r.growing);
    }

    #[test]
    fn wrapping_ray_is_flagged() {
        let g = GroupTruncation::custom(vec![MoebiusTransform::dilation(4.0)]);
        let r = quasi_minimizing_constant(&UnitTangent::vertical_at_i(), &g, 20.0, 41, 12);
        assert!(r.growing);
        assert!(r.constant > 15.0);
    }
}
