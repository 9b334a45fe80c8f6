//! Independent oracles for the integration tests. Nothing here calls the
//! closed-form distance, cross-ratio or Busemann code of the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// Gauss-Legendre nodes and weights on [-1, 1], five points.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Composite five-point Gauss-Legendre rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        for (x, w) in GL5 {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * total
}

const PANELS: usize = 24;

/// Hyperbolic length of the geodesic segment between `(x1, y1)` and
/// `(x2, y2)`, integrating `|dz|/y` along the connecting arc.
pub fn quadrature_distance(x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
    if (x1 - x2).abs() < 1e-14 * (1.0 + x1.abs()) {
        // ds = dy / y on a vertical line, on geometrically graded panels.
        let (lo, hi) = (y1.min(y2), y1.max(y2));
        let ratio = (hi / lo).powf(1.0 / PANELS as f64);
        return (0..PANELS)
            .map(|k| {
                let a = lo * ratio.powi(k as i32);
                integrate(|y| 1.0 / y, a, a * ratio, 1)
            })
            .sum();
    }
    // Centre of the arc, arranged so nearly vertical pairs do not cancel.
    let c = 0.5 * (x1 + x2) + (y1 - y2) * (y1 + y2) / (2.0 * (x1 - x2));
    // ds = r dφ / (r sin φ). Each endpoint's angle is measured from both
    // ends of the diameter, so neither is formed as π minus a nearby value.
    let from_right = |x: f64, y: f64| y.atan2(x - c);
    let from_left = |x: f64, y: f64| y.atan2(c - x);
    let (r1, r2) = (from_right(x1, y1), from_right(x2, y2));
    let (l1, l2) = (from_left(x1, y1), from_left(x2, y2));
    // Integrate in the log of the angle, where the integrand is smooth.
    let near_end = |a: f64, b: f64| {
        integrate(|v| v.exp() / v.exp().sin(), a.ln(), b.ln(), PANELS)
    };
    let half = std::f64::consts::FRAC_PI_2;
    let (rlo, rhi) = (r1.min(r2), r1.max(r2));
    let (llo, lhi) = (l1.min(l2), l1.max(l2));
    let mut total = 0.0;
    if rlo < half {
        total += near_end(rlo, rhi.min(half));
    }
    if llo < half {
        total += near_end(llo, lhi.min(half));
    }
    total
}

/// Point at angle `phi` on the half-circle over `[p, q]`.
pub fn on_arc(p: f64, q: f64, phi: f64) -> (f64, f64) {
    let c = 0.5 * (p + q);
    let r = 0.5 * (q - p).abs();
    (c + r * phi.cos(), r * phi.sin())
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// Distance between the disjoint geodesics over `[p1, q1]` and `[p2, q2]`
/// as a nested minimization of quadrature distances. Distance to a
/// geodesic is convex along another geodesic, so golden-section search is
/// exact up to its bracket.
pub fn quadrature_geodesic_distance(p1: f64, q1: f64, p2: f64, q2: f64) -> f64 {
    let edge = 1e-6;
    golden_min(
        |a| {
            let (x, y) = on_arc(p1, q1, a);
            golden_min(
                |b| {
                    let (u, v) = on_arc(p2, q2, b);
                    quadrature_distance(x, y, u, v)
                },
                edge,
                std::f64::consts::PI - edge,
                45,
            )
        },
        edge,
        std::f64::consts::PI - edge,
        45,
    )
}

/// Exact `(a, b, c, d)` of the δ-family letter at an integer `p`, with `δ`
/// the exact rational value of the float.
pub fn exact_letter(p: &BigInt, delta: f64) -> [BigRational; 4] {
    let d = BigRational::from_float(delta).unwrap();
    let pr = BigRational::from_integer(p.clone());
    let q = &pr * &pr + BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    [
        &d + &two * &pr / &q,
        &pr + &q * &d,
        BigRational::one() / &pr,
        &q / &pr,
    ]
}

pub fn exact_mul(x: &[BigRational; 4], y: &[BigRational; 4]) -> [BigRational; 4] {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

pub fn exact_identity() -> [BigRational; 4] {
    [
        BigRational::one(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::one(),
    ]
}

/// `p_1 = 1 + ⌊(δ-1)/2⌋`, `p_(n+1) = 1 + ⌊(δ+1) p_n/(δ-1)⌋` for integer `δ`,
/// in plain integer arithmetic.
pub fn integer_recurrence(delta: i64, count: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut p = BigInt::from(1 + (delta - 1) / 2);
    for _ in 0..count {
        out.push(p.clone());
        p = BigInt::one() + (BigInt::from(delta + 1) * &p) / BigInt::from(delta - 1);
    }
    out
}

/// Random point with moderate coordinates.
pub fn random_point<R: Rng>(rng: &mut R) -> (f64, f64) {
    (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0))
}

/// Random unimodular entries with moderate size.
pub fn random_sl2<R: Rng>(rng: &mut R) -> [f64; 4] {
    loop {
        let a: f64 = rng.gen_range(-3.0..3.0);
        let b: f64 = rng.gen_range(-3.0..3.0);
        let c: f64 = rng.gen_range(-3.0..3.0);
        if a.abs() < 0.2 {
            continue;
        }
        // d fixed by the determinant.
        let d = (1.0 + b * c) / a;
        if d.abs() < 10.0 {
            return [a, b, c, d];
        }
    }
}
