//! The vertex sequence `x_n` built by alternating bisector reflections.
//!
//! Starting from `x_0 = O` and `x_1 = (x, 0)`, the line through `x_{n+1}`
//! making angle `α/2` with the segment back to `x_n` is built and `x_n` is
//! reflected in it to give `x_{n+2}`. Negative indices run the same
//! construction from `x_1, x_0`. All points land on one Euclidean circle of
//! diameter `x / cos(α/2)`, which is a hyperbolic circle, a horocycle or an
//! equidistant curve depending on the sign of `x − cos(α/2)`.
//!
//! Only the intro reading of the tiling condition (`α = 2π/k`) is exposed by
//! [`tiling_condition`]; some texts state it for the half angle instead.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    self, distance_from_origin, geodesic_with_tangent, hyperbolic_distance, intersect,
    perpendicular_bisector, reflect, tangent_toward, DiscPoint, Geodesic, IdealPoint, Intersection,
    Vec2,
};

/// Band around `cos(α/2)` within which the carrier counts as a horocycle.
pub const CLASSIFY_EPS: f64 = 1e-12;
/// Minimum admissible Euclidean gap between a point and the boundary.
pub const MIN_BOUNDARY_GAP: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted at index {index}: boundary gap {gap:e}")]
    PrecisionExhausted { index: i64, gap: f64 },
    #[error(transparent)]
    Geom(#[from] geom::GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarrierKind {
    Circle,
    Horocycle,
    Equidistant,
}

impl CarrierKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CarrierKind::Circle => "circle",
            CarrierKind::Horocycle => "horocycle",
            CarrierKind::Equidistant => "equidistant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceSpec {
    pub alpha: f64,
    pub x: f64,
    /// Points built beyond `x_1`.
    pub steps_pos: usize,
    /// Points built before `x_0`.
    pub steps_neg: usize,
}

impl SequenceSpec {
    pub fn new(
        alpha: f64,
        x: f64,
        steps_pos: usize,
        steps_neg: usize,
    ) -> Result<Self, SequenceError> {
        check_domain(alpha, x)?;
        Ok(SequenceSpec {
            alpha,
            x,
            steps_pos,
            steps_neg,
        })
    }
}

/// The Euclidean circle carrying the sequence, with its hyperbolic reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarrierCurve {
    pub kind: CarrierKind,
    pub euclid_center: [f64; 2],
    pub euclid_radius: f64,
    /// Hyperbolic centre (circle case).
    pub hyp_center: Option<DiscPoint>,
    /// Tangency point (horocycle) or the two boundary crossings (equidistant).
    pub ideal_points: Vec<IdealPoint>,
    /// Geodesic sharing the equidistant curve's end points.
    pub axis: Option<Geodesic>,
}

impl CarrierCurve {
    pub fn center(&self) -> Vec2 {
        Vec2::new(self.euclid_center[0], self.euclid_center[1])
    }

    pub fn residual(&self, p: DiscPoint) -> f64 {
        ((p.vec() - self.center()).norm() - self.euclid_radius).abs()
    }

    /// `| |centre| + radius − 1 |`, zero for a horocycle.
    pub fn tangency_residual(&self) -> f64 {
        (self.center().norm() + self.euclid_radius - 1.0).abs()
    }

    /// Hyperbolic length along the curve of an arc subtending the chord of
    /// hyperbolic length `chord`.
    pub fn arc_length(&self, chord: f64) -> f64 {
        let half = (chord / 2.0).sinh();
        match self.kind {
            CarrierKind::Horocycle => 2.0 * half,
            CarrierKind::Circle => {
                let sr = self.hyperbolic_radius().sinh();
                2.0 * sr * (half / sr).min(1.0).asin()
            }
            CarrierKind::Equidistant => {
                let ck = self.axis_distance().cosh();
                2.0 * ck * (half / ck).asinh()
            }
        }
    }

    /// Hyperbolic radius (circle case; NaN otherwise).
    pub fn hyperbolic_radius(&self) -> f64 {
        match self.hyp_center {
            Some(a) => hyperbolic_distance(a, DiscPoint::ORIGIN),
            None => f64::NAN,
        }
    }

    /// Distance from the curve to its axis (equidistant case; NaN otherwise).
    pub fn axis_distance(&self) -> f64 {
        match self.axis {
            Some(Geodesic::Diameter { .. }) => 0.0,
            Some(Geodesic::Arc { cx, cy, radius }) => {
                distance_from_origin(Vec2::new(cx, cy).norm() - radius)
            }
            None => f64::NAN,
        }
    }

    /// Hyperbolic circumference (circle case only).
    pub fn circumference(&self) -> Option<f64> {
        (self.kind == CarrierKind::Circle).then(|| 2.0 * PI * self.hyperbolic_radius().sinh())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceResult {
    /// Points `x_n` for `n = first_index, first_index + 1, …`.
    pub points: Vec<DiscPoint>,
    pub first_index: i64,
    pub carrier: CarrierCurve,
    /// Curvilinear abscissa of each point on the carrier, measured from `x_0`.
    pub abscissas: Vec<f64>,
    pub circumference: Option<f64>,
}

impl SequenceResult {
    pub fn point(&self, n: i64) -> Option<DiscPoint> {
        usize::try_from(n - self.first_index)
            .ok()
            .and_then(|i| self.points.get(i).copied())
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.first_index..self.first_index + self.points.len() as i64
    }
}

fn check_domain(alpha: f64, x: f64) -> Result<(), SequenceError> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(SequenceError::Domain(format!(
            "alpha {alpha} out of range (0, π)"
        )));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(SequenceError::Domain(format!("x {x} out of range (0, 1)")));
    }
    Ok(())
}

/// Decides the carrier kind from `x` against `cos(α/2)`.
pub fn classify_carrier(alpha: f64, x: f64) -> Result<CarrierKind, SequenceError> {
    check_domain(alpha, x)?;
    let gap = x - (alpha / 2.0).cos();
    Ok(if gap < -CLASSIFY_EPS {
        CarrierKind::Circle
    } else if gap > CLASSIFY_EPS {
        CarrierKind::Equidistant
    } else {
        CarrierKind::Horocycle
    })
}

/// Euclidean diameter of the carrier, `x / cos(α/2)`.
pub fn carrier_diameter(alpha: f64, x: f64) -> Result<f64, SequenceError> {
    check_domain(alpha, x)?;
    Ok(x / (alpha / 2.0).cos())
}

/// `Some(k)` when `α = 2π/k` for an integer `k ≥ 3`.
pub fn tiling_condition(alpha: f64) -> Option<u32> {
    if !(alpha > 0.0 && alpha < PI) {
        return None;
    }
    let k = (2.0 * PI / alpha).round();
    (k >= 3.0 && k < u32::MAX as f64 && (alpha - 2.0 * PI / k).abs() < 1e-12).then_some(k as u32)
}

/// The first bisectors of the construction: `μ_1` (of `[x_0 x_1]`) and `β_1`
/// (through `x_1`, at `α/2` from `x_1 x_0`).
pub fn first_bisectors(alpha: f64, x: f64) -> Result<(Geodesic, Geodesic), SequenceError> {
    check_domain(alpha, x)?;
    let x1 = DiscPoint { x, y: 0.0 };
    let mu = perpendicular_bisector(DiscPoint::ORIGIN, x1)?;
    let beta = geodesic_with_tangent(x1, Vec2::new(-1.0, 0.0).rotated(-alpha / 2.0));
    Ok((mu, beta))
}

/// Carrier kind read off the intersection of `μ_1` and `β_1`.
pub fn classify_geometric(alpha: f64, x: f64) -> Result<CarrierKind, SequenceError> {
    let (mu, beta) = first_bisectors(alpha, x)?;
    Ok(match intersect(&mu, &beta)? {
        Intersection::Interior(_) => CarrierKind::Circle,
        Intersection::Boundary(_) => CarrierKind::Horocycle,
        Intersection::None => CarrierKind::Equidistant,
    })
}

/// Fits the carrier through `x_0 = O` and `x_1 = (x, 0)`, centred on the
/// counterclockwise (positive y) side.
pub fn fit_carrier(alpha: f64, x: f64) -> Result<CarrierCurve, SequenceError> {
    let kind = classify_carrier(alpha, x)?;
    let half = alpha / 2.0;
    let radius = x / (2.0 * half.cos());
    let center = Vec2::new(x / 2.0, x / 2.0 * half.tan());
    let dir = center.normalized();
    let mut curve = CarrierCurve {
        kind,
        euclid_center: [center.x, center.y],
        euclid_radius: radius,
        hyp_center: None,
        ideal_points: Vec::new(),
        axis: None,
    };
    match kind {
        CarrierKind::Circle => {
            // The carrier passes through O, so its hyperbolic centre is the
            // midpoint of O and the diametrically opposite point.
            let far = (dir * (2.0 * radius)).point();
            curve.hyp_center = Some(geom::midpoint(DiscPoint::ORIGIN, far));
        }
        CarrierKind::Horocycle => {
            curve.ideal_points.push(IdealPoint::from_direction(dir));
        }
        CarrierKind::Equidistant => {
            let d = center.norm();
            let along = (d * d + 1.0 - radius * radius) / (2.0 * d);
            let h = (1.0 - along * along).max(0.0).sqrt();
            let a = IdealPoint::from_direction(dir * along + dir.perp() * h);
            let b = IdealPoint::from_direction(dir * along - dir.perp() * h);
            curve.axis = Some(Geodesic::through_ideal(a, b));
            curve.ideal_points = vec![a, b];
        }
    }
    Ok(curve)
}

fn step(
    prev: DiscPoint,
    pivot: DiscPoint,
    turn: f64,
    index: i64,
) -> Result<DiscPoint, SequenceError> {
    let beta = geodesic_with_tangent(pivot, tangent_toward(pivot, prev).rotated(turn));
    let next = reflect(prev, &beta);
    let gap = 1.0 - next.norm();
    // Also rejects NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(gap > MIN_BOUNDARY_GAP) {
        return Err(SequenceError::PrecisionExhausted { index, gap });
    }
    Ok(next)
}

/// Builds `x_{−steps_neg} … x_{1+steps_pos}`, fits and classifies the carrier.
pub fn build_sequence(spec: &SequenceSpec) -> Result<SequenceResult, SequenceError> {
    check_domain(spec.alpha, spec.x)?;
    let half = spec.alpha / 2.0;
    let x0 = DiscPoint::ORIGIN;
    let x1 = DiscPoint { x: spec.x, y: 0.0 };

    let mut forward = vec![x0, x1];
    for i in 0..spec.steps_pos {
        let n = forward.len();
        let next = step(forward[n - 2], forward[n - 1], -half, (i + 2) as i64)?;
        forward.push(next);
    }
    // Backwards: x_{n−1} is the image of x_{n+1} in the line through x_n.
    let mut backward: Vec<DiscPoint> = Vec::with_capacity(spec.steps_neg);
    let (mut ahead, mut here) = (x1, x0);
    for i in 0..spec.steps_neg {
        let next = step(ahead, here, half, -(i as i64) - 1)?;
        backward.push(next);
        ahead = here;
        here = next;
    }
    backward.reverse();
    let first_index = -(spec.steps_neg as i64);
    let mut points = backward;
    points.extend(forward);

    let carrier = fit_carrier(spec.alpha, spec.x)?;
    let origin_pos = spec.steps_neg;
    let mut abscissas = vec![0.0; points.len()];
    for i in origin_pos + 1..points.len() {
        abscissas[i] =
            abscissas[i - 1] + carrier.arc_length(hyperbolic_distance(points[i - 1], points[i]));
    }
    for i in (0..origin_pos).rev() {
        abscissas[i] =
            abscissas[i + 1] - carrier.arc_length(hyperbolic_distance(points[i], points[i + 1]));
    }
    let circumference = carrier.circumference();
    Ok(SequenceResult {
        points,
        first_index,
        carrier,
        abscissas,
        circumference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRAC: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_carrier(PI / 2.0, 0.5).unwrap(),
            CarrierKind::Circle
        );
        assert_eq!(
            classify_carrier(PI / 2.0, (PI / 4.0).cos()).unwrap(),
            CarrierKind::Horocycle
        );
        assert_eq!(
            classify_carrier(PI / 2.0, 0.8).unwrap(),
            CarrierKind::Equidistant
        );
        assert!(matches!(
            classify_carrier(PI, 0.5),
            Err(SequenceError::Domain(_))
        ));
        assert!(matches!(
            classify_carrier(1.0, 1.5),
            Err(SequenceError::Domain(_))
        ));
        assert!(matches!(
            classify_carrier(0.0, 0.5),
            Err(SequenceError::Domain(_))
        ));
    }

    #[test]
    fn diameter_examples() {
        assert!((carrier_diameter(PI / 2.0, (PI / 4.0).cos()).unwrap() - 1.0).abs() < 1e-15);
        assert!((carrier_diameter(PI / 2.0, 0.35355339).unwrap() - 0.5).abs() < 1e-8);
        assert!((carrier_diameter(2.0 * PI / 3.0, 0.25).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tiling_condition_examples() {
        assert_eq!(tiling_condition(2.0 * PI / 3.0), Some(3));
        assert_eq!(tiling_condition(2.0 * PI / 7.0), Some(7));
        assert_eq!(tiling_condition(1.0), None);
        assert_eq!(tiling_condition(PI), None);
    }

    #[test]
    fn horocycle_example() {
        let spec = SequenceSpec::new(PI / 2.0, (PI / 4.0).cos(), 10, 0).unwrap();
        let res = build_sequence(&spec).unwrap();
        let c = &res.carrier;
        assert_eq!(c.kind, CarrierKind::Horocycle);
        assert!((c.euclid_center[0] - 0.353553390593).abs() < 1e-9);
        assert!((c.euclid_center[1] - 0.353553390593).abs() < 1e-9);
        assert!((c.euclid_radius - 0.5).abs() < 1e-12);
        let p = c.ideal_points[0];
        assert!((p.ux - FRAC).abs() < 1e-12 && (p.uy - FRAC).abs() < 1e-12);
        for &q in &res.points {
            assert!(c.residual(q) < 1e-9);
        }
    }

    #[test]
    fn base_pair_only() {
        let res = build_sequence(&SequenceSpec::new(PI / 2.0, 0.5, 0, 0).unwrap()).unwrap();
        assert_eq!(
            res.points,
            vec![DiscPoint::ORIGIN, DiscPoint { x: 0.5, y: 0.0 }]
        );
        assert_eq!(res.carrier.kind, CarrierKind::Circle);
        assert!(res.circumference.unwrap() > 0.0);
    }

    #[test]
    fn circle_closes_up() {
        // α = π/2 and x below cos(π/4): a regular polygon; the hyperbolic
        // centre is equidistant from every point.
        let res = build_sequence(&SequenceSpec::new(PI / 2.0, 0.3, 12, 3).unwrap()).unwrap();
        let a = res.carrier.hyp_center.unwrap();
        let r = res.carrier.hyperbolic_radius();
        for &p in &res.points {
            assert!((hyperbolic_distance(a, p) - r).abs() < 1e-10);
        }
        // Interior angle α at every inner vertex.
        for w in res.points.windows(3) {
            assert!((geom::segment_angle(w[1], w[0], w[2]) - PI / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn equidistant_diverges_to_both_ends() {
        let res = build_sequence(&SequenceSpec::new(2.0 * PI / 3.0, 0.9, 30, 30).unwrap());
        let res = match res {
            Ok(r) => r,
            Err(SequenceError::PrecisionExhausted { .. }) => {
                build_sequence(&SequenceSpec::new(2.0 * PI / 3.0, 0.9, 10, 10).unwrap()).unwrap()
            }
            Err(e) => panic!("{e}"),
        };
        let c = &res.carrier;
        assert_eq!(c.kind, CarrierKind::Equidistant);
        let first = *res.points.first().unwrap();
        let last = *res.points.last().unwrap();
        let dist = |p: DiscPoint, e: IdealPoint| (p.vec() - e.vec()).norm();
        let (e0, e1) = (c.ideal_points[0], c.ideal_points[1]);
        let (near_last, near_first) = if dist(last, e0) < dist(last, e1) {
            (e0, e1)
        } else {
            (e1, e0)
        };
        assert!(dist(last, near_last) < 1e-3);
        assert!(dist(first, near_first) < 1e-3);
    }

    #[test]
    fn precision_cap_is_reported() {
        let err =
            build_sequence(&SequenceSpec::new(2.0 * PI / 3.0, 0.99, 500, 0).unwrap()).unwrap_err();
        assert!(matches!(err, SequenceError::PrecisionExhausted { .. }));
    }

    #[test]
    fn geometric_classification_agrees() {
        for q in 3..=8 {
            let alpha = 2.0 * PI / q as f64;
            let c = (alpha / 2.0).cos();
            for x in [0.5 * c, 0.9 * c, c, 1.1 * c] {
                if x >= 1.0 {
                    continue;
                }
                assert_eq!(
                    classify_geometric(alpha, x).unwrap(),
                    classify_carrier(alpha, x).unwrap(),
                    "q={q} x={x}"
                );
            }
        }
    }
}
