//! Poincaré disc kernel.
//!
//! Hyperbolic lines are represented by their Euclidean support: either a
//! diameter of the unit disc or a circle orthogonal to the unit circle.
//! Every operation here is a pure function of `Copy` values.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Collinearity threshold (triple product with the origin) below which a
/// geodesic is represented as a diameter.
pub const COLLINEAR_EPS: f64 = 1e-12;
/// Points closer than this (Euclidean) are treated as coincident.
pub const COINCIDENT_EPS: f64 = 1e-12;
/// Tolerance for deciding that two geodesics meet on the boundary circle.
pub const BOUNDARY_EPS: f64 = 1e-9;
/// Incidence tolerance used by operations that require a point on a line.
pub const INCIDENCE_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("points coincide")]
    CoincidentPoints,
    #[error("point is not on the geodesic (residual {0:e})")]
    PointNotOnGeodesic(f64),
    #[error("point is not on both geodesics (residuals {0:e}, {1:e})")]
    PointNotOnBoth(f64, f64),
    #[error("geodesics are identical")]
    IdenticalGeodesics,
    #[error("point ({0}, {1}) is not strictly inside the unit disc")]
    OutsideDisc(f64, f64),
}

/// A point of the hyperbolic plane, stored by its Euclidean coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscPoint {
    pub x: f64,
    pub y: f64,
}

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint { x: 0.0, y: 0.0 };

    /// Checked constructor; rejects points on or outside the unit circle.
    pub fn new(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() && x * x + y * y < 1.0 {
            Ok(DiscPoint { x, y })
        } else {
            Err(GeomError::OutsideDisc(x, y))
        }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        DiscPoint {
            x: r * theta.cos(),
            y: r * theta.sin(),
        }
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Euclidean distance.
    pub fn euclid_dist(self, other: DiscPoint) -> f64 {
        (self.vec() - other.vec()).norm()
    }
}

/// A point on the boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint {
    pub ux: f64,
    pub uy: f64,
}

impl IdealPoint {
    pub fn from_angle(theta: f64) -> Self {
        IdealPoint {
            ux: theta.cos(),
            uy: theta.sin(),
        }
    }

    /// Projects a nonzero vector onto the unit circle.
    pub fn from_direction(v: Vec2) -> Self {
        let u = v.normalized();
        IdealPoint { ux: u.x, uy: u.y }
    }

    pub fn angle(self) -> f64 {
        self.uy.atan2(self.ux)
    }

    pub fn vec(self) -> Vec2 {
        Vec2::new(self.ux, self.uy)
    }
}

/// Plain Euclidean vector used for intermediate computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }
    pub fn normalized(self) -> Vec2 {
        self * (1.0 / self.norm())
    }
    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
    pub fn rotated(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }
    pub fn point(self) -> DiscPoint {
        DiscPoint {
            x: self.x,
            y: self.y,
        }
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A hyperbolic line.
///
/// `Diameter` directions are canonical: non-negative x, and positive y when
/// x is zero. `Arc` circles always satisfy `|center|² = radius² + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geodesic {
    Diameter { dx: f64, dy: f64 },
    Arc { cx: f64, cy: f64, radius: f64 },
}

impl Geodesic {
    /// Diameter along the given direction, canonicalised.
    pub fn diameter(dir: Vec2) -> Geodesic {
        let mut d = dir.normalized();
        if d.x < 0.0 || (d.x == 0.0 && d.y < 0.0) {
            d = -d;
        }
        Geodesic::Diameter { dx: d.x, dy: d.y }
    }

    /// Orthogonal circle with the given centre; the radius is derived from
    /// the orthogonality condition.
    pub fn arc(center: Vec2) -> Geodesic {
        let r2 = center.norm_sq() - 1.0;
        debug_assert!(r2 > 0.0, "arc centre must lie outside the unit disc");
        Geodesic::Arc {
            cx: center.x,
            cy: center.y,
            radius: r2.sqrt(),
        }
    }

    /// Orthogonal circle with an independently computed radius; avoids the
    /// cancellation in `|ω|² − 1` for small circles near the boundary.
    pub fn arc_with_radius(center: Vec2, radius: f64) -> Geodesic {
        Geodesic::Arc {
            cx: center.x,
            cy: center.y,
            radius,
        }
    }

    pub fn x_axis() -> Geodesic {
        Geodesic::Diameter { dx: 1.0, dy: 0.0 }
    }

    pub fn y_axis() -> Geodesic {
        Geodesic::Diameter { dx: 0.0, dy: 1.0 }
    }

    /// `| |ω|² − r² − 1 |` for arcs, `| |d| − 1 |` for diameters.
    pub fn orthogonality_residual(&self) -> f64 {
        match *self {
            Geodesic::Diameter { dx, dy } => (Vec2::new(dx, dy).norm() - 1.0).abs(),
            Geodesic::Arc { cx, cy, radius } => (cx * cx + cy * cy - radius * radius - 1.0).abs(),
        }
    }

    /// Euclidean distance from `p` to the supporting line or circle.
    pub fn incidence_residual(&self, p: DiscPoint) -> f64 {
        match *self {
            Geodesic::Diameter { dx, dy } => Vec2::new(dx, dy).cross(p.vec()).abs(),
            Geodesic::Arc { cx, cy, radius } => {
                ((p.vec() - Vec2::new(cx, cy)).norm() - radius).abs()
            }
        }
    }

    pub fn contains(&self, p: DiscPoint) -> bool {
        self.incidence_residual(p) < INCIDENCE_EPS
    }

    /// Unit tangent at `p` (assumed incident). Diameters use their canonical
    /// direction, arcs the counterclockwise direction around their centre.
    pub fn tangent_at(&self, p: DiscPoint) -> Vec2 {
        match *self {
            Geodesic::Diameter { dx, dy } => Vec2::new(dx, dy),
            Geodesic::Arc { cx, cy, .. } => (p.vec() - Vec2::new(cx, cy)).perp().normalized(),
        }
    }

    /// The two ideal end points, in a fixed order.
    pub fn ideal_endpoints(&self) -> [IdealPoint; 2] {
        match *self {
            Geodesic::Diameter { dx, dy } => [
                IdealPoint { ux: dx, uy: dy },
                IdealPoint { ux: -dx, uy: -dy },
            ],
            Geodesic::Arc { cx, cy, .. } => {
                let c = Vec2::new(cx, cy);
                let phi = cy.atan2(cx);
                let half = (1.0 / c.norm()).acos();
                [
                    IdealPoint::from_angle(phi - half),
                    IdealPoint::from_angle(phi + half),
                ]
            }
        }
    }

    /// Geodesic joining two distinct ideal points.
    pub fn through_ideal(a: IdealPoint, b: IdealPoint) -> Geodesic {
        let (u, v) = (a.vec(), b.vec());
        let denom = 1.0 + u.dot(v);
        if u.cross(v).abs() < COLLINEAR_EPS && denom < 0.5 {
            Geodesic::diameter(u)
        } else {
            Geodesic::arc((u + v) * (1.0 / denom))
        }
    }

    /// Which side of the supporting line/circle `p` lies on: sign of the
    /// oriented cross product for diameters, of `|p − ω|² − r²` for arcs.
    pub fn side(&self, p: DiscPoint) -> f64 {
        match *self {
            Geodesic::Diameter { dx, dy } => Vec2::new(dx, dy).cross(p.vec()),
            Geodesic::Arc { cx, cy, radius } => {
                (p.vec() - Vec2::new(cx, cy)).norm_sq() - radius * radius
            }
        }
    }

    fn approx_eq(&self, other: &Geodesic, tol: f64) -> bool {
        match (*self, *other) {
            (Geodesic::Diameter { dx: a, dy: b }, Geodesic::Diameter { dx: c, dy: d }) => {
                (a - c).abs() < tol && (b - d).abs() < tol
            }
            (
                Geodesic::Arc {
                    cx: a,
                    cy: b,
                    radius: r,
                },
                Geodesic::Arc {
                    cx: c,
                    cy: d,
                    radius: s,
                },
            ) => {
                let scale = 1.0 + r.max(s);
                (a - c).abs() < tol * scale
                    && (b - d).abs() < tol * scale
                    && (r - s).abs() < tol * scale
            }
            _ => false,
        }
    }
}

/// A ray on a geodesic issued from `origin`; `orientation` selects the
/// direction relative to the carrier's tangent at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicRay {
    pub carrier: Geodesic,
    pub origin: DiscPoint,
    pub orientation: i8,
}

impl GeodesicRay {
    pub fn new(carrier: Geodesic, origin: DiscPoint, orientation: i8) -> Result<Self, GeomError> {
        let res = carrier.incidence_residual(origin);
        if res >= 1e-12 * (1.0 + carrier_scale(&carrier)) {
            return Err(GeomError::PointNotOnGeodesic(res));
        }
        Ok(GeodesicRay {
            carrier,
            origin,
            orientation: if orientation < 0 { -1 } else { 1 },
        })
    }

    /// Ray from `origin` through `toward`.
    pub fn through(origin: DiscPoint, toward: DiscPoint) -> Result<Self, GeomError> {
        let carrier = geodesic_through(origin, toward)?;
        let t = carrier.tangent_at(origin);
        let orientation = if t.dot(tangent_toward(origin, toward)) >= 0.0 {
            1
        } else {
            -1
        };
        Ok(GeodesicRay {
            carrier,
            origin,
            orientation,
        })
    }

    /// Unit direction of the ray at its origin.
    pub fn direction(&self) -> Vec2 {
        self.carrier.tangent_at(self.origin) * f64::from(self.orientation)
    }

    /// Ideal point the ray converges to.
    pub fn end(&self) -> IdealPoint {
        let d = self.direction();
        let [a, b] = self.carrier.ideal_endpoints();
        // The end point lies ahead of the origin along the ray.
        if (a.vec() - self.origin.vec()).dot(d) >= (b.vec() - self.origin.vec()).dot(d) {
            a
        } else {
            b
        }
    }
}

fn carrier_scale(g: &Geodesic) -> f64 {
    match *g {
        Geodesic::Diameter { .. } => 0.0,
        Geodesic::Arc { radius, .. } => radius,
    }
}

/// Result of intersecting two geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    Interior(DiscPoint),
    Boundary(IdealPoint),
    None,
}

/// The unique geodesic through two distinct points.
pub fn geodesic_through(p1: DiscPoint, p2: DiscPoint) -> Result<Geodesic, GeomError> {
    if p1.euclid_dist(p2) <= COINCIDENT_EPS {
        return Err(GeomError::CoincidentPoints);
    }
    let (a, b) = (p1.vec(), p2.vec());
    let cross = a.cross(b);
    if cross.abs() < COLLINEAR_EPS {
        let dir = if a.norm_sq() >= b.norm_sq() { a } else { b };
        return Ok(Geodesic::diameter(dir));
    }
    // Circle x² + y² − 2ux − 2vy + 1 = 0 through both points:
    // 2(a·c) = |a|² + 1, 2(b·c) = |b|² + 1.
    let ra = (a.norm_sq() + 1.0) / 2.0;
    let rb = (b.norm_sq() + 1.0) / 2.0;
    let cx = (ra * b.y - rb * a.y) / cross;
    let cy = (a.x * rb - b.x * ra) / cross;
    let c = Vec2::new(cx, cy);
    Ok(Geodesic::arc_with_radius(
        c,
        ((a - c).norm() + (b - c).norm()) / 2.0,
    ))
}

/// Geodesic through `p` whose tangent at `p` is parallel to `dir`.
pub fn geodesic_with_tangent(p: DiscPoint, dir: Vec2) -> Geodesic {
    let d = dir.normalized();
    let pv = p.vec();
    let n = d.perp();
    let pn = pv.dot(n);
    if pv.norm() < COLLINEAR_EPS || pn.abs() < COLLINEAR_EPS {
        return Geodesic::diameter(d);
    }
    // Centre on the normal line: |p + s n|² = s² + 1.
    let s = (1.0 - pv.norm_sq()) / (2.0 * pn);
    Geodesic::arc_with_radius(pv + n * s, s.abs())
}

/// Hyperbolic reflection (circle inversion or Euclidean mirror).
pub fn reflect(p: DiscPoint, g: &Geodesic) -> DiscPoint {
    match *g {
        Geodesic::Diameter { dx, dy } => {
            let d = Vec2::new(dx, dy);
            let v = p.vec();
            (d * (2.0 * v.dot(d)) - v).point()
        }
        Geodesic::Arc { cx, cy, radius } => {
            let c = Vec2::new(cx, cy);
            let w = p.vec() - c;
            (c + w * (radius * radius / w.norm_sq())).point()
        }
    }
}

/// Reflects a whole direction at a point: the image of the tangent vector
/// `v` based at `p` under the reflection in `g`.
pub fn reflect_vector(p: DiscPoint, v: Vec2, g: &Geodesic) -> Vec2 {
    match *g {
        Geodesic::Diameter { dx, dy } => {
            let d = Vec2::new(dx, dy);
            d * (2.0 * v.dot(d)) - v
        }
        Geodesic::Arc { cx, cy, .. } => {
            // Inversion differential: mirror in the line orthogonal to p − ω.
            let n = (p.vec() - Vec2::new(cx, cy)).normalized();
            v - n * (2.0 * v.dot(n))
        }
    }
}

/// The geodesic whose reflection exchanges `p1` and `p2`.
pub fn perpendicular_bisector(p1: DiscPoint, p2: DiscPoint) -> Result<Geodesic, GeomError> {
    if p1.euclid_dist(p2) <= COINCIDENT_EPS {
        return Err(GeomError::CoincidentPoints);
    }
    let (a, b) = (p1.vec(), p2.vec());
    let gap = b.norm_sq() - a.norm_sq();
    if gap.abs() < COLLINEAR_EPS {
        let sum = a + b;
        let dir = if sum.norm() > COLLINEAR_EPS {
            sum
        } else {
            (b - a).perp()
        };
        return Ok(Geodesic::diameter(dir));
    }
    // Inversion centre c = a + t(b − a) with |c|² − 1 = (c − a)·(c − b).
    let t = (1.0 - a.norm_sq()) / gap;
    let c = a + (b - a) * t;
    Ok(Geodesic::arc_with_radius(
        c,
        ((c - a).norm() * (c - b).norm()).sqrt(),
    ))
}

/// The geodesic through `at` making angle `theta` (counterclockwise) with
/// the tangent of `base` at `at`.
pub fn line_at_angle(at: DiscPoint, base: &Geodesic, theta: f64) -> Result<Geodesic, GeomError> {
    let res = base.incidence_residual(at);
    if res >= INCIDENCE_EPS {
        return Err(GeomError::PointNotOnGeodesic(res));
    }
    Ok(geodesic_with_tangent(
        at,
        base.tangent_at(at).rotated(theta),
    ))
}

/// Hyperbolic distance, `2 asinh( |p − q| / sqrt((1 − |p|²)(1 − |q|²)) )`.
pub fn hyperbolic_distance(p1: DiscPoint, p2: DiscPoint) -> f64 {
    let num = (p1.vec() - p2.vec()).norm_sq();
    let den = (1.0 - p1.norm_sq()) * (1.0 - p2.norm_sq());
    2.0 * (num / den).sqrt().asinh()
}

/// Lobachevsky's formula: hyperbolic distance from the centre to a point at
/// Euclidean distance `d`.
pub fn distance_from_origin(d: f64) -> f64 {
    ((1.0 + d) / (1.0 - d)).abs().ln()
}

/// Euclidean radius of a point at hyperbolic distance `delta` from the centre.
pub fn euclid_radius_from_distance(delta: f64) -> f64 {
    (delta / 2.0).tanh()
}

/// Angle in `[0, π]` between the oriented tangents of two geodesics at a
/// common point.
pub fn angle_between(g1: &Geodesic, g2: &Geodesic, at: DiscPoint) -> Result<f64, GeomError> {
    let (r1, r2) = (g1.incidence_residual(at), g2.incidence_residual(at));
    if r1 >= INCIDENCE_EPS || r2 >= INCIDENCE_EPS {
        return Err(GeomError::PointNotOnBoth(r1, r2));
    }
    let c = g1.tangent_at(at).dot(g2.tangent_at(at)).clamp(-1.0, 1.0);
    Ok(c.acos())
}

/// Unit tangent at `from` of the geodesic segment running to `to`.
pub fn tangent_toward(from: DiscPoint, to: DiscPoint) -> Vec2 {
    let chord = to.vec() - from.vec();
    match geodesic_through(from, to) {
        Ok(g @ Geodesic::Arc { .. }) => {
            let t = g.tangent_at(from);
            if t.dot(chord) >= 0.0 {
                t
            } else {
                -t
            }
        }
        _ => chord.normalized(),
    }
}

/// Interior angle at `vertex` between the segments towards `a` and `b`.
pub fn segment_angle(vertex: DiscPoint, a: DiscPoint, b: DiscPoint) -> f64 {
    let c = tangent_toward(vertex, a)
        .dot(tangent_toward(vertex, b))
        .clamp(-1.0, 1.0);
    c.acos()
}

/// Hyperbolic midpoint of the segment `[a, b]`.
pub fn midpoint(a: DiscPoint, b: DiscPoint) -> DiscPoint {
    // Move `a` to the origin, halve, move back.
    if a.euclid_dist(b) <= COINCIDENT_EPS {
        return a;
    }
    if a.norm() < COINCIDENT_EPS {
        let d = hyperbolic_distance(a, b) / 2.0;
        return (b.vec().normalized() * euclid_radius_from_distance(d)).point();
    }
    let to_origin = perpendicular_bisector(a, DiscPoint::ORIGIN).expect("a is not the origin");
    let b0 = reflect(b, &to_origin);
    let d = hyperbolic_distance(DiscPoint::ORIGIN, b0) / 2.0;
    let m0 = (b0.vec().normalized() * euclid_radius_from_distance(d)).point();
    reflect(m0, &to_origin)
}

/// Classifies how two hyperbolic lines meet.
///
/// Two lines are asymptotic (meet on the boundary) when they share an ideal
/// end point within [`BOUNDARY_EPS`] of angle, and cross inside the disc
/// exactly when their end points interleave on the boundary circle.
pub fn intersect(g1: &Geodesic, g2: &Geodesic) -> Result<Intersection, GeomError> {
    if g1.approx_eq(g2, 1e-12) {
        return Err(GeomError::IdenticalGeodesics);
    }
    let e1 = g1.ideal_endpoints();
    let e2 = g2.ideal_endpoints();
    for a in &e1 {
        for b in &e2 {
            if angular_gap(a.angle(), b.angle()) <= BOUNDARY_EPS {
                let mid = (a.vec() + b.vec()).normalized();
                return Ok(Intersection::Boundary(IdealPoint {
                    ux: mid.x,
                    uy: mid.y,
                }));
            }
        }
    }
    if !interleaved(e1, e2) {
        return Ok(Intersection::None);
    }
    Ok(Intersection::Interior(crossing_point(g1, g2)))
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn interleaved(e1: [IdealPoint; 2], e2: [IdealPoint; 2]) -> bool {
    let base = e1[0].angle();
    let pos = |p: IdealPoint| (p.angle() - base).rem_euclid(2.0 * PI);
    let hi = pos(e1[1]);
    let in1 = pos(e2[0]) < hi;
    let in2 = pos(e2[1]) < hi;
    in1 != in2
}

fn crossing_point(g1: &Geodesic, g2: &Geodesic) -> DiscPoint {
    match (*g1, *g2) {
        (Geodesic::Diameter { .. }, Geodesic::Diameter { .. }) => DiscPoint::ORIGIN,
        (Geodesic::Diameter { dx, dy }, Geodesic::Arc { cx, cy, .. })
        | (Geodesic::Arc { cx, cy, .. }, Geodesic::Diameter { dx, dy }) => {
            // t² − 2t(d·ω) + 1 = 0, take the root inside the disc.
            let d = Vec2::new(dx, dy);
            let k = d.dot(Vec2::new(cx, cy));
            let disc = (k * k - 1.0).max(0.0).sqrt();
            let t = if k > 0.0 {
                1.0 / (k + disc)
            } else {
                1.0 / (k - disc)
            };
            (d * t).point()
        }
        (
            Geodesic::Arc {
                cx: ax,
                cy: ay,
                radius: ra,
            },
            Geodesic::Arc {
                cx: bx,
                cy: by,
                radius: rb,
            },
        ) => {
            let c1 = Vec2::new(ax, ay);
            let c2 = Vec2::new(bx, by);
            let delta = c2 - c1;
            let dist = delta.norm();
            let along = (dist * dist + ra * ra - rb * rb) / (2.0 * dist);
            let h = (ra * ra - along * along).max(0.0).sqrt();
            let base = c1 + delta * (along / dist);
            let off = delta.perp() * (h / dist);
            let (p, q) = (base + off, base - off);
            if p.norm_sq() <= q.norm_sq() {
                p.point()
            } else {
                q.point()
            }
        }
    }
}

/// Euclidean circle (centre, radius) through three points.
pub fn circumcircle(a: Vec2, b: Vec2, c: Vec2) -> Option<(Vec2, f64)> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-300 {
        return None;
    }
    let (a2, b2, c2) = (a.norm_sq(), b.norm_sq(), c.norm_sq());
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Vec2::new(ux, uy);
    Some((center, (a - center).norm()))
}
