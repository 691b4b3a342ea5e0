//! Self-check suites run by `infinigon verify`. Each check carries the
//! worst residual it saw and passes when that residual is within its
//! tolerance.

use std::f64::consts::PI;
use std::str::FromStr;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geom::{
    circumcircle, geodesic_through, hyperbolic_distance, intersect, perpendicular_bisector,
    reflect, DiscPoint, Geodesic, Intersection,
};
use crate::grossnum::{
    eval_delta_asymptotic, eval_one_minus_d2, tile_count, Coeff, GrossNumber, Term, TileCount,
    TruncationOrder,
};
use crate::metrics::{self, hyperbolic_grid, oracle, PolygonMetrics, PolygonSpec};
use crate::sequence::{build_sequence, classify_carrier, CarrierKind, SequenceSpec};
use crate::tiler::{check_tiling, generate_bfs, generate_sector_tree, generation_counts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Geom,
    Sequence,
    Metrics,
    Gross,
    Tiler,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "geom" => Suite::Geom,
            "sequence" => Suite::Sequence,
            "metrics" => Suite::Metrics,
            "gross" => Suite::Gross,
            "tiler" => Suite::Tiler,
            "all" => Suite::All,
            _ => {
                return Err(format!(
                    "unknown suite {s:?}; expected geom, sequence, metrics, gross, tiler or all"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    /// Passes iff `residual <= tol` (NaN fails).
    pub fn within(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: residual <= tol,
            residual,
        }
    }

    /// A yes/no check; residual 0 on success, 1 on failure.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            pass: ok,
            residual: if ok { 0.0 } else { 1.0 },
        }
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Check {
            name: format!("{}: {err}", name.into()),
            pass: false,
            residual: f64::NAN,
        }
    }
}

pub fn run(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Geom => geom_suite(),
        Suite::Sequence => sequence_suite(),
        Suite::Metrics => metrics_suite(),
        Suite::Gross => gross_suite(),
        Suite::Tiler => tiler_suite(),
        Suite::All => [
            geom_suite(),
            sequence_suite(),
            metrics_suite(),
            gross_suite(),
            tiler_suite(),
        ]
        .concat(),
    }
}

fn sample_points() -> Vec<DiscPoint> {
    let mut pts = vec![DiscPoint::ORIGIN];
    for k in 0..12 {
        for r in [0.1, 0.45, 0.8, 0.97] {
            pts.push(DiscPoint::from_polar(r, 0.37 + k as f64 * PI / 6.0 + r));
        }
    }
    pts
}

fn geom_suite() -> Vec<Check> {
    let pts = sample_points();
    let mut involution = 0.0f64;
    let mut isometry = 0.0f64;
    let mut orthogonality = 0.0f64;
    let mut incidence = 0.0f64;
    let mut bisector = 0.0f64;
    let mut crossing = 0.0f64;
    for (i, &a) in pts.iter().enumerate() {
        for &b in pts.iter().skip(i + 1).step_by(5) {
            let Ok(g) = geodesic_through(a, b) else {
                continue;
            };
            // Relative to |ω|² so nearly straight arcs are not penalized.
            let scale = match g {
                Geodesic::Arc { radius, .. } => 1.0 + radius * radius,
                Geodesic::Diameter { .. } => 1.0,
            };
            orthogonality = orthogonality.max(g.orthogonality_residual() / scale);
            incidence = incidence
                .max(g.incidence_residual(a))
                .max(g.incidence_residual(b));
            for &x in pts.iter().step_by(7) {
                let y = reflect(x, &g);
                involution = involution.max(reflect(y, &g).euclid_dist(x));
                if x.norm() < 0.9 && y.norm() < 0.9 {
                    isometry =
                        isometry.max((hyperbolic_distance(x, a) - hyperbolic_distance(y, a)).abs());
                }
            }
            if let Ok(m) = perpendicular_bisector(a, b) {
                bisector = bisector.max(reflect(a, &m).euclid_dist(b));
                if let Ok(Intersection::Interior(c)) = intersect(&g, &m) {
                    crossing = crossing
                        .max(g.incidence_residual(c))
                        .max(m.incidence_residual(c));
                }
            }
        }
    }
    vec![
        Check::within("geom.reflection_involution", involution, 1e-12),
        Check::within("geom.reflection_isometry", isometry, 1e-9),
        Check::within("geom.geodesic_orthogonality", orthogonality, 1e-12),
        Check::within("geom.geodesic_incidence", incidence, 1e-12),
        Check::within("geom.bisector_swaps_endpoints", bisector, 1e-12),
        Check::within("geom.intersection_incidence", crossing, 1e-9),
    ]
}

/// Parameters per regime for the long-run sequence checks.
pub const LONG_RUNS: [(CarrierKind, f64, f64); 3] = [
    (CarrierKind::Circle, PI / 2.0, 0.3),
    (
        CarrierKind::Horocycle,
        PI / 2.0,
        std::f64::consts::FRAC_1_SQRT_2,
    ),
    (CarrierKind::Equidistant, PI - 0.05, 0.03),
];

fn sequence_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let mut kinds_ok = true;
    let mut tangency = 0.0f64;
    let mut diameter = 0.0f64;
    for q in 3..=8 {
        let alpha = 2.0 * PI / q as f64;
        let c = (PI / q as f64).cos();
        // 1.1c leaves the disc once c > 1/1.1; fall back to halfway to 1.
        let above = if 1.1 * c < 1.0 {
            1.1 * c
        } else {
            0.5 * (1.0 + c)
        };
        for (x, want) in [
            (0.9 * c, CarrierKind::Circle),
            (c, CarrierKind::Horocycle),
            (above, CarrierKind::Equidistant),
        ] {
            kinds_ok &= classify_carrier(alpha, x).ok() == Some(want);
            // Circle through x₋₁, x₀, x₁ as built by reflections.
            let built = SequenceSpec::new(alpha, x, 0, 1).and_then(|s| build_sequence(&s));
            let circle = built.ok().and_then(|r| {
                let v: Vec<_> = r.points.iter().map(|p| p.vec()).collect();
                circumcircle(v[0], v[1], v[2])
            });
            match circle {
                Some((center, radius)) => {
                    if want == CarrierKind::Horocycle {
                        tangency = tangency.max((center.norm() + radius - 1.0).abs());
                    }
                    diameter = diameter.max((2.0 * radius - x / (alpha / 2.0).cos()).abs());
                }
                None => out.push(Check::failed(
                    format!("sequence.construction q={q} x={x}"),
                    "no circle",
                )),
            }
        }
    }
    out.push(Check::holds("sequence.trichotomy", kinds_ok));
    out.push(Check::within("sequence.horocycle_tangency", tangency, 1e-9));
    out.push(Check::within("sequence.carrier_diameter", diameter, 1e-10));

    for (kind, alpha, x) in LONG_RUNS {
        let name = kind.as_str();
        let res = match SequenceSpec::new(alpha, x, 100, 100).and_then(|s| build_sequence(&s)) {
            Ok(r) => r,
            Err(e) => {
                out.push(Check::failed(format!("sequence.{name}_run"), e));
                continue;
            }
        };
        let on_carrier = res
            .points
            .iter()
            .map(|&p| res.carrier.residual(p))
            .fold(0.0, f64::max);
        let step = hyperbolic_distance(res.points[0], res.points[1]);
        let spread = res
            .points
            .windows(2)
            .map(|w| (hyperbolic_distance(w[0], w[1]) - step).abs())
            .fold(0.0, f64::max);
        out.push(Check::holds(
            format!("sequence.{name}_kind"),
            res.carrier.kind == kind,
        ));
        out.push(Check::within(
            format!("sequence.{name}_on_carrier"),
            on_carrier,
            1e-9,
        ));
        out.push(Check::within(
            format!("sequence.{name}_step_length"),
            spread,
            1e-9,
        ));
        out.push(Check::holds(
            format!("sequence.{name}_abscissas_increase"),
            res.abscissas.windows(2).all(|w| w[1] > w[0]),
        ));
    }
    out
}

fn metrics_suite() -> Vec<Check> {
    let mut h_err = 0.0f64;
    let mut e_err = 0.0f64;
    for spec in hyperbolic_grid(5..=12, 3..=8) {
        let c = oracle::construct(&spec);
        h_err = h_err
            .max((c.h() - metrics::h_pq(&spec)).abs())
            .max((c.h_from_bisectors() - metrics::h_pq(&spec)).abs());
        e_err = e_err.max((c.e() - metrics::e_pq(&spec)).abs());
    }
    let grid = hyperbolic_grid(5..=64, 3..=16);
    let product_form = grid
        .iter()
        .map(metrics::product_form_residual)
        .fold(0.0, f64::max);
    let identities = grid
        .iter()
        .map(|s| PolygonMetrics::compute(s).identity_residuals(s).max())
        .fold(0.0, f64::max);

    let mut rate = 0.0f64;
    let mut converging = true;
    for q in [3u64, 4, 5] {
        let qf = q as f64;
        let limit = ((PI / qf).tan() * PI).powi(2);
        let spec = PolygonSpec { p: 100_000, q };
        rate = rate.max((metrics::one_minus_s2(&spec) * 1e10 - limit).abs() / limit);
        let gap = |p: u64| {
            let s = PolygonSpec { p, q };
            metrics::delta_pq(&s) - 2.0 * (p as f64).ln()
        };
        let (d2, d3, d4) = (gap(100), gap(1000), gap(10_000));
        converging &= (d4 - d3).abs() < (d3 - d2).abs();
        converging &= (d4 - metrics::delta_log_constant(qf)).abs() < 1e-6;
    }
    vec![
        Check::within("metrics.construction_h", h_err, 1e-10),
        Check::within("metrics.construction_e", e_err, 1e-10),
        Check::within("metrics.product_form", product_form, 1e-13),
        Check::within("metrics.identity_residuals", identities, 1e-12),
        Check::within("metrics.one_minus_s2_rate", rate, 1e-3),
        Check::holds("metrics.delta_log_convergence", converging),
    ]
}

fn random_number(rng: &mut ChaCha8Rng) -> GrossNumber {
    let n = rng.gen_range(0..4);
    GrossNumber::from_terms(
        (0..n)
            .map(|_| {
                Term::new(
                    Coeff::ratio(rng.gen_range(-20..20), rng.gen_range(1..6)),
                    Rational64::new(rng.gen_range(-4..4), rng.gen_range(1..3)),
                    0,
                )
            })
            .collect(),
    )
}

/// Ring laws on `cases` seeded random triples of log-free rational numbers.
pub fn ring_law_failures(cases: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..cases {
        let (a, b, c) = (
            random_number(&mut rng),
            random_number(&mut rng),
            random_number(&mut rng),
        );
        let ok = (|| -> Result<bool, crate::grossnum::GrossError> {
            Ok(a.add(&b) == b.add(&a)
                && a.add(&b).add(&c) == a.add(&b.add(&c))
                && a.add(&a.neg()).is_zero()
                && a.mul(&b)? == b.mul(&a)?
                && a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?
                && a.mul(&b.add(&c))? == a.mul(&b)?.add(&a.mul(&c)?)
                && a.mul(&GrossNumber::one())? == a
                && a.to_string().parse::<GrossNumber>().ok().as_ref() == Some(&a))
        })()
        .unwrap_or(false);
        if !ok {
            failures += 1;
        }
    }
    failures
}

/// Leading ①⁻² coefficient of `1 − d²` extrapolated from finite `p`.
pub fn extrapolated_rate(q: u64) -> f64 {
    let f = |p: u64| metrics::one_minus_s2(&PolygonSpec { p, q }) * (p as f64).powi(2);
    (4.0 * f(2000) - f(1000)) / 3.0
}

fn gross_suite() -> Vec<Check> {
    let mut out = vec![Check::within(
        "gross.ring_laws",
        ring_law_failures(1000, 0x1f1) as f64,
        0.0,
    )];

    let go = GrossNumber::grossone();
    let square = go.sub(&GrossNumber::int(2)).pow(2);
    out.push(Check::holds(
        "gross.square_expansion",
        square.as_ref().map(|x| x.to_string()).as_deref() == Ok("go^2 - 4*go + 4"),
    ));
    let samples = [
        "go^2 - 4*go + 4",
        "3/7*go^-1*ln(go)",
        "go^(1/2) - 2",
        "2*ln(go) + 1.2345",
        "0",
    ];
    out.push(Check::holds(
        "gross.parse_print_round_trip",
        samples.iter().all(|s| {
            s.parse::<GrossNumber>()
                .map(|x| x.to_string() == *s)
                .unwrap_or(false)
        }),
    ));

    let mut lead = 0.0f64;
    for q in [3u64, 4, 5] {
        match eval_one_minus_d2(&GrossNumber::int(q as i64), &go, TruncationOrder::default()) {
            Ok(x) if x.leading_gexp() == Some(Rational64::from_integer(-2)) => {
                let c = x
                    .abs_leading_coeff()
                    .map(|c| c.to_f64())
                    .unwrap_or(f64::NAN);
                let want = extrapolated_rate(q);
                lead = lead.max((c - want).abs() / want);
            }
            Ok(x) => out.push(Check::failed(
                "gross.one_minus_d2_order",
                format!("leading term of {x}"),
            )),
            Err(e) => out.push(Check::failed("gross.one_minus_d2", e)),
        }
    }
    out.push(Check::within("gross.one_minus_d2_leading", lead, 1e-6));

    // δ at λ = μ = ①: +4 ln ① plus a constant, against δ(p, p) − 4 ln p.
    match eval_delta_asymptotic(&go, &go) {
        Ok(d) => {
            let log_coeff = d
                .terms()
                .iter()
                .find(|t| t.logpow == 1 && t.gexp == Rational64::from_integer(0));
            let constant = d.constant_term().to_f64();
            let p = 10_000u64;
            let numeric = metrics::delta_pq(&PolygonSpec { p, q: p }) - 4.0 * (p as f64).ln();
            out.push(Check::holds(
                "gross.delta_second_order_log",
                log_coeff.is_some_and(|t| (t.coeff.to_f64() - 4.0).abs() < 1e-12),
            ));
            out.push(Check::within(
                "gross.delta_second_order_constant",
                (constant - numeric).abs(),
                1e-6,
            ));
        }
        Err(e) => out.push(Check::failed("gross.delta_second_order", e)),
    }

    let count = tile_count(&go, &GrossNumber::int(5), &GrossNumber::int(2));
    out.push(Check::holds(
        "gross.tile_count_expansion",
        matches!(&count, Ok(TileCount::Expanded(x)) if x.to_string() == "go^2 - 4*go + 4"),
    ));
    out
}

/// Closed-form census `tile_count(p, q, k)` as an integer.
pub fn closed_form_census(p: u64, q: u64, k: usize) -> Option<u64> {
    match tile_count(
        &GrossNumber::int(p as i64),
        &GrossNumber::int(q as i64),
        &GrossNumber::int(k as i64),
    )
    .ok()?
    {
        TileCount::Expanded(x) => x.as_integer()?.try_into().ok(),
        TileCount::Power { .. } => None,
    }
}

fn tiler_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let grid = [
        (6, 4),
        (8, 4),
        (10, 4),
        (6, 6),
        (8, 6),
        (10, 6),
        (6, 5),
        (8, 5),
        (6, 7),
        (8, 7),
    ];
    let mut census_ok = true;
    for (p, q) in grid {
        match generate_sector_tree(PolygonSpec { p, q }, 3) {
            Ok(tree) => {
                let want: Vec<Option<u64>> = (0..=3).map(|k| closed_form_census(p, q, k)).collect();
                let got: Vec<Option<u64>> =
                    generation_counts(&tree).into_iter().map(Some).collect();
                census_ok &= got == want;
            }
            Err(e) => out.push(Check::failed(format!("tiler.sector {{{p},{q}}}"), e)),
        }
    }
    out.push(Check::holds("tiler.census_matches_closed_form", census_ok));

    let mut sound = true;
    for (p, q, gens) in [(6, 4, 3), (8, 6, 2), (6, 5, 3), (8, 5, 2), (6, 7, 2)] {
        match generate_sector_tree(PolygonSpec { p, q }, gens).and_then(|t| t.soundness(gens)) {
            Ok(s) => sound &= s.is_sound(),
            Err(e) => out.push(Check::failed(format!("tiler.soundness {{{p},{q}}}"), e)),
        }
    }
    out.push(Check::holds("tiler.sector_trees_sound", sound));

    match generate_bfs(PolygonSpec { p: 5, q: 4 }, 3) {
        Ok(t) => {
            let r = check_tiling(&t);
            let worst = r
                .root_vertices
                .iter()
                .map(|v| (v.angle_sum - 2.0 * PI).abs())
                .fold(0.0, f64::max);
            out.push(Check::within(
                "tiler.bfs_duplicates",
                r.duplicate_violations as f64,
                0.0,
            ));
            out.push(Check::holds(
                "tiler.bfs_incidences",
                r.incidence_violations.is_empty(),
            ));
            out.push(Check::holds(
                "tiler.root_vertices_saturated",
                r.root_saturated(4),
            ));
            out.push(Check::within("tiler.root_angle_sums", worst, 1e-8));
            out.push(Check::within(
                "tiler.interior_angles",
                r.max_interior_angle_residual,
                1e-8,
            ));
        }
        Err(e) => out.push(Check::failed("tiler.bfs", e)),
    }
    out
}
