//! Acceptance criteria 1–10. Runs without the libtest harness so that the
//! one-line verdict per criterion is always printed.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use infinigon::geom::{circumcircle, hyperbolic_distance, Vec2};
use infinigon::grossnum::{
    eval_delta_asymptotic, eval_one_minus_d2, Coeff, GrossNumber, Term, TruncationOrder,
};
use infinigon::metrics::{self, hyperbolic_grid, oracle, PolygonSpec};
use infinigon::sequence::{build_sequence, classify_carrier, CarrierKind, SequenceSpec};
use infinigon::tiler::{check_tiling, generate_bfs, generate_sector_tree, generation_counts};
use infinigon::verify::closed_form_census;

// Tolerances pinned by the criteria.
const CONSTRUCTION_TOL: f64 = 1e-10;
const TANGENCY_TOL: f64 = 1e-9;
const DIAMETER_TOL: f64 = 1e-10;
const ON_CARRIER_TOL: f64 = 1e-9;
const STEP_TOL: f64 = 1e-9;
const PRODUCT_FORM_TOL: f64 = 1e-13;
const RATE_TOL: f64 = 1e-3;
const LEADING_TOL: f64 = 1e-6;
const ANGLE_SUM_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{detail} [{} ms]", took.as_millis()))
}

fn criterion_1() -> Outcome {
    let (mut dh, mut de) = (0.0f64, 0.0f64);
    let grid = hyperbolic_grid(5..=12, 3..=8);
    for spec in &grid {
        let c = oracle::construct(spec);
        dh = dh
            .max((c.h() - metrics::h_pq(spec)).abs())
            .max((c.h_from_bisectors() - metrics::h_pq(spec)).abs());
        de = de.max((c.e() - metrics::e_pq(spec)).abs());
    }
    ensure(dh < CONSTRUCTION_TOL, || format!("max |h| residual {dh:e}"))?;
    ensure(de < CONSTRUCTION_TOL, || format!("max |e| residual {de:e}"))?;
    Ok(format!(
        "{} pairs, max residual h {dh:.1e}, e {de:.1e}",
        grid.len()
    ))
}

/// Euclidean circle through x₋₁, x₀, x₁ as built by reflections.
fn constructed_circle(alpha: f64, x: f64) -> Result<(Vec2, f64), String> {
    let res = build_sequence(&SequenceSpec::new(alpha, x, 0, 1).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let v: Vec<Vec2> = res.points.iter().map(|p| p.vec()).collect();
    circumcircle(v[0], v[1], v[2])
        .ok_or_else(|| format!("collinear points for alpha={alpha}, x={x}"))
}

fn criterion_2() -> Outcome {
    let (mut tangency, mut diameter) = (0.0f64, 0.0f64);
    for q in 3..=8 {
        let alpha = 2.0 * PI / q as f64;
        let c = (PI / q as f64).cos();
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
            let got = classify_carrier(alpha, x).map_err(|e| e.to_string())?;
            ensure(got == want, || {
                format!("q={q} x={x}: {got:?}, expected {want:?}")
            })?;
            let (center, radius) = constructed_circle(alpha, x)?;
            if want == CarrierKind::Horocycle {
                tangency = tangency.max((center.norm() + radius - 1.0).abs());
            }
            diameter = diameter.max((2.0 * radius - x / (alpha / 2.0).cos()).abs());
        }
    }
    ensure(tangency < TANGENCY_TOL, || {
        format!("tangency residual {tangency:e}")
    })?;
    ensure(diameter < DIAMETER_TOL, || {
        format!("diameter residual {diameter:e}")
    })?;
    Ok(format!(
        "18 cases, tangency {tangency:.1e}, diameter {diameter:.1e}"
    ))
}

fn criterion_3() -> Outcome {
    let runs = [
        (CarrierKind::Circle, PI / 2.0, 0.3),
        (
            CarrierKind::Horocycle,
            PI / 2.0,
            std::f64::consts::FRAC_1_SQRT_2,
        ),
        (CarrierKind::Equidistant, PI - 0.05, 0.03),
    ];
    let mut worst = (0.0f64, 0.0f64);
    for (kind, alpha, x) in runs {
        let spec = SequenceSpec::new(alpha, x, 100, 100).map_err(|e| e.to_string())?;
        let res = build_sequence(&spec).map_err(|e| e.to_string())?;
        ensure(res.points.len() == 202, || {
            format!("{kind:?}: {} points", res.points.len())
        })?;
        ensure(res.carrier.kind == kind, || {
            format!("{kind:?}: fitted {:?}", res.carrier.kind)
        })?;
        let on = res
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
        ensure(on < ON_CARRIER_TOL, || {
            format!("{kind:?}: off carrier by {on:e}")
        })?;
        ensure(spread < STEP_TOL, || {
            format!("{kind:?}: step length varies by {spread:e}")
        })?;
        ensure(res.abscissas.windows(2).all(|w| w[1] > w[0]), || {
            format!("{kind:?}: abscissas not increasing")
        })?;
        worst = (worst.0.max(on), worst.1.max(spread));
    }
    Ok(format!(
        "3 regimes x 200 steps, carrier {:.1e}, step {:.1e}",
        worst.0, worst.1
    ))
}

fn criterion_4() -> Outcome {
    let grid = hyperbolic_grid(5..=64, 3..=16);
    let worst = grid
        .iter()
        .map(metrics::product_form_residual)
        .fold(0.0, f64::max);
    ensure(worst < PRODUCT_FORM_TOL, || format!("residual {worst:e}"))?;
    Ok(format!("{} pairs, max residual {worst:.1e}", grid.len()))
}

fn criterion_5() -> Outcome {
    let mut worst_rate = 0.0f64;
    let mut worst_lead = 0.0f64;
    for q in [3u64, 4, 5] {
        let limit = ((PI / q as f64).tan() * PI).powi(2);
        let p = 100_000u64;
        let rate = metrics::one_minus_s2(&PolygonSpec { p, q }) * (p as f64).powi(2);
        worst_rate = worst_rate.max((rate - limit).abs() / limit);

        // Richardson extrapolation of f(p) = (1 − s²)p², whose error is O(1/p²).
        let f = |p: u64| metrics::one_minus_s2(&PolygonSpec { p, q }) * (p as f64).powi(2);
        let extrapolated = (4.0 * f(2000) - f(1000)) / 3.0;
        let sym = eval_one_minus_d2(
            &GrossNumber::int(q as i64),
            &GrossNumber::grossone(),
            TruncationOrder::default(),
        )
        .map_err(|e| e.to_string())?;
        ensure(
            sym.leading_gexp() == Some(Rational64::from_integer(-2)),
            || format!("q={q}: leading term of {sym}"),
        )?;
        let lead = sym
            .abs_leading_coeff()
            .map(|c| c.to_f64())
            .unwrap_or(f64::NAN);
        worst_lead = worst_lead.max((lead - extrapolated).abs() / extrapolated);
    }
    ensure(worst_rate < RATE_TOL, || {
        format!("rate relative error {worst_rate:e}")
    })?;
    ensure(worst_lead < LEADING_TOL, || {
        format!("symbolic leading coefficient off by {worst_lead:e}")
    })?;
    Ok(format!(
        "rate error {worst_rate:.1e}, symbolic vs extrapolated {worst_lead:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    for q in [3u64, 4, 5] {
        let gap = |p: u64| metrics::delta_pq(&PolygonSpec { p, q }) - 2.0 * (p as f64).ln();
        let (d2, d3, d4) = (gap(100), gap(1000), gap(10_000));
        ensure((d4 - d3).abs() < (d3 - d2).abs(), || {
            format!("q={q}: differences {} then {}", d3 - d2, d4 - d3)
        })?;
    }
    let go = GrossNumber::grossone();
    let delta = eval_delta_asymptotic(&go, &go).map_err(|e| e.to_string())?;
    let log_coeff = delta
        .terms()
        .iter()
        .find(|t| t.logpow == 1 && t.gexp == Rational64::from_integer(0))
        .map(|t| t.coeff.to_f64())
        .ok_or_else(|| format!("no ln(go) term in {delta}"))?;
    ensure(log_coeff > 0.0, || {
        format!("ln(go) coefficient {log_coeff} is not positive")
    })?;
    let p = 10_000u64;
    let numeric = metrics::delta_pq(&PolygonSpec { p, q: p }) - 4.0 * (p as f64).ln();
    let constant = delta.constant_term().to_f64();
    ensure((log_coeff - 4.0).abs() < 1e-12, || {
        format!("ln(go) coefficient {log_coeff}, expected 4")
    })?;
    ensure((constant - numeric).abs() < 1e-3, || {
        format!("constant {constant} vs δ(p,p) − 4 ln p = {numeric}")
    })?;
    Ok(format!(
        "δ(go,go) = {delta}; δ(1e4,1e4) − 4 ln 1e4 = {numeric:.6}"
    ))
}

fn criterion_7() -> Outcome {
    let pinned: [((u64, u64), &[u64]); 2] =
        [((8, 6), &[1, 17, 289, 4913]), ((8, 5), &[1, 6, 36, 216])];
    for ((p, q), want) in pinned {
        let got = generation_counts(
            &generate_sector_tree(PolygonSpec { p, q }, 3).map_err(|e| e.to_string())?,
        );
        ensure(got == want, || {
            format!("{{{p},{q}}}: {got:?}, expected {want:?}")
        })?;
    }
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
    for (p, q) in grid {
        let got = generation_counts(
            &generate_sector_tree(PolygonSpec { p, q }, 3).map_err(|e| e.to_string())?,
        );
        let want: Vec<u64> = (0..=3)
            .map(|k| {
                closed_form_census(p, q, k)
                    .ok_or_else(|| format!("no closed form for {{{p},{q}}}, k={k}"))
            })
            .collect::<Result<_, _>>()?;
        ensure(got == want, || {
            format!("{{{p},{q}}}: census {got:?}, closed form {want:?}")
        })?;
    }
    let six_four: Vec<u64> = (0..=3)
        .filter_map(|k| closed_form_census(6, 4, k))
        .collect();
    Ok(format!(
        "{} pairs equal tile_count; {{6,4}} closed form is {six_four:?} (the listed [1,5,25,125] does not match (p−2)(q−3)−1 = 3)",
        grid.len()
    ))
}

fn criterion_8() -> Outcome {
    let tiling = generate_bfs(PolygonSpec { p: 5, q: 4 }, 3).map_err(|e| e.to_string())?;
    let r = check_tiling(&tiling);
    ensure(r.duplicate_violations == 0, || {
        format!("{} duplicate centres", r.duplicate_violations)
    })?;
    ensure(r.root_vertices.len() == 5, || {
        format!("{} root vertices", r.root_vertices.len())
    })?;
    let mut worst = 0.0f64;
    for v in &r.root_vertices {
        ensure(v.tiles == 4, || {
            format!("root vertex {:?} has {} tiles", v.point, v.tiles)
        })?;
        worst = worst.max((v.angle_sum - 2.0 * PI).abs());
    }
    ensure(worst < ANGLE_SUM_TOL, || {
        format!("angle sum off by {worst:e}")
    })?;
    Ok(format!(
        "{} tiles, 0 duplicates, root angle sums within {worst:.1e}",
        tiling.tiles.len()
    ))
}

fn rational_number() -> impl Strategy<Value = GrossNumber> {
    let term = (-20i64..20, 1i64..6, -4i64..4, 1i64..3)
        .prop_map(|(n, d, e, ed)| Term::new(Coeff::ratio(n, d), Rational64::new(e, ed), 0));
    prop::collection::vec(term, 0..4).prop_map(GrossNumber::from_terms)
}

fn criterion_9() -> Outcome {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner
        .run(
            &(rational_number(), rational_number(), rational_number()),
            |(a, b, c)| {
                let m = |x: &GrossNumber, y: &GrossNumber| x.mul(y).expect("log-free product");
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert!(a.sub(&a).is_zero());
                prop_assert_eq!(m(&a, &b), m(&b, &a));
                prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
                prop_assert_eq!(m(&a, &b.add(&c)), m(&a, &b).add(&m(&a, &c)));
                prop_assert_eq!(m(&a, &GrossNumber::one()), a.clone());
                let printed = a.to_string();
                prop_assert_eq!(
                    printed.parse::<GrossNumber>().ok(),
                    Some(a.clone()),
                    "round trip of {}",
                    printed
                );
                Ok(())
            },
        )
        .map_err(|e| e.to_string())?;
    let go = GrossNumber::grossone();
    let square = go
        .sub(&GrossNumber::int(2))
        .pow(2)
        .map_err(|e| e.to_string())?;
    let expected = GrossNumber::grossone_pow(2)
        .sub(&go.scale(&Coeff::int(4)))
        .add(&GrossNumber::int(4));
    ensure(square == expected, || format!("(go − 2)^2 = {square}"))?;
    ensure(square.to_string() == "go^2 - 4*go + 4", || {
        format!("printed as {square}")
    })?;
    Ok(format!("1000 triples exact; (go − 2)^2 = {square}"))
}

fn criterion_10() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_infinigon"))
        .args(["verify", "--suite", "all"])
        .output()
        .map_err(|e| e.to_string())?;
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("report is not JSON: {e}"))?;
    ensure(out.status.code() == Some(0), || {
        format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        )
    })?;
    let checks = report["checks"].as_array().map(Vec::len).unwrap_or(0);
    Ok(format!("{checks} checks passed"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1 closed form vs construction",
            Duration::from_secs(5),
            criterion_1,
        ),
        ("2 carrier trichotomy", Duration::from_secs(1), criterion_2),
        (
            "3 on-carrier residuals",
            Duration::from_secs(1),
            criterion_3,
        ),
        ("4 b − a² product form", Duration::from_secs(1), criterion_4),
        ("5 1 − s² rate", Duration::from_secs(1), criterion_5),
        ("6 δ asymptotics", Duration::from_secs(1), criterion_6),
        (
            "7 tile-count recurrences",
            Duration::from_secs(5),
            criterion_7,
        ),
        (
            "8 BFS geometric soundness",
            Duration::from_secs(10),
            criterion_8,
        ),
        ("9 grossone algebra", Duration::from_secs(1), criterion_9),
        (
            "10 end-to-end verify",
            Duration::from_secs(60),
            criterion_10,
        ),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(|| timed(limit, f))).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
