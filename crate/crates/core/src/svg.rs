//! SVG figures of disc constructions. Disc coordinates are drawn as-is
//! (y flipped) inside the view box `[-1.05, -1.05, 2.1, 2.1]`.

use std::fmt::Write;

use crate::geom::{geodesic_through, DiscPoint, Geodesic};
use crate::sequence::SequenceResult;
use crate::tiler::Tile;

pub const MIN_CANVAS: u32 = 256;

const VIEW: f64 = 2.1;

/// Sides shorter than this on screen are drawn as straight segments.
const TINY_ARC_PX: f64 = 0.5;

const PALETTE: [&str; 7] = [
    "#f4d35e", "#9ad1d4", "#ee964b", "#80ced7", "#c8b8db", "#a1c181", "#f95738",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    Construction,
    InfinigonApproximation,
    Tiling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureSpec {
    pub kind: FigureKind,
    /// Width and height in pixels; raised to [`MIN_CANVAS`] if smaller.
    pub canvas: u32,
}

impl FigureSpec {
    pub fn new(kind: FigureKind, canvas: u32) -> Self {
        FigureSpec {
            kind,
            canvas: canvas.max(MIN_CANVAS),
        }
    }

    fn px_per_unit(&self) -> f64 {
        self.canvas as f64 / VIEW
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    // Avoid "-0.000000".
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0".into()
    } else {
        s
    }
}

fn xy(p: DiscPoint) -> (f64, f64) {
    (p.x, -p.y)
}

/// Path command drawing the geodesic segment from `a` to `b` (the pen is
/// already at `a`).
fn segment(a: DiscPoint, b: DiscPoint, spec: &FigureSpec) -> String {
    let (ax, ay) = xy(a);
    let (bx, by) = xy(b);
    let chord_px = a.euclid_dist(b) * spec.px_per_unit();
    match geodesic_through(a, b) {
        Ok(Geodesic::Arc { cx, cy, radius }) if chord_px >= TINY_ARC_PX => {
            let (cx, cy) = (cx, -cy);
            // Short arc; sweep follows the turn from a to b seen from the centre.
            let cross = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
            let sweep = u8::from(cross > 0.0);
            format!(
                "A {r} {r} 0 0 {sweep} {} {}",
                fmt(bx),
                fmt(by),
                r = fmt(radius)
            )
        }
        _ => format!("L {} {}", fmt(bx), fmt(by)),
    }
}

fn polygon_path(vertices: &[DiscPoint], spec: &FigureSpec) -> String {
    let (x0, y0) = xy(vertices[0]);
    let mut d = format!("M {} {}", fmt(x0), fmt(y0));
    for k in 0..vertices.len() {
        let next = vertices[(k + 1) % vertices.len()];
        d.push(' ');
        d.push_str(&segment(vertices[k], next, spec));
    }
    d.push_str(" Z");
    d
}

fn open_path(points: &[DiscPoint], spec: &FigureSpec) -> String {
    let (x0, y0) = xy(points[0]);
    let mut d = format!("M {} {}", fmt(x0), fmt(y0));
    for w in points.windows(2) {
        d.push(' ');
        d.push_str(&segment(w[0], w[1], spec));
    }
    d
}

fn header(spec: &FigureSpec, title: &str) -> String {
    let stroke = fmt(1.0 / spec.px_per_unit());
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n",
            "<title>{t}</title>\n",
            "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"white\" stroke=\"black\" stroke-width=\"{s}\"/>\n"
        ),
        c = spec.canvas,
        t = title,
        s = stroke
    )
}

/// Tiles filled by generation, sides drawn as geodesic arcs.
pub fn tiling_svg(tiles: &[Tile], spec: &FigureSpec, title: &str) -> String {
    let mut out = header(spec, title);
    let stroke = fmt(0.6 / spec.px_per_unit());
    for t in tiles {
        let fill = PALETTE[t.generation % PALETTE.len()];
        writeln!(
            out,
            "<path d=\"{}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"{stroke}\" data-id=\"{}\" data-generation=\"{}\"/>",
            polygon_path(&t.vertices, spec),
            t.id,
            t.generation
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// The points `x_n`, the geodesic segments joining them and their carrier.
pub fn sequence_svg(res: &SequenceResult, spec: &FigureSpec, title: &str) -> String {
    let mut out = header(spec, title);
    let px = 1.0 / spec.px_per_unit();
    let c = &res.carrier;
    writeln!(
        out,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
        fmt(c.euclid_center[0]),
        fmt(-c.euclid_center[1]),
        fmt(c.euclid_radius),
        fmt(px),
        fmt(4.0 * px),
        fmt(3.0 * px)
    )
    .unwrap();
    if res.points.len() > 1 {
        writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"{}\"/>",
            open_path(&res.points, spec),
            fmt(1.2 * px)
        )
        .unwrap();
    }
    for p in &res.points {
        let (x, y) = xy(*p);
        writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
            fmt(x),
            fmt(y),
            fmt(2.0 * px)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::PolygonSpec;
    use crate::sequence::{build_sequence, SequenceSpec};
    use crate::tiler::generate_bfs;

    #[test]
    fn canvas_floor() {
        assert_eq!(FigureSpec::new(FigureKind::Tiling, 10).canvas, MIN_CANVAS);
        assert_eq!(FigureSpec::new(FigureKind::Tiling, 800).canvas, 800);
    }

    #[test]
    fn tiling_figure() {
        let t = generate_bfs(PolygonSpec { p: 5, q: 4 }, 2).unwrap();
        let svg = tiling_svg(&t.tiles, &FigureSpec::new(FigureKind::Tiling, 512), "{5,4}");
        assert!(svg.starts_with("<svg "));
        assert!(svg.contains("viewBox=\"-1.05 -1.05 2.1 2.1\""));
        assert!(svg.contains("r=\"1\""));
        assert_eq!(svg.matches("<path ").count(), 21);
        assert!(svg.contains(" A "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<svg").count(), 1);
    }

    #[test]
    fn arc_sweep_follows_the_short_way() {
        // Side of the centred pentagon: the arc bulges toward O.
        let t = generate_bfs(PolygonSpec { p: 5, q: 4 }, 0).unwrap();
        let spec = FigureSpec::new(FigureKind::Tiling, 512);
        let (a, b) = (t.tiles[0].vertices[0], t.tiles[0].vertices[1]);
        let cmd = segment(a, b, &spec);
        let parts: Vec<&str> = cmd.split(' ').collect();
        assert_eq!(parts[0], "A");
        assert_eq!(parts[4], "0");
        // Vertex 0 at −36°, vertex 1 at +36°, supporting circle centred
        // beyond them on the x-axis: seen from that centre the pen moves
        // from screen-down to screen-up, a positive (clockwise) SVG angle.
        assert_eq!(parts[5], "1");
    }

    #[test]
    fn tiny_arcs_are_lines() {
        let a = DiscPoint { x: 0.5, y: 0.1 };
        let b = DiscPoint {
            x: 0.5 + 1e-5,
            y: 0.1,
        };
        assert!(segment(a, b, &FigureSpec::new(FigureKind::Tiling, 256)).starts_with("L "));
    }

    #[test]
    fn construction_figure() {
        let res =
            build_sequence(&SequenceSpec::new(std::f64::consts::FRAC_PI_2, 0.5, 6, 0).unwrap())
                .unwrap();
        let svg = sequence_svg(&res, &FigureSpec::new(FigureKind::Construction, 300), "x_n");
        assert_eq!(svg.matches("fill=\"black\"").count(), res.points.len());
        assert!(svg.contains("stroke-dasharray"));
    }
}
