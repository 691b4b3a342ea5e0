use std::collections::HashMap;

use crate::geom::{hyperbolic_distance, DiscPoint};
use crate::metrics::PolygonSpec;

use super::{Anchor, Isometry, Prototype, Role, Tile, TilerError, DEDUPE_DIST};

/// Deepest reflection-word length generated breadth-first.
pub const MAX_BFS_DEPTH: usize = 6;

const CELL: f64 = 1e-5;

/// A finite patch of a `{p,q}` tiling.
#[derive(Debug, Clone)]
pub struct Tiling {
    pub spec: PolygonSpec,
    pub depth: usize,
    pub tiles: Vec<Tile>,
    /// Candidates rejected as duplicates of an existing tile.
    pub dedupe_log: usize,
}

/// Spatial hash over tile centres.
#[derive(Default)]
pub(crate) struct CenterIndex {
    cells: HashMap<(i64, i64), Vec<DiscPoint>>,
}

impl CenterIndex {
    fn cell(p: DiscPoint) -> (i64, i64) {
        ((p.x / CELL).floor() as i64, (p.y / CELL).floor() as i64)
    }

    pub(crate) fn contains(&self, p: DiscPoint) -> bool {
        let (cx, cy) = Self::cell(p);
        (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                self.cells
                    .get(&(cx + dx, cy + dy))
                    .is_some_and(|v| v.iter().any(|&q| hyperbolic_distance(p, q) < DEDUPE_DIST))
            })
        })
    }

    pub(crate) fn insert(&mut self, p: DiscPoint) {
        self.cells.entry(Self::cell(p)).or_default().push(p);
    }
}

/// Breadth-first closure of side reflections up to word length `depth`.
///
/// Each generation's candidates are sorted by centre before ids are
/// assigned, so the output does not depend on expansion order.
pub fn generate_bfs(spec: PolygonSpec, depth: usize) -> Result<Tiling, TilerError> {
    generate_bfs_anchored(spec, depth, Anchor::CenterAtO)
}

pub fn generate_bfs_anchored(
    spec: PolygonSpec,
    depth: usize,
    anchor: Anchor,
) -> Result<Tiling, TilerError> {
    if depth > MAX_BFS_DEPTH {
        return Err(TilerError::DepthTooLarge {
            depth,
            cap: MAX_BFS_DEPTH,
        });
    }
    let spec = PolygonSpec::new(spec.p, spec.q)?;
    let proto = Prototype::new(spec)?;
    let root_iso = match anchor {
        Anchor::CenterAtO => Isometry::IDENTITY,
        Anchor::VertexAtO => proto.vertex_anchor()?,
    };
    let root = Tile::from_iso(&proto, root_iso, 0, 0, None, Role::Root);
    let mut index = CenterIndex::default();
    index.insert(root.center);
    let mut tiles = vec![root];
    let mut frontier = 0..1;
    let mut dedupe_log = 0;

    for generation in 1..=depth {
        let mut candidates: Vec<(DiscPoint, Isometry, usize)> = Vec::new();
        for parent in frontier.clone() {
            let g = tiles[parent].iso;
            for r in &proto.side_reflections {
                let iso = g.compose(r);
                candidates.push((iso.origin_image(), iso, parent));
            }
        }
        candidates.sort_by(|a, b| {
            a.0.x
                .total_cmp(&b.0.x)
                .then(a.0.y.total_cmp(&b.0.y))
                .then(a.2.cmp(&b.2))
        });
        let start = tiles.len();
        for (center, iso, parent) in candidates {
            if index.contains(center) {
                dedupe_log += 1;
                continue;
            }
            index.insert(center);
            let id = tiles.len();
            tiles.push(Tile::from_iso(
                &proto,
                iso,
                id,
                generation,
                Some(parent),
                Role::BfsChild,
            ));
        }
        frontier = start..tiles.len();
    }
    Ok(Tiling {
        spec,
        depth,
        tiles,
        dedupe_log,
    })
}
