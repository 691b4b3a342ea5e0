//! Sector tree: a copy of the tile angle at a vertex of the root tile,
//! split into main sons (the tiles across the root's far sides) and
//! brother sub-sectors found by turning around the root's vertices.

use serde::Serialize;

use crate::geom::{midpoint, DiscPoint, Geodesic, GeodesicRay};
use crate::metrics::PolygonSpec;

use super::bfs::CenterIndex;
use super::{Isometry, Prototype, Role, Tile, TilerError};

/// Deepest census generation built.
pub const MAX_SECTOR_GENERATIONS: usize = 6;

/// Upper bound on stored sector nodes.
const MAX_NODES: u64 = 1 << 22;

/// Tolerance of the sector-membership test, in Euclidean distance.
const SECTOR_TOL: f64 = 1e-9;

/// Interior-angle tolerance; tiles a few generations out sit within 1e−3
/// of the boundary, where angles lose several digits.
const ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityMode {
    EvenQ,
    OddQ,
}

/// Root of a sub-sector: the tile `iso(P₀)` and the prototype index of
/// the vertex at the sector's apex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorNode {
    pub iso: Isometry,
    pub apex: usize,
    pub generation: usize,
    /// Index of the parent node in the previous generation.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SectorTree {
    pub spec: PolygonSpec,
    pub parity_mode: ParityMode,
    /// `nodes[k]` holds the sector roots of generation `k`.
    pub nodes: Vec<Vec<SectorNode>>,
    proto: Prototype,
}

/// Where a chain tile hangs in the tree.
#[derive(Debug, Clone, Copy)]
enum Link {
    MainSon(usize),
    Brother(usize),
}

struct Expansion {
    main_sons: Vec<Isometry>,
    /// (tile, apex, tile it was reflected from)
    brothers: Vec<(Isometry, usize, Link)>,
}

fn half(q: usize) -> usize {
    q / 2
}

/// Main sons and brother roots of the sector `(g, a)`.
///
/// Main son `k` (k = 1..p−2) is the reflection in side `a + k`. Its
/// brothers are found by turning around the two ends of that side: `h − 1`
/// tiles past it at the near end and `h − 2` at the far end, with `q = 2h`
/// or `2h + 1`. The first main son's near end lies on the sector edge and
/// gets `h − 2`; for odd `q` it makes up for it with `h − 1` at the far end,
/// since the mid-point boundary leaves no room for that tile at the near end.
fn expand(proto: &Prototype, g: Isometry, a: usize) -> Expansion {
    let p = proto.p();
    let q = proto.spec.q as usize;
    let h = half(q);
    let even = q.is_multiple_of(2);
    let r = |s: usize| &proto.side_reflections[s % p];
    let mut main_sons = Vec::with_capacity(p - 2);
    let mut brothers = Vec::new();
    for k in 1..=p - 2 {
        let son = g.compose(r(a + k));
        main_sons.push(son);

        // Near end: vertex a + k, alternating sides a + k − 1 and a + k.
        let i = a + k;
        let (near, far) = match (k, even) {
            (1, true) => (h - 2, h - 2),
            (1, false) => (h - 2, h - 1),
            _ => (h - 1, h - 2),
        };
        let mut tile = son;
        let mut link = Link::MainSon(k - 1);
        for j in 1..=near {
            let side = if j % 2 == 1 { i + p - 1 } else { i };
            tile = tile.compose(r(side));
            brothers.push((tile, i % p, link));
            link = Link::Brother(brothers.len() - 1);
        }

        // Far end: vertex a + k + 1, alternating sides a + k + 1 and a + k.
        let i = a + k + 1;
        let mut tile = son;
        let mut link = Link::MainSon(k - 1);
        for j in 1..=far {
            let side = if j % 2 == 1 { i } else { i + p - 1 };
            tile = tile.compose(r(side));
            brothers.push((tile, i % p, link));
            link = Link::Brother(brothers.len() - 1);
        }
    }
    Expansion {
        main_sons,
        brothers,
    }
}

/// Builds `generations` census layers of the sector tree rooted at the
/// centred tile, with the sector apex at its vertex 0.
pub fn generate_sector_tree(
    spec: PolygonSpec,
    generations: usize,
) -> Result<SectorTree, TilerError> {
    let spec = PolygonSpec::new(spec.p, spec.q)?;
    if spec.q < 4 {
        return Err(TilerError::UnsupportedValence(spec.q));
    }
    if generations > MAX_SECTOR_GENERATIONS {
        return Err(TilerError::DepthTooLarge {
            depth: generations,
            cap: MAX_SECTOR_GENERATIONS,
        });
    }
    let proto = Prototype::new(spec)?;
    let per_node = expand(&proto, Isometry::IDENTITY, 0).brothers.len() as u64;
    let total = per_node.checked_pow(generations as u32).unwrap_or(u64::MAX);
    if total > MAX_NODES {
        return Err(TilerError::DepthTooLarge {
            depth: generations,
            cap: (0..=generations)
                .take_while(|&g| per_node.saturating_pow(g as u32) <= MAX_NODES)
                .last()
                .unwrap_or(0),
        });
    }
    let parity_mode = if spec.q.is_multiple_of(2) {
        ParityMode::EvenQ
    } else {
        ParityMode::OddQ
    };
    let mut nodes = vec![vec![SectorNode {
        iso: Isometry::IDENTITY,
        apex: 0,
        generation: 0,
        parent: None,
    }]];
    for generation in 1..=generations {
        let next: Vec<SectorNode> = nodes[generation - 1]
            .iter()
            .enumerate()
            .flat_map(|(idx, n)| {
                expand(&proto, n.iso, n.apex)
                    .brothers
                    .into_iter()
                    .map(move |(iso, apex, _)| SectorNode {
                        iso,
                        apex,
                        generation,
                        parent: Some(idx),
                    })
            })
            .collect();
        nodes.push(next);
    }
    Ok(SectorTree {
        spec,
        parity_mode,
        nodes,
        proto,
    })
}

/// Number of sector roots in each generation.
pub fn generation_counts(tree: &SectorTree) -> Vec<u64> {
    tree.nodes.iter().map(|g| g.len() as u64).collect()
}

/// Findings of the geometric checks on a sector tree.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SectorSoundness {
    pub generations: usize,
    pub tiles: usize,
    pub duplicate_violations: usize,
    pub outside_sector: usize,
    pub max_interior_angle_residual: f64,
    pub min_boundary_gap: f64,
}

impl SectorSoundness {
    pub fn is_sound(&self) -> bool {
        self.duplicate_violations == 0
            && self.outside_sector == 0
            && self.max_interior_angle_residual < ANGLE_TOL
    }
}

impl SectorTree {
    pub fn generations(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn root(&self) -> Tile {
        Tile::from_iso(&self.proto, Isometry::IDENTITY, 0, 0, None, Role::Root)
    }

    /// The two rays bounding the root sector: the lines of the two sides at
    /// the apex for even `q`; for odd `q` the h-mid-point rays issued from
    /// the mid-points of those sides.
    pub fn sector(&self) -> Result<(GeodesicRay, GeodesicRay), TilerError> {
        let v = &self.proto.vertices;
        let p = v.len();
        match self.parity_mode {
            ParityMode::EvenQ => Ok((
                GeodesicRay::through(v[0], v[1])?,
                GeodesicRay::through(v[0], v[p - 1])?,
            )),
            ParityMode::OddQ => {
                let (m0, n0) = self.mid_point_line(1, true);
                let (m1, n1) = self.mid_point_line(p - 1, false);
                Ok((GeodesicRay::through(m0, n0)?, GeodesicRay::through(m1, n1)?))
            }
        }
    }

    /// For the root's side from the apex to vertex `i`: its mid-point and
    /// the mid-point of the side at vertex `i` making the angle `h·2π/q`
    /// with it outside the root.
    fn mid_point_line(&self, i: usize, forward: bool) -> (DiscPoint, DiscPoint) {
        let p = self.proto.p();
        let h = half(self.spec.q as usize);
        let v = &self.proto.vertices;
        let r = |s: usize| self.proto.side_reflections[s % p];
        // Turn through the root's interior side first; the side reached
        // after h + 1 steps of 2π/q lies h steps away on the outside.
        let (near, far) = if forward {
            (i + p - 1, i)
        } else {
            (i, i + p - 1)
        };
        let mut tile = Isometry::IDENTITY;
        for j in 0..h {
            tile = tile.compose(&r(if j.is_multiple_of(2) { far } else { near }));
        }
        let shared = if h.is_multiple_of(2) { far } else { near };
        let a = tile.apply(v[shared % p]);
        let b = tile.apply(v[(shared + 1) % p]);
        let side_mid = midpoint(v[0], v[i]);
        (side_mid, midpoint(a, b))
    }

    /// Materializes every tile (roots, main sons, brothers) up to
    /// `max_generation`; brothers keep the chain tile they were reflected
    /// from as parent.
    pub fn tiles(&self, max_generation: usize) -> Vec<Tile> {
        let max_generation = max_generation.min(self.generations());
        let mut tiles = vec![self.root()];
        // Tile id of every node of the current generation.
        let mut node_tiles = vec![0usize];
        for generation in 0..max_generation {
            let mut next_tiles = Vec::new();
            for (node, &tile_id) in self.nodes[generation].iter().zip(&node_tiles) {
                let exp = expand(&self.proto, node.iso, node.apex);
                let son_base = tiles.len();
                for iso in &exp.main_sons {
                    let id = tiles.len();
                    tiles.push(Tile::from_iso(
                        &self.proto,
                        *iso,
                        id,
                        generation + 1,
                        Some(tile_id),
                        Role::MainSon,
                    ));
                }
                let brother_base = tiles.len();
                for (iso, _, link) in &exp.brothers {
                    let parent = match *link {
                        Link::MainSon(k) => son_base + k,
                        Link::Brother(b) => brother_base + b,
                    };
                    let id = tiles.len();
                    tiles.push(Tile::from_iso(
                        &self.proto,
                        *iso,
                        id,
                        generation + 1,
                        Some(parent),
                        Role::Brother,
                    ));
                    next_tiles.push(id);
                }
            }
            node_tiles = next_tiles;
        }
        tiles
    }

    /// Whether every test point of `tile` lies in the root sector (on
    /// the bounding lines allowed): vertices for even `q`, side
    /// mid-points for odd `q`.
    fn inside(&self, bounds: &[(Geodesic, f64); 2], tile: &Tile) -> bool {
        let n = tile.vertices.len();
        let points: Vec<DiscPoint> = match self.parity_mode {
            ParityMode::EvenQ => tile.vertices.clone(),
            ParityMode::OddQ => (0..n)
                .map(|k| midpoint(tile.vertices[k], tile.vertices[(k + 1) % n]))
                .collect(),
        };
        points.iter().all(|&x| {
            bounds
                .iter()
                .all(|(g, s)| signed_distance(g, x) * s >= -SECTOR_TOL)
        })
    }

    /// Distinctness, containment and regularity of the tiles up to
    /// `max_generation`.
    pub fn soundness(&self, max_generation: usize) -> Result<SectorSoundness, TilerError> {
        let tiles = self.tiles(max_generation);
        let (u, v) = self.sector()?;
        let bounds =
            [u.carrier, v.carrier].map(|g| (g, signed_distance(&g, DiscPoint::ORIGIN).signum()));
        let target = 2.0 * std::f64::consts::PI / self.spec.q as f64;
        let mut index = CenterIndex::default();
        let mut report = SectorSoundness {
            generations: max_generation.min(self.generations()),
            tiles: tiles.len(),
            duplicate_violations: 0,
            outside_sector: 0,
            max_interior_angle_residual: 0.0,
            min_boundary_gap: f64::INFINITY,
        };
        for t in &tiles {
            if index.contains(t.center) {
                report.duplicate_violations += 1;
            } else {
                index.insert(t.center);
            }
            if !self.inside(&bounds, t) {
                report.outside_sector += 1;
            }
            for a in t.interior_angles() {
                report.max_interior_angle_residual =
                    report.max_interior_angle_residual.max((a - target).abs());
            }
            report.min_boundary_gap = report.min_boundary_gap.min(1.0 - t.center.norm());
        }
        Ok(report)
    }
}

fn signed_distance(g: &Geodesic, x: DiscPoint) -> f64 {
    match *g {
        Geodesic::Diameter { .. } => g.side(x),
        Geodesic::Arc { cx, cy, radius } => ((x.x - cx).hypot(x.y - cy)) - radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grossnum::{tile_count, GrossNumber, TileCount};

    fn spec(p: u64, q: u64) -> PolygonSpec {
        PolygonSpec { p, q }
    }

    fn closed_form(p: u64, q: u64, k: usize) -> u64 {
        let t = tile_count(
            &GrossNumber::int(p as i64),
            &GrossNumber::int(q as i64),
            &GrossNumber::int(k as i64),
        )
        .unwrap();
        match t {
            TileCount::Expanded(x) => x.as_integer().unwrap().try_into().unwrap(),
            TileCount::Power { .. } => unreachable!(),
        }
    }

    #[test]
    fn census_examples() {
        assert_eq!(
            generation_counts(&generate_sector_tree(spec(8, 6), 3).unwrap()),
            vec![1, 17, 289, 4913]
        );
        assert_eq!(
            generation_counts(&generate_sector_tree(spec(8, 5), 2).unwrap()),
            vec![1, 6, 36]
        );
        assert_eq!(
            generation_counts(&generate_sector_tree(spec(8, 6), 0).unwrap()),
            vec![1]
        );
    }

    #[test]
    fn census_matches_closed_form() {
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
            let gens = if p * q >= 60 { 3 } else { 4 };
            let tree = generate_sector_tree(spec(p, q), gens).unwrap();
            let want: Vec<u64> = (0..=gens).map(|k| closed_form(p, q, k)).collect();
            assert_eq!(generation_counts(&tree), want, "{{{p},{q}}}");
        }
    }

    #[test]
    fn valence_three_is_unsupported() {
        assert_eq!(
            generate_sector_tree(spec(7, 3), 1).unwrap_err(),
            TilerError::UnsupportedValence(3)
        );
    }

    #[test]
    fn trees_are_geometrically_sound() {
        for (p, q, gens) in [
            (8, 6, 2),
            (6, 4, 3),
            (5, 4, 3),
            (8, 5, 2),
            (6, 5, 3),
            (6, 7, 2),
            (5, 5, 3),
        ] {
            let tree = generate_sector_tree(spec(p, q), gens).unwrap();
            let s = tree.soundness(gens).unwrap();
            assert!(s.is_sound(), "{{{p},{q}}}: {s:?}");
        }
    }
}
