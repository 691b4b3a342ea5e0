//! `{p,q}` tilings by reflection: breadth-first closure with
//! deduplication, the sector tree census, and validation.

mod bfs;
mod check;
mod isometry;
mod sector;
mod serial;

pub use bfs::{generate_bfs, Tiling, MAX_BFS_DEPTH};
pub use check::{check_tiling, GenerationStats, ValidationReport, VertexFinding};
pub use isometry::Isometry;
pub use sector::{
    generate_sector_tree, generation_counts, ParityMode, SectorNode, SectorSoundness, SectorTree,
    MAX_SECTOR_GENERATIONS,
};
pub use serial::{TileRecord, TilingRecord};

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::geom::{
    geodesic_through, perpendicular_bisector, segment_angle, DiscPoint, Geodesic, GeomError, Vec2,
};
use crate::metrics::{h_pq, MetricsError, PolygonSpec};

/// Hyperbolic distance under which two tile centres are the same tile.
pub const DEDUPE_DIST: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TilerError {
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("depth {depth} exceeds the cap of {cap}")]
    DepthTooLarge { depth: usize, cap: usize },
    #[error("sector trees need q >= 4, got q = {0}")]
    UnsupportedValence(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    Root,
    MainSon,
    Brother,
    BfsChild,
}

/// Where the base tile sits in the disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    CenterAtO,
    VertexAtO,
}

/// The centred regular polygon and the reflections in its sides;
/// side `j` joins vertices `j` and `j + 1`.
#[derive(Debug, Clone)]
pub struct Prototype {
    pub spec: PolygonSpec,
    pub vertices: Vec<DiscPoint>,
    pub side_reflections: Vec<Isometry>,
}

impl Prototype {
    pub fn new(spec: PolygonSpec) -> Result<Self, TilerError> {
        let p = spec.p as usize;
        let r = h_pq(&spec);
        let vertices: Vec<DiscPoint> = (0..p)
            .map(|k| {
                DiscPoint::from_polar(r, -PI / spec.p as f64 + 2.0 * PI * k as f64 / spec.p as f64)
            })
            .collect();
        let side_reflections = (0..p)
            .map(|j| {
                Ok(Isometry::reflection(&geodesic_through(
                    vertices[j],
                    vertices[(j + 1) % p],
                )?))
            })
            .collect::<Result<Vec<_>, GeomError>>()?;
        Ok(Prototype {
            spec,
            vertices,
            side_reflections,
        })
    }

    pub fn p(&self) -> usize {
        self.vertices.len()
    }

    /// The tile `g(P₀)`.
    pub fn tile(&self, g: Isometry) -> (Vec<DiscPoint>, DiscPoint) {
        (
            self.vertices.iter().map(|&v| g.apply(v)).collect(),
            g.origin_image(),
        )
    }

    /// Isometry moving vertex 0 to O with side 0 along the positive x-axis.
    pub fn vertex_anchor(&self) -> Result<Isometry, TilerError> {
        let to_origin = Isometry::reflection(&perpendicular_bisector(
            self.vertices[0],
            DiscPoint::ORIGIN,
        )?);
        let v1 = to_origin.apply(self.vertices[1]).vec().normalized();
        let mirror = (v1 + Vec2::new(1.0, 0.0)).normalized();
        Ok(Isometry::reflection(&Geodesic::diameter(mirror)).compose(&to_origin))
    }
}

/// One tile of a tiling.
#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub id: usize,
    pub vertices: Vec<DiscPoint>,
    pub center: DiscPoint,
    pub generation: usize,
    pub parent: Option<usize>,
    pub role: Role,
    pub iso: Isometry,
}

impl Tile {
    pub fn from_iso(
        proto: &Prototype,
        iso: Isometry,
        id: usize,
        generation: usize,
        parent: Option<usize>,
        role: Role,
    ) -> Self {
        let (vertices, center) = proto.tile(iso);
        Tile {
            id,
            vertices,
            center,
            generation,
            parent,
            role,
            iso,
        }
    }

    /// Interior angle at every vertex.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                segment_angle(
                    self.vertices[k],
                    self.vertices[(k + n - 1) % n],
                    self.vertices[(k + 1) % n],
                )
            })
            .collect()
    }

    /// Largest deviation of the vertices from the Euclidean circle through
    /// the first three.
    pub fn concyclic_residual(&self) -> f64 {
        let v: Vec<Vec2> = self.vertices.iter().map(|p| p.vec()).collect();
        match crate::geom::circumcircle(v[0], v[1], v[2]) {
            Some((c, r)) => v
                .iter()
                .map(|&x| ((x - c).norm() - r).abs())
                .fold(0.0, f64::max),
            None => f64::INFINITY,
        }
    }
}

/// The base tile, centred at O or with vertex 0 at O.
pub fn base_polygon(spec: PolygonSpec, anchor: Anchor) -> Result<Tile, TilerError> {
    let spec = PolygonSpec::new(spec.p, spec.q)?;
    let proto = Prototype::new(spec)?;
    let iso = match anchor {
        Anchor::CenterAtO => Isometry::IDENTITY,
        Anchor::VertexAtO => proto.vertex_anchor()?,
    };
    Ok(Tile::from_iso(&proto, iso, 0, 0, None, Role::Root))
}
