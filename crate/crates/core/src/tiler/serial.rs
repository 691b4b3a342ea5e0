use serde::Serialize;

use super::{Role, Tile, Tiling};

#[derive(Debug, Clone, Serialize)]
pub struct TileRecord {
    pub id: usize,
    pub generation: usize,
    pub parent: Option<usize>,
    pub role: Role,
    pub center: [f64; 2],
    pub vertices: Vec<[f64; 2]>,
}

impl From<&Tile> for TileRecord {
    fn from(t: &Tile) -> Self {
        TileRecord {
            id: t.id,
            generation: t.generation,
            parent: t.parent,
            role: t.role,
            center: [t.center.x, t.center.y],
            vertices: t.vertices.iter().map(|v| [v.x, v.y]).collect(),
        }
    }
}

/// JSON form of a tiling.
#[derive(Debug, Clone, Serialize)]
pub struct TilingRecord {
    pub p: u64,
    pub q: u64,
    pub depth: usize,
    pub tiles: Vec<TileRecord>,
    pub dedupe_log: usize,
}

impl TilingRecord {
    pub fn new(p: u64, q: u64, depth: usize, tiles: &[Tile], dedupe_log: usize) -> Self {
        TilingRecord {
            p,
            q,
            depth,
            tiles: tiles.iter().map(TileRecord::from).collect(),
            dedupe_log,
        }
    }
}

impl From<&Tiling> for TilingRecord {
    fn from(t: &Tiling) -> Self {
        TilingRecord::new(t.spec.p, t.spec.q, t.depth, &t.tiles, t.dedupe_log)
    }
}
