use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::geom::{hyperbolic_distance, DiscPoint};

use super::{Tile, Tiling, DEDUPE_DIST};

/// Tolerance on the angle sum around a saturated vertex.
pub const ANGLE_SUM_TOL: f64 = 1e-8;

const CELL: f64 = 1e-5;

/// Incidence data of one vertex of the tiling.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VertexFinding {
    pub point: [f64; 2],
    pub tiles: usize,
    pub angle_sum: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub tiles: usize,
    /// Vertices first reached in this generation.
    pub vertices: usize,
    /// Of those, how many are surrounded by q tiles.
    pub saturated: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ValidationReport {
    pub tiles: usize,
    pub duplicate_violations: usize,
    pub duplicate_pairs: Vec<(usize, usize)>,
    pub saturated_vertices: usize,
    /// Vertices with at least q incident tiles whose count is not q or
    /// whose angles do not sum to 2π.
    pub incidence_violations: Vec<VertexFinding>,
    pub root_vertices: Vec<VertexFinding>,
    pub max_angle_sum_residual: f64,
    pub max_interior_angle_residual: f64,
    pub generations: Vec<GenerationStats>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.duplicate_violations == 0 && self.incidence_violations.is_empty()
    }

    /// Every vertex of the root tile is surrounded by exactly `q` tiles.
    pub fn root_saturated(&self, q: usize) -> bool {
        self.root_vertices
            .iter()
            .all(|v| v.tiles == q && (v.angle_sum - 2.0 * PI).abs() < ANGLE_SUM_TOL)
    }
}

struct Cluster {
    point: DiscPoint,
    incidences: Vec<(usize, f64)>,
}

fn cell(p: DiscPoint) -> (i64, i64) {
    ((p.x / CELL).floor() as i64, (p.y / CELL).floor() as i64)
}

/// Groups nearby points; returns the cluster index of every input.
struct Clusters {
    grid: HashMap<(i64, i64), Vec<usize>>,
    items: Vec<Cluster>,
}

impl Clusters {
    fn new() -> Self {
        Clusters {
            grid: HashMap::new(),
            items: Vec::new(),
        }
    }

    fn find_or_insert(&mut self, p: DiscPoint) -> usize {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(cx + dx, cy + dy)) {
                    if let Some(&id) = ids
                        .iter()
                        .find(|&&id| hyperbolic_distance(self.items[id].point, p) < DEDUPE_DIST)
                    {
                        return id;
                    }
                }
            }
        }
        let id = self.items.len();
        self.items.push(Cluster {
            point: p,
            incidences: Vec::new(),
        });
        self.grid.entry((cx, cy)).or_default().push(id);
        id
    }
}

fn finding(c: &Cluster) -> VertexFinding {
    let mut tiles: Vec<usize> = c.incidences.iter().map(|&(t, _)| t).collect();
    tiles.sort_unstable();
    tiles.dedup();
    VertexFinding {
        point: [c.point.x, c.point.y],
        tiles: tiles.len(),
        angle_sum: c.incidences.iter().map(|&(_, a)| a).sum(),
    }
}

/// Checks distinctness, vertex saturation and regularity of a tiling.
pub fn check_tiling(tiling: &Tiling) -> ValidationReport {
    check_tiles(&tiling.tiles, tiling.spec.q as usize)
}

pub fn check_tiles(tiles: &[Tile], q: usize) -> ValidationReport {
    let target = 2.0 * PI / q as f64;

    let mut centers = Clusters::new();
    let mut duplicate_pairs = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    for (i, t) in tiles.iter().enumerate() {
        let c = centers.find_or_insert(t.center);
        if c < owner.len() {
            duplicate_pairs.push((owner[c], i));
        } else {
            owner.push(i);
        }
    }

    let mut vertices = Clusters::new();
    let mut first_generation: Vec<usize> = Vec::new();
    let mut max_interior = 0.0f64;
    let mut root_clusters = Vec::new();
    for (i, t) in tiles.iter().enumerate() {
        let angles = t.interior_angles();
        for (k, (&v, &a)) in t.vertices.iter().zip(&angles).enumerate() {
            max_interior = max_interior.max((a - target).abs());
            let c = vertices.find_or_insert(v);
            vertices.items[c].incidences.push((i, a));
            if c == first_generation.len() {
                first_generation.push(t.generation);
            } else {
                first_generation[c] = first_generation[c].min(t.generation);
            }
            if i == 0 {
                root_clusters.push((k, c));
            }
        }
    }

    let findings: Vec<VertexFinding> = vertices.items.iter().map(finding).collect();
    let mut incidence_violations = Vec::new();
    let mut saturated_vertices = 0;
    let mut max_angle_sum_residual = 0.0f64;
    let mut generations: Vec<GenerationStats> = Vec::new();
    for (f, &g) in findings.iter().zip(&first_generation) {
        while generations.len() <= g {
            generations.push(GenerationStats {
                generation: generations.len(),
                tiles: 0,
                vertices: 0,
                saturated: 0,
            });
        }
        generations[g].vertices += 1;
        if f.tiles < q {
            continue;
        }
        let residual = (f.angle_sum - 2.0 * PI).abs();
        max_angle_sum_residual = max_angle_sum_residual.max(residual);
        if f.tiles == q && residual < ANGLE_SUM_TOL {
            saturated_vertices += 1;
            generations[g].saturated += 1;
        } else {
            incidence_violations.push(f.clone());
        }
    }
    for t in tiles {
        while generations.len() <= t.generation {
            generations.push(GenerationStats {
                generation: generations.len(),
                tiles: 0,
                vertices: 0,
                saturated: 0,
            });
        }
        generations[t.generation].tiles += 1;
    }

    ValidationReport {
        tiles: tiles.len(),
        duplicate_violations: duplicate_pairs.len(),
        duplicate_pairs,
        saturated_vertices,
        incidence_violations,
        root_vertices: root_clusters
            .iter()
            .map(|&(_, c)| findings[c].clone())
            .collect(),
        max_angle_sum_residual,
        max_interior_angle_residual: max_interior,
        generations,
    }
}
