//! Constant-density level sets by marching squares.
//!
//! Each grid cell contributes segments whose endpoints sit on cell edges,
//! placed by linear interpolation of the corner values (so every vertex
//! reproduces the level exactly under the bilinear interpolant). Segments
//! are chained into polylines through shared-edge identity, which is exact
//! integer matching, and a chain that returns to its first edge is closed.
//! Saddle cells are disambiguated by the cell-center mean.

use crate::grid::DensityGrid;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// An ordered point chain in scaled (Q, P) coordinates.
#[derive(Debug, Clone)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    /// Closed chains repeat their first point at the end.
    pub closed: bool,
}

/// All contour polylines of one level.
#[derive(Debug, Clone)]
pub struct LevelSet {
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

// Global edge ids: horizontal edge from (i,j) to (i+1,j) and vertical edge
// from (i,j) to (i,j+1), each keyed by its lower-left lattice site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeDir {
    H,
    V,
}

type EdgeId = (usize, usize, EdgeDir);

struct CellEdges {
    bottom: EdgeId,
    top: EdgeId,
    left: EdgeId,
    right: EdgeId,
}

fn cell_edges(i: usize, j: usize) -> CellEdges {
    CellEdges {
        bottom: (i, j, EdgeDir::H),
        top: (i, j + 1, EdgeDir::H),
        left: (i, j, EdgeDir::V),
        right: (i + 1, j, EdgeDir::V),
    }
}

/// Crossing point of `level` on an edge, by linear interpolation.
fn edge_point(grid: &DensityGrid, edge: EdgeId, level: f64) -> (f64, f64) {
    let (i, j, dir) = edge;
    let (v0, v1, x0, y0, x1, y1) = match dir {
        EdgeDir::H => (
            grid.value(i, j),
            grid.value(i + 1, j),
            grid.q_at(i),
            grid.p_at(j),
            grid.q_at(i + 1),
            grid.p_at(j),
        ),
        EdgeDir::V => (
            grid.value(i, j),
            grid.value(i, j + 1),
            grid.q_at(i),
            grid.p_at(j),
            grid.q_at(i),
            grid.p_at(j + 1),
        ),
    };
    let t = ((level - v0) / (v1 - v0)).clamp(0.0, 1.0);
    (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
}

/// Extract the contour polylines of a single level.
pub fn extract_level(grid: &DensityGrid, level: f64) -> Vec<Polyline> {
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..grid.np - 1 {
        for i in 0..grid.nq - 1 {
            let bl = grid.value(i, j) >= level;
            let br = grid.value(i + 1, j) >= level;
            let tr = grid.value(i + 1, j + 1) >= level;
            let tl = grid.value(i, j + 1) >= level;
            let case = bl as u8 | (br as u8) << 1 | (tr as u8) << 2 | (tl as u8) << 3;
            if case == 0 || case == 15 {
                continue;
            }
            let e = cell_edges(i, j);
            match case {
                1 | 14 => segments.push((e.bottom, e.left)),
                2 | 13 => segments.push((e.bottom, e.right)),
                3 | 12 => segments.push((e.left, e.right)),
                4 | 11 => segments.push((e.right, e.top)),
                6 | 9 => segments.push((e.bottom, e.top)),
                7 | 8 => segments.push((e.top, e.left)),
                5 | 10 => {
                    // saddle: resolve connectivity by the cell-center mean
                    let center = 0.25
                        * (grid.value(i, j)
                            + grid.value(i + 1, j)
                            + grid.value(i + 1, j + 1)
                            + grid.value(i, j + 1));
                    let center_in = center >= level;
                    let diag_bl_tr = case == 5;
                    if diag_bl_tr == center_in {
                        // inside region connects bl—tr
                        segments.push((e.bottom, e.right));
                        segments.push((e.top, e.left));
                    } else {
                        segments.push((e.bottom, e.left));
                        segments.push((e.right, e.top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // adjacency: edge id -> indices of the (at most two) segments using it
    let mut by_edge: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (idx, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(idx);
        by_edge.entry(b).or_default().push(idx);
    }

    let mut used = alloc::vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a0, b0) = segments[start];
        let mut chain = alloc::vec![a0, b0];

        // walk forward from b0, then backward from a0
        for dir in 0..2 {
            loop {
                let tip = if dir == 0 {
                    *chain.last().unwrap()
                } else {
                    chain[0]
                };
                let next = by_edge
                    .get(&tip)
                    .and_then(|v| v.iter().find(|&&s| !used[s]).copied());
                let Some(s) = next else { break };
                used[s] = true;
                let (a, b) = segments[s];
                let other = if a == tip { b } else { a };
                if dir == 0 {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
            if chain[0] == *chain.last().unwrap() && chain.len() > 2 {
                break; // already a loop, no backward walk needed
            }
        }

        let closed = chain.len() > 2 && chain[0] == *chain.last().unwrap();
        let points: Vec<(f64, f64)> = if closed {
            chain.iter().map(|&e| edge_point(grid, e, level)).collect()
        } else {
            chain.iter().map(|&e| edge_point(grid, e, level)).collect()
        };
        polylines.push(Polyline { points, closed });
    }
    polylines
}

/// Extract level sets for each requested level; levels with no crossings
/// yield an empty polyline list (not an error).
pub fn extract_levels(grid: &DensityGrid, levels: &[f64]) -> Vec<LevelSet> {
    levels
        .iter()
        .map(|&level| LevelSet {
            level,
            polylines: extract_level(grid, level),
        })
        .collect()
}
