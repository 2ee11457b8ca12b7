//! Regular CW-complexes with a simplicial fast path: face posets stored
//! transitively closed, deterministic edge orientations, skeleta, and
//! `H^2(A; Z)` for simplicial complexes.

use crate::intlat::{snf, IntMatrix};
use crate::jsonint::JsonInt;
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cell {cell}: loop edge is not regular")]
    LoopEdge { cell: String },
    #[error("cell {cell}: dim-1 cell must have exactly 2 vertex faces, found {found}")]
    BadEdge { cell: String, found: usize },
    #[error("H^2 is only computed for simplicial complexes; supply H2 manually")]
    NotSimplicial,
    #[error("unknown cell id {0}")]
    UnknownCell(String),
}

pub type Result<T> = std::result::Result<T, ComplexError>;

/// A single cell: its dimension and the ids of all its proper faces,
/// transitively closed. Simplicial cells also carry their vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub faces: BTreeSet<String>,
    pub vertices: Option<BTreeSet<String>>,
}

/// A CW-complex as an id-indexed cell collection. The face relation is
/// expected to be transitively closed as stored; [`CwComplex::close_faces`]
/// computes the closure for loaders, and [`validate_regular`] reports
/// violations of the combinatorial regularity consequences this crate
/// relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwComplex {
    cells: BTreeMap<String, Cell>,
    simplicial: bool,
}

/// A validator finding: the offending cell plus a reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cell: String,
    pub reason: String,
}

/// An oriented 1-cell: tail and head are the two vertex faces, ordered by
/// cell id so that the orientation is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedEdge {
    pub edge: String,
    pub tail: String,
    pub head: String,
}

impl CwComplex {
    pub fn from_parts(cells: Vec<Cell>, simplicial: bool) -> Self {
        CwComplex { cells: cells.into_iter().map(|c| (c.id.clone(), c)).collect(), simplicial }
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }

    pub fn cell(&self, id: &str) -> Option<&Cell> {
        self.cells.get(id)
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = &String> {
        self.cells.keys()
    }

    pub fn dim(&self) -> usize {
        self.cells.values().map(|c| c.dim).max().unwrap_or(0)
    }

    /// Ids of cells of one dimension, sorted.
    pub fn cells_of_dim(&self, dim: usize) -> Vec<&Cell> {
        self.cells.values().filter(|c| c.dim == dim).collect()
    }

    /// Replaces each face set by its transitive closure.
    pub fn close_faces(&mut self) {
        let ids: Vec<String> = self.cells.keys().cloned().collect();
        // Process by increasing dimension so lower closures are final.
        let mut by_dim: Vec<String> = ids;
        by_dim.sort_by_key(|id| (self.cells[id].dim, id.clone()));
        for id in by_dim {
            let direct: Vec<String> = self.cells[&id].faces.iter().cloned().collect();
            let mut closed = BTreeSet::new();
            for f in direct {
                closed.insert(f.clone());
                if let Some(fc) = self.cells.get(&f) {
                    closed.extend(fc.faces.iter().cloned());
                }
            }
            self.cells.get_mut(&id).unwrap().faces = closed;
        }
    }

    /// The vertex faces (dim-0 cells) of a cell, sorted by id. A vertex is
    /// its own vertex face.
    pub fn vertex_faces(&self, id: &str) -> Vec<String> {
        let Some(cell) = self.cells.get(id) else { return Vec::new() };
        if cell.dim == 0 {
            return vec![cell.id.clone()];
        }
        cell.faces
            .iter()
            .filter(|f| self.cells.get(*f).map(|c| c.dim == 0).unwrap_or(false))
            .cloned()
            .collect()
    }
}

/// Checks the combinatorial consequences of regularity: transitively closed
/// face sets referencing known cells of smaller dimension, a vertex face for
/// every positive-dimensional cell, exactly two vertex faces per 1-cell, and
/// for simplicial complexes the subset-closure of vertex sets.
pub fn validate_regular(c: &CwComplex) -> Vec<Violation> {
    let mut violations = Vec::new();
    for cell in c.cells() {
        for f in &cell.faces {
            match c.cell(f) {
                None => violations.push(Violation {
                    cell: cell.id.clone(),
                    reason: format!("face {f} is not a cell of the complex"),
                }),
                Some(fc) => {
                    if fc.dim >= cell.dim {
                        violations.push(Violation {
                            cell: cell.id.clone(),
                            reason: format!(
                                "face {f} has dimension {} >= {}",
                                fc.dim, cell.dim
                            ),
                        });
                    }
                    for g in &fc.faces {
                        if !cell.faces.contains(g) {
                            violations.push(Violation {
                                cell: cell.id.clone(),
                                reason: format!(
                                    "not transitively closed: face {f} has face {g} missing here"
                                ),
                            });
                        }
                    }
                }
            }
        }
        if cell.dim >= 1 {
            let vf = c.vertex_faces(&cell.id);
            if vf.is_empty() {
                violations.push(Violation {
                    cell: cell.id.clone(),
                    reason: "no vertex face".to_string(),
                });
            }
            if cell.dim == 1 {
                match vf.len() {
                    2 => {}
                    1 => violations.push(Violation {
                        cell: cell.id.clone(),
                        reason: "loop edge (single vertex face) is not regular".to_string(),
                    }),
                    n if n > 2 => violations.push(Violation {
                        cell: cell.id.clone(),
                        reason: format!("1-cell has {n} vertex faces"),
                    }),
                    _ => {}
                }
            }
        }
    }
    if c.is_simplicial() {
        validate_simplicial(c, &mut violations);
    }
    violations
}

fn validate_simplicial(c: &CwComplex, violations: &mut Vec<Violation>) {
    let mut by_vertices: BTreeMap<Vec<String>, Vec<String>> = BTreeMap::new();
    for cell in c.cells() {
        let Some(vs) = &cell.vertices else {
            violations.push(Violation {
                cell: cell.id.clone(),
                reason: "simplicial complex cell without vertex set".to_string(),
            });
            continue;
        };
        if vs.len() != cell.dim + 1 {
            violations.push(Violation {
                cell: cell.id.clone(),
                reason: format!("dim {} cell has {} vertices, expected {}", cell.dim, vs.len(), cell.dim + 1),
            });
            continue;
        }
        by_vertices.entry(vs.iter().cloned().collect()).or_default().push(cell.id.clone());
        // Every nonempty proper subset must appear among the faces.
        let vlist: Vec<&String> = vs.iter().collect();
        for mask in 1..(1u32 << vlist.len()) - 1 {
            let subset: BTreeSet<String> = vlist
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| (*v).clone())
                .collect();
            let found = cell.faces.iter().any(|f| {
                c.cell(f).and_then(|fc| fc.vertices.as_ref()).map(|fv| *fv == subset).unwrap_or(false)
            });
            if !found {
                violations.push(Violation {
                    cell: cell.id.clone(),
                    reason: format!("missing face with vertex set {subset:?}"),
                });
            }
        }
    }
    for (vs, ids) in by_vertices {
        if ids.len() > 1 {
            violations.push(Violation {
                cell: ids[1].clone(),
                reason: format!("duplicate simplex on vertices {vs:?} (also {})", ids[0]),
            });
        }
    }
}

/// Orients every 1-cell: tail is the smaller vertex id, head the larger.
/// Edges are listed in id order. Loops are rejected.
pub fn oriented_edges(c: &CwComplex) -> Result<Vec<OrientedEdge>> {
    let mut out = Vec::new();
    for cell in c.cells_of_dim(1) {
        let vf = c.vertex_faces(&cell.id);
        match vf.len() {
            2 => out.push(OrientedEdge {
                edge: cell.id.clone(),
                tail: vf[0].clone(),
                head: vf[1].clone(),
            }),
            1 => return Err(ComplexError::LoopEdge { cell: cell.id.clone() }),
            n => return Err(ComplexError::BadEdge { cell: cell.id.clone(), found: n }),
        }
    }
    Ok(out)
}

/// All cells of dimension at most `k`, faces intact.
pub fn skeleton(c: &CwComplex, k: usize) -> CwComplex {
    let cells = c.cells().filter(|cell| cell.dim <= k).cloned().collect();
    CwComplex::from_parts(cells, c.is_simplicial())
}

/// `H^2(A; Z)` of a simplicial complex from the Smith forms of the
/// coboundary maps `C^1 -> C^2 -> C^3`, with the standard vertex-order
/// orientation convention. Returns `(free_rank, invariant_factors)`.
pub fn h2_simplicial(c: &CwComplex) -> Result<(usize, Vec<BigInt>)> {
    if !c.is_simplicial() {
        return Err(ComplexError::NotSimplicial);
    }
    let d1 = coboundary(c, 1);
    let d2 = coboundary(c, 2);
    let n2 = c.cells_of_dim(2).len();
    let rank_d1 = matrix_rank(&d1);
    let rank_d2 = matrix_rank(&d2);
    let free = n2 - rank_d2 - rank_d1;
    let torsion = snf(&d1).diag.into_iter().filter(|d| *d > BigInt::one()).collect();
    Ok((free, torsion))
}

fn matrix_rank(m: &IntMatrix) -> usize {
    crate::intlat::hnf(m).rank()
}

/// Matrix of the coboundary `C^k -> C^{k+1}`: rows indexed by k-cells,
/// columns by (k+1)-cells, entry = incidence sign of the k-face inside the
/// (k+1)-simplex under the sorted-vertex orientation.
fn coboundary(c: &CwComplex, k: usize) -> IntMatrix {
    let lower = c.cells_of_dim(k);
    let upper = c.cells_of_dim(k + 1);
    let lower_index: BTreeMap<Vec<String>, usize> = lower
        .iter()
        .enumerate()
        .map(|(i, cell)| (sorted_vertices(cell), i))
        .collect();
    let mut m = IntMatrix::zero(lower.len(), upper.len());
    for (j, cell) in upper.iter().enumerate() {
        let vs = sorted_vertices(cell);
        for omit in 0..vs.len() {
            let mut face = vs.clone();
            face.remove(omit);
            let i = lower_index[&face];
            let sign = if omit % 2 == 0 { 1 } else { -1 };
            m[(i, j)] = BigInt::from(sign);
        }
    }
    m
}

fn sorted_vertices(cell: &Cell) -> Vec<String> {
    cell.vertices
        .as_ref()
        .expect("simplicial cells carry vertex sets")
        .iter()
        .cloned()
        .collect()
}

/// Builds a simplicial complex from its maximal simplices, given as vertex
/// index sets. Cell ids are the vertex indices joined with `.`, e.g. the
/// triangle on vertices 0, 1, 3 gets id `0.1.3`.
pub fn simplicial_complex(maximal: &[&[usize]]) -> CwComplex {
    let mut cells: BTreeMap<String, Cell> = BTreeMap::new();
    for simplex in maximal {
        let mut vs: Vec<usize> = simplex.to_vec();
        vs.sort_unstable();
        vs.dedup();
        assert!(!vs.is_empty(), "empty simplex");
        for mask in 1u32..(1 << vs.len()) {
            let subset: Vec<usize> =
                vs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect();
            let id = simplex_id(&subset);
            if cells.contains_key(&id) {
                continue;
            }
            let mut faces = BTreeSet::new();
            for fmask in 1u32..(1 << subset.len()) - 1 {
                let face: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| fmask & (1 << i) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                faces.insert(simplex_id(&face));
            }
            cells.insert(
                id.clone(),
                Cell {
                    id,
                    dim: subset.len() - 1,
                    faces,
                    vertices: Some(subset.iter().map(|v| v.to_string()).collect()),
                },
            );
        }
    }
    CwComplex { cells, simplicial: true }
}

pub fn simplex_id(vertices: &[usize]) -> String {
    vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
}

/// JSON form of a complex:
/// `{"cells": [{"id", "dim", "faces", "vertices"?}], "simplicial": bool}`.
/// Face sets are transitively closed on load.
#[derive(Debug, Serialize, Deserialize)]
pub struct CwComplexJson {
    pub cells: Vec<CellJson>,
    pub simplicial: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CellJson {
    pub id: String,
    pub dim: usize,
    pub faces: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
}

impl CwComplexJson {
    pub fn into_complex(self) -> CwComplex {
        let cells = self
            .cells
            .into_iter()
            .map(|c| Cell {
                id: c.id,
                dim: c.dim,
                faces: c.faces.into_iter().collect(),
                vertices: c.vertices.map(|v| v.into_iter().collect()),
            })
            .collect();
        let mut complex = CwComplex::from_parts(cells, self.simplicial);
        complex.close_faces();
        complex
    }

    pub fn from_complex(c: &CwComplex) -> Self {
        CwComplexJson {
            cells: c
                .cells()
                .map(|cell| CellJson {
                    id: cell.id.clone(),
                    dim: cell.dim,
                    faces: cell.faces.iter().cloned().collect(),
                    vertices: cell.vertices.as_ref().map(|v| v.iter().cloned().collect()),
                })
                .collect(),
            simplicial: c.is_simplicial(),
        }
    }
}

/// Serialisable form of `(free_rank, invariant_factors)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgAbelian {
    pub free_rank: usize,
    pub torsion: Vec<JsonInt>,
}

impl FgAbelian {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        FgAbelian { free_rank, torsion: torsion.into_iter().map(JsonInt).collect() }
    }
}
