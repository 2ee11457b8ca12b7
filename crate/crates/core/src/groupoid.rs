//! Cellular groupoids: an assignment of a closed torus subgroup to every
//! cell of a regular CW-complex, shrinking as cells grow. This is the
//! executable form of a contravariant functor from the face poset to the
//! poset of closed subgroups, and it encodes the isotropy data of a split
//! torus action.

use crate::complex::{self, validate_regular, CwComplex, CwComplexJson, Violation};
use crate::intlat::IntMatrix;
use crate::jsonint::JsonInt;
use crate::torus::{self, subgroup_from_characters, TorusSubgroup};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("invalid groupoid:\n{0}")]
    Invalid(ViolationList),
    #[error("builder: {0}")]
    Builder(String),
    #[error(transparent)]
    Torus(#[from] torus::TorusError),
    #[error(transparent)]
    Complex(#[from] complex::ComplexError),
}

#[derive(Debug)]
pub struct ViolationList(pub Vec<Violation>);

impl std::fmt::Display for ViolationList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.0 {
            writeln!(f, "  {}: {}", v.cell, v.reason)?;
        }
        Ok(())
    }
}

pub type Result<T> = std::result::Result<T, GroupoidError>;

/// A cellular groupoid: complex, ambient torus rank, and one subgroup per
/// cell. Optional integer vertex coordinates support moment-polytope style
/// affine reports.
#[derive(Debug, Clone)]
pub struct CellularGroupoid {
    pub complex: CwComplex,
    pub ambient_rank: usize,
    pub assign: BTreeMap<String, TorusSubgroup>,
    pub vertex_coordinates: Option<BTreeMap<String, Vec<BigInt>>>,
}

impl CellularGroupoid {
    pub fn group(&self, cell: &str) -> Option<&TorusSubgroup> {
        self.assign.get(cell)
    }

    /// Restriction of the groupoid to the k-skeleton.
    pub fn skeleton(&self, k: usize) -> CellularGroupoid {
        let complex = complex::skeleton(&self.complex, k);
        let assign = self
            .assign
            .iter()
            .filter(|(id, _)| complex.cell(id).is_some())
            .map(|(id, g)| (id.clone(), g.clone()))
            .collect();
        CellularGroupoid {
            complex,
            ambient_rank: self.ambient_rank,
            assign,
            vertex_coordinates: self.vertex_coordinates.clone(),
        }
    }

    /// Sorted vertex ids of the underlying complex.
    pub fn vertex_ids(&self) -> Vec<String> {
        self.complex.cells_of_dim(0).iter().map(|c| c.id.clone()).collect()
    }
}

/// Checks that the complex is regular, that every cell carries a subgroup of
/// the right ambient rank, and that the assignment is monotone: whenever
/// `f <= e` the group of `e` is contained in the group of `f`.
pub fn validate_groupoid(g: &CellularGroupoid) -> Vec<Violation> {
    let mut violations = validate_regular(&g.complex);
    for cell in g.complex.cells() {
        let Some(group) = g.assign.get(&cell.id) else {
            violations.push(Violation {
                cell: cell.id.clone(),
                reason: "cell has no subgroup assignment".to_string(),
            });
            continue;
        };
        if group.ambient_rank() != g.ambient_rank {
            violations.push(Violation {
                cell: cell.id.clone(),
                reason: format!(
                    "ambient rank {} differs from groupoid rank {}",
                    group.ambient_rank(),
                    g.ambient_rank
                ),
            });
            continue;
        }
        for f in &cell.faces {
            let Some(face_group) = g.assign.get(f) else { continue };
            if face_group.ambient_rank() != g.ambient_rank {
                continue;
            }
            match torus::contains(face_group, group) {
                Ok(true) => {}
                Ok(false) => violations.push(Violation {
                    cell: cell.id.clone(),
                    reason: format!("group not contained in group of face {f}"),
                }),
                Err(e) => violations.push(Violation {
                    cell: cell.id.clone(),
                    reason: format!("containment check against face {f} failed: {e}"),
                }),
            }
        }
    }
    for (id, _) in &g.assign {
        if g.complex.cell(id).is_none() {
            violations.push(Violation {
                cell: id.clone(),
                reason: "assignment references a cell not in the complex".to_string(),
            });
        }
    }
    violations
}

/// Validates or fails with the violation list.
pub fn require_valid(g: &CellularGroupoid) -> Result<()> {
    let v = validate_groupoid(g);
    if v.is_empty() {
        Ok(())
    } else {
        Err(GroupoidError::Invalid(ViolationList(v)))
    }
}

/// Every vertex group is the full torus.
pub fn is_zero_toric(g: &CellularGroupoid) -> bool {
    g.complex.cells_of_dim(0).iter().all(|c| {
        g.assign.get(&c.id).map(|h| h.is_full()).unwrap_or(false)
    })
}

/// Zero-toric, and every edge group is a codimension-1 subtorus. Returns the
/// primitive character `chi_e` per edge (the single HNF basis row of the
/// annihilator, whose first nonzero entry is positive by canonicity), or
/// `None` when the groupoid is not 1-toric.
pub fn one_toric_characters(g: &CellularGroupoid) -> Option<BTreeMap<String, Vec<BigInt>>> {
    if !is_zero_toric(g) {
        return None;
    }
    let mut chis = BTreeMap::new();
    for cell in g.complex.cells_of_dim(1) {
        let h = g.assign.get(&cell.id)?;
        let s = torus::structure(h);
        if s.dim + 1 != g.ambient_rank || !s.pi0.is_empty() {
            return None;
        }
        chis.insert(cell.id.clone(), h.annihilator().basis().row_vec(0));
    }
    Some(chis)
}

pub fn is_one_toric(g: &CellularGroupoid) -> bool {
    one_toric_characters(g).is_some()
}

/// The standard example builders.
pub mod examples {
    use super::*;
    use crate::complex::{simplex_id, simplicial_complex, Cell};
    use std::collections::BTreeSet;

    /// Groupoid over the full simplex `Δ^m` with `I(e) = ⋂_{j in e} ker χ_j`,
    /// one character row per vertex. Models the torus action on an odd
    /// sphere with weights `χ_0..χ_m`.
    pub fn simplex_sphere(n: usize, chars: &IntMatrix) -> Result<CellularGroupoid> {
        if chars.cols() != n {
            return Err(GroupoidError::Builder(format!(
                "characters have {} columns, ambient rank is {n}",
                chars.cols()
            )));
        }
        if chars.rows() == 0 {
            return Err(GroupoidError::Builder("need at least one vertex character".into()));
        }
        let m = chars.rows() - 1;
        let all: Vec<usize> = (0..=m).collect();
        let complex = simplicial_complex(&[&all]);
        let mut assign = BTreeMap::new();
        for cell in complex.cells() {
            let subset: Vec<usize> = cell
                .vertices
                .as_ref()
                .unwrap()
                .iter()
                .map(|v| v.parse::<usize>().unwrap())
                .collect();
            let rows: Vec<Vec<BigInt>> = subset.iter().map(|&j| chars.row_vec(j)).collect();
            let group = subgroup_from_characters(n, &IntMatrix::from_rows(n, rows))?;
            assign.insert(cell.id.clone(), group);
        }
        let g = CellularGroupoid { complex, ambient_rank: n, assign, vertex_coordinates: None };
        require_valid(&g)?;
        Ok(g)
    }

    /// Replaces every group by the subgroup generated by it and `gamma0`;
    /// this is the groupoid of the quotient split space.
    pub fn quotient(g: &CellularGroupoid, gamma0: &TorusSubgroup) -> Result<CellularGroupoid> {
        let mut assign = BTreeMap::new();
        for (id, group) in &g.assign {
            assign.insert(id.clone(), torus::generated_join(group, gamma0)?);
        }
        let out = CellularGroupoid {
            complex: g.complex.clone(),
            ambient_rank: g.ambient_rank,
            assign,
            vertex_coordinates: g.vertex_coordinates.clone(),
        };
        require_valid(&out)?;
        Ok(out)
    }

    /// The `CP^1(χ)` groupoid over `Δ^1`: full-torus vertices, edge group
    /// `ker χ`.
    pub fn cp1(chi: &[BigInt]) -> Result<CellularGroupoid> {
        let n = chi.len();
        if chi.iter().all(|e| e.is_zero()) {
            return Err(GroupoidError::Builder("cp1 needs a nontrivial character".into()));
        }
        let complex = simplicial_complex(&[&[0, 1]]);
        let edge = subgroup_from_characters(n, &IntMatrix::from_rows(n, vec![chi.to_vec()]))?;
        let mut assign = BTreeMap::new();
        assign.insert("0".to_string(), TorusSubgroup::full(n));
        assign.insert("1".to_string(), TorusSubgroup::full(n));
        assign.insert(simplex_id(&[0, 1]), edge);
        let g = CellularGroupoid { complex, ambient_rank: n, assign, vertex_coordinates: None };
        require_valid(&g)?;
        Ok(g)
    }

    /// Segment groupoid over `Δ^1` with prescribed vertex and edge groups.
    pub fn segment(
        h0: TorusSubgroup,
        h1: TorusSubgroup,
        h01: TorusSubgroup,
    ) -> Result<CellularGroupoid> {
        let n = h0.ambient_rank();
        let complex = simplicial_complex(&[&[0, 1]]);
        let mut assign = BTreeMap::new();
        assign.insert("0".to_string(), h0);
        assign.insert("1".to_string(), h1);
        assign.insert(simplex_id(&[0, 1]), h01);
        let g = CellularGroupoid { complex, ambient_rank: n, assign, vertex_coordinates: None };
        require_valid(&g)?;
        Ok(g)
    }

    /// The Hirzebruch-surface groupoid over a square with its interior
    /// 2-cell: `T^2` at the vertices, the three circle subgroups on the
    /// edges, trivial group on the 2-cell. Vertex coordinates are pinned to
    /// `(0,0), (2,0), (1,1), (0,1)`; any lattice-equivalent choice of the
    /// moment polytope is equally valid.
    pub fn hirzebruch() -> Result<CellularGroupoid> {
        let vertex = |id: &str| Cell {
            id: id.into(),
            dim: 0,
            faces: BTreeSet::new(),
            vertices: None,
        };
        let edge = |id: &str, a: &str, b: &str| Cell {
            id: id.into(),
            dim: 1,
            faces: [a, b].iter().map(|s| s.to_string()).collect(),
            vertices: None,
        };
        let face = Cell {
            id: "f".into(),
            dim: 2,
            faces: ["v1", "v2", "v3", "v4", "e12", "e23", "e34", "e14"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            vertices: None,
        };
        let complex = CwComplex::from_parts(
            vec![
                vertex("v1"),
                vertex("v2"),
                vertex("v3"),
                vertex("v4"),
                edge("e12", "v1", "v2"),
                edge("e23", "v2", "v3"),
                edge("e34", "v3", "v4"),
                edge("e14", "v1", "v4"),
                face,
            ],
            false,
        );
        let ker = |rows: &[[i64; 2]]| {
            let data: Vec<Vec<BigInt>> =
                rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            subgroup_from_characters(2, &IntMatrix::from_rows(2, data))
        };
        let mut assign = BTreeMap::new();
        for v in ["v1", "v2", "v3", "v4"] {
            assign.insert(v.to_string(), TorusSubgroup::full(2));
        }
        // I_12 = I_34 = 1 x S^1, I_14 = S^1 x 1, I_23 = diagonal.
        assign.insert("e12".to_string(), ker(&[[1, 0]])?);
        assign.insert("e34".to_string(), ker(&[[1, 0]])?);
        assign.insert("e14".to_string(), ker(&[[0, 1]])?);
        assign.insert("e23".to_string(), ker(&[[1, -1]])?);
        assign.insert("f".to_string(), TorusSubgroup::trivial(2));
        let coords: BTreeMap<String, Vec<BigInt>> = [
            ("v1", [0i64, 0]),
            ("v2", [2, 0]),
            ("v3", [1, 1]),
            ("v4", [0, 1]),
        ]
        .iter()
        .map(|(id, c)| (id.to_string(), c.iter().map(|&x| BigInt::from(x)).collect()))
        .collect();
        let g = CellularGroupoid {
            complex,
            ambient_rank: 2,
            assign,
            vertex_coordinates: Some(coords),
        };
        require_valid(&g)?;
        Ok(g)
    }

    /// The triangle groupoid on the full 2-simplex with `T^2` vertices,
    /// edge groups `1 x S^1`, `S^1 x 1` and the diagonal, and trivial group
    /// on the 2-cell. This is the groupoid of `CP^2` with the 2-torus
    /// action, the standard example where sign lifts of weight classes can
    /// fail globally.
    pub fn cp2_kappanotonto() -> Result<CellularGroupoid> {
        let complex = simplicial_complex(&[&[0, 1, 2]]);
        let ker = |row: [i64; 2]| {
            subgroup_from_characters(
                2,
                &IntMatrix::from_rows(2, vec![row.iter().map(|&x| BigInt::from(x)).collect()]),
            )
        };
        let mut assign = BTreeMap::new();
        for v in ["0", "1", "2"] {
            assign.insert(v.to_string(), TorusSubgroup::full(2));
        }
        assign.insert("0.1".to_string(), ker([1, 0])?); // I_01 = 1 x S^1
        assign.insert("0.2".to_string(), ker([0, 1])?); // I_02 = S^1 x 1
        assign.insert("1.2".to_string(), ker([1, -1])?); // I_12 = diagonal
        assign.insert("0.1.2".to_string(), TorusSubgroup::trivial(2));
        let g = CellularGroupoid { complex, ambient_rank: 2, assign, vertex_coordinates: None };
        require_valid(&g)?;
        Ok(g)
    }
}

/// JSON form:
/// `{"complex": {...}, "ambient_rank": n, "groups": {"cell-id": {"characters": [[...]]}},
///   "vertex_coordinates": {"v": [...]}?}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CellularGroupoidJson {
    pub complex: CwComplexJson,
    pub ambient_rank: usize,
    pub groups: BTreeMap<String, GroupCharsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_coordinates: Option<BTreeMap<String, Vec<JsonInt>>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupCharsJson {
    pub characters: Vec<Vec<JsonInt>>,
}

impl CellularGroupoidJson {
    pub fn into_groupoid(self) -> Result<CellularGroupoid> {
        let complex = self.complex.into_complex();
        let n = self.ambient_rank;
        let mut assign = BTreeMap::new();
        for (id, chars) in self.groups {
            let rows = crate::jsonint::unwrap_rows(chars.characters);
            for r in &rows {
                if r.len() != n {
                    return Err(GroupoidError::Builder(format!(
                        "cell {id}: character row length {} != ambient rank {n}",
                        r.len()
                    )));
                }
            }
            assign.insert(id, subgroup_from_characters(n, &IntMatrix::from_rows(n, rows))?);
        }
        let vertex_coordinates = self.vertex_coordinates.map(|m| {
            m.into_iter().map(|(k, v)| (k, crate::jsonint::unwrap_vec(v))).collect()
        });
        Ok(CellularGroupoid { complex, ambient_rank: n, assign, vertex_coordinates })
    }

    pub fn from_groupoid(g: &CellularGroupoid) -> Self {
        CellularGroupoidJson {
            complex: CwComplexJson::from_complex(&g.complex),
            ambient_rank: g.ambient_rank,
            groups: g
                .assign
                .iter()
                .map(|(id, h)| {
                    (
                        id.clone(),
                        GroupCharsJson {
                            characters: h
                                .annihilator()
                                .basis()
                                .iter_rows()
                                .map(crate::jsonint::wrap_vec)
                                .collect(),
                        },
                    )
                })
                .collect(),
            vertex_coordinates: g.vertex_coordinates.as_ref().map(|m| {
                m.iter().map(|(k, v)| (k.clone(), crate::jsonint::wrap_vec(v))).collect()
            }),
        }
    }
}
