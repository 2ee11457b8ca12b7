//! Closed subgroups of the torus `T^n`, encoded by the lattice of characters
//! that vanish on them. Pontryagin duality turns every subgroup operation
//! into a lattice operation and reverses inclusions: the full torus has the
//! empty annihilator, the trivial subgroup has annihilator `Z^n`.

use crate::intlat::{
    self, hnf, lattice_intersect, lattice_member, lattice_sum, quotient_structure, IntMatrix,
    LatticeBasis, QuotientStructure,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("ambient rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("character row has length {got}, ambient rank is {expected}")]
    CharacterLength { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] intlat::IntLatError),
}

pub type Result<T> = std::result::Result<T, TorusError>;

/// A closed subgroup `H` of `T^n`, stored as the canonical HNF basis of its
/// annihilator lattice `{chi in Z^n : chi(H) = 1}`. Equality of values is
/// equality of subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSubgroup {
    ambient_rank: usize,
    ann: LatticeBasis,
}

/// Structure report: dimension, component group, and the full character
/// group `Z^n / ann` with its projection evaluator.
#[derive(Debug, Clone)]
pub struct TorusStructure {
    pub dim: usize,
    pub pi0: Vec<BigInt>,
    pub character_group: QuotientStructure,
}

impl TorusSubgroup {
    pub fn full(ambient_rank: usize) -> Self {
        TorusSubgroup { ambient_rank, ann: LatticeBasis::empty(ambient_rank) }
    }

    pub fn trivial(ambient_rank: usize) -> Self {
        TorusSubgroup { ambient_rank, ann: LatticeBasis::full(ambient_rank) }
    }

    pub fn from_annihilator(ann: LatticeBasis) -> Self {
        TorusSubgroup { ambient_rank: ann.ambient_dim(), ann }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn annihilator(&self) -> &LatticeBasis {
        &self.ann
    }

    pub fn is_full(&self) -> bool {
        self.ann.rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.ann.is_full()
    }

    pub fn dim(&self) -> usize {
        self.ambient_rank - self.ann.rank()
    }
}

/// The subgroup `⋂ ker chi` over the rows of `chars`; its annihilator is the
/// lattice those rows generate.
pub fn subgroup_from_characters(n: usize, chars: &IntMatrix) -> Result<TorusSubgroup> {
    if chars.cols() != n && chars.rows() > 0 {
        return Err(TorusError::CharacterLength { expected: n, got: chars.cols() });
    }
    let ann = if chars.rows() == 0 { LatticeBasis::empty(n) } else { hnf(chars) };
    Ok(TorusSubgroup { ambient_rank: n, ann })
}

/// True iff `K ⊆ H`. By duality this is `ann(H) ⊆ ann(K)`, decided row by
/// row with exact lattice membership.
pub fn contains(h: &TorusSubgroup, k: &TorusSubgroup) -> Result<bool> {
    check_ranks(h, k)?;
    for row in h.ann.basis().iter_rows() {
        if !lattice_member(row, &k.ann)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `H ∩ K`: annihilators add.
pub fn intersect(h: &TorusSubgroup, k: &TorusSubgroup) -> Result<TorusSubgroup> {
    check_ranks(h, k)?;
    Ok(TorusSubgroup { ambient_rank: h.ambient_rank, ann: lattice_sum(&h.ann, &k.ann)? })
}

/// The closed subgroup generated by `H ∪ K`: annihilators intersect.
pub fn generated_join(h: &TorusSubgroup, k: &TorusSubgroup) -> Result<TorusSubgroup> {
    check_ranks(h, k)?;
    Ok(TorusSubgroup { ambient_rank: h.ambient_rank, ann: lattice_intersect(&h.ann, &k.ann)? })
}

/// Dimension, `pi_0` invariant factors, and the character group of `H`.
pub fn structure(h: &TorusSubgroup) -> TorusStructure {
    let q = quotient_structure(&h.ann);
    TorusStructure {
        dim: h.dim(),
        pi0: q.invariant_factors.clone(),
        character_group: q,
    }
}

fn check_ranks(h: &TorusSubgroup, k: &TorusSubgroup) -> Result<()> {
    if h.ambient_rank != k.ambient_rank {
        return Err(TorusError::RankMismatch { left: h.ambient_rank, right: k.ambient_rank });
    }
    Ok(())
}

/// JSON form: `{"ambient_rank": n, "characters": [[...], ...]}`. The rows
/// are any generating set for the annihilator; canonicalisation happens on
/// load.
#[derive(Debug, Serialize, Deserialize)]
pub struct TorusSubgroupJson {
    pub ambient_rank: usize,
    pub characters: Vec<Vec<crate::jsonint::JsonInt>>,
}

impl TorusSubgroupJson {
    pub fn into_subgroup(self) -> Result<TorusSubgroup> {
        let rows = crate::jsonint::unwrap_rows(self.characters);
        for r in &rows {
            if r.len() != self.ambient_rank {
                return Err(TorusError::CharacterLength {
                    expected: self.ambient_rank,
                    got: r.len(),
                });
            }
        }
        let m = IntMatrix::from_rows(self.ambient_rank, rows);
        subgroup_from_characters(self.ambient_rank, &m)
    }

    pub fn from_subgroup(h: &TorusSubgroup) -> Self {
        TorusSubgroupJson {
            ambient_rank: h.ambient_rank(),
            characters: h
                .annihilator()
                .basis()
                .iter_rows()
                .map(crate::jsonint::wrap_vec)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn chars(n: usize, rows: &[&[i64]]) -> TorusSubgroup {
        let data: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        subgroup_from_characters(n, &IntMatrix::from_rows(n, data)).unwrap()
    }

    #[test]
    fn diagonal_circle() {
        let d = chars(2, &[&[1, -1]]);
        assert_eq!(d.dim(), 1);
        assert!(structure(&d).pi0.is_empty());
    }

    #[test]
    fn empty_character_set_is_full_torus() {
        let t2 = subgroup_from_characters(2, &IntMatrix::zero(0, 2)).unwrap();
        assert!(t2.is_full());
        assert_eq!(t2, TorusSubgroup::full(2));
    }

    #[test]
    fn order_two_subgroup_of_circle() {
        // Brute force: t with t^2 = 1 in S^1 = R/Z are {0, 1/2}, the order-2
        // subgroup; its annihilator is 2Z and pi0 = Z/2.
        let h = chars(1, &[&[2]]);
        assert_eq!(h.dim(), 0);
        assert_eq!(structure(&h).pi0, vec![BigInt::from(2)]);
    }

    #[test]
    fn containment_examples() {
        let full = TorusSubgroup::full(2);
        let diagonal = chars(2, &[&[1, -1]]);
        let one_cross = chars(2, &[&[1, 0]]); // ker(chi_1) = 1 x S^1
        assert!(contains(&full, &diagonal).unwrap());
        // ann Z(1,-1) is inside hnf([[1,-1],[1,0]]) = Z^2.
        let smaller = chars(2, &[&[1, -1], &[1, 0]]);
        assert!(contains(&diagonal, &smaller).unwrap());
        // (1,0) is not a multiple of (1,-1).
        assert!(!contains(&diagonal, &one_cross).unwrap());
        assert!(contains(&full, &TorusSubgroup::full(3)).is_err());
    }

    #[test]
    fn join_and_intersect_examples() {
        let diagonal = chars(2, &[&[1, -1]]);
        let one_cross = chars(2, &[&[1, 0]]);
        let s1_cross = chars(2, &[&[0, 1]]);
        // Z(1,-1) ∩ Z(1,0) = 0, so the join is the full torus.
        assert!(generated_join(&diagonal, &one_cross).unwrap().is_full());
        let h = chars(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(intersect(&h, &TorusSubgroup::full(2)).unwrap(), h);
        // ann = Z(1,0) + Z(0,1) = Z^2: trivial subgroup.
        assert!(intersect(&one_cross, &s1_cross).unwrap().is_trivial());
    }

    #[test]
    fn structure_examples() {
        let h = chars(2, &[&[2, 0], &[0, 3]]);
        let s = structure(&h);
        assert_eq!(s.dim, 0);
        assert_eq!(s.pi0, vec![BigInt::from(6)]);

        let s = structure(&TorusSubgroup::full(3));
        assert_eq!(s.dim, 3);
        assert!(s.pi0.is_empty());

        let s = structure(&chars(2, &[&[1, 0]]));
        assert_eq!(s.dim, 1);
        assert!(s.pi0.is_empty());
    }

    #[test]
    fn dim_plus_ann_rank_is_ambient() {
        for rows in [vec![], vec![vec![1i64, 2]], vec![vec![2, 0], vec![0, 3]]] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let h = chars(2, &refs);
            assert_eq!(structure(&h).dim + h.annihilator().rank(), 2);
        }
    }

    /// Exact brute-force cross check of containment on torsion points.
    ///
    /// For annihilator entries bounded by 2 in `T^2`, every component group
    /// exponent divides 2 and every pairing of an annihilator character with
    /// a cocharacter generator has absolute value at most 8. Hence `K ⊆ H`
    /// holds iff every point of `K` with coordinates in (1/24)Z lies in `H`:
    /// the torsion part is captured because 2 | 24, and the identity
    /// component because a pairing divisible by 24 must vanish.
    #[test]
    fn containment_matches_torsion_points() {
        const D: i64 = 24;
        let in_subgroup = |h: &TorusSubgroup, a: i64, b: i64| -> bool {
            h.annihilator().basis().iter_rows().all(|row| {
                let pairing = &row[0] * BigInt::from(a) + &row[1] * BigInt::from(b);
                (pairing % BigInt::from(D)).is_zero()
            })
        };
        let mut cases = Vec::new();
        for e in [-2i64, -1, 0, 1, 2] {
            for f in [-2i64, 0, 1, 2] {
                cases.push(chars(2, &[&[e, f]]));
            }
        }
        cases.push(TorusSubgroup::full(2));
        cases.push(TorusSubgroup::trivial(2));
        for h in &cases {
            for k in &cases {
                let expected = (0..D).all(|a| {
                    (0..D).all(|b| !in_subgroup(k, a, b) || in_subgroup(h, a, b))
                });
                assert_eq!(
                    contains(h, k).unwrap(),
                    expected,
                    "containment mismatch: H ann {:?} K ann {:?}",
                    h.annihilator(),
                    k.annihilator()
                );
            }
        }
    }

    #[test]
    fn join_contains_inputs_and_intersection_is_contained() {
        let cases = [
            chars(2, &[&[1, -1]]),
            chars(2, &[&[2, 0]]),
            chars(2, &[&[0, 1], &[2, 0]]),
            TorusSubgroup::full(2),
            TorusSubgroup::trivial(2),
        ];
        for h in &cases {
            for k in &cases {
                let j = generated_join(h, k).unwrap();
                let i = intersect(h, k).unwrap();
                assert!(contains(&j, h).unwrap());
                assert!(contains(&j, k).unwrap());
                assert!(contains(h, &i).unwrap());
                assert!(contains(k, &i).unwrap());
            }
        }
    }

    #[test]
    fn json_round_trip_canonicalises() {
        let json = r#"{"ambient_rank": 2, "characters": [[2, 4], [4, 6]]}"#;
        let parsed: TorusSubgroupJson = serde_json::from_str(json).unwrap();
        let h = parsed.into_subgroup().unwrap();
        assert_eq!(h, chars(2, &[&[2, 0], &[0, 2]]));
        let back = TorusSubgroupJson::from_subgroup(&h);
        let h2 = serde_json::from_str::<TorusSubgroupJson>(&serde_json::to_string(&back).unwrap())
            .unwrap()
            .into_subgroup()
            .unwrap();
        assert_eq!(h, h2);
    }
}
