//! Classification of split equivariant principal bundles from combinatorial
//! isotropy data.
//!
//! The crate is organised around the pipeline:
//!
//! - [`intlat`] — exact integer matrices, Hermite/Smith normal forms,
//!   canonical lattice arithmetic (the computational backbone);
//! - [`torus`] — closed subgroups of `T^n` encoded by annihilator character
//!   lattices, so subgroup operations become lattice operations;
//! - [`complex`] — regular CW-complexes with a simplicial fast path, face
//!   posets, oriented edges, skeleta and `H^2`;
//! - [`groupoid`] — cellular groupoids: monotone assignments of torus
//!   subgroups to cells, with validators and the standard example builders;
//! - [`rep_ab`] — the abelian classification engine: representation groups
//!   as kernels of edge-difference maps, GKM checks, Euler numbers, affine
//!   realization reports and the full bundle group;
//! - [`nonab`] — nonabelian corrections at the finite level: double-coset
//!   fibers, sign-lift searches and Weyl canonical forms.
//!
//! All computations are exact; there is no floating point anywhere.

pub mod complex;
pub mod groupoid;
pub mod intlat;
pub mod jsonint;
pub mod nonab;
pub mod rep_ab;
pub mod torus;
