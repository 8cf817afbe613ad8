//! Smooth Fano polytopes: exact verification, primitive relations,
//! F-moves (stellar subdivisions) and I-moves (single vertex insertion or
//! deletion), and the equivalence graphs they generate over a classified
//! catalog.
//!
//! All arithmetic is exact over the integers. The main entry points are
//! [`LatticePolytope`], the constructors in [`catalog`], the relation
//! extraction in [`primitive`], the moves in [`moves`] and the graph
//! machinery in [`classes`].

pub mod catalog;
pub mod classes;
pub mod lattice;
pub mod moves;
pub mod polytope;
pub mod primitive;

pub use catalog::{Catalog, FamilyParams, Slot};
pub use classes::{ClassReport, EquivGraph, Relation};
pub use lattice::{IntMatrix, IntVector, UnimodularMap};
pub use moves::{MoveKind, MoveRecord};
pub use polytope::{CanonicalKey, Facet, LatticePolytope, PolytopeError};
pub use primitive::{PrimitiveCollection, SimplicialCompleteFan};
