//! Lattice polytopes with the origin in their interior.
//!
//! Unimodular equivalence is treated as *linear*: a reflexive polytope has
//! the origin as its only interior lattice point, so any lattice-affine map
//! between two of them fixes the origin. Inputs whose origin is not strictly
//! interior are rejected by the Fano-specific operations.

mod canonical;
mod embed;
mod hull;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::lattice::{self, IntMatrix, IntVector, LatticeError, UnimodularMap};

pub use canonical::CanonicalKey;

/// Vertex sets are stored as bitmasks, so a polytope holds at most this many
/// vertices. Smooth Fano `n`-polytopes have at most `3n` vertices.
pub const MAX_VERTICES: usize = 64;

/// Input coordinates are bounded so that facet normals and pairings of
/// catalog-sized polytopes stay far away from `i64` limits.
pub const COORD_LIMIT: i64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("a polytope needs at least one vertex")]
    Empty,
    #[error("vertex {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(usize),
    #[error("coordinate of vertex {0} exceeds the supported range")]
    CoordinateRange(usize),
    #[error("too many vertices ({0}); at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("points do not span a full-dimensional polytope")]
    NotFullDimensional,
    #[error("listed point {0} is not a vertex of the convex hull")]
    NonVertex(usize),
    #[error("the origin is not in the interior")]
    OriginNotInterior,
    #[error("polytope is not a smooth Fano polytope")]
    NotSmoothFano,
    #[error("polytopes have different dimensions ({0} and {1})")]
    DimensionPair(usize, usize),
}

pub type Result<T, E = PolytopeError> = std::result::Result<T, E>;

/// A facet: its vertex indices (sorted) and the primitive outer normal `a`
/// with `<a, x> <= level` on the polytope, equality exactly on the facet.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: IntVector,
    pub level: i64,
}

impl Facet {
    pub fn mask(&self) -> u64 {
        mask_of(&self.vertices)
    }
}

pub fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

#[derive(Clone, Debug)]
pub(crate) struct Hull {
    pub facets: Vec<Facet>,
    pub masks: Vec<u64>,
    pub simplicial: bool,
}

impl Hull {
    pub(crate) fn new(mut facets: Vec<Facet>, dim: usize) -> Hull {
        facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        let masks = facets.iter().map(Facet::mask).collect();
        let simplicial = facets.iter().all(|f| f.vertices.len() == dim);
        Hull { facets, masks, simplicial }
    }
}

/// A full-dimensional lattice polytope given by its vertex list.
///
/// The facet structure is computed on first use and cached; the cache is
/// filled at most once even under concurrent access.
#[derive(Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<IntVector>,
    hull: OnceLock<Result<Hull>>,
    // facet index -> for each position i in the facet, the facet across the
    // ridge obtained by dropping that vertex
    adjacency: OnceLock<Vec<Vec<usize>>>,
}

impl LatticePolytope {
    pub fn new(vertices: Vec<IntVector>) -> Result<Self> {
        let dim = vertices.first().ok_or(PolytopeError::Empty)?.dim();
        if dim == 0 {
            return Err(PolytopeError::Empty);
        }
        if vertices.len() > MAX_VERTICES {
            return Err(PolytopeError::TooManyVertices(vertices.len()));
        }
        let mut seen = HashSet::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.dim() != dim {
                return Err(PolytopeError::DimensionMismatch { index: i, expected: dim, found: v.dim() });
            }
            if v.max_abs() > COORD_LIMIT {
                return Err(PolytopeError::CoordinateRange(i));
            }
            if !seen.insert(v) {
                return Err(PolytopeError::DuplicateVertex(i));
            }
        }
        Ok(LatticePolytope { dim, vertices, hull: OnceLock::new(), adjacency: OnceLock::new() })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| IntVector::new(r.to_vec())).collect())
    }

    /// Builds a polytope whose facets are already known to be correct.
    pub(crate) fn with_hull(vertices: Vec<IntVector>, hull: Hull) -> Self {
        let dim = vertices[0].dim();
        let cell = OnceLock::new();
        let _ = cell.set(Ok(hull));
        LatticePolytope { dim, vertices, hull: cell, adjacency: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &IntVector {
        &self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, v: &IntVector) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }

    pub fn all_mask(&self) -> u64 {
        if self.vertices.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.vertices.len()) - 1
        }
    }

    pub(crate) fn hull(&self) -> Result<&Hull> {
        self.hull.get_or_init(|| hull::compute(self.dim, &self.vertices)).as_ref().map_err(Clone::clone)
    }

    /// All facets, each with its primitive supporting normal.
    pub fn facets(&self) -> Result<&[Facet]> {
        Ok(&self.hull()?.facets)
    }

    pub fn facet_masks(&self) -> Result<&[u64]> {
        Ok(&self.hull()?.masks)
    }

    pub fn is_simplicial(&self) -> bool {
        self.hull().is_ok_and(|h| h.simplicial)
    }

    /// Every facet lies on a hyperplane `<a, x> = 1` with integral `a`.
    pub fn is_reflexive(&self) -> bool {
        self.hull().is_ok_and(|h| h.facets.iter().all(|f| f.level == 1))
    }

    /// Origin interior, simplicial, and each facet's vertices form a basis of
    /// `Z^n`.
    pub fn is_smooth_fano(&self) -> bool {
        let Ok(h) = self.hull() else { return false };
        h.simplicial
            && h.facets.iter().all(|f| {
                let rows: Vec<IntVector> = f.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
                lattice::is_unimodular_basis(&rows).unwrap_or(false)
            })
    }

    pub fn require_smooth_fano(&self) -> Result<()> {
        match self.hull() {
            Err(e) => Err(e),
            Ok(_) if self.is_smooth_fano() => Ok(()),
            Ok(_) => Err(PolytopeError::NotSmoothFano),
        }
    }

    /// Some facet `F` has `-F` as a facet too.
    pub fn is_pseudo_symmetric(&self) -> bool {
        let Ok(h) = self.hull() else { return false };
        let index: HashMap<&IntVector, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let negated: Vec<Option<usize>> =
            self.vertices.iter().map(|v| v.neg().ok().and_then(|n| index.get(&n).copied())).collect();
        let masks: HashSet<u64> = h.masks.iter().copied().collect();
        h.facets.iter().any(|f| {
            f.vertices
                .iter()
                .map(|&i| negated[i])
                .collect::<Option<Vec<_>>>()
                .is_some_and(|neg| masks.contains(&mask_of(&neg)))
        })
    }

    /// `s` is contained in the vertex set of some facet.
    pub fn is_face(&self, s: u64) -> Result<bool> {
        Ok(self.hull()?.masks.iter().any(|&m| m & s == s))
    }

    /// Every nonempty face, as vertex masks, in increasing numeric order.
    /// Only meaningful for simplicial polytopes, where faces are exactly the
    /// subsets of facets.
    pub fn proper_faces(&self) -> Result<Vec<u64>> {
        let mut faces = HashSet::new();
        for &m in &self.hull()?.masks {
            // iterate nonempty submasks of m
            let mut s = m;
            while s != 0 {
                faces.insert(s);
                s = (s - 1) & m;
            }
        }
        let mut out: Vec<u64> = faces.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    pub(crate) fn adjacency(&self) -> Result<&[Vec<usize>]> {
        let h = self.hull()?;
        Ok(self.adjacency.get_or_init(|| {
            let mut ridges: HashMap<u64, Vec<usize>> = HashMap::new();
            for (fi, f) in h.facets.iter().enumerate() {
                for &v in &f.vertices {
                    ridges.entry(h.masks[fi] & !(1 << v)).or_default().push(fi);
                }
            }
            h.facets
                .iter()
                .enumerate()
                .map(|(fi, f)| {
                    f.vertices
                        .iter()
                        .map(|&v| {
                            let r = &ridges[&(h.masks[fi] & !(1 << v))];
                            r.iter().copied().find(|&g| g != fi).unwrap_or(fi)
                        })
                        .collect()
                })
                .collect()
        }))
    }

    /// Inverse of the basis formed by the vertices of `facet` (rows in facet
    /// order); coordinates of `x` in that basis are `x^T * inverse`.
    pub fn facet_inverse(&self, facet: &Facet) -> Result<IntMatrix> {
        let rows: Vec<IntVector> = facet.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
        lattice::unimodular_inverse(&IntMatrix::from_rows(&rows)?)?.ok_or(PolytopeError::NotSmoothFano)
    }

    /// Image of the polytope under a unimodular map (vertex order kept).
    pub fn transformed(&self, u: &UnimodularMap) -> Result<LatticePolytope> {
        if u.dim() != self.dim {
            return Err(PolytopeError::DimensionPair(u.dim(), self.dim));
        }
        let vs = self.vertices.iter().map(|v| u.apply(v)).collect::<Result<Vec<_>, _>>()?;
        LatticePolytope::new(vs)
    }

    /// Same polytope with the vertex list reordered: vertex `i` of the result
    /// is vertex `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<LatticePolytope> {
        LatticePolytope::new(order.iter().map(|&i| self.vertices[i].clone()).collect())
    }

    /// `conv(V \ {v_i})`, recomputed from scratch.
    pub fn without_vertex(&self, i: usize) -> Result<LatticePolytope> {
        let vs = self.vertices.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
        LatticePolytope::new(vs)
    }

    /// `conv(V ∪ {w})` for a smooth Fano `self`, returned only when it is
    /// smooth Fano with vertex set exactly `V ∪ {w}` (`w` appended last).
    pub fn smooth_extension(&self, w: &IntVector) -> Result<Option<LatticePolytope>> {
        hull::smooth_extension(self, w)
    }

    pub fn canonical_form(&self) -> Result<CanonicalKey> {
        canonical::canonical_form(self)
    }

    /// The representative of the equivalence class encoded by the key.
    pub fn canonical_representative(&self) -> Result<LatticePolytope> {
        self.canonical_form()?.to_polytope()
    }

    pub fn are_unimodularly_equivalent(&self, other: &LatticePolytope) -> Result<bool> {
        if self.dim != other.dim {
            return Err(PolytopeError::DimensionPair(self.dim, other.dim));
        }
        if self.num_vertices() != other.num_vertices() {
            self.require_smooth_fano()?;
            other.require_smooth_fano()?;
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// A unimodular `u` with `u(V(self)) ⊆ V(other)`, if one exists.
    pub fn embed_subset(&self, other: &LatticePolytope) -> Result<Option<UnimodularMap>> {
        embed::embed_subset(self, other)
    }

    /// Free sum `P ⊕ Q = conv((P, 0) ∪ (0, Q))`.
    pub fn free_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        let (d, e) = (self.dim, other.dim);
        let mut vs = Vec::with_capacity(self.num_vertices() + other.num_vertices());
        for v in &self.vertices {
            let mut x = v.to_vec();
            x.resize(d + e, 0);
            vs.push(IntVector::new(x));
        }
        for v in &other.vertices {
            let mut x = vec![0; d];
            x.extend_from_slice(v);
            vs.push(IntVector::new(x));
        }
        LatticePolytope::new(vs)
    }
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticePolytope(dim={}, {:?})", self.dim, self.vertices)
    }
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

#[cfg(test)]
mod tests;
