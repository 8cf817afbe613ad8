use std::collections::HashSet;

use super::{Facet, Hull, LatticePolytope, PolytopeError, Result};
use crate::lattice::{self, IntMatrix, IntVector};

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations { idx: (0..k).collect(), n, done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// The affine hyperplane `<c, x> = h` through `n` points of `Z^n`, with
/// `(c, h)` primitive, or `None` if the points are affinely dependent.
fn affine_hyperplane(points: &[&IntVector]) -> Result<Option<(IntVector, i64)>> {
    let n = points.len();
    // null vector of the n x (n+1) matrix with rows (p_i, -1), by signed
    // maximal minors
    let mut x = Vec::with_capacity(n + 1);
    let mut minor = Vec::with_capacity(n * n);
    for skip in 0..=n {
        minor.clear();
        for p in points {
            for j in 0..=n {
                if j != skip {
                    minor.push(if j == n { -1 } else { p[j] });
                }
            }
        }
        let d = lattice::determinant(&IntMatrix::new(n, n, minor.clone())?)?;
        x.push(if skip % 2 == 0 { d } else { -d });
    }
    if x.iter().all(|&v| v == 0) {
        return Ok(None);
    }
    let g = x.iter().fold(0, |g, &v| lattice::gcd(g, v));
    let h = x[n] / g;
    x.truncate(n);
    Ok(Some((IntVector::new(x.into_iter().map(|v| v / g).collect()), h)))
}

/// Brute force over `n`-subsets with exact support tests.
pub(super) fn compute(dim: usize, vertices: &[IntVector]) -> Result<Hull> {
    let m = vertices.len();
    if m < dim + 1 {
        return Err(PolytopeError::NotFullDimensional);
    }
    let mut facets: Vec<Facet> = Vec::new();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut wide: Vec<u64> = Vec::new();
    for subset in Combinations::new(m, dim) {
        let smask = super::mask_of(&subset);
        if seen.contains(&smask) || wide.iter().any(|&w| w & smask == smask) {
            continue;
        }
        let pts: Vec<&IntVector> = subset.iter().map(|&i| &vertices[i]).collect();
        let Some((mut c, mut h)) = affine_hyperplane(&pts)? else { continue };
        let mut vals = vertices.iter().map(|w| c.dot(w)).collect::<Result<Vec<_>, _>>()?;
        let above = vals.iter().any(|&v| v > h);
        let below = vals.iter().any(|&v| v < h);
        match (above, below) {
            (false, false) => return Err(PolytopeError::NotFullDimensional),
            (true, true) => continue,
            (true, false) => {
                c = c.neg()?;
                h = -h;
                vals.iter_mut().for_each(|v| *v = -*v);
            }
            (false, true) => {}
        }
        let on: Vec<usize> = (0..m).filter(|&i| vals[i] == h).collect();
        let mask = super::mask_of(&on);
        if seen.insert(mask) {
            if on.len() > dim {
                wide.push(mask);
            }
            facets.push(Facet { vertices: on, normal: c, level: h });
        }
    }
    if facets.is_empty() {
        return Err(PolytopeError::NotFullDimensional);
    }
    let covered = facets.iter().fold(0u64, |acc, f| acc | f.mask());
    if let Some(i) = (0..m).find(|&i| covered & (1 << i) == 0) {
        return Err(PolytopeError::NonVertex(i));
    }
    if !wide.is_empty() {
        // a boundary point is a vertex iff the normals of its facets have full rank
        for i in 0..m {
            let normals: Vec<IntVector> =
                facets.iter().filter(|f| f.mask() & (1 << i) != 0).map(|f| f.normal.clone()).collect();
            if lattice::rank(&IntMatrix::from_rows(&normals)?)? < dim {
                return Err(PolytopeError::NonVertex(i));
            }
        }
    }
    if facets.iter().any(|f| f.level <= 0) {
        return Err(PolytopeError::OriginNotInterior);
    }
    Ok(Hull::new(facets, dim))
}

/// Beneath-beyond step for a single new point over a smooth Fano polytope.
///
/// With no facet hyperplane through `w`, the facets of `conv(P ∪ {w})` are the
/// facets of `P` that do not see `w` plus the cones from `w` over the horizon
/// ridges; every vertex of `P` survives iff it lies on a facet not seeing `w`.
pub(super) fn smooth_extension(p: &LatticePolytope, w: &IntVector) -> Result<Option<LatticePolytope>> {
    p.require_smooth_fano()?;
    if w.dim() != p.dim() {
        return Err(PolytopeError::DimensionMismatch { index: p.num_vertices(), expected: p.dim(), found: w.dim() });
    }
    if p.vertex_index(w).is_some() || w.max_abs() > super::COORD_LIMIT || p.num_vertices() == super::MAX_VERTICES {
        return Ok(None);
    }
    let hull = p.hull()?;
    let mut visible = Vec::with_capacity(hull.facets.len());
    for f in &hull.facets {
        let l = f.normal.dot(w)?;
        if l == 1 {
            return Ok(None);
        }
        visible.push(l > 1);
    }
    if !visible.iter().any(|&v| v) {
        return Ok(None);
    }
    let keep = hull.masks.iter().zip(&visible).filter(|(_, &v)| !v).fold(0u64, |acc, (&m, _)| acc | m);
    if keep != p.all_mask() {
        return Ok(None);
    }
    let adjacency = p.adjacency()?;
    let new_index = p.num_vertices();
    let mut vertices = p.vertices().to_vec();
    vertices.push(w.clone());
    let mut facets: Vec<Facet> =
        hull.facets.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| f.clone()).collect();
    for (fi, f) in hull.facets.iter().enumerate() {
        if !visible[fi] {
            continue;
        }
        for (pos, &drop) in f.vertices.iter().enumerate() {
            if visible[adjacency[fi][pos]] {
                continue;
            }
            let mut idx: Vec<usize> = f.vertices.iter().copied().filter(|&v| v != drop).collect();
            idx.push(new_index);
            let rows: Vec<IntVector> = idx.iter().map(|&i| vertices[i].clone()).collect();
            let Some(inv) = lattice::unimodular_inverse(&IntMatrix::from_rows(&rows)?)? else {
                return Ok(None);
            };
            // rows * a = 1  =>  a = inverse * 1
            let normal = inv.mul_vec(&IntVector::new(vec![1; p.dim()]))?;
            let on_mask = super::mask_of(&idx);
            for (j, y) in vertices.iter().enumerate() {
                if on_mask & (1 << j) == 0 && normal.dot(y)? >= 1 {
                    return Ok(None);
                }
            }
            idx.sort_unstable();
            facets.push(Facet { vertices: idx, normal, level: 1 });
        }
    }
    Ok(Some(LatticePolytope::with_hull(vertices, Hull::new(facets, p.dim()))))
}
