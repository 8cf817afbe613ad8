use std::collections::HashSet;

use super::{LatticePolytope, PolytopeError, Result};
use crate::lattice::{self, IntMatrix, IntVector, UnimodularMap};

/// Searches for `u` with `u(V(p)) ⊆ V(q)`.
///
/// The first facet of `p` is a lattice basis, so `u` is determined by the
/// images of its vertices. Images are assigned one basis vertex at a time;
/// as soon as every basis coordinate a vertex of `p` uses has an image, that
/// vertex's image is checked against `V(q)`.
pub(super) fn embed_subset(p: &LatticePolytope, q: &LatticePolytope) -> Result<Option<UnimodularMap>> {
    if p.dim() != q.dim() {
        return Err(PolytopeError::DimensionPair(p.dim(), q.dim()));
    }
    p.require_smooth_fano()?;
    let n = p.dim();
    if p.num_vertices() > q.num_vertices() {
        return Ok(None);
    }
    let probe = &p.facets()?[0];
    let inv = p.facet_inverse(probe)?;
    let coords: Vec<IntVector> = p.vertices().iter().map(|v| inv.vec_mul(v)).collect::<Result<_, _>>()?;
    // vertices grouped by the last basis slot they depend on
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in coords.iter().enumerate() {
        if let Some(last) = (0..n).rev().find(|&s| c[s] != 0) {
            ready[last].push(i);
        }
    }
    let targets: HashSet<&IntVector> = q.vertices().iter().collect();
    let mut images: Vec<usize> = Vec::with_capacity(n);
    let found = search(q, &coords, &ready, &targets, &mut images)?;
    let Some(images) = found else { return Ok(None) };

    // u = (B^{-1} Q)^T where Q has rows q_{images[j]}
    let qrows: Vec<IntVector> = images.iter().map(|&j| q.vertex(j).clone()).collect();
    let u = inv.mul(&IntMatrix::from_rows(&qrows)?)?.transpose();
    Ok(Some(UnimodularMap::new(u)?))
}

fn search(
    q: &LatticePolytope,
    coords: &[IntVector],
    ready: &[Vec<usize>],
    targets: &HashSet<&IntVector>,
    images: &mut Vec<usize>,
) -> Result<Option<Vec<usize>>> {
    let n = q.dim();
    let slot = images.len();
    if slot == n {
        let rows: Vec<IntVector> = images.iter().map(|&j| q.vertex(j).clone()).collect();
        return Ok(lattice::is_unimodular_basis(&rows)?.then(|| images.clone()));
    }
    for j in 0..q.num_vertices() {
        if images.contains(&j) {
            continue;
        }
        images.push(j);
        let mut ok = true;
        for &x in &ready[slot] {
            let mut img = IntVector::zeros(n);
            for (s, &t) in images.iter().enumerate() {
                img = img.checked_add(&q.vertex(t).checked_scale(coords[x][s])?)?;
            }
            if !targets.contains(&img) {
                ok = false;
                break;
            }
        }
        if ok {
            if let Some(found) = search(q, coords, ready, targets, images)? {
                return Ok(Some(found));
            }
        }
        images.pop();
    }
    Ok(None)
}
