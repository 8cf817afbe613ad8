//! Canonical forms for smooth Fano polytopes under `GL_n(Z)` and vertex
//! relabeling.
//!
//! Every unimodular equivalence maps facets to facets, and a facet of a
//! smooth Fano polytope is a lattice basis. Writing all vertices in the
//! coordinates of an ordered facet basis therefore gives a finite family of
//! normalized vertex sets that is the same for every member of a class; the
//! key is its lexicographic minimum. Vertex colors from refining the
//! vertex-facet pairing matrix restrict which (facet, order) pairs are tried.

use std::fmt;
use std::str::FromStr;

use super::{LatticePolytope, PolytopeError, Result};
use crate::lattice::IntVector;

/// Identifier of a unimodular equivalence class: dimension, vertex count and
/// the sorted vertex coordinates in the minimizing facet basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<i64>);

impl CanonicalKey {
    pub fn dim(&self) -> usize {
        self.0[0] as usize
    }

    pub fn num_vertices(&self) -> usize {
        self.0[1] as usize
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Order-preserving byte encoding (sign bit flipped, big endian).
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|&x| ((x as u64) ^ (1 << 63)).to_be_bytes()).collect()
    }

    pub fn vertex_rows(&self) -> impl Iterator<Item = &[i64]> {
        self.0[2..].chunks(self.dim())
    }

    pub fn to_polytope(&self) -> Result<LatticePolytope> {
        LatticePolytope::new(self.vertex_rows().map(|r| IntVector::new(r.to_vec())).collect())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.dim())?;
        for (i, row) in self.vertex_rows().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed canonical key: {0}")]
pub struct ParseKeyError(String);

impl FromStr for CanonicalKey {
    type Err = ParseKeyError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseKeyError> {
        let err = || ParseKeyError(s.to_string());
        let (d, rest) = s.split_once(':').ok_or_else(err)?;
        let dim: usize = d.parse().map_err(|_| err())?;
        let mut data = vec![dim as i64, 0];
        let mut rows = 0;
        for row in rest.split(';') {
            let vals = row.split(',').map(|x| x.parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>();
            let vals = vals.map_err(|_| err())?;
            if vals.len() != dim {
                return Err(err());
            }
            data.extend(vals);
            rows += 1;
        }
        data[1] = rows;
        Ok(CanonicalKey(data))
    }
}

fn ranks<T: Ord + Clone>(sigs: &[T]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    let r = sigs.iter().map(|s| sorted.binary_search(s).unwrap() as u32).collect();
    (r, sorted.len())
}

/// Isomorphism-invariant vertex colors from iterated refinement of the
/// pairing matrix `pairing[f][v] = <a_f, v>`.
fn refine_colors(pairing: &[Vec<i64>], m: usize) -> Vec<u32> {
    let init: Vec<Vec<i64>> = (0..m)
        .map(|v| {
            let mut col: Vec<i64> = pairing.iter().map(|row| row[v]).collect();
            col.sort_unstable();
            col
        })
        .collect();
    let (mut colors, mut classes) = ranks(&init);
    loop {
        let fsigs: Vec<Vec<(i64, u32)>> = pairing
            .iter()
            .map(|row| {
                let mut s: Vec<(i64, u32)> = (0..m).map(|v| (row[v], colors[v])).collect();
                s.sort_unstable();
                s
            })
            .collect();
        let (fcolors, _) = ranks(&fsigs);
        let vsigs: Vec<(u32, Vec<(i64, u32)>)> = (0..m)
            .map(|v| {
                let mut s: Vec<(i64, u32)> = pairing.iter().zip(&fcolors).map(|(row, &c)| (row[v], c)).collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let (next, next_classes) = ranks(&vsigs);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

/// Calls `f` with every arrangement of `slots` that permutes only within runs
/// of equal `keys` (the slots are assumed sorted by key).
fn for_each_tied_permutation(keys: &[u32], f: &mut dyn FnMut(&[usize])) {
    fn rec(keys: &[u32], pos: usize, cur: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if pos == keys.len() {
            f(cur);
            return;
        }
        for j in 0..keys.len() {
            if !used[j] && keys[j] == keys[pos] {
                used[j] = true;
                cur.push(j);
                rec(keys, pos + 1, cur, used, f);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut used = vec![false; keys.len()];
    rec(keys, 0, &mut Vec::with_capacity(keys.len()), &mut used, f);
}

pub(super) fn canonical_form(p: &LatticePolytope) -> Result<CanonicalKey> {
    p.require_smooth_fano()?;
    let n = p.dim();
    let m = p.num_vertices();
    let facets = p.facets()?;
    let pairing: Vec<Vec<i64>> = facets
        .iter()
        .map(|f| p.vertices().iter().map(|v| f.normal.dot(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let colors = refine_colors(&pairing, m);

    let facet_sig = |vs: &[usize]| {
        let mut s: Vec<u32> = vs.iter().map(|&v| colors[v]).collect();
        s.sort_unstable();
        s
    };
    let best_sig = facets.iter().map(|f| facet_sig(&f.vertices)).min().ok_or(PolytopeError::NotSmoothFano)?;

    let mut best: Option<Vec<i64>> = None;
    let mut rows: Vec<Vec<i64>> = vec![vec![0; n]; m];
    let mut flat: Vec<i64> = Vec::with_capacity(m * n);
    for f in facets {
        if facet_sig(&f.vertices) != best_sig {
            continue;
        }
        let mut basis = f.vertices.clone();
        basis.sort_by_key(|&v| (colors[v], v));
        let keys: Vec<u32> = basis.iter().map(|&v| colors[v]).collect();
        let ordered = super::Facet { vertices: basis, normal: f.normal.clone(), level: f.level };
        let inv = p.facet_inverse(&ordered)?;
        let coords: Vec<IntVector> = p.vertices().iter().map(|v| inv.vec_mul(v)).collect::<Result<_, _>>()?;
        for_each_tied_permutation(&keys, &mut |perm| {
            for (row, c) in rows.iter_mut().zip(&coords) {
                for (slot, &src) in perm.iter().enumerate() {
                    row[slot] = c[src];
                }
            }
            rows.sort_unstable();
            flat.clear();
            rows.iter().for_each(|r| flat.extend_from_slice(r));
            if best.as_ref().is_none_or(|b| flat < *b) {
                best = Some(flat.clone());
            }
        });
    }
    let mut key = vec![n as i64, m as i64];
    key.extend(best.ok_or(PolytopeError::NotSmoothFano)?);
    Ok(CanonicalKey(key))
}
