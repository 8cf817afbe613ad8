//! F-moves (stellar subdivision at a face and its inverse) and I-moves
//! (adding or deleting one vertex while staying smooth Fano).
//!
//! The removal half of an F-move is verified by exhibiting the inverse
//! subdivision: `P -> P \ {w}` is accepted only if subdividing some face of
//! the smaller polytope at `w` gives back `P`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

mod search;

use crate::catalog::{Catalog, CatalogError};
use crate::lattice::IntVector;
use crate::polytope::{self, CanonicalKey, LatticePolytope, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "F-add")]
    FAdd,
    #[serde(rename = "F-remove")]
    FRemove,
    #[serde(rename = "I-add")]
    IAdd,
    #[serde(rename = "I-remove")]
    IRemove,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::FAdd => "F-add",
            MoveKind::FRemove => "F-remove",
            MoveKind::IAdd => "I-add",
            MoveKind::IRemove => "I-remove",
        }
    }
}

/// Audit record of one move. For `F-add` the face is given by vertex indices
/// of the source polytope; for `F-remove` by vertex indices of the result.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub witness: IntVector,
    pub face: Option<Vec<usize>>,
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} w={}", self.kind.as_str(), self.witness)?;
        if let Some(face) = &self.face {
            let parts: Vec<String> = face.iter().map(|i| i.to_string()).collect();
            write!(f, " F={{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed move record: {0}")]
pub struct ParseMoveError(String);

impl FromStr for MoveRecord {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseMoveError> {
        let err = || ParseMoveError(s.to_string());
        let mut parts = s.split_whitespace();
        let kind = match parts.next().ok_or_else(err)? {
            "F-add" => MoveKind::FAdd,
            "F-remove" => MoveKind::FRemove,
            "I-add" => MoveKind::IAdd,
            "I-remove" => MoveKind::IRemove,
            _ => return Err(err()),
        };
        let w = parts.next().and_then(|t| t.strip_prefix("w=(")).and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        let witness = w.split(',').map(|x| x.parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>();
        let witness = IntVector::new(witness.map_err(|_| err())?);
        let face = match parts.next() {
            None => None,
            Some(t) => {
                let inner = t.strip_prefix("F={").and_then(|t| t.strip_suffix('}')).ok_or_else(err)?;
                let idx = if inner.is_empty() {
                    Ok(Vec::new())
                } else {
                    inner.split(',').map(|x| x.parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>()
                };
                Some(idx.map_err(|_| err())?)
            }
        };
        if parts.next().is_some() {
            return Err(err());
        }
        Ok(MoveRecord { kind, witness, face })
    }
}

pub type Neighbor = (LatticePolytope, MoveRecord);

fn face_sum(p: &LatticePolytope, face: &[usize]) -> Result<IntVector> {
    Ok(IntVector::sum(p.dim(), face.iter().map(|&i| p.vertex(i)))?)
}

/// Stellar subdivision of `p` at `face` with `w = Σ face`.
///
/// Accepted only if `conv(V ∪ {w})` is smooth Fano with exactly those
/// vertices and its facets through `w` are precisely
/// `{w} ∪ (F' \ {v})` for facets `F' ⊇ face` and `v ∈ face`.
pub fn stellar_add(p: &LatticePolytope, face: &[usize]) -> Result<Option<Neighbor>> {
    p.require_smooth_fano()?;
    if face.is_empty() || face.iter().any(|&i| i >= p.num_vertices()) {
        return Ok(None);
    }
    let fmask = polytope::mask_of(face);
    if !p.is_face(fmask)? {
        return Ok(None);
    }
    let w = face_sum(p, face)?;
    let Some(q) = p.smooth_extension(&w)? else { return Ok(None) };
    let wbit = 1u64 << p.num_vertices();
    let mut expected: Vec<u64> = Vec::new();
    for &m in p.facet_masks()? {
        if m & fmask == fmask {
            for &v in face {
                expected.push((m & !(1 << v)) | wbit);
            }
        }
    }
    let mut actual: Vec<u64> = q.facet_masks()?.iter().copied().filter(|m| m & wbit != 0).collect();
    expected.sort_unstable();
    expected.dedup();
    actual.sort_unstable();
    if expected != actual {
        return Ok(None);
    }
    let mut face = face.to_vec();
    face.sort_unstable();
    let record = MoveRecord { kind: MoveKind::FAdd, witness: w, face: Some(face) };
    Ok(Some((q, record)))
}

/// Inverse stellar subdivision removing vertex `w`.
pub fn stellar_remove(p: &LatticePolytope, w: usize) -> Result<Option<Neighbor>> {
    p.require_smooth_fano()?;
    let Some((q, _)) = i_remove(p, w)? else { return Ok(None) };
    let target = p.vertex(w);
    for fmask in q.proper_faces()? {
        let face = polytope::indices_of(fmask);
        if face.len() < 2 || &face_sum(&q, &face)? != target {
            continue;
        }
        if stellar_add(&q, &face)?.is_some() {
            let record = MoveRecord { kind: MoveKind::FRemove, witness: target.clone(), face: Some(face) };
            return Ok(Some((q, record)));
        }
    }
    Ok(None)
}

/// `conv(V ∪ {w})` when it is smooth Fano with vertex set exactly `V ∪ {w}`.
pub fn i_add(p: &LatticePolytope, w: &IntVector) -> Result<Option<Neighbor>> {
    Ok(p.smooth_extension(w)?.map(|q| (q, MoveRecord { kind: MoveKind::IAdd, witness: w.clone(), face: None })))
}

/// `conv(V \ {v})` when it is smooth Fano with vertex set exactly `V \ {v}`.
pub fn i_remove(p: &LatticePolytope, v: usize) -> Result<Option<Neighbor>> {
    if v >= p.num_vertices() || p.num_vertices() <= p.dim() + 1 {
        return Ok(None);
    }
    let q = p.without_vertex(v)?;
    if !q.is_smooth_fano() {
        return Ok(None);
    }
    let record = MoveRecord { kind: MoveKind::IRemove, witness: p.vertex(v).clone(), face: None };
    Ok(Some((q, record)))
}

fn dedup_by_key(found: Vec<Neighbor>) -> Result<Vec<Neighbor>> {
    let mut by_key: BTreeMap<CanonicalKey, Neighbor> = BTreeMap::new();
    for (q, r) in found {
        by_key.entry(q.canonical_form()?).or_insert((q, r));
    }
    Ok(by_key.into_values().collect())
}

/// Every successful F-move from `p`, one per resulting equivalence class,
/// ordered by canonical key.
pub fn f_neighbors(p: &LatticePolytope) -> Result<Vec<Neighbor>> {
    p.require_smooth_fano()?;
    let mut found = Vec::new();
    for fmask in p.proper_faces()? {
        if let Some(n) = stellar_add(p, &polytope::indices_of(fmask))? {
            found.push(n);
        }
    }
    for v in 0..p.num_vertices() {
        if let Some(n) = stellar_remove(p, v)? {
            found.push(n);
        }
    }
    dedup_by_key(found)
}

/// Every successful vertex deletion, in vertex order.
pub fn i_removal_neighbors(p: &LatticePolytope) -> Result<Vec<Neighbor>> {
    (0..p.num_vertices()).filter_map(|v| i_remove(p, v).transpose()).collect()
}

/// Every successful vertex insertion of a primitive point in `[-bound, bound]^n`.
///
/// This is a semi-decision: points outside the box are never examined.
pub fn i_addition_search(p: &LatticePolytope, bound: i64) -> Result<Vec<Neighbor>> {
    i_addition_shell(p, 0, bound)
}

/// Like [`i_addition_search`] but only over points whose largest absolute
/// coordinate lies in `(inner, outer]`.
pub fn i_addition_shell(p: &LatticePolytope, inner: i64, outer: i64) -> Result<Vec<Neighbor>> {
    let points = search::insertion_points(p, inner, outer)?;
    points
        .into_iter()
        .map(|w| {
            let q = p.smooth_extension(&w)?.expect("box search only reports valid insertions");
            Ok((q, MoveRecord { kind: MoveKind::IAdd, witness: w, face: None }))
        })
        .collect()
}

/// Replays a recorded move on `p`.
pub fn apply(p: &LatticePolytope, record: &MoveRecord) -> Result<Option<LatticePolytope>> {
    let index = || p.vertex_index(&record.witness);
    let out = match record.kind {
        MoveKind::FAdd => match &record.face {
            Some(face) => stellar_add(p, face)?.filter(|(_, r)| r.witness == record.witness),
            None => None,
        },
        MoveKind::FRemove => match index() {
            Some(i) => stellar_remove(p, i)?,
            None => None,
        },
        MoveKind::IAdd => i_add(p, &record.witness)?,
        MoveKind::IRemove => match index() {
            Some(i) => i_remove(p, i)?,
            None => None,
        },
    };
    Ok(out.map(|(q, _)| q))
}

/// Catalog ids adjacent to `p` by one I-move, found by embedding vertex sets
/// between catalog entries whose vertex counts differ by one.
pub fn i_neighbors_in_catalog(p: &LatticePolytope, cat: &Catalog) -> Result<Vec<u64>, CatalogError> {
    let key = p.canonical_form()?;
    if cat.lookup(&key).is_none() {
        return Err(CatalogError::Missing(key.to_string()));
    }
    let m = p.num_vertices();
    let mut ids = Vec::new();
    for (i, q) in cat.entries().iter().enumerate() {
        let adjacent = if q.num_vertices() == m + 1 {
            p.embed_subset(q)?.is_some()
        } else if q.num_vertices() + 1 == m {
            q.embed_subset(p)?.is_some()
        } else {
            false
        };
        if adjacent {
            ids.push(cat.ids()[i]);
        }
    }
    ids.sort_unstable();
    Ok(ids)
}

#[cfg(test)]
mod tests;
