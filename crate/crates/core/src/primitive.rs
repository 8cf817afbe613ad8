//! Primitive collections and primitive relations of complete nonsingular
//! fans, and recognizers for the relation shapes of polytopes with `n + 2`
//! and `n + 3` vertices and of the I-isolated families.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{FamilyParams, Slot};
use crate::lattice::{self, IntMatrix, IntVector, LatticeError};
use crate::polytope::{self, LatticePolytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitiveError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("fan: {0}")]
    InvalidFan(String),
    #[error("fan is singular at cone {0}")]
    Singular(usize),
    #[error("no cone of the fan contains {0}")]
    Uncovered(IntVector),
    #[error("expected {expected} vertices, found {found}")]
    VertexCount { expected: usize, found: usize },
    #[error("primitive relations contradict the known classification: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = PrimitiveError> = std::result::Result<T, E>;

/// A minimal non-face `members` with its primitive relation
/// `Σ members = Σ c·rhs` (`rhs` empty for a zero sum).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimitiveCollection {
    pub members: Vec<usize>,
    pub rhs: Vec<(usize, i64)>,
    pub degree: i64,
}

impl PrimitiveCollection {
    pub fn is_zero_sum(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn mask(&self) -> u64 {
        polytope::mask_of(&self.members)
    }

    pub fn rhs_mask(&self) -> u64 {
        self.rhs.iter().fold(0, |m, &(i, _)| m | (1 << i))
    }

    pub fn coefficient(&self, v: usize) -> i64 {
        self.rhs.iter().find(|&&(i, _)| i == v).map_or(0, |&(_, c)| c)
    }
}

pub fn degree(pc: &PrimitiveCollection) -> i64 {
    pc.degree
}

/// A complete fan of simplicial cones, each spanned by a lattice basis.
#[derive(Debug, Clone)]
pub struct SimplicialCompleteFan {
    rays: Vec<IntVector>,
    cones: Vec<Vec<usize>>,
    masks: Vec<u64>,
    inverses: Vec<IntMatrix>,
}

impl SimplicialCompleteFan {
    /// Validates that the cones are nonsingular, that every ridge lies in
    /// exactly two cones on opposite sides of it, and that a generic point is
    /// covered exactly once; together these make the fan complete with
    /// cones meeting in common faces.
    pub fn new(rays: Vec<IntVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Err(PrimitiveError::InvalidFan(m));
        let n = rays.first().map_or(0, |r| r.dim());
        if n == 0 || rays.len() > polytope::MAX_VERTICES {
            return bad("need between 1 and 64 rays of positive dimension".into());
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != n || !r.is_primitive() {
                return bad(format!("ray {i} is not a primitive vector of dimension {n}"));
            }
        }
        if rays.iter().collect::<HashSet<_>>().len() != rays.len() {
            return bad("repeated ray".into());
        }
        let mut masks = Vec::with_capacity(cones.len());
        let mut inverses = Vec::with_capacity(cones.len());
        for (ci, c) in cones.iter().enumerate() {
            if c.len() != n || c.iter().any(|&i| i >= rays.len()) {
                return bad(format!("cone {ci} must list {n} valid ray indices"));
            }
            let m = polytope::mask_of(c);
            if m.count_ones() as usize != n {
                return bad(format!("cone {ci} repeats a ray"));
            }
            let rows: Vec<IntVector> = c.iter().map(|&i| rays[i].clone()).collect();
            let inv = lattice::unimodular_inverse(&IntMatrix::from_rows(&rows)?)?;
            inverses.push(inv.ok_or(PrimitiveError::Singular(ci))?);
            masks.push(m);
        }
        if masks.iter().collect::<HashSet<_>>().len() != masks.len() {
            return bad("repeated cone".into());
        }
        let covered = masks.iter().fold(0u64, |a, m| a | m);
        if covered.count_ones() as usize != rays.len() {
            return bad("some ray lies in no cone".into());
        }
        let fan = SimplicialCompleteFan { rays, cones, masks, inverses };
        fan.check_ridges()?;
        fan.check_generic_cover()?;
        Ok(fan)
    }

    /// The face fan of a smooth Fano polytope.
    pub fn of_polytope(p: &LatticePolytope) -> Result<Self> {
        p.require_smooth_fano()?;
        let cones = p.facets()?.iter().map(|f| f.vertices.clone()).collect();
        let mut inverses = Vec::new();
        for f in p.facets()? {
            inverses.push(p.facet_inverse(f)?);
        }
        Ok(SimplicialCompleteFan { rays: p.vertices().to_vec(), cones, masks: p.facet_masks()?.to_vec(), inverses })
    }

    fn check_ridges(&self) -> Result<()> {
        let mut seen: std::collections::HashMap<u64, Vec<(usize, usize)>> = Default::default();
        for (ci, c) in self.cones.iter().enumerate() {
            for &v in c {
                seen.entry(self.masks[ci] & !(1 << v)).or_default().push((ci, v));
            }
        }
        for (ridge, owners) in &seen {
            let [(c1, v1), (c2, v2)] = owners.as_slice() else {
                return Err(PrimitiveError::InvalidFan(format!(
                    "ridge {:?} lies in {} cones",
                    polytope::indices_of(*ridge),
                    owners.len()
                )));
            };
            // coordinate of the opposite ray of c2 along v1 in the basis of c1
            let pos = self.cones[*c1].iter().position(|x| x == v1).expect("ray of its own cone");
            let coords = self.inverses[*c1].vec_mul(&self.rays[*v2])?;
            if coords[pos] >= 0 {
                return Err(PrimitiveError::InvalidFan(format!("cones {c1} and {c2} overlap across a ridge")));
            }
        }
        Ok(())
    }

    fn check_generic_cover(&self) -> Result<()> {
        let n = self.dim();
        'points: for base in 2..40i64 {
            let x = IntVector::new((0..n).map(|i| base.pow(i as u32) * if i % 2 == 0 { 1 } else { -1 }).collect());
            let mut count = 0;
            for inv in &self.inverses {
                let c = inv.vec_mul(&x)?;
                if c.iter().all(|&t| t >= 0) {
                    if c.contains(&0) {
                        continue 'points;
                    }
                    count += 1;
                }
            }
            return match count {
                1 => Ok(()),
                k => Err(PrimitiveError::InvalidFan(format!("a generic point lies in {k} cones"))),
            };
        }
        Err(PrimitiveError::InvalidFan("could not find a generic point".into()))
    }

    pub fn dim(&self) -> usize {
        self.rays[0].dim()
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn is_cone(&self, s: u64) -> bool {
        self.masks.iter().any(|&m| m & s == s)
    }

    /// The minimal cone containing `x` and the positive coefficients of `x`
    /// in its rays.
    pub fn locate(&self, x: &IntVector) -> Result<Vec<(usize, i64)>> {
        for (c, inv) in self.cones.iter().zip(&self.inverses) {
            let coords = inv.vec_mul(x)?;
            if coords.iter().all(|&t| t >= 0) {
                let mut out: Vec<(usize, i64)> =
                    c.iter().zip(coords.iter()).filter(|(_, &t)| t > 0).map(|(&i, &t)| (i, t)).collect();
                out.sort_unstable();
                return Ok(out);
            }
        }
        Err(PrimitiveError::Uncovered(x.clone()))
    }

    /// Minimal non-faces, found level by level: a set of size `k + 1` is a
    /// candidate only if all its `k`-subsets are faces.
    pub fn primitive_collections(&self) -> Result<Vec<PrimitiveCollection>> {
        let n = self.dim();
        let m = self.rays.len();
        let mut faces: Vec<HashSet<u64>> = vec![HashSet::new(); n + 1];
        for &cm in &self.masks {
            let mut s = cm;
            while s != 0 {
                faces[s.count_ones() as usize].insert(s);
                s = (s - 1) & cm;
            }
        }
        let mut out = Vec::new();
        for k in 1..=n {
            let mut level: Vec<u64> = faces[k].iter().copied().collect();
            level.sort_unstable();
            for f in level {
                let top = 63 - f.leading_zeros() as usize;
                for x in top + 1..m {
                    let s = f | (1 << x);
                    if k < n && faces[k + 1].contains(&s) {
                        continue;
                    }
                    let minimal = polytope::indices_of(s).iter().all(|&y| faces[k].contains(&(s & !(1 << y))));
                    if minimal {
                        out.push(self.relation(s)?);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn relation(&self, s: u64) -> Result<PrimitiveCollection> {
        let members = polytope::indices_of(s);
        let sum = IntVector::sum(self.dim(), members.iter().map(|&i| &self.rays[i]))?;
        let rhs = if sum.is_zero() { Vec::new() } else { self.locate(&sum)? };
        let degree = members.len() as i64 - rhs.iter().map(|&(_, c)| c).sum::<i64>();
        Ok(PrimitiveCollection { members, rhs, degree })
    }
}

pub fn is_face(p: &LatticePolytope, s: &[usize]) -> Result<bool> {
    Ok(p.is_face(polytope::mask_of(s))?)
}

pub fn primitive_collections(p: &LatticePolytope) -> Result<Vec<PrimitiveCollection>> {
    SimplicialCompleteFan::of_polytope(p)?.primitive_collections()
}

pub fn locate_in_fan(p: &LatticePolytope, x: &IntVector) -> Result<Vec<(usize, i64)>> {
    SimplicialCompleteFan::of_polytope(p)?.locate(x)
}

/// Every primitive collection has positive degree.
pub fn check_fano_by_degrees(fan: &SimplicialCompleteFan) -> Result<bool> {
    Ok(fan.primitive_collections()?.iter().all(|pc| pc.degree > 0))
}

/// Name of a vertex inside a recognized relation pattern (1-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Role {
    V(usize),
    Y(usize),
    Z(usize),
    T(usize),
    U(usize),
    W(usize, usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::V(i) => write!(f, "v{i}"),
            Role::Y(i) => write!(f, "y{i}"),
            Role::Z(i) => write!(f, "z{i}"),
            Role::T(i) => write!(f, "t{i}"),
            Role::U(i) => write!(f, "u{i}"),
            Role::W(i, j) => write!(f, "w{i},{j}"),
        }
    }
}

/// Vertex names for printing: role names when every vertex has one (with a
/// lone `z` or `t` printed without index), `x0, x1, ...` otherwise.
pub fn vertex_names(m: usize, roles: Option<&[Role]>) -> Vec<String> {
    match roles {
        Some(r) if r.len() == m => {
            let lone = |pick: fn(&Role) -> bool| r.iter().filter(|x| pick(x)).count() == 1;
            let (lone_z, lone_t) = (lone(|x| matches!(x, Role::Z(_))), lone(|x| matches!(x, Role::T(_))));
            r.iter()
                .map(|x| match x {
                    Role::Z(_) if lone_z => "z".to_string(),
                    Role::T(_) if lone_t => "t".to_string(),
                    other => other.to_string(),
                })
                .collect()
        }
        _ => (0..m).map(|i| format!("x{i}")).collect(),
    }
}

/// `v1 + v2 + y1 + y2 = 3 t` style rendering.
pub fn format_relation(pc: &PrimitiveCollection, names: &[String]) -> String {
    let lhs: Vec<&str> = pc.members.iter().map(|&i| names[i].as_str()).collect();
    let rhs: Vec<String> =
        pc.rhs.iter().map(|&(i, c)| if c == 1 { names[i].clone() } else { format!("{c} {}", names[i]) }).collect();
    let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
    format!("{} = {}", lhs.join(" + "), rhs)
}

/// Shape of the relations of a polytope with `n + 2` vertices: `zero_part`
/// sums to zero and the other `n + 2 - k` vertices sum to `Σ a_i zero_part_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pic2Pattern {
    pub k: usize,
    pub zero_part: Vec<usize>,
    pub other_part: Vec<usize>,
    pub a: Vec<i64>,
}

pub fn classify_pic2(p: &LatticePolytope) -> Result<Pic2Pattern> {
    let n = p.dim();
    if p.num_vertices() != n + 2 {
        return Err(PrimitiveError::VertexCount { expected: n + 2, found: p.num_vertices() });
    }
    let pcs = primitive_collections(p)?;
    let inconsistent = |m: &str| Err(PrimitiveError::Inconsistent(m.to_string()));
    if pcs.len() != 2 || pcs[0].mask() & pcs[1].mask() != 0 || pcs[0].mask() | pcs[1].mask() != p.all_mask() {
        return inconsistent("expected two disjoint primitive collections covering all vertices");
    }
    for (zero, other) in [(&pcs[0], &pcs[1]), (&pcs[1], &pcs[0])] {
        if !zero.is_zero_sum() || other.rhs_mask() & !zero.mask() != 0 {
            continue;
        }
        let k = zero.members.len();
        let a: Vec<i64> = zero.members.iter().map(|&v| other.coefficient(v)).collect();
        if !(2..=n).contains(&k) || (n + 2 - k) as i64 <= a.iter().sum::<i64>() {
            return inconsistent("zero-sum part or degree bound out of range");
        }
        return Ok(Pic2Pattern { k, zero_part: zero.members.clone(), other_part: other.members.clone(), a });
    }
    inconsistent("no zero-sum collection whose complement sums into it")
}

/// The five vertex groups `V, Y, Z, T, U` of a polytope with five
/// cyclically overlapping primitive collections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiveGroups {
    pub v: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub t: Vec<usize>,
    pub u: Vec<usize>,
    /// Coefficients of `z_2..z_p2` (`z_1` is a `z` with zero coefficient).
    pub c: Vec<i64>,
    pub d: Vec<i64>,
}

impl FiveGroups {
    pub fn sizes(&self) -> [usize; 5] {
        [self.v.len(), self.y.len(), self.z.len(), self.t.len(), self.u.len()]
    }

    pub fn roles(&self, m: usize) -> Vec<Role> {
        let mut roles = vec![Role::V(0); m];
        let make: [fn(usize) -> Role; 5] = [Role::V, Role::Y, Role::Z, Role::T, Role::U];
        let groups = [&self.v, &self.y, &self.z, &self.t, &self.u].into_iter().zip(make);
        for (g, make) in groups {
            for (i, &x) in g.iter().enumerate() {
                roles[x] = make(i + 1);
            }
        }
        roles
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Pic3Pattern {
    ThreeDisjoint { collections: Vec<Vec<usize>> },
    FiveCollections(FiveGroups),
}

/// Every labeling of five primitive collections `C1..C5` as
/// `V∪Y, Y∪Z, Z∪T, T∪U, U∪V` under which the relations have the shape
/// `C1 = Σ c z + Σ (d+1) t`, `C2 = Σ u`, `C3 = 0`, `C4 = Σ y`,
/// `C5 = Σ c z + Σ d t` with `c, d >= 0`, some `z` absent from the right-hand
/// sides, and all degrees positive.
fn five_labelings(pcs: &[&PrimitiveCollection], all: u64) -> Vec<FiveGroups> {
    let mut out = Vec::new();
    if pcs.len() != 5 {
        return out;
    }
    for perm in permutations5() {
        let c: Vec<&PrimitiveCollection> = perm.iter().map(|&i| pcs[i]).collect();
        let m: Vec<u64> = c.iter().map(|x| x.mask()).collect();
        let (v, y, z, t, u) = (m[0] & m[4], m[0] & m[1], m[1] & m[2], m[2] & m[3], m[3] & m[4]);
        let groups = [v, y, z, t, u];
        if groups.contains(&0) || groups.iter().fold(0, |a, g| a | g) != all {
            continue;
        }
        if groups.iter().map(|g| g.count_ones()).sum::<u32>() != all.count_ones() {
            continue;
        }
        if m[0] != v | y || m[1] != y | z || m[2] != z | t || m[3] != t | u || m[4] != u | v {
            continue;
        }
        let unit_on = |pc: &PrimitiveCollection, g: u64| pc.rhs_mask() == g && pc.rhs.iter().all(|&(_, k)| k == 1);
        if !c[2].is_zero_sum() || !unit_on(c[1], u) || !unit_on(c[3], y) {
            continue;
        }
        if c[0].rhs_mask() & !(z | t) != 0 || c[4].rhs_mask() & !(z | t) != 0 {
            continue;
        }
        let zs = polytope::indices_of(z);
        let ts = polytope::indices_of(t);
        if ts.iter().any(|&x| c[0].coefficient(x) < 1 || c[4].coefficient(x) != c[0].coefficient(x) - 1) {
            continue;
        }
        if zs.iter().any(|&x| c[4].coefficient(x) != c[0].coefficient(x)) {
            continue;
        }
        let Some(z1) = zs.iter().copied().find(|&x| c[0].coefficient(x) == 0) else { continue };
        if c.iter().any(|pc| pc.degree <= 0) {
            continue;
        }
        let mut zs_ordered = vec![z1];
        zs_ordered.extend(zs.iter().copied().filter(|&x| x != z1));
        out.push(FiveGroups {
            v: polytope::indices_of(v),
            y: polytope::indices_of(y),
            c: zs_ordered[1..].iter().map(|&x| c[0].coefficient(x)).collect(),
            d: ts.iter().map(|&x| c[4].coefficient(x)).collect(),
            z: zs_ordered,
            t: ts,
            u: polytope::indices_of(u),
        });
    }
    out
}

fn permutations5() -> impl Iterator<Item = Vec<usize>> {
    (0..5).permutations(5)
}

pub fn classify_pic3(p: &LatticePolytope) -> Result<Pic3Pattern> {
    let n = p.dim();
    if p.num_vertices() != n + 3 {
        return Err(PrimitiveError::VertexCount { expected: n + 3, found: p.num_vertices() });
    }
    let pcs = primitive_collections(p)?;
    let masks: Vec<u64> = pcs.iter().map(PrimitiveCollection::mask).collect();
    if pcs.len() == 3 && masks[0] & masks[1] == 0 && masks[0] & masks[2] == 0 && masks[1] & masks[2] == 0 {
        return Ok(Pic3Pattern::ThreeDisjoint { collections: pcs.into_iter().map(|pc| pc.members).collect() });
    }
    let refs: Vec<&PrimitiveCollection> = pcs.iter().collect();
    five_labelings(&refs, p.all_mask())
        .into_iter()
        .next()
        .map(Pic3Pattern::FiveCollections)
        .ok_or_else(|| PrimitiveError::Inconsistent(format!("{} primitive collections of unexpected shape", pcs.len())))
}

/// A labeling satisfies the isolated pattern when `|Z| = |T| = 1`,
/// `|V| = a >= 2`, `|Y| = |U| = b` and the `t` coefficients are
/// `a + b - 1` and `a + b - 2` with no `z` terms.
fn is_isolated_core(g: &FiveGroups, min_b: usize) -> Option<(usize, usize)> {
    let (a, b) = (g.v.len(), g.y.len());
    let ok = g.z.len() == 1 && g.t.len() == 1 && g.u.len() == b && a >= 2 && b >= min_b && g.d == [(a + b - 2) as i64];
    ok.then_some((a, b))
}

/// `(a, b)` when `p` has `n + 3` vertices and its five primitive relations
/// are `V∪Y = (a+b-1) t`, `Y∪{z} = U`, `z + t = 0`, `{t}∪U = Y`,
/// `U∪V = (a+b-2) t` with `a, b >= 2`.
pub fn match_isolated_pattern(p: &LatticePolytope) -> Result<Option<(usize, usize)>> {
    if p.num_vertices() != p.dim() + 3 {
        return Ok(None);
    }
    let pcs = primitive_collections(p)?;
    let refs: Vec<&PrimitiveCollection> = pcs.iter().collect();
    Ok(five_labelings(&refs, p.all_mask()).iter().find_map(|g| is_isolated_core(g, 2)))
}

/// A recognized family member with the role of every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMatch {
    pub params: FamilyParams,
    pub roles: Vec<Role>,
}

/// Recognizes the I-isolated family: the isolated five-collection core on
/// `V, Y, z, t, U` plus `k` further collections `W_j`, disjoint from every
/// other collection, with `Σ W_j` a sum of `|W_j| - 1` vertices from `Y ∪ U`
/// that together hit all of `Y ∪ U`.
pub fn match_family_pattern(p: &LatticePolytope) -> Result<Option<FamilyMatch>> {
    p.require_smooth_fano()?;
    let pcs = primitive_collections(p)?;
    if pcs.len() < 5 {
        return Ok(None);
    }
    let masks: Vec<u64> = pcs.iter().map(PrimitiveCollection::mask).collect();
    let isolated: Vec<bool> =
        (0..pcs.len()).map(|i| (0..pcs.len()).all(|j| j == i || masks[i] & masks[j] == 0)).collect();
    let w: Vec<&PrimitiveCollection> = pcs.iter().zip(&isolated).filter(|(_, &x)| x).map(|(pc, _)| pc).collect();
    let core: Vec<&PrimitiveCollection> = pcs.iter().zip(&isolated).filter(|(_, &x)| !x).map(|(pc, _)| pc).collect();
    // with k = 0 all five collections overlap; with k >= 1 the W_j are the isolated ones
    let wmask = w.iter().fold(0u64, |a, pc| a | pc.mask());
    let core_mask = p.all_mask() & !wmask;
    let min_b = if w.is_empty() { 2 } else { 1 };
    for g in five_labelings(&core, core_mask) {
        let Some((a, b)) = is_isolated_core(&g, min_b) else { continue };
        let mut ws: Vec<&PrimitiveCollection> = w.clone();
        ws.sort_by_key(|pc| pc.members[0]);
        let mut l = Vec::new();
        let mut alpha = Vec::new();
        let mut ok = true;
        for pc in &ws {
            let lj = pc.members.len() - 1;
            let mut slots = Vec::new();
            for &(x, c) in &pc.rhs {
                let slot = if let Some(q) = g.y.iter().position(|&y| y == x) {
                    Slot::Y(q + 1)
                } else if let Some(q) = g.u.iter().position(|&u| u == x) {
                    Slot::U(q + 1)
                } else {
                    ok = false;
                    break;
                };
                slots.extend(std::iter::repeat_n(slot, c as usize));
            }
            if !ok || slots.len() != lj {
                ok = false;
                break;
            }
            slots.sort();
            l.push(lj);
            alpha.push(slots);
        }
        if !ok {
            continue;
        }
        let Ok(params) = FamilyParams::with_alpha(a, b, l, alpha) else { continue };
        let mut roles = g.roles(p.num_vertices());
        for (j, pc) in ws.iter().enumerate() {
            for (i, &x) in pc.members.iter().enumerate() {
                roles[x] = Role::W(i + 1, j + 1);
            }
        }
        return Ok(Some(FamilyMatch { params, roles }));
    }
    Ok(None)
}

/// Checks the face-extension property on every degree-one primitive relation
/// with nonzero right-hand side: for each facet `F` containing the
/// right-hand side and each member `x`, `(V(F) ∪ A) \ {x}` is a face.
pub fn verify_extension_lemma(p: &LatticePolytope) -> Result<bool> {
    let pcs = primitive_collections(p)?;
    let facets = p.facet_masks()?;
    for pc in pcs.iter().filter(|pc| pc.degree == 1 && !pc.is_zero_sum()) {
        let (a, w) = (pc.mask(), pc.rhs_mask());
        if a & w != 0 {
            continue;
        }
        for &f in facets.iter().filter(|&&f| f & w == w) {
            for &x in &pc.members {
                if !p.is_face((f | a) & !(1 << x))? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
