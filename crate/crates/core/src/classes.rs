//! F- and I-equivalence graphs over a catalog, their components, and
//! summary reports.
//!
//! Every polytope met along a chain of moves is again a smooth Fano polytope
//! of the same dimension, so over a complete catalog the equivalence classes
//! are exactly the connected components of the one-move adjacency graph. A
//! neighbor that is missing from the catalog means the catalog is
//! incomplete, and graph construction fails instead of silently splitting a
//! class.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Catalog, CatalogError};
use crate::moves::{self, MoveRecord};
use crate::polytope::{CanonicalKey, LatticePolytope, PolytopeError};

#[derive(Debug, Error)]
pub enum ClassError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("catalog is incomplete: entry {id} has neighbor {key} which is not in the catalog")]
    Incomplete { id: u64, key: String },
    #[error("no catalog entry with id {0}")]
    UnknownId(u64),
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

pub type Result<T, E = ClassError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    F,
    I,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::F => "F",
            Relation::I => "I",
        })
    }
}

impl std::str::FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "F" | "f" => Ok(Relation::F),
            "I" | "i" => Ok(Relation::I),
            _ => Err(format!("unknown relation `{s}` (expected F or I)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: u64,
    pub key: CanonicalKey,
    pub nverts: usize,
}

/// An adjacency: applying `witness` to catalog entry `a` gives a polytope
/// equivalent to entry `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: u64,
    pub b: u64,
    pub witness: MoveRecord,
}

impl Edge {
    fn pair(&self) -> (u64, u64) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivGraph {
    pub relation: Relation,
    pub dim: usize,
    /// Sorted by id.
    pub nodes: Vec<Node>,
    /// One edge per adjacent pair, sorted by the unordered pair.
    pub edges: Vec<Edge>,
}

fn neighbors_of(p: &LatticePolytope, relation: Relation) -> Result<Vec<moves::Neighbor>> {
    Ok(match relation {
        Relation::F => moves::f_neighbors(p)?,
        // every I-adjacency removes a vertex from the larger polytope
        Relation::I => moves::i_removal_neighbors(p)?,
    })
}

/// Builds the adjacency graph. F-edges come from every F-move out of every
/// entry; I-edges from every vertex deletion, which finds each I-adjacency
/// from its larger end.
pub fn build_graph(cat: &Catalog, relation: Relation) -> Result<EquivGraph> {
    let found: Vec<Vec<(u64, u64, MoveRecord)>> = (0..cat.len())
        .into_par_iter()
        .map(|i| {
            let a = cat.ids()[i];
            let mut out = Vec::new();
            for (q, record) in neighbors_of(&cat.entries()[i], relation)? {
                let key = q.canonical_form()?;
                let j = cat.lookup(&key).ok_or_else(|| ClassError::Incomplete { id: a, key: key.to_string() })?;
                out.push((a, cat.ids()[j], record));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut edges: BTreeMap<(u64, u64), Edge> = BTreeMap::new();
    for (a, b, witness) in found.into_iter().flatten() {
        let e = Edge { a, b, witness };
        edges.entry(e.pair()).or_insert(e);
    }
    let mut nodes: Vec<Node> = (0..cat.len())
        .map(|i| Node { id: cat.ids()[i], key: cat.keys()[i].clone(), nverts: cat.entries()[i].num_vertices() })
        .collect();
    nodes.sort_by_key(|n| n.id);
    Ok(EquivGraph { relation, dim: cat.dim(), nodes, edges: edges.into_values().collect() })
}

/// I-graph from pairwise vertex-set embeddings between entries whose vertex
/// counts differ by one. Slower than [`build_graph`]; kept as an independent
/// construction of the same edge set.
pub fn build_i_graph_by_embedding(cat: &Catalog) -> Result<EquivGraph> {
    let found: Vec<Vec<(u64, u64)>> = (0..cat.len())
        .into_par_iter()
        .map(|i| {
            let p = &cat.entries()[i];
            let mut out = Vec::new();
            for (j, q) in cat.entries().iter().enumerate() {
                if q.num_vertices() + 1 == p.num_vertices() && q.embed_subset(p)?.is_some() {
                    out.push((cat.ids()[i], cat.ids()[j]));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for (a, b) in found.into_iter().flatten() {
        let p = &cat.entries()[cat.position_of_id(a).ok_or(ClassError::UnknownId(a))?];
        let q = &cat.entries()[cat.position_of_id(b).ok_or(ClassError::UnknownId(b))?];
        let u = q.embed_subset(p)?.expect("embedding found above");
        let image: Vec<_> =
            q.vertices().iter().map(|v| u.apply(v)).collect::<Result<_, _>>().map_err(PolytopeError::from)?;
        let removed = (0..p.num_vertices()).find(|&i| !image.contains(p.vertex(i))).expect("one extra vertex");
        let witness = MoveRecord { kind: moves::MoveKind::IRemove, witness: p.vertex(removed).clone(), face: None };
        edges.push(Edge { a, b, witness });
    }
    edges.sort_by_key(Edge::pair);
    edges.dedup_by_key(|e| e.pair());
    let mut nodes: Vec<Node> = (0..cat.len())
        .map(|i| Node { id: cat.ids()[i], key: cat.keys()[i].clone(), nverts: cat.entries()[i].num_vertices() })
        .collect();
    nodes.sort_by_key(|n| n.id);
    Ok(EquivGraph { relation: Relation::I, dim: cat.dim(), nodes, edges })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // the smaller root wins, so labels follow id order
        if ra < rb {
            self.0[rb] = ra;
        } else {
            self.0[ra] = rb;
        }
    }
}

impl EquivGraph {
    fn position(&self, id: u64) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    pub fn node(&self, id: u64) -> Option<&Node> {
        self.position(id).map(|i| &self.nodes[i])
    }

    /// Connected components as sorted id lists, ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<u64>> {
        let mut uf = UnionFind((0..self.nodes.len()).collect());
        for e in &self.edges {
            if let (Some(a), Some(b)) = (self.position(e.a), self.position(e.b)) {
                uf.union(a, b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for i in 0..self.nodes.len() {
            let r = uf.find(i);
            groups.entry(r).or_default().push(self.nodes[i].id);
        }
        groups.into_values().collect()
    }

    pub fn degree(&self, id: u64) -> usize {
        self.edges.iter().filter(|e| e.a == id || e.b == id).count()
    }

    pub fn is_isolated(&self, id: u64) -> Result<bool> {
        self.position(id).ok_or(ClassError::UnknownId(id))?;
        Ok(self.degree(id) == 0)
    }

    /// Edges whose witness, replayed on the catalog entry `a`, does not give
    /// entry `b`.
    pub fn failing_witnesses(&self, cat: &Catalog) -> Result<Vec<(u64, u64)>> {
        let results: Vec<Option<(u64, u64)>> = self
            .edges
            .par_iter()
            .map(|e| {
                let pa = cat.position_of_id(e.a).ok_or(ClassError::UnknownId(e.a))?;
                let pb = cat.position_of_id(e.b).ok_or(ClassError::UnknownId(e.b))?;
                let ok = match moves::apply(&cat.entries()[pa], &e.witness)? {
                    Some(q) => q.canonical_form()? == cat.keys()[pb],
                    None => false,
                };
                Ok((!ok).then_some((e.a, e.b)))
            })
            .collect::<Result<_>>()?;
        Ok(results.into_iter().flatten().collect())
    }

    /// The id of the unique node with `dim + 1` vertices, if present.
    pub fn simplex_id(&self) -> Option<u64> {
        self.nodes.iter().find(|n| n.nverts == self.dim + 1).map(|n| n.id)
    }
}

/// Aggregate view of an equivalence graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub relation: Relation,
    pub dim: usize,
    pub nodes: usize,
    pub edges: usize,
    pub component_count: usize,
    /// Component sizes, components ordered by smallest id.
    pub component_sizes: Vec<usize>,
    pub simplex_component_size: usize,
    /// Members outside the component of the simplex `T^n`, counted by
    /// `rho = vertex count - dim`.
    pub outside_simplex_by_rho: BTreeMap<usize, usize>,
    pub outside_simplex: usize,
    pub components_outside_simplex: usize,
    pub isolated: Vec<u64>,
    pub isolated_vertex_counts: Vec<usize>,
}

pub fn report(g: &EquivGraph) -> ClassReport {
    let comps = g.components();
    let simplex = g.simplex_id();
    let simplex_comp = simplex.and_then(|s| comps.iter().position(|c| c.contains(&s)));
    let mut by_rho = BTreeMap::new();
    let mut outside = 0;
    for (ci, c) in comps.iter().enumerate() {
        if Some(ci) == simplex_comp {
            continue;
        }
        for id in c {
            let nv = g.node(*id).expect("component ids are nodes").nverts;
            *by_rho.entry(nv - g.dim).or_insert(0) += 1;
            outside += 1;
        }
    }
    let isolated: Vec<u64> = comps.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    let mut isolated_vertex_counts: Vec<usize> = isolated.iter().map(|id| g.node(*id).expect("node").nverts).collect();
    isolated_vertex_counts.sort_unstable();
    ClassReport {
        relation: g.relation,
        dim: g.dim,
        nodes: g.nodes.len(),
        edges: g.edges.len(),
        component_count: comps.len(),
        component_sizes: comps.iter().map(Vec::len).collect(),
        simplex_component_size: simplex_comp.map_or(0, |c| comps[c].len()),
        outside_simplex_by_rho: by_rho,
        outside_simplex: outside,
        components_outside_simplex: comps.len() - usize::from(simplex_comp.is_some()),
        isolated,
        isolated_vertex_counts,
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "relation: {}", self.relation)?;
        writeln!(f, "dimension: {}", self.dim)?;
        writeln!(f, "nodes: {}", self.nodes)?;
        writeln!(f, "edges: {}", self.edges)?;
        writeln!(f, "components: {}", self.component_count)?;
        let sizes: Vec<String> = self.component_sizes.iter().map(|s| s.to_string()).collect();
        writeln!(f, "component sizes: {}", sizes.join(" "))?;
        writeln!(f, "simplex component size: {}", self.simplex_component_size)?;
        writeln!(f, "outside simplex component: {}", self.outside_simplex)?;
        for (rho, count) in &self.outside_simplex_by_rho {
            writeln!(f, "  rho {rho}: {count}")?;
        }
        writeln!(f, "components outside simplex component: {}", self.components_outside_simplex)?;
        let ids: Vec<String> = self.isolated.iter().map(|s| s.to_string()).collect();
        write!(f, "isolated: {}", if ids.is_empty() { "none".to_string() } else { ids.join(" ") })?;
        if !self.isolated.is_empty() {
            let counts: Vec<String> = self.isolated_vertex_counts.iter().map(|s| s.to_string()).collect();
            write!(f, " (vertex counts {})", counts.join(" "))?;
        }
        writeln!(f)
    }
}

/// Whether no F-move leads from `p` to another smooth Fano polytope. The
/// catalog must be complete; a neighbor outside it is reported as an error.
pub fn is_f_isolated(p: &LatticePolytope, cat: &Catalog) -> Result<bool> {
    let key = p.canonical_form()?;
    let own = cat.lookup(&key).ok_or_else(|| CatalogError::Missing(key.to_string()))?;
    let neighbors = moves::f_neighbors(p)?;
    for (q, _) in &neighbors {
        let k = q.canonical_form()?;
        if cat.lookup(&k).is_none() {
            return Err(ClassError::Incomplete { id: cat.ids()[own], key: k.to_string() });
        }
    }
    Ok(neighbors.is_empty())
}

/// Whether no I-move leads from `p` to another catalog entry.
pub fn is_i_isolated(p: &LatticePolytope, cat: &Catalog) -> Result<bool> {
    let key = p.canonical_form()?;
    let own = cat.lookup(&key).ok_or_else(|| CatalogError::Missing(key.to_string()))?;
    let removals = moves::i_removal_neighbors(p)?;
    for (q, _) in &removals {
        let k = q.canonical_form()?;
        if cat.lookup(&k).is_none() {
            return Err(ClassError::Incomplete { id: cat.ids()[own], key: k.to_string() });
        }
    }
    if !removals.is_empty() {
        return Ok(false);
    }
    Ok(moves::i_neighbors_in_catalog(p, cat)?.is_empty())
}

/// Graphviz rendering: one cluster per vertex count, edges from `a` to `b`
/// labeled with the witness move.
pub fn export_dot(g: &EquivGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", g.relation);
    let _ = writeln!(out, "  node [shape=circle];");
    let mut by_count: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for n in &g.nodes {
        by_count.entry(n.nverts).or_default().push(n.id);
    }
    for (count, ids) in &by_count {
        let _ = writeln!(out, "  subgraph cluster_v{count} {{");
        let _ = writeln!(out, "    label=\"{count} vertices\";");
        for id in ids {
            let _ = writeln!(out, "    n{id} [label=\"{id}\"];");
        }
        let _ = writeln!(out, "  }}");
    }
    for e in &g.edges {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.a, e.b, e.witness);
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: u64,
    key: String,
    nverts: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    a: u64,
    b: u64,
    witness: String,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    relation: Relation,
    dim: usize,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

/// JSON with schema
/// `{relation, dim, nodes: [{id, key, nverts}], edges: [{a, b, witness}]}`;
/// keys and witnesses use their text forms.
pub fn export_json(g: &EquivGraph) -> String {
    let doc = JsonGraph {
        relation: g.relation,
        dim: g.dim,
        nodes: g.nodes.iter().map(|n| JsonNode { id: n.id, key: n.key.to_string(), nverts: n.nverts }).collect(),
        edges: g.edges.iter().map(|e| JsonEdge { a: e.a, b: e.b, witness: e.witness.to_string() }).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes") + "\n"
}

pub fn import_json(text: &str) -> Result<EquivGraph> {
    let err = |e: String| ClassError::Json(e);
    let doc: JsonGraph = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let nodes = doc
        .nodes
        .into_iter()
        .map(|n| Ok(Node { id: n.id, key: n.key.parse().map_err(|e| err(format!("{e}")))?, nverts: n.nverts }))
        .collect::<Result<Vec<_>>>()?;
    let edges = doc
        .edges
        .into_iter()
        .map(|e| Ok(Edge { a: e.a, b: e.b, witness: e.witness.parse().map_err(|x| err(format!("{x}")))? }))
        .collect::<Result<Vec<_>>>()?;
    let ids: HashMap<u64, ()> = nodes.iter().map(|n| (n.id, ())).collect();
    if let Some(e) = edges.iter().find(|e| !ids.contains_key(&e.a) || !ids.contains_key(&e.b)) {
        return Err(err(format!("edge {}-{} refers to an unknown node", e.a, e.b)));
    }
    Ok(EquivGraph { relation: doc.relation, dim: doc.dim, nodes, edges })
}
