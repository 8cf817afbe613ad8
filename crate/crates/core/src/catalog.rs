//! Named constructions, the bounded I-move enumerator, and the catalog text
//! format.
//!
//! A catalog file is a sequence of records separated by blank lines:
//!
//! ```text
//! dim 2 vertices 3 id 1
//! 1 0
//! 0 1
//! -1 -1
//! ```
//!
//! The `id` field is optional. Lines starting with `#` are comments.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::IntVector;
use crate::moves;
use crate::polytope::{CanonicalKey, LatticePolytope, PolytopeError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("record {id} (line {line}): {reason}")]
    Validation { id: u64, line: usize, reason: String },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("polytope {0} is not in the catalog")]
    Missing(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = CatalogError> = std::result::Result<T, E>;

fn params<T>(msg: impl Into<String>) -> Result<T> {
    Err(CatalogError::Params(msg.into()))
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn polytope(rows: Vec<Vec<i64>>) -> Result<LatticePolytope> {
    Ok(LatticePolytope::new(rows.into_iter().map(IntVector::new).collect())?)
}

/// The simplex `conv{e_1, ..., e_n, -(e_1 + ... + e_n)}`.
pub fn make_t(n: usize) -> Result<LatticePolytope> {
    if n < 1 {
        return params("T^n needs n >= 1");
    }
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    rows.push(vec![-1; n]);
    polytope(rows)
}

fn v_rows(n: usize, both_signs: bool) -> Result<Vec<Vec<i64>>> {
    if n < 2 || !n.is_multiple_of(2) {
        return params(format!("V^{n} needs a positive even dimension"));
    }
    let mut rows = Vec::new();
    for i in 0..n {
        rows.push(unit(n, i));
        rows.push(unit(n, i).into_iter().map(|x| -x).collect());
    }
    rows.push(vec![1; n]);
    if both_signs {
        rows.push(vec![-1; n]);
    }
    Ok(rows)
}

/// `V^n = conv{±e_1, ..., ±e_n, ±(e_1 + ... + e_n)}` for even `n`.
pub fn make_v(n: usize) -> Result<LatticePolytope> {
    polytope(v_rows(n, true)?)
}

/// `Ṽ^n = conv{±e_1, ..., ±e_n, e_1 + ... + e_n}` for even `n`.
pub fn make_v_tilde(n: usize) -> Result<LatticePolytope> {
    polytope(v_rows(n, false)?)
}

/// A vertex of `Y = {y_1..y_b}` or `U = {u_1..u_b}` (1-based), used as a
/// right-hand side term of the `W` relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    Y(usize),
    U(usize),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Y(q) => write!(f, "y{q}"),
            Slot::U(q) => write!(f, "u{q}"),
        }
    }
}

/// Parameters of the I-isolated family with `n + k + 3` vertices in
/// dimension `n = a + 2b - 1 + Σ l_j`. `alpha[j][i]` is the `i`-th right-hand
/// side term of the `j`-th `W` relation. With `k = 0` this is the
/// `n + 3`-vertex construction, which needs `b >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub a: usize,
    pub b: usize,
    pub l: Vec<usize>,
    pub alpha: Vec<Vec<Slot>>,
}

impl FamilyParams {
    /// Parameters with the default assignment: slots in order `(j, i)` cycle
    /// through `y_1, u_1, y_2, u_2, ...`.
    pub fn new(a: usize, b: usize, l: Vec<usize>) -> Result<Self> {
        let cycle: Vec<Slot> = (1..=b).flat_map(|q| [Slot::Y(q), Slot::U(q)]).collect();
        let mut next = 0;
        let alpha = l
            .iter()
            .map(|&lj| {
                (0..lj)
                    .map(|_| {
                        let s = cycle[next % cycle.len().max(1)];
                        next += 1;
                        s
                    })
                    .collect()
            })
            .collect();
        Self::with_alpha(a, b, l, alpha)
    }

    pub fn with_alpha(a: usize, b: usize, l: Vec<usize>, alpha: Vec<Vec<Slot>>) -> Result<Self> {
        let p = FamilyParams { a, b, l, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a < 2 || self.b < 1 {
            return params("need a >= 2 and b >= 1");
        }
        if self.l.is_empty() && self.b < 2 {
            return params("with k = 0 the construction needs b >= 2");
        }
        if self.l.contains(&0) {
            return params("every l_j must be at least 1");
        }
        if self.alpha.len() != self.l.len() || self.alpha.iter().zip(&self.l).any(|(a, &l)| a.len() != l) {
            return params("alpha must have l_j entries for relation j");
        }
        let mut hit = vec![[false; 2]; self.b];
        for s in self.alpha.iter().flatten() {
            match *s {
                Slot::Y(q) if (1..=self.b).contains(&q) => hit[q - 1][0] = true,
                Slot::U(q) if (1..=self.b).contains(&q) => hit[q - 1][1] = true,
                _ => return params(format!("alpha entry {s} is out of range")),
            }
        }
        if !self.l.is_empty() && hit.iter().any(|h| !h[0] || !h[1]) {
            return params("alpha must hit every y_q and u_q");
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.l.len()
    }

    pub fn dim(&self) -> usize {
        self.a + 2 * self.b - 1 + self.l.iter().sum::<usize>()
    }

    pub fn num_vertices(&self) -> usize {
        self.dim() + self.k() + 3
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} b={} k={}", self.a, self.b, self.k())?;
        if !self.l.is_empty() {
            let l: Vec<String> = self.l.iter().map(|x| x.to_string()).collect();
            let alpha: Vec<String> =
                self.alpha.iter().map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("+")).collect();
            write!(f, " l=({}) alpha=({})", l.join(","), alpha.join(", "))?;
        }
        Ok(())
    }
}

/// The `n + 3`-vertex polytope with five primitive collections `V ∪ Y`,
/// `Y ∪ {z}`, `{z, t}`, `{t} ∪ U`, `U ∪ V`; `a = |V| >= 2`, `b = |Y| = |U| >= 2`.
pub fn make_isolated_pic3(a: usize, b: usize) -> Result<LatticePolytope> {
    if a < 2 || b < 2 {
        return params("need a >= 2 and b >= 2");
    }
    make_family(&FamilyParams::new(a, b, Vec::new())?)
}

/// Vertices in the order `v_1..v_a, y_1..y_b, z, t, u_1..u_b`, then
/// `w_{1,j}..w_{l_j+1,j}` for `j = 1..k`.
pub fn make_family(p: &FamilyParams) -> Result<LatticePolytope> {
    p.validate()?;
    let (a, b) = (p.a, p.b);
    let n = p.dim();
    // 0-based index of e_i is i - 1
    let e = |i: usize| unit(n, i - 1);
    let add = |x: &mut Vec<i64>, y: &[i64], c: i64| x.iter_mut().zip(y).for_each(|(s, t)| *s += c * t);
    let last = a + 2 * b - 1;

    let mut vs: Vec<Vec<i64>> = (1..a).map(e).collect();
    let mut va = vec![0; n];
    (1..=last - 1).for_each(|i| add(&mut va, &e(i), -1));
    add(&mut va, &e(last), (a + b - 1) as i64);
    vs.push(va);

    let mut ys: Vec<Vec<i64>> = (1..b).map(|j| e(a - 1 + j)).collect();
    let mut yb = vec![0; n];
    (a + b - 1..=a + 2 * b - 2).for_each(|i| add(&mut yb, &e(i), 1));
    ys.push(yb);

    let z: Vec<i64> = e(last).into_iter().map(|x| -x).collect();
    let t = e(last);

    let mut us: Vec<Vec<i64>> = (1..b).map(|j| e(a + b - 1 + j)).collect();
    let mut ub = vec![0; n];
    (a..=a + b - 1).for_each(|i| add(&mut ub, &e(i), 1));
    add(&mut ub, &e(last), -1);
    us.push(ub);

    let mut rows = Vec::with_capacity(p.num_vertices());
    rows.extend(vs);
    rows.extend(ys.iter().cloned());
    rows.push(z);
    rows.push(t);
    rows.extend(us.iter().cloned());

    let mut offset = last;
    for (lj, alpha) in p.l.iter().zip(&p.alpha) {
        let mut closing = vec![0; n];
        for i in 1..=*lj {
            rows.push(e(offset + i));
            add(&mut closing, &e(offset + i), -1);
        }
        for s in alpha {
            match *s {
                Slot::Y(q) => add(&mut closing, &ys[q - 1], 1),
                Slot::U(q) => add(&mut closing, &us[q - 1], 1),
            }
        }
        rows.push(closing);
        offset += lj;
    }
    polytope(rows)
}

/// Parameters of an I-isolated `n`-polytope with `n + rho` vertices.
pub fn isolated_params(n: usize, rho: usize) -> Result<FamilyParams> {
    if n < 5 || rho < 3 || rho > n {
        return params("need n >= 5 and 3 <= rho <= n");
    }
    match rho {
        3 => FamilyParams::new(n - 3, 2, Vec::new()),
        4 => FamilyParams::new(n - 3, 1, vec![2]),
        _ => FamilyParams::new(n - rho + 2, 1, vec![1; rho - 3]),
    }
}

/// An I-isolated smooth Fano 7-polytope with 15 vertices.
pub fn make_remark_example_7d() -> Result<LatticePolytope> {
    let rows: Vec<&[i64]> = vec![
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, 0, 0, -1],
        &[-1, 0, 0, 0, 0, 0, 1],
        &[0, -1, 0, 0, 0, 0, 1],
        &[0, 1, 0, 0, 0, 0, -1],
        &[0, 0, -1, 0, 0, 1, 0],
        &[0, 1, 0, 0, 0, -1, 0],
        &[0, -1, 0, -1, 0, 1, 0],
        &[0, 1, 0, 0, -1, 0, -1],
    ];
    Ok(LatticePolytope::from_rows(&rows)?)
}

/// Unimodular-class representatives of one dimension, each with an external
/// identifier.
#[derive(Debug, Clone)]
pub struct Catalog {
    dim: usize,
    entries: Vec<LatticePolytope>,
    keys: Vec<CanonicalKey>,
    ids: Vec<u64>,
    index: HashMap<CanonicalKey, usize>,
}

/// One record of a catalog file before validation.
#[derive(Debug, Clone)]
pub struct Record {
    pub id: Option<u64>,
    pub line: usize,
    pub polytope: LatticePolytope,
}

impl Catalog {
    pub fn new(dim: usize) -> Self {
        Catalog { dim, entries: Vec::new(), keys: Vec::new(), ids: Vec::new(), index: HashMap::new() }
    }

    /// Adds `p` unless its class is already present; returns whether it was
    /// added.
    pub fn insert(&mut self, id: u64, p: LatticePolytope) -> Result<bool> {
        if p.dim() != self.dim {
            return Err(PolytopeError::DimensionPair(self.dim, p.dim()).into());
        }
        let key = p.canonical_form()?;
        if self.index.contains_key(&key) {
            return Ok(false);
        }
        self.index.insert(key.clone(), self.entries.len());
        self.entries.push(p);
        self.keys.push(key);
        self.ids.push(id);
        Ok(true)
    }

    /// Builds a catalog from class representatives, numbering them `1..` in
    /// (vertex count, key) order.
    pub fn from_polytopes(dim: usize, ps: impl IntoIterator<Item = LatticePolytope>) -> Result<Self> {
        let mut keyed: Vec<(usize, CanonicalKey, LatticePolytope)> =
            ps.into_iter().map(|p| Ok((p.num_vertices(), p.canonical_form()?, p))).collect::<Result<_>>()?;
        keyed.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        let mut cat = Catalog::new(dim);
        let mut next = 1;
        for (_, _, p) in keyed {
            if cat.insert(next, p)? {
                next += 1;
            }
        }
        Ok(cat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LatticePolytope] {
        &self.entries
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    /// Position of the entry with this key.
    pub fn lookup(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Position of the entry equivalent to `p`.
    pub fn find(&self, p: &LatticePolytope) -> Result<Option<usize>> {
        Ok(self.lookup(&p.canonical_form()?))
    }

    pub fn position_of_id(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    /// Parses and validates catalog text: every record must be smooth Fano
    /// of one common dimension. Records equivalent to an earlier one are
    /// dropped; records without an id are numbered by position.
    pub fn parse(text: &str) -> Result<Self> {
        let records = parse_records(text)?;
        let Some(first) = records.first() else {
            return Err(CatalogError::Parse { line: 1, message: "no records".into() });
        };
        let mut cat = Catalog::new(first.polytope.dim());
        for (pos, r) in records.into_iter().enumerate() {
            let id = r.id.unwrap_or(pos as u64 + 1);
            let invalid = |reason: String| CatalogError::Validation { id, line: r.line, reason };
            if r.polytope.dim() != cat.dim {
                return Err(invalid(format!("dimension {} differs from {}", r.polytope.dim(), cat.dim)));
            }
            if let Err(e) = r.polytope.require_smooth_fano() {
                return Err(invalid(e.to_string()));
            }
            cat.insert(id, r.polytope)?;
        }
        Ok(cat)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Catalog text with entries sorted by (vertex count, canonical key).
    pub fn to_text(&self) -> String {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&i, &j| {
            (self.entries[i].num_vertices(), &self.keys[i]).cmp(&(self.entries[j].num_vertices(), &self.keys[j]))
        });
        let mut out = String::new();
        for (pos, &i) in order.iter().enumerate() {
            if pos > 0 {
                out.push('\n');
            }
            out.push_str(&format_record(&self.entries[i], Some(self.ids[i])));
        }
        out
    }
}

/// One record in catalog format.
pub fn format_record(p: &LatticePolytope, id: Option<u64>) -> String {
    let mut out = format!("dim {} vertices {}", p.dim(), p.num_vertices());
    if let Some(id) = id {
        let _ = write!(out, " id {id}");
    }
    out.push('\n');
    for v in p.vertices() {
        let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_header(line: &str) -> Option<(usize, usize, Option<u64>)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    match tokens.as_slice() {
        ["dim", n, "vertices", m] => Some((n.parse().ok()?, m.parse().ok()?, None)),
        ["dim", n, "vertices", m, "id", id] => Some((n.parse().ok()?, m.parse().ok()?, Some(id.parse().ok()?))),
        _ => None,
    }
}

/// Splits catalog text into records without checking any polytope property
/// beyond well-formedness (consistent dimensions, distinct vertices).
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let err = |line: usize, message: String| CatalogError::Parse { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut records = Vec::new();
    while let Some((lno, line)) = lines.next() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (n, m, id) = parse_header(line)
            .ok_or_else(|| err(lno, format!("expected `dim N vertices M [id K]`, found `{line}`")))?;
        if n == 0 || m == 0 {
            return Err(err(lno, "dimension and vertex count must be positive".into()));
        }
        let mut rows: Vec<IntVector> = Vec::with_capacity(m);
        let mut row_lines = Vec::with_capacity(m);
        while rows.len() < m {
            let Some((vno, vline)) = lines.next() else {
                return Err(err(lno, format!("record ends after {} of {m} vertices", rows.len())));
            };
            if vline.starts_with('#') {
                continue;
            }
            if vline.is_empty() {
                return Err(err(vno, format!("blank line after {} of {m} vertices", rows.len())));
            }
            let vals: std::result::Result<Vec<i64>, _> = vline.split_whitespace().map(str::parse).collect();
            let vals = vals.map_err(|_| err(vno, format!("not a row of integers: `{vline}`")))?;
            if vals.len() != n {
                return Err(err(vno, format!("expected {n} coordinates, found {}", vals.len())));
            }
            rows.push(IntVector::new(vals));
            row_lines.push(vno);
        }
        let polytope = LatticePolytope::new(rows).map_err(|e| match e {
            PolytopeError::DuplicateVertex(i) => err(row_lines[i], "repeated vertex".into()),
            PolytopeError::CoordinateRange(i) => err(row_lines[i], "coordinate out of range".into()),
            other => err(lno, other.to_string()),
        })?;
        records.push(Record { id, line: lno, polytope });
    }
    Ok(records)
}

/// Class count after closing under I-moves with additions from a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationStep {
    pub bound: i64,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub catalog: Catalog,
    pub steps: Vec<EnumerationStep>,
}

/// Breadth-first closure under I-moves. Each representative remembers the
/// box it has already been scanned in, so raising the bound only scans the
/// new shell.
struct Closure {
    dim: usize,
    reps: Vec<LatticePolytope>,
    index: HashMap<CanonicalKey, usize>,
    scanned: Vec<i64>,
    removals_done: Vec<bool>,
}

impl Closure {
    fn new(dim: usize) -> Self {
        Closure { dim, reps: Vec::new(), index: HashMap::new(), scanned: Vec::new(), removals_done: Vec::new() }
    }

    fn insert(&mut self, key: CanonicalKey) -> Result<()> {
        if !self.index.contains_key(&key) {
            self.reps.push(key.to_polytope()?);
            self.index.insert(key, self.reps.len() - 1);
            self.scanned.push(0);
            self.removals_done.push(false);
        }
        Ok(())
    }

    fn close(&mut self, bound: i64) -> Result<()> {
        loop {
            let pending: Vec<usize> =
                (0..self.reps.len()).filter(|&i| self.scanned[i] < bound || !self.removals_done[i]).collect();
            if pending.is_empty() {
                return Ok(());
            }
            let found: Vec<Vec<CanonicalKey>> = pending
                .par_iter()
                .map(|&i| {
                    let p = &self.reps[i];
                    let mut out = Vec::new();
                    if !self.removals_done[i] {
                        out.extend(moves::i_removal_neighbors(p)?);
                    }
                    out.extend(moves::i_addition_shell(p, self.scanned[i], bound)?);
                    out.into_iter().map(|(q, _)| q.canonical_form()).collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, PolytopeError>>()?;
            for &i in &pending {
                self.scanned[i] = self.scanned[i].max(bound);
                self.removals_done[i] = true;
            }
            for key in found.into_iter().flatten() {
                self.insert(key)?;
            }
        }
    }

    fn into_catalog(self) -> Result<Catalog> {
        Catalog::from_polytopes(self.dim, self.reps)
    }
}

/// Closure of `T^n` under I-moves whose additions come from `[-bound, bound]^n`.
/// Undercounts when the box is too small.
pub fn enumerate_low_dim(n: usize, bound: i64) -> Result<Catalog> {
    if bound < 1 {
        return params("box bound must be at least 1");
    }
    let mut c = Closure::new(n);
    c.insert(make_t(n)?.canonical_form()?)?;
    c.close(bound)?;
    c.into_catalog()
}

/// Escalating enumeration: starting at `start_bound`, the box grows by one
/// until two consecutive bounds give the same class count, or `max_bound`
/// is reached. `seeds` join `T^n` as starting points, which matters when
/// some classes are not I-equivalent to `T^n`.
pub fn enumerate_escalating(
    n: usize,
    start_bound: i64,
    max_bound: i64,
    seeds: &[LatticePolytope],
) -> Result<Enumeration> {
    if start_bound < 1 || max_bound < start_bound {
        return params("need 1 <= start bound <= max bound");
    }
    let mut c = Closure::new(n);
    c.insert(make_t(n)?.canonical_form()?)?;
    for s in seeds {
        if s.dim() != n {
            return params(format!("seed has dimension {}, expected {n}", s.dim()));
        }
        c.insert(s.canonical_form()?)?;
    }
    let mut steps = Vec::new();
    let mut bound = start_bound;
    loop {
        c.close(bound)?;
        steps.push(EnumerationStep { bound, count: c.reps.len() });
        let stable = steps.len() >= 2 && steps[steps.len() - 2].count == c.reps.len();
        if stable || bound >= max_bound {
            break;
        }
        bound += 1;
    }
    Ok(Enumeration { catalog: c.into_catalog()?, steps })
}

/// Default first box for the escalating enumerator.
pub fn default_start_bound(n: usize) -> i64 {
    (n as i64 - 1).max(1)
}

#[cfg(test)]
mod tests;
