//! Exhaustive search for single-vertex insertions inside a box.
//!
//! If `Q = conv(P ∪ {w})` is smooth Fano with vertex set `V(P) ∪ {w}`, every
//! facet of `Q` through `w` is `conv(R ∪ {w})` for a ridge `R` of `P` whose
//! facet `F = R ∪ {f}` is visible from `w` and whose other facet `F'` is not.
//! Unimodularity of the new facet and the side of `lin(R)` it lies on force
//! the `f`-coordinate of `w` in the basis `F` to be exactly 1, so
//! `w = f + Σ_{r ∈ R} c_r r` with `s = Σ c_r` and `1 <= s <= -<a_F', f>`.
//!
//! The same argument bounds each `c_r`. Let `F_r` be the facet across
//! `F \ {r}` and `d_r = 1 - <a_F_r, r>`. Then `<a_F_r, w> = 1 + s - c_r d_r`,
//! and `F_r` is either visible (`c_r d_r <= s - 1`) or meets `F` in a
//! horizon ridge (`c_r = 1` and `s <= d_r - 1`). So every `(F, f, s)` leaves
//! a finite set of coefficient vectors, which is walked with interval
//! propagation against the box.

use std::collections::HashSet;

use crate::lattice::{IntMatrix, IntVector, LatticeError};
use crate::polytope::{LatticePolytope, PolytopeError, Result};

/// Points `w` with `max |w_i|` in `(inner, outer]` whose insertion keeps `p`
/// smooth Fano, sorted.
pub(super) fn insertion_points(p: &LatticePolytope, inner: i64, outer: i64) -> Result<Vec<IntVector>> {
    p.require_smooth_fano()?;
    // the segment [-1, 1] admits no insertion
    if outer <= inner || outer < 1 || p.dim() < 2 {
        return Ok(Vec::new());
    }
    if outer > 1 << 20 {
        return Err(PolytopeError::Lattice(LatticeError::Overflow));
    }
    let n = p.dim();
    let facets = p.facets()?;
    let adjacency = p.adjacency()?;
    let mut vertex_facets = vec![Vec::new(); p.num_vertices()];
    for (fi, f) in facets.iter().enumerate() {
        for &v in &f.vertices {
            vertex_facets[v].push(fi);
        }
    }
    let inverses = facets.iter().map(|f| p.facet_inverse(f)).collect::<Result<Vec<_>>>()?;
    let mut search = Search {
        p,
        inner,
        outer,
        inverses: &inverses,
        adjacency,
        vertex_facets: &vertex_facets,
        seen: HashSet::new(),
        found: Vec::new(),
    };
    for (fi, facet) in facets.iter().enumerate() {
        // d[k] = 1 - <a, v_k> for the facet across the ridge opposite v_k
        let d: Vec<i64> = (0..n)
            .map(|k| Ok(1 - facets[adjacency[fi][k]].normal.dot(p.vertex(facet.vertices[k]))?))
            .collect::<Result<_>>()?;
        for pos in 0..n {
            for s in 1..d[pos] {
                search.slice(Wall { basis: &facet.vertices, pos, s, d: &d })?;
            }
        }
    }
    let mut found = search.found;
    found.sort();
    Ok(found)
}

/// The coefficient vectors `w = f + Σ_{r ∈ R} c_r r`, `Σ c_r = s`, where `f`
/// sits at `pos` in the facet `basis`.
struct Wall<'w> {
    basis: &'w [usize],
    pos: usize,
    s: i64,
    d: &'w [i64],
}

impl Wall<'_> {
    fn allows(&self, k: usize, c: i64) -> bool {
        c * self.d[k] < self.s || (c == 1 && self.d[k] > self.s)
    }

    fn upper(&self, k: usize) -> i64 {
        let visible = (self.s - 1).div_euclid(self.d[k]);
        if self.d[k] > self.s {
            visible.max(1)
        } else {
            visible
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Search<'a> {
    p: &'a LatticePolytope,
    inner: i64,
    outer: i64,
    inverses: &'a [IntMatrix],
    adjacency: &'a [Vec<usize>],
    vertex_facets: &'a [Vec<usize>],
    seen: HashSet<Vec<i64>>,
    found: Vec<IntVector>,
}

impl Search<'_> {
    fn slice(&mut self, wall: Wall<'_>) -> Result<()> {
        let n = self.p.dim();
        let ridge: Vec<usize> = (0..n).filter(|&k| k != wall.pos).collect();
        let upper: Vec<i64> = ridge.iter().map(|&k| wall.upper(k)).collect();
        let total: i64 = upper.iter().sum();
        let bounds: Vec<(i64, i64)> = upper.iter().map(|&u| (wall.s - (total - u), u)).collect();
        if bounds.iter().any(|&(lo, hi)| lo > hi) {
            return Ok(());
        }
        let p = self.p;
        let base = p.vertex(wall.basis[wall.pos]).entries().to_vec();
        let dirs: Vec<&[i64]> = ridge.iter().map(|&k| p.vertex(wall.basis[k]).entries()).collect();
        let form = |a: &[i64], lo: i64, hi: i64| Form {
            constant: dot(a, &base),
            coef: dirs.iter().map(|d| dot(a, d)).collect(),
            lo,
            hi,
        };

        let mut hard: Vec<Form> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                form(&e, -self.outer, self.outer)
            })
            .collect();
        hard.push(Form { constant: 0, coef: vec![1; dirs.len()], lo: wall.s, hi: wall.s });
        let levels: Vec<Form> = p.facets()?.iter().map(|f| form(f.normal.entries(), 0, 0)).collect();

        let allowed = |k: usize, c: i64| wall.allows(ridge[k], c);
        let mut walk = Walk {
            hard: Forms::new(hard, &bounds),
            levels: Forms::new(levels, &bounds),
            bounds: &bounds,
            allowed: &allowed,
            dirs: &dirs,
            point: base.clone(),
            vertex_facets: self.vertex_facets,
        };
        let mut failure = None;
        walk.descend(0, &mut |w, levels| {
            if failure.is_none() {
                failure = self.leaf(w, levels).err();
            }
        });
        failure.map_or(Ok(()), Err)
    }

    /// The wall condition at every horizon ridge, not just the one whose
    /// slice produced `w`.
    fn horizon_is_unimodular(&self, w: &[i64], levels: &[i64]) -> Result<bool> {
        let facets = self.p.facets()?;
        for (fi, facet) in facets.iter().enumerate() {
            if levels[fi] <= 1 {
                continue;
            }
            let inv = &self.inverses[fi];
            for (pos, &f) in facet.vertices.iter().enumerate() {
                let far = self.adjacency[fi][pos];
                if levels[far] > 0 {
                    continue;
                }
                let coordinate: i64 = (0..w.len()).map(|i| inv.get(i, pos) * w[i]).sum();
                if coordinate != 1 || levels[fi] - 1 > -facets[far].normal.dot(self.p.vertex(f))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn leaf(&mut self, w: &[i64], levels: &[i64]) -> Result<()> {
        let size = w.iter().map(|x| x.abs()).max().unwrap_or(0);
        if size <= self.inner || size > self.outer || levels.contains(&1) {
            return Ok(());
        }
        if !self.seen.insert(w.to_vec()) || !self.horizon_is_unimodular(w, levels)? {
            return Ok(());
        }
        let w = IntVector::new(w.to_vec());
        if self.p.smooth_extension(&w)?.is_some() {
            self.found.push(w);
        }
        Ok(())
    }
}

/// `constant + Σ coef_j x_j`, required to lie in `[lo, hi]` when hard.
struct Form {
    constant: i64,
    coef: Vec<i64>,
    lo: i64,
    hi: i64,
}

/// Per-form running values and, per depth, the least and greatest
/// contribution the unassigned variables can still make.
struct Forms {
    forms: Vec<Form>,
    values: Vec<i64>,
    rest_lo: Vec<Vec<i64>>,
    rest_hi: Vec<Vec<i64>>,
}

impl Forms {
    fn new(forms: Vec<Form>, bounds: &[(i64, i64)]) -> Self {
        let m = bounds.len();
        let mut rest_lo = vec![vec![0i64; forms.len()]; m + 1];
        let mut rest_hi = rest_lo.clone();
        for (k, &(lo, hi)) in bounds.iter().enumerate().rev() {
            for (fi, f) in forms.iter().enumerate() {
                let (a, b) = (f.coef[k] * lo, f.coef[k] * hi);
                rest_lo[k][fi] = rest_lo[k + 1][fi] + a.min(b);
                rest_hi[k][fi] = rest_hi[k + 1][fi] + a.max(b);
            }
        }
        let values = forms.iter().map(|f| f.constant).collect();
        Forms { forms, values, rest_lo, rest_hi }
    }

    fn shift(&mut self, k: usize, x: i64) {
        for (v, f) in self.values.iter_mut().zip(&self.forms) {
            *v += f.coef[k] * x;
        }
    }
}

struct Walk<'a> {
    hard: Forms,
    levels: Forms,
    bounds: &'a [(i64, i64)],
    allowed: &'a dyn Fn(usize, i64) -> bool,
    dirs: &'a [&'a [i64]],
    point: Vec<i64>,
    vertex_facets: &'a [Vec<usize>],
}

impl Walk<'_> {
    /// Every old vertex must keep a facet of level <= 0, or it would stop
    /// being a vertex.
    fn vertices_can_survive(&self, k: usize) -> bool {
        let (values, rest) = (&self.levels.values, &self.levels.rest_lo[k]);
        self.vertex_facets.iter().all(|fs| fs.iter().any(|&f| values[f] + rest[f] <= 0))
    }

    /// Interval of `x_k` allowed by the hard forms, or `None` if empty.
    fn range(&self, k: usize) -> Option<(i64, i64)> {
        let (mut lo, mut hi) = self.bounds[k];
        for (fi, f) in self.hard.forms.iter().enumerate() {
            let a = f.coef[k];
            let v = self.hard.values[fi];
            // a x ∈ [lower, upper]
            let lower = f.lo - v - self.hard.rest_hi[k + 1][fi];
            let upper = f.hi - v - self.hard.rest_lo[k + 1][fi];
            if a == 0 {
                if lower > 0 || upper < 0 {
                    return None;
                }
                continue;
            }
            let ceil = |num: i64, d: i64| num.div_euclid(d) + i64::from(num.rem_euclid(d) != 0);
            let (x_lo, x_hi) =
                if a > 0 { (ceil(lower, a), upper.div_euclid(a)) } else { (ceil(-upper, -a), (-lower).div_euclid(-a)) };
            lo = lo.max(x_lo);
            hi = hi.min(x_hi);
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn descend(&mut self, k: usize, emit: &mut dyn FnMut(&[i64], &[i64])) {
        if !self.vertices_can_survive(k) {
            return;
        }
        if k == self.dirs.len() {
            if self.hard.forms.iter().zip(&self.hard.values).all(|(f, &v)| f.lo <= v && v <= f.hi) {
                emit(&self.point, &self.levels.values);
            }
            return;
        }
        let Some((lo, hi)) = self.range(k) else { return };
        for x in lo..=hi {
            if (self.allowed)(k, x) {
                self.step(k, x);
                self.descend(k + 1, emit);
                self.step(k, -x);
            }
        }
    }

    fn step(&mut self, k: usize, x: i64) {
        for (p, d) in self.point.iter_mut().zip(self.dirs[k]) {
            *p += d * x;
        }
        self.hard.shift(k, x);
        self.levels.shift(k, x);
    }
}
