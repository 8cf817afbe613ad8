//! Subcommand implementations for the `sfano` binary. Every command returns
//! a [`CommandResult`] instead of printing or exiting, so the binary stays a
//! thin wrapper and the commands can be driven from tests.

use std::fmt::Write as _;

use serde_json::json;
use smooth_fano::catalog::{self, Catalog, CatalogError, Record};
use smooth_fano::classes::{self, ClassError, Relation};
use smooth_fano::moves;
use smooth_fano::primitive::{self, PrimitiveError, Role};
use smooth_fano::{FamilyParams, LatticePolytope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 success, 1 negative verdict, 2 usage or input error, 3 internal
    /// inconsistency such as an incomplete catalog.
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult { exit_code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn verdict(yes: bool, stdout: String) -> Self {
        CommandResult { exit_code: if yes { EXIT_OK } else { EXIT_NEGATIVE }, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Self {
        CommandResult { exit_code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() }
    }

    fn inconsistent(msg: impl Into<String>) -> Self {
        CommandResult { exit_code: EXIT_INCONSISTENT, stdout: String::new(), stderr: msg.into() }
    }
}

fn class_failure(e: ClassError) -> CommandResult {
    match e {
        ClassError::Incomplete { .. } | ClassError::Catalog(CatalogError::Missing(_)) => {
            CommandResult::inconsistent(format!("catalog is incomplete: {e}"))
        }
        other => CommandResult::usage(other.to_string()),
    }
}

/// Reads a text input; `-` is standard input.
pub fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("reading stdin: {e}"))
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

/// Writes `text` to `path`; `-` is standard output, which is returned
/// instead of written.
fn write_output(path: &str, text: &str, stdout: &mut String) -> Result<(), String> {
    if path == "-" {
        stdout.push_str(text);
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| format!("{path}: {e}"))
    }
}

fn parse_one(text: &str) -> Result<LatticePolytope, CommandResult> {
    let mut records = catalog::parse_records(text).map_err(|e| CommandResult::usage(e.to_string()))?;
    match records.len() {
        0 => Err(CommandResult::usage("input contains no polytope")),
        1 => Ok(records.remove(0).polytope),
        n => Err(CommandResult::usage(format!("expected one polytope, found {n}"))),
    }
}

fn parse_smooth(text: &str) -> Result<LatticePolytope, CommandResult> {
    let p = parse_one(text)?;
    if !p.is_smooth_fano() {
        return Err(CommandResult::usage("input is not a smooth Fano polytope"));
    }
    Ok(p)
}

fn load_catalog(path: &str) -> Result<Catalog, CommandResult> {
    let text = read_input(path).map_err(CommandResult::usage)?;
    Catalog::parse(&text).map_err(|e| CommandResult::usage(format!("{path}: {e}")))
}

/// Smooth Fano, reflexive, simplicial and pseudo-symmetric verdicts for
/// every record in `input`. Exit 0 iff all records are smooth Fano.
pub fn cmd_verify(input: &str, as_json: bool) -> CommandResult {
    let records: Vec<Record> = match catalog::parse_records(input) {
        Ok(r) if r.is_empty() => return CommandResult::usage("input contains no polytope"),
        Ok(r) => r,
        Err(e) => return CommandResult::usage(e.to_string()),
    };
    let mut all = true;
    let mut out = String::new();
    let mut docs = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let p = &r.polytope;
        let smooth = p.is_smooth_fano();
        all &= smooth;
        let (reflexive, simplicial, pseudo) = (p.is_reflexive(), p.is_simplicial(), p.is_pseudo_symmetric());
        let id = r.id.unwrap_or(i as u64 + 1);
        if as_json {
            docs.push(json!({
                "id": id,
                "dim": p.dim(),
                "vertices": p.num_vertices(),
                "reflexive": reflexive,
                "simplicial": simplicial,
                "smooth_fano": smooth,
                "pseudo_symmetric": pseudo,
            }));
        } else {
            let _ = writeln!(out, "record {id} (dim {}, {} vertices)", p.dim(), p.num_vertices());
            let _ = writeln!(out, "  reflexive: {reflexive}");
            let _ = writeln!(out, "  simplicial: {simplicial}");
            let _ = writeln!(out, "  smooth Fano: {smooth}");
            let _ = writeln!(out, "  pseudo-symmetric: {pseudo}");
        }
    }
    if as_json {
        out = serde_json::to_string_pretty(&docs).expect("json") + "\n";
    }
    CommandResult::verdict(all, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Pic2,
    Pic3,
    Isolated,
    Family,
}

impl std::str::FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pic2" => Ok(Pattern::Pic2),
            "pic3" => Ok(Pattern::Pic3),
            "isolated" => Ok(Pattern::Isolated),
            "family" => Ok(Pattern::Family),
            _ => Err(format!("unknown pattern `{s}` (pic2, pic3, isolated, family)")),
        }
    }
}

/// Outcome of a pattern match: a description and, when the pattern fixes
/// vertex roles, the names to print relations with.
type Matched = Option<(String, Option<Vec<Role>>)>;

fn match_pattern(p: &LatticePolytope, pattern: Pattern) -> Result<Matched, PrimitiveError> {
    let no_match = |e: PrimitiveError| match e {
        PrimitiveError::VertexCount { .. } | PrimitiveError::Inconsistent(_) => Ok(None),
        other => Err(other),
    };
    let m = p.num_vertices();
    Ok(match pattern {
        Pattern::Pic2 => match primitive::classify_pic2(p) {
            Ok(pat) => {
                let a: Vec<String> = pat.a.iter().map(|x| x.to_string()).collect();
                Some((format!("pic2: k={} a=({})", pat.k, a.join(",")), None))
            }
            Err(e) => no_match(e)?,
        },
        Pattern::Pic3 => match primitive::classify_pic3(p) {
            Ok(primitive::Pic3Pattern::ThreeDisjoint { .. }) => Some(("pic3: three disjoint collections".into(), None)),
            Ok(primitive::Pic3Pattern::FiveCollections(g)) => {
                let s = g.sizes();
                let text = format!(
                    "pic3: five collections, |V|,|Y|,|Z|,|T|,|U| = {},{},{},{},{}",
                    s[0], s[1], s[2], s[3], s[4]
                );
                Some((text, Some(g.roles(m))))
            }
            Err(e) => no_match(e)?,
        },
        Pattern::Isolated => match primitive::match_isolated_pattern(p)? {
            Some((a, b)) => {
                let roles = match primitive::classify_pic3(p)? {
                    primitive::Pic3Pattern::FiveCollections(g) => Some(g.roles(m)),
                    _ => None,
                };
                Some((format!("isolated: (a,b)=({a},{b})"), roles))
            }
            None => None,
        },
        Pattern::Family => {
            primitive::match_family_pattern(p)?.map(|fm| (format!("family: {}", fm.params), Some(fm.roles)))
        }
    })
}

/// All primitive relations with their degrees; with a pattern, also the
/// matched parameters (exit 1 and "no match" otherwise).
pub fn cmd_relations(input: &str, pattern: Option<Pattern>, as_json: bool) -> CommandResult {
    let p = match parse_smooth(input) {
        Ok(p) => p,
        Err(r) => return r,
    };
    let pcs = match primitive::primitive_collections(&p) {
        Ok(x) => x,
        Err(e) => return CommandResult::inconsistent(e.to_string()),
    };
    let matched = match pattern.map(|pat| match_pattern(&p, pat)).transpose() {
        Ok(m) => m,
        Err(e) => return CommandResult::inconsistent(e.to_string()),
    };
    let roles = matched.as_ref().and_then(|m| m.as_ref()).and_then(|(_, r)| r.clone());
    let names = primitive::vertex_names(p.num_vertices(), roles.as_deref());
    let found = matched.as_ref().map(|m| m.is_some()).unwrap_or(true);
    let mut out = String::new();
    if as_json {
        let rels: Vec<_> = pcs
            .iter()
            .map(|pc| {
                json!({
                    "members": pc.members,
                    "rhs": pc.rhs,
                    "degree": pc.degree,
                    "text": primitive::format_relation(pc, &names),
                })
            })
            .collect();
        let mut doc = json!({ "vertex_names": names, "relations": rels });
        if let Some(m) = &matched {
            doc["pattern"] = json!(m.as_ref().map(|(t, _)| t.clone()));
        }
        out = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    } else {
        for pc in &pcs {
            let _ = writeln!(out, "{}, degree {}", primitive::format_relation(pc, &names), pc.degree);
        }
        match &matched {
            Some(Some((text, _))) => {
                let _ = writeln!(out, "pattern {text}");
            }
            Some(None) => out.push_str("no match\n"),
            None => {}
        }
    }
    CommandResult::verdict(found, out)
}

fn parse_usize(s: &str) -> Result<usize, CommandResult> {
    s.parse().map_err(|_| CommandResult::usage(format!("expected a non-negative integer, found `{s}`")))
}

fn build(name: &str, args: &[String]) -> Result<LatticePolytope, CommandResult> {
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(CommandResult::usage(format!("`{name}` takes {k} argument(s), got {}", args.len())))
        }
    };
    let ce = |e: CatalogError| CommandResult::usage(e.to_string());
    match name {
        "T" => {
            arity(1)?;
            catalog::make_t(parse_usize(&args[0])?).map_err(ce)
        }
        "V" => {
            arity(1)?;
            catalog::make_v(parse_usize(&args[0])?).map_err(ce)
        }
        "Vt" => {
            arity(1)?;
            catalog::make_v_tilde(parse_usize(&args[0])?).map_err(ce)
        }
        "pic3" => {
            arity(2)?;
            catalog::make_isolated_pic3(parse_usize(&args[0])?, parse_usize(&args[1])?).map_err(ce)
        }
        "family" => {
            if args.len() < 3 {
                return Err(CommandResult::usage("`family` takes a b k l_1 .. l_k"));
            }
            let k = parse_usize(&args[2])?;
            arity(3 + k)?;
            let l = args[3..].iter().map(|s| parse_usize(s)).collect::<Result<Vec<_>, _>>()?;
            let params = FamilyParams::new(parse_usize(&args[0])?, parse_usize(&args[1])?, l).map_err(ce)?;
            catalog::make_family(&params).map_err(ce)
        }
        "cor45" => {
            arity(2)?;
            let params = catalog::isolated_params(parse_usize(&args[0])?, parse_usize(&args[1])?).map_err(ce)?;
            catalog::make_family(&params).map_err(ce)
        }
        "remark7d" => {
            arity(0)?;
            catalog::make_remark_example_7d().map_err(ce)
        }
        "freesum" => {
            arity(2)?;
            let mut parts = Vec::new();
            for path in args {
                parts.push(parse_one(&read_input(path).map_err(CommandResult::usage)?)?);
            }
            parts[0].free_sum(&parts[1]).map_err(|e| CommandResult::usage(e.to_string()))
        }
        _ => Err(CommandResult::usage(format!(
            "unknown construction `{name}` (T, V, Vt, pic3, family, cor45, remark7d, freesum)"
        ))),
    }
}

/// Prints a named construction in catalog format.
pub fn cmd_construct(name: &str, args: &[String]) -> CommandResult {
    match build(name, args) {
        Ok(p) => CommandResult::ok(catalog::format_record(&p, None)),
        Err(r) => r,
    }
}

/// How isolation is decided.
#[derive(Debug, Clone)]
pub enum IsolationSource {
    /// Exact, against a complete catalog file.
    Catalog(String),
    /// Exact removals and F-moves, additions searched in `[-B, B]^n` only.
    Box(i64),
}

/// F- and I-isolation verdicts. Exit 0 iff the polytope is I-isolated
/// (which implies F-isolated).
pub fn cmd_isolate(input: &str, source: &IsolationSource) -> CommandResult {
    let p = match parse_smooth(input) {
        Ok(p) => p,
        Err(r) => return r,
    };
    let mut out = String::new();
    let isolated = match source {
        IsolationSource::Catalog(path) => {
            let cat = match load_catalog(path) {
                Ok(c) => c,
                Err(r) => return r,
            };
            if cat.dim() != p.dim() {
                return CommandResult::usage(format!("catalog has dimension {}, input {}", cat.dim(), p.dim()));
            }
            let f = match classes::is_f_isolated(&p, &cat) {
                Ok(f) => f,
                Err(e) => return class_failure(e),
            };
            let i = match classes::is_i_isolated(&p, &cat) {
                Ok(i) => i,
                Err(e) => return class_failure(e),
            };
            let _ = writeln!(out, "F-isolated: {f} (exact)");
            let _ = writeln!(out, "I-isolated: {i} (exact)");
            i
        }
        IsolationSource::Box(bound) => {
            if *bound < 1 {
                return CommandResult::usage("box bound must be at least 1");
            }
            let found = moves::f_neighbors(&p)
                .and_then(|f| Ok((f, moves::i_removal_neighbors(&p)?, moves::i_addition_search(&p, *bound)?)));
            let (f, removals, additions) = match found {
                Ok(x) => x,
                Err(e) => return CommandResult::inconsistent(e.to_string()),
            };
            let list = |ns: &[moves::Neighbor]| {
                if ns.is_empty() {
                    "none".to_string()
                } else {
                    ns.iter().map(|(_, r)| r.to_string()).collect::<Vec<_>>().join("; ")
                }
            };
            let _ = writeln!(out, "F-moves: {}", list(&f));
            let _ = writeln!(out, "removals: {}", list(&removals));
            let _ = writeln!(out, "additions within box {bound}: {}", list(&additions));
            let _ = writeln!(out, "F-isolated: {} (exact)", f.is_empty());
            let i = removals.is_empty() && additions.is_empty();
            if i {
                let _ = writeln!(out, "I-isolated: true (bounded({bound}))");
            } else {
                let _ = writeln!(out, "I-isolated: false (exact)");
            }
            i
        }
    };
    CommandResult::verdict(isolated, out)
}

#[derive(Debug, Clone, Default)]
pub struct GraphOutputs {
    pub dot: Option<String>,
    pub json: Option<String>,
    pub report: bool,
    pub verify_witnesses: bool,
}

/// Builds the F- or I-graph of a complete catalog, writes the requested
/// exports and prints the class report.
pub fn cmd_graph(catalog_path: &str, relation: Relation, outputs: &GraphOutputs) -> CommandResult {
    let cat = match load_catalog(catalog_path) {
        Ok(c) => c,
        Err(r) => return r,
    };
    let g = match classes::build_graph(&cat, relation) {
        Ok(g) => g,
        Err(e) => return class_failure(e),
    };
    let mut out = String::new();
    if let Some(path) = &outputs.dot {
        if let Err(e) = write_output(path, &classes::export_dot(&g), &mut out) {
            return CommandResult::usage(e);
        }
    }
    if let Some(path) = &outputs.json {
        if let Err(e) = write_output(path, &classes::export_json(&g), &mut out) {
            return CommandResult::usage(e);
        }
    }
    if outputs.verify_witnesses {
        match g.failing_witnesses(&cat) {
            Ok(bad) if bad.is_empty() => {
                let _ = writeln!(out, "witnesses: {} verified", g.edges.len());
            }
            Ok(bad) => return CommandResult::inconsistent(format!("witness replay failed on edges {bad:?}")),
            Err(e) => return class_failure(e),
        }
    }
    let r = classes::report(&g);
    if outputs.report || (outputs.dot.is_none() && outputs.json.is_none()) {
        out.push_str(&r.to_string());
    }
    CommandResult::ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    /// Fixed box bound; escalate from the default start when absent.
    pub bound: Option<i64>,
    pub max_bound: Option<i64>,
    pub out: Option<String>,
    /// Allow n > 4.
    pub force: bool,
    /// Extra starting polytopes, in catalog format.
    pub seeds: Option<String>,
}

/// Enumerates smooth Fano `n`-polytopes by closing `T^n` (and any seeds)
/// under I-moves within a box; prints each step's class count.
pub fn cmd_enumerate(n: usize, opts: &EnumerateOptions) -> CommandResult {
    if n == 0 {
        return CommandResult::usage("dimension must be positive");
    }
    if n > 4 && !opts.force {
        return CommandResult::usage(format!("enumerating dimension {n} is slow; pass --force to run it anyway"));
    }
    let seeds = match &opts.seeds {
        Some(path) => match read_input(path).and_then(|t| catalog::parse_records(&t).map_err(|e| e.to_string())) {
            Ok(rs) => rs.into_iter().map(|r| r.polytope).collect(),
            Err(e) => return CommandResult::usage(e),
        },
        None => Vec::new(),
    };
    let (start, max) = match opts.bound {
        Some(b) => (b, b),
        None => {
            let s = catalog::default_start_bound(n);
            (s, opts.max_bound.unwrap_or(s + 4))
        }
    };
    let e = match catalog::enumerate_escalating(n, start, max, &seeds) {
        Ok(e) => e,
        Err(e @ CatalogError::Params(_)) => return CommandResult::usage(e.to_string()),
        Err(e) => return CommandResult::inconsistent(e.to_string()),
    };
    let mut out = String::new();
    for s in &e.steps {
        let _ = writeln!(out, "box {}: {} classes", s.bound, s.count);
    }
    let stable = e.steps.len() >= 2 && e.steps[e.steps.len() - 2].count == e.catalog.len();
    if opts.bound.is_none() && !stable {
        let _ = writeln!(out, "warning: count not yet stable at box {max}");
    }
    let _ = writeln!(out, "count: {}", e.catalog.len());
    if let Some(path) = &opts.out {
        if let Err(e) = write_output(path, &e.catalog.to_text(), &mut out) {
            return CommandResult::usage(e);
        }
    }
    CommandResult::ok(out)
}

/// Lists the F-moves of a polytope, or its I-moves with additions drawn
/// from `[-B, B]^n`.
pub fn cmd_moves(input: &str, relation: Relation, bound: i64) -> CommandResult {
    let p = match parse_smooth(input) {
        Ok(p) => p,
        Err(r) => return r,
    };
    let found = match relation {
        Relation::F => moves::f_neighbors(&p),
        Relation::I => moves::i_removal_neighbors(&p).and_then(|mut r| {
            r.extend(moves::i_addition_search(&p, bound)?);
            Ok(r)
        }),
    };
    let found = match found {
        Ok(f) => f,
        Err(e) => return CommandResult::inconsistent(e.to_string()),
    };
    let mut out = String::new();
    for (q, record) in &found {
        let key = q.canonical_form().map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{record}  ->  {key}");
    }
    let _ = writeln!(out, "{} move(s)", found.len());
    CommandResult::ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_names() {
        assert_eq!("family".parse::<Pattern>().unwrap(), Pattern::Family);
        assert!("pic4".parse::<Pattern>().is_err());
    }

    #[test]
    fn construct_arity() {
        assert_eq!(cmd_construct("T", &[]).exit_code, EXIT_USAGE);
        assert_eq!(cmd_construct("T", &["x".into()]).exit_code, EXIT_USAGE);
        assert_eq!(cmd_construct("family", &["2".into(), "1".into(), "1".into()]).exit_code, EXIT_USAGE);
        assert_eq!(cmd_construct("nope", &[]).exit_code, EXIT_USAGE);
    }

    #[test]
    fn enumerate_guard() {
        assert_eq!(cmd_enumerate(5, &EnumerateOptions::default()).exit_code, EXIT_USAGE);
        assert_eq!(cmd_enumerate(0, &EnumerateOptions::default()).exit_code, EXIT_USAGE);
    }
}
