//! Dominating-set solvers driven by clique-width expressions.
//!
//! A k-expression builds a labeled graph from single labeled vertices by
//! disjoint union, relabeling, and label-pair edge creation. The solvers
//! walk the expression bottom-up, bucketing candidate vertex subsets by a
//! *trace* small enough to enumerate:
//!
//! * for connected dominating sets, the trace is the pair of the signature
//!   (for every label set `C ⊆ [k]`, does the candidate induce zero, one,
//!   or at least two connected components whose labels are exactly `C`,
//!   counted in the three-element arithmetic of [`Tribool`]) and the set of
//!   dominated labels;
//! * for plain dominating sets, the label set of the candidate replaces the
//!   signature.
//!
//! Each bucket holds a join/union expression of the indicator functions of
//! the candidates with that trace; buckets denote disjoint sets, so merging
//! with `uplus` is always legal. The final answer unions the accepting
//! buckets: one connected component and all labels dominated (respectively
//! all labels dominated).

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::expr::{merge_bucket, uplus_fold, ExprHandle, ExprStore, Universe};
use crate::sexpr::{self, Sexpr};
use crate::{Error, Result};

/// Trace tables are doubly exponential in k; refuse wider expressions by
/// default.
pub const DEFAULT_MAX_K: usize = 4;

/// One node of a clique-width expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KNode {
    /// A single vertex carrying a label in `1..=k`.
    Vertex { label: usize, name: String },
    /// Disjoint union of two labeled graphs.
    Oplus(Box<KNode>, Box<KNode>),
    /// Give every vertex labeled `from` the label `to`.
    Relabel { from: usize, to: usize, child: Box<KNode> },
    /// Create every edge between an `i`-labeled and a `j`-labeled vertex.
    EdgeCreate { i: usize, j: usize, child: Box<KNode> },
}

/// A validated clique-width expression together with its width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KExpression {
    k: usize,
    root: KNode,
}

impl KExpression {
    /// Wrap and validate an AST. The width is the largest label mentioned.
    pub fn new(root: KNode) -> Result<KExpression> {
        let mut max_label = 0usize;
        let mut names = BTreeSet::new();
        validate_knode(&root, &mut max_label, &mut names)?;
        Ok(KExpression { k: max_label, root })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> &KNode {
        &self.root
    }

    /// Parse the s-expression file format:
    /// `(vertex <i> <name>) | (oplus E E) | (relabel <i> <j> E) | (edge <i> <j> E)`
    /// with 1-based labels.
    pub fn parse(text: &str) -> Result<KExpression> {
        let tree = sexpr::parse(text)?;
        KExpression::new(parse_knode(&tree)?)
    }

    /// Render to the file format (no sharing; k-expressions are trees).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_knode(&self.root, &mut out);
        out.push('\n');
        out
    }
}

fn validate_knode(
    node: &KNode,
    max_label: &mut usize,
    names: &mut BTreeSet<String>,
) -> Result<()> {
    match node {
        KNode::Vertex { label, name } => {
            if *label == 0 {
                return Err(Error::legality("labels are 1-based; 0 is not a label"));
            }
            *max_label = (*max_label).max(*label);
            if !names.insert(name.clone()) {
                return Err(Error::legality(format!("duplicate vertex name {name:?}")));
            }
            Ok(())
        }
        KNode::Oplus(a, b) => {
            validate_knode(a, max_label, names)?;
            validate_knode(b, max_label, names)
        }
        KNode::Relabel { from, to, child } | KNode::EdgeCreate { i: from, j: to, child } => {
            if *from == 0 || *to == 0 {
                return Err(Error::legality("labels are 1-based; 0 is not a label"));
            }
            if from == to {
                return Err(Error::legality(format!(
                    "label arguments must differ, got ({from}, {to})"
                )));
            }
            *max_label = (*max_label).max(*from).max(*to);
            validate_knode(child, max_label, names)
        }
    }
}

fn parse_knode(tree: &Sexpr) -> Result<KNode> {
    let (items, line) = match tree {
        Sexpr::List { items, line } => (items, *line),
        Sexpr::Atom { text, line } => {
            return Err(Error::parse(*line, format!("expected a list, got {text:?}")))
        }
    };
    let head = items
        .first()
        .ok_or_else(|| Error::parse(line, "empty k-expression list"))?
        .as_atom()?;
    let expect = |n: usize| -> Result<()> {
        if items.len() != n + 1 {
            return Err(Error::parse(
                line,
                format!("{head} takes {n} arguments, got {}", items.len() - 1),
            ));
        }
        Ok(())
    };
    let parse_label = |s: &Sexpr| -> Result<usize> {
        s.as_atom()?
            .parse::<usize>()
            .map_err(|_| Error::parse(s.line(), "expected a numeric label"))
    };
    match head {
        "vertex" => {
            expect(2)?;
            Ok(KNode::Vertex {
                label: parse_label(&items[1])?,
                name: items[2].as_atom()?.to_string(),
            })
        }
        "oplus" => {
            expect(2)?;
            Ok(KNode::Oplus(
                Box::new(parse_knode(&items[1])?),
                Box::new(parse_knode(&items[2])?),
            ))
        }
        "relabel" => {
            expect(3)?;
            Ok(KNode::Relabel {
                from: parse_label(&items[1])?,
                to: parse_label(&items[2])?,
                child: Box::new(parse_knode(&items[3])?),
            })
        }
        "edge" => {
            expect(3)?;
            Ok(KNode::EdgeCreate {
                i: parse_label(&items[1])?,
                j: parse_label(&items[2])?,
                child: Box::new(parse_knode(&items[3])?),
            })
        }
        other => Err(Error::parse(line, format!("unknown k-expression operator {other:?}"))),
    }
}

fn write_knode(node: &KNode, out: &mut String) {
    match node {
        KNode::Vertex { label, name } => write!(out, "(vertex {label} {name})").unwrap(),
        KNode::Oplus(a, b) => {
            out.push_str("(oplus ");
            write_knode(a, out);
            out.push(' ');
            write_knode(b, out);
            out.push(')');
        }
        KNode::Relabel { from, to, child } => {
            write!(out, "(relabel {from} {to} ").unwrap();
            write_knode(child, out);
            out.push(')');
        }
        KNode::EdgeCreate { i, j, child } => {
            write!(out, "(edge {i} {j} ").unwrap();
            write_knode(child, out);
            out.push(')');
        }
    }
}

/// A labeled graph: the value of a k-expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    /// Vertex names in first-appearance order; the index is the vertex id.
    pub names: Vec<String>,
    /// Undirected edges as ordered pairs `(u, v)` with `u < v`.
    pub edges: BTreeSet<(usize, usize)>,
    /// 1-based label per vertex.
    pub labels: Vec<usize>,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| v != u && self.has_edge(u, v))
            .collect()
    }

    /// Build an unlabeled graph (all labels 1) from named vertices and
    /// name pairs.
    pub fn from_edges<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> LabeledGraph {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let labels = vec![1; names.len()];
        let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        LabeledGraph { names, edges, labels }
    }

    /// Edge-list export: `n m` header, then one `u v` line per edge with
    /// vertices numbered 1..n in first-appearance order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edges.len());
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    /// The expression universe for subset problems: domain = vertices,
    /// codomain = the indicator values "0" and "1".
    pub fn indicator_universe(&self) -> Result<Universe> {
        Universe::new(
            self.names.to_vec(),
            vec!["0".to_string(), "1".to_string()],
        )
    }
}

/// Evaluate a k-expression to its labeled graph.
pub fn eval_kexpr(kx: &KExpression) -> Result<LabeledGraph> {
    let mut graph = LabeledGraph {
        names: Vec::new(),
        edges: BTreeSet::new(),
        labels: Vec::new(),
    };
    eval_knode(&kx.root, &mut graph)?;
    Ok(graph)
}

/// Evaluates `node` into `graph`, returning the ids of the vertices it
/// contributed.
fn eval_knode(node: &KNode, graph: &mut LabeledGraph) -> Result<Vec<usize>> {
    match node {
        KNode::Vertex { label, name } => {
            let id = graph.names.len();
            graph.names.push(name.clone());
            graph.labels.push(*label);
            Ok(vec![id])
        }
        KNode::Oplus(a, b) => {
            let mut va = eval_knode(a, graph)?;
            va.extend(eval_knode(b, graph)?);
            Ok(va)
        }
        KNode::Relabel { from, to, child } => {
            let vs = eval_knode(child, graph)?;
            for &v in &vs {
                if graph.labels[v] == *from {
                    graph.labels[v] = *to;
                }
            }
            Ok(vs)
        }
        KNode::EdgeCreate { i, j, child } => {
            let vs = eval_knode(child, graph)?;
            let with_i: Vec<usize> = vs.iter().copied().filter(|&v| graph.labels[v] == *i).collect();
            let with_j: Vec<usize> = vs.iter().copied().filter(|&v| graph.labels[v] == *j).collect();
            for &u in &with_i {
                for &v in &with_j {
                    graph.edges.insert((u.min(v), u.max(v)));
                }
            }
            Ok(vs)
        }
    }
}

// ---------------------------------------------------------------------------
// Signatures and traces
// ---------------------------------------------------------------------------

/// Component counts saturated at two: zero, one, or at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tribool {
    Zero,
    One,
    TwoPlus,
}

/// Saturating addition of component counts.
pub fn tribool_add(a: Tribool, b: Tribool) -> Tribool {
    use Tribool::*;
    match (a, b) {
        (Zero, x) | (x, Zero) => x,
        _ => TwoPlus,
    }
}

/// For each label set `C ⊆ [k]` (indexed by bitmask), how many connected
/// components of the candidate have label set exactly `C`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(Vec<Tribool>);

impl Signature {
    pub fn zeros(k: usize) -> Signature {
        Signature(vec![Tribool::Zero; 1 << k])
    }

    pub fn k(&self) -> usize {
        self.0.len().trailing_zeros() as usize
    }

    pub fn get(&self, label_set: usize) -> Tribool {
        self.0[label_set]
    }

    pub fn set(&mut self, label_set: usize, v: Tribool) {
        self.0[label_set] = v;
    }

    /// Total number of connected components, in the saturating arithmetic.
    pub fn norm(&self) -> Tribool {
        self.0.iter().copied().fold(Tribool::Zero, tribool_add)
    }
}

/// Pointwise signature addition: the components of a disjoint union are the
/// components of the parts.
pub fn sig_add(a: &Signature, b: &Signature) -> Signature {
    debug_assert_eq!(a.0.len(), b.0.len());
    Signature(
        a.0.iter()
            .zip(&b.0)
            .map(|(&x, &y)| tribool_add(x, y))
            .collect(),
    )
}

fn label_bit(label: usize) -> usize {
    1 << (label - 1)
}

/// Relabeling on a label set: `from` becomes `to`.
fn relabel_set(c: usize, from: usize, to: usize) -> usize {
    if c & label_bit(from) != 0 {
        (c | label_bit(to)) & !label_bit(from)
    } else {
        c
    }
}

/// Signature after relabeling: each target entry sums the entries of its
/// preimages; empty sums give zero.
pub fn sig_relabel(sig: &Signature, from: usize, to: usize) -> Signature {
    let mut out = Signature::zeros(sig.k());
    for c in 0..sig.0.len() {
        let target = relabel_set(c, from, to);
        out.0[target] = tribool_add(out.0[target], sig.0[c]);
    }
    out
}

/// Dominated labels after relabeling `from -> to`. Label `from` becomes
/// vacuously dominated (its class empties); `to` stays dominated only if
/// both merged classes were.
pub fn dom_relabel(dom: usize, from: usize, to: usize) -> usize {
    let both = label_bit(from) | label_bit(to);
    if dom & both == both {
        dom
    } else {
        (dom | label_bit(from)) & !label_bit(to)
    }
}

/// The union of the label sets of components touching label `i` or `j`.
fn merged_component(sig: &Signature, i: usize, j: usize) -> usize {
    let ij = label_bit(i) | label_bit(j);
    let mut c0 = 0usize;
    for c in 0..sig.0.len() {
        if sig.0[c] != Tribool::Zero && c & ij != 0 {
            c0 |= c;
        }
    }
    c0
}

/// Signature after creating all edges between labels `i` and `j`: if the
/// candidate holds vertices of both labels, every component touching either
/// label merges into one.
pub fn sig_edge(sig: &Signature, i: usize, j: usize) -> Signature {
    let ij = label_bit(i) | label_bit(j);
    let c0 = merged_component(sig, i, j);
    if c0 & ij != ij {
        return sig.clone();
    }
    let mut out = sig.clone();
    for c in 0..out.0.len() {
        if c & ij != 0 {
            out.0[c] = Tribool::Zero;
        }
    }
    out.0[c0] = Tribool::One;
    out
}

/// Dominated labels after creating edges between labels `i` and `j`: a
/// candidate holding an `i`-vertex dominates every `j`-vertex and vice
/// versa. The candidate's label set is read off the signature.
pub fn dom_edge(sig: &Signature, dom: usize, i: usize, j: usize) -> usize {
    let c0 = merged_component(sig, i, j);
    let mut out = dom;
    if c0 & label_bit(i) != 0 {
        out |= label_bit(j);
    }
    if c0 & label_bit(j) != 0 {
        out |= label_bit(i);
    }
    out
}

/// The trace of a candidate subset in the connected variant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CdsTrace {
    pub signature: Signature,
    /// Bitmask of dominated labels.
    pub domination: usize,
}

/// The trace in the plain dominating-set variant: label set and dominated
/// labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DsTrace {
    pub labels: usize,
    pub domination: usize,
}

/// Buckets of candidate subsets by trace; an absent trace denotes the empty
/// set. Buckets denote pairwise disjoint candidate sets.
pub type TraceTable = BTreeMap<CdsTrace, ExprHandle>;

/// Work counters of a solver run.
#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    /// Number of (left, right) bucket pairs combined at each disjoint-union
    /// node.
    pub oplus_pairs: Vec<usize>,
}

/// The trace table of one k-expression node, kept for verification: the
/// vertex ids contributed by the subexpression and its buckets.
#[derive(Debug, Clone)]
pub struct NodeTrace {
    pub vertex_range: std::ops::Range<usize>,
    pub table: TraceTable,
}

/// A solver result: the expression store, the root expression of the
/// solution set, and work counters. The connected variant also keeps the
/// per-node trace tables (in post-order of the k-expression) so tests can
/// re-derive every bucket from scratch.
#[derive(Debug)]
pub struct Solution {
    pub store: ExprStore,
    pub root: ExprHandle,
    pub graph: LabeledGraph,
    pub stats: SolveStats,
    pub node_tables: Vec<NodeTrace>,
}

/// Build a join/union expression of the indicator functions of all
/// connected dominating sets of the graph denoted by `kx`.
pub fn solve_semiring_cds(kx: &KExpression) -> Result<Solution> {
    solve_semiring_cds_capped(kx, DEFAULT_MAX_K)
}

/// As [`solve_semiring_cds`] with an explicit width cap.
pub fn solve_semiring_cds_capped(kx: &KExpression, max_k: usize) -> Result<Solution> {
    let k = check_width(kx, max_k)?;
    let graph = eval_kexpr(kx)?;
    let mut store = ExprStore::new(graph.indicator_universe()?);
    let mut stats = SolveStats::default();
    let mut next_vertex = 0usize;
    let mut node_tables = Vec::new();
    let table = cds_tables(
        &mut store,
        &kx.root,
        k,
        &mut next_vertex,
        &mut stats,
        &mut node_tables,
    )?;

    let full = full_mask(k);
    let accepting = table.iter().filter_map(|(trace, &e)| {
        (trace.domination == full && trace.signature.norm() == Tribool::One).then_some(e)
    });
    let accepting: Vec<ExprHandle> = accepting.collect();
    let root = match uplus_fold(&mut store, accepting)? {
        Some(h) => h,
        None => store.make_empty(),
    };
    Ok(Solution {
        store,
        root,
        graph,
        stats,
        node_tables,
    })
}

fn check_width(kx: &KExpression, max_k: usize) -> Result<usize> {
    if kx.k > max_k {
        return Err(Error::usage(format!(
            "k-expression width {} exceeds the cap {max_k}; trace tables grow doubly \
             exponentially in k",
            kx.k
        )));
    }
    Ok(kx.k.max(1))
}

fn full_mask(k: usize) -> usize {
    (1 << k) - 1
}

fn cds_tables(
    store: &mut ExprStore,
    node: &KNode,
    k: usize,
    next_vertex: &mut usize,
    stats: &mut SolveStats,
    node_tables: &mut Vec<NodeTrace>,
) -> Result<TraceTable> {
    let start_vertex = *next_vertex;
    let table = cds_tables_inner(store, node, k, next_vertex, stats, node_tables)?;
    node_tables.push(NodeTrace {
        vertex_range: start_vertex..*next_vertex,
        table: table.clone(),
    });
    Ok(table)
}

fn cds_tables_inner(
    store: &mut ExprStore,
    node: &KNode,
    k: usize,
    next_vertex: &mut usize,
    stats: &mut SolveStats,
    node_tables: &mut Vec<NodeTrace>,
) -> Result<TraceTable> {
    match node {
        KNode::Vertex { label, .. } => {
            let v = *next_vertex;
            *next_vertex += 1;
            let mut table = TraceTable::new();

            // the singleton candidate: one component labeled {label},
            // everything dominated
            let mut sig = Signature::zeros(k);
            sig.set(label_bit(*label), Tribool::One);
            let picked = store.make_leaf_indexed(v, 1);
            table.insert(
                CdsTrace {
                    signature: sig,
                    domination: full_mask(k),
                },
                picked,
            );

            // the empty candidate: no components, this label undominated
            let skipped = store.make_leaf_indexed(v, 0);
            table.insert(
                CdsTrace {
                    signature: Signature::zeros(k),
                    domination: full_mask(k) & !label_bit(*label),
                },
                skipped,
            );
            Ok(table)
        }
        KNode::Relabel { from, to, child } => {
            let child_table = cds_tables(store, child, k, next_vertex, stats, node_tables)?;
            let mut table = TraceTable::new();
            for (trace, e) in child_table {
                let target = CdsTrace {
                    signature: sig_relabel(&trace.signature, *from, *to),
                    domination: dom_relabel(trace.domination, *from, *to),
                };
                merge_bucket(store, &mut table, target, e)?;
            }
            Ok(table)
        }
        KNode::EdgeCreate { i, j, child } => {
            let child_table = cds_tables(store, child, k, next_vertex, stats, node_tables)?;
            let mut table = TraceTable::new();
            for (trace, e) in child_table {
                let target = CdsTrace {
                    signature: sig_edge(&trace.signature, *i, *j),
                    domination: dom_edge(&trace.signature, trace.domination, *i, *j),
                };
                merge_bucket(store, &mut table, target, e)?;
            }
            Ok(table)
        }
        KNode::Oplus(a, b) => {
            let left = cds_tables(store, a, k, next_vertex, stats, node_tables)?;
            let right = cds_tables(store, b, k, next_vertex, stats, node_tables)?;
            let mut table = TraceTable::new();
            let mut pairs = 0usize;
            for (t1, &e1) in &left {
                for (t2, &e2) in &right {
                    pairs += 1;
                    let joined = store.make_join(e1, e2)?;
                    let target = CdsTrace {
                        signature: sig_add(&t1.signature, &t2.signature),
                        domination: t1.domination & t2.domination,
                    };
                    merge_bucket(store, &mut table, target, joined)?;
                }
            }
            stats.oplus_pairs.push(pairs);
            Ok(table)
        }
    }
}

/// Build a join/union expression of the indicator functions of all
/// dominating sets (connectivity not required).
pub fn solve_semiring_ds(kx: &KExpression) -> Result<Solution> {
    solve_semiring_ds_capped(kx, DEFAULT_MAX_K)
}

/// As [`solve_semiring_ds`] with an explicit width cap.
pub fn solve_semiring_ds_capped(kx: &KExpression, max_k: usize) -> Result<Solution> {
    let k = check_width(kx, max_k)?;
    let graph = eval_kexpr(kx)?;
    let mut store = ExprStore::new(graph.indicator_universe()?);
    let mut stats = SolveStats::default();
    let mut next_vertex = 0usize;
    let table = ds_tables(&mut store, &kx.root, k, &mut next_vertex, &mut stats)?;

    let full = full_mask(k);
    let accepting: Vec<ExprHandle> = table
        .iter()
        .filter_map(|(trace, &e)| (trace.domination == full).then_some(e))
        .collect();
    let root = match uplus_fold(&mut store, accepting)? {
        Some(h) => h,
        None => store.make_empty(),
    };
    Ok(Solution {
        store,
        root,
        graph,
        stats,
        node_tables: Vec::new(),
    })
}

fn ds_tables(
    store: &mut ExprStore,
    node: &KNode,
    k: usize,
    next_vertex: &mut usize,
    stats: &mut SolveStats,
) -> Result<BTreeMap<DsTrace, ExprHandle>> {
    match node {
        KNode::Vertex { label, .. } => {
            let v = *next_vertex;
            *next_vertex += 1;
            let mut table = BTreeMap::new();
            let picked = store.make_leaf_indexed(v, 1);
            table.insert(
                DsTrace {
                    labels: label_bit(*label),
                    domination: full_mask(k),
                },
                picked,
            );
            let skipped = store.make_leaf_indexed(v, 0);
            table.insert(
                DsTrace {
                    labels: 0,
                    domination: full_mask(k) & !label_bit(*label),
                },
                skipped,
            );
            Ok(table)
        }
        KNode::Relabel { from, to, child } => {
            let child_table = ds_tables(store, child, k, next_vertex, stats)?;
            let mut table = BTreeMap::new();
            for (trace, e) in child_table {
                let target = DsTrace {
                    labels: relabel_set(trace.labels, *from, *to),
                    domination: dom_relabel(trace.domination, *from, *to),
                };
                merge_bucket(store, &mut table, target, e)?;
            }
            Ok(table)
        }
        KNode::EdgeCreate { i, j, child } => {
            let child_table = ds_tables(store, child, k, next_vertex, stats)?;
            let mut table = BTreeMap::new();
            for (trace, e) in child_table {
                let mut dom = trace.domination;
                if trace.labels & label_bit(*i) != 0 {
                    dom |= label_bit(*j);
                }
                if trace.labels & label_bit(*j) != 0 {
                    dom |= label_bit(*i);
                }
                let target = DsTrace {
                    labels: trace.labels,
                    domination: dom,
                };
                merge_bucket(store, &mut table, target, e)?;
            }
            Ok(table)
        }
        KNode::Oplus(a, b) => {
            let left = ds_tables(store, a, k, next_vertex, stats)?;
            let right = ds_tables(store, b, k, next_vertex, stats)?;
            let mut table = BTreeMap::new();
            let mut pairs = 0usize;
            for (t1, &e1) in &left {
                for (t2, &e2) in &right {
                    pairs += 1;
                    let joined = store.make_join(e1, e2)?;
                    let target = DsTrace {
                        labels: t1.labels | t2.labels,
                        domination: t1.domination & t2.domination,
                    };
                    merge_bucket(store, &mut table, target, joined)?;
                }
            }
            stats.oplus_pairs.push(pairs);
            Ok(table)
        }
    }
}

/// Recompute a candidate's trace from scratch on the evaluated graph:
/// connected components of the induced subgraph by search, label sets per
/// component, dominated labels by definition. Used to test the transfer
/// functions.
pub fn trace_from_scratch(graph: &LabeledGraph, k: usize, subset: &[usize]) -> CdsTrace {
    let mut sig = Signature::zeros(k);
    let in_subset = |v: usize| subset.contains(&v);

    let mut seen = vec![false; graph.vertex_count()];
    for &start in subset {
        if seen[start] {
            continue;
        }
        // collect the component of `start` within the induced subgraph
        let mut component_labels = 0usize;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            component_labels |= label_bit(graph.labels[v]);
            for w in graph.neighbors(v) {
                if in_subset(w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let old = sig.get(component_labels);
        sig.set(component_labels, tribool_add(old, Tribool::One));
    }

    let mut dominated_vertices = vec![false; graph.vertex_count()];
    for &v in subset {
        dominated_vertices[v] = true;
        for w in graph.neighbors(v) {
            dominated_vertices[w] = true;
        }
    }
    let mut domination = 0usize;
    for label in 1..=k {
        let class_dominated = (0..graph.vertex_count())
            .filter(|&v| graph.labels[v] == label)
            .all(|v| dominated_vertices[v]);
        if class_dominated {
            domination |= label_bit(label);
        }
    }
    CdsTrace {
        signature: sig,
        domination,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::counting_measure;

    /// The triangle as a 2-expression.
    pub(crate) fn k3_expression() -> KExpression {
        // edge_{1,2}(relabel_{2->1}(edge_{1,2}(a_1 + b_2)) + c_2)
        let inner = KNode::EdgeCreate {
            i: 1,
            j: 2,
            child: Box::new(KNode::Oplus(
                Box::new(KNode::Vertex { label: 1, name: "a".into() }),
                Box::new(KNode::Vertex { label: 2, name: "b".into() }),
            )),
        };
        let relabeled = KNode::Relabel {
            from: 2,
            to: 1,
            child: Box::new(inner),
        };
        let with_c = KNode::Oplus(
            Box::new(relabeled),
            Box::new(KNode::Vertex { label: 2, name: "c".into() }),
        );
        KExpression::new(KNode::EdgeCreate {
            i: 1,
            j: 2,
            child: Box::new(with_c),
        })
        .unwrap()
    }

    /// The path a - b - c as a 2-expression.
    pub(crate) fn p3_expression() -> KExpression {
        // only b carries label 1, so the outer edge op attaches c to b alone
        let ab = KNode::EdgeCreate {
            i: 1,
            j: 2,
            child: Box::new(KNode::Oplus(
                Box::new(KNode::Vertex { label: 2, name: "a".into() }),
                Box::new(KNode::Vertex { label: 1, name: "b".into() }),
            )),
        };
        let with_c = KNode::Oplus(
            Box::new(ab),
            Box::new(KNode::Vertex { label: 2, name: "c".into() }),
        );
        // creates b-c (and re-creates a-b, which is harmless); a-c stays
        // absent since a and c share label 2
        KExpression::new(KNode::EdgeCreate {
            i: 1,
            j: 2,
            child: Box::new(with_c),
        })
        .unwrap()
    }

    #[test]
    fn tribool_table() {
        use Tribool::*;
        assert_eq!(tribool_add(One, One), TwoPlus);
        assert_eq!(tribool_add(Zero, TwoPlus), TwoPlus);
        assert_eq!(tribool_add(Zero, Zero), Zero);
        assert_eq!(tribool_add(One, Zero), One);
    }

    #[test]
    fn eval_kexpr_builds_k3() {
        let g = eval_kexpr(&k3_expression()).unwrap();
        assert_eq!(g.names, vec!["a", "b", "c"]);
        assert_eq!(g.edges.len(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(0, 2) && g.has_edge(1, 2));
    }

    #[test]
    fn eval_kexpr_builds_p3() {
        let g = eval_kexpr(&p3_expression()).unwrap();
        assert_eq!(g.names, vec!["a", "b", "c"]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn single_edge_creation() {
        let kx = KExpression::new(KNode::EdgeCreate {
            i: 1,
            j: 2,
            child: Box::new(KNode::Oplus(
                Box::new(KNode::Vertex { label: 1, name: "a".into() }),
                Box::new(KNode::Vertex { label: 2, name: "b".into() }),
            )),
        })
        .unwrap();
        let g = eval_kexpr(&kx).unwrap();
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn sig_transfer_examples() {
        // two isolated vertices labeled 1 and 2, both selected
        let mut sig = Signature::zeros(2);
        sig.set(0b01, Tribool::One);
        sig.set(0b10, Tribool::One);

        // relabel 1 -> 2 funnels both components to label set {2}
        let relabeled = sig_relabel(&sig, 1, 2);
        assert_eq!(relabeled.get(0b10), Tribool::TwoPlus);
        assert_eq!(relabeled.get(0b01), Tribool::Zero);

        // edge creation merges them into one component labeled {1,2}
        let merged = sig_edge(&sig, 1, 2);
        assert_eq!(merged.get(0b11), Tribool::One);
        assert_eq!(merged.get(0b01), Tribool::Zero);
        assert_eq!(merged.get(0b10), Tribool::Zero);

        // and dominates both labels
        assert_eq!(dom_edge(&sig, 0, 1, 2), 0b11);

        // the all-zero signature is untouched by edge creation
        let empty = Signature::zeros(2);
        assert_eq!(sig_edge(&empty, 1, 2), empty);
        assert_eq!(dom_edge(&empty, 0b01, 1, 2), 0b01);
    }

    #[test]
    fn dom_relabel_formula() {
        assert_eq!(dom_relabel(0b10, 1, 2), 0b01);
        assert_eq!(dom_relabel(0b11, 1, 2), 0b11);
    }

    #[test]
    fn cds_counts_on_fixtures() {
        for (kx, expected) in [(k3_expression(), 7u64), (p3_expression(), 4u64)] {
            let sol = solve_semiring_cds(&kx).unwrap();
            let count = sol
                .store
                .evaluate(sol.root, &counting_measure(sol.store.universe()))
                .unwrap();
            assert_eq!(count, crate::algebra::nat(expected));
        }
    }

    #[test]
    fn ds_counts_on_fixtures() {
        for (kx, expected) in [(k3_expression(), 7u64), (p3_expression(), 5u64)] {
            let sol = solve_semiring_ds(&kx).unwrap();
            let count = sol
                .store
                .evaluate(sol.root, &counting_measure(sol.store.universe()))
                .unwrap();
            assert_eq!(count, crate::algebra::nat(expected));
        }
    }

    #[test]
    fn single_vertex_has_one_cds() {
        let kx = KExpression::new(KNode::Vertex { label: 1, name: "u".into() }).unwrap();
        for sol in [solve_semiring_cds(&kx).unwrap(), solve_semiring_ds(&kx).unwrap()] {
            let count = sol
                .store
                .evaluate(sol.root, &counting_measure(sol.store.universe()))
                .unwrap();
            assert_eq!(count, crate::algebra::nat(1));
        }
    }

    #[test]
    fn kexpr_text_roundtrip() {
        let kx = k3_expression();
        let text = kx.to_text();
        let parsed = KExpression::parse(&text).unwrap();
        assert_eq!(parsed, kx);
        assert_eq!(parsed.to_text(), text);
    }

    #[test]
    fn kexpr_validation() {
        assert!(KExpression::new(KNode::Relabel {
            from: 1,
            to: 1,
            child: Box::new(KNode::Vertex { label: 1, name: "a".into() }),
        })
        .is_err());
        assert!(KExpression::new(KNode::Oplus(
            Box::new(KNode::Vertex { label: 1, name: "a".into() }),
            Box::new(KNode::Vertex { label: 1, name: "a".into() }),
        ))
        .is_err());
    }

    #[test]
    fn width_cap_is_enforced() {
        let kx = KExpression::new(KNode::EdgeCreate {
            i: 1,
            j: 5,
            child: Box::new(KNode::Vertex { label: 5, name: "a".into() }),
        })
        .unwrap();
        assert_eq!(kx.k(), 5);
        assert!(solve_semiring_cds(&kx).is_err());
        assert!(solve_semiring_cds_capped(&kx, 5).is_ok());
    }
}
