//! Join/union expression DAGs.
//!
//! An expression over a [`Universe`] `(S, T)` denotes a set of functions
//! from a subset of `S` to `T`. Leaves are the empty set, the unit set
//! `T^∅`, and single bindings `s ↦ t`; internal nodes are `uplus` (disjoint
//! union of sets over one domain) and `join` (combination of sets over
//! disjoint domains).
//!
//! Expressions are hash-consed: structurally identical nodes share one
//! [`ExprHandle`] within a store, so solver tables that reuse subexpressions
//! stay polynomial even when the unfolded tree is astronomically large.
//! Construction needs `&mut ExprStore` (single writer); handles are plain
//! indices, immutable once returned, and evaluation takes `&self`, so
//! finished expressions can be read concurrently.
//!
//! Builders enforce only the cheap structural rules (join domains disjoint,
//! uplus domains equal unless one side is empty). Semantic disjointness of
//! the two sides of an uplus is the caller's obligation; [`materialize`]
//! checks the full inductive semantics, including that rule, and is the
//! ground-truth oracle against which solvers are tested. An illegal
//! expression materializes to [`Materialization::Fail`], a value, not an
//! error, so tests can assert on it.
//!
//! [`materialize`]: ExprStore::materialize

use num_bigint::BigUint;
use num_traits::One;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::algebra::{add, mul, one, zero, SemiringValue};
use crate::bitset::BitSet;
use crate::measures::MeasureMatrix;
use crate::sexpr::{self, Sexpr};
use crate::{Error, Result};

/// The ordered domain set `S` and codomain set `T` expressions range over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    domain: Vec<String>,
    codomain: Vec<String>,
    domain_index: HashMap<String, usize>,
    codomain_index: HashMap<String, usize>,
}

impl Universe {
    /// Build a universe from distinct element names. An empty domain is the
    /// degenerate case of problems with no variables; the codomain must be
    /// non-empty.
    pub fn new<S: Into<String>>(
        domain: impl IntoIterator<Item = S>,
        codomain: impl IntoIterator<Item = S>,
    ) -> Result<Universe> {
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        let codomain: Vec<String> = codomain.into_iter().map(Into::into).collect();
        if codomain.is_empty() {
            return Err(Error::usage("codomain must be non-empty"));
        }
        let mut domain_index = HashMap::new();
        for (i, name) in domain.iter().enumerate() {
            if domain_index.insert(name.clone(), i).is_some() {
                return Err(Error::usage(format!("duplicate domain element {name:?}")));
            }
        }
        let mut codomain_index = HashMap::new();
        for (i, name) in codomain.iter().enumerate() {
            if codomain_index.insert(name.clone(), i).is_some() {
                return Err(Error::usage(format!("duplicate codomain element {name:?}")));
            }
        }
        Ok(Universe {
            domain,
            codomain,
            domain_index,
            codomain_index,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain.len()
    }

    /// True when the domain is empty.
    pub fn is_degenerate(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn domain_names(&self) -> &[String] {
        &self.domain
    }

    pub fn codomain_names(&self) -> &[String] {
        &self.codomain
    }

    pub fn domain_name(&self, index: usize) -> &str {
        &self.domain[index]
    }

    pub fn codomain_name(&self, index: usize) -> &str {
        &self.codomain[index]
    }

    pub fn domain_index(&self, name: &str) -> Result<usize> {
        self.domain_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::usage(format!("unknown domain element {name:?}")))
    }

    pub fn codomain_index(&self, name: &str) -> Result<usize> {
        self.codomain_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::usage(format!("unknown codomain element {name:?}")))
    }
}

/// Stable identifier of a node within one [`ExprStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExprHandle(u32);

impl ExprHandle {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Node shape; children are handles into the same store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Empty,
    Unit,
    Leaf(u32, u32),
    Uplus(ExprHandle, ExprHandle),
    Join(ExprHandle, ExprHandle),
}

#[derive(Debug, Clone)]
struct Node {
    kind: ExprKind,
    /// Domain of the denoted set; ignores semantically empty branches.
    domain: BitSet,
    /// Domain elements appearing in any leaf below, including dead branches.
    /// This is the domain notion used by the FAIL rules of materialization.
    leaf_domain: BitSet,
    is_empty: bool,
    /// Number of leaves of the unfolded tree.
    tree_size: BigUint,
}

/// Append-only hash-consing store of expression nodes over one universe.
#[derive(Debug, Clone)]
pub struct ExprStore {
    universe: Universe,
    nodes: Vec<Node>,
    index: HashMap<ExprKind, ExprHandle>,
}

/// Exact semantics of an expression: the distinguished FAIL outcome or the
/// denoted set of functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Materialization {
    Fail,
    Set(FunctionSet),
}

impl Materialization {
    pub fn expect_set(self) -> FunctionSet {
        match self {
            Materialization::Set(s) => s,
            Materialization::Fail => panic!("expression unexpectedly materialized to FAIL"),
        }
    }
}

/// A finite set of functions sharing one domain, stored as assignment
/// vectors in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSet {
    /// Sorted domain element indices.
    pub domain: Vec<usize>,
    /// Each member maps `domain[i]` to codomain index `member[i]`.
    pub members: BTreeSet<Vec<usize>>,
}

impl FunctionSet {
    pub fn empty(domain: Vec<usize>) -> FunctionSet {
        FunctionSet {
            domain,
            members: BTreeSet::new(),
        }
    }

    /// The one-element set containing the empty function.
    pub fn unit() -> FunctionSet {
        let mut members = BTreeSet::new();
        members.insert(Vec::new());
        FunctionSet {
            domain: Vec::new(),
            members,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Result of a counted evaluation pass.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub value: SemiringValue,
    /// DAG nodes reachable from the root.
    pub dag_nodes: usize,
    /// Semiring add/mul invocations performed (one per reachable internal
    /// node).
    pub operations: usize,
}

impl ExprStore {
    pub fn new(universe: Universe) -> ExprStore {
        ExprStore {
            universe,
            nodes: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn kind(&self, h: ExprHandle) -> ExprKind {
        self.nodes[h.index()].kind
    }

    pub fn domain(&self, h: ExprHandle) -> &BitSet {
        &self.nodes[h.index()].domain
    }

    pub fn is_empty_expr(&self, h: ExprHandle) -> bool {
        self.nodes[h.index()].is_empty
    }

    pub fn tree_size(&self, h: ExprHandle) -> &BigUint {
        &self.nodes[h.index()].tree_size
    }

    fn intern(&mut self, node: Node) -> ExprHandle {
        if let Some(&h) = self.index.get(&node.kind) {
            return h;
        }
        let h = ExprHandle(self.nodes.len() as u32);
        self.index.insert(node.kind, h);
        self.nodes.push(node);
        h
    }

    pub fn make_empty(&mut self) -> ExprHandle {
        let n = self.universe.domain_size();
        self.intern(Node {
            kind: ExprKind::Empty,
            domain: BitSet::new(n),
            leaf_domain: BitSet::new(n),
            is_empty: true,
            tree_size: BigUint::one(),
        })
    }

    pub fn make_unit(&mut self) -> ExprHandle {
        let n = self.universe.domain_size();
        self.intern(Node {
            kind: ExprKind::Unit,
            domain: BitSet::new(n),
            leaf_domain: BitSet::new(n),
            is_empty: false,
            tree_size: BigUint::one(),
        })
    }

    pub fn make_leaf(&mut self, s: &str, t: &str) -> Result<ExprHandle> {
        let si = self.universe.domain_index(s)?;
        let ti = self.universe.codomain_index(t)?;
        Ok(self.make_leaf_indexed(si, ti))
    }

    pub fn make_leaf_indexed(&mut self, s: usize, t: usize) -> ExprHandle {
        assert!(s < self.universe.domain_size() && t < self.universe.codomain_size());
        let n = self.universe.domain_size();
        self.intern(Node {
            kind: ExprKind::Leaf(s as u32, t as u32),
            domain: BitSet::singleton(n, s),
            leaf_domain: BitSet::singleton(n, s),
            is_empty: false,
            tree_size: BigUint::one(),
        })
    }

    /// Disjoint union of two expressions over the same domain. A
    /// semantically empty side is allowed regardless of its domain; the
    /// result then reduces to the other side. Semantic disjointness of the
    /// two sets is not checked here.
    pub fn make_uplus(&mut self, e1: ExprHandle, e2: ExprHandle) -> Result<ExprHandle> {
        let (n1, n2) = (&self.nodes[e1.index()], &self.nodes[e2.index()]);
        let domain = if n1.is_empty {
            n2.domain.clone()
        } else if n2.is_empty || n1.domain == n2.domain {
            n1.domain.clone()
        } else {
            return Err(Error::legality(format!(
                "uplus over mismatched domains {} and {}",
                self.format_domain(&n1.domain),
                self.format_domain(&n2.domain)
            )));
        };
        let node = Node {
            kind: ExprKind::Uplus(e1, e2),
            domain,
            leaf_domain: n1.leaf_domain.union(&n2.leaf_domain),
            is_empty: n1.is_empty && n2.is_empty,
            tree_size: &n1.tree_size + &n2.tree_size,
        };
        Ok(self.intern(node))
    }

    /// Combination of two expressions over disjoint domains.
    pub fn make_join(&mut self, e1: ExprHandle, e2: ExprHandle) -> Result<ExprHandle> {
        let (n1, n2) = (&self.nodes[e1.index()], &self.nodes[e2.index()]);
        if !n1.domain.is_disjoint(&n2.domain) {
            return Err(Error::legality(format!(
                "join over overlapping domains {} and {}",
                self.format_domain(&n1.domain),
                self.format_domain(&n2.domain)
            )));
        }
        let node = Node {
            kind: ExprKind::Join(e1, e2),
            domain: n1.domain.union(&n2.domain),
            leaf_domain: n1.leaf_domain.union(&n2.leaf_domain),
            is_empty: n1.is_empty || n2.is_empty,
            tree_size: &n1.tree_size + &n2.tree_size,
        };
        Ok(self.intern(node))
    }

    fn format_domain(&self, d: &BitSet) -> String {
        let names: Vec<&str> = d.iter().map(|i| self.universe.domain_name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Handles reachable from `root`, each exactly once, children before
    /// parents.
    pub fn postorder(&self, root: ExprHandle) -> Vec<ExprHandle> {
        let mut order = Vec::new();
        let mut seen = vec![false; self.nodes.len()];
        // (handle, children already expanded?)
        let mut stack = vec![(root, false)];
        while let Some((h, expanded)) = stack.pop() {
            if expanded {
                order.push(h);
                continue;
            }
            if seen[h.index()] {
                continue;
            }
            seen[h.index()] = true;
            stack.push((h, true));
            match self.nodes[h.index()].kind {
                ExprKind::Uplus(a, b) | ExprKind::Join(a, b) => {
                    stack.push((b, false));
                    stack.push((a, false));
                }
                _ => {}
            }
        }
        order
    }

    /// Evaluate a measure over the expression, one semiring operation per
    /// internal DAG node. Each node is evaluated once regardless of how
    /// often it is shared.
    pub fn evaluate(&self, root: ExprHandle, m: &MeasureMatrix) -> Result<SemiringValue> {
        Ok(self.evaluate_counted(root, m)?.value)
    }

    /// Evaluation that also reports the DAG size and operation count.
    pub fn evaluate_counted(&self, root: ExprHandle, m: &MeasureMatrix) -> Result<Evaluated> {
        if m.universe() != &self.universe {
            return Err(Error::usage(
                "measure matrix universe does not match the expression store",
            ));
        }
        let desc = m.descriptor();
        let order = self.postorder(root);
        let mut memo: HashMap<ExprHandle, SemiringValue> = HashMap::with_capacity(order.len());
        let mut operations = 0usize;
        for &h in &order {
            let value = match self.nodes[h.index()].kind {
                ExprKind::Empty => zero(desc),
                ExprKind::Unit => one(desc),
                ExprKind::Leaf(s, t) => m.entry(s as usize, t as usize).clone(),
                ExprKind::Uplus(a, b) => {
                    operations += 1;
                    add(&memo[&a], &memo[&b])?
                }
                ExprKind::Join(a, b) => {
                    operations += 1;
                    mul(&memo[&a], &memo[&b])?
                }
            };
            memo.insert(h, value);
        }
        Ok(Evaluated {
            value: memo.remove(&root).expect("root evaluated last"),
            dag_nodes: order.len(),
            operations,
        })
    }

    /// Compute the exact semantics by the inductive definition. This is the
    /// brute-force oracle: it applies the definitional FAIL rules (which use
    /// the leaf domain, i.e. the domain including dead branches) and builds
    /// the denoted set explicitly.
    ///
    /// `node_budget` caps the number of DAG nodes visited and `member_budget`
    /// the size of any intermediate set.
    pub fn materialize(
        &self,
        root: ExprHandle,
        node_budget: usize,
        member_budget: usize,
    ) -> Result<Materialization> {
        let order = self.postorder(root);
        if order.len() > node_budget {
            return Err(Error::budget(format!(
                "materialization visits {} nodes, budget is {node_budget}",
                order.len()
            )));
        }
        let mut memo: HashMap<ExprHandle, Materialization> = HashMap::new();
        for &h in &order {
            let node = &self.nodes[h.index()];
            let result = match node.kind {
                ExprKind::Empty => Materialization::Set(FunctionSet::empty(Vec::new())),
                ExprKind::Unit => Materialization::Set(FunctionSet::unit()),
                ExprKind::Leaf(s, t) => {
                    let mut members = BTreeSet::new();
                    members.insert(vec![t as usize]);
                    Materialization::Set(FunctionSet {
                        domain: vec![s as usize],
                        members,
                    })
                }
                ExprKind::Uplus(a, b) => {
                    let (fa, fb) = (&memo[&a], &memo[&b]);
                    match (fa, fb) {
                        (Materialization::Fail, _) | (_, Materialization::Fail) => {
                            Materialization::Fail
                        }
                        (Materialization::Set(sa), Materialization::Set(sb)) => {
                            if sb.is_empty() {
                                Materialization::Set(sa.clone())
                            } else if sa.is_empty() {
                                Materialization::Set(sb.clone())
                            } else if self.nodes[a.index()].leaf_domain
                                != self.nodes[b.index()].leaf_domain
                                || sa.members.intersection(&sb.members).next().is_some()
                            {
                                Materialization::Fail
                            } else {
                                let mut members = sa.members.clone();
                                members.extend(sb.members.iter().cloned());
                                Materialization::Set(FunctionSet {
                                    domain: sa.domain.clone(),
                                    members,
                                })
                            }
                        }
                    }
                }
                ExprKind::Join(a, b) => {
                    let (fa, fb) = (&memo[&a], &memo[&b]);
                    match (fa, fb) {
                        (Materialization::Fail, _) | (_, Materialization::Fail) => {
                            Materialization::Fail
                        }
                        (Materialization::Set(sa), Materialization::Set(sb)) => {
                            if !self.nodes[a.index()]
                                .leaf_domain
                                .is_disjoint(&self.nodes[b.index()].leaf_domain)
                            {
                                Materialization::Fail
                            } else {
                                Materialization::Set(join_sets(sa, sb))
                            }
                        }
                    }
                }
            };
            if let Materialization::Set(s) = &result {
                if s.len() > member_budget {
                    return Err(Error::budget(format!(
                        "materialized set has {} members, budget is {member_budget}",
                        s.len()
                    )));
                }
            }
            memo.insert(h, result);
        }
        Ok(memo.remove(&root).expect("root materialized last"))
    }
}

/// Cross product of two function sets over disjoint domains, merging the
/// assignments into the combined sorted domain.
fn join_sets(a: &FunctionSet, b: &FunctionSet) -> FunctionSet {
    let mut domain: Vec<usize> = a.domain.iter().chain(b.domain.iter()).copied().collect();
    // positions of a's and b's entries within the merged sorted domain
    let order: Vec<usize> = {
        let mut idx: Vec<usize> = (0..domain.len()).collect();
        idx.sort_by_key(|&i| domain[i]);
        idx
    };
    domain.sort_unstable();
    let mut members = BTreeSet::new();
    for fa in &a.members {
        for fb in &b.members {
            let concat: Vec<usize> = fa.iter().chain(fb.iter()).copied().collect();
            let merged: Vec<usize> = order.iter().map(|&i| concat[i]).collect();
            members.insert(merged);
        }
    }
    FunctionSet { domain, members }
}

/// The expression of all functions `[n] → [n]`: a join over the domain
/// elements of an uplus over their possible images. Tree size is `n²`.
pub fn all_functions_expr(n: usize) -> Result<(ExprStore, ExprHandle)> {
    if n == 0 {
        return Err(Error::usage("all_functions_expr requires n >= 1"));
    }
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let universe = Universe::new(names.clone(), names)?;
    let mut store = ExprStore::new(universe);
    let mut factors = Vec::with_capacity(n);
    for i in 0..n {
        let mut choice = store.make_leaf_indexed(i, 0);
        for j in 1..n {
            let leaf = store.make_leaf_indexed(i, j);
            choice = store.make_uplus(choice, leaf)?;
        }
        factors.push(choice);
    }
    let mut root = factors[0];
    for &f in &factors[1..] {
        root = store.make_join(root, f)?;
    }
    Ok((store, root))
}

// ---------------------------------------------------------------------------
// Text serialization
//
// Grammar: E ::= empty | unit | (leaf <s> <t>) | (uplus E E) | (join E E)
//              | (share <id> E) | (ref <id>)
// `share` names a subexpression for reuse; `ref` refers back to it. The
// writer shares every internal node that is referenced more than once.
// ---------------------------------------------------------------------------

/// Render an expression to its s-expression text form. Deterministic: share
/// ids are assigned in first-visit DFS order.
pub fn write_expr(store: &ExprStore, root: ExprHandle) -> String {
    // count references among reachable nodes
    let order = store.postorder(root);
    let mut refs: HashMap<ExprHandle, usize> = HashMap::new();
    for &h in &order {
        if let ExprKind::Uplus(a, b) | ExprKind::Join(a, b) = store.kind(h) {
            *refs.entry(a).or_insert(0) += 1;
            *refs.entry(b).or_insert(0) += 1;
        }
    }
    let mut shared_ids: HashMap<ExprHandle, usize> = HashMap::new();
    let mut next_id = 0usize;
    let mut out = String::new();
    write_node(store, root, &refs, &mut shared_ids, &mut next_id, &mut out);
    out
}

fn write_node(
    store: &ExprStore,
    h: ExprHandle,
    refs: &HashMap<ExprHandle, usize>,
    shared_ids: &mut HashMap<ExprHandle, usize>,
    next_id: &mut usize,
    out: &mut String,
) {
    if let Some(id) = shared_ids.get(&h) {
        write!(out, "(ref {id})").unwrap();
        return;
    }
    let kind = store.kind(h);
    let shareable = matches!(kind, ExprKind::Uplus(..) | ExprKind::Join(..))
        && refs.get(&h).copied().unwrap_or(0) > 1;
    if shareable {
        let id = *next_id;
        *next_id += 1;
        shared_ids.insert(h, id);
        write!(out, "(share {id} ").unwrap();
    }
    match kind {
        ExprKind::Empty => out.push_str("empty"),
        ExprKind::Unit => out.push_str("unit"),
        ExprKind::Leaf(s, t) => {
            write!(
                out,
                "(leaf {} {})",
                store.universe.domain_name(s as usize),
                store.universe.codomain_name(t as usize)
            )
            .unwrap();
        }
        ExprKind::Uplus(a, b) | ExprKind::Join(a, b) => {
            let op = if matches!(kind, ExprKind::Uplus(..)) {
                "uplus"
            } else {
                "join"
            };
            write!(out, "({op} ").unwrap();
            write_node(store, a, refs, shared_ids, next_id, out);
            out.push(' ');
            write_node(store, b, refs, shared_ids, next_id, out);
            out.push(')');
        }
    }
    if shareable {
        out.push(')');
    }
}

/// Parse the s-expression text form into the store.
pub fn parse_expr(store: &mut ExprStore, text: &str) -> Result<ExprHandle> {
    let tree = sexpr::parse(text)?;
    let mut shared: BTreeMap<String, ExprHandle> = BTreeMap::new();
    parse_expr_node(store, &tree, &mut shared)
}

fn parse_expr_node(
    store: &mut ExprStore,
    node: &Sexpr,
    shared: &mut BTreeMap<String, ExprHandle>,
) -> Result<ExprHandle> {
    match node {
        Sexpr::Atom { text, line } => match text.as_str() {
            "empty" => Ok(store.make_empty()),
            "unit" => Ok(store.make_unit()),
            other => Err(Error::parse(*line, format!("unknown expression atom {other:?}"))),
        },
        Sexpr::List { items, line } => {
            let head = items
                .first()
                .ok_or_else(|| Error::parse(*line, "empty list in expression"))?
                .as_atom()?;
            let expect_args = |n: usize| -> Result<()> {
                if items.len() != n + 1 {
                    return Err(Error::parse(
                        *line,
                        format!("{head} takes {n} arguments, got {}", items.len() - 1),
                    ));
                }
                Ok(())
            };
            match head {
                "leaf" => {
                    expect_args(2)?;
                    let s = items[1].as_atom()?;
                    let t = items[2].as_atom()?;
                    store.make_leaf(s, t)
                }
                "uplus" | "join" => {
                    expect_args(2)?;
                    let a = parse_expr_node(store, &items[1], shared)?;
                    let b = parse_expr_node(store, &items[2], shared)?;
                    if head == "uplus" {
                        store.make_uplus(a, b)
                    } else {
                        store.make_join(a, b)
                    }
                }
                "share" => {
                    expect_args(2)?;
                    let id = items[1].as_atom()?.to_string();
                    let h = parse_expr_node(store, &items[2], shared)?;
                    if shared.insert(id.clone(), h).is_some() {
                        return Err(Error::parse(*line, format!("duplicate share id {id:?}")));
                    }
                    Ok(h)
                }
                "ref" => {
                    expect_args(1)?;
                    let id = items[1].as_atom()?;
                    shared
                        .get(id)
                        .copied()
                        .ok_or_else(|| Error::parse(*line, format!("unknown ref id {id:?}")))
                }
                other => Err(Error::parse(*line, format!("unknown operator {other:?}"))),
            }
        }
    }
}

/// Fold a sequence of expressions with `uplus`, left to right. `None` for an
/// empty sequence.
pub fn uplus_fold(
    store: &mut ExprStore,
    handles: impl IntoIterator<Item = ExprHandle>,
) -> Result<Option<ExprHandle>> {
    let mut acc: Option<ExprHandle> = None;
    for h in handles {
        acc = Some(match acc {
            None => h,
            Some(prev) => store.make_uplus(prev, h)?,
        });
    }
    Ok(acc)
}

/// Merge an expression into a trace bucket, unioning with any previous
/// occupant. Used by the solvers when several source states re-bucket to
/// one target trace.
pub fn merge_bucket<K: Ord>(
    store: &mut ExprStore,
    table: &mut BTreeMap<K, ExprHandle>,
    key: K,
    handle: ExprHandle,
) -> Result<()> {
    match table.entry(key) {
        Entry::Vacant(v) => {
            v.insert(handle);
        }
        Entry::Occupied(mut o) => {
            let merged = store.make_uplus(*o.get(), handle)?;
            o.insert(merged);
        }
    }
    Ok(())
}
