//! Tree decompositions: PACE-format parsing, validation of the three
//! defining properties, and conversion to nice form.
//!
//! A nice tree decomposition is rooted, has an empty root bag, and uses
//! only four node shapes: Leaf (empty bag), Introduce(v), Forget(v), and
//! Join (two children with identical bags). Conversion preserves the width:
//! between a node and its child we first forget the vertices leaving the
//! bag, then introduce the vertices entering it, and high-degree nodes are
//! split into binary joins.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::cds::LabeledGraph;
use crate::{Error, Result};

/// An unrooted tree decomposition: bags of vertex indices plus tree edges
/// between bag ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<usize>>,
    pub edges: Vec<(usize, usize)>,
}

/// Outcome of checking the three tree-decomposition properties. Violations
/// are data, not errors: property 1 is vertex coverage, 2 is edge coverage,
/// 3 is connectivity of occurrence; 0 flags a malformed tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdValidation {
    Valid { width: i64 },
    Violation { property: usize, witness: String },
}

impl TdValidation {
    pub fn into_result(self) -> Result<i64> {
        match self {
            TdValidation::Valid { width } => Ok(width),
            TdValidation::Violation { property, witness } => Err(Error::legality(format!(
                "tree decomposition violates property {property}: {witness}"
            ))),
        }
    }
}

impl TreeDecomposition {
    /// Parse the PACE format: a header `s td <#bags> <width+1> <n>`, bag
    /// lines `b <id> <v...>`, then tree edges `<id> <id>`. Ids and vertices
    /// are 1-based; vertex `i` is the graph's vertex `i - 1`.
    pub fn parse(text: &str) -> Result<TreeDecomposition> {
        let mut bags: Vec<Option<BTreeSet<usize>>> = Vec::new();
        let mut edges = Vec::new();
        let mut declared: Option<(usize, usize, usize)> = None;
        for (line_no, raw) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "s" => {
                    if declared.is_some() {
                        return Err(Error::parse(line_no, "duplicate 's td' header"));
                    }
                    if fields.len() != 5 || fields[1] != "td" {
                        return Err(Error::parse(
                            line_no,
                            "expected 's td <#bags> <width+1> <n>'",
                        ));
                    }
                    let nums: Vec<usize> = fields[2..]
                        .iter()
                        .map(|f| {
                            f.parse::<usize>()
                                .map_err(|_| Error::parse(line_no, format!("bad number {f:?}")))
                        })
                        .collect::<Result<_>>()?;
                    declared = Some((nums[0], nums[1], nums[2]));
                    bags = vec![None; nums[0]];
                }
                "b" => {
                    let (num_bags, _, n) = declared
                        .ok_or_else(|| Error::parse(line_no, "bag line before 's td' header"))?;
                    if fields.len() < 2 {
                        return Err(Error::parse(line_no, "bag line needs an id"));
                    }
                    let id: usize = fields[1]
                        .parse()
                        .map_err(|_| Error::parse(line_no, "bad bag id"))?;
                    if id == 0 || id > num_bags {
                        return Err(Error::parse(line_no, format!("bag id {id} out of range")));
                    }
                    let mut bag = BTreeSet::new();
                    for f in &fields[2..] {
                        let v: usize = f
                            .parse()
                            .map_err(|_| Error::parse(line_no, format!("bad vertex {f:?}")))?;
                        if v == 0 || v > n {
                            return Err(Error::parse(
                                line_no,
                                format!("vertex {v} out of range 1..={n}"),
                            ));
                        }
                        bag.insert(v - 1);
                    }
                    if bags[id - 1].replace(bag).is_some() {
                        return Err(Error::parse(line_no, format!("duplicate bag id {id}")));
                    }
                }
                _ => {
                    let (num_bags, ..) = declared
                        .ok_or_else(|| Error::parse(line_no, "edge line before 's td' header"))?;
                    if fields.len() != 2 {
                        return Err(Error::parse(line_no, "expected '<id> <id>' edge line"));
                    }
                    let mut ids = [0usize; 2];
                    for (slot, f) in ids.iter_mut().zip(&fields) {
                        *slot = f
                            .parse()
                            .map_err(|_| Error::parse(line_no, format!("bad bag id {f:?}")))?;
                        if *slot == 0 || *slot > num_bags {
                            return Err(Error::parse(
                                line_no,
                                format!("bag id {slot} out of range"),
                            ));
                        }
                    }
                    edges.push((ids[0] - 1, ids[1] - 1));
                }
            }
        }
        if declared.is_none() {
            return Err(Error::parse(0, "missing 's td' header"));
        }
        let bags: Vec<BTreeSet<usize>> = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| Error::parse(0, format!("bag {} not declared", i + 1))))
            .collect::<Result<_>>()?;
        Ok(TreeDecomposition { bags, edges })
    }

    /// Render to the PACE format.
    pub fn to_text(&self, n: usize) -> String {
        let width_plus_one = self.bags.iter().map(BTreeSet::len).max().unwrap_or(0);
        let mut out = format!("s td {} {} {}\n", self.bags.len(), width_plus_one, n);
        for (i, bag) in self.bags.iter().enumerate() {
            write!(out, "b {}", i + 1).unwrap();
            for v in bag {
                write!(out, " {}", v + 1).unwrap();
            }
            out.push('\n');
        }
        for &(a, b) in &self.edges {
            writeln!(out, "{} {}", a + 1, b + 1).unwrap();
        }
        out
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Check the three tree-decomposition properties against a graph, reporting
/// the first violation found.
pub fn validate_td(graph: &LabeledGraph, td: &TreeDecomposition) -> TdValidation {
    let n = graph.vertex_count();
    let num_bags = td.bags.len();

    // structure: the bag graph must be a tree
    if num_bags == 0 {
        return TdValidation::Violation {
            property: 0,
            witness: "decomposition has no bags".into(),
        };
    }
    if td.edges.len() != num_bags - 1 {
        return TdValidation::Violation {
            property: 0,
            witness: format!("{} bags need {} tree edges, found {}", num_bags, num_bags - 1, td.edges.len()),
        };
    }
    let adj = td.adjacency();
    let mut seen = vec![false; num_bags];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(b) = stack.pop() {
        for &c in &adj[b] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return TdValidation::Violation {
            property: 0,
            witness: "bag tree is disconnected".into(),
        };
    }

    // property 1: every vertex is in some bag
    for v in 0..n {
        if !td.bags.iter().any(|bag| bag.contains(&v)) {
            return TdValidation::Violation {
                property: 1,
                witness: format!("vertex {} is in no bag", graph.names[v]),
            };
        }
    }

    // property 2: every edge has both endpoints in some bag
    for &(u, v) in &graph.edges {
        if !td.bags.iter().any(|bag| bag.contains(&u) && bag.contains(&v)) {
            return TdValidation::Violation {
                property: 2,
                witness: format!(
                    "edge {{{}, {}}} is covered by no bag",
                    graph.names[u], graph.names[v]
                ),
            };
        }
    }

    // property 3: the bags containing each vertex form a connected subtree
    for v in 0..n {
        let holders: Vec<usize> = (0..num_bags).filter(|&b| td.bags[b].contains(&v)).collect();
        let mut reached = vec![false; num_bags];
        let mut stack = vec![holders[0]];
        reached[holders[0]] = true;
        while let Some(b) = stack.pop() {
            for &c in &adj[b] {
                if td.bags[c].contains(&v) && !reached[c] {
                    reached[c] = true;
                    stack.push(c);
                }
            }
        }
        if let Some(&lost) = holders.iter().find(|&&b| !reached[b]) {
            return TdValidation::Violation {
                property: 3,
                witness: format!(
                    "bags {} and {} both hold {} but are not connected through it",
                    holders[0] + 1,
                    lost + 1,
                    graph.names[v]
                ),
            };
        }
    }

    let width = td.bags.iter().map(BTreeSet::len).max().unwrap_or(0) as i64 - 1;
    TdValidation::Valid { width }
}

/// Node shape in a nice tree decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted bag of vertex indices.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A rooted nice tree decomposition with an empty root bag and the lambda
/// assignment of variables (and optionally constraints) to Introduce nodes.
#[derive(Debug, Clone)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
    /// For every vertex, the Introduce node assigned to it (first match in
    /// post-order).
    pub var_lambda: Vec<usize>,
    /// For every constraint, an Introduce node whose bag covers its scope.
    /// Present only after [`NiceTreeDecomposition::assign_constraint_lambda`].
    pub constraint_lambda: Option<Vec<usize>>,
    num_vertices: usize,
}

/// Reported primal width; `degenerate` flags a decomposition whose bags are
/// all empty (width is reported as 0 then).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimalWidth {
    pub width: usize,
    pub degenerate: bool,
}

/// `max |bag| - 1`, with the all-empty case flagged instead of reported as
/// -1.
pub fn primal_width(ntd: &NiceTreeDecomposition) -> PrimalWidth {
    let max_bag = ntd.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0);
    if max_bag == 0 {
        PrimalWidth {
            width: 0,
            degenerate: true,
        }
    } else {
        PrimalWidth {
            width: max_bag - 1,
            degenerate: false,
        }
    }
}

impl NiceTreeDecomposition {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Node indices, children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if expanded {
                order.push(n);
                continue;
            }
            stack.push((n, true));
            for &c in self.nodes[n].children.iter().rev() {
                stack.push((c, false));
            }
        }
        order
    }

    /// Assign every constraint scope to the first post-order Introduce node
    /// whose bag covers it. Such a node exists whenever the decomposition is
    /// valid for the Gaifman graph, because a scope is a clique there.
    pub fn assign_constraint_lambda(&mut self, scopes: &[Vec<usize>]) -> Result<()> {
        let order = self.post_order();
        let mut lambda = Vec::with_capacity(scopes.len());
        for (ci, scope) in scopes.iter().enumerate() {
            let node = order.iter().copied().find(|&n| {
                matches!(self.nodes[n].kind, NiceKind::Introduce(_))
                    && scope.iter().all(|v| self.nodes[n].bag.contains(v))
            });
            match node {
                Some(n) => lambda.push(n),
                None => {
                    return Err(Error::usage(format!(
                        "no Introduce node covers the scope of constraint {ci}; \
                         is the decomposition valid for this instance's Gaifman graph?"
                    )))
                }
            }
        }
        self.constraint_lambda = Some(lambda);
        Ok(())
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// A chain of Introduce nodes from `base` (with bag `from`) adding
    /// `to_add` one vertex at a time.
    fn introduce_chain(&mut self, mut base: usize, from: &BTreeSet<usize>, to_add: &[usize]) -> usize {
        let mut bag = from.clone();
        for &v in to_add {
            bag.insert(v);
            base = self.push(
                NiceKind::Introduce(v),
                bag.iter().copied().collect(),
                vec![base],
            );
        }
        base
    }

    fn forget_chain(&mut self, mut base: usize, from: &BTreeSet<usize>, to_drop: &[usize]) -> usize {
        let mut bag = from.clone();
        for &v in to_drop {
            bag.remove(&v);
            base = self.push(
                NiceKind::Forget(v),
                bag.iter().copied().collect(),
                vec![base],
            );
        }
        base
    }
}

/// Convert a validated tree decomposition into nice form, rooted with an
/// empty root bag, preserving the width, and assign `var_lambda`.
pub fn make_nice(graph: &LabeledGraph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    validate_td(graph, td).into_result()?;
    let adj = td.adjacency();
    let mut builder = NiceBuilder { nodes: Vec::new() };

    // iterative DFS from bag 0; convert children before the parent
    let root_bag = 0usize;
    let order = {
        let mut order = Vec::new();
        let mut stack = vec![(root_bag, usize::MAX, false)];
        while let Some((b, parent, expanded)) = stack.pop() {
            if expanded {
                order.push((b, parent));
                continue;
            }
            stack.push((b, parent, true));
            for &c in &adj[b] {
                if c != parent {
                    stack.push((c, b, false));
                }
            }
        }
        order
    };

    let mut tops: Vec<Option<usize>> = vec![None; td.bags.len()];
    for (b, parent) in order {
        let bag = &td.bags[b];
        let children: Vec<usize> = adj[b].iter().copied().filter(|&c| c != parent).collect();
        let top = if children.is_empty() {
            let leaf = builder.push(NiceKind::Leaf, Vec::new(), Vec::new());
            let to_add: Vec<usize> = bag.iter().copied().collect();
            builder.introduce_chain(leaf, &BTreeSet::new(), &to_add)
        } else {
            let mut branch_tops = Vec::with_capacity(children.len());
            for c in children {
                let child_top = tops[c].expect("children converted before the parent");
                let child_bag = &td.bags[c];
                let to_drop: Vec<usize> = child_bag.difference(bag).copied().collect();
                let after_forgets = builder.forget_chain(child_top, child_bag, &to_drop);
                let kept: BTreeSet<usize> = child_bag.intersection(bag).copied().collect();
                let to_add: Vec<usize> = bag.difference(child_bag).copied().collect();
                branch_tops.push(builder.introduce_chain(after_forgets, &kept, &to_add));
            }
            let bag_sorted: Vec<usize> = bag.iter().copied().collect();
            let mut acc = branch_tops[0];
            for &t in &branch_tops[1..] {
                acc = builder.push(NiceKind::Join, bag_sorted.clone(), vec![acc, t]);
            }
            acc
        };
        tops[b] = Some(top);
    }

    // forget the original root's bag so the root bag is empty
    let top = tops[root_bag].unwrap();
    let to_drop: Vec<usize> = td.bags[root_bag].iter().copied().collect();
    let root = builder.forget_chain(top, &td.bags[root_bag], &to_drop);

    let mut ntd = NiceTreeDecomposition {
        nodes: builder.nodes,
        root,
        var_lambda: Vec::new(),
        constraint_lambda: None,
        num_vertices: graph.vertex_count(),
    };

    // first Introduce(v) in post-order
    let mut lambda = vec![usize::MAX; graph.vertex_count()];
    for n in ntd.post_order() {
        if let NiceKind::Introduce(v) = ntd.nodes[n].kind {
            if lambda[v] == usize::MAX {
                lambda[v] = n;
            }
        }
    }
    if let Some(v) = lambda.iter().position(|&n| n == usize::MAX) {
        return Err(Error::legality(format!(
            "vertex {} is never introduced",
            graph.names[v]
        )));
    }
    ntd.var_lambda = lambda;
    Ok(ntd)
}

/// Re-check every nice-form invariant: node shapes, bag relations, empty
/// leaf and root bags, lambda well-formedness, and the underlying
/// tree-decomposition properties. Returns the width.
pub fn validate_nice(graph: &LabeledGraph, ntd: &NiceTreeDecomposition) -> Result<i64> {
    let nodes = &ntd.nodes;
    if !nodes[ntd.root].bag.is_empty() {
        return Err(Error::legality("root bag is not empty"));
    }
    for (i, node) in nodes.iter().enumerate() {
        let mut sorted = node.bag.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != node.bag {
            return Err(Error::legality(format!("bag of node {i} is not sorted-unique")));
        }
        match node.kind {
            NiceKind::Leaf => {
                if !node.children.is_empty() || !node.bag.is_empty() {
                    return Err(Error::legality(format!("leaf node {i} malformed")));
                }
            }
            NiceKind::Introduce(v) => {
                if node.children.len() != 1 {
                    return Err(Error::legality(format!("introduce node {i} needs one child")));
                }
                let child = &nodes[node.children[0]];
                let mut expected = child.bag.clone();
                if child.bag.contains(&v) {
                    return Err(Error::legality(format!(
                        "introduce node {i} re-introduces a bag vertex"
                    )));
                }
                expected.push(v);
                expected.sort_unstable();
                if expected != node.bag {
                    return Err(Error::legality(format!(
                        "introduce node {i} bag is not child's bag plus its vertex"
                    )));
                }
            }
            NiceKind::Forget(v) => {
                if node.children.len() != 1 {
                    return Err(Error::legality(format!("forget node {i} needs one child")));
                }
                let child = &nodes[node.children[0]];
                if !child.bag.contains(&v) {
                    return Err(Error::legality(format!(
                        "forget node {i} drops a vertex absent from the child bag"
                    )));
                }
                let expected: Vec<usize> =
                    child.bag.iter().copied().filter(|&u| u != v).collect();
                if expected != node.bag {
                    return Err(Error::legality(format!(
                        "forget node {i} bag is not child's bag minus its vertex"
                    )));
                }
            }
            NiceKind::Join => {
                if node.children.len() != 2 {
                    return Err(Error::legality(format!("join node {i} needs two children")));
                }
                for &c in &node.children {
                    if nodes[c].bag != node.bag {
                        return Err(Error::legality(format!(
                            "join node {i} has a child with a different bag"
                        )));
                    }
                }
            }
        }
    }

    for (v, &n) in ntd.var_lambda.iter().enumerate() {
        if !matches!(nodes[n].kind, NiceKind::Introduce(u) if u == v) {
            return Err(Error::legality(format!(
                "var_lambda of {} is not an Introduce node for it",
                graph.names[v]
            )));
        }
    }

    // the nice tree is itself a tree decomposition
    let td = TreeDecomposition {
        bags: nodes
            .iter()
            .map(|n| n.bag.iter().copied().collect())
            .collect(),
        edges: nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (i, c)))
            .collect(),
    };
    validate_td(graph, &td).into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3_graph() -> LabeledGraph {
        LabeledGraph::from_edges(vec!["a", "b", "c"], vec![(0, 1), (1, 2)])
    }

    fn p3_td() -> TreeDecomposition {
        TreeDecomposition {
            bags: vec![
                [0, 1].into_iter().collect(),
                [1, 2].into_iter().collect(),
            ],
            edges: vec![(0, 1)],
        }
    }

    #[test]
    fn pace_roundtrip() {
        let td = p3_td();
        let text = td.to_text(3);
        assert!(text.starts_with("s td 2 2 3\n"));
        let parsed = TreeDecomposition::parse(&text).unwrap();
        assert_eq!(parsed, td);
    }

    #[test]
    fn validation_accepts_p3_path_decomposition() {
        let v = validate_td(&p3_graph(), &p3_td());
        assert_eq!(v, TdValidation::Valid { width: 1 });
    }

    #[test]
    fn validation_accepts_single_full_bag() {
        let g = p3_graph();
        let td = TreeDecomposition {
            bags: vec![[0, 1, 2].into_iter().collect()],
            edges: vec![],
        };
        assert_eq!(validate_td(&g, &td), TdValidation::Valid { width: 2 });
    }

    #[test]
    fn validation_reports_uncovered_edge() {
        let g = p3_graph();
        let td = TreeDecomposition {
            bags: vec![
                [0, 1].into_iter().collect(),
                [2].into_iter().collect(),
            ],
            edges: vec![(0, 1)],
        };
        match validate_td(&g, &td) {
            TdValidation::Violation { property: 2, .. } => {}
            other => panic!("expected an edge-coverage violation, got {other:?}"),
        }
    }

    #[test]
    fn validation_reports_disconnected_occurrence() {
        let g = LabeledGraph::from_edges(vec!["a", "b", "c"], vec![(0, 1), (1, 2), (0, 2)]);
        let td = TreeDecomposition {
            bags: vec![
                [0, 1].into_iter().collect(),
                [1, 2].into_iter().collect(),
                [0, 2].into_iter().collect(),
            ],
            edges: vec![(0, 1), (1, 2)],
        };
        match validate_td(&g, &td) {
            TdValidation::Violation { property: 3, .. } => {}
            other => panic!("expected a connectivity violation, got {other:?}"),
        }
    }

    #[test]
    fn make_nice_single_edge_bag() {
        let g = LabeledGraph::from_edges(vec!["a", "b"], vec![(0, 1)]);
        let td = TreeDecomposition {
            bags: vec![[0, 1].into_iter().collect()],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        let width = validate_nice(&g, &ntd).unwrap();
        assert_eq!(width, 1);
        assert_eq!(primal_width(&ntd), PrimalWidth { width: 1, degenerate: false });
        // chain: Leaf, Introduce(a), Introduce(b), Forget(b), Forget(a)
        assert_eq!(ntd.nodes.len(), 5);
    }

    #[test]
    fn make_nice_preserves_p3_width() {
        let g = p3_graph();
        let ntd = make_nice(&g, &p3_td()).unwrap();
        assert_eq!(validate_nice(&g, &ntd).unwrap(), 1);
    }

    #[test]
    fn make_nice_handles_branching() {
        // star center 0 with three leaves; three bags hanging off {0}
        let g = LabeledGraph::from_edges(
            vec!["c", "x", "y", "z"],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let td = TreeDecomposition {
            bags: vec![
                [0].into_iter().collect(),
                [0, 1].into_iter().collect(),
                [0, 2].into_iter().collect(),
                [0, 3].into_iter().collect(),
            ],
            edges: vec![(0, 1), (0, 2), (0, 3)],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert_eq!(validate_nice(&g, &ntd).unwrap(), 1);
        let joins = ntd
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NiceKind::Join))
            .count();
        assert_eq!(joins, 2);
    }

    #[test]
    fn constraint_lambda_covers_scopes() {
        let g = p3_graph();
        let mut ntd = make_nice(&g, &p3_td()).unwrap();
        ntd.assign_constraint_lambda(&[vec![0, 1], vec![1, 2]]).unwrap();
        let lambda = ntd.constraint_lambda.clone().unwrap();
        for (scope, &n) in [vec![0, 1], vec![1, 2]].iter().zip(&lambda) {
            assert!(matches!(ntd.nodes[n].kind, NiceKind::Introduce(_)));
            assert!(scope.iter().all(|v| ntd.nodes[n].bag.contains(v)));
        }
        // a scope no bag covers
        assert!(ntd.assign_constraint_lambda(&[vec![0, 2]]).is_err());
    }

    #[test]
    fn single_large_bag_width() {
        let g = LabeledGraph::from_edges(vec!["a", "b", "c", "d"], vec![(0, 1), (2, 3)]);
        let td = TreeDecomposition {
            bags: vec![[0, 1, 2, 3].into_iter().collect()],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert_eq!(primal_width(&ntd), PrimalWidth { width: 3, degenerate: false });
    }

    #[test]
    fn degenerate_width() {
        let g = LabeledGraph::from_edges(Vec::<String>::new(), vec![]);
        let td = TreeDecomposition {
            bags: vec![BTreeSet::new()],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert_eq!(primal_width(&ntd), PrimalWidth { width: 0, degenerate: true });
    }
}
