//! Cross-checks of solver internals against first-principles recomputation:
//! per-node CSP tables against enumerated partial solutions, nice-tree
//! structural facts, and exact set-level agreement between solver output
//! and the brute-force oracle.

use std::collections::{BTreeMap, BTreeSet};

use junction::cds::{eval_kexpr, solve_semiring_cds, solve_semiring_ds, KExpression, KNode};
use junction::csp::{assignment_from_rank, assignment_rank, solve_semiring_csp, CspInstance};
use junction::expr::{FunctionSet, Materialization};
use junction::gen::{random_csp, random_kexpr};
use junction::oracle::{enumerate_cds, enumerate_csp, enumerate_ds, EnumerationBudget};
use junction::td::{make_nice, validate_nice, NiceKind, NiceTreeDecomposition};

const NODE_BUDGET: usize = 1 << 22;
const MEMBER_BUDGET: usize = 1 << 20;

fn materialized(sol_store: &junction::expr::ExprStore, h: junction::expr::ExprHandle) -> FunctionSet {
    match sol_store.materialize(h, NODE_BUDGET, MEMBER_BUDGET).unwrap() {
        Materialization::Set(s) => s,
        Materialization::Fail => panic!("solver-produced expression is illegal"),
    }
}

fn cds_corpus() -> Vec<KExpression> {
    let mut corpus = vec![
        KExpression::parse("(edge 1 2 (oplus (relabel 2 1 (edge 1 2 (oplus (vertex 1 a) (vertex 2 b)))) (vertex 2 c)))").unwrap(),
    ];
    for seed in 0..15 {
        let n = 3 + (seed as usize % 6);
        corpus.push(random_kexpr(1 + (seed as usize % 3).max(1), n, seed).unwrap());
    }
    corpus
}

#[test]
fn cds_solution_sets_match_oracle_exactly() {
    let budget = EnumerationBudget::default();
    for kx in cds_corpus() {
        let sol = solve_semiring_cds(&kx).unwrap();
        let expected = enumerate_cds(&sol.graph, &budget).unwrap();
        let got = materialized(&sol.store, sol.root);
        // cache exactness on the root
        assert_eq!(sol.store.is_empty_expr(sol.root), got.is_empty());
        if !got.is_empty() {
            assert_eq!(got.domain, expected.domain);
        }
        assert_eq!(got.members, expected.members, "k-expression: {}", kx.to_text());
    }
}

#[test]
fn ds_solution_sets_match_oracle_exactly() {
    let budget = EnumerationBudget::default();
    for kx in cds_corpus() {
        let sol = solve_semiring_ds(&kx).unwrap();
        let expected = enumerate_ds(&sol.graph, &budget).unwrap();
        let got = materialized(&sol.store, sol.root);
        assert_eq!(got.members, expected.members, "k-expression: {}", kx.to_text());
    }
}

/// Every bucket of every node of the CDS recursion holds exactly the
/// candidates whose from-scratch trace (on the subgraph built so far) is
/// the bucket key; jointly the buckets partition all candidate subsets.
#[test]
fn cds_node_buckets_partition_candidates() {
    for kx in cds_corpus().into_iter().take(8) {
        let k = kx.k().max(1);
        let sol = solve_semiring_cds(&kx).unwrap();
        let sub_nodes = post_order_nodes(kx.root());
        assert_eq!(sub_nodes.len(), sol.node_tables.len());

        for (sub, node_trace) in sub_nodes.iter().zip(&sol.node_tables) {
            let sub_kx = KExpression::new((*sub).clone()).unwrap();
            let sub_graph = eval_kexpr(&sub_kx).unwrap();
            let m = sub_graph.vertex_count();
            assert_eq!(node_trace.vertex_range.len(), m);

            // expected: trace -> set of indicator vectors (local order)
            let mut expected: BTreeMap<junction::cds::CdsTrace, BTreeSet<Vec<usize>>> =
                BTreeMap::new();
            for subset_mask in 0..(1usize << m) {
                let subset: Vec<usize> =
                    (0..m).filter(|&v| subset_mask & (1 << v) != 0).collect();
                let trace = junction::cds::trace_from_scratch(&sub_graph, k, &subset);
                let vector: Vec<usize> =
                    (0..m).map(|v| usize::from(subset_mask & (1 << v) != 0)).collect();
                expected.entry(trace).or_default().insert(vector);
            }

            let mut total = 0usize;
            for (trace, &expr) in &node_trace.table {
                let set = materialized(&sol.store, expr);
                assert_eq!(
                    set.domain,
                    node_trace.vertex_range.clone().collect::<Vec<_>>(),
                    "bucket domain should be the subexpression's vertices"
                );
                total += set.len();
                let want = expected.get(trace).unwrap_or_else(|| {
                    panic!("solver produced a trace no candidate attains: {trace:?}")
                });
                assert_eq!(&set.members, want);
            }
            assert_eq!(total, 1 << m, "buckets must partition all candidates");
            assert_eq!(expected.len(), node_trace.table.len());
        }
    }
}

/// Solver output DAGs are reproducible run to run: collision merging
/// follows the deterministic trace order.
#[test]
fn solver_output_is_deterministic() {
    for kx in cds_corpus().into_iter().take(6) {
        let a = solve_semiring_cds(&kx).unwrap();
        let b = solve_semiring_cds(&kx).unwrap();
        assert_eq!(
            junction::expr::write_expr(&a.store, a.root),
            junction::expr::write_expr(&b.store, b.root)
        );
        let a = solve_semiring_ds(&kx).unwrap();
        let b = solve_semiring_ds(&kx).unwrap();
        assert_eq!(
            junction::expr::write_expr(&a.store, a.root),
            junction::expr::write_expr(&b.store, b.root)
        );
    }
    for (instance, ntd) in csp_corpus().into_iter().take(6) {
        let a = solve_semiring_csp(&instance, &ntd).unwrap();
        let b = solve_semiring_csp(&instance, &ntd).unwrap();
        assert_eq!(
            junction::expr::write_expr(&a.store, a.root),
            junction::expr::write_expr(&b.store, b.root)
        );
    }
}

/// The signature norm counts connected components: it is exactly one
/// precisely for the non-empty subsets inducing a connected subgraph.
#[test]
fn signature_norm_characterizes_connectivity() {
    use junction::cds::{trace_from_scratch, Tribool};
    for kx in cds_corpus() {
        let graph = eval_kexpr(&kx).unwrap();
        let n = graph.vertex_count();
        if n > 10 {
            continue;
        }
        let k = kx.k().max(1);
        for mask in 0usize..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            let trace = trace_from_scratch(&graph, k, &subset);
            let connected_nonempty = if subset.is_empty() {
                false
            } else {
                // plain reachability within the induced subgraph
                let mut seen = vec![false; n];
                let mut stack = vec![subset[0]];
                seen[subset[0]] = true;
                while let Some(v) = stack.pop() {
                    for w in graph.neighbors(v) {
                        if subset.contains(&w) && !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                subset.iter().all(|&v| seen[v])
            };
            assert_eq!(
                trace.signature.norm() == Tribool::One,
                connected_nonempty,
                "subset {subset:?} of {}",
                kx.to_text()
            );
        }
    }
}

fn post_order_nodes(root: &KNode) -> Vec<&KNode> {
    let mut order = Vec::new();
    fn walk<'a>(node: &'a KNode, out: &mut Vec<&'a KNode>) {
        match node {
            KNode::Vertex { .. } => {}
            KNode::Oplus(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            KNode::Relabel { child, .. } | KNode::EdgeCreate { child, .. } => walk(child, out),
        }
        out.push(node);
    }
    walk(root, &mut order);
    order
}

fn csp_corpus() -> Vec<(CspInstance, NiceTreeDecomposition)> {
    let mut corpus = Vec::new();
    for seed in 0..25 {
        let vars = 2 + (seed as usize % 4);
        let (instance, td) = random_csp(vars, 2 + (seed as usize % 2), 3, seed).unwrap();
        let g = instance.gaifman();
        let original_width = junction::td::validate_td(&g, &td).into_result().unwrap();
        let ntd = make_nice(&g, &td).unwrap();
        // conversion to nice form preserves the width exactly
        assert_eq!(validate_nice(&g, &ntd).unwrap(), original_width);
        corpus.push((instance, ntd));
    }
    corpus
}

/// Subtree-derived facts used by the solver: descendant bag sets and the
/// lambda-domain of each node.
struct NodeFacts {
    descbag: Vec<BTreeSet<usize>>,
    dom: Vec<BTreeSet<usize>>,
}

fn node_facts(ntd: &NiceTreeDecomposition) -> NodeFacts {
    let n = ntd.nodes.len();
    let mut descbag = vec![BTreeSet::new(); n];
    let mut desc = vec![BTreeSet::new(); n];
    for i in ntd.post_order() {
        let mut db: BTreeSet<usize> = ntd.nodes[i].bag.iter().copied().collect();
        let mut ds: BTreeSet<usize> = BTreeSet::from([i]);
        for &c in &ntd.nodes[i].children {
            db.extend(descbag[c].iter().copied());
            ds.extend(desc[c].iter().copied());
        }
        descbag[i] = db;
        desc[i] = ds;
    }
    let mut dom = vec![BTreeSet::new(); n];
    for (i, d) in dom.iter_mut().enumerate() {
        for (v, &lambda) in ntd.var_lambda.iter().enumerate() {
            if desc[i].contains(&lambda) {
                d.insert(v);
            }
        }
    }
    NodeFacts { descbag, dom }
}

/// The structural facts of nice decompositions the solver's correctness
/// argument rests on.
#[test]
fn nice_decomposition_structural_facts() {
    for (instance, ntd) in csp_corpus() {
        let g = instance.gaifman();
        let facts = node_facts(&ntd);
        for (i, node) in ntd.nodes.iter().enumerate() {
            match node.kind {
                NiceKind::Introduce(v) => {
                    let child = node.children[0];
                    assert!(
                        !facts.descbag[child].contains(&v),
                        "introduced vertex already below"
                    );
                    // every Gaifman edge from v into the subtree lands in the bag
                    for &u in &facts.descbag[i] {
                        if g.has_edge(u, v) {
                            assert!(node.bag.contains(&u));
                        }
                    }
                }
                NiceKind::Join => {
                    let (a, b) = (node.children[0], node.children[1]);
                    let inter: BTreeSet<usize> = facts.descbag[a]
                        .intersection(&facts.descbag[b])
                        .copied()
                        .collect();
                    let bag: BTreeSet<usize> = node.bag.iter().copied().collect();
                    assert_eq!(inter, bag, "join children overlap exactly in the bag");
                    for &u in facts.descbag[a].difference(&bag) {
                        for &v in facts.descbag[b].difference(&bag) {
                            assert!(!g.has_edge(u, v), "no edge may cross a join");
                        }
                    }
                }
                _ => {}
            }
        }
        // lambda domains of join children are disjoint and split the parent's
        for (i, node) in ntd.nodes.iter().enumerate() {
            if let NiceKind::Join = node.kind {
                let (a, b) = (node.children[0], node.children[1]);
                assert!(facts.dom[a].is_disjoint(&facts.dom[b]));
                let union: BTreeSet<usize> = facts.dom[a].union(&facts.dom[b]).copied().collect();
                assert_eq!(union, facts.dom[i]);
            }
        }
    }
}

/// The solver's induction: each table entry denotes exactly the
/// restrictions to dom(N) of the partial solutions on descbag(N) that agree
/// with the bag assignment.
#[test]
fn csp_node_tables_match_partial_solutions() {
    for (instance, ntd) in csp_corpus() {
        let d = instance.domain.len();
        let sol = solve_semiring_csp(&instance, &ntd).unwrap();
        let facts = node_facts(&ntd);

        for (i, node) in ntd.nodes.iter().enumerate() {
            let bag = &node.bag;
            let descbag: Vec<usize> = facts.descbag[i].iter().copied().collect();
            let dom: Vec<usize> = facts.dom[i].iter().copied().collect();
            let relevant: Vec<usize> = (0..instance.constraints.len())
                .filter(|&c| {
                    instance.constraints[c]
                        .scope
                        .iter()
                        .all(|v| facts.descbag[i].contains(v))
                })
                .collect();

            for rank in 0..d.pow(bag.len() as u32) {
                let f = assignment_from_rank(rank, d, bag.len());

                // enumerate partial solutions on descbag agreeing with f
                let mut expected: BTreeSet<Vec<usize>> = BTreeSet::new();
                for full_rank in 0..d.pow(descbag.len() as u32) {
                    let assignment = assignment_from_rank(full_rank, d, descbag.len());
                    let value_of = |v: usize| {
                        assignment[descbag.iter().position(|&u| u == v).unwrap()]
                    };
                    let agrees = bag.iter().zip(&f).all(|(&v, &val)| value_of(v) == val);
                    if !agrees {
                        continue;
                    }
                    let satisfied = relevant.iter().all(|&c| {
                        let constraint = &instance.constraints[c];
                        let tuple: Vec<usize> =
                            constraint.scope.iter().map(|&v| value_of(v)).collect();
                        constraint.tuples.contains(&tuple)
                    });
                    if satisfied {
                        expected.insert(dom.iter().map(|&v| value_of(v)).collect());
                    }
                }

                let entry = sol.node_tables[i][assignment_rank(&f, d)];
                let got = materialized(&sol.store, entry);
                assert_eq!(
                    sol.store.is_empty_expr(entry),
                    got.is_empty(),
                    "is_empty cache must be exact"
                );
                if !got.is_empty() {
                    assert_eq!(got.domain, dom);
                }
                assert_eq!(got.members, expected, "node {i}, assignment {f:?}");
            }
        }
    }
}

/// The fused minimum-and-count evaluation agrees with scanning the
/// enumerated set on every instance small enough to enumerate.
#[test]
fn count_min_cost_matches_scanning() {
    use junction::measures::{count_min_cost, unit_costs};
    use junction::oracle::count_min_cost_by_scan;
    let budget = EnumerationBudget::default();
    for kx in cds_corpus() {
        let sol = solve_semiring_cds(&kx).unwrap();
        let costs = unit_costs(sol.store.universe(), 1);
        let fused = count_min_cost(&sol.store, sol.root, &costs).unwrap();
        let sets = enumerate_cds(&sol.graph, &budget).unwrap();
        let scanned = count_min_cost_by_scan(&sets, &costs).unwrap();
        assert_eq!(fused, scanned, "k-expression: {}", kx.to_text());
    }
}

#[test]
fn csp_solution_sets_match_oracle_exactly() {
    let budget = EnumerationBudget::default();
    for (instance, ntd) in csp_corpus() {
        let sol = solve_semiring_csp(&instance, &ntd).unwrap();
        let expected = enumerate_csp(&instance, &budget).unwrap();
        let got = materialized(&sol.store, sol.root);
        assert_eq!(got.members, expected.members);
    }
}
