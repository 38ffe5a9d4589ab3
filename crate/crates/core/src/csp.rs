//! Finite-domain CSP and sum-product CSP over nice tree decompositions.
//!
//! Both solvers run the same bottom-up table scheme over a nice tree
//! decomposition of the instance's Gaifman graph, one table entry per
//! assignment of the current bag. The CSP solver builds a join/union
//! expression of the full solution set: a variable's binding leaf is
//! attached at its lambda Introduce node only, so join domains stay
//! disjoint across branches. The sum-product solver carries semiring
//! values instead of expressions and multiplies each constraint's valuation
//! in at the constraint's lambda node exactly once.

use serde::Deserialize;
use std::collections::BTreeSet;

use crate::algebra::{self, SemiringDescriptor, SemiringValue};
use crate::cds::LabeledGraph;
use crate::expr::{uplus_fold, ExprHandle, ExprStore, Universe};
use crate::td::{NiceKind, NiceTreeDecomposition};
use crate::{Error, Result};

/// Relations of larger arity need exponentially large tables; refuse them.
pub const MAX_ARITY: usize = 4;

/// A constraint: a scope of variable indices and the set of allowed value
/// tuples (value indices into the domain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A CSP instance over a finite domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    pub variables: Vec<String>,
    pub domain: Vec<String>,
    pub constraints: Vec<Constraint>,
}

/// A constraint valued in a semiring: a dense table over `D^arity`.
#[derive(Debug, Clone)]
pub struct SpConstraint {
    pub scope: Vec<usize>,
    /// `table[rank]` for the rank of the argument tuple in position-major
    /// order (first scope position least significant).
    pub table: Vec<SemiringValue>,
}

/// A sum-product CSP instance: every constraint maps argument tuples to
/// semiring values.
#[derive(Debug, Clone)]
pub struct SumProductInstance {
    pub variables: Vec<String>,
    pub domain: Vec<String>,
    pub constraints: Vec<SpConstraint>,
    pub descriptor: SemiringDescriptor,
}

fn check_scope(
    scope: &[usize],
    num_vars: usize,
    index: usize,
) -> Result<()> {
    if scope.is_empty() {
        return Err(Error::usage(format!("constraint {index} has empty scope")));
    }
    if scope.len() > MAX_ARITY {
        return Err(Error::usage(format!(
            "constraint {index} has arity {} above the cap {MAX_ARITY}",
            scope.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for &v in scope {
        if v >= num_vars {
            return Err(Error::usage(format!(
                "constraint {index} references variable index {v} out of range"
            )));
        }
        if !seen.insert(v) {
            return Err(Error::usage(format!(
                "constraint {index} repeats a variable in its scope"
            )));
        }
    }
    Ok(())
}

impl CspInstance {
    pub fn new(
        variables: Vec<String>,
        domain: Vec<String>,
        constraints: Vec<Constraint>,
    ) -> Result<CspInstance> {
        if domain.is_empty() {
            return Err(Error::usage("CSP domain must be non-empty"));
        }
        for (i, c) in constraints.iter().enumerate() {
            check_scope(&c.scope, variables.len(), i)?;
            for tuple in &c.tuples {
                if tuple.len() != c.scope.len() {
                    return Err(Error::usage(format!(
                        "constraint {i} has a tuple of arity {} but scope of arity {}",
                        tuple.len(),
                        c.scope.len()
                    )));
                }
                if tuple.iter().any(|&d| d >= domain.len()) {
                    return Err(Error::usage(format!(
                        "constraint {i} has a tuple with an out-of-range value"
                    )));
                }
            }
        }
        Ok(CspInstance {
            variables,
            domain,
            constraints,
        })
    }

    /// The expression universe: variables to domain values.
    pub fn universe(&self) -> Result<Universe> {
        Universe::new(self.variables.clone(), self.domain.clone())
    }

    /// Parse the JSON instance format. Domain values and tuple entries may
    /// be JSON strings or numbers.
    pub fn parse_json(text: &str) -> Result<CspInstance> {
        let file: CspFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let variables: Vec<String> = file.variables.into_iter().map(Atom::into_string).collect();
        let domain: Vec<String> = file.domain.into_iter().map(Atom::into_string).collect();
        let var_index = |name: &str| -> Result<usize> {
            variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::usage(format!("unknown variable {name:?} in constraint scope")))
        };
        let dom_index = |name: &str| -> Result<usize> {
            domain
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::usage(format!("unknown domain value {name:?} in tuple")))
        };
        let mut constraints = Vec::with_capacity(file.constraints.len());
        for c in file.constraints {
            let scope: Vec<usize> = c
                .scope
                .into_iter()
                .map(|a| var_index(&a.into_string()))
                .collect::<Result<_>>()?;
            let tuples: BTreeSet<Vec<usize>> = c
                .tuples
                .into_iter()
                .map(|t| {
                    t.into_iter()
                        .map(|a| dom_index(&a.into_string()))
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<_>>()?;
            constraints.push(Constraint { scope, tuples });
        }
        CspInstance::new(variables, domain, constraints)
    }

    /// Render to the JSON instance format.
    pub fn to_json(&self) -> String {
        let file = serde_json::json!({
            "variables": self.variables,
            "domain": self.domain,
            "constraints": self.constraints.iter().map(|c| {
                serde_json::json!({
                    "scope": c.scope.iter().map(|&v| &self.variables[v]).collect::<Vec<_>>(),
                    "tuples": c.tuples.iter().map(|t| {
                        t.iter().map(|&d| &self.domain[d]).collect::<Vec<_>>()
                    }).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&file).expect("instance serializes") + "\n"
    }
}

impl SumProductInstance {
    /// View a relational instance as a Boolean sum-product instance:
    /// allowed tuples map to true, the rest to false.
    pub fn from_csp(instance: &CspInstance) -> SumProductInstance {
        let d = instance.domain.len();
        let constraints = instance
            .constraints
            .iter()
            .map(|c| {
                let size = d.pow(c.scope.len() as u32);
                let mut table = vec![algebra::boolean(false); size];
                for tuple in &c.tuples {
                    table[rank_of(tuple, d)] = algebra::boolean(true);
                }
                SpConstraint {
                    scope: c.scope.clone(),
                    table,
                }
            })
            .collect();
        SumProductInstance {
            variables: instance.variables.clone(),
            domain: instance.domain.clone(),
            constraints,
            descriptor: SemiringDescriptor::Boolean,
        }
    }

    /// Parse the JSON sum-product format: like the CSP format but with a
    /// `semiring` field and `table: [{args, value}]` constraints. Tables
    /// must be total.
    pub fn parse_json(text: &str) -> Result<SumProductInstance> {
        let file: SpFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let descriptor = SemiringDescriptor::parse(&file.semiring)?;
        let variables: Vec<String> = file.variables.into_iter().map(Atom::into_string).collect();
        let domain: Vec<String> = file.domain.into_iter().map(Atom::into_string).collect();
        let d = domain.len();
        if d == 0 {
            return Err(Error::usage("CSP domain must be non-empty"));
        }
        let mut constraints = Vec::with_capacity(file.constraints.len());
        for (ci, c) in file.constraints.into_iter().enumerate() {
            let scope: Vec<usize> = c
                .scope
                .into_iter()
                .map(|a| {
                    let name = a.into_string();
                    variables
                        .iter()
                        .position(|v| *v == name)
                        .ok_or_else(|| Error::usage(format!("unknown variable {name:?}")))
                })
                .collect::<Result<_>>()?;
            check_scope(&scope, variables.len(), ci)?;
            let size = d.pow(scope.len() as u32);
            let mut table: Vec<Option<SemiringValue>> = vec![None; size];
            for row in c.table {
                if row.args.len() != scope.len() {
                    return Err(Error::usage(format!(
                        "constraint {ci}: args arity does not match the scope"
                    )));
                }
                let tuple: Vec<usize> = row
                    .args
                    .into_iter()
                    .map(|a| {
                        let name = a.into_string();
                        domain
                            .iter()
                            .position(|v| *v == name)
                            .ok_or_else(|| Error::usage(format!("unknown domain value {name:?}")))
                    })
                    .collect::<Result<_>>()?;
                let rank = rank_of(&tuple, d);
                if table[rank]
                    .replace(algebra::parse_value(&descriptor, &row.value)?)
                    .is_some()
                {
                    return Err(Error::usage(format!(
                        "constraint {ci}: duplicate table row for {tuple:?}"
                    )));
                }
            }
            let table: Vec<SemiringValue> = table
                .into_iter()
                .enumerate()
                .map(|(rank, v)| {
                    v.ok_or_else(|| {
                        Error::usage(format!(
                            "constraint {ci}: valuation table is missing rank {rank}; \
                             tables must be total"
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            constraints.push(SpConstraint { scope, table });
        }
        Ok(SumProductInstance {
            variables,
            domain,
            constraints,
            descriptor,
        })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Atom {
    Text(String),
    Number(i64),
}

impl Atom {
    fn into_string(self) -> String {
        match self {
            Atom::Text(s) => s,
            Atom::Number(n) => n.to_string(),
        }
    }
}

#[derive(Deserialize)]
struct CspFile {
    variables: Vec<Atom>,
    domain: Vec<Atom>,
    constraints: Vec<CspFileConstraint>,
}

#[derive(Deserialize)]
struct CspFileConstraint {
    scope: Vec<Atom>,
    tuples: Vec<Vec<Atom>>,
}

#[derive(Deserialize)]
struct SpFile {
    semiring: String,
    variables: Vec<Atom>,
    domain: Vec<Atom>,
    constraints: Vec<SpFileConstraint>,
}

#[derive(Deserialize)]
struct SpFileConstraint {
    scope: Vec<Atom>,
    table: Vec<SpFileRow>,
}

#[derive(Deserialize)]
struct SpFileRow {
    args: Vec<Atom>,
    value: String,
}

/// The Gaifman graph: variables as vertices, an edge wherever two variables
/// share a constraint scope. Labels are unused (all 1).
pub fn gaifman(variables: &[String], scopes: &[Vec<usize>]) -> LabeledGraph {
    let mut edges = BTreeSet::new();
    for scope in scopes {
        for (i, &u) in scope.iter().enumerate() {
            for &v in &scope[i + 1..] {
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    LabeledGraph {
        names: variables.to_vec(),
        edges,
        labels: vec![1; variables.len()],
    }
}

impl CspInstance {
    pub fn gaifman(&self) -> LabeledGraph {
        let scopes: Vec<Vec<usize>> = self.constraints.iter().map(|c| c.scope.clone()).collect();
        gaifman(&self.variables, &scopes)
    }
}

impl SumProductInstance {
    pub fn gaifman(&self) -> LabeledGraph {
        let scopes: Vec<Vec<usize>> = self.constraints.iter().map(|c| c.scope.clone()).collect();
        gaifman(&self.variables, &scopes)
    }

    pub fn universe(&self) -> Result<Universe> {
        Universe::new(self.variables.clone(), self.domain.clone())
    }
}

/// Rank of an assignment vector in position-major order (first position
/// least significant); the indexing convention of every dense table here.
pub fn assignment_rank(tuple: &[usize], d: usize) -> usize {
    rank_of(tuple, d)
}

/// Inverse of [`assignment_rank`].
pub fn assignment_from_rank(rank: usize, d: usize, len: usize) -> Vec<usize> {
    unrank(rank, d, len)
}

fn rank_of(tuple: &[usize], d: usize) -> usize {
    let mut rank = 0usize;
    for &digit in tuple.iter().rev() {
        rank = rank * d + digit;
    }
    rank
}

fn unrank(mut rank: usize, d: usize, len: usize) -> Vec<usize> {
    let mut tuple = Vec::with_capacity(len);
    for _ in 0..len {
        tuple.push(rank % d);
        rank /= d;
    }
    tuple
}

/// Work counters of a table-based solve.
#[derive(Debug, Clone, Default)]
pub struct CspStats {
    /// Number of bag assignments iterated per node, in post-order.
    pub node_assignments: Vec<usize>,
}

/// A CSP solve result: the expression store, the solution-set expression,
/// and work counters. The per-node tables (indexed like the decomposition's
/// nodes; one expression per bag assignment in rank order) are kept so
/// tests can materialize and re-derive every entry.
#[derive(Debug)]
pub struct CspSolution {
    pub store: ExprStore,
    pub root: ExprHandle,
    pub stats: CspStats,
    pub node_tables: Vec<Vec<ExprHandle>>,
}

struct NodeContext {
    bag: Vec<usize>,
    /// Constraints checked at this Introduce node: the introduced variable
    /// is in the scope and the scope fits in the bag.
    checked_constraints: Vec<usize>,
}

fn node_contexts(
    ntd: &NiceTreeDecomposition,
    scopes: &[Vec<usize>],
    order: &[usize],
) -> Vec<NodeContext> {
    let mut contexts: Vec<NodeContext> = Vec::with_capacity(ntd.nodes.len());
    for _ in 0..ntd.nodes.len() {
        contexts.push(NodeContext {
            bag: Vec::new(),
            checked_constraints: Vec::new(),
        });
    }
    for &n in order {
        let node = &ntd.nodes[n];
        contexts[n].bag = node.bag.clone();
        if let NiceKind::Introduce(v) = node.kind {
            contexts[n].checked_constraints = scopes
                .iter()
                .enumerate()
                .filter(|(_, scope)| {
                    scope.contains(&v) && scope.iter().all(|u| node.bag.contains(u))
                })
                .map(|(i, _)| i)
                .collect();
        }
    }
    contexts
}

fn bag_position(bag: &[usize], v: usize) -> usize {
    bag.iter().position(|&u| u == v).expect("vertex in bag")
}

/// Does the bag assignment `f` satisfy constraint `c` of the instance? The
/// scope is assumed to be inside the bag.
fn satisfies(constraint: &Constraint, bag: &[usize], f: &[usize]) -> bool {
    let tuple: Vec<usize> = constraint
        .scope
        .iter()
        .map(|&v| f[bag_position(bag, v)])
        .collect();
    constraint.tuples.contains(&tuple)
}

/// Build a join/union expression of the set of solutions of the instance,
/// walking a nice tree decomposition of its Gaifman graph.
pub fn solve_semiring_csp(
    instance: &CspInstance,
    ntd: &NiceTreeDecomposition,
) -> Result<CspSolution> {
    if ntd.num_vertices() != instance.variables.len() {
        return Err(Error::usage(
            "nice tree decomposition was built for a different variable set",
        ));
    }
    let universe = instance.universe()?;
    let mut store = ExprStore::new(universe);
    let d = instance.domain.len();
    let order = ntd.post_order();
    let scopes: Vec<Vec<usize>> = instance.constraints.iter().map(|c| c.scope.clone()).collect();
    let contexts = node_contexts(ntd, &scopes, &order);
    let mut stats = CspStats::default();

    let mut tables: Vec<Option<Vec<ExprHandle>>> = (0..ntd.nodes.len()).map(|_| None).collect();
    for &n in &order {
        let node = &ntd.nodes[n];
        let bag = &contexts[n].bag;
        let size = d.pow(bag.len() as u32);
        stats.node_assignments.push(size);
        let table: Vec<ExprHandle> = match node.kind {
            NiceKind::Leaf => vec![store.make_unit()],
            NiceKind::Introduce(v) => {
                let child = node.children[0];
                let child_bag = &contexts[child].bag;
                let child_table = tables[child].as_ref().expect("child solved first");
                let pv = bag_position(bag, v);
                let mut table = Vec::with_capacity(size);
                for rank in 0..size {
                    let f = unrank(rank, d, bag.len());
                    let violated = contexts[n].checked_constraints.iter().any(|&ci| {
                        !satisfies(&instance.constraints[ci], bag, &f)
                    });
                    if violated {
                        table.push(store.make_empty());
                        continue;
                    }
                    let mut child_f = f.clone();
                    let value = child_f.remove(pv);
                    debug_assert_eq!(child_bag.len(), child_f.len());
                    let mut e = child_table[rank_of(&child_f, d)];
                    if ntd.var_lambda[v] == n {
                        let leaf = store.make_leaf_indexed(v, value);
                        e = store.make_join(e, leaf)?;
                    }
                    table.push(e);
                }
                table
            }
            NiceKind::Forget(v) => {
                let child = node.children[0];
                let child_bag = &contexts[child].bag;
                let child_table = tables[child].as_ref().expect("child solved first");
                let pv = bag_position(child_bag, v);
                let mut table = Vec::with_capacity(size);
                for rank in 0..size {
                    let f = unrank(rank, d, bag.len());
                    let mut handles = Vec::with_capacity(d);
                    for value in 0..d {
                        let mut child_f = f.clone();
                        child_f.insert(pv, value);
                        handles.push(child_table[rank_of(&child_f, d)]);
                    }
                    let merged = uplus_fold(&mut store, handles)?.expect("domain is non-empty");
                    table.push(merged);
                }
                table
            }
            NiceKind::Join => {
                let left = tables[node.children[0]].as_ref().expect("child solved first");
                let right = tables[node.children[1]].as_ref().expect("child solved first");
                let mut table = Vec::with_capacity(size);
                for rank in 0..size {
                    table.push(store.make_join(left[rank], right[rank])?);
                }
                table
            }
        };
        tables[n] = Some(table);
    }

    let node_tables: Vec<Vec<ExprHandle>> = tables
        .into_iter()
        .map(|t| t.expect("every node solved"))
        .collect();
    let root_table = &node_tables[ntd.root];
    debug_assert_eq!(root_table.len(), 1, "root bag must be empty");
    let root = root_table[0];
    Ok(CspSolution {
        store,
        root,
        stats,
        node_tables,
    })
}

/// A sum-product solve result.
#[derive(Debug)]
pub struct SumProductSolution {
    pub value: SemiringValue,
    pub stats: CspStats,
}

/// Compute the sum over all assignments of the product of constraint
/// valuations, walking a nice tree decomposition whose constraint lambda is
/// assigned.
pub fn solve_sum_product(
    instance: &SumProductInstance,
    ntd: &NiceTreeDecomposition,
) -> Result<SumProductSolution> {
    if ntd.num_vertices() != instance.variables.len() {
        return Err(Error::usage(
            "nice tree decomposition was built for a different variable set",
        ));
    }
    let lambda = ntd.constraint_lambda.as_ref().ok_or_else(|| {
        Error::usage("sum-product needs a constraint lambda; call assign_constraint_lambda first")
    })?;
    if lambda.len() != instance.constraints.len() {
        return Err(Error::usage(
            "constraint lambda was assigned for a different constraint set",
        ));
    }
    let desc = &instance.descriptor;
    let d = instance.domain.len();
    let order = ntd.post_order();
    let mut stats = CspStats::default();

    let mut tables: Vec<Option<Vec<SemiringValue>>> =
        (0..ntd.nodes.len()).map(|_| None).collect();
    for &n in &order {
        let node = &ntd.nodes[n];
        let bag = &node.bag;
        let size = d.pow(bag.len() as u32);
        stats.node_assignments.push(size);
        let table: Vec<SemiringValue> = match node.kind {
            NiceKind::Leaf => vec![algebra::one(desc)],
            NiceKind::Introduce(v) => {
                let child = node.children[0];
                let child_table = tables[child].as_ref().expect("child solved first");
                let pv = bag_position(bag, v);
                let here: Vec<usize> = lambda
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l == n)
                    .map(|(ci, _)| ci)
                    .collect();
                let mut table = Vec::with_capacity(size);
                for rank in 0..size {
                    let f = unrank(rank, d, bag.len());
                    let mut child_f = f.clone();
                    child_f.remove(pv);
                    let mut value = child_table[rank_of(&child_f, d)].clone();
                    for &ci in &here {
                        let constraint = &instance.constraints[ci];
                        let tuple: Vec<usize> = constraint
                            .scope
                            .iter()
                            .map(|&u| f[bag_position(bag, u)])
                            .collect();
                        value = algebra::mul(&value, &constraint.table[rank_of(&tuple, d)])?;
                    }
                    table.push(value);
                }
                table
            }
            NiceKind::Forget(v) => {
                let child = node.children[0];
                let child_bag = &ntd.nodes[child].bag;
                let child_table = tables[child].as_ref().expect("child solved first");
                let pv = bag_position(child_bag, v);
                let mut table = Vec::with_capacity(size);
                for rank in 0..size {
                    let f = unrank(rank, d, bag.len());
                    let mut acc = algebra::zero(desc);
                    for value in 0..d {
                        let mut child_f = f.clone();
                        child_f.insert(pv, value);
                        acc = algebra::add(&acc, &child_table[rank_of(&child_f, d)])?;
                    }
                    table.push(acc);
                }
                table
            }
            NiceKind::Join => {
                let left = tables[node.children[0]].as_ref().expect("child solved first");
                let right = tables[node.children[1]].as_ref().expect("child solved first");
                left.iter()
                    .zip(right)
                    .map(|(a, b)| algebra::mul(a, b))
                    .collect::<Result<_>>()?
            }
        };
        tables[n] = Some(table);
    }

    let root_table = tables[ntd.root].take().expect("root solved");
    debug_assert_eq!(root_table.len(), 1, "root bag must be empty");
    Ok(SumProductSolution {
        value: root_table.into_iter().next().unwrap(),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::nat;
    use crate::measures::counting_measure;
    use crate::td::{make_nice, TreeDecomposition};

    /// All-different binary relation over a domain of size d.
    fn neq_tuples(d: usize) -> BTreeSet<Vec<usize>> {
        let mut t = BTreeSet::new();
        for a in 0..d {
            for b in 0..d {
                if a != b {
                    t.insert(vec![a, b]);
                }
            }
        }
        t
    }

    pub(crate) fn coloring_instance(
        names: &[&str],
        edges: &[(usize, usize)],
        colors: usize,
    ) -> CspInstance {
        let variables: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let domain: Vec<String> = (1..=colors).map(|c| c.to_string()).collect();
        let constraints = edges
            .iter()
            .map(|&(u, v)| Constraint {
                scope: vec![u, v],
                tuples: neq_tuples(colors),
            })
            .collect();
        CspInstance::new(variables, domain, constraints).unwrap()
    }

    fn solve_count(instance: &CspInstance, td: &TreeDecomposition) -> u64 {
        let g = instance.gaifman();
        let ntd = make_nice(&g, td).unwrap();
        let sol = solve_semiring_csp(instance, &ntd).unwrap();
        let count = sol
            .store
            .evaluate(sol.root, &counting_measure(sol.store.universe()))
            .unwrap();
        match count {
            SemiringValue::Nat(n) => u64::try_from(&n).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn triangle_three_coloring_has_six_solutions() {
        let instance = coloring_instance(&["a", "b", "c"], &[(0, 1), (1, 2), (0, 2)], 3);
        let td = TreeDecomposition {
            bags: vec![[0, 1, 2].into_iter().collect()],
            edges: vec![],
        };
        assert_eq!(solve_count(&instance, &td), 6);
    }

    #[test]
    fn c5_three_coloring_has_thirty_solutions() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
        let instance = coloring_instance(&["a", "b", "c", "d", "e"], &edges, 3);
        // path of bags covering the cycle, width 2
        let td = TreeDecomposition {
            bags: vec![
                [0, 1, 4].into_iter().collect(),
                [1, 2, 4].into_iter().collect(),
                [2, 3, 4].into_iter().collect(),
            ],
            edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(solve_count(&instance, &td), 30);
    }

    #[test]
    fn gaifman_of_ternary_constraint_is_a_triangle() {
        let instance = CspInstance::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec!["0".into(), "1".into()],
            vec![Constraint {
                scope: vec![0, 1, 2],
                tuples: BTreeSet::from([vec![0, 0, 0]]),
            }],
        )
        .unwrap();
        let g = instance.gaifman();
        assert_eq!(g.edges.len(), 3);
    }

    #[test]
    fn free_variable_contributes_a_free_choice() {
        // b is in no constraint but still multiplies the count by |D|
        let instance = CspInstance::new(
            vec!["a".into(), "b".into()],
            vec!["0".into(), "1".into(), "2".into()],
            vec![Constraint {
                scope: vec![0],
                tuples: BTreeSet::from([vec![1]]),
            }],
        )
        .unwrap();
        let td = TreeDecomposition {
            bags: vec![[0, 1].into_iter().collect()],
            edges: vec![],
        };
        assert_eq!(solve_count(&instance, &td), 3);
    }

    #[test]
    fn sum_product_totals_x_plus_y() {
        // one constraint valued x + y over D = {0, 1}: total 0+1+1+2 = 4
        let variables = vec!["x".to_string(), "y".to_string()];
        let domain = vec!["0".to_string(), "1".to_string()];
        let mut table = vec![algebra::zero(&SemiringDescriptor::Natural); 4];
        for x in 0..2usize {
            for y in 0..2usize {
                table[rank_of(&[x, y], 2)] = nat((x + y) as u64);
            }
        }
        let instance = SumProductInstance {
            variables,
            domain,
            constraints: vec![SpConstraint {
                scope: vec![0, 1],
                table,
            }],
            descriptor: SemiringDescriptor::Natural,
        };
        let g = instance.gaifman();
        let td = TreeDecomposition {
            bags: vec![[0, 1].into_iter().collect()],
            edges: vec![],
        };
        let mut ntd = make_nice(&g, &td).unwrap();
        let scopes: Vec<Vec<usize>> =
            instance.constraints.iter().map(|c| c.scope.clone()).collect();
        ntd.assign_constraint_lambda(&scopes).unwrap();
        let sol = solve_sum_product(&instance, &ntd).unwrap();
        assert_eq!(sol.value, nat(4));
    }

    #[test]
    fn sum_product_of_no_constraints_is_domain_power() {
        let instance = SumProductInstance {
            variables: vec!["x".into(), "y".into(), "z".into()],
            domain: vec!["0".into(), "1".into()],
            constraints: vec![],
            descriptor: SemiringDescriptor::Natural,
        };
        let g = instance.gaifman();
        let td = TreeDecomposition {
            bags: vec![[0, 1, 2].into_iter().collect()],
            edges: vec![],
        };
        let mut ntd = make_nice(&g, &td).unwrap();
        ntd.assign_constraint_lambda(&[]).unwrap();
        let sol = solve_sum_product(&instance, &ntd).unwrap();
        assert_eq!(sol.value, nat(8));
    }

    #[test]
    fn zero_variable_instance_has_one_empty_solution() {
        let instance = CspInstance::new(vec![], vec!["0".into()], vec![]).unwrap();
        let g = instance.gaifman();
        let td = TreeDecomposition {
            bags: vec![std::collections::BTreeSet::new()],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        let sol = solve_semiring_csp(&instance, &ntd).unwrap();
        let count = sol
            .store
            .evaluate(sol.root, &counting_measure(sol.store.universe()))
            .unwrap();
        assert_eq!(count, nat(1));
    }

    #[test]
    fn instance_json_roundtrip() {
        let instance = coloring_instance(&["a", "b"], &[(0, 1)], 2);
        let text = instance.to_json();
        let parsed = CspInstance::parse_json(&text).unwrap();
        assert_eq!(parsed, instance);
        // numbers are accepted where strings are expected
        let numeric = r#"{"variables": ["x"], "domain": [1, 2],
                          "constraints": [{"scope": ["x"], "tuples": [[2]]}]}"#;
        let parsed = CspInstance::parse_json(numeric).unwrap();
        assert_eq!(parsed.domain, vec!["1", "2"]);
        assert_eq!(parsed.constraints[0].tuples, BTreeSet::from([vec![1]]));
    }

    #[test]
    fn sum_product_json_with_delta_values() {
        let text = r#"{
            "semiring": "delta(trop,nat)",
            "variables": ["x"],
            "domain": ["0", "1"],
            "constraints": [{"scope": ["x"], "table": [
                {"args": ["0"], "value": "(2,1)"},
                {"args": ["1"], "value": "(inf,0)"}
            ]}]
        }"#;
        let sp = SumProductInstance::parse_json(text).unwrap();
        let g = sp.gaifman();
        let td = TreeDecomposition {
            bags: vec![[0].into_iter().collect()],
            edges: vec![],
        };
        let mut ntd = make_nice(&g, &td).unwrap();
        ntd.assign_constraint_lambda(&[vec![0]]).unwrap();
        let sol = solve_sum_product(&sp, &ntd).unwrap();
        // x = 0 is the unique minimum at cost 2
        assert_eq!(
            sol.value,
            crate::algebra::delta_pack(crate::algebra::trop(2), nat(1)).unwrap()
        );

        // a partial table is rejected
        let partial = text.replace(r#"{"args": ["1"], "value": "(inf,0)"}"#, "")
            .replace("},
            ]", "}]");
        assert!(SumProductInstance::parse_json(&partial).is_err());
    }

    #[test]
    fn arity_cap_is_enforced() {
        let vars: Vec<String> = (0..6).map(|i| format!("x{i}")).collect();
        let constraint = Constraint {
            scope: (0..5).collect(),
            tuples: BTreeSet::new(),
        };
        assert!(CspInstance::new(vars, vec!["0".into()], vec![constraint]).is_err());
    }
}
