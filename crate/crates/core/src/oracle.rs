//! Exhaustive ground truth.
//!
//! Everything here is deliberately plain brute force: enumerate all
//! candidates, test the definition directly, and apply measures by the
//! literal sum-of-products formula. Solver output is cross-checked against
//! these enumerations on every instance small enough to afford it.

use std::collections::BTreeSet;

use crate::algebra::{add, mul, one, zero, Cost, SemiringValue};
use crate::cds::LabeledGraph;
use crate::csp::CspInstance;
use crate::expr::FunctionSet;
use crate::measures::MeasureMatrix;
use crate::{Error, Result};

/// Caps on exhaustive enumeration.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationBudget {
    /// Maximum number of candidates to test.
    pub max_candidates: usize,
    /// Maximum number of solutions to collect.
    pub max_solutions: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_candidates: 1 << 20,
            max_solutions: 1 << 20,
        }
    }
}

fn candidate_count(n: usize, base: usize, budget: &EnumerationBudget) -> Result<usize> {
    let mut total = 1usize;
    for _ in 0..n {
        total = total.saturating_mul(base);
        if total > budget.max_candidates {
            return Err(Error::budget(format!(
                "{base}^{n} candidates exceed the budget of {}",
                budget.max_candidates
            )));
        }
    }
    Ok(total)
}

fn is_connected_nonempty(graph: &LabeledGraph, subset: usize) -> bool {
    if subset == 0 {
        return false;
    }
    let start = subset.trailing_zeros() as usize;
    let mut seen = 1usize << start;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in graph.neighbors(v) {
            let bit = 1usize << w;
            if subset & bit != 0 && seen & bit == 0 {
                seen |= bit;
                stack.push(w);
            }
        }
    }
    seen == subset
}

fn dominates(graph: &LabeledGraph, subset: usize) -> bool {
    let n = graph.vertex_count();
    let mut covered = subset;
    for v in 0..n {
        if subset & (1 << v) != 0 {
            for w in graph.neighbors(v) {
                covered |= 1 << w;
            }
        }
    }
    covered == (1usize << n) - 1
}

fn indicator_sets(
    graph: &LabeledGraph,
    budget: &EnumerationBudget,
    mut keep: impl FnMut(usize) -> bool,
) -> Result<FunctionSet> {
    let n = graph.vertex_count();
    let total = candidate_count(n, 2, budget)?;
    let mut members = BTreeSet::new();
    for subset in 0..total {
        if keep(subset) {
            if members.len() == budget.max_solutions {
                return Err(Error::budget(format!(
                    "more than {} solutions",
                    budget.max_solutions
                )));
            }
            let vector: Vec<usize> = (0..n).map(|v| usize::from(subset & (1 << v) != 0)).collect();
            members.insert(vector);
        }
    }
    Ok(FunctionSet {
        domain: (0..n).collect(),
        members,
    })
}

/// All connected dominating sets of the graph, as indicator functions.
/// The empty set never qualifies: it has zero connected components and, on
/// a non-empty graph, fails domination anyway.
pub fn enumerate_cds(graph: &LabeledGraph, budget: &EnumerationBudget) -> Result<FunctionSet> {
    indicator_sets(graph, budget, |subset| {
        dominates(graph, subset) && is_connected_nonempty(graph, subset)
    })
}

/// All dominating sets of the graph, as indicator functions.
pub fn enumerate_ds(graph: &LabeledGraph, budget: &EnumerationBudget) -> Result<FunctionSet> {
    indicator_sets(graph, budget, |subset| dominates(graph, subset))
}

/// All satisfying total assignments of the instance.
pub fn enumerate_csp(instance: &CspInstance, budget: &EnumerationBudget) -> Result<FunctionSet> {
    let n = instance.variables.len();
    let d = instance.domain.len();
    let total = candidate_count(n, d, budget)?;
    let mut members = BTreeSet::new();
    for rank in 0..total {
        let mut assignment = Vec::with_capacity(n);
        let mut r = rank;
        for _ in 0..n {
            assignment.push(r % d);
            r /= d;
        }
        let ok = instance.constraints.iter().all(|c| {
            let tuple: Vec<usize> = c.scope.iter().map(|&v| assignment[v]).collect();
            c.tuples.contains(&tuple)
        });
        if ok {
            if members.len() == budget.max_solutions {
                return Err(Error::budget(format!(
                    "more than {} solutions",
                    budget.max_solutions
                )));
            }
            members.insert(assignment);
        }
    }
    Ok(FunctionSet {
        domain: (0..n).collect(),
        members,
    })
}

/// Apply a measure to an explicit set by the literal formula: the sum over
/// members of the product of the selected matrix entries.
pub fn measure_directly(set: &FunctionSet, matrix: &MeasureMatrix) -> Result<SemiringValue> {
    let desc = matrix.descriptor();
    let mut total = zero(desc);
    for member in &set.members {
        let mut product = one(desc);
        for (&s, &t) in set.domain.iter().zip(member) {
            product = mul(&product, matrix.entry(s, t))?;
        }
        total = add(&total, &product)?;
    }
    Ok(total)
}

/// Scan a set for its members of minimal weight under a tropical cost
/// matrix. The empty set scans to `(inf, empty)`.
pub fn argmin_scan(set: &FunctionSet, costs: &MeasureMatrix) -> Result<(Cost, FunctionSet)> {
    let mut min = Cost::Infinity;
    let mut weights = Vec::with_capacity(set.members.len());
    for member in &set.members {
        let mut weight = Cost::Finite(0);
        for (&s, &t) in set.domain.iter().zip(member) {
            weight = weight.checked_add(costs.cost_entry(s, t)?)?;
        }
        weights.push(weight);
        min = min.min(weight);
    }
    if set.members.is_empty() {
        return Ok((Cost::Infinity, FunctionSet::empty(set.domain.clone())));
    }
    let members: BTreeSet<Vec<usize>> = set
        .members
        .iter()
        .zip(&weights)
        .filter(|(_, &w)| w == min)
        .map(|(m, _)| m.clone())
        .collect();
    Ok((
        min,
        FunctionSet {
            domain: set.domain.clone(),
            members,
        },
    ))
}

/// Count of minimal-weight members by plain scanning; the infinite-minimum
/// case counts every member (they are all minimal then).
pub fn count_min_cost_by_scan(
    set: &FunctionSet,
    costs: &MeasureMatrix,
) -> Result<(Cost, num_bigint::BigUint)> {
    let (min, argmin) = argmin_scan(set, costs)?;
    Ok((min, num_bigint::BigUint::from(argmin.len())))
}
