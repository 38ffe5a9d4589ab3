//! Seeded random fixture generation.
//!
//! Instances are drawn from ChaCha8 seeded with a caller-supplied value, so
//! a (kind, parameters, seed) triple reproduces byte-identical fixtures on
//! every platform. k-expressions are generated directly (decomposing random
//! graphs would require computing clique-width, which is itself hard) and
//! CSP instances come with a valid tree decomposition by construction:
//! constraint scopes are drawn from sliding windows over the variable
//! order, and the windows are the bags.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::cds::{KExpression, KNode};
use crate::csp::{Constraint, CspInstance, MAX_ARITY};
use crate::td::TreeDecomposition;
use crate::{Error, Result};

/// Caps on generated fixtures.
pub const MAX_GEN_K: usize = 4;
pub const MAX_GEN_VARS: usize = 12;

/// Generate a random k-expression with `n` vertices and labels in `1..=k`.
/// Vertices are named `v1..vn`.
pub fn random_kexpr(k: usize, n: usize, seed: u64) -> Result<KExpression> {
    if k == 0 || k > MAX_GEN_K {
        return Err(Error::usage(format!("k must be in 1..={MAX_GEN_K}, got {k}")));
    }
    if n == 0 || n > 16 {
        return Err(Error::usage(format!("n must be in 1..=16, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forest: Vec<KNode> = (1..=n)
        .map(|i| KNode::Vertex {
            label: rng.gen_range(1..=k),
            name: format!("v{i}"),
        })
        .collect();

    let distinct_pair = |rng: &mut ChaCha8Rng| -> (usize, usize) {
        let i = rng.gen_range(1..=k);
        let mut j = rng.gen_range(1..=k);
        while j == i {
            j = rng.gen_range(1..=k);
        }
        (i, j)
    };

    let mut unary_budget = if k >= 2 { n + k } else { 0 };
    while forest.len() > 1 || unary_budget > 0 {
        if forest.len() > 1 && (k < 2 || unary_budget == 0 || rng.gen_bool(0.5)) {
            let a = rng.gen_range(0..forest.len());
            let left = forest.swap_remove(a);
            let b = rng.gen_range(0..forest.len());
            let right = forest.swap_remove(b);
            let mut merged = KNode::Oplus(Box::new(left), Box::new(right));
            // usually wire the parts together so the graph has edges
            if k >= 2 && rng.gen_bool(0.8) {
                let (i, j) = distinct_pair(&mut rng);
                merged = KNode::EdgeCreate {
                    i,
                    j,
                    child: Box::new(merged),
                };
            }
            forest.push(merged);
        } else {
            unary_budget -= 1;
            let a = rng.gen_range(0..forest.len());
            let child = Box::new(forest.swap_remove(a));
            let (i, j) = distinct_pair(&mut rng);
            let wrapped = if rng.gen_bool(0.5) {
                KNode::Relabel { from: i, to: j, child }
            } else {
                KNode::EdgeCreate { i, j, child }
            };
            forest.push(wrapped);
        }
    }
    KExpression::new(forest.pop().expect("one tree remains"))
}

/// Generate a random CSP instance together with a valid path decomposition.
///
/// Variables are `x1..xn` over domain `1..=d`. Each constraint's scope is a
/// subset of one window `{x_i, ..., x_{i+w-1}}`; the windows are the bags
/// of the emitted decomposition, which is therefore valid by construction.
pub fn random_csp(
    num_vars: usize,
    domain_size: usize,
    num_constraints: usize,
    seed: u64,
) -> Result<(CspInstance, TreeDecomposition)> {
    if num_vars == 0 || num_vars > MAX_GEN_VARS {
        return Err(Error::usage(format!(
            "vars must be in 1..={MAX_GEN_VARS}, got {num_vars}"
        )));
    }
    if domain_size == 0 || domain_size > 4 {
        return Err(Error::usage(format!(
            "domain size must be in 1..=4, got {domain_size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let variables: Vec<String> = (1..=num_vars).map(|i| format!("x{i}")).collect();
    let domain: Vec<String> = (1..=domain_size).map(|v| v.to_string()).collect();

    let window = rng.gen_range(1..=3usize.min(num_vars));
    let num_windows = num_vars - window + 1;

    let mut constraints = Vec::with_capacity(num_constraints);
    for _ in 0..num_constraints {
        let start = rng.gen_range(0..num_windows);
        let arity = rng.gen_range(1..=window.min(MAX_ARITY).min(3));
        let mut scope_set = BTreeSet::new();
        while scope_set.len() < arity {
            scope_set.insert(start + rng.gen_range(0..window));
        }
        let scope: Vec<usize> = scope_set.into_iter().collect();
        let mut tuples = BTreeSet::new();
        let total = domain_size.pow(arity as u32);
        for rank in 0..total {
            if rng.gen_bool(0.6) {
                let mut tuple = Vec::with_capacity(arity);
                let mut r = rank;
                for _ in 0..arity {
                    tuple.push(r % domain_size);
                    r /= domain_size;
                }
                tuples.insert(tuple);
            }
        }
        constraints.push(Constraint { scope, tuples });
    }

    let bags: Vec<BTreeSet<usize>> = (0..num_windows)
        .map(|i| (i..i + window).collect())
        .collect();
    let edges: Vec<(usize, usize)> = (1..num_windows).map(|i| (i - 1, i)).collect();
    let td = TreeDecomposition { bags, edges };
    let instance = CspInstance::new(variables, domain, constraints)?;
    Ok((instance, td))
}
