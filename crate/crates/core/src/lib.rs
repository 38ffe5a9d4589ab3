//! Semiring dynamic programming over join/union expression DAGs.
//!
//! The toolkit separates *what* is aggregated from *how* the solution set is
//! described. Solvers emit a join/union expression: a DAG whose leaves map a
//! single domain element to a codomain element and whose internal nodes are
//! disjoint union (`uplus`) or combination over disjoint domains (`join`).
//! Any semiring measure, given as an S×T matrix, is then evaluated over the
//! expression in one bottom-up pass.
//!
//! Measures live in runtime-selectable semirings ([`algebra`]): Boolean,
//! natural (arbitrary precision), tropical (exact 64-bit costs plus
//! infinity), their delta products ("count the minimum"), and Cartesian
//! products. Two solvers are included: connected dominating sets driven by a
//! clique-width expression ([`cds`]) and CSP / sum-product CSP driven by a
//! nice tree decomposition ([`csp`]). The [`oracle`] module re-derives every
//! answer by exhaustive enumeration so solver output can be cross-checked.
//!
//! ```
//! use junction::expr::{ExprStore, Universe};
//! use junction::measures::{count_min_cost, counting_measure, unit_costs};
//! use junction::algebra::Cost;
//!
//! // the set {x -> a} ∪ ({x -> b} ⋈ {y -> b}): two partial solutions
//! let universe = Universe::new(vec!["x", "y"], vec!["a", "b"]).unwrap();
//! let mut store = ExprStore::new(universe);
//! let xa = store.make_leaf("x", "a").unwrap();
//! let xb = store.make_leaf("x", "b").unwrap();
//! let yb = store.make_leaf("y", "b").unwrap();
//! let xy = store.make_join(xb, yb).unwrap();
//!
//! // counting the one-binding set: one member
//! assert_eq!(
//!     store.evaluate(xa, &counting_measure(store.universe())).unwrap(),
//!     junction::algebra::nat(1),
//! );
//!
//! // cheapest member of the joined set and how many attain it, in one pass
//! let costs = unit_costs(store.universe(), 1);
//! let (min, count) = count_min_cost(&store, xy, &costs).unwrap();
//! assert_eq!(min, Cost::Finite(2)); // picks "b" twice
//! assert_eq!(count, 1u32.into());
//! ```

pub mod algebra;
pub mod bitset;
pub mod cds;
pub mod csp;
pub mod error;
pub mod expr;
pub mod gen;
pub mod measures;
pub mod oracle;
pub mod sexpr;
pub mod td;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
