//! Measure matrices and the standard measure constructors.
//!
//! A measure is determined by its S×T matrix of semiring values: the value
//! of a set of functions is the sum over members of the product of the
//! entries they select. The constructors here cover the usual extensions —
//! decision (Boolean, all true), counting (natural, all one), list
//! (Boolean, allowed pairs), cost (tropical) — plus the delta product of a
//! weight matrix with an aggregate matrix ("measure the argmin set") and
//! Cartesian products of measures.
//!
//! Matrices are immutable after construction and freely shareable.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::algebra::{
    self, delta_pack, nat, one, Cost, SemiringDescriptor, SemiringValue,
};
use crate::expr::{ExprHandle, ExprStore, Universe};
use crate::{Error, Result};

/// An S×T table of semiring values defining a measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureMatrix {
    universe: Universe,
    descriptor: SemiringDescriptor,
    /// Row-major: `entries[s * |T| + t]`.
    entries: Vec<SemiringValue>,
}

impl MeasureMatrix {
    /// Build a matrix from an entry function. Every `(s, t)` pair is filled.
    pub fn from_fn(
        universe: &Universe,
        descriptor: SemiringDescriptor,
        mut f: impl FnMut(usize, usize) -> SemiringValue,
    ) -> MeasureMatrix {
        let (ns, nt) = (universe.domain_size(), universe.codomain_size());
        let mut entries = Vec::with_capacity(ns * nt);
        for s in 0..ns {
            for t in 0..nt {
                let v = f(s, t);
                debug_assert_eq!(v.descriptor(), descriptor);
                entries.push(v);
            }
        }
        MeasureMatrix {
            universe: universe.clone(),
            descriptor,
            entries,
        }
    }

    /// A matrix with every entry set to the multiplicative one. Entries a
    /// constructor leaves unspecified default to this.
    pub fn filled_one(universe: &Universe, descriptor: SemiringDescriptor) -> MeasureMatrix {
        let entry = one(&descriptor);
        MeasureMatrix::from_fn(universe, descriptor, |_, _| entry.clone())
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn descriptor(&self) -> &SemiringDescriptor {
        &self.descriptor
    }

    pub fn entry(&self, s: usize, t: usize) -> &SemiringValue {
        &self.entries[s * self.universe.codomain_size() + t]
    }

    /// The tropical cost in entry `(s, t)`; usage error on a non-tropical
    /// matrix.
    pub fn cost_entry(&self, s: usize, t: usize) -> Result<Cost> {
        match self.entry(s, t) {
            SemiringValue::Trop(c) => Ok(*c),
            _ => Err(Error::usage("expected a tropical cost matrix")),
        }
    }
}

/// Boolean matrix with all entries true: evaluates to "is the set
/// non-empty".
pub fn decision_measure(universe: &Universe) -> MeasureMatrix {
    MeasureMatrix::from_fn(universe, SemiringDescriptor::Boolean, |_, _| {
        algebra::boolean(true)
    })
}

/// Natural matrix with all entries one: evaluates to the cardinality.
pub fn counting_measure(universe: &Universe) -> MeasureMatrix {
    MeasureMatrix::from_fn(universe, SemiringDescriptor::Natural, |_, _| nat(1))
}

/// Boolean matrix that is true exactly on the allowed `(s, t)` pairs.
pub fn list_measure(
    universe: &Universe,
    mut allowed: impl FnMut(usize, usize) -> bool,
) -> MeasureMatrix {
    MeasureMatrix::from_fn(universe, SemiringDescriptor::Boolean, |s, t| {
        algebra::boolean(allowed(s, t))
    })
}

/// Tropical matrix of the given costs: evaluates to the minimal total cost.
pub fn cost_measure(
    universe: &Universe,
    mut costs: impl FnMut(usize, usize) -> Cost,
) -> MeasureMatrix {
    MeasureMatrix::from_fn(universe, SemiringDescriptor::Tropical, |s, t| {
        SemiringValue::Trop(costs(s, t))
    })
}

/// The delta product of a weight matrix over a dioid with an aggregate
/// matrix: evaluates to `(w(F), mu(argmin_w(F)))` with the packing rule.
pub fn delta_measure(w: &MeasureMatrix, mu: &MeasureMatrix) -> Result<MeasureMatrix> {
    if w.universe != mu.universe {
        return Err(Error::usage("delta measure components over different universes"));
    }
    if !w.descriptor.is_dioid() {
        return Err(Error::usage(format!(
            "delta measure weights must live in a dioid, got {}",
            w.descriptor
        )));
    }
    let descriptor = SemiringDescriptor::delta(w.descriptor.clone(), mu.descriptor.clone());
    let nt = w.universe.codomain_size();
    let mut entries = Vec::with_capacity(w.entries.len());
    for s in 0..w.universe.domain_size() {
        for t in 0..nt {
            entries.push(delta_pack(w.entry(s, t).clone(), mu.entry(s, t).clone())?);
        }
    }
    Ok(MeasureMatrix {
        universe: w.universe.clone(),
        descriptor,
        entries,
    })
}

/// Cartesian product of two measures, entrywise.
pub fn product_measure(m1: &MeasureMatrix, m2: &MeasureMatrix) -> Result<MeasureMatrix> {
    if m1.universe != m2.universe {
        return Err(Error::usage("product measure components over different universes"));
    }
    let descriptor = SemiringDescriptor::product(m1.descriptor.clone(), m2.descriptor.clone());
    let nt = m1.universe.codomain_size();
    let mut entries = Vec::with_capacity(m1.entries.len());
    for s in 0..m1.universe.domain_size() {
        for t in 0..nt {
            entries.push(SemiringValue::Pair(
                Box::new(m1.entry(s, t).clone()),
                Box::new(m2.entry(s, t).clone()),
            ));
        }
    }
    Ok(MeasureMatrix {
        universe: m1.universe.clone(),
        descriptor,
        entries,
    })
}

/// Minimal cost over an expression and the number of members attaining it,
/// in one evaluation pass.
///
/// Uses the measure `(cost Δ count) × count`. When every member has
/// infinite cost the delta component degrades to `(inf, 0)`; all members
/// are then minimal, so the reported count falls back to the plain count
/// carried by the product component.
pub fn count_min_cost(
    store: &ExprStore,
    expr: ExprHandle,
    costs: &MeasureMatrix,
) -> Result<(Cost, BigUint)> {
    if costs.descriptor != SemiringDescriptor::Tropical {
        return Err(Error::usage(format!(
            "count_min_cost expects a tropical cost matrix, got {}",
            costs.descriptor
        )));
    }
    let counting = counting_measure(store.universe());
    let measure = product_measure(&delta_measure(costs, &counting)?, &counting)?;
    let value = store.evaluate(expr, &measure)?;
    let (delta, total) = match value {
        SemiringValue::Pair(d, t) => (*d, *t),
        _ => unreachable!("product measure evaluates to a pair"),
    };
    let total = match total {
        SemiringValue::Nat(n) => n,
        _ => unreachable!(),
    };
    match delta {
        SemiringValue::Delta(d, count) => {
            let min = match *d {
                SemiringValue::Trop(c) => c,
                _ => unreachable!(),
            };
            match min {
                Cost::Infinity => Ok((Cost::Infinity, total)),
                finite => {
                    let count = match *count {
                        SemiringValue::Nat(n) => n,
                        _ => unreachable!(),
                    };
                    debug_assert!(!count.is_zero() || total.is_zero());
                    Ok((finite, count))
                }
            }
        }
        _ => unreachable!("delta measure evaluates to a delta pair"),
    }
}

/// The weight families for SAT-style minimisation over a two-element
/// codomain. `top` is the codomain index that plays "true".
#[derive(Debug, Clone)]
pub enum SatWeights {
    /// Weight 1 on every true assignment: minimise the model cardinality.
    MinCard,
    /// Explicit per-variable weights.
    MinWeight(Vec<u64>),
    /// Lexicographic minimisation of the listed variables: the i-th listed
    /// variable gets weight `2^(l - i)`.
    MinLex(Vec<String>),
}

/// Build a tropical cost matrix realizing a SAT weight family:
/// `W[x, top] = w(x)` and `W[x, other] = 0`.
pub fn sat_weight_family(
    universe: &Universe,
    top: usize,
    kind: &SatWeights,
) -> Result<MeasureMatrix> {
    if universe.codomain_size() != 2 {
        return Err(Error::usage(
            "SAT weight families need a two-element codomain",
        ));
    }
    if top >= 2 {
        return Err(Error::usage("top codomain index must be 0 or 1"));
    }
    let n = universe.domain_size();
    let weights: Vec<i64> = match kind {
        SatWeights::MinCard => vec![1; n],
        SatWeights::MinWeight(w) => {
            if w.len() != n {
                return Err(Error::usage(format!(
                    "expected {n} weights, got {}",
                    w.len()
                )));
            }
            w.iter()
                .map(|&x| {
                    i64::try_from(x).map_err(|_| {
                        Error::overflow(format!("weight {x} exceeds the 64-bit cost range"))
                    })
                })
                .collect::<Result<_>>()?
        }
        SatWeights::MinLex(vars) => {
            let l = vars.len();
            if l > 62 {
                return Err(Error::overflow(format!(
                    "lexicographic weights 2^(l-i) overflow 64-bit costs for l = {l} > 62"
                )));
            }
            let mut w = vec![0i64; n];
            for (i, name) in vars.iter().enumerate() {
                let s = universe.domain_index(name)?;
                w[s] = 1i64 << (l - i - 1);
            }
            w
        }
    };
    Ok(cost_measure(universe, |s, t| {
        Cost::Finite(if t == top { weights[s] } else { 0 })
    }))
}

/// Parse the matrix file format: a `semiring: <descriptor>` header followed
/// by `s t value` rows. The table must be total over S×T.
pub fn parse_matrix(universe: &Universe, text: &str) -> Result<MeasureMatrix> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    });
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty matrix file"))?;
    let descriptor = match header.strip_prefix("semiring:") {
        Some(rest) => SemiringDescriptor::parse(rest.trim())?,
        None => {
            return Err(Error::parse(
                header_line,
                "matrix file must start with 'semiring: <descriptor>'",
            ))
        }
    };
    let (ns, nt) = (universe.domain_size(), universe.codomain_size());
    let mut entries: Vec<Option<SemiringValue>> = vec![None; ns * nt];
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                format!("expected 's t value', got {line:?}"),
            ));
        }
        let s = universe.domain_index(fields[0])?;
        let t = universe.codomain_index(fields[1])?;
        let value = algebra::parse_value(&descriptor, fields[2])?;
        let slot = &mut entries[s * nt + t];
        if slot.is_some() {
            return Err(Error::parse(
                line_no,
                format!("duplicate entry for ({}, {})", fields[0], fields[1]),
            ));
        }
        *slot = Some(value);
    }
    let mut filled = Vec::with_capacity(ns * nt);
    for s in 0..ns {
        for t in 0..nt {
            match entries[s * nt + t].take() {
                Some(v) => filled.push(v),
                None => {
                    return Err(Error::parse(
                        0,
                        format!(
                            "missing matrix entry for ({}, {})",
                            universe.domain_name(s),
                            universe.codomain_name(t)
                        ),
                    ))
                }
            }
        }
    }
    Ok(MeasureMatrix {
        universe: universe.clone(),
        descriptor,
        entries: filled,
    })
}

/// Unit costs over an indicator codomain: picking an element (`t == top`)
/// costs one, leaving it out costs zero.
pub fn unit_costs(universe: &Universe, top: usize) -> MeasureMatrix {
    cost_measure(universe, |_, t| Cost::Finite(i64::from(t == top)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, trop, zero};
    use crate::expr::all_functions_expr;

    fn small_universe() -> Universe {
        Universe::new(vec!["a", "b"], vec!["0", "1"]).unwrap()
    }

    #[test]
    fn decision_counting_basics() {
        let (store, root) = all_functions_expr(3).unwrap();
        assert_eq!(
            store.evaluate(root, &counting_measure(store.universe())).unwrap(),
            nat(27)
        );
        assert_eq!(
            store.evaluate(root, &decision_measure(store.universe())).unwrap(),
            boolean(true)
        );
    }

    #[test]
    fn zero_and_unit_axioms_via_evaluation() {
        let u = small_universe();
        let mut store = ExprStore::new(u.clone());
        let empty = store.make_empty();
        let unit = store.make_unit();
        for m in [decision_measure(&u), counting_measure(&u)] {
            assert_eq!(store.evaluate(empty, &m).unwrap(), zero(m.descriptor()));
            assert_eq!(store.evaluate(unit, &m).unwrap(), one(m.descriptor()));
        }
    }

    #[test]
    fn full_lists_coincide_with_decision() {
        let u = small_universe();
        assert_eq!(list_measure(&u, |_, _| true), decision_measure(&u));
    }

    #[test]
    fn zero_and_infinite_cost_extremes() {
        let u = small_universe();
        let mut store = ExprStore::new(u.clone());
        let a0 = store.make_leaf("a", "0").unwrap();
        let a1 = store.make_leaf("a", "1").unwrap();
        let both = store.make_uplus(a0, a1).unwrap();

        let free = cost_measure(&u, |_, _| Cost::Finite(0));
        assert_eq!(store.evaluate(both, &free).unwrap(), trop(0));

        let blocked = cost_measure(&u, |_, _| Cost::Infinity);
        assert_eq!(store.evaluate(both, &blocked).unwrap(), crate::algebra::trop_inf());
    }

    #[test]
    fn delta_measure_entries_follow_packing() {
        let u = small_universe();
        let w = cost_measure(&u, |s, _| if s == 0 { Cost::Finite(1) } else { Cost::Infinity });
        let mu = counting_measure(&u);
        let dm = delta_measure(&w, &mu).unwrap();
        assert_eq!(dm.entry(0, 0), &delta_pack(trop(1), nat(1)).unwrap());
        // infinite weight packs the aggregate away
        assert_eq!(
            dm.entry(1, 0),
            &SemiringValue::Delta(Box::new(crate::algebra::trop_inf()), Box::new(nat(0)))
        );
        assert!(delta_measure(&mu, &mu).is_err());
    }

    #[test]
    fn product_measure_pairs_entries() {
        let u = small_universe();
        let m = product_measure(&counting_measure(&u), &decision_measure(&u)).unwrap();
        assert_eq!(
            m.entry(0, 1),
            &SemiringValue::Pair(Box::new(nat(1)), Box::new(boolean(true)))
        );
        assert_eq!(
            zero(m.descriptor()),
            SemiringValue::Pair(
                Box::new(zero(&SemiringDescriptor::Natural)),
                Box::new(zero(&SemiringDescriptor::Boolean)),
            )
        );
    }

    #[test]
    fn count_min_cost_on_empty_set() {
        let u = small_universe();
        let mut store = ExprStore::new(u.clone());
        let empty = store.make_empty();
        let costs = unit_costs(&u, 1);
        let (min, count) = count_min_cost(&store, empty, &costs).unwrap();
        assert_eq!(min, Cost::Infinity);
        assert_eq!(count, BigUint::zero());
    }

    #[test]
    fn count_min_cost_infinite_fallback() {
        // both members cost inf: min is inf and the count falls back to the
        // total number of members
        let u = small_universe();
        let mut store = ExprStore::new(u.clone());
        let a0 = store.make_leaf("a", "0").unwrap();
        let a1 = store.make_leaf("a", "1").unwrap();
        let both = store.make_uplus(a0, a1).unwrap();
        let costs = cost_measure(&u, |_, _| Cost::Infinity);
        let (min, count) = count_min_cost(&store, both, &costs).unwrap();
        assert_eq!(min, Cost::Infinity);
        assert_eq!(count, BigUint::from(2u32));
    }

    #[test]
    fn sat_weight_families_match_definitions() {
        let u = Universe::new(vec!["x1", "x2", "x3"], vec!["F", "T"]).unwrap();
        let card = sat_weight_family(&u, 1, &SatWeights::MinCard).unwrap();
        for s in 0..3 {
            assert_eq!(card.cost_entry(s, 1).unwrap(), Cost::Finite(1));
            assert_eq!(card.cost_entry(s, 0).unwrap(), Cost::Finite(0));
        }

        let lex =
            sat_weight_family(&u, 1, &SatWeights::MinLex(vec!["x1".into(), "x2".into(), "x3".into()]))
                .unwrap();
        assert_eq!(lex.cost_entry(0, 1).unwrap(), Cost::Finite(4));
        assert_eq!(lex.cost_entry(1, 1).unwrap(), Cost::Finite(2));
        assert_eq!(lex.cost_entry(2, 1).unwrap(), Cost::Finite(1));

        let zero_w = sat_weight_family(&u, 1, &SatWeights::MinWeight(vec![0, 0, 0])).unwrap();
        assert_eq!(zero_w.cost_entry(2, 1).unwrap(), Cost::Finite(0));

        let too_long = SatWeights::MinLex((1..=63).map(|i| format!("x{i}")).collect());
        assert!(matches!(
            sat_weight_family(&u, 1, &too_long),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn matrix_file_roundtrip_and_errors() {
        let u = small_universe();
        let text = "semiring: delta(trop,nat)\n\
                    a 0 (0,1)\na 1 (1,1)\nb 0 (0,1)\nb 1 (inf,0)\n";
        let m = parse_matrix(&u, text).unwrap();
        assert_eq!(m.entry(0, 1), &delta_pack(trop(1), nat(1)).unwrap());

        let missing = "semiring: nat\na 0 1\n";
        assert!(parse_matrix(&u, missing).is_err());
        let dup = "semiring: nat\na 0 1\na 0 2\nb 0 1\nb 1 1\na 1 1\n";
        assert!(parse_matrix(&u, dup).is_err());
        let no_header = "a 0 1\n";
        assert!(parse_matrix(&u, no_header).is_err());
    }
}
