//! Runtime-selectable commutative semirings and totally ordered idempotent
//! dioids, including the delta product.
//!
//! The available structures are the Boolean semiring `(2, ∨, ∧, F, T)`, the
//! natural semiring over arbitrary-precision integers, the tropical semiring
//! `(ℤ ∪ {inf}, min, +, inf, 0)` over exact 64-bit costs, the Cartesian
//! product of two semirings, and the delta product `D Δ A` of a dioid `D`
//! with a semiring `A`.
//!
//! A delta value is a pair `(d, a)` read as "the best cost is `d`, and `a`
//! aggregates the solutions attaining it". Addition keeps the better cost
//! and adds the `a`-components on ties; multiplication is coordinatewise.
//! Pairs whose cost is not *multiplicatively regular* (the product by `d` is
//! not injective, e.g. `d = inf`) cannot track their aggregate soundly, so
//! they are packed to `(d, 0)`. Only packed pairs are elements of `D Δ A`.
//!
//! Costs are exact integers rather than floats: tie detection in the delta
//! product must be exact, and counting must not round. Tropical
//! multiplication is overflow-checked; natural values are big integers.
//!
//! All values are immutable and all operations are pure, so values may be
//! shared freely across threads.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Shape of a runtime-selected semiring.
///
/// Descriptors are finite trees compared structurally. Text syntax:
/// `bool | nat | trop | delta(<dioid>,<semiring>) | prod(<semiring>,<semiring>)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemiringDescriptor {
    Boolean,
    Natural,
    Tropical,
    Delta(Box<SemiringDescriptor>, Box<SemiringDescriptor>),
    Product(Box<SemiringDescriptor>, Box<SemiringDescriptor>),
}

impl SemiringDescriptor {
    pub fn delta(d: SemiringDescriptor, a: SemiringDescriptor) -> Self {
        SemiringDescriptor::Delta(Box::new(d), Box::new(a))
    }

    pub fn product(l: SemiringDescriptor, r: SemiringDescriptor) -> Self {
        SemiringDescriptor::Product(Box::new(l), Box::new(r))
    }

    /// True for the totally ordered idempotent dioids of this crate:
    /// Boolean, tropical, and delta products of such.
    pub fn is_dioid(&self) -> bool {
        match self {
            SemiringDescriptor::Boolean | SemiringDescriptor::Tropical => true,
            SemiringDescriptor::Delta(d, a) => d.is_dioid() && a.is_dioid(),
            _ => false,
        }
    }

    /// Check the structural invariant: the first argument of every delta
    /// is a totally ordered idempotent dioid.
    pub fn validate(&self) -> Result<()> {
        match self {
            SemiringDescriptor::Boolean
            | SemiringDescriptor::Natural
            | SemiringDescriptor::Tropical => Ok(()),
            SemiringDescriptor::Delta(d, a) => {
                if !d.is_dioid() {
                    return Err(Error::usage(format!(
                        "delta's first argument must be a dioid, got {d}"
                    )));
                }
                d.validate()?;
                a.validate()
            }
            SemiringDescriptor::Product(l, r) => {
                l.validate()?;
                r.validate()
            }
        }
    }

    /// Parse the descriptor syntax, e.g. `delta(trop,nat)`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut chars = text.char_indices().peekable();
        let desc = parse_descriptor(text, &mut chars, 0)?;
        skip_ws(&mut chars);
        if let Some((i, _)) = chars.peek() {
            return Err(Error::parse(
                0,
                format!("trailing content in descriptor at byte {i}: {text:?}"),
            ));
        }
        desc.validate()?;
        Ok(desc)
    }
}

impl fmt::Display for SemiringDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringDescriptor::Boolean => write!(f, "bool"),
            SemiringDescriptor::Natural => write!(f, "nat"),
            SemiringDescriptor::Tropical => write!(f, "trop"),
            SemiringDescriptor::Delta(d, a) => write!(f, "delta({d},{a})"),
            SemiringDescriptor::Product(l, r) => write!(f, "prod({l},{r})"),
        }
    }
}

type Chars<'a> = std::iter::Peekable<std::str::CharIndices<'a>>;

/// Descriptor and pair-literal nesting cap; deeper trees are rejected at
/// parse time so recursive consumers cannot be driven off the stack.
const MAX_NESTING: usize = 64;

fn skip_ws(chars: &mut Chars) {
    while matches!(chars.peek(), Some((_, c)) if c.is_whitespace()) {
        chars.next();
    }
}

fn parse_descriptor(text: &str, chars: &mut Chars, depth: usize) -> Result<SemiringDescriptor> {
    if depth >= MAX_NESTING {
        return Err(Error::parse(
            0,
            format!("descriptor nested deeper than {MAX_NESTING}"),
        ));
    }
    skip_ws(chars);
    let mut word = String::new();
    while matches!(chars.peek(), Some((_, c)) if c.is_alphanumeric()) {
        word.push(chars.next().unwrap().1);
    }
    match word.as_str() {
        "bool" => Ok(SemiringDescriptor::Boolean),
        "nat" => Ok(SemiringDescriptor::Natural),
        "trop" => Ok(SemiringDescriptor::Tropical),
        "delta" | "prod" => {
            skip_ws(chars);
            match chars.next() {
                Some((_, '(')) => {}
                _ => return Err(Error::parse(0, format!("expected '(' after {word}"))),
            }
            let first = parse_descriptor(text, chars, depth + 1)?;
            skip_ws(chars);
            match chars.next() {
                Some((_, ',')) => {}
                _ => return Err(Error::parse(0, format!("expected ',' inside {word}(...)"))),
            }
            let second = parse_descriptor(text, chars, depth + 1)?;
            skip_ws(chars);
            match chars.next() {
                Some((_, ')')) => {}
                _ => return Err(Error::parse(0, format!("expected ')' closing {word}(...)"))),
            }
            Ok(if word == "delta" {
                SemiringDescriptor::delta(first, second)
            } else {
                SemiringDescriptor::product(first, second)
            })
        }
        other => Err(Error::parse(
            0,
            format!("unknown semiring {other:?} in descriptor {text:?}"),
        )),
    }
}

/// An exact extended cost: a 64-bit integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cost {
    Finite(i64),
    Infinity,
}

impl Cost {
    /// Tropical product, i.e. checked addition with absorbing infinity.
    pub fn checked_add(self, other: Cost) -> Result<Cost> {
        match (self, other) {
            (Cost::Infinity, _) | (_, Cost::Infinity) => Ok(Cost::Infinity),
            (Cost::Finite(a), Cost::Finite(b)) => a
                .checked_add(b)
                .map(Cost::Finite)
                .ok_or_else(|| Error::overflow(format!("{a} + {b} exceeds 64-bit cost range"))),
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Infinity, Cost::Infinity) => Ordering::Equal,
            (Cost::Infinity, _) => Ordering::Greater,
            (_, Cost::Infinity) => Ordering::Less,
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(c) => write!(f, "{c}"),
            Cost::Infinity => write!(f, "inf"),
        }
    }
}

/// A tagged value in one of the runtime-selectable semirings.
///
/// The payload shape determines the descriptor; `Delta` values additionally
/// maintain the packing rule (non-regular first component forces the second
/// to the inner zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemiringValue {
    Bool(bool),
    Nat(BigUint),
    Trop(Cost),
    Delta(Box<SemiringValue>, Box<SemiringValue>),
    Pair(Box<SemiringValue>, Box<SemiringValue>),
}

/// Outcome of comparing two dioid values under the algebraic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DioidOrdering {
    Lt,
    Eq,
    Gt,
}

impl From<Ordering> for DioidOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => DioidOrdering::Lt,
            Ordering::Equal => DioidOrdering::Eq,
            Ordering::Greater => DioidOrdering::Gt,
        }
    }
}

/// A checked comparison in a dioid, witnessing consistency of the order
/// with `min`: `lt` implies `add(left, right) == left`.
#[derive(Debug, Clone)]
pub struct DioidOrderWitness {
    pub left: SemiringValue,
    pub right: SemiringValue,
    pub relation: DioidOrdering,
}

pub fn trop(c: i64) -> SemiringValue {
    SemiringValue::Trop(Cost::Finite(c))
}

pub fn trop_inf() -> SemiringValue {
    SemiringValue::Trop(Cost::Infinity)
}

pub fn nat(n: u64) -> SemiringValue {
    SemiringValue::Nat(BigUint::from(n))
}

pub fn boolean(b: bool) -> SemiringValue {
    SemiringValue::Bool(b)
}

impl SemiringValue {
    /// The descriptor this value inhabits, derived from its shape.
    pub fn descriptor(&self) -> SemiringDescriptor {
        match self {
            SemiringValue::Bool(_) => SemiringDescriptor::Boolean,
            SemiringValue::Nat(_) => SemiringDescriptor::Natural,
            SemiringValue::Trop(_) => SemiringDescriptor::Tropical,
            SemiringValue::Delta(d, a) => {
                SemiringDescriptor::delta(d.descriptor(), a.descriptor())
            }
            SemiringValue::Pair(l, r) => {
                SemiringDescriptor::product(l.descriptor(), r.descriptor())
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == zero(&self.descriptor())
    }
}

fn check_same_descriptor(a: &SemiringValue, b: &SemiringValue) -> Result<()> {
    let (da, db) = (a.descriptor(), b.descriptor());
    if da != db {
        return Err(Error::usage(format!(
            "semiring mismatch: left value is in {da}, right value is in {db}"
        )));
    }
    // values assembled by hand can carry a non-dioid cost component
    da.validate()
}

/// Additive neutral element of the semiring.
pub fn zero(desc: &SemiringDescriptor) -> SemiringValue {
    match desc {
        SemiringDescriptor::Boolean => SemiringValue::Bool(false),
        SemiringDescriptor::Natural => SemiringValue::Nat(BigUint::zero()),
        SemiringDescriptor::Tropical => SemiringValue::Trop(Cost::Infinity),
        // (inf_D, 0_A); the dioid zero is never regular, so this is packed.
        SemiringDescriptor::Delta(d, a) => {
            SemiringValue::Delta(Box::new(zero(d)), Box::new(zero(a)))
        }
        SemiringDescriptor::Product(l, r) => {
            SemiringValue::Pair(Box::new(zero(l)), Box::new(zero(r)))
        }
    }
}

/// Multiplicative neutral element of the semiring.
pub fn one(desc: &SemiringDescriptor) -> SemiringValue {
    match desc {
        SemiringDescriptor::Boolean => SemiringValue::Bool(true),
        SemiringDescriptor::Natural => SemiringValue::Nat(BigUint::one()),
        SemiringDescriptor::Tropical => SemiringValue::Trop(Cost::Finite(0)),
        // (0_D, 1_A); the dioid one is regular in every dioid of this crate.
        SemiringDescriptor::Delta(d, a) => {
            SemiringValue::Delta(Box::new(one(d)), Box::new(one(a)))
        }
        SemiringDescriptor::Product(l, r) => {
            SemiringValue::Pair(Box::new(one(l)), Box::new(one(r)))
        }
    }
}

/// Semiring addition. For delta values this keeps the pair with the smaller
/// cost and adds the aggregates on a tie.
pub fn add(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue> {
    check_same_descriptor(a, b)?;
    add_unchecked(a, b)
}

fn add_unchecked(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue> {
    Ok(match (a, b) {
        (SemiringValue::Bool(x), SemiringValue::Bool(y)) => SemiringValue::Bool(*x || *y),
        (SemiringValue::Nat(x), SemiringValue::Nat(y)) => SemiringValue::Nat(x + y),
        (SemiringValue::Trop(x), SemiringValue::Trop(y)) => SemiringValue::Trop((*x).min(*y)),
        (SemiringValue::Delta(d1, a1), SemiringValue::Delta(d2, a2)) => {
            match dioid_compare_unchecked(d1, d2) {
                DioidOrdering::Lt => a.clone(),
                DioidOrdering::Gt => b.clone(),
                DioidOrdering::Eq => {
                    delta_pack((**d1).clone(), add_unchecked(a1, a2)?)?
                }
            }
        }
        (SemiringValue::Pair(l1, r1), SemiringValue::Pair(l2, r2)) => SemiringValue::Pair(
            Box::new(add_unchecked(l1, l2)?),
            Box::new(add_unchecked(r1, r2)?),
        ),
        _ => unreachable!("descriptors already checked"),
    })
}

/// Semiring multiplication. Delta multiplication is coordinatewise followed
/// by re-packing; tropical multiplication is overflow-checked addition.
pub fn mul(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue> {
    check_same_descriptor(a, b)?;
    mul_unchecked(a, b)
}

fn mul_unchecked(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue> {
    Ok(match (a, b) {
        (SemiringValue::Bool(x), SemiringValue::Bool(y)) => SemiringValue::Bool(*x && *y),
        (SemiringValue::Nat(x), SemiringValue::Nat(y)) => SemiringValue::Nat(x * y),
        (SemiringValue::Trop(x), SemiringValue::Trop(y)) => {
            SemiringValue::Trop(x.checked_add(*y)?)
        }
        (SemiringValue::Delta(d1, a1), SemiringValue::Delta(d2, a2)) => {
            delta_pack(mul_unchecked(d1, d2)?, mul_unchecked(a1, a2)?)?
        }
        (SemiringValue::Pair(l1, r1), SemiringValue::Pair(l2, r2)) => SemiringValue::Pair(
            Box::new(mul_unchecked(l1, l2)?),
            Box::new(mul_unchecked(r1, r2)?),
        ),
        _ => unreachable!("descriptors already checked"),
    })
}

/// Whether a dioid element is multiplicatively regular, by the closed-form
/// rules: a finite tropical cost, the Boolean true, or a delta pair whose
/// components are both regular.
pub fn is_regular(d: &SemiringValue) -> Result<bool> {
    if !d.descriptor().is_dioid() {
        return Err(Error::usage(format!(
            "regularity is defined on dioids, not {}",
            d.descriptor()
        )));
    }
    Ok(is_regular_unchecked(d))
}

fn is_regular_unchecked(d: &SemiringValue) -> bool {
    match d {
        SemiringValue::Bool(b) => *b,
        SemiringValue::Trop(c) => *c != Cost::Infinity,
        SemiringValue::Delta(d1, d2) => is_regular_unchecked(d1) && is_regular_unchecked(d2),
        _ => unreachable!("dioid shape checked by caller"),
    }
}

/// Form the delta element `d Δ a`: `(d, a)` when `d` is regular, otherwise
/// `(d, 0)`.
pub fn delta_pack(d: SemiringValue, a: SemiringValue) -> Result<SemiringValue> {
    if !d.descriptor().is_dioid() {
        return Err(Error::usage(format!(
            "delta cost component must be a dioid value, got {}",
            d.descriptor()
        )));
    }
    let packed = if is_regular_unchecked(&d) {
        a
    } else {
        zero(&a.descriptor())
    };
    Ok(SemiringValue::Delta(Box::new(d), Box::new(packed)))
}

/// Total order of a dioid. For the base dioids this is the natural
/// numeric/truth order (true before false, finite costs before infinity);
/// for delta dioids it is lexicographic on the components.
pub fn dioid_compare(a: &SemiringValue, b: &SemiringValue) -> Result<DioidOrdering> {
    check_same_descriptor(a, b)?;
    if !a.descriptor().is_dioid() {
        return Err(Error::usage(format!(
            "dioid order is not defined on {}",
            a.descriptor()
        )));
    }
    Ok(dioid_compare_unchecked(a, b))
}

fn dioid_compare_unchecked(a: &SemiringValue, b: &SemiringValue) -> DioidOrdering {
    match (a, b) {
        // true is the dioid one (cost 0), false the dioid zero (cost inf).
        (SemiringValue::Bool(x), SemiringValue::Bool(y)) => {
            (!*x).cmp(&!*y).into()
        }
        (SemiringValue::Trop(x), SemiringValue::Trop(y)) => x.cmp(y).into(),
        (SemiringValue::Delta(d1, a1), SemiringValue::Delta(d2, a2)) => {
            match dioid_compare_unchecked(d1, d2) {
                DioidOrdering::Eq => dioid_compare_unchecked(a1, a2),
                other => other,
            }
        }
        _ => unreachable!("dioid shape checked by caller"),
    }
}

/// Compare two dioid values and return the witness triple.
pub fn dioid_order_witness(a: &SemiringValue, b: &SemiringValue) -> Result<DioidOrderWitness> {
    Ok(DioidOrderWitness {
        left: a.clone(),
        right: b.clone(),
        relation: dioid_compare(a, b)?,
    })
}

impl fmt::Display for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringValue::Bool(true) => write!(f, "T"),
            SemiringValue::Bool(false) => write!(f, "F"),
            SemiringValue::Nat(n) => write!(f, "{n}"),
            SemiringValue::Trop(c) => write!(f, "{c}"),
            SemiringValue::Delta(l, r) | SemiringValue::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// Parse a value literal against a descriptor. Literals are `T`/`F`, decimal
/// integers, `inf`, and parenthesized pairs `(<lit>,<lit>)`. A delta literal
/// violating the packing rule is rejected rather than silently repacked.
pub fn parse_value(desc: &SemiringDescriptor, text: &str) -> Result<SemiringValue> {
    let mut chars = text.char_indices().peekable();
    let v = parse_value_inner(desc, text, &mut chars)?;
    skip_ws(&mut chars);
    if chars.peek().is_some() {
        return Err(Error::parse(0, format!("trailing content in value {text:?}")));
    }
    Ok(v)
}

fn parse_value_inner(
    desc: &SemiringDescriptor,
    text: &str,
    chars: &mut Chars,
) -> Result<SemiringValue> {
    skip_ws(chars);
    match desc {
        SemiringDescriptor::Boolean => match chars.next() {
            Some((_, 'T')) => Ok(SemiringValue::Bool(true)),
            Some((_, 'F')) => Ok(SemiringValue::Bool(false)),
            _ => Err(Error::parse(0, format!("expected T or F in {text:?}"))),
        },
        SemiringDescriptor::Natural => {
            let digits = take_number_token(chars);
            if digits.is_empty() || digits.starts_with('-') {
                return Err(Error::parse(
                    0,
                    format!("expected a non-negative integer in {text:?}"),
                ));
            }
            digits
                .parse::<BigUint>()
                .map(SemiringValue::Nat)
                .map_err(|e| Error::parse(0, format!("bad natural number {digits:?}: {e}")))
        }
        SemiringDescriptor::Tropical => {
            if matches!(chars.peek(), Some((_, 'i'))) {
                for expected in ['i', 'n', 'f'] {
                    match chars.next() {
                        Some((_, c)) if c == expected => {}
                        _ => return Err(Error::parse(0, format!("expected 'inf' in {text:?}"))),
                    }
                }
                return Ok(SemiringValue::Trop(Cost::Infinity));
            }
            let digits = take_number_token(chars);
            digits
                .parse::<i64>()
                .map(|c| SemiringValue::Trop(Cost::Finite(c)))
                .map_err(|e| Error::parse(0, format!("bad cost {digits:?}: {e}")))
        }
        SemiringDescriptor::Delta(d, a) => {
            let (first, second) = parse_pair(text, chars, d, a)?;
            if !is_regular_unchecked(&first) && second != zero(a) {
                return Err(Error::usage(format!(
                    "({first},{second}) is not an element of {desc}: \
                     the cost is not regular and the aggregate is non-zero"
                )));
            }
            Ok(SemiringValue::Delta(Box::new(first), Box::new(second)))
        }
        SemiringDescriptor::Product(l, r) => {
            let (first, second) = parse_pair(text, chars, l, r)?;
            Ok(SemiringValue::Pair(Box::new(first), Box::new(second)))
        }
    }
}

fn parse_pair(
    text: &str,
    chars: &mut Chars,
    left: &SemiringDescriptor,
    right: &SemiringDescriptor,
) -> Result<(SemiringValue, SemiringValue)> {
    match chars.next() {
        Some((_, '(')) => {}
        _ => return Err(Error::parse(0, format!("expected '(' in pair value {text:?}"))),
    }
    let first = parse_value_inner(left, text, chars)?;
    skip_ws(chars);
    match chars.next() {
        Some((_, ',')) => {}
        _ => return Err(Error::parse(0, format!("expected ',' in pair value {text:?}"))),
    }
    let second = parse_value_inner(right, text, chars)?;
    skip_ws(chars);
    match chars.next() {
        Some((_, ')')) => {}
        _ => return Err(Error::parse(0, format!("expected ')' in pair value {text:?}"))),
    }
    Ok((first, second))
}

fn take_number_token(chars: &mut Chars) -> String {
    let mut out = String::new();
    if matches!(chars.peek(), Some((_, '-'))) {
        out.push(chars.next().unwrap().1);
    }
    while matches!(chars.peek(), Some((_, c)) if c.is_ascii_digit()) {
        out.push(chars.next().unwrap().1);
    }
    out
}

/// Draw a uniform-ish element of the semiring, used by the law tests and
/// fixture generators. Costs stay small so products of a few factors cannot
/// overflow.
pub fn sample_value<R: rand::Rng>(desc: &SemiringDescriptor, rng: &mut R) -> SemiringValue {
    match desc {
        SemiringDescriptor::Boolean => SemiringValue::Bool(rng.gen()),
        SemiringDescriptor::Natural => SemiringValue::Nat(BigUint::from(rng.gen_range(0u64..50))),
        SemiringDescriptor::Tropical => {
            if rng.gen_ratio(1, 8) {
                trop_inf()
            } else {
                trop(rng.gen_range(-100..=100))
            }
        }
        SemiringDescriptor::Delta(d, a) => {
            let dv = sample_value(d, rng);
            let av = sample_value(a, rng);
            delta_pack(dv, av).expect("first component sampled from a dioid")
        }
        SemiringDescriptor::Product(l, r) => SemiringValue::Pair(
            Box::new(sample_value(l, rng)),
            Box::new(sample_value(r, rng)),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn deltanat() -> SemiringDescriptor {
        SemiringDescriptor::delta(SemiringDescriptor::Tropical, SemiringDescriptor::Natural)
    }

    fn dn(c: i64, n: u64) -> SemiringValue {
        delta_pack(trop(c), nat(n)).unwrap()
    }

    #[test]
    fn tropical_add_is_min() {
        assert_eq!(add(&trop(3), &trop(5)).unwrap(), trop(3));
        assert_eq!(add(&trop(3), &trop_inf()).unwrap(), trop(3));
    }

    #[test]
    fn deltanat_addition_cases() {
        // tie on the cost: aggregates add up
        assert_eq!(add(&dn(3, 2), &dn(3, 9)).unwrap(), dn(3, 11));
        // the delta zero is neutral
        let z = zero(&deltanat());
        assert_eq!(add(&dn(3, 2), &z).unwrap(), dn(3, 2));
        // strictly better cost wins
        assert_eq!(add(&dn(3, 2), &dn(5, 100)).unwrap(), dn(3, 2));
    }

    #[test]
    fn deltanat_multiplication() {
        assert_eq!(mul(&dn(3, 2), &dn(5, 9)).unwrap(), dn(8, 18));
        let z = zero(&deltanat());
        assert_eq!(mul(&z, &dn(5, 9)).unwrap(), z);
    }

    #[test]
    fn natural_product() {
        assert_eq!(mul(&nat(6), &nat(7)).unwrap(), nat(42));
    }

    #[test]
    fn neutral_elements() {
        assert_eq!(zero(&SemiringDescriptor::Tropical), trop_inf());
        assert_eq!(zero(&SemiringDescriptor::Boolean), boolean(false));
        assert_eq!(one(&deltanat()), dn(0, 1));
        assert_eq!(
            zero(&deltanat()),
            SemiringValue::Delta(Box::new(trop_inf()), Box::new(nat(0)))
        );
    }

    #[test]
    fn regularity_closed_forms() {
        assert!(is_regular(&trop(7)).unwrap());
        assert!(!is_regular(&trop_inf()).unwrap());
        assert!(!is_regular(&boolean(false)).unwrap());
        let tt = delta_pack(boolean(true), boolean(true)).unwrap();
        assert!(is_regular(&tt).unwrap());
        assert!(is_regular(&nat(3)).is_err());
    }

    #[test]
    fn packing_rule() {
        assert_eq!(
            delta_pack(trop(3), nat(5)).unwrap(),
            SemiringValue::Delta(Box::new(trop(3)), Box::new(nat(5)))
        );
        assert_eq!(
            delta_pack(trop_inf(), nat(5)).unwrap(),
            SemiringValue::Delta(Box::new(trop_inf()), Box::new(nat(0)))
        );
        // (F, T) is not an element of delta(bool,bool); it packs to (F, F)
        assert_eq!(
            delta_pack(boolean(false), boolean(true)).unwrap(),
            SemiringValue::Delta(Box::new(boolean(false)), Box::new(boolean(false)))
        );
    }

    #[test]
    fn dioid_order() {
        assert_eq!(dioid_compare(&trop(3), &trop_inf()).unwrap(), DioidOrdering::Lt);
        assert_eq!(
            dioid_compare(&boolean(true), &boolean(false)).unwrap(),
            DioidOrdering::Lt
        );
        let a = delta_pack(trop(3), trop(9)).unwrap();
        let b = delta_pack(trop(3), trop(4)).unwrap();
        assert_eq!(dioid_compare(&a, &b).unwrap(), DioidOrdering::Gt);
    }

    #[test]
    fn order_consistent_with_min() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let desc = SemiringDescriptor::delta(
            SemiringDescriptor::Tropical,
            SemiringDescriptor::Tropical,
        );
        for _ in 0..500 {
            let a = sample_value(&desc, &mut rng);
            let b = sample_value(&desc, &mut rng);
            let w = dioid_order_witness(&a, &b).unwrap();
            let m = add(&a, &b).unwrap();
            match w.relation {
                DioidOrdering::Lt => assert_eq!(m, a),
                DioidOrdering::Gt => assert_eq!(m, b),
                DioidOrdering::Eq => assert_eq!(a, b),
            }
        }
    }

    #[test]
    fn descriptor_roundtrip_and_validation() {
        for text in ["bool", "nat", "trop", "delta(trop,nat)", "prod(delta(bool,bool),nat)"] {
            let d = SemiringDescriptor::parse(text).unwrap();
            assert_eq!(d.to_string(), text);
        }
        // natural numbers are not an idempotent dioid
        assert!(SemiringDescriptor::parse("delta(nat,trop)").is_err());
        assert!(SemiringDescriptor::parse("delta(prod(bool,bool),nat)").is_err());
        assert!(SemiringDescriptor::parse("semiring").is_err());
    }

    #[test]
    fn value_literals() {
        let dn_desc = deltanat();
        assert_eq!(parse_value(&dn_desc, "(3,5)").unwrap(), dn(3, 5));
        assert_eq!(parse_value(&dn_desc, "(inf,0)").unwrap(), zero(&dn_desc));
        assert_eq!(parse_value(&SemiringDescriptor::Tropical, "-12").unwrap(), trop(-12));
        // literal breaking the packing rule is rejected, not repacked
        assert!(parse_value(&dn_desc, "(inf,5)").is_err());
        for v in [dn(3, 5), trop_inf(), nat(123), boolean(true)] {
            assert_eq!(parse_value(&v.descriptor(), &v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn mismatched_descriptors_error() {
        assert!(add(&nat(1), &trop(1)).is_err());
        assert!(mul(&boolean(true), &nat(1)).is_err());
        // a hand-assembled delta with a non-dioid cost component is refused
        let bogus = SemiringValue::Delta(Box::new(nat(1)), Box::new(nat(2)));
        assert!(add(&bogus, &bogus).is_err());
        assert!(mul(&bogus, &bogus).is_err());
    }

    #[test]
    fn tropical_overflow_is_detected() {
        assert!(mul(&trop(i64::MAX), &trop(1)).is_err());
        assert_eq!(mul(&trop(i64::MAX), &trop_inf()).unwrap(), trop_inf());
    }

    proptest! {
        #[test]
        fn delta_ops_preserve_packing(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let desc = deltanat();
            let x = sample_value(&desc, &mut rng);
            let y = sample_value(&desc, &mut rng);
            for v in [add(&x, &y).unwrap(), mul(&x, &y).unwrap()] {
                if let SemiringValue::Delta(d, a) = &v {
                    prop_assert!(is_regular_unchecked(d) || **a == zero(&a.descriptor()));
                } else {
                    prop_assert!(false, "delta op returned a non-delta value");
                }
            }
        }

        #[test]
        fn product_is_monotone_in_the_dioid_order(seed in any::<u64>()) {
            // a <= b and c <= d imply a+c <= b+d in the tropical dioid,
            // strictly when a < b and c or d is regular
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let desc = SemiringDescriptor::Tropical;
            let sort = |x: SemiringValue, y: SemiringValue| {
                match dioid_compare(&x, &y).unwrap() {
                    DioidOrdering::Gt => (y, x),
                    _ => (x, y),
                }
            };
            let (a, b) = sort(sample_value(&desc, &mut rng), sample_value(&desc, &mut rng));
            let (c, d) = sort(sample_value(&desc, &mut rng), sample_value(&desc, &mut rng));
            let left = mul(&a, &c).unwrap();
            let right = mul(&b, &d).unwrap();
            let relation = dioid_compare(&left, &right).unwrap();
            prop_assert_ne!(relation, DioidOrdering::Gt);
            if dioid_compare(&a, &b).unwrap() == DioidOrdering::Lt
                && (is_regular(&c).unwrap() || is_regular(&d).unwrap())
            {
                prop_assert_eq!(relation, DioidOrdering::Lt);
            }
        }

        #[test]
        fn regularity_respects_products(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let desc = SemiringDescriptor::delta(
                SemiringDescriptor::Boolean,
                SemiringDescriptor::Tropical,
            );
            let a = sample_value(&desc, &mut rng);
            let b = sample_value(&desc, &mut rng);
            let prod = mul(&a, &b).unwrap();
            prop_assert_eq!(
                is_regular(&prod).unwrap(),
                is_regular(&a).unwrap() && is_regular(&b).unwrap()
            );
        }
    }
}
