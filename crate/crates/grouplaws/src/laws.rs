//! Law combinators on F2: power laws, vanishing-set unions, extension
//! composition, the solvable-series recursion and per-family element-order
//! laws.
//!
//! Every combinator returns a [`LawTrace`]: the reduced word together with
//! the construction tree that produced it. The tree matters beyond
//! provenance: a union node records its conjugator pair, so a trace can be
//! evaluated at a pair of group elements in time proportional to the tree
//! size instead of the materialized word length, and a vanishing leaf forces
//! the root to vanish, which verification exploits as a short circuit.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::field::factor_prime_power;
use crate::group::{Element, Group, GroupError, GroupSpec, ENUMERATION_CEILING};
use crate::word::{Word, X, X_INV, Y, Y_INV};

#[derive(Debug, Error)]
pub enum LawError {
    #[error("law combinators need non-trivial input words")]
    TrivialInput,
    #[error("union of zero words is not defined")]
    EmptyUnion,
    #[error("power law needs an exponent >= 1")]
    ZeroExponent,
    #[error("order-divisor law needs a non-empty set of orders >= 1")]
    EmptyOrders,
    #[error("combinator output of length {len} exceeds the bound {bound}")]
    BoundExceeded { len: usize, bound: usize },
    #[error("no candidate produced a non-trivial combination")]
    CandidatesExhausted,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// What a trace node is and which parameters rebuilt its word.
#[derive(Clone, Debug)]
pub enum LawKind {
    /// A word supplied from outside, not built by a combinator.
    Atom,
    /// x^exponent.
    AtomPower { exponent: u64 },
    /// [left^c1, right^c2] over the two children.
    Union { c1: Word, c2: Word },
    /// Children are the kernel law and the quotient law, in that order.
    Extension,
    Solvable { depth: u32 },
    Metabelian,
    /// child.word with x -> u, y -> v substituted.
    Substitution { u: Word, v: Word },
}

/// A law word together with the construction tree that produced it.
#[derive(Clone, Debug)]
pub struct LawTrace {
    pub kind: LawKind,
    pub children: Vec<LawTrace>,
    pub word: Word,
    pub scope: String,
}

impl LawTrace {
    /// Wraps a caller-supplied word as a leaf.
    pub fn atom(word: Word, scope: &str) -> Result<LawTrace, LawError> {
        if word.is_trivial() {
            return Err(LawError::TrivialInput);
        }
        Ok(LawTrace { kind: LawKind::Atom, children: Vec::new(), word, scope: scope.to_string() })
    }

    /// Evaluates the trace at (g, h), equal to evaluating the materialized
    /// word but in time proportional to the tree plus its short leaf words.
    pub fn evaluate(&self, group: &Group, g: &Element, h: &Element) -> Element {
        match &self.kind {
            LawKind::AtomPower { exponent } => group.power(g, *exponent),
            LawKind::Atom
            | LawKind::Extension
            | LawKind::Solvable { .. }
            | LawKind::Metabelian => group.evaluate(&self.word, g, h),
            LawKind::Substitution { u, v } => {
                let gu = group.evaluate(u, g, h);
                let hv = group.evaluate(v, g, h);
                self.children[0].evaluate(group, &gu, &hv)
            }
            LawKind::Union { c1, c2 } => {
                let a = self.children[0].evaluate(group, g, h);
                let b = self.children[1].evaluate(group, g, h);
                let c1v = group.evaluate(c1, g, h);
                let c2v = group.evaluate(c2, g, h);
                let ac = group.mul(&group.mul(&group.inverse(&c1v), &a), &c1v);
                let bc = group.mul(&group.mul(&group.inverse(&c2v), &b), &c2v);
                let lhs = group.mul(&group.inverse(&ac), &group.inverse(&bc));
                group.mul(&group.mul(&lhs, &ac), &bc)
            }
        }
    }

    /// Subtrees reachable from the root through union nodes only. If any of
    /// them evaluates to the identity at a pair, so does the root, because a
    /// commutator with an identity entry is the identity.
    pub fn scan_leaves(&self) -> Vec<&LawTrace> {
        let mut out = Vec::new();
        self.collect_scan_leaves(&mut out);
        out
    }

    fn collect_scan_leaves<'a>(&'a self, out: &mut Vec<&'a LawTrace>) {
        match &self.kind {
            LawKind::Union { .. } => {
                for child in &self.children {
                    child.collect_scan_leaves(out);
                }
            }
            _ => out.push(self),
        }
    }

    /// Rough per-pair evaluation cost of this node, in group operations.
    pub fn evaluation_cost(&self) -> usize {
        match &self.kind {
            LawKind::AtomPower { exponent } => 2 * (64 - exponent.leading_zeros()) as usize,
            LawKind::Substitution { u, v } => u.len() + v.len() + self.children[0].word.len(),
            LawKind::Union { c1, c2 } => {
                c1.len()
                    + c2.len()
                    + 8
                    + self.children.iter().map(LawTrace::evaluation_cost).sum::<usize>()
            }
            _ => self.word.len(),
        }
    }
}

/// x^e, a law for every group whose exponent divides e.
pub fn power_law(e: u64) -> Result<LawTrace, LawError> {
    if e == 0 {
        return Err(LawError::ZeroExponent);
    }
    Ok(LawTrace {
        kind: LawKind::AtomPower { exponent: e },
        children: Vec::new(),
        word: Word::generator(X).power(e),
        scope: format!("groups of exponent dividing {e}"),
    })
}

/// Combines laws so the vanishing set of the result contains the union of
/// the inputs' vanishing sets. Length is bounded by 16 m^2 max |w_i|.
pub fn union_law(ws: &[Word]) -> Result<LawTrace, LawError> {
    let leaves = ws
        .iter()
        .map(|w| LawTrace::atom(w.clone(), "input word"))
        .collect::<Result<Vec<_>, _>>()?;
    union_of_traces(leaves)
}

/// Union over already-traced laws; the result adopts them as subtrees.
pub fn union_of_traces(children: Vec<LawTrace>) -> Result<LawTrace, LawError> {
    if children.is_empty() {
        return Err(LawError::EmptyUnion);
    }
    if children.iter().any(|c| c.word.is_trivial()) {
        return Err(LawError::TrivialInput);
    }
    let m = children.len();
    let max_len = children.iter().map(|c| c.word.len()).max().unwrap_or(0);
    let bound = 16 * m * m * max_len;

    let mut level = children;
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut nodes = level.into_iter();
        while let Some(left) = nodes.next() {
            match nodes.next() {
                Some(right) => next.push(combine_pair(left, right)?),
                None => next.push(left),
            }
        }
        level = next;
    }
    let root = level.pop().expect("non-empty union");
    if m > 1 && root.word.len() > bound {
        return Err(LawError::BoundExceeded { len: root.word.len(), bound });
    }
    Ok(root)
}

/// [left^c1, right^c2] for the first conjugator pair that keeps the result
/// non-trivial. Two non-trivial words always have non-commuting conjugates,
/// so the scan terminates.
fn combine_pair(left: LawTrace, right: LawTrace) -> Result<LawTrace, LawError> {
    let candidates = conjugator_candidates();
    for total in 0..2 * candidates.len() {
        for i in 0..=total.min(candidates.len() - 1) {
            let j = total - i;
            if j >= candidates.len() {
                continue;
            }
            let c1 = &candidates[i];
            let c2 = &candidates[j];
            let word = left.word.conjugate(c1).commutator(&right.word.conjugate(c2));
            if !word.is_trivial() {
                return Ok(LawTrace {
                    kind: LawKind::Union { c1: c1.clone(), c2: c2.clone() },
                    children: vec![left, right],
                    word,
                    scope: "union of the children's vanishing sets".to_string(),
                });
            }
        }
    }
    Err(LawError::CandidatesExhausted)
}

/// Conjugator candidates: the empty word, then reduced words by length in
/// the order x, y, x^-1, y^-1, skipping proper powers.
fn conjugator_candidates() -> &'static [Word] {
    static LIST: OnceLock<Vec<Word>> = OnceLock::new();
    LIST.get_or_init(|| {
        let rank = |l: u8| match l {
            X => 0,
            Y => 1,
            X_INV => 2,
            Y_INV => 3,
            _ => unreachable!(),
        };
        let mut out = vec![Word::identity()];
        for len in 1..=3 {
            let mut words = crate::word::reduced_words_of_length(len);
            words.sort_by_key(|w| w.letters().iter().map(|&l| rank(l)).collect::<Vec<_>>());
            out.extend(words.into_iter().filter(|w| w.maximal_root().1 == 1));
        }
        out
    })
}

/// Composes a kernel law and a quotient law into a law for every extension
/// of a group satisfying the former by a group satisfying the latter.
/// Length is bounded by the product of the input lengths.
pub fn extension_law(kernel: LawTrace, quotient: LawTrace) -> Result<LawTrace, LawError> {
    if kernel.word.is_trivial() || quotient.word.is_trivial() {
        return Err(LawError::TrivialInput);
    }
    let bound = kernel.word.len() * quotient.word.len();
    let first = quotient.word.clone();
    for (u, v) in extension_second_pairs() {
        let second = quotient.word.substitute(u, v);
        let word = kernel.word.substitute(&first, &second);
        if !word.is_trivial() && word.len() <= bound {
            let scope = format!("extensions of ({}) by ({})", kernel.scope, quotient.scope);
            return Ok(LawTrace {
                kind: LawKind::Extension,
                children: vec![kernel, quotient],
                word,
                scope,
            });
        }
    }
    Err(LawError::CandidatesExhausted)
}

/// Second substitution pairs for [`extension_law`]: both images must land in
/// the kernel whenever the quotient law holds, which any pair of words does;
/// the list orders the cheap letter permutations first.
fn extension_second_pairs() -> &'static [(Word, Word)] {
    static LIST: OnceLock<Vec<(Word, Word)>> = OnceLock::new();
    LIST.get_or_init(|| {
        [
            ("y", "x"),
            ("X", "y"),
            ("xy", "y"),
            ("x", "Y"),
            ("Y", "x"),
            ("y", "X"),
            ("X", "Y"),
            ("Y", "X"),
            ("y", "yx"),
            ("xY", "x"),
        ]
        .iter()
        .map(|(a, b)| (a.parse().unwrap(), b.parse().unwrap()))
        .collect()
    })
}

/// The double commutator [[x,y],[y,x^-1]]: a length-14 law for every
/// metabelian group.
pub fn metabelian_law() -> LawTrace {
    let x = Word::generator(X);
    let y = Word::generator(Y);
    let word = x.commutator(&y).commutator(&y.commutator(&x.inverse()));
    assert_eq!(word.len(), 14);
    LawTrace {
        kind: LawKind::Metabelian,
        children: Vec::new(),
        word,
        scope: "metabelian groups".to_string(),
    }
}

/// A law for every solvable group of derived length <= d, of length at most
/// 4 * 6^(d-1), built by the recursion s_1 = [x,y],
/// s_{k+1} = [s_k(x,y), s_k(y,x^-1)].
///
/// Each level lies one step deeper in the derived series of F2. Should a
/// level ever reduce to the empty word, the recursion falls back to
/// [s_k, s_k^c] for the first conjugator keeping it non-trivial, which stays
/// inside the next derived subgroup at the cost of a slightly longer word.
pub fn solvable_law(d: u32) -> Result<LawTrace, LawError> {
    if d == 0 {
        return Err(LawError::ZeroExponent);
    }
    let x = Word::generator(X);
    let y = Word::generator(Y);
    let mut word = x.commutator(&y);
    for _ in 1..d {
        let swapped = word.substitute(&y, &x.inverse());
        let mut next = word.commutator(&swapped);
        if next.is_trivial() {
            next = fallback_deeper(&word)?;
        }
        word = next;
    }
    let bound = 4 * 6usize.pow(d - 1);
    if word.len() > bound {
        return Err(LawError::BoundExceeded { len: word.len(), bound });
    }
    Ok(LawTrace {
        kind: LawKind::Solvable { depth: d },
        children: Vec::new(),
        word,
        scope: format!("solvable groups of derived length <= {d}"),
    })
}

fn fallback_deeper(word: &Word) -> Result<Word, LawError> {
    for c in conjugator_candidates().iter().skip(1) {
        let next = word.commutator(&word.conjugate(c));
        if !next.is_trivial() {
            return Ok(next);
        }
    }
    Err(LawError::CandidatesExhausted)
}

/// Substitutes (u, v) into a law: the result vanishes wherever the images of
/// u and v satisfy the child law.
pub fn substitution_law(child: LawTrace, u: Word, v: Word) -> Result<LawTrace, LawError> {
    let word = child.word.substitute(&u, &v);
    if word.is_trivial() {
        return Err(LawError::TrivialInput);
    }
    let scope = format!("pairs whose ({u}, {v})-images satisfy: {}", child.scope);
    Ok(LawTrace {
        kind: LawKind::Substitution { u, v },
        children: vec![child],
        word,
        scope,
    })
}

/// Union of the power laws x^o over the given orders: vanishes whenever the
/// first entry's order divides one of them.
pub fn order_divisor_law(orders: &BTreeSet<u64>) -> Result<LawTrace, LawError> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(LawError::EmptyOrders);
    }
    let leaves = orders.iter().map(|&o| power_law(o)).collect::<Result<Vec<_>, _>>()?;
    let mut trace = union_of_traces(leaves)?;
    trace.scope = format!("first entry of order dividing one of {orders:?}");
    Ok(trace)
}

/// A law for PSL(2, q) from its three element-order classes: p for the
/// unipotents, (q-1)/gcd(2,q-1) for the split torus, (q+1)/gcd(2,q-1) for
/// the non-split torus.
pub fn psl2_order_law(q: u64) -> Result<LawTrace, LawError> {
    let (p, _) = factor_prime_power(q).ok_or(LawError::NotPrimePower(q))?;
    let half = if q % 2 == 0 { 1 } else { 2 };
    let orders: BTreeSet<u64> = [p as u64, (q - 1) / half, (q + 1) / half]
        .into_iter()
        .filter(|&o| o >= 1)
        .collect();
    let mut trace = order_divisor_law(&orders)?;
    trace.scope = format!("PSL(2, {q}) by element orders {orders:?}");
    Ok(trace)
}

/// A law for PSL(3, q) or PSU(3, q) by element orders: the exact order set
/// when the group fits under the enumeration ceiling, otherwise the five
/// torus-derived divisors q^2-q, q^2+q, q^2-1, q^2+q+1, q^2-q+1, plus p^2
/// in characteristic 2 where the unipotent order is 4 rather than p.
pub fn psl3_psu3_order_law(q: u64, unitary: bool) -> Result<LawTrace, LawError> {
    let (p, _) = factor_prime_power(q).ok_or(LawError::NotPrimePower(q))?;
    let spec = if unitary { GroupSpec::Psu3(q as u32) } else { GroupSpec::Psl3(q as u32) };
    let group = Group::new(&spec)?;
    let orders: BTreeSet<u64> = if group.order()? <= ENUMERATION_CEILING {
        group.order_set()?
    } else {
        let mut divisors: BTreeSet<u64> =
            [q * q - q, q * q + q, q * q - 1, q * q + q + 1, q * q - q + 1]
                .into_iter()
                .collect();
        if p == 2 {
            divisors.insert(4);
        }
        divisors
    };
    let mut trace = order_divisor_law(&orders)?;
    trace.scope = format!("{spec} by element orders");
    Ok(trace)
}
