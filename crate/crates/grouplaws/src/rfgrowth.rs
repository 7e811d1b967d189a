//! Residual-finiteness oracle for F2: systematic enumeration of finite-index
//! subgroups and normal quotients, detection indices k(w), growth values
//! F(n), and the completeness certificate for constructed laws.
//!
//! Subgroups of index m correspond to transitive actions of F2 on m points
//! with a basepoint; numbering points by first appearance in a fixed scan
//! order makes that correspondence one-to-one, so backtracking over
//! canonically numbered coset tables enumerates each subgroup exactly once.
//! Normal subgroups are the tables whose action is regular, which the
//! search enforces early: every defined entry yields a word fixing the
//! basepoint, and such a word must fix every point, so partially defined
//! tables force entries or die long before completion.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::perm::Perm;
use crate::word::{letter_inverse, reduced_words_of_length, Word, X, X_INV, Y, Y_INV};

/// Full subgroup sweeps get expensive fast; this cap is generous.
pub const LOW_INDEX_BUDGET: u32 = 14;
/// Normal-only enumeration reaches further than the full sweep.
pub const NORMAL_ORDER_BUDGET: u32 = 24;
/// Word lengths enumerated by [`rf_growth`].
pub const WORD_LENGTH_BUDGET: u32 = 8;

#[derive(Debug, Error)]
pub enum RfError {
    #[error("requested bound {requested} exceeds the budget {budget}")]
    BudgetExceeded { requested: u32, budget: u32 },
    #[error("the empty word is detected by no quotient")]
    EmptyWord,
    #[error("F(0) is an empty maximum")]
    EmptyRange,
}

/// A complete coset table: the action of each generator letter on the
/// cosets of a finite-index subgroup, with coset 0 the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    entries: Vec<[u32; 4]>,
}

impl CosetTable {
    pub fn index(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn act(&self, point: u32, letter: u8) -> u32 {
        self.entries[point as usize][letter as usize]
    }

    /// Endpoint of `start` under the letters of `w`.
    pub fn trace(&self, start: u32, w: &Word) -> u32 {
        w.letters().iter().fold(start, |p, &l| self.act(p, l))
    }

    pub fn x_perm(&self) -> Perm {
        self.column(X)
    }

    pub fn y_perm(&self) -> Perm {
        self.column(Y)
    }

    fn column(&self, letter: u8) -> Perm {
        Perm::new((0..self.index()).map(|p| self.act(p, letter) as u8).collect())
    }

    /// Row-major x and y columns; canonical because the numbering is.
    pub fn key(&self) -> String {
        let col = |letter: u8| {
            (0..self.index())
                .map(|p| self.act(p, letter).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}|{}|{}", self.index(), col(X), col(Y))
    }
}

/// One normal subgroup of F2, represented by its regular quotient action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalQuotient {
    pub index: u32,
    pub gx: Perm,
    pub gy: Perm,
    pub key: String,
}

impl NormalQuotient {
    /// Whether the quotient detects `w`, i.e. maps it off the identity.
    /// Regularity makes the basepoint orbit decisive.
    pub fn detects(&self, w: &Word) -> bool {
        let inv_x = self.gx.inverse();
        let inv_y = self.gy.inverse();
        let mut p = 0usize;
        for &l in w.letters() {
            p = match l {
                X => self.gx.apply(p),
                X_INV => inv_x.apply(p),
                Y => self.gy.apply(p),
                Y_INV => inv_y.apply(p),
                _ => unreachable!(),
            };
        }
        p != 0
    }
}

struct Search {
    max_points: u32,
    regular_only: bool,
    entries: Vec<[Option<u32>; 4]>,
    intro: Vec<(u32, u8)>,
    out: Vec<CosetTable>,
}

impl Search {
    fn run(max_points: u32, regular_only: bool) -> Vec<CosetTable> {
        let mut search = Search {
            max_points,
            regular_only,
            entries: vec![[None; 4]],
            intro: vec![(0, 0)],
            out: Vec::new(),
        };
        search.step();
        search.out
    }

    fn points(&self) -> u32 {
        self.entries.len() as u32
    }

    /// Letters of the introduction path 0 -> p.
    fn word_to(&self, p: u32) -> Vec<u8> {
        let mut letters = Vec::new();
        let mut q = p;
        while q != 0 {
            let (parent, letter) = self.intro[q as usize];
            letters.push(letter);
            q = parent;
        }
        letters.reverse();
        letters
    }

    fn first_undefined(&self) -> Option<(u32, u8)> {
        for p in 0..self.points() {
            for letter in 0..4u8 {
                if self.entries[p as usize][letter as usize].is_none() {
                    return Some((p, letter));
                }
            }
        }
        None
    }

    fn assign(&mut self, p: u32, letter: u8, q: u32) -> bool {
        let slots = [(p, letter, q), (q, letter_inverse(letter), p)];
        for (a, l, b) in slots {
            match self.entries[a as usize][l as usize] {
                None => self.entries[a as usize][l as usize] = Some(b),
                Some(existing) if existing == b => {}
                Some(_) => return false,
            }
        }
        true
    }

    fn walk(&self, start: u32, letters: &[u8]) -> (u32, Option<usize>) {
        let mut p = start;
        for (i, &l) in letters.iter().enumerate() {
            match self.entries[p as usize][l as usize] {
                Some(q) => p = q,
                None => return (p, Some(i)),
            }
        }
        (p, None)
    }

    /// Regularity propagation: every defined entry (p, letter) gives a word
    /// fixing the basepoint, which must fix all points. A walk that closes
    /// wrongly kills the branch; a walk with a single gap forces it.
    fn propagate(&mut self) -> bool {
        if !self.regular_only {
            return true;
        }
        loop {
            let mut changed = false;
            for p in 0..self.points() {
                for letter in 0..4u8 {
                    let Some(q) = self.entries[p as usize][letter as usize] else {
                        continue;
                    };
                    let mut stab = self.word_to(p);
                    stab.push(letter);
                    let back = self.word_to(q);
                    stab.extend(back.iter().rev().map(|&l| letter_inverse(l)));
                    for r in 0..self.points() {
                        let (stuck_at, gap) = self.walk(r, &stab);
                        match gap {
                            None => {
                                if stuck_at != r {
                                    return false;
                                }
                            }
                            Some(i) => {
                                // Walk backwards from the required endpoint r
                                // to just past the gap.
                                let (target, back_gap) = self.walk(
                                    r,
                                    &stab[i + 1..]
                                        .iter()
                                        .rev()
                                        .map(|&l| letter_inverse(l))
                                        .collect::<Vec<_>>(),
                                );
                                if back_gap.is_some() {
                                    continue;
                                }
                                if !self.assign(stuck_at, stab[i], target) {
                                    return false;
                                }
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn step(&mut self) {
        let Some((p, letter)) = self.first_undefined() else {
            self.complete();
            return;
        };
        let inv = letter_inverse(letter);
        for q in 0..self.points() {
            if self.entries[q as usize][inv as usize].is_some() {
                continue;
            }
            let snapshot = (self.entries.clone(), self.intro.clone());
            if self.assign(p, letter, q) && self.propagate() {
                self.step();
            }
            self.entries = snapshot.0;
            self.intro = snapshot.1;
        }
        if self.points() < self.max_points {
            let snapshot = (self.entries.clone(), self.intro.clone());
            let q = self.points();
            self.entries.push([None; 4]);
            self.intro.push((p, letter));
            if self.assign(p, letter, q) && self.propagate() {
                self.step();
            }
            self.entries = snapshot.0;
            self.intro = snapshot.1;
        }
    }

    fn complete(&mut self) {
        let table = CosetTable {
            entries: self
                .entries
                .iter()
                .map(|row| [row[0].unwrap(), row[1].unwrap(), row[2].unwrap(), row[3].unwrap()])
                .collect(),
        };
        if self.regular_only && !is_regular(&table) {
            return;
        }
        self.out.push(table);
    }
}

/// The action is regular exactly when the generated permutation group has
/// order equal to the degree.
fn is_regular(table: &CosetTable) -> bool {
    let degree = table.index() as usize;
    let gens = [table.x_perm(), table.y_perm()];
    let mut seen = BTreeSet::new();
    let mut frontier = vec![Perm::identity(degree)];
    seen.insert(Perm::identity(degree));
    while let Some(current) = frontier.pop() {
        for g in &gens {
            let next = current.compose(g);
            if seen.insert(next.clone()) {
                if seen.len() > degree {
                    return false;
                }
                frontier.push(next);
            }
        }
    }
    seen.len() == degree
}

/// Every subgroup of F2 of index at most `max_index`, one canonical coset
/// table each, ordered by index then table key.
pub fn low_index_subgroups(max_index: u32) -> Result<Vec<CosetTable>, RfError> {
    if max_index > LOW_INDEX_BUDGET {
        return Err(RfError::BudgetExceeded { requested: max_index, budget: LOW_INDEX_BUDGET });
    }
    let mut tables = Search::run(max_index.max(1), false);
    tables.sort_by_key(|t| (t.index(), t.key()));
    Ok(tables)
}

/// Subgroup counts of F2 by index from the recursion
/// a_m = m * m! - sum over k < m of (m-k)! * a_k,
/// an arithmetic oracle independent of the table search.
pub fn hall_subgroup_counts(max_index: u32) -> Vec<u64> {
    let factorial = |k: u32| (1..=k as u64).product::<u64>();
    let mut counts: Vec<u64> = Vec::new();
    for m in 1..=max_index {
        let mut value = m as u64 * factorial(m);
        for (k, &a_k) in (1..m).zip(counts.iter()) {
            value -= factorial(m - k) * a_k;
        }
        counts.push(value);
    }
    counts
}

/// Every normal subgroup of F2 of index at most `max_order`, as regular
/// quotient actions, ordered by index then key.
pub fn normal_quotients(max_order: u32) -> Result<Vec<NormalQuotient>, RfError> {
    if max_order > NORMAL_ORDER_BUDGET {
        return Err(RfError::BudgetExceeded { requested: max_order, budget: NORMAL_ORDER_BUDGET });
    }
    let mut tables = Search::run(max_order.max(1), true);
    tables.sort_by_key(|t| (t.index(), t.key()));
    Ok(tables
        .into_iter()
        .map(|t| NormalQuotient {
            index: t.index(),
            gx: t.x_perm(),
            gy: t.y_perm(),
            key: t.key(),
        })
        .collect())
}

fn k_of_with(quotients: &[NormalQuotient], w: &Word) -> Option<u32> {
    quotients.iter().find(|q| q.detects(w)).map(|q| q.index)
}

/// The smallest order of a finite quotient of F2 separating `w` from the
/// identity, or `None` if no quotient of order <= `max_order` does.
pub fn k_of(w: &Word, max_order: u32) -> Result<Option<u32>, RfError> {
    if w.is_trivial() {
        return Err(RfError::EmptyWord);
    }
    Ok(k_of_with(&normal_quotients(max_order)?, w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfGrowthValue {
    Exact(u32),
    /// Some word of the ball resisted every quotient within the order
    /// budget, so the true value is at least this.
    AtLeast(u32),
}

/// F(n): the largest detection index over all non-trivial reduced words of
/// length <= n, deduplicated under the symmetries that preserve k.
pub fn rf_growth(n: u32, max_order: u32) -> Result<RfGrowthValue, RfError> {
    let quotients = normal_quotients(max_order)?;
    rf_growth_over(&quotients, n, max_order)
}

/// [`rf_growth`] against an already enumerated (or cached) quotient list.
pub fn rf_growth_over(
    quotients: &[NormalQuotient],
    n: u32,
    max_order: u32,
) -> Result<RfGrowthValue, RfError> {
    if n == 0 {
        return Err(RfError::EmptyRange);
    }
    if n > WORD_LENGTH_BUDGET {
        return Err(RfError::BudgetExceeded { requested: n, budget: WORD_LENGTH_BUDGET });
    }
    let mut best = 0u32;
    let mut unresolved = false;
    let mut seen = BTreeSet::new();
    for len in 1..=n as usize {
        for w in reduced_words_of_length(len) {
            if !seen.insert(canonical_class(&w)) {
                continue;
            }
            match k_of_with(&quotients, &w) {
                Some(k) => best = best.max(k),
                None => unresolved = true,
            }
        }
    }
    if unresolved {
        Ok(RfGrowthValue::AtLeast(best.max(max_order + 1)))
    } else {
        Ok(RfGrowthValue::Exact(best))
    }
}

/// Smallest letter sequence over the k-preserving symmetries: the signed
/// generator permutations and inversion.
fn canonical_class(w: &Word) -> Vec<u8> {
    let relabelings: [[u8; 4]; 8] = [
        [X, X_INV, Y, Y_INV],
        [X_INV, X, Y, Y_INV],
        [X, X_INV, Y_INV, Y],
        [X_INV, X, Y_INV, Y],
        [Y, Y_INV, X, X_INV],
        [Y_INV, Y, X, X_INV],
        [Y, Y_INV, X_INV, X],
        [Y_INV, Y, X_INV, X],
    ];
    let mut best: Option<Vec<u8>> = None;
    for map in relabelings {
        let image: Vec<u8> = w.letters().iter().map(|&l| map[l as usize]).collect();
        let reversed: Vec<u8> =
            image.iter().rev().map(|&l| letter_inverse(l)).collect();
        for candidate in [image, reversed] {
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.expect("non-empty candidate set")
}

/// Outcome of checking a law word against every quotient of order <= bound.
#[derive(Clone, Debug)]
pub struct CertifyOutcome {
    pub word_length: usize,
    pub bound: u32,
    pub quotients_checked: usize,
    pub witness: Option<NormalQuotient>,
}

impl CertifyOutcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// PASS proves `w` is a law for every group of order <= n: a 2-variable law
/// holds on G exactly when it holds on every 2-generated subgroup, and
/// every 2-generated group of order <= n is a quotient of F2 by a normal
/// subgroup of index <= n.
pub fn certify_law(w: &Word, n: u32) -> Result<CertifyOutcome, RfError> {
    if w.is_trivial() {
        return Err(RfError::EmptyWord);
    }
    let quotients = normal_quotients(n)?;
    let witness = quotients.iter().find(|q| q.detects(w)).cloned();
    Ok(CertifyOutcome {
        word_length: w.len(),
        bound: n,
        quotients_checked: quotients.len(),
        witness,
    })
}

/// One quotient per line: index, generator images in cycle notation, key.
pub fn quotients_to_text(quotients: &[NormalQuotient]) -> String {
    let mut out = String::new();
    for q in quotients {
        out.push_str(&format!("{} {} {} {}\n", q.index, q.gx, q.gy, q.key));
    }
    out
}

pub fn quotients_from_text(text: &str) -> Option<Vec<NormalQuotient>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let index: u32 = parts.next()?.parse().ok()?;
        let gx = Perm::parse_cycles(parts.next()?, index as usize).ok()?;
        let gy = Perm::parse_cycles(parts.next()?, index as usize).ok()?;
        let key = parts.next()?.to_string();
        out.push(NormalQuotient { index, gx, gy, key });
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_index_counts_match_the_recursion() {
        let oracle = hall_subgroup_counts(6);
        assert_eq!(oracle, [1, 3, 13, 71, 461, 3447]);
        let tables = low_index_subgroups(6).unwrap();
        let mut by_index = [0u64; 6];
        for t in &tables {
            by_index[(t.index() - 1) as usize] += 1;
        }
        assert_eq!(by_index.to_vec(), oracle);
    }

    #[test]
    fn tiny_indices_in_detail() {
        let tables = low_index_subgroups(1).unwrap();
        assert_eq!(tables.len(), 1);
        assert_eq!(tables[0].index(), 1);

        let tables = low_index_subgroups(2).unwrap();
        let at_two: Vec<_> = tables.iter().filter(|t| t.index() == 2).collect();
        assert_eq!(at_two.len(), 3);
        for t in at_two {
            assert!(is_regular(t), "index-2 subgroups are normal");
        }
    }

    #[test]
    fn normal_quotient_counts_by_order() {
        let quotients = normal_quotients(8).unwrap();
        let mut by_order = [0u64; 8];
        for q in &quotients {
            by_order[(q.index - 1) as usize] += 1;
        }
        // Orders 1-7 by direct epimorphism counts |Epi(F2,Q)|/|Aut(Q)|;
        // order 8 = 12 (Z8) + 3 (Z4xZ2) + 3 (D4) + 1 (Q8).
        assert_eq!(by_order.to_vec(), [1, 3, 4, 7, 6, 15, 8, 19]);

        for q in &quotients {
            let degree = q.index as usize;
            let mut seen = BTreeSet::new();
            let mut frontier = vec![Perm::identity(degree)];
            seen.insert(Perm::identity(degree));
            while let Some(cur) = frontier.pop() {
                for g in [&q.gx, &q.gy] {
                    let next = cur.compose(g);
                    if seen.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
            assert_eq!(seen.len(), degree, "regular action of {}", q.key);
        }

        let nonabelian_six = quotients
            .iter()
            .filter(|q| q.index == 6 && q.gx.compose(&q.gy) != q.gy.compose(&q.gx))
            .count();
        assert_eq!(nonabelian_six, 3, "the three surjections onto Sym(3)");
    }

    #[test]
    fn detection_indices() {
        assert_eq!(k_of(&"x".parse().unwrap(), 8).unwrap(), Some(2));
        assert_eq!(k_of(&"XYxy".parse().unwrap(), 8).unwrap(), Some(6));
        assert_eq!(k_of(&"x^2".parse().unwrap(), 8).unwrap(), Some(3));
        assert_eq!(k_of(&"x^2".parse().unwrap(), 2).unwrap(), None);
        assert!(k_of(&Word::identity(), 4).is_err());
    }

    #[test]
    fn growth_values() {
        assert_eq!(rf_growth(1, 4).unwrap(), RfGrowthValue::Exact(2));
        assert_eq!(rf_growth(2, 6).unwrap(), RfGrowthValue::Exact(3));
        assert_eq!(rf_growth(2, 2).unwrap(), RfGrowthValue::AtLeast(3));
        assert!(rf_growth(0, 4).is_err());
        assert!(rf_growth(9, 4).is_err());
        assert!(low_index_subgroups(15).is_err());
        assert!(normal_quotients(25).is_err());
    }

    #[test]
    fn k_is_invariant_under_word_symmetries() {
        let quotients = normal_quotients(8).unwrap();
        for len in 1..=5usize {
            for w in reduced_words_of_length(len) {
                let base = k_of_with(&quotients, &w);
                assert_eq!(k_of_with(&quotients, &w.inverse()), base, "{w}");
                let swapped = w.substitute(
                    &Word::generator(Y),
                    &Word::generator(X),
                );
                assert_eq!(k_of_with(&quotients, &swapped), base, "{w}");
                let conjugate = w.conjugate(&Word::generator(X));
                assert_eq!(k_of_with(&quotients, &conjugate), base, "{w}");
            }
        }
    }

    #[test]
    fn certification_examples() {
        let sixty: Word = Word::generator(X).power(60);
        assert!(certify_law(&sixty, 5).unwrap().passed());
        let commutator: Word = "XYxy".parse().unwrap();
        assert!(certify_law(&commutator, 5).unwrap().passed());
        let failing = certify_law(&commutator, 6).unwrap();
        assert!(!failing.passed());
        let witness = failing.witness.unwrap();
        assert_eq!(witness.index, 6);
        assert_ne!(witness.gx.compose(&witness.gy), witness.gy.compose(&witness.gx));
        let detected = certify_law(&"x".parse().unwrap(), 2).unwrap();
        assert_eq!(detected.witness.map(|w| w.index), Some(2));
    }

    #[test]
    fn quotient_text_round_trips() {
        let quotients = normal_quotients(6).unwrap();
        let text = quotients_to_text(&quotients);
        let back = quotients_from_text(&text).unwrap();
        assert_eq!(back, quotients);
    }
}
