//! Freely reduced words in the free group on two generators.
//!
//! Letters are encoded as bytes: `x`, `x^-1`, `y`, `y^-1` are 0..4 and a
//! letter's inverse is `letter ^ 1`. A [`Word`] always holds a freely reduced
//! letter sequence, so structural equality is equality in the free group.
//!
//! The text form writes inverses as capitals and repeated letters with a
//! caret: `x^2Y` is x·x·y^-1. The empty word prints as `1`.

use crate::rng::Stream;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const X: u8 = 0;
pub const X_INV: u8 = 1;
pub const Y: u8 = 2;
pub const Y_INV: u8 = 3;

const LETTER_CHARS: [char; 4] = ['x', 'X', 'y', 'Y'];

#[inline]
pub fn letter_inverse(letter: u8) -> u8 {
    letter ^ 1
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("unexpected character {found:?} at byte {at}")]
    UnexpectedChar { found: char, at: usize },
    #[error("exponent at byte {at} must be a positive integer")]
    BadExponent { at: usize },
    #[error("exponent without a preceding letter at byte {at}")]
    DanglingExponent { at: usize },
}

/// A freely reduced word over {x, x^-1, y, y^-1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    /// The empty word.
    pub fn identity() -> Word {
        Word { letters: Vec::new() }
    }

    /// A single-letter word.
    pub fn generator(letter: u8) -> Word {
        assert!(letter < 4, "letter out of range: {letter}");
        Word { letters: vec![letter] }
    }

    /// Builds a word from raw letters, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = u8>>(letters: I) -> Word {
        let mut reduced: Vec<u8> = Vec::new();
        for letter in letters {
            assert!(letter < 4, "letter out of range: {letter}");
            push_reduced(&mut reduced, letter);
        }
        Word { letters: reduced }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Product `self * other`, reduced.
    pub fn concat(&self, other: &Word) -> Word {
        let mut reduced = self.letters.clone();
        for &letter in &other.letters {
            push_reduced(&mut reduced, letter);
        }
        Word { letters: reduced }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| letter_inverse(l)).collect(),
        }
    }

    /// `self^k` for `k >= 0`.
    ///
    /// Works on the cyclically reduced core so repeated copies concatenate
    /// without internal cancellation.
    pub fn power(&self, k: u64) -> Word {
        if k == 0 || self.is_trivial() {
            return Word::identity();
        }
        if k == 1 {
            return self.clone();
        }
        let (conj, core) = self.cyclic_decomposition();
        let mut letters = Vec::with_capacity(2 * conj.len() + core.len() * k as usize);
        letters.extend(conj.inverse().letters.iter());
        for _ in 0..k {
            letters.extend(core.letters.iter());
        }
        letters.extend(conj.letters.iter());
        // Only the two conjugator seams can cancel; run the generic reducer.
        Word::from_letters(letters)
    }

    /// `c^-1 * self * c`, reduced.
    pub fn conjugate(&self, c: &Word) -> Word {
        c.inverse().concat(self).concat(c)
    }

    /// The commutator `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse().concat(&other.inverse()).concat(self).concat(other)
    }

    /// Whether `self` and `other` commute in the free group.
    pub fn commutes(&self, other: &Word) -> bool {
        self.concat(other) == other.concat(self)
    }

    /// Image of `self` under the endomorphism x -> u, y -> v.
    pub fn substitute(&self, u: &Word, v: &Word) -> Word {
        let mut reduced: Vec<u8> = Vec::with_capacity(self.len() * u.len().max(v.len()));
        for &letter in &self.letters {
            let image = match letter {
                X => u.letters.iter().copied().collect::<Vec<_>>(),
                X_INV => u.inverse().letters,
                Y => v.letters.clone(),
                Y_INV => v.inverse().letters,
                _ => unreachable!(),
            };
            for l in image {
                push_reduced(&mut reduced, l);
            }
        }
        Word { letters: reduced }
    }

    /// Splits `self` as `conj^-1 * core * conj` with `core` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let mut core = self.letters.clone();
        let mut conj: Vec<u8> = Vec::new();
        while core.len() >= 2 && core[0] == letter_inverse(core[core.len() - 1]) {
            let last = core.pop().unwrap();
            core.remove(0);
            conj.insert(0, last);
        }
        (Word { letters: conj }, Word { letters: core })
    }

    /// The unique pair `(r, k)` with `self = r^k` and `k` maximal.
    ///
    /// Returns `(identity, 1)` for the empty word, where the exponent is a
    /// convention.
    pub fn maximal_root(&self) -> (Word, u64) {
        if self.is_trivial() {
            return (Word::identity(), 1);
        }
        let (conj, core) = self.cyclic_decomposition();
        let period = smallest_period(&core.letters);
        let k = (core.len() / period) as u64;
        let root_core = Word { letters: core.letters[..period].to_vec() };
        (root_core.conjugate(&conj), k)
    }
}

fn push_reduced(buffer: &mut Vec<u8>, letter: u8) {
    if buffer.last() == Some(&letter_inverse(letter)) {
        buffer.pop();
    } else {
        buffer.push(letter);
    }
}

/// Smallest `p` dividing `len` such that the sequence is `p`-periodic.
///
/// Uses the border array: `len - border(len)` is the smallest period, and it
/// yields a full factorization exactly when it divides `len`.
fn smallest_period(letters: &[u8]) -> usize {
    let n = letters.len();
    if n == 0 {
        return 1;
    }
    let mut border = vec![0usize; n + 1];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && letters[i] != letters[k] {
            k = border[k];
        }
        if letters[i] == letters[k] {
            k += 1;
        }
        border[i + 1] = k;
    }
    let p = n - border[n];
    if n % p == 0 {
        p
    } else {
        n
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.letters.len() {
            let letter = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == letter {
                run += 1;
            }
            write!(f, "{}", LETTER_CHARS[letter as usize])?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Word, WordParseError> {
        let mut raw: Vec<u8> = Vec::new();
        let bytes = s.as_bytes();
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && (bytes[*i] as char).is_whitespace() {
                *i += 1;
            }
        };
        let mut i = 0;
        loop {
            skip_ws(&mut i);
            if i == bytes.len() {
                break;
            }
            let c = bytes[i] as char;
            let letter = match c {
                'x' => Some(X),
                'X' => Some(X_INV),
                'y' => Some(Y),
                'Y' => Some(Y_INV),
                '1' => None,
                '^' => return Err(WordParseError::DanglingExponent { at: i }),
                _ => return Err(WordParseError::UnexpectedChar { found: c, at: i }),
            };
            i += 1;
            let mut count: u64 = 1;
            let after_letter = i;
            skip_ws(&mut i);
            if i < bytes.len() && bytes[i] == b'^' {
                if letter.is_none() {
                    return Err(WordParseError::DanglingExponent { at: i });
                }
                i += 1;
                skip_ws(&mut i);
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == start {
                    return Err(WordParseError::BadExponent { at: start });
                }
                count = s[start..i]
                    .parse()
                    .map_err(|_| WordParseError::BadExponent { at: start })?;
                if count == 0 {
                    return Err(WordParseError::BadExponent { at: start });
                }
            } else {
                i = after_letter;
            }
            if let Some(l) = letter {
                for _ in 0..count {
                    raw.push(l);
                }
            }
        }
        Ok(Word::from_letters(raw))
    }
}

/// How a random word is drawn, step by step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    /// Each step is a uniformly random letter.
    Simple,
    /// Each step stays put with probability 1/2, otherwise a uniform letter
    /// (probability 1/8 each).
    Lazy,
}

#[derive(Clone, Copy, Debug)]
pub struct WalkParams {
    pub kind: WalkKind,
    pub length: u64,
    pub seed: u64,
}

/// The reduced word traced by random-walk stream `stream` under `params`.
///
/// Streams with distinct indices are independent; the same `(seed, stream)`
/// always yields the same word.
pub fn random_walk(params: &WalkParams, stream: u64) -> Word {
    let s = Stream::new(params.seed, &[0x77a1_4b00, stream]);
    let mut reduced: Vec<u8> = Vec::new();
    for t in 0..params.length {
        let bits = s.value(t);
        match params.kind {
            WalkKind::Simple => push_reduced(&mut reduced, (bits & 3) as u8),
            WalkKind::Lazy => {
                let step = bits & 7;
                if step < 4 {
                    push_reduced(&mut reduced, step as u8);
                }
            }
        }
    }
    Word { letters: reduced }
}

/// All freely reduced words of length exactly `len`, in lexicographic letter
/// order. Length 0 yields just the empty word.
pub fn reduced_words_of_length(len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = Vec::with_capacity(len);
    fn recurse(current: &mut Vec<u8>, len: usize, out: &mut Vec<Word>) {
        if current.len() == len {
            out.push(Word { letters: current.clone() });
            return;
        }
        for letter in 0..4u8 {
            if current.last() == Some(&letter_inverse(letter)) {
                continue;
            }
            current.push(letter);
            recurse(current, len, out);
            current.pop();
        }
    }
    recurse(&mut current, len, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_cancels_inverse_pairs() {
        assert_eq!(w("xX"), Word::identity());
        assert_eq!(w("xyYX"), Word::identity());
        assert_eq!(w("xyYx"), w("x^2"));
    }

    #[test]
    fn reduction_is_idempotent_exhaustively() {
        // Every letter sequence up to length 9, reduced twice.
        for len in 0..=9usize {
            let mut seq = vec![0u8; len];
            loop {
                let once = Word::from_letters(seq.iter().copied());
                let twice = Word::from_letters(once.letters().iter().copied());
                assert_eq!(once, twice);
                // Odometer over base-4 sequences.
                let mut i = 0;
                loop {
                    if i == len {
                        break;
                    }
                    seq[i] += 1;
                    if seq[i] < 4 {
                        break;
                    }
                    seq[i] = 0;
                    i += 1;
                }
                if i == len {
                    break;
                }
            }
        }
    }

    #[test]
    fn concat_length_is_subadditive() {
        let a = w("xyX");
        let b = w("xY^2");
        assert!(a.concat(&b).len() <= a.len() + b.len());
        assert_eq!(a.concat(&a.inverse()), Word::identity());
    }

    #[test]
    fn power_matches_repeated_concat() {
        for s in ["x", "xy", "Xy^2", "xyX", "YxyX"] {
            let base = w(s);
            let mut acc = Word::identity();
            for k in 0..=6u64 {
                assert_eq!(base.power(k), acc, "power {k} of {base}");
                acc = acc.concat(&base);
            }
        }
    }

    #[test]
    fn commutator_of_generators() {
        let c = Word::generator(X).commutator(&Word::generator(Y));
        assert_eq!(c, w("XYxy"));
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn conjugate_reduces_seams() {
        let g = w("y").conjugate(&w("x"));
        assert_eq!(g, w("Xyx"));
        assert_eq!(w("x^2").conjugate(&w("x")), w("x^2"));
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let u = w("xy");
        let v = w("Yx");
        for (a, b) in [("xy", "Xy"), ("x^2Y", "yx"), ("XYxy", "x")] {
            let a = w(a);
            let b = w(b);
            let lhs = a.concat(&b).substitute(&u, &v);
            let rhs = a.substitute(&u, &v).concat(&b.substitute(&u, &v));
            assert_eq!(lhs, rhs);
        }
        assert_eq!(w("x").substitute(&u, &v), u);
        assert_eq!(w("Y").substitute(&u, &v), v.inverse());
    }

    #[test]
    fn commutes_iff_common_root() {
        // Dual route: syntactic commuting test vs maximal-root comparison.
        for len_a in 0..=4usize {
            for len_b in 0..=4usize {
                for a in reduced_words_of_length(len_a) {
                    for b in reduced_words_of_length(len_b) {
                        let direct = a.commutes(&b);
                        let (ra, _) = a.maximal_root();
                        let (rb, _) = b.maximal_root();
                        let via_roots = a.is_trivial()
                            || b.is_trivial()
                            || ra == rb
                            || ra == rb.inverse();
                        assert_eq!(direct, via_roots, "words {a} and {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn maximal_root_examples() {
        assert_eq!(w("xyxy").maximal_root(), (w("xy"), 2));
        assert_eq!(w("XYxy").maximal_root(), (w("XYxy"), 1));
        assert_eq!(w("Xy^2x").maximal_root(), (w("Xyx"), 2));
        assert_eq!(w("x^6").maximal_root(), (w("x"), 6));
    }

    #[test]
    fn maximal_root_agrees_with_brute_force() {
        // Oracle: try every candidate root of length up to the word's length.
        let max_len = 5usize;
        let candidates: Vec<Word> =
            (1..=max_len).flat_map(reduced_words_of_length).collect();
        for len in 1..=max_len {
            for word in reduced_words_of_length(len) {
                let (root, k) = word.maximal_root();
                assert_eq!(root.power(k), word, "root {root} ^ {k} != {word}");
                let best = (2..=word.len() as u64)
                    .filter(|&cand_k| {
                        candidates.iter().any(|r| r.power(cand_k) == word)
                    })
                    .max()
                    .unwrap_or(1);
                assert_eq!(k, best, "maximal exponent for {word}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["1", "x", "x^2Y", "XYxy", "x^12y^3X^2", "Y^4"] {
            let word = w(s);
            assert_eq!(word.to_string(), s);
            assert_eq!(w(&word.to_string()), word);
        }
        // Whitespace is ignored on input, never produced on output.
        assert_eq!(w(" x ^ 2\tY\n"), w("x^2Y"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("z".parse::<Word>().is_err());
        assert!("x^0".parse::<Word>().is_err());
        assert!("^2".parse::<Word>().is_err());
        assert!("x^".parse::<Word>().is_err());
    }

    #[test]
    fn simple_walk_return_rate_at_two_steps() {
        // Exactly 4 of the 16 two-step letter sequences reduce to the empty
        // word, so the empirical rate must sit near 1/4.
        let params = WalkParams { kind: WalkKind::Simple, length: 2, seed: 11 };
        let trials = 100_000u64;
        let hits = (0..trials)
            .filter(|&i| random_walk(&params, i).is_trivial())
            .count() as f64;
        let rate = hits / trials as f64;
        assert!((rate - 0.25).abs() < 0.01, "return rate {rate}");
    }

    #[test]
    fn lazy_walk_stays_half_the_time() {
        let params = WalkParams { kind: WalkKind::Lazy, length: 1, seed: 5 };
        let trials = 100_000u64;
        let stays = (0..trials)
            .filter(|&i| random_walk(&params, i).is_trivial())
            .count() as f64;
        let rate = stays / trials as f64;
        assert!((rate - 0.5).abs() < 0.01, "stay rate {rate}");
    }

    #[test]
    fn walks_are_reproducible_per_stream() {
        let params = WalkParams { kind: WalkKind::Lazy, length: 40, seed: 123 };
        assert_eq!(random_walk(&params, 7), random_walk(&params, 7));
        assert_ne!(random_walk(&params, 7), random_walk(&params, 8));
    }

    #[test]
    fn reduced_word_counts_follow_4_times_3_powers() {
        assert_eq!(reduced_words_of_length(0).len(), 1);
        assert_eq!(reduced_words_of_length(1).len(), 4);
        assert_eq!(reduced_words_of_length(2).len(), 12);
        assert_eq!(reduced_words_of_length(5).len(), 4 * 81);
    }
}
