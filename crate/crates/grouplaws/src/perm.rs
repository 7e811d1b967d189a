//! Permutations of {0, ..., degree-1} with cycle-notation text support.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermParseError {
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("point {0} appears twice")]
    RepeatedPoint(usize),
    #[error("point {point} exceeds degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
}

/// A permutation stored as the image table `map[i] = i^g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    map: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { map: (0..degree as u8).collect() }
    }

    /// Validates that `map` is a bijection.
    pub fn new(map: Vec<u8>) -> Perm {
        let degree = map.len();
        assert!(degree <= 255, "degree above 255 unsupported");
        let mut seen = vec![false; degree];
        for &img in &map {
            assert!((img as usize) < degree && !seen[img as usize], "not a bijection");
            seen[img as usize] = true;
        }
        Perm { map }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.map[point] as usize
    }

    /// Composition acting left to right: `(self * other)(i) = other(self(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm { map: self.map.iter().map(|&i| other.map[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0u8; self.degree()];
        for (i, &img) in self.map.iter().enumerate() {
            map[img as usize] = i as u8;
        }
        Perm { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &img)| i == img as usize)
    }

    /// Cycle lengths (fixed points included), sorted descending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lengths = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                len += 1;
                i = self.apply(i);
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Multiplicative order: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths().iter().fold(1u64, |acc, &l| lcm(acc, l as u64))
    }

    /// Sign of the permutation: +1 for even, -1 for odd.
    pub fn sign(&self) -> i8 {
        let transpositions: usize =
            self.cycle_lengths().iter().map(|&l| l - 1).sum();
        if transpositions % 2 == 0 { 1 } else { -1 }
    }

    /// Parses disjoint cycles of 1-based points, e.g. `(1,2,3)(4,5)`.
    /// `()` denotes the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, PermParseError> {
        let mut map: Vec<u8> = (0..degree as u8).collect();
        let mut assigned = vec![false; degree];
        let text = text.trim();
        if !text.starts_with('(') || !text.ends_with(')') {
            return Err(PermParseError::Malformed(text.to_string()));
        }
        for cycle_text in text[1..text.len() - 1].split(")(") {
            let cycle_text = cycle_text.trim();
            if cycle_text.is_empty() {
                continue;
            }
            let points: Result<Vec<usize>, _> = cycle_text
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect();
            let points = points.map_err(|_| PermParseError::Malformed(cycle_text.to_string()))?;
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(PermParseError::PointOutOfRange { point: p, degree });
                }
                if assigned[p - 1] {
                    return Err(PermParseError::RepeatedPoint(p));
                }
                assigned[p - 1] = true;
            }
            for (i, &p) in points.iter().enumerate() {
                let next = points[(i + 1) % points.len()];
                map[p - 1] = (next - 1) as u8;
            }
        }
        Ok(Perm::new(map))
    }
}

impl fmt::Display for Perm {
    /// Disjoint cycles of 1-based points; fixed points omitted; identity is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.apply(i);
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
