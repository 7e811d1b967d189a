//! Arithmetic in the finite fields GF(q) needed by the matrix backends.
//!
//! Elements are indices `0..q`. For a prime field the index is the residue
//! itself; for GF(p^e) the index encodes a polynomial over GF(p) in base p
//! (least significant coefficient first), reduced modulo a fixed irreducible
//! polynomial from [`MODULI`]. Fixing the moduli keeps element encodings,
//! and everything built on them, stable across runs.
//!
//! All operations are table lookups built once per field.

use thiserror::Error;

/// Irreducible moduli for the extension fields in use, as coefficient lists
/// of x^0..x^e (the leading 1 included). These are the Conway polynomials.
const MODULI: &[(u16, u32, &[u16])] = &[
    (2, 2, &[1, 1, 1]),          // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),       // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0, 1]),    // x^4 + x + 1
    (2, 5, &[1, 0, 1, 0, 0, 1]), // x^5 + x^2 + 1
    (3, 2, &[2, 2, 1]),          // x^2 + 2x + 2
    (3, 3, &[1, 2, 0, 1]),       // x^3 + 2x + 1
    (5, 2, &[2, 4, 1]),          // x^2 + 4x + 2
    (7, 2, &[3, 6, 1]),          // x^2 + 6x + 3
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power supported by the modulus table")]
    UnsupportedOrder(u64),
}

/// A finite field GF(q) with lookup-table arithmetic.
#[derive(Debug)]
pub struct Gf {
    pub q: u16,
    pub p: u16,
    pub e: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// x -> x^p, the Frobenius automorphism.
    frob: Vec<u16>,
    is_square: Vec<bool>,
}

/// Splits q into (p, e) with p prime and q = p^e, or None if q is not a
/// prime power (or is < 2).
pub fn factor_prime_power(q: u64) -> Option<(u16, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return (rest == 1).then_some((p as u16, e));
        }
        p += 1;
    }
    Some((q as u16, 1))
}

impl Gf {
    /// Builds GF(q), verifying on the way that the configured modulus really
    /// is irreducible.
    pub fn new(q: u64) -> Result<Gf, FieldError> {
        let (p, e) = factor_prime_power(q).ok_or(FieldError::UnsupportedOrder(q))?;
        if q > 10_000 {
            return Err(FieldError::UnsupportedOrder(q));
        }
        let q = q as u16;
        let modulus: Vec<u16> = if e == 1 {
            vec![0, 1]
        } else {
            MODULI
                .iter()
                .find(|&&(mp, me, _)| mp == p && me == e)
                .ok_or(FieldError::UnsupportedOrder(q as u64))?
                .2
                .to_vec()
        };
        if e > 1 {
            assert!(
                poly_is_irreducible(&modulus, p),
                "modulus for GF({q}) is reducible"
            );
        }

        let qn = q as usize;
        let mut add = vec![0u16; qn * qn];
        let mut mul = vec![0u16; qn * qn];
        for a in 0..qn {
            for b in 0..qn {
                add[a * qn + b] = poly_index_add(a as u16, b as u16, p, e);
                mul[a * qn + b] = poly_index_mul(a as u16, b as u16, p, e, &modulus);
            }
        }
        let mut neg = vec![0u16; qn];
        let mut inv = vec![0u16; qn];
        let mut frob = vec![0u16; qn];
        let mut is_square = vec![false; qn];
        for a in 0..qn {
            for b in 0..qn {
                if add[a * qn + b] == 0 {
                    neg[a] = b as u16;
                }
                if a != 0 && mul[a * qn + b] == 1 {
                    inv[a] = b as u16;
                }
            }
            let mut power = a as u16;
            for _ in 1..p {
                power = mul[power as usize * qn + a];
            }
            frob[a] = power;
            is_square[mul[a * qn + a] as usize] = true;
        }
        Ok(Gf { q, p, e, add, mul, neg, inv, frob, is_square })
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero in GF({})", self.q);
        self.inv[a as usize]
    }

    /// The Frobenius map a -> a^p.
    #[inline]
    pub fn frobenius(&self, a: u16) -> u16 {
        self.frob[a as usize]
    }

    /// a -> a^(p^k): Frobenius applied k times.
    pub fn frobenius_power(&self, mut a: u16, k: u32) -> u16 {
        for _ in 0..k {
            a = self.frob[a as usize];
        }
        a
    }

    /// Whether `a` is a square in GF(q) (zero counts as a square).
    #[inline]
    pub fn is_square(&self, a: u16) -> bool {
        self.is_square[a as usize]
    }

    pub fn pow(&self, a: u16, mut k: u64) -> u16 {
        let mut base = a;
        let mut acc = 1u16;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// A fixed multiplicative generator: the smallest index whose powers
    /// exhaust the nonzero elements.
    pub fn primitive_element(&self) -> u16 {
        'outer: for cand in 1..self.q {
            let mut seen = 0u32;
            let mut v = cand;
            loop {
                seen += 1;
                if v == 1 {
                    break;
                }
                v = self.mul(v, cand);
                if seen > self.q as u32 {
                    continue 'outer;
                }
            }
            if seen == self.q as u32 - 1 {
                return cand;
            }
        }
        unreachable!("no primitive element found in GF({})", self.q)
    }

    /// The trace down to the prime subfield: a + a^p + ... + a^(p^(e-1)).
    /// The result always lies in GF(p), i.e. its index is < p.
    pub fn absolute_trace(&self, a: u16) -> u16 {
        let mut acc = a;
        let mut orbit = a;
        for _ in 1..self.e {
            orbit = self.frob[orbit as usize];
            acc = self.add(acc, orbit);
        }
        acc
    }

    /// Converts a residue (for prime fields) or raw index into an element,
    /// reducing mod p in the prime case.
    pub fn from_int(&self, v: u64) -> u16 {
        if self.e == 1 {
            (v % self.q as u64) as u16
        } else {
            assert!(v < self.q as u64, "index {v} out of range for GF({})", self.q);
            v as u16
        }
    }
}

fn index_to_poly(mut i: u16, p: u16, e: u32) -> Vec<u16> {
    let mut coeffs = vec![0u16; e as usize];
    for c in coeffs.iter_mut() {
        *c = i % p;
        i /= p;
    }
    coeffs
}

fn poly_to_index(coeffs: &[u16], p: u16) -> u16 {
    coeffs.iter().rev().fold(0u16, |acc, &c| acc * p + c)
}

fn poly_index_add(a: u16, b: u16, p: u16, e: u32) -> u16 {
    let pa = index_to_poly(a, p, e);
    let pb = index_to_poly(b, p, e);
    let sum: Vec<u16> = pa.iter().zip(&pb).map(|(&x, &y)| (x + y) % p).collect();
    poly_to_index(&sum, p)
}

fn poly_index_mul(a: u16, b: u16, p: u16, e: u32, modulus: &[u16]) -> u16 {
    let pa = index_to_poly(a, p, e);
    let pb = index_to_poly(b, p, e);
    let mut prod = vec![0u32; 2 * e as usize];
    for (i, &x) in pa.iter().enumerate() {
        for (j, &y) in pb.iter().enumerate() {
            prod[i + j] += x as u32 * y as u32;
        }
    }
    let mut prod: Vec<u16> = prod.iter().map(|&c| (c % p as u32) as u16).collect();
    // Reduce modulo the (monic) modulus.
    for i in (e as usize..prod.len()).rev() {
        let c = prod[i];
        if c != 0 {
            prod[i] = 0;
            for (j, &m) in modulus.iter().enumerate().take(e as usize) {
                let idx = i - e as usize + j;
                let v = (prod[idx] as u32 + (p as u32 - m as u32 % p as u32) * c as u32) % p as u32;
                prod[idx] = v as u16;
            }
        }
    }
    poly_to_index(&prod[..e as usize], p)
}

/// Brute-force irreducibility: no factorization into lower-degree monics.
fn poly_is_irreducible(modulus: &[u16], p: u16) -> bool {
    let deg = modulus.len() - 1;
    let count = (p as u64).pow(deg as u32 / 2 + 1);
    for i in 0..count {
        let cand = {
            let mut c = index_to_poly_u64(i, p, deg as u32 / 2 + 1);
            while c.last() == Some(&0) {
                c.pop();
            }
            c
        };
        if cand.len() < 2 || cand.len() > deg {
            continue;
        }
        if *cand.last().unwrap() != 1 {
            continue;
        }
        if poly_divides(&cand, modulus, p) {
            return false;
        }
    }
    true
}

fn index_to_poly_u64(mut i: u64, p: u16, len: u32) -> Vec<u16> {
    let mut coeffs = vec![0u16; len as usize];
    for c in coeffs.iter_mut() {
        *c = (i % p as u64) as u16;
        i /= p as u64;
    }
    coeffs
}

fn poly_divides(d: &[u16], n: &[u16], p: u16) -> bool {
    let mut rem: Vec<u16> = n.to_vec();
    let dd = d.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (j, &c) in d.iter().enumerate() {
                let v = (rem[shift + j] as u32 + (p as u32 - (c as u32 * lead as u32) % p as u32)) % p as u32;
                rem[shift + j] = v as u16;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
