//! Projective matrices: elements of PSL(2, q), PSL(3, q) and PSU(3, q).
//!
//! A [`ProjMat`] stores a row-major matrix over GF(q) with determinant 1,
//! canonicalized modulo the scalar subgroup of the relevant classical group:
//! two matrices are equal as stored values exactly when they agree up to an
//! allowed scalar. Canonicalization picks the lexicographically smallest
//! scaled entry table, which keeps determinants at 1 because every allowed
//! scalar satisfies `lambda^dim = 1`.
//!
//! Arithmetic is mediated by a [`MatCtx`] holding the field tables, the
//! scalar list and, for the unitary groups, the conjugation automorphism.

use crate::field::Gf;

/// Context for matrix arithmetic in one fixed projective group.
#[derive(Debug)]
pub struct MatCtx {
    pub field: Gf,
    pub dim: u8,
    /// Scalars identified with the identity (the center of the linear group).
    pub center: Vec<u16>,
    /// For unitary groups over GF(q^2): the power k with conjugation = Frobenius^k,
    /// so that `a -> a^q`. `None` for the linear groups.
    pub conj_frobenius: Option<u32>,
}

impl MatCtx {
    /// Context for PSL(dim, q): center scalars are the dim-th roots of unity.
    pub fn linear(field: Gf, dim: u8) -> MatCtx {
        let center = roots_of_unity(&field, dim as u64);
        MatCtx { field, dim, center, conj_frobenius: None }
    }

    /// Context for PSU(3, q), acting over GF(q^2).
    ///
    /// `field` must be GF(q^2); conjugation is `a -> a^q`.
    pub fn unitary3(field: Gf, q: u16) -> MatCtx {
        assert_eq!(field.q as u64, q as u64 * q as u64, "unitary context needs GF(q^2)");
        assert_eq!(field.e % 2, 0);
        let half = field.e / 2;
        let center: Vec<u16> = roots_of_unity(&field, 3)
            .into_iter()
            .filter(|&l| field.pow(l, q as u64 + 1) == 1)
            .collect();
        MatCtx { field, dim: 3, center, conj_frobenius: Some(half) }
    }

    /// `a -> a^q` in the unitary case; identity otherwise.
    #[inline]
    pub fn conj(&self, a: u16) -> u16 {
        match self.conj_frobenius {
            Some(k) => self.field.frobenius_power(a, k),
            None => a,
        }
    }

    pub fn identity(&self) -> ProjMat {
        let mut entries = [0u16; 9];
        for i in 0..self.dim as usize {
            entries[i * self.dim as usize + i] = 1;
        }
        // The identity is already canonical: scaling by a nontrivial root of
        // unity makes entry 0 larger or leaves it at 1 only for the identity
        // scalar.
        self.make(entries)
    }

    /// Builds a canonical projective matrix from raw entries.
    pub fn make(&self, entries: [u16; 9]) -> ProjMat {
        let n = (self.dim * self.dim) as usize;
        let mut best = entries;
        for &lambda in &self.center {
            if lambda == 1 {
                continue;
            }
            let mut scaled = [0u16; 9];
            for i in 0..n {
                scaled[i] = self.field.mul(lambda, entries[i]);
            }
            if scaled[..n] < best[..n] {
                best = scaled;
            }
        }
        ProjMat { dim: self.dim, entries: best }
    }

    pub fn mul(&self, a: &ProjMat, b: &ProjMat) -> ProjMat {
        let d = self.dim as usize;
        let f = &self.field;
        let mut entries = [0u16; 9];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u16;
                for k in 0..d {
                    acc = f.add(acc, f.mul(a.entries[i * d + k], b.entries[k * d + j]));
                }
                entries[i * d + j] = acc;
            }
        }
        self.make(entries)
    }

    /// Inverse via the adjugate; valid because stored lifts have determinant 1.
    pub fn inverse(&self, a: &ProjMat) -> ProjMat {
        let f = &self.field;
        let m = &a.entries;
        let mut entries = [0u16; 9];
        if self.dim == 2 {
            entries[0] = m[3];
            entries[1] = f.neg(m[1]);
            entries[2] = f.neg(m[2]);
            entries[3] = m[0];
        } else {
            let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
                f.sub(f.mul(m[r1 * 3 + c1], m[r2 * 3 + c2]), f.mul(m[r1 * 3 + c2], m[r2 * 3 + c1]))
            };
            // Transposed cofactor matrix.
            entries[0] = cof(1, 1, 2, 2);
            entries[1] = f.neg(cof(0, 1, 2, 2));
            entries[2] = cof(0, 1, 1, 2);
            entries[3] = f.neg(cof(1, 0, 2, 2));
            entries[4] = cof(0, 0, 2, 2);
            entries[5] = f.neg(cof(0, 0, 1, 2));
            entries[6] = cof(1, 0, 2, 1);
            entries[7] = f.neg(cof(0, 0, 2, 1));
            entries[8] = cof(0, 0, 1, 1);
        }
        self.make(entries)
    }

    pub fn det(&self, a: &ProjMat) -> u16 {
        let f = &self.field;
        let m = &a.entries;
        if self.dim == 2 {
            f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
        } else {
            let term = |i: usize, j: usize, k: usize| {
                f.mul(m[i], f.mul(m[3 + j], m[6 + k]))
            };
            let pos = f.add(f.add(term(0, 1, 2), term(1, 2, 0)), term(2, 0, 1));
            let neg = f.add(f.add(term(2, 1, 0), term(1, 0, 2)), term(0, 2, 1));
            f.sub(pos, neg)
        }
    }

    /// Trace of the stored lift.
    pub fn trace(&self, a: &ProjMat) -> u16 {
        let d = self.dim as usize;
        (0..d).fold(0u16, |acc, i| self.field.add(acc, a.entries[i * d + i]))
    }

    /// Whether the stored lift preserves the Hermitian form with antidiagonal
    /// Gram matrix: `conj(A)^T J A = J`. Only meaningful in a unitary context.
    pub fn is_unitary(&self, a: &ProjMat) -> bool {
        let d = self.dim as usize;
        let f = &self.field;
        // J[i][j] = 1 iff i + j = d - 1.
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u16;
                for k in 0..d {
                    // (A* J A)[i][j] = sum_k conj(A[k][i]) * A[d-1-k][j]
                    acc = f.add(acc, f.mul(self.conj(a.entries[k * d + i]), a.entries[(d - 1 - k) * d + j]));
                }
                let expected = if i + j == d - 1 { 1 } else { 0 };
                if acc != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Image of a projective point under `a`, as the canonical representative.
    pub fn apply_point(&self, a: &ProjMat, point: [u16; 3]) -> [u16; 3] {
        let d = self.dim as usize;
        let mut image = [0u16; 3];
        for i in 0..d {
            let mut acc = 0u16;
            for j in 0..d {
                acc = self.field.add(acc, self.field.mul(a.entries[i * d + j], point[j]));
            }
            image[i] = acc;
        }
        normalize_point(&self.field, image, d)
            .expect("invertible matrix sends a nonzero vector to a nonzero vector")
    }

    /// Projective fixed points of `a` on the projective line or plane:
    /// canonical representatives of the 1-dimensional eigenspaces.
    pub fn projective_fixed_points(&self, a: &ProjMat) -> Vec<[u16; 3]> {
        let d = self.dim as usize;
        projective_points(&self.field, d)
            .into_iter()
            .filter(|&point| self.apply_point(a, point) == point)
            .collect()
    }
}

/// All points of P^(d-1) over the context field, as canonical representatives
/// (first nonzero coordinate scaled to 1), in a fixed order.
pub fn projective_points(field: &Gf, d: usize) -> Vec<[u16; 3]> {
    let q = field.q;
    let mut points = Vec::new();
    if d == 2 {
        for t in 0..q {
            points.push([1, t, 0]);
        }
        points.push([0, 1, 0]);
    } else {
        for a in 0..q {
            for b in 0..q {
                points.push([1, a, b]);
            }
        }
        for a in 0..q {
            points.push([0, 1, a]);
        }
        points.push([0, 0, 1]);
    }
    points
}

/// Scales a vector so its first nonzero coordinate is 1; `None` for zero.
pub fn normalize_point(field: &Gf, mut v: [u16; 3], d: usize) -> Option<[u16; 3]> {
    let lead = (0..d).find(|&i| v[i] != 0)?;
    let scale = field.inv(v[lead]);
    for i in 0..d {
        v[i] = field.mul(scale, v[i]);
    }
    Some(v)
}

fn roots_of_unity(field: &Gf, n: u64) -> Vec<u16> {
    (1..field.q).filter(|&l| field.pow(l, n) == 1).collect()
}

/// A canonicalized projective matrix. Equality and hashing are projective
/// equality in the owning context.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProjMat {
    pub dim: u8,
    pub entries: [u16; 9],
}

/// Generators of SL(2, q): the elementary transvections, with extra
/// primitive-element versions when q is not prime.
pub fn sl2_generators(ctx: &MatCtx) -> Vec<ProjMat> {
    assert_eq!(ctx.dim, 2);
    let mut gens = vec![
        ctx.make([1, 1, 0, 1, 0, 0, 0, 0, 0]),
        ctx.make([1, 0, 1, 1, 0, 0, 0, 0, 0]),
    ];
    if ctx.field.e > 1 {
        let g = ctx.field.primitive_element();
        gens.push(ctx.make([1, g, 0, 1, 0, 0, 0, 0, 0]));
        gens.push(ctx.make([1, 0, g, 1, 0, 0, 0, 0, 0]));
    }
    gens
}

/// Generators of SL(3, q): elementary transvections on adjacent coordinates.
pub fn sl3_generators(ctx: &MatCtx) -> Vec<ProjMat> {
    assert_eq!(ctx.dim, 3);
    let mut gens = Vec::new();
    let mut elementary = |i: usize, j: usize, v: u16| {
        let mut entries = [0u16; 9];
        entries[0] = 1;
        entries[4] = 1;
        entries[8] = 1;
        entries[i * 3 + j] = v;
        gens.push(ctx.make(entries));
    };
    elementary(0, 1, 1);
    elementary(1, 0, 1);
    elementary(1, 2, 1);
    elementary(2, 1, 1);
    if ctx.field.e > 1 {
        let g = ctx.field.primitive_element();
        elementary(0, 1, g);
        elementary(1, 0, g);
    }
    gens
}

/// Generators of SU(3, q): two upper unipotents, the antidiagonal Weyl
/// element and a torus generator. All are verified unitary with determinant 1.
pub fn su3_generators(ctx: &MatCtx) -> Vec<ProjMat> {
    let f = &ctx.field;
    let q = match ctx.conj_frobenius {
        Some(k) => (f.p as u64).pow(k) as u16,
        None => panic!("su3_generators needs a unitary context"),
    };

    // Upper unipotent u(a, b) = [[1, a, b], [0, 1, -conj(a)], [0, 0, 1]]
    // is unitary iff b + conj(b) = -a * conj(a).
    let unipotent = |a: u16| {
        let target = f.neg(f.mul(a, ctx.conj(a)));
        let b = (0..f.q)
            .find(|&b| f.add(b, ctx.conj(b)) == target)
            .expect("trace equation has solutions");
        let c = f.neg(ctx.conj(a));
        ctx.make([1, a, b, 0, 1, c, 0, 0, 1])
    };

    // Weyl element: antidiagonal (1, -1, 1), determinant 1, unitary.
    let w = ctx.make([0, 0, 1, 0, f.neg(1), 0, 1, 0, 0]);

    // Torus: diag(l, l^(q-1), l^(-q)) for a primitive l of GF(q^2).
    let l = f.primitive_element();
    let torus = ctx.make({
        let mut m = [0u16; 9];
        m[0] = l;
        m[4] = f.pow(l, q as u64 - 1);
        m[8] = f.inv(f.pow(l, q as u64));
        m
    });

    let gens = vec![unipotent(1), unipotent(f.primitive_element()), w, torus];
    for g in &gens {
        assert_eq!(ctx.det(g), 1, "SU(3) generator must have determinant 1");
        assert!(ctx.is_unitary(g), "SU(3) generator must preserve the form");
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_ctx(q: u64, dim: u8) -> MatCtx {
        MatCtx::linear(Gf::new(q).unwrap(), dim)
    }

    #[test]
    fn psl2_identifies_negated_matrices() {
        let ctx = linear_ctx(5, 2);
        let a = ctx.make([1, 2, 0, 1, 0, 0, 0, 0, 0]);
        let minus_a = ctx.make([4, 3, 0, 4, 0, 0, 0, 0, 0]);
        assert_eq!(a, minus_a);
    }

    #[test]
    fn mul_and_inverse_are_consistent() {
        let ctx = linear_ctx(7, 2);
        let a = ctx.make([1, 1, 0, 1, 0, 0, 0, 0, 0]);
        let b = ctx.make([1, 0, 3, 1, 0, 0, 0, 0, 0]);
        let ab = ctx.mul(&a, &b);
        assert_eq!(ctx.mul(&ab, &ctx.inverse(&b)), a);
        assert_eq!(ctx.mul(&a, &ctx.inverse(&a)), ctx.identity());
        assert_eq!(ctx.det(&ab), 1);
    }

    #[test]
    fn sl3_inverse_via_adjugate() {
        let ctx = linear_ctx(3, 3);
        for g in sl3_generators(&ctx) {
            assert_eq!(ctx.det(&g), 1);
            assert_eq!(ctx.mul(&g, &ctx.inverse(&g)), ctx.identity());
        }
        // A product of generators, too.
        let gens = sl3_generators(&ctx);
        let prod = ctx.mul(&ctx.mul(&gens[0], &gens[1]), &gens[2]);
        assert_eq!(ctx.mul(&ctx.inverse(&prod), &prod), ctx.identity());
    }

    #[test]
    fn psl3_center_has_cube_roots_of_unity() {
        // gcd(3, q-1): trivial for q = 3, order three for q = 7.
        assert_eq!(linear_ctx(3, 3).center, vec![1]);
        assert_eq!(linear_ctx(7, 3).center.len(), 3);
        let ctx = linear_ctx(7, 3);
        let scaled = ctx.make([2, 0, 0, 0, 2, 0, 0, 0, 2]);
        assert_eq!(scaled, ctx.identity());
    }

    #[test]
    fn unitary_context_accepts_its_generators() {
        let ctx = MatCtx::unitary3(Gf::new(9).unwrap(), 3);
        let gens = su3_generators(&ctx);
        assert_eq!(gens.len(), 4);
        for g in &gens {
            assert!(ctx.is_unitary(g));
            // Products stay unitary.
            for h in &gens {
                assert!(ctx.is_unitary(&ctx.mul(g, h)));
            }
        }
    }

    #[test]
    fn projective_line_has_q_plus_1_points() {
        let f = Gf::new(13).unwrap();
        assert_eq!(projective_points(&f, 2).len(), 14);
        let f3 = Gf::new(3).unwrap();
        assert_eq!(projective_points(&f3, 3).len(), 13);
    }

    #[test]
    fn fixed_points_of_triangular_and_rotation_matrices() {
        let ctx = linear_ctx(5, 2);
        // Unipotent: exactly one fixed point.
        let u = ctx.make([1, 1, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(ctx.projective_fixed_points(&u).len(), 1);
        // Split diagonal: exactly two.
        let t = ctx.make([2, 0, 0, 3, 0, 0, 0, 0, 0]);
        assert_eq!(ctx.projective_fixed_points(&t).len(), 2);
        // Identity fixes everything.
        assert_eq!(ctx.projective_fixed_points(&ctx.identity()).len(), 6);
    }
}
