//! Finite group backends: symmetric, alternating, cyclic and dihedral groups
//! on permutations, the projective groups PSL(2, q), PSL(3, q) and PSU(3, q)
//! on canonicalized matrices, and bundled permutation groups from the data
//! file. Provides word evaluation, breadth-first enumeration, order and
//! exponent computation, and the Borel-subgroup predicates on PSL(2, q).

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::field::{FieldError, Gf};
use crate::matrix::{sl2_generators, sl3_generators, su3_generators, MatCtx, ProjMat};
use crate::perm::{lcm, Perm};
use crate::word::Word;

/// Default cap on how many elements an enumeration or closure may produce.
pub const ENUMERATION_CEILING: u64 = 2_000_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("unsupported parameter in group spec {0}")]
    BadParameter(String),
    #[error("group spec `{0}` does not parse (expected family:parameter)")]
    BadSpec(String),
    #[error("no bundled permutation group named `{0}`")]
    UnknownName(String),
    #[error("enumeration ceiling of {ceiling} elements exceeded")]
    CeilingExceeded { ceiling: u64 },
    #[error("group order does not fit in 64 bits for {0}")]
    OrderOverflow(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A named finite group. The text form is `family:parameter`, e.g. `Sym:5`,
/// `PSL2:7` or `Perm:M11` for a bundled permutation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Sym(u32),
    Alt(u32),
    Cyclic(u32),
    Dihedral(u32),
    Psl2(u32),
    Psl3(u32),
    Psu3(u32),
    PermGenerated { name: String, degree: usize, gens: Vec<Perm> },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Sym(k) => write!(f, "Sym:{k}"),
            GroupSpec::Alt(k) => write!(f, "Alt:{k}"),
            GroupSpec::Cyclic(n) => write!(f, "Cyclic:{n}"),
            GroupSpec::Dihedral(m) => write!(f, "Dihedral:{m}"),
            GroupSpec::Psl2(q) => write!(f, "PSL2:{q}"),
            GroupSpec::Psl3(q) => write!(f, "PSL3:{q}"),
            GroupSpec::Psu3(q) => write!(f, "PSU3:{q}"),
            GroupSpec::PermGenerated { name, .. } => write!(f, "Perm:{name}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<GroupSpec, GroupError> {
        let (family, param) = s
            .split_once(':')
            .ok_or_else(|| GroupError::BadSpec(s.to_string()))?;
        let param = param.trim();
        if family == "Perm" {
            return bundled_group(param);
        }
        let value: u32 = param
            .parse()
            .map_err(|_| GroupError::BadSpec(s.to_string()))?;
        Ok(match family {
            "Sym" => GroupSpec::Sym(value),
            "Alt" => GroupSpec::Alt(value),
            "Cyclic" => GroupSpec::Cyclic(value),
            "Dihedral" => GroupSpec::Dihedral(value),
            "PSL2" => GroupSpec::Psl2(value),
            "PSL3" => GroupSpec::Psl3(value),
            "PSU3" => GroupSpec::Psu3(value),
            _ => return Err(GroupError::BadSpec(s.to_string())),
        })
    }
}

const PERM_DATA: &str = include_str!("../data/permgroups.txt");

fn bundled_table() -> &'static [GroupSpec] {
    static TABLE: OnceLock<Vec<GroupSpec>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::new();
        for line in PERM_DATA.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let name = fields.next().expect("data line has a name").to_string();
            let degree: usize = fields
                .next()
                .and_then(|d| d.parse().ok())
                .expect("data line has a numeric degree");
            let gens: Vec<Perm> = fields
                .map(|c| {
                    Perm::parse_cycles(c, degree)
                        .unwrap_or_else(|e| panic!("bad bundled cycles for {name}: {e}"))
                })
                .collect();
            assert!(!gens.is_empty(), "bundled group {name} has no generators");
            out.push(GroupSpec::PermGenerated { name, degree, gens });
        }
        out
    })
}

/// Resolves a bundled permutation group by its data-file name.
pub fn bundled_group(name: &str) -> Result<GroupSpec, GroupError> {
    bundled_table()
        .iter()
        .find(|spec| matches!(spec, GroupSpec::PermGenerated { name: n, .. } if n == name))
        .cloned()
        .ok_or_else(|| GroupError::UnknownName(name.to_string()))
}

/// Names of all bundled permutation groups, in data-file order.
pub fn bundled_group_names() -> Vec<String> {
    bundled_table()
        .iter()
        .filter_map(|spec| match spec {
            GroupSpec::PermGenerated { name, .. } => Some(name.clone()),
            _ => None,
        })
        .collect()
}

/// A group element: a permutation or a canonicalized projective matrix,
/// depending on the owning group's backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Perm(Perm),
    Mat(ProjMat),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => write!(f, "{p}"),
            Element::Mat(m) => {
                let d = m.dim as usize;
                write!(f, "[")?;
                for r in 0..d {
                    if r > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "[")?;
                    for c in 0..d {
                        if c > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", m.entries[r * d + c])?;
                    }
                    write!(f, "]")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Debug)]
enum Backend {
    Perms { degree: usize, gens: Vec<Perm> },
    Mats { ctx: MatCtx, gens: Vec<ProjMat> },
}

/// A concrete group built from a [`GroupSpec`], with a cached enumeration.
#[derive(Debug)]
pub struct Group {
    spec: GroupSpec,
    backend: Backend,
    elements: OnceLock<Vec<Element>>,
}

const MAX_PERM_DEGREE: u32 = 128;

impl Group {
    pub fn new(spec: &GroupSpec) -> Result<Group, GroupError> {
        let backend = match spec {
            GroupSpec::Sym(k) => {
                let k = perm_degree(spec, *k, 1)?;
                let mut gens = Vec::new();
                if k >= 2 {
                    gens.push(full_cycle(k));
                }
                if k >= 3 {
                    gens.push(transposition(k));
                }
                Backend::Perms { degree: k, gens }
            }
            GroupSpec::Alt(k) => {
                let k = perm_degree(spec, *k, 1)?;
                let mut gens = Vec::new();
                if k >= 3 {
                    gens.push(three_cycle(k));
                }
                if k >= 4 {
                    gens.push(if k % 2 == 1 { full_cycle(k) } else { cycle_fixing_zero(k) });
                }
                Backend::Perms { degree: k, gens }
            }
            GroupSpec::Cyclic(n) => {
                let n = perm_degree(spec, *n, 1)?;
                let gens = if n >= 2 { vec![full_cycle(n)] } else { Vec::new() };
                Backend::Perms { degree: n, gens }
            }
            GroupSpec::Dihedral(m) => {
                let m = perm_degree(spec, *m, 3)?;
                Backend::Perms { degree: m, gens: vec![full_cycle(m), reflection(m)] }
            }
            GroupSpec::Psl2(q) => {
                let ctx = MatCtx::linear(Gf::new(*q as u64)?, 2);
                let gens = sl2_generators(&ctx);
                Backend::Mats { ctx, gens }
            }
            GroupSpec::Psl3(q) => {
                let ctx = MatCtx::linear(Gf::new(*q as u64)?, 3);
                let gens = sl3_generators(&ctx);
                Backend::Mats { ctx, gens }
            }
            GroupSpec::Psu3(q) => {
                let sq = (*q as u64) * (*q as u64);
                let ctx = MatCtx::unitary3(Gf::new(sq)?, *q as u16);
                let gens = su3_generators(&ctx);
                Backend::Mats { ctx, gens }
            }
            GroupSpec::PermGenerated { name, degree, gens } => {
                if gens.is_empty() || gens.iter().any(|g| g.degree() != *degree) {
                    return Err(GroupError::BadParameter(name.clone()));
                }
                Backend::Perms { degree: *degree, gens: gens.clone() }
            }
        };
        Ok(Group { spec: spec.clone(), backend, elements: OnceLock::new() })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Group order: by formula for the named families, by closure size for
    /// bundled permutation groups.
    pub fn order(&self) -> Result<u64, GroupError> {
        let overflow = || GroupError::OrderOverflow(self.spec.to_string());
        Ok(match &self.spec {
            GroupSpec::Sym(k) => factorial(*k).ok_or_else(overflow)?,
            GroupSpec::Alt(k) => {
                if *k <= 2 {
                    1
                } else {
                    factorial(*k).ok_or_else(overflow)? / 2
                }
            }
            GroupSpec::Cyclic(n) => *n as u64,
            GroupSpec::Dihedral(m) => 2 * *m as u64,
            GroupSpec::Psl2(q) => psl2_order(*q as u64),
            GroupSpec::Psl3(q) => psl3_order(*q as u64),
            GroupSpec::Psu3(q) => psu3_order(*q as u64),
            GroupSpec::PermGenerated { .. } => self.enumerate()?.len() as u64,
        })
    }

    pub fn identity(&self) -> Element {
        match &self.backend {
            Backend::Perms { degree, .. } => Element::Perm(Perm::identity(*degree)),
            Backend::Mats { ctx, .. } => Element::Mat(ctx.identity()),
        }
    }

    pub fn generators(&self) -> Vec<Element> {
        match &self.backend {
            Backend::Perms { gens, .. } => gens.iter().cloned().map(Element::Perm).collect(),
            Backend::Mats { gens, .. } => gens.iter().copied().map(Element::Mat).collect(),
        }
    }

    /// The matrix context, for callers that need field arithmetic on matrix
    /// elements (Borel predicates, trace inspection).
    pub fn matrix_context(&self) -> Option<&MatCtx> {
        match &self.backend {
            Backend::Mats { ctx, .. } => Some(ctx),
            Backend::Perms { .. } => None,
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&self.backend, a, b) {
            (Backend::Perms { .. }, Element::Perm(p), Element::Perm(q)) => {
                Element::Perm(p.compose(q))
            }
            (Backend::Mats { ctx, .. }, Element::Mat(m), Element::Mat(n)) => {
                Element::Mat(ctx.mul(m, n))
            }
            _ => panic!("element does not belong to group {}", self.spec),
        }
    }

    pub fn inverse(&self, a: &Element) -> Element {
        match (&self.backend, a) {
            (Backend::Perms { .. }, Element::Perm(p)) => Element::Perm(p.inverse()),
            (Backend::Mats { ctx, .. }, Element::Mat(m)) => Element::Mat(ctx.inverse(m)),
            _ => panic!("element does not belong to group {}", self.spec),
        }
    }

    pub fn power(&self, a: &Element, mut k: u64) -> Element {
        let mut base = a.clone();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Image of `w` under the homomorphism x -> g, y -> h.
    pub fn evaluate(&self, w: &Word, g: &Element, h: &Element) -> Element {
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        let table = [g, &gi, h, &hi];
        let mut acc = self.identity();
        for &letter in w.letters() {
            acc = self.mul(&acc, table[letter as usize]);
        }
        acc
    }

    /// Minimal k >= 1 with g^k = 1.
    pub fn element_order(&self, g: &Element) -> u64 {
        match g {
            Element::Perm(p) => p.order(),
            Element::Mat(_) => {
                let id = self.identity();
                let mut acc = g.clone();
                let mut k = 1u64;
                while acc != id {
                    acc = self.mul(&acc, g);
                    k += 1;
                    assert!(k <= 10_000_000, "element order runaway in {}", self.spec);
                }
                k
            }
        }
    }

    /// All elements, breadth-first from the identity in generator order.
    /// The result is cached; the order of the returned slice is deterministic.
    pub fn enumerate(&self) -> Result<&[Element], GroupError> {
        self.enumerate_capped(ENUMERATION_CEILING)
    }

    pub fn enumerate_capped(&self, ceiling: u64) -> Result<&[Element], GroupError> {
        if let Some(els) = self.elements.get() {
            return Ok(els);
        }
        if !matches!(self.spec, GroupSpec::PermGenerated { .. }) && self.order()? > ceiling {
            return Err(GroupError::CeilingExceeded { ceiling });
        }
        let els = self.closure_capped(&self.generators(), ceiling)?;
        Ok(self.elements.get_or_init(|| els))
    }

    /// Subgroup generated by `gens`, breadth-first, identity first.
    pub fn closure(&self, gens: &[Element]) -> Result<Vec<Element>, GroupError> {
        self.closure_capped(gens, ENUMERATION_CEILING)
    }

    pub fn closure_capped(&self, gens: &[Element], ceiling: u64) -> Result<Vec<Element>, GroupError> {
        let identity = self.identity();
        let mut discovered = vec![identity.clone()];
        let mut seen: HashSet<Element> = HashSet::new();
        seen.insert(identity);
        let mut head = 0;
        while head < discovered.len() {
            let current = discovered[head].clone();
            head += 1;
            for g in gens {
                let next = self.mul(&current, g);
                if seen.insert(next.clone()) {
                    if discovered.len() as u64 >= ceiling {
                        return Err(GroupError::CeilingExceeded { ceiling });
                    }
                    discovered.push(next);
                }
            }
        }
        Ok(discovered)
    }

    /// Whether the pair (g, h) generates the whole group.
    pub fn generates(&self, g: &Element, h: &Element) -> Result<bool, GroupError> {
        let closure = self.closure(&[g.clone(), h.clone()])?;
        Ok(closure.len() as u64 == self.order()?)
    }

    /// Exact set of element orders, by full enumeration.
    pub fn order_set(&self) -> Result<BTreeSet<u64>, GroupError> {
        let mut orders = BTreeSet::new();
        for g in self.enumerate()? {
            orders.insert(self.element_order(g));
        }
        Ok(orders)
    }

    /// The group exponent: lcm of all element orders.
    pub fn exponent(&self) -> Result<u64, GroupError> {
        Ok(self.order_set()?.into_iter().fold(1, lcm))
    }

    /// Whether some SL(2) lift of `g` fixes a point of the projective line,
    /// i.e. whether `g` lies in a Borel subgroup of PSL(2, q).
    ///
    /// For odd q this is the discriminant test: trace t of a lift has
    /// t^2 - 4 a square (sign of the lift is irrelevant). In characteristic 2
    /// the discriminant degenerates, and the characteristic polynomial
    /// x^2 + tx + 1 has a root exactly when t = 0 or Tr(1/t^2) = 0.
    pub fn in_borel(&self, g: &Element) -> bool {
        let (ctx, m) = self.psl2_element(g, "in_borel");
        let f = &ctx.field;
        let t = ctx.trace(m);
        if f.p == 2 {
            t == 0 || f.absolute_trace(f.inv(f.mul(t, t))) == 0
        } else {
            let disc = f.sub(f.mul(t, t), f.from_int(4));
            f.is_square(disc)
        }
    }

    /// Whether lifts of `g` and `h` share an eigenvector over GF(q): the pair
    /// lies in a common Borel subgroup of PSL(2, q).
    pub fn common_borel(&self, g: &Element, h: &Element) -> bool {
        let (ctx, a) = self.psl2_element(g, "common_borel");
        let (_, b) = self.psl2_element(h, "common_borel");
        ctx.projective_fixed_points(a)
            .into_iter()
            .any(|p| ctx.apply_point(b, p) == p)
    }

    fn psl2_element<'a>(&'a self, g: &'a Element, what: &str) -> (&'a MatCtx, &'a ProjMat) {
        match (&self.spec, &self.backend, g) {
            (GroupSpec::Psl2(_), Backend::Mats { ctx, .. }, Element::Mat(m)) => (ctx, m),
            _ => panic!("{what} is defined on elements of PSL(2, q), not {}", self.spec),
        }
    }
}

fn perm_degree(spec: &GroupSpec, value: u32, min: u32) -> Result<usize, GroupError> {
    if value < min || value > MAX_PERM_DEGREE {
        return Err(GroupError::BadParameter(spec.to_string()));
    }
    Ok(value as usize)
}

fn full_cycle(k: usize) -> Perm {
    Perm::new((0..k).map(|i| ((i + 1) % k) as u8).collect())
}

fn transposition(k: usize) -> Perm {
    let mut map: Vec<u8> = (0..k as u8).collect();
    map.swap(0, 1);
    Perm::new(map)
}

fn three_cycle(k: usize) -> Perm {
    let mut map: Vec<u8> = (0..k as u8).collect();
    map[0] = 1;
    map[1] = 2;
    map[2] = 0;
    Perm::new(map)
}

/// The cycle (1, 2, ..., k-1) fixing point 0; even when k is even.
fn cycle_fixing_zero(k: usize) -> Perm {
    let mut map = vec![0u8];
    for i in 1..k {
        map.push(if i + 1 < k { (i + 1) as u8 } else { 1 });
    }
    Perm::new(map)
}

fn reflection(m: usize) -> Perm {
    Perm::new((0..m).map(|i| ((m - i) % m) as u8).collect())
}

pub fn factorial(k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for i in 2..=k as u64 {
        acc = acc.checked_mul(i)?;
    }
    Some(acc)
}

/// |PSL(2, q)| = q(q^2 - 1) / gcd(2, q - 1).
pub fn psl2_order(q: u64) -> u64 {
    q * (q * q - 1) / gcd(2, q - 1)
}

/// |PSL(3, q)| = q^3 (q^3 - 1)(q^2 - 1) / gcd(3, q - 1).
pub fn psl3_order(q: u64) -> u64 {
    q * q * q * (q * q * q - 1) * (q * q - 1) / gcd(3, q - 1)
}

/// |PSU(3, q)| = q^3 (q^3 + 1)(q^2 - 1) / gcd(3, q + 1).
pub fn psu3_order(q: u64) -> u64 {
    q * q * q * (q * q * q + 1) * (q * q - 1) / gcd(3, q + 1)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{X, Y};

    fn group(text: &str) -> Group {
        Group::new(&text.parse().unwrap()).unwrap()
    }

    #[test]
    fn family_orders_match_enumeration() {
        let cases = [
            ("Sym:1", 1),
            ("Sym:2", 2),
            ("Sym:3", 6),
            ("Sym:4", 24),
            ("Sym:5", 120),
            ("Sym:6", 720),
            ("Alt:3", 3),
            ("Alt:4", 12),
            ("Alt:5", 60),
            ("Alt:6", 360),
            ("Alt:7", 2520),
            ("Cyclic:1", 1),
            ("Cyclic:2", 2),
            ("Cyclic:5", 5),
            ("Cyclic:12", 12),
            ("Dihedral:3", 6),
            ("Dihedral:4", 8),
            ("Dihedral:6", 12),
            ("Dihedral:12", 24),
        ];
        for (text, expected) in cases {
            let g = group(text);
            assert_eq!(g.order().unwrap(), expected, "{text}");
            assert_eq!(g.enumerate().unwrap().len() as u64, expected, "{text}");
        }
    }

    #[test]
    fn projective_group_orders_match_formulas() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let g = group(&format!("PSL2:{q}"));
            assert_eq!(g.enumerate().unwrap().len() as u64, g.order().unwrap(), "PSL2:{q}");
        }
        for q in [2u32, 3] {
            let g = group(&format!("PSL3:{q}"));
            assert_eq!(g.enumerate().unwrap().len() as u64, g.order().unwrap(), "PSL3:{q}");
        }
        let g = group("PSU3:3");
        assert_eq!(g.order().unwrap(), 6048);
        assert_eq!(g.enumerate().unwrap().len(), 6048);
    }

    #[test]
    fn bundled_groups_have_documented_orders() {
        let expected = [
            ("M11", 7920),
            ("M12", 95040),
            ("PSU4_2", 25920),
            ("Sz8", 29120),
        ];
        for (name, order) in expected {
            let g = group(&format!("Perm:{name}"));
            assert_eq!(g.order().unwrap(), order, "{name}");
        }
        let sz8 = group("Perm:Sz8");
        let orders: Vec<u64> = sz8.order_set().unwrap().into_iter().collect();
        assert_eq!(orders, vec![1, 2, 4, 5, 7, 13]);
        let m11 = group("Perm:M11");
        let orders: Vec<u64> = m11.order_set().unwrap().into_iter().collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 5, 6, 8, 11]);
    }

    #[test]
    fn evaluate_is_homomorphic() {
        let cyclic = group("Cyclic:12");
        let commutator = Word::generator(X).commutator(&Word::generator(Y));
        for g in cyclic.enumerate().unwrap() {
            for h in cyclic.enumerate().unwrap() {
                assert_eq!(cyclic.evaluate(&commutator, g, h), cyclic.identity());
            }
        }

        let sym3 = group("Sym:3");
        let cube: Word = "x^3".parse().unwrap();
        let three_cycle = Element::Perm(Perm::parse_cycles("(1,2,3)", 3).unwrap());
        let id = sym3.identity();
        assert_eq!(sym3.evaluate(&cube, &three_cycle, &id), id);

        let psl = group("PSL2:5");
        let els = psl.enumerate().unwrap();
        let u: Word = "xYx^2y".parse().unwrap();
        let v: Word = "y^2Xy".parse().unwrap();
        let uv = u.concat(&v);
        for (g, h) in [(&els[3], &els[17]), (&els[10], &els[42]), (&els[58], &els[5])] {
            let lhs = psl.evaluate(&uv, g, h);
            let rhs = psl.mul(&psl.evaluate(&u, g, h), &psl.evaluate(&v, g, h));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn double_commutator_vanishes_on_triangular_pairs_of_psl2_5() {
        let a = Word::generator(X);
        let b = Word::generator(Y);
        let w = a.commutator(&b).commutator(&b.commutator(&a.inverse()));
        assert_eq!(w.len(), 14);

        let psl = group("PSL2:5");
        let triangular: Vec<Element> = psl
            .enumerate()
            .unwrap()
            .iter()
            .filter(|e| matches!(e, Element::Mat(m) if m.entries[2] == 0))
            .cloned()
            .collect();
        assert_eq!(triangular.len(), 10);
        for g in &triangular {
            for h in &triangular {
                assert_eq!(psl.evaluate(&w, g, h), psl.identity());
            }
        }
    }

    #[test]
    fn element_orders_and_exponents() {
        let sym5 = group("Sym:5");
        let five_cycle = Element::Perm(Perm::parse_cycles("(1,2,3,4,5)", 5).unwrap());
        assert_eq!(sym5.element_order(&five_cycle), 5);

        let psl7 = group("PSL2:7");
        let ctx = psl7.matrix_context().unwrap();
        let unipotent = Element::Mat(ctx.make([1, 1, 0, 1, 0, 0, 0, 0, 0]));
        assert_eq!(psl7.element_order(&unipotent), 7);
        let orders: Vec<u64> = psl7.order_set().unwrap().into_iter().collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 7]);

        let psl3_2 = group("PSL3:2");
        let orders: Vec<u64> = psl3_2.order_set().unwrap().into_iter().collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 7]);

        for k in 1..=8u32 {
            let sym = group(&format!("Sym:{k}"));
            let expected = (1..=k as u64).fold(1, lcm);
            assert_eq!(sym.exponent().unwrap(), expected, "Sym:{k}");
        }
    }

    #[test]
    fn in_borel_matches_fixed_point_search() {
        for q in [3u32, 4, 5, 7, 8, 11] {
            let g = group(&format!("PSL2:{q}"));
            let ctx = g.matrix_context().unwrap();
            for e in g.enumerate().unwrap() {
                let Element::Mat(m) = e else { unreachable!() };
                let has_fixed_point = !ctx.projective_fixed_points(m).is_empty();
                assert_eq!(g.in_borel(e), has_fixed_point, "q={q}, element {e}");
            }
        }

        let psl7 = group("PSL2:7");
        let ctx = psl7.matrix_context().unwrap();
        let rotation = Element::Mat(ctx.make([0, 1, 6, 0, 0, 0, 0, 0, 0]));
        assert_eq!(ctx.trace(match &rotation {
            Element::Mat(m) => m,
            _ => unreachable!(),
        }), 0);
        assert!(!psl7.in_borel(&rotation));
    }

    #[test]
    fn borel_fraction_is_at_least_half() {
        for q in [5u32, 7, 11, 13] {
            let g = group(&format!("PSL2:{q}"));
            let els = g.enumerate().unwrap();
            let inside = els.iter().filter(|e| g.in_borel(e)).count();
            assert!(
                2 * inside >= els.len(),
                "PSL2:{q}: {inside} of {} in a Borel",
                els.len()
            );
        }
    }

    #[test]
    fn common_borel_symmetry_and_commutator_trace() {
        let psl3 = group("PSL2:3");
        let els = psl3.enumerate().unwrap();
        for g in els {
            for h in els {
                assert_eq!(psl3.common_borel(g, h), psl3.common_borel(h, g));
            }
            assert_eq!(psl3.common_borel(g, g), psl3.in_borel(g));
        }

        let psl5 = group("PSL2:5");
        let ctx = psl5.matrix_context().unwrap();
        let f = &ctx.field;
        let two = f.from_int(2);
        let minus_two = f.neg(two);
        let els = psl5.enumerate().unwrap();
        for g in els {
            for h in els {
                if psl5.common_borel(g, h) {
                    let (Element::Mat(a), Element::Mat(b)) = (g, h) else { unreachable!() };
                    let comm = ctx.mul(&ctx.mul(&ctx.inverse(a), &ctx.inverse(b)), &ctx.mul(a, b));
                    let t = ctx.trace(&comm);
                    assert!(t == two || t == minus_two, "commutator trace {t}");
                }
            }
        }

        let diag = Element::Mat(ctx.make([2, 0, 0, 3, 0, 0, 0, 0, 0]));
        let unipotent = Element::Mat(ctx.make([1, 1, 0, 1, 0, 0, 0, 0, 0]));
        assert!(psl5.common_borel(&diag, &unipotent));
    }

    #[test]
    fn generates_detects_generating_pairs() {
        let psl5 = group("PSL2:5");
        let id = psl5.identity();
        assert!(!psl5.generates(&id, &id).unwrap());

        let gens = psl5.generators();
        assert!(psl5.generates(&gens[0], &gens[1]).unwrap());

        let ctx = psl5.matrix_context().unwrap();
        let diag = Element::Mat(ctx.make([2, 0, 0, 3, 0, 0, 0, 0, 0]));
        let unipotent = Element::Mat(ctx.make([1, 1, 0, 1, 0, 0, 0, 0, 0]));
        assert!(!psl5.generates(&diag, &unipotent).unwrap());
    }

    #[test]
    fn spec_text_round_trips() {
        for text in [
            "Sym:5", "Alt:7", "Cyclic:12", "Dihedral:12", "PSL2:7", "PSL3:3", "PSU3:3",
            "Perm:M11",
        ] {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        for bad in ["Sym", "Sym:x", "Foo:3", "Perm:Nope", "", ":4"] {
            assert!(bad.parse::<GroupSpec>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn closure_edge_cases() {
        let sym4 = group("Sym:4");
        let only_identity = sym4.closure(&[sym4.identity()]).unwrap();
        assert_eq!(only_identity, vec![sym4.identity()]);

        let sym12 = group("Sym:12");
        match sym12.enumerate_capped(1000) {
            Err(GroupError::CeilingExceeded { ceiling: 1000 }) => {}
            other => panic!("expected ceiling error, got {other:?}"),
        }
    }
}
