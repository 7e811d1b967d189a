//! End-to-end law constructions: one word for all simple groups up to an
//! order bound, the randomized PSL(2) family word, the PSL(3)/PSU(3) family
//! word, and the layered word covering every 2-generated group up to the
//! bound.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::catalog::{catalog_entries, simple_catalog, CATALOG_CEILING};
use crate::field::factor_prime_power;
use crate::group::{psl2_order, psl3_order, psu3_order, Group, GroupError, GroupSpec};
use crate::laws::{
    extension_law, metabelian_law, order_divisor_law, power_law, psl2_order_law,
    psl3_psu3_order_law, solvable_law, substitution_law, union_of_traces, LawError, LawTrace,
};
use crate::word::{random_walk, WalkKind, WalkParams, Word};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("order bound must be at least 1")]
    BadBound,
    #[error("{0} is not prime, so it cannot be a bad prime")]
    BadPrime(u64),
    #[error("walk pair {pair} kept commuting after {limit} resampling attempts")]
    RetryLimitExhausted { pair: u64, limit: u32 },
    #[error("order bound {n} exceeds the catalog ceiling {ceiling}")]
    CeilingExceeded { n: u64, ceiling: u64 },
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Tunable knobs for the randomized constructions.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub n: u64,
    /// Walk length factor: l = ceil(c1 ln n).
    pub c1: f64,
    /// Pair count factor: m = ceil(c4 n^(1/3) ln n).
    pub c4: f64,
    pub seed: u64,
    /// Primes whose PSL(2, p) should be handled by an order law rather than
    /// by sampling.
    pub bad_primes: Vec<u64>,
    pub retry_limit: u32,
}

impl PipelineParams {
    pub fn new(n: u64) -> PipelineParams {
        PipelineParams { n, c1: 8.0, c4: 4.0, seed: 0, bad_primes: Vec::new(), retry_limit: 64 }
    }

    pub fn walk_length(&self) -> u64 {
        (self.c1 * (self.n as f64).ln()).ceil().max(1.0) as u64
    }

    pub fn pair_count(&self) -> u64 {
        (self.c4 * (self.n as f64).powf(1.0 / 3.0) * (self.n as f64).ln()).ceil().max(1.0) as u64
    }
}

/// A constructed law together with the groups it claims to cover.
#[derive(Clone, Debug)]
pub struct FamilyLaw {
    pub trace: LawTrace,
    pub scope: Vec<GroupSpec>,
}

/// How much resampling the walk-based construction needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingReport {
    pub walk_length: u64,
    pub pair_count: u64,
    pub rejected_attempts: u64,
}

/// Breakpoints a_1 < ... < a_{L+1} with a_1 = 1 following the recurrence
/// a_{k+1} = exp(a_k^(4/27)).
///
/// The raw recurrence has an attracting fixed point near 3.2996, so it is
/// cut off once relative growth drops below 1%, and the final breakpoint is
/// forced to n+1 so the last layer admits every solvable radical of order
/// up to n.
pub fn layer_schedule(n: u64) -> Vec<f64> {
    let mut bps = vec![1.0f64];
    loop {
        let last = *bps.last().expect("non-empty");
        let next = last.powf(4.0 / 27.0).exp();
        if next > n as f64 || next < 1.01 * last {
            break;
        }
        bps.push(next);
    }
    bps.push((n + 1) as f64);
    bps
}

/// Order-divisor law covering every catalog simple group of order <= n that
/// is not PSL(2), PSL(3) or PSU(3) in disguise. `None` when no such group
/// exists.
pub fn simple_non_special_law(n: u64) -> Result<Option<FamilyLaw>, PipelineError> {
    if n > CATALOG_CEILING {
        return Err(PipelineError::CeilingExceeded { n, ceiling: CATALOG_CEILING });
    }
    let mut scope = Vec::new();
    let mut orders: BTreeSet<u64> = BTreeSet::new();
    for entry in catalog_entries(n)? {
        if entry.special_linear {
            continue;
        }
        let group = Group::new(&entry.spec)?;
        orders.extend(group.order_set()?);
        scope.push(entry.spec);
    }
    if scope.is_empty() {
        return Ok(None);
    }
    let mut trace = order_divisor_law(&orders)?;
    trace.scope = format!("non-special simple groups of order <= {n} by element orders");
    Ok(Some(FamilyLaw { trace, scope }))
}

/// Union of element-order laws for every PSL(3, q) and PSU(3, q) of order
/// <= n. `None` when the scope is empty (n < 168).
pub fn psl3_family_law(n: u64) -> Result<Option<FamilyLaw>, PipelineError> {
    let mut scope = Vec::new();
    let mut parts = Vec::new();
    let mut q = 2u64;
    // Divided by the largest possible center, the order formulas are
    // monotone in q, which justifies the break.
    while q * q * q * (q * q * q - 1) * (q * q - 1) / 3 <= n || q < 4 {
        if factor_prime_power(q).is_some() {
            if psl3_order(q) <= n {
                scope.push(GroupSpec::Psl3(q as u32));
                parts.push(psl3_psu3_order_law(q, false)?);
            }
            // PSU(3, 2) is solvable, not simple; the family starts at 3.
            if q >= 3 && psu3_order(q) <= n {
                scope.push(GroupSpec::Psu3(q as u32));
                parts.push(psl3_psu3_order_law(q, true)?);
            }
        }
        q += 1;
    }
    if parts.is_empty() {
        return Ok(None);
    }
    let mut trace = union_of_traces(parts)?;
    trace.scope = format!("PSL(3)/PSU(3) groups of order <= {n} by element orders");
    scope.sort_by_key(|s| (order_of(s), s.to_string()));
    Ok(Some(FamilyLaw { trace, scope }))
}

fn order_of(spec: &GroupSpec) -> u64 {
    match spec {
        GroupSpec::Psl2(q) => psl2_order(*q as u64),
        GroupSpec::Psl3(q) => psl3_order(*q as u64),
        GroupSpec::Psu3(q) => psu3_order(*q as u64),
        _ => 0,
    }
}

/// Prime powers q with 60 <= |PSL(2, q)| <= n, ascending.
pub fn psl2_scope(n: u64) -> Vec<u64> {
    let mut qs = Vec::new();
    let mut q = 4u64;
    while q * (q * q - 1) / 2 <= n {
        if factor_prime_power(q).is_some() && psl2_order(q) <= n {
            qs.push(q);
        }
        q += 1;
    }
    qs
}

/// The randomized PSL(2) family law: substituted double commutators over
/// sampled walk pairs, the Dickson branch for proper subgroups, and order
/// laws for proper prime powers and configured bad primes.
///
/// `None` when no PSL(2, q) has order in [60, n].
pub fn psl2_family_law(
    params: &PipelineParams,
) -> Result<Option<(FamilyLaw, SamplingReport)>, PipelineError> {
    let qs = psl2_scope(params.n);
    if qs.is_empty() {
        return Ok(None);
    }
    for &p in &params.bad_primes {
        if factor_prime_power(p).map(|(_, e)| e) != Some(1) {
            return Err(PipelineError::BadPrime(p));
        }
    }

    let l = params.walk_length();
    let m = params.pair_count();
    let mut rejected = 0u64;
    let mut gen_leaves = Vec::with_capacity(m as usize);
    for i in 0..m {
        let mut leaf = None;
        for attempt in 0..=params.retry_limit {
            let base = 2 * (attempt as u64 * m + i);
            let walk = |stream| {
                random_walk(
                    &WalkParams { kind: WalkKind::Lazy, length: l, seed: params.seed },
                    stream,
                )
            };
            let u = walk(base);
            let v = walk(base + 1);
            if u.is_trivial() || v.is_trivial() || u.commutes(&v) {
                rejected += 1;
                continue;
            }
            match substitution_law(metabelian_law(), u, v) {
                Ok(mut t) => {
                    t.scope = format!("sampled walk pair {i} lands in a solvable subgroup");
                    leaf = Some(t);
                    break;
                }
                Err(_) => {
                    rejected += 1;
                    continue;
                }
            }
        }
        let leaf = leaf.ok_or(PipelineError::RetryLimitExhausted {
            pair: i,
            limit: params.retry_limit,
        })?;
        gen_leaves.push(leaf);
    }
    let mut w_gen = union_of_traces(gen_leaves)?;
    w_gen.scope = "generating pairs via sampled walk words".to_string();

    let mut w_sub = union_of_traces(vec![metabelian_law(), power_law(60)?])?;
    w_sub.scope = "proper subgroups (metabelian or of order <= 60)".to_string();

    let mut w_bad_parts = Vec::new();
    for &q in &qs {
        let proper_power = factor_prime_power(q).map(|(_, e)| e).unwrap_or(1) > 1;
        if proper_power || params.bad_primes.contains(&q) {
            w_bad_parts.push(psl2_order_law(q)?);
        }
    }

    let mut components = vec![w_gen, w_sub];
    if !w_bad_parts.is_empty() {
        let mut w_bad = union_of_traces(w_bad_parts)?;
        w_bad.scope = "proper prime powers and bad primes by element orders".to_string();
        components.push(w_bad);
    }
    let mut trace = union_of_traces(components)?;
    trace.scope = format!("PSL(2, q) of order <= {}", params.n);

    let scope = qs.iter().map(|&q| GroupSpec::Psl2(q as u32)).collect();
    let report =
        SamplingReport { walk_length: l, pair_count: m, rejected_attempts: rejected };
    Ok(Some((FamilyLaw { trace, scope }, report)))
}

/// One word for every simple group of order <= n, with the sampling report
/// of its PSL(2) component when that component exists.
pub struct AllSimpleLaw {
    pub family: FamilyLaw,
    pub sampling: Option<SamplingReport>,
}

pub fn all_simple_law(params: &PipelineParams) -> Result<AllSimpleLaw, PipelineError> {
    if params.n > CATALOG_CEILING {
        return Err(PipelineError::CeilingExceeded { n: params.n, ceiling: CATALOG_CEILING });
    }
    let mut parts = Vec::new();
    if let Some(fam) = simple_non_special_law(params.n)? {
        parts.push(fam.trace);
    }
    if let Some(fam) = psl3_family_law(params.n)? {
        parts.push(fam.trace);
    }
    let mut sampling = None;
    if let Some((fam, report)) = psl2_family_law(params)? {
        parts.push(fam.trace);
        sampling = Some(report);
    }
    let trace = if parts.is_empty() {
        degenerate_law()?
    } else {
        let mut t = union_of_traces(parts)?;
        t.scope = format!("simple groups of order <= {}", params.n);
        t
    };
    let scope = simple_catalog(params.n)?;
    Ok(AllSimpleLaw { family: FamilyLaw { trace, scope }, sampling })
}

/// Placeholder law for an empty scope: the single generator, a law for
/// the trivial group alone.
pub fn degenerate_law() -> Result<LawTrace, PipelineError> {
    Ok(LawTrace::atom(Word::generator(crate::word::X), "trivial group")?)
}

/// Element orders of Sym(k), as lcms over the partitions of k. Agrees with
/// enumeration but needs none, so it scales to k ~ 16.
pub fn sym_order_set(k: u32) -> BTreeSet<u64> {
    fn rec(remaining: u64, min_part: u64, acc: u64, out: &mut BTreeSet<u64>) {
        if remaining == 0 {
            out.insert(acc);
            return;
        }
        for part in min_part..=remaining {
            rec(remaining - part, part, num_lcm(acc, part), out);
        }
    }
    let mut out = BTreeSet::new();
    rec(k as u64, 1, 1, &mut out);
    out
}

fn num_lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Law for the semisimple groups of order <= m: the simple-groups word,
/// extended by a derived-length-3 layer for outer automorphisms, extended by
/// an element-order layer for the permutation action on <= log2(m) socle
/// factors.
fn semisimple_law(m: u64, params: &PipelineParams) -> Result<LawTrace, PipelineError> {
    let inner = PipelineParams { n: m, ..params.clone() };
    let simple = all_simple_law(&inner)?.family.trace;
    let schreier = extension_law(simple, solvable_law(3)?)?;
    let k = if m >= 2 { 63 - (m | 1).leading_zeros() } else { 0 };
    let wrap = order_divisor_law(&sym_order_set(k))?;
    Ok(extension_law(schreier, wrap)?)
}

#[derive(Clone, Debug)]
pub struct LayerReport {
    pub lower: f64,
    pub upper: f64,
    pub solvable_depth: u32,
    pub semisimple_bound: u64,
    pub word_len: usize,
}

/// The layered all-groups construction and its outcome.
pub struct AllGroupsLaw {
    /// The shorter of the layered word and the exponent shortcut.
    pub trace: LawTrace,
    pub layered: LawTrace,
    pub shortcut_used: bool,
    pub layers: Vec<LayerReport>,
}

/// A law for every 2-generated group of order <= n.
///
/// Each layer j pairs a solvable-radical bound a_{j+1} (the kernel side)
/// with a semisimple quotient bound n/a_j; their union covers all radical
/// sizes in [1, n]. When lcm(1..n) is small enough that the plain exponent
/// word x^lcm is shorter than the layered word, that shortcut is returned
/// instead, with the layered word still available.
pub fn all_groups_law(params: &PipelineParams) -> Result<AllGroupsLaw, PipelineError> {
    let n = params.n;
    if n == 0 {
        return Err(PipelineError::BadBound);
    }
    if n > CATALOG_CEILING {
        return Err(PipelineError::CeilingExceeded { n, ceiling: CATALOG_CEILING });
    }
    if n == 1 {
        let trace = degenerate_law()?;
        return Ok(AllGroupsLaw {
            trace: trace.clone(),
            layered: trace,
            shortcut_used: false,
            layers: Vec::new(),
        });
    }

    let bps = layer_schedule(n);
    let mut layers = Vec::new();
    let mut layer_traces = Vec::new();
    for j in 0..bps.len() - 1 {
        let lower = bps[j];
        let upper = bps[j + 1];
        let depth = (upper.log2().floor() as u32) + 1;
        let ss_bound = (n as f64 / lower).floor() as u64;
        let kernel = solvable_law(depth)?;
        let quotient = semisimple_law(ss_bound, params)?;
        let layer = extension_law(kernel, quotient)?;
        layers.push(LayerReport {
            lower,
            upper,
            solvable_depth: depth,
            semisimple_bound: ss_bound,
            word_len: layer.word.len(),
        });
        layer_traces.push(layer);
    }
    let mut layered = union_of_traces(layer_traces)?;
    layered.scope = format!("2-generated groups of order <= {n}");

    let shortcut = checked_lcm_to(n).map(power_law).transpose()?;
    let (trace, shortcut_used) = match shortcut {
        Some(short) if (short.word.len() as u64) < layered.word.len() as u64 => (short, true),
        _ => (layered.clone(), false),
    };
    Ok(AllGroupsLaw { trace, layered, shortcut_used, layers })
}

/// lcm(1..=n) when it fits in u64.
fn checked_lcm_to(n: u64) -> Option<u64> {
    let mut acc: u128 = 1;
    for k in 2..=n as u128 {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        acc = acc / gcd(acc, k) * k;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

#[derive(Clone, Debug)]
pub struct RfBoundRow {
    pub n: u64,
    pub word: Word,
    pub word_length: usize,
    /// The residual-finiteness reading: F(word_length) >= n + 1.
    pub implied_bound: u64,
}

/// Word lengths of the all-groups law across a range of n, each implying a
/// pointwise lower bound on residual-finiteness growth.
pub fn rf_lower_bound_report(
    n_range: &[u64],
    params: &PipelineParams,
) -> Result<Vec<RfBoundRow>, PipelineError> {
    n_range
        .iter()
        .map(|&n| {
            let out = all_groups_law(&PipelineParams { n, ..params.clone() })?;
            Ok(RfBoundRow {
                n,
                word_length: out.trace.word.len(),
                word: out.trace.word,
                implied_bound: n + 1,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::LawKind;
    use crate::verify::{verify_trace, verify_trace_with};

    fn group(text: &str) -> Group {
        Group::new(&text.parse::<GroupSpec>().unwrap()).unwrap()
    }

    fn scope_texts(fam: &FamilyLaw) -> Vec<String> {
        fam.scope.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn layer_schedule_matches_the_recurrence() {
        let bps = layer_schedule(12);
        assert_eq!(bps.len(), 5);
        assert_eq!(bps[0], 1.0);
        assert!((bps[1] - std::f64::consts::E).abs() < 1e-12);
        assert!((bps[2] - 3.1889276129083863).abs() < 1e-9);
        assert!((bps[3] - 3.2786981029274362).abs() < 1e-9);
        assert_eq!(bps[4], 13.0);

        assert_eq!(layer_schedule(2), vec![1.0, 3.0]);
        assert_eq!(layer_schedule(3).len(), 3);
        // The iterated-log growth shows up as a constant layer count over
        // many decades of n.
        for n in [6, 660, 1092, 100_000] {
            let bps = layer_schedule(n);
            assert_eq!(bps.len() - 1, 4, "n = {n}");
            assert!(bps.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(*bps.last().unwrap(), (n + 1) as f64);
        }
    }

    #[test]
    fn walk_parameters_match_frozen_values() {
        let p = PipelineParams::new(1092);
        assert_eq!((p.walk_length(), p.pair_count()), (56, 289));
        let p = PipelineParams::new(660);
        assert_eq!((p.walk_length(), p.pair_count()), (52, 227));
        let p = PipelineParams::new(60);
        assert_eq!((p.walk_length(), p.pair_count()), (33, 65));
    }

    #[test]
    fn non_special_scope_is_empty_below_alt7() {
        assert!(simple_non_special_law(59).unwrap().is_none());
        assert!(simple_non_special_law(100).unwrap().is_none());
        assert!(simple_non_special_law(2519).unwrap().is_none());
    }

    #[test]
    fn non_special_law_covers_alt7() {
        let fam = simple_non_special_law(3000).unwrap().unwrap();
        assert_eq!(scope_texts(&fam), ["Alt:7"]);
        let alt7 = group("Alt:7");
        assert_eq!(alt7.order_set().unwrap(), (1..=7).collect());
        let record = verify_trace_with(&alt7, &fam.trace, 0, 40_000).unwrap();
        assert!(record.passed());
    }

    #[test]
    fn psl3_family_scopes_and_verification() {
        assert!(psl3_family_law(167).unwrap().is_none());
        let fam = psl3_family_law(5615).unwrap().unwrap();
        assert_eq!(scope_texts(&fam), ["PSL3:2"]);
        let fam = psl3_family_law(6048).unwrap().unwrap();
        assert_eq!(scope_texts(&fam), ["PSL3:2", "PSL3:3", "PSU3:3"]);
        let record = verify_trace(&group("PSL3:2"), &fam.trace, 0).unwrap();
        assert_eq!(record.pairs_checked, 168 * 168);
        assert!(record.passed());
        let record = verify_trace_with(&group("PSL3:3"), &fam.trace, 0, 25_000).unwrap();
        assert!(record.passed());
    }

    #[test]
    fn psl2_family_small_bound() {
        let params = PipelineParams::new(60);
        let (fam, report) = psl2_family_law(&params).unwrap().unwrap();
        assert_eq!(scope_texts(&fam), ["PSL2:4", "PSL2:5"]);
        assert_eq!(report.walk_length, 33);
        assert_eq!(report.pair_count, 65);
        for spec in &fam.scope {
            let record = verify_trace(&Group::new(spec).unwrap(), &fam.trace, 0).unwrap();
            assert!(record.passed(), "{spec}");
            assert!(record
                .branch_hits
                .iter()
                .any(|(label, hits)| label.contains("exponent dividing") && *hits > 0));
        }

        let again = psl2_family_law(&params).unwrap().unwrap();
        assert_eq!(again.0.trace.word, fam.trace.word, "construction is deterministic");

        assert!(psl2_family_law(&PipelineParams::new(59)).unwrap().is_none());
    }

    #[test]
    fn psl2_walk_leaves_never_commute() {
        let params = PipelineParams::new(660);
        let (fam, report) = psl2_family_law(&params).unwrap().unwrap();
        assert_eq!(
            scope_texts(&fam),
            ["PSL2:4", "PSL2:5", "PSL2:7", "PSL2:8", "PSL2:9", "PSL2:11"]
        );
        let mut checked = 0;
        let mut stack = vec![&fam.trace];
        while let Some(node) = stack.pop() {
            if let LawKind::Substitution { u, v } = &node.kind {
                assert!(!u.commutes(v));
                checked += 1;
            }
            stack.extend(&node.children);
        }
        assert_eq!(checked, report.pair_count);

        let record = verify_trace(&group("PSL2:7"), &fam.trace, 0).unwrap();
        assert!(record.passed());
        assert_eq!(record.pairs_checked, 168 * 168);
    }

    #[test]
    fn all_simple_scope_at_660() {
        let out = all_simple_law(&PipelineParams::new(660)).unwrap();
        assert_eq!(
            scope_texts(&out.family),
            ["Alt:5", "PSL2:7", "Alt:6", "PSL2:8", "PSL2:11"]
        );
        assert!(out.sampling.is_some());
        let record = verify_trace(&group("Alt:5"), &out.family.trace, 0).unwrap();
        assert!(record.passed());
        for spec in ["Alt:6", "PSL2:8", "PSL2:11"] {
            let record =
                verify_trace_with(&group(spec), &out.family.trace, 0, 15_000).unwrap();
            assert!(record.passed(), "{spec}");
        }

        let degenerate = all_simple_law(&PipelineParams::new(59)).unwrap();
        assert_eq!(degenerate.family.trace.word, Word::generator(crate::word::X));
        assert!(degenerate.family.scope.is_empty());
    }

    #[test]
    fn sym_order_sets_match_enumeration() {
        for k in 2..=7u32 {
            let by_partitions = sym_order_set(k);
            let by_enumeration = group(&format!("Sym:{k}")).order_set().unwrap();
            assert_eq!(by_partitions, by_enumeration, "k = {k}");
        }
        assert_eq!(sym_order_set(0), BTreeSet::from([1]));
        assert_eq!(sym_order_set(16).iter().max(), Some(&140));
    }

    #[test]
    fn all_groups_law_small_bounds() {
        let one = all_groups_law(&PipelineParams::new(1)).unwrap();
        assert_eq!(one.trace.word.to_string(), "x");
        assert!(one.layers.is_empty());

        let two = all_groups_law(&PipelineParams::new(2)).unwrap();
        assert!(two.shortcut_used);
        assert_eq!(two.trace.word.to_string(), "x^2");
        assert_eq!(two.layers.len(), 1);

        let twelve = all_groups_law(&PipelineParams::new(12)).unwrap();
        assert!(twelve.shortcut_used);
        assert_eq!(twelve.trace.word.len(), 27720);
        assert_eq!(twelve.layers.len(), 4);
        assert!(twelve.layered.word.len() > 27720);

        for spec in ["Cyclic:12", "Dihedral:6", "Alt:4"] {
            let g = group(spec);
            let record = verify_trace(&g, &twelve.trace, 0).unwrap();
            assert!(record.passed(), "shortcut on {spec}");
        }
        for spec in ["Cyclic:4", "Dihedral:6"] {
            let g = group(spec);
            let record = verify_trace(&g, &twelve.layered, 0).unwrap();
            assert!(record.passed(), "layered word on {spec}");
        }
    }

    #[test]
    fn rf_report_rows() {
        let rows = rf_lower_bound_report(&[1, 2, 6], &PipelineParams::new(1)).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].word_length >= 1);
        assert_eq!(rows[1].word_length, 2);
        assert_eq!(rows[2].word_length, 60);
        assert_eq!(rows[2].implied_bound, 7);
    }

    #[test]
    fn bad_prime_validation() {
        let mut params = PipelineParams::new(660);
        params.bad_primes = vec![6];
        assert!(matches!(
            psl2_family_law(&params),
            Err(PipelineError::BadPrime(6))
        ));
        params.bad_primes = vec![7];
        let (fam, _) = psl2_family_law(&params).unwrap().unwrap();
        let mut found = false;
        let mut stack = vec![&fam.trace];
        while let Some(node) = stack.pop() {
            if node.scope.contains("PSL(2, 7) by element orders") {
                found = true;
            }
            stack.extend(&node.children);
        }
        assert!(found, "bad prime 7 must add an order-law branch");
    }
}
