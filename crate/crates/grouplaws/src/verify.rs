//! Checks whether a law word vanishes on every pair of a finite group.
//!
//! Evaluation goes through the construction trace rather than the
//! materialized word: a pair is settled as soon as any union-reachable leaf
//! evaluates to the identity there, since a commutator with an identity
//! entry collapses. Only pairs on which every leaf survives need the full
//! tree, and a non-identity root value there is a genuine violation of the
//! law.
//!
//! Exhaustive mode covers all |G|^2 ordered pairs when they fit the budget;
//! otherwise a seeded uniform sample is drawn. Work is split into
//! fixed-size chunks so results are identical for every worker count.

use rayon::prelude::*;

use crate::group::{Group, GroupError};
use crate::laws::LawTrace;
use crate::rng::Stream;

/// Largest |G|^2 still checked pair by pair.
pub const EXHAUSTIVE_PAIR_BUDGET: u64 = 2_000_000;
/// Sample size used above the exhaustive budget.
pub const DEFAULT_SAMPLE_COUNT: u64 = 1_000_000;

const CHUNK: u64 = 8192;
const SAMPLE_LABEL: u64 = 0x7e51_f1ed;
const SAMPLE_SPAN: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl std::fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyMode::Exhaustive => write!(f, "exhaustive"),
            VerifyMode::Sampled { count, .. } => write!(f, "sampled:{count}"),
        }
    }
}

/// Outcome of verifying one law on one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationRecord {
    pub spec: String,
    pub mode: VerifyMode,
    pub pairs_checked: u64,
    pub violations: u64,
    /// Element indices (into the deterministic enumeration) of the first
    /// violating pair, by pair order.
    pub first_witness: Option<(u64, u64)>,
    /// Per-leaf short-circuit counts, labeled by the leaf's scope, in scan
    /// order.
    pub branch_hits: Vec<(String, u64)>,
    /// Pairs where no single leaf vanished but the whole tree still did.
    pub full_tree_passes: u64,
}

impl VerificationRecord {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct ChunkOutcome {
    hits: Vec<u64>,
    violations: u64,
    full_tree_passes: u64,
    first_witness: Option<(u64, u64, u64)>,
}

/// Verifies with the default sample size; see [`verify_trace_with`].
pub fn verify_trace(
    group: &Group,
    trace: &LawTrace,
    seed: u64,
) -> Result<VerificationRecord, GroupError> {
    verify_trace_with(group, trace, seed, DEFAULT_SAMPLE_COUNT)
}

/// Checks the trace against every pair (exhaustively when |G|^2 fits the
/// budget, otherwise `sample_count` seeded draws) and reports violations,
/// the first witness, and which leaves carried the short circuit.
pub fn verify_trace_with(
    group: &Group,
    trace: &LawTrace,
    seed: u64,
    sample_count: u64,
) -> Result<VerificationRecord, GroupError> {
    let order = group.order()?;
    let mode = if order * order <= EXHAUSTIVE_PAIR_BUDGET {
        VerifyMode::Exhaustive
    } else {
        VerifyMode::Sampled { count: sample_count, seed }
    };
    verify_trace_in_mode(group, trace, mode)
}

/// Runs the check in the caller's chosen mode instead of picking one from
/// the pair budget.
pub fn verify_trace_in_mode(
    group: &Group,
    trace: &LawTrace,
    mode: VerifyMode,
) -> Result<VerificationRecord, GroupError> {
    let elements = group.enumerate()?;
    let order = elements.len() as u64;
    let (exhaustive, pair_count, seed) = match &mode {
        VerifyMode::Exhaustive => (true, order * order, 0),
        VerifyMode::Sampled { count, seed } => (false, *count, *seed),
    };

    let mut leaves = trace.scan_leaves();
    leaves.sort_by_key(|leaf| leaf.evaluation_cost());
    let identity = group.identity();
    let sampler = Stream::new(seed, &[SAMPLE_LABEL]);

    let chunk_count = pair_count.div_ceil(CHUNK);
    let outcomes: Vec<ChunkOutcome> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(pair_count);
            let mut out = ChunkOutcome {
                hits: vec![0; leaves.len()],
                violations: 0,
                full_tree_passes: 0,
                first_witness: None,
            };
            for idx in lo..hi {
                let (ai, bi) = if exhaustive {
                    (idx / order, idx % order)
                } else {
                    (
                        sampler.uniform_below(order, 2 * idx, SAMPLE_SPAN),
                        sampler.uniform_below(order, 2 * idx + 1, SAMPLE_SPAN),
                    )
                };
                let a = &elements[ai as usize];
                let b = &elements[bi as usize];
                let hit = leaves
                    .iter()
                    .position(|leaf| leaf.evaluate(group, a, b) == identity);
                match hit {
                    Some(i) => out.hits[i] += 1,
                    None => {
                        if trace.evaluate(group, a, b) == identity {
                            out.full_tree_passes += 1;
                        } else {
                            out.violations += 1;
                            if out.first_witness.is_none() {
                                out.first_witness = Some((idx, ai, bi));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();

    let mut hits = vec![0u64; leaves.len()];
    let mut violations = 0;
    let mut full_tree_passes = 0;
    let mut witness: Option<(u64, u64, u64)> = None;
    for out in outcomes {
        for (total, h) in hits.iter_mut().zip(&out.hits) {
            *total += h;
        }
        violations += out.violations;
        full_tree_passes += out.full_tree_passes;
        if witness.is_none() {
            witness = out.first_witness;
        }
    }

    Ok(VerificationRecord {
        spec: group.spec().to_string(),
        mode,
        pairs_checked: pair_count,
        violations,
        first_witness: witness.map(|(_, a, b)| (a, b)),
        branch_hits: leaves.iter().map(|l| l.scope.clone()).zip(hits).collect(),
        full_tree_passes,
    })
}

/// Verifies a bare word (no trace structure to exploit).
pub fn verify_word(
    group: &Group,
    word: &crate::word::Word,
    seed: u64,
) -> Result<VerificationRecord, GroupError> {
    let trace = LawTrace::atom(word.clone(), "word under test")
        .map_err(|_| GroupError::BadParameter("cannot verify the empty word".to_string()))?;
    verify_trace(group, &trace, seed)
}
