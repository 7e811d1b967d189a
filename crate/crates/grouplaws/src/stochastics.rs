//! Empirical diagnostics for the probabilistic machinery behind the law
//! constructions: hitting probabilities of random walks in finite groups,
//! return rates of free walks, and commuting rates of independent walk
//! pairs. Estimates carry 99% Wilson intervals so checks can demand that
//! the whole interval lies on the claimed side instead of comparing noisy
//! point values.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{Element, Group, GroupError, GroupSpec};
use crate::rng::Stream;
use crate::word::{Word, WalkKind};

/// 99% two-sided normal quantile used by every interval here.
pub const WILSON_Z99: f64 = 2.5758293035489004;

const TRIAL_CHUNK: u64 = 4096;
const GROUP_WALK_LABEL: u64 = 0x9e3d_77ab;
const FREE_WALK_LABEL: u64 = 0x51fe_ca3e;

#[derive(Debug, Error)]
pub enum StochError {
    #[error("the step set does not generate the group")]
    NonGenerating,
    #[error("the step set is not closed under inverses")]
    Asymmetric,
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Wilson score interval at 99% confidence.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = WILSON_Z99 * WILSON_Z99;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (WILSON_Z99 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// A frequency with its interval.
#[derive(Clone, Copy, Debug)]
pub struct HitEstimate {
    pub hits: u64,
    pub trials: u64,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

impl HitEstimate {
    fn new(hits: u64, trials: u64) -> HitEstimate {
        let (wilson_low, wilson_high) = wilson_interval(hits, trials);
        HitEstimate { hits, trials, frequency: hits as f64 / trials as f64, wilson_low, wilson_high }
    }
}

/// The endpoint histogram of `trials` independent random walks of a fixed
/// length, recorded per group element so several predicates can be
/// evaluated against one shared sample.
#[derive(Clone, Debug)]
pub struct WalkSample {
    pub spec: GroupSpec,
    pub walk_length: usize,
    pub trials: u64,
    pub seed: u64,
    counts: Vec<u64>,
}

impl WalkSample {
    /// Runs the walks. Steps are uniform over `steps`; the lazy kind stays
    /// put with probability 1/2. Trials use derived per-trial streams and
    /// aggregate by addition, so the result is seed-deterministic
    /// regardless of how the chunks are scheduled.
    pub fn collect(
        group: &Group,
        steps: &[Element],
        kind: WalkKind,
        walk_length: usize,
        trials: u64,
        seed: u64,
    ) -> Result<WalkSample, StochError> {
        if trials == 0 {
            return Err(StochError::NoTrials);
        }
        for s in steps {
            if !steps.contains(&group.inverse(s)) {
                return Err(StochError::Asymmetric);
            }
        }
        let order = group.order()?;
        if (group.closure(steps)?.len() as u64) < order {
            return Err(StochError::NonGenerating);
        }
        let elements = group.enumerate()?;
        let position: HashMap<&Element, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();

        let span = (walk_length as u64).max(1);
        let step_count = steps.len() as u64;
        let draw_bound = match kind {
            WalkKind::Simple => step_count,
            WalkKind::Lazy => 2 * step_count,
        };
        let chunks = trials.div_ceil(TRIAL_CHUNK);
        let counts = (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut local = vec![0u64; elements.len()];
                let lo = chunk * TRIAL_CHUNK;
                let hi = (lo + TRIAL_CHUNK).min(trials);
                for trial in lo..hi {
                    let stream = Stream::new(seed, &[GROUP_WALK_LABEL, trial]);
                    let mut at = group.identity();
                    for i in 0..walk_length {
                        let v = stream.uniform_below(draw_bound, i as u64, span);
                        let step = match kind {
                            WalkKind::Simple => Some(v),
                            WalkKind::Lazy => v.checked_sub(step_count),
                        };
                        if let Some(s) = step {
                            at = group.mul(&at, &steps[s as usize]);
                        }
                    }
                    local[position[&at]] += 1;
                }
                local
            })
            .reduce(
                || vec![0u64; elements.len()],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        Ok(WalkSample {
            spec: group.spec().clone(),
            walk_length,
            trials,
            seed,
            counts,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Frequency of endpoints satisfying `predicate`, evaluated once per
    /// element class.
    pub fn hit_estimate(
        &self,
        group: &Group,
        predicate: impl Fn(&Group, &Element) -> bool,
    ) -> Result<HitEstimate, StochError> {
        let elements = group.enumerate()?;
        let hits = elements
            .iter()
            .zip(&self.counts)
            .filter(|(e, _)| predicate(group, e))
            .map(|(_, &c)| c)
            .sum();
        Ok(HitEstimate::new(hits, self.trials))
    }

    /// Half the l1 distance between the endpoint distribution and uniform.
    pub fn total_variation_to_uniform(&self) -> f64 {
        let n = self.counts.len() as f64;
        let trials = self.trials as f64;
        0.5 * self.counts.iter().map(|&c| (c as f64 / trials - 1.0 / n).abs()).sum::<f64>()
    }
}

/// The generator pair and its inverses.
pub fn standard_symmetric_set(group: &Group) -> Vec<Element> {
    let mut set = group.generators();
    for g in group.generators() {
        set.push(group.inverse(&g));
    }
    set
}

/// Frequency of lazy-walk endpoints landing in the set cut out by
/// `predicate`.
pub fn hitting_probability(
    group: &Group,
    steps: &[Element],
    predicate: impl Fn(&Group, &Element) -> bool,
    walk_length: usize,
    trials: u64,
    seed: u64,
) -> Result<HitEstimate, StochError> {
    let sample = WalkSample::collect(group, steps, WalkKind::Lazy, walk_length, trials, seed)?;
    sample.hit_estimate(group, predicate)
}

/// Exact endpoint distribution of the walk, by iterating the transition
/// operator on the enumerated elements instead of sampling.
pub fn exact_walk_distribution(
    group: &Group,
    steps: &[Element],
    kind: WalkKind,
    walk_length: usize,
) -> Result<Vec<f64>, StochError> {
    let elements = group.enumerate()?;
    let position: HashMap<&Element, usize> =
        elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let moves: Vec<Vec<usize>> = elements
        .iter()
        .map(|e| steps.iter().map(|s| position[&group.mul(e, s)]).collect())
        .collect();

    let identity = position[&group.identity()];
    let mut dist = vec![0.0f64; elements.len()];
    dist[identity] = 1.0;
    let (stay, move_weight) = match kind {
        WalkKind::Simple => (0.0, 1.0 / steps.len() as f64),
        WalkKind::Lazy => (0.5, 0.5 / steps.len() as f64),
    };
    for _ in 0..walk_length {
        let mut next = vec![0.0f64; elements.len()];
        for (i, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            next[i] += stay * p;
            for &j in &moves[i] {
                next[j] += move_weight * p;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// One row of a decay table.
#[derive(Clone, Copy, Debug)]
pub struct RateRow {
    pub walk_length: usize,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

/// Least-squares exponential `amplitude * exp(-rate * l)` through the
/// positive frequencies of a table.
#[derive(Clone, Copy, Debug)]
pub struct KestenFit {
    pub rate: f64,
    pub amplitude: f64,
}

impl KestenFit {
    /// The commuting-rate bound shaped `K * l * exp(-rate * l)`.
    pub fn envelope(&self, walk_length: usize) -> f64 {
        self.amplitude * walk_length as f64 * (-self.rate * walk_length as f64).exp()
    }
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub rows: Vec<RateRow>,
    pub fit: Option<KestenFit>,
}

fn fit_decay(rows: &[RateRow]) -> Option<KestenFit> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.frequency > 0.0)
        .map(|r| (r.walk_length as f64, r.frequency.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let var: f64 = points.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    if var == 0.0 {
        return None;
    }
    let cov: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = cov / var;
    Some(KestenFit { rate: -slope, amplitude: (mean_y - slope * mean_x).exp() })
}

fn monte_carlo_rows(
    l_values: &[usize],
    trials: u64,
    seed: u64,
    label: u64,
    hit: impl Fn(&Stream, usize) -> bool + Sync,
) -> Vec<RateRow> {
    l_values
        .iter()
        .map(|&l| {
            let chunks = trials.div_ceil(TRIAL_CHUNK);
            let hits: u64 = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let lo = chunk * TRIAL_CHUNK;
                    let hi = (lo + TRIAL_CHUNK).min(trials);
                    (lo..hi)
                        .filter(|&trial| {
                            hit(&Stream::new(seed, &[label, l as u64, trial]), l)
                        })
                        .count() as u64
                })
                .sum();
            let est = HitEstimate::new(hits, trials);
            RateRow {
                walk_length: l,
                frequency: est.frequency,
                wilson_low: est.wilson_low,
                wilson_high: est.wilson_high,
            }
        })
        .collect()
}

fn free_walk_is_trivial(stream: &Stream, l: usize) -> bool {
    let mut stack: Vec<u8> = Vec::with_capacity(l);
    let span = (l as u64).max(1);
    for i in 0..l {
        let letter = stream.uniform_below(4, i as u64, span) as u8;
        match stack.last() {
            Some(&top) if top == crate::word::letter_inverse(letter) => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
    stack.is_empty()
}

/// Return frequencies of simple free-group walks: the empirical
/// probability that a length-l walk reduces to the empty word, with an
/// exponential fit through the positive rows.
pub fn kesten_decay(l_values: &[usize], trials: u64, seed: u64) -> DecayReport {
    let rows = monte_carlo_rows(l_values, trials, seed, FREE_WALK_LABEL, free_walk_is_trivial);
    let fit = fit_decay(&rows);
    DecayReport { rows, fit }
}

/// Commuting frequencies of independent simple free-group walk pairs.
pub fn commuting_rate(l_values: &[usize], trials: u64, seed: u64) -> Vec<RateRow> {
    monte_carlo_rows(l_values, trials, seed, FREE_WALK_LABEL ^ 1, |stream, l| {
        let span = (2 * l as u64).max(1);
        let draw = |offset: usize| -> Word {
            Word::from_letters(
                (0..l).map(|i| stream.uniform_below(4, (offset + i) as u64, span) as u8),
            )
        };
        draw(0).commutes(&draw(l))
    })
}

/// Number of the 4^l letter sequences of length l that reduce to the
/// empty word, by direct enumeration.
pub fn closed_walk_count(l: usize) -> u64 {
    assert!(l <= 10, "enumeration of 4^l sequences is capped at l = 10");
    let mut count = 0u64;
    let total = 4u64.pow(l as u32);
    for code in 0..total {
        let mut c = code;
        let mut stack: Vec<u8> = Vec::with_capacity(l);
        for _ in 0..l {
            let letter = (c % 4) as u8;
            c /= 4;
            match stack.last() {
                Some(&top) if top == crate::word::letter_inverse(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        if stack.is_empty() {
            count += 1;
        }
    }
    count
}

/// Exact commuting probability of two independent simple walks of length
/// l, by enumerating all 16^l raw pairs.
pub fn exact_commuting_rate(l: usize) -> f64 {
    assert!(l <= 4, "enumeration of 16^l pairs is capped at l = 4");
    let total = 4u64.pow(l as u32);
    let words: Vec<Word> = (0..total)
        .map(|code| {
            let mut c = code;
            Word::from_letters((0..l).map(|_| {
                let letter = (c % 4) as u8;
                c /= 4;
                letter
            }))
        })
        .collect();
    let commuting: u64 = words
        .iter()
        .map(|u| words.iter().filter(|v| u.commutes(v)).count() as u64)
        .sum();
    commuting as f64 / (total * total) as f64
}

/// Comma-separated table: walk length, frequency, interval bounds.
pub fn csv_report(rows: &[RateRow]) -> String {
    let mut out = String::from("walk_length,frequency,wilson_low,wilson_high\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.walk_length, r.frequency, r.wilson_low, r.wilson_high
        ));
    }
    out
}
