//! Monte Carlo estimators for the pair probabilities.
//!
//! Work is cut into fixed-size blocks; block `b` draws from its own
//! generator seeded with [`block_seed`]`(seed, b)`. Counts are integers and
//! are merged by addition, so results depend on the seed alone and not on
//! the number of worker threads or the order in which blocks finish.

use std::ops::{Add, AddAssign};

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{ColorRule, Coloring};
use crate::error::{Error, Result};
use crate::graph::{count_overlapping_pairs, count_same_color_overlaps, overlaps, overlaps_by_distance};
use crate::model::{Interval, LengthDensity, ModelParams};
use crate::scalar::FloatScalar;

/// Items (intervals or pairs) drawn per block.
pub const BLOCK_SIZE: usize = 4096;

/// Mixes the run seed with a block index (SplitMix64 finalizer).
pub fn block_seed(seed: u64, block: u64) -> u64 {
    let mut z = seed ^ block.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(block_seed(seed, block))
}

fn num_blocks(items: usize) -> usize {
    items.div_ceil(BLOCK_SIZE)
}

fn block_len(items: usize, block: usize) -> usize {
    BLOCK_SIZE.min(items - block * BLOCK_SIZE)
}

fn with_workers<R: Send>(workers: usize, job: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Err(Error::InvalidParameter("workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

/// A single probability estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorResult {
    pub estimate: f64,
    /// Size of the conditioning population (all pairs for unconditional
    /// estimates).
    pub trials: u64,
    pub successes: u64,
    /// `sqrt(p (1 - p) / trials)`.
    pub standard_error: f64,
    pub reference: Option<f64>,
    /// `(estimate - reference) / reference`.
    pub relative_difference: Option<f64>,
}

impl EstimatorResult {
    pub fn from_counts(successes: u64, trials: u64, event: &'static str) -> Result<Self> {
        if trials == 0 {
            return Err(Error::UndefinedConditional { event });
        }
        let p = successes as f64 / trials as f64;
        Ok(Self {
            estimate: p,
            trials,
            successes,
            standard_error: (p * (1.0 - p) / trials as f64).sqrt(),
            reference: None,
            relative_difference: None,
        })
    }

    /// Attaches a reference value and the signed relative difference.
    pub fn against(mut self, reference: f64) -> Self {
        self.reference = Some(reference);
        self.relative_difference = Some((self.estimate - reference) / reference);
        self
    }

    /// Distance to `reference` in units of the reference's own binomial
    /// standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        let sigma = (reference * (1.0 - reference) / self.trials as f64).sqrt();
        let diff = self.estimate - reference;
        if sigma == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / sigma
        }
    }
}

/// How pairs are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairMode {
    /// Independent pairs of intervals, `trials` of them.
    IndependentPairs,
    /// All `n (n - 1) / 2` pairs of a single `n`-interval instance.
    AllPairs,
}

impl PairMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PairMode::IndependentPairs => "independent-pairs",
            PairMode::AllPairs => "all-pairs",
        }
    }
}

impl std::str::FromStr for PairMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent-pairs" | "independent" => Ok(Self::IndependentPairs),
            "all-pairs" | "all" => Ok(Self::AllPairs),
            other => Err(Error::InvalidParameter(format!("unknown pair mode {other:?}"))),
        }
    }
}

/// Where colors come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// The J-interval rule.
    Oblivious,
    /// Independent uniform colors.
    Random,
}

/// Raw pair counts. Merging is plain addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub pairs: u64,
    pub overlapping: u64,
    pub same_color: u64,
    pub same_color_overlapping: u64,
}

impl Add for PairCounts {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            pairs: self.pairs + rhs.pairs,
            overlapping: self.overlapping + rhs.overlapping,
            same_color: self.same_color + rhs.same_color,
            same_color_overlapping: self.same_color_overlapping + rhs.same_color_overlapping,
        }
    }
}

impl AddAssign for PairCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for PairCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

impl PairCounts {
    pub fn p_ov(&self) -> Result<EstimatorResult> {
        EstimatorResult::from_counts(self.overlapping, self.pairs, "Pr(OV)")
    }

    pub fn p_sc(&self) -> Result<EstimatorResult> {
        EstimatorResult::from_counts(self.same_color, self.pairs, "Pr(SC)")
    }

    pub fn p_sc_and_ov(&self) -> Result<EstimatorResult> {
        EstimatorResult::from_counts(self.same_color_overlapping, self.pairs, "Pr(SC and OV)")
    }

    pub fn p_sc_given_ov(&self) -> Result<EstimatorResult> {
        EstimatorResult::from_counts(self.same_color_overlapping, self.overlapping, "Pr(SC | OV)")
    }

    pub fn p_ov_given_sc(&self) -> Result<EstimatorResult> {
        EstimatorResult::from_counts(self.same_color_overlapping, self.same_color, "Pr(OV | SC)")
    }
}

/// Settings of [`estimate_pair_probabilities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub mode: PairMode,
    /// Number of independent pairs; ignored in [`PairMode::AllPairs`], which
    /// uses `params.n` intervals.
    pub trials: u64,
    pub workers: usize,
    pub strategy: Strategy,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            mode: PairMode::AllPairs,
            trials: 0,
            workers: 1,
            strategy: Strategy::Oblivious,
        }
    }
}

struct Sampler<'a, T: FloatScalar> {
    max_len: T,
    density: Option<&'a LengthDensity<T>>,
    rule: &'a ColorRule<T>,
    strategy: Strategy,
}

impl<'a, T: FloatScalar> Sampler<'a, T> {
    fn new(
        params: &ModelParams<T>,
        density: Option<&'a LengthDensity<T>>,
        rule: &'a ColorRule<T>,
        strategy: Strategy,
    ) -> Self {
        Self {
            max_len: params.max_len,
            density,
            rule,
            strategy,
        }
    }

    // the uniform samplers are not Sync for generic T, so each block builds its own
    fn block(&self) -> (Uniform<T>, Uniform<T>) {
        (
            Uniform::new_inclusive(T::zero(), T::one()),
            Uniform::new_inclusive(T::zero(), self.max_len),
        )
    }

    fn draw<R: Rng>(&self, uniforms: &(Uniform<T>, Uniform<T>), rng: &mut R) -> (Interval<T>, u32) {
        let center = uniforms.0.sample(rng);
        let length = match self.density {
            Some(d) => d.sample(rng),
            None => uniforms.1.sample(rng),
        };
        let iv = Interval { center, length };
        let color = match self.strategy {
            Strategy::Oblivious => self
                .rule
                .assign_color(&iv)
                .expect("sampled centers lie in [0, 1]"),
            Strategy::Random => rng.gen_range(1..=self.rule.k()),
        };
        (iv, color)
    }
}

/// Estimates `Pr(OV)`, `Pr(SC)`, `Pr(SC and OV)`, `Pr(SC | OV)` and
/// `Pr(OV | SC)` for the given model and coloring rule.
///
/// Lengths are uniform on `[0, L]` unless a density is supplied. The seed is
/// `params.seed`.
pub fn estimate_pair_probabilities<T: FloatScalar>(
    params: &ModelParams<T>,
    density: Option<&LengthDensity<T>>,
    rule: &ColorRule<T>,
    config: &EstimatorConfig,
) -> Result<PairCounts> {
    if rule.k() != params.k {
        return Err(Error::InvalidParameter(format!(
            "rule has k = {}, model has k = {}",
            rule.k(),
            params.k
        )));
    }
    let sampler = Sampler::new(params, density, rule, config.strategy);
    let seed = params.seed;
    match config.mode {
        PairMode::IndependentPairs => {
            if config.trials == 0 {
                return Err(Error::InvalidParameter("trials must be positive".into()));
            }
            let trials = config.trials as usize;
            with_workers(config.workers, || {
                (0..num_blocks(trials))
                    .into_par_iter()
                    .map(|b| {
                        let mut rng = block_rng(seed, b as u64);
                        let uniforms = sampler.block();
                        let mut counts = PairCounts::default();
                        for _ in 0..block_len(trials, b) {
                            let (a, ca) = sampler.draw(&uniforms, &mut rng);
                            let (b, cb) = sampler.draw(&uniforms, &mut rng);
                            let ov = overlaps(&a, &b);
                            let sc = ca == cb;
                            counts.pairs += 1;
                            counts.overlapping += u64::from(ov);
                            counts.same_color += u64::from(sc);
                            counts.same_color_overlapping += u64::from(ov && sc);
                        }
                        counts
                    })
                    .sum()
            })
        }
        PairMode::AllPairs => {
            if params.n < 2 {
                return Err(Error::InvalidParameter("all-pairs mode needs n >= 2".into()));
            }
            with_workers(config.workers, || {
                let drawn: Vec<Vec<(Interval<T>, u32)>> = (0..num_blocks(params.n))
                    .into_par_iter()
                    .map(|b| {
                        let mut rng = block_rng(seed, b as u64);
                        let uniforms = sampler.block();
                        (0..block_len(params.n, b))
                            .map(|_| sampler.draw(&uniforms, &mut rng))
                            .collect()
                    })
                    .collect();
                let (intervals, colors): (Vec<_>, Vec<_>) = drawn.into_iter().flatten().unzip();
                count_all_pairs(&intervals, colors, params.k)
            })
        }
    }
}

fn count_all_pairs<T: FloatScalar>(intervals: &[Interval<T>], colors: Vec<u32>, k: u32) -> PairCounts {
    let n = intervals.len() as u64;
    let coloring = Coloring::new(colors, k).expect("colors drawn in 1..=k");
    let same_color = coloring
        .class_sizes()
        .iter()
        .map(|&s| s * s.saturating_sub(1) / 2)
        .sum();
    let (overlapping, same_color_overlapping) = rayon::join(
        || count_overlapping_pairs(intervals),
        || count_same_color_overlaps(intervals, &coloring).expect("sizes match"),
    );
    PairCounts {
        pairs: n * (n - 1) / 2,
        overlapping,
        same_color,
        same_color_overlapping,
    }
}

/// Outcome of one point of the center-distance check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterDistanceCheck {
    /// Center distance in units of `L`.
    pub x: f64,
    pub result: EstimatorResult,
    pub reference: f64,
    /// Estimate within three binomial standard errors of the reference.
    pub pass: bool,
}

/// For each `x`, fixes the center distance at `x L`, draws both lengths
/// uniformly from `[0, L]` and records how often the intervals overlap.
pub fn verify_center_distance_profile(
    xs: &[f64],
    max_len: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<CenterDistanceCheck>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    if !(max_len > 0.0 && max_len <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "maximum length must lie in (0, 1], got {max_len}"
        )));
    }
    let lengths = Uniform::new_inclusive(0.0, max_len);
    let trials_us = trials as usize;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let reference = super::closed::p_ov_given_center(&x)?;
            let distance = x * max_len;
            let point_seed = block_seed(seed, i as u64 ^ 0x5EED_0000_0000_0000);
            let hits: u64 = with_workers(workers, || {
                (0..num_blocks(trials_us))
                    .into_par_iter()
                    .map(|b| {
                        let mut rng = block_rng(point_seed, b as u64);
                        (0..block_len(trials_us, b))
                            .filter(|_| {
                                let a = lengths.sample(&mut rng);
                                let b = lengths.sample(&mut rng);
                                overlaps_by_distance(&distance, &a, &b)
                            })
                            .count() as u64
                    })
                    .sum()
            })?;
            let result = EstimatorResult::from_counts(hits, trials, "Pr(OV | C = d)")?.against(reference);
            let pass = result.z_score(reference).abs() <= 3.0;
            Ok(CenterDistanceCheck {
                x,
                result,
                reference,
                pass,
            })
        })
        .collect()
}
