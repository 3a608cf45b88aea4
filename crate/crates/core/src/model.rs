//! Interval instances and the two random instance models.

use std::path::Path;

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{FloatScalar, Scalar};

/// Absolute tolerance for the integrality test in [`validate_assumption`].
pub const ASSUMPTION_TOL: f64 = 1e-9;

/// Absolute tolerance on the total mass of a [`LengthDensity`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A storage-time interval stored as center and length.
///
/// Endpoints are derived on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval<T> {
    pub center: T,
    pub length: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(center: T, length: T) -> Result<Self> {
        if length < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "interval length must be non-negative, got {:?}",
                length
            )));
        }
        Ok(Self { center, length })
    }

    /// Builds the interval `[lo, hi]`.
    pub fn from_endpoints(lo: T, hi: T) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidParameter(format!(
                "interval endpoints out of order: [{:?}, {:?}]",
                lo, hi
            )));
        }
        let center = (lo.clone() + hi.clone()).half();
        Ok(Self {
            center,
            length: hi - lo,
        })
    }

    pub fn lo(&self) -> T {
        self.center.clone() - self.length.half()
    }

    pub fn hi(&self) -> T {
        self.center.clone() + self.length.half()
    }
}

/// Parameters of an instance: size, number of colors, maximum length and seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    pub n: usize,
    pub k: u32,
    pub max_len: T,
    pub seed: u64,
    assumption_holds: bool,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(n: usize, k: u32, max_len: T, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        check_k_and_len(k, &max_len)?;
        let assumption_holds = validate_assumption(k, &max_len);
        Ok(Self {
            n,
            k,
            max_len,
            seed,
            assumption_holds,
        })
    }

    /// Parameters using the length bound `(k - 1) / (5k)`, which always
    /// satisfies the integrality assumption.
    pub fn with_standard_len(n: usize, k: u32, seed: u64) -> Result<Self> {
        Self::new(n, k, standard_max_len(k), seed)
    }

    /// Whether `(k - 1) / (k L)` is an integer, the precondition of every
    /// closed-form comparison.
    pub fn assumption_holds(&self) -> bool {
        self.assumption_holds
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn check_k_and_len<T: Scalar>(k: u32, max_len: &T) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if *max_len <= T::zero() || *max_len > T::one() {
        return Err(Error::InvalidParameter(format!(
            "maximum length must lie in (0, 1], got {:?}",
            max_len
        )));
    }
    Ok(())
}

/// `L = (k - 1) / (5k)`.
pub fn standard_max_len<T: Scalar>(k: u32) -> T {
    T::ratio(i64::from(k) - 1, 5 * i64::from(k))
}

/// Checks that `1 / ((k / (k - 1)) L)` is an integer, to within
/// [`ASSUMPTION_TOL`].
///
/// When it holds, `[0, 1]` splits into a whole number of J-intervals per
/// color. Returns `false` for `k < 2` or non-positive `L`.
pub fn validate_assumption<T: Scalar>(k: u32, max_len: &T) -> bool {
    if k < 2 || *max_len <= T::zero() {
        return false;
    }
    let k_s = T::from_u64(u64::from(k));
    let cells_per_color = (k_s.clone() - T::one()) / (k_s * max_len.clone());
    cells_per_color.is_near_integer(&T::from_f64(ASSUMPTION_TOL))
        && cells_per_color.round_half_up() >= T::one()
}

/// Draws `n` intervals with centers uniform on `[0, 1]` and lengths uniform
/// on `[0, L]`. Center and length are drawn alternately per interval.
pub fn generate_scheinerman<T, R>(params: &ModelParams<T>, rng: &mut R) -> Result<Vec<Interval<T>>>
where
    T: FloatScalar,
    R: Rng + ?Sized,
{
    if params.n == 0 {
        return Err(Error::EmptyInstance);
    }
    check_k_and_len(params.k, &params.max_len)?;
    let centers = Uniform::new_inclusive(T::zero(), T::one());
    let lengths = Uniform::new_inclusive(T::zero(), params.max_len);
    Ok((0..params.n)
        .map(|_| {
            let center = centers.sample(rng);
            let length = lengths.sample(rng);
            Interval { center, length }
        })
        .collect())
}

/// Draws `n` intervals with uniform centers and lengths from `density`.
pub fn generate_extended<T, R>(
    params: &ModelParams<T>,
    density: &LengthDensity<T>,
    rng: &mut R,
) -> Result<Vec<Interval<T>>>
where
    T: FloatScalar,
    R: Rng + ?Sized,
{
    if params.n == 0 {
        return Err(Error::EmptyInstance);
    }
    check_k_and_len(params.k, &params.max_len)?;
    if density.support_max() > params.max_len * (T::one() + T::from_f64(NORMALIZATION_TOL)) {
        return Err(Error::InvalidDensity(format!(
            "support extends to {:?}, beyond the length bound {:?}",
            density.support_max(),
            params.max_len
        )));
    }
    let centers = Uniform::new_inclusive(T::zero(), T::one());
    Ok((0..params.n)
        .map(|_| {
            let center = centers.sample(rng);
            let length = density.sample(rng);
            Interval { center, length }
        })
        .collect())
}

/// Piecewise-constant probability density for interval lengths on `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthDensity<T> {
    bin_edges: Vec<T>,
    bin_heights: Vec<T>,
    bound: T,
    // cumulative[i] = mass of bins 0..i
    cumulative: Vec<T>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DensityFile {
    bin_edges: Vec<f64>,
    bin_heights: Vec<f64>,
}

impl<T: Scalar> LengthDensity<T> {
    pub fn new(bin_edges: Vec<T>, bin_heights: Vec<T>) -> Result<Self> {
        if bin_heights.is_empty() {
            return Err(Error::InvalidDensity("at least one bin is required".into()));
        }
        if bin_edges.len() != bin_heights.len() + 1 {
            return Err(Error::InvalidDensity(format!(
                "{} edges for {} bins",
                bin_edges.len(),
                bin_heights.len()
            )));
        }
        if bin_edges[0] != T::zero() {
            return Err(Error::InvalidDensity("first edge must be 0".into()));
        }
        if bin_edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidDensity("edges must be strictly increasing".into()));
        }
        if bin_heights.iter().any(|h| *h < T::zero()) {
            return Err(Error::InvalidDensity("heights must be non-negative".into()));
        }
        let mut cumulative = Vec::with_capacity(bin_edges.len());
        let mut mass = T::zero();
        cumulative.push(mass.clone());
        for (w, h) in bin_edges.windows(2).zip(&bin_heights) {
            mass = mass + h.clone() * (w[1].clone() - w[0].clone());
            cumulative.push(mass.clone());
        }
        if (mass.clone() - T::one()).abs() > T::from_f64(NORMALIZATION_TOL) {
            return Err(Error::InvalidDensity(format!(
                "total mass is {:?}, expected 1",
                mass
            )));
        }
        let bound = bin_heights
            .iter()
            .cloned()
            .fold(T::zero(), T::max_of);
        Ok(Self {
            bin_edges,
            bin_heights,
            bound,
            cumulative,
        })
    }

    /// The uniform density on `[0, L]`.
    pub fn uniform(max_len: T) -> Result<Self> {
        if max_len <= T::zero() {
            return Err(Error::InvalidDensity("support must have positive length".into()));
        }
        let height = T::one() / max_len.clone();
        Self::new(vec![T::zero(), max_len], vec![height])
    }

    /// `n` equal-width bins on `[0, L]` with heights proportional to `weights`.
    pub fn from_weights(max_len: T, weights: &[T]) -> Result<Self> {
        if weights.is_empty() || max_len <= T::zero() {
            return Err(Error::InvalidDensity("need weights and a positive support".into()));
        }
        let bins = T::from_u64(weights.len() as u64);
        let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if total <= T::zero() {
            return Err(Error::InvalidDensity("weights must have positive sum".into()));
        }
        let edges = (0..=weights.len())
            .map(|i| max_len.clone() * T::from_u64(i as u64) / bins.clone())
            .collect();
        let heights = weights
            .iter()
            .map(|w| w.clone() * bins.clone() / (total.clone() * max_len.clone()))
            .collect();
        Self::new(edges, heights)
    }

    pub fn bin_edges(&self) -> &[T] {
        &self.bin_edges
    }

    pub fn bin_heights(&self) -> &[T] {
        &self.bin_heights
    }

    /// Supremum of the density, the `B` in `f <= B`.
    pub fn bound(&self) -> T {
        self.bound.clone()
    }

    /// Right end of the support, the length bound `L`.
    pub fn support_max(&self) -> T {
        self.bin_edges[self.bin_edges.len() - 1].clone()
    }

    /// Probability mass of each bin.
    pub fn bin_masses(&self) -> Vec<T> {
        self.cumulative
            .windows(2)
            .map(|w| w[1].clone() - w[0].clone())
            .collect()
    }

    /// Inverse CDF. `u` is clamped to `[0, 1]`.
    pub fn quantile(&self, u: T) -> T {
        let u = T::max_of(T::zero(), T::min_of(u, T::one()));
        let bins = self.bin_heights.len();
        // first bin whose cumulative end exceeds u; zero-mass bins are skipped
        let mut bin = self.cumulative[1..].partition_point(|c| *c <= u);
        if bin >= bins {
            bin = (0..bins)
                .rev()
                .find(|&i| self.bin_heights[i] > T::zero())
                .unwrap_or(bins - 1);
        }
        let lo = self.bin_edges[bin].clone();
        let hi = self.bin_edges[bin + 1].clone();
        let height = self.bin_heights[bin].clone();
        if height <= T::zero() {
            return hi;
        }
        let x = lo.clone() + (u - self.cumulative[bin].clone()) / height;
        T::max_of(lo, T::min_of(x, hi))
    }
}

impl<T: FloatScalar> LengthDensity<T> {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let u = rng.gen_range(T::zero()..T::one());
        self.quantile(u)
    }
}

impl LengthDensity<f64> {
    /// Parses `{"bin_edges": [...], "bin_heights": [...]}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: DensityFile = serde_json::from_str(text)?;
        Self::new(file.bin_edges, file.bin_heights)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file = DensityFile {
            bin_edges: self.bin_edges.clone(),
            bin_heights: self.bin_heights.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}
