//! The oblivious coloring rule and the uniform random baseline.
//!
//! `[0, 1]` is cut into `(k - 1) / L` J-intervals of width `L / (k - 1)`,
//! colored `1, 2, .., k, 1, 2, ..` from the left. An interval takes the color
//! of the J-interval holding its center. J-intervals are half-open
//! `[start, end)` except the last, which also holds `1`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{validate_assumption, Interval};
use crate::scalar::Scalar;

/// Color assignment, one entry per interval, values in `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    k: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if let Some((index, &color)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > k)
        {
            return Err(Error::ColorOutOfRange { index, color, k });
        }
        Ok(Self { colors, k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of intervals of each color, indexed by `color - 1`.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.k as usize];
        for &c in &self.colors {
            sizes[(c - 1) as usize] += 1;
        }
        sizes
    }

    pub fn into_colors(self) -> Vec<u32> {
        self.colors
    }
}

/// The J-interval partition for a given `k` and length bound `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorRule<T> {
    k: u32,
    max_len: T,
    // (k - 1) / L; a center c lies in J-interval floor(scale * c)
    scale: T,
    last_index: u64,
    assumption_holds: bool,
}

impl<T: Scalar> ColorRule<T> {
    pub fn new(k: u32, max_len: T) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
        }
        if max_len <= T::zero() || max_len > T::one() {
            return Err(Error::InvalidParameter(format!(
                "maximum length must lie in (0, 1], got {:?}",
                max_len
            )));
        }
        let scale = T::from_u64(u64::from(k - 1)) / max_len.clone();
        let assumption_holds = validate_assumption(k, &max_len);
        let cells = if assumption_holds {
            scale.round_half_up()
        } else {
            scale.ceil()
        };
        let last_index = cells
            .to_u64()
            .and_then(|c| c.checked_sub(1))
            .ok_or_else(|| Error::InvalidParameter("J-interval count out of range".into()))?;
        Ok(Self {
            k,
            max_len,
            scale,
            last_index,
            assumption_holds,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn max_len(&self) -> &T {
        &self.max_len
    }

    pub fn assumption_holds(&self) -> bool {
        self.assumption_holds
    }

    /// Number of J-intervals covering `[0, 1]`.
    pub fn num_j_intervals(&self) -> u64 {
        self.last_index + 1
    }

    /// Width of a J-interval, `L / (k - 1)`.
    pub fn j_width(&self) -> T {
        self.max_len.clone() / T::from_u64(u64::from(self.k - 1))
    }

    /// 0-based J-interval containing `center`.
    pub fn j_index(&self, center: &T) -> Result<u64> {
        if *center < T::zero() || *center > T::one() {
            return Err(Error::CenterOutOfRange {
                index: 0,
                center: center.to_f64(),
            });
        }
        let raw = (self.scale.clone() * center.clone())
            .floor()
            .to_u64()
            .unwrap_or(self.last_index);
        Ok(raw.min(self.last_index))
    }

    /// Color of the J-interval with the given index.
    pub fn color_of_j(&self, j: u64) -> u32 {
        (j % u64::from(self.k)) as u32 + 1
    }

    /// `floor((k - 1) c / L) mod k + 1`, reading nothing but `interval`.
    pub fn assign_color(&self, interval: &Interval<T>) -> Result<u32> {
        self.j_index(&interval.center).map(|j| self.color_of_j(j))
    }

    /// Colors every interval independently with [`assign_color`](Self::assign_color).
    pub fn color_instance(&self, intervals: &[Interval<T>]) -> Result<Coloring> {
        let colors = intervals
            .iter()
            .enumerate()
            .map(|(index, iv)| {
                self.assign_color(iv).map_err(|e| match e {
                    Error::CenterOutOfRange { center, .. } => {
                        Error::CenterOutOfRange { index, center }
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Coloring { colors, k: self.k })
    }
}

/// Each entry drawn independently and uniformly from `1..=k`.
pub fn random_coloring<R: Rng + ?Sized>(size: usize, k: u32, rng: &mut R) -> Result<Coloring> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "random coloring needs k >= 2, got {k}"
        )));
    }
    let colors = (0..size).map(|_| rng.gen_range(1..=k)).collect();
    Ok(Coloring { colors, k })
}
