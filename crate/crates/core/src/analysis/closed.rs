//! Closed-form probabilities for the oblivious rule under the random
//! interval models.
//!
//! All functions are generic over [`Scalar`]; with `BigRational` they are
//! exact. Event names: `OV` two intervals overlap, `SC` they get the same
//! color, `SI` their centers share a J-interval.

use crate::error::{Error, Result};
use crate::model::validate_assumption;
use crate::scalar::Scalar;

/// Probability that two intervals overlap given center distance `x * L`,
/// with both lengths uniform on `[0, L]`.
pub fn p_ov_given_center<T: Scalar>(x: &T) -> Result<T> {
    if *x < T::zero() {
        return Err(Error::InvalidParameter(format!(
            "center distance must be non-negative, got {:?}",
            x
        )));
    }
    let half = T::one().half();
    let one = T::one();
    if *x <= half {
        let four = T::from_u64(4);
        let six = T::from_u64(6);
        Ok(four * x.clone() - six * x.clone() * x.clone())
    } else if *x <= one {
        let t = T::two() - T::two() * x.clone();
        Ok((t.clone() * t).half())
    } else {
        Ok(T::zero())
    }
}

/// Density of the distance between two independent uniform points on
/// `[0, a]`: `2 (a - x) / a^2`.
pub fn distance_density<T: Scalar>(x: &T, a: &T) -> Result<T> {
    if *a <= T::zero() {
        return Err(Error::InvalidParameter(format!("a must be positive, got {:?}", a)));
    }
    if *x < T::zero() || *x > *a {
        return Err(Error::InvalidParameter(format!(
            "distance {:?} outside [0, {:?}]",
            x, a
        )));
    }
    Ok(T::two() * (a.clone() - x.clone()) / (a.clone() * a.clone()))
}

fn check_scope<T: Scalar>(k: u32, max_len: &T) -> Result<()> {
    if k < 3 {
        return Err(Error::ClosedFormScope(k));
    }
    if *max_len <= T::zero() || *max_len > T::one() {
        return Err(Error::InvalidParameter(format!(
            "maximum length must lie in (0, 1], got {:?}",
            max_len
        )));
    }
    if !validate_assumption(k, max_len) {
        return Err(Error::InvalidParameter(format!(
            "(k - 1) / (k L) is not an integer for k = {k}, L = {:?}",
            max_len
        )));
    }
    Ok(())
}

/// `4 / (3 (k-1)^2) - 1 / (k-1)^3`, the factor shared by the same-color
/// closed forms.
pub fn same_color_factor<T: Scalar>(k: u32) -> T {
    let km1 = T::from_u64(u64::from(k) - 1);
    let sq = km1.clone() * km1.clone();
    T::from_u64(4) / (T::from_u64(3) * sq.clone()) - T::one() / (sq * km1)
}

/// Antiderivative `4x^2 - 4x^3 - (8/3)(k-1)x^3 + 3(k-1)x^4` of the
/// same-J-interval overlap integrand, before the factor `kL`.
pub fn same_cell_antiderivative<T: Scalar>(k: u32, x: &T) -> T {
    let km1 = T::from_u64(u64::from(k) - 1);
    let x2 = x.clone() * x.clone();
    let x3 = x2.clone() * x.clone();
    let x4 = x3.clone() * x.clone();
    T::from_u64(4) * x2 - T::from_u64(4) * x3.clone()
        - T::ratio(8, 3) * km1.clone() * x3
        + T::from_u64(3) * km1 * x4
}

/// `Pr(SI | SC) = k L / (k - 1)`.
pub fn p_si_given_sc<T: Scalar>(k: u32, max_len: &T) -> Result<T> {
    check_scope(k, max_len)?;
    let k_s = T::from_u64(u64::from(k));
    Ok(k_s.clone() / (k_s - T::one()) * max_len.clone())
}

/// `Pr(OV | SC) = k L (4 / (3 (k-1)^2) - 1 / (k-1)^3)`.
pub fn p_ov_given_sc<T: Scalar>(k: u32, max_len: &T) -> Result<T> {
    check_scope(k, max_len)?;
    Ok(T::from_u64(u64::from(k)) * max_len.clone() * same_color_factor::<T>(k))
}

/// `Pr(OV) = (2/3) L - (1/4) L^2`.
pub fn p_ov<T: Scalar>(max_len: &T) -> Result<T> {
    if *max_len <= T::zero() || *max_len > T::one() {
        return Err(Error::InvalidParameter(format!(
            "maximum length must lie in (0, 1], got {:?}",
            max_len
        )));
    }
    let l = max_len.clone();
    Ok(T::ratio(2, 3) * l.clone() - T::ratio(1, 4) * l.clone() * l)
}

/// `Pr(SC | OV) = 12 / (8 - 3L) * (4 / (3 (k-1)^2) - 1 / (k-1)^3)`.
pub fn p_sc_given_ov<T: Scalar>(k: u32, max_len: &T) -> Result<T> {
    check_scope(k, max_len)?;
    let denom = T::from_u64(8) - T::from_u64(3) * max_len.clone();
    Ok(T::from_u64(12) / denom * same_color_factor::<T>(k))
}

/// `E(|cut|) / E(m) = 1 - Pr(SC | OV)`.
pub fn expected_cut_ratio<T: Scalar>(k: u32, max_len: &T) -> Result<T> {
    Ok(T::one() - p_sc_given_ov(k, max_len)?)
}

/// Upper bound `L^2 B^2 Pr(OV | SC)` on the same-color overlap probability
/// when lengths follow a density bounded by `B`.
pub fn extended_upper_bound_p_ov_given_sc<T: Scalar>(k: u32, max_len: &T, bound: &T) -> Result<T> {
    let base = p_ov_given_sc(k, max_len)?;
    // any density on [0, L] has supremum at least 1 / L
    if bound.clone() * max_len.clone() < T::one() {
        return Err(Error::InvalidParameter(format!(
            "density bound {:?} is below 1 / L",
            bound
        )));
    }
    let lb = max_len.clone() * bound.clone();
    Ok(lb.clone() * lb * base)
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    #[test]
    fn center_profile_values() {
        assert_eq!(p_ov_given_center(&q(0, 1)).unwrap(), q(0, 1));
        assert_eq!(p_ov_given_center(&q(1, 3)).unwrap(), q(2, 3));
        assert_eq!(p_ov_given_center(&q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(p_ov_given_center(&q(4, 5)).unwrap(), q(2, 25));
        assert_eq!(p_ov_given_center(&q(1, 1)).unwrap(), q(0, 1));
        assert_eq!(p_ov_given_center(&q(3, 2)).unwrap(), q(0, 1));
        assert!(p_ov_given_center(&-0.1).is_err());
    }

    #[test]
    fn center_profile_continuity() {
        let eps = 1e-12_f64;
        let left = p_ov_given_center(&(0.5_f64 - eps)).unwrap();
        let right = p_ov_given_center(&(0.5 + eps)).unwrap();
        assert!((left - right).abs() < 1e-11);
        let below = p_ov_given_center(&(1.0 - eps)).unwrap();
        assert!(below.abs() < 1e-11);
    }

    #[test]
    fn center_profile_maximum_at_third() {
        let peak = p_ov_given_center(&(1.0 / 3.0)).unwrap();
        for i in 0..=2000 {
            let x = i as f64 / 1000.0;
            assert!(p_ov_given_center(&x).unwrap() <= peak + 1e-15);
        }
    }

    #[test]
    fn distance_density_values() {
        assert_eq!(distance_density(&0.0, &1.0).unwrap(), 2.0);
        assert_eq!(distance_density(&q(3, 7), &q(3, 7)).unwrap(), q(0, 1));
        assert!(distance_density(&1.5, &1.0).is_err());
        assert!(distance_density(&0.5, &0.0).is_err());
    }

    #[test]
    fn worked_values() {
        let l = q(4, 25);
        assert_eq!(p_si_given_sc(5, &l).unwrap(), q(1, 5));
        assert_eq!(p_si_given_sc(3, &q(1, 3)).unwrap(), q(1, 2));
        assert_eq!(p_ov_given_sc(5, &l).unwrap(), q(13, 240));
        assert_eq!(p_ov_given_sc(3, &q(1, 3)).unwrap(), q(5, 24));
        assert_eq!(p_ov(&q(1, 3)).unwrap(), q(7, 36));
        assert_eq!(p_ov(&l).unwrap(), q(94, 375) * q(2, 5));
        assert_eq!(p_sc_given_ov(5, &l).unwrap(), q(75, 47) * q(13, 192));
        assert_eq!(p_sc_given_ov(3, &q(1, 3)).unwrap(), q(5, 14));
        assert!((p_sc_given_ov(5, &0.16_f64).unwrap() - 0.108_045).abs() < 5e-7);
        assert!((expected_cut_ratio(5, &0.16_f64).unwrap() - 0.891_955).abs() < 5e-7);
        assert!((p_ov(&0.16_f64).unwrap() - 0.100_266_666_666).abs() < 1e-11);
    }

    #[test]
    fn scope_errors() {
        assert!(matches!(p_sc_given_ov(2, &0.25), Err(Error::ClosedFormScope(2))));
        assert!(p_ov_given_sc(3, &0.3).is_err());
        assert!(p_ov(&0.0).is_err());
        assert!(p_ov(&1.5).is_err());
    }

    #[test]
    fn extended_bound() {
        let l = q(4, 25);
        let base = p_ov_given_sc(5, &l).unwrap();
        let uniform = q(25, 4);
        assert_eq!(extended_upper_bound_p_ov_given_sc(5, &l, &uniform).unwrap(), base);
        assert_eq!(
            extended_upper_bound_p_ov_given_sc(5, &l, &q(25, 2)).unwrap(),
            q(4, 1) * base
        );
        assert!(extended_upper_bound_p_ov_given_sc(5, &l, &q(1, 1)).is_err());
    }

    #[test]
    fn antiderivative_endpoint() {
        for k in 3..40u32 {
            let x = q(1, i64::from(k) - 1);
            assert_eq!(same_cell_antiderivative(k, &x), same_color_factor::<Q>(k));
        }
    }

    #[test]
    fn same_color_decreases_along_standard_family() {
        let vals: Vec<f64> = (3..60)
            .map(|k| p_ov_given_sc(k, &crate::model::standard_max_len::<f64>(k)).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn cut_ratio_against_random_baseline() {
        // k >= 4: every valid L beats 1 - 1/k
        for k in 4..=50u32 {
            for j in 1..=40i64 {
                let l = q(i64::from(k) - 1, j * i64::from(k));
                if l > q(1, 1) {
                    continue;
                }
                let ratio = expected_cut_ratio(k, &l).unwrap();
                assert!(ratio > q(i64::from(k) - 1, i64::from(k)), "k={k} L={l}");
                assert!(ratio < q(1, 1));
            }
        }
        // k = 3: L = 2 / (3j) beats the baseline only for L < 1/6
        for j in 1..=40i64 {
            let l = q(2, 3 * j);
            let ratio = expected_cut_ratio(3, &l).unwrap();
            let baseline = q(2, 3);
            match l.cmp(&q(1, 6)) {
                std::cmp::Ordering::Less => assert!(ratio > baseline, "L={l}"),
                std::cmp::Ordering::Equal => assert_eq!(ratio, baseline),
                std::cmp::Ordering::Greater => assert!(ratio < baseline, "L={l}"),
            }
        }
    }
}
