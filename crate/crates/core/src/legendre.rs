use crate::error::{Error, Result};

/// Highest polynomial degree accepted by [`legendre_poly`].
pub const MAX_DEGREE: usize = 64;

/// Legendre polynomial `P_n(x)` by the three-term recurrence.
pub fn legendre_poly(n: usize, x: f64) -> Result<f64> {
    if n > MAX_DEGREE {
        return Err(Error::Domain(format!("degree {n} exceeds cap {MAX_DEGREE}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
    }
    Ok(legendre_unchecked(n, x))
}

pub(crate) fn legendre_unchecked(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// `P_2(x) = (3x² - 1)/2`.
#[inline]
pub fn p2(x: f64) -> f64 {
    0.5 * (3.0 * x * x - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn low_orders() {
        assert_eq!(legendre_poly(0, 0.37).unwrap(), 1.0);
        assert_eq!(legendre_poly(1, 0.5).unwrap(), 0.5);
        assert!((legendre_poly(2, 0.5).unwrap() + 0.125).abs() < 1e-15);
        // P_3(x) = (5x^3 - 3x)/2
        let x: f64 = -0.3;
        assert!((legendre_poly(3, x).unwrap() - 0.5 * (5.0 * x.powi(3) - 3.0 * x)).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(legendre_poly(2, 1.0000001).is_err());
        assert!(legendre_poly(2, f64::NAN).is_err());
        assert!(legendre_poly(65, 0.0).is_err());
        assert!(legendre_poly(64, 1.0).is_ok());
    }

    #[test]
    fn endpoint_values() {
        for n in 0..=MAX_DEGREE {
            assert!((legendre_poly(n, 1.0).unwrap() - 1.0).abs() < 1e-12);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((legendre_poly(n, -1.0).unwrap() - sign).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn bounded_by_one(n in 0usize..=64, x in -1.0f64..=1.0) {
            prop_assert!(legendre_poly(n, x).unwrap().abs() <= 1.0 + 1e-12);
        }
    }
}
