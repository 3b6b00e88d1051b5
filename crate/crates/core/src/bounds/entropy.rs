//! Binary entropy and its inverse on `[1/2, 1]`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("{name} = {x} is outside [0, 1]")));
    }
    Ok(())
}

#[inline]
fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `h(p) = p log2(1/p) + (1-p) log2(1/(1-p))`, with `h(0) = h(1) = 0`.
pub fn entropy_h(p: f64) -> Result<f64> {
    check_unit("p", p)?;
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// The `p` in `[1/2, 1]` with `h(p) = z`, by bisection to machine precision.
pub fn entropy_h_inv(z: f64) -> Result<f64> {
    check_unit("z", z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if z == 1.0 {
        return Ok(0.5);
    }
    // h is strictly decreasing on [1/2, 1].
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy_h(mid)? > z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed-form upper bound `h^{-1}(z) <= 1/2 + 1/2 sqrt(1 - z^{ln 4})`.
pub fn h_inv_upper(z: f64) -> Result<f64> {
    check_unit("z", z)?;
    let radicand = (1.0 - z.powf(2.0 * LN_2)).max(0.0);
    Ok(0.5 + 0.5 * radicand.sqrt())
}

/// `(4 p (1-p))^{1/ln 4}`, an upper bound on `h(p)`.
pub fn entropy_upper(p: f64) -> Result<f64> {
    check_unit("p", p)?;
    Ok((4.0 * p * (1.0 - p)).powf(1.0 / (2.0 * LN_2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_values() {
        assert_eq!(entropy_h(0.5).unwrap(), 1.0);
        assert_eq!(entropy_h(0.0).unwrap(), 0.0);
        assert_eq!(entropy_h(1.0).unwrap(), 0.0);
        // 256-bit reference value
        assert!((entropy_h(0.11).unwrap() - 0.499_915_958_164_528).abs() < 1e-9);
        assert!(entropy_h(-0.1).is_err());
        assert!(entropy_h(1.5).is_err());
        assert!(entropy_h(f64::NAN).is_err());
    }

    #[test]
    fn h_symmetric() {
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            assert!((entropy_h(p).unwrap() - entropy_h(1.0 - p).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn h_inv_values() {
        assert_eq!(entropy_h_inv(1.0).unwrap(), 0.5);
        assert_eq!(entropy_h_inv(0.0).unwrap(), 1.0);
        let p = entropy_h_inv(0.3).unwrap();
        assert!((entropy_h(p).unwrap() - 0.3).abs() <= 1e-9);
        assert!((0.5..=1.0).contains(&p));
        assert!(entropy_h_inv(1.01).is_err());
    }

    #[test]
    fn h_inv_matches_reference_grid() {
        // h^{-1}(i/10), 256-bit bisection reference
        let reference = [
            0.987013137944482,
            0.968875539695211,
            0.946760959223203,
            0.920617399519351,
            0.88997213556164,
            0.853897596588113,
            0.810702294629374,
            0.756996146191046,
            0.683980653676392,
        ];
        for (i, want) in reference.iter().enumerate() {
            let z = (i + 1) as f64 / 10.0;
            let got = entropy_h_inv(z).unwrap();
            assert!((got - want).abs() < 1e-12, "z={z}: {got} vs {want}");
            assert!(got <= h_inv_upper(z).unwrap());
        }
    }

    #[test]
    fn upper_endpoints() {
        assert_eq!(h_inv_upper(1.0).unwrap(), 0.5);
        assert_eq!(h_inv_upper(0.0).unwrap(), 1.0);
    }

    #[test]
    fn h_concave_and_h_inv_monotone() {
        let step = 1e-3;
        for i in 1..1000 {
            let p = i as f64 * step;
            let second = entropy_h(p - step).unwrap() - 2.0 * entropy_h(p).unwrap()
                + entropy_h(p + step).unwrap();
            assert!(second <= 1e-8, "p={p}");
        }
        let mut prev = entropy_h_inv(0.0).unwrap();
        for i in 1..=1000 {
            let cur = entropy_h_inv(i as f64 / 1000.0).unwrap();
            assert!(cur <= prev);
            prev = cur;
        }
    }
}
