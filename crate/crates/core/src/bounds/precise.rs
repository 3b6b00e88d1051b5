//! 256-bit binary floating point for bound evaluation.

use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

pub(crate) type Big = FBig<HalfEven, 2>;

pub(crate) const PRECISION: usize = 256;

pub(crate) fn from_f64(x: f64) -> Big {
    Big::try_from(x)
        .expect("finite value")
        .with_precision(PRECISION)
        .value()
}

pub(crate) fn from_u64(x: u64) -> Big {
    Big::from(x).with_precision(PRECISION).value()
}

pub(crate) fn to_f64(x: &Big) -> f64 {
    x.to_f64().value()
}

pub(crate) fn one() -> Big {
    from_u64(1)
}

pub(crate) fn ln2() -> Big {
    from_u64(2).ln()
}

pub(crate) fn is_zero(x: &Big) -> bool {
    x.repr().is_zero()
}

/// `x^y` for `x >= 0`; `0^y = 0` for `y > 0`.
pub(crate) fn powf(x: &Big, y: &Big) -> Big {
    if is_zero(x) {
        return x.clone();
    }
    (x.ln() * y).exp()
}

pub(crate) fn log2(x: &Big) -> f64 {
    to_f64(&(x.ln() / ln2()))
}

pub(crate) fn sqrt(x: &Big) -> Big {
    x.sqrt()
}

fn xlnx(x: &Big) -> Big {
    if is_zero(x) {
        x.clone()
    } else {
        x * x.ln()
    }
}

/// Binary entropy; `p` must lie in `[0, 1]`.
pub(crate) fn entropy_h(p: &Big) -> Big {
    let q = one() - p;
    -(xlnx(p) + xlnx(&q)) / ln2()
}

/// Inverse of `h` on `[1/2, 1]` by bisection to `2^-250`.
pub(crate) fn entropy_h_inv(z: &Big) -> Big {
    let half = one() / from_u64(2);
    let mut lo = half.clone();
    let mut hi = one();
    for _ in 0..250 {
        let mid = (&lo + &hi) / from_u64(2);
        if entropy_h(&mid) > *z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / from_u64(2)
}

/// `1/2 + 1/2 sqrt(1 - z^{ln 4})`.
pub(crate) fn h_inv_upper(z: &Big) -> Big {
    let ln4 = from_u64(4).ln();
    let radicand = one() - powf(z, &ln4);
    let half = one() / from_u64(2);
    let root = if radicand <= Big::ZERO {
        Big::ZERO.with_precision(PRECISION).value()
    } else {
        sqrt(&radicand)
    };
    &half + &half * root
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_f64_route() {
        for z in [0.05, 0.3, 0.5, 0.875, 0.99] {
            let big = to_f64(&entropy_h_inv(&from_f64(z)));
            let small = super::super::entropy::entropy_h_inv(z).unwrap();
            assert!((big - small).abs() < 1e-14, "{z}");
            let up_big = to_f64(&h_inv_upper(&from_f64(z)));
            let up = super::super::entropy::h_inv_upper(z).unwrap();
            assert!((up_big - up).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_is_tight() {
        let z = from_f64(0.875);
        let back = entropy_h(&entropy_h_inv(&z));
        assert!(to_f64(&(back - z)).abs() < 1e-60);
    }

    #[test]
    fn tiny_values_survive() {
        let x = from_u64(1) / powf(&from_u64(2), &from_u64(300));
        assert!((log2(&x) + 300.0).abs() < 1e-9);
    }
}
