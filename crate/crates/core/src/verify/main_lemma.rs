use rayon::prelude::*;

use crate::bounds::entropy_h_inv;
use crate::error::{Error, Result};

use super::tables::LeakageTable;

/// Largest key for probe-tuple enumeration.
pub const MAX_ENUM_KEY_BITS: u32 = 14;
/// Cap on `n0^k * |S_l| * k` elementary steps.
pub const MAX_ENUM_WORK: u128 = 1 << 36;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainLemmaResult {
    /// `E[g_l(P_1..P_k)]` over independent uniform probes.
    pub expected_g: f64,
    /// `h^{-1}(1 - (alpha + k)/n0)^k`, or `None` when the argument is negative.
    pub bound: Option<f64>,
    /// `n0 - log2 |S_l|`.
    pub alpha: f64,
    pub fiber_size: u64,
    pub tuples: u128,
}

impl MainLemmaResult {
    pub fn bound_domain_valid(&self) -> bool {
        self.bound.is_some()
    }

    /// True when the bound is out of domain or holds to `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.bound.is_none_or(|b| self.expected_g <= b + tol)
    }
}

/// Exact `E[g_l]`: every probe tuple in `{1..n0}^k`, every key in the fiber.
pub fn main_lemma_check(lt: &LeakageTable, leak_value: u32, k: u32) -> Result<MainLemmaResult> {
    let n0 = lt.n0();
    if n0 == 0 || n0 > MAX_ENUM_KEY_BITS {
        return Err(Error::Resource(format!(
            "n0 = {n0} outside 1..={MAX_ENUM_KEY_BITS} for probe enumeration"
        )));
    }
    if k == 0 || k > 16 {
        return Err(Error::Resource(format!("k = {k} outside 1..=16")));
    }
    let fiber = lt.fiber(leak_value);
    if fiber.is_empty() {
        return Err(Error::domain(format!(
            "leak value {leak_value} has an empty fiber"
        )));
    }
    let tuples = (n0 as u128).pow(k);
    let work = tuples * fiber.len() as u128 * k as u128;
    if work > MAX_ENUM_WORK {
        return Err(Error::Resource(format!(
            "{work} enumeration steps exceed {MAX_ENUM_WORK}"
        )));
    }

    let collisions: u128 = (0..tuples as u64)
        .into_par_iter()
        .map_init(
            || (vec![0u32; 1usize << k], vec![0u32; k as usize]),
            |(counts, probes), mut t| {
                for p in probes.iter_mut() {
                    *p = (t % n0 as u64) as u32;
                    t /= n0 as u64;
                }
                counts.iter_mut().for_each(|c| *c = 0);
                for &x in &fiber {
                    let pattern = probes
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (j, &p)| acc | ((x >> p & 1) as usize) << j);
                    counts[pattern] += 1;
                }
                counts
                    .iter()
                    .map(|&c| u128::from(c) * u128::from(c))
                    .sum::<u128>()
            },
        )
        .sum();

    let size = fiber.len() as u64;
    let expected_g = collisions as f64 / (tuples as f64 * (size as f64).powi(2));
    let alpha = n0 as f64 - (size as f64).log2();
    let arg = 1.0 - (alpha + k as f64) / n0 as f64;
    let bound = if arg < 0.0 {
        None
    } else {
        Some(entropy_h_inv(arg.min(1.0))?.powi(k as i32))
    };
    Ok(MainLemmaResult {
        expected_g,
        bound,
        alpha,
        fiber_size: size,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_space_single_probe() {
        let lt = LeakageTable::constant(6, 1, 0).unwrap();
        let r = main_lemma_check(&lt, 0, 1).unwrap();
        assert_eq!(r.expected_g, 0.5);
        assert_eq!(r.alpha, 0.0);
        assert!(r.bound.unwrap() >= 0.5);
        assert!(r.holds(0.0));
    }

    #[test]
    fn singleton_fiber_flags_domain() {
        let lt = LeakageTable::projection(6, 6).unwrap();
        let r = main_lemma_check(&lt, 13, 2).unwrap();
        assert_eq!(r.expected_g, 1.0);
        assert_eq!(r.alpha, 6.0);
        assert!(!r.bound_domain_valid());
    }

    #[test]
    fn projection_pairs() {
        let lt = LeakageTable::projection(8, 2).unwrap();
        let r = main_lemma_check(&lt, 1, 2).unwrap();
        assert_eq!(r.tuples, 64);
        assert_eq!(r.fiber_size, 64);
        assert!((r.bound.unwrap() - 0.792_050_402_076_143_9).abs() < 1e-12);
        assert!(r.holds(1e-12));
        // known bits are 1 and 2; each probe hits them with chance 1/4
        // g = 1 for (known, known); 1/2 if one side free; else 1/2 or 1/4
        let want = (4.0 * 1.0 + 2.0 * 2.0 * 6.0 * 0.5 + 6.0 * 0.5 + 30.0 * 0.25) / 64.0;
        assert!((r.expected_g - want).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let lt = LeakageTable::constant(15, 1, 0).unwrap();
        assert!(matches!(
            main_lemma_check(&lt, 0, 1),
            Err(Error::Resource(_))
        ));
        let lt = LeakageTable::constant(4, 1, 0).unwrap();
        assert!(main_lemma_check(&lt, 1, 1).is_err());
        assert!(main_lemma_check(&lt, 0, 0).is_err());
    }
}
