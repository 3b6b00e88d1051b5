use crate::bounds::entropy_h;
use crate::error::{Error, Result};

use super::tables::{DistributionTable, LeakageTable, MAX_TABLE_BITS};

/// Largest `n` for which every parity subset is enumerated.
pub const MAX_PARSEVAL_BITS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParsevalResult {
    /// `E[E(S)^2]` over uniform `S`.
    pub lhs: f64,
    /// `sum_y P(y)^2`.
    pub rhs: f64,
}

/// Every parity bias `E(S) = E[(-1)^{xor_{i in S} Y_i}]`, indexed by the
/// subset mask. `E(∅)` is pinned to 1.
pub fn parity_biases(d: &DistributionTable) -> Result<Vec<f64>> {
    if d.n() > MAX_PARSEVAL_BITS {
        return Err(Error::Resource(format!(
            "n = {} exceeds {MAX_PARSEVAL_BITS} for subset enumeration",
            d.n()
        )));
    }
    // Walsh-Hadamard butterfly: entry S becomes sum_y P(y) (-1)^{|y & S|}.
    let mut e = d.mass().to_vec();
    let mut h = 1;
    while h < e.len() {
        for block in e.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, t) = (*x + *y, *x - *y);
                *x = s;
                *y = t;
            }
        }
        h *= 2;
    }
    e[0] = 1.0;
    Ok(e)
}

pub fn parseval_check(d: &DistributionTable) -> Result<ParsevalResult> {
    let biases = parity_biases(d)?;
    let lhs = biases.iter().map(|e| e * e).sum::<f64>() / biases.len() as f64;
    let rhs = d.mass().iter().map(|p| p * p).sum();
    Ok(ParsevalResult { lhs, rhs })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeakageEntropyResult {
    /// `E[H(S(X))]`, `X` uniform on the domain.
    pub mean_fiber_entropy: f64,
    /// `n0 - l0`.
    pub bound: f64,
    /// `P(H(S(X)) < n0 - l0 - m)`.
    pub tail_prob: f64,
    /// `2^-m`.
    pub tail_bound: f64,
}

pub fn leakage_entropy_check(lt: &LeakageTable, tail_m: f64) -> Result<LeakageEntropyResult> {
    if !tail_m.is_finite() {
        return Err(Error::domain("tail offset must be finite"));
    }
    let domain = (1u64 << lt.n0()) as f64;
    let bound = lt.n0() as f64 - lt.l0() as f64;
    let threshold = bound - tail_m;
    let (mut mean, mut tail) = (0.0, 0u64);
    for size in lt.fiber_sizes().into_iter().filter(|&s| s > 0) {
        let h = (size as f64).log2();
        mean += size as f64 * h;
        if h < threshold {
            tail += size;
        }
    }
    Ok(LeakageEntropyResult {
        mean_fiber_entropy: mean / domain,
        bound,
        tail_prob: tail as f64 / domain,
        tail_bound: (-tail_m).exp2(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionResult {
    /// `sum_i h(P(K[i] = 1))` for `K` uniform on the set.
    pub bit_entropy_sum: f64,
    /// `log2 |S|`.
    pub set_entropy: f64,
}

/// `subset` lists distinct elements of `{0,1}^{n0}` as integers (bit `i - 1`
/// is key bit `i`).
pub fn decomposition_check(n0: u32, subset: &[u32]) -> Result<DecompositionResult> {
    if n0 > MAX_TABLE_BITS {
        return Err(Error::Resource(format!(
            "n0 = {n0} exceeds {MAX_TABLE_BITS}"
        )));
    }
    if subset.is_empty() {
        return Err(Error::domain("subset must be nonempty"));
    }
    let mut seen = vec![false; 1usize << n0];
    let mut ones = vec![0u64; n0 as usize];
    for &x in subset {
        let slot = seen
            .get_mut(x as usize)
            .ok_or_else(|| Error::domain(format!("{x} is outside {{0,1}}^{n0}")))?;
        if std::mem::replace(slot, true) {
            return Err(Error::domain(format!("{x} appears twice")));
        }
        for (i, count) in ones.iter_mut().enumerate() {
            *count += u64::from(x >> i & 1);
        }
    }
    let size = subset.len() as f64;
    let mut sum = 0.0;
    for count in ones {
        sum += entropy_h(count as f64 / size)?;
    }
    Ok(DecompositionResult {
        bit_entropy_sum: sum,
        set_entropy: size.log2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parseval_trivial_cases() {
        for n in 0..8 {
            let p =
                parseval_check(&DistributionTable::point_mass(n, (1 << n) - 1).unwrap()).unwrap();
            assert!((p.lhs - 1.0).abs() < 1e-12 && (p.rhs - 1.0).abs() < 1e-12);
            let u = parseval_check(&DistributionTable::uniform(n).unwrap()).unwrap();
            let want = (-(n as f64)).exp2();
            assert!((u.lhs - want).abs() < 1e-15 && (u.rhs - want).abs() < 1e-15);
        }
    }

    #[test]
    fn parseval_rejects_large_n() {
        let d = DistributionTable::uniform(17).unwrap();
        assert!(matches!(parseval_check(&d), Err(Error::Resource(_))));
    }

    #[test]
    fn biases_match_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = DistributionTable::random(5, &mut rng).unwrap();
        let fast = parity_biases(&d).unwrap();
        for (s, &bias) in fast.iter().enumerate().skip(1) {
            let direct: f64 = d
                .mass()
                .iter()
                .enumerate()
                .map(|(y, p)| {
                    if (y & s).count_ones() % 2 == 0 {
                        *p
                    } else {
                        -p
                    }
                })
                .sum();
            assert!((bias - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn leakage_projection_saturates() {
        let r = leakage_entropy_check(&LeakageTable::projection(4, 2).unwrap(), 2.0).unwrap();
        assert_eq!(r.mean_fiber_entropy, 2.0);
        assert_eq!(r.bound, 2.0);
        assert_eq!(r.tail_prob, 0.0);
    }

    #[test]
    fn leakage_constant() {
        let r = leakage_entropy_check(&LeakageTable::constant(6, 3, 5).unwrap(), 1.0).unwrap();
        assert_eq!(r.mean_fiber_entropy, 6.0);
        assert_eq!(r.bound, 3.0);
    }

    #[test]
    fn leakage_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let lt = LeakageTable::random(10, 3, &mut rng).unwrap();
            let r = leakage_entropy_check(&lt, 2.0).unwrap();
            assert!(r.mean_fiber_entropy >= 7.0);
            assert!(r.tail_prob <= 0.25);
        }
    }

    #[test]
    fn decomposition_cases() {
        let full: Vec<u32> = (0..256).collect();
        let r = decomposition_check(8, &full).unwrap();
        assert!((r.bit_entropy_sum - 8.0).abs() < 1e-12);
        assert_eq!(r.set_entropy, 8.0);
        let single = decomposition_check(8, &[77]).unwrap();
        assert_eq!((single.bit_entropy_sum, single.set_entropy), (0.0, 0.0));
        assert!(decomposition_check(8, &[]).is_err());
        assert!(decomposition_check(8, &[1, 1]).is_err());
        assert!(decomposition_check(8, &[256]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let size = rng.gen_range(1..=256);
            let s: Vec<u32> = sample(&mut rng, 256, size)
                .iter()
                .map(|x| x as u32)
                .collect();
            let r = decomposition_check(8, &s).unwrap();
            assert!(r.bit_entropy_sum >= r.set_entropy - 1e-12);
        }
    }
}
