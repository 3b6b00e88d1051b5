use std::collections::HashMap;

use crate::bigkey::BigKey;
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::oracle::RandomOracle;
use crate::prf::{derive_probes, CipherParams};

use super::main_lemma::MAX_ENUM_KEY_BITS;
use super::tables::LeakageTable;

pub const MIN_BIAS_TRIALS: u64 = 10_000;

/// Law of the key on the right-hand side of the bias bound.
#[derive(Clone, Copy, Debug)]
pub enum KeyLaw<'a> {
    /// Uniform on `{0,1}^N`.
    Uniform,
    /// Uniform on the fiber of `leak` under `table`.
    Fiber { table: &'a LeakageTable, leak: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasResult {
    /// `|freq(F = 1) - 1/2|` over the sampled queries.
    pub empirical_tv: f64,
    /// `1/2 E[sqrt(sum_y P(K[p_1..p_k] = y)^2)]` over the sampled probe tuples.
    pub corollary_bound: f64,
    pub ones: u64,
    pub trials: u64,
}

/// Evaluates the round function of `key` on `trials` distinct queries
/// (`round = t + 1`, `R` = low bits of `t`) and, per query, the collision
/// mass of the probed key bits under `law`.
pub fn bias_estimate<O: RandomOracle + ?Sized>(
    key: &BigKey,
    oracle: &O,
    params: &CipherParams,
    law: KeyLaw<'_>,
    trials: u64,
) -> Result<BiasResult> {
    if trials < MIN_BIAS_TRIALS {
        return Err(Error::domain(format!(
            "{trials} trials is below the minimum of {MIN_BIAS_TRIALS}"
        )));
    }
    if key.n_bits() != params.n_bits() {
        return Err(Error::domain("key size does not match the parameters"));
    }
    let fiber = match law {
        KeyLaw::Uniform => None,
        KeyLaw::Fiber { table, leak } => {
            if table.n0() as u64 != key.n_bits() || table.n0() > MAX_ENUM_KEY_BITS {
                return Err(Error::Resource(format!(
                    "conditional law needs a key of at most {MAX_ENUM_KEY_BITS} bits matching the table"
                )));
            }
            if params.num_probes() > 128 {
                return Err(Error::Resource("conditional law supports k <= 128".into()));
            }
            let fiber = table.fiber(leak);
            if fiber.is_empty() {
                return Err(Error::domain(format!(
                    "leak value {leak} has an empty fiber"
                )));
            }
            Some(fiber)
        }
    };

    let width = (params.msg_bits() - 1).min(64);
    let pad = BitString::zeros(params.msg_bits() - 1 - width);
    let mut ones = 0u64;
    let mut root_sum = 0.0;
    for t in 0..trials {
        let r_bits = pad.concat(&BitString::from_u64(t, width));
        let draw = derive_probes(oracle, &r_bits, t + 1, params)?;
        let mut bit = false;
        for p in draw.selected_probes() {
            bit ^= key.bit(p)?;
        }
        ones += u64::from(bit);
        root_sum += match &fiber {
            None => {
                let mut distinct = draw.probes().to_vec();
                distinct.sort_unstable();
                distinct.dedup();
                (-(distinct.len() as f64) / 2.0).exp2()
            }
            Some(fiber) => fiber_collision(fiber, draw.probes()).sqrt(),
        };
    }
    Ok(BiasResult {
        empirical_tv: (ones as f64 / trials as f64 - 0.5).abs(),
        corollary_bound: 0.5 * root_sum / trials as f64,
        ones,
        trials,
    })
}

/// `sum_y P(K[p] = y)^2` for `K` uniform on `fiber`; probes are 1-based.
fn fiber_collision(fiber: &[u32], probes: &[u64]) -> f64 {
    let mut counts: HashMap<u128, u64> = HashMap::new();
    for &x in fiber {
        let pattern = probes.iter().enumerate().fold(0u128, |acc, (j, &p)| {
            acc | u128::from(x >> (p - 1) & 1) << j
        });
        *counts.entry(pattern).or_default() += 1;
    }
    let size = fiber.len() as f64;
    counts.values().map(|&c| (c as f64 / size).powi(2)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ScriptedOracle;

    #[test]
    fn all_zero_key_is_maximally_biased() {
        let key = BigKey::from_bitstring(&BitString::zeros(64), "SCRIPTED").unwrap();
        let params = CipherParams::with_rounds(64, 8, 4, 1).unwrap();
        let r = bias_estimate(
            &key,
            &ScriptedOracle::seeded(1),
            &params,
            KeyLaw::Uniform,
            10_000,
        )
        .unwrap();
        assert_eq!(r.empirical_tv, 0.5);
        assert_eq!(r.ones, 0);
    }

    #[test]
    fn empty_subset_is_maximally_biased() {
        let ones = BitString::from_bits(std::iter::repeat_n(true, 16));
        let key = BigKey::from_bitstring(&ones, "SCRIPTED").unwrap();
        let params = CipherParams::with_rounds(16, 8, 2, 1).unwrap();
        // probe bytes decode to probe 1 twice, subset byte 0 selects nothing
        let script = [0u8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0];
        let oracle = ScriptedOracle::seeded(2).with_default_script(script.to_vec());
        let r = bias_estimate(&key, &oracle, &params, KeyLaw::Uniform, 10_000).unwrap();
        assert_eq!(r.empirical_tv, 0.5);
        assert!((r.corollary_bound - 0.5 * 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fiber_collision_values() {
        let full: Vec<u32> = (0..16).collect();
        assert_eq!(fiber_collision(&full, &[1, 2]), 0.25);
        assert_eq!(fiber_collision(&full, &[3, 3]), 0.5);
        assert_eq!(fiber_collision(&[5], &[1, 2, 3]), 1.0);
    }

    #[test]
    fn preconditions() {
        let key = BigKey::from_bitstring(&BitString::zeros(16), "SCRIPTED").unwrap();
        let params = CipherParams::with_rounds(16, 8, 2, 1).unwrap();
        let o = ScriptedOracle::seeded(0);
        assert!(bias_estimate(&key, &o, &params, KeyLaw::Uniform, 9_999).is_err());
        let lt = LeakageTable::constant(15, 1, 0).unwrap();
        let law = KeyLaw::Fiber {
            table: &lt,
            leak: 0,
        };
        assert!(bias_estimate(&key, &o, &params, law, 10_000).is_err());
    }
}
