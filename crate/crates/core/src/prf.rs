//! The big-key round function `F_K(R, r)`.
//!
//! The oracle stream for `(tag 0x01, r, m, R)` is decoded as:
//!
//! 1. `k` probes, each by rejection sampling successive 8-byte big-endian
//!    integers `u`: with `t = N * floor(2^64 / N)`, values `u >= t` are
//!    discarded, otherwise the probe is `(u mod N) + 1`.
//! 2. `ceil(k/8)` bytes of subset mask: probe index `i` is selected iff bit
//!    `(i - 1) % 8` of byte `(i - 1) / 8` is set.
//!
//! The output bit is the XOR of the key bits at the selected probes.

use crate::bigkey::BigKey;
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::oracle::{OracleQuery, OracleStream, RandomOracle};

/// Consecutive rejections tolerated before declaring the stream broken.
pub const MAX_CONSECUTIVE_REJECTIONS: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherParams {
    n_bits: u64,
    msg_bits: usize,
    num_probes: usize,
    passes: Option<u64>,
    rounds: u64,
}

impl CipherParams {
    /// Rounds derived as `T = s(2m - 1)`.
    pub fn with_passes(
        n_bits: u64,
        msg_bits: usize,
        num_probes: usize,
        passes: u64,
    ) -> Result<Self> {
        let rounds = (2 * msg_bits as u64)
            .checked_sub(1)
            .and_then(|r| r.checked_mul(passes))
            .ok_or_else(|| Error::domain("round count overflows"))?;
        let mut p = Self::with_rounds(n_bits, msg_bits, num_probes, rounds)?;
        p.passes = Some(passes);
        Ok(p)
    }

    pub fn with_rounds(
        n_bits: u64,
        msg_bits: usize,
        num_probes: usize,
        rounds: u64,
    ) -> Result<Self> {
        if msg_bits < 2 {
            return Err(Error::DomainTooSmall(msg_bits));
        }
        if msg_bits > u16::MAX as usize {
            return Err(Error::domain(format!("m = {msg_bits} exceeds 65535")));
        }
        if num_probes == 0 {
            return Err(Error::domain("k (probes) must be at least 1"));
        }
        if n_bits == 0 {
            return Err(Error::domain("N (key bits) must be at least 1"));
        }
        Ok(CipherParams {
            n_bits,
            msg_bits,
            num_probes,
            passes: None,
            rounds,
        })
    }

    pub fn n_bits(&self) -> u64 {
        self.n_bits
    }

    pub fn msg_bits(&self) -> usize {
        self.msg_bits
    }

    pub fn num_probes(&self) -> usize {
        self.num_probes
    }

    /// `s`, when the round count was derived from it.
    pub fn passes(&self) -> Option<u64> {
        self.passes
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }
}

/// Probes `P = (P_1..P_k)` and the subset `S` of probe indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeDraw {
    probes: Vec<u64>,
    subset: BitString,
}

impl ProbeDraw {
    pub fn probes(&self) -> &[u64] {
        &self.probes
    }

    /// Membership mask over probe indices `1..=k`.
    pub fn subset(&self) -> &BitString {
        &self.subset
    }

    /// Probe indices (1-based) in `S`.
    pub fn subset_indices(&self) -> Vec<usize> {
        self.subset
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i + 1))
            .collect()
    }

    pub fn selected_probes(&self) -> impl Iterator<Item = u64> + '_ {
        self.probes
            .iter()
            .zip(self.subset.iter())
            .filter_map(|(&p, b)| b.then_some(p))
    }

    /// Decodes a draw from a finite byte string, e.g. a captured oracle
    /// prefix. Fails if the bytes run out.
    pub fn decode(bytes: &[u8], n_bits: u64, num_probes: usize) -> Result<Self> {
        let mut src = SliceSource { bytes, pos: 0 };
        decode_draw(&mut src, n_bits, num_probes)
    }

    /// Decodes a draw from the front of an oracle stream.
    pub fn from_stream(stream: &mut OracleStream, n_bits: u64, num_probes: usize) -> Result<Self> {
        decode_draw(stream, n_bits, num_probes)
    }
}

trait DrawSource {
    fn fill(&mut self, buf: &mut [u8]) -> Result<()>;
}

impl DrawSource for OracleStream {
    fn fill(&mut self, buf: &mut [u8]) -> Result<()> {
        OracleStream::fill(self, buf);
        Ok(())
    }
}

struct SliceSource<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl DrawSource for SliceSource<'_> {
    fn fill(&mut self, buf: &mut [u8]) -> Result<()> {
        let end = self.pos + buf.len();
        let src = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::domain("probe stream exhausted"))?;
        buf.copy_from_slice(src);
        self.pos = end;
        Ok(())
    }
}

/// `N * floor(2^64 / N)`: the largest multiple of `N` not above `2^64`.
pub fn rejection_threshold(n_bits: u64) -> u128 {
    let b = 1u128 << 64;
    (b / n_bits as u128) * n_bits as u128
}

fn decode_draw(src: &mut impl DrawSource, n_bits: u64, num_probes: usize) -> Result<ProbeDraw> {
    if n_bits == 0 {
        return Err(Error::domain("N (key bits) must be at least 1"));
    }
    let t = rejection_threshold(n_bits);
    let mut probes = Vec::with_capacity(num_probes);
    let mut rejections = 0u32;
    let mut word = [0u8; 8];
    while probes.len() < num_probes {
        src.fill(&mut word)?;
        let u = u64::from_be_bytes(word);
        if (u as u128) >= t {
            rejections += 1;
            if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                return Err(Error::Internal(format!(
                    "{rejections} consecutive probe rejections for N = {n_bits}"
                )));
            }
            continue;
        }
        rejections = 0;
        probes.push(u % n_bits + 1);
    }
    let mut mask = vec![0u8; num_probes.div_ceil(8)];
    src.fill(&mut mask)?;
    let subset = BitString::from_bytes_masked(&mask, num_probes)?;
    Ok(ProbeDraw { probes, subset })
}

fn check_inputs(r_bits: &BitString, round: u64, params: &CipherParams) -> Result<()> {
    if round == 0 {
        return Err(Error::domain("round index r must be at least 1"));
    }
    if r_bits.len() + 1 != params.msg_bits {
        return Err(Error::LengthMismatch {
            expected: params.msg_bits - 1,
            actual: r_bits.len(),
        });
    }
    Ok(())
}

/// Queries the oracle on `(R, r)` and decodes `(P, S)`.
pub fn derive_probes<O: RandomOracle + ?Sized>(
    oracle: &O,
    r_bits: &BitString,
    round: u64,
    params: &CipherParams,
) -> Result<ProbeDraw> {
    check_inputs(r_bits, round, params)?;
    let query = OracleQuery::probes(round, r_bits.clone())?;
    let mut stream = oracle.open(&query);
    ProbeDraw::from_stream(&mut stream, params.n_bits, params.num_probes)
}

/// `F_K(R, r) = XOR_{i in S} K[P_i]`; the empty XOR is 0.
pub fn prf_bit<O: RandomOracle + ?Sized>(
    key: &BigKey,
    oracle: &O,
    r_bits: &BitString,
    round: u64,
    params: &CipherParams,
) -> Result<bool> {
    if key.n_bits() != params.n_bits {
        return Err(Error::domain(format!(
            "key has N = {} bits but parameters specify N = {}",
            key.n_bits(),
            params.n_bits
        )));
    }
    let draw = derive_probes(oracle, r_bits, round, params)?;
    let mut acc = false;
    for p in draw.selected_probes() {
        acc ^= key.bit(p)?;
    }
    Ok(acc)
}

/// A Feistel round function `(R, r) -> bit`.
pub trait RoundFunction {
    fn eval(&self, r_bits: &BitString, round: u64) -> Result<bool>;
}

impl<F: Fn(&BitString, u64) -> Result<bool>> RoundFunction for F {
    fn eval(&self, r_bits: &BitString, round: u64) -> Result<bool> {
        self(r_bits, round)
    }
}

/// The big-key PRF bound to a key, an oracle and parameters.
pub struct BigKeyPrf<'a, O: ?Sized> {
    key: &'a BigKey,
    oracle: &'a O,
    params: CipherParams,
}

impl<'a, O: RandomOracle + ?Sized> BigKeyPrf<'a, O> {
    pub fn new(key: &'a BigKey, oracle: &'a O, params: CipherParams) -> Result<Self> {
        if key.n_bits() != params.n_bits {
            return Err(Error::domain(format!(
                "key has N = {} bits but parameters specify N = {}",
                key.n_bits(),
                params.n_bits
            )));
        }
        Ok(BigKeyPrf {
            key,
            oracle,
            params,
        })
    }

    pub fn params(&self) -> &CipherParams {
        &self.params
    }
}

impl<O: RandomOracle + ?Sized> RoundFunction for BigKeyPrf<'_, O> {
    fn eval(&self, r_bits: &BitString, round: u64) -> Result<bool> {
        prf_bit(self.key, self.oracle, r_bits, round, &self.params)
    }
}
