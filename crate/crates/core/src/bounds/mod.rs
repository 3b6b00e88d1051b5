//! Security-bound calculator.
//!
//! The advantage bound is the sum of four terms:
//!
//! ```text
//! mixing    q/(s+1) * (4mq / 2^m)^s
//! probing   (qT/2) * [h^{-1}(1 - (alpha + k)/N)]^{k/2}
//! oracle    q p / 2^{m-1}
//! collision q T / 2^m
//! ```
//!
//! with `alpha = l + m(q+1) + T`. `Γ(q)` is the sum of the first two.
//!
//! Two evaluation routes are provided. [`theorem1_terms`] works in 256-bit
//! binary floating point so that terms far below `f64` resolution of the
//! total keep their value. [`theorem1_log2`] and [`log2_gamma`] work in
//! `f64` in the log domain and drive the curve output.

mod curve;
mod entropy;
mod precise;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use curve::{
    format_sig, gamma_crossing, gamma_curve, log_spaced, write_gamma_csv, GammaRow, CSV_HEADER,
};
pub use entropy::{entropy_h, entropy_h_inv, entropy_upper, h_inv_upper};

use precise::Big;

/// How the `h^{-1}` factor of the probing term is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Bisection inverse of the binary entropy.
    ExactInverse,
    /// The closed-form upper bound `1/2 + 1/2 sqrt(1 - z^{ln 4})`.
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundInputs {
    /// `N`, key length in bits.
    pub n_bits: u64,
    /// `l`, leaked bits.
    pub leak_bits: u64,
    /// `m`, message length in bits.
    pub msg_bits: u32,
    /// `k`, probes per round-function call.
    pub num_probes: u64,
    /// `s`, passes.
    pub passes: u64,
    /// `T`, rounds.
    pub rounds: u64,
    /// `q`, known plaintext/ciphertext pairs.
    pub queries: f64,
    /// `p`, adversary oracle calls.
    pub oracle_calls: f64,
}

impl BoundInputs {
    /// Rounds derived as `T = s(2m - 1)`.
    pub fn new(
        n_bits: u64,
        leak_bits: u64,
        msg_bits: u32,
        num_probes: u64,
        passes: u64,
        queries: f64,
        oracle_calls: f64,
    ) -> Self {
        let rounds = passes.saturating_mul((2 * msg_bits as u64).saturating_sub(1));
        BoundInputs {
            n_bits,
            leak_bits,
            msg_bits,
            num_probes,
            passes,
            rounds,
            queries,
            oracle_calls,
        }
    }

    /// 1 TB key, 1/8 of it leaked, 128-bit messages, k = 500, s = 2, T = 510.
    pub fn terabyte_example(queries: f64) -> Self {
        Self::new(1 << 43, 1 << 40, 128, 500, 2, queries, 0.0)
    }

    pub fn with_rounds(mut self, rounds: u64) -> Self {
        self.rounds = rounds;
        self
    }

    pub fn with_queries(mut self, queries: f64) -> Self {
        self.queries = queries;
        self
    }

    /// `alpha = l + m(q + 1) + T`.
    pub fn alpha(&self) -> f64 {
        self.leak_bits as f64 + self.msg_bits as f64 * (self.queries + 1.0) + self.rounds as f64
    }

    fn alpha_big(&self) -> Big {
        precise::from_u64(self.leak_bits)
            + precise::from_u64(self.msg_bits as u64)
                * (precise::from_f64(self.queries) + precise::one())
            + precise::from_u64(self.rounds)
    }

    /// `1 - (alpha + k)/N`, the argument of `h^{-1}`.
    pub fn h_inv_argument(&self) -> f64 {
        1.0 - (self.alpha() + self.num_probes as f64) / self.n_bits as f64
    }

    fn h_inv_argument_big(&self) -> Big {
        precise::one()
            - (self.alpha_big() + precise::from_u64(self.num_probes))
                / precise::from_u64(self.n_bits)
    }

    /// `floor(l / m)`, the number of ciphertexts the naive adversary leaks.
    pub fn leaked_messages(&self) -> u64 {
        self.leak_bits / self.msg_bits.max(1) as u64
    }

    fn validate(&self) -> Result<()> {
        if self.msg_bits == 0 {
            return Err(Error::domain("m must be at least 1"));
        }
        if self.n_bits == 0 {
            return Err(Error::domain("N must be at least 1"));
        }
        if self.passes == 0 {
            return Err(Error::domain("s must be at least 1"));
        }
        if !(self.queries.is_finite() && self.queries >= 0.0) {
            return Err(Error::domain(format!(
                "q = {} must be finite and >= 0",
                self.queries
            )));
        }
        if !(self.oracle_calls.is_finite() && self.oracle_calls >= 0.0) {
            return Err(Error::domain(format!(
                "p = {} must be finite and >= 0",
                self.oracle_calls
            )));
        }
        Ok(())
    }

    fn validate_argument(&self) -> Result<()> {
        let z = self.h_inv_argument_big();
        if z < Big::ZERO {
            return Err(Error::domain(format!(
                "1 - (alpha + k)/N = {} is negative: leakage, queries and rounds exceed the key",
                precise::to_f64(&z)
            )));
        }
        Ok(())
    }
}

/// The four terms of the advantage bound and their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTerms {
    pub mixing: f64,
    pub probing: f64,
    pub oracle: f64,
    pub collision: f64,
    pub total: f64,
    /// `log2(total)`, exact even where `total` underflows `f64`.
    pub log2_total: f64,
}

impl BoundTerms {
    /// `Γ(q)`, the first two terms.
    pub fn gamma(&self) -> f64 {
        self.mixing + self.probing
    }
}

fn probing_base_big(b: &BoundInputs, variant: Variant) -> Big {
    let z = b.h_inv_argument_big();
    match variant {
        Variant::ExactInverse => precise::entropy_h_inv(&z),
        Variant::ClosedForm => precise::h_inv_upper(&z),
    }
}

/// Advantage bound terms in 256-bit precision.
pub fn theorem1_terms(b: &BoundInputs, variant: Variant) -> Result<BoundTerms> {
    b.validate()?;
    b.validate_argument()?;
    let q = precise::from_f64(b.queries);
    if precise::is_zero(&q) {
        return Ok(BoundTerms {
            mixing: 0.0,
            probing: 0.0,
            oracle: 0.0,
            collision: 0.0,
            total: 0.0,
            log2_total: f64::NEG_INFINITY,
        });
    }
    let m = precise::from_u64(b.msg_bits as u64);
    let two = precise::from_u64(2);
    let two_m = precise::powf(&two, &m);
    let t = precise::from_u64(b.rounds);

    let mixing = mixing_big(&q, b.msg_bits, b.passes);
    let base = probing_base_big(b, variant);
    let half_k = precise::from_u64(b.num_probes) / &two;
    let probing = &q * &t / &two * precise::powf(&base, &half_k);
    let oracle = &q * precise::from_f64(b.oracle_calls) * &two / &two_m;
    let collision = &q * &t / &two_m;
    let total = &mixing + &probing + &oracle + &collision;
    Ok(BoundTerms {
        mixing: precise::to_f64(&mixing),
        probing: precise::to_f64(&probing),
        oracle: precise::to_f64(&oracle),
        collision: precise::to_f64(&collision),
        total: precise::to_f64(&total),
        log2_total: precise::log2(&total),
    })
}

/// The advantage bound, evaluated in 256-bit precision.
pub fn theorem1_bound(b: &BoundInputs, variant: Variant) -> Result<f64> {
    theorem1_terms(b, variant).map(|t| t.total)
}

fn mixing_big(q: &Big, msg_bits: u32, passes: u64) -> Big {
    let two = precise::from_u64(2);
    let m = precise::from_u64(msg_bits as u64);
    let s = precise::from_u64(passes);
    let ratio = precise::from_u64(4) * &m * q / precise::powf(&two, &m);
    q / (&s + precise::one()) * precise::powf(&ratio, &s)
}

/// Idealized-shuffle term `q/(s+1) * (4mq/2^m)^s`.
pub fn thorp_mixing_term(queries: f64, msg_bits: u32, passes: u64) -> Result<f64> {
    if !(queries.is_finite() && queries >= 0.0) || msg_bits == 0 || passes == 0 {
        return Err(Error::domain("need q >= 0, m >= 1 and s >= 1"));
    }
    Ok(precise::to_f64(&mixing_big(
        &precise::from_f64(queries),
        msg_bits,
        passes,
    )))
}

/// `Γ(q)` with the bisection inverse, in 256-bit precision.
pub fn gamma(b: &BoundInputs) -> Result<f64> {
    theorem1_terms(b, Variant::ExactInverse).map(|t| t.gamma())
}

fn log2_sum(parts: &[f64]) -> f64 {
    let max = parts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + parts.iter().map(|x| (x - max).exp2()).sum::<f64>().log2()
}

struct Log2Terms {
    mixing: f64,
    probing: f64,
    oracle: f64,
    collision: f64,
}

fn log2_terms(b: &BoundInputs, variant: Variant) -> Result<Log2Terms> {
    b.validate()?;
    let z = b.h_inv_argument();
    if z < 0.0 {
        return Err(Error::domain(format!(
            "1 - (alpha + k)/N = {z} is negative: leakage, queries and rounds exceed the key"
        )));
    }
    let z = z.min(1.0);
    let lq = b.queries.log2();
    let m = b.msg_bits as f64;
    let s = b.passes as f64;
    let lt = (b.rounds as f64).log2();
    let base = match variant {
        Variant::ExactInverse => entropy_h_inv(z)?,
        Variant::ClosedForm => h_inv_upper(z)?,
    };
    Ok(Log2Terms {
        mixing: lq - (s + 1.0).log2() + s * (2.0 + m.log2() + lq - m),
        probing: lq + lt - 1.0 + b.num_probes as f64 / 2.0 * base.log2(),
        oracle: lq + b.oracle_calls.log2() - (m - 1.0),
        collision: lq + lt - m,
    })
}

/// `log2` of the advantage bound, evaluated in `f64` in the log domain.
pub fn theorem1_log2(b: &BoundInputs, variant: Variant) -> Result<f64> {
    let t = log2_terms(b, variant)?;
    Ok(log2_sum(&[t.mixing, t.probing, t.oracle, t.collision]))
}

/// `log2 Γ(q)` in the log domain, bisection inverse.
pub fn log2_gamma(b: &BoundInputs) -> Result<f64> {
    let t = log2_terms(b, Variant::ExactInverse)?;
    Ok(log2_sum(&[t.mixing, t.probing]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct NaiveBound {
    /// `q floor(l/m) / (4 * 2^m)`.
    pub simple: f64,
    /// `x/(1+x) * (1 - 2^-m)` with `x = q floor(l/m) 2^-m`.
    pub sharper: f64,
    /// Whether `q floor(l/m) <= 2^m`, under which `simple` is a valid bound.
    pub hypothesis_holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactNaiveBound {
    pub simple: BigRational,
    pub sharper: BigRational,
    pub hypothesis_holds: bool,
}

/// Naive-adversary lower bound in exact rational arithmetic.
pub fn naive_adv_lower_exact(b: &BoundInputs) -> Result<ExactNaiveBound> {
    if b.msg_bits == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let q = BigRational::from_float(b.queries)
        .filter(|q| *q >= BigRational::zero())
        .ok_or_else(|| Error::domain(format!("q = {} must be finite and >= 0", b.queries)))?;
    let leaked = BigRational::from_integer(BigInt::from(b.leaked_messages()));
    let two_m = BigRational::from_integer(BigInt::one() << b.msg_bits as usize);
    let x = &q * &leaked;
    let simple = &x / (BigRational::from_integer(BigInt::from(4)) * &two_m);
    let ratio = &x / &two_m;
    let one = BigRational::one();
    let sharper = &ratio / (&one + &ratio) * (&one - &one / &two_m);
    Ok(ExactNaiveBound {
        hypothesis_holds: x <= two_m,
        simple,
        sharper,
    })
}

pub fn naive_adv_lower(b: &BoundInputs) -> Result<NaiveBound> {
    let exact = naive_adv_lower_exact(b)?;
    let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    Ok(NaiveBound {
        simple: f(&exact.simple),
        sharper: f(&exact.sharper),
        hypothesis_holds: exact.hypothesis_holds,
    })
}
