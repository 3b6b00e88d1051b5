//! Fixed-seed verification suites behind `verify --all` / `--suite`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::{ChaCha20Rng, ChaCha8Rng};

use crate::bigkey::{BigKey, RngBytes};
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::oracle::{ScriptedOracle, Shake256Oracle};
use crate::prf::CipherParams;
use crate::thorp::Cipher;

use super::bias::{bias_estimate, KeyLaw};
use super::checks::{decomposition_check, leakage_entropy_check, parseval_check};
use super::main_lemma::main_lemma_check;
use super::report::{CheckReport, Relation};
use super::tables::{DistributionTable, LeakageTable};

pub const SUITE_NAMES: [&str; 6] = [
    "parseval",
    "fiber-entropy",
    "decomposition",
    "probing",
    "bias",
    "bijection",
];

const EXACT: f64 = 1e-12;

pub fn run_suite(name: &str) -> Result<Vec<CheckReport>> {
    match name {
        "parseval" => parseval_suite(),
        "fiber-entropy" => fiber_entropy_suite(),
        "decomposition" => decomposition_suite(),
        "probing" => probing_suite(),
        "bias" => bias_suite(),
        "bijection" => bijection_suite(),
        other => Err(Error::domain(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

pub fn run_all() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for name in SUITE_NAMES {
        out.extend(run_suite(name)?);
    }
    Ok(out)
}

fn parseval_suite() -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5041);
    let mut out = Vec::new();
    for n in 1..=10 {
        for i in 0..500 {
            let p = parseval_check(&DistributionTable::random(n, &mut rng)?)?;
            out.push(CheckReport::compare(
                "parseval",
                format!("n{n}-{i:03}"),
                p.lhs,
                Relation::Eq,
                Some(p.rhs),
                EXACT,
            ));
        }
    }
    Ok(out)
}

fn fiber_entropy_suite() -> Result<Vec<CheckReport>> {
    const S: &str = "fiber-entropy";
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c31);
    let mut tables = vec![
        ("projection".to_owned(), LeakageTable::projection(4, 2)?),
        ("constant".to_owned(), LeakageTable::constant(10, 3, 0)?),
    ];
    for i in 0..100 {
        tables.push((
            format!("random-{i:03}"),
            LeakageTable::random(10, 3, &mut rng)?,
        ));
    }
    let mut out = Vec::new();
    for (name, lt) in tables {
        let r = leakage_entropy_check(&lt, 2.0)?;
        out.push(CheckReport::compare(
            S,
            format!("{name}-mean"),
            r.mean_fiber_entropy,
            Relation::Ge,
            Some(r.bound),
            0.0,
        ));
        out.push(CheckReport::compare(
            S,
            format!("{name}-tail"),
            r.tail_prob,
            Relation::Le,
            Some(r.tail_bound),
            0.0,
        ));
    }
    Ok(out)
}

fn decomposition_suite() -> Result<Vec<CheckReport>> {
    const S: &str = "decomposition";
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c33);
    let mut sets: Vec<(String, Vec<u32>)> = vec![
        ("full".into(), (0..256).collect()),
        ("singleton".into(), vec![42]),
    ];
    for i in 0..100 {
        let size = rng.gen_range(1..=256);
        sets.push((
            format!("random-{i:03}"),
            sample(&mut rng, 256, size)
                .iter()
                .map(|x| x as u32)
                .collect(),
        ));
    }
    let mut out = Vec::new();
    for (name, set) in sets {
        let r = decomposition_check(8, &set)?;
        out.push(CheckReport::compare(
            S,
            name,
            r.bit_entropy_sum,
            Relation::Ge,
            Some(r.set_entropy),
            EXACT,
        ));
    }
    Ok(out)
}

fn probing_suite() -> Result<Vec<CheckReport>> {
    const S: &str = "probing";
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c36);
    let mut cases = vec![("projection2".to_owned(), LeakageTable::projection(8, 2)?, 2)];
    for i in 0..20 {
        let l0 = 1 + i % 2;
        let k = 1 + i % 3;
        cases.push((
            format!("random-{i:02}"),
            LeakageTable::random(8, l0, &mut rng)?,
            k,
        ));
    }
    let mut out = Vec::new();
    for (name, lt, k) in cases {
        for (leak, &size) in lt.fiber_sizes().iter().enumerate() {
            if size == 0 {
                continue;
            }
            let r = main_lemma_check(&lt, leak as u32, k)?;
            out.push(CheckReport::compare(
                S,
                format!("{name}-l{leak}-k{k}"),
                r.expected_g,
                Relation::Le,
                r.bound,
                EXACT,
            ));
        }
    }
    Ok(out)
}

fn bias_suite() -> Result<Vec<CheckReport>> {
    const S: &str = "bias";
    let mut out = Vec::new();

    let params = CipherParams::with_rounds(64, 8, 4, 1)?;
    let zero = BigKey::from_bitstring(&BitString::zeros(64), "SCRIPTED")?;
    let r = bias_estimate(
        &zero,
        &ScriptedOracle::seeded(7),
        &params,
        KeyLaw::Uniform,
        10_000,
    )?;
    out.push(CheckReport::compare(
        S,
        "zero-key",
        r.empirical_tv,
        Relation::Eq,
        Some(0.5),
        0.0,
    ));

    let ones = BigKey::from_bitstring(
        &BitString::from_bits(std::iter::repeat_n(true, 64)),
        "SCRIPTED",
    )?;
    let empty = ScriptedOracle::seeded(7).with_default_script(vec![0u8; 33]);
    let r = bias_estimate(&ones, &empty, &params, KeyLaw::Uniform, 10_000)?;
    out.push(CheckReport::compare(
        S,
        "empty-subset",
        r.empirical_tv,
        Relation::Eq,
        Some(0.5),
        0.0,
    ));

    let mut rng = RngBytes(ChaCha20Rng::seed_from_u64(0xb1a5));
    let key = BigKey::generate(4096, &mut rng)?;
    let params = CipherParams::with_rounds(4096, 16, 32, 1)?;
    let r = bias_estimate(
        &key,
        &Shake256Oracle::new(),
        &params,
        KeyLaw::Uniform,
        100_000,
    )?;
    out.push(CheckReport::compare(
        S,
        "uniform-key",
        r.empirical_tv,
        Relation::Le,
        Some(0.01),
        0.0,
    ));
    Ok(out)
}

fn bijection_suite() -> Result<Vec<CheckReport>> {
    const S: &str = "bijection";
    let mut rng = RngBytes(ChaCha20Rng::seed_from_u64(0xb17e));
    let key = BigKey::generate(64, &mut rng)?;
    let oracle = Shake256Oracle::new();
    let mut out = Vec::new();
    for m in 2..=8usize {
        let cipher = Cipher::new(&key, &oracle, CipherParams::with_passes(64, m, 4, 2)?)?;
        let mut seen = vec![false; 1 << m];
        let mut inverse_ok = 0u64;
        for x in 0..1u64 << m {
            let msg = BitString::from_u64(x, m);
            let ct = cipher.encrypt(&msg)?;
            seen[ct.to_u64() as usize] = true;
            inverse_ok += u64::from(cipher.decrypt(&ct)? == msg);
        }
        let image = seen.iter().filter(|&&s| s).count() as f64;
        out.push(CheckReport::compare(
            S,
            format!("m{m}-image"),
            image,
            Relation::Eq,
            Some((1u64 << m) as f64),
            0.0,
        ));
        out.push(CheckReport::compare(
            S,
            format!("m{m}-inverse"),
            inverse_ok as f64,
            Relation::Eq,
            Some((1u64 << m) as f64),
            0.0,
        ));
    }
    Ok(out)
}
