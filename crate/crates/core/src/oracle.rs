//! Random oracle instantiations.
//!
//! A query is serialized to a fixed-width byte string and expanded into an
//! unbounded, prefix-consistent byte stream:
//!
//! ```text
//! tag: u8 | round: u64 BE | m: u16 BE | R: ceil((m-1)/8) bytes, big-endian bit order
//! ```
//!
//! [`Shake256Oracle`] is the production backend. [`ScriptedOracle`] lets tests
//! pin the leading bytes of any stream and falls back to a seeded generator.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io;
use std::sync::Mutex;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::bitstring::BitString;
use crate::error::{Error, Result};

/// Probe and subset derivation for the round function.
pub const TAG_PROBES: u8 = 0x01;
/// Reserved for key-generation expansion.
pub const TAG_KEYGEN: u8 = 0x02;

const HEADER_LEN: usize = 1 + 8 + 2;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OracleQuery {
    domain_tag: u8,
    round: u64,
    r_bits: BitString,
}

impl OracleQuery {
    /// `r_bits` is the `m - 1` bit remainder; `m` must fit in 16 bits.
    pub fn new(domain_tag: u8, round: u64, r_bits: BitString) -> Result<Self> {
        if r_bits.len() + 1 > u16::MAX as usize {
            return Err(Error::domain(format!(
                "message length {} exceeds the 16-bit length field",
                r_bits.len() + 1
            )));
        }
        Ok(OracleQuery {
            domain_tag,
            round,
            r_bits,
        })
    }

    pub fn probes(round: u64, r_bits: BitString) -> Result<Self> {
        Self::new(TAG_PROBES, round, r_bits)
    }

    pub fn domain_tag(&self) -> u8 {
        self.domain_tag
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn msg_bits(&self) -> u16 {
        (self.r_bits.len() + 1) as u16
    }

    pub fn r_bits(&self) -> &BitString {
        &self.r_bits
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.r_bits.len().div_ceil(8));
        out.push(self.domain_tag);
        out.extend_from_slice(&self.round.to_be_bytes());
        out.extend_from_slice(&self.msg_bits().to_be_bytes());
        out.extend_from_slice(&self.r_bits.to_be_bytes());
        out
    }

    /// Strict inverse of [`to_bytes`](Self::to_bytes).
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::domain("oracle query shorter than its fixed header"));
        }
        let domain_tag = bytes[0];
        let round = u64::from_be_bytes(bytes[1..9].try_into().unwrap());
        let m = u16::from_be_bytes([bytes[9], bytes[10]]) as usize;
        if m == 0 {
            return Err(Error::domain("oracle query declares m = 0"));
        }
        let body = &bytes[HEADER_LEN..];
        if body.len() != (m - 1).div_ceil(8) {
            return Err(Error::domain(format!(
                "oracle query body is {} bytes, m = {m} needs {}",
                body.len(),
                (m - 1).div_ceil(8)
            )));
        }
        let r_bits = BitString::from_be_bytes(body, m - 1)?;
        Ok(OracleQuery {
            domain_tag,
            round,
            r_bits,
        })
    }
}

impl fmt::Debug for OracleQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleQuery")
            .field("tag", &self.domain_tag)
            .field("round", &self.round)
            .field("r", &self.r_bits)
            .finish()
    }
}

/// Raw byte source behind an [`OracleStream`].
pub trait ByteSource: Send {
    fn fill(&mut self, buf: &mut [u8]);
}

impl<R: XofReader + Send> ByteSource for R {
    fn fill(&mut self, buf: &mut [u8]) {
        self.read(buf);
    }
}

/// The output stream for one query, consumed front to back.
pub struct OracleStream {
    query: OracleQuery,
    position: u64,
    source: Box<dyn ByteSource>,
}

impl OracleStream {
    pub fn new(query: OracleQuery, source: Box<dyn ByteSource>) -> Self {
        OracleStream {
            query,
            position: 0,
            source,
        }
    }

    pub fn query(&self) -> &OracleQuery {
        &self.query
    }

    /// Bytes consumed so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn fill(&mut self, buf: &mut [u8]) {
        self.source.fill(buf);
        self.position += buf.len() as u64;
    }

    pub fn take(&mut self, n: usize) -> Vec<u8> {
        let mut buf = vec![0; n];
        self.fill(&mut buf);
        buf
    }

    pub fn next_u64_be(&mut self) -> u64 {
        let mut buf = [0; 8];
        self.fill(&mut buf);
        u64::from_be_bytes(buf)
    }
}

impl io::Read for OracleStream {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        self.fill(buf);
        Ok(buf.len())
    }
}

pub trait RandomOracle: Send + Sync {
    /// Identifier pinned in key files.
    fn id(&self) -> &str;

    fn open(&self, query: &OracleQuery) -> OracleStream;

    /// First `n` bytes of the stream for `query`.
    fn stream(&self, query: &OracleQuery, n: usize) -> Vec<u8> {
        self.open(query).take(n)
    }

    /// Number of distinct queries seen so far.
    fn distinct_queries(&self) -> u64;
}

#[derive(Default)]
struct QueryLog(Mutex<HashSet<Vec<u8>>>);

impl QueryLog {
    fn record(&self, encoded: &[u8]) {
        let mut seen = self.0.lock().unwrap_or_else(|e| e.into_inner());
        if !seen.contains(encoded) {
            seen.insert(encoded.to_vec());
        }
    }

    fn count(&self) -> u64 {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).len() as u64
    }
}

pub const SHAKE256_ID: &str = "SHAKE256";

/// Production oracle: SHAKE256 over the serialized query.
#[derive(Default)]
pub struct Shake256Oracle {
    log: QueryLog,
}

impl Shake256Oracle {
    pub fn new() -> Self {
        Self::default()
    }
}

impl RandomOracle for Shake256Oracle {
    fn id(&self) -> &str {
        SHAKE256_ID
    }

    fn open(&self, query: &OracleQuery) -> OracleStream {
        let encoded = query.to_bytes();
        self.log.record(&encoded);
        let mut hasher = Shake256::default();
        hasher.update(&encoded);
        OracleStream::new(query.clone(), Box::new(hasher.finalize_xof()))
    }

    fn distinct_queries(&self) -> u64 {
        self.log.count()
    }
}

/// Test oracle: each stream starts with a script (per query, or a default for
/// all queries) and continues with ChaCha20 output keyed by the seed and query.
pub struct ScriptedOracle {
    seed: u64,
    scripts: HashMap<Vec<u8>, Vec<u8>>,
    default_script: Option<Vec<u8>>,
    log: QueryLog,
}

impl ScriptedOracle {
    /// No scripts: a seeded pseudorandom oracle.
    pub fn seeded(seed: u64) -> Self {
        ScriptedOracle {
            seed,
            scripts: HashMap::new(),
            default_script: None,
            log: QueryLog::default(),
        }
    }

    pub fn with_script(mut self, query: &OracleQuery, bytes: impl Into<Vec<u8>>) -> Self {
        self.scripts.insert(query.to_bytes(), bytes.into());
        self
    }

    /// Script used for every query without its own script.
    pub fn with_default_script(mut self, bytes: impl Into<Vec<u8>>) -> Self {
        self.default_script = Some(bytes.into());
        self
    }

    fn fallback(&self, encoded: &[u8]) -> ChaCha20Rng {
        let mut h = Sha256::new();
        sha2::Digest::update(&mut h, self.seed.to_be_bytes());
        sha2::Digest::update(&mut h, encoded);
        ChaCha20Rng::from_seed(h.finalize().into())
    }
}

struct ScriptedSource {
    script: Vec<u8>,
    pos: usize,
    rng: ChaCha20Rng,
}

impl ByteSource for ScriptedSource {
    fn fill(&mut self, buf: &mut [u8]) {
        let from_script = (self.script.len() - self.pos).min(buf.len());
        buf[..from_script].copy_from_slice(&self.script[self.pos..self.pos + from_script]);
        self.pos += from_script;
        self.rng.fill_bytes(&mut buf[from_script..]);
    }
}

impl RandomOracle for ScriptedOracle {
    fn id(&self) -> &str {
        "SCRIPTED"
    }

    fn open(&self, query: &OracleQuery) -> OracleStream {
        let encoded = query.to_bytes();
        self.log.record(&encoded);
        let script = self
            .scripts
            .get(&encoded)
            .or(self.default_script.as_ref())
            .cloned()
            .unwrap_or_default();
        let source = ScriptedSource {
            script,
            pos: 0,
            rng: self.fallback(&encoded),
        };
        OracleStream::new(query.clone(), Box::new(source))
    }

    fn distinct_queries(&self) -> u64 {
        self.log.count()
    }
}
