//! The big key: generation, key files and probe reads.
//!
//! Key file layout (all integers big-endian):
//!
//! ```text
//! magic  "BKEY"              4 bytes
//! version 0x01               1 byte
//! id_len                     1 byte
//! oracle id (ASCII)          id_len bytes
//! N                          8 bytes
//! key payload                ceil(N/8) bytes, LSB-first packing, pad bits zero
//! ```
//!
//! File-backed keys are never loaded whole: each probe reads the one byte
//! that holds it.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use rand::RngCore;

use crate::bitstring::{last_byte_mask, BitString};
use crate::error::{Error, Result};
use crate::oracle::SHAKE256_ID;

pub const KEY_MAGIC: [u8; 4] = *b"BKEY";
pub const KEY_VERSION: u8 = 1;
pub const MIN_KEY_BITS: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyHeader {
    version: u8,
    n_bits: u64,
    oracle_id: String,
}

impl KeyHeader {
    pub fn new(n_bits: u64, oracle_id: &str) -> Result<Self> {
        if n_bits < MIN_KEY_BITS {
            return Err(Error::KeyTooSmall(n_bits));
        }
        if !oracle_id.is_ascii() || oracle_id.len() > u8::MAX as usize {
            return Err(Error::domain(
                "oracle id must be ASCII and at most 255 bytes",
            ));
        }
        Ok(KeyHeader {
            version: KEY_VERSION,
            n_bits,
            oracle_id: oracle_id.to_string(),
        })
    }

    pub fn version(&self) -> u8 {
        self.version
    }

    pub fn n_bits(&self) -> u64 {
        self.n_bits
    }

    pub fn oracle_id(&self) -> &str {
        &self.oracle_id
    }

    /// Size of the key payload in bytes.
    pub fn payload_len(&self) -> u64 {
        self.n_bits.div_ceil(8)
    }

    pub fn encoded_len(&self) -> usize {
        4 + 1 + 1 + self.oracle_id.len() + 8
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&KEY_MAGIC);
        out.push(self.version);
        out.push(self.oracle_id.len() as u8);
        out.extend_from_slice(self.oracle_id.as_bytes());
        out.extend_from_slice(&self.n_bits.to_be_bytes());
        out
    }

    /// Parses a header from the front of `bytes`, returning it and the
    /// number of bytes consumed.
    pub fn parse(bytes: &[u8]) -> Result<(KeyHeader, usize)> {
        let corrupt = |why: &str| Error::CorruptKeyFile(why.to_string());
        if bytes.len() < 6 {
            return Err(corrupt("truncated header"));
        }
        if bytes[..4] != KEY_MAGIC {
            return Err(corrupt("bad magic"));
        }
        if bytes[4] != KEY_VERSION {
            return Err(Error::UnsupportedVersion(bytes[4]));
        }
        let id_len = bytes[5] as usize;
        let end = 6 + id_len + 8;
        if bytes.len() < end {
            return Err(corrupt("truncated header"));
        }
        let id = &bytes[6..6 + id_len];
        if !id.is_ascii() {
            return Err(corrupt("oracle id is not ASCII"));
        }
        let n_bits = u64::from_be_bytes(bytes[6 + id_len..end].try_into().unwrap());
        if n_bits < MIN_KEY_BITS {
            return Err(corrupt("key length below 8 bits"));
        }
        let header = KeyHeader {
            version: KEY_VERSION,
            n_bits,
            oracle_id: String::from_utf8(id.to_vec()).expect("ascii"),
        };
        Ok((header, end))
    }

    fn check_oracle(&self, expected: &str) -> Result<()> {
        if self.oracle_id != expected {
            return Err(Error::OracleMismatch {
                expected: expected.to_string(),
                found: self.oracle_id.clone(),
            });
        }
        Ok(())
    }
}

/// Random access to the key payload.
pub trait KeyStore: Send + Sync {
    /// Byte `offset` of the payload (not counting the header).
    fn read_byte(&self, offset: u64) -> io::Result<u8>;
}

impl KeyStore for Vec<u8> {
    fn read_byte(&self, offset: u64) -> io::Result<u8> {
        self.get(offset as usize)
            .copied()
            .ok_or_else(|| io::Error::new(io::ErrorKind::UnexpectedEof, "offset past key payload"))
    }
}

/// Payload served by positioned reads on an open key file.
pub struct FileStore {
    file: File,
    payload_offset: u64,
}

impl FileStore {
    fn read_at(&self, buf: &mut [u8], offset: u64) -> io::Result<()> {
        #[cfg(unix)]
        {
            use std::os::unix::fs::FileExt;
            self.file.read_exact_at(buf, offset)
        }
        #[cfg(windows)]
        {
            use std::os::windows::fs::FileExt;
            let mut done = 0;
            while done < buf.len() {
                let n = self
                    .file
                    .seek_read(&mut buf[done..], offset + done as u64)?;
                if n == 0 {
                    return Err(io::ErrorKind::UnexpectedEof.into());
                }
                done += n;
            }
            Ok(())
        }
    }
}

impl KeyStore for FileStore {
    fn read_byte(&self, offset: u64) -> io::Result<u8> {
        let mut b = [0u8];
        self.read_at(&mut b, self.payload_offset + offset)?;
        Ok(b[0])
    }
}

/// Adapts any RNG into a randomness byte stream for key generation.
pub struct RngBytes<R>(pub R);

impl<R: RngCore> Read for RngBytes<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        self.0.fill_bytes(buf);
        Ok(buf.len())
    }
}

pub struct BigKey {
    header: KeyHeader,
    store: Box<dyn KeyStore>,
}

impl BigKey {
    /// In-memory key from `ceil(N/8)` bytes of `randomness`, pinned to the
    /// production oracle.
    pub fn generate(n_bits: u64, randomness: &mut impl Read) -> Result<Self> {
        Self::generate_with(KeyHeader::new(n_bits, SHAKE256_ID)?, randomness)
    }

    pub fn generate_with(header: KeyHeader, randomness: &mut impl Read) -> Result<Self> {
        let needed = header.payload_len();
        let len = usize::try_from(needed)
            .map_err(|_| Error::Resource(format!("{needed}-byte key does not fit in memory")))?;
        let mut payload = vec![0u8; len];
        let got = read_full(randomness, &mut payload)?;
        if got < len {
            return Err(Error::InsufficientRandomness {
                needed,
                got: got as u64,
            });
        }
        mask_tail(&mut payload, header.n_bits);
        Ok(BigKey {
            header,
            store: Box::new(payload),
        })
    }

    /// Streams a fresh key straight to disk without holding it in memory.
    pub fn generate_to_file(
        path: impl AsRef<Path>,
        header: &KeyHeader,
        randomness: &mut impl Read,
    ) -> Result<()> {
        const CHUNK: u64 = 1 << 20;
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(&header.encode())?;
        let total = header.payload_len();
        let mut buf = vec![0u8; CHUNK.min(total) as usize];
        let mut written = 0u64;
        while written < total {
            let n = CHUNK.min(total - written) as usize;
            let chunk = &mut buf[..n];
            let got = read_full(randomness, chunk)?;
            if got < n {
                return Err(Error::InsufficientRandomness {
                    needed: total,
                    got: written + got as u64,
                });
            }
            if written + n as u64 == total {
                mask_tail(chunk, header.n_bits);
            }
            out.write_all(chunk)?;
            written += n as u64;
        }
        out.flush()?;
        Ok(())
    }

    pub fn from_bitstring(bits: &BitString, oracle_id: &str) -> Result<Self> {
        let header = KeyHeader::new(bits.len() as u64, oracle_id)?;
        Ok(BigKey {
            header,
            store: Box::new(bits.to_bytes()),
        })
    }

    /// Wraps an arbitrary store. The store must serve `header.payload_len()` bytes.
    pub fn from_store(header: KeyHeader, store: Box<dyn KeyStore>) -> Self {
        BigKey { header, store }
    }

    /// Parses a complete key file image held in memory.
    pub fn from_file_bytes(bytes: &[u8], expected_oracle: &str) -> Result<Self> {
        let (header, start) = KeyHeader::parse(bytes)?;
        header.check_oracle(expected_oracle)?;
        check_total_len(&header, start as u64, bytes.len() as u64)?;
        let payload = bytes[start..].to_vec();
        if let Some(&last) = payload.last() {
            check_tail(&header, last)?;
        }
        Ok(BigKey {
            header,
            store: Box::new(payload),
        })
    }

    /// Opens a key file for probe access. Only the header and the final
    /// payload byte are read up front.
    pub fn open(path: impl AsRef<Path>, expected_oracle: &str) -> Result<Self> {
        let mut file = File::open(path)?;
        let file_len = file.metadata()?.len();
        let mut head = vec![0u8; 6];
        let got = read_full(&mut file, &mut head)?;
        head.truncate(got);
        if got == 6 && head[..4] == KEY_MAGIC && head[4] == KEY_VERSION {
            let mut rest = vec![0u8; head[5] as usize + 8];
            let got = read_full(&mut file, &mut rest)?;
            head.extend_from_slice(&rest[..got]);
        }
        let (header, start) = KeyHeader::parse(&head)?;
        header.check_oracle(expected_oracle)?;
        check_total_len(&header, start as u64, file_len)?;
        let store = FileStore {
            file,
            payload_offset: start as u64,
        };
        check_tail(&header, store.read_byte(header.payload_len() - 1)?)?;
        Ok(BigKey {
            header,
            store: Box::new(store),
        })
    }

    /// Reads a whole key file into memory.
    pub fn load(path: impl AsRef<Path>, expected_oracle: &str) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        Self::from_file_bytes(&bytes, expected_oracle)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(&self.header.encode())?;
        let mut chunk = Vec::with_capacity(1 << 16);
        for offset in 0..self.header.payload_len() {
            chunk.push(self.store.read_byte(offset)?);
            if chunk.len() == chunk.capacity() {
                out.write_all(&chunk)?;
                chunk.clear();
            }
        }
        out.write_all(&chunk)?;
        out.flush()?;
        Ok(())
    }

    pub fn header(&self) -> &KeyHeader {
        &self.header
    }

    pub fn n_bits(&self) -> u64 {
        self.header.n_bits
    }

    /// Key bit `i`, 1-based.
    pub fn bit(&self, i: u64) -> Result<bool> {
        if i == 0 || i > self.header.n_bits {
            return Err(Error::Addressing {
                index: i,
                len: self.header.n_bits,
            });
        }
        let byte = self.store.read_byte((i - 1) / 8)?;
        Ok(byte >> ((i - 1) % 8) & 1 == 1)
    }

    /// `K[P] = (K[P_1], ..., K[P_k])`; repeated probes are allowed.
    pub fn subkey(&self, probes: &[u64]) -> Result<BitString> {
        let mut out = BitString::zeros(probes.len());
        for (j, &p) in probes.iter().enumerate() {
            if self.bit(p)? {
                out.set(j + 1, true)?;
            }
        }
        Ok(out)
    }

    /// Whole key as a bit string. Only sensible for small keys.
    pub fn to_bitstring(&self) -> Result<BitString> {
        let len = usize::try_from(self.header.n_bits)
            .map_err(|_| Error::Resource("key too large to materialize".into()))?;
        let bytes = (0..self.header.payload_len())
            .map(|o| self.store.read_byte(o))
            .collect::<io::Result<Vec<u8>>>()?;
        BitString::from_bytes(&bytes, len)
    }
}

impl std::fmt::Debug for BigKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BigKey")
            .field("header", &self.header)
            .finish_non_exhaustive()
    }
}

fn read_full(src: &mut impl Read, buf: &mut [u8]) -> io::Result<usize> {
    let mut done = 0;
    while done < buf.len() {
        match src.read(&mut buf[done..]) {
            Ok(0) => break,
            Ok(n) => done += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(done)
}

fn mask_tail(payload: &mut [u8], n_bits: u64) {
    if let Some(last) = payload.last_mut() {
        *last &= last_byte_mask((n_bits % 8) as usize);
    }
}

fn check_tail(header: &KeyHeader, last: u8) -> Result<()> {
    if last & !last_byte_mask((header.n_bits % 8) as usize) != 0 {
        return Err(Error::CorruptKeyFile("nonzero pad bits".into()));
    }
    Ok(())
}

fn check_total_len(header: &KeyHeader, header_len: u64, total: u64) -> Result<()> {
    let expected = header_len
        .checked_add(header.payload_len())
        .ok_or_else(|| Error::CorruptKeyFile("declared length overflows".into()))?;
    if total != expected {
        return Err(Error::CorruptKeyFile(format!(
            "expected {expected} bytes for N = {}, found {total}",
            header.n_bits
        )));
    }
    Ok(())
}
