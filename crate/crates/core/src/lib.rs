//! Big-key format-preserving encryption on the Thorp shuffle.
//!
//! Each Feistel round XORs a random subset of `k` bits read at
//! oracle-chosen positions of a very large key. The crate also evaluates
//! the leakage-resilience bound for a parameter set and checks the
//! underlying entropy inequalities by exhaustive enumeration.
//!
//! ```
//! use bigkey_fpe::bigkey::RngBytes;
//! use bigkey_fpe::{BigKey, BitString, Cipher, CipherParams, Shake256Oracle};
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha20Rng;
//!
//! let key = BigKey::generate(1 << 16, &mut RngBytes(ChaCha20Rng::seed_from_u64(7)))?;
//! let oracle = Shake256Oracle::new();
//! // 24-bit messages, 40 probes per round, 2 passes (T = 94 rounds)
//! let params = CipherParams::with_passes(key.n_bits(), 24, 40, 2)?;
//! let cipher = Cipher::new(&key, &oracle, params)?;
//!
//! let msg = BitString::from_hex("c0ffee", 24)?;
//! let ct = cipher.encrypt(&msg)?;
//! assert_eq!(ct.len(), 24);
//! assert_eq!(cipher.decrypt(&ct)?, msg);
//! # Ok::<(), bigkey_fpe::Error>(())
//! ```

pub mod bigkey;
pub mod bitstring;
pub mod bounds;
mod error;
pub mod oracle;
pub mod prf;
pub mod thorp;
pub mod verify;

pub use bigkey::{BigKey, KeyHeader};
pub use bitstring::BitString;
pub use error::{Error, Result};
pub use oracle::{RandomOracle, ScriptedOracle, Shake256Oracle};
pub use prf::{BigKeyPrf, CipherParams, ProbeDraw};
pub use thorp::{decrypt, encrypt, Cipher};
