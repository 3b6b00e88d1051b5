//! Maximally unbalanced Feistel network (Thorp shuffle).
//!
//! Round `r` maps `L || R` (with `|L| = 1`) to `R || (L xor F(R, r))`.
//! Encryption applies rounds `1..=T`; decryption undoes them in reverse.

use crate::bigkey::BigKey;
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::oracle::RandomOracle;
use crate::prf::{BigKeyPrf, CipherParams, RoundFunction};

/// A message in flight together with the index of the next round to apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherState {
    bits: BitString,
    next_round: u64,
}

impl CipherState {
    pub fn new(bits: BitString) -> Result<Self> {
        if bits.len() < 2 {
            return Err(Error::DomainTooSmall(bits.len()));
        }
        Ok(CipherState {
            bits,
            next_round: 1,
        })
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn next_round(&self) -> u64 {
        self.next_round
    }

    pub fn into_bits(self) -> BitString {
        self.bits
    }

    pub fn step_forward<F: RoundFunction + ?Sized>(&mut self, f: &F) -> Result<()> {
        self.bits = round_forward(&self.bits, self.next_round, f)?;
        self.next_round += 1;
        Ok(())
    }

    /// Undoes the most recent forward round.
    pub fn step_backward<F: RoundFunction + ?Sized>(&mut self, f: &F) -> Result<()> {
        if self.next_round <= 1 {
            return Err(Error::domain("no round left to undo"));
        }
        self.next_round -= 1;
        self.bits = round_backward(&self.bits, self.next_round, f)?;
        Ok(())
    }
}

pub fn round_forward<F: RoundFunction + ?Sized>(
    state: &BitString,
    round: u64,
    f: &F,
) -> Result<BitString> {
    let (l, r) = state.split_lr()?;
    let l2 = l ^ f.eval(&r, round)?;
    let mut out = r;
    out.push(l2);
    Ok(out)
}

pub fn round_backward<F: RoundFunction + ?Sized>(
    state: &BitString,
    round: u64,
    f: &F,
) -> Result<BitString> {
    if state.len() < 2 {
        return Err(Error::DomainTooSmall(state.len()));
    }
    let m = state.len();
    let l2 = state.get(m)?;
    let r = BitString::from_bits(state.iter().take(m - 1));
    let l = l2 ^ f.eval(&r, round)?;
    Ok(BitString::from_bits([l]).concat(&r))
}

/// Applies rounds `1..=rounds`.
pub fn encrypt_rounds<F: RoundFunction + ?Sized>(
    msg: &BitString,
    rounds: u64,
    f: &F,
) -> Result<BitString> {
    let mut st = CipherState::new(msg.clone())?;
    for _ in 0..rounds {
        st.step_forward(f)?;
    }
    Ok(st.into_bits())
}

/// Undoes rounds `rounds..=1`.
pub fn decrypt_rounds<F: RoundFunction + ?Sized>(
    ct: &BitString,
    rounds: u64,
    f: &F,
) -> Result<BitString> {
    if ct.len() < 2 {
        return Err(Error::DomainTooSmall(ct.len()));
    }
    let mut bits = ct.clone();
    for r in (1..=rounds).rev() {
        bits = round_backward(&bits, r, f)?;
    }
    Ok(bits)
}

/// `X_T(msg)` under the big-key round function.
pub fn encrypt<O: RandomOracle + ?Sized>(
    msg: &BitString,
    key: &BigKey,
    oracle: &O,
    params: &CipherParams,
) -> Result<BitString> {
    Cipher::new(key, oracle, params.clone())?.encrypt(msg)
}

pub fn decrypt<O: RandomOracle + ?Sized>(
    ct: &BitString,
    key: &BigKey,
    oracle: &O,
    params: &CipherParams,
) -> Result<BitString> {
    Cipher::new(key, oracle, params.clone())?.decrypt(ct)
}

/// A key, an oracle and parameters bundled for repeated use.
pub struct Cipher<'a, O: ?Sized> {
    prf: BigKeyPrf<'a, O>,
}

impl<'a, O: RandomOracle + ?Sized> Cipher<'a, O> {
    pub fn new(key: &'a BigKey, oracle: &'a O, params: CipherParams) -> Result<Self> {
        Ok(Cipher {
            prf: BigKeyPrf::new(key, oracle, params)?,
        })
    }

    pub fn params(&self) -> &CipherParams {
        self.prf.params()
    }

    fn check_len(&self, x: &BitString) -> Result<()> {
        let m = self.params().msg_bits();
        if x.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                actual: x.len(),
            });
        }
        Ok(())
    }

    pub fn encrypt(&self, msg: &BitString) -> Result<BitString> {
        self.check_len(msg)?;
        encrypt_rounds(msg, self.params().rounds(), &self.prf)
    }

    pub fn decrypt(&self, ct: &BitString) -> Result<BitString> {
        self.check_len(ct)?;
        decrypt_rounds(ct, self.params().rounds(), &self.prf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{ScriptedOracle, SHAKE256_ID};
    use std::collections::HashSet;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn constant(bit: bool) -> impl Fn(&BitString, u64) -> Result<bool> {
        move |_: &BitString, _: u64| Ok(bit)
    }

    #[test]
    fn forward_examples() {
        assert_eq!(
            round_forward(&bs("101"), 1, &constant(false)).unwrap(),
            bs("011")
        );
        assert_eq!(
            round_forward(&bs("101"), 1, &constant(true)).unwrap(),
            bs("010")
        );
        let zero = constant(false);
        let a = round_forward(&bs("101"), 1, &zero).unwrap();
        let b = round_forward(&a, 2, &zero).unwrap();
        let c = round_forward(&b, 3, &zero).unwrap();
        assert_eq!((a, b.clone(), c), (bs("011"), bs("110"), bs("101")));
    }

    #[test]
    fn backward_examples() {
        assert_eq!(
            round_backward(&bs("011"), 1, &constant(false)).unwrap(),
            bs("101")
        );
        assert_eq!(
            round_backward(&bs("010"), 1, &constant(true)).unwrap(),
            bs("101")
        );
    }

    #[test]
    fn round_inverse_exhaustive_m4() {
        let o = ScriptedOracle::seeded(11);
        let key = BigKey::from_bitstring(&bs("1011001011100101"), SHAKE256_ID).unwrap();
        let params = CipherParams::with_rounds(16, 4, 3, 1).unwrap();
        let prf = BigKeyPrf::new(&key, &o, params).unwrap();
        for r in 1..=6 {
            for v in 0..16 {
                let x = BitString::from_u64(v, 4);
                let y = round_forward(&x, r, &prf).unwrap();
                assert_eq!(round_backward(&y, r, &prf).unwrap(), x);
            }
        }
    }

    #[test]
    fn zero_rounds_is_identity() {
        let x = bs("1101");
        assert_eq!(encrypt_rounds(&x, 0, &constant(true)).unwrap(), x);
        assert_eq!(decrypt_rounds(&x, 0, &constant(true)).unwrap(), x);
    }

    #[test]
    fn single_round_m2_table() {
        // F = 1: "ab" -> "b(a^1)"
        let f = constant(true);
        let table = [("00", "01"), ("01", "11"), ("10", "00"), ("11", "10")];
        for (x, y) in table {
            assert_eq!(encrypt_rounds(&bs(x), 1, &f).unwrap(), bs(y));
            assert_eq!(decrypt_rounds(&bs(y), 1, &f).unwrap(), bs(x));
        }
    }

    #[test]
    fn bijection_m4_seeded() {
        let o = ScriptedOracle::seeded(2024);
        let key = BigKey::from_bitstring(&BitString::from_u64(0x9e3779b97f4a7c15, 64), SHAKE256_ID)
            .unwrap();
        let params = CipherParams::with_rounds(64, 4, 5, 14).unwrap();
        let cipher = Cipher::new(&key, &o, params).unwrap();
        let image: HashSet<u64> = (0..16)
            .map(|v| cipher.encrypt(&BitString::from_u64(v, 4)).unwrap().to_u64())
            .collect();
        assert_eq!(image.len(), 16);
    }

    #[test]
    fn state_steps() {
        let f = constant(true);
        let mut st = CipherState::new(bs("101")).unwrap();
        st.step_forward(&f).unwrap();
        assert_eq!(st.bits(), &bs("010"));
        assert_eq!(st.next_round(), 2);
        st.step_backward(&f).unwrap();
        assert_eq!(st.bits(), &bs("101"));
        assert!(st.step_backward(&f).is_err());
        assert!(CipherState::new(bs("1")).is_err());
    }

    #[test]
    fn length_checked() {
        let o = ScriptedOracle::seeded(0);
        let key = BigKey::from_bitstring(&BitString::zeros(8), SHAKE256_ID).unwrap();
        let c = Cipher::new(&key, &o, CipherParams::with_rounds(8, 4, 1, 3).unwrap()).unwrap();
        assert!(matches!(
            c.encrypt(&bs("101")),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            c.decrypt(&bs("10101")),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
