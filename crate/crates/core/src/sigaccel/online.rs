//! Online/offline signing with a discrete-log chameleon hash
//! `CH(m, r) = g^H(m) * h^r mod p`, `h = g^x`.
//!
//! Offline: pick a random `m'`, `r'` and sign `CH(m', r')` with the base
//! scheme. Online: with the trapdoor `x`, find `r` such that
//! `CH(m, r) = CH(m', r')`, i.e. `r = (H(m') + x r' - H(m)) / x mod q`. That is
//! one modular multiplication per message.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};

use super::AccelError;
use crate::sigcore::bigint::{self, hash_to_scalar};
use crate::sigcore::dl::DlParams;
use crate::sigcore::{self, KeyPair, PublicKey, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChameleonKey {
    pub params: Arc<DlParams>,
    pub h: BigUint,
}

impl ChameleonKey {
    pub fn hash(&self, msg: &[u8], r: &BigUint) -> BigUint {
        let p = &self.params.p;
        let hm = message_scalar(&self.params, msg);
        self.params.pow_g(&hm) * self.h.modpow(r, p) % p
    }

    fn encode(&self, value: &BigUint) -> Vec<u8> {
        bigint::to_fixed_bytes(value, self.params.element_len())
    }
}

fn message_scalar(params: &DlParams, msg: &[u8]) -> BigUint {
    hash_to_scalar(&params.q, &[b"ch-msg", msg])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnlinePublicKey {
    pub chameleon: ChameleonKey,
    pub base: PublicKey,
}

#[derive(Debug, Clone)]
pub struct OnlineSigner {
    chameleon: ChameleonKey,
    x: BigUint,
    x_inv: BigUint,
    base: KeyPair,
}

/// A single-use precomputed signature.
#[derive(Debug)]
pub struct OfflineToken {
    // H(m') + x r' mod q
    k: BigUint,
    base_signature: Signature,
    used: AtomicBool,
}

impl OfflineToken {
    pub fn is_used(&self) -> bool {
        self.used.load(Ordering::Acquire)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnlineSignature {
    pub r: BigUint,
    pub base: Signature,
}

impl OnlineSignature {
    pub fn size_bytes(&self, params: &DlParams) -> usize {
        params.scalar_len() + self.base.bytes.len()
    }
}

impl OnlineSigner {
    pub fn new<R: RngCore + ?Sized>(params: Arc<DlParams>, base: KeyPair, rng: &mut R) -> Self {
        let x = params.random_scalar(rng);
        let x_inv = bigint::mod_inverse(&x, &params.q).expect("q is prime and x is nonzero");
        let h = params.pow_g_fixed(&x);
        Self {
            chameleon: ChameleonKey { params, h },
            x,
            x_inv,
            base,
        }
    }

    pub fn public(&self) -> OnlinePublicKey {
        OnlinePublicKey {
            chameleon: self.chameleon.clone(),
            base: self.base.public(),
        }
    }

    pub fn offline<R: RngCore + CryptoRng>(&self, rng: &mut R) -> Result<OfflineToken, AccelError> {
        let params = &self.chameleon.params;
        let mut m = [0u8; 32];
        rng.fill_bytes(&mut m);
        let r = params.random_scalar(rng);
        let k = (message_scalar(params, &m) + &self.x * &r) % &params.q;
        let ch = params.pow_g_fixed(&k);
        let base_signature = sigcore::sign(&self.base, &self.chameleon.encode(&ch), rng)?;
        Ok(OfflineToken {
            k,
            base_signature,
            used: AtomicBool::new(false),
        })
    }

    /// Consumes the token. A second call on the same token is an error.
    pub fn online_sign(&self, token: &OfflineToken, msg: &[u8]) -> Result<OnlineSignature, AccelError> {
        if token.used.swap(true, Ordering::AcqRel) {
            return Err(AccelError::TokenReused);
        }
        let q = &self.chameleon.params.q;
        let hm = message_scalar(&self.chameleon.params, msg);
        let r = (&token.k + q - hm) % q * &self.x_inv % q;
        Ok(OnlineSignature {
            r,
            base: token.base_signature.clone(),
        })
    }
}

pub fn online_verify(pk: &OnlinePublicKey, msg: &[u8], sig: &OnlineSignature) -> bool {
    if sig.r >= pk.chameleon.params.q {
        return false;
    }
    let ch = pk.chameleon.hash(msg, &sig.r);
    sigcore::verify(&pk.base, &pk.chameleon.encode(&ch), &sig.base).unwrap_or(false)
}
