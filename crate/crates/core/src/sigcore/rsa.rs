//! Full-domain-hash RSA.
//!
//! The message digest is expanded with MGF1-SHA256 to one bit less than the
//! modulus and raised to the private exponent. Signing uses the single
//! exponentiation `h^d mod N` without CRT.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

use super::bigint;
use super::SigError;

pub const DEFAULT_MODULUS_BITS: u64 = 1024;
pub const DEFAULT_PUBLIC_EXPONENT: u32 = 65537;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaPublicKey {
    pub n: BigUint,
    pub e: BigUint,
}

#[derive(Clone, PartialEq, Eq)]
pub struct RsaKeyPair {
    pub n: BigUint,
    pub e: BigUint,
    pub d: BigUint,
    pub p: BigUint,
    pub q: BigUint,
}

impl fmt::Debug for RsaKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RsaKeyPair")
            .field("n_bits", &self.n.bits())
            .field("e", &self.e)
            .finish_non_exhaustive()
    }
}

/// Minimum prime distance for a modulus of `modulus_bits`: `2^(bits/2 - 100)`,
/// which is `2^412` at 1024 bits.
pub fn min_prime_distance(modulus_bits: u64) -> BigUint {
    BigUint::one() << (modulus_bits / 2).saturating_sub(100)
}

impl RsaKeyPair {
    pub fn generate<R: RngCore + CryptoRng>(modulus_bits: u64, e: u32, rng: &mut R) -> Result<Self, SigError> {
        if modulus_bits < DEFAULT_MODULUS_BITS && !super::insecure_params_allowed() {
            return Err(SigError::InsecureParameters(format!("{modulus_bits}-bit RSA modulus")));
        }
        if !modulus_bits.is_multiple_of(2) || modulus_bits < 16 {
            return Err(SigError::Parameter(format!("unsupported modulus size {modulus_bits}")));
        }
        let e_big = BigUint::from(e);
        let half = modulus_bits / 2;
        let min_gap = min_prime_distance(modulus_bits);
        let coprime = |x: &BigUint| (x - 1u32).gcd(&e_big).is_one();
        let p = loop {
            let p = bigint::random_prime(half, rng);
            if coprime(&p) {
                break p;
            }
        };
        let q = loop {
            let q = bigint::random_prime(half, rng);
            let gap = if q > p { &q - &p } else { &p - &q };
            if coprime(&q) && gap > min_gap {
                break q;
            }
        };
        Self::from_primes(p, q, e_big)
    }

    /// Builds a key from known primes. Moduli below 1024 bits need the
    /// insecure-parameters gate.
    pub fn from_primes(p: BigUint, q: BigUint, e: BigUint) -> Result<Self, SigError> {
        let n = &p * &q;
        if n.bits() < DEFAULT_MODULUS_BITS && !super::insecure_params_allowed() {
            return Err(SigError::InsecureParameters(format!("{}-bit RSA modulus", n.bits())));
        }
        if p == q {
            return Err(SigError::Parameter("p and q must differ".into()));
        }
        let phi = (&p - 1u32) * (&q - 1u32);
        let d = bigint::mod_inverse(&e, &phi)
            .ok_or_else(|| SigError::Parameter("e is not invertible modulo phi(N)".into()))?;
        Ok(Self { n, e, d, p, q })
    }

    pub fn public(&self) -> RsaPublicKey {
        RsaPublicKey {
            n: self.n.clone(),
            e: self.e.clone(),
        }
    }

    /// The RSA private operation on an already-encoded representative.
    pub fn sign_representative(&self, m: &BigUint) -> BigUint {
        m.modpow(&self.d, &self.n)
    }

    pub fn sign(&self, msg: &[u8]) -> BigUint {
        self.sign_representative(&full_domain_hash(msg, &self.n))
    }
}

impl RsaPublicKey {
    pub fn modulus_len(&self) -> usize {
        bigint::byte_width(&self.n)
    }

    pub fn verify(&self, msg: &[u8], sig: &BigUint) -> bool {
        if *sig >= self.n {
            return false;
        }
        sig.modpow(&self.e, &self.n) == full_domain_hash(msg, &self.n)
    }
}

/// MGF1-SHA256 expansion of SHA-256(msg) to `bits(N) - 1` bits, so the
/// result is always below `N`.
pub fn full_domain_hash(msg: &[u8], n: &BigUint) -> BigUint {
    let target_bits = n.bits() - 1;
    let out_len = target_bits.div_ceil(8) as usize;
    let seed = Sha256::digest(msg);
    let mut out = Vec::with_capacity(out_len + 32);
    let mut counter = 0u32;
    while out.len() < out_len {
        let mut h = Sha256::new();
        h.update(seed);
        h.update(counter.to_be_bytes());
        out.extend_from_slice(&h.finalize());
        counter += 1;
    }
    out.truncate(out_len);
    let excess = out_len as u64 * 8 - target_bits;
    if excess > 0 {
        out[0] &= 0xFF >> excess;
    }
    BigUint::from_bytes_be(&out)
}
