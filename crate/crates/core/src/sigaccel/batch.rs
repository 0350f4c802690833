//! Batch verification.
//!
//! BLS batches use the small-exponent test: every entry gets a random
//! `l`-bit multiplier `d_i` and the batch is accepted when
//! `e(sum d_i s_i, g2) = prod_j e(sum_{i in j} d_i H(m_i), pk_j)`, with
//! entries grouped by signer. A batch holding an invalid entry passes with
//! probability at most `2^-l`. Same-signer RSA batches use the same test
//! in `Z_N^*`: `(prod s_i^d_i)^e = prod H(m_i)^d_i`. Entries off by an
//! element of order 2 (such as `N - s`) pass it with probability 1/2.
//! Mixed-signer RSA batches and the other schemes are verified entry by
//! entry.

use num_bigint::BigUint;
use rand::RngCore;

use super::{check_security_bits, small_exponent, AccelError, SignedMessage, DEFAULT_SECURITY_BITS};
use crate::sigcore::bls::{self, BlsPublicKey};
use crate::sigcore::codec::RecordReader;
use crate::sigcore::pairing::{neg_g2_prepared, pairing_product, G1Affine, G1};
use crate::sigcore::rsa::{full_domain_hash, RsaPublicKey};
use crate::sigcore::{self, PublicKey, SchemeId};

#[derive(Debug, Clone)]
pub struct BatchInstance {
    pub scheme: SchemeId,
    pub entries: Vec<SignedMessage>,
    pub security_bits: u32,
}

impl BatchInstance {
    pub fn new(scheme: SchemeId, entries: Vec<SignedMessage>) -> Self {
        Self {
            scheme,
            entries,
            security_bits: DEFAULT_SECURITY_BITS,
        }
    }
}

pub fn batch_verify<R: RngCore + ?Sized>(batch: &BatchInstance, rng: &mut R) -> Result<bool, AccelError> {
    check_security_bits(batch.security_bits)?;
    if batch.entries.is_empty() {
        return Err(AccelError::EmptyBatch);
    }
    let mixed = batch
        .entries
        .iter()
        .any(|e| e.public_key.scheme() != batch.scheme || e.signature.scheme != batch.scheme);
    if mixed {
        return Err(AccelError::MixedScheme);
    }
    Ok(match batch.scheme {
        SchemeId::Bls => bls_batch(&batch.entries, batch.security_bits, rng),
        SchemeId::Rsa => rsa_batch(&batch.entries, batch.security_bits, rng),
        _ => individually(&batch.entries),
    })
}

fn individually(entries: &[SignedMessage]) -> bool {
    entries
        .iter()
        .all(|e| sigcore::verify(&e.public_key, &e.message, &e.signature).unwrap_or(false))
}

fn decode_bls(bytes: &[u8]) -> Option<G1Affine> {
    let mut r = RecordReader::new(bytes);
    let sig = bls::decode_signature(r.element().ok()?)?;
    r.finish().ok()?;
    Some(sig)
}

fn bls_batch<R: RngCore + ?Sized>(entries: &[SignedMessage], bits: u32, rng: &mut R) -> bool {
    let mut sigs = Vec::with_capacity(entries.len());
    let mut hashes = Vec::with_capacity(entries.len());
    for e in entries {
        let Some(sig) = decode_bls(&e.signature.bytes) else {
            return false;
        };
        sigs.push(sig);
        hashes.push(bls::hash_message(&e.message).to_affine());
    }
    let deltas: Vec<u128> = (0..entries.len()).map(|_| small_exponent(rng, bits)).collect();
    let bits = bits as usize;
    let sig_side = G1::msm_small(&sigs, &deltas, bits).to_affine();

    // group entries by signer, keeping first-seen order
    let mut signers: Vec<(&BlsPublicKey, Vec<usize>)> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let PublicKey::Bls(pk) = &e.public_key else {
            return false;
        };
        match signers.iter_mut().find(|(k, _)| *k == pk) {
            Some((_, idx)) => idx.push(i),
            None => signers.push((pk, vec![i])),
        }
    }
    let msg_sides: Vec<G1Affine> = signers
        .iter()
        .map(|(_, idx)| {
            let pts: Vec<G1Affine> = idx.iter().map(|&i| hashes[i]).collect();
            let ks: Vec<u128> = idx.iter().map(|&i| deltas[i]).collect();
            G1::msm_small(&pts, &ks, bits).to_affine()
        })
        .collect();
    let mut terms = vec![(&sig_side, neg_g2_prepared())];
    for ((pk, _), m) in signers.iter().zip(&msg_sides) {
        terms.push((m, pk.prepared()));
    }
    pairing_product(&terms).is_one()
}

fn rsa_batch<R: RngCore + ?Sized>(entries: &[SignedMessage], bits: u32, rng: &mut R) -> bool {
    let PublicKey::Rsa(first) = &entries[0].public_key else {
        return false;
    };
    let same_signer = entries.iter().all(|e| matches!(&e.public_key, PublicKey::Rsa(k) if k == first));
    if !same_signer {
        return individually(entries);
    }
    rsa_small_exponent(first, entries, bits, rng)
}

fn rsa_small_exponent<R: RngCore + ?Sized>(
    pk: &RsaPublicKey,
    entries: &[SignedMessage],
    bits: u32,
    rng: &mut R,
) -> bool {
    let n = &pk.n;
    let mut sig_prod = BigUint::from(1u32);
    let mut msg_prod = BigUint::from(1u32);
    for e in entries {
        let mut r = RecordReader::new(&e.signature.bytes);
        let Ok(s) = r.int_exact(pk.modulus_len()) else {
            return false;
        };
        if r.finish().is_err() || s >= *n {
            return false;
        }
        let d = BigUint::from(small_exponent(rng, bits));
        sig_prod = sig_prod * s.modpow(&d, n) % n;
        msg_prod = msg_prod * full_domain_hash(&e.message, n).modpow(&d, n) % n;
    }
    sig_prod.modpow(&pk.e, n) == msg_prod
}
