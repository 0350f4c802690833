//! AOS discrete-log ring signatures over the DL parameters.
//!
//! For a ring `y_0..y_{n-1}` the signature is `(c_0, s_0..s_{n-1})` with
//! `c_{i+1} = H(L, m, g^{s_i} y_i^{c_i})`; it verifies when the chain closes
//! back on `c_0`. Nothing in the signature depends on which position signed.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::RngCore;
use sha2::{Digest, Sha256};

use super::bigint;
use super::codec::{RecordReader, RecordWriter};
use super::dl::{DlKeyPair, DlParams};
use super::SigError;

/// An ordered list of member public keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    pub params: Arc<DlParams>,
    pub keys: Vec<BigUint>,
}

impl Ring {
    /// Requires at least two distinct keys.
    pub fn new(params: Arc<DlParams>, keys: Vec<BigUint>) -> Result<Self, SigError> {
        if keys.len() < 2 {
            return Err(SigError::Parameter(format!("ring of {} keys, need at least 2", keys.len())));
        }
        let distinct: HashSet<&BigUint> = keys.iter().collect();
        if distinct.len() != keys.len() {
            return Err(SigError::Parameter("ring keys must be distinct".into()));
        }
        Ok(Self { params, keys })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSignature {
    pub c1: BigUint,
    pub s: Vec<BigUint>,
}

impl RingSignature {
    pub fn to_bytes(&self, params: &DlParams) -> Vec<u8> {
        let w = params.scalar_len();
        let mut rec = RecordWriter::new().int(&self.c1, w);
        for s in &self.s {
            rec = rec.int(s, w);
        }
        rec.finish()
    }

    pub fn from_bytes(bytes: &[u8], params: &DlParams) -> Result<Self, SigError> {
        let w = params.scalar_len();
        let mut r = RecordReader::new(bytes);
        let c1 = r.int_exact(w)?;
        let mut s = Vec::new();
        while !r.is_empty() {
            s.push(r.int_exact(w)?);
        }
        Ok(Self { c1, s })
    }
}

/// Hash state over the ring and message, cloned for every link of the chain.
fn prefix(ring: &Ring, msg: &[u8]) -> Sha256 {
    let w = ring.params.element_len();
    let mut h = Sha256::new();
    h.update(b"ring-sig");
    h.update((ring.keys.len() as u64).to_be_bytes());
    for y in &ring.keys {
        h.update(bigint::to_fixed_bytes(y, w));
    }
    h.update((msg.len() as u64).to_be_bytes());
    h.update(msg);
    h
}

fn link(prefix: &Sha256, params: &DlParams, commitment: &BigUint) -> BigUint {
    let mut h = prefix.clone();
    h.update(bigint::to_fixed_bytes(commitment, params.element_len()));
    BigUint::from_bytes_be(&h.finalize()) % &params.q
}

pub fn ring_sign<R: RngCore + ?Sized>(
    ring: &Ring,
    signer_index: usize,
    signer: &DlKeyPair,
    msg: &[u8],
    rng: &mut R,
) -> Result<RingSignature, SigError> {
    let n = ring.len();
    if signer_index >= n {
        return Err(SigError::IndexOutOfRing { index: signer_index, size: n });
    }
    if ring.keys[signer_index] != signer.y {
        return Err(SigError::Parameter("signer key does not sit at the given ring index".into()));
    }
    let params = &ring.params;
    let (p, q) = (&params.p, &params.q);
    let state = prefix(ring, msg);
    let mut c = vec![BigUint::default(); n];
    let mut s = vec![BigUint::default(); n];
    let k = params.random_scalar(rng);
    let mut i = (signer_index + 1) % n;
    c[i] = link(&state, params, &params.pow_g_fixed(&k));
    while i != signer_index {
        s[i] = params.random_scalar(rng);
        let commitment = params.pow_g_fixed(&s[i]) * ring.keys[i].modpow(&c[i], p) % p;
        let next = (i + 1) % n;
        c[next] = link(&state, params, &commitment);
        i = next;
    }
    // k = s + x*c  =>  s = k - x*c
    let xc = &signer.x * &c[signer_index] % q;
    s[signer_index] = (k + q - xc) % q;
    Ok(RingSignature { c1: c.swap_remove(0), s })
}

/// Validates every ring key as a subgroup element, then walks the chain.
pub fn ring_verify(ring: &Ring, msg: &[u8], sig: &RingSignature) -> bool {
    let params = &ring.params;
    let (p, q) = (&params.p, &params.q);
    if sig.s.len() != ring.len() || sig.c1 >= *q || sig.s.iter().any(|s| s >= q) {
        return false;
    }
    if !ring.keys.iter().all(|y| params.is_subgroup_element(y)) {
        return false;
    }
    let state = prefix(ring, msg);
    let mut c = sig.c1.clone();
    for (y, s) in ring.keys.iter().zip(&sig.s) {
        let commitment = params.pow_g(s) * y.modpow(&c, p) % p;
        c = link(&state, params, &commitment);
    }
    c == sig.c1
}
