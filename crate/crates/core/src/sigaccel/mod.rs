//! Signature acceleration: batch verification, BLS aggregation,
//! online/offline signing through a chameleon hash, and server-aided BLS
//! verification.

pub mod aggregate;
pub mod batch;
pub mod online;
pub mod server_aided;

use rand::RngCore;

use crate::sigcore::{PublicKey, SigError, Signature};

/// Default small-exponent length in bits.
pub const DEFAULT_SECURITY_BITS: u32 = 80;

#[derive(Debug, thiserror::Error)]
pub enum AccelError {
    #[error("entries mix schemes or are not of the required scheme")]
    MixedScheme,
    #[error("batch is empty")]
    EmptyBatch,
    #[error("offline token already consumed")]
    TokenReused,
    #[error("pairing server unavailable")]
    ServerUnavailable,
    #[error("security parameter {0} outside 1..=128")]
    SecurityParameter(u32),
    #[error(transparent)]
    Sig(#[from] SigError),
}

/// A public key, a message and a signature claimed over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMessage {
    pub public_key: PublicKey,
    pub message: Vec<u8>,
    pub signature: Signature,
}

impl SignedMessage {
    pub fn new(public_key: PublicKey, message: impl Into<Vec<u8>>, signature: Signature) -> Self {
        Self {
            public_key,
            message: message.into(),
            signature,
        }
    }
}

/// A nonzero multiplier below `2^bits`.
pub(crate) fn small_exponent<R: RngCore + ?Sized>(rng: &mut R, bits: u32) -> u128 {
    let mask = if bits >= 128 { u128::MAX } else { (1u128 << bits) - 1 };
    loop {
        let mut b = [0u8; 16];
        rng.fill_bytes(&mut b);
        let v = u128::from_le_bytes(b) & mask;
        if v != 0 {
            return v;
        }
    }
}

pub(crate) fn check_security_bits(bits: u32) -> Result<(), AccelError> {
    if (1..=128).contains(&bits) {
        Ok(())
    } else {
        Err(AccelError::SecurityParameter(bits))
    }
}
