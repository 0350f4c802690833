//! BLS short signatures on BLS12-381 with signatures in G1 and public keys
//! in G2.

use std::fmt;

use rand::RngCore;

use super::pairing::{neg_g2_prepared, pairing_product, G1Affine, G2Affine, G2Prepared, Scalar, G1, G2};

pub const SIGNATURE_DST: &[u8] = b"NDNSEC-BLS-SIG-BLS12381G1_XMD:SHA-256_SSWU_RO_";
pub const SIGNATURE_LEN: usize = super::pairing::G1_COMPRESSED_LEN;
pub const PUBLIC_KEY_LEN: usize = super::pairing::G2_COMPRESSED_LEN;

pub fn hash_message(msg: &[u8]) -> G1 {
    G1::hash(msg, SIGNATURE_DST)
}

#[derive(Clone)]
pub struct BlsPublicKey {
    prepared: G2Prepared,
}

impl fmt::Debug for BlsPublicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlsPublicKey({})", hex::encode(self.to_bytes()))
    }
}

impl PartialEq for BlsPublicKey {
    fn eq(&self, other: &Self) -> bool {
        self.point() == other.point()
    }
}

impl Eq for BlsPublicKey {}

impl BlsPublicKey {
    pub fn new(point: G2Affine) -> Self {
        Self {
            prepared: G2Prepared::new(point),
        }
    }

    pub fn point(&self) -> &G2Affine {
        self.prepared.point()
    }

    pub fn prepared(&self) -> &G2Prepared {
        &self.prepared
    }

    pub fn to_bytes(&self) -> [u8; PUBLIC_KEY_LEN] {
        self.point().to_compressed()
    }

    /// Decompresses and subgroup-checks a public key; the identity is
    /// rejected.
    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let point = G2Affine::from_compressed(bytes)?;
        if point.is_identity() {
            return None;
        }
        Some(Self::new(point))
    }
}

#[derive(Clone)]
pub struct BlsKeyPair {
    pub secret: Scalar,
    pub public: BlsPublicKey,
}

impl fmt::Debug for BlsKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlsKeyPair").field("public", &self.public).finish_non_exhaustive()
    }
}

impl PartialEq for BlsKeyPair {
    fn eq(&self, other: &Self) -> bool {
        self.secret == other.secret
    }
}

impl Eq for BlsKeyPair {}

impl BlsKeyPair {
    pub fn generate<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        loop {
            let secret = Scalar::random(rng);
            if !secret.is_zero() {
                return Self::from_secret(secret);
            }
        }
    }

    pub fn from_secret(secret: Scalar) -> Self {
        Self {
            secret,
            public: BlsPublicKey::new((G2::generator() * secret).to_affine()),
        }
    }

    pub fn sign(&self, msg: &[u8]) -> G1Affine {
        (hash_message(msg) * self.secret).to_affine()
    }
}

pub fn decode_signature(bytes: &[u8]) -> Option<G1Affine> {
    G1Affine::from_compressed(bytes)
}

/// `e(sigma, g2) == e(H(msg), pk)`, evaluated as one two-term pairing
/// product against `-g2`.
pub fn verify(pk: &BlsPublicKey, msg: &[u8], sig: &G1Affine) -> bool {
    let h = hash_message(msg).to_affine();
    pairing_product(&[(sig, neg_g2_prepared()), (&h, pk.prepared())]).is_one()
}
