//! Key files written by `ndnsec keygen`.
//!
//! ```toml
//! scheme = "bls"
//! public = "..."   # public key record, hex; usable as a trust anchor key
//! private = "..."  # full key pair record, hex
//! ```

use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};

use ndnsec::naming::Name;
use ndnsec::sigcore::{self, KeyPair, SchemeId, SchemeParams, SigError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyFile {
    pub scheme: SchemeId,
    pub public: String,
    pub private: String,
}

#[derive(Debug, thiserror::Error)]
pub enum KeyFileError {
    #[error("key file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Sig(#[from] SigError),
    #[error("private part does not match the declared scheme or public key")]
    Inconsistent,
}

impl KeyFile {
    pub fn generate<R: RngCore + CryptoRng>(scheme: SchemeId, rng: &mut R) -> Result<Self, SigError> {
        let kp = sigcore::keygen(&SchemeParams::new(scheme), rng)?;
        Ok(Self::from_key_pair(&kp))
    }

    pub fn from_key_pair(kp: &KeyPair) -> Self {
        Self {
            scheme: kp.scheme(),
            public: kp.public().to_hex(),
            private: hex::encode(kp.to_bytes()),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("key file serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, KeyFileError> {
        Ok(toml::from_str(text)?)
    }

    /// Decodes the private record and checks it against the other fields.
    pub fn key_pair(&self) -> Result<KeyPair, KeyFileError> {
        let bytes = hex::decode(self.private.trim()).map_err(|e| SigError::Malformed(e.to_string()))?;
        let kp = KeyPair::from_bytes(&bytes)?;
        if kp.scheme() != self.scheme || kp.public().to_hex() != self.public.trim() {
            return Err(KeyFileError::Inconsistent);
        }
        Ok(kp)
    }

    /// A one-anchor trust file binding `prefix` to this key.
    pub fn anchor_toml(&self, prefix: &Name) -> String {
        format!(
            "[[anchor]]\nprefix = \"{prefix}\"\nscheme = \"{}\"\nkey = \"{}\"\n",
            self.scheme, self.public
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn round_trip_each_scheme() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for scheme in sigcore::ALL_SCHEMES {
            let kf = KeyFile::generate(scheme, &mut rng).unwrap();
            let back = KeyFile::from_toml(&kf.to_toml()).unwrap();
            assert_eq!(back, kf);
            let kp = back.key_pair().unwrap();
            let sig = sigcore::sign(&kp, b"m", &mut rng).unwrap();
            assert!(sigcore::verify(&kp.public(), b"m", &sig).unwrap());
        }
    }

    #[test]
    fn mismatched_public_part() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let mut a = KeyFile::generate(SchemeId::Ecdsa, &mut rng).unwrap();
        let b = KeyFile::generate(SchemeId::Ecdsa, &mut rng).unwrap();
        a.public = b.public;
        assert!(matches!(a.key_pair(), Err(KeyFileError::Inconsistent)));
    }
}
