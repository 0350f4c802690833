//! Prefix-keyed trust anchors.
//!
//! ```toml
//! [[anchor]]
//! prefix = "/snnu/KEY"
//! scheme = "bls"
//! key = "8304..."     # public key record, hex
//! ```
//!
//! A Data packet is checked under the anchor whose prefix is the longest
//! prefix of its key locator. The anchor's scheme must match the packet's
//! scheme code.

use serde::Deserialize;
use thiserror::Error;

use crate::naming::{Name, NameError};
use crate::netcoding::{self, CodedPacket, NcPublicKey, SCHEME_NC};
use crate::sigcore::{self, PublicKey, SchemeId, SigError};
use crate::wire::Data;

#[derive(Debug, Error)]
pub enum TrustError {
    #[error("trust file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("anchor {index}: {source}")]
    Name { index: usize, source: NameError },
    #[error("anchor {index}: {source}")]
    Key { index: usize, source: SigError },
    #[error("anchor {index}: bad network-coding key")]
    NcKey { index: usize },
    #[error("anchor {index}: key is for {found}, anchor says {expected}")]
    SchemeMismatch { index: usize, expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrustKey {
    Sig(PublicKey),
    Nc(NcPublicKey),
}

impl TrustKey {
    pub fn scheme_code(&self) -> u8 {
        match self {
            TrustKey::Sig(pk) => pk.scheme().code(),
            TrustKey::Nc(_) => SCHEME_NC,
        }
    }

    pub fn verify(&self, data: &Data) -> bool {
        if data.scheme_id != self.scheme_code() {
            return false;
        }
        match self {
            TrustKey::Sig(pk) => sigcore::verify_data(pk, data),
            TrustKey::Nc(pk) => CodedPacket::from_data(data).is_ok_and(|p| netcoding::nc_verify(pk, &p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustAnchor {
    pub prefix: Name,
    pub key: TrustKey,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrustStore {
    anchors: Vec<TrustAnchor>,
}

#[derive(Deserialize)]
struct TrustFile {
    #[serde(default)]
    anchor: Vec<AnchorSpec>,
}

#[derive(Deserialize)]
struct AnchorSpec {
    prefix: String,
    scheme: String,
    key: String,
}

impl TrustStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces any anchor with the same prefix.
    pub fn add(&mut self, prefix: Name, key: TrustKey) {
        self.anchors.retain(|a| a.prefix != prefix);
        self.anchors.push(TrustAnchor { prefix, key });
    }

    pub fn anchors(&self) -> &[TrustAnchor] {
        &self.anchors
    }

    pub fn lookup(&self, key_locator: &Name) -> Option<&TrustAnchor> {
        self.anchors
            .iter()
            .filter(|a| a.prefix.is_prefix_of(key_locator))
            .max_by_key(|a| a.prefix.len())
    }

    /// False when no anchor covers the key locator.
    pub fn verify(&self, data: &Data) -> bool {
        self.lookup(&data.key_locator).is_some_and(|a| a.key.verify(data))
    }

    pub fn from_toml(text: &str) -> Result<Self, TrustError> {
        let file: TrustFile = toml::from_str(text)?;
        let mut store = Self::new();
        for (index, spec) in file.anchor.into_iter().enumerate() {
            let prefix: Name = spec.prefix.parse().map_err(|source| TrustError::Name { index, source })?;
            let key = if spec.scheme.eq_ignore_ascii_case("nc") {
                let bytes = hex::decode(spec.key.trim()).map_err(|_| TrustError::NcKey { index })?;
                TrustKey::Nc(NcPublicKey::from_bytes(&bytes).ok_or(TrustError::NcKey { index })?)
            } else {
                let expected: SchemeId = spec.scheme.parse().map_err(|source| TrustError::Key { index, source })?;
                let pk = PublicKey::from_hex(spec.key.trim()).map_err(|source| TrustError::Key { index, source })?;
                if pk.scheme() != expected {
                    return Err(TrustError::SchemeMismatch {
                        index,
                        expected: expected.to_string(),
                        found: pk.scheme().to_string(),
                    });
                }
                TrustKey::Sig(pk)
            };
            store.add(prefix, key);
        }
        Ok(store)
    }

    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        for a in &self.anchors {
            let (scheme, key) = match &a.key {
                TrustKey::Sig(pk) => (pk.scheme().to_string(), pk.to_hex()),
                TrustKey::Nc(pk) => ("nc".to_string(), hex::encode(pk.to_bytes())),
            };
            out.push_str(&format!(
                "[[anchor]]\nprefix = \"{}\"\nscheme = \"{scheme}\"\nkey = \"{key}\"\n\n",
                a.prefix
            ));
        }
        out
    }
}
