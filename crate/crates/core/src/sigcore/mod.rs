//! Six signature schemes behind one keygen/sign/verify contract.
//!
//! | scheme | parameters                         | signature record                 |
//! |--------|------------------------------------|----------------------------------|
//! | RSA    | 1024-bit N, e = 65537              | Integer(128)                     |
//! | DSA    | 1024-bit p, 160-bit q              | Integer(20) r, Integer(20) s     |
//! | ECDSA  | brainpoolP160t1 (P-256 optional)   | Integer(20) r, Integer(20) s     |
//! | BLS    | BLS12-381, signatures in G1        | Element(48)                      |
//! | group  | DSA parameters, 5 members          | Element(128) key, Integer c, s   |
//! | ring   | DSA parameters, 5 members          | Integer c1, Integer s_1..s_n     |
//!
//! Records use the TLV framing described in [`codec`].

pub mod bigint;
pub mod bls;
pub mod codec;
pub mod dl;
pub mod dsa;
pub mod ec;
pub mod ecdsa;
pub mod group;
pub mod pairing;
pub mod ring;
pub mod rsa;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{CryptoRng, Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::wire::{signed_portion, Data};
use codec::{RecordReader, RecordWriter};
use dl::{DlKeyPair, DlParams, DlPublicKey};
use ec::CurveId;

pub use bls::{BlsKeyPair, BlsPublicKey};
pub use ecdsa::{EcdsaKeyPair, EcdsaPublicKey};
pub use group::{GroupManager, GroupMemberKey, GroupPublicKey, GroupSetup, GroupSignature, MemberId};
pub use ring::{Ring, RingSignature};
pub use rsa::{RsaKeyPair, RsaPublicKey};

/// Environment variable that admits undersized parameters outside unit
/// tests.
pub const INSECURE_PARAMS_ENV: &str = "NDNSEC_INSECURE_PARAMS";

/// Whether toy-sized parameters are accepted.
pub fn insecure_params_allowed() -> bool {
    cfg!(test) || std::env::var(INSECURE_PARAMS_ENV).is_ok_and(|v| v == "1")
}

#[derive(Debug, thiserror::Error)]
pub enum SigError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("insecure parameters rejected ({0}); set {INSECURE_PARAMS_ENV}=1 to allow")]
    InsecureParameters(String),
    #[error("scheme mismatch: key is {expected}, signature is {found}")]
    SchemeMismatch { expected: SchemeId, found: SchemeId },
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("signer index {index} outside ring of {size}")]
    IndexOutOfRing { index: usize, size: usize },
    #[error("signature does not open to any registered member")]
    OpenFailure,
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    Rsa,
    Dsa,
    Ecdsa,
    Bls,
    Group,
    Ring,
}

pub const ALL_SCHEMES: [SchemeId; 6] = [
    SchemeId::Rsa,
    SchemeId::Dsa,
    SchemeId::Ecdsa,
    SchemeId::Bls,
    SchemeId::Group,
    SchemeId::Ring,
];

impl SchemeId {
    /// The wire `SchemeId` code.
    pub fn code(self) -> u8 {
        match self {
            SchemeId::Rsa => 1,
            SchemeId::Dsa => 2,
            SchemeId::Ecdsa => 3,
            SchemeId::Bls => 4,
            SchemeId::Group => 5,
            SchemeId::Ring => 6,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        ALL_SCHEMES.into_iter().find(|s| s.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Rsa => "rsa",
            SchemeId::Dsa => "dsa",
            SchemeId::Ecdsa => "ecdsa",
            SchemeId::Bls => "bls",
            SchemeId::Group => "group",
            SchemeId::Ring => "ring",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = SigError;

    fn from_str(s: &str) -> Result<Self, SigError> {
        let lower = s.trim().to_ascii_lowercase();
        ALL_SCHEMES
            .into_iter()
            .find(|id| id.name() == lower)
            .ok_or_else(|| SigError::UnknownScheme(s.to_owned()))
    }
}

/// Key-generation parameters. [`SchemeParams::new`] gives the defaults:
/// 1024-bit RSA, the built-in 1024/160 DL group, brainpoolP160t1, and five
/// members for group and ring.
#[derive(Debug, Clone)]
pub struct SchemeParams {
    pub scheme: SchemeId,
    pub rsa_bits: u64,
    pub dl: Arc<DlParams>,
    pub curve: CurveId,
    pub members: usize,
}

impl SchemeParams {
    pub fn new(scheme: SchemeId) -> Self {
        Self {
            scheme,
            rsa_bits: rsa::DEFAULT_MODULUS_BITS,
            dl: DlParams::default_1024_160(),
            curve: CurveId::Brainpool160T1,
            members: 5,
        }
    }
}

/// A group member's signing key together with the group key it signs for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSigner {
    pub member: GroupMemberKey,
    pub group: GroupPublicKey,
}

/// A ring member's key and its position in the ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSigner {
    pub ring: Ring,
    pub index: usize,
    pub key: DlKeyPair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyPair {
    Rsa(RsaKeyPair),
    Dsa(DlKeyPair),
    Ecdsa(EcdsaKeyPair),
    Bls(BlsKeyPair),
    Group(GroupSigner),
    Ring(RingSigner),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PublicKey {
    Rsa(RsaPublicKey),
    Dsa(DlPublicKey),
    Ecdsa(EcdsaPublicKey),
    Bls(BlsPublicKey),
    Group(GroupPublicKey),
    Ring(Ring),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub scheme: SchemeId,
    pub bytes: Vec<u8>,
}

impl Signature {
    /// Total bits of field values in the record, excluding TLV framing.
    pub fn payload_bits(&self) -> usize {
        codec::fields(&self.bytes)
            .map(|f| f.iter().map(|(_, v)| v.len() * 8).sum())
            .unwrap_or(0)
    }
}

/// Generates a key pair. Group keygen runs a full setup and returns one
/// member's key (the manager is discarded; use [`group::group_setup`] to
/// keep it). Ring keygen places the new key at a random position among
/// freshly generated peer keys.
pub fn keygen<R: RngCore + CryptoRng>(params: &SchemeParams, rng: &mut R) -> Result<KeyPair, SigError> {
    Ok(match params.scheme {
        SchemeId::Rsa => KeyPair::Rsa(RsaKeyPair::generate(params.rsa_bits, rsa::DEFAULT_PUBLIC_EXPONENT, rng)?),
        SchemeId::Dsa => KeyPair::Dsa(DlKeyPair::generate(params.dl.clone(), rng)),
        SchemeId::Ecdsa => KeyPair::Ecdsa(EcdsaKeyPair::generate(params.curve, rng)),
        SchemeId::Bls => KeyPair::Bls(BlsKeyPair::generate(rng)),
        SchemeId::Group => {
            let setup = group::group_setup(params.dl.clone(), params.members, rng)?;
            let pick = rng.gen_range(0..setup.members.len());
            KeyPair::Group(GroupSigner {
                member: setup.members[pick].clone(),
                group: setup.public,
            })
        }
        SchemeId::Ring => {
            if params.members < 2 {
                return Err(SigError::Parameter("ring needs at least 2 members".into()));
            }
            let key = DlKeyPair::generate(params.dl.clone(), rng);
            let index = rng.gen_range(0..params.members);
            let keys = (0..params.members)
                .map(|i| {
                    if i == index {
                        key.y.clone()
                    } else {
                        DlKeyPair::generate(params.dl.clone(), rng).y
                    }
                })
                .collect();
            KeyPair::Ring(RingSigner {
                ring: Ring::new(params.dl.clone(), keys)?,
                index,
                key,
            })
        }
    })
}

impl KeyPair {
    pub fn scheme(&self) -> SchemeId {
        match self {
            KeyPair::Rsa(_) => SchemeId::Rsa,
            KeyPair::Dsa(_) => SchemeId::Dsa,
            KeyPair::Ecdsa(_) => SchemeId::Ecdsa,
            KeyPair::Bls(_) => SchemeId::Bls,
            KeyPair::Group(_) => SchemeId::Group,
            KeyPair::Ring(_) => SchemeId::Ring,
        }
    }

    pub fn public(&self) -> PublicKey {
        match self {
            KeyPair::Rsa(k) => PublicKey::Rsa(k.public()),
            KeyPair::Dsa(k) => PublicKey::Dsa(k.public()),
            KeyPair::Ecdsa(k) => PublicKey::Ecdsa(k.public()),
            KeyPair::Bls(k) => PublicKey::Bls(k.public.clone()),
            KeyPair::Group(k) => PublicKey::Group(k.group.clone()),
            KeyPair::Ring(k) => PublicKey::Ring(k.ring.clone()),
        }
    }

    /// Record: Scheme, List(public record), then the private fields.
    pub fn to_bytes(&self) -> Vec<u8> {
        let rec = RecordWriter::new().scheme(self.scheme().code());
        let mut public = RecordWriter::new();
        public_fields(&self.public(), &mut public);
        let rec = rec.list(public);
        match self {
            KeyPair::Rsa(k) => {
                let w = bigint::byte_width(&k.n);
                rec.int(&k.d, w).int(&k.p, w.div_ceil(2)).int(&k.q, w.div_ceil(2))
            }
            KeyPair::Dsa(k) => rec.int(&k.x, k.params.scalar_len()),
            KeyPair::Ecdsa(k) => rec.int(&k.d, k.curve.curve().scalar_len()),
            KeyPair::Bls(k) => {
                rec.element(&k.secret.to_be_bytes())
            }
            KeyPair::Group(k) => rec.index(k.member.id.0).int(&k.member.key.x, k.member.key.params.scalar_len()),
            KeyPair::Ring(k) => rec.index(k.index as u32).int(&k.key.x, k.key.params.scalar_len()),
        }
        .finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SigError> {
        let mut r = RecordReader::new(bytes);
        let scheme = read_scheme(&mut r)?;
        let public = read_public(scheme, r.list()?)?;
        let kp = match public {
            PublicKey::Rsa(pk) => {
                let (d, p, q) = (r.int()?, r.int()?, r.int()?);
                if &p * &q != pk.n {
                    return Err(SigError::Malformed("RSA factors do not match modulus".into()));
                }
                KeyPair::Rsa(RsaKeyPair { n: pk.n, e: pk.e, d, p, q })
            }
            PublicKey::Dsa(pk) => {
                let kp = DlKeyPair::from_secret(pk.params.clone(), r.int()?);
                check(kp.y == pk.y, "DSA secret does not match public key")?;
                KeyPair::Dsa(kp)
            }
            PublicKey::Ecdsa(pk) => {
                let d = r.int()?;
                let q = pk.curve.curve().mul_base_fixed(&d);
                check(q == pk.q, "ECDSA secret does not match public key")?;
                KeyPair::Ecdsa(EcdsaKeyPair { curve: pk.curve, d, q })
            }
            PublicKey::Bls(pk) => {
                let be: [u8; 32] = r
                    .element()?
                    .try_into()
                    .map_err(|_| SigError::Malformed("BLS secret must be 32 bytes".into()))?;
                let secret =
                    pairing::Scalar::from_be_bytes(&be).ok_or_else(|| SigError::Malformed("BLS secret out of range".into()))?;
                let kp = BlsKeyPair::from_secret(secret);
                check(kp.public == pk, "BLS secret does not match public key")?;
                KeyPair::Bls(kp)
            }
            PublicKey::Group(group) => {
                let id = MemberId(r.index()?);
                let key = DlKeyPair::from_secret(group.params.clone(), r.int()?);
                check(group.contains(&key.y), "group member key not in group")?;
                KeyPair::Group(GroupSigner {
                    member: GroupMemberKey { id, key },
                    group,
                })
            }
            PublicKey::Ring(ring) => {
                let index = r.index()? as usize;
                let key = DlKeyPair::from_secret(ring.params.clone(), r.int()?);
                check(ring.keys.get(index) == Some(&key.y), "ring secret does not match its position")?;
                KeyPair::Ring(RingSigner { ring, index, key })
            }
        };
        r.finish()?;
        Ok(kp)
    }
}

fn check(ok: bool, what: &str) -> Result<(), SigError> {
    if ok {
        Ok(())
    } else {
        Err(SigError::Malformed(what.to_owned()))
    }
}

fn read_scheme(r: &mut RecordReader<'_>) -> Result<SchemeId, SigError> {
    let code = r.scheme()?;
    SchemeId::from_code(code).ok_or_else(|| SigError::UnknownScheme(format!("code {code}")))
}

fn dl_params_fields(p: &DlParams) -> RecordWriter {
    let w = p.element_len();
    RecordWriter::new().int(&p.p, w).int(&p.q, p.scalar_len()).int(&p.g, w)
}

fn read_dl_params(mut r: RecordReader<'_>) -> Result<Arc<DlParams>, SigError> {
    let (p, q, g) = (r.int()?, r.int()?, r.int()?);
    r.finish()?;
    let builtin = DlParams::default_1024_160();
    if builtin.p == p && builtin.q == q && builtin.g == g {
        return Ok(builtin);
    }
    if p.bits() < 1024 && !insecure_params_allowed() {
        return Err(SigError::InsecureParameters(format!("{}-bit DL modulus", p.bits())));
    }
    Ok(Arc::new(DlParams::new(p, q, g)))
}

fn element_list(params: &DlParams, keys: &[BigUint]) -> RecordWriter {
    keys.iter().fold(RecordWriter::new(), |w, k| {
        w.element(&bigint::to_fixed_bytes(k, params.element_len()))
    })
}

fn read_element_list(mut r: RecordReader<'_>) -> Result<Vec<BigUint>, SigError> {
    let mut out = Vec::new();
    while !r.is_empty() {
        out.push(BigUint::from_bytes_be(r.element()?));
    }
    Ok(out)
}

fn public_fields(pk: &PublicKey, w: &mut RecordWriter) {
    let rec = std::mem::take(w).scheme(pk.scheme().code());
    *w = match pk {
        PublicKey::Rsa(k) => rec.int(&k.n, k.modulus_len()).int(&k.e, bigint::byte_width(&k.e)),
        PublicKey::Dsa(k) => rec.list(dl_params_fields(&k.params)).int(&k.y, k.params.element_len()),
        PublicKey::Ecdsa(k) => {
            let c = k.curve.curve();
            rec.int(&BigUint::from(k.curve.code()), 1).element(&c.encode_point(&k.q))
        }
        PublicKey::Bls(k) => rec.element(&k.to_bytes()),
        PublicKey::Group(k) => rec.list(dl_params_fields(&k.params)).list(element_list(&k.params, k.members())),
        PublicKey::Ring(k) => rec.list(dl_params_fields(&k.params)).list(element_list(&k.params, &k.keys)),
    };
}

fn read_public(expected: SchemeId, mut r: RecordReader<'_>) -> Result<PublicKey, SigError> {
    let scheme = read_scheme(&mut r)?;
    if scheme != expected {
        return Err(SigError::SchemeMismatch { expected, found: scheme });
    }
    let pk = match scheme {
        SchemeId::Rsa => {
            let n = r.int()?;
            let e = r.int()?;
            if n.bits() < rsa::DEFAULT_MODULUS_BITS && !insecure_params_allowed() {
                return Err(SigError::InsecureParameters(format!("{}-bit RSA modulus", n.bits())));
            }
            PublicKey::Rsa(RsaPublicKey { n, e })
        }
        SchemeId::Dsa => {
            let params = read_dl_params(r.list()?)?;
            let y = r.int()?;
            check(params.is_subgroup_element(&y), "DSA public key not in subgroup")?;
            PublicKey::Dsa(DlPublicKey { params, y })
        }
        SchemeId::Ecdsa => {
            let code = r.int()?;
            let curve = u8::try_from(&code)
                .ok()
                .and_then(CurveId::from_code)
                .ok_or_else(|| SigError::Malformed("unknown curve".into()))?;
            let q = curve
                .curve()
                .decode_point(r.element()?)
                .ok_or_else(|| SigError::Malformed("ECDSA point not on curve".into()))?;
            PublicKey::Ecdsa(EcdsaPublicKey { curve, q })
        }
        SchemeId::Bls => PublicKey::Bls(
            BlsPublicKey::from_bytes(r.element()?).ok_or_else(|| SigError::Malformed("invalid BLS public key".into()))?,
        ),
        SchemeId::Group => {
            let params = read_dl_params(r.list()?)?;
            let members = read_element_list(r.list()?)?;
            PublicKey::Group(GroupPublicKey::new(params, members))
        }
        SchemeId::Ring => {
            let params = read_dl_params(r.list()?)?;
            let keys = read_element_list(r.list()?)?;
            PublicKey::Ring(Ring::new(params, keys)?)
        }
    };
    r.finish()?;
    Ok(pk)
}

impl PublicKey {
    pub fn scheme(&self) -> SchemeId {
        match self {
            PublicKey::Rsa(_) => SchemeId::Rsa,
            PublicKey::Dsa(_) => SchemeId::Dsa,
            PublicKey::Ecdsa(_) => SchemeId::Ecdsa,
            PublicKey::Bls(_) => SchemeId::Bls,
            PublicKey::Group(_) => SchemeId::Group,
            PublicKey::Ring(_) => SchemeId::Ring,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = RecordWriter::new();
        public_fields(self, &mut w);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SigError> {
        let mut peek = RecordReader::new(bytes);
        let scheme = read_scheme(&mut peek)?;
        read_public(scheme, RecordReader::new(bytes))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(s: &str) -> Result<Self, SigError> {
        let bytes = hex::decode(s.trim()).map_err(|e| SigError::Malformed(e.to_string()))?;
        Self::from_bytes(&bytes)
    }
}

pub fn sign<R: RngCore + ?Sized>(kp: &KeyPair, msg: &[u8], rng: &mut R) -> Result<Signature, SigError> {
    let bytes = match kp {
        KeyPair::Rsa(k) => RecordWriter::new().int(&k.sign(msg), bigint::byte_width(&k.n)).finish(),
        KeyPair::Dsa(k) => {
            let sig = dsa::sign(k, msg, rng);
            let w = k.params.scalar_len();
            RecordWriter::new().int(&sig.r, w).int(&sig.s, w).finish()
        }
        KeyPair::Ecdsa(k) => {
            let sig = ecdsa::sign(k, msg, rng);
            let w = k.curve.curve().scalar_len();
            RecordWriter::new().int(&sig.r, w).int(&sig.s, w).finish()
        }
        KeyPair::Bls(k) => RecordWriter::new().element(&k.sign(msg).to_compressed()).finish(),
        KeyPair::Group(k) => group::group_sign(&k.member, &k.group, msg, rng)?.to_bytes(&k.group.params),
        KeyPair::Ring(k) => ring::ring_sign(&k.ring, k.index, &k.key, msg, rng)?.to_bytes(&k.ring.params),
    };
    Ok(Signature {
        scheme: kp.scheme(),
        bytes,
    })
}

/// Accepts or rejects; a record that does not parse is a rejection. Only a
/// scheme mismatch between key and signature is an error.
pub fn verify(pk: &PublicKey, msg: &[u8], sig: &Signature) -> Result<bool, SigError> {
    if pk.scheme() != sig.scheme {
        return Err(SigError::SchemeMismatch {
            expected: pk.scheme(),
            found: sig.scheme,
        });
    }
    Ok(verify_record(pk, msg, &sig.bytes).unwrap_or(false))
}

fn two_ints(bytes: &[u8], width: usize) -> Result<(BigUint, BigUint), SigError> {
    let mut r = RecordReader::new(bytes);
    let pair = (r.int_exact(width)?, r.int_exact(width)?);
    r.finish()?;
    Ok(pair)
}

fn verify_record(pk: &PublicKey, msg: &[u8], bytes: &[u8]) -> Result<bool, SigError> {
    Ok(match pk {
        PublicKey::Rsa(k) => {
            let mut r = RecordReader::new(bytes);
            let s = r.int_exact(k.modulus_len())?;
            r.finish()?;
            k.verify(msg, &s)
        }
        PublicKey::Dsa(k) => {
            let (r, s) = two_ints(bytes, k.params.scalar_len())?;
            dsa::verify(k, msg, &dsa::DsaSignature { r, s })
        }
        PublicKey::Ecdsa(k) => {
            let (r, s) = two_ints(bytes, k.curve.curve().scalar_len())?;
            ecdsa::verify(k, msg, &ecdsa::EcdsaSignature { r, s })
        }
        PublicKey::Bls(k) => {
            let mut r = RecordReader::new(bytes);
            let sig = bls::decode_signature(r.element()?).ok_or_else(|| SigError::Malformed("BLS point".into()))?;
            r.finish()?;
            bls::verify(k, msg, &sig)
        }
        PublicKey::Group(g) => group::group_verify(g, msg, &GroupSignature::from_bytes(bytes, &g.params)?),
        PublicKey::Ring(ring) => ring::ring_verify(ring, msg, &RingSignature::from_bytes(bytes, &ring.params)?),
    })
}

/// Sets the scheme code and signs the Data packet's signed portion.
pub fn sign_data<R: RngCore + ?Sized>(kp: &KeyPair, data: &mut Data, rng: &mut R) -> Result<(), SigError> {
    data.scheme_id = kp.scheme().code();
    let sig = sign(kp, &signed_portion(data), rng)?;
    data.signature = sig.bytes;
    Ok(())
}

/// Verifies a Data packet's signature over its signed portion. An unknown
/// or mismatching scheme code rejects.
pub fn verify_data(pk: &PublicKey, data: &Data) -> bool {
    let Some(scheme) = SchemeId::from_code(data.scheme_id) else {
        return false;
    };
    let sig = Signature {
        scheme,
        bytes: data.signature.clone(),
    };
    verify(pk, &signed_portion(data), &sig).unwrap_or(false)
}
