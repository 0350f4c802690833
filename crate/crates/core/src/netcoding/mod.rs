//! Homomorphic signatures for linear network coding over BLS12-381.
//!
//! Content is packed into `m` vectors of `n` scalars and each vector is
//! augmented with the `i`-th unit vector. With public data generators
//! `g_1..g_n` and per-generation generators `h_1..h_m` (both hashed to G1),
//! a vector `(v || w)` is signed as
//!
//! ```text
//! sigma = alpha * (sum_i v_i g_i + sum_j w_j h_j)
//! ```
//!
//! and verified with `e(sigma, g2) = e(sum_i v_i g_i + sum_j w_j h_j, alpha g2)`.
//! The map is linear, so routers can sum scaled packets and signatures
//! without the key, and anything outside the span of the signed vectors is
//! rejected.

pub mod linalg;

use std::sync::{Arc, Mutex, OnceLock};

use rand::RngCore;
use thiserror::Error;

use crate::naming::Name;
use crate::sigcore::bls::{BlsKeyPair, BlsPublicKey};
use crate::sigcore::pairing::{neg_g2_prepared, pairing_product, G1Affine, Scalar, G1, G1_COMPRESSED_LEN};
use crate::tlv::{self, Reader};
use crate::wire::Data;

/// Wire scheme code for coded packets.
pub const SCHEME_NC: u8 = 7;
pub const DEFAULT_N: usize = 32;
pub const DEFAULT_M: usize = 8;

const DATA_GEN_DST: &[u8] = b"NDNSEC-NC-GEN";
const COEFF_GEN_DST: &[u8] = b"NDNSEC-NC-COEFF";

mod tlv_types {
    pub const HEADER: u8 = 0x90;
    pub const VECTOR: u8 = 0x91;
    pub const GENERATION_ID: u8 = 0x92;
    pub const DIM_N: u8 = 0x93;
    pub const DIM_M: u8 = 0x94;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("packets belong to different generations")]
    GenerationMismatch,
    #[error("coefficient matrix is rank deficient")]
    RankDeficient,
    #[error("content is empty")]
    EmptyContent,
    #[error("malformed coded packet: {0}")]
    Malformed(String),
}

/// The same key shape as a BLS key: a scalar `alpha` and `alpha * g2`.
pub type NcKeyPair = BlsKeyPair;
pub type NcPublicKey = BlsPublicKey;

/// `g_1..g_count`, hashed once and cached process-wide.
fn data_generators(count: usize) -> Vec<G1Affine> {
    static CACHE: OnceLock<Mutex<Vec<G1Affine>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(Vec::new())).lock().expect("generator cache");
    while cache.len() < count {
        let i = cache.len() as u64;
        cache.push(G1::hash(&i.to_be_bytes(), DATA_GEN_DST).to_affine());
    }
    cache[..count].to_vec()
}

/// One content object's coding parameters and its derived generators.
#[derive(Clone)]
pub struct Generation {
    id: Vec<u8>,
    n: usize,
    m: usize,
    bases: Arc<Vec<G1Affine>>,
}

impl std::fmt::Debug for Generation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Generation")
            .field("id", &hex::encode(&self.id))
            .field("n", &self.n)
            .field("m", &self.m)
            .finish()
    }
}

impl PartialEq for Generation {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.n == other.n && self.m == other.m
    }
}

impl Eq for Generation {}

impl Generation {
    pub fn new(id: impl Into<Vec<u8>>, n: usize, m: usize) -> Result<Self, NcError> {
        if n == 0 || m == 0 {
            return Err(NcError::Dimension(format!("n={n}, m={m}: both must be at least 1")));
        }
        if n > u16::MAX as usize || m > u16::MAX as usize {
            return Err(NcError::Dimension(format!("n={n}, m={m} exceed 65535")));
        }
        let id = id.into();
        let mut bases = data_generators(n);
        for j in 0..m as u32 {
            let mut input = Vec::with_capacity(id.len() + 12);
            input.extend_from_slice(&(id.len() as u64).to_be_bytes());
            input.extend_from_slice(&id);
            input.extend_from_slice(&j.to_be_bytes());
            bases.push(G1::hash(&input, COEFF_GEN_DST).to_affine());
        }
        Ok(Self {
            id,
            n,
            m,
            bases: Arc::new(bases),
        })
    }

    pub fn id(&self) -> &[u8] {
        &self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn capacity_bytes(&self) -> usize {
        linalg::capacity_bytes(self.n, self.m)
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<(), NcError> {
        if v.len() != self.n + self.m {
            return Err(NcError::Dimension(format!(
                "vector has {} elements, generation expects {}",
                v.len(),
                self.n + self.m
            )));
        }
        Ok(())
    }

    fn hash_vector(&self, v: &[Scalar]) -> G1 {
        G1::msm(&self.bases, v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    pub generation: Generation,
    /// Data part then coefficient part.
    pub vector: Vec<Scalar>,
    pub signature: G1Affine,
}

impl CodedPacket {
    pub fn data_part(&self) -> &[Scalar] {
        &self.vector[..self.generation.n]
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.vector[self.generation.n..]
    }

    /// Encodes as a Data packet with scheme code 7. The content is a
    /// header TLV (generation id, n, m) followed by the vector TLV; the
    /// signature field holds the compressed G1 signature.
    pub fn to_data(&self, name: Name, key_locator: Name) -> Data {
        let g = &self.generation;
        let mut header = Vec::new();
        tlv::write_tlv(&mut header, tlv_types::GENERATION_ID, &g.id).expect("id fits");
        tlv::write_tlv(&mut header, tlv_types::DIM_N, &(g.n as u16).to_be_bytes()).expect("2 bytes");
        tlv::write_tlv(&mut header, tlv_types::DIM_M, &(g.m as u16).to_be_bytes()).expect("2 bytes");
        let mut vector = Vec::with_capacity(32 * self.vector.len());
        for e in &self.vector {
            vector.extend_from_slice(&e.to_be_bytes());
        }
        let mut content = Vec::new();
        tlv::write_tlv(&mut content, tlv_types::HEADER, &header).expect("header fits");
        tlv::write_tlv(&mut content, tlv_types::VECTOR, &vector).expect("vector fits");
        Data {
            name,
            content,
            key_locator,
            scheme_id: SCHEME_NC,
            signature: self.signature.to_compressed().to_vec(),
        }
    }

    /// Inverse of [`CodedPacket::to_data`]. Does not verify the signature.
    pub fn from_data(data: &Data) -> Result<Self, NcError> {
        Self::from_data_with(data, None)
    }

    /// Like [`CodedPacket::from_data`], reusing `known` when the header
    /// matches it so its generators are not re-derived.
    pub fn from_data_with(data: &Data, known: Option<&Generation>) -> Result<Self, NcError> {
        let bad = |s: &str| NcError::Malformed(s.to_string());
        if data.scheme_id != SCHEME_NC {
            return Err(NcError::Malformed(format!("scheme code {} is not network coding", data.scheme_id)));
        }
        let mut outer = Reader::new(&data.content);
        let header = next_value(&mut outer, tlv_types::HEADER)?;
        let vector = next_value(&mut outer, tlv_types::VECTOR)?;
        if !outer.is_empty() {
            return Err(bad("trailing content"));
        }
        let mut h = Reader::new(header);
        let id = next_value(&mut h, tlv_types::GENERATION_ID)?;
        let n = next_value(&mut h, tlv_types::DIM_N)?;
        let m = next_value(&mut h, tlv_types::DIM_M)?;
        if !h.is_empty() || n.len() != 2 || m.len() != 2 {
            return Err(bad("header"));
        }
        let n = u16::from_be_bytes([n[0], n[1]]) as usize;
        let m = u16::from_be_bytes([m[0], m[1]]) as usize;
        let generation = match known {
            Some(g) if g.id == id && g.n == n && g.m == m => g.clone(),
            _ => Generation::new(id, n, m)?,
        };
        if vector.len() != 32 * (n + m) {
            return Err(bad("vector length"));
        }
        let vector = vector
            .chunks(32)
            .map(|c| Scalar::from_be_bytes(c.try_into().expect("32 bytes")).ok_or_else(|| bad("non-canonical element")))
            .collect::<Result<Vec<_>, _>>()?;
        if data.signature.len() != G1_COMPRESSED_LEN {
            return Err(bad("signature length"));
        }
        let signature = G1Affine::from_compressed(&data.signature).ok_or_else(|| bad("signature point"))?;
        Ok(Self {
            generation,
            vector,
            signature,
        })
    }
}

fn next_value<'a>(r: &mut Reader<'a>, want: u8) -> Result<&'a [u8], NcError> {
    match r.next_element() {
        Ok(Some(e)) if e.tlv_type == want => Ok(e.value),
        _ => Err(NcError::Malformed(format!("expected TLV 0x{want:02X}"))),
    }
}

/// Packs and augments `content`; row `i` carries unit coefficient `i`.
pub fn split_and_augment(content: &[u8], generation: &Generation) -> Result<Vec<Vec<Scalar>>, NcError> {
    let rows = linalg::pack(content, generation.n, generation.m)?;
    Ok(linalg::augment(&rows))
}

pub fn nc_sign(key: &NcKeyPair, generation: &Generation, vector: Vec<Scalar>) -> Result<CodedPacket, NcError> {
    generation.check_vector(&vector)?;
    let signature = (generation.hash_vector(&vector) * key.secret).to_affine();
    Ok(CodedPacket {
        generation: generation.clone(),
        vector,
        signature,
    })
}

/// Splits, augments and signs every vector of `content`.
pub fn encode_content(key: &NcKeyPair, generation: &Generation, content: &[u8]) -> Result<Vec<CodedPacket>, NcError> {
    split_and_augment(content, generation)?
        .into_iter()
        .map(|v| nc_sign(key, generation, v))
        .collect()
}

pub fn nc_verify(pk: &NcPublicKey, packet: &CodedPacket) -> bool {
    if packet.generation.check_vector(&packet.vector).is_err() {
        return false;
    }
    let digest = packet.generation.hash_vector(&packet.vector).to_affine();
    pairing_product(&[(&packet.signature, neg_g2_prepared()), (&digest, pk.prepared())]).is_one()
}

/// `sum c_i p_i` on vectors and signatures alike.
pub fn combine(packets: &[CodedPacket], coeffs: &[Scalar]) -> Result<CodedPacket, NcError> {
    let first = packets
        .first()
        .ok_or_else(|| NcError::Dimension("combine needs at least one packet".into()))?;
    if packets.len() != coeffs.len() {
        return Err(NcError::Dimension(format!(
            "{} packets but {} coefficients",
            packets.len(),
            coeffs.len()
        )));
    }
    if packets.iter().any(|p| p.generation != first.generation) {
        return Err(NcError::GenerationMismatch);
    }
    let width = first.vector.len();
    if packets.iter().any(|p| p.vector.len() != width) {
        return Err(NcError::Dimension("vector lengths differ".into()));
    }
    let vector = (0..width)
        .map(|k| packets.iter().zip(coeffs).map(|(p, c)| *c * p.vector[k]).sum())
        .collect();
    let sigs: Vec<G1Affine> = packets.iter().map(|p| p.signature).collect();
    Ok(CodedPacket {
        generation: first.generation.clone(),
        vector,
        signature: G1::msm(&sigs, coeffs).to_affine(),
    })
}

/// A relay's output: a combination with uniform field coefficients.
pub fn recombine<R: RngCore + ?Sized>(packets: &[CodedPacket], rng: &mut R) -> Result<CodedPacket, NcError> {
    let coeffs: Vec<Scalar> = packets.iter().map(|_| Scalar::random(rng)).collect();
    combine(packets, &coeffs)
}

/// Recovers the content from packets whose coefficient rows span the
/// generation. Signatures are not checked here.
pub fn decode(packets: &[CodedPacket]) -> Result<Vec<u8>, NcError> {
    let first = packets.first().ok_or(NcError::RankDeficient)?;
    let g = &first.generation;
    if packets.iter().any(|p| p.generation != *g) {
        return Err(NcError::GenerationMismatch);
    }
    for p in packets {
        g.check_vector(&p.vector)?;
    }
    let rows: Vec<Vec<Scalar>> = packets.iter().map(|p| p.vector.clone()).collect();
    let data = linalg::solve(&rows, g.n, g.m)?;
    linalg::unpack(&data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn setup(seed: u64, n: usize, m: usize) -> (ChaCha20Rng, NcKeyPair, Generation, Vec<u8>) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let key = NcKeyPair::generate(&mut rng);
        let gen = Generation::new(format!("gen-{seed}"), n, m).unwrap();
        let content: Vec<u8> = (0..gen.capacity_bytes() / 2 + 3).map(|_| rng.gen()).collect();
        (rng, key, gen, content)
    }

    #[test]
    fn originals_verify_and_decode() {
        let (_, key, gen, content) = setup(151, 4, 3);
        let packets = encode_content(&key, &gen, &content).unwrap();
        assert!(packets.iter().all(|p| nc_verify(&key.public, p)));
        assert_eq!(packets[1].coefficients(), &[Scalar::zero(), Scalar::one(), Scalar::zero()]);
        assert_eq!(decode(&packets).unwrap(), content);
    }

    #[test]
    fn tampering_rejects() {
        let (_, key, gen, content) = setup(152, 4, 3);
        let packets = encode_content(&key, &gen, &content).unwrap();
        for k in [0, 3, 4, 6] {
            let mut p = packets[0].clone();
            p.vector[k] += Scalar::one();
            assert!(!nc_verify(&key.public, &p), "coordinate {k}");
        }
        let other = NcKeyPair::generate(&mut ChaCha20Rng::seed_from_u64(1));
        assert!(!nc_verify(&other.public, &packets[0]));
    }

    #[test]
    fn zero_vector_signs_to_identity() {
        let (_, key, gen, _) = setup(153, 2, 2);
        let p = nc_sign(&key, &gen, vec![Scalar::zero(); 4]).unwrap();
        assert!(p.signature.is_identity());
        assert!(nc_verify(&key.public, &p));
    }

    #[test]
    fn combinations_verify_and_decode() {
        let (mut rng, key, gen, content) = setup(154, 4, 3);
        let packets = encode_content(&key, &gen, &content).unwrap();
        let mixed: Vec<CodedPacket> = (0..3).map(|_| recombine(&packets, &mut rng).unwrap()).collect();
        assert!(mixed.iter().all(|p| nc_verify(&key.public, p)));
        assert_eq!(decode(&mixed).unwrap(), content);
        assert_eq!(combine(&packets[..1], &[Scalar::one()]).unwrap(), packets[0]);
    }

    #[test]
    fn combine_errors() {
        let (_, key, gen, content) = setup(155, 2, 2);
        let a = encode_content(&key, &gen, &content).unwrap();
        let gen2 = Generation::new("other", 2, 2).unwrap();
        let b = encode_content(&key, &gen2, &content).unwrap();
        let mixed = [a[0].clone(), b[0].clone()];
        assert_eq!(combine(&mixed, &[Scalar::one(), Scalar::one()]), Err(NcError::GenerationMismatch));
        assert!(matches!(combine(&a, &[Scalar::one()]), Err(NcError::Dimension(_))));
        assert!(matches!(nc_sign(&key, &gen, vec![Scalar::one(); 3]), Err(NcError::Dimension(_))));
        assert!(matches!(Generation::new("x", 0, 1), Err(NcError::Dimension(_))));
    }

    #[test]
    fn duplicate_row_is_rank_deficient() {
        let (_, key, gen, content) = setup(156, 3, 3);
        let mut p = encode_content(&key, &gen, &content).unwrap();
        p[2] = p[0].clone();
        assert_eq!(decode(&p), Err(NcError::RankDeficient));
    }

    #[test]
    fn data_round_trip() {
        let (_, key, gen, content) = setup(157, 4, 2);
        let p = encode_content(&key, &gen, &content).unwrap().remove(1);
        let name: Name = "/snnu/nc/obj/1".parse().unwrap();
        let data = p.to_data(name.clone(), "/snnu/KEY".parse().unwrap());
        assert_eq!(data.scheme_id, SCHEME_NC);
        let back = CodedPacket::from_data(&data).unwrap();
        assert_eq!(back, p);
        assert!(nc_verify(&key.public, &back));
        let mut bad = data.clone();
        bad.content.push(0);
        assert!(CodedPacket::from_data(&bad).is_err());
    }
}
