//! BLS aggregate signatures: `sigma = sum sigma_i`, checked as
//! `e(sigma, g2) = prod e(H(m_i), pk_i)` over distinct messages.

use std::collections::HashSet;

use super::{AccelError, SignedMessage};
use crate::sigcore::bls::{self, BlsPublicKey};
use crate::sigcore::codec::{RecordReader, RecordWriter};
use crate::sigcore::pairing::{neg_g2_prepared, pairing_product, G1Affine, G1};
use crate::sigcore::{PublicKey, SchemeId, SigError, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateSignature {
    pub signature: G1Affine,
    pub covers: Vec<(BlsPublicKey, Vec<u8>)>,
}

impl AggregateSignature {
    /// The aggregate element as a BLS signature record: the same size for
    /// any number of covered messages.
    pub fn to_signature(&self) -> Signature {
        Signature {
            scheme: SchemeId::Bls,
            bytes: RecordWriter::new().element(&self.signature.to_compressed()).finish(),
        }
    }
}

fn bls_point(sig: &Signature) -> Result<G1Affine, AccelError> {
    if sig.scheme != SchemeId::Bls {
        return Err(AccelError::MixedScheme);
    }
    let mut r = RecordReader::new(&sig.bytes);
    let p = bls::decode_signature(r.element()?).ok_or_else(|| SigError::Malformed("BLS point".into()))?;
    r.finish()?;
    Ok(p)
}

/// Sums the constituent signatures. Every entry must be BLS.
pub fn aggregate(entries: &[SignedMessage]) -> Result<AggregateSignature, AccelError> {
    let mut sum = G1::identity();
    let mut covers = Vec::with_capacity(entries.len());
    for e in entries {
        let PublicKey::Bls(pk) = &e.public_key else {
            return Err(AccelError::MixedScheme);
        };
        sum += G1::from(bls_point(&e.signature)?);
        covers.push((pk.clone(), e.message.clone()));
    }
    Ok(AggregateSignature {
        signature: sum.to_affine(),
        covers,
    })
}

/// Rejects empty aggregates and aggregates over repeated messages.
/// Messages under the same key share one pairing.
pub fn verify_aggregate(agg: &AggregateSignature) -> bool {
    if agg.covers.is_empty() {
        return false;
    }
    let distinct: HashSet<&[u8]> = agg.covers.iter().map(|(_, m)| m.as_slice()).collect();
    if distinct.len() != agg.covers.len() {
        return false;
    }
    let mut signers: Vec<(&BlsPublicKey, G1)> = Vec::new();
    for (pk, msg) in &agg.covers {
        let h = bls::hash_message(msg);
        match signers.iter_mut().find(|(k, _)| *k == pk) {
            Some((_, acc)) => *acc += h,
            None => signers.push((pk, h)),
        }
    }
    let sides: Vec<G1Affine> = signers.iter().map(|(_, h)| h.to_affine()).collect();
    let mut terms = vec![(&agg.signature, neg_g2_prepared())];
    for ((pk, _), h) in signers.iter().zip(&sides) {
        terms.push((h, pk.prepared()));
    }
    pairing_product(&terms).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::{keygen, sign, verify, KeyPair, SchemeParams};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn entries(kps: &[KeyPair], n: usize, rng: &mut ChaCha20Rng) -> Vec<SignedMessage> {
        (0..n)
            .map(|i| {
                let kp = &kps[i % kps.len()];
                let msg = format!("/snnu/images/a.jpg/v1/s{i}").into_bytes();
                let sig = sign(kp, &msg, rng).unwrap();
                SignedMessage::new(kp.public(), msg, sig)
            })
            .collect()
    }

    fn bls_keys(n: usize, rng: &mut ChaCha20Rng) -> Vec<KeyPair> {
        (0..n)
            .map(|_| keygen(&SchemeParams::new(SchemeId::Bls), rng).unwrap())
            .collect()
    }

    #[test]
    fn constant_size_and_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(111);
        let kps = bls_keys(3, &mut rng);
        let one = aggregate(&entries(&kps, 1, &mut rng)).unwrap();
        let ten = aggregate(&entries(&kps, 10, &mut rng)).unwrap();
        assert!(verify_aggregate(&one));
        assert!(verify_aggregate(&ten));
        assert_eq!(one.to_signature().bytes.len(), ten.to_signature().bytes.len());
    }

    #[test]
    fn single_aggregate_is_the_signature() {
        let mut rng = ChaCha20Rng::seed_from_u64(112);
        let kps = bls_keys(1, &mut rng);
        let e = entries(&kps, 1, &mut rng);
        let agg = aggregate(&e).unwrap();
        assert_eq!(agg.to_signature(), e[0].signature);
        assert!(verify(&e[0].public_key, &e[0].message, &agg.to_signature()).unwrap());
    }

    #[test]
    fn replaced_message_rejects() {
        let mut rng = ChaCha20Rng::seed_from_u64(113);
        let kps = bls_keys(2, &mut rng);
        let mut agg = aggregate(&entries(&kps, 6, &mut rng)).unwrap();
        agg.covers[4].1 = b"/snnu/images/forged".to_vec();
        assert!(!verify_aggregate(&agg));
    }

    #[test]
    fn order_independent() {
        let mut rng = ChaCha20Rng::seed_from_u64(114);
        let kps = bls_keys(3, &mut rng);
        let mut e = entries(&kps, 9, &mut rng);
        let a = aggregate(&e).unwrap();
        e.shuffle(&mut rng);
        let b = aggregate(&e).unwrap();
        assert_eq!(a.signature, b.signature);
        assert!(verify_aggregate(&b));
    }

    #[test]
    fn invalid_constituent_rejects() {
        let mut rng = ChaCha20Rng::seed_from_u64(115);
        let kps = bls_keys(2, &mut rng);
        let mut e = entries(&kps, 5, &mut rng);
        e[2].signature = sign(&kps[0], b"something else", &mut rng).unwrap();
        assert!(!verify_aggregate(&aggregate(&e).unwrap()));
    }

    #[test]
    fn duplicate_messages_and_other_schemes() {
        let mut rng = ChaCha20Rng::seed_from_u64(116);
        let kps = bls_keys(1, &mut rng);
        let e = entries(&kps, 1, &mut rng);
        let twice = aggregate(&[e[0].clone(), e[0].clone()]).unwrap();
        assert!(!verify_aggregate(&twice));
        let dsa = keygen(&SchemeParams::new(SchemeId::Dsa), &mut rng).unwrap();
        let sig = sign(&dsa, b"m", &mut rng).unwrap();
        assert!(matches!(
            aggregate(&[SignedMessage::new(dsa.public(), b"m".to_vec(), sig)]),
            Err(AccelError::MixedScheme)
        ));
    }
}
