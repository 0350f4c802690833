//! Manager-based group signatures over the DL parameters.
//!
//! The manager issues each member a fresh pseudonymous key pair whose public
//! half is unrelated to the member's identity and publishes the list of those
//! keys as the group public key. A signature is a Schnorr signature under
//! one listed key together with that key. Verifiers learn only that some
//! listed key signed; the manager maps the key back to a member with its
//! private registry. Signatures by the same member carry the same key and
//! are therefore linkable.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::bigint;
use super::codec::{RecordReader, RecordWriter};
use super::dl::{DlKeyPair, DlParams};
use super::SigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MemberId(pub u32);

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "member-{}", self.0)
    }
}

/// The published list of member keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPublicKey {
    pub params: Arc<DlParams>,
    members: Vec<BigUint>,
    index: HashSet<BigUint>,
}

impl GroupPublicKey {
    pub fn new(params: Arc<DlParams>, members: Vec<BigUint>) -> Self {
        let index = members.iter().cloned().collect();
        Self { params, members, index }
    }

    pub fn members(&self) -> &[BigUint] {
        &self.members
    }

    pub fn contains(&self, key: &BigUint) -> bool {
        self.index.contains(key)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A member's issued signing key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMemberKey {
    pub id: MemberId,
    pub key: DlKeyPair,
}

/// The manager's tracing registry and the current group key.
#[derive(Debug, Clone)]
pub struct GroupManager {
    params: Arc<DlParams>,
    registry: HashMap<BigUint, MemberId>,
    public: GroupPublicKey,
}

#[derive(Debug, Clone)]
pub struct GroupSetup {
    pub public: GroupPublicKey,
    pub manager: GroupManager,
    pub members: Vec<GroupMemberKey>,
}

/// Issues `n` member keys and publishes the group key.
pub fn group_setup<R: RngCore + ?Sized>(params: Arc<DlParams>, n: usize, rng: &mut R) -> Result<GroupSetup, SigError> {
    if n == 0 {
        return Err(SigError::Parameter("group needs at least one member".into()));
    }
    let mut manager = GroupManager {
        params: params.clone(),
        registry: HashMap::new(),
        public: GroupPublicKey::new(params, Vec::new()),
    };
    let members = (0..n).map(|_| manager.add_member(rng)).collect();
    Ok(GroupSetup {
        public: manager.public.clone(),
        manager,
        members,
    })
}

impl GroupManager {
    pub fn public_key(&self) -> &GroupPublicKey {
        &self.public
    }

    /// Issues a key for a new member and republishes the group key.
    pub fn add_member<R: RngCore + ?Sized>(&mut self, rng: &mut R) -> GroupMemberKey {
        let id = MemberId(self.registry.len() as u32);
        let key = loop {
            let key = DlKeyPair::generate(self.params.clone(), rng);
            if !self.registry.contains_key(&key.y) {
                break key;
            }
        };
        self.registry.insert(key.y.clone(), id);
        let mut list = self.public.members.clone();
        list.push(key.y.clone());
        self.public = GroupPublicKey::new(self.params.clone(), list);
        GroupMemberKey { id, key }
    }

    /// Removes the member's key from the published list. Signatures by the
    /// member stop verifying against the returned key.
    pub fn revoke(&mut self, id: MemberId) -> Result<&GroupPublicKey, SigError> {
        let key = self
            .registry
            .iter()
            .find(|(_, v)| **v == id)
            .map(|(k, _)| k.clone())
            .ok_or_else(|| SigError::Parameter(format!("{id} is not registered")))?;
        let list = self.public.members.iter().filter(|k| **k != key).cloned().collect();
        self.public = GroupPublicKey::new(self.params.clone(), list);
        Ok(&self.public)
    }

    /// Traces a signature to the member that produced it.
    pub fn open(&self, sig: &GroupSignature) -> Result<MemberId, SigError> {
        self.registry.get(&sig.member_key).copied().ok_or(SigError::OpenFailure)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSignature {
    pub member_key: BigUint,
    pub challenge: BigUint,
    pub response: BigUint,
}

impl GroupSignature {
    pub fn to_bytes(&self, params: &DlParams) -> Vec<u8> {
        RecordWriter::new()
            .element(&bigint::to_fixed_bytes(&self.member_key, params.element_len()))
            .int(&self.challenge, params.scalar_len())
            .int(&self.response, params.scalar_len())
            .finish()
    }

    pub fn from_bytes(bytes: &[u8], params: &DlParams) -> Result<Self, SigError> {
        let mut r = RecordReader::new(bytes);
        let key = r.element()?;
        if key.len() != params.element_len() {
            return Err(SigError::Malformed("member key width".into()));
        }
        let sig = Self {
            member_key: BigUint::from_bytes_be(key),
            challenge: r.int_exact(params.scalar_len())?,
            response: r.int_exact(params.scalar_len())?,
        };
        r.finish()?;
        Ok(sig)
    }
}

fn challenge(params: &DlParams, member_key: &BigUint, commitment: &BigUint, msg: &[u8]) -> BigUint {
    let w = params.element_len();
    bigint::hash_to_scalar(
        &params.q,
        &[
            b"group-sig",
            &bigint::to_fixed_bytes(member_key, w),
            &bigint::to_fixed_bytes(commitment, w),
            msg,
        ],
    )
}

pub fn group_sign<R: RngCore + ?Sized>(
    member: &GroupMemberKey,
    group: &GroupPublicKey,
    msg: &[u8],
    rng: &mut R,
) -> Result<GroupSignature, SigError> {
    if !group.contains(&member.key.y) {
        return Err(SigError::Parameter(format!("{} is not in the group", member.id)));
    }
    let params = &member.key.params;
    let k = params.random_scalar(rng);
    let commitment = params.pow_g_fixed(&k);
    let c = challenge(params, &member.key.y, &commitment, msg);
    let s = (k + &c * &member.key.x) % &params.q;
    Ok(GroupSignature {
        member_key: member.key.y.clone(),
        challenge: c,
        response: s,
    })
}

/// Checks that the carried key is a valid subgroup element listed in the
/// group key, then the Schnorr equation `c = H(B, g^s * B^-c, m)`.
pub fn group_verify(group: &GroupPublicKey, msg: &[u8], sig: &GroupSignature) -> bool {
    let params = &group.params;
    let (p, q) = (&params.p, &params.q);
    if sig.challenge >= *q || sig.response >= *q {
        return false;
    }
    if !params.is_subgroup_element(&sig.member_key) || !group.contains(&sig.member_key) {
        return false;
    }
    let neg_c = (q - &sig.challenge) % q;
    let commitment = params.pow_g(&sig.response) * sig.member_key.modpow(&neg_c, p) % p;
    challenge(params, &sig.member_key, &commitment, msg) == sig.challenge
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::codec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn setup(n: usize, seed: u64) -> (GroupSetup, ChaCha20Rng) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let s = group_setup(DlParams::default_1024_160(), n, &mut rng).unwrap();
        (s, rng)
    }

    #[test]
    fn five_members_get_distinct_keys() {
        let (s, _) = setup(5, 61);
        assert_eq!(s.public.len(), 5);
        let distinct: HashSet<_> = s.public.members().iter().collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn sign_verify_open() {
        let (s, mut rng) = setup(5, 62);
        let sig = group_sign(&s.members[3], &s.public, b"packet", &mut rng).unwrap();
        assert!(group_verify(&s.public, b"packet", &sig));
        assert!(!group_verify(&s.public, b"packet!", &sig));
        assert_eq!(s.manager.open(&sig).unwrap(), MemberId(3));
    }

    #[test]
    fn degenerate_group_of_one() {
        let (s, mut rng) = setup(1, 63);
        let sig = group_sign(&s.members[0], &s.public, b"m", &mut rng).unwrap();
        assert!(group_verify(&s.public, b"m", &sig));
    }

    #[test]
    fn non_member_rejected() {
        let (s, mut rng) = setup(3, 64);
        let (outsider, _) = setup(1, 65);
        let forged = group_sign(&outsider.members[0], &outsider.public, b"m", &mut rng).unwrap();
        assert!(!group_verify(&s.public, b"m", &forged));
        assert!(matches!(s.manager.open(&forged), Err(SigError::OpenFailure)));
        // refuses to sign for a group the key is not part of
        assert!(group_sign(&outsider.members[0], &s.public, b"m", &mut rng).is_err());
    }

    #[test]
    fn revocation_rejects_new_signatures() {
        let (mut s, mut rng) = setup(5, 66);
        let before = group_sign(&s.members[2], &s.public, b"m", &mut rng).unwrap();
        assert!(group_verify(&s.public, b"m", &before));
        let updated = s.manager.revoke(MemberId(2)).unwrap().clone();
        assert_eq!(updated.len(), 4);
        assert!(group_sign(&s.members[2], &updated, b"m2", &mut rng).is_err());
        // a signature produced against the old list no longer verifies
        let stale = group_sign(&s.members[2], &s.public, b"m2", &mut rng).unwrap();
        assert!(!group_verify(&updated, b"m2", &stale));
        let other = group_sign(&s.members[1], &updated, b"m2", &mut rng).unwrap();
        assert!(group_verify(&updated, b"m2", &other));
    }

    #[test]
    fn serialized_signature_has_no_index_field() {
        let (s, mut rng) = setup(5, 67);
        let sig = group_sign(&s.members[4], &s.public, b"m", &mut rng).unwrap();
        let bytes = sig.to_bytes(&s.public.params);
        let fields = codec::fields(&bytes).unwrap();
        let types: Vec<u8> = fields.iter().map(|(t, _)| *t).collect();
        assert_eq!(types, vec![codec::ELEMENT, codec::INTEGER, codec::INTEGER]);
        assert!(!types.contains(&codec::INDEX));
        assert_eq!(GroupSignature::from_bytes(&bytes, &s.public.params).unwrap(), sig);
    }
}
