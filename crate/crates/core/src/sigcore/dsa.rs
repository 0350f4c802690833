//! DSA over the shared DL parameters.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::RngCore;

use super::bigint;
use super::dl::{DlKeyPair, DlPublicKey};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsaSignature {
    pub r: BigUint,
    pub s: BigUint,
}

fn message_representative(msg: &[u8], q: &BigUint) -> BigUint {
    bigint::truncated_digest(msg, q.bits())
}

pub fn sign<R: RngCore + ?Sized>(kp: &DlKeyPair, msg: &[u8], rng: &mut R) -> DsaSignature {
    let params = &kp.params;
    let q = &params.q;
    let h = message_representative(msg, q);
    loop {
        let k = params.random_scalar(rng);
        let r = params.pow_g_fixed(&k) % q;
        if r.is_zero() {
            continue;
        }
        let k_inv = bigint::mod_inverse(&k, q).expect("q is prime");
        let s = k_inv * ((&h + &kp.x * &r) % q) % q;
        if s.is_zero() {
            continue;
        }
        return DsaSignature { r, s };
    }
}

pub fn verify(pk: &DlPublicKey, msg: &[u8], sig: &DsaSignature) -> bool {
    let params = &pk.params;
    let (p, q) = (&params.p, &params.q);
    if sig.r.is_zero() || sig.s.is_zero() || sig.r >= *q || sig.s >= *q {
        return false;
    }
    let Some(w) = bigint::mod_inverse(&sig.s, q) else {
        return false;
    };
    let h = message_representative(msg, q);
    let u1 = h * &w % q;
    let u2 = &sig.r * &w % q;
    let v = params.pow_g(&u1) * pk.y.modpow(&u2, p) % p % q;
    v == sig.r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::dl::DlParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn sign_verify_and_nonce_freshness() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let kp = DlKeyPair::generate(DlParams::default_1024_160(), &mut rng);
        let a = sign(&kp, b"msg", &mut rng);
        let b = sign(&kp, b"msg", &mut rng);
        assert_ne!(a, b);
        assert!(verify(&kp.public(), b"msg", &a));
        assert!(verify(&kp.public(), b"msg", &b));
        assert!(!verify(&kp.public(), b"msh", &a));
    }

    #[test]
    fn out_of_range_components_rejected() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        let kp = DlKeyPair::generate(DlParams::default_1024_160(), &mut rng);
        let good = sign(&kp, b"x", &mut rng);
        let q = kp.params.q.clone();
        for bad in [
            DsaSignature { r: BigUint::zero(), s: good.s.clone() },
            DsaSignature { r: good.r.clone(), s: BigUint::zero() },
            DsaSignature { r: &good.r + &q, s: good.s.clone() },
            DsaSignature { r: good.r.clone(), s: &good.s + &q },
        ] {
            assert!(!verify(&kp.public(), b"x", &bad));
        }
    }
}
