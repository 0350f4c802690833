//! ECDSA over the curves in [`super::ec`].

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::RngCore;

use super::bigint;
use super::ec::{Affine, CurveId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcdsaPublicKey {
    pub curve: CurveId,
    pub q: Affine,
}

#[derive(Clone, PartialEq, Eq)]
pub struct EcdsaKeyPair {
    pub curve: CurveId,
    pub d: BigUint,
    pub q: Affine,
}

impl std::fmt::Debug for EcdsaKeyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EcdsaKeyPair")
            .field("curve", &self.curve)
            .field("q", &self.q)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcdsaSignature {
    pub r: BigUint,
    pub s: BigUint,
}

impl EcdsaKeyPair {
    pub fn generate<R: RngCore + ?Sized>(curve: CurveId, rng: &mut R) -> Self {
        let c = curve.curve();
        let d = rng.gen_biguint_range(&BigUint::one(), &c.n);
        let q = c.mul_base_fixed(&d);
        Self { curve, d, q }
    }

    pub fn public(&self) -> EcdsaPublicKey {
        EcdsaPublicKey {
            curve: self.curve,
            q: self.q.clone(),
        }
    }
}

fn x_mod_n(pt: &Affine, n: &BigUint) -> Option<BigUint> {
    match pt {
        Affine::Infinity => None,
        Affine::Point { x, .. } => Some(x % n),
    }
}

pub fn sign<R: RngCore + ?Sized>(kp: &EcdsaKeyPair, msg: &[u8], rng: &mut R) -> EcdsaSignature {
    let c = kp.curve.curve();
    let n = &c.n;
    let e = bigint::truncated_digest(msg, n.bits());
    loop {
        let k = rng.gen_biguint_range(&BigUint::one(), n);
        let Some(r) = x_mod_n(&c.mul_base_fixed(&k), n) else {
            continue;
        };
        if r.is_zero() {
            continue;
        }
        let k_inv = bigint::mod_inverse(&k, n).expect("n is prime");
        let s = k_inv * ((&e + &kp.d * &r) % n) % n;
        if s.is_zero() {
            continue;
        }
        return EcdsaSignature { r, s };
    }
}

pub fn verify(pk: &EcdsaPublicKey, msg: &[u8], sig: &EcdsaSignature) -> bool {
    let c = pk.curve.curve();
    let n = &c.n;
    if sig.r.is_zero() || sig.s.is_zero() || sig.r >= *n || sig.s >= *n {
        return false;
    }
    let Some(w) = bigint::mod_inverse(&sig.s, n) else {
        return false;
    };
    let e = bigint::truncated_digest(msg, n.bits());
    let u1 = e * &w % n;
    let u2 = &sig.r * &w % n;
    let point = c.add(&c.mul(&u1, &c.g), &c.mul(&u2, &pk.q));
    x_mod_n(&point, n).is_some_and(|v| v == sig.r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn both_curves_sign_and_verify() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for curve in [CurveId::Brainpool160T1, CurveId::P256] {
            let kp = EcdsaKeyPair::generate(curve, &mut rng);
            let sig = sign(&kp, b"content", &mut rng);
            assert!(verify(&kp.public(), b"content", &sig));
            assert!(!verify(&kp.public(), b"contenT", &sig));
            let other = EcdsaKeyPair::generate(curve, &mut rng);
            assert!(!verify(&other.public(), b"content", &sig));
        }
    }

    #[test]
    fn public_key_is_on_curve() {
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let kp = EcdsaKeyPair::generate(CurveId::Brainpool160T1, &mut rng);
        let c = kp.curve.curve();
        assert!(c.is_on_curve(&kp.q));
        assert_eq!(kp.q, c.mul(&kp.d, &c.g));
    }
}
