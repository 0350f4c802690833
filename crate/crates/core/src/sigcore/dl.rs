//! Discrete-logarithm domain parameters shared by DSA, the group signature
//! and the ring signature.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::{CryptoRng, RngCore};

use super::bigint::{self, FixedBaseTable};
use super::SigError;

// 1024-bit p, 160-bit q, q | p - 1, g of order q. Generated once from a
// seeded search; `DlParams::validate` re-checks all of it.
const P_1024: &str = "cdd391a1a77db4686cae104c70f98186f33fe8216fc786f2311f698f0db5c64068cb95958ddf112cf4213c9b077d6542f3e08d6caa615bd3dddf5717498385abcebb01a42db9f52d03de0d11d31136834f8a9a6c4dea823e89c556cf91d71232797f73099edfd0e50c4b62f9e06e0db7bc585cddf1e0fe50a2fba462c9606ec3";
const Q_160: &str = "c2fb8e3b8be9c9c2bf17ad2a68578095dcc3d729";
const G_1024: &str = "248fa7277a4b75687272ea519f979affea49fc594e25e5ff9a711e8d5558ab419554285b3e60424dcfd1dd383664e9b183fdf05c08192571afe4a626d256b81698d40efbe90cc069ccd5161bbdde652a8eef091beff44f3049011363b39ecbf964cdad2a2683534b2f04d4ef0e50a720993893465bea63202e45118416e169b1";

pub struct DlParams {
    pub p: BigUint,
    pub q: BigUint,
    pub g: BigUint,
    table: OnceLock<FixedBaseTable>,
}

impl fmt::Debug for DlParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DlParams")
            .field("p_bits", &self.p.bits())
            .field("q_bits", &self.q.bits())
            .finish()
    }
}

impl PartialEq for DlParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && self.g == other.g
    }
}

impl Eq for DlParams {}

impl DlParams {
    pub fn new(p: BigUint, q: BigUint, g: BigUint) -> Self {
        Self {
            p,
            q,
            g,
            table: OnceLock::new(),
        }
    }

    /// The built-in 1024/160-bit parameter set.
    pub fn default_1024_160() -> Arc<DlParams> {
        static PARAMS: OnceLock<Arc<DlParams>> = OnceLock::new();
        PARAMS
            .get_or_init(|| {
                let parse = |s: &str| BigUint::parse_bytes(s.as_bytes(), 16).expect("valid hex constant");
                Arc::new(DlParams::new(parse(P_1024), parse(Q_160), parse(G_1024)))
            })
            .clone()
    }

    /// Searches for fresh parameters: a `q_bits` prime `q`, a `p_bits` prime
    /// `p = k*q + 1`, and a generator of the order-`q` subgroup.
    pub fn generate<R: RngCore + CryptoRng>(p_bits: u64, q_bits: u64, rng: &mut R) -> Result<Self, SigError> {
        if q_bits + 2 > p_bits || q_bits < 8 {
            return Err(SigError::Parameter(format!("cannot build {p_bits}/{q_bits}-bit DL group")));
        }
        let q = loop {
            let mut c = rng.gen_biguint(q_bits);
            c.set_bit(q_bits - 1, true);
            c.set_bit(0, true);
            if bigint::is_probable_prime(&c, 32, rng) {
                break c;
            }
        };
        let two_q = &q << 1;
        let p = loop {
            let mut x = rng.gen_biguint(p_bits);
            x.set_bit(p_bits - 1, true);
            let p: BigUint = &x - (&x % &two_q) + 1u32;
            if p.bits() == p_bits && bigint::is_probable_prime(&p, 32, rng) {
                break p;
            }
        };
        let cofactor = (&p - 1u32) / &q;
        let mut h = BigUint::from(2u32);
        let g = loop {
            let g = h.modpow(&cofactor, &p);
            if !g.is_one() {
                break g;
            }
            h += 1u32;
        };
        Ok(Self::new(p, q, g))
    }

    /// Checks primality of `p` and `q`, `q | p - 1`, and that `g` generates
    /// the order-`q` subgroup.
    pub fn validate<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<(), SigError> {
        let bad = |what: &str| Err(SigError::Parameter(what.to_owned()));
        if !bigint::is_probable_prime(&self.p, 32, rng) {
            return bad("p is not prime");
        }
        if !bigint::is_probable_prime(&self.q, 32, rng) {
            return bad("q is not prime");
        }
        if !((&self.p - 1u32) % &self.q).is_zero() {
            return bad("q does not divide p - 1");
        }
        if self.g <= BigUint::one() || self.g >= self.p || !self.g.modpow(&self.q, &self.p).is_one() {
            return bad("g is not of order q");
        }
        Ok(())
    }

    pub fn element_len(&self) -> usize {
        bigint::byte_width(&self.p)
    }

    pub fn scalar_len(&self) -> usize {
        bigint::byte_width(&self.q)
    }

    /// `g^e mod p` through the precomputed fixed-base table. Signers use
    /// this for their per-signature commitments.
    pub fn pow_g_fixed(&self, e: &BigUint) -> BigUint {
        self.table
            .get_or_init(|| FixedBaseTable::new(&self.g, &self.p, self.q.bits()))
            .pow(e)
    }

    /// `g^e mod p` by generic square-and-multiply.
    pub fn pow_g(&self, e: &BigUint) -> BigUint {
        self.g.modpow(e, &self.p)
    }

    /// Full public-key validation: `1 < y < p` and `y^q = 1 (mod p)`.
    pub fn is_subgroup_element(&self, y: &BigUint) -> bool {
        *y > BigUint::one() && *y < self.p && self.is_order_q(y)
    }

    fn is_order_q(&self, y: &BigUint) -> bool {
        y.modpow(&self.q, &self.p).is_one()
    }

    pub fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> BigUint {
        bigint::random_nonzero_below(&self.q, rng)
    }
}

/// A DL key pair `y = g^x mod p`.
#[derive(Clone, PartialEq, Eq)]
pub struct DlKeyPair {
    pub params: Arc<DlParams>,
    pub x: BigUint,
    pub y: BigUint,
}

impl fmt::Debug for DlKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DlKeyPair").field("y", &self.y).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlPublicKey {
    pub params: Arc<DlParams>,
    pub y: BigUint,
}

impl DlKeyPair {
    pub fn generate<R: RngCore + ?Sized>(params: Arc<DlParams>, rng: &mut R) -> Self {
        let x = params.random_scalar(rng);
        Self::from_secret(params, x)
    }

    pub fn from_secret(params: Arc<DlParams>, x: BigUint) -> Self {
        let y = params.pow_g_fixed(&x);
        Self { params, x, y }
    }

    pub fn public(&self) -> DlPublicKey {
        DlPublicKey {
            params: self.params.clone(),
            y: self.y.clone(),
        }
    }
}
