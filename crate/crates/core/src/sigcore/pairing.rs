//! BLS12-381 arithmetic over `blst`: the scalar field, G1, G2, the target
//! group and the pairing.
//!
//! Every pairing goes through [`pairing_product`] or [`pairing`], which
//! count Miller loops per thread so callers can check how many pairings an
//! operation performed locally.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use blst::{
    blst_final_exp, blst_fp12, blst_fp6, blst_fr, blst_fr_add, blst_fr_eucl_inverse, blst_fr_from_scalar,
    blst_fr_from_uint64, blst_fr_mul, blst_fr_sub, blst_hash_to_g1, blst_miller_loop, blst_miller_loop_lines,
    blst_p1, blst_p1_add_or_double, blst_p1_affine, blst_p1_affine_compress, blst_p1_affine_generator,
    blst_p1_affine_in_g1, blst_p1_affine_is_equal, blst_p1_affine_is_inf, blst_p1_cneg, blst_p1_double,
    blst_p1_from_affine, blst_p1_generator, blst_p1_is_equal, blst_p1_is_inf, blst_p1_mult, blst_p1_to_affine,
    blst_p1_uncompress, blst_p2, blst_p2_affine, blst_p2_affine_compress, blst_p2_affine_generator,
    blst_p2_affine_in_g2, blst_p2_affine_is_equal, blst_p2_affine_is_inf, blst_p2_cneg, blst_p2_from_affine,
    blst_p2_generator, blst_p2_mult, blst_p2_to_affine, blst_p2_uncompress, blst_precompute_lines, blst_scalar,
    blst_scalar_fr_check, blst_scalar_from_bendian, blst_scalar_from_fr, blst_scalar_from_le_bytes, BLST_ERROR,
    MultiPoint,
};
use rand::RngCore;

thread_local! {
    static PAIRINGS: Cell<u64> = const { Cell::new(0) };
}

/// Number of pairings (Miller loops) evaluated on the current thread.
pub fn pairings_on_this_thread() -> u64 {
    PAIRINGS.with(Cell::get)
}

fn count_pairings(n: usize) {
    PAIRINGS.with(|c| c.set(c.get() + n as u64));
}

/// An element of the scalar field `F_r`, `r` the prime group order.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
pub struct Scalar(blst_fr);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", hex::encode(self.to_be_bytes()))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        let limbs = [v, 0, 0, 0];
        let mut out = blst_fr::default();
        unsafe { blst_fr_from_uint64(&mut out, limbs.as_ptr()) };
        Self(out)
    }

    pub fn from_u128(v: u128) -> Self {
        let limbs = [v as u64, (v >> 64) as u64, 0, 0];
        let mut out = blst_fr::default();
        unsafe { blst_fr_from_uint64(&mut out, limbs.as_ptr()) };
        Self(out)
    }

    /// Reduces arbitrary little-endian bytes modulo `r`.
    pub fn from_le_bytes_mod_order(bytes: &[u8]) -> Self {
        let mut s = blst_scalar::default();
        let mut out = blst_fr::default();
        unsafe {
            blst_scalar_from_le_bytes(&mut s, bytes.as_ptr(), bytes.len());
            blst_fr_from_scalar(&mut out, &s);
        }
        Self(out)
    }

    /// Uniform over `F_r` (64 random bytes reduced modulo `r`).
    pub fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Self::from_le_bytes_mod_order(&wide)
    }

    /// Canonical big-endian encoding; values `>= r` are rejected.
    pub fn from_be_bytes(bytes: &[u8; 32]) -> Option<Self> {
        let mut s = blst_scalar::default();
        let mut out = blst_fr::default();
        unsafe {
            blst_scalar_from_bendian(&mut s, bytes.as_ptr());
            if !blst_scalar_fr_check(&s) {
                return None;
            }
            blst_fr_from_scalar(&mut out, &s);
        }
        Some(Self(out))
    }

    pub fn to_be_bytes(&self) -> [u8; 32] {
        let mut le = self.to_le_bytes();
        le.reverse();
        le
    }

    pub fn to_le_bytes(&self) -> [u8; 32] {
        let mut s = blst_scalar::default();
        unsafe { blst_scalar_from_fr(&mut s, &self.0) };
        s.b
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut out = blst_fr::default();
        unsafe { blst_fr_eucl_inverse(&mut out, &self.0) };
        Some(Self(out))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let mut out = blst_fr::default();
        unsafe { blst_fr_add(&mut out, &self.0, &rhs.0) };
        Scalar(out)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        let mut out = blst_fr::default();
        unsafe { blst_fr_sub(&mut out, &self.0, &rhs.0) };
        Scalar(out)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let mut out = blst_fr::default();
        unsafe { blst_fr_mul(&mut out, &self.0, &rhs.0) };
        Scalar(out)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::zero() - self
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = *self + rhs;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = *self - rhs;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

/// A G1 point in projective coordinates.
#[derive(Clone, Copy, Default)]
pub struct G1(blst_p1);

/// A G1 point in affine coordinates; the serialized form.
#[derive(Clone, Copy, Default)]
pub struct G1Affine(blst_p1_affine);

pub const G1_COMPRESSED_LEN: usize = 48;
pub const G2_COMPRESSED_LEN: usize = 96;

impl G1 {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator() -> Self {
        Self(unsafe { *blst_p1_generator() })
    }

    /// Hash-to-curve (SSWU, expand_message_xmd with SHA-256).
    pub fn hash(msg: &[u8], dst: &[u8]) -> Self {
        let mut out = blst_p1::default();
        unsafe {
            blst_hash_to_g1(
                &mut out,
                msg.as_ptr(),
                msg.len(),
                dst.as_ptr(),
                dst.len(),
                std::ptr::null(),
                0,
            )
        };
        Self(out)
    }

    pub fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        Self::generator() * Scalar::random(rng)
    }

    pub fn is_identity(&self) -> bool {
        unsafe { blst_p1_is_inf(&self.0) }
    }

    pub fn double(&self) -> Self {
        let mut out = blst_p1::default();
        unsafe { blst_p1_double(&mut out, &self.0) };
        Self(out)
    }

    /// `k * self` for a multiplier of at most 128 bits.
    pub fn mul_u128(&self, k: u128) -> Self {
        let bytes = k.to_le_bytes();
        let mut out = blst_p1::default();
        unsafe { blst_p1_mult(&mut out, &self.0, bytes.as_ptr(), 128) };
        Self(out)
    }

    pub fn to_affine(&self) -> G1Affine {
        let mut out = blst_p1_affine::default();
        unsafe { blst_p1_to_affine(&mut out, &self.0) };
        G1Affine(out)
    }

    /// `sum k_i * P_i` by Pippenger bucketing.
    pub fn msm(points: &[G1Affine], scalars: &[Scalar]) -> Self {
        assert_eq!(points.len(), scalars.len(), "msm needs one scalar per point");
        if points.is_empty() {
            return Self::identity();
        }
        let raw: Vec<blst_p1_affine> = points.iter().map(|p| p.0).collect();
        let mut bytes = Vec::with_capacity(32 * scalars.len());
        for s in scalars {
            bytes.extend_from_slice(&s.to_le_bytes());
        }
        Self(raw.as_slice().mult(&bytes, 255))
    }

    /// `sum k_i * P_i` for multipliers below `2^bits`, `bits <= 128`.
    pub fn msm_small(points: &[G1Affine], ks: &[u128], bits: usize) -> Self {
        assert_eq!(points.len(), ks.len(), "msm needs one multiplier per point");
        assert!((1..=128).contains(&bits), "multiplier width out of range");
        if points.is_empty() {
            return Self::identity();
        }
        let raw: Vec<blst_p1_affine> = points.iter().map(|p| p.0).collect();
        let nbytes = bits.div_ceil(8);
        let mut bytes = Vec::with_capacity(nbytes * ks.len());
        for k in ks {
            bytes.extend_from_slice(&k.to_le_bytes()[..nbytes]);
        }
        Self(raw.as_slice().mult(&bytes, bits))
    }
}

impl fmt::Debug for G1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_affine().fmt(f)
    }
}

impl PartialEq for G1 {
    fn eq(&self, other: &Self) -> bool {
        unsafe { blst_p1_is_equal(&self.0, &other.0) }
    }
}

impl Eq for G1 {}

impl Add for G1 {
    type Output = G1;
    fn add(self, rhs: G1) -> G1 {
        let mut out = blst_p1::default();
        unsafe { blst_p1_add_or_double(&mut out, &self.0, &rhs.0) };
        G1(out)
    }
}

impl AddAssign for G1 {
    fn add_assign(&mut self, rhs: G1) {
        *self = *self + rhs;
    }
}

impl Neg for G1 {
    type Output = G1;
    fn neg(mut self) -> G1 {
        unsafe { blst_p1_cneg(&mut self.0, true) };
        self
    }
}

impl Sub for G1 {
    type Output = G1;
    fn sub(self, rhs: G1) -> G1 {
        self + (-rhs)
    }
}

impl Mul<Scalar> for G1 {
    type Output = G1;
    fn mul(self, k: Scalar) -> G1 {
        let bytes = k.to_le_bytes();
        let mut out = blst_p1::default();
        unsafe { blst_p1_mult(&mut out, &self.0, bytes.as_ptr(), 255) };
        G1(out)
    }
}

impl std::iter::Sum for G1 {
    fn sum<I: Iterator<Item = G1>>(iter: I) -> G1 {
        iter.fold(G1::identity(), |a, b| a + b)
    }
}

impl From<G1Affine> for G1 {
    fn from(p: G1Affine) -> G1 {
        let mut out = blst_p1::default();
        unsafe { blst_p1_from_affine(&mut out, &p.0) };
        G1(out)
    }
}

impl G1Affine {
    pub fn generator() -> Self {
        Self(unsafe { *blst_p1_affine_generator() })
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        unsafe { blst_p1_affine_is_inf(&self.0) }
    }

    pub fn to_compressed(&self) -> [u8; G1_COMPRESSED_LEN] {
        let mut out = [0u8; G1_COMPRESSED_LEN];
        unsafe { blst_p1_affine_compress(out.as_mut_ptr(), &self.0) };
        out
    }

    /// Decompresses and checks subgroup membership.
    pub fn from_compressed(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != G1_COMPRESSED_LEN {
            return None;
        }
        let mut out = blst_p1_affine::default();
        unsafe {
            if blst_p1_uncompress(&mut out, bytes.as_ptr()) != BLST_ERROR::BLST_SUCCESS {
                return None;
            }
            if !blst_p1_affine_in_g1(&out) {
                return None;
            }
        }
        Some(Self(out))
    }
}

impl fmt::Debug for G1Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G1({})", hex::encode(self.to_compressed()))
    }
}

impl PartialEq for G1Affine {
    fn eq(&self, other: &Self) -> bool {
        unsafe { blst_p1_affine_is_equal(&self.0, &other.0) }
    }
}

impl Eq for G1Affine {}

/// A G2 point in projective coordinates.
#[derive(Clone, Copy, Default)]
pub struct G2(blst_p2);

#[derive(Clone, Copy, Default)]
pub struct G2Affine(blst_p2_affine);

impl G2 {
    pub fn generator() -> Self {
        Self(unsafe { *blst_p2_generator() })
    }

    pub fn to_affine(&self) -> G2Affine {
        let mut out = blst_p2_affine::default();
        unsafe { blst_p2_to_affine(&mut out, &self.0) };
        G2Affine(out)
    }
}

impl Mul<Scalar> for G2 {
    type Output = G2;
    fn mul(self, k: Scalar) -> G2 {
        let bytes = k.to_le_bytes();
        let mut out = blst_p2::default();
        unsafe { blst_p2_mult(&mut out, &self.0, bytes.as_ptr(), 255) };
        G2(out)
    }
}

impl Neg for G2 {
    type Output = G2;
    fn neg(mut self) -> G2 {
        unsafe { blst_p2_cneg(&mut self.0, true) };
        self
    }
}

impl From<G2Affine> for G2 {
    fn from(p: G2Affine) -> G2 {
        let mut out = blst_p2::default();
        unsafe { blst_p2_from_affine(&mut out, &p.0) };
        G2(out)
    }
}

impl G2Affine {
    pub fn generator() -> Self {
        Self(unsafe { *blst_p2_affine_generator() })
    }

    pub fn is_identity(&self) -> bool {
        unsafe { blst_p2_affine_is_inf(&self.0) }
    }

    pub fn to_compressed(&self) -> [u8; G2_COMPRESSED_LEN] {
        let mut out = [0u8; G2_COMPRESSED_LEN];
        unsafe { blst_p2_affine_compress(out.as_mut_ptr(), &self.0) };
        out
    }

    /// Decompresses and checks subgroup membership.
    pub fn from_compressed(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != G2_COMPRESSED_LEN {
            return None;
        }
        let mut out = blst_p2_affine::default();
        unsafe {
            if blst_p2_uncompress(&mut out, bytes.as_ptr()) != BLST_ERROR::BLST_SUCCESS {
                return None;
            }
            if !blst_p2_affine_in_g2(&out) {
                return None;
            }
        }
        Some(Self(out))
    }
}

impl fmt::Debug for G2Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G2({})", hex::encode(self.to_compressed()))
    }
}

impl PartialEq for G2Affine {
    fn eq(&self, other: &Self) -> bool {
        unsafe { blst_p2_affine_is_equal(&self.0, &other.0) }
    }
}

impl Eq for G2Affine {}

const LINES: usize = 68;

/// Precomputed Miller-loop lines for a fixed G2 argument.
#[derive(Clone)]
pub struct G2Prepared {
    point: G2Affine,
    lines: Box<[blst_fp6; LINES]>,
}

impl G2Prepared {
    pub fn new(point: G2Affine) -> Self {
        let mut lines = Box::new([blst_fp6::default(); LINES]);
        unsafe { blst_precompute_lines(lines.as_mut_ptr(), &point.0) };
        Self { point, lines }
    }

    pub fn point(&self) -> &G2Affine {
        &self.point
    }
}

impl fmt::Debug for G2Prepared {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prepared({:?})", self.point)
    }
}

/// `-g2`, prepared once.
pub fn neg_g2_prepared() -> &'static G2Prepared {
    static NEG_G2: OnceLock<G2Prepared> = OnceLock::new();
    NEG_G2.get_or_init(|| G2Prepared::new((-G2::generator()).to_affine()))
}

/// `g2`, prepared once.
pub fn g2_prepared() -> &'static G2Prepared {
    static G2P: OnceLock<G2Prepared> = OnceLock::new();
    G2P.get_or_init(|| G2Prepared::new(G2Affine::generator()))
}

/// An element of the order-`r` target group, written multiplicatively.
#[derive(Clone, Copy)]
pub struct Gt(blst_fp12);

impl Gt {
    pub fn one() -> Self {
        Self(unsafe { *blst::blst_fp12_one() })
    }

    /// `e(g1, g2)`.
    pub fn generator() -> Self {
        static GEN: OnceLock<Gt> = OnceLock::new();
        *GEN.get_or_init(|| {
            let mut ml = blst_fp12::default();
            let mut out = blst_fp12::default();
            unsafe {
                blst_miller_loop(&mut ml, &G2Affine::generator().0, &G1Affine::generator().0);
                blst_final_exp(&mut out, &ml);
            }
            Gt(out)
        })
    }

    pub fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        Self::generator().pow(&Scalar::random(rng))
    }

    pub fn is_one(&self) -> bool {
        unsafe { blst::blst_fp12_is_one(&self.0) }
    }

    pub fn square(&self) -> Self {
        let mut out = blst_fp12::default();
        unsafe { blst::blst_fp12_sqr(&mut out, &self.0) };
        Self(out)
    }

    pub fn pow(&self, k: &Scalar) -> Self {
        self.pow_le_bytes(&k.to_le_bytes())
    }

    pub fn pow_u128(&self, k: u128) -> Self {
        self.pow_le_bytes(&k.to_le_bytes())
    }

    fn pow_le_bytes(&self, le: &[u8]) -> Self {
        let mut acc = Gt::one();
        for byte in le.iter().rev() {
            for bit in (0..8).rev() {
                acc = acc.square();
                if (byte >> bit) & 1 == 1 {
                    acc *= *self;
                }
            }
        }
        acc
    }

    pub fn to_bytes(&self) -> [u8; 576] {
        let mut out = [0u8; 576];
        unsafe { blst::blst_bendian_from_fp12(out.as_mut_ptr(), &self.0) };
        out
    }
}

impl fmt::Debug for Gt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gt({}..)", hex::encode(&self.to_bytes()[..8]))
    }
}

impl PartialEq for Gt {
    fn eq(&self, other: &Self) -> bool {
        unsafe { blst::blst_fp12_is_equal(&self.0, &other.0) }
    }
}

impl Eq for Gt {}

impl Mul for Gt {
    type Output = Gt;
    fn mul(self, rhs: Gt) -> Gt {
        let mut out = blst_fp12::default();
        unsafe { blst::blst_fp12_mul(&mut out, &self.0, &rhs.0) };
        Gt(out)
    }
}

impl MulAssign for Gt {
    fn mul_assign(&mut self, rhs: Gt) {
        *self = *self * rhs;
    }
}

/// `prod e(a_i, b_i)`: one Miller loop per term and a shared final
/// exponentiation.
pub fn pairing_product(terms: &[(&G1Affine, &G2Prepared)]) -> Gt {
    count_pairings(terms.len());
    let mut acc = Gt::one();
    for (a, b) in terms {
        let mut ml = blst_fp12::default();
        unsafe { blst_miller_loop_lines(&mut ml, b.lines.as_ptr(), &a.0) };
        acc *= Gt(ml);
    }
    let mut out = blst_fp12::default();
    unsafe { blst_final_exp(&mut out, &acc.0) };
    Gt(out)
}

/// A single pairing `e(a, b)`.
pub fn pairing(a: &G1Affine, b: &G2Affine) -> Gt {
    count_pairings(1);
    let mut ml = blst_fp12::default();
    let mut out = blst_fp12::default();
    unsafe {
        blst_miller_loop(&mut ml, &b.0, &a.0);
        blst_final_exp(&mut out, &ml);
    }
    Gt(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn scalar_field_arithmetic() {
        let mut rng = ChaCha20Rng::seed_from_u64(91);
        let a = Scalar::random(&mut rng);
        let b = Scalar::random(&mut rng);
        assert_eq!(a + b - b, a);
        assert_eq!(a * a.inverse().unwrap(), Scalar::one());
        assert_eq!(a + (-a), Scalar::zero());
        assert!(Scalar::zero().inverse().is_none());
        assert_eq!(Scalar::from_u64(6) * Scalar::from_u64(7), Scalar::from_u64(42));
        assert_eq!(Scalar::from_be_bytes(&a.to_be_bytes()), Some(a));
        assert_eq!(Scalar::from_be_bytes(&[0xFF; 32]), None);
        let two_64 = Scalar::from_u128(1 << 64);
        assert_eq!(Scalar::from_u128(u128::MAX) + Scalar::one(), two_64 * two_64);
    }

    #[test]
    fn group_operations_agree() {
        let mut rng = ChaCha20Rng::seed_from_u64(92);
        let p = G1::random(&mut rng);
        let a = Scalar::random(&mut rng);
        let b = Scalar::random(&mut rng);
        assert_eq!(p * a + p * b, p * (a + b));
        assert_eq!(p.mul_u128(12345), p * Scalar::from_u64(12345));
        assert_eq!(p + (-p), G1::identity());
        assert_eq!(p.double(), p + p);
        let aff = p.to_affine();
        assert_eq!(G1Affine::from_compressed(&aff.to_compressed()), Some(aff));
        assert_eq!(G1::from(aff), p);
    }

    #[test]
    fn msm_matches_naive_sum() {
        let mut rng = ChaCha20Rng::seed_from_u64(93);
        for n in [1usize, 2, 7, 40] {
            let pts: Vec<G1> = (0..n).map(|_| G1::random(&mut rng)).collect();
            let ks: Vec<Scalar> = (0..n).map(|_| Scalar::random(&mut rng)).collect();
            let naive: G1 = pts.iter().zip(&ks).map(|(p, k)| *p * *k).sum();
            let aff: Vec<G1Affine> = pts.iter().map(G1::to_affine).collect();
            assert_eq!(G1::msm(&aff, &ks), naive);
        }
        assert_eq!(G1::msm(&[], &[]), G1::identity());
        let pts: Vec<G1Affine> = (0..5).map(|_| G1::random(&mut rng).to_affine()).collect();
        let ks: Vec<u128> = (0..5).map(|i| (1u128 << 79) + i * 977).collect();
        let naive: G1 = pts.iter().zip(&ks).map(|(p, k)| G1::from(*p).mul_u128(*k)).sum();
        assert_eq!(G1::msm_small(&pts, &ks, 80), naive);
    }

    #[test]
    fn pairing_is_bilinear() {
        let mut rng = ChaCha20Rng::seed_from_u64(94);
        let a = Scalar::random(&mut rng);
        let b = Scalar::random(&mut rng);
        let p = (G1::generator() * a).to_affine();
        let q = (G2::generator() * b).to_affine();
        let lhs = pairing(&p, &q);
        assert_eq!(lhs, Gt::generator().pow(&(a * b)));
        assert_eq!(pairing_product(&[(&p, &G2Prepared::new(q))]), lhs);
        // e(aP, Q) * e(aP, -Q) = 1
        let neg_q = G2Prepared::new((-G2::from(q)).to_affine());
        assert!(pairing_product(&[(&p, &G2Prepared::new(q)), (&p, &neg_q)]).is_one());
    }

    #[test]
    fn pairing_counter_tracks_miller_loops() {
        let before = pairings_on_this_thread();
        let g = G1Affine::generator();
        pairing_product(&[(&g, g2_prepared()), (&g, neg_g2_prepared())]);
        pairing(&g, &G2Affine::generator());
        assert_eq!(pairings_on_this_thread() - before, 3);
    }

    #[test]
    fn gt_pow_small_matches_scalar() {
        let g = Gt::generator();
        assert_eq!(g.pow_u128(1 << 90), g.pow(&Scalar::from_u128(1 << 90)));
        assert_eq!(g.pow_u128(0), Gt::one());
    }
}
