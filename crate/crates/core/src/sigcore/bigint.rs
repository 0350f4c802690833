//! Big-integer helpers: primality testing, sampling and fixed-width
//! serialization.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

const SMALL_PRIMES: [u32; 53] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239,
    241, 251,
];

/// Miller–Rabin with `rounds` random bases, preceded by trial division.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    if n.is_even() {
        return *n == two;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random prime of exactly `bits` bits with the two top bits set, so the
/// product of two such primes has exactly `2 * bits` bits.
pub fn random_prime<R: RngCore + CryptoRng + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    assert!(bits >= 4, "prime size too small");
    loop {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(bits - 2, true);
        candidate.set_bit(0, true);
        if is_probable_prime(&candidate, 24, rng) {
            return candidate;
        }
    }
}

/// Uniform integer in `[1, bound)`.
pub fn random_nonzero_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    rng.gen_biguint_range(&BigUint::one(), bound)
}

/// Big-endian bytes left-padded to `width`. Panics if the value does not fit.
pub fn to_fixed_bytes(n: &BigUint, width: usize) -> Vec<u8> {
    let raw = n.to_bytes_be();
    let raw: &[u8] = if raw == [0] { &[] } else { &raw };
    assert!(raw.len() <= width, "integer of {} bytes does not fit in {width}", raw.len());
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(raw);
    out
}

/// Byte width of values modulo `m`.
pub fn byte_width(m: &BigUint) -> usize {
    m.bits().div_ceil(8) as usize
}

pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    a.modinv(m)
}

/// SHA-256 of the concatenated parts, reduced modulo `q`.
pub fn hash_to_scalar(q: &BigUint, parts: &[&[u8]]) -> BigUint {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_be_bytes());
        h.update(p);
    }
    BigUint::from_bytes_be(&h.finalize()) % q
}

/// The leftmost `bits` bits of SHA-256(msg), as used by DSA and ECDSA when
/// the group order is shorter than the digest.
pub fn truncated_digest(msg: &[u8], bits: u64) -> BigUint {
    let d = BigUint::from_bytes_be(&Sha256::digest(msg));
    if bits >= 256 {
        d
    } else {
        d >> (256 - bits)
    }
}

/// Fixed-base exponentiation table with 4-bit windows:
/// `rows[i][j] = base^(j * 16^i) mod modulus`.
#[derive(Debug, Clone)]
pub struct FixedBaseTable {
    modulus: BigUint,
    rows: Vec<[BigUint; 16]>,
}

impl FixedBaseTable {
    pub fn new(base: &BigUint, modulus: &BigUint, exponent_bits: u64) -> Self {
        let windows = exponent_bits.div_ceil(4) as usize;
        let mut rows = Vec::with_capacity(windows);
        let mut step = base % modulus;
        for _ in 0..windows {
            let mut row: [BigUint; 16] = std::array::from_fn(|_| BigUint::one());
            for j in 1..16 {
                row[j] = &row[j - 1] * &step % modulus;
            }
            step = &row[15] * &step % modulus;
            rows.push(row);
        }
        Self {
            modulus: modulus.clone(),
            rows,
        }
    }

    /// `base^exp mod modulus`. Falls back to plain exponentiation when the
    /// exponent is wider than the table.
    pub fn pow(&self, exp: &BigUint) -> BigUint {
        let digits = exp.to_radix_le(16);
        if digits.len() > self.rows.len() {
            let base = &self.rows[0][1];
            return base.modpow(exp, &self.modulus);
        }
        let mut acc = BigUint::one();
        for (row, &d) in self.rows.iter().zip(&digits) {
            if d != 0 {
                acc = acc * &row[d as usize] % &self.modulus;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn primality_of_small_numbers() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let sieve: Vec<u32> = (0..2000u32)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        for n in 0..2000u32 {
            assert_eq!(
                is_probable_prime(&BigUint::from(n), 8, &mut rng),
                sieve.contains(&n),
                "n = {n}"
            );
        }
        // Carmichael numbers
        for c in [561u32, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_probable_prime(&BigUint::from(c), 8, &mut rng));
        }
    }

    #[test]
    fn random_prime_has_requested_size() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let p = random_prime(128, &mut rng);
        assert_eq!(p.bits(), 128);
        assert!(p.bit(126));
    }

    #[test]
    fn fixed_base_matches_modpow() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let m = random_prime(256, &mut rng);
        let g = BigUint::from(7u32);
        let table = FixedBaseTable::new(&g, &m, 160);
        for _ in 0..50 {
            let e = rng.gen_biguint(160);
            assert_eq!(table.pow(&e), g.modpow(&e, &m));
        }
        assert!(table.pow(&BigUint::zero()).is_one());
        let wide = rng.gen_biguint(200);
        assert_eq!(table.pow(&wide), g.modpow(&wide, &m));
    }

    #[test]
    fn fixed_width_bytes() {
        assert_eq!(to_fixed_bytes(&BigUint::zero(), 3), vec![0, 0, 0]);
        assert_eq!(to_fixed_bytes(&BigUint::from(0x0102u32), 4), vec![0, 0, 1, 2]);
    }
}
