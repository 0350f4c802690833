//! Server-aided BLS verification. The verifier blinds its inputs, asks an
//! untrusted pairing server for two pairings and checks the answers with
//! one short exponentiation in `GT`:
//!
//! ```text
//! Z1 = e(d*sigma + r*g1, g2)    Z2 = e(d*H(m), pk)
//! accept iff Z1 == Z2 * e(g1, g2)^r
//! ```
//!
//! `d` is a uniform scalar and `r` is a nonzero `l`-bit value, so a server
//! that does not return the true pairings is caught except with
//! probability about `2^-l`.

use std::sync::mpsc;
use std::thread;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{check_security_bits, small_exponent, AccelError, DEFAULT_SECURITY_BITS};
use crate::sigcore::bls::{self, BlsPublicKey};
use crate::sigcore::pairing::{pairing, G1Affine, G2Affine, Gt, Scalar, G1};

pub trait PairingOracle {
    fn pair(&self, p: &G1Affine, q: &G2Affine) -> Result<Gt, AccelError>;
}

/// Computes pairings in the caller's thread.
#[derive(Debug, Default, Clone, Copy)]
pub struct HonestServer;

impl PairingOracle for HonestServer {
    fn pair(&self, p: &G1Affine, q: &G2Affine) -> Result<Gt, AccelError> {
        Ok(pairing(p, q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServerBehavior {
    Honest,
    /// Answers with uniformly random `GT` elements.
    Random { seed: u64 },
    /// Always answers `1`.
    ConstantOne,
}

type Request = (G1Affine, G2Affine, mpsc::Sender<Gt>);

/// A pairing server on its own worker thread.
#[derive(Debug)]
pub struct ThreadServer {
    tx: Option<mpsc::Sender<Request>>,
    worker: Option<thread::JoinHandle<()>>,
}

impl ThreadServer {
    pub fn spawn(behavior: ServerBehavior) -> Self {
        let (tx, rx) = mpsc::channel::<Request>();
        let worker = thread::spawn(move || {
            let mut rng = match behavior {
                ServerBehavior::Random { seed } => ChaCha20Rng::seed_from_u64(seed),
                _ => ChaCha20Rng::seed_from_u64(0),
            };
            for (p, q, reply) in rx {
                let z = match behavior {
                    ServerBehavior::Honest => pairing(&p, &q),
                    ServerBehavior::Random { .. } => Gt::random(&mut rng),
                    ServerBehavior::ConstantOne => Gt::one(),
                };
                let _ = reply.send(z);
            }
        });
        Self {
            tx: Some(tx),
            worker: Some(worker),
        }
    }

    pub fn honest() -> Self {
        Self::spawn(ServerBehavior::Honest)
    }
}

impl PairingOracle for ThreadServer {
    fn pair(&self, p: &G1Affine, q: &G2Affine) -> Result<Gt, AccelError> {
        let (reply, answer) = mpsc::channel();
        self.tx
            .as_ref()
            .ok_or(AccelError::ServerUnavailable)?
            .send((*p, *q, reply))
            .map_err(|_| AccelError::ServerUnavailable)?;
        answer.recv().map_err(|_| AccelError::ServerUnavailable)
    }
}

impl Drop for ThreadServer {
    fn drop(&mut self) {
        self.tx.take();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}

pub fn server_aided_verify<O, R>(
    oracle: &O,
    pk: &BlsPublicKey,
    msg: &[u8],
    sig: &G1Affine,
    rng: &mut R,
) -> Result<bool, AccelError>
where
    O: PairingOracle + ?Sized,
    R: RngCore + ?Sized,
{
    server_aided_verify_with(oracle, pk, msg, sig, DEFAULT_SECURITY_BITS, rng)
}

pub fn server_aided_verify_with<O, R>(
    oracle: &O,
    pk: &BlsPublicKey,
    msg: &[u8],
    sig: &G1Affine,
    bits: u32,
    rng: &mut R,
) -> Result<bool, AccelError>
where
    O: PairingOracle + ?Sized,
    R: RngCore + ?Sized,
{
    check_security_bits(bits)?;
    let d = loop {
        let d = Scalar::random(rng);
        if !d.is_zero() {
            break d;
        }
    };
    let r = small_exponent(rng, bits);
    let blinded_sig = (G1::from(*sig) * d + G1::generator().mul_u128(r)).to_affine();
    let blinded_msg = (bls::hash_message(msg) * d).to_affine();
    let z1 = oracle.pair(&blinded_sig, &G2Affine::generator())?;
    let z2 = oracle.pair(&blinded_msg, pk.point())?;
    Ok(z1 == z2 * Gt::generator().pow_u128(r))
}
