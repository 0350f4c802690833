use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ndnsec::netcoding::{self, combine, decode, nc_verify, recombine, CodedPacket, Generation, NcKeyPair};
use ndnsec::sigcore::pairing::Scalar;

fn setup(seed: u64, n: usize, m: usize) -> (ChaCha20Rng, NcKeyPair, Generation) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let key = NcKeyPair::generate(&mut rng);
    let gen = Generation::new(seed.to_be_bytes().to_vec(), n, m).unwrap();
    (rng, key, gen)
}

fn content(rng: &mut ChaCha20Rng, gen: &Generation) -> Vec<u8> {
    let len = rng.gen_range(1..=gen.capacity_bytes());
    (0..len).map(|_| rng.gen()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn combinations_of_valid_packets_verify(seed in any::<u64>(), k in 1usize..5) {
        let (mut rng, key, gen) = setup(seed, 3, 4);
        let c = content(&mut rng, &gen);
        let packets = netcoding::encode_content(&key, &gen, &c).unwrap();
        let chosen: Vec<CodedPacket> = (0..k).map(|_| packets[rng.gen_range(0..4)].clone()).collect();
        let coeffs: Vec<Scalar> = (0..k).map(|_| Scalar::random(&mut rng)).collect();
        prop_assert!(nc_verify(&key.public, &combine(&chosen, &coeffs).unwrap()));
    }

    #[test]
    fn recombination_schedules_preserve_content(seed in any::<u64>(), depth in 1usize..=4) {
        let (mut rng, key, gen) = setup(seed, 4, 3);
        let c = content(&mut rng, &gen);
        let mut layer = netcoding::encode_content(&key, &gen, &c).unwrap();
        for _ in 0..depth {
            layer = (0..gen.m()).map(|_| recombine(&layer, &mut rng).unwrap()).collect();
        }
        // random layers are full rank except with probability about m/r
        prop_assert_eq!(decode(&layer).unwrap(), c);
    }

    #[test]
    fn combine_is_linear(seed in any::<u64>()) {
        let (mut rng, key, gen) = setup(seed, 2, 3);
        let c = content(&mut rng, &gen);
        let packets = netcoding::encode_content(&key, &gen, &c).unwrap();
        let cs: Vec<Scalar> = (0..3).map(|_| Scalar::random(&mut rng)).collect();
        let d = Scalar::random(&mut rng);
        let lhs = combine(&[combine(&packets, &cs).unwrap()], &[d]).unwrap();
        let dc: Vec<Scalar> = cs.iter().map(|x| d * *x).collect();
        let rhs = combine(&packets, &dc).unwrap();
        prop_assert_eq!(lhs.vector, rhs.vector);
        prop_assert_eq!(lhs.signature, rhs.signature);
    }

    #[test]
    fn single_coordinate_mutation_rejects(seed in any::<u64>(), coord in 0usize..7) {
        let (mut rng, key, gen) = setup(seed, 4, 3);
        let c = content(&mut rng, &gen);
        let packets = netcoding::encode_content(&key, &gen, &c).unwrap();
        let mut p = recombine(&packets, &mut rng).unwrap();
        let delta = loop {
            let s = Scalar::random(&mut rng);
            if !s.is_zero() {
                break s;
            }
        };
        p.vector[coord] += delta;
        prop_assert!(!nc_verify(&key.public, &p));
    }
}
