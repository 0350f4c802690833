use proptest::prelude::*;

use ndnsec::naming::Name;
use ndnsec::wire::{decode_packet, encode_packet, Data, Interest, Packet};

fn name() -> impl Strategy<Value = Name> {
    prop::collection::vec(prop::collection::vec(any::<u8>(), 1..12), 1..6)
        .prop_map(|parts| Name::from_bytes(parts).unwrap())
}

fn packet() -> impl Strategy<Value = Packet> {
    let interest = (name(), any::<u32>(), any::<u32>()).prop_map(|(name, nonce, lifetime_ms)| {
        Packet::Interest(Interest {
            name,
            nonce,
            lifetime_ms,
        })
    });
    let data = (
        name(),
        prop::collection::vec(any::<u8>(), 0..600),
        name(),
        any::<u8>(),
        prop::collection::vec(any::<u8>(), 0..300),
    )
        .prop_map(|(name, content, key_locator, scheme_id, signature)| {
            Packet::Data(Data {
                name,
                content,
                key_locator,
                scheme_id,
                signature,
            })
        });
    prop_oneof![interest, data]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn name_text_round_trip(n in name()) {
        let text = n.to_string();
        prop_assert_eq!(text.parse::<Name>().unwrap(), n);
    }

    #[test]
    fn packet_round_trip(p in packet()) {
        let bytes = encode_packet(&p).unwrap();
        prop_assert_eq!(decode_packet(&bytes).unwrap(), p.clone());
        // one encoding per packet
        prop_assert_eq!(encode_packet(&decode_packet(&bytes).unwrap()).unwrap(), bytes);
    }

    #[test]
    fn truncation_never_decodes(p in packet(), cut in 1usize..64) {
        let bytes = encode_packet(&p).unwrap();
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(decode_packet(&bytes[..keep]).is_err());
    }

    #[test]
    fn arbitrary_bytes_do_not_panic(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = decode_packet(&bytes);
    }
}
