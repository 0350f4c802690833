//! Bit-exact TLV encoding of Interest and Data packets.
//!
//! | field          | type | value                                  |
//! |----------------|------|----------------------------------------|
//! | Interest       | 0x05 | Name, Nonce, Lifetime                  |
//! | Data           | 0x06 | Name, Content, KeyLocator, SchemeId, Signature |
//! | Name           | 0x07 | NameComponent*                         |
//! | NameComponent  | 0x08 | component bytes                        |
//! | Nonce          | 0x0A | 4 bytes, big-endian                    |
//! | Lifetime       | 0x0C | 4 bytes, big-endian milliseconds       |
//! | Content        | 0x15 | content bytes (may be empty)           |
//! | KeyLocator     | 0x1C | Name                                   |
//! | SchemeId       | 0x1D | 1 byte                                 |
//! | Signature      | 0x17 | signature bytes                        |
//!
//! Fields appear in exactly the listed order. The Interest for `/a` with
//! nonce `0x01020304` and lifetime 4000 ms encodes as
//! `05 11 07 03 08 01 61 0A 04 01 02 03 04 0C 04 00 00 0F A0`.

use thiserror::Error;

use crate::naming::{Component, Name};
use crate::tlv::{self, Reader, TlvError};

pub mod types {
    pub const INTEREST: u8 = 0x05;
    pub const DATA: u8 = 0x06;
    pub const NAME: u8 = 0x07;
    pub const NAME_COMPONENT: u8 = 0x08;
    pub const NONCE: u8 = 0x0A;
    pub const LIFETIME: u8 = 0x0C;
    pub const CONTENT: u8 = 0x15;
    pub const SIGNATURE: u8 = 0x17;
    pub const KEY_LOCATOR: u8 = 0x1C;
    pub const SCHEME_ID: u8 = 0x1D;
}

pub const DEFAULT_LIFETIME_MS: u32 = 4000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("truncated packet")]
    TruncatedPacket,
    #[error("unknown TLV type 0x{0:02X}")]
    UnknownTlvType(u8),
    #[error("duplicate field 0x{0:02X}")]
    DuplicateField(u8),
    #[error("field 0x{0:02X} out of canonical order")]
    FieldOrder(u8),
    #[error("missing field 0x{0:02X}")]
    MissingField(u8),
    #[error("invalid value for field 0x{0:02X}")]
    InvalidField(u8),
    #[error("{0} trailing bytes after packet")]
    TrailingBytes(usize),
    #[error("non-minimal TLV length")]
    NonCanonicalLength,
    #[error("field of {0} bytes exceeds the length range")]
    OversizeField(usize),
}

impl From<TlvError> for WireError {
    fn from(e: TlvError) -> Self {
        match e {
            TlvError::Truncated { .. } | TlvError::ReservedLength => WireError::TruncatedPacket,
            TlvError::NonMinimalLength => WireError::NonCanonicalLength,
            TlvError::Oversize(n) => WireError::OversizeField(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interest {
    pub name: Name,
    pub nonce: u32,
    pub lifetime_ms: u32,
}

impl Interest {
    pub fn new(name: Name, nonce: u32) -> Self {
        Self {
            name,
            nonce,
            lifetime_ms: DEFAULT_LIFETIME_MS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Data {
    pub name: Name,
    pub content: Vec<u8>,
    pub key_locator: Name,
    pub scheme_id: u8,
    pub signature: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Packet {
    Interest(Interest),
    Data(Data),
}

impl Packet {
    pub fn name(&self) -> &Name {
        match self {
            Packet::Interest(i) => &i.name,
            Packet::Data(d) => &d.name,
        }
    }
}

impl From<Interest> for Packet {
    fn from(i: Interest) -> Self {
        Packet::Interest(i)
    }
}

impl From<Data> for Packet {
    fn from(d: Data) -> Self {
        Packet::Data(d)
    }
}

fn encode_name(out: &mut Vec<u8>, tlv_type: u8, name: &Name) -> Result<(), WireError> {
    let mut inner = Vec::new();
    for c in name.components() {
        tlv::write_tlv(&mut inner, types::NAME_COMPONENT, c.as_bytes())?;
    }
    if tlv_type == types::NAME {
        tlv::write_tlv(out, types::NAME, &inner)?;
    } else {
        let wrapped = tlv::tlv(types::NAME, &inner)?;
        tlv::write_tlv(out, tlv_type, &wrapped)?;
    }
    Ok(())
}

fn check_packet_name(name: &Name) -> Result<(), WireError> {
    if name.is_empty() {
        return Err(WireError::InvalidField(types::NAME));
    }
    Ok(())
}

/// Concatenated Name, Content, KeyLocator and SchemeId TLVs: everything a
/// Data signature covers.
pub fn signed_portion(d: &Data) -> Vec<u8> {
    try_signed_portion(d).expect("Data fields fit the length range")
}

fn try_signed_portion(d: &Data) -> Result<Vec<u8>, WireError> {
    let mut out = Vec::with_capacity(d.content.len() + 64);
    encode_name(&mut out, types::NAME, &d.name)?;
    tlv::write_tlv(&mut out, types::CONTENT, &d.content)?;
    encode_name(&mut out, types::KEY_LOCATOR, &d.key_locator)?;
    tlv::write_tlv(&mut out, types::SCHEME_ID, &[d.scheme_id])?;
    Ok(out)
}

pub fn encode_packet(p: &Packet) -> Result<Vec<u8>, WireError> {
    let (outer, inner) = match p {
        Packet::Interest(i) => {
            check_packet_name(&i.name)?;
            if i.lifetime_ms == 0 {
                return Err(WireError::InvalidField(types::LIFETIME));
            }
            let mut inner = Vec::new();
            encode_name(&mut inner, types::NAME, &i.name)?;
            tlv::write_tlv(&mut inner, types::NONCE, &i.nonce.to_be_bytes())?;
            tlv::write_tlv(&mut inner, types::LIFETIME, &i.lifetime_ms.to_be_bytes())?;
            (types::INTEREST, inner)
        }
        Packet::Data(d) => {
            check_packet_name(&d.name)?;
            let mut inner = try_signed_portion(d)?;
            tlv::write_tlv(&mut inner, types::SIGNATURE, &d.signature)?;
            (types::DATA, inner)
        }
    };
    Ok(tlv::tlv(outer, &inner)?)
}

fn decode_name(value: &[u8]) -> Result<Name, WireError> {
    let mut r = Reader::new(value);
    let mut components = Vec::new();
    while let Some(e) = r.next_element()? {
        if e.tlv_type != types::NAME_COMPONENT {
            return Err(WireError::UnknownTlvType(e.tlv_type));
        }
        components.push(Component::new(e.value).map_err(|_| WireError::InvalidField(types::NAME_COMPONENT))?);
    }
    Ok(Name::from_components(components))
}

fn decode_u32(tlv_type: u8, value: &[u8]) -> Result<u32, WireError> {
    let bytes: [u8; 4] = value.try_into().map_err(|_| WireError::InvalidField(tlv_type))?;
    Ok(u32::from_be_bytes(bytes))
}

/// Splits a packet body into its fields, enforcing the canonical order.
/// Returns one slot per entry of `order`.
fn collect_fields<'a>(body: &'a [u8], order: &[u8]) -> Result<Vec<Option<&'a [u8]>>, WireError> {
    let mut slots = vec![None; order.len()];
    let mut last: Option<usize> = None;
    let mut r = Reader::new(body);
    while let Some(e) = r.next_element()? {
        let idx = order
            .iter()
            .position(|&t| t == e.tlv_type)
            .ok_or(WireError::UnknownTlvType(e.tlv_type))?;
        if slots[idx].is_some() {
            return Err(WireError::DuplicateField(e.tlv_type));
        }
        if last.is_some_and(|l| idx < l) {
            return Err(WireError::FieldOrder(e.tlv_type));
        }
        slots[idx] = Some(e.value);
        last = Some(idx);
    }
    for (slot, &t) in slots.iter().zip(order) {
        if slot.is_none() {
            return Err(WireError::MissingField(t));
        }
    }
    Ok(slots)
}

pub fn decode_packet(bytes: &[u8]) -> Result<Packet, WireError> {
    let mut r = Reader::new(bytes);
    let outer = r.next_element()?.ok_or(WireError::TruncatedPacket)?;
    if !r.is_empty() {
        return Err(WireError::TrailingBytes(r.remaining()));
    }
    match outer.tlv_type {
        types::INTEREST => {
            let f = collect_fields(outer.value, &[types::NAME, types::NONCE, types::LIFETIME])?;
            let name = decode_name(f[0].unwrap())?;
            check_packet_name(&name)?;
            let nonce = decode_u32(types::NONCE, f[1].unwrap())?;
            let lifetime_ms = decode_u32(types::LIFETIME, f[2].unwrap())?;
            if lifetime_ms == 0 {
                return Err(WireError::InvalidField(types::LIFETIME));
            }
            Ok(Packet::Interest(Interest {
                name,
                nonce,
                lifetime_ms,
            }))
        }
        types::DATA => {
            let f = collect_fields(
                outer.value,
                &[
                    types::NAME,
                    types::CONTENT,
                    types::KEY_LOCATOR,
                    types::SCHEME_ID,
                    types::SIGNATURE,
                ],
            )?;
            let name = decode_name(f[0].unwrap())?;
            check_packet_name(&name)?;
            let key_locator = {
                let mut kr = Reader::new(f[2].unwrap());
                let inner = kr.next_element()?.ok_or(WireError::MissingField(types::NAME))?;
                if inner.tlv_type != types::NAME {
                    return Err(WireError::UnknownTlvType(inner.tlv_type));
                }
                if !kr.is_empty() {
                    return Err(WireError::InvalidField(types::KEY_LOCATOR));
                }
                decode_name(inner.value)?
            };
            let scheme = f[3].unwrap();
            if scheme.len() != 1 {
                return Err(WireError::InvalidField(types::SCHEME_ID));
            }
            Ok(Packet::Data(Data {
                name,
                content: f[1].unwrap().to_vec(),
                key_locator,
                scheme_id: scheme[0],
                signature: f[4].unwrap().to_vec(),
            }))
        }
        other => Err(WireError::UnknownTlvType(other)),
    }
}
