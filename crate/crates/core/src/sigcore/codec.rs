//! Key and signature records: sequences of TLV fields using the same
//! length framing as the packet codec.
//!
//! | field   | type | value                                   |
//! |---------|------|-----------------------------------------|
//! | Integer | 0x81 | big-endian, fixed width for the scheme  |
//! | Element | 0x82 | serialized group element                |
//! | Scheme  | 0x83 | one-byte scheme code                    |
//! | List    | 0x84 | nested record                           |
//! | Index   | 0x85 | 4-byte big-endian position (private keys only) |

use num_bigint::BigUint;

use super::bigint;
use super::SigError;
use crate::tlv::{self, Reader};

pub const INTEGER: u8 = 0x81;
pub const ELEMENT: u8 = 0x82;
pub const SCHEME: u8 = 0x83;
pub const LIST: u8 = 0x84;
pub const INDEX: u8 = 0x85;

#[derive(Debug, Default)]
pub struct RecordWriter {
    out: Vec<u8>,
}

impl RecordWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn field(mut self, t: u8, v: &[u8]) -> Self {
        tlv::write_tlv(&mut self.out, t, v).expect("record fields are small");
        self
    }

    pub fn scheme(self, code: u8) -> Self {
        self.field(SCHEME, &[code])
    }

    /// Integer left-padded to `width` bytes.
    pub fn int(self, n: &BigUint, width: usize) -> Self {
        let bytes = bigint::to_fixed_bytes(n, width);
        self.field(INTEGER, &bytes)
    }

    pub fn element(self, bytes: &[u8]) -> Self {
        self.field(ELEMENT, bytes)
    }

    pub fn list(self, inner: RecordWriter) -> Self {
        let bytes = inner.finish();
        self.field(LIST, &bytes)
    }

    pub fn index(self, i: u32) -> Self {
        self.field(INDEX, &i.to_be_bytes())
    }

    pub fn finish(self) -> Vec<u8> {
        self.out
    }
}

pub struct RecordReader<'a> {
    inner: Reader<'a>,
}

impl<'a> RecordReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self {
            inner: Reader::new(bytes),
        }
    }

    fn expect(&mut self, t: u8) -> Result<&'a [u8], SigError> {
        let e = self
            .inner
            .next_element()
            .map_err(|e| SigError::Malformed(e.to_string()))?
            .ok_or_else(|| SigError::Malformed(format!("missing field 0x{t:02X}")))?;
        if e.tlv_type != t {
            return Err(SigError::Malformed(format!(
                "expected field 0x{t:02X}, found 0x{:02X}",
                e.tlv_type
            )));
        }
        Ok(e.value)
    }

    pub fn scheme(&mut self) -> Result<u8, SigError> {
        match self.expect(SCHEME)? {
            [b] => Ok(*b),
            _ => Err(SigError::Malformed("scheme field must be one byte".into())),
        }
    }

    pub fn int(&mut self) -> Result<BigUint, SigError> {
        Ok(BigUint::from_bytes_be(self.expect(INTEGER)?))
    }

    /// Integer that must be exactly `width` bytes on the wire.
    pub fn int_exact(&mut self, width: usize) -> Result<BigUint, SigError> {
        let v = self.expect(INTEGER)?;
        if v.len() != width {
            return Err(SigError::Malformed(format!("integer of {} bytes, expected {width}", v.len())));
        }
        Ok(BigUint::from_bytes_be(v))
    }

    pub fn element(&mut self) -> Result<&'a [u8], SigError> {
        self.expect(ELEMENT)
    }

    pub fn list(&mut self) -> Result<RecordReader<'a>, SigError> {
        Ok(RecordReader::new(self.expect(LIST)?))
    }

    pub fn index(&mut self) -> Result<u32, SigError> {
        let v = self.expect(INDEX)?;
        let b: [u8; 4] = v
            .try_into()
            .map_err(|_| SigError::Malformed("index field must be 4 bytes".into()))?;
        Ok(u32::from_be_bytes(b))
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn finish(self) -> Result<(), SigError> {
        if self.inner.is_empty() {
            Ok(())
        } else {
            Err(SigError::Malformed(format!("{} trailing bytes in record", self.inner.remaining())))
        }
    }
}

/// Every top-level field of a record as `(type, value)`.
pub fn fields(bytes: &[u8]) -> Result<Vec<(u8, Vec<u8>)>, SigError> {
    let mut r = Reader::new(bytes);
    let mut out = Vec::new();
    while let Some(e) = r.next_element().map_err(|e| SigError::Malformed(e.to_string()))? {
        out.push((e.tlv_type, e.value.to_vec()));
    }
    Ok(out)
}
