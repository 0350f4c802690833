//! Type-length-value framing shared by the packet codec and the key and
//! signature records.
//!
//! A TLV is a one-byte type, a variable-length length, and the value bytes.
//! Lengths below 253 take one byte; `0xFD` prefixes a two-byte big-endian
//! length and `0xFE` a four-byte one. Encoders always pick the shortest form
//! and decoders reject anything else, so every record has exactly one
//! encoding.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TlvError {
    #[error("truncated TLV: needed {needed} more bytes")]
    Truncated { needed: usize },
    #[error("non-minimal length encoding")]
    NonMinimalLength,
    #[error("length {0} exceeds the 32-bit length range")]
    Oversize(usize),
    #[error("reserved length prefix 0xFF")]
    ReservedLength,
}

/// Appends the varint encoding of `len` to `out`.
pub fn write_length(out: &mut Vec<u8>, len: usize) -> Result<(), TlvError> {
    if len < 253 {
        out.push(len as u8);
    } else if len <= 0xFFFF {
        out.push(0xFD);
        out.extend_from_slice(&(len as u16).to_be_bytes());
    } else if len <= u32::MAX as usize {
        out.push(0xFE);
        out.extend_from_slice(&(len as u32).to_be_bytes());
    } else {
        return Err(TlvError::Oversize(len));
    }
    Ok(())
}

/// Appends a complete TLV element.
pub fn write_tlv(out: &mut Vec<u8>, tlv_type: u8, value: &[u8]) -> Result<(), TlvError> {
    out.push(tlv_type);
    write_length(out, value.len())?;
    out.extend_from_slice(value);
    Ok(())
}

/// Encodes a single TLV element into a fresh buffer.
pub fn tlv(tlv_type: u8, value: &[u8]) -> Result<Vec<u8>, TlvError> {
    let mut out = Vec::with_capacity(value.len() + 6);
    write_tlv(&mut out, tlv_type, value)?;
    Ok(out)
}

/// One decoded element borrowed from the input buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Element<'a> {
    pub tlv_type: u8,
    pub value: &'a [u8],
}

/// Sequential reader over concatenated TLV elements.
#[derive(Debug, Clone)]
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.pos >= self.buf.len()
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], TlvError> {
        let avail = self.remaining();
        if n > avail {
            return Err(TlvError::Truncated { needed: n - avail });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn read_length(&mut self) -> Result<usize, TlvError> {
        let first = self.take(1)?[0];
        match first {
            0..=252 => Ok(first as usize),
            0xFD => {
                let b = self.take(2)?;
                let len = u16::from_be_bytes([b[0], b[1]]) as usize;
                if len < 253 {
                    return Err(TlvError::NonMinimalLength);
                }
                Ok(len)
            }
            0xFE => {
                let b = self.take(4)?;
                let len = u32::from_be_bytes([b[0], b[1], b[2], b[3]]) as usize;
                if len <= 0xFFFF {
                    return Err(TlvError::NonMinimalLength);
                }
                Ok(len)
            }
            0xFF => Err(TlvError::ReservedLength),
        }
    }

    /// Reads the next element, or `None` at end of input.
    pub fn next_element(&mut self) -> Result<Option<Element<'a>>, TlvError> {
        if self.is_empty() {
            return Ok(None);
        }
        let tlv_type = self.take(1)?[0];
        let len = self.read_length()?;
        let value = self.take(len)?;
        Ok(Some(Element { tlv_type, value }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_boundaries() {
        let cases: [(usize, &[u8]); 5] = [
            (0, &[0x00]),
            (252, &[0xFC]),
            (253, &[0xFD, 0x00, 0xFD]),
            (65535, &[0xFD, 0xFF, 0xFF]),
            (65536, &[0xFE, 0x00, 0x01, 0x00, 0x00]),
        ];
        for (len, expect) in cases {
            let mut out = Vec::new();
            write_length(&mut out, len).unwrap();
            assert_eq!(out, expect, "len {len}");
        }
    }

    #[test]
    fn rejects_non_minimal_lengths() {
        let mut r = Reader::new(&[0x08, 0xFD, 0x00, 0x01, 0xAA]);
        assert_eq!(r.next_element(), Err(TlvError::NonMinimalLength));
        let mut r = Reader::new(&[0x08, 0xFE, 0x00, 0x00, 0x00, 0x01, 0xAA]);
        assert_eq!(r.next_element(), Err(TlvError::NonMinimalLength));
    }

    #[test]
    fn truncation_reports_shortfall() {
        let mut r = Reader::new(&[0x15, 0x04, 0x01, 0x02]);
        assert_eq!(r.next_element(), Err(TlvError::Truncated { needed: 2 }));
    }

    #[test]
    fn long_value_round_trips() {
        let value = vec![0x5Au8; 70_000];
        let bytes = tlv(0x15, &value).unwrap();
        assert_eq!(&bytes[..6], &[0x15, 0xFE, 0x00, 0x01, 0x11, 0x70]);
        let mut r = Reader::new(&bytes);
        let e = r.next_element().unwrap().unwrap();
        assert_eq!(e.tlv_type, 0x15);
        assert_eq!(e.value.len(), 70_000);
        assert!(r.next_element().unwrap().is_none());
    }
}
