//! Mapping raw file bytes to field symbols and back.
//!
//! * GF(2): bits, most significant bit of each byte first; the file holds
//!   ceil(B/8) bytes and unused trailing bits must be zero.
//! * GF(q), 2 < q <= 256: one byte per symbol; bytes >= q are rejected.
//! * GF(q), q > 256: two bytes per symbol, big-endian; values >= q are rejected.

use plucker_dss::{Field, FieldElement, FieldSpec};

use crate::error::{CliError, CliResult};

/// Bytes needed to hold `len` symbols.
pub fn encoded_len(f: &FieldSpec, len: usize) -> usize {
    match f.order() {
        2 => len.div_ceil(8),
        q if q <= 256 => len,
        _ => 2 * len,
    }
}

pub fn bytes_to_symbols(f: &FieldSpec, bytes: &[u8], len: usize) -> CliResult<Vec<FieldElement>> {
    let expected = encoded_len(f, len);
    if bytes.len() != expected {
        return Err(CliError::Symbols(format!(
            "file has {} bytes; {} needs {expected} bytes to hold B = {len} symbols",
            bytes.len(),
            f.name()
        )));
    }
    let q = f.order();
    let element = |v: u64, at: usize| {
        f.element(v)
            .map_err(|_| CliError::Symbols(format!("byte offset {at}: value {v} is not below q = {q}")))
    };
    match q {
        2 => {
            let mut out = Vec::with_capacity(len);
            for i in 0..len {
                let bit = (bytes[i / 8] >> (7 - i % 8)) & 1;
                out.push(element(bit as u64, i / 8)?);
            }
            for i in len..8 * expected {
                if (bytes[i / 8] >> (7 - i % 8)) & 1 != 0 {
                    return Err(CliError::Symbols(format!("padding bit {i} is set")));
                }
            }
            Ok(out)
        }
        q if q <= 256 => bytes.iter().enumerate().map(|(i, &v)| element(v as u64, i)).collect(),
        _ => bytes
            .chunks(2)
            .enumerate()
            .map(|(i, c)| element(u16::from_be_bytes([c[0], c[1]]) as u64, 2 * i))
            .collect(),
    }
}

pub fn symbols_to_bytes(f: &FieldSpec, symbols: &[FieldElement]) -> Vec<u8> {
    match f.order() {
        2 => {
            let mut out = vec![0u8; symbols.len().div_ceil(8)];
            for (i, s) in symbols.iter().enumerate() {
                if s.value() != 0 {
                    out[i / 8] |= 1 << (7 - i % 8);
                }
            }
            out
        }
        q if q <= 256 => symbols.iter().map(|s| s.value() as u8).collect(),
        _ => symbols.iter().flat_map(|s| (s.value() as u16).to_be_bytes()).collect(),
    }
}
