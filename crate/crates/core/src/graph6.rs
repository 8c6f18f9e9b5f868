//! graph6 encoding and decoding.
//!
//! The order is written as one byte `n + 63` for `n <= 62`, or as `~`
//! followed by three 6-bit groups for larger `n`. The upper triangle of the
//! adjacency matrix follows column by column (`x(0,1), x(0,2), x(1,2),
//! x(0,3), ...`), packed six bits per byte, most significant first, each
//! byte offset by 63 and the last group zero padded.

use thiserror::Error;

use crate::graph::{bit, Graph, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("malformed graph6 order header")]
    BadHeader,
    #[error("graph order {0} is out of range (at most {MAX_VERTICES})")]
    OrderOutOfRange(usize),
    #[error("adjacency data truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{0} trailing bytes after the adjacency data")]
    TrailingData(usize),
    #[error("nonzero padding bits in the final adjacency byte")]
    NonzeroPadding,
}

fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

fn sextet(offset: usize, byte: u8) -> Result<u8, Graph6Error> {
    if (63..=126).contains(&byte) {
        Ok(byte - 63)
    } else {
        Err(Graph6Error::InvalidByte { offset, byte })
    }
}

/// Decodes a graph6 string. A `>>graph6<<` header and one trailing newline
/// are tolerated.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let text = text
        .strip_suffix('\n')
        .map(|t| t.strip_suffix('\r').unwrap_or(t))
        .unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }

    let (n, header_len) = if bytes[0] == b'~' {
        if bytes.len() > 1 && bytes[1] == b'~' {
            // 8-byte form, only valid for n >= 258048.
            if bytes.len() < 8 {
                return Err(Graph6Error::BadHeader);
            }
            let mut n = 0usize;
            for (i, &b) in bytes[2..8].iter().enumerate() {
                n = (n << 6) | sextet(i + 2, b)? as usize;
            }
            if n < 258_048 {
                return Err(Graph6Error::BadHeader);
            }
            return Err(Graph6Error::OrderOutOfRange(n));
        }
        if bytes.len() < 4 {
            return Err(Graph6Error::BadHeader);
        }
        let mut n = 0usize;
        for (i, &b) in bytes[1..4].iter().enumerate() {
            n = (n << 6) | sextet(i + 1, b)? as usize;
        }
        if n < 63 {
            return Err(Graph6Error::BadHeader);
        }
        (n, 4)
    } else {
        (sextet(0, bytes[0])? as usize, 1)
    };
    if n > MAX_VERTICES {
        return Err(Graph6Error::OrderOutOfRange(n));
    }

    let body = &bytes[header_len..];
    let need = data_len(n);
    if body.len() < need {
        return Err(Graph6Error::Truncated {
            expected: need,
            found: body.len(),
        });
    }
    if body.len() > need {
        return Err(Graph6Error::TrailingData(body.len() - need));
    }

    let mut rows = vec![0u64; n];
    let total_bits = n * n.saturating_sub(1) / 2;
    let mut k = 0usize;
    let mut values = Vec::with_capacity(need);
    for (i, &b) in body.iter().enumerate() {
        values.push(sextet(header_len + i, b)?);
    }
    for j in 1..n {
        for i in 0..j {
            let byte = values[k / 6];
            if byte >> (5 - k % 6) & 1 == 1 {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
            k += 1;
        }
    }
    if total_bits % 6 != 0 {
        let pad = 6 - total_bits % 6;
        if values[need - 1] & ((1u8 << pad) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    Ok(Graph::from_rows(rows))
}

/// Encodes a graph as graph6, without header or newline.
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + data_len(n));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push(acc + 63);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push((acc << (6 - used)) + 63);
    }
    // every byte is in 63..=126
    String::from_utf8(out).expect("graph6 output is ASCII")
}
