//! graph6 / sparse6 codecs.
//!
//! Both formats pack bits six to a byte, offset by 63. graph6 stores the
//! upper triangle column by column: `(0,1), (0,2), (1,2), (0,3), ...`.

use crate::error::{Error, Result};
use crate::graph::Graph;

const BIAS: u8 = 63;
const LONG_MARK: u8 = 126;

/// Largest order whose graph6 header fits in one byte.
pub const SHORT_ORDER_MAX: usize = 62;

/// Decodes a line in either format; a leading `:` selects sparse6.
pub fn parse_line(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let body = line.strip_prefix(">>graph6<<").unwrap_or(line);
    if body.starts_with(':') || body.starts_with(">>sparse6<<") {
        parse_sparse6(body)
    } else {
        parse_graph6(body)
    }
}

pub fn parse_graph6(line: &str) -> Result<Graph> {
    let bytes = line.trim_end_matches(['\n', '\r']).as_bytes();
    check_printable(bytes, 0)?;
    let (n, header_len) = decode_order(bytes, 0)?;
    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    let body = &bytes[header_len..];
    if body.len() < needed {
        return Err(Error::format(
            bytes.len(),
            format!("truncated bit-stream: order {n} needs {needed} data bytes, found {}", body.len()),
        ));
    }
    if body.len() > needed {
        return Err(Error::format(header_len + needed, "trailing bytes after bit-stream"));
    }
    let mut bits = BitReader::new(body, header_len);
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if bits.next_bit().expect("length checked above") {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, edges).expect("graph6 cannot encode loops or multi-edges"))
}

pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = encode_order(n);
    let mut bits = BitWriter::default();
    for j in 1..n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    out.extend(bits.finish(false));
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Decodes sparse6. Loops and repeated edges are rejected since only simple
/// graphs are representable.
pub fn parse_sparse6(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(">>sparse6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.first() != Some(&b':') {
        return Err(Error::format(0, "sparse6 line must start with ':'"));
    }
    check_printable(&bytes[1..], 1)?;
    let (n, header_len) = decode_order(&bytes[1..], 1)?;
    let width = bits_for(n);
    let start = 1 + header_len;
    let mut reader = BitReader::new(&bytes[start..], start);
    let mut edges = Vec::new();
    let mut v = 0usize;
    while let Some(b) = reader.next_bit() {
        let Some(x) = reader.next_value(width) else { break };
        if b {
            v += 1;
        }
        if v >= n {
            break;
        }
        if x > v {
            v = x;
        } else {
            if x == v {
                return Err(Error::format(reader.offset(), format!("self-loop at vertex {x}")));
            }
            edges.push((x, v));
        }
    }
    Graph::from_edges(n, edges).map_err(|e| Error::format(reader.offset(), e.to_string()))
}

pub fn encode_sparse6(g: &Graph) -> String {
    let n = g.order();
    let width = bits_for(n);
    let mut out = vec![b':'];
    out.extend(encode_order(n));
    let mut bits = BitWriter::default();
    let mut v = 0usize;
    // Edges sorted by larger endpoint, then smaller.
    let mut edges: Vec<(usize, usize)> = g.edges().map(|(a, b)| (b, a)).collect();
    edges.sort_unstable();
    for (hi, lo) in edges {
        if hi == v + 1 {
            bits.push(true);
            bits.push_value(lo, width);
        } else if hi == v {
            bits.push(false);
            bits.push_value(lo, width);
        } else {
            bits.push(true);
            bits.push_value(hi, width);
            bits.push(false);
            bits.push_value(lo, width);
        }
        v = hi;
    }
    // Padding must not be readable as an extra edge: when the last edge
    // touches n-2 and a full k-bit group fits, start the pad with a 0 bit.
    let pad = (6 - bits.len() % 6) % 6;
    if width < 6 && v + 2 == n && n == (1 << width) && pad > width {
        bits.push(false);
    }
    out.extend(bits.finish(true));
    String::from_utf8(out).expect("sparse6 output is ASCII")
}

/// Number of bits needed to write `n - 1`.
fn bits_for(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

fn check_printable(bytes: &[u8], base: usize) -> Result<()> {
    match bytes.iter().position(|b| !(BIAS..=LONG_MARK).contains(b)) {
        Some(pos) => Err(Error::format(
            base + pos,
            format!("byte {:#04x} outside the printable range 63..=126", bytes[pos]),
        )),
        None => Ok(()),
    }
}

fn decode_order(bytes: &[u8], base: usize) -> Result<(usize, usize)> {
    let take = |from: usize, count: usize| -> Result<usize> {
        if bytes.len() < from + count {
            return Err(Error::format(base + bytes.len(), "truncated order header"));
        }
        Ok(bytes[from..from + count]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - BIAS)))
    };
    match bytes.first() {
        None => Err(Error::format(base, "empty input")),
        Some(&LONG_MARK) => {
            if bytes.get(1) == Some(&LONG_MARK) {
                Ok((take(2, 6)?, 8))
            } else {
                Ok((take(1, 3)?, 4))
            }
        }
        Some(&b) => Ok((usize::from(b - BIAS), 1)),
    }
}

fn encode_order(n: usize) -> Vec<u8> {
    let six = |value: usize, count: usize| -> Vec<u8> {
        (0..count)
            .rev()
            .map(|i| ((value >> (6 * i)) & 0x3f) as u8 + BIAS)
            .collect()
    };
    if n <= SHORT_ORDER_MAX {
        vec![n as u8 + BIAS]
    } else if n <= 258_047 {
        let mut v = vec![LONG_MARK];
        v.extend(six(n, 3));
        v
    } else {
        let mut v = vec![LONG_MARK, LONG_MARK];
        v.extend(six(n, 6));
        v
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    base: usize,
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8], base: usize) -> Self {
        BitReader { bytes, base, pos: 0 }
    }

    fn next_bit(&mut self) -> Option<bool> {
        let byte = *self.bytes.get(self.pos / 6)? - BIAS;
        let bit = (byte >> (5 - self.pos % 6)) & 1 == 1;
        self.pos += 1;
        Some(bit)
    }

    fn next_value(&mut self, width: usize) -> Option<usize> {
        let mut x = 0;
        for _ in 0..width {
            x = (x << 1) | usize::from(self.next_bit()?);
        }
        Some(x)
    }

    fn offset(&self) -> usize {
        self.base + self.pos / 6
    }
}

#[derive(Default)]
struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    fn push_value(&mut self, value: usize, width: usize) {
        for i in (0..width).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    fn len(&self) -> usize {
        self.bits.len()
    }

    fn finish(self, pad_with_ones: bool) -> Vec<u8> {
        self.bits
            .chunks(6)
            .map(|chunk| {
                let mut byte = 0u8;
                for i in 0..6 {
                    let bit = chunk.get(i).copied().unwrap_or(pad_with_ones);
                    byte = (byte << 1) | u8::from(bit);
                }
                byte + BIAS
            })
            .collect()
    }
}
