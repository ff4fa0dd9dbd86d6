//! The `TMX1` binary matrix format and CSV export.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! b"TMX1" | dim: u32 | k: u16 | tag: u8 | p: u32 | dim*dim x u32 (row-major, 0xFFFFFFFF = +inf)
//! ```

use std::fmt;
use std::io::{self, Write};

use super::{TropicalMatrix, INF};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"TMX1";
pub const HEADER_LEN: usize = 15;

/// Which matrix a file holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixTag {
    /// `C_p`, minimum piece losses.
    C,
    /// The gluing matrix.
    L,
    /// The one-column transition.
    T,
    /// `M_p = L ⊗ C_p`.
    M,
    /// The folded `M'`.
    Folded,
}

impl MatrixTag {
    pub const ALL: [MatrixTag; 5] = [
        MatrixTag::C,
        MatrixTag::L,
        MatrixTag::T,
        MatrixTag::M,
        MatrixTag::Folded,
    ];

    pub fn byte(self) -> u8 {
        match self {
            MatrixTag::C => b'C',
            MatrixTag::L => b'L',
            MatrixTag::T => b'T',
            MatrixTag::M => b'M',
            MatrixTag::Folded => b'F',
        }
    }

    pub fn from_byte(b: u8) -> Option<MatrixTag> {
        MatrixTag::ALL.into_iter().find(|t| t.byte() == b)
    }

    /// Short name used in file names and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            MatrixTag::C => "C",
            MatrixTag::L => "L",
            MatrixTag::T => "T",
            MatrixTag::M => "M",
            MatrixTag::Folded => "F",
        }
    }
}

impl fmt::Display for MatrixTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MatrixTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(MatrixTag::C),
            "L" | "l" => Ok(MatrixTag::L),
            "T" | "t" => Ok(MatrixTag::T),
            "M" | "m" => Ok(MatrixTag::M),
            "F" | "f" | "M'" | "Mp" => Ok(MatrixTag::Folded),
            _ => Err(Error::input(format!(
                "unknown matrix tag {s:?} (expected C, L, T, M or F)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixHeader {
    pub dim: u32,
    pub k: u16,
    pub tag: MatrixTag,
    /// Piece extent, or 0 for matrices that do not depend on it.
    pub p: u32,
}

pub fn encode(header: &MatrixHeader, m: &TropicalMatrix) -> Result<Vec<u8>> {
    if header.dim as usize != m.dim() {
        return Err(Error::DimensionMismatch {
            left: header.dim as usize,
            right: m.dim(),
        });
    }
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * m.data().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&header.dim.to_le_bytes());
    out.extend_from_slice(&header.k.to_le_bytes());
    out.push(header.tag.byte());
    out.extend_from_slice(&header.p.to_le_bytes());
    for &v in m.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_header(bytes: &[u8]) -> Result<MatrixHeader> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Decode(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Decode("bad magic".into()));
    }
    let dim = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    let k = u16::from_le_bytes(bytes[8..10].try_into().expect("2 bytes"));
    let tag = MatrixTag::from_byte(bytes[10])
        .ok_or_else(|| Error::Decode(format!("unknown tag byte {:#04x}", bytes[10])))?;
    let p = u32::from_le_bytes(bytes[11..15].try_into().expect("4 bytes"));
    Ok(MatrixHeader { dim, k, tag, p })
}

/// Parses a complete file. The body length must match `dim` exactly.
pub fn decode(bytes: &[u8]) -> Result<(MatrixHeader, TropicalMatrix)> {
    let header = decode_header(bytes)?;
    let entries = (header.dim as usize)
        .checked_mul(header.dim as usize)
        .ok_or_else(|| Error::Decode("dimension overflows".into()))?;
    let expected = entries
        .checked_mul(4)
        .and_then(|b| b.checked_add(HEADER_LEN))
        .ok_or_else(|| Error::Decode("dimension overflows".into()))?;
    if bytes.len() != expected {
        return Err(Error::Decode(format!(
            "dimension {} needs {expected} bytes, found {}",
            header.dim,
            bytes.len()
        )));
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
        .collect();
    let m = TropicalMatrix::from_vec(header.dim as usize, data)?;
    Ok((header, m))
}

/// One line per row, comma-separated, `inf` for `+inf`.
pub fn write_csv<W: Write>(m: &TropicalMatrix, mut out: W) -> io::Result<()> {
    let mut line = String::new();
    for r in 0..m.dim() {
        line.clear();
        for (c, &v) in m.row(r).iter().enumerate() {
            if c > 0 {
                line.push(',');
            }
            if v == INF {
                line.push_str("inf");
            } else {
                line.push_str(&v.to_string());
            }
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn to_csv(m: &TropicalMatrix) -> String {
    let mut buf = Vec::new();
    write_csv(m, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}
