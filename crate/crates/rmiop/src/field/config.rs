//! Checked-in tower configuration.
//!
//! The moduli are primitive over F_2 and mutually compatible: for every
//! comparable pair, the power map g_sub ↦ g_big^((2^B−1)/(2^b−1)) is a ring
//! homomorphism. Any consistent choice would do; these are fixed in the
//! config for bit-exact reproducibility and re-verified at tower
//! construction.

use crate::error::{structural, Result};
use crate::field::FieldId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerConfig {
    /// (log2_size, modulus bitmask, generator bits)
    pub entries: Vec<(u32, u64, u64)>,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig {
            entries: vec![
                (2, 0x7, 0x2),           // x^2 + x + 1
                (4, 0x13, 0x2),          // x^4 + x + 1
                (8, 0x11d, 0x2),         // x^8 + x^4 + x^3 + x^2 + 1
                (16, 0x1002d, 0x2),      // x^16 + x^5 + x^3 + x^2 + 1
                (32, 0x100008299, 0x2),  // x^32 + x^15 + x^9 + x^7 + x^4 + x^3 + 1
            ],
        }
    }
}

impl TowerConfig {
    pub fn entry(&self, id: FieldId) -> Result<(u64, u32)> {
        let b = id.log2_size();
        for &(log2, modulus, generator) in &self.entries {
            if log2 == b {
                return Ok((modulus, generator as u32));
            }
        }
        structural(format!("config has no entry for log2_size {b}"))
    }

    /// Multiplication vectors checked at construction. Each row is
    /// (field, a, b, a·b) with bit-vector operands.
    pub fn check_vectors(&self) -> Vec<(FieldId, u64, u64, u64)> {
        vec![
            // w * w = w + 1 in GF(4)
            (FieldId::F2x2, 0b10, 0b10, 0b11),
            // x * x^3 = x^4 = x + 1 under x^4+x+1
            (FieldId::F2x4, 0b0010, 0b1000, 0b0011),
            // x^4 * x^4 = x^8 = x^4+x^3+x^2+1 under 0x11d
            (FieldId::F2x8, 0x10, 0x10, 0x1d),
            // x^8 * x^8 = x^16 = x^5+x^3+x^2+1 under 0x1002d
            (FieldId::F2x16, 0x100, 0x100, 0x2d),
        ]
    }

    /// Text format: one `field <log2> <modulus-hex> <generator-hex>` line per
    /// tower member.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# rmiop tower config: log2_size, irreducible bitmask, generator\n");
        for &(log2, modulus, generator) in &self.entries {
            out.push_str(&format!("field {log2} {modulus:#x} {generator:#x}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<TowerConfig> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "field" {
                return structural(format!("tower config line {} malformed", lineno + 1));
            }
            let log2: u32 = parts[1]
                .parse()
                .map_err(|_| crate::error::Error::Structural(format!("bad log2 on line {}", lineno + 1)))?;
            let modulus = parse_hex_u64(parts[2], lineno + 1)?;
            let generator = parse_hex_u64(parts[3], lineno + 1)?;
            entries.push((log2, modulus, generator));
        }
        if entries.is_empty() {
            return structural("tower config has no entries");
        }
        Ok(TowerConfig { entries })
    }
}

fn parse_hex_u64(s: &str, lineno: usize) -> Result<u64> {
    let s = s.strip_prefix("0x").unwrap_or(s);
    u64::from_str_radix(s, 16)
        .map_err(|_| crate::error::Error::Structural(format!("bad hex on line {lineno}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let cfg = TowerConfig::default();
        let parsed = TowerConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn rejects_garbage() {
        assert!(TowerConfig::parse("field x y").is_err());
        assert!(TowerConfig::parse("").is_err());
    }
}
