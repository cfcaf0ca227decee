//! Transcript entries and the binary file format.
//!
//! A transcript is a header (preset name, 32-byte seed) plus a sequence of
//! length-prefixed entries. Each entry is a tag byte in {O, P, Y, R, Q, S}
//! followed by a u32-le payload length and an ASCII payload whose field
//! elements use the tower's fixed-width hex serialization. O = oracle message,
//! P = plain message, Y = polynomial message (idealized Poly-IOP runs),
//! R = verifier randomness, Q = query record, S = state mark.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::poly::{Axis, EvalTable, GridDomain, MultiPoly};
use crate::rng::Seed;

#[derive(Debug, Clone)]
pub enum Entry {
    Oracle {
        label: String,
        table: EvalTable,
    },
    Plain {
        label: String,
        values: Vec<FieldElem>,
    },
    PolyMsg {
        label: String,
        poly: MultiPoly,
    },
    Draw {
        label: String,
        values: Vec<FieldElem>,
    },
    Query {
        oracle: String,
        point: Vec<FieldElem>,
        answer: FieldElem,
    },
    State {
        label: String,
        doomed: bool,
        witness: String,
    },
}

#[derive(Debug, Clone)]
pub struct Transcript {
    pub preset: String,
    pub seed: Seed,
    pub entries: Vec<Entry>,
}

const MAGIC: &[u8] = b"RMIOP1\n";

fn hex_values(vals: &[FieldElem]) -> String {
    vals.iter()
        .map(|v| v.to_hex())
        .collect::<Vec<_>>()
        .join(" ")
}

fn field_tag(f: FieldId) -> u32 {
    f.log2_size()
}

fn domain_desc(dom: &GridDomain) -> String {
    let axes: Vec<String> = dom
        .axes
        .iter()
        .map(|a| format!("pts {}", hex_values(&a.points)))
        .collect();
    format!(
        "field {} arity {} | {}",
        field_tag(dom.field),
        dom.arity(),
        axes.join(" | ")
    )
}

fn parse_domain(t: &Tower, s: &str) -> Result<GridDomain> {
    let mut parts = s.split(" | ");
    let head = parts
        .next()
        .ok_or_else(|| Error::Io("empty domain descriptor".into()))?;
    let head_tokens: Vec<&str> = head.split_whitespace().collect();
    if head_tokens.len() != 4 || head_tokens[0] != "field" || head_tokens[2] != "arity" {
        return Err(Error::Io("bad domain descriptor".into()));
    }
    let field = FieldId::from_log2(
        head_tokens[1]
            .parse()
            .map_err(|_| Error::Io("bad field tag".into()))?,
    )?;
    let arity: usize = head_tokens[3]
        .parse()
        .map_err(|_| Error::Io("bad arity".into()))?;
    let mut axes = Vec::new();
    for axis_desc in parts {
        let rest = axis_desc
            .strip_prefix("pts ")
            .ok_or_else(|| Error::Io("bad axis descriptor".into()))?;
        let points: Result<Vec<FieldElem>> = rest
            .split_whitespace()
            .map(|h| t.parse_hex(field, h))
            .collect();
        axes.push(Axis::new(points?)?);
    }
    if axes.len() != arity {
        return Err(Error::Io("axis count disagrees with arity".into()));
    }
    Ok(GridDomain::new(field, axes))
}

fn parse_values(t: &Tower, field: FieldId, s: &str) -> Result<Vec<FieldElem>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split_whitespace().map(|h| t.parse_hex(field, h)).collect()
}

fn entry_payload(e: &Entry) -> (u8, String) {
    match e {
        Entry::Oracle { label, table } => (
            b'O',
            format!(
                "{label}\n{}\n{}",
                domain_desc(&table.domain),
                hex_values(&table.values)
            ),
        ),
        Entry::Plain { label, values } => {
            let field = values.first().map(|v| field_tag(v.field)).unwrap_or(16);
            (b'P', format!("{label}\n{field}\n{}", hex_values(values)))
        }
        Entry::PolyMsg { label, poly } => {
            let terms: Vec<String> = poly
                .terms
                .iter()
                .map(|(e, c)| format!("{},{},{}:{}", e[0], e[1], e[2], c.to_hex()))
                .collect();
            (
                b'Y',
                format!(
                    "{label}\n{} {}\n{}",
                    field_tag(poly.field),
                    poly.arity,
                    terms.join(" ")
                ),
            )
        }
        Entry::Draw { label, values } => {
            let field = values.first().map(|v| field_tag(v.field)).unwrap_or(16);
            (b'R', format!("{label}\n{field}\n{}", hex_values(values)))
        }
        Entry::Query {
            oracle,
            point,
            answer,
        } => (
            b'Q',
            format!(
                "{oracle}\n{}\n{} {}",
                field_tag(answer.field),
                hex_values(point),
                answer.to_hex()
            ),
        ),
        Entry::State {
            label,
            doomed,
            witness,
        } => (
            b'S',
            format!("{label}\n{}\n{witness}", u8::from(*doomed)),
        ),
    }
}

pub fn write_transcript(tr: &Transcript) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(format!("preset {}\n", tr.preset).as_bytes());
    out.extend_from_slice(format!("seed {}\n", tr.seed.to_hex()).as_bytes());
    out.extend_from_slice(format!("entries {}\n", tr.entries.len()).as_bytes());
    for e in &tr.entries {
        let (tag, payload) = entry_payload(e);
        out.push(tag);
        out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
        out.extend_from_slice(payload.as_bytes());
    }
    out
}

fn parse_entry(t: &Tower, tag: u8, payload: &str) -> Result<Entry> {
    let mut lines = payload.splitn(3, '\n');
    let label = lines
        .next()
        .ok_or_else(|| Error::Io("entry missing label".into()))?
        .to_string();
    let meta = lines
        .next()
        .ok_or_else(|| Error::Io("entry missing metadata".into()))?;
    let body = lines.next().unwrap_or("");
    match tag {
        b'O' => {
            let dom = parse_domain(t, meta)?;
            let values = parse_values(t, dom.field, body)?;
            Ok(Entry::Oracle {
                label,
                table: EvalTable::new(dom, values).map_err(|e| Error::Io(e.to_string()))?,
            })
        }
        b'P' | b'R' => {
            let field = FieldId::from_log2(
                meta.trim()
                    .parse()
                    .map_err(|_| Error::Io("bad field tag".into()))?,
            )?;
            let values = parse_values(t, field, body)?;
            if tag == b'P' {
                Ok(Entry::Plain { label, values })
            } else {
                Ok(Entry::Draw { label, values })
            }
        }
        b'Y' => {
            let toks: Vec<&str> = meta.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::Io("bad poly metadata".into()));
            }
            let field = FieldId::from_log2(
                toks[0].parse().map_err(|_| Error::Io("bad field tag".into()))?,
            )?;
            let arity: usize = toks[1].parse().map_err(|_| Error::Io("bad arity".into()))?;
            let mut poly = MultiPoly::zero(field, arity);
            for term in body.split_whitespace() {
                let (exps, coeff) = term
                    .split_once(':')
                    .ok_or_else(|| Error::Io("bad poly term".into()))?;
                let es: Vec<u16> = exps
                    .split(',')
                    .map(|x| x.parse().map_err(|_| Error::Io("bad exponent".into())))
                    .collect::<Result<_>>()?;
                if es.len() != 3 {
                    return Err(Error::Io("bad exponent vector".into()));
                }
                let c = t.parse_hex(field, coeff)?;
                poly.terms.insert([es[0], es[1], es[2]], c);
            }
            Ok(Entry::PolyMsg { label, poly })
        }
        b'Q' => {
            let field = FieldId::from_log2(
                meta.trim()
                    .parse()
                    .map_err(|_| Error::Io("bad field tag".into()))?,
            )?;
            let mut vals = parse_values(t, field, body)?;
            let answer = vals
                .pop()
                .ok_or_else(|| Error::Io("query entry missing answer".into()))?;
            Ok(Entry::Query {
                oracle: label,
                point: vals,
                answer,
            })
        }
        b'S' => Ok(Entry::State {
            label,
            doomed: meta.trim() == "1",
            witness: body.to_string(),
        }),
        _ => Err(Error::Io(format!("unknown entry tag {tag}"))),
    }
}

pub fn read_transcript(t: &Tower, bytes: &[u8]) -> Result<Transcript> {
    if !bytes.starts_with(MAGIC) {
        return Err(Error::Io("bad transcript magic".into()));
    }
    let mut pos = MAGIC.len();
    let read_line = |pos: &mut usize| -> Result<String> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos] != b'\n' {
            *pos += 1;
        }
        if *pos >= bytes.len() {
            return Err(Error::Io("truncated transcript header".into()));
        }
        let line = String::from_utf8_lossy(&bytes[start..*pos]).to_string();
        *pos += 1;
        Ok(line)
    };
    let preset_line = read_line(&mut pos)?;
    let preset = preset_line
        .strip_prefix("preset ")
        .ok_or_else(|| Error::Io("missing preset line".into()))?
        .to_string();
    let seed_line = read_line(&mut pos)?;
    let seed = Seed::parse_hex(
        seed_line
            .strip_prefix("seed ")
            .ok_or_else(|| Error::Io("missing seed line".into()))?,
    )
    .ok_or_else(|| Error::Io("bad seed hex".into()))?;
    let count_line = read_line(&mut pos)?;
    let count: usize = count_line
        .strip_prefix("entries ")
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| Error::Io("missing entry count".into()))?;
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        if pos + 5 > bytes.len() {
            return Err(Error::Io("transcript truncated".into()));
        }
        let tag = bytes[pos];
        let len = u32::from_le_bytes(bytes[pos + 1..pos + 5].try_into().unwrap()) as usize;
        pos += 5;
        if pos + len > bytes.len() {
            return Err(Error::Io("transcript truncated".into()));
        }
        let payload = std::str::from_utf8(&bytes[pos..pos + len])
            .map_err(|_| Error::Io("non-utf8 payload".into()))?;
        pos += len;
        entries.push(parse_entry(t, tag, payload)?);
    }
    if pos != bytes.len() {
        return Err(Error::Io("trailing bytes after transcript".into()));
    }
    Ok(Transcript {
        preset,
        seed,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Tower;

    #[test]
    fn binary_round_trip() {
        let t = Tower::default_tower();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x2, f, 2);
        let table = EvalTable::constant(&t, dom, t.elem(f, 0xbeef));
        let mut poly = MultiPoly::zero(f, 2);
        poly.terms.insert([1, 2, 0], t.elem(f, 5));
        let tr = Transcript {
            preset: "desk27".into(),
            seed: Seed::from_u64(99),
            entries: vec![
                Entry::Oracle {
                    label: "a/f".into(),
                    table,
                },
                Entry::Plain {
                    label: "a/zeta".into(),
                    values: vec![t.elem(f, 1), t.elem(f, 0xffff)],
                },
                Entry::PolyMsg {
                    label: "a/Q".into(),
                    poly,
                },
                Entry::Draw {
                    label: "a/r".into(),
                    values: vec![t.elem(f, 7)],
                },
                Entry::Query {
                    oracle: "a/f".into(),
                    point: vec![t.elem(f, 0), t.elem(f, 1)],
                    answer: t.elem(f, 0xbeef),
                },
                Entry::State {
                    label: "a/state0".into(),
                    doomed: true,
                    witness: "check failed".into(),
                },
            ],
        };
        let bytes = write_transcript(&tr);
        let back = read_transcript(&t, &bytes).unwrap();
        assert_eq!(back.preset, "desk27");
        assert_eq!(back.seed, tr.seed);
        assert_eq!(back.entries.len(), tr.entries.len());
        // and a second serialization is byte-identical
        assert_eq!(bytes, write_transcript(&back));
        // truncation is refused
        assert!(read_transcript(&t, &bytes[..bytes.len() - 3]).is_err());
        assert!(read_transcript(&t, b"garbage").is_err());
    }
}
