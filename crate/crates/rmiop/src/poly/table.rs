//! Evaluation tables over product grids.
//!
//! A grid axis is an ordered list of distinct ambient-field points, typically
//! the embedded image of a subfield (canonical order: the subfield's own bit
//! order) or a multiplicative subgroup. Values are stored in row-major order,
//! first axis slowest.

use crate::error::{structural, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::ratio::Ratio;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug)]
pub struct Axis {
    pub points: Vec<FieldElem>,
    index: HashMap<u32, usize>,
}

impl Axis {
    pub fn new(points: Vec<FieldElem>) -> Result<Arc<Axis>> {
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.bits, i).is_some() {
                return structural("axis points must be distinct");
            }
        }
        Ok(Arc::new(Axis { points, index }))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, p: FieldElem) -> Option<usize> {
        self.index.get(&p.bits).copied()
    }
}

#[derive(Debug, Clone)]
pub struct GridDomain {
    pub field: FieldId,
    pub axes: Vec<Arc<Axis>>,
}

impl GridDomain {
    pub fn new(field: FieldId, axes: Vec<Arc<Axis>>) -> GridDomain {
        assert!((1..=3).contains(&axes.len()));
        GridDomain { field, axes }
    }

    /// The m-fold product of one axis.
    pub fn power(field: FieldId, axis: Arc<Axis>, m: usize) -> GridDomain {
        GridDomain::new(field, (0..m).map(|_| axis.clone()).collect())
    }

    /// Grid over the embedded image of a subfield.
    pub fn subfield_power(t: &Tower, sub: FieldId, ambient: FieldId, m: usize) -> GridDomain {
        let axis = Axis::new(t.subfield_axis(sub, ambient).expect("subfield axis"))
            .expect("distinct points");
        GridDomain::power(ambient, axis, m)
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn size(&self) -> usize {
        self.axes.iter().map(|a| a.len()).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len()).collect()
    }

    /// Same axes, pointwise.
    pub fn same_as(&self, other: &GridDomain) -> bool {
        self.field == other.field
            && self.arity() == other.arity()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.points == b.points)
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        let mut idx = 0;
        for (i, &m) in multi.iter().enumerate() {
            idx = idx * self.axes[i].len() + m;
        }
        idx
    }

    pub fn point_at(&self, multi: &[usize]) -> Vec<FieldElem> {
        multi
            .iter()
            .enumerate()
            .map(|(i, &m)| self.axes[i].points[m])
            .collect()
    }

    /// Position of an explicit point, if it lies on the grid.
    pub fn position(&self, point: &[FieldElem]) -> Option<usize> {
        if point.len() != self.arity() {
            return None;
        }
        let mut idx = 0;
        for (i, &p) in point.iter().enumerate() {
            idx = idx * self.axes[i].len() + self.axes[i].position(p)?;
        }
        Some(idx)
    }

    pub fn iter_indices(&self) -> GridIter {
        GridIter {
            dims: self.dims(),
            cur: vec![0; self.arity()],
            done: self.size() == 0,
        }
    }

    pub fn iter_points(&self) -> impl Iterator<Item = Vec<FieldElem>> + '_ {
        self.iter_indices().map(move |m| self.point_at(&m))
    }
}

pub struct GridIter {
    dims: Vec<usize>,
    cur: Vec<usize>,
    done: bool,
}

impl Iterator for GridIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        // increment, last axis fastest
        for i in (0..self.dims.len()).rev() {
            self.cur[i] += 1;
            if self.cur[i] < self.dims[i] {
                return Some(out);
            }
            self.cur[i] = 0;
        }
        self.done = true;
        Some(out)
    }
}

/// A function from a grid domain to the ambient field.
#[derive(Debug, Clone)]
pub struct EvalTable {
    pub domain: GridDomain,
    pub values: Vec<FieldElem>,
}

impl EvalTable {
    pub fn new(domain: GridDomain, values: Vec<FieldElem>) -> Result<EvalTable> {
        if values.len() != domain.size() {
            return structural(format!(
                "table has {} values for a domain of size {}",
                values.len(),
                domain.size()
            ));
        }
        Ok(EvalTable { domain, values })
    }

    pub fn constant(t: &Tower, domain: GridDomain, c: FieldElem) -> EvalTable {
        let _ = t;
        let n = domain.size();
        EvalTable {
            domain,
            values: vec![c; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_at(&self, multi: &[usize]) -> FieldElem {
        self.values[self.domain.flat_index(multi)]
    }

    /// Value at an explicit point of the grid.
    pub fn get(&self, point: &[FieldElem]) -> Option<FieldElem> {
        self.domain.position(point).map(|i| self.values[i])
    }

    /// Pointwise agreement with another table over the identical domain.
    pub fn agreement(&self, other: &EvalTable) -> Result<Ratio> {
        if !self.domain.same_as(&other.domain) {
            return structural("agreement requires identical domains");
        }
        let matches = self
            .values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a == b)
            .count();
        Ok(Ratio::new(matches as u64, self.len() as u64))
    }

    pub fn distance(&self, other: &EvalTable) -> Result<Ratio> {
        Ok(self.agreement(other)?.complement())
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(usize, FieldElem) -> FieldElem) -> EvalTable {
        EvalTable {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| f(i, v))
                .collect(),
        }
    }

    /// Pointwise linear combination: self + c·other.
    pub fn add_scaled(&self, t: &Tower, other: &EvalTable, c: FieldElem) -> Result<EvalTable> {
        if !self.domain.same_as(&other.domain) {
            return structural("add_scaled requires identical domains");
        }
        Ok(EvalTable {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| t.add(a, t.mul(c, b)))
                .collect(),
        })
    }

    /// Text serialization: a one-line domain descriptor followed by one hex
    /// value per line in row-major order. Axes that are whole subfield images
    /// or multiplicative subgroups carry a tag; anything else lists points.
    pub fn to_text(&self, t: &Tower) -> String {
        let mut head = format!(
            "table field {} arity {}",
            self.domain.field.log2_size(),
            self.domain.arity()
        );
        for axis in &self.domain.axes {
            head.push_str(" | ");
            head.push_str(&axis_descriptor(t, self.domain.field, axis));
        }
        let mut out = head;
        out.push('\n');
        for v in &self.values {
            out.push_str(&v.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn from_text(t: &Tower, text: &str) -> Result<EvalTable> {
        let mut lines = text.lines();
        let head = lines
            .next()
            .ok_or_else(|| crate::error::Error::Io("empty table file".into()))?;
        let mut parts = head.split(" | ");
        let meta = parts
            .next()
            .ok_or_else(|| crate::error::Error::Io("missing table header".into()))?;
        let toks: Vec<&str> = meta.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "table" || toks[1] != "field" || toks[3] != "arity" {
            return Err(crate::error::Error::Io("bad table header".into()));
        }
        let field = crate::field::FieldId::from_log2(
            toks[2]
                .parse()
                .map_err(|_| crate::error::Error::Io("bad field tag".into()))?,
        )?;
        let arity: usize = toks[4]
            .parse()
            .map_err(|_| crate::error::Error::Io("bad arity".into()))?;
        let mut axes = Vec::new();
        for desc in parts {
            axes.push(parse_axis_descriptor(t, field, desc)?);
        }
        if axes.len() != arity {
            return Err(crate::error::Error::Io("axis count mismatch".into()));
        }
        let domain = GridDomain::new(field, axes);
        let values: Result<Vec<FieldElem>> = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| t.parse_hex(field, l.trim()))
            .collect();
        EvalTable::new(domain, values?)
    }
}

fn axis_descriptor(t: &Tower, field: FieldId, axis: &Axis) -> String {
    // recognize whole subfield images in canonical order
    for sub in crate::field::ALL_FIELDS {
        if sub.embeds_into(field) && sub.order() as usize == axis.len() {
            if let Ok(canon) = t.subfield_axis(sub, field) {
                if canon == axis.points {
                    return format!("subfield {}", sub.log2_size());
                }
            }
        }
    }
    // or a multiplicative subgroup in generator order
    if field.group_order().is_multiple_of(axis.len() as u64) {
        if let Ok(h) = t.multiplicative_subgroup(field, axis.len() as u64) {
            if h == axis.points {
                return format!("subgroup {}", axis.len());
            }
        }
    }
    let pts: Vec<String> = axis.points.iter().map(|p| p.to_hex()).collect();
    format!("points {}", pts.join(" "))
}

fn parse_axis_descriptor(t: &Tower, field: FieldId, desc: &str) -> Result<Arc<Axis>> {
    let toks: Vec<&str> = desc.split_whitespace().collect();
    match toks.first() {
        Some(&"subfield") => {
            let b: u32 = toks
                .get(1)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| crate::error::Error::Io("bad subfield tag".into()))?;
            Axis::new(t.subfield_axis(crate::field::FieldId::from_log2(b)?, field)?)
        }
        Some(&"subgroup") => {
            let n: u64 = toks
                .get(1)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| crate::error::Error::Io("bad subgroup tag".into()))?;
            Axis::new(t.multiplicative_subgroup(field, n)?)
        }
        Some(&"points") => {
            let pts: Result<Vec<FieldElem>> =
                toks[1..].iter().map(|h| t.parse_hex(field, h)).collect();
            Axis::new(pts?)
        }
        _ => Err(crate::error::Error::Io("unknown axis descriptor".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldId;

    #[test]
    fn grid_indexing_row_major() {
        let t = Tower::default_tower();
        let dom = GridDomain::subfield_power(&t, FieldId::F2x2, FieldId::F2x4, 2);
        assert_eq!(dom.size(), 16);
        // first axis slowest
        assert_eq!(dom.flat_index(&[1, 2]), 6);
        let p = dom.point_at(&[1, 2]);
        assert_eq!(dom.position(&p), Some(6));
        let all: Vec<_> = dom.iter_indices().collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[6], vec![1, 2]);
    }

    #[test]
    fn table_text_round_trip() {
        let t = Tower::default_tower();
        let f = FieldId::F2x16;
        // subfield axis × subgroup axis
        let sub = Axis::new(t.subfield_axis(FieldId::F2x2, f).unwrap()).unwrap();
        let h = Axis::new(t.multiplicative_subgroup(f, 3).unwrap()).unwrap();
        let dom = GridDomain::new(f, vec![sub, h]);
        let table = EvalTable::constant(&t, dom, t.elem(f, 0xa1b2));
        let text = table.to_text(&t);
        assert!(text.starts_with("table field 16 arity 2 | subfield 2 | subgroup 3"));
        let back = EvalTable::from_text(&t, &text).unwrap();
        assert!(back.domain.same_as(&table.domain));
        assert_eq!(back.values, table.values);
        // explicit point lists round-trip too
        let pts = Axis::new(vec![t.elem(f, 5), t.elem(f, 9)]).unwrap();
        let dom2 = GridDomain::new(f, vec![pts]);
        let t2 = EvalTable::constant(&t, dom2, t.one(f));
        let back2 = EvalTable::from_text(&t, &t2.to_text(&t)).unwrap();
        assert_eq!(back2.values, t2.values);
        assert!(EvalTable::from_text(&t, "nonsense").is_err());
    }

    #[test]
    fn planted_agreement_count() {
        let t = Tower::default_tower();
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, FieldId::F2x16, 1);
        let f = EvalTable::constant(&t, dom.clone(), t.zero(FieldId::F2x16));
        let mut g = f.clone();
        // disagree on 6 of 16 points
        for i in 0..6 {
            g.values[i] = t.one(FieldId::F2x16);
        }
        assert_eq!(f.agreement(&g).unwrap(), Ratio::new(10, 16));
        assert_eq!(f.distance(&g).unwrap(), Ratio::new(6, 16));
    }
}
