//! Affine lines and planes over a subfield image, with canonical
//! representatives so that enumerating or sampling geometric objects hits
//! each one exactly once.
//!
//! A line is (base, dir) with dir's first nonzero coordinate scaled to 1 and
//! base's coordinate at that pivot zeroed. A plane is (base, two RREF basis
//! rows) with base zeroed at both pivots. Coordinates live in the embedded
//! subfield inside the ambient field; parameters range over the subfield axis.

use crate::error::{structural, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::poly::{EvalTable, GridDomain, MultiPoly};
use crate::rng::DrawStream;

use super::table::Axis;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub base: Vec<FieldElem>,
    pub dir: Vec<FieldElem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    pub base: Vec<FieldElem>,
    pub dir1: Vec<FieldElem>,
    pub dir2: Vec<FieldElem>,
}

impl Line {
    /// Canonicalize an arbitrary parametrization of the same point set.
    pub fn canonical(t: &Tower, base: &[FieldElem], dir: &[FieldElem]) -> Result<Line> {
        let pivot = dir.iter().position(|d| !d.is_zero());
        let Some(p) = pivot else {
            return structural("line direction must be nonzero");
        };
        let inv = t.inv(dir[p])?;
        let dir: Vec<_> = dir.iter().map(|&d| t.mul(d, inv)).collect();
        // subtract base[p] * dir so the pivot coordinate of base becomes 0
        let scale = base[p];
        let base: Vec<_> = base
            .iter()
            .zip(&dir)
            .map(|(&b, &d)| t.add(b, t.mul(scale, d)))
            .collect();
        Ok(Line { base, dir })
    }

    pub fn point(&self, t: &Tower, param: FieldElem) -> Vec<FieldElem> {
        self.base
            .iter()
            .zip(&self.dir)
            .map(|(&b, &d)| t.add(b, t.mul(param, d)))
            .collect()
    }

    /// Restrict a table over sub^m to this line: a univariate table over the
    /// subfield axis.
    pub fn restrict_table(&self, t: &Tower, table: &EvalTable, sub: FieldId) -> Result<EvalTable> {
        let axis = Axis::new(t.subfield_axis(sub, table.domain.field)?)?;
        let values: Result<Vec<_>> = axis
            .points
            .iter()
            .map(|&p| {
                let pt = self.point(t, p);
                table
                    .get(&pt)
                    .ok_or_else(|| crate::error::Error::Structural("line leaves the grid".into()))
            })
            .collect();
        let dom = GridDomain::new(table.domain.field, vec![axis]);
        EvalTable::new(dom, values?)
    }

    /// Compose a polynomial with the line parametrization: an arity-1 poly in t.
    pub fn restrict_poly(&self, t: &Tower, f: &MultiPoly) -> MultiPoly {
        let subs: Vec<MultiPoly> = self
            .base
            .iter()
            .zip(&self.dir)
            .map(|(&b, &d)| {
                let mut p = MultiPoly::constant(b, 1);
                p = p.add(t, &MultiPoly::monomial(d, 1, [1, 0, 0]));
                p
            })
            .collect();
        f.compose(t, &subs)
    }
}

impl Plane {
    /// Canonicalize: RREF the two directions, zero base at both pivots.
    #[allow(clippy::needless_range_loop)]
    pub fn canonical(
        t: &Tower,
        base: &[FieldElem],
        d1: &[FieldElem],
        d2: &[FieldElem],
    ) -> Result<Plane> {
        let m = base.len();
        let mut rows = [d1.to_vec(), d2.to_vec()];
        // gaussian elimination to RREF
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m {
            let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, sel);
            let inv = t.inv(rows[r][col])?;
            for c in 0..m {
                rows[r][c] = t.mul(rows[r][c], inv);
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][col].is_zero() {
                    let factor = rows[i][col];
                    for c in 0..m {
                        let sub = t.mul(factor, rows[r][c]);
                        rows[i][c] = t.add(rows[i][c], sub);
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == 2 {
                break;
            }
        }
        if r < 2 {
            return structural("plane directions must be linearly independent");
        }
        let mut base = base.to_vec();
        for (row, &p) in rows.iter().zip(&pivots) {
            let scale = base[p];
            for c in 0..m {
                let sub = t.mul(scale, row[c]);
                base[c] = t.add(base[c], sub);
            }
        }
        Ok(Plane {
            base,
            dir1: rows[0].clone(),
            dir2: rows[1].clone(),
        })
    }

    pub fn point(&self, t: &Tower, s: FieldElem, u: FieldElem) -> Vec<FieldElem> {
        self.base
            .iter()
            .zip(self.dir1.iter().zip(&self.dir2))
            .map(|(&b, (&d1, &d2))| t.add(b, t.add(t.mul(s, d1), t.mul(u, d2))))
            .collect()
    }

    /// Restrict a table over sub^3 to this plane: a bivariate table over the
    /// subfield axis in plane-local coordinates.
    pub fn restrict_table(&self, t: &Tower, table: &EvalTable, sub: FieldId) -> Result<EvalTable> {
        let axis = Axis::new(t.subfield_axis(sub, table.domain.field)?)?;
        let dom = GridDomain::new(table.domain.field, vec![axis.clone(), axis.clone()]);
        let mut values = Vec::with_capacity(dom.size());
        for s in &axis.points {
            for u in &axis.points {
                let pt = self.point(t, *s, *u);
                let v = table.get(&pt).ok_or_else(|| {
                    crate::error::Error::Structural("plane leaves the grid".into())
                })?;
                values.push(v);
            }
        }
        EvalTable::new(dom, values)
    }

    pub fn restrict_poly(&self, t: &Tower, f: &MultiPoly) -> MultiPoly {
        let subs: Vec<MultiPoly> = self
            .base
            .iter()
            .zip(self.dir1.iter().zip(&self.dir2))
            .map(|(&b, (&d1, &d2))| {
                let mut p = MultiPoly::constant(b, 2);
                p = p.add(t, &MultiPoly::monomial(d1, 2, [1, 0, 0]));
                p = p.add(t, &MultiPoly::monomial(d2, 2, [0, 1, 0]));
                p
            })
            .collect();
        f.compose(t, &subs)
    }
}

fn subfield_points(t: &Tower, sub: FieldId, ambient: FieldId) -> Vec<FieldElem> {
    t.subfield_axis(sub, ambient).expect("subfield axis")
}

/// All affine lines in sub^m, each exactly once. q(q+1) lines for m = 2,
/// q²(q²+q+1) for m = 3.
pub fn enumerate_lines(t: &Tower, sub: FieldId, ambient: FieldId, m: usize) -> Vec<Line> {
    let pts = subfield_points(t, sub, ambient);
    let zero = t.zero(ambient);
    let one = t.one(ambient);
    let mut lines = Vec::new();
    // canonical directions: first nonzero coordinate is 1 at pivot position p
    for p in 0..m {
        let mut dir_template: Vec<Vec<FieldElem>> = vec![vec![]];
        for c in 0..m {
            let choices: Vec<FieldElem> = if c < p {
                vec![zero]
            } else if c == p {
                vec![one]
            } else {
                pts.clone()
            };
            let mut next = Vec::new();
            for d in &dir_template {
                for &ch in &choices {
                    let mut d2 = d.clone();
                    d2.push(ch);
                    next.push(d2);
                }
            }
            dir_template = next;
        }
        for dir in dir_template {
            // bases: pivot coordinate zero, others free
            let mut bases: Vec<Vec<FieldElem>> = vec![vec![]];
            for c in 0..m {
                let choices: Vec<FieldElem> = if c == p { vec![zero] } else { pts.clone() };
                let mut next = Vec::new();
                for b in &bases {
                    for &ch in &choices {
                        let mut b2 = b.clone();
                        b2.push(ch);
                        next.push(b2);
                    }
                }
                bases = next;
            }
            for base in bases {
                lines.push(Line {
                    base,
                    dir: dir.clone(),
                });
            }
        }
    }
    lines
}

/// All affine planes in sub^3, each exactly once: q(q²+q+1) planes.
pub fn enumerate_planes(t: &Tower, sub: FieldId, ambient: FieldId) -> Vec<Plane> {
    let pts = subfield_points(t, sub, ambient);
    let zero = t.zero(ambient);
    let one = t.one(ambient);
    let mut planes = Vec::new();
    // RREF bases by pivot pair
    let pivot_pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    for (p1, p2) in pivot_pairs {
        let free_cols: Vec<usize> = (0..3).filter(|c| *c != p1 && *c != p2).collect();
        // rows: row1 pivot at p1 (0 at p2), row2 pivot at p2
        let mut row_choices: Vec<(Vec<FieldElem>, Vec<FieldElem>)> = Vec::new();
        match (p1, p2) {
            (0, 1) => {
                for &a in &pts {
                    for &b in &pts {
                        row_choices
                            .push((vec![one, zero, a], vec![zero, one, b]));
                    }
                }
            }
            (0, 2) => {
                for &a in &pts {
                    row_choices.push((vec![one, a, zero], vec![zero, zero, one]));
                }
            }
            (1, 2) => {
                row_choices.push((vec![zero, one, zero], vec![zero, zero, one]));
            }
            _ => unreachable!(),
        }
        for (r1, r2) in row_choices {
            for &f in &pts {
                let mut base = vec![zero, zero, zero];
                base[free_cols[0]] = f;
                planes.push(Plane {
                    base,
                    dir1: r1.clone(),
                    dir2: r2.clone(),
                });
            }
        }
    }
    planes
}

/// Uniformly random line (as a geometric object) in sub^m.
pub fn sample_line(
    t: &Tower,
    sub: FieldId,
    ambient: FieldId,
    m: usize,
    rng: &mut DrawStream,
) -> Line {
    let pts = subfield_points(t, sub, ambient);
    loop {
        let dir: Vec<FieldElem> = (0..m)
            .map(|_| pts[rng.below(pts.len() as u64) as usize])
            .collect();
        if dir.iter().all(|d| d.is_zero()) {
            continue;
        }
        let base: Vec<FieldElem> = (0..m)
            .map(|_| pts[rng.below(pts.len() as u64) as usize])
            .collect();
        return Line::canonical(t, &base, &dir).expect("nonzero direction");
    }
}

/// Uniformly random plane in sub^3.
pub fn sample_plane(t: &Tower, sub: FieldId, ambient: FieldId, rng: &mut DrawStream) -> Plane {
    let pts = subfield_points(t, sub, ambient);
    loop {
        let d1: Vec<FieldElem> = (0..3)
            .map(|_| pts[rng.below(pts.len() as u64) as usize])
            .collect();
        let d2: Vec<FieldElem> = (0..3)
            .map(|_| pts[rng.below(pts.len() as u64) as usize])
            .collect();
        let base: Vec<FieldElem> = (0..3)
            .map(|_| pts[rng.below(pts.len() as u64) as usize])
            .collect();
        match Plane::canonical(t, &base, &d1, &d2) {
            Ok(p) => return p,
            Err(_) => continue,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;
    use std::collections::HashSet;

    fn t() -> Tower {
        Tower::default_tower()
    }

    fn line_key(l: &Line) -> String {
        format!("{:?}|{:?}", l.base, l.dir)
    }

    #[test]
    fn line_counts_match_formulas() {
        let t = t();
        // q = 4, m = 2: q(q+1) = 20
        let lines = enumerate_lines(&t, FieldId::F2x2, FieldId::F2x16, 2);
        assert_eq!(lines.len(), 20);
        let uniq: HashSet<_> = lines.iter().map(line_key).collect();
        assert_eq!(uniq.len(), 20);
        // q = 4, m = 3: q^2 (q^2+q+1) = 336
        let lines3 = enumerate_lines(&t, FieldId::F2x2, FieldId::F2x16, 3);
        assert_eq!(lines3.len(), 16 * 21);
    }

    #[test]
    fn plane_count_matches_formula() {
        let t = t();
        // q = 4: q(q^2+q+1) = 84
        let planes = enumerate_planes(&t, FieldId::F2x2, FieldId::F2x16);
        assert_eq!(planes.len(), 84);
    }

    #[test]
    fn canonicalization_collapses_parametrizations() {
        let t = t();
        let sub = FieldId::F2x2;
        let amb = FieldId::F2x16;
        let pts = t.subfield_axis(sub, amb).unwrap();
        let mut rng = Seed::from_u64(2).stream("canon");
        for _ in 0..50 {
            let l = sample_line(&t, sub, amb, 2, &mut rng);
            // reparametrize: scale dir, shift base along the line
            let c = pts[1 + rng.below(3) as usize];
            let shift = pts[rng.below(4) as usize];
            let dir2: Vec<_> = l.dir.iter().map(|&d| t.mul(d, c)).collect();
            let base2 = l.point(&t, shift);
            let l2 = Line::canonical(&t, &base2, &dir2).unwrap();
            assert_eq!(l, l2);
        }
    }

    #[test]
    fn sampled_lines_cover_enumeration_uniformly() {
        let t = t();
        let sub = FieldId::F2x2;
        let amb = FieldId::F2x16;
        let all: HashSet<_> = enumerate_lines(&t, sub, amb, 2)
            .iter()
            .map(line_key)
            .collect();
        let mut rng = Seed::from_u64(77).stream("cover");
        let mut counts: std::collections::HashMap<String, u32> = Default::default();
        for _ in 0..4000 {
            let l = sample_line(&t, sub, amb, 2, &mut rng);
            let k = line_key(&l);
            assert!(all.contains(&k));
            *counts.entry(k).or_default() += 1;
        }
        assert_eq!(counts.len(), 20);
        for &c in counts.values() {
            // expectation 200 per line
            assert!((120..300).contains(&c), "count {c} too skewed");
        }
    }

    #[test]
    fn restriction_preserves_degree() {
        let t = t();
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(31).stream("restrict");
        // total-degree-2 trivariate restricted to a plane has degree <= 2
        let mut p = MultiPoly::zero(f, 3);
        for e in [[2u16, 0, 0], [1, 1, 0], [0, 0, 2], [1, 0, 0], [0, 0, 0]] {
            p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
        }
        let plane = sample_plane(&t, FieldId::F2x4, f, &mut rng);
        let q = plane.restrict_poly(&t, &p);
        assert!(q.total_degree_at_most(2));
        // and the restricted table's LDE agrees with the composed polynomial
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 3);
        let table = p.eval_on_grid(&t, &dom);
        let restricted = plane.restrict_table(&t, &table, FieldId::F2x4).unwrap();
        let back = crate::poly::lde_grid(&t, &restricted).unwrap();
        for s in t.subfield_axis(FieldId::F2x4, f).unwrap().iter().take(4) {
            for u in t.subfield_axis(FieldId::F2x4, f).unwrap().iter().take(4) {
                assert_eq!(back.eval(&t, &[*s, *u]), q.eval(&t, &[*s, *u]));
            }
        }
    }

    #[test]
    fn constant_restricts_to_constant() {
        let t = t();
        let f = FieldId::F2x16;
        let c = t.elem(f, 0x55);
        let p = MultiPoly::constant(c, 3);
        let mut rng = Seed::from_u64(4).stream("cr");
        let line = sample_line(&t, FieldId::F2x2, f, 3, &mut rng);
        let r = line.restrict_poly(&t, &p);
        assert_eq!(r, MultiPoly::constant(c, 1));
        // f = x1 restricted to the line (t, 0) is the parameter itself
        let x1 = MultiPoly::monomial(t.one(f), 2, [1, 0, 0]);
        let axis_line = Line {
            base: vec![t.zero(f), t.zero(f)],
            dir: vec![t.one(f), t.zero(f)],
        };
        assert_eq!(
            axis_line.restrict_poly(&t, &x1),
            MultiPoly::monomial(t.one(f), 1, [1, 0, 0])
        );
    }
}
