//! Exact polynomial arithmetic over one ambient tower field.
//!
//! `UniPoly` and `MultiPoly` are the honest prover's working representation
//! and the currency of every brute-force oracle. Coefficients live in a single
//! ambient field (the transcript field q'); subfield structure enters only
//! through which points a polynomial is evaluated at.

mod divide;
mod geometry;
mod lde;
mod table;

pub use divide::{
    divide_by_vanishing_uni, multivariate_vanishing_division, split_variable, uni_divmod,
    vanishing_eval, vanishing_poly,
};
pub use geometry::{enumerate_lines, enumerate_planes, sample_line, sample_plane, Line, Plane};
pub use lde::{interpolate, lde_grid, lde_univariate};
pub use table::{Axis, EvalTable, GridDomain};

use crate::field::{FieldElem, FieldId, Tower};
use std::collections::BTreeMap;

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
/// The zero polynomial has an empty coefficient vector and degree `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    pub field: FieldId,
    coeffs: Vec<FieldElem>,
}

impl UniPoly {
    pub fn new(field: FieldId, mut coeffs: Vec<FieldElem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: FieldId) -> UniPoly {
        UniPoly {
            field,
            coeffs: vec![],
        }
    }

    pub fn constant(c: FieldElem) -> UniPoly {
        UniPoly::new(c.field, vec![c])
    }

    pub fn monomial(c: FieldElem, e: usize) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero(c.field);
        }
        let mut coeffs = vec![FieldElem { field: c.field, bits: 0 }; e + 1];
        coeffs[e] = c;
        UniPoly { field: c.field, coeffs }
    }

    /// Degree; `None` is the −∞ sentinel for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// True when degree ≤ d (the zero polynomial passes every bound).
    pub fn degree_at_most(&self, d: i64) -> bool {
        match self.degree() {
            None => true,
            Some(deg) => deg as i64 <= d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> FieldElem {
        self.coeffs.get(e).copied().unwrap_or(FieldElem {
            field: self.field,
            bits: 0,
        })
    }

    pub fn add(&self, t: &Tower, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(t.add(self.coeff(i), other.coeff(i)));
        }
        UniPoly::new(self.field, out)
    }

    pub fn mul(&self, t: &Tower, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out =
            vec![t.zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = t.add(out[i + j], t.mul(a, b));
            }
        }
        UniPoly::new(self.field, out)
    }

    pub fn scale(&self, t: &Tower, c: FieldElem) -> UniPoly {
        UniPoly::new(
            self.field,
            self.coeffs.iter().map(|&a| t.mul(a, c)).collect(),
        )
    }

    pub fn eval(&self, t: &Tower, x: FieldElem) -> FieldElem {
        let mut acc = t.zero(self.field);
        for &c in self.coeffs.iter().rev() {
            acc = t.add(t.mul(acc, x), c);
        }
        acc
    }

    /// Evaluate over a list of points.
    pub fn eval_many(&self, t: &Tower, xs: &[FieldElem]) -> Vec<FieldElem> {
        xs.iter().map(|&x| self.eval(t, x)).collect()
    }

    /// View as a multivariate polynomial in variable `var` of arity `m`.
    pub fn to_multi(&self, m: usize, var: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(self.field, m);
        for (e, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = [0u16; 3];
                exps[var] = e as u16;
                p.terms.insert(exps, c);
            }
        }
        p
    }
}

/// Sparse multivariate polynomial, arity 1..=3. Exponent vectors are padded
/// with zeros beyond the arity. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub field: FieldId,
    pub arity: usize,
    pub terms: BTreeMap<[u16; 3], FieldElem>,
}

impl MultiPoly {
    pub fn zero(field: FieldId, arity: usize) -> MultiPoly {
        assert!((1..=3).contains(&arity));
        MultiPoly {
            field,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem, arity: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(c.field, arity);
        if !c.is_zero() {
            p.terms.insert([0, 0, 0], c);
        }
        p
    }

    pub fn monomial(c: FieldElem, arity: usize, exps: [u16; 3]) -> MultiPoly {
        let mut p = MultiPoly::zero(c.field, arity);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| (e[0] + e[1] + e[2]) as usize)
            .max()
    }

    pub fn total_degree_at_most(&self, d: i64) -> bool {
        match self.total_degree() {
            None => true,
            Some(deg) => deg as i64 <= d,
        }
    }

    /// Componentwise maximum exponent per variable.
    pub fn individual_degrees(&self) -> Vec<Option<usize>> {
        (0..self.arity)
            .map(|i| self.terms.keys().map(|e| e[i] as usize).max())
            .collect()
    }

    pub fn individual_degrees_at_most(&self, bounds: &[i64]) -> bool {
        self.individual_degrees()
            .iter()
            .zip(bounds)
            .all(|(d, &b)| match d {
                None => true,
                Some(deg) => *deg as i64 <= b,
            })
    }

    pub fn add(&self, t: &Tower, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            let cur = out.terms.get(&e).copied().unwrap_or(t.zero(self.field));
            let s = t.add(cur, c);
            if s.is_zero() {
                out.terms.remove(&e);
            } else {
                out.terms.insert(e, s);
            }
        }
        out
    }

    pub fn mul(&self, t: &Tower, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, other.arity);
        let mut out = MultiPoly::zero(self.field, self.arity);
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let prod = t.mul(c1, c2);
                let cur = out.terms.get(&e).copied().unwrap_or(t.zero(self.field));
                let s = t.add(cur, prod);
                if s.is_zero() {
                    out.terms.remove(&e);
                } else {
                    out.terms.insert(e, s);
                }
            }
        }
        out
    }

    pub fn scale(&self, t: &Tower, c: FieldElem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.field, self.arity);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = t.mul(*v, c);
        }
        out
    }

    pub fn eval(&self, t: &Tower, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.arity);
        let mut acc = t.zero(self.field);
        for (&e, &c) in &self.terms {
            let mut term = c;
            for (i, &x) in point.iter().enumerate() {
                if e[i] > 0 {
                    term = t.mul(term, t.pow(x, e[i] as u64));
                }
            }
            acc = t.add(acc, term);
        }
        acc
    }

    /// Substitute vars[i] for x_i; vars entries share a target arity.
    pub fn compose(&self, t: &Tower, vars: &[MultiPoly]) -> MultiPoly {
        assert_eq!(vars.len(), self.arity);
        let target_arity = vars[0].arity;
        // cache powers of each substitution polynomial
        let max_exp: Vec<u16> = (0..self.arity)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.arity);
        for (i, v) in vars.iter().enumerate() {
            let mut pws = vec![MultiPoly::constant(t.one(self.field), target_arity)];
            for e in 1..=max_exp[i] as usize {
                let next = pws[e - 1].mul(t, v);
                pws.push(next);
            }
            powers.push(pws);
        }
        let mut out = MultiPoly::zero(self.field, target_arity);
        for (&e, &c) in &self.terms {
            let mut term = MultiPoly::constant(c, target_arity);
            for i in 0..self.arity {
                if e[i] > 0 {
                    term = term.mul(t, &powers[i][e[i] as usize]);
                }
            }
            out = out.add(t, &term);
        }
        out
    }

    /// Fix some variables to constants; fixed variables disappear from the
    /// exponent vectors (arity is unchanged).
    pub fn partial_eval(&self, t: &Tower, fixed: &[Option<FieldElem>]) -> MultiPoly {
        assert_eq!(fixed.len(), self.arity);
        let mut out = MultiPoly::zero(self.field, self.arity);
        for (&e, &c) in &self.terms {
            let mut coeff = c;
            let mut rest = e;
            for (i, fx) in fixed.iter().enumerate() {
                if let Some(x) = fx {
                    if e[i] > 0 {
                        coeff = t.mul(coeff, t.pow(*x, e[i] as u64));
                    }
                    rest[i] = 0;
                }
            }
            let cur = out.terms.get(&rest).copied().unwrap_or(t.zero(self.field));
            let s = t.add(cur, coeff);
            if s.is_zero() {
                out.terms.remove(&rest);
            } else {
                out.terms.insert(rest, s);
            }
        }
        out
    }

    /// After fixing all variables except `var`, read off the univariate
    /// polynomial in `var`.
    pub fn collapse_to_uni(&self, var: usize) -> UniPoly {
        let deg = self.terms.keys().map(|e| e[var] as usize).max();
        match deg {
            None => UniPoly::zero(self.field),
            Some(d) => {
                let mut coeffs = vec![FieldElem { field: self.field, bits: 0 }; d + 1];
                for (&e, &c) in &self.terms {
                    for (i, &ei) in e.iter().enumerate().take(self.arity) {
                        assert!(i == var || ei == 0, "collapse with a live variable");
                    }
                    coeffs[e[var] as usize] = c;
                }
                UniPoly::new(self.field, coeffs)
            }
        }
    }

    /// The univariate polynomial this represents, when arity is 1.
    pub fn to_uni(&self) -> UniPoly {
        assert_eq!(self.arity, 1);
        let deg = self.terms.keys().map(|e| e[0] as usize).max();
        match deg {
            None => UniPoly::zero(self.field),
            Some(d) => {
                let mut coeffs = vec![FieldElem { field: self.field, bits: 0 }; d + 1];
                for (&e, &c) in &self.terms {
                    coeffs[e[0] as usize] = c;
                }
                UniPoly::new(self.field, coeffs)
            }
        }
    }

    /// Coefficient of x_var^e, as a polynomial in the remaining variables
    /// (arity preserved, that variable's exponents all zero).
    pub fn coefficient_of(&self, t: &Tower, var: usize, e: u16) -> MultiPoly {
        let _ = t;
        let mut out = MultiPoly::zero(self.field, self.arity);
        for (&exps, &c) in &self.terms {
            if exps[var] == e {
                let mut rest = exps;
                rest[var] = 0;
                out.terms.insert(rest, c);
            }
        }
        out
    }

    /// Evaluate over a full grid, in the grid's row-major point order.
    pub fn eval_on_grid(&self, t: &Tower, domain: &GridDomain) -> EvalTable {
        assert_eq!(domain.arity(), self.arity);
        // per-axis power tables: pw[axis][point][exp]
        let max_exp: Vec<usize> = (0..self.arity)
            .map(|i| self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0))
            .collect();
        let mut pw: Vec<Vec<Vec<FieldElem>>> = Vec::with_capacity(self.arity);
        for (i, axis) in domain.axes.iter().enumerate() {
            let table: Vec<Vec<FieldElem>> = axis
                .points
                .iter()
                .map(|&x| {
                    let mut row = Vec::with_capacity(max_exp[i] + 1);
                    let mut cur = t.one(self.field);
                    for _ in 0..=max_exp[i] {
                        row.push(cur);
                        cur = t.mul(cur, x);
                    }
                    row
                })
                .collect();
            pw.push(table);
        }
        let mut values = vec![t.zero(self.field); domain.size()];
        for (&e, &c) in &self.terms {
            for (idx, multi) in domain.iter_indices().enumerate() {
                let mut term = c;
                for (i, &pi) in multi.iter().enumerate().take(self.arity) {
                    term = t.mul(term, pw[i][pi][e[i] as usize]);
                }
                values[idx] = t.add(values[idx], term);
            }
        }
        EvalTable {
            domain: domain.clone(),
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldId;

    fn t() -> Tower {
        Tower::default_tower()
    }

    #[test]
    fn unipoly_canonical_form() {
        let t = t();
        let f = FieldId::F2x16;
        let z = t.zero(f);
        let one = t.one(f);
        let p = UniPoly::new(f, vec![one, z, z]);
        assert_eq!(p.degree(), Some(0));
        assert!(UniPoly::zero(f).degree().is_none());
        let q = p.add(&t, &p);
        assert!(q.is_zero());
    }

    #[test]
    fn mul_and_eval_agree() {
        let t = t();
        let f = FieldId::F2x16;
        let g = t.generator(f);
        // (x + g)(x + g) = x^2 + g^2 in characteristic 2
        let p = UniPoly::new(f, vec![g, t.one(f)]);
        let sq = p.mul(&t, &p);
        assert_eq!(sq.degree(), Some(2));
        assert_eq!(sq.coeff(1), t.zero(f));
        for bits in [0u64, 1, 5, 77] {
            let x = t.elem(f, bits);
            assert_eq!(sq.eval(&t, x), t.mul(p.eval(&t, x), p.eval(&t, x)));
        }
    }

    #[test]
    fn multipoly_compose_recovers_split() {
        let t = t();
        let f = FieldId::F2x16;
        let one = t.one(f);
        // Q(u, v) = u^2 v, substituted with u = x^2, v = x gives x^5
        let q = MultiPoly::monomial(one, 2, [2, 1, 0]);
        let x2 = MultiPoly::monomial(one, 1, [2, 0, 0]);
        let x = MultiPoly::monomial(one, 1, [1, 0, 0]);
        let comp = q.compose(&t, &[x2, x]);
        assert_eq!(comp.to_uni(), UniPoly::monomial(one, 5));
    }

    #[test]
    fn coefficient_extraction() {
        let t = t();
        let f = FieldId::F2x16;
        let one = t.one(f);
        let g = t.generator(f);
        // p = x^3 y + g x^3 + y^2
        let mut p = MultiPoly::zero(f, 2);
        p = p.add(&t, &MultiPoly::monomial(one, 2, [3, 1, 0]));
        p = p.add(&t, &MultiPoly::monomial(g, 2, [3, 0, 0]));
        p = p.add(&t, &MultiPoly::monomial(one, 2, [0, 2, 0]));
        let lead = p.coefficient_of(&t, 0, 3);
        // coefficient of x^3 is y + g
        assert_eq!(lead.terms.len(), 2);
        assert_eq!(lead.eval(&t, &[t.zero(f), t.zero(f)]), g);
    }
}
