//! Reed-Solomon / Reed-Muller code specifications, agreement and distance,
//! and brute-force oracles: exact nearest-codeword search, list decoding, and
//! threshold-agreement queries for tiny parameters.
//!
//! The univariate oracles are exact on any domain where C(n, d+1) fits under
//! the enumeration cap: every codeword agreeing with f on at least d+1 points
//! is the interpolant of one of its (d+1)-point agreement subsets. The
//! multivariate grid oracle enumerates product subgrids, which finds every
//! codeword whose agreement set contains a full interpolation subgrid; the
//! subset oracle is exact on tiny domains and also handles side conditions,
//! at the cost of enumerating point subsets.

use crate::error::{capability, parameter, structural, Error, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::poly::{interpolate, lde_grid, vanishing_eval, EvalTable, GridDomain, MultiPoly, UniPoly};
use crate::ratio::Ratio;

pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    Rs,
    RmTotal,
    RmIndividual,
}

/// Degree bound; −1 is the only-zero-polynomial family (quotient reductions
/// produce it), and the zero polynomial's −∞ degree passes every bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeBound {
    Total(i64),
    Individual(Vec<i64>),
}

#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub degree: DegreeBound,
    pub domain: GridDomain,
    pub value_field: FieldId,
}

impl CodeSpec {
    pub fn rs(d: i64, domain: GridDomain) -> CodeSpec {
        assert_eq!(domain.arity(), 1);
        let value_field = domain.field;
        CodeSpec {
            kind: CodeKind::Rs,
            degree: DegreeBound::Total(d),
            domain,
            value_field,
        }
    }

    pub fn rm_total(d: i64, domain: GridDomain) -> CodeSpec {
        assert!(domain.arity() >= 2);
        let value_field = domain.field;
        CodeSpec {
            kind: CodeKind::RmTotal,
            degree: DegreeBound::Total(d),
            domain,
            value_field,
        }
    }

    pub fn rm_individual(ds: Vec<i64>, domain: GridDomain) -> CodeSpec {
        assert_eq!(domain.arity(), ds.len());
        assert!(domain.arity() >= 2);
        let value_field = domain.field;
        CodeSpec {
            kind: CodeKind::RmIndividual,
            degree: DegreeBound::Individual(ds),
            domain,
            value_field,
        }
    }

    pub fn arity(&self) -> usize {
        self.domain.arity()
    }

    /// Does a polynomial satisfy this spec's degree bound?
    pub fn poly_in_family(&self, p: &MultiPoly) -> bool {
        match &self.degree {
            DegreeBound::Total(d) => p.total_degree_at_most(*d),
            DegreeBound::Individual(ds) => p.individual_degrees_at_most(ds),
        }
    }

    /// Exact membership of a table: is it the restriction of a family member?
    pub fn table_in_code(&self, t: &Tower, f: &EvalTable) -> Result<bool> {
        if !f.domain.same_as(&self.domain) {
            return structural("membership query on the wrong domain");
        }
        match (&self.kind, &self.degree) {
            (CodeKind::Rs, DegreeBound::Total(d)) => {
                univariate_degree_at_most(t, &f.domain.axes[0].points, &f.values, *d)
            }
            (CodeKind::RmIndividual, DegreeBound::Individual(ds)) => {
                individual_degree_check(t, f, ds)
            }
            (CodeKind::RmTotal, DegreeBound::Total(d)) => {
                let p = lde_grid(t, f)?;
                Ok(p.total_degree_at_most(*d))
            }
            _ => structural("code kind and degree bound disagree"),
        }
    }

    /// The monomial exponent basis of the family.
    fn monomial_basis(&self) -> Vec<[u16; 3]> {
        let m = self.arity();
        let mut basis = Vec::new();
        match &self.degree {
            DegreeBound::Total(d) => {
                if *d < 0 {
                    return basis;
                }
                let d = *d as u16;
                for e1 in 0..=d {
                    if m == 1 {
                        basis.push([e1, 0, 0]);
                        continue;
                    }
                    for e2 in 0..=(d - e1) {
                        if m == 2 {
                            basis.push([e1, e2, 0]);
                            continue;
                        }
                        for e3 in 0..=(d - e1 - e2) {
                            basis.push([e1, e2, e3]);
                        }
                    }
                }
            }
            DegreeBound::Individual(ds) => {
                if ds.iter().any(|&d| d < 0) {
                    return basis;
                }
                let b: Vec<u16> = ds.iter().map(|&d| d as u16).collect();
                let b2 = b.get(1).copied().unwrap_or(0);
                let b3 = b.get(2).copied().unwrap_or(0);
                for e1 in 0..=b[0] {
                    for e2 in 0..=b2 {
                        if m == 2 {
                            basis.push([e1, e2, 0]);
                            continue;
                        }
                        for e3 in 0..=b3 {
                            basis.push([e1, e2, e3]);
                        }
                    }
                }
            }
        }
        basis
    }
}

/// Fraction of domain points where two tables agree.
pub fn agreement(f: &EvalTable, g: &EvalTable) -> Result<Ratio> {
    f.agreement(g)
}

/// Side condition: claimed values of the low-degree extension at prescribed
/// points, not required to lie in the evaluation domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideCondition {
    pub points: Vec<Vec<FieldElem>>,
    pub values: Vec<FieldElem>,
}

impl SideCondition {
    pub fn new(points: Vec<Vec<FieldElem>>, values: Vec<FieldElem>) -> Result<SideCondition> {
        if points.len() != values.len() {
            return structural("side condition arity mismatch");
        }
        for (i, p) in points.iter().enumerate() {
            if points[i + 1..].contains(p) {
                return structural("side condition points must be distinct");
            }
        }
        Ok(SideCondition { points, values })
    }

    pub fn empty() -> SideCondition {
        SideCondition {
            points: vec![],
            values: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn satisfied_by(&self, t: &Tower, p: &MultiPoly) -> bool {
        self.points
            .iter()
            .zip(&self.values)
            .all(|(pt, &v)| p.eval(t, pt) == v)
    }
}

fn binomial_capped(n: u64, k: u64, cap: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Lexicographic k-subset iterator over 0..n.
struct Subsets {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Subsets {
        Subsets {
            n,
            idx: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.idx.clone());
        }
        let k = self.idx.len();
        if k == 0 {
            self.done = true;
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.idx[i] != i + self.n - k {
                break;
            }
        }
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(self.idx.clone())
    }
}

fn coeff_key(p: &UniPoly, width: usize) -> Vec<u32> {
    (0..width).map(|i| p.coeff(i).bits).collect()
}

/// Exact check that a univariate table has degree ≤ d, by interpolating on
/// the first d+1 nodes and comparing everywhere else.
fn univariate_degree_at_most(
    t: &Tower,
    xs: &[FieldElem],
    ys: &[FieldElem],
    d: i64,
) -> Result<bool> {
    if d < 0 {
        return Ok(ys.iter().all(|v| v.is_zero()));
    }
    let k = (d as usize + 1).min(xs.len());
    let p = interpolate(t, &xs[..k], &ys[..k])?;
    Ok(xs
        .iter()
        .zip(ys)
        .skip(k)
        .all(|(&x, &y)| p.eval(t, x) == y))
}

/// Exact individual-degree membership: every fiber along axis i must be a
/// univariate of degree ≤ d_i.
#[allow(clippy::needless_range_loop)]
fn individual_degree_check(t: &Tower, f: &EvalTable, ds: &[i64]) -> Result<bool> {
    let dims = f.domain.dims();
    let m = dims.len();
    for axis_i in 0..m {
        let stride: usize = dims[axis_i + 1..].iter().product();
        let block = stride * dims[axis_i];
        let n = dims[axis_i];
        let xs = &f.domain.axes[axis_i].points;
        let mut fiber = vec![t.zero(f.domain.field); n];
        for base in 0..f.values.len() / block {
            for off in 0..stride {
                let start = base * block + off;
                for j in 0..n {
                    fiber[j] = f.values[start + j * stride];
                }
                if !univariate_degree_at_most(t, xs, &fiber, ds[axis_i])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exact best Reed-Solomon agreement, optionally side-conditioned. Returns
/// the maximizing codeword (ties broken by lexicographic coefficient order)
/// and its agreement.
pub fn best_rs_agreement(
    t: &Tower,
    f: &EvalTable,
    d: i64,
    side: Option<&SideCondition>,
    cap: u64,
) -> Result<(UniPoly, Ratio)> {
    if f.domain.arity() != 1 {
        return structural("best_rs_agreement expects a univariate table");
    }
    let n = f.len() as u64;
    let xs = &f.domain.axes[0].points;

    let no_side = side.is_none_or(|s| s.is_empty());
    if no_side {
        let (p, matches) = best_rs_plain(t, xs, &f.values, d, cap)?;
        return Ok((p, Ratio::new(matches, n)));
    }
    let s = side.unwrap();
    let a_pts: Vec<FieldElem> = s.points.iter().map(|p| p[0]).collect();
    if a_pts.len() as i64 > d + 1 {
        // overdetermined: at most one candidate, the interpolant of the first
        // d+1 condition points
        let k = ((d + 1).max(1)) as usize;
        let cand = interpolate(t, &a_pts[..k], &s.values[..k])?;
        let consistent = a_pts
            .iter()
            .zip(&s.values)
            .all(|(&x, &v)| cand.eval(t, x) == v)
            && cand.degree_at_most(d);
        if !consistent {
            return parameter("side conditions admit no codeword");
        }
        let table_vals = cand.eval_many(t, xs);
        let matches = table_vals
            .iter()
            .zip(&f.values)
            .filter(|(a, b)| a == b)
            .count() as u64;
        return Ok((cand, Ratio::new(matches, n)));
    }
    let h_hat = interpolate(t, &a_pts, &s.values)?;
    let mut fixed = 0u64;
    let mut wx = Vec::new();
    let mut wy = Vec::new();
    for (&x, &y) in xs.iter().zip(&f.values) {
        if a_pts.contains(&x) {
            if h_hat.eval(t, x) == y {
                fixed += 1;
            }
        } else {
            let va = vanishing_eval(t, &a_pts, x);
            let shifted = t.add(y, h_hat.eval(t, x));
            wx.push(x);
            wy.push(t.div(shifted, va)?);
        }
    }
    let (inner, inner_matches) = best_rs_plain(t, &wx, &wy, d - a_pts.len() as i64, cap)?;
    let va = crate::poly::vanishing_poly(t, &a_pts)?;
    let full = va.mul(t, &inner).add(t, &h_hat);
    Ok((full, Ratio::new(fixed + inner_matches, n)))
}

/// Plain exact best agreement with RS[d] on explicit points.
fn best_rs_plain(
    t: &Tower,
    xs: &[FieldElem],
    ys: &[FieldElem],
    d: i64,
    cap: u64,
) -> Result<(UniPoly, u64)> {
    let field = ys.first().map(|v| v.field).unwrap_or(FieldId::F2x16);
    if d < 0 {
        let matches = ys.iter().filter(|v| v.is_zero()).count() as u64;
        return Ok((UniPoly::zero(field), matches));
    }
    let k = d as usize + 1;
    if xs.len() <= k {
        // every table extends to a degree-d polynomial exactly
        if xs.is_empty() {
            return Ok((UniPoly::zero(field), 0));
        }
        let p = interpolate(t, xs, ys)?;
        return Ok((p, xs.len() as u64));
    }
    if binomial_capped(xs.len() as u64, k as u64, cap).is_none() {
        return capability(format!("C({}, {k}) exceeds enumeration cap", xs.len()));
    }
    let mut best: Option<(UniPoly, u64, Vec<u32>)> = None;
    for subset in Subsets::new(xs.len(), k) {
        let sx: Vec<_> = subset.iter().map(|&i| xs[i]).collect();
        let sy: Vec<_> = subset.iter().map(|&i| ys[i]).collect();
        let p = interpolate(t, &sx, &sy)?;
        let matches = xs
            .iter()
            .zip(ys)
            .filter(|(&x, &y)| p.eval(t, x) == y)
            .count() as u64;
        let key = coeff_key(&p, k);
        let better = match &best {
            None => true,
            Some((_, m, bk)) => matches > *m || (matches == *m && key < *bk),
        };
        if better {
            best = Some((p, matches, key));
        }
    }
    let (p, m, _) = best.expect("at least one subset");
    Ok((p, m))
}

/// Exact Reed-Solomon list decoding: all codewords with agreement ≥ threshold.
/// Requires threshold > sqrt(δ) where δ = d/|L|.
pub fn list_decode_rs(
    t: &Tower,
    f: &EvalTable,
    d: i64,
    side: Option<&SideCondition>,
    threshold: Ratio,
    cap: u64,
) -> Result<Vec<UniPoly>> {
    if f.domain.arity() != 1 {
        return structural("list_decode_rs expects a univariate table");
    }
    let n = f.len() as u64;
    let delta = pairwise_delta_for(d, n);
    let th2 = threshold * threshold;
    if th2 <= delta {
        return parameter(format!(
            "list decoding threshold {threshold} is not above sqrt({delta})"
        ));
    }
    let xs = &f.domain.axes[0].points;
    // smallest integer count with count/n >= threshold
    let min_matches =
        (threshold.num() as u128 * n as u128).div_ceil(threshold.den() as u128) as u64;
    let empty = SideCondition::empty();
    let side_ref = side.unwrap_or(&empty);
    let a_pts: Vec<FieldElem> = side_ref.points.iter().map(|p| p[0]).collect();
    let k_needed = ((d - a_pts.len() as i64) + 1).max(0) as usize;
    let h_hat = if a_pts.is_empty() {
        UniPoly::zero(f.domain.field)
    } else {
        interpolate(t, &a_pts, &side_ref.values)?
    };
    let mut wx = Vec::new();
    let mut wy = Vec::new();
    for (&x, &y) in xs.iter().zip(&f.values) {
        if a_pts.contains(&x) {
            continue;
        }
        let v = vanishing_eval(t, &a_pts, x);
        let shifted = t.add(y, h_hat.eval(t, x));
        wx.push(x);
        wy.push(t.div(shifted, v)?);
    }
    let candidates: Vec<UniPoly> = if k_needed == 0 {
        vec![UniPoly::zero(f.domain.field)]
    } else {
        if binomial_capped(wx.len() as u64, k_needed as u64, cap).is_none() {
            return capability("list decoding candidate space exceeds the cap");
        }
        let mut cs = Vec::new();
        for subset in Subsets::new(wx.len(), k_needed) {
            let sx: Vec<_> = subset.iter().map(|&i| wx[i]).collect();
            let sy: Vec<_> = subset.iter().map(|&i| wy[i]).collect();
            cs.push(interpolate(t, &sx, &sy)?);
        }
        cs
    };
    let mut found: Vec<(Vec<u32>, UniPoly)> = Vec::new();
    for g in candidates {
        let full = if a_pts.is_empty() {
            g
        } else {
            crate::poly::vanishing_poly(t, &a_pts)?
                .mul(t, &g)
                .add(t, &h_hat)
        };
        if !full.degree_at_most(d) {
            continue;
        }
        let matches = xs
            .iter()
            .zip(&f.values)
            .filter(|(&x, &y)| full.eval(t, x) == y)
            .count() as u64;
        if matches >= min_matches {
            let key = coeff_key(&full, (d + 1).max(1) as usize);
            if !found.iter().any(|(k2, _)| *k2 == key) {
                found.push((key, full));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

fn pairwise_delta_for(d: i64, n: u64) -> Ratio {
    if d <= 0 {
        Ratio::ZERO
    } else {
        Ratio::new(d as u64, n)
    }
}

/// Schwartz-Zippel pairwise agreement bound of the family over its evaluation
/// domain: d/|L| for RS and total-degree RM over grids, (Σ d_i)/|L| for
/// individual-degree families. Degree-0 families give 0.
pub fn pairwise_delta(spec: &CodeSpec) -> Ratio {
    let l = spec.domain.axes[0].len() as u64;
    match &spec.degree {
        DegreeBound::Total(d) => pairwise_delta_for(*d, l),
        DegreeBound::Individual(ds) => pairwise_delta_for(ds.iter().sum::<i64>(), l),
    }
}

/// The same bound over the full ambient space F_{q'}^m.
pub fn pairwise_delta_ambient(spec: &CodeSpec) -> Ratio {
    let l = spec.value_field.order();
    match &spec.degree {
        DegreeBound::Total(d) => pairwise_delta_for(*d, l),
        DegreeBound::Individual(ds) => pairwise_delta_for(ds.iter().sum::<i64>(), l),
    }
}

/// The nearest-codeword oracle: exact maximizer over all codewords
/// satisfying the side condition, with deterministic tie-break.
pub fn code_agreement_oracle(
    t: &Tower,
    f: &EvalTable,
    spec: &CodeSpec,
    side: Option<&SideCondition>,
    cap: u64,
) -> Result<(MultiPoly, Ratio)> {
    if !f.domain.same_as(&spec.domain) {
        return structural("oracle query on the wrong domain");
    }
    match spec.kind {
        CodeKind::Rs => {
            let d = match &spec.degree {
                DegreeBound::Total(d) => *d,
                _ => return structural("RS spec must carry a total degree"),
            };
            let (p, agr) = best_rs_agreement(t, f, d, side, cap)?;
            Ok((p.to_multi(1, 0), agr))
        }
        _ => best_rm_agreement_grid(t, f, spec, side, cap),
    }
}

/// Grid-subset nearest-codeword search for Reed-Muller families. Exact
/// whenever the maximizer's agreement set contains a full interpolation
/// subgrid; always a valid lower-bound witness.
pub fn best_rm_agreement_grid(
    t: &Tower,
    f: &EvalTable,
    spec: &CodeSpec,
    side: Option<&SideCondition>,
    cap: u64,
) -> Result<(MultiPoly, Ratio)> {
    let m = f.domain.arity();
    let per_axis: Vec<i64> = match &spec.degree {
        DegreeBound::Total(d) => vec![*d; m],
        DegreeBound::Individual(ds) => ds.clone(),
    };
    if per_axis.iter().any(|&d| d < 0) {
        let zero = MultiPoly::zero(f.domain.field, m);
        let matches = f.values.iter().filter(|v| v.is_zero()).count() as u64;
        return Ok((zero, Ratio::new(matches, f.len() as u64)));
    }
    let mut total: u128 = 1;
    for (axis, &d) in f.domain.axes.iter().zip(&per_axis) {
        let c = binomial_capped(axis.len() as u64, (d + 1) as u64, cap)
            .ok_or_else(|| Error::Capability("subgrid count exceeds cap".into()))?;
        total = total.saturating_mul(c as u128);
        if total > cap as u128 {
            return capability("subgrid count exceeds cap");
        }
    }
    let axis_subsets: Vec<Vec<Vec<usize>>> = f
        .domain
        .axes
        .iter()
        .zip(&per_axis)
        .map(|(axis, &d)| Subsets::new(axis.len(), (d as usize + 1).min(axis.len())).collect())
        .collect();
    let mut best: Option<(MultiPoly, u64)> = None;
    let mut counters = vec![0usize; m];
    loop {
        let sel: Vec<&Vec<usize>> = counters
            .iter()
            .enumerate()
            .map(|(i, &c)| &axis_subsets[i][c])
            .collect();
        let axes: Result<Vec<_>> = sel
            .iter()
            .enumerate()
            .map(|(i, idxs)| {
                crate::poly::Axis::new(
                    idxs.iter().map(|&j| f.domain.axes[i].points[j]).collect(),
                )
            })
            .collect();
        let sub_dom = GridDomain::new(f.domain.field, axes?);
        let mut vals = Vec::with_capacity(sub_dom.size());
        for multi in sub_dom.iter_indices() {
            let orig: Vec<usize> = multi.iter().enumerate().map(|(i, &j)| sel[i][j]).collect();
            vals.push(f.value_at(&orig));
        }
        let sub_table = EvalTable::new(sub_dom, vals)?;
        let cand = lde_grid(t, &sub_table)?;
        let ok_family =
            spec.poly_in_family(&cand) && side.is_none_or(|s| s.satisfied_by(t, &cand));
        if ok_family {
            let table = cand.eval_on_grid(t, &f.domain);
            let matches = table
                .values
                .iter()
                .zip(&f.values)
                .filter(|(a, b)| a == b)
                .count() as u64;
            let better = match &best {
                None => true,
                Some((_, bm)) => matches > *bm,
            };
            if better {
                best = Some((cand, matches));
            }
        }
        // advance counters, last axis fastest
        let mut i = m;
        loop {
            if i == 0 {
                let (p, matches) = best.unwrap_or((MultiPoly::zero(f.domain.field, m), 0));
                return Ok((p, Ratio::new(matches, f.len() as u64)));
            }
            i -= 1;
            counters[i] += 1;
            if counters[i] < axis_subsets[i].len() {
                break;
            }
            counters[i] = 0;
        }
    }
}

/// Exact threshold query on tiny domains: does any family member (satisfying
/// the side condition) agree with f on at least `min_matches` points? Decided
/// by enumerating point subsets and checking linear solvability.
pub fn exceeds_agreement_exact(
    t: &Tower,
    f: &EvalTable,
    spec: &CodeSpec,
    side: Option<&SideCondition>,
    min_matches: usize,
    cap: u64,
) -> Result<bool> {
    let n = f.len();
    if min_matches == 0 {
        return Ok(true);
    }
    if min_matches > n {
        return Ok(false);
    }
    if binomial_capped(n as u64, min_matches as u64, cap).is_none() {
        return capability("subset count exceeds cap");
    }
    let basis = spec.monomial_basis();
    let points: Vec<Vec<FieldElem>> = f.domain.iter_points().collect();
    let field = f.domain.field;
    let row_for = |pt: &[FieldElem], rhs: FieldElem| -> Vec<FieldElem> {
        let mut row: Vec<FieldElem> = basis
            .iter()
            .map(|e| {
                let mut v = t.one(field);
                for (i, &x) in pt.iter().enumerate() {
                    if e[i] > 0 {
                        v = t.mul(v, t.pow(x, e[i] as u64));
                    }
                }
                v
            })
            .collect();
        row.push(rhs);
        row
    };
    let side_rows: Vec<Vec<FieldElem>> = side
        .map(|s| {
            s.points
                .iter()
                .zip(&s.values)
                .map(|(p, &v)| row_for(p, v))
                .collect()
        })
        .unwrap_or_default();
    for subset in Subsets::new(n, min_matches) {
        let mut rows = side_rows.clone();
        for &i in &subset {
            rows.push(row_for(&points[i], f.values[i]));
        }
        if system_consistent(t, &mut rows, basis.len()) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact maximum agreement on tiny domains, via descending threshold queries.
pub fn max_agreement_exact(
    t: &Tower,
    f: &EvalTable,
    spec: &CodeSpec,
    side: Option<&SideCondition>,
    cap: u64,
) -> Result<Ratio> {
    let n = f.len();
    for m in (1..=n).rev() {
        if exceeds_agreement_exact(t, f, spec, side, m, cap)? {
            return Ok(Ratio::new(m as u64, n as u64));
        }
    }
    Ok(Ratio::ZERO)
}

/// Gaussian elimination consistency check over the tower field. Rows are
/// (coefficients..., rhs).
#[allow(clippy::needless_range_loop)]
fn system_consistent(t: &Tower, rows: &mut [Vec<FieldElem>], ncols: usize) -> bool {
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(sel) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, sel);
        let inv = t.inv(rows[pivot_row][col]).expect("nonzero pivot");
        for c in col..=ncols {
            rows[pivot_row][c] = t.mul(rows[pivot_row][c], inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                for c in col..=ncols {
                    let sub = t.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = t.add(rows[r][c], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    !rows
        .iter()
        .any(|row| row[..ncols].iter().all(|v| v.is_zero()) && !row[ncols].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldId;
    use crate::rng::Seed;

    fn t() -> Tower {
        Tower::default_tower()
    }

    fn gf16_domain(t: &Tower) -> GridDomain {
        GridDomain::subfield_power(t, FieldId::F2x4, FieldId::F2x16, 1)
    }

    #[test]
    fn distinct_degree2_codewords_agree_on_at_most_two_points() {
        let t = t();
        let dom = gf16_domain(&t);
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(21).stream("sz");
        for _ in 0..200 {
            let p = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
            let q = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
            if p == q {
                continue;
            }
            let tp = EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
            let tq = EvalTable::new(dom.clone(), q.eval_many(&t, &dom.axes[0].points)).unwrap();
            let agr = agreement(&tp, &tq).unwrap();
            assert!(agr <= Ratio::new(2, 16), "agreement {agr} too high");
        }
    }

    #[test]
    fn oracle_recovers_codeword_and_planted_noise() {
        let t = t();
        let dom = gf16_domain(&t);
        let f = FieldId::F2x16;
        let spec = CodeSpec::rs(2, dom.clone());
        let mut rng = Seed::from_u64(3).stream("oracle");
        let p = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let mut values = p.eval_many(&t, &dom.axes[0].points);
        let table = EvalTable::new(dom.clone(), values.clone()).unwrap();
        let (found, agr) =
            code_agreement_oracle(&t, &table, &spec, None, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(agr, Ratio::ONE);
        assert_eq!(found.to_uni(), p);
        // corrupt 3 of 16 points: best agreement 13/16, planted codeword wins
        for v in values.iter_mut().take(3) {
            *v = t.add(*v, t.one(f));
        }
        let noisy = EvalTable::new(dom.clone(), values).unwrap();
        let (found, agr) =
            code_agreement_oracle(&t, &noisy, &spec, None, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(agr, Ratio::new(13, 16));
        assert_eq!(found.to_uni(), p);
    }

    #[test]
    fn side_condition_contradiction_lowers_agreement() {
        let t = t();
        let dom = gf16_domain(&t);
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(17).stream("side");
        let p = UniPoly::new(f, (0..2).map(|_| t.sample(f, &mut rng)).collect());
        let table = EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
        let z = t.elem(f, 0x8000);
        let side_ok = SideCondition::new(vec![vec![z]], vec![p.eval(&t, z)]).unwrap();
        let spec = CodeSpec::rs(1, dom.clone());
        let (_, agr) =
            code_agreement_oracle(&t, &table, &spec, Some(&side_ok), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(agr, Ratio::ONE);
        let side_bad =
            SideCondition::new(vec![vec![z]], vec![t.add(p.eval(&t, z), t.one(f))]).unwrap();
        let (_, agr) =
            code_agreement_oracle(&t, &table, &spec, Some(&side_bad), DEFAULT_ENUM_CAP).unwrap();
        assert!(agr < Ratio::ONE);
    }

    #[test]
    fn list_decode_examples() {
        let t = t();
        let dom = gf16_domain(&t);
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(9).stream("list");
        // f a codeword, C = 0.9, delta = 2/16: list is exactly {f}
        let p = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let table = EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
        let list =
            list_decode_rs(&t, &table, 2, None, Ratio::new(9, 10), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0], p);
        // threshold at sqrt(delta) exactly is a parameter error: d = 4 gives
        // delta = 1/4 and C = 1/2
        let err = list_decode_rs(&t, &table, 4, None, Ratio::new(1, 2), DEFAULT_ENUM_CAP);
        assert!(matches!(err, Err(Error::Parameter(_))));
        // random table at d = 1, C = 3/4: bound C/(C^2-delta) < 2 allows at most 1
        for _ in 0..20 {
            let vals: Vec<_> = (0..16).map(|_| t.sample(f, &mut rng)).collect();
            let rt = EvalTable::new(dom.clone(), vals).unwrap();
            let list =
                list_decode_rs(&t, &rt, 1, None, Ratio::new(3, 4), DEFAULT_ENUM_CAP).unwrap();
            assert!(list.len() <= 1);
        }
    }

    #[test]
    fn pairwise_delta_formulas() {
        let t = t();
        let dom1 = gf16_domain(&t);
        assert_eq!(
            pairwise_delta(&CodeSpec::rs(2, dom1.clone())),
            Ratio::new(1, 8)
        );
        let dom3 = GridDomain::subfield_power(&t, FieldId::F2x4, FieldId::F2x16, 3);
        assert_eq!(
            pairwise_delta(&CodeSpec::rm_total(12, dom3)),
            Ratio::new(12, 16)
        );
        assert_eq!(pairwise_delta(&CodeSpec::rs(0, dom1)), Ratio::ZERO);
        let dom2 = GridDomain::subfield_power(&t, FieldId::F2x4, FieldId::F2x16, 2);
        assert_eq!(
            pairwise_delta(&CodeSpec::rm_individual(vec![1, 2], dom2)),
            Ratio::new(3, 16)
        );
    }

    #[test]
    fn membership_checks() {
        let t = t();
        let f = FieldId::F2x16;
        let dom2 = GridDomain::subfield_power(&t, FieldId::F2x2, f, 2);
        let mut rng = Seed::from_u64(14).stream("member");
        let spec = CodeSpec::rm_individual(vec![1, 2], dom2.clone());
        let good = MultiPoly::monomial(t.sample(f, &mut rng), 2, [1, 2, 0]);
        let bad = MultiPoly::monomial(t.one(f), 2, [2, 0, 0]);
        assert!(spec
            .table_in_code(&t, &good.eval_on_grid(&t, &dom2))
            .unwrap());
        assert!(!spec.table_in_code(&t, &bad.eval_on_grid(&t, &dom2)).unwrap());
        let spec_tot = CodeSpec::rm_total(2, dom2.clone());
        let mixed = MultiPoly::monomial(t.one(f), 2, [1, 1, 0]);
        assert!(spec_tot
            .table_in_code(&t, &mixed.eval_on_grid(&t, &dom2))
            .unwrap());
        let too_big = MultiPoly::monomial(t.one(f), 2, [2, 1, 0]);
        assert!(!spec_tot
            .table_in_code(&t, &too_big.eval_on_grid(&t, &dom2))
            .unwrap());
    }

    #[test]
    fn exact_subset_oracle_matches_interpolant_oracle() {
        let t = t();
        let dom = GridDomain::subfield_power(&t, FieldId::F2x2, FieldId::F2x16, 1);
        let f = FieldId::F2x16;
        let spec = CodeSpec::rs(1, dom.clone());
        let mut rng = Seed::from_u64(23).stream("exact");
        for _ in 0..30 {
            let vals: Vec<_> = (0..4).map(|_| t.sample(f, &mut rng)).collect();
            let table = EvalTable::new(dom.clone(), vals).unwrap();
            let (_, agr) =
                code_agreement_oracle(&t, &table, &spec, None, DEFAULT_ENUM_CAP).unwrap();
            let exact = max_agreement_exact(&t, &table, &spec, None, DEFAULT_ENUM_CAP).unwrap();
            assert_eq!(agr, exact);
        }
    }

    #[test]
    fn side_conditioned_oracle_matches_filtered_exhaustive() {
        // side-conditioned membership agrees with unconstrained membership
        // plus explicit LDE point checks, on random small instances
        let t = t();
        let dom = GridDomain::subfield_power(&t, FieldId::F2x2, FieldId::F2x16, 1);
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(61).stream("side-cross");
        for _ in 0..1000 {
            let vals: Vec<_> = (0..4).map(|_| t.sample(f, &mut rng)).collect();
            let table = EvalTable::new(dom.clone(), vals).unwrap();
            let z = t.sample(f, &mut rng);
            if t.in_subfield_image(z, FieldId::F2x2) {
                continue;
            }
            let hv = t.sample(f, &mut rng);
            let side = SideCondition::new(vec![vec![z]], vec![hv]).unwrap();
            let (best, agr) =
                best_rs_agreement(&t, &table, 1, Some(&side), DEFAULT_ENUM_CAP).unwrap();
            assert_eq!(best.eval(&t, z), hv);
            let spec = CodeSpec::rs(1, dom.clone());
            let exact = max_agreement_exact(&t, &table, &spec, Some(&side), DEFAULT_ENUM_CAP)
                .unwrap();
            assert_eq!(agr, exact);
        }
    }

    #[test]
    fn agreement_plus_distance_is_one() {
        let t = t();
        let dom = gf16_domain(&t);
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(31).stream("apd");
        let spec = CodeSpec::rs(2, dom.clone());
        for _ in 0..10 {
            let vals: Vec<_> = (0..16).map(|_| t.sample(f, &mut rng)).collect();
            let table = EvalTable::new(dom.clone(), vals).unwrap();
            let (best, agr) =
                code_agreement_oracle(&t, &table, &spec, None, DEFAULT_ENUM_CAP).unwrap();
            let bt = best.eval_on_grid(&t, &dom);
            let direct = agreement(&table, &bt).unwrap();
            assert_eq!(agr, direct);
            assert_eq!(agr + agr.complement(), Ratio::ONE);
        }
    }
}
