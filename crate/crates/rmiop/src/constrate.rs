//! Constant-rate trivariate Reed-Muller IOPP: the plane-restriction Poly-IOP
//! and the affine-transform batched IOPP, compiled together.
//!
//! The verifier draws T planes in F_q³, the prover answers with bivariate
//! restrictions encoded over the larger F_q_enc², and T lines with t points
//! each check plane consistency. The batch transports each plane function by
//! an invertible affine map taking the x-axis to its check line, so the side
//! conditions concentrate on a (t+1)×2 subcube; quotients and combines reduce
//! everything to one univariate function, degree-lifted onto the low-rate
//! recursion schedule.

use crate::codes::{CodeSpec, SideCondition};
use crate::error::{structural, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::iop::{
    compile_run, Answers, BatchInput, BatchedIopp, DrawLog, ParamSet, PolyIop, QueryCounters,
    Session, SlotSpec, Verdict,
};
use crate::lowrate::{rs_iopp, rs_iopp_budget, IoppInput};
use crate::poly::{
    sample_line, sample_plane, vanishing_eval, Axis, EvalTable, GridDomain, Line, MultiPoly,
    Plane, UniPoly,
};
use crate::prox::{combine_tot, combine_tot_poly, combine_uni, combine_uni_poly, prox_sample};
use crate::quotient::{decompose_bi_lenient, quo2, side_condition_lde, FillFn};
use std::sync::Arc;

/// Invertible affine map of F² with the x-axis mapped onto a designated line.
#[derive(Debug, Clone)]
pub struct AffineMap2 {
    /// column vectors of the matrix
    pub col1: [FieldElem; 2],
    pub col2: [FieldElem; 2],
    pub offset: [FieldElem; 2],
}

impl AffineMap2 {
    /// Canonical transform for a line: offset = the line's canonical base
    /// point, first column its direction, second column the first axis
    /// vector independent of it.
    pub fn from_line(t: &Tower, line: &Line) -> Result<AffineMap2> {
        let field = line.base[0].field;
        let zero = t.zero(field);
        let one = t.one(field);
        let candidates = [[one, zero], [zero, one]];
        for cand in candidates {
            let det = t.add(
                t.mul(line.dir[0], cand[1]),
                t.mul(line.dir[1], cand[0]),
            );
            if !det.is_zero() {
                return Ok(AffineMap2 {
                    col1: [line.dir[0], line.dir[1]],
                    col2: cand,
                    offset: [line.base[0], line.base[1]],
                });
            }
        }
        structural("line direction is degenerate")
    }

    pub fn apply(&self, t: &Tower, p: &[FieldElem]) -> Vec<FieldElem> {
        vec![
            t.add(
                self.offset[0],
                t.add(t.mul(self.col1[0], p[0]), t.mul(self.col2[0], p[1])),
            ),
            t.add(
                self.offset[1],
                t.add(t.mul(self.col1[1], p[0]), t.mul(self.col2[1], p[1])),
            ),
        ]
    }

    pub fn inverse_apply(&self, t: &Tower, p: &[FieldElem]) -> Result<Vec<FieldElem>> {
        // solve M u = p − offset
        let rhs = [t.add(p[0], self.offset[0]), t.add(p[1], self.offset[1])];
        let det = t.add(
            t.mul(self.col1[0], self.col2[1]),
            t.mul(self.col1[1], self.col2[0]),
        );
        let det_inv = t.inv(det)?;
        let u = t.mul(
            det_inv,
            t.add(t.mul(self.col2[1], rhs[0]), t.mul(self.col2[0], rhs[1])),
        );
        let v = t.mul(
            det_inv,
            t.add(t.mul(self.col1[1], rhs[0]), t.mul(self.col1[0], rhs[1])),
        );
        Ok(vec![u, v])
    }

    /// Compose a bivariate polynomial with this map: Q ∘ T.
    pub fn compose_poly(&self, t: &Tower, q: &MultiPoly) -> MultiPoly {
        let field = q.field;
        let mk = |off: FieldElem, c1: FieldElem, c2: FieldElem| {
            let mut p = MultiPoly::constant(off, 2);
            p = p.add(t, &MultiPoly::monomial(c1, 2, [1, 0, 0]));
            p = p.add(t, &MultiPoly::monomial(c2, 2, [0, 1, 0]));
            let _ = field;
            p
        };
        q.compose(
            t,
            &[
                mk(self.offset[0], self.col1[0], self.col2[0]),
                mk(self.offset[1], self.col1[1], self.col2[1]),
            ],
        )
    }
}

#[cfg(test)]
fn q_axis(t: &Tower, params: &ParamSet) -> Arc<Axis> {
    Axis::new(t.subfield_axis(params.q, params.q_prime).expect("q axis")).expect("distinct")
}

fn q_enc_axis(t: &Tower, params: &ParamSet) -> Arc<Axis> {
    Axis::new(
        t.subfield_axis(params.q_enc, params.q_prime)
            .expect("q_enc axis"),
    )
    .expect("distinct")
}

/// Deduplicate coordinates and pad with canonical unused values up to the
/// nominal size, so side subcubes (and with them message sizes and query
/// counts) are identical on every run.
pub fn pad_axis(
    t: &Tower,
    field: FieldId,
    coords: &[FieldElem],
    nominal: usize,
) -> Vec<FieldElem> {
    let mut out: Vec<FieldElem> = Vec::new();
    for &c in coords {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    let mut filler = 0u64;
    while out.len() < nominal {
        let cand = t.elem(field, filler);
        if !out.contains(&cand) {
            out.push(cand);
        }
        filler += 1;
    }
    out.sort_by_key(|e| e.bits);
    out
}

fn plane_from_flat(flat: &[FieldElem]) -> Plane {
    Plane {
        base: flat[0..3].to_vec(),
        dir1: flat[3..6].to_vec(),
        dir2: flat[6..9].to_vec(),
    }
}

fn line_from_flat(flat: &[FieldElem]) -> Line {
    Line {
        base: flat[0..2].to_vec(),
        dir: flat[2..4].to_vec(),
    }
}

// ---------------------------------------------------------------------------
// The plane-restriction Poly-IOP
// ---------------------------------------------------------------------------

pub struct RmPolyIop<'t> {
    pub tower: &'t Tower,
    pub params: ParamSet,
    /// total degree under test (6d)
    pub degree: i64,
    pub input: EvalTable,
    pub claimed: Option<MultiPoly>,
    pub root: bool,
}

impl RmPolyIop<'_> {
    fn t_planes(&self) -> usize {
        self.params.rm_t
    }

    fn t_points(&self) -> usize {
        self.params.rm_points_per_line
    }

    fn plane(&self, log: &DrawLog, i: usize) -> Plane {
        plane_from_flat(&log.get("planes")[9 * i..9 * i + 9])
    }

    fn line(&self, log: &DrawLog, i: usize) -> Line {
        line_from_flat(&log.get("lines")[4 * i..4 * i + 4])
    }

    fn line_params(&self, log: &DrawLog, i: usize) -> Vec<FieldElem> {
        let t_pts = self.t_points();
        log.get("line_params")[t_pts * i..t_pts * (i + 1)].to_vec()
    }
}

impl PolyIop for RmPolyIop<'_> {
    fn name(&self) -> String {
        "rm_poly".into()
    }

    fn rounds(&self) -> usize {
        2
    }

    fn slots(&self, round: usize) -> Vec<SlotSpec> {
        if round != 1 {
            return vec![];
        }
        let grid = GridDomain::power(self.params.q_prime, q_enc_axis(self.tower, &self.params), 2);
        (0..self.t_planes())
            .map(|i| SlotSpec {
                label: format!("Qp{i}"),
                round: 1,
                code: CodeSpec::rm_total(self.degree, grid.clone()),
                eps: self.params.eps_comp,
            })
            .collect()
    }

    fn make_draws(&self, round: usize, sess: &mut Session, log: &mut DrawLog) -> Result<()> {
        match round {
            0 => {
                // T planes in F_q^3, canonical representatives
                let mut rng = sess.stream("planes");
                let mut flat = Vec::new();
                for _ in 0..self.t_planes() {
                    let p = sample_plane(self.tower, self.params.q, self.params.q_prime, &mut rng);
                    flat.extend(p.base.iter().copied());
                    flat.extend(p.dir1.iter().copied());
                    flat.extend(p.dir2.iter().copied());
                }
                let flat = sess.log_draw("planes", flat)?;
                log.insert("planes", flat);
            }
            1 => {
                // T plane-local lines in F_q², t distinct parameters each
                let mut rng = sess.stream("lines");
                let mut flat = Vec::new();
                for _ in 0..self.t_planes() {
                    let l = sample_line(self.tower, self.params.q, self.params.q_prime, 2, &mut rng);
                    flat.extend(l.base.iter().copied());
                    flat.extend(l.dir.iter().copied());
                }
                let flat = sess.log_draw("lines", flat)?;
                log.insert("lines", flat);
                let mut params_flat = Vec::new();
                for i in 0..self.t_planes() {
                    let drawn = sess.v_draw_subfield_where(
                        &format!("line_params{i}"),
                        self.params.q,
                        self.params.q_prime,
                        self.t_points(),
                        |prev, c| !prev.contains(&c),
                    )?;
                    params_flat.extend(drawn);
                }
                log.insert("line_params", params_flat);
            }
            _ => {}
        }
        Ok(())
    }

    fn queries(&self, round: usize, log: &DrawLog) -> Vec<(String, Vec<FieldElem>)> {
        if round != 1 {
            return vec![];
        }
        let mut out = Vec::new();
        for i in 0..self.t_planes() {
            let line = self.line(log, i);
            for &u in &self.line_params(log, i) {
                out.push((format!("Qp{i}"), line.point(self.tower, u)));
            }
        }
        out
    }

    fn input_queries(&self, round: usize, log: &DrawLog) -> Vec<Vec<FieldElem>> {
        if round != 1 {
            return vec![];
        }
        let mut out = Vec::new();
        for i in 0..self.t_planes() {
            let plane = self.plane(log, i);
            let line = self.line(log, i);
            for &u in &self.line_params(log, i) {
                let z = line.point(self.tower, u);
                out.push(plane.point(self.tower, z[0], z[1]));
            }
        }
        out
    }

    fn honest_polys(&self, round: usize, log: &DrawLog) -> Result<Vec<MultiPoly>> {
        if round != 1 {
            return Ok(vec![]);
        }
        let f_hat = self
            .claimed
            .clone()
            .ok_or_else(|| crate::error::Error::Structural("prover needs a claimed poly".into()))?;
        Ok((0..self.t_planes())
            .map(|i| self.plane(log, i).restrict_poly(self.tower, &f_hat))
            .collect())
    }

    fn input_value(&self, point: &[FieldElem]) -> Result<FieldElem> {
        self.input
            .get(point)
            .ok_or_else(|| crate::error::Error::Structural("input query off domain".into()))
    }

    fn input_is_root(&self) -> bool {
        self.root
    }

    fn decide(&self, log: &DrawLog, answers: &Answers) -> Result<Verdict> {
        for i in 0..self.t_planes() {
            let plane = self.plane(log, i);
            let line = self.line(log, i);
            for &u in &self.line_params(log, i) {
                let z = line.point(self.tower, u);
                let ambient = plane.point(self.tower, z[0], z[1]);
                if answers.proof(&format!("Qp{i}"), &z) != answers.input(&ambient) {
                    return Ok(Verdict::Reject(format!("plane {i} line check failed")));
                }
            }
        }
        Ok(Verdict::Accept)
    }

    fn state_after(
        &self,
        round: usize,
        log: &DrawLog,
        sent: &[(SlotSpec, MultiPoly)],
    ) -> Option<(bool, String)> {
        if round != 1 {
            // the T/2-majority plane state needs an exact bivariate agreement
            // oracle; out of reach at this grid size, so the trace is partial
            return None;
        }
        let t = self.tower;
        let mut failures = 0;
        for i in 0..self.t_planes() {
            let q = &sent.iter().find(|(s, _)| s.label == format!("Qp{i}"))?.1;
            let plane = self.plane(log, i);
            let line = self.line(log, i);
            for &u in &self.line_params(log, i) {
                let z = line.point(t, u);
                let ambient = plane.point(t, z[0], z[1]);
                if Some(q.eval(t, &z)) != self.input.get(&ambient) {
                    failures += 1;
                }
            }
        }
        Some((failures > 0, format!("{failures} line-point failures")))
    }
}

// ---------------------------------------------------------------------------
// The affine-transform batched IOPP
// ---------------------------------------------------------------------------

pub struct TrmBatch<'t> {
    pub tower: &'t Tower,
    pub params: ParamSet,
    pub degree: i64,
}

impl BatchedIopp for TrmBatch<'_> {
    fn name(&self) -> String {
        "trm_batch".into()
    }

    fn run(&self, sess: &mut Session, inputs: &[BatchInput], log: &DrawLog) -> Result<Verdict> {
        let t = self.tower;
        let t_pts = self.params.rm_points_per_line;
        let d6 = self.degree;
        sess.scoped("trm_batch", |sess| {
            // the check line for plane i, from the Poly-IOP's own draws
            let lines_flat = log.get("lines").to_vec();
            let enc_axis = q_enc_axis(t, &self.params);
            let grid2 = GridDomain::power(self.params.q_prime, enc_axis.clone(), 2);
            let mut restricted_tables: Vec<EvalTable> = Vec::new();
            let mut restricted_polys: Vec<Option<UniPoly>> = Vec::new();
            for (i, input) in inputs.iter().enumerate() {
                let line = line_from_flat(&lines_flat[4 * i..4 * i + 4]);
                let tmap = AffineMap2::from_line(t, &line)?;
                // transported side condition: h'(u) = h(T(u))
                let mut tpoints = Vec::new();
                for p in &input.side.points {
                    tpoints.push(tmap.inverse_apply(t, p)?);
                }
                let tside = SideCondition::new(tpoints.clone(), input.side.values.clone())?;
                // subcube (t+1) × 2, padded if the anchor degenerates
                let xs: Vec<FieldElem> = tpoints.iter().map(|p| p[0]).collect();
                let ys: Vec<FieldElem> = tpoints.iter().map(|p| p[1]).collect();
                let a_set = pad_axis(t, self.params.q_prime, &xs, t_pts + 1);
                let b_set = pad_axis(t, self.params.q_prime, &ys, 2);
                // transported claimed polynomial
                let q_claimed = input.claimed.as_ref().map(|cq| tmap.compose_poly(t, cq));
                // side completion over the subcube
                let axes = [a_set.clone(), b_set.clone()];
                let mut to_fill = Vec::new();
                for &x in &a_set {
                    for &y in &b_set {
                        let pt = vec![x, y];
                        if !tside.points.contains(&pt) {
                            to_fill.push(pt);
                        }
                    }
                }
                let cl = q_claimed.clone();
                let pts = to_fill.clone();
                let completion = sess.p_plain(&format!("h{i}_completion"), to_fill.len(), move || {
                    let cq = cl.expect("claimed");
                    pts.iter().map(|p| cq.eval(t, p)).collect()
                })?;
                sess.count_proof(to_fill.len() as u64);
                let mut h_vals = Vec::new();
                let mut fill_iter = completion.iter();
                for &x in &a_set {
                    for &y in &b_set {
                        let pt = vec![x, y];
                        if let Some(j) = tside.points.iter().position(|p| *p == pt) {
                            h_vals.push(tside.values[j]);
                        } else {
                            h_vals.push(*fill_iter.next().expect("completion"));
                        }
                    }
                }
                let (h_hat, h_tilde) = side_condition_lde(t, &axes, &h_vals, &grid2)?;
                // honest decomposition of the transported polynomial
                let parts = match &q_claimed {
                    Some(cq) => Some(decompose_bi_lenient(
                        t,
                        cq,
                        &a_set,
                        &b_set,
                        &h_hat,
                        enc_axis.clone(),
                    )?),
                    None => None,
                };
                let g1_poly = parts.as_ref().map(|(g1, _, _)| g1.clone());
                let gp = g1_poly.clone();
                let g2c = grid2.clone();
                let g1_id = sess.p_oracle(&format!("g{i}_1"), &grid2, move || {
                    Ok(gp.expect("claimed").eval_on_grid(t, &g2c))
                })?;
                let fill_dom = GridDomain::new(
                    self.params.q_prime,
                    vec![enc_axis.clone(), Axis::new(b_set.clone())?],
                );
                let fp = parts.as_ref().map(|(_, _, f)| f.clone());
                let fd = fill_dom.clone();
                let fill_id = sess.p_oracle(&format!("fill{i}"), &fill_dom, move || {
                    EvalTable::new(fd, fp.expect("claimed").values.clone())
                })?;
                let fill = FillFn::new(
                    vec![enc_axis.clone()],
                    b_set.clone(),
                    sess.oracle_table(fill_id).values.clone(),
                )?;
                // transported oracle Q' = Q ∘ T, then the quotient
                let q_table = sess.oracle_table(input.oracle).clone();
                let mut qp_vals = Vec::with_capacity(grid2.size());
                for pt in grid2.iter_points() {
                    let image = tmap.apply(t, &pt);
                    qp_vals.push(q_table.get(&image).ok_or_else(|| {
                        crate::error::Error::Structural("transform left the grid".into())
                    })?);
                }
                let qp_table = EvalTable::new(grid2.clone(), qp_vals)?;
                let g1_table = sess.oracle_table(g1_id).clone();
                let shifted = qp_table.map(|idx, v| {
                    let dims = qp_table.domain.dims();
                    let x = qp_table.domain.axes[0].points[idx / dims[1]];
                    let va = vanishing_eval(t, &a_set, x);
                    t.add(v, t.add(t.mul(va, g1_table.values[idx]), h_tilde.values[idx]))
                });
                let g2_table = quo2(t, &shifted, &b_set, &fill)?;
                // F_i = combine_tot(g1, g2 → 6d)
                let mut rng = sess.stream(&format!("combineF{i}"));
                let coeffs = prox_sample(t, 2, self.params.q_prime, true, &mut rng);
                let mut flat = Vec::new();
                for c in coeffs.xi.iter().chain(coeffs.xi0.iter()) {
                    flat.push(*c);
                }
                sess.log_draw(&format!("combineF{i}"), flat)?;
                let ds = [d6 - a_set.len() as i64, d6 - b_set.len() as i64];
                let f_table = combine_tot(t, &[&g1_table, &g2_table], &ds, d6, &coeffs)?;
                let f_poly = match (&g1_poly, &parts) {
                    (Some(g1), Some((_, g2, _))) => {
                        Some(combine_tot_poly(t, &[g1, g2], &ds, d6, &coeffs))
                    }
                    _ => None,
                };
                // 10 line restrictions of F_i
                let mut line_rng = sess.stream(&format!("glines{i}"));
                let mut coords = Vec::new();
                let mut flines = Vec::new();
                for _ in 0..10 {
                    let l = sample_line(t, self.params.q_enc, self.params.q_prime, 2, &mut line_rng);
                    coords.extend(l.base.iter().copied());
                    coords.extend(l.dir.iter().copied());
                    flines.push(l);
                }
                sess.log_draw(&format!("glines{i}"), coords)?;
                for l in &flines {
                    restricted_tables.push(l.restrict_table(t, &f_table, self.params.q_enc)?);
                    restricted_polys.push(
                        f_poly
                            .as_ref()
                            .map(|fp2| l.restrict_poly(t, fp2).to_uni()),
                    );
                }
            }
            // G = Σ ξ_{i,j} · F_i|_{L_{i,j}}
            let k = restricted_tables.len();
            let mut rng = sess.stream("mixG");
            let coeffs = prox_sample(t, k, self.params.q_prime, false, &mut rng);
            sess.log_draw("mixG", coeffs.xi.clone())?;
            let enc_grid1 = GridDomain::new(self.params.q_prime, vec![enc_axis.clone()]);
            let mut g_table = EvalTable::constant(t, enc_grid1, t.zero(self.params.q_prime));
            for (tbl, &xi) in restricted_tables.iter().zip(&coeffs.xi) {
                g_table = g_table.add_scaled(t, tbl, xi)?;
            }
            let g_poly: Option<UniPoly> = if restricted_polys.iter().all(|p| p.is_some()) {
                let mut acc = UniPoly::zero(self.params.q_prime);
                for (p, &xi) in restricted_polys.iter().zip(&coeffs.xi) {
                    acc = acc.add(t, &p.as_ref().unwrap().scale(t, xi));
                }
                Some(acc)
            } else {
                None
            };
            // degree-lift 6d onto the recursion schedule and recurse
            let pad = self.params.pad_degree as i64;
            let mut rng2 = sess.stream("pad");
            let pad_coeffs = prox_sample(t, 1, self.params.q_prime, true, &mut rng2);
            let mut flat2 = Vec::new();
            for c in pad_coeffs.xi.iter().chain(pad_coeffs.xi0.iter()) {
                flat2.push(*c);
            }
            sess.log_draw("pad", flat2)?;
            let g_padded = combine_uni(t, &[&g_table], &[d6], pad, &pad_coeffs)?;
            let g_pad_poly = g_poly
                .map(|gp2| combine_uni_poly(t, &[&gp2], &[d6], pad, &pad_coeffs).to_multi(1, 0));
            let k_level = self
                .params
                .level_for_degree(self.params.pad_degree)
                .expect("pad degree on the schedule")
                .k;
            let next = IoppInput::derived(g_padded, g_pad_poly);
            rs_iopp(sess, &next, k_level)
        })
    }
}

/// The constant-rate Reed-Muller IOPP: compile(rm_poly, trm_batch).
pub fn rm_iopp(sess: &mut Session, input: &IoppInput, degree: i64) -> Result<Verdict> {
    let tower = sess.tower;
    let params = sess.params.clone();
    let iop = RmPolyIop {
        tower,
        params: params.clone(),
        degree,
        input: input.table.clone(),
        claimed: input.claimed.clone(),
        root: input.root,
    };
    let batch = TrmBatch {
        tower,
        params,
        degree,
    };
    compile_run(sess, &iop, &batch)
}

pub fn rm_iopp_budget(params: &ParamSet, root: bool) -> QueryCounters {
    let t_planes = params.rm_t as u64;
    let t_pts = params.rm_points_per_line as u64;
    let mut c = QueryCounters::default();
    c.proof_queries += t_planes; // anchors
    c.proof_queries += t_planes * t_pts; // forwarded line-point answers
    if root {
        c.input_queries += t_planes * t_pts;
    } else {
        c.proof_queries += t_planes * t_pts;
    }
    // per-plane side completion over the (t+1)×2 subcube
    c.proof_queries += t_planes * (2 * (t_pts + 1) - (t_pts + 1));
    let inner = rs_iopp_budget(params, 2, false);
    c.proof_queries += inner.proof_queries;
    c.input_queries += inner.input_queries;
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{max_agreement_exact, CodeSpec, DEFAULT_ENUM_CAP};
    use crate::rng::Seed;

    fn setup() -> (Tower, ParamSet) {
        (Tower::default_tower(), ParamSet::desk27())
    }

    fn q_grid3(t: &Tower, params: &ParamSet) -> GridDomain {
        GridDomain::power(params.q_prime, q_axis(t, params), 3)
    }

    fn random_deg12(t: &Tower, params: &ParamSet, seed: u64) -> MultiPoly {
        let mut rng = Seed::from_u64(seed).stream("mk12");
        let mut p = MultiPoly::zero(params.q_prime, 3);
        for _ in 0..25 {
            let e1 = rng.below(7) as u16;
            let e2 = rng.below((13 - e1 as u64).min(7)) as u16;
            let e3 = rng.below((13 - e1 as u64 - e2 as u64).min(7)) as u16;
            p = p.add(
                t,
                &MultiPoly::monomial(t.sample(params.q_prime, &mut rng), 3, [e1, e2, e3]),
            );
        }
        p
    }

    #[test]
    fn affine_map_round_trip_and_transport() {
        let (t, params) = setup();
        let mut rng = Seed::from_u64(7).stream("affine");
        for _ in 0..30 {
            let line = sample_line(&t, params.q_enc, params.q_prime, 2, &mut rng);
            let tm = AffineMap2::from_line(&t, &line).unwrap();
            // x-axis maps onto the line
            let u = t.sample(params.q_prime, &mut rng);
            let img = tm.apply(&t, &[u, t.zero(params.q_prime)]);
            let back = tm.inverse_apply(&t, &img).unwrap();
            assert_eq!(back, vec![u, t.zero(params.q_prime)]);
            // image of the axis lies on the line (canonicalize both)
            let l2 = Line::canonical(&t, tm.offset.as_ref(), tm.col1.as_ref()).unwrap();
            assert_eq!(l2, line);
            // composition round trip on a random point
            let p = vec![
                t.sample(params.q_prime, &mut rng),
                t.sample(params.q_prime, &mut rng),
            ];
            assert_eq!(tm.apply(&t, &tm.inverse_apply(&t, &p).unwrap()), p);
        }
    }

    #[test]
    fn transport_invariance_of_side_conditioned_agreement() {
        // agr(Q, code | h) equals agr(Q∘T, code | h∘T) on a tiny exact domain
        let (t, params) = setup();
        let f = params.q_prime;
        let axis = Axis::new(t.subfield_axis(crate::field::FieldId::F2x2, f).unwrap()).unwrap();
        let dom = GridDomain::power(f, axis, 2);
        let spec = CodeSpec::rm_total(2, dom.clone());
        let mut rng = Seed::from_u64(9).stream("transport");
        for trial in 0..20 {
            let vals: Vec<_> = (0..16).map(|_| t.sample(f, &mut rng)).collect();
            let q_table = EvalTable::new(dom.clone(), vals).unwrap();
            // a line over GF(4)² and its canonical transform
            let line = sample_line(&t, crate::field::FieldId::F2x2, f, 2, &mut rng);
            let tm = AffineMap2::from_line(&t, &line).unwrap();
            // transported table
            let mut tv = Vec::new();
            for pt in dom.iter_points() {
                let image = tm.apply(&t, &pt);
                tv.push(q_table.get(&image).unwrap());
            }
            let qt_table = EvalTable::new(dom.clone(), tv).unwrap();
            // side condition at one out-of-domain point
            let z = vec![t.elem(f, 0x8000 + trial), t.elem(f, 0x4000)];
            let hv = t.sample(f, &mut rng);
            let side = SideCondition::new(vec![z.clone()], vec![hv]).unwrap();
            let z_back = tm.inverse_apply(&t, &z).unwrap();
            let side_t = SideCondition::new(vec![z_back], vec![hv]).unwrap();
            let a1 = max_agreement_exact(&t, &q_table, &spec, Some(&side), DEFAULT_ENUM_CAP)
                .unwrap();
            let a2 = max_agreement_exact(&t, &qt_table, &spec, Some(&side_t), DEFAULT_ENUM_CAP)
                .unwrap();
            assert_eq!(a1, a2, "trial {trial}");
        }
    }

    #[test]
    fn rm_iopp_honest_accepts_with_budget() {
        let (t, params) = setup();
        for seed in 0..3 {
            let p = random_deg12(&t, &params, seed);
            let dom = q_grid3(&t, &params);
            let table = p.eval_on_grid(&t, &dom);
            let input = IoppInput::root(table, Some(p));
            let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), None);
            let v = rm_iopp(&mut sess, &input, 12).unwrap();
            assert!(v.accepted(), "seed {seed}: {v:?}");
            assert_eq!(sess.counters, rm_iopp_budget(&params, true), "seed {seed}");
        }
    }

    #[test]
    fn rm_iopp_far_input_rejected() {
        let (t, params) = setup();
        let f = params.q_prime;
        let mut rejected = 0;
        let runs = 20;
        for seed in 0..runs {
            let mut rng = Seed::from_u64(seed).stream("rmfar");
            let dom = q_grid3(&t, &params);
            let values: Vec<_> = (0..dom.size()).map(|_| t.sample(f, &mut rng)).collect();
            let table = EvalTable::new(dom, values).unwrap();
            // well-shaped pretense: restrict-to-grid of a low-degree guess
            let claimed = random_deg12(&t, &params, seed + 500);
            let input = IoppInput::root(table, Some(claimed));
            let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), None);
            let v = rm_iopp(&mut sess, &input, 12).unwrap();
            if !v.accepted() {
                rejected += 1;
            }
        }
        assert!(rejected >= runs * 9 / 10, "only {rejected}/{runs} rejections");
    }
}
