//! The Poly-IOP model and the compile transformation.
//!
//! A [`PolyIop`] describes an idealized protocol whose prover messages are
//! polynomials from prespecified code families, whose verifier messages are
//! labeled uniform draws, and whose queries and decision are deterministic in
//! those draws. [`run_poly_iop`] executes it directly (polynomials travel
//! whole). [`compile_run`] turns it into a legitimate IOP: per round the
//! prover sends evaluations over the slot domains, the verifier anchors each
//! oracle with an out-of-domain sample, every Poly-IOP query is forwarded and
//! answered in plain, the decision phase is simulated on the answered values,
//! and the answers become side conditions for a batched code-membership IOPP.

use std::collections::BTreeMap;

use crate::codes::{list_decode_rs, CodeKind, CodeSpec, DegreeBound, SideCondition};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::MultiPoly;
use crate::ratio::Ratio;

use super::{Session, Verdict};

#[derive(Debug, Clone)]
pub struct SlotSpec {
    pub label: String,
    pub round: usize,
    pub code: CodeSpec,
    /// the compile agreement parameter ε for this slot
    pub eps: f64,
}

/// Labeled verifier draws, in insertion order per label.
#[derive(Debug, Clone, Default)]
pub struct DrawLog {
    map: BTreeMap<String, Vec<FieldElem>>,
}

impl DrawLog {
    pub fn new() -> DrawLog {
        DrawLog::default()
    }

    pub fn insert(&mut self, label: &str, values: Vec<FieldElem>) {
        self.map.insert(label.to_string(), values);
    }

    pub fn get(&self, label: &str) -> &[FieldElem] {
        self.map
            .get(label)
            .map(|v| v.as_slice())
            .unwrap_or_else(|| panic!("missing draw {label}"))
    }

    pub fn try_get(&self, label: &str) -> Option<&[FieldElem]> {
        self.map.get(label).map(|v| v.as_slice())
    }
}

/// Kinds of draws a Poly-IOP declares (informational; protocols draw through
/// the session themselves so they can apply rejection rules).
#[derive(Debug, Clone)]
pub enum DrawKind {
    Ambient(usize),
    Subfield(crate::field::FieldId, usize),
}

#[derive(Debug, Clone)]
pub struct DrawSpec {
    pub label: String,
    pub kind: DrawKind,
}

fn point_key(point: &[FieldElem]) -> Vec<u32> {
    point.iter().map(|p| p.bits).collect()
}

/// Query answers collected during a run.
#[derive(Debug, Clone, Default)]
pub struct Answers {
    proof: BTreeMap<(String, Vec<u32>), FieldElem>,
    input: BTreeMap<Vec<u32>, FieldElem>,
}

impl Answers {
    pub fn put_proof(&mut self, slot: &str, point: &[FieldElem], v: FieldElem) {
        self.proof.insert((slot.to_string(), point_key(point)), v);
    }

    pub fn proof(&self, slot: &str, point: &[FieldElem]) -> FieldElem {
        *self
            .proof
            .get(&(slot.to_string(), point_key(point)))
            .unwrap_or_else(|| panic!("missing proof answer for {slot}"))
    }

    pub fn put_input(&mut self, point: &[FieldElem], v: FieldElem) {
        self.input.insert(point_key(point), v);
    }

    pub fn input(&self, point: &[FieldElem]) -> FieldElem {
        *self
            .input
            .get(&point_key(point))
            .unwrap_or_else(|| panic!("missing input answer"))
    }
}

/// An idealized Poly-IOP. Implementors own their input oracle and (when
/// proving) the prover's claimed low-degree extensions.
pub trait PolyIop {
    fn name(&self) -> String;
    fn rounds(&self) -> usize;
    fn slots(&self, round: usize) -> Vec<SlotSpec>;
    /// Verifier draws at the end of `round`; implementations draw through the
    /// session (labels nested under the current scope) and record into `log`.
    fn make_draws(&self, round: usize, sess: &mut Session, log: &mut DrawLog) -> Result<()>;
    /// Proof queries issued after the draws of `round`: (slot label, point).
    fn queries(&self, round: usize, log: &DrawLog) -> Vec<(String, Vec<FieldElem>)>;
    /// Input-oracle points read after the draws of `round`.
    fn input_queries(&self, round: usize, log: &DrawLog) -> Vec<Vec<FieldElem>>;
    /// Honest prover polynomials for `round`, given draws of earlier rounds.
    fn honest_polys(&self, round: usize, log: &DrawLog) -> Result<Vec<MultiPoly>>;
    fn input_value(&self, point: &[FieldElem]) -> Result<FieldElem>;
    /// Whether the input oracle is the session's root input; reads of a root
    /// input count as input queries, reads of a derived one as proof queries.
    fn input_is_root(&self) -> bool {
        true
    }
    fn decide(&self, log: &DrawLog, answers: &Answers) -> Result<Verdict>;
    /// Round-by-round doomed predicate after `round`, evaluated on the sent
    /// polynomials; None when not implemented (trace marked partial).
    fn state_after(
        &self,
        _round: usize,
        _log: &DrawLog,
        _sent: &[(SlotSpec, MultiPoly)],
    ) -> Option<(bool, String)> {
        None
    }
}

/// A batched code-membership IOPP: tests each input oracle against its code
/// family under its side conditions, at the given agreement parameter.
pub struct BatchInput {
    pub oracle: usize,
    pub side: SideCondition,
    pub code: CodeSpec,
    pub eps: f64,
    /// prover-side claimed extension (None in replay)
    pub claimed: Option<MultiPoly>,
}

pub trait BatchedIopp {
    fn name(&self) -> String;
    fn run(&self, sess: &mut Session, inputs: &[BatchInput], log: &DrawLog) -> Result<Verdict>;
}

/// Execute a Poly-IOP in the idealized model: polynomials are sent whole,
/// queries are answered by evaluating them, shape violations reject.
pub fn run_poly_iop(sess: &mut Session, iop: &dyn PolyIop) -> Result<Verdict> {
    let name = iop.name();
    sess.scoped(&name, |sess| {
        let mut log = DrawLog::new();
        let mut answers = Answers::default();
        let mut sent: Vec<(SlotSpec, MultiPoly)> = Vec::new();
        for round in 0..iop.rounds() {
            let slots = iop.slots(round);
            let honest: Option<Vec<MultiPoly>> = if sess.is_proving() {
                Some(iop.honest_polys(round, &log)?)
            } else {
                None
            };
            for (j, slot) in slots.iter().enumerate() {
                let hj = honest.as_ref().map(|h| h[j].clone());
                let poly = sess.p_poly(&slot.label, || {
                    Ok(hj.expect("honest poly available in prove mode"))
                })?;
                if poly.arity != slot.code.arity() {
                    return Ok(Verdict::Reject(format!("shape: {} arity", slot.label)));
                }
                if !slot.code.poly_in_family(&poly) {
                    return Ok(Verdict::Reject(format!(
                        "shape: {} degree overflow",
                        slot.label
                    )));
                }
                sent.push((slot.clone(), poly));
            }
            iop.make_draws(round, sess, &mut log)?;
            for (slot_label, point) in iop.queries(round, &log) {
                let poly = &sent
                    .iter()
                    .find(|(s, _)| s.label == slot_label)
                    .unwrap_or_else(|| panic!("query to unknown slot {slot_label}"))
                    .1;
                let v = poly.eval(sess.tower, &point);
                sess.count_proof(1);
                answers.put_proof(&slot_label, &point, v);
            }
            for point in iop.input_queries(round, &log) {
                let v = iop.input_value(&point)?;
                if iop.input_is_root() {
                    sess.count_input(1);
                } else {
                    sess.count_proof(1);
                }
                answers.put_input(&point, v);
            }
            if sess.instrument {
                match iop.state_after(round, &log, &sent) {
                    Some((doomed, witness)) => {
                        sess.mark_state(&format!("round{round}"), doomed, witness)
                    }
                    None => sess.mark_partial(),
                }
            }
        }
        iop.decide(&log, &answers)
    })
}

/// The compile transformation. Anchors are drawn uniformly from the full
/// ambient space; side conditions collect the anchor and every forwarded
/// query with the prover's plain answers. The decision phase simulates the
/// Poly-IOP verifier on those answers; if it accepts, the batched IOPP runs
/// on (oracle, side condition, family, ε) per slot.
pub fn compile_run(
    sess: &mut Session,
    iop: &dyn PolyIop,
    batched: &dyn BatchedIopp,
) -> Result<Verdict> {
    let name = format!("compile[{}]", iop.name());
    sess.scoped(&name, |sess| {
        let mut log = DrawLog::new();
        let mut answers = Answers::default();
        // per slot: oracle id, claimed poly, side points/values
        let mut slot_specs: Vec<SlotSpec> = Vec::new();
        let mut oracle_ids: Vec<usize> = Vec::new();
        let mut claimed_polys: Vec<Option<MultiPoly>> = Vec::new();
        let mut side_acc: Vec<(Vec<Vec<FieldElem>>, Vec<FieldElem>)> = Vec::new();
        for round in 0..iop.rounds() {
            let slots = iop.slots(round);
            let honest: Option<Vec<MultiPoly>> = if sess.is_proving() {
                Some(iop.honest_polys(round, &log)?)
            } else {
                None
            };
            let base = slot_specs.len();
            for (j, slot) in slots.iter().enumerate() {
                let claimed = honest.as_ref().map(|h| h[j].clone());
                let dom = slot.code.domain.clone();
                let tower = sess.tower;
                let cl = claimed.clone();
                let id = sess.p_oracle(&slot.label, &dom, || {
                    Ok(cl
                        .expect("claimed poly available in prove mode")
                        .eval_on_grid(tower, &dom))
                })?;
                slot_specs.push(slot.clone());
                oracle_ids.push(id);
                claimed_polys.push(claimed);
                side_acc.push((vec![], vec![]));
            }
            // anchoring: one out-of-domain sample per slot of this round
            for (j, slot) in slots.iter().enumerate() {
                let m = slot.code.arity();
                let anchor =
                    sess.v_draw(&format!("anchor/{}", slot.label), slot.code.value_field, m)?;
                log.insert(&format!("anchor/{}", slot.label), anchor.clone());
                let cl = claimed_polys[base + j].clone();
                let tower = sess.tower;
                let a2 = anchor.clone();
                let zeta = sess.p_plain(&format!("zeta/{}", slot.label), 1, || {
                    vec![cl.expect("claimed").eval(tower, &a2)]
                })?;
                sess.count_proof(1);
                answers.put_proof(&slot.label, &anchor, zeta[0]);
                side_acc[base + j].0.push(anchor);
                side_acc[base + j].1.push(zeta[0]);
            }
            // anchoring state, when instrumented: after the anchor draw there
            // should be at most one ε-close family member matching it
            if sess.instrument {
                for (j, slot) in slots.iter().enumerate() {
                    anchoring_state(sess, slot, oracle_ids[base + j], &log);
                }
            }
            // the Poly-IOP verifier message and forwarded queries
            iop.make_draws(round, sess, &mut log)?;
            for (qi, (slot_label, point)) in iop.queries(round, &log).iter().enumerate() {
                let idx = slot_specs
                    .iter()
                    .position(|s| s.label == *slot_label)
                    .unwrap_or_else(|| panic!("query to unknown slot {slot_label}"));
                let cl = claimed_polys[idx].clone();
                let tower = sess.tower;
                let p2 = point.clone();
                let ans = sess.p_plain(&format!("ans{qi}/{slot_label}"), 1, || {
                    vec![cl.expect("claimed").eval(tower, &p2)]
                })?;
                sess.count_proof(1);
                answers.put_proof(slot_label, point, ans[0]);
                side_acc[idx].0.push(point.clone());
                side_acc[idx].1.push(ans[0]);
            }
            for point in iop.input_queries(round, &log) {
                let v = iop.input_value(&point)?;
                if iop.input_is_root() {
                    sess.count_input(1);
                } else {
                    sess.count_proof(1);
                }
                answers.put_input(&point, v);
            }
        }
        // decision phase: simulate the Poly-IOP verifier on the answered values
        let sim = iop.decide(&log, &answers)?;
        if let Verdict::Reject(why) = sim {
            return Ok(Verdict::Reject(format!("decision: {why}")));
        }
        // side conditions and the batched membership test
        let mut inputs = Vec::new();
        for (((spec, id), claimed), (points, values)) in slot_specs
            .iter()
            .zip(&oracle_ids)
            .zip(&claimed_polys)
            .zip(&side_acc)
        {
            let side = SideCondition::new(points.clone(), values.clone())?;
            inputs.push(BatchInput {
                oracle: *id,
                side,
                code: spec.code.clone(),
                eps: spec.eps,
                claimed: claimed.clone(),
            });
        }
        batched.run(sess, &inputs, &log)
    })
}

/// Compile State 1 evaluation: no two ε-close codewords agree at the anchor.
/// Exact only for univariate families under the cap; otherwise the trace is
/// marked partial.
fn anchoring_state(sess: &mut Session, slot: &SlotSpec, oracle: usize, log: &DrawLog) {
    let anchor = log.get(&format!("anchor/{}", slot.label)).to_vec();
    if slot.code.kind != CodeKind::Rs {
        sess.mark_partial();
        return;
    }
    let d = match &slot.code.degree {
        DegreeBound::Total(d) => *d,
        _ => {
            sess.mark_partial();
            return;
        }
    };
    let table = sess.oracle_table(oracle).clone();
    let threshold = Ratio::new(
        (slot.eps.max(0.0) * 1024.0).round() as u64,
        1024,
    );
    let cap = sess.params.enumeration_cap;
    match list_decode_rs(sess.tower, &table, d, None, threshold, cap) {
        Ok(list) => {
            let tower = sess.tower;
            let mut collision = false;
            for (i, p) in list.iter().enumerate() {
                for q in &list[i + 1..] {
                    if p.eval(tower, anchor[0]) == q.eval(tower, anchor[0]) {
                        collision = true;
                    }
                }
            }
            sess.mark_state(
                &format!("anchor-state/{}", slot.label),
                !collision,
                format!("list size {}", list.len()),
            );
        }
        Err(Error::Capability(_)) | Err(Error::Parameter(_)) => sess.mark_partial(),
        Err(_) => sess.mark_partial(),
    }
}
