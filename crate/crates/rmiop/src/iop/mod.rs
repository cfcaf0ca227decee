//! Interactive transcript machinery: sessions, labeled verifier randomness,
//! oracle storage, query accounting, round-by-round state instrumentation,
//! and the Poly-IOP → IOP compile transformation.
//!
//! A protocol is ordinary Rust code driving a [`Session`]. Prover messages go
//! through `p_oracle` / `p_plain` / `p_poly`, which in proving mode invoke an
//! honest closure (optionally mutated by a scripted adversary) and in replay
//! mode read the recorded transcript instead. Verifier randomness derives
//! from (seed, hierarchical label), so a replayed session regenerates the
//! same draws and a transcript is a pure function of (roles, seed, input).

pub mod compile;
pub mod params;
pub mod transcript;

pub use compile::{
    compile_run, run_poly_iop, Answers, BatchInput, BatchedIopp, DrawKind, DrawLog, DrawSpec,
    PolyIop, SlotSpec,
};
pub use params::{check_compile_requirements, requirement_report, ParamSet, RecursionLevel};
pub use transcript::{read_transcript, write_transcript, Entry, Transcript};

use crate::error::{structural, Error, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::poly::{EvalTable, GridDomain, MultiPoly};
use crate::rng::{DrawStream, Seed};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(String),
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Deviation strategies for scripted adversaries. Scripts are data: one
/// deviation names the message label it poisons and how.
#[derive(Debug, Clone)]
pub enum Strategy {
    /// flip `points` table entries to fresh random values
    CorruptTable { points: usize },
    /// replace the plain value at `index` with a fresh random value
    CorruptValue { index: usize },
    /// add c·x^exps on top of an oracle message or sent polynomial
    DegreeInflate { exps: [u16; 3] },
    /// misreport a claimed sum (mechanically a CorruptValue at index 0)
    SumMisreport,
    /// answer an anchor inconsistently with every nearby codeword
    AnchorEquivocate,
}

#[derive(Debug, Clone)]
pub struct Deviation {
    /// applies to every message whose full label contains this fragment
    pub label_contains: String,
    pub strategy: Strategy,
}

/// A replayable adversary: honest everywhere except at the listed deviations.
#[derive(Debug, Clone)]
pub struct AdversaryScript {
    pub name: String,
    pub deviations: Vec<Deviation>,
}

impl AdversaryScript {
    pub fn honest() -> AdversaryScript {
        AdversaryScript {
            name: "honest".into(),
            deviations: vec![],
        }
    }

    pub fn single(name: &str, label_contains: &str, strategy: Strategy) -> AdversaryScript {
        AdversaryScript {
            name: name.into(),
            deviations: vec![Deviation {
                label_contains: label_contains.into(),
                strategy,
            }],
        }
    }

    fn matching(&self, label: &str) -> Option<&Deviation> {
        self.deviations
            .iter()
            .find(|d| label.contains(&d.label_contains))
    }
}

/// Exact query accounting. Proof queries cover prover plain answers and reads
/// of stored or derived prover material; input queries cover reads of the
/// protocol's designated input oracle. Derived-function reads are charged one
/// query at the point the protocol reads them (the O(1) simulation constant
/// is fixed at 1).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounters {
    pub proof_queries: u64,
    pub input_queries: u64,
}

#[derive(Debug, Clone)]
pub struct StateRecord {
    pub label: String,
    pub doomed: bool,
    pub witness: String,
}

enum Mode<'a> {
    Prove { adversary: Option<&'a AdversaryScript> },
    Replay { entries: &'a [Entry], cursor: usize },
}

pub struct Session<'a> {
    pub tower: &'a Tower,
    pub params: &'a ParamSet,
    seed: Seed,
    path: Vec<String>,
    mode: Mode<'a>,
    pub entries: Vec<Entry>,
    pub counters: QueryCounters,
    pub instrument: bool,
    pub states: Vec<StateRecord>,
    pub partial_trace: bool,
    oracles: Vec<(String, EvalTable)>,
}

impl<'a> Session<'a> {
    pub fn prove(
        tower: &'a Tower,
        params: &'a ParamSet,
        seed: Seed,
        adversary: Option<&'a AdversaryScript>,
    ) -> Session<'a> {
        Session {
            tower,
            params,
            seed,
            path: vec![],
            mode: Mode::Prove { adversary },
            entries: vec![],
            counters: QueryCounters::default(),
            instrument: false,
            states: vec![],
            partial_trace: false,
            oracles: vec![],
        }
    }

    pub fn replay(
        tower: &'a Tower,
        params: &'a ParamSet,
        seed: Seed,
        entries: &'a [Entry],
    ) -> Session<'a> {
        Session {
            tower,
            params,
            seed,
            path: vec![],
            mode: Mode::Replay { entries, cursor: 0 },
            entries: vec![],
            counters: QueryCounters::default(),
            instrument: false,
            states: vec![],
            partial_trace: false,
            oracles: vec![],
        }
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    /// Run a protocol frame under a path segment; labels nest underneath.
    pub fn scoped<R>(&mut self, name: &str, f: impl FnOnce(&mut Session<'a>) -> R) -> R {
        self.path.push(name.to_string());
        let out = f(self);
        self.path.pop();
        out
    }

    pub fn label(&self, local: &str) -> String {
        if self.path.is_empty() {
            local.to_string()
        } else {
            format!("{}/{}", self.path.join("/"), local)
        }
    }

    /// A raw labeled stream (for samplers that draw structured objects).
    pub fn stream(&self, local: &str) -> DrawStream {
        self.seed.stream(&self.label(local))
    }

    fn adversary_stream(&self, label: &str) -> DrawStream {
        self.seed.child("adversary-entropy").stream(label)
    }

    fn next_replay_entry(&mut self) -> Result<Entry> {
        match &mut self.mode {
            Mode::Replay { entries, cursor } => {
                // state marks are instrumentation metadata, not messages
                while *cursor < entries.len() && matches!(entries[*cursor], Entry::State { .. }) {
                    *cursor += 1;
                }
                if *cursor >= entries.len() {
                    return Err(Error::Io("transcript truncated".into()));
                }
                let e = entries[*cursor].clone();
                *cursor += 1;
                Ok(e)
            }
            _ => structural("not in replay mode"),
        }
    }

    fn is_replay(&self) -> bool {
        matches!(self.mode, Mode::Replay { .. })
    }

    pub fn is_proving(&self) -> bool {
        matches!(self.mode, Mode::Prove { .. })
    }

    /// Prover sends an oracle message over a fixed domain.
    pub fn p_oracle(
        &mut self,
        local: &str,
        domain: &GridDomain,
        honest: impl FnOnce() -> Result<EvalTable>,
    ) -> Result<usize> {
        let label = self.label(local);
        let table = if self.is_replay() {
            let e = self.next_replay_entry()?;
            match e {
                Entry::Oracle { label: l, table } if l == label => {
                    if !table.domain.same_as(domain) {
                        return Err(Error::Io(format!(
                            "transcript oracle {label} has the wrong domain"
                        )));
                    }
                    table
                }
                _ => return Err(Error::Io(format!("expected oracle entry {label}"))),
            }
        } else {
            let mut table = honest()?;
            if !table.domain.same_as(domain) {
                return structural(format!("honest oracle {label} on the wrong domain"));
            }
            let adversary = match &self.mode {
                Mode::Prove { adversary } => *adversary,
                _ => unreachable!(),
            };
            if let Some(dev) = adversary.and_then(|a| a.matching(&label)) {
                let strategy = dev.strategy.clone();
                let mut rng = self.adversary_stream(&label);
                mutate_table(self.tower, &mut table, &strategy, &mut rng);
            }
            table
        };
        self.entries.push(Entry::Oracle {
            label: label.clone(),
            table: table.clone(),
        });
        self.oracles.push((label, table));
        Ok(self.oracles.len() - 1)
    }

    /// Prover sends plain field elements.
    pub fn p_plain(
        &mut self,
        local: &str,
        count: usize,
        honest: impl FnOnce() -> Vec<FieldElem>,
    ) -> Result<Vec<FieldElem>> {
        let label = self.label(local);
        let values = if self.is_replay() {
            let e = self.next_replay_entry()?;
            match e {
                Entry::Plain { label: l, values } if l == label => {
                    if values.len() != count {
                        return Err(Error::Io(format!(
                            "transcript message {label} has the wrong length"
                        )));
                    }
                    values
                }
                _ => return Err(Error::Io(format!("expected plain entry {label}"))),
            }
        } else {
            let mut values = honest();
            if values.len() != count {
                return structural(format!("honest message {label} has the wrong length"));
            }
            let adversary = match &self.mode {
                Mode::Prove { adversary } => *adversary,
                _ => unreachable!(),
            };
            if let Some(dev) = adversary.and_then(|a| a.matching(&label)) {
                let strategy = dev.strategy.clone();
                let mut rng = self.adversary_stream(&label);
                mutate_values(self.tower, &mut values, &strategy, &mut rng);
            }
            values
        };
        self.entries.push(Entry::Plain {
            label,
            values: values.clone(),
        });
        Ok(values)
    }

    /// Prover sends a whole polynomial (the idealized Poly-IOP model).
    pub fn p_poly(
        &mut self,
        local: &str,
        honest: impl FnOnce() -> Result<MultiPoly>,
    ) -> Result<MultiPoly> {
        let label = self.label(local);
        let poly = if self.is_replay() {
            let e = self.next_replay_entry()?;
            match e {
                Entry::PolyMsg { label: l, poly } if l == label => poly,
                _ => return Err(Error::Io(format!("expected poly entry {label}"))),
            }
        } else {
            let mut poly = honest()?;
            let adversary = match &self.mode {
                Mode::Prove { adversary } => *adversary,
                _ => unreachable!(),
            };
            if let Some(dev) = adversary.and_then(|a| a.matching(&label)) {
                let strategy = dev.strategy.clone();
                let mut rng = self.adversary_stream(&label);
                mutate_poly(self.tower, &mut poly, &strategy, &mut rng);
            }
            poly
        };
        self.entries.push(Entry::PolyMsg {
            label,
            poly: poly.clone(),
        });
        Ok(poly)
    }

    /// Labeled verifier draw of uniform ambient field elements; logged, and
    /// cross-checked against the transcript in replay mode.
    pub fn v_draw(&mut self, local: &str, field: FieldId, n: usize) -> Result<Vec<FieldElem>> {
        let label = self.label(local);
        let mut s = self.seed.stream(&label);
        let values: Vec<FieldElem> = (0..n).map(|_| self.tower.sample(field, &mut s)).collect();
        self.log_draw_checked(label, values)
    }

    /// Draw uniform elements of the embedded subfield image inside the
    /// ambient field.
    pub fn v_draw_subfield(
        &mut self,
        local: &str,
        sub: FieldId,
        ambient: FieldId,
        n: usize,
    ) -> Result<Vec<FieldElem>> {
        let label = self.label(local);
        let mut s = self.seed.stream(&label);
        let values: Result<Vec<FieldElem>> = (0..n)
            .map(|_| {
                let native = self.tower.sample(sub, &mut s);
                self.tower.embed(native, ambient)
            })
            .collect();
        self.log_draw_checked(label, values?)
    }

    /// Draw with a rejection predicate (used to keep side-condition subcube
    /// coordinates distinct); the predicate sees already-accepted values and
    /// the candidate.
    pub fn v_draw_where(
        &mut self,
        local: &str,
        field: FieldId,
        n: usize,
        mut accept: impl FnMut(&[FieldElem], FieldElem) -> bool,
    ) -> Result<Vec<FieldElem>> {
        let label = self.label(local);
        let mut s = self.seed.stream(&label);
        let mut values: Vec<FieldElem> = Vec::with_capacity(n);
        for _ in 0..n {
            loop {
                let cand = self.tower.sample(field, &mut s);
                if accept(&values, cand) {
                    values.push(cand);
                    break;
                }
            }
        }
        self.log_draw_checked(label, values)
    }

    /// Subfield-image draw with a rejection predicate.
    pub fn v_draw_subfield_where(
        &mut self,
        local: &str,
        sub: FieldId,
        ambient: FieldId,
        n: usize,
        mut accept: impl FnMut(&[FieldElem], FieldElem) -> bool,
    ) -> Result<Vec<FieldElem>> {
        let label = self.label(local);
        let mut s = self.seed.stream(&label);
        let mut values: Vec<FieldElem> = Vec::with_capacity(n);
        for _ in 0..n {
            loop {
                let native = self.tower.sample(sub, &mut s);
                let cand = self.tower.embed(native, ambient)?;
                if accept(&values, cand) {
                    values.push(cand);
                    break;
                }
            }
        }
        self.log_draw_checked(label, values)
    }

    /// Log a structured draw made through `stream` (lines, planes, subsets).
    pub fn log_draw(&mut self, local: &str, values: Vec<FieldElem>) -> Result<Vec<FieldElem>> {
        let label = self.label(local);
        self.log_draw_checked(label, values)
    }

    fn log_draw_checked(
        &mut self,
        label: String,
        values: Vec<FieldElem>,
    ) -> Result<Vec<FieldElem>> {
        if self.is_replay() {
            let e = self.next_replay_entry()?;
            match e {
                Entry::Draw {
                    label: l,
                    values: recorded,
                } if l == label => {
                    if recorded != values {
                        return Err(Error::Io(format!(
                            "transcript draw {label} disagrees with the recomputed draw"
                        )));
                    }
                }
                _ => return Err(Error::Io(format!("expected draw entry {label}"))),
            }
        }
        self.entries.push(Entry::Draw {
            label,
            values: values.clone(),
        });
        Ok(values)
    }

    /// Read a stored oracle at a grid point; logged and counted.
    pub fn oracle_read(&mut self, id: usize, point: &[FieldElem]) -> Result<FieldElem> {
        let (label, table) = &self.oracles[id];
        let v = table
            .get(point)
            .ok_or_else(|| Error::Structural(format!("query off the oracle domain {label}")))?;
        let label = label.clone();
        self.counters.proof_queries += 1;
        self.entries.push(Entry::Query {
            oracle: label,
            point: point.to_vec(),
            answer: v,
        });
        Ok(v)
    }

    pub fn oracle_table(&self, id: usize) -> &EvalTable {
        &self.oracles[id].1
    }

    pub fn count_proof(&mut self, n: u64) {
        self.counters.proof_queries += n;
    }

    pub fn count_input(&mut self, n: u64) {
        self.counters.input_queries += n;
    }

    /// Record a round-by-round state evaluation.
    pub fn mark_state(&mut self, local: &str, doomed: bool, witness: impl Into<String>) {
        let label = self.label(local);
        let witness = witness.into();
        self.states.push(StateRecord {
            label: label.clone(),
            doomed,
            witness: witness.clone(),
        });
    }

    pub fn mark_partial(&mut self) {
        self.partial_trace = true;
    }

    /// Consume the session into a transcript; recorded state marks become
    /// trailing S entries (ignored on replay).
    pub fn into_transcript(self, preset: &str) -> Transcript {
        let mut entries = self.entries;
        for s in self.states {
            entries.push(Entry::State {
                label: s.label,
                doomed: s.doomed,
                witness: s.witness,
            });
        }
        Transcript {
            preset: preset.to_string(),
            seed: self.seed,
            entries,
        }
    }
}

fn mutate_table(t: &Tower, table: &mut EvalTable, strategy: &Strategy, rng: &mut DrawStream) {
    let field = table.domain.field;
    match strategy {
        Strategy::CorruptTable { points } => {
            for _ in 0..*points {
                let i = rng.below(table.values.len() as u64) as usize;
                table.values[i] = t.add(table.values[i], t.sample_nonzero(field, rng));
            }
        }
        Strategy::DegreeInflate { exps } => {
            let c = t.sample_nonzero(field, rng);
            let mono = MultiPoly::monomial(c, table.domain.arity(), *exps);
            let bump = mono.eval_on_grid(t, &table.domain);
            for (v, b) in table.values.iter_mut().zip(&bump.values) {
                *v = t.add(*v, *b);
            }
        }
        _ => {
            // value-level strategies degrade to a single corrupted point
            let i = rng.below(table.values.len() as u64) as usize;
            table.values[i] = t.add(table.values[i], t.sample_nonzero(field, rng));
        }
    }
}

fn mutate_values(t: &Tower, values: &mut [FieldElem], strategy: &Strategy, rng: &mut DrawStream) {
    if values.is_empty() {
        return;
    }
    let field = values[0].field;
    match strategy {
        Strategy::CorruptValue { index } => {
            let i = (*index).min(values.len() - 1);
            values[i] = t.add(values[i], t.sample_nonzero(field, rng));
        }
        Strategy::SumMisreport | Strategy::AnchorEquivocate => {
            values[0] = t.add(values[0], t.sample_nonzero(field, rng));
        }
        Strategy::CorruptTable { points } => {
            for _ in 0..*points {
                let i = rng.below(values.len() as u64) as usize;
                values[i] = t.add(values[i], t.sample_nonzero(field, rng));
            }
        }
        Strategy::DegreeInflate { .. } => {
            let i = rng.below(values.len() as u64) as usize;
            values[i] = t.add(values[i], t.sample_nonzero(field, rng));
        }
    }
}

fn mutate_poly(t: &Tower, poly: &mut MultiPoly, strategy: &Strategy, rng: &mut DrawStream) {
    let field = poly.field;
    match strategy {
        Strategy::DegreeInflate { exps } => {
            let c = t.sample_nonzero(field, rng);
            *poly = poly.add(t, &MultiPoly::monomial(c, poly.arity, *exps));
        }
        _ => {
            // perturb the constant coefficient
            let c = t.sample_nonzero(field, rng);
            *poly = poly.add(t, &MultiPoly::constant(c, poly.arity));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldId;
    use crate::poly::GridDomain;

    #[test]
    fn prove_then_replay_round_trip() {
        let t = Tower::default_tower();
        let params = ParamSet::desk27();
        let seed = Seed::from_u64(1);
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, FieldId::F2x16, 1);
        let run = |sess: &mut Session| -> Result<(Vec<FieldElem>, FieldElem)> {
            let dom = dom.clone();
            sess.scoped("demo", move |sess| {
                let c = sess.tower.elem(FieldId::F2x16, 7);
                let tower = sess.tower;
                let d2 = dom.clone();
                let id = sess.p_oracle("f", &dom, move || {
                    Ok(EvalTable::constant(tower, d2, c))
                })?;
                let draw = sess.v_draw("gamma", FieldId::F2x16, 2)?;
                let ans = sess.oracle_read(id, &[dom.axes[0].points[3]])?;
                Ok((draw, ans))
            })
        };
        let mut s1 = Session::prove(&t, &params, seed, None);
        let (d1, a1) = run(&mut s1).unwrap();
        assert_eq!(s1.counters.proof_queries, 1);
        let tr = s1.into_transcript("desk27");
        let mut s2 = Session::replay(&t, &params, tr.seed, &tr.entries);
        let (d2, a2) = run(&mut s2).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(a1, a2);
        let tr2 = s2.into_transcript("desk27");
        assert_eq!(tr.entries.len(), tr2.entries.len());
    }

    #[test]
    fn replay_detects_truncation_and_tampering() {
        let t = Tower::default_tower();
        let params = ParamSet::desk27();
        let seed = Seed::from_u64(2);
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, FieldId::F2x16, 1);
        let run = |sess: &mut Session| -> Result<Vec<FieldElem>> {
            let tower = sess.tower;
            let d2 = dom.clone();
            let c = tower.elem(FieldId::F2x16, 9);
            sess.p_oracle("f", &dom, move || Ok(EvalTable::constant(tower, d2, c)))?;
            sess.v_draw("r", FieldId::F2x16, 1)
        };
        let mut s1 = Session::prove(&t, &params, seed, None);
        run(&mut s1).unwrap();
        let tr = s1.into_transcript("desk27");
        // truncated: the draw entry is missing
        let mut s2 = Session::replay(&t, &params, tr.seed, &tr.entries[..1]);
        assert!(run(&mut s2).is_err());
        // tampered draw disagrees with the recomputation
        let mut entries = tr.entries.clone();
        if let Entry::Draw { values, .. } = &mut entries[1] {
            values[0] = t.add(values[0], t.one(FieldId::F2x16));
        }
        let mut s3 = Session::replay(&t, &params, tr.seed, &entries);
        assert!(run(&mut s3).is_err());
    }

    #[test]
    fn adversary_mutates_matching_labels_only() {
        let t = Tower::default_tower();
        let params = ParamSet::desk27();
        let seed = Seed::from_u64(3);
        let script =
            AdversaryScript::single("flip", "target", Strategy::CorruptValue { index: 0 });
        let mut sess = Session::prove(&t, &params, seed, Some(&script));
        let honest = vec![t.one(FieldId::F2x16)];
        let untouched = sess.p_plain("other", 1, || honest.clone()).unwrap();
        assert_eq!(untouched, honest);
        let touched = sess.p_plain("target", 1, || honest.clone()).unwrap();
        assert_ne!(touched, honest);
        // deterministic mutation across sessions
        let mut sess2 = Session::prove(&t, &params, seed, Some(&script));
        sess2.p_plain("other", 1, || honest.clone()).unwrap();
        let touched2 = sess2.p_plain("target", 1, || honest.clone()).unwrap();
        assert_eq!(touched, touched2);
    }
}
