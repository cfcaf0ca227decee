//! The compile transformation on a one-slot micro Poly-IOP with an
//! exhaustive-check batched IOPP: members accepted, planted non-members
//! rejected, and the anchoring statistics behind the side-conditioned list.
//!
//! Run with: cargo run --release --example compile_micro

use rmiop::codes::{best_rs_agreement, list_decode_rs, CodeSpec, DEFAULT_ENUM_CAP};
use rmiop::error::Result;
use rmiop::field::{FieldElem, FieldId, Tower};
use rmiop::iop::{
    compile_run, Answers, BatchInput, BatchedIopp, DrawLog, ParamSet, PolyIop, Session, SlotSpec,
    Verdict,
};
use rmiop::poly::{EvalTable, GridDomain, MultiPoly};
use rmiop::ratio::Ratio;
use rmiop::rng::Seed;

/// One round, one degree-2 univariate slot over the GF(16) grid: the verifier
/// queries the polynomial at one grid point and compares with the input.
struct MicroIop {
    dom: GridDomain,
    input: EvalTable,
    claimed: Option<MultiPoly>,
}

impl PolyIop for MicroIop {
    fn name(&self) -> String {
        "micro".into()
    }
    fn rounds(&self) -> usize {
        1
    }
    fn slots(&self, _round: usize) -> Vec<SlotSpec> {
        vec![SlotSpec {
            label: "F".into(),
            round: 0,
            code: CodeSpec::rs(2, self.dom.clone()),
            eps: 0.45,
        }]
    }
    fn make_draws(&self, _round: usize, sess: &mut Session, log: &mut DrawLog) -> Result<()> {
        let anchor = log.get("anchor/F")[0];
        let pick = sess.v_draw_subfield_where(
            "check-point",
            FieldId::F2x4,
            FieldId::F2x16,
            1,
            |_, c| c != anchor,
        )?;
        log.insert("check-point", pick);
        Ok(())
    }
    fn queries(&self, _round: usize, log: &DrawLog) -> Vec<(String, Vec<FieldElem>)> {
        vec![("F".into(), vec![log.get("check-point")[0]])]
    }
    fn input_queries(&self, _round: usize, log: &DrawLog) -> Vec<Vec<FieldElem>> {
        vec![vec![log.get("check-point")[0]]]
    }
    fn honest_polys(&self, _round: usize, _log: &DrawLog) -> Result<Vec<MultiPoly>> {
        Ok(vec![self.claimed.clone().expect("prover knowledge")])
    }
    fn input_value(&self, point: &[FieldElem]) -> Result<FieldElem> {
        Ok(self.input.get(point).expect("on grid"))
    }
    fn decide(&self, log: &DrawLog, answers: &Answers) -> Result<Verdict> {
        let z = log.get("check-point")[0];
        if answers.proof("F", &[z]) == answers.input(&[z]) {
            Ok(Verdict::Accept)
        } else {
            Ok(Verdict::Reject("micro check failed".into()))
        }
    }
}

/// Exhaustive batched membership check: accepts iff the oracle has agreement
/// above the slot's ε with its side-conditioned family, decided by the exact
/// univariate oracle.
struct ExhaustiveBatch<'t> {
    tower: &'t Tower,
}

impl BatchedIopp for ExhaustiveBatch<'_> {
    fn name(&self) -> String {
        "exhaustive-check".into()
    }
    fn run(&self, sess: &mut Session, inputs: &[BatchInput], _log: &DrawLog) -> Result<Verdict> {
        for input in inputs {
            let table = sess.oracle_table(input.oracle).clone();
            let (_, agr) =
                best_rs_agreement(self.tower, &table, 2, Some(&input.side), DEFAULT_ENUM_CAP)?;
            let eps = Ratio::new((input.eps * 80.0).round() as u64, 80);
            if agr <= eps {
                return Ok(Verdict::Reject(format!(
                    "membership {agr} at or below eps {eps}"
                )));
            }
        }
        Ok(Verdict::Accept)
    }
}

fn main() {
    let t = Tower::default_tower();
    let params = ParamSet::desk27();
    let f = FieldId::F2x16;
    let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 1);

    // members accepted
    let mut accepts = 0;
    for seed in 0..50u64 {
        let mut rng = Seed::from_u64(seed).stream("micro-member");
        let p = rmiop::poly::UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let table = EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
        let iop = MicroIop {
            dom: dom.clone(),
            input: table.clone(),
            claimed: Some(p.to_multi(1, 0)),
        };
        let batch = ExhaustiveBatch { tower: &t };
        let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), None);
        if compile_run(&mut sess, &iop, &batch).unwrap().accepted() {
            accepts += 1;
        }
    }
    println!("members: {accepts}/50 accepted");

    // two planted non-member situations:
    // (a) a far input with a well-shaped pretense prover; the decision-phase
    //     check catches it at the one-query rate
    let mut far_rejects = 0;
    for seed in 0..50u64 {
        let mut rng = Seed::from_u64(seed).stream("micro-far");
        let values: Vec<_> = (0..16).map(|_| t.sample(f, &mut rng)).collect();
        let table = EvalTable::new(dom.clone(), values).unwrap();
        let claimed = rmiop::lowrate::pretense_rs(&t, &table, 2).unwrap();
        let iop = MicroIop {
            dom: dom.clone(),
            input: table,
            claimed: Some(claimed),
        };
        let batch = ExhaustiveBatch { tower: &t };
        let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), None);
        if !compile_run(&mut sess, &iop, &batch).unwrap().accepted() {
            far_rejects += 1;
        }
    }
    println!("far inputs (decision-phase catch): {far_rejects}/50 rejected");

    // (b) an equivocating prover: honest member input and answers,但 the
    //     oracle message heavily corrupted, so it is far from the
    //     side-conditioned family and the exhaustive batch must reject
    let script = rmiop::iop::AdversaryScript::single(
        "equivocate-oracle",
        "micro]/F",
        rmiop::iop::Strategy::CorruptTable { points: 40 },
    );
    let mut batch_rejects = 0;
    for seed in 0..50u64 {
        let mut rng = Seed::from_u64(seed).stream("micro-member2");
        let p = rmiop::poly::UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let table = EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
        let iop = MicroIop {
            dom: dom.clone(),
            input: table,
            claimed: Some(p.to_multi(1, 0)),
        };
        let batch = ExhaustiveBatch { tower: &t };
        let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), Some(&script));
        if !compile_run(&mut sess, &iop, &batch).unwrap().accepted() {
            batch_rejects += 1;
        }
    }
    println!("equivocating provers (batched-IOPP catch): {batch_rejects}/50 rejected");

    // anchoring: after a uniform anchor, at most one eps-list member is
    // consistent with the anchored value
    let threshold = Ratio::new(6, 16);
    let mut successes = 0;
    let trials = 1000;
    for trial in 0..trials {
        let mut rng = Seed::from_u64(trial).stream("micro-anchor");
        let p1 = rmiop::poly::UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let p2 = rmiop::poly::UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let glued: Vec<_> = dom.axes[0]
            .points
            .iter()
            .enumerate()
            .map(|(i, &x)| if i < 8 { p1.eval(&t, x) } else { p2.eval(&t, x) })
            .collect();
        let table = EvalTable::new(dom.clone(), glued).unwrap();
        let list = list_decode_rs(&t, &table, 2, None, threshold, DEFAULT_ENUM_CAP).unwrap();
        let anchor = t.sample(f, &mut rng);
        let Some(first) = list.first() else {
            successes += 1;
            continue;
        };
        let zeta = first.eval(&t, anchor);
        if list.iter().filter(|cw| cw.eval(&t, anchor) == zeta).count() <= 1 {
            successes += 1;
        }
    }
    println!(
        "anchoring: side-conditioned list <= 1 in {successes}/{trials} trials (2^-lambda target: >= 996)"
    );
}
