//! The low-rate Reed-Solomon IOPP: honest runs at recursion depths 1 and 2,
//! exact query accounting, and a planted-far input.
//!
//! Run with: cargo run --release --example lowrate_iopp

use rmiop::field::Tower;
use rmiop::iop::{Entry, ParamSet, Session};
use rmiop::lowrate::{pretense_rs, rs_iopp, rs_iopp_budget, IoppInput};
use rmiop::poly::{Axis, EvalTable, GridDomain, UniPoly};
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    let params = ParamSet::desk27();
    let f = params.q_prime;
    let axis = Axis::new(t.subfield_axis(params.q_enc, f).unwrap()).unwrap();
    let dom = GridDomain::new(f, vec![axis]);
    let mut rng = Seed::from_u64(2).stream("lowrate-demo");

    // honest degree-4 input at k = 1
    let p = UniPoly::new(f, (0..5).map(|_| t.sample(f, &mut rng)).collect());
    let table = EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
    let input = IoppInput::root(table.clone(), Some(p.to_multi(1, 0)));
    let mut sess = Session::prove(&t, &params, Seed::from_u64(10), None);
    let verdict = rs_iopp(&mut sess, &input, 1).unwrap();
    println!("rs_iopp k=1 honest: {verdict:?}");
    println!(
        "  measured queries {:?}, budget {:?}",
        sess.counters,
        rs_iopp_budget(&params, 1, true)
    );

    // honest degree-16 input at k = 2: the recursion passes through
    // rs_poly.k2 -> irm k1 -> the 2√d wrapper -> rs_poly.k1 -> the base read
    let p16 = UniPoly::new(f, (0..17).map(|_| t.sample(f, &mut rng)).collect());
    let table16 = EvalTable::new(dom.clone(), p16.eval_many(&t, &dom.axes[0].points)).unwrap();
    let input16 = IoppInput::root(table16, Some(p16.to_multi(1, 0)));
    let mut sess = Session::prove(&t, &params, Seed::from_u64(11), None);
    let verdict = rs_iopp(&mut sess, &input16, 2).unwrap();
    println!("rs_iopp k=2 honest: {verdict:?}");
    println!(
        "  measured queries {:?}, budget {:?}",
        sess.counters,
        rs_iopp_budget(&params, 2, true)
    );
    let mut protocols: Vec<&str> = Vec::new();
    for e in &sess.entries {
        if let Entry::Oracle { label, .. } = e {
            for tag in ["rs_poly.k2", "irm_poly.k1", "rs2x.k1", "rs_poly.k1"] {
                if label.contains(tag) && !protocols.contains(&tag) {
                    protocols.push(tag);
                }
            }
        }
    }
    println!("  recursion path: {}", protocols.join(" -> "));

    // a uniformly random (far) input with a well-shaped pretense extension
    let mut rejected = 0;
    let runs = 20;
    for seed in 0..runs {
        let mut frng = Seed::from_u64(seed).stream("far-input");
        let values: Vec<_> = (0..dom.size()).map(|_| t.sample(f, &mut frng)).collect();
        let far = EvalTable::new(dom.clone(), values).unwrap();
        let claimed = pretense_rs(&t, &far, 4).unwrap();
        let input = IoppInput::root(far, Some(claimed));
        let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), None);
        if !rs_iopp(&mut sess, &input, 1).unwrap().accepted() {
            rejected += 1;
        }
    }
    println!("far inputs at k=1: {rejected}/{runs} rejected");
}
