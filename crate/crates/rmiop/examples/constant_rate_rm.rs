//! The constant-rate trivariate Reed-Muller IOPP: plane restrictions over a
//! GF(16)³ grid, the affine-transform batch, and the degree lift onto the
//! recursion schedule.
//!
//! Run with: cargo run --release --example constant_rate_rm

use rmiop::constrate::{rm_iopp, rm_iopp_budget};
use rmiop::field::Tower;
use rmiop::iop::{ParamSet, Session};
use rmiop::lowrate::IoppInput;
use rmiop::poly::{Axis, EvalTable, GridDomain, MultiPoly};
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    let params = ParamSet::desk27();
    let f = params.q_prime;
    let mut rng = Seed::from_u64(8).stream("rm-demo");

    // an honest total-degree-12 trivariate over GF(16)^3 (4096 points)
    let mut p = MultiPoly::zero(f, 3);
    for _ in 0..25 {
        let e1 = rng.below(7) as u16;
        let e2 = rng.below((13 - e1 as u64).min(7)) as u16;
        let e3 = rng.below((13 - e1 as u64 - e2 as u64).min(7)) as u16;
        p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, [e1, e2, e3]));
    }
    let axis = Axis::new(t.subfield_axis(params.q, f).unwrap()).unwrap();
    let dom = GridDomain::power(f, axis, 3);
    let table = p.eval_on_grid(&t, &dom);
    println!(
        "input: total degree {:?} over a {}-point grid; T = {} planes, t = {} points per line; 6d = 12 lifts to {}",
        p.total_degree(),
        dom.size(),
        params.rm_t,
        params.rm_points_per_line,
        params.pad_degree
    );

    let input = IoppInput::root(table, Some(p));
    let mut sess = Session::prove(&t, &params, Seed::from_u64(30), None);
    let verdict = rm_iopp(&mut sess, &input, 12).unwrap();
    println!("rm_iopp honest: {verdict:?}");
    println!(
        "  measured queries {:?}, budget {:?}",
        sess.counters,
        rm_iopp_budget(&params, true)
    );

    // a far input: a uniformly random table with a well-shaped pretense
    let values: Vec<_> = (0..dom.size()).map(|_| t.sample(f, &mut rng)).collect();
    let far = EvalTable::new(dom, values).unwrap();
    let mut q = MultiPoly::zero(f, 3);
    for e in [[4u16, 4, 4], [1, 0, 0], [0, 0, 0]] {
        q = q.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
    }
    let mut rejected = 0;
    let runs = 10;
    for seed in 0..runs {
        let input = IoppInput::root(far.clone(), Some(q.clone()));
        let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), None);
        if !rm_iopp(&mut sess, &input, 12).unwrap().accepted() {
            rejected += 1;
        }
    }
    println!("far inputs: {rejected}/{runs} rejected");
}
