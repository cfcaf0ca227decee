//! The univariate and trivariate sumcheck Poly-IOPs over a multiplicative
//! subgroup: honest runs, a wrong-sum prover, and round-by-round states.
//!
//! Run with: cargo run --release --example sumcheck_protocol

use std::sync::Arc;

use rmiop::field::{FieldId, Tower};
use rmiop::iop::{run_poly_iop, ParamSet, Session};
use rmiop::poly::{GridDomain, MultiPoly, UniPoly};
use rmiop::rng::Seed;
use rmiop::sumcheck::{subgroup_sum, univar_sumcheck_prover, MultivarSumcheckIop};

fn main() {
    let t = Arc::new(Tower::default_tower());
    let params = ParamSet::desk27();
    let f = FieldId::F2x16;
    let h = t.multiplicative_subgroup(f, 3).unwrap();

    // the subgroup-sum fact: Σ_H R = R(0)·|H| for deg R <= |H|−1
    let x = UniPoly::monomial(t.one(f), 1);
    println!(
        "Σ_H x over the cube roots of unity = {} (1 + w + w² = 0)",
        subgroup_sum(&t, &x.to_multi(1, 0), &h).to_hex()
    );
    let one3 = MultiPoly::constant(t.one(f), 3);
    println!(
        "Σ_H³ 1 = 27·1 = {} in characteristic 2",
        subgroup_sum(&t, &one3, &h).to_hex()
    );

    // the prover decomposition f = α/|H| + V_H·F̂ + x·R̂
    let (fh, rh) = univar_sumcheck_prover(&t, &x, &h, t.zero(f)).unwrap();
    println!(
        "decomposing f = x against α = 0: F̂ = 0 ({}), R̂ = 1 ({})",
        fh.is_zero(),
        rh == UniPoly::constant(t.one(f))
    );

    // a trivariate sumcheck instance
    let mut rng = Seed::from_u64(5).stream("sc-demo");
    let mut p = MultiPoly::zero(f, 3);
    for _ in 0..10 {
        let e = [
            rng.below(5) as u16,
            rng.below(5) as u16,
            rng.below(3) as u16,
        ];
        p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
    }
    let beta = subgroup_sum(&t, &p, &h);
    let slot_domain = GridDomain::subfield_power(&t, FieldId::F2x8, f, 1);
    let honest = MultivarSumcheckIop {
        tower: t.clone(),
        h: h.clone(),
        d_bound: 12,
        beta,
        input_poly: p.clone(),
        slot_domain: slot_domain.clone(),
    };
    let mut sess = Session::prove(&t, &params, Seed::from_u64(1), None);
    sess.instrument = true;
    let verdict = run_poly_iop(&mut sess, &honest).unwrap();
    println!("honest trivariate sumcheck: {verdict:?}");
    for s in &sess.states {
        println!("  state {}: doomed={} ({})", s.label, s.doomed, s.witness);
    }

    // wrong claimed sum: rejected in almost every seeded run
    let wrong = MultivarSumcheckIop {
        tower: t.clone(),
        h,
        d_bound: 12,
        beta: t.add(beta, t.one(f)),
        input_poly: p,
        slot_domain,
    };
    let mut rejects = 0;
    let runs = 200;
    for seed in 0..runs {
        let mut sess = Session::prove(&t, &params, Seed::from_u64(seed), None);
        if !run_poly_iop(&mut sess, &wrong).unwrap().accepted() {
            rejects += 1;
        }
    }
    println!("wrong-sum prover: {rejects}/{runs} rejections (d'/q' per round)");
}
