//! The low-degree-testing laboratory: exhaustive line/plane agreement
//! profiles, inclusion-graph spectra, spectral sampling, and scripted
//! adversaries with rejection statistics.
//!
//! Run with: cargo run --release --example ldt_lab

use rmiop::field::{FieldId, Tower};
use rmiop::iop::ParamSet;
use rmiop::ldt::{
    inclusion_graph_sigma, line_agreement_profile, plane_agreement_profile, run_adversary,
    script_catalog, spectral_sampling_check, InclusionGraph, TargetProtocol,
};
use rmiop::lowrate::IoppInput;
use rmiop::poly::{enumerate_lines, Axis, EvalTable, GridDomain, MultiPoly, UniPoly};
use rmiop::ratio::Ratio;
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    let params = ParamSet::desk27();
    let f = FieldId::F2x16;

    // line profile: a single corrupted point touches exactly q+1 lines
    let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 2);
    let mut rng = Seed::from_u64(1).stream("lab");
    let mut p = MultiPoly::zero(f, 2);
    for e in [[2u16, 0, 0], [1, 1, 0]] {
        p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 2, e));
    }
    let mut table = p.eval_on_grid(&t, &dom);
    let idx = rng.below(table.values.len() as u64) as usize;
    table.values[idx] = t.add(table.values[idx], t.one(f));
    let profile = line_agreement_profile(&t, &table, FieldId::F2x4, 2, 1 << 24).unwrap();
    let touched = profile.iter().filter(|(_, a)| *a < Ratio::ONE).count();
    println!(
        "line profile over {} lines: {} lines see the corrupted point (q+1 = 17)",
        profile.len(),
        touched
    );

    // plane profile at q = 4: exhaustive and exact
    let dom3 = GridDomain::subfield_power(&t, FieldId::F2x2, f, 3);
    let vals: Vec<_> = (0..dom3.size()).map(|_| t.sample(f, &mut rng)).collect();
    let random3 = EvalTable::new(dom3, vals).unwrap();
    let planes = plane_agreement_profile(&t, &random3, FieldId::F2x2, 2, 1 << 24).unwrap();
    let max = planes.iter().map(|(_, a)| *a).max().unwrap();
    println!(
        "plane profile over {} planes of F_4^3: max agreement of a random table {max}",
        planes.len()
    );

    // inclusion graph spectra
    for (graph, name, expect) in [
        (InclusionGraph::LinesPoints { m: 2 }, "lines/points F_4^2", 0.5),
        (InclusionGraph::PlanesPoints, "planes/points F_4^3", 0.25),
    ] {
        let s = inclusion_graph_sigma(&t, FieldId::F2x2, graph).unwrap();
        println!("sigma2 {name} = {s:.12} (expected {expect})");
    }

    // spectral sampling: deviation of a random line subset against the bound
    let lines = enumerate_lines(&t, FieldId::F2x2, f, 2);
    let subset: Vec<usize> = (0..lines.len()).filter(|i| i % 4 == 0).collect();
    let g = |pt: &[rmiop::field::FieldElem]| if pt[0].is_zero() { 1.0 } else { 0.0 };
    let (dev, bound) = spectral_sampling_check(&t, FieldId::F2x2, 2, &subset, &g, 0.5).unwrap();
    println!("spectral sampling: deviation {dev:.4} <= lambda/sqrt(eps) = {bound:.4}");

    // the adversary suite against the k = 1 RS-IOPP
    let mk = |seed: u64| {
        let mut r = Seed::from_u64(seed).stream("lab-honest");
        let poly = UniPoly::new(f, (0..5).map(|_| t.sample(f, &mut r)).collect());
        let axis = Axis::new(t.subfield_axis(params.q_enc, f).unwrap()).unwrap();
        let d1 = GridDomain::new(f, vec![axis]);
        let tab = EvalTable::new(d1.clone(), poly.eval_many(&t, &d1.axes[0].points)).unwrap();
        IoppInput::root(tab, Some(poly.to_multi(1, 0)))
    };
    println!("adversary scripts against rs_iopp k=1 (10 seeds each):");
    for script in script_catalog(TargetProtocol::RsIoppK1) {
        let stats = run_adversary(
            &t,
            &params,
            TargetProtocol::RsIoppK1,
            &script,
            &mk,
            0..10,
            false,
        )
        .unwrap();
        println!(
            "  {:20} rejections {}/{}",
            script.name, stats.rejects, stats.runs
        );
    }
}
