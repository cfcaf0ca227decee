//! Agreement, the nearest-codeword oracle, side conditions, and exhaustive
//! list decoding at desk scale.
//!
//! Run with: cargo run --release --example list_decoding

use rmiop::codes::{
    code_agreement_oracle, list_decode_rs, pairwise_delta, CodeSpec, SideCondition,
    DEFAULT_ENUM_CAP,
};
use rmiop::field::{FieldId, Tower};
use rmiop::poly::{EvalTable, GridDomain, UniPoly};
use rmiop::ratio::Ratio;
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    let f = FieldId::F2x16;
    let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 1);
    let spec = CodeSpec::rs(2, dom.clone());
    let mut rng = Seed::from_u64(3).stream("list-demo");

    println!("RS[2, GF(16)] pairwise delta: {}", pairwise_delta(&spec));

    // plant a codeword, corrupt 3 of 16 points, recover it exactly
    let planted = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
    let mut values = planted.eval_many(&t, &dom.axes[0].points);
    for v in values.iter_mut().take(3) {
        *v = t.add(*v, t.sample_nonzero(f, &mut rng));
    }
    let noisy = EvalTable::new(dom.clone(), values).unwrap();
    let (best, agr) = code_agreement_oracle(&t, &noisy, &spec, None, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "corrupted codeword: best agreement {agr}, planted recovered: {}",
        best.to_uni() == planted
    );

    // a side condition at an out-of-domain point, consistent then contradicting
    let z = t.elem(f, 0x8000);
    let ok = SideCondition::new(vec![vec![z]], vec![planted.eval(&t, z)]).unwrap();
    let (_, agr_ok) =
        code_agreement_oracle(&t, &noisy, &spec, Some(&ok), DEFAULT_ENUM_CAP).unwrap();
    let bad = SideCondition::new(vec![vec![z]], vec![t.add(planted.eval(&t, z), t.one(f))])
        .unwrap();
    let (_, agr_bad) =
        code_agreement_oracle(&t, &noisy, &spec, Some(&bad), DEFAULT_ENUM_CAP).unwrap();
    println!("side-conditioned agreement: consistent {agr_ok}, contradicting {agr_bad}");

    // list decoding with the Johnson-style bound C/(C^2 - delta)
    let threshold = Ratio::new(6, 16);
    let list = list_decode_rs(&t, &noisy, 2, None, threshold, DEFAULT_ENUM_CAP).unwrap();
    let c = threshold.to_f64();
    let bound = c / (c * c - pairwise_delta(&spec).to_f64());
    println!(
        "list at threshold {threshold}: {} member(s), bound {bound:.2}",
        list.len()
    );

    // a glued half-and-half word has two strong list members
    let p2 = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
    let glued: Vec<_> = dom.axes[0]
        .points
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if i < 8 {
                planted.eval(&t, x)
            } else {
                p2.eval(&t, x)
            }
        })
        .collect();
    let glued = EvalTable::new(dom.clone(), glued).unwrap();
    let list = list_decode_rs(&t, &glued, 2, None, threshold, DEFAULT_ENUM_CAP).unwrap();
    println!("glued word: {} list members at threshold {threshold}", list.len());

    // thresholds at or below sqrt(delta) are refused
    let refused = list_decode_rs(&t, &glued, 4, None, Ratio::new(1, 2), DEFAULT_ENUM_CAP);
    println!("threshold at sqrt(delta) is a parameter error: {refused:?}");
}
