//! Quotienting side conditions away: honest round trips for Quo₁/Quo₂/Quo₃
//! and the measured soundness-transfer bound ε + |A|/q.
//!
//! Run with: cargo run --release --example quotienting

use rmiop::codes::{best_rs_agreement, SideCondition, DEFAULT_ENUM_CAP};
use rmiop::field::{FieldId, Tower};
use rmiop::poly::{vanishing_eval, vanishing_poly, Axis, EvalTable, GridDomain, MultiPoly, UniPoly};
use rmiop::quotient::{honest_decompose_bi, honest_decompose_uni, quo1, quo2, side_condition_lde, FillFn};
use rmiop::ratio::Ratio;
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    let f = FieldId::F2x16;
    let axis = Axis::new(t.subfield_axis(FieldId::F2x4, f).unwrap()).unwrap();
    let dom1 = GridDomain::new(f, vec![axis.clone()]);
    let dom2 = GridDomain::power(f, axis.clone(), 2);
    let mut rng = Seed::from_u64(11).stream("quo-demo");

    // univariate round trip: f = V_A·g + h, quotient recovers g exactly
    let a_set = vec![t.elem(f, 0xbeef)];
    let g = UniPoly::new(f, (0..2).map(|_| t.sample(f, &mut rng)).collect());
    let h_hat = UniPoly::constant(t.sample(f, &mut rng));
    let f_poly = vanishing_poly(&t, &a_set).unwrap().mul(&t, &g).add(&t, &h_hat);
    let (g_back, fill) = honest_decompose_uni(&t, &f_poly, &a_set, &h_hat).unwrap();
    println!("honest univariate decomposition recovers g: {}", g_back == g);
    let shifted = EvalTable::new(
        dom1.clone(),
        dom1.axes[0]
            .points
            .iter()
            .map(|&x| t.add(f_poly.eval(&t, x), h_hat.eval(&t, x)))
            .collect(),
    )
    .unwrap();
    let quotient = quo1(&t, &shifted, &a_set, &fill).unwrap();
    let g_table: Vec<_> = dom1.axes[0].points.iter().map(|&x| g.eval(&t, x)).collect();
    println!("Quo1(f − h~, A, Fill) equals g on the grid: {}", quotient.values == g_table);

    // soundness transfer: plant side-conditioned agreement eps, try many fills
    let side_pt = t.elem(f, 0x1234);
    let h_val = t.sample(f, &mut rng);
    let side = SideCondition::new(vec![vec![side_pt]], vec![h_val]).unwrap();
    let consistent = vanishing_poly(&t, &[side_pt])
        .unwrap()
        .mul(&t, &UniPoly::new(f, (0..2).map(|_| t.sample(f, &mut rng)).collect()))
        .add(&t, &UniPoly::constant(h_val));
    let mut vals = consistent.eval_many(&t, &dom1.axes[0].points);
    for v in vals.iter_mut().take(6) {
        *v = t.add(*v, t.sample_nonzero(f, &mut rng));
    }
    let table = EvalTable::new(dom1.clone(), vals).unwrap();
    let (_, eps) = best_rs_agreement(&t, &table, 2, Some(&side), DEFAULT_ENUM_CAP).unwrap();
    let bound = eps + Ratio::new(1, 16);
    let shifted = table.map(|j, v| {
        let x = dom1.axes[0].points[j];
        t.add(v, UniPoly::constant(h_val).eval(&t, x))
    });
    let mut worst = Ratio::ZERO;
    for i in 0..200 {
        let mut frng = Seed::from_u64(i).stream("fill");
        let fill = FillFn::new(vec![], vec![side_pt], vec![t.sample(f, &mut frng)]).unwrap();
        let q = quo1(&t, &shifted, &[side_pt], &fill).unwrap();
        let (_, agr) = best_rs_agreement(&t, &q, 1, None, DEFAULT_ENUM_CAP).unwrap();
        worst = worst.max(agr);
    }
    println!(
        "planted eps = {eps}; worst quotient agreement over 200 fills = {worst} <= eps + |A|/q = {bound}: {}",
        worst <= bound
    );

    // bivariate: side condition on a 2x2 subcube, reconstruction identity
    let mut q_poly = MultiPoly::zero(f, 2);
    for e1 in 0..=2u16 {
        for e2 in 0..=2u16 {
            q_poly = q_poly.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 2, [e1, e2, 0]));
        }
    }
    let a2 = vec![t.elem(f, 0x7777), t.sample(f, &mut rng)];
    let b2 = vec![t.elem(f, 0x3333), t.sample(f, &mut rng)];
    let h_vals: Vec<_> = a2
        .iter()
        .flat_map(|&x| b2.iter().map(move |&y| (x, y)))
        .map(|(x, y)| q_poly.eval(&t, &[x, y]))
        .collect();
    let (h_hat2, h_tilde2) = side_condition_lde(&t, &[a2.clone(), b2.clone()], &h_vals, &dom2).unwrap();
    println!(
        "2x2 subcube extension is bilinear: individual degrees {:?}",
        h_hat2.individual_degrees()
    );
    let (g1, g2, fill2) = honest_decompose_bi(&t, &q_poly, &a2, &b2, &h_hat2, axis).unwrap();
    let q_table = q_poly.eval_on_grid(&t, &dom2);
    let g1_table = g1.eval_on_grid(&t, &dom2);
    let shifted2 = q_table.map(|idx, v| {
        let x = dom2.axes[0].points[idx / 16];
        let va = vanishing_eval(&t, &a2, x);
        t.add(v, t.add(t.mul(va, g1_table.values[idx]), h_tilde2.values[idx]))
    });
    let got = quo2(&t, &shifted2, &b2, &fill2).unwrap();
    println!(
        "Quo2 reproduces g2 on the whole grid: {}",
        got.values == g2.eval_on_grid(&t, &dom2).values
    );
}
