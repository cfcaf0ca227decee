//! The desk parameter preset and the compile-requirement report: formula
//! values next to the clamped desk values, with margins per slot family.
//!
//! Run with: cargo run --release --example params_report

use rmiop::codes::CodeSpec;
use rmiop::field::Tower;
use rmiop::iop::{check_compile_requirements, requirement_report, ParamSet};
use rmiop::poly::{Axis, GridDomain};
use rmiop::prox::err;

fn main() {
    let params = ParamSet::desk27();
    print!("{}", params.report());

    // the proximity-generator error function at the preset's corners
    println!(
        "err(4, 16, 2^16) = {} (the worked value 1/16)",
        err(4, 16, 1 << 16)
    );
    println!("err(2, 16, 2^32) = {} (2^-18)", err(2, 16, 1 << 32));

    // requirement margins per slot family; advisory at desk scale
    let t = Tower::default_tower();
    let enc_axis = Axis::new(t.subfield_axis(params.q_enc, params.q_prime).unwrap()).unwrap();
    let q_axis = Axis::new(t.subfield_axis(params.q, params.q_prime).unwrap()).unwrap();
    let grid2 = GridDomain::power(params.q_prime, enc_axis.clone(), 2);
    let grid3 = GridDomain::power(params.q_prime, q_axis, 3);
    let grid1 = GridDomain::new(params.q_prime, vec![enc_axis]);
    let slots = vec![
        (
            "rs_poly.k1/Q".to_string(),
            CodeSpec::rm_individual(vec![2, 2], grid2.clone()),
            params.level(1).eps_prime_prev,
        ),
        (
            "irm_poly.k1/Q".to_string(),
            CodeSpec::rm_total(8, grid2.clone()),
            params.level(1).eps_prime_prev,
        ),
        (
            "rm_poly/Qp".to_string(),
            CodeSpec::rm_total(12, grid2),
            params.eps_comp,
        ),
        (
            "r1cs_poly/fM".to_string(),
            CodeSpec::rm_total(6, grid3),
            params.eps0,
        ),
        (
            "r1cs_poly/F1".to_string(),
            CodeSpec::rs(12, grid1),
            params.eps0_enc,
        ),
    ];
    let rows = check_compile_requirements(params.lambda, &slots);
    print!("{}", requirement_report(&rows));
    println!("(desk parameters may fail the asymptotic requirements; runs proceed with the margins logged)");
}
