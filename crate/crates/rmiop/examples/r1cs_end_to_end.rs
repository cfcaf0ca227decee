//! End to end: generate a satisfiable R1CS instance over the cube H³, run
//! the compiled IOP, serialize the transcript, replay it, and watch an
//! unsatisfiable instance get rejected.
//!
//! Run with: cargo run --release --example r1cs_end_to_end

use rmiop::field::Tower;
use rmiop::iop::{read_transcript, write_transcript, ParamSet};
use rmiop::r1cs::{
    algebraize, generate_instance, instance_to_text, make_unsatisfiable, prove, r1cs_budget,
    verify,
};
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    let params = ParamSet::desk27();

    let (inst, witness) = generate_instance(&t, params.q_prime, 3, Seed::from_u64(4));
    println!(
        "instance: n = {}, |H| = {}, satisfied by the generated witness: {}",
        inst.n,
        inst.h_order,
        inst.is_satisfied(&t, &witness).unwrap()
    );
    println!(
        "instance file head:\n{}",
        instance_to_text(&inst).lines().take(4).collect::<Vec<_>>().join("\n")
    );

    // the algebraization behind the Poly-IOP
    let st = algebraize(&t, params.q_prime, &inst, &witness, false).unwrap();
    let one = t.one(params.q_prime);
    println!(
        "algebraized: deg f_M = {:?}, h pinned at (1,1,1): {}",
        st.f_m[0].total_degree(),
        st.h_hat.eval(&t, &[one, one, one]) == one
    );

    // prove, serialize, verify
    let out = prove(&t, &params, &inst, &witness, Seed::from_u64(99), None, false).unwrap();
    println!("prove: {:?}; queries {:?}", out.verdict, out.counters);
    println!("budget: {:?}", r1cs_budget(&params));
    let bytes = write_transcript(&out.transcript);
    println!("transcript: {} bytes, {} entries", bytes.len(), out.transcript.entries.len());
    let parsed = read_transcript(&t, &bytes).unwrap();
    let verdict = verify(&t, &params, &inst, &parsed).unwrap();
    println!("replay verify: {verdict:?}");

    // replays are bit-identical
    let out2 = prove(&t, &params, &inst, &witness, Seed::from_u64(99), None, false).unwrap();
    println!(
        "same seed reproduces the transcript byte for byte: {}",
        write_transcript(&out2.transcript) == bytes
    );

    // an unsatisfiable instance with the canonical lenient prover
    let mut bad = inst.clone();
    make_unsatisfiable(&mut bad, &t, params.q_prime);
    let mut rejected = 0;
    let runs = 10;
    for seed in 0..runs {
        let out = prove(&t, &params, &bad, &witness, Seed::from_u64(seed), None, true).unwrap();
        if !out.verdict.accepted() {
            rejected += 1;
        }
    }
    println!("unsatisfiable instance: {rejected}/{runs} rejected");
}
