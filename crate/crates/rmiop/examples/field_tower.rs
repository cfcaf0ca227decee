//! Tower arithmetic: exact subfield embeddings, multiplicative subgroups,
//! Frobenius membership, hex serialization, and the shipped config.
//!
//! Run with: cargo run --release --example field_tower

use rmiop::field::{FieldId, Tower};
use rmiop::rng::Seed;

fn main() {
    let t = Tower::default_tower();
    println!("shipped tower config:\n{}", t.config().to_text());

    // GF(4) = GF(2)[w]/(w^2 + w + 1): w·w = w+1, w·(w+1) = 1
    let w = t.elem(FieldId::F2x2, 0b10);
    let w1 = t.mul(w, w);
    println!("in GF(4): w*w = {} (w+1), w*(w+1) = {}", w1.to_hex(), t.mul(w, w1).to_hex());

    // the embedding rule g_sub -> g_big^((2^B-1)/(2^b-1)), exhaustively a
    // ring homomorphism
    let img = t.embed(w, FieldId::F2x4).unwrap();
    let g5 = t.pow(t.generator(FieldId::F2x4), 5);
    println!("embed(w, GF(16)) = {} = g16^5 = {}", img.to_hex(), g5.to_hex());
    for a in t.enumerate(FieldId::F2x2) {
        for b in t.enumerate(FieldId::F2x2) {
            let lhs = t.embed(t.mul(a, b), FieldId::F2x4).unwrap();
            let rhs = t.mul(
                t.embed(a, FieldId::F2x4).unwrap(),
                t.embed(b, FieldId::F2x4).unwrap(),
            );
            assert_eq!(lhs, rhs);
        }
    }
    println!("GF(4) -> GF(16) multiplicativity verified exhaustively");

    // towers commute: 4 -> 8 -> 16 equals 4 -> 16
    for a in t.enumerate(FieldId::F2x4) {
        let via8 = t
            .embed(t.embed(a, FieldId::F2x8).unwrap(), FieldId::F2x16)
            .unwrap();
        assert_eq!(via8, t.embed(a, FieldId::F2x16).unwrap());
    }
    println!("embedding tower commutes: GF(16) -> GF(256) -> GF(2^16)");

    // the order-3 subgroup of GF(2^16)* is the embedded GF(4)*
    let h = t.multiplicative_subgroup(FieldId::F2x16, 3).unwrap();
    let hex: Vec<String> = h.iter().map(|x| x.to_hex()).collect();
    println!("order-3 subgroup of GF(2^16)*: {{{}}}", hex.join(", "));
    let sum = h.iter().fold(t.zero(FieldId::F2x16), |acc, &x| t.add(acc, x));
    println!("its element sum: {} (1 + w + w^2 = 0)", sum.to_hex());

    // Frobenius membership: a in the GF(16) image iff a^16 = a
    let mut rng = Seed::from_u64(1).stream("demo");
    let inside = t.embed(t.sample(FieldId::F2x4, &mut rng), FieldId::F2x16).unwrap();
    let outside = t.elem(FieldId::F2x16, 0x8001);
    println!(
        "subfield membership by a^(2^b) = a: {} -> {}, {} -> {}",
        inside.to_hex(),
        t.in_subfield_image(inside, FieldId::F2x4),
        outside.to_hex(),
        t.in_subfield_image(outside, FieldId::F2x4)
    );

    // deterministic sampling: one stream, replayed
    let a: Vec<String> = {
        let mut s = Seed::from_u64(42).stream("sample");
        (0..4).map(|_| t.sample(FieldId::F2x16, &mut s).to_hex()).collect()
    };
    println!("seeded samples (replayable): {}", a.join(" "));
}
