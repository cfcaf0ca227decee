//! Characteristic-2 field tower GF(4) ⊆ GF(16) ⊆ GF(256) ⊆ GF(2^16) ⊆ GF(2^32).
//!
//! Every field is F_2[x]/(p_b) in polynomial basis with a primitive modulus
//! p_b, so the basis root x generates the multiplicative group. Embeddings
//! follow the rule g_sub ↦ g_big^((2^B−1)/(2^b−1)); the shipped moduli are
//! chosen so that this map is a ring homomorphism for every comparable pair,
//! which the constructor re-verifies. Addition is bitwise XOR; subtraction
//! equals addition.
//!
//! Protocol layers work inside one ambient field (the transcript field q').
//! Subfields appear there as embedded images; membership in the image of
//! GF(2^b) is the Frobenius condition a^(2^b) = a.

mod config;

pub use config::TowerConfig;

use crate::error::{parameter, structural, Result};
use crate::rng::DrawStream;
use std::collections::HashMap;

/// One member of the tower, identified by log2 of its size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldId {
    F2x2,
    F2x4,
    F2x8,
    F2x16,
    F2x32,
}

pub const ALL_FIELDS: [FieldId; 5] = [
    FieldId::F2x2,
    FieldId::F2x4,
    FieldId::F2x8,
    FieldId::F2x16,
    FieldId::F2x32,
];

impl FieldId {
    pub fn log2_size(self) -> u32 {
        match self {
            FieldId::F2x2 => 2,
            FieldId::F2x4 => 4,
            FieldId::F2x8 => 8,
            FieldId::F2x16 => 16,
            FieldId::F2x32 => 32,
        }
    }

    pub fn from_log2(b: u32) -> Result<FieldId> {
        Ok(match b {
            2 => FieldId::F2x2,
            4 => FieldId::F2x4,
            8 => FieldId::F2x8,
            16 => FieldId::F2x16,
            32 => FieldId::F2x32,
            _ => return parameter(format!("no tower field with log2_size {b}")),
        })
    }

    /// Field size 2^b.
    pub fn order(self) -> u64 {
        1u64 << self.log2_size()
    }

    /// Multiplicative group order 2^b − 1.
    pub fn group_order(self) -> u64 {
        self.order() - 1
    }

    /// Smaller fields embed into larger ones iff log2 sizes divide.
    pub fn embeds_into(self, big: FieldId) -> bool {
        big.log2_size().is_multiple_of(self.log2_size())
    }

    /// Width of the fixed hex serialization.
    pub fn hex_width(self) -> usize {
        (self.log2_size() as usize).div_ceil(4)
    }

    fn idx(self) -> usize {
        match self {
            FieldId::F2x2 => 0,
            FieldId::F2x4 => 1,
            FieldId::F2x8 => 2,
            FieldId::F2x16 => 3,
            FieldId::F2x32 => 4,
        }
    }
}

/// Element of a tower field: coefficient bit vector in polynomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    pub field: FieldId,
    pub bits: u32,
}

impl FieldElem {
    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_one(self) -> bool {
        self.bits == 1
    }

    /// Fixed-width lowercase hex of the bit vector.
    pub fn to_hex(self) -> String {
        format!("{:0width$x}", self.bits, width = self.field.hex_width())
    }
}

struct Level {
    modulus: u64,
    generator: u32,
    // log/exp tables for fields up to 2^16; F2x32 uses the slow path
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Embedding {
    // rows[i] = image of x_sub^i in the big field
    rows: Vec<u32>,
    // image bits -> source bits, for sections
    back: HashMap<u32, u32>,
}

/// The tower: immutable after construction, shareable across threads.
pub struct Tower {
    config: TowerConfig,
    levels: Vec<Level>,
    embeddings: Vec<Vec<Option<Embedding>>>,
}

fn clmul_mod(a: u64, b: u64, modulus: u64, deg: u32) -> u64 {
    let mut acc: u128 = 0;
    let aa = a as u128;
    for i in 0..deg {
        if (b >> i) & 1 == 1 {
            acc ^= aa << i;
        }
    }
    let m = modulus as u128;
    for i in (deg..2 * deg).rev() {
        if (acc >> i) & 1 == 1 {
            acc ^= m << (i - deg);
        }
    }
    acc as u64
}

impl Tower {
    /// Build and self-check the tower from a config.
    pub fn new(config: TowerConfig) -> Result<Tower> {
        let mut levels = Vec::with_capacity(5);
        for id in ALL_FIELDS {
            let (modulus, generator) = config.entry(id)?;
            let b = id.log2_size();
            if modulus >> b != 1 {
                return structural(format!("modulus for 2^{b} has wrong degree"));
            }
            let (exp, log) = if b <= 16 {
                build_tables(modulus, b)?
            } else {
                (Vec::new(), Vec::new())
            };
            levels.push(Level {
                modulus,
                generator,
                exp,
                log,
            });
        }
        let mut tower = Tower {
            config,
            levels,
            embeddings: (0..5).map(|_| (0..5).map(|_| None).collect()).collect(),
        };
        for sub in ALL_FIELDS {
            for big in ALL_FIELDS {
                if sub != big && sub.embeds_into(big) {
                    let emb = tower.build_embedding(sub, big)?;
                    tower.embeddings[sub.idx()][big.idx()] = Some(emb);
                }
            }
        }
        tower.self_test()?;
        Ok(tower)
    }

    pub fn default_tower() -> Tower {
        Tower::new(TowerConfig::default()).expect("shipped tower config must verify")
    }

    pub fn config(&self) -> &TowerConfig {
        &self.config
    }

    pub fn elem(&self, field: FieldId, bits: u64) -> FieldElem {
        debug_assert!(field.log2_size() == 32 || bits < field.order());
        FieldElem {
            field,
            bits: bits as u32,
        }
    }

    pub fn zero(&self, field: FieldId) -> FieldElem {
        self.elem(field, 0)
    }

    pub fn one(&self, field: FieldId) -> FieldElem {
        self.elem(field, 1)
    }

    pub fn generator(&self, field: FieldId) -> FieldElem {
        self.elem(field, self.levels[field.idx()].generator as u64)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        assert_eq!(a.field, b.field, "field mismatch in add");
        FieldElem {
            field: a.field,
            bits: a.bits ^ b.bits,
        }
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        assert_eq!(a.field, b.field, "field mismatch in mul");
        let lvl = &self.levels[a.field.idx()];
        if a.bits == 0 || b.bits == 0 {
            return self.zero(a.field);
        }
        let bits = if !lvl.exp.is_empty() {
            lvl.exp[(lvl.log[a.bits as usize] + lvl.log[b.bits as usize]) as usize]
        } else {
            clmul_mod(
                a.bits as u64,
                b.bits as u64,
                lvl.modulus,
                a.field.log2_size(),
            ) as u32
        };
        FieldElem {
            field: a.field,
            bits,
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return parameter("inverse of zero");
        }
        let n = a.field.group_order();
        Ok(self.pow(a, n - 1))
    }

    /// a / b.
    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        let lvl = &self.levels[a.field.idx()];
        let n = a.field.group_order();
        if a.is_zero() {
            return if e == 0 { self.one(a.field) } else { a };
        }
        let e = e % n;
        if !lvl.exp.is_empty() {
            let l = lvl.log[a.bits as usize] as u64;
            return FieldElem {
                field: a.field,
                bits: lvl.exp[((l * e) % n) as usize],
            };
        }
        let mut r = self.one(a.field);
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    /// Discrete log base the configured generator; None for zero.
    pub fn dlog(&self, a: FieldElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let lvl = &self.levels[a.field.idx()];
        if !lvl.log.is_empty() {
            return Some(lvl.log[a.bits as usize] as u64);
        }
        // slow path, only used in self-tests for F2x32
        let mut cur = self.one(a.field);
        for i in 0..a.field.group_order() {
            if cur == a {
                return Some(i);
            }
            cur = self.mul(cur, self.generator(a.field));
        }
        None
    }

    fn build_embedding(&self, sub: FieldId, big: FieldId) -> Result<Embedding> {
        let e = big.group_order() / sub.group_order();
        let y = self.pow(self.generator(big), e);
        // y must be a root of the subfield modulus, otherwise the generator
        // rule is not additive
        let sub_mod = self.levels[sub.idx()].modulus;
        let mut acc = self.zero(big);
        let mut pw = self.one(big);
        for i in 0..=sub.log2_size() {
            if (sub_mod >> i) & 1 == 1 {
                acc = self.add(acc, pw);
            }
            pw = self.mul(pw, y);
        }
        if !acc.is_zero() {
            return structural(format!(
                "embedding {}->{} is not a homomorphism with this config",
                sub.log2_size(),
                big.log2_size()
            ));
        }
        let mut rows = Vec::with_capacity(sub.log2_size() as usize);
        let mut pw = self.one(big);
        for _ in 0..sub.log2_size() {
            rows.push(pw.bits);
            pw = self.mul(pw, y);
        }
        let mut back = HashMap::new();
        if sub.log2_size() <= 16 {
            for bits in 0..sub.order() as u32 {
                let mut img = 0u32;
                for (i, row) in rows.iter().enumerate() {
                    if (bits >> i) & 1 == 1 {
                        img ^= row;
                    }
                }
                back.insert(img, bits);
            }
        }
        Ok(Embedding { rows, back })
    }

    /// Image of `a` under the tower embedding into `target`.
    pub fn embed(&self, a: FieldElem, target: FieldId) -> Result<FieldElem> {
        if a.field == target {
            return Ok(a);
        }
        if !a.field.embeds_into(target) {
            return structural(format!(
                "no embedding GF(2^{}) -> GF(2^{})",
                a.field.log2_size(),
                target.log2_size()
            ));
        }
        let emb = self.embeddings[a.field.idx()][target.idx()]
            .as_ref()
            .expect("embedding built at construction");
        let mut img = 0u32;
        for (i, row) in emb.rows.iter().enumerate() {
            if (a.bits >> i) & 1 == 1 {
                img ^= row;
            }
        }
        Ok(FieldElem {
            field: target,
            bits: img,
        })
    }

    /// Partial inverse of `embed`: maps elements of the image back to `sub`.
    pub fn section(&self, a: FieldElem, sub: FieldId) -> Option<FieldElem> {
        if a.field == sub {
            return Some(a);
        }
        let emb = self.embeddings[sub.idx()][a.field.idx()].as_ref()?;
        emb.back.get(&a.bits).map(|&bits| FieldElem {
            field: sub,
            bits,
        })
    }

    /// Frobenius membership test: a lies in the image of GF(2^b) iff a^(2^b) = a.
    pub fn in_subfield_image(&self, a: FieldElem, sub: FieldId) -> bool {
        if !sub.embeds_into(a.field) {
            return false;
        }
        let mut f = a;
        for _ in 0..sub.log2_size() {
            f = self.mul(f, f);
        }
        f == a
    }

    /// The unique multiplicative subgroup of the given order, listed as
    /// successive powers of g^((2^b−1)/order); the identity comes first.
    pub fn multiplicative_subgroup(&self, field: FieldId, order: u64) -> Result<Vec<FieldElem>> {
        if order == 0 || !field.group_order().is_multiple_of(order) {
            return parameter(format!(
                "order {order} does not divide group order {}",
                field.group_order()
            ));
        }
        let step = self.pow(self.generator(field), field.group_order() / order);
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = self.one(field);
        for _ in 0..order {
            out.push(cur);
            cur = self.mul(cur, step);
        }
        Ok(out)
    }

    pub fn enumerate(&self, field: FieldId) -> impl Iterator<Item = FieldElem> + '_ {
        (0..field.order()).map(move |bits| self.elem(field, bits))
    }

    /// Uniform element; deterministic given the stream state.
    pub fn sample(&self, field: FieldId, rng: &mut DrawStream) -> FieldElem {
        self.elem(field, rng.below(field.order()))
    }

    /// Uniform nonzero element.
    pub fn sample_nonzero(&self, field: FieldId, rng: &mut DrawStream) -> FieldElem {
        self.elem(field, 1 + rng.below(field.group_order()))
    }

    /// The image of the full subfield GF(2^b) inside `ambient`, ordered by the
    /// subfield's own bit order. This is the canonical axis used for grids.
    pub fn subfield_axis(&self, sub: FieldId, ambient: FieldId) -> Result<Vec<FieldElem>> {
        if sub == ambient {
            return Ok(self.enumerate(sub).collect());
        }
        self.enumerate(sub)
            .map(|a| self.embed(a, ambient))
            .collect()
    }

    pub fn parse_hex(&self, field: FieldId, s: &str) -> Result<FieldElem> {
        if s.len() != field.hex_width() {
            return structural(format!(
                "hex literal {s:?} has wrong width for GF(2^{})",
                field.log2_size()
            ));
        }
        match u64::from_str_radix(s, 16) {
            Ok(bits) if field.log2_size() == 32 || bits < field.order() => {
                Ok(self.elem(field, bits))
            }
            _ => structural(format!("bad hex literal {s:?}")),
        }
    }

    fn self_test(&self) -> Result<()> {
        // generator order: g^(2^b-1) = 1, g^((2^b-1)/p) != 1 for prime p
        for id in ALL_FIELDS {
            let g = self.generator(id);
            let n = id.group_order();
            if !self.pow(g, n).is_one() {
                return structural(format!("generator order check failed for 2^{}", id.log2_size()));
            }
            for p in prime_factors(n) {
                if self.pow(g, n / p).is_one() {
                    return structural(format!(
                        "generator not primitive for 2^{}",
                        id.log2_size()
                    ));
                }
            }
        }
        // spot vectors from the shipped config
        for (field, a, b, prod) in self.config.check_vectors() {
            let x = self.elem(field, a);
            let y = self.elem(field, b);
            if self.mul(x, y).bits as u64 != prod {
                return structural(format!(
                    "config self-test vector failed in GF(2^{})",
                    field.log2_size()
                ));
            }
        }
        Ok(())
    }
}

fn build_tables(modulus: u64, b: u32) -> Result<(Vec<u32>, Vec<u32>)> {
    let n = (1u64 << b) - 1;
    let size = 1usize << b;
    let mut exp = vec![0u32; 2 * n as usize];
    let mut log = vec![0u32; size];
    let mut cur = 1u64;
    for i in 0..n {
        exp[i as usize] = cur as u32;
        log[cur as usize] = i as u32;
        // multiply by x
        cur <<= 1;
        if cur >> b == 1 {
            cur ^= modulus;
        }
        if cur == 1 && i + 1 != n {
            return structural(format!("modulus {modulus:#x} is not primitive"));
        }
    }
    // duplicate so mul can skip the mod
    for i in 0..n as usize {
        exp[n as usize + i] = exp[i];
    }
    Ok((exp, log))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut fs = vec![];
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            fs.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;

    fn t() -> Tower {
        Tower::default_tower()
    }

    #[test]
    fn gf4_mul_matches_hand_reduction() {
        // GF(4) = GF(2)[w]/(w^2+w+1): w*w = w+1, w*(w+1) = 1
        let t = t();
        let w = t.elem(FieldId::F2x2, 0b10);
        let w1 = t.elem(FieldId::F2x2, 0b11);
        assert_eq!(t.mul(w, w), w1);
        assert_eq!(t.mul(w, w1), t.one(FieldId::F2x2));
        assert_eq!(t.inv(w).unwrap(), w1);
    }

    #[test]
    fn identity_and_axioms_exhaustive_gf16() {
        let t = t();
        let f = FieldId::F2x4;
        let elems: Vec<_> = t.enumerate(f).collect();
        for &a in &elems {
            assert_eq!(t.mul(t.one(f), a), a);
            assert_eq!(t.add(a, a), t.zero(f));
            if !a.is_zero() {
                assert!(t.mul(a, t.inv(a).unwrap()).is_one());
            }
            for &b in &elems {
                assert_eq!(t.mul(a, b), t.mul(b, a));
                for &c in &elems {
                    assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
                    assert_eq!(
                        t.mul(a, t.add(b, c)),
                        t.add(t.mul(a, b), t.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn embedding_gf4_to_gf16_is_g5_and_homomorphic() {
        let t = t();
        let w = t.elem(FieldId::F2x2, 0b10);
        let img = t.embed(w, FieldId::F2x4).unwrap();
        let g5 = t.pow(t.generator(FieldId::F2x4), 5);
        assert_eq!(img, g5);
        // exhaustive homomorphism + Frobenius compatibility
        for a in t.enumerate(FieldId::F2x2) {
            let fa = t.embed(a, FieldId::F2x4).unwrap();
            assert_eq!(t.embed(t.mul(a, a), FieldId::F2x4).unwrap(), t.mul(fa, fa));
            for b in t.enumerate(FieldId::F2x2) {
                let fb = t.embed(b, FieldId::F2x4).unwrap();
                assert_eq!(t.embed(t.add(a, b), FieldId::F2x4).unwrap(), t.add(fa, fb));
                assert_eq!(t.embed(t.mul(a, b), FieldId::F2x4).unwrap(), t.mul(fa, fb));
            }
            assert_eq!(t.section(fa, FieldId::F2x2), Some(a));
        }
    }

    #[test]
    fn tower_embeddings_commute() {
        let t = t();
        for a in t.enumerate(FieldId::F2x4) {
            let direct = t.embed(a, FieldId::F2x16).unwrap();
            let via8 = t
                .embed(t.embed(a, FieldId::F2x8).unwrap(), FieldId::F2x16)
                .unwrap();
            assert_eq!(direct, via8);
            assert!(t.in_subfield_image(direct, FieldId::F2x4));
        }
    }

    #[test]
    fn subgroup_of_order_three_is_gf4_image() {
        let t = t();
        let h = t.multiplicative_subgroup(FieldId::F2x16, 3).unwrap();
        assert_eq!(h.len(), 3);
        assert!(h[0].is_one());
        // cube roots of unity
        for &a in &h {
            assert!(t.pow(a, 3).is_one());
        }
        // they sum to zero: 1 + w + w^2 = 0
        let sum = h.iter().fold(t.zero(FieldId::F2x16), |acc, &a| t.add(acc, a));
        assert!(sum.is_zero());
        // and coincide with the embedded GF(4)*
        for a in t.enumerate(FieldId::F2x2).skip(1) {
            let img = t.embed(a, FieldId::F2x16).unwrap();
            assert!(h.contains(&img));
        }
    }

    #[test]
    fn subgroup_order_must_divide() {
        let t = t();
        assert!(t.multiplicative_subgroup(FieldId::F2x16, 7).is_err());
        assert_eq!(
            t.multiplicative_subgroup(FieldId::F2x16, 1).unwrap(),
            vec![t.one(FieldId::F2x16)]
        );
    }

    #[test]
    fn enumerate_has_no_duplicates() {
        let t = t();
        let mut seen = std::collections::HashSet::new();
        for a in t.enumerate(FieldId::F2x2) {
            assert!(seen.insert(a.bits));
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn sampling_is_deterministic() {
        let t = t();
        let mut s1 = Seed::from_u64(42).stream("sample");
        let mut s2 = Seed::from_u64(42).stream("sample");
        for _ in 0..100 {
            assert_eq!(
                t.sample(FieldId::F2x16, &mut s1),
                t.sample(FieldId::F2x16, &mut s2)
            );
        }
    }

    #[test]
    fn sampling_chi_square_uniform() {
        // empirical chi-square over 10^5 samples of GF(16): statistic within
        // 3 sigma of the chi-square(15) mean
        let t = t();
        let mut s = Seed::from_u64(0xc4).stream("chi");
        let n = 100_000u32;
        let mut counts = [0u32; 16];
        for _ in 0..n {
            counts[t.sample(FieldId::F2x4, &mut s).bits as usize] += 1;
        }
        let expect = n as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expect;
                d * d / expect
            })
            .sum();
        // chi-square with 15 degrees of freedom: mean 15, sigma sqrt(30)
        let sigma = 30.0f64.sqrt();
        assert!(
            (chi2 - 15.0).abs() < 3.0 * sigma,
            "chi-square statistic {chi2} outside 15 ± 3·sqrt(30)"
        );
    }

    #[test]
    fn f2x32_mul_agrees_with_clmul_identities() {
        let t = t();
        let f = FieldId::F2x32;
        let g = t.generator(f);
        assert!(t.pow(g, f.group_order()).is_one());
        let mut s = Seed::from_u64(9).stream("f32");
        for _ in 0..50 {
            let a = t.sample(f, &mut s);
            let b = t.sample(f, &mut s);
            let c = t.sample(f, &mut s);
            assert_eq!(t.mul(a, b), t.mul(b, a));
            assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
            if !a.is_zero() {
                assert!(t.mul(a, t.inv(a).unwrap()).is_one());
            }
        }
    }

    #[test]
    fn hex_round_trip() {
        let t = t();
        let a = t.elem(FieldId::F2x16, 0x0a3f);
        assert_eq!(a.to_hex(), "0a3f");
        assert_eq!(t.parse_hex(FieldId::F2x16, "0a3f").unwrap(), a);
        assert_eq!(t.elem(FieldId::F2x2, 3).to_hex(), "3");
        assert!(t.parse_hex(FieldId::F2x16, "a3f").is_err());
    }
}
