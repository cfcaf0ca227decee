//! Proximity-generator coefficient sampling, the error function err, and the
//! combine constructions for mixing functions of different degrees into one
//! target degree.
//!
//! For k = 2 the coefficient distribution is uniform over F_{q'}²; for k > 2
//! we use geometric powers (1, r, r², …) of one uniform element, one field
//! element of randomness per batch. ξ₀, the degree-shift randomizer, is always
//! an independent uniform draw even when every shift is x^0.

use crate::error::{structural, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::poly::{EvalTable, MultiPoly, UniPoly};
use crate::ratio::Ratio;
use crate::rng::DrawStream;

/// err(d, q, q') = q⁴ / (d²·q'), as an exact rational.
pub fn err(d: u64, q: u64, q_prime: u64) -> Ratio {
    assert!(d > 0 && q > 0 && q_prime > 0);
    let num = q as u128 * q as u128 * q as u128 * q as u128;
    let den = d as u128 * d as u128 * q_prime as u128;
    let g = gcd_u128(num, den);
    Ratio::new((num / g) as u64, (den / g) as u64)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Mixing coefficients: ξ₁..ξ_k plus the optional shift randomizer ξ₀.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProxCoeffs {
    pub xi: Vec<FieldElem>,
    pub xi0: Option<FieldElem>,
}

/// Draw coefficients for k functions: k = 1 one uniform element, k = 2 an
/// independent uniform pair, k > 2 geometric powers of one uniform element.
pub fn prox_sample(
    t: &Tower,
    k: usize,
    field: FieldId,
    with_shift: bool,
    rng: &mut DrawStream,
) -> ProxCoeffs {
    assert!(k >= 1);
    let xi = match k {
        1 => vec![t.sample(field, rng)],
        2 => vec![t.sample(field, rng), t.sample(field, rng)],
        _ => {
            let r = t.sample(field, rng);
            let mut out = Vec::with_capacity(k);
            let mut cur = t.one(field);
            for _ in 0..k {
                out.push(cur);
                cur = t.mul(cur, r);
            }
            out
        }
    };
    let xi0 = if with_shift {
        Some(t.sample(field, rng))
    } else {
        None
    };
    ProxCoeffs { xi, xi0 }
}

fn check_shape(fs: &[&EvalTable], ds: &[i64], d_target: i64, coeffs: &ProxCoeffs) -> Result<()> {
    if fs.is_empty() || fs.len() != ds.len() || coeffs.xi.len() != fs.len() {
        return structural("combine inputs and coefficients must align");
    }
    if coeffs.xi0.is_none() {
        return structural("combine requires the shift randomizer xi0");
    }
    if ds.iter().any(|&d| d > d_target) {
        return structural("target degree below an input degree");
    }
    for f in &fs[1..] {
        if !f.domain.same_as(&fs[0].domain) {
            return structural("combine inputs must share a domain");
        }
    }
    Ok(())
}

/// Univariate combine: Σ ξ_i·(f_i + ξ₀·x^{d'−d_i}·f_i), pointwise over the
/// shared domain. Honest degree-d_i inputs give degree ≤ d'.
pub fn combine_uni(
    t: &Tower,
    fs: &[&EvalTable],
    ds: &[i64],
    d_target: i64,
    coeffs: &ProxCoeffs,
) -> Result<EvalTable> {
    check_shape(fs, ds, d_target, coeffs)?;
    let dom = fs[0].domain.clone();
    if dom.arity() != 1 {
        return structural("combine_uni expects univariate tables");
    }
    let xi0 = coeffs.xi0.unwrap();
    let field = dom.field;
    let mut values = vec![t.zero(field); dom.size()];
    for (fi, (&f, &d)) in fs.iter().zip(ds).enumerate() {
        let shift = (d_target - d) as u64;
        for (j, &x) in dom.axes[0].points.iter().enumerate() {
            let fx = f.values[j];
            let shifted = t.mul(xi0, t.mul(t.pow(x, shift), fx));
            let term = t.mul(coeffs.xi[fi], t.add(fx, shifted));
            values[j] = t.add(values[j], term);
        }
    }
    EvalTable::new(dom, values)
}

/// The same combination at the polynomial level, for honest provers.
pub fn combine_uni_poly(
    t: &Tower,
    fs: &[&UniPoly],
    ds: &[i64],
    d_target: i64,
    coeffs: &ProxCoeffs,
) -> UniPoly {
    let xi0 = coeffs.xi0.expect("shift randomizer");
    let field = fs[0].field;
    let mut acc = UniPoly::zero(field);
    for (fi, (&f, &d)) in fs.iter().zip(ds).enumerate() {
        let shift = (d_target - d) as usize;
        let shifted = f
            .mul(t, &UniPoly::monomial(t.one(field), shift))
            .scale(t, xi0);
        let term = f.add(t, &shifted).scale(t, coeffs.xi[fi]);
        acc = acc.add(t, &term);
    }
    acc
}

/// Individual-degree bivariate combine: shift monomial x₁^{d'−d_{i,1}}·x₂^{d'−d_{i,2}}.
pub fn combine_ind(
    t: &Tower,
    fs: &[&EvalTable],
    ds: &[(i64, i64)],
    d_target: (i64, i64),
    coeffs: &ProxCoeffs,
) -> Result<EvalTable> {
    let flat: Vec<i64> = ds.iter().map(|&(a, b)| a.max(b)).collect();
    check_shape(fs, &flat, d_target.0.max(d_target.1), coeffs)?;
    let dom = fs[0].domain.clone();
    if dom.arity() != 2 {
        return structural("combine_ind expects bivariate tables");
    }
    if ds.iter().any(|&(a, b)| a > d_target.0 || b > d_target.1) {
        return structural("target degree below an input degree");
    }
    let xi0 = coeffs.xi0.unwrap();
    let field = dom.field;
    let mut values = vec![t.zero(field); dom.size()];
    for (fi, (&f, &(d1, d2))) in fs.iter().zip(ds).enumerate() {
        let (s1, s2) = ((d_target.0 - d1) as u64, (d_target.1 - d2) as u64);
        for (idx, multi) in dom.iter_indices().enumerate() {
            let x1 = dom.axes[0].points[multi[0]];
            let x2 = dom.axes[1].points[multi[1]];
            let fx = f.values[idx];
            let mono = t.mul(t.pow(x1, s1), t.pow(x2, s2));
            let shifted = t.mul(xi0, t.mul(mono, fx));
            let term = t.mul(coeffs.xi[fi], t.add(fx, shifted));
            values[idx] = t.add(values[idx], term);
        }
    }
    EvalTable::new(dom, values)
}

pub fn combine_ind_poly(
    t: &Tower,
    fs: &[&MultiPoly],
    ds: &[(i64, i64)],
    d_target: (i64, i64),
    coeffs: &ProxCoeffs,
) -> MultiPoly {
    let xi0 = coeffs.xi0.expect("shift randomizer");
    let field = fs[0].field;
    let mut acc = MultiPoly::zero(field, 2);
    for (fi, (&f, &(d1, d2))) in fs.iter().zip(ds).enumerate() {
        let mono = MultiPoly::monomial(
            xi0,
            2,
            [(d_target.0 - d1) as u16, (d_target.1 - d2) as u16, 0],
        );
        let term = f.add(t, &f.mul(t, &mono)).scale(t, coeffs.xi[fi]);
        acc = acc.add(t, &term);
    }
    acc
}

/// Total-degree combine for arity 2 or 3: shift monomial x₁^{d'−d_i} only.
pub fn combine_tot(
    t: &Tower,
    fs: &[&EvalTable],
    ds: &[i64],
    d_target: i64,
    coeffs: &ProxCoeffs,
) -> Result<EvalTable> {
    check_shape(fs, ds, d_target, coeffs)?;
    let dom = fs[0].domain.clone();
    if dom.arity() < 2 {
        return structural("combine_tot expects arity 2 or 3");
    }
    let xi0 = coeffs.xi0.unwrap();
    let field = dom.field;
    let mut values = vec![t.zero(field); dom.size()];
    for (fi, (&f, &d)) in fs.iter().zip(ds).enumerate() {
        let shift = (d_target - d) as u64;
        for (idx, multi) in dom.iter_indices().enumerate() {
            let x1 = dom.axes[0].points[multi[0]];
            let fx = f.values[idx];
            let shifted = t.mul(xi0, t.mul(t.pow(x1, shift), fx));
            let term = t.mul(coeffs.xi[fi], t.add(fx, shifted));
            values[idx] = t.add(values[idx], term);
        }
    }
    EvalTable::new(dom, values)
}

pub fn combine_tot_poly(
    t: &Tower,
    fs: &[&MultiPoly],
    ds: &[i64],
    d_target: i64,
    coeffs: &ProxCoeffs,
) -> MultiPoly {
    let xi0 = coeffs.xi0.expect("shift randomizer");
    let field = fs[0].field;
    let arity = fs[0].arity;
    let mut acc = MultiPoly::zero(field, arity);
    for (fi, (&f, &d)) in fs.iter().zip(ds).enumerate() {
        let mono = MultiPoly::monomial(xi0, arity, [(d_target - d) as u16, 0, 0]);
        let term = f.add(t, &f.mul(t, &mono)).scale(t, coeffs.xi[fi]);
        acc = acc.add(t, &term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{CodeSpec, DEFAULT_ENUM_CAP};
    use crate::field::FieldId;
    use crate::poly::GridDomain;
    use crate::rng::Seed;

    fn t() -> Tower {
        Tower::default_tower()
    }

    #[test]
    fn err_values() {
        // err(4, 16, 2^16) = 16^4/(16 * 65536) = 1/16
        assert_eq!(err(4, 16, 1 << 16), Ratio::new(1, 16));
        // err(2, 16, 2^32) = 65536/(4 * 2^32) = 2^-18
        assert_eq!(err(2, 16, 1 << 32), Ratio::new(1, 1 << 18));
        // doubling q' halves it
        let a = err(3, 8, 1 << 16);
        let b = err(3, 8, 1 << 17);
        assert_eq!(a, b + b);
    }

    #[test]
    fn prox_sample_shapes() {
        let t = t();
        let mut rng = Seed::from_u64(1).stream("prox");
        let c1 = prox_sample(&t, 1, FieldId::F2x16, true, &mut rng);
        assert_eq!(c1.xi.len(), 1);
        assert!(c1.xi0.is_some());
        let c2 = prox_sample(&t, 2, FieldId::F2x16, true, &mut rng);
        assert_eq!(c2.xi.len(), 2);
        // k > 2: geometric powers of one element
        let c4 = prox_sample(&t, 4, FieldId::F2x16, false, &mut rng);
        assert!(c4.xi[0].is_one());
        let r = c4.xi[1];
        assert_eq!(c4.xi[2], t.mul(r, r));
        assert_eq!(c4.xi[3], t.mul(t.mul(r, r), r));
    }

    #[test]
    fn prox_marginals_roughly_uniform() {
        // With geometric powers (1, r, r², r³) only the r coordinate has a
        // uniform marginal over GF(2^16): xi_1 is the constant 1, and the cube
        // map is 3-to-1 since 3 divides 2^16 − 1. Check r's marginal within
        // 3 sigma over 10^5 draws, bucketed by low nibble.
        let t = t();
        let mut rng = Seed::from_u64(5).stream("prox_marginal");
        let n = 100_000usize;
        let mut counts = [0u32; 16];
        for _ in 0..n {
            let c = prox_sample(&t, 4, FieldId::F2x16, false, &mut rng);
            counts[(c.xi[1].bits & 0xf) as usize] += 1;
        }
        let expect = n as f64 / 16.0;
        let sigma = (expect * (1.0 - 1.0 / 16.0)).sqrt();
        for &c in &counts {
            assert!(
                (c as f64 - expect).abs() < 3.0 * sigma,
                "bucket count {c} too far from {expect}"
            );
        }
    }

    #[test]
    fn combine_uni_degree_contract() {
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 1);
        let mut rng = Seed::from_u64(7).stream("combine");
        for _ in 0..1000 {
            // honest degree-2 and degree-1 inputs, target 4
            let p1 = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
            let p2 = UniPoly::new(f, (0..2).map(|_| t.sample(f, &mut rng)).collect());
            let t1 = EvalTable::new(dom.clone(), p1.eval_many(&t, &dom.axes[0].points)).unwrap();
            let t2 = EvalTable::new(dom.clone(), p2.eval_many(&t, &dom.axes[0].points)).unwrap();
            let coeffs = prox_sample(&t, 2, f, true, &mut rng);
            let out = combine_uni(&t, &[&t1, &t2], &[2, 1], 4, &coeffs).unwrap();
            let spec = CodeSpec::rs(4, dom.clone());
            assert!(spec.table_in_code(&t, &out).unwrap());
            let po = combine_uni_poly(&t, &[&p1, &p2], &[2, 1], 4, &coeffs);
            for (j, &x) in dom.axes[0].points.iter().enumerate() {
                assert_eq!(po.eval(&t, x), out.values[j]);
            }
        }
    }

    #[test]
    fn combine_zero_inputs_give_zero() {
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 1);
        let z = EvalTable::constant(&t, dom.clone(), t.zero(f));
        let mut rng = Seed::from_u64(2).stream("zero");
        let coeffs = prox_sample(&t, 2, f, true, &mut rng);
        let out = combine_uni(&t, &[&z, &z], &[1, 2], 4, &coeffs).unwrap();
        assert!(out.values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn combine_single_at_target_degree_is_scalar_multiple() {
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 1);
        let mut rng = Seed::from_u64(3).stream("single");
        let p = UniPoly::new(f, (0..5).map(|_| t.sample(f, &mut rng)).collect());
        let tab = EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
        let coeffs = prox_sample(&t, 1, f, true, &mut rng);
        let out = combine_uni(&t, &[&tab], &[4], 4, &coeffs).unwrap();
        // (xi1 + xi1*xi0) * f, same degree
        let scale = t.mul(coeffs.xi[0], t.add(t.one(f), coeffs.xi0.unwrap()));
        for (j, &v) in out.values.iter().enumerate() {
            assert_eq!(v, t.mul(scale, tab.values[j]));
        }
    }

    #[test]
    fn combine_ind_degree_contract() {
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 2);
        let mut rng = Seed::from_u64(13).stream("ind");
        for _ in 0..300 {
            // honest (1,2) and (2,1) inputs, target (2,2)
            let mut p1 = MultiPoly::zero(f, 2);
            p1 = p1.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 2, [1, 2, 0]));
            p1 = p1.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 2, [0, 1, 0]));
            let mut p2 = MultiPoly::zero(f, 2);
            p2 = p2.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 2, [2, 1, 0]));
            p2 = p2.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 2, [1, 0, 0]));
            let t1 = p1.eval_on_grid(&t, &dom);
            let t2 = p2.eval_on_grid(&t, &dom);
            let coeffs = prox_sample(&t, 2, f, true, &mut rng);
            let out = combine_ind(&t, &[&t1, &t2], &[(1, 2), (2, 1)], (2, 2), &coeffs).unwrap();
            let spec = CodeSpec::rm_individual(vec![2, 2], dom.clone());
            assert!(spec.table_in_code(&t, &out).unwrap());
            let po = combine_ind_poly(&t, &[&p1, &p2], &[(1, 2), (2, 1)], (2, 2), &coeffs);
            assert_eq!(po.eval_on_grid(&t, &dom).values, out.values);
        }
    }

    #[test]
    fn combine_tot_trivariate_degree_contract() {
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x2, f, 3);
        let mut rng = Seed::from_u64(29).stream("tot");
        for _ in 0..300 {
            let mut p1 = MultiPoly::zero(f, 3);
            p1 = p1.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, [1, 1, 0]));
            let mut p2 = MultiPoly::zero(f, 3);
            p2 = p2.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, [0, 1, 0]));
            let t1 = p1.eval_on_grid(&t, &dom);
            let t2 = p2.eval_on_grid(&t, &dom);
            let coeffs = prox_sample(&t, 2, f, true, &mut rng);
            let out = combine_tot(&t, &[&t1, &t2], &[2, 1], 3, &coeffs).unwrap();
            let spec = CodeSpec::rm_total(3, dom.clone());
            assert!(spec.table_in_code(&t, &out).unwrap());
            let po = combine_tot_poly(&t, &[&p1, &p2], &[2, 1], 3, &coeffs);
            assert_eq!(po.eval_on_grid(&t, &dom).values, out.values);
        }
    }

    #[test]
    fn combine_soundness_far_input_stays_far_statistically() {
        // one input planted far from its degree; the combined function rarely
        // lands near the target code (threshold query, exact)
        // The agreement parameter must sit above the trivial floor: any table
        // meets a degree-4 codeword on 5 of 16 points, so we plant eps = 9/16
        // agreement and test the threshold 11/16.
        let t = t();
        let f = FieldId::F2x16;
        let dom = GridDomain::subfield_power(&t, FieldId::F2x4, f, 1);
        let spec4 = CodeSpec::rs(4, dom.clone());
        let mut rng = Seed::from_u64(41).stream("far");
        let planted = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let mut far_vals = planted.eval_many(&t, &dom.axes[0].points);
        for v in far_vals.iter_mut().take(7) {
            *v = t.add(*v, t.sample_nonzero(f, &mut rng));
        }
        let far = EvalTable::new(dom.clone(), far_vals).unwrap();
        let (_, base_agr) = crate::codes::code_agreement_oracle(
            &t,
            &far,
            &CodeSpec::rs(2, dom.clone()),
            None,
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        assert_eq!(base_agr, Ratio::new(9, 16));
        let good = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
        let good_tab =
            EvalTable::new(dom.clone(), good.eval_many(&t, &dom.axes[0].points)).unwrap();
        let min_matches = 11usize;
        let mut bad = 0;
        let trials = 200;
        for i in 0..trials {
            let mut draw = Seed::from_u64(41).stream(&format!("far_draw{i}"));
            let coeffs = prox_sample(&t, 2, f, true, &mut draw);
            let out = combine_uni(&t, &[&far, &good_tab], &[2, 2], 4, &coeffs).unwrap();
            if crate::codes::exceeds_agreement_exact(
                &t,
                &out,
                &spec4,
                None,
                min_matches,
                DEFAULT_ENUM_CAP,
            )
            .unwrap()
            {
                bad += 1;
            }
        }
        assert!(
            bad <= trials / 20,
            "combined function near code in {bad}/{trials} trials"
        );
    }
}
