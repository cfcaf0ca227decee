//! Vanishing polynomials, vanishing division (univariate and multivariate),
//! and the variable-splitting embedding of Reed-Solomon into Reed-Muller.

use crate::error::{precondition, structural, Result};
use crate::field::{FieldElem, Tower};
use crate::poly::{MultiPoly, UniPoly};

/// V_A(x) = ∏_{a ∈ A} (x − a). Monic, degree |A|, zero exactly on A.
pub fn vanishing_poly(t: &Tower, points: &[FieldElem]) -> Result<UniPoly> {
    if points.is_empty() {
        return structural("vanishing polynomial of an empty set");
    }
    let field = points[0].field;
    for (i, &a) in points.iter().enumerate() {
        if points[i + 1..].contains(&a) {
            return structural("vanishing set has a duplicate element");
        }
    }
    let mut p = UniPoly::constant(t.one(field));
    for &a in points {
        // p *= (x + a)
        let lin = UniPoly::new(field, vec![a, t.one(field)]);
        p = p.mul(t, &lin);
    }
    Ok(p)
}

/// V_A evaluated at a single point, without building the polynomial.
pub fn vanishing_eval(t: &Tower, points: &[FieldElem], x: FieldElem) -> FieldElem {
    let mut acc = t.one(x.field);
    for &a in points {
        acc = t.mul(acc, t.add(x, a));
    }
    acc
}

/// Division with remainder by a monic divisor.
pub fn uni_divmod(t: &Tower, f: &UniPoly, g: &UniPoly) -> (UniPoly, UniPoly) {
    let field = f.field;
    let gd = g.degree().expect("divisor must be nonzero");
    assert!(g.coeff(gd).is_one(), "divisor must be monic");
    let mut rem: Vec<FieldElem> = f.coeffs().to_vec();
    let mut quo = vec![t.zero(field); rem.len().saturating_sub(gd)];
    while rem.len() > gd {
        let lead = rem[rem.len() - 1];
        let shift = rem.len() - 1 - gd;
        if !lead.is_zero() {
            quo[shift] = lead;
            for i in 0..=gd {
                let v = t.mul(lead, g.coeff(i));
                rem[shift + i] = t.add(rem[shift + i], v);
            }
        }
        rem.pop();
    }
    (UniPoly::new(field, quo), UniPoly::new(field, rem))
}

/// g with f = V_A · g; precondition: f vanishes on A (dishonest input trips it).
pub fn divide_by_vanishing_uni(t: &Tower, f: &UniPoly, points: &[FieldElem]) -> Result<UniPoly> {
    for &a in points {
        if !f.eval(t, a).is_zero() {
            return precondition(format!(
                "polynomial does not vanish at {} in the divisor set",
                a.to_hex()
            ));
        }
    }
    if f.is_zero() {
        return Ok(UniPoly::zero(f.field));
    }
    let va = vanishing_poly(t, points)?;
    let (q, r) = uni_divmod(t, f, &va);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Multivariate vanishing division: f = R + Σ_i V_{A_i}(x_i)·Q_i with R of
/// individual degrees ≤ (|A_i|−1). R is unique; it vanishes iff f vanishes on
/// the product set. Monomial elimination, variable by variable.
pub fn multivariate_vanishing_division(
    t: &Tower,
    f: &MultiPoly,
    sets: &[Vec<FieldElem>],
) -> Result<(MultiPoly, Vec<MultiPoly>)> {
    if sets.len() != f.arity {
        return structural("one vanishing set per variable is required");
    }
    let field = f.field;
    let mut rem = f.clone();
    let mut quotients = Vec::with_capacity(sets.len());
    for (var, set) in sets.iter().enumerate() {
        let va = vanishing_poly(t, set)?;
        let d = set.len() as u16;
        let mut q = MultiPoly::zero(field, f.arity);
        loop {
            // highest exponent in this variable with e >= d
            let target = rem
                .terms
                .iter()
                .filter(|(e, _)| e[var] >= d)
                .max_by_key(|(e, _)| e[var])
                .map(|(&e, &c)| (e, c));
            let Some((e, c)) = target else { break };
            let mut shifted = e;
            shifted[var] = e[var] - d;
            // q += c * x^shifted ; rem -= c * x^shifted * V_A(x_var)
            q = q.add(t, &MultiPoly::monomial(c, f.arity, shifted));
            let mut sub = MultiPoly::zero(field, f.arity);
            for (k, &vc) in va.coeffs().iter().enumerate() {
                if vc.is_zero() {
                    continue;
                }
                let mut me = shifted;
                me[var] += k as u16;
                sub = sub.add(t, &MultiPoly::monomial(t.mul(c, vc), f.arity, me));
            }
            rem = rem.add(t, &sub);
        }
        quotients.push(q);
    }
    Ok((rem, quotients))
}

/// The bivariate split: Q with individual degrees ≤ (⌊d/k⌋, k−1) and
/// Q(x^k, x) = f(x). Exponents decompose as e = k·s + t.
pub fn split_variable(f: &UniPoly, k: usize) -> Result<MultiPoly> {
    if k == 0 {
        return structural("split stride must be positive");
    }
    let mut q = MultiPoly::zero(f.field, 2);
    for (e, &c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = (e / k) as u16;
        let r = (e % k) as u16;
        q.terms.insert([s, r, 0], c);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldId;
    use crate::rng::Seed;

    fn t() -> Tower {
        Tower::default_tower()
    }

    #[test]
    fn vanishing_poly_of_zero_one() {
        // A = {0,1} in characteristic 2: V = x^2 + x
        let t = t();
        let f = FieldId::F2x16;
        let v = vanishing_poly(&t, &[t.zero(f), t.one(f)]).unwrap();
        assert_eq!(
            v,
            UniPoly::new(f, vec![t.zero(f), t.one(f), t.one(f)])
        );
        assert!(vanishing_poly(&t, &[t.one(f), t.one(f)]).is_err());
    }

    #[test]
    fn vanishing_poly_of_full_subfield() {
        // product of (x - a) over all of GF(4) = x^4 + x, computed in the
        // embedded image inside GF(2^16)
        let t = t();
        let f = FieldId::F2x16;
        let pts = t.subfield_axis(FieldId::F2x2, f).unwrap();
        let v = vanishing_poly(&t, &pts).unwrap();
        let mut expect = vec![t.zero(f); 5];
        expect[1] = t.one(f);
        expect[4] = t.one(f);
        assert_eq!(v, UniPoly::new(f, expect));
    }

    #[test]
    fn divide_by_vanishing_examples() {
        let t = t();
        let f = FieldId::F2x16;
        let zero_one = [t.zero(f), t.one(f)];
        // f = x^3 + x^2 = (x^2 + x) * x
        let mut coeffs = vec![t.zero(f); 4];
        coeffs[2] = t.one(f);
        coeffs[3] = t.one(f);
        let p = UniPoly::new(f, coeffs);
        let g = divide_by_vanishing_uni(&t, &p, &zero_one).unwrap();
        assert_eq!(g, UniPoly::monomial(t.one(f), 1));
        // zero divides to zero
        assert!(divide_by_vanishing_uni(&t, &UniPoly::zero(f), &zero_one)
            .unwrap()
            .is_zero());
        // x does not vanish at 1
        let x = UniPoly::monomial(t.one(f), 1);
        assert!(matches!(
            divide_by_vanishing_uni(&t, &x, &zero_one),
            Err(crate::error::Error::Precondition(_))
        ));
    }

    #[test]
    fn multivariate_division_single_step() {
        // f = x^2 over A_1 = A_2 = {0,1}: x^2 = (x^2+x)·1 + x, so R = x, Q_1 = 1
        let t = t();
        let f = FieldId::F2x16;
        let p = MultiPoly::monomial(t.one(f), 2, [2, 0, 0]);
        let sets = vec![vec![t.zero(f), t.one(f)], vec![t.zero(f), t.one(f)]];
        let (r, qs) = multivariate_vanishing_division(&t, &p, &sets).unwrap();
        assert_eq!(r, MultiPoly::monomial(t.one(f), 2, [1, 0, 0]));
        assert_eq!(qs[0], MultiPoly::constant(t.one(f), 2));
        assert!(qs[1].is_zero());
    }

    #[test]
    fn multivariate_division_round_trip_trivariate() {
        let t = t();
        let f = FieldId::F2x16;
        let mut rng = Seed::from_u64(5).stream("mvd");
        let h = t.multiplicative_subgroup(f, 3).unwrap();
        let sets = vec![h.clone(), h.clone(), h];
        for _ in 0..30 {
            // random sparse trivariate polynomial
            let mut p = MultiPoly::zero(f, 3);
            for _ in 0..8 {
                let e = [
                    rng.below(7) as u16,
                    rng.below(7) as u16,
                    rng.below(7) as u16,
                ];
                p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
            }
            let (r, qs) = multivariate_vanishing_division(&t, &p, &sets).unwrap();
            assert!(r.individual_degrees_at_most(&[2, 2, 2]));
            // reconstruction: p == r + sum V_i * q_i, checked by evaluation
            let mut probe = Seed::from_u64(99).stream("mvd_probe");
            for _ in 0..20 {
                let pt = [
                    t.sample(f, &mut probe),
                    t.sample(f, &mut probe),
                    t.sample(f, &mut probe),
                ];
                let mut rhs = r.eval(&t, &pt);
                for (var, q) in qs.iter().enumerate() {
                    let v = vanishing_eval(&t, &sets[var], pt[var]);
                    rhs = t.add(rhs, t.mul(v, q.eval(&t, &pt)));
                }
                assert_eq!(p.eval(&t, &pt), rhs);
            }
        }
    }

    #[test]
    fn split_examples() {
        let t = t();
        let f = FieldId::F2x16;
        let one = t.one(f);
        // x^5 with k = 2 -> x^2 y
        let q = split_variable(&UniPoly::monomial(one, 5), 2).unwrap();
        assert_eq!(q, MultiPoly::monomial(one, 2, [2, 1, 0]));
        // constant stays constant
        let c = t.elem(f, 0xab);
        let qc = split_variable(&UniPoly::constant(c), 4).unwrap();
        assert_eq!(qc, MultiPoly::constant(c, 2));
        // recomposition identity by evaluation for random degree <= 15, k = 4
        let mut rng = Seed::from_u64(8).stream("split");
        for _ in 0..20 {
            let coeffs: Vec<_> = (0..16).map(|_| t.sample(f, &mut rng)).collect();
            let p = UniPoly::new(f, coeffs);
            let q = split_variable(&p, 4).unwrap();
            assert!(q.individual_degrees_at_most(&[3, 3]));
            for x in t.subfield_axis(FieldId::F2x4, f).unwrap() {
                let xk = t.pow(x, 4);
                assert_eq!(q.eval(&t, &[xk, x]), p.eval(&t, x));
            }
        }
    }
}
