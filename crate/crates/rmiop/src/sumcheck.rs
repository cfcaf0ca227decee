//! Sumcheck over a multiplicative subgroup: the subgroup-sum identity
//! Σ_H R = R(0)·|H| for deg(R) ≤ |H|−1, the univariate sumcheck Poly-IOP, and
//! the trivariate sumcheck Poly-IOP built from three univariate instances.
//!
//! |H| always divides 2^b − 1 here, so |H| is odd and equals 1 in the field;
//! α/|H| is still computed through the generic field inverse.

use crate::error::{precondition, Result};
use crate::field::{FieldElem, Tower};
use crate::iop::{Answers, DrawLog, PolyIop, Session, SlotSpec, Verdict};
use crate::poly::{uni_divmod, vanishing_eval, vanishing_poly, MultiPoly, UniPoly};

/// Brute-force sum of a polynomial over H^arity.
pub fn subgroup_sum(t: &Tower, f: &MultiPoly, h: &[FieldElem]) -> FieldElem {
    let field = f.field;
    let mut acc = t.zero(field);
    match f.arity {
        1 => {
            for &a in h {
                acc = t.add(acc, f.eval(t, &[a]));
            }
        }
        2 => {
            for &a in h {
                for &b in h {
                    acc = t.add(acc, f.eval(t, &[a, b]));
                }
            }
        }
        3 => {
            for &a in h {
                for &b in h {
                    for &c in h {
                        acc = t.add(acc, f.eval(t, &[a, b, c]));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    acc
}

/// The field element |H| mod 2 (subgroup orders here are odd, so this is 1).
fn h_size_elem(t: &Tower, field: crate::field::FieldId, h_len: usize) -> Result<FieldElem> {
    if h_len.is_multiple_of(2) {
        return crate::error::parameter("|H| must be odd (invertible in characteristic 2)");
    }
    Ok(t.one(field))
}

/// Honest prover decomposition f̂ = α/|H| + V_H·F̂ + x·R̂ with
/// deg F̂ ≤ d'−|H| and deg R̂ ≤ |H|−2. Precondition: Σ_H f̂ = α.
pub fn univar_sumcheck_prover(
    t: &Tower,
    f: &UniPoly,
    h: &[FieldElem],
    alpha: FieldElem,
) -> Result<(UniPoly, UniPoly)> {
    let field = f.field;
    let v_h = vanishing_poly(t, h)?;
    let (big_f, rem) = uni_divmod(t, f, &v_h);
    let h_inv = t.inv(h_size_elem(t, field, h.len())?)?;
    let alpha_over_h = t.mul(alpha, h_inv);
    // rem agrees with f on H; its constant term must be α/|H|
    if rem.coeff(0) != alpha_over_h {
        return precondition("claimed sum disagrees with the decomposition");
    }
    // R̂ = (rem − α/|H|)/x
    let mut shifted = rem.coeffs().to_vec();
    if shifted.is_empty() {
        shifted.push(t.zero(field));
    }
    shifted[0] = t.add(shifted[0], alpha_over_h);
    debug_assert!(shifted[0].is_zero());
    let r_hat = UniPoly::new(field, shifted[1..].to_vec());
    Ok((big_f, r_hat))
}

/// The verifier's single-point identity check at γ:
/// f(γ) = α/|H| + V_H(γ)·F̂(γ) + γ·R̂(γ).
pub fn univar_sumcheck_check(
    t: &Tower,
    h: &[FieldElem],
    alpha: FieldElem,
    gamma: FieldElem,
    f_gamma: FieldElem,
    fhat_gamma: FieldElem,
    rhat_gamma: FieldElem,
) -> bool {
    let field = alpha.field;
    let h_inv = t
        .inv(h_size_elem(t, field, h.len()).expect("odd subgroup"))
        .expect("nonzero");
    let alpha_over_h = t.mul(alpha, h_inv);
    let rhs = t.add(
        alpha_over_h,
        t.add(
            t.mul(vanishing_eval(t, h, gamma), fhat_gamma),
            t.mul(gamma, rhat_gamma),
        ),
    );
    f_gamma == rhs
}

/// Standalone univariate sumcheck Poly-IOP for Σ_H f̂ = α; f̂ is the input
/// oracle, F̂ and R̂ are the prover messages, γ the single draw.
pub struct UniSumcheckIop {
    pub tower: std::sync::Arc<Tower>,
    pub h: Vec<FieldElem>,
    pub d_prime: i64,
    pub alpha: FieldElem,
    pub input_poly: MultiPoly,
    pub slot_domain: crate::poly::GridDomain,
}

impl UniSumcheckIop {
    fn true_sum(&self) -> FieldElem {
        subgroup_sum(&self.tower, &self.input_poly, &self.h)
    }
}

impl PolyIop for UniSumcheckIop {
    fn name(&self) -> String {
        "uni-sumcheck".into()
    }

    fn rounds(&self) -> usize {
        1
    }

    fn slots(&self, _round: usize) -> Vec<SlotSpec> {
        let h = self.h.len() as i64;
        vec![
            SlotSpec {
                label: "Fhat".into(),
                round: 0,
                code: crate::codes::CodeSpec::rs(self.d_prime - h, self.slot_domain.clone()),
                eps: 0.5,
            },
            SlotSpec {
                label: "Rhat".into(),
                round: 0,
                code: crate::codes::CodeSpec::rs(h - 2, self.slot_domain.clone()),
                eps: 0.5,
            },
        ]
    }

    fn make_draws(&self, _round: usize, sess: &mut Session, log: &mut DrawLog) -> Result<()> {
        let g = sess.v_draw("gamma", self.input_poly.field, 1)?;
        log.insert("gamma", g);
        Ok(())
    }

    fn queries(&self, _round: usize, log: &DrawLog) -> Vec<(String, Vec<FieldElem>)> {
        let g = log.get("gamma")[0];
        vec![("Fhat".into(), vec![g]), ("Rhat".into(), vec![g])]
    }

    fn input_queries(&self, _round: usize, log: &DrawLog) -> Vec<Vec<FieldElem>> {
        vec![vec![log.get("gamma")[0]]]
    }

    fn honest_polys(&self, _round: usize, _log: &DrawLog) -> Result<Vec<MultiPoly>> {
        // best effort: decompose with respect to the true sum, so a wrong
        // claimed α leaves a nonzero degree-d' disagreement for the check
        let f = self.input_poly.to_uni();
        let (fh, rh) = univar_sumcheck_prover(&self.tower, &f, &self.h, self.true_sum())?;
        Ok(vec![fh.to_multi(1, 0), rh.to_multi(1, 0)])
    }

    fn input_value(&self, point: &[FieldElem]) -> Result<FieldElem> {
        Ok(self.input_poly.eval(&self.tower, point))
    }

    fn decide(&self, log: &DrawLog, answers: &Answers) -> Result<Verdict> {
        let g = log.get("gamma")[0];
        let ok = univar_sumcheck_check(
            &self.tower,
            &self.h,
            self.alpha,
            g,
            answers.input(&[g]),
            answers.proof("Fhat", &[g]),
            answers.proof("Rhat", &[g]),
        );
        if ok {
            Ok(Verdict::Accept)
        } else {
            Ok(Verdict::Reject("sumcheck identity failed".into()))
        }
    }

    fn state_after(
        &self,
        _round: usize,
        log: &DrawLog,
        sent: &[(SlotSpec, MultiPoly)],
    ) -> Option<(bool, String)> {
        // terminal: doomed iff the identity fails at γ
        let g = log.get("gamma")[0];
        let fh = sent.iter().find(|(s, _)| s.label == "Fhat")?.1.clone();
        let rh = sent.iter().find(|(s, _)| s.label == "Rhat")?.1.clone();
        let ok = univar_sumcheck_check(
            &self.tower,
            &self.h,
            self.alpha,
            g,
            self.input_poly.eval(&self.tower, &[g]),
            fh.eval(&self.tower, &[g]),
            rh.eval(&self.tower, &[g]),
        );
        Some((
            !ok,
            if ok {
                "check passed".into()
            } else {
                "check failed".into()
            },
        ))
    }
}

/// Trivariate sumcheck Poly-IOP for Σ_{H³} ŝ = β. Sends F̂₁, draws ζ₁, sends
/// F̂₂, draws ζ₂, then reduces to three univariate sumchecks plus the final
/// consistency query ŝ(ζ₁, ζ₂, γ₃).
pub struct MultivarSumcheckIop {
    pub tower: std::sync::Arc<Tower>,
    pub h: Vec<FieldElem>,
    /// degree bound on ŝ (6d in the R1CS setting)
    pub d_bound: i64,
    pub beta: FieldElem,
    pub input_poly: MultiPoly,
    pub slot_domain: crate::poly::GridDomain,
}

impl MultivarSumcheckIop {
    pub fn f1_poly(&self) -> UniPoly {
        // Σ_{γ2, γ3 ∈ H} ŝ(x, γ2, γ3)
        let t = &*self.tower;
        let mut acc = MultiPoly::zero(self.input_poly.field, 3);
        for &g2 in &self.h {
            for &g3 in &self.h {
                let part = self.input_poly.partial_eval(t, &[None, Some(g2), Some(g3)]);
                acc = acc.add(t, &part);
            }
        }
        acc.collapse_to_uni(0)
    }

    fn f2_poly(&self, zeta1: FieldElem) -> UniPoly {
        let t = &*self.tower;
        let mut acc = MultiPoly::zero(self.input_poly.field, 3);
        for &g3 in &self.h {
            let part = self
                .input_poly
                .partial_eval(t, &[Some(zeta1), None, Some(g3)]);
            acc = acc.add(t, &part);
        }
        acc.collapse_to_uni(1)
    }

    fn rs_slot(&self, label: &str, d: i64) -> SlotSpec {
        SlotSpec {
            label: label.into(),
            round: 0,
            code: crate::codes::CodeSpec::rs(d, self.slot_domain.clone()),
            eps: 0.5,
        }
    }
}

impl PolyIop for MultivarSumcheckIop {
    fn name(&self) -> String {
        "multivar-sumcheck".into()
    }

    fn rounds(&self) -> usize {
        3
    }

    fn slots(&self, round: usize) -> Vec<SlotSpec> {
        let h = self.h.len() as i64;
        match round {
            0 => vec![self.rs_slot("F1", self.d_bound)],
            1 => vec![self.rs_slot("F2", self.d_bound)],
            2 => vec![
                self.rs_slot("sc1_F", self.d_bound - h),
                self.rs_slot("sc1_R", h - 2),
                self.rs_slot("sc2_F", self.d_bound - h),
                self.rs_slot("sc2_R", h - 2),
                self.rs_slot("sc3_F", self.d_bound - h),
                self.rs_slot("sc3_R", h - 2),
            ],
            _ => vec![],
        }
    }

    fn make_draws(&self, round: usize, sess: &mut Session, log: &mut DrawLog) -> Result<()> {
        let field = self.input_poly.field;
        match round {
            0 => {
                let z = sess.v_draw("zeta1", field, 1)?;
                log.insert("zeta1", z);
            }
            1 => {
                let z = sess.v_draw("zeta2", field, 1)?;
                log.insert("zeta2", z);
            }
            2 => {
                let g = sess.v_draw("gammas", field, 3)?;
                log.insert("gammas", g);
            }
            _ => {}
        }
        Ok(())
    }

    fn queries(&self, round: usize, log: &DrawLog) -> Vec<(String, Vec<FieldElem>)> {
        match round {
            0 => vec![("F1".into(), vec![log.get("zeta1")[0]])],
            1 => vec![("F2".into(), vec![log.get("zeta2")[0]])],
            2 => {
                let g = log.get("gammas");
                vec![
                    ("F1".into(), vec![g[0]]),
                    ("sc1_F".into(), vec![g[0]]),
                    ("sc1_R".into(), vec![g[0]]),
                    ("F2".into(), vec![g[1]]),
                    ("sc2_F".into(), vec![g[1]]),
                    ("sc2_R".into(), vec![g[1]]),
                    ("sc3_F".into(), vec![g[2]]),
                    ("sc3_R".into(), vec![g[2]]),
                ]
            }
            _ => vec![],
        }
    }

    fn input_queries(&self, round: usize, log: &DrawLog) -> Vec<Vec<FieldElem>> {
        if round == 2 {
            let g3 = log.get("gammas")[2];
            vec![vec![log.get("zeta1")[0], log.get("zeta2")[0], g3]]
        } else {
            vec![]
        }
    }

    fn honest_polys(&self, round: usize, log: &DrawLog) -> Result<Vec<MultiPoly>> {
        let t = &*self.tower;
        match round {
            0 => Ok(vec![self.f1_poly().to_multi(1, 0)]),
            1 => Ok(vec![self.f2_poly(log.get("zeta1")[0]).to_multi(1, 0)]),
            2 => {
                let f1 = self.f1_poly();
                let f2 = self.f2_poly(log.get("zeta1")[0]);
                let zeta2 = log.get("zeta2")[0];
                let field = f1.field;
                // each univariate sumcheck decomposes against its true sum
                let s1 = self
                    .h
                    .iter()
                    .fold(t.zero(field), |acc, &a| t.add(acc, f1.eval(t, a)));
                let (f1h, r1h) = univar_sumcheck_prover(t, &f1, &self.h, s1)?;
                let s2 = self
                    .h
                    .iter()
                    .fold(t.zero(field), |acc, &a| t.add(acc, f2.eval(t, a)));
                let (f2h, r2h) = univar_sumcheck_prover(t, &f2, &self.h, s2)?;
                let u = self
                    .input_poly
                    .partial_eval(t, &[Some(log.get("zeta1")[0]), Some(zeta2), None])
                    .collapse_to_uni(2);
                let s3 = self
                    .h
                    .iter()
                    .fold(t.zero(field), |acc, &a| t.add(acc, u.eval(t, a)));
                let (f3h, r3h) = univar_sumcheck_prover(t, &u, &self.h, s3)?;
                Ok(vec![
                    f1h.to_multi(1, 0),
                    r1h.to_multi(1, 0),
                    f2h.to_multi(1, 0),
                    r2h.to_multi(1, 0),
                    f3h.to_multi(1, 0),
                    r3h.to_multi(1, 0),
                ])
            }
            _ => Ok(vec![]),
        }
    }

    fn input_value(&self, point: &[FieldElem]) -> Result<FieldElem> {
        Ok(self.input_poly.eval(&self.tower, point))
    }

    fn decide(&self, log: &DrawLog, answers: &Answers) -> Result<Verdict> {
        let t = &*self.tower;
        let g = log.get("gammas");
        let zeta1 = log.get("zeta1")[0];
        let zeta2 = log.get("zeta2")[0];
        let ok1 = univar_sumcheck_check(
            t,
            &self.h,
            self.beta,
            g[0],
            answers.proof("F1", &[g[0]]),
            answers.proof("sc1_F", &[g[0]]),
            answers.proof("sc1_R", &[g[0]]),
        );
        let ok2 = univar_sumcheck_check(
            t,
            &self.h,
            answers.proof("F1", &[zeta1]),
            g[1],
            answers.proof("F2", &[g[1]]),
            answers.proof("sc2_F", &[g[1]]),
            answers.proof("sc2_R", &[g[1]]),
        );
        let ok3 = univar_sumcheck_check(
            t,
            &self.h,
            answers.proof("F2", &[zeta2]),
            g[2],
            answers.input(&[zeta1, zeta2, g[2]]),
            answers.proof("sc3_F", &[g[2]]),
            answers.proof("sc3_R", &[g[2]]),
        );
        if ok1 && ok2 && ok3 {
            Ok(Verdict::Accept)
        } else {
            Ok(Verdict::Reject(format!(
                "sumcheck equations failed: eq1={ok1} eq2={ok2} eq3={ok3}"
            )))
        }
    }

    fn state_after(
        &self,
        round: usize,
        log: &DrawLog,
        sent: &[(SlotSpec, MultiPoly)],
    ) -> Option<(bool, String)> {
        let t = &*self.tower;
        let find = |label: &str| {
            sent.iter()
                .find(|(s, _)| s.label == label)
                .map(|(_, p)| p.clone())
        };
        match round {
            0 => {
                // doomed iff F1(ζ1) ≠ Σ_{γ2,γ3} ŝ(ζ1, γ2, γ3) or Σ_H F1 ≠ β
                let f1 = find("F1")?;
                let zeta1 = log.get("zeta1")[0];
                let mut slice_sum = t.zero(f1.field);
                for &a in &self.h {
                    for &b in &self.h {
                        slice_sum = t.add(slice_sum, self.input_poly.eval(t, &[zeta1, a, b]));
                    }
                }
                let cond1 = f1.eval(t, &[zeta1]) != slice_sum;
                let f1_sum = self
                    .h
                    .iter()
                    .fold(t.zero(f1.field), |acc, &a| t.add(acc, f1.eval(t, &[a])));
                let cond2 = f1_sum != self.beta;
                Some((
                    cond1 || cond2,
                    format!("slice-mismatch={cond1} sum-mismatch={cond2}"),
                ))
            }
            1 => {
                let f1 = find("F1")?;
                let f2 = find("F2")?;
                let zeta1 = log.get("zeta1")[0];
                let zeta2 = log.get("zeta2")[0];
                let mut true_val = t.zero(f1.field);
                for &a in &self.h {
                    true_val = t.add(true_val, self.input_poly.eval(t, &[zeta1, zeta2, a]));
                }
                let cond1 = f2.eval(t, &[zeta2]) != true_val;
                let f2_sum = self
                    .h
                    .iter()
                    .fold(t.zero(f1.field), |acc, &a| t.add(acc, f2.eval(t, &[a])));
                let cond2 = f2_sum != f1.eval(t, &[zeta1]);
                let f1_sum = self
                    .h
                    .iter()
                    .fold(t.zero(f1.field), |acc, &a| t.add(acc, f1.eval(t, &[a])));
                let cond3 = f1_sum != self.beta;
                Some((
                    cond1 || cond2 || cond3,
                    format!("conds={cond1},{cond2},{cond3}"),
                ))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldId;
    use crate::iop::{run_poly_iop, ParamSet};
    use crate::poly::GridDomain;
    use crate::rng::Seed;
    use std::sync::Arc;

    fn setup() -> (Arc<Tower>, ParamSet) {
        (Arc::new(Tower::default_tower()), ParamSet::desk27())
    }

    #[test]
    fn subgroup_sum_identity() {
        // Σ_H R = R(0)·|H| for deg R ≤ |H|−1, sampled
        let (t, _) = setup();
        let f = FieldId::F2x16;
        let h = t.multiplicative_subgroup(f, 3).unwrap();
        let mut rng = Seed::from_u64(12).stream("ss");
        for _ in 0..200 {
            let p = UniPoly::new(f, (0..3).map(|_| t.sample(f, &mut rng)).collect());
            let total = subgroup_sum(&t, &p.to_multi(1, 0), &h);
            // |H| = 3 is odd: |H| = 1 in the field
            assert_eq!(total, p.eval(&t, t.zero(f)));
        }
        // f = x sums to 0 over the cube roots of unity
        let x = UniPoly::monomial(t.one(f), 1);
        assert!(subgroup_sum(&t, &x.to_multi(1, 0), &h).is_zero());
        // constant 1 over H^3: 27 terms = 1 in characteristic 2
        let one = MultiPoly::constant(t.one(f), 3);
        assert!(subgroup_sum(&t, &one, &h).is_one());
        assert!(subgroup_sum(&t, &MultiPoly::zero(f, 1), &h).is_zero());
    }

    #[test]
    fn prover_decomposition_examples() {
        let (t, _) = setup();
        let f = FieldId::F2x16;
        let h = t.multiplicative_subgroup(f, 3).unwrap();
        // f = x, α = 0: x = 0 + 0·V_H + x·1, so F̂ = 0, R̂ = 1
        let x = UniPoly::monomial(t.one(f), 1);
        let (fh, rh) = univar_sumcheck_prover(&t, &x, &h, t.zero(f)).unwrap();
        assert!(fh.is_zero());
        assert_eq!(rh, UniPoly::constant(t.one(f)));
        // constant c with α = c·|H| = c
        let c = t.elem(f, 0x77);
        let (fh, rh) = univar_sumcheck_prover(&t, &UniPoly::constant(c), &h, c).unwrap();
        assert!(fh.is_zero());
        assert!(rh.is_zero());
        // wrong claimed sum trips the precondition
        assert!(univar_sumcheck_prover(&t, &x, &h, t.one(f)).is_err());
        // random degree ≤ 6: identity verified at 100 random points
        let mut rng = Seed::from_u64(3).stream("decomp");
        for _ in 0..20 {
            let p = UniPoly::new(f, (0..7).map(|_| t.sample(f, &mut rng)).collect());
            let alpha = subgroup_sum(&t, &p.to_multi(1, 0), &h);
            let (fh, rh) = univar_sumcheck_prover(&t, &p, &h, alpha).unwrap();
            assert!(fh.degree_at_most(6 - 3));
            assert!(rh.degree_at_most(1));
            for _ in 0..100 {
                let g = t.sample(f, &mut rng);
                assert!(univar_sumcheck_check(
                    &t,
                    &h,
                    alpha,
                    g,
                    p.eval(&t, g),
                    fh.eval(&t, g),
                    rh.eval(&t, g)
                ));
            }
        }
    }

    fn mk_multivar(t: &Arc<Tower>, seed: u64, beta_shift: bool) -> MultivarSumcheckIop {
        let f = FieldId::F2x16;
        let h = t.multiplicative_subgroup(f, 3).unwrap();
        let mut rng = Seed::from_u64(seed).stream("mkpoly");
        let mut p = MultiPoly::zero(f, 3);
        for _ in 0..10 {
            let e = [
                rng.below(5) as u16,
                rng.below(5) as u16,
                rng.below(3) as u16,
            ];
            p = p.add(t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
        }
        let mut beta = subgroup_sum(t, &p, &h);
        if beta_shift {
            beta = t.add(beta, t.one(f));
        }
        MultivarSumcheckIop {
            tower: t.clone(),
            h,
            d_bound: 12,
            beta,
            input_poly: p,
            slot_domain: GridDomain::subfield_power(t, FieldId::F2x8, f, 1),
        }
    }

    #[test]
    fn multivar_honest_accepts_always() {
        let (t, params) = setup();
        for seed in 0..100 {
            let iop = mk_multivar(&t, seed, false);
            let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(seed), None);
            let v = run_poly_iop(&mut sess, &iop).unwrap();
            assert!(v.accepted(), "honest run {seed} rejected: {v:?}");
        }
    }

    #[test]
    fn multivar_wrong_sum_rejected_overwhelmingly() {
        let (t, params) = setup();
        let mut rejects = 0;
        let runs = 1000;
        for seed in 0..runs {
            let iop = mk_multivar(&t, 7, true);
            let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(seed), None);
            let v = run_poly_iop(&mut sess, &iop).unwrap();
            if !v.accepted() {
                rejects += 1;
            }
        }
        // bound-consistent with d'/q' per round: expect ≥ 990/1000
        assert!(rejects >= 990, "only {rejects}/{runs} rejections");
    }

    #[test]
    fn multivar_constant_one_example() {
        // f = 1, β = 1 (27 ≡ 1 mod 2): accepts
        let (t, params) = setup();
        let f = FieldId::F2x16;
        let h = t.multiplicative_subgroup(f, 3).unwrap();
        let iop = MultivarSumcheckIop {
            tower: t.clone(),
            h,
            d_bound: 12,
            beta: t.one(f),
            input_poly: MultiPoly::constant(t.one(f), 3),
            slot_domain: GridDomain::subfield_power(&t, FieldId::F2x8, f, 1),
        };
        let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(1), None);
        assert!(run_poly_iop(&mut sess, &iop).unwrap().accepted());
    }

    #[test]
    fn multivar_f1_constant_when_input_ignores_x1() {
        // f independent of x1: F̂1 is constant, equal to |H|²·(slice sum) = slice sum
        let (t, _) = setup();
        let f = FieldId::F2x16;
        let h = t.multiplicative_subgroup(f, 3).unwrap();
        let mut p = MultiPoly::zero(f, 3);
        let mut rng = Seed::from_u64(5).stream("noX");
        for _ in 0..5 {
            let e = [0, rng.below(3) as u16, rng.below(3) as u16];
            p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
        }
        let iop = MultivarSumcheckIop {
            tower: t.clone(),
            h: h.clone(),
            d_bound: 12,
            beta: subgroup_sum(&t, &p, &h),
            input_poly: p.clone(),
            slot_domain: GridDomain::subfield_power(&t, FieldId::F2x8, f, 1),
        };
        let f1 = iop.f1_poly();
        assert!(f1.degree_at_most(0));
        let mut expect = t.zero(f);
        for &a in &h {
            for &b in &h {
                expect = t.add(expect, p.eval(&t, &[t.zero(f), a, b]));
            }
        }
        assert_eq!(f1.coeff(0), expect);
    }

    #[test]
    fn degree_inflated_helper_is_shape_rejected() {
        let (t, params) = setup();
        let iop = mk_multivar(&t, 2, false);
        // R̂ of degree |H|−1 = 2 violates the |H|−2 bound
        let script = crate::iop::AdversaryScript::single(
            "inflate",
            "sc1_R",
            crate::iop::Strategy::DegreeInflate { exps: [2, 0, 0] },
        );
        let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(4), Some(&script));
        let v = run_poly_iop(&mut sess, &iop).unwrap();
        assert!(matches!(v, Verdict::Reject(ref r) if r.contains("shape")));
    }

    #[test]
    fn rbr_states_track_doom_transitions() {
        let (t, params) = setup();
        // wrong β: initial state doomed; doomed→not-doomed flips should be rare
        let mut transitions = 0;
        let runs = 300;
        for seed in 0..runs {
            let iop = mk_multivar(&t, 11, true);
            let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(seed), None);
            sess.instrument = true;
            let v = run_poly_iop(&mut sess, &iop).unwrap();
            let mut prev_doomed = true; // wrong sum: initial state doomed
            let mut flipped = false;
            for s in &sess.states {
                if prev_doomed && !s.doomed {
                    flipped = true;
                }
                prev_doomed = s.doomed;
            }
            if flipped {
                transitions += 1;
            }
            let _ = v;
        }
        // per-round transition probability ~ 2·6d/q'; 300 runs should see none
        assert!(
            transitions <= 3,
            "doomed state flipped in {transitions}/{runs} runs"
        );
    }

    #[test]
    fn uni_sumcheck_iop_honest_and_wrong_alpha() {
        let (t, params) = setup();
        let f = FieldId::F2x16;
        let h = t.multiplicative_subgroup(f, 3).unwrap();
        let dom = GridDomain::subfield_power(&t, FieldId::F2x8, f, 1);
        let mut rng = Seed::from_u64(19).stream("uni-sc");
        let p = UniPoly::new(f, (0..7).map(|_| t.sample(f, &mut rng)).collect());
        let alpha = subgroup_sum(&t, &p.to_multi(1, 0), &h);
        let honest = UniSumcheckIop {
            tower: t.clone(),
            h: h.clone(),
            d_prime: 6,
            alpha,
            input_poly: p.to_multi(1, 0),
            slot_domain: dom.clone(),
        };
        for seed in 0..50 {
            let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(seed), None);
            assert!(run_poly_iop(&mut sess, &honest).unwrap().accepted());
        }
        let wrong = UniSumcheckIop {
            tower: t.clone(),
            h,
            d_prime: 6,
            alpha: t.add(alpha, t.one(f)),
            input_poly: p.to_multi(1, 0),
            slot_domain: dom,
        };
        let mut rejects = 0;
        for seed in 0..500 {
            let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(seed), None);
            if !run_poly_iop(&mut sess, &wrong).unwrap().accepted() {
                rejects += 1;
            }
        }
        // one round at soundness d'/q' = 6/65536
        assert!(rejects >= 495, "{rejects}/500");
    }

    #[test]
    fn rbr_soundness_implies_standard_soundness() {
        // k-round RBR soundness s gives standard soundness <= k·s: the
        // measured acceptance rate of a doomed-start prover stays below
        // k × (per-round bound + statistical margin)
        let (t, params) = setup();
        let runs = 500u64;
        let mut accepts = 0u64;
        for seed in 0..runs {
            let iop = mk_multivar(&t, 13, true);
            let mut sess = crate::iop::Session::prove(&t, &params, Seed::from_u64(seed), None);
            if run_poly_iop(&mut sess, &iop).unwrap().accepted() {
                accepts += 1;
            }
        }
        let k = 3.0;
        let per_round = 2.0 * 12.0 / 65536.0; // 2·d'/q' at d' = 12
        let margin = 3.0 * (per_round / runs as f64).sqrt();
        assert!(
            (accepts as f64 / runs as f64) <= k * (per_round + margin),
            "{accepts}/{runs} accepts exceeds k·s"
        );
    }
}
