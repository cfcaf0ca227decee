//! The low-degree-testing laboratory: exhaustive line and plane agreement
//! profiles, inclusion-graph spectra, the spectral sampling check, and the
//! adversary suite driving all soundness measurements.
//!
//! Exhaustive modes are exact and report counts; sampling modes report
//! binomial confidence intervals. Reports are line-oriented text records:
//! name, parameters, value, bound, pass/fail.

use crate::codes::{best_rs_agreement, max_agreement_exact, CodeSpec};
use crate::error::{capability, Result};
use crate::field::{FieldElem, FieldId, Tower};
use crate::iop::{AdversaryScript, ParamSet, Session, Strategy, Verdict};
use crate::linalg::singular_values;
use crate::lowrate::{irm_iopp, rs_iopp, IoppInput};
use crate::poly::{enumerate_lines, enumerate_planes, EvalTable, GridDomain, Line, Plane};
use crate::ratio::Ratio;
use crate::rng::Seed;

pub use crate::iop::{Deviation, Strategy as DeviationStrategy};

/// One measurement record.
#[derive(Debug, Clone)]
pub struct ReportLine {
    pub name: String,
    pub params: String,
    pub value: String,
    pub bound: String,
    pub pass: bool,
}

impl std::fmt::Display for ReportLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} [{}] value={} bound={} {}",
            self.name,
            self.params,
            self.value,
            self.bound,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<ReportLine>,
}

impl Report {
    pub fn push(
        &mut self,
        name: &str,
        params: impl Into<String>,
        value: impl Into<String>,
        bound: impl Into<String>,
        pass: bool,
    ) {
        self.lines.push(ReportLine {
            name: name.into(),
            params: params.into(),
            value: value.into(),
            bound: bound.into(),
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Exact per-line best RS agreement over every affine line of sub^m.
/// Capability error when the line count or the per-line oracle would exceed
/// the cap.
pub fn line_agreement_profile(
    t: &Tower,
    f: &EvalTable,
    sub: FieldId,
    d: i64,
    cap: u64,
) -> Result<Vec<(Line, Ratio)>> {
    let m = f.domain.arity();
    let lines = enumerate_lines(t, sub, f.domain.field, m);
    if lines.len() as u64 > cap {
        return capability("line enumeration exceeds the cap");
    }
    let mut out = Vec::with_capacity(lines.len());
    for line in lines {
        let restricted = line.restrict_table(t, f, sub)?;
        let (_, agr) = best_rs_agreement(t, &restricted, d, None, cap)?;
        out.push((line, agr));
    }
    Ok(out)
}

/// Exact per-plane best total-degree agreement over every affine plane of
/// sub³; exact-subset oracle, so only tiny subfields are feasible.
pub fn plane_agreement_profile(
    t: &Tower,
    f: &EvalTable,
    sub: FieldId,
    d: i64,
    cap: u64,
) -> Result<Vec<(Plane, Ratio)>> {
    let planes = enumerate_planes(t, sub, f.domain.field);
    if planes.len() as u64 > cap {
        return capability("plane enumeration exceeds the cap");
    }
    let mut out = Vec::with_capacity(planes.len());
    for plane in planes {
        let restricted = plane.restrict_table(t, f, sub)?;
        let spec = CodeSpec::rm_total(d, restricted.domain.clone());
        let agr = max_agreement_exact(t, &restricted, &spec, None, cap)?;
        out.push((plane, agr));
    }
    Ok(out)
}

/// Incidence structures whose second singular values the lab verifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InclusionGraph {
    /// affine lines vs points of sub^m
    LinesPoints { m: usize },
    /// affine planes vs points of sub³
    PlanesPoints,
    /// affine planes vs affine lines of sub³
    PlanesLines,
}

/// Second singular value of the normalized biregular adjacency operator,
/// computed by a dense eigensolve. Capability error above 10^4 vertices.
pub fn inclusion_graph_sigma(t: &Tower, sub: FieldId, graph: InclusionGraph) -> Result<f64> {
    let ambient = FieldId::F2x16;
    let rows: Vec<Vec<f64>> = match graph {
        InclusionGraph::LinesPoints { m } => {
            let lines = enumerate_lines(t, sub, ambient, m);
            let points: Vec<Vec<FieldElem>> =
                GridDomain::subfield_power(t, sub, ambient, m).iter_points().collect();
            check_size(lines.len(), points.len())?;
            let sub_axis = t.subfield_axis(sub, ambient)?;
            lines
                .iter()
                .map(|l| {
                    let mut row = vec![0.0; points.len()];
                    for &u in &sub_axis {
                        let p = l.point(t, u);
                        let idx = points.iter().position(|x| *x == p).unwrap();
                        row[idx] = 1.0;
                    }
                    row
                })
                .collect()
        }
        InclusionGraph::PlanesPoints => {
            let planes = enumerate_planes(t, sub, ambient);
            let points: Vec<Vec<FieldElem>> =
                GridDomain::subfield_power(t, sub, ambient, 3).iter_points().collect();
            check_size(planes.len(), points.len())?;
            let sub_axis = t.subfield_axis(sub, ambient)?;
            planes
                .iter()
                .map(|pl| {
                    let mut row = vec![0.0; points.len()];
                    for &u in &sub_axis {
                        for &v in &sub_axis {
                            let p = pl.point(t, u, v);
                            let idx = points.iter().position(|x| *x == p).unwrap();
                            row[idx] = 1.0;
                        }
                    }
                    row
                })
                .collect()
        }
        InclusionGraph::PlanesLines => {
            let planes = enumerate_planes(t, sub, ambient);
            let lines = enumerate_lines(t, sub, ambient, 3);
            check_size(planes.len(), lines.len())?;
            let sub_axis = t.subfield_axis(sub, ambient)?;
            planes
                .iter()
                .map(|pl| {
                    let mut row = vec![0.0; lines.len()];
                    for (j, l) in lines.iter().enumerate() {
                        // l ⊆ pl iff both its base and base+dir lie on the plane
                        let on = |pt: &[FieldElem]| plane_contains(t, pl, pt, &sub_axis);
                        let second = l.point(t, sub_axis[1]);
                        if on(&l.base) && on(&second) {
                            row[j] = 1.0;
                        }
                    }
                    row
                })
                .collect()
        }
    };
    // subspace-averaging normalization A/d_row: the operator that sends a
    // point function to its averages over each subspace. For these incidence
    // graphs its second singular value is exactly 1/sqrt(q) (lines/points)
    // and 1/q (planes/points).
    let deg_row: f64 = rows[0].iter().sum();
    let scale = 1.0 / deg_row;
    let normalized: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x * scale).collect())
        .collect();
    let sv = singular_values(&normalized, 1e-12);
    Ok(sv.get(1).copied().unwrap_or(0.0))
}

fn check_size(a: usize, b: usize) -> Result<()> {
    if a + b > 10_000 {
        return capability("inclusion graph exceeds the size cap");
    }
    Ok(())
}

fn plane_contains(t: &Tower, pl: &Plane, pt: &[FieldElem], sub_axis: &[FieldElem]) -> bool {
    for &u in sub_axis {
        for &v in sub_axis {
            if pl.point(t, u, v) == pt {
                return true;
            }
        }
    }
    false
}

/// |E_{a∈S, b∼a}[G(b)] − μ(G)|, exactly, for a lines-vs-points graph.
/// Returns (deviation, bound λ/√ε).
pub fn spectral_sampling_check(
    t: &Tower,
    sub: FieldId,
    m: usize,
    line_subset: &[usize],
    g: &dyn Fn(&[FieldElem]) -> f64,
    lambda: f64,
) -> Result<(f64, f64)> {
    let ambient = FieldId::F2x16;
    let lines = enumerate_lines(t, sub, ambient, m);
    let points: Vec<Vec<FieldElem>> =
        GridDomain::subfield_power(t, sub, ambient, m).iter_points().collect();
    let sub_axis = t.subfield_axis(sub, ambient)?;
    let mu: f64 = points.iter().map(|p| g(p)).sum::<f64>() / points.len() as f64;
    let mut acc = 0.0;
    for &i in line_subset {
        let line = &lines[i];
        let mut line_avg = 0.0;
        for &u in &sub_axis {
            line_avg += g(&line.point(t, u));
        }
        acc += line_avg / sub_axis.len() as f64;
    }
    let deviation = (acc / line_subset.len() as f64 - mu).abs();
    let eps = line_subset.len() as f64 / lines.len() as f64;
    Ok((deviation, lambda / eps.sqrt()))
}

// ---------------------------------------------------------------------------
// Adversary suite
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetProtocol {
    RsIoppK1,
    RsIoppK2,
    IrmIoppK1,
    RmIopp,
    R1cs,
}

/// The shipped adversary scripts per protocol: deviation point + strategy,
/// replayable from the CLI by name.
pub fn script_catalog(target: TargetProtocol) -> Vec<AdversaryScript> {
    match target {
        TargetProtocol::RsIoppK1 | TargetProtocol::RsIoppK2 => vec![
            AdversaryScript::single(
                "oracle-corrupt",
                "rs_poly.k",
                Strategy::CorruptTable { points: 3000 },
            ),
            AdversaryScript::single("anchor-equivocate", "zeta/Q", Strategy::AnchorEquivocate),
            AdversaryScript::single(
                "fill-corrupt",
                "rs_batch/fill",
                Strategy::CorruptTable { points: 40 },
            ),
            AdversaryScript::single(
                "g1-degree-inflate",
                "rs_batch/g1",
                Strategy::DegreeInflate { exps: [9, 0, 0] },
            ),
        ],
        TargetProtocol::IrmIoppK1 => vec![
            AdversaryScript::single(
                "oracle-corrupt",
                "irm_poly.k1/Q",
                Strategy::CorruptTable { points: 3000 },
            ),
            AdversaryScript::single("axis-equivocate", "ans0/F1", Strategy::CorruptValue { index: 0 }),
            AdversaryScript::single(
                "fill-corrupt",
                "irm_batch/fillQ",
                Strategy::CorruptTable { points: 40 },
            ),
        ],
        TargetProtocol::RmIopp => vec![
            // the constant-rate recursion reads its derived input at only
            // T·t points, so corruption must be heavy enough to push the
            // combined function far below the agreement threshold
            AdversaryScript::single(
                "plane-corrupt",
                "rm_poly]/Qp0",
                Strategy::CorruptTable { points: 50000 },
            ),
            AdversaryScript::single(
                "g1-corrupt",
                "trm_batch/g0_1",
                Strategy::CorruptTable { points: 50000 },
            ),
            AdversaryScript::single("anchor-equivocate", "zeta/Qp1", Strategy::AnchorEquivocate),
        ],
        TargetProtocol::R1cs => vec![
            AdversaryScript::single(
                "witness-oracle-corrupt",
                "r1cs_poly/fA",
                Strategy::CorruptTable { points: 500 },
            ),
            AdversaryScript::single("sum-misreport", "ans0/F1", Strategy::SumMisreport),
            AdversaryScript::single("anchor-equivocate", "zeta/fB", Strategy::AnchorEquivocate),
            AdversaryScript::single(
                "gstar-fill-corrupt",
                "r1cs_batch/FillfA",
                Strategy::CorruptTable { points: 30 },
            ),
            AdversaryScript::single(
                "helper-degree-inflate",
                "r1cs_batch/GfA_1",
                Strategy::DegreeInflate { exps: [7, 0, 0] },
            ),
        ],
    }
}

#[derive(Debug, Clone, Default)]
pub struct AdversaryStats {
    pub runs: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub doom_transitions: u64,
    pub partial_traces: u64,
}

impl AdversaryStats {
    pub fn reject_rate(&self) -> f64 {
        self.rejects as f64 / self.runs.max(1) as f64
    }
}

/// Run a scripted adversary over a seed range against a low-rate IOPP target
/// with the given input builder; collects verdict and doom-transition stats.
pub fn run_adversary(
    t: &Tower,
    params: &ParamSet,
    target: TargetProtocol,
    script: &AdversaryScript,
    mk_input: &dyn Fn(u64) -> IoppInput,
    seeds: std::ops::Range<u64>,
    instrument: bool,
) -> Result<AdversaryStats> {
    let mut stats = AdversaryStats::default();
    for seed in seeds {
        let input = mk_input(seed);
        let mut sess = Session::prove(t, params, Seed::from_u64(seed), Some(script));
        sess.instrument = instrument;
        let verdict = match target {
            TargetProtocol::RsIoppK1 => rs_iopp(&mut sess, &input, 1)?,
            TargetProtocol::RsIoppK2 => rs_iopp(&mut sess, &input, 2)?,
            TargetProtocol::IrmIoppK1 => irm_iopp(&mut sess, &input, 1)?,
            TargetProtocol::RmIopp => crate::constrate::rm_iopp(&mut sess, &input, 12)?,
            TargetProtocol::R1cs => {
                return crate::error::parameter("use run_r1cs_adversary for the R1CS target")
            }
        };
        stats.runs += 1;
        match verdict {
            Verdict::Accept => stats.accepts += 1,
            Verdict::Reject(_) => stats.rejects += 1,
        }
        if sess.partial_trace {
            stats.partial_traces += 1;
        }
        let mut prev = true;
        for s in &sess.states {
            if prev && !s.doomed {
                stats.doom_transitions += 1;
                break;
            }
            prev = s.doomed;
        }
    }
    Ok(stats)
}

/// Adversary runs for the end-to-end R1CS protocol.
pub fn run_r1cs_adversary(
    t: &Tower,
    params: &ParamSet,
    script: &AdversaryScript,
    unsatisfiable: bool,
    seeds: std::ops::Range<u64>,
) -> Result<AdversaryStats> {
    let mut stats = AdversaryStats::default();
    for seed in seeds {
        let (mut inst, v) =
            crate::r1cs::generate_instance(t, params.q_prime, params.h_order, Seed::from_u64(seed));
        if unsatisfiable {
            crate::r1cs::make_unsatisfiable(&mut inst, t, params.q_prime);
        }
        let out = crate::r1cs::prove(
            t,
            params,
            &inst,
            &v,
            Seed::from_u64(seed ^ 0x5eed),
            Some(script),
            unsatisfiable,
        )?;
        stats.runs += 1;
        match out.verdict {
            Verdict::Accept => stats.accepts += 1,
            Verdict::Reject(_) => stats.rejects += 1,
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MultiPoly, UniPoly};

    fn setup() -> (Tower, ParamSet) {
        (Tower::default_tower(), ParamSet::desk27())
    }

    #[test]
    fn codeword_profile_is_all_ones_and_single_corruption_counts_lines() {
        let (t, _) = setup();
        let f = FieldId::F2x16;
        let sub = FieldId::F2x4;
        let dom = GridDomain::subfield_power(&t, sub, f, 2);
        let mut rng = Seed::from_u64(4).stream("lp");
        let mut p = MultiPoly::zero(f, 2);
        for e in [[1u16, 1, 0], [2, 0, 0], [0, 1, 0]] {
            p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 2, e));
        }
        let mut table = p.eval_on_grid(&t, &dom);
        let profile = line_agreement_profile(&t, &table, sub, 2, 1 << 24).unwrap();
        assert_eq!(profile.len(), 16 * 17); // q(q+1) at q = 16
        assert!(profile.iter().all(|(_, a)| *a == Ratio::ONE));
        // corrupt exactly one point: exactly q+1 lines see agreement 15/16
        let idx = dom.position(&[dom.axes[0].points[3], dom.axes[1].points[7]]).unwrap();
        table.values[idx] = t.add(table.values[idx], t.one(f));
        let profile = line_agreement_profile(&t, &table, sub, 2, 1 << 24).unwrap();
        let touched = profile
            .iter()
            .filter(|(_, a)| *a == Ratio::new(15, 16))
            .count();
        assert_eq!(touched, 17);
        assert_eq!(
            profile.iter().filter(|(_, a)| *a == Ratio::ONE).count(),
            16 * 17 - 17
        );
    }

    #[test]
    fn plane_profile_exhaustive_at_q4() {
        let (t, _) = setup();
        let f = FieldId::F2x16;
        let sub = FieldId::F2x2;
        let dom = GridDomain::subfield_power(&t, sub, f, 3);
        let mut rng = Seed::from_u64(6).stream("pp");
        let mut p = MultiPoly::zero(f, 3);
        for e in [[1u16, 0, 0], [0, 1, 1], [1, 1, 0]] {
            p = p.add(&t, &MultiPoly::monomial(t.sample(f, &mut rng), 3, e));
        }
        let table = p.eval_on_grid(&t, &dom);
        let profile = plane_agreement_profile(&t, &table, sub, 2, 1 << 24).unwrap();
        assert_eq!(profile.len(), 84);
        assert!(profile.iter().all(|(_, a)| *a == Ratio::ONE));
    }

    #[test]
    fn inclusion_graph_spectra_match_known_values() {
        let (t, _) = setup();
        let sub = FieldId::F2x2;
        // lines vs points of F_4^2: 1/sqrt(4)
        let s = inclusion_graph_sigma(&t, sub, InclusionGraph::LinesPoints { m: 2 }).unwrap();
        assert!((s - 0.5).abs() < 1e-9, "lines/points sigma {s}");
        // planes vs points of F_4^3: 1/4
        let s = inclusion_graph_sigma(&t, sub, InclusionGraph::PlanesPoints).unwrap();
        assert!((s - 0.25).abs() < 1e-9, "planes/points sigma {s}");
        // planes vs lines: at most (1/sqrt(q))(1 + o(1/sqrt(q)))
        let s = inclusion_graph_sigma(&t, sub, InclusionGraph::PlanesLines).unwrap();
        assert!(s <= 0.5 * 1.3, "planes/lines sigma {s}");
    }

    #[test]
    fn spectral_sampling_bound_holds() {
        let (t, _) = setup();
        let sub = FieldId::F2x2;
        let lines = enumerate_lines(&t, sub, FieldId::F2x16, 2);
        let lambda = 0.5;
        // S = everything gives deviation 0
        let all: Vec<usize> = (0..lines.len()).collect();
        let g = |p: &[FieldElem]| if p[0].is_zero() { 1.0 } else { 0.0 };
        let (dev, _) = spectral_sampling_check(&t, sub, 2, &all, &g, lambda).unwrap();
        assert!(dev < 1e-12);
        // random quarter-density subsets stay within the bound
        let mut rng = Seed::from_u64(17).stream("ssc");
        for _ in 0..20 {
            let subset: Vec<usize> = (0..lines.len())
                .filter(|_| rng.next_bool(1, 4))
                .collect();
            if subset.is_empty() {
                continue;
            }
            let (dev, bound) =
                spectral_sampling_check(&t, sub, 2, &subset, &g, lambda).unwrap();
            assert!(dev <= bound, "deviation {dev} above {bound}");
        }
        // adversarial subset concentrated on one line
        let (dev, bound) = spectral_sampling_check(&t, sub, 2, &[0], &g, lambda).unwrap();
        assert!(dev <= bound);
    }

    #[test]
    fn honest_script_never_rejects() {
        let (t, params) = setup();
        let honest = AdversaryScript::honest();
        let mk = |seed: u64| {
            let f = params.q_prime;
            let mut rng = Seed::from_u64(seed).stream("hon");
            let p = UniPoly::new(f, (0..5).map(|_| t.sample(f, &mut rng)).collect());
            let axis = crate::poly::Axis::new(
                t.subfield_axis(params.q_enc, params.q_prime).unwrap(),
            )
            .unwrap();
            let dom = GridDomain::new(f, vec![axis]);
            let table =
                EvalTable::new(dom.clone(), p.eval_many(&t, &dom.axes[0].points)).unwrap();
            IoppInput::root(table, Some(p.to_multi(1, 0)))
        };
        let stats = run_adversary(
            &t,
            &params,
            TargetProtocol::RsIoppK1,
            &honest,
            &mk,
            0..10,
            false,
        )
        .unwrap();
        assert_eq!(stats.rejects, 0);
        assert_eq!(stats.runs, 10);
    }
}
