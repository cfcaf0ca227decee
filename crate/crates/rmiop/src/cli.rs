//! Command-line entry points: instance generation, prove, verify, self-test,
//! LDT profiling, and parameter reporting. All commands are deterministic
//! given their flags and seed; exit codes are 0 accept/success, 1 reject,
//! 2 malformed input or usage error.

use std::fs;

use crate::error::{Error, Result};
use crate::field::{FieldId, Tower};
use crate::iop::{read_transcript, write_transcript, ParamSet};
use crate::ldt::{self, InclusionGraph, Report, TargetProtocol};
use crate::r1cs;
use crate::rng::Seed;

pub fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(code) => code,
        Err(Error::Io(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(args: &[String]) -> Result<i32> {
    let Some(cmd) = args.first() else {
        eprintln!("{USAGE}");
        return Ok(2);
    };
    match cmd.as_str() {
        "gen" => cmd_gen(&args[1..]),
        "prove" => cmd_prove(&args[1..]),
        "verify" => cmd_verify(&args[1..]),
        "selftest" => cmd_selftest(&args[1..]),
        "ldt" => cmd_ldt(&args[1..]),
        "params" => cmd_params(&args[1..]),
        _ => {
            eprintln!("unknown command {cmd:?}\n{USAGE}");
            Ok(2)
        }
    }
}

const USAGE: &str = "usage: rmiop <command> [flags]
  gen      --n <27> --seed <hex32> [--unsat] --out <prefix>
  prove    --instance <file> --witness <file> --seed <hex32> --out <file>
  verify   --instance <file> --transcript <file>
  selftest --tier fast|full [--seed <hex32>]
  ldt      --profile lines|planes|spectra [--seed <hex32>]
  params   --preset desk27";

struct Flags {
    pairs: Vec<(String, String)>,
    switches: Vec<String>,
}

impl Flags {
    fn parse(args: &[String]) -> Flags {
        let mut pairs = Vec::new();
        let mut switches = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            if let Some(name) = a.strip_prefix("--") {
                if i + 1 < args.len() && !args[i + 1].starts_with("--") {
                    pairs.push((name.to_string(), args[i + 1].clone()));
                    i += 2;
                } else {
                    switches.push(name.to_string());
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        Flags { pairs, switches }
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn has(&self, name: &str) -> bool {
        self.switches.iter().any(|s| s == name)
    }

    fn seed(&self) -> Result<Seed> {
        match self.get("seed") {
            None => Ok(Seed::from_u64(0)),
            Some(s) => {
                if let Some(seed) = Seed::parse_hex(s) {
                    Ok(seed)
                } else if let Ok(x) = s.parse::<u64>() {
                    Ok(Seed::from_u64(x))
                } else {
                    Err(Error::Io("--seed wants 64 hex chars or a decimal".into()))
                }
            }
        }
    }
}

fn load_params(flags: &Flags) -> Result<ParamSet> {
    ParamSet::preset(flags.get("preset").unwrap_or("desk27"))
}

fn cmd_gen(args: &[String]) -> Result<i32> {
    let flags = Flags::parse(args);
    let n: usize = flags
        .get("n")
        .unwrap_or("27")
        .parse()
        .map_err(|_| Error::Io("--n wants an integer".into()))?;
    let h = (1..=40u64)
        .find(|h| (h * h * h) as usize == n)
        .ok_or_else(|| Error::Io(format!("--n {n} is not a cube of a subgroup order")))?;
    let t = Tower::default_tower();
    if !FieldId::F2x16.group_order().is_multiple_of(h) {
        return Err(Error::Io(format!("|H| = {h} does not divide 2^16 - 1")));
    }
    let seed = flags.seed()?;
    let out = flags.get("out").unwrap_or("r1cs");
    let (mut inst, v) = r1cs::generate_instance(&t, FieldId::F2x16, h, seed);
    if flags.has("unsat") {
        r1cs::make_unsatisfiable(&mut inst, &t, FieldId::F2x16);
    }
    fs::write(format!("{out}.instance"), r1cs::instance_to_text(&inst))?;
    fs::write(format!("{out}.witness"), r1cs::witness_to_text(&v))?;
    println!("wrote {out}.instance and {out}.witness (n = {n}, |H| = {h})");
    Ok(0)
}

fn cmd_prove(args: &[String]) -> Result<i32> {
    let flags = Flags::parse(args);
    let t = Tower::default_tower();
    let params = load_params(&flags)?;
    let inst_path = flags
        .get("instance")
        .ok_or_else(|| Error::Io("--instance is required".into()))?;
    let wit_path = flags
        .get("witness")
        .ok_or_else(|| Error::Io("--witness is required".into()))?;
    let out = flags.get("out").unwrap_or("proof.transcript");
    let inst = r1cs::instance_from_text(&t, &fs::read_to_string(inst_path)?)?;
    let witness = r1cs::witness_from_text(&t, &fs::read_to_string(wit_path)?)?;
    let seed = flags.seed()?;
    let outcome = r1cs::prove(&t, &params, &inst, &witness, seed, None, false)?;
    fs::write(out, write_transcript(&outcome.transcript))?;
    println!(
        "verdict: {:?}; proof queries {}, input queries {}; transcript {out}",
        outcome.verdict, outcome.counters.proof_queries, outcome.counters.input_queries
    );
    Ok(if outcome.verdict.accepted() { 0 } else { 1 })
}

fn cmd_verify(args: &[String]) -> Result<i32> {
    let flags = Flags::parse(args);
    let t = Tower::default_tower();
    let params = load_params(&flags)?;
    let inst_path = flags
        .get("instance")
        .ok_or_else(|| Error::Io("--instance is required".into()))?;
    let tr_path = flags
        .get("transcript")
        .ok_or_else(|| Error::Io("--transcript is required".into()))?;
    let inst = r1cs::instance_from_text(&t, &fs::read_to_string(inst_path)?)?;
    let bytes = fs::read(tr_path)?;
    let transcript = read_transcript(&t, &bytes)?;
    match r1cs::verify(&t, &params, &inst, &transcript) {
        Ok(v) if v.accepted() => {
            println!("accept");
            Ok(0)
        }
        Ok(v) => {
            println!("reject: {v:?}");
            Ok(1)
        }
        Err(Error::Io(m)) => {
            eprintln!("malformed transcript: {m}");
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

fn cmd_params(args: &[String]) -> Result<i32> {
    let flags = Flags::parse(args);
    let preset = flags.get("preset").unwrap_or("desk27");
    let params = match flags.get("lambda") {
        None => ParamSet::preset(preset)?,
        Some(l) => {
            let lambda: u32 = l
                .parse()
                .map_err(|_| Error::Io("--lambda wants an integer".into()))?;
            ParamSet::derive(
                &format!("{preset}-lambda{lambda}"),
                lambda,
                crate::ratio::Ratio::new(1, 21),
                3,
            )?
        }
    };
    print!("{}", params.report());
    // compile requirement margins for the protocol slot families
    let t = Tower::default_tower();
    let enc_axis = crate::poly::Axis::new(t.subfield_axis(params.q_enc, params.q_prime)?)?;
    let q_axis = crate::poly::Axis::new(t.subfield_axis(params.q, params.q_prime)?)?;
    let grid2 = crate::poly::GridDomain::power(params.q_prime, enc_axis.clone(), 2);
    let grid3 = crate::poly::GridDomain::power(params.q_prime, q_axis, 3);
    let grid1 = crate::poly::GridDomain::new(params.q_prime, vec![enc_axis]);
    let d = params.h_order as i64 - 1;
    let slots = vec![
        (
            "rs_poly.k1/Q".to_string(),
            crate::codes::CodeSpec::rm_individual(vec![2, 2], grid2.clone()),
            params.level(1).eps_prime_prev,
        ),
        (
            "rs_poly.k2/Q".to_string(),
            crate::codes::CodeSpec::rm_individual(vec![4, 4], grid2.clone()),
            params.level(2).eps_prime_prev,
        ),
        (
            "irm_poly.k1/Q".to_string(),
            crate::codes::CodeSpec::rm_total(8, grid2.clone()),
            params.level(1).eps_prime_prev,
        ),
        (
            "rm_poly/Qp".to_string(),
            crate::codes::CodeSpec::rm_total(6 * d, grid2),
            params.eps_comp,
        ),
        (
            "r1cs_poly/fM".to_string(),
            crate::codes::CodeSpec::rm_total(3 * d, grid3),
            params.eps0,
        ),
        (
            "r1cs_poly/F1".to_string(),
            crate::codes::CodeSpec::rs(6 * d, grid1),
            params.eps0_enc,
        ),
    ];
    let rows = crate::iop::check_compile_requirements(params.lambda, &slots);
    print!("{}", crate::iop::requirement_report(&rows));
    Ok(0)
}

fn cmd_ldt(args: &[String]) -> Result<i32> {
    let flags = Flags::parse(args);
    let profile = flags.get("profile").unwrap_or("spectra");
    let t = Tower::default_tower();
    let seed = flags.seed()?;
    let mut report = Report::default();
    match profile {
        "spectra" => {
            let s = ldt::inclusion_graph_sigma(&t, FieldId::F2x2, InclusionGraph::LinesPoints { m: 2 })?;
            report.push(
                "sigma2-lines-points-F4^2",
                "q=4 m=2",
                format!("{s:.12}"),
                "0.5 ± 1e-9",
                (s - 0.5).abs() < 1e-9,
            );
            let s = ldt::inclusion_graph_sigma(&t, FieldId::F2x2, InclusionGraph::PlanesPoints)?;
            report.push(
                "sigma2-planes-points-F4^3",
                "q=4",
                format!("{s:.12}"),
                "0.25 ± 1e-9",
                (s - 0.25).abs() < 1e-9,
            );
            let s = ldt::inclusion_graph_sigma(&t, FieldId::F2x2, InclusionGraph::PlanesLines)?;
            report.push(
                "sigma2-planes-lines-F4^3",
                "q=4",
                format!("{s:.12}"),
                "<= (1/sqrt q)(1+o(1/sqrt q))",
                s <= 0.5 * 1.3,
            );
        }
        "lines" => {
            let f = FieldId::F2x16;
            let sub = FieldId::F2x4;
            let dom = crate::poly::GridDomain::subfield_power(&t, sub, f, 2);
            let mut rng = seed.stream("ldt-lines");
            let mut p = crate::poly::MultiPoly::zero(f, 2);
            for e in [[2u16, 0, 0], [1, 1, 0], [0, 2, 0]] {
                p = p.add(
                    &t,
                    &crate::poly::MultiPoly::monomial(t.sample(f, &mut rng), 2, e),
                );
            }
            let mut table = p.eval_on_grid(&t, &dom);
            let idx = rng.below(table.values.len() as u64) as usize;
            table.values[idx] = t.add(table.values[idx], t.one(f));
            let profile = ldt::line_agreement_profile(&t, &table, sub, 2, 1 << 24)?;
            let low = profile
                .iter()
                .filter(|(_, a)| *a < crate::ratio::Ratio::ONE)
                .count();
            report.push(
                "line-profile-single-corruption",
                "q=16 d=2",
                format!("{low} lines below 1"),
                "q+1 = 17",
                low == 17,
            );
        }
        "planes" => {
            let f = FieldId::F2x16;
            let sub = FieldId::F2x2;
            let dom = crate::poly::GridDomain::subfield_power(&t, sub, f, 3);
            let mut rng = seed.stream("ldt-planes");
            let values: Vec<_> = (0..dom.size()).map(|_| t.sample(f, &mut rng)).collect();
            let table = crate::poly::EvalTable::new(dom, values)?;
            let profile = ldt::plane_agreement_profile(&t, &table, sub, 2, 1 << 24)?;
            let max = profile.iter().map(|(_, a)| *a).max().unwrap();
            report.push(
                "plane-profile-random-table",
                "q=4 d=2",
                format!("max plane agreement {max}"),
                "strictly below 1",
                max < crate::ratio::Ratio::ONE,
            );
        }
        _ => {
            eprintln!("unknown profile {profile:?}");
            return Ok(2);
        }
    }
    print!("{report}");
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_selftest(args: &[String]) -> Result<i32> {
    let flags = Flags::parse(args);
    let tier = flags.get("tier").unwrap_or("fast");
    if tier != "fast" && tier != "full" {
        eprintln!("--tier wants fast or full");
        return Ok(2);
    }
    let t = Tower::default_tower();
    let params = ParamSet::desk27();
    let mut report = Report::default();

    // field axioms, exhaustive on GF(16)
    let f16 = FieldId::F2x4;
    let elems: Vec<_> = t.enumerate(f16).collect();
    let mut ok = true;
    for &a in &elems {
        for &b in &elems {
            if t.mul(a, b) != t.mul(b, a) {
                ok = false;
            }
            for &c in &elems {
                if t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)) {
                    ok = false;
                }
            }
        }
    }
    report.push("field-axioms-GF16", "exhaustive triples", format!("{ok}"), "true", ok);

    // subgroup sum fact, sampled
    let h = t.multiplicative_subgroup(FieldId::F2x16, 3)?;
    let mut rng = flags.seed()?.stream("selftest-subgroup");
    let trials = if tier == "fast" { 500 } else { 10_000 };
    let mut fails = 0;
    for _ in 0..trials {
        let p = crate::poly::UniPoly::new(
            FieldId::F2x16,
            (0..3).map(|_| t.sample(FieldId::F2x16, &mut rng)).collect(),
        );
        let total = crate::sumcheck::subgroup_sum(&t, &p.to_multi(1, 0), &h);
        if total != p.eval(&t, t.zero(FieldId::F2x16)) {
            fails += 1;
        }
    }
    report.push(
        "subgroup-sum-fact",
        format!("{trials} samples"),
        format!("{fails} failures"),
        "0",
        fails == 0,
    );

    // one honest end-to-end R1CS run
    let (inst, v) = r1cs::generate_instance(&t, params.q_prime, 3, flags.seed()?);
    let out = r1cs::prove(&t, &params, &inst, &v, flags.seed()?, None, false)?;
    report.push(
        "r1cs-honest-round-trip",
        "n=27",
        format!("{:?}", out.verdict),
        "Accept",
        out.verdict.accepted(),
    );
    let budget = r1cs::r1cs_budget(&params);
    report.push(
        "r1cs-query-accounting",
        "n=27",
        format!("{:?}", out.counters),
        format!("{budget:?}"),
        out.counters == budget,
    );

    if tier == "full" {
        let seeds = 0..20u64;
        let mut honest_ok = 0;
        for s in seeds.clone() {
            let (inst, v) = r1cs::generate_instance(&t, params.q_prime, 3, Seed::from_u64(s));
            let out = r1cs::prove(&t, &params, &inst, &v, Seed::from_u64(s), None, false)?;
            if out.verdict.accepted() {
                honest_ok += 1;
            }
        }
        report.push(
            "r1cs-honest-batch",
            "20 seeds",
            format!("{honest_ok}/20 accepts"),
            "20/20",
            honest_ok == 20,
        );
        let script = &ldt::script_catalog(TargetProtocol::R1cs)[0];
        let stats = ldt::run_r1cs_adversary(&t, &params, script, true, 0..20)?;
        report.push(
            "r1cs-adversary-batch",
            format!("script {}", script.name),
            format!("{}/{} rejections", stats.rejects, stats.runs),
            ">= 19/20",
            stats.rejects >= 19,
        );
    }

    print!("{report}");
    Ok(if report.all_pass() { 0 } else { 1 })
}
