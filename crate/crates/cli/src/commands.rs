//! The subcommands, as functions from arguments to printable output.

use std::fmt::Write as _;

use kummerian::cohomology::{build_ring, dual_name, h2_relations, H1Elem};
use kummerian::format::{describe_unit, parse_unchecked, parse_with_precision, to_file_string};
use kummerian::kummer::{is_kummerian, search_orientations, Overall};
use kummerian::massey::{cyclic_vanishing, solve, CyclicRoute, MasseyProblem, Mode, Status};
use kummerian::subgroups::{abelianization_check, kernel_presentation, restrict_orientation, FiniteQuotientMap};
use kummerian::torsion::torsion_report;
use kummerian::OrientedPresentation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::corpus;
use crate::report::{run_entries, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

impl Output {
    fn new(text: String, json: Value, exit: i32) -> Self {
        Output { text, json, exit }
    }

    fn input_error(msg: String) -> Self {
        Output { json: json!({ "error": msg }), text: format!("error: {msg}\n"), exit: EXIT_INPUT }
    }

    fn usage_error(msg: String) -> Self {
        Output { json: json!({ "error": msg }), text: format!("error: {msg}\n"), exit: EXIT_USAGE }
    }
}

/// Reads a presentation file. `corpus:NAME` refers to a bundled file.
pub fn read_source(path: &str) -> Result<String, Output> {
    if let Some(name) = path.strip_prefix("corpus:") {
        return corpus::file(name)
            .map(str::to_string)
            .ok_or_else(|| Output::input_error(format!("no bundled file `{name}`")));
    }
    std::fs::read_to_string(path).map_err(|e| Output::input_error(format!("{path}: {e}")))
}

fn load(path: &str, precision: Option<u32>) -> Result<OrientedPresentation, Output> {
    let text = read_source(path)?;
    let parsed = match precision {
        Some(n) => parse_with_precision(&text, n),
        None => kummerian::parse(&text),
    };
    parsed.map_err(|e| Output::input_error(format!("{path}: {e}")))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn validate(path: &str, precision: Option<u32>) -> Output {
    let text = match read_source(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let op = match parse_unchecked(&text) {
        Ok(op) => op,
        Err(e) => return Output::input_error(format!("{path}: {e}")),
    };
    let op = precision.map_or(op.clone(), |n| op.with_precision(n));
    let report = match op.validate() {
        Ok(r) => r,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let mut s = format!("{op}\n");
    writeln!(s, "precision {}", op.precision()).unwrap();
    writeln!(s, "minimal: {}", if report.minimal { "yes" } else { "no" }).unwrap();
    let names = op.presentation().generators();
    for &r in &report.non_minimal_relators {
        writeln!(s, "  relator {r} is not in the Frattini subgroup: {}", op.presentation().relators()[r].display(names)).unwrap();
    }
    for issue in &report.relator_issues {
        writeln!(
            s,
            "  θ(relator {}) = {}, agrees with 1 only modulo p^{}",
            issue.relator, issue.value, issue.agrees_to
        )
        .unwrap();
    }
    let valid = report.is_valid();
    writeln!(s, "{}", if valid { "valid" } else { "invalid: the orientation does not kill every relator" }).unwrap();
    Output::new(s, json!({ "presentation": op.to_string(), "validation": to_json(&report) }), if valid { EXIT_OK } else { EXIT_INPUT })
}

pub fn kummer_check(path: &str, precision: Option<u32>) -> Output {
    let op = match load(path, precision) {
        Ok(op) => op,
        Err(o) => return o,
    };
    let v = match is_kummerian(&op) {
        Ok(v) => v,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let mut s = format!("{op}\n");
    if !v.minimal {
        writeln!(
            s,
            "non-minimal presentation: {} residual row(s) after eliminating unit pivots",
            v.residual.rows.len()
        )
        .unwrap();
    }
    for l in &v.levels {
        writeln!(s, "level {}: {}", l.level, if l.passes { "surjective" } else { "not surjective" }).unwrap();
    }
    let names = op.presentation().generators();
    match &v.overall {
        Overall::Fails { level, witness } => writeln!(
            s,
            "not Kummerian: fails at level {level} (relator {}, generator {}, entry {} of valuation {})",
            witness.relator, names[witness.generator], witness.entry, witness.valuation
        )
        .unwrap(),
        Overall::HoldsUpToPrecision { precision } => {
            writeln!(s, "Kummerian up to precision {precision}").unwrap()
        }
    }
    let exit = if v.holds() { EXIT_OK } else { EXIT_NEGATIVE };
    Output::new(s, to_json(&v), exit)
}

pub fn orient_search(path: &str, precision: Option<u32>, budget: u64) -> Output {
    let text = match read_source(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let op = match parse_unchecked(&text) {
        Ok(op) => op,
        Err(e) => return Output::input_error(format!("{path}: {e}")),
    };
    let n = precision.unwrap_or(op.precision());
    let pres = op.presentation();
    let search = match search_orientations(pres, n, budget) {
        Ok(s) => s,
        Err(e) => {
            let text = format!("search incomplete: {e}");
            return Output::new(text, json!({ "error": e.to_string() }), EXIT_NEGATIVE);
        }
    };
    let modulus = pres.prime().pow(n - 1);
    let mut s = format!(
        "{} Kummerian orientation class(es) modulo {modulus} ({} survivors at precision {n}, {} candidates evaluated)\n",
        search.classes.len(),
        search.survivors,
        search.evaluated
    );
    for class in &search.classes {
        let parts: Vec<String> = pres
            .generators()
            .iter()
            .zip(class)
            .map(|(g, v)| {
                let unit = kummerian::UnitOneP::new(*v).expect("classes are 1 mod p");
                format!("θ({g}) = {}", describe_unit(&unit))
            })
            .collect();
        writeln!(s, "  {}", parts.join(", ")).unwrap();
    }
    let exit = if search.classes.is_empty() { EXIT_NEGATIVE } else { EXIT_OK };
    Output::new(s, to_json(&search), exit)
}

pub fn torsion(path: &str, precision: Option<u32>) -> Output {
    let op = match load(path, precision) {
        Ok(op) => op,
        Err(o) => return o,
    };
    let rep = match torsion_report(&op, op.precision()) {
        Ok(r) => r,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let mut s = format!("{op}\n");
    writeln!(s, "module rows known modulo p^{}", rep.module.precision).unwrap();
    let vals: Vec<String> = rep.divisors.iter().map(|d| format!("{:?}(v={})", d.kind, d.valuation)).collect();
    writeln!(s, "elementary divisors: {}", if vals.is_empty() { "none".to_string() } else { vals.join(", ") }).unwrap();
    writeln!(s, "G/K ≅ {}", rep.shape).unwrap();
    if rep.ambiguous > 0 {
        writeln!(s, "{} divisor(s) vanish at this precision and are counted as free", rep.ambiguous).unwrap();
    }
    let exit = match rep.definite_torsion.first() {
        Some(v) => {
            writeln!(s, "not Kummerian: Ker θ / K has torsion of order p^{v}").unwrap();
            EXIT_NEGATIVE
        }
        None => {
            writeln!(s, "torsion-free up to precision {}", rep.module.precision).unwrap();
            EXIT_OK
        }
    };
    Output::new(s, to_json(&rep), exit)
}

pub fn ring(path: &str) -> Output {
    let op = match load(path, None) {
        Ok(op) => op,
        Err(o) => return o,
    };
    let ring = match build_ring(op.presentation()) {
        Ok(r) => r,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let names = &ring.generators;
    let p = ring.prime;
    let duals: Vec<String> = names.iter().map(|g| dual_name(g)).collect();
    let mut s = format!("H^1 basis: {}\n", duals.join(", "));
    writeln!(s, "H^2 spanned by {} relator dual(s)", ring.nrelators()).unwrap();
    if !ring.independent {
        writeln!(s, "warning: the cup-product pairings are linearly dependent").unwrap();
    }
    for (r, m) in ring.pairings.iter().enumerate() {
        let mut terms = Vec::new();
        for i in 0..names.len() {
            for j in (i + 1)..names.len() {
                if m[i][j] != 0 {
                    terms.push(format!("{}·{}∪{}", m[i][j], duals[i], duals[j]));
                }
            }
        }
        writeln!(s, "relator {r}: {}", if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }).unwrap();
    }
    let rels = h2_relations(&ring);
    writeln!(s, "{} relation(s):", rels.len()).unwrap();
    let shown: Vec<String> = rels.iter().map(|r| format!("{} = 0", r.display(names, p))).collect();
    for line in &shown {
        writeln!(s, "  {line}").unwrap();
    }
    Output::new(s, json!({ "ring": to_json(&ring), "relations": shown }), EXIT_OK)
}

fn parse_classes(text: &str, names: &[String], p: u64) -> Result<Vec<H1Elem>, Output> {
    text.split(',')
        .map(|c| H1Elem::parse(c.trim(), names, p).map_err(|e| Output::usage_error(e.to_string())))
        .collect()
}

pub fn massey(path: &str, classes: &str, mode: &str, beta: Option<&str>, budget: u64) -> Output {
    let op = match load(path, None) {
        Ok(op) => op,
        Err(o) => return o,
    };
    let pres = op.presentation();
    let p = pres.prime();
    let alphas = match parse_classes(classes, pres.generators(), p) {
        Ok(a) => a,
        Err(o) => return o,
    };
    let mode = match (mode, beta) {
        ("defined", None) => Mode::Defined,
        ("vanish", None) => Mode::Vanish,
        ("target", Some(b)) => {
            let vals: Result<Vec<u64>, _> = b.split(',').map(|x| x.trim().parse::<i64>().map(|v| v.rem_euclid(p as i64) as u64)).collect();
            match vals {
                Ok(v) => Mode::Target(v),
                Err(e) => return Output::usage_error(format!("--beta: {e}")),
            }
        }
        ("target", None) => return Output::usage_error("--mode target needs --beta".to_string()),
        (_, Some(_)) => return Output::usage_error("--beta only applies to --mode target".to_string()),
        (m, _) => return Output::usage_error(format!("unknown mode `{m}`; use defined, vanish or target")),
    };
    let problem = MasseyProblem { alphas, mode };
    let out = match solve(&problem, pres, budget) {
        Ok(o) => o,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let names = pres.generators();
    let shown: Vec<String> = problem.alphas.iter().map(|a| a.display(names, p).to_string()).collect();
    let mut s = format!("<{}>\n", shown.join(", "));
    writeln!(s, "defined: {:?}", out.defined).unwrap();
    writeln!(s, "vanishes: {:?}", out.vanishes).unwrap();
    if let Some(v) = &out.value {
        writeln!(s, "witness value on relator duals: {v:?}").unwrap();
    }
    if let Some(w) = &out.witness {
        for (g, m) in names.iter().zip(w) {
            writeln!(s, "  {g} -> {m}").unwrap();
        }
    }
    writeln!(s, "layer systems solved: {}", out.solves).unwrap();
    let ok = match problem.mode {
        Mode::Defined => out.defined == Status::Yes,
        Mode::Vanish => out.vanishes == Status::Yes,
        Mode::Target(_) => out.witness.is_some(),
    };
    Output::new(s, to_json(&out), if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

pub enum PairSource {
    Exhaustive,
    Sample(usize),
}

pub fn massey_cyclic(path: &str, source: PairSource, seed: u64, budget: u64) -> Output {
    let op = match load(path, None) {
        Ok(op) => op,
        Err(o) => return o,
    };
    let pres = op.presentation();
    let ring = match build_ring(pres) {
        Ok(r) => r,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let (d, p) = (pres.ngens(), pres.prime());
    let pairs: Box<dyn Iterator<Item = (H1Elem, H1Elem)>> = match source {
        PairSource::Exhaustive => {
            let all = H1Elem::all(d, p);
            Box::new(all.clone().into_iter().flat_map(move |a| all.clone().into_iter().map(move |b| (a.clone(), b))))
        }
        PairSource::Sample(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = Vec::with_capacity(k);
            let mut attempts = 0usize;
            while picked.len() < k && attempts < 1000 * k.max(1) {
                attempts += 1;
                let a = H1Elem((0..d).map(|_| rng.gen_range(0..p)).collect());
                let b = H1Elem((0..d).map(|_| rng.gen_range(0..p)).collect());
                if kummerian::cohomology::cup(&ring, &a, &b).iter().all(|&x| x == 0) {
                    picked.push((a, b));
                }
            }
            Box::new(picked.into_iter())
        }
    };
    let (mut pairs_seen, mut eligible, mut certified) = (0u64, 0u64, 0u64);
    let mut routes = [0u64; 4];
    let mut failures = Vec::new();
    for (a, b) in pairs {
        pairs_seen += 1;
        if kummerian::cohomology::cup(&ring, &a, &b).iter().any(|&x| x != 0) {
            continue;
        }
        eligible += 1;
        match cyclic_vanishing(pres, &ring, &a, &b, budget) {
            Ok(c) if c.vanishes == Status::Yes => {
                certified += 1;
                routes[match c.route {
                    CyclicRoute::ZeroClass => 0,
                    CyclicRoute::Direct => 1,
                    CyclicRoute::Coset { .. } => 2,
                    CyclicRoute::Search { .. } => 3,
                }] += 1;
            }
            Ok(c) => failures.push(format!(
                "({}, {}): {:?}",
                a.display(pres.generators(), p),
                b.display(pres.generators(), p),
                c.vanishes
            )),
            Err(e) => return Output::input_error(e.to_string()),
        }
    }
    let mut s = format!("{pairs_seen} pair(s) examined, {eligible} with α∪α' = 0, {certified} certified\n");
    writeln!(s, "routes: zero class {}, direct {}, coset {}, search {}", routes[0], routes[1], routes[2], routes[3]).unwrap();
    for f in failures.iter().take(20) {
        writeln!(s, "  uncertified {f}").unwrap();
    }
    let json = json!({
        "pairs": pairs_seen,
        "eligible": eligible,
        "certified": certified,
        "routes": { "zero_class": routes[0], "direct": routes[1], "coset": routes[2], "search": routes[3] },
        "uncertified": failures,
    });
    Output::new(s, json, if certified == eligible { EXIT_OK } else { EXIT_NEGATIVE })
}

pub fn subgroup(path: &str, map: &str, target: &str) -> Output {
    let op = match load(path, None) {
        Ok(op) => op,
        Err(o) => return o,
    };
    let pres = op.presentation();
    let map = match FiniteQuotientMap::parse(pres, map, target) {
        Ok(m) => m,
        Err(e) => return Output::usage_error(e.to_string()),
    };
    let sp = match kernel_presentation(pres, &map) {
        Ok(sp) => sp,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let theta = match restrict_orientation(&op, &sp) {
        Ok(t) => t,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let kernel = match OrientedPresentation::new(sp.presentation.clone(), theta) {
        Ok(k) => k,
        Err(e) => return Output::input_error(e.to_string()),
    };
    let names = pres.generators();
    let mut s = format!("# Kernel of index {} in {}\n", sp.index, op.presentation());
    let mut table = Vec::new();
    for (g, w) in sp.generators.iter().zip(&sp.embedding) {
        let shown = w.display(names).to_string();
        writeln!(s, "# {} = {}", g.name, if shown.is_empty() { "1".to_string() } else { shown.clone() }).unwrap();
        table.push(json!({ "name": g.name, "coset": g.coset, "generator": names[g.generator], "word": shown }));
    }
    let ab = abelianization_check(&sp);
    writeln!(s, "# abelianization: free rank {}, torsion {:?}", ab.free_rank, ab.torsion).unwrap();
    s.push_str(&to_file_string(&kernel));
    let json = json!({
        "index": sp.index,
        "file": to_file_string(&kernel),
        "embedding": table,
        "abelianization": to_json(&ab),
    });
    Output::new(s, json, EXIT_OK)
}

pub fn corpus_report(precision: u32, budget: u64, seed: u64, timings: bool) -> (Output, String) {
    let report = run_entries(&corpus::corpus(), Settings { precision, budget, seed }, timings);
    let mut s = format!(
        "{} entries, {} checks: {} passed, {} mismatches, {} errors, {} need more precision\n",
        report.summary.entries,
        report.summary.checks,
        report.summary.passed,
        report.summary.mismatches,
        report.summary.errors,
        report.summary.insufficient_precision
    );
    for f in &report.flags {
        writeln!(s, "flag: {f}").unwrap();
    }
    for m in &report.mismatches {
        writeln!(s, "mismatch: {m}").unwrap();
    }
    let exit = if report.is_clean() { EXIT_OK } else { EXIT_NEGATIVE };
    let markdown = report.to_markdown();
    let json: Value = serde_json::from_str(&report.to_json()).expect("valid json");
    (Output::new(s, json, exit), markdown)
}
