//! Running the corpus and rendering the report.

use std::fmt::Write as _;
use std::time::Instant;

use kummerian::cohomology::{build_ring, cup, dual_name, h2_relations, relation_holds, H1Elem, QuadraticRing};
use kummerian::format::{describe_unit, parse_int_expr, parse_with_precision, parse_word};
use kummerian::fp;
use kummerian::kummer::{is_kummerian, search_orientations, KummerError};
use kummerian::massey::{cyclic_vanishing, solve, CyclicRoute, MasseyProblem, Mode, Status};
use kummerian::subgroups::{abelianization_check, kernel_presentation, restrict_orientation, FiniteQuotientMap};
use kummerian::torsion::{cross_check, torsion_report, TorsionError};
use kummerian::{OrientedPresentation, Padic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{corpus, Check, ClassSpec, CorpusEntry, KummerClass, Provenance, ProvenanceKind, SubgroupSpec};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub precision: u32,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Mismatch,
    InsufficientPrecision,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub provenance: Provenance,
    pub expected: String,
    pub observed: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub file: String,
    pub anchor: String,
    pub presentation: String,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub entries: usize,
    pub checks: usize,
    pub passed: usize,
    pub mismatches: usize,
    pub insufficient_precision: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub entry: String,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub engine_version: String,
    pub settings: Settings,
    pub summary: Summary,
    pub mismatches: Vec<String>,
    pub flags: Vec<String>,
    pub entries: Vec<EntryReport>,
    /// Wall-clock timings; only present when requested, since they are
    /// the one nondeterministic part of a report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.summary.mismatches == 0 && self.summary.errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let st = &self.settings;
        writeln!(s, "# Corpus report\n").unwrap();
        writeln!(
            s,
            "Engine {} (schema {}), precision {}, budget {}, seed {}.\n",
            self.engine_version, self.schema_version, st.precision, st.budget, st.seed
        )
        .unwrap();
        let sm = &self.summary;
        writeln!(
            s,
            "{} entries, {} checks: {} passed, {} mismatches, {} errors, {} need more precision.\n",
            sm.entries, sm.checks, sm.passed, sm.mismatches, sm.errors, sm.insufficient_precision
        )
        .unwrap();
        for f in &self.flags {
            writeln!(s, "- {f}").unwrap();
        }
        if !self.flags.is_empty() {
            writeln!(s).unwrap();
        }
        for e in &self.entries {
            writeln!(s, "## {}\n", e.name).unwrap();
            writeln!(s, "> {}\n", e.anchor).unwrap();
            writeln!(s, "`{}` from `{}`\n", e.presentation, e.file).unwrap();
            writeln!(s, "| check | source | expected | observed | status |").unwrap();
            writeln!(s, "|---|---|---|---|---|").unwrap();
            for c in &e.checks {
                let kind = match c.provenance.kind {
                    ProvenanceKind::Statement => "statement",
                    ProvenanceKind::Elementary => "elementary",
                    ProvenanceKind::Derived => "derived",
                };
                writeln!(
                    s,
                    "| {} | {}: {} | {} | {} | {:?} |",
                    c.check,
                    kind,
                    cell(&c.provenance.note),
                    cell(&c.expected),
                    cell(&c.observed),
                    c.status
                )
                .unwrap();
            }
            writeln!(s).unwrap();
        }
        if let Some(t) = &self.timings {
            writeln!(s, "## Timings\n").unwrap();
            for x in t {
                writeln!(s, "- {}: {} ms", x.entry, x.millis).unwrap();
            }
        }
        s
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', "; ")
}

fn outcome(check: &str, provenance: &Provenance, expected: String, observed: String, ok: bool) -> CheckResult {
    CheckResult {
        check: check.to_string(),
        provenance: provenance.clone(),
        expected,
        observed,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Mismatch },
    }
}

fn special(check: &str, provenance: &Provenance, expected: String, observed: String, status: CheckStatus) -> CheckResult {
    CheckResult { check: check.to_string(), provenance: provenance.clone(), expected, observed, status }
}

fn entry_rng(seed: u64, entry: usize, check: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((entry as u64) << 32) ^ (check as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_class(rng: &mut ChaCha8Rng, d: usize, p: u64) -> H1Elem {
    H1Elem((0..d).map(|_| rng.gen_range(0..p)).collect())
}

fn kummer_class_string(c: KummerClass) -> String {
    match c {
        KummerClass::Holds => "holds up to precision".to_string(),
        KummerClass::FailsAt { level } => format!("fails at level {level}"),
    }
}

fn check_kummer(op: &OrientedPresentation, expected: KummerClass, prov: &Provenance, n: u32) -> CheckResult {
    let exp = kummer_class_string(expected);
    let needed = match expected {
        KummerClass::Holds => 2,
        KummerClass::FailsAt { level } => level.max(2),
    };
    if n < needed {
        return special("kummer", prov, exp, format!("precision {n} < {needed}"), CheckStatus::InsufficientPrecision);
    }
    match is_kummerian(op) {
        Ok(v) => {
            let observed = match v.failing_level() {
                None => KummerClass::Holds,
                Some(level) => KummerClass::FailsAt { level },
            };
            outcome("kummer", prov, exp, kummer_class_string(observed), observed == expected)
        }
        Err(e) => special("kummer", prov, exp, e.to_string(), CheckStatus::Error),
    }
}

fn check_torsion(
    op: &OrientedPresentation,
    definite: &[u32],
    rank: usize,
    shape: &str,
    prov: &Provenance,
    n: u32,
) -> CheckResult {
    let exp = format!("definite {definite:?}, symbol rank {rank}, {shape}");
    match torsion_report(op, n) {
        Ok(rep) => {
            let m = rep.module.precision;
            if m < 2 || definite.iter().any(|&v| v >= m) {
                return special("torsion", prov, exp, format!("row precision {m}"), CheckStatus::InsufficientPrecision);
            }
            let observed = format!("definite {:?}, symbol rank {}, {}", rep.definite_torsion, rep.symbol_free_rank, rep.shape);
            let ok = rep.definite_torsion == definite && rep.symbol_free_rank == rank && rep.shape == shape;
            outcome("torsion", prov, exp, observed, ok)
        }
        Err(TorsionError::PrecisionTooLow { precision, depth }) => special(
            "torsion",
            prov,
            exp,
            format!("precision {precision} does not exceed base depth {depth}"),
            CheckStatus::InsufficientPrecision,
        ),
        Err(e) => special("torsion", prov, exp, e.to_string(), CheckStatus::Error),
    }
}

fn check_orientations(op: &OrientedPresentation, spec: &ClassSpec, prov: &Provenance, s: &Settings) -> CheckResult {
    let n = s.precision;
    let p = op.prime();
    let exp = match spec {
        ClassSpec::Empty => "no classes".to_string(),
        ClassSpec::Product(v) => {
            let parts: Vec<String> = v.iter().map(|x| x.map_or("any".to_string(), |c| c.to_string())).collect();
            format!("({}) mod p^(N-1)", parts.join(", "))
        }
    };
    if n < 2 {
        return special("orientations", prov, exp, format!("precision {n} < 2"), CheckStatus::InsufficientPrecision);
    }
    let search = match search_orientations(op.presentation(), n, s.budget) {
        Ok(x) => x,
        Err(e @ KummerError::BudgetExceeded { .. }) => {
            return special("orientations", prov, exp, e.to_string(), CheckStatus::Error)
        }
        Err(e) => return special("orientations", prov, exp, e.to_string(), CheckStatus::Error),
    };
    let classes: Vec<Vec<u64>> = search.classes.iter().map(|c| c.iter().map(Padic::value).collect()).collect();
    let modulus = p.pow(n - 1);
    let ok = match spec {
        ClassSpec::Empty => classes.is_empty(),
        ClassSpec::Product(v) => {
            let per_free = modulus / p;
            let expected_count: u64 = v.iter().map(|x| if x.is_some() { 1 } else { per_free }).product();
            classes.len() as u64 == expected_count
                && classes.iter().all(|c| {
                    c.iter().zip(v).all(|(&val, pin)| match pin {
                        Some(t) => val == t.rem_euclid(modulus as i64) as u64,
                        None => val % p == 1,
                    })
                })
        }
    };
    let observed = if classes.len() <= 4 {
        let shown: Vec<String> = classes
            .iter()
            .map(|c| format!("({})", c.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("{} class(es) mod {modulus}: {}", classes.len(), shown.join(" "))
    } else {
        format!("{} classes mod {modulus}", classes.len())
    };
    outcome("orientations", prov, exp, observed, ok)
}

/// Parses `χ∪φ0 = φ1∪φ2` or `χ∪φ1 = 0` into terms over pairs `i < j`.
pub fn parse_relation(text: &str, ring: &QuadraticRing) -> Result<Vec<(usize, usize, u64)>, String> {
    let p = ring.prime;
    let duals: Vec<String> = ring.generators.iter().map(|g| dual_name(g)).collect();
    let class = |name: &str| duals.iter().position(|d| d == name.trim()).ok_or_else(|| format!("unknown class `{name}`"));
    let mut terms: Vec<(usize, usize, u64)> = Vec::new();
    let (lhs, rhs) = text.split_once('=').ok_or_else(|| format!("no `=` in `{text}`"))?;
    for (side, sign) in [(lhs, 1u64), (rhs, p - 1)] {
        for part in side.split('+').map(str::trim).filter(|s| !s.is_empty() && *s != "0") {
            let (a, b) = part.split_once('∪').ok_or_else(|| format!("expected a product, got `{part}`"))?;
            let (i, j) = (class(a)?, class(b)?);
            let (i, j, c) = if i < j { (i, j, sign) } else { (j, i, (p - sign) % p) };
            if i == j {
                return Err(format!("`{part}` is a square"));
            }
            terms.push((i, j, c));
        }
    }
    Ok(terms)
}

fn check_ring(op: &OrientedPresentation, relations: &[String], prov: &Provenance) -> CheckResult {
    let exp = if relations.is_empty() { "no relations".to_string() } else { relations.join("; ") };
    let ring = match build_ring(op.presentation()) {
        Ok(r) => r,
        Err(e) => return special("ring", prov, exp, e.to_string(), CheckStatus::Error),
    };
    let d = ring.ngens();
    let p = ring.prime;
    let pairs = d * d.saturating_sub(1) / 2;
    let pos = |i: usize, j: usize| (0..i).map(|k| d - 1 - k).sum::<usize>() + (j - i - 1);
    let mut rows = Vec::new();
    let mut failing = Vec::new();
    for rel in relations {
        match parse_relation(rel, &ring) {
            Ok(terms) => {
                if !relation_holds(&ring, &terms) {
                    failing.push(rel.clone());
                }
                let mut v = vec![0u64; pairs];
                for (i, j, c) in terms {
                    v[pos(i, j)] = (v[pos(i, j)] + c) % p;
                }
                rows.push(v);
            }
            Err(e) => return special("ring", prov, exp, e, CheckStatus::Error),
        }
    }
    let basis = h2_relations(&ring);
    let listed_rank = fp::rank(&rows, pairs, p);
    let shown: Vec<String> = basis.iter().map(|r| format!("{} = 0", r.display(&ring.generators, p))).collect();
    let mut observed = format!(
        "{} independent relation(s), listed span {listed_rank}, pairings {}independent, sign convention [a, b] -> +1",
        basis.len(),
        if ring.independent { "" } else { "not " }
    );
    if basis.len() <= 6 && !basis.is_empty() {
        write!(observed, ": {}", shown.join("; ")).unwrap();
    }
    if !failing.is_empty() {
        write!(observed, "; failing: {}", failing.join("; ")).unwrap();
    }
    let ok = failing.is_empty() && listed_rank == basis.len() && ring.independent;
    outcome("ring", prov, exp, observed, ok)
}

fn check_cyclic(op: &OrientedPresentation, sample: usize, prov: &Provenance, s: &Settings, rng: &mut ChaCha8Rng) -> CheckResult {
    let exp = format!("{sample} pairs with α∪α' = 0, all certified");
    let pres = op.presentation();
    let ring = match build_ring(pres) {
        Ok(r) => r,
        Err(e) => return special("cyclic_massey", prov, exp, e.to_string(), CheckStatus::Error),
    };
    let (d, p) = (pres.ngens(), pres.prime());
    let (mut tried, mut certified, mut zero, mut direct, mut coset, mut searched) = (0, 0, 0, 0, 0, 0);
    let mut attempts = 0;
    while tried < sample && attempts < 200 * sample.max(1) {
        attempts += 1;
        let (a, b) = (random_class(rng, d, p), random_class(rng, d, p));
        if cup(&ring, &a, &b).iter().any(|&x| x != 0) {
            continue;
        }
        tried += 1;
        match cyclic_vanishing(pres, &ring, &a, &b, s.budget) {
            Ok(cert) if cert.vanishes == Status::Yes => {
                certified += 1;
                match cert.route {
                    CyclicRoute::ZeroClass => zero += 1,
                    CyclicRoute::Direct => direct += 1,
                    CyclicRoute::Coset { .. } => coset += 1,
                    CyclicRoute::Search { .. } => searched += 1,
                }
            }
            Ok(_) => {}
            Err(e) => return special("cyclic_massey", prov, exp, e.to_string(), CheckStatus::Error),
        }
    }
    let observed = format!(
        "{certified}/{tried} certified (zero class {zero}, direct {direct}, coset {coset}, search {searched})"
    );
    outcome("cyclic_massey", prov, exp, observed, tried == sample && certified == tried)
}

fn check_two_fold(op: &OrientedPresentation, pairs: usize, prov: &Provenance, s: &Settings, rng: &mut ChaCha8Rng) -> CheckResult {
    let exp = format!("{pairs} random pairs: <α, β> = α∪β");
    let pres = op.presentation();
    let ring = match build_ring(pres) {
        Ok(r) => r,
        Err(e) => return special("cup_two_fold", prov, exp, e.to_string(), CheckStatus::Error),
    };
    let (d, p) = (pres.ngens(), pres.prime());
    let mut agree = 0;
    for _ in 0..pairs {
        let (a, b) = (random_class(rng, d, p), random_class(rng, d, p));
        let problem = MasseyProblem { alphas: vec![a.clone(), b.clone()], mode: Mode::Defined };
        match solve(&problem, pres, s.budget) {
            Ok(out) if out.value.as_deref() == Some(&cup(&ring, &a, &b)[..]) => agree += 1,
            Ok(_) => {}
            Err(e) => return special("cup_two_fold", prov, exp, e.to_string(), CheckStatus::Error),
        }
    }
    outcome("cup_two_fold", prov, exp, format!("{agree}/{pairs} agree"), agree == pairs)
}

const MAX_INHERITANCE_SUBSETS: u32 = 1 << 12;

fn check_inheritance(op: &OrientedPresentation, prov: &Provenance, n: u32) -> CheckResult {
    let exp = "every quotient by θ-trivial generators passes".to_string();
    if n < 2 {
        return special("quotient_inheritance", prov, exp, format!("precision {n} < 2"), CheckStatus::InsufficientPrecision);
    }
    match is_kummerian(op) {
        Ok(v) if v.holds() => {}
        Ok(_) => return outcome("quotient_inheritance", prov, exp, "the group itself fails".to_string(), false),
        Err(e) => return special("quotient_inheritance", prov, exp, e.to_string(), CheckStatus::Error),
    }
    let trivial: Vec<usize> = (0..op.ngens()).filter(|&g| op.orientation().value(g).is_one()).collect();
    let subsets = (1u32 << trivial.len().min(12)).min(MAX_INHERITANCE_SUBSETS);
    let mut failures = Vec::new();
    for mask in 1..subsets {
        let kill: Vec<usize> = trivial.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &g)| g).collect();
        let ok = op
            .quotient_by_generators(&kill)
            .ok()
            .filter(|q| q.validate().map(|r| r.is_valid()).unwrap_or(false))
            .and_then(|q| is_kummerian(&q).ok())
            .is_some_and(|v| v.holds());
        if !ok {
            let names: Vec<&str> = kill.iter().map(|&g| op.presentation().generators()[g].as_str()).collect();
            failures.push(names.join(" "));
        }
    }
    let observed = if failures.is_empty() {
        format!("{} quotients pass", subsets - 1)
    } else {
        format!("failing kills: {}", failures.join("; "))
    };
    outcome("quotient_inheritance", prov, exp, observed, failures.is_empty())
}

fn check_subgroup(op: &OrientedPresentation, spec: &SubgroupSpec, prov: &Provenance, n: u32) -> CheckResult {
    let shown: Vec<String> = spec.generators.iter().map(|(w, t)| format!("θ({w}) = {t}")).collect();
    let exp = format!("kernel of {} onto {}; {}", spec.map, spec.target, shown.join(", "));
    let pres = op.presentation();
    let err = |e: String| special("subgroup", prov, exp.clone(), e, CheckStatus::Error);
    let map = match FiniteQuotientMap::parse(pres, &spec.map, &spec.target) {
        Ok(m) => m,
        Err(e) => return err(e.to_string()),
    };
    let sp = match kernel_presentation(pres, &map) {
        Ok(sp) => sp,
        Err(e) => return err(e.to_string()),
    };
    let index = map.index() as usize;
    let mut ok = sp.generators.len() == index * (pres.ngens() - 1) + 1
        && sp.presentation.relators().len() == index * pres.relators().len();
    let theta = match restrict_orientation(op, &sp) {
        Ok(t) => t,
        Err(e) => return err(e.to_string()),
    };
    let mut notes = vec![format!(
        "index {index}, {} generators, {} relators",
        sp.generators.len(),
        sp.presentation.relators().len()
    )];
    for (word, expr) in &spec.generators {
        let w = match parse_word(word, pres.prime(), pres.generators()) {
            Ok(w) => w.normalize(),
            Err(e) => return err(e.to_string()),
        };
        let Some(k) = sp.embedding.iter().position(|e| *e == w || e.inverse() == w) else {
            ok = false;
            notes.push(format!("{word} is not a Schreier generator"));
            continue;
        };
        let value = theta.value(k);
        let target = parse_int_expr(expr, pres.prime())
            .ok()
            .and_then(|v| {
                let m = num_bigint::BigInt::from(value.as_padic().modulus());
                let r = ((v % &m) + &m) % &m;
                u64::try_from(r).ok()
            });
        let matches = target == Some(value.as_padic().value());
        ok &= matches;
        notes.push(format!("θ({}) = {}", sp.generators[k].name, describe_unit(value)));
    }
    let kernel = match OrientedPresentation::new(sp.presentation.clone(), theta) {
        Ok(k) => k,
        Err(e) => return err(e.to_string()),
    };
    match cross_check(&kernel, n) {
        Ok(c) => {
            ok &= c.agree;
            notes.push(format!(
                "kernel: Kummer {}, torsion {}",
                c.kummer_failing_level.map_or("holds".to_string(), |l| format!("fails at level {l}")),
                c.torsion_valuation.map_or("none".to_string(), |v| format!("p^{v}"))
            ));
        }
        Err(e) => return err(e.to_string()),
    }
    let ab = abelianization_check(&sp);
    let torsion = if ab.torsion.is_empty() { String::new() } else { format!(" ⊕ torsion {}", ab.torsion.join(", ")) };
    notes.push(format!("abelianization Z^{}{torsion}", ab.free_rank));
    outcome("subgroup", prov, exp, notes.join("; "), ok)
}

fn check_agreement(op: &OrientedPresentation, n: u32) -> CheckResult {
    let prov = Provenance {
        kind: ProvenanceKind::Derived,
        note: "cocycle surjectivity and torsion-freeness of Ker θ / K decide the same class".to_string(),
    };
    let exp = "Kummer test and torsion test agree".to_string();
    match cross_check(op, n) {
        Ok(c) if c.precision < 2 => special(
            "oracle_agreement",
            &prov,
            exp,
            format!("row precision {}", c.precision),
            CheckStatus::InsufficientPrecision,
        ),
        Ok(c) => {
            let observed = format!(
                "at precision {}: Kummer {}, torsion {}",
                c.precision,
                c.kummer_failing_level.map_or("holds".to_string(), |l| format!("fails at level {l}")),
                c.torsion_valuation.map_or("free".to_string(), |v| format!("p^{v}"))
            );
            outcome("oracle_agreement", &prov, exp, observed, c.agree)
        }
        Err(kummerian::Error::Torsion(TorsionError::PrecisionTooLow { precision, depth })) => special(
            "oracle_agreement",
            &prov,
            exp,
            format!("precision {precision} does not exceed base depth {depth}"),
            CheckStatus::InsufficientPrecision,
        ),
        Err(e) => special("oracle_agreement", &prov, exp, e.to_string(), CheckStatus::Error),
    }
}

pub fn run_entry(entry: &CorpusEntry, index: usize, settings: &Settings) -> EntryReport {
    let n = settings.precision;
    let op = match parse_with_precision(entry.text, n) {
        Ok(op) => op,
        Err(e) => {
            let prov = Provenance { kind: ProvenanceKind::Elementary, note: "file parses".to_string() };
            return EntryReport {
                name: entry.name.clone(),
                file: entry.file.clone(),
                anchor: entry.anchor.clone(),
                presentation: String::new(),
                checks: vec![special("parse", &prov, "valid file".to_string(), e.to_string(), CheckStatus::Error)],
            };
        }
    };
    let mut checks = Vec::new();
    for (k, ex) in entry.expectations.iter().enumerate() {
        let prov = &ex.provenance;
        let mut rng = entry_rng(settings.seed, index, k);
        checks.push(match &ex.check {
            Check::Kummer(c) => check_kummer(&op, *c, prov, n),
            Check::Torsion { definite, symbol_free_rank, shape } => {
                check_torsion(&op, definite, *symbol_free_rank, shape, prov, n)
            }
            Check::Orientations(spec) => check_orientations(&op, spec, prov, settings),
            Check::Ring { relations } => check_ring(&op, relations, prov),
            Check::CyclicMassey { sample } => check_cyclic(&op, *sample, prov, settings, &mut rng),
            Check::CupIsTwoFold { pairs } => check_two_fold(&op, *pairs, prov, settings, &mut rng),
            Check::QuotientInheritance => check_inheritance(&op, prov, n),
            Check::Subgroup(spec) => check_subgroup(&op, spec, prov, n),
        });
    }
    checks.push(check_agreement(&op, n));
    EntryReport {
        name: entry.name.clone(),
        file: entry.file.clone(),
        anchor: entry.anchor.clone(),
        presentation: op.to_string(),
        checks,
    }
}

pub fn run_entries(entries: &[CorpusEntry], settings: Settings, timings: bool) -> Report {
    let results: Vec<(EntryReport, u128)> = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let start = Instant::now();
            let r = run_entry(e, i, &settings);
            (r, start.elapsed().as_millis())
        })
        .collect();
    let mut summary = Summary { entries: results.len(), ..Summary::default() };
    let mut mismatches = Vec::new();
    let mut flags = Vec::new();
    for (e, _) in &results {
        for c in &e.checks {
            summary.checks += 1;
            match c.status {
                CheckStatus::Pass => summary.passed += 1,
                CheckStatus::Mismatch => {
                    summary.mismatches += 1;
                    mismatches.push(format!("{}/{}: expected {}, observed {}", e.name, c.check, c.expected, c.observed));
                }
                CheckStatus::Error => {
                    summary.errors += 1;
                    mismatches.push(format!("{}/{}: error: {}", e.name, c.check, c.observed));
                }
                CheckStatus::InsufficientPrecision => summary.insufficient_precision += 1,
            }
        }
    }
    if summary.insufficient_precision > 0 {
        flags.push(format!(
            "insufficient precision: {} check(s) need a precision above {}",
            summary.insufficient_precision, settings.precision
        ));
    }
    let timings = timings.then(|| {
        results.iter().map(|(e, ms)| Timing { entry: e.name.clone(), millis: *ms }).collect()
    });
    Report {
        schema_version: SCHEMA_VERSION,
        engine_version: ENGINE_VERSION.to_string(),
        settings,
        summary,
        mismatches,
        flags,
        entries: results.into_iter().map(|(e, _)| e).collect(),
        timings,
    }
}

/// Runs the bundled corpus.
pub fn run_corpus(precision: u32, budget: u64, seed: u64) -> Report {
    run_entries(&corpus(), Settings { precision, budget, seed }, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kummerian::fixtures;

    fn ring() -> QuadraticRing {
        let op = kummerian::parse(&fixtures::amalgam(3, 0, 2, Some("1-p"), 4)).unwrap();
        build_ring(op.presentation()).unwrap()
    }

    #[test]
    fn relations_parse_into_ordered_pairs() {
        let ring = ring();
        assert_eq!(parse_relation("χ∪ψ0 = ψ1∪ψ2", &ring).unwrap(), vec![(0, 2, 1), (3, 4, 2)]);
        assert_eq!(parse_relation("ψ0∪χ = 0", &ring).unwrap(), vec![(0, 2, 2)]);
        assert!(parse_relation("χ∪χ = 0", &ring).is_err());
        assert!(parse_relation("χ∪ω = 0", &ring).is_err());
        assert!(parse_relation("χ∪ψ0", &ring).is_err());
    }

    #[test]
    fn entry_rngs_are_independent_of_order() {
        let a: u64 = entry_rng(5, 2, 1).gen();
        let b: u64 = entry_rng(5, 2, 1).gen();
        let c: u64 = entry_rng(5, 1, 2).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
