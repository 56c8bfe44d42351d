//! The bundled corpus and its expected results.

use serde::Serialize;

/// Where an expectation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceKind {
    /// A statement about the group quoted in the anchor.
    Statement,
    /// Immediate from the definitions.
    Elementary,
    /// Worked out independently from the presentation by the stated rule.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub kind: ProvenanceKind,
    pub note: String,
}

fn statement(note: &str) -> Provenance {
    Provenance { kind: ProvenanceKind::Statement, note: note.to_string() }
}

fn elementary(note: &str) -> Provenance {
    Provenance { kind: ProvenanceKind::Elementary, note: note.to_string() }
}

fn derived(note: &str) -> Provenance {
    Provenance { kind: ProvenanceKind::Derived, note: note.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum KummerClass {
    Holds,
    FailsAt { level: u32 },
}

/// Surviving orientations modulo `p^(N-1)`, as a product set: each generator
/// is either pinned to an exact integer or ranges over all of `1 + pZ_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum ClassSpec {
    Empty,
    Product(Vec<Option<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupSpec {
    pub map: String,
    pub target: String,
    /// Words in the ambient generators that must occur as Schreier
    /// generators, with the expected `θ` as an expression in `p`.
    pub generators: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    Kummer(KummerClass),
    Torsion { definite: Vec<u32>, symbol_free_rank: usize, shape: String },
    Orientations(ClassSpec),
    /// Relations among cup products, written with dual names, e.g.
    /// `χ∪φ0 = φ1∪φ2`. Together they must span all relations.
    Ring { relations: Vec<String> },
    /// Seeded sample of pairs with `α ∪ α' = 0`, each needing a certificate.
    CyclicMassey { sample: usize },
    /// Seeded random pairs whose two-fold product must equal the cup product.
    CupIsTwoFold { pairs: usize },
    /// Every quotient by generators with trivial `θ` passes the Kummer test.
    QuotientInheritance,
    Subgroup(SubgroupSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub check: Check,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub file: String,
    #[serde(skip)]
    pub text: &'static str,
    pub anchor: String,
    pub expectations: Vec<Expectation>,
}

macro_rules! bundled {
    ($name:literal) => {
        ($name, include_str!(concat!("../corpus/", $name)))
    };
}

/// The presentation files shipped with the crate, by file name.
pub const FILES: [(&str, &str); 13] = [
    bundled!("amalgam_0_2.pres"),
    bundled!("amalgam_2_0.pres"),
    bundled!("amalgam_2_2.pres"),
    bundled!("commutator_pair_2_2.pres"),
    bundled!("iterated_q0.pres"),
    bundled!("iterated_qp.pres"),
    bundled!("raag_qp.pres"),
    bundled!("cyclic_p.pres"),
    bundled!("cyclic_p2.pres"),
    bundled!("free_1.pres"),
    bundled!("free_2.pres"),
    bundled!("free_3.pres"),
    bundled!("endgame.pres"),
];

pub fn file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

fn expect(check: Check, provenance: Provenance) -> Expectation {
    Expectation { check, provenance }
}

fn entry(name: &str, file_name: &str, anchor: &str, expectations: Vec<Expectation>) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        file: file_name.to_string(),
        text: file(file_name).expect("bundled file"),
        anchor: anchor.to_string(),
        expectations,
    }
}

fn cup_two_fold() -> Expectation {
    expect(Check::CupIsTwoFold { pairs: 100 }, statement("the 2-fold Massey product coincides with the cup product"))
}

fn inheritance() -> Expectation {
    expect(
        Check::QuotientInheritance,
        statement("quotients by normal subgroups generated by elements of trivial orientation stay Kummerian"),
    )
}

/// `χ∪φ0 = φ1∪φ2 = ...`, `χ∪ψ0 = ψ1∪ψ2 = ...`, and every other product of
/// distinct basis classes vanishes.
pub fn amalgam_relations(d1: usize, d2: usize) -> Vec<String> {
    let mut classes = vec!["χ".to_string()];
    classes.extend((0..=d1).map(|i| format!("φ{i}")));
    classes.extend((0..=d2).map(|j| format!("ψ{j}")));
    let mut out = Vec::new();
    let mut special = Vec::new();
    for (letter, d) in [("φ", d1), ("ψ", d2)] {
        special.push(("χ".to_string(), format!("{letter}0")));
        for k in (1..d).step_by(2) {
            let (a, b) = (format!("{letter}{k}"), format!("{letter}{}", k + 1));
            out.push(format!("χ∪{letter}0 = {a}∪{b}"));
            special.push((a, b));
        }
    }
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            let pair = (classes[i].clone(), classes[j].clone());
            if !special.contains(&pair) {
                out.push(format!("{}∪{} = 0", pair.0, pair.1));
            }
        }
    }
    out
}

fn all_vanish(names: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..names.len() {
        for j in (i + 1)..names.len() {
            out.push(format!("{}∪{} = 0", names[i], names[j]));
        }
    }
    out
}

fn amalgam(d1: usize, d2: usize, sample: usize) -> CorpusEntry {
    let d = d1 + d2 + 3;
    let mut pinned = vec![Some(-2i64)];
    pinned.extend(std::iter::repeat_n(Some(1), d - 1));
    let mut expectations = vec![
        expect(Check::Kummer(KummerClass::Holds), statement("the group with θ(x) = 1 - p is Kummerian")),
        expect(
            Check::Torsion { definite: vec![], symbol_free_rank: d, shape: format!("Z_p^{} ⋊ Im θ", d - 1) },
            derived("relator rows vanish at θ(x) = 1 - p, so the symbol module is free on x, all y_i, all z_j"),
        ),
        expect(
            Check::Orientations(ClassSpec::Product(pinned)),
            statement("θ(x) = 1 - p and θ(y_i) = θ(z_j) = 1 is the only Kummerian orientation"),
        ),
        expect(
            Check::Ring { relations: amalgam_relations(d1, d2) },
            statement("χ∪φ_0 = φ_1∪φ_2 = ..., χ∪ψ_0 = ψ_1∪ψ_2 = ..., all other products vanish"),
        ),
        expect(Check::CyclicMassey { sample }, statement("the group has the p-cyclic Massey vanishing property")),
        cup_two_fold(),
        inheritance(),
    ];
    if d1 == 2 && d2 == 2 {
        expectations.push(expect(
            Check::Subgroup(SubgroupSpec {
                map: "x:1,0; y0:0,1; z0:0,1".to_string(),
                target: "p,p".to_string(),
                generators: vec![("x^p".to_string(), "(1-p)^p".to_string()), ("z0 y0^-1".to_string(), "1".to_string())],
            }),
            statement("u = x^p has θ(u) = (1-p)^p and t = z_0^-1 y_0 has θ(t) = 1"),
        ));
    }
    entry(
        &format!("amalgam_{d1}_{d2}"),
        &format!("amalgam_{d1}_{d2}.pres"),
        "relators y_0^p [y_0, x^-1][y_1, y_2]... and z_0^p [z_0, x^-1][z_1, z_2]...: Kummerian only for θ(x) = 1 - p",
        expectations,
    )
}

fn free(rank: usize) -> CorpusEntry {
    let names: Vec<String> = (1..=rank).map(|i| format!("x{i}*")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let shape = if rank == 1 { "Z_p".to_string() } else { format!("Z_p^{rank}") };
    entry(
        &format!("free_{rank}"),
        &format!("free_{rank}.pres"),
        "free pro-p groups are Kummerian for every orientation",
        vec![
            expect(Check::Kummer(KummerClass::Holds), elementary("no relators")),
            expect(Check::Torsion { definite: vec![], symbol_free_rank: rank, shape }, elementary("no relators")),
            expect(Check::Orientations(ClassSpec::Product(vec![None; rank])), elementary("no relators")),
            expect(Check::Ring { relations: all_vanish(&refs) }, elementary("H^2 = 0")),
            cup_two_fold(),
            inheritance(),
        ],
    )
}

fn cyclic(k: u32) -> CorpusEntry {
    let name = if k == 1 { "cyclic_p" } else { "cyclic_p2" };
    let shape = if k == 1 { "Z/p".to_string() } else { format!("Z/p^{k}") };
    entry(
        name,
        &format!("{name}.pres"),
        "nontrivial finite p-groups are not Kummerian for any orientation",
        vec![
            expect(
                Check::Kummer(KummerClass::FailsAt { level: k + 1 }),
                derived("the only row is p^k, so surjectivity fails modulo p^(k+1)"),
            ),
            expect(Check::Torsion { definite: vec![k], symbol_free_rank: 0, shape }, derived("the module is Z_p / p^k")),
            expect(Check::Orientations(ClassSpec::Empty), statement("no orientation makes a finite p-group Kummerian")),
        ],
    )
}

pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        amalgam(0, 2, 200),
        amalgam(2, 0, 200),
        amalgam(2, 2, 200),
        entry(
            "commutator_pair_2_2",
            "commutator_pair_2_2.pres",
            "relators [x, y_0][y_1, y_2] and [x, z_0][z_1, z_2]: Kummerian if, and only if, θ is constantly equal to 1",
            vec![
                expect(Check::Kummer(KummerClass::Holds), elementary("relators lie in the commutator subgroup and θ = 1")),
                expect(
                    Check::Torsion { definite: vec![], symbol_free_rank: 7, shape: "Z_p^7".to_string() },
                    elementary("relators have zero exponent sums"),
                ),
                expect(
                    Check::Orientations(ClassSpec::Product(vec![Some(1); 7])),
                    statement("Kummerian if, and only if, θ is constantly equal to 1"),
                ),
                expect(
                    Check::Ring { relations: amalgam_relations(2, 2) },
                    derived("degree-two Magnus coefficients of the relators"),
                ),
                cup_two_fold(),
                inheritance(),
            ],
        ),
        entry(
            "iterated_q0",
            "iterated_q0.pres",
            "x_1^q [[x_1, x_2], x_2][x_2, x_3]: Kummerian orientations exist only for q = 0 and θ(x_i) = 1 for i >= 2",
            vec![
                expect(Check::Kummer(KummerClass::Holds), elementary("relator lies in the commutator subgroup and θ = 1")),
                expect(
                    Check::Torsion { definite: vec![], symbol_free_rank: 3, shape: "Z_p^3".to_string() },
                    elementary("the relator has zero exponent sums"),
                ),
                expect(
                    Check::Orientations(ClassSpec::Product(vec![None, Some(1), Some(1)])),
                    statement("q = 0 and θ(x_i) = 1 for i >= 2"),
                ),
                expect(
                    Check::Ring { relations: vec!["x1*∪x2* = 0".to_string(), "x1*∪x3* = 0".to_string()] },
                    derived("only [x_2, x_3] contributes a degree-two Magnus coefficient"),
                ),
                cup_two_fold(),
                inheritance(),
                expect(
                    Check::Subgroup(SubgroupSpec { map: "x2:1".to_string(), target: "p".to_string(), generators: vec![] }),
                    derived("the kernel of x_2 -> 1 in Z/p has 3(3-1)+1 = 7 generators and 3 relators"),
                ),
            ],
        ),
        entry(
            "iterated_qp",
            "iterated_qp.pres",
            "x_1^q [[x_1, x_2], x_2][x_2, x_3] with q = p admits no Kummerian orientation",
            vec![
                expect(Check::Kummer(KummerClass::FailsAt { level: 2 }), derived("the x_1 entry of the row is p")),
                expect(
                    Check::Torsion { definite: vec![1], symbol_free_rank: 2, shape: "Z_p^2 ⊕ Z/p".to_string() },
                    derived("the only relation is p·x_1"),
                ),
                expect(Check::Orientations(ClassSpec::Empty), statement("q = 0 is necessary")),
            ],
        ),
        entry(
            "raag_qp",
            "raag_qp.pres",
            "x y_i x^-1 = y_i^(1+q): the only Kummerian orientation is θ(x) = 1 + q, θ(y_i) = 1",
            vec![
                expect(Check::Kummer(KummerClass::Holds), statement("the group with θ(x) = 1 + q is Kummerian")),
                expect(
                    Check::Torsion { definite: vec![], symbol_free_rank: 3, shape: "Z_p^2 ⋊ Im θ".to_string() },
                    derived("relator rows are (1 + q - θ(x))·y_i = 0"),
                ),
                expect(
                    Check::Orientations(ClassSpec::Product(vec![Some(4), Some(1), Some(1)])),
                    statement("θ(x) = 1 + q and θ(y_1) = θ(y_2) = 1"),
                ),
                expect(
                    Check::Ring { relations: vec!["φ1∪φ2 = 0".to_string()] },
                    derived("the relators pair χ with φ_1 and with φ_2"),
                ),
                cup_two_fold(),
                inheritance(),
            ],
        ),
        cyclic(1),
        cyclic(2),
        free(1),
        free(2),
        free(3),
        entry(
            "endgame",
            "endgame.pres",
            "the quotient <u, t | [u, t]> with θ(u) = (1-p)^p has the torsion element t^(p^2 λ)",
            vec![
                expect(
                    Check::Kummer(KummerClass::FailsAt { level: 3 }),
                    derived("the t entry is 1 - θ(u), of valuation 2"),
                ),
                expect(
                    Check::Torsion { definite: vec![2], symbol_free_rank: 1, shape: "Z/p^2 ⋊ Im θ".to_string() },
                    statement("t^(p^2 λ) lies in K, so t has order p^2 modulo K"),
                ),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_parses() {
        for (name, text) in FILES {
            kummerian::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn entries_have_unique_names() {
        let entries = corpus();
        let mut names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), entries.len());
    }

    #[test]
    fn amalgam_relation_count() {
        // 7 classes give 21 products; two are tied to χ∪φ0 and χ∪ψ0.
        let rels = amalgam_relations(2, 2);
        assert_eq!(rels.len(), 21 - 2);
        assert!(rels.contains(&"χ∪φ0 = φ1∪φ2".to_string()));
        assert!(rels.contains(&"φ0∪ψ0 = 0".to_string()));
    }
}
