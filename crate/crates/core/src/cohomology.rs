//! Quadratic part of `H^•(G, Z/p)` for a minimal presentation.
//!
//! `H^1` has the basis dual to the generators. Each relator `r` gives a
//! pairing `B_r`, the antisymmetric part of its degree-two Magnus
//! coefficients, normalized so that `[x_i, x_j]` pairs `χ_i ∪ χ_j` to `+1`.
//! The cup product `α ∪ β` has coordinate `αᵀ B_r β` at the dual `φ_r` of `r`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fp;
use crate::presentations::Presentation;
use crate::words::{magnus2, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("relator {0} is not in the Frattini subgroup; the presentation is not minimal")]
    NotMinimal(usize),
    #[error("class has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("cannot parse class `{text}`: {msg}")]
    Parse { text: String, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A class in `H^1(G, Z/p)`, in coordinates dual to the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct H1Elem(pub Vec<u64>);

impl H1Elem {
    pub fn zero(d: usize) -> Self {
        H1Elem(vec![0; d])
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        H1Elem(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &H1Elem, p: u64) -> H1Elem {
        H1Elem(self.0.iter().zip(&other.0).map(|(a, b)| (a + b) % p).collect())
    }

    pub fn scale(&self, s: u64, p: u64) -> H1Elem {
        H1Elem(self.0.iter().map(|a| a * s % p).collect())
    }

    /// Every class of `F_p^d`, in lexicographic order.
    pub fn all(d: usize, p: u64) -> Vec<H1Elem> {
        let mut out = Vec::new();
        let mut c = vec![0u64; d];
        loop {
            out.push(H1Elem(c.clone()));
            if !fp::next_point(&mut c, p) {
                return out;
            }
        }
    }

    /// Parses a combination of generator names such as `x + 2*y0 - y1`,
    /// meaning the corresponding dual classes.
    pub fn parse(text: &str, names: &[String], p: u64) -> Result<H1Elem, CohomologyError> {
        let err = |msg: &str| CohomologyError::Parse { text: text.to_string(), msg: msg.to_string() };
        let mut coords = vec![0u64; names.len()];
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(H1Elem(coords));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for c in compact.chars() {
            if (c == '+' || c == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(c);
        }
        if !cur.is_empty() {
            terms.push(cur);
        }
        if terms.is_empty() {
            return Err(err("empty class"));
        }
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, name) = match body.split_once('*') {
                Some((c, n)) => (c.parse::<u64>().map_err(|_| err("bad coefficient"))?, n),
                None => (1, body),
            };
            let g = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| err(&format!("unknown generator `{name}`")))?;
            let c = coef % p;
            coords[g] = (coords[g] + if neg { p - c } else { c }) % p;
        }
        Ok(H1Elem(coords))
    }

    pub fn display<'a>(&'a self, names: &'a [String], p: u64) -> impl fmt::Display + 'a {
        ClassDisplay { elem: self, names, p }
    }
}

struct ClassDisplay<'a> {
    elem: &'a H1Elem,
    names: &'a [String],
    p: u64,
}

impl fmt::Display for ClassDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, String)> = self
            .elem
            .0
            .iter()
            .zip(self.names)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, n)| (signed(c, self.p), dual_name(n)))
            .collect();
        write_combination(f, &terms)
    }
}

fn signed(c: u64, p: u64) -> i64 {
    if c > p / 2 {
        c as i64 - p as i64
    } else {
        c as i64
    }
}

fn write_combination(f: &mut fmt::Formatter<'_>, terms: &[(i64, String)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (c, name)) in terms.iter().enumerate() {
        let sign = if *c < 0 { "-" } else { "+" };
        if k == 0 {
            if *c < 0 {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        match c.unsigned_abs() {
            1 => write!(f, "{name}")?,
            a => write!(f, "{a}{name}")?,
        }
    }
    Ok(())
}

/// Name of the dual class: `x -> χ`, `y3 -> φ3`, `z0 -> ψ0`, otherwise `name*`.
pub fn dual_name(gen: &str) -> String {
    let indexed = |prefix: char, greek: &str| {
        gen.strip_prefix(prefix)
            .filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
            .map(|rest| format!("{greek}{rest}"))
    };
    if gen == "x" {
        return "χ".to_string();
    }
    indexed('y', "φ")
        .or_else(|| indexed('z', "ψ"))
        .unwrap_or_else(|| format!("{gen}*"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticRing {
    pub prime: u64,
    pub generators: Vec<String>,
    /// `pairings[r][i][j] = B_r(χ_i, χ_j)`.
    pub pairings: Vec<Vec<Vec<u64>>>,
    /// Whether the pairings are linearly independent, so that the relator
    /// duals are independent classes as far as cup products can tell.
    pub independent: bool,
}

impl QuadraticRing {
    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn nrelators(&self) -> usize {
        self.pairings.len()
    }

    /// Row of the map `Λ² H^1 -> F_p^r` for relator `r`, over pairs `i < j`.
    fn wedge_row(&self, r: usize) -> Vec<u64> {
        let d = self.ngens();
        let mut row = Vec::with_capacity(d * (d.saturating_sub(1)) / 2);
        for i in 0..d {
            for j in (i + 1)..d {
                row.push(self.pairings[r][i][j]);
            }
        }
        row
    }
}

pub fn build_ring(pres: &Presentation) -> Result<QuadraticRing, CohomologyError> {
    if let Some(&r) = pres.non_minimal_relators().first() {
        return Err(CohomologyError::NotMinimal(r));
    }
    let p = pres.prime();
    let d = pres.ngens();
    let half = fp::inv(2, p);
    let pairings = pres
        .relators()
        .par_iter()
        .map(|r| {
            let m = magnus2(r, p, d)?;
            Ok((0..d)
                .map(|i| (0..d).map(|j| (m.quad_at(i, j) + p - m.quad_at(j, i)) % p * half % p).collect())
                .collect())
        })
        .collect::<Result<Vec<Vec<Vec<u64>>>, CohomologyError>>()?;
    let mut ring = QuadraticRing {
        prime: p,
        generators: pres.generators().to_vec(),
        pairings,
        independent: true,
    };
    let rows: Vec<Vec<u64>> = (0..ring.nrelators()).map(|r| ring.wedge_row(r)).collect();
    let ncols = d * d.saturating_sub(1) / 2;
    ring.independent = fp::rank(&rows, ncols, p) == ring.nrelators();
    Ok(ring)
}

/// `α ∪ β` in coordinates over the relator duals.
pub fn cup(ring: &QuadraticRing, a: &H1Elem, b: &H1Elem) -> Vec<u64> {
    let p = ring.prime;
    ring.pairings
        .iter()
        .map(|m| {
            let mut s = 0u64;
            for (i, &ai) in a.0.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.0.iter().enumerate() {
                    s = (s + ai * bj % p * m[i][j]) % p;
                }
            }
            s
        })
        .collect()
}

/// A linear relation `Σ c_{ij} χ_i ∪ χ_j = 0` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CupRelation {
    pub terms: Vec<(usize, usize, u64)>,
}

impl CupRelation {
    pub fn display<'a>(&'a self, names: &'a [String], p: u64) -> impl fmt::Display + 'a {
        RelationDisplay { rel: self, names, p }
    }
}

struct RelationDisplay<'a> {
    rel: &'a CupRelation,
    names: &'a [String],
    p: u64,
}

impl fmt::Display for RelationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, String)> = self
            .rel
            .terms
            .iter()
            .map(|&(i, j, c)| {
                (signed(c, self.p), format!("{}∪{}", dual_name(&self.names[i]), dual_name(&self.names[j])))
            })
            .collect();
        write_combination(f, &terms)
    }
}

/// Whether `Σ c_{ij} χ_i ∪ χ_j` vanishes in `H^2`.
pub fn relation_holds(ring: &QuadraticRing, terms: &[(usize, usize, u64)]) -> bool {
    let p = ring.prime;
    ring.pairings.iter().all(|m| {
        terms
            .iter()
            .fold(0u64, |acc, &(i, j, c)| (acc + c % p * m[i][j]) % p)
            == 0
    })
}

/// A basis of the kernel of `Λ² H^1 -> H^2`, each relation scaled so its
/// first coefficient is `1`.
pub fn h2_relations(ring: &QuadraticRing) -> Vec<CupRelation> {
    let d = ring.ngens();
    let p = ring.prime;
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| ((i + 1)..d).map(move |j| (i, j))).collect();
    let rows: Vec<Vec<u64>> = (0..ring.nrelators()).map(|r| ring.wedge_row(r)).collect();
    fp::nullspace(&rows, pairs.len(), p)
        .into_iter()
        .map(|v| {
            let lead = v.iter().copied().find(|&c| c != 0).unwrap_or(1);
            let s = fp::inv(lead, p);
            CupRelation {
                terms: v
                    .iter()
                    .zip(&pairs)
                    .filter(|(c, _)| **c != 0)
                    .map(|(&c, &(i, j))| (i, j, c * s % p))
                    .collect(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    fn ring(text: &str) -> QuadraticRing {
        build_ring(parse(text).unwrap().presentation()).unwrap()
    }

    #[test]
    fn commutator_normalization() {
        let r = ring("prime 5\ngenerators x1 x2\nrelator [x1, x2]\n");
        assert_eq!(r.pairings[0], vec![vec![0, 1], vec![4, 0]]);
        assert!(r.independent);
        assert_eq!(cup(&r, &H1Elem::basis(2, 0), &H1Elem::basis(2, 1)), vec![1]);
    }

    #[test]
    fn powers_are_invisible() {
        let r = ring("prime 3\ngenerators x\nrelator x^p\n");
        assert_eq!(r.pairings[0], vec![vec![0]]);
        assert!(!r.independent);
    }

    #[test]
    fn rejects_non_minimal() {
        let pres = parse("prime 3\ngenerators x y\nrelator x y^3\n").unwrap();
        assert_eq!(build_ring(pres.presentation()), Err(CohomologyError::NotMinimal(0)));
    }

    #[test]
    fn relations_of_a_two_relator_group() {
        let text = "prime 3\nprecision 3\ngenerators x y0 y1 y2\nrelator y0^p [y0, x^-1] [y1, y2]\norientation x = 1-p\n";
        let r = ring(text);
        let names = &r.generators;
        let rels: Vec<String> = h2_relations(&r).iter().map(|c| c.display(names, 3).to_string()).collect();
        assert!(rels.contains(&"χ∪φ0 - φ1∪φ2".to_string()), "{rels:?}");
        assert!(rels.contains(&"χ∪φ1".to_string()));
        assert_eq!(rels.len(), 5);
    }

    #[test]
    fn class_parsing_and_display() {
        let names: Vec<String> = ["x", "y0", "w"].iter().map(|s| s.to_string()).collect();
        let c = H1Elem::parse("x - 2*y0 + w", &names, 5).unwrap();
        assert_eq!(c, H1Elem(vec![1, 3, 1]));
        assert_eq!(c.display(&names, 5).to_string(), "χ - 2φ0 + w*");
        assert!(H1Elem::parse("q", &names, 5).is_err());
        assert_eq!(H1Elem::parse("0", &names, 5).unwrap(), H1Elem::zero(3));
    }
}
