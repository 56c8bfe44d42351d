//! Finite pro-p presentations and orientations.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::padic::{is_odd_prime, Padic, PadicError, UnitOneP};
use crate::words::{evaluate, magnus2, EvalTarget, GenId, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    BadName(String),
    #[error("relator {relator} mentions generator #{gen}, but only {ngens} are declared")]
    UnknownGenerator { relator: usize, gen: GenId, ngens: usize },
    #[error("orientation has {got} values for {expected} generators")]
    OrientationLength { expected: usize, got: usize },
    #[error("orientation value {0} has the wrong prime or precision")]
    OrientationMismatch(Padic),
    #[error("cannot kill generator #{0}: out of range")]
    KillOutOfRange(GenId),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Generators are `0..ngens`, named for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    prime: u64,
    generators: Vec<String>,
    relators: Vec<Word>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "p"
}

impl Presentation {
    pub fn new(prime: u64, generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if !is_odd_prime(prime) {
            return Err(PresentationError::BadPrime(prime));
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if !valid_name(g) {
                return Err(PresentationError::BadName(g.clone()));
            }
            if !seen.insert(g.as_str()) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        let ngens = generators.len();
        for (i, r) in relators.iter().enumerate() {
            if let Some(&gen) = r.generators().iter().find(|&&g| g >= ngens) {
                return Err(PresentationError::UnknownGenerator { relator: i, gen, ngens });
            }
        }
        let relators = relators.into_iter().map(|r| r.normalize()).collect();
        Ok(Presentation { prime, generators, relators })
    }

    pub fn free(prime: u64, generators: Vec<String>) -> Result<Self, PresentationError> {
        Self::new(prime, generators, Vec::new())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn gen_index(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g == name)
    }

    /// Relators that are not in `Φ(F) = F^p [F, F]`, i.e. whose exponent
    /// sums are not all divisible by `p`. Empty iff the presentation is minimal.
    pub fn non_minimal_relators(&self) -> Vec<usize> {
        let p = self.prime as i64;
        self.relators
            .iter()
            .enumerate()
            .filter(|(_, r)| r.exponent_sums(self.ngens()).iter().any(|e| e.rem_euclid(p) != 0))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_minimal(&self) -> bool {
        self.non_minimal_relators().is_empty()
    }

    /// Checks through the degree-two Magnus expansion instead of exponent
    /// sums; both describe membership in the Frattini subgroup.
    pub fn is_minimal_magnus(&self) -> Result<bool, WordError> {
        for r in &self.relators {
            if magnus2(r, self.prime, self.ngens())?.linear.iter().any(|&c| c != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Removes the listed generators and every occurrence of them, renumbering
    /// the rest in order. Relators that become trivial are dropped.
    pub fn kill_generators(&self, kill: &[GenId]) -> Result<(Presentation, Vec<Option<GenId>>), PresentationError> {
        if let Some(&g) = kill.iter().find(|&&g| g >= self.ngens()) {
            return Err(PresentationError::KillOutOfRange(g));
        }
        let mut map = Vec::with_capacity(self.ngens());
        let mut names = Vec::new();
        for (g, name) in self.generators.iter().enumerate() {
            if kill.contains(&g) {
                map.push(None);
            } else {
                map.push(Some(names.len()));
                names.push(name.clone());
            }
        }
        let relators = self
            .relators
            .iter()
            .map(|r| r.substitute(&|g| map[g]))
            .filter(|r| !r.is_identity())
            .collect();
        Ok((Presentation::new(self.prime, names, relators)?, map))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.generators.join(", "))?;
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display(&self.generators).to_string())
            .collect();
        write!(f, "{} >", rels.join(", "))
    }
}

/// Values `θ(x_i) ∈ 1 + pZ_p`, all at one precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orientation {
    prime: u64,
    precision: u32,
    values: Vec<UnitOneP>,
}

impl Orientation {
    pub fn new(prime: u64, precision: u32, values: Vec<UnitOneP>) -> Result<Self, PresentationError> {
        if !is_odd_prime(prime) {
            return Err(PresentationError::BadPrime(prime));
        }
        UnitOneP::one(prime, precision)?;
        for v in &values {
            if v.prime() != prime || v.prec() != precision {
                return Err(PresentationError::OrientationMismatch(*v.as_padic()));
            }
        }
        Ok(Orientation { prime, precision, values })
    }

    /// Builds from integer representatives, each required to be `≡ 1 (mod p)`.
    pub fn from_ints(prime: u64, precision: u32, values: &[i128]) -> Result<Self, PresentationError> {
        let values = values
            .iter()
            .map(|&v| UnitOneP::new(Padic::new(prime, v, precision)?))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(prime, precision, values)
    }

    pub fn trivial(prime: u64, ngens: usize, precision: u32) -> Result<Self, PresentationError> {
        let one = UnitOneP::one(prime, precision)?;
        Self::new(prime, precision, vec![one; ngens])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[UnitOneP] {
        &self.values
    }

    pub fn value(&self, g: GenId) -> &UnitOneP {
        &self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    pub fn reduce(&self, precision: u32) -> Orientation {
        let precision = precision.min(self.precision);
        Orientation {
            prime: self.prime,
            precision,
            values: self.values.iter().map(|v| v.reduce(precision)).collect(),
        }
    }

    /// `θ` of an arbitrary word.
    pub fn eval(&self, w: &Word) -> Result<UnitOneP, WordError> {
        evaluate(w, &self.values, &UnitsTarget { prime: self.prime, precision: self.precision })
    }
}

/// The multiplicative group `1 + pZ_p` at a fixed precision.
#[derive(Debug, Clone, Copy)]
pub struct UnitsTarget {
    pub prime: u64,
    pub precision: u32,
}

impl EvalTarget for UnitsTarget {
    type Elem = UnitOneP;

    fn identity(&self) -> UnitOneP {
        UnitOneP::one(self.prime, self.precision).expect("precision validated by the orientation")
    }

    fn mul(&self, a: &UnitOneP, b: &UnitOneP) -> UnitOneP {
        a.mul(b).expect("operands share the prime")
    }

    fn inv(&self, a: &UnitOneP) -> UnitOneP {
        a.inv()
    }

    fn pow(&self, a: &UnitOneP, e: i64) -> UnitOneP {
        a.pow_int(e)
    }

    fn commutator(&self, _a: &UnitOneP, _b: &UnitOneP) -> UnitOneP {
        self.identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatorIssue {
    pub relator: usize,
    /// `θ(r)` at the orientation precision; should be `1`.
    pub value: String,
    /// Largest `k` with `θ(r) ≡ 1 (mod p^k)`.
    pub agrees_to: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub minimal: bool,
    pub non_minimal_relators: Vec<usize>,
    pub relator_issues: Vec<RelatorIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.relator_issues.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedPresentation {
    presentation: Presentation,
    orientation: Orientation,
}

impl OrientedPresentation {
    /// Pairs a presentation with an orientation. Whether the orientation
    /// kills every relator is checked separately by [`Self::validate`].
    pub fn new(presentation: Presentation, orientation: Orientation) -> Result<Self, PresentationError> {
        if orientation.len() != presentation.ngens() {
            return Err(PresentationError::OrientationLength {
                expected: presentation.ngens(),
                got: orientation.len(),
            });
        }
        if orientation.prime() != presentation.prime() {
            return Err(PresentationError::BadPrime(orientation.prime()));
        }
        Ok(OrientedPresentation { presentation, orientation })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn prime(&self) -> u64 {
        self.presentation.prime
    }

    pub fn ngens(&self) -> usize {
        self.presentation.ngens()
    }

    pub fn precision(&self) -> u32 {
        self.orientation.precision
    }

    pub fn with_precision(&self, precision: u32) -> OrientedPresentation {
        OrientedPresentation {
            presentation: self.presentation.clone(),
            orientation: self.orientation.reduce(precision),
        }
    }

    pub fn validate(&self) -> Result<ValidationReport, WordError> {
        let mut relator_issues = Vec::new();
        for (i, r) in self.presentation.relators.iter().enumerate() {
            let v = self.orientation.eval(r)?;
            if !v.is_one() {
                relator_issues.push(RelatorIssue {
                    relator: i,
                    value: v.to_string(),
                    agrees_to: v.depth().bound(),
                });
            }
        }
        let non_minimal_relators = self.presentation.non_minimal_relators();
        Ok(ValidationReport {
            minimal: non_minimal_relators.is_empty(),
            non_minimal_relators,
            relator_issues,
        })
    }

    /// The quotient by the normal closure of the listed generators, which
    /// must all have trivial orientation.
    pub fn quotient_by_generators(&self, kill: &[GenId]) -> Result<OrientedPresentation, PresentationError> {
        if let Some(&g) = kill.iter().find(|&&g| g < self.ngens() && !self.orientation.value(g).is_one()) {
            return Err(PresentationError::OrientationMismatch(*self.orientation.value(g).as_padic()));
        }
        let (pres, map) = self.presentation.kill_generators(kill)?;
        let values = map
            .iter()
            .zip(&self.orientation.values)
            .filter(|(m, _)| m.is_some())
            .map(|(_, v)| *v)
            .collect();
        let orientation = Orientation::new(self.prime(), self.precision(), values)?;
        OrientedPresentation::new(pres, orientation)
    }
}

impl fmt::Display for OrientedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.presentation)?;
        for (name, v) in self.presentation.generators.iter().zip(&self.orientation.values) {
            if !v.is_one() {
                write!(f, ", θ({name}) = {v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Presentation::new(2, names(&["x"]), vec![]),
            Err(PresentationError::BadPrime(2))
        ));
        assert!(matches!(
            Presentation::new(3, names(&["x", "x"]), vec![]),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            Presentation::new(3, names(&["p"]), vec![]),
            Err(PresentationError::BadName(_))
        ));
        assert!(matches!(
            Presentation::new(3, names(&["x"]), vec![Word::gen(1)]),
            Err(PresentationError::UnknownGenerator { .. })
        ));
    }

    #[test]
    fn minimality() {
        let pres = Presentation::new(
            3,
            names(&["x", "y"]),
            vec![Word::gen_pow(0, 3).mul(&Word::commutator(Word::gen(0), Word::gen(1)))],
        )
        .unwrap();
        assert!(pres.is_minimal());
        assert!(pres.is_minimal_magnus().unwrap());
        let pres = Presentation::new(3, names(&["x", "y"]), vec![Word::gen(0)]).unwrap();
        assert_eq!(pres.non_minimal_relators(), vec![0]);
        assert!(!pres.is_minimal_magnus().unwrap());
    }

    #[test]
    fn validation_detects_wrong_orientation() {
        // <x, y | x y x^-1 y^-4> forces θ(y)^3 = 1, so θ(y) = 1.
        let r = Word::gen(0)
            .mul(&Word::gen(1))
            .mul(&Word::gen_pow(0, -1))
            .mul(&Word::gen_pow(1, -4));
        let pres = Presentation::new(3, names(&["x", "y"]), vec![r]).unwrap();
        let good = Orientation::from_ints(3, 4, &[4, 1]).unwrap();
        let op = OrientedPresentation::new(pres.clone(), good).unwrap();
        assert!(op.validate().unwrap().is_valid());
        let bad = Orientation::from_ints(3, 4, &[1, 4]).unwrap();
        let op = OrientedPresentation::new(pres, bad).unwrap();
        let report = op.validate().unwrap();
        assert!(!report.is_valid());
        assert_eq!(report.relator_issues[0].agrees_to, 2);
        assert!(report.minimal);
    }

    #[test]
    fn quotient_drops_generators() {
        let r = Word::commutator(Word::gen(0), Word::gen(1)).mul(&Word::gen_pow(2, 9));
        let pres = Presentation::new(3, names(&["x", "y", "z"]), vec![r]).unwrap();
        let op = OrientedPresentation::new(pres, Orientation::from_ints(3, 3, &[4, 1, 1]).unwrap()).unwrap();
        let q = op.quotient_by_generators(&[1]).unwrap();
        assert_eq!(q.presentation().generators(), &names(&["x", "z"])[..]);
        assert_eq!(q.presentation().relators(), &[Word::gen_pow(1, 9)]);
        assert!(op.quotient_by_generators(&[0]).is_err());
    }
}
