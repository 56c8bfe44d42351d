//! n-fold Massey products in `H^•(G, Z/p)` through unipotent representations.
//!
//! A homomorphism `ρ : G -> U_{n+1}(F_p)` modulo the corner entry, with
//! `ρ_{h,h+1} = α_h`, exists iff `⟨α_1, ..., α_n⟩` is defined. Lifting `ρ`
//! to the free group, each relator lands in `I + a_r E_{1,n+1}`, and the
//! class with coordinates `a_r` lies in the product. It vanishes iff some
//! choice sends every relator to `I`.
//!
//! For a minimal presentation the entries of a relator image at distance `k`
//! from the diagonal are affine in the generator entries at distance `k - 1`
//! once smaller distances are fixed: entries at distance `k` itself enter
//! with the exponent sum as coefficient, which vanishes mod `p`. The solver
//! fixes one distance at a time and backtracks depth first.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cohomology::{cup, H1Elem, QuadraticRing};
use crate::fp;
use crate::presentations::Presentation;
use crate::words::{evaluate, EvalTarget, WordError};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MasseyError {
    #[error("relator {0} is not in the Frattini subgroup; the presentation is not minimal")]
    NotMinimal(usize),
    #[error("Massey products need at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("class {index} has {got} coordinates, expected {expected}")]
    Dimension { index: usize, expected: usize, got: usize },
    #[error("target has {got} coordinates, expected one per relator ({expected})")]
    TargetLength { expected: usize, got: usize },
    #[error("representation has {got} matrices for {expected} generators")]
    RepLength { expected: usize, got: usize },
    #[error("matrix for generator {gen} has size {got}, expected {expected}")]
    MatrixSize { gen: usize, expected: usize, got: usize },
    #[error("matrix for generator {0} is not unipotent upper triangular")]
    NotUnipotent(usize),
    #[error("relator {0} does not land in I + F_p E_(1,n+1)")]
    NotDefined(usize),
    #[error("α ∪ α' = {0:?} is nonzero")]
    CupNonzero(Vec<u64>),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Unipotent upper triangular matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniTri {
    size: usize,
    prime: u64,
    entries: Vec<u64>,
}

impl UniTri {
    pub fn identity(size: usize, prime: u64) -> Self {
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        UniTri { size, prime, entries }
    }

    /// Checks shape; entries are reduced mod `p`.
    pub fn from_rows(rows: &[Vec<u64>], prime: u64) -> Option<Self> {
        let size = rows.len();
        let mut m = UniTri::identity(size, prime);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return None;
            }
            for (j, &x) in row.iter().enumerate() {
                let x = x % prime;
                let ok = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => x == 1,
                    std::cmp::Ordering::Greater => x == 0,
                    std::cmp::Ordering::Less => true,
                };
                if !ok {
                    return None;
                }
                m.entries[i * size + j] = x;
            }
        }
        Some(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < j);
        self.entries[i * self.size + j] = v % self.prime;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == UniTri::identity(self.size, self.prime)
    }

    /// Whether `self = I + a E_{1,n+1}` for some `a`.
    pub fn is_corner_only(&self) -> bool {
        let s = self.size;
        (0..s).all(|i| ((i + 1)..s).all(|j| (i == 0 && j == s - 1) || self.get(i, j) == 0))
    }

    pub fn corner(&self) -> u64 {
        self.get(0, self.size - 1)
    }

    pub fn mul(&self, other: &UniTri) -> UniTri {
        let s = self.size;
        let p = self.prime;
        let mut out = UniTri::identity(s, p);
        for i in 0..s {
            for j in (i + 1)..s {
                let mut acc = 0u64;
                for k in i..=j {
                    acc += self.get(i, k) * other.get(k, j) % p;
                }
                out.entries[i * s + j] = acc % p;
            }
        }
        out
    }

    /// Back substitution on `self · X = I`.
    pub fn inv(&self) -> UniTri {
        let s = self.size;
        let p = self.prime;
        let mut out = UniTri::identity(s, p);
        for j in 0..s {
            for i in (0..j).rev() {
                let mut acc = 0u64;
                for k in (i + 1)..=j {
                    acc += self.get(i, k) * out.get(k, j) % p;
                }
                out.entries[i * s + j] = (p - acc % p) % p;
            }
        }
        out
    }
}

impl Serialize for UniTri {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl fmt::Display for UniTri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UniTriTarget {
    pub prime: u64,
    pub size: usize,
}

impl EvalTarget for UniTriTarget {
    type Elem = UniTri;

    fn identity(&self) -> UniTri {
        UniTri::identity(self.size, self.prime)
    }

    fn mul(&self, a: &UniTri, b: &UniTri) -> UniTri {
        a.mul(b)
    }

    fn inv(&self, a: &UniTri) -> UniTri {
        a.inv()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", content = "target", rename_all = "snake_case")]
pub enum Mode {
    Defined,
    Vanish,
    /// Relator corner entries prescribed, one per relator.
    Target(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasseyProblem {
    pub alphas: Vec<H1Elem>,
    pub mode: Mode,
}

fn check_problem(pres: &Presentation, problem: &MasseyProblem) -> Result<(), MasseyError> {
    if let Some(&r) = pres.non_minimal_relators().first() {
        return Err(MasseyError::NotMinimal(r));
    }
    if problem.alphas.len() < 2 {
        return Err(MasseyError::TooFewClasses(problem.alphas.len()));
    }
    for (index, a) in problem.alphas.iter().enumerate() {
        if a.0.len() != pres.ngens() {
            return Err(MasseyError::Dimension { index, expected: pres.ngens(), got: a.0.len() });
        }
    }
    if let Mode::Target(b) = &problem.mode {
        if b.len() != pres.relators().len() {
            return Err(MasseyError::TargetLength { expected: pres.relators().len(), got: b.len() });
        }
    }
    Ok(())
}

fn relator_images(pres: &Presentation, rep: &[UniTri]) -> Result<Vec<UniTri>, WordError> {
    let size = rep.first().map_or(1, |m| m.size);
    let target = UniTriTarget { prime: pres.prime(), size };
    pres.relators().iter().map(|r| evaluate(r, rep, &target)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub images: Vec<UniTri>,
    pub superdiagonal_ok: bool,
    pub defined: bool,
    pub vanishes: bool,
    pub value: Option<Vec<u64>>,
    /// The witness proves what the mode asks for.
    pub satisfies_mode: bool,
}

fn check_rep(pres: &Presentation, rep: &[UniTri], size: usize) -> Result<(), MasseyError> {
    if rep.len() != pres.ngens() {
        return Err(MasseyError::RepLength { expected: pres.ngens(), got: rep.len() });
    }
    for (gen, m) in rep.iter().enumerate() {
        if m.size != size {
            return Err(MasseyError::MatrixSize { gen, expected: size, got: m.size });
        }
        if m.prime != pres.prime() {
            return Err(MasseyError::NotUnipotent(gen));
        }
    }
    Ok(())
}

pub fn verify_witness(pres: &Presentation, rep: &[UniTri], problem: &MasseyProblem) -> Result<WitnessCheck, MasseyError> {
    check_problem(pres, problem)?;
    let n = problem.alphas.len();
    check_rep(pres, rep, n + 1)?;
    let superdiagonal_ok = rep
        .iter()
        .enumerate()
        .all(|(g, m)| problem.alphas.iter().enumerate().all(|(h, a)| m.get(h, h + 1) == a.0[g]));
    let images = relator_images(pres, rep)?;
    let defined = images.iter().all(|m| m.is_corner_only());
    let vanishes = images.iter().all(|m| m.is_identity());
    let value = defined.then(|| images.iter().map(|m| m.corner()).collect::<Vec<_>>());
    let satisfies_mode = superdiagonal_ok
        && match &problem.mode {
            Mode::Defined => defined,
            Mode::Vanish => vanishes,
            Mode::Target(b) => value.as_ref() == Some(b),
        };
    Ok(WitnessCheck { images, superdiagonal_ok, defined, vanishes, value, satisfies_mode })
}

/// The corner entries of the relator images, one per relator dual.
pub fn massey_value(pres: &Presentation, rep: &[UniTri]) -> Result<Vec<u64>, MasseyError> {
    let size = rep.first().map_or(1, |m| m.size);
    check_rep(pres, rep, size)?;
    let images = relator_images(pres, rep)?;
    images
        .iter()
        .enumerate()
        .map(|(r, m)| if m.is_corner_only() { Ok(m.corner()) } else { Err(MasseyError::NotDefined(r)) })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasseyOutcome {
    pub mode: Mode,
    pub defined: Status,
    pub vanishes: Status,
    /// Relator corner entries of the witness when one was found.
    pub value: Option<Vec<u64>>,
    pub witness: Option<Vec<UniTri>>,
    /// Layer systems solved.
    pub solves: u64,
}

enum Search {
    Found(Vec<UniTri>),
    Exhausted,
    OutOfBudget,
}

struct Solver<'a> {
    pres: &'a Presentation,
    n: usize,
    prime: u64,
    mode: &'a Mode,
    budget: u64,
    solves: u64,
}

impl Solver<'_> {
    /// Constraints at distance `k`: `(relator, row, required value)`.
    fn constraints(&self, k: usize) -> Vec<(usize, usize, u64)> {
        let size = self.n + 1;
        let mut out = Vec::new();
        for r in 0..self.pres.relators().len() {
            for i in 0..(size - k) {
                let required = if k < self.n {
                    Some(0)
                } else {
                    match self.mode {
                        Mode::Defined => None,
                        Mode::Vanish => Some(0),
                        Mode::Target(b) => Some(b[r]),
                    }
                };
                if let Some(v) = required {
                    out.push((r, i, v));
                }
            }
        }
        out
    }

    fn dfs(&mut self, k: usize, rep: &mut Vec<UniTri>) -> Result<Search, WordError> {
        if k > self.n {
            return Ok(Search::Found(rep.clone()));
        }
        if self.solves >= self.budget {
            return Ok(Search::OutOfBudget);
        }
        self.solves += 1;
        let p = self.prime;
        let size = self.n + 1;
        let cons = self.constraints(k);
        // Unknowns at distance k - 1, ordered by (generator, row).
        let unknowns: Vec<(usize, usize)> = if k >= 3 {
            (0..rep.len()).flat_map(|g| (0..(size - (k - 1))).map(move |i| (g, i))).collect()
        } else {
            Vec::new()
        };
        for &(g, i) in &unknowns {
            rep[g].set(i, i + k - 1, 0);
        }
        let read = |images: &[UniTri]| -> Vec<u64> { cons.iter().map(|&(r, i, _)| images[r].get(i, i + k)).collect() };
        let base = read(&relator_images(self.pres, rep)?);
        let mut columns = Vec::with_capacity(unknowns.len());
        for &(g, i) in &unknowns {
            rep[g].set(i, i + k - 1, 1);
            let v = read(&relator_images(self.pres, rep)?);
            rep[g].set(i, i + k - 1, 0);
            columns.push(v.iter().zip(&base).map(|(a, b)| (a + p - b) % p).collect::<Vec<_>>());
        }
        let a: Vec<Vec<u64>> = (0..cons.len()).map(|row| columns.iter().map(|c| c[row]).collect()).collect();
        let rhs: Vec<u64> = cons.iter().zip(&base).map(|(&(_, _, t), b)| (t + p - b) % p).collect();
        let Some(sol) = fp::solve(&a, &rhs, unknowns.len(), p) else {
            return Ok(Search::Exhausted);
        };
        let mut coeffs = vec![0u64; sol.kernel.len()];
        loop {
            let x = sol.point(&coeffs, p);
            for (&(g, i), &v) in unknowns.iter().zip(&x) {
                rep[g].set(i, i + k - 1, v);
            }
            match self.dfs(k + 1, rep)? {
                Search::Exhausted => {}
                other => return Ok(other),
            }
            if !fp::next_point(&mut coeffs, p) {
                break;
            }
        }
        for &(g, i) in &unknowns {
            rep[g].set(i, i + k - 1, 0);
        }
        Ok(Search::Exhausted)
    }
}

fn superdiagonal_rep(pres: &Presentation, alphas: &[H1Elem]) -> Vec<UniTri> {
    let n = alphas.len();
    (0..pres.ngens())
        .map(|g| {
            let mut m = UniTri::identity(n + 1, pres.prime());
            for (h, a) in alphas.iter().enumerate() {
                m.set(h, h + 1, a.0[g]);
            }
            m
        })
        .collect()
}

fn search(pres: &Presentation, problem: &MasseyProblem, budget: u64) -> Result<(Search, u64), MasseyError> {
    let mut solver = Solver {
        pres,
        n: problem.alphas.len(),
        prime: pres.prime(),
        mode: &problem.mode,
        budget,
        solves: 0,
    };
    let mut rep = superdiagonal_rep(pres, &problem.alphas);
    let result = solver.dfs(2, &mut rep)?;
    Ok((result, solver.solves))
}

/// Layered depth-first search for a witness of `problem.mode`. In vanish
/// mode an exhausted search is followed by a defined-mode search so that
/// both statuses are reported.
pub fn solve(problem: &MasseyProblem, pres: &Presentation, budget: u64) -> Result<MasseyOutcome, MasseyError> {
    check_problem(pres, problem)?;
    let (result, mut solves) = search(pres, problem, budget)?;
    let mut outcome = MasseyOutcome {
        mode: problem.mode.clone(),
        defined: Status::Unknown,
        vanishes: Status::Unknown,
        value: None,
        witness: None,
        solves,
    };
    match result {
        Search::Found(rep) => {
            let check = verify_witness(pres, &rep, problem)?;
            assert!(check.satisfies_mode, "solver produced an invalid witness");
            outcome.defined = Status::Yes;
            outcome.value = check.value;
            if check.vanishes {
                outcome.vanishes = Status::Yes;
            }
            outcome.witness = Some(rep);
        }
        Search::Exhausted => match problem.mode {
            Mode::Defined => {
                outcome.defined = Status::No;
                outcome.vanishes = Status::No;
            }
            Mode::Vanish => {
                outcome.vanishes = Status::No;
                let defined = MasseyProblem { alphas: problem.alphas.clone(), mode: Mode::Defined };
                let (d, more) = search(pres, &defined, budget.saturating_sub(solves))?;
                solves += more;
                outcome.defined = match d {
                    Search::Found(rep) => {
                        outcome.value = Some(massey_value(pres, &rep)?);
                        outcome.witness = Some(rep);
                        Status::Yes
                    }
                    Search::Exhausted => Status::No,
                    Search::OutOfBudget => Status::Unknown,
                };
            }
            Mode::Target(_) => {}
        },
        Search::OutOfBudget => {}
    }
    if outcome.defined == Status::No {
        outcome.vanishes = Status::No;
    }
    outcome.solves = solves;
    Ok(outcome)
}

/// `{offset + span(basis)}` inside `H^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineSubspace {
    pub prime: u64,
    pub offset: Vec<u64>,
    pub basis: Vec<Vec<u64>>,
    #[serde(skip)]
    first: H1Elem,
    #[serde(skip)]
    last: H1Elem,
    #[serde(skip)]
    columns: Vec<Vec<u64>>,
}

impl AffineSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `(ξ, ξ')` with `v = offset + α_first ∪ ξ + α_last ∪ ξ'`, if any.
    pub fn certificate(&self, v: &[u64]) -> Option<(H1Elem, H1Elem)> {
        let p = self.prime;
        let d = self.first.0.len();
        let rows = self.offset.len();
        let a: Vec<Vec<u64>> = (0..rows).map(|r| self.columns.iter().map(|c| c[r]).collect()).collect();
        let rhs: Vec<u64> = v.iter().zip(&self.offset).map(|(x, o)| (x + p - o) % p).collect();
        let sol = fp::solve(&a, &rhs, 2 * d, p)?;
        let x = sol.particular;
        Some((H1Elem(x[..d].to_vec()), H1Elem(x[d..].to_vec())))
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.certificate(v).is_some()
    }
}

/// The classes `β + α_first ∪ ξ + α_last ∪ ξ'` for all `ξ, ξ' ∈ H^1`, all of
/// which lie in any Massey product containing `β` with outer classes
/// `α_first` and `α_last`.
pub fn indeterminacy_coset(ring: &QuadraticRing, beta: &[u64], first: &H1Elem, last: &H1Elem) -> AffineSubspace {
    let p = ring.prime;
    let d = ring.ngens();
    let columns: Vec<Vec<u64>> = (0..d)
        .map(|g| cup(ring, first, &H1Elem::basis(d, g)))
        .chain((0..d).map(|g| cup(ring, last, &H1Elem::basis(d, g))))
        .collect();
    let mut span = columns.clone();
    let pivots = fp::rref(&mut span, ring.nrelators(), p);
    span.truncate(pivots.len());
    AffineSubspace {
        prime: p,
        offset: beta.iter().map(|b| b % p).collect(),
        basis: span,
        first: first.clone(),
        last: last.clone(),
        columns,
    }
}

/// How a p-cyclic vanishing certificate was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum CyclicRoute {
    /// One of the classes is zero; the banded witness vanishes outright.
    ZeroClass,
    /// The banded witness already vanishes.
    Direct,
    /// The banded witness has value `β ≠ 0`, and `0` lies in its coset;
    /// the witness was corrected by `ξ` and `ξ'`.
    Coset { value: Vec<u64>, xi: H1Elem, xi_prime: H1Elem },
    /// Found by the layered solver.
    Search { solves: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicCertificate {
    pub route: CyclicRoute,
    /// A vanishing witness for `⟨α, ..., α, α'⟩` (`p` classes), if found.
    pub witness: Option<Vec<UniTri>>,
    pub vanishes: Status,
}

/// `I + a(E_12 + ... + E_{p-1,p}) + a' E_{p,p+1}` per generator.
pub fn banded_witness(pres: &Presentation, alpha: &H1Elem, alpha_prime: &H1Elem) -> Vec<UniTri> {
    let p = pres.prime() as usize;
    let mut alphas = vec![alpha.clone(); p - 1];
    alphas.push(alpha_prime.clone());
    superdiagonal_rep(pres, &alphas)
}

/// Certifies that the p-fold product `⟨α, ..., α, α'⟩` vanishes, given
/// `α ∪ α' = 0`.
pub fn cyclic_vanishing(
    pres: &Presentation,
    ring: &QuadraticRing,
    alpha: &H1Elem,
    alpha_prime: &H1Elem,
    budget: u64,
) -> Result<CyclicCertificate, MasseyError> {
    let p = pres.prime();
    let n = p as usize;
    let c = cup(ring, alpha, alpha_prime);
    if c.iter().any(|&x| x != 0) {
        return Err(MasseyError::CupNonzero(c));
    }
    let mut alphas = vec![alpha.clone(); n - 1];
    alphas.push(alpha_prime.clone());
    let vanish = MasseyProblem { alphas, mode: Mode::Vanish };
    check_problem(pres, &vanish)?;

    let mut rep = banded_witness(pres, alpha, alpha_prime);
    let images = relator_images(pres, &rep)?;
    if images.iter().all(|m| m.is_identity()) {
        let route = if alpha.is_zero() || alpha_prime.is_zero() { CyclicRoute::ZeroClass } else { CyclicRoute::Direct };
        return Ok(CyclicCertificate { route, witness: Some(rep), vanishes: Status::Yes });
    }
    if images.iter().all(|m| m.is_corner_only()) {
        let value: Vec<u64> = images.iter().map(|m| m.corner()).collect();
        let coset = indeterminacy_coset(ring, &value, alpha, alpha_prime);
        if let Some((xi, xi_prime)) = coset.certificate(&vec![0; value.len()]) {
            // Entries (2, n+1) shift the value by α ∪ ξ; entries (1, n) by
            // -(α' ∪ η), so η = -ξ'.
            for (g, m) in rep.iter_mut().enumerate() {
                m.set(1, n, xi.0[g]);
                m.set(0, n - 1, (p - xi_prime.0[g]) % p);
            }
            if verify_witness(pres, &rep, &vanish)?.satisfies_mode {
                return Ok(CyclicCertificate {
                    route: CyclicRoute::Coset { value, xi, xi_prime },
                    witness: Some(rep),
                    vanishes: Status::Yes,
                });
            }
        }
    }
    let outcome = solve(&vanish, pres, budget)?;
    let witness = if outcome.vanishes == Status::Yes { outcome.witness } else { None };
    Ok(CyclicCertificate {
        route: CyclicRoute::Search { solves: outcome.solves },
        witness,
        vanishes: outcome.vanishes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::build_ring;
    use crate::format::parse;

    fn pres(text: &str) -> Presentation {
        parse(text).unwrap().presentation().clone()
    }

    #[test]
    fn matrix_inverse() {
        let m = UniTri::from_rows(&[vec![1, 2, 1], vec![0, 1, 1], vec![0, 0, 1]], 3).unwrap();
        assert!(m.mul(&m.inv()).is_identity());
        assert!(m.inv().mul(&m).is_identity());
        assert!(UniTri::from_rows(&[vec![1, 0], vec![1, 1]], 3).is_none());
    }

    #[test]
    fn two_fold_is_cup() {
        let pr = pres("prime 3\ngenerators a b\nrelator [a, b]\n");
        let ring = build_ring(&pr).unwrap();
        let (a, b) = (H1Elem(vec![1, 2]), H1Elem(vec![2, 2]));
        let out = solve(&MasseyProblem { alphas: vec![a.clone(), b.clone()], mode: Mode::Defined }, &pr, 100).unwrap();
        assert_eq!(out.defined, Status::Yes);
        assert_eq!(out.value.unwrap(), cup(&ring, &a, &b));
    }

    #[test]
    fn free_groups_vanish() {
        let pr = pres("prime 5\ngenerators a b\n");
        let alphas = vec![H1Elem(vec![1, 3]); 5];
        let out = solve(&MasseyProblem { alphas, mode: Mode::Vanish }, &pr, 100).unwrap();
        assert_eq!(out.vanishes, Status::Yes);
    }

    #[test]
    fn triple_product_on_commutator_relator() {
        let pr = pres("prime 3\ngenerators x1 x2\nrelator [x1, x2]\n");
        let a = H1Elem::basis(2, 0);
        let problem = MasseyProblem { alphas: vec![a.clone(), a.clone(), a], mode: Mode::Vanish };
        let out = solve(&problem, &pr, 1000).unwrap();
        assert_eq!(out.defined, Status::Yes);
        assert_eq!(out.vanishes, Status::Yes);
        let check = verify_witness(&pr, out.witness.as_ref().unwrap(), &problem).unwrap();
        assert!(check.satisfies_mode);
    }

    #[test]
    fn undefined_triple_product() {
        let pr = pres("prime 3\ngenerators x1 x2\nrelator [x1, x2]\n");
        let (a, b) = (H1Elem::basis(2, 0), H1Elem::basis(2, 1));
        let problem = MasseyProblem { alphas: vec![a, b.clone(), b], mode: Mode::Defined };
        let out = solve(&problem, &pr, 1000).unwrap();
        assert_eq!(out.defined, Status::No);
        assert_eq!(out.vanishes, Status::No);
    }

    #[test]
    fn budget_is_reported() {
        let pr = pres("prime 3\ngenerators x1 x2\nrelator [x1, x2]\n");
        let a = H1Elem::basis(2, 0);
        let problem = MasseyProblem { alphas: vec![a.clone(), a.clone(), a], mode: Mode::Vanish };
        let out = solve(&problem, &pr, 1).unwrap();
        assert_eq!(out.vanishes, Status::Unknown);
    }

    #[test]
    fn power_relator_value() {
        // B_0^p has corner entry 1, so <φ0, ..., φ0> has value φ_{r1}.
        let text = "prime 3\ngenerators x y0 y1 y2\nrelator y0^p [y0, x^-1] [y1, y2]\n";
        let pr = pres(text);
        let phi0 = H1Elem::basis(4, 1);
        let rep = banded_witness(&pr, &phi0, &phi0);
        assert_eq!(massey_value(&pr, &rep).unwrap(), vec![1]);
        let ring = build_ring(&pr).unwrap();
        let cert = cyclic_vanishing(&pr, &ring, &phi0, &phi0, 1000).unwrap();
        assert!(matches!(cert.route, CyclicRoute::Coset { .. }));
        assert_eq!(cert.vanishes, Status::Yes);
    }
}
