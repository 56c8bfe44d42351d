//! Words in the generators of a free pro-p group.
//!
//! A [`Word`] is a sequence of atoms, each either a generator power or a
//! commutator of two subwords. Commutators follow `[a, b] = a^-1 b^-1 a b`.
//! Evaluation goes through the [`EvalTarget`] trait, so the same relator can
//! be read in the unit group, the cocycle monoid, a semidirect product, a
//! matrix group or the truncated Magnus algebra.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub type GenId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("no value assigned to generator #{0}")]
    MissingGenerator(GenId),
    #[error("power of a compound word would expand to {0} atoms")]
    TooLong(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Gen { gen: GenId, exp: i64 },
    Comm(Box<Word>, Box<Word>),
}

impl Atom {
    pub fn inverse(&self) -> Atom {
        match self {
            Atom::Gen { gen, exp } => Atom::Gen { gen: *gen, exp: -exp },
            Atom::Comm(a, b) => Atom::Comm(b.clone(), a.clone()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    atoms: Vec<Atom>,
}

/// Upper bound on atoms produced when a compound word is raised to a power.
const MAX_EXPANSION: u64 = 1 << 16;

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn gen(g: GenId) -> Word {
        Word::gen_pow(g, 1)
    }

    pub fn gen_pow(g: GenId, exp: i64) -> Word {
        Word::from_atoms(vec![Atom::Gen { gen: g, exp }])
    }

    pub fn commutator(a: Word, b: Word) -> Word {
        Word::from_atoms(vec![Atom::Comm(Box::new(a), Box::new(b))])
    }

    /// Builds a normalized word from raw atoms.
    pub fn from_atoms(atoms: Vec<Atom>) -> Word {
        Word { atoms }.normalize()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_identity(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Word::from_atoms(atoms)
    }

    pub fn inverse(&self) -> Word {
        Word {
            atoms: self.atoms.iter().rev().map(Atom::inverse).collect(),
        }
    }

    /// `w^e`. Single generator powers stay one atom; other words are repeated.
    pub fn pow(&self, e: i64) -> Result<Word, WordError> {
        if let [Atom::Gen { gen, exp }] = self.atoms.as_slice() {
            return Ok(Word::gen_pow(*gen, exp * e));
        }
        let total = self.atoms.len() as u64 * e.unsigned_abs();
        if total > MAX_EXPANSION {
            return Err(WordError::TooLong(total));
        }
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut atoms = Vec::with_capacity(total as usize);
        for _ in 0..e.unsigned_abs() {
            atoms.extend(base.atoms.iter().cloned());
        }
        Ok(Word::from_atoms(atoms))
    }

    /// Free reduction at the level of each atom sequence. Commutators with a
    /// trivial side are dropped; other commutators are kept as atoms.
    pub fn normalize(&self) -> Word {
        let mut out: Vec<Atom> = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            let atom = match atom {
                Atom::Gen { exp: 0, .. } => continue,
                Atom::Gen { .. } => atom.clone(),
                Atom::Comm(a, b) => {
                    let (a, b) = (a.normalize(), b.normalize());
                    if a.is_identity() || b.is_identity() {
                        continue;
                    }
                    Atom::Comm(Box::new(a), Box::new(b))
                }
            };
            match (out.last_mut(), &atom) {
                (Some(Atom::Gen { gen: g0, exp: e0 }), Atom::Gen { gen, exp }) if g0 == gen => {
                    *e0 += exp;
                    if *e0 == 0 {
                        out.pop();
                    }
                }
                (Some(last), Atom::Comm(..)) if *last == atom.inverse() => {
                    out.pop();
                }
                _ => out.push(atom),
            }
        }
        Word { atoms: out }
    }

    /// Commutator-free form via `[a,b] -> a^-1 b^-1 a b`, recursively.
    pub fn expand_commutators(&self) -> Word {
        let mut atoms = Vec::new();
        for atom in &self.atoms {
            match atom {
                Atom::Gen { .. } => atoms.push(atom.clone()),
                Atom::Comm(a, b) => {
                    let (a, b) = (a.expand_commutators(), b.expand_commutators());
                    atoms.extend(a.inverse().atoms);
                    atoms.extend(b.inverse().atoms);
                    atoms.extend(a.atoms);
                    atoms.extend(b.atoms);
                }
            }
        }
        Word::from_atoms(atoms)
    }

    /// Letters of the expanded word as `(generator, ±1)`.
    pub fn letters(&self) -> Vec<(GenId, i64)> {
        let mut out = Vec::new();
        for atom in self.expand_commutators().atoms {
            if let Atom::Gen { gen, exp } = atom {
                let s = exp.signum();
                out.extend(std::iter::repeat_n((gen, s), exp.unsigned_abs() as usize));
            }
        }
        out
    }

    pub fn generators(&self) -> BTreeSet<GenId> {
        let mut set = BTreeSet::new();
        self.collect_generators(&mut set);
        set
    }

    fn collect_generators(&self, set: &mut BTreeSet<GenId>) {
        for atom in &self.atoms {
            match atom {
                Atom::Gen { gen, .. } => {
                    set.insert(*gen);
                }
                Atom::Comm(a, b) => {
                    a.collect_generators(set);
                    b.collect_generators(set);
                }
            }
        }
    }

    /// Renames generators; `None` sends a generator to the identity.
    pub fn substitute(&self, f: &impl Fn(GenId) -> Option<GenId>) -> Word {
        let atoms = self
            .atoms
            .iter()
            .filter_map(|atom| match atom {
                Atom::Gen { gen, exp } => f(*gen).map(|g| Atom::Gen { gen: g, exp: *exp }),
                Atom::Comm(a, b) => Some(Atom::Comm(Box::new(a.substitute(f)), Box::new(b.substitute(f)))),
            })
            .collect();
        Word::from_atoms(atoms)
    }

    /// Exponent sum of every generator (commutators contribute nothing).
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut sums = vec![0i64; ngens];
        for atom in &self.atoms {
            if let Atom::Gen { gen, exp } = atom {
                if *gen < ngens {
                    sums[*gen] += exp;
                }
            }
        }
        sums
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (i, atom) in self.word.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            match atom {
                Atom::Gen { gen, exp } => {
                    let name = self.names.get(*gen).map(String::as_str).unwrap_or("?");
                    if *exp == 1 {
                        write!(f, "{name}")?;
                    } else {
                        write!(f, "{name}^{exp}")?;
                    }
                }
                Atom::Comm(a, b) => write!(f, "[{}, {}]", a.display(self.names), b.display(self.names))?,
            }
        }
        Ok(())
    }
}

/// A group (or monoid with inverses) that words can be evaluated in.
pub trait EvalTarget {
    type Elem: Clone;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            n >>= 1;
            if n > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let left = self.mul(&self.inv(a), &self.inv(b));
        self.mul(&left, &self.mul(a, b))
    }
}

/// Image of `w` under the homomorphism sending generator `i` to `assignment[i]`.
pub fn evaluate<T: EvalTarget>(w: &Word, assignment: &[T::Elem], target: &T) -> Result<T::Elem, WordError> {
    let mut acc = target.identity();
    for atom in &w.atoms {
        let x = match atom {
            Atom::Gen { gen, exp } => {
                let base = assignment.get(*gen).ok_or(WordError::MissingGenerator(*gen))?;
                target.pow(base, *exp)
            }
            Atom::Comm(a, b) => {
                let a = evaluate(a, assignment, target)?;
                let b = evaluate(b, assignment, target)?;
                target.commutator(&a, &b)
            }
        };
        acc = target.mul(&acc, &x);
    }
    Ok(acc)
}

/// Degree ≤ 2 part of the Magnus expansion `x_i -> 1 + X_i` over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Magnus2 {
    pub linear: Vec<u64>,
    /// Row-major `ngens × ngens`; entry `(i, j)` is the coefficient of `X_i X_j`.
    pub quad: Vec<u64>,
}

impl Magnus2 {
    pub fn quad_at(&self, i: usize, j: usize) -> u64 {
        self.quad[i * self.linear.len() + j]
    }
}

/// The truncated Magnus algebra as an evaluation target.
pub struct MagnusTarget {
    pub prime: u64,
    pub ngens: usize,
}

impl MagnusTarget {
    pub fn generator(&self, g: GenId) -> Magnus2 {
        let mut m = self.identity();
        m.linear[g] = 1;
        m
    }
}

impl EvalTarget for MagnusTarget {
    type Elem = Magnus2;

    fn identity(&self) -> Magnus2 {
        Magnus2 {
            linear: vec![0; self.ngens],
            quad: vec![0; self.ngens * self.ngens],
        }
    }

    fn mul(&self, a: &Magnus2, b: &Magnus2) -> Magnus2 {
        let p = self.prime;
        let n = self.ngens;
        let linear = a.linear.iter().zip(&b.linear).map(|(x, y)| (x + y) % p).collect();
        let mut quad = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                quad.push((a.quad[k] + b.quad[k] + a.linear[i] * b.linear[j]) % p);
            }
        }
        Magnus2 { linear, quad }
    }

    fn inv(&self, a: &Magnus2) -> Magnus2 {
        // (1 + L + Q)^-1 = 1 - L - Q + L·L
        let p = self.prime;
        let n = self.ngens;
        let linear = a.linear.iter().map(|x| (p - x) % p).collect();
        let mut quad = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                quad.push((p - a.quad[i * n + j] + a.linear[i] * a.linear[j]) % p);
            }
        }
        Magnus2 { linear, quad }
    }
}

/// Linear and quadratic Magnus coefficients of `w` modulo `p`.
pub fn magnus2(w: &Word, prime: u64, ngens: usize) -> Result<Magnus2, WordError> {
    let target = MagnusTarget { prime, ngens };
    let gens: Vec<Magnus2> = (0..ngens).map(|g| target.generator(g)).collect();
    evaluate(w, &gens, &target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Word {
        Word::gen(0)
    }
    fn y() -> Word {
        Word::gen(1)
    }

    #[test]
    fn free_reduction() {
        assert!(x().mul(&x().inverse()).is_identity());
        assert_eq!(Word::gen_pow(0, 2).mul(&Word::gen_pow(0, 3)), Word::gen_pow(0, 5));
        let c = Word::commutator(x(), y());
        assert_eq!(c.normalize(), c);
        assert_eq!(c.atoms().len(), 1);
        assert!(c.mul(&c.inverse()).is_identity());
        assert!(Word::commutator(x(), Word::identity()).is_identity());
    }

    #[test]
    fn commutator_expansion() {
        let c = Word::commutator(x(), y()).expand_commutators();
        assert_eq!(c.letters(), vec![(0, -1), (1, -1), (0, 1), (1, 1)]);
        assert!(Word::commutator(x(), x()).expand_commutators().is_identity());
    }

    #[test]
    fn magnus_of_commutator_and_powers() {
        let m = magnus2(&Word::commutator(x(), y()), 5, 2).unwrap();
        assert_eq!(m.linear, vec![0, 0]);
        assert_eq!((m.quad_at(0, 1), m.quad_at(1, 0)), (1, 4));
        assert_eq!((m.quad_at(0, 0), m.quad_at(1, 1)), (0, 0));
        let m = magnus2(&Word::gen_pow(0, 7), 7, 2).unwrap();
        assert!(m.linear.iter().chain(&m.quad).all(|&c| c == 0));
        let m = magnus2(&Word::identity(), 3, 3).unwrap();
        assert!(m.linear.iter().chain(&m.quad).all(|&c| c == 0));
    }

    #[test]
    fn missing_generator() {
        let t = MagnusTarget { prime: 3, ngens: 1 };
        let err = evaluate(&y(), &[t.generator(0)], &t).unwrap_err();
        assert_eq!(err, WordError::MissingGenerator(1));
    }

    #[test]
    fn compound_powers() {
        let xy = x().mul(&y());
        assert_eq!(xy.pow(2).unwrap().letters(), vec![(0, 1), (1, 1), (0, 1), (1, 1)]);
        assert_eq!(xy.pow(-1).unwrap(), xy.inverse());
        assert!(matches!(xy.pow(1 << 20), Err(WordError::TooLong(_))));
    }
}
