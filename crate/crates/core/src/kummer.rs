//! Kummerian test through the cocycle monoid.
//!
//! A 1-cocycle `c : G -> Z/p^N(1)` is determined by its values on
//! generators. Evaluating a relator in the monoid of pairs `(c, u)` with
//! `(c, u)(c', u') = (c + u c', u u')`, where each generator `x_i` is sent to
//! `(e_i, θ(x_i))`, gives an affine form whose coefficients are the Fox
//! derivatives of the relator twisted by `θ`. The map
//! `H^1(G, Z/p^n(1)) -> H^1(G, Z/p(1))` is onto for every `n ≤ N` exactly
//! when the coefficient matrix has no elementary divisor strictly between
//! `1` and `p^N`; for a minimal presentation that means every entry is
//! divisible by `p^N`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::padic::{Padic, PadicError, UnitOneP, Valuation};
use crate::presentations::{OrientedPresentation, Presentation, UnitsTarget};
use crate::words::{evaluate, EvalTarget, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KummerError {
    #[error("relator {0} is not killed by the orientation")]
    InvalidOrientation(usize),
    #[error("the pair fails the Kummer test at level {0}")]
    NotKummerian(u32),
    #[error("prescribed values violate relator {0}")]
    Inconsistent(usize),
    #[error("expected {expected} prescribed values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("orientation search needs precision at least 2, got {0}")]
    PrecisionTooLow(u32),
    #[error("search budget exhausted after {evaluated} candidates with {frontier} survivors at level {level}")]
    BudgetExceeded { evaluated: u64, frontier: usize, level: u32 },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `constant + Σ coeffs[i] · c_i` in the unknown generator values `c_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: Padic,
    pub coeffs: Vec<Padic>,
}

impl AffineForm {
    pub fn zero(prime: u64, prec: u32, n: usize) -> Self {
        let z = Padic::zero(prime, prec).expect("precision checked by the caller");
        AffineForm { constant: z, coeffs: vec![z; n] }
    }

    pub fn unit(prime: u64, prec: u32, n: usize, i: usize) -> Self {
        let mut f = Self::zero(prime, prec, n);
        f.coeffs[i] = Padic::one(prime, prec).expect("precision checked by the caller");
        f
    }

    pub fn add(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            constant: self.constant + other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn scale(&self, s: &Padic) -> AffineForm {
        AffineForm {
            constant: self.constant * *s,
            coeffs: self.coeffs.iter().map(|a| *a * *s).collect(),
        }
    }

    pub fn eval(&self, values: &[Padic]) -> Padic {
        self.coeffs.iter().zip(values).fold(self.constant, |acc, (a, v)| acc + *a * *v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocyclePair {
    pub form: AffineForm,
    pub twist: UnitOneP,
}

/// The cocycle monoid at a fixed precision.
#[derive(Debug, Clone, Copy)]
pub struct CocycleTarget {
    pub prime: u64,
    pub precision: u32,
    pub ngens: usize,
}

impl CocycleTarget {
    pub fn generators(&self, orientation: &[UnitOneP]) -> Vec<CocyclePair> {
        orientation
            .iter()
            .enumerate()
            .map(|(i, u)| CocyclePair {
                form: AffineForm::unit(self.prime, self.precision, self.ngens, i),
                twist: *u,
            })
            .collect()
    }
}

impl EvalTarget for CocycleTarget {
    type Elem = CocyclePair;

    fn identity(&self) -> CocyclePair {
        CocyclePair {
            form: AffineForm::zero(self.prime, self.precision, self.ngens),
            twist: UnitOneP::one(self.prime, self.precision).expect("precision checked by the caller"),
        }
    }

    fn mul(&self, a: &CocyclePair, b: &CocyclePair) -> CocyclePair {
        CocyclePair {
            form: a.form.add(&b.form.scale(a.twist.as_padic())),
            twist: a.twist.mul(&b.twist).expect("same prime"),
        }
    }

    fn inv(&self, a: &CocyclePair) -> CocyclePair {
        let t = a.twist.inv();
        CocyclePair {
            form: a.form.scale(&t.as_padic().neg()),
            twist: t,
        }
    }

    fn pow(&self, a: &CocyclePair, e: i64) -> CocyclePair {
        let m = Padic::new(self.prime, e as i128, self.precision).expect("precision checked by the caller");
        let q = a.twist.qint(&m).expect("same prime");
        CocyclePair {
            form: a.form.scale(&q),
            twist: a.twist.pow_int(e),
        }
    }
}

/// The affine form and twist of `w` under the cocycle monoid.
pub fn cocycle_image(op: &OrientedPresentation, w: &Word) -> Result<CocyclePair, WordError> {
    let target = CocycleTarget {
        prime: op.prime(),
        precision: op.precision(),
        ngens: op.ngens(),
    };
    evaluate(w, &target.generators(op.orientation().values()), &target)
}

/// Row `i` holds the coefficients of relator `i`: its Fox derivatives
/// evaluated at `θ`.
pub fn constraint_rows(op: &OrientedPresentation) -> Result<Vec<Vec<Padic>>, KummerError> {
    let mut rows = Vec::with_capacity(op.presentation().relators().len());
    for (i, r) in op.presentation().relators().iter().enumerate() {
        let img = cocycle_image(op, r)?;
        if !img.twist.is_one() {
            return Err(KummerError::InvalidOrientation(i));
        }
        rows.push(img.form.coeffs);
    }
    Ok(rows)
}

/// An entry of the (reduced) constraint matrix of minimal valuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub relator: usize,
    pub generator: usize,
    pub entry: Padic,
    pub valuation: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelResult {
    pub level: u32,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Overall {
    Fails { level: u32, witness: Witness },
    /// Surjective at every level up to the precision. This is evidence, not
    /// a proof, that the pair is Kummerian.
    HoldsUpToPrecision { precision: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KummerVerdict {
    pub precision: u32,
    pub minimal: bool,
    pub matrix: Vec<Vec<Padic>>,
    /// Rows and columns of `matrix` that survive elimination of unit
    /// pivots, with the remaining entries. Equal to `matrix` when minimal.
    pub residual: Residual,
    pub levels: Vec<LevelResult>,
    pub overall: Overall,
}

impl KummerVerdict {
    pub fn holds(&self) -> bool {
        matches!(self.overall, Overall::HoldsUpToPrecision { .. })
    }

    pub fn failing_level(&self) -> Option<u32> {
        match self.overall {
            Overall::Fails { level, .. } => Some(level),
            Overall::HoldsUpToPrecision { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<Padic>>,
}

/// Removes unit pivots one at a time by Gaussian elimination. The remaining
/// block has the same non-unit elementary divisors as `matrix`.
pub fn eliminate_units(matrix: &[Vec<Padic>]) -> Residual {
    eliminate_units_from(matrix, matrix.len())
}

/// As [`eliminate_units`], choosing pivots only among the first
/// `pivot_rows` rows.
fn eliminate_units_from(matrix: &[Vec<Padic>], pivot_rows: usize) -> Residual {
    let mut pivot_rows = pivot_rows;
    let mut rows: Vec<usize> = (0..matrix.len()).collect();
    let mut cols: Vec<usize> = (0..matrix.first().map_or(0, |r| r.len())).collect();
    let mut m: Vec<Vec<Padic>> = matrix.to_vec();
    loop {
        let pivot = m[..pivot_rows]
            .iter()
            .enumerate()
            .find_map(|(i, row)| row.iter().position(|x| x.is_unit()).map(|j| (i, j)));
        let Some((pi, pj)) = pivot else { break };
        let inv = m[pi][pj].inv_unit().expect("pivot is a unit");
        let prow = m[pi].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == pi {
                continue;
            }
            let f = row[pj] * inv;
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = *x - f * *y;
            }
        }
        m.remove(pi);
        rows.remove(pi);
        pivot_rows -= 1;
        for row in m.iter_mut() {
            row.remove(pj);
        }
        cols.remove(pj);
    }
    Residual { rows, cols, entries: m }
}

fn min_entry(res: &Residual) -> Option<(usize, usize, Padic, u32)> {
    let mut best: Option<(usize, usize, Padic, u32)> = None;
    for (i, row) in res.entries.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if let Valuation::Finite(v) = x.valuation() {
                if best.as_ref().is_none_or(|b| v < b.3) {
                    best = Some((res.rows[i], res.cols[j], *x, v));
                }
            }
        }
    }
    best
}

/// Checks surjectivity of `H^1(G, Z/p^n(1)) -> H^1(G, Z/p(1))` for
/// `n = 1..=N`, with `N` the orientation precision.
pub fn is_kummerian(op: &OrientedPresentation) -> Result<KummerVerdict, KummerError> {
    let matrix = constraint_rows(op)?;
    let minimal = op.presentation().is_minimal();
    let residual = if minimal {
        Residual {
            rows: (0..matrix.len()).collect(),
            cols: (0..op.ngens()).collect(),
            entries: matrix.clone(),
        }
    } else {
        eliminate_units(&matrix)
    };
    let n = op.precision();
    let worst = min_entry(&residual);
    let bound = worst.as_ref().map_or(n, |w| w.3);
    let levels = (1..=n).map(|level| LevelResult { level, passes: level <= bound }).collect();
    let overall = match worst {
        Some((relator, generator, entry, valuation)) => Overall::Fails {
            level: valuation + 1,
            witness: Witness { relator, generator, entry, valuation },
        },
        None => Overall::HoldsUpToPrecision { precision: n },
    };
    Ok(KummerVerdict { precision: n, minimal, matrix, residual, levels, overall })
}

/// Whether `values` (at precision `k`) kill every relator and pass the
/// Kummer test at every level up to `k`.
fn candidate_passes(pres: &Presentation, values: &[UnitOneP], k: u32, minimal: bool) -> bool {
    let p = pres.prime();
    let units = UnitsTarget { prime: p, precision: k };
    let cocycles = CocycleTarget { prime: p, precision: k, ngens: pres.ngens() };
    let gens = cocycles.generators(values);
    let mut rows = Vec::new();
    for r in pres.relators() {
        match evaluate(r, values, &units) {
            Ok(v) if v.is_one() => {}
            _ => return false,
        }
        let Ok(img) = evaluate(r, &gens, &cocycles) else { return false };
        if minimal {
            if img.form.coeffs.iter().any(|x| !x.is_zero()) {
                return false;
            }
        } else {
            rows.push(img.form.coeffs);
        }
    }
    minimal || eliminate_units(&rows).entries.iter().flatten().all(|x| x.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationSearch {
    pub precision: u32,
    /// Surviving orientations modulo `p^(N-1)`, deduplicated and sorted.
    pub classes: Vec<Vec<Padic>>,
    /// Number of survivors modulo `p^N` before reduction.
    pub survivors: usize,
    pub evaluated: u64,
}

/// All `θ` modulo `p^N` (lifted digit by digit from `θ ≡ 1 mod p`) that kill
/// the relators and pass the Kummer test up to level `N`. `budget` bounds the
/// number of candidates evaluated.
pub fn search_orientations(pres: &Presentation, precision: u32, budget: u64) -> Result<OrientationSearch, KummerError> {
    if precision < 2 {
        return Err(KummerError::PrecisionTooLow(precision));
    }
    let p = pres.prime();
    let d = pres.ngens();
    Padic::zero(p, precision)?;
    let minimal = pres.is_minimal();
    let per_parent = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(p)).unwrap_or(u64::MAX);
    let mut frontier: Vec<Vec<u64>> = vec![vec![1; d]];
    let mut evaluated = 0u64;
    for k in 2..=precision {
        let needed = (frontier.len() as u64).saturating_mul(per_parent);
        if evaluated.saturating_add(needed) > budget {
            return Err(KummerError::BudgetExceeded { evaluated, frontier: frontier.len(), level: k });
        }
        evaluated += needed;
        let step = p.pow(k - 1);
        frontier = frontier
            .par_iter()
            .flat_map_iter(|parent| {
                let parent = parent.clone();
                (0..per_parent).filter_map(move |mut code| {
                    let mut child = parent.clone();
                    for c in child.iter_mut().rev() {
                        *c += (code % p) * step;
                        code /= p;
                    }
                    let values: Vec<UnitOneP> = child
                        .iter()
                        .map(|&v| UnitOneP::new(Padic::new(p, v as i128, k).unwrap()).unwrap())
                        .collect();
                    candidate_passes(pres, &values, k, minimal).then_some(child)
                })
            })
            .collect();
    }
    let survivors = frontier.len();
    let modulus = p.pow(precision - 1);
    let mut reduced: Vec<Vec<u64>> = frontier
        .into_iter()
        .map(|v| v.into_iter().map(|x| x % modulus).collect())
        .collect();
    reduced.sort();
    reduced.dedup();
    let classes = reduced
        .into_iter()
        .map(|v| v.into_iter().map(|x| Padic::new(p, x as i128, precision - 1).unwrap()).collect())
        .collect();
    Ok(OrientationSearch { precision, classes, survivors, evaluated })
}

/// A cocycle with prescribed generator values, evaluable on any word.
#[derive(Debug, Clone)]
pub struct CocycleSolution {
    op: OrientedPresentation,
    values: Vec<Padic>,
}

impl CocycleSolution {
    pub fn values(&self) -> &[Padic] {
        &self.values
    }

    pub fn eval(&self, w: &Word) -> Result<Padic, WordError> {
        Ok(cocycle_image(&self.op, w)?.form.eval(&self.values))
    }
}

/// The cocycle taking the given values on generators, for a pair that
/// passes the Kummer test.
pub fn solve_cocycle(op: &OrientedPresentation, prescribed: &[Padic]) -> Result<CocycleSolution, KummerError> {
    if prescribed.len() != op.ngens() {
        return Err(KummerError::WrongLength { expected: op.ngens(), got: prescribed.len() });
    }
    let verdict = is_kummerian(op)?;
    if let Some(level) = verdict.failing_level() {
        return Err(KummerError::NotKummerian(level));
    }
    let n = op.precision();
    let values: Vec<Padic> = prescribed.iter().map(|v| v.reduce(n)).collect();
    for (i, row) in verdict.matrix.iter().enumerate() {
        let s = row.iter().zip(&values).fold(Padic::zero(op.prime(), n)?, |acc, (a, v)| acc + *a * *v);
        if !s.is_zero() {
            return Err(KummerError::Inconsistent(i));
        }
    }
    Ok(CocycleSolution { op: op.clone(), values })
}

/// For a minimal pair passing the Kummer test, whether every cocycle
/// `G -> Z/p^N(1)` vanishes on `w`.
pub fn kg_annihilation_check(op: &OrientedPresentation, w: &Word) -> Result<bool, KummerError> {
    let verdict = is_kummerian(op)?;
    if let Some(level) = verdict.failing_level() {
        return Err(KummerError::NotKummerian(level));
    }
    let img = cocycle_image(op, w)?;
    if verdict.minimal {
        return Ok(img.form.coeffs.iter().all(|c| c.is_zero()));
    }
    // Over Z/p^N the forms vanishing on every solution of R c = 0 are the
    // row span of R. Since the residual is zero, that span is spanned by the
    // unit pivot rows.
    let mut stacked = verdict.matrix.clone();
    stacked.push(img.form.coeffs);
    let reduced = eliminate_units_from(&stacked, verdict.matrix.len());
    Ok(reduced.entries.last().is_none_or(|row| row.iter().all(|x| x.is_zero())))
}
