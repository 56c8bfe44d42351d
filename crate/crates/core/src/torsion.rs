//! Torsion in `Ker(θ)/K(G)` through the θ-twisted abelianization.
//!
//! Fix a generator value `u₀ = θ(x₀)` of minimal depth, so `Im θ = u₀^{Z_p}`.
//! Each generator `x_i` goes to `(e_i, t_i)` in `Z_p^d ⋊ Z_p`, where
//! `θ(x_i) = u₀^{t_i}` and `(m, t)(m', t') = (m + u₀^t m', t + t')`. The
//! relators land in `Z_p^d × {0}` and span a submodule `L`; the torsion of
//! `Z_p^d / L` is the torsion of `Ker(θ)/K(G)`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fp;
use crate::kummer;
use crate::padic::{Padic, PadicError, UnitOneP, Valuation};
use crate::presentations::OrientedPresentation;
use crate::words::{evaluate, EvalTarget, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsionError {
    #[error("θ({generator}) is not a power of the base unit at this precision: {source}")]
    Structural {
        generator: usize,
        #[source]
        source: PadicError,
    },
    #[error("relator {relator} has nonzero t-component {t}; the orientation does not kill it")]
    NonzeroTwist { relator: usize, t: Padic },
    #[error("precision {precision} leaves no digits after the base unit of depth {depth}")]
    PrecisionTooLow { precision: u32, depth: u32 },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseUnit {
    /// `θ ≡ 1`; `K(G)` is the commutator subgroup.
    Trivial,
    Unit { generator: usize, value: UnitOneP, depth: u32 },
}

/// The generator value of minimal depth, first in declaration order on ties.
pub fn choose_base_unit(op: &OrientedPresentation) -> BaseUnit {
    let mut best: Option<(usize, u32)> = None;
    for (g, v) in op.orientation().values().iter().enumerate() {
        if let Valuation::Finite(d) = v.depth() {
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((g, d));
            }
        }
    }
    match best {
        None => BaseUnit::Trivial,
        Some((generator, depth)) => BaseUnit::Unit {
            generator,
            value: *op.orientation().value(generator),
            depth,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectElem {
    pub mvec: Vec<Padic>,
    pub t: Padic,
}

#[derive(Debug, Clone)]
pub struct SemidirectTarget {
    pub base: Option<UnitOneP>,
    pub prime: u64,
    pub precision: u32,
    pub ngens: usize,
}

impl SemidirectTarget {
    fn act(&self, t: &Padic, m: &[Padic]) -> Vec<Padic> {
        match &self.base {
            None => m.to_vec(),
            Some(u) => {
                let s = *u.pow_padic(t).expect("same prime").as_padic();
                m.iter().map(|x| *x * s).collect()
            }
        }
    }
}

impl EvalTarget for SemidirectTarget {
    type Elem = SemidirectElem;

    fn identity(&self) -> SemidirectElem {
        let z = Padic::zero(self.prime, self.precision).expect("precision checked by the caller");
        SemidirectElem { mvec: vec![z; self.ngens], t: z }
    }

    fn mul(&self, a: &SemidirectElem, b: &SemidirectElem) -> SemidirectElem {
        let moved = self.act(&a.t, &b.mvec);
        SemidirectElem {
            mvec: a.mvec.iter().zip(&moved).map(|(x, y)| *x + *y).collect(),
            t: a.t + b.t,
        }
    }

    fn inv(&self, a: &SemidirectElem) -> SemidirectElem {
        let t = a.t.neg();
        SemidirectElem {
            mvec: self.act(&t, &a.mvec).into_iter().map(|x| x.neg()).collect(),
            t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulePresentation {
    pub prime: u64,
    pub base: BaseUnit,
    pub symbols: Vec<String>,
    /// `t_i` with `θ(x_i) = u₀^{t_i}`.
    pub exponents: Vec<Padic>,
    /// Common precision of every entry.
    pub precision: u32,
    pub rows: Vec<Vec<Padic>>,
}

/// The relation module on one symbol per generator, at precision `N`
/// clamped to the orientation precision. It is `Ker(θ)/K(G)`, plus a free
/// summand `Z_p` when `θ` is nontrivial. A base unit of depth `v` costs
/// `v - 1` digits.
pub fn twisted_abelianization(op: &OrientedPresentation, precision: u32) -> Result<ModulePresentation, TorsionError> {
    let op = op.with_precision(precision);
    let p = op.prime();
    let n = op.precision();
    let base = choose_base_unit(&op);
    let (unit, depth) = match base {
        BaseUnit::Trivial => (None, 1),
        BaseUnit::Unit { value, depth, .. } => (Some(value), depth),
    };
    if unit.is_some() && depth >= n {
        return Err(TorsionError::PrecisionTooLow { precision: n, depth });
    }
    let exponents = op
        .orientation()
        .values()
        .iter()
        .enumerate()
        .map(|(g, v)| match &unit {
            None => Ok(Padic::zero(p, n)?),
            Some(u) => v.dlog(u).map_err(|source| TorsionError::Structural { generator: g, source }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let target = SemidirectTarget { base: unit, prime: p, precision: n, ngens: op.ngens() };
    let one = Padic::one(p, n)?;
    let zero = Padic::zero(p, n)?;
    let gens: Vec<SemidirectElem> = exponents
        .iter()
        .enumerate()
        .map(|(i, t)| SemidirectElem {
            mvec: (0..op.ngens()).map(|j| if i == j { one } else { zero }).collect(),
            t: *t,
        })
        .collect();
    let images = op
        .presentation()
        .relators()
        .par_iter()
        .map(|r| evaluate(r, &gens, &target))
        .collect::<Result<Vec<_>, _>>()?;
    let row_precision = match unit {
        None => n,
        Some(_) => n - depth + 1,
    };
    let mut rows = Vec::with_capacity(images.len());
    for (relator, img) in images.into_iter().enumerate() {
        if !img.t.is_zero() {
            return Err(TorsionError::NonzeroTwist { relator, t: img.t });
        }
        rows.push(img.mvec.iter().map(|x| x.reduce(row_precision)).collect());
    }
    Ok(ModulePresentation {
        prime: p,
        base,
        symbols: op.presentation().generators().to_vec(),
        exponents,
        precision: row_precision,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub precision: u32,
    /// One per diagonal position, nondecreasing; `precision` means zero.
    pub valuations: Vec<u32>,
    pub diagonal: Vec<Padic>,
    pub left: Vec<Vec<Padic>>,
    pub right: Vec<Vec<Padic>>,
}

fn identity_matrix(n: usize, prime: u64, prec: u32) -> Vec<Vec<Padic>> {
    let one = Padic::one(prime, prec).expect("precision checked by the caller");
    let zero = Padic::zero(prime, prec).expect("precision checked by the caller");
    (0..n).map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect()).collect()
}

/// Smith normal form over `Z/p^N` of an `r × c` matrix: `left · a · right`
/// is diagonal with entries `p^{v_1}, p^{v_2}, ...`, `v_1 ≤ v_2 ≤ ...`.
pub fn snf(a: &[Vec<Padic>], ncols: usize, prime: u64, precision: u32) -> Result<SnfResult, PadicError> {
    let nrows = a.len();
    let mut m: Vec<Vec<Padic>> = a.iter().map(|row| row.iter().map(|x| x.reduce(precision)).collect()).collect();
    let mut u = identity_matrix(nrows, prime, precision);
    let mut v = identity_matrix(ncols, prime, precision);
    let zero = Padic::zero(prime, precision)?;
    let k_max = nrows.min(ncols);
    let mut valuations = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if let Valuation::Finite(val) = x.valuation() {
                    if best.is_none_or(|b| val < b.2) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((pi, pj, val)) = best else {
            valuations.extend(std::iter::repeat_n(precision, k_max - k));
            break;
        };
        m.swap(k, pi);
        u.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for row in v.iter_mut() {
            row.swap(k, pj);
        }
        let pv = Padic::new(prime, (prime as i128).pow(val), precision)?;
        // Quotients by p^val are known modulo p^(N-val); any lift clears the
        // entry modulo p^N.
        let lift = |x: Padic| Padic::new(prime, x.value() as i128, precision);
        let unit_inv = lift(m[k][k].divide_exact(&pv)?.inv_unit()?)?;
        for x in m[k].iter_mut() {
            *x = *x * unit_inv;
        }
        for x in u[k].iter_mut() {
            *x = *x * unit_inv;
        }
        let prow = m[k].clone();
        let urow = u[k].clone();
        for i in (k + 1)..nrows {
            if m[i][k].is_zero() {
                continue;
            }
            let q = lift(m[i][k].divide_exact(&pv)?)?;
            for (x, y) in m[i].iter_mut().zip(&prow) {
                *x = *x - q * *y;
            }
            for (x, y) in u[i].iter_mut().zip(&urow) {
                *x = *x - q * *y;
            }
        }
        for j in (k + 1)..ncols {
            if m[k][j].is_zero() {
                continue;
            }
            let q = lift(m[k][j].divide_exact(&pv)?)?;
            for i in 0..nrows {
                let mk = m[i][k];
                m[i][j] = m[i][j] - q * mk;
            }
            for row in v.iter_mut() {
                let vk = row[k];
                row[j] = row[j] - q * vk;
            }
        }
        valuations.push(val);
    }
    let diagonal = (0..k_max).map(|i| m.get(i).map_or(zero, |row| row[i])).collect();
    Ok(SnfResult { precision, valuations, diagonal, left: u, right: v })
}

/// Matrix product over `Z/p^N`.
pub fn mat_mul(a: &[Vec<Padic>], b: &[Vec<Padic>], inner: usize, ncols: usize, zero: Padic) -> Vec<Vec<Padic>> {
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| (0..inner).fold(zero, |acc, k| acc + row[k] * b[k][j]))
                .collect()
        })
        .collect()
}

/// Invertible over `Z/p^N` iff invertible modulo `p`.
pub fn is_unimodular(m: &[Vec<Padic>], prime: u64) -> bool {
    let reduced: Vec<Vec<u64>> = m.iter().map(|row| row.iter().map(|x| x.value() % prime).collect()).collect();
    fp::rank(&reduced, m.len(), prime) == m.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorKind {
    /// `v = 0`: the relation eliminates a symbol.
    Unit,
    /// `0 < v < N`: torsion at any lift.
    Definite,
    /// `v = N`: indistinguishable from zero.
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Divisor {
    pub valuation: u32,
    pub definite: bool,
    pub kind: DivisorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TorsionVerdict {
    NotKummerian { valuation: u32 },
    TorsionFreeUpToPrecision { precision: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub module: ModulePresentation,
    pub divisors: Vec<Divisor>,
    pub definite_torsion: Vec<u32>,
    /// Free rank of the symbol module, counting ambiguous divisors as free.
    pub symbol_free_rank: usize,
    /// Free rank of `Ker(θ)/K(G)`: the symbol module minus the direction of `θ`.
    pub kernel_free_rank: usize,
    pub ambiguous: usize,
    pub verdict: TorsionVerdict,
    pub shape: String,
}

impl TorsionReport {
    pub fn is_torsion_free(&self) -> bool {
        matches!(self.verdict, TorsionVerdict::TorsionFreeUpToPrecision { .. })
    }
}

pub fn torsion_report(op: &OrientedPresentation, precision: u32) -> Result<TorsionReport, TorsionError> {
    let module = twisted_abelianization(op, precision)?;
    let n = module.precision;
    let snf = snf(&module.rows, module.symbols.len(), module.prime, n)?;
    let divisors: Vec<Divisor> = snf
        .valuations
        .iter()
        .map(|&v| {
            let kind = if v == 0 {
                DivisorKind::Unit
            } else if v < n {
                DivisorKind::Definite
            } else {
                DivisorKind::Ambiguous
            };
            Divisor { valuation: v, definite: kind == DivisorKind::Definite, kind }
        })
        .collect();
    let definite_torsion: Vec<u32> = divisors.iter().filter(|d| d.definite).map(|d| d.valuation).collect();
    let ambiguous = divisors.iter().filter(|d| d.kind == DivisorKind::Ambiguous).count();
    let symbol_free_rank = module.symbols.len() - divisors.iter().filter(|d| d.valuation < n).count();
    let twisted = !matches!(module.base, BaseUnit::Trivial);
    let kernel_free_rank = symbol_free_rank.saturating_sub(usize::from(twisted));
    let verdict = match definite_torsion.first() {
        Some(&valuation) => TorsionVerdict::NotKummerian { valuation },
        None => TorsionVerdict::TorsionFreeUpToPrecision { precision: n },
    };
    let shape = shape_string(kernel_free_rank, &definite_torsion, twisted);
    Ok(TorsionReport {
        module,
        divisors,
        definite_torsion,
        symbol_free_rank,
        kernel_free_rank,
        ambiguous,
        verdict,
        shape,
    })
}

fn shape_string(free_rank: usize, torsion: &[u32], twisted: bool) -> String {
    let mut parts = Vec::new();
    match free_rank {
        0 => {}
        1 => parts.push("Z_p".to_string()),
        r => parts.push(format!("Z_p^{r}")),
    }
    for &v in torsion {
        parts.push(if v == 1 { "Z/p".to_string() } else { format!("Z/p^{v}") });
    }
    let mut s = if parts.is_empty() { "1".to_string() } else { parts.join(" ⊕ ") };
    if twisted {
        write!(s, " ⋊ Im θ").unwrap();
    }
    s
}

/// Structure of `G/K(G) ≅ Ker(θ)/K(G) ⋊ Im θ` at the given precision.
pub fn theta_abelian_shape(op: &OrientedPresentation, precision: u32) -> Result<String, TorsionError> {
    Ok(torsion_report(op, precision)?.shape)
}

/// Kummer test and torsion test side by side. The Kummer test runs at the
/// row precision of the module, the precision at which torsion is decided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub precision: u32,
    pub kummer_failing_level: Option<u32>,
    pub torsion_valuation: Option<u32>,
    pub agree: bool,
}

pub fn cross_check(op: &OrientedPresentation, precision: u32) -> Result<CrossCheck, crate::Error> {
    let report = torsion_report(op, precision)?;
    let m = report.module.precision;
    let verdict = kummer::is_kummerian(&op.with_precision(m))?;
    let kummer_failing_level = verdict.failing_level();
    let torsion_valuation = report.definite_torsion.first().copied();
    Ok(CrossCheck {
        precision: m,
        kummer_failing_level,
        torsion_valuation,
        agree: kummer_failing_level.is_some() == torsion_valuation.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    fn pad(v: i128) -> Padic {
        Padic::new(3, v, 4).unwrap()
    }

    #[test]
    fn snf_small() {
        let r = snf(&[vec![pad(3), pad(0)], vec![pad(0), pad(1)]], 2, 3, 4).unwrap();
        assert_eq!(r.valuations, vec![0, 1]);
        let r = snf(&[vec![pad(0), pad(0)]], 2, 3, 4).unwrap();
        assert_eq!(r.valuations, vec![4]);
        let r = snf(&[], 3, 3, 4).unwrap();
        assert!(r.valuations.is_empty());
    }

    #[test]
    fn endgame_quotient() {
        let text = "prime 3\nprecision 5\ngenerators u t\nrelator [u, t]\norientation u = (1-p)^p\n";
        let rep = torsion_report(&parse(text).unwrap(), 5).unwrap();
        assert_eq!(rep.module.precision, 4);
        assert!(rep.module.rows[0][0].is_zero());
        assert_eq!(rep.module.rows[0][1].valuation(), Valuation::Finite(2));
        assert_eq!(rep.definite_torsion, vec![2]);
        assert_eq!(rep.verdict, TorsionVerdict::NotKummerian { valuation: 2 });
        assert_eq!(rep.shape, "Z/p^2 ⋊ Im θ");
    }

    #[test]
    fn cyclic_and_free() {
        let rep = torsion_report(&parse("prime 5\ngenerators x\nrelator x^p\n").unwrap(), 4).unwrap();
        assert_eq!(rep.definite_torsion, vec![1]);
        assert_eq!(rep.shape, "Z/p");
        let rep = torsion_report(&parse("prime 5\ngenerators x y\n").unwrap(), 4).unwrap();
        assert!(rep.module.rows.is_empty());
        assert!(rep.is_torsion_free());
        assert_eq!(rep.shape, "Z_p^2");
    }

    #[test]
    fn base_unit_ties() {
        let op = parse("prime 3\ngenerators a b c\norientation b = 1+p^2\norientation c = 1-p^2\n").unwrap();
        assert!(matches!(choose_base_unit(&op), BaseUnit::Unit { generator: 1, depth: 2, .. }));
        let op = parse("prime 3\ngenerators a\n").unwrap();
        assert_eq!(choose_base_unit(&op), BaseUnit::Trivial);
    }
}
