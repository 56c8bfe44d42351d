//! Reidemeister–Schreier presentations for kernels of maps onto finite
//! abelian p-groups.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::format::{parse_int_expr, FormatError};
use crate::presentations::{Orientation, OrientedPresentation, Presentation, PresentationError};
use crate::words::{GenId, Word, WordError};

/// Largest subgroup index handled.
pub const MAX_INDEX: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("cyclic factor order {0} is not a power of the prime")]
    BadOrder(u64),
    #[error("image of generator {gen} has {got} coordinates, target has {expected}")]
    ImageLength { gen: usize, expected: usize, got: usize },
    #[error("{got} images for {expected} generators")]
    ImageCount { expected: usize, got: usize },
    #[error("the images do not generate the target")]
    NotSurjective,
    #[error("relator {0} does not map to zero; the map is not a homomorphism")]
    NotHomomorphism(usize),
    #[error("index {0} is too large")]
    IndexTooLarge(u64),
    #[error("cannot parse map: {0}")]
    Parse(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A map from the generators to `Z/p^{a_1} × ... × Z/p^{a_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteQuotientMap {
    pub prime: u64,
    pub orders: Vec<u64>,
    pub images: Vec<Vec<u64>>,
}

impl FiniteQuotientMap {
    pub fn new(pres: &Presentation, orders: Vec<u64>, images: Vec<Vec<u64>>) -> Result<Self, SubgroupError> {
        let p = pres.prime();
        for &o in &orders {
            let mut x = o;
            while x > 1 && x % p == 0 {
                x /= p;
            }
            if x != 1 || o == 1 {
                return Err(SubgroupError::BadOrder(o));
            }
        }
        let index = orders.iter().try_fold(1u64, |a, &o| a.checked_mul(o)).unwrap_or(u64::MAX);
        if index > MAX_INDEX {
            return Err(SubgroupError::IndexTooLarge(index));
        }
        if images.len() != pres.ngens() {
            return Err(SubgroupError::ImageCount { expected: pres.ngens(), got: images.len() });
        }
        let mut reduced = Vec::with_capacity(images.len());
        for (gen, img) in images.into_iter().enumerate() {
            if img.len() != orders.len() {
                return Err(SubgroupError::ImageLength { gen, expected: orders.len(), got: img.len() });
            }
            reduced.push(img.iter().zip(&orders).map(|(x, o)| x % o).collect());
        }
        let map = FiniteQuotientMap { prime: p, orders, images: reduced };
        for (i, r) in pres.relators().iter().enumerate() {
            if map.image_of(r).iter().any(|&x| x != 0) {
                return Err(SubgroupError::NotHomomorphism(i));
            }
        }
        Ok(map)
    }

    /// Parses `x:1,0; y0:0,1` against target orders such as `p,p` or `p^2`.
    /// Unlisted generators map to zero.
    pub fn parse(pres: &Presentation, map: &str, target: &str) -> Result<Self, SubgroupError> {
        let p = pres.prime();
        let orders = target
            .split(',')
            .map(|t| {
                let v = parse_int_expr(t.trim(), p)?;
                v.to_u64().ok_or_else(|| SubgroupError::Parse(format!("order `{t}` out of range")))
            })
            .collect::<Result<Vec<u64>, _>>()?;
        let mut images = vec![vec![0u64; orders.len()]; pres.ngens()];
        for item in map.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, coords) = item
                .split_once(':')
                .ok_or_else(|| SubgroupError::Parse(format!("expected `name:coords`, got `{item}`")))?;
            let g = pres
                .gen_index(name.trim())
                .ok_or_else(|| SubgroupError::Parse(format!("unknown generator `{}`", name.trim())))?;
            let vals = coords
                .split(',')
                .zip(&orders)
                .map(|(c, &o)| {
                    let v = parse_int_expr(c.trim(), p)?;
                    let o = BigInt::from(o);
                    let mut r = v % &o;
                    if r < BigInt::zero() {
                        r += &o;
                    }
                    Ok(r.to_u64().expect("reduced"))
                })
                .collect::<Result<Vec<u64>, SubgroupError>>()?;
            if vals.len() != orders.len() || coords.split(',').count() != orders.len() {
                return Err(SubgroupError::ImageLength { gen: g, expected: orders.len(), got: coords.split(',').count() });
            }
            images[g] = vals;
        }
        Self::new(pres, orders, images)
    }

    pub fn index(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn image_of(&self, w: &Word) -> Vec<u64> {
        let mut acc = vec![0u64; self.orders.len()];
        for (g, e) in w.letters() {
            self.step(&mut acc, g, e);
        }
        acc
    }

    fn step(&self, c: &mut [u64], g: GenId, sign: i64) {
        for ((x, &y), &o) in c.iter_mut().zip(&self.images[g]).zip(&self.orders) {
            *x = if sign > 0 { (*x + y) % o } else { (*x + o - y) % o };
        }
    }

    /// Position of a coset in lexicographic order.
    pub fn coset_index(&self, c: &[u64]) -> usize {
        c.iter().zip(&self.orders).fold(0u64, |acc, (&x, &o)| acc * o + x) as usize
    }

    pub fn coset(&self, mut index: usize) -> Vec<u64> {
        let mut c = vec![0u64; self.orders.len()];
        for (x, &o) in c.iter_mut().zip(&self.orders).rev() {
            *x = index as u64 % o;
            index /= o as usize;
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchreierGenerator {
    pub coset: Vec<u64>,
    pub generator: GenId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierPresentation {
    pub presentation: Presentation,
    pub index: u64,
    /// Transversal word per coset, by coset index.
    pub transversal: Vec<Word>,
    pub generators: Vec<SchreierGenerator>,
    /// Each Schreier generator as a word in the ambient generators.
    pub embedding: Vec<Word>,
    /// `(coset index, relator index)` of each rewritten relator.
    pub relator_sources: Vec<(usize, usize)>,
}

fn power_word(w: &Word, sign: i64) -> Word {
    if sign > 0 {
        w.clone()
    } else {
        w.inverse()
    }
}

/// Replaces each ambient generator `g` by `images[g]` and freely reduces.
pub fn substitute_words(w: &Word, images: &[Word]) -> Word {
    let mut acc = Word::identity();
    for (g, s) in w.letters() {
        acc = acc.mul(&power_word(&images[g], s));
    }
    acc.normalize()
}

pub fn kernel_presentation(pres: &Presentation, map: &FiniteQuotientMap) -> Result<SchreierPresentation, SubgroupError> {
    let d = pres.ngens();
    let index = map.index() as usize;
    // Breadth-first spanning tree of the Cayley graph of the target.
    let mut transversal: Vec<Option<Word>> = vec![None; index];
    let mut tree = vec![vec![false; d]; index];
    transversal[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(ci) = queue.pop_front() {
        let c = map.coset(ci);
        for g in 0..d {
            let mut next = c.clone();
            map.step(&mut next, g, 1);
            let ni = map.coset_index(&next);
            if transversal[ni].is_none() {
                transversal[ni] = Some(transversal[ci].as_ref().unwrap().mul(&Word::gen(g)));
                tree[ci][g] = true;
                queue.push_back(ni);
            }
        }
    }
    let transversal: Vec<Word> = transversal
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(SubgroupError::NotSurjective)?;

    let mut generators = Vec::new();
    let mut embedding = Vec::new();
    let mut sgen: HashMap<(usize, GenId), usize> = HashMap::new();
    for ci in 0..index {
        let c = map.coset(ci);
        for g in 0..d {
            if tree[ci][g] {
                continue;
            }
            let mut next = c.clone();
            map.step(&mut next, g, 1);
            let ni = map.coset_index(&next);
            let coords: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            sgen.insert((ci, g), generators.len());
            generators.push(SchreierGenerator {
                coset: c.clone(),
                generator: g,
                name: format!("{}__{}", pres.generators()[g], coords.join("_")),
            });
            embedding.push(
                transversal[ci]
                    .mul(&Word::gen(g))
                    .mul(&transversal[ni].inverse())
                    .normalize(),
            );
        }
    }

    let jobs: Vec<(usize, usize)> = (0..index).flat_map(|ci| (0..pres.relators().len()).map(move |r| (ci, r))).collect();
    let relators: Vec<Word> = jobs
        .par_iter()
        .map(|&(ci, r)| {
            let mut cur = map.coset(ci);
            let mut out = Word::identity();
            for (g, s) in pres.relators()[r].letters() {
                if s > 0 {
                    let from = map.coset_index(&cur);
                    if let Some(&k) = sgen.get(&(from, g)) {
                        out = out.mul(&Word::gen(k));
                    }
                    map.step(&mut cur, g, 1);
                } else {
                    map.step(&mut cur, g, -1);
                    let from = map.coset_index(&cur);
                    if let Some(&k) = sgen.get(&(from, g)) {
                        out = out.mul(&Word::gen_pow(k, -1));
                    }
                }
            }
            out.normalize()
        })
        .collect();

    let names = generators.iter().map(|s| s.name.clone()).collect();
    let presentation = Presentation::new(pres.prime(), names, relators)?;
    let sp = SchreierPresentation {
        presentation,
        index: index as u64,
        transversal,
        generators,
        embedding,
        relator_sources: jobs,
    };
    assert_eq!(sp.generators.len(), index * (d - 1) + 1);
    assert_eq!(sp.presentation.relators().len(), index * pres.relators().len());
    Ok(sp)
}

/// `θ` restricted to the kernel, on the Schreier generators.
pub fn restrict_orientation(op: &OrientedPresentation, sp: &SchreierPresentation) -> Result<Orientation, SubgroupError> {
    let values = sp
        .embedding
        .iter()
        .map(|w| op.orientation().eval(w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Orientation::new(op.prime(), op.precision(), values)?)
}

/// Integer Smith normal form; returns the nonzero diagonal entries in
/// divisibility order.
pub fn integer_invariants(matrix: &[Vec<i64>], ncols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].magnitude() < m[bi][bj].magnitude()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in (t + 1)..nrows {
            let q = &m[i][t] / &m[t][t];
            if !q.is_zero() {
                for j in t..ncols {
                    let sub = &q * &m[t][j];
                    m[i][j] -= sub;
                }
            }
            clean &= m[i][t].is_zero();
        }
        for j in (t + 1)..ncols {
            let q = &m[t][j] / &m[t][t];
            if !q.is_zero() {
                for i in t..nrows {
                    let sub = &q * &m[i][t];
                    m[i][j] -= sub;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // Pivot must divide the rest of the block.
        let bad = ((t + 1)..nrows).find(|&i| ((t + 1)..ncols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
        if let Some(i) = bad {
            for j in t..ncols {
                let add = m[i][j].clone();
                m[t][j] += add;
            }
            continue;
        }
        diag.push(m[t][t].magnitude().clone().into());
        t += 1;
    }
    diag
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianizationReport {
    pub matrix: Vec<Vec<i64>>,
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<String>,
}

pub fn abelianization(pres: &Presentation) -> AbelianizationReport {
    let d = pres.ngens();
    let matrix: Vec<Vec<i64>> = pres.relators().iter().map(|r| r.exponent_sums(d)).collect();
    let inv = integer_invariants(&matrix, d);
    AbelianizationReport {
        free_rank: d - inv.len(),
        torsion: inv.iter().filter(|x| **x != BigInt::from(1)).map(|x| x.to_string()).collect(),
        matrix,
    }
}

/// Abelianization of the kernel from its rewritten relators.
pub fn abelianization_check(sp: &SchreierPresentation) -> AbelianizationReport {
    abelianization(&sp.presentation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    fn pres(text: &str) -> Presentation {
        parse(text).unwrap().presentation().clone()
    }

    #[test]
    fn free_rank_formula() {
        let pr = pres("prime 3\ngenerators a b\n");
        let map = FiniteQuotientMap::parse(&pr, "a:1; b:1", "p").unwrap();
        let sp = kernel_presentation(&pr, &map).unwrap();
        assert_eq!(sp.generators.len(), 4);
        assert!(sp.presentation.relators().is_empty());
        assert_eq!(abelianization_check(&sp).free_rank, 4);
    }

    #[test]
    fn map_validation() {
        let pr = pres("prime 3\ngenerators a b\nrelator a^3 [a, b]\n");
        assert!(FiniteQuotientMap::parse(&pr, "a:0; b:0", "p").is_ok());
        assert!(kernel_presentation(&pr, &FiniteQuotientMap::parse(&pr, "", "p").unwrap()).is_err());
        assert!(matches!(FiniteQuotientMap::parse(&pr, "a:1", "p^2"), Err(SubgroupError::NotHomomorphism(0))));
        assert!(matches!(FiniteQuotientMap::parse(&pr, "a:1", "6"), Err(SubgroupError::BadOrder(6))));
    }

    #[test]
    fn power_generator_orientation() {
        let op = parse("prime 3\nprecision 4\ngenerators x y\norientation x = 1-p\n").unwrap();
        let map = FiniteQuotientMap::parse(op.presentation(), "x:1", "p").unwrap();
        let sp = kernel_presentation(op.presentation(), &map).unwrap();
        let theta = restrict_orientation(&op, &sp).unwrap();
        let k = sp.presentation.gen_index("x__2").unwrap();
        assert_eq!(sp.embedding[k], Word::gen_pow(0, 3));
        assert_eq!(theta.value(k).as_padic().signed_value(), -8);
    }

    #[test]
    fn integer_snf() {
        let inv = integer_invariants(&[vec![2, 4], vec![6, 8]], 2);
        assert_eq!(inv, vec![BigInt::from(2), BigInt::from(4)]);
        let inv = integer_invariants(&[vec![2, 0], vec![0, 3]], 2);
        assert_eq!(inv, vec![BigInt::from(1), BigInt::from(6)]);
        assert!(integer_invariants(&[vec![0, 0]], 2).is_empty());
    }
}
