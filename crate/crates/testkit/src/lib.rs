//! Slow reference implementations and seeded instance generators.

use std::collections::HashMap;

use kummerian::subgroups::{FiniteQuotientMap, SchreierPresentation};
use kummerian::words::Word;
use kummerian::Presentation;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn random_exponent(rng: &mut ChaCha8Rng, p: i64) -> i64 {
    let e = *[1, 1, 2, 3, p, p, p * p].choose(rng).unwrap();
    if rng.gen_bool(0.5) {
        e
    } else {
        -e
    }
}

/// A random oriented presentation file with at most `max_gens` generators
/// and `max_rels` relators. The orientation is `θ(g) = u^{a_g}` with
/// `a_g ∈ {0, 1}`, and each relator is corrected so `θ` kills it.
pub fn random_oriented(rng: &mut ChaCha8Rng, p: u64, precision: u32, max_gens: usize, max_rels: usize) -> String {
    let d = rng.gen_range(1..=max_gens);
    let r = rng.gen_range(0..=max_rels);
    let pi = p as i64;
    let twisted: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.4)).collect();
    let k = rng.gen_range(1..(p * p) as i64);
    let mut text = format!("prime {p}\nprecision {precision}\ngenerators {}\n", NAMES[..d].join(" "));
    for _ in 0..r {
        let mut pieces = Vec::new();
        let mut weight = 0i64;
        for _ in 0..rng.gen_range(1..=4) {
            let g = rng.gen_range(0..d);
            let h = rng.gen_range(0..d);
            match rng.gen_range(0..5) {
                0 | 1 => {
                    let e = random_exponent(rng, pi);
                    if twisted[g] {
                        weight += e;
                    }
                    pieces.push(format!("{}^({e})", NAMES[g]));
                }
                2 => pieces.push(format!("[{}, {}]", NAMES[g], NAMES[h])),
                3 => pieces.push(format!("[[{}, {}], {}]", NAMES[g], NAMES[h], NAMES[h])),
                _ => {
                    let e = random_exponent(rng, pi);
                    pieces.push(format!("[{}^({e}), {}]", NAMES[g], NAMES[h]));
                }
            }
        }
        if weight != 0 {
            let g = (0..d).find(|&g| twisted[g]).unwrap();
            pieces.push(format!("{}^({})", NAMES[g], -weight));
        }
        text.push_str(&format!("relator {}\n", pieces.join(" ")));
    }
    for g in 0..d {
        if twisted[g] {
            text.push_str(&format!("orientation {} = 1+p*{k}\n", NAMES[g]));
        }
    }
    text
}

/// Random element of `F_p^d`.
pub fn random_vector(rng: &mut ChaCha8Rng, d: usize, p: u64) -> Vec<u64> {
    (0..d).map(|_| rng.gen_range(0..p)).collect()
}

fn binom2(e: i64) -> i64 {
    e * (e - 1) / 2
}

/// Degree ≤ 2 Magnus coefficients by multiplying out truncated polynomials
/// `(1 + X)^e = 1 + eX + C(e, 2)X²` letter block by letter block.
pub fn magnus_oracle(w: &Word, p: u64, d: usize) -> (Vec<u64>, Vec<u64>) {
    // Monomials of degree ≤ 2 keyed by their index sequence.
    let mut poly: HashMap<Vec<usize>, i64> = HashMap::from([(vec![], 1)]);
    let mut blocks: Vec<(usize, i64)> = Vec::new();
    for (g, s) in w.letters() {
        match blocks.last_mut() {
            Some((h, e)) if *h == g => *e += s,
            _ => blocks.push((g, s)),
        }
    }
    for (g, e) in blocks {
        let factor = [(vec![], 1), (vec![g], e), (vec![g, g], binom2(e))];
        let mut next: HashMap<Vec<usize>, i64> = HashMap::new();
        for (m, c) in &poly {
            for (f, fc) in &factor {
                if m.len() + f.len() <= 2 {
                    let mut key = m.clone();
                    key.extend(f);
                    *next.entry(key).or_default() += c * fc;
                }
            }
        }
        poly = next;
    }
    let pm = p as i64;
    let get = |k: Vec<usize>| poly.get(&k).copied().unwrap_or(0).rem_euclid(pm) as u64;
    let linear = (0..d).map(|i| get(vec![i])).collect();
    let quad = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| get(vec![i, j])).collect();
    (linear, quad)
}

/// Exponent-sum matrix of the rewritten relators, computed directly from
/// the Fox-style trace of each relator through the cosets, without the
/// rewritten words. Rows follow `sp.relator_sources`; columns follow
/// `sp.generators`, located by name.
pub fn fox_rewrite_matrix(pres: &Presentation, map: &FiniteQuotientMap, sp: &SchreierPresentation) -> Vec<Vec<i64>> {
    let columns: HashMap<&str, usize> = sp.generators.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let name = |coset: &[u64], g: usize| {
        let coords: Vec<String> = coset.iter().map(|x| x.to_string()).collect();
        format!("{}__{}", pres.generators()[g], coords.join("_"))
    };
    sp.relator_sources
        .iter()
        .map(|&(ci, r)| {
            let start = map.coset(ci);
            let mut row = vec![0i64; sp.generators.len()];
            let letters = pres.relators()[r].letters();
            for k in 0..letters.len() {
                let (g, s) = letters[k];
                let prefix = letters[..k].iter().fold(Word::identity(), |w, &(h, e)| w.mul(&Word::gen_pow(h, e)));
                let mut tail = map.image_of(&prefix);
                if s < 0 {
                    tail = map.image_of(&prefix.mul(&Word::gen_pow(g, -1)));
                }
                let coset: Vec<u64> = start
                    .iter()
                    .zip(&tail)
                    .zip(&map.orders)
                    .map(|((a, b), n)| (a + b) % n)
                    .collect();
                if let Some(&col) = columns.get(name(&coset, g).as_str()) {
                    row[col] += s;
                }
            }
            row
        })
        .collect()
}
