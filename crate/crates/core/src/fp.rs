//! Dense linear algebra over a small prime field.

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, found);
        let s = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..rows[i].len() {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols, p).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column, in column order.
pub fn nullspace(a: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, ncols, p);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Solution set of an affine system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

impl AffineSolution {
    /// Number of points, saturating.
    pub fn size(&self, p: u64) -> u64 {
        (0..self.kernel.len()).fold(1u64, |acc, _| acc.saturating_mul(p))
    }

    /// The point with kernel coordinates `coeffs`.
    pub fn point(&self, coeffs: &[u64], p: u64) -> Vec<u64> {
        let mut x = self.particular.clone();
        for (c, k) in coeffs.iter().zip(&self.kernel) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi = (*xi + c * ki) % p;
            }
        }
        x
    }
}

/// Solves `A x = b`; `None` if inconsistent. The particular solution has
/// all free variables set to zero.
pub fn solve(a: &[Vec<u64>], b: &[u64], ncols: usize, p: u64) -> Option<AffineSolution> {
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r: Vec<u64> = row.iter().map(|x| x % p).collect();
            r.push(bi % p);
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1, p);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![0u64; ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[r][ncols];
    }
    Some(AffineSolution {
        particular,
        kernel: nullspace(a, ncols, p),
    })
}

/// Steps through `F_p^n` in lexicographic order, last coordinate fastest.
/// Returns false after the last point.
pub fn next_point(coeffs: &mut [u64], p: u64) -> bool {
    for c in coeffs.iter_mut().rev() {
        *c += 1;
        if *c < p {
            return true;
        }
        *c = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_p() {
        for a in 1..7 {
            assert_eq!(a * inv(a, 7) % 7, 1);
        }
    }

    #[test]
    fn solve_and_kernel() {
        // x + y = 1, 2x + 2y = 2 over F_3
        let a = vec![vec![1, 1], vec![2, 2]];
        let s = solve(&a, &[1, 2], 2, 3).unwrap();
        assert_eq!(s.particular, vec![1, 0]);
        assert_eq!(s.kernel, vec![vec![2, 1]]);
        assert!(solve(&a, &[1, 1], 2, 3).is_none());
        assert_eq!(rank(&a, 2, 3), 1);
    }

    #[test]
    fn lexicographic_points() {
        let mut c = vec![0, 0];
        let mut seen = vec![c.clone()];
        while next_point(&mut c, 3) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[1], vec![0, 1]);
        assert_eq!(seen[3], vec![1, 0]);
    }
}
