//! Presentation files for the standard families, as text.

use std::fmt::Write as _;

fn header(p: u64, precision: u32, gens: &[String]) -> String {
    format!("prime {p}\nprecision {precision}\ngenerators {}\n", gens.join(" "))
}

fn pairs(prefix: &str, d: usize) -> String {
    (0..d / 2)
        .map(|k| format!(" [{prefix}{}, {prefix}{}]", 2 * k + 1, 2 * k + 2))
        .collect()
}

/// `⟨x, y_0..y_{d1}, z_0..z_{d2} | y_0^p [y_0, x^-1] [y_1, y_2]..., z_0^p [z_0, x^-1] [z_1, z_2]...⟩`
/// with `θ(x)` given as an expression in `p` (or `None` for `θ ≡ 1`).
pub fn amalgam(p: u64, d1: usize, d2: usize, theta_x: Option<&str>, precision: u32) -> String {
    let mut gens = vec!["x".to_string()];
    gens.extend((0..=d1).map(|i| format!("y{i}")));
    gens.extend((0..=d2).map(|j| format!("z{j}")));
    let mut s = header(p, precision, &gens);
    writeln!(s, "relator y0^p [y0, x^-1]{}", pairs("y", d1)).unwrap();
    writeln!(s, "relator z0^p [z0, x^-1]{}", pairs("z", d2)).unwrap();
    if let Some(t) = theta_x {
        writeln!(s, "orientation x = {t}").unwrap();
    }
    s
}

/// The same generators with relators `[x, y_0][y_1, y_2]...` and `[x, z_0][z_1, z_2]...`.
pub fn commutator_pair(p: u64, d1: usize, d2: usize, precision: u32) -> String {
    let mut gens = vec!["x".to_string()];
    gens.extend((0..=d1).map(|i| format!("y{i}")));
    gens.extend((0..=d2).map(|j| format!("z{j}")));
    let mut s = header(p, precision, &gens);
    writeln!(s, "relator [x, y0]{}", pairs("y", d1)).unwrap();
    writeln!(s, "relator [x, z0]{}", pairs("z", d2)).unwrap();
    s
}

/// `⟨x_1..x_d | x_1^q [[x_1, x_2], ..., x_2] [x_2, x_3] ... [x_{d-1}, x_d]⟩`
/// with `n` copies of `x_2` in the iterated commutator.
pub fn iterated_commutator(p: u64, d: usize, n: usize, q: &str, precision: u32) -> String {
    let gens: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    let mut s = header(p, precision, &gens);
    let mut comm = "x1".to_string();
    for _ in 0..n {
        comm = format!("[{comm}, x2]");
    }
    let tail: String = (2..d).map(|i| format!(" [x{i}, x{}]", i + 1)).collect();
    writeln!(s, "relator x1^({q}) {comm}{tail}").unwrap();
    s
}

/// `⟨x, y1, y2 | x y_i x^-1 = y_i^(1+q)⟩`, written as `[x^-1, y_i^-1] y_i^-q`.
pub fn raag(p: u64, q: &str, theta_x: Option<&str>, precision: u32) -> String {
    let gens = ["x", "y1", "y2"].map(String::from);
    let mut s = header(p, precision, &gens);
    for y in ["y1", "y2"] {
        writeln!(s, "relator [x^-1, {y}^-1] {y}^-({q})").unwrap();
    }
    if let Some(t) = theta_x {
        writeln!(s, "orientation x = {t}").unwrap();
    }
    s
}

/// `⟨x | x^(p^k)⟩`.
pub fn cyclic(p: u64, k: u32, precision: u32) -> String {
    format!("{}relator x^(p^{k})\n", header(p, precision, &["x".to_string()]))
}

/// Free on `x1..x_rank`.
pub fn free(p: u64, rank: usize, precision: u32) -> String {
    let gens: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
    header(p, precision, &gens)
}

/// `⟨u, t | [u, t]⟩` with the given `θ(u)`.
pub fn endgame(p: u64, theta_u: &str, precision: u32) -> String {
    let gens = ["u", "t"].map(String::from);
    format!("{}relator [u, t]\norientation u = {theta_u}\n", header(p, precision, &gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    #[test]
    fn families_parse() {
        for text in [
            amalgam(3, 2, 2, Some("1-p"), 4),
            amalgam(3, 0, 2, Some("1-p"), 4),
            commutator_pair(3, 2, 2, 4),
            iterated_commutator(3, 3, 2, "0", 4),
            raag(3, "p", Some("1+p"), 4),
            cyclic(3, 2, 4),
            free(3, 3, 4),
            endgame(3, "(1-p)^p", 5),
        ] {
            parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        }
    }

    #[test]
    fn amalgam_shape() {
        let op = parse(&amalgam(3, 2, 0, Some("1-p"), 4)).unwrap();
        assert_eq!(op.presentation().generators(), &["x", "y0", "y1", "y2", "z0"].map(String::from)[..]);
        let names = op.presentation().generators();
        assert_eq!(
            op.presentation().relators()[0].display(names).to_string(),
            "y0^3 * [y0, x^-1] * [y1, y2]"
        );
    }
}
