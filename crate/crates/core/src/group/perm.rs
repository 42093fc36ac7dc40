//! Permutations in one-line notation and their cycle-notation labels.
//!
//! Products compose left to right: `(a*b)(x) = b(a(x))`, so conjugation
//! `a^b = b^-1 a b` relabels the points of `a` by `b`, e.g. `(12)^(123) = (23)`.

use crate::error::{Error, Result};

pub type Perm = Vec<u8>;

pub fn identity(degree: usize) -> Perm {
    (0..degree as u8).collect()
}

/// Left-to-right product: apply `a` first, then `b`.
pub fn compose(a: &[u8], b: &[u8]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// Validates one-line images. Images may be given 0-based (a permutation of
/// `0..d`) or 1-based (a permutation of `1..=d`); the two are told apart by
/// whether `0` occurs.
pub fn from_images(degree: usize, images: &[usize]) -> Result<Perm> {
    if images.len() != degree {
        return Err(Error::InvalidInput(format!(
            "permutation {images:?} has length {} but degree is {degree}",
            images.len()
        )));
    }
    if degree > 255 {
        return Err(Error::InvalidInput(format!("degree {degree} exceeds 255")));
    }
    let one_based = degree > 0 && !images.contains(&0);
    let mut seen = vec![false; degree];
    let mut out = Vec::with_capacity(degree);
    for &img in images {
        let x = if one_based { img.wrapping_sub(1) } else { img };
        if x >= degree || seen[x] {
            return Err(Error::InvalidInput(format!("{images:?} is not a permutation of degree {degree}")));
        }
        seen[x] = true;
        out.push(x as u8);
    }
    Ok(out)
}

/// Cycle notation with 1-based points. Points are comma-separated when the
/// degree is at least 10, juxtaposed otherwise; the identity is `()`.
pub fn cycle_label(p: &[u8]) -> String {
    let sep = if p.len() >= 10 { "," } else { "" };
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses cycle notation such as `(123)`, `(1,2)(3,4)` or `()`.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
    let bad = || Error::InvalidInput(format!("cannot parse {s:?} as a permutation of degree {degree}"));
    let mut perm = identity(degree);
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !compact.starts_with('(') {
        return Err(bad());
    }
    for body in compact.split('(').skip(1) {
        let body = body.strip_suffix(')').ok_or_else(bad)?;
        if body.is_empty() {
            continue;
        }
        let points: Vec<usize> = if body.contains(',') {
            body.split(',').map(|t| t.parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            body.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
        };
        let mut seen = std::collections::HashSet::new();
        for &pt in &points {
            if pt == 0 || pt > degree || !seen.insert(pt) {
                return Err(bad());
            }
        }
        // Cycles are applied in reading order, left to right.
        let mut cycle = identity(degree);
        for (k, &pt) in points.iter().enumerate() {
            cycle[pt - 1] = (points[(k + 1) % points.len()] - 1) as u8;
        }
        perm = compose(&perm, &cycle);
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let p = parse_cycles("(123)", 3).unwrap();
        assert_eq!(p, vec![1, 2, 0]);
        assert_eq!(cycle_label(&p), "(123)");
        assert_eq!(cycle_label(&identity(4)), "()");
        let q = parse_cycles("(1,2)(3,4)", 4).unwrap();
        assert_eq!(cycle_label(&q), "(12)(34)");
    }

    #[test]
    fn conjugation_convention() {
        // (12)^(123) = (123)^-1 (12) (123) = (23)
        let a = parse_cycles("(12)", 3).unwrap();
        let b = parse_cycles("(123)", 3).unwrap();
        let b_inv = parse_cycles("(132)", 3).unwrap();
        let c = compose(&compose(&b_inv, &a), &b);
        assert_eq!(cycle_label(&c), "(23)");
    }

    #[test]
    fn images_zero_or_one_based() {
        assert_eq!(from_images(3, &[2, 1, 3]).unwrap(), vec![1, 0, 2]);
        assert_eq!(from_images(3, &[1, 0, 2]).unwrap(), vec![1, 0, 2]);
        assert!(from_images(3, &[1, 1, 2]).is_err());
        assert!(from_images(3, &[1, 2]).is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_cycles("12", 3).is_err());
        assert!(parse_cycles("(14)", 3).is_err());
        assert!(parse_cycles("(1a)", 3).is_err());
        assert!(parse_cycles("(11)", 3).is_err());
    }
}
