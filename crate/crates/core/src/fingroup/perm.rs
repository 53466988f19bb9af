//! Permutations on `0..d`, written and parsed in 1-based cycle notation.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FinGroupError;

/// A bijection of `{0, …, d-1}`. Products compose right to left:
/// `(p * q)(i) = p(q(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, FinGroupError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(FinGroupError::Parse(format!("not a bijection: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Product of 1-based cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, FinGroupError> {
        let mut p = Perm::identity(degree);
        for cycle in cycles {
            let mut images = Perm::identity(degree).0;
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a > degree || b == 0 || b > degree {
                    return Err(FinGroupError::Parse(format!("point out of range in {cycle:?}")));
                }
                images[a - 1] = (b - 1) as u32;
            }
            let c = Perm::from_images(images)?;
            p = &p * &c;
        }
        Ok(p)
    }

    /// The transposition of two 1-based points.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        Perm::from_cycles(degree, &[&[a, b]]).expect("valid transposition")
    }

    /// Parse cycle notation such as `(1 2)(3 4 5)`; `()` is the identity.
    pub fn parse(text: &str, degree: usize) -> Result<Self, FinGroupError> {
        let cycles = parse_cycles(text)?;
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `self * x * self⁻¹`.
    pub fn conjugate(&self, x: &Perm) -> Perm {
        &(self * x) * &self.inverse()
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        &(&(self * other) * &self.inverse()) * &other.inverse()
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut l = 1u64;
        for i in 0..self.0.len() {
            if seen[i] {
                continue;
            }
            let mut len = 0u64;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j] as usize;
                len += 1;
            }
            l = lcm(l, len);
        }
        l
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] as usize != i).collect()
    }

    /// Non-trivial cycles as 1-based point lists, each starting at its
    /// smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            if seen[i] || self.0[i] as usize == i {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.0[j] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Same permutation on more points.
    pub fn extend(&self, degree: usize) -> Perm {
        let mut images = self.0.clone();
        images.extend(self.0.len() as u32..degree.max(self.0.len()) as u32);
        Perm(images)
    }

    /// Move this permutation onto the points `offset..offset+d` of a larger
    /// set of `degree` points.
    pub fn shift(&self, offset: usize, degree: usize) -> Perm {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.0.iter().enumerate() {
            images[offset + i] = offset as u32 + x;
        }
        Perm(images)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Parse `(1 2)(3 4 5)` into 1-based cycles. Commas are accepted as
/// separators inside a cycle.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, FinGroupError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| FinGroupError::Parse(format!("expected '(' in {text:?}")))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| FinGroupError::Parse(format!("unclosed cycle in {text:?}")))?;
        let body = &body_start[..close];
        let points: Vec<usize> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| FinGroupError::Parse(format!("bad point {t:?}"))))
            .collect::<Result<_, _>>()?;
        if points.contains(&0) {
            return Err(FinGroupError::Parse("points are 1-based".into()));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(FinGroupError::Parse(format!("repeated point in ({body})")));
        }
        if points.len() > 1 {
            cycles.push(points);
        }
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Largest point mentioned in a cycle string.
pub fn max_point(text: &str) -> Result<usize, FinGroupError> {
    Ok(parse_cycles(text)?.iter().flatten().copied().max().unwrap_or(1))
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        assert_eq!(self.0.len(), rhs.0.len(), "degree mismatch");
        Perm(rhs.0.iter().map(|&i| self.0[i as usize]).collect())
    }
}

impl Mul for Perm {
    type Output = Perm;

    fn mul(self, rhs: Perm) -> Perm {
        &self * &rhs
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Perm {
    type Err = FinGroupError;

    /// Degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Perm::parse(s, max_point(s)?)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> Perm {
        Perm::parse(s, d).unwrap()
    }

    #[test]
    fn composition_is_right_to_left() {
        // (1 2) then (2 3): 1 -> 1 -> 2? apply (2 3) first: 1 -> 1, then (1 2): 1 -> 2.
        let prod = &p("(1 2)", 3) * &p("(2 3)", 3);
        assert_eq!(prod, p("(1 2 3)", 3));
    }

    #[test]
    fn cycle_round_trip_and_order() {
        let x = p("(1 3 5 2)(4 6)", 6);
        assert_eq!(x.to_string(), "(1 3 5 2)(4 6)");
        assert_eq!(x.order(), 4);
        assert!(x.pow(4).is_identity());
        assert_eq!(&x * &x.inverse(), Perm::identity(6));
        assert_eq!("()".parse::<Perm>().unwrap(), Perm::identity(1));
    }

    #[test]
    fn parse_errors() {
        assert!(Perm::parse("(1 2", 3).is_err());
        assert!(Perm::parse("(1 1)", 3).is_err());
        assert!(Perm::parse("(0 1)", 3).is_err());
        assert!(Perm::parse("(1 4)", 3).is_err());
    }

    #[test]
    fn shift_moves_to_block() {
        let t = p("(1 2)", 2).shift(3, 6);
        assert_eq!(t, p("(4 5)", 6));
    }
}
