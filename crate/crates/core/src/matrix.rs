//! Coxeter matrices, generator subsets and the two diagram conventions.
//!
//! Generators are 0-based everywhere inside the library. Text input and all
//! serialized output use 1-based generator numbers; the conversion happens in
//! [`parse_system`], in the `Display` impls and in the serde impls of
//! [`GenSubset`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported rank. Several analyses enumerate subsets of the
/// generating set, so the rank is kept small enough for a `u32` mask.
pub const MAX_RANK: usize = 24;

/// An entry `m(s, t)` of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub fn is_finite(self) -> bool {
        matches!(self, Label::Finite(_))
    }

    /// `Some(m)` for finite labels.
    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }

    /// Even or infinite.
    pub fn is_even_or_infinite(self) -> bool {
        match self {
            Label::Finite(m) => m % 2 == 0,
            Label::Infinite => true,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => serializer.serialize_u32(*m),
            Label::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(m) => Ok(Label::Finite(m)),
            Raw::Text(s) if s == "inf" => Ok(Label::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("bad label {s:?}"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

/// A subset of the generating set, stored as a bit mask.
///
/// The mask is not tied to a matrix at the type level; operations that take
/// both check the range with [`CoxeterMatrix::check_subset`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSubset(pub u32);

impl GenSubset {
    pub const EMPTY: GenSubset = GenSubset(0);

    pub fn full(rank: usize) -> Self {
        debug_assert!(rank <= MAX_RANK);
        GenSubset(if rank == 32 { u32::MAX } else { (1u32 << rank) - 1 })
    }

    pub fn singleton(i: usize) -> Self {
        GenSubset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        GenSubset(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// Builds a subset from 1-based generator numbers.
    pub fn from_one_based<I: IntoIterator<Item = usize>>(numbers: I) -> Self {
        Self::from_indices(numbers.into_iter().map(|k| k - 1))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn insert(self, i: usize) -> Self {
        GenSubset(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        GenSubset(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        GenSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        GenSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        GenSubset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// Ascending 0-based indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Order used for deterministic tie-breaking: size first, then the sorted
    /// index list lexicographically.
    pub fn size_lex_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.to_vec())
    }
}

impl fmt::Display for GenSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for GenSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GenSubset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let numbers = Vec::<usize>::deserialize(deserializer)?;
        if numbers.iter().any(|&k| k == 0 || k > MAX_RANK) {
            return Err(serde::de::Error::custom("generator numbers are 1-based"));
        }
        Ok(GenSubset::from_one_based(numbers))
    }
}

/// A validated Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    rank: usize,
    entries: Vec<Label>,
}

impl CoxeterMatrix {
    /// Validates and builds a matrix from row-major entries.
    pub fn new(rank: usize, entries: Vec<Label>) -> Result<Self, MatrixError> {
        if rank > MAX_RANK {
            return Err(MatrixError::InvalidMatrix(format!(
                "rank {rank} exceeds the supported maximum {MAX_RANK}"
            )));
        }
        if entries.len() != rank * rank {
            return Err(MatrixError::InvalidMatrix(format!(
                "expected {} entries, got {}",
                rank * rank,
                entries.len()
            )));
        }
        for i in 0..rank {
            for j in 0..rank {
                let m = entries[i * rank + j];
                if m == Label::Finite(0) {
                    return Err(MatrixError::InvalidMatrix(format!(
                        "entry ({}, {}) is 0; write inf for an infinite label",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && m != Label::Finite(1) {
                    return Err(MatrixError::InvalidMatrix(format!(
                        "diagonal entry ({0}, {0}) must be 1",
                        i + 1
                    )));
                }
                if i != j && m == Label::Finite(1) {
                    return Err(MatrixError::InvalidMatrix(format!(
                        "off-diagonal entry ({}, {}) is 1",
                        i + 1,
                        j + 1
                    )));
                }
                if m != entries[j * rank + i] {
                    return Err(MatrixError::InvalidMatrix(format!(
                        "entries ({0}, {1}) and ({1}, {0}) differ",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(CoxeterMatrix { rank, entries })
    }

    pub fn from_rows(rows: &[Vec<Label>]) -> Result<Self, MatrixError> {
        let rank = rows.len();
        if rows.iter().any(|r| r.len() != rank) {
            return Err(MatrixError::InvalidMatrix("matrix is not square".into()));
        }
        Self::new(rank, rows.concat())
    }

    /// Rank `n` with all off-diagonal entries equal to `label`.
    pub fn uniform(rank: usize, label: Label) -> Self {
        let mut entries = vec![label; rank * rank];
        for i in 0..rank {
            entries[i * rank + i] = Label::Finite(1);
        }
        Self::new(rank, entries).expect("uniform matrix is valid")
    }

    /// The universal Coxeter system of the given rank (all labels infinite).
    pub fn universal(rank: usize) -> Self {
        Self::uniform(rank, Label::Infinite)
    }

    /// Rank 3 with `m(1,2) = p`, `m(1,3) = q`, `m(2,3) = r`.
    pub fn triangle(p: Label, q: Label, r: Label) -> Result<Self, MatrixError> {
        let one = Label::Finite(1);
        Self::from_rows(&[vec![one, p, q], vec![p, one, r], vec![q, r, one]])
    }

    /// Rank 2 with `m(1,2) = m`.
    pub fn dihedral(m: Label) -> Result<Self, MatrixError> {
        let one = Label::Finite(1);
        Self::from_rows(&[vec![one, m], vec![m, one]])
    }

    /// All off-diagonal entries 2 except those listed (0-based pairs).
    pub fn with_entries(rank: usize, entries: &[(usize, usize, Label)]) -> Result<Self, MatrixError> {
        let mut m = vec![Label::Finite(2); rank * rank];
        for i in 0..rank {
            m[i * rank + i] = Label::Finite(1);
        }
        for &(i, j, l) in entries {
            if i >= rank || j >= rank {
                return Err(MatrixError::IndexOutOfRange { index: i.max(j), rank });
            }
            m[i * rank + j] = l;
            m[j * rank + i] = l;
        }
        Self::new(rank, m)
    }

    /// Block-diagonal sum: generators of `other` follow those of `self`,
    /// and cross entries are 2.
    pub fn direct_sum(&self, other: &CoxeterMatrix) -> Result<Self, MatrixError> {
        let n = self.rank + other.rank;
        let mut entries = Vec::new();
        for i in 0..self.rank {
            entries.push((0..self.rank).map(|j| (i, j, self.get(i, j))).collect::<Vec<_>>());
        }
        let mut list: Vec<(usize, usize, Label)> = entries.concat();
        for i in 0..other.rank {
            for j in 0..other.rank {
                list.push((self.rank + i, self.rank + j, other.get(i, j)));
            }
        }
        list.retain(|&(i, j, _)| i != j);
        Self::with_entries(n, &list)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> Label {
        self.entries[i * self.rank + j]
    }

    pub fn full(&self) -> GenSubset {
        GenSubset::full(self.rank)
    }

    pub fn rows(&self) -> Vec<Vec<Label>> {
        self.entries.chunks(self.rank.max(1)).take(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn check_subset(&self, t: GenSubset) -> Result<(), MatrixError> {
        match t.max() {
            Some(i) if i >= self.rank => Err(MatrixError::IndexOutOfRange { index: i, rank: self.rank }),
            _ => Ok(()),
        }
    }

    /// Off-diagonal entries `(i, j, m)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Label)> + '_ {
        (0..self.rank).flat_map(move |i| (i + 1..self.rank).map(move |j| (i, j, self.get(i, j))))
    }

    /// True iff every off-diagonal entry is even or infinite.
    pub fn is_even(&self) -> bool {
        self.pairs().all(|(_, _, m)| m.is_even_or_infinite())
    }

    /// Evenness of the special subsystem on `t`.
    pub fn is_even_on(&self, t: GenSubset) -> bool {
        self.pairs()
            .filter(|&(i, j, _)| t.contains(i) && t.contains(j))
            .all(|(_, _, m)| m.is_even_or_infinite())
    }

    /// True iff no off-diagonal entry is infinite.
    pub fn is_two_spherical(&self) -> bool {
        self.pairs().all(|(_, _, m)| m.is_finite())
    }

    /// Right-angled: every off-diagonal entry is 2 or infinite.
    pub fn is_right_angled(&self) -> bool {
        self.pairs().all(|(_, _, m)| matches!(m, Label::Finite(2) | Label::Infinite))
    }

    /// Connected components of the COX-diagram: the partition into
    /// irreducible factors, ordered by smallest generator.
    pub fn irreducible_components(&self) -> Vec<GenSubset> {
        DiagramGraph::cox(self).components(self.full())
    }

    /// Irreducible components of the special subsystem on `t`.
    pub fn components_within(&self, t: GenSubset) -> Vec<GenSubset> {
        DiagramGraph::cox(self).components(t)
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible_components().len() == 1
    }

    /// The special subsystem on `t`, with the index translation kept.
    pub fn induced_system(&self, t: GenSubset) -> Result<InducedSystem, MatrixError> {
        self.check_subset(t)?;
        let indices = t.to_vec();
        let k = indices.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in &indices {
            for &j in &indices {
                entries.push(self.get(i, j));
            }
        }
        let matrix = CoxeterMatrix::new(k, entries)?;
        Ok(InducedSystem { matrix, indices })
    }

    /// Render in the `rank ...; m i j = k;` input grammar (entries equal to 2
    /// are omitted).
    pub fn to_system_text(&self) -> String {
        let mut out = format!("rank {}", self.rank);
        for (i, j, m) in self.pairs() {
            if m != Label::Finite(2) {
                out.push_str(&format!("; m {} {} = {}", i + 1, j + 1, m));
            }
        }
        out
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_system_text())
    }
}

impl FromStr for CoxeterMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_system(s)
    }
}

impl Serialize for CoxeterMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoxeterMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Label>>::deserialize(deserializer)?;
        CoxeterMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// A special subsystem together with the map from its generators back to the
/// ambient generators (`indices[k]` is the ambient index of local generator `k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSystem {
    pub matrix: CoxeterMatrix,
    pub indices: Vec<usize>,
}

impl InducedSystem {
    /// Translate a local subset back to ambient generators.
    pub fn lift(&self, local: GenSubset) -> GenSubset {
        GenSubset::from_indices(local.iter().map(|k| self.indices[k]))
    }
}

/// Which pairs of generators are joined by an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Edge iff `m < ∞`; separators of this graph give amalgam splittings.
    Fin,
    /// Edge iff `m ≠ 2`; components are the irreducible factors.
    Cox,
}

/// Undirected graph on the generators derived from a matrix under one
/// convention.
#[derive(Clone, Debug)]
pub struct DiagramGraph {
    convention: Convention,
    adjacency: Vec<GenSubset>,
}

impl DiagramGraph {
    pub fn fin(m: &CoxeterMatrix) -> Self {
        Self::build(m, Convention::Fin)
    }

    pub fn cox(m: &CoxeterMatrix) -> Self {
        Self::build(m, Convention::Cox)
    }

    fn build(m: &CoxeterMatrix, convention: Convention) -> Self {
        let mut adjacency = vec![GenSubset::EMPTY; m.rank()];
        for (i, j, label) in m.pairs() {
            let edge = match convention {
                Convention::Fin => label.is_finite(),
                Convention::Cox => label != Label::Finite(2),
            };
            if edge {
                adjacency[i] = adjacency[i].insert(j);
                adjacency[j] = adjacency[j].insert(i);
            }
        }
        DiagramGraph { convention, adjacency }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn neighbors(&self, i: usize) -> GenSubset {
        self.adjacency[i]
    }

    /// Components of the subgraph induced on `within`, ordered by smallest
    /// vertex.
    pub fn components(&self, within: GenSubset) -> Vec<GenSubset> {
        let mut remaining = within;
        let mut out = Vec::new();
        while let Some(start) = remaining.min() {
            let mut comp = GenSubset::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = GenSubset::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adjacency[v]);
                }
                next = next.intersection(within).difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            remaining = remaining.difference(comp);
            out.push(comp);
        }
        out
    }
}

/// Parses a system description.
///
/// Two forms are accepted:
///
/// ```text
/// rank 3; m 1 2 = 4; m 1 3 = 4; m 2 3 = 2
/// matrix [[1,4,4],[4,1,2],[4,2,1]]
/// ```
///
/// Generators are numbered from 1. Unlisted off-diagonal entries default to 2.
/// `0` is rejected; infinity is written `inf`.
pub fn parse_system(text: &str) -> Result<CoxeterMatrix, MatrixError> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix("matrix") {
        return parse_matrix_form(rest);
    }
    let mut rank: Option<usize> = None;
    let mut assigned: Vec<(usize, usize, Label)> = Vec::new();
    for stmt in trimmed.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let tokens: Vec<&str> = stmt.split_whitespace().collect();
        match tokens.first().copied() {
            Some("rank") => {
                if rank.is_some() {
                    return Err(MatrixError::Parse("rank given twice".into()));
                }
                if tokens.len() != 2 {
                    return Err(MatrixError::Parse(format!("expected `rank <n>`, got `{stmt}`")));
                }
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| MatrixError::Parse(format!("bad rank `{}`", tokens[1])))?;
                if n == 0 {
                    return Err(MatrixError::InvalidMatrix("rank must be positive".into()));
                }
                rank = Some(n);
            }
            Some("m") => {
                let n = rank.ok_or_else(|| MatrixError::Parse("`m` entry before `rank`".into()))?;
                // Accept `m i j = k` and `m i j k`.
                let rest: Vec<&str> = tokens[1..].iter().copied().filter(|t| *t != "=").collect();
                if rest.len() != 3 {
                    return Err(MatrixError::Parse(format!("expected `m <i> <j> = <k|inf>`, got `{stmt}`")));
                }
                let i = parse_generator(rest[0], n)?;
                let j = parse_generator(rest[1], n)?;
                let label = parse_label(rest[2])?;
                if let Some(&(_, _, prev)) = assigned
                    .iter()
                    .find(|&&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i))
                {
                    if prev != label {
                        return Err(MatrixError::InvalidMatrix(format!(
                            "conflicting values for m {} {}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
                assigned.push((i, j, label));
            }
            Some(other) => return Err(MatrixError::Parse(format!("unknown statement `{other}`"))),
            None => {}
        }
    }
    let n = rank.ok_or_else(|| MatrixError::Parse("missing `rank <n>`".into()))?;
    if n > MAX_RANK {
        return Err(MatrixError::InvalidMatrix(format!(
            "rank {n} exceeds the supported maximum {MAX_RANK}"
        )));
    }
    let mut entries = vec![Label::Finite(2); n * n];
    for i in 0..n {
        entries[i * n + i] = Label::Finite(1);
    }
    for (i, j, l) in assigned {
        entries[i * n + j] = l;
        entries[j * n + i] = l;
    }
    CoxeterMatrix::new(n, entries)
}

fn parse_generator(tok: &str, rank: usize) -> Result<usize, MatrixError> {
    let k: usize = tok
        .parse()
        .map_err(|_| MatrixError::Parse(format!("bad generator number `{tok}`")))?;
    if k == 0 || k > rank {
        return Err(MatrixError::IndexOutOfRange { index: k.saturating_sub(1), rank });
    }
    Ok(k - 1)
}

fn parse_label(tok: &str) -> Result<Label, MatrixError> {
    match tok {
        "inf" | "∞" | "infinity" => Ok(Label::Infinite),
        _ => tok
            .parse::<u32>()
            .map(Label::Finite)
            .map_err(|_| MatrixError::Parse(format!("bad label `{tok}`"))),
    }
}

fn parse_matrix_form(rest: &str) -> Result<CoxeterMatrix, MatrixError> {
    let body = rest.trim().trim_end_matches(';').trim();
    let inner = body
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| MatrixError::Parse("matrix must be written [[...],...]".into()))?;
    let mut rows = Vec::new();
    let mut chars = inner.trim();
    while !chars.is_empty() {
        let open = chars
            .strip_prefix('[')
            .ok_or_else(|| MatrixError::Parse(format!("expected `[` at `{chars}`")))?;
        let close = open
            .find(']')
            .ok_or_else(|| MatrixError::Parse("unterminated row".into()))?;
        let row: Vec<Label> = open[..close]
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(parse_label)
            .collect::<Result<_, _>>()?;
        rows.push(row);
        chars = open[close + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    if rows.is_empty() {
        return Err(MatrixError::InvalidMatrix("rank must be positive".into()));
    }
    CoxeterMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(m: u32) -> Label {
        Label::Finite(m)
    }

    #[test]
    fn parses_triangle_442() {
        let m = parse_system("rank 3; m 1 2 = 4; m 1 3 = 4; m 2 3 = 2").unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.get(0, 1), fin(4));
        assert_eq!(m.get(0, 2), fin(4));
        assert_eq!(m.get(1, 2), fin(2));
        assert_eq!(m.get(2, 0), fin(4));
    }

    #[test]
    fn parses_rank_one() {
        let m = parse_system("rank 1").unwrap();
        assert_eq!(m.rows(), vec![vec![fin(1)]]);
    }

    #[test]
    fn rejects_off_diagonal_one() {
        assert!(matches!(
            parse_system("rank 2; m 1 2 = 1"),
            Err(MatrixError::InvalidMatrix(_))
        ));
    }

    #[test]
    fn rejects_zero_and_syntax_errors() {
        assert!(matches!(parse_system("rank 2; m 1 2 = 0"), Err(MatrixError::InvalidMatrix(_))));
        assert!(matches!(parse_system("rank 2; m 1 2 = x"), Err(MatrixError::Parse(_))));
        assert!(matches!(parse_system("m 1 2 = 3"), Err(MatrixError::Parse(_))));
        assert!(matches!(parse_system("rank 2; m 1 3 = 3"), Err(MatrixError::IndexOutOfRange { .. })));
        assert!(matches!(parse_system("rank 2; m 1 1 = 3"), Err(MatrixError::InvalidMatrix(_))));
        assert!(matches!(
            parse_system("rank 2; m 1 2 = 3; m 2 1 = 4"),
            Err(MatrixError::InvalidMatrix(_))
        ));
    }

    #[test]
    fn matrix_form_round_trips() {
        let m = parse_system("matrix [[1,4,4],[4,1,2],[4,2,1]]").unwrap();
        assert_eq!(m, parse_system("rank 3; m 1 2 = 4; m 1 3 = 4").unwrap());
        let inf = parse_system("matrix [[1, inf],[inf, 1]]").unwrap();
        assert_eq!(inf.get(0, 1), Label::Infinite);
        assert!(matches!(parse_system("matrix [[1,0],[0,1]]"), Err(MatrixError::InvalidMatrix(_))));
        assert!(matches!(parse_system("matrix [[1,3],[4,1]]"), Err(MatrixError::InvalidMatrix(_))));
        assert_eq!(parse_system(&m.to_system_text()).unwrap(), m);
    }

    #[test]
    fn components_examples() {
        let t442 = parse_system("rank 3; m 1 2 = 4; m 1 3 = 4").unwrap();
        assert_eq!(t442.irreducible_components(), vec![GenSubset::from_one_based([1, 2, 3])]);

        let two_lines = parse_system("rank 4; m 1 2 = inf; m 3 4 = inf").unwrap();
        assert_eq!(
            two_lines.irreducible_components(),
            vec![GenSubset::from_one_based([1, 2]), GenSubset::from_one_based([3, 4])]
        );

        let a1 = parse_system("rank 1").unwrap();
        assert_eq!(a1.irreducible_components(), vec![GenSubset::from_one_based([1])]);
    }

    #[test]
    fn evenness_and_two_sphericity() {
        let w3 = CoxeterMatrix::universal(3);
        assert!(w3.is_even());
        assert!(!w3.is_two_spherical());
        let t442 = parse_system("rank 3; m 1 2 = 4; m 1 3 = 4").unwrap();
        assert!(t442.is_even());
        assert!(t442.is_two_spherical());
        let pgl = parse_system("rank 3; m 1 3 = 3; m 2 3 = inf").unwrap();
        assert!(!pgl.is_even());
        assert!(!pgl.is_two_spherical());
        assert!(parse_system("rank 1").unwrap().is_two_spherical());
    }

    #[test]
    fn induced_system_examples() {
        let t442 = parse_system("rank 3; m 1 2 = 4; m 1 3 = 4").unwrap();
        let sub = t442.induced_system(GenSubset::from_one_based([1, 2])).unwrap();
        assert_eq!(sub.matrix, CoxeterMatrix::dihedral(fin(4)).unwrap());
        assert_eq!(sub.indices, vec![0, 1]);
        assert_eq!(t442.induced_system(t442.full()).unwrap().matrix, t442);
        assert_eq!(t442.induced_system(GenSubset::EMPTY).unwrap().matrix.rank(), 0);
        assert!(matches!(
            t442.induced_system(GenSubset::singleton(5)),
            Err(MatrixError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn fin_and_cox_graphs_differ() {
        let pgl = parse_system("rank 3; m 1 3 = 3; m 2 3 = inf").unwrap();
        let fin_g = DiagramGraph::fin(&pgl);
        let cox_g = DiagramGraph::cox(&pgl);
        assert_eq!(fin_g.neighbors(0), GenSubset::from_indices([1, 2]));
        assert_eq!(cox_g.neighbors(0), GenSubset::from_indices([2]));
        assert_eq!(fin_g.components(GenSubset::from_indices([1, 2])).len(), 2);
    }

    #[test]
    fn label_serde() {
        let json = serde_json::to_string(&vec![Label::Finite(3), Label::Infinite]).unwrap();
        assert_eq!(json, "[3,\"inf\"]");
        let back: Vec<Label> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Label::Finite(3), Label::Infinite]);
    }
}
