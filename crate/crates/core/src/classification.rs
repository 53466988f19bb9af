//! Spherical and affine type recognition, finite orders, Moussong's
//! hyperbolicity criterion and the per-component classifier.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::matrix::{CoxeterMatrix, GenSubset, Label};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassificationError {
    #[error("the system has {0} irreducible components; expected exactly one")]
    NotIrreducible(usize),
    #[error("tolerance collision: words {first:?} and {second:?} round to the same matrix but act differently")]
    ToleranceCollision { first: Vec<usize>, second: Vec<usize> },
}

/// Irreducible finite Coxeter types. `A(2)` and `B(2)` are used for the
/// dihedral groups of order 6 and 8; `I2(m)` only for `m ≥ 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteType {
    A(u32),
    B(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
}

impl FiniteType {
    pub fn rank(self) -> usize {
        match self {
            FiniteType::A(n) | FiniteType::B(n) | FiniteType::D(n) => n as usize,
            FiniteType::E6 => 6,
            FiniteType::E7 => 7,
            FiniteType::E8 => 8,
            FiniteType::F4 | FiniteType::H4 => 4,
            FiniteType::H3 => 3,
            FiniteType::I2(_) => 2,
        }
    }

    /// Group order from the standard table.
    pub fn order(self) -> u128 {
        let fact = |n: u32| (1..=n as u128).product::<u128>();
        match self {
            FiniteType::A(n) => fact(n + 1),
            FiniteType::B(n) => (1u128 << n) * fact(n),
            FiniteType::D(n) => (1u128 << (n - 1)) * fact(n),
            FiniteType::I2(m) => 2 * m as u128,
            FiniteType::F4 => 1152,
            FiniteType::H3 => 120,
            FiniteType::H4 => 14400,
            FiniteType::E6 => 51840,
            FiniteType::E7 => 2_903_040,
            FiniteType::E8 => 696_729_600,
        }
    }

    /// Table orders above this size are not re-derived by element
    /// enumeration in the test suite.
    pub const DESK_VERIFIED_ORDER: u128 = 200;

    pub fn order_desk_verified(self) -> bool {
        self.order() <= Self::DESK_VERIFIED_ORDER
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E6 => f.write_str("E6"),
            FiniteType::E7 => f.write_str("E7"),
            FiniteType::E8 => f.write_str("E8"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::H3 => f.write_str("H3"),
            FiniteType::H4 => f.write_str("H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FromStr for FiniteType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fixed = match s {
            "E6" => Some(FiniteType::E6),
            "E7" => Some(FiniteType::E7),
            "E8" => Some(FiniteType::E8),
            "F4" => Some(FiniteType::F4),
            "H3" => Some(FiniteType::H3),
            "H4" => Some(FiniteType::H4),
            _ => None,
        };
        if let Some(t) = fixed {
            return Ok(t);
        }
        if let Some(m) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            return m.parse().map(FiniteType::I2).map_err(|_| format!("bad type {s}"));
        }
        let (head, num) = s.split_at(1.min(s.len()));
        let n: u32 = num.parse().map_err(|_| format!("bad type {s}"))?;
        match head {
            "A" => Ok(FiniteType::A(n)),
            "B" => Ok(FiniteType::B(n)),
            "D" => Ok(FiniteType::D(n)),
            _ => Err(format!("bad type {s}")),
        }
    }
}

/// Irreducible affine Coxeter types, written `~X` in text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffineType {
    A(u32),
    B(u32),
    C(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl AffineType {
    /// Number of generators (one more than the subscript).
    pub fn rank(self) -> usize {
        match self {
            AffineType::A(n) | AffineType::B(n) | AffineType::C(n) | AffineType::D(n) => n as usize + 1,
            AffineType::E6 => 7,
            AffineType::E7 => 8,
            AffineType::E8 => 9,
            AffineType::F4 => 5,
            AffineType::G2 => 3,
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::A(n) => write!(f, "~A{n}"),
            AffineType::B(n) => write!(f, "~B{n}"),
            AffineType::C(n) => write!(f, "~C{n}"),
            AffineType::D(n) => write!(f, "~D{n}"),
            AffineType::E6 => f.write_str("~E6"),
            AffineType::E7 => f.write_str("~E7"),
            AffineType::E8 => f.write_str("~E8"),
            AffineType::F4 => f.write_str("~F4"),
            AffineType::G2 => f.write_str("~G2"),
        }
    }
}

impl FromStr for AffineType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.strip_prefix('~').ok_or_else(|| format!("bad affine type {s}"))?;
        match body {
            "E6" => return Ok(AffineType::E6),
            "E7" => return Ok(AffineType::E7),
            "E8" => return Ok(AffineType::E8),
            "F4" => return Ok(AffineType::F4),
            "G2" => return Ok(AffineType::G2),
            _ => {}
        }
        let (head, num) = body.split_at(1.min(body.len()));
        let n: u32 = num.parse().map_err(|_| format!("bad affine type {s}"))?;
        match head {
            "A" => Ok(AffineType::A(n)),
            "B" => Ok(AffineType::B(n)),
            "C" => Ok(AffineType::C(n)),
            "D" => Ok(AffineType::D(n)),
            _ => Err(format!("bad affine type {s}")),
        }
    }
}

macro_rules! serde_via_string {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_string!(FiniteType);
serde_via_string!(AffineType);

/// Class of one irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "type")]
pub enum ComponentClass {
    Spherical(FiniteType),
    Affine(AffineType),
    NonElementaryHyperbolic,
    OtherInfinite,
}

impl ComponentClass {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentClass::Spherical(_) => "Spherical",
            ComponentClass::Affine(_) => "Affine",
            ComponentClass::NonElementaryHyperbolic => "NonElementaryHyperbolic",
            ComponentClass::OtherInfinite => "OtherInfinite",
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, ComponentClass::Spherical(_))
    }
}

/// Edges of the COX-diagram on `t` (pairs with `m ≠ 2`).
struct Shape {
    nodes: Vec<usize>,
    edges: Vec<(usize, usize, Label)>,
}

impl Shape {
    fn new(m: &CoxeterMatrix, t: GenSubset) -> Self {
        let nodes = t.to_vec();
        let mut edges = Vec::new();
        for (a, &i) in nodes.iter().enumerate() {
            for &j in &nodes[a + 1..] {
                let l = m.get(i, j);
                if l != Label::Finite(2) {
                    edges.push((i, j, l));
                }
            }
        }
        Shape { nodes, edges }
    }

    fn n(&self) -> usize {
        self.nodes.len()
    }

    fn neighbors(&self, v: usize) -> Vec<(usize, Label)> {
        self.edges
            .iter()
            .filter_map(|&(i, j, l)| {
                if i == v {
                    Some((j, l))
                } else if j == v {
                    Some((i, l))
                } else {
                    None
                }
            })
            .collect()
    }

    fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(i, j, _)| i == v || j == v).count()
    }

    fn all_labels(&self, l: Label) -> bool {
        self.edges.iter().all(|&(_, _, x)| x == l)
    }

    fn has_infinite(&self) -> bool {
        self.edges.iter().any(|&(_, _, l)| l == Label::Infinite)
    }

    /// Walk from `start` away from `prev`; returns the labels and nodes
    /// visited. Stops at a leaf or at a vertex of degree ≥ 3.
    fn walk(&self, start: usize, prev: Option<usize>) -> Vec<(Label, usize)> {
        let mut out = Vec::new();
        let mut cur = start;
        let mut last = prev;
        loop {
            let next: Vec<(usize, Label)> =
                self.neighbors(cur).into_iter().filter(|&(w, _)| Some(w) != last).collect();
            if next.len() != 1 || (last.is_some() && self.degree(cur) > 2) {
                break;
            }
            let (w, l) = next[0];
            out.push((l, w));
            last = Some(cur);
            cur = w;
            if self.degree(cur) > 2 {
                break;
            }
        }
        out
    }

    /// Labels along the path, starting from the endpoint with the smaller
    /// index. Only meaningful for trees with maximum degree ≤ 2.
    fn path_labels(&self) -> Vec<Label> {
        let start = *self.nodes.iter().find(|&&v| self.degree(v) <= 1).expect("path has an endpoint");
        self.walk(start, None).into_iter().map(|(l, _)| l).collect()
    }

    fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n()
    }

    fn max_degree(&self) -> usize {
        self.nodes.iter().map(|&v| self.degree(v)).max().unwrap_or(0)
    }

    fn branch_vertices(&self) -> Vec<usize> {
        self.nodes.iter().copied().filter(|&v| self.degree(v) >= 3).collect()
    }

    /// Arms hanging off a branch vertex, each as the label sequence moving
    /// outward.
    fn arms(&self, b: usize) -> Vec<Vec<(Label, usize)>> {
        self.neighbors(b)
            .into_iter()
            .map(|(w, l)| {
                let mut arm = vec![(l, w)];
                if self.degree(w) <= 2 {
                    arm.extend(self.walk(w, Some(b)));
                }
                arm
            })
            .collect()
    }
}

fn f(m: u32) -> Label {
    Label::Finite(m)
}

/// Finite type of the irreducible subsystem on `t`, if it is spherical.
/// `t` must be non-empty and connected in the COX-diagram.
pub fn spherical_type_within(m: &CoxeterMatrix, t: GenSubset) -> Option<FiniteType> {
    let shape = Shape::new(m, t);
    let n = shape.n() as u32;
    if n == 1 {
        return Some(FiniteType::A(1));
    }
    if shape.has_infinite() || !shape.is_tree() {
        return None;
    }
    if shape.max_degree() <= 2 {
        let labels = shape.path_labels();
        if n == 2 {
            return match labels[0].finite()? {
                3 => Some(FiniteType::A(2)),
                4 => Some(FiniteType::B(2)),
                k => Some(FiniteType::I2(k)),
            };
        }
        let odd: Vec<(usize, Label)> =
            labels.iter().copied().enumerate().filter(|&(_, l)| l != f(3)).collect();
        return match odd.as_slice() {
            [] => Some(FiniteType::A(n)),
            [(pos, l)] => {
                let at_end = *pos == 0 || *pos == labels.len() - 1;
                match (*l, at_end, n) {
                    (Label::Finite(4), true, _) => Some(FiniteType::B(n)),
                    (Label::Finite(4), false, 4) => Some(FiniteType::F4),
                    (Label::Finite(5), true, 3) => Some(FiniteType::H3),
                    (Label::Finite(5), true, 4) => Some(FiniteType::H4),
                    _ => None,
                }
            }
            _ => None,
        };
    }
    let branches = shape.branch_vertices();
    if branches.len() != 1 || shape.max_degree() != 3 || !shape.all_labels(f(3)) {
        return None;
    }
    let mut lens: Vec<usize> = shape.arms(branches[0]).iter().map(Vec::len).collect();
    lens.sort_unstable();
    match lens.as_slice() {
        [1, 1, _] => Some(FiniteType::D(n)),
        [1, 2, 2] => Some(FiniteType::E6),
        [1, 2, 3] => Some(FiniteType::E7),
        [1, 2, 4] => Some(FiniteType::E8),
        _ => None,
    }
}

/// Affine type of the irreducible subsystem on `t`, if any.
pub fn affine_type_within(m: &CoxeterMatrix, t: GenSubset) -> Option<AffineType> {
    let shape = Shape::new(m, t);
    let n = shape.n();
    if n == 2 {
        return (shape.edges.first().map(|e| e.2) == Some(Label::Infinite)).then_some(AffineType::A(1));
    }
    if n < 3 || shape.has_infinite() {
        return None;
    }
    if shape.edges.len() == n && shape.max_degree() == 2 && shape.all_labels(f(3)) {
        // Connected, n edges, all degrees 2: a single cycle.
        return Some(AffineType::A(n as u32 - 1));
    }
    if !shape.is_tree() {
        return None;
    }
    let rank = n as u32 - 1;
    if shape.max_degree() <= 2 {
        let labels = shape.path_labels();
        let inner_threes = labels.len() > 2 && labels[1..labels.len() - 1].iter().all(|&l| l == f(3));
        if labels.first() == Some(&f(4)) && labels.last() == Some(&f(4)) && (labels.len() == 2 || inner_threes)
        {
            return Some(AffineType::C(rank));
        }
        if labels == [f(3), f(6)] || labels == [f(6), f(3)] {
            return Some(AffineType::G2);
        }
        if labels == [f(3), f(3), f(4), f(3)] || labels == [f(3), f(4), f(3), f(3)] {
            return Some(AffineType::F4);
        }
        return None;
    }
    let branches = shape.branch_vertices();
    if shape.max_degree() == 4 {
        return (n == 5 && shape.all_labels(f(3))).then_some(AffineType::D(4));
    }
    if shape.max_degree() > 4 {
        return None;
    }
    match branches.as_slice() {
        [b] => {
            let arms = shape.arms(*b);
            if shape.all_labels(f(3)) {
                let mut lens: Vec<usize> = arms.iter().map(Vec::len).collect();
                lens.sort_unstable();
                return match lens.as_slice() {
                    [2, 2, 2] => Some(AffineType::E6),
                    [1, 3, 3] => Some(AffineType::E7),
                    [1, 2, 5] => Some(AffineType::E8),
                    _ => None,
                };
            }
            // ~B: two short arms of label 3 and one arm ending in a 4.
            let is_short = |a: &Vec<(Label, usize)>| a.len() == 1 && a[0].0 == f(3);
            let long: Vec<&Vec<(Label, usize)>> = arms.iter().filter(|a| !is_short(a)).collect();
            if let [tail] = long.as_slice() {
                let k = tail.len();
                let ok = tail[k - 1].0 == f(4) && tail[..k - 1].iter().all(|&(l, _)| l == f(3));
                if ok {
                    return Some(AffineType::B(rank));
                }
            }
            None
        }
        [b1, b2] => {
            if !shape.all_labels(f(3)) {
                return None;
            }
            let forked = |b: usize| shape.neighbors(b).iter().filter(|&&(w, _)| shape.degree(w) == 1).count() == 2;
            (forked(*b1) && forked(*b2) && n >= 6).then_some(AffineType::D(rank))
        }
        _ => None,
    }
}

fn expect_irreducible(m: &CoxeterMatrix) -> Result<(), ClassificationError> {
    let k = m.irreducible_components().len();
    if k == 1 {
        Ok(())
    } else {
        Err(ClassificationError::NotIrreducible(k))
    }
}

/// Finite type of an irreducible system, or `None` if the group is infinite.
pub fn spherical_type(m: &CoxeterMatrix) -> Result<Option<FiniteType>, ClassificationError> {
    expect_irreducible(m)?;
    Ok(spherical_type_within(m, m.full()))
}

/// Affine type of an irreducible system.
pub fn affine_type(m: &CoxeterMatrix) -> Result<Option<AffineType>, ClassificationError> {
    expect_irreducible(m)?;
    Ok(affine_type_within(m, m.full()))
}

pub fn finite_order(t: FiniteType) -> u128 {
    t.order()
}

/// Finite types of the irreducible factors of `t`, or `None` if `⟨t⟩` is
/// infinite.
pub fn spherical_factors(m: &CoxeterMatrix, t: GenSubset) -> Option<Vec<(GenSubset, FiniteType)>> {
    m.components_within(t)
        .into_iter()
        .map(|c| spherical_type_within(m, c).map(|ty| (c, ty)))
        .collect()
}

/// True iff the special subgroup on `t` is finite. The empty set is spherical.
pub fn is_spherical(m: &CoxeterMatrix, t: GenSubset) -> bool {
    spherical_factors(m, t).is_some()
}

/// Order of the special subgroup on `t` when finite.
pub fn spherical_order(m: &CoxeterMatrix, t: GenSubset) -> Option<u128> {
    spherical_factors(m, t).map(|fs| fs.iter().map(|&(_, ty)| ty.order()).product())
}

/// All spherical subsets of `within`, sorted by size then lexicographically.
pub fn spherical_subsets(m: &CoxeterMatrix, within: GenSubset) -> Vec<GenSubset> {
    let mut out = vec![GenSubset::EMPTY];
    let mut stack = vec![GenSubset::EMPTY];
    while let Some(s) = stack.pop() {
        let floor = s.max().map_or(0, |x| x + 1);
        for i in within.iter().filter(|&i| i >= floor) {
            let t = s.insert(i);
            if is_spherical(m, t) {
                out.push(t);
                stack.push(t);
            }
        }
    }
    out.sort_by_key(|t| t.size_lex_key());
    out
}

/// Inclusion-minimal non-spherical subsets of `within`, sorted by size then
/// lexicographically. Each is irreducible, and every affine subsystem is one
/// of them.
pub fn minimal_nonspherical_subsets(m: &CoxeterMatrix, within: GenSubset) -> Vec<GenSubset> {
    let family = spherical_subsets(m, within);
    let lookup: HashSet<GenSubset> = family.iter().copied().collect();
    let mut found = HashSet::new();
    for &s in &family {
        for i in within.difference(s).iter() {
            let t = s.insert(i);
            if !lookup.contains(&t) && t.iter().all(|j| lookup.contains(&t.remove(j))) {
                found.insert(t);
            }
        }
    }
    let mut out: Vec<GenSubset> = found.into_iter().collect();
    out.sort_by_key(|t| t.size_lex_key());
    out
}

/// Why Moussong's criterion fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MoussongWitness {
    /// An irreducible affine subsystem of rank at least 3.
    AffineSubsystem { generators: GenSubset, affine_type: AffineType },
    /// Disjoint, mutually commuting subsets generating infinite groups.
    CommutingInfinitePair { first: GenSubset, second: GenSubset },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoussongReport {
    pub hyperbolic: bool,
    pub witness: Option<MoussongWitness>,
}

/// Moussong's criterion restricted to the generators in `within`.
pub fn moussong_within(m: &CoxeterMatrix, within: GenSubset) -> MoussongReport {
    let minimal = minimal_nonspherical_subsets(m, within);
    for &t in &minimal {
        if t.len() >= 3 {
            if let Some(ty) = affine_type_within(m, t) {
                return MoussongReport {
                    hyperbolic: false,
                    witness: Some(MoussongWitness::AffineSubsystem { generators: t, affine_type: ty }),
                };
            }
        }
    }
    // A commuting infinite pair can be shrunk to one whose first member is
    // minimal non-spherical; its partner lives among the generators that
    // commute with all of it.
    for &t1 in &minimal {
        let commuting = GenSubset::from_indices(
            within
                .difference(t1)
                .iter()
                .filter(|&w| t1.iter().all(|t| m.get(w, t) == Label::Finite(2))),
        );
        if !is_spherical(m, commuting) {
            let t2 = *minimal
                .iter()
                .find(|c| c.is_subset(commuting))
                .expect("a non-spherical set contains a minimal one");
            return MoussongReport {
                hyperbolic: false,
                witness: Some(MoussongWitness::CommutingInfinitePair { first: t1, second: t2 }),
            };
        }
    }
    MoussongReport { hyperbolic: true, witness: None }
}

/// Moussong's criterion on the whole system.
pub fn moussong_hyperbolic(m: &CoxeterMatrix) -> MoussongReport {
    moussong_within(m, m.full())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub generators: GenSubset,
    #[serde(flatten)]
    pub class: ComponentClass,
    #[serde(skip_serializing_if = "Option::is_none", default, with = "crate::serde_order::option")]
    pub order: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub components: Vec<ComponentReport>,
    /// Every irreducible component is finite, affine or non-elementary
    /// hyperbolic.
    pub theorem1_hypothesis: bool,
}

impl Classification {
    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| !c.class.is_infinite())
    }

    pub fn order(&self) -> Option<u128> {
        self.components.iter().map(|c| c.order).product()
    }
}

/// Class of the irreducible component on `t`.
pub fn classify_component(m: &CoxeterMatrix, t: GenSubset) -> ComponentClass {
    if let Some(ty) = spherical_type_within(m, t) {
        ComponentClass::Spherical(ty)
    } else if let Some(ty) = affine_type_within(m, t) {
        ComponentClass::Affine(ty)
    } else if moussong_within(m, t).hyperbolic {
        ComponentClass::NonElementaryHyperbolic
    } else {
        ComponentClass::OtherInfinite
    }
}

pub fn classify_components(m: &CoxeterMatrix) -> Classification {
    let components: Vec<ComponentReport> = m
        .irreducible_components()
        .into_iter()
        .map(|t| {
            let class = classify_component(m, t);
            let order = match class {
                ComponentClass::Spherical(ty) => Some(ty.order()),
                _ => None,
            };
            ComponentReport { generators: t, class, order }
        })
        .collect();
    let theorem1_hypothesis = components.iter().all(|c| c.class != ComponentClass::OtherInfinite);
    Classification { components, theorem1_hypothesis }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxFiniteSpecial {
    /// Largest order of a finite special subgroup.
    #[serde(with = "crate::serde_order")]
    pub order: u128,
    /// Inclusion-maximal spherical subsets.
    pub maximal_sphericals: Vec<GenSubset>,
}

/// The maximal spherical subsets and the largest finite special order.
pub fn max_finite_special_order(m: &CoxeterMatrix) -> MaxFiniteSpecial {
    let family = spherical_subsets(m, m.full());
    let lookup: HashSet<GenSubset> = family.iter().copied().collect();
    let mut maximal: Vec<GenSubset> = family
        .iter()
        .copied()
        .filter(|&s| m.full().difference(s).iter().all(|i| !lookup.contains(&s.insert(i))))
        .collect();
    maximal.sort_by_key(|t| t.to_vec());
    let order = maximal
        .iter()
        .map(|&s| spherical_order(m, s).expect("spherical"))
        .max()
        .unwrap_or(1);
    MaxFiniteSpecial { order, maximal_sphericals: maximal }
}
