//! Finite permutation groups: closure, normalizers, normal closures, the
//! commutator operator `⋄`, automorphism search and permutation models of
//! spherical Coxeter systems.

mod aut;
mod model;
mod modp;
mod perm;

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use aut::{automorphism_group, find_outer_automorphism, AutomorphismGroup, OuterWitness, MAX_AUT_GROUP_ORDER, MAX_AUTOMORPHISMS};
pub use model::{coxeter_perm_model, PermModel};
pub use modp::{matrix_mod_p_check, Mat2, MatExpr, MatrixClaim};
pub use perm::{max_point, parse_cycles, Perm};

/// Default cap on materialized group orders.
pub const DEFAULT_ORDER_BOUND: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinGroupError {
    #[error("group order exceeds the bound {bound}")]
    OrderBoundExceeded { bound: usize },
    #[error("conjugation moves a marked element outside the marked set")]
    NotInvariant,
    #[error("matrix is not invertible mod {p}")]
    NotInvertible { p: u64 },
    #[error("no permutation model for type {0}")]
    UnsupportedType(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("permutations of degree {0} and {1} cannot be combined")]
    DegreeMismatch(usize, usize),
}

/// A permutation group given by generators; the element set is computed
/// once on demand.
#[derive(Debug, Serialize, Deserialize)]
pub struct FinGroup {
    degree: usize,
    generators: Vec<Perm>,
    #[serde(skip)]
    elements: OnceLock<Vec<Perm>>,
}

impl Clone for FinGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        FinGroup { degree: self.degree, generators: self.generators.clone(), elements }
    }
}

impl FinGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, FinGroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(FinGroupError::DegreeMismatch(degree, g.degree()));
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(FinGroup { degree, generators, elements: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        FinGroup { degree, generators: Vec::new(), elements: OnceLock::new() }
    }

    /// Parse generators in cycle notation; the degree is the largest point
    /// mentioned unless `degree` is given.
    pub fn parse(generators: &[&str], degree: Option<usize>) -> Result<Self, FinGroupError> {
        let d = match degree {
            Some(d) => d,
            None => generators.iter().map(|g| max_point(g)).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(1),
        };
        let gens = generators.iter().map(|g| Perm::parse(g, d)).collect::<Result<_, _>>()?;
        FinGroup::new(d, gens)
    }

    /// Subgroup with a known element set; generators are chosen greedily.
    pub fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Self {
        elements.sort();
        elements.dedup();
        let mut gens: Vec<Perm> = Vec::new();
        let mut current: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
        for e in &elements {
            if !current.contains(e) {
                gens.push(e.clone());
                current = closure_set(degree, &gens, usize::MAX).expect("unbounded").into_iter().collect();
            }
        }
        let group = FinGroup { degree, generators: gens, elements: OnceLock::new() };
        let _ = group.elements.set(elements);
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    /// All elements, sorted. Fails if the order exceeds `bound`.
    pub fn elements(&self, bound: usize) -> Result<&[Perm], FinGroupError> {
        if let Some(e) = self.elements.get() {
            if e.len() > bound {
                return Err(FinGroupError::OrderBoundExceeded { bound });
            }
            return Ok(e);
        }
        let mut e = closure_set(self.degree, &self.generators, bound)?;
        e.sort();
        Ok(self.elements.get_or_init(|| e))
    }

    pub fn order(&self, bound: usize) -> Result<usize, FinGroupError> {
        Ok(self.elements(bound)?.len())
    }

    pub fn contains(&self, p: &Perm, bound: usize) -> Result<bool, FinGroupError> {
        Ok(self.elements(bound)?.binary_search(p).is_ok())
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| self.generators.iter().all(|b| a * b == b * a))
    }

    /// Orbits of the group on points, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        point_orbits(self.degree, &self.generators)
    }

    /// Conjugacy class of `x` under this group.
    pub fn conjugacy_class(&self, x: &Perm) -> Vec<Perm> {
        let mut seen: HashSet<Perm> = HashSet::from([x.clone()]);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(y) = queue.pop_front() {
            for g in &self.generators {
                let z = g.conjugate(&y);
                if seen.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
        let mut out: Vec<Perm> = seen.into_iter().collect();
        out.sort();
        out
    }

    pub fn same_subgroup(&self, other: &FinGroup, bound: usize) -> Result<bool, FinGroupError> {
        Ok(self.elements(bound)? == other.elements(bound)?)
    }
}

/// BFS closure of `generators`.
pub fn closure_set(degree: usize, generators: &[Perm], bound: usize) -> Result<Vec<Perm>, FinGroupError> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g * &x;
            if !seen.contains(&y) {
                if seen.len() >= bound {
                    return Err(FinGroupError::OrderBoundExceeded { bound });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Extend `gens[k] ↦ images[k]` to a map on `⟨gens⟩`; `None` unless it is
/// a well-defined injective homomorphism.
pub fn homomorphism_from_generators(
    source_degree: usize,
    target_degree: usize,
    gens: &[Perm],
    images: &[Perm],
    bound: usize,
) -> Result<Option<HashMap<Perm, Perm>>, FinGroupError> {
    if gens.len() != images.len() {
        return Ok(None);
    }
    let id = Perm::identity(source_degree);
    let tid = Perm::identity(target_degree);
    let mut map: HashMap<Perm, Perm> = HashMap::from([(id.clone(), tid.clone())]);
    let mut used: HashSet<Perm> = HashSet::from([tid]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let fx = map[&x].clone();
        for (s, t) in gens.iter().zip(images) {
            let y = s * &x;
            let fy = t * &fx;
            match map.get(&y) {
                Some(prev) if *prev != fy => return Ok(None),
                Some(_) => {}
                None => {
                    if !used.insert(fy.clone()) {
                        return Ok(None);
                    }
                    if map.len() >= bound {
                        return Err(FinGroupError::OrderBoundExceeded { bound });
                    }
                    map.insert(y.clone(), fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(Some(map))
}

/// Full element set of `⟨generators⟩`.
pub fn closure(group: &FinGroup, bound: usize) -> Result<Vec<Perm>, FinGroupError> {
    Ok(group.elements(bound)?.to_vec())
}

fn point_orbits(degree: usize, generators: &[Perm]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let p = orbit[k];
            for g in generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Restriction of `p` to an invariant point set, renumbered in order.
fn restrict(p: &Perm, points: &[usize]) -> Perm {
    let images = points
        .iter()
        .map(|&x| points.binary_search(&p.apply(x)).expect("invariant block") as u32)
        .collect();
    Perm::from_images(images).expect("restriction is a bijection")
}

/// Inverse of [`restrict`]: act on `points` inside `degree` points.
fn embed(p: &Perm, points: &[usize], degree: usize) -> Perm {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for (i, &x) in points.iter().enumerate() {
        images[x] = points[p.apply(i)] as u32;
    }
    Perm::from_images(images).expect("embedding is a bijection")
}

/// Split `G` and `H` along the orbits of `G` when every generator of both
/// is supported inside one orbit.
fn orbit_blocks(g: &FinGroup, h: &FinGroup) -> Option<Vec<Vec<usize>>> {
    let orbits = g.orbits();
    let mut block_of = vec![0usize; g.degree];
    for (k, o) in orbits.iter().enumerate() {
        for &x in o {
            block_of[x] = k;
        }
    }
    let single = |p: &Perm| {
        let s = p.support();
        s.iter().all(|&x| block_of[x] == block_of[s[0]])
    };
    if g.generators.iter().chain(&h.generators).all(single) {
        Some(orbits.into_iter().filter(|o| o.len() > 1).collect())
    } else {
        None
    }
}

fn in_block(p: &Perm, block: &[usize]) -> bool {
    p.support().first().is_some_and(|x| block.binary_search(x).is_ok())
}

/// `N_G(H) = {g ∈ G : gHg⁻¹ = H}`.
///
/// When both groups split as direct products along the orbits of `G`, the
/// normalizer is computed factor by factor and only the factors are
/// materialized; otherwise `G` is enumerated within `bound`.
pub fn normalizer(g: &FinGroup, h: &FinGroup, bound: usize) -> Result<FinGroup, FinGroupError> {
    if g.degree != h.degree {
        return Err(FinGroupError::DegreeMismatch(g.degree, h.degree));
    }
    if let Some(blocks) = orbit_blocks(g, h) {
        if blocks.len() > 1 {
            let mut elements_by_block = Vec::new();
            for block in &blocks {
                let gb: Vec<Perm> =
                    g.generators.iter().filter(|p| in_block(p, block)).map(|p| restrict(p, block)).collect();
                let hb: Vec<Perm> =
                    h.generators.iter().filter(|p| in_block(p, block)).map(|p| restrict(p, block)).collect();
                let gf = FinGroup::new(block.len(), gb)?;
                let hf = FinGroup::new(block.len(), hb)?;
                let nf = normalizer_brute(&gf, &hf, bound)?;
                elements_by_block.push((block.clone(), nf));
            }
            let generators = elements_by_block
                .iter()
                .flat_map(|(block, nf)| nf.generators.iter().map(|p| embed(p, block, g.degree)).collect::<Vec<_>>())
                .collect();
            return FinGroup::new(g.degree, generators);
        }
    }
    normalizer_brute(g, h, bound)
}

fn normalizer_brute(g: &FinGroup, h: &FinGroup, bound: usize) -> Result<FinGroup, FinGroupError> {
    let h_elems: HashSet<Perm> = h.elements(bound)?.iter().cloned().collect();
    let members: Vec<Perm> = g
        .elements(bound)?
        .iter()
        .filter(|x| h.generators.iter().all(|y| h_elems.contains(&x.conjugate(y))))
        .cloned()
        .collect();
    Ok(FinGroup::from_elements(g.degree, members))
}

/// `C_G(x)`.
pub fn centralizer(g: &FinGroup, x: &Perm, bound: usize) -> Result<FinGroup, FinGroupError> {
    let members: Vec<Perm> = g.elements(bound)?.iter().filter(|y| *y * x == x * *y).cloned().collect();
    Ok(FinGroup::from_elements(g.degree, members))
}

/// Permutations of marked indices induced by conjugation: for each `n`,
/// the index map `i ↦ j` with `n·m_i·n⁻¹ = m_j`. Sorted and deduplicated.
pub fn perm_action_on_marked_set(n: &[Perm], marked: &[Perm]) -> Result<Vec<Perm>, FinGroupError> {
    let mut out: Vec<Perm> = n
        .iter()
        .map(|x| marked_action(x, marked))
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Index permutation induced by conjugating `marked` by `x`.
pub fn marked_action(x: &Perm, marked: &[Perm]) -> Result<Perm, FinGroupError> {
    let images = marked
        .iter()
        .map(|m| {
            let c = x.conjugate(m);
            marked.iter().position(|y| *y == c).map(|j| j as u32).ok_or(FinGroupError::NotInvariant)
        })
        .collect::<Result<Vec<u32>, _>>()?;
    Perm::from_images(images).map_err(|_| FinGroupError::NotInvariant)
}

/// Normal closure of `xs` in `G`.
pub fn normal_closure_of(g: &FinGroup, xs: &[Perm], bound: usize) -> Result<FinGroup, FinGroupError> {
    let mut gens: HashSet<Perm> = HashSet::new();
    for x in xs {
        gens.extend(g.conjugacy_class(x));
    }
    let mut gens: Vec<Perm> = gens.into_iter().filter(|p| !p.is_identity()).collect();
    gens.sort();
    let group = FinGroup::new(g.degree, gens)?;
    group.elements(bound)?;
    Ok(group)
}

/// `gp_G(x)`, the normal closure of `x` in `G`.
pub fn normal_closure(g: &FinGroup, x: &Perm, bound: usize) -> Result<FinGroup, FinGroupError> {
    normal_closure_of(g, std::slice::from_ref(x), bound)
}

/// `x ⋄ y = [gp_G(x), gp_G(y)]`, computed as the normal closure of the
/// commutators of `x` with the conjugates of `y`.
pub fn diamond(g: &FinGroup, x: &Perm, y: &Perm, bound: usize) -> Result<FinGroup, FinGroupError> {
    let commutators: Vec<Perm> = g.conjugacy_class(y).iter().map(|d| x.commutator(d)).collect();
    normal_closure_of(g, &commutators, bound)
}

/// `x ⊥ y`, i.e. `x ⋄ y = 1`: `x` commutes with every conjugate of `y`.
pub fn perpendicular(g: &FinGroup, x: &Perm, y: &Perm) -> bool {
    g.conjugacy_class(y).iter().all(|d| x * d == d * x)
}

/// `Comp(x, z)`: every `y` with `y ⋄ z = 1` also has `x ⋄ y = 1`.
pub fn comp(g: &FinGroup, x: &Perm, z: &Perm, bound: usize) -> Result<bool, FinGroupError> {
    Ok(g.elements(bound)?.iter().all(|y| !perpendicular(g, y, z) || perpendicular(g, x, y)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainReport {
    pub is_domain: bool,
    /// A pair of non-trivial elements with `x ⋄ y = 1`, if any.
    pub zero_divisor: Option<(Perm, Perm)>,
    /// Elements `g` with `g ⊥ g`.
    pub aff_like: Vec<Perm>,
    /// `Comp(x, z)` on the requested pairs.
    pub comp_pairs_sampled: Vec<(Perm, Perm, bool)>,
}

/// Exhaustive zero-divisor search over conjugacy-class representatives.
pub fn domain_report(g: &FinGroup, comp_pairs: &[(Perm, Perm)], bound: usize) -> Result<DomainReport, FinGroupError> {
    let elements = g.elements(bound)?;
    let mut reps: Vec<(Perm, Vec<Perm>)> = Vec::new();
    let mut covered: HashSet<Perm> = HashSet::new();
    for e in elements.iter().filter(|e| !e.is_identity()) {
        if covered.contains(e) {
            continue;
        }
        let class = g.conjugacy_class(e);
        covered.extend(class.iter().cloned());
        reps.push((e.clone(), class));
    }
    let perp = |x: &Perm, class: &[Perm]| class.iter().all(|d| x * d == d * x);
    let mut zero_divisor = None;
    'outer: for (x, _) in &reps {
        for (y, class) in &reps {
            if perp(x, class) {
                zero_divisor = Some((x.clone(), y.clone()));
                break 'outer;
            }
        }
    }
    let mut aff_like = Vec::new();
    for (_, class) in &reps {
        if perp(&class[0], class) {
            aff_like.extend(class.iter().cloned());
        }
    }
    aff_like.sort();
    let comp_pairs_sampled = comp_pairs
        .iter()
        .map(|(x, z)| Ok((x.clone(), z.clone(), comp(g, x, z, bound)?)))
        .collect::<Result<_, FinGroupError>>()?;
    Ok(DomainReport { is_domain: zero_divisor.is_none(), zero_divisor, aff_like, comp_pairs_sampled })
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: usize = DEFAULT_ORDER_BOUND;

    fn grp(gens: &[&str], d: usize) -> FinGroup {
        FinGroup::parse(gens, Some(d)).unwrap()
    }

    fn p(s: &str, d: usize) -> Perm {
        Perm::parse(s, d).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(grp(&["(1 2)", "(2 3)"], 3).order(B).unwrap(), 6);
        assert_eq!(grp(&["()"], 3).order(B).unwrap(), 1);
        assert_eq!(grp(&["(1 2)", "(3 4)"], 4).order(B).unwrap(), 4);
        assert_eq!(
            grp(&["(1 2)", "(2 3)", "(3 4)"], 4).order(5),
            Err(FinGroupError::OrderBoundExceeded { bound: 5 })
        );
    }

    #[test]
    fn normalizer_examples() {
        let s3 = grp(&["(1 2)", "(2 3)"], 3);
        assert_eq!(normalizer(&s3, &grp(&["(1 2 3)"], 3), B).unwrap().order(B).unwrap(), 6);
        let n = normalizer(&s3, &grp(&["(1 2)"], 3), B).unwrap();
        assert!(n.same_subgroup(&grp(&["(1 2)"], 3), B).unwrap());
        let s4 = grp(&["(1 2)", "(2 3)", "(3 4)"], 4);
        let v = grp(&["(1 2)(3 4)", "(1 3)(2 4)"], 4);
        assert_eq!(normalizer(&s4, &v, B).unwrap().order(B).unwrap(), 24);
    }

    #[test]
    fn blockwise_normalizer_matches_brute_force() {
        let g = grp(&["(1 2)", "(2 3)", "(4 5)", "(5 6)", "(6 7)"], 7);
        let h = grp(&["(1 2)", "(4 5)", "(6 7)"], 7);
        let fast = normalizer(&g, &h, B).unwrap();
        let slow = normalizer_brute(&g, &h, B).unwrap();
        assert!(fast.same_subgroup(&slow, B).unwrap());
        assert_eq!(fast.order(B).unwrap(), 2 * 8);
    }

    #[test]
    fn normal_closure_examples() {
        let s3 = grp(&["(1 2)", "(2 3)"], 3);
        assert_eq!(normal_closure(&s3, &p("(1 2 3)", 3), B).unwrap().order(B).unwrap(), 3);
        assert_eq!(normal_closure(&s3, &p("(1 2)", 3), B).unwrap().order(B).unwrap(), 6);
        assert!(normal_closure(&s3, &Perm::identity(3), B).unwrap().is_trivial());
    }

    #[test]
    fn diamond_examples() {
        let s3 = grp(&["(1 2)", "(2 3)"], 3);
        assert!(diamond(&s3, &p("(1 2 3)", 3), &p("(1 3 2)", 3), B).unwrap().is_trivial());
        let d = diamond(&s3, &p("(1 2)", 3), &p("(1 2 3)", 3), B).unwrap();
        assert!(d.same_subgroup(&grp(&["(1 2 3)"], 3), B).unwrap());
        assert!(diamond(&s3, &Perm::identity(3), &p("(1 2)", 3), B).unwrap().is_trivial());
    }

    #[test]
    fn domain_examples() {
        let z2 = grp(&["(1 2)"], 2);
        assert!(!domain_report(&z2, &[], B).unwrap().is_domain);
        let s3 = grp(&["(1 2)", "(2 3)"], 3);
        let r = domain_report(&s3, &[], B).unwrap();
        assert!(!r.is_domain);
        let (x, y) = r.zero_divisor.unwrap();
        assert_eq!((x.order(), y.order()), (3, 3));
        assert!(domain_report(&FinGroup::trivial(3), &[], B).unwrap().is_domain);
    }

    #[test]
    fn marked_action_example() {
        // a = x a2 a3 x in S7 with a2 = (1 2), x = (2 3), a3 = (3 4).
        let (a2, x, a3) = (p("(1 2)", 7), p("(2 3)", 7), p("(3 4)", 7));
        let a = &(&(&x * &a2) * &a3) * &x;
        assert_eq!(a, p("(1 3)(2 4)", 7));
        assert_eq!(a.conjugate(&a2), a3);
        let img = perm_action_on_marked_set(&[a], &[a2, a3]).unwrap();
        assert_eq!(img, vec![p("(1 2)", 2)]);
        assert_eq!(
            marked_action(&x, &[p("(1 2)", 7)]),
            Err(FinGroupError::NotInvariant)
        );
    }

    #[test]
    fn centralizer_example() {
        let s3 = grp(&["(1 2)", "(2 3)"], 3);
        assert_eq!(centralizer(&s3, &p("(1 2 3)", 3), B).unwrap().order(B).unwrap(), 3);
    }
}
