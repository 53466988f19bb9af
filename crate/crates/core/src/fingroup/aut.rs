//! Automorphisms of small permutation groups by backtracking over images
//! of a fixed generating tuple.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{FinGroup, FinGroupError, Perm};

/// Largest group order accepted by the automorphism search.
pub const MAX_AUT_GROUP_ORDER: usize = 256;
/// Largest automorphism group that is listed in full.
pub const MAX_AUTOMORPHISMS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismGroup {
    /// Elements of `G`, sorted; automorphisms act on these indices.
    pub elements: Vec<Perm>,
    /// Every automorphism as a permutation of element indices.
    pub automorphisms: Vec<Perm>,
    /// The inner automorphisms.
    pub inner: Vec<Perm>,
    pub out_trivial: bool,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn inner_order(&self) -> usize {
        self.inner.len()
    }
}

/// An automorphism that is not inner, given by the images of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterWitness {
    pub generators: Vec<Perm>,
    pub images: Vec<Perm>,
}

/// Irredundant generating tuple: each generator lies outside the span of
/// the previous ones.
fn generating_tuple(g: &FinGroup) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut span: HashSet<Perm> = HashSet::from([g.identity()]);
    for x in g.generators() {
        if !span.contains(x) {
            gens.push(x.clone());
            span = super::closure_set(g.degree(), &gens, usize::MAX)
                .expect("unbounded")
                .into_iter()
                .collect();
        }
    }
    gens
}

/// Multiplication table of a small group on sorted element indices.
struct Table {
    elements: Vec<Perm>,
    mul: Vec<Vec<u16>>,
    identity: u16,
}

impl Table {
    fn new(g: &FinGroup) -> Result<Self, FinGroupError> {
        let elements = g.elements(MAX_AUT_GROUP_ORDER)?.to_vec();
        let index = |p: &Perm| elements.binary_search(p).expect("closed") as u16;
        let mul = elements.iter().map(|x| elements.iter().map(|y| index(&(x * y))).collect()).collect();
        let identity = index(&g.identity());
        Ok(Table { elements, mul, identity })
    }

    fn index(&self, p: &Perm) -> u16 {
        self.elements.binary_search(p).expect("element of the group") as u16
    }

    /// Extend `gens[k] ↦ images[k]` to `⟨gens⟩`; `None` unless this is a
    /// well-defined injective homomorphism.
    fn extend(&self, gens: &[u16], images: &[u16]) -> Option<Vec<u16>> {
        const UNSET: u16 = u16::MAX;
        let n = self.elements.len();
        let mut map = vec![UNSET; n];
        let mut used = vec![false; n];
        map[self.identity as usize] = self.identity;
        used[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let fx = map[x as usize];
            for (&s, &t) in gens.iter().zip(images) {
                let y = self.mul[s as usize][x as usize];
                let fy = self.mul[t as usize][fx as usize];
                let prev = map[y as usize];
                if prev == UNSET {
                    if used[fy as usize] {
                        return None;
                    }
                    used[fy as usize] = true;
                    map[y as usize] = fy;
                    queue.push_back(y);
                } else if prev != fy {
                    return None;
                }
            }
        }
        Some(map)
    }
}

struct Search {
    table: Table,
    gens: Vec<u16>,
    candidates: Vec<Vec<u16>>,
}

type Visit<'v> = dyn FnMut(&[u16], &[u16]) -> Result<bool, FinGroupError> + 'v;

impl Search {
    fn new(g: &FinGroup) -> Result<Self, FinGroupError> {
        let table = Table::new(g)?;
        let gens: Vec<u16> = generating_tuple(g).iter().map(|s| table.index(s)).collect();
        let orders: Vec<u64> = table.elements.iter().map(Perm::order).collect();
        let candidates = gens
            .iter()
            .map(|&s| (0..table.elements.len() as u16).filter(|&e| orders[e as usize] == orders[s as usize]).collect())
            .collect();
        Ok(Search { table, gens, candidates })
    }

    /// Depth-first search over generator images; `visit` receives the
    /// images and the full map, and returns `false` to stop.
    fn run(&self, visit: &mut Visit<'_>) -> Result<(), FinGroupError> {
        let mut chosen = Vec::new();
        self.go(&mut chosen, visit).map(|_| ())
    }

    fn go(&self, chosen: &mut Vec<u16>, visit: &mut Visit<'_>) -> Result<bool, FinGroupError> {
        let k = chosen.len();
        for &c in &self.candidates[k] {
            chosen.push(c);
            if let Some(map) = self.table.extend(&self.gens[..=k], chosen) {
                let go_on = if k + 1 == self.gens.len() { visit(chosen, &map)? } else { self.go(chosen, visit)? };
                if !go_on {
                    chosen.pop();
                    return Ok(false);
                }
            }
            chosen.pop();
        }
        Ok(true)
    }
}

fn as_perm(map: &[u16]) -> Perm {
    Perm::from_images(map.iter().map(|&x| x as u32).collect()).expect("automorphism is a bijection")
}

fn inner_maps(table: &Table) -> Vec<Vec<u16>> {
    table
        .elements
        .iter()
        .map(|x| table.elements.iter().map(|e| table.index(&x.conjugate(e))).collect())
        .collect()
}

/// `Aut(G)` as permutations of the sorted element list, with `Inn(G)`.
/// Requires `|G| ≤ 256` and `|Aut(G)| ≤ 100000`.
pub fn automorphism_group(g: &FinGroup) -> Result<AutomorphismGroup, FinGroupError> {
    let search = Search::new(g)?;
    if search.gens.is_empty() {
        let id = Perm::identity(search.table.elements.len());
        return Ok(AutomorphismGroup {
            elements: search.table.elements.clone(),
            automorphisms: vec![id.clone()],
            inner: vec![id],
            out_trivial: true,
        });
    }
    let mut automorphisms = Vec::new();
    search.run(&mut |_, map| {
        if automorphisms.len() >= MAX_AUTOMORPHISMS {
            return Err(FinGroupError::OrderBoundExceeded { bound: MAX_AUTOMORPHISMS });
        }
        automorphisms.push(as_perm(map));
        Ok(true)
    })?;
    automorphisms.sort();
    let mut inner: Vec<Perm> = inner_maps(&search.table).iter().map(|m| as_perm(m)).collect();
    inner.sort();
    inner.dedup();
    let out_trivial = inner.len() == automorphisms.len();
    Ok(AutomorphismGroup { elements: search.table.elements, automorphisms, inner, out_trivial })
}

/// First automorphism found that is not inner, if any. Stops early, so it
/// also works when `Aut(G)` is too large to list.
pub fn find_outer_automorphism(g: &FinGroup) -> Result<Option<OuterWitness>, FinGroupError> {
    let search = Search::new(g)?;
    if search.gens.is_empty() {
        return Ok(None);
    }
    let inner: HashSet<Vec<u16>> = inner_maps(&search.table)
        .iter()
        .map(|m| search.gens.iter().map(|&s| m[s as usize]).collect())
        .collect();
    let mut found = None;
    search.run(&mut |images, _| {
        if inner.contains(images) {
            Ok(true)
        } else {
            found = Some(images.to_vec());
            Ok(false)
        }
    })?;
    let el = &search.table.elements;
    Ok(found.map(|images| OuterWitness {
        generators: search.gens.iter().map(|&s| el[s as usize].clone()).collect(),
        images: images.iter().map(|&s| el[s as usize].clone()).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(gens: &[&str], d: usize) -> FinGroup {
        FinGroup::parse(gens, Some(d)).unwrap()
    }

    #[test]
    fn small_automorphism_groups() {
        let z2 = automorphism_group(&grp(&["(1 2)"], 2)).unwrap();
        assert_eq!((z2.order(), z2.inner_order(), z2.out_trivial), (1, 1, true));
        let v = automorphism_group(&grp(&["(1 2)", "(3 4)"], 4)).unwrap();
        assert_eq!((v.order(), v.inner_order(), v.out_trivial), (6, 1, false));
        let s3 = automorphism_group(&grp(&["(1 2)", "(2 3)"], 3)).unwrap();
        assert_eq!((s3.order(), s3.inner_order(), s3.out_trivial), (6, 6, true));
        let d4 = automorphism_group(&grp(&["(1 2 3 4)", "(1 3)"], 4)).unwrap();
        assert_eq!((d4.order(), d4.inner_order()), (8, 4));
    }

    #[test]
    fn outer_search_stops_early() {
        let big = grp(&["(1 2)", "(3 4)", "(5 6)", "(7 8)", "(9 10)"], 10);
        assert!(find_outer_automorphism(&big).unwrap().is_some());
        assert!(find_outer_automorphism(&grp(&["(1 2)", "(2 3)", "(3 4)"], 4)).unwrap().is_none());
        assert!(matches!(automorphism_group(&big), Err(FinGroupError::OrderBoundExceeded { .. })));
    }
}
