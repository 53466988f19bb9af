//! Faithful permutation representations of spherical Coxeter systems of
//! types A, B, D and I2, one block of points per irreducible component.

use serde::{Deserialize, Serialize};

use super::{FinGroup, FinGroupError, Perm};
use crate::classification::{spherical_type_within, FiniteType};
use crate::matrix::{CoxeterMatrix, GenSubset, Label};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelBlock {
    pub generators: GenSubset,
    pub finite_type: FiniteType,
    /// First point of the block (0-based).
    pub offset: usize,
    pub size: usize,
}

/// Generator images indexed like the Coxeter generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermModel {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub blocks: Vec<ModelBlock>,
}

impl PermModel {
    pub fn group(&self) -> FinGroup {
        FinGroup::new(self.degree, self.generators.clone()).expect("generators share the degree")
    }

    /// Image of a word (letters applied left to right as a product).
    pub fn evaluate(&self, word: &[usize]) -> Perm {
        word.iter().fold(Perm::identity(self.degree), |acc, &s| &acc * &self.generators[s])
    }
}

fn neighbors(m: &CoxeterMatrix, comp: GenSubset, v: usize) -> Vec<usize> {
    comp.iter().filter(|&w| w != v && m.get(v, w) != Label::Finite(2)).collect()
}

/// Walk a path of the COX-diagram starting at `start`, away from `avoid`.
fn chain(m: &CoxeterMatrix, comp: GenSubset, start: usize, avoid: Option<usize>) -> Vec<usize> {
    let mut out = vec![start];
    let mut prev = avoid;
    let mut cur = start;
    loop {
        let next: Vec<usize> = neighbors(m, comp, cur).into_iter().filter(|&w| Some(w) != prev && !out.contains(&w)).collect();
        match next.as_slice() {
            [w] => {
                prev = Some(cur);
                cur = *w;
                out.push(cur);
            }
            _ => return out,
        }
    }
}

/// `(k k+1)(-k -(k+1))` style involutions on `2n` points, where point `k`
/// (1-based) is index `k-1` and `-k` is index `n+k-1`.
fn signed(n: usize, pairs: &[(i64, i64)]) -> Perm {
    let idx = |x: i64| if x > 0 { x as usize - 1 } else { n + (-x) as usize - 1 };
    let mut images: Vec<u32> = (0..2 * n as u32).collect();
    for &(a, b) in pairs {
        images[idx(a)] = idx(b) as u32;
        images[idx(b)] = idx(a) as u32;
    }
    Perm::from_images(images).expect("involution")
}

/// Generator images for one irreducible component, on its own points.
fn component_model(m: &CoxeterMatrix, comp: GenSubset, ty: FiniteType) -> Result<(usize, Vec<(usize, Perm)>), FinGroupError> {
    let ends: Vec<usize> = comp.iter().filter(|&v| neighbors(m, comp, v).len() <= 1).collect();
    match ty {
        FiniteType::A(n) => {
            let n = n as usize;
            let order = chain(m, comp, ends[0], None);
            let gens = order.iter().enumerate().map(|(k, &s)| (s, Perm::transposition(n + 1, k + 1, k + 2))).collect();
            Ok((n + 1, gens))
        }
        FiniteType::I2(_) | FiniteType::B(2) => {
            let k = match m.get(ends[0], ends[1]) {
                Label::Finite(k) => k as usize,
                Label::Infinite => unreachable!("spherical"),
            };
            let refl = |shift: usize| {
                let images = (0..k).map(|i| ((shift + k - i) % k) as u32).collect();
                Perm::from_images(images).expect("reflection")
            };
            Ok((k, vec![(ends[0], refl(0)), (ends[1], refl(1))]))
        }
        FiniteType::B(n) => {
            let n = n as usize;
            let start = *ends
                .iter()
                .find(|&&e| neighbors(m, comp, e).iter().any(|&w| m.get(e, w) == Label::Finite(4)))
                .expect("B has a 4 at one end");
            let order = chain(m, comp, start, None);
            let mut gens = vec![(order[0], signed(n, &[(1, -1)]))];
            for (k, &s) in order.iter().enumerate().skip(1) {
                let k = k as i64;
                gens.push((s, signed(n, &[(k, k + 1), (-k, -(k + 1))])));
            }
            Ok((2 * n, gens))
        }
        FiniteType::D(n) => {
            let n = n as usize;
            let branch = comp.iter().find(|&v| neighbors(m, comp, v).len() == 3).expect("D has a branch");
            let mut leaves: Vec<usize> =
                neighbors(m, comp, branch).into_iter().filter(|&w| neighbors(m, comp, w).len() == 1).collect();
            leaves.sort_unstable();
            let (l1, l0) = (leaves[0], leaves[1]);
            let tail_start = neighbors(m, comp, branch).into_iter().find(|&w| w != l0 && w != l1).expect("third arm");
            let mut order = vec![l1, branch];
            order.extend(chain(m, comp, tail_start, Some(branch)));
            let mut gens = vec![(l0, signed(n, &[(1, -2), (2, -1)]))];
            for (k, &s) in order.iter().enumerate() {
                let k = k as i64 + 1;
                gens.push((s, signed(n, &[(k, k + 1), (-k, -(k + 1))])));
            }
            Ok((2 * n, gens))
        }
        other => Err(FinGroupError::UnsupportedType(other.to_string())),
    }
}

/// Permutation model of a spherical system whose components are of type
/// A, B, D or I2; components occupy consecutive point blocks in component
/// order.
pub fn coxeter_perm_model(m: &CoxeterMatrix) -> Result<PermModel, FinGroupError> {
    let mut parts = Vec::new();
    let mut degree = 0;
    for comp in m.irreducible_components() {
        let ty = spherical_type_within(m, comp).ok_or_else(|| FinGroupError::UnsupportedType("infinite".into()))?;
        let (size, gens) = component_model(m, comp, ty)?;
        parts.push((ModelBlock { generators: comp, finite_type: ty, offset: degree, size }, gens));
        degree += size;
    }
    let mut generators = vec![Perm::identity(degree); m.rank()];
    let mut blocks = Vec::new();
    for (block, gens) in parts {
        for (s, p) in gens {
            generators[s] = p.shift(block.offset, degree);
        }
        blocks.push(block);
    }
    Ok(PermModel { degree, generators, blocks })
}
