//! Stallings splittings over finite special subgroups, found by searching
//! for spherical separators of the FIN-graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classification::{is_spherical, spherical_order, spherical_subsets};
use crate::matrix::{CoxeterMatrix, DiagramGraph, GenSubset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("the group is finite and has no splitting")]
    SphericalInput,
}

/// A spherical `S₀` whose removal disconnects the FIN-graph on `T`,
/// together with the components of `T ∖ S₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separator {
    pub s0: GenSubset,
    pub components: Vec<GenSubset>,
}

impl Separator {
    /// All `(S₁, S₂)` with `S₁ ∪ S₂ = T`, `S₁ ∩ S₂ = S₀`, each side a union
    /// of components; `S₁` always contains the first component.
    pub fn bipartitions(&self) -> impl Iterator<Item = (GenSubset, GenSubset)> + '_ {
        let k = self.components.len();
        (0u64..1 << (k - 1)).filter_map(move |mask| {
            if mask == (1 << (k - 1)) - 1 {
                return None;
            }
            let mut s1 = self.s0.union(self.components[0]);
            let mut s2 = self.s0;
            for (i, &c) in self.components.iter().enumerate().skip(1) {
                if mask >> (i - 1) & 1 == 1 {
                    s1 = s1.union(c);
                } else {
                    s2 = s2.union(c);
                }
            }
            Some((s1, s2))
        })
    }
}

/// Spherical separators of the FIN-graph restricted to `t`, ordered by
/// `|S₀|` and then lexicographically.
pub fn separators_within(m: &CoxeterMatrix, t: GenSubset) -> Vec<Separator> {
    let fin = DiagramGraph::fin(m);
    spherical_subsets(m, t)
        .into_iter()
        .filter(|&s0| s0 != t)
        .filter_map(|s0| {
            let components = fin.components(t.difference(s0));
            (components.len() >= 2).then_some(Separator { s0, components })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorTriple {
    pub s0: GenSubset,
    pub s1: GenSubset,
    pub s2: GenSubset,
}

/// Every triple `(S₀, S₁, S₂)` splitting `W` as `⟨S₁⟩ ∗_{⟨S₀⟩} ⟨S₂⟩`.
pub fn spherical_separators(m: &CoxeterMatrix) -> Result<Vec<SeparatorTriple>, SplittingError> {
    if is_spherical(m, m.full()) {
        return Err(SplittingError::SphericalInput);
    }
    Ok(separators_within(m, m.full())
        .iter()
        .flat_map(|sep| sep.bipartitions().map(|(s1, s2)| SeparatorTriple { s0: sep.s0, s1, s2 }).collect::<Vec<_>>())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum VertexKind {
    Finite {
        #[serde(with = "crate::serde_order")]
        order: u128,
    },
    /// Infinite, with no spherical separator. One-endedness is asserted by
    /// the exhaustive search, not certified otherwise.
    OneEndedBySearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitNode {
    pub generators: GenSubset,
    #[serde(flatten)]
    pub kind: VertexKind,
    pub even: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitEdge {
    /// Node indices (0-based).
    pub from: usize,
    pub to: usize,
    pub generators: GenSubset,
    #[serde(with = "crate::serde_order")]
    pub order: u128,
}

/// A reduced splitting of `W` as a tree of special subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTree {
    pub nodes: Vec<SplitNode>,
    pub edges: Vec<SplitEdge>,
}

impl SplitTree {
    pub fn node_labels(&self) -> Vec<GenSubset> {
        self.nodes.iter().map(|n| n.generators).collect()
    }

    /// Edges at a node, as `(edge index, other endpoint)`.
    pub fn incident(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(k, e)| {
                if e.from == v {
                    Some((k, e.to))
                } else if e.to == v {
                    Some((k, e.from))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Checks the structural invariants; returns the first violation.
    pub fn check_invariants(&self, m: &CoxeterMatrix) -> Result<(), String> {
        let n = self.nodes.len();
        if self.edges.len() + 1 != n {
            return Err(format!("{n} nodes but {} edges", self.edges.len()));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a == b {
                return Err("cycle in the splitting graph".into());
            }
            parent[a] = b;
            let (la, lb) = (self.nodes[e.from].generators, self.nodes[e.to].generators);
            if !is_spherical(m, e.generators) {
                return Err(format!("edge group {} is infinite", e.generators));
            }
            if la.intersection(lb) != e.generators {
                return Err(format!("edge {} is not {} ∩ {}", e.generators, la, lb));
            }
            if e.generators == la || e.generators == lb {
                return Err(format!("edge {} equals an endpoint label", e.generators));
            }
        }
        let union = self.nodes.iter().fold(GenSubset::EMPTY, |acc, v| acc.union(v.generators));
        if union != m.full() {
            return Err("node labels do not cover S".into());
        }
        Ok(())
    }
}

/// Repeatedly split vertex groups along their first spherical separator,
/// then contract any edge whose label equals an endpoint label.
pub fn stallings_splitting(m: &CoxeterMatrix) -> SplitTree {
    let mut labels = vec![m.full()];
    let mut edges: Vec<(usize, usize, GenSubset)> = Vec::new();
    let mut v = 0;
    while v < labels.len() {
        let t = labels[v];
        let Some(sep) = separators_within(m, t).into_iter().next() else {
            v += 1;
            continue;
        };
        let s1 = sep.s0.union(sep.components[0]);
        let s2 = t.difference(sep.components[0]);
        let w = labels.len();
        labels[v] = s1;
        labels.push(s2);
        for e in edges.iter_mut() {
            let touches = e.0 == v || e.1 == v;
            if touches && !e.2.is_subset(s1) {
                if e.0 == v {
                    e.0 = w;
                } else {
                    e.1 = w;
                }
            }
        }
        edges.push((v, w, sep.s0));
    }
    // Reduction: merge a node into its neighbor when the edge label is the
    // whole node label.
    let mut removed = vec![false; labels.len()];
    while let Some(k) = edges.iter().position(|&(a, b, l)| l == labels[a] || l == labels[b]) {
        let (a, b, l) = edges.remove(k);
        let (keep, gone) = if l == labels[a] { (b, a) } else { (a, b) };
        for e in edges.iter_mut() {
            if e.0 == gone {
                e.0 = keep;
            }
            if e.1 == gone {
                e.1 = keep;
            }
        }
        removed[gone] = true;
    }
    let mut alive: Vec<(usize, GenSubset)> =
        labels.iter().copied().enumerate().filter(|&(i, _)| !removed[i]).collect();
    alive.sort_by_key(|&(_, l)| l.to_vec());
    let renumber: BTreeMap<usize, usize> = alive.iter().enumerate().map(|(new, &(old, _))| (old, new)).collect();
    let nodes = alive
        .iter()
        .map(|&(_, l)| SplitNode {
            generators: l,
            kind: match spherical_order(m, l) {
                Some(order) => VertexKind::Finite { order },
                None => VertexKind::OneEndedBySearch,
            },
            even: m.is_even_on(l),
        })
        .collect();
    let mut edges: Vec<SplitEdge> = edges
        .into_iter()
        .map(|(a, b, l)| {
            let (a, b) = (renumber[&a], renumber[&b]);
            SplitEdge {
                from: a.min(b),
                to: a.max(b),
                generators: l,
                order: spherical_order(m, l).expect("edge groups are finite"),
            }
        })
        .collect();
    edges.sort_by_key(|e| (e.from, e.to));
    SplitTree { nodes, edges }
}

/// `W` is even iff every vertex group is; expected to hold on every input.
pub fn even_vertex_check(m: &CoxeterMatrix, tree: &SplitTree) -> bool {
    m.is_even() == tree.nodes.iter().all(|v| m.is_even_on(v.generators))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum VcType {
    /// Never produced for Coxeter groups, which are generated by torsion.
    CyclicType,
    DihedralType { a: GenSubset, c: GenSubset, b: GenSubset },
    NotVirtuallyCyclic,
}

/// Recognizes `A ∗_C B` with `A`, `B` finite and `[A:C] = [B:C] = 2`.
pub fn vc_type(m: &CoxeterMatrix) -> VcType {
    let tree = stallings_splitting(m);
    if let ([na, nb], [e]) = (tree.nodes.as_slice(), tree.edges.as_slice()) {
        if let (VertexKind::Finite { order: oa }, VertexKind::Finite { order: ob }) = (na.kind, nb.kind) {
            if oa == 2 * e.order && ob == 2 * e.order {
                return VcType::DihedralType { a: na.generators, c: e.generators, b: nb.generators };
            }
        }
    }
    VcType::NotVirtuallyCyclic
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::parse_system;

    fn sys(s: &str) -> CoxeterMatrix {
        parse_system(s).unwrap()
    }

    fn g(xs: &[usize]) -> GenSubset {
        GenSubset::from_one_based(xs.iter().copied())
    }

    const PGL: &str = "rank 3; m 1 2 = 2; m 1 3 = 3; m 2 3 = inf";

    #[test]
    fn separator_examples() {
        let t = spherical_separators(&sys(PGL)).unwrap();
        assert_eq!(t, vec![SeparatorTriple { s0: g(&[1]), s1: g(&[1, 2]), s2: g(&[1, 3]) }]);
        let w3 = spherical_separators(&CoxeterMatrix::universal(3)).unwrap();
        assert_eq!(w3[0], SeparatorTriple { s0: GenSubset::EMPTY, s1: g(&[1]), s2: g(&[2, 3]) });
        assert!(spherical_separators(&sys("rank 3; m 1 2 = 4; m 1 3 = 4")).unwrap().is_empty());
        assert_eq!(spherical_separators(&sys("rank 2; m 1 2 = 3")), Err(SplittingError::SphericalInput));
    }

    #[test]
    fn splitting_examples() {
        let w3 = stallings_splitting(&CoxeterMatrix::universal(3));
        assert_eq!(w3.node_labels(), vec![g(&[1]), g(&[2]), g(&[3])]);
        assert!(w3.edges.iter().all(|e| e.generators.is_empty()));
        w3.check_invariants(&CoxeterMatrix::universal(3)).unwrap();
        let pgl = stallings_splitting(&sys(PGL));
        assert_eq!(pgl.node_labels(), vec![g(&[1, 2]), g(&[1, 3])]);
        assert_eq!(pgl.edges[0].generators, g(&[1]));
        let aff = stallings_splitting(&sys("rank 3; m 1 2 = 4; m 1 3 = 4"));
        assert_eq!(aff.nodes.len(), 1);
        assert_eq!(aff.nodes[0].kind, VertexKind::OneEndedBySearch);
    }

    #[test]
    fn even_check_examples() {
        for text in [PGL, "rank 3; m 1 2 = 4; m 1 3 = 4", "rank 3; m 1 2 = inf; m 1 3 = inf; m 2 3 = inf"] {
            let m = sys(text);
            assert!(even_vertex_check(&m, &stallings_splitting(&m)));
        }
    }

    #[test]
    fn vc_examples() {
        assert_eq!(
            vc_type(&sys("rank 2; m 1 2 = inf")),
            VcType::DihedralType { a: g(&[1]), c: GenSubset::EMPTY, b: g(&[2]) }
        );
        assert_eq!(vc_type(&sys(PGL)), VcType::NotVirtuallyCyclic);
        assert_eq!(vc_type(&sys("rank 3; m 1 2 = 2; m 1 3 = 3; m 2 3 = 3")), VcType::NotVirtuallyCyclic);
    }
}
