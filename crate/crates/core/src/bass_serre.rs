//! Trees of finite groups: balls in the Bass-Serre tree, cylinders, and
//! the image of an edge-group normalizer in the automorphism group of the
//! edge group.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingroup::{
    coxeter_perm_model, homomorphism_from_generators, normalizer, FinGroup, FinGroupError, Perm,
};
use crate::matrix::CoxeterMatrix;
use crate::splitting::{SplitTree, VertexKind};

/// Tag attached to normalizer images computed by walking the fixed subtree
/// of the edge group.
pub const NORMALIZER_METHOD: &str = "lemma-6.2-extrapolation";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BassSerreError {
    #[error(transparent)]
    Group(#[from] FinGroupError),
    #[error("vertex {0} has an infinite group")]
    InfiniteVertex(usize),
    #[error("edge {0}: generator images do not define an injective homomorphism")]
    BadEdgeMap(usize),
    #[error("the underlying graph is not a tree")]
    NotATree,
    #[error("edge groups have mixed orders {0:?}")]
    MixedEdgeOrders(Vec<usize>),
    #[error("no edge {0}")]
    NoSuchEdge(usize),
    #[error("not certified: {0}")]
    NotCertified(String),
}

#[derive(Clone, Debug)]
pub struct TreeVertex {
    pub label: String,
    pub group: FinGroup,
}

/// An edge group given by matching generator lists inside both endpoint
/// groups.
#[derive(Clone, Debug)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub label: String,
    /// Names of the edge generators (1-based, used in witnesses).
    pub generator_labels: Vec<usize>,
    pub gens_u: Vec<Perm>,
    pub gens_v: Vec<Perm>,
}

#[derive(Clone, Debug)]
struct EdgeData {
    /// Sorted elements of the edge group on each side.
    sub_u: Vec<Perm>,
    sub_v: Vec<Perm>,
    u_to_v: HashMap<Perm, Perm>,
    v_to_u: HashMap<Perm, Perm>,
}

/// A finite tree of finite permutation groups with injective edge maps.
#[derive(Clone, Debug)]
pub struct TreeOfFiniteGroups {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<TreeEdge>,
    data: Vec<EdgeData>,
    bound: usize,
}

impl TreeOfFiniteGroups {
    pub fn new(vertices: Vec<TreeVertex>, edges: Vec<TreeEdge>, bound: usize) -> Result<Self, BassSerreError> {
        let n = vertices.len();
        if n == 0 || edges.len() + 1 != n {
            return Err(BassSerreError::NotATree);
        }
        let mut reach = vec![false; n];
        reach[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for e in &edges {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == x && b < n && !reach[b] {
                        reach[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        if reach.iter().any(|r| !r) {
            return Err(BassSerreError::NotATree);
        }
        let mut data = Vec::new();
        for (k, e) in edges.iter().enumerate() {
            let (du, dv) = (vertices[e.u].group.degree(), vertices[e.v].group.degree());
            let u_to_v = homomorphism_from_generators(du, dv, &e.gens_u, &e.gens_v, bound)?
                .ok_or(BassSerreError::BadEdgeMap(k))?;
            let v_to_u: HashMap<Perm, Perm> = u_to_v.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
            let mut sub_u: Vec<Perm> = u_to_v.keys().cloned().collect();
            let mut sub_v: Vec<Perm> = v_to_u.keys().cloned().collect();
            sub_u.sort();
            sub_v.sort();
            data.push(EdgeData { sub_u, sub_v, u_to_v, v_to_u });
        }
        Ok(TreeOfFiniteGroups { vertices, edges, data, bound })
    }

    /// Permutation models of the vertex groups of a splitting whose vertex
    /// groups are all finite.
    pub fn from_split_tree(m: &CoxeterMatrix, tree: &SplitTree, bound: usize) -> Result<Self, BassSerreError> {
        let mut vertices = Vec::new();
        let mut models = Vec::new();
        for (k, node) in tree.nodes.iter().enumerate() {
            if !matches!(node.kind, VertexKind::Finite { .. }) {
                return Err(BassSerreError::InfiniteVertex(k));
            }
            let induced = m.induced_system(node.generators).expect("node labels are valid");
            let model = coxeter_perm_model(&induced.matrix)?;
            vertices.push(TreeVertex { label: node.generators.to_string(), group: model.group() });
            models.push((induced.indices, model));
        }
        let image = |node: usize, s: usize| {
            let (indices, model) = &models[node];
            let local = indices.iter().position(|&x| x == s).expect("edge generator in node");
            model.generators[local].clone()
        };
        let edges = tree
            .edges
            .iter()
            .map(|e| TreeEdge {
                u: e.from,
                v: e.to,
                label: e.generators.to_string(),
                generator_labels: e.generators.one_based(),
                gens_u: e.generators.iter().map(|s| image(e.from, s)).collect(),
                gens_v: e.generators.iter().map(|s| image(e.to, s)).collect(),
            })
            .collect();
        TreeOfFiniteGroups::new(vertices, edges, bound)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn edge_order(&self, e: usize) -> usize {
        self.data[e].sub_u.len()
    }

    /// Incident edges of a quotient vertex, with the far endpoint.
    fn incident(&self, w: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(k, e)| {
                if e.u == w {
                    Some((k, e.v))
                } else if e.v == w {
                    Some((k, e.u))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Elements of the edge group as seen from endpoint `w`.
    fn side(&self, e: usize, w: usize) -> &[Perm] {
        if self.edges[e].u == w {
            &self.data[e].sub_u
        } else {
            &self.data[e].sub_v
        }
    }

    fn side_gens(&self, e: usize, w: usize) -> &[Perm] {
        if self.edges[e].u == w {
            &self.edges[e].gens_u
        } else {
            &self.edges[e].gens_v
        }
    }

    /// The edge isomorphism from endpoint `w` to the other endpoint.
    fn across(&self, e: usize, w: usize) -> &HashMap<Perm, Perm> {
        if self.edges[e].u == w {
            &self.data[e].u_to_v
        } else {
            &self.data[e].v_to_u
        }
    }

    /// Least element of each left coset `aG_e` in `G_w`, ascending; the
    /// identity comes first.
    fn transversal(&self, w: usize, e: usize) -> Result<Vec<Perm>, BassSerreError> {
        let elements = self.vertices[w].group.elements(self.bound)?;
        let sub = self.side(e, w);
        let mut covered: HashSet<Perm> = HashSet::new();
        let mut reps = Vec::new();
        for x in elements {
            if covered.contains(x) {
                continue;
            }
            reps.push(x.clone());
            covered.extend(sub.iter().map(|h| x * h));
        }
        Ok(reps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallVertex {
    /// Vertex of the quotient tree this lifts.
    pub quotient_vertex: usize,
    pub depth: usize,
    pub parent_edge: Option<usize>,
    /// Normal form: quotient edges and coset representatives from the base.
    pub path: Vec<(usize, Perm)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallEdge {
    pub parent: usize,
    pub child: usize,
    pub quotient_edge: usize,
    /// Coset representative in the parent's vertex group.
    pub rep: Perm,
    pub stabilizer_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeBall {
    pub radius: usize,
    pub base: usize,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<BallEdge>,
    /// Number of vertices at each distance from the base.
    pub level_counts: Vec<usize>,
}

/// All vertices of the Bass-Serre tree within distance `radius` of the
/// vertex fixed by the base vertex group.
pub fn build_ball(t: &TreeOfFiniteGroups, base: usize, radius: usize) -> Result<TreeBall, BassSerreError> {
    let mut transversals: HashMap<(usize, usize), Vec<Perm>> = HashMap::new();
    let mut vertices =
        vec![BallVertex { quotient_vertex: base, depth: 0, parent_edge: None, path: Vec::new() }];
    let mut edges: Vec<BallEdge> = Vec::new();
    let mut level_counts = vec![1];
    let mut k = 0;
    while k < vertices.len() {
        let x = vertices[k].clone();
        if x.depth < radius {
            let incoming = x.parent_edge.map(|pe| edges[pe].quotient_edge);
            for (e, far) in t.incident(x.quotient_vertex) {
                let key = (x.quotient_vertex, e);
                if let std::collections::hash_map::Entry::Vacant(slot) = transversals.entry(key) {
                    slot.insert(t.transversal(x.quotient_vertex, e)?);
                }
                for a in &transversals[&key] {
                    if incoming == Some(e) && a.is_identity() {
                        continue;
                    }
                    let child = vertices.len();
                    let mut path = x.path.clone();
                    path.push((e, a.clone()));
                    edges.push(BallEdge {
                        parent: k,
                        child,
                        quotient_edge: e,
                        rep: a.clone(),
                        stabilizer_order: t.edge_order(e),
                    });
                    vertices.push(BallVertex { quotient_vertex: far, depth: x.depth + 1, parent_edge: Some(edges.len() - 1), path });
                    if level_counts.len() <= x.depth + 1 {
                        level_counts.push(0);
                    }
                    level_counts[x.depth + 1] += 1;
                }
            }
        }
        k += 1;
    }
    Ok(TreeBall { radius, base, vertices, edges, level_counts })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    /// Ball edge indices with this stabilizer.
    pub edges: Vec<usize>,
    pub stabilizer_order: usize,
    /// The edge set is connected inside the ball.
    pub connected: bool,
}

fn conj_set(a: &Perm, h: &[Perm]) -> Vec<Perm> {
    let inv = a.inverse();
    let mut out: Vec<Perm> = h.iter().map(|x| &(a * x) * &inv).collect();
    out.sort();
    out
}

fn is_subset(h: &[Perm], sorted: &[Perm]) -> bool {
    h.iter().all(|x| sorted.binary_search(x).is_ok())
}

/// Partition of the ball's edges by stabilizer. Edge groups must all have
/// one order, so an edge fixed by a stabilizer has that same stabilizer.
pub fn cylinders(t: &TreeOfFiniteGroups, ball: &TreeBall) -> Result<Vec<Cylinder>, BassSerreError> {
    let mut orders: Vec<usize> = ball.edges.iter().map(|e| e.stabilizer_order).collect();
    orders.sort_unstable();
    orders.dedup();
    if orders.len() > 1 {
        return Err(BassSerreError::MixedEdgeOrders(orders));
    }
    let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); ball.vertices.len()];
    for (k, e) in ball.edges.iter().enumerate() {
        at_vertex[e.parent].push(k);
        at_vertex[e.child].push(k);
    }
    let mut class_of: Vec<Option<usize>> = vec![None; ball.edges.len()];
    let mut out = Vec::new();
    for start in 0..ball.edges.len() {
        if class_of[start].is_some() {
            continue;
        }
        let id = out.len();
        let e0 = &ball.edges[start];
        let (wp, wc) = (ball.vertices[e0.parent].quotient_vertex, ball.vertices[e0.child].quotient_vertex);
        let h_parent = conj_set(&e0.rep, t.side(e0.quotient_edge, wp));
        let h_child = t.side(e0.quotient_edge, wc).to_vec();
        class_of[start] = Some(id);
        let mut members = vec![start];
        let mut stack = vec![(e0.parent, h_parent), (e0.child, h_child)];
        while let Some((x, h)) = stack.pop() {
            let wx = ball.vertices[x].quotient_vertex;
            for &k in &at_vertex[x] {
                if class_of[k].is_some() {
                    continue;
                }
                let e = &ball.edges[k];
                let next = if e.parent == x {
                    // Down: a⁻¹Ha must lie in G_e, then cross the edge.
                    let local = conj_set(&e.rep.inverse(), &h);
                    if !is_subset(&local, t.side(e.quotient_edge, wx)) {
                        continue;
                    }
                    let map = t.across(e.quotient_edge, wx);
                    let mut moved: Vec<Perm> = local.iter().map(|y| map[y].clone()).collect();
                    moved.sort();
                    (e.child, moved)
                } else {
                    // Up: H must lie in G_e here, then cross and conjugate by the rep.
                    if !is_subset(&h, t.side(e.quotient_edge, wx)) {
                        continue;
                    }
                    let map = t.across(e.quotient_edge, wx);
                    let moved: Vec<Perm> = h.iter().map(|y| map[y].clone()).collect();
                    (e.parent, conj_set(&e.rep, &moved))
                };
                class_of[k] = Some(id);
                members.push(k);
                stack.push(next);
            }
        }
        members.sort_unstable();
        let connected = edges_connected(ball, &members);
        out.push(Cylinder { edges: members, stabilizer_order: e0.stabilizer_order, connected });
    }
    Ok(out)
}

/// Whether a set of ball edges forms a connected subgraph.
pub fn edges_connected(ball: &TreeBall, members: &[usize]) -> bool {
    if members.is_empty() {
        return true;
    }
    let set: HashSet<usize> = members.iter().copied().collect();
    let mut seen: HashSet<usize> = HashSet::from([members[0]]);
    let mut stack = vec![members[0]];
    while let Some(k) = stack.pop() {
        let e = &ball.edges[k];
        for &j in &set {
            let f = &ball.edges[j];
            let touch = f.parent == e.parent || f.parent == e.child || f.child == e.parent || f.child == e.child;
            if touch && seen.insert(j) {
                stack.push(j);
            }
        }
    }
    seen.len() == set.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexContribution {
    pub vertex: usize,
    pub label: String,
    /// `|N_{G_w}(C_w)|`.
    pub normalizer_order: usize,
    /// Order of its image in `Aut(C)`.
    pub image_order: usize,
}

/// A normalizer element acting on the edge group by a non-inner
/// automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterActionWitness {
    pub vertex: usize,
    pub element: Perm,
    /// Each edge generator with its image, written as a word in the edge
    /// generators (1-based names).
    pub generator_images: Vec<(usize, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerImage {
    pub edge: usize,
    pub edge_order: usize,
    pub method: String,
    /// Order of the image of `N_G(C)` in `Aut(C)`.
    pub image_order: usize,
    pub inner_order: usize,
    pub equals_inner: bool,
    pub contributions: Vec<VertexContribution>,
    pub witness: Option<OuterActionWitness>,
}

struct State {
    vertex: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    /// Image of each element of `C` (sorted base order) in this vertex group.
    theta: Vec<Perm>,
    incoming: usize,
}

/// The image of `N_G(C) → Aut(C)` for `C = G_e`, assembled from the vertex
/// normalizers along the subtree fixed by `C`.
pub fn edge_normalizer_image(t: &TreeOfFiniteGroups, e: usize) -> Result<NormalizerImage, BassSerreError> {
    if e >= t.edges.len() {
        return Err(BassSerreError::NoSuchEdge(e));
    }
    let bound = t.bound;
    let c_order = t.edge_order(e);
    if let Some(k) = (0..t.edges.len()).find(|&k| t.edge_order(k) > c_order) {
        return Err(BassSerreError::NotCertified(format!(
            "edge {k} has order {} > {c_order}; the fixed subtree is not determined by edge groups",
            t.edge_order(k)
        )));
    }
    let edge = &t.edges[e];
    let c_elems = t.data[e].sub_u.clone();
    let c_index: HashMap<Perm, usize> = c_elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut queue = VecDeque::from([
        State {
            vertex: edge.u,
            gens: edge.gens_u.clone(),
            elements: t.data[e].sub_u.clone(),
            theta: c_elems.clone(),
            incoming: e,
        },
        State {
            vertex: edge.v,
            gens: edge.gens_v.clone(),
            elements: t.data[e].sub_v.clone(),
            theta: c_elems.iter().map(|c| t.data[e].u_to_v[c].clone()).collect(),
            incoming: e,
        },
    ]);
    let mut automorphisms: Vec<(usize, Perm, Perm)> = Vec::new();
    let mut contributions = Vec::new();
    while let Some(state) = queue.pop_front() {
        let w = state.vertex;
        let gw = &t.vertices[w].group;
        let cw = FinGroup::new(gw.degree(), state.gens.clone())?;
        let n = normalizer(gw, &cw, bound)?;
        let back: HashMap<&Perm, usize> = state.theta.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut local = Vec::new();
        for h in n.generators() {
            let images = state
                .theta
                .iter()
                .map(|x| back[&h.conjugate(x)] as u32)
                .collect();
            let alpha = Perm::from_images(images)?;
            local.push(alpha.clone());
            automorphisms.push((w, h.clone(), alpha));
        }
        contributions.push(VertexContribution {
            vertex: w,
            label: t.vertices[w].label.clone(),
            normalizer_order: n.order(bound)?,
            image_order: FinGroup::new(c_elems.len(), local)?.order(bound)?,
        });
        for (e2, far) in t.incident(w) {
            if e2 == state.incoming || t.edge_order(e2) != c_order {
                continue;
            }
            let target = t.side(e2, w);
            let t0 = if state.elements == target {
                Some(gw.identity())
            } else {
                gw.elements(bound)?
                    .iter()
                    .find(|x| {
                        let inv = x.inverse();
                        state.gens.iter().all(|c| target.binary_search(&(&(&inv * c) * *x)).is_ok())
                    })
                    .cloned()
            };
            let Some(t0) = t0 else { continue };
            let inv = t0.inverse();
            let map = t.across(e2, w);
            let theta = state.theta.iter().map(|x| map[&(&(&inv * x) * &t0)].clone()).collect();
            queue.push_back(State {
                vertex: far,
                gens: t.side_gens(e2, far).to_vec(),
                elements: t.side(e2, far).to_vec(),
                theta,
                incoming: e2,
            });
        }
    }
    let image = FinGroup::new(c_elems.len(), automorphisms.iter().map(|a| a.2.clone()).collect())?;
    let inner_gens: Vec<Perm> = edge
        .gens_u
        .iter()
        .map(|g| Perm::from_images(c_elems.iter().map(|x| c_index[&g.conjugate(x)] as u32).collect()))
        .collect::<Result<_, _>>()?;
    let inner = FinGroup::new(c_elems.len(), inner_gens)?;
    let image_order = image.order(bound)?;
    let inner_order = inner.order(bound)?;
    let equals_inner = image.same_subgroup(&inner, bound)?;
    let witness = if equals_inner {
        None
    } else {
        let words = element_words(&edge.gens_u, &edge.generator_labels, &c_elems);
        automorphisms
            .iter()
            .find(|(_, _, a)| !inner.contains(a, bound).unwrap_or(false))
            .map(|(w, h, a)| OuterActionWitness {
                vertex: *w,
                element: h.clone(),
                generator_images: edge
                    .gens_u
                    .iter()
                    .zip(&edge.generator_labels)
                    .map(|(g, &label)| (label, words[a.apply(c_index[g])].clone()))
                    .collect(),
            })
    };
    Ok(NormalizerImage {
        edge: e,
        edge_order: c_order,
        method: NORMALIZER_METHOD.to_string(),
        image_order,
        inner_order,
        equals_inner,
        contributions,
        witness,
    })
}

/// Shortlex-first word in the labelled generators for each element of the
/// sorted list `elements`.
fn element_words(gens: &[Perm], labels: &[usize], elements: &[Perm]) -> Vec<Vec<usize>> {
    let mut words: Vec<Option<Vec<usize>>> = vec![None; elements.len()];
    let id = elements.iter().position(Perm::is_identity).expect("identity");
    words[id] = Some(Vec::new());
    let mut queue = VecDeque::from([id]);
    while let Some(k) = queue.pop_front() {
        for (g, &label) in gens.iter().zip(labels) {
            let y = &elements[k] * g;
            let j = elements.binary_search(&y).expect("closed");
            if words[j].is_none() {
                let mut w = words[k].clone().expect("visited");
                w.push(label);
                words[j] = Some(w);
                queue.push_back(j);
            }
        }
    }
    words.into_iter().map(|w| w.expect("generated")).collect()
}
