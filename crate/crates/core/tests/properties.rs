//! Randomized properties checked against independent oracles.

use std::f64::consts::PI;

use coxrig::bass_serre::{build_ball, cylinders, edge_normalizer_image, TreeOfFiniteGroups};
use coxrig::classification::{
    classify_component, is_spherical, moussong_hyperbolic, spherical_order, ComponentClass,
};
use coxrig::fingroup::{coxeter_perm_model, diamond, FinGroup, Perm, DEFAULT_ORDER_BOUND};
use coxrig::geometric::enumerate_elements;
use coxrig::matrix::{parse_system, CoxeterMatrix, GenSubset, Label};
use coxrig::splitting::{even_vertex_check, stallings_splitting, VertexKind};
use coxrig::words::{is_reduced, reduce_word, words_equal, DEFAULT_WORD_BUDGET};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

const EPS: f64 = 1e-9;

/// A uniformly shuffled image list on `n` points.
fn images(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle()
}

fn system(rank: usize, labels: &[Label]) -> CoxeterMatrix {
    let mut entries = Vec::new();
    let mut k = 0;
    for i in 0..rank {
        for j in i + 1..rank {
            entries.push((i, j, labels[k]));
            k += 1;
        }
    }
    CoxeterMatrix::with_entries(rank, &entries).unwrap()
}

fn label_strategy() -> impl Strategy<Value = Label> {
    prop_oneof![
        4 => Just(Label::Finite(2)),
        3 => Just(Label::Finite(3)),
        1 => Just(Label::Finite(4)),
        1 => Just(Label::Finite(5)),
        1 => Just(Label::Finite(6)),
        2 => Just(Label::Infinite),
    ]
}

fn system_strategy(max_rank: usize) -> impl Strategy<Value = CoxeterMatrix> {
    (1..=max_rank).prop_flat_map(|rank| {
        prop::collection::vec(label_strategy(), rank * (rank - 1) / 2).prop_map(move |l| system(rank, &l))
    })
}

/// Eigenvalues of the cosine form on `t`.
fn gram_eigenvalues(m: &CoxeterMatrix, t: GenSubset) -> Vec<f64> {
    let idx = t.to_vec();
    let n = idx.len();
    let b = DMatrix::from_fn(n, n, |a, c| match m.get(idx[a], idx[c]) {
        Label::Finite(k) => -(PI / k as f64).cos(),
        Label::Infinite => -1.0,
    });
    SymmetricEigen::new(b).eigenvalues.iter().copied().collect()
}

fn gram_positive_definite(m: &CoxeterMatrix, t: GenSubset) -> bool {
    gram_eigenvalues(m, t).iter().all(|&x| x > EPS)
}

fn gram_affine(m: &CoxeterMatrix, t: GenSubset) -> bool {
    let ev = gram_eigenvalues(m, t);
    ev.iter().all(|&x| x > -EPS) && ev.iter().any(|&x| x.abs() <= EPS)
}

/// Irreducible on `t`: connected through labels other than 2.
fn connected(m: &CoxeterMatrix, t: GenSubset) -> bool {
    let idx = t.to_vec();
    if idx.is_empty() {
        return false;
    }
    let mut seen = vec![idx[0]];
    let mut k = 0;
    while k < seen.len() {
        let x = seen[k];
        for &y in &idx {
            if !seen.contains(&y) && m.get(x, y) != Label::Finite(2) {
                seen.push(y);
            }
        }
        k += 1;
    }
    seen.len() == idx.len()
}

fn subsets(n: usize) -> impl Iterator<Item = GenSubset> {
    (0u32..1 << n).map(GenSubset)
}

/// Moussong's criterion straight from its statement, over all subsets.
fn moussong_oracle(m: &CoxeterMatrix) -> bool {
    let n = m.rank();
    let affine_rank3 = subsets(n).any(|t| t.len() >= 3 && connected(m, t) && gram_affine(m, t));
    if affine_rank3 {
        return false;
    }
    let infinite: Vec<GenSubset> = subsets(n).filter(|&t| !t.is_empty() && !gram_positive_definite(m, t)).collect();
    for &a in &infinite {
        for &b in &infinite {
            if a.is_disjoint(b) && a.iter().all(|i| b.iter().all(|j| m.get(i, j) == Label::Finite(2))) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spherical_matches_gram(m in system_strategy(5)) {
        for t in subsets(m.rank()) {
            let expected = t.is_empty() || gram_positive_definite(&m, t);
            prop_assert_eq!(is_spherical(&m, t), expected, "subset {}", t);
        }
    }

    #[test]
    fn component_class_matches_gram(m in system_strategy(5)) {
        for t in m.irreducible_components() {
            let class = classify_component(&m, t);
            let pd = gram_positive_definite(&m, t);
            let affine = !pd && gram_affine(&m, t);
            prop_assert_eq!(matches!(class, ComponentClass::Spherical(_)), pd);
            prop_assert_eq!(matches!(class, ComponentClass::Affine(_)), affine);
        }
    }

    #[test]
    fn moussong_matches_brute_force(m in system_strategy(5)) {
        prop_assert_eq!(moussong_hyperbolic(&m).hyperbolic, moussong_oracle(&m));
    }

    #[test]
    fn geometric_enumeration_matches_order(m in system_strategy(4)) {
        let bound = 1500;
        let found = enumerate_elements(&m, bound).unwrap().map(|v| v.len());
        match spherical_order(&m, m.full()) {
            Some(order) if order <= bound as u128 => prop_assert_eq!(found, Some(order as usize)),
            _ => prop_assert_eq!(found, None),
        }
    }

    #[test]
    fn perm_model_satisfies_relations(m in system_strategy(5)) {
        if let Ok(model) = coxeter_perm_model(&m) {
            let g = &model.generators;
            for i in 0..m.rank() {
                for j in 0..m.rank() {
                    prop_assert_eq!(Label::Finite((&g[i] * &g[j]).order() as u32), m.get(i, j));
                }
            }
            let order = model.group().order(DEFAULT_ORDER_BOUND).unwrap();
            prop_assert_eq!(Some(order as u128), spherical_order(&m, m.full()));
        }
    }

    #[test]
    fn reduce_word_invariants(m in system_strategy(4), raw in prop::collection::vec(0usize..4, 0..10)) {
        let w: Vec<usize> = raw.into_iter().filter(|&x| x < m.rank()).collect();
        let r = reduce_word(&m, &w, DEFAULT_WORD_BUDGET).unwrap();
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(r.len() % 2, w.len() % 2);
        prop_assert!(is_reduced(&m, &r, DEFAULT_WORD_BUDGET).unwrap());
        prop_assert_eq!(&reduce_word(&m, &r, DEFAULT_WORD_BUDGET).unwrap(), &r);
        prop_assert!(words_equal(&m, &w, &r, DEFAULT_WORD_BUDGET).unwrap());
        if let Ok(model) = coxeter_perm_model(&m) {
            prop_assert_eq!(model.evaluate(&w), model.evaluate(&r));
        }
    }

    #[test]
    fn splitting_invariants(m in system_strategy(6)) {
        let tree = stallings_splitting(&m);
        prop_assert!(tree.check_invariants(&m).is_ok(), "{:?}", tree.check_invariants(&m));
        let union = tree.nodes.iter().fold(GenSubset::EMPTY, |acc, n| acc.union(n.generators));
        prop_assert_eq!(union, m.full());
        for e in &tree.edges {
            prop_assert_eq!(spherical_order(&m, e.generators), Some(e.order));
        }
        for n in &tree.nodes {
            match n.kind {
                VertexKind::Finite { order } => prop_assert_eq!(spherical_order(&m, n.generators), Some(order)),
                VertexKind::OneEndedBySearch => prop_assert!(!is_spherical(&m, n.generators)),
            }
        }
        if m.is_even() {
            prop_assert!(even_vertex_check(&m, &tree));
        }
    }

    #[test]
    fn normalizer_image_contains_inner(m in system_strategy(5)) {
        let tree = stallings_splitting(&m);
        if let Ok(t) = TreeOfFiniteGroups::from_split_tree(&m, &tree, 50_000) {
            for e in 0..t.edges.len() {
                if let Ok(img) = edge_normalizer_image(&t, e) {
                    prop_assert!(img.image_order >= img.inner_order);
                    prop_assert_eq!(img.image_order % img.inner_order, 0);
                    prop_assert_eq!(img.equals_inner, img.witness.is_none());
                }
            }
        }
    }

    #[test]
    fn cylinders_are_connected(m in system_strategy(5), radius in 0usize..4) {
        let tree = stallings_splitting(&m);
        if let Ok(t) = TreeOfFiniteGroups::from_split_tree(&m, &tree, 50_000) {
            let ball = build_ball(&t, 0, radius).unwrap();
            prop_assert_eq!(ball.vertices.len(), ball.edges.len() + 1);
            if let Ok(cyl) = cylinders(&t, &ball) {
                prop_assert!(cyl.iter().all(|c| c.connected));
                prop_assert_eq!(cyl.iter().map(|c| c.edges.len()).sum::<usize>(), ball.edges.len());
            }
        }
    }

    #[test]
    fn diamond_is_symmetric(imgs in prop::collection::vec(images(5), 2..4), i in 0usize..100, j in 0usize..100) {
        let gens: Vec<Perm> = imgs.into_iter().map(|v| Perm::from_images(v).unwrap()).collect();
        let g = FinGroup::new(5, gens).unwrap();
        let elems = g.elements(DEFAULT_ORDER_BOUND).unwrap();
        let (x, y) = (&elems[i % elems.len()], &elems[j % elems.len()]);
        let xy = diamond(&g, x, y, DEFAULT_ORDER_BOUND).unwrap();
        let yx = diamond(&g, y, x, DEFAULT_ORDER_BOUND).unwrap();
        prop_assert!(xy.same_subgroup(&yx, DEFAULT_ORDER_BOUND).unwrap());
    }

    #[test]
    fn perm_text_round_trip(v in (1usize..9).prop_flat_map(images)) {
        let p = Perm::from_images(v).unwrap();
        let back = Perm::parse(&p.to_string(), p.degree()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert!((&p * &p.inverse()).is_identity());
        prop_assert_eq!(p.pow(p.order()), Perm::identity(p.degree()));
    }

    #[test]
    fn system_text_round_trip(m in system_strategy(6)) {
        prop_assert_eq!(parse_system(&m.to_system_text()).unwrap(), m.clone());
        let json = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<CoxeterMatrix>(&json).unwrap(), m);
    }
}
