//! Scripted checks of two explicit examples: an amalgam `A ∗_C B` of finite
//! Coxeter groups over `C = (ℤ/2)⁵` built from two different embeddings of
//! `C`, and a pair of matrices over `ℤ/11`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::fingroup::{
    marked_action, normalizer, perm_action_on_marked_set, FinGroup, FinGroupError, Mat2, Perm, DEFAULT_ORDER_BOUND,
};
use crate::matrix::{CoxeterMatrix, Label};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub item: String,
    /// The claim being checked.
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
}

/// A computed fact reported without a pass/fail judgement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub name: String,
    pub value: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checklist {
    pub name: String,
    pub all_passed: bool,
    pub items: Vec<CheckItem>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

impl Checklist {
    fn new(name: &str) -> Self {
        Checklist { name: name.into(), all_passed: true, items: Vec::new(), observations: Vec::new() }
    }

    fn check(&mut self, item: &str, anchor: &str, passed: bool, detail: impl Into<String>) {
        self.all_passed &= passed;
        self.items.push(CheckItem { item: item.into(), anchor: anchor.into(), passed, detail: detail.into() });
    }

    /// Names of failed items with their anchors.
    pub fn failures(&self) -> Vec<String> {
        self.items.iter().filter(|i| !i.passed).map(|i| format!("{}: {}", i.item, i.anchor)).collect()
    }
}

/// Points of the vertex-group models: `A` acts on 3 + 7 + 4 points, `B` on
/// 7 + 4.
pub const A_DEGREE: usize = 14;
pub const B_DEGREE: usize = 11;

/// Positions of `a₁..a₅` among the generators of `A`.
pub const A_MARKED: [usize; 5] = [0, 2, 4, 6, 8];
/// Position of `x` among the generators of `A`.
pub const A_X: usize = 3;
/// Positions of `b₁..b₅` among the generators of `B`, whose order is
/// `b₁ • b₂ • b₄ • | b₃ • b₅`.
pub const B_MARKED: [usize; 5] = [0, 2, 6, 4, 8];

const A_CYCLES: [&str; 11] = [
    "(1 2)", "(2 3)", "(4 5)", "(5 6)", "(6 7)", "(7 8)", "(8 9)", "(9 10)", "(11 12)", "(12 13)", "(13 14)",
];
const B_CYCLES: [&str; 9] = ["(1 2)", "(2 3)", "(3 4)", "(4 5)", "(5 6)", "(6 7)", "(8 9)", "(9 10)", "(10 11)"];

/// Generator names of `A`, with `•` for unnamed ones.
pub const A_NAMES: [&str; 11] = ["a1", "•", "a2", "x", "a3", "•", "a4", "•", "a5", "•", "•"];
pub const B_NAMES: [&str; 9] = ["b1", "•", "b2", "•", "b4", "•", "b3", "•", "b5"];

fn path_matrix(rank: usize, paths: &[std::ops::Range<usize>]) -> CoxeterMatrix {
    let entries: Vec<(usize, usize, Label)> = paths
        .iter()
        .flat_map(|r| (r.start..r.end - 1).map(|i| (i, i + 1, Label::Finite(3))))
        .collect();
    CoxeterMatrix::with_entries(rank, &entries).expect("valid path matrix")
}

/// `A = S₃ × S₇ × S₄` as the Coxeter system `A₂ × A₆ × A₃`.
pub fn a_matrix() -> CoxeterMatrix {
    path_matrix(11, &[0..2, 2..8, 8..11])
}

/// `B = S₇ × S₄` as `A₆ × A₃`.
pub fn b_matrix() -> CoxeterMatrix {
    path_matrix(9, &[0..6, 6..9])
}

fn perms(cycles: &[&str], degree: usize) -> Vec<Perm> {
    cycles.iter().map(|c| Perm::parse(c, degree).expect("valid cycle")).collect()
}

pub fn a_generators() -> Vec<Perm> {
    perms(&A_CYCLES, A_DEGREE)
}

pub fn b_generators() -> Vec<Perm> {
    perms(&B_CYCLES, B_DEGREE)
}

fn p5(text: &str) -> Perm {
    Perm::parse(text, 5).expect("valid permutation of 5 points")
}

/// `κ`, read off the embedding `k(c_n) = b_{κ(n)}`.
pub fn kappa() -> Perm {
    // k(c₁)=b₃, k(c₂)=b₁, k(c₃)=b₅, k(c₄)=b₄, k(c₅)=b₂.
    Perm::from_images(vec![2, 0, 4, 3, 1]).expect("bijection")
}

/// The amalgam over `C` where `a_n` is identified with `b_{π(n)}`, as a
/// rank-15 Coxeter system: `A` on generators 1..11, the four unnamed
/// generators of `B` on 12..15, and `m = ∞` between the two sides.
pub fn amalgam_system(pi: &Perm) -> CoxeterMatrix {
    let (a, b) = (a_matrix(), b_matrix());
    let mut b_to_g = [0usize; 9];
    let mut extra = 11;
    for (local, slot) in b_to_g.iter_mut().enumerate() {
        if let Some(m) = B_MARKED.iter().position(|&p| p == local) {
            let n = pi.inverse().apply(m);
            *slot = A_MARKED[n];
        } else {
            *slot = extra;
            extra += 1;
        }
    }
    let mut rows = vec![vec![Label::Infinite; 15]; 15];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = Label::Finite(1);
    }
    for (i, row) in rows.iter_mut().enumerate().take(11) {
        for (j, entry) in row.iter_mut().enumerate().take(11) {
            *entry = a.get(i, j);
        }
    }
    for i in 0..9 {
        for j in 0..9 {
            rows[b_to_g[i]][b_to_g[j]] = b.get(i, j);
        }
    }
    CoxeterMatrix::from_rows(&rows).expect("valid amalgam")
}

/// `G = A ∗_C B` through the embedding `a_n = b_n`.
pub fn counterexample_system() -> CoxeterMatrix {
    amalgam_system(&Perm::identity(5))
}

/// `G′ = A ∗_C B` through the embedding `a_n = k(c_n)`.
pub fn counterexample_prime_system() -> CoxeterMatrix {
    amalgam_system(&kappa())
}

fn relations_hold(m: &CoxeterMatrix, gens: &[Perm]) -> bool {
    (0..gens.len()).all(|i| {
        (0..gens.len()).all(|j| match m.get(i, j) {
            Label::Finite(k) => (&gens[i] * &gens[j]).order() == k as u64,
            Label::Infinite => false,
        })
    })
}

fn block_orders(gens: &[Perm], degree: usize) -> Result<Vec<usize>, FinGroupError> {
    let group = FinGroup::new(degree, gens.to_vec())?;
    group
        .orbits()
        .iter()
        .filter(|o| o.len() > 1)
        .map(|orbit| {
            let block: Vec<Perm> = gens.iter().filter(|g| orbit.contains(&g.support()[0])).cloned().collect();
            FinGroup::new(degree, block)?.order(DEFAULT_ORDER_BOUND)
        })
        .collect()
}

fn is_elementary_abelian_embedding(images: &[Perm]) -> Result<bool, FinGroupError> {
    let pairwise = images.iter().all(|x| x.order() == 2 && images.iter().all(|y| x * y == y * x));
    let order = FinGroup::new(images[0].degree(), images.to_vec())?.order(DEFAULT_ORDER_BOUND)?;
    Ok(pairwise && order == 1 << images.len())
}

fn pick(gens: &[Perm], idx: &[usize]) -> Vec<Perm> {
    idx.iter().map(|&i| gens[i].clone()).collect()
}

fn one_based(p: &Perm) -> String {
    p.to_string()
}

/// Image of `N_X(C_X) → Aut(C_X)` as index permutations of the marked
/// generators, with `|N_X(C_X)|` and the normalizer itself.
fn normalizer_action(gens: &[Perm], marked: &[Perm], degree: usize) -> Result<(FinGroup, FinGroup), FinGroupError> {
    let group = FinGroup::new(degree, gens.to_vec())?;
    let c = FinGroup::new(degree, marked.to_vec())?;
    let n = normalizer(&group, &c, DEFAULT_ORDER_BOUND)?;
    let action = perm_action_on_marked_set(n.generators(), marked)?;
    Ok((n, FinGroup::new(marked.len(), action)?))
}

fn realize(n: &FinGroup, marked: &[Perm], target: &Perm) -> Result<Option<Perm>, FinGroupError> {
    for x in n.elements(DEFAULT_ORDER_BOUND)? {
        if marked_action(x, marked)? == *target {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// Every computational claim behind the amalgam example.
pub fn verify_counterexample() -> Result<Checklist, FinGroupError> {
    let mut list = Checklist::new("counterexample");
    let (a_gens, b_gens) = (a_generators(), b_generators());
    let a_marked = pick(&a_gens, &A_MARKED);
    let b_marked = pick(&b_gens, &B_MARKED);

    // (1) models.
    list.check("1a", "A satisfies the Coxeter relations of its diagram", relations_hold(&a_matrix(), &a_gens), "all 55 pairs");
    list.check("1b", "B satisfies the Coxeter relations of its diagram", relations_hold(&b_matrix(), &b_gens), "all 36 pairs");
    let a_orders = block_orders(&a_gens, A_DEGREE)?;
    list.check("1c", "A ≅ S3 × S7 × S4 (block orders 6, 5040, 24)", a_orders == [6, 5040, 24], format!("{a_orders:?}"));
    let b_orders = block_orders(&b_gens, B_DEGREE)?;
    list.check("1d", "B ≅ S7 × S4 (block orders 5040, 24)", b_orders == [5040, 24], format!("{b_orders:?}"));
    let k = kappa();
    let k_images: Vec<Perm> = (0..5).map(|n| b_marked[k.apply(n)].clone()).collect();
    for (item, name, images) in [("1e", "i: C → A", &a_marked), ("1f", "j: C → B", &b_marked), ("1g", "k: C → B", &k_images)] {
        let ok = is_elementary_abelian_embedding(images)?;
        list.check(item, &format!("{name} is an injective homomorphism from (Z/2)^5"), ok, "images are commuting involutions generating 2^5 elements");
    }

    // (2) κ is the table of k.
    list.check("2", "kappa = (2 1 3 5), the index map of k", k == p5("(2 1 3 5)"), format!("kappa = {}", one_based(&k)));

    // (3) the involution swapping a₂ and a₃.
    let a = &(&(&a_gens[A_X] * &a_gens[2]) * &a_gens[4]) * &a_gens[A_X];
    let expected = p5_block("(1 3)(2 4)", 7, 3, A_DEGREE);
    let swaps = a.conjugate(&a_gens[2]) == a_gens[4];
    list.check(
        "3",
        "a = x a2 a3 x satisfies a a2 a^-1 = a3",
        swaps && a == expected,
        "a = (1 3)(2 4) on the S7 block",
    );

    // (4) full images.
    let (n_a, image_a) = normalizer_action(&a_gens, &a_marked, A_DEGREE)?;
    let (n_b, image_b) = normalizer_action(&b_gens, &b_marked, B_DEGREE)?;
    let s_a = FinGroup::new(5, vec![p5("(2 3)"), p5("(3 4)")])?;
    let s_b = FinGroup::new(5, vec![p5("(1 2)"), p5("(2 4)"), p5("(3 5)")])?;
    let (na_order, nb_order) = (n_a.order(DEFAULT_ORDER_BOUND)?, n_b.order(DEFAULT_ORDER_BOUND)?);
    let ia_order = image_a.order(DEFAULT_ORDER_BOUND)?;
    let ib_order = image_b.order(DEFAULT_ORDER_BOUND)?;
    list.check(
        "4a",
        "image of N_A(C_A) in Aut(C_A) is S({a2,a3,a4}), order 6",
        ia_order == 6 && image_a.same_subgroup(&s_a, DEFAULT_ORDER_BOUND)?,
        format!("|N_A(C_A)| = {na_order}, image order {ia_order}"),
    );
    list.check(
        "4b",
        "image of N_B(C_B) in Aut(C_B) is S({b1,b2,b4}) × S({b3,b5}), order 12",
        ib_order == 12 && image_b.same_subgroup(&s_b, DEFAULT_ORDER_BOUND)?,
        format!("|N_B(C_B)| = {nb_order}, image order {ib_order}"),
    );

    // (5) no pair (σ, τ) has τσ⁻¹ = κ.
    let sigmas = image_a.elements(DEFAULT_ORDER_BOUND)?;
    let taus = image_b.elements(DEFAULT_ORDER_BOUND)?;
    let five = 4;
    let sigma_fixes = sigmas.iter().all(|s| s.apply(five) == five);
    let tau_range = taus.iter().all(|t| [2, 4].contains(&t.apply(five)));
    let mut pairs = 0;
    let mut hits = 0;
    for s in sigmas {
        for t in taus {
            pairs += 1;
            if t * &s.inverse() == k {
                hits += 1;
            }
        }
    }
    list.check(
        "5",
        "tau sigma^-1 != kappa for all sigma, tau: sigma(5) = 5, tau(5) in {3,5}, kappa(5) = 2",
        sigma_fixes && tau_range && k.apply(five) == 1 && hits == 0 && pairs == 72,
        format!("{pairs} pairs compared, {hits} equal to kappa"),
    );

    // (6) identities behind the equivalence construction.
    let (alpha, beta) = (p5("(2 3 4)"), p5("(3 5)(1 2 4)"));
    let (alpha2, beta2) = (p5("(2 3)"), p5("(2 1)(3 5)"));
    let lhs = &(&k * &alpha) * &k.inverse();
    list.check("6a", "kappa alpha kappa^-1 = beta kappa", lhs == &beta * &k, format!("both sides {}", one_based(&lhs)));
    let product = &(&p5("(2 3)") * &p5("(2 1)")) * &p5("(3 5)");
    list.check("6b", "kappa = (2 3)(2 1)(3 5)", product == k, format!("product {}", one_based(&product)));
    list.check("6c", "beta' = alpha' kappa", beta2 == &alpha2 * &k, format!("alpha' kappa = {}", one_based(&(&alpha2 * &k))));
    for (item, name, n, marked, target) in [
        ("6d", "alpha", &n_a, &a_marked, &alpha),
        ("6e", "beta", &n_b, &b_marked, &beta),
        ("6f", "alpha'", &n_a, &a_marked, &alpha2),
        ("6g", "beta'", &n_b, &b_marked, &beta2),
    ] {
        let found = realize(n, marked, target)?;
        let detail = match &found {
            Some(x) => format!("realized by {}", one_based(x)),
            None => "no normalizer element acts this way".to_string(),
        };
        list.check(item, &format!("{name} = {} is induced by conjugation", one_based(target)), found.is_some(), detail);
    }

    // Normality of C_A in A is reported, not asserted.
    let c_a = FinGroup::new(A_DEGREE, a_marked.clone())?;
    let c_elems: HashSet<&Perm> = c_a.elements(DEFAULT_ORDER_BOUND)?.iter().collect();
    let normal = a_gens.iter().all(|g| a_marked.iter().all(|c| c_elems.contains(&g.conjugate(c))));
    list.observations.push(Observation {
        name: "C_A normal in A".into(),
        value: normal,
        detail: if normal {
            "every generator of A normalizes C_A".into()
        } else {
            "a1 = (1 2) is conjugated out of C_A by the generator (2 3) of the S3 block".into()
        },
    });
    Ok(list)
}

fn p5_block(text: &str, size: usize, offset: usize, degree: usize) -> Perm {
    Perm::parse(text, size).expect("valid block permutation").shift(offset, degree)
}

/// Checks on `M₀ = [[0,1],[1,0]]` and `M₁ = diag(1,2)` over `ℤ/11`.
pub fn verify_dihedral_example() -> Checklist {
    let p = 11;
    let mut list = Checklist::new("dihedral");
    let m0 = Mat2::new(p, [[0, 1], [1, 0]]);
    let m1 = Mat2::diag(p, 1, 2);
    let cube = m1.pow(3).expect("non-negative power");
    list.check("m1-cubed", "M2 = M1^3 = diag(1, 8) mod 11", cube == Mat2::diag(p, 1, 8), cube.to_string());
    let sq = m0.mul(&m0);
    list.check("m0-squared", "M0^2 = I", sq == Mat2::identity(p), sq.to_string());
    let order = (1..p).find(|&e| (0..e).fold(1, |acc, _| acc * 2 % p) == 1).unwrap_or(0);
    list.check("order-of-2", "2 has multiplicative order 10 mod 11", order == 10, format!("order {order}"));
    let conj = m0.mul(&m1).mul(&m0);
    list.check("m0-m1-m0", "M0 M1 M0 = diag(2, 1)", conj == Mat2::diag(p, 2, 1), conj.to_string());
    list.check("not-m1", "M0 M1 M0 != M1", conj != m1, format!("M1 = {m1}"));
    let inv = m1.inverse().expect("invertible");
    list.check("not-m1-inverse", "M0 M1 M0 != M1^-1", conj != inv, format!("M1^-1 = {inv}"));
    list
}
