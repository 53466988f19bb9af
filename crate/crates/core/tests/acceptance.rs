//! Acceptance gate: ten end-to-end criteria, each with an exact oracle and a
//! wall-clock limit. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use coxrig::bass_serre::{build_ball, cylinders, TreeOfFiniteGroups};
use coxrig::casework::{counterexample_prime_system, counterexample_system, verify_counterexample, verify_dihedral_example};
use coxrig::classification::{classify_components, spherical_type_within, ComponentClass, FiniteType};
use coxrig::fingroup::{
    coxeter_perm_model, diamond, domain_report, normal_closure, FinGroup, Perm, DEFAULT_ORDER_BOUND,
};
use coxrig::geometric::enumerate_elements;
use coxrig::matrix::{parse_system, CoxeterMatrix, Label};
use coxrig::rigidity::{rigidity_report, EdgeVerdict, HoldsReason, Overall};
use coxrig::splitting::{stallings_splitting, VertexKind};
use coxrig::words::{reduce_word, DEFAULT_WORD_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PGL: &str = "rank 3; m 1 2 = 2; m 1 3 = 3; m 2 3 = inf";

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Sign of 1/p + 1/q + 1/r - 1 with ∞ read as 1/∞ = 0, in exact arithmetic.
fn angle_sign(labels: [Option<i64>; 3]) -> i64 {
    // Multiply through by the product of the finite labels.
    let finite: Vec<i64> = labels.iter().flatten().copied().collect();
    let prod: i64 = finite.iter().product();
    let sum: i64 = finite.iter().map(|x| prod / x).sum();
    (sum - prod).signum()
}

fn triangle_trichotomy() -> Result<String, String> {
    let values: Vec<Option<i64>> = (2..=8).map(Some).chain([None]).collect();
    let label = |v: Option<i64>| v.map_or(Label::Infinite, |k| Label::Finite(k as u32));
    let mut count = 0;
    for (a, &p) in values.iter().enumerate() {
        for (b, &q) in values.iter().enumerate().skip(a) {
            for &r in values.iter().skip(b) {
                let m = CoxeterMatrix::triangle(label(p), label(q), label(r)).map_err(|e| e.to_string())?;
                let c = classify_components(&m);
                let classes: Vec<ComponentClass> = c.components.iter().map(|x| x.class).collect();
                let spherical = classes.iter().all(|k| matches!(k, ComponentClass::Spherical(_)));
                let affine = classes.iter().any(|k| matches!(k, ComponentClass::Affine(_)))
                    && classes.iter().all(|k| !matches!(k, ComponentClass::NonElementaryHyperbolic | ComponentClass::OtherInfinite));
                let hyperbolic = classes.contains(&ComponentClass::NonElementaryHyperbolic)
                    && !classes.contains(&ComponentClass::OtherInfinite);
                let ok = match angle_sign([p, q, r]) {
                    1 => spherical,
                    0 => affine,
                    _ => hyperbolic,
                };
                ensure(ok, format!("({p:?},{q:?},{r:?}) classified as {classes:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} triangles"))
}

fn order_table() -> Result<String, String> {
    let mut cases: Vec<(String, &str, usize)> = vec![
        ("A2".into(), "rank 2; m 1 2 = 3", 6),
        ("A3".into(), "rank 3; m 1 2 = 3; m 2 3 = 3", 24),
        ("B3".into(), "rank 3; m 1 2 = 3; m 2 3 = 4", 48),
        ("H3".into(), "rank 3; m 1 2 = 5; m 2 3 = 3", 120),
    ];
    let dihedral: Vec<String> = (2..=10).map(|m| format!("rank 2; m 1 2 = {m}")).collect();
    for (k, text) in dihedral.iter().enumerate() {
        let m = k + 2;
        cases.push((format!("I2({m})"), text.as_str(), 2 * m));
    }
    for (name, text, expected) in &cases {
        let m = parse_system(text).map_err(|e| e.to_string())?;
        let found = enumerate_elements(&m, 10_000).map_err(|e| e.to_string())?;
        let n = found.map(|v| v.len());
        ensure(n == Some(*expected), format!("{name}: enumerated {n:?}, expected {expected}"))?;
    }
    Ok(format!("{} groups, exact counts", cases.len()))
}

fn pgl_pipeline() -> Result<String, String> {
    let m = parse_system(PGL).map_err(|e| e.to_string())?;
    let tree = stallings_splitting(&m);
    let labels: Vec<Vec<usize>> = tree.nodes.iter().map(|n| n.generators.one_based()).collect();
    ensure(labels == vec![vec![1, 2], vec![1, 3]], format!("nodes {labels:?}"))?;
    let kinds: Vec<VertexKind> = tree.nodes.iter().map(|n| n.kind).collect();
    ensure(kinds == vec![VertexKind::Finite { order: 4 }, VertexKind::Finite { order: 6 }], format!("kinds {kinds:?}"))?;
    ensure(spherical_type_within(&m, tree.nodes[1].generators) == Some(FiniteType::A(2)), "second vertex is not D3")?;
    ensure(tree.edges.len() == 1, "expected one edge")?;
    let e = &tree.edges[0];
    ensure(e.generators.one_based() == vec![1] && e.order == 2, format!("edge {e:?}"))?;
    let r = rigidity_report(&m);
    ensure(r.overall == Overall::TorsionRigid, format!("overall {}", r.overall))?;
    ensure(
        r.edges[0].verdict == EdgeVerdict::Holds { reason: HoldsReason::TrivialOut },
        format!("verdict {:?}", r.edges[0].verdict),
    )?;
    Ok("D2 *_{Z/2} D3, TrivialOut".into())
}

fn counterexample_checklist() -> Result<String, String> {
    let list = verify_counterexample().map_err(|e| e.to_string())?;
    ensure(list.all_passed, format!("failed: {:?}", list.failures()))?;
    for (item, needle) in [
        ("6a", "kappa alpha kappa^-1 = beta kappa"),
        ("6b", "kappa = (2 3)(2 1)(3 5)"),
        ("3", "a = x a2 a3 x"),
        ("4a", "order 6"),
        ("4b", "order 12"),
        ("5", "tau sigma^-1 != kappa"),
    ] {
        let found = list.items.iter().find(|i| i.item == item).ok_or(format!("item {item} missing"))?;
        ensure(found.passed && found.anchor.contains(needle), format!("item {item}: {found:?}"))?;
    }
    let five = list.items.iter().find(|i| i.item == "5").expect("present");
    ensure(five.detail.starts_with("72 pairs"), format!("item 5 detail {}", five.detail))?;
    Ok(format!("{} items", list.items.len()))
}

fn regression_anchor() -> Result<String, String> {
    for (name, g) in [("G", counterexample_system()), ("G'", counterexample_prime_system())] {
        let r = rigidity_report(&g);
        ensure(r.overall != Overall::TorsionRigid, format!("{name} reported TorsionRigid"))?;
        ensure(r.overall == Overall::HypothesisFails, format!("{name}: {}", r.overall))?;
        let witness = r
            .edges
            .iter()
            .find_map(|e| match &e.verdict {
                EdgeVerdict::Fails { witness } => Some(witness.clone()),
                _ => None,
            })
            .ok_or(format!("{name}: no outer-action witness"))?;
        ensure(!witness.element.is_identity(), "trivial witness")?;
    }
    Ok("HypothesisFails with witness on G and G'".into())
}

fn random_even_system(rng: &mut ChaCha8Rng) -> CoxeterMatrix {
    let rank = rng.gen_range(1..=6);
    let choices = [Label::Finite(2), Label::Finite(4), Label::Finite(6), Label::Infinite, Label::Infinite];
    let mut entries = Vec::new();
    for i in 0..rank {
        for j in i + 1..rank {
            entries.push((i, j, choices[rng.gen_range(0..choices.len())]));
        }
    }
    CoxeterMatrix::with_entries(rank, &entries).expect("valid")
}

fn even_case() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut edges = 0;
    for k in 0..50 {
        let m = random_even_system(&mut rng);
        let tree = stallings_splitting(&m);
        for n in &tree.nodes {
            ensure(n.even && m.is_even_on(n.generators), format!("system {k}: odd vertex {}", n.generators))?;
        }
        let r = rigidity_report(&m);
        for e in &r.edges {
            ensure(
                e.verdict == EdgeVerdict::Holds { reason: HoldsReason::EvenRetraction },
                format!("system {k} ({}): edge {} {:?}", m.to_system_text(), e.edge, e.verdict),
            )?;
        }
        edges += r.edges.len();
    }
    Ok(format!("50 systems, {edges} edges"))
}

/// Irreducible spherical systems with `|W| ≤ 48`.
fn small_irreducibles() -> Vec<(String, CoxeterMatrix, usize)> {
    let mut out = vec![
        ("A1".to_string(), parse_system("rank 1").unwrap(), 2),
        ("A2".to_string(), parse_system("rank 2; m 1 2 = 3").unwrap(), 6),
        ("A3".to_string(), parse_system("rank 3; m 1 2 = 3; m 2 3 = 3").unwrap(), 24),
        ("B3".to_string(), parse_system("rank 3; m 1 2 = 4; m 2 3 = 3").unwrap(), 48),
    ];
    for m in 4..=24 {
        out.push((format!("I2({m})"), CoxeterMatrix::dihedral(Label::Finite(m)).unwrap(), 2 * m as usize));
    }
    out
}

/// All direct products of small irreducibles with order ≤ 48, up to order
/// of factors.
fn small_sphericals() -> Vec<(String, CoxeterMatrix, usize)> {
    let irr = small_irreducibles();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, String, CoxeterMatrix, usize)> =
        irr.iter().enumerate().map(|(i, (n, m, o))| (i, n.clone(), m.clone(), *o)).collect();
    while let Some((last, name, m, order)) = stack.pop() {
        out.push((name.clone(), m.clone(), order));
        for (i, (n2, m2, o2)) in irr.iter().enumerate().skip(last) {
            if order * o2 <= 48 {
                stack.push((i, format!("{name} x {n2}"), m.direct_sum(m2).unwrap(), order * o2));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Word length of every element, by breadth-first search of the Cayley graph.
fn geodesic_lengths(gens: &[Perm]) -> HashMap<Perm, usize> {
    let id = Perm::identity(gens[0].degree());
    let mut dist = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for g in gens {
            let y = &x * g;
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

fn word_oracle() -> Result<String, String> {
    let systems = small_sphericals();
    let mut words = 0usize;
    for (name, m, order) in &systems {
        let model = coxeter_perm_model(m).map_err(|e| format!("{name}: {e}"))?;
        let dist = geodesic_lengths(&model.generators);
        ensure(dist.len() == *order, format!("{name}: model order {} != {order}", dist.len()))?;
        let n = m.rank();
        let mut word = Vec::new();
        // Odometer over all words of length 0..=6.
        for len in 0..=6usize {
            let total = n.pow(len as u32);
            for code in 0..total {
                word.clear();
                let mut c = code;
                for _ in 0..len {
                    word.push(c % n);
                    c /= n;
                }
                let reduced = reduce_word(m, &word, DEFAULT_WORD_BUDGET).map_err(|e| format!("{name} {word:?}: {e}"))?;
                let element = model.evaluate(&word);
                ensure(
                    reduced.len() == dist[&element] && model.evaluate(&reduced) == element,
                    format!("{name} {word:?}: reduced to {reduced:?}, geodesic length {}", dist[&element]),
                )?;
                words += 1;
            }
        }
    }
    Ok(format!("{} systems, {words} words", systems.len()))
}

fn operator_semantics() -> Result<String, String> {
    let bound = DEFAULT_ORDER_BOUND;
    let s3 = FinGroup::parse(&["(1 2)", "(1 2 3)"], None).map_err(|e| e.to_string())?;
    let d = domain_report(&s3, &[], bound).map_err(|e| e.to_string())?;
    ensure(!d.is_domain, "S3 reported as a domain")?;
    let (x, y) = d.zero_divisor.clone().ok_or("no zero divisor in S3")?;
    ensure(x.order() == 3 && y.order() == 3, format!("zero divisor {x} {y} is not a pair of 3-cycles"))?;
    let a3 = normal_closure(&s3, &x, bound).map_err(|e| e.to_string())?;
    ensure(a3.order(bound) == Ok(3) && a3.is_abelian(), "closure of a 3-cycle is not A3")?;
    let z2 = FinGroup::parse(&["(1 2)"], None).map_err(|e| e.to_string())?;
    let d2 = domain_report(&z2, &[], bound).map_err(|e| e.to_string())?;
    ensure(!d2.is_domain && d2.zero_divisor.is_some(), "Z/2 reported as a domain")?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let groups = [
        FinGroup::parse(&["(1 2)", "(1 2 3 4)"], None).unwrap(),
        FinGroup::parse(&["(1 2)", "(1 2 3 4 5)"], None).unwrap(),
    ];
    for k in 0..1000 {
        let g = &groups[k % 2];
        let elems = g.elements(bound).map_err(|e| e.to_string())?;
        let x = &elems[rng.gen_range(0..elems.len())];
        let y = &elems[rng.gen_range(0..elems.len())];
        let xy = diamond(g, x, y, bound).map_err(|e| e.to_string())?;
        let yx = diamond(g, y, x, bound).map_err(|e| e.to_string())?;
        ensure(xy.same_subgroup(&yx, bound) == Ok(true), format!("diamond not symmetric on {x}, {y}"))?;
    }
    Ok("S3 and Z/2 zero divisors; 1000 symmetric pairs".into())
}

fn dihedral_example() -> Result<String, String> {
    let list = verify_dihedral_example();
    ensure(list.all_passed, format!("failed: {:?}", list.failures()))?;
    let cube = list.items.iter().find(|i| i.item == "m1-cubed").ok_or("M1^3 item missing")?;
    ensure(cube.passed && cube.anchor.contains("diag(1, 8)"), "M1^3 item")?;
    Ok(format!("{} items", list.items.len()))
}

/// Level sizes from the degrees alone: a vertex of degree d at depth ≥ 1
/// has d - 1 children, and the two vertex types alternate.
fn alternating_levels(degrees: [usize; 2], base: usize, radius: usize) -> Vec<usize> {
    let mut levels = vec![1];
    for k in 1..=radius {
        let kind = (base + k - 1) % 2;
        let children = if k == 1 { degrees[kind] } else { degrees[kind] - 1 };
        levels.push(levels[k - 1] * children);
    }
    levels
}

fn ball_combinatorics() -> Result<String, String> {
    let m = parse_system(PGL).map_err(|e| e.to_string())?;
    let t = TreeOfFiniteGroups::from_split_tree(&m, &stallings_splitting(&m), DEFAULT_ORDER_BOUND)
        .map_err(|e| e.to_string())?;
    // [D2 : Z/2] = 2 and [D3 : Z/2] = 3.
    let degrees = [4 / 2, 6 / 2];
    let mut cylinders_seen = 0;
    for base in 0..2 {
        for radius in 0..=6 {
            let ball = build_ball(&t, base, radius).map_err(|e| e.to_string())?;
            let expected = alternating_levels(degrees, base, radius);
            ensure(ball.level_counts == expected, format!("base {base} R={radius}: {:?} vs {expected:?}", ball.level_counts))?;
            ensure(ball.edges.len() + 1 == ball.vertices.len(), "ball is not a tree")?;
            if base == 0 {
                let closed: Vec<usize> = (0..=radius).map(|k| if k == 0 { 1 } else { 1 << (k / 2 + 1) }).collect();
                ensure(ball.level_counts == closed, format!("closed form at R={radius}"))?;
            }
            let cyl = cylinders(&t, &ball).map_err(|e| e.to_string())?;
            ensure(cyl.iter().all(|c| c.connected), format!("disconnected cylinder at base {base} R={radius}"))?;
            ensure(cyl.iter().map(|c| c.edges.len()).sum::<usize>() == ball.edges.len(), "cylinders do not partition")?;
            cylinders_seen += cyl.len();
        }
    }
    Ok(format!("R <= 6 from both vertex types, {cylinders_seen} cylinders"))
}

fn main() {
    let criteria: [(usize, &str, Check, Duration); 10] = [
        (1, "triangle-group trichotomy", triangle_trichotomy, Duration::from_secs(1)),
        (2, "order table", order_table, Duration::from_secs(10)),
        (3, "PGL2(Z) pipeline", pgl_pipeline, Duration::from_secs(1)),
        (4, "counterexample checklist", counterexample_checklist, Duration::from_secs(30)),
        (5, "rigidity regression anchor", regression_anchor, Duration::from_secs(30)),
        (6, "even-case edge verdicts", even_case, Duration::from_secs(30)),
        (7, "word-oracle equivalence", word_oracle, Duration::from_secs(60)),
        (8, "diamond operator semantics", operator_semantics, Duration::from_secs(10)),
        (9, "dihedral example mod 11", dihedral_example, Duration::from_secs(1)),
        (10, "Bass-Serre ball combinatorics", ball_combinatorics, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(detail) if elapsed <= limit => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over time limit ({detail})"),
            Err(e) => format!("FAIL  {e}"),
        };
        if outcome.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {id:>2} {name:<30} {:>8.3}s / {:>3}s  {outcome}", elapsed.as_secs_f64(), limit.as_secs());
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
