//! Report records emitted by the subcommands, with their text rendering.

use std::fmt::Write;

use coxrig::bass_serre::Cylinder;
use coxrig::casework::Checklist;
use coxrig::classification::{Classification, ComponentClass, MaxFiniteSpecial, MoussongReport};
use coxrig::fingroup::{DomainReport, Perm};
use coxrig::rigidity::{EdgeVerdict, RigidityReport};
use coxrig::splitting::{SplitTree, VertexKind};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub system: String,
    pub rank: usize,
    pub classification: Classification,
    pub finite: bool,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "coxrig::serde_order::option")]
    pub order: Option<u128>,
    pub rigidity: RigidityReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub system: String,
    #[serde(flatten)]
    pub classification: Classification,
    pub hyperbolicity: MoussongReport,
    pub max_finite_special: MaxFiniteSpecial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub system: String,
    #[serde(flatten)]
    pub splitting: SplitTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityRecord {
    pub system: String,
    #[serde(flatten)]
    pub report: RigidityReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReduceStatus {
    Reduced,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub system: String,
    /// 1-based generator numbers.
    pub word: Vec<usize>,
    pub status: ReduceStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupReport {
    pub generators: Vec<Perm>,
    pub order: usize,
    pub normalizer_order: usize,
    pub normal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondReport {
    pub x: Perm,
    pub y: Perm,
    pub order: usize,
    pub perpendicular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutReport {
    pub order: usize,
    pub inner_order: usize,
    pub out_trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingroupReport {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub order: usize,
    pub abelian: bool,
    /// 1-based points.
    pub orbits: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diamond: Option<DiamondReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphisms: Option<AutReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledOrder {
    pub label: String,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderSummary {
    pub stabilizer_order: usize,
    pub edges: usize,
    pub connected: bool,
}

impl From<&Cylinder> for CylinderSummary {
    fn from(c: &Cylinder) -> Self {
        CylinderSummary { stabilizer_order: c.stabilizer_order, edges: c.edges.len(), connected: c.connected }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallReport {
    pub system: String,
    pub radius: usize,
    /// 1-based splitting node.
    pub base: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub level_counts: Vec<usize>,
    pub vertex_groups: Vec<LabelledOrder>,
    pub edge_groups: Vec<LabelledOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cylinders: Option<Vec<CylinderSummary>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cylinder_error: Option<String>,
}

fn class_text(c: &ComponentClass) -> String {
    match c {
        ComponentClass::Spherical(t) => format!("Spherical {t}"),
        ComponentClass::Affine(t) => format!("Affine {t}"),
        other => other.name().to_string(),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classification_text(out: &mut String, c: &Classification) {
    for comp in &c.components {
        let order = comp.order.map(|o| format!(", order {o}")).unwrap_or_default();
        let _ = writeln!(out, "component {}: {}{order}", comp.generators, class_text(&comp.class));
    }
    let _ = writeln!(out, "finite/affine/hyperbolic components only: {}", yes(c.theorem1_hypothesis));
}

fn splitting_text(out: &mut String, t: &SplitTree) {
    let _ = writeln!(out, "splitting: {} nodes, {} edges", t.nodes.len(), t.edges.len());
    for (k, n) in t.nodes.iter().enumerate() {
        let kind = match n.kind {
            VertexKind::Finite { order } => format!("finite, order {order}"),
            VertexKind::OneEndedBySearch => "one-ended (by search)".to_string(),
        };
        let _ = writeln!(out, "  node {} {}: {kind}{}", k + 1, n.generators, if n.even { ", even" } else { "" });
    }
    for e in &t.edges {
        let _ = writeln!(out, "  edge {}-{} over {}: order {}", e.from + 1, e.to + 1, e.generators, e.order);
    }
}

fn rigidity_text(out: &mut String, r: &RigidityReport) {
    let _ = writeln!(out, "hyperbolic: {}", yes(r.hyperbolicity.hyperbolic));
    for e in &r.edges {
        let verdict = match &e.verdict {
            EdgeVerdict::Holds { reason } => format!("holds ({reason:?})"),
            EdgeVerdict::Fails { witness } => format!("fails (outer action by {} at node {})", witness.element, witness.vertex + 1),
            EdgeVerdict::Unknown { reason } => format!("unknown ({reason})"),
        };
        let _ = writeln!(out, "edge {} over {}: {verdict}", e.edge + 1, e.generators);
    }
    let _ = writeln!(out, "overall: {}", r.overall);
    if !r.theorems.is_empty() {
        let _ = writeln!(out, "theorems: {}", r.theorems.join(", "));
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
}

pub trait Render {
    fn text(&self) -> String;
}

impl Render for AnalyzeReport {
    fn text(&self) -> String {
        let mut out = format!("system: {}\n", self.system);
        classification_text(&mut out, &self.classification);
        match self.order {
            Some(o) => {
                let _ = writeln!(out, "finite group of order {o}");
            }
            None => out.push_str("infinite group\n"),
        }
        splitting_text(&mut out, &self.rigidity.splitting);
        rigidity_text(&mut out, &self.rigidity);
        out
    }
}

impl Render for ClassifyReport {
    fn text(&self) -> String {
        let mut out = format!("system: {}\n", self.system);
        classification_text(&mut out, &self.classification);
        let _ = writeln!(out, "hyperbolic: {}", yes(self.hyperbolicity.hyperbolic));
        let _ = writeln!(out, "largest finite special subgroup: order {}", self.max_finite_special.order);
        out
    }
}

impl Render for SplitReport {
    fn text(&self) -> String {
        let mut out = format!("system: {}\n", self.system);
        splitting_text(&mut out, &self.splitting);
        out
    }
}

impl Render for RigidityRecord {
    fn text(&self) -> String {
        let mut out = format!("system: {}\n", self.system);
        rigidity_text(&mut out, &self.report);
        out
    }
}

fn word_text(w: &[usize]) -> String {
    if w.is_empty() {
        "(empty)".to_string()
    } else {
        w.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    }
}

impl Render for ReduceReport {
    fn text(&self) -> String {
        match (&self.status, &self.reduced) {
            (ReduceStatus::Reduced, Some(r)) => {
                format!("word: {}\nreduced: {}\nlength: {}\n", word_text(&self.word), word_text(r), r.len())
            }
            _ => format!("word: {}\nbudget of {} words exhausted\n", word_text(&self.word), self.budget),
        }
    }
}

impl Render for FingroupReport {
    fn text(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(Perm::to_string).collect();
        let mut out = format!("generators: {}\ndegree: {}\norder: {}\nabelian: {}\n", gens.join(", "), self.degree, self.order, yes(self.abelian));
        if let Some(s) = &self.subgroup {
            let _ = writeln!(out, "subgroup: order {}, normalizer order {}, normal: {}", s.order, s.normalizer_order, yes(s.normal));
        }
        if let Some(d) = &self.diamond {
            let _ = writeln!(out, "diamond {} {}: order {}, perpendicular: {}", d.x, d.y, d.order, yes(d.perpendicular));
        }
        if let Some(d) = &self.domain {
            let _ = writeln!(out, "domain: {}", yes(d.is_domain));
            if let Some((x, y)) = &d.zero_divisor {
                let _ = writeln!(out, "zero divisor: {x} {y}");
            }
        }
        if let Some(a) = &self.automorphisms {
            let _ = writeln!(out, "automorphisms: {} (inner {}), outer trivial: {}", a.order, a.inner_order, yes(a.out_trivial));
        }
        out
    }
}

impl Render for BallReport {
    fn text(&self) -> String {
        let mut out = format!("system: {}\nradius {} around node {}\n", self.system, self.radius, self.base);
        let _ = writeln!(out, "vertices: {}, edges: {}", self.vertex_count, self.edge_count);
        let levels: Vec<String> = self.level_counts.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "level counts: {}", levels.join(" "));
        for v in &self.vertex_groups {
            let _ = writeln!(out, "vertex group {}: order {}", v.label, v.order);
        }
        for e in &self.edge_groups {
            let _ = writeln!(out, "edge group {}: order {}", e.label, e.order);
        }
        if let Some(c) = &self.cylinders {
            let sizes: Vec<String> = c.iter().map(|c| c.edges.to_string()).collect();
            let _ = writeln!(out, "cylinders: {} (sizes {})", c.len(), sizes.join(" "));
        }
        if let Some(e) = &self.cylinder_error {
            let _ = writeln!(out, "cylinders: {e}");
        }
        out
    }
}

impl Render for Checklist {
    fn text(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            let _ = writeln!(out, "[{}] {} {}: {}", if i.passed { "pass" } else { "FAIL" }, i.item, i.anchor, i.detail);
        }
        for o in &self.observations {
            let _ = writeln!(out, "observation: {} = {} ({})", o.name, o.value, o.detail);
        }
        let _ = writeln!(out, "{}: {}", self.name, if self.all_passed { "all items pass" } else { "some items FAIL" });
        out
    }
}
