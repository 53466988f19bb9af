//! Certificates for the torsion-rigidity hypothesis on edge groups of the
//! Stallings splitting.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bass_serre::{edge_normalizer_image, NormalizerImage, OuterActionWitness, TreeOfFiniteGroups};
use crate::classification::{classify_components, moussong_hyperbolic, MoussongReport};
use crate::fingroup::{coxeter_perm_model, find_outer_automorphism, DEFAULT_ORDER_BOUND, MAX_AUT_GROUP_ORDER};
use crate::matrix::{CoxeterMatrix, GenSubset};
use crate::splitting::{stallings_splitting, SplitTree, VertexKind};

pub const TAG_MAIN: &str = "Thm-main_theorem2";
pub const TAG_EVEN: &str = "Cor-corollary-even";
pub const TAG_ONE_ENDED: &str = "Cor-corollary-one-ended";
pub const TAG_TRICHOTOMY: &str = "Thm-final_main_theorem";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HoldsReason {
    TrivialOut,
    EvenRetraction,
    ComputedEqualsInn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum EdgeVerdict {
    Holds { reason: HoldsReason },
    Fails { witness: OuterActionWitness },
    Unknown { reason: String },
}

impl EdgeVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EdgeVerdict::Holds { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub edge: usize,
    pub generators: GenSubset,
    #[serde(with = "crate::serde_order")]
    pub order: u128,
    #[serde(flatten)]
    pub verdict: EdgeVerdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normalizer_image: Option<NormalizerImage>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overall {
    #[serde(rename = "TorsionRigid-by-Thm-1.6")]
    TorsionRigid,
    NotCovered,
    HypothesisFails,
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Overall::TorsionRigid => "TorsionRigid-by-Thm-1.6",
            Overall::NotCovered => "NotCovered",
            Overall::HypothesisFails => "HypothesisFails",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub hyperbolicity: MoussongReport,
    pub splitting: SplitTree,
    pub edges: Vec<EdgeReport>,
    pub overall: Overall,
    pub theorem1_trichotomy: bool,
    /// Applicable theorem tags, strongest first.
    pub theorems: Vec<String>,
    pub notes: Vec<String>,
}

/// Lazily built tree of finite groups shared by the edges of one report.
struct Context<'a> {
    m: &'a CoxeterMatrix,
    tree: &'a SplitTree,
    bound: usize,
    groups: Option<Result<TreeOfFiniteGroups, String>>,
}

impl Context<'_> {
    fn groups(&mut self) -> Result<&TreeOfFiniteGroups, String> {
        if self.groups.is_none() {
            let built = TreeOfFiniteGroups::from_split_tree(self.m, self.tree, self.bound).map_err(|e| e.to_string());
            self.groups = Some(built);
        }
        self.groups.as_ref().expect("just built").as_ref().map_err(Clone::clone)
    }

    fn edge(&mut self, e: usize) -> EdgeReport {
        let edge = &self.tree.edges[e];
        let report = |verdict, normalizer_image| EdgeReport {
            edge: e,
            generators: edge.generators,
            order: edge.order,
            verdict,
            normalizer_image,
        };
        if self.m.is_even() {
            return report(EdgeVerdict::Holds { reason: HoldsReason::EvenRetraction }, None);
        }
        if edge.order <= MAX_AUT_GROUP_ORDER as u128 {
            let induced = self.m.induced_system(edge.generators).expect("edge label is valid");
            if let Ok(model) = coxeter_perm_model(&induced.matrix) {
                if let Ok(None) = find_outer_automorphism(&model.group()) {
                    return report(EdgeVerdict::Holds { reason: HoldsReason::TrivialOut }, None);
                }
            }
        }
        if !self.tree.nodes.iter().all(|n| matches!(n.kind, VertexKind::Finite { .. })) {
            return report(EdgeVerdict::Unknown { reason: "a vertex group is infinite".into() }, None);
        }
        let image = self.groups().and_then(|t| edge_normalizer_image(t, e).map_err(|err| err.to_string()));
        match image {
            Ok(img) => match img.witness.clone() {
                None => report(EdgeVerdict::Holds { reason: HoldsReason::ComputedEqualsInn }, Some(img)),
                Some(witness) => report(EdgeVerdict::Fails { witness }, Some(img)),
            },
            Err(reason) => report(EdgeVerdict::Unknown { reason }, None),
        }
    }
}

/// Verdict for one edge of a splitting of `m`.
pub fn edge_condition(m: &CoxeterMatrix, tree: &SplitTree, e: usize, bound: usize) -> EdgeReport {
    Context { m, tree, bound, groups: None }.edge(e)
}

pub fn rigidity_report(m: &CoxeterMatrix) -> RigidityReport {
    rigidity_report_with(m, DEFAULT_ORDER_BOUND)
}

pub fn rigidity_report_with(m: &CoxeterMatrix, bound: usize) -> RigidityReport {
    let hyperbolicity = moussong_hyperbolic(m);
    let splitting = stallings_splitting(m);
    let mut ctx = Context { m, tree: &splitting, bound, groups: None };
    let edges: Vec<EdgeReport> = (0..splitting.edges.len()).map(|e| ctx.edge(e)).collect();
    let theorem1_trichotomy = classify_components(m).theorem1_hypothesis;
    let all_hold = edges.iter().all(|e| e.verdict.holds());
    let any_fails = edges.iter().any(|e| matches!(e.verdict, EdgeVerdict::Fails { .. }));
    let overall = if !hyperbolicity.hyperbolic {
        Overall::NotCovered
    } else if all_hold {
        Overall::TorsionRigid
    } else if any_fails {
        Overall::HypothesisFails
    } else {
        Overall::NotCovered
    };
    let one_ended =
        splitting.nodes.len() == 1 && matches!(splitting.nodes[0].kind, VertexKind::OneEndedBySearch);
    let mut theorems = Vec::new();
    if overall == Overall::TorsionRigid {
        theorems.push(TAG_MAIN.to_string());
    }
    if hyperbolicity.hyperbolic && m.is_even() {
        theorems.push(TAG_EVEN.to_string());
    }
    if hyperbolicity.hyperbolic && one_ended {
        theorems.push(TAG_ONE_ENDED.to_string());
    }
    if theorem1_trichotomy {
        theorems.push(TAG_TRICHOTOMY.to_string());
    }
    let mut notes = Vec::new();
    if !hyperbolicity.hyperbolic {
        notes.push("not hyperbolic: the edge-group criterion does not apply".to_string());
        if theorem1_trichotomy {
            notes.push("every component is finite, affine or hyperbolic: the Coxeter-closure result applies".to_string());
        }
    }
    if overall == Overall::HypothesisFails {
        notes.push("the hypothesis fails on some edge; this does not show the group is not rigid".to_string());
    }
    RigidityReport { hyperbolicity, splitting, edges, overall, theorem1_trichotomy, theorems, notes }
}
