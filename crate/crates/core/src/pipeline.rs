//! End-to-end runs: surface description in, canonical report out.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohom::{lemma_crosscheck, CrosscheckReport, ExtTable};
use crate::error::{Error, Result};
use crate::exc::{
    augment_along, exceptional_from_table, ext2_free_from_table, fullness_certificate,
    strong_from_table, Certificate, FullnessCertificate, LineBundleSequence, Provenance,
};
use crate::piclattice::{BlowupGraph, BlowupId, BlowupRecord, Center, DivisorClass, Side, Surface};
use crate::qha::{auslander_recognizer, delta_data, QhaData};
use crate::uext::{
    ext_graph_from_table, hom_table, tilting_certificate, universal_extension_with_table,
    BlockModes, ExtGraph, HomTable, Recursion, TiltingCandidate, TiltingCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Hirzebruch(i64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CenterSpec {
    Cone { cone: ConeRef },
    OnExceptional { on: BlowupId, side: Side },
}

impl CenterSpec {
    pub fn to_center(&self) -> Center {
        match self {
            CenterSpec::Cone {
                cone: ConeRef::Index(i),
            } => Center::Cone(*i),
            CenterSpec::Cone {
                cone: ConeRef::Label(l),
            } => Center::Label(l.clone()),
            CenterSpec::OnExceptional { on, side } => Center::OnExceptional {
                id: *on,
                side: *side,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSpec {
    #[serde(flatten)]
    pub center: CenterSpec,
    /// 1-based augmentation position; `None` means 1 in a single run and
    /// "try every position" when enumerating.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default = "yes")]
    pub ext_table: bool,
    #[serde(default = "yes")]
    pub qha: bool,
    #[serde(default = "yes")]
    pub crosscheck: bool,
}

fn above() -> Recursion {
    Recursion::Above
}

fn yes() -> bool {
    true
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            ext_table: true,
            qha: true,
            crosscheck: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub base: BaseSpec,
    #[serde(default)]
    pub seed_a: i64,
    #[serde(default)]
    pub blowups: Vec<BlowupSpec>,
    #[serde(default)]
    pub modes: BlockModes,
    /// Defaults to the `≻`-restricted recursion, which builds each `V_v` from
    /// the bundles of the points it blows down to.
    #[serde(default = "above")]
    pub recursion: Recursion,
    #[serde(default)]
    pub outputs: Outputs,
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn base_m(&self) -> Result<i64> {
        match &self.base {
            BaseSpec::Hirzebruch(m) => Ok(*m),
            BaseSpec::Named(name) if name.eq_ignore_ascii_case("p2") => Err(Error::Schema(
                "base P2 is not supported: blow up F_1 instead (F_1 is P2 blown up in a point)"
                    .into(),
            )),
            BaseSpec::Named(name) => Err(Error::Schema(format!("unknown base `{name}`"))),
        }
    }

    pub fn surface(&self) -> Result<Surface> {
        let mut s = Surface::new_hirzebruch(self.base_m()?)?;
        for b in &self.blowups {
            s = s.blow_up(&b.center.to_center())?;
        }
        Ok(s)
    }

    /// Positions for a single run: unspecified positions default to 1.
    pub fn positions(&self) -> Vec<usize> {
        self.blowups
            .iter()
            .map(|b| b.position.unwrap_or(1))
            .collect()
    }

    fn with_positions(&self, positions: &[usize]) -> Self {
        let mut c = self.clone();
        for (b, &p) in c.blowups.iter_mut().zip(positions) {
            b.position = Some(p);
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub base_m: i64,
    pub pic_rank: usize,
    pub k0_rank: usize,
    pub k_squared: i64,
    pub blowups: Vec<BlowupRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub position: usize,
    pub class: DivisorClass,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub exceptional: Certificate,
    pub strong: Certificate,
    pub ext2_free: Certificate,
    pub full: FullnessCertificate,
    pub tilting: TiltingCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecognition {
    pub members: Vec<usize>,
    pub auslander: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// The configuration with every augmentation position filled in; running
    /// it again reproduces this report.
    pub input: PipelineConfig,
    pub surface: SurfaceSummary,
    pub sequence: Vec<SequenceEntry>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ext_table: Option<ExtTable>,
    pub ext_graph: ExtGraph,
    pub candidate: TiltingCandidate,
    pub hom_table: HomTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qha: Option<QhaData>,
    pub blocks: Vec<BlockRecognition>,
    pub certificates: Certificates,
    pub blowup_graph: BlowupGraph,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosscheck: Option<CrosscheckReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.certificates.tilting.pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn ext_graph_dot(&self) -> String {
        let labels: Vec<String> = self.sequence.iter().map(|e| e.display.clone()).collect();
        self.ext_graph.to_dot(&labels)
    }

    pub fn blowup_graph_dot(&self) -> String {
        self.blowup_graph.to_dot()
    }

    pub fn max_rank(&self) -> i64 {
        self.candidate.ranks().into_iter().max().unwrap_or(0)
    }
}

pub fn run(config: &PipelineConfig) -> Result<Report> {
    let surface = config.surface()?;
    run_on(config, &surface, &config.positions())
}

fn run_on(config: &PipelineConfig, surface: &Surface, positions: &[usize]) -> Result<Report> {
    let seq = augment_along(surface, config.seed_a, positions)?;
    report_for(config.with_positions(positions), &seq)
}

fn report_for(input: PipelineConfig, seq: &LineBundleSequence) -> Result<Report> {
    let s = seq.surface();
    let table = seq.ext_table()?;
    let graph = ext_graph_from_table(&table);
    let candidate = universal_extension_with_table(seq, &table, &input.modes, input.recursion)?;
    let hom = hom_table(&candidate, seq)?;
    let tilting = tilting_certificate(&candidate, seq, &hom);
    let qha = if hom.certificate.holds {
        Some(delta_data(&candidate, &hom)?)
    } else {
        None
    };
    let blocks = graph
        .nontrivial_blocks()
        .map(|b| BlockRecognition {
            members: b.clone(),
            auslander: qha.as_ref().is_some_and(|q| auslander_recognizer(q, b)),
        })
        .collect();
    let k = s.canonical_class();
    let certificates = Certificates {
        exceptional: exceptional_from_table(&table),
        strong: strong_from_table(&table),
        ext2_free: ext2_free_from_table(&table),
        full: fullness_certificate(seq),
        tilting,
    };
    let crosscheck = if input.outputs.crosscheck {
        Some(lemma_crosscheck(s)?)
    } else {
        None
    };
    Ok(Report {
        surface: SurfaceSummary {
            base_m: s.base_m(),
            pic_rank: s.pic_rank(),
            k0_rank: s.k0_rank(),
            k_squared: s.intersect(&k, &k)?,
            blowups: s.blowups().to_vec(),
        },
        sequence: seq
            .classes()
            .iter()
            .enumerate()
            .map(|(k, c)| SequenceEntry {
                position: k + 1,
                class: c.clone(),
                display: format!("O({c})"),
            })
            .collect(),
        provenance: seq.provenance().clone(),
        ext_table: input.outputs.ext_table.then_some(table),
        ext_graph: graph,
        candidate,
        hom_table: hom,
        qha: if input.outputs.qha { qha } else { None },
        blocks,
        certificates,
        blowup_graph: s.blow_up_graph(),
        crosscheck,
        input,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSummary {
    pub positions: Vec<usize>,
    pub max_rank: Option<i64>,
    pub nontrivial_blocks: Option<usize>,
    pub strong: Option<bool>,
    pub exceptional: Option<bool>,
    pub tilting: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanOutcome {
    pub positions: Vec<usize>,
    pub result: std::result::Result<Report, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub plans: Vec<PlanOutcome>,
}

impl Enumeration {
    pub fn summary(&self) -> Vec<PlanSummary> {
        self.plans
            .iter()
            .map(|p| match &p.result {
                Ok(r) => PlanSummary {
                    positions: p.positions.clone(),
                    max_rank: Some(r.max_rank()),
                    nontrivial_blocks: Some(r.ext_graph.nontrivial_blocks().count()),
                    strong: Some(r.certificates.strong.holds),
                    exceptional: Some(r.certificates.exceptional.holds),
                    tilting: Some(r.passed()),
                    error: None,
                },
                Err(e) => PlanSummary {
                    positions: p.positions.clone(),
                    max_rank: None,
                    nontrivial_blocks: None,
                    strong: None,
                    exceptional: None,
                    tilting: None,
                    error: Some(e.clone()),
                },
            })
            .collect()
    }

    pub fn all_passed(&self) -> bool {
        self.plans
            .iter()
            .all(|p| p.result.as_ref().is_ok_and(Report::passed))
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary()).expect("serializable");
        s.push('\n');
        s
    }
}

/// Choices per blow-up: the fixed position, or every position of the
/// sequence at that stage.
pub fn plan_choices(config: &PipelineConfig) -> Vec<Vec<usize>> {
    config
        .blowups
        .iter()
        .enumerate()
        .map(|(k, b)| match b.position {
            Some(p) => vec![p],
            None => (1..=4 + k).collect(),
        })
        .collect()
}

pub fn plan_count(config: &PipelineConfig) -> u128 {
    plan_choices(config)
        .iter()
        .map(|c| c.len() as u128)
        .product()
}

/// All augmentation plans in lexicographic order.
pub fn plans(config: &PipelineConfig) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for choices in plan_choices(config) {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// One report per augmentation plan, computed in parallel and returned in
/// plan order.
pub fn enumerate(config: &PipelineConfig, max_plans: usize) -> Result<Enumeration> {
    let count = plan_count(config);
    if count > max_plans as u128 {
        return Err(Error::SearchSpaceExceeded {
            plans: count,
            bound: max_plans,
        });
    }
    let surface = config.surface()?;
    let plans = plans(config)
        .into_par_iter()
        .map(|positions| {
            let result = run_on(config, &surface, &positions).map_err(|e| e.to_string());
            PlanOutcome { positions, result }
        })
        .collect();
    Ok(Enumeration { plans })
}
