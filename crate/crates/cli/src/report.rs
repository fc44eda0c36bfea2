use foliate::analysis::{ContactBound, CornerReport, OutermostReport};
use foliate::branch::{ContactWitness, ProductComplement, TwistedDiskReport};
use foliate::diagram::Wave;
use serde::{Deserialize, Serialize};

use crate::Options;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    FoliationCriterionMet,
    DiagnosticsOnly,
    HypothesisViolation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEntry {
    pub id: usize,
    pub size: usize,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateSection {
    pub vertices: usize,
    pub edges: usize,
    pub faces: Vec<FaceEntry>,
    pub euler: i64,
    pub tight: bool,
    /// Waves against both families; absent when a bigon makes them undefined.
    pub waves: Option<Vec<Wave>>,
    pub complexity: Option<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceSection {
    pub steps: usize,
    /// Vertex count along the wave-move path.
    pub c3: Vec<usize>,
    pub complexity: (usize, usize, usize),
    pub diagram: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiteheadEntry {
    pub cut: String,
    pub form: String,
    pub parameters: Option<(usize, usize, usize, usize)>,
    pub multiplicities: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandSumEntry {
    pub m: usize,
    pub length: usize,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiteheadSection {
    pub graphs: Vec<WhiteheadEntry>,
    pub parallel_classes: usize,
    pub band_sum: Option<BandSumEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSection {
    pub relators: Vec<String>,
    pub homology: String,
    pub b1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSection {
    pub depth: usize,
    pub constraints: String,
    pub obstruction: Option<String>,
    pub ball: usize,
    pub positives: usize,
    pub pieces: usize,
    /// Signed class representatives, filled by the `order` command only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSection {
    pub minimal_region: usize,
    pub sectors: usize,
    pub cusps: usize,
    pub flips: [bool; 4],
    pub trivial: Vec<usize>,
    pub undecided: Vec<usize>,
    pub m: usize,
    pub corners: Option<CornerReport>,
    pub product_complement: Option<ProductComplement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactSection {
    pub weight: usize,
    pub twisted_disk: Option<TwistedDiskReport>,
    pub disks: Vec<ContactWitness>,
    pub bound: ContactBound,
    pub outermost: Vec<OutermostReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSection {
    pub steps: usize,
    pub seed: u64,
    pub events: usize,
    /// Counts of split types 1, 2, 3.
    pub types: [usize; 3],
    pub halted: Option<String>,
    pub undecided: usize,
    pub conflicts: usize,
    pub positivity_checks: usize,
    pub max_word: usize,
    pub sectors: usize,
    pub cusps: usize,
    pub initial_digest: String,
    pub final_digest: String,
    pub replay_matches: bool,
    pub twisted_disk_undecided: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema: u32,
    pub version: String,
    pub input: String,
    pub options: Options,
    /// Seconds since the epoch; the only field that varies between runs.
    pub timestamp: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validate: Option<ValidateSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduce: Option<ReduceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub whitehead: Option<WhiteheadSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact: Option<ContactSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSection>,
    pub notes: Vec<String>,
    pub violations: Vec<String>,
    pub verdict: Verdict,
}

impl PipelineReport {
    pub fn new(input: &str, opts: &Options) -> PipelineReport {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        PipelineReport {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            input: input.to_string(),
            options: opts.clone(),
            timestamp,
            validate: None,
            reduce: None,
            whitehead: None,
            presentation: None,
            order: None,
            branch: None,
            contact: None,
            split: None,
            notes: Vec::new(),
            violations: Vec::new(),
            verdict: Verdict::DiagnosticsOnly,
        }
    }

    /// Sets the verdict from the filled sections.
    pub fn finish(mut self) -> PipelineReport {
        let complement = self
            .branch
            .as_ref()
            .and_then(|b| b.product_complement.as_ref())
            .is_some_and(|p| p.holds);
        let split_ran = self.split.as_ref().is_some_and(|s| s.events > 0);
        self.verdict = if !self.violations.is_empty() {
            Verdict::HypothesisViolation
        } else if complement && split_ran {
            Verdict::FoliationCriterionMet
        } else {
            Verdict::DiagnosticsOnly
        };
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::HypothesisViolation => 2,
            _ => 0,
        }
    }

    /// Pretty JSON with the timestamp zeroed, for comparisons.
    pub fn stable_json(&self) -> String {
        let mut r = self.clone();
        r.timestamp = 0;
        serde_json::to_string_pretty(&r).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(events: usize) -> SplitSection {
        SplitSection {
            steps: events,
            seed: 0,
            events,
            types: [events, 0, 0],
            halted: None,
            undecided: 0,
            conflicts: 0,
            positivity_checks: 0,
            max_word: 0,
            sectors: 0,
            cusps: 0,
            initial_digest: String::new(),
            final_digest: String::new(),
            replay_matches: true,
            twisted_disk_undecided: 0,
        }
    }

    fn branch(holds: bool) -> BranchSection {
        BranchSection {
            minimal_region: 0,
            sectors: 0,
            cusps: 0,
            flips: [false; 4],
            trivial: vec![0],
            undecided: vec![],
            m: 0,
            corners: None,
            product_complement: Some(ProductComplement {
                holds,
                deleted: 1,
                components: 1,
                conclusion: String::new(),
            }),
        }
    }

    #[test]
    fn verdict_rule() {
        let opts = Options::default();
        let mut r = PipelineReport::new("x", &opts);
        r.branch = Some(branch(true));
        r.split = Some(split(3));
        let met = r.clone().finish();
        assert_eq!((met.verdict, met.exit_code()), (Verdict::FoliationCriterionMet, 0));

        let mut none = r.clone();
        none.split = Some(split(0));
        assert_eq!(none.finish().verdict, Verdict::DiagnosticsOnly);

        let mut open = r.clone();
        open.branch = Some(branch(false));
        assert_eq!(open.finish().verdict, Verdict::DiagnosticsOnly);

        let mut bad = r;
        bad.violations.push("planted".into());
        let bad = bad.finish();
        assert_eq!((bad.verdict, bad.exit_code()), (Verdict::HypothesisViolation, 2));
    }

    #[test]
    fn stable_json_ignores_the_clock() {
        let opts = Options::default();
        let mut a = PipelineReport::new("x", &opts);
        let mut b = a.clone();
        a.timestamp = 1;
        b.timestamp = 2;
        assert_eq!(a.stable_json(), b.stable_json());
    }
}
