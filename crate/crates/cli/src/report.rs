//! The machine-readable report document and its text rendering.
//!
//! Reports are deterministic for a fixed config, seed and tool version;
//! wall time goes to stderr, never into the document.

use serde::Serialize;

use nvfix_core::descriptor::CoveringAnalysis;
use nvfix_core::nielsen::ClassCount;
use nvfix_core::numerics::FixedPointReport;
use nvfix_core::torus::{CoincidenceCount, IntMatrix2};
use nvfix_core::verify::SuiteReport;

use crate::config::RawConfig;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringSection {
    pub split: bool,
    #[serde(flatten)]
    pub analysis: CoveringAnalysis,
}

#[derive(Debug, Clone, Serialize)]
pub struct NielsenSection {
    /// Which formula produced the total: `split_additivity` over the
    /// coordinates, the `orbit_sum` over coincidence pairs, or the
    /// `double_cover_determinant` of a torus linear model.
    pub formula_used: &'static str,
    pub terms: Vec<u64>,
    pub total: u64,
    pub provenance: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering_lattice: Option<IntMatrix2>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidence_det: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_count: Option<CoincidenceCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homotopy_classes: Option<ClassCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_valued_degree: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detected_class: Option<&'static str>,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub config: RawConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering: Option<CoveringSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nielsen: Option<NielsenSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<FixedPointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteReport>,
}

impl Report {
    pub fn new(config: RawConfig) -> Self {
        Report {
            tool: ToolInfo {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
            },
            config,
            covering: None,
            classification: None,
            nielsen: None,
            scan: None,
            suite: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("{} {}", self.tool.name, self.tool.version)];
        if let Some(covering) = &self.covering {
            lines.push(format!(
                "covering: split={} |L'|={} orbits={:?} representatives={:?} free={} lifts={}",
                covering.split,
                covering.analysis.index_h,
                covering.analysis.orbits.orbits,
                covering.analysis.orbits.representatives,
                covering.analysis.is_free(),
                covering.analysis.lift_count,
            ));
        }
        if let Some(c) = &self.classification {
            if let Some(count) = &c.homotopy_classes {
                let rendered = match count {
                    ClassCount::Finite(k) => k.to_string(),
                    ClassCount::Countable => "countable (indexed by degree)".to_string(),
                };
                lines.push(format!("homotopy classes: {rendered}"));
            }
            if let Some(d) = c.two_valued_degree {
                lines.push(format!("two-valued degree: {d}"));
            }
            if let Some(class) = c.detected_class {
                lines.push(format!("detected class: {class}"));
            }
        }
        if let Some(n) = &self.nielsen {
            lines.push(format!(
                "nielsen: total={} formula={} terms={:?} [{}]",
                n.total, n.formula_used, n.terms, n.provenance
            ));
            if let Some(q) = &n.covering_lattice {
                lines.push(format!("  covering lattice Q={q}"));
            }
            if let Some(det) = n.coincidence_det {
                lines.push(format!("  det(M-Q)={det}"));
            }
            if let Some(count) = &n.oracle_count {
                lines.push(format!("  oracle count: {count:?}"));
            }
            if n.degenerate == Some(true) {
                lines.push("  degenerate linear model: N=0 not asserted sharp".into());
            }
        }
        if let Some(scan) = &self.scan {
            lines.push(format!(
                "scan: {} cluster(s) for {} [scan]",
                scan.total_count, scan.map_id
            ));
            for c in &scan.clusters {
                lines.push(format!(
                    "  cluster at {:?} index={:?} diameter={:.2e} source={:?}",
                    c.location, c.index, c.diameter, c.source
                ));
            }
        }
        if let Some(suite) = &self.suite {
            lines.push(format!(
                "suite {}: {}",
                suite.suite,
                if suite.passed { "PASS" } else { "FAIL" }
            ));
            for check in &suite.checks {
                lines.push(format!(
                    "  [{}] {} — {}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.id,
                    check.detail
                ));
            }
        }
        lines.push(String::new());
        lines.join("\n")
    }
}
