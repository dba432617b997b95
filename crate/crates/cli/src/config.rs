//! Config file schema and its resolution into engine inputs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use nvfix_core::descriptor::{CatalogPayload, NValuedMapDescriptor, Payload, Surface};
use nvfix_core::geometry::{CatalogMap, Rp2Class};
use nvfix_core::numerics::GridSpec;
use nvfix_core::perm::Permutation;
use nvfix_core::torus::{parse_rational, IntMatrix2, TorusLinearPayload};

/// One batch task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Classify,
    Nielsen,
    Scan,
    Verify,
}

/// The raw config document; also echoed verbatim into reports.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    /// Homotopy class selector for built projective-plane representatives.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<RawPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nielsen: Option<RawNielsen>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<RawGrid>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPayload {
    /// Torus linear model matrix, row-major.
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<[[i64; 2]; 2]>,
    /// Rational translation offset, as `p/q` strings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<[String; 2]>,
    /// Catalog map id strings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNielsen {
    /// Coincidence Nielsen numbers keyed by coordinate index.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_pair: Option<BTreeMap<String, u64>>,
    /// Per-coordinate Nielsen numbers of a split map.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_list: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster_radius: Option<f64>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<RawConfig, String> {
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    pub fn grid_spec(&self) -> Result<GridSpec, String> {
        let mut grid = GridSpec::default();
        if let Some(raw) = &self.grid {
            if let Some(r) = raw.resolution {
                grid.resolution = r;
                // keep the invariant when only the resolution moves
                grid.cluster_radius = grid.cluster_radius.max(5.0 * r);
            }
            if let Some(d) = raw.refinement_depth {
                grid.refinement_depth = d;
            }
            if let Some(c) = raw.cluster_radius {
                grid.cluster_radius = c;
            }
        }
        grid.validate()?;
        Ok(grid)
    }

    pub fn surface(&self) -> Result<Surface, String> {
        self.surface
            .as_deref()
            .ok_or_else(|| "missing field: surface".to_string())?
            .parse()
    }

    pub fn multiplicity(&self) -> Result<usize, String> {
        self.n.ok_or_else(|| "missing field: n".to_string())
    }

    pub fn rp2_class(&self) -> Result<Option<Rp2Class>, String> {
        match self.class.as_deref() {
            None => Ok(None),
            Some("trivial") => Ok(Some(Rp2Class::Trivial)),
            Some("non_trivial" | "nontrivial") => Ok(Some(Rp2Class::NonTrivial)),
            Some(other) => Err(format!(
                "unknown class {other:?}; expected trivial or non_trivial"
            )),
        }
    }

    /// Parses the sigma strings against the declared multiplicity.
    pub fn sigma(&self, n: usize) -> Result<Vec<Permutation>, String> {
        self.sigma
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .map(|s| Permutation::parse(s, n).map_err(|e| e.to_string()))
            .collect()
    }

    pub fn catalog_maps(&self) -> Result<Option<Vec<CatalogMap>>, String> {
        match self.payload.as_ref().and_then(|p| p.maps.as_ref()) {
            None => Ok(None),
            Some(ids) => ids
                .iter()
                .map(|id| CatalogMap::parse(id).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }

    pub fn torus_payload(&self) -> Result<Option<TorusLinearPayload>, String> {
        let Some(raw) = self.payload.as_ref() else {
            return Ok(None);
        };
        let Some(m) = raw.m else {
            return Ok(None);
        };
        let matrix = IntMatrix2(m);
        let payload = match &raw.c {
            None => TorusLinearPayload::new(matrix),
            Some([c0, c1]) => TorusLinearPayload::with_offset(
                matrix,
                [
                    parse_rational(c0).map_err(|e| e.to_string())?,
                    parse_rational(c1).map_err(|e| e.to_string())?,
                ],
            ),
        };
        Ok(Some(payload))
    }

    /// Builds and validates the full symbolic descriptor.
    pub fn descriptor(&self) -> Result<NValuedMapDescriptor, String> {
        let surface = self.surface()?;
        let n = self.multiplicity()?;
        let sigma = self.sigma(n)?;
        let mut d = NValuedMapDescriptor::new(surface, n, sigma);
        if let Some(torus) = self.torus_payload()? {
            d = d.with_payload(Payload::TorusLinear(torus));
        } else if let Some(maps) = self.catalog_maps()? {
            d = d.with_payload(Payload::Catalog(CatalogPayload { maps }));
        }
        d.validate().map_err(|violations| {
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        })?;
        Ok(d)
    }
}
