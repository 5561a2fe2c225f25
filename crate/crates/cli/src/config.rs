//! The run configuration shared by every subcommand.
//!
//! A command's inputs can come from flags, from a `--config` JSON file, or
//! both (flags override file values). Numeric fields that accept `pi`
//! literals are carried as strings and parsed exactly at resolution time.

use serde::{Deserialize, Serialize};

/// Flat bag of every parameter any subcommand understands. Unset fields
/// are omitted from the canonical JSON form, so a config round-trips to an
/// identical document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warp_table: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vc: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_index: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_list: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impacts_csv: Option<String>,
}

impl RunConfig {
    /// Overlay `self` (flag values) on top of `base` (config-file values).
    pub fn over(self, base: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($field:ident) => {
                self.$field.or(base.$field)
            };
        }
        RunConfig {
            metric: pick!(metric),
            warp_table: pick!(warp_table),
            profile: pick!(profile),
            from: pick!(from),
            to: pick!(to),
            vc: pick!(vc),
            u: pick!(u),
            v: pick!(v),
            u_range: pick!(u_range),
            v_range: pick!(v_range),
            u0: pick!(u0),
            u1: pick!(u1),
            m_index: pick!(m_index),
            m_list: pick!(m_list),
            v0: pick!(v0),
            branch: pick!(branch),
            ks: pick!(ks),
            delta_v: pick!(delta_v),
            l: pick!(l),
            n_cells: pick!(n_cells),
            slope_grid: pick!(slope_grid),
            p_max: pick!(p_max),
            n: pick!(n),
            seed: pick!(seed),
            samples: pick!(samples),
            out: pick!(out),
            csv: pick!(csv),
            svg: pick!(svg),
            impacts_csv: pick!(impacts_csv),
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }
}
