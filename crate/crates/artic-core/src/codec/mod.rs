//! The quantized articulation-script codec.
//!
//! An [`ArticulationScript`] is the token-level representation an external
//! predictor emits: quantized part boxes in a deterministic z-y-x order
//! followed by joints sorted by child index. Two text renderings exist, a
//! human form with bare integers and a token form with `<P_k>`-style special
//! tokens; both parse back to the same script.

mod codebook;
mod encode;
mod parse;
pub mod quant;
mod render;

pub use codebook::{build_axis_codebook, AxisCodebook, AxisError, AxisProvenance, AXIS_COUNT};
pub use encode::{encode_object, EncodeError, EncodedObject};
pub use parse::{decode_script, parse_script, parse_script_quantized, ScriptParseError};

use crate::kinematics::JointKind;
use serde::{Deserialize, Serialize};

/// Quantized axis-aligned box; bins index the 128-bin grid over [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantBox {
    /// (x, y, z) minimum bins, each in 0..=128.
    pub min_bins: [u32; 3],
    /// (x, y, z) maximum bins, each in 0..=128.
    pub max_bins: [u32; 3],
}

impl QuantBox {
    /// The z-y-x layout sort key over minimum coordinates, with maxima as
    /// tie-breaks. Identical quantized boxes remain genuinely ambiguous.
    fn sort_key(&self) -> [u32; 6] {
        [
            self.min_bins[2],
            self.min_bins[1],
            self.min_bins[0],
            self.max_bins[2],
            self.max_bins[1],
            self.max_bins[0],
        ]
    }
}

/// Quantized joint record. Field presence follows the script grammar:
/// prismatic joints carry no origin, continuous joints no limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantJoint {
    pub kind: JointKind,
    pub parent: usize,
    pub child: usize,
    /// Codebook index, 0..=127.
    pub axis_code: u32,
    /// (x, y, z) origin bins, 0..=128.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_bins: Option<[u32; 3]>,
    /// Ascending limit bins: rotation 0..=48 or translation 0..=64.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_bins: Option<[u32; 2]>,
}

/// Ordered, quantized layout + articulation. Boxes are indexed 0..n-1 by
/// their position in `boxes`; joints reference those indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ArticulationScript {
    pub boxes: Vec<QuantBox>,
    pub joints: Vec<QuantJoint>,
}

impl ArticulationScript {
    /// Human rendering: bare integers, `<|layout_s|>`-style delimiters.
    pub fn render_human(&self) -> String {
        render::render(self, render::Style::Human)
    }

    /// Token rendering: `<P_k>`/`<D_k>`/`<LR_k>`/`<LT_k>` special tokens,
    /// `<|layout_start|>`-style delimiters.
    pub fn render_tokens(&self) -> String {
        render::render(self, render::Style::Tokens)
    }

    /// Layout block only (token form), for layout-prediction samples.
    pub fn render_layout_tokens(&self) -> String {
        render::render_layout(self, render::Style::Tokens)
    }

    /// Articulation block only (token form).
    pub fn render_articulation_tokens(&self) -> String {
        render::render_articulation(self, render::Style::Tokens)
    }
}
