use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::LlmUsage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPrice {
    pub input_usd_per_1k: f64,
    pub output_usd_per_1k: f64,
}

/// Per-model token prices. Loaded from a JSON map of model id to
/// `{"input_usd_per_1k": .., "output_usd_per_1k": ..}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PricingTable {
    pub entries: BTreeMap<String, ModelPrice>,
}

#[derive(Debug, thiserror::Error)]
pub enum CostError {
    #[error("no price configured for model `{0}`")]
    UnknownModel(String),
    #[error("cannot read pricing table {path}: {reason}")]
    BadPricingFile { path: String, reason: String },
}

impl PricingTable {
    pub fn insert(&mut self, model_id: impl Into<String>, input: f64, output: f64) {
        self.entries.insert(
            model_id.into(),
            ModelPrice {
                input_usd_per_1k: input,
                output_usd_per_1k: output,
            },
        );
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let table: PricingTable = serde_json::from_str(text).map_err(|e| e.to_string())?;
        for (model, price) in &table.entries {
            let ok = |v: f64| v.is_finite() && v >= 0.0;
            if !ok(price.input_usd_per_1k) || !ok(price.output_usd_per_1k) {
                return Err(format!("prices for `{model}` must be non-negative"));
            }
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CostError> {
        let path = path.as_ref();
        let bad = |reason: String| CostError::BadPricingFile {
            path: path.display().to_string(),
            reason,
        };
        let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        Self::from_json(&text).map_err(bad)
    }

    pub fn estimate_mean(
        &self,
        model_id: &str,
        mean_input_tokens: f64,
        mean_output_tokens: f64,
    ) -> Result<CostEstimate, CostError> {
        let price = self
            .entries
            .get(model_id)
            .ok_or_else(|| CostError::UnknownModel(model_id.to_string()))?;
        Ok(cost_of_tokens(mean_input_tokens, mean_output_tokens, price))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub usd: f64,
    pub input_usd: f64,
    pub output_usd: f64,
}

/// `usd = input_tokens / 1000 * input_rate + output_tokens / 1000 * output_rate`.
pub fn estimate_cost(usage: &LlmUsage, pricing: &PricingTable, model_id: &str) -> Result<CostEstimate, CostError> {
    let price = pricing
        .entries
        .get(model_id)
        .ok_or_else(|| CostError::UnknownModel(model_id.to_string()))?;
    Ok(cost_of_tokens(
        usage.input_tokens as f64,
        usage.output_tokens as f64,
        price,
    ))
}

/// Same formula for fractional (mean) token counts.
pub(crate) fn cost_of_tokens(input_tokens: f64, output_tokens: f64, price: &ModelPrice) -> CostEstimate {
    let input_usd = input_tokens / 1000.0 * price.input_usd_per_1k;
    let output_usd = output_tokens / 1000.0 * price.output_usd_per_1k;
    CostEstimate {
        usd: input_usd + output_usd,
        input_usd,
        output_usd,
    }
}
