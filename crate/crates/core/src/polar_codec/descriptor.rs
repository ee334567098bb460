//! Text descriptor for a code:
//!
//! ```text
//! n = 3
//! E = 0.11
//! frozen_set = [1, 2, 3, 5]
//! ```
//!
//! `E` is omitted for codes built from an explicit frozen set. The writer
//! emits exactly this layout so fixture files diff cleanly; the reader
//! accepts any TOML with these keys.

use serde::Deserialize;

use crate::error::{Error, Result};

use super::PolarCode;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Descriptor {
    n: u32,
    #[serde(rename = "E")]
    design_e: Option<f64>,
    frozen_set: Vec<usize>,
}

impl PolarCode {
    pub fn to_descriptor(&self) -> String {
        let mut out = format!("n = {}\n", self.log_len());
        if let Some(e) = self.design_e() {
            out.push_str(&format!("E = {e:?}\n"));
        }
        let frozen: Vec<String> = self.frozen_set().iter().map(usize::to_string).collect();
        out.push_str(&format!("frozen_set = [{}]\n", frozen.join(", ")));
        out
    }

    pub fn from_descriptor(text: &str) -> Result<Self> {
        let desc: Descriptor = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if desc.frozen_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::FrozenSet(
                "frozen_set must be strictly ascending".into(),
            ));
        }
        let code = PolarCode::from_frozen_set(desc.n, &desc.frozen_set)?;
        Ok(match desc.design_e {
            Some(e) => code.with_design_e(e),
            None => code,
        })
    }
}
