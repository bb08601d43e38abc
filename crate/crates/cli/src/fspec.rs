//! Function specs: `kappa:n`, a series JSON file, or a measure JSON file.

use std::path::Path;

use krzyz_core::nonvan::{certify_within, kappa, DEFAULT_CERT_RADIUS};
use krzyz_core::{HerglotzMeasure, NonvanishingFunction, PowerSeries};

use crate::Fail;

pub fn load(spec: &str, order: usize) -> Result<NonvanishingFunction, Fail> {
    if let Some(n) = spec.strip_prefix("kappa:") {
        let n: usize = n
            .parse()
            .map_err(|_| Fail::Usage(format!("bad kappa index in '{spec}'")))?;
        if n == 0 {
            return Err(Fail::Usage("kappa index must be >= 1".into()));
        }
        return kappa(n, order).map_err(|e| Fail::Input(format!("{spec}: {e}")));
    }
    let text = std::fs::read_to_string(Path::new(spec))
        .map_err(|e| Fail::Input(format!("cannot read function file {spec}: {e}")))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Fail::Input(format!("{spec}: {e}")))?;
    let certified = if value.get("atoms").is_some() {
        let mu: HerglotzMeasure = serde_json::from_value(value).map_err(|e| Fail::Input(format!("{spec}: {e}")))?;
        mu.realize(order)
    } else {
        let s: PowerSeries = serde_json::from_value(value).map_err(|e| Fail::Input(format!("{spec}: {e}")))?;
        certify_within(&s, DEFAULT_CERT_RADIUS)
    };
    certified.map_err(|e| Fail::Input(format!("{spec} is not a certified member: {e}")))
}
