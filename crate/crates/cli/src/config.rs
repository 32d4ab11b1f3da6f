//! JSON run configuration: schema types, strict parsing and range
//! validation with key-path error messages.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub geometry: GeometryBlock,
    pub soi: SoiBlock,
    /// One block per tier ring (2R, 2√3R, 4R); a single block applies to all.
    pub interferers: Vec<InterfererBlock>,
    #[serde(rename = "T_dB", default = "default_t_db")]
    pub t_db: f64,
    #[serde(default)]
    pub series: SeriesBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reuse: Option<ReuseBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub typical: Option<TypicalBlock>,
}

fn default_t_db() -> f64 {
    0.0
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Outage,
    Rate,
    Typical,
    McValidate,
    Reuse,
    Sweep,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    #[serde(rename = "R_m")]
    pub r_cell_m: f64,
    #[serde(default = "default_tiers")]
    pub tiers: u32,
    pub r_m: f64,
    #[serde(default)]
    pub azimuth_rad: f64,
    pub alpha: f64,
}

fn default_tiers() -> u32 {
    2
}

/// SoI shadowing parameter: finite, or "inf" for the κ-μ limit forms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum MParam {
    Finite(f64),
    Special(MInf),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub enum MInf {
    #[serde(rename = "inf")]
    Inf,
}

impl MParam {
    pub fn finite(&self) -> Option<f64> {
        match self {
            MParam::Finite(v) => Some(*v),
            MParam::Special(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SoiBlock {
    pub kappa: f64,
    pub mu: f64,
    pub m: MParam,
    #[serde(default = "default_mean")]
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InterfererBlock {
    pub kappa: f64,
    pub mu: f64,
    pub m: MParam,
    #[serde(default = "default_mean")]
    pub mean: f64,
}

fn default_mean() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TermsParam {
    Fixed(u32),
    Special(TermsAuto),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub enum TermsAuto {
    #[serde(rename = "auto")]
    Auto,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SeriesBlock {
    #[serde(rename = "P", default = "default_terms")]
    pub terms: TermsParam,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_terms() -> TermsParam {
    TermsParam::Fixed(50)
}

fn default_epsilon() -> f64 {
    1e-6
}

impl Default for SeriesBlock {
    fn default() -> Self {
        SeriesBlock {
            terms: default_terms(),
            epsilon: default_epsilon(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct McBlock {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub batches: u64,
    #[serde(default = "default_batch_size")]
    pub batch_size: u32,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

fn default_seed() -> u64 {
    0x5eed
}
fn default_batch_size() -> u32 {
    100
}
fn default_confidence() -> f64 {
    0.95
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReuseBlock {
    pub scheme: SchemeParam,
    #[serde(rename = "S_t_dB")]
    pub s_t_db: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
}

fn default_beta() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SchemeParam {
    Ffr,
    Sfr,
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    SoiM,
    SoiMu,
    SoiKappa,
    TDb,
    RM,
    TermsP,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TypicalBlock {
    pub metric: MetricParam,
    #[serde(default = "default_radial_points")]
    pub radial_points: u32,
}

fn default_radial_points() -> u32 {
    16
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MetricParam {
    Outage,
    Rate,
}

impl RunConfig {
    /// Range checks with the offending key in the message.
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.geometry;
        if !(g.r_cell_m > 0.0) {
            return Err("geometry.R_m: must be > 0".into());
        }
        if g.tiers != 2 {
            return Err("geometry.tiers: only the two-tier layout (tiers = 2) is supported".into());
        }
        if !(g.r_m > 0.0 && g.r_m <= g.r_cell_m) {
            return Err("geometry.r_m: must be in (0, R_m]".into());
        }
        if !(g.alpha >= 2.0) {
            return Err("geometry.alpha: must be >= 2".into());
        }
        if !(self.soi.kappa >= 0.0) {
            return Err("soi.kappa: must be >= 0".into());
        }
        if !(self.soi.mu > 0.0) {
            return Err("soi.mu: must be > 0".into());
        }
        if let Some(m) = self.soi.m.finite() {
            if !(m > 0.0) {
                return Err("soi.m: must be > 0 (or \"inf\")".into());
            }
        }
        if !(self.soi.mean > 0.0) {
            return Err("soi.mean: must be > 0".into());
        }
        if self.interferers.is_empty() || self.interferers.len() > 3 {
            return Err("interferers: provide 1..=3 per-tier blocks".into());
        }
        for (i, b) in self.interferers.iter().enumerate() {
            if !(b.kappa >= 0.0) {
                return Err(format!("interferers[{i}].kappa: must be >= 0"));
            }
            if !(b.mu > 0.0) {
                return Err(format!("interferers[{i}].mu: must be > 0"));
            }
            if let Some(m) = b.m.finite() {
                if !(m > 0.0) {
                    return Err(format!("interferers[{i}].m: must be > 0 (or \"inf\")"));
                }
            }
            if !(b.mean > 0.0) {
                return Err(format!("interferers[{i}].mean: must be > 0"));
            }
        }
        if !(self.series.epsilon > 0.0) {
            return Err("series.epsilon: must be > 0".into());
        }
        if let Some(mc) = &self.mc {
            if mc.batches < 2 {
                return Err("mc.batches: must be >= 2".into());
            }
            if mc.batch_size < 1 {
                return Err("mc.batch_size: must be >= 1".into());
            }
            if !(0.5 < mc.confidence && mc.confidence < 1.0) {
                return Err("mc.confidence: must be in (0.5, 1)".into());
            }
        }
        if let Some(r) = &self.reuse {
            if !(r.beta >= 1.0) {
                return Err("reuse.beta: must be >= 1".into());
            }
        }
        if let Some(s) = &self.sweep {
            if s.points < 1 {
                return Err("sweep.points: must be >= 1".into());
            }
            if !(s.from.is_finite() && s.to.is_finite()) {
                return Err("sweep.from/to: must be finite".into());
            }
        }
        if let Some(t) = &self.typical {
            if t.radial_points < 2 {
                return Err("typical.radial_points: must be >= 2".into());
            }
        }
        match self.command {
            Command::Reuse => {
                if self.reuse.is_none() {
                    return Err("reuse: block required for the reuse command".into());
                }
            }
            Command::Sweep => {
                if self.sweep.is_none() {
                    return Err("sweep: block required for the sweep command".into());
                }
            }
            Command::Typical => {
                if self.typical.is_none() {
                    return Err("typical: block required for the typical command".into());
                }
            }
            Command::McValidate => {
                if self.mc.is_none() {
                    return Err("mc: block required for the mc-validate command".into());
                }
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> serde_json::Value {
        serde_json::json!({
            "command": "outage",
            "geometry": {"R_m": 1000.0, "r_m": 600.0, "alpha": 3.6},
            "soi": {"kappa": 1.5, "mu": 1.2, "m": 10.0, "mean": 1.0},
            "interferers": [{"kappa": 1.0, "mu": 1.0, "m": 10.0, "mean": 1.0}],
            "T_dB": 3.0
        })
    }

    #[test]
    fn parses_minimal_config() {
        let cfg: RunConfig = serde_json::from_value(minimal()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.command, Command::Outage);
        assert_eq!(cfg.series.terms, TermsParam::Fixed(50));
    }

    #[test]
    fn rejects_unknown_keys() {
        let mut v = minimal();
        v["geometry"]["bogus"] = 1.into();
        let err = serde_json::from_value::<RunConfig>(v).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn names_offending_key() {
        let mut v = minimal();
        v["soi"]["mu"] = (-1.0).into();
        let cfg: RunConfig = serde_json::from_value(v).unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.contains("soi.mu"), "{err}");
    }

    #[test]
    fn m_inf_roundtrip() {
        let mut v = minimal();
        v["soi"]["m"] = "inf".into();
        let cfg: RunConfig = serde_json::from_value(v).unwrap();
        assert_eq!(cfg.soi.m.finite(), None);
        let back = serde_json::to_value(&cfg).unwrap();
        assert_eq!(back["soi"]["m"], "inf");
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_linear(3.0) - 1.9952623149688795).abs() < 1e-12);
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
    }
}
