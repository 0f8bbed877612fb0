use serde::{Deserialize, Serialize};

use crate::algebra::{ModuleSpec, Partition};
use crate::error::{Error, Result};
use crate::quasiexp::QuasiExpSpace;
use crate::scalar::{parse_gauss, ExactField, GaussRat};

/// One problem instance, as read from a JSON config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    #[serde(rename = "N")]
    pub rank: usize,
    /// Exponents as exact scalars, `"p/q"` or `"p/q+r/s i"`.
    #[serde(rename = "K")]
    pub k: Vec<String>,
    /// Highest weight of the factor at each evaluation point.
    pub partitions: Vec<Vec<usize>>,
    pub b: Vec<String>,
    pub weight: Vec<usize>,
    #[serde(default)]
    pub options: RunOptions,
    /// Optional quasi-exponential space for `wronski`: row `i` lists
    /// `f_{i1}, ..., f_{iλ_i}` of `p_i = u^{λ_i} + f_{i1} u^{λ_i-1} + ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    pub run_bae: bool,
    pub run_wronski: bool,
    pub samples: usize,
    pub seed: u64,
    pub tol_residual: f64,
    pub tol_cluster: f64,
    pub tol_dedup: f64,
    pub tol_kernel: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            run_bae: true,
            run_wronski: true,
            samples: 5,
            seed: 0,
            tol_residual: 1e-9,
            tol_cluster: 1e-7,
            tol_dedup: 1e-8,
            tol_kernel: 1e-8,
        }
    }
}

/// Exact field the instance lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Gaussian,
}

impl InstanceConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: InstanceConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// A single instance or a JSON array of instances.
    pub fn batch_from_json(text: &str) -> Result<Vec<Self>> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let items = match value {
            serde_json::Value::Array(items) => items,
            single => vec![single],
        };
        items
            .into_iter()
            .map(|v| {
                let cfg: InstanceConfig = serde_json::from_value(v)?;
                cfg.validate()?;
                Ok(cfg)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Parses every scalar and builds the module once, so errors surface early.
    pub fn validate(&self) -> Result<()> {
        match self.field()? {
            FieldKind::Rational => self.spec::<crate::scalar::Rat>().map(|_| ()),
            FieldKind::Gaussian => self.spec::<GaussRat>().map(|_| ()),
        }
    }

    fn scalars(&self) -> Result<Vec<GaussRat>> {
        let space = self.space.iter().flatten().flatten();
        self.k.iter().chain(&self.b).chain(space).map(|s| parse_gauss(s)).collect()
    }

    /// Rationals unless some scalar has a nonzero imaginary part.
    pub fn field(&self) -> Result<FieldKind> {
        Ok(if self.scalars()?.iter().all(|z| num_traits::Zero::is_zero(&z.im)) {
            FieldKind::Rational
        } else {
            FieldKind::Gaussian
        })
    }

    /// Whether all exponents and evaluation points are real.
    pub fn is_real(&self) -> Result<bool> {
        let k_and_b: Result<Vec<GaussRat>> = self.k.iter().chain(&self.b).map(|s| parse_gauss(s)).collect();
        Ok(k_and_b?.iter().all(|z| num_traits::Zero::is_zero(&z.im)))
    }

    pub fn spec<F: ExactField>(&self) -> Result<ModuleSpec<F>> {
        let k = parse_list::<F>(&self.k)?;
        let b = parse_list::<F>(&self.b)?;
        let partitions = self
            .partitions
            .iter()
            .map(|p| Partition::new(p.clone()))
            .collect::<Result<Vec<_>>>()?;
        let weight = Partition::new(self.weight.clone())?;
        ModuleSpec::new(self.rank, k, partitions, b, weight)
    }

    pub fn space_of<F: ExactField>(&self) -> Result<Option<QuasiExpSpace<F>>> {
        let Some(rows) = &self.space else {
            return Ok(None);
        };
        if rows.len() != self.rank {
            return Err(Error::InvalidInput(format!("space needs {} rows, got {}", self.rank, rows.len())));
        }
        let rows = rows.iter().map(|r| parse_list::<F>(r)).collect::<Result<Vec<_>>>()?;
        QuasiExpSpace::from_coefficients(parse_list(&self.k)?, rows).map(Some)
    }
}

fn parse_list<F: ExactField>(items: &[String]) -> Result<Vec<F>> {
    items
        .iter()
        .map(|s| {
            let z = parse_gauss(s)?;
            F::from_gauss(&z).ok_or_else(|| Error::Parse(format!("`{s}` is not in the working field")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = r#"{"N": 2, "K": ["0", "1"], "partitions": [[1], [1]], "b": ["0", "1"], "weight": [1, 1]}"#;

    #[test]
    fn parses_with_default_options() {
        let cfg = InstanceConfig::from_json(GOLDEN).unwrap();
        assert_eq!(cfg.options, RunOptions::default());
        assert_eq!(cfg.field().unwrap(), FieldKind::Rational);
        assert!(cfg.is_real().unwrap());
        let back = InstanceConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn batches_accept_one_or_many() {
        assert_eq!(InstanceConfig::batch_from_json(GOLDEN).unwrap().len(), 1);
        let two = format!("[{GOLDEN}, {GOLDEN}]");
        assert_eq!(InstanceConfig::batch_from_json(&two).unwrap().len(), 2);
        assert!(InstanceConfig::batch_from_json("[]").unwrap().is_empty());
    }

    #[test]
    fn complex_points_select_gaussian_rationals() {
        let cfg = InstanceConfig::from_json(
            r#"{"N": 2, "K": ["0", "1"], "partitions": [[1], [1]], "b": ["i", "1/2-i"], "weight": [1, 1]}"#,
        )
        .unwrap();
        assert_eq!(cfg.field().unwrap(), FieldKind::Gaussian);
        assert!(!cfg.is_real().unwrap());
    }

    #[test]
    fn rejects_invalid_instances() {
        let repeated = GOLDEN.replace(r#""b": ["0", "1"]"#, r#""b": ["1", "1"]"#);
        assert!(InstanceConfig::from_json(&repeated).is_err());
        let not_partition = GOLDEN.replace(r#""weight": [1, 1]"#, r#""weight": [0, 2]"#);
        assert!(InstanceConfig::from_json(&not_partition).is_err());
        let bad_scalar = GOLDEN.replace(r#""K": ["0", "1"]"#, r#""K": ["0", "x"]"#);
        assert!(InstanceConfig::from_json(&bad_scalar).is_err());
        let unknown = GOLDEN.replace(r#""N": 2"#, r#""N": 2, "extra": 1"#);
        assert!(InstanceConfig::from_json(&unknown).is_err());
    }
}
