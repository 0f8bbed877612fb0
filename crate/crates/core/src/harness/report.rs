use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::polyring::{Poly, RatFun};

use super::config::InstanceConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for information; never affects the exit code.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The property being tested, in words.
    pub anchor: String,
    pub status: Status,
    pub value: Value,
}

/// Polynomial coefficients in ascending order as `[re, im]` pairs.
pub type CoeffList = Vec<[f64; 2]>;

pub fn coeff_list(p: &Poly<Complex64>) -> CoeffList {
    p.coeffs().iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatFunRecord {
    pub num: CoeffList,
    pub den: CoeffList,
}

impl RatFunRecord {
    /// `f` written over the denominator `den` when possible, else as stored.
    pub fn over(f: &RatFun<Complex64>, den: &Poly<Complex64>) -> Self {
        match f.numerator_over(den, 1e-6) {
            Ok(num) => RatFunRecord { num: coeff_list(&num), den: coeff_list(den) },
            Err(_) => RatFunRecord { num: coeff_list(f.num()), den: coeff_list(f.den()) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub k: Vec<[f64; 2]>,
    /// Polynomial parts, ascending coefficients.
    pub polys: Vec<CoeffList>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub h: Vec<RatFunRecord>,
    pub residual: f64,
    pub multiplicity: usize,
    pub eigen_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<SpaceRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership: Option<Value>,
    /// Whether the kernel's root coordinates are generic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaeSolutionRecord {
    pub levels: Vec<Vec<[f64; 2]>>,
    pub residual: f64,
    pub eigenvector_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_character: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub match_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaeRecord {
    pub stats: Value,
    pub solutions: Vec<BaeSolutionRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WronskiRecord {
    /// Monic Wronskian polynomial part, exact coefficients ascending.
    pub wronskian: Vec<String>,
    /// `h_1, ..., h_N` of `D_X`.
    pub operator: Vec<RatFunRecord>,
    pub membership: Value,
    pub indicial: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub field: String,
    pub instance: InstanceConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub characters: Vec<CharacterRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bae: Option<BaeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wronski: Option<WronskiRecord>,
    pub checks: Vec<Check>,
    /// Wall-clock seconds per stage; the only nondeterministic field.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: &str, instance: &InstanceConfig, field: &str) -> Self {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: instance.options.seed,
            field: field.to_string(),
            instance: instance.clone(),
            dimension: None,
            characters: Vec::new(),
            bae: None,
            wronski: None,
            checks: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, name: &str, anchor: &str, ok: bool, value: impl Serialize) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(name, anchor, status, value);
    }

    pub fn info(&mut self, name: &str, anchor: &str, value: impl Serialize) {
        self.push(name, anchor, Status::Info, value);
    }

    fn push(&mut self, name: &str, anchor: &str, status: Status, value: impl Serialize) {
        self.checks.push(Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status,
            value: serde_json::to_value(value).unwrap_or(Value::Null),
        });
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Human-readable summary.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let inst = &self.instance;
        let _ = writeln!(out, "gaudin {} — {} (v{}, seed {})", self.command, self.field, self.version, self.seed);
        let _ = writeln!(
            out,
            "N = {}, K = ({}), b = ({}), partitions = {:?}, weight = {:?}",
            inst.rank,
            inst.k.join(", "),
            inst.b.join(", "),
            inst.partitions,
            inst.weight
        );
        if let Some(d) = self.dimension {
            let _ = writeln!(out, "dimension {d}, characters {}", self.characters.len());
        }
        if let Some(bae) = &self.bae {
            let _ = writeln!(out, "Bethe solutions {}", bae.solutions.len());
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let _ = writeln!(out);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            let _ = writeln!(out, "{tag}  {:width$}  {}", c.name, short(&c.value));
        }
        let passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(out, "\n{passed} passed, {failed} failed");
        out
    }
}

fn short(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 72 {
        format!("{}…", &s[..s.char_indices().take_while(|(k, _)| *k < 71).last().map_or(0, |(k, c)| k + c.len_utf8())])
    } else {
        s
    }
}
