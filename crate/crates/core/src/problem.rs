//! JSON problem specifications and the batch commands built on them.
//!
//! ```json
//! {
//!   "group": {"kind": "discrete", "free_rank": 1},
//!   "algebra": {"kind": "O_n"},
//!   "omega": [1, 2],
//!   "regions": [[0], [1]],
//!   "truncation": 2
//! }
//! ```
//!
//! `algebra` is `{"kind": "O_n"}` (optionally with `"n"`, which must match
//! the weight count) or `{"kind": "O_infinity", "repetition": "repeat"}`.
//! A region is a list of points, a `{"lo", "hi"}` interval, a list of such
//! intervals, or an indicator in the expression grammar such as `"chi[0,1)"`.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::af::{decompose, DecomposeOptions, RegionFamily, DEFAULT_TAU_NODE_CAP};
use crate::algebra::{Algebra, DEFAULT_MAX_TERMS};
use crate::classify::classify;
use crate::error::{Error, Result};
use crate::expr::{parse, render};
use crate::function::FiniteFunction;
use crate::gamma::{Alphabet, GroupDescriptor, GroupElement, OmegaData};
use crate::scalar::Scalar;
use crate::scaling::scaling_element;
use crate::verify::{self, VerifyOptions};
use crate::words::Word;

const MODULE: &str = "cli_frontend";

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum AlgebraKind {
    #[serde(rename = "O_n")]
    On {
        #[serde(default)]
        n: Option<usize>,
    },
    #[serde(rename = "O_infinity")]
    OInfinity {
        #[serde(default)]
        repetition: Option<String>,
    },
}

impl Default for AlgebraKind {
    fn default() -> Self {
        AlgebraKind::On { n: None }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub group: Value,
    #[serde(default)]
    pub algebra: AlgebraKind,
    pub omega: Vec<Value>,
    #[serde(default)]
    pub regions: Option<Vec<Value>>,
    #[serde(default, rename = "X")]
    pub x_set: Option<Vec<Value>>,
    #[serde(default)]
    pub gamma0: Option<Value>,
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub max_terms: Option<usize>,
    #[serde(default)]
    pub max_tau_nodes: Option<usize>,
    #[serde(default)]
    pub precision_depth: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub triples: Option<usize>,
    #[serde(default)]
    pub expression: Option<String>,
}

impl ProblemSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::argument(MODULE, format!("problem spec: {e}")))
    }

    pub fn group(&self) -> Result<GroupDescriptor> {
        let g = GroupDescriptor::from_json(&self.group)?;
        match self.precision_depth {
            Some(d) if g.is_real() => g.with_precision_depth(d),
            _ => Ok(g),
        }
    }

    pub fn omega(&self) -> Result<OmegaData> {
        let group = self.group()?;
        let weights: Vec<GroupElement> =
            self.omega.iter().map(|w| group.element_from_json(w)).collect::<Result<_>>()?;
        let alphabet = match &self.algebra {
            AlgebraKind::On { n } => {
                if let Some(n) = n {
                    if *n != weights.len() {
                        return Err(Error::argument(
                            MODULE,
                            format!("O_{n} needs {n} weights, got {}", weights.len()),
                        ));
                    }
                }
                Alphabet::Finite
            }
            AlgebraKind::OInfinity { repetition } => {
                match repetition.as_deref() {
                    None | Some("repeat") => {}
                    Some(other) => {
                        return Err(Error::feature(MODULE, format!("repetition rule {other:?}; only \"repeat\" is supported")))
                    }
                }
                Alphabet::InfiniteRepeating
            }
        };
        OmegaData::new(group, weights, alphabet)
    }

    pub fn algebra(&self) -> Result<Algebra> {
        Ok(Algebra::new(self.omega()?).with_max_terms(self.max_terms.unwrap_or(DEFAULT_MAX_TERMS)))
    }

    pub fn region_family(&self, alg: &Algebra) -> Result<RegionFamily> {
        let regions = self.regions.as_ref().ok_or_else(|| Error::argument(MODULE, "decompose needs \"regions\""))?;
        let group = alg.group();
        let fs = regions.iter().map(|r| region_function(alg, group, r)).collect::<Result<_>>()?;
        RegionFamily::new(group, fs)
    }
}

fn interval_from(group: &GroupDescriptor, v: &Value) -> Result<FiniteFunction> {
    let lo = group.element_from_json(v.get("lo").ok_or_else(|| Error::argument(MODULE, "interval needs lo"))?)?;
    let hi = group.element_from_json(v.get("hi").ok_or_else(|| Error::argument(MODULE, "interval needs hi"))?)?;
    FiniteFunction::interval(group, lo, hi, Scalar::one())
}

fn region_function(alg: &Algebra, group: &GroupDescriptor, v: &Value) -> Result<FiniteFunction> {
    match v {
        Value::String(text) => {
            let x = parse(alg, text)?;
            let empty = (Word::empty(), Word::empty());
            match x.terms().iter().next() {
                Some((k, f)) if x.len() == 1 && *k == empty => Ok(f.clone()),
                None => Ok(FiniteFunction::zero(group)),
                _ => Err(Error::argument(MODULE, format!("region {text:?} is not a function"))),
            }
        }
        Value::Object(_) => interval_from(group, v),
        Value::Array(items) if group.is_real() => {
            let mut f = FiniteFunction::zero(group);
            for it in items {
                f = f.add(&interval_from(group, it)?, group)?;
            }
            Ok(f)
        }
        Value::Array(items) => {
            let pts: Vec<GroupElement> = items.iter().map(|p| group.element_from_json(p)).collect::<Result<_>>()?;
            FiniteFunction::indicator(group, &pts)
        }
        other => Err(Error::argument(MODULE, format!("cannot read region {other}"))),
    }
}

fn header(spec: &ProblemSpec, omega: &OmegaData) -> Value {
    json!({ "group": omega.group().to_json(), "omega": omega.to_json(), "algebra": match &spec.algebra {
        AlgebraKind::On { .. } => json!({"kind": "O_n", "n": omega.n()}),
        AlgebraKind::OInfinity { .. } => json!({"kind": "O_infinity", "repetition": "repeat"}),
    }})
}

pub fn cmd_classify(spec: &ProblemSpec) -> Result<Value> {
    let omega = spec.omega()?;
    let verdict = classify(&omega)?;
    let mut out = verdict.to_json(&omega);
    out["input"] = header(spec, &omega);
    out["certificates_verified"] = json!(verdict.verify_certificates(&omega)?);
    Ok(out)
}

/// The JSON report and its DOT rendering.
pub fn cmd_decompose(spec: &ProblemSpec) -> Result<(Value, String)> {
    let alg = spec.algebra()?;
    let family = spec.region_family(&alg)?;
    let opts = DecomposeOptions {
        truncation: spec.truncation,
        tau_node_cap: spec.max_tau_nodes.unwrap_or(DEFAULT_TAU_NODE_CAP),
        ..Default::default()
    };
    let report = decompose(&alg, &family, &opts)?;
    let mut out = report.to_json(&alg);
    out["input"] = header(spec, alg.omega());
    Ok((out, report.to_dot(&alg)))
}

pub fn cmd_scaling(spec: &ProblemSpec) -> Result<Value> {
    let alg = spec.algebra()?;
    let group = alg.group();
    let xs: Vec<GroupElement> = spec
        .x_set
        .as_ref()
        .ok_or_else(|| Error::argument(MODULE, "scaling needs \"X\""))?
        .iter()
        .map(|v| group.element_from_json(v))
        .collect::<Result<_>>()?;
    let g0 = group.element_from_json(spec.gamma0.as_ref().ok_or_else(|| Error::argument(MODULE, "scaling needs \"gamma0\""))?)?;
    let report = scaling_element(&alg, &xs, &g0)?;
    let mut out = report.to_json(&alg);
    out["input"] = header(spec, alg.omega());
    Ok(out)
}

pub fn cmd_verify(spec: &ProblemSpec) -> Result<Value> {
    let alg = spec.algebra()?;
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        seed: spec.seed.unwrap_or(defaults.seed),
        triples: spec.triples.unwrap_or(defaults.triples),
        ..defaults
    };
    let report = verify::run(&alg, &opts)?;
    let mut out = report.to_json();
    out["input"] = header(spec, alg.omega());
    Ok(out)
}

/// Canonical rendering of an expression.
pub fn cmd_eval(spec: &ProblemSpec, expression: &str) -> Result<String> {
    let alg = spec.algebra()?;
    Ok(render(&alg, &parse(&alg, expression)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> ProblemSpec {
        ProblemSpec::from_json_str(text).unwrap()
    }

    const Z12: &str = r#"{"group": {"kind": "discrete", "free_rank": 1}, "algebra": {"kind": "O_n", "n": 2}, "omega": [1, 2]}"#;

    #[test]
    fn eval_collapses_products() {
        let out = cmd_eval(&spec(Z12), "S[1] * chi{0} * S*[2]  *  S[2] * chi{0} * S*[1]").unwrap();
        assert_eq!(out, "S[1]·chi{0}·S*[1]");
    }

    #[test]
    fn classify_opposite_weights() {
        let s = spec(r#"{"group": {"kind": "discrete", "free_rank": 1}, "omega": [1, -1]}"#);
        let v = cmd_classify(&s).unwrap();
        assert_eq!(v["purely_infinite"], json!(true));
        assert_eq!(v["certificates_verified"], json!(true));
    }

    #[test]
    fn decompose_two_regions() {
        let mut s = spec(Z12);
        s.regions = Some(vec![json!([0]), json!([1])]);
        let (v, dot) = cmd_decompose(&s).unwrap();
        assert_eq!(v["summands"], json!(2));
        assert!(dot.starts_with("digraph"));
        s.regions = Some(vec![json!("chi{0}"), json!("chi{1}")]);
        assert_eq!(cmd_decompose(&s).unwrap().0["summands"], json!(2));
    }

    #[test]
    fn real_regions() {
        let s = spec(
            r#"{"group": {"kind": "real_line", "basis": [{"name": "1", "lo": "1", "hi": "1"},
                 {"name": "sqrt2", "lo": "1414213/1000000", "hi": "1414214/1000000", "poly": ["-2", "0", "1"]}]},
                "omega": [["1", "0"], ["0", "1"]],
                "regions": [{"lo": ["0", "0"], "hi": ["2", "0"]}, "chi[1,3)"]}"#,
        );
        let (v, _) = cmd_decompose(&s).unwrap();
        assert_eq!(v["atoms"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn bad_specs() {
        assert!(ProblemSpec::from_json_str("{\"omega\": [1]}").is_err());
        let s = spec(r#"{"group": {"kind": "discrete", "free_rank": 1}, "algebra": {"kind": "O_n", "n": 3}, "omega": [1, 2]}"#);
        assert!(matches!(s.omega().unwrap_err(), Error::Argument { .. }));
        let s = spec(r#"{"group": {"kind": "discrete", "free_rank": 1}, "omega": [1, 2], "X": [0], "gamma0": 1}"#);
        assert_eq!(cmd_scaling(&s).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn output_is_stable() {
        let s = spec(r#"{"group": {"kind": "discrete", "free_rank": 1}, "omega": [1, -1], "X": [0], "gamma0": 1}"#);
        let a = serde_json::to_string(&cmd_scaling(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&cmd_scaling(&s).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
