//! Text files: field configurations, serialized functions, Cauchy problems
//! and hypergeometric parameter sets. All are TOML documents.
//!
//! A function file:
//!
//! ```toml
//! n = 1
//! trunc_m = 2
//! trunc_i = 2
//!
//! [field]
//! q = 2
//! m = 1
//!
//! [[coeff]]
//! m = 0
//! i = [1]
//! value = "x^2 + x"
//! ```

use std::collections::BTreeMap;

use carlitz_core::cauchy::{EvolutionEquation, InitialData, Poly};
use carlitz_core::field::DEFAULT_REL_PREC;
use carlitz_core::funcspace::MultiFunction;
use carlitz_core::hyper::HyperParams;
use carlitz_core::{Error, Field, FieldParams, FieldRef, PerfSeries};
use serde::{Deserialize, Serialize};

use crate::parse::{parse_series, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("in {context}: {source}")]
    Literal {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Invalid(String),
}

/// Field parameters as they appear in files and on the command line. Either
/// `q` or both `p` and `v` name the Carlitz parameter; `m` defaults to 1;
/// without a modulus the shipped one for `(q, m)` is used.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<i64>,
}

impl FieldConfig {
    /// Fields set in `over` replace those in `self`.
    pub fn overlay(&self, over: &FieldConfig) -> FieldConfig {
        let q_given = over.q.is_some() || over.p.is_some();
        FieldConfig {
            q: over.q.or(if q_given { None } else { self.q }),
            p: over.p.or(if q_given { None } else { self.p }),
            v: over.v.or(if q_given { None } else { self.v }),
            m: over.m.or(self.m),
            modulus: over.modulus.clone().or_else(|| if q_given || over.m.is_some() { None } else { self.modulus.clone() }),
            prec: over.prec.or(self.prec),
        }
    }

    pub fn build(&self) -> Result<FieldRef, FormatError> {
        let m = self.m.unwrap_or(1);
        let q = match (self.q, self.p) {
            (Some(q), None) => q,
            (None, Some(p)) => (p as u64)
                .checked_pow(self.v.unwrap_or(1))
                .ok_or_else(|| FormatError::Invalid("p^v overflows".into()))?,
            (Some(q), Some(p)) => {
                if (p as u64).checked_pow(self.v.unwrap_or(1)) != Some(q) {
                    return Err(FormatError::Invalid(format!("q = {} is not p^v", q)));
                }
                q
            }
            (None, None) => 2,
        };
        let params = match &self.modulus {
            Some(modulus) => {
                let (p, v) = carlitz_core::field::prime_power(q)
                    .ok_or_else(|| FormatError::Invalid(format!("{} is not a prime power", q)))?;
                FieldParams::new(p, v, m, modulus.clone())?
            }
            None => FieldParams::standard(q, m)?,
        };
        Ok(Field::with_precision(params, self.prec.unwrap_or(DEFAULT_REL_PREC))?)
    }

    /// A complete description of an existing field.
    pub fn describe(field: &FieldRef) -> FieldConfig {
        let params = field.params();
        let standard = FieldParams::standard(field.q(), params.m).ok();
        FieldConfig {
            q: Some(field.q()),
            p: None,
            v: None,
            m: Some(params.m),
            modulus: (standard.as_ref() != Some(params)).then(|| params.modulus.clone()),
            prec: (field.rel_prec() != DEFAULT_REL_PREC).then_some(field.rel_prec()),
        }
    }

    pub fn from_toml(text: &str) -> Result<FieldConfig, FormatError> {
        Ok(toml::from_str(text)?)
    }
}

fn literal(field: &FieldRef, text: &str, context: impl FnOnce() -> String) -> Result<PerfSeries, FormatError> {
    parse_series(field, text).map_err(|source| FormatError::Literal {
        context: context(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub m: u32,
    pub i: Vec<u32>,
    pub value: String,
}

/// Serialized form of a [`MultiFunction`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    pub n: usize,
    pub trunc_m: i64,
    pub trunc_i: i64,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default)]
    pub coeff: Vec<CoeffEntry>,
}

impl FunctionDoc {
    pub fn from_function(u: &MultiFunction) -> FunctionDoc {
        FunctionDoc {
            n: u.n(),
            trunc_m: u.trunc_m(),
            trunc_i: u.trunc_i(),
            field: FieldConfig::describe(u.field()),
            coeff: u
                .iter()
                .map(|((m, i), v)| CoeffEntry {
                    m: *m,
                    i: i.clone(),
                    value: v.to_string(),
                })
                .collect(),
        }
    }

    /// Builds the function; `default` supplies field settings the document
    /// leaves out.
    pub fn to_function(&self, default: &FieldConfig) -> Result<MultiFunction, FormatError> {
        let field = default.overlay(&self.field).build()?;
        let mut u = MultiFunction::zero(&field, self.n, self.trunc_m, self.trunc_i);
        for (k, e) in self.coeff.iter().enumerate() {
            let v = literal(&field, &e.value, || format!("coefficient {} (m = {}, i = {:?})", k, e.m, e.i))?;
            u.set((e.m, e.i.clone()), v)?;
        }
        Ok(u)
    }
}

pub fn function_to_text(u: &MultiFunction) -> String {
    toml::to_string(&FunctionDoc::from_function(u)).expect("function documents serialize")
}

pub fn function_from_text(text: &str, default: &FieldConfig) -> Result<MultiFunction, FormatError> {
    toml::from_str::<FunctionDoc>(text)?.to_function(default)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialEntry {
    /// Exponents of `t_1..t_n`.
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitEntry {
    pub i: Vec<u32>,
    pub value: String,
}

/// A Cauchy problem `{P(Δ) + Q(Δ) d} u = 0` with prescribed `c_{0,i}`.
///
/// ```toml
/// n = 1
/// trunc_m = 4
/// trunc_i = 4
///
/// [field]
/// q = 3
///
/// [[p]]
/// exp = [1]
/// coeff = "1"
/// [[p]]
/// exp = [0]
/// coeff = "-x"
///
/// [[q]]
/// exp = [1]
/// coeff = "1"
/// [[q]]
/// exp = [0]
/// coeff = "-1"
///
/// [[init]]
/// i = [0]
/// value = "1"
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub n: usize,
    pub trunc_m: u32,
    pub trunc_i: u32,
    /// Largest finite index checked for admissibility; defaults to the
    /// larger of `trunc_i` and the computed recommendation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imax: Option<u32>,
    #[serde(default)]
    pub field: FieldConfig,
    pub p: Vec<MonomialEntry>,
    pub q: Vec<MonomialEntry>,
    #[serde(default)]
    pub init: Vec<InitEntry>,
}

/// A problem ready to solve.
#[derive(Clone, Debug)]
pub struct Problem {
    pub field: FieldRef,
    pub equation: EvolutionEquation,
    pub init: InitialData,
    pub trunc_m: u32,
    pub trunc_i: u32,
    pub imax: Option<u32>,
}

fn poly(field: &FieldRef, n: usize, entries: &[MonomialEntry], name: &str) -> Result<Poly, FormatError> {
    let mut terms = Vec::with_capacity(entries.len());
    for (k, e) in entries.iter().enumerate() {
        if e.exp.len() != n {
            return Err(FormatError::Invalid(format!(
                "{} term {} has {} exponents for n = {}",
                name,
                k,
                e.exp.len(),
                n
            )));
        }
        let c = literal(field, &e.coeff, || format!("{} term {}", name, k))?;
        terms.push((e.exp.clone(), c));
    }
    Ok(Poly::from_terms(field, n, terms)?)
}

impl ProblemDoc {
    pub fn to_problem(&self, default: &FieldConfig) -> Result<Problem, FormatError> {
        let field = default.overlay(&self.field).build()?;
        let equation = EvolutionEquation::new(
            poly(&field, self.n, &self.p, "P")?,
            poly(&field, self.n, &self.q, "Q")?,
        )?;
        let mut init = InitialData::new(self.n);
        for (k, e) in self.init.iter().enumerate() {
            let v = literal(&field, &e.value, || format!("initial value {}", k))?;
            init.set(e.i.clone(), v)?;
        }
        Ok(Problem {
            field,
            equation,
            init,
            trunc_m: self.trunc_m,
            trunc_i: self.trunc_i,
            imax: self.imax,
        })
    }
}

pub fn problem_from_text(text: &str, default: &FieldConfig) -> Result<Problem, FormatError> {
    toml::from_str::<ProblemDoc>(text)?.to_problem(default)
}

/// Hypergeometric parameters: series literals `a`, `b`, or integer
/// parameters `alphas`, `betas` (standing for `a_i = [-α_i]`,
/// `b_j = [-β_j]`), not both.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<i64>>,
    #[serde(default)]
    pub field: FieldConfig,
}

/// Parameters ready to use; `integers` is set for the integer family.
#[derive(Clone, Debug)]
pub struct ParamSet {
    pub params: HyperParams,
    pub integers: Option<(Vec<i64>, Vec<i64>)>,
}

impl ParamsDoc {
    pub fn to_params(&self, default: &FieldConfig) -> Result<ParamSet, FormatError> {
        let field = default.overlay(&self.field).build()?;
        let integer = self.alphas.is_some() || self.betas.is_some();
        if integer && !(self.a.is_empty() && self.b.is_empty()) {
            return Err(FormatError::Invalid(
                "give either series parameters a, b or integer parameters alphas, betas".into(),
            ));
        }
        if integer {
            let alphas = self.alphas.clone().unwrap_or_default();
            let betas = self.betas.clone().unwrap_or_default();
            return Ok(ParamSet {
                params: HyperParams::from_integers(&field, &alphas, &betas),
                integers: Some((alphas, betas)),
            });
        }
        let parse_all = |list: &[String], name: &str| -> Result<Vec<PerfSeries>, FormatError> {
            list.iter()
                .enumerate()
                .map(|(k, s)| literal(&field, s, || format!("{}[{}]", name, k)))
                .collect()
        };
        Ok(ParamSet {
            params: HyperParams::new(&field, parse_all(&self.a, "a")?, parse_all(&self.b, "b")?)?,
            integers: None,
        })
    }
}

pub fn params_from_text(text: &str, default: &FieldConfig) -> Result<ParamSet, FormatError> {
    toml::from_str::<ParamsDoc>(text)?.to_params(default)
}

/// Coefficients of a function keyed by slot, for machine-readable output.
pub fn coefficient_map(u: &MultiFunction) -> BTreeMap<String, String> {
    u.iter()
        .map(|((m, i), v)| (format!("{}:{:?}", m, i), v.to_string()))
        .collect()
}
