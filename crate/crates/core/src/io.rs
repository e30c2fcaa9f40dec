//! JSON input documents: toric models (fan or Cox mode) and Θ-graded complexes.

use crate::divisor::Class;
use crate::error::{Error, Result};
use crate::exactlin::{Int, Rat};
use crate::fan::{validate_fan, StackyFan};
use crate::model::ToricModel;
use crate::monads::{Poly, Summand, ThetaComplex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An integer written as a JSON number or a decimal string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum IntLit {
    Num(i64),
    Str(String),
}

impl IntLit {
    fn value(&self, field: &str) -> Result<Int> {
        match self {
            IntLit::Num(n) => Ok(Int::from(*n)),
            IntLit::Str(s) => s.trim().parse().map_err(|_| Error::Schema(format!("{field}: {s:?} is not an integer"))),
        }
    }

    pub fn of(v: &Int) -> Self {
        IntLit::Str(v.to_string())
    }
}

fn ints(v: &[IntLit], field: &str) -> Result<Vec<Int>> {
    v.iter().enumerate().map(|(i, x)| x.value(&format!("{field}[{i}]"))).collect()
}

fn int_rows(v: &[Vec<IntLit>], field: &str) -> Result<Vec<Vec<Int>>> {
    v.iter().enumerate().map(|(i, r)| ints(r, &format!("{field}[{i}]"))).collect()
}

fn lits(v: &[Int]) -> Vec<IntLit> {
    v.iter().map(IntLit::of).collect()
}

/// "p/q" or "p".
pub fn parse_rat(s: &str, field: &str) -> Result<Rat> {
    let bad = || Error::Schema(format!("{field}: {s:?} is not a rational"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| bad())?;
            let q: Int = q.trim().parse().map_err(|_| bad())?;
            if q == Int::from(0) {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelDoc {
    Fan {
        #[serde(default)]
        name: Option<String>,
        dim: usize,
        rays: Vec<Vec<IntLit>>,
        cones: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        multipliers: Option<Vec<IntLit>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class_basis: Option<Vec<usize>>,
    },
    Cox {
        #[serde(default)]
        name: Option<String>,
        /// One row per variable: free coordinates then torsion coordinates.
        degrees: Vec<Vec<IntLit>>,
        free_rank: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        torsion: Vec<IntLit>,
    },
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<ToricModel> {
        match self {
            ModelDoc::Fan { name, dim, rays, cones, multipliers, class_basis } => {
                let rays = int_rows(rays, "rays")?;
                let fan = validate_fan(*dim, rays, cones.clone())
                    .map_err(|v| Error::Schema(v.iter().map(|x| format!("fan: {x}")).collect::<Vec<_>>().join("; ")))?;
                let sf = match multipliers {
                    Some(m) => StackyFan::new(fan, ints(m, "multipliers")?)?,
                    None => StackyFan::plain(fan),
                };
                ToricModel::from_fan(name.as_deref().unwrap_or("fan"), sf, class_basis.as_deref())
            }
            ModelDoc::Cox { name, degrees, free_rank, torsion } => {
                let degrees = int_rows(degrees, "degrees")?;
                ToricModel::from_cox(name.as_deref().unwrap_or("cox"), &degrees, *free_rank, ints(torsion, "torsion")?)
            }
        }
    }

    /// Cox-mode description of a model: its degree matrix.
    pub fn cox_of(model: &ToricModel) -> Self {
        ModelDoc::Cox {
            name: Some(model.name.clone()),
            degrees: model.degrees().iter().map(|d| lits(d)).collect(),
            free_rank: model.cl.free_rank,
            torsion: lits(&model.cl.torsion),
        }
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn parse_model(text: &str) -> Result<ToricModel> {
    from_json::<ModelDoc>(text)?.to_model()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SummandDoc {
    pub class: Vec<IntLit>,
    #[serde(default = "one")]
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub space: ModelDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    /// Keyed by cohomological degree.
    pub terms: BTreeMap<String, Vec<SummandDoc>>,
    /// Keyed by source degree; rows are target summands.
    #[serde(default)]
    pub differentials: BTreeMap<String, Vec<Vec<String>>>,
}

fn degree_key(k: &str, field: &str) -> Result<i64> {
    k.trim().parse().map_err(|_| Error::Schema(format!("{field}: key {k:?} is not a degree")))
}

impl ComplexDoc {
    pub fn to_complex(&self) -> Result<(ToricModel, ThetaComplex)> {
        let model = self.space.to_model()?;
        let variables = self.variables.clone().unwrap_or_else(|| ThetaComplex::default_variables(model.nrays()));
        if variables.len() != model.nrays() {
            return Err(Error::Schema(format!("variables: {} names for {} rays", variables.len(), model.nrays())));
        }
        let mut terms = BTreeMap::new();
        for (k, list) in &self.terms {
            let deg = degree_key(k, "terms")?;
            let mut out = Vec::new();
            for (i, s) in list.iter().enumerate() {
                let field = format!("terms[{k}][{i}]");
                let class = ints(&s.class, &format!("{field}.class"))?;
                let witness = match &s.witness {
                    Some(w) => Some(
                        w.iter()
                            .enumerate()
                            .map(|(j, x)| parse_rat(x, &format!("{field}.witness[{j}]")))
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    None => None,
                };
                out.push(Summand { class: model.cl.reduce(&class), multiplicity: s.multiplicity, witness });
            }
            terms.insert(deg, out);
        }
        let mut differentials = BTreeMap::new();
        for (k, rows) in &self.differentials {
            let deg = degree_key(k, "differentials")?;
            let m = rows
                .iter()
                .map(|r| r.iter().map(|p| Poly::parse(p, &variables)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            differentials.insert(deg, m);
        }
        Ok((model, ThetaComplex { variables, terms, differentials }))
    }
}

pub fn parse_complex(text: &str) -> Result<(ToricModel, ThetaComplex)> {
    from_json::<ComplexDoc>(text)?.to_complex()
}

/// Integers and rationals as JSON strings.
pub fn jint(v: &Int) -> serde_json::Value {
    serde_json::Value::String(v.to_string())
}

pub fn jints(v: &[Int]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(jint).collect())
}

pub fn jclass(v: &Class) -> serde_json::Value {
    jints(v)
}

pub fn jrat(q: &Rat) -> serde_json::Value {
    serde_json::Value::String(crate::exactlin::fmt_rat(q))
}

pub fn jrats(v: &[Rat]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(jrat).collect())
}
