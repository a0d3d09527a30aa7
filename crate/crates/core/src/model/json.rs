//! Instance JSON schema.
//!
//! ```json
//! {
//!   "name": "example",
//!   "sense": "min",
//!   "objective": [1, -2],
//!   "rows": [{"coefs": {"x1": 3, "x2": -4}, "sense": ">=", "rhs": -5}],
//!   "vars": [{"name": "x1", "lb": 0, "ub": 1, "integral": true},
//!            {"name": "x2", "lb": 0, "ub": "inf", "integral": false}]
//! }
//! ```
//!
//! Infinite bounds are written as `"inf"` / `"-inf"` (or `null`).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::lp::{Row, Sense};

use super::problem::{MilpProblem, ObjSense};
use super::ModelError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    name: String,
    #[serde(default)]
    sense: ObjSense,
    objective: Vec<f64>,
    rows: Vec<RowDoc>,
    vars: Vec<VarDoc>,
    #[serde(default, skip_serializing_if = "is_zero")]
    offset: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    coefs: BTreeMap<String, f64>,
    sense: Sense,
    rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarDoc {
    name: String,
    #[serde(default, with = "lower_bound")]
    lb: f64,
    #[serde(default = "pos_inf", with = "upper_bound")]
    ub: f64,
    #[serde(default)]
    integral: bool,
}

fn pos_inf() -> f64 {
    f64::INFINITY
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Num(f64),
    Text(String),
    Null(()),
}

fn bound_to_repr(v: f64) -> BoundRepr {
    if v == f64::INFINITY {
        BoundRepr::Text("inf".into())
    } else if v == f64::NEG_INFINITY {
        BoundRepr::Text("-inf".into())
    } else {
        BoundRepr::Num(v)
    }
}

fn repr_to_bound<E: serde::de::Error>(r: BoundRepr, null: f64) -> Result<f64, E> {
    match r {
        BoundRepr::Num(v) => Ok(v),
        BoundRepr::Null(()) => Ok(null),
        BoundRepr::Text(s) => match s.as_str() {
            "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            other => Err(E::custom(format!("invalid bound {other:?}"))),
        },
    }
}

mod lower_bound {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        bound_to_repr(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        repr_to_bound(BoundRepr::deserialize(d)?, f64::NEG_INFINITY)
    }
}

mod upper_bound {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        bound_to_repr(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        repr_to_bound(BoundRepr::deserialize(d)?, f64::INFINITY)
    }
}

/// Parses an instance document.
pub fn parse_json(text: &str) -> Result<MilpProblem, ModelError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let n = doc.vars.len();
    if doc.objective.len() != n {
        return Err(ModelError::Invalid(format!(
            "{} objective coefficients for {n} variables",
            doc.objective.len()
        )));
    }
    if n == 0 {
        return Err(ModelError::Empty);
    }
    let mut index = HashMap::with_capacity(n);
    for (j, v) in doc.vars.iter().enumerate() {
        if index.insert(v.name.as_str(), j).is_some() {
            return Err(ModelError::Invalid(format!(
                "duplicate variable {:?}",
                v.name
            )));
        }
        if v.lb.is_nan() || v.ub.is_nan() || v.lb == f64::INFINITY || v.ub == f64::NEG_INFINITY {
            return Err(ModelError::Invalid(format!(
                "invalid bounds on {:?}",
                v.name
            )));
        }
    }
    for (j, c) in doc.objective.iter().enumerate() {
        if !c.is_finite() {
            return Err(ModelError::Invalid(format!(
                "objective coefficient {j} is not finite"
            )));
        }
    }
    let mut rows = Vec::with_capacity(doc.rows.len());
    let mut row_names = Vec::with_capacity(doc.rows.len());
    for (i, r) in doc.rows.iter().enumerate() {
        let mut coefs = Vec::with_capacity(r.coefs.len());
        for (name, &a) in &r.coefs {
            let j = *index.get(name.as_str()).ok_or_else(|| {
                ModelError::Invalid(format!("row {i} references unknown variable {name:?}"))
            })?;
            if !a.is_finite() {
                return Err(ModelError::Invalid(format!(
                    "coefficient of {name} in row {i}"
                )));
            }
            coefs.push((j, a));
        }
        if !r.rhs.is_finite() {
            return Err(ModelError::Invalid(format!("right-hand side of row {i}")));
        }
        rows.push(Row::new(coefs, r.sense, r.rhs));
        row_names.push(r.name.clone().unwrap_or_else(|| format!("c{}", i + 1)));
    }
    MilpProblem::with_names(
        doc.name,
        doc.sense,
        doc.objective,
        rows,
        doc.vars.iter().map(|v| v.lb).collect(),
        doc.vars.iter().map(|v| v.ub).collect(),
        doc.vars.iter().map(|v| v.integral).collect(),
        doc.vars.iter().map(|v| v.name.clone()).collect(),
        row_names,
        doc.offset,
    )
}

/// Serializes a problem to the instance schema (pretty-printed).
pub fn to_json(problem: &MilpProblem) -> String {
    let names = problem.var_names();
    let lp = problem.lp();
    let doc = InstanceDoc {
        name: problem.name().to_string(),
        sense: problem.sense(),
        objective: problem.external_costs(),
        rows: lp
            .rows()
            .iter()
            .zip(problem.row_names())
            .map(|(r, name)| RowDoc {
                name: Some(name.clone()),
                coefs: r
                    .coefs
                    .iter()
                    .map(|&(j, a)| (names[j].clone(), a))
                    .collect(),
                sense: r.sense,
                rhs: r.rhs,
            })
            .collect(),
        vars: (0..problem.num_vars())
            .map(|j| VarDoc {
                name: names[j].clone(),
                lb: lp.lower()[j],
                ub: lp.upper()[j],
                integral: problem.is_integral(j),
            })
            .collect(),
        offset: problem.offset(),
    };
    serde_json::to_string_pretty(&doc).expect("instance documents always serialize")
}
