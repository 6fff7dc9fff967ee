//! JSON and CSV rendering with every float in fixed scientific notation.

use serde::Serialize;
use serde_json::{json, Map, Number, Value};
use wavepath::format::sci;
use wavepath::{
    BinaryDistribution64, DiscreteJoint64, PhaseDensity64, PhaseJoint64, PureState64, SIGNS,
};

use crate::error::CliError;

/// A float as a JSON number printed with 17 significant digits.
pub fn number(x: f64) -> Result<Value, CliError> {
    if !x.is_finite() {
        return Err(CliError::Validation(format!(
            "refusing to print non-finite value {x}"
        )));
    }
    let n: Number = serde_json::from_str(&sci(x)).expect("sci output is valid JSON");
    Ok(Value::Number(n))
}

/// Rewrites every non-integer number in `v` through [`number`].
pub fn canonical(v: Value) -> Result<Value, CliError> {
    Ok(match v {
        Value::Number(n) if n.is_f64() => number(n.as_f64().expect("finite float"))?,
        Value::Array(items) => {
            Value::Array(items.into_iter().map(canonical).collect::<Result<_, _>>()?)
        }
        Value::Object(fields) => Value::Object(
            fields
                .into_iter()
                .map(|(k, v)| Ok((k, canonical(v)?)))
                .collect::<Result<Map<_, _>, CliError>>()?,
        ),
        other => other,
    })
}

pub fn to_value<S: Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("report types serialize")
}

pub fn render(v: Value) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(&canonical(v)?).expect("values serialize");
    text.push('\n');
    Ok(text)
}

pub fn state(s: &PureState64) -> Value {
    json!({
        "alpha": [s.alpha().re, s.alpha().im],
        "beta": [s.beta().re, s.beta().im],
    })
}

pub fn binary(b: &BinaryDistribution64) -> Value {
    json!({ "plus": b.p_plus, "minus": b.p_minus })
}

pub fn density(d: &PhaseDensity64) -> Value {
    json!({ "c0": d.c0, "c_cos": d.c_cos, "c_sin": d.c_sin })
}

pub fn density_grid(d: &PhaseDensity64, points: usize) -> Value {
    d.grid(points)
        .into_iter()
        .map(|(phi, v)| json!({ "phi": phi, "density": v }))
        .collect()
}

pub fn table(j: &DiscreteJoint64) -> Value {
    j.entries()
        .iter()
        .map(|&(x, z, v)| json!({ "x": x, "z": z, "value": v }))
        .collect()
}

pub fn slices(j: &PhaseJoint64, grid_points: Option<usize>) -> Value {
    SIGNS
        .iter()
        .map(|&z| {
            let d = j.slice(z);
            let mut v = json!({ "z": z, "density": density(&d) });
            if let Some(points) = grid_points {
                v["grid"] = density_grid(&d, points);
            }
            v
        })
        .collect()
}

pub fn table_csv(j: &DiscreteJoint64) -> String {
    let mut out = String::from("x,z,value\n");
    for (x, z, v) in j.entries() {
        out.push_str(&format!("{x},{z},{}\n", sci(v)));
    }
    out
}

pub fn density_csv(d: &PhaseDensity64, points: usize) -> String {
    let mut out = String::from("phi,density\n");
    for (phi, v) in d.grid(points) {
        out.push_str(&format!("{},{}\n", sci(phi), sci(v)));
    }
    out
}

pub fn slices_csv(j: &PhaseJoint64, points: usize) -> String {
    let mut out = String::from("phi,z,density\n");
    for z in SIGNS {
        for (phi, v) in j.slice(z).grid(points) {
            out.push_str(&format!("{},{z},{}\n", sci(phi), sci(v)));
        }
    }
    out
}
