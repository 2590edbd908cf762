//! Piecewise perturbation `f±, g±` of the triangle system, with its JSON form.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polyalg::{format_rational, parse_rational, rat_to_f64, Rational};

pub type Coeffs = BTreeMap<(u32, u32), Rational>;

/// `f±` carry the `a±` coefficients (the `dy` part), `g±` the `b±` ones (`dx`).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PerturbationSpec {
    pub n: u32,
    pub a_plus: Coeffs,
    pub a_minus: Coeffs,
    pub b_plus: Coeffs,
    pub b_minus: Coeffs,
}

impl PerturbationSpec {
    pub fn new(n: u32) -> Self {
        PerturbationSpec {
            n,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, m) in self.maps() {
            for &(i, j) in m.keys() {
                if i + j > self.n {
                    return Err(Error::Parse(format!(
                        "{name} index ({i}, {j}) exceeds degree n = {}",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }

    fn maps(&self) -> [(&'static str, &Coeffs); 4] {
        [
            ("a_plus", &self.a_plus),
            ("a_minus", &self.a_minus),
            ("b_plus", &self.b_plus),
            ("b_minus", &self.b_minus),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.maps().iter().all(|(_, m)| m.values().all(|c| *c == Rational::from_integer(0.into())))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: PerturbationSpec = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

/// Floating copy of one side's `(f, g)` for quadrature.
#[derive(Clone, Debug, Default)]
pub struct FloatSide {
    pub f: Vec<(i32, i32, f64)>,
    pub g: Vec<(i32, i32, f64)>,
}

impl FloatSide {
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let ev = |t: &[(i32, i32, f64)]| t.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum::<f64>();
        (ev(&self.f), ev(&self.g))
    }
}

fn to_float(m: &Coeffs) -> Vec<(i32, i32, f64)> {
    m.iter().map(|(&(i, j), c)| (i as i32, j as i32, rat_to_f64(c))).collect()
}

impl PerturbationSpec {
    /// `(upper, lower)` float copies.
    pub fn float_sides(&self) -> (FloatSide, FloatSide) {
        (
            FloatSide {
                f: to_float(&self.a_plus),
                g: to_float(&self.b_plus),
            },
            FloatSide {
                f: to_float(&self.a_minus),
                g: to_float(&self.b_minus),
            },
        )
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoeff {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    n: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    a_plus: Vec<(u32, u32, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    a_minus: Vec<(u32, u32, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    b_plus: Vec<(u32, u32, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    b_minus: Vec<(u32, u32, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecIn {
    n: u32,
    #[serde(default)]
    a_plus: Vec<(u32, u32, RawCoeff)>,
    #[serde(default)]
    a_minus: Vec<(u32, u32, RawCoeff)>,
    #[serde(default)]
    b_plus: Vec<(u32, u32, RawCoeff)>,
    #[serde(default)]
    b_minus: Vec<(u32, u32, RawCoeff)>,
}

fn collect(name: &str, v: Vec<(u32, u32, RawCoeff)>) -> Result<Coeffs> {
    let mut m = Coeffs::new();
    for (i, j, c) in v {
        let c = match c {
            RawCoeff::Text(s) => parse_rational(&s)?,
            RawCoeff::Number(x) => parse_rational(&x.to_string())?,
        };
        if m.insert((i, j), c).is_some() {
            return Err(Error::Parse(format!("{name} repeats index ({i}, {j})")));
        }
    }
    Ok(m)
}

fn emit(m: &Coeffs) -> Vec<(u32, u32, String)> {
    m.iter().map(|(&(i, j), c)| (i, j, format_rational(c))).collect()
}

impl Serialize for PerturbationSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSpec {
            n: self.n,
            a_plus: emit(&self.a_plus),
            a_minus: emit(&self.a_minus),
            b_plus: emit(&self.b_plus),
            b_minus: emit(&self.b_minus),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PerturbationSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSpecIn::deserialize(d)?;
        let build = || -> Result<PerturbationSpec> {
            let spec = PerturbationSpec {
                n: raw.n,
                a_plus: collect("a_plus", raw.a_plus)?,
                a_minus: collect("a_minus", raw.a_minus)?,
                b_plus: collect("b_plus", raw.b_plus)?,
                b_minus: collect("b_minus", raw.b_minus)?,
            };
            spec.validate()?;
            Ok(spec)
        };
        build().map_err(D::Error::custom)
    }
}
