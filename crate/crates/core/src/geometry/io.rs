//! Body JSON: explicit vertices or a named generator.
//!
//! ```json
//! {"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}
//! {"gen": "ball-approx", "dim": 3, "scale": 1.0, "facets": 200}
//! ```

use serde::{Deserialize, Serialize};

use super::generators;
use super::polytope::{Polytope, PolytopeJson};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    Cube,
    Simplex,
    Crosspolytope,
    BallApprox,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub gen: Generator,
    pub dim: usize,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub facets: Option<usize>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodySpec {
    Generator(GeneratorSpec),
    Vertices(PolytopeJson),
}

impl BodySpec {
    pub fn build(&self) -> Result<Polytope> {
        match self {
            BodySpec::Vertices(v) => Polytope::hull(&v.vertices, v.dim),
            BodySpec::Generator(g) => match g.gen {
                Generator::Cube => generators::cube(g.dim, g.scale),
                Generator::Simplex => generators::simplex(g.dim, g.scale),
                Generator::Crosspolytope => generators::cross_polytope(g.dim, g.scale),
                Generator::BallApprox => {
                    let f = g.facets.ok_or_else(|| Error::Invalid("ball-approx requires `facets`".into()))?;
                    generators::ball_approx(g.dim, g.scale, f)
                }
            },
        }
    }
}

/// Parses a body document. Errors carry serde's line/column diagnostics.
pub fn parse_body(text: &str) -> Result<BodySpec> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
    let is_gen = value.get("gen").is_some();
    // reparse from text so that field errors keep their position
    let spec = if is_gen {
        serde_json::from_str::<GeneratorSpec>(text).map(BodySpec::Generator)
    } else {
        serde_json::from_str::<PolytopeJson>(text).map(BodySpec::Vertices)
    };
    spec.map_err(|e| Error::Invalid(e.to_string()))
}
