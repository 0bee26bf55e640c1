use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use valgeo::algebra::{exact_suite, InvariantValuation, ScaledRational, SoAlgebra};
use valgeo::geometry::{parse_body, simplex, cube, PolytopeJson};
use valgeo::harness::{convolution_campaign, run_identity_suite, Formula, NamedBody, SuiteConfig};
use valgeo::valuations::{
    formal_convolve_counted, formal_evaluate, intrinsic_volumes_exact, intrinsic_volumes_mc, mixed_volume, mu_a_expand,
    product_mc, MuA, Valuation, Volume,
};
use valgeo::{Polytope, RngStream};

use crate::{Cli, Command, Kind, PairArgs, Target, ValuationArg};

pub const DEFAULT_SAMPLES: usize = 100_000;
const CONVOLUTION_VERTICES: usize = 6;

pub struct Outcome {
    pub result: Value,
    pub pass: bool,
}

type Run = std::result::Result<Outcome, String>;

fn ok(result: Value) -> Run {
    Ok(Outcome { result, pass: true })
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("value serializes")
}

fn load(path: &Path, dim: Option<usize>) -> Result<Polytope, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec = parse_body(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let body = spec.build().map_err(|e| format!("{}: {e}", path.display()))?;
    match dim {
        Some(d) if d != body.dim() => Err(format!("{}: body has dimension {}, --dim is {d}", path.display(), body.dim())),
        _ => Ok(body),
    }
}

fn need_dim(dim: Option<usize>) -> Result<usize, String> {
    dim.ok_or_else(|| "--dim is required for this command".to_string())
}

fn algebra(n: usize) -> Result<SoAlgebra, String> {
    SoAlgebra::new(n).map_err(|e| format!("--dim {n}: {e}"))
}

fn parse_valuation(n: usize, v: &ValuationArg) -> Result<InvariantValuation, String> {
    if let Some(k) = v.degree {
        return InvariantValuation::mu(n, k).map_err(|e| format!("--degree: {e}"));
    }
    let text = v.coeffs.as_deref().unwrap_or_default();
    let coeffs = text
        .split(',')
        .map(|c| c.trim().parse::<ScaledRational>().map_err(|e| format!("--coeffs `{c}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.len() != n + 1 {
        return Err(format!("--coeffs: expected {} coefficients for --dim {n}, found {}", n + 1, coeffs.len()));
    }
    InvariantValuation::from_coeffs(coeffs).map_err(|e| format!("--coeffs: {e}"))
}

pub fn run(cli: &Cli) -> Run {
    let g = &cli.global;
    let stream = RngStream::new(g.seed);
    let samples = g.samples.unwrap_or(DEFAULT_SAMPLES);
    let err = |e: valgeo::Error| e.to_string();
    match &cli.command {
        Command::Intrinsic { body } => {
            let p = load(body, g.dim)?;
            let v = match g.samples {
                Some(s) => intrinsic_volumes_mc(&p, s, stream),
                None => intrinsic_volumes_exact(&p)
                    .map_err(|e| valgeo::Error::Unsupported(format!("{e}; pass --samples for a Monte Carlo estimate"))),
            }
            .map_err(err)?;
            ok(to_json(&v))
        }
        Command::MixedVolume { bodies } => {
            let ps = bodies.iter().map(|b| load(b, g.dim)).collect::<Result<Vec<_>, _>>()?;
            let v = mixed_volume(&ps).map_err(err)?;
            ok(json!({ "value": v, "exact": true }))
        }
        Command::Minkowski { a, b } => {
            let sum = load(a, g.dim)?.minkowski_sum(&load(b, g.dim)?).map_err(err)?;
            ok(json!({ "body": PolytopeJson::from(&sum), "volume": sum.volume(), "exact": true }))
        }
        Command::Convolve { a, b, eval } => {
            let (a, b, k) = (load(a, g.dim)?, load(b, g.dim)?, load(eval, g.dim)?);
            let (conv, _) = formal_convolve_counted(&mu_a_expand(&a), &mu_a_expand(&b)).map_err(err)?;
            let value = formal_evaluate(&conv, &k).map_err(err)?;
            let direct = a.minkowski_sum(&b).and_then(|s| s.minkowski_sum(&k)).map_err(err)?.volume();
            ok(json!({
                "value": value,
                "direct": direct,
                "relative_error": (value - direct).abs() / direct.abs(),
                "exact": true,
            }))
        }
        Command::Product { a, b, eval } => {
            let (pa, k) = (load(a, g.dim)?, load(eval, g.dim)?);
            let phi: Box<dyn Valuation> = match b {
                Some(b) => Box::new(MuA { a: load(b, g.dim)? }),
                None => Box::new(Volume { dim: pa.dim() }),
            };
            let est = product_mc(&pa, phi.as_ref(), &k, samples, stream).map_err(err)?;
            ok(to_json(&est))
        }
        Command::Dualize { valuation } => {
            let n = need_dim(g.dim)?;
            let alg = algebra(n)?;
            let v = parse_valuation(n, valuation)?;
            let d = alg.dual(&v).map_err(err)?;
            ok(json!({ "valuation": to_json(&v), "dual": to_json(&d), "exact": true }))
        }
        Command::Coproduct { kind, valuation } => {
            let n = need_dim(g.dim)?;
            let alg = algebra(n)?;
            let v = parse_valuation(n, valuation)?;
            let t = match kind {
                Kind::Kinematic => alg.kinematic_of(&v),
                Kind::Additive => alg.additive_of(&v),
            }
            .map_err(err)?;
            ok(json!({ "valuation": to_json(&v), "tensor": to_json(&t), "exact": true }))
        }
        Command::Verify { target } => verify(cli, target),
    }
}

fn default_pairs(n: usize) -> Result<Vec<(NamedBody, NamedBody)>, String> {
    let c = cube(n, 1.0).map_err(|e| e.to_string())?;
    let s = simplex(n, 1.0).map_err(|e| e.to_string())?;
    Ok(vec![
        (NamedBody::new("cube", c.clone()), NamedBody::new("cube", c.clone())),
        (NamedBody::new("cube", c), NamedBody::new("simplex", s)),
    ])
}

fn kinematic_suite(cli: &Cli, formula: Formula, pair: Option<&PairArgs>, z_max: f64, stream: RngStream) -> Run {
    let g = &cli.global;
    let n = need_dim(g.dim)?;
    let alg = algebra(n)?;
    let pairs = match pair {
        Some(PairArgs { a: Some(a), b: Some(b), .. }) => {
            vec![(NamedBody::new(a.display().to_string(), load(a, g.dim)?), NamedBody::new(b.display().to_string(), load(b, g.dim)?))]
        }
        _ => default_pairs(n)?,
    };
    let cfg = SuiteConfig { formulas: vec![formula], pairs, samples: g.samples.unwrap_or(DEFAULT_SAMPLES), z_max };
    let report = run_identity_suite(&alg, &cfg, stream).map_err(|e| e.to_string())?;
    Ok(Outcome { pass: report.pass, result: to_json(&report) })
}

fn exact_campaign(n: usize) -> Run {
    let reports = exact_suite(&algebra(n)?).map_err(|e| e.to_string())?;
    let pass = reports.iter().all(|r| r.passed());
    Ok(Outcome { pass, result: json!({ "n": n, "reports": to_json(&reports), "pass": pass, "exact": true }) })
}

fn convolution(n: usize, count: usize, tolerance: f64, stream: RngStream) -> Run {
    let r = convolution_campaign(n, count, CONVOLUTION_VERTICES, tolerance, stream).map_err(|e| e.to_string())?;
    Ok(Outcome { pass: r.pass, result: to_json(&r) })
}

fn verify(cli: &Cli, target: &Target) -> Run {
    let g = &cli.global;
    let stream = RngStream::new(g.seed);
    match target {
        Target::Exact => exact_campaign(need_dim(g.dim)?),
        Target::Kinematic(p) => kinematic_suite(cli, Formula::Intersection, Some(p), p.z_max, stream),
        Target::Additive(p) => kinematic_suite(cli, Formula::Additive, Some(p), p.z_max, stream),
        Target::Convolution { count, tolerance } => convolution(need_dim(g.dim)?, *count, *tolerance, stream),
        Target::All { z_max } => {
            let n = need_dim(g.dim)?;
            let parts = [
                ("exact", exact_campaign(n)?),
                ("convolution", convolution(n, 20, 1e-6, RngStream::with_stream(g.seed, 1))?),
                ("kinematic", kinematic_suite(cli, Formula::Intersection, None, *z_max, RngStream::with_stream(g.seed, 2))?),
                ("additive", kinematic_suite(cli, Formula::Additive, None, *z_max, RngStream::with_stream(g.seed, 3))?),
            ];
            let pass = parts.iter().all(|(_, o)| o.pass);
            let mut result = serde_json::Map::new();
            for (name, o) in parts {
                result.insert(name.into(), o.result);
            }
            result.insert("pass".into(), Value::Bool(pass));
            Ok(Outcome { result: Value::Object(result), pass })
        }
    }
}
