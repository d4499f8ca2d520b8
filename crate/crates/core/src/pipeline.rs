//! JSON forms of analyses and presentations, golden comparisons, and the
//! validate → analyze → quantize → verify pipeline used by the CLI.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::commutative::{degree_pattern, CommutativeAnalysis};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fixtures::Fixture;
use crate::ore::OrePresentation;
use crate::poisson::ExtensionSpec;
use crate::quantizer::{
    eta_vector, quantize, relation_strings, scaled_variant, Quantization, QuantizeOptions,
};
use crate::quantum::QuantumAnalysis;
use crate::report::{all_passed, CheckResult};
use crate::scalars::QRational;
use crate::terms::{default_names, OreElement};
use crate::text::parse_ordered;
use crate::verifier::{verify, VerificationReport, VerifyOptions};

pub fn read_spec(path: &Path) -> Result<ExtensionSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    ExtensionSpec::from_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn p_json(p: &[Option<usize>]) -> Vec<usize> {
    p.iter().map(|x| x.map_or(0, |i| i + 1)).collect()
}

fn one_based(sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    sets.into_iter()
        .map(|s| s.into_iter().map(|i| i + 1).collect())
        .collect()
}

pub fn analysis_json(c: &CommutativeAnalysis) -> Value {
    let spec = &c.spec;
    let ynames = c.y_names();
    let mut b = Map::new();
    for k in 0..spec.n {
        if c.p[k].is_some() {
            let text = match c.compute_b(k) {
                Ok(t) => crate::terms::Terms::monomial(t.exponent, t.coeff)
                    .display_with(&ynames)
                    .to_string(),
                Err(e) => format!("error: {e}"),
            };
            b.insert(format!("b{}", k + 1), Value::String(text));
        }
    }
    json!({
        "name": spec.name,
        "n": spec.n,
        "y_sequence": c.y.iter().map(|y| spec.display(y)).collect::<Vec<_>>(),
        "p": p_json(&c.p),
        "level_sets": one_based(c.level_sets()),
        "rank": c.rank(),
        "kappa": c.kappa,
        "degree_patterns": (0..spec.n).map(|j| degree_pattern(&c.p, j).0).collect::<Vec<_>>(),
        "b": b,
    })
}

/// `{n, lambda_matrix, delta: {"j": {"i": Δ_j(X_i)}}, relations}`, 1-based.
pub fn presentation_json(pres: &OrePresentation) -> Value {
    let n = pres.n();
    let mut delta = Map::new();
    for j in 0..n {
        let mut row = Map::new();
        for i in 0..j {
            let d = pres.delta(j, i);
            if !d.is_zero() {
                row.insert((i + 1).to_string(), Value::String(pres.display(d)));
            }
        }
        if !row.is_empty() {
            delta.insert((j + 1).to_string(), Value::Object(row));
        }
    }
    let lambda: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i < j { pres.lambda(i, j) } else { 0 })
                .collect()
        })
        .collect();
    json!({
        "n": n,
        "lambda_matrix": lambda,
        "delta": delta,
        "relations": relation_strings(pres),
    })
}

fn index(key: &str, n: usize) -> Result<usize> {
    match key.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(Error::Parse(format!(
            "index \"{key}\" out of range 1..={n}"
        ))),
    }
}

/// Reads the form written by [`presentation_json`]; `relations` is ignored.
pub fn presentation_from_json(v: &Value) -> Result<OrePresentation> {
    let bad = |what: &str| Error::Parse(format!("presentation: {what}"));
    let lambda: Vec<Vec<i64>> = serde_json::from_value(
        v.get("lambda_matrix")
            .cloned()
            .ok_or_else(|| bad("missing lambda_matrix"))?,
    )
    .map_err(|e| bad(&e.to_string()))?;
    let n = lambda.len();
    if n == 0 || lambda.iter().any(|r| r.len() != n) {
        return Err(bad("lambda_matrix must be square and nonempty"));
    }
    let names = default_names("X", n);
    let mut delta: Vec<Vec<OreElement>> = (0..n).map(|j| vec![OreElement::zero(n); j]).collect();
    if let Some(table) = v.get("delta") {
        let table = table
            .as_object()
            .ok_or_else(|| bad("delta must be an object"))?;
        for (jk, row) in table {
            let j = index(jk, n)?;
            for (ik, text) in row
                .as_object()
                .ok_or_else(|| bad("delta rows must be objects"))?
            {
                let i = index(ik, n)?;
                if i >= j {
                    return Err(bad(&format!("delta entry ({jk}, {ik}) needs i < j")));
                }
                let text = text
                    .as_str()
                    .ok_or_else(|| bad("delta entries must be strings"))?;
                delta[j][i] = parse_ordered(text, &names, false)?;
            }
        }
    }
    OrePresentation::new(lambda, delta)
}

pub fn quantum_json(q: &QuantumAnalysis) -> Value {
    json!({
        "y_sequence": (0..q.n()).map(|j| q.display_y(j)).collect::<Vec<_>>(),
        "p": p_json(&q.p),
        "l_matrix": q.torus.l,
        "level_sets": one_based(q.level_sets()),
    })
}

/// Compares a quantization against the golden block of a fixture.
pub fn compare_expected(
    expected: &Value,
    pres: &OrePresentation,
    q: &QuantumAnalysis,
    c: &CommutativeAnalysis,
) -> Vec<CheckResult> {
    let n = pres.n();
    let names = default_names("X", n);
    let mut out = Vec::new();
    if let Some(v) = expected.get("lambda_matrix") {
        let want: Option<Vec<Vec<i64>>> = serde_json::from_value(v.clone()).ok();
        let got: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i < j { pres.lambda(i, j) } else { 0 })
                    .collect()
            })
            .collect();
        out.push(CheckResult::from_bool(
            "golden_lambda",
            want.as_ref() == Some(&got),
            || format!("{got:?}"),
        ));
    }
    if let Some(v) = expected.get("relations").and_then(Value::as_object) {
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let got = pres.relation_delta(i, j);
                let want = match v
                    .get(&format!("{},{}", i + 1, j + 1))
                    .and_then(Value::as_str)
                {
                    Some(text) => parse_ordered(text, &names, false).ok(),
                    None => Some(OreElement::zero(n)),
                };
                if want.as_ref() != Some(&got) {
                    bad.push(format!("Δ{},{} = {}", i + 1, j + 1, pres.display(&got)));
                }
            }
        }
        out.push(CheckResult::from_failures("golden_relations", &bad));
    }
    if let Some(v) = expected.get("y_sequence").and_then(Value::as_array) {
        let mut bad = Vec::new();
        for (j, text) in v.iter().enumerate() {
            let want = text
                .as_str()
                .and_then(|t| parse_ordered(t, &names, false).ok());
            if q.y.get(j) != want.as_ref() {
                bad.push(format!("Y{} = {}", j + 1, q.display_y(j)));
            }
        }
        if v.len() != n {
            bad.push(format!("expected {} entries", v.len()));
        }
        out.push(CheckResult::from_failures("golden_y_sequence", &bad));
    }
    if let Some(v) = expected.get("kappa") {
        let want: Option<Vec<Vec<i64>>> = serde_json::from_value(v.clone()).ok();
        out.push(CheckResult::from_bool(
            "golden_kappa",
            want.as_ref() == Some(&c.kappa),
            || format!("{:?}", c.kappa),
        ));
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub quantize: QuantizeOptions,
    pub verify: Option<VerifyOptions>,
    pub epsilon: Option<QRational>,
}

/// Everything produced for one spec.
pub struct PipelineRun {
    pub quantization: Quantization,
    /// The presentation after the optional ε-scaling.
    pub presentation: OrePresentation,
    pub quantum: QuantumAnalysis,
    pub verification: Option<VerificationReport>,
}

impl PipelineRun {
    pub fn passed(&self) -> bool {
        all_passed(&self.quantization.checks().cloned().collect::<Vec<_>>())
            && self.verification.as_ref().is_none_or(|v| v.passed)
    }

    pub fn to_json(&self, with_audit: bool) -> Value {
        let mut v = presentation_json(&self.presentation);
        let obj = v.as_object_mut().unwrap();
        obj.insert("name".into(), json!(self.quantization.spec.name));
        for (k, val) in quantum_json(&self.quantum).as_object().unwrap() {
            obj.insert(k.clone(), val.clone());
        }
        if with_audit {
            obj.insert(
                "audit".into(),
                serde_json::to_value(&self.quantization.steps).unwrap(),
            );
        }
        if let Some(r) = &self.verification {
            obj.insert("verification".into(), serde_json::to_value(r).unwrap());
        }
        v
    }
}

pub fn run_pipeline(spec: &ExtensionSpec, opts: &PipelineOptions) -> Result<PipelineRun> {
    let quantization = quantize(spec, &opts.quantize)?;
    let (presentation, quantum) = match &opts.epsilon {
        None => (
            quantization.presentation().clone(),
            QuantumAnalysis::new(quantization.presentation().clone(), eta_vector(spec), None)?,
        ),
        Some(eps) => {
            let p = scaled_variant(quantization.presentation(), eps)?;
            let q = QuantumAnalysis::new(p.clone(), eta_vector(spec), Some(&quantization.comm.p))?;
            (p, q)
        }
    };
    let verification = opts.verify.as_ref().map(|v| verify(spec, &presentation, v));
    Ok(PipelineRun {
        quantization,
        presentation,
        quantum,
        verification,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<CheckResult>,
}

/// Quantizes and verifies a bundled fixture, including its golden values.
pub fn run_fixture(
    fx: &Fixture,
    verify_opts: &VerifyOptions,
    quantize_opts: &QuantizeOptions,
) -> FixtureOutcome {
    let start = Instant::now();
    let opts = PipelineOptions {
        quantize: quantize_opts.clone(),
        verify: Some(verify_opts.clone()),
        epsilon: None,
    };
    let (checks, error) = match run_pipeline(&fx.spec, &opts) {
        Ok(run) => {
            let mut checks: Vec<CheckResult> = run.quantization.checks().cloned().collect();
            checks.extend(run.verification.map(|v| v.checks).unwrap_or_default());
            if let Some(exp) = &fx.expected {
                checks.extend(compare_expected(
                    exp,
                    &run.presentation,
                    &run.quantum,
                    &run.quantization.comm,
                ));
            }
            (checks, None)
        }
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    FixtureOutcome {
        name: fx.name.clone(),
        passed: error.is_none() && all_passed(&checks),
        seconds: start.elapsed().as_secs_f64(),
        error,
        checks,
    }
}

pub fn run_fixtures(
    fixtures: &[Fixture],
    exec: Exec,
    verify_opts: &VerifyOptions,
    quantize_opts: &QuantizeOptions,
) -> Vec<FixtureOutcome> {
    exec.map(fixtures, |fx| run_fixture(fx, verify_opts, quantize_opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn presentation_json_round_trip() {
        for fx in fixtures::all() {
            let qz = quantize(&fx.spec, &QuantizeOptions::default()).unwrap();
            let v = presentation_json(qz.presentation());
            let text = serde_json::to_string(&v).unwrap();
            let back = presentation_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(&back, qz.presentation(), "{}", fx.name);
        }
    }

    #[test]
    fn bad_presentations_are_rejected() {
        let v = json!({"lambda_matrix": [[0, 1], [0, 0]], "delta": {"2": {"1": "X2"}}});
        assert!(matches!(
            presentation_from_json(&v),
            Err(Error::SupportViolation(_))
        ));
        let v = json!({"lambda_matrix": [[0, 1], [0, 0]], "delta": {"3": {"1": "1"}}});
        assert!(matches!(presentation_from_json(&v), Err(Error::Parse(_))));
    }

    #[test]
    fn golden_blocks_match() {
        for fx in fixtures::all() {
            let out = run_fixture(&fx, &VerifyOptions::default(), &QuantizeOptions::default());
            assert!(
                out.passed,
                "{}: {:?} {:?}",
                fx.name,
                out.error,
                out.checks
                    .iter()
                    .filter(|c| !c.passed())
                    .collect::<Vec<_>>()
            );
        }
    }
}
