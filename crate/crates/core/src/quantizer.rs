//! Builds the preferred quantization by adjoining `x_{n-1}, ..., x_1` in front
//! of `L[X_n]` one at a time.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::commutative::{compute_d_chain, CommutativeAnalysis};
use crate::error::{Error, Result};
use crate::ore::{eval_at_one, OrePresentation};
use crate::poisson::{ExtensionSpec, PrependData};
use crate::quantum::{
    compute_quantum_d_chain, step_deltas, QuantumAnalysis, QuantumDChain, DEFAULT_MAX_PEEL,
};
use crate::report::{all_passed, CheckResult};
use crate::scalars::{QLaurent, QRational};
use crate::terms::{default_names, CommPoly, OreElement, Terms};

#[derive(Clone, Debug)]
pub struct QuantizeOptions {
    pub max_peel: usize,
}

impl Default for QuantizeOptions {
    fn default() -> Self {
        Self {
            max_peel: DEFAULT_MAX_PEEL,
        }
    }
}

/// Record of one prepend step, with generator indices 1-based and global.
#[derive(Clone, Debug, Serialize)]
pub struct StepAudit {
    pub k: usize,
    pub trivial: bool,
    pub eta: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub chain: Vec<usize>,
    pub d_chain: Vec<String>,
    pub m_monomials: Vec<String>,
    pub b_terms: Vec<String>,
    pub distinguished: Vec<String>,
    pub deltas: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug)]
pub struct Quantization {
    pub spec: ExtensionSpec,
    pub comm: CommutativeAnalysis,
    pub quantum: QuantumAnalysis,
    pub steps: Vec<StepAudit>,
}

impl Quantization {
    pub fn presentation(&self) -> &OrePresentation {
        &self.quantum.pres
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.steps.iter().flat_map(|s| s.checks.iter())
    }
}

pub(crate) fn eta_vector(spec: &ExtensionSpec) -> Vec<i64> {
    (0..spec.n).map(|j| spec.eta(j)).collect()
}

/// Names `prefix{offset+1}`, ... for a tail starting at global index `offset`.
pub(crate) fn shifted_names(prefix: &str, m: usize, offset: usize) -> Vec<String> {
    (0..m)
        .map(|i| format!("{prefix}{}", i + offset + 1))
        .collect()
}

/// Both the commutative and the quantum chain of a nontrivial step.
pub struct StepChains {
    pub comm: crate::commutative::DChain,
    pub quantum: QuantumDChain,
}

/// Computes `D` for adjoining `x_k` in front of the given tail analyses.
pub fn step_chains(
    step: &PrependData,
    tail_c: &CommutativeAnalysis,
    tail_q: &QuantumAnalysis,
    max_peel: usize,
) -> Result<Option<StepChains>> {
    let Some(dc) = compute_d_chain(step, tail_c)? else {
        return Ok(None);
    };
    let qd = compute_quantum_d_chain(step, tail_q, &dc, max_peel)?;
    Ok(Some(StepChains {
        comm: dc,
        quantum: qd,
    }))
}

/// `lim_{q→1} Δ(X_j)/(q-1) = δ(x_j)` for the new relations of a step.
pub fn step_semiclassical(step: &PrependData, deltas: &[OreElement]) -> CheckResult {
    let mut bad = Vec::new();
    for (j, d) in deltas.iter().enumerate() {
        let lim = semiclassical_poly(d);
        if lim.as_ref() != Some(&step.delta[j]) {
            bad.push(format!("X{}", j + step.k + 2));
        }
    }
    CheckResult::from_failures("step_semiclassical", &bad)
}

/// Coefficientwise `lim_{q→1} a/(q-1)`.
pub fn semiclassical_poly(a: &OreElement) -> Option<CommPoly> {
    let mut out = CommPoly::zero(a.nvars());
    for (u, c) in a.iter() {
        out.add_term(u.clone(), c.semiclassical_limit().ok()?);
    }
    Some(out)
}

/// Checks that the Y-sequence after the step matches the incremental update
/// `Y'_{p^i(k*)} = X_k Y_{p^i(k*)} + ω(1-ω)^{-1} Δ(Y_{p^i(k*)})`, other `Y` unchanged.
pub fn commute_audit(
    step: &PrependData,
    tail: &QuantumAnalysis,
    new: &QuantumAnalysis,
    chain: &[usize],
) -> CheckResult {
    let m = tail.n();
    let pres = &new.pres;
    let x0 = pres.var(0);
    let omega = QLaurent::q_pow(step.eta);
    let factor = match QRational::from(QLaurent::one() - omega.clone()).inv() {
        Ok(inv) => &QRational::from(omega) * &inv,
        Err(e) => return CheckResult::fail("commute_audit", e.to_string()),
    };
    let sigma = |a: &OreElement| -> OreElement {
        a.map_terms(m + 1, |u, c| {
            let s: i64 = (0..m)
                .map(|l| u.0[l + 1] as i64 * step.sigma_exponents[l])
                .sum();
            (u.clone(), c.shift(s))
        })
    };
    let mut bad = Vec::new();
    if new.y[0] != x0 {
        bad.push("Y'_k ≠ X_k".to_string());
    }
    for t in 0..m {
        let yt = tail.y[t].reindex(m + 1, |v| v + 1);
        let want = if chain.contains(&t) {
            let delta = pres.mul(&x0, &yt).sub(&pres.mul(&sigma(&yt), &x0));
            pres.mul(&x0, &yt).add(&delta.scale(&factor))
        } else {
            yt
        };
        if new.y[t + 1] != want {
            bad.push(format!("Y{}", t + step.k + 2));
        }
    }
    CheckResult::from_failures("commute_audit", &bad)
}

pub fn quantize(spec: &ExtensionSpec, opts: &QuantizeOptions) -> Result<Quantization> {
    spec.ensure_valid()?;
    let n = spec.n;
    let eta = eta_vector(spec);
    let mut cur_c = CommutativeAnalysis::new(&spec.restrict(n - 1))?;
    let mut cur_q = QuantumAnalysis::new(
        OrePresentation::single(),
        eta[n - 1..].to_vec(),
        Some(&cur_c.p),
    )?;
    let mut steps = Vec::new();

    for k in (0..n - 1).rev() {
        let step = PrependData::new(spec, k);
        let m = step.tail.n;
        let offset = k + 1;
        let xnames = shifted_names("X", m, offset);
        let ynames = shifted_names("y", m, offset);
        let big_y = shifted_names("Y", m, offset);
        let mut audit = StepAudit {
            k: k + 1,
            trivial: step.is_trivial(),
            eta: step.eta,
            pivot: None,
            m: None,
            chain: Vec::new(),
            d_chain: Vec::new(),
            m_monomials: Vec::new(),
            b_terms: Vec::new(),
            distinguished: Vec::new(),
            deltas: BTreeMap::new(),
            checks: Vec::new(),
        };

        let chains = step_chains(&step, &cur_c, &cur_q, opts.max_peel)?;
        let deltas = match &chains {
            None => vec![OreElement::zero(m); m],
            Some(ch) => {
                audit.pivot = Some(ch.comm.pivot + offset + 1);
                audit.m = Some(ch.comm.m());
                audit.chain = ch.comm.chain.iter().map(|c| c + offset + 1).collect();
                audit.d_chain = ch
                    .comm
                    .d
                    .iter()
                    .map(|d| d.display_with(&ynames).to_string())
                    .collect();
                audit.m_monomials = ch
                    .comm
                    .m_monomials
                    .iter()
                    .map(|(e, c)| {
                        Terms::monomial(e.clone(), c.clone())
                            .display_with(&ynames)
                            .to_string()
                    })
                    .collect();
                audit.b_terms = ch
                    .quantum
                    .b
                    .iter()
                    .map(|(e, c)| {
                        Terms::monomial(e.clone(), c.clone())
                            .display_with(&big_y)
                            .to_string()
                    })
                    .collect();
                audit.distinguished = ch
                    .quantum
                    .d
                    .iter()
                    .map(|d| d.display_with(&big_y).to_string())
                    .collect();
                audit.checks.extend(ch.comm.checks.iter().cloned());
                audit.checks.extend(ch.quantum.checks.iter().cloned());
                step_deltas(&step, &cur_q, ch.quantum.d0(), opts.max_peel)?
            }
        };
        for (j, d) in deltas.iter().enumerate() {
            if !d.is_zero() {
                audit.deltas.insert(
                    format!("X{}", j + offset + 1),
                    d.display_with(&xnames).to_string(),
                );
            }
        }
        audit.checks.push(step_semiclassical(&step, &deltas));

        let row: Vec<i64> = (k + 1..n).map(|j| spec.lambda_ij(k, j)).collect();
        let new_pres = cur_q.pres.prepend(&row, &deltas)?;
        let new_c = CommutativeAnalysis::new(&spec.restrict(k))?;
        let new_q = QuantumAnalysis::new(new_pres, eta[k..].to_vec(), Some(&new_c.p))?;
        let chain = chains
            .as_ref()
            .map(|c| c.comm.chain.clone())
            .unwrap_or_default();
        audit
            .checks
            .push(commute_audit(&step, &cur_q, &new_q, &chain));

        if !all_passed(&audit.checks) {
            let failed: Vec<String> = audit
                .checks
                .iter()
                .filter(|c| !c.passed())
                .map(|c| format!("{} ({})", c.name, c.witness.clone().unwrap_or_default()))
                .collect();
            return Err(Error::IdentityFailed(format!(
                "step k = {}: {}",
                k + 1,
                failed.join(", ")
            )));
        }
        steps.push(audit);
        cur_c = new_c;
        cur_q = new_q;
    }

    Ok(Quantization {
        spec: spec.clone(),
        comm: cur_c,
        quantum: cur_q,
        steps,
    })
}

/// Replaces the relations of the last step by `Δ' = ε Δ`; `ε(1)` must be 1.
pub fn scaled_variant(pres: &OrePresentation, eps: &QRational) -> Result<OrePresentation> {
    match eps.eval_at_one() {
        Some(v) if v == crate::scalars::rat(1) => {}
        _ => return Err(Error::BadEpsilon(eps.to_string())),
    }
    Ok(pres.scale_first_column(eps))
}

/// Recovers `ε` from `Δ'_j(X_1) = ε Δ_j(X_1)` by exact division, if the two
/// presentations differ only in that way. Returns `Ok(None)` when there is nothing to compare.
pub fn recover_epsilon(
    base: &OrePresentation,
    scaled: &OrePresentation,
) -> Result<Option<QRational>> {
    let n = base.n();
    if scaled.n() != n || scaled.lambda_matrix() != base.lambda_matrix() {
        return Err(Error::IdentityFailed(
            "presentations have different shapes".into(),
        ));
    }
    let mut eps: Option<QRational> = None;
    for j in 1..n {
        for i in 1..j {
            if base.delta(j, i) != scaled.delta(j, i) {
                return Err(Error::IdentityFailed(format!(
                    "Δ{}(X{}) differs",
                    j + 1,
                    i + 1
                )));
            }
        }
        let (a, b) = (base.delta(j, 0), scaled.delta(j, 0));
        if a.is_zero() {
            if !b.is_zero() {
                return Err(Error::IdentityFailed(format!(
                    "Δ{}(X1) appears from nothing",
                    j + 1
                )));
            }
            continue;
        }
        let (le, lc) = a.leading().unwrap();
        let r = b.coeff(le).checked_div(lc)?;
        if *b != a.scale(&r) {
            return Err(Error::IdentityFailed(format!(
                "Δ{}(X1) is not a scalar multiple",
                j + 1
            )));
        }
        match &eps {
            Some(e) if *e != r => return Err(Error::IdentityFailed("inconsistent ratios".into())),
            _ => eps = Some(r),
        }
    }
    Ok(eps)
}

/// `X_i X_j = q^{-λ_{ij}} X_j X_i + Δ_{ij}` as text.
pub fn relation_strings(pres: &OrePresentation) -> Vec<String> {
    let n = pres.n();
    let names = default_names("X", n);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let e = -pres.lambda(i, j);
            let scalar = match e {
                0 => String::new(),
                1 => "q*".to_string(),
                _ => format!("q^{e}*"),
            };
            let mut line = format!(
                "{}*{} = {}{}*{}",
                names[i], names[j], scalar, names[j], names[i]
            );
            let d = pres.relation_delta(i, j);
            if !d.is_zero() {
                let text = d.display_with(&names).to_string();
                match text.strip_prefix('-') {
                    Some(rest) => line.push_str(&format!(" - {rest}")),
                    None => line.push_str(&format!(" + {text}")),
                }
            }
            out.push(line);
        }
    }
    out
}

/// Specialization of the Y-sequence at `q = 1`.
pub fn y_at_one(q: &QuantumAnalysis) -> Option<Vec<CommPoly>> {
    q.y.iter().map(eval_at_one).collect()
}
