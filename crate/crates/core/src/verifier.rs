//! Independent checks of a quantum presentation against its Poisson input.
//!
//! Everything is recomputed from `(spec, presentation)`; nothing is taken from
//! the quantizer's own audit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commutative::{degree_pattern, CommutativeAnalysis};
use crate::exec::Exec;
use crate::ore::{coefficients_in_l, eval_at_one, OrePresentation, QTorus};
use crate::poisson::{pair, ExtensionSpec, PrependData};
use crate::quantizer::{eta_vector, semiclassical_poly, step_chains};
use crate::quantum::{step_deltas, QuantumAnalysis, DEFAULT_MAX_PEEL};
use crate::report::{all_passed, CheckResult};
use crate::scalars::{rat, QRational};
use crate::terms::{Exponent, OreElement, TorusElement};

pub const DEFAULT_SEED: u64 = 0x05ee_dc61;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random pairs for the semiclassical and embedding checks.
    pub samples: usize,
    pub max_degree: u32,
    pub fuzz_triples: usize,
    pub round_trips: usize,
    pub max_peel: usize,
    /// Bound on `Δ_j` iterations before a generator image must vanish.
    pub nilpotency_cap: usize,
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: 20,
            max_degree: 3,
            fuzz_triples: 200,
            round_trips: 100,
            max_peel: DEFAULT_MAX_PEEL,
            nilpotency_cap: 64,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// `ε_k` recovered at each nontrivial step, as text.
    pub epsilons: Vec<(usize, String)>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Uniform random normal-form elements with small `L` coefficients.
pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
    max_degree: u32,
}

impl Sampler {
    pub fn new(seed: u64, n: usize, max_degree: u32) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
            max_degree,
        }
    }

    fn coefficient(&mut self) -> QRational {
        let mut c = 0;
        while c == 0 {
            c = self.rng.random_range(-3i64..=3);
        }
        QRational::from_int(c).shift(self.rng.random_range(-1i64..=1))
    }

    pub fn exponent(&mut self) -> Exponent {
        let mut e = Exponent::zeros(self.n);
        let deg = self.rng.random_range(0..=self.max_degree);
        for _ in 0..deg {
            let v = self.rng.random_range(0..self.n);
            e.0[v] += 1;
        }
        e
    }

    pub fn element(&mut self) -> OreElement {
        let mut out = OreElement::zero(self.n);
        while out.is_zero() {
            for _ in 0..self.rng.random_range(1..=3) {
                let e = self.exponent();
                let c = self.coefficient();
                out.add_term(e, c);
            }
        }
        out
    }

    pub fn torus_element(&mut self) -> TorusElement {
        let mut out = TorusElement::zero(self.n);
        while out.is_zero() {
            for _ in 0..self.rng.random_range(1..=3) {
                let e = Exponent((0..self.n).map(|_| self.rng.random_range(-2..=2)).collect());
                let c = self.coefficient();
                out.add_term(e, c);
            }
        }
        out
    }
}

struct Ctx<'a> {
    spec: &'a ExtensionSpec,
    pres: &'a OrePresentation,
    comm: Option<CommutativeAnalysis>,
    quantum: Option<QuantumAnalysis>,
    opts: &'a VerifyOptions,
}

#[derive(Clone, Copy)]
enum Group {
    Structure,
    Semiclassical,
    Quantum,
    Nilpotency,
    Confluence,
    Associativity,
    Embedding,
    Step(usize),
}

impl Group {
    fn salt(self) -> u64 {
        match self {
            Group::Structure => 1,
            Group::Semiclassical => 2,
            Group::Quantum => 3,
            Group::Nilpotency => 4,
            Group::Confluence => 5,
            Group::Associativity => 6,
            Group::Embedding => 7,
            Group::Step(k) => 100 + k as u64,
        }
    }
}

pub fn verify(
    spec: &ExtensionSpec,
    pres: &OrePresentation,
    opts: &VerifyOptions,
) -> VerificationReport {
    let mut head = Vec::new();
    if pres.n() != spec.n {
        head.push(CheckResult::fail(
            "shape",
            format!(
                "presentation has {} generators, spec has {}",
                pres.n(),
                spec.n
            ),
        ));
        return finish(opts.seed, head, Vec::new());
    }
    let validation = spec.validate();
    head.push(CheckResult::from_failures(
        "spec_valid",
        &validation.failures(),
    ));
    if !validation.valid {
        return finish(opts.seed, head, Vec::new());
    }
    let comm = match CommutativeAnalysis::new(spec) {
        Ok(c) => Some(c),
        Err(e) => {
            head.push(CheckResult::fail("commutative_analysis", e.to_string()));
            None
        }
    };
    let quantum = match QuantumAnalysis::new(
        pres.clone(),
        eta_vector(spec),
        comm.as_ref().map(|c| c.p.as_slice()),
    ) {
        Ok(q) => {
            head.push(CheckResult::pass("quantum_analysis"));
            Some(q)
        }
        Err(e) => {
            head.push(CheckResult::fail("quantum_analysis", e.to_string()));
            None
        }
    };
    let ctx = Ctx {
        spec,
        pres,
        comm,
        quantum,
        opts,
    };

    let mut groups = vec![
        Group::Structure,
        Group::Semiclassical,
        Group::Quantum,
        Group::Nilpotency,
        Group::Confluence,
        Group::Associativity,
        Group::Embedding,
    ];
    groups.extend((0..spec.n.saturating_sub(1)).rev().map(Group::Step));
    let results = opts.exec.map(&groups, |&g| run_group(&ctx, g));

    let mut epsilons = Vec::new();
    for (checks, eps) in results {
        head.extend(checks);
        epsilons.extend(eps);
    }
    finish(opts.seed, head, epsilons)
}

fn finish(
    seed: u64,
    checks: Vec<CheckResult>,
    epsilons: Vec<(usize, String)>,
) -> VerificationReport {
    VerificationReport {
        seed,
        passed: all_passed(&checks),
        checks,
        epsilons,
    }
}

type GroupOutput = (Vec<CheckResult>, Vec<(usize, String)>);

fn run_group(ctx: &Ctx, g: Group) -> GroupOutput {
    let seed = ctx
        .opts
        .seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(g.salt());
    let mut sampler = Sampler::new(seed, ctx.spec.n, ctx.opts.max_degree);
    match g {
        Group::Structure => (structure_checks(ctx), Vec::new()),
        Group::Semiclassical => (
            vec![semiclassical_check(
                ctx.spec,
                ctx.pres,
                &mut sampler,
                ctx.opts.samples,
            )],
            Vec::new(),
        ),
        Group::Quantum => (quantum_checks(ctx), Vec::new()),
        Group::Nilpotency => (
            vec![nilpotency_check(ctx.pres, ctx.opts.nilpotency_cap)],
            Vec::new(),
        ),
        Group::Confluence => (vec![confluence_check(ctx.pres)], Vec::new()),
        Group::Associativity => {
            let mut out = vec![associativity_fuzz(
                ctx.pres,
                &mut sampler,
                ctx.opts.fuzz_triples,
            )];
            if let Some(q) = &ctx.quantum {
                out.push(torus_associativity_fuzz(
                    &q.torus,
                    &mut sampler,
                    ctx.opts.fuzz_triples,
                ));
            }
            (out, Vec::new())
        }
        Group::Embedding => match &ctx.quantum {
            Some(q) => (embedding_checks(q, &mut sampler, ctx.opts), Vec::new()),
            None => (Vec::new(), Vec::new()),
        },
        Group::Step(k) => step_checks(ctx, k),
    }
}

/// `(X_i X_j - X_j X_i)/(q-1)` at `q = 1` against `{x_i, x_j}`, on generators and random pairs.
pub fn semiclassical_check(
    spec: &ExtensionSpec,
    pres: &OrePresentation,
    sampler: &mut Sampler,
    samples: usize,
) -> CheckResult {
    let name = "semiclassical_limit";
    if !pres.coefficients_in_l() {
        return CheckResult::fail(name, "relations leave L");
    }
    let mut bad = Vec::new();
    let mut compare = |a: &OreElement, b: &OreElement, label: String| {
        let comm = pres.commutator(a, b);
        let lim = semiclassical_poly(&comm);
        let (Some(abar), Some(bbar)) = (eval_at_one(a), eval_at_one(b)) else {
            bad.push(format!("{label}: sample leaves L"));
            return;
        };
        let want = spec.bracket(&abar, &bbar);
        if lim.as_ref() != Some(&want) {
            let got = lim.map_or("no limit".to_string(), |p| spec.display(&p));
            bad.push(format!("{label}: got {got}, want {}", spec.display(&want)));
        }
    };
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            compare(
                &pres.var(i),
                &pres.var(j),
                format!("(x{}, x{})", i + 1, j + 1),
            );
        }
    }
    for s in 0..samples {
        let a = sampler.element();
        let b = sampler.element();
        compare(
            &a,
            &b,
            format!(
                "sample {s}: a = {}, b = {}",
                pres.display(&a),
                pres.display(&b)
            ),
        );
    }
    CheckResult::from_failures(name, &bad)
}

fn structure_checks(ctx: &Ctx) -> Vec<CheckResult> {
    let (spec, pres) = (ctx.spec, ctx.pres);
    let n = spec.n;
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let l = pres.lambda(i, j);
            let via_h = spec.lambda_ij(i, j);
            let via_hp = -pair(&spec.lambda[j], &spec.h_prime[i]);
            if l != via_h || l != via_hp {
                bad.push(format!(
                    "λ{},{} = {l}, λ_i(h_j) = {via_h}, -λ_j(h'_i) = {via_hp}",
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    out.push(CheckResult::from_failures("lambda_matches_spec", &bad));

    let mut bad = Vec::new();
    let mut bad_weight = Vec::new();
    for j in 0..n {
        for i in 0..j {
            let d = pres.delta(j, i);
            if !d.is_nonneg() || d.support().into_iter().any(|v| v <= i || v >= j) {
                bad.push(format!("Δ{}(X{}) = {}", j + 1, i + 1, pres.display(d)));
            }
            let want: Vec<i64> = spec.lambda[i]
                .iter()
                .zip(&spec.lambda[j])
                .map(|(a, b)| a + b)
                .collect();
            if d.iter().any(|(u, _)| spec.monomial_weight(u) != want) {
                bad_weight.push(format!("Δ{}(X{})", j + 1, i + 1));
            }
        }
    }
    out.push(CheckResult::from_failures("symmetric_support", &bad));
    out.push(CheckResult::from_failures("delta_homogeneous", &bad_weight));

    let mut bad = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if !coefficients_in_l(pres.delta(j, i)) {
                bad.push(format!("Δ{}(X{})", j + 1, i + 1));
            }
        }
    }
    out.push(CheckResult::from_failures("coefficients_in_l", &bad));

    if let Some(c) = &ctx.comm {
        out.push(c.check_prime_normality());
        out.push(c.check_step_distinguished());
        let mut bad = Vec::new();
        for k in 0..n {
            if c.p[k].is_some() {
                match c.compute_b(k) {
                    Ok(b) => {
                        let r = c.check_b(k, &b);
                        if !r.passed() {
                            bad.push(r.witness.unwrap_or_default());
                        }
                    }
                    Err(e) => bad.push(e.to_string()),
                }
            }
        }
        out.push(CheckResult::from_failures("b_monomials", &bad));
    }
    out
}

fn quantum_checks(ctx: &Ctx) -> Vec<CheckResult> {
    let (Some(c), Some(q)) = (&ctx.comm, &ctx.quantum) else {
        return Vec::new();
    };
    let n = ctx.spec.n;
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for j in 0..n {
        if eval_at_one(&q.y[j]).as_ref() != Some(&c.y[j]) {
            bad.push(format!("Y{} = {}", j + 1, q.display_y(j)));
        }
    }
    out.push(CheckResult::from_failures("y_congruence", &bad));

    let (lc, lq) = (c.level_sets(), q.level_sets());
    out.push(CheckResult::from_bool("level_sets_match", lc == lq, || {
        format!("{lc:?} vs {lq:?}")
    }));

    let mut bad = Vec::new();
    for j in 0..n {
        let pat = degree_pattern(&c.p, j);
        let y_lead = c.y[j].leading().map(|(e, _)| e.clone());
        if q.degrees[j] != pat || y_lead.as_ref() != Some(&pat) {
            bad.push(format!(
                "j = {}: pattern {:?}, Y {:?}, y {:?}",
                j + 1,
                pat.0,
                q.degrees[j].0,
                y_lead.map(|e| e.0)
            ));
        }
    }
    out.push(CheckResult::from_failures("degree_patterns_match", &bad));

    let mut bad = Vec::new();
    for (j, y) in q.y.iter().enumerate() {
        if !coefficients_in_l(y) || y.leading().map(|(_, c)| c.is_one()) != Some(true) {
            bad.push(format!("Y{}", j + 1));
        }
    }
    out.push(CheckResult::from_failures("y_in_l_form", &bad));

    out.push(CheckResult::from_bool(
        "l_equals_kappa",
        q.torus.l == c.kappa,
        || format!("l = {:?}, kappa = {:?}", q.torus.l, c.kappa),
    ));

    let mut bad = Vec::new();
    for j in 0..n {
        if let Err(e) = q.check_normality(j) {
            bad.push(e.to_string());
        }
    }
    out.push(CheckResult::from_failures("y_normality", &bad));

    let mut bad = Vec::new();
    for k in 0..n {
        if q.p[k].is_none() {
            continue;
        }
        match (q.compute_b(k), c.compute_b(k)) {
            (Ok((qe, qc)), Ok(b)) => {
                if qe != b.exponent || qc.eval_at_one().as_ref() != Some(&b.coeff) {
                    bad.push(format!("B{} vs b{}", k + 1, k + 1));
                }
            }
            (Err(e), _) | (_, Err(e)) => bad.push(e.to_string()),
        }
    }
    out.push(CheckResult::from_failures("b_congruence", &bad));
    out
}

/// Each `Δ_j(X_i)` is killed by finitely many further applications of `Δ_j`.
pub fn nilpotency_check(pres: &OrePresentation, cap: usize) -> CheckResult {
    let mut bad = Vec::new();
    for j in 0..pres.n() {
        for i in 0..j {
            let mut a = pres.var(i);
            let mut steps = 0;
            while !a.is_zero() && steps <= cap {
                a = pres.apply_delta(j, &a);
                steps += 1;
            }
            if !a.is_zero() {
                bad.push(format!("Δ{}^{}(X{}) ≠ 0", j + 1, cap + 1, i + 1));
            }
        }
    }
    CheckResult::from_failures("delta_nilpotent", &bad)
}

/// `(X_j X_i) X_h = X_j (X_i X_h)` for all `h < i < j`.
pub fn confluence_check(pres: &OrePresentation) -> CheckResult {
    let n = pres.n();
    let mut bad = Vec::new();
    for h in 0..n {
        for i in h + 1..n {
            for j in i + 1..n {
                let (xh, xi, xj) = (pres.var(h), pres.var(i), pres.var(j));
                let left = pres.mul(&pres.mul(&xj, &xi), &xh);
                let right = pres.mul(&xj, &pres.mul(&xi, &xh));
                if left != right {
                    bad.push(format!("(X{}, X{}, X{})", j + 1, i + 1, h + 1));
                }
            }
        }
    }
    CheckResult::from_failures("confluence", &bad)
}

pub fn associativity_fuzz(
    pres: &OrePresentation,
    sampler: &mut Sampler,
    triples: usize,
) -> CheckResult {
    let mut bad = Vec::new();
    for t in 0..triples {
        let (a, b, c) = (sampler.element(), sampler.element(), sampler.element());
        if pres.mul(&pres.mul(&a, &b), &c) != pres.mul(&a, &pres.mul(&b, &c)) {
            bad.push(format!(
                "triple {t}: {}, {}, {}",
                pres.display(&a),
                pres.display(&b),
                pres.display(&c)
            ));
        }
    }
    CheckResult::from_failures("associativity", &bad)
}

pub fn torus_associativity_fuzz(
    torus: &QTorus,
    sampler: &mut Sampler,
    triples: usize,
) -> CheckResult {
    let mut bad = Vec::new();
    for t in 0..triples {
        let (a, b, c) = (
            sampler.torus_element(),
            sampler.torus_element(),
            sampler.torus_element(),
        );
        if torus.mul(&torus.mul(&a, &b), &c) != torus.mul(&a, &torus.mul(&b, &c)) {
            bad.push(format!("triple {t}"));
        }
    }
    CheckResult::from_failures("torus_associativity", &bad)
}

fn embedding_checks(
    q: &QuantumAnalysis,
    sampler: &mut Sampler,
    opts: &VerifyOptions,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let pres = &q.pres;

    let mut bad = Vec::new();
    for s in 0..opts.samples {
        let (a, b) = (sampler.element(), sampler.element());
        let (ea, eb) = (q.embed(&a), q.embed(&b));
        if ea.is_zero() || q.embed(&pres.mul(&a, &b)) != q.torus.mul(&ea, &eb) {
            bad.push(format!(
                "sample {s}: {}, {}",
                pres.display(&a),
                pres.display(&b)
            ));
        }
    }
    out.push(CheckResult::from_failures("embedding_homomorphism", &bad));

    let t = q.leading_transform();
    let mut bad = Vec::new();
    for _ in 0..opts.samples {
        let u = sampler.exponent();
        let image = q.embed(&pres.monomial(u.clone()));
        match image.leading() {
            Some((v, _)) if t.apply(v) == u => {}
            other => bad.push(format!(
                "X^{:?} leads with {:?}",
                u.0,
                other.map(|(v, _)| v.0.clone())
            )),
        }
    }
    out.push(CheckResult::from_failures("leading_exponent_law", &bad));

    let mut bad = Vec::new();
    for s in 0..opts.round_trips {
        let a = sampler.element();
        match q.torus_to_ore(&q.embed(&a), opts.max_peel) {
            Ok(back) if back == a => {}
            Ok(back) => bad.push(format!(
                "sample {s}: {} came back as {}",
                pres.display(&a),
                pres.display(&back)
            )),
            Err(e) => bad.push(format!("sample {s}: {e}")),
        }
    }
    out.push(CheckResult::from_failures("round_trip", &bad));
    out
}

/// Recomputes the distinguished elements of the step adjoining `x_k` and
/// recovers `ε_k` with `Δ_{[k]} = ε_k (D X - σ(X) D)`.
fn step_checks(ctx: &Ctx, k: usize) -> GroupOutput {
    let (spec, pres) = (ctx.spec, ctx.pres);
    let label = |s: &str| format!("step{}.{}", k + 1, s);
    let step = PrependData::new(spec, k);
    let m = step.tail.n;
    let actual: Vec<OreElement> = (k + 1..spec.n)
        .map(|j| pres.relation_delta(k, j).reindex(m, |v| v - (k + 1)))
        .collect();

    if step.is_trivial() {
        let bad: Vec<String> = actual
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(j, _)| format!("Δ{},{} ≠ 0", k + 1, j + k + 2))
            .collect();
        return (
            vec![CheckResult::from_failures(label("trivial_step"), &bad)],
            Vec::new(),
        );
    }

    let prepare = || -> crate::Result<_> {
        let tail_c = CommutativeAnalysis::new(&step.tail)?;
        let tail_q = QuantumAnalysis::new(
            pres.restrict(k + 1),
            eta_vector(&step.tail),
            Some(&tail_c.p),
        )?;
        let chains =
            step_chains(&step, &tail_c, &tail_q, ctx.opts.max_peel)?.expect("nontrivial step");
        let deltas = step_deltas(&step, &tail_q, chains.quantum.d0(), ctx.opts.max_peel)?;
        Ok((chains, deltas))
    };
    let (chains, deltas) = match prepare() {
        Ok(x) => x,
        Err(e) => {
            return (
                vec![CheckResult::fail(label("distinguished"), e.to_string())],
                Vec::new(),
            )
        }
    };

    let mut out: Vec<CheckResult> = chains
        .comm
        .checks
        .iter()
        .chain(chains.quantum.checks.iter())
        .map(|c| CheckResult {
            name: label(&c.name),
            ..c.clone()
        })
        .collect();

    let mut eps: Option<QRational> = None;
    let mut bad = Vec::new();
    for (j, (want, got)) in deltas.iter().zip(&actual).enumerate() {
        let Some((le, lc)) = want.leading() else {
            if !got.is_zero() {
                bad.push(format!("Δ{},{} should vanish", k + 1, j + k + 2));
            }
            continue;
        };
        let ratio = match got.coeff(le).checked_div(lc) {
            Ok(r) => r,
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        if *got != want.scale(&ratio) {
            bad.push(format!(
                "Δ{},{} is not a multiple of D X - σ(X) D",
                k + 1,
                j + k + 2
            ));
        } else if eps.as_ref().is_some_and(|e| *e != ratio) {
            bad.push(format!("Δ{},{} uses a different scalar", k + 1, j + k + 2));
        } else {
            eps = Some(ratio);
        }
    }
    let mut recovered = Vec::new();
    if let Some(e) = &eps {
        if e.eval_at_one() != Some(rat(1)) {
            bad.push(format!("ε = {e} has ε(1) ≠ 1"));
        }
        recovered.push((k + 1, e.to_string()));
    }
    out.push(CheckResult::from_failures(
        label("delta_from_distinguished"),
        &bad,
    ));
    (out, recovered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quantizer::{quantize, QuantizeOptions};
    use crate::text::parse_ordered;

    #[test]
    fn weyl_passes_and_scaled_variant_recovers_epsilon() {
        let spec = fixtures::by_name("weyl3").unwrap().spec;
        let qz = quantize(&spec, &QuantizeOptions::default()).unwrap();
        let report = verify(&spec, qz.presentation(), &VerifyOptions::default());
        assert!(
            report.passed,
            "{:#?}",
            report
                .checks
                .iter()
                .filter(|c| !c.passed())
                .collect::<Vec<_>>()
        );
        assert_eq!(report.epsilons, vec![(1, "1".to_string())]);

        let eps = &QRational::from_int(2) - &QRational::q_pow(1);
        let scaled = crate::quantizer::scaled_variant(qz.presentation(), &eps).unwrap();
        let report = verify(&spec, &scaled, &VerifyOptions::default());
        assert!(report.passed);
        assert_eq!(report.epsilons, vec![(1, "2 - q".to_string())]);
    }

    #[test]
    fn wrong_presentation_fails() {
        let spec = fixtures::by_name("weyl3").unwrap().spec;
        let names = crate::terms::default_names("X", 3);
        let x2sq = parse_ordered("X2^2", &names, false).unwrap();
        // Right shape, wrong semiclassical limit.
        let pres = OrePresentation::new(
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            vec![
                vec![],
                vec![OreElement::zero(3)],
                vec![x2sq, OreElement::zero(3)],
            ],
        )
        .unwrap();
        let report = verify(&spec, &pres, &VerifyOptions::default());
        assert!(!report.passed);
        assert!(!report.check("semiclassical_limit").unwrap().passed());
    }

    #[test]
    fn nilpotency_catches_self_reference() {
        let names = crate::terms::default_names("X", 2);
        let x1 = parse_ordered("X1", &names, false).unwrap();
        let pres =
            OrePresentation::new_unchecked(vec![vec![0, 0], vec![0, 0]], vec![vec![], vec![x1]]);
        let r = nilpotency_check(&pres, 10);
        assert!(!r.passed());
        assert!(r.witness.unwrap().contains("X1"));
    }

    #[test]
    fn sequential_and_parallel_reports_agree() {
        let spec = fixtures::by_name("chain3").unwrap().spec;
        let qz = quantize(&spec, &QuantizeOptions::default()).unwrap();
        let seq = verify(
            &spec,
            qz.presentation(),
            &VerifyOptions {
                exec: Exec::Sequential,
                ..Default::default()
            },
        );
        let par = verify(
            &spec,
            qz.presentation(),
            &VerifyOptions {
                exec: Exec::Parallel,
                ..Default::default()
            },
        );
        assert_eq!(seq.checks, par.checks);
        assert!(seq.passed);
    }
}
