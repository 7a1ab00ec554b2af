//! Runs a parsed script and assembles the report.

use std::panic::{catch_unwind, AssertUnwindSafe};

use chu_core::chu::{ChuObject, Side};
use chu_core::fincat::{check_2adj, check_corollaries, check_theorem, two_adj_diagonal, two_adj_identity, validate_instance};
use chu_core::laws::theorem::{check_fr_identity, check_rf_equals_sigma, end_of_k_check};
use chu_core::laws::{check_law_on, random_sep_ext, run_law_with, LawId, TrialSpec};
use chu_core::modring::{
    baer_adjunction_check, check_cogenerator, check_embed_cyclic, check_self_dual, cogenerator_campaign,
    selfinjective_campaign, tensor_table, NilModule,
};
use chu_core::topo::{
    check_factorization, check_finprod_exhaustive, check_pullback_exhaustive, check_sigma, extend_functional,
    factor_corpus, factor_functional, random_functional, random_presented, sigma, PresentedSpace,
    PresentedSpaceJson, all_functionals,
};
use chu_core::FieldSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::parse::{Check, Format, Script, Sizes, StmtKind};
use crate::report::{CheckResult, Context, Report, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    /// Default sample count for `laws` and campaigns without `--samples`.
    pub samples: Option<usize>,
    /// Default carrier-dimension bound for `laws` without `--dims`.
    pub dims: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, samples: None, dims: None }
    }
}

/// A `report` directive: the results accumulated up to that point.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub format: Format,
    pub path: Option<String>,
    pub report: Report,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub report: Report,
    pub outputs: Vec<Output>,
}

enum Outcome {
    Pass(Json),
    Fail { details: Json, counterexample: Option<Json>, replay: Option<String> },
}

fn fail(reason: impl Into<String>) -> Outcome {
    Outcome::Fail { details: json!({ "reason": reason.into() }), counterexample: None, replay: None }
}

fn from_result(r: Result<Json, String>) -> Outcome {
    match r {
        Ok(d) => Outcome::Pass(d),
        Err(e) => fail(e),
    }
}

fn replay_line(law: LawId, inputs: &[ChuObject], corrupt: bool) -> String {
    let objs = serde_json::to_string(inputs).expect("objects serialize");
    if corrupt {
        format!("replay {law} {objs} --corrupt")
    } else {
        format!("replay {law} {objs}")
    }
}

fn law_failure(law: LawId, inputs: &[ChuObject], reason: String, corrupt: bool, extra: Json) -> Outcome {
    let mut details = json!({ "reason": reason });
    if let (Json::Object(d), Json::Object(e)) = (&mut details, extra) {
        d.extend(e);
    }
    Outcome::Fail {
        details,
        counterexample: Some(serde_json::to_value(inputs).expect("objects serialize")),
        replay: Some(replay_line(law, inputs, corrupt)),
    }
}

fn campaign_rng(seed: u64, tag: u8, p: u32, trial: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = tag;
    key[12..16].copy_from_slice(&p.to_le_bytes());
    key[16..24].copy_from_slice(&(trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn space_json(v: &PresentedSpace) -> Json {
    serde_json::to_value(PresentedSpaceJson::from(v)).expect("spaces serialize")
}

struct Ctx {
    field: Option<FieldSpec>,
    ring: Option<chu_core::modring::RingSpec>,
    opts: Options,
}

impl Ctx {
    fn samples(&self, s: Sizes, default: usize) -> usize {
        s.samples.or(self.opts.samples).unwrap_or(default)
    }

    fn field(&self) -> FieldSpec {
        self.field.expect("checked at parse time")
    }

    fn ring(&self) -> chu_core::modring::RingSpec {
        self.ring.expect("checked at parse time")
    }
}

fn cyclic_summands(m: &NilModule) -> usize {
    m.dim() - m.action().rank()
}

fn run_check(ctx: &Ctx, c: &Check) -> Outcome {
    let seed = ctx.opts.seed;
    match c {
        Check::Involution(o) => {
            if o.dual().dual() != *o {
                return law_failure(LawId::L1, std::slice::from_ref(o), "T** ≠ T".into(), false, json!({}));
            }
            match check_law_on(LawId::L1, std::slice::from_ref(o), false) {
                Ok(()) => Outcome::Pass(json!({ "dimA": o.dim_a(), "dimX": o.dim_x() })),
                Err(e) => law_failure(LawId::L1, std::slice::from_ref(o), e, false, json!({})),
            }
        }
        Check::Law(law, objs) => match check_law_on(*law, objs, false) {
            Ok(()) => Outcome::Pass(json!({ "law": law })),
            Err(e) => law_failure(*law, objs, e, false, json!({ "law": law })),
        },
        Check::Separated(o) | Check::Extensional(o) => {
            let flags = o.flags();
            let (ok, what) = match c {
                Check::Separated(_) => (flags.separated, Side::Separated),
                _ => (flags.extensional, Side::Extensional),
            };
            let details = json!({ "separated": flags.separated, "extensional": flags.extensional, "rank": o.pairing().rank() });
            if ok {
                Outcome::Pass(details)
            } else {
                Outcome::Fail {
                    details,
                    counterexample: Some(json!([o])),
                    replay: None,
                }
                .with_reason(format!("object is not {}", if what == Side::Separated { "separated" } else { "extensional" }))
            }
        }
        Check::Fr(o) => from_result(check_fr_identity(o).map(|r| serde_json::to_value(r).expect("serializes"))),
        Check::FrCampaign(s) => {
            let (n, dims) = (ctx.samples(*s, 100), s.dims.unwrap_or(4));
            let field = ctx.field();
            let r = (0..n).into_par_iter().try_for_each(|t| {
                let o = random_sep_ext(&mut campaign_rng(seed, 1, field.p(), t), field, dims);
                check_fr_identity(&o).map(|_| ()).map_err(|e| format!("trial {t}: {e}"))
            });
            from_result(r.map(|()| json!({ "trials": n, "max_dim": dims })))
        }
        Check::Rf(v) => from_result(check_rf_equals_sigma(v).map(|()| json!({ "sigma": space_json(&sigma(v)) }))),
        Check::RfCampaign(s) => {
            let (n, dims) = (ctx.samples(*s, 100), s.dims.unwrap_or(3));
            let field = ctx.field();
            let r = (0..n).into_par_iter().try_for_each(|t| {
                let v = random_presented(&mut campaign_rng(seed, 2, field.p(), t), field, 3, dims);
                check_rf_equals_sigma(&v).map_err(|e| format!("trial {t}: {e}"))
            });
            from_result(r.map(|()| json!({ "trials": n, "max_factors": 3, "max_factor_dim": dims })))
        }
        Check::EndK => from_result(end_of_k_check(ctx.field()).map(|d| json!({ "dim": d }))),
        Check::Factor(v, phi) => from_result(check_factorization(v, phi).and_then(|()| {
            let fr = factor_functional(v, phi).map_err(|e| e.to_string())?;
            Ok(json!({ "J": fr.j, "certified": fr.certified, "phi0": fr.phi0 }))
        })),
        Check::FactorCorpus(s) => {
            let corpus = factor_corpus();
            let r = corpus.par_iter().try_for_each(|v| {
                all_functionals(v).iter().try_for_each(|phi| check_factorization(v, phi))
            });
            let n = ctx.samples(*s, 100);
            let field = ctx.field();
            let dims = s.dims.unwrap_or(2);
            let r = r.and_then(|()| {
                (0..n).into_par_iter().try_for_each(|t| {
                    let mut rng = campaign_rng(seed, 3, field.p(), t);
                    let v = random_presented(&mut rng, field, 7, dims);
                    let phi = random_functional(&mut rng, &v);
                    check_factorization(&v, &phi).map_err(|e| format!("seeded case {t}: {e}"))
                })
            });
            let pairs: usize = corpus.iter().map(|v| all_functionals(v).len()).sum();
            from_result(r.map(|()| json!({ "corpus_spaces": corpus.len(), "corpus_pairs": pairs, "seeded_cases": n })))
        }
        Check::Extend(v, phi) => from_result(check_factorization(v, phi).and_then(|()| {
            extend_functional(v, phi).map(|x| json!({ "extension": x })).map_err(|e| e.to_string())
        })),
        Check::Sigma(v) => from_result(check_sigma(v).map(|()| json!({ "sigma": space_json(&sigma(v)) }))),
        Check::SigmaCorpus => {
            let corpus = factor_corpus();
            from_result(corpus.par_iter().try_for_each(check_sigma).map(|()| json!({ "spaces": corpus.len() })))
        }
        Check::Finprod(s) => {
            let d = s.dims.unwrap_or(2);
            from_result(check_finprod_exhaustive(ctx.field(), d).map(|n| json!({ "pairs": n, "max_ambient": d })))
        }
        Check::Pullback(s) => {
            let d = s.dims.unwrap_or(2);
            from_result(check_pullback_exhaustive(ctx.field(), d).map(|n| json!({ "squares": n, "max_ambient": d })))
        }
        Check::SelfInjective(s) => {
            let (n, d) = (ctx.samples(*s, 100), s.dims.unwrap_or(6));
            from_result(selfinjective_campaign(ctx.ring(), n, d, seed).map(|t| json!({ "trials": t, "max_dim": d })))
        }
        Check::Cogenerator(m) => from_result(
            check_cogenerator(m, cyclic_summands(m)).map(|e| json!({ "r": e.r, "orders": e.orders })),
        ),
        Check::CogeneratorCampaign(s) => {
            let (n, d) = (ctx.samples(*s, 100), s.dims.unwrap_or(6));
            from_result(cogenerator_campaign(ctx.ring(), n, d, seed).map(|t| json!({ "trials": t, "max_dim": d })))
        }
        Check::SelfDual => {
            let r = ctx.ring();
            from_result(check_self_dual(r).map(|()| json!({ "rank": r.n })))
        }
        Check::TensorTable => from_result(tensor_table(ctx.ring()).map(|t| json!({ "table": t }))),
        Check::Baer(m) => from_result(baer_adjunction_check(m).map(|r| serde_json::to_value(r).expect("serializes"))),
        Check::EmbedCyclic => from_result(check_embed_cyclic(ctx.ring()).map(|n| json!({ "orders_checked": n }))),
        Check::Appendix(_, s) => {
            if let Err(errs) = validate_instance(s) {
                let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
                return Outcome::Fail { details: json!({ "reason": "invalid instance", "errors": msgs }), counterexample: None, replay: None };
            }
            let r = check_theorem(s).and_then(|t| {
                let c = check_corollaries(s)?;
                if !(c.ti_sj_unit_iso && c.ti_sj_counit_iso) {
                    return Err("TI ⊣ SJ is not an adjoint equivalence".into());
                }
                Ok(json!({ "theorem": t, "corollaries": c }))
            });
            from_result(r)
        }
        Check::TwoAdj(name) => {
            let t = if name == "identity" { two_adj_identity() } else { two_adj_diagonal() };
            match check_2adj(&t) {
                Ok(r) if r.biconditional => Outcome::Pass(serde_json::to_value(r).expect("serializes")),
                Ok(r) => Outcome::Fail { details: serde_json::to_value(r).expect("serializes"), counterexample: None, replay: None }
                    .with_reason("L fully faithful ⇎ R fully faithful".into()),
                Err(e) => fail(e.to_string()),
            }
        }
    }
}

impl Outcome {
    fn with_reason(self, reason: String) -> Outcome {
        match self {
            Outcome::Fail { mut details, counterexample, replay } => {
                if let Json::Object(d) = &mut details {
                    d.insert("reason".into(), Json::String(reason));
                }
                Outcome::Fail { details, counterexample, replay }
            }
            pass => pass,
        }
    }
}

fn result(name: String, line: usize, outcome: std::thread::Result<Outcome>) -> CheckResult {
    match outcome {
        Ok(Outcome::Pass(details)) => CheckResult { name, line, status: Status::Pass, details, counterexample: None, replay: None },
        Ok(Outcome::Fail { details, counterexample, replay }) => {
            CheckResult { name, line, status: Status::Fail, details, counterexample, replay }
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            CheckResult { name, line, status: Status::Error, details: json!({ "reason": msg }), counterexample: None, replay: None }
        }
    }
}

fn run_stmt(ctx: &Ctx, line: usize, text: &str, kind: &StmtKind) -> Vec<CheckResult> {
    match kind {
        StmtKind::Field(_) | StmtKind::Ring(_) | StmtKind::Bind(..) | StmtKind::Report { .. } => vec![],
        StmtKind::Check(c) => vec![result(text.to_string(), line, catch_unwind(AssertUnwindSafe(|| run_check(ctx, c))))],
        StmtKind::Laws { laws, sizes, corrupt } => {
            let mut spec = TrialSpec::new(ctx.field(), ctx.opts.seed);
            spec.samples = sizes.samples.or(ctx.opts.samples).unwrap_or(spec.samples);
            spec.max_dim = sizes.dims.or(ctx.opts.dims).unwrap_or(spec.max_dim);
            laws.iter()
                .map(|&law| {
                    let name = format!("laws {law}");
                    let outcome = catch_unwind(AssertUnwindSafe(|| {
                        let r = run_law_with(law, &spec, *corrupt);
                        let summary = json!({
                            "trials": r.trials,
                            "failures": r.failures.len(),
                            "seed": r.seed,
                            "max_dim": spec.max_dim,
                            "corrupt": corrupt,
                        });
                        match r.failures.first() {
                            None => Outcome::Pass(summary),
                            Some(f) => {
                                let mut extra = summary;
                                extra["trial"] = json!(f.trial);
                                law_failure(law, &f.counterexample, f.reason.clone(), *corrupt, extra)
                            }
                        }
                    }));
                    result(name, line, outcome)
                })
                .collect()
        }
        StmtKind::Replay { law, inputs, corrupt } => {
            let outcome = catch_unwind(AssertUnwindSafe(|| match check_law_on(*law, inputs, *corrupt) {
                Ok(()) => Outcome::Pass(json!({ "law": law, "corrupt": corrupt })),
                Err(e) => law_failure(*law, inputs, e, *corrupt, json!({ "law": law, "corrupt": corrupt })),
            }));
            vec![result(format!("replay {law}"), line, outcome)]
        }
    }
}

/// Runs every statement. Statements are evaluated concurrently but the
/// results keep statement order, so the report does not depend on scheduling.
pub fn execute(script: &Script, opts: Options) -> Execution {
    let ctx = Ctx { field: script.field, ring: script.ring, opts };
    let per_stmt: Vec<Vec<CheckResult>> =
        script.stmts.par_iter().map(|s| run_stmt(&ctx, s.line, &s.text, &s.kind)).collect();
    let context = Context { p: script.field.map(|f| f.p()), n: script.ring.map(|r| r.n) };
    let mut report = Report::new(opts.seed, context);
    let mut outputs = Vec::new();
    for (stmt, results) in script.stmts.iter().zip(per_stmt) {
        report.results.extend(results);
        if let StmtKind::Report { format, path } = &stmt.kind {
            outputs.push(Output { format: *format, path: path.clone(), report: report.clone() });
        }
    }
    Execution { report, outputs }
}
