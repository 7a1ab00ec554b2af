//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use chu_core::chu::{internal_hom, tensor};
use chu_core::fincat::*;
use chu_core::laws::theorem::{check_fr_identity, check_rf_equals_sigma, end_of_k_check};
use chu_core::laws::*;
use chu_core::modring::*;
use chu_core::topo::*;
use chu_core::FieldSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIELDS: [u64; 3] = [2, 3, 5];

fn field(p: u64) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

fn ring(p: u64, n: usize) -> RingSpec {
    RingSpec::new(p, n).unwrap()
}

fn law_suite() -> Result<String, String> {
    let start = Instant::now();
    let mut trials = 0;
    for p in FIELDS {
        let spec = TrialSpec::new(field(p), 0);
        if spec.samples < 200 || spec.max_dim != 4 {
            return Err(format!("trial spec {spec:?}"));
        }
        for r in run_all(&spec) {
            if let Some(f) = r.failures.first() {
                return Err(format!("{} over F_{p}, trial {}: {}", r.law, f.trial, f.reason));
            }
            trials += r.trials;
        }
    }
    let t = start.elapsed();
    if t >= Duration::from_secs(30) {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!("{trials} trials in {t:.1?}"))
}

fn closure() -> Result<String, String> {
    let mut pairs = 0;
    for p in FIELDS {
        let spec = TrialSpec::new(field(p), 0);
        for trial in 0..spec.samples {
            let inputs = sample_inputs(LawId::L6, &spec, trial);
            let (s, t) = (&inputs[0], &inputs[1]);
            if !(s.is_separated() && s.is_extensional() && t.is_separated() && t.is_extensional()) {
                return Err(format!("F_{p} trial {trial}: inputs not separated and extensional"));
            }
            let h = internal_hom(s, t).map_err(|e| e.to_string())?;
            let x = tensor(s, t).map_err(|e| e.to_string())?;
            for (what, o) in [("internal hom", &h), ("tensor", &x)] {
                if !(o.is_separated() && o.is_extensional()) {
                    return Err(format!("F_{p} trial {trial}: {what} is not separated and extensional"));
                }
            }
            pairs += 1;
        }
        let r = run_law(LawId::L6, &spec);
        if !r.passed() {
            return Err(format!("L6 over F_{p}: {:?}", r.failures[0].reason));
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn main_theorem() -> Result<String, String> {
    for p in FIELDS {
        let f = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for k in 0..100 {
            let o = random_sep_ext(&mut rng, f, 4);
            check_fr_identity(&o).map_err(|e| format!("FR, F_{p} object {k}: {e}"))?;
        }
        for k in 0..100 {
            let v = random_presented(&mut rng, f, 3, 3);
            check_rf_equals_sigma(&v).map_err(|e| format!("RF, F_{p} space {k}: {e}"))?;
        }
        if end_of_k_check(f) != Ok(1) {
            return Err(format!("End(K) over F_{p}: {:?}", end_of_k_check(f)));
        }
    }
    Ok("100 FR + 100 RF per field, End(K) = 1".into())
}

fn factorization() -> Result<String, String> {
    let corpus = factor_corpus();
    let mut cases = 0;
    for v in &corpus {
        for phi in all_functionals(v) {
            check_factorization(v, &phi).map_err(|e| format!("{:?}: {e}", v.factors()))?;
            cases += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..100 {
        let f = field([2, 3][k % 2]);
        let v = random_presented(&mut rng, f, 7, 2);
        let phi = random_functional(&mut rng, &v);
        check_factorization(&v, &phi).map_err(|e| format!("seeded case {k}: {e}"))?;
        cases += 1;
    }
    Ok(format!("{} spaces, {cases} cases", corpus.len()))
}

fn self_injectivity() -> Result<String, String> {
    let mut n_total = 0;
    for p in [2, 3] {
        for n in 2..=4 {
            n_total += selfinjective_campaign(ring(p, n), 100, 6, 0).map_err(|e| format!("p = {p}, n = {n}: {e}"))?;
        }
    }
    Ok(format!("{n_total} extensions, 0 NoExtension"))
}

fn cogenerator() -> Result<String, String> {
    let mut mods = 0;
    for p in FIELDS {
        for n in 1..=4 {
            mods += cogenerator_campaign(ring(p, n), 100, 6, 0).map_err(|e| format!("p = {p}, n = {n}: {e}"))?;
            check_embed_cyclic(ring(p, n)).map_err(|e| format!("embed_cyclic p = {p}, n = {n}: {e}"))?;
        }
    }
    Ok(format!("{mods} modules embedded"))
}

fn self_duality() -> Result<String, String> {
    for p in FIELDS {
        for n in 1..=6 {
            check_self_dual(ring(p, n)).map_err(|e| format!("p = {p}, n = {n}: {e}"))?;
        }
        for n in 1..=4 {
            tensor_table(ring(p, n)).map_err(|e| format!("tensor table p = {p}, n = {n}: {e}"))?;
        }
    }
    Ok("n ≤ 6 self-dual, tensor tables n ≤ 4".into())
}

fn appendix() -> Result<String, String> {
    let start = Instant::now();
    let mut arrows = 0;
    for (name, _) in CANNED {
        let s = canned_situation(name).ok_or("missing instance")?;
        validate_instance(&s).map_err(|e| format!("{name}: {e:?}"))?;
        arrows += check_theorem(&s).map_err(|e| format!("{name}: {e}"))?.arrows_checked;
        let c = check_corollaries(&s).map_err(|e| format!("{name}: {e}"))?;
        if !(c.ti_sj_unit_iso && c.ti_sj_counit_iso) {
            return Err(format!("{name}: TI ⊣ SJ not an equivalence"));
        }
    }
    for t in [two_adj_identity(), two_adj_diagonal()] {
        if !check_2adj(&t).map_err(|e| e.to_string())?.biconditional {
            return Err("2-adjunction biconditional fails".into());
        }
    }
    let t = start.elapsed();
    if t >= Duration::from_secs(5) {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!("{arrows} arrows in {t:.1?}"))
}

fn topo_props() -> Result<String, String> {
    let f2 = field(2);
    let prods = check_finprod_exhaustive(f2, 2)?;
    let squares = check_pullback_exhaustive(f2, 2)?;
    let corpus = factor_corpus();
    for v in &corpus {
        check_sigma(v)?;
    }
    Ok(format!("{prods} products, {squares} pullbacks, σ on {} spaces", corpus.len()))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn chu(args: &[&str], cwd: &Path) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_chu")).args(args).current_dir(cwd).output().map_err(|e| e.to_string())
}

fn cli() -> Result<String, String> {
    let tmp = std::env::temp_dir().join(format!("chu-acceptance-{}", std::process::id()));
    let want = std::fs::read(golden("sample.json")).map_err(|e| e.to_string())?;
    let sample = golden("sample.chu");
    for threads in ["1", "3"] {
        let dir = tmp.join(threads);
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let out = chu(&[sample.to_str().unwrap(), "--threads", threads], &dir)?;
        if out.status.code() != Some(0) {
            return Err(format!("golden script exited {:?}", out.status.code()));
        }
        let got = std::fs::read(dir.join("sample.out.json")).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("golden report differs with {threads} threads"));
        }
    }
    let out = chu(&[golden("induced_failure.chu").to_str().unwrap()], &tmp)?;
    if out.status.code() != Some(1) {
        return Err(format!("induced failure exited {:?}", out.status.code()));
    }
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let failed = report["results"]
        .as_array()
        .and_then(|rs| rs.iter().find(|r| r["status"] == "fail"))
        .ok_or("no failing result")?;
    let replay = failed["replay"].as_str().ok_or("no replay line")?;
    let script = tmp.join("replay.chu");
    std::fs::write(&script, format!("field 3\n{replay}\n")).map_err(|e| e.to_string())?;
    let again = chu(&[script.to_str().unwrap()], &tmp)?;
    let r2: serde_json::Value = serde_json::from_slice(&again.stdout).map_err(|e| e.to_string())?;
    if again.status.code() != Some(1) || r2["results"][0]["details"]["reason"] != failed["details"]["reason"] {
        return Err("counterexample does not replay".into());
    }
    let bad = chu(&[golden("malformed.chu").to_str().unwrap()], &tmp)?;
    if bad.status.code() != Some(2) {
        return Err(format!("malformed script exited {:?}", bad.status.code()));
    }
    let _ = std::fs::remove_dir_all(&tmp);
    Ok("golden byte-identical on 1 and 3 threads, failure replays, malformed exits 2".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<String, String>); 10] = [
        ("Chu law suite", law_suite),
        ("closure of separated+extensional objects", closure),
        ("equivalence with presented spaces", main_theorem),
        ("minimal factorization of functionals", factorization),
        ("self-injectivity", self_injectivity),
        ("cogenerator", cogenerator),
        ("self-dual iso and tensor table", self_duality),
        ("appendix adjunctions", appendix),
        ("weak-iso products, pullbacks and σ", topo_props),
        ("CLI golden suite", cli),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
