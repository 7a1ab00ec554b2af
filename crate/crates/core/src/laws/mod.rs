//! The *-autonomous law catalog and a seeded, parallel trial runner.

pub mod theorem;
pub mod witness;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chu::ChuObject;
use crate::linalg::{FieldSpec, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LawId {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
    L8,
    L9,
    L10,
}

impl LawId {
    pub const ALL: [LawId; 10] =
        [LawId::L1, LawId::L2, LawId::L3, LawId::L4, LawId::L5, LawId::L6, LawId::L7, LawId::L8, LawId::L9, LawId::L10];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn statement(self) -> &'static str {
        match self {
            LawId::L1 => "involution: (T*)* = T",
            LawId::L2 => "dual as hom: T* ≅ T ⊸ (K, ⊤)",
            LawId::L3 => "tensor-hom adjunction: Hom(T ⊗ U, V) ≅ Hom(T, U ⊸ V)",
            LawId::L4 => "unit: (⊤, K) ⊗ T ≅ T",
            LawId::L5 => "symmetry: T ⊗ U ≅ U ⊗ T",
            LawId::L6 => "separated+extensional inputs give separated+extensional T ⊸ U and T ⊗ U",
            LawId::L7 => "S ⊣ inclusion ⊣ E: Hom(S T, U) ≅ Hom(T, U), Hom(U, E T) ≅ Hom(U, T)",
            LawId::L8 => "dual of internal hom: (T ⊸ U)* ≅ T ⊗ U*",
            LawId::L9 => "compact closure of plain spaces: (U ⊸ V)* ≅ V ⊸ U",
            LawId::L10 => "associativity: (T ⊗ U) ⊗ W ≅ T ⊗ (U ⊗ W)",
        }
    }

    /// Number of objects a trial consumes.
    pub fn arity(self) -> usize {
        match self {
            LawId::L1 | LawId::L2 | LawId::L4 => 1,
            LawId::L3 | LawId::L10 => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown law `{0}` (expected L1..L10)")]
pub struct UnknownLaw(pub String);

impl FromStr for LawId {
    type Err = UnknownLaw;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n: usize = s.strip_prefix('L').and_then(|d| d.parse().ok()).ok_or_else(|| UnknownLaw(s.to_string()))?;
        LawId::ALL.get(n.wrapping_sub(1)).copied().ok_or_else(|| UnknownLaw(s.to_string()))
    }
}

impl Serialize for LawId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LawId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSpec {
    pub field: FieldSpec,
    pub max_dim: usize,
    pub samples: usize,
    pub seed: u64,
}

impl TrialSpec {
    pub fn new(field: FieldSpec, seed: u64) -> Self {
        TrialSpec { field, max_dim: 4, samples: 200, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub reason: String,
    pub counterexample: Vec<ChuObject>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: LawId,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The stream for one trial depends only on `(seed, law, p, trial)`.
pub fn trial_rng(seed: u64, law: LawId, p: u32, trial: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(law.index() as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(p as u64).to_le_bytes());
    key[24..].copy_from_slice(&(trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols).map(|_| rng.gen_range(0..field.p())).collect();
    Matrix::new(field, rows, cols, entries).expect("sized")
}

/// Uniform pairing with carrier dimensions drawn from `0..=max_dim`.
pub fn random_object<R: Rng>(rng: &mut R, field: FieldSpec, max_dim: usize) -> ChuObject {
    let a = rng.gen_range(0..=max_dim);
    let x = rng.gen_range(0..=max_dim);
    ChuObject::from_pairing(random_matrix(rng, field, a, x))
}

fn full_rank_rows<R: Rng>(rng: &mut R, field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, rows, cols);
        if m.rank() == rows {
            return m;
        }
    }
}

pub fn random_separated<R: Rng>(rng: &mut R, field: FieldSpec, max_dim: usize) -> ChuObject {
    let x = rng.gen_range(0..=max_dim);
    let a = rng.gen_range(0..=x);
    ChuObject::from_pairing(full_rank_rows(rng, field, a, x))
}

pub fn random_extensional<R: Rng>(rng: &mut R, field: FieldSpec, max_dim: usize) -> ChuObject {
    random_separated(rng, field, max_dim).dual()
}

/// Separated and extensional: a random invertible square pairing, by rejection.
pub fn random_sep_ext<R: Rng>(rng: &mut R, field: FieldSpec, max_dim: usize) -> ChuObject {
    let d = rng.gen_range(0..=max_dim);
    ChuObject::from_pairing(full_rank_rows(rng, field, d, d))
}

/// The inputs trial `trial` of `law` runs on.
pub fn sample_inputs(law: LawId, spec: &TrialSpec, trial: usize) -> Vec<ChuObject> {
    let mut rng = trial_rng(spec.seed, law, spec.field.p(), trial);
    let (f, d) = (spec.field, spec.max_dim);
    match law {
        LawId::L6 => vec![random_sep_ext(&mut rng, f, d), random_sep_ext(&mut rng, f, d)],
        LawId::L7 => {
            let t = random_object(&mut rng, f, d);
            let u = if trial % 2 == 0 { random_separated(&mut rng, f, d) } else { random_extensional(&mut rng, f, d) };
            vec![t, u]
        }
        _ => (0..law.arity()).map(|_| random_object(&mut rng, f, d)).collect(),
    }
}

/// Runs one law on explicit inputs. `corrupt` perturbs the canonical witness
/// so that a correct implementation reports a failure.
pub fn check_law_on(law: LawId, inputs: &[ChuObject], corrupt: bool) -> Result<(), String> {
    if inputs.len() != law.arity() {
        return Err(format!("{law} takes {} objects, got {}", law.arity(), inputs.len()));
    }
    let field = inputs[0].field();
    if inputs.iter().any(|o| o.field() != field) {
        return Err("inputs live over different fields".into());
    }
    let i = inputs;
    match law {
        LawId::L1 => {
            let back = if corrupt { i[0].dual() } else { i[0].dual().dual() };
            if back == i[0] {
                Ok(())
            } else {
                Err("(T*)* differs from T".into())
            }
        }
        LawId::L2 => witness::dual_as_hom(&i[0], corrupt),
        LawId::L3 => witness::tensor_hom_adjunction(&i[0], &i[1], &i[2], corrupt),
        LawId::L4 => witness::unit_law(&i[0], corrupt),
        LawId::L5 => witness::symmetry(&i[0], &i[1], corrupt),
        LawId::L6 => witness::closure_of_chu(&i[0], &i[1], corrupt),
        LawId::L7 => witness::reflection_adjointness(&i[0], &i[1], corrupt),
        LawId::L8 => witness::dual_of_hom(&i[0], &i[1], corrupt),
        LawId::L9 => witness::compact_closure(&i[0], &i[1], corrupt),
        LawId::L10 => witness::associativity(&i[0], &i[1], &i[2], corrupt),
    }
}

pub fn run_law(law: LawId, spec: &TrialSpec) -> LawReport {
    run_law_with(law, spec, false)
}

/// Trials run in parallel; failures come back in trial order.
pub fn run_law_with(law: LawId, spec: &TrialSpec, corrupt: bool) -> LawReport {
    let start = Instant::now();
    let failures: Vec<Failure> = (0..spec.samples)
        .into_par_iter()
        .filter_map(|trial| {
            let inputs = sample_inputs(law, spec, trial);
            check_law_on(law, &inputs, corrupt).err().map(|reason| Failure { trial, reason, counterexample: inputs })
        })
        .collect();
    LawReport { law, trials: spec.samples, failures, seed: spec.seed, elapsed: start.elapsed() }
}

pub fn run_all(spec: &TrialSpec) -> Vec<LawReport> {
    LawId::ALL.iter().map(|&l| run_law(l, spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chu::unit_object;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn law_ids_round_trip() {
        for l in LawId::ALL {
            assert_eq!(l.to_string().parse::<LawId>().unwrap(), l);
        }
        assert!("L0".parse::<LawId>().is_err());
        assert!("L11".parse::<LawId>().is_err());
        assert!("x3".parse::<LawId>().is_err());
    }

    #[test]
    fn l3_on_units() {
        let u = unit_object(f(2));
        assert_eq!(check_law_on(LawId::L3, &[u.clone(), u.clone(), u], false), Ok(()));
    }

    #[test]
    fn every_law_passes_on_small_runs() {
        for p in [2, 3] {
            let spec = TrialSpec { field: f(p), max_dim: 3, samples: 30, seed: 7 };
            for l in LawId::ALL {
                let r = run_law(l, &spec);
                assert!(r.passed(), "{l} over F_{p}: {:?}", r.failures.first());
            }
        }
    }

    #[test]
    fn corruption_is_detected() {
        let spec = TrialSpec { field: f(3), max_dim: 3, samples: 40, seed: 11 };
        for l in LawId::ALL {
            let r = run_law_with(l, &spec, true);
            assert!(!r.passed(), "{l} corruption went unnoticed");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = TrialSpec { field: f(5), max_dim: 3, samples: 20, seed: 3 };
        let a = run_law_with(LawId::L3, &spec, true);
        let b = run_law_with(LawId::L3, &spec, true);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn failures_replay() {
        let spec = TrialSpec { field: f(2), max_dim: 3, samples: 20, seed: 5 };
        let r = run_law_with(LawId::L5, &spec, true);
        let fail = &r.failures[0];
        let json = serde_json::to_string(&fail.counterexample).unwrap();
        let back: Vec<ChuObject> = serde_json::from_str(&json).unwrap();
        assert!(check_law_on(LawId::L5, &back, true).is_err());
        assert_eq!(check_law_on(LawId::L5, &back, false), Ok(()));
    }

    #[test]
    fn report_json_shape() {
        let spec = TrialSpec { field: f(2), max_dim: 2, samples: 3, seed: 9 };
        let r = run_law(LawId::L1, &spec);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"law":"L1","trials":3,"failures":[],"seed":9}"#);
    }

    #[test]
    fn samplers_respect_their_classes() {
        let mut rng = trial_rng(1, LawId::L6, 3, 0);
        for _ in 0..50 {
            let s = random_separated(&mut rng, f(3), 4);
            assert!(s.is_separated());
            let e = random_extensional(&mut rng, f(3), 4);
            assert!(e.is_extensional());
            let b = random_sep_ext(&mut rng, f(3), 4);
            assert!(b.is_separated() && b.is_extensional());
        }
    }
}
