//! Subspaces of finite products of finite-dimensional discrete spaces.
//!
//! Over a discrete field every linear map between finite-dimensional spaces
//! is continuous and every subspace is closed, so a space here is fully
//! described by its factor dimensions and a canonical subspace of their
//! concatenation. In this regime the weak and strong retopologizations both
//! act as the identity on underlying spaces; only the weak one, [`sigma`],
//! is exposed, since it carries the relabeling into dual-basis coordinates.
//!
//! Functionals are stored intrinsically: a row of coefficients against the
//! subspace's canonical basis.

use crate::linalg::{kernel, pullback_pair, FieldSpec, LinalgError, Matrix, Subspace};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::ops::Range;
use thiserror::Error;

/// Exhaustive minimal-J search is certified up to this many factors.
pub const CERTIFIED_FACTOR_LIMIT: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopoError {
    #[error("generator has length {found}, ambient dimension is {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("functional has {found} coefficients, space has dimension {expected}")]
    FunctionalMismatch { expected: usize, found: usize },
    #[error("{0} factors exceed the exhaustive search limit")]
    TooManyFactors(usize),
    #[error("subspace has {0} elements, too many to enumerate")]
    TooManyElements(u128),
    #[error("map has shape {found:?}, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("field mismatch")]
    FieldMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentedSpace {
    field: FieldSpec,
    factors: Vec<usize>,
    subspace: Subspace,
}

impl PresentedSpace {
    /// The span of `generators` (rows) inside `∏ K^{dᵢ}`.
    pub fn new(field: FieldSpec, factors: Vec<usize>, generators: &[Vec<u32>]) -> Result<Self, TopoError> {
        let d: usize = factors.iter().sum();
        if let Some(g) = generators.iter().find(|g| g.len() != d) {
            return Err(TopoError::LengthMismatch { expected: d, found: g.len() });
        }
        let subspace = Subspace::from_rows(field, d, generators);
        Ok(PresentedSpace { field, factors, subspace })
    }

    pub fn from_subspace(factors: Vec<usize>, subspace: Subspace) -> Result<Self, TopoError> {
        let d: usize = factors.iter().sum();
        if subspace.ambient_dim() != d {
            return Err(TopoError::LengthMismatch { expected: d, found: subspace.ambient_dim() });
        }
        Ok(PresentedSpace { field: subspace.field(), factors, subspace })
    }

    /// `K^n` with `n` one-dimensional factors.
    pub fn full_power(field: FieldSpec, n: usize) -> Self {
        PresentedSpace { field, factors: vec![1; n], subspace: Subspace::full(field, n) }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Ambient coordinates belonging to factor `i`.
    pub fn factor_range(&self, i: usize) -> Range<usize> {
        let start: usize = self.factors[..i].iter().sum();
        start..start + self.factors[i]
    }

    /// Ambient coordinates belonging to the factors in `j`, in order.
    pub fn coords_of(&self, j: &[usize]) -> Vec<usize> {
        j.iter().flat_map(|&i| self.factor_range(i)).collect()
    }
}

/// Wire form `{"p":p,"factors":[..],"basis":[rows]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedSpaceJson {
    pub p: u64,
    pub factors: Vec<usize>,
    pub basis: Vec<Vec<i64>>,
}

impl From<&PresentedSpace> for PresentedSpaceJson {
    fn from(v: &PresentedSpace) -> Self {
        PresentedSpaceJson {
            p: v.field.p() as u64,
            factors: v.factors.clone(),
            basis: v.subspace.basis().row_vecs().into_iter().map(|r| r.into_iter().map(|e| e as i64).collect()).collect(),
        }
    }
}

impl TryFrom<PresentedSpaceJson> for PresentedSpace {
    type Error = TopoError;
    fn try_from(j: PresentedSpaceJson) -> Result<Self, TopoError> {
        let field = FieldSpec::new(j.p)?;
        let rows: Vec<Vec<u32>> = j.basis.iter().map(|r| r.iter().map(|&e| field.reduce(e)).collect()).collect();
        PresentedSpace::new(field, j.factors, &rows)
    }
}

pub fn make_presented(field: FieldSpec, factors: Vec<usize>, generators: &[Vec<u32>]) -> Result<PresentedSpace, TopoError> {
    PresentedSpace::new(field, factors, generators)
}

/// A functional, as coefficients against the space's canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Functional {
    pub coeffs: Vec<u32>,
}

impl Functional {
    pub fn new(v: &PresentedSpace, coeffs: Vec<u32>) -> Result<Self, TopoError> {
        if coeffs.len() != v.dim() {
            return Err(TopoError::FunctionalMismatch { expected: v.dim(), found: coeffs.len() });
        }
        Ok(Functional { coeffs: coeffs.into_iter().map(|c| c % v.field.p()).collect() })
    }

    pub fn zero(v: &PresentedSpace) -> Self {
        Functional { coeffs: vec![0; v.dim()] }
    }

    /// Restriction of an ambient row vector.
    pub fn restrict(v: &PresentedSpace, ambient: &[u32]) -> Self {
        Functional { coeffs: v.subspace.basis().apply(ambient) }
    }

    /// Value on a vector given by its coordinates in the space's basis.
    pub fn eval_coords(&self, f: FieldSpec, coords: &[u32]) -> u32 {
        f.dot(&self.coeffs, coords)
    }
}

/// Direct sum of presented spaces: factors concatenated, subspaces summed.
pub fn product(vs: &[PresentedSpace]) -> Result<PresentedSpace, TopoError> {
    let Some(first) = vs.first() else {
        return Err(TopoError::LengthMismatch { expected: 1, found: 0 });
    };
    let field = first.field;
    if vs.iter().any(|v| v.field != field) {
        return Err(TopoError::FieldMismatch);
    }
    let mut basis = Matrix::zeros(field, 0, 0);
    let mut factors = Vec::new();
    for v in vs {
        basis = basis.block_diag(v.subspace.basis());
        factors.extend_from_slice(&v.factors);
    }
    PresentedSpace::from_subspace(factors, Subspace::span(&basis))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationResult {
    /// Sorted factor indices.
    pub j: Vec<usize>,
    /// The projection of the space onto the factors in `j`.
    pub t0: Subspace,
    /// The induced functional on `t0`, in `t0`'s basis.
    pub phi0: Vec<u32>,
    /// `false` when the greedy fallback was used instead of exhaustive search.
    pub certified: bool,
}

/// Rows of the basis restricted to the coordinates of `j`.
fn restricted_basis(v: &PresentedSpace, j: &[usize]) -> Matrix {
    v.subspace.basis().select_columns(&v.coords_of(j))
}

/// Does φ vanish on `V ∩ ({0}_J × ∏_{i∉J} Tᵢ)`?
fn admissible(v: &PresentedSpace, phi: &Functional, j: &[usize]) -> bool {
    let bj = restricted_basis(v, j);
    // coefficient vectors c with cᵀ·B_J = 0
    let null = kernel(&bj.transpose());
    (0..null.dim()).all(|k| v.field.dot(null.basis_vector(k), &phi.coeffs) == 0)
}

fn check_functional(v: &PresentedSpace, phi: &Functional) -> Result<(), TopoError> {
    if phi.coeffs.len() != v.dim() {
        return Err(TopoError::FunctionalMismatch { expected: v.dim(), found: phi.coeffs.len() });
    }
    Ok(())
}

/// Factors φ through the projection onto a minimum-cardinality set of
/// factors, ties broken lexicographically.
pub fn factor_functional(v: &PresentedSpace, phi: &Functional) -> Result<FactorizationResult, TopoError> {
    check_functional(v, phi)?;
    let m = v.factors.len();
    let (j, certified) = if m <= CERTIFIED_FACTOR_LIMIT {
        let j = (0..=m)
            .flat_map(|k| (0..m).combinations(k))
            .find(|j| admissible(v, phi, j))
            .expect("the full index set is always admissible");
        (j, true)
    } else {
        let mut j: Vec<usize> = (0..m).collect();
        let mut i = 0;
        while i < j.len() {
            let mut trial = j.clone();
            trial.remove(i);
            if admissible(v, phi, &trial) {
                j = trial;
            } else {
                i += 1;
            }
        }
        (j, false)
    };
    let bj = restricted_basis(v, &j);
    let t0 = Subspace::span(&bj);
    // φ₀ on each basis row t_k of T0: pick any c with cᵀ·B_J = t_k, take φ(c)
    let bjt = bj.transpose();
    let phi0 = (0..t0.dim())
        .map(|k| {
            let c = crate::linalg::solve(&bjt, t0.basis_vector(k))
                .expect("shapes agree")
                .expect("T0 basis lies in the row space of B_J");
            v.field.dot(&c, &phi.coeffs)
        })
        .collect();
    Ok(FactorizationResult { j, t0, phi0, certified })
}

impl FactorizationResult {
    /// Checks `φ₀ ∘ π_J = φ` on every basis vector of the space.
    pub fn reproduces(&self, v: &PresentedSpace, phi: &Functional) -> bool {
        let bj = restricted_basis(v, &self.j);
        (0..v.dim()).all(|i| match self.t0.coordinates(bj.row(i)) {
            Some(c) => v.field.dot(&c, &self.phi0) == phi.coeffs[i],
            None => false,
        })
    }
}

/// Every element of the subspace, as (coordinates, ambient vector).
fn enumerate_elements(v: &PresentedSpace, limit: u128) -> Result<Vec<(Vec<u32>, Vec<u32>)>, TopoError> {
    let p = v.field.p() as u128;
    let count = p.checked_pow(v.dim() as u32).unwrap_or(u128::MAX);
    if count > limit {
        return Err(TopoError::TooManyElements(count));
    }
    let r = v.dim();
    let mut out = Vec::with_capacity(count as usize);
    let mut coords = vec![0u32; r];
    loop {
        out.push((coords.clone(), v.subspace.combine(&coords)));
        let mut k = 0;
        loop {
            if k == r {
                return Ok(out);
            }
            coords[k] += 1;
            if coords[k] == v.field.p() {
                coords[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }
}

/// Brute force: scans subsets by (cardinality, lexicographic) order and
/// checks each against every element of the subspace.
pub fn minimal_j_oracle(v: &PresentedSpace, phi: &Functional) -> Result<Vec<usize>, TopoError> {
    check_functional(v, phi)?;
    let m = v.factors.len();
    if m > CERTIFIED_FACTOR_LIMIT {
        return Err(TopoError::TooManyFactors(m));
    }
    let elems = enumerate_elements(v, 1 << 16)?;
    let f = v.field;
    for k in 0..=m {
        for j in (0..m).combinations(k) {
            let coords = v.coords_of(&j);
            let ok = elems
                .iter()
                .filter(|(_, amb)| coords.iter().all(|&c| amb[c] == 0))
                .all(|(c, _)| phi.eval_coords(f, c) == 0);
            if ok {
                return Ok(j);
            }
        }
    }
    unreachable!("the full index set is always admissible")
}

/// An ambient row vector ψ with `ψ|_V = φ`: factor through J, then put
/// φ₀ on the pivot coordinates of T0 and zero everywhere else.
pub fn extend_functional(v: &PresentedSpace, phi: &Functional) -> Result<Vec<u32>, TopoError> {
    let fr = factor_functional(v, phi)?;
    let coords = v.coords_of(&fr.j);
    let mut psi = vec![0u32; v.ambient_dim()];
    for (k, &pc) in fr.t0.pivots().iter().enumerate() {
        psi[coords[pc]] = fr.phi0[k];
    }
    Ok(psi)
}

/// The dual basis of the space.
pub fn hom_functionals(v: &PresentedSpace) -> Vec<Functional> {
    (0..v.dim())
        .map(|i| {
            let mut c = vec![0; v.dim()];
            c[i] = 1;
            Functional { coeffs: c }
        })
        .collect()
}

/// A linear map between presented spaces, in their intrinsic bases
/// (`dim target × dim source`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismP {
    pub source: PresentedSpace,
    pub target: PresentedSpace,
    pub map: Matrix,
}

impl MorphismP {
    pub fn new(source: PresentedSpace, target: PresentedSpace, map: Matrix) -> Result<Self, TopoError> {
        if map.shape() != (target.dim(), source.dim()) {
            return Err(TopoError::Shape { expected: (target.dim(), source.dim()), found: map.shape() });
        }
        if map.field() != source.field || source.field != target.field {
            return Err(TopoError::FieldMismatch);
        }
        Ok(MorphismP { source, target, map })
    }

    pub fn identity(v: &PresentedSpace) -> Self {
        MorphismP { source: v.clone(), target: v.clone(), map: Matrix::identity(v.field, v.dim()) }
    }

    /// `φ ↦ φ ∘ map`, from functionals on the target to functionals on the source.
    pub fn pull_back_functional(&self, phi: &Functional) -> Functional {
        Functional { coeffs: self.map.apply_left(&phi.coeffs) }
    }
}

/// Bijective, and bijective on functionals. The second condition is checked
/// separately by pulling back the target's dual basis.
pub fn is_weak_iso(m: &MorphismP) -> bool {
    if !m.map.is_invertible() {
        return false;
    }
    let pulled: Vec<Vec<u32>> = hom_functionals(&m.target).iter().map(|phi| m.pull_back_functional(phi).coeffs).collect();
    let span = Subspace::from_rows(m.source.field, m.source.dim(), &pulled);
    pulled.len() == m.source.dim() && span.dim() == m.source.dim()
}

/// Block-diagonal product of morphisms.
pub fn product_morphism(ms: &[MorphismP]) -> Result<MorphismP, TopoError> {
    let sources: Vec<_> = ms.iter().map(|m| m.source.clone()).collect();
    let targets: Vec<_> = ms.iter().map(|m| m.target.clone()).collect();
    let s = product(&sources)?;
    let t = product(&targets)?;
    // the product basis is the block-diagonal of the factor bases (already rref), so
    // intrinsic coordinates concatenate
    let mut map = Matrix::zeros(s.field, 0, 0);
    for m in ms {
        map = map.block_diag(&m.map);
    }
    MorphismP::new(s, t, map)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackResult {
    /// `W' ⊆ W × V'`.
    pub space: PresentedSpace,
    pub to_w: MorphismP,
    pub to_v_prime: MorphismP,
    /// Whether `W' → W` is a weak isomorphism.
    pub weak_iso: bool,
}

/// Pullback of `f : W → V` along `g : V' → V`.
pub fn pullback_weak_iso(f: &MorphismP, g: &MorphismP) -> Result<PullbackResult, TopoError> {
    if f.target != g.target {
        return Err(TopoError::Shape { expected: (f.target.dim(), 0), found: (g.target.dim(), 0) });
    }
    let w = &f.source;
    let vp = &g.source;
    let field = w.field;
    let pb = pullback_pair(&f.map, &g.map)?;
    // embed intrinsic (c_w, c_v') into the ambient of W × V'
    let embed = w.subspace.basis().block_diag(vp.subspace.basis());
    let amb = Subspace::span(&pb.basis().mul(&embed));
    let mut factors = w.factors.clone();
    factors.extend_from_slice(&vp.factors);
    let space = PresentedSpace::from_subspace(factors, amb)?;
    let dw = w.ambient_dim();
    let mut to_w = Matrix::zeros(field, w.dim(), space.dim());
    let mut to_vp = Matrix::zeros(field, vp.dim(), space.dim());
    for k in 0..space.dim() {
        let row = space.subspace.basis_vector(k);
        let cw = w.subspace.coordinates(&row[..dw]).expect("W component lies in W");
        let cv = vp.subspace.coordinates(&row[dw..]).expect("V' component lies in V'");
        for (i, &e) in cw.iter().enumerate() {
            to_w.set(i, k, e);
        }
        for (i, &e) in cv.iter().enumerate() {
            to_vp.set(i, k, e);
        }
    }
    let to_w = MorphismP::new(space.clone(), w.clone(), to_w)?;
    let to_v_prime = MorphismP::new(space.clone(), vp.clone(), to_vp)?;
    let weak_iso = is_weak_iso(&to_w);
    Ok(PullbackResult { space, to_w, to_v_prime, weak_iso })
}

/// V re-embedded in `K^{Hom(V, K)}` through its dual basis.
pub fn sigma(v: &PresentedSpace) -> PresentedSpace {
    let n = v.dim();
    let evaluations: Vec<Vec<u32>> = (0..n)
        .map(|i| hom_functionals(v).iter().map(|phi| phi.coeffs[i]).collect())
        .collect();
    PresentedSpace::new(v.field, vec![1; n], &evaluations).expect("one coordinate per functional")
}

/// The identity-on-elements map `V → σ(V)`.
pub fn sigma_unit(v: &PresentedSpace) -> MorphismP {
    let s = sigma(v);
    MorphismP { source: v.clone(), target: s, map: Matrix::identity(v.field, v.dim()) }
}

/// Every subspace of `K^{d}` for the given factor list (small cases only).
pub fn all_presented_spaces(field: FieldSpec, factors: &[usize]) -> Vec<PresentedSpace> {
    let d: usize = factors.iter().sum();
    let ambient = PresentedSpace::new(field, factors.to_vec(), &[]).expect("empty generators");
    let elements = enumerate_elements(&PresentedSpace::full_power(field, d), 1 << 20).expect("small ambient");
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut frontier = vec![ambient.subspace.clone()];
    seen.insert(ambient.subspace.clone());
    while let Some(s) = frontier.pop() {
        for (_, v) in &elements {
            if s.contains(v) {
                continue;
            }
            let bigger = s.join(&Subspace::from_rows(field, d, &[v.clone()]));
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<PresentedSpace> = seen
        .into_iter()
        .map(|s| PresentedSpace::from_subspace(factors.to_vec(), s).expect("ambient matches"))
        .collect();
    out.sort_by(|a, b| (a.dim(), a.subspace.basis().entries()).cmp(&(b.dim(), b.subspace.basis().entries())));
    out
}

/// Every functional on a space (small cases only).
pub fn all_functionals(v: &PresentedSpace) -> Vec<Functional> {
    let probe = PresentedSpace::full_power(v.field, v.dim());
    enumerate_elements(&probe, 1 << 20)
        .expect("small dual")
        .into_iter()
        .map(|(c, _)| Functional { coeffs: c })
        .collect()
}

/// Every list of positive factor dimensions with sum at most `max_ambient`.
pub fn factor_lists(max_ambient: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut k = 0;
    while k < out.len() {
        let used: usize = out[k].iter().sum();
        for d in 1..=max_ambient.saturating_sub(used) {
            let mut next = out[k].clone();
            next.push(d);
            out.push(next);
        }
        k += 1;
    }
    out
}

/// All presented spaces whose ambient dimension is at most `max_ambient`.
pub fn small_corpus(field: FieldSpec, max_ambient: usize) -> Vec<PresentedSpace> {
    factor_lists(max_ambient).iter().flat_map(|fs| all_presented_spaces(field, fs)).collect()
}

/// Every linear map `v → w` (small cases only).
pub fn all_maps(v: &PresentedSpace, w: &PresentedSpace) -> Vec<MorphismP> {
    let probe = PresentedSpace::full_power(v.field, v.dim() * w.dim());
    enumerate_elements(&probe, 1 << 16)
        .expect("small hom space")
        .into_iter()
        .map(|(c, _)| {
            let m = Matrix::new(v.field, w.dim(), v.dim(), c).expect("sized");
            MorphismP { source: v.clone(), target: w.clone(), map: m }
        })
        .collect()
}

/// Random factors (count and dimensions bounded) and a few random generators.
pub fn random_presented<R: rand::Rng>(rng: &mut R, field: FieldSpec, max_factors: usize, max_factor_dim: usize) -> PresentedSpace {
    let m = rng.gen_range(0..=max_factors);
    let factors: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=max_factor_dim)).collect();
    let d: usize = factors.iter().sum();
    let gens: Vec<Vec<u32>> = (0..rng.gen_range(0..=d))
        .map(|_| (0..d).map(|_| rng.gen_range(0..field.p())).collect())
        .collect();
    PresentedSpace::new(field, factors, &gens).expect("generator lengths match")
}

pub fn random_functional<R: rand::Rng>(rng: &mut R, v: &PresentedSpace) -> Functional {
    Functional { coeffs: (0..v.dim()).map(|_| rng.gen_range(0..v.field.p())).collect() }
}

/// Products of weak isos are weak isos, and a product is a weak iso only if
/// its factors are: every pair of same-dimension maps between spaces of
/// ambient dimension ≤ `max_ambient`. Returns the number of pairs checked.
pub fn check_finprod_exhaustive(field: FieldSpec, max_ambient: usize) -> Result<usize, String> {
    let corpus = small_corpus(field, max_ambient);
    let maps: Vec<MorphismP> = corpus
        .iter()
        .flat_map(|v| corpus.iter().filter(|w| w.dim() == v.dim()).flat_map(move |w| all_maps(v, w)))
        .collect();
    let weak: Vec<bool> = maps.iter().map(is_weak_iso).collect();
    let mut checked = 0;
    for (a, wa) in maps.iter().zip(&weak) {
        for (b, wb) in maps.iter().zip(&weak) {
            let prod = product_morphism(&[a.clone(), b.clone()]).map_err(|e| e.to_string())?;
            if is_weak_iso(&prod) != (*wa && *wb) {
                return Err(format!("product of maps {:?} and {:?}", a.map.entries(), b.map.entries()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// For every `f : W → V` and every weak iso `g : V' → V` among spaces of
/// ambient dimension ≤ `max_ambient`, the projection `W ×_V V' → W` is a
/// weak iso. Returns the number of squares checked.
pub fn check_pullback_exhaustive(field: FieldSpec, max_ambient: usize) -> Result<usize, String> {
    let corpus = small_corpus(field, max_ambient);
    let mut checked = 0;
    for v in &corpus {
        let isos: Vec<MorphismP> = corpus
            .iter()
            .filter(|w| w.dim() == v.dim())
            .flat_map(|vp| all_maps(vp, v))
            .filter(is_weak_iso)
            .collect();
        for w in &corpus {
            for f in all_maps(w, v) {
                for g in &isos {
                    let pb = pullback_weak_iso(&f, g).map_err(|e| e.to_string())?;
                    if !pb.weak_iso {
                        return Err(format!("pullback of a weak iso along {:?} is not a weak iso", f.map.entries()));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// `σσ = σ`, and `V → σV` is a weak iso.
pub fn check_sigma(v: &PresentedSpace) -> Result<(), String> {
    let s = sigma(v);
    if sigma(&s) != s {
        return Err("σ is not idempotent".into());
    }
    if !is_weak_iso(&sigma_unit(v)) {
        return Err("V → σV is not a weak iso".into());
    }
    Ok(())
}

/// `factor_functional` agrees with the oracle and reproduces φ.
pub fn check_factorization(v: &PresentedSpace, phi: &Functional) -> Result<(), String> {
    let fr = factor_functional(v, phi).map_err(|e| e.to_string())?;
    let oracle = minimal_j_oracle(v, phi).map_err(|e| e.to_string())?;
    if fr.j != oracle {
        return Err(format!("J = {:?}, oracle {:?}", fr.j, oracle));
    }
    if !fr.reproduces(v, phi) {
        return Err(format!("φ₀ ∘ π_J ≠ φ for J = {:?}", fr.j));
    }
    let psi = extend_functional(v, phi).map_err(|e| e.to_string())?;
    if Functional::restrict(v, &psi) != *phi {
        return Err("extension does not restrict to φ".into());
    }
    Ok(())
}

/// All spaces over F_2 with at most five one-dimensional factors.
pub fn factor_corpus() -> Vec<PresentedSpace> {
    let f2 = FieldSpec::new(2).expect("prime");
    (0..=5).flat_map(|m| all_presented_spaces(f2, &vec![1; m])).collect()
}
