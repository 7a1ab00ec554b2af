//! The categories Chu(Vect_k, k) and chu(Vect_k, k) for k = F_p.
//!
//! A [`ChuObject`] `(A, X, P)` pairs `a ∈ A` with `x ∈ X` by `⟨a, x⟩ = aᵀ·P·x`.
//! A morphism `(F, G) : (A, X, P) → (B, Y, Q)` has `F : A → B` (a `dimB × dimA`
//! matrix) and `G : Y → X` (a `dimX × dimY` matrix), subject to
//!
//! ```text
//! Fᵀ·Q = P·G        (⟨F a, y⟩ = ⟨a, G y⟩ for all a, y)
//! ```
//!
//! Every other formula in this module is derived from that identity.
//! Morphism pairs are vectorized F-block first, each block row-major.

use crate::linalg::{kernel, solve, FieldSpec, LinalgError, Matrix, Subspace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChuError {
    #[error("pairing has shape {found:?}, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Fᵀ·Q ≠ P·G at entry ({row}, {col})")]
    AdjointnessViolated { row: usize, col: usize },
    #[error("morphisms do not compose: middle objects differ")]
    BoundaryMismatch,
    #[error("no G exists: column {column} of Fᵀ·Q is outside the column space of P")]
    NotAMorphism { column: usize },
    #[error("object is not separated")]
    NotSeparated,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn same_field(a: FieldSpec, b: FieldSpec) -> Result<(), ChuError> {
    if a == b {
        Ok(())
    } else {
        Err(ChuError::FieldMismatch(a.p(), b.p()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChuObject {
    field: FieldSpec,
    dim_a: usize,
    dim_x: usize,
    pairing: Matrix,
}

impl ChuObject {
    pub fn new(field: FieldSpec, dim_a: usize, dim_x: usize, pairing: Matrix) -> Result<Self, ChuError> {
        let o = ChuObject { field, dim_a, dim_x, pairing };
        o.validate()?;
        Ok(o)
    }

    /// Checks the pairing's field and shape against the declared dimensions.
    pub fn validate(&self) -> Result<(), ChuError> {
        same_field(self.field, self.pairing.field())?;
        if self.pairing.shape() != (self.dim_a, self.dim_x) {
            return Err(ChuError::Shape { expected: (self.dim_a, self.dim_x), found: self.pairing.shape() });
        }
        Ok(())
    }

    pub fn from_pairing(pairing: Matrix) -> Self {
        ChuObject { field: pairing.field(), dim_a: pairing.rows(), dim_x: pairing.cols(), pairing }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    /// `⟨a, x⟩ = aᵀ·P·x`.
    pub fn eval_pairing(&self, a: &[u32], x: &[u32]) -> Result<u32, ChuError> {
        if a.len() != self.dim_a {
            return Err(ChuError::DimensionMismatch { expected: self.dim_a, found: a.len() });
        }
        if x.len() != self.dim_x {
            return Err(ChuError::DimensionMismatch { expected: self.dim_x, found: x.len() });
        }
        Ok(self.field.dot(&self.pairing.apply_left(a), x))
    }

    /// `(A, X)* = (X, A)` with the transposed pairing.
    pub fn dual(&self) -> ChuObject {
        ChuObject { field: self.field, dim_a: self.dim_x, dim_x: self.dim_a, pairing: self.pairing.transpose() }
    }

    pub fn flags(&self) -> SepExtFlags {
        sep_ext_flags(self)
    }

    pub fn is_separated(&self) -> bool {
        self.flags().separated
    }

    pub fn is_extensional(&self) -> bool {
        self.flags().extensional
    }
}

/// Wire form `{"p":p,"dimA":a,"dimX":x,"P":[row-major]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChuObjectJson {
    pub p: u64,
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimX")]
    pub dim_x: usize,
    #[serde(rename = "P")]
    pub pairing: Vec<i64>,
}

impl From<&ChuObject> for ChuObjectJson {
    fn from(o: &ChuObject) -> Self {
        ChuObjectJson {
            p: o.field.p() as u64,
            dim_a: o.dim_a,
            dim_x: o.dim_x,
            pairing: o.pairing.entries().iter().map(|&e| e as i64).collect(),
        }
    }
}

impl TryFrom<ChuObjectJson> for ChuObject {
    type Error = ChuError;
    fn try_from(j: ChuObjectJson) -> Result<Self, ChuError> {
        let field = FieldSpec::new(j.p)?;
        let expected = j.dim_a * j.dim_x;
        if j.pairing.len() != expected {
            return Err(ChuError::DimensionMismatch { expected, found: j.pairing.len() });
        }
        let m = Matrix::from_ints(field, j.dim_a, j.dim_x, &j.pairing)?;
        ChuObject::new(field, j.dim_a, j.dim_x, m)
    }
}

impl Serialize for ChuObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChuObjectJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChuObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ChuObject::try_from(ChuObjectJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `(1, 1, [1])`: both ⊤ and K are the one-dimensional space k.
pub fn unit_object(field: FieldSpec) -> ChuObject {
    ChuObject::from_pairing(Matrix::identity(field, 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SepExtFlags {
    pub separated: bool,
    pub extensional: bool,
}

pub fn sep_ext_flags(o: &ChuObject) -> SepExtFlags {
    let r = o.pairing.rank();
    SepExtFlags { separated: r == o.dim_a, extensional: r == o.dim_x }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChuMorphism {
    source: ChuObject,
    target: ChuObject,
    f: Matrix,
    g: Matrix,
}

/// First entry where `Fᵀ·Q` and `P·G` disagree, if any.
fn adjointness_defect(source: &ChuObject, target: &ChuObject, f: &Matrix, g: &Matrix) -> Option<(usize, usize)> {
    let lhs = f.transpose().mul(&target.pairing);
    let rhs = source.pairing.mul(g);
    (0..lhs.rows()).flat_map(|i| (0..lhs.cols()).map(move |j| (i, j))).find(|&(i, j)| lhs.get(i, j) != rhs.get(i, j))
}

impl ChuMorphism {
    /// Builds `(F, G)` after checking shapes and `Fᵀ·Q = P·G`.
    pub fn new(source: ChuObject, target: ChuObject, f: Matrix, g: Matrix) -> Result<Self, ChuError> {
        let m = ChuMorphism { source, target, f, g };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ChuError> {
        let (s, t) = (&self.source, &self.target);
        same_field(s.field, t.field)?;
        same_field(s.field, self.f.field())?;
        same_field(s.field, self.g.field())?;
        if self.f.shape() != (t.dim_a, s.dim_a) {
            return Err(ChuError::Shape { expected: (t.dim_a, s.dim_a), found: self.f.shape() });
        }
        if self.g.shape() != (s.dim_x, t.dim_x) {
            return Err(ChuError::Shape { expected: (s.dim_x, t.dim_x), found: self.g.shape() });
        }
        match adjointness_defect(s, t, &self.f, &self.g) {
            Some((row, col)) => Err(ChuError::AdjointnessViolated { row, col }),
            None => Ok(()),
        }
    }

    pub fn identity(o: &ChuObject) -> ChuMorphism {
        ChuMorphism {
            source: o.clone(),
            target: o.clone(),
            f: Matrix::identity(o.field, o.dim_a),
            g: Matrix::identity(o.field, o.dim_x),
        }
    }

    pub fn source(&self) -> &ChuObject {
        &self.source
    }

    pub fn target(&self) -> &ChuObject {
        &self.target
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    /// `(g, f) : (Y, B) → (X, A)`.
    pub fn dual(&self) -> ChuMorphism {
        ChuMorphism { source: self.target.dual(), target: self.source.dual(), f: self.g.clone(), g: self.f.clone() }
    }

    /// Both components invertible.
    pub fn is_iso(&self) -> bool {
        self.f.is_invertible() && self.g.is_invertible()
    }
}

/// `second ∘ first = (F₂F₁, G₁G₂)`.
pub fn compose(second: &ChuMorphism, first: &ChuMorphism) -> Result<ChuMorphism, ChuError> {
    if first.target != second.source {
        return Err(ChuError::BoundaryMismatch);
    }
    Ok(ChuMorphism {
        source: first.source.clone(),
        target: second.target.clone(),
        f: second.f.mul(&first.f),
        g: first.g.mul(&second.g),
    })
}

/// Wire form of a morphism: source, target and row-major `F`, `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChuMorphismJson {
    pub p: u64,
    pub source: ChuObjectJson,
    pub target: ChuObjectJson,
    #[serde(rename = "F")]
    pub f: Vec<i64>,
    #[serde(rename = "G")]
    pub g: Vec<i64>,
}

impl From<&ChuMorphism> for ChuMorphismJson {
    fn from(m: &ChuMorphism) -> Self {
        ChuMorphismJson {
            p: m.source.field.p() as u64,
            source: (&m.source).into(),
            target: (&m.target).into(),
            f: m.f.entries().iter().map(|&e| e as i64).collect(),
            g: m.g.entries().iter().map(|&e| e as i64).collect(),
        }
    }
}

impl TryFrom<ChuMorphismJson> for ChuMorphism {
    type Error = ChuError;
    fn try_from(j: ChuMorphismJson) -> Result<Self, ChuError> {
        let field = FieldSpec::new(j.p)?;
        let s = ChuObject::try_from(j.source)?;
        let t = ChuObject::try_from(j.target)?;
        let f = Matrix::from_ints(field, t.dim_a, s.dim_a, &j.f)?;
        let g = Matrix::from_ints(field, s.dim_x, t.dim_x, &j.g)?;
        ChuMorphism::new(s, t, f, g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Separated,
    Extensional,
}

/// A reflected object together with its structure map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reflection {
    pub object: ChuObject,
    /// `o → S(o)` for [`Side::Separated`], `E(o) → o` for [`Side::Extensional`].
    pub morphism: ChuMorphism,
}

/// `S`: quotient A by `{a : aᵀP = 0}`. `E`: quotient X by `{x : Px = 0}`.
pub fn reflect(o: &ChuObject, side: Side) -> Reflection {
    match side {
        Side::Separated => {
            let left = kernel(&o.pairing.transpose());
            let q = left.quotient_map();
            let s = left.quotient_section();
            let reduced = ChuObject::from_pairing(s.transpose().mul(&o.pairing));
            let morphism = ChuMorphism {
                source: o.clone(),
                target: reduced.clone(),
                f: q,
                g: Matrix::identity(o.field, o.dim_x),
            };
            Reflection { object: reduced, morphism }
        }
        Side::Extensional => {
            let right = kernel(&o.pairing);
            let q = right.quotient_map();
            let s = right.quotient_section();
            let reduced = ChuObject::from_pairing(o.pairing.mul(&s));
            let morphism = ChuMorphism {
                source: reduced.clone(),
                target: o.clone(),
                f: Matrix::identity(o.field, o.dim_a),
                g: q,
            };
            Reflection { object: reduced, morphism }
        }
    }
}

pub fn separated_reflection(o: &ChuObject) -> ChuObject {
    reflect(o, Side::Separated).object
}

pub fn extensional_coreflection(o: &ChuObject) -> ChuObject {
    reflect(o, Side::Extensional).object
}

/// The space of morphisms `s → t`, as a canonical subspace of the
/// vectorized pair space `Hom(A, B) ⊕ Hom(Y, X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpace {
    source: ChuObject,
    target: ChuObject,
    space: Subspace,
}

impl HomSpace {
    pub fn new(source: &ChuObject, target: &ChuObject) -> Result<Self, ChuError> {
        same_field(source.field, target.field)?;
        let field = source.field;
        let (da, dx) = (source.dim_a, source.dim_x);
        let (db, dy) = (target.dim_a, target.dim_x);
        let nf = db * da;
        let ng = dx * dy;
        // equations indexed by (i, j) ∈ A × Y:
        //   Σ_k F[k][i]·Q[k][j] − Σ_l P[i][l]·G[l][j] = 0
        let mut c = Matrix::zeros(field, da * dy, nf + ng);
        for i in 0..da {
            for j in 0..dy {
                let row = i * dy + j;
                for k in 0..db {
                    c.set(row, k * da + i, target.pairing.get(k, j));
                }
                for l in 0..dx {
                    c.set(row, nf + l * dy + j, field.neg(source.pairing.get(i, l)));
                }
            }
        }
        Ok(HomSpace { source: source.clone(), target: target.clone(), space: kernel(&c) })
    }

    pub fn source(&self) -> &ChuObject {
        &self.source
    }

    pub fn target(&self) -> &ChuObject {
        &self.target
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn pack(&self, f: &Matrix, g: &Matrix) -> Vec<u32> {
        assert_eq!(f.shape(), (self.target.dim_a, self.source.dim_a));
        assert_eq!(g.shape(), (self.source.dim_x, self.target.dim_x));
        let mut v = f.vectorize();
        v.extend_from_slice(g.entries());
        v
    }

    pub fn unpack(&self, v: &[u32]) -> (Matrix, Matrix) {
        let field = self.source.field;
        let (da, dx) = (self.source.dim_a, self.source.dim_x);
        let (db, dy) = (self.target.dim_a, self.target.dim_x);
        let nf = db * da;
        let f = Matrix::new(field, db, da, v[..nf].to_vec()).expect("F block");
        let g = Matrix::new(field, dx, dy, v[nf..].to_vec()).expect("G block");
        (f, g)
    }

    /// The `k`-th stored basis pair.
    pub fn element(&self, k: usize) -> (Matrix, Matrix) {
        self.unpack(self.space.basis_vector(k))
    }

    pub fn combine(&self, coeffs: &[u32]) -> (Matrix, Matrix) {
        self.unpack(&self.space.combine(coeffs))
    }

    /// Coordinates of `(F, G)` in the stored basis, or `None` if it is not a morphism.
    pub fn coordinates(&self, f: &Matrix, g: &Matrix) -> Option<Vec<u32>> {
        self.space.coordinates(&self.pack(f, g))
    }

    pub fn morphism(&self, k: usize) -> ChuMorphism {
        let (f, g) = self.element(k);
        ChuMorphism { source: self.source.clone(), target: self.target.clone(), f, g }
    }
}

pub fn hom_basis(s: &ChuObject, t: &ChuObject) -> Result<HomSpace, ChuError> {
    HomSpace::new(s, t)
}

/// `s ⊸ t` together with the hom space carrying its first carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalHom {
    pub object: ChuObject,
    pub homs: HomSpace,
}

/// `s ⊸ t = (Hom(s, t), A ⊗ Y)` with `⟨(F, G), a ⊗ y⟩ = ⟨F a, y⟩ = aᵀ·Fᵀ·Q·y`.
pub fn internal_hom_full(s: &ChuObject, t: &ChuObject) -> Result<InternalHom, ChuError> {
    let homs = HomSpace::new(s, t)?;
    let field = s.field;
    let w = homs.dim();
    let mut rows = Vec::with_capacity(w);
    for k in 0..w {
        let (f, _) = homs.element(k);
        rows.push(f.transpose().mul(&t.pairing).vectorize());
    }
    let pairing = Matrix::from_rows(field, s.dim_a * t.dim_x, &rows)?;
    Ok(InternalHom { object: ChuObject::from_pairing(pairing), homs })
}

pub fn internal_hom(s: &ChuObject, t: &ChuObject) -> Result<ChuObject, ChuError> {
    Ok(internal_hom_full(s, t)?.object)
}

/// `s ⊗ t` together with the hom space `Hom(s, t*)` carrying its second carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    pub object: ChuObject,
    pub homs: HomSpace,
}

/// `s ⊗ t = (A ⊗ B, Hom(s, t*))` where a pair `(f : A → Y, g : B → X)`
/// pairs with `a ⊗ b` as `⟨a, g b⟩ = aᵀ·P·g·b`.
pub fn tensor_full(s: &ChuObject, t: &ChuObject) -> Result<Tensor, ChuError> {
    let homs = HomSpace::new(s, &t.dual())?;
    let field = s.field;
    let w = homs.dim();
    let n = s.dim_a * t.dim_a;
    let mut pairing = Matrix::zeros(field, n, w);
    for k in 0..w {
        let (_, g) = homs.element(k);
        let pg = s.pairing.mul(&g).vectorize();
        for (idx, &e) in pg.iter().enumerate() {
            pairing.set(idx, k, e);
        }
    }
    Ok(Tensor { object: ChuObject::from_pairing(pairing), homs })
}

pub fn tensor(s: &ChuObject, t: &ChuObject) -> Result<ChuObject, ChuError> {
    Ok(tensor_full(s, t)?.object)
}

/// Outcome of recovering `G` from `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recovered {
    Unique(Matrix),
    /// `particular` is one solution; every column may be shifted by any
    /// vector of `column_kernel` (the kernel of P).
    NonUnique { particular: Matrix, column_kernel: Subspace },
}

impl Recovered {
    pub fn particular(&self) -> &Matrix {
        match self {
            Recovered::Unique(g) => g,
            Recovered::NonUnique { particular, .. } => particular,
        }
    }
}

/// Solves `P·G = Fᵀ·Q` for `G`.
pub fn recover_g(s: &ChuObject, t: &ChuObject, f: &Matrix) -> Result<Recovered, ChuError> {
    same_field(s.field, t.field)?;
    if f.shape() != (t.dim_a, s.dim_a) {
        return Err(ChuError::Shape { expected: (t.dim_a, s.dim_a), found: f.shape() });
    }
    let rhs = f.transpose().mul(&t.pairing);
    let mut g = Matrix::zeros(s.field, s.dim_x, t.dim_x);
    for j in 0..t.dim_x {
        let col = solve(&s.pairing, &rhs.column(j))?.ok_or(ChuError::NotAMorphism { column: j })?;
        for (i, &e) in col.iter().enumerate() {
            g.set(i, j, e);
        }
    }
    let ker = kernel(&s.pairing);
    if ker.dim() == 0 || t.dim_x == 0 {
        Ok(Recovered::Unique(g))
    } else {
        Ok(Recovered::NonUnique { particular: g, column_kernel: ker })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn obj(p: u64, a: usize, x: usize, e: &[i64]) -> ChuObject {
        ChuObject::from_pairing(Matrix::from_ints(f(p), a, x, e).unwrap())
    }

    fn mat(p: u64, r: usize, c: usize, e: &[i64]) -> Matrix {
        Matrix::from_ints(f(p), r, c, e).unwrap()
    }

    /// Brute-force count of all (F, G) grids over F_2 satisfying the morphism condition.
    fn enumerate_homs_f2(s: &ChuObject, t: &ChuObject) -> usize {
        let nf = t.dim_a() * s.dim_a();
        let ng = s.dim_x() * t.dim_x();
        let mut count = 0;
        for bits in 0u64..(1 << (nf + ng)) {
            let fe: Vec<u32> = (0..nf).map(|k| ((bits >> k) & 1) as u32).collect();
            let ge: Vec<u32> = (0..ng).map(|k| ((bits >> (nf + k)) & 1) as u32).collect();
            let fm = Matrix::new(f(2), t.dim_a(), s.dim_a(), fe).unwrap();
            let gm = Matrix::new(f(2), s.dim_x(), t.dim_x(), ge).unwrap();
            if adjointness_defect(s, t, &fm, &gm).is_none() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn validate_object_examples() {
        assert!(ChuObject::new(f(2), 2, 3, Matrix::zeros(f(2), 2, 3)).is_ok());
        assert!(matches!(ChuObject::new(f(2), 2, 3, Matrix::zeros(f(2), 3, 2)), Err(ChuError::Shape { .. })));
        assert!(ChuObject::new(f(2), 0, 0, Matrix::zeros(f(2), 0, 0)).is_ok());
        assert!(ChuObject::new(f(2), 1, 1, Matrix::zeros(f(3), 1, 1)).is_err());
    }

    #[test]
    fn eval_pairing_examples() {
        assert_eq!(obj(2, 1, 1, &[1]).eval_pairing(&[1], &[1]).unwrap(), 1);
        let o = obj(5, 2, 2, &[1, 0, 0, 2]);
        assert_eq!(o.eval_pairing(&[0, 0], &[3, 4]).unwrap(), 0);
        assert_eq!(o.eval_pairing(&[1, 1], &[1, 1]).unwrap(), 3);
        assert!(o.eval_pairing(&[1], &[1, 1]).is_err());
    }

    #[test]
    fn validate_morphism_examples() {
        let u = obj(2, 1, 1, &[1]);
        assert!(ChuMorphism::identity(&u).validate().is_ok());
        let bad = ChuMorphism::new(u.clone(), u.clone(), mat(2, 1, 1, &[1]), mat(2, 1, 1, &[0]));
        assert_eq!(bad, Err(ChuError::AdjointnessViolated { row: 0, col: 0 }));
        let u5 = obj(5, 1, 1, &[1]);
        assert!(ChuMorphism::new(u5.clone(), u5.clone(), mat(5, 1, 1, &[2]), mat(5, 1, 1, &[2])).is_ok());
    }

    #[test]
    fn compose_examples() {
        let u5 = obj(5, 1, 1, &[1]);
        let id = ChuMorphism::identity(&u5);
        assert_eq!(compose(&id, &id).unwrap(), id);
        let two = ChuMorphism::new(u5.clone(), u5.clone(), mat(5, 1, 1, &[2]), mat(5, 1, 1, &[2])).unwrap();
        let three = ChuMorphism::new(u5.clone(), u5.clone(), mat(5, 1, 1, &[3]), mat(5, 1, 1, &[3])).unwrap();
        assert_eq!(compose(&two, &id).unwrap(), two);
        let c = compose(&three, &two).unwrap();
        assert_eq!(c.f(), &mat(5, 1, 1, &[1]));
        assert_eq!(c.g(), &mat(5, 1, 1, &[1]));
        let other = ChuMorphism::identity(&obj(5, 2, 1, &[1, 0]));
        assert_eq!(compose(&other, &two), Err(ChuError::BoundaryMismatch));
    }

    #[test]
    fn dual_examples() {
        let o = obj(3, 2, 3, &[1, 2, 0, 0, 1, 1]);
        let d = o.dual();
        assert_eq!((d.dim_a(), d.dim_x()), (3, 2));
        assert_eq!(d.pairing(), &o.pairing().transpose());
        assert_eq!(d.dual(), o);
        let u = unit_object(f(3));
        assert_eq!(u.dual(), u);
    }

    #[test]
    fn flag_examples() {
        let i2 = ChuObject::from_pairing(Matrix::identity(f(2), 2));
        assert_eq!(i2.flags(), SepExtFlags { separated: true, extensional: true });
        assert_eq!(obj(2, 1, 1, &[0]).flags(), SepExtFlags { separated: false, extensional: false });
        assert_eq!(obj(2, 1, 2, &[1, 0]).flags(), SepExtFlags { separated: true, extensional: false });
    }

    #[test]
    fn reflect_examples() {
        let sep = obj(3, 1, 2, &[1, 2]);
        let r = reflect(&sep, Side::Separated);
        assert_eq!(r.object, sep);
        assert_eq!(r.morphism, ChuMorphism::identity(&sep));

        let o = obj(2, 2, 1, &[0, 1]);
        let r = reflect(&o, Side::Separated);
        assert_eq!(r.object, obj(2, 1, 1, &[1]));
        assert!(r.morphism.validate().is_ok());

        let o = obj(2, 1, 2, &[1, 0]);
        let r = reflect(&o, Side::Extensional);
        assert_eq!(r.object, obj(2, 1, 1, &[1]));
        assert!(r.morphism.validate().is_ok());
    }

    #[test]
    fn hom_basis_examples() {
        let u = unit_object(f(2));
        let h = hom_basis(&u, &u).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.element(0), (mat(2, 1, 1, &[1]), mat(2, 1, 1, &[1])));

        let t = obj(3, 3, 2, &[1, 0, 2, 1, 0, 0]);
        assert_eq!(hom_basis(&unit_object(f(3)), &t).unwrap().dim(), 3);

        let zero = obj(3, 0, 0, &[]);
        assert_eq!(hom_basis(&t, &zero).unwrap().dim(), 0);
    }

    #[test]
    fn internal_hom_examples() {
        let u = unit_object(f(2));
        assert_eq!(internal_hom(&u, &u).unwrap(), u);
        // (1,1,[0]) ⊸ unit: Fᵀ = 0·G forces F = 0, G free
        let z = obj(2, 1, 1, &[0]);
        let h = internal_hom(&z, &u).unwrap();
        assert_eq!(h.dim_a(), enumerate_homs_f2(&z, &u).trailing_zeros() as usize);
        assert_eq!(h.dim_a(), 1);
    }

    #[test]
    fn tensor_examples() {
        let u = unit_object(f(5));
        assert_eq!(tensor(&u, &u).unwrap(), u);
    }

    #[test]
    fn recover_g_examples() {
        let s = ChuObject::from_pairing(Matrix::identity(f(3), 2));
        let t = obj(3, 1, 2, &[1, 1]);
        let r = recover_g(&s, &t, &Matrix::zeros(f(3), 1, 2)).unwrap();
        assert_eq!(r, Recovered::Unique(Matrix::zeros(f(3), 2, 2)));

        let u = unit_object(f(2));
        assert_eq!(recover_g(&u, &u, &mat(2, 1, 1, &[1])).unwrap(), Recovered::Unique(mat(2, 1, 1, &[1])));

        let z = obj(2, 1, 1, &[0]);
        assert_eq!(recover_g(&z, &u, &mat(2, 1, 1, &[1])), Err(ChuError::NotAMorphism { column: 0 }));
        assert!(matches!(recover_g(&z, &u, &mat(2, 1, 1, &[0])).unwrap(), Recovered::NonUnique { .. }));
    }

    #[test]
    fn json_round_trip_and_rejects_bad_shapes() {
        let o = obj(5, 2, 1, &[3, 4]);
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(s, r#"{"p":5,"dimA":2,"dimX":1,"P":[3,4]}"#);
        assert_eq!(serde_json::from_str::<ChuObject>(&s).unwrap(), o);
        assert!(serde_json::from_str::<ChuObject>(r#"{"p":5,"dimA":2,"dimX":2,"P":[3,4]}"#).is_err());
        assert!(serde_json::from_str::<ChuObject>(r#"{"p":4,"dimA":0,"dimX":0,"P":[]}"#).is_err());
        let m = ChuMorphism::identity(&o);
        let j = serde_json::to_string(&ChuMorphismJson::from(&m)).unwrap();
        let back: ChuMorphismJson = serde_json::from_str(&j).unwrap();
        assert_eq!(ChuMorphism::try_from(back).unwrap(), m);
    }

    fn all_f2_objects(max_total: usize) -> Vec<ChuObject> {
        let mut out = Vec::new();
        for a in 0..=max_total {
            for x in 0..=(max_total - a) {
                for bits in 0u32..(1 << (a * x)) {
                    let e: Vec<u32> = (0..a * x).map(|k| (bits >> k) & 1).collect();
                    out.push(ChuObject::from_pairing(Matrix::new(f(2), a, x, e).unwrap()));
                }
            }
        }
        out
    }

    #[test]
    fn hom_dimension_matches_enumeration_f2() {
        // total carrier dims of each object ≤ 2, so at most 2·2 + 2·2 = 8 unknowns... capped at 12 bits
        let objs = all_f2_objects(2);
        for s in &objs {
            for t in &objs {
                let unknowns = t.dim_a() * s.dim_a() + s.dim_x() * t.dim_x();
                if unknowns > 12 {
                    continue;
                }
                let count = enumerate_homs_f2(s, t);
                let h = hom_basis(s, t).unwrap();
                assert_eq!(count, 1 << h.dim(), "{s:?} → {t:?}");
                assert_eq!(internal_hom(s, t).unwrap().dim_a(), h.dim());
            }
        }
    }

    #[test]
    fn recover_g_succeeds_exactly_on_hom_first_components() {
        let objs = all_f2_objects(2);
        for s in &objs {
            for t in &objs {
                let nf = t.dim_a() * s.dim_a();
                let h = hom_basis(s, t).unwrap();
                for bits in 0u32..(1 << nf) {
                    let fe: Vec<u32> = (0..nf).map(|k| (bits >> k) & 1).collect();
                    let fm = Matrix::new(f(2), t.dim_a(), s.dim_a(), fe).unwrap();
                    // is there a pair in the hom space with this F?
                    let in_hom = (0u32..(1 << h.dim())).any(|c| {
                        let coeffs: Vec<u32> = (0..h.dim()).map(|k| (c >> k) & 1).collect();
                        h.combine(&coeffs).0 == fm
                    });
                    match recover_g(s, t, &fm) {
                        Ok(r) => {
                            assert!(in_hom);
                            assert!(ChuMorphism::new(s.clone(), t.clone(), fm.clone(), r.particular().clone()).is_ok());
                        }
                        Err(ChuError::NotAMorphism { .. }) => assert!(!in_hom),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    fn arb_object(p: u64, max: usize) -> impl Strategy<Value = ChuObject> {
        (0..=max, 0..=max).prop_flat_map(move |(a, x)| {
            prop::collection::vec(0u32..p as u32, a * x)
                .prop_map(move |e| ChuObject::from_pairing(Matrix::new(FieldSpec::new(p).unwrap(), a, x, e).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn dual_is_an_involution(o in arb_object(3, 4)) {
            prop_assert_eq!(o.dual().dual(), o);
        }

        #[test]
        fn reflections_behave(o in arb_object(3, 4)) {
            let s = reflect(&o, Side::Separated);
            let e = reflect(&o, Side::Extensional);
            prop_assert!(s.object.is_separated());
            prop_assert!(e.object.is_extensional());
            prop_assert!(s.morphism.validate().is_ok());
            prop_assert!(e.morphism.validate().is_ok());
            if o.is_extensional() {
                prop_assert!(s.object.is_extensional());
            }
            if o.is_separated() {
                prop_assert!(e.object.is_separated());
            }
            let se = separated_reflection(&extensional_coreflection(&o));
            let es = extensional_coreflection(&separated_reflection(&o));
            prop_assert!(se.is_separated() && se.is_extensional());
            prop_assert!(es.is_separated() && es.is_extensional());
        }

        #[test]
        fn hom_elements_are_morphisms_and_compose(s in arb_object(2, 3), t in arb_object(2, 3), u in arb_object(2, 3)) {
            let h1 = hom_basis(&s, &t).unwrap();
            let h2 = hom_basis(&t, &u).unwrap();
            let h3 = hom_basis(&u, &s).unwrap();
            for k in 0..h1.dim() {
                prop_assert!(h1.morphism(k).validate().is_ok());
            }
            if h1.dim() > 0 && h2.dim() > 0 && h3.dim() > 0 {
                let m1 = h1.morphism(0);
                let m2 = h2.morphism(h2.dim() - 1);
                let m3 = h3.morphism(0);
                let c = compose(&m2, &m1).unwrap();
                prop_assert!(c.validate().is_ok());
                let left = compose(&m3, &c).unwrap();
                let right = compose(&compose(&m3, &m2).unwrap(), &m1).unwrap();
                prop_assert_eq!(left, right);
            }
        }

        #[test]
        fn hom_and_tensor_flags_on_general_inputs(s in arb_object(3, 3), t in arb_object(3, 3)) {
            let h = internal_hom(&s, &t).unwrap();
            if s.is_extensional() && t.is_separated() {
                prop_assert!(h.is_separated());
            }
            let x = tensor(&s, &t).unwrap();
            if s.is_extensional() && t.is_extensional() {
                prop_assert!(x.is_extensional());
            }
        }
    }
}
