//! Modules over `K = F_p[x]/(xⁿ)` and Chu objects over them.
//!
//! A module is `F_p^d` with a nilpotent operator `X` for the action of `x`
//! on column vectors. The cyclic module `K/(xⁱ)` uses the basis
//! `m, xm, …, x^{i−1}m`, so its operator is the subdiagonal shift.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kernel, kron, solve, FieldSpec, LinalgError, Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("nilpotency violated: X^{n} ≠ 0")]
    NilpotencyViolated { n: usize },
    #[error("cyclic index {i} outside 1..={n}")]
    Range { i: usize, n: usize },
    #[error("modules live over different rings")]
    RingMismatch,
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("map does not commute with the x-action")]
    NotKLinear,
    #[error("no extension exists")]
    NoExtension,
    #[error("pairing is not K-bilinear at component {t}")]
    BilinearityViolated { t: usize },
    #[error("kernel is not x-invariant")]
    NotInvariant,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub field: FieldSpec,
    pub n: usize,
}

impl RingSpec {
    pub fn new(p: u64, n: usize) -> Result<Self, ModError> {
        if n == 0 {
            return Err(ModError::Range { i: 0, n: 0 });
        }
        Ok(RingSpec { field: FieldSpec::new(p)?, n })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NilModule {
    ring: RingSpec,
    x: Matrix,
}

fn mat_pow(m: &Matrix, k: usize) -> Matrix {
    (0..k).fold(Matrix::identity(m.field(), m.rows()), |acc, _| acc.mul(m))
}

impl NilModule {
    pub fn new(ring: RingSpec, x: Matrix) -> Result<Self, ModError> {
        let m = NilModule { ring, x };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ModError> {
        if self.x.rows() != self.x.cols() {
            return Err(ModError::Shape { expected: (self.x.rows(), self.x.rows()), found: self.x.shape() });
        }
        if self.x.field() != self.ring.field {
            return Err(ModError::RingMismatch);
        }
        if !mat_pow(&self.x, self.ring.n).is_zero() {
            return Err(ModError::NilpotencyViolated { n: self.ring.n });
        }
        Ok(())
    }

    pub fn zero(ring: RingSpec) -> Self {
        NilModule { ring, x: Matrix::zeros(ring.field, 0, 0) }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn action(&self) -> &Matrix {
        &self.x
    }

    /// Smallest `k` with `X^k = 0`.
    pub fn exponent(&self) -> usize {
        let mut p = Matrix::identity(self.field(), self.dim());
        for k in 0..=self.ring.n {
            if p.is_zero() {
                return k;
            }
            p = p.mul(&self.x);
        }
        unreachable!("validated nilpotent")
    }

    pub fn direct_sum(&self, other: &NilModule) -> Result<NilModule, ModError> {
        same_ring(self, other)?;
        Ok(NilModule { ring: self.ring, x: self.x.block_diag(&other.x) })
    }

    /// `Kʳ`.
    pub fn free(ring: RingSpec, r: usize) -> NilModule {
        (0..r).fold(NilModule::zero(ring), |acc, _| acc.direct_sum(&regular(ring)).expect("same ring"))
    }

    /// The submodule spanned by the columns of `basis` (assumed x-stable and
    /// independent), with the restricted action.
    fn restrict_to(&self, basis: &Matrix) -> Result<NilModule, ModError> {
        let k = basis.cols();
        let image = self.x.mul(basis);
        let mut x = Matrix::zeros(self.field(), k, k);
        for j in 0..k {
            let c = solve(basis, &image.column(j))?.ok_or(ModError::NotInvariant)?;
            for (i, &e) in c.iter().enumerate() {
                x.set(i, j, e);
            }
        }
        NilModule::new(self.ring, x)
    }
}

fn same_ring(a: &NilModule, b: &NilModule) -> Result<(), ModError> {
    if a.ring != b.ring {
        return Err(ModError::RingMismatch);
    }
    Ok(())
}

pub fn validate_module(m: &NilModule) -> Result<(), ModError> {
    m.validate()
}

#[derive(Serialize, Deserialize)]
pub struct NilModuleJson {
    pub p: u64,
    pub n: usize,
    pub dim: usize,
    #[serde(rename = "X")]
    pub x: Vec<i64>,
}

impl Serialize for NilModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NilModuleJson {
            p: self.ring.field.p() as u64,
            n: self.ring.n,
            dim: self.dim(),
            x: self.x.entries().iter().map(|&e| e as i64).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NilModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = NilModuleJson::deserialize(d)?;
        let ring = RingSpec::new(j.p, j.n).map_err(serde::de::Error::custom)?;
        let x = Matrix::from_ints(ring.field, j.dim, j.dim, &j.x).map_err(serde::de::Error::custom)?;
        NilModule::new(ring, x).map_err(serde::de::Error::custom)
    }
}

/// `K/(xⁱ)` with basis `m, xm, …, x^{i−1}m`.
pub fn cyclic(ring: RingSpec, i: usize) -> Result<NilModule, ModError> {
    if i == 0 || i > ring.n {
        return Err(ModError::Range { i, n: ring.n });
    }
    let mut x = Matrix::zeros(ring.field, i, i);
    for j in 0..i.saturating_sub(1) {
        x.set(j + 1, j, 1);
    }
    Ok(NilModule { ring, x })
}

/// The regular module K.
pub fn regular(ring: RingSpec) -> NilModule {
    cyclic(ring, ring.n).expect("n ≥ 1")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLinearMap {
    source: NilModule,
    target: NilModule,
    f: Matrix,
}

impl KLinearMap {
    pub fn new(source: NilModule, target: NilModule, f: Matrix) -> Result<Self, ModError> {
        same_ring(&source, &target)?;
        if f.shape() != (target.dim(), source.dim()) {
            return Err(ModError::Shape { expected: (target.dim(), source.dim()), found: f.shape() });
        }
        if f.mul(&source.x) != target.x.mul(&f) {
            return Err(ModError::NotKLinear);
        }
        Ok(KLinearMap { source, target, f })
    }

    pub fn identity(m: &NilModule) -> Self {
        KLinearMap { source: m.clone(), target: m.clone(), f: Matrix::identity(m.field(), m.dim()) }
    }

    pub fn source(&self) -> &NilModule {
        &self.source
    }

    pub fn target(&self) -> &NilModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.f
    }

    pub fn is_injective(&self) -> bool {
        self.f.rank() == self.source.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.f.is_invertible()
    }

    pub fn compose(&self, first: &KLinearMap) -> Result<KLinearMap, ModError> {
        if first.target != self.source {
            return Err(ModError::RingMismatch);
        }
        Ok(KLinearMap { source: first.source.clone(), target: self.target.clone(), f: self.f.mul(&first.f) })
    }
}

/// The equations `F·X₁ − X₂·F = 0` on `vec_r(F)`.
fn commutation_system(m1: &NilModule, m2: &NilModule) -> Matrix {
    let field = m1.field();
    let a = kron(&Matrix::identity(field, m2.dim()), &m1.x.transpose()).expect("same field");
    let b = kron(&m2.x, &Matrix::identity(field, m1.dim())).expect("same field");
    a.sub(&b)
}

/// `Hom_K(m1, m2)` as a subspace of row-major vectorized `d₂ × d₁` matrices.
pub fn hom_k_basis(m1: &NilModule, m2: &NilModule) -> Result<Subspace, ModError> {
    same_ring(m1, m2)?;
    Ok(kernel(&commutation_system(m1, m2)))
}

/// The basis of [`hom_k_basis`] as maps.
pub fn hom_k_maps(m1: &NilModule, m2: &NilModule) -> Result<Vec<KLinearMap>, ModError> {
    let h = hom_k_basis(m1, m2)?;
    (0..h.dim())
        .map(|k| {
            let f = Matrix::new(m1.field(), m2.dim(), m1.dim(), h.basis_vector(k).to_vec())?;
            Ok(KLinearMap { source: m1.clone(), target: m2.clone(), f })
        })
        .collect()
}

/// An isomorphism `m1 → m2` by exhaustive search over `Hom_K` (small cases).
pub fn find_iso(m1: &NilModule, m2: &NilModule) -> Result<Option<KLinearMap>, ModError> {
    if m1.dim() != m2.dim() {
        return Ok(None);
    }
    let h = hom_k_basis(m1, m2)?;
    let p = m1.field().p();
    let mut coeffs = vec![0u32; h.dim()];
    loop {
        let f = Matrix::new(m1.field(), m2.dim(), m1.dim(), h.combine(&coeffs))?;
        if f.is_invertible() {
            return Ok(Some(KLinearMap { source: m1.clone(), target: m2.clone(), f }));
        }
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                return Ok(None);
            }
            coeffs[k] += 1;
            if coeffs[k] == p {
                coeffs[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }
}

/// `Hom_k(M, k)` with `(x·f)(a) = f(x·a)`, i.e. action `Xᵀ`.
pub fn dual_module(m: &NilModule) -> NilModule {
    NilModule { ring: m.ring, x: m.x.transpose() }
}

/// Offset of the Frobenius pairing on K: `f(xⁱ)(xʲ) = 1` iff `i + j = n − 1`.
/// Exponents run over `0..n`, so the offset `n` would send `f(1)` to zero and
/// the map would not be injective.
pub const SELF_DUAL_OFFSET_FROM_N: usize = 1;

fn antidiagonal(ring: RingSpec, total: usize) -> Matrix {
    let n = ring.n;
    let mut f = Matrix::zeros(ring.field, n, n);
    for i in 0..n {
        for j in 0..n {
            if i + j == total {
                // column i is f(xⁱ) in the dual basis
                f.set(j, i, 1);
            }
        }
    }
    f
}

/// `K ≅ Hom_k(K, k)`.
pub fn self_dual_iso(ring: RingSpec) -> KLinearMap {
    let k = regular(ring);
    let f = antidiagonal(ring, ring.n - SELF_DUAL_OFFSET_FROM_N);
    KLinearMap::new(k.clone(), dual_module(&k), f).expect("the anti-diagonal commutes with the shift")
}

/// Solves for `ψ : B → T` with `ψ ∘ incl = φ` and `ψ` K-linear.
/// Free parameters are set to zero.
pub fn extend_hom(incl: &KLinearMap, phi: &KLinearMap) -> Result<KLinearMap, ModError> {
    if incl.source != phi.source {
        return Err(ModError::RingMismatch);
    }
    let b = &incl.target;
    let t = &phi.target;
    let field = b.field();
    let equivariance = commutation_system(b, t);
    // vec_r(ψ·F) = (I ⊗ Fᵀ)·vec_r(ψ)
    let restriction = kron(&Matrix::identity(field, t.dim()), &incl.f.transpose())?;
    let system = equivariance.vstack(&restriction);
    let mut rhs = vec![0u32; equivariance.rows()];
    rhs.extend_from_slice(&phi.f.vectorize());
    let sol = solve(&system, &rhs)?.ok_or(ModError::NoExtension)?;
    let psi = Matrix::new(field, t.dim(), b.dim(), sol)?;
    KLinearMap::new(b.clone(), t.clone(), psi)
}

/// `K/(xⁱ) → K`, `xʲm ↦ x^{n−i+j}`.
pub fn embed_cyclic(ring: RingSpec, i: usize) -> Result<KLinearMap, ModError> {
    let c = cyclic(ring, i)?;
    let n = ring.n;
    let mut f = Matrix::zeros(ring.field, n, i);
    for j in 0..i {
        f.set(n - i + j, j, 1);
    }
    KLinearMap::new(c, regular(ring), f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CogeneratorEmbedding {
    pub r: usize,
    /// Orders of the cyclic summands split off, in order.
    pub orders: Vec<usize>,
    pub map: KLinearMap,
}

/// Embeds `m` into `Kʳ` by splitting off cyclic summands of maximal order.
pub fn cogenerator_embed(m: &NilModule) -> Result<CogeneratorEmbedding, ModError> {
    let ring = m.ring;
    let field = m.field();
    if m.dim() == 0 {
        let map = KLinearMap::new(m.clone(), NilModule::zero(ring), Matrix::zeros(field, 0, 0))?;
        return Ok(CogeneratorEmbedding { r: 0, orders: vec![], map });
    }
    let e = m.exponent();
    let top = mat_pow(&m.x, e - 1);
    let j = (0..m.dim()).find(|&j| top.column(j).iter().any(|&v| v != 0)).expect("X^{e−1} ≠ 0");
    // ι : K/(x^e) → m, xᵗ ↦ Xᵗ v
    let mut iota = Matrix::zeros(field, m.dim(), e);
    let mut v: Vec<u32> = (0..m.dim()).map(|i| u32::from(i == j)).collect();
    for t in 0..e {
        for (i, &vi) in v.iter().enumerate() {
            iota.set(i, t, vi);
        }
        v = m.x.apply(&v);
    }
    let c = cyclic(ring, e)?;
    let iota = KLinearMap::new(c.clone(), m.clone(), iota)?;
    // x^e kills m, so K/(x^e) is self-injective over k[x]/(x^e) and the retraction exists
    let rho = extend_hom(&iota, &KLinearMap::identity(&c))?;
    if rho.f.mul(&iota.f) != Matrix::identity(field, e) {
        return Err(ModError::NoExtension);
    }
    let ker = kernel(&rho.f);
    let ker_basis = ker.basis().transpose();
    let rest = m.restrict_to(&ker_basis)?;
    let sub = cogenerator_embed(&rest)?;
    // m → ker ρ, a ↦ coordinates of a − ιρa
    let proj = Matrix::identity(field, m.dim()).sub(&iota.f.mul(&rho.f));
    let mut to_ker = Matrix::zeros(field, ker.dim(), m.dim());
    for col in 0..m.dim() {
        let w = proj.column(col);
        let coords = ker.coordinates(&w).ok_or(ModError::NotInvariant)?;
        for (i, &ci) in coords.iter().enumerate() {
            to_ker.set(i, col, ci);
        }
    }
    let head = embed_cyclic(ring, e)?.f.mul(&rho.f);
    let tail = sub.map.f.mul(&to_ker);
    let f = head.vstack(&tail);
    let r = 1 + sub.r;
    let map = KLinearMap::new(m.clone(), NilModule::free(ring, r), f)?;
    if !map.is_injective() {
        return Err(ModError::NotInvariant);
    }
    let mut orders = vec![e];
    orders.extend(sub.orders);
    Ok(CogeneratorEmbedding { r, orders, map })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorK {
    pub module: NilModule,
    /// `m1 ⊗_k m2 → m1 ⊗_K m2`.
    pub quotient: Matrix,
    /// A linear right inverse of `quotient`.
    pub section: Matrix,
}

/// `m1 ⊗_K m2`: the k-tensor modulo `(Xa)⊗b − a⊗(Xb)`.
pub fn tensor_k_full(m1: &NilModule, m2: &NilModule) -> Result<TensorK, ModError> {
    same_ring(m1, m2)?;
    let field = m1.field();
    let i1 = Matrix::identity(field, m1.dim());
    let i2 = Matrix::identity(field, m2.dim());
    let x_left = kron(&m1.x, &i2)?;
    let relations = x_left.sub(&kron(&i1, &m2.x)?);
    let image = Subspace::span(&relations.transpose());
    let quotient = image.quotient_map();
    let section = image.quotient_section();
    let x = quotient.mul(&x_left).mul(&section);
    Ok(TensorK { module: NilModule::new(m1.ring, x)?, quotient, section })
}

pub fn tensor_k(m1: &NilModule, m2: &NilModule) -> Result<NilModule, ModError> {
    Ok(tensor_k_full(m1, m2)?.module)
}

/// Independent dimension count: `dim (m1 ⊗_K m2) = dim` of the balanced
/// bilinear forms `B` with `X₁ᵀB = BX₂`.
pub fn tensor_k_dim_oracle(m1: &NilModule, m2: &NilModule) -> Result<usize, ModError> {
    // balanced forms are K-maps m2 → dual(m1)
    Ok(hom_k_basis(m2, &dual_module(m1))?.dim())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaerReport {
    pub hom_to_dual: usize,
    pub functionals_on_tensor: usize,
    pub dim_b: usize,
}

/// `Hom_K(B, Hom_k(K, k)) ≅ Hom_k(K ⊗_K B, k)` via `f ↦ (r ⊗ b ↦ f(b)(r))`.
pub fn baer_adjunction_check(b: &NilModule) -> Result<BaerReport, String> {
    let ring = b.ring;
    let field = b.field();
    let k = regular(ring);
    let lhs = hom_k_maps(b, &dual_module(&k)).map_err(|e| e.to_string())?;
    let t = tensor_k_full(&k, b).map_err(|e| e.to_string())?;
    let rhs_dim = t.module.dim();
    let db = b.dim();
    let mut images = Matrix::zeros(field, rhs_dim, lhs.len());
    for (idx, f) in lhs.iter().enumerate() {
        let mut g = vec![0u32; ring.n * db];
        for r in 0..ring.n {
            for j in 0..db {
                g[r * db + j] = f.f.get(r, j);
            }
        }
        // g must vanish on the relations, i.e. g = h ∘ quotient
        let h = t.section.apply_left(&g);
        if t.quotient.apply_left(&h) != g {
            return Err(format!("image of basis map {idx} is not balanced"));
        }
        for (i, &e) in h.iter().enumerate() {
            images.set(i, idx, e);
        }
    }
    if lhs.len() != rhs_dim || rhs_dim != db {
        return Err(format!("dimensions {} / {} / {}", lhs.len(), rhs_dim, db));
    }
    if images.rank() != lhs.len() {
        return Err("the adjunction map is not injective".into());
    }
    Ok(BaerReport { hom_to_dual: lhs.len(), functionals_on_tensor: rhs_dim, dim_b: db })
}

/// A K-bilinear pairing `M × N → K`, `⟨a, b⟩ = Σₜ (aᵀPₜb)·xᵗ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChuKObject {
    pub m: NilModule,
    pub n: NilModule,
    pub components: Vec<Matrix>,
}

pub fn chuk_validate(o: &ChuKObject) -> Result<(), ModError> {
    same_ring(&o.m, &o.n)?;
    let ring = o.m.ring;
    if o.components.len() != ring.n {
        return Err(ModError::Shape { expected: (ring.n, 0), found: (o.components.len(), 0) });
    }
    for (t, p) in o.components.iter().enumerate() {
        if p.shape() != (o.m.dim(), o.n.dim()) {
            return Err(ModError::Shape { expected: (o.m.dim(), o.n.dim()), found: p.shape() });
        }
        let prev = if t == 0 { Matrix::zeros(ring.field, o.m.dim(), o.n.dim()) } else { o.components[t - 1].clone() };
        if o.m.x.transpose().mul(p) != prev || p.mul(&o.n.x) != prev {
            return Err(ModError::BilinearityViolated { t });
        }
    }
    Ok(())
}

impl ChuKObject {
    pub fn new(m: NilModule, n: NilModule, components: Vec<Matrix>) -> Result<Self, ModError> {
        let o = ChuKObject { m, n, components };
        chuk_validate(&o)?;
        Ok(o)
    }

    /// All components from the top one: `Pₜ = (X_Mᵀ)^{n−1−t}·P_{n−1}`.
    pub fn from_top(m: NilModule, n: NilModule, top: Matrix) -> Result<Self, ModError> {
        let ring = m.ring;
        let mut comps = vec![top];
        for _ in 1..ring.n {
            let next = m.x.transpose().mul(comps.last().expect("nonempty"));
            comps.push(next);
        }
        comps.reverse();
        ChuKObject::new(m, n, comps)
    }

    /// `⟨a, b⟩ = ab` on `K × K`.
    pub fn regular(ring: RingSpec) -> Self {
        let k = regular(ring);
        let comps = (0..ring.n).map(|t| antidiagonal(ring, t)).collect();
        ChuKObject::new(k.clone(), k, comps).expect("multiplication is bilinear")
    }

    fn stacked(&self) -> Matrix {
        let field = self.m.field();
        self.components.iter().fold(Matrix::zeros(field, self.m.dim(), 0), |acc, p| acc.hstack(p))
    }

    fn left_kernel(&self) -> Subspace {
        kernel(&self.stacked().transpose())
    }

    fn right_kernel(&self) -> Subspace {
        let field = self.m.field();
        let stacked = self.components.iter().fold(Matrix::zeros(field, 0, self.n.dim()), |acc, p| acc.vstack(p));
        kernel(&stacked)
    }

    pub fn is_separated(&self) -> bool {
        self.left_kernel().dim() == 0
    }

    pub fn is_extensional(&self) -> bool {
        self.right_kernel().dim() == 0
    }
}

pub fn chuk_dual(o: &ChuKObject) -> ChuKObject {
    ChuKObject { m: o.n.clone(), n: o.m.clone(), components: o.components.iter().map(Matrix::transpose).collect() }
}

fn is_invariant(sub: &Subspace, x: &Matrix) -> bool {
    (0..sub.dim()).all(|k| sub.contains(&x.apply(sub.basis_vector(k))))
}

/// Quotients M by the left kernel (`Side::Separated`) or N by the right
/// kernel (`Side::Extensional`), returning the reduced object and the
/// quotient map.
pub fn chuk_reduce(o: &ChuKObject, side: crate::chu::Side) -> Result<(ChuKObject, Matrix), ModError> {
    use crate::chu::Side;
    match side {
        Side::Separated => {
            let ker = o.left_kernel();
            if !is_invariant(&ker, &o.m.x) {
                return Err(ModError::NotInvariant);
            }
            let (q, s) = (ker.quotient_map(), ker.quotient_section());
            let m = NilModule::new(o.m.ring, q.mul(&o.m.x).mul(&s))?;
            let comps = o.components.iter().map(|p| s.transpose().mul(p)).collect();
            Ok((ChuKObject::new(m, o.n.clone(), comps)?, q))
        }
        Side::Extensional => {
            let ker = o.right_kernel();
            if !is_invariant(&ker, &o.n.x) {
                return Err(ModError::NotInvariant);
            }
            let (q, s) = (ker.quotient_map(), ker.quotient_section());
            let n = NilModule::new(o.n.ring, q.mul(&o.n.x).mul(&s))?;
            let comps = o.components.iter().map(|p| p.mul(&s)).collect();
            Ok((ChuKObject::new(o.m.clone(), n, comps)?, q))
        }
    }
}

/// Morphisms `(F, G)`: `F : M → M'` and `G : N' → N` K-linear with
/// `Fᵀ·Q_t = P_t·G` for every t. Vectorized `[vec_r F, vec_r G]`.
pub fn chuk_hom_basis(s: &ChuKObject, t: &ChuKObject) -> Result<Subspace, ModError> {
    same_ring(&s.m, &t.m)?;
    let field = s.m.field();
    let (da, dx) = (s.m.dim(), s.n.dim());
    let (db, dy) = (t.m.dim(), t.n.dim());
    let nf = db * da;
    let ng = dx * dy;
    let mut rows = Vec::new();
    for (p, q) in s.components.iter().zip(&t.components) {
        for i in 0..da {
            for j in 0..dy {
                let mut r = vec![0u32; nf + ng];
                for k in 0..db {
                    r[k * da + i] = q.get(k, j);
                }
                for l in 0..dx {
                    r[nf + l * dy + j] = field.neg(p.get(i, l));
                }
                rows.push(r);
            }
        }
    }
    let pairing = Matrix::from_rows(field, nf + ng, &rows)?;
    let eq_f = commutation_system(&s.m, &t.m).hstack(&Matrix::zeros(field, nf, ng));
    let eq_g = Matrix::zeros(field, ng, nf).hstack(&commutation_system(&t.n, &s.n));
    Ok(kernel(&pairing.vstack(&eq_f).vstack(&eq_g)))
}

/// A module `⊕ K/(x^{bᵢ})` with random block sizes, conjugated by a random
/// invertible matrix. Returns the module and its block sizes.
pub fn random_module<R: Rng>(rng: &mut R, ring: RingSpec, max_dim: usize) -> (NilModule, Vec<usize>) {
    let field = ring.field;
    let mut blocks = Vec::new();
    let mut m = NilModule::zero(ring);
    let target = rng.gen_range(0..=max_dim);
    while m.dim() < target {
        let b = rng.gen_range(1..=ring.n.min(target - m.dim()));
        blocks.push(b);
        m = m.direct_sum(&cyclic(ring, b).expect("in range")).expect("same ring");
    }
    let d = m.dim();
    let (q, qi) = loop {
        let e = (0..d * d).map(|_| rng.gen_range(0..field.p())).collect();
        let q = Matrix::new(field, d, d, e).expect("sized");
        if let Some(qi) = q.inverse() {
            break (q, qi);
        }
    };
    let x = q.mul(&m.x).mul(&qi);
    (NilModule::new(ring, x).expect("conjugate of nilpotent"), blocks)
}

/// The submodule generated by a few random vectors, with its inclusion.
pub fn random_submodule<R: Rng>(rng: &mut R, m: &NilModule, generators: usize) -> KLinearMap {
    let field = m.field();
    let mut span = Subspace::zero(field, m.dim());
    for _ in 0..generators {
        let mut v: Vec<u32> = (0..m.dim()).map(|_| rng.gen_range(0..field.p())).collect();
        for _ in 0..m.ring.n {
            span = span.join(&Subspace::from_rows(field, m.dim(), &[v.clone()]));
            v = m.x.apply(&v);
        }
    }
    let basis = span.basis().transpose();
    let sub = m.restrict_to(&basis).expect("generated submodules are x-stable");
    KLinearMap::new(sub, m.clone(), basis).expect("inclusion")
}

/// A random element of `Hom_K(a, b)`.
pub fn random_hom<R: Rng>(rng: &mut R, a: &NilModule, b: &NilModule) -> KLinearMap {
    let h = hom_k_basis(a, b).expect("same ring");
    let coeffs: Vec<u32> = (0..h.dim()).map(|_| rng.gen_range(0..a.field().p())).collect();
    let f = Matrix::new(a.field(), b.dim(), a.dim(), h.combine(&coeffs)).expect("sized");
    KLinearMap::new(a.clone(), b.clone(), f).expect("in the hom space")
}

/// Per-trial generator for the module campaigns: keyed on (seed, tag, ring, trial).
pub fn campaign_rng(seed: u64, tag: u8, ring: RingSpec, trial: usize) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = tag;
    key[9..13].copy_from_slice(&ring.field.p().to_le_bytes());
    key[13..16].copy_from_slice(&(ring.n as u32).to_le_bytes()[..3]);
    key[16..24].copy_from_slice(&(trial as u64).to_le_bytes());
    rand_chacha::ChaCha8Rng::from_seed(key)
}

/// Random injections `A ↪ B` and maps `A → K`: each map must extend along the
/// injection and restrict back exactly. Returns the number of trials.
pub fn selfinjective_campaign(ring: RingSpec, samples: usize, max_dim: usize, seed: u64) -> Result<usize, String> {
    let k = regular(ring);
    for trial in 0..samples {
        let mut rng = campaign_rng(seed, 1, ring, trial);
        let (b, _) = random_module(&mut rng, ring, max_dim);
        let gens = rng.gen_range(1..=2);
        let incl = random_submodule(&mut rng, &b, gens);
        if !incl.is_injective() {
            return Err(format!("trial {trial}: sampled map is not injective"));
        }
        let phi = random_hom(&mut rng, incl.source(), &k);
        let psi = extend_hom(&incl, &phi).map_err(|e| format!("trial {trial}: {e}"))?;
        if psi.compose(&incl).map_err(|e| e.to_string())? != phi {
            return Err(format!("trial {trial}: extension does not restrict to φ"));
        }
    }
    Ok(samples)
}

/// `cogenerator_embed` on random modules: injective, with no more summands
/// than the module has cyclic blocks. Returns the number of trials.
pub fn cogenerator_campaign(ring: RingSpec, samples: usize, max_dim: usize, seed: u64) -> Result<usize, String> {
    for trial in 0..samples {
        let mut rng = campaign_rng(seed, 2, ring, trial);
        let (m, blocks) = random_module(&mut rng, ring, max_dim);
        check_cogenerator(&m, blocks.len()).map_err(|e| format!("trial {trial}: {e}"))?;
    }
    Ok(samples)
}

pub fn check_cogenerator(m: &NilModule, summands: usize) -> Result<CogeneratorEmbedding, String> {
    let e = cogenerator_embed(m).map_err(|e| e.to_string())?;
    if !e.map.is_injective() {
        return Err("embedding is not injective".into());
    }
    if e.r > summands {
        return Err(format!("r = {} exceeds {summands} cyclic summands", e.r));
    }
    Ok(e)
}

/// `embed_cyclic(i)` sends `xʲm` to `x^{n−i+j}` for every `i ≤ n`, is
/// injective, and is killed by `xⁱ`.
pub fn check_embed_cyclic(ring: RingSpec) -> Result<usize, String> {
    let n = ring.n;
    let k = regular(ring);
    for i in 1..=n {
        let e = embed_cyclic(ring, i).map_err(|e| e.to_string())?;
        let c = e.source();
        let mut m: Vec<u32> = (0..i).map(|t| u32::from(t == 0)).collect();
        for j in 0..i {
            let want: Vec<u32> = (0..n).map(|t| u32::from(t == n - i + j)).collect();
            if e.matrix().apply(&m) != want {
                return Err(format!("i = {i}: f(x^{j}m) ≠ x^{}", n - i + j));
            }
            m = c.action().apply(&m);
        }
        if !e.is_injective() {
            return Err(format!("i = {i}: not injective"));
        }
        if !mat_pow(k.action(), i).mul(e.matrix()).is_zero() {
            return Err(format!("i = {i}: x^{i} does not kill the image"));
        }
    }
    Ok(n)
}

/// `self_dual_iso` has rank n and commutes with the action.
pub fn check_self_dual(ring: RingSpec) -> Result<(), String> {
    let f = self_dual_iso(ring);
    let k = regular(ring);
    if f.matrix().rank() != ring.n {
        return Err(format!("rank {} < {}", f.matrix().rank(), ring.n));
    }
    if f.matrix().mul(k.action()) != dual_module(&k).action().mul(f.matrix()) {
        return Err("does not commute with x".into());
    }
    Ok(())
}

/// `dim K/(xⁱ) ⊗_K K/(xʲ)` for `1 ≤ i, j ≤ n`, checked against `min(i, j)`
/// and the balanced-form count.
pub fn tensor_table(ring: RingSpec) -> Result<Vec<Vec<usize>>, String> {
    let n = ring.n;
    let mut table = vec![vec![0; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let (a, b) = (cyclic(ring, i).map_err(|e| e.to_string())?, cyclic(ring, j).map_err(|e| e.to_string())?);
            let d = tensor_k(&a, &b).map_err(|e| e.to_string())?.dim();
            let oracle = tensor_k_dim_oracle(&a, &b).map_err(|e| e.to_string())?;
            if d != i.min(j) || d != oracle {
                return Err(format!("({i}, {j}): dim {d}, oracle {oracle}"));
            }
            table[i - 1][j - 1] = d;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chu::Side;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, n: usize) -> RingSpec {
        RingSpec::new(p, n).unwrap()
    }

    fn module(r: RingSpec, d: usize, x: &[i64]) -> Result<NilModule, ModError> {
        NilModule::new(r, Matrix::from_ints(r.field, d, d, x).unwrap())
    }

    #[test]
    fn validation() {
        assert!(module(ring(2, 1), 3, &[0; 9]).is_ok());
        assert!(module(ring(2, 2), 2, &[0, 1, 0, 0]).is_ok());
        assert_eq!(module(ring(3, 4), 2, &[1, 0, 0, 1]), Err(ModError::NilpotencyViolated { n: 4 }));
        assert!(module(ring(2, 1), 2, &[0, 1, 0, 0]).is_err());
    }

    #[test]
    fn cyclic_modules() {
        let r = ring(3, 3);
        assert_eq!(cyclic(r, 1).unwrap().action(), &Matrix::zeros(r.field, 1, 1));
        assert_eq!(cyclic(r, 3).unwrap().exponent(), 3);
        let c = cyclic(r, 2).unwrap();
        assert_eq!(c.action(), &Matrix::from_ints(r.field, 2, 2, &[0, 0, 1, 0]).unwrap());
        assert!(cyclic(r, 0).is_err());
        assert!(cyclic(r, 4).is_err());
    }

    #[test]
    fn hom_dimensions() {
        let r = ring(2, 3);
        let k = regular(r);
        let (m, _) = random_module(&mut ChaCha8Rng::seed_from_u64(4), r, 5);
        assert_eq!(hom_k_basis(&k, &m).unwrap().dim(), m.dim());
        let c1 = cyclic(r, 1).unwrap();
        let c2 = cyclic(r, 2).unwrap();
        assert_eq!(hom_k_basis(&c1, &c1).unwrap().dim(), 1);
        assert_eq!(hom_k_basis(&c1, &c2).unwrap().dim(), 1);
        // the single map lands in the socle x·K/(x²)
        let f = &hom_k_maps(&c1, &c2).unwrap()[0];
        assert_eq!(f.matrix().get(0, 0), 0);
    }

    #[test]
    fn duals() {
        let r = ring(5, 3);
        let c1 = cyclic(r, 1).unwrap();
        assert_eq!(dual_module(&c1), c1);
        let c2 = cyclic(r, 2).unwrap();
        assert_eq!(dual_module(&c2).dim(), 2);
        assert!(find_iso(&c2, &dual_module(&c2)).unwrap().is_some());
    }

    #[test]
    fn self_dual_examples() {
        assert_eq!(self_dual_iso(ring(2, 1)).matrix(), &Matrix::identity(FieldSpec::new(2).unwrap(), 1));
        let f2 = self_dual_iso(ring(3, 2));
        assert_eq!(f2.matrix(), &Matrix::from_ints(f2.matrix().field(), 2, 2, &[0, 1, 1, 0]).unwrap());
        assert_eq!(f2.matrix().rank(), 2);
    }

    #[test]
    fn offset_n_loses_rank() {
        for n in 1..=6 {
            let r = ring(2, n);
            let f = antidiagonal(r, n);
            assert_eq!(f.rank(), n - 1);
            assert!(f.column(0).iter().all(|&e| e == 0), "f(1) vanishes");
        }
    }

    #[test]
    fn self_dual_all_small() {
        for p in [2, 3, 5] {
            for n in 1..=6 {
                let f = self_dual_iso(ring(p, n));
                assert_eq!(f.matrix().rank(), n);
                let k = regular(ring(p, n));
                assert_eq!(f.matrix().mul(k.action()), dual_module(&k).action().mul(f.matrix()));
            }
        }
    }

    #[test]
    fn extend_examples() {
        let r = ring(3, 2);
        let k = regular(r);
        let id = KLinearMap::identity(&k);
        let phi = random_hom(&mut ChaCha8Rng::seed_from_u64(1), &k, &k);
        assert_eq!(extend_hom(&id, &phi).unwrap(), phi);
        // x·K ⊆ K, φ = the inclusion
        let incl = embed_cyclic(r, 1).unwrap();
        let psi = extend_hom(&incl, &incl).unwrap();
        assert_eq!(psi.compose(&incl).unwrap(), incl);
        let zero = KLinearMap::new(incl.source().clone(), k.clone(), Matrix::zeros(r.field, 2, 1)).unwrap();
        assert!(extend_hom(&incl, &zero).unwrap().matrix().is_zero());
    }

    #[test]
    fn no_extension_into_non_injective() {
        // K/(x) is not injective over k[x]/(x²): the socle inclusion does not split
        let r = ring(2, 2);
        let incl = embed_cyclic(r, 1).unwrap();
        let c1 = cyclic(r, 1).unwrap();
        assert_eq!(extend_hom(&incl, &KLinearMap::identity(&c1)), Err(ModError::NoExtension));
    }

    #[test]
    fn embed_cyclic_formula() {
        let r = ring(2, 3);
        assert_eq!(embed_cyclic(r, 3).unwrap().matrix(), &Matrix::identity(r.field, 3));
        let e = embed_cyclic(r, 2).unwrap();
        assert_eq!(e.matrix(), &Matrix::from_ints(r.field, 3, 2, &[0, 0, 1, 0, 0, 1]).unwrap());
        let e = embed_cyclic(ring(2, 2), 1).unwrap();
        assert_eq!(e.matrix(), &Matrix::from_ints(r.field, 2, 1, &[0, 1]).unwrap());
        for n in 1..=4 {
            for i in 1..=n {
                let e = embed_cyclic(ring(3, n), i).unwrap();
                assert!(e.is_injective());
                let k = regular(ring(3, n));
                assert!(mat_pow(k.action(), i).mul(e.matrix()).is_zero());
            }
        }
    }

    #[test]
    fn cogenerator_examples() {
        let r = ring(2, 2);
        let m = cyclic(r, 1).unwrap().direct_sum(&regular(r)).unwrap();
        let e = cogenerator_embed(&m).unwrap();
        assert_eq!(e.r, 2);
        assert!(e.map.is_injective());
        let e = cogenerator_embed(&regular(r)).unwrap();
        assert_eq!(e.r, 1);
        assert_eq!(e.map.matrix(), &Matrix::identity(r.field, 2));
        assert_eq!(cogenerator_embed(&NilModule::zero(r)).unwrap().r, 0);
    }

    #[test]
    fn tensor_examples() {
        let r = ring(3, 2);
        let c1 = cyclic(r, 1).unwrap();
        assert_eq!(tensor_k(&c1, &c1).unwrap().dim(), 1);
        let (m, _) = random_module(&mut ChaCha8Rng::seed_from_u64(9), r, 5);
        assert!(find_iso(&tensor_k(&regular(r), &m).unwrap(), &m).unwrap().is_some());
        let t = tensor_k(&c1, &m).unwrap();
        assert_eq!(t.dim(), m.dim() - m.action().rank());
    }

    #[test]
    fn tensor_table() {
        for n in 1..=4 {
            let r = ring(2, n);
            for i in 1..=n {
                for j in 1..=n {
                    let (a, b) = (cyclic(r, i).unwrap(), cyclic(r, j).unwrap());
                    let d = tensor_k(&a, &b).unwrap().dim();
                    assert_eq!(d, i.min(j));
                    assert_eq!(tensor_k_dim_oracle(&a, &b).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn baer_examples() {
        let r = ring(3, 3);
        assert_eq!(baer_adjunction_check(&regular(r)).unwrap().dim_b, 3);
        assert_eq!(baer_adjunction_check(&cyclic(r, 1).unwrap()).unwrap().hom_to_dual, 1);
        assert_eq!(baer_adjunction_check(&NilModule::zero(r)).unwrap().functionals_on_tensor, 0);
    }

    #[test]
    fn chuk_examples() {
        let r = ring(2, 2);
        let reg = ChuKObject::regular(r);
        assert!(reg.is_separated() && reg.is_extensional());
        // ⟨a, b⟩ = x·ab: only P₁ = e₀e₀ᵀ survives
        let k = regular(r);
        let top = Matrix::from_ints(r.field, 2, 2, &[1, 0, 0, 0]).unwrap();
        let o = ChuKObject::new(k.clone(), k.clone(), vec![Matrix::zeros(r.field, 2, 2), top]).unwrap();
        assert!(!o.is_separated());
        let (s, q) = chuk_reduce(&o, Side::Separated).unwrap();
        assert_eq!(s.m, cyclic(r, 1).unwrap());
        assert_eq!(q.rows(), 1);
        assert!(s.is_separated());
        assert_eq!(chuk_dual(&chuk_dual(&o)), o);
        let bad = ChuKObject::new(k.clone(), k, vec![Matrix::identity(r.field, 2), Matrix::zeros(r.field, 2, 2)]);
        assert!(matches!(bad, Err(ModError::BilinearityViolated { .. })));
    }

    #[test]
    fn chuk_hom_of_regular() {
        let r = ring(3, 3);
        let reg = ChuKObject::regular(r);
        // endomorphisms of K × K → K are (multiplication by c, multiplication by c)
        assert_eq!(chuk_hom_basis(&reg, &reg).unwrap().dim(), 3);
    }

    #[test]
    fn json_shape() {
        let c = cyclic(ring(3, 2), 2).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"p":3,"n":2,"dim":2,"X":[0,0,1,0]}"#);
        assert_eq!(serde_json::from_str::<NilModule>(&s).unwrap(), c);
        assert!(serde_json::from_str::<NilModule>(r#"{"p":3,"n":1,"dim":2,"X":[0,0,1,0]}"#).is_err());
    }

    proptest! {
        #[test]
        fn extension_always_exists(seed in any::<u64>(), pi in 0usize..2, n in 2usize..=4) {
            let r = ring([2, 3][pi], n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (b, _) = random_module(&mut rng, r, 6);
            let incl = random_submodule(&mut rng, &b, 2);
            prop_assert!(incl.is_injective());
            let phi = random_hom(&mut rng, incl.source(), &regular(r));
            let psi = extend_hom(&incl, &phi).unwrap();
            prop_assert_eq!(psi.compose(&incl).unwrap(), phi);
        }

        #[test]
        fn cogenerator_counts_blocks(seed in any::<u64>(), n in 1usize..=4) {
            let r = ring(3, n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (m, blocks) = random_module(&mut rng, r, 6);
            let e = cogenerator_embed(&m).unwrap();
            prop_assert!(e.map.is_injective());
            prop_assert_eq!(e.r, blocks.len());
            let mut got = e.orders.clone();
            let mut want = blocks.clone();
            got.sort();
            want.sort();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn tensor_dim_matches_oracle(seed in any::<u64>(), n in 1usize..=3) {
            let r = ring(2, n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, _) = random_module(&mut rng, r, 4);
            let (b, _) = random_module(&mut rng, r, 4);
            prop_assert_eq!(tensor_k(&a, &b).unwrap().dim(), tensor_k_dim_oracle(&a, &b).unwrap());
        }

        #[test]
        fn chuk_reduce_is_separating(seed in any::<u64>(), n in 1usize..=3) {
            let r = ring(3, n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (m, _) = random_module(&mut rng, r, 4);
            let (nn, _) = random_module(&mut rng, r, 4);
            // the top component is any balanced form into the socle: a K-map N → M*
            let top = random_hom(&mut rng, &nn, &dual_module(&m)).matrix().clone();
            let o = ChuKObject::from_top(m, nn, top).unwrap();
            prop_assert_eq!(chuk_dual(&chuk_dual(&o)), o.clone());
            let (s, _) = chuk_reduce(&o, Side::Separated).unwrap();
            prop_assert!(s.is_separated());
            let (e, _) = chuk_reduce(&o, Side::Extensional).unwrap();
            prop_assert!(e.is_extensional());
        }
    }
}
