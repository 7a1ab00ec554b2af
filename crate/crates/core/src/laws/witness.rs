//! Canonical witnesses for the *-autonomous laws.
//!
//! Each law is checked by building the canonical map it names, never by
//! searching for an arbitrary isomorphism.

use crate::chu::{
    compose, internal_hom_full, recover_g, reflect, tensor, tensor_full, unit_object, ChuMorphism, ChuObject, HomSpace,
    InternalHom, Recovered, Side, Tensor,
};
use crate::linalg::{FieldSpec, Matrix};

pub type Verdict = Result<(), String>;

fn perturb(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    if m.rows() > 0 && m.cols() > 0 {
        out.set(0, 0, m.field().add(m.get(0, 0), 1));
    }
    out
}

fn set_column(m: &mut Matrix, j: usize, col: &[u32]) {
    for (i, &e) in col.iter().enumerate() {
        m.set(i, j, e);
    }
}

/// `(F, G)` must satisfy the morphism condition, both components must be
/// invertible, and `recover_g` must agree with `G` whenever it is forced.
pub fn check_canonical_iso(source: &ChuObject, target: &ChuObject, f: Matrix, g: Matrix) -> Verdict {
    let recovered = recover_g(source, target, &f).map_err(|e| format!("recover_g: {e}"))?;
    if let Recovered::Unique(rg) = &recovered {
        if rg != &g {
            return Err("recover_g disagrees with the canonical G".into());
        }
    }
    let m = ChuMorphism::new(source.clone(), target.clone(), f, g).map_err(|e| format!("witness: {e}"))?;
    if !m.f().is_invertible() {
        return Err("witness F is not bijective".into());
    }
    if !m.g().is_invertible() {
        return Err("witness G is not bijective".into());
    }
    Ok(())
}

/// `T* ≅ T ⊸ (K, ⊤)`: `x ↦ ((P x)ᵀ, x)`, identity on A.
pub fn dual_as_hom(t: &ChuObject, corrupt: bool) -> Verdict {
    let field = t.field();
    let unit = unit_object(field);
    let InternalHom { object: hom, homs } = internal_hom_full(t, &unit).map_err(|e| e.to_string())?;
    let source = t.dual();
    let mut f = Matrix::zeros(field, hom.dim_a(), t.dim_x());
    for l in 0..t.dim_x() {
        let mut x = vec![0; t.dim_x()];
        x[l] = 1;
        let px = t.pairing().apply(&x);
        let fx = Matrix::new(field, 1, t.dim_a(), px).expect("row");
        let gx = Matrix::column_vector(field, &x);
        let c = homs.coordinates(&fx, &gx).ok_or("(Px)ᵀ, x is not a morphism T → unit")?;
        set_column(&mut f, l, &c);
    }
    if corrupt {
        f = perturb(&f);
    }
    check_canonical_iso(&source, &hom, f, Matrix::identity(field, t.dim_a()))
}

/// `(⊤, K) ⊗ T ≅ T`: identity on `1 ⊗ A = A`, `x ↦ (x, (P x)ᵀ)` on the second carrier.
pub fn unit_law(t: &ChuObject, corrupt: bool) -> Verdict {
    let field = t.field();
    let Tensor { object: ut, homs } = tensor_full(&unit_object(field), t).map_err(|e| e.to_string())?;
    let mut g = Matrix::zeros(field, ut.dim_x(), t.dim_x());
    for l in 0..t.dim_x() {
        let mut x = vec![0; t.dim_x()];
        x[l] = 1;
        let fx = Matrix::column_vector(field, &x);
        let gx = Matrix::new(field, 1, t.dim_a(), t.pairing().apply(&x)).expect("row");
        let c = homs.coordinates(&fx, &gx).ok_or("(x, (Px)ᵀ) is not in Hom(unit, T*)")?;
        set_column(&mut g, l, &c);
    }
    let mut f = Matrix::identity(field, t.dim_a());
    if corrupt {
        f = perturb(&f);
    }
    check_canonical_iso(&ut, t, f, g)
}

/// `T ⊗ U ≅ U ⊗ T`: `a ⊗ b ↦ b ⊗ a`, `(f', g') ↦ (g', f')`.
pub fn symmetry(t: &ChuObject, u: &ChuObject, corrupt: bool) -> Verdict {
    let field = t.field();
    let tu = tensor_full(t, u).map_err(|e| e.to_string())?;
    let ut = tensor_full(u, t).map_err(|e| e.to_string())?;
    let (da, db) = (t.dim_a(), u.dim_a());
    let mut f = Matrix::zeros(field, da * db, da * db);
    for i in 0..da {
        for j in 0..db {
            f.set(j * da + i, i * db + j, 1);
        }
    }
    let mut g = Matrix::zeros(field, tu.homs.dim(), ut.homs.dim());
    for k in 0..ut.homs.dim() {
        let (f2, g2) = ut.homs.element(k);
        let c = tu.homs.coordinates(&g2, &f2).ok_or("swapped pair is not in Hom(T, U*)")?;
        set_column(&mut g, k, &c);
    }
    if corrupt {
        f = perturb(&f);
    }
    check_canonical_iso(&tu.object, &ut.object, f, g)
}

/// Currying between `Hom(T ⊗ U, V)` and `Hom(T, U ⊸ V)`.
pub struct Currying {
    pub tu: Tensor,
    pub uv: InternalHom,
    pub lhs: HomSpace,
    pub rhs: HomSpace,
    dims: (usize, usize, usize),
}

impl Currying {
    pub fn new(t: &ChuObject, u: &ChuObject, v: &ChuObject) -> Result<Self, String> {
        let tu = tensor_full(t, u).map_err(|e| e.to_string())?;
        let uv = internal_hom_full(u, v).map_err(|e| e.to_string())?;
        let lhs = HomSpace::new(&tu.object, v).map_err(|e| e.to_string())?;
        let rhs = HomSpace::new(t, &uv.object).map_err(|e| e.to_string())?;
        Ok(Currying { tu, uv, lhs, rhs, dims: (t.dim_a(), u.dim_a(), v.dim_x()) })
    }

    fn field(&self) -> FieldSpec {
        self.lhs.source().field()
    }

    /// `(φ, ψ) ↦ (a ↦ (b ↦ φ(a⊗b), z ↦ f_z(a)), b⊗z ↦ g_z(b))`.
    pub fn curry(&self, phi: &Matrix, psi: &Matrix) -> Option<(Matrix, Matrix)> {
        let field = self.field();
        let (da, db, dz) = self.dims;
        let t = self.rhs.source();
        let dc = phi.rows();
        let dy = self.uv.homs.source().dim_x();
        let pairs: Vec<(Matrix, Matrix)> = (0..self.tu.homs.dim()).map(|k| self.tu.homs.element(k)).collect();
        let mut phi2 = Matrix::zeros(field, self.uv.homs.dim(), da);
        for i in 0..da {
            let mut fa = Matrix::zeros(field, dc, db);
            for c in 0..dc {
                for j in 0..db {
                    fa.set(c, j, phi.get(c, i * db + j));
                }
            }
            let mut ga = Matrix::zeros(field, dy, dz);
            for l in 0..dz {
                for (k, (fk, _)) in pairs.iter().enumerate() {
                    let w = psi.get(k, l);
                    if w == 0 {
                        continue;
                    }
                    for y in 0..dy {
                        ga.set(y, l, field.add(ga.get(y, l), field.mul(w, fk.get(y, i))));
                    }
                }
            }
            let c = self.uv.homs.coordinates(&fa, &ga)?;
            set_column(&mut phi2, i, &c);
        }
        let dx = t.dim_x();
        let mut psi2 = Matrix::zeros(field, dx, db * dz);
        for j in 0..db {
            for l in 0..dz {
                for (k, (_, gk)) in pairs.iter().enumerate() {
                    let w = psi.get(k, l);
                    if w == 0 {
                        continue;
                    }
                    for x in 0..dx {
                        let cur = psi2.get(x, j * dz + l);
                        psi2.set(x, j * dz + l, field.add(cur, field.mul(w, gk.get(x, j))));
                    }
                }
            }
        }
        Some((phi2, psi2))
    }

    /// Inverse of [`Currying::curry`].
    pub fn uncurry(&self, phi2: &Matrix, psi2: &Matrix) -> Option<(Matrix, Matrix)> {
        let field = self.field();
        let (da, db, dz) = self.dims;
        let dc = self.lhs.target().dim_a();
        let dy = self.uv.homs.source().dim_x();
        let dx = self.rhs.source().dim_x();
        let curried: Vec<(Matrix, Matrix)> = (0..da).map(|i| self.uv.homs.combine(&phi2.column(i))).collect();
        let mut phi = Matrix::zeros(field, dc, da * db);
        for (i, (fi, _)) in curried.iter().enumerate() {
            for c in 0..dc {
                for j in 0..db {
                    phi.set(c, i * db + j, fi.get(c, j));
                }
            }
        }
        let mut psi = Matrix::zeros(field, self.tu.homs.dim(), dz);
        for l in 0..dz {
            let mut fl = Matrix::zeros(field, dy, da);
            for (i, (_, gi)) in curried.iter().enumerate() {
                for y in 0..dy {
                    fl.set(y, i, gi.get(y, l));
                }
            }
            let mut gl = Matrix::zeros(field, dx, db);
            for x in 0..dx {
                for j in 0..db {
                    gl.set(x, j, psi2.get(x, j * dz + l));
                }
            }
            let c = self.tu.homs.coordinates(&fl, &gl)?;
            set_column(&mut psi, l, &c);
        }
        Some((phi, psi))
    }
}

/// Checks that a linear map given by its images of a basis (as coordinate
/// columns) is a bijection between spaces of the stated dimensions.
fn check_bijection(images: &Matrix, dim_from: usize, dim_to: usize) -> Verdict {
    if dim_from != dim_to {
        return Err(format!("hom dimensions differ: {dim_from} vs {dim_to}"));
    }
    if images.rank() != dim_from {
        return Err("canonical map is not injective".into());
    }
    Ok(())
}

/// `Hom(T ⊗ U, V) ≅ Hom(T, U ⊸ V)`, checked on bases in both directions.
pub fn tensor_hom_adjunction(t: &ChuObject, u: &ChuObject, v: &ChuObject, corrupt: bool) -> Verdict {
    let cur = Currying::new(t, u, v)?;
    let field = t.field();
    let mut forward = Matrix::zeros(field, cur.rhs.dim(), cur.lhs.dim());
    for k in 0..cur.lhs.dim() {
        let (phi, psi) = cur.lhs.element(k);
        let (phi2, psi2) = cur.curry(&phi, &psi).ok_or("curried first component is not in Hom(U, V)")?;
        let c = cur.rhs.coordinates(&phi2, &psi2).ok_or("curried pair is not a morphism T → U ⊸ V")?;
        let back = cur.uncurry(&phi2, &psi2).ok_or("uncurry failed on a curried pair")?;
        if back != (phi, psi) {
            return Err("uncurry ∘ curry ≠ id".into());
        }
        if !(corrupt && k == 0) {
            set_column(&mut forward, k, &c);
        }
    }
    for k in 0..cur.rhs.dim() {
        let (phi2, psi2) = cur.rhs.element(k);
        let (phi, psi) = cur.uncurry(&phi2, &psi2).ok_or("uncurried second component is not in Hom(T, U*)")?;
        cur.lhs.coordinates(&phi, &psi).ok_or("uncurried pair is not a morphism T ⊗ U → V")?;
        let again = cur.curry(&phi, &psi).ok_or("curry failed on an uncurried pair")?;
        if again != (phi2, psi2) {
            return Err("curry ∘ uncurry ≠ id".into());
        }
    }
    check_bijection(&forward, cur.lhs.dim(), cur.rhs.dim())
}

/// `(T ⊗ U) ⊗ W ≅ T ⊗ (U ⊗ W)`: identity on `A ⊗ B ⊗ C` (the Kronecker
/// reindexing is the identity), and uncurrying on the second carriers.
pub fn associativity(t: &ChuObject, u: &ChuObject, w: &ChuObject, corrupt: bool) -> Verdict {
    let field = t.field();
    let cur = Currying::new(t, u, &w.dual())?;
    let uw = tensor(u, w).map_err(|e| e.to_string())?;
    if cur.uv.object != uw.dual() {
        return Err("U ⊸ W* differs from (U ⊗ W)*".into());
    }
    let left = tensor(&cur.tu.object, w).map_err(|e| e.to_string())?;
    let right = tensor(t, &uw).map_err(|e| e.to_string())?;
    // left's second carrier is lhs, right's is rhs
    let mut g = Matrix::zeros(field, cur.lhs.dim(), cur.rhs.dim());
    for k in 0..cur.rhs.dim() {
        let (phi2, psi2) = cur.rhs.element(k);
        let (phi, psi) = cur.uncurry(&phi2, &psi2).ok_or("uncurry left Hom(T, U*)")?;
        let c = cur.lhs.coordinates(&phi, &psi).ok_or("uncurried pair is not in Hom(T ⊗ U, W*)")?;
        set_column(&mut g, k, &c);
    }
    let mut f = Matrix::identity(field, left.dim_a());
    if corrupt {
        f = perturb(&f);
    }
    check_canonical_iso(&left, &right, f, g)
}

/// `(T ⊸ U)* ≅ T ⊗ U*` by the identity on both carriers.
pub fn dual_of_hom(t: &ChuObject, u: &ChuObject, corrupt: bool) -> Verdict {
    let field = t.field();
    let lhs = internal_hom_full(t, u).map_err(|e| e.to_string())?.object.dual();
    let rhs = tensor(t, &u.dual()).map_err(|e| e.to_string())?;
    if (lhs.dim_a(), lhs.dim_x()) != (rhs.dim_a(), rhs.dim_x()) {
        return Err("carrier dimensions differ".into());
    }
    let mut f = Matrix::identity(field, lhs.dim_a());
    if corrupt {
        f = perturb(&f);
    }
    check_canonical_iso(&lhs, &rhs, f, Matrix::identity(field, lhs.dim_x()))
}

/// Inputs separated and extensional ⇒ `T ⊸ U` and `T ⊗ U` are both.
pub fn closure_of_chu(t: &ChuObject, u: &ChuObject, corrupt: bool) -> Verdict {
    for (name, o) in [("T", t), ("U", u)] {
        if !(o.is_separated() && o.is_extensional()) {
            return Err(format!("input {name} is not separated and extensional"));
        }
    }
    let mut h = internal_hom_full(t, u).map_err(|e| e.to_string())?.object;
    if corrupt {
        h = ChuObject::from_pairing(Matrix::zeros(t.field(), h.dim_a(), h.dim_x()));
    }
    let x = tensor(t, u).map_err(|e| e.to_string())?;
    let hf = h.flags();
    let xf = x.flags();
    if !hf.separated {
        return Err("T ⊸ U is not separated".into());
    }
    if !hf.extensional {
        return Err("T ⊸ U is not extensional".into());
    }
    if !xf.separated {
        return Err("T ⊗ U is not separated".into());
    }
    if !xf.extensional {
        return Err("T ⊗ U is not extensional".into());
    }
    Ok(())
}

/// `Hom(S T, U) ≅ Hom(T, U)` for separated U by precomposition with the
/// unit, and `Hom(U, E T) ≅ Hom(U, T)` for extensional U by postcomposition
/// with the counit. Runs whichever halves apply to `u`.
pub fn reflection_adjointness(t: &ChuObject, u: &ChuObject, corrupt: bool) -> Verdict {
    let field = t.field();
    let (sep, ext) = (u.is_separated(), u.is_extensional());
    if !sep && !ext {
        return Err("U is neither separated nor extensional".into());
    }
    if sep {
        let r = reflect(t, Side::Separated);
        let lhs = HomSpace::new(&r.object, u).map_err(|e| e.to_string())?;
        let rhs = HomSpace::new(t, u).map_err(|e| e.to_string())?;
        let mut images = Matrix::zeros(field, rhs.dim(), lhs.dim());
        for k in 0..lhs.dim() {
            let m = compose(&lhs.morphism(k), &r.morphism).map_err(|e| e.to_string())?;
            let c = rhs.coordinates(m.f(), m.g()).ok_or("(f, g) ∘ η is not a morphism T → U")?;
            if !(corrupt && k == 0) {
                set_column(&mut images, k, &c);
            }
        }
        check_bijection(&images, lhs.dim(), rhs.dim()).map_err(|e| format!("S side: {e}"))?;
    }
    if ext {
        let r = reflect(t, Side::Extensional);
        let lhs = HomSpace::new(u, &r.object).map_err(|e| e.to_string())?;
        let rhs = HomSpace::new(u, t).map_err(|e| e.to_string())?;
        let mut images = Matrix::zeros(field, rhs.dim(), lhs.dim());
        for k in 0..lhs.dim() {
            let m = compose(&r.morphism, &lhs.morphism(k)).map_err(|e| e.to_string())?;
            let c = rhs.coordinates(m.f(), m.g()).ok_or("ε ∘ (f, g) is not a morphism U → T")?;
            if !(corrupt && k == 0 && !sep) {
                set_column(&mut images, k, &c);
            }
        }
        check_bijection(&images, lhs.dim(), rhs.dim()).map_err(|e| format!("E side: {e}"))?;
    }
    Ok(())
}

/// The object `(u, u, I)` a plain u-dimensional space becomes.
pub fn plain_space(field: FieldSpec, dim: usize) -> ChuObject {
    ChuObject::from_pairing(Matrix::identity(field, dim))
}

/// In plain finite-dimensional spaces `(U ⊸ V)* ≅ V ⊸ U`: the trace
/// pairing `⟨f, g⟩ = tr(g ∘ f)` between `Hom(U, V)` and `Hom(V, U)` is
/// perfect. Uses the A-carrier dimensions of `t` and `u` as U and V.
pub fn compact_closure(t: &ChuObject, u: &ChuObject, corrupt: bool) -> Verdict {
    let field = t.field();
    let pu = plain_space(field, t.dim_a());
    let pv = plain_space(field, u.dim_a());
    let uv = HomSpace::new(&pu, &pv).map_err(|e| e.to_string())?;
    let vu = HomSpace::new(&pv, &pu).map_err(|e| e.to_string())?;
    let expected = t.dim_a() * u.dim_a();
    if uv.dim() != expected || vu.dim() != expected {
        return Err(format!("hom dimensions {} and {}, expected {expected}", uv.dim(), vu.dim()));
    }
    let mut trace = Matrix::zeros(field, uv.dim(), vu.dim());
    for k in 0..uv.dim() {
        let (fk, _) = uv.element(k);
        for l in 0..vu.dim() {
            let (gl, _) = vu.element(l);
            let comp = gl.mul(&fk);
            let tr = (0..comp.rows()).fold(0, |acc, i| field.add(acc, comp.get(i, i)));
            trace.set(k, l, tr);
        }
    }
    if corrupt && trace.rows() > 0 {
        for l in 0..trace.cols() {
            trace.set(0, l, 0);
        }
    }
    let paired = ChuObject::from_pairing(trace);
    let flags = paired.flags();
    if !(flags.separated && flags.extensional) {
        return Err("trace pairing is degenerate".into());
    }
    Ok(())
}
