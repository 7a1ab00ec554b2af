//! The functors between presented spaces and separated+extensional Chu
//! objects, and the checks that they form an equivalence.

use serde::Serialize;

use crate::chu::{unit_object, ChuError, ChuMorphism, ChuObject, HomSpace};
use crate::linalg::{FieldSpec, Matrix};
use crate::topo::{extend_functional, factor_functional, hom_functionals, sigma, PresentedSpace};

/// `F(V) = (|V|, Hom(V, K))` in the basis of V and its dual basis.
pub fn functor_f(v: &PresentedSpace) -> ChuObject {
    ChuObject::from_pairing(Matrix::identity(v.field(), v.dim()))
}

/// `R(A, X)`: A embedded in `K^X` by `a ↦ aᵀP`.
pub fn functor_r(o: &ChuObject) -> Result<PresentedSpace, ChuError> {
    if !o.is_separated() {
        return Err(ChuError::NotSeparated);
    }
    let rows = o.pairing().row_vecs();
    Ok(PresentedSpace::new(o.field(), vec![1; o.dim_x()], &rows).expect("rows have length dim X"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrReport {
    pub dim_x: usize,
    pub dim_hom: usize,
    /// Column k holds the θ-coefficients expressing the k-th dual-basis
    /// functional of R(o) as `a ↦ ⟨θ₁x₁ + … + θₙxₙ, a⟩`.
    pub theta: Vec<Vec<u32>>,
}

/// Every functional on `R(o)` is `⟨x, ·⟩` for exactly one `x ∈ X`.
pub fn check_fr_identity(o: &ChuObject) -> Result<FrReport, String> {
    if !(o.is_separated() && o.is_extensional()) {
        return Err("object is not separated and extensional".into());
    }
    let field = o.field();
    let r = functor_r(o).map_err(|e| e.to_string())?;
    let basis = r.subspace().basis();
    let duals = hom_functionals(&r);
    let mut theta = Matrix::zeros(field, o.dim_x(), duals.len());
    for (k, phi) in duals.iter().enumerate() {
        let fr = factor_functional(&r, phi).map_err(|e| e.to_string())?;
        if !fr.reproduces(&r, phi) {
            return Err(format!("functional {k} does not factor through its J"));
        }
        // on K^X every factor is K itself, so the extension's entries are the θᵢ ∈ End(K)
        let x_phi = extend_functional(&r, phi).map_err(|e| e.to_string())?;
        for (i, row) in basis.row_vecs().iter().enumerate() {
            let want = u32::from(i == k);
            if field.dot(row, &x_phi) != want {
                return Err(format!("⟨x_φ, b_{i}⟩ ≠ φ(b_{i}) for functional {k}"));
            }
        }
        for (i, &t) in x_phi.iter().enumerate() {
            theta.set(i, k, t);
        }
    }
    // x ↦ (⟨x, b_i⟩)_i is the map X → Hom(R(o), K) in dual-basis coordinates
    if !basis.is_invertible() {
        return Err(format!("X → Hom(R(o), K) is not bijective ({} vs {})", o.dim_x(), r.dim()));
    }
    if basis.mul(&theta) != Matrix::identity(field, r.dim()) {
        return Err("θ-combinations do not invert the evaluation map".into());
    }
    let theta_cols = (0..theta.cols()).map(|k| theta.column(k)).collect();
    Ok(FrReport { dim_x: o.dim_x(), dim_hom: r.dim(), theta: theta_cols })
}

/// `R(F(V)) = σ(V)`; the coordinates of both sit on the dual basis of V.
pub fn check_rf_equals_sigma(v: &PresentedSpace) -> Result<(), String> {
    let rf = functor_r(&functor_f(v)).map_err(|e| e.to_string())?;
    let s = sigma(v);
    if rf == s {
        Ok(())
    } else {
        Err(format!("R(F(V)) has factors {:?}, σ(V) has {:?}", rf.factors(), s.factors()))
    }
}

/// `End(K)` computed as `Hom(unit, unit)`: must be one-dimensional and
/// spanned by the identity.
pub fn end_of_k_check(field: FieldSpec) -> Result<usize, String> {
    let k = unit_object(field);
    let h = HomSpace::new(&k, &k).map_err(|e| e.to_string())?;
    let id = ChuMorphism::identity(&k);
    if h.coordinates(id.f(), id.g()).is_none() {
        return Err("identity is not an endomorphism of K".into());
    }
    if h.dim() != 1 {
        return Err(format!("End(K) has dimension {}", h.dim()));
    }
    Ok(h.dim())
}
