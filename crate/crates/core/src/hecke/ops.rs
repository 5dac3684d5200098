use num_complex::Complex64;

use super::function::{convolve, GroupFunction};
use crate::chartable::CharacterTable;
use crate::error::{Error, Result};
use crate::field::CharLabel;
use crate::geometry::Gl2;

/// Largest deviation tolerated by [`HeckeFunction::new`].
pub const BIEQUIVARIANCE_TOL: f64 = 1e-8;

/// An element of `L¹_Φ(G, K)`: `f(k g k') = Φ(k) f(g) Φ(k')`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeFunction {
    phi: CharLabel,
    func: GroupFunction,
}

impl HeckeFunction {
    pub fn new(g: &Gl2, phi: CharLabel, func: GroupFunction) -> Result<Self> {
        let residual = biequivariance_residual(g, phi, &func);
        if residual > BIEQUIVARIANCE_TOL {
            return Err(Error::NotBiEquivariant { residual });
        }
        Ok(HeckeFunction { phi, func })
    }

    /// Skips the equivariance check; for functions built equivariant by
    /// construction.
    pub(crate) fn new_unchecked(phi: CharLabel, func: GroupFunction) -> Self {
        HeckeFunction { phi, func }
    }

    pub fn phi(&self) -> CharLabel {
        self.phi
    }

    pub fn function(&self) -> &GroupFunction {
        &self.func
    }

    pub fn into_function(self) -> GroupFunction {
        self.func
    }
}

/// `max |f(kg) − Φ(k)f(g)|` and `max |f(gk) − f(g)Φ(k)|` over all `g`, `k`.
pub fn biequivariance_residual(g: &Gl2, phi: CharLabel, f: &GroupFunction) -> f64 {
    let fc = g.field();
    let mut worst: f64 = 0.0;
    for (k, &t) in g.torus().iter().enumerate() {
        let chi = fc.ext_char_at_log(phi.index, k as u32);
        for x in 0..g.order() as u32 {
            let left = (f.get(g.mul_idx(t, x)) - chi * f.get(x)).norm();
            let right = (f.get(g.mul_idx(x, t)) - f.get(x) * chi).norm();
            worst = worst.max(left).max(right);
        }
    }
    worst
}

/// `ε^Φ_K = |K|^{-1} Φ` on `K`, zero elsewhere.
pub fn epsilon_idempotent(g: &Gl2, phi: CharLabel) -> HeckeFunction {
    let fc = g.field();
    let inv_k = 1.0 / g.torus().len() as f64;
    let mut f = GroupFunction::zeros(g);
    for (k, &t) in g.torus().iter().enumerate() {
        f.values_mut()[t as usize] = fc.ext_char_at_log(phi.index, k as u32) * inv_k;
    }
    HeckeFunction::new_unchecked(phi, f)
}

/// `(P_Φ f)(g) = |K|^{-1} Σ_k Φ^{-1}(k) f(kg)`, which equals `ε^Φ_K ∗ f`.
pub fn project_p_phi(g: &Gl2, phi: CharLabel, f: &GroupFunction) -> GroupFunction {
    let fc = g.field();
    let inv_k = 1.0 / g.torus().len() as f64;
    let weights: Vec<(u32, Complex64)> = g
        .torus()
        .iter()
        .enumerate()
        .map(|(k, &t)| (t, fc.ext_char_at_log(phi.index, k as u32).conj() * inv_k))
        .collect();
    GroupFunction::from_fn(g, |x| weights.iter().map(|&(t, w)| w * f.get(g.mul_idx(t, x))).sum())
}

/// Central idempotent `e_π(g) = (d_π/|G|) χ_π(g)`.
///
/// With `π(f) = Σ_g f(g) π(g^{-1})` this is the element acting as the
/// identity on `V_π` and as zero on every other irreducible.
pub fn central_idempotent(g: &Gl2, table: &CharacterTable, label: usize) -> GroupFunction {
    let scale = table.dim(label) as f64 / g.order() as f64;
    GroupFunction::from_fn(g, |x| table.value_at(g, label, x) * scale)
}

/// `e_π ∗ f`, the `π`-isotypic component of `f`.
pub fn isotypic_project(g: &Gl2, table: &CharacterTable, label: usize, f: &GroupFunction) -> Result<GroupFunction> {
    convolve(g, &central_idempotent(g, table, label), f)
}

/// `trace(π(f) π(f)*)` for `π(f) = Σ_g f(g) π(g^{-1})`, evaluated as
/// `Σ_g (f ∗ f~)(g) conj(χ_π(g))`.
pub fn fourier_hs_norm_sq(g: &Gl2, table: &CharacterTable, label: usize, f: &GroupFunction) -> Result<f64> {
    let ff = convolve(g, f, &f.involution(g))?;
    let s: Complex64 = (0..g.order() as u32).map(|x| ff.get(x) * table.value_at(g, label, x).conj()).sum();
    clamp_hs(s.re, ff.get(g.identity_index()).re * g.order() as f64)
}

/// Rounds tiny negatives to zero; `scale` is `|G| · ‖f‖²`, the total
/// Plancherel mass.
pub(crate) fn clamp_hs(value: f64, scale: f64) -> Result<f64> {
    let floor = -1e-8 * (1.0 + scale.abs());
    if value < floor {
        return Err(Error::NegativeResidual { value });
    }
    Ok(value.max(0.0))
}
