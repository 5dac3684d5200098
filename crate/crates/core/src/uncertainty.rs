//! The finite uncertainty principle on `L¹_Φ(G, K)`:
//! `|supp f| · Σ_{π ∈ supp F(f)} d_π ≥ |G|`.

use rayon::prelude::*;
use serde::Serialize;

use crate::chartable::IrrepLabel;
use crate::error::{Error, Result};
use crate::harmonics::spherical_via_averaging;
use crate::hecke::{epsilon_idempotent, HeckeFunction, HeckeSpace, ZERO_TOL};

/// An irreducible is in the Fourier support when its share
/// `d_π ‖π(f)‖² / (|G| ‖f‖²)` of the Plancherel mass exceeds this.
pub const FOURIER_REL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UncertaintyRecord {
    pub phi: u32,
    pub support_size: u64,
    pub fourier_degree_sum: u64,
    pub product: u64,
    pub bound: u64,
    pub margin: i64,
    pub extremal: bool,
}

/// Table indices of the irreducibles where `π(f) ≠ 0`.
pub fn fourier_support(space: &HeckeSpace, f: &HeckeFunction) -> Result<Vec<usize>> {
    let func = f.function();
    if func.is_zero(ZERO_TOL) {
        return Err(Error::ZeroFunction);
    }
    let s = space.setting();
    let hs = space.hs_norms_sq(f)?;
    let mass = s.order() as f64 * func.l2_norm_sq();
    Ok((0..hs.len()).filter(|&i| s.table().dim(i) as f64 * hs[i] / mass > FOURIER_REL_TOL).collect())
}

pub fn uncertainty_check(space: &HeckeSpace, f: &HeckeFunction) -> Result<UncertaintyRecord> {
    let s = space.setting();
    let support = fourier_support(space, f)?;
    let support_size = f.function().support_size(ZERO_TOL) as u64;
    let fourier_degree_sum: u64 = support.iter().map(|&i| s.table().dim(i) as u64).sum();
    let product = support_size * fourier_degree_sum;
    let bound = s.order() as u64;
    let margin = product as i64 - bound as i64;
    Ok(UncertaintyRecord {
        phi: space.phi().index,
        support_size,
        fourier_degree_sum,
        product,
        bound,
        margin,
        extremal: margin == 0,
    })
}

/// `ε^Φ_K ∗ r ∗ ε^Φ_K` for a seeded complex Gaussian `r`.
pub fn random_hecke_function(space: &HeckeSpace, seed: u64) -> Result<HeckeFunction> {
    space.random(seed)
}

/// Seed of trial `i` for character `j`; distinct across characters so that
/// trials for different `Φ` are independent.
pub fn trial_seed(seed: u64, j: u32, i: usize) -> u64 {
    seed ^ ((j as u64) << 40) ^ i as u64
}

/// `samples` independent random trials, in trial order.
pub fn random_trials(space: &HeckeSpace, samples: usize, seed: u64) -> Result<Vec<UncertaintyRecord>> {
    let j = space.phi().index;
    (0..samples)
        .into_par_iter()
        .map(|i| uncertainty_check(space, &space.random(trial_seed(seed, j, i))?))
        .collect()
}

/// Which member of the natural basis a scan record belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanItem {
    Epsilon,
    CosetIndicator { coset: usize },
    Spherical { label: IrrepLabel },
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub item: ScanItem,
    pub record: UncertaintyRecord,
}

/// `ε^Φ_K`, every double-coset indicator admitted by `Φ`, and every spherical
/// function, each with its uncertainty record.
pub fn extremal_scan(space: &HeckeSpace) -> Result<Vec<ScanEntry>> {
    let s = space.setting();
    let phi = space.phi();
    let mut entries = Vec::new();
    let eps = epsilon_idempotent(s.group(), phi);
    entries.push(ScanEntry { item: ScanItem::Epsilon, record: uncertainty_check(space, &eps)? });
    for c in space.compatible_cosets() {
        let f = space.basis_function(c).expect("compatible coset");
        entries.push(ScanEntry { item: ScanItem::CosetIndicator { coset: c }, record: uncertainty_check(space, &f)? });
    }
    for (label, _) in space.decomposition().entries.iter().filter(|(_, m)| *m > 0) {
        let h = spherical_via_averaging(s, phi, label)?;
        let f = HeckeFunction::new_unchecked(phi, h.to_group_function(s));
        entries.push(ScanEntry { item: ScanItem::Spherical { label: *label }, record: uncertainty_check(space, &f)? });
    }
    Ok(entries)
}

/// The two inequalities chained in the proof, evaluated on one function.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProofChain {
    pub sup_norm: f64,
    /// `(1/|G|) Σ_π d_π ‖π(f)‖_HS`.
    pub fourier_bound: f64,
    pub l2_norm_sq: f64,
    /// `‖f‖_∞² · |supp f|`.
    pub support_bound: f64,
}

impl ProofChain {
    pub fn holds(&self, slack: f64) -> bool {
        self.sup_norm <= self.fourier_bound + slack && self.l2_norm_sq <= self.support_bound + slack
    }
}

pub fn proof_chain(space: &HeckeSpace, f: &HeckeFunction) -> Result<ProofChain> {
    let s = space.setting();
    let func = f.function();
    let hs = space.hs_norms_sq(f)?;
    let fourier_bound =
        hs.iter().enumerate().map(|(i, v)| s.table().dim(i) as f64 * v.sqrt()).sum::<f64>() / s.order() as f64;
    let sup_norm = func.sup_norm();
    Ok(ProofChain {
        sup_norm,
        fourier_bound,
        l2_norm_sq: func.l2_norm_sq(),
        support_bound: sup_norm * sup_norm * func.support_size(ZERO_TOL) as f64,
    })
}
