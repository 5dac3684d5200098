use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::function::{GroupFunction, ZERO_TOL};
use super::ops::{clamp_hs, HeckeFunction, BIEQUIVARIANCE_TOL};
use crate::error::{Error, Result};
use crate::field::CharLabel;
use crate::harmonics::{decompose, Decomposition};
use crate::setting::Setting;

/// Attempts allowed before [`HeckeSpace::random`] gives up.
pub const MAX_DRAWS: usize = 100;

/// `L¹_Φ(G, K)` for one `Φ`, with every operation reduced to values at
/// double-coset representatives.
///
/// A Hecke function is determined by one number per compatible coset:
/// `f(m_{g^l} · rep · m_{g^r}) = Φ(g^{l+r}) f(rep)`.
#[derive(Debug)]
pub struct HeckeSpace<'a> {
    setting: &'a Setting,
    phi: CharLabel,
    decomposition: Decomposition,
    compatible: Vec<bool>,
    phase: Vec<Complex64>,
    /// `transfer[π][c] = Σ_{y∈c} Φ(phase y) conj(χ_π(y))`.
    transfer: Vec<Vec<Complex64>>,
}

impl<'a> HeckeSpace<'a> {
    pub fn new(setting: &'a Setting, phi: CharLabel) -> Result<Self> {
        let g = setting.group();
        let f = setting.field();
        let cosets = setting.cosets();
        let table = setting.table();
        let phi = CharLabel::ext(f, phi.index);
        let decomposition = decompose(setting, phi)?;
        let compatible = (0..cosets.len()).map(|c| cosets.supports_character(c, phi.index)).collect();
        let phase: Vec<Complex64> =
            (0..g.order() as u32).map(|x| f.ext_char_at_log(phi.index, cosets.phase_log(x))).collect();

        let classes = table.classes().len();
        let mut weights = vec![vec![Complex64::new(0.0, 0.0); classes]; cosets.len()];
        for x in 0..g.order() as u32 {
            weights[cosets.coset_of(x)][g.class_index(x) as usize] += phase[x as usize];
        }
        let transfer = (0..table.labels().len())
            .map(|i| {
                weights.iter().map(|w| w.iter().zip(table.row(i)).map(|(a, b)| a * b.conj()).sum()).collect()
            })
            .collect();
        Ok(HeckeSpace { setting, phi, decomposition, compatible, phase, transfer })
    }

    pub fn setting(&self) -> &'a Setting {
        self.setting
    }

    pub fn phi(&self) -> CharLabel {
        self.phi
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    /// Table indices of `Ĝ^Φ`.
    pub fn constituents(&self) -> Vec<usize> {
        self.decomposition.constituent_indices()
    }

    pub fn is_compatible(&self, coset: usize) -> bool {
        self.compatible[coset]
    }

    pub fn compatible_cosets(&self) -> Vec<usize> {
        (0..self.compatible.len()).filter(|&c| self.compatible[c]).collect()
    }

    /// `dim L¹_Φ(G, K)`.
    pub fn dimension(&self) -> usize {
        self.compatible.iter().filter(|&&c| c).count()
    }

    /// Builds the Hecke function with the given value at each representative;
    /// entries for incompatible cosets are ignored.
    pub fn expand(&self, coefs: &[Complex64]) -> HeckeFunction {
        let cosets = self.setting.cosets();
        let zero = Complex64::new(0.0, 0.0);
        let func = GroupFunction::from_fn(self.setting.group(), |x| {
            let c = cosets.coset_of(x);
            if self.compatible[c] {
                self.phase[x as usize] * coefs[c]
            } else {
                zero
            }
        });
        HeckeFunction::new_unchecked(self.phi, func)
    }

    pub fn coefficients(&self, f: &GroupFunction) -> Vec<Complex64> {
        self.setting.cosets().cosets().iter().map(|c| f.get(c.representative)).collect()
    }

    /// `max_x |f(x) − Φ(phase) f(rep)|`, plus `|f(rep)|` on incompatible cosets.
    pub fn equivariance_defect(&self, f: &GroupFunction) -> f64 {
        let cosets = self.setting.cosets();
        let coefs = self.coefficients(f);
        (0..f.len() as u32)
            .map(|x| {
                let c = cosets.coset_of(x);
                let expected = if self.compatible[c] { self.phase[x as usize] * coefs[c] } else { Complex64::new(0.0, 0.0) };
                (f.get(x) - expected).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn check(&self, f: &GroupFunction) -> Result<HeckeFunction> {
        let residual = self.equivariance_defect(f);
        if residual > BIEQUIVARIANCE_TOL {
            return Err(Error::NotBiEquivariant { residual });
        }
        Ok(HeckeFunction::new_unchecked(self.phi, f.clone()))
    }

    /// The function equal to `Φ(phase)` on one coset and zero elsewhere, or
    /// `None` when `Φ` admits no such function.
    pub fn basis_function(&self, coset: usize) -> Option<HeckeFunction> {
        if !self.compatible[coset] {
            return None;
        }
        let mut coefs = vec![Complex64::new(0.0, 0.0); self.compatible.len()];
        coefs[coset] = Complex64::new(1.0, 0.0);
        Some(self.expand(&coefs))
    }

    /// `ε^Φ_K ∗ r ∗ ε^Φ_K`, via `(1/|c|) Σ_{y∈c} conj(Φ(phase y)) r(y)` at
    /// each representative.
    pub fn project(&self, r: &GroupFunction) -> HeckeFunction {
        let cosets = self.setting.cosets();
        let mut coefs = vec![Complex64::new(0.0, 0.0); cosets.len()];
        for x in 0..r.len() as u32 {
            coefs[cosets.coset_of(x)] += self.phase[x as usize].conj() * r.get(x);
        }
        for (c, v) in coefs.iter_mut().enumerate() {
            *v /= cosets.coset(c).size as f64;
        }
        self.expand(&coefs)
    }

    /// Projection of a complex Gaussian vector (real and imaginary parts
    /// `N(0, 1/2)`), redrawn while the projection vanishes.
    pub fn random(&self, seed: u64) -> Result<HeckeFunction> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid deviation");
        let g = self.setting.group();
        for _ in 0..MAX_DRAWS {
            let r = GroupFunction::from_fn(g, |_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)));
            let f = self.project(&r);
            if !f.function().is_zero(ZERO_TOL) {
                return Ok(f);
            }
        }
        Err(Error::DegenerateChannel { attempts: MAX_DRAWS })
    }

    /// `e_π ∗ f` from `(e_π ∗ f)(rep) = (d_π/|G|) Σ_u χ_π(rep · u^{-1}) f(u)`.
    pub fn isotypic(&self, label: usize, f: &HeckeFunction) -> HeckeFunction {
        let s = self.setting;
        let tables = s.rep_tables();
        let row = s.table().row(label);
        let scale = s.table().dim(label) as f64 / s.order() as f64;
        let values = f.function().values();
        let coefs: Vec<Complex64> = tables
            .class_right_inv
            .par_iter()
            .map(|classes| {
                classes.iter().zip(values).map(|(&cl, v)| row[cl as usize] * v).sum::<Complex64>() * scale
            })
            .collect();
        self.expand(&coefs)
    }

    /// `Σ_{π ∈ Ĝ^Φ} e_π ∗ f`.
    pub fn plancherel_reconstruct(&self, f: &HeckeFunction) -> Result<GroupFunction> {
        self.check(f.function())?;
        let mut out = GroupFunction::zeros(self.setting.group());
        for i in self.constituents() {
            out = &out + self.isotypic(i, f).function();
        }
        Ok(out)
    }

    /// `(f ∗ f~)` at each representative: `Σ_u f(u) conj(f(rep^{-1} u))`.
    fn autocorrelation(&self, f: &GroupFunction) -> Vec<Complex64> {
        let values = f.values();
        self.setting
            .rep_tables()
            .left_inv
            .par_iter()
            .map(|shift| values.iter().zip(shift).map(|(v, &u)| v * values[u as usize].conj()).sum())
            .collect()
    }

    /// `‖π(f)‖²_HS` for every irreducible, in table order.
    pub fn hs_norms_sq(&self, f: &HeckeFunction) -> Result<Vec<f64>> {
        let auto = self.autocorrelation(f.function());
        let scale = self.setting.order() as f64 * f.function().l2_norm_sq();
        self.transfer
            .iter()
            .map(|t| clamp_hs(t.iter().zip(&auto).map(|(a, b)| a * b).sum::<Complex64>().re, scale))
            .collect()
    }

    pub fn hs_norm_sq(&self, label: usize, f: &HeckeFunction) -> Result<f64> {
        Ok(self.hs_norms_sq(f)?[label])
    }
}
