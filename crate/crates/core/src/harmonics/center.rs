use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::decomposition::decompose;
use super::spherical::projected_character;
use crate::error::Result;
use crate::field::CharLabel;
use crate::hecke::{convolve, project_p_phi, GroupFunction};
use crate::setting::Setting;

/// Outcome of checking that `P_Φ` restricted to the center of `L¹(G)` is an
/// algebra map onto the center of `L¹_Φ(G, K)`.
#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub phi: u32,
    pub trials: usize,
    /// `max ‖P_Φ(f₁∗f₂) − P_Φf₁ ∗ P_Φf₂‖_∞` over the trials.
    pub multiplicativity_residual: f64,
    /// Rank of `{P_Φ(χ_π)}` over all irreducibles.
    pub image_rank: usize,
    pub constituents: usize,
}

fn random_class_function(s: &Setting, rng: &mut ChaCha8Rng) -> GroupFunction {
    let per_class: Vec<Complex64> = (0..s.table().classes().len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    GroupFunction::class_function(s.group(), &per_class)
}

pub fn multiplicativity_defect(s: &Setting, phi: CharLabel, f1: &GroupFunction, f2: &GroupFunction) -> Result<f64> {
    let g = s.group();
    let lhs = project_p_phi(g, phi, &convolve(g, f1, f2)?);
    let rhs = convolve(g, &project_p_phi(g, phi, f1), &project_p_phi(g, phi, f2))?;
    Ok(lhs.max_abs_diff(&rhs))
}

pub fn center_epimorphism_check(s: &Setting, phi: CharLabel, trials: usize, seed: u64) -> Result<CenterReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((phi.index as u64) << 32));
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f1 = random_class_function(s, &mut rng);
        let f2 = random_class_function(s, &mut rng);
        worst = worst.max(multiplicativity_defect(s, phi, &f1, &f2)?);
    }
    let images: Vec<Vec<Complex64>> =
        (0..s.table().labels().len()).map(|i| projected_character(s, phi, i)).collect();
    Ok(CenterReport {
        phi: phi.index,
        trials,
        multiplicativity_residual: worst,
        image_rank: complex_rank(images, 1e-8),
        constituents: decompose(s, phi)?.constituents().count(),
    })
}

/// Row rank by Gaussian elimination with partial pivoting.
pub fn complex_rank(mut rows: Vec<Vec<Complex64>>, tol: f64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm()))
        else {
            break;
        };
        if rows[pivot][col].norm() <= tol {
            continue;
        }
        rows.swap(rank, pivot);
        let p = rows[rank][col];
        let pivot_row = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            let factor = r[col] / p;
            for (x, y) in r.iter_mut().zip(&pivot_row) {
                *x -= factor * y;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(complex_rank(vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]], 1e-12), 1);
        assert_eq!(complex_rank(vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(3.0)]], 1e-12), 2);
        assert_eq!(complex_rank(vec![vec![c(0.0)]], 1e-12), 0);
    }

    #[test]
    fn class_sums_multiply() {
        let s = Setting::new(3).unwrap();
        let g = s.group();
        let classes = s.table().classes().len();
        let indicator = |c: usize| {
            let v: Vec<Complex64> =
                (0..classes).map(|i| Complex64::new(if i == c { 1.0 } else { 0.0 }, 0.0)).collect();
            GroupFunction::class_function(g, &v)
        };
        for j in 0..8 {
            let phi = CharLabel::ext(s.field(), j);
            for a in 0..classes {
                for b in 0..classes {
                    assert!(multiplicativity_defect(&s, phi, &indicator(a), &indicator(b)).unwrap() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn image_dimension_matches_constituents() {
        for q in [3, 5] {
            let s = Setting::new(q).unwrap();
            for j in 0..q * q - 1 {
                let r = center_epimorphism_check(&s, CharLabel::ext(s.field(), j), 3, 7).unwrap();
                assert_eq!(r.image_rank, r.constituents);
                assert!(r.multiplicativity_residual < 1e-9);
            }
        }
        let s = Setting::new(3).unwrap();
        let r = center_epimorphism_check(&s, CharLabel::ext(s.field(), 0), 1, 0).unwrap();
        assert_eq!(r.image_rank, 3);
    }

    #[test]
    fn non_central_factor_breaks_multiplicativity() {
        let s = Setting::new(3).unwrap();
        let g = s.group();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f1 = random_class_function(&s, &mut rng);
        let f2 = GroupFunction::from_fn(g, |_| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        let phi = CharLabel::ext(s.field(), 1);
        assert!(multiplicativity_defect(&s, phi, &f2, &f1).unwrap() > 1e-3);
    }
}
