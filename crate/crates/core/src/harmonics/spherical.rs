use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::decomposition::decompose;
use crate::chartable::IrrepLabel;
use crate::error::{Error, Result};
use crate::field::{CharLabel, ExtElem, FieldCtx};
use crate::geometry::GroupElem;
use crate::hecke::GroupFunction;
use crate::setting::Setting;

/// Normalized bi-equivariant function attached to a constituent of `Ind Φ`,
/// stored as its value at each double-coset representative.
#[derive(Clone, Debug, Serialize)]
pub struct SphericalFunction {
    pub phi: CharLabel,
    pub label: IrrepLabel,
    pub values: Vec<Complex64>,
}

impl SphericalFunction {
    /// `h(x) = Φ(g^{l+r}) · h(rep)` for `x = m_{g^l} · rep · m_{g^r}`.
    pub fn value_at(&self, s: &Setting, x: u32) -> Complex64 {
        let c = s.cosets();
        s.field().ext_char_at_log(self.phi.index, c.phase_log(x)) * self.values[c.coset_of(x)]
    }

    pub fn to_group_function(&self, s: &Setting) -> GroupFunction {
        GroupFunction::from_fn(s.group(), |x| self.value_at(s, x))
    }
}

/// `P_Φ(χ_π)` at each coset representative: `(1/|K|) Σ_k Φ̄(k) χ_π(k · rep)`.
///
/// Because `χ_π` is central this also equals `ε^Φ_K ∗ χ_π ∗ ε^Φ_K`.
pub fn projected_character(s: &Setting, phi: CharLabel, label: usize) -> Vec<Complex64> {
    let g = s.group();
    let f = s.field();
    let t = s.table();
    let n = g.torus().len() as f64;
    s.cosets()
        .cosets()
        .iter()
        .map(|c| {
            g.torus()
                .iter()
                .enumerate()
                .map(|(k, &m)| f.ext_char_at_log(phi.index, k as u32).conj() * t.value_at(g, label, g.mul_idx(m, c.representative)))
                .sum::<Complex64>()
                / n
        })
        .collect()
}

pub fn spherical_via_averaging(s: &Setting, phi: CharLabel, label: &IrrepLabel) -> Result<SphericalFunction> {
    let not_constituent = || Error::NotAConstituent { label: label.to_string() };
    let idx = s.table().label_index(label).ok_or_else(not_constituent)?;
    let raw = projected_character(s, phi, idx);
    let at_identity = raw[s.cosets().coset_of(s.group().identity_index())];
    if at_identity.norm() < 0.5 {
        return Err(not_constituent());
    }
    Ok(SphericalFunction { phi, label: *label, values: raw.iter().map(|v| v / at_identity).collect() })
}

/// Spherical functions of every constituent of `Ind Φ`, in table order.
pub fn spherical_functions(s: &Setting, phi: CharLabel) -> Result<Vec<SphericalFunction>> {
    decompose(s, phi)?.constituents().map(|l| spherical_via_averaging(s, phi, &l)).collect()
}

/// `max |h(x)h(y) − (1/|K|) Σ_k Φ̄(k) h(x k y)|` over the given pairs.
pub fn functional_equation_residual(s: &Setting, phi: CharLabel, h: &GroupFunction, pairs: &[(u32, u32)]) -> f64 {
    let g = s.group();
    let f = s.field();
    let n = g.torus().len() as f64;
    pairs
        .par_iter()
        .map(|&(x, y)| {
            let avg: Complex64 = g
                .torus()
                .iter()
                .enumerate()
                .map(|(k, &m)| f.ext_char_at_log(phi.index, k as u32).conj() * h.get(g.mul_idx(g.mul_idx(x, m), y)))
                .sum::<Complex64>()
                / n;
            (h.get(x) * h.get(y) - avg).norm()
        })
        .reduce(|| 0.0, f64::max)
}

/// All ordered pairs of double-coset representatives.
pub fn representative_pairs(s: &Setting) -> Vec<(u32, u32)> {
    let reps: Vec<u32> = s.cosets().cosets().iter().map(|c| c.representative).collect();
    reps.iter().flat_map(|&x| reps.iter().map(move |&y| (x, y))).collect()
}

/// `count` uniformly drawn pairs of group elements.
pub fn sampled_pairs(s: &Setting, count: usize, seed: u64) -> Vec<(u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.order() as u32;
    (0..count).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect()
}

/// How the trace constraint of `Γ_a` scales `Tr(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceScaling {
    /// `Tr(w) = 2 (a+1)^{-1} Tr(z)`; undefined at `a = −1`.
    Literal,
    /// `Tr(w) = (a+1) 2^{-1} Tr(z)`, the trace of `m_z · d(a,1)`.
    Reciprocal,
}

/// `Γ_a = {(z, w) : N(w) = a N(z), Tr(w) = 2 (a+1)^{-1} Tr(z)}`.
pub fn gamma_set(f: &FieldCtx, a: u32) -> Result<Vec<(ExtElem, ExtElem)>> {
    gamma_set_scaled(f, a, TraceScaling::Literal)
}

pub fn gamma_set_scaled(f: &FieldCtx, a: u32, scaling: TraceScaling) -> Result<Vec<(ExtElem, ExtElem)>> {
    let q = f.q();
    let a = a % q;
    if a == 0 || (a == q - 1 && scaling == TraceScaling::Literal) {
        return Err(Error::SingularParameter { a });
    }
    let coef = match scaling {
        TraceScaling::Literal => f.fmul(2, f.finv(a + 1)?),
        TraceScaling::Reciprocal => f.fmul(f.add(a, 1), f.finv(2)?),
    };
    let units = f.ext_units();
    let data: Vec<(u32, u32)> = units.iter().map(|&z| (f.norm(z), f.trace(z))).collect();
    let mut out = Vec::new();
    for (zi, &(nz, tz)) in data.iter().enumerate() {
        let want = (f.fmul(a, nz), f.fmul(coef, tz));
        for (wi, &nw) in data.iter().enumerate() {
            if nw == want {
                out.push((units[zi], units[wi]));
            }
        }
    }
    Ok(out)
}

/// `S^Φ_Λ(a) + q(q+1)^{-1} δ_{a,1} δ_{λ,φ}` with
/// `S^Φ_Λ(a) = −(q²−1)^{-1} Σ_{Γ_a} Φ^{-1}(z) Λ(w)`.
pub fn spherical_explicit(f: &FieldCtx, phi: CharLabel, lambda: CharLabel, a: u32) -> Result<Complex64> {
    spherical_explicit_scaled(f, phi, lambda, a, TraceScaling::Literal)
}

pub fn spherical_explicit_scaled(
    f: &FieldCtx,
    phi: CharLabel,
    lambda: CharLabel,
    a: u32,
    scaling: TraceScaling,
) -> Result<Complex64> {
    if lambda.is_frobenius_fixed(f) {
        return Err(Error::NotCuspidal { lambda: lambda.index });
    }
    let q = f.q() as f64;
    let sum: Complex64 = gamma_set_scaled(f, a, scaling)?
        .iter()
        .map(|&(z, w)| -> Result<Complex64> { Ok(f.char_eval_ext(phi, z)?.conj() * f.char_eval_ext(lambda, w)?) })
        .sum::<Result<Complex64>>()?;
    let mut value = -sum / (q * q - 1.0);
    if a % f.q() == 1 && lambda.restrict(f) == phi.restrict(f) {
        value += q / (q + 1.0);
    }
    Ok(value)
}

/// The explicit formulas against the averaging construction at `d(a,1)`.
/// `explicit` is the literal formula and is absent at `a = −1`.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaCase {
    pub phi: u32,
    pub lambda: u32,
    pub a: u32,
    pub coset_id: usize,
    pub averaging: Complex64,
    pub explicit: Option<Complex64>,
    pub residual: Option<f64>,
    pub reciprocal: Complex64,
    pub reciprocal_residual: f64,
}

/// Every cuspidal constituent of every `Ind Φ`, every `a ∈ F^×`.
pub fn zeta_comparison(s: &Setting) -> Result<Vec<ZetaCase>> {
    let f = s.field();
    (0..f.ext_order())
        .into_par_iter()
        .map(|j| zeta_cases_for(s, CharLabel::ext(f, j)))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

pub fn zeta_cases_for(s: &Setting, phi: CharLabel) -> Result<Vec<ZetaCase>> {
    let mut out = Vec::new();
    for label in decompose(s, phi)?.constituents() {
        if let IrrepLabel::Cuspidal { lambda } = label {
            out.extend(zeta_cases_for_label(s, phi, lambda)?);
        }
    }
    Ok(out)
}

pub fn zeta_cases_for_label(s: &Setting, phi: CharLabel, lambda: u32) -> Result<Vec<ZetaCase>> {
    let f = s.field();
    let g = s.group();
    let h = spherical_via_averaging(s, phi, &IrrepLabel::Cuspidal { lambda })?;
    let lam = CharLabel::ext(f, lambda);
    (1..f.q())
        .map(|a| {
            let x = g.index_of(&GroupElem::diagonal(a));
            let averaging = h.value_at(s, x);
            let explicit = match spherical_explicit(f, phi, lam, a) {
                Ok(v) => Some(v),
                Err(Error::SingularParameter { .. }) => None,
                Err(e) => return Err(e),
            };
            let reciprocal = spherical_explicit_scaled(f, phi, lam, a, TraceScaling::Reciprocal)?;
            Ok(ZetaCase {
                phi: phi.index,
                lambda,
                a,
                coset_id: s.cosets().coset_of(x),
                averaging,
                explicit,
                residual: explicit.map(|v| (v - averaging).norm()),
                reciprocal,
                reciprocal_residual: (reciprocal - averaging).norm(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{biequivariance_residual, convolve, epsilon_idempotent};

    #[test]
    fn averaging_matches_two_sided_convolution() {
        let s = Setting::new(3).unwrap();
        let g = s.group();
        for j in 0..8 {
            let phi = CharLabel::ext(s.field(), j);
            let eps = epsilon_idempotent(g, phi);
            for i in 0..s.table().labels().len() {
                let chi = GroupFunction::from_fn(g, |x| s.table().value_at(g, i, x));
                let two_sided =
                    convolve(g, &convolve(g, eps.function(), &chi).unwrap(), eps.function()).unwrap();
                let raw = projected_character(&s, phi, i);
                for c in s.cosets().cosets() {
                    assert!((two_sided.get(c.representative) - raw[c.id]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn normalization_and_trivial_example() {
        let s = Setting::new(5).unwrap();
        let trivial = CharLabel::ext(s.field(), 0);
        let h = spherical_via_averaging(&s, trivial, &IrrepLabel::OneDim { alpha: 0 }).unwrap();
        assert!(h.values.iter().all(|v| (v - 1.0).norm() < 1e-12));
        for j in 0..24 {
            let phi = CharLabel::ext(s.field(), j);
            for h in spherical_functions(&s, phi).unwrap() {
                assert!((h.value_at(&s, s.group().identity_index()) - 1.0).norm() < 1e-12);
                assert!(biequivariance_residual(s.group(), phi, &h.to_group_function(&s)) < 1e-10);
            }
        }
    }

    #[test]
    fn non_constituent_is_rejected() {
        let s = Setting::new(3).unwrap();
        let err = spherical_via_averaging(&s, CharLabel::ext(s.field(), 0), &IrrepLabel::OneDim { alpha: 1 });
        assert!(matches!(err, Err(Error::NotAConstituent { .. })));
    }

    #[test]
    fn cuspidal_at_three_by_direct_sum() {
        // h(x) = ⟨π(x)v, v⟩ = (1/|K|) Σ_k χ(k x) for Φ = 1, straight from the table
        let s = Setting::new(3).unwrap();
        let g = s.group();
        let trivial = CharLabel::ext(s.field(), 0);
        let label = IrrepLabel::Cuspidal { lambda: 2 };
        let idx = s.table().label_index(&label).unwrap();
        let h = spherical_via_averaging(&s, trivial, &label).unwrap();
        assert_eq!(h.values.len(), 3);
        let x = g.index_of(&GroupElem::diagonal(2));
        let direct: Complex64 =
            g.torus().iter().map(|&m| s.table().value_at(g, idx, g.mul_idx(m, x))).sum::<Complex64>() / 8.0;
        assert!((h.value_at(&s, x) - direct).norm() < 1e-12);
    }

    #[test]
    fn functional_equation_holds_for_sphericals() {
        for q in [3, 5] {
            let s = Setting::new(q).unwrap();
            let pairs = representative_pairs(&s);
            for j in 0..q * q - 1 {
                let phi = CharLabel::ext(s.field(), j);
                for h in spherical_functions(&s, phi).unwrap() {
                    let r = functional_equation_residual(&s, phi, &h.to_group_function(&s), &pairs);
                    assert!(r < 1e-8, "q={q} j={j} {}", h.label);
                }
            }
        }
    }

    #[test]
    fn functional_equation_rejects_sum_of_sphericals() {
        let s = Setting::new(3).unwrap();
        let phi = CharLabel::ext(s.field(), 0);
        let hs = spherical_functions(&s, phi).unwrap();
        let sum = &hs[0].to_group_function(&s) + &hs[1].to_group_function(&s);
        let r = functional_equation_residual(&s, phi, &sum, &representative_pairs(&s));
        assert!(r > 0.01);
    }

    #[test]
    fn sphericals_are_orthogonal() {
        let s = Setting::new(5).unwrap();
        for j in [0, 1, 6, 13] {
            let hs: Vec<GroupFunction> = spherical_functions(&s, CharLabel::ext(s.field(), j))
                .unwrap()
                .iter()
                .map(|h| h.to_group_function(&s))
                .collect();
            for (a, x) in hs.iter().enumerate() {
                for y in &hs[a + 1..] {
                    assert!(x.inner(y).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn gamma_set_properties() {
        for q in [3, 5, 7] {
            let f = FieldCtx::new(q).unwrap();
            assert!(matches!(gamma_set(&f, q - 1), Err(Error::SingularParameter { .. })));
            let g1 = gamma_set(&f, 1).unwrap();
            for &z in f.ext_units() {
                assert!(g1.contains(&(z, z)) && g1.contains(&(z, f.conj(z))));
            }
            for a in 1..q - 1 {
                let set = gamma_set(&f, a).unwrap();
                // brute-force count over all pairs, written independently
                let mut count = 0;
                for &z in f.ext_units() {
                    for &w in f.ext_units() {
                        let lhs_t = f.fmul(f.add(a, 1), f.trace(w));
                        if f.norm(w) == f.fmul(a, f.norm(z)) && lhs_t == f.fmul(2, f.trace(z)) {
                            count += 1;
                        }
                    }
                }
                assert_eq!(set.len(), count);
                for &(z, w) in &set {
                    assert!(set.contains(&(f.conj(z), f.conj(w))));
                }
            }
        }
    }

    #[test]
    fn explicit_formula_against_averaging() {
        for q in [3, 5, 7] {
            let s = Setting::new(q).unwrap();
            let cases = zeta_comparison(&s).unwrap();
            assert!(!cases.is_empty());
            for c in &cases {
                assert!(c.reciprocal_residual < 1e-8, "q={q} {c:?}");
                assert_eq!(c.explicit.is_none(), c.a == q - 1);
                if c.a == 1 || c.a + 3 == q {
                    // (a+1)/2 = 2/(a+1) exactly when (a+1)² = 4
                    assert!(c.residual.unwrap() < 1e-8, "q={q} {c:?}");
                }
            }
        }
        let s = Setting::new(7).unwrap();
        let literal_misses = zeta_comparison(&s).unwrap().iter().filter(|c| c.residual.is_some_and(|r| r > 1e-3)).count();
        assert!(literal_misses > 0);
    }

    #[test]
    fn reciprocal_gamma_is_defined_at_minus_one() {
        let f = FieldCtx::new(5).unwrap();
        let set = gamma_set_scaled(&f, 4, TraceScaling::Reciprocal).unwrap();
        assert!(set.iter().all(|&(_, w)| f.trace(w) == 0 && f.norm(w) != 0));
    }

    #[test]
    fn explicit_formula_domain() {
        let f = FieldCtx::new(5).unwrap();
        let phi = CharLabel::ext(&f, 0);
        assert!(matches!(spherical_explicit(&f, phi, CharLabel::ext(&f, 4), 4), Err(Error::SingularParameter { .. })));
        assert!(matches!(spherical_explicit(&f, phi, CharLabel::ext(&f, 6), 1), Err(Error::NotCuspidal { .. })));
    }
}
