use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use super::spherical::spherical_via_averaging;
use crate::chartable::IrrepLabel;
use crate::error::{Error, Result};
use crate::field::{CharLabel, FieldCtx};
use crate::geometry::GroupElem;
use crate::setting::Setting;

/// Readings of the factor `(εω)(u)` in the alternate formula; `ω` is always
/// `Λ` restricted to the norm-one circle `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KatzInterpretation {
    /// `ω(u)` with no extra sign.
    OmegaOnly,
    /// `ε(Tr u) ω(u)`.
    TraceSign,
    /// `η(u) ω(u)`, `η` the quadratic character of the cyclic group `U`.
    CircleQuadratic,
    /// `ε(Tr(u)² − 4) ω(u)`.
    DiscriminantSign,
}

impl KatzInterpretation {
    pub const ALL: [KatzInterpretation; 4] = [
        KatzInterpretation::OmegaOnly,
        KatzInterpretation::TraceSign,
        KatzInterpretation::CircleQuadratic,
        KatzInterpretation::DiscriminantSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KatzInterpretation::OmegaOnly => "omega-only",
            KatzInterpretation::TraceSign => "trace-sign",
            KatzInterpretation::CircleQuadratic => "circle-quadratic",
            KatzInterpretation::DiscriminantSign => "discriminant-sign",
        }
    }

    /// 1-based position in [`Self::ALL`].
    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&i| i == self).unwrap() + 1
    }
}

impl fmt::Display for KatzInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KatzInterpretation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|i| i.name() == s).ok_or_else(|| Error::UnsupportedInterpretation(s.to_string()))
    }
}

/// `(q+1)^{-1} Σ_{u∈U} ε(Tr(u) − (a + a^{-1})) · (εω)(u)` with `ε(0) = 0`.
pub fn katz_candidate(f: &FieldCtx, lambda: CharLabel, a: u32, interpretation: KatzInterpretation) -> Result<Complex64> {
    let q = f.q();
    let a = a % q;
    if a == 0 || a == 1 {
        return Err(Error::SingularParameter { a });
    }
    let shift = f.add(a, f.finv(a)?);
    let circle = f.norm_one_circle();
    let mut total = Complex64::new(0.0, 0.0);
    for (i, &u) in circle.iter().enumerate() {
        let tr = f.trace(u);
        let outer = f.sign(f.sub(tr, shift)) as f64;
        let inner = match interpretation {
            KatzInterpretation::OmegaOnly => 1.0,
            KatzInterpretation::TraceSign => f.sign(tr) as f64,
            KatzInterpretation::CircleQuadratic => {
                if i % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            KatzInterpretation::DiscriminantSign => f.sign(f.sub(f.fmul(tr, tr), 4 % q)) as f64,
        };
        total += outer * inner * f.char_eval_ext(lambda, u)?;
    }
    Ok(total / (q + 1) as f64)
}

/// One `(Λ, a)` comparison under one interpretation.
#[derive(Clone, Debug, Serialize)]
pub struct KatzCase {
    pub lambda: u32,
    pub a: u32,
    pub interpretation: KatzInterpretation,
    pub candidate: Complex64,
    pub oracle: Complex64,
    pub residual: f64,
}

/// Agreement rate of one interpretation across all cases.
#[derive(Clone, Debug, Serialize)]
pub struct KatzSummary {
    pub interpretation: KatzInterpretation,
    pub cases: usize,
    pub agreements: usize,
    pub max_residual: f64,
}

/// Every `Λ` with `Λ|_F = 1` and `Λ ≠ Λ^q`, every `a ∉ {0, ±1}`, every
/// interpretation, compared with the spherical function of `Ind 1`.
pub fn katz_scan(s: &Setting, tol: f64) -> Result<(Vec<KatzCase>, Vec<KatzSummary>)> {
    let f = s.field();
    let g = s.group();
    let q = f.q();
    let trivial = CharLabel::ext(f, 0);
    let mut cases = Vec::new();
    for lambda in (0..f.ext_order()).map(|j| CharLabel::ext(f, j)) {
        if !lambda.restrict(f).is_trivial() || lambda.is_frobenius_fixed(f) {
            continue;
        }
        let canonical = lambda.index.min(lambda.frobenius(f).index);
        let h = spherical_via_averaging(s, trivial, &IrrepLabel::Cuspidal { lambda: canonical })?;
        for a in 2..q - 1 {
            let oracle = h.value_at(s, g.index_of(&GroupElem::diagonal(a)));
            for interpretation in KatzInterpretation::ALL {
                let candidate = katz_candidate(f, lambda, a, interpretation)?;
                cases.push(KatzCase {
                    lambda: lambda.index,
                    a,
                    interpretation,
                    candidate,
                    oracle,
                    residual: (candidate - oracle).norm(),
                });
            }
        }
    }
    let summaries = KatzInterpretation::ALL
        .iter()
        .map(|&interpretation| {
            let mine: Vec<&KatzCase> = cases.iter().filter(|c| c.interpretation == interpretation).collect();
            KatzSummary {
                interpretation,
                cases: mine.len(),
                agreements: mine.iter().filter(|c| c.residual < tol).count(),
                max_residual: mine.iter().map(|c| c.residual).fold(0.0, f64::max),
            }
        })
        .collect();
    Ok((cases, summaries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject() {
        for i in KatzInterpretation::ALL {
            assert_eq!(i.name().parse::<KatzInterpretation>().unwrap(), i);
        }
        assert!(matches!("tau".parse::<KatzInterpretation>(), Err(Error::UnsupportedInterpretation(_))));
        assert_eq!(KatzInterpretation::DiscriminantSign.number(), 4);
    }

    #[test]
    fn circle_has_q_plus_one_points() {
        for q in [3, 5, 7, 11] {
            let f = FieldCtx::new(q).unwrap();
            let u = f.norm_one_circle();
            assert_eq!(u.len() as u32, q + 1);
            assert!(u.iter().all(|&x| f.norm(x) == 1));
        }
    }

    #[test]
    fn symmetric_in_a_and_its_inverse() {
        let f = FieldCtx::new(7).unwrap();
        let lambda = CharLabel::ext(&f, 6);
        for i in KatzInterpretation::ALL {
            for a in 2..6 {
                let b = f.finv(a).unwrap();
                let x = katz_candidate(&f, lambda, a, i).unwrap();
                let y = katz_candidate(&f, lambda, b, i).unwrap();
                assert!((x - y).norm() < 1e-12);
            }
        }
        assert!(matches!(katz_candidate(&f, lambda, 1, KatzInterpretation::OmegaOnly), Err(Error::SingularParameter { .. })));
    }

    #[test]
    fn scan_covers_every_case() {
        let s = Setting::new(5).unwrap();
        let (cases, summaries) = katz_scan(&s, 1e-8).unwrap();
        // trivial on F^×: multiples of 4; Frobenius-fixed: multiples of 6
        let lambdas = (0..24).filter(|j| j % 4 == 0 && (j * 5) % 24 != *j).count();
        assert_eq!(cases.len(), lambdas * 2 * 4);
        assert_eq!(summaries.len(), 4);
    }
}
