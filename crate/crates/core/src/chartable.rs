//! The character table of `GL(2, q)` from the four standard families, its
//! restriction to the torus, and the twisting identities on `K`.
//!
//! Irreducibles are labelled by dual indices: `OneDim(α)` is `α ∘ det`,
//! `Steinberg(α)` its `q`-dimensional companion, `Principal(α, β)` with
//! `α < β` the principal series of dimension `q + 1`, and `Cuspidal(Λ)` the
//! `(q − 1)`-dimensional representation attached to the Frobenius orbit
//! `{Λ, Λ^q}` with `Λ ≠ Λ^q`, stored by its smaller index.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::geometry::{ClassLabel, Gl2};

/// Orthogonality residual above which the table is rejected.
pub const TABLE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "family")]
pub enum IrrepLabel {
    OneDim { alpha: u32 },
    Steinberg { alpha: u32 },
    Principal { alpha: u32, beta: u32 },
    Cuspidal { lambda: u32 },
}

impl IrrepLabel {
    pub fn dim(&self, q: u32) -> u32 {
        match self {
            IrrepLabel::OneDim { .. } => 1,
            IrrepLabel::Steinberg { .. } => q,
            IrrepLabel::Principal { .. } => q + 1,
            IrrepLabel::Cuspidal { .. } => q - 1,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            IrrepLabel::OneDim { .. } => "one-dim",
            IrrepLabel::Steinberg { .. } => "steinberg",
            IrrepLabel::Principal { .. } => "principal",
            IrrepLabel::Cuspidal { .. } => "cuspidal",
        }
    }

    pub fn params(&self) -> Vec<u32> {
        match *self {
            IrrepLabel::OneDim { alpha } | IrrepLabel::Steinberg { alpha } => vec![alpha],
            IrrepLabel::Principal { alpha, beta } => vec![alpha, beta],
            IrrepLabel::Cuspidal { lambda } => vec![lambda],
        }
    }

    /// All `q² − 1` labels, families in the order above.
    pub fn enumerate(f: &FieldCtx) -> Vec<IrrepLabel> {
        let q = f.q();
        let m = f.base_order();
        let n = f.ext_order();
        let mut out = Vec::with_capacity((q * q - 1) as usize);
        out.extend((0..m).map(|alpha| IrrepLabel::OneDim { alpha }));
        out.extend((0..m).map(|alpha| IrrepLabel::Steinberg { alpha }));
        for alpha in 0..m {
            for beta in alpha + 1..m {
                out.push(IrrepLabel::Principal { alpha, beta });
            }
        }
        for lambda in 0..n {
            if lambda % (q + 1) != 0 && lambda < frob(f, lambda) {
                out.push(IrrepLabel::Cuspidal { lambda });
            }
        }
        out
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::OneDim { alpha } => write!(f, "1[{alpha}]"),
            IrrepLabel::Steinberg { alpha } => write!(f, "St[{alpha}]"),
            IrrepLabel::Principal { alpha, beta } => write!(f, "PS[{alpha},{beta}]"),
            IrrepLabel::Cuspidal { lambda } => write!(f, "Cusp[{lambda}]"),
        }
    }
}

fn frob(f: &FieldCtx, j: u32) -> u32 {
    (j as u64 * f.q() as u64 % f.ext_order() as u64) as u32
}

/// A signed integer combination of irreducible labels.
///
/// Principal-series and cuspidal parameters that fall on the degenerate
/// locus resolve to `π^{q+1}_{α,α} = π^q_α + π^1_α` and
/// `π^{q−1}_{α∘N} = π^q_α − π^1_α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VirtualCharacter {
    pub terms: Vec<(i64, IrrepLabel)>,
}

impl VirtualCharacter {
    pub fn irreducible(label: IrrepLabel) -> Self {
        VirtualCharacter { terms: vec![(1, label)] }
    }

    /// `π^{q+1}_{α,β}` for any pair of characters of `F^×`.
    pub fn principal(f: &FieldCtx, alpha: u32, beta: u32) -> Self {
        let m = f.base_order();
        let (alpha, beta) = (alpha % m, beta % m);
        if alpha == beta {
            VirtualCharacter {
                terms: vec![(1, IrrepLabel::Steinberg { alpha }), (1, IrrepLabel::OneDim { alpha })],
            }
        } else {
            let (alpha, beta) = (alpha.min(beta), alpha.max(beta));
            Self::irreducible(IrrepLabel::Principal { alpha, beta })
        }
    }

    /// `π^{q−1}_Λ` for any character of `E^×`.
    pub fn cuspidal(f: &FieldCtx, lambda: u32) -> Self {
        let q = f.q();
        let lambda = lambda % f.ext_order();
        if lambda.is_multiple_of(q + 1) {
            let alpha = lambda / (q + 1);
            VirtualCharacter {
                terms: vec![(1, IrrepLabel::Steinberg { alpha }), (-1, IrrepLabel::OneDim { alpha })],
            }
        } else {
            Self::irreducible(IrrepLabel::Cuspidal { lambda: lambda.min(frob(f, lambda)) })
        }
    }

    pub fn plus(mut self, other: VirtualCharacter) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn minus(mut self, other: VirtualCharacter) -> Self {
        self.terms.extend(other.terms.into_iter().map(|(c, l)| (-c, l)));
        self
    }
}

/// Residuals of the orthogonality relations recorded at construction.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct TableValidation {
    pub row_residual: f64,
    pub column_residual: f64,
    pub dimension_square_sum: u64,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    q: u32,
    labels: Vec<IrrepLabel>,
    index: HashMap<IrrepLabel, usize>,
    classes: Vec<ClassLabel>,
    class_sizes: Vec<u64>,
    values: Vec<Complex64>,
    group_order: u64,
    validation: TableValidation,
}

impl CharacterTable {
    /// Builds the table from closed-form family formulas and refuses to return
    /// it unless both orthogonality relations hold.
    pub fn build(g: &Gl2) -> Result<Self> {
        let f = g.field();
        let labels = IrrepLabel::enumerate(f);
        let classes: Vec<ClassLabel> = g.classes().iter().map(|c| c.label).collect();
        let class_sizes: Vec<u64> = g.classes().iter().map(|c| c.size).collect();
        let values = labels
            .iter()
            .flat_map(|l| classes.iter().map(move |c| character_value(f, l, c)))
            .collect();
        let mut table = CharacterTable {
            q: f.q(),
            index: labels.iter().enumerate().map(|(i, l)| (*l, i)).collect(),
            labels,
            classes,
            class_sizes,
            values,
            group_order: g.order() as u64,
            validation: TableValidation::default(),
        };
        table.validation = table.validate();
        let worst = table.validation.row_residual.max(table.validation.column_residual);
        if worst > TABLE_TOLERANCE || table.validation.dimension_square_sum != table.group_order {
            return Err(Error::ValidationFailed { residual: worst });
        }
        Ok(table)
    }

    fn validate(&self) -> TableValidation {
        let r = self.labels.len();
        let c = self.classes.len();
        let order = self.group_order as f64;
        let row_residual = (0..r)
            .into_par_iter()
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let s: Complex64 = (0..c)
                            .map(|k| self.class_sizes[k] as f64 * self.row(i)[k] * self.row(j)[k].conj())
                            .sum();
                        let target = if i == j { 1.0 } else { 0.0 };
                        (s / order - target).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        let column_residual = (0..c)
            .into_par_iter()
            .map(|k| {
                (0..c)
                    .map(|l| {
                        let s: Complex64 = (0..r).map(|i| self.row(i)[k] * self.row(i)[l].conj()).sum();
                        let target = if k == l { 1.0 } else { 0.0 };
                        (s * self.class_sizes[k] as f64 / order - target).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        let dimension_square_sum = self.labels.iter().map(|l| (l.dim(self.q) as u64).pow(2)).sum();
        TableValidation { row_residual, column_residual, dimension_square_sum }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn validation(&self) -> TableValidation {
        self.validation
    }

    pub fn labels(&self) -> &[IrrepLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> IrrepLabel {
        self.labels[i]
    }

    pub fn label_index(&self, label: &IrrepLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn classes(&self) -> &[ClassLabel] {
        &self.classes
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn dim(&self, i: usize) -> u32 {
        self.labels[i].dim(self.q)
    }

    /// Character values of label `i` on every class.
    pub fn row(&self, i: usize) -> &[Complex64] {
        let c = self.classes.len();
        &self.values[i * c..(i + 1) * c]
    }

    #[inline]
    pub fn value(&self, label: usize, class: usize) -> Complex64 {
        self.values[label * self.classes.len() + class]
    }

    #[inline]
    pub fn value_at(&self, g: &Gl2, label: usize, x: u32) -> Complex64 {
        self.value(label, g.class_index(x) as usize)
    }

    /// `z ↦ χ(m_z)`, indexed by the discrete log of `z`.
    pub fn restrict_to_torus(&self, g: &Gl2, label: usize) -> Vec<Complex64> {
        g.torus().iter().map(|&x| self.value_at(g, label, x)).collect()
    }

    pub fn restrict_virtual(&self, g: &Gl2, chi: &VirtualCharacter) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); g.torus().len()];
        for (coef, label) in &chi.terms {
            let i = self.index[label];
            for (o, v) in out.iter_mut().zip(self.restrict_to_torus(g, i)) {
                *o += *coef as f64 * v;
            }
        }
        out
    }
}

/// Standard formulas for the four families on the four class types.
fn character_value(f: &FieldCtx, label: &IrrepLabel, class: &ClassLabel) -> Complex64 {
    let q = f.q() as f64;
    let dl = |x: u32| f.discrete_log_base(x).expect("class parameters are units") as u64;
    let zero = Complex64::new(0.0, 0.0);
    match (*label, *class) {
        (IrrepLabel::OneDim { alpha }, ClassLabel::Central(a) | ClassLabel::Unipotent(a)) => {
            f.base_root(2 * alpha as u64 * dl(a))
        }
        (IrrepLabel::OneDim { alpha }, ClassLabel::Split(a, b)) => f.base_root(alpha as u64 * (dl(a) + dl(b))),
        (IrrepLabel::OneDim { alpha }, ClassLabel::Elliptic(z, _)) => {
            f.base_root(alpha as u64 * f.discrete_log(z).unwrap() as u64)
        }
        (IrrepLabel::Steinberg { alpha }, ClassLabel::Central(a)) => q * f.base_root(2 * alpha as u64 * dl(a)),
        (IrrepLabel::Steinberg { .. }, ClassLabel::Unipotent(_)) => zero,
        (IrrepLabel::Steinberg { alpha }, ClassLabel::Split(a, b)) => f.base_root(alpha as u64 * (dl(a) + dl(b))),
        (IrrepLabel::Steinberg { alpha }, ClassLabel::Elliptic(z, _)) => {
            -f.base_root(alpha as u64 * f.discrete_log(z).unwrap() as u64)
        }
        (IrrepLabel::Principal { alpha, beta }, ClassLabel::Central(a)) => {
            (q + 1.0) * f.base_root((alpha + beta) as u64 * dl(a))
        }
        (IrrepLabel::Principal { alpha, beta }, ClassLabel::Unipotent(a)) => {
            f.base_root((alpha + beta) as u64 * dl(a))
        }
        (IrrepLabel::Principal { alpha, beta }, ClassLabel::Split(a, b)) => {
            let (ka, kb) = (dl(a), dl(b));
            f.base_root(alpha as u64 * ka + beta as u64 * kb) + f.base_root(alpha as u64 * kb + beta as u64 * ka)
        }
        (IrrepLabel::Principal { .. }, ClassLabel::Elliptic(..)) => zero,
        (IrrepLabel::Cuspidal { lambda }, ClassLabel::Central(a)) => {
            (q - 1.0) * f.ext_root(lambda as u64 * dl(a) * (f.q() as u64 + 1))
        }
        (IrrepLabel::Cuspidal { lambda }, ClassLabel::Unipotent(a)) => {
            -f.ext_root(lambda as u64 * dl(a) * (f.q() as u64 + 1))
        }
        (IrrepLabel::Cuspidal { .. }, ClassLabel::Split(..)) => zero,
        (IrrepLabel::Cuspidal { lambda }, ClassLabel::Elliptic(z, zq)) => {
            -(f.ext_root(lambda as u64 * f.discrete_log(z).unwrap() as u64)
                + f.ext_root(lambda as u64 * f.discrete_log(zq).unwrap() as u64))
        }
    }
}

/// Worst pointwise deviation on `K` of each twisting identity for `(Φ + Φ^q)`.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct TwistingResidual {
    /// `(Φ+Φ^q)χ^q_α = χ^{q−1}_{Φ(α∘N)} + χ^{q+1}_{φα,α}`
    pub steinberg: f64,
    /// `(Φ+Φ^q)χ^1_α = χ^{q+1}_{φα,α} − χ^{q−1}_{Φ(α∘N)}`
    pub one_dim: f64,
    /// `(Φ+Φ^q)χ^{q+1}_{α,β} = χ^{q+1}_{φα,β} + χ^{q+1}_{α,φβ}`
    pub principal: f64,
    /// `(Φ+Φ^q)χ^{q−1}_Λ = χ^{q−1}_{ΦΛ} + χ^{q−1}_{Φ^qΛ}`
    pub cuspidal: f64,
}

impl TwistingResidual {
    pub fn max(&self) -> f64 {
        self.steinberg.max(self.one_dim).max(self.principal).max(self.cuspidal)
    }
}

/// Checks the four twisting identities pointwise on `K` for `Φ = Φ_j`,
/// over every parameter of each family.
pub fn twisting_identity_residual(g: &Gl2, table: &CharacterTable, j: u32) -> TwistingResidual {
    let f = g.field();
    let q = f.q();
    let n = f.ext_order();
    let m = f.base_order();
    let j = j % n;
    let phi_res = j % m;
    let jq = frob(f, j);
    let twist: Vec<Complex64> =
        (0..n).map(|k| f.ext_char_at_log(j, k) + f.ext_char_at_log(jq, k)).collect();
    let dev = |lhs: &VirtualCharacter, rhs: &VirtualCharacter| -> f64 {
        let l = table.restrict_virtual(g, lhs);
        let r = table.restrict_virtual(g, rhs);
        l.iter().zip(&r).zip(&twist).map(|((a, b), t)| (t * a - b).norm()).fold(0.0, f64::max)
    };

    let mut out = TwistingResidual::default();
    for alpha in 0..m {
        let cusp = VirtualCharacter::cuspidal(f, j + alpha * (q + 1));
        let ps = VirtualCharacter::principal(f, phi_res + alpha, alpha);
        let st = VirtualCharacter::irreducible(IrrepLabel::Steinberg { alpha });
        let one = VirtualCharacter::irreducible(IrrepLabel::OneDim { alpha });
        out.steinberg = out.steinberg.max(dev(&st, &cusp.clone().plus(ps.clone())));
        out.one_dim = out.one_dim.max(dev(&one, &ps.minus(cusp)));
    }
    for alpha in 0..m {
        for beta in alpha + 1..m {
            let lhs = VirtualCharacter::irreducible(IrrepLabel::Principal { alpha, beta });
            let rhs = VirtualCharacter::principal(f, phi_res + alpha, beta)
                .plus(VirtualCharacter::principal(f, alpha, phi_res + beta));
            out.principal = out.principal.max(dev(&lhs, &rhs));
        }
    }
    for label in table.labels() {
        if let IrrepLabel::Cuspidal { lambda } = *label {
            let lhs = VirtualCharacter::irreducible(*label);
            let rhs = VirtualCharacter::cuspidal(f, j + lambda).plus(VirtualCharacter::cuspidal(f, jq + lambda));
            out.cuspidal = out.cuspidal.max(dev(&lhs, &rhs));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExtElem;

    fn setup(q: u32) -> (Gl2, CharacterTable) {
        let g = Gl2::new(FieldCtx::new(q).unwrap());
        let t = CharacterTable::build(&g).unwrap();
        (g, t)
    }

    #[test]
    fn label_counts_and_dimensions() {
        for q in [3u32, 5, 7, 11] {
            let f = FieldCtx::new(q).unwrap();
            let labels = IrrepLabel::enumerate(&f);
            assert_eq!(labels.len() as u32, q * q - 1);
            let dims: u64 = labels.iter().map(|l| (l.dim(q) as u64).pow(2)).sum();
            assert_eq!(dims, ((q * q - 1) * (q * q - q)) as u64);
        }
    }

    #[test]
    fn q3_table_is_orthogonal() {
        let (_, t) = setup(3);
        assert_eq!(t.labels().len(), 8);
        assert!(t.validation().row_residual < 1e-12);
        assert!(t.validation().column_residual < 1e-12);
    }

    #[test]
    fn orthogonality_through_q11() {
        for q in [5, 7, 11] {
            let (_, t) = setup(q);
            assert!(t.validation().row_residual < 1e-8);
            assert!(t.validation().column_residual < 1e-8);
        }
    }

    #[test]
    fn brute_force_inner_products_over_elements() {
        // sums over all group elements rather than weighted class sums
        let (g, t) = setup(3);
        for i in 0..t.labels().len() {
            for j in 0..t.labels().len() {
                let s: Complex64 = (0..g.order() as u32)
                    .map(|x| t.value_at(&g, i, x) * t.value_at(&g, j, x).conj())
                    .sum();
                let target = if i == j { g.order() as f64 } else { 0.0 };
                assert!((s - target).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn value_examples() {
        let (g, t) = setup(5);
        let f = g.field();
        for alpha in 0..4 {
            let i = t.label_index(&IrrepLabel::OneDim { alpha }).unwrap();
            for a in 1..5 {
                let class = g.classes().iter().position(|c| c.label == ClassLabel::Central(a)).unwrap();
                let expected = f.char_eval_base(crate::field::CharLabel::base(f, alpha), a * a % 5).unwrap();
                assert!((t.value(i, class) - expected).norm() < 1e-12);
            }
        }
        let e = g.identity_index();
        for (i, l) in t.labels().iter().enumerate() {
            assert!((t.value_at(&g, i, e) - l.dim(5) as f64).norm() < 1e-12);
        }
    }

    #[test]
    fn q3_cuspidal_elliptic_value() {
        let (g, t) = setup(3);
        let i = t.label_index(&IrrepLabel::Cuspidal { lambda: 2 }).unwrap();
        let restricted = t.restrict_to_torus(&g, i);
        let f = g.field();
        let expected = -(f.ext_char_at_log(2, 1) + f.ext_char_at_log(2, 3));
        assert!((restricted[1] - expected).norm() < 1e-12);
        assert!(restricted[1].norm() < 1e-12);
    }

    #[test]
    fn one_dim_restricts_through_the_norm() {
        let (g, t) = setup(7);
        let f = g.field();
        for alpha in 0..6 {
            let i = t.label_index(&IrrepLabel::OneDim { alpha }).unwrap();
            for (k, v) in t.restrict_to_torus(&g, i).into_iter().enumerate() {
                let z = f.ext_exp(k as u64);
                let expected = f.char_eval_base(crate::field::CharLabel::base(f, alpha), f.norm(z)).unwrap();
                assert!((v - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn restrictions_are_frobenius_invariant() {
        for q in [3, 5, 7] {
            let (g, t) = setup(q);
            let f = g.field();
            for i in 0..t.labels().len() {
                let r = t.restrict_to_torus(&g, i);
                for (k, v) in r.iter().enumerate() {
                    let z: ExtElem = f.ext_exp(k as u64);
                    let kq = f.discrete_log(f.conj(z)).unwrap() as usize;
                    assert!((v - r[kq]).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn degenerate_parameters_resolve_to_virtual_sums() {
        let f = FieldCtx::new(5).unwrap();
        let v = VirtualCharacter::principal(&f, 2, 6);
        assert_eq!(v.terms, vec![(1, IrrepLabel::Steinberg { alpha: 2 }), (1, IrrepLabel::OneDim { alpha: 2 })]);
        let c = VirtualCharacter::cuspidal(&f, 12);
        assert_eq!(c.terms, vec![(1, IrrepLabel::Steinberg { alpha: 2 }), (-1, IrrepLabel::OneDim { alpha: 2 })]);
        assert_eq!(
            VirtualCharacter::cuspidal(&f, 5).terms,
            vec![(1, IrrepLabel::Cuspidal { lambda: 1 })],
            "5 = 1·5 lies in the Frobenius orbit of 1"
        );
    }

    #[test]
    fn twisting_identities_hold() {
        for q in [3, 5] {
            let (g, t) = setup(q);
            for j in 0..q * q - 1 {
                let r = twisting_identity_residual(&g, &t, j);
                assert!(r.max() < 1e-9, "q={q} j={j} {r:?}");
            }
        }
    }

    #[test]
    fn twisting_by_trivial_character_doubles() {
        let (g, t) = setup(5);
        assert!(twisting_identity_residual(&g, &t, 0).max() < 1e-12);
    }
}
