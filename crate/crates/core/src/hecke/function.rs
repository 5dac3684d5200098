use std::ops::{Add, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Gl2;

/// Values below this magnitude count as zero in support queries.
pub const ZERO_TOL: f64 = 1e-8;

/// A complex function on `G`, stored densely in enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction {
    q: u32,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn zeros(g: &Gl2) -> Self {
        GroupFunction { q: g.q(), values: vec![Complex64::new(0.0, 0.0); g.order()] }
    }

    pub fn from_values(g: &Gl2, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), g.order(), "one value per group element");
        GroupFunction { q: g.q(), values }
    }

    pub fn from_fn(g: &Gl2, f: impl FnMut(u32) -> Complex64) -> Self {
        GroupFunction { q: g.q(), values: (0..g.order() as u32).map(f).collect() }
    }

    pub fn point_mass(g: &Gl2, x: u32) -> Self {
        let mut out = Self::zeros(g);
        out.values[x as usize] = Complex64::new(1.0, 0.0);
        out
    }

    /// Class function with the given value on each conjugacy class.
    pub fn class_function(g: &Gl2, per_class: &[Complex64]) -> Self {
        Self::from_fn(g, |x| per_class[g.class_index(x) as usize])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, x: u32) -> Complex64 {
        self.values[x as usize]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GroupFunction { q: self.q, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `Σ_x f(x) conj(h(x))`.
    pub fn inner(&self, other: &GroupFunction) -> Complex64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn max_abs_diff(&self, other: &GroupFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Copy with every value of magnitude below `tol` set to zero.
    pub fn cleaned(&self, tol: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        GroupFunction {
            q: self.q,
            values: self.values.iter().map(|&v| if v.norm() < tol { zero } else { v }).collect(),
        }
    }

    /// `|supp(f)|` after cleaning at `tol`.
    pub fn support_size(&self, tol: f64) -> usize {
        self.values.iter().filter(|v| v.norm() >= tol).count()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.support_size(tol) == 0
    }

    /// `f~(x) = conj(f(x^{-1}))`.
    pub fn involution(&self, g: &Gl2) -> Self {
        GroupFunction::from_fn(g, |x| self.get(g.inv_idx(x)).conj())
    }

    fn check_same(&self, other: &GroupFunction) -> Result<()> {
        if self.q != other.q || self.values.len() != other.values.len() {
            return Err(Error::ContextMismatch { left: self.q, right: other.q });
        }
        Ok(())
    }
}

impl Add for &GroupFunction {
    type Output = GroupFunction;

    fn add(self, rhs: &GroupFunction) -> GroupFunction {
        assert_eq!(self.q, rhs.q);
        GroupFunction { q: self.q, values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &GroupFunction {
    type Output = GroupFunction;

    fn sub(self, rhs: &GroupFunction) -> GroupFunction {
        assert_eq!(self.q, rhs.q);
        GroupFunction { q: self.q, values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

/// `(f ∗ h)(x) = Σ_y f(y) h(y^{-1} x)` with counting measure.
///
/// The outer loop over `x` runs in parallel; zeros of `f` are skipped.
pub fn convolve(g: &Gl2, f: &GroupFunction, h: &GroupFunction) -> Result<GroupFunction> {
    f.check_same(h)?;
    if f.q != g.q() || f.len() != g.order() {
        return Err(Error::ContextMismatch { left: f.q, right: g.q() });
    }
    let nonzero: Vec<(u32, Complex64)> = f
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
        .map(|(y, v)| (g.inv_idx(y as u32), *v))
        .collect();
    let values = (0..g.order() as u32)
        .into_par_iter()
        .map(|x| nonzero.iter().map(|&(y_inv, fy)| fy * h.get(g.mul_idx(y_inv, x))).sum())
        .collect();
    Ok(GroupFunction { q: f.q, values })
}
