//! Prime fields `F_q`, the quadratic extension `E = F_q(√δ)` and their
//! character groups.
//!
//! Every character is addressed by its dual index with respect to a fixed
//! generator: `Φ_j(g_E^k) = exp(2πi·jk/(q²−1))` on `E^×` and
//! `α_i(g_F^k) = exp(2πi·ik/(q−1))` on `F^×`, where `g_F = N(g_E)`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_CAP: u32 = 31;

/// An element `a + b√δ` of `E`, coefficients reduced mod `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtElem {
    pub a: u32,
    pub b: u32,
}

impl ExtElem {
    pub const ZERO: ExtElem = ExtElem { a: 0, b: 0 };
    pub const ONE: ExtElem = ExtElem { a: 1, b: 0 };

    pub fn new(a: u32, b: u32) -> Self {
        ExtElem { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// True when the element lies in the base field.
    pub fn is_base(self) -> bool {
        self.b == 0
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}r"),
            (a, b) => write!(f, "{a}+{b}r"),
        }
    }
}

/// Norm, trace and Frobenius conjugate of an element of `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjugationData {
    pub norm: u32,
    pub trace: u32,
    pub conj: ExtElem,
}

/// A character of `F^×` or `E^×` given by its dual index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CharLabel {
    pub modulus: u32,
    pub index: u32,
}

impl CharLabel {
    pub fn ext(ctx: &FieldCtx, j: u32) -> Self {
        let m = ctx.ext_order();
        CharLabel { modulus: m, index: j % m }
    }

    pub fn base(ctx: &FieldCtx, i: u32) -> Self {
        let m = ctx.base_order();
        CharLabel { modulus: m, index: i % m }
    }

    pub fn is_trivial(self) -> bool {
        self.index == 0
    }

    /// `Φ|_{F^×}`: the restriction of a character of `E^×` is `α_{j mod (q−1)}`.
    pub fn restrict(self, ctx: &FieldCtx) -> CharLabel {
        CharLabel::base(ctx, self.index % ctx.base_order())
    }

    /// `Φ^q = Φ ∘ Frob`.
    pub fn frobenius(self, ctx: &FieldCtx) -> CharLabel {
        CharLabel::ext(ctx, (self.index as u64 * ctx.q() as u64 % ctx.ext_order() as u64) as u32)
    }

    /// `α ∘ N` for a character `α` of `F^×`.
    pub fn norm_pullback(self, ctx: &FieldCtx) -> CharLabel {
        CharLabel::ext(ctx, self.index * (ctx.q() + 1))
    }

    /// `Φ = Φ^q`, i.e. `(q+1) | j`.
    pub fn is_frobenius_fixed(self, ctx: &FieldCtx) -> bool {
        self.index.is_multiple_of(ctx.q() + 1)
    }

    pub fn product(self, other: CharLabel) -> CharLabel {
        debug_assert_eq!(self.modulus, other.modulus);
        CharLabel { modulus: self.modulus, index: (self.index + other.index) % self.modulus }
    }

    pub fn inverse(self) -> CharLabel {
        CharLabel { modulus: self.modulus, index: (self.modulus - self.index) % self.modulus }
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)
    }
}

/// Arithmetic context for one odd prime `q`.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    q: u32,
    delta: u32,
    gen_e: ExtElem,
    gen_f: u32,
    inv: Vec<u32>,
    dlog_e: Vec<u32>,
    exp_e: Vec<ExtElem>,
    dlog_f: Vec<u32>,
    exp_f: Vec<u32>,
    roots_e: Vec<Complex64>,
    roots_f: Vec<Complex64>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn roots_of_unity(n: u32) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
}

impl FieldCtx {
    pub fn new(q: u32) -> Result<Self> {
        Self::with_cap(q, DEFAULT_CAP)
    }

    /// Accepts exactly the odd primes `q ≤ cap`.
    pub fn check_modulus(q: u32, cap: u32) -> Result<()> {
        if q == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(q) {
            return Err(Error::NonPrime(q));
        }
        if q > cap {
            return Err(Error::CapExceeded { q, cap });
        }
        Ok(())
    }

    pub fn with_cap(q: u32, cap: u32) -> Result<Self> {
        Self::check_modulus(q, cap)?;

        let mut inv = vec![0; q as usize];
        for x in 1..q {
            inv[x as usize] = (1..q).find(|y| x * y % q == 1).expect("prime field");
        }
        let delta = (2..q)
            .find(|&d| pow_mod(d, (q - 1) / 2, q) == q - 1)
            .expect("odd prime has a non-square");

        let mut ctx = FieldCtx {
            q,
            delta,
            gen_e: ExtElem::ONE,
            gen_f: 1,
            inv,
            dlog_e: Vec::new(),
            exp_e: Vec::new(),
            dlog_f: Vec::new(),
            exp_f: Vec::new(),
            roots_e: roots_of_unity(q * q - 1),
            roots_f: roots_of_unity(q - 1),
        };

        let n = q * q - 1;
        let gen_e = (0..q)
            .flat_map(|a| (0..q).map(move |b| ExtElem::new(a, b)))
            .find(|&z| !z.is_zero() && ctx.order(z) == n)
            .expect("E^x is cyclic");
        ctx.gen_e = gen_e;

        let mut exp_e = Vec::with_capacity(n as usize);
        let mut dlog_e = vec![u32::MAX; (q * q) as usize];
        let mut z = ExtElem::ONE;
        for k in 0..n {
            exp_e.push(z);
            dlog_e[ctx.slot(z)] = k;
            z = ctx.mul(z, gen_e);
        }
        ctx.exp_e = exp_e;
        ctx.dlog_e = dlog_e;

        let gen_f = ctx.conjugation_data(gen_e).norm;
        ctx.gen_f = gen_f;
        let mut exp_f = Vec::with_capacity(q as usize - 1);
        let mut dlog_f = vec![u32::MAX; q as usize];
        let mut x = 1;
        for k in 0..q - 1 {
            exp_f.push(x);
            dlog_f[x as usize] = k;
            x = x * gen_f % q;
        }
        ctx.exp_f = exp_f;
        ctx.dlog_f = dlog_f;
        Ok(ctx)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn gen_e(&self) -> ExtElem {
        self.gen_e
    }

    pub fn gen_f(&self) -> u32 {
        self.gen_f
    }

    /// `|E^×| = q² − 1`.
    pub fn ext_order(&self) -> u32 {
        self.q * self.q - 1
    }

    /// `|F^×| = q − 1`.
    pub fn base_order(&self) -> u32 {
        self.q - 1
    }

    fn slot(&self, z: ExtElem) -> usize {
        (z.a * self.q + z.b) as usize
    }

    // base field

    pub fn add(&self, x: u32, y: u32) -> u32 {
        (x + y) % self.q
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        (x + self.q - y) % self.q
    }

    pub fn neg(&self, x: u32) -> u32 {
        (self.q - x) % self.q
    }

    pub fn fmul(&self, x: u32, y: u32) -> u32 {
        x * y % self.q
    }

    pub fn finv(&self, x: u32) -> Result<u32> {
        if x.is_multiple_of(self.q) {
            Err(Error::ZeroElement)
        } else {
            Ok(self.inv[(x % self.q) as usize])
        }
    }

    /// Reduces a signed integer into `F_q`.
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.q as i64) as u32
    }

    pub fn is_square(&self, x: u32) -> bool {
        x == 0 || pow_mod(x, (self.q - 1) / 2, self.q) == 1
    }

    // extension field

    pub fn ext_add(&self, z: ExtElem, w: ExtElem) -> ExtElem {
        ExtElem::new(self.add(z.a, w.a), self.add(z.b, w.b))
    }

    pub fn ext_sub(&self, z: ExtElem, w: ExtElem) -> ExtElem {
        ExtElem::new(self.sub(z.a, w.a), self.sub(z.b, w.b))
    }

    pub fn mul(&self, z: ExtElem, w: ExtElem) -> ExtElem {
        let q = self.q;
        let a = (z.a * w.a + self.delta * (z.b * w.b % q)) % q;
        let b = (z.a * w.b + z.b * w.a) % q;
        ExtElem::new(a, b)
    }

    pub fn scale(&self, c: u32, z: ExtElem) -> ExtElem {
        ExtElem::new(self.fmul(c, z.a), self.fmul(c, z.b))
    }

    pub fn embed(&self, c: u32) -> ExtElem {
        ExtElem::new(c % self.q, 0)
    }

    pub fn ext_inv(&self, z: ExtElem) -> Result<ExtElem> {
        let data = self.conjugation_data(z);
        let n_inv = self.finv(data.norm)?;
        Ok(self.scale(n_inv, data.conj))
    }

    pub fn ext_pow(&self, z: ExtElem, mut e: u64) -> ExtElem {
        let mut base = z;
        let mut acc = ExtElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, z: ExtElem) -> u32 {
        let mut k = 1;
        let mut w = z;
        while w != ExtElem::ONE {
            w = self.mul(w, z);
            k += 1;
        }
        k
    }

    pub fn conjugation_data(&self, z: ExtElem) -> ConjugationData {
        let q = self.q;
        let norm = self.sub(z.a * z.a % q, self.delta * (z.b * z.b % q) % q);
        let trace = 2 * z.a % q;
        ConjugationData { norm, trace, conj: ExtElem::new(z.a, self.neg(z.b)) }
    }

    pub fn norm(&self, z: ExtElem) -> u32 {
        self.conjugation_data(z).norm
    }

    pub fn trace(&self, z: ExtElem) -> u32 {
        2 * z.a % self.q
    }

    pub fn conj(&self, z: ExtElem) -> ExtElem {
        ExtElem::new(z.a, self.neg(z.b))
    }

    /// `log_{g_E}(z)` in `Z/(q²−1)`.
    pub fn discrete_log(&self, z: ExtElem) -> Result<u32> {
        if z.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.dlog_e[self.slot(z)])
    }

    /// `log_{g_F}(x)` in `Z/(q−1)`.
    pub fn discrete_log_base(&self, x: u32) -> Result<u32> {
        if x.is_multiple_of(self.q) {
            return Err(Error::ZeroElement);
        }
        Ok(self.dlog_f[(x % self.q) as usize])
    }

    /// `g_E^k`.
    pub fn ext_exp(&self, k: u64) -> ExtElem {
        self.exp_e[(k % self.ext_order() as u64) as usize]
    }

    /// `g_F^k`.
    pub fn base_exp(&self, k: u64) -> u32 {
        self.exp_f[(k % self.base_order() as u64) as usize]
    }

    /// `exp(2πi k/(q²−1))`.
    pub fn ext_root(&self, k: u64) -> Complex64 {
        self.roots_e[(k % self.ext_order() as u64) as usize]
    }

    /// `exp(2πi k/(q−1))`.
    pub fn base_root(&self, k: u64) -> Complex64 {
        self.roots_f[(k % self.base_order() as u64) as usize]
    }

    /// `Φ_j(g_E^k)`.
    pub fn ext_char_at_log(&self, j: u32, k: u32) -> Complex64 {
        self.ext_root(j as u64 * k as u64)
    }

    /// `α_i(g_F^k)`.
    pub fn base_char_at_log(&self, i: u32, k: u32) -> Complex64 {
        self.base_root(i as u64 * k as u64)
    }

    pub fn char_eval_ext(&self, chi: CharLabel, z: ExtElem) -> Result<Complex64> {
        if chi.modulus != self.ext_order() {
            return Err(Error::DomainMismatch { modulus: chi.modulus });
        }
        Ok(self.ext_char_at_log(chi.index, self.discrete_log(z)?))
    }

    pub fn char_eval_base(&self, chi: CharLabel, x: u32) -> Result<Complex64> {
        if chi.modulus != self.base_order() {
            return Err(Error::DomainMismatch { modulus: chi.modulus });
        }
        Ok(self.base_char_at_log(chi.index, self.discrete_log_base(x)?))
    }

    /// The sign character `ε = α_{(q−1)/2}` of `F^×`.
    pub fn sign_character(&self) -> CharLabel {
        CharLabel::base(self, (self.q - 1) / 2)
    }

    /// `ε(x)` with the convention `ε(0) = 0`.
    pub fn sign(&self, x: u32) -> i32 {
        match x % self.q {
            0 => 0,
            x if self.is_square(x) => 1,
            _ => -1,
        }
    }

    /// All nonzero elements of `E` in discrete-log order.
    pub fn ext_units(&self) -> &[ExtElem] {
        &self.exp_e
    }

    /// All nonzero elements of `F` in discrete-log order.
    pub fn base_units(&self) -> &[u32] {
        &self.exp_f
    }

    /// The norm-one circle `U = ker N`, in increasing discrete-log order.
    pub fn norm_one_circle(&self) -> Vec<ExtElem> {
        let step = self.q - 1;
        (0..self.q + 1).map(|i| self.ext_exp((i * step) as u64)).collect()
    }
}

fn pow_mod(base: u32, mut e: u32, m: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % m as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u64;
        }
        b = b * b % m as u64;
        e >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_elems(ctx: &FieldCtx) -> Vec<ExtElem> {
        let q = ctx.q();
        (0..q).flat_map(|a| (0..q).map(move |b| ExtElem::new(a, b))).collect()
    }

    #[test]
    fn rejects_bad_q() {
        assert!(matches!(FieldCtx::new(2), Err(Error::EvenCharacteristic)));
        assert!(matches!(FieldCtx::new(9), Err(Error::NonPrime(9))));
        assert!(matches!(FieldCtx::new(1), Err(Error::NonPrime(1))));
        assert!(matches!(FieldCtx::new(37), Err(Error::CapExceeded { q: 37, cap: 31 })));
        assert!(FieldCtx::with_cap(37, 40).is_ok());
    }

    #[test]
    fn canonical_choices() {
        let f3 = FieldCtx::new(3).unwrap();
        assert_eq!(f3.delta(), 2);
        assert_eq!(f3.gen_e(), ExtElem::new(1, 1));
        assert_eq!(FieldCtx::new(5).unwrap().delta(), 2);
        assert_eq!(FieldCtx::new(7).unwrap().delta(), 3);
    }

    #[test]
    fn generator_is_lexicographically_first_of_full_order() {
        for q in [3, 5, 7, 11] {
            let ctx = FieldCtx::new(q).unwrap();
            let n = q * q - 1;
            // brute force: order by repeated multiplication, first full-order pair
            let first = all_elems(&ctx)
                .into_iter()
                .filter(|z| !z.is_zero())
                .find(|&z| {
                    let mut w = z;
                    let mut k = 1;
                    while w != ExtElem::ONE {
                        w = ctx.mul(w, z);
                        k += 1;
                    }
                    k == n
                })
                .unwrap();
            assert_eq!(first, ctx.gen_e());
            assert_eq!(ctx.order(ctx.gen_e()), n);
            let gf_order = (1..q).find(|&k| pow_mod(ctx.gen_f(), k, q) == 1).unwrap();
            assert_eq!(gf_order, q - 1);
            assert_eq!(ctx.embed(ctx.gen_f()), ctx.ext_pow(ctx.gen_e(), (q + 1) as u64));
        }
    }

    #[test]
    fn delta_is_smallest_non_square() {
        for q in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let ctx = FieldCtx::new(q).unwrap();
            let squares: Vec<u32> = (1..q).map(|x| x * x % q).collect();
            let expected = (2..q).find(|d| !squares.contains(d)).unwrap();
            assert_eq!(ctx.delta(), expected);
        }
    }

    #[test]
    fn conjugation_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        let z = ExtElem::new(1, 1);
        let d = ctx.conjugation_data(z);
        assert_eq!(d.norm, 2);
        assert_eq!(d.trace, 2);
        assert_eq!(d.conj, ExtElem::new(1, 2));
        for z in all_elems(&ctx) {
            assert_eq!(ctx.conj(ctx.conj(z)), z);
            let d = ctx.conjugation_data(z);
            assert_eq!(ctx.embed(d.norm), ctx.mul(z, d.conj));
            assert_eq!(ctx.embed(d.trace), ctx.ext_add(z, d.conj));
            assert_eq!(d.conj, ctx.ext_pow(z, 3));
        }
        for c in 0..3 {
            let d = ctx.conjugation_data(ctx.embed(c));
            assert_eq!((d.norm, d.trace, d.conj), (c * c % 3, 2 * c % 3, ctx.embed(c)));
        }
    }

    #[test]
    fn discrete_log_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(ctx.discrete_log(ctx.gen_e()).unwrap(), 1);
        assert_eq!(ctx.discrete_log(ExtElem::ONE).unwrap(), 0);
        assert_eq!(ctx.discrete_log(ExtElem::new(2, 0)).unwrap(), 4);
        assert!(matches!(ctx.discrete_log(ExtElem::ZERO), Err(Error::ZeroElement)));
        for q in [3, 5, 7] {
            let ctx = FieldCtx::new(q).unwrap();
            for z in all_elems(&ctx).into_iter().filter(|z| !z.is_zero()) {
                let k = ctx.discrete_log(z).unwrap();
                assert_eq!(ctx.ext_pow(ctx.gen_e(), k as u64), z);
            }
            for x in 1..q {
                let k = ctx.discrete_log_base(x).unwrap();
                assert_eq!(pow_mod(ctx.gen_f(), k, q), x);
            }
        }
    }

    #[test]
    fn char_eval_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        let trivial = CharLabel::ext(&ctx, 0);
        for &z in ctx.ext_units() {
            assert_eq!(ctx.char_eval_ext(trivial, z).unwrap(), Complex64::new(1.0, 0.0));
        }
        let phi1 = ctx.char_eval_ext(CharLabel::ext(&ctx, 1), ctx.gen_e()).unwrap();
        assert!((phi1 - Complex64::from_polar(1.0, TAU / 8.0)).norm() < 1e-15);
        for q in [3, 5, 7] {
            let ctx = FieldCtx::new(q).unwrap();
            let eps = ctx.sign_character();
            for x in 1..q {
                let v = ctx.char_eval_base(eps, x).unwrap();
                let expected = if ctx.is_square(x) { 1.0 } else { -1.0 };
                assert!((v - expected).norm() < 1e-12);
                assert_eq!(ctx.sign(x) as f64, expected);
            }
            assert_eq!(ctx.sign(0), 0);
        }
        assert!(matches!(
            ctx.char_eval_base(CharLabel::ext(&ctx, 1), 1),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn characters_are_multiplicative() {
        for q in [3, 5] {
            let ctx = FieldCtx::new(q).unwrap();
            let units = ctx.ext_units().to_vec();
            for j in 0..ctx.ext_order() {
                let chi = CharLabel::ext(&ctx, j);
                for &x in &units {
                    for &y in &units {
                        let lhs = ctx.char_eval_ext(chi, ctx.mul(x, y)).unwrap();
                        let rhs = ctx.char_eval_ext(chi, x).unwrap() * ctx.char_eval_ext(chi, y).unwrap();
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
            }
            for i in 0..ctx.base_order() {
                let chi = CharLabel::base(&ctx, i);
                for x in 1..q {
                    for y in 1..q {
                        let lhs = ctx.char_eval_base(chi, x * y % q).unwrap();
                        let rhs = ctx.char_eval_base(chi, x).unwrap() * ctx.char_eval_base(chi, y).unwrap();
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_frobenius_and_norm_rules() {
        for q in [3, 5, 7] {
            let ctx = FieldCtx::new(q).unwrap();
            for j in 0..ctx.ext_order() {
                let phi = CharLabel::ext(&ctx, j);
                let res = phi.restrict(&ctx);
                for x in 1..q {
                    let a = ctx.char_eval_ext(phi, ctx.embed(x)).unwrap();
                    let b = ctx.char_eval_base(res, x).unwrap();
                    assert!((a - b).norm() < 1e-12);
                }
                let frob = phi.frobenius(&ctx);
                for &z in ctx.ext_units() {
                    let a = ctx.char_eval_ext(phi, ctx.conj(z)).unwrap();
                    let b = ctx.char_eval_ext(frob, z).unwrap();
                    assert!((a - b).norm() < 1e-12);
                }
                assert_eq!(phi.is_frobenius_fixed(&ctx), frob == phi);
            }
            for i in 0..ctx.base_order() {
                let alpha = CharLabel::base(&ctx, i);
                let pulled = alpha.norm_pullback(&ctx);
                for &z in ctx.ext_units() {
                    let a = ctx.char_eval_base(alpha, ctx.norm(z)).unwrap();
                    let b = ctx.char_eval_ext(pulled, z).unwrap();
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn norm_is_surjective_and_q_plus_one_to_one() {
        for q in [3, 5, 7, 11] {
            let ctx = FieldCtx::new(q).unwrap();
            let mut counts = vec![0u32; q as usize];
            for &z in ctx.ext_units() {
                counts[ctx.norm(z) as usize] += 1;
            }
            assert_eq!(counts[0], 0);
            assert!(counts[1..].iter().all(|&c| c == q + 1));
            let circle = ctx.norm_one_circle();
            assert_eq!(circle.len() as u32, q + 1);
            assert!(circle.iter().all(|&u| ctx.norm(u) == 1));
        }
    }

    #[test]
    fn nontrivial_characters_sum_to_zero() {
        for q in [3, 5, 7] {
            let ctx = FieldCtx::new(q).unwrap();
            for j in 1..ctx.ext_order() {
                let chi = CharLabel::ext(&ctx, j);
                let s: Complex64 = ctx.ext_units().iter().map(|&z| ctx.char_eval_ext(chi, z).unwrap()).sum();
                assert!(s.norm() < 1e-9);
            }
        }
    }
}
