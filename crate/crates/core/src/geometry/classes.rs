use std::fmt;

use serde::Serialize;

use crate::field::{ExtElem, FieldCtx};

/// Conjugacy class of `GL(2, q)` by eigenvalue data.
///
/// `Split` roots are ordered by discrete log in `F^×`; `Elliptic` stores the
/// Frobenius pair `{z, z^q}` with the smaller discrete log first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassLabel {
    Central(u32),
    Unipotent(u32),
    Split(u32, u32),
    Elliptic(ExtElem, ExtElem),
}

impl ClassLabel {
    pub fn split(f: &FieldCtx, r1: u32, r2: u32) -> Self {
        let (l1, l2) = (f.discrete_log_base(r1).unwrap(), f.discrete_log_base(r2).unwrap());
        if l1 <= l2 {
            ClassLabel::Split(r1, r2)
        } else {
            ClassLabel::Split(r2, r1)
        }
    }

    pub fn elliptic(f: &FieldCtx, z: ExtElem) -> Self {
        let zq = f.conj(z);
        if f.discrete_log(z).unwrap() <= f.discrete_log(zq).unwrap() {
            ClassLabel::Elliptic(z, zq)
        } else {
            ClassLabel::Elliptic(zq, z)
        }
    }

    pub fn size(&self, q: u64) -> u64 {
        match self {
            ClassLabel::Central(_) => 1,
            ClassLabel::Unipotent(_) => q * q - 1,
            ClassLabel::Split(..) => q * q + q,
            ClassLabel::Elliptic(..) => q * q - q,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Central(a) => write!(f, "C({a})"),
            ClassLabel::Unipotent(a) => write!(f, "U({a})"),
            ClassLabel::Split(a, b) => write!(f, "S({a};{b})"),
            ClassLabel::Elliptic(z, _) => write!(f, "E({z})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub label: ClassLabel,
    pub size: u64,
}

impl ClassInfo {
    /// All `q² − 1` classes: central, unipotent, split, elliptic, each family
    /// in discrete-log order of its parameters.
    pub fn enumerate(f: &FieldCtx) -> Vec<ClassInfo> {
        let q = f.q();
        let m = f.base_order();
        let n = f.ext_order();
        let mut labels = Vec::with_capacity((q * q - 1) as usize);
        labels.extend((0..m).map(|i| ClassLabel::Central(f.base_exp(i as u64))));
        labels.extend((0..m).map(|i| ClassLabel::Unipotent(f.base_exp(i as u64))));
        for i in 0..m {
            for j in i + 1..m {
                labels.push(ClassLabel::Split(f.base_exp(i as u64), f.base_exp(j as u64)));
            }
        }
        for k in 0..n {
            let kq = (k as u64 * q as u64 % n as u64) as u32;
            if k % (q + 1) != 0 && k < kq {
                labels.push(ClassLabel::Elliptic(f.ext_exp(k as u64), f.ext_exp(kq as u64)));
            }
        }
        labels.into_iter().map(|label| ClassInfo { label, size: label.size(q as u64) }).collect()
    }
}
