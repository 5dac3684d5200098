use std::fmt;

use serde::Serialize;

use super::classes::{ClassInfo, ClassLabel};
use crate::error::{Error, Result};
use crate::field::{ExtElem, FieldCtx};

/// Groups up to this order get a precomputed multiplication table (q ≤ 7).
const MUL_TABLE_LIMIT: usize = 2016;

/// The matrix `[[a, b], [c, d]]` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElem {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl GroupElem {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        GroupElem { a, b, c, d }
    }

    pub fn identity() -> Self {
        GroupElem::new(1, 0, 0, 1)
    }

    /// `d(a, 1) = diag(a, 1)`.
    pub fn diagonal(a: u32) -> Self {
        GroupElem::new(a, 0, 0, 1)
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A torus element `m_z` together with its preimage `z ∈ E^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusElem {
    pub z: ExtElem,
    pub matrix: GroupElem,
}

/// `GL(2, q)` enumerated in lexicographic entry order, with the Coxeter
/// torus `K = {m_z}` and the conjugacy class of every element.
#[derive(Debug)]
pub struct Gl2 {
    field: FieldCtx,
    elems: Vec<GroupElem>,
    index: Vec<u32>,
    inverse: Vec<u32>,
    torus: Vec<u32>,
    torus_log: Vec<u32>,
    classes: Vec<ClassInfo>,
    class_of: Vec<u32>,
    mul_table: Option<Vec<u32>>,
}

impl Gl2 {
    pub fn new(field: FieldCtx) -> Self {
        let q = field.q();
        let elems = enumerate_group(&field);
        let mut index = vec![u32::MAX; (q as usize).pow(4)];
        for (i, g) in elems.iter().enumerate() {
            index[slot(q, g)] = i as u32;
        }

        let mut group = Gl2 {
            field,
            elems,
            index,
            inverse: Vec::new(),
            torus: Vec::new(),
            torus_log: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
            mul_table: None,
        };

        group.inverse = group.elems.iter().map(|g| group.index_of(&group.invert(g))).collect();

        let n = group.field.ext_order();
        group.torus_log = vec![u32::MAX; group.elems.len()];
        group.torus = (0..n)
            .map(|k| {
                let m = torus_matrix(&group.field, group.field.ext_exp(k as u64));
                let idx = group.index_of(&m);
                group.torus_log[idx as usize] = k;
                idx
            })
            .collect();

        group.classes = ClassInfo::enumerate(&group.field);
        let lookup: std::collections::HashMap<ClassLabel, u32> =
            group.classes.iter().enumerate().map(|(i, c)| (c.label, i as u32)).collect();
        group.class_of = group.elems.iter().map(|g| lookup[&group.classify(g)]).collect();

        if group.elems.len() <= MUL_TABLE_LIMIT {
            let n = group.elems.len();
            let mut table = Vec::with_capacity(n * n);
            for x in &group.elems {
                for y in &group.elems {
                    table.push(group.index_of(&group.mul(x, y)));
                }
            }
            group.mul_table = Some(table);
        }
        group
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[GroupElem] {
        &self.elems
    }

    pub fn elem(&self, i: u32) -> GroupElem {
        self.elems[i as usize]
    }

    /// Position of `g` in the canonical enumeration.
    pub fn index_of(&self, g: &GroupElem) -> u32 {
        self.index[slot(self.q(), g)]
    }

    pub fn try_index_of(&self, g: &GroupElem) -> Option<u32> {
        let q = self.q();
        if g.entries().iter().any(|&e| e >= q) {
            return None;
        }
        let i = self.index[slot(q, g)];
        (i != u32::MAX).then_some(i)
    }

    pub fn identity_index(&self) -> u32 {
        self.index_of(&GroupElem::identity())
    }

    pub fn det(&self, g: &GroupElem) -> u32 {
        let f = &self.field;
        f.sub(f.fmul(g.a, g.d), f.fmul(g.b, g.c))
    }

    pub fn mul(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        let q = self.q();
        GroupElem::new(
            (x.a * y.a + x.b * y.c) % q,
            (x.a * y.b + x.b * y.d) % q,
            (x.c * y.a + x.d * y.c) % q,
            (x.c * y.b + x.d * y.d) % q,
        )
    }

    pub fn invert(&self, g: &GroupElem) -> GroupElem {
        let f = &self.field;
        let di = f.finv(self.det(g)).expect("group elements are invertible");
        GroupElem::new(f.fmul(di, g.d), f.fmul(di, f.neg(g.b)), f.fmul(di, f.neg(g.c)), f.fmul(di, g.a))
    }

    /// Index of the product of two indexed elements.
    #[inline]
    pub fn mul_idx(&self, x: u32, y: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[x as usize * self.elems.len() + y as usize],
            None => self.index_of(&self.mul(&self.elems[x as usize], &self.elems[y as usize])),
        }
    }

    #[inline]
    pub fn inv_idx(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    /// Indices of `m_{g_E^k}` for `k = 0, …, q²−2`.
    pub fn torus(&self) -> &[u32] {
        &self.torus
    }

    /// `k` with `x = m_{g_E^k}`, if `x ∈ K`.
    pub fn torus_log(&self, x: u32) -> Option<u32> {
        let k = self.torus_log[x as usize];
        (k != u32::MAX).then_some(k)
    }

    pub fn torus_embed(&self, z: ExtElem) -> Result<TorusElem> {
        if z.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(TorusElem { z, matrix: torus_matrix(&self.field, z) })
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    #[inline]
    pub fn class_index(&self, x: u32) -> u32 {
        self.class_of[x as usize]
    }

    pub fn conjugacy_class_of(&self, g: &GroupElem) -> ClassLabel {
        self.classes[self.class_of[self.index_of(g) as usize] as usize].label
    }

    /// Classification by the characteristic polynomial `X² − tr·X + det`.
    fn classify(&self, g: &GroupElem) -> ClassLabel {
        let f = &self.field;
        let tr = f.add(g.a, g.d);
        let det = self.det(g);
        let disc = f.sub(f.fmul(tr, tr), f.fmul(4 % f.q(), det));
        let half = f.finv(2).expect("odd characteristic");
        if disc == 0 {
            let e = f.fmul(tr, half);
            if g.b == 0 && g.c == 0 {
                ClassLabel::Central(e)
            } else {
                ClassLabel::Unipotent(e)
            }
        } else if f.is_square(disc) {
            let s = sqrt(f, disc);
            let r1 = f.fmul(f.add(tr, s), half);
            let r2 = f.fmul(f.sub(tr, s), half);
            ClassLabel::split(f, r1, r2)
        } else {
            let s = sqrt(f, f.fmul(disc, f.finv(f.delta()).expect("delta is nonzero")));
            let z = ExtElem::new(f.fmul(tr, half), f.fmul(s, half));
            ClassLabel::elliptic(f, z)
        }
    }
}

fn sqrt(f: &FieldCtx, x: u32) -> u32 {
    (0..f.q()).find(|&s| f.fmul(s, s) == x).expect("argument is a square")
}

fn slot(q: u32, g: &GroupElem) -> usize {
    let q = q as usize;
    ((g.a as usize * q + g.b as usize) * q + g.c as usize) * q + g.d as usize
}

/// `m_z = [[a, δb], [b, a]]`, the matrix of `w ↦ zw` in the basis `{1, √δ}`.
pub fn torus_matrix(f: &FieldCtx, z: ExtElem) -> GroupElem {
    GroupElem::new(z.a, f.fmul(f.delta(), z.b), z.b, z.a)
}

/// All invertible matrices in lexicographic `(a, b, c, d)` order.
pub fn enumerate_group(f: &FieldCtx) -> Vec<GroupElem> {
    let q = f.q();
    let mut out = Vec::with_capacity(((q * q - 1) * (q * q - q)) as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if f.sub(f.fmul(a, d), f.fmul(b, c)) != 0 {
                        out.push(GroupElem::new(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn gl2(q: u32) -> Gl2 {
        Gl2::new(FieldCtx::new(q).unwrap())
    }

    #[test]
    fn group_orders() {
        for (q, n) in [(3, 48), (5, 480), (7, 2016)] {
            let g = gl2(q);
            assert_eq!(g.order(), n);
            let distinct: HashSet<_> = g.elements().iter().collect();
            assert_eq!(distinct.len(), n);
        }
        assert_eq!(enumerate_group(&FieldCtx::new(3).unwrap()), enumerate_group(&FieldCtx::new(3).unwrap()));
    }

    #[test]
    fn multiplication_and_inverse() {
        let g = gl2(5);
        let e = g.identity_index();
        for x in 0..g.order() as u32 {
            assert_eq!(g.mul_idx(x, g.inv_idx(x)), e);
            assert_eq!(g.mul_idx(e, x), x);
        }
        let big = gl2(11);
        assert!(big.mul_table.is_none());
        let x = 1234;
        assert_eq!(big.mul_idx(x, big.inv_idx(x)), big.identity_index());
    }

    #[test]
    fn torus_embedding() {
        let g = gl2(3);
        let f = g.field();
        assert_eq!(g.torus_embed(ExtElem::ONE).unwrap().matrix, GroupElem::identity());
        assert_eq!(g.torus_embed(ExtElem::new(2, 0)).unwrap().matrix, GroupElem::new(2, 0, 0, 2));
        assert_eq!(g.torus_embed(ExtElem::new(0, 1)).unwrap().matrix, GroupElem::new(0, 2, 1, 0));
        assert!(matches!(g.torus_embed(ExtElem::ZERO), Err(Error::ZeroElement)));
        for &z in f.ext_units() {
            for &w in f.ext_units() {
                let mz = torus_matrix(f, z);
                let mw = torus_matrix(f, w);
                assert_eq!(g.mul(&mz, &mw), torus_matrix(f, f.mul(z, w)));
            }
            assert_eq!(g.det(&torus_matrix(f, z)), f.norm(z));
        }
        let distinct: HashSet<_> = g.torus().iter().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn class_examples() {
        let g = gl2(3);
        assert_eq!(g.conjugacy_class_of(&GroupElem::new(2, 0, 0, 2)), ClassLabel::Central(2));
        assert_eq!(g.conjugacy_class_of(&GroupElem::new(1, 1, 0, 1)), ClassLabel::Unipotent(1));
        let f = g.field();
        for &z in f.ext_units().iter().filter(|z| !z.is_base()) {
            let m = torus_matrix(f, z);
            let label = g.conjugacy_class_of(&m);
            assert_eq!(label, ClassLabel::elliptic(f, z));
            assert_eq!(label, ClassLabel::elliptic(f, f.conj(z)));
        }
    }

    #[test]
    fn class_equation() {
        for q in [3, 5, 7] {
            let g = gl2(q);
            assert_eq!(g.classes().len() as u32, q * q - 1);
            let mut counts = vec![0u64; g.classes().len()];
            for x in 0..g.order() as u32 {
                counts[g.class_index(x) as usize] += 1;
            }
            for (info, &count) in g.classes().iter().zip(&counts) {
                assert_eq!(info.size, count, "{:?}", info.label);
            }
            assert_eq!(counts.iter().sum::<u64>(), g.order() as u64);
        }
    }

    #[test]
    fn conjugate_elements_share_a_class() {
        let g = gl2(3);
        for x in 0..g.order() as u32 {
            for y in 0..g.order() as u32 {
                let conj = g.mul_idx(g.mul_idx(y, x), g.inv_idx(y));
                assert_eq!(g.class_index(conj), g.class_index(x));
            }
        }
    }
}
