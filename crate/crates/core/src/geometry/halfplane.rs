use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::group::{Gl2, GroupElem};
use crate::field::{ExtElem, FieldCtx};

/// A point of `H = E ∖ F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfPlanePoint(ExtElem);

impl HalfPlanePoint {
    pub fn new(z: ExtElem) -> Option<Self> {
        (!z.is_base()).then_some(HalfPlanePoint(z))
    }

    /// The origin `√δ`, whose stabilizer is the torus.
    pub fn origin() -> Self {
        HalfPlanePoint(ExtElem::new(0, 1))
    }

    pub fn value(self) -> ExtElem {
        self.0
    }

    /// All `q² − q` points in lexicographic order.
    pub fn all(f: &FieldCtx) -> Vec<HalfPlanePoint> {
        let q = f.q();
        (0..q).flat_map(|a| (1..q).map(move |b| HalfPlanePoint(ExtElem::new(a, b)))).collect()
    }
}

impl fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Value of the invariant `D`; `Infinity` sorts after every field value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Distance {
    Finite(u32),
    Infinity,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(x) => write!(f, "{x}"),
            Distance::Infinity => write!(f, "inf"),
        }
    }
}

/// `g.w = (aw + b)/(cw + d)`. The denominator never vanishes on `E ∖ F`.
pub fn mobius_act(f: &FieldCtx, g: &GroupElem, w: HalfPlanePoint) -> HalfPlanePoint {
    let w = w.0;
    let num = f.ext_add(f.scale(g.a, w), f.embed(g.b));
    let den = f.ext_add(f.scale(g.c, w), f.embed(g.d));
    let den_inv = f.ext_inv(den).expect("cw + d is nonzero for w outside F");
    HalfPlanePoint(f.mul(num, den_inv))
}

/// `D(z, w) = N(z − w)/N(z − w̄)`, infinite when `w = z̄`.
pub fn distance_invariant(f: &FieldCtx, z: HalfPlanePoint, w: HalfPlanePoint) -> Distance {
    let wbar = f.conj(w.0);
    if wbar == z.0 {
        return Distance::Infinity;
    }
    let num = f.norm(f.ext_sub(z.0, w.0));
    let den = f.norm(f.ext_sub(z.0, wbar));
    Distance::Finite(f.fmul(num, f.finv(den).expect("z ≠ w̄ gives a nonzero norm")))
}

/// Outcome of comparing `G`-orbits on `H × H` with the level sets of `D`.
#[derive(Clone, Debug, Serialize)]
pub struct PairOrbitReport {
    pub pairs: usize,
    pub orbits: usize,
    pub distance_values: usize,
    /// Pairs `((z,w),(z',w'))` where orbit equality and `D` equality disagree.
    pub violations: usize,
    /// Pairs `(z, w)` with `D(z,w) ≠ D(w,z)`.
    pub asymmetric: usize,
}

impl PairOrbitReport {
    pub fn classifies(&self) -> bool {
        self.violations == 0 && self.orbits == self.distance_values
    }
}

/// Exhaustive orbit computation on `H × H` compared against `D`.
pub fn classify_pair_orbits(g: &Gl2) -> PairOrbitReport {
    let f = g.field();
    let pts = HalfPlanePoint::all(f);
    let mut orbit_of: HashMap<(HalfPlanePoint, HalfPlanePoint), usize> = HashMap::new();
    let mut orbits = 0;
    for &z in &pts {
        for &w in &pts {
            if orbit_of.contains_key(&(z, w)) {
                continue;
            }
            for x in g.elements() {
                orbit_of.insert((mobius_act(f, x, z), mobius_act(f, x, w)), orbits);
            }
            orbits += 1;
        }
    }
    let mut orbit_distance: HashMap<usize, Distance> = HashMap::new();
    let mut distance_orbit: HashMap<Distance, usize> = HashMap::new();
    let mut violations = 0;
    let mut asymmetric = 0;
    for (&(z, w), &o) in &orbit_of {
        let d = distance_invariant(f, z, w);
        if d != distance_invariant(f, w, z) {
            asymmetric += 1;
        }
        if *orbit_distance.entry(o).or_insert(d) != d {
            violations += 1;
        }
        if *distance_orbit.entry(d).or_insert(o) != o {
            violations += 1;
        }
    }
    PairOrbitReport {
        pairs: orbit_of.len(),
        orbits,
        distance_values: distance_orbit.len(),
        violations,
        asymmetric,
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn pt(a: u32, b: u32) -> HalfPlanePoint {
        HalfPlanePoint::new(ExtElem::new(a, b)).unwrap()
    }

    #[test]
    fn distance_examples() {
        let f = FieldCtx::new(3).unwrap();
        assert_eq!(distance_invariant(&f, pt(0, 1), pt(1, 1)), Distance::Finite(2));
        for z in HalfPlanePoint::all(&f) {
            assert_eq!(distance_invariant(&f, z, z), Distance::Finite(0));
            let zbar = HalfPlanePoint::new(f.conj(z.value())).unwrap();
            assert_eq!(distance_invariant(&f, z, zbar), Distance::Infinity);
        }
        assert!(Distance::Finite(30) < Distance::Infinity);
        assert!(HalfPlanePoint::new(ExtElem::new(2, 0)).is_none());
    }

    #[test]
    fn mobius_is_a_left_action() {
        let g = Gl2::new(FieldCtx::new(3).unwrap());
        let f = g.field();
        let pts = HalfPlanePoint::all(f);
        assert_eq!(pts.len(), 6);
        for w in &pts {
            assert_eq!(mobius_act(f, &GroupElem::identity(), *w), *w);
        }
        for x in g.elements() {
            for y in g.elements() {
                for &w in &pts {
                    let lhs = mobius_act(f, &g.mul(x, y), w);
                    let rhs = mobius_act(f, x, mobius_act(f, y, w));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn antipode_of_origin() {
        for q in [3, 5, 7] {
            let f = FieldCtx::new(q).unwrap();
            let g = GroupElem::diagonal(q - 1);
            assert_eq!(mobius_act(&f, &g, HalfPlanePoint::origin()), pt(0, q - 1));
        }
    }

    #[test]
    fn transitive_with_torus_stabilizer() {
        for q in [3, 5, 7] {
            let g = Gl2::new(FieldCtx::new(q).unwrap());
            let f = g.field();
            let origin = HalfPlanePoint::origin();
            let orbit: HashSet<_> = g.elements().iter().map(|x| mobius_act(f, x, origin)).collect();
            assert_eq!(orbit.len() as u32, q * q - q);
            let stab: HashSet<u32> = (0..g.order() as u32)
                .filter(|&x| mobius_act(f, &g.elem(x), origin) == origin)
                .collect();
            let torus: HashSet<u32> = g.torus().iter().copied().collect();
            assert_eq!(stab, torus);
        }
    }

    #[test]
    fn distance_is_symmetric_and_invariant() {
        for q in [3, 5] {
            let g = Gl2::new(FieldCtx::new(q).unwrap());
            let f = g.field();
            let pts = HalfPlanePoint::all(f);
            for &z in &pts {
                for &w in &pts {
                    let d = distance_invariant(f, z, w);
                    assert_eq!(d, distance_invariant(f, w, z));
                    for x in g.elements().iter().step_by(7) {
                        assert_eq!(d, distance_invariant(f, mobius_act(f, x, z), mobius_act(f, x, w)));
                    }
                }
            }
        }
    }

    #[test]
    fn distance_classifies_pair_orbits() {
        for q in [3, 5] {
            let g = Gl2::new(FieldCtx::new(q).unwrap());
            let f = g.field();
            let pts = HalfPlanePoint::all(f);
            let mut orbit_id: HashMap<(HalfPlanePoint, HalfPlanePoint), usize> = HashMap::new();
            let mut next = 0;
            for &z in &pts {
                for &w in &pts {
                    if orbit_id.contains_key(&(z, w)) {
                        continue;
                    }
                    for x in g.elements() {
                        orbit_id.insert((mobius_act(f, x, z), mobius_act(f, x, w)), next);
                    }
                    next += 1;
                }
            }
            assert_eq!(orbit_id.len(), pts.len() * pts.len());
            for (&(z, w), &o) in &orbit_id {
                for (&(z2, w2), &o2) in &orbit_id {
                    let same_d = distance_invariant(f, z, w) == distance_invariant(f, z2, w2);
                    assert_eq!(o == o2, same_d);
                }
            }
            let report = classify_pair_orbits(&g);
            assert_eq!(report.pairs as u32, (q * q - q).pow(2));
            assert_eq!(report.orbits, next);
            assert!(report.classifies());
            assert_eq!(report.asymmetric, 0);
        }
    }
}
