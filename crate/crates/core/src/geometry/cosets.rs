use serde::Serialize;

use super::group::{Gl2, GroupElem};

#[derive(Clone, Debug, Serialize)]
pub struct DoubleCoset {
    pub id: usize,
    /// Index of the representative in the group enumeration.
    pub representative: u32,
    pub size: usize,
    /// Every `a ∈ F^×` with `d(a,1)` in this coset, ascending.
    pub diagonal_as: Vec<u32>,
    /// Distinct values of `(k + k') mod (q²−1)` over pairs with
    /// `m_{g^k} · rep · m_{g^k'} = rep`.
    #[serde(skip)]
    stabilizer_logs: Vec<u32>,
}

/// Partition of `G` into `K`-double cosets by orbit closure.
///
/// Representatives are `d(a,1)` with the smallest available `a` where the
/// coset contains a diagonal element, otherwise the first element in
/// enumeration order. Every `x` is stored with one factorization
/// `x = m_{g^l} · rep · m_{g^r}`.
#[derive(Clone, Debug)]
pub struct DoubleCosetTable {
    modulus: u32,
    cosets: Vec<DoubleCoset>,
    coset_of: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
}

impl DoubleCosetTable {
    pub fn new(g: &Gl2) -> Self {
        let q = g.q();
        let n = g.order();
        let mut table = DoubleCosetTable {
            modulus: g.field().ext_order(),
            cosets: Vec::new(),
            coset_of: vec![u32::MAX; n],
            left: vec![0; n],
            right: vec![0; n],
        };
        let diagonal_seeds = (1..q).map(|a| g.index_of(&GroupElem::diagonal(a)));
        let seeds: Vec<u32> = diagonal_seeds.chain(0..n as u32).collect();
        for rep in seeds {
            if table.coset_of[rep as usize] == u32::MAX {
                table.close_orbit(g, rep);
            }
        }
        for a in 1..q {
            let c = table.coset_of[g.index_of(&GroupElem::diagonal(a)) as usize];
            table.cosets[c as usize].diagonal_as.push(a);
        }
        table
    }

    fn close_orbit(&mut self, g: &Gl2, rep: u32) {
        let id = self.cosets.len();
        let torus = g.torus();
        let n = self.modulus;
        let mut size = 0;
        let mut stab = Vec::new();
        for (kl, &left) in torus.iter().enumerate() {
            let lg = g.mul_idx(left, rep);
            for (kr, &right) in torus.iter().enumerate() {
                let y = g.mul_idx(lg, right) as usize;
                if self.coset_of[y] == u32::MAX {
                    self.coset_of[y] = id as u32;
                    self.left[y] = kl as u32;
                    self.right[y] = kr as u32;
                    size += 1;
                }
                if y == rep as usize {
                    stab.push((kl as u32 + kr as u32) % n);
                }
            }
        }
        stab.sort_unstable();
        stab.dedup();
        self.cosets.push(DoubleCoset {
            id,
            representative: rep,
            size,
            diagonal_as: Vec::new(),
            stabilizer_logs: stab,
        });
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> &[DoubleCoset] {
        &self.cosets
    }

    pub fn coset(&self, id: usize) -> &DoubleCoset {
        &self.cosets[id]
    }

    #[inline]
    pub fn coset_of(&self, x: u32) -> usize {
        self.coset_of[x as usize] as usize
    }

    /// `(l, r)` with `x = m_{g^l} · rep · m_{g^r}`.
    pub fn torus_factors(&self, x: u32) -> (u32, u32) {
        (self.left[x as usize], self.right[x as usize])
    }

    /// `l + r mod (q²−1)` for the stored factorization of `x`; a
    /// bi-equivariant function for `Φ_j` takes the value
    /// `Φ_j(g^{l+r}) · f(rep)` at `x`.
    #[inline]
    pub fn phase_log(&self, x: u32) -> u32 {
        (self.left[x as usize] + self.right[x as usize]) % self.modulus
    }

    /// Whether a nonzero `Φ_j`-bi-equivariant function can live on coset `id`:
    /// `Φ_j(k)Φ_j(k') = 1` whenever `k · rep · k' = rep`.
    pub fn supports_character(&self, id: usize, j: u32) -> bool {
        let n = self.modulus as u64;
        self.cosets[id].stabilizer_logs.iter().all(|&s| (j as u64 * s as u64).is_multiple_of(n))
    }

    /// The coset containing `d(a,1)`.
    pub fn coset_of_diagonal(&self, g: &Gl2, a: u32) -> usize {
        self.coset_of(g.index_of(&GroupElem::diagonal(a)))
    }

    /// Number of distinct cosets met by `{d(a,1) : a ∈ F^×}`.
    pub fn diagonal_coverage(&self) -> usize {
        self.cosets.iter().filter(|c| !c.diagonal_as.is_empty()).count()
    }
}
