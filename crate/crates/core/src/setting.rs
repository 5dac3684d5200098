use std::sync::OnceLock;

use rayon::prelude::*;

use crate::chartable::CharacterTable;
use crate::error::Result;
use crate::field::FieldCtx;
use crate::geometry::{DoubleCosetTable, Gl2};

/// Everything derived from one `q`: the group, its validated character table
/// and its double-coset decomposition.
#[derive(Debug)]
pub struct Setting {
    group: Gl2,
    table: CharacterTable,
    cosets: DoubleCosetTable,
    rep_tables: OnceLock<RepTables>,
}

/// Per-representative lookup tables used by the Hecke fast paths.
#[derive(Debug)]
pub(crate) struct RepTables {
    /// `left_inv[c][u]` = index of `rep_c^{-1} · u`.
    pub left_inv: Vec<Vec<u32>>,
    /// `class_right_inv[c][u]` = class of `rep_c · u^{-1}`.
    pub class_right_inv: Vec<Vec<u32>>,
}

impl Setting {
    pub fn new(q: u32) -> Result<Self> {
        Self::from_field(FieldCtx::new(q)?)
    }

    pub fn from_field(field: FieldCtx) -> Result<Self> {
        let group = Gl2::new(field);
        let table = CharacterTable::build(&group)?;
        let cosets = DoubleCosetTable::new(&group);
        Ok(Setting { group, table, cosets, rep_tables: OnceLock::new() })
    }

    pub fn q(&self) -> u32 {
        self.group.q()
    }

    pub fn field(&self) -> &FieldCtx {
        self.group.field()
    }

    pub fn group(&self) -> &Gl2 {
        &self.group
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn cosets(&self) -> &DoubleCosetTable {
        &self.cosets
    }

    /// `|G|`.
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// `|K| = q² − 1`.
    pub fn torus_order(&self) -> usize {
        self.group.torus().len()
    }

    pub(crate) fn rep_tables(&self) -> &RepTables {
        self.rep_tables.get_or_init(|| {
            let g = &self.group;
            let n = g.order() as u32;
            let (left_inv, class_right_inv) = self
                .cosets
                .cosets()
                .par_iter()
                .map(|c| {
                    let rep = c.representative;
                    let rep_inv = g.inv_idx(rep);
                    let left: Vec<u32> = (0..n).map(|u| g.mul_idx(rep_inv, u)).collect();
                    let class: Vec<u32> = (0..n).map(|u| g.class_index(g.mul_idx(rep, g.inv_idx(u)))).collect();
                    (left, class)
                })
                .unzip();
            RepTables { left_inv, class_right_inv }
        })
    }
}
