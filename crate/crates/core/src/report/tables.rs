//! Output tables for the single-purpose subcommands. Column sets and row
//! order are fixed so repeated runs produce identical bytes.

use num_complex::Complex64;

use crate::chartable::IrrepLabel;
use crate::error::{Error, Result};
use crate::field::CharLabel;
use crate::harmonics::{decompose, spherical_explicit, spherical_explicit_scaled, spherical_via_averaging, table1_predicted, TraceScaling};
use crate::hecke::HeckeSpace;
use crate::uncertainty::{extremal_scan, random_trials, ScanItem, UncertaintyRecord};
use crate::Setting;

use super::table::{Cell, Table};

fn joined(values: &[u32]) -> String {
    values.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

fn complex_text(z: Complex64) -> String {
    let clean = |v: f64| {
        let r = (v * 1e12).round() / 1e12;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    let (re, im) = (clean(z.re), clean(z.im));
    if im < 0.0 {
        format!("{re:.12}-{:.12}i", -im)
    } else {
        format!("{re:.12}+{im:.12}i")
    }
}

/// Checks that `j` indexes a character of `E^×`.
pub fn ext_character(s: &Setting, j: u32) -> Result<CharLabel> {
    let n = s.field().ext_order();
    if j >= n {
        return Err(Error::Config(format!("character index {j} out of range 0..{n}")));
    }
    Ok(CharLabel::ext(s.field(), j))
}

pub fn field_info(s: &Setting) -> Table {
    let f = s.field();
    let mut t = Table::new(&["key", "value"]);
    let mut kv = |k: &str, v: Cell| t.push(vec![k.into(), v]);
    kv("q", f.q().into());
    kv("non_square", f.delta().into());
    kv("ext_generator", f.gen_e().to_string().into());
    kv("base_generator", f.gen_f().into());
    kv("ext_units", f.ext_order().into());
    kv("base_units", f.base_order().into());
    kv("norm_one_circle", f.norm_one_circle().len().into());
    kv("group_order", s.order().into());
    kv("torus_order", s.torus_order().into());
    kv("classes", s.table().classes().len().into());
    kv("irreducibles", s.table().labels().len().into());
    kv("double_cosets", s.cosets().len().into());
    t
}

pub fn chartable(s: &Setting) -> Table {
    let table = s.table();
    let mut headers = vec!["family".to_string(), "params".to_string(), "dim".to_string()];
    headers.extend(table.classes().iter().map(|c| c.to_string()));
    let mut t = Table::with_headers(headers);
    for (i, label) in table.labels().iter().enumerate() {
        let mut row: Vec<Cell> = vec![label.family().into(), joined(&label.params()).into(), table.dim(i).into()];
        row.extend(table.row(i).iter().map(|&v| Cell::Text(complex_text(v))));
        t.push(row);
    }
    t
}

pub fn double_cosets(s: &Setting) -> Table {
    let g = s.group();
    let mut t = Table::new(&["coset_id", "size", "rep_a", "rep_b", "rep_c", "rep_d", "diagonal_as"]);
    for c in s.cosets().cosets() {
        let [a, b, cc, d] = g.elem(c.representative).entries();
        t.push(vec![
            c.id.into(),
            c.size.into(),
            a.into(),
            b.into(),
            cc.into(),
            d.into(),
            joined(&c.diagonal_as).into(),
        ]);
    }
    t
}

pub fn decomposition(s: &Setting, phi: CharLabel) -> Result<Table> {
    let d = decompose(s, phi)?;
    let mut t = Table::new(&["family", "params", "dim", "mult_oracle", "mult_table1", "match"]);
    for (label, m) in &d.entries {
        let predicted = table1_predicted(s.field(), label, phi);
        t.push(vec![
            label.family().into(),
            joined(&label.params()).into(),
            label.dim(s.q()).into(),
            (*m).into(),
            predicted.into(),
            (predicted == *m as i64).into(),
        ]);
    }
    Ok(t)
}

/// Resolves `--lambda` to the cuspidal label of `Ind Φ` it names; `Λ` and
/// `Λ^q` name the same representation.
pub fn cuspidal_constituent(s: &Setting, phi: CharLabel, lambda: u32) -> Result<IrrepLabel> {
    let f = s.field();
    let lam = ext_character(s, lambda)?;
    if lam.is_frobenius_fixed(f) {
        return Err(Error::NotCuspidal { lambda });
    }
    let label = IrrepLabel::Cuspidal { lambda: lambda.min(lam.frobenius(f).index) };
    if decompose(s, phi)?.multiplicity_of(&label) == 0 {
        return Err(Error::NotAConstituent { label: label.to_string() });
    }
    Ok(label)
}

/// One row per double coset: the averaging value at the representative
/// and, where the representative is `d(a,1)`, the explicit formula with the
/// literal and the reciprocal trace constraint.
pub fn spherical(s: &Setting, phi: CharLabel, lambda: u32) -> Result<Table> {
    let f = s.field();
    let label = cuspidal_constituent(s, phi, lambda)?;
    let lam = CharLabel::ext(f, lambda);
    let h = spherical_via_averaging(s, phi, &label)?;
    let mut t = Table::new(&[
        "coset_id",
        "diagonal_as",
        "averaging_re",
        "averaging_im",
        "explicit_re",
        "explicit_im",
        "residual",
        "reciprocal_re",
        "reciprocal_im",
        "reciprocal_residual",
    ]);
    for c in s.cosets().cosets() {
        let avg = h.values[c.id];
        let a = c.diagonal_as.first().copied();
        let explicit = match a {
            Some(a) => match spherical_explicit(f, phi, lam, a) {
                Ok(v) => Some(v),
                Err(Error::SingularParameter { .. }) => None,
                Err(e) => return Err(e),
            },
            None => None,
        };
        let reciprocal =
            a.map(|a| spherical_explicit_scaled(f, phi, lam, a, TraceScaling::Reciprocal)).transpose()?;
        t.push(vec![
            c.id.into(),
            joined(&c.diagonal_as).into(),
            avg.re.into(),
            avg.im.into(),
            explicit.map(|v| v.re).into(),
            explicit.map(|v| v.im).into(),
            explicit.map(|v| (v - avg).norm()).into(),
            reciprocal.map(|v| v.re).into(),
            reciprocal.map(|v| v.im).into(),
            reciprocal.map(|v| (v - avg).norm()).into(),
        ]);
    }
    Ok(t)
}

pub const UNCERTAINTY_HEADERS: [&str; 7] =
    ["trial_id", "support_size", "degree_sum", "product", "margin", "extremal", "item"];

fn uncertainty_row(id: usize, r: &UncertaintyRecord, item: String) -> Vec<Cell> {
    vec![
        id.into(),
        r.support_size.into(),
        r.fourier_degree_sum.into(),
        r.product.into(),
        r.margin.into(),
        r.extremal.into(),
        item.into(),
    ]
}

pub fn scan_item_name(item: &ScanItem) -> String {
    match item {
        ScanItem::Epsilon => "epsilon".to_string(),
        ScanItem::CosetIndicator { coset } => format!("coset:{coset}"),
        ScanItem::Spherical { label } => format!("spherical:{label}"),
    }
}

/// `samples` random trials, followed by the basis scan when `exhaustive`.
pub fn uncertainty(s: &Setting, phi: CharLabel, samples: usize, seed: u64, exhaustive: bool) -> Result<Table> {
    let space = HeckeSpace::new(s, phi)?;
    let mut t = Table::new(&UNCERTAINTY_HEADERS);
    for (i, r) in random_trials(&space, samples, seed)?.iter().enumerate() {
        t.push(uncertainty_row(i, r, "random".into()));
    }
    if exhaustive {
        for (k, e) in extremal_scan(&space)?.iter().enumerate() {
            t.push(uncertainty_row(samples + k, &e.record, scan_item_name(&e.item)));
        }
    }
    Ok(t)
}
