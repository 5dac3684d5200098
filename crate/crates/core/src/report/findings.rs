use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::table::{Cell, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Verified,
    Refuted,
    Partial,
}

impl ClaimStatus {
    pub fn name(self) -> &'static str {
        match self {
            ClaimStatus::Verified => "verified",
            ClaimStatus::Refuted => "refuted",
            ClaimStatus::Partial => "partial",
        }
    }
}

/// Every tracked claim with its location in the source text, in report order.
pub const CLAIMS: &[(&str, &str)] = &[
    ("mult-one", "multiplicity-one theorem for the twisted induced representation"),
    ("table1.onedim", "decomposition table, one-dimensional row"),
    ("table1.steinberg", "decomposition table, Steinberg row"),
    ("table1.principal", "decomposition table, principal-series row"),
    ("table1.cuspidal", "decomposition table, cuspidal row"),
    ("remark.st-plus-one", "remark on the degenerate principal series, sum identity"),
    ("remark.st-minus-one", "remark on the degenerate principal series, difference identity"),
    ("lemma.twisting", "twisting lemma for torus restrictions"),
    ("prop.distance-classifies", "distance invariant classifies pairs of half-plane points"),
    ("dcosets.diag-complete", "diagonal elements d(a,1) represent every double coset"),
    ("gelfand.commutative", "double-coset count equals the number of constituents of Ind 1"),
    ("cor.functional-equation", "functional equation of spherical functions"),
    ("prop.center-epimorphism", "projection maps the center onto the center of the Hecke algebra"),
    ("zeta.explicit", "explicit formula for cuspidal spherical functions on d(a,1)"),
    ("zeta.a-ne-minus1", "explicit formula restricted to a other than -1"),
    ("katz.interp-1", "alternate formula on the norm-one circle, reading: omega only"),
    ("katz.interp-2", "alternate formula on the norm-one circle, reading: trace sign"),
    ("katz.interp-3", "alternate formula on the norm-one circle, reading: circle quadratic"),
    ("katz.interp-4", "alternate formula on the norm-one circle, reading: discriminant sign"),
    ("plancherel.hecke", "Plancherel inversion over the constituents"),
    ("parseval", "Parseval identity on the Hecke algebra"),
    ("uncertainty.inequality", "uncertainty inequality on the Hecke algebra"),
    ("uncertainty.proof-chain", "norm inequalities chained in the uncertainty proof"),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FindingsEntry {
    pub claim_id: String,
    pub location: String,
    pub status: ClaimStatus,
    pub evidence: String,
}

#[derive(Clone, Debug)]
struct Observation {
    q: u32,
    status: ClaimStatus,
    evidence: String,
}

/// Collects per-q observations and folds them into one entry per claim.
#[derive(Clone, Debug, Default)]
pub struct FindingsBuilder {
    observations: BTreeMap<&'static str, Vec<Observation>>,
    appendix: Vec<(String, Table)>,
}

fn known(claim: &str) -> &'static str {
    CLAIMS.iter().find(|(id, _)| *id == claim).unwrap_or_else(|| panic!("unregistered claim {claim}")).0
}

impl FindingsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, claim: &str, q: u32, status: ClaimStatus, evidence: impl Into<String>) {
        self.observations.entry(known(claim)).or_default().push(Observation { q, status, evidence: evidence.into() });
    }

    pub fn check(&mut self, claim: &str, q: u32, holds: bool, evidence: impl Into<String>) {
        let status = if holds { ClaimStatus::Verified } else { ClaimStatus::Refuted };
        self.record(claim, q, status, evidence);
    }

    /// Verified when every case agrees, refuted when none does.
    pub fn rate(&mut self, claim: &str, q: u32, agree: usize, total: usize, evidence: impl Into<String>) {
        let status = match (agree, total) {
            (_, 0) => ClaimStatus::Partial,
            (a, t) if a == t => ClaimStatus::Verified,
            (0, _) => ClaimStatus::Refuted,
            _ => ClaimStatus::Partial,
        };
        self.record(claim, q, status, evidence);
    }

    pub fn attach(&mut self, title: impl Into<String>, table: Table) {
        self.appendix.push((title.into(), table));
    }

    pub fn finish(mut self) -> Findings {
        let entries = CLAIMS
            .iter()
            .map(|&(id, location)| {
                let mut obs = self.observations.remove(id).unwrap_or_default();
                obs.sort_by_key(|o| o.q);
                let (status, evidence) = if obs.is_empty() {
                    (ClaimStatus::Partial, "0 cases: not exercised for the configured q values".to_string())
                } else {
                    let first = obs[0].status;
                    let status = if obs.iter().all(|o| o.status == first) { first } else { ClaimStatus::Partial };
                    let evidence = obs.iter().map(|o| format!("q={}: {}", o.q, o.evidence)).collect::<Vec<_>>().join("; ");
                    (status, evidence)
                };
                FindingsEntry { claim_id: id.to_string(), location: location.to_string(), status, evidence }
            })
            .collect();
        Findings { entries, appendix: self.appendix }
    }
}

#[derive(Clone, Debug)]
pub struct Findings {
    pub entries: Vec<FindingsEntry>,
    pub appendix: Vec<(String, Table)>,
}

fn markdown_cell(c: &Cell) -> String {
    c.csv_text().replace('|', "\\|")
}

pub fn markdown_table(t: &Table) -> String {
    let mut out = String::new();
    writeln!(out, "| {} |", t.headers.join(" | ")).unwrap();
    writeln!(out, "|{}", "---|".repeat(t.headers.len())).unwrap();
    for row in &t.rows {
        writeln!(out, "| {} |", row.iter().map(markdown_cell).collect::<Vec<_>>().join(" | ")).unwrap();
    }
    out
}

impl Findings {
    pub fn entry(&self, claim: &str) -> Option<&FindingsEntry> {
        self.entries.iter().find(|e| e.claim_id == claim)
    }

    pub fn to_markdown(&self, header: &str) -> String {
        let mut out = String::new();
        writeln!(out, "# Findings\n\n{header}\n").unwrap();
        let mut summary = Table::new(&["claim", "status"]);
        for e in &self.entries {
            summary.push(vec![e.claim_id.clone().into(), e.status.name().into()]);
        }
        out.push_str(&markdown_table(&summary));
        for e in &self.entries {
            writeln!(out, "\n## {} ({})\n\nLocation: {}\n\nEvidence: {}", e.claim_id, e.status.name(), e.location, e.evidence)
                .unwrap();
        }
        if !self.appendix.is_empty() {
            writeln!(out, "\n# Evidence tables").unwrap();
            for (title, table) in &self.appendix {
                writeln!(out, "\n## {title}\n").unwrap();
                if table.is_empty() {
                    writeln!(out, "(no rows)").unwrap();
                } else {
                    out.push_str(&markdown_table(table));
                }
            }
        }
        out
    }
}
