use std::fmt;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::chartable::{twisting_identity_residual, IrrepLabel};
use crate::error::{Error, Result};
use crate::field::CharLabel;
use crate::geometry::classify_pair_orbits;
use crate::harmonics::{
    center_epimorphism_check, decompose, functional_equation_residual, katz_scan, representative_pairs,
    sampled_pairs, spherical_functions, verify_table1, zeta_comparison, Decomposition, Table1Report, ROUNDING_TOL,
};
use crate::hecke::{fourier_hs_norm_sq, GroupFunction, HeckeSpace};
use crate::uncertainty::{extremal_scan, proof_chain, random_trials, trial_seed, ScanItem};
use crate::Setting;

use super::config::{exit, RunConfig};
use super::findings::{ClaimStatus, Findings, FindingsBuilder};
use super::table::{write_file, Table};
use super::tables;

/// Wall-clock budget for the full suite over q ≤ 7, in seconds.
pub const FULL_SUITE_BUDGET: f64 = 60.0;
/// Budget for one reduced-suite q.
pub const REDUCED_SUITE_BUDGET: f64 = 300.0;
/// Largest q that gets the full suite.
pub const FULL_SUITE_MAX_Q: u32 = 7;

const PLANCHEREL_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;
const CENTER_STREAM: u64 = 0xc2b2_ae3d_27d4_eb4f;
const PAIR_STREAM: u64 = 0x1656_67b1_9e37_79f9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A claim under test; recorded in the findings, never fails the run.
    Reported,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Reported => "reported",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.name().to_uppercase())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub criterion: u8,
    pub q: Option<u32>,
    pub title: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    /// Wall time, shown on the console only so that files stay reproducible.
    #[serde(skip)]
    pub seconds: Option<f64>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let q = self.q.map_or("all".to_string(), |q| format!("q={q}"));
        let mut s = format!("{:<8} c{:02} {:<5} {}: {}", self.verdict, self.criterion, q, self.title, self.detail);
        if let Some(t) = self.seconds {
            s.push_str(&format!(" [{t:.2} s]"));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub qs: Vec<u32>,
    pub outcomes: Vec<CriterionOutcome>,
    pub findings: Findings,
    /// Per-q output tables, keyed by file stem.
    pub tables: Vec<(String, Table)>,
}

impl SelftestReport {
    pub fn failures(&self) -> Vec<&CriterionOutcome> {
        self.outcomes.iter().filter(|o| o.verdict == Verdict::Fail).collect()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures().is_empty() {
            exit::SUCCESS
        } else {
            exit::CRITERIA_FAILED
        }
    }

    pub fn outcome(&self, criterion: u8, q: Option<u32>) -> Option<&CriterionOutcome> {
        self.outcomes.iter().find(|o| o.criterion == criterion && o.q == q)
    }

    pub fn failure_json(&self) -> String {
        serde_json::to_string(&self.failures()).expect("serializable")
    }
}

struct Run<'c, 'l> {
    cfg: &'c RunConfig,
    outcomes: Vec<CriterionOutcome>,
    findings: FindingsBuilder,
    tables: Vec<(String, Table)>,
    table1_mismatches: Table,
    remark: Table,
    zeta_mismatches: Table,
    zeta_minus_one: Table,
    katz: Table,
    log: &'l mut dyn FnMut(&CriterionOutcome),
}

fn pass_fail(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn sci(v: f64) -> String {
    format!("{v:.1e}")
}

impl Run<'_, '_> {
    fn emit(&mut self, criterion: u8, q: Option<u32>, title: &'static str, verdict: Verdict, detail: String, start: Instant) {
        let o = CriterionOutcome { criterion, q, title, verdict, detail, seconds: Some(start.elapsed().as_secs_f64()) };
        (self.log)(&o);
        self.outcomes.push(o);
    }

    fn tol(&self) -> f64 {
        self.cfg.tolerance
    }

    fn run_q(&mut self, q: u32) -> Result<f64> {
        let started = Instant::now();
        let t = Instant::now();
        let s = Setting::new(q)?;
        let full = q <= FULL_SUITE_MAX_Q;
        let small = q <= 5;

        self.character_table(&s, t);
        let decomps = self.multiplicity_one(&s)?;
        if full {
            let report = self.table1(&s)?;
            if small {
                self.remark_identities(q, &report);
            }
            self.twisting(&s);
            if small {
                self.pair_orbits(&s);
            }
            self.gelfand(&s, &decomps[0]);
            self.functional_equation(&s)?;
            if small {
                self.center(&s)?;
            }
            self.zeta(&s)?;
        }
        if small || !full {
            self.plancherel(&s)?;
        }
        self.uncertainty(&s)?;
        if full && q >= 5 {
            self.katz(&s)?;
        }
        if full {
            self.tables.push((format!("doublecosets_q{q}"), tables::double_cosets(&s)));
            self.tables.push((format!("decompose_q{q}_phi0"), tables::decomposition(&s, CharLabel::ext(s.field(), 0))?));
        }
        Ok(started.elapsed().as_secs_f64())
    }

    fn character_table(&mut self, s: &Setting, t: Instant) {
        let q = s.q();
        let v = s.table().validation();
        let classes = s.table().classes().len();
        let ok = v.row_residual < self.tol()
            && v.column_residual < self.tol()
            && v.dimension_square_sum == s.order() as u64
            && classes as u32 == q * q - 1;
        let detail = format!(
            "row residual {}, column residual {}, sum of squared degrees {} (|G| = {}), {} classes",
            sci(v.row_residual),
            sci(v.column_residual),
            v.dimension_square_sum,
            s.order(),
            classes
        );
        self.emit(1, Some(q), "character table", pass_fail(ok), detail, t);
    }

    fn multiplicity_one(&mut self, s: &Setting) -> Result<Vec<Decomposition>> {
        let t = Instant::now();
        let q = s.q();
        let f = s.field();
        let decomps: Vec<Decomposition> =
            (0..f.ext_order()).into_par_iter().map(|j| decompose(s, CharLabel::ext(f, j))).collect::<Result<_>>()?;
        let max_mult = decomps.iter().flat_map(|d| d.entries.iter().map(|e| e.1)).max().unwrap_or(0);
        let residual = decomps.iter().map(|d| d.rounding_residual).fold(0.0, f64::max);
        let free = decomps.iter().all(Decomposition::is_multiplicity_free);
        let ok = free && residual < ROUNDING_TOL * self.tol() / 1e-8;
        let detail = format!(
            "{} characters, largest multiplicity {max_mult}, rounding residual {}",
            decomps.len(),
            sci(residual)
        );
        self.findings.check("mult-one", q, free, detail.clone());
        self.emit(2, Some(q), "multiplicity one", pass_fail(ok), detail, t);

        let t = Instant::now();
        let target = (q * q - q) as u64;
        let bad = decomps.iter().filter(|d| d.degree_sum(q) != target).count();
        let detail = format!("sum of m*d equals {target} for {}/{} characters", decomps.len() - bad, decomps.len());
        self.emit(3, Some(q), "degree sum", pass_fail(bad == 0), detail, t);
        Ok(decomps)
    }

    fn table1(&mut self, s: &Setting) -> Result<Table1Report> {
        let t = Instant::now();
        let q = s.q();
        let report = verify_table1(s)?;
        let mut parts = Vec::new();
        for row in &report.rows {
            let claim = match row.family {
                "one-dim" => "table1.onedim",
                "steinberg" => "table1.steinberg",
                "principal" => "table1.principal",
                _ => "table1.cuspidal",
            };
            let mut evidence = format!("{}/{} entries match", row.matched, row.checked);
            if let Some(m) = row.mismatches.first() {
                evidence.push_str(&format!(
                    ", first mismatch {} at phi={}: oracle {}, predicted {}",
                    m.label, m.phi, m.oracle, m.predicted
                ));
            }
            self.findings.rate(claim, q, row.matched, row.checked, evidence);
            for m in &row.mismatches {
                self.table1_mismatches.push(vec![
                    q.into(),
                    m.label.to_string().into(),
                    m.phi.into(),
                    m.oracle.into(),
                    m.predicted.into(),
                ]);
            }
            parts.push(format!("{} {}/{}", row.family, row.matched, row.checked));
        }
        let ok = report.nondegenerate_rows_match();
        self.emit(4, Some(q), "decomposition table", pass_fail(ok), parts.join(", "), t);
        Ok(report)
    }

    fn remark_identities(&mut self, q: u32, report: &Table1Report) {
        let t = Instant::now();
        let mut parts = Vec::new();
        for (equation, claim, name) in [(1u8, "remark.st-plus-one", "St+1"), (2, "remark.st-minus-one", "St-1")] {
            let checks: Vec<_> = report.remark.iter().filter(|r| r.equation == equation).collect();
            let holding = checks.iter().filter(|r| r.holds()).count();
            let values = checks
                .iter()
                .map(|r| format!("alpha={}: {:.6} (claimed {})", r.alpha, r.computed, r.expected))
                .collect::<Vec<_>>()
                .join(", ");
            self.findings.rate(claim, q, holding, checks.len(), format!("{holding}/{} hold; {values}", checks.len()));
            for r in &checks {
                self.remark.push(vec![q.into(), name.into(), r.alpha.into(), r.computed.into(), r.expected.into()]);
            }
            parts.push(format!("{name} {holding}/{}", checks.len()));
        }
        self.emit(5, Some(q), "degenerate identities in Ind 1", Verdict::Reported, parts.join(", "), t);
    }

    fn twisting(&mut self, s: &Setting) {
        let t = Instant::now();
        let q = s.q();
        let worst = (0..s.field().ext_order())
            .into_par_iter()
            .map(|j| twisting_identity_residual(s.group(), s.table(), j).max())
            .reduce(|| 0.0, f64::max);
        let ok = worst < self.tol() / 10.0;
        let detail = format!("max residual {} over {} characters", sci(worst), s.field().ext_order());
        self.findings.check("lemma.twisting", q, ok, detail.clone());
        self.emit(6, Some(q), "twisting identities", pass_fail(ok), detail, t);
    }

    fn pair_orbits(&mut self, s: &Setting) {
        let t = Instant::now();
        let q = s.q();
        let r = classify_pair_orbits(s.group());
        let expected_pairs = ((q * q - q) * (q * q - q)) as usize;
        let ok = r.classifies() && r.pairs == expected_pairs;
        let detail = format!(
            "{} pairs, {} orbits, {} distance values, {} violations",
            r.pairs, r.orbits, r.distance_values, r.violations
        );
        self.findings.check("prop.distance-classifies", q, r.classifies(), detail.clone());
        self.emit(7, Some(q), "distance classifies pair orbits", pass_fail(ok), detail, t);
    }

    fn gelfand(&mut self, s: &Setting, trivial: &Decomposition) {
        let t = Instant::now();
        let q = s.q();
        let cosets = s.cosets().len();
        let constituents = trivial.constituents().count();
        let ok = cosets == constituents && (q != 3 || cosets == 3);
        let detail = format!("{cosets} double cosets, {constituents} constituents of Ind 1");
        self.findings.check("gelfand.commutative", q, cosets == constituents, detail.clone());
        let covered = s.cosets().diagonal_coverage();
        self.findings.check(
            "dcosets.diag-complete",
            q,
            covered == cosets,
            format!("d(a,1) meets {covered} of {cosets} double cosets"),
        );
        self.emit(8, Some(q), "double cosets vs constituents", pass_fail(ok), detail, t);
    }

    fn functional_equation(&mut self, s: &Setting) -> Result<()> {
        let t = Instant::now();
        let q = s.q();
        let f = s.field();
        let pairs =
            if q <= 5 { representative_pairs(s) } else { sampled_pairs(s, 1000, self.cfg.seed ^ PAIR_STREAM) };
        let identity = s.group().identity_index();
        let per_phi: Vec<(f64, f64, usize)> = (0..f.ext_order())
            .into_par_iter()
            .map(|j| -> Result<(f64, f64, usize)> {
                let phi = CharLabel::ext(f, j);
                let hs = spherical_functions(s, phi)?;
                let mut worst: f64 = 0.0;
                let mut unit: f64 = 0.0;
                for h in &hs {
                    let func = h.to_group_function(s);
                    worst = worst.max(functional_equation_residual(s, phi, &func, &pairs));
                    unit = unit.max((func.get(identity) - 1.0).norm());
                }
                Ok((worst, unit, hs.len()))
            })
            .collect::<Result<_>>()?;
        let worst = per_phi.iter().map(|p| p.0).fold(0.0, f64::max);
        let unit = per_phi.iter().map(|p| p.1).fold(0.0, f64::max);
        let count: usize = per_phi.iter().map(|p| p.2).sum();
        let ok = worst < self.tol() && unit < self.tol();
        let detail = format!(
            "{count} spherical functions, {} pairs each, max residual {}, max |h(e)-1| {}",
            pairs.len(),
            sci(worst),
            sci(unit)
        );
        self.findings.check("cor.functional-equation", q, ok, detail.clone());
        self.emit(9, Some(q), "functional equation", pass_fail(ok), detail, t);
        Ok(())
    }

    fn center(&mut self, s: &Setting) -> Result<()> {
        let t = Instant::now();
        let q = s.q();
        let f = s.field();
        let trials = 100;
        let reports: Vec<_> = (0..f.ext_order())
            .into_par_iter()
            .map(|j| center_epimorphism_check(s, CharLabel::ext(f, j), trials, self.cfg.seed ^ CENTER_STREAM))
            .collect::<Result<_>>()?;
        let worst = reports.iter().map(|r| r.multiplicativity_residual).fold(0.0, f64::max);
        let rank_ok = reports.iter().filter(|r| r.image_rank == r.constituents).count();
        let ok = worst < self.tol() / 10.0 && rank_ok == reports.len();
        let detail = format!(
            "{trials} trials per character, max multiplicativity residual {}, image rank matches for {rank_ok}/{}",
            sci(worst),
            reports.len()
        );
        self.findings.check("prop.center-epimorphism", q, ok, detail.clone());
        self.emit(10, Some(q), "center epimorphism", pass_fail(ok), detail, t);
        Ok(())
    }

    fn zeta(&mut self, s: &Setting) -> Result<()> {
        let t = Instant::now();
        let q = s.q();
        let tol = self.tol();
        let cases = zeta_comparison(s)?;
        let literal: Vec<_> = cases.iter().filter(|c| c.explicit.is_some()).collect();
        let agree = literal.iter().filter(|c| c.residual.unwrap() < tol).count();
        let worst = literal.iter().filter_map(|c| c.residual).fold(0.0, f64::max);
        let rec_agree = cases.iter().filter(|c| c.reciprocal_residual < tol).count();
        let rec_worst = cases.iter().map(|c| c.reciprocal_residual).fold(0.0, f64::max);
        let evidence = format!(
            "literal constraint agrees in {agree}/{} cases (max residual {}); reciprocal constraint agrees in {rec_agree}/{} (max residual {})",
            literal.len(),
            sci(worst),
            cases.len(),
            sci(rec_worst)
        );
        self.findings.rate("zeta.explicit", q, agree, literal.len(), evidence.clone());
        for c in &literal {
            let (v, r) = (c.explicit.unwrap(), c.residual.unwrap());
            if r >= tol {
                self.zeta_mismatches.push(vec![
                    q.into(),
                    c.phi.into(),
                    c.lambda.into(),
                    c.a.into(),
                    c.coset_id.into(),
                    c.averaging.re.into(),
                    c.averaging.im.into(),
                    v.re.into(),
                    v.im.into(),
                    r.into(),
                    c.reciprocal_residual.into(),
                ]);
            }
        }
        let minus_one: Vec<_> = cases.iter().filter(|c| c.explicit.is_none()).collect();
        let m_agree = minus_one.iter().filter(|c| c.reciprocal_residual < tol).count();
        for c in &minus_one {
            self.zeta_minus_one.push(vec![
                q.into(),
                c.phi.into(),
                c.lambda.into(),
                c.coset_id.into(),
                c.averaging.re.into(),
                c.averaging.im.into(),
                c.reciprocal.re.into(),
                c.reciprocal.im.into(),
                c.reciprocal_residual.into(),
            ]);
        }
        self.findings.record(
            "zeta.a-ne-minus1",
            q,
            ClaimStatus::Partial,
            format!(
                "literal formula undefined in {} cases at a=-1; averaging supplies the value there, and the reciprocal constraint Tr(w)=0 agrees with it in {m_agree}/{}",
                minus_one.len(),
                minus_one.len()
            ),
        );
        self.emit(11, Some(q), "explicit spherical formula", Verdict::Reported, evidence, t);
        Ok(())
    }

    fn plancherel(&mut self, s: &Setting) -> Result<()> {
        let t = Instant::now();
        let q = s.q();
        let f = s.field();
        let samples = self.cfg.samples.unwrap_or(100);
        let seed = self.cfg.seed ^ PLANCHEREL_STREAM;
        let per_phi: Vec<(f64, f64)> = (0..f.ext_order())
            .into_par_iter()
            .map(|j| -> Result<(f64, f64)> {
                let space = HeckeSpace::new(s, CharLabel::ext(f, j))?;
                let mut recon: f64 = 0.0;
                let mut parseval: f64 = 0.0;
                for i in 0..samples {
                    let h = space.random(trial_seed(seed, j, i))?;
                    recon = recon.max(space.plancherel_reconstruct(&h)?.max_abs_diff(h.function()));
                    let hs = space.hs_norms_sq(&h)?;
                    let spectral: f64 =
                        hs.iter().enumerate().map(|(k, v)| s.table().dim(k) as f64 * v).sum::<f64>() / s.order() as f64;
                    parseval = parseval.max((spectral - h.function().l2_norm_sq()).abs());
                }
                Ok((recon, parseval))
            })
            .collect::<Result<_>>()?;
        let recon = per_phi.iter().map(|p| p.0).fold(0.0, f64::max);
        let parseval = per_phi.iter().map(|p| p.1).fold(0.0, f64::max);
        let tol = self.tol();
        let head = format!("{samples} random functions per character");
        self.findings.check(
            "plancherel.hecke",
            q,
            recon < tol,
            format!("{head}, max reconstruction residual {}", sci(recon)),
        );
        self.findings.check("parseval", q, parseval < tol, format!("{head}, max Parseval residual {}", sci(parseval)));
        let ok = recon < tol && parseval < tol;
        let detail = format!("{head}, reconstruction residual {}, Parseval residual {}", sci(recon), sci(parseval));
        self.emit(12, Some(q), "Plancherel and Parseval", pass_fail(ok), detail, t);
        Ok(())
    }

    fn uncertainty_samples(&self, q: u32) -> usize {
        self.cfg.samples.unwrap_or(if q <= 5 { 1000 } else { 100 })
    }

    fn uncertainty(&mut self, s: &Setting) -> Result<()> {
        let t = Instant::now();
        let q = s.q();
        let f = s.field();
        let samples = self.uncertainty_samples(q);
        let seed = self.cfg.seed;
        struct PerPhi {
            scanned: usize,
            scan_min: i64,
            eps_extremal: bool,
            random_min: i64,
            extremal_random: usize,
            chain_ok: bool,
            chain_slack: f64,
        }
        let per_phi: Vec<PerPhi> = (0..f.ext_order())
            .into_par_iter()
            .map(|j| -> Result<PerPhi> {
                let space = HeckeSpace::new(s, CharLabel::ext(f, j))?;
                let scan = extremal_scan(&space)?;
                let eps = scan.iter().find(|e| e.item == ScanItem::Epsilon).expect("scan includes epsilon");
                let records = random_trials(&space, samples, seed)?;
                let mut chain_ok = true;
                let mut chain_slack = f64::INFINITY;
                for i in 0..samples.min(10) {
                    let c = proof_chain(&space, &space.random(trial_seed(seed, j, i))?)?;
                    chain_ok &= c.holds(self.cfg.tolerance);
                    chain_slack = chain_slack.min(c.fourier_bound - c.sup_norm);
                }
                Ok(PerPhi {
                    scanned: scan.len(),
                    scan_min: scan.iter().map(|e| e.record.margin).min().unwrap_or(0),
                    eps_extremal: eps.record.product == eps.record.bound,
                    random_min: records.iter().map(|r| r.margin).min().unwrap_or(0),
                    extremal_random: records.iter().filter(|r| r.extremal).count(),
                    chain_ok,
                    chain_slack,
                })
            })
            .collect::<Result<_>>()?;
        let scanned: usize = per_phi.iter().map(|p| p.scanned).sum();
        let scan_min = per_phi.iter().map(|p| p.scan_min).min().unwrap_or(0);
        let random_min = per_phi.iter().map(|p| p.random_min).min().unwrap_or(0);
        let eps_ok = per_phi.iter().filter(|p| p.eps_extremal).count();
        let extremal_random: usize = per_phi.iter().map(|p| p.extremal_random).sum();
        let chain_ok = per_phi.iter().all(|p| p.chain_ok);
        let chain_slack = per_phi.iter().map(|p| p.chain_slack).fold(f64::INFINITY, f64::min);
        let ok = scan_min >= 0 && random_min >= 0 && eps_ok == per_phi.len();
        let detail = format!(
            "basis scan: {scanned} functions, min margin {scan_min}; {samples} random per character: min margin {random_min}, {extremal_random} extremal; epsilon extremal for {eps_ok}/{}",
            per_phi.len()
        );
        self.findings.check("uncertainty.inequality", q, ok, detail.clone());

        let st = s
            .table()
            .label_index(&IrrepLabel::Steinberg { alpha: 0 })
            .expect("Steinberg is always present");
        let unit_hs =
            fourier_hs_norm_sq(s.group(), s.table(), st, &GroupFunction::point_mass(s.group(), s.group().identity_index()))?;
        self.findings.record(
            "uncertainty.proof-chain",
            q,
            ClaimStatus::Partial,
            format!(
                "sup-norm bound holds on {} sampled functions: {} (min slack {:.3e}); the unit Hilbert-Schmidt norm of a unitary fails, squared norm of the identity on the Steinberg space is {:.6} (degree {q})",
                per_phi.len() * samples.min(10),
                if chain_ok { "yes" } else { "no" },
                chain_slack,
                unit_hs
            ),
        );
        self.emit(13, Some(q), "uncertainty inequality", pass_fail(ok), detail, t);
        Ok(())
    }

    fn katz(&mut self, s: &Setting) -> Result<()> {
        let t = Instant::now();
        let q = s.q();
        let (_, summaries) = katz_scan(s, self.tol())?;
        let mut parts = Vec::new();
        for sum in &summaries {
            let claim = format!("katz.interp-{}", sum.interpretation.number());
            self.findings.rate(
                &claim,
                q,
                sum.agreements,
                sum.cases,
                format!(
                    "{} agrees in {}/{} cases, max residual {}",
                    sum.interpretation,
                    sum.agreements,
                    sum.cases,
                    sci(sum.max_residual)
                ),
            );
            self.katz.push(vec![
                q.into(),
                sum.interpretation.name().into(),
                sum.cases.into(),
                sum.agreements.into(),
                sum.max_residual.into(),
            ]);
            parts.push(format!("{} {}/{}", sum.interpretation, sum.agreements, sum.cases));
        }
        self.emit(14, Some(q), "alternate formula scan", Verdict::Reported, parts.join(", "), t);
        Ok(())
    }
}

/// Runs every criterion for every configured q, reporting each outcome to
/// `log` as soon as it is known.
pub fn run_selftest(cfg: &RunConfig, log: &mut dyn FnMut(&CriterionOutcome)) -> Result<SelftestReport> {
    cfg.validate()?;
    let qs = cfg.normalized_qs();
    let mut run = Run {
        cfg,
        outcomes: Vec::new(),
        findings: FindingsBuilder::new(),
        tables: Vec::new(),
        table1_mismatches: Table::new(&["q", "irreducible", "phi", "oracle", "predicted"]),
        remark: Table::new(&["q", "identity", "alpha", "computed", "claimed"]),
        zeta_mismatches: Table::new(&[
            "q",
            "phi",
            "lambda",
            "a",
            "coset_id",
            "averaging_re",
            "averaging_im",
            "literal_re",
            "literal_im",
            "literal_residual",
            "reciprocal_residual",
        ]),
        zeta_minus_one: Table::new(&[
            "q",
            "phi",
            "lambda",
            "coset_id",
            "averaging_re",
            "averaging_im",
            "reciprocal_re",
            "reciprocal_im",
            "reciprocal_residual",
        ]),
        katz: Table::new(&["q", "interpretation", "cases", "agreements", "max_residual"]),
        log,
    };
    let mut full_time = 0.0;
    let mut reduced = Vec::new();
    for &q in &qs {
        let secs = run.run_q(q)?;
        if q <= FULL_SUITE_MAX_Q {
            full_time += secs;
        } else {
            reduced.push((q, secs));
        }
    }
    let start = Instant::now();
    let has_full = qs.iter().any(|&q| q <= FULL_SUITE_MAX_Q);
    let mut ok = full_time < FULL_SUITE_BUDGET;
    let mut parts = Vec::new();
    if has_full {
        parts.push(format!("q<={FULL_SUITE_MAX_Q} suite within {FULL_SUITE_BUDGET} s"));
    }
    for &(q, secs) in &reduced {
        ok &= secs < REDUCED_SUITE_BUDGET;
        parts.push(format!("q={q} reduced suite within {REDUCED_SUITE_BUDGET} s"));
    }
    let mut o = CriterionOutcome {
        criterion: 15,
        q: None,
        title: "runtime",
        verdict: pass_fail(ok),
        detail: parts.join(", "),
        seconds: None,
    };
    (run.log)(&CriterionOutcome {
        detail: format!(
            "{} (measured {full_time:.2} s{})",
            o.detail,
            reduced.iter().map(|(q, t)| format!(", q={q}: {t:.2} s")).collect::<String>()
        ),
        seconds: Some(start.elapsed().as_secs_f64()),
        ..o.clone()
    });
    o.seconds = None;
    run.outcomes.push(o);

    if let Some(&q) = qs.first() {
        let s = Setting::new(q)?;
        run.findings.attach(format!("Double cosets at q={q}"), tables::double_cosets(&s));
    }
    run.findings.attach("Decomposition-table mismatches", run.table1_mismatches);
    run.findings.attach("Degenerate identities in Ind 1", run.remark);
    run.findings.attach("Explicit spherical formula, literal mismatches", run.zeta_mismatches);
    run.findings.attach("Explicit spherical formula at a=-1", run.zeta_minus_one);
    run.findings.attach("Alternate formula agreement by reading", run.katz);
    Ok(SelftestReport { qs, outcomes: run.outcomes, findings: run.findings.finish(), tables: run.tables })
}

fn findings_header(report: &SelftestReport, cfg: &RunConfig) -> String {
    let qs = report.qs.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
    format!(
        "Generated by `torus-harmonics selftest` for q in {{{qs}}} with tolerance {:e} and seed {}. Status is verified when every checked case agrees, refuted when none does, and partial otherwise.",
        cfg.tolerance, cfg.seed
    )
}

/// Writes FINDINGS.md, criteria.json and the per-q tables into `dir`.
pub fn emit_reports(report: &SelftestReport, cfg: &RunConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    write_file(&dir.join("FINDINGS.md"), &report.findings.to_markdown(&findings_header(report, cfg)))?;
    let mut criteria = Table::new(&["criterion", "q", "title", "verdict", "detail"]);
    for o in &report.outcomes {
        criteria.push(vec![
            (o.criterion as u32).into(),
            o.q.into(),
            o.title.into(),
            o.verdict.name().into(),
            o.detail.clone().into(),
        ]);
    }
    write_file(&dir.join("criteria.json"), &criteria.to_json())?;
    for (stem, table) in &report.tables {
        write_file(&dir.join(format!("{stem}.{}", cfg.format.extension())), &table.render(cfg.format))?;
    }
    Ok(())
}
