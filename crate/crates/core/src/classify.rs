//! Survey of all monomial classes C*_t for one degree m: per-class invariants,
//! grouping of the closed-surface classes into isomorphism classes, and the
//! emitted tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{weight_distribution, WEIGHT_MAX_M};
use crate::cosets::{class_reps, CosetClass};
use crate::error::{AtlasError, Result};
use crate::geometry::euler_characteristic;
use crate::gf2m::FieldCtx;
use crate::invariants::{v_direct, z_counts, VStar};
use crate::iso::{iso_search, IsoVerdict, DEFAULT_NODE_BUDGET};
use crate::labels::ImageSystem;
use crate::perm::{Convention, Permutation};
use crate::rotation::{sizes_at, SpectrumSummary};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyOptions {
    pub convention: Convention,
    /// Orientability is reported for closed classes up to this degree.
    pub orient_max_m: u32,
    /// Ties in (v, V*) escalate to weight distributions up to this degree.
    pub weight_max_m: u32,
    /// Remaining ties escalate to the isomorphism search up to this degree.
    pub iso_max_m: u32,
    pub iso_budget: u64,
    /// Recompute v from its definition for every class and compare.
    pub check_direct: bool,
    /// Wall-clock budget in seconds.
    pub time_budget_secs: Option<u64>,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            convention: Convention::Inverse,
            orient_max_m: 22,
            weight_max_m: WEIGHT_MAX_M,
            iso_max_m: 11,
            iso_budget: DEFAULT_NODE_BUDGET,
            check_direct: true,
            time_budget_secs: None,
        }
    }
}

/// One coset class C*_rep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub m: u32,
    pub poly: String,
    pub rep: u64,
    pub coset_size: usize,
    pub closed_surface: bool,
    pub apn: bool,
    pub v: u64,
    pub vstar: VStar,
    pub spectrum: SpectrumSummary,
    pub orientable: Option<bool>,
    pub decided_by: Option<String>,
    pub group: Option<usize>,
}

/// An isomorphism class of closed-surface self-embeddings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub id: usize,
    pub v: u64,
    pub vstar: VStar,
    pub reps: Vec<u64>,
    pub decided_by: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyHeader {
    pub m: u32,
    pub poly: String,
    pub n: u64,
    pub table_checksum: String,
    pub options: SurveyOptions,
    /// Worker threads available to the survey.
    pub jobs: usize,
    pub linear_class_size: usize,
    pub total_classes: usize,
    pub processed: usize,
    pub complete: bool,
    pub chi: Option<i64>,
    pub groups: Vec<Group>,
    pub notes: Vec<String>,
}

/// Survey result for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub header: SurveyHeader,
    pub records: Vec<ClassRecord>,
}

impl ClassReport {
    pub fn m(&self) -> u32 {
        self.header.m
    }

    pub fn closed(&self) -> impl Iterator<Item = &ClassRecord> {
        self.records.iter().filter(|r| r.closed_surface)
    }

    pub fn group_count(&self) -> usize {
        self.header.groups.len()
    }

    pub fn undecided(&self) -> usize {
        self.header.groups.iter().filter(|g| g.decided_by == "undecided").count()
    }

    /// The record of the class containing exponent t.
    pub fn find(&self, t: u64) -> Option<&ClassRecord> {
        let n = self.header.n;
        let rep = crate::cosets::coset_star(n, t).ok()?.rep;
        self.records.iter().find(|r| r.rep == rep)
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = serde_json::to_string(&Line::Header(Box::new(self.header.clone())))?;
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(&Line::Class(Box::new(r.clone())))?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut header = None;
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            match serde_json::from_str::<Line>(line)? {
                Line::Header(h) if i == 0 => header = Some(*h),
                Line::Header(_) => return Err(AtlasError::Parse(format!("second header on line {}", i + 1))),
                Line::Class(r) => records.push(*r),
            }
        }
        let header = header.ok_or_else(|| AtlasError::Parse("missing header line".into()))?;
        Ok(ClassReport { header, records })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Header(Box<SurveyHeader>),
    Class(Box<ClassRecord>),
}

fn analyze(ctx: &FieldCtx, class: &CosetClass, opts: &SurveyOptions) -> Result<ClassRecord> {
    let f = Permutation::monomial(ctx, class.rep)?;
    let sys = ImageSystem::new(ctx, &f, opts.convention);
    let spectrum = sizes_at(&sys, 0);
    let closed = spectrum.lines() == 1;
    let (counts, degenerate) = z_counts(&sys, 0);
    let vstar = VStar::from_counts(counts);
    let v = if degenerate || opts.check_direct {
        let direct = v_direct(ctx, &f.effective(opts.convention), 1)?;
        if !degenerate && direct != 1 + vstar.distinct() {
            return Err(AtlasError::Consistency(format!(
                "class {}: v from third points {} but from definition {direct}",
                class.rep,
                1 + vstar.distinct()
            )));
        }
        direct
    } else {
        1 + vstar.distinct()
    };
    let orientable = if closed && ctx.m() <= opts.orient_max_m {
        Some(crate::geometry::orientable(ctx, &f, opts.convention)?)
    } else {
        None
    };
    Ok(ClassRecord {
        m: ctx.m(),
        poly: format!("{:#x}", ctx.poly()),
        rep: class.rep,
        coset_size: class.size(),
        closed_surface: closed,
        apn: v == 1u64 << (ctx.m() - 1),
        v,
        vstar,
        spectrum: spectrum.summary(),
        orientable,
        decided_by: None,
        group: None,
    })
}

/// Splits `members` (indices into records, same (v, V*)) into groups.
fn escalate(
    ctx: &FieldCtx,
    records: &[ClassRecord],
    members: &[usize],
    opts: &SurveyOptions,
) -> Result<Vec<(Vec<usize>, &'static str)>> {
    let m = ctx.m();
    let mut buckets: Vec<Vec<usize>> = vec![members.to_vec()];
    let mut out = Vec::new();
    if m <= opts.weight_max_m {
        let mut by_weights: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
        for &i in members {
            let f = Permutation::monomial(ctx, records[i].rep)?;
            let d = weight_distribution(ctx, &f, true)?;
            by_weights.entry(d.dual).or_default().push(i);
        }
        buckets.clear();
        for (_, b) in by_weights {
            if b.len() == 1 {
                out.push((b, "weight_distribution"));
            } else {
                buckets.push(b);
            }
        }
    }
    for b in buckets {
        if m > opts.iso_max_m {
            out.extend(b.into_iter().map(|i| (vec![i], "undecided")));
            continue;
        }
        let mut subgroups: Vec<(Vec<usize>, &'static str)> = Vec::new();
        for i in b {
            let fi = Permutation::monomial(ctx, records[i].rep)?;
            let mut placed = false;
            let mut unsure = false;
            for (g, how) in subgroups.iter_mut() {
                let fg = Permutation::monomial(ctx, records[g[0]].rep)?;
                match iso_search(ctx, &fg, &fi, opts.convention, opts.iso_budget) {
                    Ok(IsoVerdict::Isomorphic { .. }) => {
                        g.push(i);
                        placed = true;
                        break;
                    }
                    Ok(IsoVerdict::NotIsomorphic) => {}
                    Err(AtlasError::Timeout(_)) => {
                        unsure = true;
                        *how = "undecided";
                    }
                    Err(e) => return Err(e),
                }
            }
            if !placed {
                subgroups.push((vec![i], if unsure { "undecided" } else { "iso_search" }));
            }
        }
        out.extend(subgroups);
    }
    Ok(out)
}

fn group_closed(ctx: &FieldCtx, records: &mut [ClassRecord], opts: &SurveyOptions) -> Result<Vec<Group>> {
    let mut buckets: BTreeMap<(u64, VStar), Vec<usize>> = BTreeMap::new();
    let mut per_v: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, r) in records.iter().enumerate().filter(|(_, r)| r.closed_surface) {
        buckets.entry((r.v, r.vstar.clone())).or_default().push(i);
        *per_v.entry(r.v).or_default() += 1;
    }
    let mut groups = Vec::new();
    for ((v, vstar), members) in buckets {
        let parts = if members.len() == 1 {
            vec![(members, if per_v[&v] == 1 { "v" } else { "vstar" })]
        } else {
            escalate(ctx, records, &members, opts)?
        };
        for (idx, how) in parts {
            let id = groups.len();
            for &i in &idx {
                records[i].group = Some(id);
                records[i].decided_by = Some(how.to_string());
            }
            let mut reps: Vec<u64> = idx.iter().map(|&i| records[i].rep).collect();
            reps.sort_unstable();
            groups.push(Group { id, v, vstar: vstar.clone(), reps, decided_by: how.to_string() });
        }
    }
    Ok(groups)
}

/// Runs the survey on the current rayon pool.
pub fn survey(ctx: &FieldCtx, opts: &SurveyOptions) -> Result<ClassReport> {
    let start = Instant::now();
    let budget = opts.time_budget_secs.map(Duration::from_secs);
    let (linear, classes) = class_reps(ctx.n() as u64);
    let results: Vec<Option<Result<ClassRecord>>> = classes
        .par_iter()
        .map(|c| {
            if budget.is_some_and(|b| start.elapsed() > b) {
                None
            } else {
                Some(analyze(ctx, c, opts))
            }
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for r in results.into_iter().flatten() {
        records.push(r?);
    }
    let groups = group_closed(ctx, &mut records, opts)?;
    let complete = records.len() == classes.len();
    let any_closed = records.iter().any(|r| r.closed_surface);
    let mass = (1u64 << (ctx.m() - 1)) - 1;
    let mut notes = Vec::new();
    if let Some(r) = records.iter().find(|r| r.vstar.mass() != mass) {
        return Err(AtlasError::Consistency(format!("class {}: V* mass {} != {mass}", r.rep, r.vstar.mass())));
    }
    notes.push(format!("every V* satisfies sum(multiplicity * count) = 2^(m-1) - 1 = {mass}"));
    let undecided = groups.iter().filter(|g| g.decided_by == "undecided").count();
    if undecided > 0 {
        notes.push(format!("{undecided} groups could not be separated or merged within the configured budgets"));
    }
    let report = ClassReport {
        header: SurveyHeader {
            m: ctx.m(),
            poly: format!("{:#x}", ctx.poly()),
            n: ctx.n() as u64,
            table_checksum: ctx.checksum(),
            options: opts.clone(),
            jobs: rayon::current_num_threads(),
            linear_class_size: linear.size(),
            total_classes: classes.len(),
            processed: records.len(),
            complete,
            chi: if any_closed { Some(euler_characteristic(ctx.n() as u64)?) } else { None },
            groups,
            notes,
        },
        records,
    };
    if !complete {
        return Err(AtlasError::BudgetExceeded {
            processed: report.header.processed,
            total: report.header.total_classes,
            partial: Box::new(report),
        });
    }
    Ok(report)
}

fn join_reps(reps: &[u64]) -> String {
    reps.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(";")
}

/// `m,classes,v,apn`: closed-surface classes grouped by v.
pub fn table_v_csv(report: &ClassReport) -> Result<String> {
    let mut by_v: BTreeMap<u64, (Vec<u64>, bool)> = BTreeMap::new();
    for r in report.closed() {
        let e = by_v.entry(r.v).or_default();
        e.0.push(r.rep);
        e.1 = r.apn;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "classes", "v", "apn"])?;
    for (v, (mut reps, apn)) in by_v {
        reps.sort_unstable();
        w.write_record([report.m().to_string(), join_reps(&reps), v.to_string(), apn.to_string()])?;
    }
    finish(w)
}

/// `m,class,v,vstar,group,decided_by` for every closed-surface class.
pub fn table_vstar_csv(report: &ClassReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "class", "v", "vstar", "group", "decided_by"])?;
    let mut rows: Vec<&ClassRecord> = report.closed().collect();
    rows.sort_by_key(|r| (r.v, r.rep));
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.rep.to_string(),
            r.v.to_string(),
            r.vstar.to_string(),
            r.group.map(|g| g.to_string()).unwrap_or_default(),
            r.decided_by.clone().unwrap_or_default(),
        ])?;
    }
    finish(w)
}

/// `m,class,rl,reduced` for every APN class.
pub fn table_spectra_csv(report: &ClassReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "class", "rl", "reduced"])?;
    let mut rows: Vec<&ClassRecord> = report.records.iter().filter(|r| r.apn).collect();
    rows.sort_by_key(|r| (r.spectrum.lines, r.rep));
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.rep.to_string(),
            r.spectrum.lines.to_string(),
            r.spectrum.compact_string(),
        ])?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| AtlasError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| AtlasError::Parse(e.to_string()))
}

pub fn markdown(report: &ClassReport) -> String {
    let h = &report.header;
    let mut s = String::new();
    let _ = writeln!(s, "# Survey m = {}\n", h.m);
    let _ = writeln!(s, "- field polynomial: {} (table checksum {})", h.poly, h.table_checksum);
    let _ = writeln!(s, "- convention: {}", h.options.convention);
    let _ = writeln!(s, "- options: `{}`", serde_json::to_string(&h.options).unwrap_or_default());
    let _ = writeln!(s, "- worker threads: {}", h.jobs);
    let _ = writeln!(s, "- classes surveyed: {} of {} (linear class of size {} excluded)", h.processed, h.total_classes, h.linear_class_size);
    let closed = report.closed().count();
    let _ = writeln!(s, "- closed-surface classes: {closed}");
    let _ = writeln!(s, "- isomorphism classes: {} ({} undecided)", h.groups.len(), report.undecided());
    if let Some(chi) = h.chi {
        let _ = writeln!(s, "- Euler characteristic of each closed surface: {chi}");
    }
    if closed > 0 {
        let _ = writeln!(s, "\n| group | classes | v | V* | APN | orientable | decided by |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for g in &h.groups {
            let first = report.records.iter().find(|r| r.rep == g.reps[0]);
            let apn = first.is_some_and(|r| r.apn);
            let orient = first.and_then(|r| r.orientable).map(|o| o.to_string()).unwrap_or_else(|| "-".into());
            let reps: Vec<String> = g.reps.iter().map(|r| format!("C*_{r}")).collect();
            let _ = writeln!(s, "| {} | {} | {} | {} | {} | {} | {} |", g.id, reps.join(", "), g.v, g.vstar, apn, orient, g.decided_by);
        }
    }
    let apn: Vec<&ClassRecord> = report.records.iter().filter(|r| r.apn).collect();
    if !apn.is_empty() {
        let _ = writeln!(s, "\n| APN class | rl(1) | spectrum |\n|---|---|---|");
        for r in apn {
            let _ = writeln!(s, "| C*_{} | {} | {} |", r.rep, r.spectrum.lines, r.spectrum.compact_string());
        }
    }
    if !h.notes.is_empty() {
        let _ = writeln!(s, "\n## Notes\n");
        for n in &h.notes {
            let _ = writeln!(s, "- {n}");
        }
    }
    s
}

/// Writes `table_v.csv`, `table_vstar.csv`, `table_spectra.csv`,
/// `survey.jsonl` and `report.md` under `dir`.
pub fn emit_tables(report: &ClassReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let files = [
        ("table_v.csv", table_v_csv(report)?),
        ("table_vstar.csv", table_vstar_csv(report)?),
        ("table_spectra.csv", table_spectra_csv(report)?),
        ("survey.jsonl", report.to_jsonl()?),
        ("report.md", markdown(report)),
    ];
    let mut out = Vec::new();
    for (name, body) in files {
        let p = dir.join(name);
        fs::write(&p, body)?;
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(m: u32) -> ClassReport {
        survey(&FieldCtx::new(m, None).unwrap(), &SurveyOptions::default()).unwrap()
    }

    #[test]
    fn m3_and_m5() {
        let r = run(3);
        assert_eq!(r.group_count(), 1);
        assert_eq!(r.find(3).unwrap().v, 4);
        assert_eq!(r.find(3).unwrap().orientable, Some(true));
        let r = run(5);
        assert_eq!(r.group_count(), 1);
        assert_eq!(r.header.total_classes, 3);
        let closed: Vec<u64> = r.closed().map(|c| c.rep).collect();
        assert_eq!(closed, vec![5]);
    }

    #[test]
    fn m7_groups() {
        let r = run(7);
        assert_eq!(r.group_count(), 4);
        let g7 = r.find(7).unwrap();
        let g21 = r.find(21).unwrap();
        assert_ne!(g7.group, g21.group);
        assert_eq!(g7.decided_by.as_deref(), Some("iso_search"));
        assert_eq!(r.find(19).unwrap().decided_by.as_deref(), Some("v"));
        assert!(r.find(9).unwrap().apn);
    }

    #[test]
    fn no_closed_classes_for_composite_m() {
        for m in [4, 6, 8] {
            let r = run(m);
            assert_eq!(r.closed().count(), 0);
            assert_eq!(r.group_count(), 0);
            assert_eq!(r.header.chi, None);
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let r = run(7);
        let text = r.to_jsonl().unwrap();
        assert_eq!(text.lines().count(), 1 + r.records.len());
        assert_eq!(ClassReport::from_jsonl(&text).unwrap(), r);
        assert!(ClassReport::from_jsonl("").is_err());
    }

    #[test]
    fn tables_have_expected_shape() {
        let r = run(7);
        let tv = table_v_csv(&r).unwrap();
        assert!(tv.contains("7,7;21,50,false"));
        assert!(tv.contains("7,9,64,true"));
        let ts = table_spectra_csv(&r).unwrap();
        assert!(ts.contains("7,9,1,(1;126)"));
        let md = markdown(&r);
        assert!(md.contains("isomorphism classes: 4"));
    }

    #[test]
    fn time_budget_yields_partial_report() {
        let ctx = FieldCtx::new(7, None).unwrap();
        let opts = SurveyOptions { time_budget_secs: Some(0), ..SurveyOptions::default() };
        match survey(&ctx, &opts) {
            Err(AtlasError::BudgetExceeded { processed, total, partial }) => {
                assert!(processed < total);
                assert!(!partial.header.complete);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
