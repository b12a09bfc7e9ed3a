//! Comparison of survey reports against the transcribed reference tables in a
//! golden directory (`table_v.csv`, `table_vstar.csv`, `table_spectra.csv`,
//! `class_counts.csv`).

use std::collections::BTreeSet;
use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::ClassReport;
use crate::cosets::coset_star;
use crate::error::{AtlasError, Result};
use crate::invariants::VStar;

#[derive(Clone, Debug, Deserialize)]
pub struct VRow {
    pub m: u32,
    pub classes: String,
    pub v: u64,
    pub apn: bool,
}

impl VRow {
    pub fn reps(&self) -> Result<Vec<u64>> {
        self.classes
            .split(';')
            .map(|c| c.trim().parse().map_err(|_| AtlasError::Parse(format!("bad class list `{}`", self.classes))))
            .collect()
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct VStarRow {
    pub m: u32,
    pub class: u64,
    pub v: u64,
    pub vstar: String,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SpectrumRow {
    pub m: u32,
    pub class: u64,
    pub rl: usize,
    pub reduced: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CountRow {
    pub m: u32,
    pub classes: usize,
}

/// The reference tables.
#[derive(Clone, Debug, Default)]
pub struct Golden {
    pub v: Vec<VRow>,
    pub vstar: Vec<VStarRow>,
    pub spectra: Vec<SpectrumRow>,
    pub counts: Vec<CountRow>,
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(File::open(path)?);
    r.deserialize().map(|row| row.map_err(AtlasError::from)).collect()
}

impl Golden {
    pub fn load(dir: &Path) -> Result<Self> {
        Ok(Golden {
            v: read(&dir.join("table_v.csv"))?,
            vstar: read(&dir.join("table_vstar.csv"))?,
            spectra: read(&dir.join("table_spectra.csv"))?,
            counts: read(&dir.join("class_counts.csv"))?,
        })
    }

    /// Degrees mentioned anywhere in the tables.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.v
            .iter()
            .map(|r| r.m)
            .chain(self.vstar.iter().map(|r| r.m))
            .chain(self.spectra.iter().map(|r| r.m))
            .chain(self.counts.iter().map(|r| r.m))
            .collect()
    }
}

/// Normalizes `(s; a, b)` and `(s;a,b)` to the same string.
pub fn normalize_spectrum(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub m: u32,
    pub checks: usize,
    pub mismatches: Vec<String>,
    pub notes: Vec<String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.mismatches.push(msg());
        }
    }
}

fn rep_of(n: u64, t: u64) -> Result<u64> {
    Ok(coset_star(n, t)?.rep)
}

pub fn verify_v(report: &ClassReport, golden: &Golden, out: &mut VerifyOutcome) -> Result<()> {
    let m = report.m();
    let n = report.header.n;
    let rows: Vec<&VRow> = golden.v.iter().filter(|r| r.m == m).collect();
    if rows.is_empty() {
        return Ok(());
    }
    let mut listed = BTreeSet::new();
    for row in rows {
        for t in row.reps()? {
            let rep = rep_of(n, t)?;
            listed.insert(rep);
            match report.find(t) {
                None => out.check(false, || format!("m={m}: class of {t} missing from report")),
                Some(r) => {
                    out.check(r.closed_surface, || format!("m={m} C*_{t}: not a closed surface"));
                    out.check(r.v == row.v, || format!("m={m} C*_{t}: v = {} expected {}", r.v, row.v));
                    out.check(r.apn == row.apn, || format!("m={m} C*_{t}: apn = {} expected {}", r.apn, row.apn));
                }
            }
        }
    }
    let found: BTreeSet<u64> = report.closed().map(|r| r.rep).collect();
    out.check(found == listed, || {
        let extra: Vec<_> = found.difference(&listed).collect();
        let missing: Vec<_> = listed.difference(&found).collect();
        format!("m={m}: closed classes differ (unlisted {extra:?}, not found {missing:?})")
    });
    Ok(())
}

pub fn verify_vstar(report: &ClassReport, golden: &Golden, out: &mut VerifyOutcome) -> Result<()> {
    let m = report.m();
    for row in golden.vstar.iter().filter(|r| r.m == m) {
        let want: VStar = row.vstar.parse()?;
        match report.find(row.class) {
            None => out.check(false, || format!("m={m}: class of {} missing", row.class)),
            Some(r) => {
                out.check(r.v == row.v, || format!("m={m} C*_{}: v = {} expected {}", row.class, r.v, row.v));
                out.check(r.vstar == want, || format!("m={m} C*_{}: V* = {} expected {}", row.class, r.vstar, want));
            }
        }
        if let Some(note) = row.note.as_ref().filter(|s| !s.is_empty()) {
            out.notes.push(format!("m={m} C*_{}: {note}", row.class));
        }
    }
    Ok(())
}

pub fn verify_spectra(report: &ClassReport, golden: &Golden, out: &mut VerifyOutcome) -> Result<()> {
    let m = report.m();
    for row in golden.spectra.iter().filter(|r| r.m == m) {
        match report.find(row.class) {
            None => out.check(false, || format!("m={m}: class of {} missing", row.class)),
            Some(r) => {
                let got = r.spectrum.compact_string();
                out.check(r.spectrum.lines == row.rl, || {
                    format!("m={m} C*_{}: rl = {} expected {}", row.class, r.spectrum.lines, row.rl)
                });
                out.check(normalize_spectrum(&got) == normalize_spectrum(&row.reduced), || {
                    format!("m={m} C*_{}: spectrum {got} expected {}", row.class, row.reduced)
                });
            }
        }
    }
    Ok(())
}

pub fn verify_counts(report: &ClassReport, golden: &Golden, out: &mut VerifyOutcome) {
    let m = report.m();
    for row in golden.counts.iter().filter(|r| r.m == m) {
        let got = report.group_count();
        out.check(got == row.classes, || format!("m={m}: {got} isomorphism classes, expected {}", row.classes));
        let und = report.undecided();
        if und > 0 {
            out.notes.push(format!("m={m}: {und} groups undecided"));
        }
    }
}

/// Runs every comparison for the report's degree.
pub fn verify(report: &ClassReport, golden: &Golden) -> Result<VerifyOutcome> {
    let mut out = VerifyOutcome { m: report.m(), ..Default::default() };
    verify_v(report, golden, &mut out)?;
    verify_vstar(report, golden, &mut out)?;
    verify_spectra(report, golden, &mut out)?;
    verify_counts(report, golden, &mut out);
    Ok(out)
}
