use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sts_atlas::classify::{emit_tables, markdown, survey, table_spectra_csv, table_v_csv, table_vstar_csv, SurveyOptions};
use sts_atlas::codes::{min_distance_upto5, quadruple_check, weight_distribution, weights_csv, ParityCheck};
use sts_atlas::cosets::class_reps;
use sts_atlas::geometry::surface_report;
use sts_atlas::golden::{verify, Golden};
use sts_atlas::invariants::{apn_by_v, apn_oracle, v_direct, v_star, v_tilde, v_value};
use sts_atlas::iso::{iso_search, IsoVerdict, DEFAULT_NODE_BUDGET};
use sts_atlas::labels::triples_at;
use sts_atlas::rotation::{is_closed_surface, pinch_count, rotation_lines, spectrum};
use sts_atlas::{AtlasError, Convention, FieldCtx, Permutation, Result};

#[derive(Parser)]
#[command(name = "atlas", version, about = "Self-embeddings of Hamming Steiner triple systems under power maps")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "ATLAS_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Extension degree.
    #[arg(long)]
    m: u32,
    /// Primitive polynomial as a bitmask, e.g. 0x25.
    #[arg(long, value_parser = parse_poly)]
    poly: Option<u64>,
}

impl FieldArgs {
    fn ctx(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.m, self.poly)
    }
}

#[derive(Args, Clone)]
struct MapArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Exponent of the power map x^t.
    #[arg(long)]
    t: u64,
    #[arg(long, default_value_t = Convention::Inverse, value_parser = parse_convention)]
    convention: Convention,
}

impl MapArgs {
    fn load(&self) -> Result<(FieldCtx, Permutation)> {
        let ctx = self.field.ctx()?;
        let f = Permutation::monomial(&ctx, self.t)?;
        Ok((ctx, f))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Md,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters and a table checksum.
    Field(FieldArgs),
    /// Cyclotomic classes C*_t of exponents coprime to 2^m - 1.
    Cosets(FieldArgs),
    /// Blocks of S through a point.
    Triples {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        point: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rotation lines at a point.
    Rotation {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        point: u32,
    },
    /// Rotation-line spectrum at a point.
    Spectrum {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        point: u32,
    },
    /// v, V* and the third-point multiset at a point.
    Invariants {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        point: u32,
        /// Also print the third points in rotation-line order.
        #[arg(long)]
        tilde: bool,
    },
    /// APN status by three independent routes.
    Apn(MapArgs),
    /// The code C_F: rank, distance, weights, weight-4 check.
    Code {
        #[command(flatten)]
        map: MapArgs,
        /// Emit the weight distribution as w,count CSV.
        #[arg(long)]
        weights: bool,
        /// Use the extended code C*_F for --weights.
        #[arg(long)]
        extended: bool,
        /// Compare the weight-4 count of C*_F with the solution-count formula.
        #[arg(long)]
        quad: bool,
    },
    /// Euler characteristic and orientability of a closed surface.
    Orient(MapArgs),
    /// Isomorphism search between x^t1 and x^t2.
    Iso {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        t1: u64,
        #[arg(long)]
        t2: u64,
        #[arg(long, default_value_t = Convention::Inverse, value_parser = parse_convention)]
        convention: Convention,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Survey every class for one degree.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        survey: SurveyArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Md)]
        report: ReportFormat,
        /// Write all tables, the JSONL archive and the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare fresh surveys with reference tables.
    Verify {
        #[arg(long)]
        golden: PathBuf,
        /// Degrees to check (repeatable); defaults to every degree up to 13 in the tables.
        #[arg(long)]
        m: Vec<u32>,
        #[arg(long, value_parser = parse_poly)]
        poly: Option<u64>,
        #[command(flatten)]
        survey: SurveyArgs,
    },
}

#[derive(Args, Clone)]
struct SurveyArgs {
    #[arg(long, default_value_t = Convention::Inverse, value_parser = parse_convention)]
    convention: Convention,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    iso_budget: u64,
    #[arg(long, default_value_t = 11)]
    iso_max_m: u32,
    #[arg(long, default_value_t = 13)]
    weight_max_m: u32,
    #[arg(long, default_value_t = 22)]
    orient_max_m: u32,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_budget: Option<u64>,
    /// Skip recomputing v from its definition.
    #[arg(long)]
    no_check: bool,
}

impl SurveyArgs {
    fn options(&self) -> SurveyOptions {
        SurveyOptions {
            convention: self.convention,
            orient_max_m: self.orient_max_m,
            weight_max_m: self.weight_max_m,
            iso_max_m: self.iso_max_m,
            iso_budget: self.iso_budget,
            check_direct: !self.no_check,
            time_budget_secs: self.time_budget,
        }
    }
}

fn parse_poly(s: &str) -> std::result::Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid polynomial `{s}`: {e}"))
}

fn parse_convention(s: &str) -> std::result::Result<Convention, String> {
    s.parse().map_err(|e: AtlasError| e.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    match cli.cmd {
        Cmd::Field(a) => {
            let ctx = a.ctx()?;
            writeln!(out, "m = {}", ctx.m())?;
            writeln!(out, "poly = {:#x}", ctx.poly())?;
            writeln!(out, "n = {}", ctx.n())?;
            writeln!(out, "checksum = {}", ctx.checksum())?;
        }
        Cmd::Cosets(a) => {
            let ctx = a.ctx()?;
            let (linear, classes) = class_reps(ctx.n() as u64);
            writeln!(out, "linear class C*_1: size {} (excluded)", linear.size())?;
            for c in classes {
                let members: Vec<String> = c.members.iter().map(|x| x.to_string()).collect();
                let shown = if members.len() > 40 {
                    format!("{} ...", members[..40].join(" "))
                } else {
                    members.join(" ")
                };
                writeln!(out, "{}\t{}\t{}", c.rep, c.size(), shown)?;
            }
        }
        Cmd::Triples { field, point, format } => {
            let ctx = field.ctx()?;
            let pairs = triples_at(&ctx, point)?;
            match format {
                Format::Text => {
                    for (q, r) in pairs {
                        writeln!(out, "{{{point}, {q}, {r}}}")?;
                    }
                }
                Format::Csv => {
                    writeln!(out, "p,q,r")?;
                    for (q, r) in pairs {
                        writeln!(out, "{point},{q},{r}")?;
                    }
                }
                Format::Json => {
                    let v: Vec<[u32; 3]> = pairs.iter().map(|(q, r)| [point, q.0, r.0]).collect();
                    writeln!(out, "{}", serde_json::to_string(&v)?)?;
                }
            }
        }
        Cmd::Rotation { map, point } => {
            let (ctx, f) = map.load()?;
            for line in rotation_lines(&ctx, &f, point, map.convention)? {
                writeln!(out, "{line}")?;
            }
        }
        Cmd::Spectrum { map, point } => {
            let (ctx, f) = map.load()?;
            let s = spectrum(&ctx, &f, point, map.convention)?;
            writeln!(out, "{}", s.reduced_string())?;
            writeln!(out, "full: {}", s.full_string())?;
        }
        Cmd::Invariants { map, point, tilde } => {
            let (ctx, f) = map.load()?;
            let conv = map.convention;
            let vs = v_star(&ctx, &f, point, conv)?;
            let v = match v_value(&ctx, &f, point, conv) {
                Ok(v) => v,
                Err(AtlasError::DegenerateEmbedding { .. }) => v_direct(&ctx, &f.effective(conv), point)?,
                Err(e) => return Err(e),
            };
            writeln!(out, "v = {v}{}", if v == 1 << (ctx.m() - 1) { " (APN)" } else { "" })?;
            writeln!(out, "V* = {vs}")?;
            writeln!(out, "closed surface = {}", yes_no(is_closed_surface(&ctx, &f, conv)))?;
            writeln!(out, "spectrum = {}", spectrum(&ctx, &f, point, conv)?)?;
            if tilde {
                let z: Vec<String> = v_tilde(&ctx, &f, point, conv)?.iter().map(|p| p.to_string()).collect();
                writeln!(out, "third points = {{{}}}", z.join(", "))?;
            }
        }
        Cmd::Apn(map) => {
            let (ctx, f) = map.load()?;
            let by_v = apn_by_v(&ctx, &f);
            writeln!(out, "apn (v) = {by_v}")?;
            if ctx.m() <= 13 {
                writeln!(out, "apn (differential count) = {}", apn_oracle(&ctx, &f))?;
            }
            writeln!(out, "min distance of C_F = {}", min_distance_upto5(&ctx, &f))?;
        }
        Cmd::Code { map, weights, extended, quad } => {
            let (ctx, f) = map.load()?;
            let pc = ParityCheck::build(&ctx, &f);
            if !weights && !quad {
                writeln!(out, "length = {}", pc.length())?;
                writeln!(out, "rank = {}", pc.rank())?;
                writeln!(out, "min distance = {}", min_distance_upto5(&ctx, &f))?;
            }
            if weights {
                let d = weight_distribution(&ctx, &f, true)?;
                let dist = if extended { d.extended() } else { d.counts };
                write!(out, "{}", weights_csv(&dist))?;
            }
            if quad {
                let q = quadruple_check(&ctx, &f)?;
                writeln!(out, "weight-4 words of C*_F = {}", q.lhs)?;
                writeln!(out, "formula = {}", q.rhs)?;
                writeln!(out, "match = {}", q.holds())?;
            }
        }
        Cmd::Orient(map) => {
            let (ctx, f) = map.load()?;
            let pinches = pinch_count(&ctx, &f, map.convention);
            if pinches > 0 {
                writeln!(out, "pinch points = {pinches}")?;
                return Err(AtlasError::NotClosedSurface);
            }
            let r = surface_report(&ctx, &f, map.convention)?;
            writeln!(out, "chi = {}", r.chi)?;
            writeln!(out, "orientable = {}", r.orientable)?;
            if r.orientable {
                writeln!(out, "genus = {}", r.genus_or_crosscaps)?;
            } else {
                writeln!(out, "crosscaps = {}", r.genus_or_crosscaps)?;
            }
        }
        Cmd::Iso { field, t1, t2, convention, budget } => {
            let ctx = field.ctx()?;
            let f1 = Permutation::monomial(&ctx, t1)?;
            let f2 = Permutation::monomial(&ctx, t2)?;
            match iso_search(&ctx, &f1, &f2, convention, budget)? {
                IsoVerdict::Isomorphic { witness, reversing } => {
                    writeln!(out, "isomorphic")?;
                    writeln!(out, "color reversing = {reversing}")?;
                    let cols: Vec<String> = witness.columns().iter().map(|c| format!("{c:#x}")).collect();
                    writeln!(out, "witness columns = [{}]", cols.join(", "))?;
                }
                IsoVerdict::NotIsomorphic => writeln!(out, "not isomorphic")?,
            }
        }
        Cmd::Classify { field, survey: s, report, out: dir } => {
            let ctx = field.ctx()?;
            let rep = survey(&ctx, &s.options())?;
            if let Some(dir) = dir {
                for p in emit_tables(&rep, &dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            match report {
                ReportFormat::Md => write!(out, "{}", markdown(&rep))?,
                ReportFormat::Json => write!(out, "{}", rep.to_jsonl()?)?,
                ReportFormat::Csv => {
                    write!(out, "{}", table_v_csv(&rep)?)?;
                    writeln!(out)?;
                    write!(out, "{}", table_vstar_csv(&rep)?)?;
                    writeln!(out)?;
                    write!(out, "{}", table_spectra_csv(&rep)?)?;
                }
            }
        }
        Cmd::Verify { golden, m, poly, survey: s } => {
            let g = Golden::load(&golden)?;
            let degrees: Vec<u32> = if m.is_empty() { g.degrees().into_iter().filter(|&d| d <= 13).collect() } else { m };
            let mut ok = true;
            for d in degrees {
                let ctx = FieldCtx::new(d, poly)?;
                let rep = survey(&ctx, &s.options())?;
                let outcome = verify(&rep, &g)?;
                writeln!(
                    out,
                    "m={d}: {} checks, {} mismatches, {} classes",
                    outcome.checks,
                    outcome.mismatches.len(),
                    rep.group_count()
                )?;
                for mm in &outcome.mismatches {
                    writeln!(out, "  MISMATCH {mm}")?;
                }
                for n in &outcome.notes {
                    writeln!(out, "  note: {n}")?;
                }
                ok &= outcome.passed();
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            let rec = json!({ "error": "golden_mismatch", "message": "computed tables differ from the reference" });
            eprintln!("{rec}");
            ExitCode::from(1)
        }
        Err(e) => {
            let _ = out.flush();
            let rec = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{rec}");
            ExitCode::from(1)
        }
    }
}
