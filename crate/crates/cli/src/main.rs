//! `kflaw`: counting, enumeration, table reproduction, bijections, series and verification.
//!
//! Exit codes: 0 success, 1 usage or invalid input, 2 verification mismatch, 3 enumeration
//! budget exceeded.

mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use kflaw_core::certify::{verify_bijections, BijectionRanges};
use kflaw_core::enumerate::{ClassIter, Oracle, DEFAULT_BUDGET};
use kflaw_core::forest::{from_forest, in_bounded_family, label_triplets, to_forest, LabeledForest};
use kflaw_core::formulas::{CountReport, Formula};
use kflaw_core::gf::{scaled, Engine};
use kflaw_core::gf_check::{verify_series, SeriesRanges};
use kflaw_core::identities::{verify_identities, Ranges, IDENTITY_FAMILIES};
use kflaw_core::parking::{embed, park};
use kflaw_core::series::MultiSeries;
use kflaw_core::surgery::{Direction, Family, Surgery};
use kflaw_core::tables::{printed_n_max, regenerate, Column, Table};
use kflaw_core::{ClassSpec, Error, PreferenceSet};

use render::{emit, join, write_json, Format, Grid};

#[derive(Parser)]
#[command(name = "kflaw", version, about = "Exact enumeration of k-flaw preference sets")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "plain")]
    format: Format,
    /// Largest number of sequences a single brute-force enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size of a class by brute force, optionally against a closed-form formula.
    Count {
        #[command(flatten)]
        class: ClassArgs,
        /// Formula id (see `--formula list`).
        #[arg(long)]
        formula: Option<String>,
    },
    /// Every member of a class with its parking outcome.
    Enumerate {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Regenerate an appendix table and compare it with the printed values.
    Table {
        /// Table number, 1-5.
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        which: u8,
        /// Largest n to include; defaults to the printed range.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// The forest of a preference set, or the preference set of a forest.
    Forest {
        /// Comma-separated preferences, or a forest record in JSON.
        input: String,
        /// Spaces for a preference set; a flawed set is read in its embedding.
        #[arg(long)]
        m: Option<usize>,
        /// Also report membership in the bounded forests for this entry bound.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Apply the forest bijection or one of the lead surgeries.
    Bijection {
        #[arg(value_enum)]
        name: BijectionName,
        /// Comma-separated preferences (a forest record for phi-inverse).
        input: String,
        /// Spaces; defaults to the number of cars.
        #[arg(long)]
        m: Option<usize>,
        /// Entry bound; selects the bounded family with `m = n`.
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, value_enum, default_value = "forward")]
        direction: DirectionArg,
    },
    /// Scaled coefficients of a generating function.
    Series {
        #[arg(value_enum)]
        family: SeriesFamily,
        /// Largest power of x.
        #[arg(long, default_value_t = 8)]
        degree: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        s: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Print the raw rational coefficients instead of the factorial-scaled counts.
        #[arg(long)]
        unscaled: bool,
    },
    /// Run a verification suite; exits 2 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest n for the identity and formula sweeps.
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Largest k for families over n + k spaces.
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        /// x-degree of the single-variable series checks.
        #[arg(long, default_value_t = 7)]
        degree: u32,
        /// x-degree of the multivariate series checks.
        #[arg(long, default_value_t = 6)]
        multi_degree: u32,
        /// Largest n for the surgery certifications.
        #[arg(long, default_value_t = 4)]
        surgery_n: usize,
    },
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long)]
    n: usize,
    /// Spaces; defaults to n.
    #[arg(long)]
    m: Option<usize>,
    /// Entry bound; defaults to m.
    #[arg(long)]
    s: Option<usize>,
    /// Flaws; defaults to 0.
    #[arg(long)]
    k: Option<usize>,
    /// Leading term.
    #[arg(long)]
    l: Option<usize>,
}

impl ClassArgs {
    fn spec(&self) -> kflaw_core::Result<ClassSpec> {
        ClassSpec::new(self.n, self.m, self.s, self.k, self.l)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BijectionName {
    Phi,
    PhiInverse,
    Shift,
    RootShift,
    ReplaceLead,
    Promote,
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesFamily {
    P,
    Q,
    R,
    D,
    I,
    H,
    M,
    F,
    W,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Identities,
    Formulas,
    Bijections,
    Series,
    Tables,
    All,
}

/// Failure with its exit code.
enum Failure {
    Usage(String),
    Budget(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    // Assemble everything before writing, so an error never leaves partial output.
    let mut buf = Vec::new();
    let result = run(&cli, &mut buf);
    match result {
        Ok(ok) => {
            if io::stdout().write_all(&buf).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(if ok { 0 } else { 2 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, out: &mut Vec<u8>) -> Outcome {
    let oracle = Oracle::new(cli.budget);
    match &cli.command {
        Command::Count { class, formula } => count(cli.format, &oracle, class, formula.as_deref(), out),
        Command::Enumerate { class, limit } => enumerate(cli.format, cli.budget, class, *limit, out),
        Command::Table { which, n_max } => table(cli.format, &oracle, *which, *n_max, out),
        Command::Forest { input, m, s } => forest(cli.format, input, *m, *s, out),
        Command::Bijection {
            name,
            input,
            m,
            s,
            direction,
        } => bijection(cli.format, *name, input, *m, *s, *direction, out),
        Command::Series {
            family,
            degree,
            k,
            s,
            l,
            unscaled,
        } => series(cli.format, *family, *degree, (*k, *s, *l), *unscaled, out),
        Command::Verify {
            suite,
            n_max,
            k_max,
            degree,
            multi_degree,
            surgery_n,
        } => {
            let ranges = VerifyRanges {
                n_max: *n_max,
                k_max: *k_max,
                degree: *degree,
                multi_degree: *multi_degree,
                surgery_n: *surgery_n,
            };
            verify(cli.format, &oracle, *suite, ranges, out)
        }
    }
}

fn count(format: Format, oracle: &Oracle, class: &ClassArgs, formula: Option<&str>, out: &mut Vec<u8>) -> Outcome {
    if formula == Some("list") {
        let mut g = Grid::new(["formula", "uses", "counts"]);
        for (id, uses, what) in kflaw_core::formulas::FORMULA_IDS {
            g.push([*id, *uses, *what]);
        }
        let ids: Vec<_> = kflaw_core::formulas::FORMULA_IDS.iter().map(|f| json!({"id": f.0, "uses": f.1, "counts": f.2})).collect();
        emit(out, format, &g, &ids)?;
        return Ok(true);
    }
    let spec = class.spec()?;
    let report = match formula {
        Some(id) => CountReport::compare(spec, &Formula::from_id(id, &spec)?, oracle)?,
        None => {
            use kflaw_core::enumerate::CountSource;
            CountReport::brute_only(spec, oracle.count(&spec)?.into())
        }
    };
    let mut g = Grid::new(["class", "brute"]);
    match &report.formula {
        Some(f) => {
            g.header.extend(["formula".into(), "value".into(), "match".into()]);
            g.push([spec.to_string(), report.brute.to_string(), f.id.clone(), f.value.to_string(), report.matches.to_string()]);
        }
        None => g.push([spec.to_string(), report.brute.to_string()]),
    }
    emit(out, format, &g, &report)?;
    Ok(report.formula.is_none() || report.matches)
}

#[derive(Serialize)]
struct MemberRecord {
    preference: String,
    assignment: Vec<Option<usize>>,
    empty_spaces: Vec<usize>,
    flaws: usize,
}

fn enumerate(format: Format, budget: u64, class: &ClassArgs, limit: Option<usize>, out: &mut Vec<u8>) -> Outcome {
    let spec = class.spec()?;
    let records: Vec<MemberRecord> = ClassIter::new(spec, budget)?
        .take(limit.unwrap_or(usize::MAX))
        .map(|p| {
            let o = park(&p);
            MemberRecord {
                preference: p.to_string(),
                assignment: o.assignment,
                empty_spaces: o.empty_spaces,
                flaws: o.flaws,
            }
        })
        .collect();
    if format == Format::Json {
        // One record per line.
        for r in &records {
            writeln!(out, "{}", serde_json::to_string(r).expect("records serialize"))?;
        }
        return Ok(true);
    }
    let mut g = Grid::new(["preference", "assignment", "empty_spaces", "flaws"]);
    for r in &records {
        let assignment: Vec<String> = r.assignment.iter().map(|a| a.map_or("-".into(), |j| j.to_string())).collect();
        g.push([r.preference.clone(), assignment.join(" "), join(&r.empty_spaces, " "), r.flaws.to_string()]);
    }
    emit(out, format, &g, &records)?;
    Ok(true)
}

fn table_grid(t: &Table, format: Format) -> Grid {
    let width = t.max_lead();
    let mut g = Grid::new([t.row_names.0.to_string(), t.row_names.1.to_string()]);
    g.header.extend((1..=width).map(|l| format!("l={l}")));
    g.header.push("total".into());
    for row in &t.rows {
        let mut cells = vec![row.key.0.to_string(), row.key.1.to_string()];
        for column in (1..=width).map(Column::Lead).chain([Column::Total]) {
            let text = match row.cells.iter().find(|c| c.column == column) {
                Some(c) if !c.status.is_ok() || c.note.is_some() => format!("{}*", c.count),
                Some(c) => c.count.to_string(),
                None => String::new(),
            };
            cells.push(text);
        }
        g.rows.push(cells);
    }
    if format == Format::Csv {
        g.header.push("notes".into());
        for (row, cells) in t.rows.iter().zip(&mut g.rows) {
            let notes: Vec<String> = row.cells.iter().filter_map(|c| annotation(c.column, c)).collect();
            cells.push(notes.join("; "));
        }
    }
    g
}

fn annotation(column: Column, c: &kflaw_core::tables::Cell) -> Option<String> {
    let printed = c.printed.as_ref()?;
    if c.status.is_ok() && c.note.is_none() {
        return None;
    }
    let status = serde_json::to_value(c.status).expect("status serializes");
    let status = status.as_str().unwrap_or_default().to_string();
    let note = c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
    Some(format!("l={column}: printed {printed}, brute force {}, {status}{note}", c.count))
}

fn table(format: Format, oracle: &Oracle, which: u8, n_max: Option<usize>, out: &mut Vec<u8>) -> Outcome {
    let t = regenerate(which, n_max.unwrap_or_else(|| printed_n_max(which)), oracle)?;
    match format {
        Format::Json => write_json(out, &t)?,
        Format::Csv => table_grid(&t, format).write_csv(out)?,
        Format::Plain => {
            writeln!(out, "Table {}", t.id)?;
            table_grid(&t, format).write_plain(out)?;
            for (row, c) in t.annotations() {
                if let Some(a) = annotation(c.column, c) {
                    writeln!(out, "* ({}, {}) {a}", row.key.0, row.key.1)?;
                }
            }
        }
    }
    Ok(t.passed())
}

fn forest_record(f: &LabeledForest) -> serde_json::Value {
    serde_json::from_str(&f.to_json()).expect("forest json is valid")
}

fn triplet_record(f: &LabeledForest) -> serde_json::Value {
    serde_json::from_str(&label_triplets(f).to_json()).expect("triplet json is valid")
}

fn forest(format: Format, input: &str, m: Option<usize>, s: Option<usize>, out: &mut Vec<u8>) -> Outcome {
    let (pref, f, flaws) = if input.trim_start().starts_with('{') {
        let f = LabeledForest::from_json(input)?;
        (from_forest(&f), f, 0)
    } else {
        let entries = kflaw_core::parking::parse_entries(input)?;
        let m = m.unwrap_or(entries.len());
        let pref = PreferenceSet::new(entries, m)?;
        let flaws = park(&pref).flaws;
        let f = to_forest(&embed(&pref))?;
        (pref, f, flaws)
    };
    let order = f.forest_order();
    let bounded = s.map(|s| in_bounded_family(&f, s));
    let record = json!({
        "preference": pref.to_string(),
        "m": pref.m(),
        "flaws": flaws,
        "forest": forest_record(&f),
        "triplets": triplet_record(&f),
        "specification": f.forest_specification(),
        "order": order.sigma_inv,
        "bounded": bounded,
    });
    let mut g = Grid::new(["field", "value"]);
    g.push(["preference".to_string(), pref.to_string()]);
    g.push(["m".to_string(), pref.m().to_string()]);
    g.push(["flaws".to_string(), flaws.to_string()]);
    g.push(["forest".to_string(), f.to_json()]);
    g.push(["triplets".to_string(), label_triplets(&f).to_json()]);
    g.push(["specification".to_string(), join(&f.forest_specification(), ",")]);
    g.push(["order".to_string(), join(&order.sigma_inv, ",")]);
    if let (Some(s), Some(b)) = (s, bounded) {
        g.push([format!("bounded s={s}"), b.to_string()]);
    }
    if format == Format::Plain {
        for row in &g.rows {
            writeln!(out, "{:<14}{}", row[0], row[1])?;
        }
    } else {
        emit(out, format, &g, &record)?;
    }
    Ok(true)
}

fn bijection(
    format: Format,
    name: BijectionName,
    input: &str,
    m: Option<usize>,
    s: Option<usize>,
    direction: DirectionArg,
    out: &mut Vec<u8>,
) -> Outcome {
    let dir = match direction {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Backward => Direction::Backward,
    };
    let (from, to): (serde_json::Value, serde_json::Value) = match name {
        BijectionName::PhiInverse => {
            let f = LabeledForest::from_json(input)?;
            let a = from_forest(&f);
            (forest_record(&f), json!({"preference": a.to_string(), "m": a.m()}))
        }
        _ => {
            let entries = kflaw_core::parking::parse_entries(input)?;
            let family = match s {
                Some(s) => Family::Bounded { s },
                None => Family::Unbounded,
            };
            let m = match family {
                Family::Bounded { .. } => entries.len(),
                Family::Unbounded => m.unwrap_or(entries.len()),
            };
            let a = PreferenceSet::new(entries, m)?;
            let describe = |p: &PreferenceSet| -> kflaw_core::Result<serde_json::Value> {
                let f = to_forest(&embed(p))?;
                Ok(json!({"preference": p.to_string(), "m": p.m(), "forest": forest_record(&f)}))
            };
            if name == BijectionName::Phi {
                if dir == Direction::Backward {
                    return Err(Failure::Usage("phi runs forward; use phi-inverse".into()));
                }
                let f = to_forest(&a)?;
                (json!({"preference": a.to_string(), "m": a.m()}), forest_record(&f))
            } else {
                let surgery = match name {
                    BijectionName::Shift => Surgery::ShiftWithinTree,
                    BijectionName::RootShift => Surgery::ShiftToNextRoot,
                    BijectionName::ReplaceLead => Surgery::ReplaceLeading,
                    BijectionName::Promote => Surgery::PromoteLeadSubtree,
                    _ => Surgery::SplitLeadSubtree,
                };
                let b = surgery.apply(&a, family, dir)?;
                (describe(&a)?, describe(&b)?)
            }
        }
    };
    let record = json!({
        "bijection": name.to_possible_value().expect("named").get_name(),
        "direction": match dir { Direction::Forward => "forward", Direction::Backward => "backward" },
        "input": from,
        "output": to,
    });
    let mut g = Grid::new(["side", "value"]);
    g.push(["input".to_string(), serde_json::to_string(&record["input"]).expect("json")]);
    g.push(["output".to_string(), serde_json::to_string(&record["output"]).expect("json")]);
    if format == Format::Plain {
        for side in ["input", "output"] {
            let v = &record[side];
            if let Some(p) = v.get("preference") {
                writeln!(out, "{side:<7}{} (m={})", p.as_str().unwrap_or_default(), v["m"])?;
            }
            if let Some(f) = v.get("forest") {
                writeln!(out, "{:<7}{f}", "")?;
            } else if v.get("preference").is_none() {
                writeln!(out, "{side:<7}{v}")?;
            }
        }
    } else {
        emit(out, format, &g, &record)?;
    }
    Ok(true)
}

fn coefficient_text(c: &BigRational, n: u32, full: bool, unscaled: bool) -> String {
    if unscaled {
        c.to_string()
    } else {
        scaled(c, n, full).to_string()
    }
}

fn series(format: Format, family: SeriesFamily, degree: u32, (k, s, l): (u32, u32, u32), unscaled: bool, out: &mut Vec<u8>) -> Outcome {
    let e = Engine::new(degree);
    let full = matches!(family, SeriesFamily::P | SeriesFamily::Q | SeriesFamily::R | SeriesFamily::D);
    let scale = if unscaled {
        "coefficient"
    } else if full {
        "n! coefficient"
    } else {
        "(n-1)! coefficient"
    };
    if family == SeriesFamily::F {
        let mut g = Grid::new(["n", "s", "k", scale]);
        let mut records = Vec::new();
        let f = e.f();
        for n in 1..=degree {
            for s in 0..n {
                for k in 0..=s {
                    let text = coefficient_text(&f.coeff([n, s, k, 0]), n, false, unscaled);
                    g.push([n.to_string(), s.to_string(), k.to_string(), text.clone()]);
                    records.push(json!({"n": n, "s": s, "k": k, "value": text}));
                }
            }
        }
        emit(out, format, &g, &json!({"series": "F", "scale": scale, "coefficients": records}))?;
        return Ok(true);
    }
    let (name, series): (String, MultiSeries) = match family {
        SeriesFamily::P => ("P".into(), e.p().clone()),
        SeriesFamily::Q => (format!("Q[k={k}]"), e.q(k)),
        SeriesFamily::R => (format!("R[k={k}]"), e.r(k)),
        SeriesFamily::D => (format!("D[k={k},s={s}]"), e.d(k, s)?),
        SeriesFamily::I => (format!("I[k={k}]"), e.i(k)),
        SeriesFamily::H => (format!("H[l={l},k={k}]"), e.h(l, k)),
        SeriesFamily::M => (format!("M[s={s},k={k}]"), e.m(s, k)?),
        SeriesFamily::W => {
            if l < s || l + k > degree {
                return Err(Failure::Usage(format!("W needs s <= l and k + l <= degree, got s={s} l={l} k={k}")));
            }
            let ws = e.w_ascending(k, s)?;
            (format!("W[k={k},s={s},l={l}]"), ws[(l - s) as usize].clone())
        }
        SeriesFamily::F => unreachable!("handled above"),
    };
    let mut g = Grid::new(["n".to_string(), format!("{name} {scale}")]);
    let mut records = Vec::new();
    for n in 0..=degree {
        let c = series.coeff([n, 0, 0, 0]);
        // (n−1)! has no meaning at n = 0; the constant term is shown unscaled there.
        let text = coefficient_text(&c, n, full, unscaled || (!full && n == 0));
        g.push([n.to_string(), text.clone()]);
        records.push(json!({"n": n, "value": text}));
    }
    emit(out, format, &g, &json!({"series": name, "scale": scale, "coefficients": records}))?;
    Ok(true)
}

struct VerifyRanges {
    n_max: usize,
    k_max: usize,
    degree: u32,
    multi_degree: u32,
    surgery_n: usize,
}

#[derive(Serialize)]
struct SuiteSummary {
    suite: &'static str,
    checks: usize,
    failures: Vec<String>,
}

fn verify(format: Format, oracle: &Oracle, suite: Suite, r: VerifyRanges, out: &mut Vec<u8>) -> Outcome {
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let mut summaries = Vec::new();
    let mut details = serde_json::Map::new();
    if wants(Suite::Tables) {
        let mut checks = 0;
        let mut failures = Vec::new();
        let mut tables = Vec::new();
        for id in kflaw_core::tables::TABLE_IDS {
            let t = regenerate(id, printed_n_max(id), oracle)?;
            checks += t.cells().filter(|(_, c)| c.printed.is_some()).count();
            for (row, c) in t.cells().filter(|(_, c)| !c.status.is_ok()) {
                failures.push(format!("table {id} row {:?} column {}", row.key, c.column));
            }
            tables.push(t);
        }
        details.insert("tables".into(), serde_json::to_value(&tables).expect("tables serialize"));
        summaries.push(SuiteSummary { suite: "tables", checks, failures });
    }
    if wants(Suite::Formulas) {
        let mut failures = Vec::new();
        let all = Formula::all_in_range(r.n_max, r.k_max);
        for f in &all {
            if f.evaluate(oracle)? != f.brute(oracle)? {
                failures.push(serde_json::to_string(f).expect("formula serializes"));
            }
        }
        summaries.push(SuiteSummary {
            suite: "formulas",
            checks: all.len(),
            failures,
        });
    }
    if wants(Suite::Identities) {
        let mut failures = Vec::new();
        let mut results = Vec::new();
        for (id, _) in IDENTITY_FAMILIES {
            let rs = verify_identities(id, Ranges { n_max: r.n_max, k_max: r.k_max }, oracle)?;
            failures.extend(rs.iter().filter(|x| !x.pass).map(|x| format!("{id} {}", x.witness.clone().unwrap_or_default())));
            results.extend(rs);
        }
        details.insert("identities".into(), serde_json::to_value(&results).expect("results serialize"));
        summaries.push(SuiteSummary {
            suite: "identities",
            checks: results.len(),
            failures,
        });
    }
    if wants(Suite::Bijections) {
        let ranges = BijectionRanges {
            surgery_n: r.surgery_n,
            ..BijectionRanges::default()
        };
        let report = verify_bijections(ranges)?;
        let failures = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} {}: {}", c.name, c.params, c.detail.clone().unwrap_or_default()))
            .collect();
        summaries.push(SuiteSummary {
            suite: "bijections",
            checks: report.checks.len(),
            failures,
        });
        details.insert("bijections".into(), serde_json::to_value(&report).expect("report serializes"));
    }
    if wants(Suite::Series) {
        let ranges = SeriesRanges {
            univariate: r.degree,
            multivariate: r.multi_degree,
            k_max: r.k_max as u32,
        };
        let report = verify_series(ranges, oracle)?;
        let failures = report
            .coefficients
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} n={}: {} vs {}", c.series, c.n, c.value, c.oracle))
            .chain(report.duals.iter().filter(|d| !d.pass).map(|d| d.name.clone()))
            .collect();
        summaries.push(SuiteSummary {
            suite: "series",
            checks: report.coefficients.len() + report.duals.len(),
            failures,
        });
        details.insert("series".into(), serde_json::to_value(&report).expect("report serializes"));
    }
    let ok = summaries.iter().all(|s| s.failures.is_empty());
    let mut g = Grid::new(["suite", "checks", "failures", "status"]);
    for s in &summaries {
        let status = if s.failures.is_empty() { "pass" } else { "FAIL" };
        g.push([s.suite.to_string(), s.checks.to_string(), s.failures.len().to_string(), status.to_string()]);
    }
    match format {
        Format::Json => write_json(out, &json!({"pass": ok, "summary": summaries, "details": details}))?,
        _ => {
            emit(out, format, &g, &summaries)?;
            if format == Format::Plain {
                for s in &summaries {
                    for f in &s.failures {
                        writeln!(out, "{}: {f}", s.suite)?;
                    }
                }
            }
        }
    }
    Ok(ok)
}
