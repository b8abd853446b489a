//! The `nmr-logic` command line.
//!
//! Exit codes: 0 on success, 1 when a built-in self-check fails, 2 for
//! usage, parse and I/O errors.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::complex_logic::{
    complex_multiply_via_logic, conjugate_truth_check, encode, encode_decode_roundtrip, mand, phase_distance,
    ptruth, pxnor, ComplexSample, EncodingParams,
};
use crate::error::{Error, Result};
use crate::format::csv_cell;
use crate::gate_search::{selective_delay_table, GateSearch, Quantizer, SearchHit};
use crate::npn::{
    binary_burnside_count, burnside_count, classify_binary, fixed_point_total, BinaryFunction,
    NpnClassification, GROUP_ORDER,
};
use crate::pc::{binary_pc_signature, pc_binary_check, pc_classify_with, pc_signature, PcSignature};
use crate::spin::{linspace, scan, ExperimentTemplate, Grid};
use crate::ternary::{FunctionIndex, TernaryFunction, FUNCTION_COUNT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Round-trip error tolerated by `complex` before it reports failure.
const ROUNDTRIP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "nmr-logic",
    version,
    about = "Ternary logic classes, NMR gate simulation and complex-number logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// NPN and parameter-centric classification of all two-input functions
    Classify(ClassifyArgs),
    /// Sweep a sequence template over two parameter grids and write the x readout
    Simulate(SimulateArgs),
    /// Search parameter triples implementing a logic class
    Search(SearchArgs),
    /// Complex-number logic and its NMR encoding
    Complex(ComplexArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    #[default]
    Table,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    radix: u8,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Experiment document, or builtin:single-pulse | builtin:two-pulse | builtin:selective-delay
    #[arg(long)]
    sequence: String,
    /// Values for $A: comma-separated (e.g. `pi/2,pi,3pi/2`) or `lin:START:END:N`
    #[arg(long = "grid-a")]
    grid_a: String,
    /// Values for $B, same syntax as --grid-a
    #[arg(long = "grid-b")]
    grid_b: String,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Output format (csv by default)
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// multiplication | selective-delay | <function index> | all
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = Quantizer::DEFAULT_EPSILON)]
    epsilon: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ComplexArgs {
    #[command(subcommand)]
    op: ComplexOp,
    #[arg(long, global = true, default_value_t = EncodingParams::DEFAULT_ALPHA)]
    alpha: f64,
    /// T1 in seconds
    #[arg(long, global = true, default_value_t = EncodingParams::default().t1)]
    t1: f64,
    /// Frame offset in rad/s
    #[arg(long = "omega-off", global = true, default_value_t = EncodingParams::default().omega_off)]
    omega_off: f64,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ComplexOp {
    /// Multiply two samples given as `r1 theta1 r2 theta2`
    Mul {
        #[arg(allow_negative_numbers = true)]
        r1: String,
        #[arg(allow_negative_numbers = true)]
        theta1: String,
        #[arg(allow_negative_numbers = true)]
        r2: String,
        #[arg(allow_negative_numbers = true)]
        theta2: String,
    },
    /// Phase truth of an angle
    Truth {
        #[arg(allow_negative_numbers = true)]
        theta: String,
    },
}

/// Parses and runs a command line, writing reports to `stdout` (or the
/// `--out` file) and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Search(a) => cmd_search(&a),
        Command::Complex(a) => cmd_complex(&a),
    };
    match result.and_then(|report| emit(report, stdout)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// A rendered report and where it goes.
struct Report {
    body: String,
    out: Option<PathBuf>,
    passed: bool,
}

fn emit(report: Report, stdout: &mut dyn Write) -> Result<i32> {
    match &report.out {
        Some(path) => fs::write(path, &report.body)?,
        None => stdout.write_all(report.body.as_bytes())?,
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Parses an angle: a plain number or `[k]pi[/d]`, e.g. `3pi/2`, `-pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse value `{text}`"));
    if let Some(pos) = t.find("pi") {
        let (coef, rest) = (&t[..pos], &t[pos + 2..]);
        let coef = match coef.trim_end_matches('*') {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let div = match rest {
            "" => 1.0,
            r => r
                .strip_prefix('/')
                .ok_or_else(bad)?
                .parse::<f64>()
                .map_err(|_| bad())?,
        };
        Ok(coef * PI / div)
    } else {
        t.parse::<f64>().map_err(|_| bad())
    }
}

/// Parses a grid: comma-separated angles or `lin:START:END:N` (inclusive).
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    if let Some(spec) = t.strip_prefix("lin:") {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "expected lin:START:END:N, got `{t}`"
            )));
        }
        let n: usize = parts[2]
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad sample count `{}`", parts[2])))?;
        if n == 0 {
            return Err(Error::InvalidArgument("empty grid".into()));
        }
        return Ok(linspace(parse_angle(parts[0])?, parse_angle(parts[1])?, n));
    }
    t.split(',').map(parse_angle).collect()
}

pub fn load_template(spec: &str) -> Result<ExperimentTemplate> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let omega = 2.0 * PI * 100.0;
        return match name {
            "single-pulse" => Ok(ExperimentTemplate::single_pulse()),
            "two-pulse" => Ok(ExperimentTemplate::two_pulse(1.5 * PI, PI / 2.0)),
            "selective-delay" => Ok(ExperimentTemplate::selective_delay(omega, 0.25 * omega)),
            other => Err(Error::InvalidArgument(format!(
                "unknown builtin template `{other}`"
            ))),
        };
    }
    let text = fs::read_to_string(Path::new(spec))?;
    ExperimentTemplate::from_json(&text)
}

fn table_rows(f: &TernaryFunction) -> [[i8; 3]; 3] {
    f.rows()
}

fn inline_table(f: &TernaryFunction) -> String {
    f.rows()
        .iter()
        .map(|r| format!("{} {} {}", r[0], r[1], r[2]))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Serialize)]
struct NpnEntry {
    canonical: u32,
    size: usize,
    table: Vec<Vec<i8>>,
    pc_signature: PcSignature,
}

#[derive(Serialize)]
struct PcEntry {
    signature: PcSignature,
    members: usize,
    npn_classes: Vec<FunctionIndex>,
    single: bool,
}

#[derive(Serialize)]
struct TernaryReport {
    radix: u8,
    functions: u32,
    group_order: usize,
    classes: usize,
    burnside: u64,
    fixed_points: u64,
    self_check: bool,
    npn_classes: Vec<NpnEntry>,
    pc_classes: Vec<PcEntry>,
}

#[derive(Serialize)]
struct BinaryEntry {
    canonical: u8,
    size: usize,
    members: Vec<u8>,
    table: Vec<Vec<u8>>,
    pc_signature: PcSignature,
}

#[derive(Serialize)]
struct BinaryReport {
    radix: u8,
    functions: u8,
    group_order: usize,
    classes: usize,
    burnside: u64,
    pc_classes: usize,
    pc_matches_npn: bool,
    self_check: bool,
    npn_classes: Vec<BinaryEntry>,
}

fn cmd_classify(args: &ClassifyArgs) -> Result<Report> {
    let (body, passed) = match args.radix {
        2 => classify_binary_report(args.output.format)?,
        _ => classify_ternary_report(args.output.format)?,
    };
    Ok(Report {
        body,
        out: args.output.out.clone(),
        passed,
    })
}

fn classify_ternary_report(format: ReportFormat) -> Result<(String, bool)> {
    let npn = NpnClassification::compute();
    let pcs = pc_classify_with(&npn);
    let fixed = fixed_point_total();
    let burnside = burnside_count();
    let total: usize = npn.classes().iter().map(|c| c.size()).sum();
    let passed = npn.len() == 84 && total == FUNCTION_COUNT as usize && burnside == npn.len() as u64;

    let report = TernaryReport {
        radix: 3,
        functions: FUNCTION_COUNT,
        group_order: GROUP_ORDER,
        classes: npn.len(),
        burnside,
        fixed_points: fixed,
        self_check: passed,
        npn_classes: npn
            .classes()
            .iter()
            .map(|c| {
                let f = c.canonical_function();
                NpnEntry {
                    canonical: c.canonical.get(),
                    size: c.size(),
                    table: table_rows(&f).iter().map(|r| r.to_vec()).collect(),
                    pc_signature: pc_signature(&f),
                }
            })
            .collect(),
        pc_classes: pcs
            .iter()
            .map(|p| PcEntry {
                signature: p.signature.clone(),
                members: p.size(),
                npn_classes: p.npn_classes.clone(),
                single: p.is_single(),
            })
            .collect(),
    };

    let body = match format {
        ReportFormat::Json => json(&report)?,
        ReportFormat::Csv => {
            let mut s = String::from("canonical,size,pc_signature,table\n");
            for e in &report.npn_classes {
                let f = TernaryFunction::decode(FunctionIndex::new(e.canonical)?);
                s += &format!(
                    "{},{},{},{}\n",
                    e.canonical,
                    e.size,
                    e.pc_signature,
                    inline_table(&f)
                );
            }
            s
        }
        ReportFormat::Table => render_ternary_table(&report),
    };
    Ok((body, passed))
}

fn render_ternary_table(r: &TernaryReport) -> String {
    let mut s = String::new();
    s += &format!("radix: {}\n", r.radix);
    s += &format!("functions: {}\n", r.functions);
    s += &format!("group order: {}\n", r.group_order);
    s += &format!("classes: {}\n", r.classes);
    s += &format!("burnside: {} (fixed points {})\n", r.burnside, r.fixed_points);
    s += &format!("self-check: {}\n", if r.self_check { "ok" } else { "FAILED" });

    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &r.npn_classes {
        *histogram.entry(e.size).or_default() += 1;
    }
    let hist: Vec<String> = histogram.iter().map(|(size, n)| format!("{size}x{n}")).collect();
    s += &format!("class sizes: {}\n", hist.join(" "));

    s += "\nNPN classes\n";
    for (k, e) in r.npn_classes.iter().enumerate() {
        s += &format!(
            "\nclass {:>2}  canonical {:>5}  size {:>3}  pc {}\n",
            k + 1,
            e.canonical,
            e.size,
            e.pc_signature
        );
        for row in &e.table {
            s += &format!("  {:>2} {:>2} {:>2}\n", row[0], row[1], row[2]);
        }
    }

    let singles = r.pc_classes.iter().filter(|p| p.single).count();
    s += &format!(
        "\nPC classes: {} ({} single, {} overlapping)\n",
        r.pc_classes.len(),
        singles,
        r.pc_classes.len() - singles
    );
    s += &format!(
        "{:<18} {:>7} {:<9} npn canonicals\n",
        "signature", "members", "kind"
    );
    for p in &r.pc_classes {
        let canon: Vec<String> = p.npn_classes.iter().map(|c| c.to_string()).collect();
        s += &format!(
            "{:<18} {:>7} {:<9} {}\n",
            p.signature.to_string(),
            p.members,
            if p.single { "single" } else { "overlap" },
            canon.join(" ")
        );
    }
    s
}

fn classify_binary_report(format: ReportFormat) -> Result<(String, bool)> {
    let classes = classify_binary();
    let burnside = binary_burnside_count();
    let pc = pc_binary_check();
    let total: usize = classes.iter().map(|c| c.size()).sum();
    let passed = classes.len() == 4
        && total == BinaryFunction::COUNT as usize
        && burnside == classes.len() as u64
        && pc.matches_npn;

    let report = BinaryReport {
        radix: 2,
        functions: BinaryFunction::COUNT,
        group_order: crate::npn::BINARY_GROUP_ORDER,
        classes: classes.len(),
        burnside,
        pc_classes: pc.classes.len(),
        pc_matches_npn: pc.matches_npn,
        self_check: passed,
        npn_classes: classes
            .iter()
            .map(|c| BinaryEntry {
                canonical: c.canonical.bits(),
                size: c.size(),
                members: c.members.iter().map(|m| m.bits()).collect(),
                table: [false, true]
                    .iter()
                    .map(|&a| c.canonical.row(a).iter().map(|&v| v as u8).collect())
                    .collect(),
                pc_signature: binary_pc_signature(c.canonical),
            })
            .collect(),
    };

    let body = match format {
        ReportFormat::Json => json(&report)?,
        ReportFormat::Csv => {
            let mut s = String::from("canonical,size,pc_signature,members\n");
            for e in &report.npn_classes {
                let m: Vec<String> = e.members.iter().map(|b| format!("{b:04b}")).collect();
                s += &format!(
                    "{:04b},{},{},{}\n",
                    e.canonical,
                    e.size,
                    e.pc_signature,
                    m.join(" ")
                );
            }
            s
        }
        ReportFormat::Table => {
            let mut s = String::new();
            s += &format!(
                "radix: 2\nfunctions: {}\ngroup order: {}\n",
                report.functions, report.group_order
            );
            s += &format!("classes: {}\nburnside: {}\n", report.classes, report.burnside);
            s += &format!(
                "pc classes: {} ({} the NPN partition)\n",
                report.pc_classes,
                if report.pc_matches_npn {
                    "equal to"
                } else {
                    "DIFFERENT from"
                }
            );
            s += &format!("self-check: {}\n", if passed { "ok" } else { "FAILED" });
            for (k, e) in report.npn_classes.iter().enumerate() {
                let m: Vec<String> = e.members.iter().map(|b| format!("{b:04b}")).collect();
                s += &format!(
                    "\nclass {}  canonical {:04b}  size {}  pc {}  members {}\n",
                    k + 1,
                    e.canonical,
                    e.size,
                    e.pc_signature,
                    m.join(" ")
                );
                for row in &e.table {
                    s += &format!("  {} {}\n", row[0], row[1]);
                }
            }
            s
        }
    };
    Ok((body, passed))
}

/// Writes a grid as CSV: a header of `$B` values, then one row per `$A` value.
pub fn grid_csv(grid: &Grid) -> String {
    let mut s = String::from("a\\b");
    for b in &grid.col_values {
        s.push(',');
        s += &csv_cell(*b);
    }
    s.push('\n');
    for (a, row) in grid.row_values.iter().zip(&grid.cells) {
        s += &csv_cell(*a);
        for v in row {
            s.push(',');
            s += &csv_cell(*v);
        }
        s.push('\n');
    }
    s
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Report> {
    let template = load_template(&args.grid.sequence)?;
    let grid_a = parse_grid(&args.grid.grid_a)?;
    let grid_b = parse_grid(&args.grid.grid_b)?;
    let grid = scan(&template, &grid_a, &grid_b)?;
    let body = match args.format {
        ReportFormat::Json => json(&grid)?,
        _ => grid_csv(&grid),
    };
    Ok(Report {
        body,
        out: args.out.clone(),
        passed: true,
    })
}

enum Target {
    All,
    Class { name: String, member: FunctionIndex },
}

fn parse_target(text: &str) -> Result<Target> {
    Ok(match text {
        "all" => Target::All,
        "multiplication" => Target::Class {
            name: text.into(),
            member: TernaryFunction::multiplication().encode(),
        },
        "selective-delay" => Target::Class {
            name: text.into(),
            member: selective_delay_table().encode(),
        },
        other => {
            let idx: u32 = other
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("unknown target `{other}`")))?;
            Target::Class {
                name: other.into(),
                member: FunctionIndex::new(idx)?,
            }
        }
    })
}

#[derive(Serialize)]
struct SearchReport<'a> {
    target: String,
    class: FunctionIndex,
    grid_a: &'a [f64],
    grid_b: &'a [f64],
    epsilon: f64,
    hits: &'a [SearchHit],
}

#[derive(Serialize)]
struct Achievability {
    canonical: FunctionIndex,
    size: usize,
    hits: usize,
}

fn cmd_search(args: &SearchArgs) -> Result<Report> {
    let template = load_template(&args.grid.sequence)?;
    let grid_a = parse_grid(&args.grid.grid_a)?;
    let grid_b = parse_grid(&args.grid.grid_b)?;
    let searcher = GateSearch::new(&template, Quantizer::new(args.epsilon)?)?;
    let npn = searcher.classification();

    let body = match parse_target(&args.target)? {
        Target::All => {
            let counts = searcher.achievability(&grid_a, &grid_b)?;
            let rows: Vec<Achievability> = counts
                .iter()
                .map(|(&canonical, &hits)| Achievability {
                    canonical,
                    size: npn.class_of(canonical).size(),
                    hits,
                })
                .collect();
            match args.output.format {
                ReportFormat::Json => json(&rows)?,
                ReportFormat::Csv => {
                    let mut s = String::from("canonical,size,hits,achievable\n");
                    for r in &rows {
                        s += &format!("{},{},{},{}\n", r.canonical, r.size, r.hits, r.hits > 0);
                    }
                    s
                }
                ReportFormat::Table => {
                    let reachable = rows.iter().filter(|r| r.hits > 0).count();
                    let mut s = format!("achievable classes: {} of {}\n", reachable, rows.len());
                    s += &format!("{:>9} {:>5} {:>8}\n", "canonical", "size", "hits");
                    for r in &rows {
                        s += &format!("{:>9} {:>5} {:>8}\n", r.canonical.get(), r.size, r.hits);
                    }
                    s
                }
            }
        }
        Target::Class { name, member } => {
            let class = npn.canonical_of(member);
            let hits = searcher.search(&grid_a, &grid_b, &BTreeSet::from([member]))?;
            match args.output.format {
                ReportFormat::Json => json(&SearchReport {
                    target: name,
                    class,
                    grid_a: &grid_a,
                    grid_b: &grid_b,
                    epsilon: args.epsilon,
                    hits: &hits,
                })?,
                ReportFormat::Csv => {
                    let mut s = String::from("a1,a2,a3,b1,b2,b3,function,class\n");
                    for h in &hits {
                        let vals: Vec<String> = h
                            .triple_a
                            .iter()
                            .chain(&h.triple_b)
                            .map(|v| csv_cell(*v))
                            .collect();
                        s += &format!("{},{},{}\n", vals.join(","), h.logic.encode(), h.class);
                    }
                    s
                }
                ReportFormat::Table => {
                    let mut s = format!("target: {name} (class {class})\n");
                    s += &format!("grid sizes: {} x {}\n", grid_a.len(), grid_b.len());
                    s += &format!("hits: {}\n", hits.len());
                    for h in &hits {
                        let a: Vec<String> = h.triple_a.iter().map(|v| csv_cell(*v)).collect();
                        let b: Vec<String> = h.triple_b.iter().map(|v| csv_cell(*v)).collect();
                        s += &format!(
                            "A=[{}] B=[{}] table {}\n",
                            a.join(", "),
                            b.join(", "),
                            inline_table(&h.logic)
                        );
                    }
                    s
                }
            }
        }
    };
    Ok(Report {
        body,
        out: args.output.out.clone(),
        passed: true,
    })
}

#[derive(Serialize)]
struct Roundtrip {
    label: &'static str,
    r: f64,
    theta: f64,
    tau_dec: f64,
    tau_d: f64,
    recovered_r: f64,
    recovered_theta: f64,
    error_r: f64,
    error_theta: f64,
}

#[derive(Serialize)]
struct MulReport {
    z1: ComplexSample,
    z2: ComplexSample,
    mand_magnitude: f64,
    pxnor_phase: f64,
    product: ComplexSample,
    cartesian: ComplexSample,
    cartesian_error_r: f64,
    cartesian_error_theta: f64,
    roundtrips: Vec<Roundtrip>,
    self_check: bool,
}

fn roundtrip(label: &'static str, z: ComplexSample, p: &EncodingParams) -> Result<Roundtrip> {
    let delays = encode(z, p)?;
    let back = encode_decode_roundtrip(z, p)?;
    let error_theta = if z.r() == 0.0 {
        0.0
    } else {
        phase_distance(back.theta(), z.theta())
    };
    Ok(Roundtrip {
        label,
        r: z.r(),
        theta: z.theta(),
        tau_dec: delays.tau_dec,
        tau_d: delays.tau_d,
        recovered_r: back.r(),
        recovered_theta: back.theta(),
        error_r: (back.r() - z.r()).abs(),
        error_theta,
    })
}

fn phase_text(z: &ComplexSample) -> String {
    if z.r() == 0.0 {
        "-".into()
    } else {
        z.theta().to_string()
    }
}

fn cmd_complex(args: &ComplexArgs) -> Result<Report> {
    let params = EncodingParams::new(args.t1, args.omega_off, args.alpha)?;
    match &args.op {
        ComplexOp::Truth { theta } => {
            let theta = parse_angle(theta)?;
            let t = ptruth(theta);
            let conj = conjugate_truth_check(theta);
            let body = match args.format {
                ReportFormat::Json => json(&serde_json::json!({
                    "theta": theta, "ptruth": t, "conjugate_equal": conj
                }))?,
                ReportFormat::Csv => format!("theta,ptruth\n{},{}\n", csv_cell(theta), csv_cell(t)),
                ReportFormat::Table => {
                    format!("theta: {theta}\npTruth: {t}\nconjugate pTruth equal: {conj}\n")
                }
            };
            Ok(Report {
                body,
                out: args.out.clone(),
                passed: conj,
            })
        }
        ComplexOp::Mul {
            r1,
            theta1,
            r2,
            theta2,
        } => {
            let z1 = ComplexSample::new(parse_angle(r1)?, parse_angle(theta1)?)?;
            let z2 = ComplexSample::new(parse_angle(r2)?, parse_angle(theta2)?)?;
            let product = complex_multiply_via_logic(z1, z2);

            let (ax, ay) = z1.to_cartesian();
            let (bx, by) = z2.to_cartesian();
            let (x, y) = (ax * bx - ay * by, ax * by + ay * bx);
            let cartesian = ComplexSample::new(x.hypot(y).min(1.0), y.atan2(x))?;
            let cartesian_error_r = (cartesian.r() - product.r()).abs();
            let cartesian_error_theta = if product.r() == 0.0 {
                0.0
            } else {
                phase_distance(cartesian.theta(), product.theta())
            };

            let roundtrips = vec![
                roundtrip("z1", z1, &params)?,
                roundtrip("z2", z2, &params)?,
                roundtrip("product", product, &params)?,
            ];
            let self_check = cartesian_error_r <= 1e-12
                && cartesian_error_theta <= 1e-12
                && roundtrips
                    .iter()
                    .all(|r| r.error_r < ROUNDTRIP_TOLERANCE && r.error_theta < ROUNDTRIP_TOLERANCE);

            let report = MulReport {
                z1,
                z2,
                mand_magnitude: mand(z1, z2).r(),
                pxnor_phase: pxnor(z1, z2).theta(),
                product,
                cartesian,
                cartesian_error_r,
                cartesian_error_theta,
                roundtrips,
                self_check,
            };
            let body = match args.format {
                ReportFormat::Json => json(&report)?,
                ReportFormat::Csv => {
                    let mut s = String::from(
                        "label,r,theta,tau_dec,tau_d,recovered_r,recovered_theta,error_r,error_theta\n",
                    );
                    for r in &report.roundtrips {
                        let cells = [
                            r.r,
                            r.theta,
                            r.tau_dec,
                            r.tau_d,
                            r.recovered_r,
                            r.recovered_theta,
                            r.error_r,
                            r.error_theta,
                        ]
                        .map(csv_cell);
                        s += &format!("{},{}\n", r.label, cells.join(","));
                    }
                    s
                }
                ReportFormat::Table => render_mul(&report),
            };
            Ok(Report {
                body,
                out: args.out.clone(),
                passed: self_check,
            })
        }
    }
}

fn render_mul(r: &MulReport) -> String {
    let mut s = String::new();
    s += &format!("z1: r={} theta={}\n", r.z1.r(), r.z1.theta());
    s += &format!("z2: r={} theta={}\n", r.z2.r(), r.z2.theta());
    s += &format!("mAND magnitude: {}\n", r.mand_magnitude);
    s += &format!("pXNOR phase: {}\n", r.pxnor_phase);
    s += &format!("product: r={} theta={}\n", r.product.r(), phase_text(&r.product));
    s += &format!(
        "cartesian: r={} theta={}  error r={:e} theta={:e}\n",
        r.cartesian.r(),
        phase_text(&r.cartesian),
        r.cartesian_error_r,
        r.cartesian_error_theta
    );
    s += "\nencode/simulate/decode\n";
    s += &format!(
        "{:<8} {:>10} {:>10} {:>12} {:>12} {:>12} {:>12} {:>10} {:>10}\n",
        "sample", "r", "theta", "tau_dec", "tau_d", "r_out", "theta_out", "err_r", "err_theta"
    );
    for t in &r.roundtrips {
        s += &format!(
            "{:<8} {:>10.6} {:>10.6} {:>12.6} {:>12.6} {:>12.9} {:>12.9} {:>10.2e} {:>10.2e}\n",
            t.label,
            t.r,
            t.theta,
            t.tau_dec,
            t.tau_d,
            t.recovered_r,
            t.recovered_theta,
            t.error_r,
            t.error_theta
        );
    }
    s += &format!("self-check: {}\n", if r.self_check { "ok" } else { "FAILED" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["nmr-logic"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("3pi/2").unwrap(), 1.5 * PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("x").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("pi/2,pi").unwrap(), vec![PI / 2.0, PI]);
        assert_eq!(parse_grid("lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("lin:0:1").is_err());
        assert!(parse_grid("lin:0:1:0").is_err());
    }

    #[test]
    fn classify_binary_text() {
        let (code, out, _) = run_str(&["classify", "--radix", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("classes: 4\n"));
    }

    #[test]
    fn classify_ternary_text_and_csv() {
        let (code, out, _) = run_str(&["classify", "--radix", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("classes: 84\n"));
        assert!(out.contains("burnside: 84"));
        let (code, csv, _) = run_str(&["classify", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(csv.lines().count(), 85);
    }

    #[test]
    fn bad_radix_is_usage_error() {
        let (code, _, err) = run_str(&["classify", "--radix", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }

    #[test]
    fn simulate_single_pulse_cell() {
        let (code, out, _) = run_str(&[
            "simulate",
            "--sequence",
            "builtin:single-pulse",
            "--grid-a",
            "pi/2,pi",
            "--grid-b",
            "pi/2",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "a\\b,1.57079632679");
        assert_eq!(lines[1], "1.57079632679,1");
    }

    #[test]
    fn simulate_empty_grid() {
        let (code, _, err) = run_str(&[
            "simulate",
            "--sequence",
            "builtin:single-pulse",
            "--grid-a",
            "",
            "--grid-b",
            "1",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("empty grid"));
    }

    #[test]
    fn simulate_missing_file() {
        let (code, _, err) = run_str(&[
            "simulate",
            "--sequence",
            "/nonexistent.json",
            "--grid-a",
            "1",
            "--grid-b",
            "1",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn complex_truth() {
        let (code, out, _) = run_str(&["complex", "truth", "1.5707963"]);
        assert_eq!(code, 0);
        assert!(out.contains("pTruth: 0.5000000"));
    }

    #[test]
    fn complex_bad_magnitude() {
        let (code, _, _) = run_str(&["complex", "mul", "1.5", "0", "1", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_str(&["complex", "--alpha", "0.5", "mul", "1", "0", "1", "0"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn search_unknown_target() {
        let (code, _, err) = run_str(&[
            "search",
            "--sequence",
            "builtin:single-pulse",
            "--grid-a",
            "lin:0:6:4",
            "--grid-b",
            "lin:0:6:4",
            "--target",
            "nonsense",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unknown target"));
    }
}
