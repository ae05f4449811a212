//! `oddsbox`: differential and boomerang tables over odd-characteristic
//! finite fields, and the verification suite.

mod select;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use oddsbox_core::tables::{
    bct_capped, boomerang_spectrum_power, cddt_capped, cdiff_spectrum_power,
};
use oddsbox_core::theorems::{run_suite, search_du_preserving_switches, SearchRanges, Status};
use oddsbox_core::{
    materialize, CountTable, Error, Field, FnSpec, FnTable, Fx, Spectrum, TheoremId, VerifyOptions,
    DEFAULT_MAX_Q,
};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIZE: u8 = 3;
const EXIT_PARSE: u8 = 4;

const DEFAULT_FIELDS: &str = "5:1,7:1,11:1,13:1,17:1,19:1,29:1,3:2,3:3,3:4,5:2,5:3,7:2,11:2,13:2";

#[derive(Parser)]
#[command(
    name = "oddsbox",
    version,
    about = "Differential and boomerang tables over F_{p^n}, p odd"
)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters and the characters used to select theorem cases.
    FieldInfo {
        p: u64,
        #[arg(default_value_t = 1)]
        n: u32,
        /// Modulus coefficients c0,c1,...,cn (monic, irreducible).
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a function, or print its lookup table.
    FnEval {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        function: FnArgs,
        /// Points to evaluate (default: print the whole LUT).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Full DDT, c-DDT or BCT with its uniformity.
    Table {
        #[arg(value_enum)]
        kind: TableArg,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        function: FnArgs,
        /// Multiplier for the c-DDT; negative values are reduced mod p.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        max_q: Option<u64>,
    },
    /// Differential or boomerang spectrum of a power map (the a = 1 row).
    Spectrum {
        #[arg(value_enum)]
        kind: SpectrumArg,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        function: FnArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "-1")]
        c: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check theorem predictions against enumeration; exits 1 on any FAIL.
    Verify {
        /// A theorem id such as INV_CDU, or "all".
        theorem: String,
        /// Fields as p:n[,p:n...].
        #[arg(long, default_value = DEFAULT_FIELDS)]
        fields: String,
        /// Function for BRIDGE, IDENT_* and SWITCH_BOUND (a name, e.g. x^3).
        #[arg(long = "fn")]
        function: Option<String>,
        /// Maximum counterexamples kept per report.
        #[arg(long, default_value_t = 32)]
        cap: usize,
        /// Random (alpha, h) draws for SWITCH_BOUND.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        max_q: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permutations X^(q-2) + Tr(g^s X^d) keeping the inverse's differential
    /// uniformity.
    SearchSwitches {
        p: u64,
        n: u32,
        /// Exponent range, e.g. 0..123 (default 0..q-2).
        #[arg(long)]
        d: Option<String>,
        /// Scalar exponent range for g^s (default 0..p-1).
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        max_q: Option<u64>,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic (may be omitted with --lut).
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Modulus coefficients c0,c1,...,cn.
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("selector").required(true).args(["name", "poly", "lut"])))]
struct FnArgs {
    /// inverse, identity, modified_inverse, f1..f6, f5:k, binomial:u,
    /// switch:d:s, x^d
    #[arg(long = "fn")]
    name: Option<String>,
    /// Polynomial terms coeff:exp[,coeff:exp...].
    #[arg(long)]
    poly: Option<String>,
    /// Lookup-table file.
    #[arg(long)]
    lut: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Ddt,
    Cddt,
    Bct,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumArg {
    Cdiff,
    Boomerang,
}

/// A failed run: exit code and message.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeCapExceeded { .. } => EXIT_SIZE,
            Error::Parse(_) | Error::BadLutLength { .. } => EXIT_PARSE,
            _ => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(EXIT_USAGE, format!("io: {e}"))
    }
}

type Run = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global()
        {
            eprintln!("cannot start {w} workers: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Cmd) -> Run {
    match cmd {
        Cmd::FieldInfo {
            p,
            n,
            modulus,
            format,
        } => field_info(&select::build_field(p, n, modulus.as_deref())?, format),
        Cmd::FnEval {
            field,
            function,
            x,
            format,
        } => fn_eval(&field, &function, &x, format),
        Cmd::Table {
            kind,
            field,
            function,
            c,
            out,
            max_q,
        } => table(kind, &field, &function, c.as_deref(), &out, max_q),
        Cmd::Spectrum {
            kind,
            field,
            function,
            c,
            format,
        } => spectrum(kind, &field, &function, &c, format),
        Cmd::Verify {
            theorem,
            fields,
            function,
            cap,
            samples,
            seed,
            max_q,
            format,
            out,
        } => {
            let opts = VerifyOptions {
                counterexample_cap: cap,
                max_q: size_cap(max_q)?,
                switch_samples: samples,
                seed,
                function: None,
            };
            verify(&theorem, &fields, function.as_deref(), opts, format, out)
        }
        Cmd::SearchSwitches {
            p,
            n,
            d,
            s,
            modulus,
            out,
            max_q,
        } => {
            let field = select::build_field(p, n, modulus.as_deref())?;
            search_switches(&field, d.as_deref(), s.as_deref(), &out, max_q)
        }
    }
}

/// `--max-q`, else `UNIFORMITY_MAX_Q`, else the library default.
fn size_cap(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var("UNIFORMITY_MAX_Q") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure(
                EXIT_USAGE,
                format!("UNIFORMITY_MAX_Q is not a number: {v:?}"),
            )
        }),
        Err(_) => Ok(DEFAULT_MAX_Q),
    }
}

fn check_cap(field: &Field, cap: u64) -> Result<(), Failure> {
    if field.q() as u64 > cap {
        return Err(Error::SizeCapExceeded { q: field.q(), cap }.into());
    }
    Ok(())
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(field: &FieldArgs, function: &FnArgs) -> Result<FnTable, Failure> {
    if let Some(path) = &function.lut {
        let t = select::lut_file(path)?;
        if let Some(p) = field.p {
            let f = t.field();
            if f.p() as u64 != p || f.n() != field.n {
                return Err(Error::Parse(format!(
                    "LUT is over {f}, but --p {p} --n {} was given",
                    field.n
                ))
                .into());
            }
        }
        return Ok(t);
    }
    let p = field
        .p
        .ok_or_else(|| Failure(EXIT_USAGE, "--p is required unless --lut is given".into()))?;
    let f = select::build_field(p, field.n, field.modulus.as_deref())?;
    let spec: FnSpec = match (&function.name, &function.poly) {
        (Some(name), _) => select::named(&f, name)?,
        (_, Some(poly)) => select::poly(&f, poly)?,
        _ => unreachable!("clap enforces one selector"),
    };
    Ok(materialize(&f, &spec)?)
}

fn field_info(f: &Field, format: Format) -> Run {
    let q = f.q();
    let g = f.primitive_element();
    let chi_m3 = f.chi(f.from_int(-3));
    let chi_5 = f.chi(f.from_int(5));
    let mut out = io::stdout().lock();
    if format == Format::Json {
        let v = json!({
            "p": f.p(),
            "n": f.n(),
            "q": q,
            "modulus": f.modulus(),
            "primitive_element": g,
            "chi_minus3": chi_m3,
            "chi_5": chi_5,
            "q_mod_3": q % 3,
            "q_mod_4": q % 4,
        });
        writeln!(out, "{v}")?;
    } else {
        writeln!(out, "field {f}: q = {q}")?;
        writeln!(out, "modulus (c0..cn) = {:?}", f.modulus())?;
        writeln!(out, "primitive element g = {g}")?;
        writeln!(out, "chi(-3) = {chi_m3}")?;
        writeln!(out, "chi(5) = {chi_5}")?;
        writeln!(out, "q mod 3 = {}", q % 3)?;
        writeln!(out, "q mod 4 = {}", q % 4)?;
    }
    Ok(0)
}

fn fn_eval(field: &FieldArgs, function: &FnArgs, xs: &[String], format: Format) -> Run {
    let t = load(field, function)?;
    let f = t.field().clone();
    let mut out = io::stdout().lock();
    if xs.is_empty() {
        if format == Format::Json {
            let v = json!({
                "field": f.describe(),
                "lut": t.lut(),
                "permutation": t.is_permutation(),
                "odd": t.is_odd(),
                "fixed_points": t.fixed_points(),
            });
            writeln!(out, "{v}")?;
        } else {
            t.write_lut(&mut out)?;
        }
        return Ok(0);
    }
    let points: Vec<Fx> = xs
        .iter()
        .map(|x| select::parse_elem(&f, x))
        .collect::<Result<_, _>>()?;
    for x in points {
        let y = t.eval(x);
        match format {
            Format::Json => writeln!(out, "{}", json!({ "x": x, "y": y }))?,
            Format::Csv => writeln!(out, "{x},{y}")?,
            Format::Text => writeln!(out, "f({x}) = {y}")?,
        }
    }
    Ok(0)
}

fn summary(t: &CountTable, spectrum: Option<&Spectrum>) -> String {
    let u = t.uniformity();
    let mut s = format!("kind={} ", t.kind().name());
    if let Some(c) = t.kind().c() {
        s += &format!("c={c} ");
    }
    s += &format!(
        "q={} max={} class={} witnesses={}",
        t.q(),
        u.value,
        u.classification,
        u.witnesses.len()
    );
    if let Some(sp) = spectrum {
        s += &format!(" a=1 spectrum {sp}");
    }
    s
}

fn table(
    kind: TableArg,
    field: &FieldArgs,
    function: &FnArgs,
    c: Option<&str>,
    out: &OutArgs,
    max_q: Option<u64>,
) -> Run {
    let t = load(field, function)?;
    let f = t.field().clone();
    let cap = size_cap(max_q)?;
    let power = t.power_exponent().is_some();
    let (table, spectrum) = match kind {
        TableArg::Ddt | TableArg::Cddt => {
            let c = match (kind, c) {
                (TableArg::Ddt, _) => Fx::ONE,
                (_, Some(c)) => select::parse_elem(&f, c)?,
                (_, None) => return Err(Failure(EXIT_USAGE, "cddt needs --c".into())),
            };
            let table = cddt_capped(&t, c, cap)?;
            let spectrum = if power {
                cdiff_spectrum_power(&t, c).ok()
            } else {
                None
            };
            (table, spectrum)
        }
        TableArg::Bct => {
            let table = bct_capped(&t, cap)?;
            let spectrum = if power {
                boomerang_spectrum_power(&t).ok()
            } else {
                None
            };
            (table, spectrum)
        }
    };
    let line = summary(&table, spectrum.as_ref());
    let mut w = output(&out.out)?;
    match out.format {
        Format::Csv => {
            table.write_csv(&mut w)?;
            eprintln!("{line}");
        }
        Format::Json => {
            writeln!(w, "{}", table.to_json(spectrum.as_ref()))?;
            eprintln!("{line}");
        }
        Format::Text => {
            writeln!(w, "{line}")?;
            for (a, row) in table.rows().enumerate() {
                let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                writeln!(w, "{a}: {}", cells.join(" "))?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}

fn spectrum(
    kind: SpectrumArg,
    field: &FieldArgs,
    function: &FnArgs,
    c: &str,
    format: Format,
) -> Run {
    let t = load(field, function)?;
    let f = t.field().clone();
    let s = match kind {
        SpectrumArg::Cdiff => cdiff_spectrum_power(&t, select::parse_elem(&f, c)?)?,
        SpectrumArg::Boomerang => boomerang_spectrum_power(&t)?,
    };
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_value(&s).expect("spectra serialize")
        )?,
        Format::Csv => {
            writeln!(out, "i,count")?;
            for (i, m) in &s.multiplicities {
                writeln!(out, "{i},{m}")?;
            }
        }
        Format::Text => writeln!(out, "{s}")?,
    }
    Ok(0)
}

fn verify(
    theorem: &str,
    fields: &str,
    function: Option<&str>,
    mut opts: VerifyOptions,
    format: Format,
    out: Option<PathBuf>,
) -> Run {
    let ids: Vec<TheoremId> = if theorem.eq_ignore_ascii_case("all") {
        TheoremId::ALL.to_vec()
    } else {
        vec![theorem
            .parse()
            .map_err(|e: Error| Failure(EXIT_USAGE, e.to_string()))?]
    };
    let fields = select::parse_fields(fields)?;
    for f in &fields {
        check_cap(f, opts.max_q)?;
    }
    let mut reports = Vec::new();
    match function {
        // the named function is resolved per field
        Some(name) => {
            for f in &fields {
                opts.function = Some(select::named(f, name)?);
                reports.extend(run_suite(&ids, std::slice::from_ref(f), &opts)?);
            }
            reports.sort_by_key(|r| (r.theorem(), r.prediction.field.p, r.prediction.field.n));
        }
        None => reports = run_suite(&ids, &fields, &opts)?,
    }

    let mut w = output(&out)?;
    let (mut pass, mut fail, mut na) = (0, 0, 0);
    for r in &reports {
        match r.status {
            Status::Pass => pass += 1,
            Status::Fail => fail += 1,
            Status::NotApplicable => na += 1,
        }
        match format {
            Format::Text => {
                let fd = &r.prediction.field;
                let label = if fd.n == 1 {
                    format!("F_{}", fd.p)
                } else {
                    format!("F_{}^{}", fd.p, fd.n)
                };
                let family = match r.prediction.params.get("family") {
                    Some(v) => format!(" {}", v.as_str().unwrap_or_default()),
                    None => String::new(),
                };
                let status = serde_json::to_value(r.status).expect("status serializes");
                writeln!(
                    w,
                    "{} {label}{family} {} [{}] predicted {} observed {}",
                    r.theorem(),
                    status.as_str().unwrap_or("?"),
                    r.prediction.case,
                    compact(&r.prediction.predicted),
                    compact(&r.observed),
                )?;
            }
            _ => writeln!(w, "{}", r.to_json())?,
        }
    }
    w.flush()?;
    eprintln!("{pass} PASS, {fail} FAIL, {na} NOT_APPLICABLE");
    Ok(if fail > 0 { EXIT_FAIL } else { 0 })
}

/// A claim as JSON, cut short for one-line text output.
fn compact(claim: &oddsbox_core::Claim) -> String {
    let s = serde_json::to_value(claim)
        .expect("claims serialize")
        .to_string();
    if s.chars().count() <= 120 {
        s
    } else {
        format!("{}...", s.chars().take(117).collect::<String>())
    }
}

fn search_switches(
    field: &Field,
    d: Option<&str>,
    s: Option<&str>,
    out: &OutArgs,
    max_q: Option<u64>,
) -> Run {
    check_cap(field, size_cap(max_q)?)?;
    let mut ranges = SearchRanges::full(field);
    if let Some(d) = d {
        ranges.d = select::parse_range(d)?;
    }
    if let Some(s) = s {
        ranges.s = select::parse_range(s)?;
    }
    if *ranges.d.end() >= field.q() as u64 || *ranges.s.end() >= field.p() as u64 {
        return Err(Failure(
            EXIT_USAGE,
            format!(
                "ranges must lie in d <= {}, s <= {}",
                field.q() - 1,
                field.p() - 1
            ),
        ));
    }
    let rows = search_du_preserving_switches(field, &ranges);
    let g = field.primitive_element();
    let mut w = output(&out.out)?;
    match out.format {
        Format::Json => {
            let v = json!({
                "field": field.describe(),
                "g": g,
                "rows": rows.iter().map(|r| json!({
                    "d": r.d,
                    "s": r.s,
                    "du": r.du,
                    "is_perm": r.is_perm,
                    "convention_independent": r.s == 0,
                })).collect::<Vec<_>>(),
            });
            writeln!(w, "{v}")?;
        }
        Format::Csv => {
            writeln!(w, "d,s,du,is_perm")?;
            for r in &rows {
                writeln!(w, "{},{},{},{}", r.d, r.s, r.du, r.is_perm)?;
            }
        }
        Format::Text => {
            writeln!(w, "{field}, g = {g}: {} rows", rows.len())?;
            for r in &rows {
                let mark = if r.s == 0 {
                    "  (convention-independent)"
                } else {
                    ""
                };
                writeln!(w, "(d, s) = ({}, {})  DU {}{mark}", r.d, r.s, r.du)?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}
