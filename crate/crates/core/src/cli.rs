//! The `msdiag` command line.
//!
//! [`execute_command`] does all the work and returns the exit status with
//! the report text, so the binary is a thin wrapper and tests can drive the
//! tool without spawning processes.
//!
//! Exit status: 0 on success, 1 when a diagram fails validation, 2 on bad
//! input or usage.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use crate::compression::{standard_double_diagram, Sign, StandardnessReport};
use crate::format::{parse_diagram_file, serialize_diagram, SIZE_LIMIT};
use crate::handle_complex::{build_xn, ChainComplex};
use crate::linalg::{cokernel, smith_normal_form, IntMatrix};
use crate::multisection::{
    build_standard_multisection, validate_diagram, xn_diagram, MultisectionDiagram,
};
use crate::surface::SurfaceCollection;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "msdiag",
    version,
    about = "Validate and generate multisection diagrams"
)]
struct Cli {
    /// Emit key=value lines instead of the readable report.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every cut system and every consecutive pair of a diagram file.
    Validate { file: String },
    /// Euler characteristic and first homology of the 4-manifold.
    Invariants { file: String },
    /// Print the standard double diagram over a page.
    GenerateStandard {
        /// `empty` or a list `genus:boundary,...`
        #[arg(long)]
        page: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        stab: u32,
    },
    /// Print an n-sector diagram whose sectors all have the same k.
    GenerateMultisection {
        #[arg(long)]
        page: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        sectors: usize,
    },
    /// Homology of the X_n handle complex.
    Xn {
        n: u64,
        /// Print the chain complex in text form instead.
        #[arg(long, conflicts_with = "emit_diagram")]
        emit_complex: bool,
        /// Print the shared (torus; a, a, a) diagram file instead.
        #[arg(long)]
        emit_diagram: bool,
    },
    /// Handleslide curve j over curve l in one system (all indices from 1).
    Slide {
        file: String,
        #[arg(long)]
        system: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
    },
    /// Smith normal form of a matrix file: `rows cols` then the entries.
    Snf { file: String },
    /// Homology of a chain complex file.
    Homology { file: String },
}

/// Ordered report fields; `label = value` for people, `key=value` for
/// scripts.
#[derive(Default)]
struct Report {
    fields: Vec<(String, String, String)>,
}

impl Report {
    fn push(&mut self, key: impl Into<String>, label: impl Into<String>, value: impl ToString) {
        self.fields
            .push((key.into(), label.into(), value.to_string()));
    }

    fn field(&mut self, key: &str, value: impl ToString) {
        self.push(key, key.replace(['.', '_'], " "), value);
    }

    fn render(&self, porcelain: bool) -> String {
        let mut out = String::new();
        for (key, label, value) in &self.fields {
            if porcelain {
                writeln!(out, "{key}={value}").unwrap();
            } else {
                writeln!(out, "{label} = {value}").unwrap();
            }
        }
        out
    }
}

struct Failure(i32, String);

fn input_error(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INPUT, format!("error: {msg}\n"))
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format_args!("cannot read {path}: {e}")))
}

fn read_diagram(path: &str) -> Result<MultisectionDiagram, Failure> {
    parse_diagram_file(&read_file(path)?).map_err(|e| input_error(format_args!("{path}: {e}")))
}

fn parse_page(page_text: &str) -> Result<SurfaceCollection, Failure> {
    let page = page_text
        .parse::<SurfaceCollection>()
        .map_err(|e| input_error(format_args!("bad page {page_text:?}: {e}")))?;
    check_size("page boundary count", page.total_boundary())?;
    check_size("page component count", page.len() as u64)?;
    Ok(page)
}

fn check_size(what: &str, n: u64) -> Result<(), Failure> {
    if n > u64::from(SIZE_LIMIT) {
        return Err(input_error(format_args!(
            "{what} {n} exceeds the limit {SIZE_LIMIT}"
        )));
    }
    Ok(())
}

fn parse_sign(s: &str) -> Result<Sign, Failure> {
    match s {
        "1" | "+1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        _ => Err(input_error(format_args!(
            "sign must be +1 or -1, got {s:?}"
        ))),
    }
}

fn pair_summary(r: &StandardnessReport) -> String {
    let opt = |x: Option<u64>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
    let snf: Vec<String> = r.pairing_snf.iter().map(BigInt::to_string).collect();
    let mut s = format!(
        "{} s={} k={} snf=[{}] h1={}",
        if r.passed { "PASS" } else { "FAIL" },
        opt(r.detected_stabilizations),
        opt(r.derived_k),
        snf.join(" "),
        r.h1
    );
    if !r.passed {
        let tags: Vec<&str> = r.failures.iter().map(|f| f.tag()).collect();
        write!(s, " failures={}", tags.join(",")).unwrap();
    }
    s
}

fn header(rep: &mut Report, d: &MultisectionDiagram) {
    rep.field("surface", d.surface());
    rep.field("page", d.page());
    rep.field("systems", d.sector_count());
}

fn pair_name(d: &MultisectionDiagram, i: usize) -> String {
    let n = d.sector_count();
    format!("({},{})", d.names()[i], d.names()[(i + 1) % n])
}

fn validate(path: &str, porcelain: bool) -> Result<(i32, String), Failure> {
    let d = read_diagram(path)?;
    let r = validate_diagram(&d);
    let mut rep = Report::default();
    rep.field("result", if r.passed { "PASS" } else { "FAIL" });
    header(&mut rep, &d);
    for (i, v) in r.per_system.iter().enumerate() {
        rep.push(
            format!("system.{}", i + 1),
            format!("system {} {}", i + 1, d.names()[i]),
            v,
        );
    }
    let pairs = if d.sector_count() == 2 {
        1
    } else {
        r.per_pair.len()
    };
    for (i, p) in r.per_pair.iter().take(pairs).enumerate() {
        rep.push(
            format!("pair.{}", i + 1),
            format!("pair {} {}", i + 1, pair_name(&d, i)),
            pair_summary(p),
        );
    }
    for f in &r.failures {
        rep.field("failure", f);
    }
    rep.field("note", StandardnessReport::CAVEAT);
    Ok((
        if r.passed { EXIT_OK } else { EXIT_FAIL },
        rep.render(porcelain),
    ))
}

fn invariants(path: &str, porcelain: bool) -> Result<(i32, String), Failure> {
    let d = read_diagram(path)?;
    let r = validate_diagram(&d);
    let mut rep = Report::default();
    rep.field("result", if r.passed { "PASS" } else { "FAIL" });
    header(&mut rep, &d);
    if !r.passed {
        for f in &r.failures {
            rep.field("failure", f);
        }
        return Ok((EXIT_FAIL, rep.render(porcelain)));
    }
    let chi = r.euler_characteristic.expect("passing report carries chi");
    let h1 = r.h1.as_ref().expect("passing report carries H1");
    rep.field("euler_characteristic", chi);
    rep.push("h1", "H1", h1);
    let pairs = if d.sector_count() == 2 {
        1
    } else {
        r.per_pair.len()
    };
    let opt = |x: Option<u64>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
    for i in 0..pairs {
        let label = format!("pair {} {}", i + 1, pair_name(&d, i));
        rep.push(
            format!("pair.{}.s", i + 1),
            format!("{label} s"),
            opt(r.s[i]),
        );
        rep.push(
            format!("pair.{}.k", i + 1),
            format!("{label} k"),
            opt(r.k[i]),
        );
    }
    rep.field("note", StandardnessReport::CAVEAT);
    Ok((EXIT_OK, rep.render(porcelain)))
}

fn generate_standard(page: &str, k: u32, stab: u32) -> Result<(i32, String), Failure> {
    let page = parse_page(page)?;
    check_size(
        "surface genus",
        page.total_genus() + u64::from(k) + u64::from(stab),
    )?;
    let dd = standard_double_diagram(&page, k, stab).map_err(input_error)?;
    let d = MultisectionDiagram::with_identity_suture(dd.surface, vec![dd.alpha, dd.beta], dd.page)
        .map_err(input_error)?;
    Ok((EXIT_OK, serialize_diagram(&d)))
}

fn generate_multisection(page: &str, k: u32, sectors: usize) -> Result<(i32, String), Failure> {
    let page = parse_page(page)?;
    check_size("surface genus", page.total_genus() + u64::from(k))?;
    check_size("sector count", sectors as u64)?;
    let d = build_standard_multisection(&page, &vec![k; sectors], sectors).map_err(input_error)?;
    Ok((EXIT_OK, serialize_diagram(&d)))
}

fn xn(
    n: u64,
    emit_complex: bool,
    emit_diagram: bool,
    porcelain: bool,
) -> Result<(i32, String), Failure> {
    if emit_diagram {
        return Ok((EXIT_OK, serialize_diagram(&xn_diagram().0)));
    }
    let c = build_xn(n);
    if emit_complex {
        return Ok((EXIT_OK, c.to_text()));
    }
    let h = c.homology().map_err(input_error)?;
    let mut rep = Report::default();
    rep.field("n", n);
    let dims: Vec<String> = c.dims().iter().map(ToString::to_string).collect();
    rep.field("cells", dims.join(","));
    for (d, g) in h.iter().enumerate().take(3) {
        rep.push(format!("H{d}"), format!("H{d}"), g);
    }
    Ok((EXIT_OK, rep.render(porcelain)))
}

fn slide(
    path: &str,
    system: usize,
    j: usize,
    l: usize,
    sign: &str,
) -> Result<(i32, String), Failure> {
    let sign = parse_sign(sign)?;
    let d = read_diagram(path)?;
    let zero_based = |what: &str, i: usize| {
        i.checked_sub(1)
            .ok_or_else(|| input_error(format_args!("{what} indices start at 1")))
    };
    let slid = d
        .slide(
            zero_based("system", system)?,
            zero_based("curve", j)?,
            zero_based("curve", l)?,
            sign,
        )
        .map_err(input_error)?;
    Ok((EXIT_OK, serialize_diagram(&slid)))
}

/// `rows cols` followed by `rows * cols` integers in row-major order, in any
/// line layout. `#` starts a comment.
pub fn parse_matrix_text(text: &str) -> Result<IntMatrix, String> {
    let mut tokens = text
        .lines()
        .flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace());
    let mut dim = |what: &str| -> Result<usize, String> {
        let t = tokens.next().ok_or_else(|| format!("missing {what}"))?;
        let n: usize = t.parse().map_err(|_| format!("bad {what} {t:?}"))?;
        if n > SIZE_LIMIT as usize {
            return Err(format!("{what} {n} exceeds the limit {SIZE_LIMIT}"));
        }
        Ok(n)
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let entries = tokens
        .map(|t| t.parse::<BigInt>().map_err(|_| format!("bad entry {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::new(rows, cols, entries).map_err(|e| e.to_string())
}

fn snf(path: &str, porcelain: bool) -> Result<(i32, String), Failure> {
    let m = parse_matrix_text(&read_file(path)?)
        .map_err(|e| input_error(format_args!("{path}: {e}")))?;
    let f = smith_normal_form(&m);
    let factors: Vec<String> = f
        .invariant_factors()
        .iter()
        .map(ToString::to_string)
        .collect();
    let mut rep = Report::default();
    rep.field("shape", format!("{}x{}", m.rows(), m.cols()));
    rep.field("rank", f.rank());
    rep.push("invariant_factors", "invariant factors", factors.join(" "));
    rep.field("cokernel", cokernel(&m));
    rep.field("U", &f.u);
    rep.field("S", &f.s);
    rep.field("V", &f.v);
    Ok((EXIT_OK, rep.render(porcelain)))
}

fn homology(path: &str, porcelain: bool) -> Result<(i32, String), Failure> {
    let c = ChainComplex::parse_text(&read_file(path)?)
        .map_err(|e| input_error(format_args!("{path}: {e}")))?;
    let h = c.homology().map_err(input_error)?;
    let mut rep = Report::default();
    let dims: Vec<String> = c.dims().iter().map(ToString::to_string).collect();
    rep.field("cells", dims.join(","));
    for (d, g) in h.iter().enumerate() {
        rep.push(format!("H{d}"), format!("H{d}"), g);
    }
    rep.field("euler_characteristic", c.euler_characteristic());
    Ok((EXIT_OK, rep.render(porcelain)))
}

/// Runs one command. `argv` excludes the program name.
pub fn execute_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("msdiag")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            return (code, e.render().to_string());
        }
    };
    let p = cli.porcelain;
    let result = match &cli.command {
        Command::Validate { file } => validate(file, p),
        Command::Invariants { file } => invariants(file, p),
        Command::GenerateStandard { page, k, stab } => generate_standard(page, *k, *stab),
        Command::GenerateMultisection { page, k, sectors } => {
            generate_multisection(page, *k, *sectors)
        }
        Command::Xn {
            n,
            emit_complex,
            emit_diagram,
        } => xn(*n, *emit_complex, *emit_diagram, p),
        Command::Slide {
            file,
            system,
            j,
            l,
            sign,
        } => slide(file, *system, *j, *l, sign),
        Command::Snf { file } => snf(file, p),
        Command::Homology { file } => homology(file, p),
    };
    match result {
        Ok(r) => r,
        Err(Failure(code, text)) => (code, text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xn_report() {
        let (code, out) = execute_command(["xn", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("H2 = Z/5"), "{out}");
        assert!(out.contains("H0 = Z\n"));
        assert!(out.contains("H1 = Z\n"));
        let (_, out) = execute_command(["--porcelain", "xn", "0"]);
        assert!(out.contains("H2=Z\n"), "{out}");
    }

    #[test]
    fn usage_errors() {
        let (code, out) = execute_command(["frobnicate"]);
        assert_eq!(code, 2);
        assert!(out.contains("Usage"), "{out}");
        assert_eq!(execute_command(Vec::<String>::new()).0, 2);
        assert_eq!(execute_command(["--help"]).0, 0);
        assert_eq!(execute_command(["validate", "/nonexistent/file"]).0, 2);
        assert_eq!(
            execute_command(["generate-standard", "--page", "0:0", "--k", "1"]).0,
            2
        );
        assert_eq!(
            execute_command(["generate-standard", "--page", "bogus", "--k", "1"]).0,
            2
        );
        assert_eq!(
            execute_command(["generate-standard", "--page", "empty", "--k", "5000"]).0,
            2
        );
    }

    #[test]
    fn generated_files_parse() {
        let (code, text) = execute_command([
            "generate-standard",
            "--page",
            "empty",
            "--k",
            "1",
            "--stab",
            "0",
        ]);
        assert_eq!(code, 0);
        let d = parse_diagram_file(&text).unwrap();
        assert!(validate_diagram(&d).passed);
        let (code, text) = execute_command([
            "generate-multisection",
            "--page",
            "1:1",
            "--k",
            "2",
            "--sectors",
            "3",
        ]);
        assert_eq!(code, 0);
        let d = parse_diagram_file(&text).unwrap();
        assert_eq!(d.sector_count(), 3);
        assert!(validate_diagram(&d).passed);
    }

    #[test]
    fn matrix_text() {
        let m = parse_matrix_text("2 2 # shape\n2 4\n6 8\n").unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[[2, 4], [6, 8]]).unwrap());
        assert!(parse_matrix_text("2 2\n1 2 3\n").is_err());
        assert!(parse_matrix_text("x").is_err());
        assert!(parse_matrix_text("").is_err());
    }
}
