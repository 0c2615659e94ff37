//! Command-line front end.
//!
//! Exit codes: 0 success (including honest "none" answers), 1 verification
//! failure, 2 usage or input error. All mathematical output goes to stdout;
//! progress and diagnostics go to stderr.

use crate::cert_io::{self, CertFileHeader};
use crate::lattice::DiscClass;
use crate::search::{
    construct_certificate, exhaustive_scan, theoretical_bound, verify_certificate, SearchBounds,
};
use crate::three_squares::{find_constrained_triple, ConstraintProfile};
use crate::verdict::{build_table, classify_with_certificates, DiscriminantRecord, Provenance};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "kperp",
    version,
    about = "Embedding certificates and Kodaira verdicts for degree-2 special-fourfold lattices"
)]
struct Cli {
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true, env = "KPERP_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct one certificate for a discriminant; prints JSON or "none".
    Search {
        d: i64,
        /// Acceptable root-pair counts N, comma separated.
        #[arg(long = "target-n", value_delimiter = ',', default_values_t = [1usize, 3, 5, 7])]
        target_n: Vec<usize>,
    },
    /// Exhaustively enumerate certificates for a discriminant range.
    Scan {
        #[arg(long)]
        min: i64,
        #[arg(long)]
        max: i64,
        #[arg(long = "target-n", value_delimiter = ',', default_values_t = [1usize, 3, 5, 7])]
        target_n: Vec<usize>,
        /// Lower offset: alpha beta >= m + this.
        #[arg(long, default_value_t = 1)]
        ab_min_offset: i64,
        /// Upper offset: alpha beta <= 2m + this.
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        ab_max_offset: i64,
        /// Keep at most this many certificates per (alpha, beta) cell.
        #[arg(long)]
        max_per_cell: Option<usize>,
        /// Output file; "-" for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Re-verify every certificate in a file; exit 1 on any failure.
    Verify { file: PathBuf },
    /// Print the classification table for all admissible d up to a bound.
    Table {
        #[arg(long)]
        max: i64,
        /// Classify from this certificate file instead of scanning.
        #[arg(long)]
        certs: Option<PathBuf>,
        /// Emit JSON instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Print the theoretical general-type bounds for the three classes.
    Bounds,
    /// Find a three-squares witness T = x1^2 + x2^2 + x3^2, or "none".
    Triples {
        t: i64,
        /// Require all parts odd.
        #[arg(long)]
        odd: bool,
        /// Require pairwise distinct parts.
        #[arg(long)]
        distinct: bool,
        /// Require gcd(x1, x2, x3) = 1.
        #[arg(long)]
        coprime: bool,
        /// Require all parts nonzero.
        #[arg(long)]
        nonzero: bool,
        /// Forbid the value 3 among the parts.
        #[arg(long = "no-three")]
        no_three: bool,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let jobs = cli.jobs;
    let command = cli.command;
    match jobs {
        None | Some(0) => dispatch(command),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(command)),
            Err(e) => {
                eprintln!("kperp: thread pool: {}", e);
                2
            }
        },
    }
}

fn dispatch(command: Command) -> i32 {
    match command {
        Command::Search { d, target_n } => cmd_search(d, &target_n),
        Command::Scan {
            min,
            max,
            target_n,
            ab_min_offset,
            ab_max_offset,
            max_per_cell,
            out,
        } => cmd_scan(min, max, &target_n, ab_min_offset, ab_max_offset, max_per_cell, &out),
        Command::Verify { file } => cmd_verify(&file),
        Command::Table { max, certs, json } => cmd_table(max, certs.as_deref(), json),
        Command::Bounds => cmd_bounds(),
        Command::Triples {
            t,
            odd,
            distinct,
            coprime,
            nonzero,
            no_three,
        } => cmd_triples(
            t,
            ConstraintProfile {
                distinct,
                nonzero,
                coprime,
                all_odd: odd,
                forbid_three: no_three,
            },
        ),
    }
}

fn cmd_search(d: i64, target: &[usize]) -> i32 {
    match construct_certificate(d, target) {
        Ok(Some(cert)) => {
            let line = serde_json::to_string(&cert_io::to_record(&cert)).expect("serializes");
            println!("{}", line);
            0
        }
        Ok(None) => {
            println!("none");
            0
        }
        Err(e) => {
            eprintln!("kperp: {}", e);
            2
        }
    }
}

fn cmd_scan(
    min: i64,
    max: i64,
    target: &[usize],
    ab_min_offset: i64,
    ab_max_offset: i64,
    max_per_cell: Option<usize>,
    out: &str,
) -> i32 {
    if min > max || min < 1 {
        eprintln!("kperp: need 1 <= --min <= --max");
        return 2;
    }
    let bounds = SearchBounds {
        ab_min_offset,
        ab_max_offset,
        coprimality: None,
        max_per_cell,
    };
    let mut certs = Vec::new();
    let mut scanned = 0usize;
    for d in min..=max {
        if DiscClass::from_d(d).is_none() {
            continue;
        }
        match exhaustive_scan(d, &bounds, target) {
            Ok(mut found) => {
                scanned += 1;
                certs.append(&mut found);
            }
            Err(e) => {
                eprintln!("kperp: d = {}: {}", d, e);
                return 2;
            }
        }
    }
    let header = CertFileHeader::new(bounds, min, max);
    let written = if out == "-" {
        let stdout = std::io::stdout();
        cert_io::write_certificate_file(stdout.lock(), &header, &certs)
    } else {
        match File::create(out) {
            Ok(f) => cert_io::write_certificate_file(BufWriter::new(f), &header, &certs),
            Err(e) => {
                eprintln!("kperp: {}: {}", out, e);
                return 2;
            }
        }
    };
    if let Err(e) = written {
        eprintln!("kperp: write: {}", e);
        return 2;
    }
    eprintln!(
        "kperp: {} certificates across {} discriminants",
        certs.len(),
        scanned
    );
    0
}

fn cmd_verify(path: &std::path::Path) -> i32 {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("kperp: {}: {}", path.display(), e);
            return 2;
        }
    };
    let (_header, certs) = match cert_io::read_certificate_file(BufReader::new(file)) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("kperp: {}: {}", path.display(), e);
            return 2;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    // keep verifying everything even if the reader hangs up; the exit code
    // must reflect the whole file
    let mut pipe_open = true;
    let mut emit = |line: String| {
        use std::io::Write;
        if pipe_open && writeln!(out, "{}", line).is_err() {
            pipe_open = false;
        }
    };
    let mut failures = 0usize;
    for (i, cert) in certs.iter().enumerate() {
        let report = verify_certificate(cert);
        let head = format!(
            "{:>4} d={} alpha={} beta={} N={}",
            i, cert.d, cert.alpha, cert.beta, cert.n
        );
        if report.all_passed() {
            emit(format!("{}: PASS", head));
        } else {
            failures += 1;
            let letters: Vec<String> = report
                .failed()
                .iter()
                .map(|c| c.letter().to_string())
                .collect();
            emit(format!("{}: FAIL [{}]", head, letters.join(",")));
            for r in report.results.iter().filter(|r| !r.passed) {
                emit(format!("      ({}) {}", r.code.letter(), r.detail));
            }
        }
    }
    emit(format!("{} certificates, {} failures", certs.len(), failures));
    if failures > 0 {
        1
    } else {
        0
    }
}

fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::Search => "search",
        Provenance::ExternalK3 => "external-k3",
        Provenance::ExternalCubic => "external-cubic",
        Provenance::NonemptinessRule => "congruence",
    }
}

#[derive(Serialize)]
struct TableRow {
    d: i64,
    class: Option<&'static str>,
    nonempty: bool,
    components: u8,
    verdict: &'static str,
    n: Option<usize>,
    witness: Option<cert_io::CertRecord>,
    provenance: &'static str,
    annotation: Option<String>,
}

fn table_row(r: &DiscriminantRecord) -> TableRow {
    TableRow {
        d: r.d,
        class: r.class.map(|c| c.label()),
        nonempty: r.nonempty,
        components: r.components,
        verdict: r.verdict.label(),
        n: r.witness.as_ref().map(|w| w.n),
        witness: r.witness.as_ref().map(cert_io::to_record),
        provenance: provenance_label(r.provenance),
        annotation: r.annotation.clone(),
    }
}

fn cmd_table(max: i64, certs: Option<&std::path::Path>, json: bool) -> i32 {
    let bounds = SearchBounds::default();
    let rows = match certs {
        Some(path) => {
            let file = match File::open(path) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("kperp: {}: {}", path.display(), e);
                    return 2;
                }
            };
            match cert_io::read_certificate_file(BufReader::new(file)) {
                Ok((header, list)) => {
                    classify_with_certificates(max, &list, &header.bounds)
                }
                Err(e) => {
                    eprintln!("kperp: {}: {}", path.display(), e);
                    return 2;
                }
            }
        }
        None => build_table(max, &bounds),
    };
    let rows = match rows {
        Ok(r) => r,
        Err(e) => {
            eprintln!("kperp: {}", e);
            return 2;
        }
    };
    if json {
        let out: Vec<TableRow> = rows.iter().map(table_row).collect();
        println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
        return 0;
    }
    println!(
        "{:>5}  {:<5}  {:<8}  {:>4}  {:<12}  {:>3}  {:<14}  note",
        "d", "class", "nonempty", "comp", "verdict", "N", "provenance"
    );
    for r in &rows {
        let n = r
            .witness
            .as_ref()
            .map(|w| w.n.to_string())
            .unwrap_or_else(|| "-".into());
        println!(
            "{:>5}  {:<5}  {:<8}  {:>4}  {:<12}  {:>3}  {:<14}  {}",
            r.d,
            r.class.map(|c| c.label()).unwrap_or("-"),
            if r.nonempty { "yes" } else { "no" },
            r.components,
            r.verdict.label(),
            n,
            provenance_label(r.provenance),
            r.annotation.as_deref().unwrap_or("")
        );
    }
    0
}

fn cmd_bounds() -> i32 {
    for class in [DiscClass::M8, DiscClass::M8Plus2, DiscClass::M8Plus4] {
        let b = theoretical_bound(class);
        println!(
            "{:<5}  m0 = {:>6}  epsilon = {}/{}  window ( sqrt((1+eps) m), sqrt(5m/4) ) must hold {} consecutive integers",
            class.label(),
            b.m0,
            b.eps_num,
            b.eps_den,
            b.required_run
        );
    }
    0
}

fn cmd_triples(t: i64, profile: ConstraintProfile) -> i32 {
    if t < 0 {
        eprintln!("kperp: target must be nonnegative");
        return 2;
    }
    match find_constrained_triple(t, profile) {
        Some(tr) => println!("{} {} {}", tr.x1, tr.x2, tr.x3),
        None => println!("none"),
    }
    0
}

/// Convenience used by integration tests; identical to the binary entry.
pub fn run_for_test(args: &[&str]) -> i32 {
    run(args.iter().map(|s| s.to_string()))
}
