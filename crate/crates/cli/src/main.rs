use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use khsing::diagram::{Braid, Diagram};
use khsing::frobenius::FrobeniusAlgebra;
use khsing::genusone::skein_triangle_report;
use khsing::invariants::{homology_signature, singular_jones};
use khsing::{Error, HomologySummary, Ring};

#[derive(Parser)]
#[command(
    name = "khsing",
    version,
    about = "Khovanov homology over C_{h,t} for links with double points"
)]
struct Cli {
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(clap::Args)]
struct Params {
    /// Coefficient ring: z, q or f<p> for a prime p.
    #[arg(long, default_value = "z", value_parser = parse_ring)]
    ring: Ring,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    h: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    t: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a diagram file.
    Homology {
        file: PathBuf,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Unnormalized Jones polynomial; double points are resolved by the skein relation.
    Jones { file: PathBuf },
    /// Long exact sequence and Euler characteristic check for a negative,
    /// positive and singular diagram.
    SkeinCheck {
        minus: PathBuf,
        plus: PathBuf,
        sing: PathBuf,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compares homology within each subdirectory of a corpus; each
    /// subdirectory holds diagrams of one isotopy class.
    Invariance {
        corpus: PathBuf,
        /// Restrict to one ring (default: z, q and f2).
        #[arg(long, value_parser = parse_ring)]
        ring: Option<Ring>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Prints the closure of a braid word such as "3: s1 S2 t1" as diagram JSON.
    Braid {
        word: String,
        #[arg(long)]
        name: Option<String>,
    },
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    s.parse::<Ring>().map_err(|e| e.to_string())
}

enum Failure {
    Input(String),
    Contract(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Contract(_) => 2,
            Failure::Check(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Contract(m) | Failure::Check(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::SiteMismatch(_) => Failure::Input(e.to_string()),
            Error::Contract(_) => Failure::Contract(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Diagram, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Diagram::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn render(h: &HomologySummary, format: Format) -> String {
    match format {
        Format::Json => h.to_json(),
        Format::Table => h.to_table(),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Homology {
            file,
            params,
            format,
        } => {
            let d = load(&file)?;
            let h = homology_signature(&d, params.ring, params.h, params.t)?;
            println!("{}", render(&h, format));
        }
        Command::Jones { file } => {
            let d = load(&file)?;
            println!("{}", singular_jones(&d)?.to_json());
        }
        Command::SkeinCheck {
            minus,
            plus,
            sing,
            params,
            format,
        } => {
            let (m, p, s) = (load(&minus)?, load(&plus)?, load(&sing)?);
            let f = FrobeniusAlgebra::new(params.ring, params.h, params.t);
            let r = skein_triangle_report(&m, &p, &s, &f)?;
            match format {
                Format::Json => println!("{}", r.to_json()),
                Format::Table => {
                    println!("site {} over {}", r.site, r.ring);
                    println!(
                        "{:>4} {:>6} {:>6} {:>6} {:>6} {:>9}",
                        "i", "minus", "plus", "sing", "rank", "predicted"
                    );
                    for row in &r.rows {
                        println!(
                            "{:>4} {:>6} {:>6} {:>6} {:>6} {:>9}",
                            row.i, row.minus, row.plus, row.sing, row.rank, row.predicted
                        );
                    }
                    println!("exact sequence: {}", if r.exact { "ok" } else { "FAILED" });
                    println!(
                        "euler: sing {} | plus {} | minus {}: {}",
                        r.euler.sing,
                        r.euler.plus,
                        r.euler.minus,
                        if r.euler.holds { "ok" } else { "FAILED" }
                    );
                }
            }
            if !r.passed {
                return Err(Failure::Check("skein check failed".into()));
            }
        }
        Command::Invariance {
            corpus,
            ring,
            format,
        } => invariance(&corpus, ring, format)?,
        Command::Braid { word, name } => {
            let b = Braid::parse(&word).map_err(|e| Failure::Input(e.to_string()))?;
            let mut d = b.closure();
            if let Some(n) = name {
                d = d.with_name(n);
            }
            println!("{}", d.to_json());
        }
    }
    Ok(())
}

const POINTS: [(i64, i64); 3] = [(0, 0), (0, 1), (1, 0)];

fn invariance(corpus: &Path, ring: Option<Ring>, format: Format) -> Result<(), Failure> {
    let rings = match ring {
        Some(r) => vec![r],
        None => vec![Ring::Integers, Ring::Rationals, Ring::PrimeField(2)],
    };
    let mut groups: BTreeMap<String, Vec<(String, Diagram)>> = BTreeMap::new();
    let entries =
        fs::read_dir(corpus).map_err(|e| Failure::Input(format!("{}: {e}", corpus.display())))?;
    for entry in entries {
        let dir = entry.map_err(|e| Failure::Input(e.to_string()))?.path();
        if !dir.is_dir() {
            continue;
        }
        let name = dir
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut ds = Vec::new();
        for f in files {
            let stem = f
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            ds.push((stem, load(&f)?));
        }
        groups.insert(name, ds);
    }

    // signature of a diagram: its homology at every setting
    let signature = |d: &Diagram| -> Result<Vec<HomologySummary>, Failure> {
        let mut v = Vec::new();
        for r in &rings {
            for (h, t) in POINTS {
                v.push(homology_signature(d, *r, h, t)?);
            }
        }
        Ok(v)
    };
    let mut mismatches = Vec::new();
    let mut group_sig: BTreeMap<String, Vec<HomologySummary>> = BTreeMap::new();
    let mut report = Vec::new();
    for (g, ds) in &groups {
        let sigs: Vec<Vec<HomologySummary>> = ds
            .iter()
            .map(|(_, d)| signature(d))
            .collect::<Result<_, _>>()?;
        let mut equal = true;
        for a in 0..ds.len() {
            for b in a + 1..ds.len() {
                if sigs[a] != sigs[b] {
                    equal = false;
                    mismatches.push(format!("{g}: {} differs from {}", ds[a].0, ds[b].0));
                }
            }
        }
        if let Some(s) = sigs.first() {
            group_sig.insert(g.clone(), s.clone());
        }
        report.push(json!({
            "group": g,
            "diagrams": ds.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "equal": equal,
        }));
    }
    let names: Vec<&String> = group_sig.keys().collect();
    let mut coincide = Vec::new();
    for a in 0..names.len() {
        for b in a + 1..names.len() {
            if group_sig[names[a]] == group_sig[names[b]] {
                coincide.push(format!("{} and {}", names[a], names[b]));
            }
        }
    }
    match format {
        Format::Json => {
            let out = json!({ "groups": report, "mismatches": mismatches, "indistinguished_groups": coincide });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Format::Table => {
            for r in &report {
                println!(
                    "{}: {} diagram(s), {}",
                    r["group"].as_str().unwrap_or_default(),
                    r["diagrams"].as_array().map_or(0, |a| a.len()),
                    if r["equal"].as_bool() == Some(true) {
                        "equal"
                    } else {
                        "MISMATCH"
                    }
                );
            }
            for m in &mismatches {
                println!("mismatch: {m}");
            }
            for c in &coincide {
                println!("same signature across groups: {c}");
            }
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} mismatch(es)", mismatches.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
