use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use conecalc::cfk::{builtin, validation_report, KnotComplex};
use conecalc::cobordism::{handle_map_class, obstruct_filling, report_range, vanishing_report, HandleMapClass, VanishingReport};
use conecalc::lattice::{handle_split_report, scrambled_block_form, SymIntMatrix};
use conecalc::surgery::{cone_homology_with, truncation_stability, vh_table, Provenance, SurgeryError};

/// Mapping-cone calculator for knot Floer complexes and handle lattices.
#[derive(Parser, Debug)]
#[command(name = "conecalc", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Name of a built-in complex.
    #[arg(long)]
    builtin: Option<String>,
    /// Path to a complex in JSON.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a complex against every structural invariant.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Table of V_s and H_s with d(S3_1(K)).
    Invariants {
        #[command(flatten)]
        input: Input,
        /// Window `lo..hi` (inclusive).
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        s_range: Option<(i64, i64)>,
        /// Fail unless H_s can be computed from the flip map.
        #[arg(long)]
        direct: bool,
    },
    /// Floer homology of n-surgery, one module per Spin^c label.
    Surgery {
        #[command(flatten)]
        input: Input,
        #[arg(short, value_parser = clap::value_parser!(i64).range(1..))]
        n: i64,
        /// Columns added on each side of the default window.
        #[arg(long, default_value_t = 0)]
        extra: i64,
        /// Also check that widening the window by 1 to 3 columns changes nothing.
        #[arg(long)]
        verify: bool,
    },
    /// Two-handle map classes and the vanishing report for the trace.
    Cobordism {
        #[command(flatten)]
        input: Input,
        #[arg(short, value_parser = clap::value_parser!(i64).range(1..))]
        n: i64,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        s_range: Option<(i64, i64)>,
        #[arg(long)]
        direct: bool,
    },
    /// Whether the trace W_n(K) is ruled out as a symplectic filling.
    Obstruct {
        #[command(flatten)]
        input: Input,
        #[arg(short, value_parser = clap::value_parser!(i64).range(1..))]
        n: i64,
        #[arg(long)]
        direct: bool,
    },
    /// Decide whether a linking form is congruent to diag(I, 0).
    Lattice {
        /// JSON array of integer rows.
        #[arg(long, required_unless_present = "seed", conflicts_with = "seed")]
        file: Option<PathBuf>,
        /// Scramble diag(I_(n-k), 0_k) with this seed instead of reading a file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=16))]
        n: u8,
        /// Nullity k of the scrambled form.
        #[arg(long, default_value_t = 0)]
        nullity: u8,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

fn bad_input(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

fn missing_flip(name: &str) -> Failure {
    Failure { code: 3, error: anyhow!("'{name}' has no flip map; direct mode needs one") }
}

fn engine(e: SurgeryError) -> Failure {
    match e {
        SurgeryError::Cfk(_) => bad_input(e.into()),
        SurgeryError::MissingFlip(ref name) => missing_flip(name),
        e => anyhow::Error::from(e).into(),
    }
}

fn read_complex(input: &Input) -> Result<KnotComplex, Failure> {
    match (&input.builtin, &input.file) {
        (Some(name), _) => builtin(name).map_err(|e| bad_input(e.into())),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(bad_input)?;
            KnotComplex::parse(&text).map_err(|e| bad_input(e.into()))
        }
        (None, None) => unreachable!("clap requires an input"),
    }
}

/// Reads and validates; every command except `validate` goes through here.
fn load(input: &Input) -> Result<KnotComplex, Failure> {
    let c = read_complex(input)?;
    let report = validation_report(&c);
    match report.first_error() {
        Some(e) => Err(bad_input(anyhow!(e).context(format!("{} is not a valid complex", c.name)))),
        None => Ok(c),
    }
}

fn require_flip(c: &KnotComplex, direct: bool) -> Result<(), Failure> {
    if direct && !c.has_flip() {
        return Err(missing_flip(&c.name));
    }
    Ok(())
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
    } else {
        print!("{}", text(value));
    }
}

/// JSON shape of `surgery`.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct SurgeryOutput {
    homology: conecalc::surgery::SurgeryHomology,
    stable: Option<bool>,
}

/// JSON shape of `cobordism`.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct CobordismOutput {
    classes: Vec<HandleMapClass>,
    report: VanishingReport,
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Validate { input } => {
            let c = read_complex(&input)?;
            let report = validation_report(&c);
            emit(json, &report, |r| format!("{r}\n"));
            if !report.is_valid() {
                return Err(bad_input(anyhow!("{} failed validation", c.name)));
            }
        }
        Command::Invariants { input, s_range, direct } => {
            let c = load(&input)?;
            require_flip(&c, direct)?;
            let table = vh_table(&c, s_range).map_err(engine)?;
            emit(json, &table, |t| {
                let mut out = format!("{} (genus {})\n{:>5} {:>5} {:>5}\n", t.knot, t.genus, "s", "V_s", "H_s");
                for r in &t.rows {
                    let mark = if r.h_mode == Provenance::Theorem { "  (H_s = V_-s, no flip)" } else { "" };
                    out += &format!("{:>5} {:>5} {:>5}{mark}\n", r.s, r.v, r.h);
                }
                out + &format!("d(S3_1(K)) = -2 V_0 = {}\n", t.d1)
            });
        }
        Command::Surgery { input, n, extra, verify } => {
            let c = load(&input)?;
            require_flip(&c, true)?;
            let homology = cone_homology_with(&c, n, extra).map_err(engine)?;
            let stable = if verify {
                let mut ok = true;
                for e in 1..=3 {
                    ok &= truncation_stability(&c, n, extra + e).map_err(engine)?;
                }
                Some(ok)
            } else {
                None
            };
            let out = SurgeryOutput { homology, stable };
            emit(json, &out, |o| {
                let h = &o.homology;
                let mut text = format!("HF^-(S3_{}({})), cone half-width {}\n", h.n, h.knot, h.half_width);
                for l in &h.labels {
                    let d = l.d.map_or("-".to_string(), |d| d.to_string());
                    text += &format!("  label {}: {}  [grading offset {}, d = {d}]\n", l.label, l.module, l.offset);
                }
                text += &format!("free rank {}\n", h.total_free_rank());
                if let Some(s) = o.stable {
                    text += if s { "stable under window growth\n" } else { "CHANGED under window growth\n" };
                }
                text
            });
            if stable == Some(false) {
                return Ok(false);
            }
        }
        Command::Cobordism { input, n, s_range, direct } => {
            let c = load(&input)?;
            require_flip(&c, direct)?;
            let (lo, hi) = s_range.unwrap_or_else(|| report_range(&c, n));
            let classes = if c.has_flip() {
                (lo..=hi).map(|s| handle_map_class(&c, n, s)).collect::<Result<Vec<_>, _>>().map_err(engine)?
            } else {
                vec![]
            };
            let report = vanishing_report(&c, n).map_err(engine)?;
            emit(json, &CobordismOutput { classes, report }, |o| {
                let mut text = format!("two-handle maps for {}-surgery on {}\n", n, o.report.knot);
                for m in &o.classes {
                    let place = if m.in_window { "" } else { " (outside window)" };
                    let value = if m.is_zero { "0".to_string() } else { format!("{:?}", m.class) };
                    text += &format!("  s = {:>3}  <c1,S> = {:>3}  grading {:>6}  image {value}{place}\n", m.s, m.spinc.evaluation(), m.grading);
                }
                if o.classes.is_empty() {
                    text += "  no flip map: direct classes skipped\n";
                }
                text + &o.report.conclusion + "\n"
            });
        }
        Command::Obstruct { input, n, direct } => {
            let c = load(&input)?;
            require_flip(&c, direct)?;
            let v = obstruct_filling(&c, n).map_err(engine)?;
            emit(json, &v, |v| {
                let direct = if v.report.has_direct() { "direct and theorem evidence" } else { "theorem evidence only" };
                format!(
                    "{} for W_{}({}) [d(S3_1) = {}]\n{}\n({direct}; {})\n",
                    v.conclusion, v.n, v.knot, v.d1, v.explanation, v.report.conclusion
                )
            });
        }
        Command::Lattice { file, seed, n, nullity } => {
            let q = match (file, seed) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())).map_err(bad_input)?;
                    SymIntMatrix::from_json(&text).map_err(|e| bad_input(e.into()))?
                }
                (None, Some(seed)) => {
                    if nullity > n {
                        return Err(bad_input(anyhow!("nullity {nullity} exceeds dimension {n}")));
                    }
                    scrambled_block_form(n.into(), nullity.into(), seed).map_err(|e| anyhow!(e))?
                }
                (None, None) => unreachable!("clap requires --file or --seed"),
            };
            let report = handle_split_report(&q).map_err(|e| bad_input(e.into()))?;
            emit(json, &report, |r| {
                let mut text = format!("input form:\n{q}rank {}, nullity {}\n", r.rank, r.nullity);
                if r.congruent {
                    text += &format!("congruent to diag(I_{}, 0_{}) after {} moves\n", r.rank, r.nullity, r.moves.len());
                    text += "transform (columns are the new basis):\n";
                    for row in r.transform.iter().flatten() {
                        text += &format!("{row:?}\n");
                    }
                } else {
                    text += &format!("not congruent to diag(I_{}, 0_{})\n", r.rank, r.nullity);
                }
                if let Some(w) = &r.witness {
                    text += &format!("witness: {w}\n");
                }
                text
            });
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
