//! `exseq`: command-line front end for exceptional sequences of line bundles
//! on Picard-rank-2 projective bundles.
//!
//! Exit codes: `0` success, `1` runtime failure or a failing verdict, `2`
//! usage error (including an unknown subcommand).

mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use exseq_core::exec::configure_threads;
use exseq_core::mutation::reduce_to_orlov;
use exseq_core::poset::is_exceptional_sequence;
use exseq_core::rouquier::{rouquier_dimension, DEFAULT_GAP_WINDOW};
use exseq_core::toric::enumerate_mes;
use exseq_core::verify::{parse_section, Verdict, Verifier, CRITERIA};
use exseq_core::x2::{classify, enumerate_mes_x2, pf0_table, reconstruct};
use exseq_core::{Exec, ExceptionalSet, LineBundle, VarietySpec};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "exseq", version, about = "Exceptional sequences of line bundles on Picard-rank-2 projective bundles")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// Render the cohomology loci on a square window.
    Loci {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 12)]
        window: i64,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Exceptionality, strongness, effectivity and maximality of a sequence.
    Check {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
    },
    /// Maximal exceptional sets as JSON Lines (X₂ by window, toric by offsets).
    Enumerate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = exseq_core::x2::DEFAULT_WINDOW)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        offsets: i64,
    },
    /// Helix class, twist and `F ∖ Eff` of a maximal set on X₂.
    ClassifyX2 {
        #[arg(long)]
        sequence: PathBuf,
    },
    /// Mutation trace from a maximal set on X₂ to Orlov type.
    Reduce {
        #[arg(long)]
        sequence: PathBuf,
    },
    /// The relations F, Eff and ⟨F⟩ of an exceptional set.
    Poset {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
    },
    /// Generation time of the best Orlov-type tilting bundle and the bound it gives.
    Rouquier {
        #[arg(long)]
        spec: PathBuf,
        /// Largest gap between consecutive row offsets.
        #[arg(long, default_value_t = DEFAULT_GAP_WINDOW)]
        window: i64,
    },
    /// Run acceptance criteria; exit 0 iff every selected verdict passes.
    VerifyPaper {
        /// Criterion number or claim id.
        #[arg(long, conflicts_with = "all")]
        section: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
}

/// Reads JSON, reporting the JSON pointer of the first offending value.
fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let pointer: String = e
            .path()
            .iter()
            .map(|seg| match seg {
                serde_path_to_error::Segment::Seq { index } => format!("/{index}"),
                serde_path_to_error::Segment::Map { key } => format!("/{key}"),
                serde_path_to_error::Segment::Enum { variant } => format!("/{variant}"),
                serde_path_to_error::Segment::Unknown => "/?".to_string(),
            })
            .collect();
        anyhow!("{}: at JSON pointer \"{pointer}\": {}", path.display(), e.inner())
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Serialize)]
struct CheckReport {
    spec: String,
    sequence: Vec<LineBundle>,
    exceptional_sequence: bool,
    exceptional_set: bool,
    strong: Option<bool>,
    effective: Option<bool>,
    maximal: Option<bool>,
}

#[derive(Serialize)]
struct EnumeratedSet {
    bundles: Vec<LineBundle>,
    strong: bool,
    effective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<String>,
}

#[derive(Serialize)]
struct PosetReport {
    f: exseq_core::Relation,
    eff: exseq_core::Relation,
    poset: exseq_core::Relation,
    proper_f: Vec<(usize, usize)>,
    exceptional_orders: usize,
}

#[derive(Serialize)]
struct ClassifyReport {
    label: exseq_core::x2::MesClassLabel,
    display: String,
    template_order: Vec<LineBundle>,
    proper_f: Vec<(usize, usize)>,
}

fn exec() -> Exec {
    Exec::default()
}

fn enumerate(spec: &VarietySpec, window: i64, offsets: i64) -> Result<String> {
    let sets: Vec<ExceptionalSet> = match spec {
        VarietySpec::Cotangent { ell: 2 } => enumerate_mes_x2(window, exec())?,
        VarietySpec::Toric(t) => enumerate_mes(t, offsets, exec())?,
        other => bail!("enumeration is available for X_2 and toric specs, not {other}"),
    };
    let mut out = String::new();
    for s in sets {
        let class = match spec {
            VarietySpec::Cotangent { .. } => Some(classify(s.bundles())?.to_string()),
            _ => None,
        };
        let line = EnumeratedSet {
            bundles: s.sorted_bundles(),
            strong: s.is_strongly_exceptional()?,
            effective: s.is_effective()?,
            class,
        };
        out += &serde_json::to_string(&line)?;
        out.push('\n');
    }
    Ok(out)
}

fn verify(section: Option<String>, all: bool, format: Format) -> Result<(String, bool)> {
    let criteria: Vec<u8> = match (section, all) {
        (Some(id), _) => vec![parse_section(&id).ok_or_else(|| anyhow!("unknown section {id:?}"))?],
        (None, true) => (1..=CRITERIA).collect(),
        (None, false) => bail!("pass --section ID or --all"),
    };
    let verifier = Verifier::new(exec());
    let verdicts: Vec<Verdict> = criteria.iter().map(|&n| verifier.run(n)).collect::<exseq_core::Result<_>>()?;
    let ok = verdicts.iter().all(Verdict::passed);
    let text = match format {
        Format::Json => to_json(&verdicts)?,
        _ => {
            let mut s: String = verdicts.iter().map(|v| format!("{v}\n")).collect();
            let passed = verdicts.iter().filter(|v| v.passed()).count();
            s += &format!("{passed}/{} criteria pass\n", verdicts.len());
            s
        }
    };
    Ok((text, ok))
}

/// Output text and whether the command succeeded.
fn execute(command: Command) -> Result<(String, bool)> {
    let done = |s: String| Ok((s, true));
    match command {
        Command::Loci { spec, window, format } => {
            let spec: VarietySpec = read_json(&spec)?;
            done(match format {
                Format::Ascii => render::ascii(&spec, window),
                Format::Svg => render::svg(&spec, window),
                Format::Json => to_json(&render::points(&spec, window))?,
            })
        }
        Command::Check { spec, sequence } => {
            let spec: VarietySpec = read_json(&spec)?;
            let seq: Vec<LineBundle> = read_json(&sequence)?;
            let exceptional_sequence = is_exceptional_sequence(&spec, &seq)?;
            let set = ExceptionalSet::new(spec.clone(), seq.clone()).ok();
            let report = CheckReport {
                spec: spec.to_string(),
                exceptional_sequence,
                exceptional_set: set.is_some(),
                strong: set.as_ref().map(ExceptionalSet::is_strongly_exceptional).transpose()?,
                effective: set.as_ref().map(ExceptionalSet::is_effective).transpose()?,
                maximal: set.as_ref().map(ExceptionalSet::is_maximal),
                sequence: seq,
            };
            done(to_json(&report)?)
        }
        Command::Enumerate { spec, window, offsets } => done(enumerate(&read_json(&spec)?, window, offsets)?),
        Command::ClassifyX2 { sequence } => {
            let seq: Vec<LineBundle> = read_json(&sequence)?;
            let label = classify(&seq)?;
            let template_order = reconstruct(&label)?;
            let proper_f = pf0_table(&template_order)?.into_iter().collect();
            done(to_json(&ClassifyReport { display: label.to_string(), label, template_order, proper_f })?)
        }
        Command::Reduce { sequence } => {
            let seq: Vec<LineBundle> = read_json(&sequence)?;
            done(to_json(&reduce_to_orlov(&seq)?)?)
        }
        Command::Poset { spec, sequence } => {
            let spec: VarietySpec = read_json(&spec)?;
            let set = ExceptionalSet::new(spec, read_json(&sequence)?)?;
            let orders = set.exceptional_orders(usize::MAX)?;
            let report = PosetReport {
                f: set.f_relation()?,
                eff: set.eff_relation(),
                poset: set.poset()?,
                proper_f: set.proper_f()?.into_iter().collect(),
                exceptional_orders: orders.orders.len(),
            };
            done(to_json(&report)?)
        }
        Command::Rouquier { spec, window } => {
            let spec: VarietySpec = read_json(&spec)?;
            done(to_json(&rouquier_dimension(&spec, window, exec())?)?)
        }
        Command::VerifyPaper { section, all, format } => verify(section, all, format),
    }
}

fn threads_from_env() -> Result<()> {
    match std::env::var("EXSEQ_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("EXSEQ_THREADS={v:?} is not a count"))?;
            Ok(configure_threads(n)?)
        }
        Err(_) => Ok(()),
    }
}

fn run(cli: Cli) -> Result<bool> {
    threads_from_env()?;
    let (text, ok) = execute(cli.command)?;
    match cli.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
