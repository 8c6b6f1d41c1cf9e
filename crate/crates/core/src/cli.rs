//! Command-line front end. Every command prints one JSON document; domain
//! errors print `{"error": {"kind", "detail"}}` and exit with status 1,
//! usage errors exit with status 2.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cycle_algebra::{
    builtin_basis, class_from_degrees, is_duality_basis, pairing_degree, rational_strings, DegreeVector, Space,
};
use crate::error::{Error, Result};
use crate::grassmann::{
    lines_on_quadric_witness, lines_on_two_quadrics, schubert_membership_with, schubert_sample, schubert_witness_move,
    Flag, Line, LineDoc, Quadric, SchubertIndex, SchubertPoset, SchubertWitnessDoc, SchubertWitnessSet,
};
use crate::json;
use crate::polysys::{PolySystem, SystemDoc};
use crate::rng;
use crate::solver::{solve_total_degree_with, SolveOptions, TrackerSettings};
use crate::witness_classical::{
    product_witness, witness_compute, witness_membership_with, witness_move, witness_sample, LinearSlice, WitnessDoc,
    WitnessSet,
};

#[derive(Debug, Parser)]
#[command(name = "witnesskit", version, about = "Witness sets, homotopy continuation and Schubert witness sets")]
struct Cli {
    /// Seed for all random choices.
    #[arg(long, global = true, env = "WITNESSKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a square system by the total-degree homotopy.
    Solve(SolveArgs),
    /// Classical witness sets.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Bidegrees of a variety in a product of two affine spaces.
    ProductWitness(ProductArgs),
    /// Cycle classes from intersection matrices.
    #[command(subcommand)]
    Class(ClassCommand),
    /// Lines in P⁴ and Schubert witness sets.
    #[command(subcommand)]
    Grassmann(GrassmannCommand),
}

#[derive(Debug, Args)]
struct TrackerFlags {
    /// Initial and maximal step in t.
    #[arg(long, default_value_t = 0.05)]
    initial_step: f64,
    /// Smallest step before a path is abandoned.
    #[arg(long, default_value = "1e-12")]
    min_step: f64,
    /// Relative Newton update accepted by the corrector.
    #[arg(long, default_value = "1e-9")]
    corrector_tol: f64,
    /// Corrector iterations per step.
    #[arg(long, default_value_t = 3)]
    newton_iters: usize,
    /// Step budget per path.
    #[arg(long, default_value_t = 20_000)]
    max_steps: usize,
    /// Normalized distance under which endpoints are merged.
    #[arg(long, default_value = "1e-6")]
    dedup_tol: f64,
}

impl TrackerFlags {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            tracker: TrackerSettings {
                initial_step: self.initial_step,
                min_step: self.min_step,
                corrector_tol: self.corrector_tol,
                newton_max_iters: self.newton_iters,
                max_steps: self.max_steps,
                t_end: 0.0,
            },
            dedup_tol: self.dedup_tol,
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Polynomial system JSON.
    #[arg(long)]
    system: PathBuf,
    #[command(flatten)]
    tracker: TrackerFlags,
}

#[derive(Debug, Subcommand)]
enum WitnessCommand {
    /// Witness set of the k-dimensional part of V(F).
    Compute {
        /// Polynomial system JSON.
        #[arg(long)]
        system: PathBuf,
        /// Dimension k of the variety.
        #[arg(long)]
        dim: usize,
    },
    /// Move a witness set to a new slice (random unless given).
    Move {
        /// Witness set JSON, as written by compute or witness.
        #[arg(long)]
        witness: PathBuf,
        /// k × (n+1) matrix of affine forms, row i = [a_i0, a_i1, ...].
        #[arg(long)]
        slice: Option<PathBuf>,
    },
    /// A random point of the variety.
    Sample {
        /// Witness set JSON, as written by compute or witness.
        #[arg(long)]
        witness: PathBuf,
    },
    /// Whether a point lies on the variety.
    Member {
        /// Witness set JSON, as written by compute or witness.
        #[arg(long)]
        witness: PathBuf,
        /// Point as a JSON list of [re, im], inline or as a file path.
        #[arg(long)]
        point: String,
        /// Coordinate distance accepted as a match; ten times this is the
        /// edge of the inconclusive band.
        #[arg(long, default_value = "1e-6")]
        match_tol: f64,
    },
}

#[derive(Debug, Args)]
struct ProductArgs {
    /// Polynomial system JSON.
    #[arg(long)]
    system: PathBuf,
    /// Variables in the first factor.
    #[arg(long)]
    first: usize,
    /// Variables in the second factor.
    #[arg(long)]
    second: usize,
    /// Dimension k of the variety.
    #[arg(long)]
    dim: usize,
}

#[derive(Debug, Subcommand)]
enum ClassCommand {
    /// Class coefficients from witness degrees.
    Recover {
        /// g14, pn:N, product:M,N or blowup-p2.
        #[arg(long)]
        space: String,
        /// Grade k: the dimension of the basis cycles.
        #[arg(long)]
        grade: usize,
        /// Comma-separated degrees, one per basis cycle of the grade.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        degrees: Vec<i64>,
    },
    /// Intersection number of two basis cycles of complementary grades.
    Pair {
        /// g14, pn:N, product:M,N or blowup-p2.
        #[arg(long)]
        space: String,
        /// Grade k: the dimension of the basis cycles.
        #[arg(long)]
        grade: usize,
        /// Basis cycle of grade k, by position.
        #[arg(long)]
        row: usize,
        /// Basis cycle of the complementary grade, by position.
        #[arg(long)]
        column: usize,
    },
    /// Whether the basis of a grade is self-dual.
    Duality {
        /// g14, pn:N, product:M,N or blowup-p2.
        #[arg(long)]
        space: String,
        /// Grade k: the dimension of the basis cycles.
        #[arg(long)]
        grade: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GrassmannCommand {
    /// The Schubert poset of G(1,P4).
    Poset,
    /// Dual Schubert index.
    Dual {
        /// Index such as 13 or 1,3.
        #[arg(long)]
        index: String,
    },
    /// Schubert witness set of the lines on a quadric.
    Witness {
        /// Symmetric 5×5 matrix JSON.
        #[arg(long)]
        quadric: PathBuf,
        /// 5×5 frame; random unless given.
        #[arg(long)]
        flag: Option<PathBuf>,
    },
    /// Move a Schubert witness set to a new flag (random unless given).
    Move {
        /// Witness set JSON, as written by compute or witness.
        #[arg(long)]
        witness: PathBuf,
        /// 5×5 frame; random unless given.
        #[arg(long)]
        flag: Option<PathBuf>,
    },
    /// A random line on the quadric.
    Sample {
        /// Witness set JSON, as written by compute or witness.
        #[arg(long)]
        witness: PathBuf,
    },
    /// Whether a line lies on the quadric.
    Member {
        /// Witness set JSON, as written by compute or witness.
        #[arg(long)]
        witness: PathBuf,
        /// Line JSON: 2×5 span, Plücker vector optional.
        #[arg(long)]
        line: PathBuf,
        /// Plücker distance accepted as a match; ten times this is the edge
        /// of the inconclusive band.
        #[arg(long, default_value = "1e-6")]
        match_tol: f64,
    },
    /// The lines on the intersection of two quadrics.
    QuarticLines {
        /// First quadric.
        #[arg(long)]
        q1: PathBuf,
        /// Second quadric.
        #[arg(long)]
        q2: PathBuf,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (code, value) = match dispatch(&cli) {
        Ok(v) => (0, v),
        Err(e) => (1, json!({"error": {"kind": e.kind(), "detail": e.to_string()}})),
    };
    let mut text = serde_json::to_string(&value).expect("JSON values serialize");
    text.push('\n');
    match &cli.output {
        Some(path) if code == 0 => match fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => {
                let err = Error::from(e);
                Outcome {
                    code: 1,
                    stdout: serde_json::to_string(&json!({"error": {"kind": err.kind(), "detail": err.to_string()}}))
                        .expect("JSON values serialize")
                        + "\n",
                    stderr: String::new(),
                }
            }
        },
        _ => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

fn space(s: &str) -> Result<Space> {
    s.parse()
}

fn load_witness(path: &Path, seed: u64) -> Result<WitnessSet> {
    WitnessSet::from_doc(&read_json::<WitnessDoc>(path)?, seed)
}

fn load_schubert(path: &Path, seed: u64) -> Result<SchubertWitnessSet> {
    SchubertWitnessSet::from_doc(&read_json::<SchubertWitnessDoc>(path)?, seed)
}

fn dispatch(cli: &Cli) -> Result<Value> {
    let seed = cli.seed;
    match &cli.command {
        Command::Solve(args) => {
            let system = PolySystem::from_doc(&read_json::<SystemDoc>(&args.system)?)?;
            let report = solve_total_degree_with(&system, seed, &args.tracker.options())?;
            let solutions: Vec<Value> = report
                .solutions
                .iter()
                .map(|s| {
                    json!({
                        "point": json::encode_vec(&s.point),
                        "alpha": s.certificate.alpha,
                        "certified": s.certificate.certified,
                        "multiplicity": s.multiplicity,
                    })
                })
                .collect();
            Ok(json!({"solutions": solutions, "summary": report.summary}))
        }
        Command::Witness(cmd) => witness(cmd, seed),
        Command::ProductWitness(args) => {
            let system = PolySystem::from_doc(&read_json::<SystemDoc>(&args.system)?)?;
            let sets = product_witness(&system, args.first, args.second, args.dim, seed)?;
            let bidegrees: Vec<Value> = sets
                .iter()
                .map(|(&(a, b), ws)| json!({"a": a, "b": b, "degree": ws.degree()}))
                .collect();
            Ok(json!({ "bidegrees": bidegrees }))
        }
        Command::Class(cmd) => class(cmd),
        Command::Grassmann(cmd) => grassmann(cmd, seed),
    }
}

fn witness(cmd: &WitnessCommand, seed: u64) -> Result<Value> {
    match cmd {
        WitnessCommand::Compute { system, dim } => {
            let system = PolySystem::from_doc(&read_json::<SystemDoc>(system)?)?;
            Ok(to_value(&witness_compute(&system, *dim, seed)?.to_doc()))
        }
        WitnessCommand::Move { witness, slice } => {
            let ws = load_witness(witness, seed)?;
            let n = ws.system.num_vars();
            let slice = match slice {
                Some(path) => {
                    let rows: Vec<Vec<[f64; 2]>> = read_json(path)?;
                    LinearSlice::new(json::decode_matrix(&rows, ws.dim, n + 1)?)?
                }
                None => LinearSlice::random(ws.dim, n, &mut rng::substream(seed, "cli-slice")),
            };
            Ok(to_value(&witness_move(&ws, &slice, seed)?.to_doc()))
        }
        WitnessCommand::Sample { witness } => {
            let ws = load_witness(witness, seed)?;
            Ok(json!({"point": json::encode_vec(&witness_sample(&ws, seed)?)}))
        }
        WitnessCommand::Member {
            witness,
            point,
            match_tol,
        } => {
            let ws = load_witness(witness, seed)?;
            let raw: Vec<[f64; 2]> = if point.trim_start().starts_with('[') {
                serde_json::from_str(point).map_err(|e| Error::Parse(format!("point: {e}")))?
            } else {
                read_json(Path::new(point))?
            };
            let member = witness_membership_with(&ws, &json::decode_vec(&raw), seed, *match_tol)?;
            Ok(json!({ "member": member }))
        }
    }
}

fn class(cmd: &ClassCommand) -> Result<Value> {
    match cmd {
        ClassCommand::Recover { space: s, grade, degrees } => {
            let basis = builtin_basis(space(s)?)?;
            let m = basis.matrix(*grade)?;
            let c = class_from_degrees(
                m,
                &DegreeVector {
                    grade: *grade,
                    degrees: degrees.clone(),
                },
            )?;
            let coeffs: Vec<[String; 2]> = c.coeffs.iter().map(rational_strings).collect();
            let labels: Vec<&str> = basis.basis.labels(*grade)?.iter().map(|l| l.name.as_str()).collect();
            Ok(json!({"coeffs": coeffs, "labels": labels}))
        }
        ClassCommand::Pair {
            space: s,
            grade,
            row,
            column,
        } => {
            let basis = builtin_basis(space(s)?)?;
            let m = basis.matrix(*grade)?;
            let degree = pairing_degree(m, *row, *column)?;
            let n = basis.basis.ambient_dim;
            let row_label = &basis.basis.labels(n - grade)?[*row].name;
            let col_label = &basis.basis.labels(*grade)?[*column].name;
            Ok(json!({"degree": degree, "row": row_label, "column": col_label}))
        }
        ClassCommand::Duality { space: s, grade } => {
            let basis = builtin_basis(space(s)?)?;
            let m = basis.matrix(*grade)?;
            Ok(json!({"duality": is_duality_basis(m), "matrix": m.entries()}))
        }
    }
}

fn grassmann(cmd: &GrassmannCommand, seed: u64) -> Result<Value> {
    match cmd {
        GrassmannCommand::Poset => {
            let poset = SchubertPoset::new();
            let elements: Vec<Value> = poset
                .elements()
                .iter()
                .map(|x| json!({"index": x.to_string(), "rank": x.rank()}))
                .collect();
            let covers: Vec<[String; 2]> = poset
                .covers()
                .iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect();
            Ok(json!({"elements": elements, "covers": covers, "rank_counts": poset.rank_counts()}))
        }
        GrassmannCommand::Dual { index } => {
            let idx: SchubertIndex = index.parse()?;
            let d = idx.dual();
            Ok(json!({"index": idx.to_string(), "rank": idx.rank(), "dual": d.to_string(), "dual_rank": d.rank()}))
        }
        GrassmannCommand::Witness { quadric, flag } => {
            let q = Quadric::from_doc(&read_json::<Vec<Vec<[f64; 2]>>>(quadric)?)?;
            let flag = match flag {
                Some(path) => Flag::from_doc(&read_json::<Vec<Vec<[f64; 2]>>>(path)?)?,
                None => Flag::random(&mut rng::substream(seed, "cli-flag")),
            };
            Ok(to_value(&lines_on_quadric_witness(&q, &flag, seed)?.to_doc()))
        }
        GrassmannCommand::Move { witness, flag } => {
            let ws = load_schubert(witness, seed)?;
            let flag = match flag {
                Some(path) => Flag::from_doc(&read_json::<Vec<Vec<[f64; 2]>>>(path)?)?,
                None => Flag::random(&mut rng::substream(seed, "cli-flag")),
            };
            Ok(to_value(&schubert_witness_move(&ws, &flag, seed)?.to_doc()))
        }
        GrassmannCommand::Sample { witness } => {
            let ws = load_schubert(witness, seed)?;
            Ok(to_value(&schubert_sample(&ws, seed)?.to_doc()))
        }
        GrassmannCommand::Member {
            witness,
            line,
            match_tol,
        } => {
            let ws = load_schubert(witness, seed)?;
            let line = Line::from_doc(&read_json::<LineDoc>(line)?)?;
            Ok(json!({"member": schubert_membership_with(&ws, &line, seed, *match_tol)?}))
        }
        GrassmannCommand::QuarticLines { q1, q2 } => {
            let q1 = Quadric::from_doc(&read_json::<Vec<Vec<[f64; 2]>>>(q1)?)?;
            let q2 = Quadric::from_doc(&read_json::<Vec<Vec<[f64; 2]>>>(q2)?)?;
            let lines = lines_on_two_quadrics(&q1, &q2, seed)?;
            let docs: Vec<LineDoc> = lines.iter().map(Line::to_doc).collect();
            Ok(json!({"count": docs.len(), "lines": docs}))
        }
    }
}
