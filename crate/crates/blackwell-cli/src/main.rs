//! Command-line front end for the channel comparison toolkit.
//!
//! Exit codes are the machine contract:
//!
//! * `0`: yes (degradation certified / pipeline consistent / point inside)
//! * `1`: no, with a checkable witness in the report
//! * `2`: ambiguous comparison: no certificate and no witness at tolerance
//! * `10`: usage errors, malformed or mismatched documents
//! * `11`: filesystem and JSON syntax errors
//!
//! Reports are labeled text by default; `--format machine` emits one JSON
//! object with the same fields plus full certificate and witness payloads.

mod doc;
mod report;

use std::path::{Path, PathBuf};

use blackwell::classical::{
    self, compare_channels, random_channel, verify_pguess_dominance, ComparisonVerdict,
};
use blackwell::convex::{separate_point, PointCloudHull, Separation};
use blackwell::pipeline::{detect_memory, make_demo_pipelines, run_pipeline, MemoryVerdict};
use blackwell::probability::{
    conditional_entropy, conditional_min_entropy, guessing_probability, mutual_information,
    shannon_entropy, Distribution,
};
use blackwell::quantum::comparison::{
    find_degrading_quantum, test_sufficiency, DegradingOutcome, QuantumViolationWitness,
    DEGRADING_TOL,
};
use blackwell::quantum::channel::QuantumChannel;
use blackwell::quantum::linalg::CMatrix;
use blackwell::quantum::minentropy::{min_entropy_bracket, random_ensemble};
use blackwell::Error;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use doc::{Document, Meta};
use report::{Format, Report};

const EXIT_YES: i32 = 0;
const EXIT_NO: i32 = 1;
const EXIT_AMBIGUOUS: i32 = 2;
const EXIT_USAGE: i32 = 10;

/// Failures outside the yes/no/ambiguous verdict space.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or documents that violate a type invariant: exit 10.
    Usage(String),
    /// Filesystem trouble or unparseable JSON: exit 11.
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => 11,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "blackwell",
    version,
    about = "Decide whether one noisy channel simulates another by post-processing, \
             and audit min-entropy through processing pipelines"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the second channel is a degradation of the first.
    ///
    /// Exits 0 with an explicit degrading channel, 1 with an input ensemble
    /// whose guessing probability increases from first to second, or 2 when
    /// neither certificate nor witness exists at the working tolerance.
    Compare {
        /// Channel document being degraded.
        first: PathBuf,
        /// Channel document that should arise from post-processing.
        second: PathBuf,
        /// Certificate acceptance threshold; defaults to the per-kind
        /// library tolerance, and per-file `meta.tol` overrides that.
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for the optional sampling cross-check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random probes for a monotonicity spot check (0 skips it).
        #[arg(long, default_value_t = 0)]
        trials: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Entropy accounting for a distribution, joint table, or ensemble.
    Entropy {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a pipeline document and flag hidden-memory violations.
    ///
    /// Exits 0 when every min-entropy bracket is consistent with memoryless
    /// processing, 1 when some boundary drops below an earlier certified
    /// floor.
    Pipeline {
        file: PathBuf,
        /// Probe document overriding the one bundled in the pipeline.
        #[arg(long)]
        probe: Option<PathBuf>,
        /// Bracket separation tolerance, in bits.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Locate a point relative to the convex hull of sample vectors.
    ///
    /// Exits 0 when the point lies inside, 1 with a strict separating
    /// hyperplane when it does not.
    Separate {
        /// JSON file holding an array of hull vertices.
        #[arg(long)]
        hull: PathBuf,
        /// Comma-separated coordinates of the query point.
        #[arg(long)]
        point: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Write a seeded random document of the given kind.
    Random {
        /// One of: classical-channel, quantum-channel, distribution,
        /// ensemble, pipeline.
        what: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Input alphabet size for classical objects; also the outcome
        /// count of a plain distribution.
        #[arg(long, default_value_t = 3)]
        inputs: usize,
        /// Output alphabet size for classical channels.
        #[arg(long, default_value_t = 3)]
        outputs: usize,
        /// Input dimension for quantum channels; also the ensemble state
        /// dimension.
        #[arg(long, default_value_t = 2)]
        dim_in: usize,
        /// Output dimension for quantum channels.
        #[arg(long, default_value_t = 2)]
        dim_out: usize,
        /// Latent alphabet size; turns `distribution` into a joint table.
        #[arg(long)]
        latent: Option<usize>,
        /// Number of ensemble states.
        #[arg(long, default_value_t = 3)]
        states: usize,
        /// Demo pipeline kind: markov-classical, memory-classical,
        /// markov-quantum, or memory-quantum.
        #[arg(long)]
        demo: Option<String>,
        /// Write the document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_YES;
            }
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match cli.command {
        Cmd::Compare { first, second, tol, seed, trials, out, format } => {
            cmd_compare(&first, &second, tol, seed, trials, out.as_deref(), format)
        }
        Cmd::Entropy { file, out, format } => cmd_entropy(&file, out.as_deref(), format),
        Cmd::Pipeline { file, probe, tol, out, format } => {
            cmd_pipeline(&file, probe.as_deref(), tol, out.as_deref(), format)
        }
        Cmd::Separate { hull, point, out, format } => {
            cmd_separate(&hull, &point, out.as_deref(), format)
        }
        Cmd::Random { what, seed, inputs, outputs, dim_in, dim_out, latent, states, demo, out } => {
            cmd_random(
                &what, seed, inputs, outputs, dim_in, dim_out, latent, states,
                demo.as_deref(), out.as_deref(),
            )
        }
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    }
}

fn cmd_compare(
    first: &Path,
    second: &Path,
    tol: Option<f64>,
    seed: u64,
    trials: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<i32, Failure> {
    let da = Document::load(first)?;
    let db = Document::load(second)?;
    let tol = tol.or(da.meta().tol).or(db.meta().tol);
    let mut report = Report::new("compare");
    report.str("first", first.display().to_string());
    report.str("second", second.display().to_string());

    let code = match (&da, &db) {
        (Document::ClassicalChannel { .. }, Document::ClassicalChannel { .. }) => {
            let w = da.as_classical_channel()?;
            let w2 = db.as_classical_channel()?;
            let tol = tol.unwrap_or(classical::VERDICT_TOL);
            report.str("comparison", "classical");
            report.num("tolerance", tol);
            if trials > 0 {
                let dom = verify_pguess_dominance(&w, &w2, 4, trials, seed)?;
                report.show("sampled_trials", trials, json!(trials));
                report.num("sampled_min_slack", dom.min_slack);
            }
            match compare_channels(&w, &w2, tol)? {
                ComparisonVerdict::Degradable(cert) => {
                    report.str("verdict", "degradable");
                    report.num("residual", cert.residual);
                    report.note("degrading channel rows (one per final output):");
                    note_real_rows(&mut report, cert.channel.matrix());
                    let cert_doc =
                        Document::from_classical_channel(&cert.channel, Meta::default());
                    report.set("certificate", to_value(&cert_doc));
                    EXIT_YES
                }
                ComparisonVerdict::NotDegradable { witness, residual } => {
                    report.str("verdict", "not-degradable");
                    report.num("residual", residual);
                    report.num("pguess_via_first", witness.pguess_via_first);
                    report.num("pguess_via_second", witness.pguess_via_second);
                    report.num("gap", witness.gap);
                    let joint_doc = Document::from_joint(&witness.joint, Meta::default());
                    report.set("witness", to_value(&joint_doc));
                    EXIT_NO
                }
                ComparisonVerdict::Ambiguous { residual, advantage } => {
                    report.str("verdict", "ambiguous");
                    report.num("residual", residual);
                    report.num("best_advantage", advantage);
                    EXIT_AMBIGUOUS
                }
            }
        }
        (Document::QuantumChannel { .. }, Document::QuantumChannel { .. }) => {
            let phi = da.as_quantum_channel()?;
            let phi2 = db.as_quantum_channel()?;
            let tol = tol.unwrap_or(DEGRADING_TOL);
            report.str("comparison", "quantum");
            report.num("tolerance", tol);
            if trials > 0 {
                let suff = test_sufficiency(&phi, &phi2, trials, seed)?;
                report.show(
                    "sampled_probes",
                    suff.probes_evaluated,
                    json!(suff.probes_evaluated),
                );
                report.num("sampled_min_slack", suff.worst_slack);
            }
            match find_degrading_quantum(&phi, &phi2) {
                Ok(DegradingOutcome::Degradable(cert)) if cert.residual <= tol => {
                    report.str("verdict", "degradable");
                    report.num("residual", cert.residual);
                    let cert_doc = Document::from_quantum_channel(&cert.psi, Meta::default());
                    report.set("certificate", to_value(&cert_doc));
                    EXIT_YES
                }
                Ok(DegradingOutcome::Degradable(cert)) => {
                    report.str("verdict", "ambiguous");
                    report.num("residual", cert.residual);
                    report.note(format!(
                        "certificate residual {} exceeds the requested tolerance {tol}",
                        cert.residual
                    ));
                    EXIT_AMBIGUOUS
                }
                Ok(DegradingOutcome::NotDegradable(witness)) => {
                    report.str("verdict", "not-degradable");
                    note_quantum_witness(&mut report, &witness);
                    EXIT_NO
                }
                Err(Error::Ambiguous(msg)) => {
                    report.str("verdict", "ambiguous");
                    report.str("diagnostic", msg);
                    EXIT_AMBIGUOUS
                }
                Err(e) => return Err(e.into()),
            }
        }
        _ => {
            return Err(Failure::Usage(format!(
                "cannot compare a {} document with a {} document",
                da.kind(),
                db.kind()
            )))
        }
    };
    report.emit(format, out)?;
    Ok(code)
}

fn note_quantum_witness(report: &mut Report, witness: &QuantumViolationWitness) {
    report.str("probe", &witness.probe);
    report.show("aux_dim", witness.aux_dim, json!(witness.aux_dim));
    report.num("pguess_via_first", witness.pguess_first);
    report.num("pguess_via_second", witness.pguess_second);
    report.num("gap", witness.gap);
    let ensemble_doc = Document::from_ensemble(&witness.ensemble, Meta::default());
    report.set(
        "witness",
        json!({
            "ensemble": to_value(&ensemble_doc),
            "decoder_first": povm_value(witness.decoder_first.effects()),
            "decoder_second": povm_value(witness.decoder_second.effects()),
        }),
    );
}

fn cmd_entropy(file: &Path, out: Option<&Path>, format: Format) -> Result<i32, Failure> {
    let doc = Document::load(file)?;
    let mut report = Report::new("entropy");
    report.str("file", file.display().to_string());
    match &doc {
        Document::Distribution { probs: Some(_), joint: None, .. } => {
            let d = doc.as_plain_distribution()?;
            report.str("kind", "distribution");
            report.num("entropy_bits", shannon_entropy(&d));
            let pmax = d.probs().iter().cloned().fold(0.0_f64, f64::max);
            report.num("guessing_probability", pmax);
            report.num("min_entropy_bits", -pmax.log2());
        }
        Document::Distribution { .. } => {
            let j = doc.as_joint()?;
            report.str("kind", "joint");
            report.num("latent_entropy_bits", shannon_entropy(&j.col_marginal()));
            report.num("conditional_entropy_bits", conditional_entropy(&j));
            report.num("mutual_information_bits", mutual_information(&j));
            report.num("guessing_probability", guessing_probability(&j));
            report.num("conditional_min_entropy_bits", conditional_min_entropy(&j));
        }
        Document::Ensemble { .. } => {
            let e = doc.as_ensemble()?;
            report.str("kind", "ensemble");
            let labels = Distribution::from_probs(e.probs().to_vec())?;
            report.num("label_entropy_bits", shannon_entropy(&labels));
            let bracket = min_entropy_bracket(&e)?;
            report.num("guessing_probability_lower", bracket.pguess.lower);
            report.num("guessing_probability_upper", bracket.pguess.upper);
            report.num("conditional_min_entropy_lower_bits", bracket.lower_bits);
            report.num("conditional_min_entropy_upper_bits", bracket.upper_bits);
            report.show(
                "bracket_converged",
                bracket.pguess.converged,
                json!(bracket.pguess.converged),
            );
        }
        other => {
            return Err(Failure::Usage(format!(
                "entropy expects a distribution or ensemble document, found {}",
                other.kind()
            )))
        }
    }
    report.emit(format, out)?;
    Ok(EXIT_YES)
}

fn cmd_pipeline(
    file: &Path,
    probe: Option<&Path>,
    tol: f64,
    out: Option<&Path>,
    format: Format,
) -> Result<i32, Failure> {
    let doc = Document::load(file)?;
    let (pipeline, bundled) = doc.as_pipeline()?;
    let probe = match probe {
        Some(path) => Document::load(path)?.as_probe()?,
        None => bundled.ok_or_else(|| {
            Failure::Usage("pipeline document bundles no probe; pass --probe".into())
        })?,
    };
    let trace = run_pipeline(&pipeline, &probe)?;
    let mut report = Report::new("pipeline");
    report.str("file", file.display().to_string());
    report.show("stages", pipeline.n_stages(), json!(pipeline.n_stages()));
    report.num("tolerance_bits", tol);
    for line in trace.table().lines() {
        report.note(line.to_string());
    }
    report.set(
        "trace",
        Value::Array(
            trace.bounds.iter().map(|(lo, hi)| json!([lo, hi])).collect(),
        ),
    );
    report.set("probe", Value::String(trace.probe.clone()));
    let code = match detect_memory(&trace, tol) {
        MemoryVerdict::ConsistentWithMemoryless => {
            report.str("verdict", "consistent-with-memoryless");
            EXIT_YES
        }
        MemoryVerdict::MemoryWitnessed { stage, drop_bits } => {
            report.str("verdict", "memory-witnessed");
            report.show("stage", stage, json!(stage));
            report.num("drop_bits", drop_bits);
            EXIT_NO
        }
    };
    report.emit(format, out)?;
    Ok(code)
}

fn cmd_separate(
    hull: &Path,
    point: &str,
    out: Option<&Path>,
    format: Format,
) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(hull)
        .map_err(|e| Failure::Io(format!("{}: {e}", hull.display())))?;
    let vertices: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| Failure::Io(format!("{}: {e}", hull.display())))?;
    let point: Vec<f64> = point
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Failure::Usage(format!("bad coordinate {s:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let hull = PointCloudHull::new(vertices)?;
    let mut report = Report::new("separate");
    report.show("hull_points", hull.vertices().len(), json!(hull.vertices().len()));
    report.show("dimension", hull.dim(), json!(hull.dim()));
    let code = match separate_point(&hull, &point)? {
        Separation::Inside { nearest, distance } => {
            report.str("verdict", "inside");
            report.num("distance", distance);
            report.set("nearest", json!(nearest));
            EXIT_YES
        }
        Separation::Separated(plane) => {
            let value: f64 =
                plane.normal.iter().zip(&point).map(|(a, b)| a * b).sum();
            report.str("verdict", "separated");
            report.num("threshold", plane.threshold);
            report.num("point_value", value);
            report.num("margin", value - plane.threshold);
            report.note(format!("normal: {:?}", plane.normal));
            report.set("normal", json!(plane.normal));
            EXIT_NO
        }
    };
    report.emit(format, out)?;
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_random(
    what: &str,
    seed: u64,
    inputs: usize,
    outputs: usize,
    dim_in: usize,
    dim_out: usize,
    latent: Option<usize>,
    states: usize,
    demo: Option<&str>,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let meta = Meta { label: None, seed: Some(seed), tol: None };
    let doc = match what {
        "classical-channel" => {
            let w = random_channel(inputs, outputs, &mut rng)?;
            Document::from_classical_channel(&w, meta)
        }
        "quantum-channel" => {
            let phi = QuantumChannel::random(dim_in, dim_out, &mut rng);
            Document::from_quantum_channel(&phi, meta)
        }
        "distribution" => match latent {
            None => {
                let d = random_distribution(inputs, &mut rng)?;
                Document::from_plain_distribution(&d, meta)
            }
            Some(k) => {
                let labels = (0..inputs).map(|i| i.to_string()).collect();
                let j = classical::random_joint(labels, k, &mut rng)?;
                Document::from_joint(&j, meta)
            }
        },
        "ensemble" => {
            let e = random_ensemble(dim_in, states, &mut rng)?;
            Document::from_ensemble(&e, meta)
        }
        "pipeline" => {
            let kind = demo.ok_or_else(|| {
                Failure::Usage(
                    "pipeline generation needs --demo <kind> (markov-classical, \
                     memory-classical, markov-quantum, memory-quantum)"
                        .into(),
                )
            })?;
            let demo = make_demo_pipelines(kind, seed)?;
            let meta = Meta { label: Some(format!("demo:{kind}")), ..meta };
            Document::from_pipeline(&demo.pipeline, Some(&demo.probe), meta)
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown document kind {other:?}; pick one of classical-channel, \
                 quantum-channel, distribution, ensemble, pipeline"
            )))
        }
    };
    match out {
        Some(path) => doc.save(path)?,
        None => println!("{}", doc.to_json()),
    }
    Ok(EXIT_YES)
}

fn random_distribution<R: rand::Rng>(n: usize, rng: &mut R) -> Result<Distribution, Failure> {
    if n == 0 {
        return Err(Failure::Usage("distribution needs at least one outcome".into()));
    }
    // Dirichlet(1) via normalized exponentials.
    let raw: Vec<f64> = (0..n).map(|_| -(rng.random_range(1e-12..1.0_f64)).ln()).collect();
    let total: f64 = raw.iter().sum();
    Ok(Distribution::from_probs(raw.into_iter().map(|v| v / total).collect())?)
}

fn to_value(doc: &Document) -> Value {
    serde_json::to_value(doc).expect("document serializes")
}

fn povm_value(effects: &[CMatrix]) -> Value {
    Value::Array(
        effects
            .iter()
            .map(|m| {
                Value::Array(
                    (0..m.nrows())
                        .map(|r| {
                            Value::Array(
                                (0..m.ncols())
                                    .map(|c| json!([m[(r, c)].re, m[(r, c)].im]))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn note_real_rows(report: &mut Report, m: &nalgebra::DMatrix<f64>) {
    for r in 0..m.nrows() {
        let row: Vec<f64> = (0..m.ncols()).map(|c| m[(r, c)]).collect();
        report.note(format!("  {row:?}"));
    }
}
