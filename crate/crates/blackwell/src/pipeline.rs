//! Multi-stage processing pipelines and hidden-memory detection.
//!
//! Conditional min-entropy of a latent variable can only grow under
//! memoryless processing. A pipeline that appears to violate this must be
//! consulting state that survives between stages. This module simulates
//! staged pipelines with an explicit (but unobservable) memory register,
//! records the min-entropy of a probe after every stage, and flags any
//! certified decrease.
//!
//! A stage boundary is where min-entropy is measured; the memory register
//! is traced out of every reported value but carried forward internally.
//! Quantum values are two-sided brackets, and a violation requires bracket
//! separation: the later upper endpoint must fall below an earlier lower
//! endpoint. Monotone traces are reported as consistent with memoryless
//! processing, never as proof of it: a pipeline with memory may simply
//! leave the chosen probe unharmed.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::classical::random_channel;
use crate::probability::{ClassicalChannel, JointDistribution};
use crate::quantum::channel::{DensityOperator, QuantumChannel};
use crate::quantum::linalg::{kron, partial_trace, CMatrix};
use crate::quantum::minentropy::{min_entropy_bracket, CqEnsemble};

/// One classical processing step. Memoryless stages see only the signal;
/// memory stages act jointly on signal ⊗ memory (memory register second,
/// fastest index).
#[derive(Debug, Clone)]
pub enum ClassicalStage {
    Memoryless(ClassicalChannel),
    Memory(ClassicalChannel),
}

/// One quantum processing step, with the same register layout as
/// [`ClassicalStage`].
#[derive(Debug, Clone)]
pub enum QuantumStage {
    Memoryless(QuantumChannel),
    Memory(QuantumChannel),
}

/// A staged pipeline with a persistent memory register of fixed size.
/// `memory_dim = 1` means no usable memory.
#[derive(Debug, Clone)]
pub enum Pipeline {
    Classical { stages: Vec<ClassicalStage>, memory_dim: usize },
    Quantum { stages: Vec<QuantumStage>, memory_dim: usize },
}

impl Pipeline {
    pub fn n_stages(&self) -> usize {
        match self {
            Pipeline::Classical { stages, .. } => stages.len(),
            Pipeline::Quantum { stages, .. } => stages.len(),
        }
    }
}

/// Probe fed into a pipeline: a joint distribution (latent variable on
/// the columns, signal on the rows) or an ensemble of quantum states.
#[derive(Debug, Clone)]
pub enum PipelineProbe {
    Classical(JointDistribution),
    Quantum(CqEnsemble),
}

impl PipelineProbe {
    pub fn describe(&self) -> String {
        match self {
            PipelineProbe::Classical(j) => {
                format!("classical joint probe, {} signal x {} latent", j.n_rows(), j.n_cols())
            }
            PipelineProbe::Quantum(e) => {
                format!("quantum ensemble probe, {} states of dimension {}", e.n(), e.dim())
            }
        }
    }
}

/// Min-entropy of the probe's latent variable at every stage boundary, in
/// bits. Entry 0 is the untouched probe; entry `k` follows stage `k`.
/// Classical values are exact (both endpoints equal); quantum values are
/// brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTrace {
    /// `(lower, upper)` bits per boundary.
    pub bounds: Vec<(f64, f64)>,
    /// Description of the probe the trace was recorded with.
    pub probe: String,
}

impl ProcessTrace {
    /// Tab-separated table: stage index, lower bits, upper bits, probe.
    pub fn table(&self) -> String {
        let mut out = String::from("stage\thmin_lower_bits\thmin_upper_bits\tprobe\n");
        for (k, (lo, hi)) in self.bounds.iter().enumerate() {
            // `+ 0.0` drops the sign of a negative zero.
            out.push_str(&format!(
                "{k}\t{:.9}\t{:.9}\t{}\n",
                lo + 0.0,
                hi + 0.0,
                self.probe
            ));
        }
        out
    }
}

/// Verdict of the monotonicity check. A certified decrease names the
/// first stage whose bracket sits below an earlier one.
#[derive(Debug, Clone, PartialEq)]
pub enum MemoryVerdict {
    ConsistentWithMemoryless,
    MemoryWitnessed {
        /// First stage whose reported value certifiably dropped.
        stage: usize,
        /// Certified size of the drop in bits (bracket gap, not midpoint
        /// difference).
        drop_bits: f64,
    },
}

/// Scans a trace for a certified min-entropy decrease: a boundary whose
/// upper endpoint lies more than `tol` below the best lower endpoint seen
/// at any earlier boundary. Overlapping brackets never witness.
pub fn detect_memory(trace: &ProcessTrace, tol: f64) -> MemoryVerdict {
    let mut floor = f64::NEG_INFINITY;
    for (k, &(lo, hi)) in trace.bounds.iter().enumerate() {
        if k > 0 && hi < floor - tol {
            return MemoryVerdict::MemoryWitnessed { stage: k, drop_bits: floor - hi };
        }
        floor = floor.max(lo);
    }
    MemoryVerdict::ConsistentWithMemoryless
}

/// Runs a probe through a pipeline and records the min-entropy trace.
/// The probe flavor must match the pipeline flavor.
pub fn run_pipeline(pipeline: &Pipeline, probe: &PipelineProbe) -> Result<ProcessTrace> {
    match (pipeline, probe) {
        (Pipeline::Classical { stages, memory_dim }, PipelineProbe::Classical(j)) => {
            run_classical(stages, *memory_dim, j)
        }
        (Pipeline::Quantum { stages, memory_dim }, PipelineProbe::Quantum(e)) => {
            run_quantum(stages, *memory_dim, e)
        }
        _ => Err(Error::InvalidInput(
            "probe flavor does not match pipeline flavor".into(),
        )),
    }
}

fn validate_shape(n_stages: usize, memory_dim: usize) -> Result<()> {
    if n_stages == 0 {
        return Err(Error::InvalidInput("pipeline has no stages".into()));
    }
    if memory_dim == 0 {
        return Err(Error::InvalidInput("memory register cannot be empty".into()));
    }
    Ok(())
}

/// `Σ_r max_c` of a signal × latent table.
fn table_guess(probs: &DMatrix<f64>) -> f64 {
    (0..probs.nrows())
        .map(|r| (0..probs.ncols()).map(|c| probs[(r, c)]).fold(0.0, f64::max))
        .sum()
}

fn run_classical(
    stages: &[ClassicalStage],
    memory_dim: usize,
    probe: &JointDistribution,
) -> Result<ProcessTrace> {
    validate_shape(stages.len(), memory_dim)?;
    let m = memory_dim;
    let n_u = probe.n_cols();
    let mut signal = probe.n_rows();

    // rows hold (signal, memory) with memory fastest; the register starts
    // in state 0
    let mut probs = DMatrix::<f64>::zeros(signal * m, n_u);
    for x in 0..signal {
        for u in 0..n_u {
            probs[(x * m, u)] = probe.prob(x, u);
        }
    }
    let report = |probs: &DMatrix<f64>, signal: usize| -> (f64, f64) {
        let mut traced = DMatrix::<f64>::zeros(signal, n_u);
        for x in 0..signal {
            for mu in 0..m {
                for u in 0..n_u {
                    traced[(x, u)] += probs[(x * m + mu, u)];
                }
            }
        }
        let h = -table_guess(&traced).log2();
        (h, h)
    };

    let mut bounds = vec![report(&probs, signal)];
    for (k, stage) in stages.iter().enumerate() {
        let lifted: DMatrix<f64>;
        let matrix = match stage {
            ClassicalStage::Memoryless(w) => {
                if w.n_inputs() != signal {
                    return Err(Error::DimensionMismatch(format!(
                        "stage {} expects {} signal symbols, pipeline carries {}",
                        k + 1,
                        w.n_inputs(),
                        signal
                    )));
                }
                signal = w.n_outputs();
                lifted = w.matrix().kronecker(&DMatrix::identity(m, m));
                &lifted
            }
            ClassicalStage::Memory(v) => {
                if v.n_inputs() != signal * m || v.n_outputs() % m != 0 {
                    return Err(Error::DimensionMismatch(format!(
                        "stage {} acts on {} -> {} but the register holds {} x {}",
                        k + 1,
                        v.n_inputs(),
                        v.n_outputs(),
                        signal,
                        m
                    )));
                }
                signal = v.n_outputs() / m;
                v.matrix()
            }
        };
        probs = matrix * probs;
        bounds.push(report(&probs, signal));
    }
    Ok(ProcessTrace { bounds, probe: PipelineProbe::Classical(probe.clone()).describe() })
}

fn run_quantum(
    stages: &[QuantumStage],
    memory_dim: usize,
    probe: &CqEnsemble,
) -> Result<ProcessTrace> {
    validate_shape(stages.len(), memory_dim)?;
    let m = memory_dim;
    let mut signal = probe.dim();

    let mem0 = {
        let mut z = CMatrix::zeros(m, m);
        z[(0, 0)] = crate::quantum::linalg::cplx(1.0);
        z
    };
    let mut states: Vec<CMatrix> =
        (0..probe.n()).map(|u| kron(probe.state(u).matrix(), &mem0)).collect();
    let weights: Vec<f64> = probe.probs().to_vec();

    let report = |states: &[CMatrix], signal: usize| -> Result<(f64, f64)> {
        let traced: Vec<DensityOperator> = states
            .iter()
            .map(|s| DensityOperator::new(partial_trace(s, &[signal, m], &[0])))
            .collect::<Result<Vec<_>>>()?;
        let e = CqEnsemble::new(weights.clone(), traced)?;
        let b = min_entropy_bracket(&e)?;
        Ok((b.lower_bits, b.upper_bits))
    };

    let mut bounds = vec![report(&states, signal)?];
    for (k, stage) in stages.iter().enumerate() {
        let channel = match stage {
            QuantumStage::Memoryless(phi) => {
                if phi.dim_in() != signal {
                    return Err(Error::DimensionMismatch(format!(
                        "stage {} expects signal dimension {}, pipeline carries {}",
                        k + 1,
                        phi.dim_in(),
                        signal
                    )));
                }
                signal = phi.dim_out();
                QuantumChannel::tensor(phi, &QuantumChannel::identity(m))
            }
            QuantumStage::Memory(v) => {
                if v.dim_in() != signal * m || v.dim_out() % m != 0 {
                    return Err(Error::DimensionMismatch(format!(
                        "stage {} acts on {} -> {} but the register holds {} x {}",
                        k + 1,
                        v.dim_in(),
                        v.dim_out(),
                        signal,
                        m
                    )));
                }
                signal = v.dim_out() / m;
                v.clone()
            }
        };
        for s in states.iter_mut() {
            *s = channel.apply_matrix(s);
        }
        bounds.push(report(&states, signal)?);
    }
    Ok(ProcessTrace { bounds, probe: PipelineProbe::Quantum(probe.clone()).describe() })
}

/// A ready-to-run demonstration pipeline with a probe chosen to exhibit
/// its character.
#[derive(Debug, Clone)]
pub struct DemoPipeline {
    pub pipeline: Pipeline,
    pub probe: PipelineProbe,
    /// Stage at which the bundled probe certifiably drops, for pipelines
    /// built to use their memory.
    pub violation_stage: Option<usize>,
}

/// Deterministic named demonstrations: `markov-classical` and
/// `markov-quantum` chain memoryless stages (monotone traces),
/// `memory-classical` and `memory-quantum` stash the signal in the
/// register, erase it, and restore it, certifiably lowering min-entropy
/// at the restore stage.
pub fn make_demo_pipelines(kind: &str, seed: u64) -> Result<DemoPipeline> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        "markov-classical" => {
            let stages = (0..3)
                .map(|_| Ok(ClassicalStage::Memoryless(random_channel(3, 3, &mut rng)?)))
                .collect::<Result<Vec<_>>>()?;
            let probe = JointDistribution::correlated(
                &crate::probability::Distribution::uniform(3)?,
            );
            Ok(DemoPipeline {
                pipeline: Pipeline::Classical { stages, memory_dim: 1 },
                probe: PipelineProbe::Classical(probe),
                violation_stage: None,
            })
        }
        "memory-classical" => {
            // stash the signal, erase it, then read it back: the reported
            // min-entropy rises to one bit and certifiably returns to zero
            let copy = ClassicalChannel::from_entries(deterministic_table(4, |i| {
                let (x, _) = (i / 2, i % 2);
                x * 2 + x
            }))?;
            let erase = ClassicalChannel::from_entries(deterministic_table(2, |_| 0))?;
            let restore = ClassicalChannel::from_entries(deterministic_table(4, |i| {
                let mu = i % 2;
                mu * 2 + mu
            }))?;
            let stages = vec![
                ClassicalStage::Memory(copy),
                ClassicalStage::Memoryless(erase),
                ClassicalStage::Memory(restore),
            ];
            let probe = JointDistribution::correlated(
                &crate::probability::Distribution::uniform(2)?,
            );
            Ok(DemoPipeline {
                pipeline: Pipeline::Classical { stages, memory_dim: 2 },
                probe: PipelineProbe::Classical(probe),
                violation_stage: Some(3),
            })
        }
        "markov-quantum" => {
            let stages = vec![
                QuantumStage::Memoryless(QuantumChannel::depolarizing(2, 0.9)?),
                QuantumStage::Memoryless(QuantumChannel::depolarizing(2, 0.8)?),
            ];
            Ok(DemoPipeline {
                pipeline: Pipeline::Quantum { stages, memory_dim: 1 },
                probe: PipelineProbe::Quantum(basis_probe()?),
                violation_stage: None,
            })
        }
        "memory-quantum" => {
            let copy = QuantumChannel::from_unitary(&permutation_unitary(4, |i| {
                let (s, mu) = (i / 2, i % 2);
                s * 2 + (mu ^ s)
            }))?;
            let swap = QuantumChannel::from_unitary(&permutation_unitary(4, |i| {
                let (s, mu) = (i / 2, i % 2);
                mu * 2 + s
            }))?;
            let stages = vec![
                QuantumStage::Memory(copy),
                QuantumStage::Memoryless(QuantumChannel::depolarizing(2, 0.0)?),
                QuantumStage::Memory(swap),
            ];
            Ok(DemoPipeline {
                pipeline: Pipeline::Quantum { stages, memory_dim: 2 },
                probe: PipelineProbe::Quantum(basis_probe()?),
                violation_stage: Some(3),
            })
        }
        other => Err(Error::InvalidInput(format!(
            "unknown demo kind {other:?}; expected markov-classical, markov-quantum, \
             memory-classical, or memory-quantum"
        ))),
    }
}

/// Column-stochastic 0/1 table sending input `i` to output `f(i)`.
fn deterministic_table(n: usize, f: impl Fn(usize) -> usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![0.0; n]; n];
    for i in 0..n {
        t[f(i)][i] = 1.0;
    }
    t
}

fn permutation_unitary(n: usize, f: impl Fn(usize) -> usize) -> CMatrix {
    let mut u = CMatrix::zeros(n, n);
    for i in 0..n {
        u[(f(i), i)] = crate::quantum::linalg::cplx(1.0);
    }
    u
}

fn basis_probe() -> Result<CqEnsemble> {
    CqEnsemble::new(
        vec![0.5, 0.5],
        vec![DensityOperator::basis(2, 0)?, DensityOperator::basis(2, 1)?],
    )
}

/// Convenience wrapper: a chain of memoryless classical channels.
pub fn memoryless_classical(channels: Vec<ClassicalChannel>) -> Pipeline {
    Pipeline::Classical {
        stages: channels.into_iter().map(ClassicalStage::Memoryless).collect(),
        memory_dim: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probability::Distribution;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn bsc(p: f64) -> ClassicalChannel {
        ClassicalChannel::binary_symmetric(p).unwrap()
    }

    fn uniform_pair() -> JointDistribution {
        JointDistribution::correlated(&Distribution::uniform(2).unwrap())
    }

    #[test]
    fn identity_stage_leaves_the_trace_flat() {
        let pipe = memoryless_classical(vec![ClassicalChannel::identity(2).unwrap()]);
        let trace =
            run_pipeline(&pipe, &PipelineProbe::Classical(uniform_pair())).unwrap();
        assert_eq!(trace.bounds.len(), 2);
        assert_abs_diff_eq!(trace.bounds[0].0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace.bounds[1].0, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn repeated_symmetric_noise_accumulates() {
        let pipe = memoryless_classical(vec![bsc(0.1), bsc(0.1)]);
        let trace =
            run_pipeline(&pipe, &PipelineProbe::Classical(uniform_pair())).unwrap();
        // crossover compounds to 0.18, so the best decoders succeed with
        // probability 1, 0.9, and 0.82
        let expected = [1.0f64, 0.9, 0.82].map(|p| -p.log2());
        for (b, e) in trace.bounds.iter().zip(expected) {
            assert_abs_diff_eq!(b.0, e, epsilon = 1e-9);
            assert_abs_diff_eq!(b.1, e, epsilon = 1e-9);
        }
        assert_eq!(detect_memory(&trace, 1e-6), MemoryVerdict::ConsistentWithMemoryless);
    }

    #[test]
    fn erased_then_restored_signal_is_witnessed() {
        let demo = make_demo_pipelines("memory-classical", 0).unwrap();
        let trace = run_pipeline(&demo.pipeline, &demo.probe).unwrap();
        let values: Vec<f64> = trace.bounds.iter().map(|b| b.0).collect();
        for (got, want) in values.iter().zip([0.0, 0.0, 1.0, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        match detect_memory(&trace, 1e-6) {
            MemoryVerdict::MemoryWitnessed { stage, drop_bits } => {
                assert_eq!(stage, demo.violation_stage.unwrap());
                assert!(drop_bits >= 0.5, "drop {drop_bits}");
            }
            MemoryVerdict::ConsistentWithMemoryless => panic!("restore stage not caught"),
        }
    }

    #[test]
    fn quantum_memory_demo_is_witnessed() {
        let demo = make_demo_pipelines("memory-quantum", 0).unwrap();
        let trace = run_pipeline(&demo.pipeline, &demo.probe).unwrap();
        assert_eq!(trace.bounds.len(), 4);
        match detect_memory(&trace, 1e-6) {
            MemoryVerdict::MemoryWitnessed { stage, drop_bits } => {
                assert_eq!(stage, 3);
                assert!(drop_bits >= 0.5, "drop {drop_bits}");
            }
            MemoryVerdict::ConsistentWithMemoryless => panic!("restore stage not caught"),
        }
    }

    #[test]
    fn markov_demos_stay_consistent() {
        for kind in ["markov-classical", "markov-quantum"] {
            let demo = make_demo_pipelines(kind, 7).unwrap();
            let trace = run_pipeline(&demo.pipeline, &demo.probe).unwrap();
            assert_eq!(
                detect_memory(&trace, 1e-6),
                MemoryVerdict::ConsistentWithMemoryless,
                "{kind} flagged its own memoryless chain"
            );
            for w in trace.bounds.windows(2) {
                assert!(w[1].1 >= w[0].0 - 1e-9, "monotonicity broke in {kind}");
            }
        }
    }

    #[test]
    fn depolarizing_chain_has_the_exact_bracket_trace() {
        let demo = make_demo_pipelines("markov-quantum", 0).unwrap();
        let trace = run_pipeline(&demo.pipeline, &demo.probe).unwrap();
        // basis probe through shrink factors 1, 0.9, 0.72: success halves
        // plus half the factor
        let expected = [1.0f64, 0.95, 0.86].map(|p| -p.log2());
        for (b, e) in trace.bounds.iter().zip(expected) {
            assert_abs_diff_eq!(b.0, e, epsilon = 1e-9);
            assert_abs_diff_eq!(b.1, e, epsilon = 1e-9);
        }
    }

    #[test]
    fn scribbling_on_the_register_is_invisible() {
        // writes into memory depend on the signal, but the signal itself
        // passes through untouched
        let stash = ClassicalChannel::from_entries(deterministic_table(4, |i| {
            let (x, _) = (i / 2, i % 2);
            x * 2 + x
        }))
        .unwrap();
        let pipe = Pipeline::Classical {
            stages: vec![ClassicalStage::Memory(stash)],
            memory_dim: 2,
        };
        let trace = run_pipeline(&pipe, &PipelineProbe::Classical(uniform_pair())).unwrap();
        assert_abs_diff_eq!(trace.bounds[0].0, trace.bounds[1].0, epsilon = 1e-12);
    }

    #[test]
    fn flavor_and_shape_mismatches_error() {
        let classical = memoryless_classical(vec![bsc(0.1)]);
        let quantum_probe = PipelineProbe::Quantum(basis_probe().unwrap());
        assert!(run_pipeline(&classical, &quantum_probe).is_err());

        let empty = Pipeline::Classical { stages: vec![], memory_dim: 1 };
        assert!(run_pipeline(&empty, &PipelineProbe::Classical(uniform_pair())).is_err());

        let wrong = memoryless_classical(vec![
            ClassicalChannel::identity(3).unwrap(),
        ]);
        assert!(run_pipeline(&wrong, &PipelineProbe::Classical(uniform_pair())).is_err());

        assert!(make_demo_pipelines("markov-sideways", 0).is_err());
    }

    #[test]
    fn overlapping_brackets_never_witness() {
        let trace = ProcessTrace {
            bounds: vec![(0.9, 1.1), (0.85, 1.05), (0.95, 1.2)],
            probe: "synthetic".into(),
        };
        assert_eq!(detect_memory(&trace, 1e-6), MemoryVerdict::ConsistentWithMemoryless);
    }

    #[test]
    fn separation_against_any_earlier_boundary_witnesses() {
        // consecutive brackets overlap, but boundary 2 sits clear of
        // boundary 0
        let trace = ProcessTrace {
            bounds: vec![(0.9, 1.1), (0.6, 1.0), (0.3, 0.7)],
            probe: "synthetic".into(),
        };
        match detect_memory(&trace, 1e-6) {
            MemoryVerdict::MemoryWitnessed { stage, drop_bits } => {
                assert_eq!(stage, 2);
                assert_abs_diff_eq!(drop_bits, 0.2, epsilon = 1e-12);
            }
            MemoryVerdict::ConsistentWithMemoryless => panic!("separation missed"),
        }
    }

    #[test]
    fn random_memoryless_chains_never_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let stages: Vec<ClassicalStage> = (0..3)
                .map(|_| ClassicalStage::Memoryless(random_channel(3, 3, &mut rng).unwrap()))
                .collect();
            let pipe = Pipeline::Classical { stages, memory_dim: 1 };
            let probe = PipelineProbe::Classical(
                crate::classical::random_joint(
                    vec!["a".into(), "b".into(), "c".into()],
                    3,
                    &mut rng,
                )
                .unwrap(),
            );
            let trace = run_pipeline(&pipe, &probe).unwrap();
            assert_eq!(detect_memory(&trace, 1e-6), MemoryVerdict::ConsistentWithMemoryless);
        }
    }

    #[test]
    fn table_lists_every_boundary() {
        let demo = make_demo_pipelines("memory-classical", 0).unwrap();
        let trace = run_pipeline(&demo.pipeline, &demo.probe).unwrap();
        let table = trace.table();
        assert_eq!(table.lines().count(), 1 + trace.bounds.len());
        assert!(table.lines().nth(4).unwrap().starts_with("3\t"));
    }

    proptest! {
        // a witness must always point at a genuine bracket separation
        #[test]
        fn detector_soundness(raw in proptest::collection::vec((0.0f64..2.0, 0.0f64..0.5), 2..12)) {
            let bounds: Vec<(f64, f64)> = raw.iter().map(|&(lo, w)| (lo, lo + w)).collect();
            let trace = ProcessTrace { bounds: bounds.clone(), probe: "generated".into() };
            if let MemoryVerdict::MemoryWitnessed { stage, drop_bits } = detect_memory(&trace, 1e-6) {
                let floor = bounds[..stage].iter().map(|b| b.0).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(bounds[stage].1 < floor - 1e-6);
                prop_assert!((drop_bits - (floor - bounds[stage].1)).abs() < 1e-12);
            }
        }

        // memoryless single-stage classical processing never lowers the
        // reported min-entropy
        #[test]
        fn single_stage_monotone(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = random_channel(3, 3, &mut rng).unwrap();
            let probe = crate::classical::random_joint(
                vec!["a".into(), "b".into(), "c".into()],
                3,
                &mut rng,
            ).unwrap();
            let pipe = memoryless_classical(vec![w]);
            let trace = run_pipeline(&pipe, &PipelineProbe::Classical(probe)).unwrap();
            prop_assert!(trace.bounds[1].0 >= trace.bounds[0].0 - 1e-10);
        }
    }
}
