//! On-disk document model.
//!
//! Every file the CLI reads or writes is one JSON object tagged with a
//! `kind` field. Tables are row-major nested arrays, complex entries are
//! `[re, im]` pairs, and dimensions are stored explicitly so a malformed
//! table fails with a clear message instead of a shape guess. Loading a
//! document always runs it through the library constructors, so anything
//! that parses also satisfies the type invariants (stochastic columns,
//! unit-trace Choi operator with the right marginal, and so on).

use std::fs;
use std::path::Path;

use blackwell::pipeline::{ClassicalStage, Pipeline, PipelineProbe, QuantumStage};
use blackwell::probability::{ClassicalChannel, Distribution, JointDistribution};
use blackwell::quantum::channel::{DensityOperator, QuantumChannel};
use blackwell::quantum::linalg::CMatrix;
use blackwell::quantum::minentropy::CqEnsemble;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Complex scalar on disk: `[re, im]`.
pub type Cpx = [f64; 2];

/// Optional annotations carried by every document.
#[derive(Serialize, Deserialize, Clone, Debug, Default, PartialEq)]
#[serde(default)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Per-file tolerance override; a command-line flag still wins.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn meta_is_empty(m: &Meta) -> bool {
    *m == Meta::default()
}

/// One pipeline stage: the wrapped channel plus whether it may read and
/// write the hidden register. Memoryless stages act on the signal alone.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Stage {
    pub uses_memory: bool,
    pub channel: Document,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    ClassicalChannel {
        #[serde(default, skip_serializing_if = "meta_is_empty")]
        meta: Meta,
        n_inputs: usize,
        n_outputs: usize,
        /// Row `y` holds `w(y|x)` for each input `x`; columns sum to 1.
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        input_labels: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        output_labels: Option<Vec<String>>,
    },
    QuantumChannel {
        #[serde(default, skip_serializing_if = "meta_is_empty")]
        meta: Meta,
        dim_in: usize,
        dim_out: usize,
        /// Choi operator with unit trace, `(input copy, output)` ordering.
        choi: Vec<Vec<Cpx>>,
    },
    /// Either a plain probability vector (`probs`) or a joint table over
    /// `(observed row, latent column)` (`joint`). Exactly one is present.
    Distribution {
        #[serde(default, skip_serializing_if = "meta_is_empty")]
        meta: Meta,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probs: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        joint: Option<Vec<Vec<f64>>>,
    },
    Ensemble {
        #[serde(default, skip_serializing_if = "meta_is_empty")]
        meta: Meta,
        dim: usize,
        weights: Vec<f64>,
        /// One density matrix per weight, row-major.
        states: Vec<Vec<Vec<Cpx>>>,
    },
    Pipeline {
        #[serde(default, skip_serializing_if = "meta_is_empty")]
        meta: Meta,
        memory_dim: usize,
        stages: Vec<Stage>,
        /// Bundled input: a joint-distribution document for classical
        /// pipelines, an ensemble document for quantum ones.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe: Option<Box<Document>>,
    },
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::ClassicalChannel { .. } => "classical-channel",
            Document::QuantumChannel { .. } => "quantum-channel",
            Document::Distribution { .. } => "distribution",
            Document::Ensemble { .. } => "ensemble",
            Document::Pipeline { .. } => "pipeline",
        }
    }

    pub fn meta(&self) -> &Meta {
        match self {
            Document::ClassicalChannel { meta, .. }
            | Document::QuantumChannel { meta, .. }
            | Document::Distribution { meta, .. }
            | Document::Ensemble { meta, .. }
            | Document::Pipeline { meta, .. } => meta,
        }
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        // The document enum has no map keys or non-finite floats, so
        // serialization cannot fail.
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn save(&self, path: &Path) -> Result<(), Failure> {
        fs::write(path, self.to_json() + "\n")
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }

    pub fn as_classical_channel(&self) -> Result<ClassicalChannel, Failure> {
        let Document::ClassicalChannel {
            n_inputs, n_outputs, matrix, input_labels, output_labels, ..
        } = self
        else {
            return Err(self.wrong_kind("classical-channel"));
        };
        if matrix.len() != *n_outputs || matrix.iter().any(|r| r.len() != *n_inputs) {
            return Err(Failure::Usage(format!(
                "channel table is not {n_outputs}x{n_inputs} as declared"
            )));
        }
        let w = match (input_labels, output_labels) {
            (Some(inp), Some(out)) => {
                ClassicalChannel::new(inp.clone(), out.clone(), matrix.clone())
            }
            (None, None) => ClassicalChannel::from_entries(matrix.clone()),
            _ => {
                return Err(Failure::Usage(
                    "give both label lists or neither".into(),
                ))
            }
        };
        w.map_err(Failure::from)
    }

    pub fn as_quantum_channel(&self) -> Result<QuantumChannel, Failure> {
        let Document::QuantumChannel { dim_in, dim_out, choi, .. } = self else {
            return Err(self.wrong_kind("quantum-channel"));
        };
        let d = dim_in * dim_out;
        let chi = cmatrix_from_rows(choi, d, d)?;
        QuantumChannel::from_choi(chi, *dim_in, *dim_out).map_err(Failure::from)
    }

    pub fn as_plain_distribution(&self) -> Result<Distribution, Failure> {
        let Document::Distribution { probs: Some(p), joint: None, .. } = self else {
            return Err(Failure::Usage(format!(
                "expected a plain probability vector, found {}",
                self.shape_name()
            )));
        };
        Distribution::from_probs(p.clone()).map_err(Failure::from)
    }

    pub fn as_joint(&self) -> Result<JointDistribution, Failure> {
        let Document::Distribution { probs: None, joint: Some(j), .. } = self else {
            return Err(Failure::Usage(format!(
                "expected a joint table, found {}",
                self.shape_name()
            )));
        };
        JointDistribution::from_entries(j.clone()).map_err(Failure::from)
    }

    fn shape_name(&self) -> String {
        match self {
            Document::Distribution { probs: Some(_), joint: Some(_), .. } => {
                "a distribution with both probs and joint".into()
            }
            Document::Distribution { probs: None, joint: None, .. } => {
                "a distribution with neither probs nor joint".into()
            }
            Document::Distribution { probs: Some(_), .. } => {
                "a plain probability vector".into()
            }
            Document::Distribution { joint: Some(_), .. } => "a joint table".into(),
            other => format!("a {} document", other.kind()),
        }
    }

    pub fn as_ensemble(&self) -> Result<CqEnsemble, Failure> {
        let Document::Ensemble { dim, weights, states, .. } = self else {
            return Err(self.wrong_kind("ensemble"));
        };
        let rho: Vec<DensityOperator> = states
            .iter()
            .map(|s| {
                DensityOperator::new(cmatrix_from_rows(s, *dim, *dim)?)
                    .map_err(Failure::from)
            })
            .collect::<Result<_, _>>()?;
        CqEnsemble::new(weights.clone(), rho).map_err(Failure::from)
    }

    /// A probe document is a joint table (classical signal) or an ensemble
    /// (quantum signal).
    pub fn as_probe(&self) -> Result<PipelineProbe, Failure> {
        match self {
            Document::Distribution { .. } => Ok(PipelineProbe::Classical(self.as_joint()?)),
            Document::Ensemble { .. } => Ok(PipelineProbe::Quantum(self.as_ensemble()?)),
            other => Err(Failure::Usage(format!(
                "a probe must be a joint distribution or an ensemble, not {}",
                other.kind()
            ))),
        }
    }

    pub fn as_pipeline(&self) -> Result<(Pipeline, Option<PipelineProbe>), Failure> {
        let Document::Pipeline { memory_dim, stages, probe, .. } = self else {
            return Err(self.wrong_kind("pipeline"));
        };
        let Some(first) = stages.first() else {
            return Err(Failure::Usage("pipeline has no stages".into()));
        };
        let pipeline = match first.channel {
            Document::ClassicalChannel { .. } => {
                let stages = stages
                    .iter()
                    .map(|s| {
                        let w = s.channel.as_classical_channel()?;
                        Ok(if s.uses_memory {
                            ClassicalStage::Memory(w)
                        } else {
                            ClassicalStage::Memoryless(w)
                        })
                    })
                    .collect::<Result<_, Failure>>()?;
                Pipeline::Classical { stages, memory_dim: *memory_dim }
            }
            Document::QuantumChannel { .. } => {
                let stages = stages
                    .iter()
                    .map(|s| {
                        let phi = s.channel.as_quantum_channel()?;
                        Ok(if s.uses_memory {
                            QuantumStage::Memory(phi)
                        } else {
                            QuantumStage::Memoryless(phi)
                        })
                    })
                    .collect::<Result<_, Failure>>()?;
                Pipeline::Quantum { stages, memory_dim: *memory_dim }
            }
            ref other => {
                return Err(Failure::Usage(format!(
                    "pipeline stages must wrap channels, not {}",
                    other.kind()
                )))
            }
        };
        let probe = probe.as_deref().map(Document::as_probe).transpose()?;
        Ok((pipeline, probe))
    }

    fn wrong_kind(&self, wanted: &str) -> Failure {
        Failure::Usage(format!("expected a {wanted} document, found {}", self.kind()))
    }

    pub fn from_classical_channel(w: &ClassicalChannel, meta: Meta) -> Document {
        Document::ClassicalChannel {
            meta,
            n_inputs: w.n_inputs(),
            n_outputs: w.n_outputs(),
            matrix: dmatrix_rows(w.matrix()),
            input_labels: Some(w.input_labels().to_vec()),
            output_labels: Some(w.output_labels().to_vec()),
        }
    }

    pub fn from_quantum_channel(phi: &QuantumChannel, meta: Meta) -> Document {
        Document::QuantumChannel {
            meta,
            dim_in: phi.dim_in(),
            dim_out: phi.dim_out(),
            choi: cmatrix_rows(phi.choi()),
        }
    }

    pub fn from_plain_distribution(d: &Distribution, meta: Meta) -> Document {
        Document::Distribution { meta, probs: Some(d.probs().to_vec()), joint: None }
    }

    pub fn from_joint(j: &JointDistribution, meta: Meta) -> Document {
        Document::Distribution { meta, probs: None, joint: Some(dmatrix_rows(j.matrix())) }
    }

    pub fn from_ensemble(e: &CqEnsemble, meta: Meta) -> Document {
        Document::Ensemble {
            meta,
            dim: e.dim(),
            weights: e.probs().to_vec(),
            states: e.states().iter().map(|s| cmatrix_rows(s.matrix())).collect(),
        }
    }

    pub fn from_pipeline(p: &Pipeline, probe: Option<&PipelineProbe>, meta: Meta) -> Document {
        let (memory_dim, stages) = match p {
            Pipeline::Classical { stages, memory_dim } => {
                let stages = stages
                    .iter()
                    .map(|s| match s {
                        ClassicalStage::Memoryless(w) => Stage {
                            uses_memory: false,
                            channel: Document::from_classical_channel(w, Meta::default()),
                        },
                        ClassicalStage::Memory(w) => Stage {
                            uses_memory: true,
                            channel: Document::from_classical_channel(w, Meta::default()),
                        },
                    })
                    .collect();
                (*memory_dim, stages)
            }
            Pipeline::Quantum { stages, memory_dim } => {
                let stages = stages
                    .iter()
                    .map(|s| match s {
                        QuantumStage::Memoryless(phi) => Stage {
                            uses_memory: false,
                            channel: Document::from_quantum_channel(phi, Meta::default()),
                        },
                        QuantumStage::Memory(phi) => Stage {
                            uses_memory: true,
                            channel: Document::from_quantum_channel(phi, Meta::default()),
                        },
                    })
                    .collect();
                (*memory_dim, stages)
            }
        };
        let probe = probe.map(|pr| {
            Box::new(match pr {
                PipelineProbe::Classical(j) => Document::from_joint(j, Meta::default()),
                PipelineProbe::Quantum(e) => Document::from_ensemble(e, Meta::default()),
            })
        });
        Document::Pipeline { meta, memory_dim, stages, probe }
    }
}

fn dmatrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

fn cmatrix_rows(m: &CMatrix) -> Vec<Vec<Cpx>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn cmatrix_from_rows(rows: &[Vec<Cpx>], nr: usize, nc: usize) -> Result<CMatrix, Failure> {
    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
        return Err(Failure::Usage(format!(
            "matrix is not {nr}x{nc} as its dimensions declare"
        )));
    }
    Ok(CMatrix::from_fn(nr, nc, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1])))
}
