//! Finite probability: distributions, joints, stochastic channels, and the
//! entropy quantities the comparison machinery is built on.
//!
//! Conventions used throughout the crate:
//! - alphabets are ordered lists of string labels; indices derive from order;
//! - a joint distribution is stored with the observed system on rows and the
//!   payload (the variable being guessed) on columns;
//! - channel matrices are column-stochastic with entry `(y, x)` holding
//!   `w(y|x)`;
//! - entropies are in bits and `0·log 0 = 0`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Normalization slack accepted at construction.
pub const PROB_TOL: f64 = 1e-12;

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn validate_entry(v: f64, what: &str) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::InvalidDistribution(format!("{what} is not finite")));
    }
    if v < -PROB_TOL {
        return Err(Error::InvalidDistribution(format!("{what} is negative ({v})")));
    }
    Ok(v.max(0.0))
}

fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Probability distribution over a labelled finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Entries must be nonnegative and sum to 1 within [`PROB_TOL`].
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} probabilities",
                labels.len(),
                probs.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        let mut clean = Vec::with_capacity(probs.len());
        for (i, &p) in probs.iter().enumerate() {
            clean.push(validate_entry(p, &format!("entry {i}"))?);
        }
        let total: f64 = clean.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self { labels, probs: clean })
    }

    /// Distribution with labels `"0"`, `"1"`, ... derived from position.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let labels = default_labels("", probs.len());
        Self::new(labels, probs)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_probs(vec![1.0 / n as f64; n])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Joint distribution over (observed system, payload).
///
/// Rows index the system that channels act on; columns index the payload
/// that stays fixed and is later guessed from the row variable.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    /// `probs[(r, c)] = p(row = r, col = c)`.
    probs: DMatrix<f64>,
}

impl JointDistribution {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        entries: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let nr = row_labels.len();
        let nc = col_labels.len();
        if nr == 0 || nc == 0 {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        if entries.len() != nr || entries.iter().any(|row| row.len() != nc) {
            return Err(Error::DimensionMismatch(format!(
                "joint table is not {nr}x{nc}"
            )));
        }
        let mut probs = DMatrix::zeros(nr, nc);
        let mut total = 0.0;
        for (r, row) in entries.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let v = validate_entry(v, &format!("entry ({r},{c})"))?;
                probs[(r, c)] = v;
                total += v;
            }
        }
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self { row_labels, col_labels, probs })
    }

    /// Joint table with positional labels on both axes.
    pub fn from_entries(entries: Vec<Vec<f64>>) -> Result<Self> {
        let nr = entries.len();
        let nc = entries.first().map_or(0, |r| r.len());
        Self::new(default_labels("", nr), default_labels("", nc), entries)
    }

    /// Perfectly correlated pair: `p(x, u) = d(x)·[x = u]`.
    pub fn correlated(d: &Distribution) -> Self {
        let n = d.len();
        let mut probs = DMatrix::zeros(n, n);
        for i in 0..n {
            probs[(i, i)] = d.probs()[i];
        }
        Self {
            row_labels: d.labels().to_vec(),
            col_labels: d.labels().to_vec(),
            probs,
        }
    }

    /// Independent product `p(x, u) = row(x)·col(u)`.
    pub fn product(row: &Distribution, col: &Distribution) -> Self {
        let mut probs = DMatrix::zeros(row.len(), col.len());
        for r in 0..row.len() {
            for c in 0..col.len() {
                probs[(r, c)] = row.probs()[r] * col.probs()[c];
            }
        }
        Self {
            row_labels: row.labels().to_vec(),
            col_labels: col.labels().to_vec(),
            probs,
        }
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn n_rows(&self) -> usize {
        self.probs.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.probs.ncols()
    }

    pub fn prob(&self, r: usize, c: usize) -> f64 {
        self.probs[(r, c)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.probs
    }

    pub fn row_marginal(&self) -> Distribution {
        let probs: Vec<f64> = (0..self.n_rows()).map(|r| self.probs.row(r).sum()).collect();
        Distribution { labels: self.row_labels.clone(), probs }
    }

    pub fn col_marginal(&self) -> Distribution {
        let probs: Vec<f64> = (0..self.n_cols()).map(|c| self.probs.column(c).sum()).collect();
        Distribution { labels: self.col_labels.clone(), probs }
    }

    /// Applies `w` to the row variable; the column marginal is preserved
    /// exactly because each column transforms by a stochastic matrix.
    pub fn push_through_channel(&self, w: &ClassicalChannel) -> Result<JointDistribution> {
        if w.input_labels() != self.row_labels.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "channel inputs {:?} do not match joint rows {:?}",
                w.input_labels(),
                self.row_labels
            )));
        }
        Ok(JointDistribution {
            row_labels: w.output_labels().to_vec(),
            col_labels: self.col_labels.clone(),
            probs: w.matrix() * &self.probs,
        })
    }
}

/// Column-stochastic channel between labelled alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalChannel {
    input_labels: Vec<String>,
    output_labels: Vec<String>,
    /// `matrix[(y, x)] = w(y|x)`; every column sums to 1.
    matrix: DMatrix<f64>,
}

impl ClassicalChannel {
    pub fn new(
        input_labels: Vec<String>,
        output_labels: Vec<String>,
        entries: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n_in = input_labels.len();
        let n_out = output_labels.len();
        if n_in == 0 || n_out == 0 {
            return Err(Error::InvalidChannel("empty alphabet".into()));
        }
        if entries.len() != n_out || entries.iter().any(|row| row.len() != n_in) {
            return Err(Error::DimensionMismatch(format!(
                "channel table is not {n_out}x{n_in}"
            )));
        }
        let mut matrix = DMatrix::zeros(n_out, n_in);
        for (y, row) in entries.iter().enumerate() {
            for (x, &v) in row.iter().enumerate() {
                matrix[(y, x)] = validate_entry(v, &format!("entry ({y},{x})"))
                    .map_err(|_| Error::InvalidChannel(format!("entry ({y},{x}) is {v}")))?;
            }
        }
        for x in 0..n_in {
            let col: f64 = matrix.column(x).sum();
            if (col - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidChannel(format!(
                    "column {x} sums to {col}, not 1"
                )));
            }
        }
        Ok(Self { input_labels, output_labels, matrix })
    }

    /// Channel with positional labels on both alphabets.
    pub fn from_entries(entries: Vec<Vec<f64>>) -> Result<Self> {
        let n_out = entries.len();
        let n_in = entries.first().map_or(0, |r| r.len());
        Self::new(default_labels("", n_in), default_labels("", n_out), entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|y| (0..n).map(|x| if x == y { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::from_entries(rows)
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn binary_symmetric(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("crossover {p} outside [0,1]")));
        }
        Self::from_entries(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Binary erasure channel; outputs are `0`, `e`, `1` in that order.
    pub fn binary_erasure(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("erasure prob {p} outside [0,1]")));
        }
        Self::new(
            vec!["0".into(), "1".into()],
            vec!["0".into(), "e".into(), "1".into()],
            vec![vec![1.0 - p, 0.0], vec![p, p], vec![0.0, 1.0 - p]],
        )
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    pub fn n_inputs(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn n_outputs(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.matrix[(y, x)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `later ∘ earlier`: feeds this channel's output into `later`.
    pub fn compose(later: &Self, earlier: &Self) -> Result<Self> {
        if later.input_labels != earlier.output_labels {
            return Err(Error::DimensionMismatch(format!(
                "composition alphabets differ: {:?} vs {:?}",
                later.input_labels, earlier.output_labels
            )));
        }
        Ok(Self {
            input_labels: earlier.input_labels.clone(),
            output_labels: later.output_labels.clone(),
            matrix: later.matrix() * earlier.matrix(),
        })
    }

    /// Kronecker lift acting as `self` on the first factor and identity on a
    /// second factor of size `m`; product labels are `"{a}.{b}"`.
    pub fn tensor_identity_right(&self, m_labels: &[String]) -> Self {
        let m = m_labels.len();
        let mut matrix = DMatrix::zeros(self.n_outputs() * m, self.n_inputs() * m);
        for y in 0..self.n_outputs() {
            for x in 0..self.n_inputs() {
                let v = self.matrix[(y, x)];
                if v != 0.0 {
                    for k in 0..m {
                        matrix[(y * m + k, x * m + k)] = v;
                    }
                }
            }
        }
        let pair = |a: &[String], b: &[String]| -> Vec<String> {
            a.iter()
                .flat_map(|s| b.iter().map(move |t| format!("{s}.{t}")))
                .collect()
        };
        Self {
            input_labels: pair(&self.input_labels, m_labels),
            output_labels: pair(&self.output_labels, m_labels),
            matrix,
        }
    }
}

/// Shannon entropy in bits.
pub fn shannon_entropy(d: &Distribution) -> f64 {
    d.probs().iter().copied().map(entropy_term).sum()
}

fn joint_entropy(j: &JointDistribution) -> f64 {
    j.matrix().iter().copied().map(entropy_term).sum()
}

/// `H(col | row)` in bits, via the chain rule `H(joint) − H(row marginal)`.
pub fn conditional_entropy(j: &JointDistribution) -> f64 {
    joint_entropy(j) - shannon_entropy(&j.row_marginal())
}

/// Mutual information between the two variables of a joint, in bits.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    shannon_entropy(&j.row_marginal()) + shannon_entropy(&j.col_marginal()) - joint_entropy(j)
}

/// Probability of guessing the column variable from one look at the row
/// variable, using the best decoder: `Σ_r max_c p(r, c)`.
pub fn guessing_probability(j: &JointDistribution) -> f64 {
    (0..j.n_rows())
        .map(|r| {
            (0..j.n_cols())
                .map(|c| j.prob(r, c))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .sum()
}

/// Best deterministic decoder row → column; ties resolve to the lowest
/// column index so extraction is reproducible.
pub fn optimal_decoder(j: &JointDistribution) -> Vec<usize> {
    (0..j.n_rows())
        .map(|r| {
            let mut best = 0;
            for c in 1..j.n_cols() {
                if j.prob(r, c) > j.prob(r, best) {
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// Conditional min-entropy `−log₂ P_guess` in bits.
pub fn conditional_min_entropy(j: &JointDistribution) -> f64 {
    -guessing_probability(j).log2()
}
