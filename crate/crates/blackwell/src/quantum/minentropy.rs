//! Guessing probability and conditional min-entropy of classical-quantum
//! ensembles.
//!
//! `P_guess = max over measurements of Σ_u p(u)·Tr[E_u ρ_u]` is computed as
//! a certified bracket: exact tiers (single state, binary pairs, commuting
//! families) give both ends at once; generic ensembles get an iterated
//! measurement for the lower end and a feasible dual certificate for the
//! upper end. The conditional min-entropy is `−log₂ P_guess`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::probability::PROB_TOL;
use crate::quantum::channel::{DensityOperator, Povm, QuantumChannel, QUANTUM_TOL};
use crate::quantum::linalg::{
    cplx, eigh, hermitize, hs_inner, identity_c, inv_sqrt_psd, max_eigenvalue,
    positive_eigenspace_projector, random_density_matrix, random_povm_effects, trace, CMatrix,
};

/// Hard cap on measurement-improvement sweeps for generic ensembles.
pub const SEESAW_MAX_ITERS: usize = 500;
/// Bracket width below which the guessing probability counts as resolved.
pub const BRACKET_TOL: f64 = 1e-6;

/// Finite ensemble of states with prior weights (a classical-quantum
/// state, stored in pieces).
#[derive(Debug, Clone)]
pub struct CqEnsemble {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl CqEnsemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if probs.len() != states.len() || probs.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} states",
                probs.len(),
                states.len()
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > QUANTUM_TOL || probs.iter().any(|&p| p < -PROB_TOL) {
            return Err(Error::InvalidDistribution("weights are not a distribution".into()));
        }
        let probs = probs.iter().map(|&p| p.max(0.0) / total).collect();
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch("states differ in dimension".into()));
        }
        Ok(Self { probs, states })
    }

    /// Builds an ensemble from unnormalized positive parts `A_u` with
    /// `Σ_u Tr A_u = 1`: weight `Tr A_u`, state `A_u / Tr A_u`.
    pub fn from_weighted_parts(parts: &[CMatrix]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("no parts".into()));
        }
        let d = parts[0].nrows();
        let mut probs = Vec::with_capacity(parts.len());
        let mut states = Vec::with_capacity(parts.len());
        for a in parts {
            let p = trace(a).re;
            if p <= QUANTUM_TOL {
                probs.push(0.0);
                states.push(DensityOperator::maximally_mixed(d));
            } else {
                probs.push(p);
                states.push(DensityOperator::new(a.map(|v| v / cplx(p)))?);
            }
        }
        Self::new(probs, states)
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn prob(&self, u: usize) -> f64 {
        self.probs[u]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn state(&self, u: usize) -> &DensityOperator {
        &self.states[u]
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    /// `p(u)·ρ_u`; the natural variable of the discrimination problem.
    pub fn weighted(&self, u: usize) -> CMatrix {
        self.states[u].matrix().map(|v| v * cplx(self.probs[u]))
    }

    pub fn average(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for u in 0..self.n() {
            m += self.weighted(u);
        }
        m
    }

    /// Pushes every state through a channel, keeping the weights.
    pub fn apply_channel(&self, ch: &QuantumChannel) -> Result<Self> {
        let states = self
            .states
            .iter()
            .map(|s| ch.apply(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.probs.clone(), states)
    }
}

/// `Σ_u p(u)·Tr[E_u ρ_u]` for a concrete measurement.
pub fn success_probability(e: &CqEnsemble, povm: &Povm) -> Result<f64> {
    if povm.n_outcomes() != e.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} effects for {} states",
            povm.n_outcomes(),
            e.n()
        )));
    }
    if povm.dim() != e.dim() {
        return Err(Error::DimensionMismatch("measurement dimension mismatch".into()));
    }
    let mut p = 0.0;
    for u in 0..e.n() {
        p += hs_inner(povm.effect(u), &e.weighted(u)).re;
    }
    Ok(p)
}

/// Certified two-sided estimate of the guessing probability, with a
/// measurement achieving the lower end.
#[derive(Debug, Clone)]
pub struct PguessBracket {
    pub lower: f64,
    pub upper: f64,
    pub povm: Povm,
    /// Whether `upper − lower ≤` [`BRACKET_TOL`]; exact tiers always
    /// converge.
    pub converged: bool,
}

/// Optimal binary discrimination: value `½ + ½‖p₀ρ₀ − p₁ρ₁‖₁` achieved by
/// projecting onto the positive eigenspace of the difference.
pub fn helstrom(e: &CqEnsemble) -> Result<(f64, Povm)> {
    if e.n() != 2 {
        return Err(Error::InvalidInput(format!("{} states, need exactly 2", e.n())));
    }
    let diff = e.weighted(0) - e.weighted(1);
    let (vals, _) = eigh(&diff);
    let tn: f64 = vals.iter().map(|v| v.abs()).sum();
    let value = 0.5 * (1.0 + tn);
    let p0 = positive_eigenspace_projector(&diff, 0.0);
    let p1 = identity_c(e.dim()) - &p0;
    Ok((value, Povm::new(vec![p0, p1])?))
}

/// Square-root measurement `E_u = ρ̄^{-1/2} p(u)ρ_u ρ̄^{-1/2}`, completed
/// uniformly off the support of the average state.
pub fn pretty_good_measurement(e: &CqEnsemble) -> Result<Povm> {
    let avg = e.average();
    let root = inv_sqrt_psd(&avg, 1e-12);
    let d = e.dim();
    let support: CMatrix = &root * &avg * &root;
    let hole = identity_c(d) - support;
    let n = e.n() as f64;
    let effects: Vec<CMatrix> = (0..e.n())
        .map(|u| &root * e.weighted(u) * &root + hole.map(|v| v / cplx(n)))
        .collect();
    Povm::new(effects)
}

/// Detects a family that commutes pairwise (within tolerance).
fn all_commute(parts: &[CMatrix], tol: f64) -> bool {
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let c = &parts[i] * &parts[j] - &parts[j] * &parts[i];
            if c.camax() > tol {
                return false;
            }
        }
    }
    true
}

/// Simultaneously diagonalizes a commuting Hermitian family through a
/// generic linear combination; returns the common eigenbasis.
pub(crate) fn common_eigenbasis(parts: &[CMatrix]) -> Result<CMatrix> {
    let d = parts[0].nrows();
    // two sets of generic coefficients; the second is the retry for the
    // measure-zero case of an eigenvalue collision in the first mix
    for attempt in 0..2 {
        let mut mix = CMatrix::zeros(d, d);
        for (u, a) in parts.iter().enumerate() {
            let c = ((u + 1) as f64 * (1.0 + 0.37 * attempt as f64)).sin() + 2.0;
            mix += a.map(|v| v * cplx(c));
        }
        let (_, basis) = eigh(&mix);
        let ok = parts.iter().all(|a| {
            let rotated = basis.adjoint() * a * &basis;
            let mut off: f64 = 0.0;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        off = off.max(rotated[(i, j)].norm());
                    }
                }
            }
            off <= 1e-7
        });
        if ok {
            return Ok(basis);
        }
    }
    Err(Error::Ambiguous("commuting family failed to diagonalize jointly".into()))
}

/// Measurement that groups common eigenvectors by the best payload value;
/// exact for commuting families.
fn commuting_bracket(e: &CqEnsemble, parts: &[CMatrix]) -> Result<PguessBracket> {
    let d = e.dim();
    let basis = common_eigenbasis(parts)?;
    // diag entries form a classical joint p(i, u)
    let mut value = 0.0;
    let mut winners = vec![0usize; d];
    for i in 0..d {
        let mut best = f64::NEG_INFINITY;
        for (u, a) in parts.iter().enumerate() {
            let col = basis.column(i).into_owned();
            let p = (col.adjoint() * a * &col)[(0, 0)].re;
            if p > best {
                best = p;
                winners[i] = u;
            }
        }
        value += best.max(0.0);
    }
    let mut effects = vec![CMatrix::zeros(d, d); e.n()];
    for i in 0..d {
        let col = basis.column(i).into_owned();
        effects[winners[i]] += &col * col.adjoint();
    }
    let povm = Povm::new(effects)?;
    let achieved = success_probability(e, &povm)?;
    debug_assert!((achieved - value).abs() < 1e-8);
    Ok(PguessBracket { lower: achieved, upper: achieved, povm, converged: true })
}

/// Feasible dual point built from a candidate measurement: shifting
/// `Herm(Σ_u A_u E_u)` up by the worst violation makes `Y ⪰ A_u` hold for
/// every `u`, and `Tr Y` bounds the guessing probability from above.
fn dual_upper_bound(parts: &[CMatrix], povm: &Povm) -> f64 {
    let d = parts[0].nrows();
    let mut y = CMatrix::zeros(d, d);
    for (a, eff) in parts.iter().zip(povm.effects()) {
        y += a * eff;
    }
    let y = hermitize(&y);
    let eps = parts
        .iter()
        .map(|a| max_eigenvalue(&(a - &y)))
        .fold(0.0f64, f64::max)
        .max(0.0);
    (trace(&y).re + eps * d as f64).min(1.0)
}

/// Exact guessing probability where a closed-form tier applies: a lone
/// state, a binary ensemble (optimal two-outcome measurement), or a
/// commuting family (classical maximum in the common eigenbasis).
/// Returns `None` when the ensemble fits no exact tier.
pub fn exact_guessing_probability(e: &CqEnsemble) -> Result<Option<(f64, Povm)>> {
    let d = e.dim();
    if e.n() == 1 {
        return Ok(Some((1.0, Povm::new(vec![identity_c(d)])?)));
    }
    if e.n() == 2 {
        let (value, povm) = helstrom(e)?;
        return Ok(Some((value, povm)));
    }
    let parts: Vec<CMatrix> = (0..e.n()).map(|u| e.weighted(u)).collect();
    if all_commute(&parts, 1e-10) {
        if let Ok(b) = commuting_bracket(e, &parts) {
            return Ok(Some((b.lower, b.povm)));
        }
    }
    Ok(None)
}

/// Certified guessing-probability bracket.
///
/// Tiers: a lone state is guessed with certainty; two states go through
/// the optimal binary measurement; commuting families reduce to the
/// classical maximum in the common eigenbasis. Everything else starts from
/// the square-root measurement and alternates improvement sweeps with dual
/// certificates until the bracket closes or the sweep budget runs out.
pub fn pguess_bracket(e: &CqEnsemble) -> Result<PguessBracket> {
    let d = e.dim();
    if let Some((value, povm)) = exact_guessing_probability(e)? {
        return Ok(PguessBracket { lower: value, upper: value, povm, converged: true });
    }
    let parts: Vec<CMatrix> = (0..e.n()).map(|u| e.weighted(u)).collect();

    let mut povm = pretty_good_measurement(e)?;
    let mut best_lower = success_probability(e, &povm)?;
    let mut best_povm = povm.clone();
    let mut best_upper = dual_upper_bound(&parts, &povm);
    // guessing the likeliest value blind is always available
    let blind_u = (0..e.n()).max_by(|&a, &b| e.prob(a).total_cmp(&e.prob(b))).unwrap();
    if e.prob(blind_u) > best_lower {
        let mut effects = vec![CMatrix::zeros(d, d); e.n()];
        effects[blind_u] = identity_c(d);
        best_povm = Povm::new(effects)?;
        best_lower = e.prob(blind_u);
    }
    let mut stall = 0usize;
    for _ in 0..SEESAW_MAX_ITERS {
        if best_upper - best_lower <= BRACKET_TOL || stall >= 60 {
            break;
        }
        // fixed-point sweep: E_u ← G^{-1/2} A_u E_u A_u G^{-1/2} with
        // G = Σ A_v E_v A_v, completed off the support
        let mut g = CMatrix::zeros(d, d);
        for (a, eff) in parts.iter().zip(povm.effects()) {
            g += a * eff * a;
        }
        let gi = inv_sqrt_psd(&g, 1e-14);
        let support = &gi * &g * &gi;
        let hole = identity_c(d) - support;
        let n = e.n() as f64;
        let effects: Vec<CMatrix> = parts
            .iter()
            .zip(povm.effects())
            .map(|(a, eff)| {
                hermitize(&(&gi * a * eff * a * &gi)) + hole.map(|v| v / cplx(n))
            })
            .collect();
        let Ok(next) = Povm::new(effects) else { break };
        povm = next;
        let lower = success_probability(e, &povm)?;
        let upper = dual_upper_bound(&parts, &povm);
        let mut moved = false;
        if lower > best_lower + 1e-14 {
            best_lower = lower;
            best_povm = povm.clone();
            moved = true;
        }
        if upper < best_upper - 1e-14 {
            best_upper = upper;
            moved = true;
        }
        stall = if moved { 0 } else { stall + 1 };
    }
    let best_upper = best_upper.max(best_lower);
    Ok(PguessBracket {
        lower: best_lower,
        upper: best_upper,
        povm: best_povm,
        converged: best_upper - best_lower <= BRACKET_TOL,
    })
}

/// Two-sided estimate of the conditional min-entropy in bits.
#[derive(Debug, Clone)]
pub struct MinEntropyBracket {
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub pguess: PguessBracket,
}

/// `H_min = −log₂ P_guess`, as a bracket inherited from the guessing
/// probability.
pub fn min_entropy_bracket(e: &CqEnsemble) -> Result<MinEntropyBracket> {
    let pguess = pguess_bracket(e)?;
    let lower_bits = -pguess.upper.max(f64::MIN_POSITIVE).log2();
    let upper_bits = -pguess.lower.max(f64::MIN_POSITIVE).log2();
    Ok(MinEntropyBracket { lower_bits, upper_bits, pguess })
}

/// Random ensemble with independent states and Dirichlet(1) weights.
pub fn random_ensemble<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<CqEnsemble> {
    if n == 0 {
        return Err(Error::InvalidInput("empty ensemble".into()));
    }
    let mut probs: Vec<f64> = (0..n)
        .map(|_| -(rng.random_range(1e-12..1.0f64)).ln())
        .collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    let states = (0..n)
        .map(|_| DensityOperator::new(random_density_matrix(d, rng)))
        .collect::<Result<Vec<_>>>()?;
    CqEnsemble::new(probs, states)
}

/// Random ensemble whose average is exactly maximally mixed: the weighted
/// parts are `E_uᵀ/d` for a random measurement `{E_u}`.
pub fn random_ensemble_maxmixed<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<CqEnsemble> {
    let effects = random_povm_effects(d, n, rng);
    let parts: Vec<CMatrix> = effects
        .iter()
        .map(|e| e.transpose().map(|v| v / cplx(d as f64)))
        .collect();
    CqEnsemble::from_weighted_parts(&parts)
}

/// Classical joint embedded as diagonal matrices: rows of the table become
/// diagonal weights in a fixed basis.
pub fn diagonal_ensemble(table: &DMatrix<f64>) -> Result<CqEnsemble> {
    let (nx, nu) = table.shape();
    let parts: Vec<CMatrix> = (0..nu)
        .map(|u| {
            let mut m = CMatrix::zeros(nx, nx);
            for x in 0..nx {
                m[(x, x)] = cplx(table[(x, u)]);
            }
            m
        })
        .collect();
    CqEnsemble::from_weighted_parts(&parts)
}
