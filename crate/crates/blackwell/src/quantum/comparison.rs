//! Deciding whether one quantum channel can be post-processed into another.
//!
//! The driving question: given `Φ: A → B` and `Φ′: A → B′`, does a channel
//! `Ψ: B → B′` exist with `Ψ∘Φ = Φ′`? The constructive route works on
//! measurement duals. `Φ′` degrades `Φ` exactly when the entangled-basis
//! measurement on the extended output of `id ⊗ Φ′` can be answered on the
//! side of `id ⊗ Φ`: a measurement `{P_u}` with `(id⊗Φ)†(P_u) =
//! (id⊗Φ′)†(β_u)` for every entangled-basis projector `β_u`. Feeding half
//! of a maximally entangled pair into the matched measurement and undoing
//! the shift corrections assembles `Ψ` outright (teleportation), so one
//! feasibility problem decides the order and produces the certificate.
//!
//! Feasibility itself is alternating projections with memory (Dykstra)
//! over three convex sets of measurement tuples: the positive cone, the
//! completeness plane `Σ P_u = I`, and the dual-matching plane. A stalled
//! search is only evidence, never proof, so a failed construction must be
//! corroborated by an explicit violation: an input ensemble whose guessing
//! probability is certifiably higher through `Φ′` than through `Φ`,
//! evaluated by exact methods only. When neither a certificate nor a
//! witness materializes the comparison reports itself ambiguous.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quantum::channel::{
    bell_basis, hermitian_tuple_to_povm, ic_povm, maximally_entangled, product_povm,
    DensityOperator, Povm, QuantumChannel,
};
use crate::quantum::linalg::{
    cplx, fourier_matrix, hermitize, hs_inner, identity_c, inv_sqrt_psd, kron, min_eigenvalue,
    op_norm, partial_trace, psd_project, random_povm_effects, real_rep, svec, trace, unsvec,
    CMatrix,
};
use crate::quantum::minentropy::{common_eigenbasis, exact_guessing_probability, CqEnsemble};

/// Constraint violation below which an alternating-projection run counts
/// as converged.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Acceptable Frobenius distance between `Choi(Ψ∘Φ)` and `Choi(Φ′)` for a
/// degrading certificate.
pub const DEGRADING_TOL: f64 = 1e-6;
/// Minimum certified guessing-probability gap for a violation witness.
pub const WITNESS_TOL: f64 = 1e-6;
/// Measure-and-prepare constructions are exact when feasible, so they are
/// held to a tighter residual than the general teleportation route.
pub const SEMICLASSICAL_TOL: f64 = 1e-7;

const DYKSTRA_MAX_CYCLES: usize = 20_000;
const STALL_WINDOW: usize = 500;
const PROBE_SEED: u64 = 0x0b5e55ed;

// ====================================================================
// affine projections in the real operator encoding
// ====================================================================

/// Orthogonal projector onto `{x : Rx = t}`, with the pseudo-inverse
/// precomputed. Hilbert–Schmidt orthogonality in operator space is plain
/// Euclidean orthogonality in the `svec` encoding, so one real matrix per
/// constraint family is enough.
struct AffineFamily {
    rep: DMatrix<f64>,
    pinv: DMatrix<f64>,
}

impl AffineFamily {
    fn new(rep: DMatrix<f64>) -> Result<Self> {
        let pinv = rep
            .clone()
            .pseudo_inverse(1e-12)
            .map_err(|e| Error::InvalidInput(format!("affine projector setup failed: {e}")))?;
        Ok(Self { rep, pinv })
    }

    fn project(&self, x: &DVector<f64>, target: &DVector<f64>) -> DVector<f64> {
        x - &self.pinv * (&self.rep * x - target)
    }
}

// ====================================================================
// measurement correspondence
// ====================================================================

/// A measurement on `B′` together with one on `B` answering it through
/// the channel duals: `Φ†(P_u) ≈ Φ′†(Q_u)` for every outcome.
#[derive(Debug, Clone)]
pub struct PovmCorrespondence {
    pub q: Povm,
    pub p: Povm,
    /// `max_u ‖Φ†(P_u) − Φ′†(Q_u)‖_op`, recomputable from the stored pair.
    pub residual: f64,
}

/// Outcome of the correspondence search. A stall is reported as
/// infeasible with the residual and the constraint-violation direction at
/// the best iterate; it is evidence, not proof.
#[derive(Debug, Clone)]
pub enum PovmFeasibility {
    Feasible(PovmCorrespondence),
    Infeasible {
        residual: f64,
        /// `Φ′†(Q_u) − Φ†(P_u)` at the best iterate, one entry per outcome.
        mismatch: Vec<CMatrix>,
        /// True when the cycle budget ran out while still improving.
        hit_iteration_limit: bool,
    },
}

fn tuple_match_residual(first: &QuantumChannel, targets: &[CMatrix], p: &[CMatrix]) -> f64 {
    targets
        .iter()
        .zip(p)
        .map(|(t, eff)| op_norm(&(first.dual_apply(eff) - t)))
        .fold(0.0, f64::max)
}

fn tuple_full_residual(first: &QuantumChannel, targets: &[CMatrix], p: &[CMatrix]) -> f64 {
    let d = first.dim_out();
    let mut sum = identity_c(d).map(|v| -v);
    let mut r = tuple_match_residual(first, targets, p);
    for eff in p {
        sum += eff;
        r = r.max((-min_eigenvalue(&hermitize(eff))).max(0.0));
    }
    r.max(op_norm(&sum))
}

/// Clamps a near-measurement tuple to an exact one: clip each effect to
/// the positive cone, then symmetrize the completeness defect away.
fn clean_tuple(p: &[CMatrix]) -> Result<Povm> {
    let d = p[0].nrows();
    let clipped: Vec<CMatrix> = p.iter().map(psd_project).collect();
    let mut s = CMatrix::zeros(d, d);
    for c in &clipped {
        s += c;
    }
    let si = inv_sqrt_psd(&s, 1e-12);
    Povm::new(clipped.iter().map(|c| hermitize(&(&si * c * &si))).collect())
}

/// Searches for a measurement `{P_u}` on the output of `first` with
/// `first†(P_u) = second†(q_u)` for all `u`.
///
/// Dykstra's alternating projections over the positive cone, the
/// completeness plane, and the matching plane, with a periodic polish
/// step: projecting onto the two planes jointly and keeping the result
/// when it stays positive. Near generic solutions the cone constraint is
/// inactive, so the polish typically lands within working precision.
pub fn povm_feasibility(
    first: &QuantumChannel,
    second: &QuantumChannel,
    q: &Povm,
) -> Result<PovmFeasibility> {
    povm_feasibility_with(first, second, q, FEASIBILITY_TOL, DYKSTRA_MAX_CYCLES)
}

fn povm_feasibility_with(
    first: &QuantumChannel,
    second: &QuantumChannel,
    q: &Povm,
    tol: f64,
    max_cycles: usize,
) -> Result<PovmFeasibility> {
    if first.dim_in() != second.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channels take inputs of size {} and {}",
            first.dim_in(),
            second.dim_in()
        )));
    }
    if q.dim() != second.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "measurement acts on size {} but the second channel outputs size {}",
            q.dim(),
            second.dim_out()
        )));
    }
    let d_in = first.dim_in();
    let d_b = first.dim_out();
    let n = q.n_outcomes();
    let l = d_b * d_b;

    let targets: Vec<CMatrix> = q.effects().iter().map(|e| second.dual_apply(e)).collect();
    let tvecs: Vec<DVector<f64>> = targets.iter().map(svec).collect();
    let matching = AffineFamily::new(real_rep(|y| first.dual_apply(y), d_b, d_in))?;

    // stacked system for the two planes at once: per-outcome matching rows
    // plus one completeness row per svec coordinate
    let rows = n * d_in * d_in + l;
    let mut stacked = DMatrix::<f64>::zeros(rows, n * l);
    for u in 0..n {
        stacked
            .view_mut((u * d_in * d_in, u * l), (d_in * d_in, l))
            .copy_from(&matching.rep);
    }
    for c in 0..l {
        for u in 0..n {
            stacked[(n * d_in * d_in + c, u * l + c)] = 1.0;
        }
    }
    let combined = AffineFamily::new(stacked)?;
    let mut stacked_target = DVector::<f64>::zeros(rows);
    for (u, t) in tvecs.iter().enumerate() {
        stacked_target.rows_mut(u * d_in * d_in, d_in * d_in).copy_from(t);
    }
    stacked_target.rows_mut(n * d_in * d_in, l).copy_from(&svec(&identity_c(d_b)));

    let pack = |blocks: &[CMatrix]| -> DVector<f64> {
        let mut x = DVector::zeros(n * l);
        for (u, b) in blocks.iter().enumerate() {
            x.rows_mut(u * l, l).copy_from(&svec(b));
        }
        x
    };
    let unpack = |x: &DVector<f64>| -> Vec<CMatrix> {
        (0..n).map(|u| unsvec(&x.rows(u * l, l).into_owned(), d_b)).collect()
    };
    let polish = |blocks: &[CMatrix]| -> Option<Vec<CMatrix>> {
        let w = unpack(&combined.project(&pack(blocks), &stacked_target));
        let dip = w
            .iter()
            .map(|b| (-min_eigenvalue(&hermitize(b))).max(0.0))
            .fold(0.0, f64::max);
        (dip <= 1e-11).then_some(w)
    };

    // least-squares start on the joint plane
    let mut z = unpack(&(&combined.pinv * &stacked_target));
    let mut inc = vec![vec![CMatrix::zeros(d_b, d_b); n]; 3];
    let mut best = f64::INFINITY;
    let mut best_z = z.clone();
    let mut stall_ref = f64::INFINITY;
    let mut last_gain = 0usize;
    let mut hit_iteration_limit = true;

    let finish = |sol: &[CMatrix]| -> Result<PovmFeasibility> {
        let p = clean_tuple(sol)?;
        let residual = tuple_match_residual(first, &targets, p.effects());
        if residual <= DEGRADING_TOL.max(10.0 * tol) {
            Ok(PovmFeasibility::Feasible(PovmCorrespondence { q: q.clone(), p, residual }))
        } else {
            let mismatch = targets
                .iter()
                .zip(p.effects())
                .map(|(t, eff)| t - first.dual_apply(eff))
                .collect();
            Ok(PovmFeasibility::Infeasible { residual, mismatch, hit_iteration_limit: false })
        }
    };

    for cycle in 0..max_cycles {
        for u in 0..n {
            let w = &z[u] + &inc[0][u];
            let proj = psd_project(&w);
            inc[0][u] = &w - &proj;
            z[u] = proj;
        }
        {
            let ws: Vec<CMatrix> = (0..n).map(|u| &z[u] + &inc[1][u]).collect();
            let mut defect = identity_c(d_b).map(|v| -v);
            for w in &ws {
                defect += w;
            }
            let defect = defect.map(|v| v / cplx(n as f64));
            for u in 0..n {
                z[u] = &ws[u] - &defect;
                inc[1][u] = defect.clone();
            }
        }
        for u in 0..n {
            let w = &z[u] + &inc[2][u];
            let proj = unsvec(&matching.project(&svec(&w), &tvecs[u]), d_b);
            inc[2][u] = &w - &proj;
            z[u] = proj;
        }

        let r = tuple_full_residual(first, &targets, &z);
        if r < best {
            best = r;
            best_z = z.clone();
        }
        if r < stall_ref * 0.99 {
            stall_ref = r;
            last_gain = cycle;
        }
        let due_polish = cycle % 200 == 199 || best <= tol;
        if due_polish {
            if let Some(w) = polish(&best_z) {
                if tuple_full_residual(first, &targets, &w) <= tol {
                    return finish(&w);
                }
            }
        }
        if best <= tol {
            return finish(&best_z);
        }
        if cycle - last_gain >= STALL_WINDOW {
            hit_iteration_limit = false;
            break;
        }
    }

    // last-chance polish: a stalled run next to a thin feasible set can
    // still be rescued by the joint plane projection
    if let Some(w) = polish(&best_z) {
        if tuple_full_residual(first, &targets, &w) <= tol {
            return finish(&w);
        }
    }
    let mismatch = targets
        .iter()
        .zip(&best_z)
        .map(|(t, eff)| t - first.dual_apply(eff))
        .collect();
    Ok(PovmFeasibility::Infeasible { residual: best, mismatch, hit_iteration_limit })
}

// ====================================================================
// degrading-channel construction
// ====================================================================

/// A channel `Ψ` with `Ψ∘Φ ≈ Φ′`, with the Frobenius distance between
/// the two compositions' Choi operators as the residual.
#[derive(Debug, Clone)]
pub struct QuantumDegradingCertificate {
    pub psi: QuantumChannel,
    pub residual: f64,
}

/// Verdict of a degrading-channel search. The ambiguous case (search
/// stalled, no certified witness) surfaces as [`Error::Ambiguous`].
#[derive(Debug, Clone)]
pub enum DegradingOutcome {
    Degradable(QuantumDegradingCertificate),
    NotDegradable(QuantumViolationWitness),
}

/// Turns a measurement matched against the entangled basis into the
/// degrading channel: feed half of a maximally entangled pair and the
/// input into the measurement, then undo the shift correction of the
/// observed outcome.
fn assemble_from_entangled_match(p: &Povm, d_b: usize, d_bp: usize) -> Result<QuantumChannel> {
    let bell = bell_basis(d_bp);
    let phi = maximally_entangled(d_bp);
    let eye = identity_c(d_bp);
    QuantumChannel::from_map(
        |rho| {
            let mut out = CMatrix::zeros(d_bp, d_bp);
            for (eff, w) in p.effects().iter().zip(&bell.corrections) {
                let big = kron(&phi, rho);
                let lifted = kron(&eye, eff);
                let cond = partial_trace(&(&big * &lifted), &[d_bp, d_bp, d_b], &[0]);
                out += w * cond * w.adjoint();
            }
            out
        },
        d_b,
    )
}

fn choi_frobenius_residual(
    psi: &QuantumChannel,
    first: &QuantumChannel,
    second: &QuantumChannel,
) -> Result<f64> {
    Ok((QuantumChannel::compose(psi, first)?.choi() - second.choi()).norm())
}

/// Applies the map encoded by a (not necessarily valid) Choi operator.
fn apply_with_choi(chi: &CMatrix, d_in: usize, d_out: usize, m: &CMatrix) -> CMatrix {
    let lifted = kron(&m.transpose(), &identity_c(d_out));
    partial_trace(&(chi * lifted), &[d_in, d_out], &[1]).map(|v| v * cplx(d_in as f64))
}

/// Applies `f` to every second-factor block of an operator on
/// `C^{d1} ⊗ C^{d2i}`, producing an operator on `C^{d1} ⊗ C^{d2o}`.
fn map_second_factor(
    m: &CMatrix,
    d1: usize,
    d2i: usize,
    d2o: usize,
    f: &dyn Fn(&CMatrix) -> CMatrix,
) -> CMatrix {
    let mut out = CMatrix::zeros(d1 * d2o, d1 * d2o);
    for i in 0..d1 {
        for j in 0..d1 {
            let blk = m.view((i * d2i, j * d2i), (d2i, d2i)).into_owned();
            out.view_mut((i * d2o, j * d2o), (d2o, d2o)).copy_from(&f(&blk));
        }
    }
    out
}

/// Independent search formulation: Dykstra directly over Choi operators
/// of candidate `Ψ`, constrained to the positive cone, the
/// trace-preservation plane, and the plane `Choi(Ψ∘Φ) = Choi(Φ′)`.
/// Returns the cleaned channel when the residual closes, plus the best
/// constraint violation seen either way.
fn choi_space_degrading(
    first: &QuantumChannel,
    second: &QuantumChannel,
) -> Result<(Option<QuantumChannel>, f64)> {
    let d_in = first.dim_in();
    let d_b = first.dim_out();
    let d_bp = second.dim_out();
    let dim = d_b * d_bp;
    let chi_phi = first.choi().clone();

    let composed = |chi_psi: &CMatrix| -> CMatrix {
        map_second_factor(&chi_phi, d_in, d_b, d_bp, &|blk| {
            apply_with_choi(chi_psi, d_b, d_bp, blk)
        })
    };
    let compose_rep = real_rep(composed, dim, d_in * d_bp);
    let marginal_rep = real_rep(|x| partial_trace(x, &[d_b, d_bp], &[0]), dim, d_b);
    let matching = AffineFamily::new(compose_rep)?;
    let target = svec(second.choi());
    let flat_marginal = svec(&identity_c(d_b).map(|v| v / cplx(d_b as f64)));

    let mut stacked =
        DMatrix::<f64>::zeros(matching.rep.nrows() + marginal_rep.nrows(), dim * dim);
    stacked.view_mut((0, 0), (matching.rep.nrows(), dim * dim)).copy_from(&matching.rep);
    stacked
        .view_mut((matching.rep.nrows(), 0), (marginal_rep.nrows(), dim * dim))
        .copy_from(&marginal_rep);
    let combined = AffineFamily::new(stacked)?;
    let mut stacked_target = DVector::<f64>::zeros(matching.rep.nrows() + marginal_rep.nrows());
    stacked_target.rows_mut(0, target.len()).copy_from(&target);
    stacked_target
        .rows_mut(target.len(), flat_marginal.len())
        .copy_from(&flat_marginal);

    let residual_of = |x: &CMatrix| -> f64 {
        let r1 = (composed(x) - second.choi()).norm();
        let marg = partial_trace(x, &[d_b, d_bp], &[0]);
        let r2 = op_norm(&(marg - identity_c(d_b).map(|v| v / cplx(d_b as f64))));
        r1.max(r2).max((-min_eigenvalue(&hermitize(x))).max(0.0))
    };
    let finish = |x: &CMatrix| -> Result<(Option<QuantumChannel>, f64)> {
        let clipped = psd_project(x);
        let s = partial_trace(&clipped, &[d_b, d_bp], &[0]).map(|v| v * cplx(d_b as f64));
        let a = kron(&inv_sqrt_psd(&s, 1e-12), &identity_c(d_bp));
        let fixed = hermitize(&(&a * clipped * &a));
        let psi = QuantumChannel::from_choi(fixed, d_b, d_bp)?;
        let residual = choi_frobenius_residual(&psi, first, second)?;
        if residual <= DEGRADING_TOL {
            Ok((Some(psi), residual))
        } else {
            Ok((None, residual))
        }
    };
    let polish = |x: &CMatrix| -> Option<CMatrix> {
        let w = unsvec(&combined.project(&svec(x), &stacked_target), dim);
        (min_eigenvalue(&hermitize(&w)) >= -1e-11).then_some(w)
    };

    let mut x = unsvec(&(&combined.pinv * &stacked_target), dim);
    let mut inc = vec![CMatrix::zeros(dim, dim); 3];
    let mut best = f64::INFINITY;
    let mut best_x = x.clone();
    let mut stall_ref = f64::INFINITY;
    let mut last_gain = 0usize;

    for cycle in 0..DYKSTRA_MAX_CYCLES {
        let w = &x + &inc[0];
        let proj = psd_project(&w);
        inc[0] = &w - &proj;
        x = proj;

        let w = &x + &inc[1];
        let marg = partial_trace(&w, &[d_b, d_bp], &[0]);
        let delta = identity_c(d_b).map(|v| v / cplx(d_b as f64)) - marg;
        let proj = &w + kron(&delta, &identity_c(d_bp)).map(|v| v / cplx(d_bp as f64));
        inc[1] = &w - &proj;
        x = proj;

        let w = &x + &inc[2];
        let proj = unsvec(&matching.project(&svec(&w), &target), dim);
        inc[2] = &w - &proj;
        x = proj;

        let r = residual_of(&x);
        if r < best {
            best = r;
            best_x = x.clone();
        }
        if r < stall_ref * 0.99 {
            stall_ref = r;
            last_gain = cycle;
        }
        let due_polish = cycle % 200 == 199 || best <= FEASIBILITY_TOL;
        if due_polish {
            if let Some(w) = polish(&best_x) {
                if residual_of(&w) <= FEASIBILITY_TOL {
                    return finish(&w);
                }
            }
        }
        if best <= FEASIBILITY_TOL {
            return finish(&best_x);
        }
        if cycle - last_gain >= STALL_WINDOW {
            break;
        }
    }
    if let Some(w) = polish(&best_x) {
        if residual_of(&w) <= FEASIBILITY_TOL {
            return finish(&w);
        }
    }
    Ok((None, best))
}

/// Decides whether `second = Ψ∘first` for some channel `Ψ` and constructs
/// `Ψ` when it does.
///
/// Two independent constructions must agree: the entangled-basis
/// correspondence followed by teleportation assembly, and the direct
/// Choi-space feasibility search. A failed construction is only reported
/// as non-degradability when an explicit violation witness certifies it;
/// disagreement or an unwitnessed failure surfaces as
/// [`Error::Ambiguous`].
pub fn find_degrading_quantum(
    first: &QuantumChannel,
    second: &QuantumChannel,
) -> Result<DegradingOutcome> {
    if first.dim_in() != second.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channels take inputs of size {} and {}",
            first.dim_in(),
            second.dim_in()
        )));
    }
    let d_bp = second.dim_out();
    let ext_first = first.extend_with_identity(d_bp);
    let ext_second = second.extend_with_identity(d_bp);
    let entangled = Povm::new(bell_basis(d_bp).projectors)?;

    let match_residual;
    let mut primary: Option<QuantumDegradingCertificate> = None;
    let mut mismatch: Option<Vec<CMatrix>> = None;
    match povm_feasibility(&ext_first, &ext_second, &entangled)? {
        PovmFeasibility::Feasible(corr) => {
            match_residual = corr.residual;
            let psi = assemble_from_entangled_match(&corr.p, first.dim_out(), d_bp)?;
            let residual = choi_frobenius_residual(&psi, first, second)?;
            if residual <= DEGRADING_TOL {
                primary = Some(QuantumDegradingCertificate { psi, residual });
            }
        }
        PovmFeasibility::Infeasible { residual, mismatch: m, .. } => {
            match_residual = residual;
            mismatch = Some(m);
        }
    }

    let (direct, direct_residual) = choi_space_degrading(first, second)?;

    match (primary, direct) {
        (Some(cert), Some(_)) => Ok(DegradingOutcome::Degradable(cert)),
        (None, None) => {
            match extract_quantum_violation(first, second, mismatch.as_deref(), PROBE_SEED)? {
                Some(w) => Ok(DegradingOutcome::NotDegradable(w)),
                None => Err(Error::Ambiguous(format!(
                    "no degrading channel found and no certified violation; \
                     measurement matching stalled at {match_residual:.3e}, \
                     direct search stalled at {direct_residual:.3e}"
                ))),
            }
        }
        (Some(cert), None) => Err(Error::Ambiguous(format!(
            "construction paths disagree: teleportation assembly reached residual {:.3e} \
             but the direct search stalled at {direct_residual:.3e}",
            cert.residual
        ))),
        (None, Some(_)) => Err(Error::Ambiguous(format!(
            "construction paths disagree: direct search reached residual {direct_residual:.3e} \
             but measurement matching stalled at {match_residual:.3e}"
        ))),
    }
}

/// Degrading-channel construction for a second channel with commuting
/// range: match the common-eigenbasis measurement without any extension
/// and prepare eigenstates on the observed outcome. The measurement count
/// equals the output size, not its square.
pub fn semiclassical_degrading(
    first: &QuantumChannel,
    second: &QuantumChannel,
) -> Result<DegradingOutcome> {
    if first.dim_in() != second.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channels take inputs of size {} and {}",
            first.dim_in(),
            second.dim_in()
        )));
    }
    let d_in = second.dim_in();
    let d_bp = second.dim_out();
    let images: Vec<CMatrix> = (0..d_in * d_in)
        .map(|k| {
            let mut e = DVector::<f64>::zeros(d_in * d_in);
            e[k] = 1.0;
            second.apply_matrix(&unsvec(&e, d_in))
        })
        .collect();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let comm = &images[i] * &images[j] - &images[j] * &images[i];
            if comm.camax() > 1e-9 {
                return Err(Error::NotClassicalOutput(format!(
                    "second channel's outputs fail to commute (commutator norm {:.2e})",
                    comm.camax()
                )));
            }
        }
    }
    let basis = common_eigenbasis(&images)?;
    let mut projectors = Vec::with_capacity(d_bp);
    let mut states = Vec::with_capacity(d_bp);
    for u in 0..d_bp {
        let col = basis.column(u).into_owned();
        projectors.push(&col * col.adjoint());
        states.push(DensityOperator::pure(&col)?);
    }
    let q = Povm::new(projectors)?;
    match povm_feasibility(first, second, &q)? {
        PovmFeasibility::Feasible(corr) => {
            let psi = QuantumChannel::measure_and_prepare(&corr.p, &states)?;
            let residual = choi_frobenius_residual(&psi, first, second)?;
            if residual <= SEMICLASSICAL_TOL {
                Ok(DegradingOutcome::Degradable(QuantumDegradingCertificate { psi, residual }))
            } else {
                Err(Error::Ambiguous(format!(
                    "matched measurement assembles to residual {residual:.3e}, \
                     above the measure-and-prepare threshold"
                )))
            }
        }
        PovmFeasibility::Infeasible { residual, mismatch, .. } => {
            match extract_quantum_violation(first, second, Some(&mismatch), PROBE_SEED)? {
                Some(w) => Ok(DegradingOutcome::NotDegradable(w)),
                None => Err(Error::Ambiguous(format!(
                    "basis matching stalled at {residual:.3e} without a certified violation"
                ))),
            }
        }
    }
}

// ====================================================================
// statistical morphisms
// ====================================================================

/// Linear map `Γ: B → B′` intertwining the two channels, `Γ∘Φ = Φ′`,
/// built by answering an informationally complete measurement and
/// resynthesizing through its dual frame: `Γ(X) = Σ_y Tr[P_y X] Ξ_y`.
/// `Γ` preserves Hermiticity and trace and is positive on the range of
/// `Φ`, but need not be completely positive.
#[derive(Debug, Clone)]
pub struct StatisticalMorphism {
    map: DMatrix<f64>,
    correspondence: PovmCorrespondence,
    frame: Vec<CMatrix>,
}

impl StatisticalMorphism {
    /// Matrix of the map in the real operator encoding
    /// (`svec` coordinates, output size squared by input size squared).
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.map
    }

    pub fn correspondence(&self) -> &PovmCorrespondence {
        &self.correspondence
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d_bp = self.frame[0].nrows();
        let mut out = CMatrix::zeros(d_bp, d_bp);
        for (eff, xi) in self.correspondence.p.effects().iter().zip(&self.frame) {
            out += xi.map(|v| v * hs_inner(eff, x));
        }
        out
    }
}

/// Builds the intertwining map for a feasible pair by matching an
/// informationally complete measurement on `B′`. Verified on a spanning
/// set before being returned: Hermiticity preservation, trace
/// preservation, and the intertwining identity itself.
pub fn build_statistical_morphism(
    first: &QuantumChannel,
    second: &QuantumChannel,
) -> Result<StatisticalMorphism> {
    if first.dim_in() != second.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channels take inputs of size {} and {}",
            first.dim_in(),
            second.dim_in()
        )));
    }
    let d_b = first.dim_out();
    let d_in = first.dim_in();
    let ic = ic_povm(second.dim_out())?;
    // the tighter tolerance keeps the intertwining defect near working
    // precision; the frame resynthesis amplifies matching error
    let corr = match povm_feasibility_with(first, second, &ic.povm, 1e-10, 3 * DYKSTRA_MAX_CYCLES)?
    {
        PovmFeasibility::Feasible(corr) => corr,
        PovmFeasibility::Infeasible { .. } => return Err(Error::Infeasible),
    };
    let morphism = StatisticalMorphism {
        map: DMatrix::zeros(0, 0),
        correspondence: corr,
        frame: ic.dual.clone(),
    };
    let map = real_rep(|h| morphism.apply(h), d_b, second.dim_out());
    let morphism = StatisticalMorphism { map, ..morphism };

    for k in 0..d_b * d_b {
        let mut e = DVector::<f64>::zeros(d_b * d_b);
        e[k] = 1.0;
        let h = unsvec(&e, d_b);
        let img = morphism.apply(&h);
        if (&img - img.adjoint()).camax() > 1e-8 {
            return Err(Error::Ambiguous("morphism fails to preserve Hermiticity".into()));
        }
        if (trace(&img).re - trace(&h).re).abs() > 1e-7 {
            return Err(Error::Ambiguous("morphism fails to preserve trace".into()));
        }
    }
    for k in 0..d_in * d_in {
        let mut e = DVector::<f64>::zeros(d_in * d_in);
        e[k] = 1.0;
        let g = unsvec(&e, d_in);
        let defect = op_norm(&(morphism.apply(&first.apply_matrix(&g)) - second.apply_matrix(&g)));
        if defect > 1e-7 {
            return Err(Error::Ambiguous(format!(
                "morphism misses the intertwining identity by {defect:.3e}"
            )));
        }
    }
    Ok(morphism)
}

// ====================================================================
// violation witnesses
// ====================================================================

/// An input ensemble whose guessing probability is certifiably higher
/// through the second channel than through the first, falsifying
/// degradability. Both probabilities come from exact evaluations and the
/// stored decoders achieve them.
#[derive(Debug, Clone)]
pub struct QuantumViolationWitness {
    /// Human-readable description of the reference measurement that
    /// generated the ensemble.
    pub probe: String,
    /// Size of the identity extension the ensemble lives on (1 = none).
    pub aux_dim: usize,
    /// Ensemble on the (possibly extended) input, maximally mixed on
    /// average.
    pub ensemble: CqEnsemble,
    pub pguess_first: f64,
    pub pguess_second: f64,
    /// `pguess_second − pguess_first`, strictly positive.
    pub gap: f64,
    pub decoder_first: Povm,
    pub decoder_second: Povm,
}

impl QuantumViolationWitness {
    /// Re-derives both guessing probabilities with exact evaluations,
    /// confirming the stored gap.
    pub fn replay(&self, first: &QuantumChannel, second: &QuantumChannel) -> Result<(f64, f64)> {
        let e1 = self.ensemble.apply_channel(&first.extend_with_identity(self.aux_dim))?;
        let e2 = self.ensemble.apply_channel(&second.extend_with_identity(self.aux_dim))?;
        let v1 = exact_guessing_probability(&e1)?
            .ok_or_else(|| Error::Ambiguous("witness ensemble lost its exact tier".into()))?;
        let v2 = exact_guessing_probability(&e2)?
            .ok_or_else(|| Error::Ambiguous("witness ensemble lost its exact tier".into()))?;
        Ok((v1.0, v2.0))
    }
}

/// Uniform-reference ensemble of a measurement: weighted parts
/// `p(u)ω_u = E_uᵀ/d`, averaging to the maximally mixed state.
fn ensemble_from_reference_povm(povm: &Povm) -> Result<CqEnsemble> {
    let d = povm.dim() as f64;
    let parts: Vec<CMatrix> =
        povm.effects().iter().map(|e| e.transpose().map(|v| v / cplx(d))).collect();
    CqEnsemble::from_weighted_parts(&parts)
}

struct GapEval {
    v1: f64,
    v2: f64,
    dec1: Povm,
    dec2: Povm,
    ensemble: CqEnsemble,
}

/// Exact-tier gap evaluation for one reference measurement; `None` when
/// either pushed ensemble falls outside the exact tiers.
fn certified_gap(
    ext_first: &QuantumChannel,
    ext_second: &QuantumChannel,
    probe: &Povm,
) -> Result<Option<GapEval>> {
    let ensemble = ensemble_from_reference_povm(probe)?;
    let e1 = ensemble.apply_channel(ext_first)?;
    let e2 = ensemble.apply_channel(ext_second)?;
    let Some((v1, dec1)) = exact_guessing_probability(&e1)? else {
        return Ok(None);
    };
    let Some((v2, dec2)) = exact_guessing_probability(&e2)? else {
        return Ok(None);
    };
    Ok(Some(GapEval { v1, v2, dec1, dec2, ensemble }))
}

struct Probe {
    label: String,
    povm: Povm,
    /// Every effect is a sum of product operators across the extension,
    /// keeping the derived ensemble separable.
    separable: bool,
}

fn fourier_povm(d: usize) -> Result<Povm> {
    let f = fourier_matrix(d);
    Povm::new(
        (0..d)
            .map(|k| {
                let c = f.column(k).into_owned();
                &c * c.adjoint()
            })
            .collect(),
    )
}

fn binary_coarse_grainings(label: &str, p: &Povm) -> Result<Vec<(String, Povm)>> {
    let n = p.n_outcomes();
    let d = p.dim();
    let mut out = Vec::new();
    if n > 6 {
        return Ok(out);
    }
    for mask in 1u32..((1u32 << n) - 1) {
        if mask & 1 == 0 {
            continue;
        }
        let side: Vec<usize> = (0..n).filter(|u| mask >> u & 1 == 1).collect();
        let mut a = CMatrix::zeros(d, d);
        for &u in &side {
            a += p.effect(u);
        }
        let b = identity_c(d) - &a;
        out.push((format!("{label}, outcomes {side:?} against the rest"), Povm::new(vec![a, b])?));
    }
    Ok(out)
}

fn random_binary_povm<R: Rng>(d: usize, rng: &mut R) -> Result<Povm> {
    Povm::new(random_povm_effects(d, 2, rng))
}

/// Product reference measurements on `C^{aux} ⊗ C^{d_in}` (plain
/// measurements on the input when `aux = 1`). Probes derived from a
/// stalled matching direction are folded in through partial traces so the
/// product structure survives.
fn product_probe_battery(
    aux: usize,
    d_in: usize,
    direction: Option<&[CMatrix]>,
    seed: u64,
) -> Result<Vec<Probe>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (aux as u64).wrapping_mul(0x9e3779b97f4a7c15));
    let mut probes: Vec<Probe> = Vec::new();
    let blind = Povm::new(vec![identity_c(aux)])?;
    let mut push = |label: String, p: Povm| {
        probes.push(Probe { label, povm: p, separable: true });
    };
    let lift = |p: &Povm| -> Result<Povm> {
        if aux == 1 {
            Ok(p.clone())
        } else {
            product_povm(&blind, p)
        }
    };

    let comp_in = Povm::computational(d_in);
    let four_in = fourier_povm(d_in)?;
    push("input basis readout".into(), lift(&comp_in)?);
    push("input conjugate-basis readout".into(), lift(&four_in)?);
    if aux > 1 {
        push(
            "product basis readout".into(),
            product_povm(&Povm::computational(aux), &comp_in)?,
        );
        push(
            "product conjugate-basis readout".into(),
            product_povm(&fourier_povm(aux)?, &four_in)?,
        );
    }

    if let Some(dir) = direction {
        let dd = dir[0].nrows();
        // direction tuples arrive on the extended input of the stalled
        // run; reduce to local tuples so probes stay product-form
        if dd == aux * d_in {
            let signal: Vec<CMatrix> = dir
                .iter()
                .map(|m| {
                    if aux == 1 {
                        hermitize(m)
                    } else {
                        hermitize(&partial_trace(m, &[aux, d_in], &[1]))
                    }
                })
                .collect();
            if let Ok(p) = hermitian_tuple_to_povm(&signal) {
                push("mismatch-direction readout".into(), lift(&p)?);
            }
            if aux > 1 {
                let reference: Vec<CMatrix> =
                    dir.iter().map(|m| hermitize(&partial_trace(m, &[aux, d_in], &[0]))).collect();
                if let (Ok(pa), Ok(pb)) =
                    (hermitian_tuple_to_povm(&reference), hermitian_tuple_to_povm(&signal))
                {
                    push("mismatch-direction product readout".into(), product_povm(&pa, &pb)?);
                }
            }
        } else if dd == d_in {
            let signal: Vec<CMatrix> = dir.iter().map(hermitize).collect();
            if let Ok(p) = hermitian_tuple_to_povm(&signal) {
                push("mismatch-direction readout".into(), lift(&p)?);
            }
        }
    }

    for k in 0..4 {
        let pb = random_binary_povm(d_in, &mut rng)?;
        push(format!("random binary readout {k}"), lift(&pb)?);
        if aux > 1 {
            let pa = random_binary_povm(aux, &mut rng)?;
            push(format!("random product readout {k}"), product_povm(&pa, &pb)?);
        }
    }

    let mut grained = Vec::new();
    for probe in &probes {
        if probe.povm.n_outcomes() > 2 {
            for (label, p) in binary_coarse_grainings(&probe.label, &probe.povm)? {
                grained.push(Probe { label, povm: p, separable: probe.separable });
            }
        }
    }
    probes.extend(grained);
    Ok(probes)
}

fn witness_from_probe(probe: &Probe, aux: usize, g: GapEval) -> QuantumViolationWitness {
    QuantumViolationWitness {
        probe: probe.label.clone(),
        aux_dim: aux,
        ensemble: g.ensemble,
        pguess_first: g.v1,
        pguess_second: g.v2,
        gap: g.v2 - g.v1,
        decoder_first: g.dec1,
        decoder_second: g.dec2,
    }
}

/// Searches for an ensemble certifying that `second` is not a degradation
/// of `first`: its guessing probability must be strictly higher through
/// `second`, with both values exactly evaluated. Probes are product
/// reference measurements (so every emitted ensemble is separable across
/// the extension), seeded deterministically; a stalled matching direction
/// contributes additional probes through its local reductions.
pub fn extract_quantum_violation(
    first: &QuantumChannel,
    second: &QuantumChannel,
    direction: Option<&[CMatrix]>,
    seed: u64,
) -> Result<Option<QuantumViolationWitness>> {
    if first.dim_in() != second.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channels take inputs of size {} and {}",
            first.dim_in(),
            second.dim_in()
        )));
    }
    let mut best: Option<QuantumViolationWitness> = None;
    let mut aux_sizes = vec![1usize];
    if second.dim_out() > 1 {
        aux_sizes.push(second.dim_out());
    }
    for aux in aux_sizes {
        let ext_first = first.extend_with_identity(aux);
        let ext_second = second.extend_with_identity(aux);
        for probe in product_probe_battery(aux, first.dim_in(), direction, seed)? {
            if !probe.separable {
                continue;
            }
            let Some(g) = certified_gap(&ext_first, &ext_second, &probe.povm)? else {
                continue;
            };
            let gap = g.v2 - g.v1;
            if gap > WITNESS_TOL && best.as_ref().is_none_or(|b| gap > b.gap) {
                best = Some(witness_from_probe(&probe, aux, g));
            }
        }
    }
    Ok(best)
}

/// Outcome of a sampled dominance check over probe ensembles.
#[derive(Debug, Clone)]
pub struct SufficiencyReport {
    /// Probes that admitted an exact evaluation.
    pub probes_evaluated: usize,
    /// Minimum over probes of `P_guess(through first) − P_guess(through
    /// second)`; a degradation never lets this go negative.
    pub worst_slack: f64,
    /// Certified violation behind a negative slack, when one of the
    /// separable probes realizes it.
    pub violation: Option<QuantumViolationWitness>,
}

/// Samples ensembles with maximally mixed average (structured product
/// probes, an entangled-basis probe for the slack report, and seeded
/// random binary probes) and checks that guessing through `second` never
/// certifiably beats guessing through `first`.
pub fn test_sufficiency(
    first: &QuantumChannel,
    second: &QuantumChannel,
    n_trials: usize,
    seed: u64,
) -> Result<SufficiencyReport> {
    if first.dim_in() != second.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channels take inputs of size {} and {}",
            first.dim_in(),
            second.dim_in()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        SufficiencyReport { probes_evaluated: 0, worst_slack: f64::INFINITY, violation: None };
    let mut aux_sizes = vec![1usize];
    if second.dim_out() > 1 {
        aux_sizes.push(second.dim_out());
    }
    for aux in aux_sizes {
        let ext_first = first.extend_with_identity(aux);
        let ext_second = second.extend_with_identity(aux);
        let d_r = aux * first.dim_in();

        let mut probes = product_probe_battery(aux, first.dim_in(), None, seed)?;
        if aux == first.dim_in() && aux > 1 {
            let entangled = Povm::new(bell_basis(aux).projectors)?;
            for (label, p) in binary_coarse_grainings("entangled-basis readout", &entangled)? {
                probes.push(Probe { label, povm: p, separable: false });
            }
            probes.push(Probe {
                label: "entangled-basis readout".into(),
                povm: entangled,
                separable: false,
            });
        }
        let share = n_trials / 2 + n_trials % 2;
        for k in 0..share {
            probes.push(Probe {
                label: format!("random binary probe {k}"),
                povm: random_binary_povm(d_r, &mut rng)?,
                separable: aux == 1,
            });
        }

        for probe in probes {
            let Some(g) = certified_gap(&ext_first, &ext_second, &probe.povm)? else {
                continue;
            };
            report.probes_evaluated += 1;
            let slack = g.v1 - g.v2;
            report.worst_slack = report.worst_slack.min(slack);
            if slack < -WITNESS_TOL
                && probe.separable
                && report.violation.as_ref().is_none_or(|w| -slack > w.gap)
            {
                report.violation = Some(witness_from_probe(&probe, aux, g));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{random_density_matrix, random_hermitian};
    use approx::assert_abs_diff_eq;
    use nalgebra::Complex;

    fn depolarizing(t: f64) -> QuantumChannel {
        QuantumChannel::depolarizing(2, t).unwrap()
    }

    fn pauli_z() -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex::new(1.0, 0.0),
            Complex::new(-1.0, 0.0),
        ]))
    }

    #[test]
    fn matching_returns_the_target_when_channels_coincide() {
        let phi = depolarizing(0.7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = Povm::new(random_povm_effects(2, 3, &mut rng)).unwrap();
        match povm_feasibility(&phi, &phi, &q).unwrap() {
            PovmFeasibility::Feasible(corr) => {
                assert!(corr.residual <= 1e-8, "residual {}", corr.residual);
                for (p, qe) in corr.p.effects().iter().zip(q.effects()) {
                    assert!((p - qe).camax() < 1e-6);
                }
            }
            PovmFeasibility::Infeasible { residual, .. } => {
                panic!("expected feasibility, stalled at {residual}")
            }
        }
    }

    #[test]
    fn dual_matching_recovers_the_closed_form() {
        let id = QuantumChannel::identity(2);
        let noisy = depolarizing(0.6);
        let q = Povm::computational(2);
        match povm_feasibility(&id, &noisy, &q).unwrap() {
            PovmFeasibility::Feasible(corr) => {
                let expected = (identity_c(2) + pauli_z()).map(|v| v / cplx(2.0))
                    - pauli_z().map(|v| v * cplx(0.2));
                assert!(
                    (corr.p.effect(0) - &expected).camax() < 1e-7,
                    "deviation {}",
                    (corr.p.effect(0) - &expected).camax()
                );
            }
            PovmFeasibility::Infeasible { residual, .. } => {
                panic!("expected feasibility, stalled at {residual}")
            }
        }
    }

    #[test]
    fn sharpening_a_noisy_measurement_is_infeasible() {
        let noisy = depolarizing(0.3);
        let id = QuantumChannel::identity(2);
        match povm_feasibility(&noisy, &id, &Povm::computational(2)).unwrap() {
            PovmFeasibility::Feasible(corr) => {
                panic!("sharpening should fail, got residual {}", corr.residual)
            }
            PovmFeasibility::Infeasible { residual, mismatch, .. } => {
                assert!(residual > 0.1, "residual {residual}");
                assert_eq!(mismatch.len(), 2);
            }
        }
    }

    #[test]
    fn composition_encoding_matches_channel_composition() {
        let phi = depolarizing(0.9);
        let psi = depolarizing(0.5);
        let direct = QuantumChannel::compose(&psi, &phi).unwrap();
        let encoded = map_second_factor(phi.choi(), 2, 2, 2, &|blk| {
            apply_with_choi(psi.choi(), 2, 2, blk)
        });
        assert!((encoded - direct.choi()).camax() < 1e-12);
    }

    #[test]
    fn self_degrading_is_the_identity() {
        let phi = depolarizing(0.7);
        match find_degrading_quantum(&phi, &phi).unwrap() {
            DegradingOutcome::Degradable(cert) => {
                assert!(cert.residual <= 1e-9, "residual {}", cert.residual);
                assert!(
                    (cert.psi.choi() - QuantumChannel::identity(2).choi()).camax() < 1e-6
                );
            }
            DegradingOutcome::NotDegradable(w) => panic!("spurious witness with gap {}", w.gap),
        }
    }

    #[test]
    fn depolarizing_ladder_divides() {
        let strong = depolarizing(0.9);
        let weak = depolarizing(0.45);
        match find_degrading_quantum(&strong, &weak).unwrap() {
            DegradingOutcome::Degradable(cert) => {
                assert!(cert.residual <= DEGRADING_TOL, "residual {}", cert.residual);
                let quotient = depolarizing(0.5);
                let dist = (cert.psi.choi() - quotient.choi()).norm();
                assert!(dist < 1e-4, "distance to the exact quotient {dist}");
            }
            DegradingOutcome::NotDegradable(w) => panic!("spurious witness with gap {}", w.gap),
        }
    }

    #[test]
    fn depolarizing_reverse_is_witnessed() {
        let weak = depolarizing(0.5);
        let strong = depolarizing(0.9);
        match find_degrading_quantum(&weak, &strong).unwrap() {
            DegradingOutcome::Degradable(cert) => {
                panic!("noise cannot be undone, residual {}", cert.residual)
            }
            DegradingOutcome::NotDegradable(w) => {
                assert!(w.gap >= 1e-3, "gap {}", w.gap);
                let (v1, v2) = w.replay(&weak, &strong).unwrap();
                assert_abs_diff_eq!(v1, w.pguess_first, epsilon = 1e-6);
                assert_abs_diff_eq!(v2, w.pguess_second, epsilon = 1e-6);
                assert_abs_diff_eq!(v2 - v1, w.gap, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn degradable_exactly_when_the_quotient_is_a_channel() {
        // mixing parameters divide iff the quotient is completely
        // positive, i.e. the ratio lies in [-1/3, 1] for qubits
        let t = 0.5;
        let cases = [(0.25, true), (-0.15, true), (-0.2, false), (0.55, false)];
        for (tp, expect_degradable) in cases {
            let got = matches!(
                find_degrading_quantum(&depolarizing(t), &depolarizing(tp)),
                Ok(DegradingOutcome::Degradable(_))
            );
            assert_eq!(got, expect_degradable, "ratio {}", tp / t);
        }
    }

    #[test]
    fn random_degradations_are_always_certified() {
        for seed in 0..3u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
            let phi = QuantumChannel::random(2, 2, &mut rng);
            let psi = QuantumChannel::random(2, 2, &mut rng);
            let second = QuantumChannel::compose(&psi, &phi).unwrap();
            match find_degrading_quantum(&phi, &second).unwrap() {
                DegradingOutcome::Degradable(cert) => {
                    assert!(cert.residual <= DEGRADING_TOL, "residual {}", cert.residual)
                }
                DegradingOutcome::NotDegradable(w) => {
                    panic!("constructed degradation rejected with gap {}", w.gap)
                }
            }
            assert!(extract_quantum_violation(&phi, &second, None, 5).unwrap().is_none());
        }
    }

    #[test]
    fn semiclassical_path_recovers_the_dephasing_measurement() {
        let id = QuantumChannel::identity(2);
        let deph = QuantumChannel::dephasing(2);
        match povm_feasibility(&id, &deph, &Povm::computational(2)).unwrap() {
            PovmFeasibility::Feasible(corr) => {
                for (p, q) in corr.p.effects().iter().zip(Povm::computational(2).effects()) {
                    assert!((p - q).camax() < 1e-7);
                }
            }
            PovmFeasibility::Infeasible { residual, .. } => panic!("stalled at {residual}"),
        }
        match semiclassical_degrading(&id, &deph).unwrap() {
            DegradingOutcome::Degradable(cert) => {
                assert!(cert.residual <= 1e-9, "residual {}", cert.residual);
                assert!((cert.psi.choi() - deph.choi()).norm() < 1e-7);
            }
            DegradingOutcome::NotDegradable(w) => panic!("spurious witness with gap {}", w.gap),
        }
    }

    #[test]
    fn semiclassical_path_accepts_constant_targets() {
        let phi = depolarizing(0.7);
        let target = QuantumChannel::constant(2, &DensityOperator::basis(2, 0).unwrap());
        match semiclassical_degrading(&phi, &target).unwrap() {
            DegradingOutcome::Degradable(cert) => {
                assert!(cert.residual <= SEMICLASSICAL_TOL, "residual {}", cert.residual)
            }
            DegradingOutcome::NotDegradable(w) => panic!("spurious witness with gap {}", w.gap),
        }
    }

    #[test]
    fn semiclassical_path_rejects_noncommuting_output() {
        let err = semiclassical_degrading(&depolarizing(0.5), &QuantumChannel::identity(2));
        assert!(matches!(err, Err(Error::NotClassicalOutput(_))));
    }

    #[test]
    fn erased_basis_information_is_witnessed() {
        let erased = depolarizing(0.0);
        let measured = QuantumChannel::dephasing(2);
        match semiclassical_degrading(&erased, &measured).unwrap() {
            DegradingOutcome::Degradable(cert) => {
                panic!("cannot recover a measured basis, residual {}", cert.residual)
            }
            DegradingOutcome::NotDegradable(w) => {
                assert!(w.gap >= 0.4, "gap {}", w.gap);
                let (v1, v2) = w.replay(&erased, &measured).unwrap();
                assert_abs_diff_eq!(v2 - v1, w.gap, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn measurement_channel_cannot_reach_the_identity() {
        let measured = QuantumChannel::dephasing(2);
        let id = QuantumChannel::identity(2);
        let w = extract_quantum_violation(&measured, &id, None, 3).unwrap().unwrap();
        assert!(w.gap >= 0.4, "gap {}", w.gap);
        assert_abs_diff_eq!(w.pguess_second, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(w.pguess_first, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn stalled_direction_feeds_the_witness_search() {
        let weak = depolarizing(0.5);
        let id = QuantumChannel::identity(2);
        let ext_first = weak.extend_with_identity(2);
        let ext_second = id.extend_with_identity(2);
        let entangled = Povm::new(bell_basis(2).projectors).unwrap();
        let PovmFeasibility::Infeasible { mismatch, .. } =
            povm_feasibility(&ext_first, &ext_second, &entangled).unwrap()
        else {
            panic!("noise removal should not be feasible")
        };
        let w = extract_quantum_violation(&weak, &id, Some(&mismatch), 3).unwrap().unwrap();
        assert!(w.gap >= 0.1, "gap {}", w.gap);
    }

    #[test]
    fn sufficiency_holds_along_the_ladder() {
        let report = test_sufficiency(&depolarizing(0.9), &depolarizing(0.5), 30, 17).unwrap();
        assert!(report.violation.is_none(), "slack {}", report.worst_slack);
        assert!(report.worst_slack >= -1e-6, "slack {}", report.worst_slack);
        assert!(report.probes_evaluated > 20);
    }

    #[test]
    fn sufficiency_flags_removed_noise() {
        let report = test_sufficiency(&depolarizing(0.5), &QuantumChannel::identity(2), 30, 17)
            .unwrap();
        assert!(report.worst_slack <= -0.2, "slack {}", report.worst_slack);
        let w = report.violation.expect("a separable probe certifies the violation");
        assert!(w.gap >= 0.2, "gap {}", w.gap);
    }

    #[test]
    fn morphism_of_a_mixing_pair_is_the_mixing_channel() {
        let id = QuantumChannel::identity(2);
        let noisy = depolarizing(0.6);
        let morph = build_statistical_morphism(&id, &noisy).unwrap();
        let expected = real_rep(|m| noisy.apply_matrix(m), 2, 2);
        assert!((morph.matrix() - expected).amax() < 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(2, &mut rng);
        assert!((morph.apply(&h) - noisy.apply_matrix(&h)).camax() < 1e-7);
    }

    #[test]
    fn morphism_fixes_the_common_range_and_stays_positive_on_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let phi = QuantumChannel::random(2, 2, &mut rng);
        let morph = build_statistical_morphism(&phi, &phi).unwrap();
        for _ in 0..20 {
            let rho = random_density_matrix(2, &mut rng);
            let through = phi.apply_matrix(&rho);
            let img = morph.apply(&through);
            assert!((&img - &through).camax() < 1e-7);
            assert!(min_eigenvalue(&hermitize(&img)) >= -1e-8);
        }
    }
}
