//! States, measurements, and channels on finite-dimensional systems.
//!
//! A channel `Φ: B(C^{d_in}) → B(C^{d_out})` is stored by its state-like
//! representative `χ = (id ⊗ Φ)(φ⁺)` on `reference ⊗ output`, normalized to
//! trace one (`φ⁺` is the maximally entangled state). Everything else, such
//! as applying the channel, its trace dual, composition, and products, is
//! computed from `χ`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::probability::Distribution;
use crate::quantum::linalg::{
    cplx, eigh, ginibre, hermitize, hs_inner, identity_c, inv_sqrt_psd, is_hermitian, kron,
    max_eigenvalue, min_eigenvalue, partial_trace, permute_systems, trace, CMatrix, CVector,
};

/// Validation tolerance for states, measurements, and channels.
pub const QUANTUM_TOL: f64 = 1e-8;

/// Maximally entangled state `φ⁺ = (1/d) Σ_{ij} |ii⟩⟨jj|` on `C^d ⊗ C^d`.
pub fn maximally_entangled(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = cplx(1.0 / d as f64);
        }
    }
    m
}

/// Discrete shift `X^a Z^b` on `C^d`: `X|k⟩ = |k+1 mod d⟩`,
/// `Z|k⟩ = ω^k |k⟩` with `ω = e^{2πi/d}`.
pub fn weyl(d: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    let omega = std::f64::consts::TAU / d as f64;
    for k in 0..d {
        let phase = omega * (b * k) as f64;
        m[((k + a) % d, k)] = Complex64::new(phase.cos(), phase.sin());
    }
    m
}

// ====================================================================
// states
// ====================================================================

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: CMatrix,
}

impl DensityOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState("state matrix is not square".into()));
        }
        if !is_hermitian(&mat, QUANTUM_TOL) {
            return Err(Error::InvalidState("state is not Hermitian".into()));
        }
        let mat = hermitize(&mat);
        if (trace(&mat).re - 1.0).abs() > QUANTUM_TOL {
            return Err(Error::InvalidState(format!(
                "state trace is {}, not 1",
                trace(&mat).re
            )));
        }
        if min_eigenvalue(&mat) < -QUANTUM_TOL {
            return Err(Error::InvalidState(format!(
                "state has a negative eigenvalue {}",
                min_eigenvalue(&mat)
            )));
        }
        Ok(Self { mat })
    }

    pub fn pure(v: &CVector) -> Result<Self> {
        let n = v.norm();
        if n <= 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = v.map(|c| c / cplx(n));
        Ok(Self { mat: &v * v.adjoint() })
    }

    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::InvalidState(format!("basis index {k} in dimension {d}")));
        }
        let mut v = CVector::zeros(d);
        v[k] = cplx(1.0);
        Self::pure(&v)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: identity_c(d).map(|v| v / cplx(d as f64)) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        eigh(&self.mat).0
    }
}

// ====================================================================
// measurements
// ====================================================================

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    effects: Vec<CMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return Err(Error::InvalidPovm("no effects".into()));
        };
        let dim = first.nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        let mut clean = Vec::with_capacity(effects.len());
        for (u, e) in effects.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "effect {u} is {}x{}, expected {dim}x{dim}",
                    e.nrows(),
                    e.ncols()
                )));
            }
            if !is_hermitian(e, QUANTUM_TOL) {
                return Err(Error::InvalidPovm(format!("effect {u} is not Hermitian")));
            }
            let e = hermitize(e);
            if min_eigenvalue(&e) < -QUANTUM_TOL {
                return Err(Error::InvalidPovm(format!(
                    "effect {u} has a negative eigenvalue {}",
                    min_eigenvalue(&e)
                )));
            }
            sum += &e;
            clean.push(e);
        }
        if (sum - identity_c(dim)).camax() > QUANTUM_TOL {
            return Err(Error::InvalidPovm("effects do not sum to the identity".into()));
        }
        Ok(Self { dim, effects: clean })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        let effects = (0..d)
            .map(|k| {
                let mut m = CMatrix::zeros(d, d);
                m[(k, k)] = cplx(1.0);
                m
            })
            .collect();
        Self { dim: d, effects }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn effect(&self, u: usize) -> &CMatrix {
        &self.effects[u]
    }

    /// Outcome statistics on a state (Born rule).
    pub fn outcome_distribution(&self, rho: &DensityOperator) -> Result<Distribution> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} vs measurement dimension {}",
                rho.dim(),
                self.dim
            )));
        }
        let probs: Vec<f64> = self
            .effects
            .iter()
            .map(|e| hs_inner(e, rho.matrix()).re.max(0.0))
            .collect();
        let total: f64 = probs.iter().sum();
        Distribution::from_probs(probs.iter().map(|p| p / total).collect())
    }
}

/// Shifts any finite Hermitian tuple to a measurement by mixing with the
/// identity: `E_u = (O_u + αI − S/n)/(αn)` with `S = Σ O_u` and `α` just
/// large enough for positivity. The map is affine and invertible given `S`,
/// so statements about all measurements transfer to Hermitian tuples.
pub fn hermitian_tuple_to_povm(ops: &[CMatrix]) -> Result<Povm> {
    let Some(first) = ops.first() else {
        return Err(Error::InvalidInput("empty tuple".into()));
    };
    let d = first.nrows();
    let n = ops.len() as f64;
    let mut s = CMatrix::zeros(d, d);
    for o in ops {
        if o.nrows() != d || !is_hermitian(o, QUANTUM_TOL) {
            return Err(Error::InvalidInput("tuple entries must be Hermitian, same size".into()));
        }
        s += o;
    }
    let mean = s.map(|v| v / cplx(n));
    let alpha = ops
        .iter()
        .map(|o| max_eigenvalue(&(&mean - o)))
        .fold(0.0f64, f64::max)
        .max(0.0)
        + 1e-6;
    let effects: Vec<CMatrix> = ops
        .iter()
        .map(|o| (o + identity_c(d).map(|v| v * cplx(alpha)) - &mean).map(|v| v / cplx(alpha * n)))
        .collect();
    Povm::new(effects)
}

/// Product measurement on a two-factor system: effects `a_i ⊗ b_j`,
/// outcomes ordered with the second factor fastest.
pub fn product_povm(a: &Povm, b: &Povm) -> Result<Povm> {
    let mut effects = Vec::with_capacity(a.n_outcomes() * b.n_outcomes());
    for ea in a.effects() {
        for eb in b.effects() {
            effects.push(kron(ea, eb));
        }
    }
    Povm::new(effects)
}

// ====================================================================
// channels
// ====================================================================

/// Completely positive trace-preserving map in its normalized
/// state-over-`reference ⊗ output` form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    choi: CMatrix,
}

impl QuantumChannel {
    /// Wraps a candidate representative, checking Hermiticity, positivity,
    /// normalization, and the trace-preservation marginal
    /// `Tr_out χ = I/d_in`.
    pub fn from_choi(choi: CMatrix, dim_in: usize, dim_out: usize) -> Result<Self> {
        if choi.nrows() != dim_in * dim_out || !choi.is_square() {
            return Err(Error::InvalidChannel(format!(
                "representative is {}x{}, expected {0}x{0} with {dim_in}·{dim_out} rows",
                choi.nrows(),
                choi.ncols()
            )));
        }
        if !is_hermitian(&choi, QUANTUM_TOL) {
            return Err(Error::InvalidChannel("representative is not Hermitian".into()));
        }
        let choi = hermitize(&choi);
        if min_eigenvalue(&choi) < -QUANTUM_TOL {
            return Err(Error::InvalidChannel(format!(
                "map is not completely positive (eigenvalue {})",
                min_eigenvalue(&choi)
            )));
        }
        let marginal = partial_trace(&choi, &[dim_in, dim_out], &[0]);
        let target = identity_c(dim_in).map(|v| v / cplx(dim_in as f64));
        if (marginal - target).camax() > QUANTUM_TOL {
            return Err(Error::InvalidChannel("map is not trace preserving".into()));
        }
        Ok(Self { dim_in, dim_out, choi })
    }

    /// Builds the representative by pushing matrix units through `f`;
    /// validates the result.
    pub fn from_map(f: impl Fn(&CMatrix) -> CMatrix, dim_in: usize) -> Result<Self> {
        let probe = f(&CMatrix::zeros(dim_in, dim_in));
        let dim_out = probe.nrows();
        let mut choi = CMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let mut unit = CMatrix::zeros(dim_in, dim_in);
                unit[(i, j)] = cplx(1.0);
                let img = f(&unit);
                for r in 0..dim_out {
                    for c in 0..dim_out {
                        choi[(i * dim_out + r, j * dim_out + c)] =
                            img[(r, c)] / cplx(dim_in as f64);
                    }
                }
            }
        }
        Self::from_choi(choi, dim_in, dim_out)
    }

    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(Error::InvalidChannel("no operators".into()));
        };
        let dim_in = first.ncols();
        Self::from_map(
            |rho| {
                let mut out = CMatrix::zeros(first.nrows(), first.nrows());
                for k in kraus {
                    out += k * rho * k.adjoint();
                }
                out
            },
            dim_in,
        )
    }

    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    pub fn identity(d: usize) -> Self {
        Self { dim_in: d, dim_out: d, choi: maximally_entangled(d) }
    }

    /// Mixes the input with white noise: `ρ ↦ t·ρ + (1−t)·I/d`. Complete
    /// positivity restricts `t` to `[−1/(d²−1), 1]`.
    pub fn depolarizing(d: usize, t: f64) -> Result<Self> {
        let lo = -1.0 / (d * d - 1) as f64;
        if !(lo..=1.0).contains(&t) {
            return Err(Error::InvalidChannel(format!(
                "noise parameter {t} outside [{lo}, 1]"
            )));
        }
        let n = (d * d) as f64;
        let choi = maximally_entangled(d).map(|v| v * cplx(t))
            + identity_c(d * d).map(|v| v * cplx((1.0 - t) / n));
        Ok(Self { dim_in: d, dim_out: d, choi })
    }

    /// Kills all off-diagonal terms in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let mut choi = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            choi[(i * d + i, i * d + i)] = cplx(1.0 / d as f64);
        }
        Self { dim_in: d, dim_out: d, choi }
    }

    /// Discards the input and prepares `sigma`.
    pub fn constant(dim_in: usize, sigma: &DensityOperator) -> Self {
        let choi = kron(
            &identity_c(dim_in).map(|v| v / cplx(dim_in as f64)),
            sigma.matrix(),
        );
        Self { dim_in, dim_out: sigma.dim(), choi }
    }

    /// Measures with `povm` and prepares `states[u]` on outcome `u`.
    pub fn measure_and_prepare(povm: &Povm, states: &[DensityOperator]) -> Result<Self> {
        if states.len() != povm.n_outcomes() {
            return Err(Error::DimensionMismatch(format!(
                "{} states for {} outcomes",
                states.len(),
                povm.n_outcomes()
            )));
        }
        let d_in = povm.dim();
        let d_out = states.first().map(|s| s.dim()).unwrap_or(0);
        if d_out == 0 || states.iter().any(|s| s.dim() != d_out) {
            return Err(Error::DimensionMismatch("prepared states differ in dimension".into()));
        }
        let mut choi = CMatrix::zeros(d_in * d_out, d_in * d_out);
        for (e, s) in povm.effects().iter().zip(states) {
            choi += kron(&e.transpose().map(|v| v / cplx(d_in as f64)), s.matrix());
        }
        Self::from_choi(choi, d_in, d_out)
    }

    /// Haar-flavored random channel: a Wishart representative reshaped to
    /// satisfy the trace-preservation marginal exactly.
    pub fn random<R: Rng>(dim_in: usize, dim_out: usize, rng: &mut R) -> Self {
        let n = dim_in * dim_out;
        let g = ginibre(n, n, rng);
        let w = &g * g.adjoint();
        let r = partial_trace(&w, &[dim_in, dim_out], &[0]);
        let fix = kron(&inv_sqrt_psd(&r, 1e-12), &identity_c(dim_out));
        let choi = (&fix * w * &fix).map(|v| v / cplx(dim_in as f64));
        Self { dim_in, dim_out, choi: hermitize(&choi) }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    /// Action on an arbitrary matrix:
    /// `Φ(m) = d_in · Tr_ref[χ (mᵀ ⊗ I_out)]`.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let lifted = kron(&m.transpose(), &identity_c(self.dim_out));
        let prod = &self.choi * lifted;
        partial_trace(&prod, &[self.dim_in, self.dim_out], &[1]).map(|v| v * cplx(self.dim_in as f64))
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} vs channel input {}",
                rho.dim(),
                self.dim_in
            )));
        }
        DensityOperator::new(self.apply_matrix(rho.matrix()))
    }

    /// Trace dual `Φ†` (Heisenberg picture):
    /// `Tr[Φ(ρ) Y] = Tr[ρ Φ†(Y)]` for all `ρ, Y`.
    pub fn dual_apply(&self, y: &CMatrix) -> CMatrix {
        let lifted = kron(&identity_c(self.dim_in), y);
        let prod = &self.choi * lifted;
        partial_trace(&prod, &[self.dim_in, self.dim_out], &[0])
            .transpose()
            .map(|v| v * cplx(self.dim_in as f64))
    }

    /// `later ∘ earlier`.
    pub fn compose(later: &Self, earlier: &Self) -> Result<Self> {
        if earlier.dim_out != later.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot chain output {} into input {}",
                earlier.dim_out, later.dim_in
            )));
        }
        Self::from_map(
            |m| later.apply_matrix(&earlier.apply_matrix(m)),
            earlier.dim_in,
        )
    }

    /// Parallel product `a ⊗ b`.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        // factors of χ_a ⊗ χ_b sit as (ref_a, out_a, ref_b, out_b); the
        // product channel needs (ref_a, ref_b, out_a, out_b)
        let raw = kron(&a.choi, &b.choi);
        let dims = [a.dim_in, a.dim_out, b.dim_in, b.dim_out];
        let choi = permute_systems(&raw, &dims, &[0, 2, 1, 3]);
        Self {
            dim_in: a.dim_in * b.dim_in,
            dim_out: a.dim_out * b.dim_out,
            choi,
        }
    }

    /// `id_{d_aux} ⊗ Φ` with the untouched system in front.
    pub fn extend_with_identity(&self, d_aux: usize) -> Self {
        Self::tensor(&Self::identity(d_aux), self)
    }
}

// ====================================================================
// entangled-basis toolkit
// ====================================================================

/// The `d²` maximally entangled basis projectors on `C^d ⊗ C^d` together
/// with the unitaries that rotate them back to `φ⁺`.
#[derive(Debug, Clone)]
pub struct BellBasis {
    pub projectors: Vec<CMatrix>,
    pub corrections: Vec<CMatrix>,
}

/// Basis `β_u = (I ⊗ W_u) φ⁺ (I ⊗ W_u)†` over the discrete shifts `W_u`.
///
/// Feeding half of `φ⁺` into a measured system realizes the teleportation
/// identity `Tr_{23}[(φ⁺_{12} ⊗ ρ_3)(I ⊗ β_u)] = W_u† ρ W_u / d²`, which
/// is what converts feasible measurements into a degrading channel.
pub fn bell_basis(d: usize) -> BellBasis {
    // φ⁺ is rank one with unit trace, hence itself a projector
    let phi = maximally_entangled(d);
    let mut projectors = Vec::with_capacity(d * d);
    let mut corrections = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let w = weyl(d, a, b);
            let lift = kron(&identity_c(d), &w);
            projectors.push(&lift * &phi * lift.adjoint());
            corrections.push(w);
        }
    }
    BellBasis { projectors, corrections }
}

// ====================================================================
// informationally complete measurements
// ====================================================================

/// Measurement whose statistics determine the state, with the dual frame
/// that inverts them: `H = Σ_y Tr[E_y H] Ξ_y` for every Hermitian `H`.
#[derive(Debug, Clone)]
pub struct IcPovm {
    pub povm: Povm,
    pub dual: Vec<CMatrix>,
}

fn dual_frame(effects: &[CMatrix]) -> Result<Vec<CMatrix>> {
    let n = effects.len();
    let mut gram = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = hs_inner(&effects[i], &effects[j]).re;
        }
    }
    let inv = gram.clone().try_inverse().ok_or_else(|| {
        Error::InvalidPovm("effects do not span the Hermitian space".into())
    })?;
    let residual = (&gram * &inv - nalgebra::DMatrix::identity(n, n)).amax();
    if residual > 1e-6 {
        return Err(Error::InvalidPovm(format!(
            "frame inversion is ill-conditioned (residual {residual})"
        )));
    }
    let d = effects[0].nrows();
    let dual = (0..n)
        .map(|y| {
            let mut xi = CMatrix::zeros(d, d);
            for (yp, e) in effects.iter().enumerate() {
                xi += e.map(|v| v * cplx(inv[(y, yp)]));
            }
            xi
        })
        .collect();
    Ok(dual)
}

/// Informationally complete measurement with `d²` outcomes.
///
/// Dimension 2 uses the tetrahedron `E_k = (I + s_k·σ)/4`; higher
/// dimensions orbit a fixed generic fiducial vector under the discrete
/// shifts, which is informationally complete exactly when the Gram matrix
/// of the effects is invertible (checked).
pub fn ic_povm(d: usize) -> Result<IcPovm> {
    if d < 2 {
        return Err(Error::InvalidInput("need dimension at least 2".into()));
    }
    let effects: Vec<CMatrix> = if d == 2 {
        let s3 = 1.0 / 3.0f64.sqrt();
        let dirs = [
            [s3, s3, s3],
            [s3, -s3, -s3],
            [-s3, s3, -s3],
            [-s3, -s3, s3],
        ];
        dirs.iter()
            .map(|v| {
                let mut m = CMatrix::zeros(2, 2);
                m[(0, 0)] = cplx(1.0 + v[2]);
                m[(1, 1)] = cplx(1.0 - v[2]);
                m[(0, 1)] = Complex64::new(v[0], -v[1]);
                m[(1, 0)] = Complex64::new(v[0], v[1]);
                m.map(|x| x * cplx(0.25))
            })
            .collect()
    } else {
        let amps: Vec<Complex64> = (0..d)
            .map(|j| Complex64::new(1.0 + j as f64, 1.0 / (2.0 + j as f64)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let fid = CVector::from_iterator(d, amps.into_iter().map(|a| a / cplx(norm)));
        let psi = &fid * fid.adjoint();
        let mut out = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let w = weyl(d, a, b);
                out.push((&w * &psi * w.adjoint()).map(|v| v / cplx(d as f64)));
            }
        }
        out
    };
    let dual = dual_frame(&effects)?;
    Ok(IcPovm { povm: Povm::new(effects)?, dual })
}
