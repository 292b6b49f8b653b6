//! Dense complex linear algebra for finite-dimensional quantum objects.
//!
//! Conventions: tensor factors are indexed left to right with row-major
//! composite indices (the leftmost system varies slowest); `svec` encodes a
//! Hermitian `d×d` matrix as a real vector of length `d²` isometrically for
//! the Hilbert–Schmidt inner product.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity_c(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// `Tr[a† b]`; real for Hermitian pairs.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    trace(&(a.adjoint() * b))
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|v| v * 0.5)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).camax() <= tol
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn decode(mut idx: usize, dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for k in 0..dims.len() {
        t[k] = idx / strides[k];
        idx %= strides[k];
    }
    t
}

/// Traces out every tensor factor not listed in `keep` (ascending order);
/// kept factors stay in their original relative order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> CMatrix {
    let total: usize = dims.iter().product();
    assert_eq!(m.nrows(), total, "dims do not match the matrix");
    assert!(keep.windows(2).all(|w| w[0] < w[1]), "keep must be ascending");
    let st = strides(dims);
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let d_keep: usize = keep.iter().map(|&k| dims[k]).product();
    let d_tr: usize = traced.iter().map(|&k| dims[k]).product();
    let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let keep_st = strides(&keep_dims);
    let tr_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let tr_st = strides(&tr_dims);

    let mut out = CMatrix::zeros(d_keep.max(1), d_keep.max(1));
    for r in 0..d_keep {
        let rt = decode(r, &keep_dims, &keep_st);
        for c in 0..d_keep {
            let ct = decode(c, &keep_dims, &keep_st);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..d_tr.max(1) {
                let tt = if d_tr == 0 { vec![] } else { decode(t, &tr_dims, &tr_st) };
                let mut row = 0;
                let mut col = 0;
                for (pos, &k) in keep.iter().enumerate() {
                    row += rt[pos] * st[k];
                    col += ct[pos] * st[k];
                }
                for (pos, &k) in traced.iter().enumerate() {
                    row += tt[pos] * st[k];
                    col += tt[pos] * st[k];
                }
                acc += m[(row, col)];
            }
            out[(r, c)] = acc;
        }
    }
    out
}

/// Reorders tensor factors so that new slot `k` carries old factor
/// `perm[k]`.
pub fn permute_systems(m: &CMatrix, dims: &[usize], perm: &[usize]) -> CMatrix {
    let total: usize = dims.iter().product();
    assert_eq!(m.nrows(), total);
    assert_eq!(perm.len(), dims.len());
    let st = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_st = strides(&new_dims);
    let mut out = CMatrix::zeros(total, total);
    for r in 0..total {
        let rt = decode(r, &new_dims, &new_st);
        let old_r: usize = perm.iter().enumerate().map(|(k, &p)| rt[k] * st[p]).sum();
        for c in 0..total {
            let ct = decode(c, &new_dims, &new_st);
            let old_c: usize = perm.iter().enumerate().map(|(k, &p)| ct[k] * st[p]).sum();
            out[(r, c)] = m[(old_r, old_c)];
        }
    }
    out
}

/// Real encoding of a Hermitian matrix: diagonal, then `√2·Re` of the
/// upper triangle, then `√2·Im` of the upper triangle (row-major pairs).
pub fn svec(h: &CMatrix) -> DVector<f64> {
    let d = h.nrows();
    let mut v = DVector::zeros(d * d);
    for i in 0..d {
        v[i] = h[(i, i)].re;
    }
    let mut k = d;
    let s = std::f64::consts::SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            v[k] = s * h[(i, j)].re;
            v[k + d * (d - 1) / 2] = s * h[(i, j)].im;
            k += 1;
        }
    }
    v
}

pub fn unsvec(v: &DVector<f64>, d: usize) -> CMatrix {
    assert_eq!(v.len(), d * d);
    let mut h = CMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = cplx(v[i]);
    }
    let mut k = d;
    let s = std::f64::consts::SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let re = v[k] / s;
            let im = v[k + d * (d - 1) / 2] / s;
            h[(i, j)] = Complex64::new(re, im);
            h[(j, i)] = Complex64::new(re, -im);
            k += 1;
        }
    }
    h
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// unitary eigenvector columns. The input is symmetrized first to absorb
/// rounding noise.
pub fn eigh(h: &CMatrix) -> (DVector<f64>, CMatrix) {
    let se = hermitize(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals = DVector::from_iterator(order.len(), order.iter().map(|&i| se.eigenvalues[i]));
    let vecs = CMatrix::from_columns(
        &order.iter().map(|&i| se.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    (vals, vecs)
}

pub fn max_eigenvalue(h: &CMatrix) -> f64 {
    let (vals, _) = eigh(h);
    vals[vals.len() - 1]
}

pub fn min_eigenvalue(h: &CMatrix) -> f64 {
    let (vals, _) = eigh(h);
    vals[0]
}

fn rebuild(vals: &DVector<f64>, vecs: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let d = vecs.nrows();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..vals.len() {
        let col = vecs.column(k).into_owned();
        let fv = f(vals[k]);
        if fv != 0.0 {
            out += (&col * col.adjoint()).map(|v| v * fv);
        }
    }
    out
}

/// Nearest positive semidefinite matrix (eigenvalue clipping).
pub fn psd_project(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(h);
    rebuild(&vals, &vecs, |x| x.max(0.0))
}

/// Orthogonal projector onto the span of eigenvectors with eigenvalue
/// `≥ -tol` kept strictly positive, plus half of any exact-zero freedom is
/// irrelevant for the optimal-discrimination use here: eigenvalues `> tol`
/// count as positive.
pub fn positive_eigenspace_projector(h: &CMatrix, tol: f64) -> CMatrix {
    let (vals, vecs) = eigh(h);
    rebuild(&vals, &vecs, |x| if x > tol { 1.0 } else { 0.0 })
}

pub fn sqrt_psd(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(h);
    rebuild(&vals, &vecs, |x| x.max(0.0).sqrt())
}

/// Pseudo inverse square root: eigenvalues at or below `eps` map to zero.
pub fn inv_sqrt_psd(h: &CMatrix, eps: f64) -> CMatrix {
    let (vals, vecs) = eigh(h);
    rebuild(&vals, &vecs, |x| if x > eps { 1.0 / x.sqrt() } else { 0.0 })
}

/// Trace norm (sum of singular values).
pub fn trace_norm(m: &CMatrix) -> f64 {
    if is_hermitian(m, 1e-12) {
        let (vals, _) = eigh(m);
        vals.iter().map(|v| v.abs()).sum()
    } else {
        m.clone().svd(false, false).singular_values.iter().sum()
    }
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    if is_hermitian(m, 1e-12) {
        let (vals, _) = eigh(m);
        vals.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    } else {
        m.clone()
            .svd(false, false)
            .singular_values
            .iter()
            .fold(0.0f64, |a, &v| a.max(v))
    }
}

/// Real matrix of a Hermitian-to-Hermitian linear map in the `svec` basis,
/// `d_out² × d_in²`; used to project onto affine constraints on such maps.
pub fn real_rep(
    f: impl Fn(&CMatrix) -> CMatrix,
    d_in: usize,
    d_out: usize,
) -> DMatrix<f64> {
    let n_in = d_in * d_in;
    let n_out = d_out * d_out;
    let mut m = DMatrix::zeros(n_out, n_in);
    for k in 0..n_in {
        let mut e = DVector::zeros(n_in);
        e[k] = 1.0;
        let img = f(&unsvec(&e, d_in));
        m.set_column(k, &svec(&img));
    }
    m
}

/// Discrete Fourier transform unitary, `F[j, k] = e^{2πi jk/d}/√d`.
pub fn fourier_matrix(d: usize) -> CMatrix {
    let scale = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |j, k| {
        let phase = std::f64::consts::TAU * (j * k) as f64 / d as f64;
        Complex64::new(0.0, phase).exp() * scale
    })
}

// ====================================================================
// random generators
// ====================================================================

pub fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u1.ln()).sqrt();
    Complex64::new(r * u2.cos(), r * u2.sin())
}

pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    hermitize(&ginibre(d, d, rng))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the standard
/// phase fix.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { cplx(1.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_psd<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    &g * g.adjoint()
}

pub fn random_density_matrix<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let w = random_psd(d, rng);
    let t = trace(&w).re;
    w.map(|v| v / t)
}

/// Random `n`-outcome measurement: independent Wishart effects symmetrized
/// to completeness by the inverse square root of their sum.
pub fn random_povm_effects<R: Rng>(d: usize, n: usize, rng: &mut R) -> Vec<CMatrix> {
    let parts: Vec<CMatrix> = (0..n).map(|_| random_psd(d, rng)).collect();
    let mut s = CMatrix::zeros(d, d);
    for p in &parts {
        s += p;
    }
    let si = inv_sqrt_psd(&s, 1e-12);
    parts.iter().map(|p| &si * p * &si).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pauli_z() -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_vec(vec![cplx(1.0), cplx(-1.0)]))
    }

    #[test]
    fn partial_trace_of_product_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_density_matrix(2, &mut rng);
        let b = random_density_matrix(3, &mut rng);
        let ab = kron(&a, &b);
        let ta = partial_trace(&ab, &[2, 3], &[0]);
        let tb = partial_trace(&ab, &[2, 3], &[1]);
        assert!((ta - &a).camax() < 1e-12);
        assert!((tb - &b).camax() < 1e-12);
        // tracing everything leaves the scalar trace
        let full = partial_trace(&ab, &[2, 3], &[]);
        assert!((full[(0, 0)] - cplx(1.0)).norm() < 1e-12);
    }

    #[test]
    fn permutation_swaps_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_hermitian(2, &mut rng);
        let b = random_hermitian(3, &mut rng);
        let ab = kron(&a, &b);
        let ba = permute_systems(&ab, &[2, 3], &[1, 0]);
        assert!((ba - kron(&b, &a)).camax() < 1e-12);
        // three factors: rotate left
        let c = random_hermitian(2, &mut rng);
        let abc = kron(&kron(&a, &b), &c);
        let bca = permute_systems(&abc, &[2, 3, 2], &[1, 2, 0]);
        assert!((bca - kron(&kron(&b, &c), &a)).camax() < 1e-12);
    }

    #[test]
    fn svec_is_a_hilbert_schmidt_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2usize, 3, 4] {
            let a = random_hermitian(d, &mut rng);
            let b = random_hermitian(d, &mut rng);
            let lhs = hs_inner(&a, &b).re;
            let rhs = svec(&a).dot(&svec(&b));
            assert!((lhs - rhs).abs() < 1e-10, "d={d}: {lhs} vs {rhs}");
            let back = unsvec(&svec(&a), d);
            assert!((back - &a).camax() < 1e-12);
        }
    }

    #[test]
    fn eigh_reconstructs_and_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_hermitian(4, &mut rng);
        let (vals, vecs) = eigh(&h);
        for k in 1..vals.len() {
            assert!(vals[k] >= vals[k - 1]);
        }
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(4, vals.iter().map(|&v| cplx(v))));
        let rec = &vecs * diag * vecs.adjoint();
        assert!((rec - &h).camax() < 1e-9);
        assert!((&vecs * vecs.adjoint() - identity_c(4)).camax() < 1e-10);
    }

    #[test]
    fn psd_projection_clips_negative_part() {
        let z = pauli_z();
        let p = psd_project(&z);
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![cplx(1.0), cplx(0.0)]));
        assert!((p - expect).camax() < 1e-12);
        let proj = positive_eigenspace_projector(&z, 1e-12);
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![cplx(1.0), cplx(0.0)]));
        assert!((proj - expect).camax() < 1e-12);
    }

    #[test]
    fn norms_on_pauli_z() {
        let z = pauli_z();
        assert!((trace_norm(&z) - 2.0).abs() < 1e-12);
        assert!((op_norm(&z) - 1.0).abs() < 1e-12);
        assert!((max_eigenvalue(&z) - 1.0).abs() < 1e-12);
        assert!((min_eigenvalue(&z) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_and_inverse_sqrt_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_psd(3, &mut rng);
        let s = sqrt_psd(&p);
        assert!((&s * &s - &p).camax() < 1e-9);
        let si = inv_sqrt_psd(&p, 1e-12);
        assert!((&si * &p * &si - identity_c(3)).camax() < 1e-8);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for d in [2usize, 3] {
            let u = random_unitary(d, &mut rng);
            assert!((&u * u.adjoint() - identity_c(d)).camax() < 1e-10);
        }
    }

    #[test]
    fn random_povm_is_complete_and_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let effects = random_povm_effects(3, 4, &mut rng);
        let mut s = CMatrix::zeros(3, 3);
        for e in &effects {
            assert!(min_eigenvalue(e) > -1e-10);
            s += e;
        }
        assert!((s - identity_c(3)).camax() < 1e-9);
    }

    #[test]
    fn real_rep_matches_the_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_hermitian(2, &mut rng);
        // conjugation by a fixed Hermitian matrix is Hermiticity preserving
        let f = |h: &CMatrix| &a * h * &a;
        let m = real_rep(f, 2, 2);
        let h = random_hermitian(2, &mut rng);
        let via_matrix = unsvec(&(&m * svec(&h)), 2);
        assert!((via_matrix - f(&h)).camax() < 1e-10);
    }
}
