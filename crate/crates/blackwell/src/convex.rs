//! Linear programming and convex-geometry kernels.
//!
//! Everything here is finite-dimensional and dense: a two-phase simplex
//! solver with Bland's anti-cycling rule, a minimum-norm-point projector
//! onto vertex hulls, point/hull separation built on that projection, and
//! bilinear minimax over polytope vertex sets. These kernels back the
//! channel-comparison decisions, so they return certificates (optimizers,
//! duals, weights) rather than bare values.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Feasibility and decision tolerance for LP verdicts.
pub const LP_TOL: f64 = 1e-9;
/// Target duality gap for the min-norm-point iteration.
pub const MIN_NORM_GAP: f64 = 1e-10;

const PIVOT_EPS: f64 = 1e-11;
const RC_EPS: f64 = 1e-10;

// ====================================================================
// linear programs
// ====================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// One linear constraint `coeffs · x  (≤ | ≥ | =)  rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Per-variable domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// `x ≥ value`.
    Lower(f64),
    Free,
}

impl Bound {
    pub const NON_NEGATIVE: Bound = Bound::Lower(0.0);
}

/// Dense linear program over finitely many variables.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LinearProgram {
    /// Program with all variables nonnegative.
    pub fn new(sense: Sense, objective: Vec<f64>, constraints: Vec<Constraint>) -> Self {
        let bounds = vec![Bound::NON_NEGATIVE; objective.len()];
        Self { sense, objective, constraints, bounds }
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if n == 0 {
            return Err(Error::InvalidInput("no variables".into()));
        }
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "constraint has {} coefficients for {n} variables",
                    c.coeffs.len()
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("non-finite constraint data".into()));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite objective".into()));
        }
        Ok(())
    }
}

/// Optimal point with its certificate.
///
/// `duals` holds one multiplier per constraint, in the order given;
/// `dual_value` is the dual objective, which matches `value` within
/// [`LP_TOL`] whenever the solve succeeds.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub duals: Vec<f64>,
    pub dual_value: f64,
}

/// Internal standard form: min c·z, T z = rhs, z ≥ 0.
struct Tableau {
    /// `m × (n_cols + 1)` matrix; last column is the rhs.
    t: DMatrix<f64>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> f64 {
        self.t[(row, self.n_cols)]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[(row, col)];
        for j in 0..=self.n_cols {
            self.t[(row, j)] /= piv;
        }
        for i in 0..self.t.nrows() {
            if i == row {
                continue;
            }
            let factor = self.t[(i, col)];
            if factor != 0.0 {
                for j in 0..=self.n_cols {
                    let delta = factor * self.t[(row, j)];
                    self.t[(i, j)] -= delta;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Simplex with Bland's entering rule: lowest eligible column index.
    /// The leaving row is the one with the largest pivot element among the
    /// minimum-ratio rows, which keeps the tableau well conditioned on
    /// degenerate instances; near-equal magnitudes fall back to Bland's
    /// lowest basis index. `allowed` masks columns that may enter.
    fn simplex(&mut self, costs: &[f64], allowed: &[bool]) -> Result<()> {
        let m = self.t.nrows();
        let max_pivots = 1000 + 200 * (self.n_cols + m);
        for _ in 0..max_pivots {
            // reduced costs from scratch keep the update numerically honest
            let mut entering = None;
            for j in 0..self.n_cols {
                if !allowed[j] {
                    continue;
                }
                let mut rc = costs[j];
                for i in 0..m {
                    rc -= costs[self.basis[i]] * self.t[(i, j)];
                }
                if rc < -RC_EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(e) = entering else { return Ok(()) };
            let mut min_ratio = f64::INFINITY;
            for i in 0..m {
                let a = self.t[(i, e)];
                if a > PIVOT_EPS {
                    min_ratio = min_ratio.min(self.rhs(i) / a);
                }
            }
            if min_ratio.is_infinite() {
                return Err(Error::Unbounded);
            }
            // a tiny pivot element amplifies roundoff through the whole
            // tableau, so take the sturdiest row the ratio test allows
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.t[(i, e)];
                if a > PIVOT_EPS && self.rhs(i) / a <= min_ratio + PIVOT_EPS {
                    let better = match leaving {
                        None => true,
                        Some((bi, ba)) => {
                            a > 1.001 * ba || (a > 0.999 * ba && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        leaving = Some((i, a));
                    }
                }
            }
            let (r, _) = leaving.expect("the ratio test found a finite minimum");
            self.pivot(r, e);
        }
        Err(Error::IterationLimit("simplex"))
    }

    fn objective(&self, costs: &[f64]) -> f64 {
        (0..self.t.nrows())
            .map(|i| costs[self.basis[i]] * self.rhs(i))
            .sum()
    }
}

/// Solves a dense LP by two-phase simplex.
///
/// Certificates: the optimizer, one dual per constraint, and the dual
/// objective. On success the primal/dual objectives agree within
/// [`LP_TOL`] and the KKT residuals are of the same order.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.objective.len();
    let m = lp.constraints.len();

    // objective in min form
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };

    // column map: variable j → (first column, optional negative column), offset
    let mut offsets = vec![0.0; n];
    let mut col_of = Vec::with_capacity(n);
    let mut n_struct = 0usize;
    for (j, b) in lp.bounds.iter().enumerate() {
        match *b {
            Bound::Lower(l) => {
                if !l.is_finite() {
                    return Err(Error::InvalidInput("non-finite lower bound".into()));
                }
                offsets[j] = l;
                col_of.push((n_struct, None));
                n_struct += 1;
            }
            Bound::Free => {
                col_of.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            }
        }
    }
    let n_slack = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let n_cols = n_struct + n_slack + m; // artificials last, one per row
    let art0 = n_struct + n_slack;

    let mut t = DMatrix::zeros(m, n_cols + 1);
    let mut row_negated = vec![false; m];
    let mut slack_idx = 0usize;
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut rhs = c.rhs;
        for (j, &a) in c.coeffs.iter().enumerate() {
            rhs -= a * offsets[j];
            let (pos, neg) = col_of[j];
            t[(i, pos)] += a;
            if let Some(neg) = neg {
                t[(i, neg)] -= a;
            }
        }
        match c.relation {
            Relation::Le => {
                t[(i, n_struct + slack_idx)] = 1.0;
                slack_idx += 1;
            }
            Relation::Ge => {
                t[(i, n_struct + slack_idx)] = -1.0;
                slack_idx += 1;
            }
            Relation::Eq => {}
        }
        if rhs < 0.0 {
            row_negated[i] = true;
            rhs = -rhs;
            for j in 0..n_cols {
                t[(i, j)] = -t[(i, j)];
            }
        }
        t[(i, n_cols)] = rhs;
        t[(i, art0 + i)] = 1.0;
    }

    let mut tab = Tableau { t, basis: (art0..art0 + m).collect(), n_cols };

    // phase 1: drive artificials to zero
    let mut phase1_costs = vec![0.0; n_cols];
    for j in art0..n_cols {
        phase1_costs[j] = 1.0;
    }
    let allowed_all: Vec<bool> = vec![true; n_cols];
    tab.simplex(&phase1_costs, &allowed_all)?;
    let scale = 1.0 + tab.t.column(n_cols).amax();
    if tab.objective(&phase1_costs) > LP_TOL * scale {
        return Err(Error::Infeasible);
    }
    // pivot remaining basic artificials out where possible; phase 1 leaves
    // them below LP_TOL, so snap the row value to an exact zero first lest
    // a small pivot element blow the residue up into a real infeasibility
    let nc = tab.n_cols;
    for i in 0..m {
        if tab.basis[i] >= art0 {
            tab.t[(i, nc)] = 0.0;
            let j = (0..art0)
                .max_by(|&a, &b| tab.t[(i, a)].abs().total_cmp(&tab.t[(i, b)].abs()));
            match j {
                Some(j) if tab.t[(i, j)].abs() > 1e-8 => tab.pivot(i, j),
                // redundant row: the artificial stays basic at zero and is
                // locked out of phase 2, which keeps it at zero
                _ => {}
            }
        }
    }

    // phase 2 on the real objective; artificial columns stay in the tableau
    // (they hold the basis inverse for dual extraction) but cannot enter
    let mut costs = vec![0.0; n_cols];
    for (j, &(pos, neg)) in col_of.iter().enumerate() {
        costs[pos] = sign * lp.objective[j];
        if let Some(neg) = neg {
            costs[neg] = -sign * lp.objective[j];
        }
    }
    let mut allowed = vec![true; n_cols];
    for a in allowed.iter_mut().skip(art0) {
        *a = false;
    }
    tab.simplex(&costs, &allowed)?;

    // primal solution in original variables
    let mut z = vec![0.0; n_cols];
    for i in 0..m {
        z[tab.basis[i]] = tab.rhs(i);
    }
    let mut x = vec![0.0; n];
    for (j, &(pos, neg)) in col_of.iter().enumerate() {
        x[j] = z[pos] - neg.map_or(0.0, |neg| z[neg]) + offsets[j];
    }

    // the ratio test preserves feasibility in exact arithmetic only; audit
    // the assembled point so numerical corruption cannot pass for an optimum
    let mut worst = 0.0_f64;
    for c in &lp.constraints {
        let lhs: f64 = c.coeffs.iter().zip(&x).map(|(a, v)| a * v).sum();
        worst = worst.max(match c.relation {
            Relation::Le => lhs - c.rhs,
            Relation::Ge => c.rhs - lhs,
            Relation::Eq => (lhs - c.rhs).abs(),
        });
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if let Bound::Lower(l) = *b {
            worst = worst.max(l - x[j]);
        }
    }
    if worst > 1e3 * LP_TOL * scale {
        return Err(Error::Ambiguous(format!(
            "simplex lost primal feasibility (residual {worst:.3e})"
        )));
    }

    let offset_cost: f64 = (0..n).map(|j| sign * lp.objective[j] * offsets[j]).sum();
    let value_min = tab.objective(&costs) + offset_cost;

    // duals: y = c_B B^{-1}; the artificial block of the final tableau is B^{-1}
    let mut duals = vec![0.0; m];
    let mut dual_value_min = offset_cost;
    for i in 0..m {
        let mut y = 0.0;
        for k in 0..m {
            y += costs[tab.basis[k]] * tab.t[(k, art0 + i)];
        }
        if row_negated[i] {
            y = -y;
        }
        duals[i] = sign * y;
        // rhs in shifted coordinates: original rhs minus offset contribution
        let shifted_rhs = lp.constraints[i].rhs
            - lp.constraints[i]
                .coeffs
                .iter()
                .zip(&offsets)
                .map(|(a, o)| a * o)
                .sum::<f64>();
        dual_value_min += y * shifted_rhs;
    }

    Ok(LpSolution {
        value: sign * value_min,
        x,
        duals,
        dual_value: sign * dual_value_min,
    })
}

// ====================================================================
// vertex hulls: projection, separation, inclusion
// ====================================================================

/// Convex hull given by a finite vertex list in `R^dim`.
#[derive(Debug, Clone)]
pub struct PointCloudHull {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl PointCloudHull {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidInput("hull needs at least one vertex".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidInput("zero-dimensional hull".into()));
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vertex of length {} in a {dim}-dimensional hull",
                    v.len()
                )));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput("non-finite vertex".into()));
            }
        }
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projection of `y` onto the hull.
#[derive(Debug, Clone)]
pub struct MinNormPoint {
    pub point: Vec<f64>,
    /// Convex weights over the hull's vertices; `point = Σ weights·vertex`.
    pub weights: Vec<f64>,
    pub distance: f64,
    /// Conditional-gradient duality gap at the returned point; bounds the
    /// suboptimality of `distance²/2`.
    pub gap: f64,
}

/// Affine minimizer of `‖Σ αₖ·vₖ − y‖` over `Σ αₖ = 1` for the support
/// vertices, via the KKT system of the equality-constrained least squares.
/// An SVD solve keeps affinely dependent supports (duplicate or collinear
/// vertices) from derailing the step.
fn affine_minimizer(verts: &[Vec<f64>], support: &[usize], y: &[f64]) -> Option<Vec<f64>> {
    let s = support.len();
    if s == 1 {
        return Some(vec![1.0]);
    }
    let mut kkt = DMatrix::zeros(s + 1, s + 1);
    let mut rhs = DVector::zeros(s + 1);
    for a in 0..s {
        for b in 0..=a {
            let g = dot(&verts[support[a]], &verts[support[b]]);
            kkt[(a, b)] = g;
            kkt[(b, a)] = g;
        }
        kkt[(a, s)] = 1.0;
        kkt[(s, a)] = 1.0;
        rhs[a] = dot(&verts[support[a]], y);
    }
    rhs[s] = 1.0;
    let svd = kkt.svd(true, true);
    let eps = 1e-12 * (1.0 + svd.singular_values.amax());
    let sol = svd.solve(&rhs, eps).ok()?;
    Some(sol.as_slice()[..s].to_vec())
}

/// Nearest point of the hull to `y`, by Wolfe's minimum-norm-point scheme:
/// each round brings in the vertex the current gradient favors, projects
/// onto the affine span of the active set, and walks back to the simplex
/// boundary whenever a weight would cross zero, dropping the blocker. The
/// fully corrective step avoids the zigzag stall plain conditional-gradient
/// iterations suffer on thin hulls, and it terminates because no active set
/// repeats.
///
/// Returns once the conditional-gradient duality gap falls below
/// [`MIN_NORM_GAP`] (tightened to `1e-14·(1 + ‖y‖²)` when that is smaller);
/// `gap` reports the value recomputed at the returned point.
pub fn min_norm_point(hull: &PointCloudHull, y: &[f64]) -> Result<MinNormPoint> {
    if y.len() != hull.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} vs hull dimension {}",
            y.len(),
            hull.dim()
        )));
    }
    let verts = hull.vertices();
    let nv = verts.len();
    let dim = hull.dim();
    let scale = 1.0 + dot(y, y);
    let gap_tol = MIN_NORM_GAP.min(1e-14 * scale);

    let start = (0..nv)
        .min_by(|&a, &b| {
            let da: f64 = verts[a].iter().zip(y).map(|(v, t)| (v - t) * (v - t)).sum();
            let db: f64 = verts[b].iter().zip(y).map(|(v, t)| (v - t) * (v - t)).sum();
            da.total_cmp(&db)
        })
        .expect("hull has at least one vertex");
    let mut support = vec![start];
    let mut w = vec![1.0];
    let mut x = verts[start].clone();

    // each round settles a fresh active set, so the guard only cuts short
    // floating-point dithering, never honest progress
    let max_major = 16 * (nv + dim) + 64;
    for _ in 0..max_major {
        let grad: Vec<f64> = (0..dim).map(|i| x[i] - y[i]).collect();
        let mut fw = 0;
        let mut fw_val = f64::INFINITY;
        for (k, v) in verts.iter().enumerate() {
            let g = dot(&grad, v);
            if g < fw_val {
                fw_val = g;
                fw = k;
            }
        }
        if dot(&grad, &x) - fw_val <= gap_tol {
            break;
        }
        if support.contains(&fw) {
            // the corrective step already exploited this vertex, so the
            // remaining gap is numerical noise
            break;
        }
        support.push(fw);
        w.push(0.0);

        // minor cycles: every pass either accepts the affine minimizer or
        // drops at least one vertex, so the bound is never the exit path
        let mut stalled = false;
        for _ in 0..support.len() + 4 {
            let Some(alpha) = affine_minimizer(verts, &support, y) else {
                stalled = true;
                break;
            };
            if alpha.iter().all(|&a| a >= -1e-12) {
                w = alpha.iter().map(|a| a.max(0.0)).collect();
                break;
            }
            // longest feasible step toward the affine minimizer
            let mut theta = 1.0_f64;
            for (wk, ak) in w.iter().zip(&alpha) {
                if *ak < -1e-12 {
                    theta = theta.min(wk / (wk - ak));
                }
            }
            for (wk, ak) in w.iter_mut().zip(&alpha) {
                *wk += theta * (ak - *wk);
            }
            let before = support.len();
            let mut k = 0;
            while k < support.len() {
                if w[k] <= 1e-12 {
                    support.swap_remove(k);
                    w.swap_remove(k);
                } else {
                    k += 1;
                }
            }
            if support.len() == before {
                stalled = true;
                break;
            }
        }

        // weights sum to one by construction; renormalize the residue away
        let total: f64 = w.iter().sum();
        for wk in w.iter_mut() {
            *wk /= total;
        }
        x = vec![0.0; dim];
        for (&k, &wk) in support.iter().zip(&w) {
            for i in 0..dim {
                x[i] += wk * verts[k][i];
            }
        }
        if stalled {
            break;
        }
    }

    let mut weights = vec![0.0; nv];
    for (&k, &wk) in support.iter().zip(&w) {
        weights[k] = wk;
    }
    let point = x;
    let grad: Vec<f64> = (0..dim).map(|i| point[i] - y[i]).collect();
    let fw_val = verts.iter().map(|v| dot(&grad, v)).fold(f64::INFINITY, f64::min);
    let gap = (dot(&grad, &point) - fw_val).max(0.0);
    let distance = point
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(MinNormPoint { point, weights, distance, gap })
}

/// Hyperplane `k·x = α` with the hull strictly below and `y` strictly above.
#[derive(Debug, Clone)]
pub struct SeparatingHyperplane {
    pub normal: Vec<f64>,
    pub threshold: f64,
}

/// Verdict of [`separate_point`].
#[derive(Debug, Clone)]
pub enum Separation {
    /// `y` lies within distance [`LP_TOL`] of the hull; carries the nearest
    /// point found.
    Inside { nearest: Vec<f64>, distance: f64 },
    Separated(SeparatingHyperplane),
}

/// Decides membership of `y` in the hull; when outside, produces the
/// hyperplane through the midpoint of `y` and its projection `x₀`:
/// `k = y − x₀`, `α = ½(k·x₀ + k·y)`, so both sides clear the plane by
/// `‖k‖²/2`.
pub fn separate_point(hull: &PointCloudHull, y: &[f64]) -> Result<Separation> {
    let mnp = min_norm_point(hull, y)?;
    if mnp.distance <= LP_TOL {
        return Ok(Separation::Inside { nearest: mnp.point, distance: mnp.distance });
    }
    let normal: Vec<f64> = y.iter().zip(&mnp.point).map(|(a, b)| a - b).collect();
    let threshold = 0.5 * (dot(&normal, &mnp.point) + dot(&normal, y));
    Ok(Separation::Separated(SeparatingHyperplane { normal, threshold }))
}

/// How [`hull_inclusion`] should certify the answer.
#[derive(Debug, Clone)]
pub enum InclusionMode {
    /// Test every vertex of the candidate subset hull; exact.
    Exhaustive,
    /// Compare support functions along the given directions; sound when it
    /// reports failure, heuristic when it reports inclusion.
    Directions(Vec<Vec<f64>>),
}

/// Outcome of a hull-inclusion query.
#[derive(Debug, Clone)]
pub enum Inclusion {
    Holds,
    Fails {
        /// Vertex of the inner hull that escapes (exhaustive mode).
        point: Option<Vec<f64>>,
        /// Direction along which the inner hull out-reaches the outer one.
        direction: Vec<f64>,
        excess: f64,
    },
}

/// Tests whether `hull(c2) ⊆ hull(c1)`.
pub fn hull_inclusion(
    c1: &PointCloudHull,
    c2: &PointCloudHull,
    mode: &InclusionMode,
) -> Result<Inclusion> {
    if c1.dim() != c2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "hull dimensions {} vs {}",
            c1.dim(),
            c2.dim()
        )));
    }
    match mode {
        InclusionMode::Exhaustive => {
            for v in c2.vertices() {
                if let Separation::Separated(h) = separate_point(c1, v)? {
                    let excess = dot(&h.normal, v) - h.threshold;
                    return Ok(Inclusion::Fails {
                        point: Some(v.clone()),
                        direction: h.normal,
                        excess,
                    });
                }
            }
            Ok(Inclusion::Holds)
        }
        InclusionMode::Directions(dirs) => {
            for k in dirs {
                if k.len() != c1.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "direction of length {} vs hull dimension {}",
                        k.len(),
                        c1.dim()
                    )));
                }
                let sup1 = c1
                    .vertices()
                    .iter()
                    .map(|v| dot(k, v))
                    .fold(f64::NEG_INFINITY, f64::max);
                let (arg2, sup2) = c2
                    .vertices()
                    .iter()
                    .map(|v| (v, dot(k, v)))
                    .fold((None, f64::NEG_INFINITY), |acc, (v, s)| {
                        if s > acc.1 { (Some(v), s) } else { acc }
                    });
                if sup2 > sup1 + LP_TOL {
                    return Ok(Inclusion::Fails {
                        point: arg2.cloned(),
                        direction: k.clone(),
                        excess: sup2 - sup1,
                    });
                }
            }
            Ok(Inclusion::Holds)
        }
    }
}

/// Exhaustive inclusion up to `vertex_cap` inner vertices; beyond the cap,
/// falls back to sampled directions (seeded unit vectors plus the inner
/// vertices recentred on the outer hull's mean).
pub fn hull_inclusion_capped(
    c1: &PointCloudHull,
    c2: &PointCloudHull,
    vertex_cap: usize,
    n_directions: usize,
    seed: u64,
) -> Result<Inclusion> {
    if c2.vertices().len() <= vertex_cap {
        return hull_inclusion(c1, c2, &InclusionMode::Exhaustive);
    }
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = c1.dim();
    let mut centre = vec![0.0; dim];
    for v in c1.vertices() {
        for i in 0..dim {
            centre[i] += v[i] / c1.vertices().len() as f64;
        }
    }
    let mut dirs: Vec<Vec<f64>> = c2
        .vertices()
        .iter()
        .map(|v| (0..dim).map(|i| v[i] - centre[i]).collect())
        .collect();
    for _ in 0..n_directions {
        let d: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        dirs.push(d);
    }
    dirs.retain(|d| dot(d, d) > 1e-18);
    hull_inclusion(c1, c2, &InclusionMode::Directions(dirs))
}

// ====================================================================
// bilinear minimax
// ====================================================================

/// Bilinear game over vertex sets: rows are the minimizer's vertices,
/// columns the maximizer's, entries the payoff to the maximizer.
#[derive(Debug, Clone)]
pub struct BilinearGame {
    payoff: DMatrix<f64>,
}

impl BilinearGame {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        if nr == 0 || nc == 0 {
            return Err(Error::InvalidInput("empty payoff matrix".into()));
        }
        if rows.iter().any(|r| r.len() != nc) {
            return Err(Error::DimensionMismatch("ragged payoff matrix".into()));
        }
        let mut payoff = DMatrix::zeros(nr, nc);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidInput("non-finite payoff".into()));
                }
                payoff[(i, j)] = v;
            }
        }
        Ok(Self { payoff })
    }

    pub fn payoff(&self) -> &DMatrix<f64> {
        &self.payoff
    }
}

/// Saddle value and optimal mixed strategies of a bilinear game.
#[derive(Debug, Clone)]
pub struct MinimaxSolution {
    /// `max over maximizer mixes of min over minimizer rows`.
    pub maximin: f64,
    /// `min over minimizer mixes of max over maximizer columns`.
    pub minimax: f64,
    pub min_strategy: Vec<f64>,
    pub max_strategy: Vec<f64>,
}

/// Solves both one-sided LPs of a bilinear game and checks that the two
/// values coincide (they must, by LP duality); disagreement beyond
/// 100·[`LP_TOL`] reports [`Error::Ambiguous`].
pub fn bilinear_minimax(game: &BilinearGame) -> Result<MinimaxSolution> {
    let f = &game.payoff;
    let (nr, nc) = (f.nrows(), f.ncols());

    // maximizer: max v s.t. for each row i: Σ_j f[i,j] q_j ≥ v, Σ q = 1
    let mut cons = Vec::with_capacity(nr + 1);
    for i in 0..nr {
        let mut coeffs: Vec<f64> = (0..nc).map(|j| f[(i, j)]).collect();
        coeffs.push(-1.0);
        cons.push(Constraint { coeffs, relation: Relation::Ge, rhs: 0.0 });
    }
    let mut sum_row = vec![1.0; nc];
    sum_row.push(0.0);
    cons.push(Constraint { coeffs: sum_row, relation: Relation::Eq, rhs: 1.0 });
    let mut obj = vec![0.0; nc];
    obj.push(1.0);
    let mut bounds = vec![Bound::NON_NEGATIVE; nc];
    bounds.push(Bound::Free);
    let lp_max = LinearProgram { sense: Sense::Maximize, objective: obj, constraints: cons, bounds };
    let sol_max = solve_lp(&lp_max)?;

    // minimizer: min w s.t. for each column j: Σ_i f[i,j] p_i ≤ w, Σ p = 1
    let mut cons = Vec::with_capacity(nc + 1);
    for j in 0..nc {
        let mut coeffs: Vec<f64> = (0..nr).map(|i| f[(i, j)]).collect();
        coeffs.push(-1.0);
        cons.push(Constraint { coeffs, relation: Relation::Le, rhs: 0.0 });
    }
    let mut sum_row = vec![1.0; nr];
    sum_row.push(0.0);
    cons.push(Constraint { coeffs: sum_row, relation: Relation::Eq, rhs: 1.0 });
    let mut obj = vec![0.0; nr];
    obj.push(1.0);
    let mut bounds = vec![Bound::NON_NEGATIVE; nr];
    bounds.push(Bound::Free);
    let lp_min = LinearProgram { sense: Sense::Minimize, objective: obj, constraints: cons, bounds };
    let sol_min = solve_lp(&lp_min)?;

    let maximin = sol_max.value;
    let minimax = sol_min.value;
    if (maximin - minimax).abs() > 100.0 * LP_TOL {
        return Err(Error::Ambiguous(format!(
            "one-sided game values disagree: {maximin} vs {minimax}"
        )));
    }
    Ok(MinimaxSolution {
        maximin,
        minimax,
        min_strategy: sol_min.x[..nr].to_vec(),
        max_strategy: sol_max.x[..nc].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // ================================================================
    // simplex
    // ================================================================

    #[test]
    fn one_variable_floor() {
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![1.0],
            vec![Constraint { coeffs: vec![1.0], relation: Relation::Ge, rhs: 3.0 }],
        );
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 3.0).abs() < 1e-12);
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
        assert!((sol.dual_value - sol.value).abs() < LP_TOL);
    }

    #[test]
    fn small_max_problem() {
        // corners: (0,0)=0, (2,0)=4, (2,2)=10, (0,4)=12
        let lp = LinearProgram::new(
            Sense::Maximize,
            vec![2.0, 3.0],
            vec![
                Constraint { coeffs: vec![1.0, 1.0], relation: Relation::Le, rhs: 4.0 },
                Constraint { coeffs: vec![1.0, 0.0], relation: Relation::Le, rhs: 2.0 },
            ],
        );
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 12.0).abs() < 1e-10);
        assert!(sol.x[0].abs() < 1e-10);
        assert!((sol.x[1] - 4.0).abs() < 1e-10);
        assert!((sol.dual_value - sol.value).abs() < LP_TOL);
    }

    #[test]
    fn infeasible_and_unbounded_are_reported() {
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![1.0],
            vec![Constraint { coeffs: vec![1.0], relation: Relation::Le, rhs: -1.0 }],
        );
        assert!(matches!(solve_lp(&lp), Err(Error::Infeasible)));
        let lp = LinearProgram::new(Sense::Maximize, vec![1.0], vec![]);
        assert!(matches!(solve_lp(&lp), Err(Error::Unbounded)));
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x+y s.t. x − y = 2, x free, y ≥ 0 → y=0, x=2
        let lp = LinearProgram {
            sense: Sense::Minimize,
            objective: vec![1.0, 1.0],
            constraints: vec![Constraint {
                coeffs: vec![1.0, -1.0],
                relation: Relation::Eq,
                rhs: 2.0,
            }],
            bounds: vec![Bound::Free, Bound::NON_NEGATIVE],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-10);
        assert!((sol.x[0] - 2.0).abs() < 1e-10);
        assert!(sol.x[1].abs() < 1e-10);
    }

    #[test]
    fn shifted_lower_bounds() {
        // min x + 2y, x ≥ 1.5, y ≥ −1, x + y ≥ 1 → x=2? corners: y=−1 → x ≥ 2
        // value 2−2=0; y free to rise but costs more. optimum (2, −1) → 0.
        let lp = LinearProgram {
            sense: Sense::Minimize,
            objective: vec![1.0, 2.0],
            constraints: vec![Constraint {
                coeffs: vec![1.0, 1.0],
                relation: Relation::Ge,
                rhs: 1.0,
            }],
            bounds: vec![Bound::Lower(1.5), Bound::Lower(-1.0)],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 0.0).abs() < 1e-10);
        assert!((sol.x[0] - 2.0).abs() < 1e-10);
        assert!((sol.x[1] + 1.0).abs() < 1e-10);
        assert!((sol.dual_value - sol.value).abs() < LP_TOL);
    }

    #[test]
    fn duality_holds_on_seeded_random_programs() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..60 {
            let n = rng.random_range(2..=5);
            let m = rng.random_range(1..=5);
            let objective: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let mut constraints: Vec<Constraint> = (0..m)
                .map(|_| Constraint {
                    coeffs: (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    relation: Relation::Le,
                    rhs: rng.random_range(0.1..2.0), // x = 0 stays feasible
                })
                .collect();
            // cap the box so the program is bounded
            constraints.push(Constraint {
                coeffs: vec![1.0; n],
                relation: Relation::Le,
                rhs: 10.0,
            });
            let lp = LinearProgram::new(Sense::Minimize, objective.clone(), constraints.clone());
            let sol = solve_lp(&lp).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            // KKT residuals: primal feasibility and complementary value match
            for c in &constraints {
                let lhs: f64 = c.coeffs.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
                assert!(lhs <= c.rhs + 1e-8, "trial {trial} violates a constraint");
            }
            for &xi in &sol.x {
                assert!(xi >= -1e-9);
            }
            let primal: f64 = objective.iter().zip(&sol.x).map(|(c, x)| c * x).sum();
            assert!((primal - sol.value).abs() < 1e-8);
            assert!(
                (sol.value - sol.dual_value).abs() < LP_TOL * (1.0 + sol.value.abs()),
                "trial {trial}: duality gap {} vs {}",
                sol.value,
                sol.dual_value
            );
        }
    }

    // ================================================================
    // min-norm point and separation
    // ================================================================

    fn unit_square() -> PointCloudHull {
        PointCloudHull::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn projection_onto_unit_square_edge() {
        let mnp = min_norm_point(&unit_square(), &[2.0, 0.5]).unwrap();
        assert!((mnp.point[0] - 1.0).abs() < 1e-9);
        assert!((mnp.point[1] - 0.5).abs() < 1e-9);
        assert!((mnp.distance - 1.0).abs() < 1e-9);
        // weights reconstruct the point
        let verts = unit_square();
        let mut rec = [0.0, 0.0];
        for (w, v) in mnp.weights.iter().zip(verts.vertices()) {
            rec[0] += w * v[0];
            rec[1] += w * v[1];
        }
        assert!((rec[0] - mnp.point[0]).abs() < 1e-12);
        assert!((rec[1] - mnp.point[1]).abs() < 1e-12);
    }

    #[test]
    fn interior_point_projects_onto_itself() {
        let mnp = min_norm_point(&unit_square(), &[0.3, 0.4]).unwrap();
        assert!(
            mnp.distance <= 1e-9,
            "interior point not reached: distance {}",
            mnp.distance
        );
        match separate_point(&unit_square(), &[0.3, 0.4]).unwrap() {
            Separation::Inside { distance, .. } => assert!(distance <= 1e-9),
            Separation::Separated(_) => panic!("interior point separated"),
        }
    }

    #[test]
    fn separation_from_unit_square() {
        match separate_point(&unit_square(), &[2.0, 0.5]).unwrap() {
            Separation::Separated(h) => {
                assert!((h.normal[0] - 1.0).abs() < 1e-8);
                assert!(h.normal[1].abs() < 1e-8);
                assert!((h.threshold - 1.5).abs() < 1e-8);
                for v in unit_square().vertices() {
                    assert!(dot(&h.normal, v) < h.threshold - 1e-10);
                }
                assert!(dot(&h.normal, &[2.0, 0.5]) > h.threshold + 1e-10);
            }
            Separation::Inside { .. } => panic!("exterior point not separated"),
        }
    }

    #[test]
    fn separation_from_origin_singleton() {
        let hull = PointCloudHull::new(vec![vec![0.0, 0.0, 0.0]]).unwrap();
        match separate_point(&hull, &[1.0, 0.0, 0.0]).unwrap() {
            Separation::Separated(h) => {
                assert!((h.normal[0] - 1.0).abs() < 1e-12);
                assert!((h.threshold - 0.5).abs() < 1e-12);
            }
            Separation::Inside { .. } => panic!("unit vector inside the origin"),
        }
    }

    #[test]
    fn duplicate_vertices_are_harmless() {
        let hull = PointCloudHull::new(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let mnp = min_norm_point(&hull, &[1.0, 1.0]).unwrap();
        assert!((mnp.point[0] - 0.5).abs() < 1e-9);
        assert!((mnp.point[1] - 0.5).abs() < 1e-9);
    }

    /// LP membership oracle: y ∈ hull iff ∃λ ≥ 0, Σλ = 1, Σλ·v = y.
    fn lp_membership(hull: &PointCloudHull, y: &[f64]) -> bool {
        let nv = hull.vertices().len();
        let mut cons: Vec<Constraint> = (0..hull.dim())
            .map(|i| Constraint {
                coeffs: hull.vertices().iter().map(|v| v[i]).collect(),
                relation: Relation::Eq,
                rhs: y[i],
            })
            .collect();
        cons.push(Constraint { coeffs: vec![1.0; nv], relation: Relation::Eq, rhs: 1.0 });
        let lp = LinearProgram::new(Sense::Minimize, vec![0.0; nv], cons);
        match solve_lp(&lp) {
            Ok(_) => true,
            Err(Error::Infeasible) => false,
            Err(e) => panic!("membership oracle failed: {e}"),
        }
    }

    #[test]
    fn separation_verdicts_match_lp_membership_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let dim = rng.random_range(2..=4);
            let nv = rng.random_range(1..=6);
            let verts: Vec<Vec<f64>> = (0..nv)
                .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let hull = PointCloudHull::new(verts.clone()).unwrap();
            // half the probes are convex combinations (inside), half random
            let y: Vec<f64> = if trial % 2 == 0 {
                let mut w: Vec<f64> = (0..nv).map(|_| rng.random_range(0.0..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x /= s);
                (0..dim)
                    .map(|i| verts.iter().zip(&w).map(|(v, wk)| v[i] * wk).sum())
                    .collect()
            } else {
                (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()
            };
            let oracle = lp_membership(&hull, &y);
            match separate_point(&hull, &y).unwrap() {
                Separation::Inside { .. } => {
                    assert!(oracle, "trial {trial}: claimed inside, oracle says outside");
                }
                Separation::Separated(h) => {
                    assert!(!oracle, "trial {trial}: separated a member point");
                    // hyperplane really separates
                    for v in hull.vertices() {
                        assert!(dot(&h.normal, v) <= h.threshold);
                    }
                    assert!(dot(&h.normal, &y) >= h.threshold);
                }
            }
        }
    }

    #[test]
    fn hull_inclusion_exhaustive_and_sampled() {
        let inner = PointCloudHull::new(vec![
            vec![0.2, 0.2],
            vec![0.8, 0.2],
            vec![0.5, 0.8],
        ])
        .unwrap();
        let square = unit_square();
        match hull_inclusion(&square, &inner, &InclusionMode::Exhaustive).unwrap() {
            Inclusion::Holds => {}
            Inclusion::Fails { .. } => panic!("nested triangle reported outside"),
        }
        // hull is always included in itself
        match hull_inclusion(&square, &square, &InclusionMode::Exhaustive).unwrap() {
            Inclusion::Holds => {}
            Inclusion::Fails { .. } => panic!("square not included in itself"),
        }
        // a stretched square escapes, and the witness direction certifies it
        let outer = PointCloudHull::new(vec![
            vec![0.0, 0.0],
            vec![1.6, 0.0],
            vec![0.0, 1.0],
            vec![1.6, 1.0],
        ])
        .unwrap();
        match hull_inclusion(&square, &outer, &InclusionMode::Exhaustive).unwrap() {
            Inclusion::Fails { point, direction, excess } => {
                let p = point.unwrap();
                let sup: f64 = square
                    .vertices()
                    .iter()
                    .map(|v| dot(&direction, v))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(dot(&direction, &p) > sup + 1e-10);
                assert!(excess > 1e-10);
            }
            Inclusion::Holds => panic!("stretched square reported included"),
        }
        // sampled directions: sound for failure
        match hull_inclusion_capped(&square, &outer, 2, 32, 7).unwrap() {
            Inclusion::Fails { .. } => {}
            Inclusion::Holds => panic!("sampled mode missed an obvious escape"),
        }
    }

    // ================================================================
    // bilinear minimax
    // ================================================================

    #[test]
    fn matching_pennies_value_zero() {
        let game = BilinearGame::new(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let sol = bilinear_minimax(&game).unwrap();
        assert!(sol.maximin.abs() < 1e-9);
        assert!(sol.minimax.abs() < 1e-9);
        assert!((sol.min_strategy[0] - 0.5).abs() < 1e-8);
        assert!((sol.max_strategy[0] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn diagonal_game_two_thirds() {
        // max_q min(2q₀, 1−q₀) = 2/3 at q₀ = 1/3
        let game = BilinearGame::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let sol = bilinear_minimax(&game).unwrap();
        assert!((sol.maximin - 2.0 / 3.0).abs() < 1e-9);
        assert!((sol.minimax - 2.0 / 3.0).abs() < 1e-9);
        assert!((sol.max_strategy[0] - 1.0 / 3.0).abs() < 1e-8);
        assert!((sol.min_strategy[0] - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn seeded_random_games_have_matching_one_sided_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let nr = rng.random_range(2..=6);
            let nc = rng.random_range(2..=6);
            let rows: Vec<Vec<f64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.random_range(-3.0..3.0)).collect())
                .collect();
            let game = BilinearGame::new(rows).unwrap();
            let sol = bilinear_minimax(&game).unwrap();
            assert!((sol.maximin - sol.minimax).abs() <= 1e-9);
            // mixed strategies are distributions
            assert!((sol.min_strategy.iter().sum::<f64>() - 1.0).abs() < 1e-8);
            assert!((sol.max_strategy.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        }
    }
}
