//! Deciding whether one classical channel can be obtained from another by
//! post-processing, with certificates either way.
//!
//! For channels `w: X → Y` and `w2: X → Z` over a common input alphabet,
//! `w2` is a degradation of `w` when some channel `φ: Y → Z` satisfies
//! `w2 = φ ∘ w`. The decision is a linear program; when it fails, a second
//! program produces an operational witness: a correlated payload that is
//! easier to guess from the allegedly noisier output. The two programs are
//! a primal/dual pair, and both sides are solved and cross-checked here.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convex::{solve_lp, Bound, Constraint, LinearProgram, Relation, Sense};
use crate::error::{Error, Result};
use crate::probability::{
    guessing_probability, mutual_information, ClassicalChannel, JointDistribution,
};

/// Default decision tolerance for degradability verdicts.
pub const VERDICT_TOL: f64 = 1e-9;

/// Best post-processing found, with how well it reproduces the target.
#[derive(Debug, Clone)]
pub struct DegradingCertificate {
    /// Map from the first channel's output to the second's.
    pub channel: ClassicalChannel,
    /// `max |w2(z|x) − Σ_y φ(z|y) w(y|x)|`, recomputed from the map itself.
    pub residual: f64,
}

/// Payload ensemble on which the second channel beats the first at guessing.
#[derive(Debug, Clone)]
pub struct ViolationWitness {
    /// Joint over (channel input, payload); payload labels are the second
    /// channel's outputs.
    pub joint: JointDistribution,
    pub pguess_via_first: f64,
    pub pguess_via_second: f64,
    /// `pguess_via_second − pguess_via_first`, strictly positive.
    pub gap: f64,
}

/// Outcome of a degradability comparison.
#[derive(Debug, Clone)]
pub enum ComparisonVerdict {
    Degradable(DegradingCertificate),
    NotDegradable {
        witness: ViolationWitness,
        /// Residual of the best (failed) degrading map.
        residual: f64,
    },
    /// Neither a map within tolerance nor a witness beyond it.
    Ambiguous { residual: f64, advantage: f64 },
}

fn check_common_input(w: &ClassicalChannel, w2: &ClassicalChannel) -> Result<()> {
    if w.input_labels() != w2.input_labels() {
        return Err(Error::DimensionMismatch(
            "channels do not share an input alphabet".into(),
        ));
    }
    Ok(())
}

/// Clamps stray LP negatives and renormalizes each column to sum 1.
fn column_stochastic_from_lp(raw: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = raw.map(|v| if v < 0.0 { 0.0 } else { v });
    for mut col in m.column_iter_mut() {
        let s: f64 = col.iter().sum();
        if s > 0.0 {
            col /= s;
        } else {
            let n = col.len();
            col.fill(1.0 / n as f64);
        }
    }
    m
}

/// Finds the post-processing of `w`'s output that best reproduces `w2`, by
/// minimizing the worst-case entry mismatch over all channels `φ`.
///
/// Always returns the best map found; the caller judges the residual. An
/// exactly degradable pair comes back with residual at the solver's noise
/// floor (≤ 1e-9).
pub fn find_degrading_channel(
    w: &ClassicalChannel,
    w2: &ClassicalChannel,
) -> Result<DegradingCertificate> {
    check_common_input(w, w2)?;
    let ny = w.n_outputs();
    let nz = w2.n_outputs();
    let nx = w.n_inputs();
    // variables: φ(z|y) at index y·nz + z, then t
    let nvars = ny * nz + 1;
    let t_idx = ny * nz;
    let mut cons = Vec::with_capacity(ny + 2 * nz * nx);
    for y in 0..ny {
        let mut coeffs = vec![0.0; nvars];
        for z in 0..nz {
            coeffs[y * nz + z] = 1.0;
        }
        cons.push(Constraint { coeffs, relation: Relation::Eq, rhs: 1.0 });
    }
    for z in 0..nz {
        for x in 0..nx {
            // Σ_y w(y|x) φ(z|y) − w2(z|x) ∈ [−t, t]
            let mut lo = vec![0.0; nvars];
            for y in 0..ny {
                lo[y * nz + z] = w.prob(y, x);
            }
            let mut hi = lo.clone();
            lo[t_idx] = 1.0;
            cons.push(Constraint { coeffs: lo, relation: Relation::Ge, rhs: w2.prob(z, x) });
            hi[t_idx] = -1.0;
            cons.push(Constraint { coeffs: hi, relation: Relation::Le, rhs: w2.prob(z, x) });
        }
    }
    let mut objective = vec![0.0; nvars];
    objective[t_idx] = 1.0;
    let sol = solve_lp(&LinearProgram::new(Sense::Minimize, objective, cons))?;

    let mut raw = DMatrix::zeros(nz, ny);
    for y in 0..ny {
        for z in 0..nz {
            raw[(z, y)] = sol.x[y * nz + z];
        }
    }
    let phi_m = column_stochastic_from_lp(&raw);
    let entries: Vec<Vec<f64>> = (0..nz)
        .map(|z| (0..ny).map(|y| phi_m[(z, y)]).collect())
        .collect();
    let channel = ClassicalChannel::new(
        w.output_labels().to_vec(),
        w2.output_labels().to_vec(),
        entries,
    )?;
    let residual = (&phi_m * w.matrix() - w2.matrix()).amax();
    debug_assert!(residual <= sol.value + 1e-7, "cleanup degraded the LP optimum");
    Ok(DegradingCertificate { channel, residual })
}

/// Largest certified guessing advantage of `w2` over `w`, with the joint
/// achieving it.
///
/// The payload is identified with the second channel's output alphabet.
/// The primal program maximizes a lower bound on the advantage; its value
/// equals the minimum over all post-processings of the worst one-sided
/// mismatch, which is solved independently as a cross-check. Returns
/// `None` when the certified advantage is below `tol` (degradable pairs
/// land at zero).
pub fn extract_violation_witness(
    w: &ClassicalChannel,
    w2: &ClassicalChannel,
    tol: f64,
) -> Result<Option<ViolationWitness>> {
    check_common_input(w, w2)?;
    let ny = w.n_outputs();
    let nz = w2.n_outputs();
    let nx = w.n_inputs();

    // primal: over joints p(x, z') and per-y guess scores s_y,
    // max Σ w2(z'|x) p(x,z') − Σ_y s_y  s.t.  s_y ≥ Σ_x w(y|x) p(x,z')
    let np = nx * nz;
    let nvars = np + ny;
    let idx = |x: usize, z: usize| x * nz + z;
    let mut cons = Vec::with_capacity(ny * nz + 1);
    for y in 0..ny {
        for z in 0..nz {
            let mut coeffs = vec![0.0; nvars];
            for x in 0..nx {
                coeffs[idx(x, z)] = w.prob(y, x);
            }
            coeffs[np + y] = -1.0;
            cons.push(Constraint { coeffs, relation: Relation::Le, rhs: 0.0 });
        }
    }
    let mut norm = vec![0.0; nvars];
    for x in 0..nx {
        for z in 0..nz {
            norm[idx(x, z)] = 1.0;
        }
    }
    cons.push(Constraint { coeffs: norm, relation: Relation::Eq, rhs: 1.0 });
    let mut objective = vec![0.0; nvars];
    for x in 0..nx {
        for z in 0..nz {
            objective[idx(x, z)] = w2.prob(z, x);
        }
    }
    for y in 0..ny {
        objective[np + y] = -1.0;
    }
    let primal = solve_lp(&LinearProgram::new(Sense::Maximize, objective, cons))?;

    // dual form: min over channels φ of the worst one-sided mismatch
    // max_{z',x} [w2(z'|x) − Σ_y φ(z'|y) w(y|x)]
    let nphi = ny * nz;
    let mut cons = Vec::with_capacity(ny + nz * nx);
    for y in 0..ny {
        let mut coeffs = vec![0.0; nphi + 1];
        for z in 0..nz {
            coeffs[y * nz + z] = 1.0;
        }
        cons.push(Constraint { coeffs, relation: Relation::Eq, rhs: 1.0 });
    }
    for z in 0..nz {
        for x in 0..nx {
            let mut coeffs = vec![0.0; nphi + 1];
            for y in 0..ny {
                coeffs[y * nz + z] = w.prob(y, x);
            }
            coeffs[nphi] = 1.0;
            cons.push(Constraint { coeffs, relation: Relation::Ge, rhs: w2.prob(z, x) });
        }
    }
    let mut objective = vec![0.0; nphi + 1];
    objective[nphi] = 1.0;
    let mut bounds = vec![Bound::NON_NEGATIVE; nphi];
    bounds.push(Bound::Free);
    let dual = solve_lp(&LinearProgram {
        sense: Sense::Minimize,
        objective,
        constraints: cons,
        bounds,
    })?;

    if (primal.value - dual.value).abs() > VERDICT_TOL * (1.0 + primal.value.abs()) {
        return Err(Error::Ambiguous(format!(
            "witness program and its dual disagree: {} vs {}",
            primal.value, dual.value
        )));
    }
    if primal.value <= tol {
        return Ok(None);
    }

    // rebuild the joint, clamp and renormalize, then re-evaluate honestly
    let mut total = 0.0;
    let mut entries = vec![vec![0.0; nz]; nx];
    for x in 0..nx {
        for z in 0..nz {
            let v = primal.x[idx(x, z)].max(0.0);
            entries[x][z] = v;
            total += v;
        }
    }
    for row in entries.iter_mut() {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    let joint = JointDistribution::new(
        w.input_labels().to_vec(),
        w2.output_labels().to_vec(),
        entries,
    )?;
    let pguess_via_first = guessing_probability(&joint.push_through_channel(w)?);
    let pguess_via_second = guessing_probability(&joint.push_through_channel(w2)?);
    let gap = pguess_via_second - pguess_via_first;
    // the identity decoder already certifies primal.value, so the true
    // advantage can only be larger
    debug_assert!(gap >= primal.value - 1e-7, "witness re-evaluation lost the gap");
    if gap <= tol {
        return Ok(None);
    }
    Ok(Some(ViolationWitness { joint, pguess_via_first, pguess_via_second, gap }))
}

/// Full comparison: decides whether `w2` is a degradation of `w` and
/// certifies the verdict either way.
pub fn compare_channels(
    w: &ClassicalChannel,
    w2: &ClassicalChannel,
    tol: f64,
) -> Result<ComparisonVerdict> {
    let cert = find_degrading_channel(w, w2)?;
    if cert.residual <= tol {
        return Ok(ComparisonVerdict::Degradable(cert));
    }
    match extract_violation_witness(w, w2, tol)? {
        Some(witness) => {
            debug_assert!(witness.gap <= cert.residual + 1e-7);
            Ok(ComparisonVerdict::NotDegradable { witness, residual: cert.residual })
        }
        None => Ok(ComparisonVerdict::Ambiguous { residual: cert.residual, advantage: 0.0 }),
    }
}

/// Worst observed slack of guessing-probability monotonicity over seeded
/// random payload joints.
#[derive(Debug, Clone)]
pub struct DominanceReport {
    pub trials: usize,
    /// `min over joints of [pguess_via_first − pguess_via_second]`; for a
    /// degradable pair this never goes below the numerical noise floor.
    pub min_slack: f64,
    pub worst_joint: JointDistribution,
}

/// Samples random payload joints and measures how close `w2` comes to
/// out-guessing `w`. For degradable pairs the slack stays nonnegative
/// (data processing); a clearly negative slack is a found violation.
pub fn verify_pguess_dominance(
    w: &ClassicalChannel,
    w2: &ClassicalChannel,
    payload_size: usize,
    trials: usize,
    seed: u64,
) -> Result<DominanceReport> {
    check_common_input(w, w2)?;
    if trials == 0 || payload_size == 0 {
        return Err(Error::InvalidInput("need at least one trial and payload".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_slack = f64::INFINITY;
    let mut worst = None;
    for _ in 0..trials {
        let joint = random_joint(w.input_labels().to_vec(), payload_size, &mut rng)?;
        let via_first = guessing_probability(&joint.push_through_channel(w)?);
        let via_second = guessing_probability(&joint.push_through_channel(w2)?);
        let slack = via_first - via_second;
        if slack < min_slack {
            min_slack = slack;
            worst = Some(joint);
        }
    }
    Ok(DominanceReport { trials, min_slack, worst_joint: worst.unwrap() })
}

/// Mutual-information violation found by local search: a payload joint with
/// `I(U; second output) > I(U; first output)`.
#[derive(Debug, Clone)]
pub struct MutualInfoViolation {
    pub joint: JointDistribution,
    pub mi_via_first: f64,
    pub mi_via_second: f64,
    pub advantage: f64,
}

/// Heuristic search for a payload on which `w2` carries strictly more
/// mutual information than `w`.
///
/// Hill climbing over the joint simplex from seeded random restarts. A
/// returned violation is sound (the gap is re-evaluated exactly); `None`
/// only means the search found nothing, not that nothing exists.
pub fn search_mutual_info_violation(
    w: &ClassicalChannel,
    w2: &ClassicalChannel,
    payload_size: usize,
    restarts: usize,
    seed: u64,
) -> Result<Option<MutualInfoViolation>> {
    check_common_input(w, w2)?;
    if payload_size == 0 {
        return Err(Error::InvalidInput("empty payload alphabet".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = w.n_inputs();
    let nu = payload_size;
    let advantage_of = |table: &[f64]| -> Result<f64> {
        let entries: Vec<Vec<f64>> = (0..nx)
            .map(|x| table[x * nu..(x + 1) * nu].to_vec())
            .collect();
        let joint = JointDistribution::new(
            w.input_labels().to_vec(),
            (0..nu).map(|u| u.to_string()).collect(),
            entries,
        )?;
        let a = mutual_information(&joint.push_through_channel(w2)?)
            - mutual_information(&joint.push_through_channel(w)?);
        Ok(a)
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..restarts.max(1) {
        // Dirichlet(1) start
        let mut table: Vec<f64> = (0..nx * nu)
            .map(|_| -(rng.random_range(1e-12..1.0f64)).ln())
            .collect();
        let s: f64 = table.iter().sum();
        table.iter_mut().for_each(|v| *v /= s);

        let mut current = advantage_of(&table)?;
        let mut step = 0.25;
        while step > 1e-4 {
            let mut improved = false;
            for i in 0..table.len() {
                for j in 0..table.len() {
                    if i == j {
                        continue;
                    }
                    let delta = step * table[i];
                    if delta <= 0.0 {
                        continue;
                    }
                    let mut cand = table.clone();
                    cand[i] -= delta;
                    cand[j] += delta;
                    let val = advantage_of(&cand)?;
                    if val > current + 1e-12 {
                        table = cand;
                        current = val;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| current > *b) {
            best = Some((current, table));
        }
    }

    let (adv, table) = best.unwrap();
    if adv <= 1e-9 {
        return Ok(None);
    }
    let entries: Vec<Vec<f64>> = (0..nx)
        .map(|x| table[x * nu..(x + 1) * nu].to_vec())
        .collect();
    let joint = JointDistribution::new(
        w.input_labels().to_vec(),
        (0..nu).map(|u| u.to_string()).collect(),
        entries,
    )?;
    let mi_via_first = mutual_information(&joint.push_through_channel(w)?);
    let mi_via_second = mutual_information(&joint.push_through_channel(w2)?);
    Ok(Some(MutualInfoViolation {
        joint,
        mi_via_first,
        mi_via_second,
        advantage: mi_via_second - mi_via_first,
    }))
}

/// Channel with independent Dirichlet(1) columns.
pub fn random_channel<R: Rng>(
    n_inputs: usize,
    n_outputs: usize,
    rng: &mut R,
) -> Result<ClassicalChannel> {
    if n_inputs == 0 || n_outputs == 0 {
        return Err(Error::InvalidChannel("empty alphabet".into()));
    }
    let mut entries = vec![vec![0.0; n_inputs]; n_outputs];
    for x in 0..n_inputs {
        let col: Vec<f64> = (0..n_outputs)
            .map(|_| -(rng.random_range(1e-12..1.0f64)).ln())
            .collect();
        let s: f64 = col.iter().sum();
        for y in 0..n_outputs {
            entries[y][x] = col[y] / s;
        }
    }
    ClassicalChannel::from_entries(entries)
}

/// Joint with Dirichlet(1) entries over `rows × payload_size`.
pub fn random_joint<R: Rng>(
    row_labels: Vec<String>,
    payload_size: usize,
    rng: &mut R,
) -> Result<JointDistribution> {
    let nr = row_labels.len();
    let mut entries: Vec<Vec<f64>> = (0..nr)
        .map(|_| {
            (0..payload_size)
                .map(|_| -(rng.random_range(1e-12..1.0f64)).ln())
                .collect()
        })
        .collect();
    let total: f64 = entries.iter().flatten().sum();
    for row in entries.iter_mut() {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    JointDistribution::new(
        row_labels,
        (0..payload_size).map(|u| u.to_string()).collect(),
        entries,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probability::Distribution;

    // ================================================================
    // degrading maps
    // ================================================================

    #[test]
    fn erasure_degrades_to_symmetric_flip() {
        // resolving the erasure symbol by a fair coin turns an erasure rate
        // of 2p into a flip rate of p
        let w = ClassicalChannel::binary_erasure(0.3).unwrap();
        let w2 = ClassicalChannel::binary_symmetric(0.15).unwrap();
        let cert = find_degrading_channel(&w, &w2).unwrap();
        assert!(cert.residual <= 1e-9, "residual {}", cert.residual);
        // the recovered map reproduces the target channel exactly
        let composed = ClassicalChannel::compose(&cert.channel, &w).unwrap();
        assert!((composed.matrix() - w2.matrix()).amax() <= 1e-9);
        match compare_channels(&w, &w2, VERDICT_TOL).unwrap() {
            ComparisonVerdict::Degradable(_) => {}
            other => panic!("expected a degradable verdict, got {other:?}"),
        }
    }

    #[test]
    fn identity_pair_is_degradable_with_zero_residual() {
        let id = ClassicalChannel::identity(3).unwrap();
        let cert = find_degrading_channel(&id, &id).unwrap();
        assert!(cert.residual <= 1e-11);
    }

    #[test]
    fn symmetric_flip_cannot_reproduce_erasure() {
        // reverse direction of the classic pair: no exact post-processing
        // exists, and a payload with a skewed prior certifies it
        let w = ClassicalChannel::binary_symmetric(0.15).unwrap();
        let w2 = ClassicalChannel::binary_erasure(0.3).unwrap();
        let cert = find_degrading_channel(&w, &w2).unwrap();
        assert!(cert.residual > 1e-3, "residual {}", cert.residual);

        let witness = extract_violation_witness(&w, &w2, VERDICT_TOL)
            .unwrap()
            .expect("a witness must exist");
        assert!(witness.gap > 0.05, "gap {}", witness.gap);
        assert!(witness.gap <= cert.residual + 1e-9);

        // hand-built witness: prior (0.3, 0.7) correlated with the input.
        // through the flip channel the guess is right with prob 0.85;
        // through the erasure channel, erasures guess the likelier symbol:
        // 0.7 + 0.3·(1 − 0.3) = 0.91
        let prior = Distribution::new(vec!["0".into(), "1".into()], vec![0.3, 0.7]).unwrap();
        let joint = JointDistribution::correlated(&prior);
        let via_flip = guessing_probability(&joint.push_through_channel(&w).unwrap());
        let via_erasure = guessing_probability(&joint.push_through_channel(&w2).unwrap());
        assert!((via_flip - 0.85).abs() < 1e-12);
        assert!((via_erasure - 0.91).abs() < 1e-12);

        match compare_channels(&w, &w2, VERDICT_TOL).unwrap() {
            ComparisonVerdict::NotDegradable { witness: wit, residual } => {
                assert!(wit.gap > 0.05);
                assert!(residual > 1e-3);
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn noisy_channel_cannot_reproduce_identity() {
        let w = ClassicalChannel::binary_symmetric(0.1).unwrap();
        let w2 = ClassicalChannel::identity(2).unwrap();
        match compare_channels(&w, &w2, VERDICT_TOL).unwrap() {
            ComparisonVerdict::NotDegradable { witness, .. } => {
                // uniform correlated payload: 1.0 via identity, 0.9 via flip
                assert!(witness.gap >= 0.1 - 1e-9, "gap {}", witness.gap);
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn constructed_degradations_are_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..25 {
            let nx = rng.random_range(2..=4);
            let ny = rng.random_range(2..=4);
            let nz = rng.random_range(2..=4);
            let w = random_channel(nx, ny, &mut rng).unwrap();
            let phi = random_channel(ny, nz, &mut rng).unwrap();
            // push labels into agreement before composing
            let phi = ClassicalChannel::new(
                w.output_labels().to_vec(),
                phi.output_labels().to_vec(),
                (0..nz)
                    .map(|z| (0..ny).map(|y| phi.prob(z, y)).collect())
                    .collect(),
            )
            .unwrap();
            let w2 = ClassicalChannel::compose(&phi, &w).unwrap();
            let cert = find_degrading_channel(&w, &w2).unwrap();
            assert!(
                cert.residual <= 1e-8,
                "trial {trial}: residual {}",
                cert.residual
            );
            match compare_channels(&w, &w2, VERDICT_TOL).unwrap() {
                ComparisonVerdict::Degradable(_) => {}
                other => panic!("trial {trial}: expected degradable, got {other:?}"),
            }
        }
    }

    #[test]
    fn witness_gap_never_exceeds_best_residual() {
        // the one-sided mismatch is a lower bound on the two-sided one;
        // the advantage certified by any witness cannot exceed it by duality
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let w = random_channel(3, 3, &mut rng).unwrap();
            let w2 = random_channel(3, 3, &mut rng).unwrap();
            let cert = find_degrading_channel(&w, &w2).unwrap();
            if let Some(wit) = extract_violation_witness(&w, &w2, VERDICT_TOL).unwrap() {
                assert!(wit.gap > 0.0);
                assert!(wit.gap <= cert.residual + 1e-7);
                assert!(
                    (wit.pguess_via_second - wit.pguess_via_first - wit.gap).abs() < 1e-12
                );
            } else {
                assert!(cert.residual <= 1e-6, "no witness yet residual {}", cert.residual);
            }
        }
    }

    // ================================================================
    // sampled monotonicity and mutual-information search
    // ================================================================

    #[test]
    fn guessing_dominance_holds_on_degradable_pair() {
        let w = ClassicalChannel::binary_erasure(0.3).unwrap();
        let w2 = ClassicalChannel::binary_symmetric(0.15).unwrap();
        let report = verify_pguess_dominance(&w, &w2, 3, 200, 11).unwrap();
        assert_eq!(report.trials, 200);
        assert!(report.min_slack >= -1e-10, "slack {}", report.min_slack);
    }

    #[test]
    fn guessing_dominance_fails_against_identity() {
        let w = ClassicalChannel::binary_symmetric(0.1).unwrap();
        let w2 = ClassicalChannel::identity(2).unwrap();
        let report = verify_pguess_dominance(&w, &w2, 2, 100, 3).unwrap();
        assert!(report.min_slack < -1e-3, "slack {}", report.min_slack);
    }

    #[test]
    fn mutual_info_search_finds_obvious_violation() {
        let w = ClassicalChannel::binary_symmetric(0.15).unwrap();
        let w2 = ClassicalChannel::identity(2).unwrap();
        let found = search_mutual_info_violation(&w, &w2, 2, 3, 5)
            .unwrap()
            .expect("identity must beat a noisy channel");
        // uniform correlated payload already gives h(0.15) ≈ 0.61 bits
        assert!(found.advantage > 0.4, "advantage {}", found.advantage);
        assert!(
            (found.mi_via_second - found.mi_via_first - found.advantage).abs() < 1e-12
        );
    }

    #[test]
    fn mutual_info_search_stays_silent_on_degradable_pair() {
        let w = ClassicalChannel::binary_erasure(0.3).unwrap();
        let w2 = ClassicalChannel::binary_symmetric(0.15).unwrap();
        let found = search_mutual_info_violation(&w, &w2, 2, 2, 9).unwrap();
        assert!(found.is_none(), "violation on a degradable pair: {found:?}");
    }
}
