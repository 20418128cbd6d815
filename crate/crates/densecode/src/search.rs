//! Numerical feasibility search for deterministic protocols.
//!
//! A deterministic protocol exists for a given encoder family exactly when
//! the outputs Bob receives for distinct messages are orthogonal. The
//! search minimizes the summed pairwise overlap (the *defect*) over smooth
//! parameterizations of the encoders — unitaries acting on a fixed
//! embedding when the rank fits the channel, stacked Kraus blocks with
//! orthonormal columns otherwise — using projected gradient descent with a
//! backtracking step and seeded random restarts.
//!
//! A defect at threshold certifies a protocol constructively; failure to
//! reach it is only "not found within budget", never a proof of
//! infeasibility.

use std::ops::AddAssign;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::encodings::KrausChannel;
use crate::error::{Error, Result};
use crate::states::EntangledState;
use crate::tensor::{cr, CMatrix, Tolerance, C64};

/// Budget and reproducibility knobs for the search.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Independent seeded restarts; merged by minimum defect.
    pub restarts: usize,
    /// Gradient iterations per restart.
    pub max_iters: usize,
    /// Defect at or below which a family counts as feasible.
    pub success_defect: f64,
    /// Seed for all restarts; the same seed reproduces results bit for bit.
    pub seed: u64,
    /// Initial line-search step.
    pub step_init: f64,
    /// Step below which a restart is considered converged.
    pub step_min: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 5000,
            success_defect: 1e-8,
            seed: 0,
            step_init: 0.5,
            step_min: 1e-14,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidSearchConfig(
                "restarts must be at least 1".into(),
            ));
        }
        if !(self.success_defect > 0.0) {
            return Err(Error::InvalidSearchConfig(
                "success_defect must be positive".into(),
            ));
        }
        if !(self.step_init > self.step_min && self.step_min > 0.0) {
            return Err(Error::InvalidSearchConfig(
                "step schedule must satisfy init > min > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a feasibility search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Best encoder family found; single-operator channels for isometric
    /// searches.
    pub best_family: Vec<KrausChannel>,
    /// Final summed pairwise overlap of the family's outputs.
    pub defect: f64,
    /// Whether the defect reached `success_defect`.
    pub feasible: bool,
    /// Gradient iterations spent by the best restart.
    pub iterations_used: usize,
    /// Restarts actually run.
    pub restarts: usize,
    /// Seed the run used.
    pub seed: u64,
}

struct RestartOutcome {
    blocks: Vec<CMatrix>,
    defect: f64,
    iterations: usize,
}

/// Pairwise overlap of encoder outputs through the squared-coefficient
/// weight: `sum over block pairs |Tr(W A' B)|^2` summed over message pairs.
fn defect_and_gradient(
    stacks: &[CMatrix],
    weight: &CMatrix,
    d_chan: usize,
    want_grad: bool,
) -> (f64, Vec<CMatrix>) {
    let l = stacks.len();
    let blocks_of = |k: &CMatrix| k.nrows() / d_chan;
    let mut defect = 0.0;
    let mut grads: Vec<CMatrix> = if want_grad {
        stacks
            .iter()
            .map(|k| CMatrix::zeros(k.nrows(), k.ncols()))
            .collect()
    } else {
        Vec::new()
    };
    for x in 0..l {
        for y in (x + 1)..l {
            for lx in 0..blocks_of(&stacks[x]) {
                let ax = stacks[x].rows(lx * d_chan, d_chan);
                for ly in 0..blocks_of(&stacks[y]) {
                    let ay = stacks[y].rows(ly * d_chan, d_chan);
                    let g = (weight * ax.adjoint() * ay).trace();
                    defect += g.norm_sqr();
                    if want_grad {
                        let gx = (ay * weight) * g.conj();
                        let gy = (ax * weight.adjoint()) * g;
                        grads[x].rows_mut(lx * d_chan, d_chan).add_assign(&gx);
                        grads[y].rows_mut(ly * d_chan, d_chan).add_assign(&gy);
                    }
                }
            }
        }
    }
    (defect, grads)
}

/// Closest matrix with orthonormal columns (thin polar factor).
fn polar_orthonormal(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

fn random_stiefel(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let m = CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    polar_orthonormal(&m)
}

fn real_inner(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.iter()
                .zip(y.iter())
                .map(|(p, q)| (p.conj() * q).re)
                .sum::<f64>()
        })
        .sum()
}

fn run_restart(
    weight: &CMatrix,
    d_chan: usize,
    l: usize,
    stack_rows: usize,
    stack_cols: usize,
    cfg: &SearchConfig,
    restart: usize,
) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(
        cfg.seed
            .wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    );
    let mut stacks: Vec<CMatrix> = (0..l)
        .map(|_| random_stiefel(&mut rng, stack_rows, stack_cols))
        .collect();
    let (mut f, _) = defect_and_gradient(&stacks, weight, d_chan, false);
    let mut step = cfg.step_init;
    let mut iterations = 0;
    let exit_defect = (cfg.success_defect * 1e-4).max(1e-18);
    let mut previous: Option<(Vec<CMatrix>, Vec<CMatrix>)> = None;

    for _ in 0..cfg.max_iters {
        if f <= exit_defect {
            break;
        }
        iterations += 1;
        let (_, grads) = defect_and_gradient(&stacks, weight, d_chan, true);
        let grad_norm: f64 = grads.iter().map(|g| g.norm_squared()).sum::<f64>().sqrt();
        if grad_norm < 1e-13 {
            break;
        }
        // spectral (Barzilai-Borwein) step estimate; essential when the
        // defect landscape is ill-conditioned near degenerate coefficients
        if let Some((prev_stacks, prev_grads)) = &previous {
            let diff_x: Vec<CMatrix> = stacks.iter().zip(prev_stacks).map(|(a, b)| a - b).collect();
            let diff_g: Vec<CMatrix> = grads.iter().zip(prev_grads).map(|(a, b)| a - b).collect();
            let sy = real_inner(&diff_x, &diff_g);
            if sy > 1e-30 {
                step = (real_inner(&diff_x, &diff_x) / sy).clamp(cfg.step_min, 1e3);
            }
        }
        previous = Some((stacks.clone(), grads.clone()));

        let mut trial_step = step;
        let mut accepted = false;
        while trial_step >= cfg.step_min {
            let trial: Vec<CMatrix> = stacks
                .iter()
                .zip(&grads)
                .map(|(k, g)| polar_orthonormal(&(k - g * cr(trial_step))))
                .collect();
            let (ft, _) = defect_and_gradient(&trial, weight, d_chan, false);
            if ft < f {
                stacks = trial;
                f = ft;
                step = trial_step;
                accepted = true;
                break;
            }
            trial_step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    RestartOutcome {
        blocks: stacks,
        defect: f,
        iterations,
    }
}

fn run_search(
    weight: &CMatrix,
    d_chan: usize,
    l: usize,
    operators_per_encoder: usize,
    d_bar: usize,
    cfg: &SearchConfig,
    tol: &Tolerance,
) -> Result<SearchResult> {
    let stack_rows = operators_per_encoder * d_chan;
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(weight, d_chan, l, stack_rows, d_bar, cfg, r))
        .collect();
    // deterministic merge: minimum defect, ties to the earliest restart
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.defect.partial_cmp(&b.defect).unwrap().then(i.cmp(j)))
        .map(|(_, o)| o)
        .expect("at least one restart");

    let best_family: Vec<KrausChannel> = best
        .blocks
        .iter()
        .map(|k| {
            let ops: Vec<CMatrix> = (0..operators_per_encoder)
                .map(|b| k.rows(b * d_chan, d_chan).into_owned())
                .collect();
            KrausChannel::new(ops, tol)
        })
        .collect::<Result<_>>()?;

    Ok(SearchResult {
        best_family,
        defect: best.defect,
        feasible: best.defect <= cfg.success_defect,
        iterations_used: best.iterations,
        restarts: cfg.restarts,
        seed: cfg.seed,
    })
}

/// Search for `l` isometric encoders whose outputs are pairwise orthogonal
/// on the given state.
///
/// Message counts above the largest-coefficient cap `floor(D / lambda_1^2)`
/// are provably infeasible and rejected up front.
pub fn search_deterministic(
    s: &EntangledState,
    d_chan: usize,
    l: usize,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    cfg.validate()?;
    let d_bar = s.schmidt_rank();
    if d_bar > d_chan {
        return Err(Error::RankExceedsChannel {
            rank: d_bar,
            d_chan,
        });
    }
    if l < 2 || l > d_bar * d_chan {
        return Err(Error::InvalidSearchConfig(format!(
            "message count {l} outside 2..={}",
            d_bar * d_chan
        )));
    }
    let cap = ((d_chan as f64 / s.largest_sq()) * (1.0 + 1e-12) + 1e-12).floor() as usize;
    if l > cap {
        return Err(Error::ExceedsDeterministicCap {
            l,
            cap,
            lambda1_sq: s.largest_sq(),
        });
    }
    // weight embedded into the channel dimension: isometries are unitaries
    // acting on the canonical embedding, so blocks are D x D
    let mut weight = CMatrix::zeros(d_chan, d_chan);
    for (j, sq) in s.lambda_sq().iter().enumerate() {
        weight[(j, j)] = cr(*sq);
    }
    let tol = Tolerance::default();
    let mut result = run_search(&weight, d_chan, l, 1, d_chan, cfg, &tol)?;
    // trim the unitaries back to isometries on the state's rank
    result.best_family = result
        .best_family
        .iter()
        .map(|ch| KrausChannel::new(vec![ch.operators()[0].columns(0, d_bar).into_owned()], &tol))
        .collect::<Result<_>>()?;
    Ok(result)
}

/// Search for `l` Kraus-channel encoders with a fixed operator budget when
/// the rank exceeds the channel dimension, using the summed pairwise
/// overlap `Tr(rho_x rho_y)` of the mixed outputs as the defect.
pub fn search_deterministic_kraus(
    s: &EntangledState,
    d_chan: usize,
    l: usize,
    kraus_rank_budget: usize,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    cfg.validate()?;
    let d_bar = s.schmidt_rank();
    if d_bar <= d_chan {
        return Err(Error::InvalidSearchConfig(format!(
            "rank {d_bar} fits the channel dimension {d_chan}; use the isometric search"
        )));
    }
    let xi = d_bar.div_ceil(d_chan);
    if kraus_rank_budget < xi {
        return Err(Error::InvalidSearchConfig(format!(
            "operator budget {kraus_rank_budget} below the minimum Kraus rank {xi}"
        )));
    }
    let mu = (d_bar * d_chan) / xi;
    if l < 2 || l > mu {
        return Err(Error::InvalidSearchConfig(format!(
            "message count {l} outside 2..={mu}"
        )));
    }
    let cap = ((d_chan as f64 / s.largest_sq()) * (1.0 + 1e-12) + 1e-12).floor() as usize;
    if l > cap {
        return Err(Error::ExceedsDeterministicCap {
            l,
            cap,
            lambda1_sq: s.largest_sq(),
        });
    }
    let mut weight = CMatrix::zeros(d_bar, d_bar);
    for (j, sq) in s.lambda_sq().iter().enumerate() {
        weight[(j, j)] = cr(*sq);
    }
    let tol = Tolerance::default();
    run_search(&weight, d_chan, l, kraus_rank_budget, d_bar, cfg, &tol)
}

/// One probe of a feasibility boundary scan.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryProbe {
    pub t: f64,
    /// Best defect at this point; infinite when the point was rejected by
    /// the largest-coefficient cap without running.
    pub defect: f64,
    pub feasible: bool,
    pub rejected_by_cap: bool,
}

/// Result of bisecting a feasibility threshold along a state path.
#[derive(Debug, Clone)]
pub struct PhaseBoundary {
    /// Last parameter found feasible.
    pub t_feasible: f64,
    /// First parameter found infeasible.
    pub t_infeasible: f64,
    /// Midpoint estimate of the threshold.
    pub threshold_t: f64,
    /// Width of the final bracket.
    pub interval_width: f64,
    /// State at the threshold estimate.
    pub threshold_state: EntangledState,
    /// All probes in evaluation order.
    pub probes: Vec<BoundaryProbe>,
    /// False when the path never changes feasibility; the threshold then
    /// sits at the matching endpoint.
    pub bracketed: bool,
}

/// Bisect the feasibility threshold of [`search_deterministic`] along a
/// monotone path `t in [0, 1] -> state`, to a parameter resolution
/// `t_resolution`. Points rejected by the largest-coefficient cap count as
/// infeasible.
pub fn phase_boundary<F>(
    d_chan: usize,
    l: usize,
    path: F,
    cfg: &SearchConfig,
    t_resolution: f64,
) -> Result<PhaseBoundary>
where
    F: Fn(f64) -> EntangledState,
{
    cfg.validate()?;
    if !(t_resolution > 0.0 && t_resolution < 1.0) {
        return Err(Error::InvalidSearchConfig(
            "t_resolution must lie in (0, 1)".into(),
        ));
    }
    let mut probes = Vec::new();
    let probe = |t: f64, probes: &mut Vec<BoundaryProbe>| -> Result<bool> {
        let state = path(t);
        let outcome = match search_deterministic(&state, d_chan, l, cfg) {
            Ok(r) => BoundaryProbe {
                t,
                defect: r.defect,
                feasible: r.feasible,
                rejected_by_cap: false,
            },
            Err(Error::ExceedsDeterministicCap { .. }) => BoundaryProbe {
                t,
                defect: f64::INFINITY,
                feasible: false,
                rejected_by_cap: true,
            },
            Err(e) => return Err(e),
        };
        probes.push(outcome);
        Ok(outcome.feasible)
    };

    let feasible_lo = probe(0.0, &mut probes)?;
    let feasible_hi = probe(1.0, &mut probes)?;

    if !feasible_lo || feasible_hi {
        // degenerate: no feasibility change along the path
        let t = if feasible_hi { 1.0 } else { 0.0 };
        return Ok(PhaseBoundary {
            t_feasible: t,
            t_infeasible: t,
            threshold_t: t,
            interval_width: 0.0,
            threshold_state: path(t),
            probes,
            bracketed: false,
        });
    }

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > t_resolution {
        let mid = 0.5 * (lo + hi);
        if probe(mid, &mut probes)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let threshold_t = 0.5 * (lo + hi);
    Ok(PhaseBoundary {
        t_feasible: lo,
        t_infeasible: hi,
        threshold_t,
        interval_width: hi - lo,
        threshold_state: path(threshold_t),
        probes,
        bracketed: true,
    })
}

/// Complete a feasible family into a protocol: an orthonormal basis of
/// each encoder's output support is orthonormalized symmetrically across
/// encoders and grouped into projector POVM elements.
///
/// Works for single-isometry families (rank-one outputs) and Kraus-channel
/// families (mixed outputs) alike; fails with
/// [`Error::LinearlyDependent`] when the supports overlap too much to
/// separate, i.e. when the family was not actually feasible.
pub fn protocol_from_feasible_family(
    s: &EntangledState,
    d_chan: usize,
    family: &[KrausChannel],
    tol: &Tolerance,
) -> Result<crate::protocols::Protocol> {
    use crate::encodings::bob_state;
    use crate::protocols::Povm;

    let d_bar = s.schmidt_rank();
    let joint = d_chan * d_bar;
    let mut support_cols: Vec<crate::tensor::CVector> = Vec::new();
    let mut group_sizes = Vec::with_capacity(family.len());
    for ch in family {
        let rho = bob_state(ch, s)?;
        let eig = nalgebra::SymmetricEigen::new(rho);
        let mut count = 0;
        for i in 0..joint {
            if eig.eigenvalues[i] > tol.abs_tol {
                support_cols.push(eig.eigenvectors.column(i).into_owned());
                count += 1;
            }
        }
        group_sizes.push(count);
    }
    if support_cols.len() > joint {
        return Err(Error::LinearlyDependent);
    }
    // symmetric orthonormalization of the near-orthonormal support columns
    let m = CMatrix::from_fn(joint, support_cols.len(), |i, x| support_cols[x][i]);
    let gram = m.adjoint() * &m;
    let eig = nalgebra::SymmetricEigen::new(gram);
    if eig.eigenvalues.iter().any(|&v| v <= tol.rank_tol) {
        return Err(Error::LinearlyDependent);
    }
    let inv_root = {
        let roots = eig.eigenvalues.map(|v| cr(1.0 / v.sqrt()));
        &eig.eigenvectors * CMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
    };
    let ortho = m * inv_root;
    let mut elements = Vec::with_capacity(family.len());
    let mut offset = 0;
    for &size in &group_sizes {
        let mut el = CMatrix::zeros(joint, joint);
        for j in offset..offset + size {
            let col = ortho.column(j).into_owned();
            el += &col * col.adjoint();
        }
        elements.push(el);
        offset += size;
    }
    let povm = Povm::new(elements, joint, tol)?;
    let slots = if d_bar <= d_chan {
        d_bar * d_chan
    } else {
        d_chan * d_chan
    };
    crate::protocols::Protocol::new(s.clone(), d_chan, family.to_vec(), povm, slots, tol)
}
