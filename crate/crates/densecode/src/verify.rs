//! Exact Born-rule simulation of protocols, classification of the outcome
//! structure, and evaluation of every capacity and success-probability
//! bound with saturation margins.

use serde::Serialize;

use crate::encodings::{bob_state, KrausChannel};
use crate::error::{Error, Result};
use crate::protocols::Protocol;
use crate::states::EntangledState;
use crate::tensor::{
    entropy_bits, hermitian_eigenvalues, numeric_rank, partial_trace, von_neumann_entropy, CMatrix,
    Factor, Tolerance,
};

/// Outcome structure of a simulated protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// Every live message is received with certainty.
    Deterministic,
    /// Outcomes are either the sent message or a declared failure.
    Unambiguous,
    /// Some wrong-message outcome has probability above tolerance.
    Invalid,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Deterministic => write!(f, "deterministic"),
            Classification::Unambiguous => write!(f, "unambiguous"),
            Classification::Invalid => write!(f, "invalid"),
        }
    }
}

/// Full conditional-probability table of a protocol run, together with the
/// per-message success probabilities and the outcome classification.
///
/// Rows are messages `x = 1..=slots`; column `0` is the failure outcome and
/// column `y >= 1` the declared message `y`. Dead slots (labels past the
/// live encoder list) fail with certainty by convention.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolReport {
    pub cond_prob: Vec<Vec<f64>>,
    pub taus: Vec<f64>,
    pub classification: Classification,
    /// Largest wrong-message probability `Pr(y|x)`, `y != 0, x`.
    pub max_leakage: f64,
    pub live_slots: usize,
    pub d_bar: usize,
    pub channel_dim: usize,
    pub orthogonal_isometric: bool,
}

impl ProtocolReport {
    pub fn slots(&self) -> usize {
        self.taus.len()
    }

    /// Average success probability over all slots.
    pub fn mean_tau(&self) -> f64 {
        self.taus.iter().sum::<f64>() / self.taus.len() as f64
    }
}

/// Simulate a protocol exactly: `Pr(y|x) = Tr(B_y rho_x)` with `rho_x` the
/// state Bob holds after Alice encodes message `x`.
pub fn simulate(p: &Protocol, tol: &Tolerance) -> Result<ProtocolReport> {
    let slots = p.total_slots();
    let live = p.live_slots();
    let b0 = p.povm().failure_element();
    let mut cond_prob = vec![vec![0.0; slots + 1]; slots];
    let mut taus = vec![0.0; slots];
    let mut max_leakage: f64 = 0.0;

    for x in 0..slots {
        if x >= live {
            cond_prob[x][0] = 1.0;
            continue;
        }
        let rho = bob_state(&p.encoders()[x], &p.state)?;
        cond_prob[x][0] = (&b0 * &rho).trace().re;
        for (y, el) in p.povm().elements().iter().enumerate() {
            let pr = (el * &rho).trace().re;
            cond_prob[x][y + 1] = pr;
            if y == x {
                taus[x] = pr;
            } else {
                max_leakage = max_leakage.max(pr);
            }
        }
    }

    let classification = if max_leakage > tol.abs_tol {
        Classification::Invalid
    } else if taus[..live].iter().all(|&t| t >= 1.0 - tol.abs_tol) {
        Classification::Deterministic
    } else {
        Classification::Unambiguous
    };

    Ok(ProtocolReport {
        cond_prob,
        taus,
        classification,
        max_leakage,
        live_slots: live,
        d_bar: p.state.schmidt_rank(),
        channel_dim: p.channel_dim,
        orthogonal_isometric: p.orthogonal_isometric(),
    })
}

/// All state-level bounds for a given channel dimension.
///
/// The unambiguous-success fields only exist when the Schmidt rank fits the
/// channel; no analogous bounds are known beyond it. `xi` and `mu` only
/// exist in the opposite regime, where encoding needs several Kraus
/// operators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub d_bar: usize,
    pub d_chan: usize,
    /// Classical capacity of the state-plus-channel resource in bits; for
    /// rank above the channel dimension this is the `2 log2 D` cap.
    pub capacity_bits: f64,
    /// Largest deterministic message count compatible with the largest
    /// Schmidt coefficient (and the dimension caps).
    pub ld_cap: usize,
    /// Minimum Kraus rank of any encoder, `ceil(rank / D)`; only when the
    /// rank exceeds the channel dimension.
    pub xi: Option<usize>,
    /// Deterministic cap `floor(rank * D / xi)` in the same regime.
    pub mu: Option<usize>,
    /// Floor on the average inverse success probability of a protocol with
    /// every slot live: `1 / (rank * lambda_min^2)`.
    pub inv_tau_floor: Option<f64>,
    /// Cap on the average success probability under orthogonal isometric
    /// encoding: `rank * lambda_min^2`.
    pub avg_tau_cap: Option<f64>,
    /// Information-theoretic cap on the average success probability at
    /// full message count: `(log2 D + H_E) / (log2 D + log2 rank)`.
    pub info_ps_cap: Option<f64>,
}

/// Integer floor with a small relative guard against floating-point dust
/// at integer boundaries.
fn guarded_floor(v: f64) -> usize {
    (v * (1.0 + 1e-12) + 1e-12).floor() as usize
}

/// Largest deterministic message count allowed by the largest Schmidt
/// coefficient: `floor(D / lambda_1^2)`.
pub(crate) fn deterministic_cap(s: &EntangledState, d_chan: usize) -> usize {
    guarded_floor(d_chan as f64 / s.largest_sq())
}

/// Evaluate every bound for a state and channel dimension.
pub fn evaluate_bounds(s: &EntangledState, d_chan: usize) -> BoundsReport {
    assert!(d_chan >= 1, "channel dimension must be at least 1");
    let d_bar = s.schmidt_rank();
    let d = d_chan as f64;
    let h_e = s.entanglement_entropy();
    let schmidt_cap = deterministic_cap(s, d_chan);

    if d_bar <= d_chan {
        let capacity = d.log2() + h_e;
        let ld_cap = schmidt_cap.min(d_bar * d_chan);
        let denom = d.log2() + (d_bar as f64).log2();
        let info_ps_cap = if denom > 0.0 {
            Some((d.log2() + h_e) / denom)
        } else {
            None
        };
        let avg = d_bar as f64 * s.smallest_sq();
        BoundsReport {
            d_bar,
            d_chan,
            capacity_bits: capacity,
            ld_cap,
            xi: None,
            mu: None,
            inv_tau_floor: Some(1.0 / avg),
            avg_tau_cap: Some(avg),
            info_ps_cap,
        }
    } else {
        let capacity = (d.log2() + h_e).min(2.0 * d.log2());
        let xi = d_bar.div_ceil(d_chan);
        let mu = (d_bar * d_chan) / xi;
        BoundsReport {
            d_bar,
            d_chan,
            capacity_bits: capacity,
            ld_cap: schmidt_cap.min(mu),
            xi: Some(xi),
            mu: Some(mu),
            inv_tau_floor: None,
            avg_tau_cap: None,
            info_ps_cap: None,
        }
    }
}

/// Result of testing the mutual-information bound
/// `P_s log2 L <= log2 D + H_E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoBoundCheck {
    pub holds: bool,
    pub p_s: f64,
    pub lhs_bits: f64,
    pub rhs_bits: f64,
    pub slack_bits: f64,
}

pub fn check_info_bound(
    report: &ProtocolReport,
    s: &EntangledState,
    d_chan: usize,
) -> InfoBoundCheck {
    let l = report.slots() as f64;
    let p_s = report.mean_tau();
    let lhs = p_s * l.log2();
    let rhs = (d_chan as f64).log2() + s.entanglement_entropy();
    InfoBoundCheck {
        holds: lhs <= rhs + 1e-12,
        p_s,
        lhs_bits: lhs,
        rhs_bits: rhs,
        slack_bits: rhs - lhs,
    }
}

/// One side of the unambiguous-success bound pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCheck {
    /// The bound's premises do not apply to this protocol.
    Skipped { reason: String },
    Checked {
        holds: bool,
        lhs: f64,
        rhs: f64,
        /// Distance from saturation, nonnegative when the bound holds.
        margin: f64,
        saturated: bool,
    },
}

/// Pass/fail record for the two unambiguous-coding bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnambiguousBoundsReport {
    /// `<1/tau> >= 1 / (rank * lambda_min^2)`, requires every slot live.
    pub inv_tau: BoundCheck,
    /// `<tau> <= rank * lambda_min^2`, requires orthogonal isometric
    /// encoders over all slots.
    pub avg_tau: BoundCheck,
}

pub fn check_unambiguous_bounds(
    report: &ProtocolReport,
    s: &EntangledState,
    tol: &Tolerance,
) -> UnambiguousBoundsReport {
    let d_bar = s.schmidt_rank();
    if report.classification == Classification::Invalid {
        let reason = "classification is invalid".to_string();
        return UnambiguousBoundsReport {
            inv_tau: BoundCheck::Skipped {
                reason: reason.clone(),
            },
            avg_tau: BoundCheck::Skipped { reason },
        };
    }
    if d_bar > report.channel_dim {
        let reason = "no success-probability bounds when the rank exceeds the channel".to_string();
        return UnambiguousBoundsReport {
            inv_tau: BoundCheck::Skipped {
                reason: reason.clone(),
            },
            avg_tau: BoundCheck::Skipped { reason },
        };
    }
    let cap = d_bar as f64 * s.smallest_sq();

    let inv_tau = if report.taus.iter().any(|&t| t <= 0.0) {
        BoundCheck::Skipped {
            reason: "some success probabilities are zero; the inverse average is unbounded".into(),
        }
    } else {
        let lhs = report.taus.iter().map(|&t| 1.0 / t).sum::<f64>() / report.taus.len() as f64;
        let rhs = 1.0 / cap;
        let margin = lhs - rhs;
        BoundCheck::Checked {
            holds: margin >= -tol.abs_tol,
            lhs,
            rhs,
            margin,
            saturated: margin.abs() <= tol.abs_tol * rhs.max(1.0),
        }
    };

    let avg_tau = if !report.orthogonal_isometric {
        BoundCheck::Skipped {
            reason: "encoders are not a full set of orthogonal isometries".into(),
        }
    } else {
        let lhs = report.mean_tau();
        let rhs = cap;
        let margin = rhs - lhs;
        BoundCheck::Checked {
            holds: margin >= -tol.abs_tol,
            lhs,
            rhs,
            margin,
            saturated: margin.abs() <= tol.abs_tol * rhs.max(1.0),
        }
    };

    UnambiguousBoundsReport { inv_tau, avg_tau }
}

/// Capacity of dense coding over a (possibly mixed) shared state under
/// unitary encoding: `log2 D + S(rho_B) - S(rho)` in bits.
///
/// The value may drop below `log2 D`, in which case it is a lower-bound
/// figure rather than the optimal capacity, since discarding the state
/// always recovers the bare channel.
pub fn noisy_capacity(
    rho: &CMatrix,
    dim_a: usize,
    dim_b: usize,
    d_chan: usize,
    tol: &Tolerance,
) -> Result<f64> {
    let n = dim_a * dim_b;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "density operator is {}x{}, expected {n}x{n} for factors {dim_a} x {dim_b}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let s_total = von_neumann_entropy(rho, tol)?;
    let rho_b = partial_trace(rho, dim_a, dim_b, Factor::Second)?;
    let s_b = von_neumann_entropy(&rho_b, tol)?;
    Ok((d_chan as f64).log2() + s_b - s_total)
}

/// Best unambiguous success probability any POVM could grant an extra
/// message appended to a protocol whose existing messages must remain
/// perfectly distinguishable: the weight of the extra output state outside
/// the span of the existing output supports.
pub fn extension_headroom(p: &Protocol, extra: &KrausChannel, tol: &Tolerance) -> Result<f64> {
    let n = p.joint_dim();
    let mut support_cols: Vec<crate::tensor::CVector> = Vec::new();
    for ch in p.encoders() {
        let rho = bob_state(ch, &p.state)?;
        let eig = nalgebra::SymmetricEigen::new(rho);
        for i in 0..n {
            if eig.eigenvalues[i] > tol.abs_tol {
                support_cols.push(eig.eigenvectors.column(i).into_owned());
            }
        }
    }
    let stacked = CMatrix::from_fn(n, support_cols.len(), |i, j| support_cols[j][i]);
    let rank = numeric_rank(&stacked, tol);
    if rank >= n {
        // supports already fill the space; nothing can be added
        return Ok(0.0);
    }
    let svd = stacked.svd(true, false);
    let u = svd.u.unwrap();
    let mut proj = CMatrix::identity(n, n);
    for j in 0..rank {
        let col = u.column(j);
        proj -= &col * col.adjoint();
    }
    let rho_extra = bob_state(extra, &p.state)?;
    Ok((proj * rho_extra).trace().re.max(0.0))
}

/// Entropy of a list of squared Schmidt coefficients, for convenience in
/// reports.
pub fn state_entropy_bits(s: &EntangledState) -> f64 {
    entropy_bits(s.lambda_sq())
}

/// Minimum eigenvalue of the failure element of a protocol's POVM.
pub fn failure_element_min_eigenvalue(p: &Protocol, tol: &Tolerance) -> Result<f64> {
    let eigs = hermitian_eigenvalues(&p.povm().failure_element(), tol)?;
    Ok(eigs[0])
}
