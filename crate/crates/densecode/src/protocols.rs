//! The constructive protocols: per-message encoders plus Bob's POVM,
//! assembled into simulatable [`Protocol`] values.
//!
//! Five constructions are provided:
//!
//! - [`deterministic_uniform_protocol`]: rank * channel_dim messages with
//!   certainty from a uniformly entangled state.
//! - [`saturated_unambiguous_protocol`]: every one of rank * channel_dim
//!   messages succeeds with the same probability `rank * lambda_min^2`,
//!   via one-shot entanglement concentration folded into the POVM.
//! - [`tailored_protocol`]: drops the smallest Schmidt component first and
//!   runs the reduced-rank deterministic protocol, trading dead message
//!   slots for a higher average success probability.
//! - [`subspace_protocol`]: for rank above the channel dimension, projects
//!   onto the leading block and transmits channel_dim^2 messages
//!   unambiguously.
//! - [`factorized_deterministic_protocol`]: when the coefficients factor
//!   into uniform groups, peels off a fully entangled factor and runs
//!   standard dense coding on it deterministically.
//!
//! [`reconstruct_encodings`] inverts a POVM design back into Alice's
//! isometries through the dual basis and the state's nonsingular map.

use crate::encodings::{
    check_orthogonality, ket_to_operator, phi_map, standard_family, transpose_to_ket, Isometry,
    IsometryFamily, KrausChannel,
};
use crate::error::{Error, Result};
use crate::states::EntangledState;
use crate::tensor::{
    cr, dual_basis, ensure_finite, hermitian_eigenvalues, kron, outer, CMatrix, CVector, Tolerance,
};

/// Bob's measurement: positive elements `B_y` for outcomes `y >= 1` on the
/// joint channel-Bob space, with the failure element `B_0` completing the
/// identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMatrix>,
    dim: usize,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>, dim: usize, tol: &Tolerance) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        for (y, el) in elements.iter().enumerate() {
            ensure_finite(el)?;
            if el.nrows() != dim || el.ncols() != dim {
                return Err(Error::InvalidPovm(format!(
                    "element {} is {}x{}, expected {dim}x{dim}",
                    y + 1,
                    el.nrows(),
                    el.ncols()
                )));
            }
            let eigs = hermitian_eigenvalues(el, tol)
                .map_err(|e| Error::InvalidPovm(format!("element {}: {e}", y + 1)))?;
            if eigs[0] < -tol.abs_tol {
                return Err(Error::InvalidPovm(format!(
                    "element {} has negative eigenvalue {:.3e}",
                    y + 1,
                    eigs[0]
                )));
            }
        }
        let povm = Self { elements, dim };
        let b0 = povm.failure_element();
        let eigs = hermitian_eigenvalues(&b0, tol)
            .map_err(|e| Error::InvalidPovm(format!("failure element: {e}")))?;
        if eigs[0] < -tol.abs_tol {
            return Err(Error::InvalidPovm(format!(
                "failure element has negative eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(povm)
    }

    /// Rank-one POVM from unnormalized kets `|B_y>`.
    pub fn from_kets(kets: &[CVector], dim: usize, tol: &Tolerance) -> Result<Self> {
        let elements = kets.iter().map(|k| outer(k, k)).collect();
        Self::new(elements, dim, tol)
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `B_0 = I - sum_y B_y`, positive semidefinite by construction.
    pub fn failure_element(&self) -> CMatrix {
        let mut b0 = CMatrix::identity(self.dim, self.dim);
        for el in &self.elements {
            b0 -= el;
        }
        b0
    }
}

/// A complete dense-coding protocol: the shared state, one encoder per live
/// message, and Bob's POVM.
///
/// The protocol carries `total_slots` message labels; the first
/// `encoders.len()` are live, the rest are reserved dead slots that count
/// in averages with zero success probability and are never transmitted.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub state: EntangledState,
    pub channel_dim: usize,
    encoders: Vec<KrausChannel>,
    povm: Povm,
    total_slots: usize,
    orthogonal_isometric: bool,
}

impl Protocol {
    pub fn new(
        state: EntangledState,
        channel_dim: usize,
        encoders: Vec<KrausChannel>,
        povm: Povm,
        total_slots: usize,
        tol: &Tolerance,
    ) -> Result<Self> {
        if encoders.is_empty() {
            return Err(Error::InvalidProtocol("no encoders".into()));
        }
        let d_bar = state.schmidt_rank();
        for (x, ch) in encoders.iter().enumerate() {
            if ch.domain_dim() != d_bar || ch.channel_dim() != channel_dim {
                return Err(Error::InvalidProtocol(format!(
                    "encoder {} maps {} -> {}, expected {d_bar} -> {channel_dim}",
                    x + 1,
                    ch.domain_dim(),
                    ch.channel_dim()
                )));
            }
        }
        if povm.dim() != channel_dim * d_bar {
            return Err(Error::InvalidProtocol(format!(
                "POVM acts on dimension {}, expected {}",
                povm.dim(),
                channel_dim * d_bar
            )));
        }
        if povm.elements().len() != encoders.len() {
            return Err(Error::InvalidProtocol(format!(
                "{} POVM elements for {} encoders",
                povm.elements().len(),
                encoders.len()
            )));
        }
        if total_slots < encoders.len() {
            return Err(Error::InvalidProtocol(format!(
                "{} slots cannot hold {} live messages",
                total_slots,
                encoders.len()
            )));
        }
        let orthogonal_isometric =
            total_slots == encoders.len() && Self::derive_orthogonal_isometric(&encoders, tol);
        Ok(Self {
            state,
            channel_dim,
            encoders,
            povm,
            total_slots,
            orthogonal_isometric,
        })
    }

    fn derive_orthogonal_isometric(encoders: &[KrausChannel], tol: &Tolerance) -> bool {
        let isometries: Option<Vec<Isometry>> =
            encoders.iter().map(|ch| ch.as_isometry(tol)).collect();
        match isometries {
            Some(members) => check_orthogonality(&members, tol)
                .map(|c| c.orthogonal)
                .unwrap_or(false),
            None => false,
        }
    }

    pub fn encoders(&self) -> &[KrausChannel] {
        &self.encoders
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn live_slots(&self) -> usize {
        self.encoders.len()
    }

    pub fn total_slots(&self) -> usize {
        self.total_slots
    }

    pub fn joint_dim(&self) -> usize {
        self.channel_dim * self.state.schmidt_rank()
    }

    /// Whether every live encoder is a single isometry and the family is
    /// pairwise trace-orthogonal with all slots live — the premises of the
    /// average-success bound.
    pub fn orthogonal_isometric(&self) -> bool {
        self.orthogonal_isometric
    }
}

/// A rank-one unambiguous measurement design: the POVM kets together with
/// the per-message success probabilities they certify.
#[derive(Debug, Clone)]
pub struct UnambiguousDesign {
    pub kets_b: Vec<CVector>,
    pub taus: Vec<f64>,
}

impl UnambiguousDesign {
    pub fn new(kets_b: Vec<CVector>, taus: Vec<f64>, tol: &Tolerance) -> Result<Self> {
        if kets_b.is_empty() || kets_b.len() != taus.len() {
            return Err(Error::InvalidPovm(
                "kets and success probabilities must pair up".into(),
            ));
        }
        let dim = kets_b[0].len();
        if kets_b.iter().any(|k| k.len() != dim) {
            return Err(Error::InvalidPovm("kets have mixed dimensions".into()));
        }
        if taus.iter().any(|&t| !(t > 0.0 && t <= 1.0 + tol.abs_tol)) {
            return Err(Error::InvalidPovm(
                "success probabilities must lie in (0, 1]".into(),
            ));
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &kets_b {
            sum += outer(k, k);
        }
        let remainder = CMatrix::identity(dim, dim) - sum;
        let eigs = hermitian_eigenvalues(&remainder, tol)?;
        if eigs[0] < -tol.abs_tol {
            return Err(Error::InvalidPovm(format!(
                "ket sum exceeds the identity (eigenvalue {:.3e} below zero)",
                eigs[0]
            )));
        }
        Ok(Self { kets_b, taus })
    }
}

/// `sum_{j<r} scale * (A e_j) (x) (bob_cols e_j)` as a joint-space ket.
fn lifted_ket(a: &CMatrix, bob_cols: &CMatrix, scale: f64) -> CVector {
    let (d_chan, r) = (a.nrows(), a.ncols());
    let bob_dim = bob_cols.nrows();
    debug_assert_eq!(bob_cols.ncols(), r);
    let mut ket = CVector::zeros(d_chan * bob_dim);
    for i in 0..d_chan {
        for m in 0..bob_dim {
            let mut acc = cr(0.0);
            for j in 0..r {
                acc += a[(i, j)] * bob_cols[(m, j)];
            }
            ket[i * bob_dim + m] = acc * cr(scale);
        }
    }
    ket
}

/// Deterministic dense coding of `d_bar * d_chan` messages over the uniform
/// state of rank `d_bar`, using the standard orthogonal family as encoders
/// and the matching orthonormal basis as Bob's measurement.
pub fn deterministic_uniform_protocol(
    d_bar: usize,
    d_chan: usize,
    tol: &Tolerance,
) -> Result<Protocol> {
    let family = standard_family(d_bar, d_chan)?;
    let state = EntangledState::uniform(d_bar)?;
    let scale = 1.0 / (d_bar as f64).sqrt();
    let kets: Vec<CVector> = family
        .members
        .iter()
        .map(|m| transpose_to_ket(m.matrix()) * cr(scale))
        .collect();
    let povm = Povm::from_kets(&kets, d_chan * d_bar, tol)?;
    let encoders: Vec<KrausChannel> = family.members.into_iter().map(Into::into).collect();
    let slots = d_bar * d_chan;
    Protocol::new(state, d_chan, encoders, povm, slots, tol)
}

/// Unambiguous protocol saturating the success-probability bounds: all
/// `rank * d_chan` messages succeed with probability `rank * lambda_min^2`.
///
/// Bob's POVM kets are the uniform-protocol basis vectors filtered through
/// the concentration operator on his particle. Any pairwise
/// trace-orthogonal family of the right size may be supplied; the standard
/// family is used by default.
pub fn saturated_unambiguous_protocol(
    s: &EntangledState,
    d_chan: usize,
    family: Option<IsometryFamily>,
    tol: &Tolerance,
) -> Result<(Protocol, UnambiguousDesign)> {
    let d_bar = s.schmidt_rank();
    if d_bar > d_chan {
        return Err(Error::RankExceedsChannel {
            rank: d_bar,
            d_chan,
        });
    }
    let family = match family {
        Some(f) => {
            if f.is_empty() || f.channel_dim() != d_chan || f.domain_dim() != d_bar {
                return Err(Error::DimensionMismatch(
                    "family shape does not match the state and channel".into(),
                ));
            }
            if f.len() != d_bar * d_chan {
                return Err(Error::InvalidProtocol(format!(
                    "family has {} members, need {}",
                    f.len(),
                    d_bar * d_chan
                )));
            }
            let check = check_orthogonality(&f.members, tol)?;
            if !check.orthogonal {
                return Err(Error::NotOrthogonalFamily(check.max_deviation));
            }
            f
        }
        None => standard_family(d_bar, d_chan)?,
    };

    let k1 = if d_bar == 1 {
        CMatrix::identity(1, 1)
    } else {
        s.concentration_filter()?.k1
    };
    let tau = d_bar as f64 * s.smallest_sq();
    let scale = 1.0 / (d_bar as f64).sqrt();
    let kets: Vec<CVector> = family
        .members
        .iter()
        .map(|m| lifted_ket(m.matrix(), &k1, scale))
        .collect();
    let taus = vec![tau; kets.len()];
    let design = UnambiguousDesign::new(kets.clone(), taus, tol)?;
    let povm = Povm::from_kets(&kets, d_chan * d_bar, tol)?;
    let encoders: Vec<KrausChannel> = family.members.into_iter().map(Into::into).collect();
    let slots = d_bar * d_chan;
    let protocol = Protocol::new(s.clone(), d_chan, encoders, povm, slots, tol)?;
    Ok((protocol, design))
}

/// Recover Alice's isometries from a measurement design: the dual basis of
/// the POVM kets, weighted by the inverse of the state's nonsingular map,
/// yields the encoder kets up to the recorded success probabilities.
pub fn reconstruct_encodings(
    design: &UnambiguousDesign,
    s: &EntangledState,
    tol: &Tolerance,
) -> Result<Vec<Isometry>> {
    let d_bar = s.schmidt_rank();
    let joint = design.kets_b[0].len();
    if joint % d_bar != 0 {
        return Err(Error::DimensionMismatch(format!(
            "kets of length {joint} do not factor over rank {d_bar}"
        )));
    }
    let d_chan = joint / d_bar;
    if design.kets_b.len() != joint {
        return Err(Error::DimensionMismatch(format!(
            "{} kets cannot form a basis of a {joint}-dimensional space",
            design.kets_b.len()
        )));
    }
    if design.taus.iter().any(|&t| t <= 0.0) {
        return Err(Error::InvalidProtocol(
            "reconstruction requires strictly positive success probabilities".into(),
        ));
    }
    let duals = dual_basis(&design.kets_b, tol)?;
    let inv_phi = {
        let mut m = phi_map(s);
        for j in 0..d_bar {
            m[(j, j)] = cr(1.0) / m[(j, j)];
        }
        m
    };
    let lift = kron(&CMatrix::identity(d_chan, d_chan), &inv_phi);
    design
        .taus
        .iter()
        .zip(&duals)
        .map(|(&tau, dual)| {
            let ket = &lift * dual * cr(tau.sqrt());
            let op = ket_to_operator(&ket, d_chan, d_bar)?;
            Isometry::new(op, tol)
        })
        .collect()
}

/// Protocol that first projects out the smallest Schmidt component on
/// Bob's side, then runs the deterministic construction for the surviving
/// rank. `d_chan * (rank - 1)` of the `rank * d_chan` slots are live; the
/// average success over all slots can exceed the orthogonal-family cap
/// because the extended encoders are no longer orthogonal.
pub fn tailored_protocol(s: &EntangledState, d_chan: usize, tol: &Tolerance) -> Result<Protocol> {
    let d_bar = s.schmidt_rank();
    if d_bar < 3 {
        return Err(Error::RankTooSmall {
            required: 3,
            got: d_bar,
        });
    }
    if d_bar > d_chan {
        return Err(Error::RankExceedsChannel {
            rank: d_bar,
            d_chan,
        });
    }
    let trunc = s.truncation_filter()?;
    let (survivor, _) = trunc.apply(s, tol)?;
    let r = d_bar - 1;
    debug_assert_eq!(survivor.schmidt_rank(), r);

    let family = standard_family(r, d_chan)?;
    let k1_hat = if r == 1 {
        CMatrix::identity(1, 1)
    } else {
        survivor.concentration_filter()?.k1
    };
    // Bob's combined success operator, as columns over the surviving block
    let mut bob_cols = CMatrix::zeros(d_bar, r);
    bob_cols.view_mut((0, 0), (r, r)).copy_from(&k1_hat);
    let scale = 1.0 / (r as f64).sqrt();
    let kets: Vec<CVector> = family
        .members
        .iter()
        .map(|m| lifted_ket(m.matrix(), &bob_cols, scale))
        .collect();
    let povm = Povm::from_kets(&kets, d_chan * d_bar, tol)?;

    // extend each encoder isometry to the full rank with a deterministic
    // orthonormal completion column
    let encoders: Vec<KrausChannel> = family
        .members
        .iter()
        .map(|m| {
            let a = m.matrix();
            let proj = CMatrix::identity(d_chan, d_chan) - a * a.adjoint();
            let col = (0..d_chan)
                .map(|i| proj.column(i).into_owned())
                .find(|c| c.norm() > 1e-6)
                .expect("complement of a strict isometry is nonempty");
            let col = &col / cr(col.norm());
            let mut ext = CMatrix::zeros(d_chan, d_bar);
            ext.view_mut((0, 0), (d_chan, r)).copy_from(a);
            ext.column_mut(r).copy_from(&col);
            Isometry::new(ext, tol).map(Into::into)
        })
        .collect::<Result<_>>()?;

    let slots = d_bar * d_chan;
    Protocol::new(s.clone(), d_chan, encoders, povm, slots, tol)
}

/// A subspace protocol together with its predicted per-message success
/// probability and the alternative reading in which the projection
/// probability multiplies the already-rescaled value a second time.
#[derive(Debug, Clone)]
pub struct SubspaceProtocol {
    pub protocol: Protocol,
    /// Probability that the leading-block projection succeeds.
    pub p_m: f64,
    /// Per-message success probability the simulation realizes:
    /// `d_chan * lambda_D^2`.
    pub tau_each: f64,
    /// The doubly-weighted reading `d_chan * lambda_D^2 * p_m`.
    pub tau_literal: f64,
    /// False when the two readings differ; the simulated value is the
    /// arbiter.
    pub literal_matches: bool,
}

/// Unambiguous transmission of `d_chan^2` messages when the Schmidt rank
/// exceeds the channel dimension: Bob projects onto the leading block of
/// his particle and then runs the saturated protocol on the rescaled
/// rank-`d_chan` state. Alice needs no measurement; her encoders carry
/// fixed complement embeddings that Bob's projection discards.
pub fn subspace_protocol(
    s: &EntangledState,
    d_chan: usize,
    tol: &Tolerance,
) -> Result<SubspaceProtocol> {
    let d_bar = s.schmidt_rank();
    if d_bar <= d_chan {
        return Err(Error::RankWithinChannel {
            rank: d_bar,
            d_chan,
        });
    }
    let coeffs = s.coefficients();
    let p_m: f64 = coeffs[..d_chan].iter().map(|c| c * c).sum();
    let rescaled = EntangledState::new(&coeffs[..d_chan])?;
    let family = standard_family(d_chan, d_chan)?;
    let k1_hat = if d_chan == 1 {
        CMatrix::identity(1, 1)
    } else {
        rescaled.concentration_filter()?.k1
    };
    let mut bob_cols = CMatrix::zeros(d_bar, d_chan);
    bob_cols
        .view_mut((0, 0), (d_chan, d_chan))
        .copy_from(&k1_hat);
    let scale = 1.0 / (d_chan as f64).sqrt();
    let kets: Vec<CVector> = family
        .members
        .iter()
        .map(|m| lifted_ket(m.matrix(), &bob_cols, scale))
        .collect();
    let povm = Povm::from_kets(&kets, d_chan * d_bar, tol)?;

    // one Kraus operator applies the unitary on the leading block; fixed
    // chunk embeddings complete the channel on the complement
    let tail = d_bar - d_chan;
    let chunks = tail.div_ceil(d_chan);
    let encoders: Vec<KrausChannel> = family
        .members
        .iter()
        .map(|m| {
            let mut main = CMatrix::zeros(d_chan, d_bar);
            main.view_mut((0, 0), (d_chan, d_chan))
                .copy_from(m.matrix());
            let mut ops = vec![main];
            for t in 0..chunks {
                let start = d_chan + t * d_chan;
                let count = d_chan.min(d_bar - start);
                let mut op = CMatrix::zeros(d_chan, d_bar);
                for i in 0..count {
                    op[(i, start + i)] = cr(1.0);
                }
                ops.push(op);
            }
            KrausChannel::new(ops, tol)
        })
        .collect::<Result<_>>()?;

    let lambda_d_sq = coeffs[d_chan - 1] * coeffs[d_chan - 1];
    let tau_each = d_chan as f64 * lambda_d_sq;
    let tau_literal = tau_each * p_m;
    let slots = d_chan * d_chan;
    let protocol = Protocol::new(s.clone(), d_chan, encoders, povm, slots, tol)?;
    Ok(SubspaceProtocol {
        protocol,
        p_m,
        tau_each,
        tau_literal,
        literal_matches: (tau_literal - tau_each).abs() <= tol.abs_tol,
    })
}

/// Relative tolerance for detecting equal coefficients within a group.
const GROUPING_REL_TOL: f64 = 1e-9;

/// Deterministic transmission of `d_chan^2` messages when the rank is a
/// multiple of the channel dimension and the sorted coefficients are
/// constant within consecutive groups of size `d_chan`: the state then
/// factors into a fully entangled pair tensored with a spectator, and the
/// spectator is discarded.
pub fn factorized_deterministic_protocol(
    s: &EntangledState,
    d_chan: usize,
    tol: &Tolerance,
) -> Result<Protocol> {
    let d_bar = s.schmidt_rank();
    if d_chan == 0 || d_bar % d_chan != 0 {
        return Err(Error::RankNotMultiple {
            rank: d_bar,
            d_chan,
        });
    }
    let groups = d_bar / d_chan;
    if groups < 2 {
        return Err(Error::RankNotMultiple {
            rank: d_bar,
            d_chan,
        });
    }
    let coeffs = s.coefficients();
    for g in 0..groups {
        let block = &coeffs[g * d_chan..(g + 1) * d_chan];
        let (max, min) = (block[0], block[d_chan - 1]);
        if (max - min) / max > GROUPING_REL_TOL {
            return Err(Error::GroupingFailed {
                group: g,
                rel_tol: GROUPING_REL_TOL,
            });
        }
    }

    let family = standard_family(d_chan, d_chan)?;
    let scale = 1.0 / (d_chan as f64).sqrt();

    // Bob measures the fully entangled factor in the encoded basis and
    // ignores the spectator: one lifted ket per (message, group) pair
    let joint = d_chan * d_bar;
    let elements: Vec<CMatrix> = family
        .members
        .iter()
        .map(|m| {
            let mut el = CMatrix::zeros(joint, joint);
            for g in 0..groups {
                let mut bob_cols = CMatrix::zeros(d_bar, d_chan);
                for f in 0..d_chan {
                    bob_cols[(g * d_chan + f, f)] = cr(1.0);
                }
                let ket = lifted_ket(m.matrix(), &bob_cols, scale);
                el += outer(&ket, &ket);
            }
            el
        })
        .collect();
    let povm = Povm::new(elements, joint, tol)?;

    // each Kraus operator routes one spectator block through the encoding
    // unitary
    let encoders: Vec<KrausChannel> = family
        .members
        .iter()
        .map(|m| {
            let ops: Vec<CMatrix> = (0..groups)
                .map(|g| {
                    let mut op = CMatrix::zeros(d_chan, d_bar);
                    op.view_mut((0, g * d_chan), (d_chan, d_chan))
                        .copy_from(m.matrix());
                    op
                })
                .collect();
            KrausChannel::new(ops, tol)
        })
        .collect::<Result<_>>()?;

    let slots = d_chan * d_chan;
    Protocol::new(s.clone(), d_chan, encoders, povm, slots, tol)
}
