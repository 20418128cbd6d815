//! Wire formats: states as squared-coefficient lists, complex matrices as
//! nested `[re, im]` arrays in row-major order, and protocols as state +
//! channel dimension + encoder channels + POVM elements.
//!
//! Loading validates everything through the same constructors the rest of
//! the crate uses, so a protocol that parses also simulates.

use serde::{Deserialize, Serialize};

use crate::encodings::KrausChannel;
use crate::error::{Error, Result};
use crate::protocols::{Povm, Protocol};
use crate::search::SearchResult;
use crate::states::EntangledState;
use crate::tensor::{CMatrix, Tolerance, C64};

/// Row-major complex matrix: rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub lambda_sq: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub kraus: Vec<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolJson {
    pub state: StateJson,
    pub channel_dim: usize,
    /// One Kraus-operator list per live message.
    pub encoders: Vec<Vec<MatrixJson>>,
    /// Success elements `B_y`, `y >= 1`; the failure element is implied.
    pub povm: Vec<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResultJson {
    pub defect: f64,
    pub feasible: bool,
    pub iterations_used: usize,
    pub restarts: usize,
    pub seed: u64,
    pub encoders: Vec<Vec<MatrixJson>>,
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged matrix rows".into()));
    }
    let m = CMatrix::from_fn(rows.len(), cols, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    });
    crate::tensor::ensure_finite(&m)?;
    Ok(m)
}

pub fn state_to_json(s: &EntangledState) -> StateJson {
    StateJson {
        lambda_sq: s.lambda_sq(),
    }
}

pub fn state_from_json(j: &StateJson) -> Result<EntangledState> {
    EntangledState::from_lambda_sq(&j.lambda_sq)
}

pub fn channel_to_json(ch: &KrausChannel) -> ChannelJson {
    ChannelJson {
        kraus: ch.operators().iter().map(matrix_to_json).collect(),
    }
}

pub fn channel_from_json(j: &ChannelJson, tol: &Tolerance) -> Result<KrausChannel> {
    let ops = j
        .kraus
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    KrausChannel::new(ops, tol)
}

pub fn protocol_to_json(p: &Protocol) -> ProtocolJson {
    ProtocolJson {
        state: state_to_json(&p.state),
        channel_dim: p.channel_dim,
        encoders: p
            .encoders()
            .iter()
            .map(|ch| ch.operators().iter().map(matrix_to_json).collect())
            .collect(),
        povm: p.povm().elements().iter().map(matrix_to_json).collect(),
    }
}

/// Rebuild a protocol, re-validating encoders, POVM positivity, and
/// dimensions. The slot count is the rank-channel product when the rank
/// fits the channel and the squared channel dimension otherwise.
pub fn protocol_from_json(j: &ProtocolJson, tol: &Tolerance) -> Result<Protocol> {
    let state = state_from_json(&j.state)?;
    let encoders = j
        .encoders
        .iter()
        .map(|ops| {
            let ops = ops
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>>>()?;
            KrausChannel::new(ops, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let elements = j
        .povm
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    let d_bar = state.schmidt_rank();
    let joint = j.channel_dim * d_bar;
    let povm = Povm::new(elements, joint, tol)?;
    let slots = if d_bar <= j.channel_dim {
        d_bar * j.channel_dim
    } else {
        j.channel_dim * j.channel_dim
    };
    Protocol::new(state, j.channel_dim, encoders, povm, slots, tol)
}

pub fn search_result_to_json(r: &SearchResult) -> SearchResultJson {
    SearchResultJson {
        defect: r.defect,
        feasible: r.feasible,
        iterations_used: r.iterations_used,
        restarts: r.restarts,
        seed: r.seed,
        encoders: r
            .best_family
            .iter()
            .map(|ch| ch.operators().iter().map(matrix_to_json).collect())
            .collect(),
    }
}

pub fn family_from_json(j: &SearchResultJson, tol: &Tolerance) -> Result<Vec<KrausChannel>> {
    j.encoders
        .iter()
        .map(|ops| {
            let ops = ops
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>>>()?;
            KrausChannel::new(ops, tol)
        })
        .collect()
}
