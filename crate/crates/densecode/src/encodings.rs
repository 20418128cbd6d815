//! Alice-side encoding maps.
//!
//! An encoding for one message is either a single isometry from the state
//! space into the channel space or, when the Schmidt rank exceeds the
//! channel dimension, a Kraus channel with several operators. This module
//! provides the shifted-clock construction of pairwise trace-orthogonal
//! isometry families, map-state duality (operators as bipartite kets), the
//! Kraus rank, the channel-side output state, and extension of orthogonal
//! families to a larger domain.

use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::states::EntangledState;
use crate::tensor::{cr, ensure_finite, numeric_rank, outer, CMatrix, CVector, Tolerance, C64};

/// A norm-preserving map from the state space into the channel space,
/// stored as a `channel_dim x rank` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: CMatrix,
}

impl Isometry {
    pub fn new(matrix: CMatrix, tol: &Tolerance) -> Result<Self> {
        ensure_finite(&matrix)?;
        if matrix.nrows() < matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "an isometry needs at least as many rows as columns, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let d = matrix.ncols();
        let dev = (matrix.adjoint() * &matrix - CMatrix::identity(d, d)).norm();
        if dev > tol.abs_tol * (d as f64).max(1.0) {
            return Err(Error::NotIsometry(dev));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Domain dimension (the Schmidt rank it encodes).
    pub fn domain_dim(&self) -> usize {
        self.matrix.ncols()
    }

    /// Range dimension (the channel).
    pub fn channel_dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// A completely positive trace-preserving encoding given by Kraus operators
/// `{A_l}` with `sum_l A_l' A_l = I` on the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<CMatrix>, tol: &Tolerance) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::ZeroInput);
        }
        let (r, c) = (operators[0].nrows(), operators[0].ncols());
        for op in &operators {
            ensure_finite(op)?;
            if op.nrows() != r || op.ncols() != c {
                return Err(Error::DimensionMismatch(
                    "Kraus operators have mixed shapes".into(),
                ));
            }
        }
        let mut sum = CMatrix::zeros(c, c);
        for op in &operators {
            sum += op.adjoint() * op;
        }
        let dev = (sum - CMatrix::identity(c, c)).norm();
        if dev > tol.abs_tol * (c as f64).max(1.0) {
            return Err(Error::IncompleteChannel(dev));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn domain_dim(&self) -> usize {
        self.operators[0].ncols()
    }

    pub fn channel_dim(&self) -> usize {
        self.operators[0].nrows()
    }

    /// Whether the channel consists of a single isometry.
    pub fn as_isometry(&self, tol: &Tolerance) -> Option<Isometry> {
        if self.operators.len() == 1 {
            Isometry::new(self.operators[0].clone(), tol).ok()
        } else {
            None
        }
    }
}

impl From<Isometry> for KrausChannel {
    fn from(iso: Isometry) -> Self {
        Self {
            operators: vec![iso.matrix],
        }
    }
}

/// A collection of equally shaped isometries, flagged when they are
/// pairwise trace-orthogonal: `Tr(A_x' A_y) = rank * delta_xy`.
#[derive(Debug, Clone)]
pub struct IsometryFamily {
    pub members: Vec<Isometry>,
    pub orthogonal: bool,
}

/// Outcome of a pairwise trace-orthogonality test.
#[derive(Debug, Clone, Copy)]
pub struct OrthogonalityCheck {
    pub orthogonal: bool,
    pub max_deviation: f64,
}

impl IsometryFamily {
    /// Wrap members, computing the orthogonality flag.
    pub fn new(members: Vec<Isometry>, tol: &Tolerance) -> Result<Self> {
        let check = check_orthogonality(&members, tol)?;
        Ok(Self {
            members,
            orthogonal: check.orthogonal,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn domain_dim(&self) -> usize {
        self.members[0].domain_dim()
    }

    pub fn channel_dim(&self) -> usize {
        self.members[0].channel_dim()
    }
}

/// The full set of `rank * channel_dim` pairwise trace-orthogonal
/// isometries built from a phase clock on the domain, a cyclic shift on the
/// channel, and the canonical embedding between them.
///
/// Member `x = alpha * channel_dim + beta` maps the `j`-th domain basis
/// vector to `exp(2 pi i j alpha / rank) * e_{(j + beta) mod channel_dim}`.
pub fn standard_family(d_bar: usize, d_chan: usize) -> Result<IsometryFamily> {
    if d_bar == 0 || d_chan == 0 {
        return Err(Error::DimensionMismatch(
            "dimensions must be at least 1".into(),
        ));
    }
    if d_bar > d_chan {
        return Err(Error::RankExceedsChannel {
            rank: d_bar,
            d_chan,
        });
    }
    let tol = Tolerance::default();
    let tau = 2.0 * std::f64::consts::PI / d_bar as f64;
    let mut members = Vec::with_capacity(d_bar * d_chan);
    for alpha in 0..d_bar {
        for beta in 0..d_chan {
            let mut m = CMatrix::zeros(d_chan, d_bar);
            for j in 0..d_bar {
                let phase = tau * (j * alpha) as f64;
                m[((j + beta) % d_chan, j)] = C64::new(phase.cos(), phase.sin());
            }
            members.push(Isometry::new(m, &tol)?);
        }
    }
    let family = IsometryFamily::new(members, &tol)?;
    debug_assert!(family.orthogonal);
    Ok(family)
}

/// Pairwise trace-orthogonality test: reports the worst deviation of
/// `Tr(A_x' A_y)` from `rank * delta_xy` over all pairs.
pub fn check_orthogonality(members: &[Isometry], tol: &Tolerance) -> Result<OrthogonalityCheck> {
    if members.is_empty() {
        return Err(Error::ZeroInput);
    }
    let (r, c) = (members[0].channel_dim(), members[0].domain_dim());
    if members
        .iter()
        .any(|m| m.channel_dim() != r || m.domain_dim() != c)
    {
        return Err(Error::DimensionMismatch(
            "family members have mixed shapes".into(),
        ));
    }
    let d_bar = c as f64;
    let mut max_dev: f64 = 0.0;
    for x in 0..members.len() {
        for y in x..members.len() {
            let tr = (members[x].matrix().adjoint() * members[y].matrix()).trace();
            let want = if x == y { cr(d_bar) } else { cr(0.0) };
            max_dev = max_dev.max((tr - want).norm());
        }
    }
    Ok(OrthogonalityCheck {
        orthogonal: max_dev <= tol.abs_tol,
        max_deviation: max_dev,
    })
}

/// Map-state duality: an operator `A` as the bipartite ket
/// `|A> = sum_j (A e_j) (x) e_j`, so that `<A|B> = Tr(A'B)`.
pub fn transpose_to_ket(a: &CMatrix) -> CVector {
    let (r, c) = (a.nrows(), a.ncols());
    let mut v = CVector::zeros(r * c);
    for i in 0..r {
        for j in 0..c {
            v[i * c + j] = a[(i, j)];
        }
    }
    v
}

/// Inverse of [`transpose_to_ket`].
pub fn ket_to_operator(v: &CVector, rows: usize, cols: usize) -> Result<CMatrix> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "ket of length {} cannot fill a {rows}x{cols} operator",
            v.len()
        )));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]))
}

/// The nonsingular map dual to a state: the diagonal matrix of its Schmidt
/// coefficients.
pub fn phi_map(s: &EntangledState) -> CMatrix {
    let diag: Vec<C64> = s.coefficients().iter().map(|&c| cr(c)).collect();
    CMatrix::from_diagonal(&DVector::from_vec(diag))
}

/// Number of linearly independent Kraus operators, computed as the rank of
/// the matrix whose columns are the vectorized operators.
pub fn kraus_rank(ch: &KrausChannel, tol: &Tolerance) -> usize {
    let n = ch.channel_dim() * ch.domain_dim();
    let stacked = CMatrix::from_fn(n, ch.operators().len(), |i, l| {
        // column-major stacking matches the internal layout
        ch.operators()[l].as_slice()[i]
    });
    numeric_rank(&stacked, tol)
}

/// The state Bob holds after Alice encodes with `ch` on her half of `s`:
/// `rho = sum_l (A_l (x) I) |Phi><Phi| (A_l (x) I)'` on the joint
/// channel-Bob space.
pub fn bob_state(ch: &KrausChannel, s: &EntangledState) -> Result<CMatrix> {
    let d_bar = s.schmidt_rank();
    if ch.domain_dim() != d_bar {
        return Err(Error::DimensionMismatch(format!(
            "channel domain {} does not match Schmidt rank {d_bar}",
            ch.domain_dim()
        )));
    }
    let lambda = phi_map(s);
    let n = ch.channel_dim() * d_bar;
    let mut rho = CMatrix::zeros(n, n);
    for op in ch.operators() {
        let w = transpose_to_ket(&(op * &lambda));
        rho += outer(&w, &w);
    }
    Ok(rho)
}

/// Orthonormal basis of the orthogonal complement of an isometry's column
/// space.
fn complement_basis(iso: &Isometry) -> CMatrix {
    let d = iso.channel_dim();
    let a = iso.matrix();
    let proj = CMatrix::identity(d, d) - a * a.adjoint();
    let eig = nalgebra::SymmetricEigen::new(proj);
    let cols: Vec<usize> = (0..d).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    CMatrix::from_fn(d, cols.len(), |i, j| eig.eigenvectors[(i, cols[j])])
}

/// Extend every member of an orthogonal family by one domain dimension,
/// keeping each map an isometry and the family pairwise trace-orthogonal.
///
/// The appended columns must be mutually orthonormal, each lying in the
/// complement of its own member's column space. When the family has more
/// members than the channel dimension no such columns exist and the call
/// fails with [`Error::ExtensionObstructed`]. Otherwise the columns are
/// searched for by seeded alternating projections between the orthonormal
/// frames and the per-member complements; families whose complements admit
/// no common orthonormal selection fail with [`Error::ExtensionNotFound`].
pub fn extend_orthogonal_family(
    family: &IsometryFamily,
    tol: &Tolerance,
    seed: u64,
) -> Result<IsometryFamily> {
    if family.is_empty() {
        return Err(Error::ZeroInput);
    }
    let n = family.len();
    let d = family.domain_dim();
    let d_chan = family.channel_dim();
    if d >= d_chan {
        return Err(Error::DimensionMismatch(format!(
            "domain {d} already fills the channel dimension {d_chan}"
        )));
    }
    let check = check_orthogonality(&family.members, tol)?;
    if !check.orthogonal {
        return Err(Error::NotOrthogonalFamily(check.max_deviation));
    }
    if n > d_chan {
        return Err(Error::ExtensionObstructed { n, d_chan });
    }

    let complements: Vec<CMatrix> = family.members.iter().map(complement_basis).collect();
    let projectors: Vec<CMatrix> = complements.iter().map(|b| b * b.adjoint()).collect();

    let attempts = 24;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        if let Some(columns) = alternating_projection_frame(&projectors, &mut rng) {
            let mut extended = Vec::with_capacity(n);
            let mut ok = true;
            for (member, v) in family.members.iter().zip(&columns) {
                let mut m = CMatrix::zeros(d_chan, d + 1);
                m.view_mut((0, 0), (d_chan, d)).copy_from(member.matrix());
                m.column_mut(d).copy_from(v);
                match Isometry::new(m, tol) {
                    Ok(iso) => extended.push(iso),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let fam = IsometryFamily::new(extended, tol)?;
                if fam.orthogonal {
                    return Ok(fam);
                }
            }
        }
    }
    Err(Error::ExtensionNotFound { attempts })
}

/// Search for an orthonormal frame `{v_n}` with `v_n` in the range of
/// `projectors[n]`, by alternating a column-wise subspace projection with a
/// polar re-orthonormalization of the frame.
fn alternating_projection_frame(
    projectors: &[CMatrix],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<CVector>> {
    let n = projectors.len();
    let d = projectors[0].nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut frame = CMatrix::from_fn(d, n, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    for _ in 0..500 {
        // project each column into its member's complement
        let mut projected = frame.clone();
        for (slot, &idx) in order.iter().enumerate() {
            let col = &projectors[idx] * frame.column(slot);
            if col.norm() < 1e-9 {
                let rand_col = CVector::from_fn(d, |_, _| {
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                projected.set_column(slot, &(&projectors[idx] * rand_col));
            } else {
                projected.set_column(slot, &col);
            }
        }
        // closest orthonormal frame
        let svd = projected.svd(true, true);
        if svd.singular_values.iter().any(|&s| s < 1e-12) {
            return None;
        }
        frame = svd.u.unwrap() * svd.v_t.unwrap();
        let residual: f64 = (0..n)
            .map(|slot| (frame.column(slot) - &projectors[order[slot]] * frame.column(slot)).norm())
            .fold(0.0, f64::max);
        if residual < 1e-13 {
            let mut cols = vec![CVector::zeros(d); n];
            for (slot, &idx) in order.iter().enumerate() {
                cols[idx] = frame.column(slot).into_owned();
            }
            return Some(cols);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::kron;
    use crate::testutil::{random_channel, random_matrix, random_unitary};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn standard_family_2x2_is_orthogonal_unitaries() {
        let fam = standard_family(2, 2).unwrap();
        assert_eq!(fam.len(), 4);
        let check = check_orthogonality(&fam.members, &tol()).unwrap();
        assert!(check.orthogonal);
        assert!(check.max_deviation < 1e-12);
    }

    #[test]
    fn standard_family_rank_one_is_column_embeddings() {
        let fam = standard_family(1, 3).unwrap();
        assert_eq!(fam.len(), 3);
        for (beta, member) in fam.members.iter().enumerate() {
            let want = crate::tensor::basis_vector(3, beta);
            assert!((member.matrix().column(0) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn standard_family_2x3_gram_matrix() {
        let fam = standard_family(2, 3).unwrap();
        assert_eq!(fam.len(), 6);
        let kets: Vec<CVector> = fam
            .members
            .iter()
            .map(|m| transpose_to_ket(m.matrix()))
            .collect();
        for x in 0..6 {
            for y in 0..6 {
                let g = kets[x].dotc(&kets[y]);
                let want = if x == y { cr(2.0) } else { cr(0.0) };
                assert!((g - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn standard_family_rejects_rank_above_channel() {
        assert!(matches!(
            standard_family(3, 2),
            Err(Error::RankExceedsChannel { .. })
        ));
    }

    #[test]
    fn orthogonality_detects_duplicates_and_paulis() {
        let eye = Isometry::new(CMatrix::identity(2, 2), &tol()).unwrap();
        let check = check_orthogonality(&[eye.clone(), eye], &tol()).unwrap();
        assert!(!check.orthogonal);
        assert_abs_diff_eq!(check.max_deviation, 2.0, epsilon = 1e-12);

        let x = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        let y = CMatrix::from_row_slice(
            2,
            2,
            &[cr(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), cr(0.0)],
        );
        let z = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
        let paulis: Vec<Isometry> = [CMatrix::identity(2, 2), x, y, z]
            .into_iter()
            .map(|m| Isometry::new(m, &tol()).unwrap())
            .collect();
        assert!(check_orthogonality(&paulis, &tol()).unwrap().orthogonal);
    }

    #[test]
    fn orthogonality_for_all_small_standard_families() {
        for d_chan in 1..=5usize {
            for d_bar in 1..=d_chan {
                let fam = standard_family(d_bar, d_chan).unwrap();
                let check = check_orthogonality(&fam.members, &tol()).unwrap();
                assert!(check.orthogonal, "family ({d_bar},{d_chan})");
                assert!(check.max_deviation < 1e-10);
            }
        }
    }

    #[test]
    fn transpose_examples() {
        let ket = transpose_to_ket(&CMatrix::identity(2, 2));
        assert!(
            (ket.clone() - CVector::from_vec(vec![cr(1.0), cr(0.0), cr(0.0), cr(1.0)])).norm()
                < 1e-15
        );
        assert_abs_diff_eq!(ket.norm_squared(), 2.0, epsilon = 1e-12);

        let fam = standard_family(2, 3).unwrap();
        for m in &fam.members {
            let k = transpose_to_ket(m.matrix());
            assert_abs_diff_eq!(k.norm_squared(), 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn transpose_is_linear_and_norm_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let (r, c) = (rng.random_range(2..5usize), rng.random_range(2..5usize));
            let a = random_matrix(&mut rng, r, c);
            let b = random_matrix(&mut rng, r, c);
            let ka = transpose_to_ket(&a);
            let kb = transpose_to_ket(&b);
            let inner = ka.dotc(&kb);
            let trace = (a.adjoint() * &b).trace();
            assert!((inner - trace).norm() < 1e-12);
            let sum = transpose_to_ket(&(&a + &b));
            assert!((sum - (&ka + &kb)).norm() < 1e-15);
            let back = ket_to_operator(&ka, r, c).unwrap();
            assert!((back - a).norm() < 1e-15);
        }
    }

    #[test]
    fn phi_map_examples() {
        let u = EntangledState::uniform(2).unwrap();
        let phi = phi_map(&u);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((phi - CMatrix::identity(2, 2).scale(s)).norm() < 1e-15);

        let st = EntangledState::from_lambda_sq(&[0.7, 0.3]).unwrap();
        let phi = phi_map(&st);
        assert_abs_diff_eq!(phi[(0, 0)].re, 0.7f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(phi[(1, 1)].re, 0.3f64.sqrt(), epsilon = 1e-15);
        // smallest eigenvalue of phi'phi is the smallest squared coefficient
        let gram = phi.adjoint() * &phi;
        let eigs = crate::tensor::hermitian_eigenvalues(&gram, &tol()).unwrap();
        assert_abs_diff_eq!(eigs[0], 0.3, epsilon = 1e-12);
    }

    #[test]
    fn kraus_rank_examples() {
        let iso = standard_family(2, 2).unwrap().members[0].clone();
        let ch: KrausChannel = iso.into();
        assert_eq!(kraus_rank(&ch, &tol()), 1);

        // two orthogonal rank-1 projectors form a rank-2 channel
        let p0 = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        let p1 = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(0.0), cr(0.0), cr(1.0)]);
        let ch = KrausChannel::new(vec![p0, p1], &tol()).unwrap();
        assert_eq!(kraus_rank(&ch, &tol()), 2);
    }

    #[test]
    fn kraus_rank_invariant_under_unitary_recombination() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let d_bar = rng.random_range(2..4usize);
            let d_chan = rng.random_range(2..4usize);
            let kappa = rng.random_range(1..=4usize).max(d_bar.div_ceil(d_chan));
            let ch = random_channel(&mut rng, d_bar, d_chan, kappa);
            let rank = kraus_rank(&ch, &tol());
            let u = random_unitary(&mut rng, kappa);
            let mixed: Vec<CMatrix> = (0..kappa)
                .map(|m| {
                    let mut acc = CMatrix::zeros(d_chan, d_bar);
                    for l in 0..kappa {
                        acc += &ch.operators()[l] * u[(l, m)];
                    }
                    acc
                })
                .collect();
            let mixed_ch = KrausChannel::new(mixed, &tol()).unwrap();
            assert_eq!(kraus_rank(&mixed_ch, &tol()), rank);
        }
    }

    #[test]
    fn bob_state_pure_for_isometries_and_marginal_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let s = EntangledState::from_lambda_sq(&[0.5, 0.3, 0.2]).unwrap();
        let fam = standard_family(3, 4).unwrap();
        for member in fam.members.iter().take(4) {
            let ch: KrausChannel = member.clone().into();
            let rho = bob_state(&ch, &s).unwrap();
            assert_eq!(numeric_rank(&rho, &tol()), 1);
            assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
            let marginal =
                crate::tensor::partial_trace(&rho, 4, 3, crate::tensor::Factor::Second).unwrap();
            let want = CMatrix::from_diagonal(&DVector::from_vec(
                s.lambda_sq().into_iter().map(cr).collect::<Vec<_>>(),
            ));
            assert!((marginal - want).norm() < 1e-12);
        }
        // mixed encodings leave the marginal unchanged too
        let ch = random_channel(&mut rng, 3, 2, 2);
        let rho = bob_state(&ch, &s).unwrap();
        let marginal =
            crate::tensor::partial_trace(&rho, 2, 3, crate::tensor::Factor::Second).unwrap();
        let want = CMatrix::from_diagonal(&DVector::from_vec(
            s.lambda_sq().into_iter().map(cr).collect::<Vec<_>>(),
        ));
        assert!((marginal - want).norm() < 1e-12);
    }

    #[test]
    fn channel_output_rank_equals_kraus_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..200 {
            let d_bar = rng.random_range(2..5usize);
            let d_chan = rng.random_range(2..5usize);
            let lo = d_bar.div_ceil(d_chan);
            let kappa = rng.random_range(lo..=4.max(lo));
            if kappa * d_chan < d_bar || kappa > d_bar * d_chan {
                continue;
            }
            let ch = random_channel(&mut rng, d_bar, d_chan, kappa);
            let raw: Vec<f64> = (0..d_bar).map(|_| rng.random::<f64>() + 0.05).collect();
            let s = EntangledState::new(&raw).unwrap();
            let rho = bob_state(&ch, &s).unwrap();
            assert_eq!(kraus_rank(&ch, &tol()), numeric_rank(&rho, &tol()));
        }
    }

    #[test]
    fn channel_output_rank_via_dual_map_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let s = EntangledState::from_lambda_sq(&[0.4, 0.35, 0.25]).unwrap();
        let ch = random_channel(&mut rng, 3, 3, 2);
        assert_eq!(kraus_rank(&ch, &tol()), 2);
        // stacking the operator kets column by column and weighting Bob's
        // side by the state's dual map reproduces the channel output as an
        // explicit factorization
        let k = CMatrix::from_fn(9, 2, |i, l| transpose_to_ket(&ch.operators()[l])[i]);
        let weight = kron(&CMatrix::identity(3, 3), &phi_map(&s));
        let m = weight * k;
        assert_eq!(numeric_rank(&m, &tol()), 2);
        let rho = bob_state(&ch, &s).unwrap();
        assert!((&m * m.adjoint() - rho).norm() < 1e-12);
    }

    #[test]
    fn kraus_rank_lower_bound_when_rank_exceeds_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let d_chan = rng.random_range(2..4usize);
            let d_bar = rng.random_range(d_chan + 1..=3 * d_chan);
            let lo = d_bar.div_ceil(d_chan);
            let kappa = rng.random_range(lo..lo + 3);
            let ch = random_channel(&mut rng, d_bar, d_chan, kappa);
            assert!(kraus_rank(&ch, &tol()) >= lo);
        }
    }

    #[test]
    fn extension_succeeds_for_full_width_distinct_shift_family() {
        // members with distinct channel shifts always admit an extension
        let fam = standard_family(2, 3).unwrap();
        let subset: Vec<Isometry> = (0..3).map(|beta| fam.members[beta].clone()).collect();
        let family = IsometryFamily::new(subset, &tol()).unwrap();
        let extended = extend_orthogonal_family(&family, &tol(), 7).unwrap();
        assert!(extended.orthogonal);
        assert_eq!(extended.domain_dim(), 3);
        for m in &extended.members {
            let g = m.matrix().adjoint() * m.matrix();
            assert!((g - CMatrix::identity(3, 3)).norm() < 1e-9);
        }
    }

    #[test]
    fn extension_of_single_member_succeeds() {
        let fam = standard_family(2, 4).unwrap();
        let family = IsometryFamily::new(vec![fam.members[0].clone()], &tol()).unwrap();
        let extended = extend_orthogonal_family(&family, &tol(), 3).unwrap();
        assert_eq!(extended.len(), 1);
        assert_eq!(extended.domain_dim(), 3);
    }

    #[test]
    fn extension_fails_structurally_when_members_exceed_channel() {
        let fam = standard_family(2, 3).unwrap(); // 6 members into dimension 3
        let err = extend_orthogonal_family(&fam, &tol(), 1).unwrap_err();
        assert!(matches!(
            err,
            Error::ExtensionObstructed { n: 6, d_chan: 3 }
        ));
    }

    #[test]
    fn extension_reports_not_found_when_complements_collide() {
        // two members sharing the same channel shift have identical column
        // spans, so their appended columns could never be orthogonal
        let fam = standard_family(2, 3).unwrap();
        let subset = vec![fam.members[0].clone(), fam.members[3].clone()];
        let family = IsometryFamily::new(subset, &tol()).unwrap();
        assert!(family.orthogonal);
        let err = extend_orthogonal_family(&family, &tol(), 11).unwrap_err();
        assert!(matches!(err, Error::ExtensionNotFound { .. }));
    }
}
