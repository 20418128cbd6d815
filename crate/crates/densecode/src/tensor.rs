//! Dense complex linear algebra foundation.
//!
//! Everything else in the crate is built on the operations collected here:
//! Schmidt decomposition of bipartite vectors, reciprocal (dual) bases,
//! partial traces, and tolerance-aware rank / positivity / entropy tests.
//! Matrices are plain [`nalgebra`] dynamic matrices over `Complex<f64>`;
//! all operations are pure functions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = DVector<C64>;

/// Shorthand for a real number lifted to the complex field.
#[inline]
pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Numerical tolerances used by every approximate test in the crate.
///
/// `abs_tol` governs equality, normalization, and positivity checks;
/// `rank_tol` is the relative singular-value cutoff for rank decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rank_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rank_tol: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rank_tol: f64) -> Result<Self> {
        let ok = |t: f64| t > 0.0 && t < 1e-3;
        if !ok(abs_tol) || !ok(rank_tol) {
            return Err(Error::InvalidTolerance { abs_tol, rank_tol });
        }
        Ok(Self { abs_tol, rank_tol })
    }
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Schmidt form of a bipartite pure state: coefficients sorted in
/// descending order together with the matching orthonormal bases.
///
/// Only the coefficients and the reconstruction identity are contractual;
/// individual basis vectors are ambiguous under degenerate coefficients.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVector>,
    pub right_basis: Vec<CVector>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuild the bipartite vector `sum_j c_j |left_j> (x) |right_j>`.
    pub fn reconstruct(&self) -> CVector {
        let da = self.left_basis[0].len();
        let db = self.right_basis[0].len();
        let mut out = CVector::zeros(da * db);
        for (j, &c) in self.coefficients.iter().enumerate() {
            for i in 0..da {
                for k in 0..db {
                    out[i * db + k] += cr(c) * self.left_basis[j][i] * self.right_basis[j][k];
                }
            }
        }
        out
    }
}

pub(crate) fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteEntries)
    }
}

/// Max absolute deviation of `m` from its own adjoint.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// Fails with [`Error::NotHermitian`] when `m` deviates from its adjoint by
/// more than `tol.abs_tol`.
pub fn hermitian_eigenvalues(m: &CMatrix, tol: &Tolerance) -> Result<Vec<f64>> {
    let dev = hermitian_deviation(m);
    if !dev.is_finite() || dev > tol.abs_tol {
        return Err(Error::NotHermitian(dev));
    }
    // Symmetrize first so the eigensolver sees an exactly Hermitian input.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Hermitian square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-abs_tol, 0)` are clamped to zero; anything lower is an
/// error.
pub fn sqrt_psd(m: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    let dev = hermitian_deviation(m);
    if !dev.is_finite() || dev > tol.abs_tol {
        return Err(Error::NotHermitian(dev));
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < -tol.abs_tol {
        return Err(Error::NotPositive(min));
    }
    let roots = eig.eigenvalues.map(|v| cr(v.max(0.0).sqrt()));
    Ok(&eig.eigenvectors * CMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint())
}

/// Kronecker product, first factor major: `(a (x) b)[(i1*rb+i2),(j1*cb+j2)] = a[i1,j1] b[i2,j2]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Outer product `|u><v|`.
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// Standard basis vector `e_i` in `n` dimensions.
pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = cr(1.0);
    v
}

/// Schmidt decomposition of a bipartite vector of shape `dim_a * dim_b`.
///
/// The input must be normalized within `tol.abs_tol`. Coefficients smaller
/// than `rank_tol` times the largest are discarded. Phases are fixed by
/// rotating each left vector so its largest-magnitude component is real
/// positive, with the inverse phase absorbed into the right vector, so the
/// reconstruction identity is preserved exactly.
pub fn schmidt_decompose(
    psi: &CVector,
    dim_a: usize,
    dim_b: usize,
    tol: &Tolerance,
) -> Result<SchmidtDecomposition> {
    if dim_a == 0 || dim_b == 0 || psi.len() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} cannot be split as {} x {}",
            psi.len(),
            dim_a,
            dim_b
        )));
    }
    let norm = psi.norm();
    if norm < tol.abs_tol {
        return Err(Error::ZeroInput);
    }
    if (norm - 1.0).abs() > tol.abs_tol {
        return Err(Error::NotNormalized(norm));
    }

    let coeff = CMatrix::from_fn(dim_a, dim_b, |i, k| psi[i * dim_b + k]);
    let svd = coeff.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u requested");
    let vt = svd.v_t.as_ref().expect("svd with v_t requested");

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let largest = svd.singular_values[order[0]];

    let mut coefficients = Vec::new();
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for &j in &order {
        let s = svd.singular_values[j];
        if s <= tol.rank_tol * largest {
            break;
        }
        let mut lv: CVector = u.column(j).into_owned();
        let mut rv: CVector = vt.row(j).transpose();
        // phase convention: leading component of the left vector real positive
        let peak = lv.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let lead = lv
            .iter()
            .position(|z| z.norm() >= peak * (1.0 - 1e-12))
            .unwrap();
        let phase = lv[lead] / cr(lv[lead].norm());
        lv /= phase;
        rv *= phase;
        coefficients.push(s);
        left_basis.push(lv);
        right_basis.push(rv);
    }
    Ok(SchmidtDecomposition {
        coefficients,
        left_basis,
        right_basis,
    })
}

/// Reciprocal basis `{|d_y>}` of a spanning set `{|b_x>}`, with
/// `<d_y|b_x> = delta_yx`.
///
/// Requires exactly `n` linearly independent vectors in an `n`-dimensional
/// space.
pub fn dual_basis(basis: &[CVector], tol: &Tolerance) -> Result<Vec<CVector>> {
    if basis.is_empty() {
        return Err(Error::ZeroInput);
    }
    let dim = basis[0].len();
    if basis.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(
            "basis vectors have mixed lengths".into(),
        ));
    }
    if basis.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "{} vectors cannot form a basis of a {}-dimensional space",
            basis.len(),
            dim
        )));
    }
    let b = CMatrix::from_fn(dim, dim, |i, x| basis[x][i]);
    let sv = b.clone().singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
        (hi.max(s), lo.min(s))
    });
    if smax == 0.0 || smin <= tol.rank_tol * smax {
        return Err(Error::LinearlyDependent);
    }
    let inv = b.adjoint().try_inverse().ok_or(Error::LinearlyDependent)?;
    Ok((0..dim).map(|y| inv.column(y).into_owned()).collect())
}

/// Partial trace of an operator on a bipartite space with the first factor
/// index major, keeping the requested factor.
pub fn partial_trace(
    rho: &CMatrix,
    dim_first: usize,
    dim_second: usize,
    keep: Factor,
) -> Result<CMatrix> {
    let n = dim_first * dim_second;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected {n}x{n} for factors {dim_first} x {dim_second}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let out = match keep {
        Factor::First => CMatrix::from_fn(dim_first, dim_first, |a, a2| {
            (0..dim_second)
                .map(|b| rho[(a * dim_second + b, a2 * dim_second + b)])
                .sum()
        }),
        Factor::Second => CMatrix::from_fn(dim_second, dim_second, |b, b2| {
            (0..dim_first)
                .map(|a| rho[(a * dim_second + b, a * dim_second + b2)])
                .sum()
        }),
    };
    Ok(out)
}

/// Count of singular values above `rank_tol` times the largest one.
pub fn numeric_rank(m: &CMatrix, tol: &Tolerance) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let largest = sv.iter().copied().fold(0.0f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol.rank_tol * largest).count()
}

/// Whether a Hermitian matrix has no eigenvalue below `-abs_tol`.
pub fn is_positive_semidefinite(m: &CMatrix, tol: &Tolerance) -> Result<bool> {
    let vals = hermitian_eigenvalues(m, tol)?;
    Ok(vals.first().map_or(true, |&lo| lo >= -tol.abs_tol))
}

/// Von Neumann entropy of a density operator, in bits.
pub fn von_neumann_entropy(rho: &CMatrix, tol: &Tolerance) -> Result<f64> {
    let vals = hermitian_eigenvalues(rho, tol)?;
    let trace: f64 = vals.iter().sum();
    if (trace - 1.0).abs() > tol.abs_tol {
        return Err(Error::NotDensity(format!("trace = {trace}")));
    }
    if let Some(&lo) = vals.first() {
        if lo < -tol.abs_tol {
            return Err(Error::NotDensity(format!("negative eigenvalue {lo:.3e}")));
        }
    }
    Ok(entropy_bits(vals.iter().map(|&p| p.max(0.0))))
}

/// Shannon entropy in bits of a probability-like sequence, with `0 log 0 = 0`.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{jacobi_singular_values, random_matrix, random_vector};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn schmidt_of_bell_pair_is_uniform() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = CVector::zeros(4);
        psi[0] = cr(s);
        psi[3] = cr(s);
        let d = schmidt_decompose(&psi, 2, 2, &tol()).unwrap();
        assert_eq!(d.rank(), 2);
        assert_abs_diff_eq!(d.coefficients[0], s, epsilon = 1e-12);
        assert_abs_diff_eq!(d.coefficients[1], s, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_of_product_state_is_rank_one() {
        // |0> (x) |1>
        let mut psi = CVector::zeros(4);
        psi[1] = cr(1.0);
        let d = schmidt_decompose(&psi, 2, 2, &tol()).unwrap();
        assert_eq!(d.rank(), 1);
        assert_abs_diff_eq!(d.coefficients[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_coefficients_match_jacobi_oracle() {
        // sqrt(0.5)|00> + sqrt(0.3)|11> + sqrt(0.2)|22>
        let mut psi = CVector::zeros(9);
        psi[0] = cr(0.5f64.sqrt());
        psi[4] = cr(0.3f64.sqrt());
        psi[8] = cr(0.2f64.sqrt());
        let d = schmidt_decompose(&psi, 3, 3, &tol()).unwrap();
        let coeff = CMatrix::from_fn(3, 3, |i, k| psi[i * 3 + k]);
        let oracle = jacobi_singular_values(&coeff);
        assert_eq!(d.rank(), 3);
        for (got, want) in d.coefficients.iter().zip(&oracle) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        // frozen values from the oracle
        assert_abs_diff_eq!(d.coefficients[0], 0.5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(d.coefficients[1], 0.3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(d.coefficients[2], 0.2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn schmidt_rejects_bad_input() {
        let psi = CVector::zeros(4);
        assert!(matches!(
            schmidt_decompose(&psi, 2, 2, &tol()),
            Err(Error::ZeroInput)
        ));
        let mut big = CVector::zeros(4);
        big[0] = cr(2.0);
        assert!(matches!(
            schmidt_decompose(&big, 2, 2, &tol()),
            Err(Error::NotNormalized(_))
        ));
        let mut odd = CVector::zeros(3);
        odd[0] = cr(1.0);
        assert!(matches!(
            schmidt_decompose(&odd, 2, 2, &tol()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn dual_of_orthonormal_basis_is_itself() {
        let basis = vec![basis_vector(3, 0), basis_vector(3, 1), basis_vector(3, 2)];
        let duals = dual_basis(&basis, &tol()).unwrap();
        for (d, b) in duals.iter().zip(&basis) {
            assert!((d - b).norm() < 1e-12);
        }
    }

    #[test]
    fn dual_of_skewed_basis_matches_hand_inverse() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b0 = CVector::from_vec(vec![cr(1.0), cr(0.0)]);
        let b1 = CVector::from_vec(vec![cr(s), cr(s)]);
        let duals = dual_basis(&[b0.clone(), b1.clone()], &tol()).unwrap();
        // inverting the basis matrix by hand gives (1,-1) and (0,sqrt(2))
        assert!((duals[0].clone() - CVector::from_vec(vec![cr(1.0), cr(-1.0)])).norm() < 1e-12);
        assert!(
            (duals[1].clone() - CVector::from_vec(vec![cr(0.0), cr(2.0f64.sqrt())])).norm() < 1e-12
        );
        // resolution of the identity
        let resolution = outer(&duals[0], &b0) + outer(&duals[1], &b1);
        assert!((resolution - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn dual_basis_rejects_dependent_vectors() {
        let v = CVector::from_vec(vec![cr(1.0), cr(0.0)]);
        assert!(matches!(
            dual_basis(&[v.clone(), v], &tol()),
            Err(Error::LinearlyDependent)
        ));
        let w = CVector::from_vec(vec![cr(1.0), cr(0.0)]);
        assert!(matches!(
            dual_basis(&[w], &tol()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = CVector::zeros(4);
        psi[0] = cr(s);
        psi[3] = cr(s);
        let rho = outer(&psi, &psi);
        let marg = partial_trace(&rho, 2, 2, Factor::Second).unwrap();
        assert!((marg - CMatrix::identity(2, 2).scale(0.5)).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_factorizes_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 2, 2);
        let rho_a = &a * a.adjoint();
        let b = random_matrix(&mut rng, 3, 3);
        let rho_b = &b * b.adjoint();
        let joint = kron(&rho_a, &rho_b);
        let kept = partial_trace(&joint, 2, 3, Factor::First).unwrap();
        let want = rho_a.scale(rho_b.trace().re);
        assert!((kept - want).norm() < 1e-10);
    }

    #[test]
    fn numeric_rank_basics() {
        assert_eq!(numeric_rank(&CMatrix::identity(4, 4), &tol()), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_vector(&mut rng, 4);
        let v = random_vector(&mut rng, 3);
        let m = CMatrix::from_fn(4, 3, |i, j| u[i] * v[j]);
        assert_eq!(numeric_rank(&m, &tol()), 1);
        assert_eq!(numeric_rank(&CMatrix::zeros(3, 3), &tol()), 0);
    }

    #[test]
    fn psd_tests() {
        assert!(is_positive_semidefinite(&CMatrix::identity(3, 3), &tol()).unwrap());
        let neg = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), cr(-0.5)]));
        assert!(!is_positive_semidefinite(&neg, &tol()).unwrap());
        let mut skew = CMatrix::zeros(2, 2);
        skew[(0, 1)] = cr(1.0);
        assert!(matches!(
            is_positive_semidefinite(&skew, &tol()),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn entropy_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = CVector::zeros(4);
        psi[0] = cr(s);
        psi[3] = cr(s);
        let pure = outer(&psi, &psi);
        assert_abs_diff_eq!(
            von_neumann_entropy(&pure, &tol()).unwrap(),
            0.0,
            epsilon = 1e-9
        );

        let mixed = CMatrix::identity(2, 2).scale(0.5);
        assert_abs_diff_eq!(
            von_neumann_entropy(&mixed, &tol()).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let diag = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(0.5), cr(0.3), cr(0.2)]));
        let direct = -(0.5f64 * 0.5f64.log2() + 0.3 * 0.3f64.log2() + 0.2 * 0.2f64.log2());
        assert_abs_diff_eq!(
            von_neumann_entropy(&diag, &tol()).unwrap(),
            direct,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(direct, 1.4854752972273344, epsilon = 1e-12);
    }

    #[test]
    fn entropy_rejects_non_density() {
        let not_unit = CMatrix::identity(2, 2);
        assert!(matches!(
            von_neumann_entropy(&not_unit, &tol()),
            Err(Error::NotDensity(_))
        ));
        let neg = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.5), cr(-0.5)]));
        assert!(matches!(
            von_neumann_entropy(&neg, &tol()),
            Err(Error::NotDensity(_))
        ));
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 4, 4);
        let p = &a * a.adjoint();
        let r = sqrt_psd(&p, &tol()).unwrap();
        assert!((&r * &r - p).norm() < 1e-10);
    }

    #[test]
    fn random_schmidt_reconstruction_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let (da, db) = (rng.random_range(2..5usize), rng.random_range(2..5usize));
            let mut psi = random_vector(&mut rng, da * db);
            psi /= cr(psi.norm());
            let d = schmidt_decompose(&psi, da, db, &tol()).unwrap();
            assert!((d.reconstruct() - psi).norm() < 1e-8);
            for basis in [&d.left_basis, &d.right_basis] {
                for i in 0..basis.len() {
                    for j in i..basis.len() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((basis[i].dotc(&basis[j]) - cr(want)).norm() < 1e-9);
                    }
                }
            }
            let squares: f64 = d.coefficients.iter().map(|c| c * c).sum();
            assert_abs_diff_eq!(squares, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn dual_basis_is_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let n = rng.random_range(2..6usize);
            let basis: Vec<CVector> = (0..n).map(|_| random_vector(&mut rng, n)).collect();
            if dual_basis(&basis, &tol()).is_err() {
                continue; // extremely unlikely for random vectors
            }
            let duals = dual_basis(&basis, &tol()).unwrap();
            let back = dual_basis(&duals, &tol()).unwrap();
            for (b, o) in back.iter().zip(&basis) {
                assert!((b - o).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn partial_trace_preserves_unit_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let (da, db) = (rng.random_range(2..4usize), rng.random_range(2..4usize));
            let a = random_matrix(&mut rng, da * db, da * db);
            let mut rho = &a * a.adjoint();
            rho /= cr(rho.trace().re);
            for keep in [Factor::First, Factor::Second] {
                let reduced = partial_trace(&rho, da, db, keep).unwrap();
                assert_abs_diff_eq!(reduced.trace().re, 1.0, epsilon = 1e-9);
                assert!(hermitian_deviation(&reduced) < 1e-12);
            }
        }
    }

    #[test]
    fn rank_is_stable_under_gram_and_nonsingular_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..100 {
            let (r, c) = (rng.random_range(2..6usize), rng.random_range(2..6usize));
            let k = rng.random_range(1..=r.min(c));
            // build a rank-k matrix
            let mut m = CMatrix::zeros(r, c);
            for _ in 0..k {
                let u = random_vector(&mut rng, r);
                let v = random_vector(&mut rng, c);
                m += CMatrix::from_fn(r, c, |i, j| u[i] * v[j]);
            }
            let rank = numeric_rank(&m, &tol());
            assert_eq!(rank, numeric_rank(&(&m * m.adjoint()), &tol()));
            let l = random_matrix(&mut rng, r, r);
            let rr = random_matrix(&mut rng, c, c);
            // random square matrices are nonsingular with probability one
            assert_eq!(rank, numeric_rank(&(&l * &m * &rr), &tol()));
        }
    }

    proptest! {
        #[test]
        fn entropy_bits_nonnegative(ps in proptest::collection::vec(0.0f64..1.0, 1..6)) {
            let total: f64 = ps.iter().sum();
            prop_assume!(total > 1e-6);
            let h = entropy_bits(ps.iter().map(|p| p / total));
            prop_assert!(h >= 0.0);
            prop_assert!(h <= (ps.len() as f64).log2() + 1e-9);
        }
    }
}
