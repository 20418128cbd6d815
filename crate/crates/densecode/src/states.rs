//! Entangled-state model and the local filtering operations on Bob's side.
//!
//! States are represented by their Schmidt coefficients alone; the Schmidt
//! bases are fixed to the computational bases, which every protocol in this
//! crate is covariant under. Both shared particles carry the same dimension
//! as the Schmidt rank.

use crate::error::{Error, Result};
use crate::tensor::{
    basis_vector, cr, kron, schmidt_decompose, sqrt_psd, CMatrix, CVector, Tolerance,
};

/// A bipartite pure state given by its Schmidt coefficients, sorted in
/// descending order with squares summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledState {
    coefficients: Vec<f64>,
}

impl EntangledState {
    /// Build a state from raw (unnormalized) coefficients. Entries are
    /// sorted descending and scaled so the squares sum to one; exact zeros
    /// are dropped.
    pub fn new(raw: &[f64]) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCoefficients("non-finite entry".into()));
        }
        if let Some(&bad) = raw.iter().find(|&&x| x < 0.0) {
            return Err(Error::InvalidCoefficients(format!("negative entry {bad}")));
        }
        let mut coefficients: Vec<f64> = raw.iter().copied().filter(|&x| x > 0.0).collect();
        if coefficients.is_empty() {
            return Err(Error::InvalidCoefficients(
                "no strictly positive entry".into(),
            ));
        }
        let norm = coefficients.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut coefficients {
            *x /= norm;
        }
        coefficients.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { coefficients })
    }

    /// Build a state from squared coefficients (the JSON wire form).
    pub fn from_lambda_sq(raw_sq: &[f64]) -> Result<Self> {
        if raw_sq.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCoefficients("non-finite entry".into()));
        }
        if let Some(&bad) = raw_sq.iter().find(|&&x| x < 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "negative squared entry {bad}"
            )));
        }
        let roots: Vec<f64> = raw_sq.iter().map(|x| x.sqrt()).collect();
        Self::new(&roots)
    }

    /// State with `d` equal coefficients `1/sqrt(d)`.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidCoefficients(
                "dimension must be at least 1".into(),
            ));
        }
        Ok(Self {
            coefficients: vec![1.0 / (d as f64).sqrt(); d],
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn lambda_sq(&self) -> Vec<f64> {
        self.coefficients.iter().map(|x| x * x).collect()
    }

    pub fn schmidt_rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Largest squared coefficient.
    pub fn largest_sq(&self) -> f64 {
        self.coefficients[0] * self.coefficients[0]
    }

    /// Smallest squared coefficient.
    pub fn smallest_sq(&self) -> f64 {
        let last = self.coefficients[self.coefficients.len() - 1];
        last * last
    }

    pub fn is_uniform(&self, tol: &Tolerance) -> bool {
        self.largest_sq() - self.smallest_sq() <= tol.abs_tol
    }

    /// Entanglement entropy in bits.
    pub fn entanglement_entropy(&self) -> f64 {
        crate::tensor::entropy_bits(self.lambda_sq())
    }

    /// The state as a vector in the rank^2-dimensional joint space.
    pub fn to_vector(&self) -> CVector {
        let d = self.schmidt_rank();
        let mut psi = CVector::zeros(d * d);
        for (j, &c) in self.coefficients.iter().enumerate() {
            psi[j * d + j] = cr(c);
        }
        psi
    }

    /// Local filter that concentrates the state into a uniformly entangled
    /// one when the success operator fires.
    pub fn concentration_filter(&self) -> Result<LocalFilter> {
        let d = self.schmidt_rank();
        if d < 2 {
            return Err(Error::RankTooSmall {
                required: 2,
                got: d,
            });
        }
        let min = *self.coefficients.last().unwrap();
        let diag: Vec<C64> = self.coefficients.iter().map(|&c| cr(min / c)).collect();
        let k1 = CMatrix::from_diagonal(&CVector::from_vec(diag));
        let tol = Tolerance::default();
        let k2 = sqrt_psd(&(CMatrix::identity(d, d) - k1.adjoint() * &k1), &tol)?;
        let success_prob = d as f64 * min * min;
        LocalFilter::new(k1, k2, success_prob, &tol)
    }

    /// Local filter that projects out the smallest Schmidt component.
    pub fn truncation_filter(&self) -> Result<LocalFilter> {
        let d = self.schmidt_rank();
        if d < 2 {
            return Err(Error::RankTooSmall {
                required: 2,
                got: d,
            });
        }
        let mut k1 = CMatrix::identity(d, d);
        k1[(d - 1, d - 1)] = cr(0.0);
        let last = basis_vector(d, d - 1);
        let k2 = crate::tensor::outer(&last, &last);
        let success_prob = 1.0 - self.smallest_sq();
        LocalFilter::new(k1, k2, success_prob, &Tolerance::default())
    }
}

use crate::tensor::C64;

/// A two-outcome local operation on Bob's particle: `k1` is the success
/// operator, `k2` the failure operator, with `k1'k1 + k2'k2 = I`.
#[derive(Debug, Clone)]
pub struct LocalFilter {
    pub k1: CMatrix,
    pub k2: CMatrix,
    pub success_prob: f64,
}

impl LocalFilter {
    pub fn new(k1: CMatrix, k2: CMatrix, success_prob: f64, tol: &Tolerance) -> Result<Self> {
        let d = k1.nrows();
        if k1.ncols() != d || k2.nrows() != d || k2.ncols() != d {
            return Err(Error::DimensionMismatch(
                "filter operators must be square and equal-sized".into(),
            ));
        }
        let sum = k1.adjoint() * &k1 + k2.adjoint() * &k2;
        let dev = (&sum - CMatrix::identity(d, d)).norm();
        if dev > tol.abs_tol * (d as f64) {
            return Err(Error::IncompleteChannel(dev));
        }
        if !(success_prob > 0.0 && success_prob <= 1.0 + tol.abs_tol) {
            return Err(Error::InvalidCoefficients(format!(
                "success probability {success_prob} outside (0, 1]"
            )));
        }
        Ok(Self {
            k1,
            k2,
            success_prob: success_prob.min(1.0),
        })
    }

    /// Apply the success branch to a state and return the renormalized
    /// post-filter state together with the probability that this branch
    /// fires.
    pub fn apply(&self, s: &EntangledState, tol: &Tolerance) -> Result<(EntangledState, f64)> {
        let d = s.schmidt_rank();
        if self.k1.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "filter acts on dimension {}, state has rank {d}",
                self.k1.ncols()
            )));
        }
        let psi = s.to_vector();
        let filtered = kron(&CMatrix::identity(d, d), &self.k1) * psi;
        let p = filtered.norm_squared();
        if p <= tol.abs_tol {
            return Err(Error::ZeroInput);
        }
        let normalized = filtered / cr(p.sqrt());
        let schmidt = schmidt_decompose(&normalized, d, d, tol)?;
        Ok((EntangledState::new(&schmidt.coefficients)?, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn random_state(rng: &mut impl Rng, d: usize) -> EntangledState {
        let raw: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 0.05).collect();
        EntangledState::new(&raw).unwrap()
    }

    #[test]
    fn new_sorts_and_normalizes() {
        let s = EntangledState::new(&[3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(s.coefficients()[0], 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(s.coefficients()[1], 0.6, epsilon = 1e-12);
    }

    #[test]
    fn new_handles_rank_one_and_zeros() {
        let s = EntangledState::new(&[1.0]).unwrap();
        assert_eq!(s.schmidt_rank(), 1);
        assert_abs_diff_eq!(s.coefficients()[0], 1.0, epsilon = 1e-15);

        let s = EntangledState::new(&[1.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(s.schmidt_rank(), 3);
        let want = 1.0 / 3.0f64.sqrt();
        for &c in s.coefficients() {
            assert_abs_diff_eq!(c, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(EntangledState::new(&[]).is_err());
        assert!(EntangledState::new(&[0.0, 0.0]).is_err());
        assert!(EntangledState::new(&[1.0, -0.1]).is_err());
    }

    #[test]
    fn uniform_state_properties() {
        let s = EntangledState::uniform(2).unwrap();
        assert_abs_diff_eq!(
            s.coefficients()[0],
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        let s4 = EntangledState::uniform(4).unwrap();
        assert_eq!(s4.schmidt_rank(), 4);
        for &c in s4.coefficients() {
            assert_abs_diff_eq!(c, 0.5, epsilon = 1e-15);
        }
        assert!(EntangledState::uniform(0).is_err());
        for d in 1..=6 {
            let s = EntangledState::uniform(d).unwrap();
            assert_abs_diff_eq!(s.entanglement_entropy(), (d as f64).log2(), epsilon = 1e-12);
        }
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(
            EntangledState::uniform(3).unwrap().entanglement_entropy(),
            3.0f64.log2(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            EntangledState::new(&[1.0]).unwrap().entanglement_entropy(),
            0.0,
            epsilon = 1e-15
        );
        let s = EntangledState::from_lambda_sq(&[0.5, 0.3, 0.2]).unwrap();
        assert_abs_diff_eq!(
            s.entanglement_entropy(),
            1.4854752972273344,
            epsilon = 1e-12
        );
    }

    #[test]
    fn concentration_filter_examples() {
        let s = EntangledState::from_lambda_sq(&[0.7, 0.3]).unwrap();
        let f = s.concentration_filter().unwrap();
        assert_abs_diff_eq!(f.success_prob, 0.6, epsilon = 1e-12);
        let (post, p) = f.apply(&s, &tol()).unwrap();
        assert_abs_diff_eq!(p, 0.6, epsilon = 1e-12);
        assert!(post.is_uniform(&tol()));

        let u = EntangledState::uniform(3).unwrap();
        let f = u.concentration_filter().unwrap();
        assert!((f.k1.clone() - CMatrix::identity(3, 3)).norm() < 1e-12);
        assert_abs_diff_eq!(f.success_prob, 1.0, epsilon = 1e-12);

        let s = EntangledState::from_lambda_sq(&[0.5, 0.3, 0.2]).unwrap();
        let f = s.concentration_filter().unwrap();
        assert_abs_diff_eq!(f.success_prob, 0.6, epsilon = 1e-12);
        let (post, _) = f.apply(&s, &tol()).unwrap();
        let want = 1.0 / 3.0f64.sqrt();
        for &c in post.coefficients() {
            assert_abs_diff_eq!(c, want, epsilon = 1e-9);
        }
        assert!(EntangledState::new(&[1.0])
            .unwrap()
            .concentration_filter()
            .is_err());
    }

    #[test]
    fn truncation_filter_examples() {
        let s = EntangledState::from_lambda_sq(&[0.495, 0.495, 0.01]).unwrap();
        let f = s.truncation_filter().unwrap();
        assert_abs_diff_eq!(f.success_prob, 0.99, epsilon = 1e-12);

        let u2 = EntangledState::uniform(2).unwrap();
        let f = u2.truncation_filter().unwrap();
        assert_abs_diff_eq!(f.success_prob, 0.5, epsilon = 1e-12);
        let (post, _) = f.apply(&u2, &tol()).unwrap();
        assert_eq!(post.schmidt_rank(), 1);

        let s = EntangledState::from_lambda_sq(&[0.5, 0.3, 0.2]).unwrap();
        let f = s.truncation_filter().unwrap();
        assert_abs_diff_eq!(f.success_prob, 0.8, epsilon = 1e-12);
        let (post, p) = f.apply(&s, &tol()).unwrap();
        assert_abs_diff_eq!(p, 0.8, epsilon = 1e-12);
        let sq = post.lambda_sq();
        assert_abs_diff_eq!(sq[0], 0.625, epsilon = 1e-12);
        assert_abs_diff_eq!(sq[1], 0.375, epsilon = 1e-12);
        assert!(EntangledState::new(&[1.0])
            .unwrap()
            .truncation_filter()
            .is_err());
    }

    #[test]
    fn concentration_success_equals_rank_times_smallest_sq() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let d = rng.random_range(2..6usize);
            let s = random_state(&mut rng, d);
            let f = s.concentration_filter().unwrap();
            assert!(f.success_prob > 0.0 && f.success_prob <= 1.0 + 1e-12);
            assert_abs_diff_eq!(f.success_prob, d as f64 * s.smallest_sq(), epsilon = 1e-12);
            // success probability agrees with the Born rule on the filter
            let psi = s.to_vector();
            let op = kron(&CMatrix::identity(d, d), &(f.k1.adjoint() * &f.k1));
            let born = (psi.adjoint() * op * &psi)[(0, 0)].re;
            assert_abs_diff_eq!(f.success_prob, born, epsilon = 1e-12);
        }
    }

    #[test]
    fn filters_are_complete_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let d = rng.random_range(2..6usize);
            let s = random_state(&mut rng, d);
            for f in [
                s.concentration_filter().unwrap(),
                s.truncation_filter().unwrap(),
            ] {
                let sum = f.k1.adjoint() * &f.k1 + f.k2.adjoint() * &f.k2;
                assert!((sum - CMatrix::identity(d, d)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn concentration_cannot_increase_average_entanglement() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let d = rng.random_range(2..7usize);
            let s = random_state(&mut rng, d);
            let lhs = d as f64 * s.smallest_sq() * (d as f64).log2();
            assert!(lhs <= s.entanglement_entropy() + 1e-12);
        }
    }
}
