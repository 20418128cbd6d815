//! The number of independent Kraus operators in Alice's encoding equals
//! the rank of the state Bob receives, whatever the (full-rank) shared
//! state.

use densecode::encodings::{bob_state, kraus_rank, KrausChannel};
use densecode::tensor::{numeric_rank, CMatrix, Tolerance, C64};
use densecode::EntangledState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let state = EntangledState::from_lambda_sq(&[0.4, 0.35, 0.25]).unwrap();

    for kappa in 1..=4usize {
        // random channel with kappa operators: a tall matrix with
        // orthonormal columns, cut into blocks
        let m = CMatrix::from_fn(kappa * 3, 3, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let svd = m.svd(true, true);
        let stacked = svd.u.unwrap() * svd.v_t.unwrap();
        let ops = (0..kappa)
            .map(|l| stacked.rows(l * 3, 3).into_owned())
            .collect();
        let channel = KrausChannel::new(ops, &tol).unwrap();

        let rho = bob_state(&channel, &state).unwrap();
        println!(
            "kappa = {kappa}: kraus_rank = {}, rank of Bob's state = {}",
            kraus_rank(&channel, &tol),
            numeric_rank(&rho, &tol)
        );
    }
}
