//! Bob's two local filters: concentration makes the state uniformly
//! entangled when it succeeds, truncation drops the smallest Schmidt
//! component instead.

use densecode::{EntangledState, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let state = EntangledState::from_lambda_sq(&[0.5, 0.3, 0.2]).unwrap();
    println!("squared coefficients: {:?}", state.lambda_sq());

    let conc = state.concentration_filter().unwrap();
    let (post, p) = conc.apply(&state, &tol).unwrap();
    println!(
        "concentration: success probability {:.4}, post-success squares {:?}",
        p,
        post.lambda_sq()
    );

    let trunc = state.truncation_filter().unwrap();
    let (post, p) = trunc.apply(&state, &tol).unwrap();
    println!(
        "truncation:    success probability {:.4}, post-success squares {:?}",
        p,
        post.lambda_sq()
    );

    // concentrating can never raise the average entanglement
    let lhs =
        state.schmidt_rank() as f64 * state.smallest_sq() * (state.schmidt_rank() as f64).log2();
    println!(
        "average-entanglement check: {:.4} <= {:.4} (state entropy in bits)",
        lhs,
        state.entanglement_entropy()
    );
}
