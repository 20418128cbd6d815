//! Maximal entanglement is not needed for the full deterministic count
//! when the rank is a multiple of the channel dimension: coefficients
//! equal in groups let the state factor into a fully entangled pair times
//! a spectator, and the spectator is simply discarded.

use densecode::protocols::factorized_deterministic_protocol;
use densecode::render;
use densecode::verify::simulate;
use densecode::{EntangledState, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let state = EntangledState::from_lambda_sq(&[0.3, 0.3, 0.2, 0.2]).unwrap();
    println!(
        "rank-4 state with entropy {:.4} bits (below the 2.0 of the uniform state)",
        state.entanglement_entropy()
    );
    let protocol = factorized_deterministic_protocol(&state, 2, &tol).unwrap();
    let report = simulate(&protocol, &tol).unwrap();
    print!("{}", render::report_text(&report));

    // ungrouped coefficients cannot factor
    let bad = EntangledState::from_lambda_sq(&[0.4, 0.3, 0.2, 0.1]).unwrap();
    match factorized_deterministic_protocol(&bad, 2, &tol) {
        Err(e) => println!("ungrouped state rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
