//! Unambiguous coding at full message count: every message succeeds with
//! the same probability `rank * lambda_min^2`, saturating both the
//! inverse-average floor and the average cap.

use densecode::protocols::saturated_unambiguous_protocol;
use densecode::render;
use densecode::verify::{check_unambiguous_bounds, evaluate_bounds, simulate};
use densecode::{EntangledState, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let state = EntangledState::from_lambda_sq(&[0.7, 0.3]).unwrap();
    let (protocol, design) = saturated_unambiguous_protocol(&state, 2, None, &tol).unwrap();

    let report = simulate(&protocol, &tol).unwrap();
    print!("{}", render::report_text(&report));
    println!("designed success probabilities: {:?}", design.taus);

    let bounds = evaluate_bounds(&state, 2);
    print!("{}", render::bounds_text(&bounds));
    let checks = check_unambiguous_bounds(&report, &state, &tol);
    println!("{}", render::unambiguous_bounds_text(&checks));
}
