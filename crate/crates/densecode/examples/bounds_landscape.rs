//! Bound reports across the two regimes: rank within the channel
//! dimension (success-probability bounds exist) and rank above it (only
//! the Kraus-rank counting bounds exist).

use densecode::render;
use densecode::verify::evaluate_bounds;
use densecode::EntangledState;

fn main() {
    for (label, lambda_sq, d_chan) in [
        ("uniform qubit pair over a qubit channel", vec![0.5, 0.5], 2),
        (
            "skewed qubit pair over a qubit channel",
            vec![2.0 / 3.0, 1.0 / 3.0],
            2,
        ),
        (
            "rank 3 over a 3-dimensional channel",
            vec![0.5, 0.3, 0.2],
            3,
        ),
        ("rank 3 over a qubit channel", vec![0.5, 0.3, 0.2], 2),
        ("product state over a 3-dimensional channel", vec![1.0], 3),
    ] {
        let state = EntangledState::from_lambda_sq(&lambda_sq).unwrap();
        println!("== {label}");
        print!("{}", render::bounds_text(&evaluate_bounds(&state, d_chan)));
        println!();
    }
}
