//! The deterministic protocol over a uniformly entangled state: a rank-2
//! state and a 3-dimensional channel carry six messages with certainty.

use densecode::protocols::deterministic_uniform_protocol;
use densecode::render;
use densecode::verify::{check_info_bound, simulate};
use densecode::Tolerance;

fn main() {
    let tol = Tolerance::default();
    let protocol = deterministic_uniform_protocol(2, 3, &tol).unwrap();
    let report = simulate(&protocol, &tol).unwrap();
    print!("{}", render::report_text(&report));

    // the information bound is saturated exactly at full message count
    let info = check_info_bound(&report, &protocol.state, protocol.channel_dim);
    println!("{}", render::info_bound_text(&info));
}
