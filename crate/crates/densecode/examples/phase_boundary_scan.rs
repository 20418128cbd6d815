//! Bisecting the feasibility threshold of deterministic coding along a
//! path of qubit states. For four messages only the uniform point works;
//! for three messages the threshold also sits at the uniform point, even
//! though the largest-coefficient cap alone would allow three messages up
//! to 2/3.

use densecode::search::{phase_boundary, SearchConfig};
use densecode::EntangledState;

fn main() {
    let cfg = SearchConfig {
        restarts: 16,
        seed: 5,
        ..SearchConfig::default()
    };
    let path = |t: f64| {
        let lead = 0.5 + 0.4 * t;
        EntangledState::from_lambda_sq(&[lead, 1.0 - lead]).unwrap()
    };

    for l in [3usize, 4] {
        let pb = phase_boundary(2, l, path, &cfg, 0.04).unwrap();
        println!(
            "{l} messages: threshold at t = {:.4} (largest squared coefficient {:.4}), \
             bracket width {:.4}, bracketed = {}",
            pb.threshold_t,
            pb.threshold_state.largest_sq(),
            pb.interval_width,
            pb.bracketed
        );
        for probe in &pb.probes {
            println!(
                "  t = {:.4}  defect = {:>10.3e}  feasible = {}{}",
                probe.t,
                probe.defect,
                probe.feasible,
                if probe.rejected_by_cap {
                    "  (rejected by the coefficient cap)"
                } else {
                    ""
                }
            );
        }
    }
}
