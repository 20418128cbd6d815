//! The open instance: a uniformly entangled rank-3 state, a qubit
//! channel, and three messages. The Kraus-rank bound allows three but no
//! construction was known; the seeded search settles it constructively,
//! finding three rank-2 encodings whose outputs tile the 6-dimensional
//! joint space as orthogonal planes.

use densecode::render;
use densecode::search::{protocol_from_feasible_family, search_deterministic_kraus, SearchConfig};
use densecode::verify::simulate;
use densecode::{EntangledState, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let state = EntangledState::uniform(3).unwrap();
    let cfg = SearchConfig {
        seed: 314159,
        ..SearchConfig::default()
    };

    let result = search_deterministic_kraus(&state, 2, 3, 2, &cfg).unwrap();
    println!(
        "search finished: defect = {:.3e}, feasible = {}, iterations = {}",
        result.defect, result.feasible, result.iterations_used
    );

    if result.feasible {
        let protocol = protocol_from_feasible_family(&state, 2, &result.best_family, &tol).unwrap();
        let report = simulate(&protocol, &tol).unwrap();
        println!("certificate by exact simulation:");
        print!("{}", render::report_text(&report));
    }
}
