//! Seeded feasibility search for deterministic protocols with isometric
//! encoding. Feasible results certify an explicit protocol; negatives are
//! only "not found within budget".

use densecode::search::{protocol_from_feasible_family, search_deterministic, SearchConfig};
use densecode::verify::simulate;
use densecode::{EntangledState, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let cfg = SearchConfig {
        seed: 7,
        ..SearchConfig::default()
    };

    // the uniform qubit pair carries four deterministic messages
    let uniform = EntangledState::uniform(2).unwrap();
    let r = search_deterministic(&uniform, 2, 4, &cfg).unwrap();
    println!(
        "uniform state, 4 messages: defect = {:.3e}, feasible = {}",
        r.defect, r.feasible
    );
    let p = protocol_from_feasible_family(&uniform, 2, &r.best_family, &tol).unwrap();
    println!(
        "  simulated classification: {}",
        simulate(&p, &tol).unwrap().classification
    );

    // above the uniform point three messages are never found: two encoders
    // must behave antidiagonally, and their relative encoding stays visible
    let skew = EntangledState::from_lambda_sq(&[0.6, 0.4]).unwrap();
    let r = search_deterministic(&skew, 2, 3, &cfg).unwrap();
    println!(
        "skewed state, 3 messages: defect = {:.3e}, feasible = {} (honest negative)",
        r.defect, r.feasible
    );

    // past the largest-coefficient cap the search refuses to run
    let steep = EntangledState::from_lambda_sq(&[0.75, 0.25]).unwrap();
    match search_deterministic(&steep, 2, 3, &cfg) {
        Err(e) => println!("steeper state, 3 messages: {e}"),
        Ok(_) => unreachable!(),
    }
}
