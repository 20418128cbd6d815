//! When the smallest Schmidt coefficient is tiny, dropping it first beats
//! the average-success cap that binds orthogonal-isometry encodings: the
//! cap here is 0.03, the truncation-first protocol averages 0.66.

use densecode::protocols::{saturated_unambiguous_protocol, tailored_protocol};
use densecode::verify::simulate;
use densecode::{EntangledState, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let state = EntangledState::from_lambda_sq(&[0.495, 0.495, 0.01]).unwrap();
    let cap = state.schmidt_rank() as f64 * state.smallest_sq();
    println!("average-success cap for orthogonal isometries: {cap:.4}");

    let (saturated, _) = saturated_unambiguous_protocol(&state, 3, None, &tol).unwrap();
    let rs = simulate(&saturated, &tol).unwrap();
    println!(
        "saturated protocol: mean tau = {:.4} over {} slots",
        rs.mean_tau(),
        rs.slots()
    );

    let tailored = tailored_protocol(&state, 3, &tol).unwrap();
    let rt = simulate(&tailored, &tol).unwrap();
    println!(
        "truncation-first protocol: mean tau = {:.4} over {} slots ({} live), classification {}",
        rt.mean_tau(),
        rt.slots(),
        rt.live_slots,
        rt.classification
    );
    println!(
        "the tailored encoders extend to the full rank but are no longer orthogonal, \
         so the cap does not apply (flag: {})",
        rt.orthogonal_isometric
    );

    // on nearly uniform states the trade goes the other way
    let uniformish = EntangledState::from_lambda_sq(&[0.34, 0.33, 0.33]).unwrap();
    let (sat2, _) = saturated_unambiguous_protocol(&uniformish, 3, None, &tol).unwrap();
    let tail2 = tailored_protocol(&uniformish, 3, &tol).unwrap();
    println!(
        "nearly uniform state: saturated mean = {:.4}, truncation-first mean = {:.4}",
        simulate(&sat2, &tol).unwrap().mean_tau(),
        simulate(&tail2, &tol).unwrap().mean_tau()
    );
}
