//! Operators as kets: a measurement design determines Alice's encoders
//! through the dual basis of the POVM kets and the inverse of the state's
//! coefficient map. Reconstructing the saturated protocol recovers its
//! isometries.

use densecode::encodings::transpose_to_ket;
use densecode::protocols::{reconstruct_encodings, saturated_unambiguous_protocol};
use densecode::tensor::outer;
use densecode::{EntangledState, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let state = EntangledState::from_lambda_sq(&[0.5, 0.3, 0.2]).unwrap();
    let (protocol, design) = saturated_unambiguous_protocol(&state, 3, None, &tol).unwrap();

    let rebuilt = reconstruct_encodings(&design, &state, &tol).unwrap();
    let d_bar = state.schmidt_rank() as f64;
    let mut worst: f64 = 0.0;
    for (ch, iso) in protocol.encoders().iter().zip(&rebuilt) {
        let ka = transpose_to_ket(&ch.operators()[0]);
        let kb = transpose_to_ket(iso.matrix());
        // compare projectors to quotient out the per-member global phase
        let diff = (outer(&ka, &ka) - outer(&kb, &kb)).norm() / d_bar;
        worst = worst.max(diff);
    }
    println!(
        "reconstructed {} encoders; worst projector deviation = {worst:.3e}",
        rebuilt.len()
    );
}
