//! Extending orthogonal isometries to one more domain dimension: possible
//! only for at most channel-dimension many members, since the appended
//! columns must be mutually orthonormal.

use densecode::encodings::{extend_orthogonal_family, standard_family, IsometryFamily};
use densecode::Tolerance;

fn main() {
    let tol = Tolerance::default();

    // three members with distinct channel shifts extend cleanly
    let base = standard_family(2, 3).unwrap();
    let subset: Vec<_> = (0..3).map(|beta| base.members[beta].clone()).collect();
    let family = IsometryFamily::new(subset, &tol).unwrap();
    match extend_orthogonal_family(&family, &tol, 42) {
        Ok(extended) => println!(
            "extended {} members from domain 2 to domain 3; still orthogonal: {}",
            extended.len(),
            extended.orthogonal
        ),
        Err(e) => println!("unexpected failure: {e}"),
    }

    // the full family has six members mapping into dimension 3: obstructed
    match extend_orthogonal_family(&base, &tol, 42) {
        Err(e) => println!("full family: {e}"),
        Ok(_) => unreachable!(),
    }

    // two members sharing a shift have colliding complements: no
    // extension exists even though only two members are involved
    let colliding =
        IsometryFamily::new(vec![base.members[0].clone(), base.members[3].clone()], &tol).unwrap();
    match extend_orthogonal_family(&colliding, &tol, 42) {
        Err(e) => println!("colliding pair: {e}"),
        Ok(_) => unreachable!(),
    }
}
