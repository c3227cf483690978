//! Lower central series quotients of a free group and of the trefoil group,
//! together with the Schur multiplier of each nilpotent quotient.

use lcsknot::homology::h2_pc_group;
use lcsknot::nq::{nilpotent_quotient, witt_number};
use lcsknot::satellite::trefoil_presentation;
use lcsknot::words::FpPresentation;

pub fn run_example() -> lcsknot::Result<()> {
    let f2 = FpPresentation::free(["x", "y"]);
    let q = nilpotent_quotient(&f2, 5)?;
    q.group.check_consistency()?;
    let sizes = q.layer_sizes();
    println!("F2 layers up to class 5: {sizes:?}");
    for (w, &s) in sizes.iter().enumerate() {
        assert_eq!(s as u128, witt_number(2, w + 1));
    }

    for c in 1..=3 {
        let h2 = h2_pc_group(nilpotent_quotient(&f2, c)?.presentation())?;
        println!("H2(F2/Γ{}) = {h2}", c + 1);
    }

    let (trefoil, _, _) = trefoil_presentation(["a", "b"]);
    let t = nilpotent_quotient(&trefoil, 4)?;
    println!("trefoil layers: {:?}", t.layers().iter().map(|a| a.to_string()).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
