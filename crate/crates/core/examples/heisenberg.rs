//! A polycyclic target group: kernel membership in the Heisenberg group, and
//! the relative quotient of a free group over it compared with the class-2
//! quotient of F2.

use std::path::Path;

use lcsknot::io::format::{parse_word, read_document};
use lcsknot::nq::nilpotent_quotient;
use lcsknot::pc::PcPresentation;
use lcsknot::relquo::RelativeQuotient;
use lcsknot::words::FpPresentation;

pub fn run_example() -> lcsknot::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/heisenberg.knot");
    let over = read_document(&path)?.over_g()?;
    for w in ["XYxyT", "XYxy", "tT", "xyXY"] {
        let word = parse_word(w, &over.pi.names).expect("valid word");
        println!("{w:6} in the kernel: {}", over.kernel_membership(&word));
    }

    let h = RelativeQuotient::from_pc(PcPresentation::heisenberg())?;
    let f2 = nilpotent_quotient(&FpPresentation::free(["x", "y"]), 2)?;
    println!("Heisenberg layers {:?}, F2/Γ3 layers {:?}",
        h.layers().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        f2.layers().iter().map(|a| a.to_string()).collect::<Vec<_>>());
    assert_eq!(h.hirsch_length(), f2.presentation().hirsch_length());
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
