//! First homology with coefficients in Z[G], computed from the Fox calculus
//! and cross-checked against the kernel presentation.

use std::path::Path;

use lcsknot::homology::{h1_fingerprint_compare, h1_kernel_via_rs, TwistedH1};
use lcsknot::io::format::read_document;

pub fn run_example() -> lcsknot::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut computed = Vec::new();
    for name in ["f2_over_z2.knot", "f2_over_z4.knot", "trefoil_over_z2.knot", "trefoil_over_s3.knot"] {
        let over = read_document(&dir.join(name))?.over_g()?;
        let h = TwistedH1::compute(&over)?;
        let rs = h1_kernel_via_rs(&over)?;
        println!("{name:24} fox: {:10} kernel: {rs}", h.invariants.to_string());
        assert_eq!(h.invariants, rs);
        for (g, coinv) in h.action_fingerprint()? {
            println!("    coinvariants of g{}: {coinv}", g.index());
        }
        computed.push(h);
    }
    let same = h1_fingerprint_compare(&computed[0], &computed[0])?;
    let other = h1_fingerprint_compare(&computed[2], &computed[3])?;
    println!("self comparison {}, trefoil Z/2 vs S3 {}", same.fingerprint_equal, other.fingerprint_equal);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
