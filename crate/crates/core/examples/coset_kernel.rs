//! Presents the kernel of the 3-colouring of the trefoil onto S3 and reads
//! its abelianization, which is H1 of the regular 6-fold cover.
//! The cover has three boundary tori, one per coset of the meridian.

use std::path::Path;

use lcsknot::coset::kernel_presentation;
use lcsknot::homology::h1_kernel_via_rs;
use lcsknot::io::format::read_document;

pub fn run_example() -> lcsknot::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/trefoil_over_s3.knot");
    let over = read_document(&path)?.over_g()?;

    let kp = kernel_presentation(&over)?;
    println!("index {} in pi, kernel rank {}", kp.table.len(), kp.rank());
    for (i, w) in kp.schreier_generators.iter().enumerate() {
        println!("  s{i} = {}", over.pi.render(w));
    }
    println!("{} relators", kp.presentation.relators.len());

    let h1 = h1_kernel_via_rs(&over)?;
    println!("kernel abelianization: {h1}");
    assert_eq!(h1.free_rank, 3);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
