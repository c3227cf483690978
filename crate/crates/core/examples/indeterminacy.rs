//! Changing the basing of an extendable map by an element centralizing the
//! meridian, and the boundary-condition automorphism that relates the two.

use std::path::Path;

use lcsknot::invariants::{bc_automorphism_from_pair, canonical_tau, pi1_shadow_compare, rebase};
use lcsknot::io::format::{parse_word, read_document};

pub fn run_example() -> lcsknot::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let j = read_document(&dir.join("trefoil_over_s3.knot"))?.knot("trefoil-s3")?;
    let c = canonical_tau(&j, 2)?;

    let lambda = j.bc.l.clone();
    let rebased = rebase(&c, &lambda)?.candidate.expect("the longitude commutes with the meridian");
    println!("rebased by the longitude: passes {}", rebased.passes());
    let p = bc_automorphism_from_pair(&c, &rebased)?;
    println!("relating automorphism: {:?}", p.report);
    assert!(p.report.member && !p.report.is_identity);

    let b = parse_word("b", &j.over.pi.names).expect("b is a generator");
    let refused = rebase(&c, &b)?;
    println!("rebasing by b: {:?}", refused.obstruction);
    assert!(refused.candidate.is_none());

    let shadow = pi1_shadow_compare(&c, &rebased, 2)?;
    println!("induced maps on fundamental groups: {:?}", shadow.verdict);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
