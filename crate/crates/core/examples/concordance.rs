//! Certificates of n-concordance read from disk, the quotient isomorphisms
//! they induce, and repairing a certificate whose meridians are based
//! differently.

use std::path::Path;

use lcsknot::concordance::{
    check_n_concordance, extendable_from_concordance, quotient_iso_from_concordance, rebase_certificate,
    ConcordanceCertificate,
};
use lcsknot::io::format::read_document;

fn load(dir: &Path, name: &str) -> lcsknot::Result<ConcordanceCertificate> {
    let doc = read_document(&dir.join(name))?;
    let spec = doc.certificate.clone().expect("certificate section");
    let k = read_document(&dir.join(&spec.k))?.knot("K")?;
    let j = read_document(&dir.join(&spec.j))?.knot("J")?;
    ConcordanceCertificate::new(
        k, j, doc.over_g()?, spec.incl_k, spec.incl_j, spec.mu_k, spec.mu_j, spec.boundary_j, spec.boundary_v,
    )
}

pub fn run_example() -> lcsknot::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");

    let product = load(&dir, "free2_product.cert")?;
    for n in 2..=4 {
        let r = check_n_concordance(&product, n, true)?;
        println!("product, level {n}: pass {}", r.pass);
    }
    let iso = quotient_iso_from_concordance(&product, 3)?;
    println!("inclusions induce isomorphisms at level {}: {}", iso.level, iso.pass);
    let e = extendable_from_concordance(&product, 3)?;
    println!("extracted map passes {}, restricts to the projection {}", e.candidate.passes(), e.restriction_is_projection);

    let skew = load(&dir, "free2_conjugate.cert")?;
    println!("conjugate meridian, based check: {}", check_n_concordance(&skew, 3, true)?.pass);
    let fixed = rebase_certificate(&skew, 3, 1)?;
    let w = fixed.conjugator.expect("a conjugator within bound 1");
    println!("rebased by {} after {} trials", skew.v.pi.render(&w), fixed.examined);
    let cert = fixed.certificate.expect("amended certificate");
    assert!(check_n_concordance(&cert, 3, true)?.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
