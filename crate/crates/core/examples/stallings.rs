//! The meridian of the trefoil induces isomorphisms on lower central series
//! quotients over the trivial group, but not over Z/2, where the twisted
//! first homology of the target acquires 3-torsion.

use std::path::Path;

use lcsknot::homology::{stallings_check, H2Route};
use lcsknot::io::format::read_document;

pub fn run_example() -> lcsknot::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let map = read_document(&dir.join("meridian.map"))?;
    for (src, dst, expect) in [
        ("meridian.knot", "trefoil.knot", true),
        ("meridian_over_z2.knot", "trefoil_over_z2.knot", false),
    ] {
        let a = read_document(&dir.join(src))?.over_g()?;
        let b = read_document(&dir.join(dst))?.over_g()?;
        let words = map.map_words(&a.pi, &b.pi)?;
        let route = H2Route::DeclaredTrivial("circle and knot exterior".into());
        let rep = stallings_check(&a, &b, &words, route, &[2, 3])?;
        println!(
            "{src} -> {dst}: h1 {} vs {}, induced iso {}, pass {}",
            rep.h1_fingerprint.source, rep.h1_fingerprint.target, rep.h1_map.isomorphism, rep.pass
        );
        for (n, iso) in &rep.quotients {
            println!("    level {n}: isomorphism over G {}", iso.isomorphism);
        }
        assert_eq!(rep.pass, expect);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
