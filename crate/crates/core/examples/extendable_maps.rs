//! Candidate maps between relative quotients of two presentations of the
//! trefoil group: an explicit isomorphism, the canonical map, a search, and
//! projection down the tower.

use std::path::Path;

use lcsknot::invariants::{canonical_tau, search_extendable, tower_project, same_candidate, ExtendableMapCandidate};
use lcsknot::io::format::read_document;

pub fn run_example() -> lcsknot::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let k = read_document(&dir.join("trefoil.knot"))?.knot("trefoil")?;
    let j = read_document(&dir.join("trefoil_tietze.knot"))?.knot("torus")?;
    let words = read_document(&dir.join("trefoil_to_tietze.map"))?.map_words(&k.over.pi, &j.over.pi)?;

    for n in 2..=4 {
        let c = ExtendableMapCandidate::from_words(&k, &j, j.quotient(n)?, &words);
        println!("level {n}: trefoil -> torus form passes {}", c.passes());
        assert!(c.passes());
    }

    let s3 = read_document(&dir.join("trefoil_over_s3.knot"))?.knot("trefoil-s3")?;
    let canon = canonical_tau(&s3, 3)?;
    let down = tower_project(&canon)?;
    println!("canonical map at level 3 projects to the canonical map at level 2: {}",
        same_candidate(&down, &canonical_tau(&s3, 2)?));

    let found = search_extendable(&s3, &s3, 2, 0)?;
    println!("search over S3 at level 2, bound 0: {} candidates from {} tuples, exhaustive {}",
        found.candidates.len(), found.examined, found.exhaustive);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
