//! Satellites whose pattern curve is a meridian of the companion: the
//! amalgamated presentation, the collapse onto the companion, and the
//! extendable map obtained from it.

use std::path::Path;

use lcsknot::io::format::read_document;
use lcsknot::satellite::{meridian_satellite, satellite_pipeline};

pub fn run_example() -> lcsknot::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in ["satellite_trefoil_unknot.sat", "satellite_trefoil_trefoil.sat", "satellite_unknot_trefoil.sat"] {
        let doc = read_document(&dir.join(name))?;
        let j = doc.knot("companion")?;
        let spec = doc.satellite.clone().expect("satellite section");
        let input = meridian_satellite(&j, (spec.l_group, spec.l_mu, spec.l_lambda))?;
        let rep = satellite_pipeline(&input, 3)?;
        let pi = &rep.amalgam.knot.over.pi;
        println!("{name}: {} generators, relators {:?}", pi.ngens(),
            pi.relators.iter().map(|r| pi.render(r)).collect::<Vec<_>>());
        println!("    collapse kills relators {} up to level {}, meridian preserved {}",
            rep.collapse.relators_die, rep.collapse.verification_level, rep.collapse.meridian_preserved);
        println!("    characteristic map passes {}, shadow {:?}", rep.characteristic.candidate.passes(),
            rep.characteristic.shadow.verdict);
        assert!(rep.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lcsknot::Result<()> {
    run_example()
}
