#[path = "../examples/coset_kernel.rs"]
mod coset_kernel;
#[path = "../examples/nilpotent_quotient.rs"]
mod nilpotent_quotient;
#[path = "../examples/twisted_homology.rs"]
mod twisted_homology;
#[path = "../examples/stallings.rs"]
mod stallings;
#[path = "../examples/extendable_maps.rs"]
mod extendable_maps;
#[path = "../examples/indeterminacy.rs"]
mod indeterminacy;
#[path = "../examples/concordance.rs"]
mod concordance;
#[path = "../examples/satellite.rs"]
mod satellite;
#[path = "../examples/heisenberg.rs"]
mod heisenberg;

#[test]
fn coset_kernel_example_runs() {
    coset_kernel::run_example().expect("coset_kernel example should run");
}

#[test]
fn nilpotent_quotient_example_runs() {
    nilpotent_quotient::run_example().expect("nilpotent_quotient example should run");
}

#[test]
fn twisted_homology_example_runs() {
    twisted_homology::run_example().expect("twisted_homology example should run");
}

#[test]
fn stallings_example_runs() {
    stallings::run_example().expect("stallings example should run");
}

#[test]
fn extendable_maps_example_runs() {
    extendable_maps::run_example().expect("extendable_maps example should run");
}

#[test]
fn indeterminacy_example_runs() {
    indeterminacy::run_example().expect("indeterminacy example should run");
}

#[test]
fn concordance_example_runs() {
    concordance::run_example().expect("concordance example should run");
}

#[test]
fn satellite_example_runs() {
    satellite::run_example().expect("satellite example should run");
}

#[test]
fn heisenberg_example_runs() {
    heisenberg::run_example().expect("heisenberg example should run");
}
