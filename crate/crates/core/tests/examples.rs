// Each example exposes `run`; these drive them with small parameters.

mod delta_qexp {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/delta_qexp.rs"));
}
mod discriminant {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/discriminant.rs"));
}
mod genus1_x0_11 {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/genus1_x0_11.rs"));
}
mod modular_symbols {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/modular_symbols.rs"));
}
mod pgl2_catalog {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pgl2_catalog.rs"));
}
mod point_counting {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/point_counting.rs"));
}
mod tau_mod_31 {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tau_mod_31.rs"));
}
mod verify_records {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_records.rs"));
}

#[test]
fn delta_qexp_runs() {
    delta_qexp::run(500).unwrap();
}

#[test]
fn discriminant_runs() {
    discriminant::run("k12l31", 10_000).unwrap();
}

#[test]
fn genus1_projective_runs() {
    genus1_x0_11::run(false).unwrap();
}

#[test]
fn modular_symbols_runs() {
    modular_symbols::run(7).unwrap();
}

#[test]
fn pgl2_catalog_runs() {
    pgl2_catalog::run(200).unwrap();
}

#[test]
fn point_counting_runs() {
    point_counting::run("10^12+39").unwrap();
}

#[test]
fn tau_mod_31_small_prime() {
    tau_mod_31::run(&["1000003"]).unwrap();
}

#[test]
fn verify_records_runs() {
    verify_records::run(100).unwrap();
}
