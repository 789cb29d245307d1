// Runs the verification pipeline on the four embedded polynomials:
// irreducibility, Frobenius patterns against PGL₂ and against the
// q-expansion, discriminant, Serre weight and oddness.
//
//     cargo run --release --example verify_records

use galrep::galverify::{verify_record, VerifyOptions};
use galrep::records;

pub fn run(pmax: u64) -> Result<(), Box<dyn std::error::Error>> {
    let opts = VerifyOptions {
        consistency_pmax: pmax,
        ..VerifyOptions::default()
    };
    for record in records::embedded_all() {
        let r = verify_record(&record, &opts)?;
        let disc = r.discriminant.as_ref().expect("computed when not failing fast");
        println!(
            "{}  {}  field v_ℓ = {:?}  weight {:?}  real roots {:?}  {:?}",
            r.record,
            if r.pass { "PASS" } else { "FAIL" },
            disc.field_valuation(r.ell),
            r.serre_weight,
            r.real_roots,
            r.oddness.as_ref().map(|o| o.verdict),
        );
        for f in &r.failures {
            println!("    failure: {f}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(500)
}
