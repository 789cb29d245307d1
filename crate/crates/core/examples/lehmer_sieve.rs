// Serre's congruence sieve and the τ ≡ 0 mod ℓ detectors for ℓ = 11, 31:
// checks the prime 982149821766199295999 and searches a window below it.
//
//     cargo run --release --example lehmer_sieve

use galrep::lehmer::{self, DetectorTable, SerreSieveSpec, CLAIMED_LEAST_PRIME};
use num_bigint::BigUint;

pub fn run(window: u128) -> Result<(), Box<dyn std::error::Error>> {
    let spec = SerreSieveSpec::standard();
    println!("{} residue classes modulo {}", spec.classes.len(), spec.modulus);

    let table = DetectorTable::builtin()?;
    let p = BigUint::from(CLAIMED_LEAST_PRIME);
    let c = lehmer::verify_candidate(&p, &[11, 31], &table)?;
    println!("p* = {p}: congruences {:?}, accepted = {}", c.conditions, c.accepted);

    let first = lehmer::search(0, 10u128.pow(16), &[31], &table)?;
    println!("least prime < 10^16 with only the ℓ = 31 filter: {:?}", first.found);

    let lo = CLAIMED_LEAST_PRIME - window;
    let r = lehmer::search(lo, CLAIMED_LEAST_PRIME + 1, &[11, 31], &table)?;
    println!(
        "least prime in [p* − {window}, p*] passing ℓ = 11, 31: {:?} ({} primes examined)",
        r.found, r.primes_examined
    );
    match lehmer::nonvanishing_bound(&r) {
        Ok(b) => println!("{}", b.statement),
        Err(e) => println!("no bound: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(10u128.pow(15))
}
