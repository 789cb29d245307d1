// Cycle types of PGL₂(F_ℓ) acting on P¹(F_ℓ), their Chebotarev densities,
// and a comparison with the Frobenius patterns of a record.
//
//     cargo run --release --example pgl2_catalog

use std::collections::BTreeMap;

use galrep::arith::is_prime_u64;
use galrep::frobenius::frobenius_pattern;
use galrep::modcurve::pgl2_cycle_types;
use galrep::records;
use num_bigint::BigUint;

pub fn run(pmax: u64) -> Result<(), Box<dyn std::error::Error>> {
    let record = records::embedded("k16l29")?;
    let cat = pgl2_cycle_types(29);
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut total = 0;
    for p in (3..pmax).filter(|&p| is_prime_u64(p) && p != 29) {
        let Ok(pat) = frobenius_pattern(&record, &BigUint::from(p)) else { continue };
        let kind = cat.lookup(&pat).ok_or("pattern outside PGL2")?;
        *seen.entry(kind.to_string()).or_default() += 1;
        total += 1;
    }
    println!("{:<14} {:<18} {:>9} {:>9}", "class", "pattern", "density", "observed");
    for (kind, pat) in cat.entries() {
        let obs = seen.get(&kind.to_string()).copied().unwrap_or(0) as f64 / total as f64;
        println!("{:<14} {:<18} {:>9.4} {:>9.4}", kind.to_string(), pat.to_string(), kind.density(29), obs);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(20_000)
}
