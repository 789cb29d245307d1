// Discriminant of the (16, 29) number field: small primes by trial
// division, round-2 local indices, and the integrality certificate for the
// unfactored square cofactor.
//
//     cargo run --release --example discriminant [k16l29]

use galrep::galverify::field_discriminant;
use galrep::records;

pub fn run(id: &str, trial_bound: u64) -> Result<(), Box<dyn std::error::Error>> {
    let record = records::embedded(id)?;
    let d = field_discriminant(&record.poly, trial_bound)?;
    println!("{id}: disc(P) has {} digits, negative = {}", d.poly_disc_digits, d.poly_disc_negative);
    for l in &d.local {
        println!(
            "  q = {:<6} v_q(disc P) = {:<3} v_q(disc K) = {:<3} index exponent {}",
            l.q, l.poly_valuation, l.field_valuation, l.index_exponent
        );
    }
    let small: Vec<String> = d.small_primes.iter().map(|(q, e)| format!("{q}^{e}")).collect();
    println!("  small primes in disc(P): {}", small.join(" "));
    if let Some(c) = &d.cofactor {
        println!(
            "  square cofactor B: {} digits, pieces {}, integrality test passed = {}",
            c.digits,
            c.parts.len(),
            c.passed
        );
    }
    println!(
        "  B² square = {}, no prime < {} divides B = {}, certified = {}",
        d.cofactor_is_square, d.trial_bound, d.cofactor_small_factor_free, d.certified
    );
    println!("  unramified outside {}: {}", record.ell, d.unramified_outside(record.ell));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "k16l29".into());
    run(&id, 1_000_000)
}
