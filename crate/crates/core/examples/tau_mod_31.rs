// τ(p) mod 31 for 1001-digit primes, read off the factorization pattern of
// the (12, 31) polynomial modulo p.
//
//     cargo run --release --example tau_mod_31

use galrep::bigexpr::parse_big_uint;
use galrep::frobenius::tau_mod_ell;
use galrep::records;

pub fn run(exprs: &[&str]) -> Result<(), Box<dyn std::error::Error>> {
    let record = records::embedded("k12l31")?;
    for e in exprs {
        let p = parse_big_uint(e)?;
        let t = std::time::Instant::now();
        let r = tau_mod_ell(&record, &p)?;
        println!(
            "p = {e:<16} pattern {:<10} {:<12} τ(p) mod 31 ∈ {}  ({:.1?})",
            r.pattern,
            r.class,
            r.candidates,
            t.elapsed()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        run(&["10^1000+4351", "10^1000+10401", "10^1000+11979", "10^1000+17557"])
    } else {
        run(&args.iter().map(|s| s.as_str()).collect::<Vec<_>>())
    }
}
