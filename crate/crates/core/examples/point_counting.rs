// Traces of Frobenius of X₀(11) by baby-step/giant-step, compared with
// τ(p) mod 11.
//
//     cargo run --release --example point_counting [p]

use galrep::bigexpr::parse_big_uint;
use galrep::genus1::{ap_via_bsgs, EllipticCurveQ};
use galrep::qexp;
use num_bigint::BigUint;
use num_integer::Integer;

pub fn run(large: &str) -> Result<(), Box<dyn std::error::Error>> {
    let e = EllipticCurveQ::x0_11();
    let delta = qexp::cusp_form_level1(12, 60)?;
    for p in [2u64, 3, 5, 7, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
        let ap = ap_via_bsgs(&e, &BigUint::from(p))?;
        println!("p = {p:>2}: a_p = {ap:>3}, τ(p) mod 11 = {:>2}, a_p mod 11 = {:>2}",
            delta.coeff_mod(p as usize, 11),
            ap.mod_floor(&11.into()));
    }
    let p = parse_big_uint(large)?;
    let t = std::time::Instant::now();
    let ap = ap_via_bsgs(&e, &p)?;
    println!("p = {p}: a_p = {ap} ({:.1?})", t.elapsed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = std::env::args().nth(1).unwrap_or_else(|| "1000000000000000003".into());
    run(&p)
}
