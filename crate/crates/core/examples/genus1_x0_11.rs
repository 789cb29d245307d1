// The degree-12 and degree-120 polynomials of Δ mod 11, built from the
// complex 11-torsion of X₀(11): AGM periods, ℘ on the torsion grid, line
// sums, integer recognition and validation.
//
//     cargo run --release --example genus1_x0_11 [-- --full]

use galrep::genus1::{self, agm_periods, eisenstein_invariants, EllipticCurveQ, WeierstrassP};

pub fn run(full: bool) -> Result<(), Box<dyn std::error::Error>> {
    let e = EllipticCurveQ::x0_11();
    let lat = agm_periods(&e, 300)?;
    println!("ω1 = {:.20}", lat.w1.re.to_f64());
    println!("τ  = {:.15} + {:.15}i", lat.tau.re.to_f64(), lat.tau.im.to_f64());
    let (g2, g3) = eisenstein_invariants(&lat);
    println!("g2 = {:.12} (c4/12 = {:.12}), g3 = {:.12} (c6/216 = {:.12})",
        g2.re.to_f64(), 496.0 / 12.0, g3.re.to_f64(), 20008.0 / 216.0);

    let wp = WeierstrassP::for_curve(&e, 300)?;
    let grid = genus1::torsion_x_table(&e, &wp, 11)?;
    println!(
        "torsion grid: {} distinct x-values, worst relative residual in f11: 2^{:.0}",
        grid.distinct_count(),
        grid.division_residual_log2(&e)
    );

    let (b, bits) = genus1::with_retries(300, |b| genus1::build_projective_poly(&e, 11, b))?;
    println!("projective polynomial at {bits} bits (consistent with τ mod 11 to p < 200: {}):", b.consistency.pass);
    println!("  {}", b.record.poly);

    if full {
        let ((record, check), bits) = genus1::with_retries(300, |b| genus1::build_full_poly(&e, 11, b))?;
        println!(
            "full polynomial in X = 11x: degree {}, recognized at {bits} bits, square of 11^59·f11(X/11): {}",
            record.degree(),
            check.perfect_square && check.matches_division_polynomial
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(std::env::args().any(|a| a == "--full"))
}
