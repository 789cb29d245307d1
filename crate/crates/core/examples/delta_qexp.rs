// q-expansions of the level-one cusp forms Δ_k, with Hecke and Deligne
// checks and a table of τ(p) modulo small primes.
//
//     cargo run --release --example delta_qexp

use galrep::qexp;

pub fn run(n: usize) -> Result<(), Box<dyn std::error::Error>> {
    for k in [12u32, 16, 20, 22] {
        let f = qexp::cusp_form_level1(k, n)?;
        println!(
            "Δ_{k}: a_2 = {}, a_3 = {}, multiplicative {}, Hecke recursion {}, Deligne bound {}",
            f.coeff(2),
            f.coeff(3),
            qexp::check_multiplicativity(&f).is_none(),
            qexp::check_hecke_recursion(&f).is_none(),
            qexp::check_deligne_bound(&f).is_none()
        );
    }
    let delta = qexp::cusp_form_level1(12, 50)?;
    for (p, t) in qexp::ap_mod_table(&delta, 691).into_iter().take(8) {
        // Ramanujan: τ(p) ≡ 1 + p^11 mod 691
        println!("τ({p}) ≡ {t} mod 691");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(2000)
}
