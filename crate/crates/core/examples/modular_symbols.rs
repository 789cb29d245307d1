// Genus and Jacobian dimensions of the intermediate modular curves, and
// the Δ_k eigensystem inside mod-ℓ modular symbols with character ω^{k−2}.
//
//     cargo run --release --example modular_symbols

use galrep::{modcurve, modsym};

pub fn run(pmax: u64) -> Result<(), Box<dyn std::error::Error>> {
    for (k, ell) in [(12u64, 31u64), (16, 29), (20, 31), (22, 31)] {
        let h = modcurve::gamma_h(k, ell)?;
        let rep = modsym::eigensystem_check(k, ell, pmax)?;
        println!(
            "(k, ℓ) = ({k}, {ell}): gcd {:>2}, dim J1 {}, dim J_H {}, Σ cuspidal dims {}, joint kernel {} (pmax {pmax})",
            h.gcd,
            modcurve::genus_x1(ell)?,
            modcurve::dim_j_gamma_h(k, ell)?,
            modsym::family_cuspidal_dim(k, ell)?,
            rep.joint_kernel_dim
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(20)
}
