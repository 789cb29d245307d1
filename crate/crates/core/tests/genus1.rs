use num_bigint::{BigInt, BigUint};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use galrep::arith::is_prime_u64;
use galrep::frobenius::frobenius_pattern;
use galrep::genus1::{ap_via_bsgs, build_full_poly, build_projective_poly, EllipticCurveQ};
use galrep::modcurve::pgl2_cycle_types;
use galrep::qexp::delta_coeffs;

#[test]
fn projective_poly_is_precision_stable() {
    let e = EllipticCurveQ::x0_11();
    let a = build_projective_poly(&e, 11, 300).unwrap();
    let b = build_projective_poly(&e, 11, 364).unwrap();
    assert_eq!(a.record.poly, b.record.poly);
    assert_eq!(a.record.degree(), 12);
    assert!(a.consistency.pass, "{:?}", a.consistency.first_failure);
    assert_eq!(a.consistency.pmax, 200);
}

#[test]
fn full_poly_is_precision_stable() {
    let e = EllipticCurveQ::x0_11();
    let (a, ca) = build_full_poly(&e, 11, 1200).unwrap();
    let (b, _) = build_full_poly(&e, 11, 1264).unwrap();
    assert_eq!(a.poly, b.poly);
    assert_eq!(a.degree(), 120);
    assert!(ca.perfect_square && ca.matches_division_polynomial);
}

#[test]
fn patterns_lie_in_the_catalog() {
    let rec = build_projective_poly(&EllipticCurveQ::x0_11(), 11, 300).unwrap().record;
    let cat = pgl2_cycle_types(11);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = 0;
    while seen < 50 {
        let p: u64 = rng.gen_range(13..1_000_000);
        if !is_prime_u64(p) {
            continue;
        }
        let pat = frobenius_pattern(&rec, &BigUint::from(p)).unwrap();
        assert!(cat.contains(&pat), "p = {p}: {pat}");
        seen += 1;
    }
}

#[test]
fn tau_congruent_to_ap_mod_11() {
    let e = EllipticCurveQ::x0_11();
    let tau = delta_coeffs(201);
    for p in (2u64..=200).filter(|&p| is_prime_u64(p) && p != 11) {
        let ap = ap_via_bsgs(&e, &BigUint::from(p)).unwrap();
        let diff = tau.coeff(p as usize) - &ap;
        assert_eq!(diff % BigInt::from(11), BigInt::from(0), "p = {p}");
    }
}
