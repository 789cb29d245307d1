//! Exact arithmetic: integer polynomials, prime fields, discriminants,
//! factorization patterns, real-root counts and primality.

pub mod ddf;
pub mod disc;
pub mod int_poly;
pub mod modp;
pub mod primality;
pub mod sturm;

pub use ddf::{ddf_partial, ddf_pattern, is_good_reduction, DegreePattern, PartialPattern};
pub use disc::{disc_sign, poly_disc, resultant};
pub use int_poly::IntPolynomial;
pub use primality::{is_prime, is_prime_redundant, is_prime_u64, jacobi, trial_factor, valuation};
pub use sturm::sturm_real_root_count;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial has no discriminant")]
    ConstantPolynomial,
    #[error("leading coefficient vanishes modulo {0}")]
    LeadingCoefficientVanishes(String),
    #[error("reduction modulo {0} is not squarefree")]
    NotSquarefree(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(String),
}
