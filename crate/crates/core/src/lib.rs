pub mod arith;
pub mod bigexpr;
pub mod cli;
pub mod frobenius;
pub mod galverify;
pub mod genus1;
pub mod lehmer;
pub mod linalg;
pub mod modcurve;
pub mod modsym;
pub mod qexp;
pub mod records;
pub mod report;
