//! Polynomials, rational functions, quasi-exponentials and differential
//! operators over a generic scalar field.

mod diffop;
mod matrat;
mod poly;
mod quasi;
mod ratfun;
mod reconstruct;

pub use diffop::{rdet_first_order, DiffOp, OpCoeff};
pub use matrat::{matpoly_eval, matpoly_taylor_at, MatRatFun};
pub use poly::{series_div, Poly};
pub use quasi::{poly_det, wronskian, wronskian_matrix, QuasiExp, QuasiRat, QuasiRatVec};
pub use ratfun::RatFun;
pub use reconstruct::rational_reconstruct;
