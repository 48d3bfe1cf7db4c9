//! Exact coefficients in Q(q)(c, d, x_0, x_1, ...) and the numeric backend.

mod field;
mod parse;
pub mod poly;
mod qcoeff;

pub use field::{Field, Tolerance};
pub use poly::{var_name, var_x, Poly, VAR_C, VAR_D, VAR_Q};
pub use qcoeff::{ArithOp, EvalPoint, QCoeff};
