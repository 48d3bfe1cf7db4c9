//! Computational workbench for U_q(sl(n+1)), its real forms, the quantum
//! Heisenberg algebra, quantum moment maps and the induced *-representations
//! of U_q(su(1,1)) and U_q(su(2,1)).
//!
//! Exact work happens over [`QCoeff`], numeric work over `Complex64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod degen;
pub mod error;
pub mod funcx;
pub mod heis;
pub mod moment;
pub mod qfun;
pub mod series;
pub mod sparse;
pub mod uq;

pub use coeffs::{EvalPoint, Field, QCoeff, Tolerance};
pub use degen::{LatticeChar, Su21Case};
pub use error::{QorbitError, Result};
pub use funcx::{FuncXElement, Fx1, FxLattice, XFunction};
pub use heis::{HeisElement, Letter, WModule, WVector};
pub use moment::{MomentImage, MomentVariant};
pub use num_complex::Complex64;
pub use qfun::{Kernel, PochOrder, QSeriesContext, RadialMeasure};
pub use series::{PiVector, RepParams, SeriesKind, SeriesLabel, SpectrumKind};
pub use sparse::SparseOp;
pub use uq::{AlgebraElement, Gen, StarForm, TensorElement};
