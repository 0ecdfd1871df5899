//! Exact moment sequences of complex polynomials, root-test estimates of
//! `limsup |M_p|^{1/p}`, and upper bounds obtained by deforming the path of
//! integration.

// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod contour;
pub mod error;
pub mod kappa;
pub mod moments;
pub mod pathopt;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
