//! Binary field towers GF(2^k) < GF(2^{nk}) < GF(2^{2nk}) and the
//! four-valued cross-correlation of m-sequences of lengths 2^{2nk}-1 and
//! 2^{nk}-1 under the decimation d = (2^{nk}+1)/(2^k+1), n odd, k > 1.
//!
//! The crate keeps two independent computation routes wherever a quantity
//! matters: correlations are measured from actual sequences and re-derived
//! from exponential sums; zero counts come from brute force and from closed
//! forms. `expsum::verify_distribution` ties the whole chain together.

pub mod affine;
pub mod bits;
pub mod bpoly;
pub mod cli;
pub mod error;
pub mod expsum;
pub mod field;
pub mod linzero;
pub mod seq;

pub use error::{Error, Result};
pub use field::{Elem, Field, TowerParams};
pub use seq::{Convention, Spectrum};
