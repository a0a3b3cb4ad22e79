//! Exact and semiclassical spectral analysis of a collective spin-s coupled to
//! spin-polarized Markovian baths.
//!
//! The Liouvillian commutes with the charge superoperator `Q_z(ρ) = S_z ρ - ρ S_z`,
//! so it splits into tridiagonal blocks labelled by `q`. Each block has a second
//! representation as a second-order differential operator acting on polynomials
//! of degree `2s - q`, whose roots obey Bethe-like equations. For large `s` the
//! root distribution is governed by an algebraic curve, which yields spectral
//! edges, quantization conditions and eigenvalue densities in closed form.

pub mod bethe;
pub mod coherent;
pub mod ed;
pub mod error;
pub mod io;
pub mod model;
pub mod poly;
pub mod semiclassics;
pub mod steady;

pub use error::{Error, Result};
pub use model::{ModelParams, Sector};
pub use num_complex::Complex64 as C64;
