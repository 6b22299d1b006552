//! Exact-plus-numeric computation engine for noncommutative surfaces of
//! rotation.
//!
//! The crate is organized as an exact symbolic kernel (generator algebra with
//! normal ordering, harmonic basis, angular-momentum coupling coefficients)
//! sitting on top of an arbitrary-precision scalar ring, plus a numeric layer
//! (ladder representations, surface maps and stereographic projections,
//! tridiagonal spectra and mode recursions) that specializes the formal
//! parameters to concrete values.

pub mod scalars;

pub mod ncalg;

pub mod wigner;

pub mod harmonic;

pub mod repr;

pub mod maps;

pub mod spectra;

pub mod report;

pub mod suites;
