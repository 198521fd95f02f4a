//! Exact spectral computation for the Jacobi operator of the link of the
//! Lawson–Osserman cone in S⁶.

pub mod numfield;
pub mod polyops;
pub mod exactla;
pub mod harmonic;
pub mod floatoracle;
pub mod golden;
pub mod jacobiop;
pub mod geometry;
pub mod decay;
pub mod suite;
