//! Exact-arithmetic geometry of blow-ups of the projective plane.
//!
//! The crate models divisor classes on the blow-up of P^2 at `r` points and
//! computes with them over exact rationals: the intersection pairing and its
//! standard consequences ([`lattice`]), generators and membership tests for
//! nef and effective cones of special point configurations ([`cones`]),
//! multipoint Seshadri constants with verifiable certificates ([`seshadri`]),
//! and ideals of fat point subschemes of the plane with symbolic-power
//! containment checks ([`fatpoints`]).
//!
//! Everything is exact: rationals are arbitrary-precision fractions,
//! comparisons against square roots are done by squaring, and linear algebra
//! over Q or F_p is fraction-free or modular. No floating point is used
//! anywhere in the math.

pub mod cli;
pub mod cones;
pub mod fatpoints;
pub mod lattice;
pub mod rat;
pub mod seshadri;

/// Command-line entry point; returns the process exit code.
pub fn run() -> i32 {
    cli::run()
}
