//! Noncommutative phase-space algebra and expectation values.

pub mod algebra;
pub mod expect;
pub mod ladder;
pub mod poly;
pub mod ring;

pub use algebra::{CommPoly, WeylMono, WeylPoly};
pub use expect::{
    classical_expectation, classical_expectation_symbolic, quantum_expectation, quantum_expectation_ladder, Adjoint,
    QuantumMoments, SymbolicExpectation, SYMBOLIC_DEGREE_CAP,
};
pub use ladder::{number_moment, number_moment_poly, to_ladder, LadderContext, LadderPoly, NumberPoly};
pub use poly::{Poly, Values, Var};
pub use ring::{Coeff, Gq};
