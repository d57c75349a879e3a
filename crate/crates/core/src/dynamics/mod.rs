//! Evolution of packet means and spreads under polynomial potentials.

pub mod matrix;
pub mod mc;
pub mod potential;
pub mod quadratic;
pub mod record;
pub mod scan;
pub mod symbolic;
pub mod taylor;

pub use matrix::matrix_oracle;
pub use mc::{mc_oracle, McConfig};
pub use potential::{PolynomialPotential, MAX_DEGREE};
pub use quadratic::{characteristic_time, quadratic_evolve, QuadraticSolution, Regime};
pub use record::{Method, TrajectoryPoint, TrajectoryRecord};
pub use scan::{classical_limit_scan, ScanPoint, ScanResult};
pub use taylor::{
    evolve_taylor, taylor_derivatives_classical, taylor_derivatives_quantum, DerivativeEngine, Engine,
    PacketDerivatives, TaylorConfig,
};
