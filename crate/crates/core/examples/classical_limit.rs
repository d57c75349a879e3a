//! Quantum corrections shrink as both spreads grow: scan the spread scale s
//! and fit the decay of the leading deviation.

use mepacket::dynamics::scan::log_grid;
use mepacket::dynamics::{classical_limit_scan, PolynomialPotential, TaylorConfig};
use mepacket::Dof;

fn main() -> mepacket::Result<()> {
    let base = Dof::new(0.0, 0.0, 1.0, 1.0);
    let cubic = PolynomialPotential::new(1.0, vec![0.0, 0.0, 0.0, 0.02])?;
    let scan = classical_limit_scan(&base, 1.0, &cubic, 0.5, &log_grid(1.0, 32.0, 11), &TaylorConfig::default())?;
    println!("{:>8} {:>10} {:>12}", "s", "nu", "deviation");
    for p in &scan.points {
        println!("{:>8.3} {:>10.2} {:>12.4e}", p.s, p.nu, p.leading_deviation());
    }
    println!("fitted exponent {:.3}", scan.fitted_exponent().unwrap_or(f64::NAN));
    Ok(())
}
