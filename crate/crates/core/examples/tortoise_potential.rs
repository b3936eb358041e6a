//! Tortoise coordinate and radial potential across the exterior region.

use knds::geometry::{Background, PhysicalParams};
use knds::radial::angular_eigenvalue;
use knds::separation::{End, FieldParams, HalfInteger, RadialCoefficients};

fn main() -> knds::Result<()> {
    let bg = Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?)?;
    let field = FieldParams::new(0.5, 0.3)?;
    let k = HalfInteger::from_twice(1)?;
    let lambda = angular_eigenvalue(&bg, &field, k, 1)?;
    let c = RadialCoefficients::new(&bg, &field, k, lambda)?;
    println!("λ = {lambda:.12}, φ_+ = {:.12}, φ_c = {:.12}", c.limits.phi_plus, c.limits.phi_c);
    for (ri, kappa) in c.map.surface_gravities() {
        println!("  root {ri:+.6}: surface gravity {kappa:+.6}");
    }
    println!("{:>10} {:>14} {:>14} {:>14} {:>14}", "y", "r", "V11", "V12", "V22");
    for y in [-1600.0, -400.0, -100.0, -10.0, 0.0, 10.0, 100.0, 400.0] {
        let pt = c.map.point_at(y)?;
        let v = c.parts_at(&pt).matrix();
        println!("{y:>10.1} {:>14.10} {:>14.6e} {:>14.10} {:>14.10}", c.map.r_of(&pt), v[0][1], v[0][0], v[1][1]);
    }
    let tail = c.remainder_l1(End::Cosmological, 50.0)?;
    println!("∫_50^∞ ‖V − φ_c‖ dy = {:.6e}", tail.value);
    Ok(())
}
