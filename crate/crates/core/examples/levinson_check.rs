//! At ω = φ_c the tail system has no oscillation and solutions settle to constants.

use knds::geometry::{Background, PhysicalParams};
use knds::radial::{angular_eigenvalue, levinson_constant_check, CertifyOptions};
use knds::separation::{End, FieldParams, HalfInteger, RadialCoefficients};

fn main() -> knds::Result<()> {
    let bg = Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?)?;
    let field = FieldParams::new(0.5, 0.3)?;
    let k = HalfInteger::from_twice(1)?;
    let c = RadialCoefficients::new(&bg, &field, k, angular_eigenvalue(&bg, &field, k, 1)?)?;
    let rep = levinson_constant_check(&c, End::Cosmological, &CertifyOptions::default())?;
    println!("φ_c = {:.12}", c.limits.phi_c);
    for (y, t) in &rep.tail_l1 {
        println!("  ∫_{y}^∞ ‖V − φ_c‖ dy = {t:.3e}");
    }
    println!("cutoff {}, limits {:?}", rep.cutoff, rep.limits);
    println!("Gram determinant {:.6}, residual {:.2e}, passed {}", rep.gram_det, rep.residual, rep.passed);
    Ok(())
}
