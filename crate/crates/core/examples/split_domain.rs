//! Half-line integrations with X₁(r₀) = 0 at several split points.

use knds::geometry::{Background, PhysicalParams};
use knds::radial::{angular_eigenvalue, split_domain_diagnostic, CertifyOptions};
use knds::separation::{FieldParams, HalfInteger};

fn main() -> knds::Result<()> {
    let bg = Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?)?;
    let field = FieldParams::new(0.5, 0.3)?;
    let k = HalfInteger::from_twice(3)?;
    let lambda = angular_eigenvalue(&bg, &field, k, 1)?;
    for r0 in [2.6, 3.5, 4.2, 5.5, 6.9] {
        let rep = split_domain_diagnostic(&bg, &field, k, lambda, -0.7, r0, &CertifyOptions::default())?;
        println!(
            "r0 = {r0}: {:?} (inner A = {:.5}, cosmological A = {:.5})",
            rep.verdict, rep.inner.amplitude, rep.cosmological.amplitude
        );
    }
    Ok(())
}
