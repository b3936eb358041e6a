//! A small parallel sweep over (k, j, ω).

use knds::geometry::{Background, PhysicalParams};
use knds::radial::{certify_sweep, CertifyOptions};
use knds::separation::{FieldParams, HalfInteger};

fn main() -> knds::Result<()> {
    let bg = Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?)?;
    let field = FieldParams::new(0.5, 0.3)?;
    let ks = [HalfInteger::from_twice(-1)?, HalfInteger::from_twice(1)?];
    let omegas: Vec<f64> = (0..=10).map(|i| -5.0 + i as f64).collect();
    let sweep = certify_sweep(&bg, &field, &ks, &[1, 2], &omegas, &CertifyOptions::default())?;
    for c in &sweep.certificates {
        println!("k = {:>4}, j = {}, ω = {:+.1}: {:?}", c.k.to_string(), c.j, c.omega, c.verdict);
    }
    println!("{} of {} modes certified", sweep.certified, sweep.total);
    Ok(())
}
