//! Certifies one mode on a non-extremal and on an extremal background and prints the tail diagnostics.

use knds::geometry::{critical_masses, Background, PhysicalParams};
use knds::radial::{certify_no_bound_state, CertifyOptions};
use knds::separation::{FieldParams, HalfInteger};

fn main() -> knds::Result<()> {
    let field = FieldParams::new(0.5, 0.3)?;
    let m_low = critical_masses(1.0, 1.0, 10.0).values.expect("within the spin bound").m_crit_minus;
    let backgrounds = [
        ("non-extremal", Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?)?),
        ("extremal", Background::new(PhysicalParams::new(m_low, 1.0, 10.0, 1.0, 0.0)?)?),
    ];
    let k = HalfInteger::from_twice(-1)?;
    for (name, bg) in &backgrounds {
        let cert = certify_no_bound_state(bg, &field, k, 2, 1.3, &CertifyOptions::default())?;
        println!("{name}: k = {k}, j = 2, λ = {:.10}, ω = 1.3 -> {:?}", cert.lambda, cert.verdict);
        for end in [&cert.inner, &cert.cosmological] {
            for s in &end.solutions {
                println!(
                    "  {:?} X0 = {:?}: Y = {:.0}, A = {:.6}, variation {:.1e}, frequency {:.6} (expected {:.6}), mass slope {:.4}, R² {:.6}",
                    s.end, s.x0, s.cutoff, s.amplitude, s.variation, s.frequency, s.predicted_frequency, s.mass_fit.slope, s.mass_fit.r2
                );
            }
        }
    }
    Ok(())
}
