//! Classifies a few parameter sets and prints horizons, critical masses and the weight bound.

use knds::geometry::{admissibility, critical_masses, jacobian_det, Background, PhysicalParams};
use knds::positivity::eta_bound;

fn main() -> knds::Result<()> {
    let from_roots = PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?;
    let m_low = critical_masses(1.0, 1.0, 10.0).values.expect("within the spin bound").m_crit_minus;
    let cases = [
        ("roots (7, 2.5, 2.2), l = 10", from_roots),
        ("lower critical mass", PhysicalParams::new(m_low, 1.0, 10.0, 1.0, 0.0)?),
        ("too light", PhysicalParams::new(0.5, 1.0, 10.0, 1.0, 0.0)?),
        ("too heavy", PhysicalParams::new(5.0, 1.0, 10.0, 1.0, 0.0)?),
    ];
    for (name, p) in cases {
        let adm = admissibility(&p);
        println!("{name}: m = {:.6}, a = {:.4}, z² = {:.4} -> {}", p.m, p.a, p.z2(), adm.classification.label());
        if let Some(v) = adm.critical.values {
            println!("  m_crit- = {:.10}, m_crit+ = {:.10}", v.m_crit_minus, v.m_crit_plus);
        }
        if !adm.classification.is_black_hole() {
            continue;
        }
        let bg = Background::new(p)?;
        let h = bg.horizons;
        println!("  r_- = {:.10}, r_+ = {:.10}, r_c = {:.10}", h.r_minus, h.r_plus, h.r_c);
        println!("  Jacobian of the root map: {:.6e}", jacobian_det(h.r_c, h.r_plus, h.r_minus, p.l));
        let eta = eta_bound(&bg)?;
        println!("  sup α = {:.10} <= √h(r_+) = {:.10}", eta.eta_numeric, eta.sqrt_h_rplus);
    }
    Ok(())
}
