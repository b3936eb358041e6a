//! The matrix weight of the scalar product and its powers.

use knds::geometry::{Background, PhysicalParams};
use knds::positivity::{eta_bound, norm_equivalence, omega_matrices};
use num_complex::Complex64;

fn main() -> knds::Result<()> {
    let bg = Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?)?;
    let eta = eta_bound(&bg)?;
    println!("sup α = {:.12} at r = {:.6}, θ = {:.6}; bound {:.12}", eta.eta_numeric, eta.r_star, eta.theta_star, eta.sqrt_h_rplus);

    let o = omega_matrices(eta.eta_numeric)?;
    let defect = (o.omega * o.omega - o.omega2).iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("Ω² diagonal: {:?}; ‖Ω·Ω − Ω²‖ = {defect:.1e}", (0..4).map(|i| o.omega2[(i, i)].re).collect::<Vec<_>>());

    let (rp, rc) = (bg.horizons.r_plus, bg.horizons.r_c);
    let psi = |r: f64, t: f64| {
        let env = ((r - rp) * (rc - r)).powi(2);
        let one = Complex64::new(env, 0.0);
        [one, one * t.cos(), one, one * 0.5]
    };
    let n = norm_equivalence(&bg, psi, 64)?;
    println!("⟨ψ|ψ⟩/(ψ|ψ) = {:.8} within [{:.8}, {:.8}]", n.ratio, n.lower, n.upper);
    Ok(())
}
