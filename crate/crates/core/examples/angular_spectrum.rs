//! Angular eigenvalues from both discretizations, and one sampled eigenfunction.

use knds::angular::{angular_eigenfunction, solve_angular, AngularMethod, AngularProblem};
use knds::geometry::{Background, PhysicalParams};
use knds::separation::{FieldParams, HalfInteger};

fn main() -> knds::Result<()> {
    let bg = Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0)?)?;
    let field = FieldParams::new(0.5, 0.3)?;
    for twice in [-3, -1, 1, 3] {
        let k = HalfInteger::from_twice(twice)?;
        let p = AngularProblem::from_background(&bg, &field, k)?;
        let g = solve_angular(&p, 6, AngularMethod::Galerkin)?;
        let f = solve_angular(&p, 6, AngularMethod::FiniteDifference)?;
        println!("k = {k} (Galerkin n = {}, finite differences N = {})", g.grid_size, f.grid_size);
        for (a, b) in g.eigenvalues.iter().zip(&f.eigenvalues) {
            println!("  j = {:>2}: λ = {:>20.14}  |Δ| = {:.1e}", a.j, a.lambda, (a.lambda - b.lambda).abs());
        }
    }

    let p = AngularProblem::from_background(&bg, &field, HalfInteger::from_twice(1)?)?;
    let grid: Vec<f64> = (1..8).map(|i| std::f64::consts::PI * i as f64 / 8.0).collect();
    let ef = angular_eigenfunction(&p, 1, &grid)?;
    println!("eigenfunction j = 1, λ = {:.12}, residual {:.1e}", ef.lambda, ef.residual);
    for (t, s) in ef.theta.iter().zip(&ef.s) {
        println!("  θ = {t:.4}: S₁ = {:+.8}, S₂ = {:+.8}i", s[0].re, s[1].im);
    }
    Ok(())
}
