//! Weight functions of the conserved scalar product and the operators `Ω^{±2}`, `Ω^{±1}`.
//!
//! The reduced scalar product carries the matrix weight `𝕀₄ + α(r, θ) BC`
//! where `α = β(r) γ(θ)`. Because `BC` squares to the identity its eigenvalues
//! are `±1` and the weight is positive as long as `sup α < 1`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Background;
use crate::quadrature::{gauss_legendre, scaled_rule};

type C4 = Matrix4<Complex64>;

/// `α`, `β`, `γ`, `h` for one background.
#[derive(Debug, Clone)]
pub struct WeightFunctions {
    bg: Background,
}

impl WeightFunctions {
    pub fn new(bg: &Background) -> Self {
        Self { bg: *bg }
    }

    pub fn background(&self) -> &Background {
        &self.bg
    }

    /// `√Δ_r |a| / (r² + a²)`.
    pub fn beta(&self, r: f64) -> f64 {
        let a2 = self.bg.params.a2();
        self.bg.delta_r(r).max(0.0).sqrt() * a2.sqrt() / (r * r + a2)
    }

    /// `sin θ / √Δ_θ`, maximal and equal to one at the equator.
    pub fn gamma(&self, theta: f64) -> f64 {
        theta.sin() / self.bg.delta_theta(theta).sqrt()
    }

    pub fn alpha(&self, r: f64, theta: f64) -> f64 {
        self.beta(r) * self.gamma(theta)
    }

    /// `(a²/l²)(l² − r²)/(r² + a²)`, an upper bound for `β²` between the horizons.
    pub fn h(&self, r: f64) -> f64 {
        let p = &self.bg.params;
        let a2 = p.a2();
        p.aol2() * (p.l * p.l - r * r) / (r * r + a2)
    }
}

/// Numerical supremum of `α` against the analytic bound `√h(r_+)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaBound {
    pub eta_numeric: f64,
    pub sqrt_h_rplus: f64,
    pub r_star: f64,
    pub theta_star: f64,
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol * (1.0 + lo.abs().max(hi.abs())) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Radial grid with half the nodes geometrically clustered at `r_+`.
fn eta_radial_grid(r_plus: f64, r_c: f64, n: usize) -> Vec<f64> {
    let w = r_c - r_plus;
    let half = n / 2;
    let mut r: Vec<f64> = (0..half)
        .map(|i| r_plus + w * 0.5 * 10f64.powf(-10.0 * (1.0 - i as f64 / half as f64)))
        .collect();
    let rest = n - half;
    r.extend((0..rest).map(|i| r_plus + w * (0.5 + 0.5 * i as f64 / rest as f64)));
    r
}

/// Maximizes `α` over a `512 × 512` grid and polishes the maximizer.
///
/// Fails if the maximum exceeds `√h(r_+)`, which the horizon structure rules out.
pub fn eta_bound(bg: &Background) -> Result<EtaBound> {
    let w = WeightFunctions::new(bg);
    let (rp, rc) = (bg.horizons.r_plus, bg.horizons.r_c);
    let sqrt_h_rplus = w.h(rp).max(0.0).sqrt();
    if sqrt_h_rplus >= 1.0 {
        return Err(Error::BoundViolated(format!("h(r_+) = {} is not below one", w.h(rp))));
    }
    let n = 512;
    let rs = eta_radial_grid(rp, rc, n);
    let ths: Vec<f64> = (0..n).map(|j| std::f64::consts::PI * (j as f64 + 0.5) / n as f64).collect();
    let (mut best, mut bi, mut bj) = (-1.0, 0, 0);
    for (i, &r) in rs.iter().enumerate() {
        let b = w.beta(r);
        for (j, &t) in ths.iter().enumerate() {
            let v = b * w.gamma(t);
            if v > best {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }
    let (mut r_star, mut theta_star) = (rs[bi], ths[bj]);
    let mut eta = best;
    if best > 0.0 {
        let r_lo = if bi == 0 { rp } else { rs[bi - 1] };
        let r_hi = if bi + 1 == n { rc } else { rs[bi + 1] };
        let t_lo = if bj == 0 { 0.0 } else { ths[bj - 1] };
        let t_hi = if bj + 1 == n { std::f64::consts::PI } else { ths[bj + 1] };
        // α is a product, so the two directions decouple.
        let (t, _) = golden_max(|t| w.gamma(t), t_lo, t_hi, 1e-12);
        let (r, _) = golden_max(|r| w.beta(r), r_lo, r_hi, 1e-12);
        r_star = r;
        theta_star = t;
        eta = eta.max(w.alpha(r, t));
    }
    if eta > sqrt_h_rplus + 1e-12 {
        return Err(Error::BoundViolated(format!("sup α = {eta} exceeds √h(r_+) = {sqrt_h_rplus}")));
    }
    Ok(EtaBound { eta_numeric: eta, sqrt_h_rplus, r_star, theta_star })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The constant matrix `B`.
pub fn matrix_b() -> C4 {
    let (o, i) = (c(0.0, 0.0), c(0.0, 1.0));
    #[rustfmt::skip]
    let m = Matrix4::new(
        o, o, -i, o,
        o, o, o, i,
        i, o, o, o,
        o, -i, o, o,
    );
    m
}

/// The constant matrix `C`.
pub fn matrix_c() -> C4 {
    let (o, i) = (c(0.0, 0.0), c(0.0, 1.0));
    #[rustfmt::skip]
    let m = Matrix4::new(
        o, o, o, i,
        o, o, -i, o,
        o, i, o, o,
        -i, o, o, o,
    );
    m
}

/// `B`, `C` and the spectral projectors `P_± = (𝕀₄ ± BC)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrices {
    pub b: C4,
    pub c: C4,
    pub bc: C4,
    pub p_plus: C4,
    pub p_minus: C4,
}

impl Default for WeightMatrices {
    fn default() -> Self {
        Self::new()
    }
}

impl WeightMatrices {
    pub fn new() -> Self {
        let b = matrix_b();
        let cm = matrix_c();
        let bc = b * cm;
        let id = C4::identity();
        Self { b, c: cm, bc, p_plus: (id + bc) * c(0.5, 0.0), p_minus: (id - bc) * c(0.5, 0.0) }
    }

    /// `Ω^s = (1 + α)^{s/2} P_+ + (1 − α)^{s/2} P_−`.
    pub fn omega_power(&self, alpha: f64, s: f64) -> Result<C4> {
        check_alpha(alpha)?;
        Ok(self.p_plus * c((1.0 + alpha).powf(0.5 * s), 0.0) + self.p_minus * c((1.0 - alpha).powf(0.5 * s), 0.0))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("α = {alpha} outside [0, 1); the weight is not positive")));
    }
    Ok(())
}

/// `Ω²`, `Ω⁻²`, `Ω` and `Ω⁻¹` at one value of `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaMatrices {
    pub omega2: C4,
    pub omega_m2: C4,
    pub omega: C4,
    pub omega_m1: C4,
}

/// `Ω² = 𝕀₄ + αBC` and `Ω⁻² = (𝕀₄ − αBC)/(1 − α²)` in closed form, the square
/// roots by spectral calculus.
pub fn omega_matrices(alpha: f64) -> Result<OmegaMatrices> {
    check_alpha(alpha)?;
    let w = WeightMatrices::new();
    let id = C4::identity();
    let a = c(alpha, 0.0);
    Ok(OmegaMatrices {
        omega2: id + w.bc * a,
        omega_m2: (id - w.bc * a) * c(1.0 / (1.0 - alpha * alpha), 0.0),
        omega: w.omega_power(alpha, 1.0)?,
        omega_m1: w.omega_power(alpha, -1.0)?,
    })
}

/// Both norms of one spinor field and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEquivalence {
    /// `(ψ|ψ)` with the flat weight.
    pub plain: f64,
    /// `⟨ψ|ψ⟩` with the `Ω²` weight.
    pub weighted: f64,
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
}

impl NormEquivalence {
    pub fn holds(&self) -> bool {
        self.ratio >= self.lower && self.ratio <= self.upper
    }
}

/// Compares the two quadratic forms of `ψ(r, θ)` by tensor Gauss-Legendre
/// quadrature with `nodes` points per direction.
///
/// The azimuthal integral is a common factor and is dropped.
pub fn norm_equivalence<F>(bg: &Background, psi: F, nodes: usize) -> Result<NormEquivalence>
where
    F: Fn(f64, f64) -> [Complex64; 4],
{
    let eta = eta_bound(bg)?.eta_numeric;
    let w = WeightFunctions::new(bg);
    let wm = WeightMatrices::new();
    let (x, wt) = gauss_legendre(nodes);
    let (rs, wr) = scaled_rule(&x, &wt, bg.horizons.r_plus, bg.horizons.r_c);
    let (ts, wtheta) = scaled_rule(&x, &wt, 0.0, std::f64::consts::PI);
    let a2 = bg.params.a2();
    let (mut plain, mut weighted) = (0.0, 0.0);
    for (&r, &wri) in rs.iter().zip(&wr) {
        let mu_r = (r * r + a2) / bg.delta_r(r);
        for (&t, &wti) in ts.iter().zip(&wtheta) {
            let dmu = wri * wti * mu_r * w.gamma(t);
            let p = nalgebra::Vector4::from(psi(r, t));
            let om = C4::identity() + wm.bc * c(w.alpha(r, t), 0.0);
            plain += dmu * p.norm_squared();
            weighted += dmu * (p.adjoint() * om * p)[(0, 0)].re;
        }
    }
    if !(plain.is_finite() && weighted.is_finite()) || plain <= 0.0 {
        return Err(Error::NoConvergence { what: "norm quadrature".into(), last: vec![plain, weighted] });
    }
    Ok(NormEquivalence { plain, weighted, ratio: weighted / plain, lower: 1.0 - eta, upper: 1.0 + eta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bc_is_the_real_swap_matrix() {
        let bc = WeightMatrices::new().bc;
        let expect = [[0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, -1.0, 0.0]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(bc[(i, j)], c(expect[i][j], 0.0));
            }
        }
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, _) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-9);
    }
}
