//! Spectrum of the angular operator `𝕌_k` on `(0, π)`.
//!
//! Writing the eigenfunction as `S = (u, i v)` with `u, v` real, and using
//! `ũ = √(sin θ) u`, `ṽ = √(sin θ) v` together with `dx = dθ/√Δ_θ`, the
//! eigenvalue problem becomes the real symmetric system
//!
//! ```text
//! −ṽ_x − B ṽ − μa cosθ ũ = λ ũ
//!  ũ_x − B ũ + μa cosθ ṽ = λ ṽ,      B = (Ξk − q_m e cosθ)/(√Δ_θ sinθ)
//! ```
//!
//! with inner product `∫ (ũ² + ṽ²) dx`. Two independent discretizations are
//! provided: staggered finite differences in `x` and a Galerkin method with
//! Jacobi-weighted polynomials that carry the exact endpoint exponents.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Background;
use crate::quadrature::{gauss_legendre, scaled_rule};
use crate::separation::{FieldParams, HalfInteger};

/// Upper bound `7 − 4√3` on `a²/l²` for a three-horizon background.
pub fn aol2_max() -> f64 {
    7.0 - 4.0 * 3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularProblem {
    pub k: HalfInteger,
    /// `μ a`
    pub mu_a: f64,
    /// `Ξ = 1 + a²/l²`
    pub xi: f64,
    /// `a²/l²`
    pub aol2: f64,
    /// `q_m e`
    pub qme: f64,
}

impl AngularProblem {
    pub fn new(k: HalfInteger, mu_a: f64, aol2: f64, qme: f64) -> Result<Self> {
        if !(0.0..=aol2_max() * (1.0 + 1e-12)).contains(&aol2) {
            return Err(Error::Precondition(format!("a²/l² = {aol2} outside [0, 7 − 4√3]")));
        }
        if !mu_a.is_finite() || !qme.is_finite() {
            return Err(Error::Precondition("non-finite angular coefficient".into()));
        }
        Ok(Self { k, mu_a, xi: 1.0 + aol2, aol2, qme })
    }

    pub fn from_background(bg: &Background, field: &FieldParams, k: HalfInteger) -> Result<Self> {
        let p = bg.params;
        Self::new(k, field.mu * p.a, p.aol2(), p.q_m * field.e)
    }

    /// Effective angular momentum at `θ = 0`: `B ≈ κ₀/x`.
    pub fn kappa0(&self) -> f64 {
        self.k.value() - self.qme / self.xi
    }

    /// Effective angular momentum at `θ = π`: `B ≈ κ_π/(X − x)`.
    pub fn kappa_pi(&self) -> f64 {
        self.k.value() + self.qme / self.xi
    }

    pub fn quantized(&self) -> bool {
        let r = self.qme / self.xi;
        (r - r.round()).abs() <= 1e-12
    }

    fn delta_theta(&self, theta: f64) -> f64 {
        let c = theta.cos();
        1.0 + self.aol2 * c * c
    }

    /// `b_k(θ) = (Ξk − q_m e cosθ)/(Δ_θ sinθ)`.
    fn b(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        (self.xi * self.k.value() - self.qme * c) / (self.delta_theta(theta) * s)
    }

    /// `ln G` with `G_x = B G`; the integrating factor of the first-order parts.
    fn ln_g(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let sa = self.aol2.sqrt();
        -self.k.value() * (c.atanh() + sa * (sa * c).atan())
            + self.qme / self.xi * (0.5 * (1.0 + self.aol2 * c * c).ln() - s.ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularMethod {
    FiniteDifference,
    Galerkin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularEigenvalue {
    pub j: i32,
    pub lambda: f64,
    /// FD: last change under grid halving. Galerkin: weighted residual of the eigenfunction.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularSpectrum {
    pub problem: AngularProblem,
    pub method: AngularMethod,
    /// Sorted by `λ`.
    pub eigenvalues: Vec<AngularEigenvalue>,
    /// Points per component (FD) or basis functions per component (Galerkin).
    pub grid_size: usize,
    /// Set when `q_m e/Ξ` is not an integer.
    pub quantization_warning: bool,
}

impl AngularSpectrum {
    pub fn lambda(&self, j: i32) -> Option<f64> {
        self.eigenvalues.iter().find(|e| e.j == j).map(|e| e.lambda)
    }

    pub fn min_gap(&self) -> f64 {
        self.eigenvalues.windows(2).map(|w| w[1].lambda - w[0].lambda).fold(f64::INFINITY, f64::min)
    }
}

/// Assigns `j = ±1, ±2, …` by sign and distance from zero, keeping the
/// `count` eigenvalues of smallest magnitude.
fn index_by_sign(mut values: Vec<(f64, f64)>, count: usize) -> Vec<AngularEigenvalue> {
    values.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
    values.truncate(count);
    let mut pos: Vec<_> = values.iter().filter(|v| v.0 >= 0.0).copied().collect();
    let mut neg: Vec<_> = values.iter().filter(|v| v.0 < 0.0).copied().collect();
    pos.sort_by(|a, b| a.0.total_cmp(&b.0));
    neg.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut out: Vec<_> = pos
        .iter()
        .enumerate()
        .map(|(i, v)| AngularEigenvalue { j: i as i32 + 1, lambda: v.0, residual: v.1 })
        .chain(neg.iter().enumerate().map(|(i, v)| AngularEigenvalue { j: -(i as i32) - 1, lambda: v.0, residual: v.1 }))
        .collect();
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    out
}

/// Computes the `count` eigenvalues of smallest `|λ|`, converged under refinement.
pub fn solve_angular(problem: &AngularProblem, count: usize, method: AngularMethod) -> Result<AngularSpectrum> {
    if count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    if !problem.quantized() {
        log::warn!("q_m e/Ξ = {} is not an integer; 𝕌_k is not essentially selfadjoint", problem.qme / problem.xi);
    }
    let (values, grid_size) = match method {
        AngularMethod::FiniteDifference => fd::solve(problem, count)?,
        AngularMethod::Galerkin => {
            let (sol, n) = galerkin::solve(problem, count)?;
            let vals = sol.values.iter().zip(&sol.residuals).map(|(l, r)| (*l, *r)).collect();
            (vals, n)
        }
    };
    let eigenvalues = index_by_sign(values, count);
    Ok(AngularSpectrum {
        problem: *problem,
        method,
        eigenvalues,
        grid_size,
        quantization_warning: !problem.quantized(),
    })
}

/// A sampled eigenfunction `S = (S₁, S₂) = (u, i v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularEigenfunction {
    pub j: i32,
    pub lambda: f64,
    pub theta: Vec<f64>,
    pub s: Vec<[Complex64; 2]>,
    /// `‖𝕌_k S − λ S‖` in the weighted norm.
    pub residual: f64,
}

/// Samples the normalized eigenfunction with index `j` at the given angles.
pub fn angular_eigenfunction(problem: &AngularProblem, j: i32, grid: &[f64]) -> Result<AngularEigenfunction> {
    if j == 0 {
        return Err(Error::Precondition("j = 0 is not an index".into()));
    }
    let count = 2 * j.unsigned_abs() as usize + 4;
    let (sol, _) = galerkin::solve(problem, count)?;
    let spec = index_by_sign(sol.values.iter().map(|l| (*l, 0.0)).collect(), count);
    let hit = spec
        .iter()
        .find(|e| e.j == j)
        .ok_or_else(|| Error::Precondition(format!("j = {j} outside the computed spectrum")))?;
    let idx = sol.values.iter().position(|&l| l == hit.lambda).expect("eigenvalue taken from the same list");
    let s = grid.iter().map(|&t| sol.basis.evaluate(&sol.vectors[idx], t)).map(|(u, v)| {
        [Complex64::new(u, 0.0), Complex64::new(0.0, v)]
    });
    Ok(AngularEigenfunction {
        j,
        lambda: hit.lambda,
        theta: grid.to_vec(),
        s: s.collect(),
        residual: sol.residuals[idx],
    })
}

mod fd {
    use super::*;

    /// `x(θ) = ∫₀^θ dθ'/√Δ_θ`.
    struct XMap {
        nodes: Vec<f64>,
        weights: Vec<f64>,
        aol2: f64,
    }

    impl XMap {
        fn new(aol2: f64) -> Self {
            let (nodes, weights) = gauss_legendre(32);
            Self { nodes, weights, aol2 }
        }

        fn x(&self, theta: f64) -> f64 {
            if self.aol2 == 0.0 {
                return theta;
            }
            let (xs, ws) = scaled_rule(&self.nodes, &self.weights, 0.0, theta);
            xs.iter().zip(ws).map(|(t, w)| w / (1.0 + self.aol2 * t.cos().powi(2)).sqrt()).sum()
        }

        fn theta(&self, x: f64, guess: f64) -> f64 {
            if self.aol2 == 0.0 {
                return x;
            }
            let mut t = guess;
            for _ in 0..20 {
                let dt = (self.x(t) - x) * (1.0 + self.aol2 * t.cos().powi(2)).sqrt();
                t -= dt;
                if dt.abs() < 1e-15 {
                    break;
                }
            }
            t
        }
    }

    /// Symmetric tridiagonal matrix `(diag, off)`.
    pub(super) fn assemble(p: &AngularProblem, n: usize) -> (Vec<f64>, Vec<f64>) {
        let xm = XMap::new(p.aol2);
        let x_total = xm.x(std::f64::consts::PI);
        // Component carried by the first and last points, chosen so that the
        // bounded solution component dominates at each end.
        let first_u = p.kappa0() > 0.0;
        let last_v = p.kappa_pi() > 0.0;
        let last_u_type = !last_v;
        let m = if first_u != last_u_type { 2 * n } else { 2 * n + 1 };
        let delta = x_total / m as f64;
        let h = 2.0 * delta;
        let mut theta = Vec::with_capacity(m);
        let mut guess = 0.0;
        for j in 0..m {
            let x = (j as f64 + 0.5) * delta;
            // dθ/dx = √Δ_θ lies in [1, √Ξ].
            let t = xm.theta(x, guess + delta);
            theta.push(t);
            guess = t;
        }
        let is_u = |j: usize| j.is_multiple_of(2) == first_u;
        let g: Vec<f64> = theta.iter().map(|&t| p.ln_g(t)).collect();
        let diag = (0..m).map(|j| if is_u(j) { -1.0 } else { 1.0 } * p.mu_a * theta[j].cos()).collect();
        let off = (0..m - 1)
            .map(|j| if is_u(j) { -(g[j + 1] - g[j]).exp() / h } else { (g[j] - g[j + 1]).exp() / h })
            .collect();
        (diag, off)
    }

    /// Number of eigenvalues below `sigma`.
    pub(super) fn sturm_count(diag: &[f64], off: &[f64], sigma: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..diag.len() {
            let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
            q = diag[i] - sigma - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (diag[i].abs() + sigma.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The eigenvalue with sorted index `idx`, by bisection.
    fn eigenvalue(diag: &[f64], off: &[f64], idx: usize) -> f64 {
        let (mut lo, mut hi) = (-1.0, 1.0);
        while sturm_count(diag, off, lo) > idx {
            lo *= 2.0;
        }
        while sturm_count(diag, off, hi) <= idx {
            hi *= 2.0;
        }
        while hi - lo > 2e-15 * hi.abs().max(lo.abs()).max(1.0) {
            let mid = 0.5 * (lo + hi);
            if sturm_count(diag, off, mid) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `2·count` eigenvalues nearest zero on the `n`-point grid, sorted.
    pub(super) fn near_zero(p: &AngularProblem, n: usize, count: usize) -> Vec<f64> {
        let (diag, off) = assemble(p, n);
        let nneg = sturm_count(&diag, &off, 0.0);
        let lo = nneg.saturating_sub(count);
        let hi = (nneg + count).min(diag.len());
        (lo..hi).map(|i| eigenvalue(&diag, &off, i)).collect()
    }

    pub(super) fn solve(p: &AngularProblem, count: usize) -> Result<(Vec<(f64, f64)>, usize)> {
        let nmax = 102_400;
        let mut n = 100.max(4 * count);
        let mut prev_raw = near_zero(p, n, count);
        let mut prev_rich: Option<Vec<f64>> = None;
        loop {
            n *= 2;
            if n > nmax {
                let last = prev_rich.unwrap_or(prev_raw);
                return Err(Error::NoConvergence { what: "angular finite differences".into(), last });
            }
            let raw = near_zero(p, n, count);
            if raw.len() != prev_raw.len() {
                prev_raw = raw;
                continue;
            }
            let rich: Vec<f64> = raw.iter().zip(&prev_raw).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
            if let Some(pr) = &prev_rich {
                let changes: Vec<f64> = rich.iter().zip(pr).map(|(a, b)| (a - b).abs()).collect();
                // Only the `count` values nearest zero need to meet the tolerance.
                let mut order: Vec<usize> = (0..rich.len()).collect();
                order.sort_by(|&a, &b| rich[a].abs().total_cmp(&rich[b].abs()));
                let ok = order.iter().take(count).all(|&i| changes[i] < 1e-8 * (1.0 + rich[i].abs()));
                if ok {
                    let out = order.iter().take(count).map(|&i| (rich[i], changes[i])).collect();
                    return Ok((out, n));
                }
            }
            prev_raw = raw;
            prev_rich = Some(rich);
        }
    }
}

mod galerkin {
    use super::*;

    /// Jacobi polynomials `P_n^{(α,β)}(t)` for `n < count`.
    fn jacobi(count: usize, alpha: f64, beta: f64, t: f64, out: &mut [f64]) {
        if count == 0 {
            return;
        }
        out[0] = 1.0;
        if count == 1 {
            return;
        }
        out[1] = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (t - 1.0);
        for n in 1..count - 1 {
            let nf = n as f64;
            let s = 2.0 * nf + alpha + beta;
            let a1 = 2.0 * (nf + 1.0) * (nf + alpha + beta + 1.0) * s;
            let a2 = (s + 1.0) * (alpha * alpha - beta * beta);
            let a3 = s * (s + 1.0) * (s + 2.0);
            let a4 = 2.0 * (nf + alpha) * (nf + beta) * (s + 2.0);
            out[n + 1] = ((a2 + a3 * t) * out[n] - a4 * out[n - 1]) / a1;
        }
    }

    /// One component's basis `sin(θ/2)^p cos(θ/2)^q P_n^{(p,q)}(cosθ)` with unit-mass scaling.
    #[derive(Debug, Clone)]
    struct Family {
        p: f64,
        q: f64,
        size: usize,
        scale: Vec<f64>,
    }

    impl Family {
        /// Values and θ-derivatives of all members at `theta`.
        fn eval(&self, theta: f64, f: &mut [f64], df: &mut [f64]) {
            let n = self.size;
            let t = theta.cos();
            let st = theta.sin();
            let (s2, c2) = (0.5 * theta).sin_cos();
            let env = s2.powf(self.p) * c2.powf(self.q);
            let denv = env * (0.5 * self.p * c2 / s2 - 0.5 * self.q * s2 / c2);
            let mut pv = vec![0.0; n];
            let mut dv = vec![0.0; n.max(1)];
            jacobi(n, self.p, self.q, t, &mut pv);
            jacobi(n.saturating_sub(1), self.p + 1.0, self.q + 1.0, t, &mut dv);
            for i in 0..n {
                let dp = if i == 0 { 0.0 } else { 0.5 * (i as f64 + self.p + self.q + 1.0) * dv[i - 1] };
                f[i] = self.scale[i] * env * pv[i];
                df[i] = self.scale[i] * (denv * pv[i] - env * st * dp);
            }
        }
    }

    /// Tabulated basis at quadrature nodes.
    #[derive(Debug, Clone)]
    pub(super) struct Basis {
        problem: AngularProblem,
        u: Family,
        v: Family,
    }

    impl Basis {
        fn new(problem: &AngularProblem, n: usize) -> Self {
            let (k0, kp) = (problem.kappa0(), problem.kappa_pi());
            // The component whose bounded behaviour admits a zero mode gets one extra member,
            // so the discrete operator has the same index as the continuous one.
            let nu = if k0 > 0.0 && kp < 0.0 { n + 1 } else { n };
            let nv = if k0 < 0.0 && kp > 0.0 { n + 1 } else { n };
            let mut b = Self {
                problem: *problem,
                u: Family { p: (k0 - 0.5).abs(), q: (kp + 0.5).abs(), size: nu, scale: vec![1.0; nu] },
                v: Family { p: (k0 + 0.5).abs(), q: (kp - 0.5).abs(), size: nv, scale: vec![1.0; nv] },
            };
            // Normalize each member with the exact Jacobi norm (weight without 1/√Δ_θ).
            for fam in [&mut b.u, &mut b.v] {
                for i in 0..fam.size {
                    fam.scale[i] = 1.0 / jacobi_norm(i, fam.p, fam.q).sqrt();
                }
            }
            b
        }

        fn dim(&self) -> usize {
            self.u.size + self.v.size
        }

        /// `(u(θ), v(θ))` for a coefficient vector.
        pub(super) fn evaluate(&self, c: &DVector<f64>, theta: f64) -> (f64, f64) {
            let (u, v, _, _) = self.fields(c, theta);
            (u, v)
        }

        fn fields(&self, c: &DVector<f64>, theta: f64) -> (f64, f64, f64, f64) {
            let (nu, nv) = (self.u.size, self.v.size);
            let mut f = vec![0.0; nu.max(nv)];
            let mut df = vec![0.0; nu.max(nv)];
            self.u.eval(theta, &mut f, &mut df);
            let (mut u, mut du) = (0.0, 0.0);
            for i in 0..nu {
                u += c[i] * f[i];
                du += c[i] * df[i];
            }
            self.v.eval(theta, &mut f, &mut df);
            let (mut v, mut dv) = (0.0, 0.0);
            for i in 0..nv {
                v += c[nu + i] * f[i];
                dv += c[nu + i] * df[i];
            }
            (u, v, du, dv)
        }

        /// Weighted residual `‖𝕌_k S − λS‖` on a Gauss rule of `q` points.
        fn residual(&self, c: &DVector<f64>, lambda: f64, q: usize) -> f64 {
            let p = &self.problem;
            let (x, w) = gauss_legendre(q);
            let (th, w) = scaled_rule(&x, &w, 0.0, std::f64::consts::PI);
            let mut acc = 0.0;
            for (&t, &wi) in th.iter().zip(&w) {
                let (u, v, du, dv) = self.fields(c, t);
                let (s, cs) = t.sin_cos();
                let dt = p.delta_theta(t);
                let sdt = dt.sqrt();
                let half_cot = 0.5 * cs / s;
                let b = p.b(t);
                let r1 = -p.mu_a * cs * u - sdt * (dv + (half_cot + b) * v) - lambda * u;
                let r2 = sdt * (du + (half_cot - b) * u) + p.mu_a * cs * v - lambda * v;
                acc += wi * (r1 * r1 + r2 * r2) * s / sdt;
            }
            acc.sqrt()
        }
    }

    /// `∫₀^π sin(θ/2)^{2α} cos(θ/2)^{2β} P_n(cosθ)² sinθ dθ`, which is
    /// `2^{−(α+β)}` times the classical Jacobi norm.
    fn jacobi_norm(n: usize, a: f64, b: f64) -> f64 {
        let nf = n as f64;
        let lg = |x: f64| ln_gamma(x);
        let ln = (a + b + 1.0) * 2f64.ln() - (2.0 * nf + a + b + 1.0).ln() + lg(nf + a + 1.0) + lg(nf + b + 1.0)
            - lg(nf + a + b + 1.0)
            - lg(nf + 1.0);
        (ln - (a + b) * 2f64.ln()).exp()
    }

    /// Lanczos approximation of `ln Γ(x)` for `x > 0`.
    fn ln_gamma(x: f64) -> f64 {
        const G: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        if x < 0.5 {
            let pi = std::f64::consts::PI;
            return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
        }
        let x = x - 1.0;
        let mut a = G[0];
        let t = x + 7.5;
        for (i, g) in G.iter().enumerate().skip(1) {
            a += g / (x + i as f64);
        }
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
    }

    pub(super) struct Solution {
        pub values: Vec<f64>,
        pub residuals: Vec<f64>,
        pub vectors: Vec<DVector<f64>>,
        pub basis: Basis,
    }

    /// All generalized eigenpairs for `n` members per component.
    fn eigen(problem: &AngularProblem, n: usize) -> Result<(Vec<f64>, Vec<DVector<f64>>, Basis)> {
        let basis = Basis::new(problem, n);
        let (nu, nv) = (basis.u.size, basis.v.size);
        let dim = basis.dim();
        let q = 2 * dim + 48;
        let (x, w) = gauss_legendre(q);
        let (th, w) = scaled_rule(&x, &w, 0.0, std::f64::consts::PI);
        let mut a = DMatrix::<f64>::zeros(dim, dim);
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        let mut fu = vec![0.0; nu];
        let mut dfu = vec![0.0; nu];
        let mut fv = vec![0.0; nv];
        let mut dfv = vec![0.0; nv];
        for (&t, &wi) in th.iter().zip(&w) {
            basis.u.eval(t, &mut fu, &mut dfu);
            basis.v.eval(t, &mut fv, &mut dfv);
            let (s, c) = t.sin_cos();
            let wt = wi * s / problem.delta_theta(t).sqrt();
            let mass = problem.mu_a * c;
            let hb = 0.5 * c / s + problem.b(t);
            for i in 0..nu {
                for jj in 0..nu {
                    let uu = wt * fu[i] * fu[jj];
                    m[(i, jj)] += uu;
                    a[(i, jj)] -= mass * uu;
                }
                for jj in 0..nv {
                    // −∫ u_i (v_j' + (½cotθ + b) v_j) sinθ dθ
                    let val = -wi * s * fu[i] * (dfv[jj] + hb * fv[jj]);
                    a[(i, nu + jj)] += val;
                    a[(nu + jj, i)] += val;
                }
            }
            for i in 0..nv {
                for jj in 0..nv {
                    let vv = wt * fv[i] * fv[jj];
                    m[(nu + i, nu + jj)] += vv;
                    a[(nu + i, nu + jj)] += mass * vv;
                }
            }
        }
        let chol = m
            .cholesky()
            .ok_or_else(|| Error::NoConvergence { what: "Galerkin mass matrix not positive definite".into(), last: vec![] })?;
        let l = chol.l();
        let linv = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NoConvergence { what: "singular Cholesky factor".into(), last: vec![] })?;
        let c = &linv * &a * linv.transpose();
        let c = (&c + c.transpose()) * 0.5;
        let eig = c.symmetric_eigen();
        let lt_inv = linv.transpose();
        let mut pairs: Vec<(f64, DVector<f64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &lam)| (lam, &lt_inv * eig.eigenvectors.column(i)))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (vals, vecs) = pairs.into_iter().unzip();
        Ok((vals, vecs, basis))
    }

    /// Indices of the `count` eigenvalues nearest zero.
    fn nearest(vals: &[f64], count: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[a].abs().total_cmp(&vals[b].abs()));
        idx.truncate(count);
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        idx
    }

    pub(super) fn solve(problem: &AngularProblem, count: usize) -> Result<(Solution, usize)> {
        let nmax = 400;
        let mut n = count + 16;
        let mut vals = eigen(problem, n)?.0;
        loop {
            let n2 = n + 8.max(n / 4);
            if n2 > nmax {
                return Err(Error::NoConvergence {
                    what: "angular Galerkin".into(),
                    last: nearest(&vals, count).iter().map(|&i| vals[i]).collect(),
                });
            }
            let (v2, vecs, basis) = eigen(problem, n2)?;
            let i1 = nearest(&vals, count);
            let i2 = nearest(&v2, count);
            let ok = i1
                .iter()
                .zip(&i2)
                .all(|(&a, &b)| (vals[a] - v2[b]).abs() < 1e-12 * (1.0 + v2[b].abs()));
            n = n2;
            if ok {
                let q = 4 * basis.dim() + 64;
                let values: Vec<f64> = i2.iter().map(|&i| v2[i]).collect();
                let vectors: Vec<DVector<f64>> = i2.iter().map(|&i| vecs[i].clone()).collect();
                let residuals = values.iter().zip(&vectors).map(|(l, c)| basis.residual(c, *l, q)).collect();
                return Ok((Solution { values, residuals, vectors, basis }, n));
            }
            vals = v2;
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn ln_gamma_values() {
            assert!((ln_gamma(1.0)).abs() < 1e-14);
            assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
            assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
        }

        #[test]
        fn jacobi_orthogonality() {
            let (x, w) = gauss_legendre(60);
            let (a, b) = (2.0, 1.0);
            let mut p = vec![0.0; 6];
            let mut gram = [[0.0; 6]; 6];
            for (t, wi) in x.iter().zip(&w) {
                jacobi(6, a, b, *t, &mut p);
                for i in 0..6 {
                    for j in 0..6 {
                        gram[i][j] += wi * (1.0 - t).powf(a) * (1.0 + t).powf(b) * p[i] * p[j];
                    }
                }
            }
            for i in 0..6 {
                for j in 0..6 {
                    let expect = if i == j { jacobi_norm(i, a, b) * 2f64.powf(a + b) } else { 0.0 };
                    assert!((gram[i][j] - expect).abs() < 1e-12 * (1.0 + expect), "{i} {j}");
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(k: f64, mu_a: f64, aol2: f64, qme: f64) -> AngularProblem {
        AngularProblem::new(HalfInteger::try_from(k).unwrap(), mu_a, aol2, qme).unwrap()
    }

    #[test]
    fn round_sphere_values() {
        // On the round sphere the spectrum is ±(|k| + 1/2 + n).
        for k in [0.5, -0.5, 1.5] {
            let p = problem(k, 0.0, 0.0, 0.0);
            let s = solve_angular(&p, 6, AngularMethod::Galerkin).unwrap();
            for e in &s.eigenvalues {
                let n = e.j.unsigned_abs() as f64 - 1.0;
                let exact = e.j.signum() as f64 * (f64::abs(k) + 0.5 + n);
                assert!((e.lambda - exact).abs() < 1e-10, "k = {k}, j = {}: {}", e.j, e.lambda);
            }
        }
    }

    #[test]
    fn finite_differences_match_galerkin() {
        let p = problem(0.5, 0.3, 0.02, 0.0);
        let g = solve_angular(&p, 6, AngularMethod::Galerkin).unwrap();
        let f = solve_angular(&p, 6, AngularMethod::FiniteDifference).unwrap();
        for (a, b) in g.eigenvalues.iter().zip(&f.eigenvalues) {
            assert_eq!(a.j, b.j);
            assert!((a.lambda - b.lambda).abs() < 1e-6, "{} vs {}", a.lambda, b.lambda);
        }
    }

    #[test]
    fn aol2_range_is_enforced() {
        assert!(AngularProblem::new(HalfInteger::try_from(0.5).unwrap(), 0.0, 0.2, 0.0).is_err());
    }
}
