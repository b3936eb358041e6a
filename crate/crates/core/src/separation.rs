//! Coefficient data of the separated Dirac system.
//!
//! After separating `e^{-iωt} e^{-ikφ}` and the angular eigenfunction, the
//! radial part is a 2×2 Dirac system which in the tortoise coordinate `y`
//! reads `h = [[0, ∂_y], [−∂_y, 0]] + V(r(y))`. This module provides the
//! tortoise map, the potential `V`, its horizon limits and the constant
//! unitary used in the reduction.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Background;
use crate::quadrature::integrate_adaptive;

/// Mass and charge of the Dirac field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub mu: f64,
    pub e: f64,
}

impl FieldParams {
    pub fn new(mu: f64, e: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite() && e.is_finite()) {
            return Err(Error::Precondition(format!("need finite mu >= 0 and finite e, got ({mu}, {e})")));
        }
        Ok(Self { mu, e })
    }
}

/// A half-odd-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HalfInteger(i32);

impl HalfInteger {
    /// `twice` must be odd.
    pub fn from_twice(twice: i32) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::Precondition(format!("{}/2 is not a half-odd-integer", twice)));
        }
        Ok(Self(twice))
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl TryFrom<f64> for HalfInteger {
    type Error = Error;
    fn try_from(k: f64) -> Result<Self> {
        let t = 2.0 * k;
        if !t.is_finite() || t.fract() != 0.0 || t.abs() > i32::MAX as f64 {
            return Err(Error::Precondition(format!("k = {k} is not a half-odd-integer")));
        }
        Self::from_twice(t as i32)
    }
}

impl From<HalfInteger> for f64 {
    fn from(k: HalfInteger) -> f64 {
        k.value()
    }
}

impl std::fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// Separation quantum numbers of one radial mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeIndices {
    pub k: HalfInteger,
    /// Nonzero index into the angular spectrum; its sign is the sign of `λ`.
    pub j: i32,
    pub omega: f64,
}

/// A radial position carried by its distances to both horizons.
///
/// Near a horizon `r − r_+` (or `r_c − r`) can be far below the spacing of
/// doubles around `r`, so the distances are the primary data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    pub d_plus: f64,
    pub d_c: f64,
}

/// Which end of `(r_+, r_c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Inner,
    Cosmological,
}

impl End {
    /// Direction of increasing `|y|` towards this end.
    pub fn sign(self) -> f64 {
        match self {
            End::Inner => -1.0,
            End::Cosmological => 1.0,
        }
    }
}

/// The bijection `y ↔ r` of `(r_+, r_c)` onto the real line, with `dy/dr = (r² + a²)/Δ_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct TortoiseMap {
    r_minus: f64,
    r_plus: f64,
    r_c: f64,
    r_neg: f64,
    a2: f64,
    l2: f64,
    extremal: bool,
    /// Log coefficients `(1/(2κ_i))` at `r_c`, `r_+`, `r_−`, `r_n`.
    log_c: f64,
    log_plus: f64,
    log_minus: f64,
    log_neg: f64,
    /// Coefficient of `−1/(r − r_+)` (extremal case only).
    pole_plus: f64,
    r0: f64,
    offset: f64,
}

impl TortoiseMap {
    /// Map normalized by `y(r0) = 0`; the default `r0` is `√(r_+ r_c)`.
    pub fn new(bg: &Background, r0: Option<f64>) -> Result<Self> {
        let h = bg.horizons;
        let p = bg.params;
        let (r_minus, r_plus, r_c, r_neg) = (h.r_minus, h.r_plus, h.r_c, h.r_neg());
        let a2 = p.a2();
        let l2 = p.l * p.l;
        let extremal = h.is_extremal();
        // Δ_r'(r_i) from the factored form −(1/l²)∏(r − r_j).
        let dprime = |ri: f64, others: [f64; 3]| -others.iter().map(|rj| ri - rj).product::<f64>() / l2;
        let res = |ri: f64, others: [f64; 3]| (ri * ri + a2) / dprime(ri, others);
        let mut map = Self {
            r_minus,
            r_plus,
            r_c,
            r_neg,
            a2,
            l2,
            extremal,
            log_c: res(r_c, [r_plus, r_minus, r_neg]),
            log_plus: 0.0,
            log_minus: 0.0,
            log_neg: res(r_neg, [r_c, r_plus, r_minus]),
            pole_plus: 0.0,
            r0: 0.0,
            offset: 0.0,
        };
        if extremal {
            // (r² + a²)/Δ_r = f(r)/(r − r_+)² with f = l²(r² + a²)/((r_c − r)(r − r_n)).
            let f = l2 * (r_plus * r_plus + a2) / ((r_c - r_plus) * (r_plus - r_neg));
            let dlogf = 2.0 * r_plus / (r_plus * r_plus + a2) + 1.0 / (r_c - r_plus) - 1.0 / (r_plus - r_neg);
            map.pole_plus = f;
            map.log_plus = f * dlogf;
        } else {
            map.log_plus = res(r_plus, [r_c, r_minus, r_neg]);
            // Vanishes when r_− = 0 (no spin, no charge).
            map.log_minus = if r_minus * r_minus + a2 == 0.0 { 0.0 } else { res(r_minus, [r_c, r_plus, r_neg]) };
        }
        let r0 = r0.unwrap_or((r_plus * r_c).sqrt());
        let pt0 = map.point_from_r(r0)?;
        map.r0 = r0;
        map.offset = map.raw_y(&pt0);
        Ok(map)
    }

    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    pub fn r_c(&self) -> f64 {
        self.r_c
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn is_extremal(&self) -> bool {
        self.extremal
    }

    pub fn width(&self) -> f64 {
        self.r_c - self.r_plus
    }

    /// `(r_i, κ_i)` for `r_c`, `r_+`, `r_−`, `r_n`; `κ = 0` at a double root.
    pub fn surface_gravities(&self) -> [(f64, f64); 4] {
        let k = |c: f64| if c == 0.0 { 0.0 } else { 0.5 / c };
        if self.extremal {
            [(self.r_c, k(self.log_c)), (self.r_plus, 0.0), (self.r_minus, 0.0), (self.r_neg, k(self.log_neg))]
        } else {
            [
                (self.r_c, k(self.log_c)),
                (self.r_plus, k(self.log_plus)),
                (self.r_minus, k(self.log_minus)),
                (self.r_neg, k(self.log_neg)),
            ]
        }
    }

    pub fn point_from_r(&self, r: f64) -> Result<RadialPoint> {
        if !(r > self.r_plus && r < self.r_c) {
            return Err(Error::Domain(format!("r = {r} outside ({}, {})", self.r_plus, self.r_c)));
        }
        Ok(RadialPoint { d_plus: r - self.r_plus, d_c: self.r_c - r })
    }

    /// Point with `ln(d_+/d_c) = s`.
    pub fn point_from_logit(&self, s: f64) -> RadialPoint {
        let w = self.width();
        if s <= 0.0 {
            let e = s.exp();
            RadialPoint { d_plus: w * e / (1.0 + e), d_c: w / (1.0 + e) }
        } else {
            let e = (-s).exp();
            RadialPoint { d_plus: w / (1.0 + e), d_c: w * e / (1.0 + e) }
        }
    }

    pub fn logit(&self, pt: &RadialPoint) -> f64 {
        pt.d_plus.ln() - pt.d_c.ln()
    }

    pub fn r_of(&self, pt: &RadialPoint) -> f64 {
        if pt.d_plus <= pt.d_c {
            self.r_plus + pt.d_plus
        } else {
            self.r_c - pt.d_c
        }
    }

    /// `r − r_i` for a root away from the interval, computed from the nearer horizon.
    fn dist(&self, pt: &RadialPoint, ri: f64) -> f64 {
        if pt.d_plus <= pt.d_c {
            (self.r_plus - ri) + pt.d_plus
        } else {
            (self.r_c - ri) - pt.d_c
        }
    }

    /// `Δ_r` at a point, from the factored form.
    pub fn delta_at(&self, pt: &RadialPoint) -> f64 {
        let minus = if self.extremal { pt.d_plus } else { self.dist(pt, self.r_minus) };
        pt.d_c * pt.d_plus * minus * self.dist(pt, self.r_neg) / self.l2
    }

    /// `dr/dy = Δ_r/(r² + a²)`.
    pub fn drdy(&self, pt: &RadialPoint) -> f64 {
        let r = self.r_of(pt);
        self.delta_at(pt) / (r * r + self.a2)
    }

    /// `d/dy ln(d_+/d_c)`, bounded on the whole line.
    pub fn logit_rate(&self, pt: &RadialPoint) -> f64 {
        let r = self.r_of(pt);
        let minus = if self.extremal { pt.d_plus } else { self.dist(pt, self.r_minus) };
        self.width() * minus * self.dist(pt, self.r_neg) / (self.l2 * (r * r + self.a2))
    }

    fn raw_y(&self, pt: &RadialPoint) -> f64 {
        let mut y = self.log_c * pt.d_c.ln() + self.log_plus * pt.d_plus.ln();
        y += self.log_neg * self.dist(pt, self.r_neg).ln();
        if self.extremal {
            y -= self.pole_plus / pt.d_plus;
        } else if self.log_minus != 0.0 {
            y += self.log_minus * self.dist(pt, self.r_minus).ln();
        }
        y
    }

    pub fn y_at(&self, pt: &RadialPoint) -> f64 {
        self.raw_y(pt) - self.offset
    }

    /// `y(r)`; domain error outside `(r_+, r_c)`.
    pub fn tortoise_y(&self, r: f64) -> Result<f64> {
        Ok(self.y_at(&self.point_from_r(r)?))
    }

    /// `r(y)`.
    pub fn tortoise_r(&self, y: f64) -> Result<f64> {
        Ok(self.r_of(&self.point_at(y)?))
    }

    /// Inverts the map with a safeguarded Newton iteration in `ln d`,
    /// measuring `d` from whichever horizon `y` points towards.
    pub fn point_at(&self, y: f64) -> Result<RadialPoint> {
        if !y.is_finite() {
            return Err(Error::Domain(format!("y = {y} is not finite")));
        }
        let w = self.width();
        let inner = y <= 0.0;
        let (d0_max, sign) = if inner { (self.r0 - self.r_plus, 1.0) } else { (self.r_c - self.r0, -1.0) };
        let make = |u: f64| {
            let d = u.exp();
            if inner {
                RadialPoint { d_plus: d, d_c: w - d }
            } else {
                RadialPoint { d_plus: w - d, d_c: d }
            }
        };
        // g(u) = sign·(y(u) − y) is increasing in u and ≥ 0 at u_max.
        let g = |u: f64| sign * (self.y_at(&make(u)) - y);
        let u_max = d0_max.ln();
        let mut hi = u_max;
        let mut lo = u_max - 1.0;
        let mut step = 1.0;
        while g(lo) > 0.0 {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if lo < -740.0 {
                return Err(Error::Domain(format!("y = {y} lies beyond double-precision distance of the horizon")));
            }
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..200 {
            let pt = make(u);
            let gu = sign * (self.y_at(&pt) - y);
            if gu.abs() <= 1e-14 * (1.0 + y.abs()) {
                return Ok(pt);
            }
            if gu > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            // dg/du = |dy/dr|·d
            let d = u.exp();
            let dg = d / self.drdy(&pt);
            let mut un = u - gu / dg;
            if !(un > lo && un < hi) || !un.is_finite() {
                un = 0.5 * (lo + hi);
            }
            if (un - u).abs() <= 1e-15 * (1.0 + u.abs()) {
                return Ok(make(un));
            }
            u = un;
            if hi - lo <= 1e-15 * (1.0 + u.abs()) {
                return Ok(make(u));
            }
        }
        Ok(make(u))
    }
}

/// Limits of the potential at the two horizons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorizonPotentials {
    pub phi_plus: f64,
    pub phi_c: f64,
}

impl HorizonPotentials {
    pub fn at(&self, end: End) -> f64 {
        match end {
            End::Inner => self.phi_plus,
            End::Cosmological => self.phi_c,
        }
    }
}

pub fn horizon_potentials(bg: &Background, field: &FieldParams, k: HalfInteger) -> HorizonPotentials {
    let p = bg.params;
    let h = bg.horizons;
    let akx = p.a * k.value() * p.xi();
    let phi = |r: f64| (akx + field.e * p.q_e * r) / (r * r + p.a2());
    HorizonPotentials { phi_plus: phi(h.r_plus), phi_c: phi(h.r_c) }
}

/// True iff `q_m e/Ξ` is an integer within 1e-12; otherwise the angular
/// operator is not essentially selfadjoint.
pub fn magnetic_quantization_check(bg_params: &crate::geometry::PhysicalParams, field: &FieldParams) -> bool {
    let ratio = bg_params.q_m * field.e / bg_params.xi();
    (ratio - ratio.round()).abs() <= 1e-12
}

/// Pointwise pieces of the radial potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParts {
    /// `(aΞk + e q_e r)/(r² + a²)`
    pub vbar: f64,
    /// `μ r √Δ_r/(r² + a²)`
    pub mass: f64,
    /// `λ √Δ_r/(r² + a²)`
    pub v12: f64,
}

impl PotentialParts {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.vbar + self.mass, self.v12], [self.v12, self.vbar - self.mass]]
    }

    /// Spectral norm of `V − φ𝕀`.
    pub fn remainder_norm(&self, phi: f64) -> f64 {
        (self.vbar - phi).abs() + self.mass.hypot(self.v12)
    }
}

/// Radial coefficients of one `(k, λ)` mode on a background.
#[derive(Debug, Clone)]
pub struct RadialCoefficients {
    pub bg: Background,
    pub map: TortoiseMap,
    pub field: FieldParams,
    pub k: HalfInteger,
    pub lambda: f64,
    pub limits: HorizonPotentials,
    akx: f64,
}

impl RadialCoefficients {
    pub fn new(bg: &Background, field: &FieldParams, k: HalfInteger, lambda: f64) -> Result<Self> {
        Self::with_map(bg, TortoiseMap::new(bg, None)?, field, k, lambda)
    }

    pub fn with_map(bg: &Background, map: TortoiseMap, field: &FieldParams, k: HalfInteger, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Precondition("lambda must be finite".into()));
        }
        let p = bg.params;
        Ok(Self {
            bg: *bg,
            map,
            field: *field,
            k,
            lambda,
            limits: horizon_potentials(bg, field, k),
            akx: p.a * p.xi() * k.value(),
        })
    }

    pub fn parts_at(&self, pt: &RadialPoint) -> PotentialParts {
        let p = &self.bg.params;
        let r = self.map.r_of(pt);
        let s = r * r + p.a2();
        let sd = self.map.delta_at(pt).max(0.0).sqrt();
        PotentialParts {
            vbar: (self.akx + self.field.e * p.q_e * r) / s,
            mass: self.field.mu * r * sd / s,
            v12: self.lambda * sd / s,
        }
    }

    /// `V(r(y))`.
    pub fn potential_matrix(&self, y: f64) -> Result<[[f64; 2]; 2]> {
        Ok(self.parts_at(&self.map.point_at(y)?).matrix())
    }

    /// `‖V(r(y)) − φ_end 𝕀‖`.
    pub fn remainder_norm(&self, y: f64, end: End) -> Result<f64> {
        Ok(self.parts_at(&self.map.point_at(y)?).remainder_norm(self.limits.at(end)))
    }

    /// `∫ ‖V − φ_end 𝕀‖ dy` from `y_from` out to the chosen end.
    ///
    /// The part between `y_from` and `y_cut` is integrated in `y`. Beyond the
    /// cut, the substitution `d = t²` (distance to the horizon) turns the
    /// remaining infinite range into a finite one with a bounded integrand,
    /// so no extrapolation is needed. At a double root the integral diverges
    /// logarithmically and an error is returned.
    pub fn remainder_l1_with_cut(&self, end: End, y_from: f64, y_cut: f64) -> Result<L1Estimate> {
        if end == End::Inner && self.map.is_extremal() {
            return Err(Error::Domain("remainder is not integrable at a degenerate horizon".into()));
        }
        let sgn = end.sign();
        if sgn * (y_cut - y_from) < 0.0 {
            return Err(Error::Precondition("cut must lie between y_from and the end".into()));
        }
        let phi = self.limits.at(end);
        let body = integrate_adaptive(
            |y| self.remainder_norm(y, end).unwrap_or(f64::NAN),
            y_from.min(y_cut),
            y_from.max(y_cut),
            1e-13,
            1e-11,
            4000,
        )?;
        let cut = self.map.point_at(y_cut)?;
        let w = self.map.width();
        let a2 = self.bg.params.a2();
        let t_end = match end {
            End::Inner => cut.d_plus.sqrt(),
            End::Cosmological => cut.d_c.sqrt(),
        };
        let tail = integrate_adaptive(
            |t| {
                let d = t * t;
                let pt = match end {
                    End::Inner => RadialPoint { d_plus: d, d_c: w - d },
                    End::Cosmological => RadialPoint { d_plus: w - d, d_c: d },
                };
                let r = self.map.r_of(&pt);
                // |dy/dt| = 2t (r² + a²)/Δ_r
                let dydt = 2.0 * t * (r * r + a2) / self.map.delta_at(&pt);
                self.parts_at(&pt).remainder_norm(phi) * dydt
            },
            0.0,
            t_end,
            1e-14,
            1e-11,
            4000,
        )?;
        Ok(L1Estimate {
            value: body.value + tail.value,
            error: body.error + tail.error,
            y_cut,
            tail: tail.value,
        })
    }

    /// `∫ ‖V − φ_end 𝕀‖ dy` from `y_from` out to the chosen end, cut at `|y| = 50` beyond `y_from`.
    pub fn remainder_l1(&self, end: End, y_from: f64) -> Result<L1Estimate> {
        let sgn = end.sign();
        let y_cut = if sgn * y_from >= 50.0 { y_from + sgn } else { sgn * 50.0 };
        self.remainder_l1_with_cut(end, y_from, y_cut)
    }

    /// `∫_d^∞ ‖P₂(r(y))‖ dy` with `P₂ = V − φ_c𝕀`.
    pub fn p2_remainder_l1(&self, d: f64) -> Result<L1Estimate> {
        self.remainder_l1(End::Cosmological, d)
    }
}

/// An L¹ norm estimate with its split point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Estimate {
    pub value: f64,
    pub error: f64,
    pub y_cut: f64,
    /// Contribution beyond the cut.
    pub tail: f64,
}

/// The constant unitary that brings the 4×4 Hamiltonian into 2×2 block form.
pub fn build_v_unitary() -> Matrix4<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, s);
    let o = Complex64::new(s, 0.0);
    #[rustfmt::skip]
    let v = Matrix4::new(
        z, -i,  z,  i,
        i,  z, -i,  z,
        z, -o,  z, -o,
        -o, z, -o,  z,
    );
    v
}

/// Symbol of a first-order operator with each derivative replaced by a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeSlots {
    pub d_r: Complex64,
    pub d_theta: Complex64,
    pub d_phi: Complex64,
    /// Multiplies every non-derivative term.
    pub scalar: Complex64,
}

/// The unreduced radial-plus-angular Hamiltonian symbol at `(r, θ)`.
pub fn h0_symbol(bg: &Background, field: &FieldParams, r: f64, theta: f64, s: DerivativeSlots) -> Matrix4<Complex64> {
    let p = bg.params;
    let i = Complex64::i();
    let dr = bg.delta.eval(r);
    let dt = bg.delta_theta(theta);
    let xi = p.xi();
    let rho = r * r + p.a2();
    let (sin, cos) = theta.sin_cos();
    let cot = cos / sin;
    let e_minus = i * dr / rho * (s.d_r + p.a * xi / dr * s.d_phi - s.scalar * i * field.e * p.q_e * r / dr);
    let e_plus = i * dr / rho * (s.d_r - p.a * xi / dr * s.d_phi + s.scalar * i * field.e * p.q_e * r / dr);
    let pre = dr.sqrt() * dt.sqrt() / rho;
    let ang = s.d_theta + s.scalar * 0.5 * cot;
    let twist = i * xi / (dt * sin) * s.d_phi;
    let mono = s.scalar * field.e * p.q_m * cot / dt;
    let m_plus = pre * (ang + twist - mono);
    let m_minus = pre * (ang - twist + mono);
    let mass = s.scalar * field.mu * r * dr.sqrt() / rho;
    let am = s.scalar * p.a * field.mu * cos * dr.sqrt() / rho;
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let h = Matrix4::new(
        e_minus,      -m_minus,     -mass + i * am, z,
        m_plus,       -e_plus,      z,              -mass + i * am,
        -mass - i * am, z,          -e_plus,        m_minus,
        z,            -mass - i * am, -m_plus,      e_minus,
    );
    h
}

/// Block form expected after conjugating [`h0_symbol`] with [`build_v_unitary`].
pub fn reduced_h0_symbol(bg: &Background, field: &FieldParams, r: f64, theta: f64, s: DerivativeSlots) -> Matrix4<Complex64> {
    let p = bg.params;
    let i = Complex64::i();
    let dr = bg.delta.eval(r);
    let dt = bg.delta_theta(theta);
    let xi = p.xi();
    let rho = r * r + p.a2();
    let (sin, cos) = theta.sin_cos();
    let cot = cos / sin;
    let g = i * xi * s.d_phi / (dt * sin) - s.scalar * p.q_m * field.e * cot / dt;
    let ang = s.d_theta + s.scalar * 0.5 * cot;
    let sdt = dt.sqrt();
    let mac = s.scalar * field.mu * p.a * cos;
    let u = [[-mac, i * sdt * (ang + g)], [i * sdt * (ang - g), mac]];
    let base = i * p.a * xi * s.d_phi + s.scalar * field.e * p.q_e * r;
    let mass = s.scalar * field.mu * r * dr.sqrt();
    let d1 = (base + mass) / rho;
    let d2 = (base - mass) / rho;
    let mut t = Matrix4::<Complex64>::zeros();
    for a in 0..2 {
        t[(a, a)] = d1;
        t[(a + 2, a + 2)] = d2;
        for b in 0..2 {
            let diag = if a == b { s.d_r * dr / rho } else { Complex64::new(0.0, 0.0) };
            t[(a, b + 2)] = diag + dr.sqrt() / rho * u[a][b];
            t[(a + 2, b)] = -diag + dr.sqrt() / rho * u[a][b];
        }
    }
    t
}
