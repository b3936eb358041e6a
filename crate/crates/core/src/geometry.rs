//! Kerr-Newman-de Sitter backgrounds.
//!
//! The horizon function is the quartic
//! `Δ_r(r) = (r² + a²)(1 − r²/l²) − 2 m r + z²`. Its three positive zeroes
//! `r_− ≤ r_+ < r_c` are the inner, event and cosmological horizons; the fourth
//! zero is `−(r_c + r_+ + r_−)` because the cubic coefficient vanishes.

use std::fmt;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative mass window (in units of `m_crit⁺`) inside which `m = m_crit⁻` is
/// treated as extremal.
///
/// Root separation scales like the square root of the mass offset, so a window
/// of 1e-12 in mass corresponds to roughly 1e-6 in relative root separation.
/// A window expressed directly on the roots at 1e-9 would be below what double
/// precision can resolve for a double root.
pub const EXTREMAL_MASS_RTOL: f64 = 1e-12;

/// Physical data of a KN-dS black hole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub a: f64,
    pub l: f64,
    pub q_e: f64,
    pub q_m: f64,
}

impl PhysicalParams {
    pub fn new(m: f64, a: f64, l: f64, q_e: f64, q_m: f64) -> Result<Self> {
        let p = Self { m, a, l, q_e, q_m };
        p.validate()?;
        Ok(p)
    }

    /// Builds the physical data whose horizon quartic has the given roots.
    ///
    /// Only `z² = q_e² + q_m²` is fixed by the roots; the magnetic charge is
    /// taken as given and the electric charge absorbs the rest.
    pub fn from_roots(r_c: f64, r_plus: f64, r_minus: f64, l: f64, q_m: f64) -> Result<Self> {
        let rp = params_from_roots(r_c, r_plus, r_minus, l)?;
        let scale = l * l;
        if rp.a2 < -1e-12 * scale {
            return Err(Error::Precondition(format!("roots give a² = {} < 0", rp.a2)));
        }
        let qe2 = rp.z2 - q_m * q_m;
        if qe2 < -1e-12 * scale {
            return Err(Error::Precondition(format!(
                "roots give z² = {} < q_m² = {}",
                rp.z2,
                q_m * q_m
            )));
        }
        Self::new(rp.m, rp.a2.max(0.0).sqrt(), l, qe2.max(0.0).sqrt(), q_m)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.m, self.a, self.l, self.q_e, self.q_m];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("non-finite parameter".into()));
        }
        if self.l <= 0.0 {
            return Err(Error::Precondition(format!("l = {} must be positive", self.l)));
        }
        if self.a * self.a >= self.l * self.l {
            return Err(Error::Precondition(format!("a² must be below l² (a = {}, l = {})", self.a, self.l)));
        }
        Ok(())
    }

    pub fn a2(&self) -> f64 {
        self.a * self.a
    }

    pub fn z2(&self) -> f64 {
        self.q_e * self.q_e + self.q_m * self.q_m
    }

    /// `Ξ = 1 + a²/l²`.
    pub fn xi(&self) -> f64 {
        1.0 + self.aol2()
    }

    /// `a²/l²`.
    pub fn aol2(&self) -> f64 {
        self.a2() / (self.l * self.l)
    }

    /// Cosmological constant `Λ = 3/l²`.
    pub fn cosmological_constant(&self) -> f64 {
        3.0 / (self.l * self.l)
    }
}

/// `Δ_r` as a polynomial `c[0] + c[1] r + ... + c[4] r⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaQuartic {
    pub c: [f64; 5],
}

impl DeltaQuartic {
    pub fn eval(&self, r: f64) -> f64 {
        let c = &self.c;
        (((c[4] * r + c[3]) * r + c[2]) * r + c[1]) * r + c[0]
    }

    pub fn deriv(&self, r: f64) -> f64 {
        let c = &self.c;
        ((4.0 * c[4] * r + 3.0 * c[3]) * r + 2.0 * c[2]) * r + c[1]
    }

    pub fn deriv2(&self, r: f64) -> f64 {
        let c = &self.c;
        (12.0 * c[4] * r + 6.0 * c[3]) * r + 2.0 * c[2]
    }

    /// All four roots as complex numbers, from the companion matrix.
    pub fn companion_roots(&self) -> [num_complex::Complex64; 4] {
        let c = &self.c;
        let lead = c[4];
        #[rustfmt::skip]
        let comp = Matrix4::new(
            0.0, 0.0, 0.0, -c[0] / lead,
            1.0, 0.0, 0.0, -c[1] / lead,
            0.0, 1.0, 0.0, -c[2] / lead,
            0.0, 0.0, 1.0, -c[3] / lead,
        );
        let ev = comp.complex_eigenvalues();
        [ev[0], ev[1], ev[2], ev[3]]
    }
}

pub fn build_delta(p: &PhysicalParams) -> DeltaQuartic {
    let l2 = p.l * p.l;
    let a2 = p.a2();
    DeltaQuartic { c: [a2 + p.z2(), -2.0 * p.m, 1.0 - a2 / l2, 0.0, -1.0 / l2] }
}

/// `(m, a², z²)` reconstructed from the three positive roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootParams {
    pub m: f64,
    pub a2: f64,
    pub z2: f64,
}

fn check_root_order(r_c: f64, r_plus: f64, r_minus: f64, l: f64) -> Result<()> {
    let ok = [r_c, r_plus, r_minus, l].iter().all(|v| v.is_finite())
        && 0.0 <= r_minus
        && r_minus <= r_plus
        && r_plus < r_c
        && r_c < l;
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "need 0 ≤ r_minus ≤ r_plus < r_c < l, got ({r_minus}, {r_plus}, {r_c}, {l})"
        )))
    }
}

/// Inverse of the horizon map. Physicality (`a² ≥ 0`, `z² ≥ 0`) is left to the caller.
pub fn params_from_roots(r_c: f64, r_plus: f64, r_minus: f64, l: f64) -> Result<RootParams> {
    check_root_order(r_c, r_plus, r_minus, l)?;
    let l2 = l * l;
    let m = (r_c + r_plus) * (r_c + r_minus) * (r_plus + r_minus) / (2.0 * l2);
    let a2 = l2
        - (r_c * r_c + r_plus * r_plus + r_minus * r_minus + r_c * r_plus + r_c * r_minus + r_plus * r_minus);
    let z2 = r_c * r_plus * r_minus * (r_c + r_plus + r_minus) / l2 - a2;
    Ok(RootParams { m, a2, z2 })
}

/// Closed-form determinant of the map from `(r_c, r_+, r_−)` to `(m, z², a²)`.
///
/// Negative on strictly ordered roots and zero at extremality.
pub fn jacobian_det(r_c: f64, r_plus: f64, r_minus: f64, l: f64) -> f64 {
    let l4 = l.powi(4);
    -(r_c - r_plus)
        * (r_c - r_minus)
        * (r_plus - r_minus)
        * (2.0 * r_c + r_plus + r_minus)
        * (r_c + 2.0 * r_plus + r_minus)
        * (r_c + r_plus + 2.0 * r_minus)
        / (2.0 * l4)
}

/// Stationary radii and critical masses of `m(r)` along `Δ_r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValues {
    pub r_minus: f64,
    pub r_plus: f64,
    pub m_crit_minus: f64,
    pub m_crit_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalMassReport {
    /// `(l² − a²)² − 12 l² (a² + z²)`; nonnegative iff the spin/charge bound holds.
    pub discriminant: f64,
    pub spin_bound_satisfied: bool,
    pub values: Option<CriticalValues>,
}

pub fn critical_masses(a: f64, z: f64, l: f64) -> CriticalMassReport {
    let l2 = l * l;
    let a2 = a * a;
    let az = a2 + z * z;
    let base = l2 - a2;
    let disc = base * base - 12.0 * l2 * az;
    // Allow rounding at the exact boundary a²/l² = 7 − 4√3, z = 0.
    let within = disc >= -1e-14 * l2 * l2 && base > 0.0;
    if !within {
        return CriticalMassReport { discriminant: disc, spin_bound_satisfied: false, values: None };
    }
    let sq = disc.max(0.0).sqrt();
    let r_plus = ((base + sq) / 6.0).sqrt();
    // (base − sq)/6 rewritten without cancellation.
    let r_minus = (2.0 * l2 * az / (base + sq)).sqrt();

    let s = base / l2;
    let d = sq / l2;
    let pref = l / (3.0 * 6f64.sqrt());
    let s_plus_d = s + d;
    let s_minus_d = 12.0 * az / l2 / s_plus_d;
    let m_crit_plus = pref * s_plus_d.sqrt() * (2.0 * s - d);
    let m_crit_minus = pref * s_minus_d.sqrt() * (2.0 * s + d);
    CriticalMassReport {
        discriminant: disc,
        spin_bound_satisfied: true,
        values: Some(CriticalValues { r_minus, r_plus, m_crit_minus, m_crit_plus }),
    }
}

/// Why a parameter set carries no admissible black hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoBlackHoleReason {
    /// `(l² − a²)² < 12 l² (a² + z²)`: at most one positive horizon.
    SpinBoundViolated,
    /// `m < m_crit⁻` (or `m ≤ 0`): naked singularity.
    MassTooSmall,
    /// `m ≥ m_crit⁺`: event and cosmological horizons merge or disappear.
    MassTooLarge,
}

impl fmt::Display for NoBlackHoleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SpinBoundViolated => "spin bound violated",
            Self::MassTooSmall => "m too small",
            Self::MassTooLarge => "m >= m_crit+ (r_+ = r_c excluded)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    NonExtremal,
    Extremal,
    NoBlackHole(NoBlackHoleReason),
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Self::NonExtremal => "NonExtremal",
            Self::Extremal => "Extremal",
            Self::NoBlackHole(_) => "NoBlackHole",
        }
    }

    pub fn is_black_hole(&self) -> bool {
        !matches!(self, Self::NoBlackHole(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Admissibility {
    pub classification: Classification,
    pub critical: CriticalMassReport,
}

pub fn admissibility(p: &PhysicalParams) -> Admissibility {
    let critical = critical_masses(p.a, p.z2().sqrt(), p.l);
    let classification = match critical.values {
        None => Classification::NoBlackHole(NoBlackHoleReason::SpinBoundViolated),
        Some(v) => {
            let tol = EXTREMAL_MASS_RTOL * v.m_crit_plus;
            if p.m <= 0.0 {
                Classification::NoBlackHole(NoBlackHoleReason::MassTooSmall)
            } else if v.m_crit_minus > 0.0 && (p.m - v.m_crit_minus).abs() <= tol {
                Classification::Extremal
            } else if p.m < v.m_crit_minus {
                Classification::NoBlackHole(NoBlackHoleReason::MassTooSmall)
            } else if p.m >= v.m_crit_plus - tol {
                Classification::NoBlackHole(NoBlackHoleReason::MassTooLarge)
            } else {
                Classification::NonExtremal
            }
        }
    };
    Admissibility { classification, critical }
}

/// Data of the depressed resolvent cubic of `−l² Δ_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventData {
    pub p: f64,
    pub q: f64,
    pub w: f64,
    pub p_tilde: f64,
    pub q_tilde: f64,
    /// `q̃²/4 − p̃³/27`
    pub discriminant: f64,
    pub all_real: bool,
}

/// True iff all four roots of `Δ_r` are real, via the resolvent cubic.
pub fn cubic_resolvent_check(params: &PhysicalParams) -> ResolventData {
    let l2 = params.l * params.l;
    let a2 = params.a2();
    let p = -(l2 - a2);
    let q = 2.0 * params.m * l2;
    let w = -l2 * (a2 + params.z2());
    let p_tilde = 4.0 * w + p * p / 3.0;
    let q_tilde = 2.0 * p * p * p / 27.0 + q * q - 8.0 * p * w / 3.0;
    let discriminant = q_tilde * q_tilde / 4.0 - p_tilde.powi(3) / 27.0;
    // The discriminant is a difference of O(l¹²) terms.
    let scale = (q_tilde * q_tilde / 4.0).abs().max((p_tilde.powi(3) / 27.0).abs());
    let all_real = p_tilde > 0.0 && discriminant <= 1e-13 * scale;
    ResolventData { p, q, w, p_tilde, q_tilde, discriminant, all_real }
}

/// Horizon radii and classification of an admissible background.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorizonData {
    pub r_minus: f64,
    pub r_plus: f64,
    pub r_c: f64,
    pub classification: Classification,
}

impl HorizonData {
    /// The negative root `−(r_c + r_+ + r_−)`.
    pub fn r_neg(&self) -> f64 {
        -(self.r_c + self.r_plus + self.r_minus)
    }

    pub fn is_extremal(&self) -> bool {
        self.classification == Classification::Extremal
    }
}

fn newton_polish(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut x: f64) -> f64 {
    let mut best = (f(x).abs(), x);
    for _ in 0..60 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let step = f(x) / d;
        let xn = x - step;
        let fx = f(xn).abs();
        if fx < best.0 {
            best = (fx, xn);
        }
        if step.abs() <= 4.0 * f64::EPSILON * xn.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        x = xn;
    }
    best.1
}

pub fn find_horizons(p: &PhysicalParams) -> Result<HorizonData> {
    p.validate()?;
    let adm = admissibility(p);
    if let Classification::NoBlackHole(reason) = adm.classification {
        return Err(Error::NoBlackHole(reason));
    }
    let q = build_delta(p);
    let f = |r: f64| q.eval(r);
    let df = |r: f64| q.deriv(r);

    let mut roots = q.companion_roots();
    roots.sort_by(|x, y| x.re.total_cmp(&y.re));
    // The outermost and negative roots are simple and well separated.
    let r_neg = newton_polish(f, df, roots[0].re);
    let r_c = newton_polish(f, df, roots[3].re);

    // Deflate to (r − r_+)(r − r_−) = r² − S r + P.
    let l2 = p.l * p.l;
    let s = -(r_c + r_neg);
    let prod = l2 * (p.a2() + p.z2()) / (-r_c * r_neg);

    let (r_minus, r_plus) = if adm.classification == Classification::Extremal {
        let r_star = newton_polish(df, |r| q.deriv2(r), 0.5 * s);
        (r_star, r_star)
    } else {
        let disc = (0.25 * s * s - prod).max(0.0);
        let rp0 = 0.5 * s + disc.sqrt();
        let rm0 = prod / rp0;
        let rp = newton_polish(f, df, rp0);
        let rm = if prod == 0.0 { 0.0 } else { newton_polish(f, df, rm0) };
        (rm, rp)
    };

    if !(0.0 <= r_minus && r_minus <= r_plus && r_plus < r_c && r_c < p.l) {
        return Err(Error::Domain(format!(
            "horizon ordering failed: r_- = {r_minus}, r_+ = {r_plus}, r_c = {r_c}"
        )));
    }

    // The product form must reproduce the quartic.
    let rebuilt = product_form_coefficients(r_c, r_plus, r_minus, p.l);
    let scale = q.c.iter().map(|c| c.abs()).fold(0.0, f64::max);
    for (i, (x, y)) in rebuilt.iter().zip(q.c.iter()).enumerate() {
        if (x - y).abs() > 1e-10 * scale {
            return Err(Error::Domain(format!(
                "product form mismatch in coefficient {i}: {x} vs {y}"
            )));
        }
    }

    Ok(HorizonData { r_minus, r_plus, r_c, classification: adm.classification })
}

/// Coefficients of `(1/l²)(r_c − r)(r − r_+)(r − r_−)(r + r_c + r_+ + r_−)`.
pub fn product_form_coefficients(r_c: f64, r_plus: f64, r_minus: f64, l: f64) -> [f64; 5] {
    let roots = [r_c, r_plus, r_minus, -(r_c + r_plus + r_minus)];
    // Monic (r − r_i) product, then scale by −1/l².
    let mut poly = [1.0, 0.0, 0.0, 0.0, 0.0];
    let mut deg = 0;
    for &ri in &roots {
        for k in (0..=deg + 1).rev() {
            let prev = if k > 0 { poly[k - 1] } else { 0.0 };
            let cur = if k <= deg { poly[k] } else { 0.0 };
            poly[k] = cur - ri * prev;
        }
        deg += 1;
    }
    // poly is stored highest degree first; reverse to c0..c4.
    let s = -1.0 / (l * l);
    [poly[4] * s, poly[3] * s, poly[2] * s, poly[1] * s, poly[0] * s]
}

/// An admissible background: parameters, quartic and horizons together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Background {
    pub params: PhysicalParams,
    pub delta: DeltaQuartic,
    pub horizons: HorizonData,
}

impl Background {
    pub fn new(params: PhysicalParams) -> Result<Self> {
        let horizons = find_horizons(&params)?;
        Ok(Self { params, delta: build_delta(&params), horizons })
    }

    /// `Δ_r(r)` in factored form, accurate near the horizons.
    pub fn delta_r(&self, r: f64) -> f64 {
        let h = &self.horizons;
        (h.r_c - r) * (r - h.r_plus) * (r - h.r_minus) * (r - h.r_neg()) / (self.params.l * self.params.l)
    }

    /// `Δ_θ(θ) = 1 + (a²/l²) cos²θ`.
    pub fn delta_theta(&self, theta: f64) -> f64 {
        let c = theta.cos();
        1.0 + self.params.aol2() * c * c
    }

    /// Surface gravity `Δ_r'(r_i) / (2 (r_i² + a²))` at a simple root.
    pub fn surface_gravity(&self, r_i: f64) -> f64 {
        self.delta.deriv(r_i) / (2.0 * (r_i * r_i + self.params.a2()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_expansion_examples() {
        let q = build_delta(&PhysicalParams::new(0.0, 0.0, 1.0, 0.0, 0.0).unwrap());
        assert_eq!(q.c, [0.0, 0.0, 1.0, 0.0, -1.0]);
        let q = build_delta(&PhysicalParams::new(0.0, 1.0, 10.0, 0.0, 0.0).unwrap());
        assert_eq!(q.c[0], 1.0);
        assert!((q.c[2] - 0.99).abs() < 1e-15);
        assert!((q.c[4] + 0.01).abs() < 1e-15);
    }

    #[test]
    fn sample_roots_to_params() {
        let rp = params_from_roots(7.0, 2.5, 2.2, 10.0).unwrap();
        assert!((rp.m - 2.0539).abs() < 1e-4);
        assert!((rp.a2 - 1.51).abs() < 1e-12);
        assert!((rp.z2 - 2.9945).abs() < 1e-4);
        let bad = params_from_roots(3.0, 2.0, 1.0, 10.0).unwrap();
        assert!((bad.a2 - 75.0).abs() < 1e-12);
        assert!(bad.z2 < 0.0);
        assert!(params_from_roots(2.0, 3.0, 1.0, 10.0).is_err());
    }

    #[test]
    fn schwarzschild_de_sitter_critical_mass() {
        let r = critical_masses(0.0, 0.0, 1.0);
        let v = r.values.unwrap();
        assert_eq!(v.m_crit_minus, 0.0);
        assert!((v.m_crit_plus - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn spin_bound_edge_merges_stationary_points() {
        let l = 3.0;
        let a = l * (7.0 - 4.0 * 3f64.sqrt()).sqrt();
        let r = critical_masses(a, 0.0, l);
        assert!(r.spin_bound_satisfied);
        let v = r.values.unwrap();
        assert!((v.r_plus - v.r_minus).abs() < 1e-6 * l);
    }

    #[test]
    fn classification_boundaries() {
        let p = PhysicalParams::new(0.1, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(admissibility(&p).classification, Classification::NonExtremal);
        let v = critical_masses(0.3, 0.5, 10.0).values.unwrap();
        let ext = PhysicalParams::new(v.m_crit_minus, 0.3, 10.0, 0.5, 0.0).unwrap();
        assert_eq!(admissibility(&ext).classification, Classification::Extremal);
        let big = PhysicalParams::new(v.m_crit_plus, 0.3, 10.0, 0.5, 0.0).unwrap();
        assert_eq!(
            admissibility(&big).classification,
            Classification::NoBlackHole(NoBlackHoleReason::MassTooLarge)
        );
        let h = find_horizons(&ext).unwrap();
        assert_eq!(h.r_minus, h.r_plus);
        assert!(find_horizons(&big).is_err());
    }

    #[test]
    fn schwarzschild_de_sitter_horizons() {
        let p = PhysicalParams::new(0.1, 0.0, 1.0, 0.0, 0.0).unwrap();
        let h = find_horizons(&p).unwrap();
        assert_eq!(h.r_minus, 0.0);
        assert!(h.r_plus > 0.0 && h.r_plus < h.r_c);
        assert!(h.r_neg() < 0.0);
        let q = build_delta(&p);
        for r in [h.r_plus, h.r_c, h.r_neg()] {
            assert!(q.eval(r).abs() < 1e-14);
        }
    }

    #[test]
    fn product_form_matches_quartic() {
        let rp = params_from_roots(7.0, 2.5, 2.2, 10.0).unwrap();
        let c = product_form_coefficients(7.0, 2.5, 2.2, 10.0);
        let expected = [rp.a2 + rp.z2, -2.0 * rp.m, 1.0 - rp.a2 / 100.0, 0.0, -0.01];
        for (x, y) in c.iter().zip(expected) {
            assert!((x - y).abs() < 1e-13);
        }
    }
}
