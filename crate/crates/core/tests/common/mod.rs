#![allow(dead_code)]

use knds::geometry::{critical_masses, Background, PhysicalParams};
use knds::separation::{FieldParams, HalfInteger};

/// Three-horizon background with roots (r_c, r_+, r_−) = (7, 2.5, 2.2), l = 10.
pub fn nonextremal() -> Background {
    Background::new(PhysicalParams::from_roots(7.0, 2.5, 2.2, 10.0, 0.0).unwrap()).unwrap()
}

/// a = 1, q_e = 1, l = 10 at the lower critical mass.
pub fn extremal() -> Background {
    let m = critical_masses(1.0, 1.0, 10.0).values.unwrap().m_crit_minus;
    Background::new(PhysicalParams::new(m, 1.0, 10.0, 1.0, 0.0).unwrap()).unwrap()
}

pub fn field() -> FieldParams {
    FieldParams::new(0.5, 0.3).unwrap()
}

pub fn half(twice: i32) -> HalfInteger {
    HalfInteger::from_twice(twice).unwrap()
}

pub fn sweep_ks() -> Vec<HalfInteger> {
    [-3, -1, 1, 3].into_iter().map(half).collect()
}

pub fn sweep_omegas() -> Vec<f64> {
    (0..=100).map(|i| -5.0 + 0.1 * i as f64).collect()
}
