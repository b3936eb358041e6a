//! Adaptive embedded Runge-Kutta integration for small fixed-size systems.
//!
//! The pair is Verner's efficient 9(8) scheme. High order pays off here: the
//! radial solutions oscillate over thousands of periods and the tolerances are
//! tight, so cheap low-order steppers would need far more right-hand-side calls.

use crate::error::{Error, Result};

// Verner's efficient 9(8) pair, 16 stages.
#[rustfmt::skip]
const A: [[f64; 16]; 16] = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.3571e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [-3.833_735_636_677_017e-2, 0.137_397_637_279_444_32, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.714_760_534_225_28e-2, 0.0, 0.111_442_816_026_758_42, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [2.674_764_429_871_505, 0.0, -9.982_382_134_885_293, 7.921_017_705_013_789, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [5.242_104_050_577_351e-2, 0.0, 0.0, 0.179_691_118_917_595_32, 6.237_879_371_938_568e-4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.159_249_222_364_763_22, 0.0, 0.0, -0.429_842_987_724_108_7, 6.665_266_542_726_088e-2, 0.757_805_152_571_522, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [7.283_333_333_333_333e-2, 0.0, 0.0, 0.0, 0.0, 0.335_934_459_066_510_37, 0.246_732_207_600_156_3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.729755859375e-1, 0.0, 0.0, 0.0, 0.0, 0.334_800_972_969_933_33, 0.118_415_823_905_066_65, -0.345673828125e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [4.911_213_663_452_096_4e-2, 0.0, 0.0, 0.0, 0.0, 3.983_857_361_308_652e-2, 0.106_967_528_893_935_49, -2.174_259_165_458_647_7e-2, -0.105_595_647_486_956_49, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [-2.707_988_818_641_280_5e-2, 0.0, 0.0, 0.0, 0.0, 0.333e-1, -0.164_552_607_003_605_72, 3.428_266_306_497_39e-2, 0.158_526_406_443_922_1, 0.218_523_425_681_122_5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [5.584_657_769_108_862_5e-2, 0.0, 0.0, 0.0, 0.0, 9.166_533_166_672_539e-2, 0.239_239_965_552_362_7, 1.023_834_712_248_415e-2, -2.679_331_322_859_542_6e-3, 4.235_624_181_474_284_5e-2, 0.225_397_047_016_660_4, 0.0, 0.0, 0.0, 0.0, 0.0],
        [-0.480_251_051_272_519_6, 0.0, 0.0, 0.0, 0.0, -6.359_610_162_555_930_5, -0.276_231_389_804_084_1, -6.500_796_633_979_847, 0.573_476_587_704_095_7, 1.347_125_994_868_138_9, 5.936_840_409_706_221, 6.590_346_245_333_925, 0.0, 0.0, 0.0, 0.0],
        [0.330_753_306_767_140_1, 0.0, 0.0, 0.0, 0.0, 5.956_207_776_829_962, -0.486_831_640_048_152_77, 4.462_055_288_206_771, 0.741_025_823_144_207_2, -0.711_819_203_457_591_3, -5.454_619_594_516_665, -4.140_803_729_244_71, 0.203_831_972_319_038_66, 0.0, 0.0, 0.0],
        [-0.584_711_112_299_894_5, 0.0, 0.0, 0.0, 0.0, -12.412_684_171_162_67, 1.360_245_445_660_928, -22.426_105_311_118_683, -0.882_885_705_586_545_8, 1.770_155_128_538_230_4, 12.158_096_519_185_339, 22.230_375_204_077_607, -0.663_448_376_020_124_9, 0.450_962_378_725_813_74, 0.0, 0.0],
        [1.940_575_549_810_648_7, 0.0, 0.0, 0.0, 0.0, 21.977_984_081_145_564, 0.823_074_732_698_472_9, 68.164_416_836_263_54, -3.117_097_463_620_267, -4.568_841_021_822_44, -18.741_909_871_262_65, -66.577_118_396_378_32, 1.098_915_553_165_441_8, 0.0, 0.0, 0.0]
    ];

/// Row 0 carries the 9th-order weights, row 1 the embedded 8th-order weights.
#[rustfmt::skip]
const B: [[f64; 16]; 2] = [
        [1.500_669_014_979_724_7e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.055_180_992_746_381_3, 0.238_494_726_378_218_3, 0.128_815_177_428_299_15, 0.227_662_311_104_621_57, 1.229_532_587_437_517_4, 4.624_976_662_810_384e-2, 0.138_619_631_936_629_38, 3.080_010_168_319_435_5e-2, 0.0],
        [1.897_210_532_481_101_4e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.408_110_314_549_493_8, 0.126_032_388_382_092_1, 0.118_837_506_345_114_97, 0.249_104_199_783_868_75, -3.269_966_219_928_978_3, 0.302_379_810_022_888_3, 0.0, 0.0, 4.652_989_552_070_924e-2]
    ];

#[rustfmt::skip]
const C: [f64; 16] = [ 0.0, 0.3571e-1, 9.906_028_091_267_415e-2, 0.148_590_421_369_011_2, 0.6134, 0.232_735_947_360_562_7, 0.553_864_052_639_437_3, 0.6555, 0.491625, 0.6858e-1, 0.253, 0.662_064_179_541_204_6, 0.8309, 0.8998, 1.0, 1.0 ];

/// Step control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step magnitude.
    pub h_max: f64,
    /// Initial step magnitude; estimated from the right-hand side when `None`.
    pub h_init: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_max: f64::INFINITY, h_init: None, max_steps: 5_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
}

/// Integrator state that can be advanced in segments without losing the step size.
#[derive(Debug, Clone)]
pub struct Solver<const N: usize> {
    pub t: f64,
    pub x: [f64; N],
    h: Option<f64>,
    opts: OdeOptions,
    pub stats: OdeStats,
}

impl<const N: usize> Solver<N> {
    pub fn new(t0: f64, x0: [f64; N], opts: OdeOptions) -> Self {
        Self { t: t0, x: x0, h: opts.h_init, opts, stats: OdeStats::default() }
    }

    pub fn set_h_max(&mut self, h_max: f64) {
        self.opts.h_max = h_max;
    }

    fn err_norm(&self, x_old: &[f64; N], x_new: &[f64; N], err: &[f64; N]) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            let sc = self.opts.atol + self.opts.rtol * x_old[i].abs().max(x_new[i].abs());
            let e = err[i] / sc;
            s += e * e;
        }
        (s / N as f64).sqrt()
    }

    fn initial_step<F>(&mut self, f: &mut F) -> f64
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let k = f(self.t, &self.x);
        self.stats.evals += 1;
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = self.opts.atol + self.opts.rtol * self.x[i].abs();
            d0 += (self.x[i] / sc).powi(2);
            d1 += (k[i] / sc).powi(2);
        }
        let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(self.opts.h_max)
    }

    /// One attempted step of signed size `h`; returns the new state and the error estimate.
    fn try_step<F>(&mut self, f: &mut F, h: f64) -> ([f64; N], [f64; N])
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let mut k = [[0.0; N]; 16];
        for s in 0..16 {
            let mut xs = self.x;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        xs[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(self.t + C[s] * h, &xs);
        }
        self.stats.evals += 16;
        let mut x_new = self.x;
        let mut err = [0.0; N];
        for s in 0..16 {
            let (b9, b8) = (B[0][s], B[1][s]);
            if b9 == 0.0 && b8 == 0.0 {
                continue;
            }
            for i in 0..N {
                x_new[i] += h * b9 * k[s][i];
                err[i] += h * (b9 - b8) * k[s][i];
            }
        }
        (x_new, err)
    }

    /// Advances to `t_end` exactly, calling `observer` after every accepted step.
    pub fn advance<F, O>(&mut self, f: &mut F, t_end: f64, observer: &mut O) -> Result<()>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N]),
    {
        if t_end == self.t {
            return Ok(());
        }
        let dir = (t_end - self.t).signum();
        let mut h = match self.h {
            Some(h) => h.min(self.opts.h_max),
            None => self.initial_step(f),
        };
        let mut last_rejected = false;
        loop {
            let remaining = (t_end - self.t).abs();
            if remaining <= 0.0 {
                break;
            }
            let hit_end = h >= remaining;
            let h_try = if hit_end { remaining } else { h };
            let h_floor = 1e-14 * self.t.abs().max(1.0);
            if h_try < h_floor && !hit_end {
                return Err(Error::StepUnderflow { y: self.t, h: h_try });
            }
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(Error::NoConvergence {
                    what: format!("step budget of {} exhausted at t = {}", self.opts.max_steps, self.t),
                    last: self.x.to_vec(),
                });
            }
            let (x_new, err) = self.try_step(f, dir * h_try);
            let en = self.err_norm(&self.x, &x_new, &err);
            if !en.is_finite() {
                self.stats.rejected += 1;
                h = 0.2 * h_try;
                last_rejected = true;
                continue;
            }
            let mut fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-1.0 / 9.0)).clamp(0.2, 5.0) };
            if en <= 1.0 {
                self.stats.accepted += 1;
                self.t = if hit_end { t_end } else { self.t + dir * h_try };
                self.x = x_new;
                observer(self.t, &self.x);
                if last_rejected {
                    fac = fac.min(1.0);
                }
                last_rejected = false;
                // A step clipped to reach the end says little about the natural size.
                if !hit_end || h_try >= h {
                    h = (h_try * fac).min(self.opts.h_max);
                }
                if hit_end {
                    break;
                }
            } else {
                self.stats.rejected += 1;
                last_rejected = true;
                h = h_try * fac.min(1.0);
            }
        }
        self.h = Some(h);
        Ok(())
    }
}

/// Integrates from `t0` to `t1` and returns the final state.
pub fn integrate<const N: usize, F>(f: &mut F, t0: f64, x0: [f64; N], t1: f64, opts: OdeOptions) -> Result<([f64; N], OdeStats)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut s = Solver::new(t0, x0, opts);
    s.advance(f, t1, &mut |_, _| {})?;
    Ok((s.x, s.stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tableau_is_consistent() {
        for s in 0..16 {
            let row: f64 = A[s].iter().sum();
            assert!((row - C[s]).abs() < 1e-13, "row {s}");
        }
        for b in B {
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            // Quadrature conditions Σ b c^q = 1/(q+1) up to order 8.
            for q in 1..8 {
                let v: f64 = (0..16).map(|s| b[s] * C[s].powi(q)).sum();
                assert!((v - 1.0 / (q as f64 + 1.0)).abs() < 1e-12, "q = {q}");
            }
        }
    }

    #[test]
    fn harmonic_oscillator_to_tolerance() {
        let mut f = |_t: f64, x: &[f64; 2]| [x[1], -x[0]];
        let (x, stats) = integrate(&mut f, 0.0, [1.0, 0.0], 100.0, OdeOptions::default()).unwrap();
        assert!((x[0] - 100f64.cos()).abs() < 1e-8);
        assert!((x[1] + 100f64.sin()).abs() < 1e-8);
        assert!(stats.accepted > 10);
    }

    #[test]
    fn backward_direction() {
        let mut f = |_t: f64, x: &[f64; 1]| [x[0]];
        let (x, _) = integrate(&mut f, 0.0, [1.0], -5.0, OdeOptions::default()).unwrap();
        assert!((x[0] - (-5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_data_stays_zero() {
        let mut f = |_t: f64, x: &[f64; 2]| [x[1], -x[0]];
        let (x, _) = integrate(&mut f, 0.0, [0.0, 0.0], 10.0, OdeOptions::default()).unwrap();
        assert_eq!(x, [0.0, 0.0]);
    }

    #[test]
    fn blow_up_reports_underflow() {
        let mut f = |_t: f64, x: &[f64; 1]| [x[0] * x[0]];
        let r = integrate(&mut f, 0.0, [1.0], 2.0, OdeOptions::default());
        assert!(r.is_err());
    }
}
