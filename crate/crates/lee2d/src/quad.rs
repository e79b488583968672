//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands.
//!
//! This is the main-path integrator: worst-interval-first bisection with a
//! 21-point Kronrod rule per interval and the embedded 10-point Gauss rule as
//! the error reference. The independent oracle integrator (fixed-order
//! composite rule plus Richardson extrapolation) lives in `verify` so the two
//! routes share no machinery beyond the integrand closures.

// The node and weight tables keep the full published precision.
#![allow(clippy::excessive_precision)]

use num_complex::Complex64;

use crate::error::{Error, Result};

// 21-point Kronrod abscissae on [-1, 1]; odd indices are the embedded
// 10-point Gauss nodes. Standard QUADPACK constants.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AdaptiveOpts {
    /// Relative error target.
    pub rel_tol: f64,
    /// Relative error still accepted once the interval budget is exhausted.
    pub accept_rel_tol: f64,
    /// Absolute floor below which the relative criteria are moot.
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveOpts {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            accept_rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_intervals: 4000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = Complex64::new(0.0, 0.0);
    for (j, &wg) in WG.iter().enumerate() {
        // Gauss node pair (shared with Kronrod).
        let idx = 2 * j + 1;
        let dx = half * XGK[idx];
        let fsum = f(center - dx) + f(center + dx);
        gauss += wg * fsum;
        kronrod += WGK[idx] * fsum;
        // Kronrod-only node pair.
        let idx = 2 * j;
        let dx = half * XGK[idx];
        kronrod += WGK[idx] * (f(center - dx) + f(center + dx));
    }
    let value = kronrod * half;
    let error = (kronrod - gauss).norm() * half.abs();
    (value, error)
}

/// Integrates `f` over the union of `[breakpoints[i], breakpoints[i+1]]`.
///
/// Breakpoints must be sorted ascending; duplicates collapse to nothing.
/// Callers list every known singular or non-smooth point of the integrand as
/// a breakpoint so no quadrature node ever lands on it (Kronrod nodes are
/// strictly interior).
pub(crate) fn adaptive_gk<F: Fn(f64) -> Complex64>(
    f: F,
    breakpoints: &[f64],
    opts: &AdaptiveOpts,
) -> Result<Complex64> {
    debug_assert!(breakpoints.len() >= 2);
    let mut segments: Vec<Segment> = Vec::new();
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk21(&f, w[0], w[1]);
            segments.push(Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    if segments.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    loop {
        let total: Complex64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok(total);
        }
        if segments.len() >= opts.max_intervals {
            if err <= opts.abs_tol.max(opts.accept_rel_tol * total.norm()) {
                return Ok(total);
            }
            let scale = total.norm().max(f64::MIN_POSITIVE);
            return Err(Error::QuadratureFailure {
                tolerance: opts.accept_rel_tol,
                error: err / scale,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if !(seg.a < mid && mid < seg.b) {
            // Interval at floating-point resolution: keep it, accept its error.
            let mut seg = seg;
            seg.error = 0.0;
            segments.push(seg);
            continue;
        }
        let (lv, le) = gk21(&f, seg.a, mid);
        let (rv, re) = gk21(&f, mid, seg.b);
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
        });
    }
}
