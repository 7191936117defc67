//! Gauss–Kronrod and Gauss–Legendre quadrature.
//!
//! `adaptive` is a globally adaptive 15-point Gauss–Kronrod integrator in the
//! QUADPACK tradition: bisect the interval carrying the largest error estimate
//! until the summed estimate meets the tolerance. `gauss_legendre_32` is a
//! fixed 32-point rule for integrands known to be smooth on the cell.

use crate::math;
use crate::Error;
use alloc::vec::Vec;

// 15-point Kronrod abscissae (positive half), QUADPACK qk15.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

// Embedded 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_97,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

// 15-point Kronrod weights.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

// 32-point Gauss–Legendre rule on [-1, 1], positive-half (node, weight) pairs.
#[allow(clippy::excessive_precision)]
pub(crate) const GL32: [(f64, f64); 16] = [
    (9.972_638_618_494_815_7e-1, 7.018_610_009_470_136_3e-3),
    (9.856_115_115_452_683_8e-1, 1.627_439_473_090_570_9e-2),
    (9.647_622_555_875_063_9e-1, 2.539_206_530_926_213_9e-2),
    (9.349_060_759_377_396_7e-1, 3.427_386_291_302_141_1e-2),
    (8.963_211_557_660_520_9e-1, 4.283_589_802_222_670_4e-2),
    (8.493_676_137_325_699_7e-1, 5.099_805_926_237_615_4e-2),
    (7.944_837_959_679_423_9e-1, 5.868_409_347_853_557_9e-2),
    (7.321_821_187_402_897_1e-1, 6.582_222_277_636_194_7e-2),
    (6.630_442_669_302_152_3e-1, 7.234_579_410_884_861_6e-2),
    (5.877_157_572_407_623_0e-1, 7.819_389_578_707_043_6e-2),
    (5.068_999_089_322_293_6e-1, 8.331_192_422_694_672_1e-2),
    (4.213_512_761_306_353_3e-1, 8.765_209_300_440_374_2e-2),
    (3.318_686_022_821_276_7e-1, 9.117_387_869_576_390_5e-2),
    (2.392_873_622_521_370_7e-1, 9.384_439_908_080_453_9e-2),
    (1.444_719_615_827_964_9e-1, 9.563_872_007_927_484_7e-2),
    (4.830_766_568_773_830_3e-2, 9.654_008_851_472_785_4e-2),
];

/// Value and error estimate of a quadrature pass.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = math::abs(err);
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = math::powf(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Gauss–Kronrod pass over [a, b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> QuadResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = math::abs(res_kronrod);
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    for (j, wg) in WG.iter().enumerate().take(3) {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += wg * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (math::abs(f1) + math::abs(f2));
    }
    res_gauss += WG[3] * f_center;

    for j in 0..4 {
        let jtw = 2 * j;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (math::abs(f1) + math::abs(f2));
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * math::abs(f_center - mean);
    for j in 0..7 {
        res_asc += WGK[j] * (math::abs(fv1[j] - mean) + math::abs(fv2[j] - mean));
    }

    let err = (res_kronrod - res_gauss) * half;
    QuadResult {
        value: res_kronrod * half,
        abs_err: rescale_error(err, res_abs * math::abs(half), res_asc * math::abs(half)),
    }
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Globally adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Bisects the worst interval until the total error estimate drops below
/// `max(abs_tol, rel_tol * |integral|)`; fails after `max_intervals`
/// subdivisions.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
    context: &'static str,
) -> Result<QuadResult, Error> {
    adaptive_with_breaks(f, &[a, b], abs_tol, rel_tol, max_intervals, context)
}

/// Adaptive integration seeded with initial breakpoints.
///
/// Narrow features invisible to a single 15-point pass over the whole range
/// must be bracketed by the seed panels, which are then refined globally.
pub fn adaptive_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
    context: &'static str,
) -> Result<QuadResult, Error> {
    debug_assert!(breaks.len() >= 2);
    let mut intervals = Vec::with_capacity(64);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a == b {
            continue;
        }
        let r = gk15(&f, a, b);
        intervals.push(Interval {
            a,
            b,
            value: r.value,
            err: r.abs_err,
        });
    }
    if intervals.is_empty() {
        return Ok(QuadResult {
            value: 0.0,
            abs_err: 0.0,
        });
    }

    loop {
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut worst = 0usize;
        let mut worst_err = -1.0;
        for (i, iv) in intervals.iter().enumerate() {
            total += iv.value;
            total_err += iv.err;
            if iv.err > worst_err {
                worst_err = iv.err;
                worst = i;
            }
        }
        if total_err <= abs_tol.max(rel_tol * math::abs(total)) {
            return Ok(QuadResult {
                value: total,
                abs_err: total_err,
            });
        }
        if intervals.len() >= max_intervals {
            return Err(Error::Quadrature { context });
        }
        let Interval { a: wa, b: wb, .. } = intervals[worst];
        let mid = 0.5 * (wa + wb);
        if mid <= wa.min(wb) || mid >= wa.max(wb) {
            // interval narrower than machine resolution; cannot improve
            return Err(Error::Quadrature { context });
        }
        let left = gk15(&f, wa, mid);
        let right = gk15(&f, mid, wb);
        intervals[worst] = Interval {
            a: wa,
            b: mid,
            value: left.value,
            err: left.abs_err,
        };
        intervals.push(Interval {
            a: mid,
            b: wb,
            value: right.value,
            err: right.abs_err,
        });
    }
}

/// Fixed 32-point Gauss–Legendre rule over [a, b].
pub fn gauss_legendre_32<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in GL32.iter() {
        let dx = half * x;
        acc += w * (f(center - dx) + f(center + dx));
    }
    acc * half
}
