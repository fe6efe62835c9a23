//! Standard normal helpers: density, CDF and inverse CDF.

use crate::error::{Error, Result};
use crate::real::Real;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_868_5;

/// Lower clamp for the inverse CDF. Plotting positions for n <= 1e6 never get near it.
const QUANTILE_P_MIN: f64 = 1e-300;
const QUANTILE_P_MAX: f64 = 1.0 - 1e-16;

pub fn std_normal_pdf<T: Real>(z: T) -> T {
    T::lit(FRAC_1_SQRT_2PI) * (-(z * z) / T::lit(2.0)).exp()
}

/// Φ(z), computed as `erfc(-z/√2) / 2` so both tails keep relative accuracy.
pub fn std_normal_cdf<T: Real>(z: T) -> Result<T> {
    if !z.is_finite() {
        return Err(Error::Domain {
            what: "normal cdf argument",
            value: z.as_f64(),
        });
    }
    Ok(cdf_unchecked(z))
}

#[inline]
pub(crate) fn cdf_unchecked<T: Real>(z: T) -> T {
    (-z * T::lit(std::f64::consts::FRAC_1_SQRT_2)).erfc() / T::lit(2.0)
}

/// Φ⁻¹(p) for `0 < p < 1`.
///
/// Wichura's AS 241 (PPND16) rational approximations, about 1e-16 relative
/// accuracy in double precision. Inputs are clamped to `[1e-300, 1 - 1e-16]`
/// before evaluation.
pub fn std_normal_quantile<T: Real>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::Domain {
            what: "probability",
            value: p.as_f64(),
        });
    }
    Ok(quantile_unchecked(p))
}

#[allow(clippy::excessive_precision)]
mod as241 {
    pub const SPLIT1: f64 = 0.425;
    pub const SPLIT2: f64 = 5.0;
    pub const CONST1: f64 = 0.180625;
    pub const CONST2: f64 = 1.6;

    // |q| <= 0.425
    pub const A: [f64; 8] = [
        3.387_132_872_796_366_608_0E0,
        1.331_416_678_917_843_774_5E2,
        1.971_590_950_306_551_442_7E3,
        1.373_169_376_550_946_112_5E4,
        4.592_195_393_154_987_145_7E4,
        6.726_577_092_700_870_085_3E4,
        3.343_057_558_358_812_810_5E4,
        2.509_080_928_730_122_672_7E3,
    ];
    pub const B: [f64; 8] = [
        1.0,
        4.231_333_070_160_091_125_2E1,
        6.871_870_074_920_579_083_0E2,
        5.394_196_021_424_751_107_7E3,
        2.121_379_430_158_659_586_7E4,
        3.930_789_580_009_271_061_0E4,
        2.872_908_573_572_194_267_4E4,
        5.226_495_278_852_854_561_0E3,
    ];
    // r = sqrt(-ln(min(p, 1-p))) <= 5
    pub const C: [f64; 8] = [
        1.423_437_110_749_683_577_34E0,
        4.630_337_846_156_545_295_90E0,
        5.769_497_221_460_691_405_50E0,
        3.647_848_324_763_204_605_04E0,
        1.270_458_252_452_368_382_58E0,
        2.417_807_251_774_506_117_70E-1,
        2.272_384_498_926_918_458_33E-2,
        7.745_450_142_783_414_076_40E-4,
    ];
    pub const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_758_821_87E0,
        1.676_384_830_183_803_849_40E0,
        6.897_673_349_851_000_045_50E-1,
        1.481_039_764_274_800_745_90E-1,
        1.519_866_656_361_645_719_66E-2,
        5.475_938_084_995_344_946_00E-4,
        1.050_750_071_644_416_843_24E-9,
    ];
    // r > 5
    pub const E: [f64; 8] = [
        6.657_904_643_501_103_777_20E0,
        5.463_784_911_164_114_369_90E0,
        1.784_826_539_917_291_335_80E0,
        2.965_605_718_285_048_912_30E-1,
        2.653_218_952_657_612_309_30E-2,
        1.242_660_947_388_078_438_60E-3,
        2.711_555_568_743_487_578_15E-5,
        2.010_334_399_292_288_132_65E-7,
    ];
    pub const F: [f64; 8] = [
        1.0,
        5.998_322_065_558_879_376_90E-1,
        1.369_298_809_227_358_053_10E-1,
        1.487_536_129_085_061_485_25E-2,
        7.868_691_311_456_132_591_00E-4,
        1.846_318_317_510_054_681_80E-5,
        1.421_511_758_316_445_888_70E-7,
        2.044_263_103_389_939_785_64E-15,
    ];
}

#[inline]
fn horner<T: Real>(coef: &[f64; 8], x: T) -> T {
    coef.iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * x + T::lit(c))
}

#[inline]
pub(crate) fn quantile_unchecked<T: Real>(p: T) -> T {
    use as241::*;

    let lo = T::lit(QUANTILE_P_MIN).max(T::min_positive_value());
    let hi = T::lit(QUANTILE_P_MAX);
    let p = p.max(lo).min(hi);

    let q = p - T::lit(0.5);
    if q.abs() <= T::lit(SPLIT1) {
        let r = T::lit(CONST1) - q * q;
        return q * horner(&A, r) / horner(&B, r);
    }
    let tail = if q < T::zero() { p } else { T::one() - p };
    let mut r = (-tail.ln()).sqrt();
    let z = if r <= T::lit(SPLIT2) {
        r = r - T::lit(CONST2);
        horner(&C, r) / horner(&D, r)
    } else {
        r = r - T::lit(SPLIT2);
        horner(&E, r) / horner(&F, r)
    };
    if q < T::zero() {
        -z
    } else {
        z
    }
}
