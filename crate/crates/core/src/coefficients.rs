//! Coefficient tables for the catalog schemes.
//!
//! The `AbaTable` entries list the first half of a palindromic
//! `A B A ... B A` scheme: drift coefficients `a[0..]` interleaved with kick
//! coefficients `b[0..]`. The middle stage is the last drift when `a` is one
//! longer than `b`, and the last kick when both have equal length. Every table is
//! checked by `scheme::validate` (sums, symmetry) and, in the test suite, by the
//! order conditions it is supposed to satisfy.

#![allow(clippy::excessive_precision)]

/// Drift and kick coefficients of the first half of a symmetric ABA scheme.
#[derive(Debug, Clone, Copy)]
pub struct AbaTable {
    pub a: &'static [f64],
    pub b: &'static [f64],
}

/// `(c1, c2, d1)` of `A(c1) B(d1) A(c2) B(d1) A(c1)`.
pub fn saba2() -> (f64, f64, f64) {
    let s3 = 3f64.sqrt();
    (0.5 - 0.5 / s3, 1.0 / s3, 0.5)
}

/// `(c1, c2, d1)` of `B(c1) A(d1) B(c2) A(d1) B(c1)`.
pub fn sbab2() -> (f64, f64, f64) {
    (1.0 / 6.0, 2.0 / 3.0, 0.5)
}

/// Corrector constant `c` of SABA2; the corrector flow runs for `-c/2 tau^3`.
pub fn saba2_corrector() -> f64 {
    (2.0 - 3f64.sqrt()) / 24.0
}

pub fn sbab2_corrector() -> f64 {
    1.0 / 72.0
}

/// Outer and inner step fractions `(w1, w0)` of the triple-jump leapfrog,
/// `w1 = 1 / (2 - 2^(1/3))`, `w0 = 1 - 2 w1`.
pub fn sz4_weights() -> (f64, f64) {
    let w1 = 1.0 / (2.0 - 2f64.cbrt());
    (w1, 1.0 - 2.0 * w1)
}

/// Forest-Ruth `theta = 1 / (2 - 2^(1/3))`.
pub fn forest_ruth_theta() -> f64 {
    1.0 / (2.0 - 2f64.cbrt())
}

/// Generalized order (8,2), 9 stages. Kicks sit at the 4-point Gauss-Legendre
/// nodes with Gauss weights (Blanes, Casas, Farres, Laskar, Makazaga, Murua,
/// Appl. Numer. Math. 68 (2013); identical to Laskar-Robutel SABA4).
pub const ABA82: AbaTable = AbaTable {
    a: &[
        0.069_431_844_202_973_712_388_026_755_553_595_247_452,
        0.260_577_634_004_598_155_210_640_364_894_782_408_948,
        0.339_981_043_584_856_264_802_665_759_103_244_687_201,
    ],
    b: &[
        0.173_927_422_568_726_928_686_531_974_610_999_703_618,
        0.326_072_577_431_273_071_313_468_025_389_000_296_382,
    ],
};

/// Generalized order (8,6,4), 15 stages (Blanes et al. 2013).
pub const ABA864: AbaTable = AbaTable {
    a: &[
        0.071_133_426_498_223_117_777_938_730_006_154_996_417_4,
        0.241_153_427_956_640_098_736_487_795_326_289_649_618,
        0.521_411_761_772_814_789_212_136_078_067_994_229_991,
        -0.333_698_616_227_678_005_726_562_603_400_438_876_027,
    ],
    b: &[
        0.183_083_687_472_197_221_961_703_757_166_430_291_072,
        0.310_782_859_898_574_869_507_522_291_054_262_796_375,
        -0.026_564_618_511_958_800_697_212_137_916_498_759_266_3,
        0.065_396_142_282_373_418_455_972_179_391_611_343_638_6,
    ],
};

/// Generalized order (8,6,4), 17 stages, additionally cancelling the
/// `[B,[B,[B,[B,A]]]]` term of the modified Hamiltonian so that the scheme keeps
/// its generalized order when the perturbation also depends on momenta. The
/// values are the real root of that polynomial system (consistency, kick
/// quadrature exact to degree 7, vanishing `eps^2` terms to `tau^5`, the extra
/// `eps^4` condition) with the smallest leading `eps^3 tau^4` coefficients,
/// solved to 40 digits.
pub const ABAH864: AbaTable = AbaTable {
    a: &[
        0.072_447_679_136_108_165_401_692_080_558_762_755_531_36,
        0.283_757_212_328_811_431_694_491_905_257_288_179_333_9,
        -0.018_620_351_120_799_813_596_600_019_329_090_058_221_11,
        0.523_073_913_468_273_859_718_754_868_112_718_249_078_5,
        -0.721_316_907_624_787_286_436_677_669_199_358_251_445_2,
    ],
    b: &[
        0.187_933_188_496_262_045_283_836_160_380_070_071_483_2,
        -0.165_577_040_578_295_380_067_038_767_869_463_763_765_3,
        0.495_616_881_360_041_280_893_759_801_988_762_165_191_3,
        -0.017_973_029_278_007_946_110_557_194_499_368_472_909_2,
    ],
};
