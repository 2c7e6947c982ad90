//! Quadrature on the canonical triangle and on `[-1, 1]`.
//!
//! Interior rules are fully symmetric (invariant under the vertex
//! permutations of the triangle), have positive weights and strictly interior
//! points. They are stored as barycentric orbits and expanded on demand. The
//! orbit data was produced by `scripts/triangle_rules.py` (moment equations
//! solved to 50 digits) and is checked here against the closed-form monomial
//! moments `a! b! / (a + b + 2)!`.
//!
//! Weights sum to the area of the canonical triangle, `1/2`.

use super::BasisError;

/// Barycentric orbit of a symmetric rule.
#[derive(Debug, Clone, Copy)]
enum Orbit {
    /// The centroid.
    Centroid { w: f64 },
    /// Three points `(a, a, 1 - 2a)` and permutations.
    S21 { a: f64, w: f64 },
    /// Six points `(a, b, 1 - a - b)` and permutations.
    S111 { a: f64, b: f64, w: f64 },
}

const DEGREE_2: &[Orbit] = &[Orbit::S21 {
    a: 1.0 / 6.0,
    w: 1.0 / 6.0,
}];

const DEGREE_4: &[Orbit] = &[
    Orbit::S21 {
        a: 0.091_576_213_509_770_743_46,
        w: 0.054_975_871_827_660_933_819,
    },
    Orbit::S21 {
        a: 0.445_948_490_915_964_886_32,
        w: 0.111_690_794_839_005_732_85,
    },
];

const DEGREE_6: &[Orbit] = &[
    Orbit::S21 {
        a: 0.063_089_014_491_502_228_34,
        w: 0.025_422_453_185_103_408_46,
    },
    Orbit::S21 {
        a: 0.249_286_745_170_910_421_29,
        w: 0.058_393_137_863_189_683_013,
    },
    Orbit::S111 {
        a: 0.310_352_451_033_784_405_42,
        b: 0.636_502_499_121_398_647_23,
        w: 0.041_425_537_809_186_787_597,
    },
];

const DEGREE_8: &[Orbit] = &[
    Orbit::Centroid {
        w: 0.072_157_803_838_893_584_126,
    },
    Orbit::S21 {
        a: 0.050_547_228_317_030_975_458,
        w: 0.016_229_248_811_599_040_155,
    },
    Orbit::S21 {
        a: 0.459_292_588_292_723_156_03,
        w: 0.047_545_817_133_642_312_397,
    },
    Orbit::S21 {
        a: 0.170_569_307_751_760_206_62,
        w: 0.051_608_685_267_359_125_141,
    },
    Orbit::S111 {
        a: 0.728_492_392_955_404_281_24,
        b: 0.263_112_829_634_638_113_42,
        w: 0.013_615_157_087_217_497_132,
    },
];

const DEGREE_10: &[Orbit] = &[
    Orbit::Centroid {
        w: 0.013_806_435_488_560_442_741,
    },
    Orbit::S21 {
        a: 0.433_869_340_209_201_760_77,
        w: 0.031_764_005_632_129_862_97,
    },
    Orbit::S21 {
        a: 0.023_721_681_883_798_807_906,
        w: 0.004_153_665_553_433_940_994_7,
    },
    Orbit::S21 {
        a: 0.279_562_232_095_581_491_91,
        w: 0.018_006_172_122_858_083_447,
    },
    Orbit::S111 {
        a: 0.638_721_477_997_386_059_81,
        b: 0.135_705_084_566_967_440_81,
        w: 0.022_356_403_001_123_038_863,
    },
    Orbit::S111 {
        a: 0.026_720_645_359_469_708_669,
        b: 0.358_585_517_469_139_268,
        w: 0.016_871_777_165_239_259_893,
    },
    Orbit::S111 {
        a: 0.823_049_058_293_693_226_32,
        b: 0.142_151_468_231_244_223_82,
        w: 0.014_842_158_931_333_350_414,
    },
];

fn orbits_for_degree(degree: usize) -> Option<&'static [Orbit]> {
    match degree {
        2 => Some(DEGREE_2),
        4 => Some(DEGREE_4),
        6 => Some(DEGREE_6),
        8 => Some(DEGREE_8),
        10 => Some(DEGREE_10),
        _ => None,
    }
}

/// A quadrature rule: points in reference coordinates and their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<P> {
    pub points: Vec<P>,
    pub weights: Vec<f64>,
}

impl<P> Rule<P> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Symmetric rule on the canonical triangle exact for total degree `2p`.
pub fn interior_quadrature(p: usize) -> Result<Rule<[f64; 2]>, BasisError> {
    if !(1..=super::MAX_DEGREE).contains(&p) {
        return Err(BasisError::UnsupportedDegree(p));
    }
    let orbits = orbits_for_degree(2 * p).ok_or(BasisError::UnsupportedDegree(p))?;
    Ok(expand(orbits))
}

fn expand(orbits: &[Orbit]) -> Rule<[f64; 2]> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    // (r, s) = (lambda_2, lambda_3); lambda_1 = 1 - r - s
    let mut push = |l: [f64; 3], w: f64| {
        points.push([l[1], l[2]]);
        weights.push(w);
    };
    for orbit in orbits {
        match *orbit {
            Orbit::Centroid { w } => push([1.0 / 3.0; 3], w),
            Orbit::S21 { a, w } => {
                let b = 1.0 - 2.0 * a;
                push([a, a, b], w);
                push([a, b, a], w);
                push([b, a, a], w);
            }
            Orbit::S111 { a, b, w } => {
                let c = 1.0 - a - b;
                for l in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                    push(l, w);
                }
            }
        }
    }
    Rule { points, weights }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
///
/// Exact for polynomials of degree `2n - 1`. Nodes are symmetric:
/// `nodes[k] == -nodes[n - 1 - k]` to rounding.
pub fn gauss_legendre(n: usize) -> Rule<f64> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess for the (i+1)-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule {
        points: nodes,
        weights,
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
