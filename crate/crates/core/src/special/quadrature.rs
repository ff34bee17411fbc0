//! Globally adaptive Gauss–Kronrod (G7/K15) quadrature for complex-valued
//! integrands that return several components at once.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
#[allow(clippy::excessive_precision)]
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_94, 0.417_959_183_673_469_4];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<const N: usize> {
    pub value: [Complex64; N],
    /// Estimated absolute error, summed over components.
    pub error: f64,
    /// Σᵢ ∫|fᵢ|, the scale for relative tolerances.
    pub l1: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: f64,
    l1: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Segment<N> {}
impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Segment<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<const N: usize, F>(f: &F, a: f64, b: f64) -> Segment<N>
where
    F: Fn(f64) -> [Complex64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = [Complex64::new(0.0, 0.0); N];
    let mut kron = zero;
    let mut gauss = zero;
    let mut l1 = 0.0;

    let fc = f(center);
    for i in 0..N {
        kron[i] = fc[i] * WGK[7];
        gauss[i] = fc[i] * WG[3];
    }
    l1 += fc.iter().map(|v| v.norm()).sum::<f64>() * WGK[7];

    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for i in 0..N {
            let s = f1[i] + f2[i];
            kron[i] += s * WGK[j];
            if j % 2 == 1 {
                gauss[i] += s * WG[j / 2];
            }
        }
        l1 += f1.iter().chain(f2.iter()).map(|v| v.norm()).sum::<f64>() * WGK[j];
    }

    let mut error = 0.0;
    for i in 0..N {
        kron[i] *= half;
        gauss[i] *= half;
        error += (kron[i] - gauss[i]).norm();
    }
    Segment { a, b, value: kron, error, l1: l1 * half.abs() }
}

/// Integrates `f` over `[a, b]`, bisecting the worst segment until the summed
/// error estimate falls below `rel_tol · Σᵢ∫|fᵢ|` (or `abs_tol`, whichever is
/// larger), or `max_segments` is reached.
pub fn integrate<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Quadrature<N>
where
    F: Fn(f64) -> [Complex64; N],
{
    integrate_with_breaks(f, &[a, b], rel_tol, abs_tol, max_segments)
}

/// As [`integrate`], over `[points[0], points[last]]` with the interior points
/// used as forced segment boundaries (kinks of the integrand go there).
pub fn integrate_with_breaks<const N: usize, F>(
    f: F,
    points: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Quadrature<N>
where
    F: Fn(f64) -> [Complex64; N],
{
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    // start from a modest uniform partition of each piece so oscillatory
    // tails are seen
    let per_piece = 4;
    for pair in points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let width = (b - a) / per_piece as f64;
        for i in 0..per_piece {
            let lo = a + width * i as f64;
            let hi = if i + 1 == per_piece { b } else { lo + width };
            heap.push(kronrod15(&f, lo, hi));
        }
    }
    let initial = heap.len();
    let mut evaluations = 15 * initial;

    loop {
        let mut total_error = 0.0;
        let mut total_l1 = 0.0;
        for s in heap.iter() {
            total_error += s.error;
            total_l1 += s.l1;
        }
        let tolerance = abs_tol.max(rel_tol * total_l1);
        let converged = total_error <= tolerance;
        if converged || heap.len() >= max_segments {
            let mut value = [Complex64::new(0.0, 0.0); N];
            for s in heap.iter() {
                for (v, part) in value.iter_mut().zip(&s.value) {
                    *v += part;
                }
            }
            return Quadrature { value, error: total_error, l1: total_l1, evaluations, converged };
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in f64
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        evaluations += 30;
    }
}
