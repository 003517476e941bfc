//! Adaptive Gauss–Kronrod (7/15) quadrature: scalar, vector-valued and
//! nested two-dimensional, on finite or (semi-)infinite intervals.
//!
//! Infinite ends are handled by `x = a + t/(1−t)` style maps, so no
//! truncation of the domain happens anywhere.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule: `error ≤ max(abs, rel·|value|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-10, abs: 0.0, max_intervals: 4000 }
    }
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance { rel, ..Default::default() }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

// One piece of the domain after mapping onto a finite parameter interval.
#[derive(Clone, Copy, Debug)]
enum Segment {
    Finite,
    // [a, ∞): x = a + t/(1−t), t ∈ [0,1)
    Upper(f64),
    // (−∞, b]: x = b − t/(1−t)
    Lower(f64),
}

impl Segment {
    #[inline]
    fn eval<F: FnMut(f64) -> f64>(self, f: &mut F, t: f64) -> f64 {
        match self {
            Segment::Finite => f(t),
            Segment::Upper(a) => {
                let s = 1.0 - t;
                let v = f(a + t / s);
                if v == 0.0 { 0.0 } else { v / (s * s) }
            }
            Segment::Lower(b) => {
                let s = 1.0 - t;
                let v = f(b - t / s);
                if v == 0.0 { 0.0 } else { v / (s * s) }
            }
        }
    }
}

fn segments(points: &[f64]) -> Result<Vec<(Segment, f64, f64)>> {
    if points.len() < 2 {
        return Err(Error::domain("quadrature needs at least two points"));
    }
    let mut out = Vec::with_capacity(points.len());
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.is_nan() || b.is_nan() || !(a <= b) {
            return Err(Error::domain(format!("bad integration limits [{a}, {b}]")));
        }
        match (a.is_finite(), b.is_finite()) {
            (true, true) => {
                if a < b {
                    out.push((Segment::Finite, a, b))
                }
            }
            (true, false) => out.push((Segment::Upper(a), 0.0, 1.0)),
            (false, true) => out.push((Segment::Lower(b), 0.0, 1.0)),
            (false, false) => {
                out.push((Segment::Lower(0.0), 0.0, 1.0));
                out.push((Segment::Upper(0.0), 0.0, 1.0));
            }
        }
    }
    Ok(out)
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, seg: Segment, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = seg.eval(f, c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = seg.eval(f, c - dx);
        let f2 = seg.eval(f, c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

struct Piece {
    seg: Segment,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Integrate `f` over `[a, b]`; either end may be infinite.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_points(f, &[a, b], tol)
}

/// Integrate over `[p_0, p_last]` with the interior points as initial
/// breakpoints (kinks, peaks). Ends may be infinite.
pub fn integrate_points<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    for (seg, a, b) in segments(points)? {
        let (value, error) = gk15(&mut f, seg, a, b);
        heap.push(Piece { seg, a, b, value, error });
    }
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature { estimate: value, error, intervals: heap.len() });
        }
        if error <= tol.target(value) {
            return Ok(Estimate { value, error });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature { estimate: value, error, intervals: heap.len() });
        }
        let worst = heap.pop().expect("non-empty");
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) {
            // interval exhausted in floating point; accept what we have
            heap.push(Piece { error: 0.0, ..worst });
            continue;
        }
        for (a, b) in [(worst.a, m), (m, worst.b)] {
            let (value, error) = gk15(&mut f, worst.seg, a, b);
            heap.push(Piece { seg: worst.seg, a, b, value, error });
        }
    }
}

fn gk15_vec<F: FnMut(f64, &mut [f64])>(
    f: &mut F,
    seg: Segment,
    a: f64,
    b: f64,
    dim: usize,
    buf: &mut [f64],
) -> (Vec<f64>, Vec<f64>) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut resk = vec![0.0; dim];
    let mut resg = vec![0.0; dim];
    let mut eval = |t: f64, buf: &mut [f64]| -> f64 {
        let (x, jac) = match seg {
            Segment::Finite => (t, 1.0),
            Segment::Upper(a0) => {
                let s = 1.0 - t;
                (a0 + t / s, 1.0 / (s * s))
            }
            Segment::Lower(b0) => {
                let s = 1.0 - t;
                (b0 - t / s, 1.0 / (s * s))
            }
        };
        f(x, buf);
        jac
    };
    let jac = eval(c, buf);
    for i in 0..dim {
        let v = buf[i] * jac;
        resk[i] += WGK[7] * v;
        resg[i] += WG[3] * v;
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        for t in [c - dx, c + dx] {
            let jac = eval(t, buf);
            for i in 0..dim {
                let v = if buf[i] == 0.0 { 0.0 } else { buf[i] * jac };
                resk[i] += WGK[j] * v;
                if j % 2 == 1 {
                    resg[i] += WG[j / 2] * v;
                }
            }
        }
    }
    let err = (0..dim).map(|i| ((resk[i] - resg[i]) * h).abs()).collect();
    let val = resk.into_iter().map(|v| v * h).collect();
    (val, err)
}

/// Vector-valued adaptive quadrature: `f(x, out)` fills `dim` components.
type VecPiece = (Segment, f64, f64, Vec<f64>, Vec<f64>);

/// Converges when every component meets the tolerance.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    points: &[f64],
    dim: usize,
    tol: Tolerance,
) -> Result<Vec<Estimate>> {
    let mut buf = vec![0.0; dim];
    // (segment, a, b, values, errors)
    let mut pieces: Vec<VecPiece> = Vec::new();
    for (seg, a, b) in segments(points)? {
        let (v, e) = gk15_vec(&mut f, seg, a, b, dim, &mut buf);
        pieces.push((seg, a, b, v, e));
    }
    loop {
        let mut value = vec![0.0; dim];
        let mut error = vec![0.0; dim];
        for p in &pieces {
            for i in 0..dim {
                value[i] += p.3[i];
                error[i] += p.4[i];
            }
        }
        let target: Vec<f64> = value.iter().map(|&v| tol.target(v).max(f64::MIN_POSITIVE)).collect();
        let worst_ratio = (0..dim).map(|i| error[i] / target[i]).fold(0.0, f64::max);
        if !worst_ratio.is_finite() {
            return Err(Error::Quadrature { estimate: value[0], error: f64::NAN, intervals: pieces.len() });
        }
        if worst_ratio <= 1.0 {
            return Ok(value
                .into_iter()
                .zip(error)
                .map(|(value, error)| Estimate { value, error })
                .collect());
        }
        if pieces.len() >= tol.max_intervals {
            let i = (0..dim).max_by(|&i, &j| (error[i] / target[i]).total_cmp(&(error[j] / target[j]))).unwrap_or(0);
            return Err(Error::Quadrature { estimate: value[i], error: error[i], intervals: pieces.len() });
        }
        let score = |p: &(Segment, f64, f64, Vec<f64>, Vec<f64>)| -> f64 {
            (0..dim).map(|i| p.4[i] / target[i]).sum()
        };
        let (wi, _) = pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (i, score(p)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        let (seg, a, b, _, _) = pieces.swap_remove(wi);
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            return Err(Error::Quadrature { estimate: value[0], error: error[0], intervals: pieces.len() });
        }
        for (lo, hi) in [(a, m), (m, b)] {
            let (v, e) = gk15_vec(&mut f, seg, lo, hi, dim, &mut buf);
            pieces.push((seg, lo, hi, v, e));
        }
    }
}

/// Nested iterated integral `∫_{xs} ∫_{ys(x)} f(x, y) dy dx`, where the inner
/// breakpoints may depend on the outer variable.
pub fn integrate_2d<F, P>(f: F, xs: &[f64], ys: P, tol: Tolerance) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
    P: Fn(f64) -> Vec<f64>,
{
    let inner_tol = Tolerance { rel: tol.rel * 0.1, abs: tol.abs * 0.1, ..tol };
    let mut failure: Option<Error> = None;
    let outer = integrate_points(
        |x| {
            if failure.is_some() {
                return 0.0;
            }
            match integrate_points(|y| f(x, y), &ys(x), inner_tol) {
                Ok(e) => e.value,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        xs,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => outer,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        // GK15 integrates degree ≤ 22 exactly
        let e = integrate(|x| x.powi(10) - 3.0 * x.powi(3), -1.0, 2.0, Tolerance::default()).unwrap();
        let exact = (2f64.powi(11) + 1.0) / 11.0 - 0.75 * (16.0 - 1.0);
        assert!((e.value - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn semi_infinite_and_doubly_infinite() {
        let e = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, Tolerance::rel(1e-12)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        let g = integrate(|x| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, Tolerance::rel(1e-12)).unwrap();
        assert!((g.value - PI.sqrt()).abs() < 1e-11);
        let l = integrate(|x| 2.0 * (2.0 * x).exp(), f64::NEG_INFINITY, 0.0, Tolerance::rel(1e-12)).unwrap();
        assert!((l.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let e = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, Tolerance::rel(1e-10)).unwrap();
        assert!((e.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn kink_with_breakpoint() {
        let e = integrate_points(|x: f64| x.abs(), &[-1.0, 0.0, 3.0], Tolerance::rel(1e-13)).unwrap();
        assert!((e.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn vector_integrand_matches_scalar() {
        let v = integrate_vec(
            |x, out| {
                out[0] = x.sin();
                out[1] = (-x).exp() * x * x;
                out[2] = 0.0;
            },
            &[0.0, PI],
            3,
            Tolerance::rel(1e-12),
        )
        .unwrap();
        assert!((v[0].value - 2.0).abs() < 1e-12);
        let exact = 2.0 - (-PI).exp() * (PI * PI + 2.0 * PI + 2.0);
        assert!((v[1].value - exact).abs() < 1e-12);
        assert_eq!(v[2].value, 0.0);
    }

    #[test]
    fn nested_2d() {
        let e = integrate_2d(
            |x, y| (-(x + y)).exp(),
            &[0.0, f64::INFINITY],
            |x| vec![x, f64::INFINITY],
            Tolerance::rel(1e-10),
        )
        .unwrap();
        // ∫_0^∞ e^{-x} e^{-x} dx = 1/2
        assert!((e.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn divergent_integral_fails() {
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, Tolerance { max_intervals: 200, ..Default::default() });
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
