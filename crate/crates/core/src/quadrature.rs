//! Adaptive Gauss–Kronrod quadrature.
//!
//! Every integral in the crate goes through this module. The building block
//! is a globally adaptive 21-point Gauss–Kronrod rule on a finite interval;
//! on top of it sit
//!
//! * half-line integration with the algebraic map `k = scale * tan(theta)`,
//! * oscillatory half-line integration that splits the axis at half-periods
//!   `pi / omega` and accelerates the partial sums with Wynn's epsilon
//!   algorithm,
//! * integrals along the imaginary frequency axis through
//!   `u = scale * sinh(s)`, i.e. `t = cosh(s) = sqrt(1 + (u/scale)^2)`,
//! * nested two-dimensional integration.
//!
//! Integrands come in two flavours: plain `FnMut(f64) -> f64` closures and
//! fallible `FnMut(f64) -> Result<f64, E>` closures (the `try_*` functions),
//! the latter so that nested integrals can propagate inner failures.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

#[allow(clippy::excessive_precision)]
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
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_280_121_227,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for the odd Kronrod abscissae XGK[1], XGK[3], ...
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Upper bound on the number of half-period cycles summed by the
/// oscillatory half-line integrator.
const MAX_CYCLES: usize = 400;
/// Only the most recent partial sums enter the epsilon table.
const EPSILON_WINDOW: usize = 40;
const MAX_SINH_ARGUMENT: f64 = 250.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand returned non-finite value {value} at {at}")]
    NonFinite { at: f64, value: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
}

/// Tolerances and budget for one integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of subintervals kept by a single adaptive pass.
    pub max_subdivisions: usize,
    /// Angular frequency `omega` of a `cos(omega k)` / `sin(omega k)` factor
    /// in a half-line integrand. Enables half-period splitting.
    pub oscillation_frequency_hint: Option<f64>,
    /// Characteristic scale of the integration variable, used by the
    /// half-line and imaginary-axis maps.
    pub scale: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            oscillation_frequency_hint: None,
            scale: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_hint(mut self, omega: Option<f64>) -> Self {
        self.oscillation_frequency_hint = omega;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    /// Same tolerances, tightened by `factor` (for integrals nested inside
    /// another one).
    pub fn tightened(mut self, factor: f64) -> Self {
        self.rel_tol *= factor;
        self.abs_tol *= factor;
        self
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(QuadError::InvalidSpec("tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadError::InvalidSpec(
                "max_subdivisions must be at least 1",
            ));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(QuadError::InvalidSpec("scale must be positive and finite"));
        }
        if let Some(w) = self.oscillation_frequency_hint {
            if !(w > 0.0) || !w.is_finite() {
                return Err(QuadError::InvalidSpec("frequency hint must be positive"));
            }
        }
        Ok(())
    }

    /// Error target for an integral of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Value of an integral together with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Sum of two independent integrals.
    pub fn plus(self, other: QuadResult) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn checked<F, E>(f: &mut F, x: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadError::NonFinite { at: x, value: v }.into())
    }
}

fn gk21<F, E>(f: &mut F, a: f64, b: f64) -> Result<Segment, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = checked(f, center)?;
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let error = rescale_error((res_kronrod - res_gauss) * half, res_abs, res_asc);
    Ok(Segment { a, b, value, error })
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok::<f64, QuadError>(f(x)), a, b, spec)
}

pub fn try_integrate<F, E>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    spec.validate()?;
    if a == b {
        return Ok(QuadResult::exact(0.0));
    }
    let first = gk21(&mut f, a, b)?;
    let mut evaluations = 21;
    let mut segments = vec![first];
    let mut total = first.value;
    let mut total_err = first.error;
    let mut exhausted = false;

    while total_err > spec.target(total) {
        if segments.len() >= spec.max_subdivisions {
            exhausted = true;
            break;
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| {
                if s.error > acc.1 {
                    (i, s.error)
                } else {
                    acc
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        // no more representable midpoints: the rule cannot refine further
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            segments.push(seg);
            exhausted = true;
            break;
        }
        let left = gk21(&mut f, seg.a, mid)?;
        let right = gk21(&mut f, mid, seg.b)?;
        evaluations += 42;
        total += left.value + right.value - seg.value;
        total_err += left.error + right.error - seg.error;
        segments.push(left);
        segments.push(right);
        if segments.len() % 64 == 0 {
            total = segments.iter().map(|s| s.value).sum();
            total_err = segments.iter().map(|s| s.error).sum();
        }
    }

    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error_estimate: f64 = segments.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
        converged: !exhausted || error_estimate <= spec.target(value),
    })
}

/// Integral over `(0, inf)`.
///
/// Without a frequency hint the axis is mapped onto `[0, pi/2)` through
/// `k = scale * tan(theta)`. With a hint `omega` the axis is cut into a head
/// `[0, K0]` and half-period cycles of length `pi / omega`; the sequence of
/// partial sums is extrapolated with the epsilon algorithm, which also
/// handles conditionally convergent tails such as `sin(omega k) / k`.
pub fn integrate_halfline<F>(mut f: F, spec: &QuadratureSpec) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_halfline(|x| Ok::<f64, QuadError>(f(x)), spec)
}

pub fn try_integrate_halfline<F, E>(mut f: F, spec: &QuadratureSpec) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    spec.validate()?;
    match spec.oscillation_frequency_hint {
        None => {
            let scale = spec.scale;
            try_integrate(
                |theta: f64| {
                    let (s, c) = theta.sin_cos();
                    let k = scale * s / c;
                    if !k.is_finite() {
                        return Ok(0.0);
                    }
                    Ok(f(k)? * scale / (c * c))
                },
                0.0,
                FRAC_PI_2,
                spec,
            )
        }
        Some(omega) => oscillatory_halfline(f, omega, spec),
    }
}

fn oscillatory_halfline<F, E>(mut f: F, omega: f64, spec: &QuadratureSpec) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    let period = PI / omega;
    let head_cycles = (4.0 * spec.scale / period).ceil().max(1.0);
    let head_end = head_cycles * period;

    let mut head = try_integrate(&mut f, 0.0, head_end, &spec.tightened(0.1))?;
    let mut head_refined = false;
    let mut evaluations = head.evaluations;
    let mut quad_err = head.error_estimate;

    let cycle_spec = spec.tightened(1e-2);
    let mut sums = vec![head.value];
    let mut partial = head.value;
    let mut estimates: Vec<(f64, f64)> = Vec::new();
    let mut small_terms = 0;

    for j in 0..MAX_CYCLES {
        let a = head_end + j as f64 * period;
        let term = try_integrate(&mut f, a, a + period, &cycle_spec)?;
        evaluations += term.evaluations;
        quad_err += term.error_estimate;
        partial += term.value;
        sums.push(partial);

        // plain convergence when the tail is already negligible
        if term.value.abs() <= 1e-3 * spec.target(partial) {
            small_terms += 1;
            if small_terms >= 3 {
                let error_estimate = quad_err + term.value.abs();
                return Ok(QuadResult {
                    value: partial,
                    error_estimate,
                    evaluations,
                    converged: error_estimate <= spec.target(partial),
                });
            }
        } else {
            small_terms = 0;
        }

        if sums.len() < 6 {
            continue;
        }
        let window = &sums[sums.len().saturating_sub(EPSILON_WINDOW)..];
        let (est, ext_err) = wynn_epsilon(window);
        estimates.push((est, ext_err));
        let n = estimates.len();
        if n >= 3 {
            let d1 = (estimates[n - 1].0 - estimates[n - 2].0).abs();
            let d2 = (estimates[n - 2].0 - estimates[n - 3].0).abs();
            let err = d1.max(d2).max(ext_err.min(d1.max(d2) * 10.0));
            let mut est = est;
            let target = spec.target(est);
            // the head tolerance was relative to the head, which may be much
            // larger than the final value after cancellation
            if !head_refined
                && err + quad_err > target
                && err + quad_err - head.error_estimate < 0.5 * target
            {
                head_refined = true;
                let mut refined_spec = *spec;
                refined_spec.abs_tol = 0.25 * target;
                refined_spec.rel_tol = (0.1 * spec.rel_tol)
                    .min(0.25 * target / head.value.abs().max(f64::MIN_POSITIVE));
                let refined = try_integrate(&mut f, 0.0, head_end, &refined_spec)?;
                let shift = refined.value - head.value;
                evaluations += refined.evaluations;
                quad_err += refined.error_estimate - head.error_estimate;
                for s in sums.iter_mut() {
                    *s += shift;
                }
                for e in estimates.iter_mut() {
                    e.0 += shift;
                }
                partial += shift;
                est += shift;
                head = refined;
            }
            if err + quad_err <= spec.target(est) {
                return Ok(QuadResult {
                    value: est,
                    error_estimate: err + quad_err,
                    evaluations,
                    converged: true,
                });
            }
        }
    }

    let (est, err) = estimates
        .last()
        .copied()
        .unwrap_or((partial, f64::INFINITY));
    Ok(QuadResult {
        value: est,
        error_estimate: err + quad_err,
        evaluations,
        converged: false,
    })
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
///
/// Returns the even-column entry whose distance to its predecessor in the
/// same column is smallest, together with that distance as error estimate.
pub fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (sums[0], f64::INFINITY),
        2 => return (sums[1], (sums[1] - sums[0]).abs()),
        _ => {}
    }
    let mut best = (sums[n - 1], (sums[n - 1] - sums[n - 2]).abs());
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    for col in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 {
                // the column has converged exactly
                if col % 2 == 1 {
                    return (cur[i + 1], best.1.min(0.0));
                }
                return best;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        prev = cur;
        cur = next;
        if col % 2 == 0 && cur.len() >= 2 {
            let last = cur[cur.len() - 1];
            let err = (last - cur[cur.len() - 2]).abs();
            if err < best.1 {
                best = (last, err);
            }
        }
    }
    best
}

/// How an integrand along the imaginary frequency axis behaves under
/// `u -> -u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisSymmetry {
    /// `f(-u) = f(u)`: only the positive half is evaluated.
    Even,
    /// No assumption: `f(u) + f(-u)` is integrated.
    General,
}

/// `int_{-inf}^{inf} f(u) du` through `u = scale * sinh(s)`; `spec.scale`
/// should be the rest energy `m c^2` for resolvent integrals.
pub fn integrate_imaginary_axis<F>(
    mut f: F,
    symmetry: AxisSymmetry,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_imaginary_axis(|u| Ok::<f64, QuadError>(f(u)), symmetry, spec)
}

pub fn try_integrate_imaginary_axis<F, E>(
    mut f: F,
    symmetry: AxisSymmetry,
    spec: &QuadratureSpec,
) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    spec.validate()?;
    let scale = spec.scale;
    let inner = QuadratureSpec {
        scale: 4.0,
        oscillation_frequency_hint: None,
        ..*spec
    };
    try_integrate_halfline(
        |s: f64| {
            // beyond s = 250 an integrand decaying like u^-2 contributes
            // less than e^-250 of its scale, and u^2 would overflow
            if s > MAX_SINH_ARGUMENT {
                return Ok(0.0);
            }
            let u = scale * s.sinh();
            let jac = scale * s.cosh();
            if !u.is_finite() || !jac.is_finite() {
                return Ok(0.0);
            }
            let v = match symmetry {
                AxisSymmetry::Even => 2.0 * f(u)?,
                AxisSymmetry::General => f(u)? + f(-u)?,
            };
            Ok(v * jac)
        },
        &inner,
    )
}

/// One integration variable of a nested integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    HalfLine { scale: f64 },
    ImaginaryAxis { scale: f64, symmetry: AxisSymmetry },
}

impl Domain {
    fn try_integrate<F, E>(&self, f: F, spec: &QuadratureSpec) -> Result<QuadResult, E>
    where
        F: FnMut(f64) -> Result<f64, E>,
        E: From<QuadError>,
    {
        match *self {
            Domain::Finite { a, b } => try_integrate(f, a, b, spec),
            Domain::HalfLine { scale } => try_integrate_halfline(
                f,
                &QuadratureSpec {
                    scale,
                    oscillation_frequency_hint: None,
                    ..*spec
                },
            ),
            Domain::ImaginaryAxis { scale, symmetry } => {
                try_integrate_imaginary_axis(f, symmetry, &QuadratureSpec { scale, ..*spec })
            }
        }
    }
}

/// Nested integral `int_outer dy int_inner dz f(y, z)`.
///
/// The inner integrals run with tolerances a factor of ten tighter; an
/// inner integral that fails to converge marks the whole result as not
/// converged.
pub fn integrate_2d<F>(
    mut f: F,
    outer: Domain,
    inner: Domain,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64, f64) -> f64,
{
    try_integrate_2d(|y, z| Ok::<f64, QuadError>(f(y, z)), outer, inner, spec)
}

pub fn try_integrate_2d<F, E>(
    mut f: F,
    outer: Domain,
    inner: Domain,
    spec: &QuadratureSpec,
) -> Result<QuadResult, E>
where
    F: FnMut(f64, f64) -> Result<f64, E>,
    E: From<QuadError>,
{
    spec.validate()?;
    let inner_spec = spec.tightened(0.1);
    let mut inner_ok = true;
    let mut inner_evals = 0;
    let mut outer_result = outer.try_integrate(
        |y| {
            let r = inner.try_integrate(|z| f(y, z), &inner_spec)?;
            inner_ok &= r.converged;
            inner_evals += r.evaluations;
            Ok::<f64, E>(r.value)
        },
        spec,
    )?;
    outer_result.evaluations += inner_evals;
    outer_result.converged &= inner_ok;
    Ok(outer_result)
}
