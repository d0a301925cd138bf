//! Vacuum-polarization observables from the spectral sum over the
//! negative-energy continuum.

use crate::error::{Error, Result};
use crate::model::{current_of, DerivedParams, Dispersion, ModelParams};
use crate::quadrature::{self, QuadResult, QuadratureSpec};
use crate::spin::CMat2;
use crate::{green, require};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// The commutator route is only evaluated for `|x| <= STABLE_WINDOW / (m c)`.
pub const STABLE_WINDOW: f64 = 10.0;

/// Beyond `VP_RANGE / (m c)` the density is below `e^{-VP_RANGE}` of its
/// scale and is dropped from charge integrals.
const VP_RANGE: f64 = 24.0;

/// `f_k(x)` and `g_k(x)` of the vacuum-polarization density matrix.
#[derive(Clone, Copy, Debug)]
pub struct VpKernels {
    d: DerivedParams,
}

impl VpKernels {
    pub fn new(d: DerivedParams) -> Self {
        Self { d }
    }

    fn ratio(&self, k: f64) -> f64 {
        self.d.eps1 / Dispersion::new(&self.d.params, k).eps_k
    }

    /// `κ cos(2kx) - (ε̃₁/ε_k) k sin(2k|x|)`
    pub fn f(&self, k: f64, x: f64) -> f64 {
        let (s, c) = (2.0 * k * x.abs()).sin_cos();
        self.d.kappa * c - self.ratio(k) * k * s
    }

    /// `(ε̃₁/ε_k) k cos(2kx) + κ sin(2k|x|)`
    pub fn g(&self, k: f64, x: f64) -> f64 {
        let (s, c) = (2.0 * k * x.abs()).sin_cos();
        self.ratio(k) * k * c + self.d.kappa * s
    }
}

/// Half-line spec for a k-integral at position `x`.
fn k_spec(d: &DerivedParams, x: f64, spec: &QuadratureSpec) -> QuadratureSpec {
    let mc = d.params.compton_k();
    if x == 0.0 {
        spec.with_scale(d.kappa).with_hint(None)
    } else {
        spec.with_scale(d.kappa.max(mc))
            .with_hint(Some(2.0 * x.abs()))
    }
}

fn lorentz(d: &DerivedParams, k: f64) -> f64 {
    d.kappa / (PI * (k * k + d.kappa * d.kappa))
}

/// `n^vp(x) = -∫₀^∞ dk/π κ/(k²+κ²) f_k(x)`.
pub fn vp_density(d: &DerivedParams, x: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    if !d.has_bound_state() {
        return Ok(QuadResult::exact(0.0));
    }
    let kern = VpKernels::new(*d);
    let r = quadrature::integrate_halfline(|k| -lorentz(d, k) * kern.f(k, x), &k_spec(d, x, spec))?;
    require(r, "vacuum-polarization density")
}

/// Density from the field-operator commutator,
/// `-κ e^{-2κ|x|}/2 + ∫₀^∞ dk/π κ/(k²+κ²) (ε̃₁/ε_k) k sin(2k|x|)`.
pub fn vp_density_commutator(
    d: &DerivedParams,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let limit = STABLE_WINDOW / d.params.compton_k();
    if x.abs() > limit {
        return Err(Error::OutsideStableWindow { x, limit });
    }
    if !d.has_bound_state() {
        return Ok(QuadResult::exact(0.0));
    }
    let local = QuadResult::exact(-0.5 * d.kappa * (-2.0 * d.kappa * x.abs()).exp());
    if x == 0.0 {
        return Ok(local);
    }
    let kern = VpKernels::new(*d);
    let r = quadrature::integrate_halfline(
        |k| lorentz(d, k) * kern.ratio(k) * k * (2.0 * k * x.abs()).sin(),
        &k_spec(d, x, spec),
    )?;
    Ok(local.plus(require(r, "commutator density")?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RouteComparison {
    pub spectral: QuadResult,
    pub commutator: QuadResult,
    /// The two routes differ by more than ten times their combined error.
    pub unstable: bool,
}

pub fn compare_commutator(
    d: &DerivedParams,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<RouteComparison> {
    let spectral = vp_density(d, x, spec)?;
    let commutator = vp_density_commutator(d, x, spec)?;
    let combined = spectral.error_estimate + commutator.error_estimate;
    let floor = spec.target(spectral.value);
    let unstable = (spectral.value - commutator.value).abs() > 10.0 * combined.max(floor);
    Ok(RouteComparison {
        spectral,
        commutator,
        unstable,
    })
}

/// Local density matrix `n₁^vp(x)`. Its diagonal diverges logarithmically
/// at the nucleus, so `x = 0` is rejected.
pub fn vp_density_matrix(d: &DerivedParams, x: f64, spec: &QuadratureSpec) -> Result<CMat2> {
    if x == 0.0 {
        return Err(Error::SingularPoint {
            quantity: "vacuum-polarization density matrix",
        });
    }
    if !d.has_bound_state() {
        return Ok(CMat2::zero());
    }
    let (upper, lower) = vp_density_matrix_diagonal(d, x, spec)?;
    let upper = require(upper, "density matrix (upper)")?;
    let lower = require(lower, "density matrix (lower)")?;
    let off = require(
        vp_off_diagonal(d, x, spec)?,
        "density matrix (off-diagonal)",
    )?
    .value;
    Ok(CMat2::new([
        [Complex64::new(upper.value, 0.0), Complex64::new(0.0, off)],
        [Complex64::new(0.0, -off), Complex64::new(lower.value, 0.0)],
    ]))
}

/// Diagonal entries `(n₁₁, n₂₂)` of the local density matrix, `x ≠ 0`.
/// `G(x)` with `n₁₂ = iG`, `n₂₁ = -iG`, without the convergence check.
fn vp_off_diagonal(d: &DerivedParams, x: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let p = d.params;
    let mc2 = p.rest_energy();
    let kern = VpKernels::new(*d);
    Ok(quadrature::integrate_halfline(
        |k| lorentz(d, k) * k * p.c() / (2.0 * mc2) * kern.g(k, x),
        &k_spec(d, x, spec),
    )?)
}

/// Diagonal entries of `n₁^vp(x)` without the convergence check.
pub(crate) fn vp_density_matrix_diagonal(
    d: &DerivedParams,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<(QuadResult, QuadResult)> {
    if x == 0.0 {
        return Err(Error::SingularPoint {
            quantity: "vacuum-polarization density matrix",
        });
    }
    if !d.has_bound_state() {
        return Ok((QuadResult::exact(0.0), QuadResult::exact(0.0)));
    }
    let p = d.params;
    let mc2 = p.rest_energy();
    let kern = VpKernels::new(*d);
    let ks = k_spec(d, x, spec);
    // (ε+mc²)s²/(2mc²) = (ε-mc²)/(2mc²)
    let upper = quadrature::integrate_halfline(
        |k| {
            let disp = Dispersion::new(&p, k);
            lorentz(d, k) * disp.kinetic(&p) / (2.0 * mc2) * kern.f(k, x)
        },
        &ks,
    )?;
    let lower = quadrature::integrate_halfline(
        |k| {
            let disp = Dispersion::new(&p, k);
            -lorentz(d, k) * (disp.eps_k + mc2) / (2.0 * mc2) * kern.f(k, x)
        },
        &ks,
    )?;
    Ok((upper, lower))
}

/// `j^vp(x) = tr[c σ1 n₁^vp(x)]`, checked to vanish.
pub fn vp_current(d: &DerivedParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !d.has_bound_state() {
        return Ok(0.0);
    }
    if x == 0.0 {
        return Err(Error::SingularPoint {
            quantity: "vacuum-polarization current",
        });
    }
    // only the off-diagonal entries enter; their convergence does not
    // affect the cancellation
    let g = vp_off_diagonal(d, x, spec)?.value;
    let n = CMat2::new([
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, g)],
        [Complex64::new(0.0, -g), Complex64::new(0.0, 0.0)],
    ]);
    let j = current_of(d.params.c(), &n);
    let scale = d.params.c() * g.abs();
    if j.abs() > spec.target(scale) {
        return Err(Error::Diagnostic {
            quantity: "vacuum-polarization current",
            residual: j,
        });
    }
    Ok(j)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VacuumChargeSummary {
    /// `∫ n^vp dx = -(2/π) arctan(Z/2c)`.
    pub integral: f64,
    /// `Z - ∫ n^vp dx`.
    pub z_obs: f64,
}

pub fn vacuum_charge_summary(p: &ModelParams) -> VacuumChargeSummary {
    let integral = -2.0 / PI * (p.z() / (2.0 * p.c())).atan();
    VacuumChargeSummary {
        integral,
        z_obs: p.z() - integral,
    }
}

/// `∫ n^vp dx` by quadrature over x of the spectral density.
pub fn vacuum_charge_numeric(d: &DerivedParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    if !d.has_bound_state() {
        return Ok(QuadResult::exact(0.0));
    }
    let range = VP_RANGE / d.params.compton_k();
    // the x-integrand has a logarithmic kink at the nucleus; split there
    // and at a few Compton lengths so GK sees smooth pieces
    let cuts = [0.0, 0.25, 1.0, 4.0, VP_RANGE].map(|t| t * range / VP_RANGE);
    let mut total = QuadResult::exact(0.0);
    for w in cuts.windows(2) {
        let r = quadrature::try_integrate(
            |x| vp_density(d, x, spec).map(|q| q.value),
            w[0],
            w[1],
            spec,
        )?;
        total = total.plus(require(r, "vacuum charge")?);
    }
    Ok(total.scaled(2.0))
}

/// How to compute the vacuum-polarization density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DensityMethod {
    Spectral,
    Commutator,
    Green,
    /// First order in `Z` only.
    Uehling,
}

pub fn density_by(
    method: DensityMethod,
    d: &DerivedParams,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    match method {
        DensityMethod::Spectral => vp_density(d, x, spec),
        DensityMethod::Commutator => vp_density_commutator(d, x, spec),
        DensityMethod::Green => green::vp_density_green(d, x, spec),
        DensityMethod::Uehling => green::uehling_density(&d.params, x, spec),
    }
}

/// A density sampled on a grid of positions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialProfile {
    pub quantity: String,
    pub params: ModelParams,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl RadialProfile {
    /// Evaluates `f` at every `x` in parallel; rows keep input order.
    pub fn evaluate<F>(quantity: &str, params: ModelParams, xs: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<QuadResult> + Sync,
    {
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams(
                "grid must be strictly increasing".into(),
            ));
        }
        let results: Vec<QuadResult> = xs.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
        Ok(Self {
            quantity: quantity.to_owned(),
            params,
            values: results.iter().map(|r| r.value).collect(),
            errors: results.iter().map(|r| r.error_estimate).collect(),
            xs,
        })
    }

    pub fn density(
        method: DensityMethod,
        params: ModelParams,
        xs: Vec<f64>,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        let d = params.derive();
        let label = match method {
            DensityMethod::Spectral => "n_vp spectral",
            DensityMethod::Commutator => "n_vp commutator",
            DensityMethod::Green => "n_vp green",
            DensityMethod::Uehling => "n_vp uehling",
        };
        Self::evaluate(label, params, xs, |x| density_by(method, &d, x, spec))
    }
}

/// `n` equally spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                // weighted form: symmetric ranges give exactly mirrored points
                let last = (n - 1) as f64;
                a * ((n - 1 - i) as f64 / last) + b * (i as f64 / last)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_C;

    fn d(z: f64) -> DerivedParams {
        ModelParams::with_z(z).unwrap().derive()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn kernels_at_origin() {
        let dd = d(30.0);
        let kern = VpKernels::new(dd);
        for k in [0.0, 1.0, 1e3] {
            assert_eq!(kern.f(k, 0.0), dd.kappa);
            let eps = Dispersion::new(&dd.params, k).eps_k;
            assert!((kern.g(k, 0.0) - dd.eps1 / eps * k).abs() < 1e-12);
        }
    }

    #[test]
    fn density_at_origin_is_minus_half_kappa() {
        for z in [1.0, 50.0, 120.0] {
            let dd = d(z);
            let r = vp_density(&dd, 0.0, &spec()).unwrap();
            assert!((r.value + dd.kappa / 2.0).abs() < 1e-10 * dd.kappa);
        }
    }

    #[test]
    fn free_case_is_zero() {
        let dd = d(0.0);
        assert_eq!(vp_density(&dd, 0.01, &spec()).unwrap().value, 0.0);
        assert_eq!(
            vp_density_commutator(&dd, 0.01, &spec()).unwrap().value,
            0.0
        );
        assert_eq!(
            vp_density_matrix(&dd, 0.01, &spec()).unwrap(),
            CMat2::zero()
        );
        assert_eq!(vp_current(&dd, 0.01, &spec()).unwrap(), 0.0);
        let s = vacuum_charge_summary(&dd.params);
        assert_eq!((s.integral, s.z_obs), (0.0, 0.0));
    }

    #[test]
    fn density_is_even_and_negative() {
        let dd = d(60.0);
        for x in [1e-4, 3e-3, 0.02] {
            let a = vp_density(&dd, x, &spec()).unwrap().value;
            let b = vp_density(&dd, -x, &spec()).unwrap().value;
            assert_eq!(a, b);
            assert!(a < 0.0);
        }
    }

    #[test]
    fn density_matrix_trace_hermiticity_and_origin() {
        let dd = d(120.0);
        let x = 0.01;
        let n = vp_density_matrix(&dd, x, &spec()).unwrap();
        assert!(n.max_abs_diff(&n.adjoint()) < 1e-12);
        let dens = vp_density(&dd, x, &spec()).unwrap().value;
        assert!((n.trace().re - dens).abs() < 1e-8 * n.max_abs());
        assert!(matches!(
            vp_density_matrix(&dd, 0.0, &spec()),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn current_vanishes() {
        for (z, x) in [(1.0, 0.005), (120.0, 0.02)] {
            let j = vp_current(&d(z), x, &spec()).unwrap();
            assert!(j.abs() < 1e-10);
        }
    }

    #[test]
    fn commutator_window_and_origin() {
        let dd = d(50.0);
        let r = vp_density_commutator(&dd, 0.0, &spec()).unwrap();
        assert_eq!(r.value, -dd.kappa / 2.0);
        let outside = 10.5 / DEFAULT_C;
        assert!(matches!(
            vp_density_commutator(&dd, outside, &spec()),
            Err(Error::OutsideStableWindow { .. })
        ));
    }

    #[test]
    fn commutator_matches_spectral_route() {
        let dd = d(50.0);
        for x in [1e-4, 5e-3, 0.02, 5.0 / DEFAULT_C] {
            let c = compare_commutator(&dd, x, &spec()).unwrap();
            assert!(!c.unstable, "x = {x}: {c:?}");
            assert!((c.spectral.value - c.commutator.value).abs() < 1e-8);
        }
    }

    #[test]
    fn charge_summary_endpoints() {
        let c = DEFAULT_C;
        let s = vacuum_charge_summary(&ModelParams::new(2.0 * c, c, 1.0).unwrap());
        assert!((s.integral + 0.5).abs() < 1e-15);
        assert!((s.z_obs - (2.0 * c + 0.5)).abs() < 1e-12);
        let s1 = vacuum_charge_summary(&ModelParams::with_z(1.0).unwrap());
        assert!(s1.z_obs > 1.0);
    }

    #[test]
    fn profile_rejects_unsorted_grid() {
        let p = ModelParams::with_z(1.0).unwrap();
        let e = RadialProfile::density(DensityMethod::Spectral, p, vec![0.1, 0.0], &spec());
        assert!(e.is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(-0.05, 0.05, 501);
        assert_eq!(v.len(), 501);
        assert_eq!(v[0], -0.05);
        assert_eq!(v[250], 0.0);
        assert_eq!(v[500], 0.05);
        for i in 0..501 {
            assert_eq!(v[i], -v[500 - i]);
        }
    }
}
