//! First-order QED corrections to the bound-state energy.
//!
//! With `n^el(x) = κ e^{-2κ|x|}` the x-integrals against `cos(2kx)` and
//! `sin(2k|x|)` are elementary, leaving single k-integrals over
//!
//! ```text
//! P(k) = (1/π) κ² (κ² - ε̃₁ k²/ε_k) / (k² + κ²)²
//! ```
//!
//! `dc = -∫P`, `xc = ∫P (λ² - s²)/((1 - s²)(1 + λ²))`,
//! `xb = -∫P (1 - λ²s²)/((1 - s²)(1 + λ²))` and the compact total
//! `-∫P (1 + ε̃₁ε_k/m²c⁴)`. The `*_direct` functions integrate over x and k
//! numerically instead and serve as a check on the reduction.

use crate::error::{Error, Result};
use crate::model::{electron_current, DerivedParams, Dispersion, ModelParams};
use crate::quadrature::{self, QuadResult, QuadratureSpec};
use crate::require;
use crate::vacuum::{vp_current, vp_density, vp_density_matrix_diagonal};
use serde::Serialize;
use std::f64::consts::PI;

const CONSISTENCY_TOLERANCE: f64 = 1e-9;

fn k_spec(d: &DerivedParams, spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_scale(d.kappa).with_hint(None)
}

fn lorentz2(d: &DerivedParams, k: f64) -> f64 {
    let q = k * k + d.kappa * d.kappa;
    d.kappa * d.kappa / (PI * q * q)
}

/// `P(k)`.
pub fn reduced_weight(d: &DerivedParams, k: f64) -> f64 {
    let eps = Dispersion::new(&d.params, k).eps_k;
    lorentz2(d, k) * (d.kappa * d.kappa - d.eps1 * k * k / eps)
}

fn reduced(
    d: &DerivedParams,
    spec: &QuadratureSpec,
    quantity: &'static str,
    f: impl Fn(f64) -> f64,
) -> Result<QuadResult> {
    if !d.has_bound_state() {
        return Ok(QuadResult::exact(0.0));
    }
    let r = quadrature::integrate_halfline(f, &k_spec(d, spec))?;
    require(r, quantity)
}

/// Direct Coulomb-type correction `∫ n^el n^vp dx`.
pub fn dc_correction(p: &ModelParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    let d = p.derive();
    // -∫P with ∫κ²(κ²-k²)/(k²+κ²)² dk = 0 taken out, which removes the
    // cancellation between small and large k at small Z
    reduced(&d, spec, "direct Coulomb correction", |k| {
        let eps = Dispersion::new(p, k).eps_k;
        -lorentz2(&d, k) * k * k * (eps - d.eps1) / eps
    })
}

/// Exchange Coulomb-type correction `-∫ tr[n₁^el n₁^vp] dx`.
pub fn xc_correction(p: &ModelParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    let d = p.derive();
    let (mc2, l2) = (p.rest_energy(), d.lambda * d.lambda);
    reduced(&d, spec, "exchange Coulomb correction", |k| {
        let disp = Dispersion::new(p, k);
        let s2 = disp.s_k * disp.s_k;
        // 1/(1-s²) = (ε+mc²)/(2mc²)
        reduced_weight(&d, k) * (l2 - s2) * (disp.eps_k + mc2) / (2.0 * mc2 * (1.0 + l2))
    })
}

/// Exchange Breit-type correction `∫ tr[σ1 n₁^el σ1 n₁^vp] dx`.
pub fn xb_correction(p: &ModelParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    let d = p.derive();
    let (mc2, l2) = (p.rest_energy(), d.lambda * d.lambda);
    reduced(&d, spec, "exchange Breit correction", |k| {
        let disp = Dispersion::new(p, k);
        let s2 = disp.s_k * disp.s_k;
        -reduced_weight(&d, k) * (1.0 - l2 * s2) * (disp.eps_k + mc2) / (2.0 * mc2 * (1.0 + l2))
    })
}

/// Direct Breit-type correction, zero because both currents vanish.
pub fn db_correction(p: &ModelParams) -> Result<f64> {
    let residual = db_diagnostic(p, &QuadratureSpec::default())?;
    if residual.abs() >= 1e-12 {
        return Err(Error::Diagnostic {
            quantity: "direct Breit correction",
            residual,
        });
    }
    Ok(0.0)
}

/// `-(1/c²) ∫ j^el j^vp dx` evaluated from the two current densities.
pub fn db_diagnostic(p: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    let d = p.derive();
    if !d.has_bound_state() {
        return Ok(0.0);
    }
    let c2 = p.c() * p.c();
    let r = quadrature::try_integrate_halfline(
        |x: f64| -> Result<f64> {
            let mut sum = 0.0;
            for y in [x, -x] {
                sum += electron_current(&d, y)? * vp_current(&d, y, spec)?;
            }
            Ok(-sum / c2)
        },
        &spec.with_scale(0.5 / d.kappa).with_hint(None),
    )?;
    Ok(require(r, "direct Breit diagnostic")?.value)
}

/// Compact form `-∫P (1 + ε̃₁ε_k/(m²c⁴))` of `dc + xc + db + xb`.
pub fn total_vp_correction(p: &ModelParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    let d = p.derive();
    let mc2 = p.rest_energy();
    reduced(&d, spec, "total vacuum-polarization correction", |k| {
        let eps = Dispersion::new(p, k).eps_k;
        -reduced_weight(&d, k) * (1.0 + d.eps1 * eps / (mc2 * mc2))
    })
}

/// Integral over `x ∈ ℝ` of an even function, as `2∫₀^∞`.
fn direct(
    d: &DerivedParams,
    spec: &QuadratureSpec,
    quantity: &'static str,
    f: impl Fn(f64, &QuadratureSpec) -> Result<f64>,
) -> Result<QuadResult> {
    if !d.has_bound_state() {
        return Ok(QuadResult::exact(0.0));
    }
    let inner = spec.tightened(0.1);
    let outer = spec.with_scale(0.5 / d.kappa).with_hint(None);
    let r = quadrature::try_integrate_halfline(|x| f(x, &inner), &outer)?;
    Ok(require(r, quantity)?.scaled(2.0))
}

/// Inner quadratures far out in x, where the density is below the absolute
/// tolerance floor, may miss their own target while contributing negligibly
/// after multiplication by the electron density.
fn inner_value(r: Result<QuadResult>) -> Result<f64> {
    match r {
        Ok(q) => Ok(q.value),
        Err(Error::NotConverged { value, .. }) => Ok(value),
        Err(e) => Err(e),
    }
}

fn el_weight(d: &DerivedParams, x: f64) -> f64 {
    d.kappa / (1.0 + d.lambda * d.lambda) * (-2.0 * d.kappa * x.abs()).exp()
}

/// `dc` by quadrature over x of `n^el(x) n^vp(x)`.
pub fn dc_direct(p: &ModelParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    let d = p.derive();
    direct(&d, spec, "direct Coulomb correction (2D)", |x, s| {
        let nel = d.kappa * (-2.0 * d.kappa * x).exp();
        Ok(nel * inner_value(vp_density(&d, x, s))?)
    })
}

fn diagonal(d: &DerivedParams, x: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    vp_density_matrix_diagonal(d, x, spec).map(|(a, b)| (a.value, b.value))
}

// The off-diagonal terms of the traces below carry a factor sgn(x) and
// cancel between x and -x; only the diagonal entries survive.

/// `xc` by quadrature over x of `-tr[n₁^el n₁^vp]`.
pub fn xc_direct(p: &ModelParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    let d = p.derive();
    let l2 = d.lambda * d.lambda;
    direct(&d, spec, "exchange Coulomb correction (2D)", |x, s| {
        let (n11, n22) = diagonal(&d, x, s)?;
        Ok(-el_weight(&d, x) * (n11 + l2 * n22))
    })
}

/// `xb` by quadrature over x of `tr[σ1 n₁^el σ1 n₁^vp]`.
pub fn xb_direct(p: &ModelParams, spec: &QuadratureSpec) -> Result<QuadResult> {
    let d = p.derive();
    let l2 = d.lambda * d.lambda;
    direct(&d, spec, "exchange Breit correction (2D)", |x, s| {
        let (n11, n22) = diagonal(&d, x, s)?;
        Ok(el_weight(&d, x) * (l2 * n11 + n22))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyErrors {
    pub dc: f64,
    pub xc: f64,
    pub db: f64,
    pub xb: f64,
    pub total_vp: f64,
}

/// Bound-state energy to first order, in Hartree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub zeroth: f64,
    pub dc: f64,
    pub xc: f64,
    pub db: f64,
    pub xb: f64,
    pub total_vp: f64,
    /// Direct and exchange electronic terms cancel for one electron.
    pub el_first_order: f64,
    pub error_estimates: EnergyErrors,
}

impl EnergyBreakdown {
    pub fn sum_of_parts(&self) -> f64 {
        self.dc + self.xc + self.db + self.xb
    }
}

/// All corrections, computed concurrently, with the compact total checked
/// against the sum of the parts.
pub fn breakdown(p: &ModelParams, spec: &QuadratureSpec) -> Result<EnergyBreakdown> {
    let ((dc, xc), ((xb, total), db)) = rayon::join(
        || rayon::join(|| dc_correction(p, spec), || xc_correction(p, spec)),
        || {
            rayon::join(
                || rayon::join(|| xb_correction(p, spec), || total_vp_correction(p, spec)),
                || db_correction(p),
            )
        },
    );
    let (dc, xc, xb, total, db) = (dc?, xc?, xb?, total?, db?);
    let out = EnergyBreakdown {
        zeroth: p.derive().eps1,
        dc: dc.value,
        xc: xc.value,
        db,
        xb: xb.value,
        total_vp: total.value,
        el_first_order: 0.0,
        error_estimates: EnergyErrors {
            dc: dc.error_estimate,
            xc: xc.error_estimate,
            db: 0.0,
            xb: xb.error_estimate,
            total_vp: total.error_estimate,
        },
    };
    let residual = out.total_vp - out.sum_of_parts();
    let allowed = CONSISTENCY_TOLERANCE * out.total_vp.abs()
        + dc.error_estimate
        + xc.error_estimate
        + xb.error_estimate
        + total.error_estimate;
    if residual.abs() > allowed {
        return Err(Error::Diagnostic {
            quantity: "compact total vs sum of contributions",
            residual,
        });
    }
    Ok(out)
}

/// `m Z⁴/(8c²)`, the leading relativistic correction to the bound-state
/// energy; a natural unit for the QED corrections.
pub fn relativistic_unit(p: &ModelParams) -> f64 {
    p.m() * p.z().powi(4) / (8.0 * p.c() * p.c())
}
