//! Resolvent route: free Green function, its change due to the nucleus,
//! densities from imaginary-frequency integrals, the Uehling density and
//! the vacuum electron/positron numbers.

use crate::error::{Error, Result};
use crate::model::{sgn, DerivedParams, Dispersion, ModelParams};
use crate::quadrature::{self, AxisSymmetry, Domain, QuadResult, QuadratureSpec};
use crate::require;
use crate::spin::CMat2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

const POLE_TOLERANCE: f64 = 1e-12;

/// `κ(ω)`, `g(ω)`, `z1(ω)`, `z2(ω)` for one set of parameters.
#[derive(Clone, Copy, Debug)]
pub struct ResolventScalars {
    mc2: f64,
    c: f64,
    lambda: f64,
}

impl ResolventScalars {
    pub fn new(p: &ModelParams) -> Self {
        Self {
            mc2: p.rest_energy(),
            c: p.c(),
            lambda: p.z() / (2.0 * p.c()),
        }
    }

    /// `sqrt(m²c⁴ - ω²)/c` with non-negative real part.
    pub fn kappa(&self, omega: Complex64) -> Complex64 {
        let k = (self.mc2 * self.mc2 - omega * omega).sqrt() / self.c;
        if k.re < 0.0 {
            -k
        } else {
            k
        }
    }

    /// `sqrt((mc² + ω)/(mc² - ω))`, principal branch.
    pub fn g(&self, omega: Complex64) -> Complex64 {
        ((self.mc2 + omega) / (self.mc2 - omega)).sqrt()
    }

    pub fn z1_denominator(&self, omega: Complex64) -> Complex64 {
        1.0 - self.lambda * self.g(omega)
    }

    pub fn z2_denominator(&self, omega: Complex64) -> Complex64 {
        1.0 + self.lambda * self.g(-omega)
    }

    pub fn z1(&self, omega: Complex64) -> Complex64 {
        1.0 / self.z1_denominator(omega)
    }

    pub fn z2(&self, omega: Complex64) -> Complex64 {
        1.0 / self.z2_denominator(omega)
    }

    fn check_resolvent_set(&self, omega: Complex64) -> Result<()> {
        if omega.im == 0.0 && omega.re.abs() >= self.mc2 {
            return Err(Error::SpectralFrequency {
                re: omega.re,
                im: omega.im,
            });
        }
        Ok(())
    }
}

/// Free resolvent `G₀(x, x'; ω) = (ω - D₀)⁻¹`.
pub fn free_resolvent(p: &ModelParams, x: f64, x2: f64, omega: Complex64) -> Result<CMat2> {
    let rs = ResolventScalars::new(p);
    rs.check_resolvent_set(omega)?;
    let i = Complex64::i();
    let sg = sgn(x - x2);
    let pre = -(-rs.kappa(omega) * (x - x2).abs()).exp() / (2.0 * p.c());
    Ok(CMat2::new([
        [rs.g(omega) * pre, i * sg * pre],
        [i * sg * pre, -rs.g(-omega) * pre],
    ]))
}

/// Whether the `z1`, `z2` resummation factors are kept or set to one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum Order {
    #[default]
    All,
    /// Linear in `Z`: `z1 = z2 = 1`.
    First,
}

/// `ΔG = G - G₀` in closed form.
pub fn resolvent_correction(
    p: &ModelParams,
    x: f64,
    x2: f64,
    omega: Complex64,
    order: Order,
) -> Result<CMat2> {
    let rs = ResolventScalars::new(p);
    rs.check_resolvent_set(omega)?;
    let (z1, z2) = match order {
        Order::First => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        Order::All => {
            let (d1, d2) = (rs.z1_denominator(omega), rs.z2_denominator(omega));
            if d1.norm() < POLE_TOLERANCE || d2.norm() < POLE_TOLERANCE {
                return Err(Error::PoleProximity {
                    re: omega.re,
                    im: omega.im,
                });
            }
            (1.0 / d1, 1.0 / d2)
        }
    };
    let i = Complex64::i();
    let (g, gm) = (rs.g(omega), rs.g(-omega));
    let (s, s2) = (sgn(x), sgn(x2));
    let g1 = CMat2::new([[g * g, -i * s2 * g], [i * s * g, (s * s2).into()]]);
    let g2 = CMat2::new([[(s * s2).into(), -i * s * gm], [i * s2 * gm, gm * gm]]);
    let pre = -p.z() / (4.0 * p.c() * p.c()) * (-rs.kappa(omega) * (x.abs() + x2.abs())).exp();
    Ok((g1.scale(z1) + g2.scale(z2)).scale(pre))
}

/// `tr ΔG(x, x; iu)` in the form valid for `x ≠ 0`. At `x = 0` it is used
/// as the limit `x → 0`, which is what the spectral density reproduces; the
/// literal `sgn(0) = 0` value would not decay in `u`.
///
/// With `g² + 1 = 2mc²/(mc² - ω)` and `g(-ω)² + 1 = 2mc²/(mc² + ω)` the two
/// `O(1/u)` terms are combined analytically, so that the `O(1/u²)` tail is
/// free of cancellation.
pub fn resolvent_trace(p: &ModelParams, x: f64, u: f64, order: Order) -> Complex64 {
    let rs = ResolventScalars::new(p);
    let mc2 = p.rest_energy();
    let w = Complex64::new(0.0, u);
    let bracket = match order {
        Order::First => Complex64::new(2.0 * mc2, 0.0),
        Order::All => {
            let (d1, d2) = (rs.z1_denominator(w), rs.z2_denominator(w));
            let (z1, z2) = (1.0 / d1, 1.0 / d2);
            // z1 - z2 = λ (g(ω) + g(-ω)) / (d1 d2)
            let diff = rs.lambda * (rs.g(w) + rs.g(-w)) / (d1 * d2);
            mc2 * (z1 + z2) + w * diff
        }
    };
    let pre = -p.z() / (4.0 * p.c() * p.c()) * (-2.0 * rs.kappa(w) * x.abs()).exp();
    pre * 2.0 * mc2 * bracket / (mc2 * mc2 + u * u)
}

const SYMMETRY_PROBES: [f64; 4] = [0.1, 0.9, 3.0, 25.0];

/// Picks the even fast path only if `f(-u) = f(u)` at a few probe points
/// (in units of `scale`).
fn probe_symmetry<F: Fn(f64) -> f64>(f: F, scale: f64) -> AxisSymmetry {
    let even = SYMMETRY_PROBES.iter().all(|&t| {
        let (a, b) = (f(t * scale), f(-t * scale));
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    });
    if even {
        AxisSymmetry::Even
    } else {
        AxisSymmetry::General
    }
}

/// `n^vp(x) = ∫ du/2π tr ΔG(x, x; iu)`.
pub fn vp_density_green_with(
    d: &DerivedParams,
    x: f64,
    order: Order,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if d.params.z() == 0.0 {
        return Ok(QuadResult::exact(0.0));
    }
    let p = d.params;
    let mc2 = p.rest_energy();
    let f = |u: f64| resolvent_trace(&p, x, u, order).re / (2.0 * PI);
    let sym = probe_symmetry(f, mc2);
    let r = quadrature::integrate_imaginary_axis(f, sym, &spec.with_scale(mc2))?;
    require(r, "resolvent density")
}

pub fn vp_density_green(d: &DerivedParams, x: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    vp_density_green_with(d, x, Order::All, spec)
}

/// Uehling density `-(Zm/π) ∫₁^∞ dt e^{-2mc|x|t} / (t sqrt(t²-1))`,
/// evaluated with `t = cosh s` to remove the endpoint singularity.
pub fn uehling_density(p: &ModelParams, x: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    if p.z() == 0.0 {
        return Ok(QuadResult::exact(0.0));
    }
    let a = 2.0 * p.compton_k() * x.abs();
    let r = quadrature::integrate_halfline(
        |s| {
            let t = s.cosh();
            if !t.is_finite() {
                return 0.0;
            }
            (-a * t).exp() / t
        },
        &spec.with_scale(1.0).with_hint(None),
    )?;
    Ok(require(r, "Uehling density")?.scaled(-p.z() * p.m() / PI))
}

/// The same density in the frequency form
/// `-(Z m² c²/π) ∫₀^∞ du e^{-2 sqrt(m²c⁴+u²)|x|/c} / (m²c⁴+u²)`.
pub fn uehling_density_frequency(
    p: &ModelParams,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if p.z() == 0.0 {
        return Ok(QuadResult::exact(0.0));
    }
    let mc2 = p.rest_energy();
    let c = p.c();
    let r = quadrature::integrate_halfline(
        |u| {
            let e2 = mc2 * mc2 + u * u;
            (-2.0 * e2.sqrt() * x.abs() / c).exp() / e2
        },
        &spec.with_scale(mc2).with_hint(None),
    )?;
    let mc = p.compton_k();
    Ok(require(r, "Uehling density (frequency form)")?.scaled(-p.z() * mc * mc / PI))
}

/// `v_k(ω) = [s_k(mc² + ω) - ck]²` and `w_k(ω) = [(mc² - ω) + s_k ck]²`.
#[derive(Clone, Copy, Debug)]
pub struct VacuumNumberIntegrand {
    p: ModelParams,
}

impl VacuumNumberIntegrand {
    pub fn new(p: ModelParams) -> Self {
        Self { p }
    }

    pub fn v(&self, k: f64, omega: Complex64) -> Complex64 {
        let s = Dispersion::new(&self.p, k).s_k;
        let t = s * (self.p.rest_energy() + omega) - k * self.p.c();
        t * t
    }

    pub fn w(&self, k: f64, omega: Complex64) -> Complex64 {
        let s = Dispersion::new(&self.p, k).s_k;
        let t = (self.p.rest_energy() - omega) + s * k * self.p.c();
        t * t
    }
}

/// Momentum cutoff, in units of `m c`, for the separately reported electron
/// and positron numbers. Each of them grows like `ln Λ`; their difference
/// converges and is computed without cutoff.
pub const DEFAULT_NUMBER_CUTOFF: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VacuumCharges {
    pub n_e: f64,
    pub n_p: f64,
    pub n_net: f64,
    pub n_e_error: f64,
    pub n_p_error: f64,
    pub n_net_error: f64,
    /// Upper momentum limit used for `n_e` and `n_p`.
    pub cutoff: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Species {
    Electron,
    Positron,
    Net,
}

impl Species {
    fn name(self) -> &'static str {
        match self {
            Species::Electron => "vacuum electron number",
            Species::Positron => "vacuum positron number",
            Species::Net => "vacuum net charge",
        }
    }
}

/// Integrand of the vacuum numbers at `(k, u)`, divided by `2π` and with
/// `z1, z2` replaced by `z1 - 1, z2 - 1`: the first-order part integrates to
/// zero over `u` for every `k` (`∫ du (ε_k ± iu)⁻² = 0`).
fn number_integrand(p: &ModelParams, species: Species, k: f64, u: f64) -> f64 {
    let rs = ResolventScalars::new(p);
    let vw = VacuumNumberIntegrand::new(*p);
    let disp = Dispersion::new(p, k);
    let w = Complex64::new(0.0, u);
    let den = u * u + disp.eps_k * disp.eps_k;
    let (y1, y2) = (rs.z1(w) - 1.0, rs.z2(w) - 1.0);
    let electron = || -(y1 * vw.v(k, w) + y2 * vw.w(k, w)).re;
    let positron = || (y1 * vw.w(k, -w) + y2 * vw.v(k, -w)).re;
    let bracket = match species {
        Species::Electron => electron(),
        Species::Positron => positron(),
        Species::Net => electron() - positron(),
    };
    p.z() * disp.b_k * disp.b_k * bracket / (den * den * 2.0 * PI)
}

fn vacuum_number(
    p: &ModelParams,
    species: Species,
    cutoff: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mc2 = p.rest_energy();
    let f = |k: f64, u: f64| number_integrand(p, species, k, u);
    let sym = probe_symmetry(|u| f(p.compton_k(), u), mc2);
    let outer = match cutoff {
        Some(lam) => Domain::Finite {
            a: 0.0,
            b: lam * p.compton_k(),
        },
        None => Domain::HalfLine {
            scale: p.compton_k(),
        },
    };
    let inner = Domain::ImaginaryAxis {
        scale: mc2,
        symmetry: sym,
    };
    // even in k: twice the positive half-line
    let r = quadrature::integrate_2d(f, outer, inner, spec)?;
    Ok(require(r, species.name())?.scaled(2.0))
}

/// Free electrons and positrons in the polarized vacuum, with the default
/// cutoff for the separate numbers.
pub fn vacuum_numbers(p: &ModelParams, spec: &QuadratureSpec) -> Result<VacuumCharges> {
    vacuum_numbers_with_cutoff(p, DEFAULT_NUMBER_CUTOFF, spec)
}

pub fn vacuum_numbers_with_cutoff(
    p: &ModelParams,
    cutoff: f64,
    spec: &QuadratureSpec,
) -> Result<VacuumCharges> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "cutoff must be positive, got {cutoff}"
        )));
    }
    if p.z() == 0.0 {
        return Ok(VacuumCharges {
            n_e: 0.0,
            n_p: 0.0,
            n_net: 0.0,
            n_e_error: 0.0,
            n_p_error: 0.0,
            n_net_error: 0.0,
            cutoff,
        });
    }
    let (net, (e, pos)) = rayon::join(
        || vacuum_number(p, Species::Net, None, spec),
        || {
            rayon::join(
                || vacuum_number(p, Species::Electron, Some(cutoff), spec),
                || vacuum_number(p, Species::Positron, Some(cutoff), spec),
            )
        },
    );
    let (net, e, pos) = (net?, e?, pos?);
    Ok(VacuumCharges {
        n_e: e.value,
        n_p: pos.value,
        n_net: net.value,
        n_e_error: e.error_estimate,
        n_p_error: pos.error_estimate,
        n_net_error: net.error_estimate,
        cutoff,
    })
}
