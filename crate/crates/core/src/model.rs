//! Closed-form states of the 1D Dirac operator with a delta potential.
//!
//! The free operator is `D0 = -i c σ1 d/dx + σ3 m c²`; the nucleus enters
//! only through the jump condition `ψ(0+) = M ψ(0-)`.

use crate::error::{Error, Result};
use crate::spin::CMat2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

pub const DEFAULT_C: f64 = 137.036;

/// `sgn` with `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Nuclear charge, speed of light and electron mass in Hartree units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    z: f64,
    c: f64,
    m: f64,
}

impl ModelParams {
    pub fn new(z: f64, c: f64, m: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParams(format!("c must be positive, got {c}")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParams(format!("m must be positive, got {m}")));
        }
        if !(z.is_finite() && (0.0..=2.0 * c).contains(&z)) {
            return Err(Error::InvalidParams(format!(
                "Z must lie in [0, 2c] = [0, {}], got {z}",
                2.0 * c
            )));
        }
        Ok(Self { z, c, m })
    }

    /// `m = 1`, `c = 137.036`.
    pub fn with_z(z: f64) -> Result<Self> {
        Self::new(z, DEFAULT_C, 1.0)
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn rest_energy(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// Inverse reduced Compton wavelength `m c`.
    pub fn compton_k(&self) -> f64 {
        self.m * self.c
    }

    pub fn derive(&self) -> DerivedParams {
        DerivedParams::from(*self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedParams {
    pub params: ModelParams,
    pub lambda: f64,
    pub theta: f64,
    pub kappa: f64,
    pub a: f64,
    pub eps1: f64,
}

impl From<ModelParams> for DerivedParams {
    fn from(p: ModelParams) -> Self {
        let lambda = p.z / (2.0 * p.c);
        let l2 = 1.0 + lambda * lambda;
        let kappa = 2.0 * p.m * p.c * lambda / l2;
        Self {
            params: p,
            lambda,
            theta: 2.0 * lambda.atan(),
            kappa,
            a: (kappa / l2).sqrt(),
            eps1: p.rest_energy() * (1.0 - lambda * lambda) / l2,
        }
    }
}

pub fn derive(p: &ModelParams) -> DerivedParams {
    p.derive()
}

impl DerivedParams {
    pub fn has_bound_state(&self) -> bool {
        self.kappa > 0.0
    }

    fn require_bound_state(&self) -> Result<()> {
        if self.has_bound_state() {
            Ok(())
        } else {
            Err(Error::NoBoundState)
        }
    }

    pub fn dispersion(&self, k: f64) -> Dispersion {
        Dispersion::new(&self.params, k)
    }
}

/// Free dispersion data at momentum `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Dispersion {
    pub k: f64,
    pub eps_k: f64,
    pub s_k: f64,
    pub a_k: f64,
    pub b_k: f64,
}

impl Dispersion {
    pub fn new(p: &ModelParams, k: f64) -> Self {
        let mc2 = p.rest_energy();
        let kc = k * p.c;
        let eps_k = kc.hypot(mc2);
        let sum = eps_k + mc2;
        Self {
            k,
            eps_k,
            s_k: kc / sum,
            a_k: (sum / (2.0 * PI * eps_k)).sqrt(),
            b_k: (sum / (4.0 * PI * eps_k)).sqrt(),
        }
    }

    /// `ε_k - m c²` without cancellation.
    pub fn kinetic(&self, p: &ModelParams) -> f64 {
        self.s_k * self.k * p.c
    }
}

/// Value of a two-component wavefunction at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor {
    pub upper: Complex64,
    pub lower: Complex64,
}

impl Spinor {
    pub fn new(upper: Complex64, lower: Complex64) -> Self {
        Self { upper, lower }
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.upper, self.lower]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.upper * s, self.lower * s)
    }

    /// `self† other`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.upper.conj() * other.upper + self.lower.conj() * other.lower
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        (self.upper - other.upper)
            .norm()
            .max((self.lower - other.lower).norm())
    }
}

impl From<[Complex64; 2]> for Spinor {
    fn from(v: [Complex64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Gerade,
    Ungerade,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StateLabel {
    pub branch: Branch,
    pub parity: Parity,
}

impl StateLabel {
    pub const POSITIVE_GERADE: Self = Self::new(Branch::Positive, Parity::Gerade);
    pub const POSITIVE_UNGERADE: Self = Self::new(Branch::Positive, Parity::Ungerade);
    pub const NEGATIVE_GERADE: Self = Self::new(Branch::Negative, Parity::Gerade);
    pub const NEGATIVE_UNGERADE: Self = Self::new(Branch::Negative, Parity::Ungerade);
    pub const ALL: [Self; 4] = [
        Self::POSITIVE_GERADE,
        Self::POSITIVE_UNGERADE,
        Self::NEGATIVE_GERADE,
        Self::NEGATIVE_UNGERADE,
    ];

    pub const fn new(branch: Branch, parity: Parity) -> Self {
        Self { branch, parity }
    }

    /// Whether a `k = 0` member of this family exists.
    pub fn allows_zero_momentum(&self) -> bool {
        matches!(
            (self.branch, self.parity),
            (Branch::Positive, Parity::Gerade) | (Branch::Negative, Parity::Ungerade)
        )
    }

    pub fn name(&self) -> &'static str {
        match (self.branch, self.parity) {
            (Branch::Positive, Parity::Gerade) => "positive-energy gerade",
            (Branch::Positive, Parity::Ungerade) => "positive-energy ungerade",
            (Branch::Negative, Parity::Gerade) => "negative-energy gerade",
            (Branch::Negative, Parity::Ungerade) => "negative-energy ungerade",
        }
    }

    /// `+1` or `-1` times `ε_k`.
    pub fn energy_sign(&self) -> f64 {
        match self.branch {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NonrelExpansion {
    pub rest: f64,
    pub nonrel: f64,
    pub leading_corr: f64,
    /// `ε̃₁ - (rest + nonrel + leading_corr) = -m Z⁴ λ²/(8c²(1 + λ²))`, free
    /// of the cancellation a direct subtraction suffers at large c.
    pub remainder: f64,
}

impl NonrelExpansion {
    pub fn sum(&self) -> f64 {
        self.rest + self.nonrel + self.leading_corr
    }
}

/// `ε̃₁ ≈ m c² - m Z²/2 + m Z⁴/(8 c²)`.
pub fn nonrel_expansion(p: &ModelParams) -> NonrelExpansion {
    let (z, c, m) = (p.z, p.c, p.m);
    let l2 = (z / (2.0 * c)).powi(2);
    let leading_corr = m * z.powi(4) / (8.0 * c * c);
    NonrelExpansion {
        rest: p.rest_energy(),
        nonrel: -m * z * z / 2.0,
        leading_corr,
        remainder: -leading_corr * l2 / (1.0 + l2),
    }
}

pub fn bound_spinor(d: &DerivedParams, x: f64) -> Result<Spinor> {
    d.require_bound_state()?;
    let e = d.a * (-d.kappa * x.abs()).exp();
    Ok(Spinor::new(
        Complex64::new(e, 0.0),
        Complex64::new(0.0, d.lambda * sgn(x) * e),
    ))
}

fn check_momentum(k: f64, allow_zero: bool) -> Result<()> {
    let ok = k.is_finite() && if allow_zero { k >= 0.0 } else { k > 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidMomentum {
            k,
            expected: if allow_zero {
                "finite and >= 0"
            } else {
                "finite and > 0"
            },
        })
    }
}

/// Symmetry-adapted free continuum state.
pub fn free_state(p: &ModelParams, label: StateLabel, k: f64, x: f64) -> Result<Spinor> {
    check_momentum(k, true)?;
    if k == 0.0 && !label.allows_zero_momentum() {
        return Err(Error::NoZeroMomentumState(label.name()));
    }
    let disp = Dispersion::new(p, k);
    let (s, a) = (disp.s_k, disp.a_k);
    let (sin, cos) = (k * x).sin_cos();
    let re = |v: f64| Complex64::new(a * v, 0.0);
    let im = |v: f64| Complex64::new(0.0, a * v);
    Ok(match (label.branch, label.parity) {
        (Branch::Positive, Parity::Gerade) => Spinor::new(re(cos), im(s * sin)),
        (Branch::Positive, Parity::Ungerade) => Spinor::new(re(sin), im(-s * cos)),
        (Branch::Negative, Parity::Gerade) => Spinor::new(im(s * cos), re(sin)),
        (Branch::Negative, Parity::Ungerade) => Spinor::new(im(-s * sin), re(cos)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseShifts {
    pub delta_plus: f64,
    pub delta_minus: f64,
}

/// `tan δ± = λ (ε_k ± m c²) / (k c)`, principal branch.
///
/// At `k = 0` the limits `(π/2, 0)` are returned (`(0, 0)` when `Z = 0`).
pub fn phase_shifts(p: &ModelParams, k: f64) -> Result<PhaseShifts> {
    check_momentum(k, true)?;
    let lambda = p.z / (2.0 * p.c);
    if k == 0.0 {
        let delta_plus = if lambda > 0.0 { FRAC_PI_2 } else { 0.0 };
        return Ok(PhaseShifts {
            delta_plus,
            delta_minus: 0.0,
        });
    }
    let s = Dispersion::new(p, k).s_k;
    Ok(PhaseShifts {
        delta_plus: lambda.atan2(s),
        delta_minus: (lambda * s).atan(),
    })
}

/// Symmetry-adapted continuum state of the hydrogen-like operator.
pub fn scattering_state(p: &ModelParams, label: StateLabel, k: f64, x: f64) -> Result<Spinor> {
    check_momentum(k, false)?;
    let disp = Dispersion::new(p, k);
    let PhaseShifts {
        delta_plus,
        delta_minus,
    } = phase_shifts(p, k)?;
    let (s, a) = (disp.s_k, disp.a_k);
    let (kx, sg) = (k * x.abs(), sgn(x));
    let re = |v: f64| Complex64::new(a * v, 0.0);
    let im = |v: f64| Complex64::new(0.0, a * v);
    Ok(match (label.branch, label.parity) {
        (Branch::Positive, Parity::Gerade) => {
            let (sin, cos) = (kx + delta_plus).sin_cos();
            Spinor::new(re(cos), im(s * sg * sin))
        }
        (Branch::Positive, Parity::Ungerade) => {
            let (sin, cos) = (kx + delta_minus).sin_cos();
            Spinor::new(re(sg * sin), im(-s * cos))
        }
        (Branch::Negative, Parity::Gerade) => {
            let (sin, cos) = (kx - delta_minus).sin_cos();
            Spinor::new(im(s * cos), re(sg * sin))
        }
        (Branch::Negative, Parity::Ungerade) => {
            let (sin, cos) = (kx - delta_plus).sin_cos();
            Spinor::new(im(-s * sg * sin), re(cos))
        }
    })
}

/// Jump matrix `M` with `tan(θ/2) = λ`.
pub fn boundary_matrix(p: &ModelParams) -> CMat2 {
    let lambda = p.z / (2.0 * p.c);
    let l2 = 1.0 + lambda * lambda;
    let cos = (1.0 - lambda * lambda) / l2;
    let sin = 2.0 * lambda / l2;
    CMat2::new([
        [Complex64::new(cos, 0.0), Complex64::new(0.0, sin)],
        [Complex64::new(0.0, sin), Complex64::new(cos, 0.0)],
    ])
}

/// `ψ̃₁(x) ψ̃₁(x)†`.
pub fn electron_density_matrix(d: &DerivedParams, x: f64) -> Result<CMat2> {
    d.require_bound_state()?;
    let pre = d.kappa / (1.0 + d.lambda * d.lambda) * (-2.0 * d.kappa * x.abs()).exp();
    let off = d.lambda * sgn(x) * pre;
    Ok(CMat2::new([
        [Complex64::new(pre, 0.0), Complex64::new(0.0, -off)],
        [
            Complex64::new(0.0, off),
            Complex64::new(d.lambda * d.lambda * pre, 0.0),
        ],
    ]))
}

/// `κ e^{-2κ|x|}`.
pub fn electron_density(d: &DerivedParams, x: f64) -> Result<f64> {
    d.require_bound_state()?;
    Ok(d.kappa * (-2.0 * d.kappa * x.abs()).exp())
}

/// `tr[c σ1 n(x)]` for any local density matrix.
pub fn current_of(c: f64, n: &CMat2) -> f64 {
    (CMat2::sigma1() * *n).trace().re * c
}

pub fn electron_current(d: &DerivedParams, x: f64) -> Result<f64> {
    Ok(current_of(d.params.c, &electron_density_matrix(d, x)?))
}
