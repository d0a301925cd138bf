//! Complex 2x2 and 4x4 matrices for two-component spinors and pairs of
//! them.
//!
//! Four-by-four matrices use the composite index layout `rho nu, sigma tau`
//! with row `2 rho + nu` and column `2 sigma + tau`, so that
//! `(A ⊗ B)[2ρ+ν][2σ+τ] = A[ρ][σ] B[ν][τ]`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[Complex64; 2]; 2]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4(pub [[Complex64; 4]; 4]);

/// Which factor of a two-particle matrix a partial trace removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Particle {
    First,
    Second,
}

/// Two-particle contact interaction variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InteractionKind {
    /// `I⊗I - σ1⊗σ1`: Coulomb plus Breit.
    #[default]
    CoulombBreit,
    /// `I⊗I` only.
    CoulombOnly,
}

impl CMat2 {
    pub const fn new(a: [[Complex64; 2]; 2]) -> Self {
        Self(a)
    }

    pub fn from_real(a: [[f64; 2]; 2]) -> Self {
        Self([
            [Complex64::new(a[0][0], 0.0), Complex64::new(a[0][1], 0.0)],
            [Complex64::new(a[1][0], 0.0), Complex64::new(a[1][1], 0.0)],
        ])
    }

    pub const fn zero() -> Self {
        Self([[ZERO; 2]; 2])
    }

    pub const fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn sigma1() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn sigma2() -> Self {
        Self([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]])
    }

    pub const fn sigma3() -> Self {
        Self([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.0;
        Self([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let a = &self.0;
        Self([[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]])
    }

    /// Inverse, or `None` when the determinant underflows.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() < f64::MIN_POSITIVE {
            return None;
        }
        let a = &self.0;
        Some(Self([
            [a[1][1] / d, -a[0][1] / d],
            [-a[1][0] / d, a[0][0] / d],
        ]))
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let a = &self.0;
        [
            a[0][0] * v[0] + a[0][1] * v[1],
            a[1][0] * v[0] + a[1][1] * v[1],
        ]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Self::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, rhs: CMat2) -> CMat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for CMat2 {
    type Output = CMat2;
    fn sub(self, rhs: CMat2) -> CMat2 {
        self + (-rhs)
    }
}

impl Neg for CMat2 {
    type Output = CMat2;
    fn neg(self) -> CMat2 {
        self.scale(-ONE)
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, rhs: CMat2) -> CMat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        CMat2(out)
    }
}

impl CMat4 {
    pub const fn zero() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn apply(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                m = m.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        m
    }
}

impl Add for CMat4 {
    type Output = CMat4;
    fn add(self, rhs: CMat4) -> CMat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for CMat4 {
    type Output = CMat4;
    fn sub(self, rhs: CMat4) -> CMat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Mul for CMat4 {
    type Output = CMat4;
    fn mul(self, rhs: CMat4) -> CMat4 {
        let mut out = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut c = CMat4::zero();
    for rho in 0..2 {
        for nu in 0..2 {
            for sigma in 0..2 {
                for tau in 0..2 {
                    c.0[2 * rho + nu][2 * sigma + tau] = a.0[rho][sigma] * b.0[nu][tau];
                }
            }
        }
    }
    c
}

/// `ψ ⊗ φ` with components `(ψ1φ1, ψ1φ2, ψ2φ1, ψ2φ2)`.
pub fn tensor_vec(psi: [Complex64; 2], phi: [Complex64; 2]) -> [Complex64; 4] {
    [
        psi[0] * phi[0],
        psi[0] * phi[1],
        psi[1] * phi[0],
        psi[1] * phi[1],
    ]
}

pub fn partial_trace(c: &CMat4, which: Particle) -> CMat2 {
    let mut out = CMat2::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = match which {
                // (Tr1 C)_{ν,τ} = Σ_ρ C_{ρν,ρτ}
                Particle::First => (0..2).map(|r| c.0[2 * r + i][2 * r + j]).sum(),
                // (Tr2 C)_{ρ,σ} = Σ_ν C_{ρν,σν}
                Particle::Second => (0..2).map(|n| c.0[2 * i + n][2 * j + n]).sum(),
            };
        }
    }
    out
}

/// Exchange matrix `X`: swaps the second and third rows, so that
/// `X (ψ ⊗ φ) = φ ⊗ ψ`.
pub fn permutation_x() -> CMat4 {
    CMat4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// Matrix coefficient of `δ(x1 - x2)` in the two-particle interaction.
pub fn interaction_kernel(kind: InteractionKind) -> CMat4 {
    let coulomb = tensor(&CMat2::identity(), &CMat2::identity());
    match kind {
        InteractionKind::CoulombOnly => coulomb,
        InteractionKind::CoulombBreit => coulomb - tensor(&CMat2::sigma1(), &CMat2::sigma1()),
    }
}

impl CMat4 {
    pub fn from_real(a: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = Complex64::new(a[i][j], 0.0);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    prop_compose! {
        fn arb_mat2()(v in proptest::array::uniform8(-2.0f64..2.0)) -> CMat2 {
            CMat2([[c(v[0], v[1]), c(v[2], v[3])], [c(v[4], v[5]), c(v[6], v[7])]])
        }
    }

    prop_compose! {
        fn arb_mat4()(v in proptest::collection::vec(-2.0f64..2.0, 32)) -> CMat4 {
            let mut m = CMat4::zero();
            for i in 0..4 {
                for j in 0..4 {
                    m.0[i][j] = c(v[8 * i + 2 * j], v[8 * i + 2 * j + 1]);
                }
            }
            m
        }
    }

    #[test]
    fn identity_tensor_identity() {
        let c4 = tensor(&CMat2::identity(), &CMat2::identity());
        assert_eq!(c4, CMat4::identity());
    }

    #[test]
    fn sigma1_tensor_sigma1_is_traceless() {
        let c4 = tensor(&CMat2::sigma1(), &CMat2::sigma1());
        assert_eq!(c4.trace(), ZERO);
    }

    #[test]
    fn tensor_layout_matches_composite_index_table() {
        let a = CMat2([[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 0.0)]]);
        let b = CMat2([[c(5.0, 0.0), c(6.0, 0.0)], [c(7.0, 0.0), c(8.0, 0.0)]]);
        let t = tensor(&a, &b);
        // row 12, column 21: A_{1,2} B_{2,1}
        assert_eq!(t.0[1][2], c(2.0 * 7.0, 0.0));
        // row 21, column 12: A_{2,1} B_{1,2}
        assert_eq!(t.0[2][1], c(3.0 * 6.0, 0.0));
        assert_eq!(t.0[3][0], c(3.0 * 7.0, 0.0));
    }

    #[test]
    fn partial_traces_of_identity_and_sigma3() {
        let id = CMat2::identity();
        let t = partial_trace(&tensor(&id, &id), Particle::Second);
        assert_eq!(t, id.scale(c(2.0, 0.0)));
        let b = CMat2([[c(1.0, 2.0), c(0.5, 0.0)], [c(-1.0, 1.0), c(3.0, 0.0)]]);
        let t = partial_trace(&tensor(&CMat2::sigma3(), &b), Particle::First);
        assert!(t.max_abs() < 1e-15);
    }

    #[test]
    fn exchange_matrix_literal_and_involution() {
        let x = permutation_x();
        let expected = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(x.0[i][j], c(expected[i][j], 0.0));
            }
        }
        assert_eq!(x * x, CMat4::identity());
    }

    #[test]
    fn exchange_swaps_basis_tensors() {
        let e = [[ONE, ZERO], [ZERO, ONE]];
        let x = permutation_x();
        for psi in e {
            for phi in e {
                assert_eq!(x.apply(tensor_vec(psi, phi)), tensor_vec(phi, psi));
            }
        }
    }

    #[test]
    fn kernel_is_hermitian_with_trace_four() {
        let w = interaction_kernel(InteractionKind::CoulombBreit);
        assert_eq!(w.adjoint(), w);
        assert_eq!(w.trace(), c(4.0, 0.0));
        // W^2 = 2W and Tr W = 4 pin the spectrum to {0, 0, 2, 2}
        let w2 = w * w;
        let two_w = w + w;
        assert!(w2.max_abs_diff(&two_w) < 1e-15);
    }

    #[test]
    fn kernel_annihilates_plus_one_eigenvectors_of_sigma1_pair() {
        let w = interaction_kernel(InteractionKind::CoulombBreit);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [c(s, 0.0), c(s, 0.0)];
        let minus = [c(s, 0.0), c(-s, 0.0)];
        let ss = tensor(&CMat2::sigma1(), &CMat2::sigma1());
        for (a, b, eig) in [
            (plus, plus, 1.0),
            (minus, minus, 1.0),
            (plus, minus, -1.0),
            (minus, plus, -1.0),
        ] {
            let v = tensor_vec(a, b);
            let sv = ss.apply(v);
            for k in 0..4 {
                assert!((sv[k] - v[k] * eig).norm() < 1e-15);
            }
            let wv = w.apply(v);
            for k in 0..4 {
                let expected = v[k] * (1.0 - eig);
                assert!((wv[k] - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coulomb_only_kernel_is_identity() {
        assert_eq!(
            interaction_kernel(InteractionKind::CoulombOnly),
            CMat4::identity()
        );
    }

    #[test]
    fn inverse_round_trip() {
        let a = CMat2([[c(1.0, 2.0), c(0.5, 0.0)], [c(-1.0, 1.0), c(3.0, 0.0)]]);
        let inv = a.inverse().unwrap();
        assert!((a * inv).max_abs_diff(&CMat2::identity()) < 1e-15);
        assert!(CMat2::zero().inverse().is_none());
    }

    proptest! {
        #[test]
        fn full_trace_factorises(a in arb_mat2(), b in arb_mat2()) {
            let t = tensor(&a, &b).trace();
            prop_assert!((t - a.trace() * b.trace()).norm() < 1e-14);
        }

        #[test]
        fn partial_traces_of_products(a in arb_mat2(), b in arb_mat2()) {
            let t = tensor(&a, &b);
            let t1 = partial_trace(&t, Particle::First);
            let t2 = partial_trace(&t, Particle::Second);
            prop_assert!(t1.max_abs_diff(&b.scale(a.trace())) < 1e-14);
            prop_assert!(t2.max_abs_diff(&a.scale(b.trace())) < 1e-14);
        }

        #[test]
        fn partial_then_total_trace(m in arb_mat4()) {
            for which in [Particle::First, Particle::Second] {
                let t = partial_trace(&m, which).trace();
                prop_assert!((t - m.trace()).norm() < 1e-14);
            }
        }
    }
}
