//! Manifestly covariant layer: the 2×2 Hermitian image of a four-vector,
//! the SL(2,ℂ) → SO⁺(1,3) covering map, the Faraday tensor with its
//! self-dual split, the symmetric-spinor form of the RS field and the
//! first-order spinor wave equation.
//!
//! Conventions:
//!
//! - `η = diag(1, -1, -1, -1)`, `ε^{0123} = +1` (so `ε_{0123} = -1`);
//! - `x̄ = x⁰ + x·σ`, and `A` acts by `x̄ ↦ A x̄ A†`;
//! - spinor indices are raised with `ε^{12} = +1`: `ψ^α = ε^{αβ} ψ_β`;
//! - tensors are stored with lower indices, `F_{0i} = E_i/c`,
//!   `F_{ij} = -ε_{ijk} B_k`;
//! - `dual(F)_{μν} = (i/2) ε_{μνρσ} F^{ρσ}`, `F^± = F ± dual(F)`, which gives
//!   `F^±_{0i} = E_i/c ± i B_i`;
//! - the symmetric spinor is `F_{αβ} = (σ̄ⁱ ε)_{αβ} F_i⁺` and its conjugate
//!   `F̄ = (σⁱ ε) F_i⁻`; they transform as `A F Aᵀ` and `Ā F̄ Āᵀ` with
//!   `Ā = (A†)⁻¹`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{self, CVec3, RSField, RVec3, UnitsConfig, CZERO, I};
use crate::par;
use crate::rng::{self, SeededRng};

pub type CMat2 = Matrix2<Complex64>;
pub type CMat4 = Matrix4<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Contravariant components `(x⁰, x¹, x², x³)` with `x⁰ = ct`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([x0, x1, x2, x3])
    }

    pub fn basis(mu: usize) -> Self {
        let mut x = [0.0; 4];
        x[mu] = 1.0;
        FourVector(x)
    }

    /// `η_{μν} x^μ x^ν`.
    pub fn interval(&self) -> f64 {
        let x = &self.0;
        x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3]
    }

    pub fn lowered(&self) -> [f64; 4] {
        let x = &self.0;
        [x[0], -x[1], -x[2], -x[3]]
    }
}

pub struct MinkowskiMetric;

impl MinkowskiMetric {
    pub const DIAG: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

    pub fn component(mu: usize, nu: usize) -> f64 {
        if mu == nu {
            Self::DIAG[mu]
        } else {
            0.0
        }
    }

    pub fn matrix() -> Matrix4<f64> {
        Matrix4::from_diagonal(&Self::DIAG.into())
    }
}

/// The Pauli set `σ^μ = (1, σ)` and `σ̄^μ = (1, -σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSet {
    pub sigma: [CMat2; 4],
    pub sigma_bar: [CMat2; 4],
}

impl SigmaSet {
    pub fn new() -> Self {
        let z = CZERO;
        let id = CMat2::identity();
        let sx = CMat2::new(z, ONE, ONE, z);
        let sy = CMat2::new(z, -I, I, z);
        let sz = CMat2::new(ONE, z, z, -ONE);
        SigmaSet {
            sigma: [id, sx, sy, sz],
            sigma_bar: [id, -sx, -sy, -sz],
        }
    }

    /// `v·σ` for a complex 3-vector.
    pub fn dot(&self, v: &CVec3) -> CMat2 {
        self.sigma[1] * v[0] + self.sigma[2] * v[1] + self.sigma[3] * v[2]
    }
}

impl Default for SigmaSet {
    fn default() -> Self {
        SigmaSet::new()
    }
}

/// Two-index spinor metric and the four-index Levi-Civita symbol.
pub struct EpsilonSpinor;

impl EpsilonSpinor {
    /// `ε^{αβ}` with `ε^{12} = +1`.
    pub fn upper() -> CMat2 {
        CMat2::new(CZERO, ONE, -ONE, CZERO)
    }

    /// `ε_{αβ}` with `ε_{12} = -1`.
    pub fn lower() -> CMat2 {
        CMat2::new(CZERO, -ONE, ONE, CZERO)
    }

    /// `ψ^α = ε^{αβ} ψ_β`.
    pub fn raise(psi: [Complex64; 2]) -> [Complex64; 2] {
        [psi[1], -psi[0]]
    }

    /// `ψ_α = ε_{αβ} ψ^β`.
    pub fn lower_index(psi: [Complex64; 2]) -> [Complex64; 2] {
        [-psi[1], psi[0]]
    }

    /// `ε^{μνρσ}` with `ε^{0123} = +1`.
    pub fn levi_civita_upper(idx: [usize; 4]) -> f64 {
        permutation_sign(idx)
    }

    /// `ε_{μνρσ} = -ε^{μνρσ}`.
    pub fn levi_civita_lower(idx: [usize; 4]) -> f64 {
        -permutation_sign(idx)
    }
}

fn permutation_sign(mut p: [usize; 4]) -> f64 {
    for (i, &v) in p.iter().enumerate() {
        if v > 3 || p[..i].contains(&v) {
            return 0.0;
        }
    }
    let mut sign = 1.0;
    for i in 0..4 {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// `x̄` and its determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianImage {
    pub matrix: CMat2,
    pub det: f64,
}

/// `x̄ = [[x⁰+x³, x¹-ix²], [x¹+ix², x⁰-x³]]`, with `det x̄ = η_{μν}x^μx^ν`.
pub fn hermitian_map(x: &FourVector) -> HermitianImage {
    let m = hermitian_matrix(x);
    HermitianImage {
        matrix: m,
        det: (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re,
    }
}

fn hermitian_matrix(x: &FourVector) -> CMat2 {
    let [x0, x1, x2, x3] = x.0;
    CMat2::new(
        c(x0 + x3),
        Complex64::new(x1, -x2),
        Complex64::new(x1, x2),
        c(x0 - x3),
    )
}

/// Inverse of [`hermitian_map`] on Hermitian matrices (the anti-Hermitian
/// part is discarded).
fn four_vector_of(m: &CMat2) -> FourVector {
    FourVector([
        0.5 * (m[(0, 0)] + m[(1, 1)]).re,
        0.5 * (m[(1, 0)] + m[(0, 1)]).re,
        0.5 * (m[(1, 0)] - m[(0, 1)]).im,
        0.5 * (m[(0, 0)] - m[(1, 1)]).re,
    ])
}

/// Unimodular 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SL2C(CMat2);

impl SL2C {
    pub const DET_TOLERANCE: f64 = 1e-12;

    pub fn new(m: CMat2) -> Result<Self> {
        let deviation = (m.determinant() - ONE).norm();
        if !(deviation <= Self::DET_TOLERANCE) {
            return Err(Error::NotUnimodular { deviation });
        }
        Ok(SL2C(m))
    }

    pub fn identity() -> Self {
        SL2C(CMat2::identity())
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.0
    }

    pub fn neg(&self) -> Self {
        SL2C(-self.0)
    }

    /// Matrix product; no renormalisation.
    pub fn mul(&self, other: &SL2C) -> SL2C {
        SL2C(self.0 * other.0)
    }

    /// `[[d, -b], [-c, a]]`, exact for unit determinant.
    pub fn inverse(&self) -> SL2C {
        let m = &self.0;
        SL2C(CMat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]))
    }

    /// `(A†)⁻¹`, the matrix acting on dotted indices.
    pub fn dagger_inverse(&self) -> CMat2 {
        self.inverse().0.adjoint()
    }

    /// `exp(X)` for traceless `X`, via `exp X = cosh(s) + sinh(s)/s · X` with
    /// `s² = -det X`.
    pub fn exp_traceless(x: &CMat2) -> Result<Self> {
        let tr = x[(0, 0)] + x[(1, 1)];
        if tr.norm() > 1e-12 * (1.0 + x.norm()) {
            return Err(Error::NotUnimodular { deviation: tr.norm() });
        }
        let s = (-x.determinant()).sqrt();
        let sinhc = if s.norm() < 1e-8 {
            ONE + s * s / 6.0
        } else {
            s.sinh() / s
        };
        let m = CMat2::identity() * s.cosh() + x * sinhc;
        // fold the residual determinant error back into the matrix
        let d = m.determinant();
        SL2C::new(m / d.sqrt())
    }

    /// `exp(X)` with `X` traceless and entries of size about `scale`.
    pub fn random(rng: &mut SeededRng, scale: f64) -> Self {
        let (a, b, cc) = (rng::complex(rng), rng::complex(rng), rng::complex(rng));
        let x = CMat2::new(a, b, cc, -a) * c(scale);
        SL2C::exp_traceless(&x).expect("traceless generator")
    }

    /// `exp(-i θ n̂·σ / 2)`, a pure rotation.
    pub fn rotation(axis: RVec3, angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let s = SigmaSet::new();
        let gen = s.dot(&axis.map(|v| c(v / n)));
        SL2C::exp_traceless(&(gen * Complex64::new(0.0, -0.5 * angle))).expect("traceless")
    }

    /// `diag(e^{η/2}, e^{-η/2})`.
    pub fn boost_z(rapidity: f64) -> Self {
        let h = 0.5 * rapidity;
        SL2C(CMat2::new(c(h.exp()), CZERO, CZERO, c((-h).exp())))
    }
}

/// Real 4×4 matrix acting on contravariant components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix(pub Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        LorentzMatrix(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, x: &FourVector) -> FourVector {
        let v = self.0 * nalgebra::Vector4::from(x.0);
        FourVector([v[0], v[1], v[2], v[3]])
    }

    /// `max |ΛᵀηΛ - η|`.
    pub fn metric_deviation(&self) -> f64 {
        let eta = MinkowskiMetric::matrix();
        (self.0.transpose() * eta * self.0 - eta).abs().max()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn mul(&self, other: &LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * other.0)
    }

    /// `η Λᵀ η`, the inverse of any metric-preserving matrix.
    pub fn inverse(&self) -> LorentzMatrix {
        let eta = MinkowskiMetric::matrix();
        LorentzMatrix(eta * self.0.transpose() * eta)
    }
}

/// `Λ(A)` defined by `(Λx)‾ = A x̄ A†`; column `ν` is the image of the basis
/// vector `e_ν`. `Λ(-A) = Λ(A)` holds bit for bit.
pub fn lorentz_from_sl2c(a: &SL2C) -> LorentzMatrix {
    let m = a.matrix();
    let mut out = Matrix4::zeros();
    for nu in 0..4 {
        let img = m * hermitian_matrix(&FourVector::basis(nu)) * m.adjoint();
        let col = four_vector_of(&img);
        for mu in 0..4 {
            out[(mu, nu)] = col.0[mu];
        }
    }
    LorentzMatrix(out)
}

/// Antisymmetric rank-2 tensor with lower indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntisymTensor(CMat4);

/// Index pairs `(μ, ν)` with `μ < ν`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl AntisymTensor {
    pub fn new(m: CMat4) -> Result<Self> {
        let dev = (m + m.transpose()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if dev > 0.0 {
            return Err(Error::InvalidLattice(format!(
                "tensor is not antisymmetric: max |F + Fᵀ| = {dev:e}"
            )));
        }
        Ok(AntisymTensor(m))
    }

    pub fn zero() -> Self {
        AntisymTensor(CMat4::zeros())
    }

    /// Builds from the six independent components in [`PAIRS`] order.
    pub fn from_components(v: [Complex64; 6]) -> Self {
        let mut m = CMat4::zeros();
        for (n, &(mu, nu)) in PAIRS.iter().enumerate() {
            m[(mu, nu)] = v[n];
            m[(nu, mu)] = -v[n];
        }
        AntisymTensor(m)
    }

    pub fn random(rng: &mut SeededRng) -> Self {
        AntisymTensor::from_components(std::array::from_fn(|_| rng::complex(rng)))
    }

    pub fn components(&self) -> [Complex64; 6] {
        PAIRS.map(|(mu, nu)| self.0[(mu, nu)])
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.0
    }

    pub fn get(&self, mu: usize, nu: usize) -> Complex64 {
        self.0[(mu, nu)]
    }

    /// `F^{μν} = η^{μα} η^{νβ} F_{αβ}`.
    pub fn raised(&self) -> CMat4 {
        let mut m = self.0;
        for mu in 0..4 {
            for nu in 0..4 {
                m[(mu, nu)] *= MinkowskiMetric::DIAG[mu] * MinkowskiMetric::DIAG[nu];
            }
        }
        m
    }

    /// Lowers a contravariant tensor.
    pub fn from_upper(m: &CMat4) -> Result<Self> {
        let mut out = *m;
        for mu in 0..4 {
            for nu in 0..4 {
                out[(mu, nu)] *= MinkowskiMetric::DIAG[mu] * MinkowskiMetric::DIAG[nu];
            }
        }
        AntisymTensor::new(out)
    }

    /// `(i/2) ε_{μνρσ} F^{ρσ}`.
    pub fn dual(&self) -> AntisymTensor {
        let up = self.raised();
        let mut out = CMat4::zeros();
        for &(mu, nu) in &PAIRS {
            let mut acc = CZERO;
            for &(rho, sigma) in &PAIRS {
                // both orders of (ρ, σ) contribute equally
                acc += up[(rho, sigma)] * EpsilonSpinor::levi_civita_lower([mu, nu, rho, sigma]);
            }
            out[(mu, nu)] = I * acc;
            out[(nu, mu)] = -I * acc;
        }
        AntisymTensor(out)
    }

    /// `F_{0i}`, the RS vector carried by a (anti-)self-dual tensor.
    pub fn time_space(&self) -> CVec3 {
        [self.0[(0, 1)], self.0[(0, 2)], self.0[(0, 3)]]
    }

    /// Tensor image `ΛFΛᵀ` of the contravariant components.
    pub fn transformed(&self, l: &LorentzMatrix) -> AntisymTensor {
        let lc = l.0.map(c);
        let up = lc * self.raised() * lc.transpose();
        // reassemble from both triangles to keep exact antisymmetry
        AntisymTensor::from_components(PAIRS.map(|(mu, nu)| {
            0.5 * (up[(mu, nu)] - up[(nu, mu)]) * MinkowskiMetric::DIAG[mu] * MinkowskiMetric::DIAG[nu]
        }))
    }

    pub fn max_abs_diff(&self, other: &AntisymTensor) -> f64 {
        (self.0 - other.0).iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn add(&self, other: &AntisymTensor) -> AntisymTensor {
        AntisymTensor(self.0 + other.0)
    }

    pub fn sub(&self, other: &AntisymTensor) -> AntisymTensor {
        AntisymTensor(self.0 - other.0)
    }

    pub fn scale(&self, s: Complex64) -> AntisymTensor {
        AntisymTensor(self.0 * s)
    }
}

/// Lower-index Faraday tensor of `(E, B)`: `F^{0i} = -E_i/c`,
/// `F^{ij} = -ε^{ijk} B_k`.
pub fn faraday_from_em(e: &RVec3, b: &RVec3, units: &UnitsConfig) -> AntisymTensor {
    let ec = e.map(|v| c(v / units.c));
    let b = b.map(c);
    AntisymTensor::from_components([ec[0], ec[1], ec[2], -b[2], b[1], -b[0]])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfDualParts {
    pub plus: AntisymTensor,
    pub minus: AntisymTensor,
}

impl SelfDualParts {
    pub fn reconstruct(&self) -> AntisymTensor {
        AntisymTensor((self.plus.0 + self.minus.0) * c(0.5))
    }
}

/// `F^± = F ± dual(F)`.
pub fn selfdual_split(f: &AntisymTensor) -> SelfDualParts {
    let d = f.dual();
    SelfDualParts {
        plus: f.add(&d),
        minus: f.sub(&d),
    }
}

/// `max |dual(F) - s F|` for `s = ±1`.
pub fn duality_deviation(f: &AntisymTensor, s: f64) -> f64 {
    f.dual().max_abs_diff(&f.scale(c(s)))
}

/// Self-dual tensor with `F_{0i} = v_i`.
pub fn selfdual_from_rs(v: &CVec3) -> AntisymTensor {
    // F_{ij} = i ε_{ijk} v_k
    AntisymTensor::from_components([v[0], v[1], v[2], I * v[2], -I * v[1], I * v[0]])
}

/// Anti-self-dual tensor with `F_{0i} = v_i`.
pub fn antiselfdual_from_rs(v: &CVec3) -> AntisymTensor {
    AntisymTensor::from_components([v[0], v[1], v[2], -I * v[2], I * v[1], -I * v[0]])
}

/// Symmetric 2×2 spinor. `dotted` marks the conjugate representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricSpinor {
    pub matrix: CMat2,
    pub dotted: bool,
}

impl SymmetricSpinor {
    pub fn symmetry_defect(&self) -> f64 {
        (self.matrix - self.matrix.transpose()).iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// `A F Aᵀ` (undotted) or `Ā F Āᵀ` with `Ā = (A†)⁻¹` (dotted).
    pub fn transformed(&self, a: &SL2C) -> SymmetricSpinor {
        let m = if self.dotted { a.dagger_inverse() } else { *a.matrix() };
        SymmetricSpinor {
            matrix: m * self.matrix * m.transpose(),
            dotted: self.dotted,
        }
    }

    /// Recovers `F_i^±` from the matrix.
    pub fn rs_components(&self) -> CVec3 {
        let s = SigmaSet::new();
        // F ε⁻¹ = ∓ σ·v, and ε_{αβ} is the inverse of ε^{αβ}
        let m = self.matrix * EpsilonSpinor::lower();
        let sign = if self.dotted { 0.5 } else { -0.5 };
        [1, 2, 3].map(|i| (m * s.sigma[i]).trace() * sign)
    }
}

/// `F_{αβ} = (σ̄ⁱ ε)_{αβ} v_i`.
pub fn spinor_from_rs(v: &CVec3) -> SymmetricSpinor {
    let s = SigmaSet::new();
    SymmetricSpinor {
        matrix: -s.dot(v) * EpsilonSpinor::upper(),
        dotted: false,
    }
}

/// `F̄_{α̇β̇} = (σⁱ ε)_{α̇β̇} v_i`.
pub fn conjugate_spinor_from_rs(v: &CVec3) -> SymmetricSpinor {
    let s = SigmaSet::new();
    SymmetricSpinor {
        matrix: s.dot(v) * EpsilonSpinor::upper(),
        dotted: true,
    }
}

/// Tolerance on `|dual(F) ∓ F|`, relative to `max |F|`.
pub const DUALITY_TOLERANCE: f64 = 1e-10;

/// Symmetric spinor of a self-dual tensor; rejects other input.
pub fn spinor_from_selfdual(fplus: &AntisymTensor) -> Result<SymmetricSpinor> {
    let deviation = duality_deviation(fplus, 1.0);
    if deviation > DUALITY_TOLERANCE * fplus.max_abs().max(1.0) {
        return Err(Error::NotSelfDual { deviation });
    }
    Ok(spinor_from_rs(&fplus.time_space()))
}

/// Conjugate spinor of an anti-self-dual tensor; rejects other input.
pub fn conjugate_spinor_from_antiselfdual(fminus: &AntisymTensor) -> Result<SymmetricSpinor> {
    let deviation = duality_deviation(fminus, -1.0);
    if deviation > DUALITY_TOLERANCE * fminus.max_abs().max(1.0) {
        return Err(Error::NotAntiSelfDual { deviation });
    }
    Ok(conjugate_spinor_from_rs(&fminus.time_space()))
}

/// `max ‖A F Aᵀ - F'‖` (and the dotted analogue), where `F'` is built from
/// the Λ(A)-transformed Faraday tensor.
pub fn covariance_check(a: &SL2C, e: &RVec3, b: &RVec3, units: &UnitsConfig) -> Result<f64> {
    let f = faraday_from_em(e, b, units);
    let parts = selfdual_split(&f);
    let s = spinor_from_selfdual(&parts.plus)?;
    let sbar = conjugate_spinor_from_antiselfdual(&parts.minus)?;

    let f_prime = f.transformed(&lorentz_from_sl2c(a));
    let parts_prime = selfdual_split(&f_prime);
    let s_prime = spinor_from_selfdual(&parts_prime.plus)?;
    let sbar_prime = conjugate_spinor_from_antiselfdual(&parts_prime.minus)?;

    let diff = |x: &SymmetricSpinor, y: &SymmetricSpinor| {
        (x.matrix - y.matrix).iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    };
    Ok(diff(&s.transformed(a), &s_prime).max(diff(&sbar.transformed(a), &sbar_prime)))
}

/// Value and first derivatives of an RS field at one spacetime point.
/// Derivatives are with respect to `x⁰ = ct` and `x^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorJet {
    pub value: CVec3,
    pub d0: CVec3,
    /// `grad[j] = ∂_j F`.
    pub grad: [CVec3; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveResidual {
    /// The 2×2 residual of the spinor wave equation.
    pub residual: CMat2,
    /// Components saturated with `σ^τ`: index 0 is `∇·F`, indices 1..3 are
    /// `∂₀F + i·sign ∇×F`.
    pub saturated: [Complex64; 4],
}

impl WaveResidual {
    pub fn max_abs(&self) -> f64 {
        self.residual.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn divergence(&self) -> Complex64 {
        self.saturated[0]
    }

    pub fn evolution(&self) -> CVec3 {
        [self.saturated[1], self.saturated[2], self.saturated[3]]
    }
}

/// Residual of the first-order spinor wave equation for the branch `sign`.
///
/// Positive branch: `R = (σ^μ ∂_μ) F_{(αβ)}` acting on the first index,
/// i.e. `(∂₀ + σ·∇)` on `F = -(σ·v)ε`. Negative branch: `(∂₀ - σ·∇)` on
/// `F̄ = (σ·v)ε`. In both cases `R ε⁻¹ = ∓[(∇·v) ± σ·(∂₀v ± i∇×v)]`, so the
/// half-traces against `σ^τ` give back the divergence and the evolution
/// residual.
pub fn spinor_wave_residual(jet: &SpinorJet, sign: field::Helicity) -> WaveResidual {
    let s = SigmaSet::new();
    let plus = sign == field::Helicity::Plus;
    let spin = |v: &CVec3| {
        if plus {
            spinor_from_rs(v).matrix
        } else {
            conjugate_spinor_from_rs(v).matrix
        }
    };
    let space_sign = if plus { ONE } else { -ONE };
    let mut r = spin(&jet.d0);
    for j in 0..3 {
        r += s.sigma[j + 1] * spin(&jet.grad[j]) * space_sign;
    }
    let re = r * EpsilonSpinor::lower();
    let (s0, si) = if plus { (-0.5, -0.5) } else { (-0.5, 0.5) };
    let saturated = [
        re.trace() * s0,
        (re * s.sigma[1]).trace() * si,
        (re * s.sigma[2]).trace() * si,
        (re * s.sigma[3]).trace() * si,
    ];
    WaveResidual { residual: r, saturated }
}

/// Monochromatic plane wave `F = a e^{i(k·x - ωt)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWave {
    pub amplitude: CVec3,
    pub k: RVec3,
    pub omega: f64,
}

impl PlaneWave {
    /// Solution of the branch `sign` with the given helicity amplitude:
    /// `ω = sign·c|k|` for `a = e₊(k)`.
    pub fn helical(k: RVec3, sign: field::Helicity, units: &UnitsConfig) -> Result<Self> {
        let [ep, _, _] = crate::spin::helicity_basis(&k).ok_or(Error::ZeroWavevector)?;
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        Ok(PlaneWave {
            amplitude: ep,
            k,
            omega: sign.sign() * units.c * kn,
        })
    }

    pub fn jet(&self, x: &RVec3, t: f64, units: &UnitsConfig) -> SpinorJet {
        let phase = Complex64::from_polar(
            1.0,
            self.k[0] * x[0] + self.k[1] * x[1] + self.k[2] * x[2] - self.omega * t,
        );
        let value = self.amplitude.map(|a| a * phase);
        SpinorJet {
            value,
            d0: value.map(|v| v * Complex64::new(0.0, -self.omega / units.c)),
            grad: [0, 1, 2].map(|j| value.map(|v| v * Complex64::new(0.0, self.k[j]))),
        }
    }
}

/// Spinor residual of a grid field, with spectral space derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct GridWaveResidual {
    pub max_residual: f64,
    pub divergence: Vec<Complex64>,
    pub evolution: Vec<CVec3>,
}

/// Evaluates [`spinor_wave_residual`] at every grid point. `dfdt` is `∂F/∂t`
/// (physical time); `None` takes it from the spectral evolution generator.
pub fn grid_wave_residual(
    f: &RSField,
    dfdt: Option<&RSField>,
    sign: field::Helicity,
    units: &UnitsConfig,
) -> Result<GridWaveResidual> {
    let owned;
    let dfdt = match dfdt {
        Some(d) => {
            f.grid().ensure_same(d.grid())?;
            d
        }
        None => {
            owned = crate::propagator::spectral_time_derivative(f, sign, units);
            &owned
        }
    };
    let grads = spectral_gradient(f);
    let res = par::map_range(f.data().len(), |i| {
        let jet = SpinorJet {
            value: f.data()[i],
            d0: dfdt.data()[i].map(|z| z / units.c),
            grad: [grads[0][i], grads[1][i], grads[2][i]],
        };
        spinor_wave_residual(&jet, sign)
    });
    Ok(GridWaveResidual {
        max_residual: res.iter().fold(0.0, |a, r| a.max(r.max_abs())),
        divergence: res.iter().map(|r| r.divergence()).collect(),
        evolution: res.iter().map(|r| r.evolution()).collect(),
    })
}

/// `[∂_x F, ∂_y F, ∂_z F]` by spectral differentiation.
pub fn spectral_gradient(f: &RSField) -> [Vec<CVec3>; 3] {
    let grid = f.grid();
    let fft = grid.fft();
    let spec = f.to_spectral(&fft);
    [0, 1, 2].map(|j| {
        let d = par::map_range(spec.len(), |idx| {
            let kj = grid.wavevector(idx)[j];
            spec[idx].map(|z| z * Complex64::new(0.0, kj))
        });
        f.from_spectral(&d, &fft).into_data()
    })
}
