//! Grids, real electromagnetic fields and the Riemann–Silberstein field.
//!
//! Storage is x-fastest, then y, then z, with the three vector components
//! interleaved per point. All spatial derivatives here are spectral on the
//! periodic grid, which makes transversality and the energy norm exact up to
//! roundoff for band-limited data.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{wavenumber, Fft3};
use crate::par;
use crate::rng;

pub type CVec3 = [Complex64; 3];
pub type RVec3 = [f64; 3];

pub(crate) const CZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
pub(crate) const CZERO3: CVec3 = [CZERO; 3];

/// Physical constants used by the RS construction. Natural units by default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitsConfig {
    pub c: f64,
    pub hbar: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        UnitsConfig { c: 1.0, hbar: 1.0 }
    }
}

impl UnitsConfig {
    pub fn new(c: f64, hbar: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidUnits(format!("c must be positive, got {c}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidUnits(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(UnitsConfig { c, hbar })
    }
}

/// Which branch `F = E/c ± iB` a field was built with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Helicity::Plus => 1,
            Helicity::Minus => -1,
        }
    }

    pub fn from_i32(s: i32) -> Option<Self> {
        match s {
            1 => Some(Helicity::Plus),
            -1 => Some(Helicity::Minus),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

/// Periodic Cartesian grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid3 {
    n: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
}

impl fmt::Display for Grid3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}x{} (d = {:?}, origin = {:?})",
            self.n[0], self.n[1], self.n[2], self.spacing, self.origin
        )
    }
}

impl Grid3 {
    pub fn new(n: [usize; 3], spacing: [f64; 3], origin: [f64; 3]) -> Result<Self> {
        if n.iter().any(|&m| m < 2) {
            return Err(Error::InvalidGrid(format!(
                "all point counts must be >= 2, got {n:?}"
            )));
        }
        if spacing.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::InvalidGrid(format!(
                "all spacings must be positive, got {spacing:?}"
            )));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "origin must be finite, got {origin:?}"
            )));
        }
        n[0].checked_mul(n[1])
            .and_then(|m| m.checked_mul(n[2]))
            .ok_or_else(|| Error::InvalidGrid(format!("grid {n:?} is too large")))?;
        Ok(Grid3 { n, spacing, origin })
    }

    /// `n³` points spanning a periodic box of side `length` from the origin.
    pub fn cubic(n: usize, length: f64) -> Result<Self> {
        let d = length / n as f64;
        Grid3::new([n; 3], [d; 3], [0.0; 3])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.n
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lengths(&self) -> [f64; 3] {
        [
            self.n[0] as f64 * self.spacing[0],
            self.n[1] as f64 * self.spacing[1],
            self.n[2] as f64 * self.spacing[2],
        ]
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n[0] * (j + self.n[1] * k)
    }

    /// Index with periodic wrap of signed offsets.
    pub fn index_wrapped(&self, i: isize, j: isize, k: isize) -> usize {
        let w = |a: isize, n: usize| a.rem_euclid(n as isize) as usize;
        self.index(w(i, self.n[0]), w(j, self.n[1]), w(k, self.n[2]))
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.n[0];
        let j = (idx / self.n[0]) % self.n[1];
        let k = idx / (self.n[0] * self.n[1]);
        [i, j, k]
    }

    pub fn position(&self, idx: usize) -> RVec3 {
        let c = self.coords(idx);
        [
            self.origin[0] + c[0] as f64 * self.spacing[0],
            self.origin[1] + c[1] as f64 * self.spacing[1],
            self.origin[2] + c[2] as f64 * self.spacing[2],
        ]
    }

    /// Angular wavevector of the Fourier bin stored at `idx`.
    pub fn wavevector(&self, idx: usize) -> RVec3 {
        let c = self.coords(idx);
        [
            wavenumber(c[0], self.n[0], self.spacing[0]),
            wavenumber(c[1], self.n[1], self.spacing[1]),
            wavenumber(c[2], self.n[2], self.spacing[2]),
        ]
    }

    pub(crate) fn fft(&self) -> Fft3 {
        Fft3::new(self.n[0], self.n[1], self.n[2])
    }

    pub(crate) fn ensure_same(&self, other: &Grid3) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }
}

/// Real `(E, B)` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RealEMField {
    grid: Grid3,
    e: Vec<RVec3>,
    b: Vec<RVec3>,
}

impl RealEMField {
    pub fn new(grid: Grid3, e: Vec<RVec3>, b: Vec<RVec3>) -> Result<Self> {
        for v in [&e, &b] {
            if v.len() != grid.len() {
                return Err(Error::FieldLength {
                    expected: grid.len(),
                    actual: v.len(),
                });
            }
        }
        Ok(RealEMField { grid, e, b })
    }

    pub fn from_fn(grid: Grid3, f: impl Fn(RVec3) -> (RVec3, RVec3) + Sync + Send) -> Self {
        let pairs = par::map_range(grid.len(), |idx| f(grid.position(idx)));
        let (e, b) = pairs.into_iter().unzip();
        RealEMField { grid, e, b }
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn e(&self) -> &[RVec3] {
        &self.e
    }

    pub fn b(&self) -> &[RVec3] {
        &self.b
    }
}

/// The complex RS field `F` on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RSField {
    grid: Grid3,
    data: Vec<CVec3>,
    helicity: Helicity,
}

impl RSField {
    pub fn new(grid: Grid3, data: Vec<CVec3>, helicity: Helicity) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::FieldLength {
                expected: grid.len(),
                actual: data.len(),
            });
        }
        Ok(RSField {
            grid,
            data,
            helicity,
        })
    }

    pub fn zeros(grid: Grid3, helicity: Helicity) -> Self {
        let data = vec![CZERO3; grid.len()];
        RSField {
            grid,
            data,
            helicity,
        }
    }

    pub fn from_fn(grid: Grid3, helicity: Helicity, f: impl Fn(RVec3) -> CVec3 + Sync + Send) -> Self {
        let data = par::map_range(grid.len(), |idx| f(grid.position(idx)));
        RSField {
            grid,
            data,
            helicity,
        }
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn data(&self) -> &[CVec3] {
        &self.data
    }

    pub fn helicity(&self) -> Helicity {
        self.helicity
    }

    pub fn into_data(self) -> Vec<CVec3> {
        self.data
    }

    pub(crate) fn with_data(&self, data: Vec<CVec3>) -> RSField {
        debug_assert_eq!(data.len(), self.grid.len());
        RSField {
            grid: self.grid.clone(),
            data,
            helicity: self.helicity,
        }
    }

    /// Pointwise linear combination `self + alpha * other`.
    pub fn axpy(&self, alpha: Complex64, other: &RSField) -> Result<RSField> {
        self.grid.ensure_same(&other.grid)?;
        let data = par::map_range(self.data.len(), |i| {
            let (a, b) = (self.data[i], other.data[i]);
            [a[0] + alpha * b[0], a[1] + alpha * b[1], a[2] + alpha * b[2]]
        });
        Ok(self.with_data(data))
    }

    /// Multiplies every point by `s`.
    pub fn scaled(&self, s: Complex64) -> RSField {
        self.with_data(par::map_slice(&self.data, |v| [v[0] * s, v[1] * s, v[2] * s]))
    }

    /// Maximum pointwise distance `max |F - G|`.
    pub fn max_abs_diff(&self, other: &RSField) -> f64 {
        par::max_range(self.data.len(), |i| norm3(&sub3(&self.data[i], &other.data[i])))
    }

    /// `sqrt(Σ |F - G|² dV)`.
    pub fn l2_diff(&self, other: &RSField) -> f64 {
        let dv = self.grid.cell_volume();
        (par::sum_range(self.data.len(), |i| norm_sqr3(&sub3(&self.data[i], &other.data[i]))) * dv)
            .sqrt()
    }

    /// Transforms each component to Fourier space (unnormalised forward FFT).
    pub(crate) fn to_spectral(&self, fft: &Fft3) -> Vec<CVec3> {
        let mut comps: Vec<Vec<Complex64>> = (0..3)
            .map(|c| par::map_slice(&self.data, |v| v[c]))
            .collect();
        for comp in comps.iter_mut() {
            fft.forward(comp);
        }
        interleave(&comps)
    }

    /// Inverse of [`RSField::to_spectral`], reusing this field's grid and helicity.
    pub(crate) fn from_spectral(&self, spec: &[CVec3], fft: &Fft3) -> RSField {
        let mut comps: Vec<Vec<Complex64>> = (0..3)
            .map(|c| par::map_slice(spec, |v| v[c]))
            .collect();
        for comp in comps.iter_mut() {
            fft.inverse(comp);
        }
        self.with_data(interleave(&comps))
    }
}

fn interleave(comps: &[Vec<Complex64>]) -> Vec<CVec3> {
    par::map_range(comps[0].len(), |i| [comps[0][i], comps[1][i], comps[2][i]])
}

pub(crate) fn sub3(a: &CVec3, b: &CVec3) -> CVec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm_sqr3(a: &CVec3) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

pub(crate) fn norm3(a: &CVec3) -> f64 {
    norm_sqr3(a).sqrt()
}

/// Hermitian product `Σ conj(a_i) b_i`.
pub(crate) fn inner3(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

/// Bilinear (unconjugated) product `Σ a_i b_i`.
#[allow(dead_code)]
pub(crate) fn bilinear3(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `k × v` for real `k` and complex `v`.
pub(crate) fn rcross(k: &RVec3, v: &CVec3) -> CVec3 {
    [
        k[1] * v[2] - k[2] * v[1],
        k[2] * v[0] - k[0] * v[2],
        k[0] * v[1] - k[1] * v[0],
    ]
}

/// `F = E/c + sign·i·B` at every point.
pub fn rs_from_em(em: &RealEMField, helicity: Helicity, units: &UnitsConfig) -> RSField {
    let s = helicity.sign();
    let inv_c = 1.0 / units.c;
    let data = par::map_range(em.grid.len(), |idx| {
        let (e, b) = (em.e[idx], em.b[idx]);
        [0, 1, 2].map(|c| Complex64::new(e[c] * inv_c, s * b[c]))
    });
    RSField {
        grid: em.grid.clone(),
        data,
        helicity,
    }
}

/// Inverse of [`rs_from_em`]: `E = c·Re F`, `B = sign·Im F`.
pub fn em_from_rs(f: &RSField, units: &UnitsConfig) -> RealEMField {
    let s = f.helicity.sign();
    let pairs = par::map_slice(&f.data, |v| {
        (
            [0, 1, 2].map(|c| units.c * v[c].re),
            [0, 1, 2].map(|c| s * v[c].im),
        )
    });
    let (e, b) = pairs.into_iter().unzip();
    RealEMField {
        grid: f.grid.clone(),
        e,
        b,
    }
}

/// Per-point spectral divergence and its norm `sqrt(Σ |∇·F|² dV)`.
#[derive(Clone, Debug)]
pub struct DivergenceResidual {
    pub values: Vec<Complex64>,
    pub l2: f64,
}

/// Spectral divergence `∇·F`.
pub fn divergence_residual(f: &RSField) -> DivergenceResidual {
    let grid = &f.grid;
    let fft = grid.fft();
    let spec = f.to_spectral(&fft);
    let mut div = par::map_range(spec.len(), |idx| {
        let k = grid.wavevector(idx);
        I * (k[0] * spec[idx][0] + k[1] * spec[idx][1] + k[2] * spec[idx][2])
    });
    fft.inverse(&mut div);
    let dv = grid.cell_volume();
    let l2 = (par::sum_range(div.len(), |i| div[i].norm_sqr()) * dv).sqrt();
    DivergenceResidual { values: div, l2 }
}

/// Removes the longitudinal part `k̂(k̂·F̃)` of every Fourier mode; the
/// `k = 0` mode is treated as longitudinal and dropped.
pub fn transverse_project(f: &RSField) -> RSField {
    let grid = &f.grid;
    let fft = grid.fft();
    let spec = f.to_spectral(&fft);
    let projected = par::map_range(spec.len(), |idx| {
        project_mode(&grid.wavevector(idx), &spec[idx])
    });
    f.from_spectral(&projected, &fft)
}

pub(crate) fn project_mode(k: &RVec3, v: &CVec3) -> CVec3 {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if k2 == 0.0 {
        return CZERO3;
    }
    let kn = k2.sqrt();
    let khat = [k[0] / kn, k[1] / kn, k[2] / kn];
    let along = khat[0] * v[0] + khat[1] * v[1] + khat[2] * v[2];
    [
        v[0] - khat[0] * along,
        v[1] - khat[1] * along,
        v[2] - khat[2] * along,
    ]
}

/// `Σ |F|² dV`.
pub fn energy_norm(f: &RSField) -> f64 {
    par::sum_range(f.data.len(), |i| norm_sqr3(&f.data[i])) * f.grid.cell_volume()
}

/// The same quadratic norm evaluated from Fourier amplitudes:
/// `(dV / N) Σ_k |F̃(k)|²`.
pub fn energy_norm_spectral(f: &RSField) -> f64 {
    let fft = f.grid.fft();
    let spec = f.to_spectral(&fft);
    par::sum_range(spec.len(), |i| norm_sqr3(&spec[i])) * f.grid.cell_volume()
        / f.grid.len() as f64
}

/// Energy inner product `Σ conj(F)·G dV`.
pub fn energy_inner(f: &RSField, g: &RSField) -> Result<Complex64> {
    f.grid.ensure_same(&g.grid)?;
    let dv = f.grid.cell_volume();
    let re = par::sum_range(f.data.len(), |i| inner3(&f.data[i], &g.data[i]).re);
    let im = par::sum_range(f.data.len(), |i| inner3(&f.data[i], &g.data[i]).im);
    Ok(Complex64::new(re, im) * dv)
}

/// Multiplies the field by one Cartesian coordinate, `x_axis · F`.
///
/// The result is the action of the naive position operator. Applied to a
/// transverse field it generally leaves the transverse subspace, which is
/// what [`divergence_residual`] exposes.
pub fn coordinate_multiply(f: &RSField, axis: usize) -> RSField {
    assert!(axis < 3, "axis must be 0, 1 or 2");
    let grid = &f.grid;
    let data = par::map_range(f.data.len(), |idx| {
        let x = grid.position(idx)[axis];
        f.data[idx].map(|c| c * x)
    });
    f.with_data(data)
}

/// Band-limited random transverse field: every Fourier bin whose signed
/// index is at most `max_mode` along each axis gets a random complex
/// amplitude, then the longitudinal part is projected out.
pub fn random_transverse(grid: &Grid3, helicity: Helicity, max_mode: usize, seed: u64) -> RSField {
    let mut rng = rng::from_seed(seed);
    let n = grid.dims();
    let signed = |m: usize, n: usize| -> usize {
        if m < n.div_ceil(2) {
            m
        } else {
            n - m
        }
    };
    let spec: Vec<CVec3> = (0..grid.len())
        .map(|idx| {
            let c = grid.coords(idx);
            let inside = (0..3).all(|a| signed(c[a], n[a]) <= max_mode && 2 * signed(c[a], n[a]) < n[a]);
            if inside {
                project_mode(&grid.wavevector(idx), &rng::cvec3(&mut rng))
            } else {
                CZERO3
            }
        })
        .collect();
    let template = RSField::zeros(grid.clone(), helicity);
    let f = template.from_spectral(&spec, &grid.fft());
    // unit energy keeps tolerances scale-free
    let e = energy_norm(&f);
    if e > 0.0 {
        f.scaled(Complex64::new(1.0 / e.sqrt(), 0.0))
    } else {
        f
    }
}
