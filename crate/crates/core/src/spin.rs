//! Spin-1 generators, the per-mode Hamiltonian and helicity decomposition.
//!
//! The generators act on Cartesian 3-vectors as `(ŝ·k) v = i k × v`, so for
//! a plane-wave mode `e^{ik·x}` the curl becomes `∇×F = (ŝ·k) F̃` and the
//! evolution equation is diagonal in the helicity basis.
//!
//! Phase convention: `e₊(k̂)` is `(x̂ + iŷ)/√2` carried from `ẑ` to `k̂` by the
//! minimal rotation (the π rotation about `x̂` when `k̂ = -ẑ`), `e₋ = conj(e₊)`
//! and the longitudinal vector is `k̂` itself. This fixes a reproducible
//! phase for every mode; no relation between these phases and the choice of
//! RS branch is implied.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{inner3, CVec3, Grid3, Helicity, RSField, RVec3, UnitsConfig, CZERO, I};
use crate::par;

type CMat3 = Matrix3<Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct SpinMatrices {
    pub sx: CMat3,
    pub sy: CMat3,
    pub sz: CMat3,
}

/// The three spin-1 generators `(ŝ_a)_{jk} = -i ε_{ajk}`.
pub fn spin_matrices() -> SpinMatrices {
    let z = CZERO;
    let p = I;
    let m = -I;
    SpinMatrices {
        sx: CMat3::new(z, z, z, z, z, m, z, p, z),
        sy: CMat3::new(z, z, p, z, z, z, m, z, z),
        sz: CMat3::new(z, m, z, p, z, z, z, z, z),
    }
}

impl SpinMatrices {
    /// `ŝ·n` for a real vector `n`.
    pub fn dot(&self, n: &RVec3) -> CMat3 {
        self.sx * Complex64::from(n[0]) + self.sy * Complex64::from(n[1]) + self.sz * Complex64::from(n[2])
    }

    pub fn components(&self) -> [&CMat3; 3] {
        [&self.sx, &self.sy, &self.sz]
    }
}

/// `H = sign · c · (ŝ·k)` for one Fourier mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeHamiltonian {
    pub k: RVec3,
    pub helicity: Helicity,
    pub matrix: CMat3,
}

/// One eigenpair of a [`ModeHamiltonian`].
///
/// `eigenvalue = sign · helicity · c|k|`; the same state is reported as a
/// non-negative `energy` together with its `helicity` label.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub helicity: i8,
    pub eigenvalue: f64,
    pub energy: f64,
    pub vector: CVec3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeEigensystem {
    pub hamiltonian: ModeHamiltonian,
    /// Ordered by helicity label `+1, 0, -1`.
    pub pairs: [Eigenpair; 3],
}

/// Orthonormal helicity basis `[e₊(k̂), e₋(k̂), k̂]`; `None` for `k = 0`.
pub fn helicity_basis(k: &RVec3) -> Option<[CVec3; 3]> {
    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if kn == 0.0 || !kn.is_finite() {
        return None;
    }
    let n = [k[0] / kn, k[1] / kn, k[2] / kn];
    let rho2 = n[0] * n[0] + n[1] * n[1];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::from(x);

    let e_plus: CVec3 = if n[2] < 0.0 && rho2 == 0.0 {
        [c(s), -I * s, CZERO]
    } else {
        // 1/(1 + n_z), written without cancellation for n_z < 0
        let h = if n[2] >= 0.0 {
            1.0 / (1.0 + n[2])
        } else {
            (1.0 - n[2]) / rho2
        };
        let rx = [1.0 - h * n[0] * n[0], -h * n[0] * n[1], -n[0]];
        let ry = [-h * n[0] * n[1], 1.0 - h * n[1] * n[1], -n[1]];
        [0, 1, 2].map(|a| (c(rx[a]) + I * ry[a]) * s)
    };
    let e_minus = e_plus.map(|z| z.conj());
    Some([e_plus, e_minus, n.map(c)])
}

/// Builds `H = sign·c·(ŝ·k)` and its closed-form eigensystem.
pub fn mode_hamiltonian_eigensystem(
    k: &RVec3,
    helicity: Helicity,
    units: &UnitsConfig,
) -> Result<ModeEigensystem> {
    let [ep, em, e0] = helicity_basis(k).ok_or(Error::ZeroWavevector)?;
    let sign = helicity.sign();
    let matrix = spin_matrices().dot(k) * Complex64::from(sign * units.c);
    let energy = units.c * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let pair = |h: i8, v: CVec3| Eigenpair {
        helicity: h,
        eigenvalue: sign * f64::from(h) * energy,
        energy: if h == 0 { 0.0 } else { energy },
        vector: v,
    };
    Ok(ModeEigensystem {
        hamiltonian: ModeHamiltonian {
            k: *k,
            helicity,
            matrix,
        },
        pairs: [pair(1, ep), pair(0, e0), pair(-1, em)],
    })
}

/// Helicity amplitudes of one Fourier bin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeAmplitudes {
    /// Index of the bin in the grid's FFT layout.
    pub index: usize,
    pub k: RVec3,
    pub plus: Complex64,
    pub minus: Complex64,
    pub zero: Complex64,
}

/// Per-mode helicity content of an RS field.
///
/// Amplitudes carry the factor `sqrt(dV/N)` so that
/// `Σ (|a₊|² + |a₋|² + |a₀|²)` equals the field's energy norm. The `k = 0`
/// bin has no direction; its whole weight is reported as `|a₀|` (phase
/// discarded).
#[derive(Clone, Debug, PartialEq)]
pub struct HelicitySpectrum {
    pub grid: Grid3,
    pub modes: Vec<ModeAmplitudes>,
}

impl HelicitySpectrum {
    pub fn total_energy(&self) -> f64 {
        par::sum_range(self.modes.len(), |i| {
            let m = &self.modes[i];
            m.plus.norm_sqr() + m.minus.norm_sqr() + m.zero.norm_sqr()
        })
    }

    pub fn plus_energy(&self) -> f64 {
        par::sum_range(self.modes.len(), |i| self.modes[i].plus.norm_sqr())
    }

    pub fn minus_energy(&self) -> f64 {
        par::sum_range(self.modes.len(), |i| self.modes[i].minus.norm_sqr())
    }

    pub fn longitudinal_energy(&self) -> f64 {
        par::sum_range(self.modes.len(), |i| self.modes[i].zero.norm_sqr())
    }

    pub fn mode_at(&self, i: usize, j: usize, k: usize) -> &ModeAmplitudes {
        &self.modes[self.grid.index(i, j, k)]
    }
}

/// Projects every Fourier mode of `f` on `e₊(k)`, `e₋(k)` and `k̂`.
pub fn helicity_decompose(f: &RSField) -> HelicitySpectrum {
    let grid = f.grid();
    let fft = grid.fft();
    let spec = f.to_spectral(&fft);
    let norm = (grid.cell_volume() / grid.len() as f64).sqrt();
    let modes = par::map_range(spec.len(), |idx| {
        let k = grid.wavevector(idx);
        let v = &spec[idx];
        match helicity_basis(&k) {
            Some([ep, em, e0]) => ModeAmplitudes {
                index: idx,
                k,
                plus: inner3(&ep, v) * norm,
                minus: inner3(&em, v) * norm,
                zero: inner3(&e0, v) * norm,
            },
            None => ModeAmplitudes {
                index: idx,
                k,
                plus: CZERO,
                minus: CZERO,
                zero: Complex64::from(crate::field::norm3(v) * norm),
            },
        }
    });
    HelicitySpectrum {
        grid: grid.clone(),
        modes,
    }
}
