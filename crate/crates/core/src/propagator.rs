//! Time evolution of the RS field.
//!
//! Two independent routes solve `∂F/∂t = -i·sign·c ∇×F`:
//!
//! - [`evolve_spectral`] applies the exact propagator
//!   `exp(-i·sign·c·t·(ŝ·k))` to every Fourier mode, built from the closed-form
//!   eigensystem in [`crate::spin`];
//! - [`evolve_fd_maxwell`] is a method-of-lines stepper with a collocated
//!   second-order central-difference curl and classic RK4 in time.
//!
//! The sign convention is the one that reproduces the vacuum Maxwell
//! equations for `F = E/c + sign·iB`: with `sign = +1` a positive-helicity
//! mode `e₊(k) e^{ik·x}` evolves as `e^{-ic|k|t}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    self, energy_norm, rcross, CVec3, Grid3, Helicity, RSField, UnitsConfig, I,
};
use crate::par;
use crate::spin::helicity_basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Spectral,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationConfig {
    pub t_final: f64,
    /// Step for the finite-difference method; ignored by the spectral one.
    pub dt: f64,
    pub method: Method,
    /// Sign of the generator `H = ±c ŝ·p`.
    pub sign: Helicity,
}

impl PropagationConfig {
    pub fn new(t_final: f64, dt: f64, method: Method, sign: Helicity) -> Result<Self> {
        if !(t_final >= 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidPropagation(format!(
                "t_final must be >= 0, got {t_final}"
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidPropagation(format!("dt must be > 0, got {dt}")));
        }
        Ok(PropagationConfig {
            t_final,
            dt,
            method,
            sign,
        })
    }

    /// Uses the default step `0.25 · min spacing / c`.
    pub fn with_default_dt(
        grid: &Grid3,
        units: &UnitsConfig,
        t_final: f64,
        method: Method,
        sign: Helicity,
    ) -> Result<Self> {
        PropagationConfig::new(t_final, default_dt(grid, units), method, sign)
    }
}

pub fn default_dt(grid: &Grid3, units: &UnitsConfig) -> f64 {
    0.25 * grid.min_spacing() / units.c
}

pub fn cfl_limit(grid: &Grid3, units: &UnitsConfig) -> f64 {
    0.5 * grid.min_spacing() / units.c
}

/// Dispatches on `cfg.method`.
pub fn evolve(f0: &RSField, cfg: &PropagationConfig, units: &UnitsConfig) -> Result<RSField> {
    match cfg.method {
        Method::Spectral => Ok(evolve_spectral(f0, cfg, units)),
        Method::FiniteDifference => evolve_fd_maxwell(f0, cfg, units),
    }
}

/// Exact per-mode evolution to `cfg.t_final`.
///
/// At `t_final = 0` the input is returned unchanged (no transform round trip).
pub fn evolve_spectral(f0: &RSField, cfg: &PropagationConfig, units: &UnitsConfig) -> RSField {
    evolve_spectral_by(f0, cfg.t_final, cfg.sign, units)
}

/// Exact evolution by an arbitrary (possibly negative) time `t`.
pub fn evolve_spectral_by(f0: &RSField, t: f64, sign: Helicity, units: &UnitsConfig) -> RSField {
    if t == 0.0 {
        return f0.clone();
    }
    let grid = f0.grid();
    let fft = grid.fft();
    let spec = f0.to_spectral(&fft);
    let wt = sign.sign() * units.c * t;
    let evolved = par::map_range(spec.len(), |idx| {
        let k = grid.wavevector(idx);
        let v = &spec[idx];
        let Some([ep, em, e0]) = helicity_basis(&k) else {
            return *v;
        };
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let ph_plus = Complex64::from_polar(1.0, -wt * kn);
        let ph_minus = ph_plus.conj();
        let ap = field::inner3(&ep, v) * ph_plus;
        let am = field::inner3(&em, v) * ph_minus;
        let a0 = field::inner3(&e0, v);
        [0, 1, 2].map(|c| ep[c] * ap + em[c] * am + e0[c] * a0)
    });
    f0.from_spectral(&evolved, &fft)
}

/// Spectral curl `∇×F`.
pub fn spectral_curl(f: &RSField) -> RSField {
    let grid = f.grid();
    let fft = grid.fft();
    let spec = f.to_spectral(&fft);
    let curl = par::map_range(spec.len(), |idx| {
        rcross(&grid.wavevector(idx), &spec[idx]).map(|z| z * I)
    });
    f.from_spectral(&curl, &fft)
}

/// `∂F/∂t = -i·sign·c ∇×F` evaluated spectrally.
pub fn spectral_time_derivative(f: &RSField, sign: Helicity, units: &UnitsConfig) -> RSField {
    spectral_curl(f).scaled(-I * sign.sign() * units.c)
}

/// Pointwise residual of the first-order evolution equation written per
/// unit `x⁰ = ct`: `(1/c) ∂F/∂t + i·sign ∇×F`.
pub fn dirac_residual(
    f: &RSField,
    dfdt: &RSField,
    sign: Helicity,
    units: &UnitsConfig,
) -> Result<Vec<CVec3>> {
    f.grid().ensure_same(dfdt.grid())?;
    let curl = spectral_curl(f);
    let s = sign.sign();
    Ok(par::map_range(f.data().len(), |i| {
        let (d, c) = (dfdt.data()[i], curl.data()[i]);
        [0, 1, 2].map(|a| d[a] / units.c + I * s * c[a])
    }))
}

/// Central-difference curl on the periodic grid.
fn fd_curl(grid: &Grid3, data: &[CVec3]) -> Vec<CVec3> {
    let [hx, hy, hz] = grid.spacing().map(|d| 0.5 / d);
    par::map_range(data.len(), |idx| {
        let [i, j, k] = grid.coords(idx).map(|c| c as isize);
        let at = |di, dj, dk| &data[grid.index_wrapped(i + di, j + dj, k + dk)];
        let (xp, xm) = (at(1, 0, 0), at(-1, 0, 0));
        let (yp, ym) = (at(0, 1, 0), at(0, -1, 0));
        let (zp, zm) = (at(0, 0, 1), at(0, 0, -1));
        let d = |p: &CVec3, m: &CVec3, c: usize, h: f64| (p[c] - m[c]) * h;
        [
            d(yp, ym, 2, hy) - d(zp, zm, 1, hz),
            d(zp, zm, 0, hz) - d(xp, xm, 2, hx),
            d(xp, xm, 1, hx) - d(yp, ym, 0, hy),
        ]
    })
}

/// Central-difference divergence, the constraint the finite-difference
/// stepper preserves exactly.
pub fn fd_divergence_residual(f: &RSField) -> field::DivergenceResidual {
    let grid = f.grid();
    let data = f.data();
    let [hx, hy, hz] = grid.spacing().map(|d| 0.5 / d);
    let values = par::map_range(data.len(), |idx| {
        let [i, j, k] = grid.coords(idx).map(|c| c as isize);
        let at = |di, dj, dk| &data[grid.index_wrapped(i + di, j + dj, k + dk)];
        (at(1, 0, 0)[0] - at(-1, 0, 0)[0]) * hx
            + (at(0, 1, 0)[1] - at(0, -1, 0)[1]) * hy
            + (at(0, 0, 1)[2] - at(0, 0, -1)[2]) * hz
    });
    let l2 = (par::sum_range(values.len(), |i| values[i].norm_sqr()) * grid.cell_volume()).sqrt();
    field::DivergenceResidual { values, l2 }
}

fn fd_rhs(grid: &Grid3, data: &[CVec3], factor: Complex64) -> Vec<CVec3> {
    let mut out = fd_curl(grid, data);
    par::for_each_mut(&mut out, |_, v| *v = v.map(|z| z * factor));
    out
}

fn add_scaled(a: &[CVec3], b: &[CVec3], s: f64) -> Vec<CVec3> {
    par::map_range(a.len(), |i| [0, 1, 2].map(|c| a[i][c] + b[i][c] * s))
}

/// RK4 / central-difference Maxwell stepper.
///
/// The number of steps is `ceil(t_final / dt)`, with the step shrunk so the
/// last one lands exactly on `t_final`.
pub fn evolve_fd_maxwell(
    f0: &RSField,
    cfg: &PropagationConfig,
    units: &UnitsConfig,
) -> Result<RSField> {
    let grid = f0.grid();
    let limit = cfl_limit(grid, units);
    if cfg.dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt: cfg.dt, limit });
    }
    if cfg.t_final == 0.0 {
        return Ok(f0.clone());
    }
    let steps = (cfg.t_final / cfg.dt - 1e-9).ceil().max(1.0) as usize;
    let dt = cfg.t_final / steps as f64;
    let factor = -I * cfg.sign.sign() * units.c;

    let mut y: Vec<CVec3> = f0.data().to_vec();
    for _ in 0..steps {
        let k1 = fd_rhs(grid, &y, factor);
        let k2 = fd_rhs(grid, &add_scaled(&y, &k1, 0.5 * dt), factor);
        let k3 = fd_rhs(grid, &add_scaled(&y, &k2, 0.5 * dt), factor);
        let k4 = fd_rhs(grid, &add_scaled(&y, &k3, dt), factor);
        par::for_each_mut(&mut y, |i, v| {
            for c in 0..3 {
                v[c] += (k1[i][c] + (k2[i][c] + k3[i][c]) * 2.0 + k4[i][c]) * (dt / 6.0);
            }
        });
    }
    RSField::new(grid.clone(), y, f0.helicity())
}

/// Conservation diagnostics of one evolver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperReport {
    /// `|E(t) - E(0)| / E(0)` for the energy norm.
    pub energy_drift: f64,
    /// `| ‖∇·F(t)‖ - ‖∇·F(0)‖ |` with the spectral divergence.
    pub divergence_drift: f64,
    /// `‖F - F_ref‖ / ‖F_ref‖` against the spectral result (0 for the
    /// spectral evolver itself).
    pub l2_discrepancy_vs_reference: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrosscheckReport {
    pub spectral: StepperReport,
    pub finite_difference: StepperReport,
}

/// Runs both evolvers from `f0` and compares them.
pub fn crosscheck_report(
    f0: &RSField,
    cfg: &PropagationConfig,
    units: &UnitsConfig,
) -> Result<CrosscheckReport> {
    let reference = evolve_spectral(f0, cfg, units);
    let fd = evolve_fd_maxwell(f0, cfg, units)?;

    let e0 = energy_norm(f0);
    let div0 = field::divergence_residual(f0).l2;
    let drift = |f: &RSField| {
        let e = energy_norm(f);
        let rel = if e0 > 0.0 { (e - e0).abs() / e0 } else { e.abs() };
        (rel, (field::divergence_residual(f).l2 - div0).abs())
    };
    let ref_norm = energy_norm(&reference).sqrt();
    let discrepancy = if ref_norm > 0.0 {
        fd.l2_diff(&reference) / ref_norm
    } else {
        fd.l2_diff(&reference)
    };

    let (se, sd) = drift(&reference);
    let (fe, fdd) = drift(&fd);
    Ok(CrosscheckReport {
        spectral: StepperReport {
            energy_drift: se,
            divergence_drift: sd,
            l2_discrepancy_vs_reference: 0.0,
        },
        finite_difference: StepperReport {
            energy_drift: fe,
            divergence_drift: fdd,
            l2_discrepancy_vs_reference: discrepancy,
        },
    })
}

/// `F(x, t) = e₊(k) e^{i(k·x - sign·c|k|t)}`: the analytic single-mode
/// solution with positive helicity.
pub fn helical_plane_wave(
    grid: &Grid3,
    k: [f64; 3],
    t: f64,
    sign: Helicity,
    units: &UnitsConfig,
) -> Result<RSField> {
    let [ep, _, _] = helicity_basis(&k).ok_or(Error::ZeroWavevector)?;
    let w = sign.sign() * units.c * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    Ok(RSField::from_fn(grid.clone(), sign, |x| {
        let ph = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2] - w * t);
        ep.map(|c| c * ph)
    }))
}
