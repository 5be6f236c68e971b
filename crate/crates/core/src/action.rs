//! Lattice discretisation of the first-order photon action.
//!
//! Fields live on a periodic hypercubic lattice with metric
//! `η = diag(1, -1, -1, -1)`. Derivatives are forward differences
//! `∂_μ f(x) = (f(x + μ̂) - f(x)) / a`; their adjoints are the backward
//! differences `∂*_μ f(x) = (f(x) - f(x - μ̂)) / a`, so
//! `Σ g ∂_μ f = -Σ (∂*_μ g) f` holds to roundoff.
//!
//! Storage: `A_μ` and `F_{μν}` with lower indices, `j^μ` with an upper index.
//! `F` keeps its six independent components in [`PAIRS`] order.
//!
//! With `X_{μν} = ½(∂_μA_ν - ∂_νA_μ)` and `λ = a_norm / (3/4)`:
//!
//! ```text
//! I[A, F]  = Σ a⁴ [ -λ X^{μν} F_{μν} - ½ F^{μν} F_{μν} + A_μ j^μ ]
//! I_red[A] = Σ a⁴ [ ½ λ² X^{μν} X_{μν} + A_μ j^μ ]
//! ```
//!
//! Varying `F` gives `F = -λX`, and substituting back gives `I_red`. Varying
//! `A` gives `λ ∂*_ρ F^{ρσ} + j^σ = 0`. A current is conserved when its
//! backward divergence `∂*_μ j^μ` vanishes, which is what makes `I_red`
//! invariant under `A → A + ∂χ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par;
use crate::rng::{self, SeededRng};

/// Index pairs `(μ, ν)`, `μ < ν`, in storage order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[cfg(test)]
const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// `η^{μμ} η^{νν}` for each pair: raises both indices of `F_{μν}`.
const PAIR_SIGN: [f64; 6] = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0];

fn pair_index(mu: usize, nu: usize) -> Option<(usize, f64)> {
    if mu == nu {
        return None;
    }
    let (lo, hi, s) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    PAIRS.iter().position(|&p| p == (lo, hi)).map(|i| (i, s))
}

/// Periodic 4D lattice, index 0 is time, index 3 runs fastest in memory.
#[derive(Clone)]
pub struct Lattice4 {
    n: [usize; 4],
    a: f64,
    /// Per site: forward neighbours along μ = 0..3, then backward ones.
    neighbours: Arc<[[usize; 8]]>,
}

impl PartialEq for Lattice4 {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.a == other.a
    }
}

impl fmt::Debug for Lattice4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice4").field("n", &self.n).field("a", &self.a).finish()
    }
}

impl Lattice4 {
    pub fn new(n: [usize; 4], a: f64) -> Result<Self> {
        if n.iter().any(|&m| m < 2) {
            return Err(Error::InvalidLattice(format!("sizes must be >= 2, got {n:?}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidLattice(format!("spacing must be > 0, got {a}")));
        }
        n.iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| Error::InvalidLattice("site count overflows".into()))?;
        let len: usize = n.iter().product();
        let strides = [n[1] * n[2] * n[3], n[2] * n[3], n[3], 1];
        let neighbours = (0..len)
            .map(|i| {
                std::array::from_fn(|slot| {
                    let (mu, step) = (slot % 4, if slot < 4 { 1 } else { n[slot % 4] - 1 });
                    let x = (i / strides[mu]) % n[mu];
                    i + ((x + step) % n[mu]) * strides[mu] - x * strides[mu]
                })
            })
            .collect();
        Ok(Lattice4 { n, a, neighbours })
    }

    /// `n⁴` sites with spacing `length / n`.
    pub fn hypercube(n: usize, length: f64) -> Result<Self> {
        Lattice4::new([n; 4], length / n as f64)
    }

    pub fn dims(&self) -> [usize; 4] {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.a
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a⁴`.
    pub fn cell_volume(&self) -> f64 {
        self.a.powi(4)
    }

    pub fn index(&self, x: [usize; 4]) -> usize {
        ((x[0] * self.n[1] + x[1]) * self.n[2] + x[2]) * self.n[3] + x[3]
    }

    pub fn coords(&self, mut idx: usize) -> [usize; 4] {
        let mut x = [0; 4];
        for mu in (0..4).rev() {
            x[mu] = idx % self.n[mu];
            idx /= self.n[mu];
        }
        x
    }

    /// Site index displaced by `step` along `mu`, wrapped.
    pub fn shift(&self, idx: usize, mu: usize, step: isize) -> usize {
        match step {
            1 => self.neighbours[idx][mu],
            -1 => self.neighbours[idx][mu + 4],
            _ => {
                let stride: usize = self.n[mu + 1..].iter().product();
                let n = self.n[mu];
                let x = (idx / stride) % n;
                let moved = (x as isize + step).rem_euclid(n as isize) as usize;
                idx + moved * stride - x * stride
            }
        }
    }

    pub fn position(&self, idx: usize) -> [f64; 4] {
        self.coords(idx).map(|c| c as f64 * self.a)
    }

    fn ensure_same(&self, other: &Lattice4) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                left: format!("{:?} a={}", self.n, self.a),
                right: format!("{:?} a={}", other.n, other.a),
            })
        }
    }
}

/// Real per-site four-vector with lower index (also used for `Ã`, `B`).
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeField {
    lattice: Lattice4,
    data: Vec<[f64; 4]>,
}

impl GaugeField {
    pub fn new(lattice: Lattice4, data: Vec<[f64; 4]>) -> Result<Self> {
        check_len(&lattice, data.len())?;
        Ok(GaugeField { lattice, data })
    }

    pub fn zeros(lattice: Lattice4) -> Self {
        let data = vec![[0.0; 4]; lattice.len()];
        GaugeField { lattice, data }
    }

    pub fn from_fn(lattice: Lattice4, f: impl Fn([f64; 4]) -> [f64; 4] + Sync + Send) -> Self {
        let data = par::map_range(lattice.len(), |i| f(lattice.position(i)));
        GaugeField { lattice, data }
    }

    pub fn random(lattice: Lattice4, rng: &mut SeededRng) -> Self {
        let data = (0..lattice.len())
            .map(|_| std::array::from_fn(|_| rng::symmetric(rng)))
            .collect();
        GaugeField { lattice, data }
    }

    pub fn lattice(&self) -> &Lattice4 {
        &self.lattice
    }

    pub fn data(&self) -> &[[f64; 4]] {
        &self.data
    }

    /// `self + t·dir`.
    pub fn displaced(&self, dir: &GaugeField, t: f64) -> GaugeField {
        let data = par::map_range(self.data.len(), |i| {
            std::array::from_fn(|m| self.data[i][m] + t * dir.data[i][m])
        });
        GaugeField { lattice: self.lattice.clone(), data }
    }
}

/// Independent field-strength variable `F_{μν}`, six components per site.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldStrengthVar {
    lattice: Lattice4,
    data: Vec<[f64; 6]>,
}

impl FieldStrengthVar {
    pub fn new(lattice: Lattice4, data: Vec<[f64; 6]>) -> Result<Self> {
        check_len(&lattice, data.len())?;
        Ok(FieldStrengthVar { lattice, data })
    }

    pub fn zeros(lattice: Lattice4) -> Self {
        let data = vec![[0.0; 6]; lattice.len()];
        FieldStrengthVar { lattice, data }
    }

    pub fn random(lattice: Lattice4, rng: &mut SeededRng) -> Self {
        let data = (0..lattice.len())
            .map(|_| std::array::from_fn(|_| rng::symmetric(rng)))
            .collect();
        FieldStrengthVar { lattice, data }
    }

    pub fn lattice(&self) -> &Lattice4 {
        &self.lattice
    }

    pub fn data(&self) -> &[[f64; 6]] {
        &self.data
    }

    /// `F_{μν}` for any index order.
    pub fn component(&self, site: usize, mu: usize, nu: usize) -> f64 {
        pair_index(mu, nu).map_or(0.0, |(p, s)| s * self.data[site][p])
    }

    pub fn displaced(&self, dir: &FieldStrengthVar, t: f64) -> FieldStrengthVar {
        let data = par::map_range(self.data.len(), |i| {
            std::array::from_fn(|m| self.data[i][m] + t * dir.data[i][m])
        });
        FieldStrengthVar { lattice: self.lattice.clone(), data }
    }

    pub fn max_abs_diff(&self, other: &FieldStrengthVar) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max)
    }
}

/// Prescribed current `j^μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentField {
    lattice: Lattice4,
    data: Vec<[f64; 4]>,
}

impl CurrentField {
    pub const CONTINUITY_TOLERANCE: f64 = 1e-10;

    /// Rejects currents whose backward divergence exceeds the tolerance.
    pub fn new(lattice: Lattice4, data: Vec<[f64; 4]>) -> Result<Self> {
        let j = CurrentField::new_unchecked(lattice, data)?;
        let divergence = j.max_divergence();
        if divergence > Self::CONTINUITY_TOLERANCE {
            return Err(Error::CurrentNotConserved { divergence });
        }
        Ok(j)
    }

    pub fn new_unchecked(lattice: Lattice4, data: Vec<[f64; 4]>) -> Result<Self> {
        check_len(&lattice, data.len())?;
        Ok(CurrentField { lattice, data })
    }

    pub fn zeros(lattice: Lattice4) -> Self {
        let data = vec![[0.0; 4]; lattice.len()];
        CurrentField { lattice, data }
    }

    /// `j^μ = ∂*_ν M^{μν}` for a random antisymmetric `M`; conserved
    /// identically.
    pub fn random_conserved(lattice: Lattice4, rng: &mut SeededRng) -> Self {
        let m = FieldStrengthVar::random(lattice.clone(), rng);
        let data = backward_divergence(&m, false);
        CurrentField { lattice, data }
    }

    pub fn lattice(&self) -> &Lattice4 {
        &self.lattice
    }

    pub fn data(&self) -> &[[f64; 4]] {
        &self.data
    }

    /// `∂*_μ j^μ` per site.
    pub fn divergence(&self) -> Vec<f64> {
        let l = &self.lattice;
        par::map_range(l.len(), |i| {
            (0..4)
                .map(|mu| (self.data[i][mu] - self.data[l.shift(i, mu, -1)][mu]) / l.a)
                .sum()
        })
    }

    pub fn max_divergence(&self) -> f64 {
        self.divergence().iter().fold(0.0, |a, d| a.max(d.abs()))
    }
}

fn check_len(lattice: &Lattice4, len: usize) -> Result<()> {
    if len != lattice.len() {
        return Err(Error::FieldLength {
            expected: lattice.len(),
            actual: len,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionConfig {
    /// Normalisation constant of the linear term; `3/4` gives unit weight.
    pub a_norm: f64,
    /// Whether the quadratic `½ F^{μν} F_{μν}` term is present.
    pub include_l0: bool,
}

impl Default for ActionConfig {
    fn default() -> Self {
        ActionConfig {
            a_norm: 0.75,
            include_l0: true,
        }
    }
}

impl ActionConfig {
    /// Weight `λ = a_norm / (3/4)` of the `X·F` coupling.
    pub fn coupling(&self) -> f64 {
        self.a_norm / 0.75
    }
}

/// `X_{μν} = ½(∂_μA_ν - ∂_νA_μ)` with forward differences.
pub fn half_curl(a: &GaugeField) -> FieldStrengthVar {
    let l = &a.lattice;
    let inv = 1.0 / l.a;
    let data = par::map_range(l.len(), |i| {
        let here = &a.data[i];
        let fwd: [[f64; 4]; 4] = std::array::from_fn(|mu| a.data[l.shift(i, mu, 1)]);
        PAIRS.map(|(mu, nu)| {
            0.5 * ((fwd[mu][nu] - here[nu]) - (fwd[nu][mu] - here[mu])) * inv
        })
    });
    FieldStrengthVar {
        lattice: l.clone(),
        data,
    }
}

/// The F-stationary point `F = -λX`, i.e. `-½λ(∂_μA_ν - ∂_νA_μ)`.
pub fn stationary_field_strength(a: &GaugeField, cfg: &ActionConfig) -> FieldStrengthVar {
    let mut x = half_curl(a);
    let s = -cfg.coupling();
    par::for_each_mut(&mut x.data, |_, v| *v = v.map(|c| c * s));
    x
}

/// `∂*_ρ F^{ρσ}` (upper index `σ`) if `raise`, else `∂*_ρ F_{σρ}`-style
/// divergence of the stored components without metric factors, used to
/// build conserved currents.
fn backward_divergence(f: &FieldStrengthVar, raise: bool) -> Vec<[f64; 4]> {
    let l = &f.lattice;
    let inv = 1.0 / l.a;
    par::map_range(l.len(), |i| {
        let mut out = [0.0; 4];
        for (p, &(mu, nu)) in PAIRS.iter().enumerate() {
            let s = if raise { PAIR_SIGN[p] } else { 1.0 };
            // F^{μν} contributes ∂*_μ to σ = ν and -∂*_ν to σ = μ
            let d_mu = (f.data[i][p] - f.data[l.shift(i, mu, -1)][p]) * inv;
            let d_nu = (f.data[i][p] - f.data[l.shift(i, nu, -1)][p]) * inv;
            out[nu] += s * d_mu;
            out[mu] -= s * d_nu;
        }
        out
    })
}

/// `∂*_ρ F^{ρσ}` per site.
pub fn divergence_upper(f: &FieldStrengthVar) -> Vec<[f64; 4]> {
    backward_divergence(f, true)
}

/// `X^{μν} F_{μν}` summed over all ordered index pairs at one site.
fn contract(x: &[f64; 6], f: &[f64; 6]) -> f64 {
    2.0 * (0..6).map(|p| PAIR_SIGN[p] * x[p] * f[p]).sum::<f64>()
}

fn source_term(a: &GaugeField, j: &CurrentField, i: usize) -> f64 {
    (0..4).map(|mu| a.data[i][mu] * j.data[i][mu]).sum()
}

/// First-order action `I[A, F]`.
pub fn assemble_first_order_action(
    a: &GaugeField,
    f: &FieldStrengthVar,
    j: &CurrentField,
    cfg: &ActionConfig,
) -> Result<f64> {
    a.lattice.ensure_same(&f.lattice)?;
    a.lattice.ensure_same(&j.lattice)?;
    let x = half_curl(a);
    let lam = cfg.coupling();
    let l0 = if cfg.include_l0 { 1.0 } else { 0.0 };
    let sum = par::sum_range(a.lattice.len(), |i| {
        -lam * contract(&x.data[i], &f.data[i]) - l0 * 0.5 * contract(&f.data[i], &f.data[i])
            + source_term(a, j, i)
    });
    Ok(sum * a.lattice.cell_volume())
}

/// Gradients of [`assemble_first_order_action`] divided by `a⁴`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElResiduals {
    /// `∂I/∂F_{μν}` per stored pair: `-2η^{μμ}η^{νν}(λX_{μν} + F_{μν})`.
    pub f: Vec<[f64; 6]>,
    /// `∂I/∂A_σ`: `λ ∂*_ρ F^{ρσ} + j^σ`.
    pub a: Vec<[f64; 4]>,
}

impl ElResiduals {
    pub fn max_f(&self) -> f64 {
        self.f.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_a(&self) -> f64 {
        self.a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sqrt(Σ a⁴ |r_A|²)`.
    pub fn l2_a(&self, lattice: &Lattice4) -> f64 {
        let s: f64 = self.a.iter().flatten().map(|v| v * v).sum();
        (s * lattice.cell_volume()).sqrt()
    }
}

pub fn euler_lagrange_residuals(
    a: &GaugeField,
    f: &FieldStrengthVar,
    j: &CurrentField,
    cfg: &ActionConfig,
) -> Result<ElResiduals> {
    a.lattice.ensure_same(&f.lattice)?;
    a.lattice.ensure_same(&j.lattice)?;
    let x = half_curl(a);
    let lam = cfg.coupling();
    let l0 = if cfg.include_l0 { 1.0 } else { 0.0 };
    let rf = par::map_range(a.lattice.len(), |i| {
        std::array::from_fn(|p| -2.0 * PAIR_SIGN[p] * (lam * x.data[i][p] + l0 * f.data[i][p]))
    });
    let div = divergence_upper(f);
    let ra = par::map_range(a.lattice.len(), |i| {
        std::array::from_fn(|s| lam * div[i][s] + j.data[i][s])
    });
    Ok(ElResiduals { f: rf, a: ra })
}

/// Reduced action `I_red[A]`.
pub fn reduced_action(a: &GaugeField, j: &CurrentField, cfg: &ActionConfig) -> Result<f64> {
    a.lattice.ensure_same(&j.lattice)?;
    let x = half_curl(a);
    let lam2 = cfg.coupling().powi(2);
    let sum = par::sum_range(a.lattice.len(), |i| {
        0.5 * lam2 * contract(&x.data[i], &x.data[i]) + source_term(a, j, i)
    });
    Ok(sum * a.lattice.cell_volume())
}

/// `∂I_red/∂A_σ / a⁴ = -λ² ∂*_ρ X^{ρσ} + j^σ`.
pub fn reduced_gradient(a: &GaugeField, j: &CurrentField, cfg: &ActionConfig) -> Result<Vec<[f64; 4]>> {
    a.lattice.ensure_same(&j.lattice)?;
    let div = divergence_upper(&half_curl(a));
    let lam2 = cfg.coupling().powi(2);
    Ok(par::map_range(a.lattice.len(), |i| {
        std::array::from_fn(|s| -lam2 * div[i][s] + j.data[i][s])
    }))
}

/// `A_μ + ∂_μ χ`.
pub fn gauge_transform(a: &GaugeField, chi: &[f64]) -> Result<GaugeField> {
    check_len(&a.lattice, chi.len())?;
    let l = &a.lattice;
    let data = par::map_range(l.len(), |i| {
        std::array::from_fn(|mu| a.data[i][mu] + (chi[l.shift(i, mu, 1)] - chi[i]) / l.a)
    });
    Ok(GaugeField {
        lattice: l.clone(),
        data,
    })
}

/// `Σ X^{μν}F_{μν} + Σ A_ν ∂*_μ F^{μν}`, zero by summation by parts.
pub fn summation_by_parts_defect(a: &GaugeField, f: &FieldStrengthVar) -> Result<f64> {
    a.lattice.ensure_same(&f.lattice)?;
    let x = half_curl(a);
    let div = divergence_upper(f);
    let lhs = par::sum_range(a.lattice.len(), |i| contract(&x.data[i], &f.data[i]));
    let rhs = par::sum_range(a.lattice.len(), |i| {
        (0..4).map(|s| a.data[i][s] * div[i][s]).sum::<f64>()
    });
    Ok(lhs + rhs)
}

/// `ε^{μνρσ} ∂_ν F_{ρσ}` per site (upper `μ`, `ε^{0123} = +1`).
pub fn bianchi_field(f: &FieldStrengthVar) -> Vec<[f64; 4]> {
    let l = &f.lattice;
    let inv = 1.0 / l.a;
    par::map_range(l.len(), |i| {
        let mut out = [0.0; 4];
        for nu in 0..4 {
            let fwd = l.shift(i, nu, 1);
            for mu in 0..4 {
                if nu == mu {
                    continue;
                }
                // the remaining two indices (ρ, σ), both orders
                let mut rest = (0..4).filter(|&r| r != mu && r != nu);
                let (rho, sigma) = (rest.next().expect("two left"), rest.next().expect("two left"));
                let eps = permutation_sign([mu, nu, rho, sigma]);
                let (p, s) = pair_index(rho, sigma).expect("distinct");
                out[mu] += 2.0 * eps * s * (f.data[fwd][p] - f.data[i][p]) * inv;
            }
        }
        out
    })
}

fn permutation_sign(mut p: [usize; 4]) -> f64 {
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

/// Action of the doubled sector after eliminating `F = X(Ã)`:
/// `Σ a⁴ [ A_μ ∂*_ν X(Ã)^{μν} + B_μ ε^{μνρσ} ∂_ν X(Ã)_{ρσ} ]`.
pub fn doubled_action(a: &GaugeField, a_tilde: &GaugeField, b: &GaugeField) -> Result<f64> {
    a.lattice.ensure_same(&a_tilde.lattice)?;
    a.lattice.ensure_same(&b.lattice)?;
    let x = half_curl(a_tilde);
    // ∂*_ν X^{μν} = -∂*_ν X^{νμ}
    let div = divergence_upper(&x);
    let bianchi = bianchi_field(&x);
    let sum = par::sum_range(a.lattice.len(), |i| {
        (0..4)
            .map(|m| -a.data[i][m] * div[i][m] + b.data[i][m] * bianchi[i][m])
            .sum::<f64>()
    });
    Ok(sum * a.lattice.cell_volume())
}

/// `∂/∂B_μ` of [`doubled_action`] divided by `a⁴`; vanishes by the Bianchi
/// identity.
pub fn doubled_action_b_gradient(a_tilde: &GaugeField) -> Vec<[f64; 4]> {
    bianchi_field(&half_curl(a_tilde))
}

/// Kinetic signs of the `A^{(±)} = ½(A ± Ã)` sectors at one lattice momentum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubledSignature {
    pub sign_plus: i8,
    pub sign_minus: i8,
    /// Block / reference Frobenius ratios (expected `+2` and `-2`).
    pub ratio_plus: f64,
    pub ratio_minus: f64,
    /// Largest relative deviation of a block from `ratio × reference`.
    pub proportionality_defect: f64,
    /// Largest `(+,-)` cross entry relative to the reference norm.
    pub cross_coupling: f64,
}

/// Builds the quadratic form of [`doubled_action`] restricted to the modes
/// `e_μ cos(k·x)`, `e_μ sin(k·x)` for `A^{(+)}` and `A^{(-)}`, and compares each
/// diagonal block with the Maxwell form `½ X·X` on the same modes.
///
/// `momentum` holds integer mode numbers; `k_μ = 2π n_μ / (N_μ a)`.
pub fn doubled_sector_signature(lattice: &Lattice4, momentum: [i64; 4]) -> Result<DoubledSignature> {
    let n = lattice.dims();
    if (0..4).all(|m| momentum[m].rem_euclid(n[m] as i64) == 0) {
        return Err(Error::ZeroMomentum);
    }
    let modes: Vec<GaugeField> = (0..8)
        .map(|b| {
            let (mu, trig) = (b % 4, b / 4);
            let mut data = vec![[0.0; 4]; lattice.len()];
            for (i, v) in data.iter_mut().enumerate() {
                let x = lattice.coords(i);
                let ph: f64 = (0..4)
                    .map(|m| 2.0 * std::f64::consts::PI * (momentum[m] * x[m] as i64) as f64 / n[m] as f64)
                    .sum();
                v[mu] = if trig == 0 { ph.cos() } else { ph.sin() };
            }
            GaugeField {
                lattice: lattice.clone(),
                data,
            }
        })
        .collect();

    let zero = GaugeField::zeros(lattice.clone());
    // B is arbitrary: it must not affect the form
    let b = GaugeField::random(lattice.clone(), &mut rng::from_seed(0x5eed));
    let eval = |plus: &GaugeField, minus: &GaugeField| -> Result<f64> {
        let a = plus.displaced(minus, 1.0);
        let at = plus.displaced(minus, -1.0);
        doubled_action(&a, &at, &b)
    };
    // u ∈ (A⁺ modes) ∪ (A⁻ modes)
    let field_of = |u: usize| -> (GaugeField, GaugeField) {
        if u < 8 {
            (modes[u].clone(), zero.clone())
        } else {
            (zero.clone(), modes[u - 8].clone())
        }
    };
    let base = eval(&zero, &zero)?;
    let single: Vec<f64> = (0..16)
        .map(|u| {
            let (p, m) = field_of(u);
            eval(&p, &m)
        })
        .collect::<Result<_>>()?;
    let mut q = [[0.0f64; 16]; 16];
    for u in 0..16 {
        for v in u..16 {
            let (pu, mu_) = field_of(u);
            let (pv, mv) = field_of(v);
            let both = eval(&pu.displaced(&pv, 1.0), &mu_.displaced(&mv, 1.0))?;
            let val = 0.5 * (both - single[u] - single[v] + base);
            q[u][v] = val;
            q[v][u] = val;
        }
    }

    let mut r = [[0.0f64; 8]; 8];
    let curls: Vec<FieldStrengthVar> = modes.iter().map(half_curl).collect();
    for u in 0..8 {
        for v in 0..8 {
            let s: f64 = (0..lattice.len())
                .map(|i| 0.5 * contract(&curls[u].data[i], &curls[v].data[i]))
                .sum();
            r[u][v] = s * lattice.cell_volume();
        }
    }
    let rr: f64 = r.iter().flatten().map(|x| x * x).sum();
    if rr == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let block_ratio = |off: usize| {
        let dot: f64 = (0..8)
            .flat_map(|u| (0..8).map(move |v| (u, v)))
            .map(|(u, v)| q[u + off][v + off] * r[u][v])
            .sum();
        let ratio = dot / rr;
        let defect = (0..8)
            .flat_map(|u| (0..8).map(move |v| (u, v)))
            .map(|(u, v)| (q[u + off][v + off] - ratio * r[u][v]).powi(2))
            .sum::<f64>()
            .sqrt()
            / rr.sqrt();
        (ratio, defect)
    };
    let (ratio_plus, dp) = block_ratio(0);
    let (ratio_minus, dm) = block_ratio(8);
    let cross = (0..8)
        .flat_map(|u| (8..16).map(move |v| (u, v)))
        .map(|(u, v)| q[u][v].abs())
        .fold(0.0, f64::max)
        / rr.sqrt();
    let sign = |x: f64| if x > 0.0 { 1 } else if x < 0.0 { -1 } else { 0 };
    Ok(DoubledSignature {
        sign_plus: sign(ratio_plus),
        sign_minus: sign(ratio_minus),
        ratio_plus,
        ratio_minus,
        proportionality_defect: dp.max(dm),
        cross_coupling: cross,
    })
}

/// Which analytic gradient to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    /// First-order action, varied in `A`.
    FirstOrderA,
    /// First-order action, varied in `F`.
    FirstOrderF,
    /// Reduced action, varied in `A`.
    Reduced,
    /// Doubled-sector action, varied in `B`.
    DoubledB,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientCheck {
    pub analytic: f64,
    pub numeric: f64,
    pub relative_error: f64,
}

/// Inputs for [`functional_gradient_check`]. `a_tilde` is only read for
/// [`ActionKind::DoubledB`], where `a` plays the role of `A` and `b` of `B`.
pub struct GradientInputs<'a> {
    pub a: &'a GaugeField,
    pub f: &'a FieldStrengthVar,
    pub j: &'a CurrentField,
    pub a_tilde: &'a GaugeField,
    pub b: &'a GaugeField,
}

/// Direction of variation: a gauge-field shape or a field-strength shape.
pub enum Direction<'a> {
    Vector(&'a GaugeField),
    Tensor(&'a FieldStrengthVar),
}

/// Central difference with step `h` and one Richardson step, `(4D_{h/2} - D_h)/3`.
pub fn richardson_derivative(g: impl Fn(f64) -> Result<f64>, h: f64) -> Result<f64> {
    let d = |s: f64| -> Result<f64> { Ok((g(s)? - g(-s)?) / (2.0 * s)) };
    let (dh, dh2) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * dh2 - dh) / 3.0)
}

/// Compares the analytic directional derivative of the chosen action with
/// [`richardson_derivative`].
pub fn functional_gradient_check(
    kind: ActionKind,
    inputs: &GradientInputs<'_>,
    direction: Direction<'_>,
    cfg: &ActionConfig,
    h: f64,
) -> Result<GradientCheck> {
    let vol = inputs.a.lattice.cell_volume();
    let dot4 = |g: &[[f64; 4]], d: &GaugeField| -> f64 {
        g.iter().zip(&d.data).map(|(x, y)| (0..4).map(|m| x[m] * y[m]).sum::<f64>()).sum::<f64>() * vol
    };
    let (analytic, numeric) = match (kind, direction) {
        (ActionKind::FirstOrderA, Direction::Vector(d)) => {
            let r = euler_lagrange_residuals(inputs.a, inputs.f, inputs.j, cfg)?;
            let num = richardson_derivative(
                |t| assemble_first_order_action(&inputs.a.displaced(d, t), inputs.f, inputs.j, cfg),
                h,
            )?;
            (dot4(&r.a, d), num)
        }
        (ActionKind::FirstOrderF, Direction::Tensor(d)) => {
            let r = euler_lagrange_residuals(inputs.a, inputs.f, inputs.j, cfg)?;
            let an = r
                .f
                .iter()
                .zip(&d.data)
                .map(|(x, y)| (0..6).map(|p| x[p] * y[p]).sum::<f64>())
                .sum::<f64>()
                * vol;
            let num = richardson_derivative(
                |t| assemble_first_order_action(inputs.a, &inputs.f.displaced(d, t), inputs.j, cfg),
                h,
            )?;
            (an, num)
        }
        (ActionKind::Reduced, Direction::Vector(d)) => {
            let g = reduced_gradient(inputs.a, inputs.j, cfg)?;
            let num = richardson_derivative(|t| reduced_action(&inputs.a.displaced(d, t), inputs.j, cfg), h)?;
            (dot4(&g, d), num)
        }
        (ActionKind::DoubledB, Direction::Vector(d)) => {
            let g = doubled_action_b_gradient(inputs.a_tilde);
            let num = richardson_derivative(
                |t| doubled_action(inputs.a, inputs.a_tilde, &inputs.b.displaced(d, t)),
                h,
            )?;
            (dot4(&g, d), num)
        }
        _ => {
            return Err(Error::InvalidLattice(
                "direction shape does not match the varied field".into(),
            ))
        }
    };
    let scale = analytic.abs().max(numeric.abs());
    let relative_error = if scale > 0.0 { (analytic - numeric).abs() / scale } else { 0.0 };
    Ok(GradientCheck {
        analytic,
        numeric,
        relative_error,
    })
}
