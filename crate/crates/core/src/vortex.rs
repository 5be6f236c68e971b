//! RS vortices: the curves where `W = F·F` (unconjugated) vanishes.
//!
//! Test fields come from [`synth_lg_beam`] (paraxial Laguerre-Gauss mode
//! with circular polarisation) and [`plane_wave_superposition`]. Any single
//! vacuum plane wave is a null field, `W ≡ 0`, and is reported as
//! degenerate rather than traced.
//!
//! Tracing works face by face. On every cell face `W` is interpolated
//! bilinearly, `W(u, v) = a + bu + cv + duv`, and its complex roots in the
//! unit square are found in closed form. The two or more punctured faces of
//! a cell are joined into segments and the segments are chained into
//! polylines through shared faces.

use std::collections::HashMap;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{self, rs_from_em, CVec3, Grid3, Helicity, RSField, RVec3, RealEMField, UnitsConfig};
use crate::par;
use crate::spin::helicity_basis;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LGBeamParams {
    pub waist: f64,
    pub wavelength: f64,
    pub l: i32,
    pub p: u32,
    /// Handedness of the circular polarisation `(x̂ ± iŷ)/√2`.
    pub polarization: Helicity,
    /// Peak scale of `E` at the waist for `l = p = 0`.
    pub amplitude: f64,
    /// Transverse position `(x, y)` of the beam axis.
    pub axis: [f64; 2],
    /// `z` of the waist.
    pub focus_z: f64,
}

impl LGBeamParams {
    pub fn new(waist: f64, wavelength: f64, l: i32, p: u32, polarization: Helicity) -> Result<Self> {
        let params = LGBeamParams {
            waist,
            wavelength,
            l,
            p,
            polarization,
            amplitude: 1.0,
            axis: [0.0, 0.0],
            focus_z: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.waist > 0.0 && self.waist.is_finite()) {
            return Err(Error::InvalidBeam(format!("waist must be > 0, got {}", self.waist)));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::InvalidBeam(format!(
                "wavelength must be > 0, got {}",
                self.wavelength
            )));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::InvalidBeam("amplitude must be finite".into()));
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn rayleigh_range(&self) -> f64 {
        std::f64::consts::PI * self.waist * self.waist / self.wavelength
    }

    /// Paraxial complex envelope `u(ρ, φ, z)`, without the carrier `e^{ikz}`.
    pub fn envelope(&self, pos: &RVec3) -> Complex64 {
        let (x, y) = (pos[0] - self.axis[0], pos[1] - self.axis[1]);
        let z = pos[2] - self.focus_z;
        let zr = self.rayleigh_range();
        let k = self.wavenumber();
        let w = self.waist * (1.0 + (z / zr).powi(2)).sqrt();
        let rho2 = x * x + y * y;
        let al = self.l.unsigned_abs();
        let radial = (2.0 * rho2 / (w * w)).sqrt().powi(al as i32)
            * laguerre(self.p, al as f64, 2.0 * rho2 / (w * w))
            * (-rho2 / (w * w)).exp()
            * (self.waist / w);
        let inv_r = z / (z * z + zr * zr);
        let gouy = (2 * self.p + al + 1) as f64 * (z / zr).atan();
        let phase = k * rho2 * inv_r / 2.0 - gouy + self.l as f64 * y.atan2(x);
        Complex64::from_polar(self.amplitude * radial, phase)
    }
}

/// Generalised Laguerre polynomial `L_p^α(x)` by the three-term recurrence.
pub fn laguerre(p: u32, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if p == 0 {
        return prev;
    }
    for k in 1..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn circular(h: Helicity) -> CVec3 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        Complex64::new(s, 0.0),
        Complex64::new(0.0, h.sign() * s),
        Complex64::new(0.0, 0.0),
    ]
}

/// Real `E` and `B = ẑ×E/c` of the paraxial beam travelling along `+z`.
pub fn lg_beam_em(params: &LGBeamParams, pos: &RVec3, t: f64, units: &UnitsConfig) -> (RVec3, RVec3) {
    let k = params.wavenumber();
    let carrier = Complex64::from_polar(1.0, k * (pos[2] - params.focus_z) - units.c * k * t);
    let u = params.envelope(pos) * carrier;
    let pol = circular(params.polarization);
    let e = pol.map(|p| (p * u).re);
    let b = [-e[1] / units.c, e[0] / units.c, 0.0];
    (e, b)
}

/// Samples the beam on the grid at time `t` and packs it as an RS field of
/// branch `branch`.
pub fn synth_lg_beam(
    params: &LGBeamParams,
    grid: &Grid3,
    t: f64,
    units: &UnitsConfig,
    branch: Helicity,
) -> Result<RSField> {
    params.validate()?;
    let em = RealEMField::from_fn(grid.clone(), |pos| lg_beam_em(params, &pos, t, units));
    Ok(rs_from_em(&em, branch, units))
}

/// Circularly polarised vacuum plane wave
/// `E = A Re[e_±(k̂) e^{i(k·x - c|k|t + φ)}]`, `B = k̂×E/c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveSpec {
    pub k: RVec3,
    pub amplitude: f64,
    pub polarization: Helicity,
    pub phase: f64,
}

impl PlaneWaveSpec {
    pub fn em(&self, pos: &RVec3, t: f64, units: &UnitsConfig) -> Result<(RVec3, RVec3)> {
        let basis = helicity_basis(&self.k).ok_or(Error::ZeroWavevector)?;
        let pol = match self.polarization {
            Helicity::Plus => basis[0],
            Helicity::Minus => basis[1],
        };
        let kn = (self.k[0].powi(2) + self.k[1].powi(2) + self.k[2].powi(2)).sqrt();
        let ph = self.k[0] * pos[0] + self.k[1] * pos[1] + self.k[2] * pos[2] - units.c * kn * t + self.phase;
        let z = Complex64::from_polar(self.amplitude, ph);
        let e = pol.map(|p| (p * z).re);
        let kh = self.k.map(|v| v / kn);
        let b = [
            (kh[1] * e[2] - kh[2] * e[1]) / units.c,
            (kh[2] * e[0] - kh[0] * e[2]) / units.c,
            (kh[0] * e[1] - kh[1] * e[0]) / units.c,
        ];
        Ok((e, b))
    }
}

/// `(E, B)` of a sum of plane waves at one point.
pub fn superposition_em(
    waves: &[PlaneWaveSpec],
    pos: &RVec3,
    t: f64,
    units: &UnitsConfig,
) -> Result<(RVec3, RVec3)> {
    let mut e = [0.0; 3];
    let mut b = [0.0; 3];
    for w in waves {
        let (we, wb) = w.em(pos, t, units)?;
        for c in 0..3 {
            e[c] += we[c];
            b[c] += wb[c];
        }
    }
    Ok((e, b))
}

/// RS field of a plane-wave superposition sampled on the grid.
pub fn plane_wave_superposition(
    waves: &[PlaneWaveSpec],
    grid: &Grid3,
    t: f64,
    units: &UnitsConfig,
    branch: Helicity,
) -> Result<RSField> {
    if waves.iter().any(|w| w.k == [0.0; 3]) {
        return Err(Error::ZeroWavevector);
    }
    let em = RealEMField::from_fn(grid.clone(), |pos| {
        superposition_em(waves, &pos, t, units).expect("nonzero wavevectors")
    });
    Ok(rs_from_em(&em, branch, units))
}

/// `W = F·F` from `E` and `B` at one point.
pub fn vortex_scalar_at(e: &RVec3, b: &RVec3, branch: Helicity, units: &UnitsConfig) -> Complex64 {
    let s = branch.sign();
    let f: CVec3 = [0, 1, 2].map(|c| Complex64::new(e[c] / units.c, s * b[c]));
    field::bilinear3(&f, &f)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VortexScalarField {
    pub grid: Grid3,
    pub w: Vec<Complex64>,
    /// `W` vanishes (to roundoff) everywhere: a null field.
    pub degenerate: bool,
}

/// Relative threshold on `median |W| / mean |F|²` for the null-field flag.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

impl VortexScalarField {
    /// Wraps precomputed values; `scale` is the reference for the degeneracy
    /// test (mean `|F|²` for RS fields).
    pub fn from_values(grid: Grid3, w: Vec<Complex64>, scale: f64) -> Result<Self> {
        if w.len() != grid.len() {
            return Err(Error::FieldLength {
                expected: grid.len(),
                actual: w.len(),
            });
        }
        let degenerate = median_abs(&w) <= DEGENERACY_THRESHOLD * scale;
        Ok(VortexScalarField { grid, w, degenerate })
    }

    pub fn max_abs(&self) -> f64 {
        self.w.iter().fold(0.0, |a, z| a.max(z.norm()))
    }
}

fn median_abs(w: &[Complex64]) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    let mut m: Vec<f64> = w.iter().map(|z| z.norm()).collect();
    let mid = m.len() / 2;
    *m.select_nth_unstable_by(mid, |a, b| a.total_cmp(b)).1
}

/// Mean of `|F|²` over the grid points.
pub fn mean_intensity(f: &RSField) -> f64 {
    let n = f.data().len();
    par::sum_range(n, |i| field::norm_sqr3(&f.data()[i])) / n as f64
}

/// `W = Fx² + Fy² + Fz²` pointwise.
pub fn vortex_scalar(f: &RSField) -> VortexScalarField {
    let w = par::map_slice(f.data(), |v| field::bilinear3(v, v));
    let scale = mean_intensity(f);
    let degenerate = median_abs(&w) <= DEGENERACY_THRESHOLD * scale;
    VortexScalarField {
        grid: f.grid().clone(),
        w,
        degenerate,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VortexLine {
    pub points: Vec<RVec3>,
    pub residuals: Vec<f64>,
    /// The last vertex connects back to the first.
    pub closed: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VortexLineSet {
    pub lines: Vec<VortexLine>,
}

impl VortexLineSet {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.lines.iter().map(|l| l.points.len()).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.lines
            .iter()
            .flat_map(|l| l.residuals.iter().copied())
            .fold(0.0, f64::max)
    }

    /// CSV with header `line_id,x,y,z,residual`, one row per vertex.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "line_id,x,y,z,residual")?;
        for (id, line) in self.lines.iter().enumerate() {
            for (p, r) in line.points.iter().zip(&line.residuals) {
                writeln!(out, "{id},{:.16e},{:.16e},{:.16e},{:.16e}", p[0], p[1], p[2], r)?;
            }
        }
        Ok(())
    }
}

/// Exact `W` at a point, used for optional refinement and residuals.
pub type WEvaluator<'a> = &'a (dyn Fn(&RVec3) -> Complex64 + Sync);

#[derive(Clone, Copy, Default)]
pub struct TraceOptions<'a> {
    /// Evaluator of `W`; when present each vertex residual is `|W|` at the
    /// vertex, otherwise the interpolated `|W|`.
    pub evaluator: Option<WEvaluator<'a>>,
    /// One in-face Newton step per vertex (needs `evaluator`).
    pub refine: bool,
}

/// Face `(axis, i, j, k)`: the face normal to `axis` whose lowest corner is
/// grid point `(i, j, k)`.
type FaceKey = (u8, usize, usize, usize);

#[derive(Clone, Copy, Debug)]
struct Crossing {
    face: FaceKey,
    pos: RVec3,
    interp: f64,
}

fn in_face_axes(axis: u8) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Roots of `a + bu + cv + duv` in the closed unit square.
pub fn bilinear_roots(w00: Complex64, w10: Complex64, w01: Complex64, w11: Complex64) -> Vec<[f64; 2]> {
    let a = w00;
    let b = w10 - w00;
    let c = w01 - w00;
    let d = w11 - w10 - w01 + w00;
    // Im[(a + cv) conj(b + dv)] = 0
    let q0 = (a * b.conj()).im;
    let q1 = (a * d.conj()).im + (c * b.conj()).im;
    let q2 = (c * d.conj()).im;
    let scale = q0.abs().max(q1.abs()).max(q2.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    let mut vs = Vec::with_capacity(2);
    if q2.abs() <= 1e-14 * scale {
        if q1.abs() > 1e-14 * scale {
            vs.push(-q0 / q1);
        }
    } else {
        let disc = q1 * q1 - 4.0 * q2 * q0;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // stable quadratic formula
            let t = -0.5 * (q1 + q1.signum() * sq);
            if t != 0.0 {
                vs.push(t / q2);
                vs.push(q0 / t);
            } else {
                vs.push(0.0);
            }
        }
    }
    let eps = 1e-12;
    let mut out = Vec::new();
    for v in vs {
        if !(-eps..=1.0 + eps).contains(&v) {
            continue;
        }
        let p = a + c * v;
        let q = b + d * v;
        let qn = q.norm_sqr();
        if qn == 0.0 {
            continue;
        }
        let u = -(p * q.conj()).re / qn;
        if !(-eps..=1.0 + eps).contains(&u) {
            continue;
        }
        let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        if out.iter().any(|o: &[f64; 2]| (o[0] - u).abs() < 1e-12 && (o[1] - v).abs() < 1e-12) {
            continue;
        }
        // reject spurious roots where the real parts only match in sign
        let wv = a + b * u + c * v + d * u * v;
        let mag = a.norm() + b.norm() + c.norm() + d.norm();
        if wv.norm() <= 1e-9 * mag {
            out.push([u, v]);
        }
    }
    out
}

fn face_crossings(vs: &VortexScalarField, axis: u8, i: usize, j: usize, k: usize) -> Vec<Crossing> {
    let g = &vs.grid;
    let (ua, va) = in_face_axes(axis);
    let base = [i, j, k];
    let corner = |du: usize, dv: usize| {
        let mut c = base;
        c[ua] += du;
        c[va] += dv;
        vs.w[g.index(c[0], c[1], c[2])]
    };
    let (w00, w10, w01, w11) = (corner(0, 0), corner(1, 0), corner(0, 1), corner(1, 1));
    let (sp, origin) = (g.spacing(), g.origin());
    bilinear_roots(w00, w10, w01, w11)
        .into_iter()
        .map(|[u, v]| {
            // roots on a face edge come out bitwise equal from every face sharing it
            let mut t = base.map(|b| b as f64);
            t[ua] += u;
            t[va] += v;
            let pos = [0, 1, 2].map(|c| origin[c] + t[c] * sp[c]);
            let w = w00 * (1.0 - u) * (1.0 - v) + w10 * u * (1.0 - v) + w01 * (1.0 - u) * v + w11 * u * v;
            Crossing {
                face: (axis, i, j, k),
                pos,
                interp: w.norm(),
            }
        })
        .collect()
}

/// One Newton step for `W = 0` restricted to the face plane.
fn newton_in_face(eval: WEvaluator<'_>, axis: u8, pos: RVec3, h: f64) -> RVec3 {
    let (ua, va) = in_face_axes(axis);
    let w = eval(&pos);
    let d = |ax: usize| {
        let mut p = pos;
        let mut m = pos;
        p[ax] += h;
        m[ax] -= h;
        (eval(&p) - eval(&m)) / (2.0 * h)
    };
    let (wu, wv) = (d(ua), d(va));
    // [Re wu Re wv; Im wu Im wv] [du dv]ᵀ = -[Re w; Im w]
    let det = wu.re * wv.im - wv.re * wu.im;
    if det.abs() < 1e-300 {
        return pos;
    }
    let du = (-w.re * wv.im + wv.re * w.im) / det;
    let dv = (-wu.re * w.im + wu.im * w.re) / det;
    let mut out = pos;
    out[ua] += du;
    out[va] += dv;
    out
}

/// Traces the zero lines of `W`.
pub fn trace_vortex_lines(vs: &VortexScalarField, opts: &TraceOptions<'_>) -> Result<VortexLineSet> {
    if vs.degenerate {
        return Err(Error::DegenerateField);
    }
    let g = &vs.grid;
    let [nx, ny, nz] = g.dims();
    if nx < 2 || ny < 2 || nz < 2 {
        return Ok(VortexLineSet::default());
    }

    // all punctured faces, in deterministic order
    let mut faces: Vec<FaceKey> = Vec::new();
    for axis in 0..3u8 {
        let lim = match axis {
            0 => [nx, ny - 1, nz - 1],
            1 => [nx - 1, ny, nz - 1],
            _ => [nx - 1, ny - 1, nz],
        };
        for k in 0..lim[2] {
            for j in 0..lim[1] {
                for i in 0..lim[0] {
                    faces.push((axis, i, j, k));
                }
            }
        }
    }
    let per_face = par::map_slice(&faces, |&(a, i, j, k)| face_crossings(vs, a, i, j, k));
    let crossings: Vec<Crossing> = per_face.into_iter().flatten().collect();

    let mut by_face: HashMap<FaceKey, Vec<usize>> = HashMap::new();
    for (id, c) in crossings.iter().enumerate() {
        by_face.entry(c.face).or_default().push(id);
    }

    // cells touching each punctured face, collected per cell
    let mut by_cell: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
    for (id, c) in crossings.iter().enumerate() {
        let (axis, i, j, k) = c.face;
        let a = axis as usize;
        let mut cell = [i, j, k];
        let lims = [nx - 1, ny - 1, nz - 1];
        if cell[a] < lims[a] {
            by_cell.entry(cell).or_default().push(id);
        }
        if cell[a] > 0 {
            cell[a] -= 1;
            by_cell.entry(cell).or_default().push(id);
        }
    }

    // a zero lying on a grid edge or node is found by every face touching
    // it; those crossings become a single node
    let mut reps: Vec<usize> = Vec::new();
    let mut node_at: HashMap<[u64; 3], usize> = HashMap::new();
    let node_of: Vec<usize> = crossings
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let key = c.pos.map(|v| (v + 0.0).to_bits());
            *node_at.entry(key).or_insert_with(|| {
                reps.push(id);
                reps.len() - 1
            })
        })
        .collect();
    let npos = |n: usize| &crossings[reps[n]].pos;

    // pair nodes inside each cell
    let mut cells: Vec<_> = by_cell.into_iter().collect();
    cells.sort_unstable_by_key(|(c, _)| [c[2], c[1], c[0]]);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
    for (_, ids) in cells {
        let mut ids: Vec<usize> = ids.into_iter().map(|id| node_of[id]).collect();
        ids.sort_unstable();
        ids.dedup();
        while ids.len() >= 2 {
            let first = ids.remove(0);
            let (best, _) = ids
                .iter()
                .enumerate()
                .map(|(n, &o)| (n, dist2(npos(first), npos(o))))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            let other = ids.remove(best);
            if !adj[first].contains(&other) {
                adj[first].push(other);
                adj[other].push(first);
            }
        }
    }

    // walk: open chains from degree-1 nodes first, then cycles
    let mut used = vec![false; reps.len()];
    let mut chains: Vec<(Vec<usize>, bool)> = Vec::new();
    let starts: Vec<usize> = (0..reps.len())
        .filter(|&n| adj[n].len() <= 1)
        .chain(0..reps.len())
        .collect();
    for s in starts {
        if used[s] {
            continue;
        }
        let mut chain = vec![s];
        used[s] = true;
        let mut cur = s;
        loop {
            let next = adj[cur].iter().copied().find(|&n| !used[n]);
            match next {
                Some(n) => {
                    used[n] = true;
                    chain.push(n);
                    cur = n;
                }
                None => break,
            }
        }
        let closed = chain.len() > 2 && adj[cur].contains(&s);
        chains.push((chain, closed));
    }

    let h = 1e-4 * g.min_spacing();
    let lines = chains
        .into_iter()
        .map(|(chain, closed)| {
            let mut points = Vec::with_capacity(chain.len());
            let mut residuals = Vec::with_capacity(chain.len());
            for node in chain {
                let c = &crossings[reps[node]];
                let mut p = c.pos;
                let r = match opts.evaluator {
                    Some(eval) => {
                        if opts.refine {
                            p = newton_in_face(eval, c.face.0, p, h);
                        }
                        eval(&p).norm()
                    }
                    None => c.interp,
                };
                points.push(p);
                residuals.push(r);
            }
            VortexLine {
                points,
                residuals,
                closed,
            }
        })
        .collect();
    Ok(VortexLineSet { lines })
}

fn dist2(a: &RVec3, b: &RVec3) -> f64 {
    (0..3).map(|c| (a[c] - b[c]).powi(2)).sum()
}
