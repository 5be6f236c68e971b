//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64 as C;

pub type V3 = [f64; 3];

pub fn c(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn norm(v: &V3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

// ---------------------------------------------------------------------------
// circular plane waves, built from scratch

/// Some unit vector orthogonal to `n`.
fn orthogonal(n: &V3) -> V3 {
    let t = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = cross(n, &t);
    let l = norm(&u);
    u.map(|x| x / l)
}

/// Circular plane wave `E = A Re[(u + iσv)/√2 e^{i(k·x - c|k|t + φ)}]`,
/// `B = k̂×E/c`, where `(u, v, k̂)` is right handed.
#[derive(Clone, Copy, Debug)]
pub struct Wave {
    pub k: V3,
    pub amplitude: f64,
    /// +1 or -1
    pub handedness: f64,
    pub phase: f64,
}

impl Wave {
    pub fn em(&self, x: &V3, t: f64, speed: f64) -> (V3, V3) {
        let kn = norm(&self.k);
        let n = self.k.map(|v| v / kn);
        let u = orthogonal(&n);
        let v = cross(&n, &u);
        let ph = self.k[0] * x[0] + self.k[1] * x[1] + self.k[2] * x[2] - speed * kn * t + self.phase;
        let (s, co) = ph.sin_cos();
        let a = self.amplitude * FRAC_1_SQRT_2;
        // Re[(u + iσv)(cos + i sin)] = u cos - σ v sin
        let e: V3 = [0, 1, 2].map(|i| a * (u[i] * co - self.handedness * v[i] * s));
        let b = cross(&n, &e).map(|x| x / speed);
        (e, b)
    }
}

pub fn superpose(waves: &[Wave], x: &V3, t: f64, speed: f64) -> (V3, V3) {
    let mut e = [0.0; 3];
    let mut b = [0.0; 3];
    for w in waves {
        let (we, wb) = w.em(x, t, speed);
        for i in 0..3 {
            e[i] += we[i];
            b[i] += wb[i];
        }
    }
    (e, b)
}

/// `(E/c + iσB)·(E/c + iσB)`.
pub fn w_from_em(e: &V3, b: &V3, branch: f64, speed: f64) -> C {
    let f: [C; 3] = [0, 1, 2].map(|i| C::new(e[i] / speed, branch * b[i]));
    f[0] * f[0] + f[1] * f[1] + f[2] * f[2]
}

// ---------------------------------------------------------------------------
// vortex oracle: phase winding around every grid face

pub struct Scan {
    /// Zero locations, one per punctured face.
    pub punctures: Vec<V3>,
    /// Connected groups of punctured faces (faces sharing a cell).
    pub lines: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn wrap(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

/// Newton iteration for `w = 0` restricted to the plane spanned by axes
/// `a` and `b` through `start`.
fn newton_2d(w: &(dyn Fn(&V3) -> C + Sync), start: V3, a: usize, b: usize, h: f64) -> Option<V3> {
    let mut p = start;
    for _ in 0..60 {
        let f = w(&p);
        let d = |ax: usize| {
            let (mut q, mut r) = (p, p);
            q[ax] += h;
            r[ax] -= h;
            (w(&q) - w(&r)) / (2.0 * h)
        };
        let (fa, fb) = (d(a), d(b));
        let det = fa.re * fb.im - fb.re * fa.im;
        if det == 0.0 {
            return None;
        }
        let da = (-f.re * fb.im + fb.re * f.im) / det;
        let db = (-fa.re * f.im + fa.im * f.re) / det;
        p[a] += da;
        p[b] += db;
        if da.abs().max(db.abs()) < 1e-14 * (1.0 + p[a].abs().max(p[b].abs())) {
            return Some(p);
        }
    }
    (w(&p).norm() < 1e-10).then_some(p)
}

pub fn winding_scan(n: [usize; 3], spacing: V3, origin: V3, w: &(dyn Fn(&V3) -> C + Sync)) -> Scan {
    let idx = |i: usize, j: usize, k: usize| i + n[0] * (j + n[1] * k);
    let pos = |i: usize, j: usize, k: usize| {
        [
            origin[0] + i as f64 * spacing[0],
            origin[1] + j as f64 * spacing[1],
            origin[2] + k as f64 * spacing[2],
        ]
    };
    let mut arg = vec![0.0; n[0] * n[1] * n[2]];
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                arg[idx(i, j, k)] = w(&pos(i, j, k)).arg();
            }
        }
    }

    let mut faces: Vec<(usize, [usize; 3])> = Vec::new();
    let mut punctures = Vec::new();
    for axis in 0..3 {
        let (a, b) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut lim = [n[0], n[1], n[2]];
        lim[a] -= 1;
        lim[b] -= 1;
        for k in 0..lim[2] {
            for j in 0..lim[1] {
                for i in 0..lim[0] {
                    let corner = |da: usize, db: usize| {
                        let mut c = [i, j, k];
                        c[a] += da;
                        c[b] += db;
                        arg[idx(c[0], c[1], c[2])]
                    };
                    let ring = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                    let total: f64 = (0..4).map(|s| wrap(ring[(s + 1) % 4] - ring[s])).sum();
                    let winding = (total / (2.0 * PI)).round() as i64;
                    if winding == 0 {
                        continue;
                    }
                    let mut centre = pos(i, j, k);
                    centre[a] += 0.5 * spacing[a];
                    centre[b] += 0.5 * spacing[b];
                    let h = 1e-6 * spacing[a].min(spacing[b]);
                    let p = newton_2d(w, centre, a, b, h)
                        .filter(|p| {
                            (p[a] - centre[a]).abs() <= 0.75 * spacing[a] && (p[b] - centre[b]).abs() <= 0.75 * spacing[b]
                        })
                        .unwrap_or(centre);
                    faces.push((axis, [i, j, k]));
                    punctures.push(p);
                }
            }
        }
    }

    // faces sharing a cell belong to the same line
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    let mut by_cell: HashMap<[usize; 3], usize> = HashMap::new();
    for (f, &(axis, cell)) in faces.iter().enumerate() {
        let mut cells = Vec::with_capacity(2);
        if cell[axis] + 1 < n[axis] {
            cells.push(cell);
        }
        if cell[axis] > 0 {
            let mut c = cell;
            c[axis] -= 1;
            cells.push(c);
        }
        for c in cells {
            match by_cell.get(&c) {
                Some(&other) => {
                    let (ra, rb) = (find(&mut parent, f), find(&mut parent, other));
                    parent[ra] = rb;
                }
                None => {
                    by_cell.insert(c, f);
                }
            }
        }
    }
    let lines = (0..faces.len()).filter(|&f| find(&mut parent, f) == f).count();
    Scan { punctures, lines }
}

/// Largest distance from any point of `a` to its nearest neighbour in `b`.
pub fn max_nearest_distance(a: &[V3], b: &[V3]) -> f64 {
    a.iter()
        .map(|p| {
            b.iter()
                .map(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Fourier amplitudes by direct summation

/// `F̂(k) √(dV/N)` with `F̂(k) = Σ_x F(x) e^{-ik·x}` over grid positions.
pub fn direct_dft(values: &[[C; 3]], positions: &[V3], k: &V3, cell_volume: f64) -> [C; 3] {
    let mut acc = [C::new(0.0, 0.0); 3];
    for (f, x) in values.iter().zip(positions) {
        let e = C::from_polar(1.0, -(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]));
        for i in 0..3 {
            acc[i] += f[i] * e;
        }
    }
    let s = (cell_volume / values.len() as f64).sqrt();
    acc.map(|z| z * s)
}

/// `|e±*·a|` with a circular basis built independently of the library.
pub fn helicity_magnitudes(a: &[C; 3], k: &V3) -> (f64, f64, f64) {
    let kn = norm(k);
    let n = k.map(|v| v / kn);
    let u = orthogonal(&n);
    let v = cross(&n, &u);
    let proj = |s: f64| {
        // e = (u + i s v)/√2, so e* = (u - i s v)/√2
        let mut z = C::new(0.0, 0.0);
        for i in 0..3 {
            z += C::new(u[i], -s * v[i]) * a[i];
        }
        (z * FRAC_1_SQRT_2).norm()
    };
    let long = (0..3).fold(C::new(0.0, 0.0), |z, i| z + a[i] * n[i]).norm();
    (proj(1.0), proj(-1.0), long)
}

// ---------------------------------------------------------------------------
// Lorentz algebra

pub fn pauli() -> [Matrix2<C>; 4] {
    let (o, z, i) = (c(1.0), c(0.0), C::new(0.0, 1.0));
    [
        Matrix2::new(o, z, z, o),
        Matrix2::new(z, o, o, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(o, z, z, -o),
    ]
}

/// `Λ^μ_ν = ½ Tr(σ_μ A σ_ν A†)` for `x̄ = x^μ σ_μ ↦ A x̄ A†`.
pub fn lorentz_oracle(a: &Matrix2<C>) -> Matrix4<f64> {
    let s = pauli();
    Matrix4::from_fn(|mu, nu| 0.5 * (s[mu] * a * s[nu] * a.adjoint()).trace().re)
}

pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

fn perm_sign(p: [usize; 4]) -> f64 {
    let mut s = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// `(i/2) ε_{μνρσ} F^{ρσ}` with `ε_{0123} = -1`, by brute-force summation.
pub fn dual_oracle(f: &Matrix4<C>) -> Matrix4<C> {
    Matrix4::from_fn(|mu, nu| {
        let mut acc = c(0.0);
        for rho in 0..4 {
            for sigma in 0..4 {
                let eps = -perm_sign([mu, nu, rho, sigma]);
                if eps != 0.0 {
                    acc += f[(rho, sigma)] * (eps * ETA[rho] * ETA[sigma]);
                }
            }
        }
        acc * C::new(0.0, 0.5)
    })
}
