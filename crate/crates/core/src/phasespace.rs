//! Family-agnostic phase-space functions computed from Fock coefficients:
//! quadrature distributions, Wigner functions and Husimi functions.
//!
//! Conventions: `ψ(x) = Σ c_n h_n(x)` with the normalized Hermite functions
//! `h_n`; the quadrature distribution at phase `φ` is `|Σ c_n e^{inφ} h_n(x)|²`;
//! `W(x,p) = (1/π) ∫ dy e^{2ipy} ψ(x−y) ψ*(x+y)`; and
//! `Q(x,p) = |⟨α|ψ⟩|²/(2π)` with `α = (x + ip)/√2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::quadrature::mapped_rule;
use crate::specfun::{hermite_functions, ln_fact};

/// Rectangular sampling lattice over `(x, p)` (or `(x, φ)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl PhaseSpaceGrid {
    pub fn new(x: (f64, f64, usize), p: (f64, f64, usize)) -> Result<Self> {
        let g = PhaseSpaceGrid {
            x_min: x.0,
            x_max: x.1,
            nx: x.2,
            p_min: p.0,
            p_max: p.1,
            np: p.2,
        };
        if !(g.x_min < g.x_max && g.p_min < g.p_max) {
            return Err(Error::invalid("grid bounds must satisfy min < max"));
        }
        if g.nx < 2 || g.np < 2 {
            return Err(Error::invalid("grids need at least two points per axis"));
        }
        Ok(g)
    }

    /// Square grid `[-a, a]²` with `n` points per axis.
    pub fn square(a: f64, n: usize) -> Result<Self> {
        Self::new((-a, a, n), (-a, a, n))
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn ps(&self) -> Vec<f64> {
        linspace(self.p_min, self.p_max, self.np)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { b } else { a + h * i as f64 }).collect()
}

/// Values on a [`PhaseSpaceGrid`], row-major: index `ix * np + ip`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceMap {
    pub grid: PhaseSpaceGrid,
    pub values: Vec<f64>,
}

impl PhaseSpaceMap {
    pub fn from_fn(grid: PhaseSpaceGrid, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let xs = grid.xs();
        let ps = grid.ps();
        let values = xs
            .par_iter()
            .flat_map_iter(|&x| ps.iter().map(move |&p| (x, p)).collect::<Vec<_>>())
            .map(|(x, p)| f(x, p))
            .collect();
        PhaseSpaceMap { grid, values }
    }

    pub fn try_from_fn(
        grid: PhaseSpaceGrid,
        f: impl Fn(f64, f64) -> Result<f64> + Sync,
    ) -> Result<Self> {
        let xs = grid.xs();
        let ps = grid.ps();
        let values = xs
            .par_iter()
            .flat_map_iter(|&x| ps.iter().map(move |&p| (x, p)).collect::<Vec<_>>())
            .map(|(x, p)| f(x, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(PhaseSpaceMap { grid, values })
    }

    pub fn get(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.grid.np + ip]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `(x, p, value)` at the largest value.
    pub fn argmax(&self) -> (f64, f64, f64) {
        self.arg_by(|a, b| a > b)
    }

    /// `(x, p, value)` at the smallest value.
    pub fn argmin(&self) -> (f64, f64, f64) {
        self.arg_by(|a, b| a < b)
    }

    fn arg_by(&self, better: impl Fn(f64, f64) -> bool) -> (f64, f64, f64) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if better(v, self.values[best]) {
                best = i;
            }
        }
        let (ix, ip) = (best / self.grid.np, best % self.grid.np);
        (self.grid.xs()[ix], self.grid.ps()[ip], self.values[best])
    }

    /// Trapezoidal integral over the grid.
    pub fn integral(&self) -> f64 {
        let g = &self.grid;
        let mut acc = 0.0;
        for ix in 0..g.nx {
            let wx = if ix == 0 || ix + 1 == g.nx { 0.5 } else { 1.0 };
            for ip in 0..g.np {
                let wp = if ip == 0 || ip + 1 == g.np { 0.5 } else { 1.0 };
                acc += wx * wp * self.get(ix, ip);
            }
        }
        acc * g.dx() * g.dp()
    }

    /// Integral over `p` at each grid `x` (trapezoidal).
    pub fn marginal_x(&self) -> Vec<f64> {
        let g = &self.grid;
        (0..g.nx)
            .map(|ix| {
                let row = &self.values[ix * g.np..(ix + 1) * g.np];
                trapezoid(row, g.dp())
            })
            .collect()
    }

    /// Integral over `x` at each grid `p` (trapezoidal).
    pub fn marginal_p(&self) -> Vec<f64> {
        let g = &self.grid;
        (0..g.np)
            .map(|ip| {
                let col: Vec<f64> = (0..g.nx).map(|ix| self.get(ix, ip)).collect();
                trapezoid(&col, g.dx())
            })
            .collect()
    }

    /// Largest pointwise difference to another map on the same grid.
    pub fn max_abs_diff(&self, other: &PhaseSpaceMap) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn trapezoid(v: &[f64], h: f64) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let inner: f64 = v[1..v.len() - 1].iter().sum();
    (inner + 0.5 * (v[0] + v[v.len() - 1])) * h
}

/// `ψ_φ(x) = Σ c_n e^{inφ} h_n(x)`.
pub fn wavefunction(s: &FockVector, phi: f64, x: f64) -> Complex64 {
    let h = hermite_functions(s.cutoff(), x);
    let rot = Complex64::from_polar(1.0, phi);
    let mut ph = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, hn) in s.amps().iter().zip(&h) {
        acc += c * ph * *hn;
        ph *= rot;
    }
    acc
}

/// Quadrature distribution `p(x, φ) = |Σ c_n e^{inφ} h_n(x)|²` at each `x`.
pub fn quadrature_distribution(s: &FockVector, phi: f64, xs: &[f64]) -> Vec<f64> {
    xs.par_iter().map(|&x| wavefunction(s, phi, x).norm_sqr()).collect()
}

/// Half-width beyond which all `h_n`, `n ≤ cutoff`, are negligible
/// (at least 8 units past the outermost classical turning point).
pub fn support_radius(cutoff: usize) -> f64 {
    (2.0 * cutoff as f64 + 1.0).sqrt() + 8.0
}

/// Node-count policy for the Wigner transform.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WignerOptions {
    /// Gauss–Legendre nodes per row; default `4·cutoff + 64`, raised when
    /// the `e^{2ipy}` oscillation over the integration range needs more.
    pub nodes: Option<usize>,
}

fn wigner_nodes(opts: &WignerOptions, cutoff: usize, p_abs: f64, half: f64) -> usize {
    opts.nodes.unwrap_or_else(|| {
        let base = 4 * cutoff + 64;
        let osc = (4.0 * p_abs * half / std::f64::consts::PI).ceil() as usize + 64;
        base.max(osc)
    })
}

/// Wigner function at one phase-space point.
pub fn wigner_point(s: &FockVector, x: f64, p: f64, opts: &WignerOptions) -> f64 {
    let half = support_radius(s.cutoff()) - x.abs();
    if half <= 0.0 {
        return 0.0;
    }
    let n = wigner_nodes(opts, s.cutoff(), p.abs(), half);
    let (ys, ws) = mapped_rule(n, -half, half);
    let mut acc = 0.0;
    for (y, w) in ys.iter().zip(&ws) {
        let f = Complex64::from_polar(1.0, 2.0 * p * y)
            * wavefunction(s, 0.0, x - y)
            * wavefunction(s, 0.0, x + y).conj();
        acc += w * f.re;
    }
    acc / std::f64::consts::PI
}

/// Wigner function on a grid; the wavefunction is evaluated once per row.
pub fn wigner(s: &FockVector, grid: &PhaseSpaceGrid, opts: &WignerOptions) -> PhaseSpaceMap {
    let xs = grid.xs();
    let ps = grid.ps();
    let p_abs = grid.p_min.abs().max(grid.p_max.abs());
    let radius = support_radius(s.cutoff());
    let rows: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|&x| {
            let half = radius - x.abs();
            if half <= 0.0 {
                return vec![0.0; ps.len()];
            }
            let n = wigner_nodes(opts, s.cutoff(), p_abs, half);
            let (ys, ws) = mapped_rule(n, -half, half);
            let prod: Vec<Complex64> = ys
                .iter()
                .zip(&ws)
                .map(|(y, w)| wavefunction(s, 0.0, x - y) * wavefunction(s, 0.0, x + y).conj() * *w)
                .collect();
            ps.iter()
                .map(|&p| {
                    let v: f64 = ys
                        .iter()
                        .zip(&prod)
                        .map(|(y, f)| (Complex64::from_polar(1.0, 2.0 * p * y) * f).re)
                        .sum();
                    v / std::f64::consts::PI
                })
                .collect()
        })
        .collect();
    PhaseSpaceMap {
        grid: *grid,
        values: rows.into_iter().flatten().collect(),
    }
}

/// `⟨α|s⟩` with terms accumulated from their logarithms.
pub fn coherent_overlap(s: &FockVector, alpha: Complex64) -> Complex64 {
    let r = alpha.norm();
    let theta = alpha.arg();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, c) in s.amps().iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let ln_mag = if n == 0 {
            -0.5 * r * r
        } else if r == 0.0 {
            continue;
        } else {
            -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_fact(n)
        };
        acc += c * Complex64::from_polar(ln_mag.exp(), -(n as f64) * theta);
    }
    acc
}

/// Husimi function `|⟨α|s⟩|²/(2π)`, `α = (x + ip)/√2`.
pub fn husimi_point(s: &FockVector, x: f64, p: f64) -> f64 {
    let alpha = Complex64::new(x, p) / 2f64.sqrt();
    coherent_overlap(s, alpha).norm_sqr() / (2.0 * std::f64::consts::PI)
}

pub fn husimi(s: &FockVector, grid: &PhaseSpaceGrid) -> PhaseSpaceMap {
    PhaseSpaceMap::from_fn(*grid, |x, p| husimi_point(s, x, p))
}

/// Convolution of a Wigner map with the vacuum Wigner function
/// `(1/π) e^{−Δx²−Δp²}`, which yields the Husimi function when the grid
/// covers the support of `W`.
pub fn smooth_with_vacuum(w: &PhaseSpaceMap) -> PhaseSpaceMap {
    let g = w.grid;
    let xs = g.xs();
    let ps = g.ps();
    let weights = |n: usize, h: f64| -> Vec<f64> {
        (0..n).map(|i| if i == 0 || i + 1 == n { 0.5 * h } else { h }).collect()
    };
    let wx = weights(g.nx, g.dx());
    let wp = weights(g.np, g.dp());
    // smooth along p
    let mut tmp = vec![0.0; g.nx * g.np];
    for ix in 0..g.nx {
        for (jp, &p) in ps.iter().enumerate() {
            tmp[ix * g.np + jp] = (0..g.np)
                .map(|ip| wp[ip] * (-(p - ps[ip]).powi(2)).exp() * w.get(ix, ip))
                .sum();
        }
    }
    // then along x
    let mut out = vec![0.0; g.nx * g.np];
    for (jx, &x) in xs.iter().enumerate() {
        for ip in 0..g.np {
            out[jx * g.np + ip] = (0..g.nx)
                .map(|ix| wx[ix] * (-(x - xs[ix]).powi(2)).exp() * tmp[ix * g.np + ip])
                .sum::<f64>()
                / std::f64::consts::PI;
        }
    }
    PhaseSpaceMap { grid: g, values: out }
}

/// Rotates a phase-space point by `angle` (counter-clockwise).
pub fn rotate_point(x: f64, p: f64, angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (c * x - s * p, s * x + c * p)
}
