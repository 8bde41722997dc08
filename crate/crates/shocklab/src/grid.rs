//! Discretization of the truncated slab [−L, L] × Tⁿ⁻¹.
//!
//! The ξ direction carries `n_xi` nodes including the endpoints ±L, which hold
//! Dirichlet far-field values; each of the n−1 torus directions carries `n_t`
//! nodes on the unit-period torus (the Poincaré constant used downstream
//! depends on the period being exactly 1, so it is not configurable).
//! Quadrature is trapezoid in ξ and exact-uniform in the torus directions.
//! Storage is a flat row-major array with ξ fastest, matching the snapshot
//! format on disk.
//!
//! The flux divergence uses a conservative local Lax-Friedrichs numerical flux
//! with minmod-limited linear reconstruction, so that smooth fields see
//! second-order accuracy while transients stay bounded; the interface speed is
//! the larger |f′| of the two neighboring nodes.

use crate::error::{Error, Result};
use crate::flux::{FluxSpec, TransverseFlux};
use rayon::prelude::*;
use serde::Serialize;

/// Dirichlet far-field states used as ghost values at the ξ ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarField {
    pub left: f64,
    pub right: f64,
}

/// Truncated-slab grid metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    l: f64,
    n_xi: usize,
    n_dims: usize,
    n_t: usize,
}

impl Grid {
    pub fn new(l: f64, n_xi: usize, n_dims: usize, n_t: usize) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid half-width L must be positive, got {l}"
            )));
        }
        if n_xi < 8 {
            return Err(Error::InvalidParameter(format!(
                "n_xi must be at least 8, got {n_xi}"
            )));
        }
        if n_dims < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_dims must be at least 2, got {n_dims}"
            )));
        }
        if n_t < 4 {
            return Err(Error::InvalidParameter(format!(
                "n_t must be at least 4, got {n_t}"
            )));
        }
        if n_dims > 6 {
            return Err(Error::InvalidParameter(format!(
                "n_dims capped at 6, got {n_dims}"
            )));
        }
        let rows = (n_t as u128).checked_pow(n_dims as u32 - 1);
        let nodes = rows.and_then(|r| r.checked_mul(n_xi as u128));
        match nodes {
            Some(n) if n <= 200_000_000 => Ok(Grid {
                l,
                n_xi,
                n_dims,
                n_t,
            }),
            _ => Err(Error::InvalidParameter("grid too large".into())),
        }
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn n_xi(&self) -> usize {
        self.n_xi
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn h_xi(&self) -> f64 {
        2.0 * self.l / (self.n_xi - 1) as f64
    }

    pub fn h_t(&self) -> f64 {
        1.0 / self.n_t as f64
    }

    /// Number of torus rows, n_t^(n_dims - 1).
    pub fn n_rows(&self) -> usize {
        self.n_t.pow(self.n_dims as u32 - 1)
    }

    pub fn node_count(&self) -> usize {
        self.n_rows() * self.n_xi
    }

    pub fn xi(&self, i: usize) -> f64 {
        -self.l + self.h_xi() * i as f64
    }

    /// Torus coordinates of a flat row index, one entry per transverse dim.
    pub fn torus_coords(&self, mut row: usize) -> Vec<f64> {
        let mut coords = Vec::with_capacity(self.n_dims - 1);
        for _ in 0..self.n_dims - 1 {
            coords.push((row % self.n_t) as f64 * self.h_t());
            row /= self.n_t;
        }
        coords
    }

    /// Row stride of transverse dim `d` in row-index units.
    fn row_stride(&self, d: usize) -> usize {
        self.n_t.pow(d as u32)
    }

    /// Row index shifted by `delta` nodes (mod n_t) in transverse dim `d`.
    #[inline]
    fn torus_neighbor(&self, row: usize, d: usize, delta: usize) -> usize {
        let stride = self.row_stride(d);
        let j = (row / stride) % self.n_t;
        row - j * stride + ((j + delta) % self.n_t) * stride
    }

    fn summary(&self) -> String {
        format!(
            "L={}, n_xi={}, n_dims={}, n_t={}",
            self.l, self.n_xi, self.n_dims, self.n_t
        )
    }
}

/// A scalar field sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Field {
        Field {
            grid: grid.clone(),
            data: vec![0.0; grid.node_count()],
        }
    }

    /// Samples `f(ξ, x')` at every node.
    pub fn from_fn<F: Fn(f64, &[f64]) -> f64>(grid: &Grid, f: F) -> Field {
        let mut data = vec![0.0; grid.node_count()];
        let n_xi = grid.n_xi;
        for row in 0..grid.n_rows() {
            let coords = grid.torus_coords(row);
            let base = row * n_xi;
            for i in 0..n_xi {
                data[base + i] = f(grid.xi(i), &coords);
            }
        }
        Field {
            grid: grid.clone(),
            data,
        }
    }

    /// Wraps raw values; rejects NaN/Inf and wrong lengths.
    pub fn from_values(grid: &Grid, data: Vec<f64>) -> Result<Field> {
        if data.len() != grid.node_count() {
            return Err(Error::GridMismatch {
                expected: format!("{} values ({})", grid.node_count(), grid.summary()),
                found: format!("{} values", data.len()),
            });
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("field value at flat index {bad}")));
        }
        Ok(Field {
            grid: grid.clone(),
            data,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn at(&self, row: usize, i: usize) -> f64 {
        self.data[row * self.grid.n_xi + i]
    }

    /// Cyclic shift by `offset` nodes in transverse dim `d`.
    pub fn shift_torus(&self, d: usize, offset: usize) -> Field {
        let g = &self.grid;
        let mut out = vec![0.0; self.data.len()];
        for row in 0..g.n_rows() {
            let src_row = g.torus_neighbor(row, d, offset % g.n_t);
            let (a, b) = (row * g.n_xi, src_row * g.n_xi);
            out[a..a + g.n_xi].copy_from_slice(&self.data[b..b + g.n_xi]);
        }
        Field {
            grid: g.clone(),
            data: out,
        }
    }

    pub fn checked_pair<'a>(&'a self, other: &'a Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                expected: self.grid.summary(),
                found: other.grid.summary(),
            });
        }
        Ok(())
    }
}

/// Trapezoid-in-ξ × exact-uniform-in-torus quadrature. The reduction order is
/// fixed (ξ within row, then rows in order) so results are bit-reproducible.
pub fn integrate(f: &Field) -> f64 {
    reduce(f, |u, _| u)
}

/// Quadrature of `map(f, ξ-index)` with the same deterministic order.
fn reduce<F: Fn(f64, usize) -> f64>(f: &Field, map: F) -> f64 {
    let g = &f.grid;
    let n_xi = g.n_xi;
    let mut total = 0.0;
    for row in 0..g.n_rows() {
        let vals = &f.data[row * n_xi..(row + 1) * n_xi];
        let mut acc = 0.5 * (map(vals[0], 0) + map(vals[n_xi - 1], n_xi - 1));
        for (i, &v) in vals.iter().enumerate().take(n_xi - 1).skip(1) {
            acc += map(v, i);
        }
        total += acc;
    }
    // 2L/((n_xi-1) · n_rows) is the exact node volume; dividing by the integer
    // product keeps ∫1 = 2L exact.
    total * 2.0 * g.l / ((g.n_xi - 1) as f64 * g.n_rows() as f64)
}

pub fn l1_norm(f: &Field) -> f64 {
    reduce(f, |u, _| u.abs())
}

pub fn l2_norm_sq(f: &Field) -> f64 {
    reduce(f, |u, _| u * u)
}

pub fn l2_norm(f: &Field) -> f64 {
    l2_norm_sq(f).sqrt()
}

pub fn linf_norm(f: &Field) -> f64 {
    f.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
}

/// Perturbation mass within 10% of the slab width of each ξ boundary.
pub fn tail_mass(f: &Field) -> f64 {
    let g = &f.grid;
    let band = 0.2 * g.l;
    reduce(f, |u, i| {
        let xi = g.xi(i);
        if xi <= -g.l + band || xi >= g.l - band {
            u.abs()
        } else {
            0.0
        }
    })
}

/// ∫ |∇f|² with centered differences in the interior, one-sided at the ξ
/// boundaries, periodic wrap in the torus directions.
pub fn gradient_sq_integral(f: &Field) -> f64 {
    let g = &f.grid;
    let n_xi = g.n_xi;
    let inv_2hx = 0.5 / g.h_xi();
    let inv_hx = 1.0 / g.h_xi();
    let inv_2ht = 0.5 / g.h_t();
    let n_rows = g.n_rows();
    let mut total = 0.0;
    for row in 0..n_rows {
        let base = row * n_xi;
        let vals = &f.data[base..base + n_xi];
        let mut acc = 0.0;
        for i in 0..n_xi {
            let dxi = if i == 0 {
                (vals[1] - vals[0]) * inv_hx
            } else if i == n_xi - 1 {
                (vals[n_xi - 1] - vals[n_xi - 2]) * inv_hx
            } else {
                (vals[i + 1] - vals[i - 1]) * inv_2hx
            };
            let mut sq = dxi * dxi;
            for d in 0..g.n_dims - 1 {
                let jp = g.torus_neighbor(row, d, 1);
                let jm = g.torus_neighbor(row, d, g.n_t - 1);
                let dt = (f.data[jp * n_xi + i] - f.data[jm * n_xi + i]) * inv_2ht;
                sq += dt * dt;
            }
            let w = if i == 0 || i == n_xi - 1 { 0.5 } else { 1.0 };
            acc += w * sq;
        }
        total += acc;
    }
    total * 2.0 * g.l / ((g.n_xi - 1) as f64 * n_rows as f64)
}

/// Standard second-order centered Laplacian; ξ-end nodes use the far-field
/// ghost values.
pub fn laplacian(f: &Field, far: FarField) -> Field {
    let g = f.grid.clone();
    let mut out = Field::zeros(&g);
    let n_xi = g.n_xi;
    let inv_hx2 = 1.0 / (g.h_xi() * g.h_xi());
    let inv_ht2 = 1.0 / (g.h_t() * g.h_t());
    for row in 0..g.n_rows() {
        let base = row * n_xi;
        for i in 0..n_xi {
            let c = f.data[base + i];
            let lft = if i == 0 {
                far.left
            } else {
                f.data[base + i - 1]
            };
            let rgt = if i == n_xi - 1 {
                far.right
            } else {
                f.data[base + i + 1]
            };
            let mut lap = (lft - 2.0 * c + rgt) * inv_hx2;
            for d in 0..g.n_dims - 1 {
                let jp = g.torus_neighbor(row, d, 1);
                let jm = g.torus_neighbor(row, d, g.n_t - 1);
                lap += (f.data[jp * n_xi + i] - 2.0 * c + f.data[jm * n_xi + i]) * inv_ht2;
            }
            out.data[base + i] = lap;
        }
    }
    out
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Local Lax-Friedrichs interface flux on reconstructed states.
#[inline]
fn llf(f_l: f64, f_r: f64, u_l: f64, u_r: f64, speed: f64) -> f64 {
    0.5 * (f_l + f_r) - 0.5 * speed * (u_r - u_l)
}

/// div F(f) in the static frame; see [`divergence_flux_moving`].
pub fn divergence_flux(flux: &FluxSpec, f: &Field, far: FarField) -> Field {
    divergence_flux_moving(flux, 0.0, f, far)
}

/// Conservative divergence of the moving-frame flux
/// (f1(u) − σu, f2(u), ..., fn(u)) with minmod-MUSCL local Lax-Friedrichs
/// fluxes, Dirichlet ghosts in ξ and periodic wrap in the torus directions.
pub fn divergence_flux_moving(flux: &FluxSpec, sigma: f64, f: &Field, far: FarField) -> Field {
    let g = f.grid.clone();
    let mut out = Field::zeros(&g);
    let n_xi = g.n_xi;
    let inv_hx = 1.0 / g.h_xi();
    let fx = |u: f64| flux.f1(u) - sigma * u;
    let dfx = |u: f64| flux.df1(u) - sigma;

    // ξ sweep, one row at a time.
    let mut fhat = vec![0.0; n_xi + 1];
    for row in 0..g.n_rows() {
        let base = row * n_xi;
        let vals = &f.data[base..base + n_xi];
        let at = |i: isize| -> f64 {
            if i < 0 {
                far.left
            } else if i as usize >= n_xi {
                far.right
            } else {
                vals[i as usize]
            }
        };
        for (k, slot) in fhat.iter_mut().enumerate() {
            // Interface k sits between nodes k-1 and k.
            let (il, ir) = (k as isize - 1, k as isize);
            let (um, u0, u1, u2) = (at(il - 1), at(il), at(ir), at(ir + 1));
            let sl = minmod(u0 - um, u1 - u0);
            let sr = minmod(u1 - u0, u2 - u1);
            let ul = u0 + 0.5 * sl;
            let ur = u1 - 0.5 * sr;
            let speed = dfx(u0).abs().max(dfx(u1).abs());
            *slot = llf(fx(ul), fx(ur), ul, ur, speed);
        }
        for i in 0..n_xi {
            out.data[base + i] = (fhat[i + 1] - fhat[i]) * inv_hx;
        }
    }

    // Torus sweeps, one transverse dim at a time via an interface-flux array.
    let mut iface = vec![0.0; g.node_count()];
    for d in 0..g.n_dims - 1 {
        let inv_ht = 1.0 / g.h_t();
        let ftd = |u: f64| flux.ft(d, u);
        let dftd = |u: f64| flux.dft(d, u);
        let neighbor = |row: usize, step: usize| g.torus_neighbor(row, d, step);
        for row in 0..g.n_rows() {
            // Interface between row and row+1 (wrapped) in dim d.
            let jm = neighbor(row, g.n_t - 1);
            let jp = neighbor(row, 1);
            let jpp = neighbor(row, 2);
            let (bm, b0, bp, bpp) = (jm * n_xi, row * n_xi, jp * n_xi, jpp * n_xi);
            for i in 0..n_xi {
                let (um, u0, u1, u2) = (
                    f.data[bm + i],
                    f.data[b0 + i],
                    f.data[bp + i],
                    f.data[bpp + i],
                );
                let sl = minmod(u0 - um, u1 - u0);
                let sr = minmod(u1 - u0, u2 - u1);
                let ul = u0 + 0.5 * sl;
                let ur = u1 - 0.5 * sr;
                let speed = dftd(u0).abs().max(dftd(u1).abs());
                iface[b0 + i] = llf(ftd(ul), ftd(ur), ul, ur, speed);
            }
        }
        for row in 0..g.n_rows() {
            let jm = neighbor(row, g.n_t - 1);
            let (b0, bm) = (row * n_xi, jm * n_xi);
            for i in 0..n_xi {
                out.data[b0 + i] += (iface[b0 + i] - iface[bm + i]) * inv_ht;
            }
        }
    }
    out
}

/// Scratch for the fused stencil kernel.
pub struct StencilWorkspace {
    iface: Vec<f64>,
}

impl StencilWorkspace {
    pub fn new(grid: &Grid) -> StencilWorkspace {
        StencilWorkspace {
            iface: vec![0.0; grid.node_count()],
        }
    }
}

/// Fused right-hand side Δu − div F̃(u) of the moving-frame equation, with
/// ξ-boundary nodes clamped (RHS = 0 there). `out` must share the grid.
/// Allocates its own scratch; the stepper reuses one via
/// [`moving_frame_rhs_ws`].
pub fn moving_frame_rhs(flux: &FluxSpec, sigma: f64, f: &Field, far: FarField, out: &mut Field) {
    let mut ws = StencilWorkspace::new(f.grid());
    moving_frame_rhs_ws(flux, sigma, f, far, &mut ws, out);
}

pub fn moving_frame_rhs_ws(
    flux: &FluxSpec,
    sigma: f64,
    f: &Field,
    far: FarField,
    ws: &mut StencilWorkspace,
    out: &mut Field,
) {
    stage_update_ws(flux, sigma, f, f, 0.0, 0.0, 1.0, far, ws, out);
}

/// Fused Runge-Kutta stage: out = c_base·base + c_v·v + c_rhs·[Δv − div F̃(v)]
/// in one sweep per direction. Row blocks are processed in parallel; every
/// node's value depends only on its own stencil, so the result is
/// bit-identical for any thread count. The flux closures are monomorphized
/// per g family to keep the inner loops branch-free. ξ-boundary nodes receive
/// no flux/diffusion contribution (the stepper re-clamps them each step).
#[allow(clippy::too_many_arguments)]
pub fn stage_update_ws(
    flux: &FluxSpec,
    sigma: f64,
    v: &Field,
    base: &Field,
    c_base: f64,
    c_v: f64,
    c_rhs: f64,
    far: FarField,
    ws: &mut StencilWorkspace,
    out: &mut Field,
) {
    debug_assert_eq!(v.grid, out.grid);
    debug_assert_eq!(base.grid, out.grid);
    let f = v;
    let g = f.grid.clone();
    let a = flux.a();
    let combine = Combine {
        base: &base.data,
        c_base,
        c_v,
        c_rhs,
    };

    match flux.g() {
        crate::flux::GFunction::Zero => xi_pass(
            &g,
            f,
            far,
            out,
            combine,
            move |u| (a * u - sigma) * u,
            move |u| 2.0 * a * u - sigma,
        ),
        crate::flux::GFunction::Sin { kappa } => {
            let k = *kappa;
            xi_pass(
                &g,
                f,
                far,
                out,
                combine,
                move |u| a * u * u + k * u.sin() - sigma * u,
                move |u| 2.0 * a * u + k * u.cos() - sigma,
            )
        }
        crate::flux::GFunction::Poly { coeffs } => xi_pass(
            &g,
            f,
            far,
            out,
            combine,
            |u| a * u * u + crate::flux::horner(coeffs, u) - sigma * u,
            |u| 2.0 * a * u + crate::flux::horner_deriv(coeffs, u, 1) - sigma,
        ),
    }

    for d in 0..g.n_dims - 1 {
        match flux.transverse_at(d) {
            TransverseFlux::Quadratic => torus_pass(
                &g,
                d,
                f,
                c_rhs,
                &mut ws.iface,
                out,
                move |u| a * u * u,
                move |u| 2.0 * a * u,
            ),
            TransverseFlux::Poly { coeffs } => torus_pass(
                &g,
                d,
                f,
                c_rhs,
                &mut ws.iface,
                out,
                |u| crate::flux::horner(coeffs, u),
                |u| crate::flux::horner_deriv(coeffs, u, 1),
            ),
        }
    }
}

#[derive(Clone, Copy)]
struct Combine<'a> {
    base: &'a [f64],
    c_base: f64,
    c_v: f64,
    c_rhs: f64,
}

/// ξ-direction MUSCL-LLF divergence plus ξ diffusion, one row per task,
/// fused with the stage combination.
fn xi_pass<FX, DFX>(
    g: &Grid,
    f: &Field,
    far: FarField,
    out: &mut Field,
    combine: Combine<'_>,
    fx: FX,
    dfx: DFX,
) where
    FX: Fn(f64) -> f64 + Sync,
    DFX: Fn(f64) -> f64 + Sync,
{
    let n_xi = g.n_xi;
    let inv_hx = 1.0 / g.h_xi();
    let inv_hx2 = inv_hx * inv_hx;
    let data = &f.data;
    let Combine {
        base,
        c_base,
        c_v,
        c_rhs,
    } = combine;
    out.data.par_chunks_mut(n_xi).enumerate().for_each_init(
        || (vec![0.0; n_xi], vec![0.0; n_xi], vec![0.0; n_xi - 1]),
        |(slope, speed, fh), (row, out_row)| {
            let vals = &data[row * n_xi..row * n_xi + n_xi];
            let brow = &base[row * n_xi..row * n_xi + n_xi];
            slope[0] = minmod(vals[0] - far.left, vals[1] - vals[0]);
            slope[n_xi - 1] = minmod(vals[n_xi - 1] - vals[n_xi - 2], far.right - vals[n_xi - 1]);
            for i in 1..n_xi - 1 {
                slope[i] = minmod(vals[i] - vals[i - 1], vals[i + 1] - vals[i]);
            }
            for i in 0..n_xi {
                speed[i] = dfx(vals[i]).abs();
            }
            for i in 0..n_xi - 1 {
                let ul = vals[i] + 0.5 * slope[i];
                let ur = vals[i + 1] - 0.5 * slope[i + 1];
                let sp = speed[i].max(speed[i + 1]);
                fh[i] = 0.5 * (fx(ul) + fx(ur)) - 0.5 * sp * (ur - ul);
            }
            out_row[0] = c_base * brow[0] + c_v * vals[0];
            out_row[n_xi - 1] = c_base * brow[n_xi - 1] + c_v * vals[n_xi - 1];
            for i in 1..n_xi - 1 {
                let lap = (vals[i - 1] - 2.0 * vals[i] + vals[i + 1]) * inv_hx2;
                let rhs = lap - (fh[i] - fh[i - 1]) * inv_hx;
                out_row[i] = c_base * brow[i] + c_v * vals[i] + c_rhs * rhs;
            }
        },
    );
}

/// One transverse dim: interface fluxes into the shared scratch (computed
/// once per interface), then divergence plus torus diffusion.
#[allow(clippy::too_many_arguments)]
fn torus_pass<FT, DFT>(
    g: &Grid,
    d: usize,
    f: &Field,
    c_rhs: f64,
    iface: &mut [f64],
    out: &mut Field,
    ft: FT,
    dft: DFT,
) where
    FT: Fn(f64) -> f64 + Sync,
    DFT: Fn(f64) -> f64 + Sync,
{
    let n_xi = g.n_xi;
    let n_t = g.n_t;
    let inv_ht = 1.0 / g.h_t();
    let inv_ht2 = inv_ht * inv_ht;
    let data = &f.data;
    iface
        .par_chunks_mut(n_xi)
        .enumerate()
        .for_each(|(row, irow)| {
            // Interface between `row` and its +1 neighbor in dim d.
            let jm = g.torus_neighbor(row, d, n_t - 1);
            let j1 = g.torus_neighbor(row, d, 1);
            let j2 = g.torus_neighbor(row, d, 2);
            let rm = &data[jm * n_xi..jm * n_xi + n_xi];
            let r0 = &data[row * n_xi..row * n_xi + n_xi];
            let rp = &data[j1 * n_xi..j1 * n_xi + n_xi];
            let rpp = &data[j2 * n_xi..j2 * n_xi + n_xi];
            for i in 1..n_xi - 1 {
                let (um, u0, u1, u2) = (rm[i], r0[i], rp[i], rpp[i]);
                let sl = minmod(u0 - um, u1 - u0);
                let sr = minmod(u1 - u0, u2 - u1);
                let ul = u0 + 0.5 * sl;
                let ur = u1 - 0.5 * sr;
                let sp = dft(u0).abs().max(dft(u1).abs());
                irow[i] = 0.5 * (ft(ul) + ft(ur)) - 0.5 * sp * (ur - ul);
            }
        });
    let iface_ref = &*iface;
    out.data
        .par_chunks_mut(n_xi)
        .enumerate()
        .for_each(|(row, out_row)| {
            let jm = g.torus_neighbor(row, d, n_t - 1);
            let j1 = g.torus_neighbor(row, d, 1);
            let rm = &data[jm * n_xi..jm * n_xi + n_xi];
            let r0 = &data[row * n_xi..row * n_xi + n_xi];
            let rp = &data[j1 * n_xi..j1 * n_xi + n_xi];
            let i0 = &iface_ref[row * n_xi..row * n_xi + n_xi];
            let im = &iface_ref[jm * n_xi..jm * n_xi + n_xi];
            for i in 1..n_xi - 1 {
                let lap = (rm[i] - 2.0 * r0[i] + rp[i]) * inv_ht2;
                out_row[i] += c_rhs * (lap - (i0[i] - im[i]) * inv_ht);
            }
        });
}
