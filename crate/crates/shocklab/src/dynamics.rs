//! Moving-frame evolution of the perturbed shock coupled with the shift ODE.
//!
//! In the frame ξ = x₁ − σt the equation reads
//!
//! u_t − σ u_ξ + div F(u) = Δu,
//!
//! so the unshifted profile is a steady state and the shock never advects out
//! of the window. The σ u_ξ term is folded into the conservative ξ-flux
//! f1(u) − σu. The shift solves
//!
//! Ẋ = −(2a + ‖g″‖∞)/(2 eps) ∫ (u − ũ(·−X)) ũ′(·−X),    X(0) = 0,
//!
//! and is advanced stage-consistently inside the same explicit SSP-RK3
//! integrator as u, which preserves the third-order coupling. The time step
//! obeys the diffusion and advection constraints with safety factors 0.9; the
//! ξ-boundary nodes stay clamped at u±.

use crate::error::{Error, Result};
use crate::flux::FluxSpec;
use crate::grid::{self, FarField, Field, Grid};
use crate::profile::ShockProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Solution snapshot: field, time, shift, and bookkeeping.
#[derive(Debug, Clone)]
pub struct SimState {
    pub u: Field,
    pub t: f64,
    /// Current shift X(t); X(0) = 0.
    pub shift: f64,
    /// Shift velocity at the current state.
    pub shift_vel: f64,
    pub step_index: u64,
}

/// Generators for initial data u0 with u0 − ũ ∈ L¹ ∩ L∞.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InitialData {
    /// ũ + A · plateau(ξ): a smooth-edged near-indicator bump, uniform in x′.
    /// The plateau has unit height, exact ξ-mass `width`, and support
    /// half-width `width/2 + edge/2`.
    Bump {
        amplitude: f64,
        center: f64,
        width: f64,
        edge: f64,
    },
    /// ũ(ξ − shift): the translated wave itself.
    ShiftedProfile { shift: f64 },
    /// Bump modulated by (1 + cos 2π x₂) in the first torus direction.
    ModulatedBump {
        amplitude: f64,
        center: f64,
        width: f64,
        edge: f64,
    },
    /// Seeded random smooth compactly supported field: plateau envelope times
    /// a random low-order trigonometric polynomial in the torus directions.
    RandomSmooth {
        amplitude: f64,
        center: f64,
        width: f64,
        edge: f64,
        modes: usize,
        seed: u64,
    },
}

/// Quintic smoothstep on [0, 1].
fn smoothstep(x: f64) -> f64 {
    let s = x.clamp(0.0, 1.0);
    s * s * s * (6.0 * s * s - 15.0 * s + 10.0)
}

/// Unit-height plateau with smooth edges; ∫ plateau dξ = width exactly.
fn plateau(xi: f64, center: f64, width: f64, edge: f64) -> f64 {
    let r = (xi - center).abs();
    smoothstep((0.5 * width + 0.5 * edge - r) / edge)
}

impl InitialData {
    /// Samples u0 on the grid. Compactly supported families must keep
    /// 5·sqrt(t_final) of clearance from the ξ boundaries so the domain
    /// truncation stays honest over the run.
    pub fn generate(&self, grid: &Grid, profile: &ShockProfile, t_final: f64) -> Result<Field> {
        let margin = 5.0 * t_final.max(0.0).sqrt();
        let check_support = |center: f64, width: f64, edge: f64| -> Result<()> {
            if !(width > 0.0) || !(edge > 0.0) || edge > width {
                return Err(Error::InvalidParameter(format!(
                    "bump needs 0 < edge <= width, got width {width}, edge {edge}"
                )));
            }
            let reach = center.abs() + 0.5 * width + 0.5 * edge;
            if reach + margin > grid.l() {
                return Err(Error::InvalidParameter(format!(
                    "initial-data support reaches {reach:.3} with diffusion margin {margin:.3}, \
                     exceeding L = {}",
                    grid.l()
                )));
            }
            Ok(())
        };

        let field = match self {
            InitialData::Bump {
                amplitude,
                center,
                width,
                edge,
            } => {
                check_support(*center, *width, *edge)?;
                Field::from_fn(grid, |xi, _| {
                    profile.value(xi) + amplitude * plateau(xi, *center, *width, *edge)
                })
            }
            InitialData::ShiftedProfile { shift } => {
                if !profile.is_closed_form() && shift.abs() >= profile.half_width() - grid.l() {
                    return Err(Error::InvalidParameter(format!(
                        "shifted-profile offset {shift} exceeds the tabulation margin"
                    )));
                }
                Field::from_fn(grid, |xi, _| profile.value(xi - shift))
            }
            InitialData::ModulatedBump {
                amplitude,
                center,
                width,
                edge,
            } => {
                check_support(*center, *width, *edge)?;
                Field::from_fn(grid, |xi, x| {
                    let m = 1.0 + (2.0 * std::f64::consts::PI * x[0]).cos();
                    profile.value(xi) + amplitude * m * plateau(xi, *center, *width, *edge)
                })
            }
            InitialData::RandomSmooth {
                amplitude,
                center,
                width,
                edge,
                modes,
                seed,
            } => {
                check_support(*center, *width, *edge)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let n_trans = grid.n_dims() - 1;
                let mut coeffs = Vec::new();
                let mut total = 0.0;
                for _ in 0..n_trans {
                    for _ in 0..*modes {
                        let a: f64 = rng.gen_range(-1.0..1.0);
                        let b: f64 = rng.gen_range(-1.0..1.0);
                        total += a.abs() + b.abs();
                        coeffs.push((a, b));
                    }
                }
                let scale = if total > 0.0 { 0.9 / total } else { 0.0 };
                let modes = *modes;
                Field::from_fn(grid, |xi, x| {
                    let mut m = 1.0;
                    for (d, &xd) in x.iter().enumerate() {
                        for k in 0..modes {
                            let (a, b) = coeffs[d * modes + k];
                            let phase = 2.0 * std::f64::consts::PI * (k + 1) as f64 * xd;
                            m += scale * (a * phase.cos() + b * phase.sin());
                        }
                    }
                    profile.value(xi) + amplitude * m * plateau(xi, *center, *width, *edge)
                })
            }
        };
        Ok(field)
    }
}

/// Time-step policy for the explicit integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DtPolicy {
    /// dt = 0.9 · min(diffusion bound, advection bound), computed from the
    /// grid and the initial data range (safe for all t by the max principle).
    Auto,
    Fixed(f64),
}

/// Shift ODE right-hand side for a given field and shift.
pub fn shift_rhs(flux: &FluxSpec, profile: &ShockProfile, u: &Field, x_shift: f64) -> f64 {
    let shock = profile.shock();
    let coeff = -(2.0 * flux.a() + flux.g2_bound()) / (2.0 * shock.eps);
    let g = u.grid();
    let n_xi = g.n_xi();
    // ũ(ξ−X) and ũ′(ξ−X) depend only on the ξ index.
    let mut pv = vec![0.0; n_xi];
    let mut pd = vec![0.0; n_xi];
    for i in 0..n_xi {
        let s = g.xi(i) - x_shift;
        pv[i] = profile.value(s);
        pd[i] = profile.derivative(s);
    }
    let vals = u.values();
    let mut total = 0.0;
    for row in 0..g.n_rows() {
        let base = row * n_xi;
        let mut acc = 0.5 * (vals[base] - pv[0]) * pd[0]
            + 0.5 * (vals[base + n_xi - 1] - pv[n_xi - 1]) * pd[n_xi - 1];
        for i in 1..n_xi - 1 {
            acc += (vals[base + i] - pv[i]) * pd[i];
        }
        total += acc;
    }
    let quad = total * 2.0 * g.l() / ((n_xi - 1) as f64 * g.n_rows() as f64);
    coeff * quad
}

/// Coupled (u, X) explicit SSP-RK3 stepper with preallocated scratch.
pub struct Simulation {
    flux: FluxSpec,
    profile: ShockProfile,
    far: FarField,
    dt: f64,
    state: SimState,
    linf_prev: f64,
    /// Per-step sup-norm growth tolerance; exceeding it aborts the run.
    pub linf_abort_tol: f64,
    u1: Field,
    u2: Field,
    u3: Field,
    stencil_ws: grid::StencilWorkspace,
    /// ξ-boundary values per torus row, re-clamped after every step.
    bc_left: Vec<f64>,
    bc_right: Vec<f64>,
}

impl Simulation {
    pub fn new(
        flux: &FluxSpec,
        profile: &ShockProfile,
        u0: Field,
        dt_policy: DtPolicy,
    ) -> Result<Self> {
        let shock = *profile.shock();
        let far = FarField {
            left: shock.u_minus,
            right: shock.u_plus,
        };
        let grid = u0.grid().clone();
        let dt = match dt_policy {
            DtPolicy::Fixed(dt) => {
                if !(dt > 0.0) || !dt.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "fixed dt must be positive, got {dt}"
                    )));
                }
                dt
            }
            DtPolicy::Auto => auto_dt(flux, shock.sigma, &grid, &u0),
        };
        let linf0 = grid::linf_norm(&u0);
        let shift_vel = shift_rhs(flux, profile, &u0, 0.0);
        let n_xi = grid.n_xi();
        let bc_left: Vec<f64> = (0..grid.n_rows())
            .map(|row| u0.values()[row * n_xi])
            .collect();
        let bc_right: Vec<f64> = (0..grid.n_rows())
            .map(|row| u0.values()[row * n_xi + n_xi - 1])
            .collect();
        Ok(Simulation {
            flux: flux.clone(),
            profile: profile.clone(),
            far,
            dt,
            linf_prev: linf0,
            linf_abort_tol: 1e-10 * linf0.max(1.0),
            u1: Field::zeros(&grid),
            u2: Field::zeros(&grid),
            u3: Field::zeros(&grid),
            stencil_ws: grid::StencilWorkspace::new(&grid),
            bc_left,
            bc_right,
            state: SimState {
                u: u0,
                t: 0.0,
                shift: 0.0,
                shift_vel,
                step_index: 0,
            },
        })
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn flux(&self) -> &FluxSpec {
        &self.flux
    }

    pub fn profile(&self) -> &ShockProfile {
        &self.profile
    }

    pub fn far(&self) -> FarField {
        self.far
    }

    /// Advances one step of size `dt` (capped externally for the final step).
    /// Each SSP stage is one fused sweep: combination coefficients ride along
    /// with the stencil so no separate axpy passes are needed.
    pub fn step_by(&mut self, dt: f64) -> Result<()> {
        let sigma = self.profile.shock().sigma;
        let x0 = self.state.shift;

        // Stage 1: u1 = u + dt f(u); the shift RHS at (u, X) was already
        // computed when the previous step finished.
        let xdot0 = self.state.shift_vel;
        grid::stage_update_ws(
            &self.flux,
            sigma,
            &self.state.u,
            &self.state.u,
            0.0,
            1.0,
            dt,
            self.far,
            &mut self.stencil_ws,
            &mut self.u1,
        );
        let x1 = x0 + dt * xdot0;

        // Stage 2: u2 = (3/4) u + (1/4) u1 + (1/4) dt f(u1).
        let xdot1 = shift_rhs(&self.flux, &self.profile, &self.u1, x1);
        grid::stage_update_ws(
            &self.flux,
            sigma,
            &self.u1,
            &self.state.u,
            0.75,
            0.25,
            0.25 * dt,
            self.far,
            &mut self.stencil_ws,
            &mut self.u2,
        );
        let x2 = 0.75 * x0 + 0.25 * (x1 + dt * xdot1);

        // Stage 3: u = (1/3) u + (2/3) u2 + (2/3) dt f(u2).
        let xdot2 = shift_rhs(&self.flux, &self.profile, &self.u2, x2);
        let third = 1.0 / 3.0;
        grid::stage_update_ws(
            &self.flux,
            sigma,
            &self.u2,
            &self.state.u,
            third,
            2.0 * third,
            2.0 * third * dt,
            self.far,
            &mut self.stencil_ws,
            &mut self.u3,
        );
        let x_new = third * x0 + 2.0 * third * (x2 + dt * xdot2);
        std::mem::swap(&mut self.state.u, &mut self.u3);

        // Dirichlet ends hold their initial far-field values exactly.
        let n_xi = self.state.u.grid().n_xi();
        let vals = self.state.u.values_mut();
        for (row, (&l, &r)) in self.bc_left.iter().zip(&self.bc_right).enumerate() {
            vals[row * n_xi] = l;
            vals[row * n_xi + n_xi - 1] = r;
        }

        self.state.t += dt;
        self.state.shift = x_new;
        self.state.step_index += 1;

        let linf = grid::linf_norm(&self.state.u);
        if linf > self.linf_prev + self.linf_abort_tol {
            return Err(Error::NumericalAbort {
                t: self.state.t,
                step: self.state.step_index,
                detail: format!(
                    "sup norm grew {:.3e} past the CFL contract ({:.16} -> {:.16})",
                    linf - self.linf_prev,
                    self.linf_prev,
                    linf
                ),
            });
        }
        self.linf_prev = linf;

        if !self.profile.is_closed_form()
            && x_new.abs() + self.state.u.grid().l() >= self.profile.half_width()
        {
            return Err(Error::ProfileWidth {
                half_width: self.profile.half_width(),
                detail: format!("shift X = {x_new} exceeds the tabulation margin"),
            });
        }

        self.state.shift_vel = shift_rhs(&self.flux, &self.profile, &self.state.u, x_new);
        Ok(())
    }

    pub fn step(&mut self) -> Result<()> {
        self.step_by(self.dt)
    }
}

/// dt bound from the sharp forward-Euler diffusion constraint on the
/// anisotropic 2n+1-point Laplacian and the per-direction advection speeds,
/// both with safety factor 0.9.
fn auto_dt(flux: &FluxSpec, sigma: f64, grid: &Grid, u0: &Field) -> f64 {
    let c1 = 0.9;
    let c2 = 0.9;
    let hx = grid.h_xi();
    let ht = grid.h_t();
    let n_trans = (grid.n_dims() - 1) as f64;
    let dt_diff = c1 / (2.0 * (1.0 / (hx * hx) + n_trans / (ht * ht)));

    // Speed bounds over the invariant range of the data (max principle).
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in u0.values() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let pad = 1e-6 * (hi - lo).max(1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    let mut max_xi = 0.0f64;
    let mut max_t = vec![0.0f64; grid.n_dims() - 1];
    for k in 0..=1000 {
        let u = lo + (hi - lo) * k as f64 / 1000.0;
        max_xi = max_xi.max((flux.df1(u) - sigma).abs());
        for (d, m) in max_t.iter_mut().enumerate() {
            *m = m.max(flux.dft(d, u).abs());
        }
    }
    let mut dt_adv = if max_xi > 0.0 {
        c2 * hx / max_xi
    } else {
        f64::INFINITY
    };
    for &m in &max_t {
        if m > 0.0 {
            dt_adv = dt_adv.min(c2 * ht / m);
        }
    }
    dt_diff.min(dt_adv)
}

/// Steps from the current time to `t_final`, invoking `on_sample` at t = 0,
/// every `diag_every` steps, and at the final step. The last step is shortened
/// to land on `t_final` exactly.
pub fn run_to<F>(
    sim: &mut Simulation,
    t_final: f64,
    diag_every: u64,
    mut on_sample: F,
) -> Result<()>
where
    F: FnMut(&SimState) -> Result<()>,
{
    let every = diag_every.max(1);
    if sim.state.step_index == 0 {
        on_sample(sim.state())?;
    }
    while sim.state.t < t_final {
        let dt = sim.dt.min(t_final - sim.state.t);
        if dt < 1e-14 * t_final.max(1.0) {
            break;
        }
        sim.step_by(dt)?;
        let done = sim.state.t >= t_final - 1e-14 * t_final.max(1.0);
        if sim.state.step_index.is_multiple_of(every) || done {
            on_sample(sim.state())?;
        }
        if done {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::ShockData;
    use crate::profile::{solve_profile, ProfileOptions};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn setup(l: f64, n_xi: usize, n_t: usize) -> (FluxSpec, ShockProfile, Grid) {
        let flux = FluxSpec::burgers(0.5).unwrap();
        let shock = ShockData::new(&flux, 1.0, 0.0).unwrap();
        let profile = solve_profile(&flux, &shock, &ProfileOptions::default()).unwrap();
        let grid = Grid::new(l, n_xi, 2, n_t).unwrap();
        (flux, profile, grid)
    }

    #[test]
    fn shift_rhs_vanishes_on_profile_and_matched_shift() {
        let (flux, profile, grid) = setup(40.0, 801, 8);
        let exact = Field::from_fn(&grid, |xi, _| profile.value(xi));
        assert_abs_diff_eq!(
            shift_rhs(&flux, &profile, &exact, 0.0),
            0.0,
            epsilon = 1e-13
        );
        let shifted = Field::from_fn(&grid, |xi, _| profile.value(xi - 1.5));
        assert_abs_diff_eq!(
            shift_rhs(&flux, &profile, &shifted, 1.5),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn shift_rhs_matches_sech4_quadrature_for_derivative_perturbation() {
        // u = ũ + c ũ′ gives Ẋ = −(1/2) c ∫|ũ′|² = −c/24 at a = 1/2, eps = 1.
        let (flux, profile, grid) = setup(40.0, 1601, 8);
        let c = 0.01;
        let u = Field::from_fn(&grid, |xi, _| {
            profile.value(xi) + c * profile.derivative(xi)
        });
        let got = shift_rhs(&flux, &profile, &u, 0.0);
        assert_relative_eq!(got, -c / 24.0, max_relative = 1e-8);
    }

    #[test]
    fn steady_state_stays_steady() {
        // Small fixed dt isolates the spatial truncation drift, which grows
        // linearly at rate ||rhs(tabulated wave)|| until it saturates at the
        // discrete steady state O(h²) away.
        let (flux, profile, grid) = setup(20.0, 401, 8);
        let u0 = InitialData::ShiftedProfile { shift: 0.0 }
            .generate(&grid, &profile, 0.0)
            .unwrap();
        let mut sim = Simulation::new(&flux, &profile, u0, DtPolicy::Fixed(1e-4)).unwrap();
        for _ in 0..200 {
            sim.step().unwrap();
        }
        let diff = Field::from_values(
            &grid,
            sim.state()
                .u
                .values()
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let i = k % grid.n_xi();
                    v - profile.value(grid.xi(i))
                })
                .collect(),
        )
        .unwrap();
        assert!(
            grid::l2_norm(&diff) < 1e-6,
            "steady-state drift {}",
            grid::l2_norm(&diff)
        );
        assert!(sim.state().shift.abs() < 1e-10);
    }

    #[test]
    fn shifted_profile_relaxes_toward_its_shift() {
        let (flux, profile, grid) = setup(30.0, 601, 8);
        let s = 0.5;
        let u0 = InitialData::ShiftedProfile { shift: s }
            .generate(&grid, &profile, 0.0)
            .unwrap();
        let mut sim = Simulation::new(&flux, &profile, u0, DtPolicy::Auto).unwrap();
        let mut prev = 0.0;
        for _ in 0..400 {
            sim.step().unwrap();
            let x = sim.state().shift;
            assert!(x >= prev - 1e-12, "shift not monotone: {prev} -> {x}");
            prev = x;
        }
        assert!(
            prev > 0.0 && prev < s + 1e-6,
            "X should move toward s, got {prev}"
        );
        assert!(sim.state().shift_vel > 0.0);
    }

    #[test]
    fn bump_run_conserves_mass_and_max_principle() {
        let (flux, profile, grid) = setup(20.0, 401, 8);
        let data = InitialData::Bump {
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
            edge: 0.25,
        };
        let u0 = data.generate(&grid, &profile, 4.0).unwrap();
        let prof_field = Field::from_fn(&grid, |xi, _| profile.value(xi));
        let pert0 = Field::from_values(
            &grid,
            u0.values()
                .iter()
                .zip(prof_field.values())
                .map(|(a, b)| a - b)
                .collect(),
        )
        .unwrap();
        let mass0 = grid::integrate(&pert0);
        let linf0 = grid::linf_norm(&u0);

        let mut sim = Simulation::new(&flux, &profile, u0, DtPolicy::Auto).unwrap();
        run_to(&mut sim, 4.0, 50, |_| Ok(())).unwrap();

        let pert = Field::from_values(
            &grid,
            sim.state()
                .u
                .values()
                .iter()
                .zip(prof_field.values())
                .map(|(a, b)| a - b)
                .collect(),
        )
        .unwrap();
        let mass = grid::integrate(&pert);
        assert_abs_diff_eq!(mass, mass0, epsilon = 1e-9);
        assert!(grid::linf_norm(&sim.state().u) <= linf0 + 1e-10);
        assert!(sim.state().t >= 4.0 - 1e-12);
    }

    #[test]
    fn dt_halving_is_at_least_second_order() {
        let (flux, profile, grid) = setup(15.0, 151, 8);
        let data = InitialData::Bump {
            amplitude: 0.5,
            center: 0.0,
            width: 1.0,
            edge: 0.25,
        };
        let final_state = |dt: f64| -> Vec<f64> {
            let u0 = data.generate(&grid, &profile, 1.0).unwrap();
            let mut sim = Simulation::new(&flux, &profile, u0, DtPolicy::Fixed(dt)).unwrap();
            run_to(&mut sim, 1.0, u64::MAX, |_| Ok(())).unwrap();
            sim.state().u.values().to_vec()
        };
        let u0 = data.generate(&grid, &profile, 1.0).unwrap();
        let base = Simulation::new(&flux, &profile, u0, DtPolicy::Auto)
            .unwrap()
            .dt();
        let (a, b, c) = (
            final_state(base),
            final_state(base / 2.0),
            final_state(base / 4.0),
        );
        let d1: f64 = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        let d2: f64 = b
            .iter()
            .zip(&c)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        let rate = d1 / d2;
        assert!(
            rate > 3.0,
            "halving dt should shrink the update error ~4x+, got {rate}"
        );
    }

    #[test]
    fn oversized_fixed_dt_aborts() {
        let (flux, profile, grid) = setup(15.0, 301, 8);
        let data = InitialData::Bump {
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
            edge: 0.25,
        };
        let u0 = data.generate(&grid, &profile, 1.0).unwrap();
        let mut sim = Simulation::new(&flux, &profile, u0, DtPolicy::Fixed(0.05)).unwrap();
        let mut failed = false;
        for _ in 0..50 {
            if let Err(Error::NumericalAbort { .. }) = sim.step() {
                failed = true;
                break;
            }
        }
        assert!(failed, "a far-too-large dt must trip the sup-norm abort");
    }

    #[test]
    fn initial_data_margin_is_enforced() {
        let (_, profile, grid) = setup(20.0, 201, 8);
        let data = InitialData::Bump {
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
            edge: 0.25,
        };
        // 5 sqrt(100) = 50 > 20.
        assert!(matches!(
            data.generate(&grid, &profile, 100.0),
            Err(Error::InvalidParameter(_))
        ));
        let off_center = InitialData::Bump {
            amplitude: 1.0,
            center: 19.0,
            width: 1.0,
            edge: 0.25,
        };
        assert!(matches!(
            off_center.generate(&grid, &profile, 1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn bump_mass_is_exact() {
        let (_, profile, grid) = setup(20.0, 1601, 8);
        let data = InitialData::Bump {
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
            edge: 0.25,
        };
        let u0 = data.generate(&grid, &profile, 1.0).unwrap();
        let pert = Field::from_values(
            &grid,
            u0.values()
                .iter()
                .enumerate()
                .map(|(k, &v)| v - profile.value(grid.xi(k % grid.n_xi())))
                .collect(),
        )
        .unwrap();
        // ∫ plateau = width; trapezoid converges to it at this resolution.
        assert_relative_eq!(grid::integrate(&pert), 1.0, max_relative = 1e-6);
    }

    #[test]
    fn random_smooth_is_reproducible_and_bounded() {
        let (_, profile, grid) = setup(20.0, 201, 8);
        let data = InitialData::RandomSmooth {
            amplitude: 0.5,
            center: 0.0,
            width: 2.0,
            edge: 0.5,
            modes: 3,
            seed: 7,
        };
        let a = data.generate(&grid, &profile, 1.0).unwrap();
        let b = data.generate(&grid, &profile, 1.0).unwrap();
        assert_eq!(a.values(), b.values());
        let maxdev = a.values().iter().enumerate().fold(0.0f64, |m, (k, &v)| {
            m.max((v - profile.value(grid.xi(k % grid.n_xi()))).abs())
        });
        assert!(maxdev > 0.0 && maxdev <= 0.5 * 1.9 + 1e-12);
    }
}
