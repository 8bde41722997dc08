//! Viscous shock profile construction.
//!
//! The traveling wave ũ(ξ) connecting u- to u+ satisfies the first-order ODE
//!
//! ũ′ = f1(ũ) − f1(u-) − σ (ũ − u-),    ũ(±∞) = u±,
//!
//! which is negative on (u+, u-) for strictly convex f1. The profile is unique
//! up to translation; runs are made reproducible by normalizing ũ(0) to the
//! midpoint (u- + u+)/2.
//!
//! For g ≡ 0 the profile is the closed form
//! ũ(ξ) = (u- + u+)/2 − (eps/2) tanh(a eps ξ / 2); otherwise the ODE is
//! integrated outward from ξ = 0 with an adaptive embedded Runge-Kutta pair,
//! stopping once |ũ − u±| < tol·eps and clamping the remaining tail. Values
//! and derivatives are tabulated on a uniform grid and interpolated with cubic
//! Hermite polynomials; the derivative is stored from the ODE right-hand side,
//! never re-differenced.

use crate::error::{Error, Result};
use crate::flux::{check_admissibility, FluxSpec, ShockData};
use serde::Serialize;

/// Construction options for [`solve_profile`].
#[derive(Debug, Clone)]
pub struct ProfileOptions {
    /// Pointwise ODE-residual tolerance; also sets the tail clamp |ũ − u±| < tol·eps.
    pub tol: f64,
    /// Half-width of the tabulation; `None` picks the width where the g = 0
    /// closed form reaches `tol`, doubled when g ≠ 0.
    pub half_width: Option<f64>,
    /// Uniform tabulation spacing.
    pub tab_spacing: f64,
    /// Integrate numerically even when the closed form applies (self-checks).
    pub force_numeric: bool,
    /// Normalization point: ũ(normalize_at) = (u- + u+)/2.
    pub normalize_at: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            tol: 1e-10,
            half_width: None,
            tab_spacing: 1.0 / 64.0,
            force_numeric: false,
            normalize_at: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
enum Form {
    /// ũ(ξ) = mid − (eps/2) tanh(a eps (ξ − center)/2).
    ClosedForm {
        a: f64,
        center: f64,
    },
    Tabulated(Table),
}

#[derive(Debug, Clone)]
struct Table {
    x0: f64,
    h: f64,
    u: Vec<f64>,
    /// ũ′ at the nodes, from the ODE right-hand side.
    du: Vec<f64>,
    /// ũ″ at the nodes, from ũ″ = (f1′(ũ) − σ) ũ′.
    d2u: Vec<f64>,
}

/// The constructed wave: endpoint data plus evaluators for ũ and ũ′.
#[derive(Debug, Clone)]
pub struct ShockProfile {
    shock: ShockData,
    flux: FluxSpec,
    half_width: f64,
    tab_spacing: f64,
    closed_form: bool,
    form: Form,
}

/// Constructs the profile; rejects shocks that fail the Lax condition.
pub fn solve_profile(
    flux: &FluxSpec,
    shock: &ShockData,
    opts: &ProfileOptions,
) -> Result<ShockProfile> {
    let report = check_admissibility(flux, shock);
    if !report.lax {
        return Err(Error::NotAdmissible(report));
    }
    if !(opts.tol > 0.0) || !(opts.tab_spacing > 0.0) {
        return Err(Error::InvalidParameter(
            "profile tol and tab_spacing must be positive".into(),
        ));
    }
    let half_width = opts
        .half_width
        .unwrap_or_else(|| default_half_width(flux, shock, opts.tol));
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bad profile half_width {half_width}"
        )));
    }

    let use_closed_form = flux.g().is_zero() && !opts.force_numeric;
    let form = if use_closed_form {
        Form::ClosedForm {
            a: flux.a(),
            center: opts.normalize_at,
        }
    } else {
        Form::Tabulated(tabulate(flux, shock, opts, half_width)?)
    };
    Ok(ShockProfile {
        shock: *shock,
        flux: flux.clone(),
        half_width,
        tab_spacing: opts.tab_spacing,
        closed_form: use_closed_form,
        form,
    })
}

/// Width where the g = 0 closed form reaches `tol`, doubled for g ≠ 0.
fn default_half_width(flux: &FluxSpec, shock: &ShockData, tol: f64) -> f64 {
    let eps = shock.eps;
    let base = (eps / tol).ln().max(1.0) / (flux.a() * eps);
    if flux.g().is_zero() {
        base
    } else {
        2.0 * base
    }
}

impl ShockProfile {
    pub fn shock(&self) -> &ShockData {
        &self.shock
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// True when the g = 0 closed form backs the evaluators.
    pub fn is_closed_form(&self) -> bool {
        self.closed_form
    }

    /// ũ(ξ); far-field values outside the tabulated width.
    pub fn value(&self, xi: f64) -> f64 {
        match &self.form {
            Form::ClosedForm { a, center } => {
                let s = 0.5 * a * self.shock.eps * (xi - center);
                self.shock.midpoint() - 0.5 * self.shock.eps * s.tanh()
            }
            Form::Tabulated(t) => t.eval_value(xi, &self.shock),
        }
    }

    /// ũ′(ξ); zero outside the tabulated width.
    pub fn derivative(&self, xi: f64) -> f64 {
        match &self.form {
            Form::ClosedForm { a, center } => {
                let s = 0.5 * a * self.shock.eps * (xi - center);
                let sech = 1.0 / s.cosh();
                -0.25 * a * self.shock.eps * self.shock.eps * sech * sech
            }
            Form::Tabulated(t) => t.eval_deriv(xi),
        }
    }

    /// ODE right-hand side f1(u) − f1(u-) − σ (u − u-), the exact ũ′ as a
    /// function of the profile value.
    pub fn ode_rhs(&self, u: f64) -> f64 {
        profile_rhs(&self.flux, &self.shock, u)
    }

    /// Largest |ũ′(ξ) − [f1(ũ) − f1(u-) − σ(ũ − u-)]| over tabulation nodes
    /// and interval midpoints.
    pub fn residual_max(&self) -> f64 {
        let (x0, h, n) = self.sample_layout();
        let mut worst = 0.0f64;
        for k in 0..n {
            let x = x0 + h * k as f64;
            for xx in [x, x + 0.5 * h] {
                if xx > x0 + h * (n - 1) as f64 {
                    continue;
                }
                let r = (self.derivative(xx) - self.ode_rhs(self.value(xx))).abs();
                worst = worst.max(r);
            }
        }
        worst
    }

    /// (x0, spacing, node count) of the tabulation sampling, also used by the
    /// closed form for quadratures and exports.
    pub fn tabulation_layout(&self) -> (f64, f64, usize) {
        self.sample_layout()
    }

    fn sample_layout(&self) -> (f64, f64, usize) {
        match &self.form {
            Form::ClosedForm { .. } => {
                let h = self.tab_spacing;
                let n = (2.0 * self.half_width / h).ceil() as usize + 1;
                (-self.half_width, h, n)
            }
            Form::Tabulated(t) => (t.x0, t.h, t.u.len()),
        }
    }

    /// (∫ |ũ′|² dξ)^{1/2} by trapezoid over the tabulation.
    pub fn l2_norm_of_derivative(&self) -> f64 {
        self.l2_norm_of_derivative_refined(1)
    }

    /// Same quadrature with `refine`-times finer sampling (self-check hook).
    pub fn l2_norm_of_derivative_refined(&self, refine: usize) -> f64 {
        let (x0, h, n) = self.sample_layout();
        let m = (n - 1) * refine.max(1);
        let hh = h / refine.max(1) as f64;
        let mut acc = 0.0;
        for k in 0..=m {
            let d = self.derivative(x0 + hh * k as f64);
            let w = if k == 0 || k == m { 0.5 } else { 1.0 };
            acc += w * d * d;
        }
        (acc * hh).sqrt()
    }

    /// The two positive constants behind the shift L∞ bound:
    /// beta1 = 2 ∫ ũ′(x) [ũ(x) − ũ(x−1)] dx,
    /// beta2 = 2 ∫ ũ′(x) [ũ(x+1) − ũ(x)] dx.
    /// Both reduce the inner dζ-integral of ũ′ exactly.
    pub fn beta_constants(&self) -> Result<BetaConstants> {
        let (x0, h, n) = self.sample_layout();
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for k in 0..n {
            let x = x0 + h * k as f64;
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            let d = self.derivative(x);
            b1 += w * d * (self.value(x) - self.value(x - 1.0));
            b2 += w * d * (self.value(x + 1.0) - self.value(x));
        }
        let beta1 = 2.0 * b1 * h;
        let beta2 = 2.0 * b2 * h;
        if !(beta1 > 0.0) || !(beta2 > 0.0) {
            return Err(Error::ProfileWidth {
                half_width: self.half_width,
                detail: format!("nonpositive beta constants ({beta1}, {beta2})"),
            });
        }
        Ok(BetaConstants { beta1, beta2 })
    }

    /// Writes `(ξ, ũ)` or `(ξ, ũ′)` rows as two-column CSV.
    pub fn export_csv<W: std::io::Write>(&self, out: &mut W, derivative: bool) -> Result<()> {
        let (x0, h, n) = self.sample_layout();
        writeln!(out, "xi,{}", if derivative { "du" } else { "u" })?;
        for k in 0..n {
            let x = x0 + h * k as f64;
            let v = if derivative {
                self.derivative(x)
            } else {
                self.value(x)
            };
            writeln!(out, "{x:.17e},{v:.17e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BetaConstants {
    pub beta1: f64,
    pub beta2: f64,
}

impl BetaConstants {
    pub fn beta(&self) -> f64 {
        self.beta1.min(self.beta2)
    }
}

fn profile_rhs(flux: &FluxSpec, shock: &ShockData, u: f64) -> f64 {
    flux.f1(u) - flux.f1(shock.u_minus) - shock.sigma * (u - shock.u_minus)
}

fn tabulate(
    flux: &FluxSpec,
    shock: &ShockData,
    opts: &ProfileOptions,
    half_width: f64,
) -> Result<Table> {
    // The first integral must be strictly negative between the endpoints,
    // otherwise no monotone connection exists on this range.
    let lo = shock.u_plus;
    let hi = shock.u_minus;
    for k in 1..512 {
        let u = lo + (hi - lo) * k as f64 / 512.0;
        if profile_rhs(flux, shock, u) >= 0.0 {
            return Err(Error::InvalidFlux(format!(
                "profile ODE loses monotonicity at u = {u}; flux too far from convex"
            )));
        }
    }

    let h = opts.tab_spacing;
    let n_right = ((half_width - opts.normalize_at) / h).ceil() as usize;
    let n_left = ((half_width + opts.normalize_at) / h).ceil() as usize;
    let clamp_tol = opts.tol * shock.eps.abs();
    let rhs = |u: f64| profile_rhs(flux, shock, u);

    // March outward from the normalization point in both directions.
    let right = march(
        &rhs,
        shock.midpoint(),
        h,
        n_right,
        shock.u_plus,
        clamp_tol,
        opts.tol,
    )?;
    let left = march(
        &|u| -rhs(u),
        shock.midpoint(),
        h,
        n_left,
        shock.u_minus,
        clamp_tol,
        opts.tol,
    )?;

    let n = n_left + n_right + 1;
    let mut u = vec![0.0; n];
    for (j, &v) in left.iter().enumerate() {
        u[n_left - j] = v;
    }
    for (j, &v) in right.iter().enumerate() {
        u[n_left + j] = v;
    }
    let du: Vec<f64> = u.iter().map(|&v| rhs(v)).collect();
    let d2u: Vec<f64> = u
        .iter()
        .zip(&du)
        .map(|(&v, &d)| (flux.df1(v) - shock.sigma) * d)
        .collect();
    Ok(Table {
        x0: opts.normalize_at - h * n_left as f64,
        h,
        u,
        du,
        d2u,
    })
}

/// Integrates du/dx = rhs(u) from `u0`, recording values at uniform nodes
/// spaced `h`; once within `clamp_tol` of `target` the remaining nodes are
/// clamped to it. Errors if the edge is reached without converging.
fn march(
    rhs: &dyn Fn(f64) -> f64,
    u0: f64,
    h: f64,
    nodes: usize,
    target: f64,
    clamp_tol: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(nodes + 1);
    out.push(u0);
    let mut u = u0;
    let mut clamped = false;
    for _ in 0..nodes {
        if clamped {
            out.push(target);
            continue;
        }
        u = rk45_interval(rhs, u, h, tol * 1e-2 * clamp_tol.max(1e-300))?;
        if (u - target).abs() < clamp_tol {
            clamped = true;
            u = target;
        }
        out.push(u);
    }
    if !clamped && (u - target).abs() >= clamp_tol * 10.0 {
        return Err(Error::ProfileWidth {
            half_width: h * nodes as f64,
            detail: format!(
                "|u - target| = {:.3e} at the tabulation edge",
                (u - target).abs()
            ),
        });
    }
    Ok(out)
}

/// One tabulation interval of width `h` with adaptive Dormand-Prince substeps.
fn rk45_interval(rhs: &dyn Fn(f64) -> f64, u0: f64, h: f64, atol: f64) -> Result<f64> {
    let mut u = u0;
    let mut x = 0.0;
    let mut dt = h;
    let mut rejections = 0u32;
    while x < h {
        dt = dt.min(h - x);
        let (u5, err) = dp_step(rhs, u, dt);
        let scale = atol + 1e-12 * u.abs();
        let e = err / scale;
        if e <= 1.0 || dt <= 1e-14 * h {
            u = u5;
            x += dt;
            dt *= (0.9 * e.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        } else {
            dt *= (0.9 * e.powf(-0.2)).clamp(0.2, 0.9);
            rejections += 1;
            if rejections > 10_000 {
                return Err(Error::InvalidParameter(
                    "profile ODE integrator cannot meet tolerance".into(),
                ));
            }
        }
    }
    Ok(u)
}

/// Dormand-Prince 5(4) step for a scalar autonomous ODE; returns the 5th-order
/// value and the embedded error estimate.
fn dp_step(rhs: &dyn Fn(f64) -> f64, u: f64, h: f64) -> (f64, f64) {
    let k1 = rhs(u);
    let k2 = rhs(u + h * 0.2 * k1);
    let k3 = rhs(u + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    let k4 = rhs(u + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    let k5 = rhs(u + h
        * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3
            - 212.0 / 729.0 * k4));
    let k6 = rhs(u + h
        * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4
            - 5103.0 / 18656.0 * k5));
    let u5 = u + h
        * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5
            + 11.0 / 84.0 * k6);
    let k7 = rhs(u5);
    let err = h
        * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4
            - 17253.0 / 339200.0 * k5
            + 22.0 / 525.0 * k6
            - 1.0 / 40.0 * k7);
    (u5, err.abs())
}

impl Table {
    fn locate(&self, xi: f64) -> Option<(usize, f64)> {
        let n = self.u.len();
        let t = (xi - self.x0) / self.h;
        if t < 0.0 || t > (n - 1) as f64 {
            return None;
        }
        let k = (t.floor() as usize).min(n - 2);
        Some((k, t - k as f64))
    }

    fn eval_value(&self, xi: f64, shock: &ShockData) -> f64 {
        match self.locate(xi) {
            None => {
                if xi < self.x0 {
                    shock.u_minus
                } else {
                    shock.u_plus
                }
            }
            Some((k, s)) => {
                let (y0, y1) = (self.u[k], self.u[k + 1]);
                // Fritsch-Carlson style clamp keeps the cubic monotone on the cell.
                let sec = (y1 - y0) / self.h;
                let cap = 3.0 * sec.abs();
                let d0 = self.du[k].clamp(-cap, cap);
                let d1 = self.du[k + 1].clamp(-cap, cap);
                hermite(y0, y1, d0 * self.h, d1 * self.h, s)
            }
        }
    }

    fn eval_deriv(&self, xi: f64) -> f64 {
        match self.locate(xi) {
            None => 0.0,
            Some((k, s)) => hermite(
                self.du[k],
                self.du[k + 1],
                self.d2u[k] * self.h,
                self.d2u[k + 1] * self.h,
                s,
            ),
        }
    }
}

/// Cubic Hermite on [0,1] with endpoint values y and scaled slopes m = h·y′.
fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * m0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * m1
}
