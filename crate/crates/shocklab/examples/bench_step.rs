use shocklab::dynamics::{DtPolicy, InitialData, Simulation};
use shocklab::flux::{FluxSpec, ShockData};
use shocklab::grid::Grid;
use shocklab::profile::{solve_profile, ProfileOptions};
use std::time::Instant;

fn main() {
    let flux = FluxSpec::burgers(0.5).unwrap();
    let shock = ShockData::new(&flux, 1.0, 0.0).unwrap();
    let profile = solve_profile(&flux, &shock, &ProfileOptions::default()).unwrap();
    let grid = Grid::new(40.0, 1601, 2, 64).unwrap();
    let data = InitialData::Bump {
        amplitude: 1.0,
        center: 0.0,
        width: 1.0,
        edge: 0.25,
    };
    let u0 = data.generate(&grid, &profile, 50.0).unwrap();
    let mut sim = Simulation::new(&flux, &profile, u0, DtPolicy::Auto).unwrap();
    println!(
        "dt = {:.6e}, steps for t=50: {:.0}",
        sim.dt(),
        50.0 / sim.dt()
    );
    let n = 500;
    let t0 = Instant::now();
    for _ in 0..n {
        sim.step().unwrap();
    }
    let el = t0.elapsed().as_secs_f64();
    println!(
        "{} steps in {:.2}s -> {:.2} ms/step; full t=50 run approx {:.1} min",
        n,
        el,
        1e3 * el / n as f64,
        (50.0 / sim.dt()) * (el / n as f64) / 60.0
    );

    // Component timings.
    use shocklab::grid::{self, Field, StencilWorkspace};
    let f = sim.state().u.clone();
    let mut out = Field::zeros(&grid);
    let mut ws = StencilWorkspace::new(&grid);
    let t0 = Instant::now();
    for _ in 0..300 {
        grid::moving_frame_rhs_ws(&flux, shock.sigma, &f, sim.far(), &mut ws, &mut out);
    }
    println!("rhs: {:.3} ms", 1e3 * t0.elapsed().as_secs_f64() / 300.0);
    let t0 = Instant::now();
    for _ in 0..300 {
        std::hint::black_box(shocklab::dynamics::shift_rhs(&flux, &profile, &f, 0.3));
    }
    println!(
        "shift_rhs: {:.3} ms",
        1e3 * t0.elapsed().as_secs_f64() / 300.0
    );
    let t0 = Instant::now();
    for _ in 0..300 {
        std::hint::black_box(grid::linf_norm(&f));
    }
    println!("linf: {:.3} ms", 1e3 * t0.elapsed().as_secs_f64() / 300.0);
}
