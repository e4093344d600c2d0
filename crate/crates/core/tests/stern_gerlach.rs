use num_complex::Complex64 as C64;

use spinj::sg_dynamics::*;
use spinj::Direction;

/// Free Gaussian of density width 1 (ħ = m = 1).
fn free(x: f64, t: f64) -> C64 {
    let a = C64::new(1.0, 0.5 * t);
    (-(x * x) / (a * 4.0)).exp() / a.sqrt()
}

#[test]
fn spin_up_packet_follows_the_analytic_solution() {
    let g = Grid2D::new(64, 256, 24.0, 48.0).unwrap();
    let up = SpinorField::gaussian(g, &PacketSpec::default(), spinor_along(Direction::Z)).unwrap();
    let field = FieldConfig::with_bias_ratio(1.0, 0.8, 1e3, &g);
    let (t_end, steps) = (3.0, 300);
    let (out, _) = evolve_decoupled(&up, &field, &RunSpec::new(t_end / steps as f64, steps, steps)).unwrap();
    let f = field.force();
    let mut dot = C64::new(0.0, 0.0);
    let (mut n_num, mut n_ref) = (0.0, 0.0);
    for (i, y) in g.ys().into_iter().enumerate() {
        for (k, z) in g.zs().into_iter().enumerate() {
            let reference = free(y, t_end) * free(z - 0.5 * f * t_end * t_end, t_end) * C64::from_polar(1.0, f * t_end * z - f * f * t_end.powi(3) / 6.0);
            let num = out.component(0)[i * g.nz + k];
            dot += num.conj() * reference;
            n_num += num.norm_sqr();
            n_ref += reference.norm_sqr();
        }
    }
    let fidelity = dot.norm_sqr() / (n_num * n_ref);
    assert!(1.0 - fidelity < 1e-8, "1-F = {:e}", 1.0 - fidelity);
}

#[test]
fn splitting_converges_with_grid() {
    let field = FieldConfig::new(1.0, 0.5, 1e6);
    let run = |n: usize| {
        let g = Grid2D::new(n / 2, n, 24.0, 48.0).unwrap();
        let s = SpinorField::gaussian(g, &PacketSpec::default(), spinor_along(Direction::X)).unwrap();
        let (_, r) = evolve_decoupled(&s, &field, &RunSpec::new(0.01, 300, 300)).unwrap();
        r.up.last().unwrap().z
    };
    let (coarse, fine, finest) = (run(64), run(128), run(256));
    assert!((fine - finest).abs() <= (coarse - finest).abs() + 1e-12);
    assert!((finest - 0.5 * 0.5 * 9.0).abs() < 1e-6, "{finest}");
}

#[test]
fn transfer_falls_as_bias_grows() {
    let g = Grid2D::new(32, 64, 16.0, 32.0).unwrap();
    let up = SpinorField::gaussian(g, &PacketSpec::default(), spinor_along(Direction::Z)).unwrap();
    let spec = RunSpec::new(0.01, 200, 20);
    let transfer: Vec<f64> = [0.0, 0.3, 3.0, 30.0, 300.0]
        .iter()
        .map(|&b| evolve_coupled(&up, &FieldConfig::new(1.0, 0.5, b), &spec).unwrap().1.population_transfer())
        .collect();
    assert!(transfer.windows(2).all(|w| w[1] < w[0]), "{transfer:?}");
    assert!(transfer[0] > 0.1 && transfer[4] < 1e-3);
}

#[test]
fn config_document_drives_a_run() {
    let cfg = RunConfig::from_toml_str(
        r#"
mode = "coupled"
[grid]
ny = 32
nz = 64
y_extent = 16.0
z_extent = 32.0
[field]
gradient = 0.5
bias = 0.0
[spin]
theta = 0.0
[run]
dt = 0.01
steps = 100
record_every = 25
"#,
    )
    .unwrap();
    let out = run_config(&cfg).unwrap();
    let mut csv = Vec::new();
    out.write_csv(&mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().lines().count() > 4);
    assert!(out.summary()["population_transfer"].as_f64().unwrap() > 0.0);
}
