//! End-to-end checks of the tensor pipeline against independent references:
//! exact values on flat space, finite differences of the raw function, a
//! separately coded Christoffel/Riemann oracle for quadratic functions, and
//! the closed-form curvature table for spherically symmetric connections.

use fforge_core::dsl::{FinslerSpec, KProfile};
use fforge_core::fdcheck;
use fforge_core::geometry::{
    berwald_coefficients, berwald_test, cartan, euler_residual, killing_residuals, metric,
    ricci_scalar, spray_curvature, spray_values,
};
use fforge_core::sampling::{map_unit, Halton};
use fforge_core::so3::{exponential_text, ConnectionField};

fn corpus(name: &str) -> String {
    let path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../geometries").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn load(name: &str) -> FinslerSpec {
    FinslerSpec::parse(&corpus(name)).unwrap()
}

/// Sample ranges that keep every corpus geometry inside its domain and away
/// from null directions: modest radii, interior polar angles, dominant `dt`.
const RANGES: [(f64, f64); 8] = [
    (0.0, 1.0),
    (2.5, 10.0),
    (0.6, 2.5),
    (0.0, 6.2),
    (1.0, 2.0),
    (-0.25, 0.25),
    (-0.04, 0.04),
    (-0.04, 0.04),
];

/// Draws `n` in-domain (position, velocity) samples from a Halton sequence.
fn draw(spec: &FinslerSpec, n: usize, seed: u64) -> Vec<([f64; 4], [f64; 4])> {
    let mut halton = Halton::new(seed, 8);
    let mut out = Vec::with_capacity(n);
    for _ in 0..200 * n {
        if out.len() == n {
            break;
        }
        let u = halton.next_point();
        let mut x = [0.0; 8];
        for (i, (lo, hi)) in RANGES.iter().enumerate() {
            x[i] = map_unit(u[i], *lo, *hi);
        }
        let position = [x[0], x[1], x[2], x[3]];
        let velocity = [x[4], x[5], x[6], x[7]];
        if spec.in_domain(position, velocity) {
            out.push((position, velocity));
        }
    }
    assert_eq!(out.len(), n, "could not draw {n} in-domain samples");
    out
}

/// Largest entry-wise deviation between two tensors, divided by the largest
/// entry magnitude of either (so identically small tensors compare equal).
fn normalized_gap(a: &[f64], b: &[f64]) -> f64 {
    let mut scale = 1e-30f64;
    let mut gap = 0.0f64;
    for (&x, &y) in a.iter().zip(b) {
        scale = scale.max(x.abs()).max(y.abs());
        gap = gap.max((x - y).abs());
    }
    if scale < 1e-9 {
        // Both tensors vanish to working precision; report the raw gap.
        gap
    } else {
        gap / scale
    }
}

/// Like [`normalized_gap`], but with a unit floor on the scale. Used for the
/// finite-difference comparisons, where the reference itself carries an
/// absolute noise floor (rounding amplified by the stencil divisor), so a
/// tensor that vanishes identically must not have that noise counted as a
/// relative error.
fn fd_gap(a: &[f64], b: &[f64]) -> f64 {
    let mut scale = 1.0f64;
    let mut gap = 0.0f64;
    for (&x, &y) in a.iter().zip(b) {
        scale = scale.max(x.abs()).max(y.abs());
        gap = gap.max((x - y).abs());
    }
    gap / scale
}

fn flatten3(t: &[[[f64; 4]; 4]; 4]) -> Vec<f64> {
    t.iter().flatten().flatten().copied().collect()
}

fn flatten2(t: &[[f64; 4]; 4]) -> Vec<f64> {
    t.iter().flatten().copied().collect()
}

// ---------------------------------------------------------------------------
// Exact values on flat space.
// ---------------------------------------------------------------------------

#[test]
fn minkowski_metric_and_cartan_are_exact() {
    let spec = load("minkowski.geom");
    for (p, v) in draw(&spec, 100, 7) {
        let g = metric(&spec, p, v).unwrap();
        let s2 = p[2].sin().powi(2);
        let want = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -p[1] * p[1], 0.0],
            [0.0, 0.0, 0.0, -p[1] * p[1] * s2],
        ];
        for a in 0..4 {
            for b in 0..4 {
                assert!(
                    (g[a][b] - want[a][b]).abs() <= 1e-12 * (1.0 + want[a][b].abs()),
                    "g[{a}][{b}] = {} at r = {}",
                    g[a][b],
                    p[1]
                );
            }
        }
        let c = cartan(&spec, p, v).unwrap();
        for x in flatten3(&c) {
            assert!(x.abs() < 1e-12, "Cartan entry {x} on a quadratic function");
        }
    }
}

#[test]
fn minkowski_curvature_vanishes_everywhere_sampled() {
    let spec = load("minkowski.geom");
    for (p, v) in draw(&spec, 100, 11) {
        let r = spray_curvature(&spec, p, v).unwrap();
        for x in flatten3(&r) {
            assert!(x.abs() < 1e-9, "curvature entry {x} at {p:?}");
        }
        assert!(ricci_scalar(&spec, p, v).unwrap().abs() < 1e-9);
    }
}

#[test]
fn flat_connection_profile_has_vanishing_invariants() {
    let prof = KProfile::parse(&corpus("minkowski.kprof")).unwrap();
    let mut halton = Halton::new(3, 2);
    for _ in 0..100 {
        let u = halton.next_point();
        let t = map_unit(u[0], 0.0, 1.0);
        let r = map_unit(u[1], 2.5, 10.0);
        let field = prof.eval(t, r).unwrap();
        let inv = field.invariants();
        for i in 1..=14 {
            assert!(
                inv.a(i).abs() < 1e-12,
                "a{i} = {} at (t, r) = ({t}, {r})",
                inv.a(i)
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Jet output against finite differences of the raw function.
// ---------------------------------------------------------------------------

/// Cartan tensor from a fourth-order central difference of the metric in the
/// velocity directions: `C_abc = (1/2) ∂g_ab/∂ẋ^c`.
fn cartan_fd(spec: &FinslerSpec, p: [f64; 4], v: [f64; 4], h: f64) -> [[[f64; 4]; 4]; 4] {
    let at = |c: usize, s: f64| {
        let mut vv = v;
        vv[c] += s;
        fdcheck::metric_fd(spec, p, vv, h)
    };
    let mut out = [[[0.0; 4]; 4]; 4];
    for c in 0..4 {
        let (g2p, g1p, g1m, g2m) = (at(c, 2.0 * h), at(c, h), at(c, -h), at(c, -2.0 * h));
        for a in 0..4 {
            for b in 0..4 {
                let d = (-g2p[a][b] + 8.0 * g1p[a][b] - 8.0 * g1m[a][b] + g2m[a][b]) / (12.0 * h);
                out[a][b][c] = 0.5 * d;
            }
        }
    }
    out
}

#[test]
fn jet_tensors_match_finite_differences_across_the_corpus() {
    let files = [
        "minkowski.geom",
        "schwarzschild.geom",
        "powerlaw.geom",
        "exponential.geom",
        "onevariable.geom",
    ];
    let h = 1e-3;
    for file in files {
        let spec = load(file);
        for (p, v) in draw(&spec, 20, 23) {
            let g = metric(&spec, p, v).unwrap();
            let g_fd = fdcheck::metric_fd(&spec, p, v, h);
            let gap = fd_gap(&flatten2(&g), &flatten2(&g_fd));
            assert!(gap < 1e-5, "{file}: metric vs FD gap {gap} at {p:?} {v:?}");

            let c = cartan(&spec, p, v).unwrap();
            let c_fd = cartan_fd(&spec, p, v, h);
            let gap = fd_gap(&flatten3(&c), &flatten3(&c_fd));
            assert!(gap < 1e-5, "{file}: Cartan vs FD gap {gap} at {p:?} {v:?}");

            let s = spray_values(&spec, p, v).unwrap();
            let s_fd = fdcheck::spray_fd(&spec, p, v, h).unwrap();
            let gap = fd_gap(&s, &s_fd);
            assert!(gap < 1e-5, "{file}: spray vs FD gap {gap} at {p:?} {v:?}");
        }
    }
}

// ---------------------------------------------------------------------------
// Quadratic functions against the Christoffel/Riemann oracle.
// ---------------------------------------------------------------------------

#[test]
fn quadratic_functions_reproduce_the_christoffel_oracle() {
    let h = 1e-3;
    for file in ["minkowski.geom", "schwarzschild.geom"] {
        let spec = load(file);
        for (p, v) in draw(&spec, 10, 31) {
            let gamma = berwald_coefficients(&spec, p, v).unwrap();
            let reference = fdcheck::christoffel_reference(&spec, p, h).unwrap();
            for a in 0..4 {
                let gap = fd_gap(&flatten2(&gamma[a]), &flatten2(&reference[a]));
                assert!(gap < 1e-8, "{file}: Christoffel gap {gap} at {p:?}");
            }

            let r = spray_curvature(&spec, p, v).unwrap();
            let r_ref = fdcheck::spray_curvature_reference(&spec, p, v, h).unwrap();
            let gap = fd_gap(&flatten3(&r), &flatten3(&r_ref));
            assert!(gap < 1e-8, "{file}: curvature gap {gap} at {p:?}");

            let trace = ricci_scalar(&spec, p, v).unwrap();
            let trace_ref = fdcheck::ricci_trace_reference(&spec, p, v, h).unwrap();
            assert!(
                (trace - trace_ref).abs() < 1e-8 * (1.0 + trace_ref.abs()),
                "{file}: trace {trace} vs oracle {trace_ref} at {p:?}"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Pipeline curvature against the closed-form coefficient table.
// ---------------------------------------------------------------------------

/// Reads the twelve independent connection coefficients of a spherically
/// symmetric connection off the pipeline's quadratic-spray coefficients at a
/// fixed interior angle.
fn extract_k(spec: &FinslerSpec, t: f64, r: f64) -> [f64; 12] {
    let theta = 1.1;
    let position = [t, r, theta, 0.4];
    let velocity = [1.0, 0.2, 0.03, -0.02];
    let gamma = berwald_coefficients(spec, position, velocity).unwrap();
    let s = theta.sin();
    [
        gamma[0][0][0],
        gamma[0][0][1],
        gamma[0][1][1],
        gamma[1][0][0],
        gamma[1][1][1],
        gamma[1][0][1],
        gamma[0][2][2],
        gamma[2][2][0],
        gamma[2][2][1],
        gamma[1][2][2],
        s * gamma[3][0][2],
        s * gamma[3][1][2],
    ]
}

/// Builds the full coefficient field at `(t, r)`, with first derivatives from
/// fourth-order central differences of the extraction above.
fn extract_field(spec: &FinslerSpec, t: f64, r: f64, h: f64) -> ConnectionField {
    let stencil = |f: &dyn Fn(f64) -> [f64; 12]| {
        let (p2, p1, m1, m2) = (f(2.0 * h), f(h), f(-h), f(-2.0 * h));
        let mut d = [0.0; 12];
        for i in 0..12 {
            d[i] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
        }
        d
    };
    let mut field = ConnectionField::zero();
    field.k = extract_k(spec, t, r);
    field.k_t = stencil(&|s| extract_k(spec, t + s, r));
    field.k_r = stencil(&|s| extract_k(spec, t, r + s));
    field
}

/// For a spherically symmetric geometry, the curvature of the quadratic spray
/// is a bilinear expression in fourteen coefficient-field invariants. This
/// compares the pipeline's curvature against that closed form, channel by
/// channel, at randomized angles and velocities.
fn assert_curvature_matches_table(spec: &FinslerSpec, label: &str, samples: usize, seed: u64) {
    let mut halton = Halton::new(seed, 6);
    let mut done = 0;
    while done < samples {
        let u = halton.next_point();
        let t = map_unit(u[0], 0.0, 1.0);
        let r = map_unit(u[1], 3.0, 8.0);
        let theta = map_unit(u[2], 0.7, 2.4);
        let velocity = [
            map_unit(u[3], 1.0, 1.5),
            map_unit(u[4], -0.2, 0.2),
            map_unit(u[5], -0.03, 0.03),
            0.02,
        ];
        let position = [t, r, theta, 0.9];
        if !spec.in_domain(position, velocity) {
            continue;
        }
        let inv = extract_field(spec, t, r, 1e-3).invariants();
        let table = inv.spray_curvature(theta, velocity);
        let pipeline = spray_curvature(spec, position, velocity).unwrap();
        let gap = normalized_gap(&flatten3(&table), &flatten3(&pipeline));
        assert!(
            gap < 1e-6,
            "{label}: curvature table gap {gap} at (t, r, theta) = ({t}, {r}, {theta})"
        );
        done += 1;
    }
}

#[test]
fn power_law_curvature_matches_the_coefficient_table() {
    assert_curvature_matches_table(&load("powerlaw.geom"), "power-law", 50, 41);
}

#[test]
fn exponential_curvature_matches_the_coefficient_table() {
    let spec = FinslerSpec::parse(&exponential_text(0.2, 0.0, 0.0, -1.0, 1.0)).unwrap();
    assert_curvature_matches_table(&spec, "exponential", 50, 43);
}

#[test]
fn quadratic_geometries_also_match_the_coefficient_table() {
    // These two have nontrivial radial coefficients, so they exercise every
    // channel of the table rather than just the angular block.
    assert_curvature_matches_table(&load("schwarzschild.geom"), "schwarzschild", 25, 47);
    assert_curvature_matches_table(&load("minkowski.geom"), "minkowski", 25, 53);
}

// ---------------------------------------------------------------------------
// Quadratic-spray certification of the non-quadratic families.
// ---------------------------------------------------------------------------

#[test]
fn class_geometries_certify_quadratic_sprays_with_nonzero_cartan() {
    let velocity_ranges = [(1.0, 2.0), (-0.25, 0.25), (-0.04, 0.04), (-0.04, 0.04)];
    for file in ["powerlaw.geom", "exponential.geom", "onevariable.geom"] {
        let spec = load(file);
        let base_points: Vec<[f64; 4]> = draw(&spec, 20, 61).into_iter().map(|(p, _)| p).collect();
        let report = berwald_test(&spec, &base_points, 20, &velocity_ranges, 97).unwrap();
        assert!(
            report.max_connection_deviation < 1e-8,
            "{file}: spray coefficients vary with velocity: {}",
            report.max_connection_deviation
        );
        assert!(
            report.max_cartan > 1e-3,
            "{file}: expected a non-quadratic function, Cartan max {}",
            report.max_cartan
        );
        assert!(
            report.max_mean_landsberg < 1e-8,
            "{file}: mean Landsberg trace {}",
            report.max_mean_landsberg
        );
    }
}

// ---------------------------------------------------------------------------
// Symmetry residuals across the corpus.
// ---------------------------------------------------------------------------

#[test]
fn rotation_and_scaling_residuals_vanish_across_the_corpus() {
    let files = [
        "minkowski.geom",
        "schwarzschild.geom",
        "powerlaw.geom",
        "exponential.geom",
        "onevariable.geom",
    ];
    for file in files {
        let spec = load(file);
        for (p, v) in draw(&spec, 10, 71) {
            for (i, res) in killing_residuals(&spec, p, v).unwrap().iter().enumerate() {
                assert!(
                    res.abs() < 1e-10,
                    "{file}: rotation generator {i} residual {res} at {p:?}"
                );
            }
            let euler = euler_residual(&spec, p, v).unwrap();
            assert!(euler.abs() < 1e-9, "{file}: scaling residual {euler}");
        }
    }
}
