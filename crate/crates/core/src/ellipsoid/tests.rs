use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::channel::{choi_from_pauli, ChoiState, KrausSet, PauliForm, Preset};
use crate::numerics::real3::{diag3, dot3, eye3, max_abs_diff3, sub3};
use crate::numerics::ComplexMatrix;
use crate::random;

fn choi_of(p: Preset<f64>) -> ChoiState<f64> {
    p.kraus().unwrap().choi()
}

fn ell(p: Preset<f64>) -> Ellipsoid<f64> {
    ellipsoid_of_channel(&choi_of(p).pauli_form()).unwrap()
}

fn close3(a: Vec3<f64>, b: Vec3<f64>, tol: f64) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= tol)
}

fn exact_points(c: &ChoiState<f64>, inputs: &[Vec3<f64>]) -> Vec<BlochPoint<f64>> {
    sample_outputs(c, inputs).unwrap()
}

/// `(r - C)^T Q^{-1} (r - C)` through the independently computed inverse.
fn quadric_value(center: Vec3<f64>, q: Mat3<f64>, r: Vec3<f64>) -> f64 {
    let d = sub3(&r, &center);
    let det = det3(&q);
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        q[r0][c0] * q[r1][c1] - q[r0][c1] * q[r1][c0]
    };
    let mut v = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            v += d[i] * cof(j, i) / det * d[j];
        }
    }
    v
}

#[test]
fn channel_ellipsoid_examples() {
    let id = ell(Preset::Identity);
    assert!(close3(id.center(), [0.0; 3], 1e-12));
    assert!(max_abs_diff3(&id.shape(), &eye3()) < 1e-12);
    assert!(close3(id.semiaxes(), [1.0; 3], 1e-10));
    assert_eq!(id.chirality(), Chirality::Negative);

    for p in [0.0, 0.3, 0.8] {
        let e = ell(Preset::Depolarizing { p });
        assert!(close3(e.center(), [0.0; 3], 1e-12));
        assert!(close3(e.semiaxes(), [p; 3], 1e-10));
    }

    for g in [0.0, 0.25, 0.7, 1.0] {
        let e = ell(Preset::AmplitudeDamping { gamma: g });
        let s = (1.0f64 - g).sqrt();
        assert!(close3(e.center(), [0.0, 0.0, g], 1e-12));
        assert!(close3(e.semiaxes(), [s, s, 1.0 - g], 1e-8), "{:?}", e.semiaxes());
    }
}

#[test]
fn nonzero_a_is_rejected() {
    let mut p = choi_of(Preset::Identity).pauli_form();
    p.a = [0.0, 0.0, 0.1];
    assert!(matches!(ellipsoid_of_channel(&p), Err(Error::NonzeroA(_))));
}

#[test]
fn semiaxes_are_square_roots_of_shape_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let k: KrausSet<f64> = random::kraus_set(&mut rng);
        let e = ellipsoid_of_channel(&k.choi().pauli_form()).unwrap();
        // Q l_i^2 = eigen-equation along each axis
        for i in 0..3 {
            let axis = [0, 1, 2].map(|r| e.axes()[r][i]);
            let qa = matvec3(&e.shape(), &axis);
            let l2 = e.semiaxes()[i] * e.semiaxes()[i];
            assert!(close3(qa, axis.map(|x| x * l2), 1e-10));
        }
        assert!(e.semiaxes()[0] >= e.semiaxes()[1] && e.semiaxes()[1] >= e.semiaxes()[2]);
        assert!((det3(&e.axes()) - 1.0).abs() < 1e-10);
        assert!(norm3(&e.center()) <= 1.0 + 1e-12);
    }
}

#[test]
fn channel_ellipsoids_stay_inside_bloch_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let k: KrausSet<f64> = random::kraus_set(&mut rng);
        let e = ellipsoid_of_channel(&k.choi().pauli_form()).unwrap();
        for v in mesh(&e, 24).unwrap().vertices {
            assert!(norm3(&v) <= 1.0 + 1e-7);
        }
    }
}

#[test]
fn volume_examples() {
    let four_thirds_pi = 4.0 * std::f64::consts::PI / 3.0;
    assert!((volume(&ell(Preset::Identity)) - 4.18879).abs() < 1e-5);
    assert!((ell(Preset::Identity).volume_bound() - 1.0).abs() < 1e-12);
    for p in [0.1, 0.5, 0.9] {
        let e = ell(Preset::Depolarizing { p });
        assert!((e.volume() - four_thirds_pi * p.powi(3)).abs() < 1e-10);
        assert!((e.volume_bound() - p.powf(0.75)).abs() < 1e-10);
    }
    for g in [0.2, 0.6] {
        let e = ell(Preset::AmplitudeDamping { gamma: g });
        assert!((e.volume() - four_thirds_pi * (1.0 - g).powi(2)).abs() < 1e-10);
    }
    assert_eq!(ell(Preset::AmplitudeDamping { gamma: 1.0 }).volume_bound(), 0.0);
}

#[test]
fn entanglement_breaking_presets_have_zero_volume() {
    let rho = ComplexMatrix::diag(&[0.7, 0.3]);
    for p in [Preset::Replacer(rho), Preset::ZMeasurePrepare] {
        let e = ell(p);
        assert!(e.volume() < 1e-12);
        assert!(e.semiaxes()[2] < 1e-7);
    }
}

#[test]
fn volume_invariant_under_unitary_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let k: KrausSet<f64> = random::kraus_set(&mut rng);
        let u = random::unitary::<f64, _>(2, &mut rng);
        let v0 = ellipsoid_of_channel(&k.choi().pauli_form()).unwrap().volume();
        for composed in [k.then_unitary(&u), k.after_unitary(&u)] {
            let v = ellipsoid_of_channel(&composed.unwrap().choi().pauli_form())
                .unwrap()
                .volume();
            assert!((v - v0).abs() <= 1e-9 * v0.max(1e-3), "{v} vs {v0}");
        }
    }
}

#[test]
fn sample_outputs_examples() {
    let grid: Vec<Vec3<f64>> = default_input_grid();
    let paulis = &grid[..6];
    let out = exact_points(&choi_of(Preset::Identity), paulis);
    for (p, r) in out.iter().zip(paulis) {
        assert!(close3(p.r, *r, 1e-12));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let k: KrausSet<f64> = random::kraus_set(&mut rng);
        let c = k.choi();
        let b = c.pauli_form().b;
        assert!(close3(exact_points(&c, &[[0.0; 3]])[0].r, b, 1e-12));
    }

    let dep = exact_points(&choi_of(Preset::Depolarizing { p: 0.5 }), &[[0.0, 0.0, 1.0]]);
    assert!(close3(dep[0].r, [0.0, 0.0, 0.5], 1e-12));

    let err = sample_outputs(&choi_of(Preset::Identity), &[[0.0, 0.0, 1.01]]);
    assert!(matches!(err, Err(Error::BadInput(_))));
}

#[test]
fn pure_inputs_land_on_surface_and_mixed_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let k: KrausSet<f64> = random::kraus_set_with_rank(2, &mut rng);
        let c = k.choi();
        let e = ellipsoid_of_channel(&c.pauli_form()).unwrap();
        let n = random::unit_vector::<f64, _>(&mut rng);
        let s: f64 = rng.random_range(0.0..0.95);
        let pts = exact_points(&c, &[n, n.map(|x| x * s)]);
        assert!((quadric_value(e.center(), e.shape(), pts[0].r) - 1.0).abs() < 1e-8);
        assert!(quadric_value(e.center(), e.shape(), pts[1].r) < 1.0);
    }
}

#[test]
fn default_grid_is_26_pure_distinct_inputs() {
    let g: Vec<Vec3<f64>> = default_input_grid();
    assert_eq!(g.len(), 26);
    for (i, a) in g.iter().enumerate() {
        assert!((norm3(a) - 1.0).abs() < 1e-14);
        for b in &g[i + 1..] {
            assert!(norm3(&sub3(a, b)) > 0.5);
        }
    }
}

#[test]
fn bloch_point_limits() {
    assert!(BlochPoint::exact([0.0, 0.0, 1.0]).is_ok());
    assert!(BlochPoint::exact([0.0, 0.0, 1.001]).is_err());
    assert!(BlochPoint::new([0.0, 0.0, 1.05], None, None, 0.02).is_ok());
    assert!(BlochPoint::new([0.0, 0.0, 1.07], None, None, 0.02).is_err());
    // the hard cap wins over a generous tolerance
    assert!(BlochPoint::new([0.0, 0.0, 1.16], None, None, 1.0).is_err());
    assert!(BlochPoint::new([0.0, 0.0, 0.5], None, Some(0.0), 0.0).is_err());
    assert!(BlochPoint::new([f64::NAN, 0.0, 0.0], None, None, 0.0).is_err());
}

#[test]
fn fit_unit_sphere_from_grid() {
    let pts = exact_points(&choi_of(Preset::Identity), &default_input_grid());
    let fit = fit_ellipsoid(&pts, &FitOptions::exact()).unwrap();
    assert!(fit.residual <= 1e-9);
    assert!(!fit.degenerate);
    assert!(close3(fit.ellipsoid.center(), [0.0; 3], 1e-9));
    assert!(max_abs_diff3(&fit.ellipsoid.shape(), &eye3()) < 1e-9);
    assert_eq!(fit.ellipsoid.chirality(), Chirality::Undetermined);
}

#[test]
fn fit_amplitude_damping_from_nine_generic_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let inputs: Vec<Vec3<f64>> = (0..9).map(|_| random::unit_vector(&mut rng)).collect();
    let pts = exact_points(&choi_of(Preset::AmplitudeDamping { gamma: 0.4 }), &inputs);
    let fit = fit_ellipsoid(&pts, &FitOptions::exact()).unwrap();
    assert!(close3(fit.ellipsoid.center(), [0.0, 0.0, 0.4], 1e-6));
    assert!(max_abs_diff3(&fit.ellipsoid.shape(), &diag3([0.6, 0.6, 0.36])) < 1e-6);
}

#[test]
fn fit_recovers_random_channel_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let k: KrausSet<f64> = random::kraus_set(&mut rng);
        let c = k.choi();
        let truth = ellipsoid_of_channel(&c.pauli_form()).unwrap();
        let inputs: Vec<Vec3<f64>> = (0..26).map(|_| random::unit_vector(&mut rng)).collect();
        let fit = fit_ellipsoid(&exact_points(&c, &inputs), &FitOptions::exact()).unwrap();
        assert!(close3(fit.ellipsoid.center(), truth.center(), 1e-6));
        assert!(max_abs_diff3(&fit.ellipsoid.shape(), &truth.shape()) < 1e-6);

        let recon = reconstruct_choi_candidates(&fit.ellipsoid).unwrap();
        for cand in &recon {
            let v = ellipsoid_of_channel(&cand.choi.pauli_form()).unwrap().volume();
            assert!((v - truth.volume()).abs() < 1e-6);
        }
    }
}

#[test]
fn noisy_fit_volume_within_ten_percent() {
    let truth = 4.0 * std::f64::consts::PI / 3.0 * 0.8f64.powi(3);
    let c = choi_of(Preset::Depolarizing { p: 0.8 });
    let clean = exact_points(&c, &default_input_grid());
    let noise = rand_distr::Normal::new(0.0, 0.01).unwrap();
    let mut errs: Vec<f64> = (0..100)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<BlochPoint<f64>> = clean
                .iter()
                .map(|p| BlochPoint::new(p.r.map(|x| x + rng.sample(noise)), None, None, 0.05).unwrap())
                .collect();
            let fit = fit_ellipsoid(&pts, &FitOptions::default()).unwrap();
            (fit.ellipsoid.volume() - truth).abs() / truth
        })
        .collect();
    errs.sort_by(f64::total_cmp);
    assert!(errs[94] < 0.10, "95th percentile relative error {}", errs[94]);
}

#[test]
fn fit_errors() {
    let c = choi_of(Preset::Identity);
    let grid = default_input_grid::<f64>();
    let few = exact_points(&c, &grid[..8]);
    assert!(matches!(
        fit_ellipsoid(&few, &FitOptions::exact()),
        Err(Error::TooFewPoints { needed: 9, got: 8 })
    ));

    // circle in the z = 0 plane
    let flat: Vec<BlochPoint<f64>> = (0..12)
        .map(|k| {
            let a = k as f64 * std::f64::consts::PI / 6.0;
            BlochPoint::exact([0.5 * a.cos(), 0.5 * a.sin(), 0.0]).unwrap()
        })
        .collect();
    assert!(matches!(
        fit_ellipsoid(&flat, &FitOptions::exact()),
        Err(Error::DegenerateData(_))
    ));

    // points on the hyperboloid x² + y² - z² = 0.25
    let hyper: Vec<BlochPoint<f64>> = (0..16)
        .map(|k| {
            let a = k as f64 * 0.7;
            let z = -0.6 + 0.08 * k as f64;
            let rad = (0.25 + z * z).sqrt();
            BlochPoint::exact([rad * a.cos(), rad * a.sin(), z]).unwrap()
        })
        .collect();
    assert!(matches!(
        fit_ellipsoid(&hyper, &FitOptions::exact()),
        Err(Error::NotAnEllipsoid(_))
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let noisy: Vec<BlochPoint<f64>> = exact_points(&choi_of(Preset::Depolarizing { p: 0.7 }), &grid)
        .into_iter()
        .map(|p| BlochPoint::exact(p.r.map(|x| x + rng.random_range(-0.01..0.01))).unwrap())
        .collect();
    assert!(matches!(
        fit_ellipsoid(&noisy, &FitOptions::exact()),
        Err(Error::BadInput(_))
    ));
    assert!(fit_ellipsoid(&noisy, &FitOptions::default()).is_ok());
}

#[test]
fn collapsed_outputs_give_point_ellipsoid() {
    let pts = exact_points(&choi_of(Preset::AmplitudeDamping { gamma: 1.0 }), &default_input_grid());
    let fit = fit_ellipsoid(&pts, &FitOptions::exact()).unwrap();
    assert!(fit.degenerate);
    assert!(close3(fit.ellipsoid.center(), [0.0, 0.0, 1.0], 1e-12));
    assert_eq!(fit.ellipsoid.volume(), 0.0);
}

#[test]
fn thin_ellipsoid_flags_degenerate_direction() {
    let pts = exact_points(
        &choi_of(Preset::AmplitudeDamping { gamma: 0.9995 }),
        &default_input_grid(),
    );
    let fit = fit_ellipsoid(&pts, &FitOptions::exact()).unwrap();
    // (1-γ)² = 2.5e-7 is below the default degeneracy tolerance
    assert!(fit.degenerate);
    assert!(fit.ellipsoid.semiaxes()[2] == 0.0);
    assert!((fit.ellipsoid.semiaxes()[0] - 0.0005f64.sqrt()).abs() < 1e-8);
}

#[test]
fn weights_downweight_outliers() {
    let c = choi_of(Preset::Depolarizing { p: 0.6 });
    let mut pts = exact_points(&c, &default_input_grid());
    for p in pts.iter_mut() {
        p.weight = Some(1000.0);
    }
    pts[0].r = [0.75, 0.0, 0.0];
    pts[0].weight = Some(1e-6);
    let fit = fit_ellipsoid(&pts, &FitOptions::default()).unwrap();
    assert!(close3(fit.ellipsoid.semiaxes(), [0.6; 3], 1e-6));
}

#[test]
fn reconstruction_examples() {
    let id = reconstruct_choi_candidates(&ell(Preset::Identity)).unwrap();
    assert_eq!(id.len(), 1);
    assert_eq!(id[0].chirality, Chirality::Negative);
    let phi = choi_of(Preset::Identity);
    assert!(id[0].choi.matrix().max_abs_diff(phi.matrix()) < 1e-12);

    let dep = reconstruct_choi_candidates(&ell(Preset::Depolarizing { p: 0.2 })).unwrap();
    assert_eq!(dep.len(), 2);
    assert_ne!(dep[0].chirality, dep[1].chirality);

    let big = Ellipsoid::from_center_shape([0.0; 3], diag3([1.2; 3]), Chirality::Undetermined).unwrap();
    assert!(matches!(
        reconstruct_choi_candidates(&big),
        Err(Error::NoValidCandidate)
    ));

    let point = Ellipsoid::from_center_shape([0.0, 0.0, 0.5], [[0.0; 3]; 3], Chirality::Undetermined).unwrap();
    assert_eq!(reconstruct_choi_candidates(&point).unwrap().len(), 1);
}

#[test]
fn candidates_share_the_input_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let k: KrausSet<f64> = random::kraus_set(&mut rng);
        let e = ellipsoid_of_channel(&k.choi().pauli_form()).unwrap();
        let cands = reconstruct_choi_candidates(&e).unwrap();
        for cand in cands {
            let p = cand.choi.pauli_form();
            assert!(norm3(&p.a) < 1e-8);
            assert!(close3(p.b, e.center(), 1e-8));
            let q = crate::numerics::real3::matmul3(&crate::numerics::real3::transpose3(&p.theta), &p.theta);
            assert!(max_abs_diff3(&q, &e.shape()) < 1e-8);
            assert!(Chirality::from_sign(det3(&p.theta)).sign() * cand.chirality.sign() >= 0);
        }
    }
}

#[test]
fn reconstruction_round_trips_symmetric_maps() {
    // channels whose Bloch matrix is already symmetric PSD are reproduced exactly
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let p: f64 = rng.random_range(0.0..1.0);
        let g: f64 = rng.random_range(0.0..1.0);
        for preset in [Preset::Depolarizing { p }, Preset::AmplitudeDamping { gamma: g }] {
            let c = choi_of(preset);
            let cands = reconstruct_choi_candidates(&ellipsoid_of_channel(&c.pauli_form()).unwrap()).unwrap();
            assert!(cands.iter().any(|k| k.choi.matrix().max_abs_diff(c.matrix()) < 1e-9));
        }
    }
}

#[test]
fn mesh_examples() {
    let unit = ell(Preset::Identity);
    let m = mesh(&unit, 8).unwrap();
    assert_eq!(m.vertices.len(), 58);
    assert_eq!(m.faces.len(), 2 * 8 * 7);
    assert!(m.vertices.iter().all(|v| (norm3(v) - 1.0).abs() < 1e-12));
    assert!(m.faces.iter().flatten().all(|&i| i < 58));

    let point = mesh(&ell(Preset::AmplitudeDamping { gamma: 1.0 }), 10).unwrap();
    assert!(point.vertices.iter().all(|v| close3(*v, [0.0, 0.0, 1.0], 1e-12)));

    let half = mesh(&ell(Preset::Depolarizing { p: 0.5 }), 12).unwrap();
    assert!(half.vertices.iter().all(|v| (norm3(v) - 0.5).abs() < 1e-12));

    assert!(matches!(mesh(&unit, 7), Err(Error::BadResolution(7))));
}

#[test]
fn mesh_vertices_lie_on_surface_and_faces_point_outward() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let k: KrausSet<f64> = random::kraus_set_with_rank(2, &mut rng);
        let e = ellipsoid_of_channel(&k.choi().pauli_form()).unwrap();
        let m = mesh(&e, 16).unwrap();
        assert_eq!(m.vertices.len(), 16 * 15 + 2);
        for v in &m.vertices {
            assert!((quadric_value(e.center(), e.shape(), *v) - 1.0).abs() < 1e-10);
        }
        for f in &m.faces {
            let [a, b, c] = f.map(|i| m.vertices[i]);
            let n = cross(sub3(&b, &a), sub3(&c, &a));
            let mid = [0, 1, 2].map(|i| (a[i] + b[i] + c[i]) / 3.0);
            assert!(dot3(&n, &sub3(&mid, &e.center())) > 0.0);
        }
    }
}

fn cross(a: Vec3<f64>, b: Vec3<f64>) -> Vec3<f64> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[test]
fn mesh_writers() {
    let m = mesh(&ell(Preset::Depolarizing { p: 0.5 }), 8).unwrap();
    let sphere = mesh(&ell(Preset::Identity), 8).unwrap();
    let mut obj = Vec::new();
    m.write_obj(Some(&sphere), &mut obj).unwrap();
    let text = String::from_utf8(obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 116);
    let max_index = text
        .lines()
        .filter(|l| l.starts_with("f "))
        .flat_map(|l| l[2..].split(' ').map(|i| i.parse::<usize>().unwrap()))
        .collect::<Vec<_>>();
    assert_eq!(max_index.iter().min(), Some(&1));
    assert_eq!(max_index.iter().max(), Some(&116));

    let json = m.to_json(None);
    assert_eq!(json["schema_version"], "1");
    assert_eq!(json["vertices"].as_array().unwrap().len(), 58);
    assert_eq!(json["faces"][0].as_array().unwrap().len(), 3);
    assert!(json.get("sphere").is_none());
    assert!(m.to_json(Some(&sphere))["sphere"]["faces"].is_array());
}

#[test]
fn points_csv_round_trip() {
    let c = choi_of(Preset::AmplitudeDamping { gamma: 0.3 });
    let mut pts = exact_points(&c, &default_input_grid());
    let mut buf = Vec::new();
    write_points(&pts, &mut buf).unwrap();
    assert!(String::from_utf8_lossy(&buf).starts_with("input_id,x,y,z\n"));
    assert_eq!(read_points(buf.as_slice(), 0.0).unwrap(), pts);

    pts[3].weight = Some(512.0);
    let mut buf = Vec::new();
    write_points(&pts, &mut buf).unwrap();
    let back: Vec<BlochPoint<f64>> = read_points(buf.as_slice(), 0.0).unwrap();
    assert_eq!(back[3].weight, Some(512.0));
    assert_eq!(back[4].weight, None);
}

#[test]
fn points_csv_errors() {
    let bad_header = "id,x,y,z\na,0,0,0\n";
    assert!(matches!(
        read_points::<f64, _>(bad_header.as_bytes(), 0.0),
        Err(Error::Parse(_))
    ));
    let bad_number = "input_id,x,y,z\na,0,zero,0\n";
    assert!(matches!(
        read_points::<f64, _>(bad_number.as_bytes(), 0.0),
        Err(Error::Parse(_))
    ));
    let too_long = "input_id,x,y,z\na,0,0,1.2\n";
    assert!(matches!(
        read_points::<f64, _>(too_long.as_bytes(), 0.1),
        Err(Error::BadInput(_))
    ));
    let ok = "input_id,x,y,z,weight\n,0,0,1.02,100\n";
    let p = read_points::<f64, _>(ok.as_bytes(), 0.01).unwrap();
    assert_eq!(p[0].input_id, None);
    assert_eq!(p[0].weight, Some(100.0));
}

#[test]
fn reconstruction_from_pauli_of_candidate_is_consistent() {
    let e = ell(Preset::AmplitudeDamping { gamma: 0.5 });
    for cand in reconstruct_choi_candidates(&e).unwrap() {
        let p = cand.choi.pauli_form();
        let back = choi_from_pauli(&PauliForm { a: [0.0; 3], ..p });
        assert!(back.max_abs_diff(cand.choi.matrix()) < 1e-12);
    }
}
