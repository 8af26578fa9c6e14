use lame_weyl::asymptotics::counting_function;
use lame_weyl::spectrum::*;
use lame_weyl::*;
use std::f64::consts::PI;

fn j0_series(x: f64) -> f64 {
    let q = -x * x / 4.0;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..80 {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

fn first_j0_zero() -> f64 {
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j0_series(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn scalar_ground_state_is_the_first_bessel_zero_squared() {
    let s = scalar_disk_spectrum(1.0, BoundaryCondition::Dirichlet, 100.0, 1).unwrap();
    let j01 = first_j0_zero();
    assert!((s.entries[0].tau - j01 * j01).abs() < 1e-10);
    assert!((s.entries[0].tau - 5.78319).abs() < 1e-5);
    assert_eq!(counting_function(&s, 6.0).unwrap(), 1);
    assert_eq!(counting_function(&s, s.entries[0].tau).unwrap(), 0);
    s.check_invariants().unwrap();
}

#[test]
fn neumann_disk_has_one_zero_mode_per_component() {
    let s = scalar_disk_spectrum(1.0, BoundaryCondition::Neumann, 200.0, 2).unwrap();
    assert_eq!(s.zero_multiplicity(), 2);
    s.check_invariants().unwrap();
}

#[test]
fn rectangle_matches_brute_force_lattice_count() {
    let s = rectangle_scalar_spectrum(PI, PI, 1.0, BoundaryCondition::Dirichlet, 2000.0).unwrap();
    assert_eq!(counting_function(&s, 5.0).unwrap(), 1);
    for tau in [10.0, 77.7, 500.0, 1999.0] {
        let mut n = 0u64;
        for p in 1..100u64 {
            for q in 1..100u64 {
                if ((p * p + q * q) as f64) < tau {
                    n += 1;
                }
            }
        }
        assert_eq!(counting_function(&s, tau).unwrap(), n, "tau = {tau}");
    }
}

#[test]
fn degenerate_elastic_clamped_spectrum_is_the_doubled_scalar_spectrum() {
    let tau_max = 3000.0;
    let m = make_material(1.0, 1.0, 2).unwrap();
    let el = elastic_disk_spectrum(&m, BoundaryCondition::Dirichlet, tau_max).unwrap();
    let sc = scalar_disk_spectrum(1.0, BoundaryCondition::Dirichlet, tau_max, 2).unwrap();
    let (a, b) = (el.expanded(), sc.expanded());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-9 * y, "{x} vs {y}");
    }
}

#[test]
fn every_elastic_eigenpair_verifies() {
    let m = make_material(1.0, 3.0, 2).unwrap();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Free] {
        let s = elastic_disk_spectrum(&m, bc, 2000.0).unwrap();
        assert!(s.completeness.weyl_band_ok);
        assert_eq!(s.completeness.step_halving_stable, Some(true));
        for e in s.entries.iter().filter(|e| e.tau > 0.0) {
            let omega = e.tau.sqrt();
            let r = verify_eigenpair(&m, bc, e.label.m, omega, null_vector(e.label.m, omega, &m, bc));
            assert!(r <= 1e-8, "{bc} m = {} tau = {}: {r}", e.label.m, e.tau);
            assert!((r - e.residual).abs() <= 1e-9);
        }
        let a = s.leading_coefficient();
        let dev = (s.total_count() as f64 - a * s.tau_max).abs() / s.tau_max.sqrt();
        assert!(dev <= s.completeness.band_constant);
    }
}

#[test]
fn perturbed_frequency_fails_verification() {
    let m = make_material(1.0, 3.0, 2).unwrap();
    let bc = BoundaryCondition::Dirichlet;
    let s = elastic_disk_spectrum(&m, bc, 400.0).unwrap();
    let e = s.entries.iter().find(|e| e.label.m == 2).unwrap();
    let omega = e.tau.sqrt() * (1.0 + 1e-3);
    let r = verify_eigenpair(&m, bc, e.label.m, omega, null_vector(e.label.m, omega, &m, bc));
    assert!(r > 1e-4, "{r}");
}

#[test]
fn free_disk_carries_three_rigid_motions() {
    let m = make_material(1.0, 3.0, 2).unwrap();
    let s = elastic_disk_spectrum(&m, BoundaryCondition::Free, 300.0).unwrap();
    assert_eq!(s.zero_multiplicity(), 3);
    s.check_invariants().unwrap();
}

#[test]
fn leading_count_follows_the_area_term() {
    let m = make_material(1.0, 3.0, 2).unwrap();
    let s = elastic_disk_spectrum(&m, BoundaryCondition::Dirichlet, 5000.0).unwrap();
    let a = (1.0 / 3.0 + 1.0) * PI / (4.0 * PI);
    let ratio = s.total_count() as f64 / (a * s.tau_max);
    assert!((ratio - 1.0).abs() < s.completeness.band_constant / (a * s.tau_max.sqrt()));
}

fn small_request() -> SpectrumRequest {
    SpectrumRequest {
        operator: OperatorKind::ScalarLaplace,
        bc: BoundaryCondition::Dirichlet,
        medium: Medium::Scalar { c2: 1.0, components: 1 },
        domain: DomainDescriptor::unit_disk(),
        tau_max: 500.0,
        settings: ScanSettings::default(),
    }
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = SpectrumCache::new(dir.path());
    let req = small_request();
    let (first, status, path) = cache.load_or_compute(&req).unwrap();
    assert_eq!(status, CacheStatus::Miss);
    let bytes = std::fs::read(&path).unwrap();
    let modified = std::fs::metadata(&path).unwrap().modified().unwrap();

    let (second, status, path2) = cache.load_or_compute(&req).unwrap();
    assert_eq!(status, CacheStatus::Hit);
    assert_eq!(path, path2);
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
    assert_eq!(std::fs::metadata(&path).unwrap().modified().unwrap(), modified);
    assert_eq!(first.entries, second.entries);
    assert_eq!(first.completeness, second.completeness);
}

#[test]
fn cache_key_depends_on_every_request_field() {
    let base = small_request();
    let mut other = base;
    other.tau_max = 501.0;
    assert_ne!(base.key().unwrap(), other.key().unwrap());
    let mut other = base;
    other.settings.residual_gate = 1e-9;
    assert_ne!(base.key().unwrap(), other.key().unwrap());
    assert_eq!(base.key().unwrap(), small_request().key().unwrap());
}

#[test]
fn round_trip_preserves_every_bit() {
    let dir = tempfile::tempdir().unwrap();
    let s = elastic_disk_spectrum(&make_material(1.0, 3.0, 2).unwrap(), BoundaryCondition::Free, 300.0).unwrap();
    let path = dir.path().join("s.spectrum");
    write_spectrum(&path, &s, "k", None).unwrap();
    let back = read_spectrum(&path).unwrap();
    assert_eq!(back, s);
    assert!(write_spectrum(&path, &s, "k", None).is_err());
}

#[test]
fn failed_band_is_a_completeness_error() {
    let settings = ScanSettings {
        band_slack: 1e-3,
        ..ScanSettings::default()
    };
    let r = scalar_disk_spectrum_with(1.0, BoundaryCondition::Dirichlet, 2000.0, 1, &settings);
    assert!(matches!(r, Err(Error::Completeness(_))), "{r:?}");
}

#[test]
fn degenerate_free_positive_spectrum_equals_the_clamped_one() {
    let m = make_material(1.0, 1.0, 2).unwrap();
    let dir = elastic_disk_spectrum(&m, BoundaryCondition::Dirichlet, 3000.0)
        .unwrap()
        .expanded();
    let free: Vec<f64> = elastic_disk_spectrum(&m, BoundaryCondition::Free, 3000.0)
        .unwrap()
        .expanded()
        .into_iter()
        .filter(|&t| t > 0.0)
        .collect();
    assert_eq!(dir.len(), free.len());
    for (x, y) in dir.iter().zip(&free) {
        assert!((x - y).abs() <= 1e-9 * x);
    }
}
