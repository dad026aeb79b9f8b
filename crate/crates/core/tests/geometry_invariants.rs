use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toroid::geometry::{monge_curvatures, MongeSurface};

#[test]
fn potential_is_attractive_and_vanishes_only_at_umbilics() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..10_000 {
        let (surface, rho) = match rng.random_range(0..4) {
            0 => {
                let r = rng.random_range(0.1..10.0);
                (MongeSurface::hemisphere(r), r * rng.random_range(0.01..0.99))
            }
            1 => (MongeSurface::paraboloid(rng.random_range(-5.0..5.0)), rng.random_range(0.01..3.0)),
            2 => {
                let major = rng.random_range(0.5..5.0);
                let minor = major * rng.random_range(0.05..0.95);
                let rho = major + minor * rng.random_range(-0.99..0.99);
                (MongeSurface::torus_cap(minor, major), rho)
            }
            _ => {
                let (p, q) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                let s = MongeSurface::new(
                    move |r: f64| p * r.powi(4) + q * r * r,
                    move |r: f64| 4.0 * p * r.powi(3) + 2.0 * q * r,
                    move |r: f64| 12.0 * p * r * r + 2.0 * q,
                );
                (s, rng.random_range(0.01..1.5))
            }
        };
        let b = monge_curvatures(&surface, rho).unwrap();
        assert!(b.potential <= 0.0);
        assert_eq!(b.potential == 0.0, b.k1 == b.k2, "rho={rho} k1={} k2={}", b.k1, b.k2);
    }
}

#[test]
fn plane_is_umbilic_everywhere() {
    for rho in [1e-6, 0.3, 7.0, 1e6] {
        assert_eq!(monge_curvatures(&MongeSurface::plane(), rho).unwrap().potential, 0.0);
    }
}
