use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use sqfock::experiment::table::format_value;
use sqfock::fock;
use sqfock::linalg::{self, CMatrix};
use sqfock::lindblad::{self, Generator, Hamiltonian};
use sqfock::model::{self, EffectiveParams};
use sqfock::sensing::{self, QubitParams};

fn eff(r: f64, gamma0: f64) -> EffectiveParams {
    EffectiveParams::from_squeezing(r, PI, 3.0, 0.2, gamma0, 1.0, 1.0)
}

/// A random density matrix `A A† / Tr(A A†)`.
fn density(dim: usize, entries: &[(f64, f64)]) -> CMatrix {
    let a = CMatrix::from_iterator(dim, dim, entries.iter().map(|&(re, im)| C64::new(re, im)));
    let m = &a * a.adjoint();
    let tr = linalg::trace(&m);
    m / tr
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ramsey_probability_is_a_probability(r in 0.0..2.5f64, gamma0 in 0.0..5.0f64, omega in -20.0..20.0f64, t in 0.0..10.0f64) {
        let q = QubitParams::squeezed(&eff(r, gamma0)).with_splitting(omega);
        let p = sensing::ramsey_analytic(&q, 0.0, t).unwrap();
        prop_assert!(p.p1 >= -1e-9 && p.p1 <= 1.0 + 1e-9);
        let tr = p.rho[(0, 0)].re + p.rho[(1, 1)].re;
        prop_assert!((tr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sensitivity_ratio_decreases_with_squeezing(r1 in 0.0..3.0f64, dr in 1e-3..1.0f64) {
        let a = sensing::sensitivity_spring(&eff(r1, 1.0)).unwrap().ratio();
        let b = sensing::sensitivity_spring(&eff(r1 + dr, 1.0)).unwrap().ratio();
        prop_assert!(b < a);
        let oracle = (2.0 * r1).cosh().sqrt() * (-2.0 * r1).exp();
        prop_assert!((a - oracle).abs() < 1e-13);
    }

    #[test]
    fn cramer_rao_equals_slope_route(r in 0.0..2.5f64, gamma0 in 1e-2..1e3f64) {
        let e = eff(r, gamma0);
        let slope = sensing::sensitivity_spring(&e).unwrap().delta_k_min;
        let cr = sensing::sensitivity_spring_cramer_rao(&e, 1.0).unwrap().delta_k_min;
        prop_assert!(((cr - slope) / slope).abs() < 1e-12);
    }

    #[test]
    fn optimum_time_is_the_grid_argmin(r in 0.0..2.0f64, gamma0 in 0.1..10.0f64) {
        let e = eff(r, gamma0);
        let t_opt = sensing::sensitivity_spring(&e).unwrap().t_opt;
        let grid = lindblad::linspace(0.05 * t_opt, 4.0 * t_opt, 400);
        let step = grid[1] - grid[0];
        let best = grid
            .iter()
            .map(|&t| (t, sensing::delta_k_error_propagation(&e, t, PI / 2.0, 1.0).unwrap()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        prop_assert!((best.0 - t_opt).abs() <= step);
    }

    #[test]
    fn rabi_probability_is_bounded(omega_b in -5.0..5.0f64, omega_f in -5.0..5.0f64, t in 0.0..20.0f64) {
        let p = sensing::rabi_probability(omega_b, omega_f, t);
        let w2 = omega_b * omega_b + omega_f * omega_f;
        let cap = if w2 > 0.0 { omega_f * omega_f / w2 } else { 0.0 };
        prop_assert!(p >= 0.0 && p <= cap + 1e-15);
    }

    #[test]
    fn master_equation_rhs_preserves_trace_and_hermiticity(
        r in 0.0..1.5f64,
        gamma0 in 0.0..2.0f64,
        t in 0.0..3.0f64,
        entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 36),
    ) {
        let e = eff(r, gamma0);
        let b = fock::annihilation(6).unwrap();
        let g = Generator::new(
            Hamiltonian::constant(model::hamiltonian_eff_diag(&e, 6).unwrap()),
            lindblad::squeezed_bath_terms(&e, &b, 1.3),
        ).unwrap();
        let rho = density(6, &entries);
        let d = g.rhs(t, &rho).unwrap();
        prop_assert!(linalg::trace(&d).norm() < 1e-12);
        prop_assert!((&d - d.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn squeezed_moments_satisfy_minimum_uncertainty(r in 0.0..3.0f64, theta in -PI..PI) {
        let e = EffectiveParams::from_squeezing(r, theta, 1.0, 1.0, 1.0, 1.0, 1.0);
        let lhs = e.m_sq.norm_sqr();
        let rhs = e.n_sq * (e.n_sq + 1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn commutator_is_identity_except_the_corner(dim in 2usize..40) {
        let a = fock::annihilation(dim).unwrap();
        let c = a.commutator(&a.dagger()).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                let z = c.matrix()[(i, j)];
                if i != j {
                    prop_assert_eq!(z, C64::from(0.0));
                } else {
                    // √n·√n rounds, so diagonal entries carry a tolerance
                    let want = if i == dim - 1 { 1.0 - dim as f64 } else { 1.0 };
                    prop_assert!((z - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn csv_values_round_trip(v in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        let s = format_value(v, 17);
        prop_assert_eq!(s.parse::<f64>().unwrap(), v);
    }
}
