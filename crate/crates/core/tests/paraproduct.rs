use std::f64::consts::PI;

use proptest::prelude::*;
use smrlab::coefficients::{generate_holder_field, random_field, CoefficientSet};
use smrlab::paraproduct::{
    bony_decompose, bony_decompose_inner, build_cover, commutator_probe, cover_radius, extension_operator,
    partition_of_unity, probe_multiplication, Cover, ExtensionOperator, MultiplicationCase, ProbeParams,
};
use smrlab::solver::OperatorForm;
use smrlab::spectral::{lq_norm, product, torus_distance, Lattice, SpectralField};

fn sup_grid(f: &SpectralField) -> f64 {
    f.to_real_grid().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

#[test]
fn bony_constants() {
    let l = Lattice::new(1, 16).unwrap();
    let f = SpectralField::from_fn(l, |_| 2.0);
    let g = SpectralField::from_fn(l, |_| -3.0);
    let t = bony_decompose(&f, &g).unwrap();
    assert_eq!(t.t_fg.max_abs_coefficient(), 0.0);
    assert_eq!(t.t_gf.max_abs_coefficient(), 0.0);
    assert!((t.r_fg.coefficient(0, &[0]).unwrap().re + 6.0).abs() < 1e-13);
}

#[test]
fn bony_low_modulates_high() {
    // |xi| = 2 pi k: k = 41 gives |xi| ~ 2^8, k = 1 gives |xi| ~ 2^2.6, inside block 2 or 3
    let l = Lattice::new(1, 128).unwrap();
    let f = SpectralField::from_fn(l, |x| (2.0 * PI * 41.0 * x[0]).cos());
    let g = SpectralField::from_fn(l, |x| (2.0 * PI * x[0]).cos());
    let t = bony_decompose(&f, &g).unwrap();
    let fg = product(&f, &g).unwrap();
    assert!(t.t_gf.sub(&fg).unwrap().max_abs_coefficient() < 1e-13);
    assert!(t.t_fg.max_abs_coefficient() < 1e-13);
    assert!(t.r_fg.max_abs_coefficient() < 1e-13);
}

#[test]
fn extension_linear_example() {
    let l = Lattice::new(2, 64).unwrap();
    let y = [0.1, -0.2];
    let r = 1.0 / 16.0;
    let op = ExtensionOperator::new(&y, r).unwrap();
    let f = |x: &[f64]| smrlab::spectral::torus_offset(x, &y)[0];
    let vals = op.grid_values(&l, &f).unwrap();
    for (x, v) in l.points().zip(&vals) {
        let dist = torus_distance(&x, &y);
        if dist <= r {
            assert!((v - f(&x)).abs() < 1e-8);
        } else if dist > 2.0 * r {
            assert!(v.abs() < 1e-15);
        }
    }
    let field = extension_operator(&l, &f, &y, r).unwrap();
    assert_eq!(field.lattice(), &l);
}

#[test]
fn extension_rejects_large_radius() {
    assert!(ExtensionOperator::new(&[0.0], 0.125).is_err());
    assert!(ExtensionOperator::new(&[0.0], 0.0).is_err());
}

#[test]
fn cover_examples() {
    assert!((cover_radius(0.1, 1.0, 10.0, 1.0) - 0.01).abs() < 1e-15);
    assert_eq!(cover_radius(1e9, 1.0, 1.0, 1.0), 0.125);
    let c = build_cover(1, 1e9, 1.0, 1.0, 1.0).unwrap();
    assert!(c.len() <= 9);
    assert!(c.covers(&Lattice::new(1, 64).unwrap()));
    let c = build_cover(2, 0.5, 1.0, 2.0, 2.0).unwrap();
    assert!(c.covers(&Lattice::new(2, 32).unwrap()));
    assert!(build_cover(1, -1.0, 1.0, 1.0, 1.0).is_err());
}

#[test]
fn partition_examples() {
    let l = Lattice::new(1, 32).unwrap();
    let single = Cover::from_centers(1, vec![vec![0.0]], 1.0).unwrap();
    let pu = partition_of_unity(&single, &l).unwrap();
    assert!(pu.grid_values(0).iter().all(|v| (v - 1.0).abs() < 1e-15));
    let two = Cover::from_centers(1, vec![vec![-0.25], vec![0.25]], 0.3).unwrap();
    let pu = partition_of_unity(&two, &l).unwrap();
    assert!(pu.sum_deviation() < 1e-10);
}

#[test]
fn commutator_examples() {
    let l = Lattice::new(1, 32).unwrap();
    let c = CoefficientSet::identity(l, 1).unwrap();
    let one = SpectralField::from_fn(l, |_| 1.0);
    let u = SpectralField::from_fn(l, |x| (2.0 * PI * 3.0 * x[0]).sin());
    let rep = commutator_probe(&c, OperatorForm::Divergence, &one, &u, 0.0, 2.0, 0.0).unwrap();
    assert!(rep.norm_commutator < 1e-10);

    // ratio does not grow with K for a smooth phi and rough u
    let mut ratios = Vec::new();
    for k in [32, 64, 128] {
        let l = Lattice::new(1, k).unwrap();
        let c = CoefficientSet::identity(l, 1).unwrap();
        let phi = SpectralField::from_fn(l, |x| (2.0 * PI * x[0]).cos() + 2.0);
        let u = generate_holder_field(l, 1.5, 1.0, 5).unwrap();
        ratios.push(commutator_probe(&c, OperatorForm::Divergence, &phi, &u, 0.0, 2.0, 0.0).unwrap().ratio);
    }
    assert!(ratios[2] <= 1.25 * ratios[0], "{ratios:?}");
}

fn probe_params() -> Vec<(MultiplicationCase, ProbeParams)> {
    let base = ProbeParams { s: 0.5, q: 2.0, ..Default::default() };
    vec![
        (MultiplicationCase::P1, base.clone()),
        (MultiplicationCase::P2, ProbeParams { tau: Some(1.5), ..base.clone() }),
        (MultiplicationCase::P3, ProbeParams { tau: Some(1.2), zeta: Some(2.0), ..base.clone() }),
        (MultiplicationCase::P4, ProbeParams { tau: Some(1.5), ..base.clone() }),
        (MultiplicationCase::Cor, ProbeParams { xi: Some(2.0), eta: Some(1.0), ..base }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bony_reconstruction(seed in any::<u64>(), n_seq in 0usize..4, d in 1usize..=2) {
        let l = Lattice::new(d, if d == 1 { 32 } else { 8 }).unwrap();
        let f = random_field(l, 1, 0, 0.5, 1.0, seed, None).unwrap();
        let g = random_field(l, 1, n_seq, 0.5, 1.0, seed ^ 1, None).unwrap();
        let err = bony_decompose(&f, &g).unwrap().sum().sub(&product(&f, &g).unwrap()).unwrap();
        prop_assert!(sup_grid(&err) <= 1e-10 * sup_grid(&f) * sup_grid(&g));
        let h = random_field(l, 2, 0, 0.5, 1.0, seed ^ 2, None).unwrap();
        let k = random_field(l, 2, 0, 0.5, 1.0, seed ^ 3, None).unwrap();
        let inner = bony_decompose_inner(&h, &k).unwrap().sum();
        let direct = smrlab::spectral::inner_product(&h, &k).unwrap();
        prop_assert!(inner.sub(&direct).unwrap().coefficient_l2() <= 1e-10 * direct.coefficient_l2().max(1e-300));
    }

    #[test]
    fn extension_properties(y0 in -0.5f64..0.5, y1 in -0.5f64..0.5, r in 0.02f64..0.12, c in -5.0f64..5.0, w in 0.0f64..6.0) {
        let l = Lattice::new(2, 32).unwrap();
        let y = [y0, y1];
        let op = ExtensionOperator::new(&y, r).unwrap();
        let f = |x: &[f64]| (2.0 * PI * x[0] + w).sin() * (2.0 * PI * x[1]).cos();
        let vals = op.grid_values(&l, &f).unwrap();
        let fy = f(op.centre());
        for (x, v) in l.points().zip(&vals) {
            let dist = torus_distance(&x, &y);
            if dist <= r {
                prop_assert_eq!(*v, f(&x));
            }
            if dist > 2.0 * r {
                prop_assert_eq!(*v, fy);
            }
            prop_assert!(v.abs() <= 1.0 + 1e-12);
        }
        let constant = op.grid_values(&l, &|_: &[f64]| c).unwrap();
        prop_assert!(constant.iter().all(|v| *v == c));
    }

    #[test]
    fn partition_sums_to_one(eta in 0.05f64..5.0, d in 1usize..=2) {
        let cover = build_cover(d, eta, 1.0, 4.0, 1.0).unwrap();
        let l = Lattice::new(d, if d == 1 { 64 } else { 16 }).unwrap();
        prop_assert!(cover.covers(&l));
        let pu = partition_of_unity(&cover, &l).unwrap();
        prop_assert!(pu.sum_deviation() <= 1e-10);
        for (lam, centre) in cover.centers().iter().enumerate() {
            for (x, &v) in l.points().zip(pu.grid_values(lam)) {
                prop_assert!(v >= 0.0);
                if torus_distance(&x, centre) >= cover.radius() {
                    prop_assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn probe_ratio_homogeneous_in_f(seed in any::<u64>()) {
        let l = Lattice::new(1, 32).unwrap();
        let f = generate_holder_field(l, 1.2, 1.0, seed).unwrap();
        let g = generate_holder_field(l, 1.8, 1.0, seed ^ 9).unwrap();
        prop_assert!(lq_norm(&f, 2.0).unwrap() > 0.0);
        for (case, params) in probe_params() {
            let base = probe_multiplication(case, &f, &g, &params).unwrap().ratio;
            for lambda in [1e-3, 1.0, 1e3] {
                let r = probe_multiplication(case, &f.scale(lambda), &g, &params).unwrap().ratio;
                prop_assert!((r - base).abs() <= 1e-10 * base);
            }
        }
    }
}
