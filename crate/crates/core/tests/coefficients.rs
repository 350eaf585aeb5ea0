use std::f64::consts::PI;

use proptest::prelude::*;
use smrlab::coefficients::{
    evaluate_form, freeze_coefficients, generate_holder_field, parabolicity_margin, psi_matrix, CoefficientSet,
    CoefficientSpec, RandomCoefficients, Sampling, TimeProfile,
};
use smrlab::spectral::{Lattice, SpectralField};

fn random_set(seed: u64, d: usize, m: usize, n_noise: usize) -> CoefficientSet {
    RandomCoefficients {
        m,
        n_noise,
        a_mean: 1.0,
        a_amplitude: 0.3,
        b_mean: 0.5,
        b_amplitude: 0.2,
        alpha: 1.5,
        beta: None,
        band: Some(3),
        seed,
        profile: TimeProfile::Constant,
    }
    .build(Lattice::new(d, 8).unwrap())
    .unwrap()
}

fn small() -> Sampling {
    Sampling { n_x: 12, n_t: 1, n_xi: 12, n_eta: 12, t_range: (0.0, 1.0) }
}

#[test]
fn holder_field_examples() {
    let l = Lattice::new(2, 8).unwrap();
    assert_eq!(generate_holder_field(l, 0.5, 0.0, 3).unwrap().max_abs_coefficient(), 0.0);
    assert_eq!(generate_holder_field(l, 0.5, 1.0, 3).unwrap(), generate_holder_field(l, 0.5, 1.0, 3).unwrap());
    assert_ne!(generate_holder_field(l, 0.5, 1.0, 3).unwrap(), generate_holder_field(l, 0.5, 1.0, 4).unwrap());
}

#[test]
fn psi_examples() {
    let l = Lattice::new(1, 4).unwrap();
    let zero_b = CoefficientSet::identity(l, 2).unwrap();
    assert_eq!(psi_matrix(&zero_b, 0, 0, 0.0, &[0.1]).norm(), 0.0);
    let c = CoefficientSet::scalar_constant(l, 1.0, &[2f64.sqrt()]).unwrap();
    assert!((psi_matrix(&c, 0, 0, 0.0, &[0.3])[(0, 0)] - 1.0).abs() < 1e-15);
}

#[test]
fn margin_examples() {
    let l = Lattice::new(1, 8).unwrap();
    let s = Sampling::default();
    let id = parabolicity_margin(&CoefficientSet::identity(Lattice::new(2, 4).unwrap(), 2).unwrap(), 1.0, &s);
    assert!((id.margin - 1.0).abs() < 1e-12 && id.pass, "{id:?}");
    let zero = parabolicity_margin(&CoefficientSet::scalar_constant(l, 1.0, &[2f64.sqrt()]).unwrap(), 0.5, &s);
    assert!(zero.margin.abs() < 1e-12 && !zero.pass);
    let quarter = parabolicity_margin(&CoefficientSet::scalar_constant(l, 1.0, &[1.5f64.sqrt()]).unwrap(), 0.25, &s);
    assert!((quarter.margin - 0.25).abs() < 1e-12);
}

#[test]
fn witness_reproduces_margin() {
    let c = random_set(4, 2, 2, 2);
    let rep = parabolicity_margin(&c, 0.1, &small());
    let w = &rep.witness;
    assert!((evaluate_form(&c, w.t, &w.x, &w.xi, &w.eta) - rep.margin).abs() < 1e-12);
}

#[test]
fn freeze_examples() {
    let l = Lattice::new(1, 8).unwrap();
    let c = CoefficientSet::scalar_constant(l, 1.7, &[0.3]).unwrap();
    let frozen = freeze_coefficients(&c, &[0.2]).unwrap();
    assert!(frozen.a(0, 0).sub(c.a(0, 0)).unwrap().max_abs_coefficient() < 1e-15);
    assert!(frozen.b(0).sub(c.b(0)).unwrap().max_abs_coefficient() < 1e-15);

    let a = SpectralField::from_fn(l, |x| 2.0 + (2.0 * PI * x[0]).sin());
    let b = SpectralField::zeros(l, 1, 1);
    let c = CoefficientSet::new(l, 1, 1, vec![a], vec![b], 1.5, None, None, TimeProfile::Constant).unwrap();
    let frozen = freeze_coefficients(&c, &[0.0]).unwrap();
    assert!((frozen.a(0, 0).coefficient(0, &[0]).unwrap().re - 2.0).abs() < 1e-14);
    assert!(frozen.is_constant());
    let s = small();
    assert!(parabolicity_margin(&frozen, 0.1, &s).margin >= evaluate_form(&c, 0.0, &[0.0], &[1.0], &[1.0]) - 1e-12);
}

#[test]
fn spec_json_round_trip() {
    let c = random_set(9, 1, 1, 2);
    let text = serde_json::to_string(&CoefficientSpec::Inline(Box::new(c.clone()))).unwrap();
    let back: CoefficientSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back.build(*c.lattice()).unwrap(), c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn psi_symmetric_and_diagonal(seed in any::<u64>(), x in -0.5f64..0.5, t in 0.0f64..1.0) {
        let c = random_set(seed, 2, 3, 2);
        for i in 0..2 {
            for j in 0..2 {
                let p = psi_matrix(&c, i, j, t, &[x, -x]);
                let q = psi_matrix(&c, j, i, t, &[x, -x]);
                prop_assert!((p.clone() - q).norm() <= 1e-15);
                for r in 0..3 {
                    for s in 0..3 {
                        if r != s {
                            prop_assert_eq!(p[(r, s)], 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn margin_noise_permutation_invariant(seed in any::<u64>()) {
        let c = random_set(seed, 1, 2, 3);
        let base = parabolicity_margin(&c, 0.1, &small()).margin;
        let permuted = c.permute_noise(&[2, 0, 1]).unwrap();
        prop_assert!((parabolicity_margin(&permuted, 0.1, &small()).margin - base).abs() <= 1e-14);
    }

    #[test]
    fn margin_scaling(seed in any::<u64>(), lambda in 0.1f64..10.0) {
        let c = random_set(seed, 2, 1, 2);
        let base = parabolicity_margin(&c, 0.1, &small()).margin;
        let scaled = parabolicity_margin(&c.scaled(lambda).unwrap(), 0.1, &small()).margin;
        prop_assert!((scaled - lambda * base).abs() <= 1e-10 * (lambda * base).abs());
    }

    #[test]
    fn margin_monotone_in_sampling(seed in any::<u64>()) {
        let c = random_set(seed, 2, 1, 2);
        let coarse = parabolicity_margin(&c, 0.1, &small()).margin;
        let fine = parabolicity_margin(&c, 0.1, &Sampling { n_x: 24, n_t: 2, n_xi: 24, n_eta: 24, t_range: (0.0, 1.0) }).margin;
        prop_assert!(fine <= coarse);
    }

    #[test]
    fn holder_field_deterministic(seed in any::<u64>(), alpha in 0.1f64..3.0, amp in 0.0f64..5.0) {
        let l = Lattice::new(1, 16).unwrap();
        let a = generate_holder_field(l, alpha, amp, seed).unwrap();
        let b = generate_holder_field(l, alpha, amp, seed).unwrap();
        prop_assert!(a.coefficients().iter().zip(b.coefficients()).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
    }
}
