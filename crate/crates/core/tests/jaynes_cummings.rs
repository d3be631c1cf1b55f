use uimpl::harness::{certify, check_tradeoff1, Status};
use uimpl::metrics::{chi, commutator_norm, delta_e, delta_eq, Evaluation, SamplerBudget};
use uimpl::models::{build_jc_dephased, jc_model, jc_target_unitary, FockDim, JcParams, ModelSpec};

#[test]
fn energy_spread_is_two_alpha_epsilon() {
    for alpha in [2.0, 5.0, 10.0, 20.0] {
        let model = jc_model(&JcParams::spin_flip(alpha)).unwrap();
        let de = delta_e(model.imp().sigma_e(), model.imp().h_e()).unwrap();
        assert!((de - 20.0 * alpha).abs() <= 1e-9 * 20.0 * alpha, "alpha {alpha}: {de}");
        assert!(model.imp().truncation_tail() <= 1e-10);
    }
}

#[test]
fn spin_flip_commutator_norm_is_two_epsilon() {
    for alpha in [2.0, 8.0, 20.0] {
        let u = jc_target_unitary(&JcParams::spin_flip(alpha));
        let h_s = uimpl::models::jc_system_hamiltonian(10.0);
        assert!((commutator_norm(&h_s, &u).unwrap() - 20.0).abs() < 1e-10);
    }
}

#[test]
fn free_energy_is_conserved() {
    for alpha in [2.0, 6.0, 10.0] {
        let model = jc_model(&JcParams::spin_flip(alpha)).unwrap();
        let imp = model.imp();
        let free = imp.free_hamiltonian(model.h_s()).unwrap();
        let x = chi(&free, &imp.total_unitary(model.h_s()).unwrap()).unwrap();
        assert!(x <= 1e-8 * 10.0, "alpha {alpha}: chi = {x}");
    }
}

#[test]
fn dephased_apparatus_has_no_coherent_spread() {
    let (_, imp) = build_jc_dephased(&JcParams::spin_flip(3.0)).unwrap();
    assert!(delta_eq(imp.sigma_e(), imp.h_e()).unwrap() <= 1e-10);
    assert!((delta_e(imp.sigma_e(), imp.h_e()).unwrap() - 60.0).abs() < 1e-8);
}

#[test]
fn coherent_apparatus_saturates_delta_eq() {
    let model = jc_model(&JcParams::spin_flip(3.0)).unwrap();
    let imp = model.imp();
    let eq = delta_eq(imp.sigma_e(), imp.h_e()).unwrap();
    assert!((eq - delta_e(imp.sigma_e(), imp.h_e()).unwrap()).abs() < 1e-10);
}

#[test]
fn gate_error_shrinks_with_amplitude() {
    let budget = SamplerBudget::default().with_samples(1000);
    let errs: Vec<f64> = [2.0, 4.0, 8.0]
        .iter()
        .map(|&a| Evaluation::new(&jc_model(&JcParams::spin_flip(a)).unwrap(), budget).unwrap().metrics.delta_u)
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn alpha_eight_satisfies_first_tradeoff() {
    let model = jc_model(&JcParams::spin_flip(8.0)).unwrap();
    let cert = certify(&model, SamplerBudget::default().with_samples(2000)).unwrap();
    assert!(cert.passed());
    let t1 = check_tradeoff1(&cert.evaluation.metrics);
    assert!(t1.satisfied);
    // Desk-scale amplitudes are far from the guaranteed regime.
    assert_eq!(t1.status, Status::NotApplicable);
    assert!(!t1.regime.unwrap().met);
}

#[test]
fn spec_file_round_trip() {
    let mut p = JcParams::spin_flip(4.0);
    p.fock_dim = FockDim::Fixed(80);
    let spec = ModelSpec::jaynes_cummings(&p);
    let back = ModelSpec::from_json(&spec.to_json()).unwrap().build().unwrap();
    assert_eq!(back.dim_e(), 80);
    assert_eq!(back.fock_dim(), Some(80));
}
