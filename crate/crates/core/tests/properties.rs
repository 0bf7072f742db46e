mod common;

use proptest::prelude::*;
use spin1_dimer::basis::product_index;
use spin1_dimer::entanglement::{
    partial_transpose_closed_form, partial_transpose_numeric, thermal_density_matrix, Phase,
};
use spin1_dimer::linalg::{sym_eigen, sym_eigenvalues, sym_expm, Matrix, SymMatrix};
use spin1_dimer::spectrum::{eigenvalue, find_crossings, full_spectrum, ground_state_energy, hamiltonian_matrix};
use spin1_dimer::thermo::ThermalEnsemble;
use spin1_dimer::{
    heat_capacity, map_couplings, negativity, partition_function, run_sweep, to_model_params, CoupledLabel,
    MicroscopicParams, ModelParams, Output, SweepSpec, SweepVariable,
};

fn coupling() -> impl Strategy<Value = f64> {
    -20.0..=20.0f64
}

fn point() -> impl Strategy<Value = ModelParams> {
    (coupling(), coupling(), coupling(), 0.05..=5.0f64).prop_map(|(t, g, w, temp)| ModelParams::new(t, g, w, temp))
}

fn symmetric(max_entry: f64) -> impl Strategy<Value = SymMatrix> {
    (1usize..=9).prop_flat_map(move |n| {
        prop::collection::vec(-max_entry..=max_entry, n * n)
            .prop_map(move |v| SymMatrix::from_upper(n, |i, j| 0.5 * (v[i * n + j] + v[j * n + i])).unwrap())
    })
}

/// Gram-Schmidt on a random square matrix.
fn orthogonal(n: usize, seed: &[f64]) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut k = 0;
    while cols.len() < n {
        let mut v: Vec<f64> =
            (0..n).map(|i| seed[(k * n + i) % seed.len()] + if i == cols.len() { 2.0 } else { 0.0 }).collect();
        k += 1;
        for c in &cols {
            let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    Matrix::from_fn(n, |i, j| cols[j][i])
}

/// `S1·S2 = Sz Sz + (S+ S- + S- S+)/2` with spin-1 matrices written out here.
fn two_spin_hamiltonian(tau: f64, gamma: f64, omega: f64) -> Matrix {
    let spins = [-1i8, 0, 1];
    let raise = |to: i8, from: i8| if to == from + 1 { 2f64.sqrt() } else { 0.0 };
    let mut x = Matrix::zeros(9);
    for &a in &spins {
        for &b in &spins {
            for &c in &spins {
                for &d in &spins {
                    let mut v = 0.5 * (raise(a, c) * raise(d, b) + raise(c, a) * raise(b, d));
                    if a == c && b == d {
                        v += f64::from(a) * f64::from(b);
                    }
                    x.set(product_index(a, b), product_index(c, d), v);
                }
            }
        }
    }
    let x2 = x.matmul(&x).unwrap();
    Matrix::from_fn(9, |i, j| {
        let field = if i == j {
            let s = spin1_dimer::basis::PRODUCT_BASIS[i];
            omega * f64::from(s.s1 + s.s2) + (tau - gamma)
        } else {
            0.0
        };
        field + tau * x.get(i, j) + gamma * x2.get(i, j)
    })
}

proptest! {
    // ---- parameter map -------------------------------------------------

    #[test]
    fn coupling_identity(t in 1e-3..=10.0f64, u0 in coupling(), u2 in coupling()) {
        let m = MicroscopicParams { t, u0, u2 };
        prop_assume!(m.validate().is_ok());
        let k = map_couplings(&m).unwrap();
        let scale = k.k0.abs().max(k.k1.abs()).max(k.k2.abs());
        prop_assert!((k.k0 - (k.k1 - k.k2)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn coupling_scaling(t in 1e-2..=10.0f64, u0 in coupling(), u2 in coupling(), c in 1e-2..=1e2f64) {
        let m = MicroscopicParams { t, u0, u2 };
        prop_assume!((u0 + u2).abs() > 1e-6 && (u0 - 2.0 * u2).abs() > 1e-6);
        let scaled = MicroscopicParams { t: c * t, u0: c * u0, u2: c * u2 };
        let (k, ks) = (map_couplings(&m).unwrap(), map_couplings(&scaled).unwrap());
        for (a, b) in [(k.k0, ks.k0), (k.k1, ks.k1), (k.k2, ks.k2)] {
            prop_assert!((b - c * a).abs() <= 1e-12 * (c * a).abs().max(1e-300));
        }
        let (p, ps) = (to_model_params(&m, 0.0, 1.0).unwrap(), to_model_params(&scaled, 0.0, 1.0).unwrap());
        prop_assert!((p.tau - ps.tau).abs() <= 1e-12 * p.tau.abs());
        prop_assert!((p.gamma - ps.gamma).abs() <= 1e-12 * p.gamma.abs());
    }

    // ---- spectrum ------------------------------------------------------

    #[test]
    fn analytic_levels_match_diagonalised_hamiltonian(
        tau in -50.0..=50.0f64, gamma in -50.0..=50.0f64, omega in -50.0..=50.0f64,
    ) {
        let p = ModelParams::new(tau, gamma, omega, 1.0);
        let mut analytic: Vec<f64> = full_spectrum(&p).levels().iter().map(|l| l.energy).collect();
        analytic.sort_by(f64::total_cmp);
        let here = SymMatrix::from_matrix(two_spin_hamiltonian(tau, gamma, omega)).unwrap();
        prop_assert!(here.as_matrix().max_abs_diff(hamiltonian_matrix(&p).as_matrix()) < 1e-12);
        for (a, b) in analytic.iter().zip(sym_eigenvalues(&here).unwrap()) {
            prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn triplet_is_pure_zeeman(p in point()) {
        for m in -1i8..=1 {
            prop_assert_eq!(eigenvalue(&p, CoupledLabel::new(1, m).unwrap()), p.omega * f64::from(m));
        }
    }

    #[test]
    fn spectrum_is_sorted_and_complete(p in point()) {
        let s = full_spectrum(&p);
        prop_assert!(s.levels().windows(2).all(|w| w[0].energy <= w[1].energy));
        let mut labels: Vec<CoupledLabel> = s.levels().iter().map(|l| l.label).collect();
        labels.sort();
        prop_assert_eq!(labels, CoupledLabel::ALL.to_vec());
        for l in s.levels() {
            let (j, m) = (i32::from(l.label.j()), i32::from(l.label.m()));
            prop_assert_eq!(l.energy.to_bits(), eigenvalue(&p, l.label).to_bits());
            prop_assert!((l.energy - common::energy(j, m, p.tau, p.gamma, p.omega)).abs() <= 1e-12 * (1.0 + l.energy.abs()));
        }
    }

    #[test]
    fn two_crossings_with_slope_jumps(gamma in 0.01..=20.0f64, omega in 0.01..=20.0f64) {
        let r = find_crossings(gamma, omega, (-10.0, 100.0)).unwrap();
        prop_assert_eq!(r.crossings.len(), 2);
        let labels: Vec<String> = r.sequence.iter().map(|l| l.tag()).collect();
        prop_assert_eq!(labels, vec!["j2m-2", "j1m-1", "j0m0"]);
        let (a, b) = (r.tau_a().unwrap(), r.tau_b().unwrap());
        prop_assert!((a - omega / 2.0).abs() <= 1e-6 && (b - omega - 3.0 * gamma).abs() <= 1e-6);
        for c in &r.crossings {
            prop_assert!(c.residual_gap <= spin1_dimer::spectrum::GAP_TOLERANCE);
        }

        let d = 0.25 * (b - a).min(1.0);
        let slope = |tau: f64| {
            let e = |t: f64| ground_state_energy(&ModelParams::new(t, gamma, omega, 1.0));
            (e(tau + 0.1 * d) - e(tau - 0.1 * d)) / (0.2 * d)
        };
        prop_assert!((slope(a - d) - 2.0).abs() < 1e-6);
        prop_assert!(slope(a + d).abs() < 1e-6);
        prop_assert!(slope(b - d).abs() < 1e-6);
        prop_assert!((slope(b + d) + 1.0).abs() < 1e-6);
    }

    // ---- thermodynamics ------------------------------------------------

    #[test]
    fn closed_form_matches_boltzmann_sum(p in point()) {
        let beta = 1.0 / p.temperature;
        prop_assume!(common::energies(&p).iter().all(|e| (beta * e).abs() <= 500.0));
        let z = partition_function(&p).unwrap();
        let reference: f64 = common::energies(&p).iter().map(|e| (-beta * e).exp()).sum();
        prop_assert!((z - reference).abs() <= 1e-12 * reference, "{z} vs {reference}");
    }

    #[test]
    fn trace_of_thermal_exponential_is_z(p in point()) {
        let beta = 1.0 / p.temperature;
        prop_assume!(common::energies(&p).iter().all(|e| (beta * e).abs() <= 500.0));
        let trace = sym_expm(&hamiltonian_matrix(&p), -beta).unwrap().trace();
        let z = partition_function(&p).unwrap();
        prop_assert!((trace - z).abs() <= 1e-12 * z, "{trace} vs {z}");
    }

    #[test]
    fn partition_function_bounded_below_and_heat_capacity_non_negative(p in point()) {
        let e = ThermalEnsemble::new(&p).unwrap();
        // ln Z >= 0 because one level sits at zero energy
        prop_assert!(e.log_z() >= -1e-15);
        prop_assert!(heat_capacity(&p).unwrap() >= 0.0);
    }

    #[test]
    fn heat_capacity_vanishes_at_both_temperature_ends(tau in coupling(), gamma in coupling(), omega in coupling()) {
        let p = ModelParams::new(tau, gamma, omega, 1e7);
        prop_assert!(heat_capacity(&p).unwrap() < 1e-9);
        prop_assert!((partition_function(&p).unwrap() - 9.0).abs() < 1e-3);

        let cold = p.with_temperature(1e-3);
        prop_assume!(full_spectrum(&cold).gap() >= 0.05);
        prop_assert!(heat_capacity(&cold).unwrap() < 1e-12);
    }

    #[test]
    fn heat_capacity_is_derivative_of_energy(p in point()) {
        let c = heat_capacity(&p).unwrap();
        prop_assume!(c > 1e-3);
        let excitation = |t: f64| ThermalEnsemble::new(&p.with_temperature(t)).unwrap().excitation_energy();
        let h = 1e-5 * p.temperature;
        let fd = spin1_dimer::linalg::central_diff(excitation, p.temperature, h);
        prop_assert!((fd - c).abs() <= 1e-6 * c, "{fd} vs {c}");
    }

    // ---- entanglement --------------------------------------------------

    #[test]
    fn thermal_state_is_valid(p in point()) {
        let rho = thermal_density_matrix(&p).unwrap();
        prop_assert!(sym_eigenvalues(&rho).unwrap()[0] >= -1e-12);
        prop_assert!((rho.trace() - 1.0).abs() <= 1e-12);
        let oracle = common::density_matrix(&p);
        prop_assert!(common::max_abs_diff(&oracle, |i, j| rho.get(i, j)) <= 1e-12);

        let sigma = partial_transpose_closed_form(&p).unwrap();
        prop_assert!((sigma.trace() - 1.0).abs() <= 1e-12);
        prop_assert!(sigma.structure_defect() == 0.0);
        let n = negativity(&p).unwrap();
        prop_assert!((n.eigenvalues.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&n.negativity));
    }

    #[test]
    fn closed_form_partial_transpose_matches_constructions(p in point()) {
        let closed = partial_transpose_closed_form(&p).unwrap();
        let numeric = partial_transpose_numeric(&p).unwrap();
        prop_assert!(closed.matrix().as_matrix().max_abs_diff(numeric.matrix().as_matrix()) <= 1e-12);
        let oracle = common::partial_transpose(&common::density_matrix(&p));
        prop_assert!(common::max_abs_diff(&oracle, |i, j| closed.matrix().get(i, j)) <= 1e-12);
        let mut assembled = closed.assembled_eigenvalues().unwrap();
        assembled.sort_by(f64::total_cmp);
        for (a, g) in assembled.iter().zip(sym_eigenvalues(numeric.matrix()).unwrap()) {
            prop_assert!((a - g).abs() <= 1e-10);
        }
    }

    #[test]
    fn zero_temperature_plateaus(tau in 0.0..=10.0f64) {
        prop_assume!((tau - 0.5).abs() > 0.05 && (tau - 4.0).abs() > 0.05);
        let n = negativity(&ModelParams::new(tau, 1.0, 1.0, 1e-3)).unwrap().negativity;
        let expected = if tau < 0.5 { 0.0 } else if tau < 4.0 { 0.5 } else { 1.0 };
        prop_assert!((n - expected).abs() <= 1e-3, "N({tau}) = {n}");
    }

    #[test]
    fn negativity_continuous_in_temperature(p in point()) {
        let n = |t: f64| negativity(&p.with_temperature(t)).unwrap().negativity;
        let dt = 1e-7 * p.temperature;
        prop_assert!((n(p.temperature + dt) - n(p.temperature)).abs() <= 1e-3);
    }

    // ---- linear algebra ------------------------------------------------

    #[test]
    fn spectrum_invariant_under_orthogonal_conjugation(
        m in symmetric(10.0), seed in prop::collection::vec(-1.0..=1.0f64, 81),
    ) {
        let q = orthogonal(m.dim(), &seed);
        let rotated = m.conjugate(&q).unwrap();
        let (a, b) = (sym_eigenvalues(&m).unwrap(), sym_eigenvalues(&rotated).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10, "{x} vs {y}");
        }
        prop_assert!((a.iter().sum::<f64>() - m.trace()).abs() <= 1e-10);
        let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((frob - m.as_matrix().frobenius_norm()).abs() <= 1e-10);
    }

    #[test]
    fn eigen_decomposition_reconstructs(m in symmetric(10.0)) {
        let e = sym_eigen(&m).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.reconstruct().max_abs_diff(m.as_matrix()) <= 1e-10 * m.as_matrix().max_abs().max(1e-300));
    }

    #[test]
    fn exponential_inverse_small_norm(m in symmetric(1.0), norm in 0.0..=5.0f64) {
        let f = m.as_matrix().frobenius_norm();
        prop_assume!(f > 0.0);
        let a = SymMatrix::from_upper(m.dim(), |i, j| m.get(i, j) * norm / f).unwrap();
        let prod = sym_expm(&a, 1.0).unwrap().as_matrix().matmul(sym_expm(&a, -1.0).unwrap().as_matrix()).unwrap();
        prop_assert!(prod.max_abs_diff(&Matrix::identity(a.dim())) <= 1e-10);
    }

    #[test]
    fn exponential_inverse_relative_to_conditioning(m in symmetric(1.0), norm in 0.0..=50.0f64) {
        let f = m.as_matrix().frobenius_norm();
        prop_assume!(f > 0.0);
        let a = SymMatrix::from_upper(m.dim(), |i, j| m.get(i, j) * norm / f).unwrap();
        let (up, down) = (sym_expm(&a, 1.0).unwrap(), sym_expm(&a, -1.0).unwrap());
        let prod = up.as_matrix().matmul(down.as_matrix()).unwrap();
        // round-off in the product is amplified by |e^A| |e^-A|
        let cond = up.as_matrix().frobenius_norm() * down.as_matrix().frobenius_norm();
        prop_assert!(prod.max_abs_diff(&Matrix::identity(a.dim())) <= 1e-10 * cond);
    }

    // ---- sweeps --------------------------------------------------------

    #[test]
    fn sweeps_are_finite_and_ordered(p in point(), steps in 2usize..=40, width in 0.0..=10.0f64) {
        let spec = SweepSpec {
            variable: SweepVariable::Tau,
            start: p.tau,
            stop: p.tau + width,
            steps,
            fixed: p,
            outputs: Output::ALL.to_vec(),
        };
        let r = match run_sweep(&spec) {
            Ok(r) => r,
            Err(spin1_dimer::Error::NonFinite { quantity: "partition_function", .. }) => {
                // only Z itself may leave the f64 range
                let spec = SweepSpec { outputs: vec![Output::PartitionFunction], ..spec.clone() };
                prop_assert!(spec.points().iter().any(|q| ThermalEnsemble::new(q).unwrap().log_z() > 709.0));
                run_sweep(&SweepSpec { outputs: Output::ALL.into_iter().filter(|&o| o != Output::PartitionFunction).collect(), ..spec }).unwrap()
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(r.rows.len(), steps);
        prop_assert!(r.rows.windows(2).all(|w| w[0].params.tau <= w[1].params.tau));
        prop_assert_eq!(r.rows[0].params.tau, p.tau);
        prop_assert_eq!(r.rows[steps - 1].params.tau, p.tau + width);
        prop_assert!(!r.to_csv_string().contains("NaN") && !r.to_csv_string().contains("inf"));
        let again = run_sweep(&SweepSpec { outputs: r.outputs.clone(), ..spec }).unwrap();
        prop_assert_eq!(again.to_csv_string(), r.to_csv_string());
    }

    #[test]
    fn cold_plateaus_never_step_down(gamma in 0.5..=10.0f64, omega in 0.5..=5.0f64, temp in 0.005..=0.05f64) {
        let stop = 2.0 * (omega + 3.0 * gamma);
        let spec = SweepSpec {
            variable: SweepVariable::Tau,
            start: 0.0,
            stop,
            steps: 801,
            fixed: ModelParams::new(0.0, gamma, omega, temp),
            outputs: vec![Output::Negativity],
        };
        let rank = |ph: Phase| match ph {
            Phase::N0 => 0,
            Phase::NHalf => 1,
            Phase::N1 => 2,
            Phase::Crossover => -1,
        };
        let ranks: Vec<i32> = run_sweep(&spec).unwrap().rows.iter().map(|r| rank(r.phase.unwrap())).filter(|&r| r >= 0).collect();
        prop_assert!(ranks.windows(2).all(|w| w[0] <= w[1]), "{ranks:?}");
        prop_assert_eq!(ranks.first(), Some(&0));
        prop_assert_eq!(ranks.last(), Some(&2));
    }
}

// The three tests below encode properties as they were originally phrased.
// Each one is false for this model or for f64 arithmetic; they are kept so the
// counterexamples can be reproduced with `cargo test -- --ignored`.

#[test]
#[ignore = "absolute 1e-10 is out of reach in f64 once the eigenvalue spread of A exceeds about 25"]
fn exponential_inverse_absolute_up_to_norm_50() {
    let a = SymMatrix::new(2, vec![0.0, 35.0, 35.0, 0.0]).unwrap();
    let prod = sym_expm(&a, 1.0).unwrap().as_matrix().matmul(sym_expm(&a, -1.0).unwrap().as_matrix()).unwrap();
    let err = prod.max_abs_diff(&Matrix::identity(2));
    assert!(err <= 1e-10, "|e^A e^-A - I| = {err:e}");
}

#[test]
#[ignore = "N dips to ~0.375 before the second crossing and passes through the 1/2 band again on the way up"]
fn cold_phase_labels_without_reentrance() {
    let spec = SweepSpec {
        variable: SweepVariable::Tau,
        start: 0.0,
        stop: 6.0,
        steps: 601,
        fixed: ModelParams::new(0.0, 1.0, 1.0, 0.05),
        outputs: vec![Output::Negativity],
    };
    let mut seq: Vec<Phase> = run_sweep(&spec).unwrap().rows.iter().map(|r| r.phase.unwrap()).collect();
    seq.dedup();
    assert_eq!(seq, vec![Phase::N0, Phase::Crossover, Phase::NHalf, Phase::Crossover, Phase::N1]);
}

#[test]
#[ignore = "at gamma=7, omega=1, T=0.6 the heat capacity has local minima at the crossings, flanked by maxima"]
fn heat_capacity_argmax_at_crossings() {
    let spec = SweepSpec {
        variable: SweepVariable::Tau,
        start: 0.0,
        stop: 30.0,
        steps: 3001,
        fixed: ModelParams::new(0.0, 7.0, 1.0, 0.6),
        outputs: vec![Output::HeatCapacity],
    };
    let rows = run_sweep(&spec).unwrap().rows;
    let argmax = |lo: f64, hi: f64| {
        rows.iter()
            .filter(|r| r.params.tau >= lo && r.params.tau <= hi)
            .max_by(|a, b| a.heat_capacity.unwrap().total_cmp(&b.heat_capacity.unwrap()))
            .unwrap()
            .params
            .tau
    };
    assert!((argmax(0.0, 2.0) - 0.5).abs() <= 0.5);
    assert!((argmax(20.0, 24.0) - 22.0).abs() <= 0.5, "argmax on [20, 24] at {}", argmax(20.0, 24.0));
}
