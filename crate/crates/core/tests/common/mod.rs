//! Reference implementations used only by the integration tests. Nothing in
//! here calls into the library's spectrum, thermo or entanglement modules.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin1_dimer::basis::product_index;
use spin1_dimer::ModelParams;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point with tau, gamma, omega in `[-20, 20]` and `T` in `[0.05, 5]`.
pub fn random_point(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams::new(
        rng.random_range(-20.0..=20.0),
        rng.random_range(-20.0..=20.0),
        rng.random_range(-20.0..=20.0),
        rng.random_range(0.05..=5.0),
    )
}

/// `(j, m)` in the same order the library lists its coupled labels.
pub const LABELS: [(i32, i32); 9] = [(0, 0), (1, -1), (1, 0), (1, 1), (2, -2), (2, -1), (2, 0), (2, 1), (2, 2)];

/// Energy of `|j, m>` from the eigenvalue `x = (j(j+1) - 4)/2` of `S1·S2`.
pub fn energy(j: i32, m: i32, tau: f64, gamma: f64, omega: f64) -> f64 {
    let x = f64::from(j * (j + 1) - 4) / 2.0;
    omega * f64::from(m) + tau * x + gamma * x * x + (tau - gamma)
}

pub fn energies(p: &ModelParams) -> [f64; 9] {
    LABELS.map(|(j, m)| energy(j, m, p.tau, p.gamma, p.omega))
}

/// `ln Z` by a max-shifted sum of nine Boltzmann factors.
pub fn log_z(p: &ModelParams) -> f64 {
    let beta = 1.0 / p.temperature;
    let e = energies(p);
    let e0 = e.iter().copied().fold(f64::INFINITY, f64::min);
    -beta * e0 + e.iter().map(|&x| (-beta * (x - e0)).exp()).sum::<f64>().ln()
}

pub fn populations(p: &ModelParams) -> [f64; 9] {
    let beta = 1.0 / p.temperature;
    let e = energies(p);
    let e0 = e.iter().copied().fold(f64::INFINITY, f64::min);
    let w = e.map(|x| (-beta * (x - e0)).exp());
    let z: f64 = w.iter().sum();
    w.map(|x| x / z)
}

/// Coupled states written out by hand in the product basis `|s1, s2>`.
pub fn coupled_state(j: i32, m: i32) -> Vec<(i8, i8, f64)> {
    let r2 = 2f64.sqrt().recip();
    let r3 = 3f64.sqrt().recip();
    let r6 = 6f64.sqrt().recip();
    match (j, m) {
        (2, 2) => vec![(1, 1, 1.0)],
        (2, 1) => vec![(1, 0, r2), (0, 1, r2)],
        (2, 0) => vec![(1, -1, r6), (0, 0, 2.0 * r6), (-1, 1, r6)],
        (2, -1) => vec![(0, -1, r2), (-1, 0, r2)],
        (2, -2) => vec![(-1, -1, 1.0)],
        (1, 1) => vec![(1, 0, r2), (0, 1, -r2)],
        (1, 0) => vec![(1, -1, r2), (-1, 1, -r2)],
        (1, -1) => vec![(0, -1, r2), (-1, 0, -r2)],
        (0, 0) => vec![(1, -1, r3), (0, 0, -r3), (-1, 1, r3)],
        _ => unreachable!(),
    }
}

/// Thermal density matrix in the library's product-basis ordering.
pub fn density_matrix(p: &ModelParams) -> [[f64; 9]; 9] {
    let mut rho = [[0.0; 9]; 9];
    for ((j, m), w) in LABELS.iter().zip(populations(p)) {
        let v = coupled_state(*j, *m);
        for &(a1, a2, ca) in &v {
            for &(b1, b2, cb) in &v {
                rho[product_index(a1, a2)][product_index(b1, b2)] += w * ca * cb;
            }
        }
    }
    rho
}

/// Transposes the second spin's indices.
pub fn partial_transpose(rho: &[[f64; 9]; 9]) -> [[f64; 9]; 9] {
    let spins = [-1i8, 0, 1];
    let mut sigma = [[0.0; 9]; 9];
    for &a in &spins {
        for &b in &spins {
            for &c in &spins {
                for &d in &spins {
                    sigma[product_index(a, b)][product_index(c, d)] = rho[product_index(a, d)][product_index(c, b)];
                }
            }
        }
    }
    sigma
}

pub fn max_abs_diff(a: &[[f64; 9]; 9], b: impl Fn(usize, usize) -> f64) -> f64 {
    let mut d: f64 = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            d = d.max((x - b(i, j)).abs());
        }
    }
    d
}
