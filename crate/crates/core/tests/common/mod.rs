#![allow(dead_code)]

use qldpc_bp::bp::{Dist, PROBABILITY_FLOOR};
use qldpc_bp::{Pauli, PauliOperator, Sign, StabilizerCode, Syndrome};
use rand::Rng;

/// Index of the first edge of check `c` in the code's edge list.
pub fn check_offset(code: &StabilizerCode, c: usize) -> usize {
    (0..c).map(|d| code.check_degree(d)).sum()
}

/// Check-to-qubit messages of check `c` by summing over all `4^deg` local
/// error patterns and keeping those whose overall commutation with the check
/// matches the syndrome bit.
pub fn naive_check_update(
    code: &StabilizerCode,
    c: usize,
    incoming: &[Dist],
    syndrome: Sign,
) -> Vec<Dist> {
    let edges = code.check_edges(c);
    let deg = edges.len();
    assert_eq!(incoming.len(), deg);
    let mut out = vec![[0.0; 4]; deg];
    for pattern in 0..4usize.pow(deg as u32) {
        let local: Vec<usize> = (0..deg).map(|i| (pattern >> (2 * i)) & 3).collect();
        let mut anticommuting = 0;
        for (i, e) in edges.iter().enumerate() {
            if Pauli::from_index(local[i]).commute(e.label) == Sign::Minus {
                anticommuting += 1;
            }
        }
        if Sign::from_parity(anticommuting % 2 == 1) != syndrome {
            continue;
        }
        for i in 0..deg {
            let weight: f64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| incoming[j][local[j]])
                .product();
            out[i][local[i]] += weight;
        }
    }
    for m in &mut out {
        let sum: f64 = m.iter().sum();
        m.iter_mut().for_each(|v| *v /= sum);
    }
    out
}

pub fn normalize_with_floor(m: &mut Dist) {
    let sum: f64 = m.iter().sum();
    m.iter_mut().for_each(|v| *v /= sum);
    if m.iter().any(|&v| v < PROBABILITY_FLOOR) {
        m.iter_mut().for_each(|v| *v = v.max(PROBABILITY_FLOOR));
        let sum: f64 = m.iter().sum();
        m.iter_mut().for_each(|v| *v /= sum);
    }
}

pub fn random_dist(rng: &mut impl Rng) -> Dist {
    let mut d = [0.0; 4].map(|_| rng.gen_range(0.01..1.0));
    let sum: f64 = d.iter().sum();
    d.iter_mut().for_each(|v| *v /= sum);
    d
}

pub fn random_pauli_operator(n: usize, rng: &mut impl Rng) -> PauliOperator {
    let paulis: Vec<Pauli> = (0..n)
        .map(|_| Pauli::from_index(rng.gen_range(0..4)))
        .collect();
    PauliOperator::from_paulis(&paulis)
}

/// A random non-identity Pauli string of the given weight on `n >= weight` qubits.
pub fn random_check(n: usize, weight: usize, rng: &mut impl Rng) -> PauliOperator {
    let mut paulis = vec![Pauli::I; n];
    let mut placed = 0;
    while placed < weight {
        let q = rng.gen_range(0..n);
        if paulis[q] == Pauli::I {
            paulis[q] = Pauli::from_index(rng.gen_range(1..4));
            placed += 1;
        }
    }
    PauliOperator::from_paulis(&paulis)
}

pub fn random_syndrome(m: usize, rng: &mut impl Rng) -> Syndrome {
    Syndrome::from_flips(&(0..m).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
}

pub fn max_abs_diff(a: &Dist, b: &Dist) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
