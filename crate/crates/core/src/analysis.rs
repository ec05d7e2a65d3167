//! Tanner graph analytics: short loops, degree distributions and ensemble rate.

use serde::Serialize;

use crate::code::StabilizerCode;

/// Two checks sharing at least two qubits, i.e. closing a 4-loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourLoop {
    pub first: usize,
    pub second: usize,
    pub shared_qubits: Vec<usize>,
}

/// All unordered check pairs that share two or more qubits, in lexicographic order.
pub fn four_loop_census(code: &StabilizerCode) -> Vec<FourLoop> {
    let supports: Vec<Vec<usize>> = (0..code.num_checks())
        .map(|c| code.check_neighbors(c).collect())
        .collect();
    let mut loops = Vec::new();
    for c in 0..supports.len() {
        for d in c + 1..supports.len() {
            let shared = sorted_intersection(&supports[c], &supports[d]);
            if shared.len() >= 2 {
                loops.push(FourLoop {
                    first: c,
                    second: d,
                    shared_qubits: shared,
                });
            }
        }
    }
    loops
}

pub(crate) fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Edge-perspective degree polynomial `γ(x) = Σ γ_i x^(i-1)`.
///
/// `coefficients[i]` is the fraction of edges attached to nodes of degree `i`
/// (index 0 is always zero).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreePolynomial {
    pub coefficients: Vec<f64>,
}

impl DegreePolynomial {
    /// The monomial `x^(degree-1)`, i.e. a regular graph of the given node degree.
    pub fn regular(degree: usize) -> Self {
        let mut coefficients = vec![0.0; degree + 1];
        coefficients[degree] = 1.0;
        Self { coefficients }
    }

    fn from_degrees(degrees: impl Iterator<Item = usize>) -> Self {
        let mut counts = Vec::new();
        let mut total = 0usize;
        for d in degrees {
            if counts.len() <= d {
                counts.resize(d + 1, 0usize);
            }
            counts[d] += d;
            total += d;
        }
        Self {
            coefficients: counts
                .iter()
                .map(|&c| c as f64 / total.max(1) as f64)
                .collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        // Horner over x^(i-1), highest degree first.
        self.coefficients
            .iter()
            .skip(1)
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }

    /// `∫₀¹ γ(x) dx = Σ γ_i / i`.
    pub fn integral(&self) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c / i as f64)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeDistribution {
    /// Qubit side.
    pub lambda: DegreePolynomial,
    /// Check side.
    pub rho: DegreePolynomial,
    /// Qubits of degree zero; they carry no edges and do not enter `lambda`.
    pub isolated_qubits: Vec<usize>,
}

pub fn degree_distribution(code: &StabilizerCode) -> DegreeDistribution {
    let isolated_qubits = code.isolated_qubits();
    if !isolated_qubits.is_empty() {
        log::warn!("degree distribution ignores isolated qubits {isolated_qubits:?}");
    }
    DegreeDistribution {
        lambda: DegreePolynomial::from_degrees(
            (0..code.num_qubits()).map(|q| code.qubit_degree(q)),
        ),
        rho: DegreePolynomial::from_degrees((0..code.num_checks()).map(|c| code.check_degree(c))),
        isolated_qubits,
    }
}

/// `R = 1 - ∫ρ / ∫λ`. Both polynomials must satisfy `γ(1) = 1`.
pub fn design_rate(lambda: &DegreePolynomial, rho: &DegreePolynomial) -> f64 {
    for (name, p) in [("lambda", lambda), ("rho", rho)] {
        let at_one = p.eval(1.0);
        assert!(
            (at_one - 1.0).abs() <= 1e-12,
            "{name}(1) = {at_one}, expected 1"
        );
    }
    1.0 - rho.integral() / lambda.integral()
}

/// Whether `δ λ(1 - ρ(1 - x)) < x` holds on `grid` evenly spaced interior points of `(0, δ)`.
pub fn bec_threshold_check(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    erasure: f64,
    grid: usize,
) -> bool {
    assert!(
        erasure > 0.0 && erasure < 1.0,
        "erasure probability must lie in (0, 1)"
    );
    assert!(grid >= 100, "grid must have at least 100 points");
    (1..=grid).all(|i| {
        let x = erasure * i as f64 / (grid + 1) as f64;
        erasure * lambda.eval(1.0 - rho.eval(1.0 - x)) < x
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliOperator;

    fn code(checks: &[&str]) -> StabilizerCode {
        StabilizerCode::new(
            checks
                .iter()
                .map(|s| s.parse::<PauliOperator>().unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn census_examples() {
        let toy = code(&["XX", "ZZ"]);
        assert_eq!(
            four_loop_census(&toy),
            vec![FourLoop {
                first: 0,
                second: 1,
                shared_qubits: vec![0, 1]
            }]
        );
        let five = code(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
        let loops = four_loop_census(&five);
        // Every pair of distinct weight-4 supports on 5 qubits shares 3 qubits.
        assert_eq!(loops.len(), 6);
        assert!(loops.iter().all(|l| l.shared_qubits.len() == 3));
        assert!(four_loop_census(&code(&["XXX"])).is_empty());
    }

    #[test]
    fn toy_degree_distribution() {
        let d = degree_distribution(&code(&["XX", "ZZ"]));
        assert_eq!(d.lambda, DegreePolynomial::regular(2));
        assert_eq!(d.rho, DegreePolynomial::regular(2));
        assert_eq!(design_rate(&d.lambda, &d.rho), 0.0);
    }

    #[test]
    fn regular_rate() {
        let r = design_rate(&DegreePolynomial::regular(3), &DegreePolynomial::regular(6));
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn design_rate_matches_code_rate() {
        for checks in [
            &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"][..],
            &["ZZI", "IZZ"],
            &["XXXX", "ZZZZ"],
            &["ZZ"],
        ] {
            let c = code(checks);
            let d = degree_distribution(&c);
            assert!((design_rate(&d.lambda, &d.rho) - c.rate()).abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_qubits_are_reported() {
        let d = degree_distribution(&code(&["ZZI"]));
        assert_eq!(d.isolated_qubits, vec![2]);
        assert_eq!(d.lambda, DegreePolynomial::regular(1));
    }

    /// Direct evaluation of the inequality with the polynomials written out.
    fn oracle_36(erasure: f64, grid: usize) -> bool {
        (1..=grid).all(|i| {
            let x = erasure * i as f64 / (grid + 1) as f64;
            let inner = 1.0 - (1.0 - x).powi(5);
            erasure * inner * inner < x
        })
    }

    #[test]
    fn bec_threshold_for_3_6_ensemble() {
        let (l, r) = (DegreePolynomial::regular(3), DegreePolynomial::regular(6));
        assert!(oracle_36(0.4, 1000));
        assert!(!oracle_36(0.5, 1000));
        assert!(bec_threshold_check(&l, &r, 0.4, 1000));
        assert!(!bec_threshold_check(&l, &r, 0.5, 1000));
        assert!(bec_threshold_check(&l, &r, 1e-6, 100));
        // Known threshold of the (3,6) ensemble sits near 0.4294.
        assert!(bec_threshold_check(&l, &r, 0.428, 10_000));
        assert!(!bec_threshold_check(&l, &r, 0.431, 10_000));
    }
}
