//! Brute-force reference decoders for small codes.
//!
//! Everything here enumerates exhaustively and refuses instances beyond its
//! size bounds rather than approximating.

use serde::Serialize;

use crate::bp::{ChannelPrior, Dist};
use crate::code::{StabilizerCode, Syndrome};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

/// Largest `n` accepted by [`exact_marginals`] and [`exact_map`].
pub const MAX_ENUMERATION_QUBITS: usize = 12;
/// Largest `m` accepted by [`coset_decode`].
pub const MAX_COSET_CHECKS: usize = 16;
/// Largest `k` accepted by [`coset_decode`].
pub const MAX_COSET_LOGICALS: usize = 4;

/// An operator on at most 32 qubits as `(x, z)` bit masks, bit `q` for qubit `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Masks {
    x: u32,
    z: u32,
}

impl Masks {
    fn of(op: &PauliOperator) -> Self {
        let mut m = Masks { x: 0, z: 0 };
        for (q, p) in op.iter().enumerate() {
            let (x, z) = p.bits();
            m.x |= (x as u32) << q;
            m.z |= (z as u32) << q;
        }
        m
    }

    fn mul(self, other: Masks) -> Masks {
        Masks {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    fn anticommutes(self, other: Masks) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 1
    }

    fn pauli(self, q: usize) -> Pauli {
        Pauli::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    fn probability(self, prior: &ChannelPrior) -> f64 {
        (0..prior.len())
            .map(|q| prior.qubit(q)[self.pauli(q).index()])
            .product()
    }

    fn to_operator(self, n: usize) -> PauliOperator {
        PauliOperator::from_paulis(&(0..n).map(|q| self.pauli(q)).collect::<Vec<_>>())
    }

    #[cfg(test)]
    fn from_enumeration_index(n: usize, idx: u64) -> Masks {
        let op = PauliOperator::from_index(n, idx);
        Masks::of(&op)
    }
}

fn check_inputs(code: &StabilizerCode, prior: &ChannelPrior, syndrome: &Syndrome) -> Result<()> {
    if prior.len() != code.num_qubits() {
        return Err(Error::LengthMismatch {
            left: code.num_qubits(),
            right: prior.len(),
        });
    }
    code.check_syndrome_len(syndrome)
}

fn enumeration_guard(code: &StabilizerCode) -> Result<()> {
    if code.num_qubits() > MAX_ENUMERATION_QUBITS {
        return Err(Error::SizeBound(format!(
            "{} qubits exceeds the enumeration limit of {MAX_ENUMERATION_QUBITS}",
            code.num_qubits()
        )));
    }
    Ok(())
}

/// Visits every operator consistent with the syndrome, in enumeration order.
fn for_each_consistent(code: &StabilizerCode, syndrome: &Syndrome, mut f: impl FnMut(u64, Masks)) {
    let n = code.num_qubits();
    let checks: Vec<Masks> = code.checks().iter().map(Masks::of).collect();
    for idx in 0..(1u64 << (2 * n)) {
        let e = Masks::from_enumeration_index_fast(n, idx);
        if checks
            .iter()
            .enumerate()
            .all(|(c, s)| s.anticommutes(e) == syndrome.is_flipped(c))
        {
            f(idx, e);
        }
    }
}

impl Masks {
    /// Enumeration order: the two-bit symplectic code `(x, z)` of qubit 0 is
    /// the most significant digit.
    fn from_enumeration_index_fast(n: usize, idx: u64) -> Masks {
        let mut m = Masks { x: 0, z: 0 };
        for q in 0..n {
            let bits = (idx >> (2 * (n - 1 - q))) & 3;
            m.x |= ((bits >> 1) as u32) << q;
            m.z |= ((bits & 1) as u32) << q;
        }
        m
    }
}

/// `p_q(E_q | s)` for every qubit by summing over all consistent errors.
pub fn exact_marginals(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
) -> Result<Vec<Dist>> {
    check_inputs(code, prior, syndrome)?;
    enumeration_guard(code)?;
    let n = code.num_qubits();
    let mut marginals = vec![[0.0; 4]; n];
    let mut total = 0.0;
    for_each_consistent(code, syndrome, |_, e| {
        let p = e.probability(prior);
        total += p;
        for (q, m) in marginals.iter_mut().enumerate() {
            m[e.pauli(q).index()] += p;
        }
    });
    if total > 0.0 {
        marginals.iter_mut().flatten().for_each(|v| *v /= total);
    }
    Ok(marginals)
}

/// A most likely error consistent with the syndrome; ties go to the earliest
/// operator in enumeration order.
pub fn exact_map(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
) -> Result<PauliOperator> {
    check_inputs(code, prior, syndrome)?;
    enumeration_guard(code)?;
    let mut best: Option<(f64, Masks)> = None;
    for_each_consistent(code, syndrome, |_, e| {
        let p = e.probability(prior);
        if best.is_none_or(|(bp, _)| p > bp) {
            best = Some((p, e));
        }
    });
    let (_, e) = best.expect("the pure error is always consistent");
    Ok(e.to_operator(code.num_qubits()))
}

/// Probability mass of every logical class given a syndrome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetTable {
    pub num_logical: usize,
    /// `masses[L]` is `p(L | s)`, indexed as in [`StabilizerCode::logical_class`].
    pub masses: Vec<f64>,
    /// Unnormalized total, i.e. `p(s)`.
    pub syndrome_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetDecode {
    /// Most likely logical class; ties go to the lowest index.
    pub class: u64,
    /// `𝔱(s) · L*`.
    pub recovery: PauliOperator,
    pub table: CosetTable,
}

/// Degenerate maximum-likelihood decoding: sums `p(S · 𝔱(s) · L)` over the
/// whole stabilizer group for every logical class `L`.
pub fn coset_decode(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
) -> Result<CosetDecode> {
    check_inputs(code, prior, syndrome)?;
    let (m, k) = (code.num_checks(), code.num_logical());
    if m > MAX_COSET_CHECKS || k > MAX_COSET_LOGICALS {
        return Err(Error::SizeBound(format!(
            "coset enumeration needs m <= {MAX_COSET_CHECKS} and k <= {MAX_COSET_LOGICALS}, got m = {m}, k = {k}"
        )));
    }
    let n = code.num_qubits();
    let pure = Masks::of(&code.pure_error_for_syndrome(syndrome)?);
    let checks: Vec<Masks> = code.checks().iter().map(Masks::of).collect();
    let classes = 1u64 << (2 * k);
    let mut masses = Vec::with_capacity(classes as usize);
    for class in 0..classes {
        let base = pure.mul(Masks::of(&code.logical_operator(class)));
        // Gray-code walk over all 2^m products of checks.
        let mut e = base;
        let mut mass = e.probability(prior);
        for i in 1u64..(1 << m) {
            e = e.mul(checks[i.trailing_zeros() as usize]);
            mass += e.probability(prior);
        }
        masses.push(mass);
    }
    let total: f64 = masses.iter().sum();
    if total > 0.0 {
        masses.iter_mut().for_each(|v| *v /= total);
    }
    let class = (0..classes).fold(0u64, |best, c| {
        if masses[c as usize] > masses[best as usize] {
            c
        } else {
            best
        }
    });
    let recovery = pure
        .mul(Masks::of(&code.logical_operator(class)))
        .to_operator(n);
    Ok(CosetDecode {
        class,
        recovery,
        table: CosetTable {
            num_logical: k,
            masses,
            syndrome_probability: total,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::builtin;

    #[test]
    fn toy_marginals_are_symmetric() {
        let toy = builtin("two_qubit_toy").unwrap();
        let prior = ChannelPrior::depolarizing(2, 0.1).unwrap();
        let m = exact_marginals(&toy, &prior, &"+-".parse().unwrap()).unwrap();
        assert_eq!(m[0], m[1]);
        // Consistent errors: XI, IX (weight 1) and YZ, ZY (weight 2).
        let (w1, w2) = (0.9 * 0.1 / 3.0, (0.1f64 / 3.0).powi(2));
        let z = 2.0 * w1 + 2.0 * w2;
        let expected = [w1 / z, w1 / z, w2 / z, w2 / z];
        for i in 0..4 {
            assert!((m[0][i] - expected[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn trivial_syndrome_concentrates_on_identity() {
        let five = builtin("five_qubit").unwrap();
        let prior = ChannelPrior::depolarizing(5, 1e-4).unwrap();
        let m = exact_marginals(&five, &prior, &Syndrome::trivial(4)).unwrap();
        assert!(m.iter().all(|d| d[0] > 0.999));
        assert!(exact_map(&five, &prior, &Syndrome::trivial(4))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn map_examples() {
        let toy = builtin("two_qubit_toy").unwrap();
        let prior = ChannelPrior::depolarizing(2, 0.1).unwrap();
        let s = "+-".parse().unwrap();
        let e = exact_map(&toy, &prior, &s).unwrap();
        assert!(["XI", "IX"].contains(&e.to_string().as_str()));
        assert_eq!(toy.syndrome(&e).unwrap(), s);
        let five = builtin("five_qubit").unwrap();
        let prior = ChannelPrior::depolarizing(5, 0.05).unwrap();
        for idx in 0..16 {
            let s = Syndrome::from_index(4, idx);
            assert_eq!(
                five.syndrome(&exact_map(&five, &prior, &s).unwrap())
                    .unwrap(),
                s
            );
        }
    }

    #[test]
    fn toy_coset_decode() {
        let toy = builtin("two_qubit_toy").unwrap();
        let prior = ChannelPrior::depolarizing(2, 0.1).unwrap();
        let d = coset_decode(&toy, &prior, &"+-".parse().unwrap()).unwrap();
        assert_eq!(d.class, 0);
        assert_eq!(d.table.masses, vec![1.0]);
        assert!(["XI", "IX", "YZ", "ZY"].contains(&d.recovery.to_string().as_str()));
    }

    #[test]
    fn coset_trivial_syndrome() {
        let five = builtin("five_qubit").unwrap();
        let prior = ChannelPrior::depolarizing(5, 0.01).unwrap();
        let d = coset_decode(&five, &prior, &Syndrome::trivial(4)).unwrap();
        assert_eq!(d.class, 0);
        assert!(d.recovery.is_identity());
    }

    #[test]
    fn total_probability_sums_to_one() {
        let five = builtin("five_qubit").unwrap();
        let prior = ChannelPrior::depolarizing(5, 0.2).unwrap();
        let total: f64 = (0..16)
            .map(|i| {
                coset_decode(&five, &prior, &Syndrome::from_index(4, i))
                    .unwrap()
                    .table
                    .syndrome_probability
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn map_lies_in_a_heavy_coset() {
        let five = builtin("five_qubit").unwrap();
        let prior = ChannelPrior::depolarizing(5, 0.1).unwrap();
        for idx in 0..16 {
            let s = Syndrome::from_index(4, idx);
            let e = exact_map(&five, &prior, &s).unwrap();
            let d = coset_decode(&five, &prior, &s).unwrap();
            let class = five.logical_class(&e).unwrap() as usize;
            let single = prior.probability(&e) / d.table.syndrome_probability;
            assert!(d.table.masses[class] >= single - 1e-15);
        }
    }

    #[test]
    fn size_guards() {
        let big = StabilizerCode::new(vec!["ZZIIIIIIIIIII".parse().unwrap()]).unwrap();
        let prior = ChannelPrior::depolarizing(13, 0.1).unwrap();
        let s = Syndrome::trivial(1);
        assert!(matches!(
            exact_marginals(&big, &prior, &s),
            Err(Error::SizeBound(_))
        ));
        assert!(matches!(
            exact_map(&big, &prior, &s),
            Err(Error::SizeBound(_))
        ));
        // k = 12 logical qubits
        assert!(matches!(
            coset_decode(&big, &prior, &s),
            Err(Error::SizeBound(_))
        ));
    }

    #[test]
    fn enumeration_index_agrees_with_operator_encoding() {
        for idx in 0..256 {
            assert_eq!(
                Masks::from_enumeration_index(4, idx),
                Masks::from_enumeration_index_fast(4, idx)
            );
        }
    }
}
