//! Phase-free Pauli operators in the binary symplectic representation.
//!
//! An `n`-qubit operator is stored as two bit-packed indicator vectors: the
//! `x` part is set where the factor is `X` or `Y`, the `z` part where it is
//! `Z` or `Y`. Global phases are never tracked, so multiplication is plain XOR.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A single-qubit Pauli matrix, modulo phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// All four values in the canonical order `I < X < Y < Z`.
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Position in `Pauli::ALL`; also the index into probability 4-vectors.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    /// Commutation sign of two single-qubit Paulis.
    pub fn commute(self, other: Pauli) -> Sign {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        Sign::from_parity((ax & bz) ^ (az & bx))
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl Mul for Pauli {
    type Output = Pauli;

    fn mul(self, rhs: Pauli) -> Pauli {
        let (ax, az) = self.bits();
        let (bx, bz) = rhs.bits();
        Pauli::from_bits(ax ^ bx, az ^ bz)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A commutation sign: `Plus` when two operators commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() != rhs.is_minus())
    }
}

/// An `n`-qubit Pauli operator modulo phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut op = Self::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            op.set(q, p);
        }
        op
    }

    /// Builds an operator from indicator vectors; both slices must have length `n`.
    pub fn from_bits(x_part: &[bool], z_part: &[bool]) -> Result<Self> {
        if x_part.len() != z_part.len() {
            return Err(Error::LengthMismatch {
                left: x_part.len(),
                right: z_part.len(),
            });
        }
        let mut op = Self::identity(x_part.len());
        for q in 0..x_part.len() {
            op.set(q, Pauli::from_bits(x_part[q], z_part[q]));
        }
        Ok(op)
    }

    /// Operator acting as `p` on the listed qubits and trivially elsewhere.
    pub fn on_support(n: usize, p: Pauli, qubits: &[usize]) -> Self {
        let mut op = Self::identity(n);
        for &q in qubits {
            op.set(q, p);
        }
        op
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        Self::on_support(n, p, &[qubit])
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD, q % WORD);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD, q % WORD);
        let (px, pz) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((px as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((pz as u64) << b);
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_part(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.get(q).bits().0).collect()
    }

    pub fn z_part(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.get(q).bits().1).collect()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Parity of the symplectic inner product; `true` when the operators anticommute.
    pub(crate) fn anticommutes_unchecked(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for i in 0..self.x.len() {
            acc ^= (self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i]);
        }
        acc.count_ones() % 2 == 1
    }

    pub fn commute(&self, other: &Self) -> Result<Sign> {
        self.check_len(other)?;
        Ok(Sign::from_parity(self.anticommutes_unchecked(other)))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.commute(other)? == Sign::Plus)
    }

    /// Product up to phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn mul_assign_unchecked(&mut self, other: &Self) {
        for i in 0..self.x.len() {
            self.x[i] ^= other.x[i];
            self.z[i] ^= other.z[i];
        }
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Qubits where the factor is not the identity, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(move |q| self.get(q))
    }

    /// The operator as a length-`2n` bit row: `x` bits followed by `z` bits.
    pub(crate) fn symplectic_row(&self) -> Vec<u64> {
        let mut row = vec![0u64; words_for(2 * self.n)];
        for q in 0..self.n {
            let (x, z) = self.get(q).bits();
            if x {
                row[q / WORD] |= 1 << (q % WORD);
            }
            if z {
                let j = q + self.n;
                row[j / WORD] |= 1 << (j % WORD);
            }
        }
        row
    }

    pub(crate) fn from_symplectic_row(n: usize, row: &[u64]) -> Self {
        let bit = |j: usize| (row[j / WORD] >> (j % WORD)) & 1 == 1;
        let mut op = Self::identity(n);
        for q in 0..n {
            op.set(q, Pauli::from_bits(bit(q), bit(q + n)));
        }
        op
    }

    /// Packs the operator into an integer with two bits per qubit (`x` high, `z` low),
    /// qubit 0 most significant. Used for exhaustive enumeration of small operators.
    pub fn to_index(&self) -> u64 {
        assert!(self.n <= 32);
        let mut idx = 0u64;
        for p in self.iter() {
            let (x, z) = p.bits();
            idx = (idx << 2) | ((x as u64) << 1) | z as u64;
        }
        idx
    }

    pub fn from_index(n: usize, idx: u64) -> Self {
        let mut op = Self::identity(n);
        for q in 0..n {
            let shift = 2 * (n - 1 - q);
            let bits = (idx >> shift) & 3;
            op.set(q, Pauli::from_bits(bits & 2 != 0, bits & 1 != 0));
        }
        op
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let paulis = s
            .chars()
            .enumerate()
            .map(|(position, ch)| {
                Pauli::from_char(ch).ok_or(Error::InvalidPauliChar { ch, position })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_paulis(&paulis))
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn op(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_table() {
        use Pauli::*;
        let table = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                assert_eq!(a.commute(b).value(), table[a.index()][b.index()], "{a}{b}");
            }
        }
        assert_eq!(X.commute(X), Sign::Plus);
        assert_eq!(X.commute(Z), Sign::Minus);
        assert_eq!(I.commute(Y), Sign::Plus);
    }

    #[test]
    fn commute_examples() {
        assert_eq!(op("XZZXI").commute(&op("IXZZX")).unwrap(), Sign::Plus);
        assert_eq!(op("IX").commute(&op("ZZ")).unwrap(), Sign::Minus);
        assert_eq!(
            op("XYZ").commute(&PauliOperator::identity(3)).unwrap(),
            Sign::Plus
        );
        assert_eq!(
            op("XY").commute(&op("X")),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(op("XI").multiply(&op("IX")).unwrap(), op("XX"));
        assert_eq!(op("XX").multiply(&op("IX")).unwrap(), op("XI"));
        assert_eq!(op("Y").multiply(&op("X")).unwrap(), op("Z"));
        assert!(op("X").multiply(&op("XX")).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(op("XIIY").weight(), 2);
        assert_eq!(op("IIII").weight(), 0);
        assert_eq!(op("XZZXI").weight(), 4);
    }

    #[test]
    fn parse_and_render() {
        let e = op("XIIY");
        assert_eq!(e.x_part(), vec![true, false, false, true]);
        assert_eq!(e.z_part(), vec![false, false, false, true]);
        assert!(op("IIII").is_identity());
        assert_eq!(op("XZZXI").to_string(), "XZZXI");
        assert_eq!("".parse::<PauliOperator>(), Err(Error::EmptyPauli));
        assert_eq!(
            "XQ".parse::<PauliOperator>(),
            Err(Error::InvalidPauliChar {
                ch: 'Q',
                position: 1
            })
        );
        assert!("xz".parse::<PauliOperator>().is_err());
    }

    #[test]
    fn wide_operators_cross_word_boundaries() {
        let mut a = PauliOperator::identity(130);
        let mut b = PauliOperator::identity(130);
        a.set(64, Pauli::X);
        a.set(129, Pauli::Z);
        b.set(129, Pauli::X);
        assert_eq!(a.weight(), 2);
        assert_eq!(a.commute(&b).unwrap(), Sign::Minus);
        assert_eq!(a.support(), vec![64, 129]);
        let row = a.symplectic_row();
        assert_eq!(PauliOperator::from_symplectic_row(130, &row), a);
    }

    #[test]
    fn index_encoding_roundtrip() {
        let e = op("XYZI");
        assert_eq!(PauliOperator::from_index(4, e.to_index()), e);
        assert_eq!(op("IIX").to_index(), 0b10);
    }

    fn table_product(a: &PauliOperator, b: &PauliOperator) -> i8 {
        a.iter()
            .zip(b.iter())
            .map(|(p, q)| p.commute(q).value())
            .product()
    }

    #[test]
    fn symplectic_parity_matches_table_product() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=8);
            let a: Vec<Pauli> = (0..n)
                .map(|_| Pauli::from_index(rng.gen_range(0..4)))
                .collect();
            let b: Vec<Pauli> = (0..n)
                .map(|_| Pauli::from_index(rng.gen_range(0..4)))
                .collect();
            let (a, b) = (
                PauliOperator::from_paulis(&a),
                PauliOperator::from_paulis(&b),
            );
            assert_eq!(a.commute(&b).unwrap().value(), table_product(&a, &b));
        }
    }

    fn arb_pair(max_n: usize) -> impl Strategy<Value = (String, String, String)> {
        (1..=max_n).prop_flat_map(|n| {
            let s = || {
                proptest::collection::vec(prop_oneof!["I", "X", "Y", "Z"], n)
                    .prop_map(|v| v.concat())
            };
            (s(), s(), s())
        })
    }

    proptest! {
        #[test]
        fn algebraic_laws((a, b, c) in arb_pair(90)) {
            let (a, b, c) = (op(&a), op(&b), op(&c));
            prop_assert_eq!(a.commute(&b).unwrap(), b.commute(&a).unwrap());
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(ab.commute(&c).unwrap(), a.commute(&c).unwrap() * b.commute(&c).unwrap());
            prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
            prop_assert!(a.multiply(&a).unwrap().is_identity());
            prop_assert_eq!(op(&a.to_string()), a);
        }
    }
}
