//! Stabilizer codes, their decorated Tanner graphs and symplectic structure.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf2::{get_bit, RowEchelon};
use crate::pauli::{Pauli, PauliOperator, Sign};

/// A syndrome: one commutation sign per check.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    signs: Vec<Sign>,
}

impl Syndrome {
    pub fn trivial(m: usize) -> Self {
        Self {
            signs: vec![Sign::Plus; m],
        }
    }

    pub fn from_signs(signs: Vec<Sign>) -> Self {
        Self { signs }
    }

    /// `true` entries are `-1` (anticommuting) bits.
    pub fn from_flips(flips: &[bool]) -> Self {
        Self {
            signs: flips.iter().map(|&f| Sign::from_parity(f)).collect(),
        }
    }

    /// Syndrome number `index` under the ordering where check `c` is bit `c` of the index.
    pub fn from_index(m: usize, index: u64) -> Self {
        Self::from_flips(&(0..m).map(|c| (index >> c) & 1 == 1).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn sign(&self, c: usize) -> Sign {
        self.signs[c]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn is_flipped(&self, c: usize) -> bool {
        self.signs[c].is_minus()
    }

    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|s| *s == Sign::Plus)
    }

    /// Check indices with a `-1` bit, ascending.
    pub fn flipped(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.is_flipped(c)).collect()
    }

    /// Component-wise product.
    pub fn combine(&self, other: &Syndrome) -> Syndrome {
        assert_eq!(self.len(), other.len());
        Syndrome {
            signs: self
                .signs
                .iter()
                .zip(&other.signs)
                .map(|(a, b)| *a * *b)
                .collect(),
        }
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({self})")
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    /// Parses a string over `{+, -}`.
    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|ch| match ch {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::InvalidSyndrome(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if signs.is_empty() {
            return Err(Error::InvalidSyndrome("empty syndrome".into()));
        }
        Ok(Self { signs })
    }
}

/// One edge of the decorated Tanner graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub check: usize,
    pub qubit: usize,
    /// The check's Pauli factor on this qubit.
    pub label: Pauli,
}

/// Where an operator lands once its syndrome and stabilizer part are factored out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualClass {
    Stabilizer,
    Logical,
    Detectable,
}

/// Pure errors and logical operators completing the checks to a canonical generating set.
#[derive(Debug, Clone)]
pub struct CanonicalGenerators {
    /// `pure_errors[c]` anticommutes with check `c` only.
    pub pure_errors: Vec<PauliOperator>,
    pub logical_x: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
}

impl CanonicalGenerators {
    pub fn num_logical(&self) -> usize {
        self.logical_x.len()
    }
}

/// A validated stabilizer code.
///
/// Edges are stored check-major: the edges of check `c` occupy
/// `check_offsets[c]..check_offsets[c + 1]` in qubit order.
pub struct StabilizerCode {
    n: usize,
    checks: Vec<PauliOperator>,
    edges: Vec<Edge>,
    check_offsets: Vec<usize>,
    qubit_edges: Vec<Vec<usize>>,
    stabilizer_span: RowEchelon,
    canonical: OnceLock<CanonicalGenerators>,
}

impl Clone for StabilizerCode {
    fn clone(&self) -> Self {
        let canonical = OnceLock::new();
        if let Some(c) = self.canonical.get() {
            let _ = canonical.set(c.clone());
        }
        Self {
            n: self.n,
            checks: self.checks.clone(),
            edges: self.edges.clone(),
            check_offsets: self.check_offsets.clone(),
            qubit_edges: self.qubit_edges.clone(),
            stabilizer_span: self.stabilizer_span.clone(),
            canonical,
        }
    }
}

impl fmt::Debug for StabilizerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StabilizerCode")
            .field("n", &self.n)
            .field("m", &self.checks.len())
            .field("checks", &self.checks)
            .finish()
    }
}

impl StabilizerCode {
    /// Validates the checks (uniform length, pairwise commuting, independent)
    /// and builds the Tanner graph.
    pub fn new(checks: Vec<PauliOperator>) -> Result<Self> {
        let first = checks.first().ok_or(Error::NoChecks)?;
        let n = first.num_qubits();
        for c in &checks {
            if c.num_qubits() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: c.num_qubits(),
                });
            }
        }
        for i in 0..checks.len() {
            for j in i + 1..checks.len() {
                if checks[i].anticommutes_unchecked(&checks[j]) {
                    return Err(Error::NonCommutingChecks {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        let rows: Vec<Vec<u64>> = checks.iter().map(PauliOperator::symplectic_row).collect();
        let stabilizer_span = RowEchelon::new(&rows, 2 * n);
        if let Some(&index) = stabilizer_span.dependent_rows().first() {
            return Err(Error::DependentCheck { index });
        }

        let mut edges = Vec::new();
        let mut check_offsets = vec![0];
        let mut qubit_edges = vec![Vec::new(); n];
        for (c, check) in checks.iter().enumerate() {
            for q in check.support() {
                qubit_edges[q].push(edges.len());
                edges.push(Edge {
                    check: c,
                    qubit: q,
                    label: check.get(q),
                });
            }
            check_offsets.push(edges.len());
        }
        let code = Self {
            n,
            checks,
            edges,
            check_offsets,
            qubit_edges,
            stabilizer_span,
            canonical: OnceLock::new(),
        };
        let isolated = code.isolated_qubits();
        if !isolated.is_empty() {
            log::warn!("qubits {isolated:?} are not acted on by any check");
        }
        Ok(code)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Number of encoded qubits, `n - m`.
    pub fn num_logical(&self) -> usize {
        self.n - self.checks.len()
    }

    pub fn rate(&self) -> f64 {
        self.num_logical() as f64 / self.n as f64
    }

    pub fn checks(&self) -> &[PauliOperator] {
        &self.checks
    }

    pub fn check(&self, c: usize) -> &PauliOperator {
        &self.checks[c]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn check_edges(&self, c: usize) -> &[Edge] {
        &self.edges[self.check_offsets[c]..self.check_offsets[c + 1]]
    }

    pub(crate) fn check_edge_range(&self, c: usize) -> std::ops::Range<usize> {
        self.check_offsets[c]..self.check_offsets[c + 1]
    }

    /// Edge indices incident to qubit `q`, in check order.
    pub fn qubit_edges(&self, q: usize) -> &[usize] {
        &self.qubit_edges[q]
    }

    /// Qubits acted on by check `c`, ascending.
    pub fn check_neighbors(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.check_edges(c).iter().map(|e| e.qubit)
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_offsets[c + 1] - self.check_offsets[c]
    }

    pub fn qubit_degree(&self, q: usize) -> usize {
        self.qubit_edges[q].len()
    }

    pub fn isolated_qubits(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.qubit_edges[q].is_empty())
            .collect()
    }

    fn check_len(&self, e: &PauliOperator) -> Result<()> {
        if e.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: e.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn syndrome(&self, e: &PauliOperator) -> Result<Syndrome> {
        self.check_len(e)?;
        Ok(Syndrome::from_signs(
            self.checks
                .iter()
                .map(|s| Sign::from_parity(s.anticommutes_unchecked(e)))
                .collect(),
        ))
    }

    pub fn check_syndrome_len(&self, s: &Syndrome) -> Result<()> {
        if s.len() != self.num_checks() {
            return Err(Error::InvalidSyndrome(format!(
                "expected {} bits, got {}",
                self.num_checks(),
                s.len()
            )));
        }
        Ok(())
    }

    /// Whether `e` is a product of checks.
    pub fn in_stabilizer(&self, e: &PauliOperator) -> Result<bool> {
        self.check_len(e)?;
        Ok(self.stabilizer_span.contains(&e.symplectic_row()))
    }

    pub fn residual_class(&self, r: &PauliOperator) -> Result<ResidualClass> {
        if !self.syndrome(r)?.is_trivial() {
            Ok(ResidualClass::Detectable)
        } else if self.in_stabilizer(r)? {
            Ok(ResidualClass::Stabilizer)
        } else {
            Ok(ResidualClass::Logical)
        }
    }

    /// Pure errors and logical operators, computed on first use.
    pub fn canonical_generators(&self) -> &CanonicalGenerators {
        self.canonical
            .get_or_init(|| self.compute_canonical_generators())
    }

    fn compute_canonical_generators(&self) -> CanonicalGenerators {
        let n = self.n;
        let m = self.checks.len();
        // Row c of `twisted` is check c with its x and z halves swapped, so that
        // an ordinary dot product with it is the symplectic product with the check.
        let twisted: Vec<Vec<u64>> = self.checks.iter().map(|s| swap_halves(s, n)).collect();
        let ech = RowEchelon::new(&twisted, 2 * n);
        let mut pure: Vec<PauliOperator> = ech
            .right_inverse_columns()
            .iter()
            .map(|t| PauliOperator::from_symplectic_row(n, t))
            .collect();
        // Make the pure errors pairwise commuting by adding checks.
        for c in 0..m {
            for d in 0..c {
                if pure[c].anticommutes_unchecked(&pure[d]) {
                    let check = self.checks[d].clone();
                    pure[c].mul_assign_unchecked(&check);
                }
            }
        }

        // Logical operators span the symplectic complement of checks and pure errors.
        let mut constraints = twisted;
        constraints.extend(pure.iter().map(|t| swap_halves(t, n)));
        let mut pool: Vec<PauliOperator> = RowEchelon::new(&constraints, 2 * n)
            .nullspace()
            .iter()
            .map(|v| PauliOperator::from_symplectic_row(n, v))
            .collect();
        debug_assert_eq!(pool.len(), 2 * (n - m));

        let mut logical_x = Vec::new();
        let mut logical_z = Vec::new();
        while let Some(x) = pool.first().cloned() {
            pool.remove(0);
            let partner = pool
                .iter()
                .position(|v| v.anticommutes_unchecked(&x))
                .expect("symplectic complement is non-degenerate");
            let z = pool.remove(partner);
            for v in pool.iter_mut() {
                let fix_x = v.anticommutes_unchecked(&z);
                let fix_z = v.anticommutes_unchecked(&x);
                if fix_x {
                    v.mul_assign_unchecked(&x);
                }
                if fix_z {
                    v.mul_assign_unchecked(&z);
                }
            }
            logical_x.push(x);
            logical_z.push(z);
        }
        CanonicalGenerators {
            pure_errors: pure,
            logical_x,
            logical_z,
        }
    }

    /// An operator whose syndrome is exactly `s`: the product of the pure
    /// errors of the flipped checks.
    pub fn pure_error_for_syndrome(&self, s: &Syndrome) -> Result<PauliOperator> {
        self.check_syndrome_len(s)?;
        let gens = self.canonical_generators();
        let mut t = PauliOperator::identity(self.n);
        for c in s.flipped() {
            t.mul_assign_unchecked(&gens.pure_errors[c]);
        }
        Ok(t)
    }

    /// Logical class of an operator as bit flags: bit `2j` for `X̄_j`, bit `2j+1` for `Z̄_j`.
    ///
    /// The class is read off from commutation with the logical generators, so
    /// it ignores the stabilizer and pure-error components.
    pub fn logical_class(&self, e: &PauliOperator) -> Result<u64> {
        self.check_len(e)?;
        let gens = self.canonical_generators();
        assert!(
            gens.num_logical() <= 32,
            "too many logical qubits for a class index"
        );
        let mut class = 0u64;
        for j in 0..gens.num_logical() {
            // X̄_j content is detected by Z̄_j and vice versa.
            if e.anticommutes_unchecked(&gens.logical_z[j]) {
                class |= 1 << (2 * j);
            }
            if e.anticommutes_unchecked(&gens.logical_x[j]) {
                class |= 1 << (2 * j + 1);
            }
        }
        Ok(class)
    }

    /// The logical operator representing a class index from [`Self::logical_class`].
    pub fn logical_operator(&self, class: u64) -> PauliOperator {
        let gens = self.canonical_generators();
        let mut op = PauliOperator::identity(self.n);
        for j in 0..gens.num_logical() {
            if (class >> (2 * j)) & 1 == 1 {
                op.mul_assign_unchecked(&gens.logical_x[j]);
            }
            if (class >> (2 * j + 1)) & 1 == 1 {
                op.mul_assign_unchecked(&gens.logical_z[j]);
            }
        }
        op
    }

    /// Graphviz rendering of the decorated Tanner graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tanner {\n");
        for q in 0..self.n {
            out.push_str(&format!("  q{q} [shape=circle];\n"));
        }
        for c in 0..self.num_checks() {
            out.push_str(&format!("  c{c} [shape=box];\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  q{} -- c{} [label=\"{}\"];\n",
                e.qubit, e.check, e.label
            ));
        }
        out.push_str("}\n");
        out
    }

    /// The plain-text code format: a `n m` header then one Pauli string per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.num_checks());
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the plain-text code format. Blank lines and lines starting with `#` are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing \"n m\" header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: hline,
                message: format!("bad header: {e}"),
            })?;
        let [n, m] = dims[..] else {
            return Err(Error::Parse {
                line: hline,
                message: "header must be \"n m\"".into(),
            });
        };
        let mut checks = Vec::with_capacity(m);
        for (line, l) in lines {
            let op: PauliOperator = l.parse().map_err(|e: Error| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            if op.num_qubits() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("check has {} qubits, header says {n}", op.num_qubits()),
                });
            }
            checks.push(op);
        }
        if checks.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header promises {m} checks, found {}", checks.len()),
            });
        }
        Self::new(checks)
    }

    /// SHA-256 over the text form of the checks, hex encoded.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn swap_halves(op: &PauliOperator, n: usize) -> Vec<u64> {
    let row = op.symplectic_row();
    let mut out = vec![0u64; row.len()];
    for j in 0..n {
        crate::gf2::set_bit(&mut out, j, get_bit(&row, j + n));
        crate::gf2::set_bit(&mut out, j + n, get_bit(&row, j));
    }
    out
}

/// Parses the edge list of a DOT document produced by [`StabilizerCode::to_dot`]
/// into `(qubit, check, label)` triples.
pub fn parse_dot_edges(dot: &str) -> Result<Vec<(usize, usize, Pauli)>> {
    let mut edges = Vec::new();
    for (i, line) in dot.lines().enumerate() {
        let line = line.trim();
        let Some((lhs, rest)) = line.split_once(" -- ") else {
            continue;
        };
        let bad = |message: &str| Error::Parse {
            line: i + 1,
            message: message.to_string(),
        };
        let q = lhs
            .strip_prefix('q')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad qubit node"))?;
        let (cnode, attrs) = rest
            .split_once(' ')
            .ok_or_else(|| bad("missing attributes"))?;
        let c = cnode
            .strip_prefix('c')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad check node"))?;
        let label = attrs
            .split('"')
            .nth(1)
            .and_then(|s| s.chars().next())
            .and_then(Pauli::from_char)
            .ok_or_else(|| bad("bad edge label"))?;
        edges.push((q, c, label));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn code(checks: &[&str]) -> StabilizerCode {
        StabilizerCode::new(checks.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    fn op(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn five_qubit() -> StabilizerCode {
        code(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])
    }

    fn assert_canonical(code: &StabilizerCode) {
        let g = code.canonical_generators();
        let m = code.num_checks();
        assert_eq!(g.pure_errors.len(), m);
        assert_eq!(g.num_logical(), code.num_logical());
        for c in 0..m {
            for d in 0..m {
                assert_eq!(
                    g.pure_errors[c].commute(code.check(d)).unwrap().is_minus(),
                    c == d
                );
                assert!(g.pure_errors[c].commutes_with(&g.pure_errors[d]).unwrap());
            }
        }
        let logicals: Vec<_> = g.logical_x.iter().chain(&g.logical_z).collect();
        for l in &logicals {
            for s in code.checks().iter().chain(&g.pure_errors) {
                assert!(l.commutes_with(s).unwrap());
            }
        }
        for j in 0..g.num_logical() {
            for k in 0..g.num_logical() {
                assert_eq!(
                    g.logical_x[j].commute(&g.logical_z[k]).unwrap().is_minus(),
                    j == k
                );
                assert!(g.logical_x[j].commutes_with(&g.logical_x[k]).unwrap());
                assert!(g.logical_z[j].commutes_with(&g.logical_z[k]).unwrap());
            }
        }
    }

    #[test]
    fn build_validation() {
        let toy = code(&["XX", "ZZ"]);
        assert_eq!(toy.num_logical(), 0);
        let five = five_qubit();
        assert_eq!(
            (five.num_qubits(), five.num_checks(), five.num_logical()),
            (5, 4, 1)
        );
        assert_eq!(
            StabilizerCode::new(vec![op("XX"), op("XX")]).unwrap_err(),
            Error::DependentCheck { index: 1 }
        );
        assert_eq!(
            StabilizerCode::new(vec![op("XX"), op("YY"), op("ZZ")]).unwrap_err(),
            Error::DependentCheck { index: 2 }
        );
        assert_eq!(
            StabilizerCode::new(vec![op("XI"), op("ZZ")]).unwrap_err(),
            Error::NonCommutingChecks {
                first: 0,
                second: 1
            }
        );
        assert_eq!(StabilizerCode::new(vec![]).unwrap_err(), Error::NoChecks);
        assert!(StabilizerCode::new(vec![op("XX"), op("ZZZ")]).is_err());
    }

    #[test]
    fn tanner_graph_decorations() {
        let five = five_qubit();
        assert_eq!(five.edges().len(), 16);
        let e = five.check_edges(0);
        assert_eq!(
            e.iter().map(|e| (e.qubit, e.label)).collect::<Vec<_>>(),
            vec![(0, Pauli::X), (1, Pauli::Z), (2, Pauli::Z), (3, Pauli::X)]
        );
        assert_eq!(five.qubit_degree(0), 3);
        for (i, edge) in five.edges().iter().enumerate() {
            assert!(five.qubit_edges(edge.qubit).contains(&i));
            assert_eq!(five.check(edge.check).get(edge.qubit), edge.label);
        }
    }

    #[test]
    fn syndrome_examples() {
        let toy = code(&["XX", "ZZ"]);
        assert_eq!(toy.syndrome(&op("IX")).unwrap().to_string(), "+-");
        assert!(toy.syndrome(&op("II")).unwrap().is_trivial());
        let five = five_qubit();
        assert_eq!(five.syndrome(&op("XIIII")).unwrap().to_string(), "+++-");
        assert!(five.syndrome(&op("XX")).is_err());
    }

    #[test]
    fn canonical_generators_examples() {
        let toy = code(&["XX", "ZZ"]);
        assert_canonical(&toy);
        let single = code(&["ZZ"]);
        assert_canonical(&single);
        assert_eq!(single.canonical_generators().num_logical(), 1);
        assert_canonical(&five_qubit());
        assert_canonical(&code(&["XXXX", "ZZZZ"]));
        assert_canonical(&code(&["ZZI", "IZZ"]));
    }

    #[test]
    fn pure_error_examples() {
        let toy = code(&["XX", "ZZ"]);
        assert!(toy
            .pure_error_for_syndrome(&"++".parse().unwrap())
            .unwrap()
            .is_identity());
        let t = toy.pure_error_for_syndrome(&"+-".parse().unwrap()).unwrap();
        let coset = ["XI", "IX", "YZ", "ZY"].map(op);
        assert!(coset.contains(&t), "{t}");
    }

    #[test]
    fn pure_error_map_is_injective_and_exact() {
        let five = five_qubit();
        let mut seen = std::collections::HashSet::new();
        for idx in 0..16 {
            let s = Syndrome::from_index(4, idx);
            let t = five.pure_error_for_syndrome(&s).unwrap();
            assert_eq!(five.syndrome(&t).unwrap(), s);
            assert!(seen.insert(t));
        }
    }

    #[test]
    fn residual_classes() {
        let five = five_qubit();
        assert_eq!(
            five.residual_class(five.check(2)).unwrap(),
            ResidualClass::Stabilizer
        );
        let lx = five.canonical_generators().logical_x[0].clone();
        assert_eq!(five.residual_class(&lx).unwrap(), ResidualClass::Logical);
        assert_eq!(
            five.residual_class(&op("XIIII")).unwrap(),
            ResidualClass::Detectable
        );
        assert_eq!(
            five.residual_class(&op("IIIII")).unwrap(),
            ResidualClass::Stabilizer
        );
        assert_eq!(five.logical_class(&lx).unwrap(), 1);
        assert_eq!(five.logical_operator(1), lx);
    }

    #[test]
    fn residual_class_is_stabilizer_invariant() {
        let five = five_qubit();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let e = PauliOperator::from_index(5, rng.gen_range(0..1024));
            let class = five.residual_class(&e).unwrap();
            for s in five.checks() {
                assert_eq!(five.residual_class(&e.multiply(s).unwrap()).unwrap(), class);
            }
        }
    }

    #[test]
    fn dot_export_roundtrip() {
        let toy = code(&["XX", "ZZ"]);
        let dot = toy.to_dot();
        assert_eq!(dot.matches("shape=circle").count(), 2);
        assert_eq!(dot.matches("shape=box").count(), 2);
        let edges = parse_dot_edges(&dot).unwrap();
        assert_eq!(
            edges,
            vec![
                (0, 0, Pauli::X),
                (1, 0, Pauli::X),
                (0, 1, Pauli::Z),
                (1, 1, Pauli::Z)
            ]
        );
        let five = five_qubit();
        let edges = parse_dot_edges(&five.to_dot()).unwrap();
        assert_eq!(edges.len(), 16);
        for (q, c, l) in edges {
            assert_eq!(five.check(c).get(q), l);
        }
    }

    #[test]
    fn text_format() {
        let five = five_qubit();
        let text = five.to_text();
        assert_eq!(text, "5 4\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n");
        let back = StabilizerCode::from_text(&format!("# comment\n{text}")).unwrap();
        assert_eq!(back.checks(), five.checks());
        let err = StabilizerCode::from_text("2 2\nXX\nZQ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = StabilizerCode::from_text("2 3\nXX\nZZ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(StabilizerCode::from_text("").is_err());
        assert_eq!(five.fingerprint().len(), 64);
    }

    #[test]
    fn syndrome_parsing() {
        let s: Syndrome = "+-+".parse().unwrap();
        assert_eq!(s.flipped(), vec![1]);
        assert!("+x".parse::<Syndrome>().is_err());
        assert!("".parse::<Syndrome>().is_err());
    }
}
