//! Code families: bicycle codes, CSS codes from self-orthogonal matrices, and
//! small built-in codes.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, RowEchelon};
use crate::pauli::{Pauli, PauliOperator};

/// Attempts made by [`generate_bicycle`] before giving up.
pub const MAX_GENERATION_ATTEMPTS: usize = 64;

/// `C[i][j] = A[(i + j) mod d]`.
///
/// This matrix is symmetric, so `(C | Cᵀ)` built from it repeats the same
/// block twice; [`generate_bicycle`] uses [`circulant_matrix`] instead.
pub fn cyclic_matrix(a: &[bool]) -> Result<BitMatrix> {
    shifted_matrix(a, |i, j, d| (i + j) % d)
}

/// `C[i][j] = A[(j - i) mod d]`: each row is the previous one shifted right by one.
pub fn circulant_matrix(a: &[bool]) -> Result<BitMatrix> {
    shifted_matrix(a, |i, j, d| (j + d - i) % d)
}

fn shifted_matrix(a: &[bool], index: impl Fn(usize, usize, usize) -> usize) -> Result<BitMatrix> {
    let d = a.len();
    if d == 0 {
        return Err(Error::EmptyVector);
    }
    let mut c = BitMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            c.set(i, j, a[index(i, j, d)]);
        }
    }
    Ok(c)
}

/// How rows of `H₀` are removed to reach the requested check count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowDeletion {
    /// Greedily drop the row whose removal leaves the most even column weights.
    #[default]
    Balanced,
    /// Drop a uniformly random subset of rows.
    Random,
}

impl FromStr for RowDeletion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balanced" => Ok(Self::Balanced),
            "random" => Ok(Self::Random),
            other => Err(Error::InvalidBicycleSpec(format!(
                "unknown row deletion mode {other:?}"
            ))),
        }
    }
}

impl fmt::Display for RowDeletion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Balanced => "balanced",
            Self::Random => "random",
        })
    }
}

/// Parameters of a bicycle code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicycleSpec {
    /// Block length.
    pub n: usize,
    /// Number of checks (half Z-type, half X-type).
    pub m: usize,
    /// Check weight.
    pub w: usize,
    pub seed: u64,
    #[serde(default)]
    pub deletion: RowDeletion,
}

impl BicycleSpec {
    pub fn new(n: usize, m: usize, w: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            w,
            seed,
            deletion: RowDeletion::Balanced,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidBicycleSpec(msg));
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return fail(format!(
                "block length n = {} must be positive and even",
                self.n
            ));
        }
        if self.m == 0 || !self.m.is_multiple_of(2) {
            return fail(format!(
                "check count m = {} must be positive and even",
                self.m
            ));
        }
        if self.m >= self.n {
            return fail(format!(
                "check count m = {} must be below n = {}",
                self.m, self.n
            ));
        }
        if self.w == 0 || !self.w.is_multiple_of(2) {
            return fail(format!(
                "row weight w = {} must be positive and even",
                self.w
            ));
        }
        if self.w > self.n {
            return fail(format!("row weight w = {} exceeds n = {}", self.w, self.n));
        }
        Ok(())
    }
}

/// A generated bicycle code together with the self-orthogonal matrix it came from.
#[derive(Debug, Clone)]
pub struct BicycleCode {
    pub spec: BicycleSpec,
    /// `m/2 × n` matrix whose rows define both the Z-type and X-type checks.
    pub h: BitMatrix,
    pub code: StabilizerCode,
    /// Generation attempts consumed, starting at 1.
    pub attempts: usize,
}

/// Draws a bicycle code: a random weight-`w/2` circulant `C`, `H₀ = (C | Cᵀ)`,
/// `n/2 - m/2` rows removed, then the CSS construction on the remaining rows.
///
/// Attempts that leave a qubit uncovered or a dependent row set are redrawn
/// from the same seeded stream.
pub fn generate_bicycle(spec: &BicycleSpec) -> Result<BicycleCode> {
    spec.validate()?;
    if spec.m * spec.w < 2 * spec.n {
        return Err(Error::GenerationFailed {
            attempts: 0,
            reason: format!(
                "{} rows of weight {} cannot cover {} columns",
                spec.m / 2,
                spec.w,
                spec.n
            ),
        });
    }
    let half = spec.n / 2;
    let keep = spec.m / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut last_reason = String::new();
    for attempt in 1..=MAX_GENERATION_ATTEMPTS {
        let mut a = vec![false; half];
        for i in sample(&mut rng, half, spec.w / 2) {
            a[i] = true;
        }
        let c = circulant_matrix(&a)?;
        let h0 = c.hstack(&c.transpose());
        let kept = match spec.deletion {
            RowDeletion::Balanced => balanced_rows(&h0, keep, &mut rng),
            RowDeletion::Random => random_rows(&h0, keep, &mut rng),
        };
        let Some(kept) = kept else {
            last_reason = "every deletion leaves a zero-weight column".into();
            log::debug!("bicycle attempt {attempt}: {last_reason}");
            continue;
        };
        let h = h0.select_rows(&kept);
        if let Some(&index) = RowEchelon::new(&rows_of(&h), h.num_cols())
            .dependent_rows()
            .first()
        {
            last_reason = format!("kept row {index} is dependent");
            log::debug!("bicycle attempt {attempt}: {last_reason}");
            continue;
        }
        let code = css_from_matrix(&h)?;
        return Ok(BicycleCode {
            spec: *spec,
            h,
            code,
            attempts: attempt,
        });
    }
    Err(Error::GenerationFailed {
        attempts: MAX_GENERATION_ATTEMPTS,
        reason: last_reason,
    })
}

fn rows_of(h: &BitMatrix) -> Vec<Vec<u64>> {
    (0..h.num_rows()).map(|i| h.row_words(i).to_vec()).collect()
}

/// Greedy deletion keeping `keep` rows. Removing a row lowers the sum of squared
/// column weights by `Σ (2 w_j - 1)` over its support, so the row with the
/// heaviest columns goes first; ties are broken at random. Rows whose removal
/// would empty a column are never chosen.
fn balanced_rows(h0: &BitMatrix, keep: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let supports: Vec<Vec<usize>> = (0..h0.num_rows()).map(|i| h0.row_support(i)).collect();
    let mut col_weight: Vec<usize> = (0..h0.num_cols()).map(|j| h0.col_weight(j)).collect();
    let mut alive = vec![true; h0.num_rows()];
    for _ in 0..h0.num_rows() - keep {
        let mut best_score = 0usize;
        let mut best: Vec<usize> = Vec::new();
        for (i, support) in supports.iter().enumerate() {
            if !alive[i] || support.iter().any(|&j| col_weight[j] <= 1) {
                continue;
            }
            let score: usize = support.iter().map(|&j| col_weight[j]).sum();
            if best.is_empty() || score > best_score {
                best_score = score;
                best.clear();
                best.push(i);
            } else if score == best_score {
                best.push(i);
            }
        }
        if best.is_empty() {
            return None;
        }
        let victim = best[rng.gen_range(0..best.len())];
        alive[victim] = false;
        for &j in &supports[victim] {
            col_weight[j] -= 1;
        }
    }
    Some((0..h0.num_rows()).filter(|&i| alive[i]).collect())
}

fn random_rows(h0: &BitMatrix, keep: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let mut kept = sample(rng, h0.num_rows(), keep).into_vec();
    kept.sort_unstable();
    let covered = (0..h0.num_cols()).all(|j| kept.iter().any(|&i| h0.get(i, j)));
    covered.then_some(kept)
}

/// CSS code with one Z-type check per row of `h` followed by one X-type check per row.
///
/// `h` must satisfy `H Hᵀ = 0` and have full row rank.
pub fn css_from_matrix(h: &BitMatrix) -> Result<StabilizerCode> {
    if let Some((first, second)) = h.self_orthogonality_witness() {
        return Err(Error::NotSelfDual { first, second });
    }
    if let Some(&index) = RowEchelon::new(&rows_of(h), h.num_cols())
        .dependent_rows()
        .first()
    {
        return Err(Error::RankDeficient { index });
    }
    let n = h.num_cols();
    let mut checks = Vec::with_capacity(2 * h.num_rows());
    for p in [Pauli::Z, Pauli::X] {
        for i in 0..h.num_rows() {
            checks.push(PauliOperator::on_support(n, p, &h.row_support(i)));
        }
    }
    StabilizerCode::new(checks)
}

/// Small codes with fixed generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `{XX, ZZ}`: encodes nothing, but every weight-1 error is degenerate with another.
    TwoQubitToy,
    /// The perfect `[[5,1,3]]` code.
    FiveQubit,
}

impl Builtin {
    pub fn checks(self) -> &'static [&'static str] {
        match self {
            Builtin::TwoQubitToy => &["XX", "ZZ"],
            Builtin::FiveQubit => &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::TwoQubitToy => "two_qubit_toy",
            Builtin::FiveQubit => "five_qubit",
        }
    }

    pub fn code(self) -> StabilizerCode {
        let checks = self
            .checks()
            .iter()
            .map(|s| s.parse().expect("valid builtin"))
            .collect();
        StabilizerCode::new(checks).expect("builtin codes are valid")
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "two_qubit_toy" => Ok(Builtin::TwoQubitToy),
            "five_qubit" => Ok(Builtin::FiveQubit),
            _ => Err(Error::UnknownBuiltin(s.to_string())),
        }
    }
}

pub fn builtin(name: &str) -> Result<StabilizerCode> {
    Ok(name.parse::<Builtin>()?.code())
}

/// Sparse row format: one line per row listing the sorted 0-based column indices of its ones.
pub fn matrix_to_sparse_text(h: &BitMatrix) -> String {
    let mut out = String::new();
    for i in 0..h.num_rows() {
        let cols: Vec<String> = h.row_support(i).iter().map(usize::to_string).collect();
        out.push_str(&cols.join(" "));
        out.push('\n');
    }
    out
}

/// Inverse of [`matrix_to_sparse_text`]; `#` lines are skipped.
pub fn matrix_from_sparse_text(text: &str, cols: usize) -> Result<BitMatrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(j) if j < cols => Ok(j),
                _ => Err(Error::Parse {
                    line: i + 1,
                    message: format!("bad column index {t:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(BitMatrix::from_sparse_rows(cols, &rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::four_loop_census;

    #[test]
    fn cyclic_matrix_examples() {
        let c = cyclic_matrix(&[true, false]).unwrap();
        assert_eq!(c, BitMatrix::identity(2));
        assert!(cyclic_matrix(&[false; 5]).unwrap().is_zero());
        assert_eq!(cyclic_matrix(&[]), Err(Error::EmptyVector));

        let a = [true, true, false, true, false, false, false];
        for c in [cyclic_matrix(&a).unwrap(), circulant_matrix(&a).unwrap()] {
            for i in 0..7 {
                assert_eq!(c.row_weight(i), 3);
                assert_eq!(c.col_weight(i), 3);
            }
            // Row supports are cyclic shifts of row 0.
            let base = c.row_support(0);
            for i in 1..7 {
                assert!((0..7).any(|s| {
                    let mut v: Vec<usize> = c.row_support(i).iter().map(|j| (j + s) % 7).collect();
                    v.sort_unstable();
                    v == base
                }));
            }
        }
        assert_eq!(
            cyclic_matrix(&a).unwrap(),
            cyclic_matrix(&a).unwrap().transpose()
        );
        assert_ne!(
            circulant_matrix(&a).unwrap(),
            circulant_matrix(&a).unwrap().transpose()
        );
    }

    #[test]
    fn bicycle_example() {
        let b = generate_bicycle(&BicycleSpec::new(20, 10, 6, 42)).unwrap();
        assert_eq!(b.code.num_checks(), 10);
        assert_eq!(b.code.num_logical(), 10);
        assert!(b.code.checks().iter().all(|c| c.weight() == 6));
        assert!(b.h.mul(&b.h.transpose()).is_zero());
        assert!(!four_loop_census(&b.code).is_empty());
        assert!(b.code.isolated_qubits().is_empty());
    }

    #[test]
    fn bicycle_is_deterministic() {
        for deletion in [RowDeletion::Balanced, RowDeletion::Random] {
            let spec = BicycleSpec {
                deletion,
                ..BicycleSpec::new(40, 20, 8, 9)
            };
            let a = generate_bicycle(&spec).unwrap();
            let b = generate_bicycle(&spec).unwrap();
            assert_eq!(a.h, b.h);
            assert_eq!(a.code.to_text(), b.code.to_text());
        }
    }

    #[test]
    fn balanced_deletion_evens_out_qubit_degrees() {
        let variance = |b: &BicycleCode| {
            let w: Vec<f64> = (0..b.h.num_cols())
                .map(|j| b.h.col_weight(j) as f64)
                .collect();
            let mean = w.iter().sum::<f64>() / w.len() as f64;
            w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / w.len() as f64
        };
        let balanced = generate_bicycle(&BicycleSpec::new(200, 100, 10, 1)).unwrap();
        let degrees: Vec<usize> = (0..200).map(|q| balanced.code.qubit_degree(q)).collect();
        let mean = degrees.iter().sum::<usize>() as f64 / 200.0;
        assert!((mean - 5.0).abs() < 1e-12);
        assert!(degrees.iter().all(|&d| (2..=8).contains(&d)), "{degrees:?}");
        assert!((0..200).all(|j| (1..=4).contains(&balanced.h.col_weight(j))));
        assert!(variance(&balanced) < 0.5);
    }

    #[test]
    fn invalid_specs() {
        for (n, m, w) in [
            (21, 10, 6),
            (20, 9, 6),
            (20, 10, 5),
            (20, 20, 6),
            (20, 10, 0),
            (20, 10, 22),
        ] {
            assert!(matches!(
                generate_bicycle(&BicycleSpec::new(n, m, w, 0)),
                Err(Error::InvalidBicycleSpec(_))
            ));
        }
    }

    #[test]
    fn css_examples() {
        let toy = css_from_matrix(&BitMatrix::from_dense(&[vec![1, 1]])).unwrap();
        assert_eq!(toy.to_text(), "2 2\nZZ\nXX\n");
        let odd = BitMatrix::from_dense(&[vec![1, 1, 0, 0], vec![0, 1, 1, 0]]);
        assert_eq!(
            css_from_matrix(&odd).unwrap_err(),
            Error::NotSelfDual {
                first: 0,
                second: 1
            }
        );
        let zero_row = BitMatrix::from_dense(&[vec![1, 1, 0, 0], vec![0, 0, 0, 0]]);
        assert_eq!(
            css_from_matrix(&zero_row).unwrap_err(),
            Error::RankDeficient { index: 1 }
        );
    }

    #[test]
    fn builtins() {
        let toy = builtin("two_qubit_toy").unwrap();
        assert_eq!(toy.to_text(), "2 2\nXX\nZZ\n");
        assert_eq!(toy.num_logical(), 0);
        let five = builtin("five_qubit").unwrap();
        assert_eq!(five.num_logical(), 1);
        assert_eq!(five.to_text(), "5 4\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n");
        assert_eq!(
            builtin("steane").unwrap_err(),
            Error::UnknownBuiltin("steane".into())
        );
    }

    #[test]
    fn sparse_matrix_text_roundtrip() {
        let b = generate_bicycle(&BicycleSpec::new(30, 12, 6, 3)).unwrap();
        let text = matrix_to_sparse_text(&b.h);
        assert_eq!(matrix_from_sparse_text(&text, 30).unwrap(), b.h);
        assert!(matrix_from_sparse_text("0 31\n", 30).is_err());
    }
}
