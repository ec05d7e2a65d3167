//! Quaternary belief propagation on the decorated Tanner graph.
//!
//! Messages are probability 4-vectors indexed by [`Pauli::index`]. One
//! iteration is a flooding sweep: every check message, then every qubit
//! message, then beliefs and the hard decision.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::{StabilizerCode, Syndrome};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

/// A probability distribution over `{I, X, Y, Z}`.
pub type Dist = [f64; 4];

/// Lower bound enforced on priors and qubit-to-check messages after
/// normalization. Check-to-qubit messages are left unfloored: their entries
/// can only vanish for a degree-1 check, whose constraint is exact.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

const UNIFORM: Dist = [0.25; 4];

/// Scales `v` to unit sum.
pub(crate) fn normalize(v: &mut Dist) {
    let sum: f64 = v.iter().sum();
    if sum > 0.0 && sum.is_finite() {
        v.iter_mut().for_each(|p| *p /= sum);
    } else {
        *v = UNIFORM;
    }
}

/// Normalizes, then lifts entries below [`PROBABILITY_FLOOR`] and renormalizes.
pub(crate) fn normalize_floored(v: &mut Dist) {
    normalize(v);
    if v.iter().any(|&p| p < PROBABILITY_FLOOR) {
        v.iter_mut().for_each(|p| *p = p.max(PROBABILITY_FLOOR));
        normalize(v);
    }
}

fn hadamard(a: &Dist, b: &Dist) -> Dist {
    [a[0] * b[0], a[1] * b[1], a[2] * b[2], a[3] * b[3]]
}

/// Memoryless Pauli channel: one distribution per qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelPrior {
    probs: Vec<Dist>,
}

impl ChannelPrior {
    pub fn new(probs: Vec<Dist>) -> Result<Self> {
        for (qubit, p) in probs.iter().enumerate() {
            if p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                return Err(Error::InvalidPrior {
                    qubit,
                    reason: format!("entries must be finite and non-negative, got {p:?}"),
                });
            }
            let sum: f64 = p.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidPrior {
                    qubit,
                    reason: format!("entries sum to {sum}"),
                });
            }
        }
        Ok(Self { probs })
    }

    /// `I` with probability `1 - ε`, each of `X`, `Y`, `Z` with `ε/3`.
    pub fn depolarizing(n: usize, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidPrior {
                qubit: 0,
                reason: format!("depolarizing strength {epsilon} outside [0, 1]"),
            });
        }
        let e = epsilon / 3.0;
        Ok(Self {
            probs: vec![[1.0 - epsilon, e, e, e]; n],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn qubit(&self, q: usize) -> &Dist {
        &self.probs[q]
    }

    pub fn probs(&self) -> &[Dist] {
        &self.probs
    }

    /// `p(E) = ∏ p_q(E_q)`.
    pub fn probability(&self, e: &PauliOperator) -> f64 {
        e.iter()
            .enumerate()
            .map(|(q, p)| self.probs[q][p.index()])
            .product()
    }
}

/// Symmetry-breaking strategy layered on top of plain BP.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    #[default]
    None,
    Freeze,
    Perturb,
    CollisionFreeze,
    CollisionPerturb,
}

impl Heuristic {
    pub const ALL: [Heuristic; 5] = [
        Heuristic::None,
        Heuristic::Freeze,
        Heuristic::Perturb,
        Heuristic::CollisionFreeze,
        Heuristic::CollisionPerturb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::None => "none",
            Heuristic::Freeze => "freeze",
            Heuristic::Perturb => "perturb",
            Heuristic::CollisionFreeze => "collision-freeze",
            Heuristic::CollisionPerturb => "collision-perturb",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Heuristic::ALL
            .into_iter()
            .find(|h| h.name() == s || h.name().replace('-', "_") == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown heuristic {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodeConfig {
    pub max_iterations: usize,
    /// Iterations between interventions.
    pub t_pert: usize,
    /// Perturbation strength: multipliers are drawn from `1 + U[0, delta]`.
    pub delta: f64,
    pub heuristic: Heuristic,
    pub seed: u64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            max_iterations: 90,
            t_pert: 6,
            delta: 0.1,
            heuristic: Heuristic::None,
            seed: 0,
        }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.t_pert == 0 || self.t_pert > self.max_iterations {
            return Err(Error::InvalidConfig(format!(
                "t_pert = {} must lie in 1..={}",
                self.t_pert, self.max_iterations
            )));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "delta = {} must be non-negative",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Messages on every Tanner edge plus the per-qubit prior the decoder is using.
///
/// Both message arrays are indexed by edge number (see [`StabilizerCode::edges`]).
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    pub qubit_to_check: Vec<Dist>,
    pub check_to_qubit: Vec<Dist>,
    pub working_prior: Vec<Dist>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub correction: PauliOperator,
    /// The correction reproduces the syndrome.
    pub converged: bool,
    pub iterations_used: usize,
    pub final_beliefs: Vec<Dist>,
}

/// Sends each qubit's prior on all of its edges; check messages start uniform.
pub fn init_messages(code: &StabilizerCode, prior: &ChannelPrior) -> Result<MessageState> {
    if prior.len() != code.num_qubits() {
        return Err(Error::LengthMismatch {
            left: code.num_qubits(),
            right: prior.len(),
        });
    }
    let working_prior: Vec<Dist> = prior
        .probs()
        .iter()
        .map(|p| {
            let mut p = *p;
            normalize_floored(&mut p);
            p
        })
        .collect();
    let qubit_to_check = code
        .edges()
        .iter()
        .map(|e| working_prior[e.qubit])
        .collect();
    Ok(MessageState {
        qubit_to_check,
        check_to_qubit: vec![UNIFORM; code.edges().len()],
        working_prior,
    })
}

/// Recomputes every check-to-qubit message.
///
/// Only the commutation sign of each neighbour's factor with the check label
/// matters, so each incoming message collapses to a (commute, anticommute)
/// pair and the constraint becomes a parity: the outgoing weight of `E_q` is
/// the probability that the other neighbours' signs multiply to
/// `s_c · sign(E_q, label)`.
///
/// Since incoming messages are floored, an outgoing entry is zero only for a
/// degree-1 check, and such zeros are kept as they are.
pub fn check_update(state: &mut MessageState, code: &StabilizerCode, syndrome: &Syndrome) {
    let mut prefix: Vec<(f64, f64)> = Vec::new();
    for c in 0..code.num_checks() {
        let range = code.check_edge_range(c);
        let edges = &code.edges()[range.clone()];
        let pairs: Vec<(f64, f64)> = edges
            .iter()
            .zip(&state.qubit_to_check[range.clone()])
            .map(|(e, m)| commutation_pair(m, e.label))
            .collect();
        // prefix[i] = (P(even), P(odd)) over pairs[..i]
        prefix.clear();
        prefix.push((1.0, 0.0));
        for &p in &pairs {
            let last = *prefix.last().unwrap();
            prefix.push(parity_convolve(last, p));
        }
        let mut suffix = (1.0, 0.0);
        let flipped = syndrome.is_flipped(c);
        for i in (0..pairs.len()).rev() {
            let (even, odd) = parity_convolve(prefix[i], suffix);
            let label = edges[i].label;
            let mut out = [0.0; 4];
            for p in Pauli::ALL {
                // Others must supply an odd parity exactly when this factor's
                // sign disagrees with the syndrome bit.
                let need_odd = p.commute(label).is_minus() != flipped;
                out[p.index()] = if need_odd { odd } else { even };
            }
            normalize(&mut out);
            state.check_to_qubit[range.start + i] = out;
            suffix = parity_convolve(suffix, pairs[i]);
        }
    }
}

/// Mass of `m` on the factors commuting / anticommuting with `label`.
fn commutation_pair(m: &Dist, label: Pauli) -> (f64, f64) {
    let mut comm = 0.0;
    let mut anti = 0.0;
    for p in Pauli::ALL {
        if p.commute(label).is_minus() {
            anti += m[p.index()];
        } else {
            comm += m[p.index()];
        }
    }
    (comm, anti)
}

fn parity_convolve(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 + a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Recomputes every qubit-to-check message.
pub fn qubit_update(state: &mut MessageState, code: &StabilizerCode) {
    for q in 0..code.num_qubits() {
        refresh_qubit(state, code, q);
    }
}

/// Recomputes the outgoing messages of qubit `q` from its working prior and
/// the current check messages.
pub fn refresh_qubit(state: &mut MessageState, code: &StabilizerCode, q: usize) {
    let edges = code.qubit_edges(q);
    let mut prefix = Vec::with_capacity(edges.len() + 1);
    prefix.push(state.working_prior[q]);
    for &e in edges {
        let mut next = hadamard(prefix.last().unwrap(), &state.check_to_qubit[e]);
        normalize(&mut next);
        prefix.push(next);
    }
    let mut suffix = [1.0; 4];
    for i in (0..edges.len()).rev() {
        let mut out = hadamard(&prefix[i], &suffix);
        normalize_floored(&mut out);
        state.qubit_to_check[edges[i]] = out;
        suffix = hadamard(&suffix, &state.check_to_qubit[edges[i]]);
        normalize(&mut suffix);
    }
}

/// `b_q ∝ p_q ⊙ ∏_c m_{c→q}` for every qubit.
pub fn compute_beliefs(state: &MessageState, code: &StabilizerCode) -> Vec<Dist> {
    (0..code.num_qubits())
        .map(|q| {
            let mut b = state.working_prior[q];
            for &e in code.qubit_edges(q) {
                b = hadamard(&b, &state.check_to_qubit[e]);
                normalize(&mut b);
            }
            normalize(&mut b);
            b
        })
        .collect()
}

/// Per-qubit argmax; ties go to the earliest of `I, X, Y, Z`.
pub fn hard_decision(beliefs: &[Dist]) -> PauliOperator {
    let paulis: Vec<Pauli> = beliefs
        .iter()
        .map(|b| {
            let mut best = 0;
            for i in 1..4 {
                if b[i] > b[best] {
                    best = i;
                }
            }
            Pauli::from_index(best)
        })
        .collect();
    PauliOperator::from_paulis(&paulis)
}

/// What one flooding iteration produced.
#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub beliefs: Vec<Dist>,
    pub correction: PauliOperator,
    pub correction_syndrome: Syndrome,
    pub converged: bool,
}

/// One full iteration: check messages, qubit messages, beliefs, hard decision
/// and the halting test.
pub fn iterate(
    state: &mut MessageState,
    code: &StabilizerCode,
    syndrome: &Syndrome,
) -> IterationOutcome {
    check_update(state, code, syndrome);
    qubit_update(state, code);
    let beliefs = compute_beliefs(state, code);
    let correction = hard_decision(&beliefs);
    let correction_syndrome = code
        .syndrome(&correction)
        .expect("correction has code length");
    let converged = &correction_syndrome == syndrome;
    IterationOutcome {
        beliefs,
        correction,
        correction_syndrome,
        converged,
    }
}

/// Plain BP: iterate until the hard decision reproduces the syndrome or
/// `max_iterations` is reached. The heuristic fields of `config` are not used.
pub fn decode(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
    config: &DecodeConfig,
) -> Result<DecodeResult> {
    decode_observed(code, prior, syndrome, config, &mut |_, _| {})
}

/// [`decode`], calling `observer(iteration, beliefs)` after every iteration.
pub fn decode_observed(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
    config: &DecodeConfig,
    observer: &mut dyn FnMut(usize, &[Dist]),
) -> Result<DecodeResult> {
    config.validate()?;
    code.check_syndrome_len(syndrome)?;
    let mut state = init_messages(code, prior)?;
    let mut last = None;
    for it in 1..=config.max_iterations {
        let out = iterate(&mut state, code, syndrome);
        observer(it, &out.beliefs);
        let done = out.converged;
        last = Some((it, out));
        if done {
            break;
        }
    }
    let (iterations_used, out) = last.expect("at least one iteration");
    Ok(DecodeResult {
        correction: out.correction,
        converged: out.converged,
        iterations_used,
        final_beliefs: out.beliefs,
    })
}

/// Beliefs after exactly `iterations` flooding sweeps, with no halting test.
pub fn beliefs_after(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
    iterations: usize,
) -> Result<Vec<Dist>> {
    code.check_syndrome_len(syndrome)?;
    let mut state = init_messages(code, prior)?;
    for _ in 0..iterations {
        check_update(&mut state, code, syndrome);
        qubit_update(&mut state, code);
    }
    Ok(compute_beliefs(&state, code))
}
