//! Symmetry-breaking interventions around plain BP.
//!
//! Degenerate errors of equal weight look identical to a qubit-wise decoder,
//! which can then settle on a correction that fails to reproduce the
//! syndrome. Every `t_pert` iterations without convergence the decoder
//! modifies the working prior of qubits near frustrated checks: freezing one
//! qubit to the identity, or randomly inflating error probabilities.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::sorted_intersection;
use crate::bp::{
    self, normalize_floored, ChannelPrior, DecodeConfig, DecodeResult, Dist, Heuristic,
    MessageState,
};
use crate::code::{StabilizerCode, Syndrome};
use crate::error::Result;
use crate::pauli::PauliOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Freeze,
    Perturb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    /// Frustrated checks whose neighbourhoods were targeted.
    Frustrated(Vec<usize>),
    /// Two frustrated checks sharing qubits; only the shared qubits were targeted.
    Collision(usize, usize),
}

impl Trigger {
    pub fn checks(&self) -> Vec<usize> {
        match self {
            Trigger::Frustrated(cs) => cs.clone(),
            Trigger::Collision(c, d) => vec![*c, *d],
        }
    }
}

/// One intervention, recorded so that a decode can be replayed exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationEvent {
    /// Iteration after which the intervention was applied.
    pub iteration: usize,
    pub kind: EventKind,
    pub trigger: Trigger,
    pub qubits: Vec<usize>,
    /// `(δ_X, δ_Y, δ_Z)` per perturbed qubit; empty for freezes.
    pub deltas: Vec<[f64; 3]>,
    /// Qubits whose frozen prior was restored before this event.
    pub restored: Vec<usize>,
}

impl PerturbationEvent {
    /// Line-based record: `iteration kind trigger qubits deltas restored`.
    pub fn to_record(&self) -> String {
        let kind = match self.kind {
            EventKind::Freeze => "freeze",
            EventKind::Perturb => "perturb",
        };
        let trigger = match &self.trigger {
            Trigger::Frustrated(cs) => format!("frustrated:{}", join(cs)),
            Trigger::Collision(c, d) => format!("collision:{c},{d}"),
        };
        let deltas = if self.deltas.is_empty() {
            "-".to_string()
        } else {
            self.deltas
                .iter()
                .map(|d| format!("{:.6}/{:.6}/{:.6}", d[0], d[1], d[2]))
                .collect::<Vec<_>>()
                .join(",")
        };
        let restored = if self.restored.is_empty() {
            "-".to_string()
        } else {
            join(&self.restored)
        };
        format!(
            "{} {kind} {trigger} qubits:{} deltas:{deltas} restored:{restored}",
            self.iteration,
            join(&self.qubits)
        )
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicDecode {
    pub result: DecodeResult,
    pub events: Vec<PerturbationEvent>,
}

/// Checks whose commutation with `correction` disagrees with the syndrome, ascending.
pub fn find_frustrated_checks(
    code: &StabilizerCode,
    correction: &PauliOperator,
    syndrome: &Syndrome,
) -> Result<Vec<usize>> {
    code.check_syndrome_len(syndrome)?;
    let got = code.syndrome(correction)?;
    Ok(frustrated_between(&got, syndrome))
}

fn frustrated_between(got: &Syndrome, want: &Syndrome) -> Vec<usize> {
    (0..want.len())
        .filter(|&c| got.sign(c) != want.sign(c))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub first: usize,
    pub second: usize,
    pub shared_qubits: Vec<usize>,
}

/// First pair of frustrated checks (in lexicographic order) sharing at least one qubit.
pub fn collision_targets(code: &StabilizerCode, frustrated: &[usize]) -> Option<Collision> {
    let supports: Vec<Vec<usize>> = frustrated
        .iter()
        .map(|&c| code.check_neighbors(c).collect())
        .collect();
    for i in 0..frustrated.len() {
        for j in i + 1..frustrated.len() {
            let shared = sorted_intersection(&supports[i], &supports[j]);
            if !shared.is_empty() {
                let (first, second) = (
                    frustrated[i].min(frustrated[j]),
                    frustrated[i].max(frustrated[j]),
                );
                return Some(Collision {
                    first,
                    second,
                    shared_qubits: shared,
                });
            }
        }
    }
    None
}

/// Sets the working prior of `q` to the (floored) identity distribution and
/// refreshes its outgoing messages. Returns the previous prior.
pub fn freeze_qubit(state: &mut MessageState, code: &StabilizerCode, q: usize) -> Dist {
    let saved = state.working_prior[q];
    let mut frozen = [1.0, 0.0, 0.0, 0.0];
    normalize_floored(&mut frozen);
    state.working_prior[q] = frozen;
    bp::refresh_qubit(state, code, q);
    saved
}

pub fn restore_qubit(state: &mut MessageState, code: &StabilizerCode, q: usize, prior: Dist) {
    state.working_prior[q] = prior;
    bp::refresh_qubit(state, code, q);
}

/// Multiplies the `X`, `Y`, `Z` entries of each qubit's working prior by
/// `1 + δ_P` with `δ_P ~ U[0, delta]`, renormalizes and refreshes the
/// qubit's outgoing messages. Returns the drawn deltas.
pub fn perturb_qubits(
    state: &mut MessageState,
    code: &StabilizerCode,
    qubits: &[usize],
    delta: f64,
    rng: &mut impl Rng,
) -> Vec<[f64; 3]> {
    qubits
        .iter()
        .map(|&q| {
            let d = [0; 3].map(|_| rng.gen_range(0.0..=delta));
            let p = &mut state.working_prior[q];
            for (k, dk) in d.iter().enumerate() {
                p[k + 1] *= 1.0 + dk;
            }
            normalize_floored(p);
            bp::refresh_qubit(state, code, q);
            d
        })
        .collect()
}

/// Perturbs the neighbourhoods of all frustrated checks, or only the shared
/// qubits of the first colliding pair when `collision` is set and one exists.
///
/// A qubit adjacent to several frustrated checks is perturbed once per such
/// check, each time with fresh deltas.
pub fn perturb_step(
    state: &mut MessageState,
    code: &StabilizerCode,
    frustrated: &[usize],
    delta: f64,
    collision: bool,
    iteration: usize,
    rng: &mut impl Rng,
) -> PerturbationEvent {
    let (trigger, qubits) = match collision
        .then(|| collision_targets(code, frustrated))
        .flatten()
    {
        Some(col) => (Trigger::Collision(col.first, col.second), col.shared_qubits),
        None => {
            let qubits: Vec<usize> = frustrated
                .iter()
                .flat_map(|&c| code.check_neighbors(c))
                .collect();
            (Trigger::Frustrated(frustrated.to_vec()), qubits)
        }
    };
    let deltas = perturb_qubits(state, code, &qubits, delta, rng);
    PerturbationEvent {
        iteration,
        kind: EventKind::Perturb,
        trigger,
        qubits,
        deltas,
        restored: Vec::new(),
    }
}

#[derive(Debug, Clone)]
struct FreezeTarget {
    trigger: Trigger,
    /// Candidates not yet tried, consumed from the back.
    untried: Vec<usize>,
    current: usize,
}

/// Bookkeeping for the freezing procedure across interventions of one decode.
///
/// A target check gets one frozen qubit at a time. If the check is still
/// frustrated at the next intervention the qubit is restored and another
/// neighbour is tried; if the check was satisfied the freeze stays and a new
/// frustrated check is targeted. When a check runs out of candidates every
/// frozen qubit is restored and the caller should fall back to perturbation.
#[derive(Debug, Clone, Default)]
pub struct FreezeScheduler {
    target: Option<FreezeTarget>,
    frozen: Vec<(usize, Dist)>,
}

impl FreezeScheduler {
    pub fn new() -> Self {
        Self::default()
    }

    /// Frozen qubits, in the order they were frozen.
    pub fn frozen_qubits(&self) -> Vec<usize> {
        self.frozen.iter().map(|(q, _)| *q).collect()
    }

    fn restore(&mut self, state: &mut MessageState, code: &StabilizerCode, q: usize) {
        if let Some(pos) = self.frozen.iter().position(|(f, _)| *f == q) {
            let (_, prior) = self.frozen.remove(pos);
            restore_qubit(state, code, q, prior);
        }
    }

    /// Restores every frozen qubit; returns them.
    pub fn restore_all(&mut self, state: &mut MessageState, code: &StabilizerCode) -> Vec<usize> {
        let qubits = self.frozen_qubits();
        for (q, prior) in self.frozen.drain(..).rev() {
            restore_qubit(state, code, q, prior);
        }
        self.target = None;
        qubits
    }

    fn freeze(&mut self, state: &mut MessageState, code: &StabilizerCode, q: usize) {
        let saved = freeze_qubit(state, code, q);
        self.frozen.push((q, saved));
    }

    /// Applies the next freeze. Returns `None` when the current target is
    /// exhausted (all frozen qubits have then been restored).
    pub fn step(
        &mut self,
        state: &mut MessageState,
        code: &StabilizerCode,
        frustrated: &[usize],
        collision: bool,
        iteration: usize,
        rng: &mut impl Rng,
    ) -> Option<PerturbationEvent> {
        if let Some(mut target) = self.target.take() {
            let still_frustrated = target
                .trigger
                .checks()
                .iter()
                .any(|c| frustrated.contains(c));
            if still_frustrated {
                self.restore(state, code, target.current);
                let restored = vec![target.current];
                let next = target.untried.pop()?;
                self.freeze(state, code, next);
                target.current = next;
                let event = PerturbationEvent {
                    iteration,
                    kind: EventKind::Freeze,
                    trigger: target.trigger.clone(),
                    qubits: vec![next],
                    deltas: Vec::new(),
                    restored,
                };
                self.target = Some(target);
                return Some(event);
            }
        }

        let (trigger, mut candidates) = match collision
            .then(|| collision_targets(code, frustrated))
            .flatten()
        {
            Some(col) => (Trigger::Collision(col.first, col.second), col.shared_qubits),
            None => {
                let c = *frustrated.first()?;
                (
                    Trigger::Frustrated(vec![c]),
                    code.check_neighbors(c).collect(),
                )
            }
        };
        candidates.retain(|q| !self.frozen.iter().any(|(f, _)| f == q));
        candidates.shuffle(rng);
        let first = candidates.pop()?;
        self.freeze(state, code, first);
        self.target = Some(FreezeTarget {
            trigger: trigger.clone(),
            untried: candidates,
            current: first,
        });
        Some(PerturbationEvent {
            iteration,
            kind: EventKind::Freeze,
            trigger,
            qubits: vec![first],
            deltas: Vec::new(),
            restored: Vec::new(),
        })
    }
}

/// BP with the intervention selected by `config.heuristic`.
pub fn decode_with_heuristics(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
    config: &DecodeConfig,
) -> Result<HeuristicDecode> {
    decode_with_heuristics_observed(code, prior, syndrome, config, &mut |_, _| {})
}

/// [`decode_with_heuristics`], calling `observer(iteration, beliefs)` after every iteration.
pub fn decode_with_heuristics_observed(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    syndrome: &Syndrome,
    config: &DecodeConfig,
    observer: &mut dyn FnMut(usize, &[Dist]),
) -> Result<HeuristicDecode> {
    config.validate()?;
    code.check_syndrome_len(syndrome)?;
    let mut state = bp::init_messages(code, prior)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut scheduler = FreezeScheduler::new();
    let mut events = Vec::new();
    let mut since_last = 0;
    let mut last = None;

    for it in 1..=config.max_iterations {
        let out = bp::iterate(&mut state, code, syndrome);
        observer(it, &out.beliefs);
        if out.converged {
            last = Some((it, out));
            break;
        }
        since_last += 1;
        if config.heuristic != Heuristic::None
            && since_last >= config.t_pert
            && it < config.max_iterations
        {
            since_last = 0;
            let frustrated = frustrated_between(&out.correction_syndrome, syndrome);
            let event = match config.heuristic {
                Heuristic::None => unreachable!(),
                Heuristic::Perturb | Heuristic::CollisionPerturb => {
                    let collision = config.heuristic == Heuristic::CollisionPerturb;
                    perturb_step(
                        &mut state,
                        code,
                        &frustrated,
                        config.delta,
                        collision,
                        it,
                        &mut rng,
                    )
                }
                Heuristic::Freeze | Heuristic::CollisionFreeze => {
                    let collision = config.heuristic == Heuristic::CollisionFreeze;
                    match scheduler.step(&mut state, code, &frustrated, collision, it, &mut rng) {
                        Some(e) => e,
                        None => {
                            let restored = scheduler.restore_all(&mut state, code);
                            let mut e = perturb_step(
                                &mut state,
                                code,
                                &frustrated,
                                config.delta,
                                false,
                                it,
                                &mut rng,
                            );
                            e.restored = restored;
                            e
                        }
                    }
                }
            };
            log::trace!("intervention: {}", event.to_record());
            events.push(event);
        }
        last = Some((it, out));
    }

    let (iterations_used, out) = last.expect("at least one iteration");
    Ok(HeuristicDecode {
        result: DecodeResult {
            correction: out.correction,
            converged: out.converged,
            iterations_used,
            final_beliefs: out.beliefs,
        },
        events,
    })
}
