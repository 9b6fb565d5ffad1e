//! Round logic of measurement-device-independent QKD: encoding, the
//! untrusted relay's Bell measurement, sifting and the flip rule.
//!
//! Bob is always the party that flips, so Alice's bit is the reference key
//! bit in every kept round.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qcore::{bell_probabilities, measure_bell, BellOutcome, StateError, StateVector, TrialRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::Z, Basis::X];

    pub fn random(rng: &mut TrialRng) -> Self {
        if rng.coin() {
            Basis::X
        } else {
            Basis::Z
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
        })
    }
}

/// A party's secret bit and encoding basis for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartyChoice {
    pub bit: bool,
    pub basis: Basis,
}

impl PartyChoice {
    pub fn new(bit: bool, basis: Basis) -> Self {
        Self { bit, basis }
    }

    /// Uniform bit; uniform basis unless `forced`.
    pub fn random(rng: &mut TrialRng, forced: Option<Basis>) -> Self {
        let bit = rng.coin();
        let basis = forced.unwrap_or_else(|| Basis::random(rng));
        Self { bit, basis }
    }

    pub fn ket_label(self) -> &'static str {
        match (self.bit, self.basis) {
            (false, Basis::Z) => "0",
            (true, Basis::Z) => "1",
            (false, Basis::X) => "+",
            (true, Basis::X) => "-",
        }
    }

    /// All four single-qubit preparations, Z basis first.
    pub fn all() -> [PartyChoice; 4] {
        [
            PartyChoice::new(false, Basis::Z),
            PartyChoice::new(true, Basis::Z),
            PartyChoice::new(false, Basis::X),
            PartyChoice::new(true, Basis::X),
        ]
    }
}

impl fmt::Display for PartyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.ket_label())
    }
}

/// Z: `0 → |0⟩`, `1 → |1⟩`; X: `0 → |+⟩`, `1 → |−⟩`.
pub fn encode(choice: PartyChoice) -> StateVector {
    StateVector::product(choice.ket_label()).expect("single-symbol label")
}

/// Which Bell outcomes the relay can resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionMode {
    #[default]
    Full,
    /// Only Ψ± are identified; Φ± are reported as a failed detection.
    PsiOnly,
}

impl DetectionMode {
    pub fn announce(self, outcome: BellOutcome) -> RelayAnnouncement {
        match self {
            DetectionMode::PsiOnly if !outcome.is_psi() => RelayAnnouncement::Failure,
            _ => RelayAnnouncement::Outcome(outcome),
        }
    }
}

impl fmt::Display for DetectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectionMode::Full => "full",
            DetectionMode::PsiOnly => "psi-only",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelayAnnouncement {
    Outcome(BellOutcome),
    Failure,
}

impl RelayAnnouncement {
    pub fn outcome(self) -> Option<BellOutcome> {
        match self {
            RelayAnnouncement::Outcome(o) => Some(o),
            RelayAnnouncement::Failure => None,
        }
    }
}

impl fmt::Display for RelayAnnouncement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelayAnnouncement::Outcome(o) => write!(f, "{o}"),
            RelayAnnouncement::Failure => f.write_str("failure"),
        }
    }
}

fn joint_state(qubit_a: &StateVector, qubit_b: &StateVector) -> Result<StateVector, StateError> {
    for q in [qubit_a, qubit_b] {
        if q.n_qubits() != 1 {
            return Err(StateError::WrongQubitCount {
                expected: 1,
                found: q.n_qubits(),
            });
        }
    }
    qubit_a.tensor(qubit_b)
}

/// Honest relay: Bell measurement of Alice's and Bob's qubits.
pub fn honest_relay(
    qubit_a: &StateVector,
    qubit_b: &StateVector,
    mode: DetectionMode,
    rng: &mut TrialRng,
) -> Result<RelayAnnouncement, StateError> {
    let joint = joint_state(qubit_a, qubit_b)?;
    let (outcome, _) = measure_bell(&joint, 0, 1, rng)?;
    Ok(mode.announce(outcome))
}

/// Analytic announcement probabilities of the honest relay for two
/// preparations, indexed by [`BellOutcome::index`].
pub fn honest_announcement_probabilities(alice: PartyChoice, bob: PartyChoice) -> [f64; 4] {
    let joint = encode(alice)
        .tensor(&encode(bob))
        .expect("two single-qubit states");
    bell_probabilities(&joint, 0, 1).expect("wires 0 and 1 exist")
}

/// Whether Bob toggles his bit after a matched-basis round.
pub fn flip_rule(basis: Basis, announcement: BellOutcome) -> bool {
    match basis {
        Basis::Z => announcement.is_psi(),
        Basis::X => announcement.is_minus(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiftResult {
    pub kept: bool,
    pub alice_final: Option<bool>,
    pub bob_final: Option<bool>,
    pub error: Option<bool>,
}

impl SiftResult {
    pub const DISCARDED: SiftResult = SiftResult {
        kept: false,
        alice_final: None,
        bob_final: None,
        error: None,
    };

    pub fn is_error(&self) -> bool {
        self.error == Some(true)
    }
}

/// Drops mismatched-basis and failed rounds, then applies the flip rule to
/// Bob's bit.
pub fn sift(alice: PartyChoice, bob: PartyChoice, announcement: RelayAnnouncement) -> SiftResult {
    let outcome = match announcement {
        RelayAnnouncement::Outcome(o) if alice.basis == bob.basis => o,
        _ => return SiftResult::DISCARDED,
    };
    let alice_final = alice.bit;
    let bob_final = bob.bit ^ flip_rule(alice.basis, outcome);
    SiftResult {
        kept: true,
        alice_final: Some(alice_final),
        bob_final: Some(bob_final),
        error: Some(alice_final != bob_final),
    }
}
