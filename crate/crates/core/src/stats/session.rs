use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::Estimate;
use super::theory::{theory_for, TheoryTriple};
use crate::attack::{run_attack_round, EveRecord, RoundRng, Strategy, StrategyKind};
use crate::error::{ConfigError, Error};
use crate::protocol::{sift, Basis, DetectionMode, PartyChoice, RelayAnnouncement, SiftResult};
use crate::qcore::{StateError, TrialRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub strategy: Strategy,
    pub mode: DetectionMode,
    pub n_rounds: u64,
    pub seed: u64,
    /// Both parties use this basis in every round instead of a fair coin.
    pub forced_basis: Option<Basis>,
}

impl SessionConfig {
    pub fn new(strategy: Strategy, n_rounds: u64, seed: u64) -> Self {
        Self {
            strategy,
            mode: DetectionMode::Full,
            n_rounds,
            seed,
            forced_basis: None,
        }
    }

    pub fn with_mode(mut self, mode: DetectionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_forced_basis(mut self, basis: Option<Basis>) -> Self {
        self.forced_basis = basis;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_rounds == 0 {
            return Err(ConfigError::NoRounds);
        }
        Strategy::new(self.strategy.kind, self.strategy.zeta)?;
        Ok(())
    }
}

/// Audit row for one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub alice: PartyChoice,
    pub bob: PartyChoice,
    pub announcement: RelayAnnouncement,
    pub sift: SiftResult,
    pub eve: EveRecord,
}

impl TrialRecord {
    /// Eve's guess agrees with Alice's final bit; `None` for discarded rounds.
    pub fn guess_correct(&self) -> Option<bool> {
        match (self.sift.alice_final, self.eve.guess) {
            (Some(a), Some(g)) => Some(a == g),
            _ => None,
        }
    }

    /// Eve's error prediction agrees with the actual error flag; `Unknown`
    /// counts as wrong.
    pub fn prediction_correct(&self) -> Option<bool> {
        let actual = self.sift.error?;
        Some(self.eve.error_prediction.predicts() == Some(actual))
    }
}

/// Runs trial `index` of `config` from its own random substreams.
pub fn simulate_trial(config: &SessionConfig, index: u64) -> Result<TrialRecord, StateError> {
    let mut parties = TrialRng::substream(config.seed, index);
    let alice = PartyChoice::random(&mut parties, config.forced_basis);
    let bob = PartyChoice::random(&mut parties, config.forced_basis);
    let mut round = RoundRng::for_trial(config.seed, index);
    let outcome = run_attack_round(alice, bob, config.strategy, config.mode, &mut round)?;
    let sift = sift(alice, bob, outcome.announcement);
    Ok(TrialRecord {
        index,
        alice,
        bob,
        announcement: outcome.announcement,
        sift,
        eve: outcome.eve,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    rounds: u64,
    kept: u64,
    errors: u64,
    kept_z: u64,
    errors_z: u64,
    kept_x: u64,
    errors_x: u64,
    attacked_kept: u64,
    attacked_correct: u64,
    correct: u64,
    predicted: u64,
}

impl Tally {
    fn record(mut self, t: &TrialRecord) -> Self {
        self.rounds += 1;
        if !t.sift.kept {
            return self;
        }
        let error = t.sift.is_error() as u64;
        let correct = t.guess_correct() == Some(true);
        self.kept += 1;
        self.errors += error;
        match t.alice.basis {
            Basis::Z => {
                self.kept_z += 1;
                self.errors_z += error;
            }
            Basis::X => {
                self.kept_x += 1;
                self.errors_x += error;
            }
        }
        self.correct += correct as u64;
        if t.eve.attacked {
            self.attacked_kept += 1;
            self.attacked_correct += correct as u64;
        }
        self.predicted += (t.prediction_correct() == Some(true)) as u64;
        self
    }

    fn merge(self, o: Self) -> Self {
        Self {
            rounds: self.rounds + o.rounds,
            kept: self.kept + o.kept,
            errors: self.errors + o.errors,
            kept_z: self.kept_z + o.kept_z,
            errors_z: self.errors_z + o.errors_z,
            kept_x: self.kept_x + o.kept_x,
            errors_x: self.errors_x + o.errors_x,
            attacked_kept: self.attacked_kept + o.attacked_kept,
            attacked_correct: self.attacked_correct + o.attacked_correct,
            correct: self.correct + o.correct,
            predicted: self.predicted + o.predicted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub strategy: StrategyKind,
    #[serde(serialize_with = "super::sig::serialize")]
    pub zeta: f64,
    pub mode: DetectionMode,
    pub forced_basis: Option<Basis>,
    pub seed: u64,
    pub n_rounds: u64,
    pub n_kept: u64,
    pub n_attacked_kept: u64,
    pub keep_rate: Estimate,
    pub ber_ab: Option<Estimate>,
    /// BER over kept rounds prepared in Z.
    pub ber_z: Option<Estimate>,
    /// BER over kept rounds prepared in X.
    pub ber_x: Option<Estimate>,
    /// Eve's guess success over attacked kept rounds.
    pub p_e_attacked: Option<Estimate>,
    /// Eve's guess success over all kept rounds, fallback guesses included.
    pub p_e_overall: Option<Estimate>,
    /// Error-prediction success over kept rounds; unattacked rounds count as
    /// misses.
    pub pi_e: Option<Estimate>,
    pub theory: TheoryTriple,
}

/// Runs every trial of `config` (in parallel) and aggregates the estimators.
/// The result depends only on `config`.
pub fn run_session(config: &SessionConfig) -> Result<SessionReport, Error> {
    config.validate()?;
    let tally = (0..config.n_rounds)
        .into_par_iter()
        .map(|i| simulate_trial(config, i))
        .try_fold(Tally::default, |acc, t| t.map(|t| acc.record(&t)))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(report_from(config, &tally))
}

fn report_from(config: &SessionConfig, t: &Tally) -> SessionReport {
    SessionReport {
        strategy: config.strategy.kind,
        zeta: config.strategy.zeta,
        mode: config.mode,
        forced_basis: config.forced_basis,
        seed: config.seed,
        n_rounds: t.rounds,
        n_kept: t.kept,
        n_attacked_kept: t.attacked_kept,
        keep_rate: Estimate::binomial(t.kept, t.rounds).expect("at least one round"),
        ber_ab: Estimate::binomial(t.errors, t.kept),
        ber_z: Estimate::binomial(t.errors_z, t.kept_z),
        ber_x: Estimate::binomial(t.errors_x, t.kept_x),
        p_e_attacked: Estimate::binomial(t.attacked_correct, t.attacked_kept),
        p_e_overall: Estimate::binomial(t.correct, t.kept),
        pi_e: Estimate::binomial(t.predicted, t.kept),
        theory: theory_for(config.strategy, config.forced_basis),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_config() {
        let mut c = SessionConfig::new(Strategy::cnot(), 0, 1);
        assert!(matches!(run_session(&c), Err(Error::Config(ConfigError::NoRounds))));
        c.n_rounds = 10;
        c.strategy.zeta = 2.0;
        assert!(matches!(
            run_session(&c),
            Err(Error::Config(ConfigError::InvalidZeta(_)))
        ));
    }

    #[test]
    fn trial_is_reproducible() {
        let c = SessionConfig::new(Strategy::hadamard_cnot(0.5).unwrap(), 100, 77);
        for i in [0, 13, 99] {
            assert_eq!(simulate_trial(&c, i).unwrap(), simulate_trial(&c, i).unwrap());
        }
    }

    #[test]
    fn tally_matches_serial_records() {
        let c = SessionConfig::new(Strategy::hadamard_cnot(0.6).unwrap(), 2000, 5);
        let records: Vec<_> = (0..c.n_rounds).map(|i| simulate_trial(&c, i).unwrap()).collect();
        let serial = records.iter().fold(Tally::default(), |acc, r| acc.record(r));
        let report = run_session(&c).unwrap();
        assert_eq!(report, report_from(&c, &serial));
        assert_eq!(report.n_kept, records.iter().filter(|r| r.sift.kept).count() as u64);
    }

    #[test]
    fn honest_session_has_no_errors() {
        let report = run_session(&SessionConfig::new(Strategy::honest(), 5000, 3)).unwrap();
        assert_eq!(report.ber_ab.unwrap().successes, 0);
        assert_eq!(report.n_attacked_kept, 0);
        assert!(report.p_e_attacked.is_none());
        assert_eq!(report.pi_e.unwrap().value, 0.0);
    }

    #[test]
    fn single_round_session() {
        let c = SessionConfig::new(Strategy::cnot(), 1, 0).with_forced_basis(Some(Basis::Z));
        let r = run_session(&c).unwrap();
        assert_eq!(r.n_rounds, 1);
        assert_eq!(r.n_kept, 1);
        assert_eq!(r.keep_rate.value, 1.0);
    }
}
