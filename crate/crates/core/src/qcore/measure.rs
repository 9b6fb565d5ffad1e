use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bell::BellOutcome;
use super::error::StateError;
use super::gate::Gate;
use super::rng::TrialRng;
use super::state::StateVector;

/// Probabilities below this are treated as exactly zero when sampling, so
/// rounding residue never produces an outcome the state forbids.
const ZERO_PROB: f64 = 1e-12;

/// Classical outcome of a computational-basis measurement, one bit per
/// measured wire in the order the wires were listed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn from_index(index: usize, width: usize) -> Self {
        Self(
            (0..width)
                .map(|j| (index >> (width - 1 - j)) & 1 == 1)
                .collect(),
        )
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(serde::de::Error::custom(format!("invalid bit {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

/// Draws an index from `probs`, skipping entries below [`ZERO_PROB`].
pub fn sample_index(probs: &[f64], rng: &mut TrialRng) -> usize {
    let total: f64 = probs.iter().filter(|&&p| p >= ZERO_PROB).sum();
    let mut u = rng.uniform() * total;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p < ZERO_PROB {
            continue;
        }
        last = i;
        if u < p {
            return i;
        }
        u -= p;
    }
    last
}

/// Born probabilities of every bitstring on `wires` (first listed wire is
/// the most significant bit of the outcome index).
pub fn computational_probabilities(
    state: &StateVector,
    wires: &[usize],
) -> Result<Vec<f64>, StateError> {
    state.check_wires(wires)?;
    let mut probs = vec![0.0; 1 << wires.len()];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let local = wires.iter().fold(0, |acc, &w| (acc << 1) | state.bit(i, w));
        probs[local] += a.norm_sqr();
    }
    Ok(probs)
}

/// Projective measurement of `wires` in the computational basis.
///
/// Returns the sampled bits and the collapsed, renormalized state on all
/// wires.
pub fn measure_computational(
    state: &StateVector,
    wires: &[usize],
    rng: &mut TrialRng,
) -> Result<(BitString, StateVector), StateError> {
    let probs = computational_probabilities(state, wires)?;
    let outcome = sample_index(&probs, rng);
    let collapsed = StateVector::from_amplitudes(state.mask_outcome(wires, outcome))?;
    Ok((BitString::from_index(outcome, wires.len()), collapsed))
}

fn to_bell_frame(state: &StateVector, q1: usize, q2: usize) -> Result<StateVector, StateError> {
    state.apply_all(&[
        Gate::Cnot {
            control: q1,
            target: q2,
        },
        Gate::H(q1),
    ])
}

fn from_bell_frame(state: &StateVector, q1: usize, q2: usize) -> Result<StateVector, StateError> {
    state.apply_all(&[
        Gate::H(q1),
        Gate::Cnot {
            control: q1,
            target: q2,
        },
    ])
}

fn check_pair(state: &StateVector, q1: usize, q2: usize) -> Result<(), StateError> {
    state.check_wires(&[q1, q2])
}

/// Probabilities of the four Bell outcomes on `(q1, q2)`, indexed by
/// [`BellOutcome::index`].
pub fn bell_probabilities(
    state: &StateVector,
    q1: usize,
    q2: usize,
) -> Result<[f64; 4], StateError> {
    check_pair(state, q1, q2)?;
    let rotated = to_bell_frame(state, q1, q2)?;
    let probs = computational_probabilities(&rotated, &[q1, q2])?;
    let mut out = [0.0; 4];
    for (local, p) in probs.into_iter().enumerate() {
        let outcome = BellOutcome::from_rotated_bits(local & 2 != 0, local & 1 != 0);
        out[outcome.index()] = p;
    }
    Ok(out)
}

/// Bell-basis measurement of `(q1, q2)`.
///
/// Implemented as CNOT(q1→q2), H(q1), computational measurement of the pair,
/// then the inverse rotation, so the returned state has the pair projected
/// onto the announced Bell state and the other wires renormalized.
pub fn measure_bell(
    state: &StateVector,
    q1: usize,
    q2: usize,
    rng: &mut TrialRng,
) -> Result<(BellOutcome, StateVector), StateError> {
    check_pair(state, q1, q2)?;
    let rotated = to_bell_frame(state, q1, q2)?;
    let (bits, collapsed) = measure_computational(&rotated, &[q1, q2], rng)?;
    let outcome = BellOutcome::from_rotated_bits(bits.0[0], bits.0[1]);
    Ok((outcome, from_bell_frame(&collapsed, q1, q2)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_probs(actual: [f64; 4], expected: [f64; 4]) {
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() < 1e-9, "{actual:?} vs {expected:?}");
        }
    }

    #[test]
    fn bell_probs_on_zero_zero() {
        let s = StateVector::product("00").unwrap();
        assert_probs(bell_probabilities(&s, 0, 1).unwrap(), [0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn bell_probs_on_plus_minus() {
        let s = StateVector::product("+-").unwrap();
        assert_probs(bell_probabilities(&s, 0, 1).unwrap(), [0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn each_bell_state_is_an_eigenstate() {
        let mut rng = TrialRng::from_seed(11);
        for o in BellOutcome::ALL {
            let mut expected = [0.0; 4];
            expected[o.index()] = 1.0;
            assert_probs(bell_probabilities(&o.state(), 0, 1).unwrap(), expected);
            for _ in 0..50 {
                let (got, post) = measure_bell(&o.state(), 0, 1, &mut rng).unwrap();
                assert_eq!(got, o);
                assert!(post.approx_eq(&o.state(), 1e-9));
            }
        }
    }

    #[test]
    fn bell_collapse_projects_pair() {
        let mut rng = TrialRng::from_seed(5);
        let s = StateVector::product("0+1").unwrap();
        for _ in 0..20 {
            let (o, post) = measure_bell(&s, 0, 2, &mut rng).unwrap();
            let (p, rest) = post.project_out(&[0, 2], &o.state()).unwrap();
            assert!((p - 1.0).abs() < 1e-9);
            assert!(rest.approx_eq(&StateVector::product("+").unwrap(), 1e-9));
        }
    }

    #[test]
    fn computational_on_basis_state() {
        let mut rng = TrialRng::from_seed(1);
        let s = StateVector::product("01").unwrap();
        for _ in 0..20 {
            let (bits, post) = measure_computational(&s, &[0, 1], &mut rng).unwrap();
            assert_eq!(bits.to_string(), "01");
            assert!(post.approx_eq(&s, 1e-12));
        }
    }

    #[test]
    fn computational_on_phi_plus_is_correlated() {
        let mut rng = TrialRng::from_seed(2);
        let s = BellOutcome::PhiPlus.state();
        for _ in 0..100 {
            let (bits, post) = measure_computational(&s, &[0, 1], &mut rng).unwrap();
            assert_eq!(bits.0[0], bits.0[1]);
            assert!(post.approx_eq(&StateVector::product(&bits.to_string()).unwrap(), 1e-12));
        }
    }

    #[test]
    fn partial_measurement_renormalizes() {
        let s = StateVector::from_kets(&[("0+", 1.0), ("1-", 1.0)]).unwrap();
        let probs = computational_probabilities(&s, &[0]).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-12 && (probs[1] - 0.5).abs() < 1e-12);
        let mut rng = TrialRng::from_seed(3);
        let (bits, post) = measure_computational(&s, &[0], &mut rng).unwrap();
        let expected = if bits.0[0] { "1-" } else { "0+" };
        assert!(post.approx_eq(&StateVector::product(expected).unwrap(), 1e-12));
    }

    #[test]
    fn measurement_errors() {
        let s = StateVector::zero(2).unwrap();
        let mut rng = TrialRng::from_seed(0);
        assert_eq!(
            measure_bell(&s, 0, 0, &mut rng).unwrap_err(),
            StateError::DuplicateWire(0)
        );
        assert!(measure_bell(&s, 0, 2, &mut rng).is_err());
        assert_eq!(
            measure_computational(&s, &[1, 1], &mut rng).unwrap_err(),
            StateError::DuplicateWire(1)
        );
    }

    #[test]
    fn sampler_never_picks_zero_mass() {
        let mut rng = TrialRng::from_seed(8);
        let probs = [0.0, 1e-17, 0.5, 0.5 - 1e-17];
        for _ in 0..10_000 {
            let i = sample_index(&probs, &mut rng);
            assert!(i == 2 || i == 3);
        }
    }

    #[test]
    fn bitstring_serde() {
        let b = BitString(vec![true, false]);
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "\"10\"");
        assert_eq!(serde_json::from_str::<BitString>(&json).unwrap(), b);
    }
}
