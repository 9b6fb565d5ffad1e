use num_complex::Complex64;

use super::bell::BellOutcome;
use super::error::StateError;
use super::state::{Amplitude, StateVector};

pub type WirePair = (usize, usize);

/// Coefficients of a 4-qubit state in the Bell ⊗ Bell basis of two wire
/// pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BellDecomposition {
    pair1: WirePair,
    pair2: WirePair,
    coeffs: [[Amplitude; 4]; 4],
}

impl BellDecomposition {
    pub fn pairs(&self) -> (WirePair, WirePair) {
        (self.pair1, self.pair2)
    }

    pub fn coefficient(&self, first: BellOutcome, second: BellOutcome) -> Amplitude {
        self.coeffs[first.index()][second.index()]
    }

    /// All 16 coefficients in `BellOutcome::ALL × BellOutcome::ALL` order.
    pub fn iter(&self) -> impl Iterator<Item = (BellOutcome, BellOutcome, Amplitude)> + '_ {
        BellOutcome::ALL.into_iter().flat_map(move |a| {
            BellOutcome::ALL
                .into_iter()
                .map(move |b| (a, b, self.coefficient(a, b)))
        })
    }

    pub fn nonzero(&self, tol: f64) -> Vec<(BellOutcome, BellOutcome, Amplitude)> {
        self.iter().filter(|(_, _, c)| c.norm() > tol).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.iter().map(|(_, _, c)| c.norm_sqr()).sum()
    }

    /// Rebuilds the state `sum c_ij |Bell_i>_pair1 |Bell_j>_pair2`.
    pub fn reconstruct(&self) -> Result<StateVector, StateError> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 16];
        for (a, b, c) in self.iter() {
            let basis = bell_product(a, self.pair1, b, self.pair2);
            for (acc, v) in amps.iter_mut().zip(basis) {
                *acc += c * v;
            }
        }
        StateVector::from_amplitudes(amps)
    }
}

fn bit(index: usize, wire: usize) -> usize {
    (index >> (3 - wire)) & 1
}

/// Real amplitudes of `|first>_pair1 ⊗ |second>_pair2` over 4 wires.
fn bell_product(first: BellOutcome, pair1: WirePair, second: BellOutcome, pair2: WirePair) -> [f64; 16] {
    let a = first.amplitudes();
    let b = second.amplitudes();
    let mut out = [0.0; 16];
    for (i, v) in out.iter_mut().enumerate() {
        let la = (bit(i, pair1.0) << 1) | bit(i, pair1.1);
        let lb = (bit(i, pair2.0) << 1) | bit(i, pair2.1);
        *v = a[la] * b[lb];
    }
    out
}

/// Change of basis of a 4-qubit `state` into Bell ⊗ Bell over
/// `pair1` and `pair2`, which together must cover wires 0..4.
pub fn bell_decompose(
    state: &StateVector,
    pair1: WirePair,
    pair2: WirePair,
) -> Result<BellDecomposition, StateError> {
    if state.n_qubits() != 4 {
        return Err(StateError::WrongQubitCount {
            expected: 4,
            found: state.n_qubits(),
        });
    }
    let mut wires = [pair1.0, pair1.1, pair2.0, pair2.1];
    wires.sort_unstable();
    if wires != [0, 1, 2, 3] {
        return Err(StateError::NotPermutation);
    }
    let mut coeffs = [[Complex64::new(0.0, 0.0); 4]; 4];
    for a in BellOutcome::ALL {
        for b in BellOutcome::ALL {
            // Bell amplitudes are real, so the bra needs no conjugation.
            let basis = bell_product(a, pair1, b, pair2);
            coeffs[a.index()][b.index()] = basis
                .iter()
                .zip(state.amplitudes())
                .map(|(&v, &s)| s * v)
                .sum();
        }
    }
    Ok(BellDecomposition {
        pair1,
        pair2,
        coeffs,
    })
}
