use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::StateVector;

/// One of the four Bell states.
///
/// ```text
/// Φ± = (|00⟩ ± |11⟩)/√2
/// Ψ± = (|01⟩ ± |10⟩)/√2
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Outcome read off the pair after the CNOT + H basis change:
    /// `00 → Φ⁺`, `10 → Φ⁻`, `01 → Ψ⁺`, `11 → Ψ⁻` (first bit is the
    /// Hadamard wire).
    pub fn from_rotated_bits(first: bool, second: bool) -> Self {
        match (first, second) {
            (false, false) => BellOutcome::PhiPlus,
            (true, false) => BellOutcome::PhiMinus,
            (false, true) => BellOutcome::PsiPlus,
            (true, true) => BellOutcome::PsiMinus,
        }
    }

    pub fn is_psi(self) -> bool {
        matches!(self, BellOutcome::PsiPlus | BellOutcome::PsiMinus)
    }

    /// Relative sign between the two branches is negative.
    pub fn is_minus(self) -> bool {
        matches!(self, BellOutcome::PhiMinus | BellOutcome::PsiMinus)
    }

    /// Real amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(self) -> [f64; 4] {
        let h = FRAC_1_SQRT_2;
        match self {
            BellOutcome::PhiPlus => [h, 0.0, 0.0, h],
            BellOutcome::PhiMinus => [h, 0.0, 0.0, -h],
            BellOutcome::PsiPlus => [0.0, h, h, 0.0],
            BellOutcome::PsiMinus => [0.0, h, -h, 0.0],
        }
    }

    pub fn state(self) -> StateVector {
        StateVector::from_amplitudes(
            self.amplitudes()
                .iter()
                .map(|&a| Complex64::new(a, 0.0))
                .collect(),
        )
        .expect("Bell states are normalized")
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "Φ⁺",
            BellOutcome::PhiMinus => "Φ⁻",
            BellOutcome::PsiPlus => "Ψ⁺",
            BellOutcome::PsiMinus => "Ψ⁻",
        }
    }

    /// ASCII name used in CSV output.
    pub fn ascii(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_states_match_kets() {
        let cases = [
            (BellOutcome::PhiPlus, [("00", 1.0), ("11", 1.0)]),
            (BellOutcome::PhiMinus, [("00", 1.0), ("11", -1.0)]),
            (BellOutcome::PsiPlus, [("01", 1.0), ("10", 1.0)]),
            (BellOutcome::PsiMinus, [("01", 1.0), ("10", -1.0)]),
        ];
        for (o, kets) in cases {
            let expected = StateVector::from_kets(&kets).unwrap();
            assert!(o.state().approx_eq(&expected, 1e-12), "{o}");
        }
    }

    #[test]
    fn bell_basis_orthonormal() {
        for a in BellOutcome::ALL {
            for b in BellOutcome::ALL {
                let ip = a.state().inner(&b.state()).norm();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-12);
            }
        }
    }
}
