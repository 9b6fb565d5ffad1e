//! Reference values for each strategy.
//!
//! Each attacked (basis, interaction) pair is either transparent (the
//! interaction copies the bit: BER 0, guess success 1) or conjugate (BER ½,
//! guess success ½); Eve's error prediction is always right. Averages are
//! taken over the kept-round basis distribution and the interaction coin,
//! then scaled by the attack rate ζ. The guess-success figure counts only
//! attacked rounds, so it is `ζ · (attacked-round success)`.

use serde::{Deserialize, Serialize};

use crate::attack::{GateChoice, Strategy, StrategyKind};
use crate::protocol::Basis;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryTriple {
    #[serde(serialize_with = "super::sig::serialize")]
    pub ber_ab: f64,
    #[serde(serialize_with = "super::sig::serialize")]
    pub p_e: f64,
    /// Absent for the honest relay, where Eve predicts nothing.
    #[serde(serialize_with = "super::sig::option::serialize")]
    pub pi_e: Option<f64>,
}

/// Reference triple for uniformly random bases.
pub fn theory_reference(strategy: Strategy) -> TheoryTriple {
    theory_for(strategy, None)
}

pub fn theory_for(strategy: Strategy, forced_basis: Option<Basis>) -> TheoryTriple {
    let gates: &[(GateChoice, f64)] = match strategy.kind {
        StrategyKind::Honest => {
            return TheoryTriple {
                ber_ab: 0.0,
                p_e: 0.5,
                pi_e: None,
            }
        }
        StrategyKind::Cnot => &[(GateChoice::P0, 1.0)],
        StrategyKind::HadamardCnot => &[(GateChoice::P0, 0.5), (GateChoice::P1, 0.5)],
    };
    let bases: &[(Basis, f64)] = match forced_basis {
        Some(Basis::Z) => &[(Basis::Z, 1.0)],
        Some(Basis::X) => &[(Basis::X, 1.0)],
        None => &[(Basis::Z, 0.5), (Basis::X, 0.5)],
    };
    let (mut ber, mut p_e) = (0.0, 0.0);
    for &(basis, wb) in bases {
        for &(gate, wg) in gates {
            let (row_ber, row_pe) = if basis == gate.transparent_basis() {
                (0.0, 1.0)
            } else {
                (0.5, 0.5)
            };
            ber += wb * wg * row_ber;
            p_e += wb * wg * row_pe;
        }
    }
    let zeta = strategy.zeta;
    TheoryTriple {
        ber_ab: zeta * ber,
        p_e: zeta * p_e,
        pi_e: Some(zeta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_averages_two_rows() {
        let t = theory_reference(Strategy::cnot());
        assert_eq!((t.ber_ab, t.p_e, t.pi_e), (0.25, 0.75, Some(1.0)));
    }

    #[test]
    fn cnot_forced_rows() {
        let z = theory_for(Strategy::cnot(), Some(Basis::Z));
        assert_eq!((z.ber_ab, z.p_e, z.pi_e), (0.0, 1.0, Some(1.0)));
        let x = theory_for(Strategy::cnot(), Some(Basis::X));
        assert_eq!((x.ber_ab, x.p_e, x.pi_e), (0.5, 0.5, Some(1.0)));
    }

    #[test]
    fn hadamard_cnot_scales_with_zeta() {
        let t = theory_reference(Strategy::hadamard_cnot(1.0).unwrap());
        assert_eq!((t.ber_ab, t.p_e, t.pi_e), (0.25, 0.75, Some(1.0)));
        let t = theory_reference(Strategy::hadamard_cnot(0.0).unwrap());
        assert_eq!((t.ber_ab, t.p_e, t.pi_e), (0.0, 0.0, Some(0.0)));
        let t = theory_reference(Strategy::hadamard_cnot(0.4).unwrap());
        assert!((t.ber_ab - 0.1).abs() < 1e-15);
        assert!((t.p_e - 0.3).abs() < 1e-15);
        assert_eq!(t.pi_e, Some(0.4));
        // symmetric: forcing either basis gives the same averages
        let s = Strategy::hadamard_cnot(1.0).unwrap();
        assert_eq!(theory_for(s, Some(Basis::Z)), theory_for(s, Some(Basis::X)));
    }

    #[test]
    fn honest_reference() {
        let t = theory_reference(Strategy::honest());
        assert_eq!((t.ber_ab, t.p_e, t.pi_e), (0.0, 0.5, None));
    }
}
