use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::state::Amplitude;

/// Gates the simulator needs, each bound to concrete wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    I(usize),
    H(usize),
    X(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// Wires the gate acts on; for CNOT the control comes first.
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::I(w) | Gate::H(w) | Gate::X(w) => vec![w],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Local matrix in the basis of [`Gate::wires`], row-major.
    pub fn matrix(&self) -> Vec<Vec<Amplitude>> {
        let r = |re: f64| Complex64::new(re, 0.0);
        let h = FRAC_1_SQRT_2;
        let rows: Vec<Vec<f64>> = match self {
            Gate::I(_) => vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            Gate::H(_) => vec![vec![h, h], vec![h, -h]],
            Gate::X(_) => vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            Gate::Cnot { .. } => vec![
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
        };
        rows.into_iter()
            .map(|row| row.into_iter().map(r).collect())
            .collect()
    }

    /// Every gate in the set is self-inverse.
    pub fn inverse(&self) -> Gate {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::state::StateVector;

    fn unitarity_defect(m: &[Vec<Amplitude>]) -> f64 {
        let n = m.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: Amplitude = (0..n).map(|k| m[k][i].conj() * m[k][j]).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - Complex64::new(id, 0.0)).norm());
            }
        }
        worst
    }

    #[test]
    fn all_gates_unitary() {
        let gates = [
            Gate::I(0),
            Gate::H(0),
            Gate::X(0),
            Gate::Cnot {
                control: 0,
                target: 1,
            },
        ];
        for g in gates {
            assert!(unitarity_defect(&g.matrix()) < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn cnot_flips_target() {
        let s = StateVector::product("10").unwrap();
        let out = s
            .apply(&Gate::Cnot {
                control: 0,
                target: 1,
            })
            .unwrap();
        assert!(out.approx_eq(&StateVector::product("11").unwrap(), 1e-12));
    }

    #[test]
    fn hadamard_makes_plus() {
        let out = StateVector::product("0").unwrap().apply(&Gate::H(0)).unwrap();
        assert!(out.approx_eq(&StateVector::product("+").unwrap(), 1e-12));
    }

    #[test]
    fn cnot_on_plus_zero() {
        let out = StateVector::product("+0")
            .unwrap()
            .apply(&Gate::Cnot {
                control: 0,
                target: 1,
            })
            .unwrap();
        let expected = StateVector::from_kets(&[("++", 1.0), ("--", 1.0)]).unwrap();
        assert!(out.approx_eq(&expected, 1e-9));
    }

    #[test]
    fn reversed_cnot_on_far_wires() {
        // control on wire 3, target on wire 0
        let s = StateVector::product("0001").unwrap();
        let out = s
            .apply(&Gate::Cnot {
                control: 3,
                target: 0,
            })
            .unwrap();
        assert!(out.approx_eq(&StateVector::product("1001").unwrap(), 1e-12));
    }

    #[test]
    fn rejects_bad_wires() {
        let s = StateVector::zero(2).unwrap();
        assert!(s.apply(&Gate::H(2)).is_err());
        assert!(s
            .apply(&Gate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
    }
}
