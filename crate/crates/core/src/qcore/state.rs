use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use super::error::StateError;
use super::gate::Gate;

/// Complex amplitude of one computational basis state.
pub type Amplitude = Complex64;

pub const MAX_QUBITS: usize = 4;

/// Tolerance used for state equality and normalization checks.
pub const STATE_TOL: f64 = 1e-9;

/// Pure state of up to [`MAX_QUBITS`] qubits.
///
/// Basis index `i` has qubit 0 as its most significant bit, so the label
/// `"10"` is index 2 and wire 0 carries the `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

fn symbol_state(symbol: char) -> Result<[Amplitude; 2], StateError> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match symbol {
        '0' => Ok([one, zero]),
        '1' => Ok([zero, one]),
        '+' => Ok([h, h]),
        '-' => Ok([h, -h]),
        other => Err(StateError::Symbol(other)),
    }
}

fn check_qubits(n: usize) -> Result<(), StateError> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(StateError::QubitCount(n))
    }
}

impl StateVector {
    /// Builds a normalized state from raw amplitudes.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self, StateError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(StateError::Dimension(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(StateError::NonFinite);
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(StateError::ZeroVector);
        }
        Ok(Self {
            n_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Builds the normalized superposition `sum_k coeff_k |label_k>`.
    ///
    /// Labels are product-basis strings over `0`, `1`, `+` and `-`, one
    /// symbol per qubit, e.g. `("+-", 1.0)` is `|+>|->`.
    pub fn from_kets<C>(kets: &[(&str, C)]) -> Result<Self, StateError>
    where
        C: Into<Amplitude> + Copy,
    {
        let first = kets.first().ok_or(StateError::NoKets)?;
        let n_qubits = first.0.chars().count();
        check_qubits(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        for &(label, coeff) in kets {
            let found = label.chars().count();
            if found != n_qubits {
                return Err(StateError::LabelLength {
                    label: label.to_string(),
                    expected: n_qubits,
                    found,
                });
            }
            let mut product = vec![coeff.into()];
            for symbol in label.chars() {
                let single = symbol_state(symbol)?;
                product = product
                    .iter()
                    .flat_map(|&a| single.iter().map(move |&s| a * s))
                    .collect();
            }
            for (acc, term) in amps.iter_mut().zip(product) {
                *acc += term;
            }
        }
        Self::from_amplitudes(amps)
    }

    /// Single product-basis state such as `"0+"`.
    pub fn product(label: &str) -> Result<Self, StateError> {
        Self::from_kets(&[(label, 1.0)])
    }

    /// `|0...0>` on `n_qubits` wires.
    pub fn zero(n_qubits: usize) -> Result<Self, StateError> {
        check_qubits(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit of `wire` in basis index `index`.
    pub fn bit(&self, index: usize, wire: usize) -> usize {
        (index >> (self.n_qubits - 1 - wire)) & 1
    }

    pub fn check_wire(&self, wire: usize) -> Result<(), StateError> {
        if wire < self.n_qubits {
            Ok(())
        } else {
            Err(StateError::WireOutOfRange {
                wire,
                n_qubits: self.n_qubits,
            })
        }
    }

    /// Validates that `wires` are in range and pairwise distinct.
    pub fn check_wires(&self, wires: &[usize]) -> Result<(), StateError> {
        for (i, &w) in wires.iter().enumerate() {
            self.check_wire(w)?;
            if wires[..i].contains(&w) {
                return Err(StateError::DuplicateWire(w));
            }
        }
        Ok(())
    }

    /// `self ⊗ other`, with `self` occupying the leading wires.
    pub fn tensor(&self, other: &StateVector) -> Result<Self, StateError> {
        let n_qubits = self.n_qubits + other.n_qubits;
        check_qubits(n_qubits)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        Ok(Self { n_qubits, amps })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Amplitude {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Entrywise equality within `tol`.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality up to a global phase: `|<self|other>| = 1` within `tol`.
    pub fn eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qubits == other.n_qubits && (1.0 - self.inner(other).norm()).abs() <= tol
    }

    /// Applies `gate` and returns the new state; `self` is left untouched.
    pub fn apply(&self, gate: &Gate) -> Result<Self, StateError> {
        let wires = gate.wires();
        self.check_wires(&wires)?;
        let matrix = gate.matrix();
        Ok(self.apply_local(&matrix, &wires))
    }

    pub fn apply_all(&self, gates: &[Gate]) -> Result<Self, StateError> {
        gates.iter().try_fold(self.clone(), |s, g| s.apply(g))
    }

    /// Applies a `2^k x 2^k` matrix on `wires` (first listed wire is the
    /// most significant local bit). Wires must already be validated.
    fn apply_local(&self, matrix: &[Vec<Amplitude>], wires: &[usize]) -> Self {
        let k = wires.len();
        let local_dim = 1 << k;
        let masks: Vec<usize> = wires
            .iter()
            .map(|&w| 1 << (self.n_qubits - 1 - w))
            .collect();
        let all_mask: usize = masks.iter().sum();
        let offset = |local: usize| -> usize {
            (0..k)
                .filter(|j| local & (1 << (k - 1 - j)) != 0)
                .map(|j| masks[j])
                .sum()
        };
        let offsets: Vec<usize> = (0..local_dim).map(offset).collect();

        let mut out = self.amps.clone();
        for base in (0..self.dim()).filter(|i| i & all_mask == 0) {
            for (row, &dst) in offsets.iter().enumerate() {
                out[base + dst] = offsets
                    .iter()
                    .enumerate()
                    .map(|(col, &src)| matrix[row][col] * self.amps[base + src])
                    .sum();
            }
        }
        Self {
            n_qubits: self.n_qubits,
            amps: out,
        }
    }

    /// Contracts `target` against `wires` and returns the normalized state of
    /// the remaining wires (kept in ascending order) together with the
    /// probability of the projection.
    pub fn project_out(
        &self,
        wires: &[usize],
        target: &StateVector,
    ) -> Result<(f64, StateVector), StateError> {
        self.check_wires(wires)?;
        if target.n_qubits != wires.len() {
            return Err(StateError::WrongQubitCount {
                expected: wires.len(),
                found: target.n_qubits,
            });
        }
        let rest: Vec<usize> = (0..self.n_qubits).filter(|w| !wires.contains(w)).collect();
        check_qubits(rest.len())?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << rest.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let local = wires
                .iter()
                .fold(0, |acc, &w| (acc << 1) | self.bit(i, w));
            let residual = rest.iter().fold(0, |acc, &w| (acc << 1) | self.bit(i, w));
            amps[residual] += target.amps[local].conj() * a;
        }
        let prob: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if prob < 1e-12 {
            return Err(StateError::ZeroProjection);
        }
        let state = Self::from_amplitudes(amps)?;
        Ok((prob, state))
    }

    /// Selects the basis states whose `wires` read `bits`, zeroing the rest.
    /// The result is not renormalized.
    pub(crate) fn mask_outcome(&self, wires: &[usize], bits: usize) -> Vec<Amplitude> {
        let k = wires.len();
        self.amps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let local = wires
                    .iter()
                    .fold(0, |acc, &w| (acc << 1) | self.bit(i, w));
                debug_assert!(local < 1 << k);
                if local == bits {
                    a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let label: String = (0..self.n_qubits)
                .map(|w| if self.bit(i, w) == 1 { '1' } else { '0' })
                .collect();
            write!(f, "({:.4}{:+.4}i)|{}⟩", a.re, a.im, label)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Amplitude {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn phi_plus_from_kets() {
        let s = StateVector::from_kets(&[("00", 1.0), ("11", 1.0)]).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = [c(h), c(0.0), c(0.0), c(h)];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12);
        }
    }

    #[test]
    fn single_basis_ket() {
        let s = StateVector::from_kets(&[("0", 1.0)]).unwrap();
        assert_eq!(s.n_qubits(), 1);
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0)]);
    }

    #[test]
    fn psi_minus_from_kets() {
        let s = StateVector::from_kets(&[("01", 1.0), ("10", -1.0)]).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((s.amplitudes()[1] - c(h)).norm() < 1e-12);
        assert!((s.amplitudes()[2] - c(-h)).norm() < 1e-12);
    }

    #[test]
    fn msb_is_wire_zero() {
        let s = StateVector::product("10").unwrap();
        assert_eq!(s.amplitudes()[2], c(1.0));
        assert_eq!(s.bit(2, 0), 1);
        assert_eq!(s.bit(2, 1), 0);
    }

    #[test]
    fn hadamard_symbols_expand() {
        let s = StateVector::product("+-").unwrap();
        let expected = [c(0.5), c(-0.5), c(0.5), c(-0.5)];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_inconsistent_labels() {
        let err = StateVector::from_kets(&[("00", 1.0), ("1", 1.0)]).unwrap_err();
        assert!(matches!(err, StateError::LabelLength { .. }));
    }

    #[test]
    fn rejects_zero_vector() {
        let err = StateVector::from_kets(&[("0", 1.0), ("0", -1.0)]).unwrap_err();
        assert_eq!(err, StateError::ZeroVector);
        let err = StateVector::from_kets(&[("+", 1.0), ("-", -1.0), ("1", -(2f64.sqrt()))])
            .unwrap_err();
        assert_eq!(err, StateError::ZeroVector);
    }

    #[test]
    fn rejects_too_many_qubits_and_bad_symbols() {
        assert_eq!(
            StateVector::product("00000").unwrap_err(),
            StateError::QubitCount(5)
        );
        assert_eq!(StateVector::product("0x").unwrap_err(), StateError::Symbol('x'));
        assert_eq!(
            StateVector::from_kets::<f64>(&[]).unwrap_err(),
            StateError::NoKets
        );
    }

    #[test]
    fn rejects_non_finite() {
        let err = StateVector::from_amplitudes(vec![c(f64::NAN), c(1.0)]).unwrap_err();
        assert_eq!(err, StateError::NonFinite);
    }

    #[test]
    fn tensor_orders_wires() {
        let a = StateVector::product("1").unwrap();
        let b = StateVector::product("0").unwrap();
        assert!(a
            .tensor(&b)
            .unwrap()
            .approx_eq(&StateVector::product("10").unwrap(), 1e-12));
    }

    #[test]
    fn global_phase_equality() {
        let a = StateVector::from_kets(&[("01", 1.0), ("10", 1.0)]).unwrap();
        let b = StateVector::from_kets(&[("01", -1.0), ("10", -1.0)]).unwrap();
        assert!(!a.approx_eq(&b, STATE_TOL));
        assert!(a.eq_up_to_phase(&b, STATE_TOL));
    }

    #[test]
    fn project_out_leaves_partner() {
        // |+> on wire 0, |1> on wire 1, |0> on wire 2
        let s = StateVector::product("+10").unwrap();
        let plus = StateVector::product("+").unwrap();
        let (p, rest) = s.project_out(&[0], &plus).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert!(rest.approx_eq(&StateVector::product("10").unwrap(), 1e-12));

        let zero = StateVector::product("0").unwrap();
        assert_eq!(
            s.project_out(&[1], &zero).unwrap_err(),
            StateError::ZeroProjection
        );
    }
}
