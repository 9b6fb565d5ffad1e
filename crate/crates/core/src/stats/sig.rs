//! Six-significant-digit float serialization for reports.

use serde::Serializer;

pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

pub fn serialize<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_f64(round_sig(*x))
}

pub mod option {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => serializer.serialize_some(&super::round_sig(*v)),
            None => serializer.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::round_sig;

    #[test]
    fn rounds_to_six_digits() {
        assert_eq!(round_sig(0.249_312_77), 0.249313);
        assert_eq!(round_sig(0.25), 0.25);
        assert_eq!(round_sig(1.0), 1.0);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(0.001_581_138_8), 0.00158114);
    }
}
