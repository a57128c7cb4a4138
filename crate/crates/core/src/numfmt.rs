/// Decimal text with 17 significant digits. Parsing the result gives back the
/// identical `f64`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(sig17(0.65), "6.5000000000000002e-1");
        assert_eq!(sig17(-2.0), "-2.0000000000000000e0");
    }

    proptest! {
        #[test]
        fn parses_back_bit_exact(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let back: f64 = sig17(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
