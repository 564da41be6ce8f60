//! Fixtures shared by the benchmarks.

use onc_kesten::partition::{IntervalFamily, IntervalSignature};

/// The `f f g g f f` signature on `g = [0,1] < f = [1,2]`.
pub fn nested_signature() -> (IntervalFamily, IntervalSignature) {
    IntervalSignature::parse("f f g g f f", "g=[0,1],f=[1,2]").expect("valid signature")
}

/// Eight points over three adjacent unit intervals, each used an even number of times.
pub fn three_interval_signature() -> (IntervalFamily, IntervalSignature) {
    IntervalSignature::parse("a b b c c a a a", "a=[0,1],b=[1,2],c=[2,3]").expect("valid signature")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(nested_signature().1.n(), 6);
        assert_eq!(three_interval_signature().0.len(), 3);
    }
}
