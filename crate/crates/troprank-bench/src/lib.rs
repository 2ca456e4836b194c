//! Deterministic fixtures for the benches: one matrix per engine, at the
//! sizes the engines are tuned for, so runs compare across commits.

use troprank::{sample_uniform, sample_with_rank, BigRational, Poly, PuiseuxScalar, Ramification, TropMatrix};

pub fn det_fixture(n: usize) -> TropMatrix {
    sample_uniform(n, n, 0, 9, 42)
}

pub fn rank_fixture() -> TropMatrix {
    sample_uniform(5, 5, 0, 4, 7)
}

pub fn barvinok_fixture() -> TropMatrix {
    sample_uniform(3, 3, 0, 2, 9)
}

pub fn pipeline_fixture() -> TropMatrix {
    sample_with_rank(5, 5, 3, 3).expect("rank-3 5x5 samples exist")
}

/// Two dense series with ramification 2, enough terms to exercise the
/// polynomial arithmetic rather than the bookkeeping.
pub fn scalar_fixtures() -> (PuiseuxScalar, PuiseuxScalar) {
    let ram = Ramification::new(2);
    let coeffs = |base: i64| -> Vec<BigRational> {
        (0..8)
            .map(|k| BigRational::new((base + k * k).into(), (1 + (k % 3)).into()))
            .collect()
    };
    let a = PuiseuxScalar::from_fraction(
        Poly::from_coeffs(coeffs(3)),
        Poly::from_coeffs(coeffs(5)),
        ram,
    )
    .expect("nonzero denominator");
    let b = PuiseuxScalar::from_fraction(
        Poly::from_coeffs(coeffs(7)),
        Poly::from_coeffs(coeffs(2)),
        ram,
    )
    .expect("nonzero denominator");
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use troprank::tropical_rank;

    #[test]
    fn fixtures_are_stable() {
        assert_eq!(tropical_rank(&pipeline_fixture()).rank, 3);
        assert_eq!(det_fixture(4).rows(), 4);
        let (a, b) = scalar_fixtures();
        assert!(!a.is_zero() && !b.is_zero());
    }
}
