use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Result, SewingError};

/// Bernoulli number `B_k` for even `k ≥ 2`, from `t/(e^t−1) − 1 + t/2 = Σ B_k t^k/k!`.
pub fn bernoulli(k: usize) -> Result<BigRational> {
    if k < 2 || k % 2 == 1 {
        return Err(SewingError::InvalidArgument(format!(
            "Bernoulli number requested for k = {k}; k must be even and at least 2"
        )));
    }
    // Σ_{j=0}^{m} C(m+1, j) B_j = 0 with B_0 = 1.
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=k {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    Ok(b[k].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(2).unwrap(), r(1, 6));
        assert_eq!(bernoulli(4).unwrap(), r(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), r(1, 42));
        assert_eq!(bernoulli(12).unwrap(), r(-691, 2730));
    }

    #[test]
    fn rejects_odd_and_zero() {
        assert!(bernoulli(0).is_err());
        assert!(bernoulli(3).is_err());
    }
}
