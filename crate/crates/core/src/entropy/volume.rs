//! Exact Hamming ball volumes `V(n, r) = sum_{i<=r} C(n, i)`.

use crate::error::{domain, Result};
use num_bigint::BigUint;

/// Exact volume of the Hamming ball of radius `r` in {0,1}^n, n <= 128.
pub fn hamming_volume(n: u32, r: u32) -> Result<BigUint> {
    if n > 128 {
        return Err(domain(format!("hamming_volume supports n <= 128, got {n}")));
    }
    if r > n {
        return Err(domain(format!("radius {r} exceeds dimension {n}")));
    }
    let mut total = BigUint::from(0u32);
    let mut term = BigUint::from(1u32); // C(n, 0)
    for i in 0..=r {
        total += &term;
        if i < n {
            // C(n, i+1) = C(n, i) * (n - i) / (i + 1)
            term = term * (n - i) / (i + 1);
        }
    }
    Ok(total)
}

/// Volume as f64 (exact up to 2^53, correctly rounded beyond).
pub fn hamming_volume_f64(n: u32, r: u32) -> Result<f64> {
    Ok(biguint_to_f64(&hamming_volume(n, r)?))
}

fn biguint_to_f64(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        let digits = x.to_u64_digits();
        return digits.first().copied().unwrap_or(0) as f64;
    }
    let shift = bits - 53;
    let top = x >> shift;
    let digits = top.to_u64_digits();
    digits[0] as f64 * 2f64.powi(shift as i32)
}

/// log2 of a positive big integer, accurate to f64 precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    assert!(x > &BigUint::from(0u32), "log2 of zero");
    let bits = x.bits();
    if bits <= 53 {
        let digits = x.to_u64_digits();
        return (digits[0] as f64).log2();
    }
    let shift = bits - 53;
    let top = x >> shift;
    let digits = top.to_u64_digits();
    (digits[0] as f64).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_volumes() {
        assert_eq!(hamming_volume(3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(hamming_volume(10, 3).unwrap(), BigUint::from(176u32));
        assert_eq!(hamming_volume(8, 2).unwrap(), BigUint::from(37u32));
        // Full cube: 2^n.
        assert_eq!(hamming_volume(10, 10).unwrap(), BigUint::from(1024u32));
        assert!(hamming_volume(4, 5).is_err());
    }

    #[test]
    fn volume_matches_enumeration() {
        // Enumerate all strings of {0,1}^10 by weight.
        for r in 0..=10u32 {
            let count = (0u32..1024).filter(|x| x.count_ones() <= r).count();
            assert_eq!(hamming_volume(10, r).unwrap(), BigUint::from(count));
        }
    }

    #[test]
    fn big_volume_log2() {
        // V(128, 64) is slightly more than 2^127.
        let v = hamming_volume(128, 64).unwrap();
        let l = log2_biguint(&v);
        assert!(l > 127.0 && l < 128.0);
        let f = hamming_volume_f64(128, 64).unwrap();
        assert!((f.log2() - l).abs() < 1e-9);
    }
}
