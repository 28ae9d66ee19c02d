//! q-combinatorics: Gaussian binomials, Möbius values of the subspace lattice,
//! the Cauchy product polynomial and partition counts by greatest part.

use num_bigint::BigInt;
use num_traits::{One, Zero};

fn qpow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// Number of `d`-dimensional subspaces of `F_q^m`; zero outside `0..=m`.
pub fn gaussian_binomial(m: u64, d: i64, q: u64) -> BigInt {
    if d < 0 || d as u64 > m {
        return BigInt::zero();
    }
    let d = d as u64;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..d {
        num *= qpow(q, m - i) - 1;
        den *= qpow(q, i + 1) - 1;
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// `(-1)^d q^{d(d-1)/2}`, the Möbius value of a length-`d` interval in a subspace lattice.
pub fn subspace_moebius(d: u64, q: u64) -> BigInt {
    let v = qpow(q, d * d.saturating_sub(1) / 2);
    if d % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Coefficients (constant first) of `prod_{j<m} (1 - q^j z)`.
pub fn cauchy_poly(m: u64, q: u64) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for j in 0..m {
        let a = qpow(q, j);
        let mut next = c.clone();
        next.push(BigInt::zero());
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] -= &a * ck;
        }
        c = next;
    }
    c
}

/// Number of partitions of `i` whose greatest part is exactly `j`.
pub fn partition_count(i: u64, j: u64) -> BigInt {
    if j == 0 || j > i {
        return BigInt::from((i == 0 && j == 0) as u8);
    }
    // Remove one copy of the part j; the rest is a partition of i-j into parts <= j.
    partitions_bounded(i - j, j)
}

/// Partitions of `n` with every part at most `k`.
fn partitions_bounded(n: u64, k: u64) -> BigInt {
    let n = n as usize;
    let mut table = vec![BigInt::zero(); n + 1];
    table[0] = BigInt::one();
    for part in 1..=(k as usize).min(n) {
        for s in part..=n {
            let prev = table[s - part].clone();
            table[s] += prev;
        }
    }
    table.swap_remove(n)
}

/// Euler's two-variable generating function `1 + sum p(i,j) z^i w^j`, as the
/// table `[i][j]` for `i, j <= bound`. It is the product of `(1 - w z^n)^{-1}`
/// over `n >= 1`: a partition into `j` parts is conjugate to one with greatest
/// part `j`.
pub fn euler_coeffs(bound: usize) -> Vec<Vec<BigInt>> {
    // dp[i][j]: partitions of i into exactly j parts.
    let mut dp = vec![vec![BigInt::zero(); bound + 1]; bound + 1];
    dp[0][0] = BigInt::one();
    for n in 1..=bound {
        for i in n..=bound {
            for j in 1..=bound {
                let prev = dp[i - n][j - 1].clone();
                dp[i][j] += prev;
            }
        }
    }
    dp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_binomial(2, 1, 2), b(3));
        assert_eq!(gaussian_binomial(5, 0, 3), b(1));
        assert_eq!(gaussian_binomial(4, 2, 2), b(35));
        assert_eq!(gaussian_binomial(3, 4, 2), b(0));
        assert_eq!(gaussian_binomial(3, -1, 2), b(0));
    }

    #[test]
    fn pascal_recursion() {
        for q in [2u64, 3, 5] {
            for m in 1..=8u64 {
                for d in 0..=m as i64 {
                    let lhs = gaussian_binomial(m, d, q);
                    let rhs = gaussian_binomial(m - 1, d - 1, q)
                        + qpow(q, d as u64) * gaussian_binomial(m - 1, d, q);
                    assert_eq!(lhs, rhs, "m={m} d={d} q={q}");
                }
            }
        }
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(subspace_moebius(0, 5), b(1));
        assert_eq!(subspace_moebius(1, 2), b(-1));
        assert_eq!(subspace_moebius(2, 2), b(2));
        assert_eq!(subspace_moebius(3, 2), b(-8));
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_poly(0, 2), vec![b(1)]);
        assert_eq!(cauchy_poly(1, 7), vec![b(1), b(-1)]);
        assert_eq!(cauchy_poly(2, 2), vec![b(1), b(-3), b(2)]);
    }

    #[test]
    fn cauchy_equals_moebius_sum() {
        for q in [2u64, 3, 4, 5] {
            for m in 0..=6u64 {
                let sum: Vec<BigInt> =
                    (0..=m).map(|d| gaussian_binomial(m, d as i64, q) * subspace_moebius(d, q)).collect();
                assert_eq!(cauchy_poly(m, q), sum, "m={m} q={q}");
            }
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition_count(1, 1), b(1));
        assert_eq!(partition_count(4, 2), b(2));
        assert_eq!(partition_count(6, 3), b(3));
        assert_eq!(partition_count(3, 5), b(0));
        assert_eq!(partition_count(7, 7), b(1));
    }

    /// Brute force: enumerate weakly decreasing part sequences.
    fn brute_partitions(i: u64, j: u64) -> u64 {
        fn go(rest: u64, max: u64) -> u64 {
            if rest == 0 {
                return 1;
            }
            (1..=max.min(rest)).map(|p| go(rest - p, p)).sum()
        }
        if j == 0 || j > i {
            return 0;
        }
        go(i - j, j)
    }

    #[test]
    fn partition_count_matches_brute_force() {
        for i in 1..=14 {
            for j in 1..=i + 1 {
                assert_eq!(partition_count(i, j), BigInt::from(brute_partitions(i, j)));
            }
        }
    }

    #[test]
    fn euler_matches_partition_count() {
        let e = euler_coeffs(12);
        assert_eq!(e[0][0], b(1));
        assert_eq!(e[3][2], b(1));
        assert_eq!(e[4][2], b(2));
        for i in 1..=12usize {
            assert!(e[i][0].is_zero());
            for j in 1..=12usize {
                assert_eq!(e[i][j], partition_count(i as u64, j as u64), "i={i} j={j}");
            }
        }
    }
}
