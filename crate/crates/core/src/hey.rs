//! The abstract Hey formula `Z(M) = prod_i prod_{j<m_i} (1 - q_i^j z_i)^{-1}`
//! and its inverse polynomial.

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcomb::cauchy_poly;
use crate::series::{rat_big, Alphabet, AlphabetEntry, Monomial, TruncatedSeries};

/// One Artin–Wedderburn factor: a simple module of norm `q^r` occurring `m`
/// times in the top of the module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimpleEntry {
    /// Defaults to `z{i}` for the `i`-th entry (1-based) when empty.
    #[serde(default)]
    pub label: String,
    pub q: u64,
    pub r: u32,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimpleData {
    pub entries: Vec<SemisimpleEntry>,
}

impl SemisimpleData {
    pub fn new(entries: Vec<SemisimpleEntry>) -> Self {
        SemisimpleData { entries }
    }

    pub fn alphabet(&self) -> Result<Arc<Alphabet>> {
        let entries = self.entries.iter().enumerate().map(|(i, e)| {
            let label = if e.label.is_empty() { format!("z{}", i + 1) } else { e.label.clone() };
            AlphabetEntry::new(label, e.q, e.r)
        });
        Alphabet::new(entries.collect())
    }
}

fn qpow(q: u64, j: u32) -> BigRational {
    rat_big(num_traits::pow(num_bigint::BigInt::from(q), j as usize))
}

/// Hey's product over `alphabet`, whose entries pair up with `multiplicities`.
pub fn hey_over(alphabet: &Arc<Alphabet>, multiplicities: &[u32], bound: u32) -> Result<TruncatedSeries> {
    let n = alphabet.len();
    let mut acc = TruncatedSeries::one(alphabet, bound);
    for (i, &m) in multiplicities.iter().enumerate() {
        let q = alphabet.entry(i).q;
        for j in 0..m {
            let g = TruncatedSeries::geometric(alphabet, bound, &qpow(q, j), &Monomial::var(n, i))?;
            acc = acc.mul(&g)?;
        }
    }
    Ok(acc)
}

pub fn hey_product(data: &SemisimpleData, bound: u32) -> Result<TruncatedSeries> {
    let alphabet = data.alphabet()?;
    let ms: Vec<u32> = data.entries.iter().map(|e| e.m).collect();
    hey_over(&alphabet, &ms, bound)
}

/// `prod_i sum_d binom(m_i, d)_{q_i} (-1)^d q_i^{d(d-1)/2} z_i^d`, the inverse of
/// [`hey_product`].
pub fn moebius_inverse_series(data: &SemisimpleData, bound: u32) -> Result<TruncatedSeries> {
    let alphabet = data.alphabet()?;
    let n = alphabet.len();
    let mut acc = TruncatedSeries::one(&alphabet, bound);
    for (i, e) in data.entries.iter().enumerate() {
        let terms = cauchy_poly(e.m as u64, e.q)
            .into_iter()
            .enumerate()
            .map(|(d, c)| (Monomial::var(n, i).pow(d as u32), rat_big(c)));
        acc = acc.mul(&TruncatedSeries::from_terms(&alphabet, bound, terms))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn entry(label: &str, q: u64, m: u32) -> SemisimpleEntry {
        SemisimpleEntry { label: label.into(), q, r: 1, m }
    }

    fn coeffs(s: &TruncatedSeries) -> Vec<BigRational> {
        (0..=s.bound()).map(|k| s.coeff(&[k])).collect()
    }

    #[test]
    fn hey_examples() {
        let one = SemisimpleData::new(vec![entry("z", 2, 1)]);
        assert_eq!(coeffs(&hey_product(&one, 3).unwrap()), vec![rat(1), rat(1), rat(1), rat(1)]);
        let two = SemisimpleData::new(vec![entry("z", 2, 2)]);
        assert_eq!(coeffs(&hey_product(&two, 3).unwrap()), vec![rat(1), rat(3), rat(7), rat(15)]);
    }

    #[test]
    fn hey_is_multiplicative_across_entries() {
        let both = SemisimpleData::new(vec![entry("x", 2, 2), entry("y", 3, 1)]);
        let z = hey_product(&both, 4).unwrap();
        let x = hey_product(&SemisimpleData::new(vec![entry("x", 2, 2)]), 4).unwrap();
        let y = hey_product(&SemisimpleData::new(vec![entry("y", 3, 1)]), 4).unwrap();
        for (m, c) in z.terms() {
            let e = m.exponents();
            assert_eq!(*c, x.coeff(&[e[0]]) * y.coeff(&[e[1]]));
        }
        assert_eq!(z.num_terms(), 15);
    }

    #[test]
    fn moebius_examples() {
        let s = moebius_inverse_series(&SemisimpleData::new(vec![entry("z", 2, 1)]), 4).unwrap();
        assert_eq!(coeffs(&s), vec![rat(1), rat(-1), rat(0), rat(0), rat(0)]);
        let s = moebius_inverse_series(&SemisimpleData::new(vec![entry("z", 2, 2)]), 4).unwrap();
        assert_eq!(coeffs(&s), vec![rat(1), rat(-3), rat(2), rat(0), rat(0)]);
        let empty = SemisimpleData::new(vec![]);
        let s = moebius_inverse_series(&empty, 4).unwrap();
        assert_eq!(s, TruncatedSeries::one(&empty.alphabet().unwrap(), 4));
    }

    #[test]
    fn hey_times_inverse_is_one() {
        for qs in [[2u64, 3], [4, 2], [3, 4]] {
            for m1 in 0..=4 {
                for m2 in [0, 2, 4] {
                    let data = SemisimpleData::new(vec![entry("x", qs[0], m1), entry("y", qs[1], m2)]);
                    for bound in [0, 3, 8] {
                        let p = hey_product(&data, bound).unwrap().mul(&moebius_inverse_series(&data, bound).unwrap());
                        assert_eq!(p.unwrap(), TruncatedSeries::one(&data.alphabet().unwrap(), bound));
                    }
                }
            }
        }
    }

    #[test]
    fn single_entry_coefficients_increase() {
        for m in 2..=4 {
            let s = hey_product(&SemisimpleData::new(vec![entry("z", 2, m)]), 8).unwrap();
            let c = coeffs(&s);
            assert!(c.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
