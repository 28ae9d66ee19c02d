//! Truncated commutative formal series over the free monoid on simple-module
//! classes.
//!
//! A [`TruncatedSeries`] is a finite map from [`Monomial`]s to exact rationals,
//! together with a total-degree bound `B`. Every coefficient of total degree
//! at most `B` is meaningful (absent keys are zero); nothing above `B` is kept.
//! Each alphabet entry carries a residue size `q` and a matrix size `r`, so
//! that the norm of the corresponding simple module is `q^r`; the norm is what
//! the Dirichlet specialization `z_i -> q_i^{-r_i s}` uses.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One generator of the monoid: a simple module with `q^r` elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlphabetEntry {
    pub label: String,
    pub q: u64,
    pub r: u32,
}

impl AlphabetEntry {
    pub fn new(label: impl Into<String>, q: u64, r: u32) -> Self {
        AlphabetEntry { label: label.into(), q, r }
    }

    pub fn norm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.q), self.r as usize)
    }

    fn norm_u128(&self) -> Option<u128> {
        (self.q as u128).checked_pow(self.r)
    }
}

/// Ordered set of generators. Labels are distinct and every norm is at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    entries: Vec<AlphabetEntry>,
}

impl Alphabet {
    pub fn new(entries: Vec<AlphabetEntry>) -> Result<Arc<Self>> {
        for (i, e) in entries.iter().enumerate() {
            if e.q < 2 || e.r < 1 {
                return Err(Error::InvalidAlphabet(format!(
                    "entry {} has q={} r={}; need q >= 2 and r >= 1",
                    e.label, e.q, e.r
                )));
            }
            if crate::gfq::prime_power(e.q).is_none() {
                return Err(Error::InvalidAlphabet(format!("entry {} has q={}, not a prime power", e.label, e.q)));
            }
            if entries[..i].iter().any(|f| f.label == e.label) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {}", e.label)));
            }
        }
        Ok(Arc::new(Alphabet { entries }))
    }

    /// `n` entries labelled `prefix1 .. prefixn`, each of residue size `q`.
    pub fn uniform(prefix: &str, q: u64, n: usize) -> Result<Arc<Self>> {
        Alphabet::new((1..=n).map(|i| AlphabetEntry::new(format!("{prefix}{i}"), q, 1)).collect())
    }

    pub fn single(label: &str, q: u64, r: u32) -> Result<Arc<Self>> {
        Alphabet::new(vec![AlphabetEntry::new(label, q, r)])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[AlphabetEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &AlphabetEntry {
        &self.entries[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    /// The coproduct of the alphabet with a copy of itself: the first half keeps
    /// the original labels, the second half renames a leading `z` to `w`
    /// (any other label `x` becomes `w:x`).
    pub fn doubled(&self) -> Result<Arc<Self>> {
        let mut entries = self.entries.clone();
        for e in &self.entries {
            let label = match e.label.strip_prefix('z') {
                Some(rest) => format!("w{rest}"),
                None => format!("w:{}", e.label),
            };
            entries.push(AlphabetEntry::new(label, e.q, e.r));
        }
        Alphabet::new(entries)
    }

    fn min_norm(&self) -> Option<u128> {
        self.entries.iter().filter_map(|e| e.norm_u128()).min()
    }
}

/// Exponent vector over an alphabet, stored densely so that equal monomials
/// have equal keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn var(len: usize, i: usize) -> Self {
        let mut e = vec![0; len];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn norm(&self, alphabet: &Alphabet) -> BigInt {
        self.0
            .iter()
            .zip(alphabet.entries())
            .fold(BigInt::one(), |acc, (&e, entry)| acc * num_traits::pow(entry.norm(), e as usize))
    }

    /// The norm, or `None` once it exceeds `cap`.
    fn norm_capped(&self, alphabet: &Alphabet, cap: u128) -> Option<u128> {
        let mut acc: u128 = 1;
        for (&e, entry) in self.0.iter().zip(alphabet.entries()) {
            let n = entry.norm_u128()?;
            for _ in 0..e {
                acc = acc.checked_mul(n)?;
                if acc > cap {
                    return None;
                }
            }
        }
        Some(acc)
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let l = &alphabet.entry(i).label;
                if e == 1 {
                    l.clone()
                } else {
                    format!("{l}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Image of each generator under an algebra homomorphism: `z_i -> c_i * m_i`.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub target: Arc<Alphabet>,
    pub images: Vec<(BigRational, Monomial)>,
}

impl Substitution {
    pub fn identity(alphabet: &Arc<Alphabet>) -> Self {
        let n = alphabet.len();
        Substitution {
            target: alphabet.clone(),
            images: (0..n).map(|i| (BigRational::one(), Monomial::var(n, i))).collect(),
        }
    }
}

/// Dirichlet coefficients `a_n` for `n <= n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletTable {
    pub n_max: u64,
    pub coeffs: BTreeMap<u64, BigRational>,
    /// False when the degree bound does not determine every `a_n` with `n <= n_max`.
    pub complete: bool,
}

impl DirichletTable {
    pub fn get(&self, n: u64) -> BigRational {
        self.coeffs.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// A degree-truncated element of the Dirichlet algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    alphabet: Arc<Alphabet>,
    bound: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_big(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl TruncatedSeries {
    pub fn zero(alphabet: &Arc<Alphabet>, bound: u32) -> Self {
        TruncatedSeries { alphabet: alphabet.clone(), bound, terms: BTreeMap::new() }
    }

    pub fn one(alphabet: &Arc<Alphabet>, bound: u32) -> Self {
        Self::constant(alphabet, bound, BigRational::one())
    }

    pub fn constant(alphabet: &Arc<Alphabet>, bound: u32, c: BigRational) -> Self {
        Self::monomial(alphabet, bound, Monomial::one(alphabet.len()), c)
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, bound: u32, m: Monomial, c: BigRational) -> Self {
        Self::from_terms(alphabet, bound, std::iter::once((m, c)))
    }

    /// The generator `z_i`.
    pub fn var(alphabet: &Arc<Alphabet>, bound: u32, i: usize) -> Self {
        Self::monomial(alphabet, bound, Monomial::var(alphabet.len(), i), BigRational::one())
    }

    /// Builds a series, summing repeated monomials and dropping anything above the bound.
    pub fn from_terms(
        alphabet: &Arc<Alphabet>,
        bound: u32,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), alphabet.len(), "monomial length does not match alphabet");
            if m.degree() > bound || c.is_zero() {
                continue;
            }
            accumulate(&mut map, m, c);
        }
        TruncatedSeries { alphabet: alphabet.clone(), bound, terms: map }
    }

    /// `(1 - c*m)^{-1}` expanded to the bound; `m` must have positive degree.
    pub fn geometric(alphabet: &Arc<Alphabet>, bound: u32, c: &BigRational, m: &Monomial) -> Result<Self> {
        let d = m.degree();
        if d == 0 {
            return Err(Error::InvalidSubstitution("geometric ratio must have positive degree".into()));
        }
        let mut terms = Vec::new();
        let mut power = BigRational::one();
        let mut mono = Monomial::one(alphabet.len());
        let mut k = 0;
        while k * d <= bound {
            terms.push((mono.clone(), power.clone()));
            power *= c;
            mono = mono.mul(m);
            k += 1;
        }
        Ok(Self::from_terms(alphabet, bound, terms))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient addressed by an exponent slice.
    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.coefficient(&Monomial::from_exponents(exps.to_vec()))
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::one(self.alphabet.len()))
    }

    /// Smallest degree among the terms other than the constant.
    pub fn nonconstant_min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).filter(|&d| d > 0).min()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowers the bound (raising it is refused: the missing terms are unknown).
    pub fn truncate(&self, bound: u32) -> Self {
        let bound = bound.min(self.bound);
        TruncatedSeries {
            alphabet: self.alphabet.clone(),
            bound,
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= bound).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Reinterprets an exact polynomial under a larger bound. The caller
    /// asserts that no terms above the current bound were dropped.
    pub fn with_bound_exact(&self, bound: u32) -> Self {
        let mut s = self.clone();
        s.bound = bound;
        s.truncate(bound)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "[{}] vs [{}]",
                labels(&self.alphabet),
                labels(&other.alphabet)
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = self.truncate(bound);
        for (m, c) in &other.terms {
            if m.degree() <= bound {
                accumulate(&mut out.terms, m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            alphabet: self.alphabet.clone(),
            bound: self.bound,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.alphabet, self.bound);
        }
        TruncatedSeries {
            alphabet: self.alphabet.clone(),
            bound: self.bound,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by a monomial (no coefficient).
    pub fn shift(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.mul(m), c.clone()));
        Self::from_terms(&self.alphabet, self.bound, terms)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let bound = self.bound.min(other.bound);
        let right: Vec<(&Monomial, u32, &BigRational)> =
            other.terms.iter().map(|(m, c)| (m, m.degree(), c)).collect();
        let mut map = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > bound {
                continue;
            }
            for &(mb, db, cb) in &right {
                if da + db <= bound {
                    accumulate(&mut map, ma.mul(mb), ca * cb);
                }
            }
        }
        Ok(TruncatedSeries { alphabet: self.alphabet.clone(), bound, terms: map })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.alphabet, self.bound);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse up to the bound.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let inv_c0 = c0.recip();
        // self = c0 (1 + h) with h free of constant term; 1/(1+h) = 1 - h(1 - h(1 - ...)).
        let mut h = self.scale(&inv_c0);
        h.terms.remove(&Monomial::one(self.alphabet.len()));
        let one = Self::one(&self.alphabet, self.bound);
        let mut acc = one.clone();
        let steps = match h.min_degree() {
            Some(d) => self.bound / d,
            None => 0,
        };
        for _ in 0..steps {
            acc = one.sub(&h.mul(&acc)?)?;
        }
        Ok(acc.scale(&inv_c0))
    }

    /// Image under the algebra homomorphism `z_i -> c_i * m_i`. Every image
    /// monomial must have positive degree, so the result is determined up to
    /// the same bound.
    pub fn substitute(&self, sub: &Substitution) -> Result<Self> {
        if sub.images.len() != self.alphabet.len() {
            return Err(Error::InvalidSubstitution(format!(
                "{} images for an alphabet of {} entries",
                sub.images.len(),
                self.alphabet.len()
            )));
        }
        for (i, (_, m)) in sub.images.iter().enumerate() {
            if m.len() != sub.target.len() {
                return Err(Error::InvalidSubstitution(format!("image {i} has the wrong length")));
            }
            if m.degree() == 0 {
                return Err(Error::InvalidSubstitution(format!(
                    "image of {} has degree 0",
                    self.alphabet.entry(i).label
                )));
            }
        }
        let bound = self.bound;
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = Monomial::one(sub.target.len());
            for (&e, (s, img)) in m.exponents().iter().zip(&sub.images) {
                if e > 0 {
                    coeff *= num_traits::pow(s.clone(), e as usize);
                    mono = mono.mul(&img.pow(e));
                }
            }
            if mono.degree() <= bound {
                accumulate(&mut map, mono, coeff);
            }
        }
        Ok(TruncatedSeries { alphabet: sub.target.clone(), bound, terms: map })
    }

    /// Exact division by a monomial; every term must be divisible.
    pub fn divide_by_monomial(&self, m: &Monomial, context: &str) -> Result<Self> {
        let d = m.degree();
        let bound = self.bound.saturating_sub(d);
        let mut map = BTreeMap::new();
        for (k, c) in &self.terms {
            match k.checked_div(m) {
                Some(q) => {
                    if q.degree() <= bound {
                        map.insert(q, c.clone());
                    }
                }
                None => {
                    return Err(Error::violation(
                        context,
                        k.display(&self.alphabet),
                        format!("a multiple of {}", m.display(&self.alphabet)),
                        c,
                    ))
                }
            }
        }
        Ok(TruncatedSeries { alphabet: self.alphabet.clone(), bound, terms: map })
    }

    /// Solomon specialization `z_i -> (q_i^{r_i})^{-s}`: `a_n` collects every
    /// monomial of norm `n`.
    pub fn dirichlet_coeffs(&self, n_max: u64) -> DirichletTable {
        let complete = match self.alphabet.min_norm() {
            None => true,
            Some(min) => match min.checked_pow(self.bound + 1) {
                Some(p) => p > n_max as u128,
                None => true,
            },
        };
        if !complete {
            log::warn!(
                "degree bound {} does not determine all Dirichlet coefficients up to {}",
                self.bound,
                n_max
            );
        }
        let mut coeffs: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some(n) = m.norm_capped(&self.alphabet, n_max as u128) {
                let slot = coeffs.entry(n as u64).or_insert_with(BigRational::zero);
                *slot += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        DirichletTable { n_max, coeffs, complete }
    }

    /// Projection onto the coefficient of `h` (a monomial over the second copy
    /// of `base`), for a series over `base.doubled()`.
    pub fn slice_coefficient(&self, base: &Arc<Alphabet>, h: &Monomial) -> Result<Self> {
        let doubled = base.doubled()?;
        if *self.alphabet != *doubled {
            return Err(Error::AlphabetMismatch("series is not over the doubled alphabet".into()));
        }
        let n = base.len();
        if h.len() != n {
            return Err(Error::AlphabetMismatch("slice monomial has the wrong length".into()));
        }
        let bound = self.bound.saturating_sub(h.degree());
        if h.degree() > self.bound {
            return Ok(Self::zero(base, 0));
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let (z, w) = m.exponents().split_at(n);
            (w == h.exponents()).then(|| (Monomial::from_exponents(z.to_vec()), c.clone()))
        });
        Ok(Self::from_terms(base, bound, terms))
    }

    /// Errors unless every coefficient is a nonnegative integer.
    pub fn check_nonneg_integral(&self, context: &str) -> Result<()> {
        for (m, c) in &self.terms {
            if !c.is_integer() || c.is_negative() {
                return Err(Error::violation(
                    context,
                    m.display(&self.alphabet),
                    "a nonnegative integer",
                    c,
                ));
            }
        }
        Ok(())
    }

    pub fn is_nonneg_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && !c.is_negative())
    }

    /// First monomial (in key order) of degree at most the common bound where
    /// the two series differ, with `(self, other)` coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(String, BigRational, BigRational)> {
        let bound = self.bound.min(other.bound);
        let keys: std::collections::BTreeSet<&Monomial> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|m| m.degree() <= bound)
            .collect();
        keys.into_iter().find_map(|m| {
            let a = self.coefficient(m);
            let b = other.coefficient(m);
            (a != b).then(|| (m.display(&self.alphabet), a, b))
        })
    }

    /// Equality of all coefficients up to the smaller of the two bounds.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.first_difference(other).is_none()
    }

    pub fn to_document(&self) -> SeriesDocument {
        SeriesDocument {
            alphabet: self.alphabet.entries.clone(),
            bound: self.bound,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermDocument {
                    exp: m.exponents().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &SeriesDocument) -> Result<Self> {
        let alphabet = Alphabet::new(doc.alphabet.clone())?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in &doc.terms {
            if t.exp.len() != alphabet.len() {
                return Err(Error::InvalidInput("term exponent length does not match alphabet".into()));
            }
            let num: BigInt = t.num.parse().map_err(|_| Error::InvalidInput(format!("bad numerator {}", t.num)))?;
            let den: BigInt = t.den.parse().map_err(|_| Error::InvalidInput(format!("bad denominator {}", t.den)))?;
            if den.is_zero() {
                return Err(Error::InvalidInput("zero denominator".into()));
            }
            let m = Monomial::from_exponents(t.exp.clone());
            if m.degree() > doc.bound {
                return Err(Error::InvalidInput("term exceeds the stated bound".into()));
            }
            terms.push((m, BigRational::new(num, den)));
        }
        Ok(Self::from_terms(&alphabet, doc.bound, terms))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("series documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SeriesDocument = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::from_document(&doc)
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
    use std::collections::btree_map::Entry;
    match map.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn labels(a: &Alphabet) -> String {
    a.entries.iter().map(|e| e.label.as_str()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(deg {})", self.bound + 1);
        }
        let mut keys: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        keys.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(b.0.cmp(a.0)));
        for (i, (m, c)) in keys.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", m.display(&self.alphabet))?;
            } else {
                write!(f, "{a}*{}", m.display(&self.alphabet))?;
            }
        }
        write!(f, " + O(deg {})", self.bound + 1)
    }
}

/// JSON form of a series; terms are sorted lexicographically by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub alphabet: Vec<AlphabetEntry>,
    pub bound: u32,
    pub terms: Vec<TermDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// How many consecutive factors may share one degree floor before the
/// product is declared stalled.
const STALL_LIMIT: usize = 4096;

/// Evaluates `prod_k factor(k)` where `factor(k)` returns `(floor_k, f_k)` with
/// `f_k - 1` vanishing below degree `floor_k`. Factors are consumed until the
/// floor exceeds the bound.
pub fn product_eval<F>(alphabet: &Arc<Alphabet>, bound: u32, mut factor: F) -> Result<TruncatedSeries>
where
    F: FnMut(usize) -> Result<(u32, TruncatedSeries)>,
{
    let mut acc = TruncatedSeries::one(alphabet, bound);
    let mut last_floor = 0u32;
    let mut run = 0usize;
    for k in 0.. {
        let (floor, f) = factor(k)?;
        if floor < last_floor {
            return Err(Error::PseudoConvergence(format!(
                "degree floor decreased from {last_floor} to {floor} at factor {k}"
            )));
        }
        if floor == last_floor {
            run += 1;
            if run > STALL_LIMIT {
                return Err(Error::PseudoConvergence(format!("degree floor stalled at {floor}")));
            }
        } else {
            run = 0;
        }
        last_floor = floor;
        if floor > bound {
            break;
        }
        if f.constant_term() != BigRational::one() {
            return Err(Error::PseudoConvergence(format!(
                "factor {k} has constant term {}",
                f.constant_term()
            )));
        }
        if let Some(d) = f.nonconstant_min_degree() {
            if d < floor {
                return Err(Error::PseudoConvergence(format!(
                    "factor {k} has a term of degree {d} below its floor {floor}"
                )));
            }
        }
        acc = acc.mul(&f)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Arc<Alphabet> {
        Alphabet::single("z", 2, 1).unwrap()
    }

    fn poly(a: &Arc<Alphabet>, bound: u32, coeffs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            a,
            bound,
            coeffs.iter().enumerate().map(|(i, &c)| (Monomial::from_exponents(vec![i as u32]), rat(c))),
        )
    }

    #[test]
    fn ring_ops_examples() {
        let a = z();
        let f = poly(&a, 5, &[1, 4, -2]);
        assert_eq!(f.mul(&TruncatedSeries::one(&a, 5)).unwrap(), f);
        let p = poly(&a, 3, &[1, -1]).mul(&poly(&a, 3, &[1, 1, 1, 1])).unwrap();
        assert_eq!(p, TruncatedSeries::one(&a, 3));
        let p = poly(&a, 2, &[1, 1]).mul(&poly(&a, 2, &[1, 0, 2])).unwrap();
        assert_eq!(p, poly(&a, 2, &[1, 1, 2]));
    }

    #[test]
    fn result_bound_is_the_minimum() {
        let a = z();
        let s = poly(&a, 7, &[1, 1]).add(&poly(&a, 3, &[0, 0, 0, 1])).unwrap();
        assert_eq!(s.bound(), 3);
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let a = z();
        let b = Alphabet::single("y", 3, 1).unwrap();
        let err = TruncatedSeries::one(&a, 2).mul(&TruncatedSeries::one(&b, 2)).unwrap_err();
        assert!(matches!(err, Error::AlphabetMismatch(_)));
    }

    #[test]
    fn invert_examples() {
        let a = z();
        assert_eq!(poly(&a, 4, &[1, -1]).invert().unwrap(), poly(&a, 4, &[1, 1, 1, 1, 1]));
        assert_eq!(TruncatedSeries::one(&a, 4).invert().unwrap(), TruncatedSeries::one(&a, 4));
        assert_eq!(poly(&a, 3, &[1, -2]).invert().unwrap(), poly(&a, 3, &[1, 2, 4, 8]));
        assert!(matches!(poly(&a, 3, &[0, 1]).invert(), Err(Error::NonUnit)));
    }

    #[test]
    fn invert_non_monic_constant() {
        let a = z();
        let f = poly(&a, 5, &[3, 1, -7]);
        let g = f.invert().unwrap();
        assert_eq!(f.mul(&g).unwrap(), TruncatedSeries::one(&a, 5));
    }

    #[test]
    fn substitute_examples() {
        let a = z();
        let f = poly(&a, 6, &[1, 1, 1]);
        assert_eq!(f.substitute(&Substitution::identity(&a)).unwrap(), f);
        let sub = |c: i64, e: u32| Substitution {
            target: a.clone(),
            images: vec![(rat(c), Monomial::from_exponents(vec![e]))],
        };
        assert_eq!(poly(&a, 6, &[1, 1]).substitute(&sub(2, 2)).unwrap(), poly(&a, 6, &[1, 0, 2]));
        assert_eq!(f.substitute(&sub(4, 3)).unwrap(), poly(&a, 6, &[1, 0, 0, 4, 0, 0, 16]));
        assert!(matches!(f.substitute(&sub(1, 0)), Err(Error::InvalidSubstitution(_))));
    }

    #[test]
    fn product_eval_examples() {
        let a = z();
        let ones = product_eval(&a, 5, |k| Ok((k as u32 + 1, TruncatedSeries::one(&a, 5)))).unwrap();
        assert_eq!(ones, TruncatedSeries::one(&a, 5));

        let lustig = product_eval(&a, 3, |n| {
            let m = Monomial::from_exponents(vec![n as u32 + 1]);
            Ok((n as u32 + 1, TruncatedSeries::geometric(&a, 3, &rat(1 << n), &m)?))
        })
        .unwrap();
        assert_eq!(lustig, poly(&a, 3, &[1, 1, 3, 7]));

        let two = product_eval(&a, 2, |j| {
            if j < 2 {
                Ok((1, TruncatedSeries::geometric(&a, 2, &rat(1 << j), &Monomial::var(1, 0))?))
            } else {
                Ok((3, TruncatedSeries::one(&a, 2)))
            }
        })
        .unwrap();
        assert_eq!(two, poly(&a, 2, &[1, 3, 7]));
    }

    #[test]
    fn product_eval_rejects_bad_factors() {
        let a = z();
        let r = product_eval(&a, 3, |_| Ok((1, poly(&a, 3, &[2, 1]))));
        assert!(matches!(r, Err(Error::PseudoConvergence(_))));
        let r = product_eval(&a, 3, |_| Ok((1, TruncatedSeries::one(&a, 3))));
        assert!(matches!(r, Err(Error::PseudoConvergence(_))));
        let r = product_eval(&a, 3, |k| Ok((3 - k.min(2) as u32, TruncatedSeries::one(&a, 3))));
        assert!(matches!(r, Err(Error::PseudoConvergence(_))));
        let r = product_eval(&a, 3, |k| Ok((k as u32 + 2, poly(&a, 3, &[1, 1]))));
        assert!(matches!(r, Err(Error::PseudoConvergence(_))));
    }

    #[test]
    fn dirichlet_examples() {
        let a = z();
        let t = poly(&a, 5, &[0, 0, 1]).dirichlet_coeffs(10);
        assert_eq!(t.coeffs.len(), 1);
        assert_eq!(t.get(4), rat(1));
        let t = TruncatedSeries::one(&a, 3).dirichlet_coeffs(5);
        assert_eq!(t.get(1), rat(1));
        let t = poly(&a, 3, &[1, 1, 3, 7]).dirichlet_coeffs(15);
        assert!(t.complete);
        let expect: BTreeMap<u64, BigRational> =
            [(1, rat(1)), (2, rat(1)), (4, rat(3)), (8, rat(7))].into_iter().collect();
        assert_eq!(t.coeffs, expect);
        assert!(!poly(&a, 3, &[1, 1]).dirichlet_coeffs(16).complete);
    }

    #[test]
    fn slice_examples() {
        let base = z();
        let d = base.doubled().unwrap();
        assert_eq!(d.entry(1).label, "w");
        let f = TruncatedSeries::from_terms(
            &d,
            4,
            (0..4).map(|k| (Monomial::from_exponents(vec![k, 0]), rat(k as i64 + 1))),
        );
        let s = f.slice_coefficient(&base, &Monomial::one(1)).unwrap();
        assert_eq!(s, poly(&base, 4, &[1, 2, 3, 4]));

        let w_over = TruncatedSeries::geometric(&d, 4, &rat(1), &Monomial::from_exponents(vec![1, 0]))
            .unwrap()
            .shift(&Monomial::from_exponents(vec![0, 1]));
        let s = w_over.slice_coefficient(&base, &Monomial::from_exponents(vec![1])).unwrap();
        assert_eq!(s, poly(&base, 3, &[1, 1, 1, 1]));

        let g = TruncatedSeries::from_terms(
            &d,
            4,
            vec![(Monomial::from_exponents(vec![0, 1]), rat(1)), (Monomial::from_exponents(vec![1, 1]), rat(1))],
        );
        assert!(g.slice_coefficient(&base, &Monomial::from_exponents(vec![2])).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip_and_order() {
        let a = Alphabet::uniform("z", 3, 2).unwrap();
        let f = TruncatedSeries::from_terms(
            &a,
            3,
            vec![
                (Monomial::from_exponents(vec![1, 1]), BigRational::new(5.into(), 3.into())),
                (Monomial::from_exponents(vec![0, 0]), rat(1)),
                (Monomial::from_exponents(vec![0, 2]), rat(-4)),
            ],
        );
        let doc = f.to_document();
        let exps: Vec<Vec<u32>> = doc.terms.iter().map(|t| t.exp.clone()).collect();
        assert_eq!(exps, vec![vec![0, 0], vec![0, 2], vec![1, 1]]);
        assert_eq!(TruncatedSeries::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(vec![AlphabetEntry::new("a", 1, 1)]).is_err());
        assert!(Alphabet::new(vec![AlphabetEntry::new("a", 2, 1), AlphabetEntry::new("a", 3, 1)]).is_err());
    }

    #[test]
    fn divide_by_monomial_requires_divisibility() {
        let a = Alphabet::uniform("z", 2, 2).unwrap();
        let f = TruncatedSeries::from_terms(&a, 4, vec![(Monomial::from_exponents(vec![1, 1]), rat(2))]);
        let q = f.divide_by_monomial(&Monomial::from_exponents(vec![0, 1]), "test").unwrap();
        assert_eq!(q.coeff(&[1, 0]), rat(2));
        assert_eq!(q.bound(), 3);
        let g = TruncatedSeries::one(&a, 4);
        assert!(matches!(
            g.divide_by_monomial(&Monomial::from_exponents(vec![0, 1]), "test"),
            Err(Error::FormulaViolation { .. })
        ));
    }
}
