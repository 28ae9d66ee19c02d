//! Proliferation: zeta functions of `M` from partial zeta functions of the
//! slice `M/IM` for an invertible ideal `I`.
//!
//! Classes over the base are top vectors indexed by the simple modules of
//! `R/J`; `σ` records `I ⊗ S_i ≅ S_{σ(i)}`. The change of variable
//! `⟨P,−⟩_j` sends `z_i` to a scalar times `z_i z_{σ(i)} .. z_{σ^j(i)}`, so a
//! jump at position `j` costs degree at least `j + 1` and every sum below is
//! finite under a degree bound.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hereditary::{solomon_hey_factor, HereditaryModule, HereditarySpec};
use crate::hey::{hey_over, hey_product, SemisimpleData};
use crate::oracle::ChainData;
use crate::qcomb::{gaussian_binomial, partition_count};
use crate::series::{product_eval, rat_big, Alphabet, Monomial, Substitution, TruncatedSeries};

/// The ring `R/I` and module `M/IM` a proliferation starts from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseKind {
    /// `M/IM` semisimple, with multiplicities `m_i`.
    Semisimple(SemisimpleData),
    /// `M/IM` free of rank `m` over a DVR with residue field `F_q`.
    Dvr { q: u64, m: u32 },
    /// A lattice over the basic hereditary order of chain length `n`.
    Hereditary(HereditarySpec),
}

/// JSON form: `{"base": {...}, "sigma": [2,1], "truncate": 4}` with `sigma`
/// 1-based and defaulting to the identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProlifInput {
    pub base: BaseKind,
    #[serde(default)]
    pub sigma: Option<Vec<usize>>,
    #[serde(default)]
    pub truncate: Option<u32>,
}

type ZetaKey = (Vec<u32>, Vec<u32>, u32, bool);

#[derive(Debug)]
pub struct SliceBase {
    kind: BaseKind,
    sigma: Vec<usize>,
    alphabet: Arc<Alphabet>,
    qs: Vec<u64>,
    top: Vec<u32>,
    modules: Mutex<HashMap<Vec<u32>, Arc<HereditaryModule>>>,
    zetas: Mutex<HashMap<ZetaKey, TruncatedSeries>>,
}

/// Permutation check; `sigma` is 0-based.
fn check_permutation(sigma: &[usize], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    if sigma.len() != k {
        return Err(Error::InvalidInput(format!("sigma must permute {k} entries")));
    }
    for &s in sigma {
        if s >= k || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidInput(format!("sigma {sigma:?} is not a permutation")));
        }
    }
    Ok(())
}

fn qpow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

impl SliceBase {
    /// `sigma` is 0-based; `None` means the identity.
    pub fn new(kind: BaseKind, sigma: Option<Vec<usize>>) -> Result<Self> {
        let (alphabet, top) = match &kind {
            BaseKind::Semisimple(data) => (data.alphabet()?, data.entries.iter().map(|e| e.m).collect()),
            BaseKind::Dvr { q, m } => (Alphabet::uniform("z", *q, 1)?, vec![*m]),
            BaseKind::Hereditary(spec) => {
                let module = HereditaryModule::from_spec(spec)?;
                (module.base_alphabet().clone(), module.top())
            }
        };
        let k = alphabet.len();
        let sigma = sigma.unwrap_or_else(|| (0..k).collect());
        check_permutation(&sigma, k)?;
        if matches!(kind, BaseKind::Dvr { .. }) && sigma != [0] {
            return Err(Error::InvalidInput("a DVR base has a single simple module".into()));
        }
        let qs = alphabet.entries().iter().map(|e| e.q).collect();
        Ok(SliceBase {
            kind,
            sigma,
            alphabet,
            qs,
            top,
            modules: Mutex::new(HashMap::new()),
            zetas: Mutex::new(HashMap::new()),
        })
    }

    /// Parses the JSON input form, converting `sigma` from 1-based.
    pub fn from_json(s: &str) -> Result<(Self, Option<u32>)> {
        let input: ProlifInput =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("proliferation input: {e}")))?;
        let sigma = match input.sigma {
            Some(s) if s.contains(&0) => return Err(Error::InvalidInput("sigma is 1-based".into())),
            Some(s) => Some(s.into_iter().map(|i| i - 1).collect()),
            None => None,
        };
        Ok((SliceBase::new(input.base, sigma)?, input.truncate))
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// 0-based.
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// The class of `M/IM`.
    pub fn top(&self) -> &[u32] {
        &self.top
    }

    fn sigma_pow(&self, i: usize, k: usize) -> usize {
        (0..k).fold(i, |x, _| self.sigma[x])
    }

    /// `σ^k` applied to a class vector.
    pub fn sigma_class(&self, f: &[u32], k: usize) -> Vec<u32> {
        let mut out = vec![0; f.len()];
        for (i, &c) in f.iter().enumerate() {
            out[self.sigma_pow(i, k)] = c;
        }
        out
    }

    /// `|Hom(P, F)| = prod_i q_i^{ρ_i ℓ_i}` for `P` with top `ρ` and `F` of class `ℓ`.
    pub fn hom_count(&self, p: &[u32], f: &[u32]) -> BigInt {
        p.iter().zip(f).zip(&self.qs).map(|((&a, &b), &q)| qpow(q, a as u64 * b as u64)).product()
    }

    /// The classes a sequence may pass through.
    pub fn classes(&self) -> Vec<Vec<u32>> {
        match &self.kind {
            BaseKind::Semisimple(_) => {
                let mut out = vec![Vec::new()];
                for &m in &self.top {
                    out = out.into_iter().flat_map(|v: Vec<u32>| (0..=m).map(move |b| [v.clone(), vec![b]].concat())).collect();
                }
                out
            }
            BaseKind::Dvr { m, .. } => vec![vec![*m]],
            BaseKind::Hereditary(_) => compositions(self.top.iter().sum(), self.top.len()),
        }
    }

    fn module(&self, class: &[u32]) -> Result<Arc<HereditaryModule>> {
        let BaseKind::Hereditary(spec) = &self.kind else {
            return Err(Error::Unsupported("not a hereditary base".into()));
        };
        let mut cache = self.modules.lock().expect("module cache");
        if let Some(m) = cache.get(class) {
            return Ok(m.clone());
        }
        let columns: Vec<usize> = class.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat(i + 1).take(c as usize)).collect();
        let m = Arc::new(HereditaryModule::new(spec.q, spec.n, &columns)?);
        cache.insert(class.to_vec(), m.clone());
        Ok(m)
    }

    /// `Z(A, P)`: the sum of `[A/X]` over `X ⊆ A` of class `p`, for `A` of class `a`.
    pub fn partial_zeta(&self, a: &[u32], p: &[u32], bound: u32) -> Result<TruncatedSeries> {
        self.cached_slice(a, p, bound, false)
    }

    /// `F(A, P)`, the partial zeta function divided by `Z(V)`; hereditary bases only.
    pub fn brs_slice(&self, a: &[u32], p: &[u32], bound: u32) -> Result<TruncatedSeries> {
        self.cached_slice(a, p, bound, true)
    }

    fn cached_slice(&self, a: &[u32], p: &[u32], bound: u32, brs: bool) -> Result<TruncatedSeries> {
        let key = (a.to_vec(), p.to_vec(), bound, brs);
        if let Some(z) = self.zetas.lock().expect("zeta cache").get(&key) {
            return Ok(z.clone());
        }
        let z = match &self.kind {
            BaseKind::Semisimple(_) => {
                let mut acc = TruncatedSeries::one(&self.alphabet, bound);
                for (i, (&x, &y)) in a.iter().zip(p).enumerate() {
                    acc = acc.mul(&semisimple_partial_zeta(x, y, self.qs[i], &self.alphabet, i, bound)?)?;
                }
                acc
            }
            BaseKind::Dvr { m, .. } => {
                if a != [*m] || p != [*m] {
                    TruncatedSeries::zero(&self.alphabet, bound)
                } else {
                    hey_over(&self.alphabet, &[*m], bound)?
                }
            }
            BaseKind::Hereditary(_) => {
                if a.iter().sum::<u32>() != self.top.iter().sum::<u32>() || p.iter().sum::<u32>() != a.iter().sum::<u32>() {
                    TruncatedSeries::zero(&self.alphabet, bound)
                } else if brs {
                    self.module(a)?.brs_slice(p, bound)?
                } else {
                    self.module(a)?.partial_zeta(p, bound)?
                }
            }
        };
        self.zetas.lock().expect("zeta cache").insert(key, z.clone());
        Ok(z)
    }

    /// `Z(M/IM)`.
    pub fn total_zeta(&self, bound: u32) -> Result<TruncatedSeries> {
        match &self.kind {
            BaseKind::Semisimple(data) => hey_product(data, bound),
            BaseKind::Dvr { m, .. } => hey_over(&self.alphabet, &[*m], bound),
            BaseKind::Hereditary(spec) => HereditaryModule::from_spec(spec)?.total_zeta(bound),
        }
    }

    /// `⟨P,−⟩_j` for a sequence `P_0, P_1, ..` (at least `j + 1` entries).
    pub fn change_of_variable(&self, seq: &[Vec<u32>], j: usize) -> Substitution {
        let k = self.alphabet.len();
        let images = (0..k)
            .map(|i| {
                let mut exps = vec![0u32; k];
                let mut scalar = BigRational::one() / rat_big(self.hom_count(&seq[j], &unit(k, i)));
                for step in 0..=j {
                    let target = self.sigma_pow(i, step);
                    exps[target] += 1;
                    scalar *= rat_big(self.hom_count(&seq[j - step], &unit(k, target)));
                }
                (scalar, Monomial::from_exponents(exps))
            })
            .collect();
        Substitution { target: self.alphabet.clone(), images }
    }

    /// The class-level fiber product for a chain `Y_0 ⊆ Y_1 ⊆ ..` of submodules of `M/IM`.
    pub fn fundamental_fiber_product(&self, y: &ChainData, bound: u32) -> Result<TruncatedSeries> {
        let s = y.quotients.len();
        if y.tops.len() != s + 1 || y.tops.iter().chain(&y.quotients).any(|c| c.len() != self.alphabet.len()) {
            return Err(Error::InvalidInput("chain data needs one more top than quotient, over the base classes".into()));
        }
        if y.tops[s] != self.top {
            return Err(Error::InvalidInput("the chain does not stabilize at M/IM".into()));
        }
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; self.alphabet.len()];
        for (j, q) in y.quotients.iter().enumerate() {
            coeff /= rat_big(self.hom_count(&y.tops[j], q));
            for k in 0..=j {
                let shifted = self.sigma_class(q, k);
                coeff *= rat_big(self.hom_count(&y.tops[j - k], &shifted));
                exps.iter_mut().zip(&shifted).for_each(|(e, c)| *e += c);
            }
        }
        Ok(TruncatedSeries::monomial(&self.alphabet, bound, Monomial::from_exponents(exps), coeff))
    }

    /// Class sequences `P_0, .., P_bound` (constant from `bound` on) whose
    /// proliferation term can be nonzero below the bound.
    pub fn class_sequences(&self, bound: u32) -> Result<Vec<Vec<Vec<u32>>>> {
        let classes = self.classes();
        let mut seq = vec![self.top.clone(); bound as usize + 1];
        let mut out = Vec::new();
        self.extend(&classes, &mut seq, bound as usize, 0, bound, &mut out)?;
        Ok(out)
    }

    /// Chooses `P_{j-1}` given `P_j, ..`.
    fn extend(
        &self,
        classes: &[Vec<u32>],
        seq: &mut Vec<Vec<u32>>,
        j: usize,
        cost: u32,
        bound: u32,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) -> Result<()> {
        if j == 0 {
            out.push(seq.clone());
            return Ok(());
        }
        for c in classes {
            let z = self.partial_zeta(&seq[j], c, bound)?;
            if z.is_zero() {
                continue;
            }
            let step = if *c == seq[j] {
                0
            } else {
                // A jump at position j - 1 multiplies every degree by j.
                let d = z.min_degree().unwrap_or(0);
                debug_assert!(d >= 1, "a proper submodule has positive colength");
                d * j as u32
            };
            if cost + step > bound {
                continue;
            }
            seq[j - 1] = c.clone();
            self.extend(classes, seq, j - 1, cost + step, bound, out)?;
        }
        seq[j - 1] = self.top.clone();
        Ok(())
    }

    fn sequence_sum(&self, bound: u32, brs: bool) -> Result<TruncatedSeries> {
        let mut total = TruncatedSeries::zero(&self.alphabet, bound);
        for seq in self.class_sequences(bound)? {
            let mut term = TruncatedSeries::one(&self.alphabet, bound);
            for j in 0..bound as usize {
                let z = self.cached_slice(&seq[j + 1], &seq[j], bound, brs)?;
                term = term.mul(&z.substitute(&self.change_of_variable(&seq, j))?)?;
                if term.is_zero() {
                    break;
                }
            }
            total = total.add(&term)?;
        }
        Ok(total)
    }

    /// `sum_P prod_j Z(P_{j+1}, P_j; ⟨P,−⟩_j)`.
    pub fn proliferation_sum(&self, bound: u32) -> Result<TruncatedSeries> {
        let z = self.sequence_sum(bound, false)?;
        z.check_nonneg_integral("proliferation sum")?;
        Ok(z)
    }

    /// `prod_j Z(M/IM; ⟨M/IM,−⟩_j)`, valid when all finite colength submodules
    /// of `M/IM` are isomorphic. That holds for DVR bases and `n = 1`
    /// hereditary bases; otherwise the caller must assert it.
    pub fn single_sliver(&self, bound: u32, assume_isomorphic: bool) -> Result<TruncatedSeries> {
        let automatic = match &self.kind {
            BaseKind::Dvr { .. } => true,
            BaseKind::Hereditary(spec) => spec.n == 1,
            BaseKind::Semisimple(_) => false,
        };
        if !automatic && !assume_isomorphic {
            return Err(Error::Unsupported(
                "single-sliver form needs all finite colength submodules of M/IM to be isomorphic".into(),
            ));
        }
        let z = self.total_zeta(bound)?;
        let seq = vec![self.top.clone(); bound as usize + 1];
        product_eval(&self.alphabet, bound, |j| {
            if j >= bound as usize {
                return Ok((j as u32 + 1, TruncatedSeries::one(&self.alphabet, bound)));
            }
            Ok((j as u32 + 1, z.substitute(&self.change_of_variable(&seq, j))?))
        })
    }

    /// `(prod_j Z_j(V), sum_P prod_j F(P_{j+1}, P_j; ⟨P,−⟩_j))`, checked against
    /// [`SliceBase::proliferation_sum`].
    pub fn brs_factored_prolif(&self, bound: u32) -> Result<(TruncatedSeries, TruncatedSeries)> {
        let BaseKind::Hereditary(spec) = &self.kind else {
            return Err(Error::Unsupported("the factored form needs a hereditary base".into()));
        };
        let n = spec.n;
        let ell = self.top.iter().sum::<u32>();
        let v = Monomial::from_exponents(vec![1; n]);
        let embed = Substitution { target: self.alphabet.clone(), images: vec![(BigRational::one(), v)] };
        let prefactor = product_eval(&self.alphabet, bound, |j| {
            let floor = (j as u32 + 1) * n as u32;
            if floor > bound {
                return Ok((floor, TruncatedSeries::one(&self.alphabet, bound)));
            }
            Ok((floor, zjv_factor(ell, spec.q, j as u32, bound)?.substitute(&embed)?))
        })?;
        let remainder = self.sequence_sum(bound, true)?;
        let product = prefactor.mul(&remainder)?;
        let direct = self.proliferation_sum(bound)?;
        if let Some((m, expected, actual)) = direct.first_difference(&product) {
            return Err(Error::violation("factored proliferation", m, expected, actual));
        }
        Ok((prefactor, remainder))
    }
}

fn unit(k: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; k];
    v[i] = 1;
    v
}

/// Vectors of `n` nonnegative entries summing to `total`, in lexicographic order.
fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (0..=total)
        .rev()
        .flat_map(|first| {
            compositions(total - first, n - 1).into_iter().map(move |rest| [vec![first], rest].concat())
        })
        .collect()
}

/// Submodules of `S^a` isomorphic to `S^b`, as `binom(a, b)_q z^{a-b}` in
/// variable `index` of `alphabet`.
pub fn semisimple_partial_zeta(
    a: u32,
    b: u32,
    q: u64,
    alphabet: &Arc<Alphabet>,
    index: usize,
    bound: u32,
) -> Result<TruncatedSeries> {
    if b > a {
        return Ok(TruncatedSeries::zero(alphabet, bound));
    }
    let m = Monomial::var(alphabet.len(), index).pow(a - b);
    Ok(TruncatedSeries::monomial(alphabet, bound, m, rat_big(gaussian_binomial(a as u64, b as i64, q))))
}

/// `prod_{n>=0} prod_i prod_{j<m_i} (1 - q_i^{j-m_i} prod_{k<=n} w_{σ^k(i)})^{-1}`
/// with `w_i = q_i^{m_i} z_i`; `sigma` is 0-based.
pub fn lifted_hey(data: &SemisimpleData, sigma: &[usize], bound: u32) -> Result<TruncatedSeries> {
    let alphabet = data.alphabet()?;
    let k = alphabet.len();
    check_permutation(sigma, k)?;
    let ms: Vec<u32> = data.entries.iter().map(|e| e.m).collect();
    let qs: Vec<u64> = data.entries.iter().map(|e| e.q).collect();
    let z = product_eval(&alphabet, bound, |layer| {
        let floor = layer as u32 + 1;
        let mut acc = TruncatedSeries::one(&alphabet, bound);
        if floor > bound {
            return Ok((floor, acc));
        }
        for i in 0..k {
            let mut exps = vec![0u32; k];
            let mut w = BigRational::one();
            let mut x = i;
            for _ in 0..=layer {
                exps[x] += 1;
                w *= rat_big(qpow(qs[x], ms[x] as u64));
                x = sigma[x];
            }
            let m = Monomial::from_exponents(exps);
            for j in 0..ms[i] {
                let c = &w * rat_big(qpow(qs[i], j as u64)) / rat_big(qpow(qs[i], ms[i] as u64));
                acc = acc.mul(&TruncatedSeries::geometric(&alphabet, bound, &c, &m)?)?;
            }
        }
        Ok((floor, acc))
    })?;
    z.check_nonneg_integral("lifted Hey product")?;
    Ok(z)
}

/// Multiplies a dense Dirichlet series (index = `n`) by `(1 - c N^{-s})^{-1}`.
fn dirichlet_geometric(a: &mut [BigInt], c: &BigInt, big_n: u64) {
    let n_max = a.len() as u64 - 1;
    let mut k = big_n;
    while k <= n_max {
        let add = c * &a[(k / big_n) as usize];
        a[k as usize] += add;
        k += big_n;
    }
}

fn dirichlet_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n_max = a.len() - 1;
    let mut out = vec![BigInt::zero(); n_max + 1];
    for i in 1..=n_max {
        if a[i].is_zero() {
            continue;
        }
        for j in 1..=n_max / i {
            if !b[j].is_zero() {
                out[i * j] += &a[i] * &b[j];
            }
        }
    }
    out
}

fn to_table(a: Vec<BigInt>) -> BTreeMap<u64, BigInt> {
    a.into_iter().enumerate().skip(1).map(|(n, c)| (n as u64, c)).collect()
}

/// Coefficients of `prod_{n>=0} prod_{j<m} (1 - q^{j+mn-r(n+1)s})^{-|S|}` for `n <= n_max`.
pub fn hom_slice_dirichlet(q: u64, r: u32, m: u32, s_count: u32, n_max: u64) -> Result<BTreeMap<u64, BigInt>> {
    if q < 2 || r == 0 {
        return Err(Error::InvalidInput("need q >= 2 and r >= 1".into()));
    }
    let mut a = vec![BigInt::zero(); n_max as usize + 1];
    if n_max >= 1 {
        a[1] = BigInt::one();
    }
    let mut layer = 0u64;
    loop {
        let big_n = qpow(q, r as u64 * (layer + 1));
        if big_n > BigInt::from(n_max) {
            break;
        }
        let big_n = u64::try_from(big_n).expect("bounded by n_max");
        for j in 0..m as u64 {
            let c = qpow(q, j + m as u64 * layer);
            for _ in 0..s_count {
                dirichlet_geometric(&mut a, &c, big_n);
            }
        }
        layer += 1;
    }
    Ok(to_table(a))
}

/// `sum_j p(i, j) q^{i-j}` for `i <= i_max`.
pub fn lustig_partition(q: u64, i_max: u32) -> Vec<BigInt> {
    (0..=i_max as u64)
        .map(|i| {
            if i == 0 {
                BigInt::one()
            } else {
                (1..=i).map(|j| partition_count(i, j) * qpow(q, i - j)).sum()
            }
        })
        .collect()
}

/// Coefficients of `prod_{n>=0} (1 - q^n x^{n+1})^{-1}` for `x^i`, `i <= i_max`.
pub fn lustig_product(q: u64, i_max: u32) -> Result<Vec<BigInt>> {
    let x = Alphabet::single("x", q, 1)?;
    let z = product_eval(&x, i_max, |n| {
        let floor = n as u32 + 1;
        if floor > i_max {
            return Ok((floor, TruncatedSeries::one(&x, i_max)));
        }
        Ok((floor, TruncatedSeries::geometric(&x, i_max, &rat_big(qpow(q, n as u64)), &Monomial::var(1, 0).pow(floor))?))
    })?;
    (0..=i_max)
        .map(|i| {
            let c = z.coeff(&[i]);
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::violation("Lustig product", format!("x^{i}"), "an integer", c))
            }
        })
        .collect()
}

/// Ideals of colength `i` in `F_q[[u,t]]`, computed from both the partition
/// formula and the product formula, which must agree.
pub fn lustig_coeffs(q: u64, i_max: u32) -> Result<Vec<BigInt>> {
    let a = lustig_partition(q, i_max);
    let b = lustig_product(q, i_max)?;
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        if x != y {
            return Err(Error::violation("Lustig coefficients", format!("a_{i}"), x, y));
        }
    }
    Ok(a)
}

/// `prod_{j>=1} ζ(js - j + 1)`, whose `j`-th factor has coefficient `k^{j-1}` at `k^j`.
pub fn rossmann_zeta_product(n_max: u64) -> BTreeMap<u64, BigInt> {
    let size = n_max as usize + 1;
    let mut a = vec![BigInt::zero(); size];
    if n_max >= 1 {
        a[1] = BigInt::one();
    }
    let mut j = 1u32;
    while 1u64.checked_shl(j).map_or(false, |p| p <= n_max) {
        let mut factor = vec![BigInt::zero(); size];
        let mut k = 1u64;
        while let Some(kj) = k.checked_pow(j).filter(|&v| v <= n_max) {
            factor[kj as usize] = BigInt::from(k).pow(j - 1);
            k += 1;
        }
        a = dirichlet_mul(&a, &factor);
        j += 1;
    }
    to_table(a)
}

/// The Euler product of local ideal counts `sum_i a_i(p) p^{-is}` over primes `p`.
pub fn rossmann_euler_product(n_max: u64) -> BTreeMap<u64, BigInt> {
    let mut local: HashMap<u64, Vec<BigInt>> = HashMap::new();
    (1..=n_max)
        .map(|n| {
            let mut rest = n;
            let mut value = BigInt::one();
            let mut p = 2;
            while rest > 1 {
                if p * p > rest {
                    p = rest;
                }
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                if e > 0 {
                    let counts = local.entry(p).or_insert_with(|| lustig_partition(p, n_max.ilog(p)));
                    value *= &counts[e];
                }
                p += 1;
            }
            (n, value)
        })
        .collect()
}

/// Dirichlet coefficients of the ideal zeta function of `Z[[t]]`, computed two
/// ways that must agree.
pub fn rossmann_coeffs(n_max: u64) -> Result<BTreeMap<u64, BigInt>> {
    let a = rossmann_zeta_product(n_max);
    let b = rossmann_euler_product(n_max);
    for (n, x) in &a {
        if Some(x) != b.get(n) {
            return Err(Error::violation("Rossmann coefficients", format!("a_{n}"), x, b.get(n).cloned().unwrap_or_default()));
        }
    }
    Ok(a)
}

/// `Z(V; ⟨P,−⟩_j)` for `Z(V) = prod_{i<ℓ} (1 - q^i v)^{-1}`, in one variable
/// `v`, checked against `prod_{i<ℓ} (1 - q^{i+jℓ} v^{j+1})^{-1}`.
pub fn zjv_factor(ell: u32, q: u64, j: u32, bound: u32) -> Result<TruncatedSeries> {
    let v = Alphabet::single("v", q, ell.max(1))?;
    let var = Monomial::var(1, 0);
    let zv = solomon_hey_factor(&v, &var, ell, q, bound)?;
    let sub = Substitution {
        target: v.clone(),
        images: vec![(rat_big(qpow(q, (j * ell) as u64)), var.pow(j + 1))],
    };
    let z = zv.substitute(&sub)?;
    let mut closed = TruncatedSeries::one(&v, bound);
    for i in 0..ell {
        let c = rat_big(qpow(q, (i + j * ell) as u64));
        closed = closed.mul(&TruncatedSeries::geometric(&v, bound, &c, &var.pow(j + 1))?)?;
    }
    if let Some((m, expected, actual)) = closed.first_difference(&z) {
        return Err(Error::violation("Z_j(V)", m, expected, actual));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hey::SemisimpleEntry;
    use crate::series::rat;

    fn dvr(q: u64, m: u32) -> SliceBase {
        SliceBase::new(BaseKind::Dvr { q, m }, None).unwrap()
    }

    fn semisimple(entries: &[(u64, u32)]) -> SemisimpleData {
        SemisimpleData::new(entries.iter().map(|&(q, m)| SemisimpleEntry { label: String::new(), q, r: 1, m }).collect())
    }

    fn hered(columns: &[usize], sigma: Option<Vec<usize>>) -> SliceBase {
        let spec = HereditarySpec { q: 2, n: 2, columns: columns.to_vec() };
        SliceBase::new(BaseKind::Hereditary(spec), sigma).unwrap()
    }

    fn coeffs(s: &TruncatedSeries) -> Vec<BigRational> {
        (0..=s.bound()).map(|k| s.coeff(&[k])).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn hom_count_examples() {
        let b = dvr(2, 1);
        assert_eq!(b.hom_count(&[1], &[0]), BigInt::from(1));
        assert_eq!(b.hom_count(&[1], &[1]), BigInt::from(2));
        let h = hered(&[1, 2], None);
        assert_eq!(h.hom_count(&[1, 1], &[1, 0]), BigInt::from(2));
    }

    #[test]
    fn change_of_variable_examples() {
        let b = dvr(2, 1);
        let seq = vec![vec![1]; 3];
        let s = b.change_of_variable(&seq, 0);
        assert_eq!(s.images[0], (rat(1), Monomial::var(1, 0)));
        let s = b.change_of_variable(&seq, 2);
        assert_eq!(s.images[0], (rat(4), Monomial::from_exponents(vec![3])));
        let h = hered(&[1, 2], Some(vec![1, 0]));
        let s = h.change_of_variable(&[vec![1, 1], vec![1, 1]], 1);
        assert_eq!(s.images[0], (rat(2), Monomial::from_exponents(vec![1, 1])));
    }

    #[test]
    fn fiber_product_examples() {
        let b = dvr(2, 1);
        assert_eq!(b.fundamental_fiber_product(&ChainData::constant(vec![1]), 3).unwrap(), TruncatedSeries::one(b.alphabet(), 3));
        let y = ChainData { tops: vec![vec![1], vec![1]], quotients: vec![vec![1]] };
        assert_eq!(coeffs(&b.fundamental_fiber_product(&y, 3).unwrap()), ints(&[0, 1, 0, 0]));
        let y = ChainData { tops: vec![vec![1], vec![1]], quotients: vec![vec![2]] };
        assert_eq!(coeffs(&b.fundamental_fiber_product(&y, 3).unwrap()), ints(&[0, 0, 1, 0]));
        let bad = ChainData { tops: vec![vec![1]], quotients: vec![vec![1]] };
        assert!(b.fundamental_fiber_product(&bad, 3).is_err());
    }

    #[test]
    fn semisimple_partial_examples() {
        let a = Alphabet::single("z", 2, 1).unwrap();
        assert_eq!(coeffs(&semisimple_partial_zeta(2, 2, 2, &a, 0, 3).unwrap()), ints(&[1, 0, 0, 0]));
        assert_eq!(coeffs(&semisimple_partial_zeta(2, 1, 2, &a, 0, 3).unwrap()), ints(&[0, 3, 0, 0]));
        assert_eq!(coeffs(&semisimple_partial_zeta(3, 1, 2, &a, 0, 3).unwrap()), ints(&[0, 0, 7, 0]));
    }

    #[test]
    fn proliferation_examples() {
        let b = SliceBase::new(BaseKind::Semisimple(semisimple(&[(2, 1)])), None).unwrap();
        assert_eq!(coeffs(&b.proliferation_sum(3).unwrap()), ints(&[1, 1, 1, 1]));
        let b = SliceBase::new(BaseKind::Semisimple(semisimple(&[(2, 2)])), None).unwrap();
        assert_eq!(coeffs(&b.proliferation_sum(1).unwrap()), ints(&[1, 3]));
        let h = hered(&[1, 2], None);
        assert_eq!(h.proliferation_sum(0).unwrap(), TruncatedSeries::one(h.alphabet(), 0));
    }

    #[test]
    fn single_sliver_examples() {
        assert_eq!(coeffs(&dvr(2, 1).single_sliver(3, false).unwrap()), ints(&[1, 1, 3, 7]));
        assert_eq!(coeffs(&dvr(3, 0).single_sliver(3, false).unwrap()), ints(&[1, 0, 0, 0]));
        assert_eq!(coeffs(&dvr(2, 2).single_sliver(2, false).unwrap()), ints(&[1, 3, 19]));
        let b = SliceBase::new(BaseKind::Semisimple(semisimple(&[(2, 1)])), None).unwrap();
        assert!(matches!(b.single_sliver(2, false), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lifted_hey_examples() {
        assert_eq!(coeffs(&lifted_hey(&semisimple(&[(2, 1)]), &[0], 3).unwrap()), ints(&[1, 1, 3, 7]));
        let empty = semisimple(&[]);
        assert_eq!(lifted_hey(&empty, &[], 3).unwrap(), TruncatedSeries::one(&empty.alphabet().unwrap(), 3));

        let two = semisimple(&[(2, 1), (2, 1)]);
        let a = two.alphabet().unwrap();
        let z = lifted_hey(&two, &[1, 0], 2).unwrap();
        let mut expected = TruncatedSeries::one(&a, 2);
        for (c, m) in [(1, vec![1, 0]), (1, vec![0, 1]), (2, vec![1, 1]), (2, vec![1, 1])] {
            expected = expected.mul(&TruncatedSeries::geometric(&a, 2, &rat(c), &Monomial::from_exponents(m)).unwrap()).unwrap();
        }
        assert_eq!(z, expected);
    }

    #[test]
    fn hom_slice_examples() {
        let t = hom_slice_dirichlet(2, 1, 1, 1, 16).unwrap();
        assert_eq!((t[&1].clone(), t[&4].clone(), t[&8].clone()), (BigInt::from(1), BigInt::from(3), BigInt::from(7)));
        assert_eq!(t[&3], BigInt::zero());
    }

    #[test]
    fn lustig_examples() {
        assert_eq!(lustig_coeffs(2, 3).unwrap(), [1, 1, 3, 7].map(BigInt::from).to_vec());
        assert_eq!(lustig_coeffs(3, 2).unwrap()[2], BigInt::from(4));
        for q in [2, 3, 5] {
            let c = lustig_coeffs(q, 12).unwrap();
            assert_eq!((c[0].clone(), c[1].clone()), (BigInt::one(), BigInt::one()));
        }
    }

    #[test]
    fn rossmann_examples() {
        let r = rossmann_coeffs(64).unwrap();
        assert_eq!(r[&1], BigInt::from(1));
        assert_eq!(r[&4], BigInt::from(3));
        assert_eq!(r[&9], BigInt::from(4));
        assert_eq!(r[&6], BigInt::from(1));
    }

    #[test]
    fn zjv_examples() {
        let z = zjv_factor(2, 2, 0, 2).unwrap();
        assert_eq!(coeffs(&z), ints(&[1, 3, 7]));
        let z = zjv_factor(1, 2, 1, 4).unwrap();
        assert_eq!(coeffs(&z), ints(&[1, 0, 2, 0, 4]));
    }

    #[test]
    fn brs_factored_examples() {
        let h = hered(&[1, 2], None);
        let (p, r) = h.brs_factored_prolif(0).unwrap();
        assert_eq!((p.num_terms(), r.num_terms()), (1, 1));
        h.brs_factored_prolif(2).unwrap();

        let spec = HereditarySpec { q: 2, n: 1, columns: vec![1, 1] };
        let b = SliceBase::new(BaseKind::Hereditary(spec), None).unwrap();
        let (_, r) = b.brs_factored_prolif(4).unwrap();
        assert_eq!(r, TruncatedSeries::one(b.alphabet(), 4));
    }

    #[test]
    fn dvr_paths_agree() {
        for q in [2, 3] {
            for m in 0..=3 {
                let b = dvr(q, m);
                let data = SemisimpleData::new(vec![SemisimpleEntry { label: "z1".into(), q, r: 1, m }]);
                let s = b.single_sliver(4, false).unwrap();
                assert_eq!(s, lifted_hey(&data, &[0], 4).unwrap());
                assert_eq!(s, b.proliferation_sum(4).unwrap());
            }
        }
    }

    #[test]
    fn prolif_json() {
        let (b, t) =
            SliceBase::from_json(r#"{"base":{"kind":"hereditary","q":2,"n":2,"columns":[1,2]},"sigma":[2,1],"truncate":4}"#)
                .unwrap();
        assert_eq!((b.sigma(), t), (&[1usize, 0][..], Some(4)));
        assert!(SliceBase::from_json(r#"{"base":{"kind":"dvr","q":2,"m":1},"sigma":[1,1]}"#).is_err());
        let (b, _) = SliceBase::from_json(r#"{"base":{"kind":"semisimple","entries":[{"q":2,"r":1,"m":1}]}}"#).unwrap();
        assert_eq!(b.alphabet().entry(0).label, "z1");
    }
}
