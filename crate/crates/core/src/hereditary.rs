//! Two-variable Bushnell–Reiner zeta functions of lattices over a basic
//! hereditary order.
//!
//! The order is the chain order of a complete DVR `Δ` with residue field
//! `F_q`: upper triangular modulo the uniformizer in `n × n` block form, with
//! one simple module class `z_j` per diagonal position. A lattice `M` is a
//! direct sum of columns `C_{c_1} ⊕ .. ⊕ C_{c_r}`. Its two-variable zeta
//! function `Z(M; z, w)` lives over the doubled alphabet `(z_1..z_n, w_1..w_n)`:
//! the `z`-exponent of a term records the composition factors of `M/X`, the
//! `w`-exponent those of `X/JX`.
//!
//! It is assembled as
//! `u Z(M;z,w) = sum_Y P(M_* Y; t) Q(Y; v) Z(M_1; v)`, summing over subspaces
//! `Y` of `M_1/πM_1 = F_q^r`, where `P` counts chains in a filtered space,
//! `Q` counts Hermite normal forms, and `t, u, v` are the monomials of
//! [`SubstitutionData`]. Dividing by `Z(M_1;v)` leaves the polynomial
//! `F(M;z,w)`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::{enumerate_chains, enumerate_subspaces, Field, FilteredSpace, Subspace, DEFAULT_BUDGET};
use crate::series::{rat_big, Alphabet, Monomial, TruncatedSeries};

/// JSON form: `{"q":2, "n":2, "columns":[1,2]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HereditarySpec {
    pub q: u64,
    pub n: usize,
    pub columns: Vec<usize>,
}

/// Multiplicity vector of the top `X/JX` of a submodule, indexed by simple class.
pub type TopClass = Vec<u32>;

/// The monomials `u`, `v` and `t_1..t_n` over the doubled alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionData {
    pub u: Monomial,
    pub v: Monomial,
    pub t: Vec<Monomial>,
}

/// A lattice `C_{c_1} ⊕ .. ⊕ C_{c_r}` over the hereditary order of chain length `n`.
#[derive(Debug)]
pub struct HereditaryModule {
    q: u64,
    n: usize,
    columns: Vec<usize>,
    field: Arc<Field>,
    base: Arc<Alphabet>,
    doubled: Arc<Alphabet>,
    budget: u128,
    brs: OnceLock<TruncatedSeries>,
}

impl HereditaryModule {
    pub fn new(q: u64, n: usize, columns: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("chain length n must be at least 1".into()));
        }
        if columns.is_empty() {
            return Err(Error::InvalidInput("a module needs at least one column".into()));
        }
        if let Some(c) = columns.iter().find(|&&c| c == 0 || c > n) {
            return Err(Error::InvalidInput(format!("column type {c} is outside 1..={n}")));
        }
        let field = Field::new(q)?;
        let base = Alphabet::uniform("z", q, n)?;
        let doubled = base.doubled()?;
        let mut columns = columns.to_vec();
        columns.sort_unstable();
        Ok(HereditaryModule { q, n, columns, field, base, doubled, budget: DEFAULT_BUDGET, brs: OnceLock::new() })
    }

    pub fn from_spec(spec: &HereditarySpec) -> Result<Self> {
        Self::new(spec.q, spec.n, &spec.columns)
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// The alphabet `z_1..z_n`.
    pub fn base_alphabet(&self) -> &Arc<Alphabet> {
        &self.base
    }

    /// The alphabet `z_1..z_n, w_1..w_n`.
    pub fn doubled_alphabet(&self) -> &Arc<Alphabet> {
        &self.doubled
    }

    /// `dim m_j = #{b : c_b >= j}` for `j = 1..n`.
    pub fn flag_dims(&self) -> Vec<usize> {
        (1..=self.n).map(|j| self.columns.iter().filter(|&&c| c >= j).count()).collect()
    }

    /// `ℓ(M_1/M_j) = #{b : c_b < j}` for `j = 1..n`.
    pub fn lengths(&self) -> Vec<u32> {
        (1..=self.n).map(|j| self.columns.iter().filter(|&&c| c < j).count() as u32).collect()
    }

    /// Composition factors of `M/JM`: one `S_{c_b}` per column.
    pub fn top(&self) -> TopClass {
        let mut top = vec![0; self.n];
        for &c in &self.columns {
            top[c - 1] += 1;
        }
        top
    }

    pub fn substitution_data(&self) -> SubstitutionData {
        let n = self.n;
        let mut u = vec![0; 2 * n];
        u[..n].copy_from_slice(&self.lengths());
        let mut v = vec![0; 2 * n];
        v[..n].iter_mut().for_each(|e| *e = 1);
        let t = (0..n)
            .map(|j| {
                let mut e = vec![0; 2 * n];
                e[n + j] = 1;
                e[j + 1..n].iter_mut().for_each(|x| *x = 1);
                Monomial::from_exponents(e)
            })
            .collect();
        SubstitutionData { u: Monomial::from_exponents(u), v: Monomial::from_exponents(v), t }
    }

    /// Coordinate subspace `m_j ⊆ F_q^r` of the columns of type at least `j` (1-based).
    pub fn flag_space(&self, j: usize) -> Subspace {
        let r = self.r();
        let rows = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, &c)| c >= j)
            .map(|(b, _)| {
                let mut e = vec![0; r];
                e[b] = 1;
                e
            })
            .collect();
        Subspace::span(&self.field, r, rows)
    }

    /// Dimension vector of the filtered space `M_*(Y_1)` for `Y_1 = Y + πM_1`:
    /// `d_j = dim(Y ∩ m_j) + (r - dim Y)`.
    pub fn filtered_dims(&self, y: &Subspace) -> Result<FilteredSpace> {
        let r = self.r();
        let dims = (1..=self.n)
            .map(|j| Ok(y.intersection(&self.field, &self.flag_space(j))?.dim() + (r - y.dim())))
            .collect::<Result<Vec<_>>>()?;
        FilteredSpace::new(dims)
    }

    /// Subspaces `Y ⊆ F_q^r` grouped by `(dim Y, filtered dims)`, with counts.
    pub fn y_profiles(&self) -> Result<BTreeMap<(usize, Vec<usize>), u64>> {
        let mut groups = BTreeMap::new();
        for y in enumerate_subspaces(&self.field, &Subspace::full(self.r()), None, self.budget)? {
            let dims = self.filtered_dims(&y)?.dims().to_vec();
            *groups.entry((y.dim(), dims)).or_insert(0u64) += 1;
        }
        Ok(groups)
    }

    /// The exact polynomial `F(M; z, w)`, computed once per module.
    fn brs_polynomial(&self) -> Result<&TruncatedSeries> {
        if let Some(f) = self.brs.get() {
            return Ok(f);
        }
        let f = self.assemble_brs()?;
        Ok(self.brs.get_or_init(|| f))
    }

    fn assemble_brs(&self) -> Result<TruncatedSeries> {
        let sd = self.substitution_data();
        let r = self.r() as u32;
        let n = self.n as u32;
        // deg P(t) <= r n and deg Q(v) <= r n, so this bound keeps S exact.
        let exact = 2 * r * n;
        let mut s = TruncatedSeries::zero(&self.doubled, exact);
        for ((m, dims), count) in self.y_profiles()? {
            let v = FilteredSpace::new(dims)?;
            let p = filtered_poly(&self.field, &v, &self.doubled, &sd.t, exact, self.budget)?;
            let q = hermite_q_series(&self.doubled, &sd.v, m as u32, r, self.q, exact);
            s = s.add(&p.mul(&q)?.scale(&rat_big(BigInt::from(count))))?;
        }
        let f = s.divide_by_monomial(&sd.u, "division of the assembled sum by u")?;
        for (mono, c) in f.terms() {
            if !c.is_integer() {
                return Err(Error::violation("BRS polynomial", mono.display(&self.doubled), "an integer", c));
            }
        }
        Ok(f)
    }

    /// `Z(M; z, w)` with every coefficient of `z`-degree at most `bound`. Each
    /// term has `w`-degree exactly `r`, so the series bound is `bound + r`.
    pub fn brz_two_variable(&self, bound: u32) -> Result<TruncatedSeries> {
        let r = self.r() as u32;
        let f = self.brs_polynomial()?.with_bound_exact(bound + r);
        let sd = self.substitution_data();
        let z = f.mul(&solomon_hey_factor(&self.doubled, &sd.v, r, self.q, bound + r)?)?;
        z.check_nonneg_integral("two-variable zeta")?;
        Ok(z)
    }

    /// `F(M; z, w)` with `Z(M; z, w) = Z(M_1; v) F(M; z, w)`. Fails unless the
    /// `z`-degree of `F` stays below `bound`, so that `F` is fully witnessed.
    pub fn brs_f(&self, bound: u32) -> Result<TruncatedSeries> {
        let r = self.r() as u32;
        let f = self.brs_polynomial()?;
        let n = self.n;
        let zdeg = f.terms().map(|(m, _)| m.exponents()[..n].iter().sum::<u32>()).max().unwrap_or(0);
        if zdeg >= bound.max(1) {
            return Err(Error::violation(
                "BRS factorization",
                format!("z-degree {zdeg}"),
                format!("a polynomial of z-degree below {bound}"),
                "did not stabilize",
            ));
        }
        let sd = self.substitution_data();
        let z = self.brz_two_variable(bound)?;
        let back = z.mul(&hermite_cauchy(&self.doubled, &sd.v, r, self.q, bound + r))?;
        if let Some((mono, expected, actual)) = f.with_bound_exact(bound + r).first_difference(&back) {
            return Err(Error::violation("BRS factorization", mono, expected, actual));
        }
        Ok(f.with_bound_exact(bound + r))
    }

    /// The partial zeta function: the coefficient of `w^ρ` in `Z(M; z, w)`,
    /// that is, the sum of `[M/X]` over submodules `X` with top `ρ`.
    pub fn partial_zeta(&self, top: &[u32], bound: u32) -> Result<TruncatedSeries> {
        if top.len() != self.n {
            return Err(Error::InvalidInput(format!("top class needs {} entries", self.n)));
        }
        let z = self.brz_two_variable(bound)?;
        z.slice_coefficient(&self.base, &Monomial::from_exponents(top.to_vec()))
            .map(|s| s.truncate(bound))
    }

    /// The coefficient of `w^ρ` in `F(M; z, w)`: the partial zeta function
    /// divided by `Z(M_1; v)`.
    pub fn brs_slice(&self, top: &[u32], bound: u32) -> Result<TruncatedSeries> {
        if top.len() != self.n {
            return Err(Error::InvalidInput(format!("top class needs {} entries", self.n)));
        }
        let f = self.brs_polynomial()?.with_bound_exact(bound + self.r() as u32);
        f.slice_coefficient(&self.base, &Monomial::from_exponents(top.to_vec()))
            .map(|s| s.truncate(bound))
    }

    /// `Z(M; z)`, every `w_j` set to 1.
    pub fn total_zeta(&self, bound: u32) -> Result<TruncatedSeries> {
        Ok(collapse_w(&self.brz_two_variable(bound)?, &self.base, bound))
    }

    /// The top classes carrying a nonzero partial zeta function.
    pub fn top_classes(&self) -> Result<Vec<TopClass>> {
        let n = self.n;
        let mut classes: Vec<TopClass> =
            self.brs_polynomial()?.terms().map(|(m, _)| m.exponents()[n..].to_vec()).collect();
        classes.sort();
        classes.dedup();
        Ok(classes)
    }
}

/// Sets each `w_j` to 1 in a series over the doubled alphabet.
pub fn collapse_w(s: &TruncatedSeries, base: &Arc<Alphabet>, bound: u32) -> TruncatedSeries {
    let n = base.len();
    let terms = s.terms().map(|(m, c)| (Monomial::from_exponents(m.exponents()[..n].to_vec()), c.clone()));
    TruncatedSeries::from_terms(base, bound, terms)
}

/// `P(V_*; t) = sum_W prod_j t_j^{dim W_j/W_{j+1}}` over chains in the filtered
/// space, with the `t_j` given as monomials of `alphabet`.
pub fn filtered_poly(
    field: &Field,
    v: &FilteredSpace,
    alphabet: &Arc<Alphabet>,
    t: &[Monomial],
    bound: u32,
    budget: u128,
) -> Result<TruncatedSeries> {
    if t.len() != v.dims().len() {
        return Err(Error::InvalidInput("need one t-variable per filtration step".into()));
    }
    let counts = chain_counts(field, v, budget)?;
    let terms = counts.into_iter().map(|(deg, c)| {
        let mono = deg
            .iter()
            .zip(t)
            .fold(Monomial::one(alphabet.len()), |acc, (&k, tj)| acc.mul(&tj.pow(k as u32)));
        (mono, rat_big(BigInt::from(c)))
    });
    Ok(TruncatedSeries::from_terms(alphabet, bound, terms))
}

type ChainKey = (usize, Vec<usize>);

fn chain_cache() -> &'static Mutex<BTreeMap<ChainKey, BTreeMap<Vec<usize>, u64>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<ChainKey, BTreeMap<Vec<usize>, u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Number of chains per degree vector. Depends only on `q` and the dimension vector.
fn chain_counts(field: &Field, v: &FilteredSpace, budget: u128) -> Result<BTreeMap<Vec<usize>, u64>> {
    let key = (field.q(), v.dims().to_vec());
    if let Some(hit) = chain_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let mut counts = BTreeMap::new();
    for chain in enumerate_chains(field, v, budget)? {
        *counts.entry(chain.degree).or_insert(0u64) += 1;
    }
    chain_cache().lock().unwrap().insert(key, counts.clone());
    Ok(counts)
}

fn qpow(q: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// Coefficients (constant first) of `Q(m; v) = v^{r-m} prod_{i=1}^m (1 - q^{i-1} v)`.
pub fn hermite_q(m: u32, r: u32, q: u64) -> Vec<BigInt> {
    assert!(m <= r, "hermite_q needs m <= r");
    let mut c = vec![BigInt::zero(); (r - m) as usize];
    c.push(BigInt::one());
    for i in 0..m {
        let a = qpow(q, i);
        let mut next = c.clone();
        next.push(BigInt::zero());
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] -= &a * ck;
        }
        c = next;
    }
    c
}

fn poly_in(alphabet: &Arc<Alphabet>, v: &Monomial, coeffs: Vec<BigInt>, bound: u32) -> TruncatedSeries {
    let terms = coeffs.into_iter().enumerate().map(|(k, c)| (v.pow(k as u32), rat_big(c)));
    TruncatedSeries::from_terms(alphabet, bound, terms)
}

fn hermite_q_series(alphabet: &Arc<Alphabet>, v: &Monomial, m: u32, r: u32, q: u64, bound: u32) -> TruncatedSeries {
    poly_in(alphabet, v, hermite_q(m, r, q), bound)
}

/// `prod_{j<r} (1 - q^j v)`, the inverse of [`solomon_hey_factor`].
fn hermite_cauchy(alphabet: &Arc<Alphabet>, v: &Monomial, r: u32, q: u64, bound: u32) -> TruncatedSeries {
    poly_in(alphabet, v, hermite_q(r, r, q), bound)
}

/// `prod_{j=m+1}^r v / (1 - q^{j-1} v)`: the generating function of Hermite
/// normal forms with the first `m` diagonal exponents zero.
pub fn hermite_orbit_sum(
    alphabet: &Arc<Alphabet>,
    v: &Monomial,
    m: u32,
    r: u32,
    q: u64,
    bound: u32,
) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(alphabet, bound);
    for j in m + 1..=r {
        let g = TruncatedSeries::geometric(alphabet, bound, &rat_big(qpow(q, j - 1)), v)?;
        acc = acc.mul(&g.shift(v))?;
    }
    Ok(acc)
}

/// `Z(M_1; v) = prod_{j<r} (1 - q^j v)^{-1}`.
pub fn solomon_hey_factor(alphabet: &Arc<Alphabet>, v: &Monomial, r: u32, q: u64, bound: u32) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(alphabet, bound);
    for j in 0..r {
        acc = acc.mul(&TruncatedSeries::geometric(alphabet, bound, &rat_big(qpow(q, j)), v)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use num_rational::BigRational;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn substitution_data_examples() {
        let m = HereditaryModule::new(2, 1, &[1]).unwrap();
        let sd = m.substitution_data();
        assert_eq!((sd.u, sd.v, sd.t), (mono(&[0, 0]), mono(&[1, 0]), vec![mono(&[0, 1])]));

        let m = HereditaryModule::new(2, 2, &[1, 2]).unwrap();
        let sd = m.substitution_data();
        assert_eq!(sd.u, mono(&[0, 1, 0, 0]));
        assert_eq!(sd.v, mono(&[1, 1, 0, 0]));
        assert_eq!(sd.t, vec![mono(&[0, 1, 1, 0]), mono(&[0, 0, 0, 1])]);

        let m = HereditaryModule::new(2, 2, &[2, 2]).unwrap();
        let sd = m.substitution_data();
        assert_eq!(sd.u, mono(&[0, 0, 0, 0]));
        assert_eq!(sd.t, vec![mono(&[0, 1, 1, 0]), mono(&[0, 0, 0, 1])]);
    }

    #[test]
    fn filtered_dims_examples() {
        let m = HereditaryModule::new(2, 2, &[1, 2]).unwrap();
        assert_eq!(m.filtered_dims(&Subspace::full(2)).unwrap().dims(), &[2, 1]);
        assert_eq!(m.filtered_dims(&Subspace::zero(2)).unwrap().dims(), &[2, 2]);
        let f = Field::new(2).unwrap();
        let e1 = Subspace::span(&f, 2, vec![vec![1, 0]]);
        assert_eq!(m.filtered_dims(&e1).unwrap().dims(), &[2, 1]);
    }

    fn t_poly(dims: Vec<usize>) -> TruncatedSeries {
        let f = Field::new(2).unwrap();
        let n = dims.len();
        let a = Alphabet::uniform("t", 2, n).unwrap();
        let t: Vec<Monomial> = (0..n).map(|j| Monomial::var(n, j)).collect();
        filtered_poly(&f, &FilteredSpace::new(dims).unwrap(), &a, &t, 10, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn filtered_poly_examples() {
        let p = t_poly(vec![3]);
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&[3]), rat(1));
        let p = t_poly(vec![2, 2]);
        assert_eq!((p.coeff(&[2, 0]), p.coeff(&[1, 1]), p.coeff(&[0, 2])), (rat(1), rat(3), rat(1)));
        assert_eq!(p.num_terms(), 3);
        let p = t_poly(vec![2, 1]);
        assert_eq!((p.coeff(&[2, 0]), p.coeff(&[1, 1])), (rat(1), rat(1)));
        assert_eq!(p.num_terms(), 2);
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hermite_q_examples() {
        assert_eq!(hermite_q(0, 3, 2), ints(&[0, 0, 0, 1]));
        assert_eq!(hermite_q(2, 2, 2), ints(&[1, -3, 2]));
        assert_eq!(hermite_q(1, 2, 2), ints(&[0, 1, -1]));
    }

    #[test]
    fn hermite_partition_identity() {
        for q in [2u64, 3, 4, 5] {
            for r in 0..=6u32 {
                let mut total = vec![BigInt::zero(); r as usize + 1];
                for m in 0..=r {
                    let g = crate::qcomb::gaussian_binomial(r as u64, m as i64, q);
                    for (k, c) in hermite_q(m, r, q).into_iter().enumerate() {
                        total[k] += &g * c;
                    }
                }
                let mut one = vec![BigInt::zero(); r as usize + 1];
                one[0] = BigInt::one();
                assert_eq!(total, one, "q={q} r={r}");
            }
        }
    }

    fn v_alphabet() -> (Arc<Alphabet>, Monomial) {
        (Alphabet::single("v", 2, 1).unwrap(), mono(&[1]))
    }

    fn coeffs(s: &TruncatedSeries) -> Vec<BigRational> {
        (0..=s.bound()).map(|k| s.coeff(&[k])).collect()
    }

    #[test]
    fn hermite_orbit_sum_examples() {
        let (a, v) = v_alphabet();
        assert_eq!(hermite_orbit_sum(&a, &v, 2, 2, 2, 4).unwrap(), TruncatedSeries::one(&a, 4));
        // v / (1 - q^0 v): the j = 1 factor has ratio 1.
        assert_eq!(coeffs(&hermite_orbit_sum(&a, &v, 0, 1, 2, 2).unwrap()), vec![rat(0), rat(1), rat(1)]);
        assert_eq!(
            coeffs(&hermite_orbit_sum(&a, &v, 1, 2, 2, 3).unwrap()),
            vec![rat(0), rat(1), rat(2), rat(4)]
        );
    }

    #[test]
    fn orbit_sum_is_q_times_solomon() {
        let (a, v) = v_alphabet();
        for q in [2u64, 3] {
            for r in 0..=4 {
                for m in 0..=r {
                    let lhs = hermite_orbit_sum(&a, &v, m, r, q, 10).unwrap();
                    let rhs = hermite_q_series(&a, &v, m, r, q, 10)
                        .mul(&solomon_hey_factor(&a, &v, r, q, 10).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn solomon_hey_examples() {
        let (a, v) = v_alphabet();
        assert_eq!(coeffs(&solomon_hey_factor(&a, &v, 1, 2, 3).unwrap()), vec![rat(1); 4]);
        assert_eq!(coeffs(&solomon_hey_factor(&a, &v, 2, 2, 2).unwrap()), vec![rat(1), rat(3), rat(7)]);
        assert_eq!(solomon_hey_factor(&a, &v, 0, 2, 3).unwrap(), TruncatedSeries::one(&a, 3));
    }

    #[test]
    fn rank_one_dvr() {
        let m = HereditaryModule::new(2, 1, &[1]).unwrap();
        let z = m.brz_two_variable(4).unwrap();
        let expect = TruncatedSeries::from_terms(m.doubled_alphabet(), 5, (0..=4).map(|k| (mono(&[k, 1]), rat(1))));
        assert_eq!(z, expect);
        let f = m.brs_f(4).unwrap();
        assert_eq!(f, TruncatedSeries::monomial(m.doubled_alphabet(), 5, mono(&[0, 1]), rat(1)));
        assert_eq!(m.partial_zeta(&[1], 4).unwrap().coeff(&[4]), rat(1));
    }

    #[test]
    fn rank_two_dvr() {
        let m = HereditaryModule::new(2, 1, &[1, 1]).unwrap();
        let z = m.brz_two_variable(3).unwrap();
        let expect: Vec<BigRational> = [1, 3, 7, 15].iter().map(|&c| rat(c)).collect();
        for (k, c) in expect.iter().enumerate() {
            assert_eq!(&z.coeff(&[k as u32, 2]), c);
        }
        assert_eq!(z.num_terms(), 4);
        assert_eq!(m.brs_f(3).unwrap(), TruncatedSeries::monomial(m.doubled_alphabet(), 5, mono(&[0, 2]), rat(1)));
    }

    #[test]
    fn dvr_degenerates_to_solomon_hey() {
        for q in [2u64, 3] {
            for r in 1..=3u32 {
                let m = HereditaryModule::new(q, 1, &vec![1; r as usize]).unwrap();
                let z = m.brz_two_variable(5).unwrap();
                let d = m.doubled_alphabet();
                let expect = solomon_hey_factor(d, &mono(&[1, 0]), r, q, 5 + r).unwrap().shift(&mono(&[0, r]));
                assert_eq!(z, expect);
            }
        }
    }

    #[test]
    fn two_column_slices() {
        let m = HereditaryModule::new(2, 2, &[1, 2]).unwrap();
        let d = m.doubled_alphabet().clone();
        let v = mono(&[1, 1, 0, 0]);
        let z = m.brz_two_variable(4).unwrap();
        let slice = z.slice_coefficient(m.base_alphabet(), &mono(&[1, 1])).unwrap();
        let one_plus_2v =
            TruncatedSeries::from_terms(&d, 6, vec![(mono(&[0, 0, 0, 0]), rat(1)), (v.clone(), rat(2))]);
        let expect = one_plus_2v.mul(&solomon_hey_factor(&d, &v, 2, 2, 6).unwrap()).unwrap();
        let expect = expect.slice_coefficient(m.base_alphabet(), &mono(&[0, 0])).unwrap().truncate(4);
        assert_eq!(slice.truncate(4), expect);

        let f = m.brs_f(4).unwrap().slice_coefficient(m.base_alphabet(), &mono(&[1, 1])).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coeff(&[0, 0]), rat(1));
        assert_eq!(f.coeff(&[1, 1]), rat(2));

        // (1 + 2v) / ((1 - v)(1 - 2v)) with v = z1 z2.
        let p = m.partial_zeta(&[1, 1], 4).unwrap();
        assert_eq!(p.coeff(&[0, 0]), rat(1));
        assert_eq!(p.coeff(&[1, 1]), rat(5));
        assert_eq!(p.coeff(&[2, 2]), rat(13));
    }

    #[test]
    fn top_of_module_has_constant_term_one() {
        for cols in [vec![1, 2], vec![1, 1, 2], vec![2, 3, 3], vec![1, 2, 3]] {
            let m = HereditaryModule::new(2, 3, &cols).unwrap();
            let p = m.partial_zeta(&m.top(), 3).unwrap();
            assert_eq!(p.constant_term(), rat(1));
        }
    }

    #[test]
    fn slices_sum_to_total() {
        let m = HereditaryModule::new(3, 2, &[1, 2, 2]).unwrap();
        let total = m.total_zeta(4).unwrap();
        let mut sum = TruncatedSeries::zero(m.base_alphabet(), 4);
        for rho in m.top_classes().unwrap() {
            assert_eq!(rho.iter().sum::<u32>(), 3);
            sum = sum.add(&m.partial_zeta(&rho, 4).unwrap()).unwrap();
        }
        assert_eq!(sum, total);
    }

    #[test]
    fn brs_f_requires_enough_degree() {
        let m = HereditaryModule::new(2, 2, &[1, 2]).unwrap();
        assert!(matches!(m.brs_f(1), Err(Error::FormulaViolation { .. })));
    }
}
