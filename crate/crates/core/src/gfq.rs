//! Linear algebra over small finite fields.
//!
//! Elements of `F_q` (`q = p^e <= 256`) are encoded as integers `0..q` whose
//! base-`p` digits are the coefficients of a polynomial modulo the field's
//! modulus. Subspaces are kept in reduced row-echelon form, so two subspaces
//! are equal exactly when their stored bases are equal.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qcomb::gaussian_binomial;

use num_traits::ToPrimitive;

/// Enumeration budget used when callers do not supply one.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

/// Arithmetic tables for `F_q`.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    e: u32,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Irreducible moduli (coefficients constant first, monic) for the prime
/// powers that the built-in table covers.
fn builtin_modulus(q: u64) -> Option<(u32, Vec<u32>)> {
    match q {
        4 => Some((2, vec![1, 1, 1])),
        8 => Some((2, vec![1, 1, 0, 1])),
        9 => Some((3, vec![1, 0, 1])),
        16 => Some((2, vec![1, 1, 0, 0, 1])),
        _ => None,
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub(crate) fn prime_power(q: u64) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

impl Field {
    /// The field with `q` elements: prime fields directly, a few small prime
    /// powers from a built-in table of moduli.
    pub fn new(q: u64) -> Result<Arc<Field>> {
        if q > 256 {
            return Err(Error::Field(format!("q={q} exceeds 256")));
        }
        if is_prime(q) {
            return Field::with_modulus(q as u32, &[0, 1]);
        }
        match (prime_power(q), builtin_modulus(q)) {
            (Some(_), Some((p, m))) => Field::with_modulus(p, &m),
            (Some(_), None) => Err(Error::Field(format!(
                "no built-in modulus for q={q}; supply an irreducible modulus"
            ))),
            (None, _) => Err(Error::Field(format!("q={q} is not a prime power"))),
        }
    }

    /// `F_p[x]/(modulus)`; `modulus` is monic with coefficients listed
    /// constant first. Fails unless the quotient is a field.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Arc<Field>> {
        if !is_prime(p as u64) {
            return Err(Error::Field(format!("characteristic {p} is not prime")));
        }
        let e = modulus.len().saturating_sub(1) as u32;
        if e == 0 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field("modulus must be monic of positive degree with digits below p".into()));
        }
        let q = (p as u64).pow(e);
        if q > 256 {
            return Err(Error::Field(format!("q={q} exceeds 256")));
        }
        let q = q as usize;
        let digits = |a: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut a = a as u32;
            for _ in 0..e {
                v.push(a % p);
                a /= p;
            }
            v
        };
        let encode = |d: &[u32]| -> u8 { d.iter().rev().fold(0u32, |acc, &c| acc * p + c) as u8 };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s);
                // Schoolbook product, then reduce by the monic modulus from the top.
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (e as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate() {
                            let idx = k - e as usize + i;
                            prod[idx] = (prod[idx] + p * p - c * m % p) % p;
                        }
                    }
                }
                mul[a * q + b] = encode(&prod[..e as usize]);
            }
        }
        let neg: Vec<u8> = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let mut inv = vec![0u8; q];
        for a in 1..q {
            match (1..q).find(|&b| mul[a * q + b] == 1) {
                Some(b) => inv[a] = b as u8,
                None => return Err(Error::Field(format!("modulus {modulus:?} is reducible over F_{p}"))),
            }
        }
        Ok(Arc::new(Field { p, e, q, add, mul, neg, inv }))
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    /// `y += c * x`, entrywise.
    pub fn axpy(&self, y: &mut [u8], c: u8, x: &[u8]) {
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(c, xi));
            }
        }
    }

    pub fn scale(&self, c: u8, x: &mut [u8]) {
        for xi in x.iter_mut() {
            *xi = self.mul(c, *xi);
        }
    }
}

/// Row-reduces `rows` in place, dropping zero rows; returns the pivot columns.
pub fn rref(field: &Field, rows: &mut Vec<Vec<u8>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = field.inv(rows[r][c]);
        field.scale(inv, &mut rows[r]);
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = field.neg(row[c]);
                field.axpy(row, f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A subspace of `F_q^n`, stored as its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: &Field, ambient: usize, mut rows: Vec<Vec<u8>>) -> Subspace {
        assert!(rows.iter().all(|r| r.len() == ambient), "vector length does not match ambient");
        let pivots = rref(field, &mut rows);
        Subspace { ambient, rows, pivots }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    /// `span(e_1, .., e_k)`.
    pub fn coordinate(ambient: usize, k: usize) -> Subspace {
        let rows = (0..k)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { ambient, rows, pivots: (0..k).collect() }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace::coordinate(ambient, ambient)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies
    /// in the subspace, and the map is linear with kernel the subspace.
    pub fn reduce(&self, field: &Field, v: &mut [u8]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[c] != 0 {
                let f = field.neg(v[c]);
                field.axpy(v, f, row);
            }
        }
    }

    pub fn contains(&self, field: &Field, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, field: &Field, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(field, v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::InvalidInput(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Subspace::span(field, self.ambient, rows))
    }

    /// Intersection by the Zassenhaus algorithm: reduce `[a | a]` stacked on
    /// `[b | 0]`; rows with zero left half span the intersection.
    pub fn intersection(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let mut rows: Vec<Vec<u8>> = self
            .rows
            .iter()
            .map(|a| a.iter().chain(a.iter()).copied().collect())
            .chain(other.rows.iter().map(|b| b.iter().copied().chain(std::iter::repeat(0).take(n)).collect()))
            .collect();
        if rows.is_empty() {
            return Ok(Subspace::zero(n));
        }
        rref(field, &mut rows);
        let meet = rows.into_iter().filter(|r| r[..n].iter().all(|&x| x == 0)).map(|r| r[n..].to_vec()).collect();
        Ok(Subspace::span(field, n, meet))
    }

    /// Image under a linear map.
    pub fn image(&self, field: &Field, map: &LinearMap) -> Subspace {
        let rows = self.rows.iter().map(|v| map.apply(field, v)).collect();
        Subspace::span(field, map.n_out, rows)
    }
}

/// Intersection, sum and the four dimensions of a pair of subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOps {
    pub intersection: Subspace,
    pub sum: Subspace,
    pub dims: (usize, usize, usize, usize),
}

pub fn lattice_ops(field: &Field, a: &Subspace, b: &Subspace) -> Result<LatticeOps> {
    let intersection = a.intersection(field, b)?;
    let sum = a.sum(field, b)?;
    let dims = (a.dim(), b.dim(), intersection.dim(), sum.dim());
    Ok(LatticeOps { intersection, sum, dims })
}

/// A linear map `F^n_in -> F^n_out` given by the images of the standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub n_in: usize,
    pub n_out: usize,
    pub images: Vec<Vec<u8>>,
}

impl LinearMap {
    pub fn zero(n_in: usize, n_out: usize) -> LinearMap {
        LinearMap { n_in, n_out, images: vec![vec![0; n_out]; n_in] }
    }

    pub fn apply(&self, field: &Field, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.n_out];
        for (&c, img) in v.iter().zip(&self.images) {
            field.axpy(&mut out, c, img);
        }
        out
    }

    /// `self` after `first`.
    pub fn compose(&self, field: &Field, first: &LinearMap) -> LinearMap {
        LinearMap {
            n_in: first.n_in,
            n_out: self.n_out,
            images: first.images.iter().map(|v| self.apply(field, v)).collect(),
        }
    }

    /// `{ v : self(v) in target }`.
    pub fn preimage(&self, field: &Field, target: &Subspace) -> Subspace {
        // Rows [reduce(self e_k) | e_k]; after elimination, rows whose left
        // half vanishes carry a basis of the kernel of v -> self(v) mod target.
        let n = self.n_in;
        let m = self.n_out;
        let mut rows: Vec<Vec<u8>> = self
            .images
            .iter()
            .enumerate()
            .map(|(k, img)| {
                let mut left = img.clone();
                target.reduce(field, &mut left);
                let mut row = left;
                row.extend((0..n).map(|i| (i == k) as u8));
                row
            })
            .collect();
        if rows.is_empty() {
            return Subspace::zero(n);
        }
        rref(field, &mut rows);
        let ker = rows.into_iter().filter(|r| r[..m].iter().all(|&x| x == 0)).map(|r| r[m..].to_vec()).collect();
        Subspace::span(field, n, ker)
    }
}

/// Total number of subspaces (of dimension `dim`, if given) of a `k`-dimensional space.
pub fn subspace_count(k: usize, dim: Option<usize>, q: usize) -> u128 {
    let count = |d: usize| gaussian_binomial(k as u64, d as i64, q as u64).to_u128().unwrap_or(u128::MAX);
    match dim {
        Some(d) => count(d),
        None => (0..=k).map(count).fold(0u128, u128::saturating_add),
    }
}

/// Every subspace of `ambient` (of dimension `dim`, if given), each once, in
/// canonical form.
pub fn enumerate_subspaces(
    field: &Field,
    ambient: &Subspace,
    dim: Option<usize>,
    budget: u128,
) -> Result<Vec<Subspace>> {
    let k = ambient.dim();
    let required = subspace_count(k, dim, field.q());
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let mut out = Vec::with_capacity(required as usize);
    let dims: Vec<usize> = match dim {
        Some(d) if d > k => Vec::new(),
        Some(d) => vec![d],
        None => (0..=k).collect(),
    };
    for d in dims {
        for pivots in combinations(k, d) {
            // Free entries of an echelon matrix with these pivots.
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &p)| ((p + 1)..k).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let mut values = vec![0u8; free.len()];
            loop {
                let coords: Vec<Vec<u8>> = (0..d)
                    .map(|i| {
                        let mut row = vec![0u8; k];
                        row[pivots[i]] = 1;
                        row
                    })
                    .collect();
                let mut coords = coords;
                for (&(i, c), &v) in free.iter().zip(&values) {
                    coords[i][c] = v;
                }
                let rows = coords
                    .iter()
                    .map(|c| {
                        let mut v = vec![0u8; ambient.ambient()];
                        for (&ci, b) in c.iter().zip(ambient.basis()) {
                            field.axpy(&mut v, ci, b);
                        }
                        v
                    })
                    .collect();
                out.push(Subspace::span(field, ambient.ambient(), rows));
                if !increment(&mut values, field.q() as u8) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Odometer step over `base`-ary digits; false once it wraps around.
fn increment(digits: &mut [u8], base: u8) -> bool {
    for d in digits.iter_mut() {
        if *d + 1 < base {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// All `d`-subsets of `0..k` in lexicographic order.
fn combinations(k: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < d - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, k, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d <= k {
        go(0, k, d, &mut Vec::new(), &mut out);
    }
    out
}

/// The model filtration `V_j = span(e_1, .., e_{d_j})` of `F_q^{d_1}` for a
/// weakly decreasing dimension vector `d_1 >= .. >= d_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FilteredSpace {
    dims: Vec<usize>,
}

impl FilteredSpace {
    pub fn new(dims: Vec<usize>) -> Result<FilteredSpace> {
        if dims.is_empty() {
            return Err(Error::InvalidInput("filtered space needs at least one step".into()));
        }
        if dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("dimension vector {dims:?} is not weakly decreasing")));
        }
        Ok(FilteredSpace { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn step(&self, j: usize) -> Subspace {
        Subspace::coordinate(self.dims[0], self.dims[j])
    }
}

/// A chain `W_1 = V_1 ⊇ W_2 ⊇ .. ⊇ W_n` with `W_j ⊆ V_j`, and its degree
/// vector `(dim W_j / W_{j+1})_j` where `W_{n+1} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub spaces: Vec<Subspace>,
    pub degree: Vec<usize>,
}

pub fn enumerate_chains(field: &Field, v: &FilteredSpace, budget: u128) -> Result<Vec<Chain>> {
    let n = v.dims.len();
    let mut out = Vec::new();
    let mut stack = vec![Subspace::full(v.dims[0])];
    extend_chain(field, v, n, &mut stack, &mut out, budget)?;
    Ok(out)
}

fn extend_chain(
    field: &Field,
    v: &FilteredSpace,
    n: usize,
    stack: &mut Vec<Subspace>,
    out: &mut Vec<Chain>,
    budget: u128,
) -> Result<()> {
    let j = stack.len();
    if j == n {
        let mut degree: Vec<usize> = stack.windows(2).map(|w| w[0].dim() - w[1].dim()).collect();
        degree.push(stack[n - 1].dim());
        out.push(Chain { spaces: stack.clone(), degree });
        if out.len() as u128 > budget {
            return Err(Error::Budget { required: out.len() as u128, budget });
        }
        return Ok(());
    }
    let room = stack[j - 1].intersection(field, &v.step(j))?;
    for w in enumerate_subspaces(field, &room, None, budget)? {
        stack.push(w);
        extend_chain(field, v, n, stack, out, budget)?;
        stack.pop();
    }
    Ok(())
}
