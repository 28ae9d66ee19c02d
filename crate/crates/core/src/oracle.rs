//! Brute-force ground truth over explicit finite models.
//!
//! A model is a finite-dimensional `F_q`-space carrying the action of a
//! finite set of ring generators. Submodules are enumerated top-down: the
//! maximal submodules of `X` are the pullbacks of hyperplanes of one isotypic
//! component of `X/JX`. Every simple module in the supported models is one
//! dimensional over `F_q`, so composition length equals `F_q`-codimension and
//! the class of a finite module is read off the dimensions of its idempotent
//! components.
//!
//! Models of infinite rings are quotients by a power of the radical-like
//! element (`t^c`, `m^c`, `π^c`); a depth guard checks that every submodule of
//! the requested colength contains the truncation inside its own radical, so
//! that both counts and top classes are exact.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::{enumerate_subspaces, Field, LinearMap, Subspace, DEFAULT_BUDGET};
use crate::series::{rat_big, Alphabet, Monomial, TruncatedSeries};

fn one() -> usize {
    1
}

/// JSON description of a finite model, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// `F_q[t]/(t^c)`, acting on a free module of rank `rank`, or on
    /// `⊕ F_q[t]/(t^{p})` over `p` in `parts`.
    Chain {
        q: u64,
        c: u32,
        #[serde(default = "one")]
        rank: usize,
        #[serde(default)]
        parts: Option<Vec<u32>>,
        #[serde(default)]
        exact: bool,
    },
    /// `F_q[u,t]/m^c` acting on a free module of rank `rank`; `I = (u)`.
    Local2d {
        q: u64,
        c: u32,
        #[serde(default = "one")]
        rank: usize,
        #[serde(default)]
        exact: bool,
    },
    /// The basic hereditary order of chain length `n` modulo `π^c`, acting on
    /// the sum of the given columns.
    Triangular {
        q: u64,
        n: usize,
        c: u32,
        columns: Vec<usize>,
        #[serde(default)]
        exact: bool,
    },
    /// The hereditary order extended by a central power series variable `t`,
    /// modulo `(t^c, π^{c_pi})`; `I = (t)`.
    SkewPoly {
        q: u64,
        n: usize,
        c: u32,
        #[serde(default)]
        c_pi: Option<u32>,
        columns: Vec<usize>,
        #[serde(default)]
        exact: bool,
    },
    /// `F_q^k` acting on `⊕ S_i^{dims_i}`.
    Semisimple { q: u64, dims: Vec<u32> },
}

/// A finite module given by generator actions on `F_q^dim`.
#[derive(Clone, Debug)]
pub struct FiniteModuleRep {
    field: Arc<Field>,
    dim: usize,
    generators: Vec<(String, LinearMap)>,
    radical: Vec<usize>,
    idempotents: Vec<LinearMap>,
    i_generator: Option<usize>,
    alphabet: Arc<Alphabet>,
    /// Largest colength for which enumeration is exact; `None` when unlimited.
    max_colength: Option<u32>,
    /// Whether radical layers classify finite modules up to isomorphism.
    loewy_classifies: bool,
}

/// One enumerated submodule.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub space: Subspace,
    pub radical: Subspace,
    /// Composition factors of `M/X`.
    pub class: Vec<u32>,
    /// Composition factors of `X/JX`.
    pub top: Vec<u32>,
}

impl Submodule {
    pub fn colength(&self) -> u32 {
        self.class.iter().sum()
    }
}

/// Submodules of colength at most `bound`, deduplicated by canonical basis.
#[derive(Clone, Debug)]
pub struct SubmoduleLattice {
    pub bound: u32,
    pub nodes: Vec<Submodule>,
    /// Node indices by colength.
    pub layers: Vec<Vec<usize>>,
    /// Maximal submodules of each node (indices), when they were expanded.
    pub children: Vec<Vec<usize>>,
}

impl SubmoduleLattice {
    pub fn index_of(&self, space: &Subspace) -> Option<usize> {
        self.layers.iter().flatten().copied().find(|&i| &self.nodes[i].space == space)
    }

    pub fn counts_by_colength(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }
}

/// Radical layer classes `J^k Q / J^{k+1} Q`, a complete invariant for the
/// chain and semisimple models.
pub type LoewyProfile = Vec<Vec<u32>>;

/// The image of `X ↦ (Y_j)`: top classes of `Y_0, .., Y_s = M/IM` and classes
/// of the steps `Y_{j+1}/Y_j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChainData {
    pub tops: Vec<Vec<u32>>,
    pub quotients: Vec<Vec<u32>>,
}

impl ChainData {
    /// The chain that is constantly `M/IM`.
    pub fn constant(top: Vec<u32>) -> Self {
        ChainData { tops: vec![top], quotients: Vec::new() }
    }

    /// Index from which the chain is constant.
    pub fn stabilization_index(&self) -> usize {
        self.quotients.len()
    }
}

struct Basis<K> {
    index: HashMap<K, usize>,
}

impl<K: std::hash::Hash + Eq + Clone> Basis<K> {
    fn new(keys: impl IntoIterator<Item = K>) -> Self {
        Basis { index: keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect() }
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    /// The linear map sending basis element `k` to `f(k)` (or to zero).
    fn map(&self, f: impl Fn(&K) -> Option<K>) -> LinearMap {
        let n = self.len();
        let mut m = LinearMap::zero(n, n);
        for (k, &i) in &self.index {
            if let Some(img) = f(k) {
                m.images[i][self.index[&img]] = 1;
            }
        }
        m
    }
}

fn hereditary_checks(n: usize, columns: &[usize]) -> Result<()> {
    if n == 0 || columns.is_empty() || columns.iter().any(|&c| c == 0 || c > n) {
        return Err(Error::InvalidInput(format!("columns {columns:?} must lie in 1..={n} and be nonempty")));
    }
    Ok(())
}

/// Row offset `ε(i, b)` of column type `c` at 0-based row `i`: the entry is
/// `Δ` for rows up to the column type and `πΔ` below.
fn eps(i: usize, c: usize) -> u32 {
    (i + 1 > c) as u32
}

/// Action of the standard generator on a basis vector `(row, column, π-power)`
/// of the hereditary lattice modulo `π^c`.
fn shift_rows(n: usize, cols: &[usize], c: u32, (i, b, a): (usize, usize, u32)) -> Option<(usize, usize, u32)> {
    let cb = cols[b];
    let (row, value) = if i >= 1 { (i - 1, eps(i, cb) + a) } else { (n - 1, 1 + a) };
    let a2 = value - eps(row, cb);
    (a2 < c).then_some((row, b, a2))
}

impl ModelSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("model description: {e}")))
    }

    pub fn build(&self) -> Result<FiniteModuleRep> {
        match self {
            ModelSpec::Chain { q, c, rank, parts, exact } => {
                let field = Field::new(*q)?;
                let lens: Vec<u32> = match parts {
                    Some(p) => p.clone(),
                    None => vec![*c; *rank],
                };
                if lens.iter().any(|&l| l > *c) {
                    return Err(Error::InvalidInput("chain parts may not exceed c".into()));
                }
                let basis = Basis::new(lens.iter().enumerate().flat_map(|(b, &l)| (0..l).map(move |a| (b, a))));
                let t = basis.map(|&(b, a)| (a + 1 < lens[b]).then_some((b, a + 1)));
                let dim = basis.len();
                let finite = *exact || parts.is_some();
                Ok(FiniteModuleRep {
                    alphabet: Alphabet::uniform("z", *q, 1)?,
                    dim,
                    generators: vec![("t".into(), t)],
                    radical: vec![0],
                    idempotents: vec![identity(dim)],
                    i_generator: Some(0),
                    max_colength: if finite { None } else { Some(c.saturating_sub(1)) },
                    loewy_classifies: true,
                    field,
                })
            }
            ModelSpec::Local2d { q, c, rank, exact } => {
                let field = Field::new(*q)?;
                let c = *c;
                let keys = (0..*rank).flat_map(|b| (0..c).flat_map(move |i| (0..c - i).map(move |k| (b, i, k))));
                let basis = Basis::new(keys);
                let u = basis.map(|&(b, i, k)| (i + 1 + k < c).then_some((b, i + 1, k)));
                let t = basis.map(|&(b, i, k)| (i + k + 1 < c).then_some((b, i, k + 1)));
                let dim = basis.len();
                Ok(FiniteModuleRep {
                    alphabet: Alphabet::uniform("z", *q, 1)?,
                    dim,
                    generators: vec![("u".into(), u), ("t".into(), t)],
                    radical: vec![0, 1],
                    idempotents: vec![identity(dim)],
                    i_generator: Some(0),
                    max_colength: if *exact { None } else { Some(c.saturating_sub(1)) },
                    loewy_classifies: false,
                    field,
                })
            }
            ModelSpec::Triangular { q, n, c, columns, exact } => {
                hereditary_checks(*n, columns)?;
                let field = Field::new(*q)?;
                let (n, c) = (*n, *c);
                let cols = columns.clone();
                let keys = (0..cols.len()).flat_map(|b| (0..n).flat_map(move |i| (0..c).map(move |a| (i, b, a))));
                let basis = Basis::new(keys);
                let mut generators: Vec<(String, LinearMap)> = (0..n)
                    .map(|r| (format!("e{}", r + 1), basis.map(|&(i, b, a)| (i == r).then_some((i, b, a)))))
                    .collect();
                generators.push(("g".into(), basis.map(|&k| shift_rows(n, &cols, c, k))));
                let idempotents = generators[..n].iter().map(|(_, m)| m.clone()).collect();
                Ok(FiniteModuleRep {
                    alphabet: Alphabet::uniform("z", *q, n)?,
                    dim: basis.len(),
                    radical: vec![n],
                    generators,
                    idempotents,
                    i_generator: None,
                    max_colength: if *exact { None } else { Some((n as u32 * c).saturating_sub(1)) },
                    loewy_classifies: false,
                    field,
                })
            }
            ModelSpec::SkewPoly { q, n, c, c_pi, columns, exact } => {
                hereditary_checks(*n, columns)?;
                let field = Field::new(*q)?;
                let (n, c) = (*n, *c);
                let cp = c_pi.unwrap_or(c);
                let cols = columns.clone();
                let keys = (0..cols.len()).flat_map(|b| {
                    (0..n).flat_map(move |i| (0..cp).flat_map(move |a| (0..c).map(move |s| (i, b, a, s))))
                });
                let basis = Basis::new(keys);
                let mut generators: Vec<(String, LinearMap)> = (0..n)
                    .map(|r| (format!("e{}", r + 1), basis.map(|&(i, b, a, s)| (i == r).then_some((i, b, a, s)))))
                    .collect();
                generators.push((
                    "g".into(),
                    basis.map(|&(i, b, a, s)| shift_rows(n, &cols, cp, (i, b, a)).map(|(i2, b2, a2)| (i2, b2, a2, s))),
                ));
                generators.push(("t".into(), basis.map(|&(i, b, a, s)| (s + 1 < c).then_some((i, b, a, s + 1)))));
                let idempotents = generators[..n].iter().map(|(_, m)| m.clone()).collect();
                let depth = c.min(n as u32 * cp);
                Ok(FiniteModuleRep {
                    alphabet: Alphabet::uniform("z", *q, n)?,
                    dim: basis.len(),
                    radical: vec![n, n + 1],
                    generators,
                    idempotents,
                    i_generator: Some(n + 1),
                    max_colength: if *exact { None } else { Some(depth.saturating_sub(1)) },
                    loewy_classifies: false,
                    field,
                })
            }
            ModelSpec::Semisimple { q, dims } => {
                let field = Field::new(*q)?;
                if dims.is_empty() {
                    return Err(Error::InvalidInput("semisimple model needs at least one class".into()));
                }
                let keys = dims.iter().enumerate().flat_map(|(i, &d)| (0..d).map(move |x| (i, x)));
                let basis = Basis::new(keys);
                let generators: Vec<(String, LinearMap)> = (0..dims.len())
                    .map(|r| (format!("e{}", r + 1), basis.map(|&(i, x)| (i == r).then_some((i, x)))))
                    .collect();
                let idempotents = generators.iter().map(|(_, m)| m.clone()).collect();
                Ok(FiniteModuleRep {
                    alphabet: Alphabet::uniform("z", *q, dims.len())?,
                    dim: basis.len(),
                    generators,
                    radical: Vec::new(),
                    idempotents,
                    i_generator: None,
                    max_colength: None,
                    loewy_classifies: true,
                    field,
                })
            }
        }
    }
}

fn identity(n: usize) -> LinearMap {
    let mut m = LinearMap::zero(n, n);
    for (i, row) in m.images.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

impl FiniteModuleRep {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The simple classes `z_1..z_k`.
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn generators(&self) -> &[(String, LinearMap)] {
        &self.generators
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.dim)
    }

    /// Checks that colength-`bound` enumeration is exact in this model.
    pub fn check_guard(&self, bound: u32) -> Result<()> {
        match self.max_colength {
            Some(max) if bound > max => Err(Error::Guard(format!(
                "the model is only exact up to colength {max}; colength {bound} needs a deeper truncation"
            ))),
            _ => Ok(()),
        }
    }

    /// The submodule generated by `rows`.
    pub fn closure(&self, rows: Vec<Vec<u8>>) -> Subspace {
        let f = &self.field;
        let mut s = Subspace::span(f, self.dim, rows);
        loop {
            let mut rows = s.basis().to_vec();
            for (_, g) in &self.generators {
                rows.extend(s.basis().iter().map(|v| g.apply(f, v)));
            }
            let next = Subspace::span(f, self.dim, rows);
            if next.dim() == s.dim() {
                return s;
            }
            s = next;
        }
    }

    /// `J X` for a submodule `X`.
    pub fn radical_of(&self, x: &Subspace) -> Subspace {
        let rows = self
            .radical
            .iter()
            .flat_map(|&g| x.basis().iter().map(move |v| self.generators[g].1.apply(&self.field, v)))
            .collect();
        self.closure(rows)
    }

    /// `dim e_i X` for each simple class `i`.
    pub fn class_dims(&self, x: &Subspace) -> Vec<u32> {
        self.idempotents.iter().map(|e| x.image(&self.field, e).dim() as u32).collect()
    }

    /// Class of `top / bottom` for submodules `bottom ⊆ top`.
    pub fn quotient_class(&self, top: &Subspace, bottom: &Subspace) -> Vec<u32> {
        let a = self.class_dims(top);
        let b = self.class_dims(bottom);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    fn node(&self, space: Subspace, full_dims: &[u32]) -> Submodule {
        let radical = self.radical_of(&space);
        let dims = self.class_dims(&space);
        let rdims = self.class_dims(&radical);
        Submodule {
            class: full_dims.iter().zip(&dims).map(|(a, b)| a - b).collect(),
            top: dims.iter().zip(&rdims).map(|(a, b)| a - b).collect(),
            space,
            radical,
        }
    }

    /// The maximal submodules of a submodule `X`.
    pub fn maximal_submodules(&self, x: &Submodule) -> Result<Vec<Subspace>> {
        let f = &self.field;
        let mut out = Vec::new();
        let components: Vec<Subspace> = self.idempotents.iter().map(|e| x.space.image(f, e)).collect();
        for (i, e) in self.idempotents.iter().enumerate() {
            if x.top[i] == 0 {
                continue;
            }
            let lower = x.radical.image(f, e);
            // A complement of e_i JX inside e_i X.
            let mut complement = Vec::new();
            let mut acc = lower.clone();
            for v in components[i].basis() {
                if !acc.contains(f, v) {
                    complement.push(v.clone());
                    acc = Subspace::span(f, self.dim, acc.basis().iter().cloned().chain([v.clone()]).collect());
                }
            }
            let complement = Subspace::span(f, self.dim, complement);
            let mut fixed: Vec<Vec<u8>> = x.radical.basis().to_vec();
            for (j, c) in components.iter().enumerate() {
                if j != i {
                    fixed.extend(c.basis().iter().cloned());
                }
            }
            for h in enumerate_subspaces(f, &complement, Some(complement.dim() - 1), DEFAULT_BUDGET)? {
                let rows = fixed.iter().cloned().chain(h.basis().iter().cloned()).collect();
                out.push(Subspace::span(f, self.dim, rows));
            }
        }
        Ok(out)
    }

    /// Every submodule of colength at most `bound`, each exactly once.
    pub fn submodule_bfs(&self, bound: u32) -> Result<SubmoduleLattice> {
        self.check_guard(bound)?;
        let full_dims = self.class_dims(&self.full());
        let root = self.node(self.full(), &full_dims);
        let mut nodes = vec![root];
        let mut layers = vec![vec![0usize]];
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        for k in 0..bound as usize {
            let mut seen: HashMap<Subspace, usize> = HashMap::new();
            let mut next = Vec::new();
            for &i in &layers[k] {
                let maxes = self.maximal_submodules(&nodes[i])?;
                let mut kids = Vec::with_capacity(maxes.len());
                for s in maxes {
                    let idx = match seen.get(&s) {
                        Some(&idx) => idx,
                        None => {
                            let idx = nodes.len();
                            nodes.push(self.node(s.clone(), &full_dims));
                            children.push(Vec::new());
                            seen.insert(s, idx);
                            next.push(idx);
                            idx
                        }
                    };
                    kids.push(idx);
                }
                children[i] = kids;
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        Ok(SubmoduleLattice { bound, nodes, layers, children })
    }

    /// Every submodule of a model with no truncation, regardless of colength.
    pub fn all_submodules(&self) -> Result<SubmoduleLattice> {
        if self.max_colength.is_some() {
            return Err(Error::Guard("the full lattice is only available for finite models".into()));
        }
        self.submodule_bfs(self.dim as u32)
    }

    /// `sum [M/X]` over the lattice, optionally only over `X` with the given top.
    pub fn empirical_zeta(&self, lattice: &SubmoduleLattice, partial: Option<&[u32]>) -> TruncatedSeries {
        let terms = lattice
            .nodes
            .iter()
            .filter(|x| partial.map_or(true, |p| x.top == p))
            .map(|x| (Monomial::from_exponents(x.class.clone()), rat_big(BigInt::from(1))));
        TruncatedSeries::from_terms(&self.alphabet, lattice.bound, terms)
    }

    /// `sum z^{[M/X]} w^{[X/JX]}` over the doubled alphabet; the bound is the
    /// lattice bound plus `w_degree`.
    pub fn empirical_two_variable(&self, lattice: &SubmoduleLattice, w_degree: u32) -> Result<TruncatedSeries> {
        let doubled = self.alphabet.doubled()?;
        let terms = lattice.nodes.iter().map(|x| {
            let e: Vec<u32> = x.class.iter().chain(&x.top).copied().collect();
            (Monomial::from_exponents(e), rat_big(BigInt::from(1)))
        });
        Ok(TruncatedSeries::from_terms(&doubled, lattice.bound + w_degree, terms))
    }

    /// Radical layer classes of `top / bottom`.
    pub fn loewy_profile(&self, top: &Subspace, bottom: &Subspace) -> Result<LoewyProfile> {
        let f = &self.field;
        let mut layers = Vec::new();
        let mut cur = top.clone();
        loop {
            let lower_part = self.radical_of(&cur);
            let with = cur.sum(f, bottom)?;
            let next = lower_part.sum(f, bottom)?;
            let class = self.quotient_class(&with, &next);
            if class.iter().all(|&c| c == 0) {
                break;
            }
            layers.push(class);
            cur = lower_part;
        }
        Ok(layers)
    }

    /// `F^A_{BC}`: submodules `D` of this (finite) module with `D ≅ C` and
    /// `A/D ≅ B`, classes given by radical layers.
    pub fn hall_number(&self, lattice: &SubmoduleLattice, quotient: &LoewyProfile, sub: &LoewyProfile) -> Result<u64> {
        if !self.loewy_classifies {
            return Err(Error::Unsupported("Hall numbers need a model whose radical layers classify modules".into()));
        }
        let zero = Subspace::zero(self.dim);
        let full = self.full();
        let mut count = 0;
        for x in &lattice.nodes {
            if x.colength() as usize != quotient.iter().flatten().sum::<u32>() as usize {
                continue;
            }
            if &self.loewy_profile(&x.space, &zero)? == sub && &self.loewy_profile(&full, &x.space)? == quotient {
                count += 1;
            }
        }
        Ok(count)
    }

    fn i_power(&self, j: usize) -> Result<LinearMap> {
        let g = self.i_generator.ok_or_else(|| Error::Unsupported("the model has no principal ideal I".into()))?;
        let a = &self.generators[g].1;
        let mut p = identity(self.dim);
        for _ in 0..j {
            p = a.compose(&self.field, &p);
        }
        Ok(p)
    }

    /// `IM` for the model's principal ideal `I`.
    pub fn i_module(&self) -> Result<Subspace> {
        let a = self.i_power(1)?;
        Ok(self.closure(self.full().image(&self.field, &a).basis().to_vec()))
    }

    /// The chain `Y_j = ((M ∩ I^{-j}X) + IM)/IM` of a submodule, as class data.
    pub fn fiber_signature(&self, x: &Subspace) -> Result<ChainData> {
        let f = &self.field;
        let im = self.i_module()?;
        let full = self.full();
        let mut tops = Vec::new();
        let mut spaces: Vec<Subspace> = Vec::new();
        for j in 0..=self.dim {
            let pre = self.i_power(j)?.preimage(f, x);
            let y = pre.sum(f, &im)?;
            let jy = self.radical_of(&pre).sum(f, &im)?;
            tops.push(self.quotient_class(&y, &jy));
            let done = y == full;
            spaces.push(y);
            if done {
                let quotients = spaces.windows(2).map(|w| self.quotient_class(&w[1], &w[0])).collect();
                return Ok(ChainData { tops, quotients });
            }
        }
        Err(Error::InvalidInput("chain did not stabilize".into()))
    }

    /// Submodules of colength at most the lattice bound whose chain is `y`.
    pub fn fiber_enumerate<'a>(&self, lattice: &'a SubmoduleLattice, y: &ChainData) -> Result<Vec<&'a Submodule>> {
        let mut out = Vec::new();
        for x in &lattice.nodes {
            if &self.fiber_signature(&x.space)? == y {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Every chain in the lattice with its fiber sum `sum [M/X]`.
    pub fn fibers(&self, lattice: &SubmoduleLattice) -> Result<BTreeMap<ChainData, TruncatedSeries>> {
        let mut out: BTreeMap<ChainData, TruncatedSeries> = BTreeMap::new();
        for x in &lattice.nodes {
            let sig = self.fiber_signature(&x.space)?;
            let term = TruncatedSeries::monomial(
                &self.alphabet,
                lattice.bound,
                Monomial::from_exponents(x.class.clone()),
                rat_big(BigInt::from(1)),
            );
            let slot = out.entry(sig).or_insert_with(|| TruncatedSeries::zero(&self.alphabet, lattice.bound));
            *slot = slot.add(&term)?;
        }
        Ok(out)
    }
}

/// Radical layers of `⊕ F_q[t]/(t^{p})` over parts `p`: layer `k` has one
/// dimension per part longer than `k`.
pub fn chain_profile(parts: &[u32]) -> LoewyProfile {
    let depth = parts.iter().copied().max().unwrap_or(0);
    (0..depth).map(|k| vec![parts.iter().filter(|&&p| p > k).count() as u32]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn chain(q: u64, c: u32, rank: usize) -> FiniteModuleRep {
        ModelSpec::Chain { q, c, rank, parts: None, exact: false }.build().unwrap()
    }

    #[test]
    fn maximal_submodule_examples() {
        let s = ModelSpec::Semisimple { q: 2, dims: vec![1] }.build().unwrap();
        let lat = s.submodule_bfs(1).unwrap();
        assert_eq!(s.maximal_submodules(&lat.nodes[0]).unwrap(), vec![Subspace::zero(1)]);

        let free = ModelSpec::Chain { q: 2, c: 2, rank: 2, parts: None, exact: true }.build().unwrap();
        let lat = free.submodule_bfs(0).unwrap();
        assert_eq!(free.maximal_submodules(&lat.nodes[0]).unwrap().len(), 3);

        let two = ModelSpec::Semisimple { q: 2, dims: vec![1, 1] }.build().unwrap();
        let lat = two.submodule_bfs(0).unwrap();
        assert_eq!(two.maximal_submodules(&lat.nodes[0]).unwrap().len(), 2);
    }

    #[test]
    fn bfs_counts() {
        let m = chain(2, 4, 1);
        assert_eq!(m.submodule_bfs(0).unwrap().counts_by_colength(), vec![1]);
        let l = ModelSpec::Local2d { q: 2, c: 3, rank: 1, exact: false }.build().unwrap();
        assert_eq!(l.submodule_bfs(2).unwrap().counts_by_colength(), vec![1, 1, 3]);
        assert_eq!(chain(2, 4, 2).submodule_bfs(2).unwrap().counts_by_colength(), vec![1, 3, 7]);
    }

    #[test]
    fn guard_is_enforced() {
        assert!(matches!(chain(2, 3, 1).submodule_bfs(3), Err(Error::Guard(_))));
        let t = ModelSpec::Triangular { q: 2, n: 2, c: 2, columns: vec![1, 2], exact: false }.build().unwrap();
        assert!(t.submodule_bfs(3).is_ok());
        assert!(matches!(t.submodule_bfs(4), Err(Error::Guard(_))));
    }

    #[test]
    fn composition_class_examples() {
        let l = ModelSpec::Local2d { q: 2, c: 4, rank: 1, exact: false }.build().unwrap();
        let lat = l.submodule_bfs(2).unwrap();
        assert_eq!(lat.nodes[0].class, vec![0]);
        assert_eq!(lat.nodes[lat.layers[1][0]].class, vec![1]);
        // The ideal (u, t^2); basis vector 0 is the unit monomial.
        let f = l.field().clone();
        let gens = l.generators();
        let unit = gens[0].1.images[0].clone();
        let t2 = gens[1].1.apply(&f, &gens[1].1.images[0]);
        let ideal = l.closure(vec![unit, t2]);
        let idx = lat.index_of(&ideal).expect("(u, t^2) is enumerated");
        assert_eq!(lat.nodes[idx].class, vec![2]);
    }

    #[test]
    fn empirical_zeta_examples() {
        let s = ModelSpec::Semisimple { q: 2, dims: vec![2] }.build().unwrap();
        let z = s.empirical_zeta(&s.submodule_bfs(2).unwrap(), None);
        assert_eq!((z.coeff(&[0]), z.coeff(&[1]), z.coeff(&[2])), (rat(1), rat(3), rat(1)));

        let t = ModelSpec::Triangular { q: 2, n: 2, c: 2, columns: vec![1, 2], exact: false }.build().unwrap();
        let p = t.empirical_zeta(&t.submodule_bfs(2).unwrap(), Some(&[1, 1]));
        assert_eq!(p.coeff(&[0, 0]), rat(1));
        assert_eq!(p.coeff(&[1, 1]), rat(5));

        let z = chain(2, 4, 1).empirical_zeta(&chain(2, 4, 1).submodule_bfs(3).unwrap(), None);
        assert_eq!(z, TruncatedSeries::geometric(z.alphabet(), 3, &rat(1), &Monomial::var(1, 0)).unwrap());
    }

    #[test]
    fn bfs_is_deterministic_and_closed_under_meets() {
        let m = ModelSpec::Local2d { q: 2, c: 5, rank: 1, exact: false }.build().unwrap();
        let a = m.submodule_bfs(4).unwrap();
        let b = m.submodule_bfs(4).unwrap();
        let sa: Vec<_> = a.nodes.iter().map(|x| x.space.clone()).collect();
        let sb: Vec<_> = b.nodes.iter().map(|x| x.space.clone()).collect();
        assert_eq!(sa, sb);
        let f = m.field();
        for x in &a.nodes {
            for y in &a.nodes {
                if x.colength() + y.colength() <= 4 {
                    let meet = x.space.intersection(f, &y.space).unwrap();
                    assert!(a.index_of(&meet).is_some());
                }
            }
        }
    }

    #[test]
    fn hall_number_examples() {
        let s = ModelSpec::Semisimple { q: 2, dims: vec![2] }.build().unwrap();
        let lat = s.all_submodules().unwrap();
        assert_eq!(s.hall_number(&lat, &vec![], &vec![vec![2]]).unwrap(), 1);
        assert_eq!(s.hall_number(&lat, &vec![vec![1]], &vec![vec![1]]).unwrap(), 3);

        let free = ModelSpec::Chain { q: 2, c: 2, rank: 2, parts: None, exact: true }.build().unwrap();
        let lat = free.all_submodules().unwrap();
        let n = free.hall_number(&lat, &chain_profile(&[1]), &chain_profile(&[2, 1])).unwrap();
        assert_eq!(n, 3);
    }

    #[test]
    fn fiber_examples() {
        let m = ModelSpec::Local2d { q: 2, c: 4, rank: 1, exact: false }.build().unwrap();
        let lat = m.submodule_bfs(3).unwrap();
        let constant = ChainData::constant(vec![1]);
        let fib = m.fiber_enumerate(&lat, &constant).unwrap();
        assert_eq!(fib.len(), 1);
        assert_eq!(fib[0].colength(), 0);

        // Y_0 = tΔ̄ ⊆ Y_1 = Δ̄.
        let y = ChainData { tops: vec![vec![1], vec![1]], quotients: vec![vec![1]] };
        let fib = m.fiber_enumerate(&lat, &y).unwrap();
        assert_eq!(fib.len(), 1);
        assert_eq!(fib[0].class, vec![1]);

        // Y_0 = t²Δ̄ ⊆ Y_1 = Δ̄.
        let y = ChainData { tops: vec![vec![1], vec![1]], quotients: vec![vec![2]] };
        let fib = m.fiber_enumerate(&lat, &y).unwrap();
        assert_eq!(fib.len(), 1);
        assert_eq!(fib[0].class, vec![2]);
    }

    #[test]
    fn fibers_partition_the_lattice() {
        let m = ModelSpec::Local2d { q: 2, c: 4, rank: 1, exact: false }.build().unwrap();
        let lat = m.submodule_bfs(3).unwrap();
        let total = m.empirical_zeta(&lat, None);
        let mut sum = TruncatedSeries::zero(m.alphabet(), 3);
        for s in m.fibers(&lat).unwrap().values() {
            sum = sum.add(s).unwrap();
        }
        assert_eq!(sum, total);
    }

    #[test]
    fn model_cardinalities() {
        let cases = [
            (ModelSpec::Chain { q: 3, c: 4, rank: 2, parts: None, exact: false }, 8),
            (ModelSpec::Local2d { q: 2, c: 3, rank: 2, exact: false }, 12),
            (ModelSpec::Triangular { q: 2, n: 3, c: 2, columns: vec![1, 3], exact: false }, 12),
            (ModelSpec::SkewPoly { q: 2, n: 2, c: 3, c_pi: Some(2), columns: vec![1, 2], exact: false }, 24),
        ];
        for (spec, dim) in cases {
            assert_eq!(spec.build().unwrap().dim(), dim);
        }
    }

    #[test]
    fn generators_commute_where_the_ring_is_commutative() {
        let m = ModelSpec::Local2d { q: 3, c: 4, rank: 1, exact: false }.build().unwrap();
        let f = m.field();
        let (u, t) = (&m.generators()[0].1, &m.generators()[1].1);
        assert_eq!(u.compose(f, t), t.compose(f, u));
        let s = ModelSpec::SkewPoly { q: 2, n: 2, c: 3, c_pi: None, columns: vec![1, 2], exact: false }.build().unwrap();
        let f = s.field();
        let gens = s.generators();
        let t = &gens[3].1;
        for (_, g) in &gens[..3] {
            assert_eq!(g.compose(f, t), t.compose(f, g));
        }
    }

    #[test]
    fn standard_generator_is_normal() {
        // g e_i = e_{i-1} g (indices mod n): g carries row i to row i-1.
        let m = ModelSpec::Triangular { q: 2, n: 3, c: 2, columns: vec![1, 2, 3], exact: false }.build().unwrap();
        let f = m.field();
        let gens = m.generators();
        let g = &gens[3].1;
        for i in 0..3 {
            let e_i = &gens[i].1;
            let e_prev = &gens[(i + 2) % 3].1;
            assert_eq!(g.compose(f, e_i), e_prev.compose(f, g));
        }
        // g^n = π: the n-th power is injective modulo the deepest layer.
        let g3 = g.compose(f, &g.compose(f, g));
        let kernel = g3.preimage(f, &Subspace::zero(m.dim()));
        assert_eq!(kernel.dim(), 3 * 3);
    }

    #[test]
    fn triangular_model_matches_the_hereditary_engine() {
        let t = ModelSpec::Triangular { q: 2, n: 2, c: 2, columns: vec![1, 2], exact: false }.build().unwrap();
        let oracle = t.empirical_two_variable(&t.submodule_bfs(3).unwrap(), 2).unwrap();
        let engine = crate::hereditary::HereditaryModule::new(2, 2, &[1, 2]).unwrap().brz_two_variable(3).unwrap();
        assert_eq!(oracle.first_difference(&engine), None);
    }

    #[test]
    fn rank_two_plane_counts() {
        let m = ModelSpec::Local2d { q: 2, c: 3, rank: 2, exact: false }.build().unwrap();
        let z = m.empirical_zeta(&m.submodule_bfs(2).unwrap(), None);
        assert_eq!((z.coeff(&[1]), z.coeff(&[2])), (rat(3), rat(19)));
    }

    #[test]
    fn model_json() {
        let spec = ModelSpec::from_json(r#"{"kind":"local2d","q":2,"c":4}"#).unwrap();
        assert_eq!(spec, ModelSpec::Local2d { q: 2, c: 4, rank: 1, exact: false });
        assert!(ModelSpec::from_json(r#"{"kind":"nope"}"#).is_err());
    }
}
