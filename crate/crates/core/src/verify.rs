//! Verification suites: each formula engine against an independent
//! computation (brute-force enumeration, a second formula, or an identity).
//!
//! A suite never stops at the first failure; every check is recorded with the
//! first mismatching `(monomial, expected, actual)` triple.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfq::Subspace;
use crate::hereditary::{hermite_orbit_sum, hermite_q, solomon_hey_factor, HereditaryModule, HereditarySpec};
use crate::hey::{hey_product, moebius_inverse_series, SemisimpleData, SemisimpleEntry};
use crate::oracle::{chain_profile, ChainData, FiniteModuleRep, LoewyProfile, ModelSpec, SubmoduleLattice};
use crate::prolif::{
    hom_slice_dirichlet, lifted_hey, lustig_coeffs, lustig_partition, lustig_product, rossmann_euler_product,
    rossmann_zeta_product, BaseKind, SliceBase,
};
use crate::qcomb::gaussian_binomial;
use crate::series::{Alphabet, Monomial, TruncatedSeries};

/// Suite names in criterion order.
pub const SUITES: [&str; 14] = [
    "hey-oracle",
    "moebius",
    "hereditary-oracle",
    "brs-polynomial",
    "q-partition",
    "lustig",
    "rossmann",
    "lifted-hey",
    "voll",
    "fiber",
    "skew-slice",
    "brs-prolif",
    "integrality",
    "hall",
];

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Seed for the randomized data sets.
    pub seed: u64,
    /// Largest Dirichlet index in the Rossmann suite.
    pub rossmann_max: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0x5eed, rossmann_max: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub monomial: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub mismatch: Option<Mismatch>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub criterion: usize,
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        write!(
            f,
            "criterion {:>2} {:<18} {} ({}/{} checks)",
            self.criterion,
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len() - failed,
            self.checks.len()
        )?;
        if let Some(c) = self.failures().next() {
            let m = c.mismatch.as_ref().expect("failed check");
            write!(f, "; first failure {}: at {} expected {} got {}", c.label, m.monomial, m.expected, m.actual)?;
        }
        Ok(())
    }
}

type Outcome = Result<Option<Mismatch>>;

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let mismatch = match f() {
            Ok(m) => m,
            Err(Error::FormulaViolation { context, monomial, expected, actual }) => {
                Some(Mismatch { monomial: format!("{context}: {monomial}"), expected, actual })
            }
            Err(e) => Some(Mismatch { monomial: "-".into(), expected: "success".into(), actual: e.to_string() }),
        };
        self.checks.push(Check { label: label.into(), mismatch });
    }
}

fn series_eq(expected: &TruncatedSeries, actual: &TruncatedSeries) -> Option<Mismatch> {
    expected.first_difference(actual).map(|(monomial, e, a)| Mismatch {
        monomial,
        expected: e.to_string(),
        actual: a.to_string(),
    })
}

fn seq_eq<T: PartialEq + fmt::Display>(label: &str, expected: &[T], actual: &[T]) -> Option<Mismatch> {
    if expected.len() != actual.len() {
        return Some(Mismatch {
            monomial: format!("{label} length"),
            expected: expected.len().to_string(),
            actual: actual.len().to_string(),
        });
    }
    expected.iter().zip(actual).enumerate().find(|(_, (e, a))| e != a).map(|(i, (e, a))| Mismatch {
        monomial: format!("{label}_{i}"),
        expected: e.to_string(),
        actual: a.to_string(),
    })
}

fn int_eq(label: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) -> Option<Mismatch> {
    let a = actual.to_string();
    (expected.to_string() != a).then(|| Mismatch { monomial: label.into(), expected: expected.to_string(), actual: a })
}

fn single_entry(q: u64, m: u32) -> SemisimpleData {
    SemisimpleData::new(vec![SemisimpleEntry { label: "z1".into(), q, r: 1, m }])
}

fn integral(label: &str, s: &TruncatedSeries) -> Option<Mismatch> {
    s.terms().find(|(_, c)| !c.is_integer() || c < &&num_rational::BigRational::zero()).map(|(m, c)| Mismatch {
        monomial: format!("{label}: {}", m.display(s.alphabet())),
        expected: "a nonnegative integer".into(),
        actual: c.to_string(),
    })
}

/// Runs a suite by name.
pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    let criterion = SUITES
        .iter()
        .position(|&s| s == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown suite {name}; known: {}", SUITES.join(", "))))?;
    let mut r = Recorder::new();
    match criterion + 1 {
        1 => hey_oracle(&mut r),
        2 => moebius(&mut r, opts.seed),
        3 => hereditary_oracle(&mut r),
        4 => brs_polynomial(&mut r),
        5 => q_partition(&mut r),
        6 => lustig(&mut r),
        7 => rossmann(&mut r, opts.rossmann_max),
        8 => lifted_hey_paths(&mut r),
        9 => voll(&mut r),
        10 => fiber(&mut r),
        11 => skew_slice(&mut r),
        12 => brs_prolif(&mut r),
        13 => integrality(&mut r),
        _ => hall(&mut r),
    }
    Ok(SuiteReport { criterion: criterion + 1, name: SUITES[criterion], checks: r.checks })
}

pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, opts).expect("known suite")).collect()
}

fn hey_oracle(r: &mut Recorder) {
    let bound = 4;
    for q in [2, 3] {
        for m in 1..=3 {
            r.check(format!("q={q} m={m}"), || {
                let rep = ModelSpec::Chain { q, c: bound + 1, rank: m as usize, parts: None, exact: false }.build()?;
                let oracle = rep.empirical_zeta(&rep.submodule_bfs(bound)?, None);
                let hey = hey_product(&single_entry(q, m), bound)?;
                Ok(series_eq(&oracle, &hey.with_bound_exact(bound)))
            });
        }
    }
}

fn moebius(r: &mut Recorder, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [2u64, 3, 4, 5, 7, 8, 9];
    for k in 0..20 {
        let len = rng.gen_range(1..=3);
        let entries: Vec<SemisimpleEntry> = (0..len)
            .map(|i| SemisimpleEntry {
                label: format!("z{}", i + 1),
                q: fields[rng.gen_range(0..fields.len())],
                r: rng.gen_range(1..=2),
                m: rng.gen_range(0..=4),
            })
            .collect();
        let data = SemisimpleData::new(entries);
        let desc: Vec<String> = data.entries.iter().map(|e| format!("({},{},{})", e.q, e.r, e.m)).collect();
        r.check(format!("set {k} {}", desc.join("")), || {
            let p = hey_product(&data, 8)?.mul(&moebius_inverse_series(&data, 8)?)?;
            Ok(series_eq(&TruncatedSeries::one(&data.alphabet()?, 8), &p))
        });
    }
}

/// Column multisets of size `1..=3` over types `1..=n`, for `n <= 3`.
fn hereditary_configs() -> Vec<(u64, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for q in [2, 3] {
        for n in 1..=3 {
            for r in 1..=3 {
                let mut cols = vec![1usize; r];
                loop {
                    out.push((q, n, cols.clone()));
                    // Next weakly increasing sequence.
                    let Some(i) = (0..r).rev().find(|&i| cols[i] < n) else { break };
                    let v = cols[i] + 1;
                    cols[i..].iter_mut().for_each(|c| *c = v);
                }
            }
        }
    }
    out
}

fn hereditary_oracle(r: &mut Recorder) {
    let bound = 3;
    for (q, n, cols) in hereditary_configs() {
        r.check(format!("q={q} n={n} columns={cols:?}"), || {
            let c = (bound as u32 + 1).div_ceil(n as u32);
            let rep = ModelSpec::Triangular { q, n, c, columns: cols.clone(), exact: false }.build()?;
            let oracle = rep.empirical_two_variable(&rep.submodule_bfs(bound)?, cols.len() as u32)?;
            let engine = HereditaryModule::new(q, n, &cols)?.brz_two_variable(bound)?;
            Ok(series_eq(&oracle, &engine))
        });
    }
}

fn brs_polynomial(r: &mut Recorder) {
    for (q, n, cols) in hereditary_configs() {
        r.check(format!("q={q} n={n} columns={cols:?}"), || {
            let module = HereditaryModule::new(q, n, &cols)?;
            let bound = (2 * cols.len() * n) as u32 + 1;
            let f = module.brs_f(bound)?;
            if let Some((m, c)) = f.terms().find(|(_, c)| !c.is_integer()) {
                return Ok(Some(Mismatch {
                    monomial: m.display(f.alphabet()),
                    expected: "an integer".into(),
                    actual: c.to_string(),
                }));
            }
            // Raising the bound must not change F: its z-degree has stabilized.
            let g = module.brs_f(bound + 2)?.truncate(f.bound());
            Ok(series_eq(&f, &g))
        });
    }
}

fn q_partition(r: &mut Recorder) {
    for q in [2u64, 3, 4, 5] {
        for rank in 0..=6u32 {
            r.check(format!("partition identity q={q} r={rank}"), || {
                let mut sum = vec![BigInt::zero(); rank as usize + 1];
                for m in 0..=rank {
                    let g = gaussian_binomial(rank as u64, m as i64, q);
                    for (k, c) in hermite_q(m, rank, q).into_iter().enumerate() {
                        sum[k] += &g * c;
                    }
                }
                let mut one = vec![BigInt::zero(); rank as usize + 1];
                one[0] = BigInt::one();
                Ok(seq_eq("v", &one, &sum))
            });
        }
    }
    let v = Alphabet::single("v", 2, 1).expect("alphabet");
    let var = Monomial::var(1, 0);
    for q in [2u64, 3, 4, 5] {
        for rank in 0..=6u32 {
            for m in 0..=rank {
                r.check(format!("orbit sum q={q} r={rank} m={m}"), || {
                    let lhs = hermite_orbit_sum(&v, &var, m, rank, q, 10)?;
                    let terms = hermite_q(m, rank, q).into_iter().enumerate().map(|(k, c)| (var.pow(k as u32), crate::series::rat_big(c)));
                    let rhs = TruncatedSeries::from_terms(&v, 10, terms).mul(&solomon_hey_factor(&v, &var, rank, q, 10)?)?;
                    Ok(series_eq(&lhs, &rhs))
                });
            }
        }
    }
}

fn lustig(r: &mut Recorder) {
    for q in [2, 3] {
        r.check(format!("product vs partitions q={q} i<=12"), || {
            Ok(seq_eq("a", &lustig_partition(q, 12), &lustig_product(q, 12)?))
        });
        r.check(format!("oracle q={q} i<=4"), || {
            let rep = ModelSpec::Local2d { q, c: 5, rank: 1, exact: false }.build()?;
            let counts: Vec<BigInt> = rep.submodule_bfs(4)?.counts_by_colength().into_iter().map(BigInt::from).collect();
            Ok(seq_eq("a", &lustig_coeffs(q, 4)?, &counts))
        });
    }
}

fn fmt_opt(x: Option<&BigInt>) -> String {
    x.map_or_else(|| "missing".into(), ToString::to_string)
}

fn rossmann(r: &mut Recorder, n_max: u64) {
    r.check(format!("zeta product vs Euler product n<={n_max}"), || {
        let a = rossmann_zeta_product(n_max);
        let b = rossmann_euler_product(n_max);
        Ok((1..=n_max).find_map(|n| int_eq(format!("a_{n}"), fmt_opt(a.get(&n)), fmt_opt(b.get(&n)))))
    });
    r.check("Lustig local factor at 2 equals the hom slice", || {
        let t = hom_slice_dirichlet(2, 1, 1, 1, 64)?;
        let l = lustig_partition(2, 6);
        Ok((0..=6).find_map(|i| int_eq(format!("a_{}", 1u64 << i), &l[i], &t[&(1u64 << i)])))
    });
}

fn lifted_hey_paths(r: &mut Recorder) {
    let bound = 6;
    for q in [2, 3] {
        for m in 0..=3 {
            r.check(format!("q={q} m={m}"), || {
                let base = SliceBase::new(BaseKind::Dvr { q, m }, None)?;
                let single = base.single_sliver(bound, false)?;
                let lifted = lifted_hey(&single_entry(q, m), &[0], bound)?;
                let prolif = base.proliferation_sum(bound)?;
                Ok(series_eq(&single, &lifted).or_else(|| series_eq(&single, &prolif)))
            });
        }
    }
}

fn voll(r: &mut Recorder) {
    let bound = 5;
    for q in [2, 3] {
        for m in 1..=3 {
            r.check(format!("q={q} m={m}"), || {
                let data = single_entry(q, m);
                let base = SliceBase::new(BaseKind::Semisimple(data.clone()), None)?;
                Ok(series_eq(&hey_product(&data, bound)?, &base.proliferation_sum(bound)?))
            });
        }
    }
}

/// Chains `t^{k_0} ⊆ .. ⊆ t^{k_{s-1}} ⊆ Δ̄` of the DVR with `sum k_j <= bound`
/// and stabilization index at most `max_index`.
fn dvr_chains(bound: u32, max_index: usize) -> Vec<ChainData> {
    let mut out = vec![ChainData::constant(vec![1])];
    fn go(ks: &mut Vec<u32>, bound: u32, max_index: usize, out: &mut Vec<ChainData>) {
        if !ks.is_empty() && *ks.last().expect("nonempty") >= 1 {
            let s = ks.len();
            let quotients = (0..s).map(|j| vec![ks[j] - ks.get(j + 1).copied().unwrap_or(0)]).collect();
            out.push(ChainData { tops: vec![vec![1]; s + 1], quotients });
        }
        if ks.len() == max_index {
            return;
        }
        let used: u32 = ks.iter().sum();
        let cap = ks.last().copied().unwrap_or(bound);
        for k in 1..=cap.min(bound - used) {
            ks.push(k);
            go(ks, bound, max_index, out);
            ks.pop();
        }
    }
    go(&mut Vec::new(), bound, max_index, &mut out);
    out
}

fn fiber(r: &mut Recorder) {
    let bound = 3;
    let setup = || -> Result<_> {
        let rep = ModelSpec::Local2d { q: 2, c: bound + 1, rank: 1, exact: false }.build()?;
        let lattice = rep.submodule_bfs(bound)?;
        let fibers = rep.fibers(&lattice)?;
        let base = SliceBase::new(BaseKind::Dvr { q: 2, m: 1 }, None)?;
        Ok((rep, fibers, base))
    };
    let (rep, fibers, base) = match setup() {
        Ok(s) => s,
        Err(e) => {
            r.check("oracle setup", || Err(e));
            return;
        }
    };
    let chains = dvr_chains(bound, 2);
    for y in &chains {
        r.check(format!("chain tops={:?} quotients={:?}", y.tops, y.quotients), || {
            let oracle = fibers.get(y).cloned().unwrap_or_else(|| TruncatedSeries::zero(rep.alphabet(), bound));
            Ok(series_eq(&oracle, &base.fundamental_fiber_product(y, bound)?))
        });
    }
    r.check("every oracle chain of index <= 2 is covered", || {
        let missing = fibers.keys().find(|y| y.stabilization_index() <= 2 && !chains.contains(y));
        Ok(missing.map(|y| Mismatch {
            monomial: format!("{y:?}"),
            expected: "an enumerated chain".into(),
            actual: "unlisted".into(),
        }))
    });
}

fn skew_slice(r: &mut Recorder) {
    let bound = 3;
    let spec = HereditarySpec { q: 2, n: 2, columns: vec![1, 2] };
    let prolif = || SliceBase::new(BaseKind::Hereditary(spec.clone()), None)?.proliferation_sum(bound);
    r.check("proliferation vs skew-polynomial oracle", || {
        let rep = ModelSpec::SkewPoly { q: 2, n: 2, c: bound + 1, c_pi: Some(2), columns: vec![1, 2], exact: false }.build()?;
        let oracle = rep.empirical_zeta(&rep.submodule_bfs(bound)?, None);
        Ok(series_eq(&oracle, &prolif()?))
    });
    r.check("proliferation vs lifted Hey over the radical slice", || {
        let data = SemisimpleData::new(vec![
            SemisimpleEntry { label: "z1".into(), q: 2, r: 1, m: 1 },
            SemisimpleEntry { label: "z2".into(), q: 2, r: 1, m: 1 },
        ]);
        Ok(series_eq(&lifted_hey(&data, &[1, 0], bound)?, &prolif()?))
    });
}

fn brs_prolif(r: &mut Recorder) {
    r.check("n=2 columns=[1,2] q=2 B=3", || {
        let base = SliceBase::new(BaseKind::Hereditary(HereditarySpec { q: 2, n: 2, columns: vec![1, 2] }), None)?;
        let (p, rem) = base.brs_factored_prolif(3)?;
        Ok(series_eq(&base.proliferation_sum(3)?, &p.mul(&rem)?))
    });
}

fn integrality(r: &mut Recorder) {
    for (q, n, cols) in hereditary_configs() {
        r.check(format!("hereditary q={q} n={n} columns={cols:?}"), || {
            let m = HereditaryModule::new(q, n, &cols)?;
            let z = m.brz_two_variable(3)?;
            let total = m.total_zeta(3)?;
            Ok(integral("two-variable", &z).or_else(|| integral("total", &total)))
        });
    }
    let sigmas: [(Vec<(u64, u32)>, Vec<usize>); 4] = [
        (vec![(2, 2), (2, 1)], vec![1, 0]),
        (vec![(3, 1), (3, 2)], vec![1, 0]),
        (vec![(2, 1), (2, 2), (2, 1)], vec![1, 2, 0]),
        (vec![(4, 2)], vec![0]),
    ];
    for (entries, sigma) in sigmas {
        r.check(format!("lifted Hey {entries:?} sigma={sigma:?}"), || {
            let data = SemisimpleData::new(
                entries.iter().enumerate().map(|(i, &(q, m))| SemisimpleEntry { label: format!("z{}", i + 1), q, r: 1, m }).collect(),
            );
            let hey = hey_product(&data, 5)?;
            Ok(integral("lifted Hey", &lifted_hey(&data, &sigma, 5)?).or_else(|| integral("Hey", &hey)))
        });
    }
    for (cols, sigma) in [(vec![1, 2], vec![1, 0]), (vec![1, 1], vec![0, 1]), (vec![2, 2], vec![1, 0])] {
        r.check(format!("proliferation columns={cols:?} sigma={sigma:?}"), || {
            let base = SliceBase::new(BaseKind::Hereditary(HereditarySpec { q: 2, n: 2, columns: cols.clone() }), Some(sigma.clone()))?;
            Ok(integral("proliferation", &base.proliferation_sum(4)?))
        });
    }
    r.check("semisimple proliferation with a 2-cycle", || {
        let data = SemisimpleData::new(vec![
            SemisimpleEntry { label: "z1".into(), q: 3, r: 1, m: 2 },
            SemisimpleEntry { label: "z2".into(), q: 3, r: 1, m: 1 },
        ]);
        let base = SliceBase::new(BaseKind::Semisimple(data), Some(vec![1, 0]))?;
        Ok(integral("proliferation", &base.proliferation_sum(4)?))
    });
    r.check("hom-slice Dirichlet tables", || {
        for (q, rr, m, s) in [(2, 1, 1, 1), (2, 2, 2, 3), (3, 1, 2, 2)] {
            let t = hom_slice_dirichlet(q, rr, m, s, 200)?;
            if let Some((n, c)) = t.iter().find(|(_, c)| c < &&BigInt::zero()) {
                return Ok(Some(Mismatch { monomial: format!("a_{n}"), expected: "nonnegative".into(), actual: c.to_string() }));
            }
        }
        Ok(None)
    });
}

/// Partition with the given radical layer dimensions (the conjugate).
fn profile_partition(p: &LoewyProfile) -> Vec<u32> {
    let dims: Vec<u32> = p.iter().map(|l| l[0]).collect();
    let parts = dims.first().copied().unwrap_or(0);
    (1..=parts).map(|i| dims.iter().filter(|&&d| d >= i).count() as u32).collect()
}

/// Every partition of `n`, largest part first.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

struct HallModel {
    rep: FiniteModuleRep,
    lattice: SubmoduleLattice,
}

fn hall_model(q: u64, parts: &[u32]) -> Result<HallModel> {
    let c = parts.iter().copied().max().unwrap_or(0).max(1);
    let rep = ModelSpec::Chain { q, c, rank: 1, parts: Some(parts.to_vec()), exact: true }.build()?;
    let lattice = rep.all_submodules()?;
    Ok(HallModel { rep, lattice })
}

fn hall(r: &mut Recorder) {
    let cases: [(u64, &[u32]); 4] = [(2, &[2, 1]), (2, &[2, 2]), (3, &[2, 1]), (2, &[3, 1])];
    for (q, parts) in cases {
        let model = match hall_model(q, parts) {
            Ok(m) => m,
            Err(e) => {
                r.check(format!("q={q} A={parts:?} setup"), || Err(e));
                continue;
            }
        };
        let size: u32 = parts.iter().sum();
        let mut sub_types: Vec<Vec<u32>> = (0..=size).flat_map(partitions).collect();
        sub_types.sort();
        for c in &sub_types {
            r.check(format!("q={q} A={parts:?} Z(A,C) C={c:?}"), || {
                let zero = Subspace::zero(model.rep.dim());
                let cp = chain_profile(c);
                let mut direct = TruncatedSeries::zero(model.rep.alphabet(), size);
                for x in &model.lattice.nodes {
                    if model.rep.loewy_profile(&x.space, &zero)? == cp {
                        let t = TruncatedSeries::monomial(model.rep.alphabet(), size, Monomial::from_exponents(x.class.clone()), crate::series::rat(1));
                        direct = direct.add(&t)?;
                    }
                }
                let mut hall_sum = TruncatedSeries::zero(model.rep.alphabet(), size);
                for k in 0..=size {
                    for b in partitions(k) {
                        let h = model.rep.hall_number(&model.lattice, &chain_profile(&b), &cp)?;
                        if h > 0 {
                            let t = TruncatedSeries::monomial(model.rep.alphabet(), size, Monomial::from_exponents(vec![k]), crate::series::rat(h as i64));
                            hall_sum = hall_sum.add(&t)?;
                        }
                    }
                }
                Ok(series_eq(&direct, &hall_sum))
            });
        }
        r.check(format!("q={q} A={parts:?} chain counts"), || hall_chains(q, &model));
    }
}

/// Chains `D_0 ⊊ .. ⊊ D_k = A` with `k <= 3`, grouped by the isomorphism types
/// of the `D_j` and of the steps, against products of Hall numbers computed on
/// separate models of each `D_{j+1}`.
fn hall_chains(q: u64, model: &HallModel) -> Outcome {
    let rep = &model.rep;
    let nodes = &model.lattice.nodes;
    let f = rep.field();
    let zero = Subspace::zero(rep.dim());
    let mut sub_type = Vec::with_capacity(nodes.len());
    for x in nodes {
        sub_type.push(profile_partition(&rep.loewy_profile(&x.space, &zero)?));
    }
    // below[i]: proper submodules of node i.
    let below: Vec<Vec<usize>> = (0..nodes.len())
        .map(|i| {
            (0..nodes.len())
                .filter(|&j| j != i && nodes[i].space.contains_subspace(f, &nodes[j].space))
                .collect()
        })
        .collect();
    let mut step_type: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    let mut direct: BTreeMap<Vec<Vec<u32>>, u64> = BTreeMap::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![0]];
    while let Some(chain) = stack.pop() {
        let top = *chain.last().expect("nonempty");
        if chain.len() > 1 {
            let mut key = Vec::new();
            for w in chain.windows(2) {
                let (upper, lower) = (w[0], w[1]);
                let t = match step_type.get(&(upper, lower)) {
                    Some(t) => t.clone(),
                    None => {
                        let t = profile_partition(&rep.loewy_profile(&nodes[upper].space, &nodes[lower].space)?);
                        step_type.insert((upper, lower), t.clone());
                        t
                    }
                };
                key.push(sub_type[upper].clone());
                key.push(t);
            }
            key.push(sub_type[top].clone());
            *direct.entry(key).or_insert(0) += 1;
        }
        if chain.len() <= 3 {
            for &j in &below[top] {
                stack.push([chain.clone(), vec![j]].concat());
            }
        }
    }
    if !direct.keys().any(|k| k.len() >= 7) {
        return Ok(Some(Mismatch { monomial: "chains".into(), expected: "three-step chains".into(), actual: "none".into() }));
    }
    let mut models: HashMap<Vec<u32>, HallModel> = HashMap::new();
    for (key, count) in &direct {
        let mut product: u64 = 1;
        for i in 0..key.len() / 2 {
            let (upper, quotient, lower) = (&key[2 * i], &key[2 * i + 1], &key[2 * i + 2]);
            if !models.contains_key(upper) {
                models.insert(upper.clone(), hall_model(q, upper)?);
            }
            let m = &models[upper];
            product *= m.rep.hall_number(&m.lattice, &chain_profile(quotient), &chain_profile(lower))?;
        }
        if product != *count {
            return Ok(Some(Mismatch { monomial: format!("chain types {key:?}"), expected: count.to_string(), actual: product.to_string() }));
        }
    }
    Ok(None)
}
