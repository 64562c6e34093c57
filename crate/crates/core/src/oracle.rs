//! Simulated oracles for the four capabilities the deciders consume.
//!
//! Every oracle here is built on exact counting, so it honours its contract
//! by construction; the deciders only ever see its input/output behaviour.
//! Each oracle is deterministic: the same formula always gets the same
//! answer from the same instance, and two instances built with the same
//! style and seed answer identically when queried in the same order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::count::{brute_force_sat_with_limit, count_models, DEFAULT_BRUTE_LIMIT};
use crate::error::OracleError;
use crate::formula::Formula;

/// Image used for "not a tally string". Any string containing a `1` works.
pub const NON_TALLY_TOKEN: &str = "1";

pub fn is_tally(s: &str) -> bool {
    s.bytes().all(|b| b == b'0')
}

/// Two-argument choice function for SAT.
pub trait Selector {
    /// Returns one of its two arguments, and a satisfiable one whenever
    /// either argument is satisfiable.
    fn select<'a>(&self, a: &'a Formula, b: &'a Formula) -> Result<&'a Formula, OracleError>;
    fn calls(&self) -> u64;
}

/// Many-one reduction from SAT to a tally set.
pub trait TallyReduction {
    fn reduce(&self, f: &Formula) -> Result<String, OracleError>;
    fn calls(&self) -> u64;
}

/// Many-one reduction from unsatisfiability to a sparse set, with the
/// census bound `q` of the set and the output-length bound `r` of the map.
pub trait SparseCoReduction {
    fn reduce(&self, f: &Formula) -> Result<String, OracleError>;
    fn census_bound(&self) -> &PolynomialBound;
    fn length_bound(&self) -> &PolynomialBound;
    fn calls(&self) -> u64;
}

/// Outputs one or two candidate model counts, one of which is exact.
pub trait TwoEnumerator {
    /// Ascending, deduplicated, length 1 or 2.
    fn enumerate(&self, f: &Formula) -> Result<Vec<BigUint>, OracleError>;
    fn calls(&self) -> u64;
}

impl<T: Selector + ?Sized> Selector for &T {
    fn select<'a>(&self, a: &'a Formula, b: &'a Formula) -> Result<&'a Formula, OracleError> {
        (**self).select(a, b)
    }
    fn calls(&self) -> u64 {
        (**self).calls()
    }
}

impl<T: TallyReduction + ?Sized> TallyReduction for &T {
    fn reduce(&self, f: &Formula) -> Result<String, OracleError> {
        (**self).reduce(f)
    }
    fn calls(&self) -> u64 {
        (**self).calls()
    }
}

impl<T: SparseCoReduction + ?Sized> SparseCoReduction for &T {
    fn reduce(&self, f: &Formula) -> Result<String, OracleError> {
        (**self).reduce(f)
    }
    fn census_bound(&self) -> &PolynomialBound {
        (**self).census_bound()
    }
    fn length_bound(&self) -> &PolynomialBound {
        (**self).length_bound()
    }
    fn calls(&self) -> u64 {
        (**self).calls()
    }
}

impl<T: TwoEnumerator + ?Sized> TwoEnumerator for &T {
    fn enumerate(&self, f: &Formula) -> Result<Vec<BigUint>, OracleError> {
        (**self).enumerate(f)
    }
    fn calls(&self) -> u64 {
        (**self).calls()
    }
}

/// Polynomial `c0 + c1 n + ... + cd n^d` with nonnegative coefficients,
/// hence nondecreasing on the naturals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialBound {
    coefficients: Vec<u64>,
}

impl PolynomialBound {
    pub fn new(coefficients: &[i64]) -> Result<Self, OracleError> {
        let coefficients = coefficients
            .iter()
            .enumerate()
            .map(|(degree, &c)| u64::try_from(c).map_err(|_| OracleError::InvalidBound { degree, coefficient: c }))
            .collect::<Result<_, _>>()?;
        Ok(PolynomialBound { coefficients })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    /// Saturating evaluation by Horner's rule.
    pub fn eval(&self, n: u64) -> u64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc.saturating_mul(n).saturating_add(c))
    }
}

impl fmt::Display for PolynomialBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, c)| match d {
                0 => c.to_string(),
                1 => format!("{c}n"),
                _ => format!("{c}n^{d}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// 64-bit FNV-1a over the seed and the canonical serialization, finished
/// with a splitmix round so that nearby seeds decorrelate.
pub(crate) fn stable_hash(seed: u64, parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(&seed.to_le_bytes());
    for p in parts {
        eat(p.as_bytes());
        eat(&[0xff]);
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Default)]
struct Counter(AtomicU64);

impl Counter {
    fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }
    fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

// ---------------------------------------------------------------------------
// Selectors

#[derive(Debug)]
pub struct HonestSelector {
    limit: usize,
    calls: Counter,
}

/// `f(a, b) = a` if `a` is satisfiable, else `b` if `b` is, else `a`.
pub fn honest_selector() -> HonestSelector {
    HonestSelector { limit: DEFAULT_BRUTE_LIMIT, calls: Counter::default() }
}

impl HonestSelector {
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }
}

impl Selector for HonestSelector {
    fn select<'a>(&self, a: &'a Formula, b: &'a Formula) -> Result<&'a Formula, OracleError> {
        self.calls.bump();
        if brute_force_sat_with_limit(a, self.limit)? {
            Ok(a)
        } else if brute_force_sat_with_limit(b, self.limit)? {
            Ok(b)
        } else {
            Ok(a)
        }
    }
    fn calls(&self) -> u64 {
        self.calls.get()
    }
}

/// Answers as unhelpfully as the contract allows: when both or neither
/// argument is satisfiable the pick is a seeded coin flip.
#[derive(Debug)]
pub struct AdversarialSelector {
    seed: u64,
    limit: usize,
    calls: Counter,
}

pub fn adversarial_selector(seed: u64) -> AdversarialSelector {
    AdversarialSelector { seed, limit: DEFAULT_BRUTE_LIMIT, calls: Counter::default() }
}

impl AdversarialSelector {
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }
}

impl Selector for AdversarialSelector {
    fn select<'a>(&self, a: &'a Formula, b: &'a Formula) -> Result<&'a Formula, OracleError> {
        self.calls.bump();
        let sa = brute_force_sat_with_limit(a, self.limit)?;
        let sb = brute_force_sat_with_limit(b, self.limit)?;
        Ok(match (sa, sb) {
            (true, false) => a,
            (false, true) => b,
            _ => {
                if stable_hash(self.seed, &[&a.serialize(), &b.serialize()]) & 1 == 0 {
                    a
                } else {
                    b
                }
            }
        })
    }
    fn calls(&self) -> u64 {
        self.calls.get()
    }
}

// ---------------------------------------------------------------------------
// Tally reductions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TallyStyle {
    /// `T = {00}`; satisfiable maps to `00`, unsatisfiable to `0`.
    Canonical,
    /// `T = {0}`; unsatisfiable maps to the non-tally token.
    CollisionRich,
    /// `T` = even-length tally strings, spread over [`SPREAD_BUCKETS`] lengths.
    Spread,
}

pub const SPREAD_BUCKETS: usize = 8;

impl FromStr for TallyStyle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(TallyStyle::Canonical),
            "collision_rich" => Ok(TallyStyle::CollisionRich),
            "spread" => Ok(TallyStyle::Spread),
            _ => Err(format!("unknown tally style `{s}` (canonical, collision_rich, spread)")),
        }
    }
}

impl fmt::Display for TallyStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TallyStyle::Canonical => "canonical",
            TallyStyle::CollisionRich => "collision_rich",
            TallyStyle::Spread => "spread",
        })
    }
}

#[derive(Debug)]
pub struct SimulatedTally {
    style: TallyStyle,
    limit: usize,
    calls: Counter,
}

pub fn simulated_tally_reduction(style: TallyStyle) -> SimulatedTally {
    SimulatedTally { style, limit: DEFAULT_BRUTE_LIMIT, calls: Counter::default() }
}

impl SimulatedTally {
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn style(&self) -> TallyStyle {
        self.style
    }

    /// Membership in the oracle's target tally set.
    pub fn in_target(&self, s: &str) -> bool {
        is_tally(s)
            && match self.style {
                TallyStyle::Canonical => s == "00",
                TallyStyle::CollisionRich => s == "0",
                TallyStyle::Spread => s.len().is_multiple_of(2),
            }
    }
}

impl TallyReduction for SimulatedTally {
    fn reduce(&self, f: &Formula) -> Result<String, OracleError> {
        self.calls.bump();
        let sat = brute_force_sat_with_limit(f, self.limit)?;
        Ok(match (self.style, sat) {
            (TallyStyle::Canonical, true) => "00".into(),
            (TallyStyle::Canonical, false) => "0".into(),
            (TallyStyle::CollisionRich, true) => "0".into(),
            (TallyStyle::CollisionRich, false) => NON_TALLY_TOKEN.into(),
            (TallyStyle::Spread, sat) => {
                let base = 2 * (f.encoded_len() % SPREAD_BUCKETS);
                "0".repeat(if sat { base } else { base + 1 })
            }
        })
    }
    fn calls(&self) -> u64 {
        self.calls.get()
    }
}

// ---------------------------------------------------------------------------
// Sparse co-reductions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SparseStyle {
    /// `S = {1}`; every satisfiable formula gets its own image.
    Singleton,
    /// `S` is a small seeded pool of strings; unsatisfiable formulas hash into it.
    Scatter,
}

impl FromStr for SparseStyle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "singleton" => Ok(SparseStyle::Singleton),
            "scatter" => Ok(SparseStyle::Scatter),
            _ => Err(format!("unknown sparse style `{s}` (singleton, scatter)")),
        }
    }
}

impl fmt::Display for SparseStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SparseStyle::Singleton => "singleton",
            SparseStyle::Scatter => "scatter",
        })
    }
}

const SCATTER_POOL: usize = 4;
const SCATTER_LEN: usize = 6;

#[derive(Debug)]
pub struct SimulatedSparse {
    style: SparseStyle,
    seed: u64,
    limit: usize,
    q: PolynomialBound,
    r: PolynomialBound,
    pool: Vec<String>,
    // satisfiable formula -> index of its private image
    fresh: Mutex<HashMap<String, u64>>,
    calls: Counter,
}

pub fn simulated_sparse_coreduction(style: SparseStyle, seed: u64) -> SimulatedSparse {
    let (q, pool) = match style {
        SparseStyle::Singleton => (PolynomialBound::new(&[1, 1]).unwrap(), vec![NON_TALLY_TOKEN.to_string()]),
        SparseStyle::Scatter => (PolynomialBound::new(&[2, 2]).unwrap(), scatter_pool(seed)),
    };
    SimulatedSparse {
        style,
        seed,
        limit: DEFAULT_BRUTE_LIMIT,
        q,
        r: PolynomialBound::new(&[16, 1]).unwrap(),
        pool,
        fresh: Mutex::new(HashMap::new()),
        calls: Counter::default(),
    }
}

/// Distinct strings of length [`SCATTER_LEN`] beginning with `1`, so no
/// satisfiable image (which begins with `0`) can land in the pool.
fn scatter_pool(seed: u64) -> Vec<String> {
    let mut pool: Vec<String> = Vec::new();
    let mut i = 0u64;
    while pool.len() < SCATTER_POOL {
        let bits = stable_hash(seed, &[&i.to_string()]);
        let s: String = std::iter::once('1')
            .chain((0..SCATTER_LEN - 1).map(|j| if bits >> j & 1 == 1 { '1' } else { '0' }))
            .collect();
        if !pool.contains(&s) {
            pool.push(s);
        }
        i += 1;
    }
    pool
}

impl SimulatedSparse {
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn style(&self) -> SparseStyle {
        self.style
    }

    /// The oracle's sparse set `S`, which is finite.
    pub fn target_set(&self) -> &[String] {
        &self.pool
    }

    pub fn in_target(&self, s: &str) -> bool {
        self.pool.iter().any(|p| p == s)
    }
}

impl SparseCoReduction for SimulatedSparse {
    fn reduce(&self, f: &Formula) -> Result<String, OracleError> {
        self.calls.bump();
        let key = f.serialize();
        let image = if !brute_force_sat_with_limit(f, self.limit)? {
            match self.style {
                SparseStyle::Singleton => self.pool[0].clone(),
                SparseStyle::Scatter => {
                    let slot = stable_hash(self.seed, &[&key]) % self.pool.len() as u64;
                    self.pool[slot as usize].clone()
                }
            }
        } else {
            let mut fresh = self.fresh.lock().unwrap();
            let next = fresh.len() as u64;
            let idx = *fresh.entry(key.clone()).or_insert(next);
            format!("0{idx:b}")
        };
        let bound = self.r.eval(key.len() as u64);
        if image.len() as u64 > bound {
            return Err(OracleError::Failed(format!(
                "image of length {} exceeds r(|F|) = {bound}",
                image.len()
            )));
        }
        Ok(image)
    }
    fn census_bound(&self) -> &PolynomialBound {
        &self.q
    }
    fn length_bound(&self) -> &PolynomialBound {
        &self.r
    }
    fn calls(&self) -> u64 {
        self.calls.get()
    }
}

// ---------------------------------------------------------------------------
// Two-enumerators

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnumeratorStyle {
    /// `{c, c + d}` with `d` a seeded choice of `-1`, `+1` or `+(c+1)`.
    ExactPlusOffset,
    /// `{0, 1}` whenever the count is 0 or 1, else as `ExactPlusOffset`.
    Woeginger,
}

impl FromStr for EnumeratorStyle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact_plus_offset" => Ok(EnumeratorStyle::ExactPlusOffset),
            "woeginger" => Ok(EnumeratorStyle::Woeginger),
            _ => Err(format!("unknown enumerator style `{s}` (exact_plus_offset, woeginger)")),
        }
    }
}

impl fmt::Display for EnumeratorStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnumeratorStyle::ExactPlusOffset => "exact_plus_offset",
            EnumeratorStyle::Woeginger => "woeginger",
        })
    }
}

#[derive(Debug)]
pub struct SimulatedEnumerator {
    style: EnumeratorStyle,
    seed: u64,
    calls: Counter,
}

pub fn honest_two_enumerator(style: EnumeratorStyle, seed: u64) -> SimulatedEnumerator {
    SimulatedEnumerator { style, seed, calls: Counter::default() }
}

impl SimulatedEnumerator {
    pub fn style(&self) -> EnumeratorStyle {
        self.style
    }

    fn offset_pair(&self, f: &Formula, c: BigUint) -> Vec<BigUint> {
        let other = match stable_hash(self.seed, &[&f.serialize()]) % 3 {
            0 if !c.is_zero() => &c - 1u8,
            0 | 1 => &c + 1u8,
            _ => &c + &c + 1u8,
        };
        let mut out = vec![c, other];
        out.sort();
        out
    }
}

impl TwoEnumerator for SimulatedEnumerator {
    fn enumerate(&self, f: &Formula) -> Result<Vec<BigUint>, OracleError> {
        self.calls.bump();
        let c = count_models(f);
        Ok(match self.style {
            EnumeratorStyle::Woeginger if c.to_u8().is_some_and(|v| v <= 1) => {
                vec![BigUint::zero(), BigUint::one()]
            }
            _ => self.offset_pair(f, c),
        })
    }
    fn calls(&self) -> u64 {
        self.calls.get()
    }
}

/// Exhaustive census check for tests: how many members of `set` have length
/// at most `n`.
pub fn census(set: &[String], n: usize) -> usize {
    set.iter().filter(|s| s.len() <= n).count()
}
