//! Sparse evaluation of `𝒟 = Det(Δ_{λ⁽¹⁾,…,λ⁽²ᴷ⁾})`.
//!
//! A [`DeltaSpec`] stands for the 0/1 tensor of order `2K` and dimension `n`
//! whose entry at the 1-based tuple `(i₁,…,i_{2K})` is one exactly when
//!
//! ```text
//! λ⁽¹⁾_{n−i₁+1} + ⋯ + λ⁽²ᴷ⁾_{n−i_{2K}+1} + i₁ + ⋯ + i_{2K} = (2K−1)n + 1.
//! ```
//!
//! The tensor is never built (except by [`materialize`] for checking). Its
//! hyperdeterminant is computed by Laplace expansion along a single index of
//! the first position: every surviving term is a signed `𝒟` of dimension
//! `n − 1` given by [`child_spec`]. Values depend only on the multiset of
//! vectors up to zero-sum shifts, which is what [`CanonicalKey`] captures and
//! what the memo table is keyed on.

use lru::LruCache;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::{FxBuildHasher, FxHashMap};

use crate::error::{Error, Result};
use crate::hyperdet::DenseTensor;
use crate::partitions::{DecreasingVector, Partition};
use crate::Coefficient;

/// Default memo capacity, in entries.
pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 24;

/// Default cap on the number of entries [`materialize`] will build.
pub const DEFAULT_MATERIALIZE_LIMIT: u128 = 10_000_000;

/// Environment variable overriding the memo capacity.
pub const CACHE_CAPACITY_ENV: &str = "SCHURDET_CACHE_CAPACITY";

/// Implicit sparse tensor `Δ` given by `2K` decreasing vectors of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaSpec {
    vectors: Vec<DecreasingVector>,
    n: usize,
}

impl DeltaSpec {
    pub fn new(vectors: Vec<DecreasingVector>) -> Result<Self> {
        if vectors.len() < 2 || vectors.len() % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "a delta tensor needs an even number (>= 2) of vectors, got {}",
                vectors.len()
            )));
        }
        let n = vectors[0].len();
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidParameter("delta vectors must share one length".into()));
        }
        Ok(Self { vectors, n })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let vectors = rows.iter().map(|r| DecreasingVector::new(r.to_vec())).collect::<Result<_>>()?;
        Self::new(vectors)
    }

    /// `Δ_{λ,[0ⁿ],…,[0ⁿ]}` with `2k+1` zero vectors, whose `𝒟` is `±g_λ^{n,k}`.
    pub fn for_coefficient(lambda: &Partition, k: usize) -> Self {
        let n = lambda.len();
        let mut vectors = Vec::with_capacity(2 * k + 2);
        vectors.push(lambda.as_decreasing().clone());
        vectors.extend(std::iter::repeat_with(|| DecreasingVector::zeros(n)).take(2 * k + 1));
        Self { vectors, n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `K`, half the tensor order.
    pub fn half_order(&self) -> usize {
        self.vectors.len() / 2
    }

    pub fn order(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[DecreasingVector] {
        &self.vectors
    }

    /// Sum of all entries of all vectors.
    pub fn weight(&self) -> i64 {
        self.vectors.iter().map(DecreasingVector::sum).sum()
    }

    /// The right-hand side `(2K−1)n + 1` of the delta condition.
    pub fn target(&self) -> i64 {
        ((2 * self.half_order() - 1) * self.n + 1) as i64
    }

    /// Left-hand side of the delta condition at a 1-based index tuple.
    fn index_sum(&self, idx: &[usize]) -> i64 {
        idx.iter().zip(&self.vectors).map(|(&i, v)| v.entries()[self.n - i] + i as i64).sum()
    }

    /// Tensor entry (0 or 1) at a 1-based index tuple.
    pub fn entry(&self, idx: &[usize]) -> bool {
        self.index_sum(idx) == self.target()
    }

    /// Returns the spec with its vectors reordered by `perm` (slot `p` gets
    /// vector `perm[p]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { vectors: perm.iter().map(|&p| self.vectors[p].clone()).collect(), n: self.n }
    }

    /// Adds `shifts[p]` to every entry of vector `p`.
    pub fn shifted(&self, shifts: &[i64]) -> Self {
        let vectors = self
            .vectors
            .iter()
            .zip(shifts)
            .map(|(v, &s)| {
                DecreasingVector::new(v.entries().iter().map(|x| x + s).collect()).expect("shift keeps order")
            })
            .collect();
        Self { vectors, n: self.n }
    }
}

impl std::fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Δ")?;
        for v in &self.vectors {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Necessary condition for `𝒟 ≠ 0`: total weight `(K−1)·n·(n−1)`.
pub fn weight_ok(spec: &DeltaSpec) -> bool {
    let (k, n) = (spec.half_order() as i64, spec.n as i64);
    spec.weight() == (k - 1) * n * (n - 1)
}

/// Representative of a spec modulo vector permutations and zero-sum shifts.
///
/// Layout of `data`: the total shift, then the `2K` normalized vectors
/// (each shifted to end in 0) in sorted order, concatenated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    n: u16,
    order: u16,
    data: Box<[i32]>,
}

impl CanonicalKey {
    /// Normalizes and sorts `vectors` in place, then packs them.
    fn from_vectors(n: usize, mut vectors: Vec<Vec<i32>>) -> Self {
        let mut shift = 0i32;
        for v in &mut vectors {
            if let Some(&last) = v.last() {
                shift += last;
                v.iter_mut().for_each(|x| *x -= last);
            }
        }
        vectors.sort_unstable();
        let mut data = Vec::with_capacity(1 + n * vectors.len());
        data.push(shift);
        for v in &vectors {
            data.extend_from_slice(v);
        }
        Self { n: n as u16, order: vectors.len() as u16, data: data.into_boxed_slice() }
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn half_order(&self) -> usize {
        self.order as usize / 2
    }

    pub fn total_shift(&self) -> i64 {
        self.data[0] as i64
    }

    fn slot(&self, p: usize) -> &[i32] {
        let n = self.n as usize;
        &self.data[1 + p * n..1 + (p + 1) * n]
    }

    /// The sorted normalized vectors.
    pub fn normalized(&self) -> Vec<DecreasingVector> {
        (0..self.order as usize)
            .map(|p| {
                DecreasingVector::new(self.slot(p).iter().map(|&x| x as i64).collect())
                    .expect("normalized vectors are decreasing")
            })
            .collect()
    }

    /// Sum of the entries of the spec this key stands for.
    fn weight(&self) -> i64 {
        let n = self.n as i64;
        self.data[1..].iter().map(|&x| x as i64).sum::<i64>() + n * self.total_shift()
    }
}

fn to_i32(v: &DecreasingVector) -> Vec<i32> {
    v.entries().iter().map(|&x| i32::try_from(x).expect("delta vector entry exceeds i32")).collect()
}

/// Key of `spec` modulo vector permutations and zero-sum shifts.
pub fn canonicalize(spec: &DeltaSpec) -> CanonicalKey {
    CanonicalKey::from_vectors(spec.n, spec.vectors.iter().map(to_i32).collect())
}

/// All tuples `(i1, i₂, …, i_{2K})` at which `Δ` has a one.
///
/// Positions 2 through `2K−1` are enumerated; the last index is solved for.
pub fn pivot_tuples(spec: &DeltaSpec, i1: usize) -> Vec<Vec<usize>> {
    let n = spec.n;
    let p = spec.order();
    let mut out = Vec::new();
    if n == 0 || !(1..=n).contains(&i1) {
        return out;
    }
    let last = &spec.vectors[p - 1];
    let mut idx = vec![1usize; p];
    idx[0] = i1;
    loop {
        let partial: i64 = idx[..p - 1].iter().zip(&spec.vectors).map(|(&i, v)| v.entries()[n - i] + i as i64).sum();
        let need = spec.target() - partial;
        // Solve last[n − i] + i = need over i in 1..=n.
        for i in 1..=n {
            if last.entries()[n - i] + i as i64 == need {
                idx[p - 1] = i;
                out.push(idx.clone());
            }
        }
        // Odometer over positions 1..p-1.
        let mut s = p - 2;
        loop {
            if s == 0 {
                return out;
            }
            if idx[s] < n {
                idx[s] += 1;
                break;
            }
            idx[s] = 1;
            s -= 1;
        }
    }
}

/// The complementary minor `Δ[{1..n}∖i₁; …; {1..n}∖i_{2K}]`, itself a delta
/// tensor of dimension `n − 1`.
pub fn child_spec(spec: &DeltaSpec, tuple: &[usize]) -> Result<DeltaSpec> {
    let n = spec.n;
    if tuple.len() != spec.order() || tuple.iter().any(|i| !(1..=n).contains(i)) || !spec.entry(tuple) {
        return Err(Error::ConstraintViolation(tuple.to_vec()));
    }
    let k = spec.half_order() as i64;
    let vectors = spec
        .vectors
        .iter()
        .zip(tuple)
        .enumerate()
        .map(|(slot, (v, &i))| {
            let q = n - i;
            let (before, after) = if slot == 0 { (-2 * (k - 1), -2 * (k - 1) - 1) } else { (1, 0) };
            let e = v.entries();
            let child = e[..q].iter().map(|x| x + before).chain(e[q + 1..].iter().map(|x| x + after)).collect();
            DecreasingVector::new(child).expect("minor vectors stay decreasing")
        })
        .collect();
    Ok(DeltaSpec { vectors, n: n - 1 })
}

/// Block factorization `𝒟 = sign · 𝒟(left) · 𝒟(right)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub left: DeltaSpec,
    pub right: DeltaSpec,
    pub sign: i32,
    /// Size `m` of the leading block of slot 1 (the dimension of `left`).
    pub split: usize,
}

/// Offset subtracted from the leading block of slot 1 when splitting.
fn split_shift(k: i64, n: i64, m: i64) -> i64 {
    2 * (k - 1) * (n - m)
}

/// Required weight of slot 1's first `m` entries plus the last `m` entries
/// of every other slot for the split at `m` to hold.
fn split_weight(k: i64, n: i64, m: i64) -> i64 {
    (k - 1) * m * (m - 1) + m * split_shift(k, n, m)
}

/// Looks for a block split of `Δ`.
///
/// Expanding along the last `m` indices of position 1, the first `m`
/// indices of every other position give the unique lightest complementary
/// pair; when that pair already has the weight a nonzero `𝒟` needs, every
/// other term vanishes and the hyperdeterminant is a product of two
/// smaller ones. The smallest such `m` is used.
pub fn try_factorize(spec: &DeltaSpec) -> Option<Factorization> {
    let (n, k) = (spec.n, spec.half_order() as i64);
    let vecs: Vec<&[i64]> = spec.vectors.iter().map(DecreasingVector::entries).collect();
    for m in 1..n {
        let head: i64 = vecs[0][..m].iter().sum();
        let tails: i64 = vecs[1..].iter().map(|v| v[n - m..].iter().sum::<i64>()).sum();
        if head + tails != split_weight(k, n as i64, m as i64) {
            continue;
        }
        let off = split_shift(k, n as i64, m as i64);
        let mut left = vec![DecreasingVector::new(vecs[0][..m].iter().map(|x| x - off).collect()).ok()?];
        let mut right = vec![DecreasingVector::new(vecs[0][m..].to_vec()).ok()?];
        for v in &vecs[1..] {
            left.push(DecreasingVector::new(v[n - m..].to_vec()).ok()?);
            right.push(DecreasingVector::new(v[..n - m].to_vec()).ok()?);
        }
        let sign = if (m * (n - m)) % 2 == 0 { 1 } else { -1 };
        return Some(Factorization {
            left: DeltaSpec { vectors: left, n: m },
            right: DeltaSpec { vectors: right, n: n - m },
            sign,
            split: m,
        });
    }
    None
}

/// Explicit 0/1 tensor of `spec`, guarded by [`DEFAULT_MATERIALIZE_LIMIT`].
pub fn materialize(spec: &DeltaSpec) -> Result<DenseTensor> {
    let entries = (spec.n as u128).checked_pow(spec.order() as u32).unwrap_or(u128::MAX);
    if entries > DEFAULT_MATERIALIZE_LIMIT {
        return Err(Error::SizeGuard {
            what: "materialized delta entries",
            needed: entries,
            limit: DEFAULT_MATERIALIZE_LIMIT,
        });
    }
    Ok(DenseTensor::from_fn(spec.order(), spec.n, |idx| {
        if spec.entry(idx) {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }))
}

/// Bounded least-recently-used memo of `𝒟` values.
pub struct MemoCache {
    map: LruCache<CanonicalKey, Coefficient, FxBuildHasher>,
    capacity: usize,
    hits: u64,
    misses: u64,
}

impl MemoCache {
    pub fn new(capacity: usize) -> Self {
        Self { map: LruCache::unbounded_with_hasher(FxBuildHasher), capacity, hits: 0, misses: 0 }
    }

    pub fn get(&mut self, key: &CanonicalKey) -> Option<Coefficient> {
        match self.map.get(key) {
            Some(v) => {
                self.hits += 1;
                Some(v.clone())
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    pub fn insert(&mut self, key: CanonicalKey, value: Coefficient) {
        if self.capacity == 0 {
            return;
        }
        if let Some(old) = self.map.peek(&key) {
            debug_assert_eq!(old, &value);
            return;
        }
        if self.map.len() >= self.capacity {
            self.map.pop_lru();
        }
        self.map.put(key, value);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn clear(&mut self) {
        self.map.clear();
    }
}

impl std::fmt::Debug for MemoCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MemoCache")
            .field("len", &self.map.len())
            .field("capacity", &self.capacity)
            .field("hits", &self.hits)
            .field("misses", &self.misses)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub cache_capacity: usize,
    /// Use block factorization when a split exists.
    pub factorize: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { cache_capacity: DEFAULT_CACHE_CAPACITY, factorize: true }
    }
}

impl EngineConfig {
    /// Default configuration with the memo capacity taken from
    /// `SCHURDET_CACHE_CAPACITY` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(cap) = std::env::var(CACHE_CAPACITY_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            cfg.cache_capacity = cap;
        }
        cfg
    }
}

/// Memoized evaluator of `𝒟`. One engine per worker thread.
#[derive(Debug)]
pub struct Engine {
    config: EngineConfig,
    cache: MemoCache,
    factorizations: u64,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Self { config, cache: MemoCache::new(config.cache_capacity), factorizations: 0 }
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    pub fn cache(&self) -> &MemoCache {
        &self.cache
    }

    /// Number of block factorizations taken so far.
    pub fn factorizations(&self) -> u64 {
        self.factorizations
    }

    /// Exact value of `𝒟 = Det(Δ)`.
    pub fn eval(&mut self, spec: &DeltaSpec) -> Coefficient {
        self.eval_key(&canonicalize(spec))
    }

    fn eval_key(&mut self, key: &CanonicalKey) -> Coefficient {
        let n = key.dim() as i64;
        let k = key.half_order() as i64;
        if key.weight() != (k - 1) * n * (n - 1) {
            return Coefficient::zero();
        }
        if n <= 1 {
            // n = 0 is the empty product; for n = 1 the weight check already
            // forced the single entries to sum to 0.
            return Coefficient::one();
        }
        if let Some(v) = self.cache.get(key) {
            return v;
        }
        let value = self.compute(key);
        self.cache.insert(key.clone(), value.clone());
        value
    }

    fn compute(&mut self, key: &CanonicalKey) -> Coefficient {
        let n = key.dim();
        let order = key.order as usize;
        // The widest vector becomes slot 1; it carries the total shift.
        let pivot = (0..order).max_by_key(|&p| key.slot(p)[0]).unwrap_or(0);
        let mut slots: Vec<&[i32]> = Vec::with_capacity(order);
        slots.push(key.slot(pivot));
        slots.extend((0..order).filter(|&p| p != pivot).map(|p| key.slot(p)));
        let shift = key.data[0];

        if self.config.factorize {
            if let Some(v) = self.try_split(key, &slots, shift) {
                return v;
            }
        }
        self.laplace(n, &slots, shift)
    }

    /// Tries every distinct vector as the leading slot of a block split.
    fn try_split(&mut self, key: &CanonicalKey, slots: &[&[i32]], shift: i32) -> Option<Coefficient> {
        let n = key.dim();
        let k = key.half_order() as i64;
        let owned: Vec<Vec<i32>> = slots
            .iter()
            .enumerate()
            .map(|(p, s)| if p == 0 { s.iter().map(|x| x + shift).collect() } else { s.to_vec() })
            .collect();
        for head in 0..owned.len() {
            if head > 0 && owned[head] == owned[head - 1] {
                continue;
            }
            let tails: Vec<i64> = (1..n)
                .map(|m| {
                    owned
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != head)
                        .map(|(_, v)| v[n - m..].iter().map(|&x| x as i64).sum::<i64>())
                        .sum()
                })
                .collect();
            let mut head_sum = 0i64;
            for m in 1..n {
                head_sum += owned[head][m - 1] as i64;
                if head_sum + tails[m - 1] != split_weight(k, n as i64, m as i64) {
                    continue;
                }
                let off = split_shift(k, n as i64, m as i64) as i32;
                let mut left = Vec::with_capacity(owned.len());
                let mut right = Vec::with_capacity(owned.len());
                left.push(owned[head][..m].iter().map(|x| x - off).collect::<Vec<_>>());
                right.push(owned[head][m..].to_vec());
                for (p, v) in owned.iter().enumerate() {
                    if p != head {
                        left.push(v[n - m..].to_vec());
                        right.push(v[..n - m].to_vec());
                    }
                }
                self.factorizations += 1;
                let left = self.eval_key(&CanonicalKey::from_vectors(m, left));
                if left.is_zero() {
                    return Some(left);
                }
                let right = self.eval_key(&CanonicalKey::from_vectors(n - m, right));
                let value = left * right;
                return Some(if (m * (n - m)).is_multiple_of(2) { value } else { -value });
            }
        }
        None
    }

    /// One Laplace step along index 1 of slot 1, with the remaining slots
    /// grouped by equal vectors so that each multiset of index choices is
    /// visited once and weighted by its number of orderings.
    fn laplace(&mut self, n: usize, slots: &[&[i32]], shift: i32) -> Coefficient {
        let order = slots.len();
        let k = (order / 2) as i32;
        let target = ((order - 1) * n + 1) as i64;
        let pivot: Vec<i32> = slots[0].iter().map(|x| x + shift).collect();
        let need = target - (pivot[n - 1] as i64 + 1);

        let mut groups: Vec<(&[i32], usize)> = Vec::new();
        for s in &slots[1..] {
            match groups.last_mut() {
                Some((v, c)) if v == s => *c += 1,
                _ => groups.push((s, 1)),
            }
        }
        let plan = TuplePlan::new(n, &groups);
        let child_pivot: Vec<i32> = pivot[..n - 1].iter().map(|x| x - 2 * (k - 1)).collect();

        let mut children: FxHashMap<CanonicalKey, i128> = FxHashMap::default();
        let mut choice = Vec::with_capacity(order - 1);
        plan.enumerate(0, 0, 1, need, &mut choice, &mut |choice| {
            let mut mult: i128 = 1;
            let mut index_sum = 1usize;
            let mut child = Vec::with_capacity(order);
            child.push(child_pivot.clone());
            let mut at = 0;
            for &(v, c) in &groups {
                let picks = &choice[at..at + c];
                at += c;
                mult *= multinomial(picks);
                for &i in picks {
                    index_sum += i;
                    let q = n - i;
                    child.push(v[..q].iter().map(|x| x + 1).chain(v[q + 1..].iter().copied()).collect());
                }
            }
            let signed = if index_sum.is_multiple_of(2) { mult } else { -mult };
            *children.entry(CanonicalKey::from_vectors(n - 1, child)).or_insert(0) += signed;
        });

        let mut total = Coefficient::zero();
        for (child, mult) in children {
            if mult == 0 {
                continue;
            }
            let v = self.eval_key(&child);
            if !v.is_zero() {
                total += v * BigInt::from(mult);
            }
        }
        total
    }
}

/// Number of distinct orderings of a sorted run of picks.
fn multinomial(sorted: &[usize]) -> i128 {
    let mut out: i128 = 1;
    let mut run = 0i128;
    for (t, w) in sorted.iter().enumerate() {
        run = if t > 0 && sorted[t - 1] == *w { run + 1 } else { 1 };
        // Builds t!/∏ run! incrementally.
        out = out * (t as i128 + 1) / run;
    }
    out
}

/// Bounds for the grouped tuple search: `ψ(i) = v[n−i] + i` is strictly
/// increasing in `i`, so the reachable range of any suffix of slots is known.
struct TuplePlan<'a> {
    n: usize,
    groups: &'a [(&'a [i32], usize)],
    suffix_min: Vec<i64>,
    suffix_max: Vec<i64>,
}

impl<'a> TuplePlan<'a> {
    fn new(n: usize, groups: &'a [(&'a [i32], usize)]) -> Self {
        let mut suffix_min = vec![0i64; groups.len() + 1];
        let mut suffix_max = vec![0i64; groups.len() + 1];
        for g in (0..groups.len()).rev() {
            let (v, c) = groups[g];
            suffix_min[g] = suffix_min[g + 1] + c as i64 * Self::psi(n, v, 1);
            suffix_max[g] = suffix_max[g + 1] + c as i64 * Self::psi(n, v, n);
        }
        Self { n, groups, suffix_min, suffix_max }
    }

    #[inline]
    fn psi(n: usize, v: &[i32], i: usize) -> i64 {
        v[n - i] as i64 + i as i64
    }

    fn enumerate(
        &self,
        g: usize,
        e: usize,
        lo: usize,
        remaining: i64,
        choice: &mut Vec<usize>,
        out: &mut impl FnMut(&[usize]),
    ) {
        if g == self.groups.len() {
            if remaining == 0 {
                out(choice);
            }
            return;
        }
        let (v, c) = self.groups[g];
        if e == c {
            self.enumerate(g + 1, 0, 1, remaining, choice, out);
            return;
        }
        let rest = (c - e - 1) as i64;
        let top = Self::psi(self.n, v, self.n);
        for i in lo..=self.n {
            let val = Self::psi(self.n, v, i);
            let left = remaining - val;
            if left < rest * val + self.suffix_min[g + 1] {
                break;
            }
            if left > rest * top + self.suffix_max[g + 1] {
                continue;
            }
            choice.push(i);
            self.enumerate(g, e + 1, i, left, choice, out);
            choice.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperdet::{det_direct, minor, IndexSet};

    fn spec(rows: &[&[i64]]) -> DeltaSpec {
        DeltaSpec::from_rows(rows).unwrap()
    }

    fn worked_211() -> DeltaSpec {
        spec(&[&[2, 1, 1], &[1, 0, 0], &[1, 0, 0], &[0, 0, 0]])
    }

    fn worked_411() -> DeltaSpec {
        spec(&[&[4, 1, 1], &[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])
    }

    /// Plain recursion straight from `pivot_tuples` and `child_spec`.
    fn eval_naive(s: &DeltaSpec) -> BigInt {
        if s.dim() == 0 {
            return BigInt::one();
        }
        pivot_tuples(s, 1)
            .iter()
            .map(|t| {
                let v = eval_naive(&child_spec(s, t).unwrap());
                if t.iter().sum::<usize>() % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    fn dense(s: &DeltaSpec) -> BigInt {
        det_direct(&materialize(s).unwrap()).unwrap().to_integer()
    }

    #[test]
    fn weight_examples() {
        assert!(weight_ok(&worked_211()));
        assert!(weight_ok(&spec(&[&[0], &[0], &[0], &[0], &[0], &[0]])));
        let bad = spec(&[&[1, 0], &[0, 0], &[0, 0], &[0, 0]]);
        assert!(!weight_ok(&bad));
        assert!(Engine::default().eval(&bad).is_zero());
        assert!(dense(&bad).is_zero());
    }

    #[test]
    fn canonical_examples() {
        let key = canonicalize(&worked_211());
        assert_eq!(key.total_shift(), 1);
        let norm: Vec<Vec<i64>> = key.normalized().into_iter().map(Into::into).collect();
        assert_eq!(norm, vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 0, 0], vec![1, 0, 0]]);

        let key = canonicalize(&spec(&[&[2, -1], &[1, 0], &[0, 0], &[0, 0]]));
        assert_eq!(key.total_shift(), -1);
        let norm: Vec<Vec<i64>> = key.normalized().into_iter().map(Into::into).collect();
        assert_eq!(norm, vec![vec![0, 0], vec![0, 0], vec![1, 0], vec![3, 0]]);

        let s = worked_211();
        assert_eq!(canonicalize(&s.permuted(&[3, 1, 0, 2])), canonicalize(&s));
        assert_eq!(canonicalize(&s.shifted(&[2, -5, 1, 2])), canonicalize(&s));
        assert_ne!(canonicalize(&s.shifted(&[1, 0, 0, 0])), canonicalize(&s));
    }

    #[test]
    fn worked_211_pivots_and_children() {
        let s = worked_211();
        let mut tuples = pivot_tuples(&s, 1);
        tuples.sort();
        assert_eq!(tuples, vec![vec![1, 1, 3, 3], vec![1, 2, 3, 2], vec![1, 3, 1, 3], vec![1, 3, 2, 2]]);
        assert!(tuples.iter().all(|t| t.iter().sum::<usize>() == 8));

        let child = child_spec(&s, &[1, 3, 2, 2]).unwrap();
        assert_eq!(child, spec(&[&[0, -1], &[0, 0], &[2, 0], &[1, 0]]));
        // The same minor taken from the dense tensor.
        let sets = [
            IndexSet::new(vec![2, 3], 3).unwrap(),
            IndexSet::new(vec![1, 2], 3).unwrap(),
            IndexSet::new(vec![1, 3], 3).unwrap(),
            IndexSet::new(vec![1, 3], 3).unwrap(),
        ];
        assert_eq!(minor(&materialize(&s).unwrap(), &sets).unwrap(), materialize(&child).unwrap());
    }

    #[test]
    fn worked_411_pivots_and_children() {
        let s = worked_411();
        let tuples = pivot_tuples(&s, 1);
        assert_eq!(tuples.len(), 3);
        assert!(tuples.iter().all(|t| t.iter().sum::<usize>() == 9));
        let mut children: Vec<DeltaSpec> = tuples.iter().map(|t| child_spec(&s, t).unwrap()).collect();
        children.sort_by_key(|c| c.to_string());
        let named = spec(&[&[2, -1], &[1, 0], &[0, 0], &[0, 0]]);
        assert!(children.contains(&named));
        assert!(children.iter().all(|c| canonicalize(c) == canonicalize(&named)));

        let t = pivot_tuples(&named, 1);
        assert_eq!(t.len(), 1);
        assert_eq!(child_spec(&named, &t[0]).unwrap(), spec(&[&[0], &[0], &[0], &[0]]));
    }

    #[test]
    fn child_deleting_first_position() {
        let s = spec(&[&[3, 1, 0], &[2, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        // Build a tuple with i₂ = n and solve the rest by enumeration.
        let t = pivot_tuples(&s, 1).into_iter().find(|t| t[1] == 3).expect("a tuple with i2 = 3");
        let c = child_spec(&s, &t).unwrap();
        assert_eq!(c.vectors()[1].entries(), &[1, 0]);
    }

    #[test]
    fn child_rejects_zero_entries() {
        assert!(matches!(child_spec(&worked_211(), &[1, 1, 1, 1]), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn worked_values() {
        let mut e = Engine::default();
        assert_eq!(e.eval(&worked_211()), BigInt::from(6));
        assert_eq!(e.eval(&spec(&[&[2, -1], &[1, 0], &[0, 0], &[0, 0]])), BigInt::from(-1));
        assert_eq!(e.eval(&spec(&[&[0, -1], &[2, 1], &[0, 0], &[0, 0]])), BigInt::from(2));
        assert_eq!(e.eval(&spec(&[&[0, -1], &[0, 0], &[2, 0], &[1, 0]])), BigInt::from(1));
        assert_eq!(e.eval(&worked_411()), BigInt::from(3));
    }

    #[test]
    fn base_cases() {
        let mut e = Engine::default();
        let empty = DeltaSpec::new(vec![DecreasingVector::zeros(0); 4]).unwrap();
        assert_eq!(e.eval(&empty), BigInt::one());
        assert_eq!(e.eval(&spec(&[&[1], &[-1], &[0], &[0]])), BigInt::one());
        assert!(e.eval(&spec(&[&[1], &[0], &[0], &[0]])).is_zero());
    }

    #[test]
    fn materialize_small() {
        let t = materialize(&spec(&[&[0], &[0], &[0], &[0]])).unwrap();
        assert_eq!(t.entries(), &[BigRational::one()]);
        let big = spec(&[&[0; 10], &[0; 10], &[0; 10], &[0; 10], &[0; 10], &[0; 10], &[0; 10], &[0; 10]]);
        assert!(matches!(materialize(&big), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn factorization_example() {
        let s = spec(&[&[7, 7, 4, 2, 0], &[0; 5], &[0; 5], &[0; 5]]);
        let f = try_factorize(&s).expect("splits");
        assert_eq!(f.split, 2);
        assert_eq!(f.left, spec(&[&[1, 1], &[0, 0], &[0, 0], &[0, 0]]));
        assert_eq!(f.right, spec(&[&[4, 2, 0], &[0; 3], &[0; 3], &[0; 3]]));
        let mut e = Engine::new(EngineConfig { factorize: false, ..Default::default() });
        let product = BigInt::from(f.sign) * e.eval(&f.left) * e.eval(&f.right);
        assert_eq!(product, e.eval(&s));
        assert!(!product.is_zero());
        let f = try_factorize(&worked_411()).expect("splits");
        assert_eq!(BigInt::from(f.sign) * e.eval(&f.left) * e.eval(&f.right), e.eval(&worked_411()));
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[]), 1);
        assert_eq!(multinomial(&[1, 1, 2]), 3);
        assert_eq!(multinomial(&[1, 2, 3]), 6);
        assert_eq!(multinomial(&[2, 2, 2, 2]), 1);
        assert_eq!(multinomial(&[1, 1, 2, 2, 3]), 30);
    }

    /// Specs reachable from the coefficient specs of small `(n, k)`.
    fn expansion_specs(n: usize, k: usize) -> Vec<DeltaSpec> {
        let mut out = Vec::new();
        let mut frontier: Vec<DeltaSpec> =
            crate::partitions::enumerate_admissible(n, k).unwrap().map(|l| DeltaSpec::for_coefficient(&l, k)).collect();
        while let Some(s) = frontier.pop() {
            if s.dim() > 1 {
                frontier.extend(pivot_tuples(&s, 1).iter().map(|t| child_spec(&s, t).unwrap()));
            }
            out.push(s);
        }
        out.sort_by_key(canonicalize);
        out.dedup_by_key(|s| canonicalize(s));
        out
    }

    #[test]
    fn engine_matches_dense_determinant() {
        let mut e = Engine::default();
        for (n, k) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            for s in expansion_specs(n, k) {
                if s.dim() < 1 {
                    continue;
                }
                assert_eq!(e.eval(&s), dense(&s), "{s}");
            }
        }
    }

    #[test]
    fn engine_matches_naive_recursion() {
        let mut e = Engine::default();
        for s in expansion_specs(4, 1) {
            assert_eq!(e.eval(&s), eval_naive(&s), "{s}");
        }
    }

    #[test]
    fn children_are_valid_specs() {
        for s in expansion_specs(4, 1) {
            for t in pivot_tuples(&s, 1) {
                let c = child_spec(&s, &t).unwrap();
                assert_eq!(c.dim(), s.dim() - 1);
                assert_eq!(c.order(), s.order());
                assert!(weight_ok(&c) == weight_ok(&s));
            }
        }
    }

    #[test]
    fn cache_capacity_is_transparent() {
        let specs = expansion_specs(4, 1);
        let mut full = Engine::default();
        let mut none = Engine::new(EngineConfig { cache_capacity: 0, ..Default::default() });
        let mut tiny = Engine::new(EngineConfig { cache_capacity: 3, ..Default::default() });
        for s in &specs {
            let v = full.eval(s);
            assert_eq!(none.eval(s), v);
            assert_eq!(tiny.eval(s), v);
        }
        assert!(tiny.cache().len() <= 3);
        assert_eq!(none.cache().len(), 0);
        assert!(full.cache().hits() > 0);
    }
}
