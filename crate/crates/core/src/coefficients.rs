//! Schur coefficients `g_λ^{n,k}` of `V(z₁,…,zₙ)^{2k}` and full expansions.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::Zero;

use crate::engine::{DeltaSpec, Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_admissible, is_admissible, AdmissibleBounds, Partition};
use crate::Coefficient;

/// `(−1)^{n(n−1)/2}`, relating `g_λ^{n,k}` to the hyperdeterminant `𝒟`.
pub fn global_sign(n: usize) -> i32 {
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `g_λ^{n,k}` with a fresh engine configured from the environment.
pub fn g_coefficient(lambda: &Partition, n: usize, k: usize) -> Result<Coefficient> {
    g_coefficient_with(&mut Engine::new(EngineConfig::from_env()), lambda, n, k)
}

/// `g_λ^{n,k}` evaluated on a caller-owned engine (and its memo table).
pub fn g_coefficient_with(engine: &mut Engine, lambda: &Partition, n: usize, k: usize) -> Result<Coefficient> {
    if !is_admissible(lambda, n, k)? {
        return Ok(Coefficient::zero());
    }
    let lambda = lambda.padded(n)?;
    let d = engine.eval(&DeltaSpec::for_coefficient(&lambda, k));
    Ok(if global_sign(n) > 0 { d } else { -d })
}

/// Coefficients of one `(n, k)` expansion, keyed in reverse-lexicographic
/// order of the partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurExpansion {
    pub n: usize,
    pub k: usize,
    terms: Vec<(Partition, Coefficient)>,
}

impl SchurExpansion {
    /// Builds an expansion; terms are sorted and must be admissible.
    pub fn new(n: usize, k: usize, mut terms: Vec<(Partition, Coefficient)>) -> Result<Self> {
        for (lambda, _) in &terms {
            if lambda.len() != n || !is_admissible(lambda, n, k)? {
                return Err(Error::InvalidParameter(format!("{lambda} is not an admissible key for n={n}, k={k}")));
            }
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("duplicate partition in expansion".into()));
        }
        Ok(Self { n, k, terms })
    }

    pub fn terms(&self) -> &[(Partition, Coefficient)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, lambda: &Partition) -> Option<&Coefficient> {
        self.terms.binary_search_by(|(p, _)| lambda.cmp(p)).ok().map(|i| &self.terms[i].1)
    }

    pub fn vanishing(&self) -> usize {
        self.terms.iter().filter(|(_, c)| c.is_zero()).count()
    }

    /// First partition at which the two expansions differ, with both values.
    pub fn first_mismatch(
        &self,
        other: &SchurExpansion,
    ) -> Option<(Partition, Option<Coefficient>, Option<Coefficient>)> {
        for (lambda, c) in &self.terms {
            if other.get(lambda) != Some(c) {
                return Some((lambda.clone(), Some(c.clone()), other.get(lambda).cloned()));
            }
        }
        other.terms.iter().find(|(l, _)| self.get(l).is_none()).map(|(l, c)| (l.clone(), None, Some(c.clone())))
    }
}

/// Evaluates `g_λ^{n,k}` for every partition in `partitions` on a pool of
/// `workers` threads, each with a private engine. Output order matches
/// input order regardless of scheduling.
pub fn compute_many(
    partitions: &[Partition],
    n: usize,
    k: usize,
    workers: usize,
    config: EngineConfig,
) -> Result<Vec<Coefficient>> {
    let workers = workers.max(1).min(partitions.len().max(1));
    let next = AtomicUsize::new(0);
    let run = || -> Result<Vec<(usize, Coefficient)>> {
        let mut engine = Engine::new(config);
        let mut done = Vec::new();
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            let Some(lambda) = partitions.get(i) else { break };
            done.push((i, g_coefficient_with(&mut engine, lambda, n, k)?));
        }
        Ok(done)
    };
    let batches: Vec<Result<Vec<(usize, Coefficient)>>> = if workers == 1 {
        vec![run()]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|_| s.spawn(run)).collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut out = vec![Coefficient::zero(); partitions.len()];
    for batch in batches {
        for (i, c) in batch? {
            out[i] = c;
        }
    }
    Ok(out)
}

/// Full expansion of `V^{2k}` over all admissible partitions.
pub fn expand(n: usize, k: usize, workers: usize) -> Result<SchurExpansion> {
    expand_with(n, k, workers, EngineConfig::from_env())
}

pub fn expand_with(n: usize, k: usize, workers: usize, config: EngineConfig) -> Result<SchurExpansion> {
    if workers == 0 {
        return Err(Error::InvalidParameter("workers must be at least 1".into()));
    }
    let partitions: Vec<Partition> = enumerate_admissible(n, k)?.collect();
    let values = compute_many(&partitions, n, k, workers, config)?;
    Ok(SchurExpansion { n, k, terms: partitions.into_iter().zip(values).collect() })
}

/// `(admissible, vanishing)` counts for `(n, k)`.
pub fn count_vanishing(n: usize, k: usize, workers: usize) -> Result<(usize, usize)> {
    let e = expand(n, k, workers)?;
    Ok((e.len(), e.vanishing()))
}

/// A split `g_λ^{n,k} = g_μ^{m,k} · g_ν^{n−m,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFactor {
    pub mu: Partition,
    pub nu: Partition,
    pub n_left: usize,
    pub n_right: usize,
}

/// Offset removed from the leading block when splitting a coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeadingShift {
    /// `2k(n−m)`.
    CrossBlock,
    /// `2k(m−1)`; does not give a valid split.
    Uncorrected,
}

/// Splits `g_λ` when some trailing block of `λ` has the minimal weight
/// `k(n−m)(n−m−1)`; the smallest leading block size `m` is used.
pub fn factorize_g(lambda: &Partition, n: usize, k: usize) -> Result<Option<GFactor>> {
    factorize_g_with(lambda, n, k, LeadingShift::CrossBlock)
}

pub fn factorize_g_with(lambda: &Partition, n: usize, k: usize, shift: LeadingShift) -> Result<Option<GFactor>> {
    AdmissibleBounds::new(n, k)?;
    let lambda = lambda.padded(n)?;
    let parts = lambda.parts();
    for m in 1..n {
        let tail_len = n - m;
        let tail: i64 = parts[m..].iter().sum();
        if tail != (k * tail_len * (tail_len - 1)) as i64 {
            continue;
        }
        let off = match shift {
            LeadingShift::CrossBlock => 2 * k * tail_len,
            LeadingShift::Uncorrected => 2 * k * (m - 1),
        } as i64;
        let head: Vec<i64> = parts[..m].iter().map(|x| x - off).collect();
        if head.iter().any(|&x| x < 0) {
            continue;
        }
        return Ok(Some(GFactor {
            mu: Partition::new(head)?,
            nu: Partition::new(parts[m..].to_vec())?,
            n_left: m,
            n_right: tail_len,
        }));
    }
    Ok(None)
}

/// A partition at which a split disagreed with direct evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMismatch {
    pub lambda: Partition,
    pub factor: GFactor,
    pub direct: Coefficient,
    pub product: Coefficient,
}

/// Checks `g_λ = g_μ · g_ν` for every admissible `λ` of `(n, k)` that the
/// chosen rule splits, with both sides computed without factorization.
/// Returns the number of splits checked, or the first disagreement.
pub fn check_g_splits(n: usize, k: usize, shift: LeadingShift) -> Result<std::result::Result<usize, SplitMismatch>> {
    let mut engine = Engine::new(EngineConfig { factorize: false, ..EngineConfig::from_env() });
    let mut checked = 0;
    for lambda in enumerate_admissible(n, k)? {
        let Some(factor) = factorize_g_with(&lambda, n, k, shift)? else { continue };
        let direct = g_coefficient_with(&mut engine, &lambda, n, k)?;
        let product = g_coefficient_with(&mut engine, &factor.mu, factor.n_left, k)?
            * g_coefficient_with(&mut engine, &factor.nu, factor.n_right, k)?;
        if direct != product {
            return Ok(Err(SplitMismatch { lambda, factor, direct, product }));
        }
        checked += 1;
    }
    Ok(Ok(checked))
}
