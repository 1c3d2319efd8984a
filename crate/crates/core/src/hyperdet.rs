//! Dense hyperdeterminants over exact rationals.
//!
//! This is the slow, general path: the alternating-sum definition and the
//! generalized Laplace expansion on explicit tensors. The sparse engine is
//! checked against it on small cases.
//!
//! Tensor indices are 1-based throughout, matching the usual definitions of
//! minors and shifted Hankel tensors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default cap on the number of permutation tuples visited by [`det_direct`].
pub const DEFAULT_TERM_LIMIT: u128 = 100_000_000;

/// Explicit order-`p`, dimension-`n` tensor of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    entries: Vec<BigRational>,
}

impl DenseTensor {
    pub fn zeros(order: usize, dim: usize) -> Self {
        let len = dim.pow(order as u32);
        Self { order, dim, entries: vec![BigRational::zero(); len] }
    }

    /// Builds a tensor from a function of the 1-based index tuple.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> BigRational) -> Self {
        let mut t = Self::zeros(order, dim);
        let mut idx = vec![1usize; order];
        for slot in 0..t.entries.len() {
            t.entries[slot] = f(&idx);
            advance(&mut idx, dim);
        }
        t
    }

    /// Builds a tensor from integers listed with the first index most significant.
    pub fn from_integers(order: usize, dim: usize, values: &[i64]) -> Result<Self> {
        let len = dim.pow(order as u32);
        if values.len() != len {
            return Err(Error::InvalidParameter(format!(
                "expected {len} entries for order {order}, dim {dim}; got {}",
                values.len()
            )));
        }
        let entries = values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        Ok(Self { order, dim, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!((1..=self.dim).contains(&i));
            acc * self.dim + (i - 1)
        })
    }

    pub fn get(&self, idx: &[usize]) -> &BigRational {
        &self.entries[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: BigRational) {
        let o = self.offset(idx);
        self.entries[o] = value;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    /// Exchanges the slices `a` and `b` of index position `pos`.
    pub fn swap_slices(&self, pos: usize, a: usize, b: usize) -> Self {
        Self::from_fn(self.order, self.dim, |idx| {
            let mut j = idx.to_vec();
            if j[pos] == a {
                j[pos] = b;
            } else if j[pos] == b {
                j[pos] = a;
            }
            self.get(&j).clone()
        })
    }
}

/// Odometer step over `{1..dim}^len`, last position fastest.
fn advance(idx: &mut [usize], dim: usize) {
    for i in (0..idx.len()).rev() {
        if idx[i] < dim {
            idx[i] += 1;
            return;
        }
        idx[i] = 1;
    }
}

/// Strictly increasing subset of `{1..dim}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
    dim: usize,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        let ok = indices.windows(2).all(|w| w[0] < w[1]) && indices.iter().all(|&i| (1..=dim).contains(&i));
        if !ok {
            return Err(Error::InvalidIndexSet { indices, dim });
        }
        Ok(Self { indices, dim })
    }

    pub fn full(dim: usize) -> Self {
        Self { indices: (1..=dim).collect(), dim }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn complement(&self) -> Self {
        let indices = (1..=self.dim).filter(|i| !self.indices.contains(i)).collect();
        Self { indices, dim: self.dim }
    }

    /// Selects `self[inner[0]], self[inner[1]], …`: the set seen from the
    /// parent tensor when `inner` indexes a minor taken through `self`.
    pub fn compose(&self, inner: &IndexSet) -> Result<IndexSet> {
        if inner.dim != self.len() {
            return Err(Error::InvalidParameter(format!(
                "inner set lives in 1..={}, outer set has {} elements",
                inner.dim,
                self.len()
            )));
        }
        Ok(Self { indices: inner.indices.iter().map(|&i| self.indices[i - 1]).collect(), dim: self.dim })
    }
}

/// All `m`-subsets of `{1..dim}` in lexicographic order.
pub fn subsets(dim: usize, m: usize) -> Vec<IndexSet> {
    fn go(start: usize, dim: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
        if cur.len() == m {
            out.push(IndexSet { indices: cur.clone(), dim });
            return;
        }
        for i in start..=dim {
            if dim - i + 1 < m - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, dim, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, dim, m, &mut Vec::new(), &mut out);
    out
}

/// Every permutation of `0..n` paired with its sign.
pub(crate) fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    // Heap's algorithm; each swap flips the sign.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![(perm.clone(), 1i8)];
    let mut sign = 1i8;
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Hyperdeterminant by its alternating-sum definition, with the default
/// term limit.
pub fn det_direct(t: &DenseTensor) -> Result<BigRational> {
    det_direct_with_limit(t, DEFAULT_TERM_LIMIT)
}

/// Hyperdeterminant by its alternating-sum definition.
///
/// The `1/n!` normalization is absorbed by fixing the first permutation to
/// the identity, which is exact for even order. Odd-order hyperdeterminants
/// vanish identically; zero is returned without enumerating anything.
pub fn det_direct_with_limit(t: &DenseTensor, limit: u128) -> Result<BigRational> {
    let (p, n) = (t.order, t.dim);
    if p % 2 == 1 {
        log::warn!("hyperdeterminant of odd order {p} is identically zero");
        return Ok(BigRational::zero());
    }
    if n == 0 || p == 0 {
        return Ok(BigRational::one());
    }
    let terms = factorial(n).checked_pow(p as u32 - 1).unwrap_or(u128::MAX);
    if terms > limit {
        return Err(Error::SizeGuard { what: "det_direct permutation tuples", needed: terms, limit });
    }
    let perms = signed_permutations(n);
    let free = p - 1;
    let mut choice = vec![0usize; free];
    let mut idx = vec![0usize; p];
    let mut total = BigRational::zero();
    'outer: loop {
        let mut prod = BigRational::one();
        for i in 0..n {
            idx[0] = i + 1;
            for (s, &c) in choice.iter().enumerate() {
                idx[s + 1] = perms[c].0[i] + 1;
            }
            let e = t.get(&idx);
            if e.is_zero() {
                prod = BigRational::zero();
                break;
            }
            prod *= e;
        }
        if !prod.is_zero() {
            let sign: i8 = choice.iter().map(|&c| perms[c].1).product();
            if sign > 0 {
                total += prod;
            } else {
                total -= prod;
            }
        }
        for s in (0..free).rev() {
            choice[s] += 1;
            if choice[s] < perms.len() {
                continue 'outer;
            }
            choice[s] = 0;
        }
        break;
    }
    Ok(total)
}

/// Sub-tensor selecting `sets[p]` along index position `p`.
pub fn minor(t: &DenseTensor, sets: &[IndexSet]) -> Result<DenseTensor> {
    if sets.len() != t.order {
        return Err(Error::InvalidParameter(format!("minor needs {} index sets, got {}", t.order, sets.len())));
    }
    let sizes: Vec<usize> = sets.iter().map(IndexSet::len).collect();
    if sizes.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::UnequalCardinality(sizes));
    }
    if let Some(bad) = sets.iter().find(|s| s.dim != t.dim) {
        return Err(Error::InvalidIndexSet { indices: bad.indices.clone(), dim: t.dim });
    }
    let m = sizes.first().copied().unwrap_or(0);
    let mut outer = vec![0usize; t.order];
    Ok(DenseTensor::from_fn(t.order, m, |idx| {
        for (p, (&i, s)) in idx.iter().zip(sets).enumerate() {
            outer[p] = s.indices[i - 1];
        }
        t.get(&outer).clone()
    }))
}

/// Sign of the product of the permutations listing each `Iᵢ` followed by
/// its complement.
pub fn laplace_sign(chosen: &[IndexSet]) -> i32 {
    let inversions: usize =
        chosen.iter().map(|s| s.indices.iter().enumerate().map(|(a, &j)| j - 1 - a).sum::<usize>()).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Generalized Laplace expansion along the index set `i1` of the first
/// position: a signed sum of products of complementary minors.
pub fn laplace_expand(t: &DenseTensor, i1: &IndexSet) -> Result<BigRational> {
    let (p, n) = (t.order, t.dim);
    if p % 2 == 1 {
        return Ok(BigRational::zero());
    }
    if i1.dim != n || i1.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "expansion set must be a nonempty subset of 1..={n}, got {:?}",
            i1.indices
        )));
    }
    let m = i1.len();
    let choices = subsets(n, m);
    let free = p - 1;
    let count = (choices.len() as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
    if count > DEFAULT_TERM_LIMIT {
        return Err(Error::SizeGuard {
            what: "laplace_expand index-set tuples",
            needed: count,
            limit: DEFAULT_TERM_LIMIT,
        });
    }
    let mut pick = vec![0usize; free];
    let mut total = BigRational::zero();
    'outer: loop {
        let mut sets = Vec::with_capacity(p);
        sets.push(i1.clone());
        sets.extend(pick.iter().map(|&c| choices[c].clone()));
        let inner = det_direct(&minor(t, &sets)?)?;
        if !inner.is_zero() {
            let comps: Vec<IndexSet> = sets.iter().map(IndexSet::complement).collect();
            let outer = det_direct(&minor(t, &comps)?)?;
            let term = inner * outer;
            if laplace_sign(&sets) > 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        for s in (0..free).rev() {
            pick[s] += 1;
            if pick[s] < choices.len() {
                continue 'outer;
            }
            pick[s] = 0;
        }
        break;
    }
    Ok(total)
}

/// Shifted Hankel tensor: the entry at the 1-based tuple `(i₁,…,i_p)` is
/// `f(Σ shifts[p][iₚ] + Σ (iₚ − 1))`.
///
/// Shift vectors are plain integer vectors; the reversed staircase forms
/// that arise from Schur functions are increasing rather than decreasing.
pub fn hankel_tensor(
    moments: impl Fn(i64) -> Option<BigRational>,
    n: usize,
    shifts: &[Vec<i64>],
) -> Result<DenseTensor> {
    if let Some(bad) = shifts.iter().find(|s| s.len() != n) {
        return Err(Error::InvalidParameter(format!("shift vector {bad:?} does not have length {n}")));
    }
    let order = shifts.len();
    let mut t = DenseTensor::zeros(order, n);
    let mut idx = vec![1usize; order];
    for slot in 0..t.entries.len() {
        let arg: i64 = idx.iter().zip(shifts).map(|(&i, s)| s[i - 1] + (i as i64 - 1)).sum();
        t.entries[slot] = moments(arg).ok_or(Error::MissingMoment(arg))?;
        advance(&mut idx, n);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn random_tensor(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> DenseTensor {
        DenseTensor::from_fn(order, dim, |_| int(rng.gen_range(-3..=3)))
    }

    fn set(v: &[usize], dim: usize) -> IndexSet {
        IndexSet::new(v.to_vec(), dim).unwrap()
    }

    #[test]
    fn matrix_determinant() {
        let t = DenseTensor::from_integers(2, 2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(det_direct(&t).unwrap(), int(-2));
        let t = DenseTensor::from_integers(2, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 1]).unwrap();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det_direct(&t).unwrap(), int(0));
    }

    #[test]
    fn order_four_dim_two_formula() {
        // The explicit eight-term expansion for p = 4, n = 2.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = random_tensor(&mut rng, 4, 2);
        let m = |a, b, c, d| t.get(&[a, b, c, d]).clone();
        let expected = -m(2, 1, 1, 1) * m(1, 2, 2, 2) + m(2, 1, 1, 2) * m(1, 2, 2, 1) + m(2, 1, 2, 1) * m(1, 2, 1, 2)
            - m(2, 1, 2, 2) * m(1, 2, 1, 1)
            + m(2, 2, 1, 1) * m(1, 1, 2, 2)
            - m(2, 2, 1, 2) * m(1, 1, 2, 1)
            - m(2, 2, 2, 1) * m(1, 1, 1, 2)
            + m(2, 2, 2, 2) * m(1, 1, 1, 1);
        assert_eq!(det_direct(&t).unwrap(), expected);
    }

    #[test]
    fn all_ones_vanishes() {
        let t = DenseTensor::from_fn(4, 2, |_| int(1));
        assert!(det_direct(&t).unwrap().is_zero());
    }

    #[test]
    fn odd_order_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..4 {
            assert!(det_direct(&random_tensor(&mut rng, 3, dim)).unwrap().is_zero());
        }
    }

    #[test]
    fn size_guard_refuses() {
        let t = DenseTensor::zeros(4, 5);
        assert!(matches!(det_direct_with_limit(&t, 1000), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn permutations_have_correct_signs() {
        let perms = signed_permutations(4);
        assert_eq!(perms.len(), 24);
        for (p, s) in &perms {
            let inv = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(*s, if inv % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn alternating_in_every_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let t = random_tensor(&mut rng, 4, 3);
            let d = det_direct(&t).unwrap();
            for pos in 0..4 {
                assert_eq!(det_direct(&t.swap_slices(pos, 1, 3)).unwrap(), -d.clone());
            }
        }
    }

    #[test]
    fn multilinear_in_a_slice() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_tensor(&mut rng, 4, 3);
        let b = random_tensor(&mut rng, 4, 3);
        // a and b agree off the slice i₂ = 2; the slice of `sum` is their sum.
        let b = DenseTensor::from_fn(4, 3, |idx| if idx[1] == 2 { b.get(idx).clone() } else { a.get(idx).clone() });
        let sum =
            DenseTensor::from_fn(4, 3, |idx| if idx[1] == 2 { a.get(idx) + b.get(idx) } else { a.get(idx).clone() });
        assert_eq!(det_direct(&sum).unwrap(), det_direct(&a).unwrap() + det_direct(&b).unwrap());
    }

    #[test]
    fn identity_and_singleton_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_tensor(&mut rng, 4, 3);
        let full = vec![IndexSet::full(3); 4];
        assert_eq!(minor(&t, &full).unwrap(), t);
        let single = [set(&[2], 3), set(&[1], 3), set(&[3], 3), set(&[3], 3)];
        let m = minor(&t, &single).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.get(&[1, 1, 1, 1]), t.get(&[2, 1, 3, 3]));
    }

    #[test]
    fn minor_rejects_unequal_sets() {
        let t = DenseTensor::zeros(2, 3);
        let err = minor(&t, &[set(&[1, 2], 3), set(&[1], 3)]).unwrap_err();
        assert!(matches!(err, Error::UnequalCardinality(_)));
        assert!(IndexSet::new(vec![2, 1], 3).is_err());
        assert!(IndexSet::new(vec![4], 3).is_err());
    }

    #[test]
    fn minor_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = random_tensor(&mut rng, 4, 4);
        let outer = [set(&[1, 2, 4], 4), set(&[2, 3, 4], 4), set(&[1, 3, 4], 4), set(&[1, 2, 3], 4)];
        let inner = [set(&[1, 3], 3), set(&[2, 3], 3), set(&[1, 2], 3), set(&[1, 3], 3)];
        let twice = minor(&minor(&t, &outer).unwrap(), &inner).unwrap();
        let composed: Vec<IndexSet> = outer.iter().zip(&inner).map(|(o, i)| o.compose(i).unwrap()).collect();
        assert_eq!(twice, minor(&t, &composed).unwrap());
    }

    #[test]
    fn laplace_signs() {
        assert_eq!(laplace_sign(&vec![set(&[1], 3); 4]), 1);
        let s = |j| set(&[j], 3);
        assert_eq!(laplace_sign(&[s(1), s(3), s(2), s(2)]), 1);
        assert_eq!(laplace_sign(&[s(1), s(2), s(3), s(3)]), -1);
        // {2,3} then {1}: one transposition-pair shift, two inversions.
        assert_eq!(laplace_sign(&[set(&[2, 3], 3), set(&[1, 2], 3)]), 1);
        assert_eq!(laplace_sign(&[set(&[2], 3), set(&[1, 2], 3)]), -1);
    }

    #[test]
    fn laplace_row_expansion_of_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for dim in 1..=4 {
            let t = random_tensor(&mut rng, 2, dim);
            let d = det_direct(&t).unwrap();
            for m in 1..=dim {
                for i1 in subsets(dim, m) {
                    assert_eq!(laplace_expand(&t, &i1).unwrap(), d, "dim {dim} set {i1:?}");
                }
            }
        }
    }

    #[test]
    fn laplace_matches_definition_on_random_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for case in 0..20 {
            let dim = 2 + case % 2;
            let t = random_tensor(&mut rng, 4, dim);
            let d = det_direct(&t).unwrap();
            for m in 1..=dim {
                for i1 in subsets(dim, m) {
                    assert_eq!(laplace_expand(&t, &i1).unwrap(), d, "case {case} set {i1:?}");
                }
            }
        }
    }

    #[test]
    fn rational_entries_are_exact() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let t = DenseTensor::from_fn(2, 2, |idx| if idx[0] == idx[1] { half.clone() } else { BigRational::zero() });
        assert_eq!(det_direct(&t).unwrap(), BigRational::new(BigInt::from(1), BigInt::from(4)));
    }

    #[test]
    fn hankel_constant_moments() {
        let shifts = vec![vec![0; 3]; 2];
        let t = hankel_tensor(|_| Some(int(1)), 3, &shifts).unwrap();
        assert!(t.entries().iter().all(|e| e == &int(1)));
    }

    #[test]
    fn hankel_index_sums() {
        let shifts = vec![vec![2, 0], vec![1, 1]];
        let t = hankel_tensor(|m| Some(int(m)), 2, &shifts).unwrap();
        assert_eq!(t.get(&[1, 1]), &int(3));
        assert_eq!(t.get(&[2, 1]), &int(2));
        assert_eq!(t.get(&[2, 2]), &int(3));
    }

    #[test]
    fn hankel_missing_moment() {
        let shifts = vec![vec![0, 0]; 2];
        let err = hankel_tensor(|m| (m < 2).then(|| int(1)), 2, &shifts).unwrap_err();
        assert!(matches!(err, Error::MissingMoment(2)));
    }
}
