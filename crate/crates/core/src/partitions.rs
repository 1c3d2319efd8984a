//! Decreasing integer vectors, the dominance order, and admissible partitions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing vector of signed integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DecreasingVector(Vec<i64>);

impl DecreasingVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDecreasing(entries));
        }
        Ok(Self(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl TryFrom<Vec<i64>> for DecreasingVector {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DecreasingVector> for Vec<i64> {
    fn from(v: DecreasingVector) -> Self {
        v.0
    }
}

impl fmt::Display for DecreasingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// Integer partition stored as a decreasing vector of nonnegative parts.
///
/// Trailing zeros are kept: a partition padded to length `n` is the label of
/// a Schur function in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: DecreasingVector,
    weight: i64,
}

impl Partition {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        let parts = DecreasingVector::new(parts)?;
        if parts.entries().last().is_some_and(|&x| x < 0) {
            return Err(Error::NegativePart(parts.into_inner()));
        }
        let weight = parts.sum();
        Ok(Self { parts, weight })
    }

    pub fn parts(&self) -> &[i64] {
        self.parts.entries()
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts().iter().take_while(|&&x| x > 0).count()
    }

    /// Pads with zeros (or drops trailing zeros) to exactly `n` entries.
    pub fn padded(&self, n: usize) -> Result<Self> {
        if self.length() > n {
            return Err(Error::InvalidParameter(format!("partition {} has more than {n} nonzero parts", self.parts)));
        }
        let mut parts = self.parts().to_vec();
        parts.resize(n, 0);
        Ok(Self { parts: DecreasingVector(parts), weight: self.weight })
    }

    pub fn as_decreasing(&self) -> &DecreasingVector {
        &self.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.parts.fmt(f)
    }
}

/// Upper and lower ends of the admissible dominance interval for `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleBounds {
    pub upper: Partition,
    pub lower: Partition,
    pub n: usize,
    pub k: usize,
}

impl AdmissibleBounds {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_nk(n, k)?;
        let step = 2 * k as i64;
        let upper = (0..n).rev().map(|i| step * i as i64).collect();
        let lower = vec![(k * (n - 1)) as i64; n];
        Ok(Self { upper: Partition::new(upper)?, lower: Partition::new(lower)?, n, k })
    }

    /// Common weight `k·n·(n−1)` of every admissible partition.
    pub fn weight(&self) -> i64 {
        (self.k * self.n * (self.n - 1)) as i64
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!("need n >= 1 and k >= 1, got n={n}, k={k}")));
    }
    Ok(())
}

/// Dominance order: every prefix sum of `a` is at least that of `b`.
///
/// The shorter partition is padded with zeros. Partitions of different
/// weights are incomparable and rejected.
pub fn dominates(a: &Partition, b: &Partition) -> Result<bool> {
    if a.weight() != b.weight() {
        return Err(Error::Incomparable(a.weight(), b.weight()));
    }
    let len = a.len().max(b.len());
    let (mut sa, mut sb) = (0i64, 0i64);
    for i in 0..len {
        sa += a.parts().get(i).copied().unwrap_or(0);
        sb += b.parts().get(i).copied().unwrap_or(0);
        if sa < sb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `lambda` lies in the admissible dominance interval for `(n, k)`.
pub fn is_admissible(lambda: &Partition, n: usize, k: usize) -> Result<bool> {
    let bounds = AdmissibleBounds::new(n, k)?;
    if lambda.length() > n || lambda.weight() != bounds.weight() {
        return Ok(false);
    }
    Ok(dominates(&bounds.upper, lambda)? && dominates(lambda, &bounds.lower)?)
}

/// Streams the admissible partitions of `(n, k)` in reverse-lexicographic
/// order, each padded to length `n`.
pub fn enumerate_admissible(n: usize, k: usize) -> Result<AdmissibleIter> {
    let bounds = AdmissibleBounds::new(n, k)?;
    let mut upper_prefix = vec![0i64; n + 1];
    for (i, &u) in bounds.upper.parts().iter().enumerate() {
        upper_prefix[i + 1] = upper_prefix[i] + u;
    }
    Ok(AdmissibleIter {
        n,
        weight: bounds.weight(),
        upper_prefix,
        cur: vec![0; n],
        lo: vec![0; n],
        prefix: vec![0; n + 1],
        started: false,
        done: false,
    })
}

/// Depth-first generator of admissible partitions.
///
/// Each position is filled greedily with its largest feasible part, then
/// decremented on backtracking; prefix sums are kept below the staircase.
/// The rectangular lower bound needs no check: a decreasing vector of the
/// right weight always dominates the constant vector of that weight.
#[derive(Clone, Debug)]
pub struct AdmissibleIter {
    n: usize,
    weight: i64,
    upper_prefix: Vec<i64>,
    cur: Vec<i64>,
    lo: Vec<i64>,
    prefix: Vec<i64>,
    started: bool,
    done: bool,
}

impl AdmissibleIter {
    /// Fills positions `from..n` greedily; on failure returns the position
    /// that could not be filled.
    fn fill(&mut self, from: usize) -> std::result::Result<(), usize> {
        for t in from..self.n {
            let rest = self.weight - self.prefix[t];
            let slots = (self.n - t) as i64;
            let prev = if t == 0 { i64::MAX } else { self.cur[t - 1] };
            let hi = prev.min(self.upper_prefix[t + 1] - self.prefix[t]).min(rest);
            let lo = (rest + slots - 1).div_euclid(slots).max(0);
            if hi < lo {
                return Err(t);
            }
            self.cur[t] = hi;
            self.lo[t] = lo;
            self.prefix[t + 1] = self.prefix[t] + hi;
        }
        Ok(())
    }

    fn emit(&self) -> Partition {
        Partition { parts: DecreasingVector(self.cur.clone()), weight: self.weight }
    }
}

impl Iterator for AdmissibleIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let mut j = if self.started {
            self.n
        } else {
            self.started = true;
            match self.fill(0) {
                Ok(()) => return Some(self.emit()),
                Err(t) => t,
            }
        };
        loop {
            loop {
                if j == 0 {
                    self.done = true;
                    return None;
                }
                j -= 1;
                if self.cur[j] > self.lo[j] {
                    break;
                }
            }
            self.cur[j] -= 1;
            self.prefix[j + 1] -= 1;
            match self.fill(j + 1) {
                Ok(()) => return Some(self.emit()),
                Err(t) => j = t,
            }
        }
    }
}

impl std::iter::FusedIterator for AdmissibleIter {}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// All partitions of `w` with at most `n` parts, padded to `n`.
    fn all_partitions(w: i64, n: usize) -> Vec<Vec<i64>> {
        fn go(rest: i64, max: i64, slots: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if slots == 0 {
                if rest == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for x in (0..=max.min(rest)).rev() {
                cur.push(x);
                go(rest - x, x, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(w, w, n, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&p(&[2, 0]), &p(&[1, 1])).unwrap());
        assert!(!dominates(&p(&[3, 1, 1, 1]), &p(&[2, 2, 2, 0])).unwrap());
        assert!(!dominates(&p(&[2, 2, 2, 0]), &p(&[3, 1, 1, 1])).unwrap());
        assert!(dominates(&p(&[1, 1]), &p(&[1, 1])).unwrap());
        assert!(dominates(&p(&[2]), &p(&[1, 1])).unwrap());
    }

    #[test]
    fn dominance_rejects_weight_mismatch() {
        assert!(matches!(dominates(&p(&[2]), &p(&[1])), Err(Error::Incomparable(2, 1))));
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&p(&[2, 0]), 2, 1).unwrap());
        assert!(is_admissible(&p(&[1, 1]), 2, 1).unwrap());
        assert!(!is_admissible(&p(&[3, 0]), 2, 1).unwrap());
        assert!(is_admissible(&p(&[1, 1, 0, 0]), 2, 1).unwrap());
        assert!(!is_admissible(&p(&[1, 1, 1]), 2, 1).unwrap());
        assert!(is_admissible(&p(&[0]), 1, 4).unwrap());
        assert!(is_admissible(&p(&[1, 1]), 0, 1).is_err());
    }

    #[test]
    fn bounds_have_common_weight() {
        for n in 1..7 {
            for k in 1..5 {
                let b = AdmissibleBounds::new(n, k).unwrap();
                assert_eq!(b.upper.weight(), b.weight());
                assert_eq!(b.lower.weight(), b.weight());
                assert_eq!(b.upper.len(), n);
            }
        }
    }

    #[test]
    fn enumerate_small() {
        let got: Vec<_> = enumerate_admissible(2, 1).unwrap().map(|p| p.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![2, 0], vec![1, 1]]);
        let got: Vec<_> = enumerate_admissible(1, 5).unwrap().collect();
        assert_eq!(got, vec![p(&[0])]);
        assert_eq!(enumerate_admissible(5, 1).unwrap().count(), 59);
    }

    #[test]
    fn enumeration_matches_exhaustive_filter() {
        for n in 1..=5 {
            for k in 1..=3 {
                let w = (k * n * (n - 1)) as i64;
                let expected: Vec<Vec<i64>> =
                    all_partitions(w, n).into_iter().filter(|v| is_admissible(&p(v), n, k).unwrap()).collect();
                let got: Vec<Vec<i64>> = enumerate_admissible(n, k).unwrap().map(|p| p.parts().to_vec()).collect();
                assert_eq!(got, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn enumeration_is_strictly_decreasing() {
        let all: Vec<_> = enumerate_admissible(6, 2).unwrap().collect();
        assert_eq!(all.len(), 3996);
        assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
    }

    #[test]
    fn padding() {
        assert_eq!(p(&[2]).padded(3).unwrap().parts(), &[2, 0, 0]);
        assert_eq!(p(&[2, 0, 0]).padded(1).unwrap().parts(), &[2]);
        assert!(p(&[1, 1]).padded(1).is_err());
        assert!(Partition::new(vec![1, -1]).is_err());
        assert!(DecreasingVector::new(vec![0, 1]).is_err());
    }
}
