//! Brute-force ground truth.
//!
//! Expands `∏_{i<j}(zᵢ−zⱼ)^e` as a sparse polynomial and reads Schur
//! coefficients off monomials, and evaluates both sides of the discrete
//! Heine identity from first principles. Nothing here touches the sparse
//! engine.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::coefficients::SchurExpansion;
use crate::error::{Error, Result};
use crate::hyperdet::{det_direct, DenseTensor};
use crate::partitions::{enumerate_admissible, is_admissible, Partition};
use crate::Coefficient;

/// Default cap on the number of stored monomials.
pub const DEFAULT_TERM_BUDGET: usize = 10_000_000;

/// Polynomial in `nvars` variables with exact integer coefficients; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: FxHashMap<Vec<u32>, Coefficient>,
}

impl SparsePolynomial {
    pub fn one(nvars: usize) -> Self {
        let mut terms = FxHashMap::default();
        terms.insert(vec![0; nvars], Coefficient::one());
        Self { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Coefficient)>) -> Result<Self> {
        let mut out = Self { nvars, terms: FxHashMap::default() };
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidParameter(format!("exponent {e:?} has the wrong length")));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: &[u32]) -> Coefficient {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    /// Terms in increasing lexicographic order of exponent.
    pub fn sorted_terms(&self) -> BTreeMap<Vec<u32>, Coefficient> {
        self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self { nvars: self.nvars, terms: FxHashMap::default() };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Multiplies by `(z_i − z_j)^e` via the binomial expansion.
    fn mul_difference_power(&self, i: usize, j: usize, e: u32) -> Self {
        let binom = binomials(e);
        let mut out = Self { nvars: self.nvars, terms: FxHashMap::default() };
        out.terms.reserve(self.terms.len() * (e as usize + 1));
        for (a, ca) in &self.terms {
            for (t, b) in binom.iter().enumerate() {
                let mut x = a.clone();
                x[i] += e - t as u32;
                x[j] += t as u32;
                let c = if t % 2 == 0 { ca * b } else { -(ca * b) };
                out.add_term(x, c);
            }
        }
        out
    }
}

fn binomials(e: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for t in 0..e as usize {
        let next = &row[t] * BigInt::from(e as usize - t) / BigInt::from(t + 1);
        row.push(next);
    }
    row
}

/// Upper bound on the monomial count of a homogeneous polynomial of degree
/// `degree` in `nvars` variables.
fn monomial_bound(nvars: usize, degree: u128) -> u128 {
    let mut b: u128 = 1;
    for t in 1..nvars as u128 {
        b = b.saturating_mul(degree + t) / t;
    }
    b
}

/// `∏_{i<j}(zᵢ−zⱼ)^e`, fully expanded, with the default term budget.
pub fn vandermonde_power(n: usize, e: u32) -> Result<SparsePolynomial> {
    vandermonde_power_with_budget(n, e, DEFAULT_TERM_BUDGET)
}

pub fn vandermonde_power_with_budget(n: usize, e: u32, budget: usize) -> Result<SparsePolynomial> {
    if n == 0 {
        return Err(Error::InvalidParameter("vandermonde_power needs n >= 1".into()));
    }
    let mut poly = SparsePolynomial::one(n);
    let degree = e as u128 * (n * (n - 1) / 2) as u128;
    for i in 0..n {
        for j in i + 1..n {
            poly = poly.mul_difference_power(i, j, e);
            if poly.len() > budget {
                return Err(Error::SizeGuard {
                    what: "Vandermonde power monomials (final count at most the bound given)",
                    needed: monomial_bound(n, degree),
                    limit: budget as u128,
                });
            }
        }
    }
    Ok(poly)
}

/// Schur expansion of `V^{2k}` read from `V^{2k+1}`: `g_λ` is the coefficient
/// of `z^{λ+δ}` with `δ = (n−1,…,1,0)`.
///
/// Every strictly decreasing exponent outside the admissible window must
/// carry a zero coefficient; a nonzero one is reported as an error.
pub fn schur_expansion_bruteforce(n: usize, k: usize) -> Result<SchurExpansion> {
    let poly = vandermonde_power(n, (2 * k + 1) as u32)?;
    let mut found: BTreeMap<Vec<i64>, Coefficient> = BTreeMap::new();
    for (e, c) in &poly.terms {
        if !e.windows(2).all(|w| w[0] > w[1]) {
            continue;
        }
        let lambda: Vec<i64> = e.iter().enumerate().map(|(i, &x)| x as i64 - (n - 1 - i) as i64).collect();
        let part = Partition::new(lambda.clone())?;
        if !is_admissible(&part, n, k)? {
            return Err(Error::InadmissibleNonzero { lambda, coeff: c.to_string() });
        }
        found.insert(lambda, c.clone());
    }
    let terms = enumerate_admissible(n, k)?
        .map(|l| {
            let c = found.get(l.parts()).cloned().unwrap_or_default();
            (l, c)
        })
        .collect();
    SchurExpansion::new(n, k, terms)
}

/// Finitely supported measure `Σ wᵢ δ_{xᵢ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    support: Vec<BigRational>,
    weights: Vec<BigRational>,
}

impl DiscreteMeasure {
    pub fn new(support: Vec<BigRational>, weights: Vec<BigRational>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::InvalidParameter("support and weights differ in length".into()));
        }
        for (i, x) in support.iter().enumerate() {
            if support[..i].contains(x) {
                return Err(Error::InvalidParameter(format!("support point {x} repeated")));
            }
        }
        Ok(Self { support, weights })
    }

    pub fn support(&self) -> &[BigRational] {
        &self.support
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// `Σ w·x^m`; `None` when some support point is zero and `m < 0`.
    pub fn moment(&self, m: i64) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for (x, w) in self.support.iter().zip(&self.weights) {
            if m < 0 && x.is_zero() {
                return None;
            }
            let p = if m >= 0 {
                num_traits::pow(x.clone(), m as usize)
            } else {
                num_traits::pow(x.recip(), m.unsigned_abs() as usize)
            };
            total += w * p;
        }
        Some(total)
    }
}

/// Values `f_j^{(i)}(x)` for `1 ≤ i ≤ order`, `1 ≤ j ≤ n` and every point
/// `x` of a measure's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    order: usize,
    n: usize,
    // values[i][j][s]
    values: Vec<Vec<Vec<BigRational>>>,
}

impl FunctionTable {
    /// Tabulates `f(i, j, x)` (1-based `i`, `j`) on the support of `mu`.
    pub fn from_fn(
        order: usize,
        n: usize,
        mu: &DiscreteMeasure,
        f: impl Fn(usize, usize, &BigRational) -> BigRational,
    ) -> Self {
        let values =
            (1..=order).map(|i| (1..=n).map(|j| mu.support.iter().map(|x| f(i, j, x)).collect()).collect()).collect();
        Self { order, n, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, j: usize, s: usize) -> &BigRational {
        &self.values[i][j][s]
    }
}

/// Ordinary determinant by fraction-exact Gaussian elimination.
fn matrix_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

fn check_table(mu: &DiscreteMeasure, f: &FunctionTable, n: usize) -> Result<()> {
    if f.n != n || f.values.iter().flatten().any(|col| col.len() != mu.support.len()) {
        return Err(Error::InvalidParameter("function table does not match the measure and n".into()));
    }
    Ok(())
}

/// `(1/n!) Σ_{x₁..xₙ} ∏ w · ∏ᵢ det(f_j^{(i)}(x_r))`, summed over all
/// `n`-tuples of support points.
pub fn heine_lhs(mu: &DiscreteMeasure, f: &FunctionTable, n: usize) -> Result<BigRational> {
    check_table(mu, f, n)?;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let s = mu.support.len();
    if s == 0 {
        return Ok(BigRational::zero());
    }
    let mut pick = vec![0usize; n];
    let mut total = BigRational::zero();
    'outer: loop {
        let mut term: BigRational = pick.iter().map(|&p| mu.weights[p].clone()).product();
        for i in 0..f.order {
            if term.is_zero() {
                break;
            }
            let m = pick.iter().map(|&p| (0..n).map(|j| f.at(i, j, p).clone()).collect()).collect();
            term *= matrix_det(m);
        }
        total += term;
        for r in (0..n).rev() {
            pick[r] += 1;
            if pick[r] < s {
                continue 'outer;
            }
            pick[r] = 0;
        }
        break;
    }
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    Ok(total / BigRational::from_integer(fact))
}

/// Tensor of mixed moments `Σ w · f_{i₁}^{(1)}(x) ⋯ f_{i_p}^{(p)}(x)`.
pub fn moment_tensor(mu: &DiscreteMeasure, f: &FunctionTable) -> DenseTensor {
    DenseTensor::from_fn(f.order, f.n, |idx| {
        let mut total = BigRational::zero();
        for (s, w) in mu.weights.iter().enumerate() {
            let mut prod = w.clone();
            for (i, &j) in idx.iter().enumerate() {
                prod *= f.at(i, j - 1, s);
            }
            total += prod;
        }
        total
    })
}

/// Hyperdeterminant of the mixed-moment tensor.
pub fn heine_rhs(mu: &DiscreteMeasure, f: &FunctionTable, n: usize) -> Result<BigRational> {
    check_table(mu, f, n)?;
    if n == 0 {
        return Ok(BigRational::one());
    }
    det_direct(&moment_tensor(mu, f))
}

/// Convenience for tests and callers holding integer data.
pub fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperdet::hankel_tensor;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(n: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), Coefficient::from(*c)))).unwrap()
    }

    #[test]
    fn small_vandermonde_powers() {
        assert_eq!(vandermonde_power(2, 2).unwrap(), poly(2, &[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1)]));
        assert_eq!(
            vandermonde_power(2, 3).unwrap(),
            poly(2, &[(&[3, 0], 1), (&[2, 1], -3), (&[1, 2], 3), (&[0, 3], -1)])
        );
        let v = vandermonde_power(3, 1).unwrap();
        assert_eq!(v.len(), 6);
        assert!(v.sorted_terms().values().all(|c| c.abs() == Coefficient::one()));
        assert_eq!(v.coeff(&[2, 1, 0]), Coefficient::one());
        assert_eq!(vandermonde_power(1, 7).unwrap(), SparsePolynomial::one(1));
        assert_eq!(vandermonde_power(3, 0).unwrap(), SparsePolynomial::one(3));
    }

    #[test]
    fn vandermonde_powers_multiply() {
        for n in 2..=4 {
            let a = vandermonde_power(n, 1).unwrap();
            let b = vandermonde_power(n, 2).unwrap();
            assert_eq!(a.mul(&b), vandermonde_power(n, 3).unwrap());
        }
    }

    #[test]
    fn budget_refusal() {
        let err = vandermonde_power_with_budget(4, 3, 50).unwrap_err();
        assert!(matches!(err, Error::SizeGuard { .. }));
    }

    #[test]
    fn bruteforce_small() {
        let e = schur_expansion_bruteforce(2, 1).unwrap();
        let got: Vec<(Vec<i64>, Coefficient)> =
            e.terms().iter().map(|(p, c)| (p.parts().to_vec(), c.clone())).collect();
        assert_eq!(got, vec![(vec![2, 0], Coefficient::from(1)), (vec![1, 1], Coefficient::from(-3))]);
        for k in 1..4 {
            let e = schur_expansion_bruteforce(1, k).unwrap();
            assert_eq!(e.terms(), &[(Partition::new(vec![0]).unwrap(), Coefficient::one())]);
        }
        let e = schur_expansion_bruteforce(3, 1).unwrap();
        assert_eq!(e.len(), 5);
        assert_eq!(e.get(&Partition::new(vec![4, 1, 1]).unwrap()), Some(&Coefficient::from(-3)));
    }

    #[test]
    fn determinant_by_elimination() {
        let m = |rows: &[&[i64]]| rows.iter().map(|r| r.iter().map(|&x| rational(x)).collect()).collect();
        assert_eq!(matrix_det(m(&[&[1, 2], &[3, 4]])), rational(-2));
        assert_eq!(matrix_det(m(&[&[0, 1], &[1, 0]])), rational(-1));
        assert_eq!(matrix_det(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])), rational(0));
        assert_eq!(matrix_det(m(&[&[0, 0, 2], &[0, 3, 0], &[5, 0, 0]])), rational(-30));
    }

    fn monomial_table(order: usize, n: usize, mu: &DiscreteMeasure, exps: &[Vec<usize>]) -> FunctionTable {
        FunctionTable::from_fn(order, n, mu, |i, j, x| num_traits::pow(x.clone(), exps[i - 1][j - 1]))
    }

    #[test]
    fn heine_degenerate_cases() {
        let mu = DiscreteMeasure::new(vec![rational(2)], vec![rational(3)]).unwrap();
        let f = monomial_table(4, 2, &mu, &vec![vec![0, 1]; 4]);
        assert!(heine_lhs(&mu, &f, 2).unwrap().is_zero());
        assert!(heine_rhs(&mu, &f, 2).unwrap().is_zero());
        let f0 = FunctionTable::from_fn(4, 0, &mu, |_, _, _| rational(0));
        assert_eq!(heine_lhs(&mu, &f0, 0).unwrap(), rational(1));
        assert_eq!(heine_rhs(&mu, &f0, 0).unwrap(), rational(1));
    }

    #[test]
    fn heine_identity_on_random_measures() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for case in 0..12 {
            let size = 2 + case % 2;
            let n = 1 + case % 3;
            let mut support: Vec<BigRational> = Vec::new();
            while support.len() < size {
                let x = BigRational::new(BigInt::from(rng.gen_range(-4..=4)), BigInt::from(rng.gen_range(1..=3)));
                if !support.contains(&x) {
                    support.push(x);
                }
            }
            let weights = (0..size).map(|_| rational(rng.gen_range(-3..=3))).collect();
            let mu = DiscreteMeasure::new(support, weights).unwrap();
            let exps: Vec<Vec<usize>> = (0..4).map(|_| (0..n).map(|_| rng.gen_range(0..4)).collect()).collect();
            let f = monomial_table(4, n, &mu, &exps);
            assert_eq!(heine_lhs(&mu, &f, n).unwrap(), heine_rhs(&mu, &f, n).unwrap(), "case {case}");
        }
    }

    #[test]
    fn moment_tensor_is_shifted_hankel() {
        let mu = DiscreteMeasure::new(
            vec![rational(1), rational(2), rational(-1)],
            vec![rational(1), rational(2), rational(5)],
        )
        .unwrap();
        let lambda = [2i64, 1, 0];
        let n = lambda.len();
        let f = FunctionTable::from_fn(4, n, &mu, |i, j, x| {
            let e = if i == 1 { lambda[n - j] as usize + j - 1 } else { j - 1 };
            num_traits::pow(x.clone(), e)
        });
        let mut shifts = vec![vec![0i64; n]; 4];
        shifts[0] = lambda.iter().rev().copied().collect();
        let hankel = hankel_tensor(|m| mu.moment(m), n, &shifts).unwrap();
        assert_eq!(moment_tensor(&mu, &f), hankel);
        assert_eq!(heine_rhs(&mu, &f, n).unwrap(), det_direct(&hankel).unwrap());
        assert_eq!(heine_lhs(&mu, &f, n).unwrap(), heine_rhs(&mu, &f, n).unwrap());
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![rational(1), rational(1)], vec![rational(1), rational(1)]).is_err());
        assert!(DiscreteMeasure::new(vec![rational(1)], vec![]).is_err());
        let mu = DiscreteMeasure::new(vec![rational(0)], vec![rational(1)]).unwrap();
        assert_eq!(mu.moment(0), Some(rational(1)));
        assert_eq!(mu.moment(-1), None);
    }
}
