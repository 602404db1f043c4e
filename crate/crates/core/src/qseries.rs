//! q-combinatorics: Gaussian binomials, subspace-lattice Möbius coefficients,
//! and the q-product calculus on homogeneous forms whose coefficients depend
//! on an integer parameter `m`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::poly::HomogeneousPoly;

/// `k choose 2`, zero for `k < 2`.
pub fn binom2(k: i64) -> i64 {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

/// `q^e` as an exact rational; `e` may be negative.
pub fn qpow(q: i64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        Pow::pow(base, e as u64)
    } else {
        Pow::pow(base.recip(), (-e) as u64)
    }
}

fn qpow_int(q: i64, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    Pow::pow(BigInt::from(q), e as u64)
}

/// The Gaussian binomial `[a choose b]_q`, the number of `b`-dimensional
/// subspaces of `F_q^a`. Zero outside `0 <= b <= a`.
pub fn gaussian_binomial(a: i64, b: i64, q: i64) -> BigInt {
    assert!(q >= 2, "Gaussian binomials need q >= 2");
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    // every partial product is itself [a choose i+1]_q, so each division is exact
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= qpow_int(q, a - i) - 1;
        acc /= qpow_int(q, i + 1) - 1;
    }
    acc
}

/// `(-1)^k q^{k choose 2}`, the Möbius function of an interval of height `k`
/// in the subspace lattice.
pub fn moebius_coefficient(k: i64, q: i64) -> BigInt {
    let magnitude = qpow_int(q, binom2(k));
    if k % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

type CoeffFn = dyn Fn(i64) -> Vec<BigRational> + Send + Sync;

/// A homogeneous form `sum_i a_i(m) x^{r-i} y^i` whose coefficients are
/// functions of the integer `m`, evaluated lazily and memoised.
#[derive(Clone)]
pub struct HomogeneousMPoly {
    degree: usize,
    oracle: Arc<CoeffFn>,
    memo: Arc<Mutex<HashMap<i64, Arc<Vec<BigRational>>>>>,
}

impl fmt::Debug for HomogeneousMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomogeneousMPoly").field("degree", &self.degree).finish_non_exhaustive()
    }
}

impl HomogeneousMPoly {
    /// `f(m)` must return exactly `degree + 1` coefficients.
    pub fn from_fn<F>(degree: usize, f: F) -> Self
    where
        F: Fn(i64) -> Vec<BigRational> + Send + Sync + 'static,
    {
        HomogeneousMPoly { degree, oracle: Arc::new(f), memo: Arc::default() }
    }

    /// A form whose coefficients do not depend on `m`.
    pub fn constant(p: HomogeneousPoly) -> Self {
        let degree = p.degree();
        let coeffs = p.coeffs().to_vec();
        Self::from_fn(degree, move |_| coeffs.clone())
    }

    pub fn from_integers<I: Into<BigInt>, T: IntoIterator<Item = I>>(coeffs: T) -> Self {
        Self::constant(HomogeneousPoly::from_integers(coeffs))
    }

    pub fn one() -> Self {
        Self::from_integers([1])
    }

    pub fn x() -> Self {
        Self::from_integers([1, 0])
    }

    pub fn y() -> Self {
        Self::from_integers([0, 1])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs_at(&self, m: i64) -> Arc<Vec<BigRational>> {
        if let Some(c) = self.memo.lock().unwrap().get(&m) {
            return c.clone();
        }
        let computed = (self.oracle)(m);
        assert_eq!(computed.len(), self.degree + 1, "coefficient oracle returned the wrong length");
        let computed = Arc::new(computed);
        self.memo.lock().unwrap().entry(m).or_insert(computed).clone()
    }

    /// The form at a fixed `m`.
    pub fn at(&self, m: i64) -> HomogeneousPoly {
        HomogeneousPoly::new(self.coeffs_at(m).as_ref().clone())
    }

    /// Ordinary scalar multiple by `c(m)`.
    pub fn scale_by<F>(&self, c: F) -> Self
    where
        F: Fn(i64) -> BigRational + Send + Sync + 'static,
    {
        let inner = self.clone();
        Self::from_fn(self.degree, move |m| {
            let k = c(m);
            inner.coeffs_at(m).iter().map(|a| a * &k).collect()
        })
    }

    /// Coefficientwise sum of forms of equal degree.
    pub fn sum(terms: Vec<HomogeneousMPoly>) -> Self {
        let degree = terms.first().map_or(0, |t| t.degree);
        assert!(terms.iter().all(|t| t.degree == degree), "summing forms of different degree");
        Self::from_fn(degree, move |m| {
            let mut acc = vec![BigRational::zero(); degree + 1];
            for t in &terms {
                for (slot, c) in acc.iter_mut().zip(t.coeffs_at(m).iter()) {
                    *slot += c;
                }
            }
            acc
        })
    }
}

/// The q-product `a * b`: degree `r + s`, with
/// `c_u(m) = sum_i q^{i s} a_i(m) b_{u-i}(m - i)`. Not commutative.
pub fn q_product(a: &HomogeneousMPoly, b: &HomogeneousMPoly, q: i64) -> HomogeneousMPoly {
    let (r, s) = (a.degree, b.degree);
    let (a, b) = (a.clone(), b.clone());
    HomogeneousMPoly::from_fn(r + s, move |m| {
        let ac = a.coeffs_at(m);
        (0..=r + s)
            .map(|u| {
                let mut c = BigRational::zero();
                for i in u.saturating_sub(s)..=u.min(r) {
                    if ac[i].is_zero() {
                        continue;
                    }
                    let bc = b.coeffs_at(m - i as i64);
                    if bc[u - i].is_zero() {
                        continue;
                    }
                    c += qpow(q, (i * s) as i64) * &ac[i] * &bc[u - i];
                }
                c
            })
            .collect()
    })
}

/// `a^{[0]} = 1`, `a^{[n]} = a^{[n-1]} * a`.
pub fn q_power(a: &HomogeneousMPoly, n: i64, q: i64) -> Result<HomogeneousMPoly> {
    if n < 0 {
        return Err(Error::NegativeExponent(n));
    }
    let mut acc = HomogeneousMPoly::one();
    for _ in 0..n {
        acc = q_product(&acc, a, q);
    }
    Ok(acc)
}

/// The q-transform `sum_i a_i(m) y^{[i]} * x^{[r-i]}`.
pub fn q_transform(a: &HomogeneousMPoly, q: i64) -> HomogeneousMPoly {
    q_transform_with(a, &HomogeneousMPoly::x(), &HomogeneousMPoly::y(), q)
}

/// The q-transform with `x` and `y` replaced by the forms `x_arg` and `y_arg`:
/// `sum_i a_i(m) y_arg^{[i]} * x_arg^{[r-i]}`. Both arguments must have equal degree.
pub fn q_transform_with(a: &HomogeneousMPoly, x_arg: &HomogeneousMPoly, y_arg: &HomogeneousMPoly, q: i64) -> HomogeneousMPoly {
    assert_eq!(x_arg.degree, y_arg.degree, "transform arguments must have equal degree");
    let r = a.degree;
    let basis: Vec<HomogeneousMPoly> = (0..=r)
        .map(|i| {
            let yp = q_power(y_arg, i as i64, q).expect("non-negative");
            let xp = q_power(x_arg, (r - i) as i64, q).expect("non-negative");
            q_product(&yp, &xp, q)
        })
        .collect();
    let degree = r * x_arg.degree;
    let a = a.clone();
    HomogeneousMPoly::from_fn(degree, move |m| {
        let ac = a.coeffs_at(m);
        let mut acc = vec![BigRational::zero(); degree + 1];
        for (ai, h) in ac.iter().zip(&basis) {
            if ai.is_zero() {
                continue;
            }
            for (slot, c) in acc.iter_mut().zip(h.coeffs_at(m).iter()) {
                *slot += ai * c;
            }
        }
        acc
    })
}

/// `x + (q^m - 1) y`.
pub fn x_plus_shifted_y(q: i64) -> HomogeneousMPoly {
    HomogeneousMPoly::from_fn(1, move |m| vec![BigRational::one(), qpow(q, m) - BigRational::one()])
}

/// `x - y`.
pub fn x_minus_y() -> HomogeneousMPoly {
    HomogeneousMPoly::from_integers([1, -1])
}

/// `P_j(i; m, n) = sum_l [i, l]_q [n-i, j-l]_q (-1)^l q^{l choose 2} q^{l(n-i)}
/// prod_{u < j-l} (q^{m-l} - q^u)`, the coefficient of `y^j x^{n-j}` in
/// `(x-y)^{[i]} * (x + (q^m-1) y)^{[n-i]}`.
pub fn p_j_coeff(i: i64, j: i64, m: i64, n: i64, q: i64) -> Result<BigInt> {
    let mut total = BigRational::zero();
    for l in 0..=j {
        let g = gaussian_binomial(i, l, q) * gaussian_binomial(n - i, j - l, q);
        if g.is_zero() {
            continue;
        }
        let mut term = BigRational::from_integer(g * moebius_coefficient(l, q)) * qpow(q, l * (n - i));
        for u in 0..j - l {
            term *= qpow(q, m - l) - qpow(q, u);
        }
        total += term;
    }
    if !total.is_integer() {
        return Err(Error::NonIntegralResult(format!("P_{j}({i}; {m}, {n}) = {total}")));
    }
    Ok(total.to_integer())
}

/// The inner kernel of the dual-enumerator formula for a subspace of
/// dimension `s`: `sum_l [n-s, j-l]_q [n-j+l, l]_q (-1)^l q^{l choose 2} q^{m(j-l)}`.
pub fn dual_enumerator_kernel(s: i64, j: i64, m: i64, n: i64, q: i64) -> BigInt {
    (0..=j)
        .map(|l| {
            gaussian_binomial(n - s, j - l, q)
                * gaussian_binomial(n - j + l, l, q)
                * moebius_coefficient(l, q)
                * qpow_int(q, m * (j - l))
        })
        .sum()
}
