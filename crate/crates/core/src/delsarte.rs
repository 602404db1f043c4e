//! Delsarte rank-metric codes: `F_q`-linear subspaces of `Mat(n x m, F_q)`.
//!
//! A code is stored by the RREF basis of its vectorisation in `F_q^{nm}`
//! (row-major), so equal codes have identical representations.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{prime_power, FieldContext, FieldElement};
use crate::matrix::{dot, kernel_of_rows, rank_of_rows, rref_rows, MatrixFq};
use crate::poly::HomogeneousPoly;
use crate::subspace::{enumerate_subspaces, Subspace};

/// Default cap on the number of codewords any single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone)]
pub struct RankMetricCode {
    n: usize,
    m: usize,
    ctx: Arc<FieldContext>,
    basis: Vec<Vec<FieldElement>>,
}

impl PartialEq for RankMetricCode {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.m) == (other.n, other.m) && self.basis == other.basis && self.ctx == other.ctx
    }
}

impl Eq for RankMetricCode {}

impl std::fmt::Debug for RankMetricCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RankMetricCode({}x{} over F_{}, k={}, {:?})", self.n, self.m, self.ctx.q(), self.dim(), self.basis_rows())
    }
}

/// `A_0..A_n`: how many codewords have each rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RankDistribution {
    pub counts: Vec<u64>,
}

impl RankDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `W(x, y) = sum_i A_i x^{n-i} y^i`.
    pub fn enumerator(&self) -> HomogeneousPoly {
        HomogeneousPoly::from_integers(self.counts.iter().copied())
    }
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::ShapeMismatch { expected: "a positive matrix shape".into(), found: format!("{n}x{m}") });
    }
    Ok(())
}

fn checked_size(q: u32, k: usize) -> Option<u64> {
    (q as u64).checked_pow(k as u32)
}

impl RankMetricCode {
    /// The span of vectorised matrices (length `n*m`, row-major).
    pub fn from_vectors(ctx: &Arc<FieldContext>, n: usize, m: usize, vectors: Vec<Vec<FieldElement>>) -> Result<Self> {
        check_shape(n, m)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != n * m) {
            return Err(Error::LengthMismatch { expected: n * m, found: v.len() });
        }
        let mut rows = vectors;
        let k = rref_rows(ctx, &mut rows, n * m).len();
        rows.truncate(k);
        Ok(RankMetricCode { n, m, ctx: ctx.clone(), basis: rows })
    }

    /// The code spanned by `generators`; dependent generators are dropped.
    pub fn from_generators(ctx: &Arc<FieldContext>, n: usize, m: usize, generators: &[MatrixFq]) -> Result<Self> {
        for g in generators {
            if g.context() != ctx {
                return Err(Error::FieldMismatch);
            }
            if (g.rows(), g.cols()) != (n, m) {
                return Err(Error::ShapeMismatch {
                    expected: format!("{n}x{m}"),
                    found: format!("{}x{}", g.rows(), g.cols()),
                });
            }
        }
        Self::from_vectors(ctx, n, m, generators.iter().map(|g| g.entries().to_vec()).collect())
    }

    /// Reads a subspace of `F_q^{nm}` as a code.
    pub fn from_subspace(space: &Subspace, n: usize, m: usize) -> Result<Self> {
        if space.ambient_dim() != n * m {
            return Err(Error::LengthMismatch { expected: n * m, found: space.ambient_dim() });
        }
        check_shape(n, m)?;
        Ok(RankMetricCode { n, m, ctx: space.context().clone(), basis: space.basis().to_vec() })
    }

    pub fn zero(ctx: &Arc<FieldContext>, n: usize, m: usize) -> Result<Self> {
        Self::from_vectors(ctx, n, m, Vec::new())
    }

    /// All of `Mat(n x m, F_q)`.
    pub fn full(ctx: &Arc<FieldContext>, n: usize, m: usize) -> Result<Self> {
        Self::from_subspace(&Subspace::full(ctx, n * m), n, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// `dim_{F_q} C`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_vectors(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<u32>> {
        self.basis.iter().map(|r| r.iter().map(|x| x.value()).collect()).collect()
    }

    pub fn basis_matrices(&self) -> Vec<MatrixFq> {
        self.basis.iter().map(|v| self.to_matrix(v)).collect()
    }

    /// The code as a subspace of `F_q^{nm}`.
    pub fn as_subspace(&self) -> Subspace {
        Subspace::span(&self.ctx, self.n * self.m, &self.basis).expect("basis vectors have length nm")
    }

    pub fn to_matrix(&self, v: &[FieldElement]) -> MatrixFq {
        MatrixFq::new(&self.ctx, self.n, self.m, v.to_vec()).expect("codeword has nm entries")
    }

    /// `|C| = q^k`, if it fits in a `u64`.
    pub fn size(&self) -> Result<u64> {
        checked_size(self.ctx.q(), self.dim()).ok_or(Error::Overflow("code size"))
    }

    fn enumeration_size(&self, budget: u64) -> Result<u64> {
        match checked_size(self.ctx.q(), self.dim()) {
            Some(s) if s <= budget => Ok(s),
            other => Err(Error::BudgetExceeded {
                needed: other.map_or_else(|| format!("{}^{}", self.ctx.q(), self.dim()), |s| s.to_string()),
                budget,
            }),
        }
    }

    /// The codeword with coefficient vector given by the base-`q` digits of `index`.
    fn codeword(&self, mut index: u64) -> Vec<FieldElement> {
        let q = self.ctx.q() as u64;
        let mut v = vec![FieldElement::ZERO; self.n * self.m];
        for b in &self.basis {
            let c = self.ctx.element(index % q).expect("digit is below q");
            index /= q;
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                *x = self.ctx.add(*x, self.ctx.mul(c, y));
            }
        }
        v
    }

    /// Every codeword, vectorised, each exactly once.
    pub fn codewords(&self, budget: u64) -> Result<impl Iterator<Item = Vec<FieldElement>> + '_> {
        let size = self.enumeration_size(budget)?;
        Ok((0..size).map(move |i| self.codeword(i)))
    }

    pub fn codeword_matrices(&self, budget: u64) -> Result<impl Iterator<Item = MatrixFq> + '_> {
        Ok(self.codewords(budget)?.map(move |v| self.to_matrix(&v)))
    }

    fn rank_of(&self, v: &[FieldElement]) -> usize {
        let rows: Vec<Vec<FieldElement>> = v.chunks(self.m).map(<[FieldElement]>::to_vec).collect();
        rank_of_rows(&self.ctx, &rows, self.m)
    }

    /// `col(M)` for a vectorised codeword.
    pub fn column_space_of(&self, v: &[FieldElement]) -> Subspace {
        let cols: Vec<Vec<FieldElement>> = (0..self.m).map(|j| (0..self.n).map(|i| v[i * self.m + j]).collect()).collect();
        Subspace::span(&self.ctx, self.n, &cols).expect("columns have length n")
    }

    /// `C(J) = {M in C : col(M) ⊆ J}`, found by solving the linear conditions
    /// `h · M_j = 0` for every `h` in a basis of `J^⊥` and every column `j`.
    pub fn restrict(&self, space: &Subspace) -> Result<Self> {
        if space.ambient_dim() != self.n || space.context() != &self.ctx {
            return Err(Error::AmbientMismatch);
        }
        let ctx = &self.ctx;
        let perp = space.orthogonal_complement();
        let k = self.dim();
        let mut constraints = Vec::with_capacity(perp.dim() * self.m);
        for h in perp.basis() {
            for j in 0..self.m {
                let row = self
                    .basis
                    .iter()
                    .map(|b| (0..self.n).fold(FieldElement::ZERO, |acc, i| ctx.add(acc, ctx.mul(h[i], b[i * self.m + j]))))
                    .collect();
                constraints.push(row);
            }
        }
        let solutions = kernel_of_rows(ctx, &constraints, k);
        let vectors = solutions
            .iter()
            .map(|c| {
                let mut v = vec![FieldElement::ZERO; self.n * self.m];
                for (&ct, b) in c.iter().zip(&self.basis) {
                    if ct.is_zero() {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = ctx.add(*x, ctx.mul(ct, y));
                    }
                }
                v
            })
            .collect();
        Self::from_vectors(ctx, self.n, self.m, vectors)
    }

    /// The dual under the trace product, which on vectorisations is the dot product.
    pub fn dual(&self) -> Self {
        let basis = kernel_of_rows(&self.ctx, &self.basis, self.n * self.m);
        RankMetricCode { n: self.n, m: self.m, ctx: self.ctx.clone(), basis }
    }

    /// `C + D`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if (self.n, self.m) != (other.n, other.m) || self.ctx != other.ctx {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.n, self.m),
                found: format!("{}x{}", other.n, other.m),
            });
        }
        Self::from_vectors(&self.ctx, self.n, self.m, self.basis.iter().chain(&other.basis).cloned().collect())
    }

    /// Whether `v` (vectorised) lies in the code.
    pub fn contains_vector(&self, v: &[FieldElement]) -> bool {
        let dual = self.dual();
        dual.basis.iter().all(|h| dot(&self.ctx, h, v).is_zero())
    }

    pub fn rank_distribution(&self, budget: u64) -> Result<RankDistribution> {
        let size = self.enumeration_size(budget)?;
        let width = self.n + 1;
        let counts = (0..size)
            .into_par_iter()
            .fold(
                || vec![0u64; width],
                |mut acc, i| {
                    acc[self.rank_of(&self.codeword(i))] += 1;
                    acc
                },
            )
            .reduce(|| vec![0u64; width], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
        Ok(RankDistribution { counts })
    }

    pub fn rank_weight_enumerator(&self, budget: u64) -> Result<HomogeneousPoly> {
        Ok(self.rank_distribution(budget)?.enumerator())
    }

    /// `(A_C(R), B_C(R))`: codewords with column space equal to `R`, and
    /// contained in `R`. `B` comes from `|C(R)|` without enumeration.
    pub fn ambient_counts(&self, space: &Subspace, budget: u64) -> Result<(u64, u64)> {
        let b = self.restrict(space)?.size()?;
        let mut a = 0;
        for v in self.codewords(budget)? {
            if &self.column_space_of(&v) == space {
                a += 1;
            }
        }
        Ok((a, b))
    }

    /// `A_C(R)` for every `R` that occurs, in one pass over the code.
    pub fn column_space_counts(&self, budget: u64) -> Result<HashMap<Subspace, u64>> {
        let mut out = HashMap::new();
        for v in self.codewords(budget)? {
            *out.entry(self.column_space_of(&v)).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// Minimum rank of a nonzero codeword, and whether
    /// `k <= max(n,m) (min(n,m) - d + 1)` holds.
    pub fn min_rank_distance(&self, budget: u64) -> Result<(usize, bool)> {
        if self.dim() == 0 {
            return Err(Error::ZeroCode);
        }
        let dist = self.rank_distribution(budget)?;
        let d = (1..dist.counts.len()).find(|&i| dist.counts[i] > 0).expect("a nonzero code has a nonzero codeword");
        let (lo, hi) = (self.n.min(self.m), self.n.max(self.m));
        Ok((d, self.dim() <= hi * (lo + 1 - d)))
    }

    /// A random code. With `dim` the result has exactly that dimension,
    /// otherwise the dimension is drawn uniformly from `0..=nm`.
    pub fn random<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, n: usize, m: usize, dim: Option<usize>, rng: &mut R) -> Result<Self> {
        check_shape(n, m)?;
        let len = n * m;
        let k = match dim {
            Some(k) if k > len => {
                return Err(Error::ShapeMismatch { expected: format!("dimension at most {len}"), found: k.to_string() })
            }
            Some(k) => k,
            None => rng.random_range(0..=len),
        };
        let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(k);
        while rows.len() < k {
            let v: Vec<FieldElement> = (0..len).map(|_| ctx.element(rng.random_range(0..ctx.q()) as u64).expect("below q")).collect();
            let mut trial = rows.clone();
            trial.push(v.clone());
            if rank_of_rows(ctx, &trial, len) == trial.len() {
                rows.push(v);
            }
        }
        Self::from_vectors(ctx, n, m, rows)
    }

    pub fn to_file(&self, seed: Option<u64>) -> CodeFile {
        CodeFile {
            field: FieldSpec::of(&self.ctx),
            n: self.n,
            m: self.m,
            generators: self.basis_matrices().iter().map(MatrixFq::to_rows).collect(),
            seed,
        }
    }

    /// Canonical JSON, one line with a trailing newline.
    pub fn to_json(&self, seed: Option<u64>) -> String {
        let mut s = serde_json::to_string(&self.to_file(seed)).expect("code files serialise");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(text)?;
        file.to_code()
    }
}

/// Every code in `Mat(n x m, F_q)`, one per subspace of `F_q^{nm}`.
pub fn all_codes(ctx: &Arc<FieldContext>, n: usize, m: usize) -> impl Iterator<Item = RankMetricCode> {
    enumerate_subspaces(ctx, n * m, None).map(move |s| RankMetricCode::from_subspace(&s, n, m).expect("shape matches"))
}

/// The field of a code file: `{"p": 2, "e": 2, "modulus": [1,1,1]}`, or `{"q": 5}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn of(ctx: &FieldContext) -> Self {
        FieldSpec {
            q: None,
            p: Some(ctx.p()),
            e: Some(ctx.e()),
            modulus: (ctx.e() > 1).then(|| ctx.modulus().to_vec()),
        }
    }

    pub fn to_context(&self) -> Result<Arc<FieldContext>> {
        let (p, e) = match (self.p, self.q) {
            (Some(p), None) => (p, self.e.unwrap_or(1)),
            (None, Some(q)) => {
                let (p, e) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
                if self.e.is_some_and(|given| given != e) {
                    return Err(Error::Parse(format!("q = {q} is not p^{}", self.e.unwrap())));
                }
                (p, e)
            }
            (Some(p), Some(q)) => {
                let e = self.e.unwrap_or(1);
                if (p as u64).checked_pow(e) != Some(q) {
                    return Err(Error::Parse(format!("q = {q} does not equal {p}^{e}")));
                }
                (p, e)
            }
            (None, None) => return Err(Error::Parse("field needs \"p\" or \"q\"".into())),
        };
        FieldContext::new(p, e, self.modulus.clone())
    }
}

/// On-disk form of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub field: FieldSpec,
    pub n: usize,
    pub m: usize,
    pub generators: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CodeFile {
    pub fn to_code(&self) -> Result<RankMetricCode> {
        let ctx = self.field.to_context()?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let mat = MatrixFq::from_rows(&ctx, g)?;
                if (mat.rows(), mat.cols()) != (self.n, self.m) {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{}x{}", self.n, self.m),
                        found: format!("{}x{}", mat.rows(), mat.cols()),
                    });
                }
                Ok(mat)
            })
            .collect::<Result<Vec<_>>>()?;
        RankMetricCode::from_generators(&ctx, self.n, self.m, &generators)
    }
}
