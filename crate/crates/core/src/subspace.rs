//! Subspaces of `E = F_q^n` in canonical form, and the subspace lattice.
//!
//! A [`Subspace`] is stored as its RREF basis with zero rows removed, so two
//! values are equal exactly when they describe the same subspace.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gf::{FieldContext, FieldElement};
use crate::matrix::{kernel_of_rows, rank_of_rows, rref_rows, MatrixFq};
use crate::qseries::gaussian_binomial;

/// Largest lattice [`Lattice::shared`] will materialise.
pub const LATTICE_LIMIT: u64 = 1 << 22;

#[derive(Clone)]
pub struct Subspace {
    n: usize,
    ctx: Arc<FieldContext>,
    basis: Vec<Vec<FieldElement>>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.basis == other.basis && self.ctx == other.ctx
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.basis.hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// By ambient dimension, then dimension, then the canonical basis entries.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.basis.len(), &self.basis).cmp(&(other.n, other.basis.len(), &other.basis))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, [{}])", self.n, self.key())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl Subspace {
    fn from_reduced(ctx: &Arc<FieldContext>, n: usize, mut rows: Vec<Vec<FieldElement>>) -> Self {
        let rank = rref_rows(ctx, &mut rows, n).len();
        rows.truncate(rank);
        Subspace { n, ctx: ctx.clone(), basis: rows }
    }

    /// The span of `vectors` in `F_q^n`.
    pub fn span(ctx: &Arc<FieldContext>, n: usize, vectors: &[Vec<FieldElement>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: v.len() });
        }
        Ok(Self::from_reduced(ctx, n, vectors.to_vec()))
    }

    /// Like [`Subspace::span`] for integer-encoded vectors.
    pub fn span_of_rows(ctx: &Arc<FieldContext>, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| r.iter().map(|&v| ctx.element(v as u64)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::span(ctx, n, &vectors)
    }

    pub fn zero(ctx: &Arc<FieldContext>, n: usize) -> Self {
        Subspace { n, ctx: ctx.clone(), basis: Vec::new() }
    }

    pub fn full(ctx: &Arc<FieldContext>, n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut row = vec![FieldElement::ZERO; n];
                row[i] = FieldElement::ONE;
                row
            })
            .collect();
        Subspace { n, ctx: ctx.clone(), basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<u32>> {
        self.basis.iter().map(|r| r.iter().map(|x| x.value()).collect()).collect()
    }

    pub fn basis_matrix(&self) -> MatrixFq {
        MatrixFq::new(&self.ctx, self.dim(), self.n, self.basis.concat()).expect("basis rows have length n")
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Canonical text form: rows of the RREF basis joined by `;`, entries by `,`.
    /// The zero subspace is the empty string.
    pub fn key(&self) -> String {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| x.value().to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses rows in the [`Subspace::key`] format. The rows need not be reduced.
    pub fn parse(ctx: &Arc<FieldContext>, n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::zero(ctx, n));
        }
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(format!("bad entry {x:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::span_of_rows(ctx, n, &rows)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.ctx != other.ctx {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[FieldElement]) -> Result<bool> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: v.len() });
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Ok(rank_of_rows(&self.ctx, &rows, self.n) == self.dim())
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        let rows: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(rank_of_rows(&self.ctx, &rows, self.n) == self.dim())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::from_reduced(&self.ctx, self.n, rows))
    }

    /// `A ∩ B = (A^⊥ + B^⊥)^⊥`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(self.orthogonal_complement().sum(&other.orthogonal_complement())?.orthogonal_complement())
    }

    /// `{y : x·y = 0 for all x in self}` under the standard dot product.
    pub fn orthogonal_complement(&self) -> Self {
        Subspace {
            n: self.n,
            ctx: self.ctx.clone(),
            basis: kernel_of_rows(&self.ctx, &self.basis, self.n),
        }
    }
}

/// Number of subspaces of `F_q^n`, optionally only those of one dimension.
pub fn count_subspaces(n: usize, q: u32, dim: Option<usize>) -> num_bigint::BigInt {
    match dim {
        Some(d) => gaussian_binomial(n as i64, d as i64, q as i64),
        None => (0..=n).map(|d| gaussian_binomial(n as i64, d as i64, q as i64)).sum(),
    }
}

/// All subspaces of `F_q^n` of dimension `d`, in canonical order.
fn subspaces_of_dim(ctx: &Arc<FieldContext>, n: usize, d: usize) -> Vec<Subspace> {
    let q = ctx.q();
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // entries right of each pivot that are not themselves pivot columns
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut fill = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![FieldElement::ZERO; n]; d];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = FieldElement::ONE;
            }
            for (&(r, c), &v) in free.iter().zip(&fill) {
                rows[r][c] = ctx.element(v as u64).unwrap();
            }
            out.push(Subspace { n, ctx: ctx.clone(), basis: rows });

            let Some(pos) = fill.iter().position(|&v| v + 1 < q) else {
                break;
            };
            fill[pos] += 1;
            fill[..pos].iter_mut().for_each(|v| *v = 0);
        }
        // next d-combination of 0..n
        let Some(i) = (0..d).rev().find(|&i| pivots[i] < n - d + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..d {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out.sort();
    out
}

/// Streams every subspace of `F_q^n` once, by dimension and then by canonical
/// basis. With `dim_filter` only that dimension is produced.
pub fn enumerate_subspaces(ctx: &Arc<FieldContext>, n: usize, dim_filter: Option<usize>) -> SubspaceIter {
    let dims: Vec<usize> = match dim_filter {
        Some(d) if d <= n => vec![d],
        Some(_) => Vec::new(),
        None => (0..=n).collect(),
    };
    SubspaceIter { ctx: ctx.clone(), n, dims: dims.into_iter(), current: Vec::new().into_iter() }
}

pub struct SubspaceIter {
    ctx: Arc<FieldContext>,
    n: usize,
    dims: std::vec::IntoIter<usize>,
    current: std::vec::IntoIter<Subspace>,
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            if let Some(s) = self.current.next() {
                return Some(s);
            }
            let d = self.dims.next()?;
            self.current = subspaces_of_dim(&self.ctx, self.n, d).into_iter();
        }
    }
}

/// The materialised lattice `Σ(F_q^n)` with complement, join and meet indices.
pub struct Lattice {
    n: usize,
    ctx: Arc<FieldContext>,
    subspaces: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    perp: Vec<usize>,
    ops: OnceLock<LatticeOps>,
}

struct LatticeOps {
    join: Vec<u32>,
    meet: Vec<u32>,
    /// `below[i]` lists the indices of all subspaces of `subspaces[i]`.
    below: Vec<Vec<u32>>,
}

type LatticeKey = (usize, u32, u32, Vec<u32>);

impl Lattice {
    pub fn new(ctx: &Arc<FieldContext>, n: usize) -> Result<Self> {
        let size = count_subspaces(n, ctx.q(), None);
        if size.to_u64().is_none_or(|s| s > LATTICE_LIMIT) {
            return Err(Error::BudgetExceeded { needed: size.to_string(), budget: LATTICE_LIMIT });
        }
        let subspaces: Vec<Subspace> = enumerate_subspaces(ctx, n, None).collect();
        let index: HashMap<Subspace, usize> = subspaces.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let perp = subspaces.iter().map(|s| index[&s.orthogonal_complement()]).collect();
        Ok(Lattice { n, ctx: ctx.clone(), subspaces, index, perp, ops: OnceLock::new() })
    }

    /// A process-wide cached lattice for `(ctx, n)`.
    pub fn shared(ctx: &Arc<FieldContext>, n: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<LatticeKey, Arc<Lattice>>>> = OnceLock::new();
        let key = (n, ctx.p(), ctx.e(), ctx.modulus().to_vec());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(l) = cache.lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        let built = Arc::new(Lattice::new(ctx, n)?);
        Ok(cache.lock().unwrap().entry(key).or_insert(built).clone())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn full_index(&self) -> usize {
        self.subspaces.len() - 1
    }

    pub fn perp(&self, i: usize) -> usize {
        self.perp[i]
    }

    fn ops(&self) -> &LatticeOps {
        self.ops.get_or_init(|| {
            let len = self.len();
            let mut join = vec![0u32; len * len];
            let mut meet = vec![0u32; len * len];
            let mut below = vec![Vec::new(); len];
            for i in 0..len {
                for j in i..len {
                    let (a, b) = (&self.subspaces[i], &self.subspaces[j]);
                    let s = self.index[&a.sum(b).unwrap()] as u32;
                    let m = self.index[&a.intersect(b).unwrap()] as u32;
                    join[i * len + j] = s;
                    join[j * len + i] = s;
                    meet[i * len + j] = m;
                    meet[j * len + i] = m;
                    if m as usize == i {
                        below[j].push(i as u32);
                    }
                    if m as usize == j && i != j {
                        below[i].push(j as u32);
                    }
                }
            }
            for b in below.iter_mut() {
                b.sort_unstable();
            }
            LatticeOps { join, meet, below }
        })
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.ops().join[i * self.len() + j] as usize
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.ops().meet[i * self.len() + j] as usize
    }

    /// Indices of the subspaces contained in `subspaces[i]`, including itself.
    pub fn below(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.ops().below[i].iter().map(|&j| j as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Arc<FieldContext> {
        FieldContext::of_order(q).unwrap()
    }

    fn sp(ctx: &Arc<FieldContext>, n: usize, text: &str) -> Subspace {
        Subspace::parse(ctx, n, text).unwrap()
    }

    #[test]
    fn span_examples() {
        let k = f(2);
        let z = Subspace::span(&k, 3, &[]).unwrap();
        assert_eq!(z.dim(), 0);
        assert_eq!(z.key(), "");
        assert_eq!(sp(&k, 2, "1,0;1,0").dim(), 1);
        assert_eq!(sp(&k, 2, "1,1;0,1"), Subspace::full(&k, 2));
        assert_eq!(
            Subspace::span_of_rows(&k, 2, &[vec![1, 0, 0]]).unwrap_err(),
            Error::LengthMismatch { expected: 2, found: 3 }
        );
    }

    #[test]
    fn lattice_op_examples() {
        let k = f(2);
        let x = sp(&k, 2, "1,1");
        assert_eq!(x.sum(&Subspace::zero(&k, 2)).unwrap(), x);
        let (e1, e2) = (sp(&k, 2, "1,0"), sp(&k, 2, "0,1"));
        assert!(e1.intersect(&e2).unwrap().is_zero());
        assert_eq!(e1.sum(&x).unwrap(), Subspace::full(&k, 2));
        assert!(e1.intersect(&x).unwrap().is_zero());
        assert!(Subspace::full(&k, 2).contains(&e1).unwrap());
        assert!(!e1.contains(&e2).unwrap());
        assert_eq!(e1.sum(&Subspace::zero(&k, 3)).unwrap_err(), Error::AmbientMismatch);
    }

    #[test]
    fn complement_examples() {
        let k = f(2);
        assert_eq!(Subspace::zero(&k, 2).orthogonal_complement(), Subspace::full(&k, 2));
        assert_eq!(sp(&k, 2, "1,0").orthogonal_complement(), sp(&k, 2, "0,1"));
        let d = sp(&k, 2, "1,1");
        assert_eq!(d.orthogonal_complement(), d);
    }

    #[test]
    fn enumeration_counts() {
        let k2 = f(2);
        assert_eq!(enumerate_subspaces(&k2, 1, None).count(), 2);
        assert_eq!(enumerate_subspaces(&k2, 2, None).count(), 5);
        assert_eq!(enumerate_subspaces(&k2, 4, None).count(), 67);
        assert_eq!(enumerate_subspaces(&k2, 4, Some(2)).count(), 35);
        assert_eq!(enumerate_subspaces(&k2, 4, Some(5)).count(), 0);
        for q in [2u64, 3] {
            let k = f(q);
            for n in 0..=5 {
                let listed = enumerate_subspaces(&k, n, None).count();
                assert_eq!(listed.to_string(), count_subspaces(n, q as u32, None).to_string());
            }
        }
    }

    #[test]
    fn enumeration_order_and_canonicity() {
        let k = f(3);
        let all: Vec<_> = enumerate_subspaces(&k, 3, None).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for s in &all {
            assert_eq!(&Subspace::span(&k, 3, s.basis()).unwrap(), s);
            assert_eq!(&Subspace::parse(&k, 3, &s.key()).unwrap(), s);
        }
    }

    #[test]
    fn modular_law_and_duality_exhaustive() {
        for q in [2u64, 3] {
            let k = f(q);
            for n in 0..=3 {
                let all: Vec<_> = enumerate_subspaces(&k, n, None).collect();
                for a in &all {
                    let ap = a.orthogonal_complement();
                    assert_eq!(ap.dim(), n - a.dim());
                    assert_eq!(&ap.orthogonal_complement(), a);
                    for b in &all {
                        let (s, m) = (a.sum(b).unwrap(), a.intersect(b).unwrap());
                        assert_eq!(a.dim() + b.dim(), s.dim() + m.dim());
                        let bp = b.orthogonal_complement();
                        assert_eq!(m.orthogonal_complement(), ap.sum(&bp).unwrap());
                        if b.contains(a).unwrap() {
                            assert!(ap.contains(&bp).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_tables() {
        let k = f(2);
        let l = Lattice::shared(&k, 3).unwrap();
        assert_eq!(l.len(), 16);
        assert!(l.get(l.zero_index()).is_zero());
        assert_eq!(l.get(l.full_index()).dim(), 3);
        for i in 0..l.len() {
            assert_eq!(l.get(l.perp(i)), &l.get(i).orthogonal_complement());
            assert_eq!(l.below(i).count(), count_subspaces(l.get(i).dim(), 2, None).to_usize().unwrap());
            for j in 0..l.len() {
                assert_eq!(l.get(l.join(i, j)), &l.get(i).sum(l.get(j)).unwrap());
            }
        }
        assert!(Arc::ptr_eq(&l, &Lattice::shared(&k, 3).unwrap()));
    }

    #[test]
    fn f2_six_enumerates_quickly() {
        let k = f(2);
        let start = std::time::Instant::now();
        assert_eq!(enumerate_subspaces(&k, 6, None).count(), 2825);
        assert!(start.elapsed().as_secs_f64() < 1.0);
    }
}
