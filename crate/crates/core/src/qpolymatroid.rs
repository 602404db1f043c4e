//! (q,r)-polymatroids on the subspace lattice of `F_q^n`, the polymatroid of a
//! rank-metric code, duality, and the rank generating functions `R_P`, `R̂_P`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::delsarte::RankMetricCode;
use crate::error::{Error, Result};
use crate::gf::FieldContext;
use crate::poly::MultiPoly;
use crate::subspace::{Lattice, Subspace};

/// A rank function `ρ` tabulated on every subspace of `E = F_q^n`, with parameter `r`.
#[derive(Clone)]
pub struct QPolymatroid {
    lattice: Arc<Lattice>,
    r: i64,
    ranks: Vec<i64>,
}

impl PartialEq for QPolymatroid {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r
            && self.ranks == other.ranks
            && self.lattice.ambient_dim() == other.lattice.ambient_dim()
            && self.lattice.context() == other.lattice.context()
    }
}

impl Eq for QPolymatroid {}

impl fmt::Debug for QPolymatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QPolymatroid")
            .field("n", &self.n())
            .field("q", &self.lattice.context().q())
            .field("r", &self.r)
            .field("ranks", &self.ranks)
            .finish()
    }
}

/// One failed axiom, with the subspaces that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `0 <= ρ(A) <= r dim A` fails.
    Bounds { subspace: String, rank: i64, bound: i64 },
    /// `A ⊆ B` but `ρ(A) > ρ(B)`.
    Monotonicity { smaller: String, larger: String },
    /// `ρ(A+B) + ρ(A∩B) > ρ(A) + ρ(B)`.
    Submodularity { a: String, b: String },
    /// `A ⊆ B` but `ρ(B) - ρ(A) > r (dim B - dim A)`.
    RankDifference { smaller: String, larger: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Bounds { subspace, rank, bound } => {
                write!(f, "bounds: rho([{subspace}]) = {rank} outside [0, {bound}]")
            }
            Violation::Monotonicity { smaller, larger } => write!(f, "monotonicity: [{smaller}] ⊆ [{larger}]"),
            Violation::Submodularity { a, b } => write!(f, "submodularity: [{a}], [{b}]"),
            Violation::RankDifference { smaller, larger } => write!(f, "rank difference: [{smaller}] ⊆ [{larger}]"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `g^l(X3, X4) = prod_{i<l} (X3 - q^i X4)` in four variables, cached per `(q, l)`.
pub fn g_poly(q: u32, l: usize) -> MultiPoly {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), MultiPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&(q, l)) {
        return p.clone();
    }
    let x3 = MultiPoly::var(4, 2);
    let x4 = MultiPoly::var(4, 3);
    let mut acc = MultiPoly::one(4);
    let mut qi = BigInt::one();
    for _ in 0..l {
        acc = &acc * &(&x3 - &x4.scale(&qi));
        qi *= q;
    }
    cache.lock().unwrap().insert((q, l), acc.clone());
    acc
}

impl QPolymatroid {
    /// Wraps a rank vector aligned with `lattice.subspaces()`. No axioms are checked.
    pub fn from_ranks(lattice: Arc<Lattice>, r: i64, ranks: Vec<i64>) -> Result<Self> {
        if ranks.len() != lattice.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} ranks", lattice.len()),
                found: format!("{} ranks", ranks.len()),
            });
        }
        Ok(QPolymatroid { lattice, r, ranks })
    }

    /// Builds a polymatroid from a table that must cover every subspace of `F_q^n`.
    pub fn from_table(ctx: &Arc<FieldContext>, n: usize, r: i64, table: &HashMap<Subspace, i64>) -> Result<Self> {
        let lattice = Lattice::shared(ctx, n)?;
        let ranks = lattice
            .subspaces()
            .iter()
            .map(|s| table.get(s).copied().ok_or_else(|| Error::MissingRank(s.key())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ranks(lattice, r, ranks)
    }

    /// `P_C` with `ρ(J) = dim C - dim C(J^⊥)` and `r = m`.
    pub fn from_code(code: &RankMetricCode) -> Result<Self> {
        let lattice = Lattice::shared(code.context(), code.n())?;
        let restricted = restricted_dims(code, &lattice)?;
        let k = code.dim() as i64;
        let ranks = (0..lattice.len()).map(|i| k - restricted[lattice.perp(i)]).collect();
        Self::from_ranks(lattice, code.m() as i64, ranks)
    }

    /// The free polymatroid `ρ(J) = r dim J`.
    pub fn free(ctx: &Arc<FieldContext>, n: usize, r: i64) -> Result<Self> {
        let lattice = Lattice::shared(ctx, n)?;
        let ranks = lattice.subspaces().iter().map(|s| r * s.dim() as i64).collect();
        Self::from_ranks(lattice, r, ranks)
    }

    /// `ρ ≡ 0`.
    pub fn zero(ctx: &Arc<FieldContext>, n: usize, r: i64) -> Result<Self> {
        let lattice = Lattice::shared(ctx, n)?;
        let len = lattice.len();
        Self::from_ranks(lattice, r, vec![0; len])
    }

    pub fn n(&self) -> usize {
        self.lattice.ambient_dim()
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Ranks aligned with `lattice().subspaces()`.
    pub fn ranks(&self) -> &[i64] {
        &self.ranks
    }

    pub fn rank(&self, s: &Subspace) -> Option<i64> {
        self.lattice.index_of(s).map(|i| self.ranks[i])
    }

    /// `ρ(E)`.
    pub fn total_rank(&self) -> i64 {
        self.ranks[self.lattice.full_index()]
    }

    fn dim(&self, i: usize) -> i64 {
        self.lattice.get(i).dim() as i64
    }

    /// `ρ*(J) = ρ(J^⊥) + r dim J - ρ(E)`.
    pub fn dual(&self) -> Self {
        let total = self.total_rank();
        let ranks = (0..self.lattice.len())
            .map(|i| self.ranks[self.lattice.perp(i)] + self.r * self.dim(i) - total)
            .collect();
        QPolymatroid { lattice: self.lattice.clone(), r: self.r, ranks }
    }

    /// Checks boundedness, monotonicity and submodularity on every subspace and
    /// pair, plus `ρ(B) - ρ(A) <= r (dim B - dim A)` for every `A ⊆ B`.
    pub fn verify_axioms(&self) -> AxiomReport {
        let l = &self.lattice;
        let key = |i: usize| l.get(i).key();
        let mut violations = Vec::new();
        for i in 0..l.len() {
            let bound = self.r * self.dim(i);
            if self.ranks[i] < 0 || self.ranks[i] > bound {
                violations.push(Violation::Bounds { subspace: key(i), rank: self.ranks[i], bound });
            }
        }
        for big in 0..l.len() {
            for small in l.below(big) {
                if self.ranks[small] > self.ranks[big] {
                    violations.push(Violation::Monotonicity { smaller: key(small), larger: key(big) });
                }
                if self.ranks[big] - self.ranks[small] > self.r * (self.dim(big) - self.dim(small)) {
                    violations.push(Violation::RankDifference { smaller: key(small), larger: key(big) });
                }
            }
        }
        for a in 0..l.len() {
            for b in a + 1..l.len() {
                if self.ranks[l.join(a, b)] + self.ranks[l.meet(a, b)] > self.ranks[a] + self.ranks[b] {
                    violations.push(Violation::Submodularity { a: key(a), b: key(b) });
                }
            }
        }
        AxiomReport { violations }
    }

    /// `R_P = sum_D X1^{ρ(E)-ρ(D)} X2^{r dim D - ρ(D)} g^{dim D}(X3, X4)`; the
    /// hatted variant uses `g^{dim D^⊥}` instead.
    pub fn rank_generating_function(&self, hatted: bool) -> MultiPoly {
        let q = self.lattice.context().q();
        let n = self.n() as i64;
        let total = self.total_rank();
        let mut grouped: HashMap<(i64, i64, i64), i64> = HashMap::new();
        for (i, &rho) in self.ranks.iter().enumerate() {
            let d = self.dim(i);
            let g_deg = if hatted { n - d } else { d };
            *grouped.entry((total - rho, self.r * d - rho, g_deg)).or_default() += 1;
        }
        let mut out = MultiPoly::zero(4);
        let mut keys: Vec<_> = grouped.into_iter().collect();
        keys.sort();
        for ((e1, e2, g_deg), count) in keys {
            let f = MultiPoly::monomial(vec![e1 as i32, e2 as i32, 0, 0], BigInt::from(count));
            out = &out + &(&f * &g_poly(q, g_deg as usize));
        }
        out
    }

    /// One `"<subspace>": rho` line per subspace, in lattice order, wrapped as a JSON object.
    pub fn rank_table_json(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (s, rho)) in self.lattice.subspaces().iter().zip(&self.ranks).enumerate() {
            let comma = if i + 1 < self.ranks.len() { "," } else { "" };
            out.push_str(&format!("  \"{}\": {}{}\n", s.key(), rho, comma));
        }
        out.push_str("}\n");
        out
    }
}

/// `dim C(T)` for every `T` in the lattice.
pub(crate) fn restricted_dims(code: &RankMetricCode, lattice: &Lattice) -> Result<Vec<i64>> {
    lattice.subspaces().iter().map(|t| Ok(code.restrict(t)?.dim() as i64)).collect()
}

/// `[[e1, e2, e3, e4, coefficient], ...]` sorted lexicographically by exponents.
pub fn records_json(poly: &MultiPoly) -> String {
    let rows: Vec<String> = poly
        .records()
        .iter()
        .map(|(e, c)| {
            let exps: Vec<String> = e.iter().map(i32::to_string).collect();
            format!("[{},{}]", exps.join(","), c)
        })
        .collect();
    format!("[{}]\n", rows.join(","))
}
