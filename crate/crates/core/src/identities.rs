//! End-to-end identity checks on a single code. Every check computes both
//! sides by independent routes and compares canonical strings.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::delsarte::RankMetricCode;
use crate::error::{Error, Result};
use crate::gf::FieldContext;
use crate::poly::{HomogeneousPoly, MultiPoly};
use crate::qpolymatroid::{restricted_dims, QPolymatroid};
use crate::qseries::{dual_enumerator_kernel, moebius_coefficient, q_transform_with, x_minus_y, x_plus_shifted_y, HomogeneousMPoly};
use crate::subspace::Lattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub code_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Outcome of one identity on one code. `pass` holds exactly when `lhs == rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: ReportParams,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl IdentityReport {
    fn new(identity: &str, code: &RankMetricCode, lhs: String, rhs: String, witness: Option<String>) -> Self {
        let pass = lhs == rhs;
        IdentityReport {
            identity: identity.to_string(),
            params: ReportParams { q: code.context().q(), n: code.n(), m: code.m(), code_id: code_id(code), seed: None },
            lhs,
            rhs,
            pass,
            witness: if pass { None } else { witness.or_else(|| Some("sides differ".into())) },
        }
    }

    pub fn with_id(mut self, id: &str, seed: Option<u64>) -> Self {
        self.params.code_id = id.to_string();
        self.params.seed = seed;
        self
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        write!(
            f,
            "{} {} q={} n={} m={} code={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity,
            p.q,
            p.n,
            p.m,
            p.code_id
        )?;
        if let Some(seed) = p.seed {
            write!(f, " seed={seed}")?;
        }
        write!(f, "\n  lhs: {}\n  rhs: {}", self.lhs, self.rhs)?;
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

/// Short identifier: shape, field size and the canonical basis key.
pub fn code_id(code: &RankMetricCode) -> String {
    format!("{}x{}/F{}/[{}]", code.n(), code.m(), code.context().q(), code.as_subspace().key())
}

fn poly_witness(lhs: &MultiPoly, rhs: &MultiPoly) -> Option<String> {
    lhs.first_difference(rhs).map(|(e, a, b)| format!("monomial {e:?}: lhs {a}, rhs {b}"))
}

fn homogeneous_witness(lhs: &HomogeneousPoly, rhs: &HomogeneousPoly) -> Option<String> {
    if lhs.degree() != rhs.degree() {
        return Some(format!("degrees {} and {}", lhs.degree(), rhs.degree()));
    }
    (0..=lhs.degree()).find(|&i| lhs.coeff(i) != rhs.coeff(i)).map(|i| {
        format!("coefficient of x^{} y^{}: lhs {}, rhs {}", lhs.degree() - i, i, lhs.coeff(i), rhs.coeff(i))
    })
}

/// Per-subspace values rendered as `key=value` pairs in lattice order.
fn table_string(lattice: &Lattice, values: &[i64]) -> String {
    lattice.subspaces().iter().zip(values).map(|(s, v)| format!("[{}]={}", s.key(), v)).collect::<Vec<_>>().join(" ")
}

fn table_witness(lattice: &Lattice, lhs: &[i64], rhs: &[i64]) -> Option<String> {
    (0..lhs.len())
        .find(|&i| lhs[i] != rhs[i])
        .map(|i| format!("subspace [{}]: lhs {}, rhs {}", lattice.get(i).key(), lhs[i], rhs[i]))
}

/// Greene-type identity with `y = z^m`: the enumerator `sum A_i x^{n-i} z^{mi}`
/// against `z^{mn - dim C} R_{P_C}(q z, z^{-1}, x, z^m)`.
pub fn greene_check(code: &RankMetricCode, budget: u64) -> Result<IdentityReport> {
    let (n, m) = (code.n() as i32, code.m() as i32);
    let dist = code.rank_distribution(budget)?;
    let mut lhs = MultiPoly::zero(2);
    for (i, &a) in dist.counts.iter().enumerate() {
        lhs.add_term(vec![n - i as i32, m * i as i32], BigInt::from(a));
    }

    let rgf = QPolymatroid::from_code(code)?.rank_generating_function(false);
    let q = BigInt::from(code.context().q());
    let images = [
        MultiPoly::monomial(vec![0, 1], q),
        MultiPoly::monomial(vec![0, -1], BigInt::from(1)),
        MultiPoly::var(2, 0),
        MultiPoly::monomial(vec![0, m], BigInt::from(1)),
    ];
    let shift = MultiPoly::monomial(vec![0, m * n - code.dim() as i32], BigInt::from(1));
    let rhs = &rgf.substitute(&images)? * &shift;

    let residue = rhs.terms().find(|(e, _)| e[1] < 0 || e[1] % m != 0).map(|(e, c)| format!("residual term {c}*x^{}*z^{}", e[0], e[1]));
    let witness = residue.or_else(|| poly_witness(&lhs, &rhs));
    let names = ["x", "z"];
    Ok(IdentityReport::new("greene", code, lhs.to_string_with(&names), rhs.to_string_with(&names), witness))
}

/// `R_{P*}(X1, X2, X3, X4) = R̂_P(X2, X1, X3, X4)` for `P = P_C`.
pub fn rgf_duality_check(code: &RankMetricCode) -> Result<IdentityReport> {
    let p = QPolymatroid::from_code(code)?;
    let lhs = p.dual().rank_generating_function(false);
    let rhs = p.rank_generating_function(true).permute(&[1, 0, 2, 3]);
    let witness = poly_witness(&lhs, &rhs);
    Ok(IdentityReport::new("rgf-duality", code, lhs.to_string(), rhs.to_string(), witness))
}

/// `P_C^* = P_{C^⊥}`, compared subspace by subspace.
pub fn dual_polymatroid_check(code: &RankMetricCode) -> Result<IdentityReport> {
    let lhs = QPolymatroid::from_code(code)?.dual();
    let rhs = QPolymatroid::from_code(&code.dual())?;
    let l = lhs.lattice().clone();
    let witness = table_witness(&l, lhs.ranks(), rhs.ranks());
    Ok(IdentityReport::new("dual-polymatroid", code, table_string(&l, lhs.ranks()), table_string(&l, rhs.ranks()), witness))
}

/// `(P_C^*)^* = P_C`.
pub fn dual_involution_check(code: &RankMetricCode) -> Result<IdentityReport> {
    let p = QPolymatroid::from_code(code)?;
    let back = p.dual().dual();
    let l = p.lattice().clone();
    let witness = table_witness(&l, back.ranks(), p.ranks());
    Ok(IdentityReport::new("dual-involution", code, table_string(&l, back.ranks()), table_string(&l, p.ranks()), witness))
}

/// `dim C^⊥(R) + dim C = m dim R + dim C(R^⊥)` for every subspace `R`.
pub fn exact_sequence_check(code: &RankMetricCode) -> Result<IdentityReport> {
    let lattice = Lattice::shared(code.context(), code.n())?;
    let here = restricted_dims(code, &lattice)?;
    let dual = restricted_dims(&code.dual(), &lattice)?;
    let (k, m) = (code.dim() as i64, code.m() as i64);
    let lhs: Vec<i64> = (0..lattice.len()).map(|i| dual[i] + k).collect();
    let rhs: Vec<i64> = (0..lattice.len()).map(|i| m * lattice.get(i).dim() as i64 + here[lattice.perp(i)]).collect();
    let witness = table_witness(&lattice, &lhs, &rhs);
    Ok(IdentityReport::new("exact-sequence", code, table_string(&lattice, &lhs), table_string(&lattice, &rhs), witness))
}

/// Axioms for `P_C` and `P_C^*`; both sides read `ok` when nothing is violated.
pub fn axioms_check(code: &RankMetricCode) -> Result<IdentityReport> {
    let p = QPolymatroid::from_code(code)?;
    let describe = |name: &str, p: &QPolymatroid| {
        let report = p.verify_axioms();
        match report.violations.first() {
            None => (format!("{name}: ok"), None),
            Some(v) => (format!("{name}: {} violations", report.violations.len()), Some(format!("{name} {v}"))),
        }
    };
    let (a, wa) = describe("P_C", &p);
    let (b, wb) = describe("P_C*", &p.dual());
    Ok(IdentityReport::new("axioms", code, format!("{a}; {b}"), "P_C: ok; P_C*: ok".into(), wa.or(wb)))
}

fn divide_exact(coeffs: Vec<BigInt>, size: &BigInt) -> Result<HomogeneousPoly> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let (quot, rem) = c.div_rem(size);
        if !rem.is_zero() {
            return Err(Error::NonIntegralResult(format!("{c} is not divisible by |C| = {size}")));
        }
        out.push(quot);
    }
    Ok(HomogeneousPoly::from_integers(out))
}

/// The dual enumerator from the subspace counts of `C` alone: `A_C(S)` is
/// recovered from `B_C(T) = q^{dim C(T)}` by Möbius inversion, then
/// `W_{C^⊥} = |C|^{-1} sum_S A_C(S) sum_j K_j(dim S) y^j x^{n-j}`.
pub fn macwilliams_dual_enumerator(code: &RankMetricCode) -> Result<HomogeneousPoly> {
    let ctx = code.context();
    let q = ctx.q() as i64;
    let (n, m) = (code.n() as i64, code.m() as i64);
    let lattice = Lattice::shared(ctx, code.n())?;
    let b: Vec<BigInt> = restricted_dims(code, &lattice)?.into_iter().map(|d| Pow::pow(BigInt::from(q), d as u64)).collect();

    // A_C summed over subspaces of each dimension
    let mut by_dim = vec![BigInt::zero(); code.n() + 1];
    for s in 0..lattice.len() {
        let ds = lattice.get(s).dim() as i64;
        let a: BigInt = lattice.below(s).map(|t| moebius_coefficient(ds - lattice.get(t).dim() as i64, q) * &b[t]).sum();
        by_dim[ds as usize] += a;
    }

    let coeffs: Vec<BigInt> = (0..=n)
        .map(|j| by_dim.iter().enumerate().map(|(s, a)| a * dual_enumerator_kernel(s as i64, j, m, n, q)).sum())
        .collect();
    let size = Pow::pow(BigInt::from(q), code.dim() as u64);
    divide_exact(coeffs, &size)
}

/// `|C|^{-1} sum_i A_i(C) (x - y)^{[i]} * (x + (q^m - 1) y)^{[n-i]}`, i.e. the
/// q-transform of `W_C` evaluated at the MacWilliams arguments.
pub fn macwilliams_transform(code: &RankMetricCode, budget: u64) -> Result<HomogeneousPoly> {
    let q = code.context().q() as i64;
    let dist = code.rank_distribution(budget)?;
    let w = HomogeneousMPoly::from_integers(dist.counts.iter().copied());
    let transformed = q_transform_with(&w, &x_plus_shifted_y(q), &x_minus_y(), q).at(code.m() as i64);
    let size = BigRational::from_integer(Pow::pow(BigInt::from(q), code.dim() as u64));
    let scaled = transformed.scale(&size.recip());
    if !scaled.is_integral() {
        return Err(Error::NonIntegralResult(scaled.to_string()));
    }
    Ok(scaled)
}

/// Brute-force dual enumeration against the formula route and the q-transform route.
pub fn macwilliams_checks(code: &RankMetricCode, budget: u64) -> Result<Vec<IdentityReport>> {
    let brute = code.dual().rank_weight_enumerator(budget)?;
    let formula = macwilliams_dual_enumerator(code)?;
    let transform = macwilliams_transform(code, budget)?;
    Ok(vec![
        IdentityReport::new("macwilliams-formula", code, brute.to_string(), formula.to_string(), homogeneous_witness(&brute, &formula)),
        IdentityReport::new("macwilliams-transform", code, brute.to_string(), transform.to_string(), homogeneous_witness(&brute, &transform)),
    ])
}

/// Names accepted by [`check_named`], in the order [`check_all`] runs them.
pub const IDENTITIES: [&str; 7] = ["greene", "rgf-duality", "dual-polymatroid", "dual-involution", "exact-sequence", "macwilliams", "axioms"];

/// Runs one named identity (or `all`).
pub fn check_named(name: &str, code: &RankMetricCode, budget: u64) -> Result<Vec<IdentityReport>> {
    Ok(match name {
        "greene" => vec![greene_check(code, budget)?],
        "rgf-duality" => vec![rgf_duality_check(code)?],
        "dual-polymatroid" => vec![dual_polymatroid_check(code)?],
        "dual-involution" => vec![dual_involution_check(code)?],
        "exact-sequence" => vec![exact_sequence_check(code)?],
        "macwilliams" => macwilliams_checks(code, budget)?,
        "axioms" => vec![axioms_check(code)?],
        "all" => return check_all(code, budget),
        other => return Err(Error::Parse(format!("unknown identity {other:?}; expected one of {} or all", IDENTITIES.join(", ")))),
    })
}

/// Every identity on one code, in a fixed order.
pub fn check_all(code: &RankMetricCode, budget: u64) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for name in IDENTITIES {
        out.extend(check_named(name, code, budget)?);
    }
    Ok(out)
}

/// A reproducible random corpus: `per_shape` codes in each of
/// `Mat(3x2, F_2)`, `Mat(3x3, F_2)`, `Mat(2x2, F_3)` and `Mat(2x2, F_4)`.
/// Each entry carries an id of the form `random/<seed>/<index>`.
pub fn seeded_corpus(seed: u64, per_shape: usize) -> Result<Vec<(String, RankMetricCode)>> {
    let shapes: [(u64, usize, usize); 4] = [(2, 3, 2), (2, 3, 3), (3, 2, 2), (4, 2, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(shapes.len() * per_shape);
    for (q, n, m) in shapes {
        let ctx: Arc<FieldContext> = FieldContext::of_order(q)?;
        for _ in 0..per_shape {
            let code = RankMetricCode::random(&ctx, n, m, None, &mut rng)?;
            out.push((format!("random/{seed}/{}", out.len()), code));
        }
    }
    Ok(out)
}
