//! Acceptance criteria. Each test prints one `criterion N ...: PASS|FAIL` line.
//!
//! Run with `cargo test -p qrank --test acceptance -- --nocapture` to see them.

use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use qrank::identities::{self, check_all, IdentityReport};
use qrank::poly::{HomogeneousPoly, MultiPoly};
use qrank::qseries::{gaussian_binomial, p_j_coeff, q_power, q_product, x_minus_y, x_plus_shifted_y, HomogeneousMPoly};
use qrank::subspace::{enumerate_subspaces, Lattice};
use qrank::{all_codes, FieldContext, MatrixFq, QPolymatroid, RankMetricCode, DEFAULT_BUDGET};

const SEED: u64 = 20_240_229;

fn f(q: u64) -> Arc<FieldContext> {
    FieldContext::of_order(q).unwrap()
}

struct Corpus {
    name: &'static str,
    codes: Vec<(String, Option<u64>, RankMetricCode)>,
}

fn exhaustive(name: &'static str, q: u64, n: usize, m: usize) -> Corpus {
    let codes = all_codes(&f(q), n, m).map(|c| (identities::code_id(&c), None, c)).collect();
    Corpus { name, codes }
}

/// The three exhaustive corpora plus 200 seeded random codes (50 of them over F_4).
fn corpora() -> &'static [Corpus] {
    static CORPORA: OnceLock<Vec<Corpus>> = OnceLock::new();
    CORPORA.get_or_init(|| {
        let random = identities::seeded_corpus(SEED, 50).unwrap().into_iter().map(|(id, c)| (id, Some(SEED), c)).collect();
        vec![
            exhaustive("Mat(2x2,F_2)", 2, 2, 2),
            exhaustive("Mat(2x2,F_3)", 3, 2, 2),
            exhaustive("Mat(3x2,F_2)", 2, 3, 2),
            Corpus { name: "random", codes: random },
        ]
    })
}

fn verdict(criterion: u32, title: &str, failures: &[String], detail: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {criterion} ({title}): {status} [{detail}]");
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {criterion} failed with {} failures", failures.len());
}

fn failures_of(reports: impl IntoIterator<Item = IdentityReport>) -> Vec<String> {
    reports.into_iter().filter(|r| !r.pass).map(|r| r.to_string()).collect()
}

fn run_over<F>(corpora: &[Corpus], check: F) -> (usize, Vec<String>)
where
    F: Fn(&RankMetricCode) -> Vec<IdentityReport> + Sync,
{
    let mut total = 0;
    let mut failures = Vec::new();
    for corpus in corpora {
        let reports: Vec<IdentityReport> = corpus
            .codes
            .par_iter()
            .flat_map_iter(|(id, seed, code)| check(code).into_iter().map(move |r| r.with_id(&format!("{}:{id}", corpus.name), *seed)))
            .collect();
        total += reports.len();
        failures.extend(failures_of(reports));
    }
    (total, failures)
}

#[test]
fn criterion_1_greene_exhaustive() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for corpus in &corpora()[..3] {
        for (_, _, code) in &corpus.codes {
            checked += 1;
            failures.extend(failures_of([identities::greene_check(code, DEFAULT_BUDGET).unwrap()]));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}, limit 120 s"));
    }
    assert_eq!(checked, 67 + 212 + 2825);
    verdict(1, "Greene identity, exhaustive", &failures, &format!("{checked} codes single-threaded in {elapsed:.2?}"));
}

#[test]
fn criterion_2_macwilliams_three_way() {
    let (total, failures) = run_over(corpora(), |c| identities::macwilliams_checks(c, DEFAULT_BUDGET).unwrap());
    let codes: usize = corpora().iter().map(|c| c.codes.len()).sum();
    assert_eq!(codes, 67 + 212 + 2825 + 200);
    assert!(corpora()[3].codes.iter().any(|(_, _, c)| c.context().q() == 4));
    verdict(2, "MacWilliams three-way agreement", &failures, &format!("{codes} codes, {total} comparisons, seed {SEED}"));
}

#[test]
fn criterion_3_polymatroid_axioms_and_duality() {
    let (total, failures) = run_over(corpora(), |c| {
        vec![
            identities::axioms_check(c).unwrap(),
            identities::dual_involution_check(c).unwrap(),
            identities::dual_polymatroid_check(c).unwrap(),
            identities::rgf_duality_check(c).unwrap(),
        ]
    });
    verdict(3, "polymatroid axioms and duality", &failures, &format!("{total} checks"));
}

#[test]
fn criterion_4_exact_sequence() {
    let (total, failures) = run_over(corpora(), |c| vec![identities::exact_sequence_check(c).unwrap()]);
    verdict(4, "exact-sequence dimension identity", &failures, &format!("{total} codes"));
}

fn c2(k: i64) -> i64 {
    k * (k - 1) / 2
}

fn big_pow(q: i64, e: i64) -> BigInt {
    assert!(e >= 0);
    num_traits::pow(BigInt::from(q), e as usize)
}

fn gb(a: i64, b: i64, q: i64) -> BigInt {
    gaussian_binomial(a, b, q)
}

/// Independent evaluation of `(x - y)^{[l]}` via its closed form.
fn x_minus_y_power_closed(l: i64, q: i64) -> Vec<BigRational> {
    (0..=l)
        .map(|u| {
            let sign = if u % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            BigRational::from_integer(sign * gb(l, u, q) * big_pow(q, c2(u)))
        })
        .collect()
}

#[test]
fn criterion_5_q_calculus() {
    let mut failures = Vec::new();
    let mut checks = 0usize;

    // Gaussian binomials against subspace enumeration
    for q in [2u64, 3] {
        let ctx = f(q);
        for a in 0..=5usize {
            let mut by_dim = vec![0i64; a + 1];
            for s in enumerate_subspaces(&ctx, a, None) {
                by_dim[s.dim()] += 1;
            }
            for (b, &count) in by_dim.iter().enumerate() {
                checks += 1;
                if gb(a as i64, b as i64, q as i64) != BigInt::from(count) {
                    failures.push(format!("[{a} {b}]_{q} != {count}"));
                }
            }
        }
    }

    // The four binomial identities
    for q in [2i64, 3, 4] {
        for a in 0..=8i64 {
            for b in 0..=a {
                checks += 1;
                if a >= 1 && b >= 1 {
                    let lhs = gb(a, b, q);
                    let r1 = gb(a - 1, b, q) + big_pow(q, a - b) * gb(a - 1, b - 1, q);
                    let r2 = big_pow(q, b) * gb(a - 1, b, q) + gb(a - 1, b - 1, q);
                    if lhs != r1 || lhs != r2 {
                        failures.push(format!("Pascal rules fail at a={a} b={b} q={q}"));
                    }
                }
                for c in 0..=b {
                    checks += 1;
                    if gb(a, b, q) * gb(b, c, q) != gb(a, b - c, q) * gb(a - b + c, c, q) {
                        failures.push(format!("product rule fails at a={a} b={b} c={c} q={q}"));
                    }
                }
                for n in 0..=a {
                    checks += 1;
                    let sum: BigInt = (0..=n)
                        .map(|i| {
                            let e = i * (a - b - n + i);
                            let term = gb(n, i, q) * gb(a - n, b - i, q);
                            if term.is_zero() {
                                return BigInt::zero();
                            }
                            assert!(e >= 0, "negative exponent only with a vanishing binomial");
                            big_pow(q, e) * term
                        })
                        .sum();
                    if sum != gb(a, b, q) {
                        failures.push(format!("Vandermonde rule fails at a={a} b={b} n={n} q={q}"));
                    }
                }
            }
        }
    }
    for a in 0..=16i64 {
        for b in 0..=16i64 {
            checks += 1;
            if c2(a + b) != c2(a) + a * b + c2(b) {
                failures.push(format!("binomial-2 rule fails at {a},{b}"));
            }
        }
    }

    // (q^m y)^{[n]} = (q^m y)^n, and (x - y)^{[l]} * (q^m y)^{[n-l]} is an ordinary scalar multiple
    for q in [2i64, 3] {
        let qm_y = HomogeneousMPoly::from_fn(1, move |m| vec![BigRational::zero(), qrank::qseries::qpow(q, m)]);
        for n in 0..=5i64 {
            let power = q_power(&qm_y, n, q).unwrap();
            for m in 0..=4i64 {
                checks += 1;
                let mut expected = vec![BigRational::zero(); n as usize + 1];
                expected[n as usize] = BigRational::from_integer(big_pow(q, m * n));
                if power.coeffs_at(m).as_slice() != expected.as_slice() {
                    failures.push(format!("(q^m y)^[{n}] != (q^m y)^{n} at q={q} m={m}"));
                }
            }
            for l in 0..=n {
                let lhs = q_product(&q_power(&x_minus_y(), l, q).unwrap(), &q_power(&qm_y, n - l, q).unwrap(), q);
                for m in 0..=4i64 {
                    checks += 1;
                    let scalar = BigRational::from_integer(big_pow(q, m * (n - l)));
                    let mut expected = vec![BigRational::zero(); (n - l) as usize];
                    expected.extend(x_minus_y_power_closed(l, q).into_iter().map(|c| c * &scalar));
                    if lhs.coeffs_at(m).as_slice() != expected.as_slice() {
                        failures.push(format!("(x-y)^[{l}] * (q^m y)^[{}] at q={q} m={m}", n - l));
                    }
                }
            }
        }
    }

    // P_j: formula against the q-product expansion and against the target sum
    for q in [2i64, 3] {
        for n in 0..=4i64 {
            for i in 0..=n {
                let expansion = q_product(&q_power(&x_minus_y(), i, q).unwrap(), &q_power(&x_plus_shifted_y(q), n - i, q).unwrap(), q);
                for m in 0..=4i64 {
                    let coeffs = expansion.coeffs_at(m);
                    for j in 0..=n {
                        checks += 1;
                        let pj = p_j_coeff(i, j, m, n, q).unwrap();
                        if BigRational::from_integer(pj.clone()) != coeffs[j as usize] {
                            failures.push(format!("P_{j}({i};{m},{n}) q={q}: formula {pj}, expansion {}", coeffs[j as usize]));
                        }
                        let target: BigInt = (0..=j)
                            .map(|l| {
                                let sign = if l % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                                sign * gb(n - i, j - l, q) * gb(n - j + l, l, q) * big_pow(q, c2(l)) * big_pow(q, m * (j - l))
                            })
                            .sum();
                        if target != pj {
                            failures.push(format!("P_{j}({i};{m},{n}) q={q}: target sum {target}, formula {pj}"));
                        }
                    }
                }
            }
        }
    }

    verdict(5, "q-calculus suite", &failures, &format!("{checks} checks"));
}

/// Rank over F_2 of a 2x2 matrix, by the determinant.
fn rank_2x2_f2(a: u32, b: u32, c: u32, d: u32) -> usize {
    if a | b | c | d == 0 {
        0
    } else if (a * d + b * c) % 2 == 1 {
        2
    } else {
        1
    }
}

#[test]
fn criterion_6_pinned_values() {
    let mut failures = Vec::new();
    let ctx = f(2);
    let full = RankMetricCode::full(&ctx, 2, 2).unwrap();

    // W^R of the full space: enumerate all sixteen matrices
    let mut counts = [0u64; 3];
    for bits in 0..16u32 {
        counts[rank_2x2_f2(bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1)] += 1;
    }
    let oracle = HomogeneousPoly::from_integers(counts);
    let pinned = "x^2 + 9*x*y + 6*y^2";
    let library = full.rank_weight_enumerator(DEFAULT_BUDGET).unwrap();
    if oracle.to_string() != pinned || library != oracle {
        failures.push(format!("W: oracle {oracle}, library {library}, pinned {pinned}"));
    }

    // R_P of the full space: rho(D) = dim C - log_2 |C(D^perp)|, with C(D^perp) counted by brute force
    let x = |i| MultiPoly::var(4, i);
    let mut oracle = MultiPoly::zero(4);
    let all: Vec<MatrixFq> = (0..16u32)
        .map(|b| MatrixFq::from_rows(&ctx, &[vec![b & 1, (b >> 1) & 1], vec![(b >> 2) & 1, (b >> 3) & 1]]).unwrap())
        .collect();
    let mut rho_e = 0;
    let lattice = Lattice::new(&ctx, 2).unwrap();
    let mut rhos = Vec::new();
    for d in lattice.subspaces() {
        let perp = d.orthogonal_complement();
        let size = all.iter().filter(|mat| perp.contains(&mat.column_space()).unwrap()).count();
        let rho = 4 - size.trailing_zeros() as i64;
        rhos.push((d.dim() as i64, rho));
        if d.dim() == 2 {
            rho_e = rho;
        }
    }
    for (dim, rho) in rhos {
        let mut g = MultiPoly::one(4);
        for i in 0..dim {
            g = &g * &(&x(2) - &x(3).scale(&BigInt::from(1i64 << i)));
        }
        let f = MultiPoly::monomial(vec![(rho_e - rho) as i32, (2 * dim - rho) as i32, 0, 0], BigInt::one());
        oracle = &oracle + &(&f * &g);
    }
    let g1 = &x(2) - &x(3);
    let g2 = &g1 * &(&x(2) - &x(3).scale(&BigInt::from(2)));
    let pinned = &(&x(0).pow(4) + &(&x(0).pow(2) * &g1).scale(&BigInt::from(3))) + &g2;
    let library = QPolymatroid::from_code(&full).unwrap().rank_generating_function(false);
    if oracle != pinned || library != oracle {
        failures.push(format!("R_P: oracle {oracle}, library {library}, pinned {pinned}"));
    }

    // (x + 3y)^{[2]} at q = m = 2 is (x + (q^m - 1) y)^{[2]}; expand the q-product by hand
    let (q, m) = (2i64, 2i64);
    let b1 = |m: i64| (1i64 << m) - 1;
    let oracle = HomogeneousPoly::from_integers([1, b1(m) + q * b1(m), q * b1(m) * b1(m - 1)]);
    let pinned = "x^2 + 9*x*y + 6*y^2";
    let library = q_power(&x_plus_shifted_y(q), 2, q).unwrap().at(m);
    if oracle.to_string() != pinned || library != oracle {
        failures.push(format!("(x+3y)^[2]: oracle {oracle}, library {library}, pinned {pinned}"));
    }

    verdict(6, "pinned values", &failures, "3 values, each reproduced by a brute-force oracle");
}

#[test]
fn criterion_7_performance() {
    let mut failures = Vec::new();

    let start = Instant::now();
    let lattice = Lattice::new(&f(2), 6).unwrap();
    let lattice_time = start.elapsed();
    if lattice.len() != 2825 {
        failures.push(format!("F_2^6 has {} subspaces", lattice.len()));
    }
    if lattice_time > Duration::from_secs(1) {
        failures.push(format!("F_2^6 lattice took {lattice_time:?}"));
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let codes: Vec<RankMetricCode> = all_codes(&f(2), 3, 2).collect();
    let start = Instant::now();
    let reports: Vec<IdentityReport> = pool.install(|| codes.par_iter().flat_map_iter(|c| check_all(c, DEFAULT_BUDGET).unwrap()).collect());
    let check_time = start.elapsed();
    failures.extend(failures_of(reports.iter().cloned()));
    if check_time > Duration::from_secs(600) {
        failures.push(format!("check_all took {check_time:?}"));
    }

    verdict(
        7,
        "performance",
        &failures,
        &format!("lattice F_2^6 in {lattice_time:.2?}; check_all on {} codes ({} reports, 4 threads) in {check_time:.2?}", codes.len(), reports.len()),
    );
}
