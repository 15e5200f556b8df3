//! Acceptance suite: every desk-scale closed-form claim checked exactly.
//! All comparisons are integer or cyclotomic-integer, tolerance zero.
//! One pass/fail line is printed per criterion (visible with --nocapture;
//! failures always surface the line in the panic message).

use num_bigint::BigInt;
use num_traits::Zero;

use apncodes::codes::{
    dual_min_distance_at_most, equidistribution_scan, make_code, weight_distribution, WeightDist,
};
use apncodes::cyclotomic::CycInt;
use apncodes::expsums::{
    appendix_count_tables, circle_count, n4_convolution, n4_formula, n4_naive, pair_distribution,
    power_sum_checks, s_distribution, t0_distribution, t_distribution, PairDist, ValueDist,
};
use apncodes::field::{nth_primitive_modulus, FieldCtx};
use apncodes::quadform::build_form;
use apncodes::report::run_desk_suite;
use apncodes::tables::{
    apn_exponent_families, enumerate_cc_exponents, generate_table, TableData, TableId,
};
use apncodes::DEFAULT_BUDGET;

const BUDGET: u64 = DEFAULT_BUDGET;

fn ctx(p: u64, m: u32) -> FieldCtx {
    FieldCtx::new(p, m, None).unwrap()
}

fn criterion(n: u32, desc: &str, ok: bool) {
    let line = format!(
        "criterion {n:2}: {} - {desc}",
        if ok { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(ok, "{line}");
}

fn invariant(desc: &str, ok: bool) {
    let line = format!(
        "invariant   : {} - {desc}",
        if ok { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(ok, "{line}");
}

fn table_values(id: TableId, p: u64, m: u32) -> ValueDist {
    match generate_table(id, p, m).unwrap() {
        TableData::Values(v) => v,
        _ => panic!("expected a value table"),
    }
}

fn table_weights(id: TableId, p: u64, m: u32) -> WeightDist {
    match generate_table(id, p, m).unwrap() {
        TableData::Weights(w) => w,
        _ => panic!("expected a weight table"),
    }
}

fn table_pairs(id: TableId, p: u64, m: u32) -> PairDist {
    match generate_table(id, p, m).unwrap() {
        TableData::Pairs(pr) => pr,
        _ => panic!("expected a pair table"),
    }
}

/// First odd and even coset representatives satisfying the congruence
/// condition (exponent parity is constant on cosets since q - 1 is even).
fn odd_even_cc(p: u64, m: u32) -> (u64, u64) {
    let (reps, _) = enumerate_cc_exponents(p, m);
    let odd = reps.iter().find(|c| !c.parity_even).unwrap().e;
    let even = reps.iter().find(|c| c.parity_even).unwrap().e;
    (odd, even)
}

/// Every k in [1, m) coprime to m.
fn valid_ks(m: u32) -> Vec<u64> {
    (1..m as u64)
        .filter(|&k| num_integer::gcd(k, m as u64) == 1)
        .collect()
}

#[test]
fn c01_t0_value_distribution() {
    let mut ok = true;
    for (p, m) in [(3u64, 3u32), (3, 5), (7, 3)] {
        let ctx = ctx(p, m);
        let want = table_values(TableId::T0Dist, p, m);
        for k in valid_ks(m) {
            let got = t0_distribution(&ctx, k, BUDGET).unwrap();
            ok &= got == want;
            ok &= got.population == BigInt::from(p.pow(m)) * p.pow(m);
        }
    }
    criterion(1, "T0 value distribution matches the closed form", ok);
}

#[test]
fn c02_pair_distribution() {
    // frozen cells at (3,3): the closed-form multiplicities evaluated by hand
    let ctx33 = ctx(3, 3);
    let got = pair_distribution(&ctx33, 1, BUDGET).unwrap();
    let g = CycInt::gauss_sum(3);
    let v0 = g.scale(3);
    let v1 = CycInt::from_int(3, 9);
    let v2 = g.scale(9);
    let cell = |a: &CycInt, b: &CycInt| -> BigInt {
        got.entries
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    };
    let mut ok = true;
    for (a, b, n) in [
        (v0.clone(), v0.clone(), 13i64),
        (-&v0, -&v0, 13),
        (v0.clone(), -&v0, 91),
        (-&v0, v0.clone(), 91),
        (v0.clone(), v1.clone(), 78),
        (v1.clone(), -&v0, 78),
        (v0.clone(), -&v1, 39),
        (-&v1, -&v0, 39),
        (v0.clone(), v2.clone(), 13),
        (-&v2, -&v0, 13),
        (v0.clone(), -&v2, 0),
        (v2.clone(), -&v0, 0),
    ] {
        ok &= cell(&a, &b) == BigInt::from(n);
    }
    let q27 = CycInt::from_int(3, 27);
    ok &= cell(&q27, &q27) == BigInt::from(1);
    ok &= got == table_pairs(TableId::Pair, 3, 3);
    // larger parameters against the evaluated formulas, at every valid k
    for (p, m) in [(3u64, 5u32), (7, 3)] {
        let c = ctx(p, m);
        let want = table_pairs(TableId::Pair, p, m);
        for k in valid_ks(m) {
            ok &= pair_distribution(&c, k, BUDGET).unwrap() == want;
        }
    }
    criterion(2, "pair distribution (T0(a,b), T0(-a,b)) matches", ok);
}

#[test]
fn c03_power_sums() {
    let mut ok = true;
    for (p, m) in [(3u64, 3u32), (3, 5), (7, 3)] {
        let c = ctx(p, m);
        for k in valid_ks(m) {
            let (p1, p2) = power_sum_checks(&c, k, BUDGET).unwrap();
            let q = BigInt::from(p.pow(m));
            ok &= p1 == &q * &q;
            ok &= p2 == &q * &q * n4_formula(p, m);
        }
    }
    criterion(3, "power sums P1 = q^2 and P2 = q^2(2q^2-qp-q+p)", ok);
}

#[test]
fn c04_n4_counts() {
    let ctx33 = ctx(3, 3);
    let naive = n4_naive(&ctx33, 1, BUDGET).unwrap();
    let conv33 = n4_convolution(&ctx33, 1, BUDGET).unwrap();
    let mut ok = naive == BigInt::from(1353) && conv33 == naive;
    ok &= n4_formula(3, 3) == BigInt::from(1353);
    // 2q^2 - qp - q + p at (7,3) evaluates to 232561
    let ctx73 = ctx(7, 3);
    ok &= n4_convolution(&ctx73, 1, BUDGET).unwrap() == n4_formula(7, 3);
    ok &= n4_formula(7, 3) == BigInt::from(232561);
    let ctx35 = ctx(3, 5);
    ok &= n4_convolution(&ctx35, 1, BUDGET).unwrap() == n4_formula(3, 5);
    criterion(4, "N4 brute force = convolution = closed form", ok);
}

#[test]
fn c05_appendix_counts() {
    let c = ctx(3, 3);
    let (p, q) = (3u64, 27u64);
    let mut ok = true;
    // even k = 2: the single-sign rows hold verbatim
    let tables = appendix_count_tables(&c, 2, BUDGET).unwrap();
    for alpha in 1..q {
        let ae = c.elem(alpha);
        let bplus = c.packed(c.pow(ae, 5)); // (p^2+1)/2 = 5
        let bminus = c.neg_packed(bplus);
        ok &= tables.n1_at(q, alpha, bplus) == p + 1;
        ok &= tables.n1_at(q, alpha, bminus) == 0;
        let n2_want = if c.chi(ae) == -1 { 2 } else { 0 };
        ok &= tables.n2_at(q, alpha, bplus) == n2_want;
        ok &= tables.n2_at(q, alpha, bminus) == n2_want;
        let mut s1 = 0;
        for beta in 1..q {
            let n1 = tables.n1_at(q, alpha, beta);
            let n2 = tables.n2_at(q, alpha, beta);
            ok &= [0, 4, 8].contains(&n1);
            ok &= [0, 2, 4].contains(&n2);
            if beta != bplus && beta != bminus && n1 == 2 * (p + 1) {
                s1 += 1;
            }
        }
        // |S1(alpha)| = (q - p) / (2(p+1)) = 3, in particular for non-squares
        ok &= s1 == (q - p) / (2 * (p + 1));
    }
    // k = 1: value sets are unchanged; the N1 single-sign rows pick up the
    // quadratic character of alpha
    let tables = appendix_count_tables(&c, 1, BUDGET).unwrap();
    for alpha in 1..q {
        let ae = c.elem(alpha);
        let bplus = c.packed(c.pow(ae, 2)); // (p+1)/2 = 2
        let bminus = c.neg_packed(bplus);
        let (row_p, row_0) = if c.chi(ae) == -1 {
            (bminus, bplus)
        } else {
            (bplus, bminus)
        };
        ok &= tables.n1_at(q, alpha, row_p) == p + 1;
        ok &= tables.n1_at(q, alpha, row_0) == 0;
        for beta in 1..q {
            ok &= [0, 4, 8].contains(&tables.n1_at(q, alpha, beta));
            ok &= [0, 2, 4].contains(&tables.n2_at(q, alpha, beta));
        }
    }
    // x^2 + y^2 = alpha has q + 1 = 28 solutions for every alpha != 0
    for alpha in 1..q {
        ok &= circle_count(&c, alpha) == 28;
    }
    criterion(5, "two-variable counting rows, |S1| and circle counts", ok);
}

#[test]
fn c06_t_s_distributions() {
    let mut ok = true;
    // (3,3): the canonical odd/even exponents 7 and 8
    let c33 = ctx(3, 3);
    ok &= t_distribution(&c33, 7, BUDGET).unwrap() == table_values(TableId::TOdd, 3, 3);
    ok &= t_distribution(&c33, 8, BUDGET).unwrap() == table_values(TableId::TEven, 3, 3);
    let s7 = s_distribution(&c33, 7, BUDGET).unwrap();
    ok &= s7 == table_values(TableId::SOdd, 3, 3);
    ok &= s7.population == BigInt::from(3 * 729);
    let s8 = s_distribution(&c33, 8, BUDGET).unwrap();
    ok &= s8 == table_values(TableId::SEven, 3, 3);
    // one odd/even pair at (3,5) and (7,3)
    for (p, m) in [(3u64, 5u32), (7, 3)] {
        let c = ctx(p, m);
        let (odd, even) = odd_even_cc(p, m);
        ok &= t_distribution(&c, odd, BUDGET).unwrap() == table_values(TableId::TOdd, p, m);
        ok &= t_distribution(&c, even, BUDGET).unwrap() == table_values(TableId::TEven, p, m);
        ok &= s_distribution(&c, odd, BUDGET).unwrap() == table_values(TableId::SOdd, p, m);
        ok &= s_distribution(&c, even, BUDGET).unwrap() == table_values(TableId::SEven, p, m);
    }
    criterion(6, "T and S value distributions match all four tables", ok);
}

#[test]
fn c07_weight_distributions_two_zeros() {
    let c33 = ctx(3, 3);
    let mut ok = true;
    // frozen values for C(1,8)
    let d8 = weight_distribution(&c33, &make_code(&c33, &[1, 8]).unwrap(), BUDGET).unwrap();
    for (w, n) in [(0u64, 1i64), (15, 312), (18, 260), (21, 156)] {
        ok &= d8.entries.get(&w) == Some(&BigInt::from(n));
    }
    ok &= d8.entries.len() == 4;
    // certificate-decided tables
    for (p, m, count) in [(3u64, 3u32, 2usize), (3, 5, 2), (7, 3, 1)] {
        let c = ctx(p, m);
        let (reps, _) = enumerate_cc_exponents(p, m);
        for cert in reps.iter().take(count) {
            let table = table_weights(cert.weight_table().unwrap(), p, m);
            let code = make_code(&c, &[1, cert.e]).unwrap();
            let got = weight_distribution(&c, &code, BUDGET).unwrap();
            ok &= got.entries == table.entries;
            ok &= got.population_ok(p) && got.first_moment_ok(p);
        }
    }
    criterion(7, "C(1,e) weight distributions match their tables", ok);
}

#[test]
fn c08_weight_distributions_three_zeros() {
    let c33 = ctx(3, 3);
    let mut ok = true;
    let d = weight_distribution(&c33, &make_code(&c33, &[1, 7, 13]).unwrap(), BUDGET).unwrap();
    for (w, n) in [
        (0u64, 1i64),
        (8, 26),
        (12, 156),
        (14, 624),
        (18, 494),
        (20, 780),
        (24, 78),
        (26, 28),
    ] {
        ok &= d.entries.get(&w) == Some(&BigInt::from(n));
    }
    ok &= d.entries.len() == 8;
    ok &= d.entries == table_weights(TableId::Thm5Odd, 3, 3).entries;
    // the two even APN exponents share the special table
    let cor2 = table_weights(TableId::Cor2, 3, 3);
    for e in [20u64, 8] {
        let d = weight_distribution(&c33, &make_code(&c33, &[1, e, 13]).unwrap(), BUDGET).unwrap();
        ok &= d.entries == cor2.entries;
        for (w, n) in [
            (0u64, 1i64),
            (14, 390),
            (15, 312),
            (17, 520),
            (18, 260),
            (20, 546),
            (21, 156),
            (26, 2),
        ] {
            ok &= d.entries.get(&w) == Some(&BigInt::from(n));
        }
    }
    // (3,5): an even APN-family exponent against the even-e table (3^11 messages)
    let c35 = ctx(3, 5);
    let e = apn_exponent_families(5)
        .into_iter()
        .find(|f| f.family == 4)
        .unwrap()
        .e;
    let code = make_code(&c35, &[1, e, 121]).unwrap();
    let d = weight_distribution(&c35, &code, BUDGET).unwrap();
    ok &= d.entries == table_weights(TableId::Thm5Even, 3, 5).entries;
    ok &= d.population() == BigInt::from(3u64).pow(11);
    criterion(8, "C(1,e,s) weight distributions match their tables", ok);
}

#[test]
fn apn_family_exponents_match_certificate_tables() {
    // cross-module invariant: for every exponent in the APN families, the
    // enumerated distribution of C(1,e) equals the table its certificate
    // names (the families outside the congruence condition carry the
    // even-e witness and land on the first table)
    let mut ok = true;
    for m in [3u32, 5] {
        let c = ctx(3, m);
        let mut seen = std::collections::BTreeSet::new();
        for fam in apn_exponent_families(m) {
            let cert = apncodes::tables::classify_exponent(3, m, fam.e);
            ok &= !cert.is_empty();
            if !seen.insert(cert.coset_rep) {
                continue;
            }
            let table = table_weights(cert.weight_table().unwrap(), 3, m);
            let code = make_code(&c, &[1, fam.e]).unwrap();
            ok &= weight_distribution(&c, &code, BUDGET).unwrap().entries == table.entries;
        }
    }
    invariant("APN-family exponents match their certificate tables", ok);
}

#[test]
fn c09_equidistribution_scan() {
    let mut ok = true;
    for (p, m) in [(3u64, 3u32), (3, 5)] {
        let c = ctx(p, m);
        let scan = equidistribution_scan(&c, BUDGET).unwrap();
        ok &= scan.pairs > 0 && scan.all_equal;
    }
    criterion(
        9,
        "every hypothesis-satisfying (d,e) pair has equal distributions",
        ok,
    );
}

#[test]
fn c10_dual_distances() {
    let c33 = ctx(3, 3);
    let mut ok = true;
    let dd = |c: &FieldCtx, exps: &[u64]| {
        dual_min_distance_at_most(c, &make_code(c, exps).unwrap(), 5, BUDGET).unwrap()
    };
    ok &= dd(&c33, &[1, 8]) == Some(4);
    ok &= dd(&c33, &[1, 8, 13]) == Some(5);
    ok &= dd(&c33, &[1, 20, 13]) == Some(5);
    // (3,5): n = 242 meet-in-the-middle search for an APN-family exponent
    let c35 = ctx(3, 5);
    ok &= dd(&c35, &[1, 26]) == Some(4);
    ok &= dd(&c35, &[1, 26, 121]) == Some(5);
    criterion(10, "dual minimum distances 4 and 5", ok);
}

#[test]
fn c11_rank_properties() {
    let mut ok = true;
    for (p, m) in [(3u64, 3u32), (3, 5), (7, 3)] {
        let c = ctx(p, m);
        for ap in 0..c.q() {
            for bp in 0..c.q() {
                if (ap, bp) == (0, 0) {
                    continue;
                }
                let r = build_form(&c, c.elem(ap), c.elem(bp), 1).unwrap().rank();
                ok &= r + 2 >= m && r <= m;
                if ap != 0 {
                    let r2 = build_form(&c, c.neg(c.elem(ap)), c.elem(bp), 1)
                        .unwrap()
                        .rank();
                    ok &= r.max(r2) == m;
                }
            }
        }
    }
    criterion(11, "rank bounds and full-rank pairing, exhaustively", ok);
}

#[test]
fn c12_modulus_invariance() {
    let mut ok = true;
    // second (non-canonical) primitive modulus at (3,3): criteria 1, 7, 8
    let alt = nth_primitive_modulus(3, 3, 1).unwrap();
    let c1 = ctx(3, 3);
    let c2 = FieldCtx::new(3, 3, Some(&alt)).unwrap();
    ok &= alt != c1.modulus();
    ok &= t0_distribution(&c1, 1, BUDGET).unwrap() == t0_distribution(&c2, 1, BUDGET).unwrap();
    for exps in [vec![1u64, 8], vec![1, 7], vec![1, 8, 13], vec![1, 20, 13]] {
        let d1 = weight_distribution(&c1, &make_code(&c1, &exps).unwrap(), BUDGET).unwrap();
        let d2 = weight_distribution(&c2, &make_code(&c2, &exps).unwrap(), BUDGET).unwrap();
        ok &= d1 == d2;
    }
    // and once at (3,5)
    let alt = nth_primitive_modulus(3, 5, 1).unwrap();
    let c1 = ctx(3, 5);
    let c2 = FieldCtx::new(3, 5, Some(&alt)).unwrap();
    ok &= t0_distribution(&c1, 1, BUDGET).unwrap() == t0_distribution(&c2, 1, BUDGET).unwrap();
    let d1 = weight_distribution(&c1, &make_code(&c1, &[1, 26]).unwrap(), BUDGET).unwrap();
    let d2 = weight_distribution(&c2, &make_code(&c2, &[1, 26]).unwrap(), BUDGET).unwrap();
    ok &= d1 == d2;
    criterion(
        12,
        "distributions invariant under the primitive modulus",
        ok,
    );
}

#[test]
fn c13_determinism() {
    // identical runs, and single- vs multi-threaded pools, give
    // byte-identical report bodies
    let a = run_desk_suite(3, 3, BUDGET, None).unwrap().body_json();
    let b = run_desk_suite(3, 3, BUDGET, None).unwrap().body_json();
    let mut ok = a.to_string() == b.to_string();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_desk_suite(3, 3, BUDGET, None))
        .unwrap()
        .body_json();
    let eight = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| run_desk_suite(3, 3, BUDGET, None))
        .unwrap()
        .body_json();
    ok &= one.to_string() == a.to_string();
    ok &= eight.to_string() == a.to_string();
    criterion(
        13,
        "verify reports are byte-identical across runs/threads",
        ok,
    );
}
