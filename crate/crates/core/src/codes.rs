//! Cyclic codes C_{(i1,...,it)} of length q-1 in their trace representation:
//! exact weight distributions by message-space enumeration, the
//! equal-distribution test for exponent pairs, and bounded dual-distance
//! search by meet-in-the-middle over column combinations.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{mulmod, powmod, v2};
use crate::charge;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::{Coset, FieldCtx, FieldElem};

/// A cyclic code given by pairwise-disjoint coset representatives; the
/// codewords are ( sum_s Tr(a_s pi^{j i_s}) )_{j=0..q-2}.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub exponents: Vec<u64>,
    pub cosets: Vec<Coset>,
    pub dimension: u32,
    pub n: u64,
}

impl CodeSpec {
    pub fn name(&self) -> String {
        let exps: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        format!("C({})", exps.join(","))
    }
}

/// Weight -> multiplicity map with the declared dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDist {
    pub entries: BTreeMap<u64, BigInt>,
    pub dimension: u32,
    pub n: u64,
}

impl WeightDist {
    pub fn new(dimension: u32, n: u64) -> Self {
        WeightDist {
            entries: BTreeMap::new(),
            dimension,
            n,
        }
    }

    pub fn add<T: Into<BigInt>>(&mut self, weight: u64, count: T) {
        let count = count.into();
        if count.is_zero() {
            return;
        }
        *self.entries.entry(weight).or_insert_with(BigInt::zero) += count;
    }

    pub fn population(&self) -> BigInt {
        self.entries.values().sum()
    }

    /// Sum of multiplicities must be p^dimension and A_0 = 1.
    pub fn population_ok(&self, p: u64) -> bool {
        self.population() == BigInt::from(p).pow(self.dimension)
            && self.entries.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// First moment sum_i A_i * i = n (p-1) p^(dim-1); holds whenever 0 is
    /// not among the parity-check exponents.
    pub fn first_moment_ok(&self, p: u64) -> bool {
        let total: BigInt = self.entries.iter().map(|(w, c)| BigInt::from(*w) * c).sum();
        total == BigInt::from(self.n) * (p - 1) * BigInt::from(p).pow(self.dimension - 1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dimension,
            "n": self.n,
            "dist": self.entries.iter().map(|(w, c)| json!({
                "w": w,
                "count": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Validates coset disjointness and computes the true dimension.
pub fn make_code(ctx: &FieldCtx, exponents: &[u64]) -> Result<CodeSpec> {
    let mut cosets: Vec<Coset> = Vec::new();
    for &e in exponents {
        let c = ctx.coset(e % ctx.n());
        for (prev_e, prev) in exponents.iter().zip(&cosets) {
            if prev.members.iter().any(|&t| c.contains(t)) {
                return Err(Error::OverlappingCosets(*prev_e, e));
            }
        }
        cosets.push(c);
    }
    let dimension = cosets.iter().map(|c| c.len() as u32).sum();
    Ok(CodeSpec {
        exponents: exponents.to_vec(),
        cosets,
        dimension,
        n: ctx.n(),
    })
}

/// Hamming weight of the codeword for one message, by direct coordinate count.
pub fn codeword_weight(ctx: &FieldCtx, code: &CodeSpec, message: &[FieldElem]) -> u64 {
    assert_eq!(message.len(), code.exponents.len());
    let n = code.n;
    let mut weight = 0u64;
    for j in 0..n {
        let mut acc = 0u64;
        for (&a, &e) in message.iter().zip(&code.exponents) {
            if let FieldElem::Pow(i) = a {
                acc += ctx.trace_of_pow((i + mulmod(j, e, n)) % n);
            }
        }
        if acc % ctx.p() != 0 {
            weight += 1;
        }
    }
    weight
}

/// The same weight through the exponential-sum identity
/// w = p^{m-1}(p-1) - (1/p) sum_{y in GF(p)*} sum_x w^{Tr(y sum_s a_s x^{i_s})}.
pub fn codeword_weight_via_sums(
    ctx: &FieldCtx,
    code: &CodeSpec,
    message: &[FieldElem],
) -> Result<u64> {
    let p = ctx.p();
    let mut acc = CycInt::zero(p);
    for y in 1..p {
        let y_elem = ctx.scalar(y);
        let mut hist = vec![0u64; p as usize];
        // histogram over x in GF(q) of Tr(y sum_s a_s x^{i_s})
        for v in 0..ctx.q() {
            let x = ctx.elem(v);
            let mut sum = FieldElem::Zero;
            for (&a, &e) in message.iter().zip(&code.exponents) {
                sum = ctx.add(sum, ctx.mul(ctx.mul(y_elem, a), ctx.pow(x, e)));
            }
            hist[ctx.trace(sum) as usize] += 1;
        }
        acc = &acc + &CycInt::from_trace_histogram(p, &hist);
    }
    let total = acc
        .as_integer()
        .ok_or_else(|| Error::IdentityViolated("weight sum is not rational".into()))?;
    let (quot, rem) = num_integer::div_rem(total, BigInt::from(p));
    if !rem.is_zero() {
        return Err(Error::IdentityViolated(
            "weight sum is not divisible by p".into(),
        ));
    }
    let w = BigInt::from(p).pow(ctx.m() - 1) * (p - 1) - quot;
    w.try_into()
        .map_err(|_| Error::IdentityViolated("weight out of range".into()))
}

/// Per-exponent message domain. A singleton coset means pi^{i_s} lies in
/// GF(p)*, so the codeword depends on a_s only through Tr(a_s); its domain
/// collapses to the p trace values.
enum Domain {
    /// all of GF(q); coset size d contributes p^d distinct codeword parts,
    /// so the enumeration overcounts by p^(m-d)
    Full,
    /// t in GF(p) with per-position contribution t * u^j, u = pi^{i_s} in GF(p)*
    Scalar { powers: Vec<u64> },
}

/// Exact weight distribution by exhaustive enumeration of the message space.
/// Codes containing the exponent s = (q-1)/2 (or any singleton coset) are
/// enumerated over GF(q)^2 x GF(p)-style collapsed domains.
pub fn weight_distribution(ctx: &FieldCtx, code: &CodeSpec, budget: u64) -> Result<WeightDist> {
    let p = ctx.p();
    let n = code.n;
    let m = ctx.m();

    let mut domains = Vec::new();
    let mut messages: u64 = 1;
    let mut overcount: u32 = 0;
    for (s, coset) in code.cosets.iter().enumerate() {
        if coset.len() == 1 {
            let e = code.exponents[s] % ctx.n();
            let u = ctx.packed(FieldElem::Pow(e));
            assert!(u < p, "singleton coset element must lie in GF(p)");
            let mut powers = Vec::with_capacity(n as usize);
            let mut acc = 1u64;
            for _ in 0..n {
                powers.push(acc);
                acc = acc * u % p;
            }
            domains.push(Domain::Scalar { powers });
            messages = messages.saturating_mul(p);
        } else {
            domains.push(Domain::Full);
            messages = messages.saturating_mul(ctx.q());
            overcount += m - coset.len() as u32;
        }
    }
    charge(messages, budget)?;

    // per-position exponent tables for the full domains
    let pos_exp: Vec<Vec<u64>> = code
        .exponents
        .iter()
        .map(|&e| (0..n).map(|j| mulmod(j, e, n)).collect())
        .collect();

    // contribution of one domain value to every coordinate, mod p
    let contribution = |s: usize, val: u64, out: &mut [u64]| match &domains[s] {
        Domain::Full => {
            if val == 0 {
                out.fill(0);
            } else {
                let alpha = match ctx.elem(val) {
                    FieldElem::Pow(i) => i,
                    FieldElem::Zero => unreachable!(),
                };
                for (j, o) in out.iter_mut().enumerate() {
                    let mut e = alpha + pos_exp[s][j];
                    if e >= n {
                        e -= n;
                    }
                    *o = ctx.trace_of_pow(e);
                }
            }
        }
        Domain::Scalar { powers } => {
            for (j, o) in out.iter_mut().enumerate() {
                *o = val * powers[j] % p;
            }
        }
    };

    let domain_size = |s: usize| match &domains[s] {
        Domain::Full => ctx.q(),
        Domain::Scalar { .. } => p,
    };

    // recursive enumeration below the parallel top level
    fn recurse(
        depth: usize,
        t: usize,
        n: u64,
        p: u64,
        acc: &[u64],
        domain_size: &dyn Fn(usize) -> u64,
        contribution: &dyn Fn(usize, u64, &mut [u64]),
        hist: &mut BTreeMap<u64, u64>,
    ) {
        if depth == t {
            let weight = acc.iter().filter(|&&c| c % p != 0).count() as u64;
            *hist.entry(weight).or_insert(0) += 1;
            return;
        }
        let mut contrib = vec![0u64; n as usize];
        let mut next = vec![0u64; n as usize];
        for val in 0..domain_size(depth) {
            contribution(depth, val, &mut contrib);
            for (i, o) in next.iter_mut().enumerate() {
                *o = acc[i] + contrib[i];
            }
            recurse(depth + 1, t, n, p, &next, domain_size, contribution, hist);
        }
    }

    let t = code.exponents.len();
    let top = domain_size(0);
    let maps: Vec<BTreeMap<u64, u64>> = (0..top)
        .into_par_iter()
        .map(|val| {
            let mut acc = vec![0u64; n as usize];
            contribution(0, val, &mut acc);
            let mut hist = BTreeMap::new();
            recurse(1, t, n, p, &acc, &domain_size, &contribution, &mut hist);
            hist
        })
        .collect();

    let mut dist = WeightDist::new(code.dimension, n);
    for map in maps {
        for (w, c) in map {
            dist.add(w, c);
        }
    }
    if overcount > 0 {
        // every codeword was counted exactly p^overcount times
        let factor = BigInt::from(p).pow(overcount);
        for c in dist.entries.values_mut() {
            let (qt, rem) = num_integer::div_rem(c.clone(), factor.clone());
            assert!(rem.is_zero(), "overcount division must be exact");
            *c = qt;
        }
    }
    debug_assert!(dist.population_ok(p));
    Ok(dist)
}

/// Outcome of the equal-distribution test for a pair of exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquidistStatus {
    /// All hypotheses hold with this tau (2 d e = 2 p^tau mod q-1).
    Applicable { tau: u32 },
    /// d or e lies in the coset of 1 (or is 0): the statement does not apply.
    NotApplicable,
    /// No tau satisfies the congruence.
    CongruenceFailed,
    /// d + e != 2 mod 2^r where p - 1 = 2^r h.
    ParityFailed,
}

#[derive(Debug)]
pub struct EquidistOutcome {
    pub status: EquidistStatus,
    pub dist_d: Option<WeightDist>,
    pub dist_e: Option<WeightDist>,
    pub equal: Option<bool>,
}

fn equidist_status(ctx: &FieldCtx, d: u64, e: u64) -> EquidistStatus {
    let n = ctx.n();
    let gamma1 = ctx.coset(1);
    if d == 0 || e == 0 || gamma1.contains(d % n) || gamma1.contains(e % n) {
        return EquidistStatus::NotApplicable;
    }
    let tau = (0..ctx.m())
        .find(|&tau| mulmod(2, mulmod(d, e, n), n) == mulmod(2, powmod(ctx.p(), tau as u64, n), n));
    let Some(tau) = tau else {
        return EquidistStatus::CongruenceFailed;
    };
    let r = v2(ctx.p() - 1);
    let modulus = 1u64 << r;
    if (d + e) % modulus != 2 % modulus {
        return EquidistStatus::ParityFailed;
    }
    EquidistStatus::Applicable { tau }
}

/// Checks the hypotheses `2de = 2p^tau (mod q-1)` and `d + e = 2 (mod 2^r)`
/// and enumerates both weight distributions. When the hypotheses hold the
/// distributions must come out identical.
pub fn equidistribution_check(
    ctx: &FieldCtx,
    d: u64,
    e: u64,
    budget: u64,
) -> Result<EquidistOutcome> {
    let status = equidist_status(ctx, d, e);
    if status == EquidistStatus::NotApplicable {
        return Ok(EquidistOutcome {
            status,
            dist_d: None,
            dist_e: None,
            equal: None,
        });
    }
    let code_d = make_code(ctx, &[1, d])?;
    let code_e = make_code(ctx, &[1, e])?;
    let dist_d = weight_distribution(ctx, &code_d, budget)?;
    let dist_e = weight_distribution(ctx, &code_e, budget)?;
    let equal = dist_d.entries == dist_e.entries;
    Ok(EquidistOutcome {
        status,
        dist_d: Some(dist_d),
        dist_e: Some(dist_e),
        equal: Some(equal),
    })
}

/// Result of scanning all (d, e) pairs for the equal-distribution hypotheses
/// and verifying the conclusion on every satisfying pair (grouped by coset
/// representatives; each code is enumerated once).
#[derive(Debug)]
pub struct EquidistScan {
    pub pairs: u64,
    pub class_pairs: Vec<(u64, u64)>,
    pub all_equal: bool,
}

pub fn equidistribution_scan(ctx: &FieldCtx, budget: u64) -> Result<EquidistScan> {
    let n = ctx.n();
    let mut class_pairs = std::collections::BTreeSet::new();
    let mut pairs = 0u64;
    for d in 1..n {
        for e in d..n {
            if let EquidistStatus::Applicable { .. } = equidist_status(ctx, d, e) {
                pairs += 1;
                let (rd, re) = (ctx.coset(d).representative, ctx.coset(e).representative);
                class_pairs.insert((rd.min(re), rd.max(re)));
            }
        }
    }
    let reps: std::collections::BTreeSet<u64> =
        class_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    // gate the total enumeration cost, not just each code's
    charge(
        (reps.len() as u64)
            .saturating_mul(ctx.q())
            .saturating_mul(ctx.q()),
        budget,
    )?;
    let mut dists: HashMap<u64, WeightDist> = HashMap::new();
    for &rep in &reps {
        let code = make_code(ctx, &[1, rep])?;
        dists.insert(rep, weight_distribution(ctx, &code, budget)?);
    }
    let all_equal = class_pairs
        .iter()
        .all(|(a, b)| dists[a].entries == dists[b].entries);
    Ok(EquidistScan {
        pairs,
        class_pairs: class_pairs.into_iter().collect(),
        all_equal,
    })
}

/// Smallest w <= bound such that some w distinct columns of the defining
/// evaluation map are linearly dependent with all-nonzero coefficients,
/// i.e. the minimum distance of the dual code if it is <= bound.
/// Searches w = 2, 3 directly and w = 4, 5 by meet-in-the-middle.
pub fn dual_min_distance_at_most(
    ctx: &FieldCtx,
    code: &CodeSpec,
    bound: u64,
    budget: u64,
) -> Result<Option<u64>> {
    assert!((2..=5).contains(&bound), "bound must be in 2..=5");
    let n = code.n as usize;
    let p = ctx.p();
    let t = code.exponents.len();
    assert!(
        t <= 3,
        "search supports at most three parity-check exponents"
    );
    let q = ctx.q();

    // fail closed before any work: tuple counts per side and weight
    let choose =
        |n: u64, k: u64| -> u64 { (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1)) };
    let phase_cost = |w: u64| -> u64 {
        if w == 2 {
            return choose(n as u64, 2).saturating_mul(p - 1);
        }
        let (wa, wb) = (w - w / 2, w / 2);
        let a = choose(n as u64, wa).saturating_mul((p - 1).saturating_pow(wa as u32 - 1));
        let b = choose(n as u64, wb).saturating_mul((p - 1).saturating_pow(wb as u32));
        a.saturating_add(b)
    };
    let needed = (2..=bound).fold(0u64, |acc, w| acc.saturating_add(phase_cost(w)));
    charge(needed, budget)?;

    // scaled_cols[c-1][j] = packed components of c * (pi^{j i_1}, ..., pi^{j i_t})
    let mut scaled_cols = vec![vec![[0u64; 3]; n]; (p - 1) as usize];
    for (ci, row) in scaled_cols.iter_mut().enumerate() {
        let c = ctx.scalar(ci as u64 + 1);
        for (j, cell) in row.iter_mut().enumerate() {
            for (s, &e) in code.exponents.iter().enumerate() {
                let col = FieldElem::Pow(mulmod(j as u64, e, code.n));
                cell[s] = ctx.packed(ctx.mul(c, col));
            }
        }
    }
    let add3 = |a: [u64; 3], b: [u64; 3]| -> [u64; 3] {
        let mut out = [0u64; 3];
        for s in 0..t {
            out[s] = ctx.add_packed(a[s], b[s]);
        }
        out
    };
    let neg3 = |a: [u64; 3]| -> [u64; 3] {
        let mut out = [0u64; 3];
        for s in 0..t {
            out[s] = ctx.neg_packed(a[s]);
        }
        out
    };
    let key3 = |a: [u64; 3]| -> u128 {
        a[0] as u128 + a[1] as u128 * q as u128 + a[2] as u128 * (q as u128 * q as u128)
    };

    for w in 2..=bound {
        match w {
            2 => {
                // c1 = 1: column j1 must equal -(c2 column j2)
                for j1 in 0..n {
                    for j2 in j1 + 1..n {
                        for c2 in 0..(p - 1) as usize {
                            if scaled_cols[0][j1] == neg3(scaled_cols[c2][j2]) {
                                return Ok(Some(2));
                            }
                        }
                    }
                }
            }
            3 | 4 | 5 => {
                let wb = w as usize / 2; // 1, 2, 2
                let wa = w as usize - wb; // 2, 2, 3
                                          // side B: all coefficient choices, keyed by negated sum;
                                          // keep the largest min-position per key
                let mut bmap: HashMap<u128, usize> = HashMap::new();
                let mut insert = |key: u128, min_pos: usize| {
                    bmap.entry(key)
                        .and_modify(|v| *v = (*v).max(min_pos))
                        .or_insert(min_pos);
                };
                if wb == 1 {
                    for j in 0..n {
                        for c in 0..(p - 1) as usize {
                            insert(key3(neg3(scaled_cols[c][j])), j);
                        }
                    }
                } else {
                    for j1 in 0..n {
                        for j2 in j1 + 1..n {
                            for c1 in 0..(p - 1) as usize {
                                for c2 in 0..(p - 1) as usize {
                                    let sum = add3(scaled_cols[c1][j1], scaled_cols[c2][j2]);
                                    insert(key3(neg3(sum)), j1);
                                }
                            }
                        }
                    }
                }
                // side A: first coefficient fixed to 1 (global scaling);
                // the A positions are the w smallest of a solution, so a
                // match requires the B min-position to exceed max(A)
                let mut hit = false;
                if wa == 2 {
                    'outer2: for j1 in 0..n {
                        for j2 in j1 + 1..n {
                            for c2 in 0..(p - 1) as usize {
                                let sum = add3(scaled_cols[0][j1], scaled_cols[c2][j2]);
                                if let Some(&minb) = bmap.get(&key3(sum)) {
                                    if minb > j2 {
                                        hit = true;
                                        break 'outer2;
                                    }
                                }
                            }
                        }
                    }
                } else {
                    'outer3: for j1 in 0..n {
                        for j2 in j1 + 1..n {
                            let base = scaled_cols[0][j1];
                            for c2 in 0..(p - 1) as usize {
                                let part = add3(base, scaled_cols[c2][j2]);
                                for j3 in j2 + 1..n {
                                    for c3 in 0..(p - 1) as usize {
                                        let sum = add3(part, scaled_cols[c3][j3]);
                                        if let Some(&minb) = bmap.get(&key3(sum)) {
                                            if minb > j3 {
                                                hit = true;
                                                break 'outer3;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                if hit {
                    return Ok(Some(w));
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(None)
}
