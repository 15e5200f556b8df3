//! Exact arithmetic in GF(p) and GF(p^m).
//!
//! Nonzero elements are stored as discrete logarithms of a primitive element
//! `pi` (the residue of `x` modulo a primitive polynomial), so multiplication
//! and powering are index arithmetic. Addition goes through packed coefficient
//! vectors and the antilog table. The context is immutable after construction
//! and safe to share across threads.

use serde_json::{json, Value};

use crate::arith::{factor, is_prime, mulmod, powmod};
use crate::error::{Error, Result};

/// A field element: zero, or `pi^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldElem {
    Zero,
    Pow(u64),
}

impl FieldElem {
    pub fn is_zero(self) -> bool {
        matches!(self, FieldElem::Zero)
    }
}

/// Orbit of `j` under multiplication by `p` modulo `n`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub representative: u64,
    pub members: Vec<u64>,
}

impl Coset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// The p-cyclotomic coset of `j` modulo `n`.
pub fn cyclotomic_coset(p: u64, n: u64, j: u64) -> Coset {
    assert!(j < n, "coset index {j} out of range mod {n}");
    let mut members = Vec::new();
    let mut cur = j;
    loop {
        members.push(cur);
        cur = mulmod(cur, p, n);
        if cur == j {
            break;
        }
    }
    members.sort_unstable();
    Coset {
        representative: members[0],
        members,
    }
}

/// Conventional Legendre symbol of `y` modulo the odd prime `p`.
pub fn legendre(y: i64, p: u64) -> i32 {
    let r = y.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if powmod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Packed field elements are coefficient vectors read as base-p integers,
/// constant term least significant. `add_table` is only materialized for
/// small q; larger fields fall back to digitwise addition.
pub struct FieldCtx {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    antilog: Vec<u64>,
    log: Vec<u64>,
    trace_table: Vec<u64>,
    add_table: Option<Vec<u32>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

const LOG_ZERO: u64 = u64::MAX;
const ADD_TABLE_MAX_Q: u64 = 1024;

impl FieldCtx {
    /// Builds GF(p^m). Without an override the modulus is the first primitive
    /// monic polynomial in coefficient-vector order (read as a base-p integer).
    pub fn new(p: u64, m: u32, modulus_override: Option<&[u64]>) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(m >= 1, "extension degree must be at least 1");
        // the log/antilog/trace tables are O(q); refuse sizes far past desk scale
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= 10_000_000)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "q = {p}^{m} is too large for a table-based field context"
                ))
            })?;

        let modulus = match modulus_override {
            Some(f) => {
                if f.len() != m as usize + 1 || f[m as usize] != 1 || f.iter().any(|&c| c >= p) {
                    return Err(Error::Usage(format!(
                        "modulus must be monic of degree {m} with coefficients below {p}"
                    )));
                }
                if !is_primitive(p, m, q, f) {
                    return Err(Error::NotPrimitive(poly_string(f)));
                }
                f.to_vec()
            }
            None => nth_primitive_modulus(p, m, 0)?,
        };

        // antilog by repeated multiplication by x mod the modulus
        let mut antilog = Vec::with_capacity((q - 1) as usize);
        let mut digits = vec![0u64; m as usize];
        digits[0] = 1;
        for _ in 0..q - 1 {
            antilog.push(pack(p, &digits));
            mul_by_x(&mut digits, &modulus, p);
        }
        debug_assert_eq!(pack(p, &digits), 1, "pi^(q-1) must return to 1");

        let mut log = vec![LOG_ZERO; q as usize];
        for (i, &v) in antilog.iter().enumerate() {
            if log[v as usize] != LOG_ZERO {
                return Err(Error::NotPrimitive(poly_string(&modulus)));
            }
            log[v as usize] = i as u64;
        }

        let add_table = if q <= ADD_TABLE_MAX_Q {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_packed(p, m, a, b) as u32;
                }
            }
            Some(t)
        } else {
            None
        };

        // Tr(pi^i) = sum of the conjugates pi^{i p^j}; the result must be a
        // constant polynomial, i.e. an element of GF(p).
        let mut trace_table = vec![0u64; q as usize];
        for i in 0..q - 1 {
            let mut acc = 0u64;
            let mut e = i;
            for _ in 0..m {
                acc = match &add_table {
                    Some(t) => t[(acc * q + antilog[e as usize]) as usize] as u64,
                    None => add_packed(p, m, acc, antilog[e as usize]),
                };
                e = mulmod(e, p, q - 1);
            }
            debug_assert!(acc < p, "trace must land in the prime field");
            trace_table[antilog[i as usize] as usize] = acc;
        }

        Ok(FieldCtx {
            p,
            m,
            q,
            modulus,
            antilog,
            log,
            trace_table,
            add_table,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Multiplicative group order q - 1.
    pub fn n(&self) -> u64 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Element for a packed coefficient vector.
    pub fn elem(&self, packed: u64) -> FieldElem {
        if packed == 0 {
            FieldElem::Zero
        } else {
            FieldElem::Pow(self.log[packed as usize])
        }
    }

    /// Packed coefficient vector of an element.
    pub fn packed(&self, x: FieldElem) -> u64 {
        match x {
            FieldElem::Zero => 0,
            FieldElem::Pow(i) => self.antilog[i as usize],
        }
    }

    /// The scalar t mod p as a field element.
    pub fn scalar(&self, t: u64) -> FieldElem {
        self.elem(t % self.p)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::Pow(0)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match (a, b) {
            (FieldElem::Zero, x) | (x, FieldElem::Zero) => x,
            (FieldElem::Pow(i), FieldElem::Pow(j)) => {
                let s = self.add_packed(self.antilog[i as usize], self.antilog[j as usize]);
                self.elem(s)
            }
        }
    }

    #[inline]
    pub fn add_packed(&self, a: u64, b: u64) -> u64 {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize] as u64,
            None => add_packed(self.p, self.m, a, b),
        }
    }

    pub fn neg_packed(&self, a: u64) -> u64 {
        self.packed(self.neg(self.elem(a)))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match (a, b) {
            (FieldElem::Zero, _) | (_, FieldElem::Zero) => FieldElem::Zero,
            (FieldElem::Pow(i), FieldElem::Pow(j)) => FieldElem::Pow((i + j) % self.n()),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        match a {
            FieldElem::Zero => Err(Error::DivisionByZero),
            FieldElem::Pow(i) => Ok(FieldElem::Pow((self.n() - i) % self.n())),
        }
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        // -1 = pi^{(q-1)/2} since q is odd.
        self.mul(a, FieldElem::Pow(self.n() / 2))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        match a {
            FieldElem::Zero => {
                if e == 0 {
                    self.one()
                } else {
                    FieldElem::Zero
                }
            }
            FieldElem::Pow(i) => FieldElem::Pow(mulmod(i, e % self.n(), self.n())),
        }
    }

    /// Trace to GF(p), as a value in [0, p).
    pub fn trace(&self, x: FieldElem) -> u64 {
        self.trace_table[self.packed(x) as usize]
    }

    #[inline]
    pub fn trace_packed(&self, packed: u64) -> u64 {
        self.trace_table[packed as usize]
    }

    pub fn trace_of_pow(&self, i: u64) -> u64 {
        self.trace_table[self.antilog[i as usize] as usize]
    }

    /// Quadratic character: 0 on zero, +1 on squares, -1 on non-squares.
    pub fn chi(&self, x: FieldElem) -> i32 {
        match x {
            FieldElem::Zero => 0,
            FieldElem::Pow(i) => {
                if i % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn coset(&self, j: u64) -> Coset {
        cyclotomic_coset(self.p, self.n(), j)
    }

    /// Minimal polynomial of pi^{-i} over GF(p), little-endian and monic.
    pub fn minimal_polynomial(&self, i: u64) -> Vec<u64> {
        assert!(i < self.q - 1);
        let n = self.n();
        // roots are pi^{-i p^j} for i p^j running over the coset of i
        let mut poly = vec![self.one()];
        for &t in &self.coset(i).members {
            let root = FieldElem::Pow((n - t) % n);
            // poly *= (x - root)
            let mut next = vec![FieldElem::Zero; poly.len() + 1];
            let neg_root = self.neg(root);
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] = self.add(next[d + 1], c);
                next[d] = self.add(next[d], self.mul(c, neg_root));
            }
            poly = next;
        }
        poly.iter()
            .map(|&c| {
                let v = self.packed(c);
                assert!(v < self.p, "minimal polynomial coefficient not in GF(p)");
                v
            })
            .collect()
    }

    /// JSON descriptor used for report provenance.
    pub fn descriptor(&self) -> Value {
        json!({
            "p": self.p,
            "m": self.m,
            "modulus": self.modulus,
            "primitive": true,
        })
    }
}

/// The (skip+1)-th primitive monic polynomial of degree m in canonical order.
pub fn nth_primitive_modulus(p: u64, m: u32, skip: usize) -> Result<Vec<u64>> {
    let q = p
        .checked_pow(m)
        .ok_or_else(|| Error::Usage(format!("q = {p}^{m} exceeds the supported range")))?;
    let mut remaining = skip;
    let mut digits = vec![0u64; m as usize];
    for _ in 0..q {
        let mut f = digits.clone();
        f.push(1);
        if is_primitive(p, m, q, &f) {
            if remaining == 0 {
                return Ok(f);
            }
            remaining -= 1;
        }
        // next coefficient vector in base-p order
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    Err(Error::NotPrimitive(format!(
        "no primitive polynomial of degree {m} over GF({p}) past index {skip}"
    )))
}

/// x generates the multiplicative group iff x^(q-1) = 1 and x^((q-1)/l) != 1
/// for every prime l dividing q-1.
fn is_primitive(p: u64, m: u32, q: u64, modulus: &[u64]) -> bool {
    let x = if m == 1 {
        // residue of x mod (x + c0) is -c0
        vec![(p - modulus[0] % p) % p]
    } else {
        let mut v = vec![0u64; m as usize];
        v[1] = 1;
        v
    };
    if x.iter().all(|&c| c == 0) {
        return false;
    }
    let one = {
        let mut v = vec![0u64; m as usize];
        v[0] = 1;
        v
    };
    if poly_powmod(&x, q - 1, modulus, p) != one {
        return false;
    }
    factor(q - 1)
        .into_iter()
        .all(|(l, _)| poly_powmod(&x, (q - 1) / l, modulus, p) != one)
}

pub(crate) fn pack(p: u64, digits: &[u64]) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

pub(crate) fn unpack(p: u64, m: u32, mut v: u64) -> Vec<u64> {
    let mut digits = vec![0u64; m as usize];
    for d in digits.iter_mut() {
        *d = v % p;
        v /= p;
    }
    digits
}

fn add_packed(p: u64, m: u32, a: u64, b: u64) -> u64 {
    let (da, db) = (unpack(p, m, a), unpack(p, m, b));
    let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    pack(p, &sum)
}

/// Multiply a residue (length-m digit vector) by x modulo the monic modulus.
fn mul_by_x(digits: &mut [u64], modulus: &[u64], p: u64) {
    let m = modulus.len() - 1;
    let top = digits[m - 1];
    for i in (1..m).rev() {
        digits[i] = digits[i - 1];
    }
    digits[0] = 0;
    if top != 0 {
        for i in 0..m {
            digits[i] = (digits[i] + (p - modulus[i]) % p * top) % p;
        }
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (m..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &f) in modulus.iter().enumerate().take(m) {
            let idx = d - m + i;
            prod[idx] = (prod[idx] + (p - f) % p * c) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn poly_powmod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut acc = vec![0u64; m];
    acc[0] = 1;
    let mut b = base.to_vec();
    b.resize(m, 0);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

fn poly_string(f: &[u64]) -> String {
    let terms: Vec<String> = f
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(d, &c)| match d {
            0 => format!("{c}"),
            1 if c == 1 => "x".into(),
            1 => format!("{c}x"),
            _ if c == 1 => format!("x^{d}"),
            _ => format!("{c}x^{d}"),
        })
        .collect();
    terms.join(" + ")
}
